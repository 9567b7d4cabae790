//! The exact scalar tower: arbitrary-precision rationals, univariate
//! polynomials in t over the rationals, and rational functions in t. Every
//! value is kept in a canonical form (denominators positive, polynomials with
//! no trailing zeros, rational-function denominators monic and gcd-reduced),
//! so equality is structural.

use crate::error::{Error, Result};
use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// Univariate polynomial over Q, coefficients ascending, no trailing zeros
/// (zero is the empty coefficient list).
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Poly {
    coeffs: Vec<BigRational>,
}

impl Poly {
    pub fn from_coeffs(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: vec![] }
    }

    pub fn constant(c: BigRational) -> Self {
        Poly::from_coeffs(vec![c])
    }

    pub fn one() -> Self {
        Poly::constant(BigRational::one())
    }

    /// The variable t.
    pub fn t() -> Self {
        Poly {
            coeffs: vec![BigRational::zero(), BigRational::one()],
        }
    }

    pub fn t_pow(d: usize) -> Self {
        let mut coeffs = vec![BigRational::zero(); d + 1];
        coeffs[d] = BigRational::one();
        Poly { coeffs }
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// None for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&BigRational> {
        self.coeffs.last()
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn scale(&self, c: &BigRational) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    pub fn monic(&self) -> Poly {
        match self.leading() {
            None => Poly::zero(),
            Some(l) => self.scale(&l.recip()),
        }
    }

    /// Euclidean division; errors on a zero divisor.
    pub fn div_rem(&self, divisor: &Poly) -> Result<(Poly, Poly)> {
        if divisor.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let dd = divisor.degree().unwrap();
        let lead = divisor.leading().unwrap().clone();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![BigRational::zero(); self.coeffs.len().saturating_sub(dd)];
        while rem.len() > dd {
            let k = rem.len() - 1 - dd;
            let q = rem.last().unwrap() / &lead;
            if !q.is_zero() {
                for (i, c) in divisor.coeffs.iter().enumerate() {
                    rem[k + i] = &rem[k + i] - &(c * &q);
                }
                quot[k] = q;
            }
            rem.pop();
        }
        Ok((Poly::from_coeffs(quot), Poly::from_coeffs(rem)))
    }

    /// Exact division; panics if the division leaves a remainder.
    pub fn exact_div(&self, divisor: &Poly) -> Poly {
        let (q, r) = self.div_rem(divisor).expect("nonzero divisor");
        assert!(r.is_zero(), "inexact polynomial division");
        q
    }

    /// Monic gcd by the Euclidean algorithm.
    pub fn gcd(&self, other: &Poly) -> Poly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b).unwrap();
            a = b;
            b = r;
        }
        a.monic()
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut coeffs = Vec::with_capacity(n);
        for i in 0..n {
            let a = self.coeffs.get(i).cloned().unwrap_or_else(BigRational::zero);
            let b = rhs.coeffs.get(i).cloned().unwrap_or_else(BigRational::zero);
            coeffs.push(a + b);
        }
        Poly::from_coeffs(coeffs)
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self + &(-rhs)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut coeffs =
            vec![BigRational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] = &coeffs[i + j] + &(a * b);
            }
        }
        Poly::from_coeffs(coeffs)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " {} ", if c.is_negative() { "-" } else { "+" })?;
            } else if c.is_negative() {
                write!(f, "-")?;
            }
            let a = c.abs();
            match i {
                0 => write!(f, "{a}")?,
                _ => {
                    if !a.is_one() {
                        write!(f, "{a}*")?;
                    }
                    if i == 1 {
                        write!(f, "t")?;
                    } else {
                        write!(f, "t^{i}")?;
                    }
                }
            }
            first = false;
        }
        Ok(())
    }
}

/// An exact element of the tower Q ⊂ Q[t] ⊂ Q(t), always held at the lowest
/// sufficient level: the Poly variant has degree ≥ 1 and the RatFun variant
/// has a monic denominator of degree ≥ 1 coprime to the numerator.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Scalar {
    Rational(BigRational),
    Poly(Poly),
    RatFun(Poly, Poly),
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar::Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Scalar::Rational(BigRational::one())
    }

    pub fn from_int(n: i64) -> Self {
        Scalar::Rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_rational(r: BigRational) -> Self {
        Scalar::Rational(r)
    }

    pub fn ratio(num: i64, den: i64) -> Self {
        Scalar::Rational(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn t() -> Self {
        Scalar::Poly(Poly::t())
    }

    pub fn t_pow(d: usize) -> Self {
        if d == 0 {
            Scalar::one()
        } else {
            Scalar::Poly(Poly::t_pow(d))
        }
    }

    /// Canonicalizes a numerator/denominator pair into the smallest tower
    /// level. Errors on a zero denominator.
    pub fn from_fraction(num: Poly, den: Poly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(Scalar::zero());
        }
        let g = num.gcd(&den);
        let num = num.exact_div(&g);
        let den = den.exact_div(&g);
        let lead = den.leading().unwrap().clone();
        let num = num.scale(&lead.recip());
        let den = den.monic();
        Ok(if den.degree() == Some(0) {
            Scalar::from_poly(num)
        } else {
            Scalar::RatFun(num, den)
        })
    }

    pub fn from_poly(p: Poly) -> Self {
        match p.degree() {
            None => Scalar::zero(),
            Some(0) => Scalar::Rational(p.coeffs()[0].clone()),
            _ => Scalar::Poly(p),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Scalar::Rational(r) if r.is_zero())
    }

    pub fn is_one(&self) -> bool {
        matches!(self, Scalar::Rational(r) if r.is_one())
    }

    /// True when the value lies in Q[t] (no genuine denominator).
    pub fn is_polynomial(&self) -> bool {
        !matches!(self, Scalar::RatFun(..))
    }

    /// True when the value lies in Q.
    pub fn is_rational(&self) -> bool {
        matches!(self, Scalar::Rational(_))
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Scalar::Rational(r) => Some(r),
            _ => None,
        }
    }

    /// The value as a numerator/denominator pair of polynomials.
    pub fn to_fraction(&self) -> (Poly, Poly) {
        match self {
            Scalar::Rational(r) => (Poly::constant(r.clone()), Poly::one()),
            Scalar::Poly(p) => (p.clone(), Poly::one()),
            Scalar::RatFun(n, d) => (n.clone(), d.clone()),
        }
    }

    pub fn as_poly(&self) -> Option<Poly> {
        match self {
            Scalar::Rational(r) => Some(Poly::constant(r.clone())),
            Scalar::Poly(p) => Some(p.clone()),
            Scalar::RatFun(..) => None,
        }
    }

    pub fn checked_div(&self, rhs: &Scalar) -> Result<Scalar> {
        if rhs.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let (an, ad) = self.to_fraction();
        let (bn, bd) = rhs.to_fraction();
        Scalar::from_fraction(&an * &bd, &ad * &bn)
    }

    pub fn recip(&self) -> Result<Scalar> {
        Scalar::one().checked_div(self)
    }

    pub fn pow(&self, e: u32) -> Scalar {
        let mut acc = Scalar::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// The evaluation homomorphism t := t0. Errors at a pole.
    pub fn evaluate(&self, t0: &BigRational) -> Result<BigRational> {
        match self {
            Scalar::Rational(r) => Ok(r.clone()),
            Scalar::Poly(p) => Ok(p.eval(t0)),
            Scalar::RatFun(n, d) => {
                let dv = d.eval(t0);
                if dv.is_zero() {
                    return Err(Error::Pole(t0.to_string()));
                }
                Ok(n.eval(t0) / dv)
            }
        }
    }
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a + b),
            _ => {
                let (an, ad) = self.to_fraction();
                let (bn, bd) = rhs.to_fraction();
                Scalar::from_fraction(&(&an * &bd) + &(&bn * &ad), &ad * &bd).unwrap()
            }
        }
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        self + &(-rhs)
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Rational(r) => Scalar::Rational(-r),
            Scalar::Poly(p) => Scalar::Poly(-p),
            Scalar::RatFun(n, d) => Scalar::RatFun(-n, d.clone()),
        }
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a * b),
            _ => {
                let (an, ad) = self.to_fraction();
                let (bn, bd) = rhs.to_fraction();
                Scalar::from_fraction(&an * &bn, &ad * &bd).unwrap()
            }
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(r) => write!(f, "{r}"),
            Scalar::Poly(p) => write!(f, "{p}"),
            Scalar::RatFun(n, d) => write!(f, "({n}) / ({d})"),
        }
    }
}

/// Unique polynomial of degree ≤ degree_bound through the points, by Newton
/// divided differences on the first degree_bound+1 points; any extra points
/// must be consistent or the caller's degree bound is wrong.
pub fn interpolate(
    points: &[(BigRational, BigRational)],
    degree_bound: usize,
) -> Result<Poly> {
    if points.len() < degree_bound + 1 {
        return Err(Error::Invalid(format!(
            "need {} points for degree bound {degree_bound}, got {}",
            degree_bound + 1,
            points.len()
        )));
    }
    for (i, (xi, _)) in points.iter().enumerate() {
        for (xj, _) in &points[..i] {
            if xi == xj {
                return Err(Error::Invalid(format!("repeated abscissa {xi}")));
            }
        }
    }
    let base = &points[..degree_bound + 1];
    // divided-difference table
    let mut table: Vec<BigRational> = base.iter().map(|(_, y)| y.clone()).collect();
    let mut coeffs = vec![table[0].clone()];
    for level in 1..base.len() {
        for i in 0..base.len() - level {
            let dx = &base[i + level].0 - &base[i].0;
            table[i] = (&table[i + 1] - &table[i]) / dx;
        }
        coeffs.push(table[0].clone());
    }
    // expand Newton form into the monomial basis
    let mut poly = Poly::zero();
    let mut basis = Poly::one();
    for (i, c) in coeffs.iter().enumerate() {
        poly = &poly + &basis.scale(c);
        if i < coeffs.len() - 1 {
            let shift = Poly::from_coeffs(vec![-&base[i].0, BigRational::one()]);
            basis = &basis * &shift;
        }
    }
    for (x, y) in points {
        if &poly.eval(x) != y {
            return Err(Error::InconsistentPoints);
        }
    }
    Ok(poly)
}

// ---- JSON wire formats -------------------------------------------------
// Rational: {"num": "...", "den": "..."} with decimal strings; Poly:
// {"coeffs": [Rational, …]} ascending; RatFun: {"num": Poly, "den": Poly}.

#[derive(Serialize, Deserialize)]
struct RationalJson {
    num: String,
    den: String,
}

#[derive(Serialize, Deserialize)]
struct PolyJson {
    coeffs: Vec<RationalJson>,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum ScalarJson {
    Rational(RationalJson),
    RatFun { num: PolyJson, den: PolyJson },
    Poly(PolyJson),
}

fn rational_to_json(r: &BigRational) -> RationalJson {
    RationalJson {
        num: r.numer().to_string(),
        den: r.denom().to_string(),
    }
}

fn rational_from_json(j: &RationalJson) -> Result<BigRational> {
    let num: BigInt = j
        .num
        .parse()
        .map_err(|_| Error::Invalid(format!("bad integer {:?}", j.num)))?;
    let den: BigInt = j
        .den
        .parse()
        .map_err(|_| Error::Invalid(format!("bad integer {:?}", j.den)))?;
    if den.is_zero() {
        return Err(Error::DivisionByZero);
    }
    Ok(BigRational::new(num, den))
}

fn poly_to_json(p: &Poly) -> PolyJson {
    PolyJson {
        coeffs: p.coeffs().iter().map(rational_to_json).collect(),
    }
}

fn poly_from_json(j: &PolyJson) -> Result<Poly> {
    Ok(Poly::from_coeffs(
        j.coeffs
            .iter()
            .map(rational_from_json)
            .collect::<Result<_>>()?,
    ))
}

impl Serialize for Scalar {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let j = match self {
            Scalar::Rational(r) => ScalarJson::Rational(rational_to_json(r)),
            Scalar::Poly(p) => ScalarJson::Poly(poly_to_json(p)),
            Scalar::RatFun(n, d) => ScalarJson::RatFun {
                num: poly_to_json(n),
                den: poly_to_json(d),
            },
        };
        j.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Scalar {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = ScalarJson::deserialize(d)?;
        let out = match &j {
            ScalarJson::Rational(r) => {
                rational_from_json(r).map(Scalar::Rational)
            }
            ScalarJson::Poly(p) => poly_from_json(p).map(Scalar::from_poly),
            ScalarJson::RatFun { num, den } => {
                let num = poly_from_json(num).map_err(serde::de::Error::custom)?;
                let den = poly_from_json(den).map_err(serde::de::Error::custom)?;
                Scalar::from_fraction(num, den)
            }
        };
        out.map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn arithmetic_examples() {
        let t = Scalar::t();
        assert_eq!(&t * &t, Scalar::t_pow(2));
        let t2_minus_t = &Scalar::t_pow(2) - &t;
        let t_minus_1 = &t - &Scalar::one();
        assert_eq!(t2_minus_t.checked_div(&t_minus_1).unwrap(), t);
        assert_eq!(&Scalar::ratio(1, 2) + &Scalar::ratio(1, 3), Scalar::ratio(5, 6));
        assert!(t.checked_div(&Scalar::zero()).is_err());
    }

    #[test]
    fn evaluate_examples() {
        let t2_minus_t = &Scalar::t_pow(2) - &Scalar::t();
        assert_eq!(t2_minus_t.evaluate(&rat(3, 1)).unwrap(), rat(6, 1));
        assert_eq!(Scalar::t().evaluate(&rat(7, 2)).unwrap(), rat(7, 2));
        let half = t2_minus_t.checked_div(&Scalar::from_int(2)).unwrap();
        // |S_5/(S_2 x S_3)| = 10
        assert_eq!(half.evaluate(&rat(5, 1)).unwrap(), rat(10, 1));
    }

    #[test]
    fn evaluate_pole() {
        let f = Scalar::one()
            .checked_div(&(&Scalar::t() - &Scalar::one()))
            .unwrap();
        assert!(matches!(f, Scalar::RatFun(..)));
        assert!(f.evaluate(&rat(1, 1)).is_err());
        assert_eq!(f.evaluate(&rat(3, 1)).unwrap(), rat(1, 2));
    }

    #[test]
    fn canonical_demotion() {
        // (t^2 - 1)/(t - 1) collapses into Q[t], then (t+1)/(t+1) into Q
        let n = Poly::from_coeffs(vec![rat(-1, 1), rat(0, 1), rat(1, 1)]);
        let d = Poly::from_coeffs(vec![rat(-1, 1), rat(1, 1)]);
        let s = Scalar::from_fraction(n, d).unwrap();
        assert_eq!(s, &Scalar::t() + &Scalar::one());
        let u = s.checked_div(&s).unwrap();
        assert_eq!(u, Scalar::one());
        assert!(u.is_rational());
    }

    /// Independent Lagrange-formula oracle.
    fn lagrange_eval(
        points: &[(BigRational, BigRational)],
        x: &BigRational,
    ) -> BigRational {
        let mut acc = BigRational::zero();
        for (i, (xi, yi)) in points.iter().enumerate() {
            let mut term = yi.clone();
            for (j, (xj, _)) in points.iter().enumerate() {
                if i != j {
                    term = term * (x - xj) / (xi - xj);
                }
            }
            acc += term;
        }
        acc
    }

    #[test]
    fn interpolate_against_lagrange_oracle() {
        let pts: Vec<(BigRational, BigRational)> = [(0, 0), (1, 0), (2, 2), (3, 6)]
            .iter()
            .map(|&(x, y)| (rat(x, 1), rat(y, 1)))
            .collect();
        let p = interpolate(&pts, 2).unwrap();
        let expected = Poly::from_coeffs(vec![rat(0, 1), rat(-1, 1), rat(1, 1)]);
        assert_eq!(p, expected, "t^2 - t");
        for x in -3..6 {
            assert_eq!(p.eval(&rat(x, 1)), lagrange_eval(&pts[..3], &rat(x, 1)));
        }

        let single = interpolate(&[(rat(5, 1), rat(7, 1))], 0).unwrap();
        assert_eq!(single, Poly::constant(rat(7, 1)));

        let bad = [(rat(0, 1), rat(0, 1)), (rat(1, 1), rat(1, 1)), (rat(2, 1), rat(3, 1))];
        assert!(matches!(interpolate(&bad, 1), Err(Error::InconsistentPoints)));
    }

    #[test]
    fn json_round_trip_shapes() {
        let r = Scalar::ratio(-3, 7);
        assert_eq!(serde_json::to_string(&r).unwrap(), r#"{"num":"-3","den":"7"}"#);
        let p = &Scalar::t_pow(2) - &Scalar::t();
        let f = p.checked_div(&(&Scalar::t() - &Scalar::from_int(2))).unwrap();
        for s in [r, p, f] {
            let text = serde_json::to_string(&s).unwrap();
            let back: Scalar = serde_json::from_str(&text).unwrap();
            assert_eq!(back, s);
        }
    }

    fn arb_scalar() -> impl Strategy<Value = Scalar> {
        let rational = (-20i64..20, 1i64..6).prop_map(|(n, d)| Scalar::ratio(n, d));
        let poly = proptest::collection::vec(-5i64..6, 0..4).prop_map(|cs| {
            Scalar::from_poly(Poly::from_coeffs(
                cs.into_iter().map(|c| rat(c, 1)).collect(),
            ))
        });
        prop_oneof![rational, poly]
    }

    proptest! {
        #[test]
        fn evaluation_is_a_ring_homomorphism(
            a in arb_scalar(),
            b in arb_scalar(),
            x in -10i64..10,
        ) {
            let x = rat(x, 1);
            let sum = (&a + &b).evaluate(&x).unwrap();
            prop_assert_eq!(sum, a.evaluate(&x).unwrap() + b.evaluate(&x).unwrap());
            let prod = (&a * &b).evaluate(&x).unwrap();
            prop_assert_eq!(prod, a.evaluate(&x).unwrap() * b.evaluate(&x).unwrap());
        }

        #[test]
        fn ratfun_equality_agrees_with_cross_multiplication(
            a in arb_scalar(),
            b in arb_scalar(),
            c in arb_scalar(),
        ) {
            prop_assume!(!c.is_zero());
            let ac = a.checked_div(&c).unwrap();
            let bc = b.checked_div(&c).unwrap();
            let (an, ad) = ac.to_fraction();
            let (bn, bd) = bc.to_fraction();
            prop_assert_eq!(ac == bc, &an * &bd == &bn * &ad);
        }
    }
}
