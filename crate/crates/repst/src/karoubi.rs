//! Objects of the idempotent completion: images of symbolically idempotent
//! endomorphisms of tensor powers of the generating object, together with
//! hom-space bases, categorical dimensions, split-mono certificates, and
//! level bounds.

use crate::config::limits;
use crate::diagrams::{enumerate_diagrams, Diagram, Morphism};
use crate::error::{Error, Result};
use crate::linalg::{Matrix, SpanBasis};
use crate::partitions::bell;
use crate::scalars::Scalar;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// An object of the completed category: the image of `idem` inside the
/// `ambient`-th tensor power of the generating object. Idempotency is
/// verified symbolically at construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KObject {
    ambient: usize,
    idem: Morphism,
}

impl KObject {
    pub fn new(ambient: usize, idem: Morphism) -> Result<Self> {
        if idem.dom() != ambient || idem.cod() != ambient {
            return Err(Error::BoundaryMismatch {
                expected: ambient,
                got: idem.dom().max(idem.cod()),
            });
        }
        if idem.compose(&idem)? != idem {
            return Err(Error::Invalid("endomorphism is not idempotent".into()));
        }
        Ok(KObject { ambient, idem })
    }

    /// The monoidal unit ([0], id).
    pub fn unit_object() -> Self {
        KObject {
            ambient: 0,
            idem: Morphism::identity(0),
        }
    }

    /// The full tensor power ([k], id); k = 1 is the generating object.
    pub fn full(k: usize) -> Self {
        KObject {
            ambient: k,
            idem: Morphism::identity(k),
        }
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn idem(&self) -> &Morphism {
        &self.idem
    }

    /// Categorical dimension: the closure trace of the idempotent; always a
    /// polynomial in t.
    pub fn dimension_poly(&self) -> Scalar {
        self.idem.closure_trace().expect("endomorphism closes")
    }
}

#[derive(Serialize, Deserialize)]
struct KObjectJson {
    ambient: usize,
    idem: Morphism,
}

impl Serialize for KObject {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        KObjectJson {
            ambient: self.ambient,
            idem: self.idem.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for KObject {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = KObjectJson::deserialize(d)?;
        KObject::new(raw.ambient, raw.idem).map_err(serde::de::Error::custom)
    }
}

fn check_bell_limit(points: usize) -> Result<()> {
    if bell(points) > limits().bell_hom {
        return Err(Error::LimitExceeded(format!(
            "hom basis Bell({points}) = {} exceeds limit {}",
            bell(points),
            limits().bell_hom
        )));
    }
    Ok(())
}

/// The diagram basis of the ambient hom space, with an index for coordinate
/// vectors.
pub(crate) fn diagram_index(a: usize, b: usize) -> Result<(Vec<Diagram>, BTreeMap<Diagram, usize>)> {
    check_bell_limit(a + b)?;
    let diagrams = enumerate_diagrams(a, b)?;
    let index = diagrams
        .iter()
        .cloned()
        .enumerate()
        .map(|(i, d)| (d, i))
        .collect();
    Ok((diagrams, index))
}

pub(crate) fn morphism_coords(
    m: &Morphism,
    index: &BTreeMap<Diagram, usize>,
) -> Vec<Scalar> {
    let mut v = vec![Scalar::zero(); index.len()];
    for (d, c) in m.terms() {
        v[index[d]] = c.clone();
    }
    v
}

/// A maximal independent family spanning Hom(X, Y) = idem_Y ∘ Hom ∘ idem_X,
/// together with its dimension over Q(t).
pub fn hom_space(x: &KObject, y: &KObject) -> Result<(Vec<Morphism>, usize)> {
    let (diagrams, index) = diagram_index(x.ambient, y.ambient)?;
    let mut span = SpanBasis::new(index.len());
    let mut basis = vec![];
    for g in diagrams {
        let m = y
            .idem
            .compose(&Morphism::from_diagram(g))?
            .compose(&x.idem)?;
        if m.is_zero() {
            continue;
        }
        if span.insert(&morphism_coords(&m, &index)) {
            basis.push(m);
        }
    }
    let rank = span.rank();
    Ok((basis, rank))
}

/// A retraction v with v∘u = idem_X certifying that u: X → Y is split mono,
/// or None. The returned certificate is re-verified symbolically.
pub fn is_split_mono(u: &Morphism, x: &KObject, y: &KObject) -> Result<Option<Morphism>> {
    let normalized = y.idem.compose(u)?.compose(&x.idem)?;
    if normalized != *u {
        return Err(Error::Invalid(
            "candidate does not live in Hom(X, Y)".into(),
        ));
    }
    let (back_basis, _) = hom_space(y, x)?;
    if back_basis.is_empty() {
        return Ok(None);
    }
    let (_, end_index) = diagram_index(x.ambient, x.ambient)?;
    let cols: Vec<Vec<Scalar>> = back_basis
        .iter()
        .map(|b| Ok(morphism_coords(&b.compose(u)?, &end_index)))
        .collect::<Result<_>>()?;
    let a = Matrix::from_columns(cols)?;
    let target = morphism_coords(&x.idem, &end_index);
    let Some(coeffs) = a.solve(&target) else {
        return Ok(None);
    };
    let mut v = Morphism::zero(y.ambient, x.ambient);
    for (b, c) in back_basis.iter().zip(&coeffs) {
        v = v.add(&b.scale(c))?;
    }
    // re-verify the certificate
    if v.compose(u)? != x.idem {
        return Err(Error::Invalid("retraction certificate failed re-check".into()));
    }
    Ok(Some(v))
}

/// One-sided emptiness certificate: true means no u: X → ([k′], id) with a
/// retraction exists, proven by idem_X lying outside the span of all
/// composites v∘u over hom-basis pairs. False means the linear test is
/// inconclusive (an embedding may or may not exist).
pub fn certify_no_embedding(x: &KObject, k_prime: usize) -> Result<bool> {
    let y = KObject::full(k_prime);
    let (fwd, _) = hom_space(x, &y)?;
    let (back, _) = hom_space(&y, x)?;
    let (_, end_index) = diagram_index(x.ambient, x.ambient)?;
    let mut span = SpanBasis::new(end_index.len());
    for u in &fwd {
        for v in &back {
            span.insert(&morphism_coords(&v.compose(u)?, &end_index));
        }
    }
    Ok(!span.contains(&morphism_coords(&x.idem, &end_index)))
}

#[derive(Clone, Debug)]
pub struct LevelBound {
    /// Least k′ at which a certified split mono into h^{⊗k′} was found.
    pub level: usize,
    pub embedding: Morphism,
    pub retraction: Morphism,
    /// Levels below `level` where emptiness was proven outright.
    pub certified_empty_below: Vec<usize>,
    /// Levels below `level` where the randomized search failed without an
    /// emptiness proof; the result is then only an upper bound.
    pub unresolved_below: Vec<usize>,
}

/// Searches k′ = 0, 1, … for a split mono X ↪ h^{⊗k′}, with randomized
/// candidates certified by a deterministic retraction solve. Guaranteed to
/// terminate at k′ = ambient, where the idempotent itself embeds.
pub fn level_upper_bound(x: &KObject, seed: u64) -> Result<LevelBound> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut certified_empty_below = vec![];
    let mut unresolved_below = vec![];
    for k_prime in 0..=x.ambient {
        if k_prime == x.ambient {
            // the inclusion of the image always splits through its ambient
            let u = x.idem.clone();
            let v = is_split_mono(&u, x, &KObject::full(k_prime))?
                .ok_or_else(|| Error::Invalid("idempotent failed to split itself".into()))?;
            return Ok(LevelBound {
                level: k_prime,
                embedding: u,
                retraction: v,
                certified_empty_below,
                unresolved_below,
            });
        }
        let y = KObject::full(k_prime);
        let (fwd, _) = hom_space(x, &y)?;
        if !fwd.is_empty() {
            for _ in 0..limits().retraction_attempts {
                let mut u = Morphism::zero(x.ambient, k_prime);
                for b in &fwd {
                    let c = Scalar::from_int(rng.gen_range(-4i64..=4));
                    u = u.add(&b.scale(&c))?;
                }
                if u.is_zero() {
                    continue;
                }
                if let Some(v) = is_split_mono(&u, x, &y)? {
                    return Ok(LevelBound {
                        level: k_prime,
                        embedding: u,
                        retraction: v,
                        certified_empty_below,
                        unresolved_below,
                    });
                }
            }
        }
        if certify_no_embedding(x, k_prime)? {
            certified_empty_below.push(k_prime);
        } else {
            unresolved_below.push(k_prime);
        }
    }
    unreachable!("the ambient level always certifies")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebras::distinct_idempotent;
    use crate::diagrams::frobenius_generators;
    use crate::fiber;
    use crate::partitions::SetPartition;
    use num::bigint::BigInt;
    use num::rational::BigRational;

    fn h() -> KObject {
        KObject::full(1)
    }

    fn d_morphism() -> Morphism {
        let p = SetPartition::new(2, vec![vec![0], vec![1]]).unwrap();
        Morphism::from_diagram(Diagram::new(1, 1, p).unwrap())
    }

    #[test]
    fn idempotency_is_enforced() {
        assert!(KObject::new(1, Morphism::identity(1)).is_ok());
        // D is not idempotent (D∘D = t·D)
        assert!(KObject::new(1, d_morphism()).is_err());
        // but D/t is
        let e = d_morphism().scale(&Scalar::t().recip().unwrap());
        assert!(KObject::new(1, e).is_ok());
    }

    #[test]
    fn hom_space_dimensions() {
        let (basis, dim) = hom_space(&h(), &h()).unwrap();
        assert_eq!(dim, 2);
        assert_eq!(basis.len(), 2);
        let (_, dim01) = hom_space(&KObject::unit_object(), &h()).unwrap();
        assert_eq!(dim01, 1);
        // End of the distinct-pair object
        let e2 = KObject::new(2, distinct_idempotent(2).unwrap()).unwrap();
        // set partitions of the four boundary points keeping both the domain
        // pair and the codomain pair separated: 15 − 5 − 5 + 2 = 7
        let (_, dim_e2) = hom_space(&e2, &e2).unwrap();
        assert_eq!(dim_e2, 7);
        // fiber oracle: dim End = dim of the commutant at n = 5, 6, computed
        // as the rank of honest matrices idem∘g∘idem over all diagrams g
        for n in [5usize, 6] {
            let idem_fib = fiber::fiber_morphism(e2.idem(), n).unwrap();
            let mut span = SpanBasis::new(n.pow(4));
            for g in enumerate_diagrams(2, 2).unwrap() {
                let m = idem_fib
                    .matmul(&fiber::fiber_diagram(&g, n).unwrap())
                    .unwrap()
                    .matmul(&idem_fib)
                    .unwrap();
                let flat: Vec<Scalar> = (0..n * n)
                    .flat_map(|r| {
                        (0..n * n)
                            .map(move |c| (r, c))
                    })
                    .map(|(r, c)| Scalar::from_rational(m.entry(r, c)))
                    .collect();
                span.insert(&flat);
            }
            assert_eq!(span.rank(), 7, "fiber End dimension at n = {n}");
        }
    }

    #[test]
    fn dimension_polynomials() {
        assert_eq!(h().dimension_poly(), Scalar::t());
        assert_eq!(KObject::full(3).dimension_poly(), Scalar::t_pow(3));
        let e2 = KObject::new(2, distinct_idempotent(2).unwrap()).unwrap();
        assert_eq!(
            e2.dimension_poly(),
            &Scalar::t_pow(2) - &Scalar::t()
        );
        // fiber oracle: trace of the fibered idempotent equals the
        // polynomial at t = n
        for n in 0..=4usize {
            let tr = fiber::fiber_morphism(e2.idem(), n.max(1))
                .unwrap()
                .trace()
                .unwrap();
            if n >= 1 {
                let t0 = BigRational::from_integer(BigInt::from(n as i64));
                assert_eq!(tr, e2.dimension_poly().evaluate(&t0).unwrap());
            }
        }
    }

    #[test]
    fn end_gram_determinant() {
        // Gram matrix of End(h) basis {id, D} under the closure pairing
        let basis = [Morphism::identity(1), d_morphism()];
        let gram: Vec<Vec<Scalar>> = basis
            .iter()
            .map(|f| {
                basis
                    .iter()
                    .map(|g| f.compose(g).unwrap().closure_trace().unwrap())
                    .collect()
            })
            .collect();
        let m = Matrix::from_rows(gram.clone()).unwrap();
        let det = m.det().unwrap();
        let expected = &Scalar::t_pow(3) - &Scalar::t_pow(2);
        assert_eq!(det, expected);
        // fiber cross-check at t = n: honest traces of the matrix products
        for n in 2..=5usize {
            let fm: Vec<fiber::FiberMatrix> = basis
                .iter()
                .map(|b| fiber::fiber_morphism(b, n).unwrap())
                .collect();
            let t0 = BigRational::from_integer(BigInt::from(n as i64));
            for (i, fi) in fm.iter().enumerate() {
                for (j, fj) in fm.iter().enumerate() {
                    assert_eq!(
                        fi.matmul(fj).unwrap().trace().unwrap(),
                        gram[i][j].evaluate(&t0).unwrap()
                    );
                }
            }
        }
    }

    #[test]
    fn split_mono_certificates() {
        let x = h();
        // the idempotent splits itself
        let v = is_split_mono(&Morphism::identity(1), &x, &x).unwrap().unwrap();
        assert_eq!(v, Morphism::identity(1));
        let e2 = KObject::new(2, distinct_idempotent(2).unwrap()).unwrap();
        let incl = e2.idem().clone();
        let r = is_split_mono(&incl, &e2, &KObject::full(2)).unwrap().unwrap();
        assert_eq!(r.compose(&incl).unwrap(), *e2.idem());
        // η: 1 → h retracts by ε/t
        let g = frobenius_generators();
        let unit_obj = KObject::unit_object();
        let v = is_split_mono(&g.unit, &unit_obj, &x).unwrap().unwrap();
        assert_eq!(v, g.counit.scale(&Scalar::t().recip().unwrap()));
    }

    #[test]
    fn level_bounds() {
        let lb = level_upper_bound(&h(), 1).unwrap();
        assert_eq!(lb.level, 1);
        assert_eq!(lb.certified_empty_below, vec![0]);
        assert!(lb.unresolved_below.is_empty());
        let lb0 = level_upper_bound(&KObject::unit_object(), 1).unwrap();
        assert_eq!(lb0.level, 0);
        let e2 = KObject::new(2, distinct_idempotent(2).unwrap()).unwrap();
        let lb2 = level_upper_bound(&e2, 1).unwrap();
        assert_eq!(lb2.level, 2);
        assert_eq!(lb2.certified_empty_below, vec![0, 1]);
    }

    #[test]
    fn kobject_json_round_trip() {
        let e2 = KObject::new(2, distinct_idempotent(2).unwrap()).unwrap();
        let text = serde_json::to_string(&e2).unwrap();
        let back: KObject = serde_json::from_str(&text).unwrap();
        assert_eq!(back, e2);
        // non-idempotent payloads are rejected on parse
        let bad = text.replace("\"ambient\":2", "\"ambient\":2").replace(
            "-1",
            "-2",
        );
        assert!(serde_json::from_str::<KObject>(&bad).is_err());
    }
}
