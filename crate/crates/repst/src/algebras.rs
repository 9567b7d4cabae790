//! Algebra objects: the interpolated induced families built from subgroups
//! H ≤ S_k, their symbolic axiom checks, and simplicity certification over
//! Q(t) via connectedness and a nondegenerate trace pairing.

use crate::config::limits;
use crate::diagrams::{
    cup_cap, frobenius_generators, symmetry, CupCap, Diagram, Morphism,
};
use crate::error::{Error, Result};
use crate::karoubi::{diagram_index, hom_space, morphism_coords, KObject};
use crate::linalg::{Matrix, SpanBasis};
use crate::partitions::{enumerate_partitions, SetPartition};
use crate::scalars::Scalar;
use crate::symgroup::{self, PermGroup};
use serde::{Deserialize, Serialize};

/// A commutative algebra object: a carrier inside h^{⊗k} with structure
/// maps already absorbed into the carrier idempotent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraObject {
    pub ambient: usize,
    /// The subgroup the family was induced from (degree = ambient); controls
    /// and hand-built algebras carry the trivial subgroup.
    pub subgroup: PermGroup,
    pub carrier: KObject,
    pub mult: Morphism,
    pub unit: Morphism,
}

impl AlgebraObject {
    pub fn new(
        ambient: usize,
        subgroup: PermGroup,
        carrier: KObject,
        mult: Morphism,
        unit: Morphism,
    ) -> Result<Self> {
        if carrier.ambient() != ambient {
            return Err(Error::SizeMismatch(carrier.ambient(), ambient));
        }
        if mult.dom() != 2 * ambient || mult.cod() != ambient {
            return Err(Error::BoundaryMismatch {
                expected: 2 * ambient,
                got: mult.dom(),
            });
        }
        if unit.dom() != 0 || unit.cod() != ambient {
            return Err(Error::BoundaryMismatch {
                expected: ambient,
                got: unit.cod(),
            });
        }
        let f = carrier.idem();
        let absorbed = f
            .compose(&mult)?
            .compose(&f.tensor(f))?;
        if absorbed != mult {
            return Err(Error::Invalid(
                "multiplication does not live on the carrier".into(),
            ));
        }
        if f.compose(&unit)? != unit {
            return Err(Error::Invalid("unit does not live on the carrier".into()));
        }
        Ok(AlgebraObject {
            ambient,
            subgroup,
            carrier,
            mult,
            unit,
        })
    }
}

#[derive(Serialize, Deserialize)]
struct AlgebraObjectJson {
    ambient: usize,
    subgroup: String,
    idem: Morphism,
    mult: Morphism,
    unit: Morphism,
}

impl Serialize for AlgebraObject {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        AlgebraObjectJson {
            ambient: self.ambient,
            subgroup: self.subgroup.generator_string(),
            idem: self.carrier.idem().clone(),
            mult: self.mult.clone(),
            unit: self.unit.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for AlgebraObject {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = AlgebraObjectJson::deserialize(d)?;
        let subgroup = symgroup::parse_generators(&raw.subgroup, raw.ambient)
            .map_err(serde::de::Error::custom)?;
        let carrier =
            KObject::new(raw.ambient, raw.idem).map_err(serde::de::Error::custom)?;
        AlgebraObject::new(raw.ambient, subgroup, carrier, raw.mult, raw.unit)
            .map_err(serde::de::Error::custom)
    }
}

/// The distinct-index idempotent e_k: the Möbius-inversion alternating sum
/// over set partitions of [k] of their strand-merging diagrams. Projects, at
/// every fiber, onto tensors with pairwise distinct indices.
pub fn distinct_idempotent(k: usize) -> Result<Morphism> {
    if k > limits().distinct_idempotent {
        return Err(Error::LimitExceeded(format!(
            "distinct-index idempotent limited to k ≤ {}, got {k}",
            limits().distinct_idempotent
        )));
    }
    let mut terms = vec![];
    for pi in enumerate_partitions(k)? {
        let coeff = Scalar::from_int(pi.moebius());
        let blocks: Vec<Vec<usize>> = pi
            .blocks()
            .iter()
            .map(|b| {
                let mut blk: Vec<usize> = b.clone();
                blk.extend(b.iter().map(|&j| k + j));
                blk
            })
            .collect();
        let diag = Diagram::new(k, k, SetPartition::new(2 * k, blocks)?)?;
        terms.push((diag, coeff));
    }
    Morphism::from_terms(k, k, terms)
}

/// The symmetrizing projector p_H = (1/|H|)·Σ_h (permutation diagram of h).
pub fn subgroup_projector(h: &PermGroup) -> Morphism {
    let k = h.degree();
    let scale = Scalar::ratio(1, h.order() as i64);
    let terms = h
        .elements()
        .iter()
        .map(|p| (Diagram::permutation(p.images()), scale.clone()))
        .collect();
    Morphism::from_terms(k, k, terms).unwrap()
}

/// The strandwise-merge multiplication diagram 2k → k with blocks
/// {j, k+j, 2k+j}.
fn merge_diagram(k: usize) -> Diagram {
    let blocks = (0..k).map(|j| vec![j, k + j, 2 * k + j]).collect();
    Diagram::new(2 * k, k, SetPartition::new(3 * k, blocks).unwrap()).unwrap()
}

fn unit_power(k: usize) -> Morphism {
    let eta = frobenius_generators().unit;
    let mut out = Morphism::identity(0);
    for _ in 0..k {
        out = out.tensor(&eta);
    }
    out
}

fn counit_power(k: usize) -> Morphism {
    let eps = frobenius_generators().counit;
    let mut out = Morphism::identity(0);
    for _ in 0..k {
        out = out.tensor(&eps);
    }
    out
}

/// The interpolated induced algebra of the coset space S_k/H: carrier
/// idempotent e_k∘p_H, strandwise-merge multiplication, and tensor-power
/// unit, all conjugated onto the carrier.
pub fn build_induced_algebra(k: usize, h: &PermGroup) -> Result<AlgebraObject> {
    if h.degree() != k {
        return Err(Error::NotASubgroup(format!(
            "subgroup degree {} does not match k = {k}",
            h.degree()
        )));
    }
    let f = distinct_idempotent(k)?.compose(&subgroup_projector(h))?;
    let carrier = KObject::new(k, f.clone())?;
    let mult = f
        .compose(&Morphism::from_diagram(merge_diagram(k)))?
        .compose(&f.tensor(&f))?;
    let unit = f.compose(&unit_power(k))?;
    AlgebraObject::new(k, h.clone(), carrier, mult, unit)
}

#[derive(Clone, Debug, Serialize)]
pub struct LawCheck {
    pub pass: bool,
    /// The nonzero difference of the two sides, when the law fails.
    pub witness: Option<Morphism>,
}

fn law(lhs: Morphism, rhs: &Morphism) -> Result<LawCheck> {
    let diff = lhs.sub(rhs)?;
    Ok(LawCheck {
        pass: diff.is_zero(),
        witness: if diff.is_zero() { None } else { Some(diff) },
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct AxiomReport {
    pub associativity: LawCheck,
    pub unit: LawCheck,
    pub commutativity: LawCheck,
}

impl AxiomReport {
    pub fn all_pass(&self) -> bool {
        self.associativity.pass && self.unit.pass && self.commutativity.pass
    }
}

/// Symbolic verification of associativity, the unit law, and commutativity,
/// conjugated onto the carrier; failures come with a nonzero witness.
pub fn check_axioms(a: &AlgebraObject) -> Result<AxiomReport> {
    let k = a.ambient;
    let f = a.carrier.idem();
    let id_k = Morphism::identity(k);
    let fff = f.tensor(f).tensor(f);
    let assoc_l = a
        .mult
        .compose(&a.mult.tensor(&id_k))?
        .compose(&fff)?;
    let assoc_r = a
        .mult
        .compose(&id_k.tensor(&a.mult))?
        .compose(&fff)?;
    let associativity = law(assoc_l, &assoc_r)?;
    let unit_side = a
        .mult
        .compose(&a.unit.tensor(&id_k))?
        .compose(f)?;
    let unit = law(unit_side, f)?;
    let comm_side = a.mult.compose(&symmetry(k, k))?;
    let commutativity = law(comm_side, &a.mult)?;
    Ok(AxiomReport {
        associativity,
        unit,
        commutativity,
    })
}

/// dim Hom(1, A) over Q(t): the rank of post-composition by the carrier
/// idempotent on the diagram basis of Hom([0], [k]).
pub fn connectedness(a: &AlgebraObject) -> Result<usize> {
    let (_, rank) = hom_space(&KObject::unit_object(), &a.carrier)?;
    Ok(rank)
}

#[derive(Clone, Debug, Serialize)]
pub struct PairingReport {
    pub nondegenerate: bool,
    pub phi: Morphism,
    pub det: Scalar,
    /// Two-sided inverse of φ in End(A), re-verified symbolically.
    pub inverse: Option<Morphism>,
}

/// Separability certificate: builds the endomorphism φ induced by the trace
/// pairing τ∘m through one cup, and decides its invertibility in End(A).
pub fn pairing_nondegenerate(a: &AlgebraObject) -> Result<PairingReport> {
    let k = a.ambient;
    let f = a.carrier.idem();
    let tau = counit_power(k).compose(f)?;
    let b = tau.compose(&a.mult)?; // 2k → 0
    let id_k = Morphism::identity(k);
    let phi = f
        .compose(&b.tensor(&id_k))?
        .compose(&id_k.tensor(&cup_cap(k, CupCap::Cup)))?
        .compose(f)?;
    // matrix of left-composition by φ on an End(A) basis
    let (end_basis, rank) = hom_space(&a.carrier, &a.carrier)?;
    let (_, index) = diagram_index(k, k)?;
    let mut span = SpanBasis::new(index.len());
    for e in &end_basis {
        span.insert(&morphism_coords(e, &index));
    }
    debug_assert_eq!(span.rank(), rank);
    let mut cols = vec![];
    for e in &end_basis {
        let col = span
            .express(&morphism_coords(&phi.compose(e)?, &index))
            .ok_or_else(|| Error::Invalid("φ∘e escapes End(A)".into()))?;
        cols.push(col);
    }
    let m = Matrix::from_columns(cols)?;
    let det = m.det()?;
    if det.is_zero() {
        return Ok(PairingReport {
            nondegenerate: false,
            phi,
            det,
            inverse: None,
        });
    }
    let target = span
        .express(&morphism_coords(f, &index))
        .ok_or_else(|| Error::Invalid("identity escapes End(A)".into()))?;
    let coeffs = m
        .solve(&target)
        .ok_or_else(|| Error::Invalid("nonzero determinant but no solution".into()))?;
    let mut psi = Morphism::zero(k, k);
    for (e, c) in end_basis.iter().zip(&coeffs) {
        psi = psi.add(&e.scale(c))?;
    }
    if phi.compose(&psi)? != *f || psi.compose(&phi)? != *f {
        return Err(Error::Invalid("pairing inverse failed re-check".into()));
    }
    Ok(PairingReport {
        nondegenerate: true,
        phi,
        det,
        inverse: Some(psi),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    CertifiedSimple,
    CertifiedNonsimple,
    Inconclusive,
}

#[derive(Clone, Debug, Serialize)]
pub struct FiberWitness {
    pub n: usize,
    pub simple: bool,
    pub dimension: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct SimplicityCertificate {
    pub verdict: Verdict,
    pub connectedness: usize,
    pub pairing_nondegenerate: bool,
    /// Honest-fiber confirmation attached to non-simple verdicts.
    pub fiber_witness: Option<FiberWitness>,
}

/// Simplicity over Q(t): certified-simple iff connected (rank 1) with a
/// nondegenerate pairing; certified-nonsimple iff disconnected, confirmed by
/// an honest non-simple fiber; inconclusive otherwise (degenerate pairing —
/// the criterion is conservative).
pub fn certify_simple(a: &AlgebraObject) -> Result<SimplicityCertificate> {
    let conn = connectedness(a)?;
    if conn >= 2 {
        let n = 2 * a.ambient + 1;
        let fib = crate::fiber::specialize_algebra(
            a.ambient,
            a.carrier.idem(),
            &a.mult,
            &a.unit,
            n,
        )?;
        let report = symgroup::is_simple_equivariant(&fib)?;
        if report.simple {
            return Err(Error::Invalid(format!(
                "disconnected over Q(t) but simple at fiber n = {n}"
            )));
        }
        return Ok(SimplicityCertificate {
            verdict: Verdict::CertifiedNonsimple,
            connectedness: conn,
            pairing_nondegenerate: false,
            fiber_witness: Some(FiberWitness {
                n,
                simple: false,
                dimension: fib.dim(),
            }),
        });
    }
    let pairing = pairing_nondegenerate(a)?;
    let verdict = if conn == 1 && pairing.nondegenerate {
        Verdict::CertifiedSimple
    } else {
        Verdict::Inconclusive
    };
    Ok(SimplicityCertificate {
        verdict,
        connectedness: conn,
        pairing_nondegenerate: pairing.nondegenerate,
        fiber_witness: None,
    })
}

/// Specializes the algebra at t = n and matches it against the coset
/// algebra C[S_n/(H×S_{n−k})]; Some(iso) certifies the fiber description.
pub fn fiber_match(a: &AlgebraObject, n: usize) -> Result<Option<Matrix>> {
    let fib = crate::fiber::specialize_algebra(
        a.ambient,
        a.carrier.idem(),
        &a.mult,
        &a.unit,
        n,
    )?;
    symgroup::match_fiber_algebra(&fib, n, a.ambient, &a.subgroup)
}

/// Negative control: h ⊗ h with componentwise multiplication. Connected-
/// ness is 2 (the two tensor factors give independent invariants), so the
/// algebra is certified non-simple.
pub fn componentwise_square() -> Result<AlgebraObject> {
    let g = frobenius_generators();
    let id1 = Morphism::identity(1);
    let beta = symmetry(1, 1);
    let mult = g
        .mult
        .tensor(&g.mult)
        .compose(&id1.tensor(&beta).tensor(&id1))?;
    let unit = g.unit.tensor(&g.unit);
    AlgebraObject::new(
        2,
        PermGroup::trivial(2),
        KObject::full(2),
        mult,
        unit,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fiber;
    use num::bigint::BigInt;
    use num::rational::BigRational;
    use num::{One, Zero};

    #[test]
    fn distinct_idempotent_small_cases() {
        assert_eq!(distinct_idempotent(1).unwrap(), Morphism::identity(1));
        let e2 = distinct_idempotent(2).unwrap();
        let merge = Morphism::from_diagram(Diagram::one_block(2, 2));
        assert_eq!(
            e2,
            Morphism::identity(2).sub(&merge).unwrap()
        );
        let e3 = distinct_idempotent(3).unwrap();
        assert_eq!(e3.num_terms(), 5);
        let coeffs: Vec<Scalar> = e3.terms().map(|(_, c)| c.clone()).collect();
        let mut counts = std::collections::BTreeMap::new();
        for c in coeffs {
            *counts.entry(format!("{c:?}")).or_insert(0) += 1;
        }
        // id with +1, three pairwise merges with −1, full merge with +2
        assert_eq!(counts.len(), 3);
    }

    #[test]
    fn distinct_idempotent_is_idempotent_and_t_free() {
        for k in 1..=3 {
            let e = distinct_idempotent(k).unwrap();
            assert!(e.is_t_free());
            let ee = e.compose(&e).unwrap();
            assert_eq!(ee, e, "e_{k}");
            assert!(ee.is_t_free(), "no t-factors for e_{k}∘e_{k}");
        }
    }

    #[test]
    fn distinct_idempotent_fiber_is_diagonal_distinct_projection() {
        let e2 = distinct_idempotent(2).unwrap();
        for n in 2..=4usize {
            let m = fiber::fiber_morphism(&e2, n).unwrap();
            for r in 0..n * n {
                for c in 0..n * n {
                    let (i, j) = (r / n, r % n);
                    let expected = if r == c && i != j {
                        BigRational::one()
                    } else {
                        BigRational::zero()
                    };
                    assert_eq!(m.entry(r, c), expected, "n={n} ({r},{c})");
                }
            }
        }
    }

    #[test]
    fn projector_commutes_with_distinct_idempotent() {
        for k in 1..=3usize {
            let e = distinct_idempotent(k).unwrap();
            for h in symgroup::subgroups_up_to_conjugacy(k).unwrap() {
                let p = subgroup_projector(&h);
                assert_eq!(
                    p.compose(&e).unwrap(),
                    e.compose(&p).unwrap(),
                    "k = {k}, |H| = {}",
                    h.order()
                );
            }
        }
    }

    #[test]
    fn induced_k1_is_the_generating_frobenius_algebra() {
        let g = frobenius_generators();
        let a = build_induced_algebra(1, &PermGroup::trivial(1)).unwrap();
        assert_eq!(*a.carrier.idem(), Morphism::identity(1));
        assert_eq!(a.mult, g.mult);
        assert_eq!(a.unit, g.unit);
    }

    #[test]
    fn dimension_polynomials_of_induced_algebras() {
        let a2 = build_induced_algebra(2, &PermGroup::trivial(2)).unwrap();
        assert_eq!(
            a2.carrier.dimension_poly(),
            &Scalar::t_pow(2) - &Scalar::t()
        );
        let a2s = build_induced_algebra(2, &PermGroup::symmetric(2)).unwrap();
        let half = Scalar::ratio(1, 2);
        assert_eq!(
            a2s.carrier.dimension_poly(),
            &(&Scalar::t_pow(2) - &Scalar::t()) * &half
        );
        // falling-factorial identity against fiber cardinalities by
        // interpolation: dim = t(t−1)…(t−k+1)/|H|
        for (k, h) in [
            (1, PermGroup::trivial(1)),
            (2, PermGroup::trivial(2)),
            (2, PermGroup::symmetric(2)),
        ] {
            let a = build_induced_algebra(k, &h).unwrap();
            let points: Vec<(BigRational, BigRational)> = (0..=k as i64 + 1)
                .map(|n| {
                    let count = if (n as usize) < k {
                        BigRational::zero()
                    } else {
                        BigRational::new(
                            BigInt::from(
                                symgroup::factorial(n as usize) as i64
                                    / symgroup::factorial(n as usize - k) as i64,
                            ),
                            BigInt::from(h.order() as i64),
                        )
                    };
                    (BigRational::from_integer(BigInt::from(n)), count)
                })
                .collect();
            let interpolated = crate::scalars::interpolate(&points, k).unwrap();
            assert_eq!(a.carrier.dimension_poly(), Scalar::from_poly(interpolated));
        }
    }

    #[test]
    fn axioms_hold_for_induced_algebras() {
        for (k, hs) in [
            (1usize, symgroup::subgroups_up_to_conjugacy(1).unwrap()),
            (2, symgroup::subgroups_up_to_conjugacy(2).unwrap()),
        ] {
            for h in hs {
                let a = build_induced_algebra(k, &h).unwrap();
                let report = check_axioms(&a).unwrap();
                assert!(report.all_pass(), "k = {k}, |H| = {}", h.order());
            }
        }
    }

    #[test]
    fn corrupted_algebras_fail_the_right_law() {
        let a = build_induced_algebra(2, &PermGroup::trivial(2)).unwrap();
        // μ + left-projection on the full one-strand object is not
        // associative: the checker must flag it with a nonzero witness
        let g2 = frobenius_generators();
        let left = Morphism::from_diagram(
            Diagram::new(
                2,
                1,
                SetPartition::new(3, vec![vec![0, 2], vec![1]]).unwrap(),
            )
            .unwrap(),
        );
        let broken = AlgebraObject::new(
            1,
            PermGroup::trivial(1),
            KObject::full(1),
            g2.mult.add(&left).unwrap(),
            g2.unit.clone(),
        )
        .unwrap();
        let report = check_axioms(&broken).unwrap();
        assert!(!report.associativity.pass);
        assert!(!report.associativity.witness.as_ref().unwrap().is_zero());
        // double the unit: the unit law must break
        let mut doubled = a.clone();
        doubled.unit = a.unit.scale(&Scalar::from_int(2));
        assert!(!check_axioms(&doubled).unwrap().unit.pass);
        // left projection is associative but not commutative
        let g = frobenius_generators();
        let proj = Morphism::from_diagram(
            Diagram::new(
                2,
                1,
                SetPartition::new(3, vec![vec![0, 2], vec![1]]).unwrap(),
            )
            .unwrap(),
        );
        let h1 = AlgebraObject::new(
            1,
            PermGroup::trivial(1),
            KObject::full(1),
            proj,
            g.unit.clone(),
        )
        .unwrap();
        let r = check_axioms(&h1).unwrap();
        assert!(r.associativity.pass);
        assert!(!r.commutativity.pass);
    }

    #[test]
    fn connectedness_values() {
        let h = build_induced_algebra(1, &PermGroup::trivial(1)).unwrap();
        assert_eq!(connectedness(&h).unwrap(), 1);
        let a2 = build_induced_algebra(2, &PermGroup::trivial(2)).unwrap();
        assert_eq!(connectedness(&a2).unwrap(), 1);
        let square = componentwise_square().unwrap();
        assert!(check_axioms(&square).unwrap().all_pass());
        assert_eq!(connectedness(&square).unwrap(), 2);
    }

    #[test]
    fn pairing_certificates() {
        let h = build_induced_algebra(1, &PermGroup::trivial(1)).unwrap();
        let p = pairing_nondegenerate(&h).unwrap();
        assert!(p.nondegenerate);
        assert_eq!(p.phi, Morphism::identity(1));
        let a2s = build_induced_algebra(2, &PermGroup::symmetric(2)).unwrap();
        let p2 = pairing_nondegenerate(&a2s).unwrap();
        assert!(p2.nondegenerate);
        assert!(!p2.det.is_zero());
        // zero multiplication: degenerate
        let mut zeroed = h.clone();
        zeroed.mult = Morphism::zero(2, 1);
        let pz = pairing_nondegenerate(&zeroed).unwrap();
        assert!(!pz.nondegenerate);
        assert!(pz.phi.is_zero());
    }

    #[test]
    fn simplicity_verdicts() {
        for (k, h) in [
            (1usize, PermGroup::trivial(1)),
            (2, PermGroup::trivial(2)),
            (2, PermGroup::symmetric(2)),
        ] {
            let a = build_induced_algebra(k, &h).unwrap();
            let cert = certify_simple(&a).unwrap();
            assert_eq!(cert.verdict, Verdict::CertifiedSimple);
            assert_eq!(cert.connectedness, 1);
        }
        let square = componentwise_square().unwrap();
        let cert = certify_simple(&square).unwrap();
        assert_eq!(cert.verdict, Verdict::CertifiedNonsimple);
        let witness = cert.fiber_witness.unwrap();
        assert!(!witness.simple);
        // degenerate pairing: conservative
        let h1 = build_induced_algebra(1, &PermGroup::trivial(1)).unwrap();
        let mut zeroed = h1.clone();
        zeroed.mult = Morphism::zero(2, 1);
        assert_eq!(
            certify_simple(&zeroed).unwrap().verdict,
            Verdict::Inconclusive
        );
    }

    #[test]
    fn fiber_matches_coset_algebra() {
        for (k, h, ns) in [
            (1usize, PermGroup::trivial(1), vec![3usize, 4]),
            (2, PermGroup::trivial(2), vec![5]),
            (2, PermGroup::symmetric(2), vec![5]),
        ] {
            let a = build_induced_algebra(k, &h).unwrap();
            for n in ns {
                assert!(
                    fiber_match(&a, n).unwrap().is_some(),
                    "k = {k}, |H| = {}, n = {n}",
                    h.order()
                );
            }
        }
    }

    #[test]
    fn algebra_json_round_trip() {
        let a = build_induced_algebra(2, &PermGroup::symmetric(2)).unwrap();
        let text = serde_json::to_string(&a).unwrap();
        let back: AlgebraObject = serde_json::from_str(&text).unwrap();
        assert_eq!(back, a);
    }
}
