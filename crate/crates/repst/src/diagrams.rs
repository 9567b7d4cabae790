//! The category Rep₀(S_t): morphisms a → b are sparse scalar combinations of
//! partition diagrams on a+b boundary points. Domain points occupy indices
//! 0..a, codomain points a..a+b. Composition stacks diagrams, joins the
//! partitions on a+b+c points, and pays a factor t for every join block
//! confined to the middle tier.

use crate::error::{Error, Result};
use crate::partitions::{SetPartition, UnionFind};
use crate::scalars::Scalar;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// A single partition diagram a → b: a set partition of the a+b boundary
/// points, dom points at indices 0..a, cod points at a..a+b.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Diagram {
    dom: usize,
    cod: usize,
    partition: SetPartition,
}

impl Diagram {
    pub fn new(dom: usize, cod: usize, partition: SetPartition) -> Result<Self> {
        if partition.ground_size() != dom + cod {
            return Err(Error::SizeMismatch(partition.ground_size(), dom + cod));
        }
        Ok(Diagram {
            dom,
            cod,
            partition,
        })
    }

    pub fn identity(a: usize) -> Self {
        let blocks = (0..a).map(|i| vec![i, a + i]).collect();
        Diagram {
            dom: a,
            cod: a,
            partition: SetPartition::new(2 * a, blocks).unwrap(),
        }
    }

    /// The all-points-one-block diagram a → b (for a = b = 0, the empty one).
    pub fn one_block(a: usize, b: usize) -> Self {
        Diagram {
            dom: a,
            cod: b,
            partition: SetPartition::one_block(a + b),
        }
    }

    /// The permutation diagram of images: strand j joins dom j to cod
    /// images[j].
    pub fn permutation(images: &[usize]) -> Self {
        let k = images.len();
        let blocks = (0..k).map(|j| vec![j, k + images[j]]).collect();
        Diagram {
            dom: k,
            cod: k,
            partition: SetPartition::new(2 * k, blocks).unwrap(),
        }
    }

    pub fn dom(&self) -> usize {
        self.dom
    }

    pub fn cod(&self) -> usize {
        self.cod
    }

    pub fn partition(&self) -> &SetPartition {
        &self.partition
    }

    /// Diagram composition: self ∘ other (other: a→b first, then self: b→c).
    /// Returns the resulting diagram and the middle-block count d.
    pub fn compose(&self, other: &Diagram) -> Result<(Diagram, usize)> {
        if other.cod != self.dom {
            return Err(Error::BoundaryMismatch {
                expected: other.cod,
                got: self.dom,
            });
        }
        let a = other.dom;
        let b = other.cod;
        let c = self.cod;
        let ground = a + b + c;
        let mut uf = UnionFind::new(ground);
        // other lives on indices 0..a+b as-is; self's points shift by a
        for block in other.partition.blocks() {
            for w in block.windows(2) {
                uf.union(w[0], w[1]);
            }
        }
        for block in self.partition.blocks() {
            for w in block.windows(2) {
                uf.union(a + w[0], a + w[1]);
            }
        }
        // count classes confined to the middle tier and read off the
        // restriction to the outer tiers in one pass
        let mut class_touches_boundary: BTreeMap<usize, bool> = BTreeMap::new();
        for i in 0..ground {
            let root = uf.find(i);
            let boundary = i < a || i >= a + b;
            *class_touches_boundary.entry(root).or_insert(false) |= boundary;
        }
        let d = class_touches_boundary.values().filter(|&&t| !t).count();
        let mut blocks: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for i in (0..a).chain(a + b..ground) {
            let root = uf.find(i);
            let idx = if i < a { i } else { i - b };
            blocks.entry(root).or_default().push(idx);
        }
        let partition =
            SetPartition::new(a + c, blocks.into_values().collect()).unwrap();
        Ok((
            Diagram {
                dom: a,
                cod: c,
                partition,
            },
            d,
        ))
    }

    /// Disjoint-union tensor with index shifts: self's points first in each
    /// tier, then other's.
    pub fn tensor(&self, other: &Diagram) -> Diagram {
        let (a, b) = (self.dom, self.cod);
        let (a2, b2) = (other.dom, other.cod);
        let shift = |i: usize, from_other: bool| -> usize {
            if !from_other {
                if i < a {
                    i
                } else {
                    a + a2 + (i - a)
                }
            } else if i < a2 {
                a + i
            } else {
                a + a2 + b + (i - a2)
            }
        };
        let mut blocks: Vec<Vec<usize>> = self
            .partition
            .blocks()
            .iter()
            .map(|blk| blk.iter().map(|&i| shift(i, false)).collect())
            .collect();
        blocks.extend(
            other
                .partition
                .blocks()
                .iter()
                .map(|blk| blk.iter().map(|&i| shift(i, true)).collect::<Vec<_>>()),
        );
        Diagram {
            dom: a + a2,
            cod: b + b2,
            partition: SetPartition::new(a + a2 + b + b2, blocks).unwrap(),
        }
    }

    /// Number of blocks after closing the strands of an endomorphism diagram
    /// (joining dom point i with cod point i); each is a factor of t in the
    /// trace.
    pub fn closure_blocks(&self) -> Result<usize> {
        if self.dom != self.cod {
            return Err(Error::BoundaryMismatch {
                expected: self.dom,
                got: self.cod,
            });
        }
        let k = self.dom;
        let mut uf = UnionFind::new(2 * k);
        for block in self.partition.blocks() {
            for w in block.windows(2) {
                uf.union(w[0], w[1]);
            }
        }
        for i in 0..k {
            uf.union(i, k + i);
        }
        let mut roots: Vec<usize> = (0..2 * k).map(|i| uf.find(i)).collect();
        roots.sort_unstable();
        roots.dedup();
        Ok(roots.len())
    }
}

/// A morphism of Rep₀(S_t): a finite scalar-linear combination of diagrams
/// with common boundaries. Zero coefficients are never stored and keys are
/// canonical, so equality is structural.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Morphism {
    dom: usize,
    cod: usize,
    terms: BTreeMap<Diagram, Scalar>,
}

impl Morphism {
    pub fn zero(dom: usize, cod: usize) -> Self {
        Morphism {
            dom,
            cod,
            terms: BTreeMap::new(),
        }
    }

    pub fn from_diagram(d: Diagram) -> Self {
        Morphism::from_terms(d.dom, d.cod, vec![(d, Scalar::one())]).unwrap()
    }

    pub fn from_terms(
        dom: usize,
        cod: usize,
        terms: Vec<(Diagram, Scalar)>,
    ) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (d, c) in terms {
            if d.dom != dom || d.cod != cod {
                return Err(Error::BoundaryMismatch {
                    expected: dom + cod,
                    got: d.dom + d.cod,
                });
            }
            let entry = map.entry(d).or_insert_with(Scalar::zero);
            *entry = &*entry + &c;
        }
        map.retain(|_, c| !c.is_zero());
        Ok(Morphism {
            dom,
            cod,
            terms: map,
        })
    }

    pub fn identity(a: usize) -> Self {
        Morphism::from_diagram(Diagram::identity(a))
    }

    pub fn dom(&self) -> usize {
        self.dom
    }

    pub fn cod(&self) -> usize {
        self.cod
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Diagram, &Scalar)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, d: &Diagram) -> Scalar {
        self.terms.get(d).cloned().unwrap_or_else(Scalar::zero)
    }

    /// True when every coefficient lies in Q (no t enters).
    pub fn is_t_free(&self) -> bool {
        self.terms.values().all(|c| c.is_rational())
    }

    pub fn add(&self, other: &Morphism) -> Result<Morphism> {
        if self.dom != other.dom || self.cod != other.cod {
            return Err(Error::BoundaryMismatch {
                expected: self.dom + self.cod,
                got: other.dom + other.cod,
            });
        }
        let mut terms = self.terms.clone();
        for (d, c) in &other.terms {
            let entry = terms.entry(d.clone()).or_insert_with(Scalar::zero);
            *entry = &*entry + c;
        }
        terms.retain(|_, c| !c.is_zero());
        Ok(Morphism {
            dom: self.dom,
            cod: self.cod,
            terms,
        })
    }

    pub fn sub(&self, other: &Morphism) -> Result<Morphism> {
        self.add(&other.scale(&Scalar::from_int(-1)))
    }

    pub fn scale(&self, c: &Scalar) -> Morphism {
        if c.is_zero() {
            return Morphism::zero(self.dom, self.cod);
        }
        Morphism {
            dom: self.dom,
            cod: self.cod,
            terms: self
                .terms
                .iter()
                .map(|(d, v)| (d.clone(), v * c))
                .collect(),
        }
    }

    /// Bilinear composition self ∘ other with the t^d middle-block rule.
    pub fn compose(&self, other: &Morphism) -> Result<Morphism> {
        if other.cod != self.dom {
            return Err(Error::BoundaryMismatch {
                expected: other.cod,
                got: self.dom,
            });
        }
        let mut terms: BTreeMap<Diagram, Scalar> = BTreeMap::new();
        for (d1, c1) in &self.terms {
            for (d2, c2) in &other.terms {
                let (diag, d) = d1.compose(d2)?;
                let coeff = &(c1 * c2) * &Scalar::t_pow(d);
                let entry = terms.entry(diag).or_insert_with(Scalar::zero);
                *entry = &*entry + &coeff;
            }
        }
        terms.retain(|_, c| !c.is_zero());
        Ok(Morphism {
            dom: other.dom,
            cod: self.cod,
            terms,
        })
    }

    /// Bilinear tensor product; self's strands first.
    pub fn tensor(&self, other: &Morphism) -> Morphism {
        let mut terms: BTreeMap<Diagram, Scalar> = BTreeMap::new();
        for (d1, c1) in &self.terms {
            for (d2, c2) in &other.terms {
                let diag = d1.tensor(d2);
                let entry = terms.entry(diag).or_insert_with(Scalar::zero);
                *entry = &*entry + &(c1 * c2);
            }
        }
        terms.retain(|_, c| !c.is_zero());
        Morphism {
            dom: self.dom + other.dom,
            cod: self.cod + other.cod,
            terms,
        }
    }

    /// Categorical trace by closing all strands: Σ coeff · t^(blocks of the
    /// closure).
    pub fn closure_trace(&self) -> Result<Scalar> {
        let mut acc = Scalar::zero();
        for (d, c) in &self.terms {
            let blocks = d.closure_blocks()?;
            acc = &acc + &(c * &Scalar::t_pow(blocks));
        }
        if self.dom != self.cod {
            return Err(Error::BoundaryMismatch {
                expected: self.dom,
                got: self.cod,
            });
        }
        Ok(acc)
    }
}

/// The crossing a+b → b+a: dom point i < a goes to cod point b+i, dom point
/// a+j to cod point j.
pub fn symmetry(a: usize, b: usize) -> Morphism {
    let n = a + b;
    let mut blocks = Vec::with_capacity(n);
    for i in 0..a {
        blocks.push(vec![i, n + b + i]);
    }
    for j in 0..b {
        blocks.push(vec![a + j, n + j]);
    }
    let partition = SetPartition::new(2 * n, blocks).unwrap();
    Morphism::from_diagram(Diagram::new(n, n, partition).unwrap())
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum CupCap {
    Cup,
    Cap,
}

/// Self-duality pairing on [k]: the cup 0 → 2k pairs cod point i with
/// 2k−1−i; the cap 2k → 0 dually. The reversal makes the snake identities
/// hold on the nose.
pub fn cup_cap(k: usize, direction: CupCap) -> Morphism {
    let blocks: Vec<Vec<usize>> = (0..k).map(|i| vec![i, 2 * k - 1 - i]).collect();
    let partition = SetPartition::new(2 * k, blocks).unwrap();
    let (dom, cod) = match direction {
        CupCap::Cup => (0, 2 * k),
        CupCap::Cap => (2 * k, 0),
    };
    Morphism::from_diagram(Diagram::new(dom, cod, partition).unwrap())
}

/// The Frobenius structure maps on the generating object h: all-points-one-
/// block diagrams of the four basic shapes.
pub struct FrobeniusGenerators {
    /// μ: 2 → 1
    pub mult: Morphism,
    /// η: 0 → 1
    pub unit: Morphism,
    /// Δ: 1 → 2
    pub comult: Morphism,
    /// ε: 1 → 0
    pub counit: Morphism,
}

pub fn frobenius_generators() -> FrobeniusGenerators {
    FrobeniusGenerators {
        mult: Morphism::from_diagram(Diagram::one_block(2, 1)),
        unit: Morphism::from_diagram(Diagram::one_block(0, 1)),
        comult: Morphism::from_diagram(Diagram::one_block(1, 2)),
        counit: Morphism::from_diagram(Diagram::one_block(1, 0)),
    }
}

/// The full diagram basis of Hom(a, b): every set partition of a+b points.
pub fn enumerate_diagrams(a: usize, b: usize) -> Result<Vec<Diagram>> {
    Ok(crate::partitions::enumerate_partitions(a + b)?
        .map(|p| Diagram::new(a, b, p).unwrap())
        .collect())
}

// ---- JSON wire format --------------------------------------------------
// {"dom": a, "cod": b, "terms": [{"blocks": [[…]], "coeff": Scalar}]} with
// terms in canonical diagram order.

#[derive(Serialize, Deserialize)]
struct TermJson {
    blocks: Vec<Vec<usize>>,
    coeff: Scalar,
}

#[derive(Serialize, Deserialize)]
struct MorphismJson {
    dom: usize,
    cod: usize,
    terms: Vec<TermJson>,
}

impl Serialize for Morphism {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        MorphismJson {
            dom: self.dom,
            cod: self.cod,
            terms: self
                .terms
                .iter()
                .map(|(d, c)| TermJson {
                    blocks: d.partition.blocks().to_vec(),
                    coeff: c.clone(),
                })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Morphism {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = MorphismJson::deserialize(d)?;
        let terms = raw
            .terms
            .into_iter()
            .map(|t| {
                let p = SetPartition::new(raw.dom + raw.cod, t.blocks)
                    .map_err(serde::de::Error::custom)?;
                let diag =
                    Diagram::new(raw.dom, raw.cod, p).map_err(serde::de::Error::custom)?;
                Ok((diag, t.coeff))
            })
            .collect::<std::result::Result<Vec<_>, D::Error>>()?;
        Morphism::from_terms(raw.dom, raw.cod, terms).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// The blocks-{0},{1} endomorphism of [1]; at the fiber t = n its matrix
    /// is the all-ones matrix J.
    fn d_endo() -> Morphism {
        let p = SetPartition::new(2, vec![vec![0], vec![1]]).unwrap();
        Morphism::from_diagram(Diagram::new(1, 1, p).unwrap())
    }

    #[test]
    fn identity_shapes() {
        let id0 = Morphism::identity(0);
        assert_eq!(id0.num_terms(), 1);
        let id1 = Diagram::identity(1);
        assert_eq!(id1.partition().blocks(), &[vec![0, 1]]);
        let id2 = Diagram::identity(2);
        assert_eq!(id2.partition().blocks(), &[vec![0, 2], vec![1, 3]]);
    }

    #[test]
    fn identity_law() {
        let f = d_endo();
        assert_eq!(Morphism::identity(1).compose(&f).unwrap(), f);
        assert_eq!(f.compose(&Morphism::identity(1)).unwrap(), f);
    }

    #[test]
    fn j_squares_to_t_j() {
        // J · J = n · J at every fiber
        let d = d_endo();
        let sq = d.compose(&d).unwrap();
        assert_eq!(sq, d.scale(&Scalar::t()));
    }

    #[test]
    fn counit_unit_gives_dimension_t() {
        let g = frobenius_generators();
        let loop_ = g.counit.compose(&g.unit).unwrap();
        assert_eq!(loop_, Morphism::identity(0).scale(&Scalar::t()));
    }

    #[test]
    fn mult_comult_is_identity() {
        let g = frobenius_generators();
        assert_eq!(g.mult.compose(&g.comult).unwrap(), Morphism::identity(1));
    }

    #[test]
    fn tensor_examples() {
        let id1 = Morphism::identity(1);
        assert_eq!(id1.tensor(&id1), Morphism::identity(2));
        let g = frobenius_generators();
        // η ⊗ ε : 1 → 1 is the no-constraint diagram D
        assert_eq!(g.unit.tensor(&g.counit), d_endo());
        let f = d_endo();
        assert_eq!(f.tensor(&Morphism::identity(0)), f);
    }

    #[test]
    fn symmetry_properties() {
        assert_eq!(symmetry(1, 0), Morphism::identity(1));
        let s = symmetry(1, 1);
        let d = s.terms().next().unwrap().0;
        assert_eq!(d.partition().blocks(), &[vec![0, 3], vec![1, 2]]);
        for (a, b) in [(0, 2), (1, 1), (1, 2), (2, 1), (2, 2)] {
            let fwd = symmetry(a, b);
            let bwd = symmetry(b, a);
            assert_eq!(bwd.compose(&fwd).unwrap(), Morphism::identity(a + b));
        }
    }

    #[test]
    fn snake_identities() {
        for k in 0..=3 {
            let id = Morphism::identity(k);
            let cup = cup_cap(k, CupCap::Cup);
            let cap = cup_cap(k, CupCap::Cap);
            let lhs = cap.tensor(&id).compose(&id.tensor(&cup)).unwrap();
            assert_eq!(lhs, id, "snake at k = {k}");
            let rhs = id.tensor(&cap).compose(&cup.tensor(&id)).unwrap();
            assert_eq!(rhs, id, "co-snake at k = {k}");
        }
    }

    #[test]
    fn cup_cap_shapes_and_loop() {
        let cup1 = cup_cap(1, CupCap::Cup);
        let d = cup1.terms().next().unwrap().0;
        assert_eq!((d.dom(), d.cod()), (0, 2));
        assert_eq!(d.partition().blocks(), &[vec![0, 1]]);
        let cap1 = cup_cap(1, CupCap::Cap);
        let loop_ = cap1.compose(&cup1).unwrap();
        assert_eq!(loop_, Morphism::identity(0).scale(&Scalar::t()));
    }

    #[test]
    fn closure_trace_examples() {
        assert_eq!(
            Morphism::identity(1).closure_trace().unwrap(),
            Scalar::t()
        );
        assert_eq!(d_endo().closure_trace().unwrap(), Scalar::t());
        assert_eq!(
            Morphism::identity(2).closure_trace().unwrap(),
            Scalar::t_pow(2)
        );
    }

    #[test]
    fn frobenius_law_and_unit_law() {
        let g = frobenius_generators();
        let id = Morphism::identity(1);
        let lhs = id.tensor(&g.mult).compose(&g.comult.tensor(&id)).unwrap();
        let rhs = g.comult.compose(&g.mult).unwrap();
        assert_eq!(lhs, rhs);
        assert_eq!(lhs, Morphism::from_diagram(Diagram::one_block(2, 2)));
        let unit_law = g.mult.compose(&g.unit.tensor(&id)).unwrap();
        assert_eq!(unit_law, id);
        let comm = g.mult.compose(&symmetry(1, 1)).unwrap();
        assert_eq!(comm, g.mult);
    }

    #[test]
    fn morphism_json_round_trip() {
        let g = frobenius_generators();
        let p = SetPartition::new(3, vec![vec![0, 2], vec![1]]).unwrap();
        let proj = Morphism::from_diagram(Diagram::new(2, 1, p).unwrap());
        let m = g
            .mult
            .scale(&Scalar::t())
            .add(&proj.scale(&Scalar::ratio(1, 2)))
            .unwrap();
        let text = serde_json::to_string(&m).unwrap();
        let back: Morphism = serde_json::from_str(&text).unwrap();
        assert_eq!(back, m);
    }

    fn arb_morphism(a: usize, b: usize) -> impl Strategy<Value = Morphism> {
        let diagrams = enumerate_diagrams(a, b).unwrap();
        let count = diagrams.len();
        proptest::collection::vec((0..count, -3i64..4, 0u8..2), 1..4).prop_map(
            move |picks| {
                let terms = picks
                    .into_iter()
                    .map(|(i, c, d)| {
                        (
                            diagrams[i].clone(),
                            &Scalar::from_int(c) * &Scalar::t_pow(d as usize),
                        )
                    })
                    .collect();
                Morphism::from_terms(a, b, terms).unwrap()
            },
        )
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn compose_is_associative(
            f in arb_morphism(2, 1),
            g in arb_morphism(1, 2),
            h in arb_morphism(2, 2),
        ) {
            let lhs = h.compose(&g.compose(&f).unwrap()).unwrap();
            let rhs = h.compose(&g).unwrap().compose(&f).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn interchange_law(
            f in arb_morphism(1, 2),
            fp in arb_morphism(2, 1),
            g in arb_morphism(2, 1),
            gp in arb_morphism(1, 2),
        ) {
            let lhs = f.tensor(&g).compose(&fp.tensor(&gp)).unwrap();
            let rhs = f.compose(&fp).unwrap().tensor(&g.compose(&gp).unwrap());
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn symmetry_is_natural(
            f in arb_morphism(1, 2),
            g in arb_morphism(2, 1),
        ) {
            // β ∘ (f ⊗ g) = (g ⊗ f) ∘ β
            let beta_dom = symmetry(f.dom(), g.dom());
            let beta_cod = symmetry(f.cod(), g.cod());
            let lhs = beta_cod.compose(&f.tensor(&g)).unwrap();
            let rhs = g.tensor(&f).compose(&beta_dom).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }
}
