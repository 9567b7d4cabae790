//! Honest symmetric-group computations: permutation groups at desk scale,
//! subgroup enumeration up to conjugacy, coset algebras C[S_n/H] with their
//! S_n-action, and the classification / lemma verification routines that the
//! interpolated constructions are checked against at integer fibers.

use crate::config::limits;
use crate::error::{Error, Result};
use crate::linalg::{Matrix, SpanBasis};
use crate::scalars::{Poly, Scalar};
use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};
use serde::Serialize;
use std::collections::{BTreeMap, BTreeSet};

pub fn factorial(n: usize) -> u64 {
    (1..=n as u64).product()
}

/// A permutation of {0, …, n−1}, stored as its image list.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn new(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            if i >= n || seen[i] {
                return Err(Error::Invalid(format!("not a bijection: {images:?}")));
            }
            seen[i] = true;
        }
        Ok(Permutation { images })
    }

    pub fn identity(n: usize) -> Self {
        Permutation {
            images: (0..n).collect(),
        }
    }

    pub fn transposition(n: usize, a: usize, b: usize) -> Self {
        let mut images: Vec<usize> = (0..n).collect();
        images.swap(a, b);
        Permutation { images }
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn apply(&self, x: usize) -> usize {
        self.images[x]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    /// self ∘ other: apply other first.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        Permutation {
            images: other.images.iter().map(|&x| self.images[x]).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut images = vec![0; self.images.len()];
        for (i, &j) in self.images.iter().enumerate() {
            images[j] = i;
        }
        Permutation { images }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &j)| i == j)
    }

    /// Cycle lengths in decreasing order, fixed points included.
    pub fn cycle_type(&self) -> Vec<usize> {
        let mut lens: Vec<usize> = self.cycles().iter().map(|c| c.len()).collect();
        let fixed = self.degree() - lens.iter().sum::<usize>();
        lens.extend(std::iter::repeat(1).take(fixed));
        lens.sort_unstable_by(|a, b| b.cmp(a));
        lens
    }

    /// Nontrivial cycles, each rotated to start at its minimum, sorted.
    fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut out = vec![];
        for start in 0..n {
            if seen[start] || self.images[start] == start {
                seen[start] = true;
                continue;
            }
            let mut cycle = vec![start];
            seen[start] = true;
            let mut x = self.images[start];
            while x != start {
                seen[x] = true;
                cycle.push(x);
                x = self.images[x];
            }
            out.push(cycle);
        }
        out
    }

    pub fn order(&self) -> usize {
        self.cycle_type().iter().fold(1, |acc, &l| num::integer::lcm(acc, l))
    }

    pub fn sign(&self) -> i64 {
        let transpositions: usize = self.cycles().iter().map(|c| c.len() - 1).sum();
        if transpositions % 2 == 0 {
            1
        } else {
            -1
        }
    }

    pub fn is_even(&self) -> bool {
        self.sign() == 1
    }

    /// Embeds into a larger degree, fixing the new points.
    pub fn extend(&self, n: usize) -> Result<Permutation> {
        if n < self.degree() {
            return Err(Error::SizeMismatch(self.degree(), n));
        }
        let mut images = self.images.clone();
        images.extend(self.degree()..n);
        Ok(Permutation { images })
    }

    /// Cycle notation, e.g. "(0 1)(2 3)"; "()" for the identity.
    pub fn cycle_string(&self) -> String {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return "()".into();
        }
        cycles
            .iter()
            .map(|c| {
                let inner: Vec<String> = c.iter().map(|x| x.to_string()).collect();
                format!("({})", inner.join(" "))
            })
            .collect()
    }

    /// Parses cycle notation like "(0 1)(2 3)" at the given degree.
    pub fn from_cycles(text: &str, degree: usize) -> Result<Permutation> {
        let text = text.trim();
        let mut images: Vec<usize> = (0..degree).collect();
        if text.is_empty() || text == "()" {
            return Ok(Permutation { images });
        }
        if !text.starts_with('(') || !text.ends_with(')') {
            return Err(Error::Invalid(format!("bad cycle notation: {text}")));
        }
        let mut moved = vec![false; degree];
        for chunk in text[1..text.len() - 1].split(")(") {
            let points: Vec<usize> = chunk
                .split_whitespace()
                .map(|w| {
                    w.parse::<usize>()
                        .map_err(|_| Error::Invalid(format!("bad point: {w}")))
                })
                .collect::<Result<_>>()?;
            if points.is_empty() {
                continue;
            }
            for &p in &points {
                if p >= degree {
                    return Err(Error::Invalid(format!(
                        "point {p} out of range for degree {degree}"
                    )));
                }
                if moved[p] {
                    return Err(Error::Invalid(format!("point {p} repeated")));
                }
                moved[p] = true;
            }
            for w in points.windows(2) {
                images[w[0]] = w[1];
            }
            images[*points.last().unwrap()] = points[0];
        }
        Permutation::new(images)
    }
}

/// A permutation group with its element list materialized.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PermGroup {
    degree: usize,
    generators: Vec<Permutation>,
    elements: Vec<Permutation>, // sorted, for binary-search membership
}

impl PermGroup {
    pub fn from_generators(degree: usize, generators: Vec<Permutation>) -> Result<Self> {
        for g in &generators {
            if g.degree() != degree {
                return Err(Error::SizeMismatch(g.degree(), degree));
            }
        }
        let mut set = BTreeSet::new();
        set.insert(Permutation::identity(degree));
        let mut frontier = vec![Permutation::identity(degree)];
        while let Some(x) = frontier.pop() {
            for g in &generators {
                let y = g.compose(&x);
                if set.insert(y.clone()) {
                    frontier.push(y);
                }
            }
        }
        Ok(PermGroup {
            degree,
            generators,
            elements: set.into_iter().collect(),
        })
    }

    pub fn trivial(n: usize) -> Self {
        PermGroup::from_generators(n, vec![]).unwrap()
    }

    pub fn symmetric(n: usize) -> Self {
        PermGroup::from_generators(n, adjacent_transpositions(n)).unwrap()
    }

    pub fn alternating(n: usize) -> Self {
        let gens = (0..n.saturating_sub(2))
            .map(|i| {
                // 3-cycle (i i+1 i+2)
                let mut images: Vec<usize> = (0..n).collect();
                images[i] = i + 1;
                images[i + 1] = i + 2;
                images[i + 2] = i;
                Permutation::new(images).unwrap()
            })
            .collect();
        PermGroup::from_generators(n, gens).unwrap()
    }

    /// S_m acting on the last m of n points, fixing the first n−m.
    pub fn symmetric_on_last(n: usize, m: usize) -> Self {
        let gens = (n - m..n.saturating_sub(1))
            .map(|i| Permutation::transposition(n, i, i + 1))
            .collect();
        PermGroup::from_generators(n, gens).unwrap()
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    pub fn elements(&self) -> &[Permutation] {
        &self.elements
    }

    pub fn contains(&self, p: &Permutation) -> bool {
        self.elements.binary_search(p).is_ok()
    }

    pub fn is_subgroup_of(&self, other: &PermGroup) -> bool {
        self.degree == other.degree && self.generators.iter().all(|g| other.contains(g))
    }

    pub fn conjugate_by(&self, x: &Permutation) -> PermGroup {
        let xi = x.inverse();
        let gens = self
            .generators
            .iter()
            .map(|g| x.compose(g).compose(&xi))
            .collect();
        PermGroup::from_generators(self.degree, gens).unwrap()
    }

    pub fn generator_string(&self) -> String {
        if self.generators.is_empty() {
            return "()".into();
        }
        self.generators
            .iter()
            .map(|g| g.cycle_string())
            .collect::<Vec<_>>()
            .join(",")
    }

    /// Conjugacy invariant: (order, multiset of element cycle types).
    fn invariant(&self) -> (usize, BTreeMap<Vec<usize>, usize>) {
        let mut types = BTreeMap::new();
        for e in &self.elements {
            *types.entry(e.cycle_type()).or_insert(0) += 1;
        }
        (self.order(), types)
    }

    fn element_key(&self) -> Vec<Vec<usize>> {
        self.elements.iter().map(|p| p.images.to_vec()).collect()
    }
}

fn adjacent_transpositions(n: usize) -> Vec<Permutation> {
    (0..n.saturating_sub(1))
        .map(|i| Permutation::transposition(n, i, i + 1))
        .collect()
}

/// H′ on the first k′ points times S_{n−k′} on the rest.
pub fn product_subgroup(h_prime: &PermGroup, n: usize) -> Result<PermGroup> {
    let kp = h_prime.degree();
    if kp > n {
        return Err(Error::SizeMismatch(kp, n));
    }
    let mut gens: Vec<Permutation> = h_prime
        .generators()
        .iter()
        .map(|g| g.extend(n))
        .collect::<Result<_>>()?;
    for i in kp..n.saturating_sub(1) {
        gens.push(Permutation::transposition(n, i, i + 1));
    }
    PermGroup::from_generators(n, gens)
}

/// Parses a comma-separated cycle-notation generator list, e.g.
/// "(0 1)(2 3),(0 2)".
pub fn parse_generators(text: &str, degree: usize) -> Result<PermGroup> {
    let text = text.trim();
    let gens = if text.is_empty() || text == "()" {
        vec![]
    } else {
        text.split(',')
            .map(|g| Permutation::from_cycles(g, degree))
            .collect::<Result<_>>()?
    };
    PermGroup::from_generators(degree, gens)
}

/// A conjugating element x with x·a·x⁻¹ = b inside the ambient group, if one
/// exists. Invariant-filtered before the explicit search.
pub fn conjugator(ambient: &PermGroup, a: &PermGroup, b: &PermGroup) -> Option<Permutation> {
    if a.order() != b.order() || a.invariant() != b.invariant() {
        return None;
    }
    for x in ambient.elements() {
        let xi = x.inverse();
        if a.generators()
            .iter()
            .all(|g| b.contains(&x.compose(g).compose(&xi)))
        {
            // equal orders make the containment an equality
            return Some(x.clone());
        }
    }
    None
}

/// One representative per conjugacy class of subgroups of S_n, found by
/// cyclic extension from the trivial group with conjugacy deduplication.
/// Extension elements range over the prime-power-order elements only: every
/// subgroup is generated by such elements, and conjugating a whole chain
/// keeps it a chain, so starting each step from a class representative loses
/// nothing.
pub fn subgroups_up_to_conjugacy(n: usize) -> Result<Vec<PermGroup>> {
    if n > limits().subgroup_degree {
        return Err(Error::LimitExceeded(format!(
            "subgroup enumeration degree {n} exceeds limit {}",
            limits().subgroup_degree
        )));
    }
    let g = PermGroup::symmetric(n);
    let seeds: Vec<&Permutation> = g
        .elements()
        .iter()
        .filter(|p| {
            let o = p.order();
            o > 1 && is_prime_power(o)
        })
        .collect();
    let mut reps: Vec<PermGroup> = vec![PermGroup::trivial(n)];
    let mut seen_exact: BTreeSet<Vec<Vec<usize>>> = BTreeSet::new();
    seen_exact.insert(reps[0].element_key());
    let mut cursor = 0;
    while cursor < reps.len() {
        let base = reps[cursor].clone();
        cursor += 1;
        for &e in &seeds {
            if base.contains(e) {
                continue;
            }
            let mut gens = base.generators().to_vec();
            gens.push(e.clone());
            let k = PermGroup::from_generators(n, gens)?;
            if !seen_exact.insert(k.element_key()) {
                continue;
            }
            if reps.iter().all(|r| conjugator(&g, r, &k).is_none()) {
                reps.push(k);
            }
        }
    }
    reps.sort_by_key(|r| (r.order(), r.element_key()));
    Ok(reps)
}

fn is_prime_power(mut n: usize) -> bool {
    for p in 2..=n {
        if n % p == 0 {
            while n % p == 0 {
                n /= p;
            }
            return n == 1;
        }
    }
    false
}

/// A finite-dimensional commutative algebra over Q carrying an action of a
/// finitely generated permutation group by algebra automorphisms.
#[derive(Clone, Debug)]
pub struct EquivariantAlgebra {
    dim: usize,
    /// b_i · b_j = Σ c · b_k, stored sparsely; absent pairs multiply to zero.
    mult: BTreeMap<(usize, usize), Vec<(usize, BigRational)>>,
    unit: Vec<BigRational>,
    /// Generators of the acting group, parallel to `actions`.
    generators: Vec<Permutation>,
    /// Dense action matrix per generator, actions[g][row][col].
    actions: Vec<Vec<Vec<BigRational>>>,
    labels: Vec<String>,
}

impl EquivariantAlgebra {
    pub fn new(
        dim: usize,
        mult: BTreeMap<(usize, usize), Vec<(usize, BigRational)>>,
        unit: Vec<BigRational>,
        generators: Vec<Permutation>,
        actions: Vec<Vec<Vec<BigRational>>>,
        labels: Vec<String>,
    ) -> Result<Self> {
        if unit.len() != dim || labels.len() != dim || generators.len() != actions.len() {
            return Err(Error::DimensionMismatch("algebra data sizes".into()));
        }
        for m in &actions {
            if m.len() != dim || m.iter().any(|r| r.len() != dim) {
                return Err(Error::DimensionMismatch("action matrix shape".into()));
            }
        }
        for (&(i, j), terms) in &mult {
            if i >= dim || j >= dim || terms.iter().any(|&(k, _)| k >= dim) {
                return Err(Error::DimensionMismatch("structure constant index".into()));
            }
        }
        Ok(EquivariantAlgebra {
            dim,
            mult,
            unit,
            generators,
            actions,
            labels,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn unit(&self) -> &[BigRational] {
        &self.unit
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    pub fn multiply(&self, x: &[BigRational], y: &[BigRational]) -> Vec<BigRational> {
        let mut out = vec![BigRational::zero(); self.dim];
        for (&(i, j), terms) in &self.mult {
            if x[i].is_zero() || y[j].is_zero() {
                continue;
            }
            let f = &x[i] * &y[j];
            for (k, c) in terms {
                out[*k] += c * &f;
            }
        }
        out
    }

    pub fn act(&self, gen_index: usize, x: &[BigRational]) -> Vec<BigRational> {
        let m = &self.actions[gen_index];
        (0..self.dim)
            .map(|r| {
                let mut acc = BigRational::zero();
                for c in 0..self.dim {
                    if !m[r][c].is_zero() && !x[c].is_zero() {
                        acc += &m[r][c] * &x[c];
                    }
                }
                acc
            })
            .collect()
    }

    fn basis_vec(&self, i: usize) -> Vec<BigRational> {
        let mut v = vec![BigRational::zero(); self.dim];
        v[i] = BigRational::one();
        v
    }

    /// Checks commutativity, associativity, the unit law, and that every
    /// action matrix is an algebra map fixing the unit.
    pub fn validate(&self) -> Result<()> {
        let basis: Vec<Vec<BigRational>> = (0..self.dim).map(|i| self.basis_vec(i)).collect();
        for i in 0..self.dim {
            if self.multiply(&self.unit, &basis[i]) != basis[i] {
                return Err(Error::Invalid(format!("unit law fails on basis {i}")));
            }
            for j in i..self.dim {
                let ij = self.multiply(&basis[i], &basis[j]);
                if ij != self.multiply(&basis[j], &basis[i]) {
                    return Err(Error::Invalid(format!("not commutative at ({i},{j})")));
                }
                for k in 0..self.dim {
                    let left = self.multiply(&ij, &basis[k]);
                    let right =
                        self.multiply(&basis[i], &self.multiply(&basis[j], &basis[k]));
                    if left != right {
                        return Err(Error::Invalid(format!(
                            "not associative at ({i},{j},{k})"
                        )));
                    }
                }
            }
        }
        for g in 0..self.generators.len() {
            if self.act(g, &self.unit) != self.unit {
                return Err(Error::Invalid(format!("action {g} moves the unit")));
            }
            for i in 0..self.dim {
                for j in 0..self.dim {
                    let lhs = self.act(g, &self.multiply(&basis[i], &basis[j]));
                    let rhs =
                        self.multiply(&self.act(g, &basis[i]), &self.act(g, &basis[j]));
                    if lhs != rhs {
                        return Err(Error::Invalid(format!(
                            "action {g} is not an algebra map at ({i},{j})"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Block-diagonal direct sum; the two summands must share an acting
    /// group given by identical generator lists.
    pub fn direct_sum(&self, other: &EquivariantAlgebra) -> Result<EquivariantAlgebra> {
        if self.generators != other.generators {
            return Err(Error::Invalid("acting groups differ".into()));
        }
        let dim = self.dim + other.dim;
        let mut mult = self.mult.clone();
        for (&(i, j), terms) in &other.mult {
            mult.insert(
                (self.dim + i, self.dim + j),
                terms
                    .iter()
                    .map(|(k, c)| (self.dim + k, c.clone()))
                    .collect(),
            );
        }
        let mut unit = self.unit.clone();
        unit.extend(other.unit.iter().cloned());
        let actions = self
            .actions
            .iter()
            .zip(&other.actions)
            .map(|(a, b)| {
                let mut m = vec![vec![BigRational::zero(); dim]; dim];
                for r in 0..self.dim {
                    m[r][..self.dim].clone_from_slice(&a[r]);
                }
                for r in 0..other.dim {
                    m[self.dim + r][self.dim..].clone_from_slice(&b[r]);
                }
                m
            })
            .collect();
        let mut labels: Vec<String> =
            self.labels.iter().map(|l| format!("L:{l}")).collect();
        labels.extend(other.labels.iter().map(|l| format!("R:{l}")));
        EquivariantAlgebra::new(dim, mult, unit, self.generators.clone(), actions, labels)
    }

    /// The complete set of primitive idempotents. Fast path when the basis
    /// is already a system of orthogonal scaled idempotents; otherwise joint
    /// eigenspace splitting of the multiplication operators, which requires
    /// the algebra to be split over Q and reduced.
    pub fn primitive_idempotents(&self) -> Result<Vec<Vec<BigRational>>> {
        if let Some(prims) = self.orthogonal_basis_idempotents() {
            return prims;
        }
        self.split_idempotents()
    }

    fn orthogonal_basis_idempotents(&self) -> Option<Result<Vec<Vec<BigRational>>>> {
        for (&(i, j), terms) in &self.mult {
            if i != j && !terms.iter().all(|(_, c)| c.is_zero()) {
                return None;
            }
            if i == j && terms.iter().any(|&(k, ref c)| k != i && !c.is_zero()) {
                return None;
            }
        }
        let mut prims = vec![];
        for i in 0..self.dim {
            let c = self
                .mult
                .get(&(i, i))
                .and_then(|terms| terms.iter().find(|&&(k, _)| k == i))
                .map(|(_, c)| c.clone())
                .unwrap_or_else(BigRational::zero);
            if c.is_zero() {
                return Some(Err(Error::Invalid(format!(
                    "basis vector {i} is nilpotent; algebra not reduced"
                ))));
            }
            let mut v = vec![BigRational::zero(); self.dim];
            v[i] = c.recip();
            prims.push(v);
        }
        Some(Ok(prims))
    }

    fn mult_operator(&self, i: usize) -> Vec<Vec<BigRational>> {
        let mut m = vec![vec![BigRational::zero(); self.dim]; self.dim];
        for (&(a, b), terms) in &self.mult {
            let c = if a == i {
                b
            } else if b == i {
                a
            } else {
                continue;
            };
            // commutative, so (a,b) and (b,a) carry the same data; only add
            // each column once
            if a == i || (b == i && !self.mult.contains_key(&(i, c))) {
                for (k, coef) in terms {
                    m[*k][c] += coef;
                }
            }
        }
        m
    }

    fn split_idempotents(&self) -> Result<Vec<Vec<BigRational>>> {
        if self.dim > 64 {
            return Err(Error::LimitExceeded(format!(
                "eigenspace splitting limited to dimension 64, got {}",
                self.dim
            )));
        }
        let to_scalar = |v: &[BigRational]| -> Vec<Scalar> {
            v.iter().map(|x| Scalar::from_rational(x.clone())).collect()
        };
        let mut parts: Vec<Vec<Vec<BigRational>>> =
            vec![(0..self.dim).map(|i| self.basis_vec(i)).collect()];
        for i in 0..self.dim {
            if parts.iter().all(|p| p.len() == 1) {
                break;
            }
            let m = self.mult_operator(i);
            let roots = rational_eigenvalues(&m)?;
            let mut next = vec![];
            for part in parts {
                if part.len() == 1 {
                    next.push(part);
                    continue;
                }
                let mut split = vec![];
                let mut covered = 0;
                for lambda in &roots {
                    // columns (M − λ)·v for v in the part
                    let cols: Vec<Vec<Scalar>> = part
                        .iter()
                        .map(|v| {
                            let mv: Vec<BigRational> = (0..self.dim)
                                .map(|r| {
                                    let mut acc = BigRational::zero();
                                    for c in 0..self.dim {
                                        if !m[r][c].is_zero() && !v[c].is_zero() {
                                            acc += &m[r][c] * &v[c];
                                        }
                                    }
                                    acc - lambda * &v[r]
                                })
                                .collect();
                            to_scalar(&mv)
                        })
                        .collect();
                    let w = Matrix::from_columns(cols)?;
                    let piece: Vec<Vec<BigRational>> = w
                        .kernel()
                        .into_iter()
                        .map(|coeffs| {
                            let mut v = vec![BigRational::zero(); self.dim];
                            for (j, c) in coeffs.iter().enumerate() {
                                if let Some(r) = c.as_rational() {
                                    if !r.is_zero() {
                                        for x in 0..self.dim {
                                            v[x] += r * &part[j][x];
                                        }
                                    }
                                }
                            }
                            v
                        })
                        .collect();
                    if !piece.is_empty() {
                        covered += piece.len();
                        split.push(piece);
                    }
                }
                if covered != part.len() {
                    return Err(Error::Invalid(
                        "multiplication operator not diagonalizable over Q".into(),
                    ));
                }
                next.extend(split);
            }
            parts = next;
        }
        let mut prims = vec![];
        for part in parts {
            if part.len() != 1 {
                return Err(Error::Invalid(
                    "joint eigenspaces not one-dimensional; algebra not split reduced"
                        .into(),
                ));
            }
            let v = &part[0];
            let vv = self.multiply(v, v);
            let pivot = v
                .iter()
                .position(|x| !x.is_zero())
                .ok_or_else(|| Error::Invalid("zero eigenvector".into()))?;
            let c = &vv[pivot] / &v[pivot];
            if c.is_zero() {
                return Err(Error::Invalid(
                    "nilpotent joint eigenvector; algebra not reduced".into(),
                ));
            }
            let scaled: Vec<BigRational> = vv.iter().map(|x| x / &c).collect();
            let e: Vec<BigRational> = v.iter().map(|x| x / &c).collect();
            if scaled != *v {
                return Err(Error::Invalid("eigenvector fails idempotent scaling".into()));
            }
            prims.push(e);
        }
        prims.sort();
        // sanity: the primitives resolve the unit
        let mut total = vec![BigRational::zero(); self.dim];
        for e in &prims {
            for (x, y) in total.iter_mut().zip(e) {
                *x += y;
            }
        }
        if total != self.unit {
            return Err(Error::Invalid("primitive idempotents do not sum to 1".into()));
        }
        Ok(prims)
    }
}

/// Rational eigenvalues of a rational matrix: rational roots of its
/// characteristic polynomial, found via the rational root test.
fn rational_eigenvalues(m: &[Vec<BigRational>]) -> Result<Vec<BigRational>> {
    let d = m.len();
    let mut entries = Vec::with_capacity(d * d);
    for (r, row) in m.iter().enumerate() {
        for (c, v) in row.iter().enumerate() {
            let mut p = Poly::constant(-v.clone());
            if r == c {
                p = &p + &Poly::t();
            }
            entries.push(Scalar::from_poly(p));
        }
    }
    let char_poly = Matrix::new(d, d, entries)?
        .det()?
        .as_poly()
        .ok_or_else(|| Error::Invalid("characteristic polynomial not a polynomial".into()))?;
    rational_roots(&char_poly)
}

fn rational_roots(p: &Poly) -> Result<Vec<BigRational>> {
    let mut coeffs = p.coeffs().to_vec();
    if coeffs.is_empty() {
        return Err(Error::Invalid("zero polynomial has every root".into()));
    }
    let mut roots = vec![];
    if coeffs[0].is_zero() {
        roots.push(BigRational::zero());
        while coeffs.first().is_some_and(|c| c.is_zero()) {
            coeffs.remove(0);
        }
    }
    if coeffs.len() <= 1 {
        roots.sort();
        return Ok(roots);
    }
    // clear denominators to an integer polynomial
    let mut lcm = BigInt::one();
    for c in &coeffs {
        lcm = num::integer::lcm(lcm, c.denom().clone());
    }
    let ints: Vec<BigInt> = coeffs
        .iter()
        .map(|c| (c * BigRational::from_integer(lcm.clone())).to_integer())
        .collect();
    let a0 = ints[0].abs();
    let an = ints.last().unwrap().abs();
    let d0 = small_divisors(&a0)?;
    let dn = small_divisors(&an)?;
    for p_div in &d0 {
        for q_div in &dn {
            for sign in [1i64, -1] {
                let cand = BigRational::new(BigInt::from(sign) * p_div, q_div.clone());
                if p.eval(&cand).is_zero() && !roots.contains(&cand) {
                    roots.push(cand);
                }
            }
        }
    }
    roots.sort();
    Ok(roots)
}

fn small_divisors(n: &BigInt) -> Result<Vec<BigInt>> {
    let n: u64 = n
        .abs()
        .try_into()
        .map_err(|_| Error::LimitExceeded("coefficient too large for root search".into()))?;
    if n == 0 {
        return Err(Error::Invalid("divisors of zero requested".into()));
    }
    let mut out = vec![];
    let mut d = 1u64;
    while d * d <= n {
        if n % d == 0 {
            out.push(BigInt::from(d));
            if d != n / d {
                out.push(BigInt::from(n / d));
            }
        }
        d += 1;
    }
    out.sort();
    Ok(out)
}

/// The algebra of functions on S_n/H with pointwise multiplication, in the
/// basis of coset indicators, with S_n acting by left translation through
/// the adjacent-transposition generators.
pub fn coset_algebra(n: usize, h: &PermGroup) -> Result<EquivariantAlgebra> {
    if h.degree() != n {
        return Err(Error::NotASubgroup(format!(
            "subgroup degree {} does not match n = {n}",
            h.degree()
        )));
    }
    let g = PermGroup::symmetric(n);
    let dim = g.order() / h.order();
    if dim > limits().equivariant_dim {
        return Err(Error::LimitExceeded(format!(
            "coset algebra dimension {dim} exceeds limit {}",
            limits().equivariant_dim
        )));
    }
    // assign every group element its coset index, reps in sorted-element order
    let mut coset_of: BTreeMap<&Permutation, usize> = BTreeMap::new();
    let mut reps: Vec<&Permutation> = vec![];
    for x in g.elements() {
        if coset_of.contains_key(x) {
            continue;
        }
        let idx = reps.len();
        reps.push(x);
        for y in h.elements() {
            let xy = x.compose(y);
            let stored = g
                .elements()
                .binary_search(&xy)
                .expect("product stays in the group");
            coset_of.insert(&g.elements()[stored], idx);
        }
    }
    debug_assert_eq!(reps.len(), dim);
    let mut mult = BTreeMap::new();
    for i in 0..dim {
        mult.insert((i, i), vec![(i, BigRational::one())]);
    }
    let generators = adjacent_transpositions(n);
    let actions = generators
        .iter()
        .map(|s| {
            let mut m = vec![vec![BigRational::zero(); dim]; dim];
            for (i, &rep) in reps.iter().enumerate() {
                let target = coset_of[&s.compose(rep)];
                m[target][i] = BigRational::one();
            }
            m
        })
        .collect();
    let labels = reps.iter().map(|r| r.cycle_string()).collect();
    EquivariantAlgebra::new(
        dim,
        mult,
        vec![BigRational::one(); dim],
        generators,
        actions,
        labels,
    )
}

/// Simplicity verdict with a proper invariant ideal as witness when
/// non-simple.
#[derive(Clone, Debug)]
pub struct SimplicityReport {
    pub simple: bool,
    /// Basis of a proper nonzero invariant ideal, when one exists.
    pub witness: Option<Vec<Vec<BigRational>>>,
    pub idempotent_orbits: usize,
}

/// Decides simplicity of the algebra-with-action by two independent routes
/// that must agree: (i) transitivity of the action on primitive idempotents,
/// (ii) invariant-ideal closure from each primitive idempotent (cross-checked
/// by exhaustive subset enumeration when few enough idempotents).
pub fn is_simple_equivariant(a: &EquivariantAlgebra) -> Result<SimplicityReport> {
    if a.dim() > limits().equivariant_dim {
        return Err(Error::LimitExceeded(format!(
            "algebra dimension {} exceeds limit {}",
            a.dim(),
            limits().equivariant_dim
        )));
    }
    let prims = a.primitive_idempotents()?;
    // the induced permutation of primitive idempotents per generator
    let mut index_perms = vec![];
    for g in 0..a.generators().len() {
        let perm: Vec<usize> = prims
            .iter()
            .map(|e| {
                let image = a.act(g, e);
                prims
                    .iter()
                    .position(|p| *p == image)
                    .ok_or_else(|| {
                        Error::Invalid(format!(
                            "action {g} does not permute primitive idempotents"
                        ))
                    })
            })
            .collect::<Result<_>>()?;
        index_perms.push(perm);
    }
    // decider (i): orbit count of the action on primitive idempotents
    let mut uf = crate::partitions::UnionFind::new(prims.len());
    for perm in &index_perms {
        for (i, &j) in perm.iter().enumerate() {
            uf.union(i, j);
        }
    }
    let mut orbit_roots: Vec<usize> = (0..prims.len()).map(|i| uf.find(i)).collect();
    orbit_roots.sort_unstable();
    orbit_roots.dedup();
    let orbits = orbit_roots.len();
    let simple_by_orbits = orbits == 1;
    // decider (ii): the invariant ideal generated by each primitive
    // idempotent must be everything
    let mut simple_by_ideals = true;
    let mut witness = None;
    for e in &prims {
        let ideal = invariant_ideal_closure(a, e);
        if ideal.rank() < a.dim() {
            simple_by_ideals = false;
            if witness.is_none() {
                witness = Some(ideal_basis_vectors(a, e));
            }
            break;
        }
    }
    // cross-check of decider (ii) by exhaustive subset enumeration
    if prims.len() <= 16 {
        let simple_by_subsets = invariant_subset_check(&prims, &index_perms);
        if simple_by_subsets != simple_by_ideals {
            return Err(Error::DeciderDisagreement(format!(
                "ideal closure says simple={simple_by_ideals}, subset enumeration says simple={simple_by_subsets}"
            )));
        }
    }
    if simple_by_orbits != simple_by_ideals {
        return Err(Error::DeciderDisagreement(format!(
            "orbit decider says simple={simple_by_orbits}, ideal decider says simple={simple_by_ideals}"
        )));
    }
    Ok(SimplicityReport {
        simple: simple_by_orbits,
        witness,
        idempotent_orbits: orbits,
    })
}

fn to_scalar_vec(v: &[BigRational]) -> Vec<Scalar> {
    v.iter().map(|x| Scalar::from_rational(x.clone())).collect()
}

/// Span of the smallest action-invariant ideal containing seed.
fn invariant_ideal_closure(a: &EquivariantAlgebra, seed: &[BigRational]) -> SpanBasis {
    let mut span = SpanBasis::new(a.dim());
    let mut frontier = vec![seed.to_vec()];
    span.insert(&to_scalar_vec(seed));
    while let Some(x) = frontier.pop() {
        let mut candidates = vec![];
        for i in 0..a.dim() {
            let mut b = vec![BigRational::zero(); a.dim()];
            b[i] = BigRational::one();
            candidates.push(a.multiply(&x, &b));
        }
        for g in 0..a.generators().len() {
            candidates.push(a.act(g, &x));
        }
        for y in candidates {
            if span.insert(&to_scalar_vec(&y)) {
                frontier.push(y);
            }
        }
        if span.rank() == a.dim() {
            break;
        }
    }
    span
}

fn ideal_basis_vectors(a: &EquivariantAlgebra, seed: &[BigRational]) -> Vec<Vec<BigRational>> {
    // recompute the closure keeping the rational vectors
    let mut span = SpanBasis::new(a.dim());
    let mut kept = vec![];
    let mut frontier = vec![seed.to_vec()];
    if span.insert(&to_scalar_vec(seed)) {
        kept.push(seed.to_vec());
    }
    while let Some(x) = frontier.pop() {
        let mut candidates = vec![];
        for i in 0..a.dim() {
            let mut b = vec![BigRational::zero(); a.dim()];
            b[i] = BigRational::one();
            candidates.push(a.multiply(&x, &b));
        }
        for g in 0..a.generators().len() {
            candidates.push(a.act(g, &x));
        }
        for y in candidates {
            if span.insert(&to_scalar_vec(&y)) {
                kept.push(y.clone());
                frontier.push(y);
            }
        }
    }
    kept
}

/// True iff no nonempty proper subset of primitive idempotents is invariant
/// under every induced index permutation.
fn invariant_subset_check(prims: &[Vec<BigRational>], index_perms: &[Vec<usize>]) -> bool {
    let d = prims.len();
    for mask in 1u32..(1 << d) - 1 {
        let invariant = index_perms.iter().all(|perm| {
            (0..d).all(|i| mask & (1 << i) == 0 || mask & (1 << perm[i]) != 0)
        });
        if invariant {
            return false;
        }
    }
    true
}

/// Multiplicity of the sign representation in C[S_n/H], computed directly
/// from fixed-coset counts summed over conjugacy classes.
pub fn sign_multiplicity(n: usize, h: &PermGroup) -> Result<usize> {
    if n > 8 {
        return Err(Error::LimitExceeded(format!(
            "sign multiplicity limited to n ≤ 8, got {n}"
        )));
    }
    if h.degree() != n {
        return Err(Error::NotASubgroup(format!(
            "subgroup degree {} does not match n = {n}",
            h.degree()
        )));
    }
    let g = PermGroup::symmetric(n);
    // coset representatives
    let mut covered: BTreeSet<&Permutation> = BTreeSet::new();
    let mut reps = vec![];
    for x in g.elements() {
        if covered.contains(x) {
            continue;
        }
        reps.push(x.clone());
        for y in h.elements() {
            let xy = x.compose(y);
            let idx = g.elements().binary_search(&xy).unwrap();
            covered.insert(&g.elements()[idx]);
        }
    }
    // conjugacy classes of S_n, grouped by cycle type
    let mut classes: BTreeMap<Vec<usize>, (Permutation, i64)> = BTreeMap::new();
    for x in g.elements() {
        classes
            .entry(x.cycle_type())
            .and_modify(|(_, c)| *c += 1)
            .or_insert_with(|| (x.clone(), 1));
    }
    let mut total: i64 = 0;
    for (rep, size) in classes.values() {
        let fixed = reps
            .iter()
            .filter(|x| {
                let conj = x.inverse().compose(rep).compose(x);
                h.contains(&conj)
            })
            .count() as i64;
        total += size * rep.sign() * fixed;
    }
    let order = g.order() as i64;
    if total % order != 0 || total < 0 {
        return Err(Error::Invalid(format!(
            "character sum {total} not divisible by |S_{n}| = {order}"
        )));
    }
    Ok((total / order) as usize)
}

#[derive(Clone, Debug, Serialize)]
pub struct ContainsTimesEntry {
    pub order: usize,
    pub generators: String,
    pub k_prime: usize,
    pub h_prime: String,
    pub conjugator: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct ContainsTimesReport {
    pub n: usize,
    pub k: usize,
    pub pass: bool,
    pub entries: Vec<ContainsTimesEntry>,
}

/// Verifies that every subgroup of S_n containing S_{n−k} (on the last n−k
/// points) is conjugate to some H′ × S_{n−k′} with k′ ≤ k, under the
/// hypothesis n > 2k+1. Exhaustive for n ≤ 7, k ≤ 2.
pub fn verify_contains_times(n: usize, k: usize) -> Result<ContainsTimesReport> {
    if n <= 2 * k + 1 {
        return Err(Error::Invalid(format!(
            "hypothesis requires n > 2k+1, got n = {n}, k = {k}"
        )));
    }
    if n > 7 || k > 2 {
        return Err(Error::LimitExceeded(format!(
            "exhaustive verification limited to n ≤ 7, k ≤ 2, got ({n},{k})"
        )));
    }
    let g = PermGroup::symmetric(n);
    let base = PermGroup::symmetric_on_last(n, n - k);
    // upward breadth-first search over overgroups of the base, extending by
    // double-coset representatives only (⟨H, x⟩ = ⟨H, h·x·h′⟩)
    let mut overgroups: Vec<PermGroup> = vec![base.clone()];
    let mut seen: BTreeSet<Vec<Vec<usize>>> = BTreeSet::new();
    seen.insert(base.element_key());
    let mut cursor = 0;
    while cursor < overgroups.len() {
        let h = overgroups[cursor].clone();
        cursor += 1;
        for x in double_coset_reps(&g, &h) {
            if h.contains(&x) {
                continue;
            }
            let mut gens = h.generators().to_vec();
            gens.push(x);
            let k_group = PermGroup::from_generators(n, gens)?;
            if seen.insert(k_group.element_key()) {
                overgroups.push(k_group);
            }
        }
    }
    overgroups.sort_by_key(|h| (h.order(), h.element_key()));
    // candidate targets H′ × S_{n−k′}, k′ ≤ k
    let mut targets = vec![];
    for k_prime in 0..=k {
        for h_prime in subgroups_up_to_conjugacy(k_prime)? {
            targets.push((k_prime, h_prime.clone(), product_subgroup(&h_prime, n)?));
        }
    }
    let mut entries = vec![];
    let mut pass = true;
    for h in &overgroups {
        let mut matched = None;
        for (k_prime, h_prime, target) in &targets {
            if target.order() != h.order() {
                continue;
            }
            if let Some(x) = conjugator(&g, h, target) {
                matched = Some((*k_prime, h_prime.generator_string(), x.cycle_string()));
                break;
            }
        }
        match matched {
            Some((k_prime, h_prime, conj)) => entries.push(ContainsTimesEntry {
                order: h.order(),
                generators: h.generator_string(),
                k_prime,
                h_prime,
                conjugator: conj,
            }),
            None => {
                pass = false;
                entries.push(ContainsTimesEntry {
                    order: h.order(),
                    generators: h.generator_string(),
                    k_prime: usize::MAX,
                    h_prime: "NONE".into(),
                    conjugator: "NONE".into(),
                });
            }
        }
    }
    Ok(ContainsTimesReport {
        n,
        k,
        pass,
        entries,
    })
}

/// Representatives of the double cosets HxH in G.
fn double_coset_reps(g: &PermGroup, h: &PermGroup) -> Vec<Permutation> {
    let mut seen: BTreeSet<&Permutation> = BTreeSet::new();
    let mut reps = vec![];
    for x in g.elements() {
        if seen.contains(x) {
            continue;
        }
        reps.push(x.clone());
        for a in h.elements() {
            let ax = a.compose(x);
            for b in h.elements() {
                let axb = ax.compose(b);
                let idx = g.elements().binary_search(&axb).unwrap();
                seen.insert(&g.elements()[idx]);
            }
        }
    }
    reps
}

/// Equivariant algebra isomorphism from a fiber algebra onto
/// C[S_n/(H×S_{n−k})], or None. The isomorphism is found by matching
/// primitive idempotents compatibly with the two S_n-actions.
pub fn match_fiber_algebra(
    a_fiber: &EquivariantAlgebra,
    n: usize,
    k: usize,
    h: &PermGroup,
) -> Result<Option<Matrix>> {
    if h.degree() != k {
        return Err(Error::NotASubgroup(format!(
            "H has degree {}, expected {k}",
            h.degree()
        )));
    }
    let expected = factorial(n) / (h.order() as u64 * factorial(n - k));
    if a_fiber.dim() as u64 != expected {
        return Ok(None);
    }
    let target = coset_algebra(n, &product_subgroup(h, n)?)?;
    if a_fiber.generators() != target.generators() {
        return Err(Error::Invalid("acting-group generator lists differ".into()));
    }
    let prims_a = a_fiber.primitive_idempotents()?;
    let prims_b = target.primitive_idempotents()?;
    if prims_a.len() != prims_b.len() {
        return Ok(None);
    }
    let perms_a = induced_index_perms(a_fiber, &prims_a)?;
    let perms_b = induced_index_perms(&target, &prims_b)?;
    let Some(matching) = equivariant_point_matching(n, &perms_a, &perms_b) else {
        return Ok(None);
    };
    // change of basis through the primitive idempotents: columns of E are
    // the idempotents, φ = E_B∘matching · E_A⁻¹
    let e_a = Matrix::from_columns(prims_a.iter().map(|v| to_scalar_vec(v)).collect())?;
    let e_b = Matrix::from_columns(
        matching
            .iter()
            .map(|&j| to_scalar_vec(&prims_b[j]))
            .collect(),
    )?;
    let e_a_inv = e_a
        .solve_right_inverse()
        .ok_or_else(|| Error::Invalid("primitive idempotents not a basis".into()))?;
    let phi = e_b.mul(&e_a_inv)?;
    verify_algebra_map(a_fiber, &target, &phi)?;
    Ok(Some(phi))
}

fn induced_index_perms(
    a: &EquivariantAlgebra,
    prims: &[Vec<BigRational>],
) -> Result<Vec<Vec<usize>>> {
    (0..a.generators().len())
        .map(|g| {
            prims
                .iter()
                .map(|e| {
                    let image = a.act(g, e);
                    prims.iter().position(|p| *p == image).ok_or_else(|| {
                        Error::Invalid("action does not permute primitive idempotents".into())
                    })
                })
                .collect()
        })
        .collect()
}

/// Given the generator actions of two transitive S_n-sets on the same index
/// count, finds an equivariant bijection (as an image list), or None.
fn equivariant_point_matching(
    n: usize,
    perms_a: &[Vec<usize>],
    perms_b: &[Vec<usize>],
) -> Option<Vec<usize>> {
    let d = perms_a[0].len();
    let g = PermGroup::symmetric(n);
    // express every σ ∈ S_n as a word in the adjacent transpositions via
    // bubble sort, then compose its action on each side
    let word = |sigma: &Permutation| -> Vec<usize> {
        let mut arr = sigma.images().to_vec();
        let mut w = vec![];
        // sorting σ by adjacent swaps writes σ⁻¹ as a product; reverse gives σ
        loop {
            let mut swapped = false;
            for i in 0..arr.len().saturating_sub(1) {
                if arr[i] > arr[i + 1] {
                    arr.swap(i, i + 1);
                    w.push(i);
                    swapped = true;
                }
            }
            if !swapped {
                break;
            }
        }
        w.reverse();
        w
    };
    let act_all = |perms: &[Vec<usize>]| -> Vec<Vec<usize>> {
        g.elements()
            .iter()
            .map(|sigma| {
                let mut map: Vec<usize> = (0..d).collect();
                for gi in word(sigma) {
                    map = map.iter().map(|&x| perms[gi][x]).collect();
                }
                map
            })
            .collect()
    };
    let maps_a = act_all(perms_a);
    let maps_b = act_all(perms_b);
    // stabilizer of point 0 on the A side, as element indices
    let stab_a: Vec<usize> = (0..maps_a.len()).filter(|&i| maps_a[i][0] == 0).collect();
    let q = (0..d).find(|&q| {
        let stab_q: Vec<usize> =
            (0..maps_b.len()).filter(|&i| maps_b[i][q] == q).collect();
        stab_q == stab_a
    })?;
    // transport: x = σ·0 ↦ σ·q; well-defined because Stab(0) ⊆ Stab(q)
    let mut matching = vec![usize::MAX; d];
    for (ma, mb) in maps_a.iter().zip(&maps_b) {
        let x = ma[0];
        let y = mb[q];
        if matching[x] == usize::MAX {
            matching[x] = y;
        } else if matching[x] != y {
            return None;
        }
    }
    if matching.iter().any(|&y| y == usize::MAX) {
        return None; // not transitive
    }
    let mut seen = vec![false; d];
    for &y in &matching {
        if seen[y] {
            return None;
        }
        seen[y] = true;
    }
    Some(matching)
}

fn verify_algebra_map(
    a: &EquivariantAlgebra,
    b: &EquivariantAlgebra,
    phi: &Matrix,
) -> Result<()> {
    let apply = |v: &[BigRational]| -> Result<Vec<BigRational>> {
        Ok(phi
            .apply(&to_scalar_vec(v))?
            .into_iter()
            .map(|s| s.as_rational().cloned().unwrap_or_else(BigRational::zero))
            .collect())
    };
    if apply(a.unit())? != b.unit() {
        return Err(Error::Invalid("isomorphism does not preserve the unit".into()));
    }
    let basis: Vec<Vec<BigRational>> = (0..a.dim()).map(|i| a.basis_vec(i)).collect();
    for i in 0..a.dim() {
        for j in i..a.dim() {
            let lhs = apply(&a.multiply(&basis[i], &basis[j]))?;
            let rhs = b.multiply(&apply(&basis[i])?, &apply(&basis[j])?);
            if lhs != rhs {
                return Err(Error::Invalid(format!(
                    "isomorphism fails multiplicativity at ({i},{j})"
                )));
            }
        }
        for g in 0..a.generators().len() {
            let lhs = apply(&a.act(g, &basis[i]))?;
            let rhs = b.act(g, &apply(&basis[i])?);
            if lhs != rhs {
                return Err(Error::Invalid(format!(
                    "isomorphism fails equivariance at generator {g}, basis {i}"
                )));
            }
        }
    }
    Ok(())
}

#[derive(Clone, Debug, Serialize)]
pub struct ClassRow {
    pub class_id: usize,
    pub order: usize,
    pub generators: String,
    pub simple: bool,
}

/// The classification table: one row per conjugacy class of subgroups
/// H ≤ S_n, with the simplicity verdict for C[S_n/H].
pub fn classify_repsn(n: usize) -> Result<Vec<ClassRow>> {
    subgroups_up_to_conjugacy(n)?
        .iter()
        .enumerate()
        .map(|(i, h)| {
            let algebra = coset_algebra(n, h)?;
            let report = is_simple_equivariant(&algebra)?;
            Ok(ClassRow {
                class_id: i,
                order: h.order(),
                generators: h.generator_string(),
                simple: report.simple,
            })
        })
        .collect()
}
