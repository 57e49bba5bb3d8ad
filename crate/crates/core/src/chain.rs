//! Turns Hopf powers into explicit Markov transition matrices via basis
//! rescaling, and provides stationarity, distances, and trajectory sampling.

use crate::error::{HopfError, Result};
use crate::gens::{AlgebraKind, BasisElt, GeneratorId, LinComb, Partition};
use crate::hopf::{self, HopfInstance, RescaleMap, RescaledInstance};
use crate::ratio::{big, factorial, pow_rat, rat, Rat};
use num_traits::{One, Signed, Zero};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;

/// Computes the multiplicative generator rescaling φ that makes a^{-n}Ψ^a
/// row-stochastic, by induction on degree:
///   φ(c) = 1 for deg(c) = 1,
///   φ(c) = Σ_{b≠c} φ(b) K_2(c,b) / (1 - 2^{1-deg c}) for deg(c) > 1.
/// Fails with `NoMarkovRescaling` when a generator of degree > 1 is
/// primitive, and `NotNonnegative` when a coproduct coefficient is negative.
pub fn rescale(inst: &dyn HopfInstance, max_degree: u32) -> Result<RescaleMap> {
    let mut map = RescaleMap::identity();
    for d in 1..=max_degree {
        for c in inst.generators(d)? {
            if d == 1 {
                map.insert(c, Rat::one());
                continue;
            }
            let cop = inst.coproduct_generator(c)?;
            if !hopf::nonnegative(&cop) {
                return Err(HopfError::NotNonnegative {
                    generator: inst.generator_label(c),
                });
            }
            let celt = BasisElt::generator(c);
            let reduced = hopf::reduced_coproduct(inst, &celt)?;
            if reduced.is_zero() {
                return Err(HopfError::NoMarkovRescaling {
                    generator: inst.generator_label(c),
                    degree: d,
                });
            }
            // K_2(c, ·) = 2^{-d} Ψ^2(c)
            let sq = hopf::hopf_power(inst, &celt, 2)?;
            let two_pow = pow_rat(&rat(2), d);
            let diag = sq.coeff(&celt) / &two_pow;
            let expected_diag = pow_rat(&crate::ratio::frac(1, 2), d - 1);
            if diag != expected_diag {
                return Err(HopfError::InternalInconsistency(format!(
                    "diagonal of K_2 at generator {} is {} (expected 2^{})",
                    inst.generator_label(c),
                    crate::ratio::format_rat(&diag),
                    1 - d as i64
                )));
            }
            let mut off_sum = Rat::zero();
            for (b, coeff) in sq.iter() {
                if *b == celt {
                    continue;
                }
                off_sum += map.phi(b) * coeff / &two_pow;
            }
            let phi_c = off_sum / (Rat::one() - expected_diag);
            map.insert(c, phi_c);
        }
    }
    Ok(map)
}

/// Whether the chain runs in the Hopf direction (Ψ^a read on the basis: the
/// inverse-shuffle direction for word instances, the chain itself for
/// polynomial instances) or the transposed, forward direction.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ChainDirection {
    HopfInverse,
    Forward,
}

/// An exact row-stochastic matrix over a canonically ordered degree-n basis.
/// Rows are stored sparse (sorted by column).
#[derive(Clone, Debug)]
pub struct TransitionMatrix {
    pub instance: String,
    pub n: u32,
    pub a: u32,
    pub direction: ChainDirection,
    pub basis: Vec<BasisElt>,
    pub labels: Vec<String>,
    pub rows: Vec<Vec<(usize, Rat)>>,
    index: BTreeMap<BasisElt, usize>,
}

impl TransitionMatrix {
    pub fn from_rows(
        instance: String,
        n: u32,
        a: u32,
        direction: ChainDirection,
        basis: Vec<BasisElt>,
        labels: Vec<String>,
        rows: Vec<Vec<(usize, Rat)>>,
    ) -> Result<Self> {
        let index: BTreeMap<BasisElt, usize> =
            basis.iter().cloned().enumerate().map(|(i, b)| (b, i)).collect();
        let m = TransitionMatrix { instance, n, a, direction, basis, labels, rows, index };
        m.check_stochastic()?;
        Ok(m)
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn index_of(&self, b: &BasisElt) -> Option<usize> {
        self.index.get(b).copied()
    }

    pub fn entry(&self, i: usize, j: usize) -> Rat {
        match self.rows[i].binary_search_by(|(c, _)| c.cmp(&j)) {
            Ok(pos) => self.rows[i][pos].1.clone(),
            Err(_) => Rat::zero(),
        }
    }

    pub fn row_dense(&self, i: usize) -> Vec<Rat> {
        let mut out = vec![Rat::zero(); self.dim()];
        for (j, v) in &self.rows[i] {
            out[*j] = v.clone();
        }
        out
    }

    pub fn to_dense(&self) -> Vec<Vec<Rat>> {
        (0..self.dim()).map(|i| self.row_dense(i)).collect()
    }

    /// Every row must sum to exactly 1 with nonnegative entries.
    fn check_stochastic(&self) -> Result<()> {
        for (i, row) in self.rows.iter().enumerate() {
            let mut sum = Rat::zero();
            for (_, v) in row {
                if v.is_negative() {
                    return Err(HopfError::InternalInconsistency(format!(
                        "negative entry in row {}",
                        self.labels[i]
                    )));
                }
                sum += v;
            }
            if !sum.is_one() {
                return Err(HopfError::InternalInconsistency(format!(
                    "row {} sums to {}, not 1",
                    self.labels[i],
                    crate::ratio::format_rat(&sum)
                )));
            }
        }
        Ok(())
    }

    /// Exact product: (self * other)(x, z) = Σ_y self(x,y) other(y,z).
    pub fn multiply(&self, other: &TransitionMatrix) -> Result<TransitionMatrix> {
        if self.basis != other.basis {
            return Err(HopfError::InvalidInput("matrix product needs matching bases".into()));
        }
        let mut rows = Vec::with_capacity(self.dim());
        for i in 0..self.dim() {
            let mut acc: BTreeMap<usize, Rat> = BTreeMap::new();
            for (y, v) in &self.rows[i] {
                for (z, w) in &other.rows[*y] {
                    let e = acc.entry(*z).or_insert_with(Rat::zero);
                    *e += v * w;
                }
            }
            rows.push(acc.into_iter().filter(|(_, v)| !v.is_zero()).collect());
        }
        TransitionMatrix::from_rows(
            self.instance.clone(),
            self.n,
            self.a * other.a,
            self.direction,
            self.basis.clone(),
            self.labels.clone(),
            rows,
        )
    }

    /// Exact k-th power (k >= 1).
    pub fn power(&self, k: u32) -> Result<TransitionMatrix> {
        let mut acc = self.clone();
        for _ in 1..k {
            acc = acc.multiply(self)?;
        }
        Ok(acc)
    }

    /// The transposed chain (rows renormalized are not needed: for the word
    /// instances the matrix is doubly stochastic, so the transpose is the
    /// forward chain).
    pub fn transpose(&self) -> Result<TransitionMatrix> {
        let mut rows: Vec<Vec<(usize, Rat)>> = vec![Vec::new(); self.dim()];
        for i in 0..self.dim() {
            for (j, v) in &self.rows[i] {
                rows[*j].push((i, v.clone()));
            }
        }
        for r in &mut rows {
            r.sort_by_key(|(c, _)| *c);
        }
        let direction = match self.direction {
            ChainDirection::HopfInverse => ChainDirection::Forward,
            ChainDirection::Forward => ChainDirection::HopfInverse,
        };
        TransitionMatrix::from_rows(
            self.instance.clone(),
            self.n,
            self.a,
            direction,
            self.basis.clone(),
            self.labels.clone(),
            rows,
        )
    }

    /// Row i as an exact distribution.
    pub fn row_distribution(&self, i: usize) -> LinComb<BasisElt> {
        let mut out = LinComb::zero();
        for (j, v) in &self.rows[i] {
            out.add_term(self.basis[*j].clone(), v.clone());
        }
        out
    }
}

/// K̂_a on the degree-n block of the rescaled basis: row b lists the
/// coefficients of a^{-n} Ψ^a(b̂). Lower-triangular with diagonal a^{l(b)-n}
/// in the polynomial case.
pub fn transition_matrix(inst: &RescaledInstance, n: u32, a: u32) -> Result<TransitionMatrix> {
    if a < 1 {
        return Err(HopfError::InvalidInput("shuffle parameter a must be >= 1".into()));
    }
    inst.check_degree(n)?;
    let basis = inst.enumerate_basis(n)?;
    let labels: Vec<String> = basis.iter().map(|b| inst.basis_label(b)).collect();
    let index: BTreeMap<&BasisElt, usize> = basis.iter().enumerate().map(|(i, b)| (b, i)).collect();
    let scale = Rat::one() / pow_rat(&rat(a as i64), n);
    let mut rows = Vec::with_capacity(basis.len());
    for b in &basis {
        let image = if inst.content_graded() {
            // primitive degree-one letters: Ψ^a is the inverse a-shuffle, so
            // the expansion is a digit per card followed by a stable sort
            // (agrees with the generic path; checked in tests)
            deck_power_fast(b, a)
        } else {
            hopf::hopf_power(inst, b, a)?
        };
        let mut row: Vec<(usize, Rat)> = Vec::with_capacity(image.len());
        for (b2, v) in image.iter() {
            let j = *index.get(b2).ok_or_else(|| {
                HopfError::InternalInconsistency(format!(
                    "power image {} escapes the degree block",
                    inst.basis_label(b2)
                ))
            })?;
            row.push((j, v * &scale));
        }
        row.sort_by_key(|(c, _)| *c);
        rows.push(row);
    }
    TransitionMatrix::from_rows(
        inst.name(),
        n,
        a,
        ChainDirection::HopfInverse,
        basis,
        labels,
        rows,
    )
}

/// Ψ^a(w) for a word of primitive degree-one letters, by enumerating the
/// a^n digit assignments and stable-sorting.
fn deck_power_fast(b: &BasisElt, a: u32) -> LinComb<BasisElt> {
    let letters = b.factors();
    let n = letters.len();
    let mut out = LinComb::zero();
    let mut digits = vec![0u32; n];
    loop {
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&i| digits[i]);
        let word: Vec<GeneratorId> = order.iter().map(|&i| letters[i]).collect();
        out.add_term(BasisElt::word(word), Rat::one());
        // increment the digit vector
        let mut pos = n;
        loop {
            if pos == 0 {
                return out;
            }
            pos -= 1;
            digits[pos] += 1;
            if digits[pos] < a {
                break;
            }
            digits[pos] = 0;
        }
    }
}

/// Builds the rescaled instance (running the φ recursion through `degree`).
pub fn markov_instance(inst: &dyn HopfInstance, degree: u32) -> Result<RescaledInstance<'_>> {
    let map = rescale(inst, degree)?;
    Ok(RescaledInstance::new(inst, map))
}

/// K_a · K_b == K_{ab}, exactly.
pub fn power_law_check(inst: &RescaledInstance, n: u32, a: u32, b: u32) -> Result<bool> {
    let ka = transition_matrix(inst, n, a)?;
    let kb = transition_matrix(inst, n, b)?;
    let kab = transition_matrix(inst, n, a * b)?;
    let prod = ka.multiply(&kb)?;
    Ok(prod.rows == kab.rows)
}

/// Stationary structure of the chain on the degree-n block.
pub enum StationarySet {
    /// Polynomial case: the absorbing states (products of degree-one
    /// generators); they are exactly the 1-eigenspace basis.
    Absorbing(Vec<BasisElt>),
    /// Free case: one uniform stationary distribution per multiset of n
    /// degree-one generators, plus the absorbing states c^n.
    UniformFamilies { families: Vec<Vec<BasisElt>>, absorbing: Vec<BasisElt> },
}

pub fn stationary_set(inst: &RescaledInstance, n: u32) -> Result<StationarySet> {
    let basis = inst.enumerate_basis(n)?;
    match inst.kind() {
        AlgebraKind::Polynomial => {
            let absorbing: Vec<BasisElt> = basis
                .into_iter()
                .filter(|b| b.factors().iter().all(|c| c.degree == 1))
                .collect();
            Ok(StationarySet::Absorbing(absorbing))
        }
        AlgebraKind::FreeCocommutative => {
            let mut by_content: BTreeMap<Vec<GeneratorId>, Vec<BasisElt>> = BTreeMap::new();
            for b in basis {
                if b.factors().iter().all(|c| c.degree == 1) {
                    by_content.entry(b.sorted_factors()).or_default().push(b);
                }
            }
            let families: Vec<Vec<BasisElt>> = by_content.into_values().collect();
            let absorbing = families
                .iter()
                .filter(|f| f.len() == 1)
                .map(|f| f[0].clone())
                .collect();
            Ok(StationarySet::UniformFamilies { families, absorbing })
        }
    }
}

/// Total variation, separation, and sup distances between a transition row
/// and a target distribution. Separation and sup are undefined (`None`) when
/// π vanishes somewhere.
pub struct DistanceReport {
    pub tv: Rat,
    pub sep: Option<Rat>,
    pub linf: Option<Rat>,
}

pub fn distances(
    basis: &[BasisElt],
    row: &LinComb<BasisElt>,
    pi: &LinComb<BasisElt>,
) -> DistanceReport {
    let mut tv = Rat::zero();
    let mut sep: Option<Rat> = Some(Rat::zero());
    let mut linf: Option<Rat> = Some(Rat::zero());
    for b in basis {
        let k = row.coeff(b);
        let p = pi.coeff(b);
        tv += (&k - &p).abs();
        if p.is_zero() {
            sep = None;
            linf = None;
        } else {
            if let Some(s) = sep.as_mut() {
                let cand = Rat::one() - &k / &p;
                if cand > *s {
                    *s = cand;
                }
            }
            if let Some(l) = linf.as_mut() {
                let cand = (&k - &p).abs() / &p;
                if cand > *l {
                    *l = cand;
                }
            }
        }
    }
    tv /= rat(2);
    // TV <= sep <= l∞ whenever the latter are defined
    if let (Some(s), Some(l)) = (&sep, &linf) {
        debug_assert!(tv <= *s && s <= l);
    }
    DistanceReport { tv, sep, linf }
}

/// Quasi-stationary distributions (limiting laws conditioned on
/// non-absorption): π¹ ∝ g_1 and π² ∝ g_1·f_1 off the absorbing state.
/// Requires a unique absorbing state and a simple second eigenvalue.
pub fn quasi_stationary(
    inst: &RescaledInstance,
    n: u32,
) -> Result<(LinComb<BasisElt>, LinComb<BasisElt>)> {
    let sys = crate::spectral::eigensystem(inst, n)?;
    match stationary_set(inst, n)? {
        StationarySet::Absorbing(v) if v.len() == 1 => quasi_from_system(&sys, &v[0]),
        StationarySet::Absorbing(v) => Err(HopfError::NotApplicable(format!(
            "{} absorbing states; quasi-stationarity needs exactly one",
            v.len()
        ))),
        StationarySet::UniformFamilies { .. } => Err(HopfError::NotApplicable(
            "free instances have non-absorbing stationary families".into(),
        )),
    }
}

fn quasi_from_system(
    sys: &crate::spectral::EigenSystem,
    absorbing: &BasisElt,
) -> Result<(LinComb<BasisElt>, LinComb<BasisElt>)> {
    let n = sys.n;
    let second: Vec<usize> = (0..sys.left.len())
        .filter(|&i| sys.left[i].exponent == n - 1)
        .collect();
    if second.len() != 1 {
        return Err(HopfError::NotApplicable(format!(
            "second eigenvalue has multiplicity {}",
            second.len()
        )));
    }
    let g1 = &sys.left[second[0]].coeffs;
    let f1 = &sys.right[second[0]].coeffs;
    let mut pi1 = LinComb::zero();
    let mut pi2 = LinComb::zero();
    for (b, v) in g1.iter() {
        if b == absorbing {
            continue;
        }
        pi1.add_term(b.clone(), v.clone());
        let fv = f1.coeff(b);
        pi2.add_term(b.clone(), v * fv);
    }
    let norm1 = pi1.total();
    let norm2 = pi2.total();
    if norm1.is_zero() || norm2.is_zero() {
        return Err(HopfError::InternalInconsistency(
            "quasi-stationary normalization vanished".into(),
        ));
    }
    let pi1 = pi1.scale(&(Rat::one() / norm1));
    let pi2 = pi2.scale(&(Rat::one() / norm2));
    // Perron-Frobenius guarantees nonnegativity on the non-absorbed states
    if pi1.iter().any(|(_, v)| v.is_negative()) || pi2.iter().any(|(_, v)| v.is_negative()) {
        return Err(HopfError::InternalInconsistency(
            "quasi-stationary distribution has a negative mass".into(),
        ));
    }
    Ok((pi1, pi2))
}

// ---------------------------------------------------------------------------
// Simulation

/// One trajectory of the chain, reproducible from the seed. Uses native
/// samplers where the instance has one (rock-breaking multinomial splits,
/// inverse a-shuffle digits, uniform colorings) and falls back to exact
/// categorical sampling of matrix rows.
pub struct Simulator<'a> {
    inst: &'a RescaledInstance<'a>,
    n: u32,
    a: u32,
    row_cache: BTreeMap<BasisElt, LinComb<BasisElt>>,
}

impl<'a> Simulator<'a> {
    pub fn new(inst: &'a RescaledInstance<'a>, n: u32, a: u32) -> Result<Self> {
        if a < 1 {
            return Err(HopfError::InvalidInput("shuffle parameter a must be >= 1".into()));
        }
        inst.check_degree(n)?;
        Ok(Simulator { inst, n, a, row_cache: BTreeMap::new() })
    }

    pub fn trajectory(
        &mut self,
        start: &BasisElt,
        steps: u32,
        seed: u64,
        stream: u64,
    ) -> Result<Vec<BasisElt>> {
        if start.degree() != self.n {
            return Err(HopfError::InvalidInput(format!(
                "start state has degree {}, block is degree {}",
                start.degree(),
                self.n
            )));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        let mut out = Vec::with_capacity(steps as usize + 1);
        let mut state = start.clone();
        out.push(state.clone());
        for _ in 0..steps {
            state = self.step(&state, &mut rng)?;
            out.push(state.clone());
        }
        Ok(out)
    }

    pub fn step(&mut self, state: &BasisElt, rng: &mut ChaCha8Rng) -> Result<BasisElt> {
        let name = self.inst.name();
        if name == "sym" {
            return Ok(rock_native_step(state, self.a, rng));
        }
        if name.starts_with("deck") {
            return Ok(deck_native_step(state, self.a, rng));
        }
        if name == "graph" {
            return graph_native_step(state, self.a, rng);
        }
        if name == "labeled-graph" {
            return Ok(labeled_graph_native_step(state, self.a, rng));
        }
        if name == "complex" {
            return complex_native_step(state, self.a, rng);
        }
        // generic: exact categorical sampling of the matrix row
        let row = match self.row_cache.get(state) {
            Some(r) => r.clone(),
            None => {
                let image = hopf::hopf_power(self.inst, state, self.a)?;
                let scale = Rat::one() / pow_rat(&rat(self.a as i64), self.n);
                let row = image.scale(&scale);
                self.row_cache.insert(state.clone(), row.clone());
                row
            }
        };
        Ok(sample_exact(&row, rng))
    }
}

/// Samples from an exact rational distribution using a uniform draw with
/// denominator 2^64.
pub fn sample_exact(dist: &LinComb<BasisElt>, rng: &mut ChaCha8Rng) -> BasisElt {
    let u: u64 = rng.gen();
    let target = Rat::new(u.into(), (u128::from(u64::MAX) + 1).into());
    let mut acc = Rat::zero();
    let mut last = None;
    for (b, p) in dist.iter() {
        acc += p;
        last = Some(b);
        if target < acc {
            return b.clone();
        }
    }
    last.expect("distribution is nonempty").clone()
}

fn rock_native_step(state: &BasisElt, a: u32, rng: &mut ChaCha8Rng) -> BasisElt {
    // break each part with a symmetric multinomial split into a pieces
    let mut parts: Vec<u32> = Vec::new();
    for &c in state.factors() {
        let mut boxes = vec![0u32; a as usize];
        for _ in 0..c.degree {
            boxes[rng.gen_range(0..a) as usize] += 1;
        }
        parts.extend(boxes.into_iter().filter(|&p| p > 0));
    }
    crate::instances::symfn::SymFnInstance::partition_to_elt(&Partition::new(parts))
}

fn deck_native_step(state: &BasisElt, a: u32, rng: &mut ChaCha8Rng) -> BasisElt {
    // inverse a-shuffle: i.i.d. uniform digit per card, then stable sort
    let values = crate::instances::deck::DeckInstance::values_of(state);
    let digits: Vec<u32> = values.iter().map(|_| rng.gen_range(0..a)).collect();
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by_key(|&i| digits[i]);
    let new_values: Vec<u32> = order.iter().map(|&i| values[i]).collect();
    crate::instances::deck::DeckInstance::word_from_values(&new_values)
}

fn color_classes(n: u32, a: u32, rng: &mut ChaCha8Rng) -> Vec<Vec<u32>> {
    let colors: Vec<u32> = (0..n).map(|_| rng.gen_range(0..a)).collect();
    (0..a)
        .map(|c| (0..n).filter(|&v| colors[v as usize] == c).collect())
        .collect()
}

fn graph_native_step(state: &BasisElt, a: u32, rng: &mut ChaCha8Rng) -> Result<BasisElt> {
    use crate::instances::graphs::UnlabeledGraphInstance;
    // color vertices of a disjoint-union realization, keep monochromatic edges
    let g = crate::instances::graphs::labeled_graph_of_elt(state);
    let classes = color_classes(g.vertices, a, rng);
    let mut gens = Vec::new();
    for class in classes {
        let sub = g.induced(&class);
        let elt = UnlabeledGraphInstance::elt_of_graph(&sub)?;
        gens.extend(elt.factors().iter().copied());
    }
    Ok(BasisElt::from_factors(AlgebraKind::Polynomial, gens))
}

fn labeled_graph_native_step(state: &BasisElt, a: u32, rng: &mut ChaCha8Rng) -> BasisElt {
    use crate::instances::graphs::{labeled_graph_of_elt, LabeledGraphInstance};
    let g = labeled_graph_of_elt(state);
    let classes = color_classes(g.vertices, a, rng);
    // vertices regroup by color class, keeping relative order within a class
    let mut word = Vec::new();
    for class in classes {
        let sub = g.induced(&class);
        let elt = LabeledGraphInstance::elt_of_graph(&sub);
        word.extend(elt.factors().iter().copied());
    }
    BasisElt::word(word)
}

fn complex_native_step(state: &BasisElt, a: u32, rng: &mut ChaCha8Rng) -> Result<BasisElt> {
    use crate::instances::simplicial::{ComplexData, SimplicialInstance};
    // realize the monomial as a disjoint union, then color
    let mut vertices = 0u32;
    let mut maximal: Vec<u32> = Vec::new();
    for &c in state.factors() {
        let cx = ComplexData { vertices: c.degree, faces: c.key };
        for f in cx.maximal_faces() {
            maximal.push(f << vertices);
        }
        vertices += c.degree;
    }
    let joint = ComplexData::from_maximal_faces(vertices, &maximal)?;
    let classes = color_classes(vertices, a, rng);
    let mut gens = Vec::new();
    for class in classes {
        let sub = joint.induced(&class);
        let elt = SimplicialInstance::elt_of_complex(&sub)?;
        gens.extend(elt.factors().iter().copied());
    }
    Ok(BasisElt::from_factors(AlgebraKind::Polynomial, gens))
}

// ---------------------------------------------------------------------------
// Rock-breaking closed forms (balls in boxes)

/// Occupancy law: the distribution after k steps of the a=2 chain from (n)
/// equals dropping n balls into 2^k boxes and reading off the nonempty box
/// counts. m = 2^k boxes.
pub fn rock_occupancy_from_n(n: u32, k: u32) -> LinComb<BasisElt> {
    let m = big(&num_bigint::BigInt::from(2u64).pow(k));
    let mut out = LinComb::zero();
    for lambda in crate::gens::partitions_of(n) {
        // n! * (m)_{l} / (m^n * Π a_i! * Π (i!)^{a_i})
        let l = lambda.len() as u64;
        let mut falling = Rat::one();
        for i in 0..l {
            falling *= &m - rat(i as i64);
        }
        let mut denom = big(&lambda.mult_factorial());
        for &p in &lambda.0 {
            denom *= big(&factorial(p as u64));
        }
        let prob = big(&factorial(n as u64)) * falling / (pow_rat(&m, n) * denom);
        if !prob.is_zero() {
            out.add_term(
                crate::instances::symfn::SymFnInstance::partition_to_elt(&lambda),
                prob,
            );
        }
    }
    out
}

/// P^k(μ, ·) as the convolution over the parts of μ of the single-part laws.
pub fn rock_occupancy_from(mu: &Partition, k: u32) -> LinComb<BasisElt> {
    let mut acc: LinComb<BasisElt> = LinComb::singleton(BasisElt::unit(), Rat::one());
    for &p in &mu.0 {
        let part_law = rock_occupancy_from_n(p, k);
        let mut next = LinComb::zero();
        for (b1, v1) in acc.iter() {
            for (b2, v2) in part_law.iter() {
                next.add_term(b1.mul(b2, AlgebraKind::Polynomial), v1 * v2);
            }
        }
        acc = next;
    }
    acc
}

/// Exact absorption probability after k steps from (n):
/// ∏_{i=1}^{n-1}(1 - i/2^k).
pub fn rock_absorption_closed_form(n: u32, k: u32) -> Rat {
    let m = big(&num_bigint::BigInt::from(2u64).pow(k));
    let mut acc = Rat::one();
    for i in 1..n {
        acc *= Rat::one() - rat(i as i64) / &m;
    }
    acc
}

/// One-step law of a single part of size n under the a=2 break:
/// P{left piece has mass j} = binom(n, j)/2^n.
pub fn rock_one_break_law(n: u32) -> LinComb<BasisElt> {
    let mut out = LinComb::zero();
    let denom = pow_rat(&rat(2), n);
    for j in 0..=n {
        let parts = Partition::new(vec![j, n - j]);
        out.add_term(
            crate::instances::symfn::SymFnInstance::partition_to_elt(&parts),
            big(&crate::ratio::binomial(n as u64, j as u64)) / &denom,
        );
    }
    out
}

/// Multiplicity generating function extraction:
/// coefficient of x^n y^l in Π_i (1 - y x^i)^{-d_i}.
pub fn eigenvalue_multiplicities(degree_counts: &[(u32, u64)], n: u32) -> BTreeMap<u32, num_bigint::BigInt> {
    // poly[d][l] = number of multisets of generators with total degree d and l factors
    let mut poly: Vec<Vec<num_bigint::BigInt>> =
        vec![vec![num_bigint::BigInt::zero(); n as usize + 1]; n as usize + 1];
    poly[0][0] = num_bigint::BigInt::one();
    for &(i, d_i) in degree_counts {
        if i == 0 || i > n {
            continue;
        }
        // multiply by (1 - y x^i)^{-d_i}: choose j >= 0 items of degree i with
        // multiplicity multichoose(d_i, j)
        let mut next = vec![vec![num_bigint::BigInt::zero(); n as usize + 1]; n as usize + 1];
        for d in 0..=n as usize {
            for l in 0..=n as usize {
                if poly[d][l].is_zero() {
                    continue;
                }
                let mut j = 0usize;
                while d + j * i as usize <= n as usize && l + j <= n as usize {
                    // multichoose(d_i, j) = binom(d_i + j - 1, j)
                    let ways = crate::ratio::binomial_int(d_i as i64 + j as i64 - 1, j as u64);
                    next[d + j * i as usize][l + j] += &poly[d][l] * ways;
                    j += 1;
                }
            }
        }
        poly = next;
    }
    let mut out = BTreeMap::new();
    for l in 0..=n as usize {
        if !poly[n as usize][l].is_zero() {
            out.insert(l as u32, poly[n as usize][l].clone());
        }
    }
    out
}
