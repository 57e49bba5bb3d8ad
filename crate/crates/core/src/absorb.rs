//! Generalized chromatic quasisymmetric polynomials and absorption
//! probabilities: the character-induced image of a basis element in QSym,
//! evaluated at (1/a, ..., 1/a, 0, ...), gives the one-step mass on the
//! states generated by the chosen set of generators.

use crate::error::{HopfError, Result};
use crate::gens::{BasisElt, GeneratorId, LinComb};
use crate::hopf::{self, HopfInstance, RescaledInstance};
use crate::instances::graphs::GraphData;
use crate::ratio::{big, binomial, pow_rat, rat, Rat};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use std::collections::{BTreeMap, BTreeSet};

/// The character ζ^C: value 1 on the listed generators, 0 on all others,
/// extended multiplicatively (so it indicates products of C-generators).
#[derive(Clone, Debug)]
pub struct CharacterSpec {
    generators: BTreeSet<GeneratorId>,
}

impl CharacterSpec {
    pub fn new(generators: BTreeSet<GeneratorId>) -> Result<Self> {
        if generators.is_empty() {
            return Err(HopfError::InvalidInput("character support must be nonempty".into()));
        }
        Ok(CharacterSpec { generators })
    }

    /// The default absorption character: all degree-one generators.
    pub fn degree_one(inst: &dyn HopfInstance) -> Result<Self> {
        Self::new(inst.generators(1)?.into_iter().collect())
    }

    /// ζ(b): 1 iff every factor of b lies in C.
    pub fn indicator(&self, b: &BasisElt) -> bool {
        b.factors().iter().all(|c| self.generators.contains(c))
    }
}

/// A truncated quasisymmetric function of degree n: coefficients of the
/// monomial basis M_α over compositions α of n with positive parts.
#[derive(Clone, Debug)]
pub struct QuasisymFunction {
    pub degree: u32,
    pub coeffs: BTreeMap<Vec<u32>, Rat>,
}

impl QuasisymFunction {
    pub fn coeff(&self, alpha: &[u32]) -> Rat {
        self.coeffs.get(alpha).cloned().unwrap_or_else(Rat::zero)
    }

    /// Evaluation at (1/a, ..., 1/a, 0, 0, ...) with a nonzero arguments:
    /// M_α contributes binom(a, len α)/a^n.
    pub fn eval_uniform(&self, a: u32) -> Rat {
        let mut acc = Rat::zero();
        for (alpha, coeff) in &self.coeffs {
            let ways = binomial(a as u64, alpha.len() as u64);
            if !ways.is_zero() {
                acc += coeff * big(&ways);
            }
        }
        acc / pow_rat(&rat(a as i64), self.degree)
    }

    /// True when the coefficients are invariant under permuting the parts of
    /// α (the image of a cocommutative algebra is symmetric).
    pub fn is_symmetric(&self) -> bool {
        for (alpha, coeff) in &self.coeffs {
            let mut sorted = alpha.clone();
            sorted.sort_unstable_by(|a, b| b.cmp(a));
            if self.coeff(&sorted) != *coeff {
                return false;
            }
        }
        true
    }
}

/// χ_b = Σ_α η_b^{α;C} M_α: the coefficient of M_α is the coefficient sum of
/// tuples in Δ̄^\[len α](b) whose components have degrees α and are products
/// of C-generators.
pub fn chromatic_quasisym(
    inst: &RescaledInstance,
    b: &BasisElt,
    spec: &CharacterSpec,
) -> Result<QuasisymFunction> {
    let n = b.degree();
    let mut coeffs: BTreeMap<Vec<u32>, Rat> = BTreeMap::new();
    for k in 1..=n {
        let reduced = hopf::reduced_coproduct_iterated(inst, b, k)?;
        if reduced.is_empty() {
            break;
        }
        for (tuple, v) in reduced.iter() {
            if !tuple.iter().all(|part| spec.indicator(part)) {
                continue;
            }
            let alpha: Vec<u32> = tuple.iter().map(|part| part.degree()).collect();
            let e = coeffs.entry(alpha).or_insert_with(Rat::zero);
            *e += v;
        }
    }
    coeffs.retain(|_, v| !v.is_zero());
    Ok(QuasisymFunction { degree: n, coeffs })
}

/// The probability that one step of K_a from b lands on a product of
/// C-generators equals χ_b(1/a, ..., 1/a, 0, ...).
pub fn absorption_probability(
    inst: &RescaledInstance,
    b: &BasisElt,
    a: u32,
    spec: &CharacterSpec,
) -> Result<Rat> {
    Ok(chromatic_quasisym(inst, b, spec)?.eval_uniform(a))
}

/// Direct matrix route for cross-checks: the mass of row b of K_a on the
/// states indicated by ζ^C.
pub fn absorption_by_matrix(
    inst: &RescaledInstance,
    b: &BasisElt,
    a: u32,
    spec: &CharacterSpec,
) -> Result<Rat> {
    let n = b.degree();
    let k = crate::chain::transition_matrix(inst, n, a)?;
    let i = k
        .index_of(b)
        .ok_or_else(|| HopfError::InvalidInput("state outside the block".into()))?;
    let mut acc = Rat::zero();
    for (j, v) in &k.rows[i] {
        if spec.indicator(&k.basis[*j]) {
            acc += v;
        }
    }
    Ok(acc)
}

// ---------------------------------------------------------------------------
// Chromatic polynomials

/// A chromatic polynomial stored by coefficients: p(x) = Σ `coeffs[i]` x^i.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChromaticPoly {
    pub coeffs: Vec<BigInt>,
}

impl ChromaticPoly {
    pub fn eval(&self, x: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    fn zero(deg: usize) -> Self {
        ChromaticPoly { coeffs: vec![BigInt::zero(); deg + 1] }
    }
}

fn poly_sub(a: &ChromaticPoly, b: &ChromaticPoly) -> ChromaticPoly {
    let len = a.coeffs.len().max(b.coeffs.len());
    let mut out = ChromaticPoly::zero(len - 1);
    for (i, c) in a.coeffs.iter().enumerate() {
        out.coeffs[i] += c;
    }
    for (i, c) in b.coeffs.iter().enumerate() {
        out.coeffs[i] -= c;
    }
    out
}

/// Contracts edge (i, j): merges j into i, dropping parallel edges.
fn contract(g: &GraphData, i: u32, j: u32) -> GraphData {
    let keep: Vec<u32> = (0..g.vertices).filter(|&v| v != j).collect();
    let mut out = GraphData::empty(g.vertices - 1);
    let pos = |v: u32| keep.iter().position(|&x| x == v).unwrap() as u32;
    for (a, b) in g.edge_list() {
        let a2 = if a == j { i } else { a };
        let b2 = if b == j { i } else { b };
        if a2 != b2 {
            out.edges |= crate::instances::graphs::edge_bit(pos(a2), pos(b2));
        }
    }
    out
}

/// The chromatic polynomial of a simple graph: deletion-contraction with
/// memoization on canonical forms up to 8 vertices; above that (up to the
/// hard cap of 10) an exact independent-set partition DP is used instead,
/// since isomorphism-collapsed deletion-contraction is impractical there.
pub fn chromatic_polynomial(g: &GraphData) -> Result<ChromaticPoly> {
    if g.vertices > 10 {
        return Err(HopfError::UnsupportedSize(format!(
            "chromatic polynomial capped at 10 vertices (got {})",
            g.vertices
        )));
    }
    if g.vertices > 8 {
        return Ok(chromatic_by_partition_dp(g));
    }
    let mut memo: BTreeMap<(u32, u64), ChromaticPoly> = BTreeMap::new();
    fn rec(g: &GraphData, memo: &mut BTreeMap<(u32, u64), ChromaticPoly>) -> ChromaticPoly {
        let edges = g.edge_list();
        if edges.is_empty() {
            let mut p = ChromaticPoly::zero(g.vertices as usize);
            p.coeffs[g.vertices as usize] = BigInt::one();
            return p;
        }
        let canon = crate::instances::graphs::graph_canonicalize(g).expect("within cap");
        let key = (canon.vertices, canon.edges);
        if let Some(p) = memo.get(&key) {
            return p.clone();
        }
        let (i, j) = edges[0];
        let mut deleted = *g;
        deleted.edges &= !crate::instances::graphs::edge_bit(i, j);
        let contracted = contract(g, i, j);
        let p = poly_sub(&rec(&deleted, memo), &rec(&contracted, memo));
        memo.insert(key, p.clone());
        p
    }
    Ok(rec(g, &mut memo))
}

/// Counts partitions of the vertex set into j independent sets for each j,
/// then expands Σ_j S_j · x(x-1)...(x-j+1) into coefficients.
fn chromatic_by_partition_dp(g: &GraphData) -> ChromaticPoly {
    let n = g.vertices as usize;
    let full = (1usize << n) - 1;
    let mut independent = vec![true; full + 1];
    for s in 1..=full {
        let verts: Vec<u32> = (0..n as u32).filter(|&v| s & (1 << v) != 0).collect();
        'outer: for (a, &va) in verts.iter().enumerate() {
            for &vb in verts.iter().skip(a + 1) {
                if g.has_edge(va, vb) {
                    independent[s] = false;
                    break 'outer;
                }
            }
        }
    }
    // dp[s][j] = ways to partition subset s into j independent sets; the
    // block containing the lowest vertex of s is chosen canonically
    let mut dp: Vec<Vec<BigInt>> = vec![vec![BigInt::zero(); n + 1]; full + 1];
    dp[0][0] = BigInt::one();
    for s in 1..=full {
        let low = s & s.wrapping_neg();
        let mut t = s;
        loop {
            if t & low != 0 && independent[t] {
                let rest = s & !t;
                for j in 1..=n {
                    if !dp[rest][j - 1].is_zero() {
                        let add = dp[rest][j - 1].clone();
                        dp[s][j] += add;
                    }
                }
            }
            if t == 0 {
                break;
            }
            t = (t - 1) & s;
        }
    }
    let mut coeffs = vec![BigInt::zero(); n + 1];
    for j in 1..=n {
        if dp[full][j].is_zero() {
            continue;
        }
        // (x)_j = Σ_k s(j, k) x^k with signed Stirling numbers
        for k in 0..=j {
            let s = crate::shuffle::stirling_first(j as u32, k as u32);
            coeffs[k] += &dp[full][j] * s;
        }
    }
    ChromaticPoly { coeffs }
}

/// Brute-force oracle: the number of proper colorings with `colors` colors
/// (vertex cap 6).
pub fn proper_coloring_count(g: &GraphData, colors: u32) -> Result<BigInt> {
    if g.vertices > 6 {
        return Err(HopfError::UnsupportedSize("coloring oracle capped at 6 vertices".into()));
    }
    let n = g.vertices as usize;
    let mut count = BigInt::zero();
    let mut assignment = vec![0u32; n];
    fn rec(
        v: usize,
        n: usize,
        colors: u32,
        g: &GraphData,
        assignment: &mut Vec<u32>,
        count: &mut BigInt,
    ) {
        if v == n {
            *count += 1;
            return;
        }
        'color: for c in 0..colors {
            for u in 0..v {
                if g.has_edge(u as u32, v as u32) && assignment[u] == c {
                    continue 'color;
                }
            }
            assignment[v] = c;
            rec(v + 1, n, colors, g, assignment, count);
        }
    }
    rec(0, n, colors, g, &mut assignment, &mut count);
    Ok(count)
}

/// Absorption of the simplicial-complex chain started at C⁰ after k steps:
/// p₀(2^k)/2^{nk} with p₀ the chromatic polynomial of the 1-skeleton.
pub fn simplex_absorption(
    complex: &crate::instances::simplicial::ComplexData,
    k: u32,
) -> Result<Rat> {
    let skeleton = complex.skeleton();
    if skeleton.vertices > 10 {
        return Err(HopfError::UnsupportedSize(
            "simplex absorption capped at 10 vertices".into(),
        ));
    }
    let p0 = chromatic_polynomial(&skeleton)?;
    let m = BigInt::from(2u64).pow(k);
    let value = p0.eval(&m);
    let denom = pow_rat(&big(&m), skeleton.vertices);
    Ok(big(&value) / denom)
}

/// Absorption curve (k, probability) for k = 0..=k_max, via K_{2^k} = K_2^k.
pub fn absorption_curve(
    inst: &RescaledInstance,
    b: &BasisElt,
    spec: &CharacterSpec,
    k_max: u32,
) -> Result<Vec<(u32, Rat)>> {
    let mut out = Vec::new();
    for k in 0..=k_max {
        let a = 2u64.pow(k);
        if a > u32::MAX as u64 {
            return Err(HopfError::InvalidInput("absorption curve step count too large".into()));
        }
        out.push((k, absorption_probability(inst, b, a as u32, spec)?));
    }
    Ok(out)
}

pub fn lincomb_mass_on_targets(dist: &LinComb<BasisElt>, spec: &CharacterSpec) -> Rat {
    let mut acc = Rat::zero();
    for (b, v) in dist.iter() {
        if spec.indicator(b) {
            acc += v;
        }
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gens::Partition;
    use crate::instances::graphs::{edge_bit, UnlabeledGraphInstance};
    use crate::instances::symfn::SymFnInstance;
    use crate::ratio::{factorial, frac};

    #[test]
    fn rock_chromatic_counts_splits_into_singletons() {
        let inst = SymFnInstance::new(5);
        let resc = crate::chain::markov_instance(&inst, 5).unwrap();
        let spec = CharacterSpec::degree_one(&inst).unwrap();
        for n in 2..=5u32 {
            let b = SymFnInstance::partition_to_elt(&Partition::new(vec![n]));
            let chi = chromatic_quasisym(&resc, &b, &spec).unwrap();
            let ones = vec![1u32; n as usize];
            assert_eq!(chi.coeff(&ones), big(&factorial(n as u64)));
            assert!(chi.is_symmetric());
        }
    }

    #[test]
    fn absorption_equals_matrix_mass_rock() {
        let inst = SymFnInstance::new(5);
        let resc = crate::chain::markov_instance(&inst, 5).unwrap();
        let spec = CharacterSpec::degree_one(&inst).unwrap();
        for n in 2..=5u32 {
            for lambda in crate::gens::partitions_of(n) {
                let b = SymFnInstance::partition_to_elt(&lambda);
                for a in [2u32, 3, 4] {
                    let chi_route = absorption_probability(&resc, &b, a, &spec).unwrap();
                    let mat_route = absorption_by_matrix(&resc, &b, a, &spec).unwrap();
                    assert_eq!(chi_route, mat_route, "n={n} λ={lambda} a={a}");
                }
            }
        }
        // absorbing state: probability 1 for every a
        let b = SymFnInstance::partition_to_elt(&Partition::new(vec![1, 1, 1]));
        assert_eq!(absorption_probability(&resc, &b, 7, &spec).unwrap(), rat(1));
    }

    #[test]
    fn rock_absorption_closed_form_via_chi() {
        let inst = SymFnInstance::new(6);
        let resc = crate::chain::markov_instance(&inst, 6).unwrap();
        let spec = CharacterSpec::degree_one(&inst).unwrap();
        for n in 2..=6u32 {
            let b = SymFnInstance::partition_to_elt(&Partition::new(vec![n]));
            for k in 1..=4u32 {
                let a = 2u32.pow(k);
                let chi_route = absorption_probability(&resc, &b, a, &spec).unwrap();
                assert_eq!(chi_route, crate::chain::rock_absorption_closed_form(n, k));
            }
        }
    }

    #[test]
    fn chromatic_polynomials_match_known_forms() {
        // complete graph: x(x-1)...(x-n+1)
        for n in 2..=5u32 {
            let p = chromatic_polynomial(&GraphData::complete(n)).unwrap();
            for x in 0..=6u64 {
                let want: i64 = (0..n as i64).map(|i| x as i64 - i).product();
                assert_eq!(p.eval(&BigInt::from(x)), BigInt::from(want));
            }
        }
        // tree (path): x(x-1)^{n-1}
        let path = GraphData::new(4, edge_bit(0, 1) | edge_bit(1, 2) | edge_bit(2, 3));
        let p = chromatic_polynomial(&path).unwrap();
        for x in 0..=5i64 {
            assert_eq!(p.eval(&BigInt::from(x)), BigInt::from(x * (x - 1).pow(3)));
        }
        // oracle agreement up to 6 vertices
        let g =
            GraphData::new(5, edge_bit(0, 1) | edge_bit(1, 2) | edge_bit(0, 2) | edge_bit(3, 4));
        let p = chromatic_polynomial(&g).unwrap();
        for colors in 1..=4u32 {
            assert_eq!(
                p.eval(&BigInt::from(colors)),
                proper_coloring_count(&g, colors).unwrap()
            );
        }
        // the partition DP route agrees with deletion-contraction
        let dp = chromatic_by_partition_dp(&g);
        for x in 0..=6u64 {
            assert_eq!(p.eval(&BigInt::from(x)), dp.eval(&BigInt::from(x)));
        }
    }

    #[test]
    fn simplex_absorption_examples() {
        use crate::instances::simplicial::ComplexData;
        // full simplex: p0(x) = x(x-1)...(x-n+1)
        let simplex = ComplexData::from_maximal_faces(4, &[0b1111]).unwrap();
        let p = simplex_absorption(&simplex, 3).unwrap();
        assert_eq!(p, frac(8 * 7 * 6 * 5, 4096));
        // edgeless complex: already absorbed
        let trivial = ComplexData::trivial(4);
        for k in 0..=3 {
            assert_eq!(simplex_absorption(&trivial, k).unwrap(), rat(1));
        }
    }

    #[test]
    fn stanley_chromatic_function_for_graphs() {
        let inst = UnlabeledGraphInstance::new(4).unwrap();
        let resc = crate::chain::markov_instance(&inst, 4).unwrap();
        let spec = CharacterSpec::degree_one(&inst).unwrap();
        // triangle plus isolated vertex
        let g = GraphData::new(4, edge_bit(0, 1) | edge_bit(0, 2) | edge_bit(1, 2));
        let b = UnlabeledGraphInstance::elt_of_graph(&g).unwrap();
        let chi = chromatic_quasisym(&resc, &b, &spec).unwrap();
        assert!(chi.is_symmetric());
        // the triangle admits no proper coloring in fewer than 3 classes
        assert_eq!(chi.coeff(&vec![2, 2]), rat(0));
        assert_eq!(chi.coeff(&vec![4]), rat(0));
        // Σ_α coeff(α)·binom(a, len α) = p_G(a): Stanley's chromatic
        // symmetric function refines the chromatic polynomial
        let p = chromatic_polynomial(&g).unwrap();
        for a in [2u32, 3, 4] {
            let lhs = chi.eval_uniform(a) * pow_rat(&rat(a as i64), 4);
            assert_eq!(lhs, big(&p.eval(&BigInt::from(a))));
        }
    }
}
