//! Riffle-shuffle specifics: the GSR closed form, deck statistics, named
//! eigenfunctions (descents, peaks, carries h_j, ascent-descent, top/bottom
//! card), pattern eigenfunctions, and q-deformed shuffles.

use crate::chain::{transition_matrix, ChainDirection, TransitionMatrix};
use crate::error::{HopfError, Result};
use crate::gens::{BasisElt, LinComb};
use crate::hopf::{HopfInstance, RescaledInstance};
use crate::instances::deck::DeckInstance;
use crate::ratio::{big, binomial_int, factorial, pow_rat, rat, Rat};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;

// ---------------------------------------------------------------------------
// Deck statistics

/// Number of strict descents w(i) > w(i+1).
pub fn descents(w: &[u32]) -> usize {
    w.windows(2).filter(|p| p[0] > p[1]).count()
}

/// Number of strict ascents w(i) < w(i+1).
pub fn ascents(w: &[u32]) -> usize {
    w.windows(2).filter(|p| p[0] < p[1]).count()
}

pub fn ties(w: &[u32]) -> usize {
    w.windows(2).filter(|p| p[0] == p[1]).count()
}

/// Number of inversions: pairs i < j with w(i) > w(j).
pub fn inversions(w: &[u32]) -> usize {
    let mut count = 0;
    for i in 0..w.len() {
        for j in i + 1..w.len() {
            if w[i] > w[j] {
                count += 1;
            }
        }
    }
    count
}

/// Inverse of a permutation given in one-line notation over values 1..n.
pub fn inverse_perm(w: &[u32]) -> Vec<u32> {
    let mut inv = vec![0; w.len()];
    for (i, &v) in w.iter().enumerate() {
        inv[(v - 1) as usize] = i as u32 + 1;
    }
    inv
}

/// Composition (u ∘ v)(i) = u(v(i)).
pub fn compose_perm(u: &[u32], v: &[u32]) -> Vec<u32> {
    v.iter().map(|&i| u[(i - 1) as usize]).collect()
}

/// Number of rising sequences R(w) = d(w^{-1}) + 1 (distinct values only).
pub fn rising_sequences(w: &[u32]) -> usize {
    descents(&inverse_perm(w)) + 1
}

/// Interior positions i with w(i-1) < w(i) > w(i+1).
pub fn peaks(w: &[u32]) -> usize {
    (1..w.len().saturating_sub(1))
        .filter(|&i| w[i - 1] < w[i] && w[i] > w[i + 1])
        .count()
}

pub fn troughs(w: &[u32]) -> usize {
    (1..w.len().saturating_sub(1))
        .filter(|&i| w[i - 1] > w[i] && w[i] < w[i + 1])
        .count()
}

pub fn straights(w: &[u32]) -> usize {
    (1..w.len().saturating_sub(1))
        .filter(|&i| (w[i - 1] < w[i] && w[i] < w[i + 1]) || (w[i - 1] > w[i] && w[i] > w[i + 1]))
        .count()
}

pub fn all_permutations(n: u32) -> Vec<Vec<u32>> {
    fn rec(n: u32, cur: &mut Vec<u32>, used: &mut Vec<bool>, out: &mut Vec<Vec<u32>>) {
        if cur.len() == n as usize {
            out.push(cur.clone());
            return;
        }
        for v in 1..=n {
            if !used[(v - 1) as usize] {
                used[(v - 1) as usize] = true;
                cur.push(v);
                rec(n, cur, used, out);
                cur.pop();
                used[(v - 1) as usize] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(n, &mut Vec::new(), &mut vec![false; n as usize], &mut out);
    out
}

// ---------------------------------------------------------------------------
// GSR closed form

/// Q_a(w) = binom(n + a - (d(w)+1), n) / a^n: the GSR a-shuffle law.
/// Summing over S_n gives exactly 1.
pub fn gsr_probability(n: u32, a: u32, w: &[u32]) -> Rat {
    let d = descents(w) as i64;
    let num = binomial_int(n as i64 + a as i64 - d - 1, n as u64);
    big(&num) / pow_rat(&rat(a as i64), n)
}

/// Convolution (Q_a ∗ Q_b)(σ) = Σ_η Q_a(η) Q_b(σ η^{-1}).
pub fn gsr_convolution(n: u32, a: u32, b: u32, sigma: &[u32]) -> Rat {
    let mut acc = Rat::zero();
    for eta in all_permutations(n) {
        let rest = compose_perm(sigma, &inverse_perm(&eta));
        acc += gsr_probability(n, a, &eta) * gsr_probability(n, b, &rest);
    }
    acc
}

/// The forward a-shuffle matrix on S_n straight from the closed form: in
/// deck labels, K(u, v) = Q_a(v^{-1} u), the walk convention of the GSR law
/// read on inverse arrangements (descents of v^{-1}u count the rising
/// sequences of the position rearrangement taking u to v).
pub fn gsr_forward_matrix(n: u32, a: u32) -> Result<TransitionMatrix> {
    let deck = DeckInstance::distinct(n)?;
    let resc = crate::chain::markov_instance(&deck, n)?;
    let basis = resc.enumerate_basis(n)?;
    let labels: Vec<String> = basis.iter().map(|b| resc.basis_label(b)).collect();
    let words: Vec<Vec<u32>> = basis.iter().map(DeckInstance::values_of).collect();
    let mut rows = Vec::with_capacity(basis.len());
    for u in &words {
        let mut row = Vec::with_capacity(basis.len());
        for (j, v) in words.iter().enumerate() {
            let q = gsr_probability(n, a, &compose_perm(&inverse_perm(v), u));
            if !q.is_zero() {
                row.push((j, q));
            }
        }
        rows.push(row);
    }
    TransitionMatrix::from_rows(
        format!("gsr[{n}]"),
        n,
        a,
        ChainDirection::Forward,
        basis,
        labels,
        rows,
    )
}

/// The forward chain from the Hopf machinery: the transpose of the inverse
/// a-shuffle matrix (double stochasticity makes this exact).
pub fn forward_shuffle_matrix(inst: &RescaledInstance, n: u32, a: u32) -> Result<TransitionMatrix> {
    transition_matrix(inst, n, a)?.transpose()
}

// ---------------------------------------------------------------------------
// Named eigenfunctions

/// A right eigenfunction of the forward shuffle chain with eigenvalue
/// a^{-exponent}, tabulated on the deck block.
pub struct NamedEigenfunction {
    pub name: String,
    /// Eigenvalue is a^{-exponent}.
    pub exponent: u32,
    pub values: Vec<(Vec<u32>, Rat)>,
}

/// Signed Stirling numbers of the first kind s(n, k):
/// x(x-1)...(x-n+1) = Σ_k s(n, k) x^k.
pub fn stirling_first(n: u32, k: u32) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let mut row: Vec<BigInt> = vec![BigInt::one()];
    for m in 0..n {
        let mut next = vec![BigInt::zero(); row.len() + 1];
        for (j, v) in row.iter().enumerate() {
            next[j + 1] += v;
            next[j] -= v * BigInt::from(m);
        }
        row = next;
    }
    row[k as usize].clone()
}

/// h_j(w) = n! Σ_k s(k, n-j)/k! · binom(n-d(w)-1, n-k): the carries-chain
/// eigenfunction with eigenvalue 1/a^j, a function of the descent count only.
pub fn carries_eigenfunction(n: u32, j: u32, w: &[u32]) -> Rat {
    let d = descents(w) as i64;
    let mut acc = Rat::zero();
    for k in 0..=n {
        let s = stirling_first(k, n - j);
        if s.is_zero() {
            continue;
        }
        let b = binomial_int(n as i64 - d - 1, (n - k) as u64);
        acc += big(&s) * big(&b) / big(&factorial(k as u64));
    }
    acc * big(&factorial(n as u64))
}

fn verify_forward_eigenfunction(
    k_forward: &TransitionMatrix,
    values: &[Rat],
    a: u32,
    exponent: u32,
) -> bool {
    let beta = Rat::one() / pow_rat(&rat(a as i64), exponent);
    for i in 0..k_forward.dim() {
        let mut acc = Rat::zero();
        for (j, kij) in &k_forward.rows[i] {
            if !values[*j].is_zero() {
                acc += kij * &values[*j];
            }
        }
        if acc != &values[i] * &beta {
            return false;
        }
    }
    true
}

/// The applicable named right-eigenfunction families for a deck composition,
/// each verified against the forward transition matrix by exact
/// multiplication before being returned.
pub fn named_eigenfunctions(nu: &[u32], a: u32) -> Result<Vec<NamedEigenfunction>> {
    let deck = DeckInstance::new(nu.to_vec())?;
    let n = deck.n();
    let resc = crate::chain::markov_instance(&deck, n)?;
    let k_fwd = forward_shuffle_matrix(&resc, n, a)?;
    let words: Vec<Vec<u32>> = k_fwd.basis.iter().map(DeckInstance::values_of).collect();
    let distinct = nu.iter().all(|&c| c == 1);
    let n_values = nu.iter().filter(|&&c| c > 0).count();

    let mut out = Vec::new();
    let mut push = |name: String, exponent: u32, values: Vec<Rat>| -> Result<()> {
        if values.iter().all(|v| v.is_zero()) {
            return Ok(());
        }
        if !verify_forward_eigenfunction(&k_fwd, &values, a, exponent) {
            return Err(HopfError::InternalInconsistency(format!(
                "named eigenfunction {name} fails its eigen-equation"
            )));
        }
        out.push(NamedEigenfunction {
            name,
            exponent,
            values: words.iter().cloned().zip(values).collect(),
        });
        Ok(())
    };

    if distinct && n >= 2 {
        let vals: Vec<Rat> =
            words.iter().map(|w| rat(n as i64 - 1 - 2 * descents(w) as i64)).collect();
        push("descents: n-1-2d(w)".into(), 1, vals)?;
        if n >= 3 {
            let third = big(&BigInt::from(n - 2)) / rat(3);
            let vals: Vec<Rat> = words.iter().map(|w| rat(peaks(w) as i64) - &third).collect();
            push("peaks - (n-2)/3".into(), 2, vals)?;
            let vals: Vec<Rat> = words.iter().map(|w| rat(troughs(w) as i64) - &third).collect();
            push("troughs - (n-2)/3".into(), 2, vals)?;
            let vals: Vec<Rat> = words.iter().map(|w| rat(straights(w) as i64) - &third).collect();
            push("straights - (n-2)/3".into(), 2, vals)?;
        }
        for j in 0..n {
            let vals: Vec<Rat> = words.iter().map(|w| carries_eigenfunction(n, j, w)).collect();
            push(format!("carries h_{j}"), j, vals)?;
        }
    }
    if n_values >= 2 {
        let vals: Vec<Rat> =
            words.iter().map(|w| rat(ascents(w) as i64 - descents(w) as i64)).collect();
        push("ascents - descents".into(), 1, vals)?;
    }
    if nu.len() == 2 && nu[0] == 1 && nu[1] == n - 1 {
        let vals: Vec<Rat> = words
            .iter()
            .map(|w| {
                if w[0] == 1 {
                    rat(1)
                } else if w[w.len() - 1] == 1 {
                    rat(-1)
                } else {
                    rat(0)
                }
            })
            .collect();
        push("top/bottom card f_12".into(), 1, vals)?;
    }
    Ok(out)
}

/// f_w(w') for words with distinct letters over the same letter set: the
/// product over w's Lyndon factors of their subword evaluations; always in
/// {-1, 0, 1}.
pub fn pattern_eigenfunction_value(w: &[u32], w2: &[u32]) -> Result<i64> {
    let mut s1: Vec<u32> = w.to_vec();
    let mut s2: Vec<u32> = w2.to_vec();
    s1.sort_unstable();
    s2.sort_unstable();
    if s1 != s2 || s1.windows(2).any(|p| p[0] == p[1]) {
        return Err(HopfError::InvalidInput(
            "pattern evaluation needs the same distinct letters".into(),
        ));
    }
    let letters = |v: &[u32]| -> Vec<crate::gens::GeneratorId> {
        v.iter().map(|&x| crate::instances::deck::letter(x)).collect()
    };
    let factors = crate::lyndon::lyndon_factorize(&letters(w))?;
    let mut product = 1i64;
    for l in &factors {
        // the unique consecutive subword of w' with exactly l's letters
        let lset: std::collections::BTreeSet<u32> = l.iter().map(|c| c.key as u32).collect();
        let positions: Vec<usize> = (0..w2.len()).filter(|&i| lset.contains(&w2[i])).collect();
        if !positions.windows(2).all(|p| p[1] == p[0] + 1) {
            return Ok(0);
        }
        let sub: Vec<u32> = positions.iter().map(|&i| w2[i]).collect();
        let lam = crate::lyndon::standard_bracketing(l)?;
        let coeff = lam.coeff(&BasisElt::word(letters(&sub)));
        if coeff.is_zero() {
            return Ok(0);
        }
        let c = if coeff == rat(1) {
            1
        } else if coeff == rat(-1) {
            -1
        } else {
            return Err(HopfError::InternalInconsistency(
                "bracketing coefficient outside {-1,0,1} on distinct letters".into(),
            ));
        };
        product *= c;
    }
    Ok(product)
}

// ---------------------------------------------------------------------------
// q-integers and q-shuffles

/// \[j]_q = 1 + q + ... + q^{j-1}, exactly, at rational q.
pub fn q_integer(j: u32, q: &Rat) -> Rat {
    let mut acc = Rat::zero();
    let mut p = Rat::one();
    for _ in 0..j {
        acc += &p;
        p *= q;
    }
    acc
}

/// `[j]_q! = [j]_q [j-1]_q ... [1]_q`.
pub fn q_factorial(j: u32, q: &Rat) -> Rat {
    let mut acc = Rat::one();
    for i in 1..=j {
        acc *= q_integer(i, q);
    }
    acc
}

/// q-binomial coefficient [n choose k]_q; specializes to binom(n,k) at q=1.
pub fn q_binomial(n: u32, k: u32, q: &Rat) -> Rat {
    if k > n {
        return Rat::zero();
    }
    q_factorial(n, q) / (q_factorial(k, q) * q_factorial(n - k, q))
}

/// The q-shuffle normalizer z_n = Σ_j [n choose j]_q: every permutation with
/// R(w) <= 2 counted with weight q^{I(w)}, once per compatible cut (so the
/// identity carries multiplicity n+1). No closed form is known; hard cap
/// n <= 10.
pub fn q_shuffle_normalizer(n: u32, q: &Rat) -> Result<Rat> {
    check_q(n, q)?;
    let mut acc = Rat::zero();
    for j in 0..=n {
        acc += q_binomial(n, j, q);
    }
    Ok(acc)
}

fn check_q(n: u32, q: &Rat) -> Result<()> {
    if *q <= Rat::zero() {
        return Err(HopfError::InvalidInput("q must be a positive rational".into()));
    }
    if n > 10 {
        return Err(HopfError::UnsupportedSize("q-shuffles are capped at n = 10".into()));
    }
    Ok(())
}

/// The q-riffle-shuffle law: Q_q(w) = c(w) q^{I(w)} / z_n where c(w) counts
/// the compatible cuts (n+1 for the identity, 1 when R(w) = 2, 0 otherwise).
/// At q = 1 this is the GSR 2-shuffle.
pub fn q_shuffle_probability(n: u32, q: &Rat, w: &[u32]) -> Result<Rat> {
    check_q(n, q)?;
    let r = rising_sequences(w);
    if r > 2 {
        return Ok(Rat::zero());
    }
    let z = q_shuffle_normalizer(n, q)?;
    let cuts = if r == 1 { rat(n as i64 + 1) } else { Rat::one() };
    let mut qp = Rat::one();
    for _ in 0..inversions(w) {
        qp *= q;
    }
    Ok(cuts * qp / z)
}

/// Exact law of the two-stage sequential procedure: cut j with probability
/// [n choose j]_q / z_n, then drop from the left pile with probability
/// `q^B [A]_q/[A+B]_q` and from the right with `[B]_q/[A+B]_q`. Summing path
/// probabilities per outcome recovers the q-shuffle law.
pub fn q_shuffle_path_distribution(n: u32, q: &Rat) -> Result<BTreeMap<Vec<u32>, Rat>> {
    check_q(n, q)?;
    let z = q_shuffle_normalizer(n, q)?;
    let mut out: BTreeMap<Vec<u32>, Rat> = BTreeMap::new();
    // cards drop to the table, so the new deck builds bottom-up: the drop
    // sequence is reversed to read the deck top to bottom, and each drop
    // takes the bottom card of its packet
    fn rec(
        a: u32,
        b: u32,
        j: u32,
        q: &Rat,
        prob: Rat,
        drops: &mut Vec<u32>,
        out: &mut BTreeMap<Vec<u32>, Rat>,
    ) {
        if a == 0 && b == 0 {
            let word: Vec<u32> = drops.iter().rev().copied().collect();
            let e = out.entry(word).or_insert_with(Rat::zero);
            *e += prob;
            return;
        }
        let total = q_integer(a + b, q);
        if a > 0 {
            // bottom of the left packet 1..j holds value a
            let mut qb = Rat::one();
            for _ in 0..b {
                qb *= q;
            }
            let p = &qb * q_integer(a, q) / &total;
            drops.push(a);
            rec(a - 1, b, j, q, &prob * p, drops, out);
            drops.pop();
        }
        if b > 0 {
            // bottom of the right packet j+1..n holds value j + b
            let p = q_integer(b, q) / &total;
            drops.push(j + b);
            rec(a, b - 1, j, q, &prob * p, drops, out);
            drops.pop();
        }
    }
    for j in 0..=n {
        let p_cut = q_binomial(n, j, q) / &z;
        rec(j, n - j, j, q, p_cut, &mut Vec::new(), &mut out);
    }
    Ok(out)
}

/// Reusable q-shuffle sampler: the cut weights and the drop probabilities
/// `q^B [A]_q/[A+B]_q` are precomputed once.
pub struct QShuffleSampler {
    n: u32,
    cut_weights: Vec<Rat>,
    /// drop_left[a][b]: probability the next card comes from a left pile of
    /// size a against a right pile of size b.
    drop_left: Vec<Vec<Rat>>,
}

impl QShuffleSampler {
    pub fn new(n: u32, q: &Rat) -> Result<Self> {
        check_q(n, q)?;
        let z = q_shuffle_normalizer(n, q)?;
        let cut_weights: Vec<Rat> = (0..=n).map(|j| q_binomial(n, j, q) / &z).collect();
        let qint: Vec<Rat> = (0..=n).map(|j| q_integer(j, q)).collect();
        let mut qpow = vec![Rat::one()];
        for _ in 0..n {
            qpow.push(qpow.last().expect("nonempty") * q);
        }
        let mut drop_left = vec![vec![Rat::zero(); n as usize + 1]; n as usize + 1];
        for a in 1..=n as usize {
            for b in 0..=(n as usize - a) {
                drop_left[a][b] = &qpow[b] * &qint[a] / &qint[a + b];
            }
        }
        Ok(QShuffleSampler { n, cut_weights, drop_left })
    }

    /// One outcome: cards drop bottom-up from the bottom of each packet.
    pub fn sample(&self, rng: &mut ChaCha8Rng) -> Vec<u32> {
        let j = sample_weighted(&self.cut_weights, rng) as u32;
        let mut a = j;
        let mut b = self.n - j;
        let mut drops = Vec::with_capacity(self.n as usize);
        while a > 0 || b > 0 {
            let take_left = if a == 0 {
                false
            } else if b == 0 {
                true
            } else {
                let u: u64 = rng.gen();
                let cut = Rat::new(u.into(), (u128::from(u64::MAX) + 1).into());
                cut < self.drop_left[a as usize][b as usize]
            };
            if take_left {
                drops.push(a);
                a -= 1;
            } else {
                drops.push(j + b);
                b -= 1;
            }
        }
        drops.into_iter().rev().collect()
    }
}

/// Samples one q-shuffle outcome: cut by the q-binomial law, then sequential
/// q-weighted drops.
pub fn q_shuffle_sample(n: u32, q: &Rat, rng: &mut ChaCha8Rng) -> Result<Vec<u32>> {
    Ok(QShuffleSampler::new(n, q)?.sample(rng))
}

pub fn q_shuffle_sample_seeded(n: u32, q: &Rat, seed: u64, stream: u64) -> Result<Vec<u32>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    q_shuffle_sample(n, q, &mut rng)
}

fn sample_weighted(weights: &[Rat], rng: &mut ChaCha8Rng) -> usize {
    let u: u64 = rng.gen();
    let target = Rat::new(u.into(), (u128::from(u64::MAX) + 1).into());
    let mut acc = Rat::zero();
    for (i, w) in weights.iter().enumerate() {
        acc += w;
        if target < acc {
            return i;
        }
    }
    weights.len() - 1
}

// ---------------------------------------------------------------------------
// Quantized shuffle algebras

/// A symmetric integer form x_i · x_j on the alphabet (1-based values).
#[derive(Clone, Debug)]
pub struct BilinearForm {
    entries: Vec<Vec<i64>>,
}

impl BilinearForm {
    pub fn new(entries: Vec<Vec<i64>>) -> Result<Self> {
        let n = entries.len();
        for row in &entries {
            if row.len() != n {
                return Err(HopfError::InvalidInput("form matrix must be square".into()));
            }
        }
        for i in 0..n {
            for j in 0..n {
                if entries[i][j] != entries[j][i] {
                    return Err(HopfError::InvalidInput("form must be symmetric".into()));
                }
            }
        }
        Ok(BilinearForm { entries })
    }

    /// The constant form x_i · x_j = 1 on values 1..=n_values.
    pub fn ones(n_values: usize) -> Self {
        BilinearForm { entries: vec![vec![1; n_values]; n_values] }
    }

    pub fn weight_of_values(&self, v1: u32, v2: u32) -> i64 {
        self.entries[(v1 - 1) as usize][(v2 - 1) as usize]
    }
}

/// wt(S, w) = Σ_{j' ∉ S, j ∈ S, j' < j} w_{j'} · w_j (positions 0-based).
pub fn subset_weight(s: &[usize], w: &[u32], form: &BilinearForm) -> i64 {
    let mut acc = 0;
    for j in s {
        for jp in 0..*j {
            if !s.contains(&jp) {
                acc += form.weight_of_values(w[jp], w[*j]);
            }
        }
    }
    acc
}

/// One step of the quantized inverse-shuffle chain from word w: subset S is
/// chosen with probability q^{wt(S,w)} / θ(w) and its letters move to the
/// front; the normalizer θ depends on the state unless the form is constant.
pub fn quantized_inverse_shuffle_step(
    w: &[u32],
    q: &Rat,
    form: &BilinearForm,
) -> Result<LinComb<BasisElt>> {
    if *q <= Rat::zero() {
        return Err(HopfError::InvalidInput("q must be a positive rational".into()));
    }
    let n = w.len();
    if n > 16 {
        return Err(HopfError::UnsupportedSize(
            "quantized shuffle steps are capped at n = 16".into(),
        ));
    }
    let mut terms: Vec<(Vec<u32>, Rat)> = Vec::new();
    let mut theta = Rat::zero();
    for mask in 0u32..(1 << n) {
        let s: Vec<usize> = (0..n).filter(|&i| mask & (1 << i) != 0).collect();
        let wt = subset_weight(&s, w, form);
        let mut weight = Rat::one();
        if wt >= 0 {
            for _ in 0..wt {
                weight *= q;
            }
        } else {
            for _ in 0..(-wt) {
                weight /= q;
            }
        }
        theta += &weight;
        let mut word: Vec<u32> = s.iter().map(|&i| w[i]).collect();
        word.extend((0..n).filter(|i| mask & (1 << i) == 0).map(|i| w[i]));
        terms.push((word, weight));
    }
    let mut out = LinComb::zero();
    for (word, weight) in terms {
        out.add_term(DeckInstance::word_from_values(&word), weight / &theta);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratio::frac;

    #[test]
    fn statistics_identities() {
        let w = [3u32, 5, 1, 4, 2];
        assert_eq!(descents(&w), 2);
        assert_eq!(ascents(&w), 2);
        assert_eq!(ties(&w), 0);
        assert_eq!(inversions(&w), 6);
        assert_eq!(peaks(&w) + troughs(&w) + straights(&w), 3);
        assert_eq!(rising_sequences(&[1, 2, 3]), 1);
        assert_eq!(rising_sequences(&[3, 1, 2]), 2);
        // d + ascents + ties = n - 1 also for multiset words
        let m = [1u32, 1, 2, 1];
        assert_eq!(descents(&m) + ascents(&m) + ties(&m), 3);
    }

    #[test]
    fn gsr_closed_form() {
        // identity: binom(n+a-1, n)/a^n
        assert_eq!(gsr_probability(3, 2, &[1, 2, 3]), frac(4, 8));
        // one descent at a=2, n=3: binom(3,3)/8
        assert_eq!(gsr_probability(3, 2, &[1, 3, 2]), frac(1, 8));
        // the reversal is unreachable in one riffle for n >= 2
        assert_eq!(gsr_probability(4, 2, &[4, 3, 2, 1]), rat(0));
        // total mass 1
        for a in [2u32, 3] {
            let mut total = Rat::zero();
            for w in all_permutations(4) {
                total += gsr_probability(4, a, &w);
            }
            assert_eq!(total, Rat::one());
        }
    }

    #[test]
    fn forward_matrix_agrees_with_hopf_machinery() {
        for n in 2..=4u32 {
            for a in [2u32, 3] {
                let deck = DeckInstance::distinct(n).unwrap();
                let resc = crate::chain::markov_instance(&deck, n).unwrap();
                let from_hopf = forward_shuffle_matrix(&resc, n, a).unwrap();
                let from_formula = gsr_forward_matrix(n, a).unwrap();
                assert_eq!(from_hopf.rows, from_formula.rows, "n={n} a={a}");
            }
        }
    }

    #[test]
    fn convolution_identity() {
        for sigma in all_permutations(4) {
            let lhs = gsr_convolution(4, 2, 3, &sigma);
            let rhs = gsr_probability(4, 6, &sigma);
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn named_eigenfunctions_verify() {
        let fams = named_eigenfunctions(&[1, 1, 1, 1], 2).unwrap();
        let names: Vec<&str> = fams.iter().map(|f| f.name.as_str()).collect();
        assert!(names.iter().any(|s| s.starts_with("descents")));
        assert!(names.iter().any(|s| s.starts_with("peaks")));
        assert!(names.iter().any(|s| s.starts_with("carries h_3")));
        // h_1 = (n/2)(n-1-2d)
        for w in all_permutations(4) {
            let h1 = carries_eigenfunction(4, 1, &w);
            assert_eq!(h1, rat(2) * rat(3 - 2 * descents(&w) as i64));
        }
        // general deck: ascent-descent family
        let fams = named_eigenfunctions(&[2, 2], 2).unwrap();
        assert!(fams.iter().any(|f| f.name.starts_with("ascents")));
        // single-valued decks have no nonzero family
        let fams = named_eigenfunctions(&[3], 2).unwrap();
        assert!(fams.is_empty());
        // nu = (1, n-1): top/bottom card indicator
        let fams = named_eigenfunctions(&[1, 3], 2).unwrap();
        assert!(fams.iter().any(|f| f.name.starts_with("top/bottom")));
    }

    #[test]
    fn pattern_values_match_examples() {
        assert_eq!(pattern_eigenfunction_value(&[3, 5, 1, 4, 2], &[1, 4, 2, 5, 3]).unwrap(), -1);
        assert_eq!(pattern_eigenfunction_value(&[3, 5, 1, 4, 2], &[3, 5, 2, 4, 1]).unwrap(), 1);
        assert_eq!(pattern_eigenfunction_value(&[1, 2], &[2, 1]).unwrap(), -1);
        assert_eq!(pattern_eigenfunction_value(&[2, 1], &[2, 1]).unwrap(), 1);
        assert!(pattern_eigenfunction_value(&[1, 2], &[1, 3]).is_err());
    }

    #[test]
    fn q_utilities_specialize_at_one() {
        let one = Rat::one();
        assert_eq!(q_integer(4, &one), rat(4));
        assert_eq!(q_factorial(4, &one), rat(24));
        assert_eq!(q_binomial(5, 2, &one), rat(10));
        let q = frac(1, 2);
        assert_eq!(q_integer(3, &q), frac(7, 4));
        // symmetry [n k]_q = [n n-k]_q
        assert_eq!(q_binomial(6, 2, &q), q_binomial(6, 4, &q));
    }

    #[test]
    fn q_shuffle_law_matches_paths_and_gsr() {
        for q in [frac(1, 2), rat(1), rat(2)] {
            for n in 2..=4u32 {
                let paths = q_shuffle_path_distribution(n, &q).unwrap();
                let mut total = Rat::zero();
                for w in all_permutations(n) {
                    let direct = q_shuffle_probability(n, &q, &w).unwrap();
                    let from_paths = paths.get(&w).cloned().unwrap_or_else(Rat::zero);
                    assert_eq!(direct, from_paths, "n={n} q={q:?} w={w:?}");
                    total += direct;
                }
                assert_eq!(total, Rat::one());
            }
        }
        // q = 1 reduces to the GSR 2-shuffle: the q-law is the forward
        // (rising-sequence) form, the descent form evaluated at w^{-1}
        for w in all_permutations(4) {
            assert_eq!(
                q_shuffle_probability(4, &Rat::one(), &w).unwrap(),
                gsr_probability(4, 2, &inverse_perm(&w))
            );
        }
        // errors
        assert!(q_shuffle_probability(3, &rat(-1), &[1, 2, 3]).is_err());
        assert!(q_shuffle_probability(11, &rat(1), &[1; 11]).is_err());
    }

    #[test]
    fn quantized_step_weights() {
        // wt({2,4}, ijklm) with the constant form: inv(S) = 3
        let form = BilinearForm::ones(5);
        let w = [1u32, 2, 3, 4, 5];
        assert_eq!(subset_weight(&[1, 3], &w, &form), 3);
        // empty and full subsets give weight 0 (identity moves)
        assert_eq!(subset_weight(&[], &w, &form), 0);
        assert_eq!(subset_weight(&[0, 1, 2, 3, 4], &w, &form), 0);
        let step = quantized_inverse_shuffle_step(&w, &rat(2), &form).unwrap();
        assert_eq!(step.total(), Rat::one());
        let other = quantized_inverse_shuffle_step(&[2, 1, 3, 5, 4], &rat(2), &form).unwrap();
        assert_eq!(other.total(), Rat::one());
    }
}
