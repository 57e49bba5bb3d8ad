//! The acceptance suite: one function per criterion, each returning pass or
//! fail with a short detail line. `run_all` powers both the `verify` CLI
//! subcommand and the integration test target.

use crate::absorb::{self, CharacterSpec};
use crate::chain::{self, StationarySet};
use crate::error::Result;
use crate::gens::{compositions_of, partitions_of, LinComb, Partition};
use crate::hopf::HopfInstance;
use crate::instances::deck::DeckInstance;
use crate::instances::simplicial::ComplexData;
use crate::instances::symfn::{QuotientSymFnInstance, SymFnInstance};
use crate::ratio::{big, binomial, frac, rat, Rat};
use crate::{shuffle, spectral};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use std::time::Instant;

pub struct CriterionResult {
    pub id: u32,
    pub name: String,
    pub pass: bool,
    pub detail: String,
    pub seconds: f64,
}

fn run_criterion(
    id: u32,
    name: &str,
    budget_seconds: Option<f64>,
    f: impl FnOnce() -> Result<(bool, String)>,
) -> CriterionResult {
    let t0 = Instant::now();
    let (mut pass, mut detail) = match f() {
        Ok((p, d)) => (p, d),
        Err(e) => (false, format!("error: {e}")),
    };
    let seconds = t0.elapsed().as_secs_f64();
    if let Some(budget) = budget_seconds {
        if seconds > budget {
            pass = false;
            detail = format!("{detail}; exceeded {budget}s budget");
        }
    }
    CriterionResult { id, name: name.into(), pass, detail, seconds }
}

pub fn run_all() -> Vec<CriterionResult> {
    vec![
        run_criterion(1, "golden rock transition matrices n=2,3,4", Some(1.0), golden_matrices),
        run_criterion(2, "golden rock eigenbases and duality n=2,3,4", Some(1.0), golden_eigen),
        run_criterion(
            3,
            "exact eigen-equations: rock n<=8, decks of all compositions n<=6, a in {2,3}",
            Some(60.0),
            eigen_equations_at_scale,
        ),
        run_criterion(4, "rock closed forms agree with generic eigenvectors, n<=8", None, closed_forms),
        run_criterion(5, "GSR identity and convolution, n<=5", None, gsr_identity),
        run_criterion(6, "named shuffle eigenfunctions, n<=6", None, named_eigenfunctions),
        run_criterion(7, "eigenvalue multiplicities: p(n,l) and Stirling", None, multiplicities),
        run_criterion(8, "absorption probabilities and chromatic route", None, absorption),
        run_criterion(9, "quasi-stationary distributions, rock n<=8", None, quasi_stationarity),
        run_criterion(10, "balls-in-boxes occupancy vs matrix powers", None, balls_in_boxes),
        run_criterion(11, "q-shuffles: sequential law, GSR at q=1, Monte Carlo", None, q_shuffles),
        run_criterion(12, "quotient symmetric functions fail rescaling at e2", None, failure_path),
    ]
}

fn rock_instance(n: u32) -> SymFnInstance {
    SymFnInstance::new(n)
}

fn golden_matrices() -> Result<(bool, String)> {
    let golden: [(u32, Vec<Vec<Rat>>); 3] = [
        (2, vec![vec![rat(1), rat(0)], vec![frac(1, 2), frac(1, 2)]]),
        (
            3,
            vec![
                vec![rat(1), rat(0), rat(0)],
                vec![frac(1, 2), frac(1, 2), rat(0)],
                vec![rat(0), frac(3, 4), frac(1, 4)],
            ],
        ),
        (
            4,
            vec![
                vec![rat(1), rat(0), rat(0), rat(0), rat(0)],
                vec![frac(1, 2), frac(1, 2), rat(0), rat(0), rat(0)],
                vec![frac(1, 4), frac(1, 2), frac(1, 4), rat(0), rat(0)],
                vec![rat(0), frac(3, 4), rat(0), frac(1, 4), rat(0)],
                vec![rat(0), rat(0), frac(3, 8), frac(1, 2), frac(1, 8)],
            ],
        ),
    ];
    for (n, want) in &golden {
        let inst = rock_instance(*n);
        let resc = chain::markov_instance(&inst, *n)?;
        let k = chain::transition_matrix(&resc, *n, 2)?;
        if k.to_dense() != *want {
            return Ok((false, format!("matrix mismatch at n={n}")));
        }
    }
    Ok((true, "entry-for-entry equality".into()))
}

fn golden_eigen() -> Result<(bool, String)> {
    let golden_left: [(u32, Vec<Vec<i64>>); 3] = [
        (2, vec![vec![1, 0], vec![-1, 1]]),
        (3, vec![vec![1, 0, 0], vec![-1, 1, 0], vec![2, -3, 1]]),
        (
            4,
            vec![
                vec![1, 0, 0, 0, 0],
                vec![-1, 1, 0, 0, 0],
                vec![1, -2, 1, 0, 0],
                vec![2, -3, 0, 1, 0],
                vec![-6, 12, -3, -4, 1],
            ],
        ),
    ];
    let golden_right: [(u32, Vec<Vec<i64>>); 3] = [
        (2, vec![vec![1, 0], vec![1, 1]]),
        (3, vec![vec![1, 0, 0], vec![1, 1, 0], vec![1, 3, 1]]),
        (
            4,
            vec![
                vec![1, 0, 0, 0, 0],
                vec![1, 1, 0, 0, 0],
                vec![1, 2, 1, 0, 0],
                vec![1, 3, 0, 1, 0],
                vec![1, 6, 3, 4, 1],
            ],
        ),
    ];
    for ((n, want_g), (_, want_f)) in golden_left.iter().zip(golden_right.iter()) {
        let inst = rock_instance(*n);
        let resc = chain::markov_instance(&inst, *n)?;
        let sys = spectral::eigensystem(&resc, *n)?;
        let g = sys.left_matrix();
        let f = sys.right_matrix();
        for (row, want) in g.data.iter().zip(want_g.iter()) {
            let want: Vec<Rat> = want.iter().map(|&v| rat(v)).collect();
            if *row != want {
                return Ok((false, format!("left eigenvector mismatch at n={n}")));
            }
        }
        for (row, want) in f.data.iter().zip(want_f.iter()) {
            let want: Vec<Rat> = want.iter().map(|&v| rat(v)).collect();
            if *row != want {
                return Ok((false, format!("right eigenvector mismatch at n={n}")));
            }
        }
        if !spectral::duality_certificate(&sys) {
            return Ok((false, format!("duality certificate failed at n={n}")));
        }
    }
    Ok((true, "left/right tables and duality certificate".into()))
}

fn eigen_equations_at_scale() -> Result<(bool, String)> {
    let mut checked = 0usize;
    // rock-breaking, n <= 8
    let inst = rock_instance(8);
    let resc = chain::markov_instance(&inst, 8)?;
    for n in 1..=8u32 {
        let sys = spectral::eigensystem(&resc, n)?;
        for a in [2u32, 3] {
            let k = chain::transition_matrix(&resc, n, a)?;
            let report = spectral::eigen_equation_check(&k, &sys)?;
            if !report.all_pass() {
                return Ok((false, format!("rock n={n} a={a}: {} failures", report.failures.len())));
            }
            checked += report.checked;
        }
    }
    // decks of every composition of n <= 6
    for n in 1..=6u32 {
        for nu in compositions_of(n) {
            let deck = DeckInstance::new(nu.clone())?;
            let resc = chain::markov_instance(&deck, n)?;
            let sys = spectral::eigensystem(&resc, n)?;
            for a in [2u32, 3] {
                let k = chain::transition_matrix(&resc, n, a)?;
                let report = spectral::eigen_equation_check(&k, &sys)?;
                if !report.all_pass() {
                    return Ok((
                        false,
                        format!("deck {nu:?} a={a}: {} failures", report.failures.len()),
                    ));
                }
                checked += report.checked;
            }
        }
    }
    Ok((true, format!("{checked} exact eigen-equations")))
}

fn closed_forms() -> Result<(bool, String)> {
    // pinned worked examples
    let mu = Partition::new(vec![2, 1, 1, 1]);
    let lambda = Partition::new(vec![3, 2]);
    if spectral::rock_f(&mu, &lambda)? != rat(4) {
        return Ok((false, "rock_f((2,1,1,1),(3,2)) != 4".into()));
    }
    if spectral::rock_g(&lambda, &mu)? != rat(5) {
        return Ok((false, "rock_g((3,2),(2,1,1,1)) != 5".into()));
    }
    // agreement with the generic constructions for all pairs, n <= 8
    let inst = rock_instance(8);
    let resc = chain::markov_instance(&inst, 8)?;
    let mut pairs = 0usize;
    for n in 1..=8u32 {
        let sys = spectral::eigensystem(&resc, n)?;
        let g = sys.left_matrix();
        let f = sys.right_matrix();
        let parts: Vec<Partition> =
            sys.basis.iter().map(SymFnInstance::elt_to_partition).collect();
        for (i, lam) in parts.iter().enumerate() {
            for (j, mu) in parts.iter().enumerate() {
                // g matrix: row λ evaluated at state μ
                if g.data[i][j] != spectral::rock_g(lam, mu)? {
                    return Ok((false, format!("rock_g mismatch at n={n} λ={lam} μ={mu}")));
                }
                // f matrix: column μ evaluated at state λ (rows are states)
                if f.data[i][j] != spectral::rock_f(mu, lam)? {
                    return Ok((false, format!("rock_f mismatch at n={n} λ={lam} μ={mu}")));
                }
            }
        }
        pairs += parts.len() * parts.len();
    }
    Ok((true, format!("{pairs} closed-form values")))
}

fn gsr_identity() -> Result<(bool, String)> {
    for n in 2..=5u32 {
        let deck = DeckInstance::distinct(n)?;
        let resc = chain::markov_instance(&deck, n)?;
        for a in [2u32, 3] {
            let from_hopf = shuffle::forward_shuffle_matrix(&resc, n, a)?;
            let from_formula = shuffle::gsr_forward_matrix(n, a)?;
            if from_hopf.rows != from_formula.rows {
                return Ok((false, format!("forward matrix != closed-form matrix at n={n} a={a}")));
            }
        }
        // convolution Q_a * Q_b = Q_{ab}
        for (a, b) in [(2u32, 2u32), (2, 3), (3, 3)] {
            for sigma in shuffle::all_permutations(n) {
                if shuffle::gsr_convolution(n, a, b, &sigma)
                    != shuffle::gsr_probability(n, a * b, &sigma)
                {
                    return Ok((false, format!("convolution fails at n={n} ({a},{b})")));
                }
            }
        }
    }
    // the n=3 table, symbolically: entry(u,v) = binom(a+2-d, 3)/a^3 with the
    // displayed descent pattern
    let d_pattern: [[i64; 6]; 6] = [
        [0, 1, 1, 1, 1, 2],
        [1, 0, 1, 2, 1, 1],
        [1, 1, 0, 1, 2, 1],
        [1, 2, 1, 0, 1, 1],
        [1, 1, 2, 1, 0, 1],
        [2, 1, 1, 1, 1, 0],
    ];
    for a in [2u32, 3] {
        let k = shuffle::gsr_forward_matrix(3, a)?;
        for i in 0..6 {
            for j in 0..6 {
                let want = big(&crate::ratio::binomial_int(a as i64 + 2 - d_pattern[i][j], 3))
                    / crate::ratio::pow_rat(&rat(a as i64), 3);
                if k.entry(i, j) != want {
                    return Ok((false, format!("n=3 table mismatch at a={a} ({i},{j})")));
                }
            }
        }
    }
    Ok((true, "forward = closed-form matrix; convolution law; n=3 binomial table".into()))
}

fn named_eigenfunctions() -> Result<(bool, String)> {
    let mut families = 0usize;
    // distinct decks: descents, peaks family, carries h_j
    for n in 2..=6u32 {
        let nu = vec![1u32; n as usize];
        for a in [2u32, 3] {
            if a == 3 && n == 6 {
                continue; // the a=2 check at n=6 plus a=3 through n=5 stays in budget
            }
            let fams = shuffle::named_eigenfunctions(&nu, a)?;
            let names: Vec<&str> = fams.iter().map(|f| f.name.as_str()).collect();
            if !names.iter().any(|s| s.starts_with("descents")) {
                return Ok((false, format!("missing descents family at n={n}")));
            }
            if n >= 3
                && !(names.iter().any(|s| s.starts_with("peaks"))
                    && names.iter().any(|s| s.starts_with("troughs"))
                    && names.iter().any(|s| s.starts_with("straights")))
            {
                return Ok((false, format!("missing peak family at n={n}")));
            }
            for j in 0..n {
                if !names.contains(&format!("carries h_{j}").as_str()) {
                    return Ok((false, format!("missing h_{j} at n={n}")));
                }
            }
            families += fams.len();
        }
    }
    // every deck composition: ascent-descent family and the 1/a multiplicity
    for n in 2..=6u32 {
        for nu in compositions_of(n) {
            let n_values = nu.len();
            if n_values >= 2 {
                let fams = shuffle::named_eigenfunctions(&nu, 2)?;
                if !fams.iter().any(|f| f.name.starts_with("ascents")) {
                    return Ok((false, format!("missing ascent-descent family for {nu:?}")));
                }
                families += 1;
            }
            let deck = DeckInstance::new(nu.clone())?;
            let resc = chain::markov_instance(&deck, n)?;
            let mult = spectral::multiplicities(&resc, n)?;
            let second = mult.get(&(n - 1)).cloned().unwrap_or_else(BigInt::zero);
            let want = binomial(n_values as u64, 2);
            if second != want {
                return Ok((
                    false,
                    format!("eigenvalue-1/a multiplicity for {nu:?}: {second} != {want}"),
                ));
            }
        }
    }
    Ok((true, format!("{families} verified families")))
}

fn multiplicities() -> Result<(bool, String)> {
    // rock-breaking: multiplicity of 1/2^{n-l} equals p(n, l), n <= 10
    for n in 1..=10u32 {
        let counts: Vec<(u32, u64)> = (1..=n).map(|i| (i, 1)).collect();
        let mult = chain::eigenvalue_multiplicities(&counts, n);
        for (l, m) in &mult {
            let p_n_l = partitions_of(n).into_iter().filter(|p| p.len() == *l as usize).count();
            if *m != BigInt::from(p_n_l) {
                return Ok((false, format!("rock multiplicity p({n},{l}) mismatch")));
            }
        }
    }
    // distinct decks: eigenvalue a^{k-n} has multiplicity c(n, k), n <= 7
    fn stirling_unsigned(n: u32, k: u32) -> BigInt {
        // c(n+1, k) = c(n, k-1) + n c(n, k)
        let mut row = vec![BigInt::one()];
        for m in 0..n {
            let mut next = vec![BigInt::zero(); row.len() + 1];
            for (j, v) in row.iter().enumerate() {
                next[j + 1] += v;
                next[j] += v * BigInt::from(m);
            }
            row = next;
        }
        row.get(k as usize).cloned().unwrap_or_else(BigInt::zero)
    }
    for n in 1..=7u32 {
        let content: Vec<crate::gens::GeneratorId> =
            (1..=n).map(crate::instances::deck::letter).collect();
        let mult = spectral::deck_multiplicities(&content)?;
        for k in 1..=n {
            let got = mult.get(&k).cloned().unwrap_or_else(BigInt::zero);
            if got != stirling_unsigned(n, k) {
                return Ok((false, format!("deck multiplicity c({n},{k}) mismatch")));
            }
        }
        // direct count: Lyndon factors of every word
        let deck = DeckInstance::distinct(n)?;
        let basis = deck.enumerate_basis(n)?;
        let mut direct = std::collections::BTreeMap::new();
        for b in &basis {
            let k = crate::lyndon::lyndon_factorize(b.factors())?.len() as u32;
            *direct.entry(k).or_insert(0u64) += 1;
        }
        for (k, count) in direct {
            if mult.get(&k).cloned().unwrap_or_else(BigInt::zero) != BigInt::from(count) {
                return Ok((false, format!("deck direct count mismatch at n={n} k={k}")));
            }
        }
    }
    // generating-function extraction matches direct eigenbasis counts
    let inst = rock_instance(6);
    let resc = chain::markov_instance(&inst, 6)?;
    for n in 1..=6u32 {
        let sys = spectral::eigensystem(&resc, n)?;
        let mult = spectral::multiplicities(&resc, n)?;
        let mut direct = std::collections::BTreeMap::new();
        for ev in &sys.left {
            *direct.entry(ev.exponent).or_insert(0u64) += 1;
        }
        for (k, count) in direct {
            if mult.get(&k).cloned().unwrap_or_else(BigInt::zero) != BigInt::from(count) {
                return Ok((false, format!("rock eigenbasis count mismatch at n={n} k={k}")));
            }
        }
    }
    Ok((true, "p(n,l) to n=10; Stirling to n=7; GF matches eigenbases".into()))
}

fn absorption() -> Result<(bool, String)> {
    // rock-breaking: chi route equals direct matrix mass, n <= 6
    let inst = rock_instance(6);
    let resc = chain::markov_instance(&inst, 6)?;
    let spec = CharacterSpec::degree_one(&inst)?;
    for n in 2..=6u32 {
        for lambda in partitions_of(n) {
            let b = SymFnInstance::partition_to_elt(&lambda);
            for a in [2u32, 3] {
                if absorb::absorption_probability(&resc, &b, a, &spec)?
                    != absorb::absorption_by_matrix(&resc, &b, a, &spec)?
                {
                    return Ok((false, format!("rock chi/matrix mismatch at {lambda} a={a}")));
                }
            }
        }
    }
    // graphs on <= 5 vertices
    let ginst = crate::instances::graphs::UnlabeledGraphInstance::new(5)?;
    let gresc = chain::markov_instance(&ginst, 5)?;
    let gspec = CharacterSpec::degree_one(&ginst)?;
    for n in 2..=5u32 {
        for b in gresc.enumerate_basis(n)? {
            for a in [2u32, 3] {
                if absorb::absorption_probability(&gresc, &b, a, &gspec)?
                    != absorb::absorption_by_matrix(&gresc, &b, a, &gspec)?
                {
                    return Ok((false, format!("graph chi/matrix mismatch at degree {n}")));
                }
            }
        }
    }
    // rock k-step absorption from (n): closed form and the 1/2^k bound
    let inst8 = rock_instance(8);
    let resc8 = chain::markov_instance(&inst8, 8)?;
    let spec8 = CharacterSpec::degree_one(&inst8)?;
    for n in 2..=8u32 {
        let b = SymFnInstance::partition_to_elt(&Partition::new(vec![n]));
        let k2 = chain::transition_matrix(&resc8, n, 2)?;
        let absorbed_state = SymFnInstance::partition_to_elt(&Partition::new(vec![1; n as usize]));
        let mut power = k2.clone();
        for k in 1..=12u32 {
            if k > 1 {
                power = power.multiply(&k2)?;
            }
            let closed = chain::rock_absorption_closed_form(n, k);
            // chi route at a = 2^k
            let chi = absorb::absorption_probability(&resc8, &b, 2u32.pow(k), &spec8)?;
            if chi != closed {
                return Ok((false, format!("rock absorption chi mismatch n={n} k={k}")));
            }
            // matrix-power route
            let i0 = power.index_of(&b).expect("start in block");
            let mass = power.row_distribution(i0).coeff(&absorbed_state);
            if mass != closed {
                return Ok((false, format!("rock absorption power mismatch n={n} k={k}")));
            }
            // Markov bound: P(not absorbed) <= binom(n,2)/2^k
            let bound = big(&binomial(n as u64, 2)) / crate::ratio::pow_rat(&rat(2), k);
            if Rat::one() - closed > bound {
                return Ok((false, format!("absorption bound violated n={n} k={k}")));
            }
        }
    }
    // simplicial complexes: chromatic route vs brute-force colorings and
    // matrix powers, <= 5 vertices
    let complexes = [
        ComplexData::from_maximal_faces(4, &[0b1111])?,
        ComplexData::from_maximal_faces(4, &[0b0011, 0b0110, 0b1100])?,
        ComplexData::from_maximal_faces(5, &[0b00111, 0b11001])?,
    ];
    let cinst = crate::instances::simplicial::SimplicialInstance::new(5)?;
    let cresc = chain::markov_instance(&cinst, 5)?;
    let cspec = CharacterSpec::degree_one(&cinst)?;
    for cx in &complexes {
        let skeleton = cx.skeleton();
        let p0 = absorb::chromatic_polynomial(&skeleton)?;
        let b = crate::instances::simplicial::SimplicialInstance::elt_of_complex(cx)?;
        for k in 1..=3u32 {
            let m = BigInt::from(2u64).pow(k);
            // brute-force coloring oracle
            if p0.eval(&m) != absorb::proper_coloring_count(&skeleton, 2u32.pow(k))? {
                return Ok((false, "chromatic polynomial disagrees with coloring oracle".into()));
            }
            let closed = absorb::simplex_absorption(cx, k)?;
            let via_chi = absorb::absorption_probability(&cresc, &b, 2u32.pow(k), &cspec)?;
            if closed != via_chi {
                return Ok((false, "simplex absorption chi mismatch".into()));
            }
        }
    }
    Ok((true, "chi = matrix mass; closed forms and bounds to n=8, k=12".into()))
}

fn quasi_stationarity() -> Result<(bool, String)> {
    let inst = rock_instance(8);
    let resc = chain::markov_instance(&inst, 8)?;
    for n in 2..=8u32 {
        let (pi1, pi2) = chain::quasi_stationary(&resc, n)?;
        let mut target = vec![1u32; (n - 1) as usize];
        target[0] = 2;
        let expect = SymFnInstance::partition_to_elt(&Partition::new(target));
        let point = LinComb::singleton(expect, Rat::one());
        if pi1 != point || pi2 != point {
            return Ok((false, format!("quasi-stationary law not the point mass at n={n}")));
        }
    }
    Ok((true, "point mass at (2,1^{n-2}) for n=2..8".into()))
}

fn balls_in_boxes() -> Result<(bool, String)> {
    let inst = rock_instance(6);
    let resc = chain::markov_instance(&inst, 6)?;
    for n in 2..=6u32 {
        let k2 = chain::transition_matrix(&resc, n, 2)?;
        let from_n = SymFnInstance::partition_to_elt(&Partition::new(vec![n]));
        let i0 = k2.index_of(&from_n).expect("start in block");
        let mut power = k2.clone();
        for k in 1..=3u32 {
            if k > 1 {
                power = power.multiply(&k2)?;
            }
            if power.row_distribution(i0) != chain::rock_occupancy_from_n(n, k) {
                return Ok((false, format!("occupancy mismatch from ({n}) at k={k}")));
            }
        }
        // convolution over parts for general starting states
        for mu in partitions_of(n) {
            let b = SymFnInstance::partition_to_elt(&mu);
            let i = k2.index_of(&b).expect("state in block");
            let mut power = k2.clone();
            for k in 1..=3u32 {
                if k > 1 {
                    power = power.multiply(&k2)?;
                }
                if power.row_distribution(i) != chain::rock_occupancy_from(&mu, k) {
                    return Ok((false, format!("convolution mismatch from {mu} at k={k}")));
                }
            }
        }
    }
    Ok((true, "occupancy law equals exact matrix powers, n<=6, k<=3".into()))
}

fn q_shuffles() -> Result<(bool, String)> {
    for q in [frac(1, 2), rat(1), rat(2)] {
        for n in 2..=5u32 {
            let paths = shuffle::q_shuffle_path_distribution(n, &q)?;
            let mut total = Rat::zero();
            for w in shuffle::all_permutations(n) {
                let direct = shuffle::q_shuffle_probability(n, &q, &w)?;
                let from_paths = paths.get(&w).cloned().unwrap_or_else(Rat::zero);
                if direct != from_paths {
                    return Ok((false, format!("sequential law mismatch n={n} q={q:?}")));
                }
                total += direct;
            }
            if !total.is_one() {
                return Ok((false, format!("q-law does not normalize at n={n}")));
            }
        }
    }
    // q = 1 equals the forward GSR 2-shuffle (rising-sequence form)
    for n in 2..=5u32 {
        for w in shuffle::all_permutations(n) {
            let q1 = shuffle::q_shuffle_probability(n, &Rat::one(), &w)?;
            let gsr = shuffle::gsr_probability(n, 2, &shuffle::inverse_perm(&w));
            if q1 != gsr {
                return Ok((false, format!("q=1 differs from GSR at n={n}")));
            }
        }
    }
    // Monte Carlo: 1e5 samples at n=4, q=1/2, fixed seed, within 4 sigma
    let n = 4u32;
    let q = frac(1, 2);
    let samples = 100_000u32;
    let mut counts: std::collections::BTreeMap<Vec<u32>, u64> = std::collections::BTreeMap::new();
    let sampler = shuffle::QShuffleSampler::new(n, &q)?;
    use rand_chacha::rand_core::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(20260809);
    for _ in 0..samples {
        let w = sampler.sample(&mut rng);
        *counts.entry(w).or_insert(0) += 1;
    }
    for w in shuffle::all_permutations(n) {
        let p = crate::ratio::rat_to_f64(&shuffle::q_shuffle_probability(n, &q, &w)?);
        let observed = counts.get(&w).cloned().unwrap_or(0) as f64 / samples as f64;
        let sigma = (p * (1.0 - p) / samples as f64).sqrt();
        if (observed - p).abs() > 4.0 * sigma + 1e-12 {
            return Ok((
                false,
                format!("Monte Carlo outside 4 sigma at {w:?}: {observed} vs {p}"),
            ));
        }
    }
    Ok((true, "sequential = closed form; GSR at q=1; 1e5 samples in 4 sigma".into()))
}

fn failure_path() -> Result<(bool, String)> {
    let inst = QuotientSymFnInstance::new(4);
    match chain::rescale(&inst, 4) {
        Err(crate::error::HopfError::NoMarkovRescaling { generator, degree }) => {
            if generator != "e2" || degree != 2 {
                return Ok((false, format!("failed at {generator} (degree {degree}), not e2")));
            }
            Ok((true, "no-markov-rescaling at generator e2".into()))
        }
        Err(e) => Ok((false, format!("wrong error: {e}"))),
        Ok(_) => Ok((false, "rescaling unexpectedly succeeded".into())),
    }
}

/// Stationary structure sanity used by the CLI and tests: rock has the
/// single absorbing state 1^n; distinct decks have the uniform family.
pub fn stationary_sanity() -> Result<bool> {
    let inst = rock_instance(5);
    let resc = chain::markov_instance(&inst, 5)?;
    match chain::stationary_set(&resc, 5)? {
        StationarySet::Absorbing(v) => Ok(v.len() == 1
            && v[0] == SymFnInstance::partition_to_elt(&Partition::new(vec![1, 1, 1, 1, 1]))),
        _ => Ok(false),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quick_criteria() {
        // the cheap criteria run in unit tests; the full suite runs in the
        // dedicated acceptance integration test
        for (id, f) in [
            (1u32, golden_matrices as fn() -> Result<(bool, String)>),
            (2, golden_eigen),
            (12, failure_path),
        ] {
            let (pass, detail) = f().unwrap();
            assert!(pass, "criterion {id}: {detail}");
        }
        assert!(stationary_sanity().unwrap());
    }
}
