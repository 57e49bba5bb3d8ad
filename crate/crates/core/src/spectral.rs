//! Full left and right eigenbases for the Hopf-power chains, plus the
//! rock-breaking closed forms and eigenvalue multiplicity counts.
//!
//! Eigenvalues are tracked by their integer exponent k: the chain eigenvalue
//! is a^{k-n} (and the Ψ^a eigenvalue a^k), so one eigensystem serves every a
//! simultaneously.

use crate::chain::TransitionMatrix;
use crate::error::{HopfError, Result};
use crate::gens::{AlgebraKind, BasisElt, GeneratorId, LinComb, Partition};
use crate::hopf::{self, HopfInstance, RescaledInstance};
use crate::linalg::{Matrix, Solver};
use crate::lyndon;
use crate::ratio::{big, factorial, frac, rat, Rat};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use std::collections::BTreeMap;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Side {
    Left,
    Right,
}

/// One eigenvector of the degree-n chain block, indexed by a basis element.
#[derive(Clone, Debug)]
pub struct EigenVector {
    pub side: Side,
    pub index: BasisElt,
    /// Chain eigenvalue is a^{exponent - n}.
    pub exponent: u32,
    pub coeffs: LinComb<BasisElt>,
}

/// Paired left/right eigenbases over a degree block, aligned by index.
pub struct EigenSystem {
    pub instance: String,
    pub n: u32,
    pub basis: Vec<BasisElt>,
    pub labels: Vec<String>,
    pub left: Vec<EigenVector>,
    pub right: Vec<EigenVector>,
}

fn eulerian_cache(
    inst: &dyn HopfInstance,
    factors: &[GeneratorId],
) -> Result<BTreeMap<GeneratorId, LinComb<BasisElt>>> {
    let mut cache = BTreeMap::new();
    for &c in factors {
        if let std::collections::btree_map::Entry::Vacant(slot) = cache.entry(c) {
            slot.insert(hopf::eulerian_idempotent(inst, &BasisElt::generator(c))?);
        }
    }
    Ok(cache)
}

/// g_b for a polynomial instance: e(c_1) e(c_2) ... e(c_l).
fn left_vector_polynomial(
    inst: &dyn HopfInstance,
    b: &BasisElt,
    e_cache: &BTreeMap<GeneratorId, LinComb<BasisElt>>,
) -> LinComb<BasisElt> {
    let kind = inst.kind();
    let mut acc = LinComb::singleton(BasisElt::unit(), rat(1));
    for c in b.factors() {
        acc = acc.mul(&e_cache[c], kind);
    }
    acc
}

/// g_b for a free cocommutative instance: the polynomial sym(b) evaluated at
/// the primitives e(c_i) (bracketings along the standard factorization of
/// each Lyndon factor, then symmetrized over factor orderings).
fn left_vector_free(
    b: &BasisElt,
    e_cache: &BTreeMap<GeneratorId, LinComb<BasisElt>>,
) -> Result<(LinComb<BasisElt>, u32)> {
    fn bracket_eval(
        l: &[GeneratorId],
        e_cache: &BTreeMap<GeneratorId, LinComb<BasisElt>>,
    ) -> Result<LinComb<BasisElt>> {
        if l.len() == 1 {
            return Ok(e_cache[&l[0]].clone());
        }
        let (l1, l2) = lyndon::standard_factorization(l)?;
        let a = bracket_eval(&l1, e_cache)?;
        let b = bracket_eval(&l2, e_cache)?;
        Ok(a.commutator(&b))
    }
    let factors = lyndon::lyndon_factorize(b.factors())?;
    let evals: Vec<LinComb<BasisElt>> = factors
        .iter()
        .map(|l| bracket_eval(l, e_cache))
        .collect::<Result<_>>()?;
    let g = lyndon::symmetrized_product(&evals);
    Ok((g, factors.len() as u32))
}

/// The left eigenbasis of the degree-n block: one vector per basis element,
/// eigenvalue exponent l(b) (polynomial) or the number of Lyndon factors
/// (free). Triangular: g_b is supported on states reachable from b.
pub fn left_eigenbasis(inst: &RescaledInstance, n: u32) -> Result<Vec<EigenVector>> {
    let basis = inst.enumerate_basis(n)?;
    left_vectors_for(inst, &basis)
}

fn left_vectors_for(inst: &RescaledInstance, words: &[BasisElt]) -> Result<Vec<EigenVector>> {
    let mut all_factors: Vec<GeneratorId> = Vec::new();
    for b in words {
        all_factors.extend(b.factors().iter().copied());
    }
    let e_cache = eulerian_cache(inst, &all_factors)?;
    let mut out = Vec::with_capacity(words.len());
    for b in words {
        let (coeffs, exponent) = match inst.kind() {
            AlgebraKind::Polynomial => {
                (left_vector_polynomial(inst, b, &e_cache), b.len() as u32)
            }
            AlgebraKind::FreeCocommutative => left_vector_free(b, &e_cache)?,
        };
        out.push(EigenVector { side: Side::Left, index: b.clone(), exponent, coeffs });
    }
    Ok(out)
}

/// Right eigenbasis, polynomial case: f_b(b') is (1/l!) times the sum over
/// distinct orderings (c'_1, ..., c'_l) of b's factor multiset of the
/// coefficient of c'_1 ⊗ ... ⊗ c'_l in Δ^\[l\](b').
fn right_eigenbasis_polynomial(
    inst: &RescaledInstance,
    basis: &[BasisElt],
) -> Result<Vec<EigenVector>> {
    let n_max_len = basis.iter().map(|b| b.len()).max().unwrap_or(0);
    // acc[l][factor multiset][b'] = summed coefficient
    let mut acc: Vec<BTreeMap<Vec<GeneratorId>, LinComb<BasisElt>>> =
        vec![BTreeMap::new(); n_max_len + 1];
    for b2 in basis {
        for l in 1..=(b2.degree() as usize).min(n_max_len) {
            let reduced = hopf::reduced_coproduct_iterated(inst, b2, l as u32)?;
            if reduced.is_empty() {
                break;
            }
            for (tuple, v) in reduced.iter() {
                if !tuple.iter().all(|part| part.len() == 1) {
                    continue;
                }
                let mut key: Vec<GeneratorId> =
                    tuple.iter().map(|part| part.factors()[0]).collect();
                key.sort_unstable();
                acc[l]
                    .entry(key)
                    .or_insert_with(LinComb::zero)
                    .add_term(b2.clone(), v.clone());
            }
        }
    }
    let mut out = Vec::with_capacity(basis.len());
    for b in basis {
        let l = b.len();
        let scale = Rat::one() / big(&factorial(l as u64));
        let key = b.sorted_factors();
        let coeffs = acc[l]
            .get(&key)
            .map(|lc| lc.scale(&scale))
            .unwrap_or_else(LinComb::zero);
        out.push(EigenVector {
            side: Side::Right,
            index: b.clone(),
            exponent: l as u32,
            coeffs,
        });
    }
    Ok(out)
}

/// Interned universe of every word that can appear while assembling the
/// free right eigenbasis of one block: the block itself plus each sub-block
/// a Lyndon factor or partial product can live in, with the coproduct of
/// every word precomputed as id-pair lists. Id 0 is the unit.
struct WordTable {
    ids: std::collections::HashMap<BasisElt, u32>,
    words: Vec<BasisElt>,
    /// Δ(w) as (left id, right id, coefficient).
    pairs: Vec<Vec<(u32, u32, Rat)>>,
    /// word ids grouped by block key (letter content or total degree).
    blocks: BTreeMap<Vec<GeneratorId>, Vec<u32>>,
    content_graded: bool,
    concat_memo: std::cell::RefCell<std::collections::HashMap<u64, u32>>,
}

fn block_key(content_graded: bool, factors: &[GeneratorId]) -> Vec<GeneratorId> {
    if content_graded {
        let mut k = factors.to_vec();
        k.sort_unstable();
        k
    } else {
        vec![GeneratorId::new(factors.iter().map(|c| c.degree).sum(), 0)]
    }
}

impl WordTable {
    fn build(inst: &RescaledInstance, basis: &[BasisElt], n: u32) -> Result<WordTable> {
        let content_graded = inst.content_graded();
        let mut universe: Vec<BasisElt> = Vec::new();
        if content_graded {
            // all nonempty sub-contents of the block content
            let content = basis
                .first()
                .ok_or_else(|| HopfError::InvalidInput("empty block".into()))?
                .sorted_factors();
            let mut letters = content.clone();
            letters.dedup();
            let maxes: Vec<usize> = letters
                .iter()
                .map(|l| content.iter().filter(|c| *c == l).count())
                .collect();
            let mut counts = vec![0usize; letters.len()];
            loop {
                if counts.iter().any(|&c| c > 0) {
                    let mut sub: Vec<GeneratorId> = Vec::new();
                    for (i, &c) in counts.iter().enumerate() {
                        for _ in 0..c {
                            sub.push(letters[i]);
                        }
                    }
                    universe.extend(crate::instances::deck::words_with_content(&sub));
                }
                let mut pos = counts.len();
                loop {
                    if pos == 0 {
                        break;
                    }
                    pos -= 1;
                    counts[pos] += 1;
                    if counts[pos] <= maxes[pos] {
                        break;
                    }
                    counts[pos] = 0;
                }
                if counts.iter().all(|&c| c == 0) {
                    break;
                }
            }
        } else {
            for d in 1..=n {
                universe.extend(inst.enumerate_basis(d)?);
            }
        }
        let mut words = vec![BasisElt::unit()];
        words.extend(universe);
        let mut ids = std::collections::HashMap::new();
        for (i, w) in words.iter().enumerate() {
            ids.insert(w.clone(), i as u32);
        }
        let mut pairs = Vec::with_capacity(words.len());
        let mut blocks: BTreeMap<Vec<GeneratorId>, Vec<u32>> = BTreeMap::new();
        for (i, w) in words.iter().enumerate() {
            let split = hopf::coproduct(inst, w)?;
            let mut list = Vec::with_capacity(split.len());
            for ((x, y), v) in split.iter() {
                let xi = *ids.get(x).ok_or_else(|| {
                    HopfError::InternalInconsistency("coproduct escapes the word table".into())
                })?;
                let yi = *ids.get(y).ok_or_else(|| {
                    HopfError::InternalInconsistency("coproduct escapes the word table".into())
                })?;
                list.push((xi, yi, v.clone()));
            }
            pairs.push(list);
            if i > 0 {
                blocks
                    .entry(block_key(content_graded, w.factors()))
                    .or_default()
                    .push(i as u32);
            }
        }
        Ok(WordTable {
            ids,
            words,
            pairs,
            blocks,
            content_graded,
            concat_memo: std::cell::RefCell::new(std::collections::HashMap::new()),
        })
    }

    fn id_of(&self, w: &BasisElt) -> Result<u32> {
        self.ids
            .get(w)
            .copied()
            .ok_or_else(|| HopfError::InternalInconsistency("word outside the table".into()))
    }

    fn block_of(&self, factors: &[GeneratorId]) -> Result<&[u32]> {
        self.blocks
            .get(&block_key(self.content_graded, factors))
            .map(|v| v.as_slice())
            .ok_or_else(|| HopfError::InternalInconsistency("missing sub-block".into()))
    }

    /// Concatenation product of two interned words, memoized.
    fn concat(&self, a: u32, b: u32) -> u32 {
        if a == 0 {
            return b;
        }
        if b == 0 {
            return a;
        }
        let key = ((a as u64) << 32) | b as u64;
        if let Some(&id) = self.concat_memo.borrow().get(&key) {
            return id;
        }
        let mut gens: Vec<GeneratorId> = self.words[a as usize].factors().to_vec();
        gens.extend(self.words[b as usize].factors().iter().copied());
        let id = *self
            .ids
            .get(&BasisElt::word(gens))
            .expect("products stay within the table");
        self.concat_memo.borrow_mut().insert(key, id);
        id
    }

    /// The Eulerian idempotent of an interned word, as id-indexed
    /// coefficients. Stages of the reduced coproduct only ever split the
    /// last tensor component, so a stage state collapses to the pair
    /// (concatenated frozen prefix, last component).
    fn eulerian(&self, w: u32) -> std::collections::HashMap<u32, Rat> {
        let mut acc: std::collections::HashMap<u32, Rat> = std::collections::HashMap::new();
        let deg = self.words[w as usize].degree();
        if deg == 0 {
            return acc;
        }
        acc.insert(w, Rat::one());
        // state key: (prefix id << 32) | last id
        let mut stage: std::collections::HashMap<u64, Rat> = std::collections::HashMap::new();
        stage.insert(w as u64, Rat::one());
        for a in 2..=deg {
            let mut next: std::collections::HashMap<u64, Rat> =
                std::collections::HashMap::new();
            for (&state, c) in &stage {
                let prefix = (state >> 32) as u32;
                let last = (state & 0xffff_ffff) as u32;
                for (x, y, v) in &self.pairs[last as usize] {
                    if *x == 0 || *y == 0 {
                        continue;
                    }
                    let p2 = self.concat(prefix, *x);
                    let key = ((p2 as u64) << 32) | *y as u64;
                    let e = next.entry(key).or_insert_with(Rat::zero);
                    *e += c * v;
                }
            }
            if next.is_empty() {
                break;
            }
            let sign = if a % 2 == 1 { rat(1) } else { rat(-1) };
            let coeff = sign * frac(1, a as i64);
            for (&state, c) in &next {
                let prefix = (state >> 32) as u32;
                let last = (state & 0xffff_ffff) as u32;
                let prod = self.concat(prefix, last);
                let e = acc.entry(prod).or_insert_with(Rat::zero);
                *e += c * &coeff;
            }
            stage = next;
        }
        acc.retain(|_, v| !v.is_zero());
        acc
    }
}

/// Sparse functional over interned word ids.
type SparseFunc = Vec<(u32, Rat)>;

/// Solves the Lyndon right eigenvectors of one sub-block: each f_b (b
/// Lyndon) lies in the eigenvalue-a eigenspace of the dual power map,
/// spanned by the functionals w ↦ [coeff of b'' in e(w)] for Lyndon b'',
/// and is pinned by duality against the Lyndon g's.
fn lyndon_duals_interned(
    inst: &RescaledInstance,
    table: &WordTable,
    block: &[u32],
) -> Result<BTreeMap<u32, SparseFunc>> {
    let block_words: Vec<BasisElt> =
        block.iter().map(|&i| table.words[i as usize].clone()).collect();
    let lyndon_local: Vec<usize> = (0..block_words.len())
        .filter(|&i| lyndon::is_lyndon(block_words[i].factors()).unwrap_or(false))
        .collect();
    if lyndon_local.is_empty() {
        return Ok(BTreeMap::new());
    }
    // only the Lyndon g's enter the duality system
    let lyndon_words_only: Vec<BasisElt> =
        lyndon_local.iter().map(|&i| block_words[i].clone()).collect();
    let lefts = left_vectors_for(inst, &lyndon_words_only)?;
    // A[i][j] = coeff of lyndon_j in g_{lyndon_i} (e fixes primitives)
    let m = lyndon_local.len();
    let mut a = Matrix::zero(m, m);
    for (i, _) in lyndon_local.iter().enumerate() {
        for (j, &lj) in lyndon_local.iter().enumerate() {
            a.data[i][j] = lefts[i].coeffs.coeff(&block_words[lj]);
        }
    }
    let solver = Solver::new(&a)?;
    // E[w local][j] = coeff of lyndon_j in e(w)
    let lyndon_ids: Vec<u32> = lyndon_local.iter().map(|&i| block[i]).collect();
    let e_cols = eulerian_columns(table, block, &lyndon_ids);
    let mut out = BTreeMap::new();
    for (bi, &lid) in lyndon_ids.iter().enumerate() {
        let mut rhs = vec![Rat::zero(); m];
        rhs[bi] = Rat::one();
        let alpha = solver.solve(&rhs);
        let mut dense: BTreeMap<u32, Rat> = BTreeMap::new();
        for (j, aj) in alpha.iter().enumerate() {
            if aj.is_zero() {
                continue;
            }
            for (wi, c) in &e_cols[j] {
                let e = dense.entry(block[*wi]).or_insert_with(Rat::zero);
                *e += aj * c;
            }
        }
        let sparse: SparseFunc = dense.into_iter().filter(|(_, v)| !v.is_zero()).collect();
        out.insert(lid, sparse);
    }
    Ok(out)
}

/// Columns of the Eulerian idempotent matrix at the given target words:
/// e_cols[j] lists (local word index, coeff of target_j in e(w)). For decks
/// the columns are computed directly (the a-th term pairs the slicings of
/// the target into a nonempty pieces with interleaving assignments of w);
/// other instances walk the generic Eulerian image per word.
fn eulerian_columns(
    table: &WordTable,
    block: &[u32],
    targets: &[u32],
) -> Vec<Vec<(usize, Rat)>> {
    let m = targets.len();
    let mut e_cols: Vec<Vec<(usize, Rat)>> = vec![Vec::new(); m];
    if table.content_graded {
        for (j, &tid) in targets.iter().enumerate() {
            let target = table.words[tid as usize].factors().to_vec();
            for (wi, &wid) in block.iter().enumerate() {
                let w = table.words[wid as usize].factors();
                let mut val = if wid == tid { Rat::one() } else { Rat::zero() };
                let n = target.len();
                for a in 2..=n {
                    let mut count = BigInt::zero();
                    for_each_slicing(&target, a, &mut |pieces| {
                        count += interleaving_assignments(w, pieces);
                    });
                    if count.is_zero() {
                        continue;
                    }
                    let sign = if a % 2 == 1 { rat(1) } else { rat(-1) };
                    val += sign * big(&count) / rat(a as i64);
                }
                if !val.is_zero() {
                    e_cols[j].push((wi, val));
                }
            }
        }
    } else {
        let target_pos: std::collections::HashMap<u32, usize> =
            targets.iter().enumerate().map(|(j, &id)| (id, j)).collect();
        for (wi, &wid) in block.iter().enumerate() {
            let e_w = table.eulerian(wid);
            for (target, c) in &e_w {
                if let Some(&j) = target_pos.get(target) {
                    e_cols[j].push((wi, c.clone()));
                }
            }
        }
        for col in &mut e_cols {
            col.sort_by_key(|(wi, _)| *wi);
        }
    }
    e_cols
}

/// Visits every slicing of `word` into `a` nonempty consecutive pieces.
fn for_each_slicing(word: &[GeneratorId], a: usize, visit: &mut impl FnMut(&[&[GeneratorId]])) {
    fn rec<'a>(
        rest: &'a [GeneratorId],
        remaining: usize,
        acc: &mut Vec<&'a [GeneratorId]>,
        visit: &mut impl FnMut(&[&[GeneratorId]]),
    ) {
        if remaining == 1 {
            acc.push(rest);
            visit(acc);
            acc.pop();
            return;
        }
        for cut in 1..=(rest.len() - remaining + 1) {
            acc.push(&rest[..cut]);
            rec(&rest[cut..], remaining - 1, acc, visit);
            acc.pop();
        }
    }
    if a >= 1 && word.len() >= a {
        rec(word, a, &mut Vec::new(), visit);
    }
}

/// Number of ways to assign each position of `w` to one of the pieces so
/// that the positions of piece i, read in order, spell piece i. This is the
/// coefficient of piece_1 ⊗ ... ⊗ piece_a in the iterated coproduct of w
/// when the letters are primitive.
fn interleaving_assignments(w: &[GeneratorId], pieces: &[&[GeneratorId]]) -> BigInt {
    // DP over progress vectors, mixed-radix encoded
    let radix: Vec<usize> = pieces.iter().map(|p| p.len() + 1).collect();
    let cells: usize = radix.iter().product();
    let mut dp = vec![BigInt::zero(); cells];
    dp[0] = BigInt::one();
    let mut strides = vec![1usize; pieces.len()];
    for i in 1..pieces.len() {
        strides[i] = strides[i - 1] * radix[i - 1];
    }
    for &letter in w {
        let mut next = vec![BigInt::zero(); cells];
        for (cell, ways) in dp.iter().enumerate() {
            if ways.is_zero() {
                continue;
            }
            for (i, piece) in pieces.iter().enumerate() {
                let progress = (cell / strides[i]) % radix[i];
                if progress < piece.len() && piece[progress] == letter {
                    next[cell + strides[i]] += ways;
                }
            }
        }
        dp = next;
    }
    dp[cells - 1].clone()
}

/// (h · f)(w) = Σ_{Δ(w)} h(x) f(y) on the target block, with dense scratch
/// buffers over the interned universe.
fn convolve_interned(
    table: &WordTable,
    h: &SparseFunc,
    f: &SparseFunc,
    target: &[u32],
    scratch_h: &mut [Option<Rat>],
    scratch_f: &mut [Option<Rat>],
) -> SparseFunc {
    for (i, v) in h {
        scratch_h[*i as usize] = Some(v.clone());
    }
    for (i, v) in f {
        scratch_f[*i as usize] = Some(v.clone());
    }
    let mut out: SparseFunc = Vec::new();
    for &w in target {
        let mut val = Rat::zero();
        for (x, y, c) in &table.pairs[w as usize] {
            if let (Some(hx), Some(fy)) = (&scratch_h[*x as usize], &scratch_f[*y as usize]) {
                val += c * hx * fy;
            }
        }
        if !val.is_zero() {
            out.push((w, val));
        }
    }
    for (i, _) in h {
        scratch_h[*i as usize] = None;
    }
    for (i, _) in f {
        scratch_f[*i as usize] = None;
    }
    out
}

/// Right eigenbasis, free case: Lyndon vectors from the duality solve, then
/// normalized convolution products along the decreasing Lyndon
/// factorization, memoized over shared factor prefixes.
fn right_eigenbasis_free(
    inst: &RescaledInstance,
    basis: &[BasisElt],
) -> Result<Vec<EigenVector>> {
    if basis.is_empty() {
        return Ok(Vec::new());
    }
    let n = basis[0].degree();
    let table = WordTable::build(inst, basis, n)?;
    // factor each basis word and solve every Lyndon sub-block once
    let mut factorizations: Vec<Vec<u32>> = Vec::with_capacity(basis.len());
    let mut lyndon_f: BTreeMap<u32, SparseFunc> = BTreeMap::new();
    let mut blocks_done: std::collections::BTreeSet<Vec<GeneratorId>> =
        std::collections::BTreeSet::new();
    for b in basis {
        let factors = lyndon::lyndon_factorize(b.factors())?;
        let mut ids = Vec::with_capacity(factors.len());
        for l in &factors {
            let key = block_key(table.content_graded, l);
            if !blocks_done.contains(&key) {
                let block = table.block_of(l)?.to_vec();
                lyndon_f.extend(lyndon_duals_interned(inst, &table, &block)?);
                blocks_done.insert(key);
            }
            ids.push(table.id_of(&BasisElt::word(l.clone()))?);
        }
        factorizations.push(ids);
    }
    // convolution products over decreasing factor prefixes, memoized
    let mut conv_cache: std::collections::HashMap<Vec<u32>, SparseFunc> =
        std::collections::HashMap::new();
    let mut scratch_h: Vec<Option<Rat>> = vec![None; table.words.len()];
    let mut scratch_f: Vec<Option<Rat>> = vec![None; table.words.len()];
    let mut out = Vec::with_capacity(basis.len());
    for (b, factor_ids) in basis.iter().zip(factorizations.iter()) {
        let k = factor_ids.len() as u32;
        let mut product: SparseFunc = lyndon_f
            .get(&factor_ids[0])
            .ok_or_else(|| HopfError::InternalInconsistency("missing Lyndon dual".into()))?
            .clone();
        let mut content: Vec<GeneratorId> =
            table.words[factor_ids[0] as usize].factors().to_vec();
        for i in 1..factor_ids.len() {
            let prefix: Vec<u32> = factor_ids[..=i].to_vec();
            content.extend(table.words[factor_ids[i] as usize].factors().iter().copied());
            if let Some(cached) = conv_cache.get(&prefix) {
                product = cached.clone();
                continue;
            }
            let target = table.block_of(&content)?;
            let f_i = lyndon_f
                .get(&factor_ids[i])
                .ok_or_else(|| HopfError::InternalInconsistency("missing Lyndon dual".into()))?;
            product =
                convolve_interned(&table, &product, f_i, target, &mut scratch_h, &mut scratch_f);
            conv_cache.insert(prefix, product.clone());
        }
        // normalization making {f_b} exactly dual to {g_b}: the pairing of
        // the raw product with g_b counts k! orderings times the stabilizer
        // of the Lyndon factor multiset
        let mut stab = BigInt::one();
        {
            let mut sorted = factor_ids.clone();
            sorted.sort_unstable();
            let mut i = 0;
            while i < sorted.len() {
                let mut j = i;
                while j < sorted.len() && sorted[j] == sorted[i] {
                    j += 1;
                }
                stab *= factorial((j - i) as u64);
                i = j;
            }
        }
        let norm = Rat::one() / (big(&factorial(k as u64)) * big(&stab));
        let mut coeffs = LinComb::zero();
        for (id, v) in &product {
            coeffs.add_term(table.words[*id as usize].clone(), v * &norm);
        }
        out.push(EigenVector { side: Side::Right, index: b.clone(), exponent: k, coeffs });
    }
    Ok(out)
}


pub fn right_eigenbasis(inst: &RescaledInstance, n: u32) -> Result<Vec<EigenVector>> {
    let basis = inst.enumerate_basis(n)?;
    match inst.kind() {
        AlgebraKind::Polynomial => right_eigenbasis_polynomial(inst, &basis),
        AlgebraKind::FreeCocommutative => right_eigenbasis_free(inst, &basis),
    }
}

/// Both bases, aligned with the canonical block order.
pub fn eigensystem(inst: &RescaledInstance, n: u32) -> Result<EigenSystem> {
    let basis = inst.enumerate_basis(n)?;
    let labels = basis.iter().map(|b| inst.basis_label(b)).collect();
    let left = left_eigenbasis(inst, n)?;
    let right = right_eigenbasis(inst, n)?;
    Ok(EigenSystem { instance: inst.name(), n, basis, labels, left, right })
}

impl EigenSystem {
    /// Dense matrix with g_b as rows, columns in basis order.
    pub fn left_matrix(&self) -> Matrix {
        let idx: BTreeMap<&BasisElt, usize> =
            self.basis.iter().enumerate().map(|(i, b)| (b, i)).collect();
        let mut m = Matrix::zero(self.basis.len(), self.basis.len());
        for (i, ev) in self.left.iter().enumerate() {
            for (b, v) in ev.coeffs.iter() {
                m.data[i][idx[b]] = v.clone();
            }
        }
        m
    }

    /// Dense matrix with f_b as columns, rows in basis order.
    pub fn right_matrix(&self) -> Matrix {
        let idx: BTreeMap<&BasisElt, usize> =
            self.basis.iter().enumerate().map(|(i, b)| (b, i)).collect();
        let mut m = Matrix::zero(self.basis.len(), self.basis.len());
        for (j, ev) in self.right.iter().enumerate() {
            for (b, v) in ev.coeffs.iter() {
                m.data[idx[b]][j] = v.clone();
            }
        }
        m
    }
}

/// Exact certificate: the matrix with the f_b as columns is the inverse of
/// the matrix with the g_b as rows.
pub fn duality_certificate(sys: &EigenSystem) -> bool {
    let g = sys.left_matrix();
    let f = sys.right_matrix();
    g.multiply(&f).is_identity()
}

// ---------------------------------------------------------------------------
// Exact eigen-equation verification

/// Integer-cleared copy of a^n·K for fast exact checks; falls back to
/// rational arithmetic when anything does not fit.
struct IntMatrix {
    rows: Vec<Vec<(u32, i64)>>,
}

fn int_matrix(k: &TransitionMatrix) -> Option<IntMatrix> {
    let a_n = BigInt::from(k.a as u64).pow(k.n);
    let mut rows = Vec::with_capacity(k.rows.len());
    for row in &k.rows {
        let mut irow = Vec::with_capacity(row.len());
        for (j, v) in row {
            let scaled = v * big(&a_n);
            if !scaled.denom().is_one() {
                return None;
            }
            let val = scaled.numer().to_i64()?;
            irow.push((*j as u32, val));
        }
        rows.push(irow);
    }
    Some(IntMatrix { rows })
}

/// Clears denominators: v = (1/d)·ints.
fn clear_denominators(coeffs: &[Rat]) -> Option<Vec<i128>> {
    let mut lcm = BigInt::one();
    for c in coeffs {
        lcm = lcm.lcm(c.denom());
    }
    let mut out = Vec::with_capacity(coeffs.len());
    for c in coeffs {
        let scaled = c * big(&lcm);
        debug_assert!(scaled.denom().is_one());
        out.push(scaled.numer().to_i128()?);
    }
    Some(out)
}

pub struct EigenCheckReport {
    pub checked: usize,
    pub failures: Vec<(Side, BasisElt)>,
}

impl EigenCheckReport {
    pub fn all_pass(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Verifies gK = a^{k-n} g for every left vector and Kf = a^{k-n} f for
/// every right vector, exactly. Works in integers cleared by a^n where
/// possible, exact rationals otherwise.
pub fn eigen_equation_check(k: &TransitionMatrix, sys: &EigenSystem) -> Result<EigenCheckReport> {
    if k.basis != sys.basis {
        return Err(HopfError::InvalidInput("eigen check needs matching bases".into()));
    }
    let dim = k.dim();
    let int_m = int_matrix(k);
    let mut failures = Vec::new();
    let mut checked = 0;

    let to_dense = |coeffs: &LinComb<BasisElt>| -> Vec<Rat> {
        let mut v = vec![Rat::zero(); dim];
        for (b, val) in coeffs.iter() {
            let i = k.index_of(b).expect("coefficient inside block");
            v[i] = val.clone();
        }
        v
    };

    for ev in &sys.left {
        checked += 1;
        let dense = to_dense(&ev.coeffs);
        let ok = match int_m
            .as_ref()
            .and_then(|m| check_left_int(m, &dense, k.a, ev.exponent))
        {
            Some(ok) => ok,
            None => check_left_rat(k, &dense, ev.exponent),
        };
        if !ok {
            failures.push((Side::Left, ev.index.clone()));
        }
    }
    for ev in &sys.right {
        checked += 1;
        let dense = to_dense(&ev.coeffs);
        let ok = match int_m
            .as_ref()
            .and_then(|m| check_right_int(m, &dense, k.a, ev.exponent))
        {
            Some(ok) => ok,
            None => check_right_rat(k, &dense, ev.exponent),
        };
        if !ok {
            failures.push((Side::Right, ev.index.clone()));
        }
    }
    Ok(EigenCheckReport { checked, failures })
}

fn check_left_int(m: &IntMatrix, v: &[Rat], a: u32, exponent: u32) -> Option<bool> {
    let ints = clear_denominators(v)?;
    let beta = (a as i128).checked_pow(exponent)?;
    let mut acc = vec![0i128; ints.len()];
    for (i, &vi) in ints.iter().enumerate() {
        if vi == 0 {
            continue;
        }
        for (j, mij) in &m.rows[i] {
            let term = vi.checked_mul(*mij as i128)?;
            acc[*j as usize] = acc[*j as usize].checked_add(term)?;
        }
    }
    for (j, &want) in ints.iter().enumerate() {
        if acc[j] != beta.checked_mul(want)? {
            return Some(false);
        }
    }
    Some(true)
}

fn check_right_int(m: &IntMatrix, v: &[Rat], a: u32, exponent: u32) -> Option<bool> {
    let ints = clear_denominators(v)?;
    let beta = (a as i128).checked_pow(exponent)?;
    for (i, row) in m.rows.iter().enumerate() {
        let mut acc: i128 = 0;
        for (j, mij) in row {
            let term = (*mij as i128).checked_mul(ints[*j as usize])?;
            acc = acc.checked_add(term)?;
        }
        if acc != beta.checked_mul(ints[i])? {
            return Some(false);
        }
    }
    Some(true)
}

fn check_left_rat(k: &TransitionMatrix, v: &[Rat], exponent: u32) -> bool {
    let beta = frac(1, (k.a as i64).pow(k.n - exponent));
    let mut acc = vec![Rat::zero(); v.len()];
    for (i, vi) in v.iter().enumerate() {
        if vi.is_zero() {
            continue;
        }
        for (j, kij) in &k.rows[i] {
            acc[*j] += vi * kij;
        }
    }
    acc.iter().zip(v.iter()).all(|(got, want)| *got == want * &beta)
}

fn check_right_rat(k: &TransitionMatrix, v: &[Rat], exponent: u32) -> bool {
    let beta = frac(1, (k.a as i64).pow(k.n - exponent));
    for (i, row) in k.rows.iter().enumerate() {
        let mut acc = Rat::zero();
        for (j, kij) in row {
            if !v[*j].is_zero() {
                acc += kij * &v[*j];
            }
        }
        if acc != &v[i] * &beta {
            return false;
        }
    }
    true
}

// ---------------------------------------------------------------------------
// Multiplicities

/// Eigenvalue multiplicities by exponent k: the chain eigenvalue a^{k-n} has
/// the returned count. Polynomial: generating function over generator
/// degrees. Free: over Lyndon-word degrees (or exact content-restricted
/// counting for decks).
pub fn multiplicities(inst: &RescaledInstance, n: u32) -> Result<BTreeMap<u32, BigInt>> {
    match inst.kind() {
        AlgebraKind::Polynomial => {
            let counts: Vec<(u32, u64)> = (1..=n)
                .map(|d| Ok((d, inst.generators(d)?.len() as u64)))
                .collect::<Result<_>>()?;
            Ok(crate::chain::eigenvalue_multiplicities(&counts, n))
        }
        AlgebraKind::FreeCocommutative => {
            if inst.content_graded() {
                let basis = inst.enumerate_basis(n)?;
                let content = basis
                    .first()
                    .ok_or_else(|| HopfError::InvalidInput("empty block".into()))?
                    .sorted_factors();
                deck_multiplicities(&content)
            } else {
                let mut counts = Vec::new();
                for d in 1..=n {
                    let words = hopf::enumerate_words(inst.inner, d)?;
                    let lyndon = words
                        .iter()
                        .filter(|w| lyndon::is_lyndon(w.factors()).unwrap_or(false))
                        .count() as u64;
                    counts.push((d, lyndon));
                }
                Ok(crate::chain::eigenvalue_multiplicities(&counts, n))
            }
        }
    }
}

/// Lower bound for the dimension of the 1/a^k eigenspace of a deck chain:
/// the number of Lyndon words of length k+1 over the deck's alphabet using
/// letter i at most ν_i times. Attained at k = 1; reported alongside the
/// true count from `deck_multiplicities` since tightness for k >= 2 is
/// unresolved.
pub fn lyndon_multiplicity_lower_bound(content: &[GeneratorId], k: u32) -> Result<BigInt> {
    let mut letters: Vec<GeneratorId> = content.to_vec();
    letters.sort_unstable();
    letters.dedup();
    let caps: Vec<usize> = letters
        .iter()
        .map(|l| content.iter().filter(|c| *c == l).count())
        .collect();
    let target_len = (k + 1) as usize;
    let mut count = BigInt::zero();
    let mut word: Vec<GeneratorId> = Vec::new();
    let mut used = vec![0usize; letters.len()];
    fn rec(
        letters: &[GeneratorId],
        caps: &[usize],
        used: &mut Vec<usize>,
        word: &mut Vec<GeneratorId>,
        target_len: usize,
        count: &mut BigInt,
    ) -> Result<()> {
        if word.len() == target_len {
            if lyndon::is_lyndon(word)? {
                *count += 1;
            }
            return Ok(());
        }
        for (i, &l) in letters.iter().enumerate() {
            if used[i] < caps[i] {
                used[i] += 1;
                word.push(l);
                rec(letters, caps, used, word, target_len, count)?;
                word.pop();
                used[i] -= 1;
            }
        }
        Ok(())
    }
    rec(&letters, &caps, &mut used, &mut word, target_len, &mut count)?;
    Ok(count)
}

/// Number of words with the given letter content and k Lyndon factors, for
/// every k: the multivariate multiplicity formula, evaluated by bounded
/// knapsack over the content lattice of Lyndon words.
pub fn deck_multiplicities(content: &[GeneratorId]) -> Result<BTreeMap<u32, BigInt>> {
    // distinct letters and target multiplicities
    let mut letters: Vec<GeneratorId> = content.to_vec();
    letters.sort_unstable();
    letters.dedup();
    let target: Vec<usize> = letters
        .iter()
        .map(|l| content.iter().filter(|c| *c == l).count())
        .collect();
    let n = content.len();
    // enumerate Lyndon words with content <= target (componentwise)
    let mut lyndon_words: Vec<Vec<usize>> = Vec::new(); // as letter-count vectors? need words
    let mut lyndon_contents: Vec<Vec<usize>> = Vec::new();
    {
        let mut stack: Vec<(Vec<GeneratorId>, Vec<usize>)> = vec![(Vec::new(), vec![0; letters.len()])];
        while let Some((word, counts)) = stack.pop() {
            if !word.is_empty() && lyndon::is_lyndon(&word)? {
                lyndon_words.push(counts.clone());
                lyndon_contents.push(counts.clone());
            }
            if word.len() < n {
                for (li, &l) in letters.iter().enumerate() {
                    if counts[li] < target[li] {
                        let mut w2 = word.clone();
                        w2.push(l);
                        let mut c2 = counts.clone();
                        c2[li] += 1;
                        stack.push((w2, c2));
                    }
                }
            }
        }
    }
    let _ = lyndon_words;
    // DP over the content lattice: index contents mixed-radix
    let radix: Vec<usize> = target.iter().map(|t| t + 1).collect();
    let cells: usize = radix.iter().product();
    let encode = |c: &[usize]| -> usize {
        let mut idx = 0;
        for (i, &v) in c.iter().enumerate() {
            idx = idx * radix[i] + v;
        }
        idx
    };
    let mut dp: Vec<Vec<BigInt>> = vec![vec![BigInt::zero(); n + 1]; cells];
    dp[0][0] = BigInt::one();
    for lc in &lyndon_contents {
        let mut next = dp.clone();
        // use this Lyndon word j >= 1 times
        for cell in 0..cells {
            // decode
            let mut rem = cell;
            let mut c = vec![0usize; radix.len()];
            for i in (0..radix.len()).rev() {
                c[i] = rem % radix[i];
                rem /= radix[i];
            }
            for k in 0..=n {
                if dp[cell][k].is_zero() {
                    continue;
                }
                let mut j = 1usize;
                loop {
                    let c2: Vec<usize> = c.iter().zip(lc.iter()).map(|(a, b)| a + b * j).collect();
                    if c2.iter().zip(target.iter()).any(|(a, t)| a > t) || k + j > n {
                        break;
                    }
                    let add = dp[cell][k].clone();
                    next[encode(&c2)][k + j] += add;
                    j += 1;
                }
            }
        }
        dp = next;
    }
    let full = encode(&target);
    let mut out = BTreeMap::new();
    for k in 0..=n {
        if !dp[full][k].is_zero() {
            out.insert(k as u32, dp[full][k].clone());
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Rock-breaking closed forms

/// Enumerates the ways to split μ's parts into sub-partitions {μ^j}, one per
/// part of λ, with μ^j ⊢ λ_j and ⊔ μ^j = μ. Calls `visit` with the list of
/// sub-partitions.
fn split_refinements(mu: &Partition, lambda: &Partition, visit: &mut impl FnMut(&[Partition])) {
    fn rec(
        remaining: &mut Vec<u32>,
        lambda: &[u32],
        j: usize,
        acc: &mut Vec<Partition>,
        visit: &mut impl FnMut(&[Partition]),
    ) {
        if j == lambda.len() {
            if remaining.iter().all(|&c| c == 0) {
                visit(acc);
            }
            return;
        }
        // choose a sub-multiset of the remaining parts summing to lambda[j];
        // enumerate canonically (weakly decreasing positions)
        fn choose(
            remaining: &mut Vec<u32>,
            start: usize,
            need: u32,
            chosen: &mut Vec<u32>,
            lambda: &[u32],
            j: usize,
            acc: &mut Vec<Partition>,
            visit: &mut impl FnMut(&[Partition]),
        ) {
            if need == 0 {
                acc.push(Partition::new(chosen.clone()));
                rec(remaining, lambda, j + 1, acc, visit);
                acc.pop();
                return;
            }
            let mut prev: Option<u32> = None;
            for i in start..remaining.len() {
                let p = remaining[i];
                if p == 0 || p > need || prev == Some(p) {
                    continue;
                }
                prev = Some(p);
                remaining[i] = 0;
                chosen.push(p);
                choose(remaining, i + 1, need - p, chosen, lambda, j, acc, visit);
                chosen.pop();
                remaining[i] = p;
            }
        }
        choose(remaining, 0, lambda[j], &mut Vec::new(), lambda, j, acc, visit);
    }
    let mut remaining = mu.0.clone();
    rec(&mut remaining, &lambda.0, 0, &mut Vec::new(), visit);
}

/// The μth right eigenfunction of the rock-breaking chain evaluated at λ:
///   f_μ(λ) = (1/Π_i μ_i!) Σ_{{μ^j}} Π_j λ_j! / Π_i a_i(μ^j)!
/// Nonnegative; nonzero iff μ refines λ; counts set-partition refinements.
pub fn rock_f(mu: &Partition, lambda: &Partition) -> Result<Rat> {
    if mu.n() != lambda.n() {
        return Err(HopfError::InvalidInput("partitions must have equal size".into()));
    }
    let mut total = Rat::zero();
    split_refinements(mu, lambda, &mut |subs| {
        let mut term = Rat::one();
        for (j, sub) in subs.iter().enumerate() {
            term *= big(&factorial(lambda.0[j] as u64)) / big(&sub.mult_factorial());
        }
        total += term;
    });
    let mut denom = BigInt::one();
    for &p in &mu.0 {
        denom *= factorial(p as u64);
    }
    Ok(total / big(&denom))
}

/// The λth left eigenfunction of the rock-breaking chain evaluated at μ:
///   g_λ(μ) = (Π_i λ_i!) (-1)^{l(μ)-l(λ)} / (Π_i μ_i!)
///            · Σ_{{μ^j}} Π_j (l(μ^j)-1)! / Π_i a_i(μ^j)!
/// Nonzero only when μ refines λ.
pub fn rock_g(lambda: &Partition, mu: &Partition) -> Result<Rat> {
    if mu.n() != lambda.n() {
        return Err(HopfError::InvalidInput("partitions must have equal size".into()));
    }
    let mut total = Rat::zero();
    split_refinements(mu, lambda, &mut |subs| {
        let mut term = Rat::one();
        for sub in subs {
            term *= big(&factorial(sub.len() as u64 - 1)) / big(&sub.mult_factorial());
        }
        total += term;
    });
    let mut num = BigInt::one();
    for &p in &lambda.0 {
        num *= factorial(p as u64);
    }
    let mut denom = BigInt::one();
    for &p in &mu.0 {
        denom *= factorial(p as u64);
    }
    let sign = if (mu.len() + lambda.len()) % 2 == 0 { rat(1) } else { rat(-1) };
    Ok(sign * big(&num) * total / big(&denom))
}
