//! Lyndon words over the ordered generator alphabet: factorization, standard
//! bracketing, and the symmetrized product `sym` whose expansions are the
//! left-eigenvector skeletons in the free case.

use crate::error::{HopfError, Result};
use crate::gens::{BasisElt, GeneratorId, LinComb};
use crate::ratio::rat;

/// True iff `w` is strictly smaller than every proper cyclic rotation.
/// Single letters are Lyndon; the empty word is invalid input.
pub fn is_lyndon(w: &[GeneratorId]) -> Result<bool> {
    if w.is_empty() {
        return Err(HopfError::InvalidInput("empty word has no Lyndon status".into()));
    }
    let n = w.len();
    for r in 1..n {
        let rotation = w[r..].iter().chain(w[..r].iter());
        if !(w.iter().lt(rotation)) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Duval's algorithm: the unique factorization w = l_1 l_2 ... l_k with each
/// l_i Lyndon and l_1 >= l_2 >= ... >= l_k lexicographically.
pub fn lyndon_factorize(w: &[GeneratorId]) -> Result<Vec<Vec<GeneratorId>>> {
    if w.is_empty() {
        return Err(HopfError::InvalidInput("cannot factorize the empty word".into()));
    }
    let n = w.len();
    let mut out = Vec::new();
    let mut i = 0;
    while i < n {
        let mut j = i + 1;
        let mut k = i;
        while j < n && w[k] <= w[j] {
            if w[k] < w[j] {
                k = i;
            } else {
                k += 1;
            }
            j += 1;
        }
        let period = j - k;
        while i <= k {
            out.push(w[i..i + period].to_vec());
            i += period;
        }
    }
    Ok(out)
}

/// Standard factorization of a Lyndon word of length >= 2: l = l_1 l_2 with
/// l_2 the longest proper Lyndon suffix. A single letter is returned as-is by
/// callers branching on length.
pub fn standard_factorization(l: &[GeneratorId]) -> Result<(Vec<GeneratorId>, Vec<GeneratorId>)> {
    if l.len() < 2 {
        return Err(HopfError::InvalidInput(
            "standard factorization needs length >= 2".into(),
        ));
    }
    if !is_lyndon(l)? {
        return Err(HopfError::InvalidInput("standard factorization of a non-Lyndon word".into()));
    }
    for start in 1..l.len() {
        if is_lyndon(&l[start..])? {
            return Ok((l[..start].to_vec(), l[start..].to_vec()));
        }
    }
    unreachable!("the final letter is always a Lyndon suffix")
}

/// Standard bracketing λ(l), expanded into the word basis: λ(letter) = letter
/// and λ(l) = [λ(l_1), λ(l_2)] on the standard factorization.
pub fn standard_bracketing(l: &[GeneratorId]) -> Result<LinComb<BasisElt>> {
    if !is_lyndon(l)? {
        return Err(HopfError::InvalidInput("standard bracketing of a non-Lyndon word".into()));
    }
    if l.len() == 1 {
        return Ok(LinComb::singleton(BasisElt::word(l.to_vec()), rat(1)));
    }
    let (l1, l2) = standard_factorization(l)?;
    let a = standard_bracketing(&l1)?;
    let b = standard_bracketing(&l2)?;
    Ok(a.commutator(&b))
}

/// sym(w) = Σ_{σ ∈ S_k} λ(l_{σ(1)}) ... λ(l_{σ(k)}) over the Lyndon factors.
pub fn sym(w: &[GeneratorId]) -> Result<LinComb<BasisElt>> {
    let factors = lyndon_factorize(w)?;
    let brackets: Vec<LinComb<BasisElt>> = factors
        .iter()
        .map(|l| standard_bracketing(l))
        .collect::<Result<_>>()?;
    Ok(symmetrized_product(&brackets))
}

/// Σ over all orderings of the given combinations of their products
/// (in the free algebra).
pub fn symmetrized_product(parts: &[LinComb<BasisElt>]) -> LinComb<BasisElt> {
    let k = parts.len();
    let mut order: Vec<usize> = (0..k).collect();
    let mut out = LinComb::zero();
    permute(&mut order, 0, &mut |perm| {
        let mut acc = LinComb::singleton(BasisElt::unit(), rat(1));
        for &i in perm.iter() {
            acc = acc.mul(&parts[i], crate::gens::AlgebraKind::FreeCocommutative);
        }
        out.add_assign(&acc);
    });
    out
}

fn permute(idx: &mut Vec<usize>, start: usize, f: &mut impl FnMut(&[usize])) {
    if start == idx.len() {
        f(idx);
        return;
    }
    for i in start..idx.len() {
        idx.swap(start, i);
        permute(idx, start + 1, f);
        idx.swap(start, i);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn letters(s: &str) -> Vec<GeneratorId> {
        s.bytes().map(|b| GeneratorId::new(1, (b - b'0') as u128)).collect()
    }

    fn word(s: &str) -> BasisElt {
        BasisElt::word(letters(s))
    }

    #[test]
    fn lyndon_predicate_matches_examples() {
        assert!(is_lyndon(&letters("1122")).unwrap());
        assert!(!is_lyndon(&letters("21")).unwrap());
        assert!(!is_lyndon(&letters("1212")).unwrap());
        assert!(is_lyndon(&letters("3")).unwrap());
        assert!(is_lyndon(&letters("13245")).unwrap());
        assert!(is_lyndon(&letters("142")).unwrap());
        assert!(is_lyndon(&letters("35")).unwrap());
        assert!(is_lyndon(&letters("245")).unwrap());
        assert!(is_lyndon(&letters("13")).unwrap());
        assert!(is_lyndon(&letters("122")).unwrap());
        assert!(is_lyndon(&letters("12")).unwrap());
        assert!(is_lyndon(&letters("2")).unwrap());
        assert!(is_lyndon(&letters("1")).unwrap());
        assert!(is_lyndon(&letters("11")).is_ok());
        assert!(!is_lyndon(&letters("11")).unwrap());
        assert!(is_lyndon(&[]).is_err());
    }

    #[test]
    fn factorization_matches_examples() {
        let f = lyndon_factorize(&letters("35142")).unwrap();
        assert_eq!(f, vec![letters("35"), letters("142")]);
        assert_eq!(lyndon_factorize(&letters("13245")).unwrap(), vec![letters("13245")]);
        assert_eq!(lyndon_factorize(&letters("2")).unwrap(), vec![letters("2")]);
        // concatenation restores the input and all factors are Lyndon
        for s in ["321", "1122", "212", "331212", "111", "2121"] {
            let w = letters(s);
            let fs = lyndon_factorize(&w).unwrap();
            let cat: Vec<GeneratorId> = fs.iter().flatten().copied().collect();
            assert_eq!(cat, w);
            for f in &fs {
                assert!(is_lyndon(f).unwrap());
            }
            for pair in fs.windows(2) {
                assert!(pair[0] >= pair[1]);
            }
        }
    }

    #[test]
    fn standard_factorization_matches_examples() {
        let (a, b) = standard_factorization(&letters("13245")).unwrap();
        assert_eq!((a, b), (letters("13"), letters("245")));
        let (a, b) = standard_factorization(&letters("1122")).unwrap();
        assert_eq!((a, b), (letters("1"), letters("122")));
        let (a, b) = standard_factorization(&letters("12")).unwrap();
        assert_eq!((a, b), (letters("1"), letters("2")));
    }

    #[test]
    fn bracketing_matches_displayed_expansions() {
        // λ(1122) = 1122 - 2*1212 + 2*2121 - 2211
        let lam = standard_bracketing(&letters("1122")).unwrap();
        assert_eq!(lam.coeff(&word("1122")), rat(1));
        assert_eq!(lam.coeff(&word("1212")), rat(-2));
        assert_eq!(lam.coeff(&word("2121")), rat(2));
        assert_eq!(lam.coeff(&word("2211")), rat(-1));
        assert_eq!(lam.len(), 4);

        let lam = standard_bracketing(&letters("13245")).unwrap();
        assert_eq!(lam.coeff(&word("25413")), rat(1));
        assert_eq!(lam.coeff(&word("21345")), rat(0));
        assert_eq!(lam.coeff(&word("13245")), rat(1));

        let lam = standard_bracketing(&letters("12")).unwrap();
        assert_eq!(lam.coeff(&word("12")), rat(1));
        assert_eq!(lam.coeff(&word("21")), rat(-1));

        // 1221 has coefficient 0 in λ(1122)
        assert_eq!(standard_bracketing(&letters("1122")).unwrap().coeff(&word("1221")), rat(0));
    }

    #[test]
    fn sym_matches_examples() {
        // one Lyndon factor: sym = λ
        let s = sym(&letters("13245")).unwrap();
        assert_eq!(s, standard_bracketing(&letters("13245")).unwrap());
        // sym(21) = 21 + 12
        let s = sym(&letters("21")).unwrap();
        assert_eq!(s.coeff(&word("21")), rat(1));
        assert_eq!(s.coeff(&word("12")), rat(1));
        assert_eq!(s.len(), 2);
        // coefficient of 14253 in sym(35142) is -1
        let s = sym(&letters("35142")).unwrap();
        assert_eq!(s.coeff(&word("14253")), rat(-1));
        // every key is an anagram of the input
        let mut target = letters("35142");
        target.sort_unstable();
        for k in s.keys() {
            assert_eq!(k.sorted_factors(), target);
        }
    }

    #[test]
    fn bracketing_keys_are_anagrams_with_unit_leading_term() {
        // all Lyndon words of length <= 6 over alphabets of size <= 4
        for alpha in 1..=4u128 {
            let mut words: Vec<Vec<GeneratorId>> = vec![Vec::new()];
            for len in 1..=6usize {
                let mut next = Vec::new();
                for w in &words {
                    if w.len() == len - 1 {
                        for a in 1..=alpha {
                            let mut w2 = w.clone();
                            w2.push(GeneratorId::new(1, a));
                            next.push(w2);
                        }
                    }
                }
                for w in &next {
                    if is_lyndon(w).unwrap() {
                        let lam = standard_bracketing(w).unwrap();
                        assert_eq!(lam.coeff(&BasisElt::word(w.clone())), rat(1));
                        let mut sorted = w.clone();
                        sorted.sort_unstable();
                        for k in lam.keys() {
                            assert_eq!(k.sorted_factors(), sorted);
                        }
                    }
                }
                words = next;
            }
        }
    }

    #[test]
    fn factorization_is_unique_by_exhaustive_split_search() {
        // over a 3-letter alphabet, words of length <= 8 by sampling the full
        // cube at length 8 would be 6561 words; keep lengths 1..=8 over 2
        // letters and 1..=5 over 3 letters for speed.
        fn all_words(alpha: u128, len: usize) -> Vec<Vec<GeneratorId>> {
            if len == 0 {
                return vec![Vec::new()];
            }
            let mut out = Vec::new();
            for w in all_words(alpha, len - 1) {
                for a in 1..=alpha {
                    let mut w2 = w.clone();
                    w2.push(GeneratorId::new(1, a));
                    out.push(w2);
                }
            }
            out
        }
        fn count_factorizations(w: &[GeneratorId], min_lex: Option<&[GeneratorId]>) -> usize {
            // counts splits into weakly decreasing Lyndon factors
            let mut count = 0;
            for cut in 1..=w.len() {
                let head = &w[..cut];
                if !is_lyndon(head).unwrap() {
                    continue;
                }
                if let Some(prev) = min_lex {
                    if head > prev {
                        continue;
                    }
                }
                if cut == w.len() {
                    count += 1;
                } else {
                    count += count_factorizations(&w[cut..], Some(head));
                }
            }
            count
        }
        for (alpha, maxlen) in [(2u128, 8usize), (3, 5)] {
            for len in 1..=maxlen {
                for w in all_words(alpha, len) {
                    assert_eq!(count_factorizations(&w, None), 1, "word {:?}", w);
                    let _ = lyndon_factorize(&w).unwrap();
                }
            }
        }
    }
}
