//! Graded generators, basis elements (words and monomials), and exact linear
//! combinations: the shared vocabulary of every instance.

use crate::ratio::Rat;
use num_traits::Zero;
use std::collections::BTreeMap;
use std::fmt;

/// An instance-local generator: the atoms basis elements factor into.
///
/// The total order (degree first, then an instance-chosen key) refines the
/// ordering by degree, which is what the Lyndon machinery requires.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct GeneratorId {
    pub degree: u32,
    pub key: u128,
}

impl GeneratorId {
    pub fn new(degree: u32, key: u128) -> Self {
        GeneratorId { degree, key }
    }
}

/// Which freeness condition the ambient algebra satisfies.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum AlgebraKind {
    /// Commutative polynomial algebra; basis elements are monomials
    /// (multisets of generators kept weakly decreasing).
    Polynomial,
    /// Cocommutative free associative algebra; basis elements are words
    /// (order-sensitive sequences of generators).
    FreeCocommutative,
}

/// A basis element, stored as its unique factorization into generators.
///
/// For `Polynomial` instances the factor list is kept weakly decreasing, so
/// structural equality is multiset equality. For `FreeCocommutative`
/// instances the sequence order is meaningful.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct BasisElt {
    gens: Vec<GeneratorId>,
}

impl BasisElt {
    pub fn unit() -> Self {
        BasisElt { gens: Vec::new() }
    }

    pub fn generator(c: GeneratorId) -> Self {
        BasisElt { gens: vec![c] }
    }

    /// Builds from factors, canonicalizing per algebra kind.
    pub fn from_factors(kind: AlgebraKind, mut gens: Vec<GeneratorId>) -> Self {
        if kind == AlgebraKind::Polynomial {
            gens.sort_unstable_by(|a, b| b.cmp(a));
        }
        BasisElt { gens }
    }

    /// Word constructor: keeps the given order.
    pub fn word(gens: Vec<GeneratorId>) -> Self {
        BasisElt { gens }
    }

    pub fn factors(&self) -> &[GeneratorId] {
        &self.gens
    }

    /// Length l(b): the number of generators in the factorization.
    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.gens.iter().map(|g| g.degree).sum()
    }

    /// a_c(b): the number of factors equal to `c`.
    pub fn multiplicity(&self, c: GeneratorId) -> usize {
        self.gens.iter().filter(|&&g| g == c).count()
    }

    /// Product in the ambient algebra: multiset union or concatenation.
    pub fn mul(&self, other: &BasisElt, kind: AlgebraKind) -> BasisElt {
        let mut gens = self.gens.clone();
        gens.extend_from_slice(&other.gens);
        BasisElt::from_factors(kind, gens)
    }

    /// ∏_c a_c(b)! over distinct factors, as u64 (lengths are tiny here).
    pub fn factor_multiplicity_factorial(&self) -> num_bigint::BigInt {
        use crate::ratio::factorial;
        let mut acc = num_bigint::BigInt::from(1);
        let mut i = 0;
        let mut sorted = self.gens.clone();
        sorted.sort_unstable();
        while i < sorted.len() {
            let mut j = i;
            while j < sorted.len() && sorted[j] == sorted[i] {
                j += 1;
            }
            acc *= factorial((j - i) as u64);
            i = j;
        }
        acc
    }

    /// The multiset of factors as a sorted vector (for content comparisons).
    pub fn sorted_factors(&self) -> Vec<GeneratorId> {
        let mut v = self.gens.clone();
        v.sort_unstable();
        v
    }
}

/// A pure tensor of basis elements, the key type for iterated coproducts.
pub type Tensor = Vec<BasisElt>;

/// A finite linear combination with exact rational coefficients and no stored
/// zeros. `K` is a basis element, a tensor, or any ordered key.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LinComb<K: Ord + Clone> {
    terms: BTreeMap<K, Rat>,
}

impl<K: Ord + Clone> Default for LinComb<K> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<K: Ord + Clone> LinComb<K> {
    pub fn zero() -> Self {
        LinComb { terms: BTreeMap::new() }
    }

    pub fn singleton(key: K, coeff: Rat) -> Self {
        let mut lc = Self::zero();
        lc.add_term(key, coeff);
        lc
    }

    pub fn add_term(&mut self, key: K, coeff: Rat) {
        use std::collections::btree_map::Entry;
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(key) {
            Entry::Vacant(e) => {
                e.insert(coeff);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += coeff;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add_assign(&mut self, other: &LinComb<K>) {
        for (k, v) in other.iter() {
            self.add_term(k.clone(), v.clone());
        }
    }

    pub fn scale(&self, s: &Rat) -> LinComb<K> {
        if s.is_zero() {
            return Self::zero();
        }
        LinComb {
            terms: self.terms.iter().map(|(k, v)| (k.clone(), v * s)).collect(),
        }
    }

    pub fn coeff(&self, key: &K) -> Rat {
        self.terms.get(key).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&K, &Rat)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn keys(&self) -> impl Iterator<Item = &K> {
        self.terms.keys()
    }

    pub fn map_keys<K2: Ord + Clone>(&self, f: impl Fn(&K) -> K2) -> LinComb<K2> {
        let mut out = LinComb::zero();
        for (k, v) in self.iter() {
            out.add_term(f(k), v.clone());
        }
        out
    }

    /// Sum of all coefficients.
    pub fn total(&self) -> Rat {
        let mut acc = Rat::zero();
        for v in self.terms.values() {
            acc += v;
        }
        acc
    }
}

impl LinComb<BasisElt> {
    /// Algebra product of two combinations.
    pub fn mul(&self, other: &LinComb<BasisElt>, kind: AlgebraKind) -> LinComb<BasisElt> {
        let mut out = LinComb::zero();
        for (a, ca) in self.iter() {
            for (b, cb) in other.iter() {
                out.add_term(a.mul(b, kind), ca * cb);
            }
        }
        out
    }

    /// Commutator [x, y] = xy - yx (free case only).
    pub fn commutator(&self, other: &LinComb<BasisElt>) -> LinComb<BasisElt> {
        let kind = AlgebraKind::FreeCocommutative;
        let mut out = self.mul(other, kind);
        let yx = other.mul(self, kind);
        for (k, v) in yx.iter() {
            out.add_term(k.clone(), -v.clone());
        }
        out
    }
}

/// A partition: weakly decreasing positive parts.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Partition(pub Vec<u32>);

impl Partition {
    pub fn new(mut parts: Vec<u32>) -> Self {
        parts.retain(|&p| p > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition(parts)
    }

    pub fn n(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// a_i: how many parts equal i.
    pub fn mult_of(&self, i: u32) -> usize {
        self.0.iter().filter(|&&p| p == i).count()
    }

    /// ∏ a_i! over distinct part sizes.
    pub fn mult_factorial(&self) -> num_bigint::BigInt {
        use crate::ratio::factorial;
        let mut acc = num_bigint::BigInt::from(1);
        let mut i = 0;
        while i < self.0.len() {
            let mut j = i;
            while j < self.0.len() && self.0[j] == self.0[i] {
                j += 1;
            }
            acc *= factorial((j - i) as u64);
            i = j;
        }
        acc
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.0.iter().map(|p| p.to_string()).collect();
        write!(f, "{}", parts.join("+"))
    }
}

/// All partitions of n, in no particular order.
pub fn partitions_of(n: u32) -> Vec<Partition> {
    fn rec(n: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
        if n == 0 {
            out.push(Partition(cur.clone()));
            return;
        }
        let hi = max.min(n);
        for p in (1..=hi).rev() {
            cur.push(p);
            rec(n - p, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, n, &mut Vec::new(), &mut out);
    out
}

/// All compositions of n with positive parts.
pub fn compositions_of(n: u32) -> Vec<Vec<u32>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for first in 1..=n {
        for mut rest in compositions_of(n - first) {
            let mut c = vec![first];
            c.append(&mut rest);
            out.push(c);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratio::rat;

    #[test]
    fn monomials_canonicalize() {
        let c1 = GeneratorId::new(1, 0);
        let c2 = GeneratorId::new(2, 0);
        let m = BasisElt::from_factors(AlgebraKind::Polynomial, vec![c1, c2, c1]);
        assert_eq!(m.factors(), &[c2, c1, c1]);
        assert_eq!(m.degree(), 4);
        assert_eq!(m.len(), 3);
        assert_eq!(m.multiplicity(c1), 2);
    }

    #[test]
    fn words_keep_order() {
        let x = GeneratorId::new(1, 1);
        let y = GeneratorId::new(1, 2);
        let w1 = BasisElt::word(vec![x, y]);
        let w2 = BasisElt::word(vec![y, x]);
        assert_ne!(w1, w2);
        assert_eq!(w1.mul(&w2, AlgebraKind::FreeCocommutative).factors(), &[x, y, y, x]);
    }

    #[test]
    fn lincomb_drops_zeros() {
        let x = GeneratorId::new(1, 1);
        let b = BasisElt::generator(x);
        let mut lc = LinComb::singleton(b.clone(), rat(2));
        lc.add_term(b.clone(), rat(-2));
        assert!(lc.is_zero());
    }

    #[test]
    fn partition_counts() {
        assert_eq!(partitions_of(4).len(), 5);
        assert_eq!(partitions_of(8).len(), 22);
        assert_eq!(compositions_of(4).len(), 8);
        let p = Partition::new(vec![1, 2, 2, 1]);
        assert_eq!(p.0, vec![2, 2, 1, 1]);
        assert_eq!(p.mult_factorial(), num_bigint::BigInt::from(4));
    }
}
