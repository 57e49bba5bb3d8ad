//! The free associative algebra on primitive degree-one letters, graded by
//! deck composition: the inverse riffle-shuffle chain.

use crate::error::{HopfError, Result};
use crate::gens::{AlgebraKind, BasisElt, GeneratorId, LinComb};
use crate::hopf::{chain_order, HopfInstance};
use crate::ratio::rat;

pub fn letter(value: u32) -> GeneratorId {
    GeneratorId::new(1, value as u128)
}

/// A deck of composition ν: ν_i cards of value i. The chain state space is
/// the multigraded block H_ν, the multiset words with letter counts ν.
pub struct DeckInstance {
    nu: Vec<u32>,
}

impl DeckInstance {
    pub fn new(nu: Vec<u32>) -> Result<Self> {
        if nu.is_empty() || nu.iter().all(|&c| c == 0) {
            return Err(HopfError::InvalidInput("deck composition must be nonempty".into()));
        }
        Ok(DeckInstance { nu })
    }

    /// Deck with n distinct cards (ν = 1^n).
    pub fn distinct(n: u32) -> Result<Self> {
        Self::new(vec![1; n as usize])
    }

    pub fn nu(&self) -> &[u32] {
        &self.nu
    }

    pub fn n(&self) -> u32 {
        self.nu.iter().sum()
    }

    pub fn word_from_values(values: &[u32]) -> BasisElt {
        BasisElt::word(values.iter().map(|&v| letter(v)).collect())
    }

    pub fn values_of(b: &BasisElt) -> Vec<u32> {
        b.factors().iter().map(|c| c.key as u32).collect()
    }

    /// The sorted deck (values ascending): the identity arrangement.
    pub fn sorted_word(&self) -> BasisElt {
        let mut values = Vec::new();
        for (i, &count) in self.nu.iter().enumerate() {
            for _ in 0..count {
                values.push(i as u32 + 1);
            }
        }
        Self::word_from_values(&values)
    }
}

/// All words with the given letter content, in chain order.
pub fn words_with_content(content: &[GeneratorId]) -> Vec<BasisElt> {
    let mut sorted = content.to_vec();
    sorted.sort_unstable();
    let mut out = Vec::new();
    let mut current: Vec<GeneratorId> = Vec::new();
    let mut used = vec![false; sorted.len()];
    fn rec(
        sorted: &[GeneratorId],
        used: &mut Vec<bool>,
        current: &mut Vec<GeneratorId>,
        out: &mut Vec<BasisElt>,
    ) {
        if current.len() == sorted.len() {
            out.push(BasisElt::word(current.clone()));
            return;
        }
        let mut prev: Option<GeneratorId> = None;
        for i in 0..sorted.len() {
            if used[i] || prev == Some(sorted[i]) {
                continue;
            }
            prev = Some(sorted[i]);
            used[i] = true;
            current.push(sorted[i]);
            rec(sorted, used, current, out);
            current.pop();
            used[i] = false;
        }
    }
    rec(&sorted, &mut used, &mut current, &mut out);
    out.sort_by(chain_order);
    out
}

impl HopfInstance for DeckInstance {
    fn kind(&self) -> AlgebraKind {
        AlgebraKind::FreeCocommutative
    }

    fn name(&self) -> String {
        let parts: Vec<String> = self.nu.iter().map(|c| c.to_string()).collect();
        format!("deck[{}]", parts.join(","))
    }

    fn working_degree(&self) -> u32 {
        self.n()
    }

    fn generators(&self, degree: u32) -> Result<Vec<GeneratorId>> {
        self.check_degree(degree)?;
        if degree == 1 {
            Ok((1..=self.nu.len() as u32).filter(|&v| self.nu[(v - 1) as usize] > 0).map(letter).collect())
        } else {
            Ok(vec![])
        }
    }

    fn coproduct_generator(&self, c: GeneratorId) -> Result<LinComb<(BasisElt, BasisElt)>> {
        let mut out = LinComb::zero();
        out.add_term((BasisElt::unit(), BasisElt::generator(c)), rat(1));
        out.add_term((BasisElt::generator(c), BasisElt::unit()), rat(1));
        Ok(out)
    }

    fn generator_label(&self, c: GeneratorId) -> String {
        format!("{}", c.key)
    }

    /// H_ν: the multiset words with letter counts ν (only defined in the top
    /// degree n = |ν|, where the chain lives).
    fn enumerate_basis(&self, degree: u32) -> Result<Vec<BasisElt>> {
        if degree != self.n() {
            return Err(HopfError::InvalidInput(format!(
                "deck basis lives in degree {} (asked for {})",
                self.n(),
                degree
            )));
        }
        Ok(words_with_content(self.sorted_word().factors()))
    }

    fn content_graded(&self) -> bool {
        true
    }

    fn basis_label(&self, b: &BasisElt) -> String {
        let values = Self::values_of(b);
        if self.nu.len() <= 9 {
            values.iter().map(|v| v.to_string()).collect()
        } else {
            values.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(".")
        }
    }
}
