//! Symmetric functions in the elementary basis (the rock-breaking chain) and
//! the quotient Λ/e_1 on which no Markov rescaling exists.

use crate::error::Result;
use crate::gens::{AlgebraKind, BasisElt, GeneratorId, LinComb, Partition};
use crate::hopf::{enumerate_monomials, HopfInstance};
use crate::ratio::rat;

fn e_gen(i: u32) -> GeneratorId {
    GeneratorId::new(i, 0)
}

/// Λ with basis {e_λ}; generators e_1, e_2, ... up to the working degree,
/// Δ(e_i) = Σ_j e_j ⊗ e_{i-j}. The raw basis; rescaling to ê_i = i!·e_i is
/// carried out by `chain::rescale`.
pub struct SymFnInstance {
    max_degree: u32,
}

impl SymFnInstance {
    pub fn new(max_degree: u32) -> Self {
        SymFnInstance { max_degree }
    }

    pub fn partition_to_elt(lambda: &Partition) -> BasisElt {
        BasisElt::from_factors(
            AlgebraKind::Polynomial,
            lambda.0.iter().map(|&p| e_gen(p)).collect(),
        )
    }

    pub fn elt_to_partition(b: &BasisElt) -> Partition {
        Partition::new(b.factors().iter().map(|c| c.degree).collect())
    }
}

impl HopfInstance for SymFnInstance {
    fn kind(&self) -> AlgebraKind {
        AlgebraKind::Polynomial
    }

    fn name(&self) -> String {
        "sym".into()
    }

    fn working_degree(&self) -> u32 {
        self.max_degree
    }

    fn generators(&self, degree: u32) -> Result<Vec<GeneratorId>> {
        self.check_degree(degree)?;
        if degree >= 1 {
            Ok(vec![e_gen(degree)])
        } else {
            Ok(vec![])
        }
    }

    fn coproduct_generator(&self, c: GeneratorId) -> Result<LinComb<(BasisElt, BasisElt)>> {
        let i = c.degree;
        let mut out = LinComb::zero();
        for j in 0..=i {
            let left = if j == 0 { BasisElt::unit() } else { BasisElt::generator(e_gen(j)) };
            let right = if j == i { BasisElt::unit() } else { BasisElt::generator(e_gen(i - j)) };
            out.add_term((left, right), rat(1));
        }
        Ok(out)
    }

    fn generator_label(&self, c: GeneratorId) -> String {
        format!("e{}", c.degree)
    }

    fn enumerate_basis(&self, degree: u32) -> Result<Vec<BasisElt>> {
        self.check_degree(degree)?;
        enumerate_monomials(self, degree)
    }

    fn basis_label(&self, b: &BasisElt) -> String {
        Self::elt_to_partition(b).to_string()
    }
}

/// Λ̄ = Λ/e_1: generators e_2, e_3, ... with
/// Δ(e_n) = 1 ⊗ e_n + Σ_{j=2}^{n-2} e_j ⊗ e_{n-j} + e_n ⊗ 1.
/// Both e_2 and e_3 are primitive of degree > 1, so the rescaling

/// algorithm must fail on this instance.
pub struct QuotientSymFnInstance {
    max_degree: u32,
}

impl QuotientSymFnInstance {
    pub fn new(max_degree: u32) -> Self {
        QuotientSymFnInstance { max_degree }
    }
}

impl HopfInstance for QuotientSymFnInstance {
    fn kind(&self) -> AlgebraKind {
        AlgebraKind::Polynomial
    }

    fn name(&self) -> String {
        "quotient-sym".into()
    }

    fn working_degree(&self) -> u32 {
        self.max_degree
    }

    fn generators(&self, degree: u32) -> Result<Vec<GeneratorId>> {
        self.check_degree(degree)?;
        if degree >= 2 {
            Ok(vec![e_gen(degree)])
        } else {
            Ok(vec![])
        }
    }

    fn coproduct_generator(&self, c: GeneratorId) -> Result<LinComb<(BasisElt, BasisElt)>> {
        let n = c.degree;
        let mut out = LinComb::zero();
        out.add_term((BasisElt::unit(), BasisElt::generator(e_gen(n))), rat(1));
        out.add_term((BasisElt::generator(e_gen(n)), BasisElt::unit()), rat(1));
        for j in 2..=n.saturating_sub(2) {
            out.add_term(
                (BasisElt::generator(e_gen(j)), BasisElt::generator(e_gen(n - j))),
                rat(1),
            );
        }
        Ok(out)
    }

    fn generator_label(&self, c: GeneratorId) -> String {
        format!("e{}", c.degree)
    }

    fn enumerate_basis(&self, degree: u32) -> Result<Vec<BasisElt>> {
        self.check_degree(degree)?;
        enumerate_monomials(self, degree)
    }
}
