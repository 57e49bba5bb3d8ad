//! The Hopf-algebra contract and the generic maps built on it: products,
//! iterated and reduced coproducts, Hopf powers Ψ^a, and Eulerian idempotents.

use crate::error::{HopfError, Result};
use crate::gens::{AlgebraKind, BasisElt, GeneratorId, LinComb, Tensor};
use crate::ratio::{frac, rat, Rat};
use num_traits::{One, Signed};
use std::collections::BTreeMap;

/// A pluggable graded connected Hopf algebra with a distinguished basis of
/// monomials (polynomial case) or words (free cocommutative case).
///
/// Implementations are immutable after construction; all methods are pure.
pub trait HopfInstance: Send + Sync {
    fn kind(&self) -> AlgebraKind;
    fn name(&self) -> String;

    /// Degrees above this are rejected rather than lazily extended.
    fn working_degree(&self) -> u32;

    /// The degree-d generators, sorted by canonical key.
    fn generators(&self, degree: u32) -> Result<Vec<GeneratorId>>;

    /// Δ(c) of a generator, as a combination of pairs. Coefficients in the
    /// raw basis are the structure constants η_c^{xy}.
    fn coproduct_generator(&self, c: GeneratorId) -> Result<LinComb<(BasisElt, BasisElt)>>;

    fn generator_label(&self, c: GeneratorId) -> String;

    /// The degree-n basis (for deck instances: the words of the instance's
    /// card content, which all live in degree n = |ν|).
    fn enumerate_basis(&self, degree: u32) -> Result<Vec<BasisElt>>;

    /// True when every generator has degree one and is primitive, so Ψ^a
    /// preserves the fine multigrading by generator content (deck chains).
    fn content_graded(&self) -> bool {
        false
    }

    fn basis_label(&self, b: &BasisElt) -> String {
        if b.is_empty() {
            return "1".into();
        }
        b.factors()
            .iter()
            .map(|&c| self.generator_label(c))
            .collect::<Vec<_>>()
            .join("*")
    }

    fn check_degree(&self, degree: u32) -> Result<()> {
        if degree > self.working_degree() {
            return Err(HopfError::AboveWorkingDegree {
                requested: degree,
                working: self.working_degree(),
            });
        }
        Ok(())
    }
}

/// The unique factorization of a basis element into generators.
pub fn factorize(b: &BasisElt) -> Vec<GeneratorId> {
    b.factors().to_vec()
}

/// Product of basis elements (degree and length add).
pub fn product(inst: &dyn HopfInstance, b1: &BasisElt, b2: &BasisElt) -> BasisElt {
    b1.mul(b2, inst.kind())
}

/// Δ(b) computed multiplicatively from the generator coproducts.
pub fn coproduct(inst: &dyn HopfInstance, b: &BasisElt) -> Result<LinComb<(BasisElt, BasisElt)>> {
    let kind = inst.kind();
    let mut acc = LinComb::singleton((BasisElt::unit(), BasisElt::unit()), rat(1));
    for &c in b.factors() {
        let dc = inst.coproduct_generator(c)?;
        let mut next = LinComb::zero();
        for ((x1, y1), v1) in acc.iter() {
            for ((x2, y2), v2) in dc.iter() {
                next.add_term((x1.mul(x2, kind), y1.mul(y2, kind)), v1 * v2);
            }
        }
        acc = next;
    }
    Ok(acc)
}

/// Δ^\[a\](c) for a single generator, by Δ^\[a\] = (ι ⊗ … ⊗ ι ⊗ Δ) Δ^\[a-1\].
fn coproduct_iterated_generator(
    inst: &dyn HopfInstance,
    c: GeneratorId,
    a: u32,
) -> Result<LinComb<Tensor>> {
    if a == 1 {
        return Ok(LinComb::singleton(vec![BasisElt::generator(c)], rat(1)));
    }
    let prev = coproduct_iterated_generator(inst, c, a - 1)?;
    let mut out = LinComb::zero();
    for (tuple, v) in prev.iter() {
        let last = tuple.last().expect("tuples are nonempty");
        let split = coproduct(inst, last)?;
        for ((x, y), w) in split.iter() {
            let mut t = tuple[..tuple.len() - 1].to_vec();
            t.push(x.clone());
            t.push(y.clone());
            out.add_term(t, v * w);
        }
    }
    Ok(out)
}

/// Δ^\[a\](b), computed generator-by-generator and multiplied componentwise.
pub fn coproduct_iterated(
    inst: &dyn HopfInstance,
    b: &BasisElt,
    a: u32,
) -> Result<LinComb<Tensor>> {
    if a < 1 {
        return Err(HopfError::InvalidInput("iterated coproduct needs a >= 1".into()));
    }
    inst.check_degree(b.degree())?;
    let kind = inst.kind();
    let unit_tuple: Tensor = vec![BasisElt::unit(); a as usize];
    let mut acc = LinComb::singleton(unit_tuple, rat(1));
    for &c in b.factors() {
        let dc = coproduct_iterated_generator(inst, c, a)?;
        let mut next = LinComb::zero();
        for (t1, v1) in acc.iter() {
            for (t2, v2) in dc.iter() {
                let t: Tensor = t1.iter().zip(t2.iter()).map(|(x, y)| x.mul(y, kind)).collect();
                next.add_term(t, v1 * v2);
            }
        }
        acc = next;
    }
    Ok(acc)
}

/// Δ̄(b): Δ(b) restricted to pairs with both components of positive degree.
pub fn reduced_coproduct(
    inst: &dyn HopfInstance,
    b: &BasisElt,
) -> Result<LinComb<(BasisElt, BasisElt)>> {
    let full = coproduct(inst, b)?;
    let mut out = LinComb::zero();
    for ((x, y), v) in full.iter() {
        if x.degree() > 0 && y.degree() > 0 {
            out.add_term((x.clone(), y.clone()), v.clone());
        }
    }
    Ok(out)
}

/// Δ̄^\[a\](b): the terms of Δ^\[a\](b) with every component of positive degree,
/// built by Δ̄^\[a\] = (ι ⊗ … ⊗ ι ⊗ Δ̄) Δ̄^\[a-1\] so intermediate sums stay small.
/// Empty whenever a > deg(b).
pub fn reduced_coproduct_iterated(
    inst: &dyn HopfInstance,
    b: &BasisElt,
    a: u32,
) -> Result<LinComb<Tensor>> {
    if a < 1 {
        return Err(HopfError::InvalidInput("reduced iterated coproduct needs a >= 1".into()));
    }
    inst.check_degree(b.degree())?;
    if b.degree() == 0 {
        return Ok(LinComb::zero());
    }
    let mut acc: LinComb<Tensor> = LinComb::singleton(vec![b.clone()], rat(1));
    for _ in 1..a {
        let mut next = LinComb::zero();
        for (tuple, v) in acc.iter() {
            let last = tuple.last().expect("tuples are nonempty");
            let split = reduced_coproduct(inst, last)?;
            for ((x, y), w) in split.iter() {
                let mut t = tuple[..tuple.len() - 1].to_vec();
                t.push(x.clone());
                t.push(y.clone());
                next.add_term(t, v * w);
            }
        }
        acc = next;
    }
    Ok(acc)
}

/// Multiplies out a tensor combination left-to-right: m^\[a\].
pub fn multiply_out(inst: &dyn HopfInstance, t: &LinComb<Tensor>) -> LinComb<BasisElt> {
    let kind = inst.kind();
    let mut out = LinComb::zero();
    for (tuple, v) in t.iter() {
        let mut b = BasisElt::unit();
        for part in tuple {
            b = b.mul(part, kind);
        }
        out.add_term(b, v.clone());
    }
    out
}

/// The a-th Hopf power Ψ^a(b) = m^\[a\] Δ^\[a\](b).
pub fn hopf_power(inst: &dyn HopfInstance, b: &BasisElt, a: u32) -> Result<LinComb<BasisElt>> {
    if a < 1 {
        return Err(HopfError::InvalidInput("hopf power needs a >= 1".into()));
    }
    let t = coproduct_iterated(inst, b, a)?;
    Ok(multiply_out(inst, &t))
}

/// The (first) Eulerian idempotent
/// e(b) = Σ_{a>=1} ((-1)^{a-1}/a) m^\[a\] Δ̄^\[a\](b); zero on degree 0.
pub fn eulerian_idempotent(inst: &dyn HopfInstance, b: &BasisElt) -> Result<LinComb<BasisElt>> {
    let n = b.degree();
    if n == 0 {
        return Ok(LinComb::zero());
    }
    inst.check_degree(n)?;
    let mut out = LinComb::zero();
    for a in 1..=n {
        let reduced = reduced_coproduct_iterated(inst, b, a)?;
        if reduced.is_empty() {
            break;
        }
        let sign = if a % 2 == 1 { rat(1) } else { rat(-1) };
        let coeff = sign * frac(1, a as i64);
        let assembled = multiply_out(inst, &reduced);
        out.add_assign(&assembled.scale(&coeff));
    }
    Ok(out)
}

/// Higher Eulerian idempotent e_i(b) = (1/i!) m^\[i\] (e ⊗ … ⊗ e) Δ^\[i\](b).
/// Since e vanishes on degree 0, only the reduced coproduct contributes.
pub fn higher_eulerian(inst: &dyn HopfInstance, b: &BasisElt, i: u32) -> Result<LinComb<BasisElt>> {
    if i < 1 {
        return Err(HopfError::InvalidInput("higher Eulerian idempotent needs i >= 1".into()));
    }
    let kind = inst.kind();
    let reduced = reduced_coproduct_iterated(inst, b, i)?;
    let mut out = LinComb::zero();
    for (tuple, v) in reduced.iter() {
        let mut parts: Vec<LinComb<BasisElt>> = Vec::with_capacity(tuple.len());
        for part in tuple {
            parts.push(eulerian_idempotent(inst, part)?);
        }
        let mut acc = LinComb::singleton(BasisElt::unit(), rat(1));
        for p in &parts {
            acc = acc.mul(p, kind);
        }
        out.add_assign(&acc.scale(v));
    }
    let inv_fact = Rat::one() / crate::ratio::big(&crate::ratio::factorial(i as u64));
    Ok(out.scale(&inv_fact))
}

/// Per-degree report of the coefficient-sum property: whether the
/// coefficients of Ψ^2(b) sum to 2^deg(b) for every degree-n basis element.
/// Instances failing this are still usable for algebra but need the
/// diagonal rescaling (or cannot be made Markov at all).
pub fn power_sums_preserved(inst: &dyn HopfInstance, degree: u32) -> Result<bool> {
    let basis = inst.enumerate_basis(degree)?;
    let want = crate::ratio::pow_rat(&rat(2), degree);
    for b in &basis {
        let total = hopf_power(inst, b, 2)?.total();
        if total != want {
            return Ok(false);
        }
    }
    Ok(true)
}

/// A multiplicative rescaling of the generator basis: b = φ(b)·b̂ with
/// φ(c) = 1 in degree one and φ extended multiplicatively.
#[derive(Clone, Debug)]
pub struct RescaleMap {
    phi: BTreeMap<GeneratorId, Rat>,
}

impl RescaleMap {
    pub fn identity() -> Self {
        RescaleMap { phi: BTreeMap::new() }
    }

    pub fn insert(&mut self, c: GeneratorId, v: Rat) {
        self.phi.insert(c, v);
    }

    pub fn phi_generator(&self, c: GeneratorId) -> Rat {
        self.phi.get(&c).cloned().unwrap_or_else(Rat::one)
    }

    pub fn phi(&self, b: &BasisElt) -> Rat {
        let mut acc = Rat::one();
        for &c in b.factors() {
            acc *= self.phi_generator(c);
        }
        acc
    }

    pub fn iter(&self) -> impl Iterator<Item = (&GeneratorId, &Rat)> {
        self.phi.iter()
    }
}

/// The same algebra in the rescaled basis b̂: structure constants are
/// conjugated by φ, so Ψ^a read here is row-stochastic after division
/// by a^n (once `chain::rescale` has succeeded).
pub struct RescaledInstance<'a> {
    pub inner: &'a dyn HopfInstance,
    pub map: RescaleMap,
}

impl<'a> RescaledInstance<'a> {
    pub fn new(inner: &'a dyn HopfInstance, map: RescaleMap) -> Self {
        RescaledInstance { inner, map }
    }
}

impl<'a> HopfInstance for RescaledInstance<'a> {
    fn kind(&self) -> AlgebraKind {
        self.inner.kind()
    }

    fn name(&self) -> String {
        self.inner.name()
    }

    fn working_degree(&self) -> u32 {
        self.inner.working_degree()
    }

    fn generators(&self, degree: u32) -> Result<Vec<GeneratorId>> {
        self.inner.generators(degree)
    }

    fn coproduct_generator(&self, c: GeneratorId) -> Result<LinComb<(BasisElt, BasisElt)>> {
        let raw = self.inner.coproduct_generator(c)?;
        let inv = Rat::one() / self.map.phi_generator(c);
        let mut out = LinComb::zero();
        for ((x, y), v) in raw.iter() {
            let scale = &inv * self.map.phi(x) * self.map.phi(y);
            out.add_term((x.clone(), y.clone()), v * scale);
        }
        Ok(out)
    }

    fn generator_label(&self, c: GeneratorId) -> String {
        self.inner.generator_label(c)
    }

    fn enumerate_basis(&self, degree: u32) -> Result<Vec<BasisElt>> {
        self.inner.enumerate_basis(degree)
    }

    fn content_graded(&self) -> bool {
        self.inner.content_graded()
    }

    fn basis_label(&self, b: &BasisElt) -> String {
        self.inner.basis_label(b)
    }
}

/// Canonical chain order on a degree block: descending length, then
/// ascending lexicographic on the factor sequence. In the polynomial case
/// this reproduces the reverse-lexicographic partition layout and makes the
/// transition matrices lower-triangular.
pub fn chain_order(a: &BasisElt, b: &BasisElt) -> std::cmp::Ordering {
    b.len().cmp(&a.len()).then_with(|| a.factors().cmp(b.factors()))
}

/// Degree-n monomials over the instance's generators, in chain order.
pub fn enumerate_monomials(inst: &dyn HopfInstance, degree: u32) -> Result<Vec<BasisElt>> {
    // all candidate generators, sorted descending; multisets are enumerated
    // as weakly decreasing sequences so each appears exactly once
    let mut gens: Vec<GeneratorId> = Vec::new();
    for d in 1..=degree {
        gens.extend(inst.generators(d)?);
    }
    gens.sort_unstable_by(|a, b| b.cmp(a));
    let mut out = Vec::new();
    let mut current: Vec<GeneratorId> = Vec::new();
    fn rec(
        remaining: u32,
        from: usize,
        gens: &[GeneratorId],
        current: &mut Vec<GeneratorId>,
        out: &mut Vec<BasisElt>,
    ) {
        if remaining == 0 {
            out.push(BasisElt::from_factors(AlgebraKind::Polynomial, current.clone()));
            return;
        }
        for idx in from..gens.len() {
            let g = gens[idx];
            if g.degree <= remaining {
                current.push(g);
                rec(remaining - g.degree, idx, gens, current, out);
                current.pop();
            }
        }
    }
    rec(degree, 0, &gens, &mut current, &mut out);
    out.sort_by(chain_order);
    Ok(out)
}

/// Degree-n words over the instance's generators, in chain order.
pub fn enumerate_words(inst: &dyn HopfInstance, degree: u32) -> Result<Vec<BasisElt>> {
    let mut gens: Vec<GeneratorId> = Vec::new();
    for d in 1..=degree {
        gens.extend(inst.generators(d)?);
    }
    let mut out = Vec::new();
    let mut current: Vec<GeneratorId> = Vec::new();
    fn rec(
        remaining: u32,
        gens: &[GeneratorId],
        current: &mut Vec<GeneratorId>,
        out: &mut Vec<BasisElt>,
    ) {
        if remaining == 0 {
            out.push(BasisElt::word(current.clone()));
            return;
        }
        for &g in gens {
            if g.degree <= remaining {
                current.push(g);
                rec(remaining - g.degree, gens, current, out);
                current.pop();
            }
        }
    }
    rec(degree, &gens, &mut current, &mut out);
    out.sort_by(chain_order);
    Ok(out)
}

/// Exact check that a combination has no negative coefficients.
pub fn nonnegative(lc: &LinComb<(BasisElt, BasisElt)>) -> bool {
    lc.iter().all(|(_, v)| !v.is_negative())
}
