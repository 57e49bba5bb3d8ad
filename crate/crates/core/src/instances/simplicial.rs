//! The commutative Hopf algebra of simplicial complexes: disjoint union
//! product, induced-subcomplex coproduct, vertex-coloring chain.

use crate::error::{HopfError, Result};
use crate::gens::{AlgebraKind, BasisElt, GeneratorId, LinComb};
use crate::hopf::{enumerate_monomials, HopfInstance};
use crate::instances::graphs::GraphData;
use crate::ratio::rat;
use std::sync::OnceLock;

/// Canonical keys encode the face family as a bitset over nonempty vertex
/// subsets, which caps canonicalization at 7 vertices (127 face bits).
pub const COMPLEX_VERTEX_CAP: u32 = 7;

/// A simplicial complex on vertex set {0, ..., vertices-1}: the set of faces
/// (nonempty vertex masks), closed under nonempty subsets, containing every
/// singleton. `faces` has bit f set iff mask f is a face.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct ComplexData {
    pub vertices: u32,
    pub faces: u128,
}

impl ComplexData {
    /// The trivial complex: isolated vertices only.
    pub fn trivial(vertices: u32) -> Self {
        let mut faces = 0u128;
        for v in 0..vertices {
            faces |= 1 << (1u32 << v);
        }
        ComplexData { vertices, faces }
    }

    /// Builds from maximal faces (vertex masks), materializing the closure
    /// and all singletons.
    pub fn from_maximal_faces(vertices: u32, maximal: &[u32]) -> Result<Self> {
        if vertices > COMPLEX_VERTEX_CAP {
            return Err(HopfError::UnsupportedSize(format!(
                "complex on {} vertices exceeds cap {}",
                vertices, COMPLEX_VERTEX_CAP
            )));
        }
        let mut c = Self::trivial(vertices);
        for &face in maximal {
            if face == 0 || face >= (1u32 << vertices) {
                return Err(HopfError::InvalidInput("face outside vertex set".into()));
            }
            // closure: every nonempty subset of the face
            let mut sub = face;
            loop {
                c.faces |= 1 << sub;
                if sub == 0 {
                    break;
                }
                sub = (sub - 1) & face;
            }
            c.faces &= !1u128; // drop the empty mask bit if set
        }
        Ok(c)
    }

    pub fn has_face(&self, mask: u32) -> bool {
        mask > 0 && self.faces & (1 << mask) != 0
    }

    pub fn face_masks(&self) -> Vec<u32> {
        (1..(1u32 << self.vertices)).filter(|&m| self.has_face(m)).collect()
    }

    pub fn maximal_faces(&self) -> Vec<u32> {
        let all = self.face_masks();
        all.iter()
            .copied()
            .filter(|&f| !all.iter().any(|&g| g != f && g & f == f))
            .collect()
    }

    /// Closure under subsets holds for every stored complex.
    pub fn is_closed(&self) -> bool {
        for f in self.face_masks() {
            for v in 0..self.vertices {
                let sub = f & !(1 << v);
                if sub != 0 && sub != f && !self.has_face(sub) {
                    return false;
                }
            }
        }
        (0..self.vertices).all(|v| self.has_face(1 << v))
    }

    /// The 1-skeleton as a graph.
    pub fn skeleton(&self) -> GraphData {
        let mut g = GraphData::empty(self.vertices);
        for j in 1..self.vertices {
            for i in 0..j {
                if self.has_face((1 << i) | (1 << j)) {
                    g.edges |= crate::instances::graphs::edge_bit(i, j);
                }
            }
        }
        g
    }

    /// Induced subcomplex on a sorted vertex subset, restandardized.
    pub fn induced(&self, subset: &[u32]) -> ComplexData {
        let m = subset.len() as u32;
        let mut faces = 0u128;
        let sub_mask: u32 = subset.iter().map(|&v| 1u32 << v).sum();
        for f in self.face_masks() {
            if f & !sub_mask == 0 {
                // re-index vertices by position within subset
                let mut g = 0u32;
                for (pos, &v) in subset.iter().enumerate() {
                    if f & (1 << v) != 0 {
                        g |= 1 << pos;
                    }
                }
                faces |= 1 << g;
            }
        }
        ComplexData { vertices: m, faces }
    }

    pub fn relabel(&self, perm: &[u32]) -> ComplexData {
        let mut faces = 0u128;
        for f in self.face_masks() {
            let mut g = 0u32;
            for v in 0..self.vertices {
                if f & (1 << v) != 0 {
                    g |= 1 << perm[v as usize];
                }
            }
            faces |= 1 << g;
        }
        ComplexData { vertices: self.vertices, faces }
    }
}

fn permutations(n: u32) -> Vec<Vec<u32>> {
    fn rec(n: u32, cur: &mut Vec<u32>, used: &mut Vec<bool>, out: &mut Vec<Vec<u32>>) {
        if cur.len() == n as usize {
            out.push(cur.clone());
            return;
        }
        for v in 0..n {
            if !used[v as usize] {
                used[v as usize] = true;
                cur.push(v);
                rec(n, cur, used, out);
                cur.pop();
                used[v as usize] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(n, &mut Vec::new(), &mut vec![false; n as usize], &mut out);
    out
}

pub fn complex_canonicalize(c: &ComplexData) -> Result<ComplexData> {
    if c.vertices > COMPLEX_VERTEX_CAP {
        return Err(HopfError::UnsupportedSize(format!(
            "complex on {} vertices exceeds cap {}",
            c.vertices, COMPLEX_VERTEX_CAP
        )));
    }
    if c.vertices <= 1 {
        return Ok(*c);
    }
    let mut best = u128::MAX;
    for perm in permutations(c.vertices) {
        let f = c.relabel(&perm).faces;
        if f < best {
            best = f;
        }
    }
    Ok(ComplexData { vertices: c.vertices, faces: best })
}

fn gen_of_complex(c: &ComplexData) -> GeneratorId {
    GeneratorId::new(c.vertices, c.faces)
}

fn complex_of_gen(g: GeneratorId) -> ComplexData {
    ComplexData { vertices: g.degree, faces: g.key }
}

/// Simplicial complexes up to isomorphism; generators are the complexes with
/// connected 1-skeleton. One chain step 2-colors the vertices uniformly and
/// keeps only faces within a color class.
pub struct SimplicialInstance {
    max_degree: u32,
    gens: Vec<OnceLock<Vec<GeneratorId>>>,
}

impl SimplicialInstance {
    /// Chain degrees above 5 are rejected (generator enumeration walks all
    /// subset-closed families on \[d\]).
    pub fn new(max_degree: u32) -> Result<Self> {
        if max_degree > 5 {
            return Err(HopfError::UnsupportedSize(
                "simplicial chains are capped at degree 5".into(),
            ));
        }
        Ok(SimplicialInstance {
            max_degree,
            gens: (0..=max_degree).map(|_| OnceLock::new()).collect(),
        })
    }

    /// Canonical basis element: the multiset of canonicalized skeleton
    /// components.
    pub fn elt_of_complex(c: &ComplexData) -> Result<BasisElt> {
        let mut gens = Vec::new();
        for comp in c.skeleton().components() {
            let sub = c.induced(&comp);
            let canon = complex_canonicalize(&sub)?;
            gens.push(gen_of_complex(&canon));
        }
        Ok(BasisElt::from_factors(AlgebraKind::Polynomial, gens))
    }

    fn connected_generators(&self, degree: u32) -> &Vec<GeneratorId> {
        self.gens[degree as usize].get_or_init(|| {
            let d = degree;
            if d == 0 {
                return Vec::new();
            }
            // all faces of size >= 2, sorted by size so facets are decided
            // before the faces they support
            let mut candidates: Vec<u32> = (1..(1u32 << d)).filter(|m| m.count_ones() >= 2).collect();
            candidates.sort_by_key(|m| (m.count_ones(), *m));
            let mut seen = std::collections::BTreeSet::new();
            let base = ComplexData::trivial(d);
            fn rec(
                idx: usize,
                candidates: &[u32],
                current: ComplexData,
                seen: &mut std::collections::BTreeSet<u128>,
            ) {
                if idx == candidates.len() {
                    if current.skeleton().is_connected() {
                        let canon = complex_canonicalize(&current).expect("within cap");
                        seen.insert(canon.faces);
                    }
                    return;
                }
                rec(idx + 1, candidates, current, seen);
                let face = candidates[idx];
                // include only if all facets are already present
                let mut ok = true;
                for v in 0..current.vertices {
                    let sub = face & !(1 << v);
                    if sub != face && sub.count_ones() >= 1 && face & (1 << v) != 0 && !current.has_face(sub)
                    {
                        ok = false;
                        break;
                    }
                }
                if ok {
                    let mut next = current;
                    next.faces |= 1 << face;
                    rec(idx + 1, candidates, next, seen);
                }
            }
            rec(0, &candidates, base, &mut seen);
            seen.into_iter()
                .map(|f| gen_of_complex(&ComplexData { vertices: d, faces: f }))
                .collect()
        })
    }
}

impl HopfInstance for SimplicialInstance {
    fn kind(&self) -> AlgebraKind {
        AlgebraKind::Polynomial
    }

    fn name(&self) -> String {
        "complex".into()
    }

    fn working_degree(&self) -> u32 {
        self.max_degree
    }

    fn generators(&self, degree: u32) -> Result<Vec<GeneratorId>> {
        self.check_degree(degree)?;
        Ok(self.connected_generators(degree).clone())
    }

    fn coproduct_generator(&self, c: GeneratorId) -> Result<LinComb<(BasisElt, BasisElt)>> {
        let cx = complex_of_gen(c);
        let n = cx.vertices;
        let mut out = LinComb::zero();
        for mask in 0u32..(1 << n) {
            let left: Vec<u32> = (0..n).filter(|&v| mask & (1 << v) != 0).collect();
            let right: Vec<u32> = (0..n).filter(|&v| mask & (1 << v) == 0).collect();
            let lelt = Self::elt_of_complex(&cx.induced(&left))?;
            let relt = Self::elt_of_complex(&cx.induced(&right))?;
            out.add_term((lelt, relt), rat(1));
        }
        Ok(out)
    }

    fn generator_label(&self, c: GeneratorId) -> String {
        let cx = complex_of_gen(c);
        let faces: Vec<String> = cx
            .maximal_faces()
            .iter()
            .map(|&f| {
                (0..cx.vertices)
                    .filter(|&v| f & (1 << v) != 0)
                    .map(|v| (v + 1).to_string())
                    .collect::<String>()
            })
            .collect();
        format!("s{}:{}", cx.vertices, faces.join("."))
    }

    fn enumerate_basis(&self, degree: u32) -> Result<Vec<BasisElt>> {
        self.check_degree(degree)?;
        enumerate_monomials(self, degree)
    }
}

/// Parses a complex given one maximal face per line as 1-indexed vertex
/// lists; `vertices` must cover all labels.
pub fn parse_faces(text: &str, vertices: u32) -> Result<ComplexData> {
    let mut maximal = Vec::new();
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut mask = 0u32;
        for tok in line.split_whitespace() {
            let v: u32 = tok
                .parse()
                .map_err(|_| HopfError::InvalidInput(format!("bad face line: {line}")))?;
            if v == 0 || v > vertices {
                return Err(HopfError::InvalidInput(format!("vertex {v} outside 1..={vertices}")));
            }
            mask |= 1 << (v - 1);
        }
        maximal.push(mask);
    }
    ComplexData::from_maximal_faces(vertices, &maximal)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closure_and_skeleton() {
        // full triangle {123}
        let c = ComplexData::from_maximal_faces(3, &[0b111]).unwrap();
        assert_eq!(c.face_masks().len(), 7);
        assert!(c.is_closed());
        assert!(c.skeleton().is_connected());
        assert_eq!(c.maximal_faces(), vec![0b111]);
        // hollow triangle: edges only
        let h = ComplexData::from_maximal_faces(3, &[0b011, 0b101, 0b110]).unwrap();
        assert_eq!(h.face_masks().len(), 6);
        assert_eq!(h.skeleton(), GraphData::complete(3));
    }

    #[test]
    fn canonical_forms_identify_isomorphic_complexes() {
        let a = ComplexData::from_maximal_faces(3, &[0b011]).unwrap(); // edge 12, isolated 3
        let b = ComplexData::from_maximal_faces(3, &[0b110]).unwrap(); // edge 23, isolated 1
        assert_eq!(complex_canonicalize(&a).unwrap(), complex_canonicalize(&b).unwrap());
    }

    #[test]
    fn generator_counts_small() {
        let inst = SimplicialInstance::new(4).unwrap();
        // connected complexes: 1 on one vertex; 1 on two (edge);
        // on three vertices: hollow triangle, full triangle, path (x2 shapes?) ->
        // up to iso: path, hollow triangle, filled triangle = 3
        assert_eq!(inst.generators(1).unwrap().len(), 1);
        assert_eq!(inst.generators(2).unwrap().len(), 1);
        assert_eq!(inst.generators(3).unwrap().len(), 3);
        let d = inst
            .coproduct_generator(inst.generators(2).unwrap()[0])
            .unwrap();
        assert_eq!(d.total(), rat(4));
    }
}
