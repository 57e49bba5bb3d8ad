//! Unlabeled and labeled simple-graph Hopf algebras: induced-subgraph
//! coproducts, vertex-coloring chains, and brute-force canonical forms.

use crate::error::{HopfError, Result};
use crate::gens::{AlgebraKind, BasisElt, GeneratorId, LinComb};
use crate::hopf::{enumerate_monomials, enumerate_words, HopfInstance};
use crate::ratio::rat;
use std::sync::OnceLock;

/// Hard cap for canonicalization: 8 vertices (28 edge bits, 8! permutations).
pub const GRAPH_VERTEX_CAP: u32 = 8;

/// A labeled simple graph stored as vertex count plus an edge bitset over
/// the upper triangle: edge {i, j} with i < j sits at bit j(j-1)/2 + i.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct GraphData {
    pub vertices: u32,
    pub edges: u64,
}

pub fn edge_bit(i: u32, j: u32) -> u64 {
    let (i, j) = if i < j { (i, j) } else { (j, i) };
    1u64 << (j * (j - 1) / 2 + i)
}

impl GraphData {
    pub fn new(vertices: u32, edges: u64) -> Self {
        GraphData { vertices, edges }
    }

    pub fn empty(vertices: u32) -> Self {
        GraphData { vertices, edges: 0 }
    }

    pub fn complete(vertices: u32) -> Self {
        let mut edges = 0;
        for j in 1..vertices {
            for i in 0..j {
                edges |= edge_bit(i, j);
            }
        }
        GraphData { vertices, edges }
    }

    pub fn has_edge(&self, i: u32, j: u32) -> bool {
        self.edges & edge_bit(i, j) != 0
    }

    pub fn edge_list(&self) -> Vec<(u32, u32)> {
        let mut out = Vec::new();
        for j in 1..self.vertices {
            for i in 0..j {
                if self.has_edge(i, j) {
                    out.push((i, j));
                }
            }
        }
        out
    }

    /// Relabels by a permutation (`perm[old] = new`) and re-encodes.
    pub fn relabel(&self, perm: &[u32]) -> GraphData {
        let mut edges = 0;
        for (i, j) in self.edge_list() {
            edges |= edge_bit(perm[i as usize], perm[j as usize]);
        }
        GraphData { vertices: self.vertices, edges }
    }

    /// Induced subgraph on the given (sorted) vertex subset, standardized so
    /// the kept vertices take labels 0.. in their original relative order.
    pub fn induced(&self, subset: &[u32]) -> GraphData {
        let mut edges = 0;
        for (a, &va) in subset.iter().enumerate() {
            for (b, &vb) in subset.iter().enumerate().skip(a + 1) {
                if self.has_edge(va, vb) {
                    edges |= edge_bit(a as u32, b as u32);
                }
            }
        }
        GraphData { vertices: subset.len() as u32, edges }
    }

    /// Connected components as sorted vertex lists.
    pub fn components(&self) -> Vec<Vec<u32>> {
        let n = self.vertices as usize;
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut stack = vec![start];
            let mut comp = Vec::new();
            seen[start] = true;
            while let Some(v) = stack.pop() {
                comp.push(v as u32);
                for u in 0..n {
                    if !seen[u] && self.has_edge(v as u32, u as u32) {
                        seen[u] = true;
                        stack.push(u);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.vertices <= 1 || self.components().len() == 1
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

/// Deterministic minimal representation: the lexicographically least edge
/// bitstring over all vertex relabelings. Isomorphic inputs map to equal
/// outputs. Errors above the vertex cap.
pub fn graph_canonicalize(g: &GraphData) -> Result<GraphData> {
    if g.vertices > GRAPH_VERTEX_CAP {
        return Err(HopfError::UnsupportedSize(format!(
            "graph on {} vertices exceeds cap {}",
            g.vertices, GRAPH_VERTEX_CAP
        )));
    }
    if g.vertices <= 1 {
        return Ok(*g);
    }
    let mut best = u64::MAX;
    for perm in permutations(g.vertices) {
        let e = g.relabel(&perm).edges;
        if e < best {
            best = e;
        }
    }
    Ok(GraphData { vertices: g.vertices, edges: best })
}

fn gen_of_graph(g: &GraphData) -> GeneratorId {
    GeneratorId::new(g.vertices, g.edges as u128)
}

fn graph_of_gen(c: GeneratorId) -> GraphData {
    GraphData { vertices: c.degree, edges: c.key as u64 }
}

fn label_graph(prefix: &str, g: &GraphData) -> String {
    let edges: Vec<String> = g
        .edge_list()
        .iter()
        .map(|(i, j)| format!("{}{}", i + 1, j + 1))
        .collect();
    if edges.is_empty() {
        format!("{}{}", prefix, g.vertices)
    } else {
        format!("{}{}:{}", prefix, g.vertices, edges.join("."))
    }
}

/// The commutative Hopf algebra of unlabeled simple graphs: product is
/// disjoint union, Δ(G) = Σ_S G_S ⊗ G_{S^c} over vertex subsets. Generators
/// are the connected graphs; one chain step 2-colors the vertices uniformly
/// and deletes bichromatic edges.
pub struct UnlabeledGraphInstance {
    max_degree: u32,
    gens: Vec<OnceLock<Vec<GeneratorId>>>,
}

impl UnlabeledGraphInstance {
    /// Degrees above 6 are rejected: generator enumeration is brute force.
    pub fn new(max_degree: u32) -> Result<Self> {
        if max_degree > 6 {
            return Err(HopfError::UnsupportedSize(
                "unlabeled graph chains are capped at degree 6".into(),
            ));
        }
        Ok(UnlabeledGraphInstance {
            max_degree,
            gens: (0..=max_degree).map(|_| OnceLock::new()).collect(),
        })
    }

    /// Canonical basis element of an arbitrary labeled graph: the multiset of
    /// canonicalized connected components.
    pub fn elt_of_graph(g: &GraphData) -> Result<BasisElt> {
        let mut gens = Vec::new();
        for comp in g.components() {
            let sub = g.induced(&comp);
            let canon = graph_canonicalize(&sub)?;
            gens.push(gen_of_graph(&canon));
        }
        Ok(BasisElt::from_factors(AlgebraKind::Polynomial, gens))
    }

    fn connected_generators(&self, degree: u32) -> &Vec<GeneratorId> {
        self.gens[degree as usize].get_or_init(|| {
            let d = degree;
            if d == 0 {
                return Vec::new();
            }
            let bits = d * (d - 1) / 2;
            let mut seen = std::collections::BTreeSet::new();
            for mask in 0..(1u64 << bits) {
                let g = GraphData { vertices: d, edges: mask };
                if !g.is_connected() {
                    continue;
                }
                let canon = graph_canonicalize(&g).expect("degree within cap");
                seen.insert(canon.edges);
            }
            seen.into_iter().map(|e| gen_of_graph(&GraphData { vertices: d, edges: e })).collect()
        })
    }
}

impl HopfInstance for UnlabeledGraphInstance {
    fn kind(&self) -> AlgebraKind {
        AlgebraKind::Polynomial
    }

    fn name(&self) -> String {
        "graph".into()
    }

    fn working_degree(&self) -> u32 {
        self.max_degree
    }

    fn generators(&self, degree: u32) -> Result<Vec<GeneratorId>> {
        self.check_degree(degree)?;
        Ok(self.connected_generators(degree).clone())
    }

    fn coproduct_generator(&self, c: GeneratorId) -> Result<LinComb<(BasisElt, BasisElt)>> {
        let g = graph_of_gen(c);
        let n = g.vertices;
        let mut out = LinComb::zero();
        for mask in 0u32..(1 << n) {
            let left: Vec<u32> = (0..n).filter(|&v| mask & (1 << v) != 0).collect();
            let right: Vec<u32> = (0..n).filter(|&v| mask & (1 << v) == 0).collect();
            let lelt = Self::elt_of_graph(&g.induced(&left))?;
            let relt = Self::elt_of_graph(&g.induced(&right))?;
            out.add_term((lelt, relt), rat(1));
        }
        Ok(out)
    }

    fn generator_label(&self, c: GeneratorId) -> String {
        label_graph("g", &graph_of_gen(c))
    }

    fn enumerate_basis(&self, degree: u32) -> Result<Vec<BasisElt>> {
        self.check_degree(degree)?;
        enumerate_monomials(self, degree)
    }
}

/// The cocommutative free algebra of labeled simple graphs: the product
/// shifts the second operand's labels, the coproduct restandardizes labels
/// preserving relative order. A graph is a nontrivial product exactly when
/// some index i has no edge from a label <= i to a label > i.
pub struct LabeledGraphInstance {
    max_degree: u32,
    gens: Vec<OnceLock<Vec<GeneratorId>>>,
}

impl LabeledGraphInstance {
    pub fn new(max_degree: u32) -> Result<Self> {
        if max_degree > 6 {
            return Err(HopfError::UnsupportedSize(
                "labeled graph chains are capped at degree 6".into(),
            ));
        }
        Ok(LabeledGraphInstance {
            max_degree,
            gens: (0..=max_degree).map(|_| OnceLock::new()).collect(),
        })
    }

    fn cut_points(g: &GraphData) -> Vec<u32> {
        // i is a cut when no edge joins {0..i-1} to {i..n-1} (labels 0-based)
        let mut cuts = Vec::new();
        for i in 1..g.vertices {
            let crossing = g
                .edge_list()
                .iter()
                .any(|&(a, b)| (a < i) != (b < i));
            if !crossing {
                cuts.push(i);
            }
        }
        cuts
    }

    fn is_generator(g: &GraphData) -> bool {
        g.vertices >= 1 && Self::cut_points(g).is_empty()
    }

    /// Factorizes an arbitrary labeled graph into its generator word by
    /// splitting at every cut index.
    pub fn elt_of_graph(g: &GraphData) -> BasisElt {
        if g.vertices == 0 {
            return BasisElt::unit();
        }
        let mut bounds = vec![0u32];
        bounds.extend(Self::cut_points(g));
        bounds.push(g.vertices);
        let mut word = Vec::new();
        for w in bounds.windows(2) {
            let span: Vec<u32> = (w[0]..w[1]).collect();
            let block = g.induced(&span);
            word.push(gen_of_graph(&block));
        }
        BasisElt::word(word)
    }

    fn generators_table(&self, degree: u32) -> &Vec<GeneratorId> {
        self.gens[degree as usize].get_or_init(|| {
            let d = degree;
            if d == 0 {
                return Vec::new();
            }
            let bits = d * (d - 1) / 2;
            let mut out = Vec::new();
            for mask in 0..(1u64 << bits) {
                let g = GraphData { vertices: d, edges: mask };
                if Self::is_generator(&g) {
                    out.push(gen_of_graph(&g));
                }
            }
            out.sort_unstable();
            out
        })
    }
}

impl HopfInstance for LabeledGraphInstance {
    fn kind(&self) -> AlgebraKind {
        AlgebraKind::FreeCocommutative
    }

    fn name(&self) -> String {
        "labeled-graph".into()
    }

    fn working_degree(&self) -> u32 {
        self.max_degree
    }

    fn generators(&self, degree: u32) -> Result<Vec<GeneratorId>> {
        self.check_degree(degree)?;
        Ok(self.generators_table(degree).clone())
    }

    fn coproduct_generator(&self, c: GeneratorId) -> Result<LinComb<(BasisElt, BasisElt)>> {
        let g = graph_of_gen(c);
        let n = g.vertices;
        let mut out = LinComb::zero();
        for mask in 0u32..(1 << n) {
            let left: Vec<u32> = (0..n).filter(|&v| mask & (1 << v) != 0).collect();
            let right: Vec<u32> = (0..n).filter(|&v| mask & (1 << v) == 0).collect();
            let lelt = Self::elt_of_graph(&g.induced(&left));
            let relt = Self::elt_of_graph(&g.induced(&right));
            out.add_term((lelt, relt), rat(1));
        }
        Ok(out)
    }

    fn generator_label(&self, c: GeneratorId) -> String {
        label_graph("h", &graph_of_gen(c))
    }

    fn enumerate_basis(&self, degree: u32) -> Result<Vec<BasisElt>> {
        self.check_degree(degree)?;
        enumerate_words(self, degree)
    }
}

/// Reassembles the labeled graph represented by a generator word: blocks are
/// placed side by side with shifted labels.
pub fn labeled_graph_of_elt(b: &BasisElt) -> GraphData {
    let total: u32 = b.factors().iter().map(|c| c.degree).sum();
    let mut edges = 0u64;
    let mut offset = 0u32;
    for &c in b.factors() {
        let g = graph_of_gen(c);
        for (i, j) in g.edge_list() {
            edges |= edge_bit(i + offset, j + offset);
        }
        offset += g.vertices;
    }
    GraphData { vertices: total, edges }
}

/// Parses an edge-list text: one "u v" pair per line, 1-indexed; blank lines
/// and lines starting with '#' are skipped. `vertices` must cover all labels.
pub fn parse_edge_list(text: &str, vertices: u32) -> Result<GraphData> {
    let mut edges = 0u64;
    if vertices > GRAPH_VERTEX_CAP {
        return Err(HopfError::UnsupportedSize(format!(
            "graph on {} vertices exceeds cap {}",
            vertices, GRAPH_VERTEX_CAP
        )));
    }
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut it = line.split_whitespace();
        let u: u32 = it
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| HopfError::InvalidInput(format!("bad edge line: {line}")))?;
        let v: u32 = it
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| HopfError::InvalidInput(format!("bad edge line: {line}")))?;
        if u == v || u == 0 || v == 0 || u > vertices || v > vertices {
            return Err(HopfError::InvalidInput(format!("bad edge {u} {v} for n={vertices}")));
        }
        edges |= edge_bit(u - 1, v - 1);
    }
    Ok(GraphData { vertices, edges })
}
