//! Explicit Cayley and Cayley sum graphs with a structural probe.

use std::collections::VecDeque;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::oracle::group::AbelianGroup;
use crate::oracle::ring::ConcreteRing;

/// Adjacency rule of a Cayley-type graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Mode {
    /// `v ~ w` iff `w - v ∈ S`.
    Difference,
    /// `v ~ w` iff `v + w ∈ S`; loops allowed.
    Sum,
}

/// A regular graph stored as bitset rows. Loops are diagonal entries and
/// count once towards the degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphInstance {
    n: usize,
    words: usize,
    bits: Vec<u64>,
    mode: Mode,
    label: String,
}

impl GraphInstance {
    fn empty(n: usize, mode: Mode, label: String) -> Self {
        let words = n.div_ceil(64);
        GraphInstance { n, words, bits: vec![0; n * words], mode, label }
    }

    fn set(&mut self, u: usize, v: usize) {
        self.bits[u * self.words + v / 64] |= 1 << (v % 64);
    }

    /// Graph from a 0/1 matrix, which must be symmetric.
    pub fn from_matrix(rows: &[Vec<u8>], mode: Mode, label: impl Into<String>) -> Result<Self> {
        let n = rows.len();
        let mut g = GraphInstance::empty(n, mode, label.into());
        for (u, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::Domain("adjacency matrix is not square".into()));
            }
            for (v, &a) in row.iter().enumerate() {
                if a > 1 || a != rows[v][u] {
                    return Err(Error::Domain("adjacency matrix must be symmetric 0/1".into()));
                }
                if a == 1 {
                    g.set(u, v);
                }
            }
        }
        Ok(g)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.bits[u * self.words + v / 64] >> (v % 64) & 1 == 1
    }

    pub fn row(&self, u: usize) -> &[u64] {
        &self.bits[u * self.words..(u + 1) * self.words]
    }

    pub fn neighbors(&self, u: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.n).filter(move |&v| self.has_edge(u, v))
    }

    pub fn degree_of(&self, u: usize) -> usize {
        self.row(u).iter().map(|w| w.count_ones() as usize).sum()
    }

    /// The common degree, or `None` if the graph is not regular.
    pub fn regular_degree(&self) -> Option<usize> {
        let k = if self.n == 0 { 0 } else { self.degree_of(0) };
        (0..self.n).all(|u| self.degree_of(u) == k).then_some(k)
    }

    pub fn loop_count(&self) -> usize {
        (0..self.n).filter(|&u| self.has_edge(u, u)).count()
    }

    /// Edges with loops counted once.
    pub fn edge_count(&self) -> usize {
        let total: usize = (0..self.n).map(|u| self.degree_of(u)).sum();
        let loops = self.loop_count();
        (total - loops) / 2 + loops
    }

    /// Dense 0/1 matrix.
    pub fn adjacency(&self) -> Vec<Vec<u8>> {
        (0..self.n)
            .map(|u| (0..self.n).map(|v| self.has_edge(u, v) as u8).collect())
            .collect()
    }

    /// One `u v` line per edge with `u <= v`; loops appear as `u u`.
    pub fn to_edge_list(&self) -> String {
        let mut out = String::new();
        for u in 0..self.n {
            for v in u..self.n {
                if self.has_edge(u, v) {
                    writeln!(out, "{u} {v}").unwrap();
                }
            }
        }
        out
    }

    /// DIMACS-style text: `p edge n m` then 1-based `e u v` lines.
    pub fn to_dimacs(&self) -> String {
        let mut out = format!("p edge {} {}\n", self.n, self.edge_count());
        for u in 0..self.n {
            for v in u..self.n {
                if self.has_edge(u, v) {
                    writeln!(out, "e {} {}", u + 1, v + 1).unwrap();
                }
            }
        }
        out
    }

    /// Kronecker (tensor) product.
    pub fn kron(&self, other: &GraphInstance) -> GraphInstance {
        let n = self.n * other.n;
        let label = format!("({})⊗({})", self.label, other.label);
        let mut g = GraphInstance::empty(n, self.mode, label);
        for a in 0..self.n {
            for b in 0..self.n {
                if !self.has_edge(a, b) {
                    continue;
                }
                for c in 0..other.n {
                    for d in 0..other.n {
                        if other.has_edge(c, d) {
                            g.set(a * other.n + c, b * other.n + d);
                        }
                    }
                }
            }
        }
        g
    }
}

fn build(group: &AbelianGroup, in_set: &[bool], mode: Mode, label: String) -> GraphInstance {
    let n = group.size();
    let neg = group.neg_table();
    let mut g = GraphInstance::empty(n, mode, label);
    for v in 0..n {
        let other = match mode {
            Mode::Difference => neg[v],
            Mode::Sum => v,
        };
        for w in 0..n {
            if in_set[group.add(w, other)] {
                g.set(v, w);
            }
        }
    }
    g
}

/// Difference or sum graph on a ring with the units as connection set.
pub fn cayley_graph(ring: &ConcreteRing, mode: Mode) -> GraphInstance {
    let units: Vec<bool> = (0..ring.size()).map(|x| ring.is_unit(x)).collect();
    let tag = match mode {
        Mode::Difference => "G",
        Mode::Sum => "G+",
    };
    build(ring.group(), &units, mode, format!("{tag}({})", ring.spec()))
}

/// Cayley-type graph on an abelian group with a symmetric connection set not containing 0.
pub fn general_cayley_graph(group: &AbelianGroup, s_set: &[usize], mode: Mode) -> Result<GraphInstance> {
    let in_set = connection_indicator(group, s_set)?;
    Ok(build(group, &in_set, mode, format!("X{:?}{:?}", group.orders(), s_set)))
}

pub(crate) fn connection_indicator(group: &AbelianGroup, s_set: &[usize]) -> Result<Vec<bool>> {
    let n = group.size();
    let mut in_set = vec![false; n];
    for &s in s_set {
        if s >= n {
            return Err(Error::ConnectionSet(format!("element {s} is outside the group")));
        }
        if s == 0 {
            return Err(Error::ConnectionSet("contains the identity".into()));
        }
        in_set[s] = true;
    }
    if let Some(s) = (0..n).find(|&s| in_set[s] && !in_set[group.neg(s)]) {
        return Err(Error::ConnectionSet(format!("not symmetric: contains {s} but not its negative")));
    }
    Ok(in_set)
}

/// Structural facts read off the graph itself.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructuralProbe {
    pub connected: bool,
    /// Bipartiteness of the graph with loops deleted.
    pub bipartite: bool,
    pub loop_count: usize,
    pub edge_count: usize,
    /// `(e, d)` when adjacent pairs all share `e` common neighbours and
    /// non-adjacent pairs all share `d`. An absent pair type reports 0.
    pub common_neighbor_profile: Option<(usize, usize)>,
}

impl StructuralProbe {
    /// Bipartite with loops counted as odd cycles; this is the notion that
    /// matches `-k` being an eigenvalue of a connected `k`-regular graph.
    pub fn two_colorable(&self) -> bool {
        self.bipartite && self.loop_count == 0
    }
}

pub fn structural_probe(g: &GraphInstance) -> StructuralProbe {
    let n = g.n();
    let mut color = vec![u8::MAX; n];
    let mut bipartite = true;
    let mut components = 0;
    for start in 0..n {
        if color[start] != u8::MAX {
            continue;
        }
        components += 1;
        color[start] = 0;
        let mut queue = VecDeque::from([start]);
        while let Some(u) = queue.pop_front() {
            for v in g.neighbors(u) {
                if v == u {
                    continue;
                }
                if color[v] == u8::MAX {
                    color[v] = 1 - color[u];
                    queue.push_back(v);
                } else if color[v] == color[u] {
                    bipartite = false;
                }
            }
        }
    }
    StructuralProbe {
        connected: components <= 1,
        bipartite,
        loop_count: g.loop_count(),
        edge_count: g.edge_count(),
        common_neighbor_profile: common_neighbor_profile(g),
    }
}

fn common_neighbor_profile(g: &GraphInstance) -> Option<(usize, usize)> {
    let mut adjacent: Option<usize> = None;
    let mut apart: Option<usize> = None;
    for u in 0..g.n() {
        for v in u + 1..g.n() {
            let c: usize = g
                .row(u)
                .iter()
                .zip(g.row(v))
                .map(|(a, b)| (a & b).count_ones() as usize)
                .sum();
            let slot = if g.has_edge(u, v) { &mut adjacent } else { &mut apart };
            match *slot {
                None => *slot = Some(c),
                Some(x) if x != c => return None,
                _ => {}
            }
        }
    }
    Some((adjacent.unwrap_or(0), apart.unwrap_or(0)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::ring::{build_concrete_ring, DEFAULT_BOUND};
    use crate::ring_model::parse_ring_spec;

    fn ring(s: &str) -> ConcreteRing {
        build_concrete_ring(&parse_ring_spec(s).unwrap(), DEFAULT_BOUND).unwrap()
    }

    #[test]
    fn f3_graphs() {
        let r = ring("F3");
        let c3 = cayley_graph(&r, Mode::Difference);
        assert_eq!(c3.edge_count(), 3);
        assert_eq!(c3.loop_count(), 0);
        assert_eq!(c3.regular_degree(), Some(2));
        let p3 = cayley_graph(&r, Mode::Sum);
        // 0 ~ 1, 0 ~ 2, 1 ~ 1, 2 ~ 2: a path with loops at both ends.
        assert_eq!(p3.to_edge_list(), "0 1\n0 2\n1 1\n2 2\n");
        assert_eq!(p3.edge_count(), 4);
        assert_eq!(p3.to_dimacs(), "p edge 3 4\ne 1 2\ne 1 3\ne 2 2\ne 3 3\n");
    }

    #[test]
    fn general_pairs() {
        let z5 = AbelianGroup::cyclic(5).unwrap();
        let c5 = general_cayley_graph(&z5, &[1, 4], Mode::Difference).unwrap();
        assert_eq!(c5.edge_count(), 5);
        assert!(structural_probe(&c5).connected);
        let p5 = general_cayley_graph(&z5, &[1, 4], Mode::Sum).unwrap();
        assert_eq!(p5.loop_count(), 2);
        let z4 = AbelianGroup::cyclic(4).unwrap();
        let a = general_cayley_graph(&z4, &[1, 3], Mode::Difference).unwrap();
        let b = general_cayley_graph(&z4, &[1, 3], Mode::Sum).unwrap();
        assert_eq!(a.adjacency(), b.adjacency());
    }

    #[test]
    fn rejects_bad_connection_sets() {
        let z6 = AbelianGroup::cyclic(6).unwrap();
        assert!(matches!(general_cayley_graph(&z6, &[0, 1, 5], Mode::Sum), Err(Error::ConnectionSet(_))));
        assert!(matches!(general_cayley_graph(&z6, &[1, 2], Mode::Sum), Err(Error::ConnectionSet(_))));
    }

    #[test]
    fn probes() {
        let p = structural_probe(&cayley_graph(&ring("F3xF3"), Mode::Difference));
        assert_eq!(p.common_neighbor_profile, Some((1, 2)));
        // G_Z9 is the complete tripartite graph K_{3,3,3}.
        let z9 = structural_probe(&cayley_graph(&ring("Z9"), Mode::Difference));
        assert!(z9.connected && !z9.bipartite);
        assert_eq!(z9.edge_count, 27);
        let z9p = structural_probe(&cayley_graph(&ring("Z9"), Mode::Sum));
        assert!(z9p.connected && !z9p.bipartite);
        assert_eq!((z9p.loop_count, z9p.edge_count), (6, 30));
        let f3f4 = structural_probe(&cayley_graph(&ring("F3xF4"), Mode::Difference));
        assert_eq!(f3f4.common_neighbor_profile, None);
        let k4 = structural_probe(&cayley_graph(&ring("F4"), Mode::Difference));
        assert_eq!(k4.common_neighbor_profile, Some((2, 0)));
    }

    #[test]
    fn kron_of_k2() {
        let k2 = cayley_graph(&ring("F2"), Mode::Difference);
        let kk = k2.kron(&k2);
        assert_eq!(kk.regular_degree(), Some(1));
        assert!(!structural_probe(&kk).connected);
    }
}
