//! Simple undirected graphs, composition operators and the constructors for
//! the complete/empty/matching primitives and the composite families.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;
use thiserror::Error;

/// Largest order accepted at input boundaries (`build_graph`, graph6 parsing).
pub const DEFAULT_MAX_ORDER: usize = 256;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("edge ({u}, {v}) has an endpoint outside 0..{n}")]
    EndpointOutOfRange { u: usize, v: usize, n: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("order {order} exceeds the cap of {cap}")]
    OrderTooLarge { order: usize, cap: usize },
    #[error("{family}: parameter {name} = {value} is below the minimum {min}")]
    ParameterBelowBound {
        family: &'static str,
        name: &'static str,
        value: usize,
        min: usize,
    },
    #[error("degree statistics are undefined for the order-0 graph")]
    EmptyGraph,
}

/// A simple undirected graph on vertices `0..n`.
///
/// Adjacency is a dense symmetric bit relation, one row of 64-bit words per
/// vertex. Values are immutable once built.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    words: usize,
    rows: Vec<u64>,
}

impl Graph {
    /// The edgeless graph of order `n`.
    pub fn empty(n: usize) -> Self {
        let words = n.div_ceil(64);
        Graph {
            n,
            words,
            rows: vec![0; n * words],
        }
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && v < self.n && self.rows[u * self.words + v / 64] >> (v % 64) & 1 == 1
    }

    fn set_edge(&mut self, u: usize, v: usize) {
        debug_assert!(u != v && u < self.n && v < self.n);
        self.rows[u * self.words + v / 64] |= 1 << (v % 64);
        self.rows[v * self.words + u / 64] |= 1 << (u % 64);
    }

    fn row(&self, u: usize) -> &[u64] {
        &self.rows[u * self.words..(u + 1) * self.words]
    }

    pub fn degree(&self, u: usize) -> usize {
        self.row(u).iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn degrees(&self) -> Vec<usize> {
        (0..self.n).map(|u| self.degree(u)).collect()
    }

    pub fn edge_count(&self) -> usize {
        self.degrees().iter().sum::<usize>() / 2
    }

    pub fn neighbors(&self, u: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.n).filter(move |&v| self.has_edge(u, v))
    }

    /// Edges `(u, v)` with `u < v`, in row-major order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |u| {
            ((u + 1)..self.n)
                .filter(move |&v| self.has_edge(u, v))
                .map(move |v| (u, v))
        })
    }

    /// Builds the graph whose upper-triangle pair number `k` is present iff bit
    /// `k` of `code` is set. Pairs are numbered column by column:
    /// (0,1), (0,2), (1,2), (0,3), ... which is the graph6 bit order.
    pub fn from_upper_bits(n: usize, code: u64) -> Self {
        let mut g = Graph::empty(n);
        let mut k = 0;
        for v in 1..n {
            for u in 0..v {
                if code >> k & 1 == 1 {
                    g.set_edge(u, v);
                }
                k += 1;
            }
        }
        g
    }

    /// Number of connected components (the order-0 graph has none).
    pub fn component_count(&self) -> usize {
        let mut seen = vec![false; self.n];
        let mut stack = Vec::new();
        let mut count = 0;
        for start in 0..self.n {
            if seen[start] {
                continue;
            }
            count += 1;
            seen[start] = true;
            stack.push(start);
            while let Some(u) = stack.pop() {
                for v in self.neighbors(u) {
                    if !seen[v] {
                        seen[v] = true;
                        stack.push(v);
                    }
                }
            }
        }
        count
    }

    pub fn is_connected(&self) -> bool {
        self.component_count() == 1
    }

    /// Number of vertices of degree zero.
    pub fn isolated_count(&self) -> usize {
        (0..self.n).filter(|&u| self.row(u).iter().all(|&w| w == 0)).count()
    }

    /// `Some(r)` if every vertex has degree `r`. The order-0 graph is 0-regular.
    pub fn regularity(&self) -> Option<usize> {
        let degrees = self.degrees();
        match degrees.first() {
            None => Some(0),
            Some(&d) => degrees.iter().all(|&x| x == d).then_some(d),
        }
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Graph")
            .field("order", &self.n)
            .field("edges", &self.edges().collect::<Vec<_>>())
            .finish()
    }
}

/// Builds a graph from an edge list, symmetrizing and collapsing duplicates.
pub fn build_graph(n: usize, edges: &[(usize, usize)]) -> Result<Graph, GraphError> {
    build_graph_capped(n, edges, DEFAULT_MAX_ORDER)
}

pub fn build_graph_capped(n: usize, edges: &[(usize, usize)], cap: usize) -> Result<Graph, GraphError> {
    if n > cap {
        return Err(GraphError::OrderTooLarge { order: n, cap });
    }
    let mut g = Graph::empty(n);
    for &(u, v) in edges {
        if u >= n || v >= n {
            return Err(GraphError::EndpointOutOfRange { u, v, n });
        }
        if u == v {
            return Err(GraphError::SelfLoop(u));
        }
        g.set_edge(u, v);
    }
    Ok(g)
}

/// Disjoint union; `g2`'s vertices are offset by `g1.order()`.
pub fn union(g1: &Graph, g2: &Graph) -> Graph {
    let off = g1.order();
    let mut g = Graph::empty(off + g2.order());
    for (u, v) in g1.edges() {
        g.set_edge(u, v);
    }
    for (u, v) in g2.edges() {
        g.set_edge(u + off, v + off);
    }
    g
}

/// Union plus every edge between the two vertex sets.
pub fn join(g1: &Graph, g2: &Graph) -> Graph {
    let mut g = union(g1, g2);
    let off = g1.order();
    for u in 0..off {
        for v in 0..g2.order() {
            g.set_edge(u, v + off);
        }
    }
    g
}

pub fn complement(g: &Graph) -> Graph {
    let n = g.order();
    let mut c = Graph::empty(n);
    for u in 0..n {
        for v in (u + 1)..n {
            if !g.has_edge(u, v) {
                c.set_edge(u, v);
            }
        }
    }
    c
}

/// Graph families with their integer parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "family", rename_all = "lowercase")]
pub enum FamilyId {
    /// K_n.
    Complete { n: usize },
    /// bK₁, the edgeless graph on b vertices.
    Empty { b: usize },
    /// aK₂, a perfect matching on 2a vertices.
    Matching { a: usize },
    /// (K_{n−1} ∪ K_{n−2}) ∇ K₁, order 2n−2.
    KKOdot { n: usize },
    /// (K_n ∪ K_{n−1}) ∇ K₁, order 2n.
    KKDot { n: usize },
    /// aK₂ ∇ K_b, order 2a+b.
    #[serde(rename = "mjc")]
    MatchJoinComplete { a: usize, b: usize },
    /// aK₂ ∇ bK₁, order 2a+b.
    #[serde(rename = "mje")]
    MatchJoinEmpty { a: usize, b: usize },
}

fn at_least(family: &'static str, name: &'static str, value: usize, min: usize) -> Result<(), GraphError> {
    if value < min {
        Err(GraphError::ParameterBelowBound {
            family,
            name,
            value,
            min,
        })
    } else {
        Ok(())
    }
}

impl FamilyId {
    /// Checks the parameter bounds of the family.
    pub fn validate(&self) -> Result<(), GraphError> {
        match *self {
            FamilyId::Complete { n } => at_least("complete", "n", n, 1),
            FamilyId::Empty { b } => at_least("empty", "b", b, 1),
            FamilyId::Matching { a } => at_least("matching", "a", a, 1),
            FamilyId::KKOdot { n } => at_least("kkodot", "n", n, 3),
            FamilyId::KKDot { n } => at_least("kkdot", "n", n, 3),
            FamilyId::MatchJoinComplete { a, b } => {
                at_least("mjc", "a", a, 2)?;
                at_least("mjc", "b", b, 2)
            }
            FamilyId::MatchJoinEmpty { a, b } => {
                at_least("mje", "a", a, 2)?;
                at_least("mje", "b", b, 2)
            }
        }
    }

    /// Order of the family member.
    pub fn order(&self) -> usize {
        match *self {
            FamilyId::Complete { n } => n,
            FamilyId::Empty { b } => b,
            FamilyId::Matching { a } => 2 * a,
            FamilyId::KKOdot { n } => 2 * n - 2,
            FamilyId::KKDot { n } => 2 * n,
            FamilyId::MatchJoinComplete { a, b } | FamilyId::MatchJoinEmpty { a, b } => 2 * a + b,
        }
    }

    /// Short lowercase tag, as used on the command line.
    pub fn tag(&self) -> &'static str {
        match self {
            FamilyId::Complete { .. } => "complete",
            FamilyId::Empty { .. } => "empty",
            FamilyId::Matching { .. } => "matching",
            FamilyId::KKOdot { .. } => "kkodot",
            FamilyId::KKDot { .. } => "kkdot",
            FamilyId::MatchJoinComplete { .. } => "mjc",
            FamilyId::MatchJoinEmpty { .. } => "mje",
        }
    }
}

impl fmt::Display for FamilyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            FamilyId::Complete { n } => write!(f, "K_{n}"),
            FamilyId::Empty { b } => write!(f, "{b}K_1"),
            FamilyId::Matching { a } => write!(f, "{a}K_2"),
            FamilyId::KKOdot { n } => write!(f, "K_{}(.)K_{n}", n - 1),
            FamilyId::KKDot { n } => write!(f, "K_{n}.K_{n}"),
            FamilyId::MatchJoinComplete { a, b } => write!(f, "{a}K_2 v K_{b}"),
            FamilyId::MatchJoinEmpty { a, b } => write!(f, "{a}K_2 v {b}K_1"),
        }
    }
}

fn complete_unchecked(n: usize) -> Graph {
    let mut g = Graph::empty(n);
    for u in 0..n {
        for v in (u + 1)..n {
            g.set_edge(u, v);
        }
    }
    g
}

fn matching_unchecked(a: usize) -> Graph {
    let mut g = Graph::empty(2 * a);
    for i in 0..a {
        g.set_edge(i, a + i);
    }
    g
}

/// Constructs a family member. Primitives are built directly, composites by
/// union and join of primitives.
pub fn family(id: FamilyId) -> Result<Graph, GraphError> {
    id.validate()?;
    let k1 = Graph::empty(1);
    Ok(match id {
        FamilyId::Complete { n } => complete_unchecked(n),
        FamilyId::Empty { b } => Graph::empty(b),
        FamilyId::Matching { a } => matching_unchecked(a),
        FamilyId::KKOdot { n } => join(&union(&complete_unchecked(n - 1), &complete_unchecked(n - 2)), &k1),
        FamilyId::KKDot { n } => join(&union(&complete_unchecked(n), &complete_unchecked(n - 1)), &k1),
        FamilyId::MatchJoinComplete { a, b } => join(&matching_unchecked(a), &complete_unchecked(b)),
        FamilyId::MatchJoinEmpty { a, b } => join(&matching_unchecked(a), &Graph::empty(b)),
    })
}

/// K_n·K_n built the other way: two copies of K_n plus `n` edges from
/// vertex 0 of the first copy to every vertex of the second.
pub fn kk_dot_direct(n: usize) -> Result<Graph, GraphError> {
    at_least("kkdot", "n", n, 3)?;
    let mut g = union(&complete_unchecked(n), &complete_unchecked(n));
    for v in n..2 * n {
        g.set_edge(0, v);
    }
    Ok(g)
}

/// Degree sequence, edge count and exact average degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeStats {
    pub degrees: Vec<usize>,
    pub edge_count: usize,
    pub average_degree: BigRational,
}

pub fn degree_stats(g: &Graph) -> Result<DegreeStats, GraphError> {
    if g.order() == 0 {
        return Err(GraphError::EmptyGraph);
    }
    let degrees = g.degrees();
    let sum: usize = degrees.iter().sum();
    Ok(DegreeStats {
        edge_count: sum / 2,
        average_degree: BigRational::new(BigInt::from(sum), BigInt::from(g.order())),
        degrees,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p3() -> Graph {
        build_graph(3, &[(0, 1), (1, 2)]).unwrap()
    }

    #[test]
    fn build_rejects_bad_input() {
        assert_eq!(
            build_graph(3, &[(0, 3)]),
            Err(GraphError::EndpointOutOfRange { u: 0, v: 3, n: 3 })
        );
        assert_eq!(build_graph(3, &[(1, 1)]), Err(GraphError::SelfLoop(1)));
        assert!(matches!(build_graph(300, &[]), Err(GraphError::OrderTooLarge { .. })));
        assert!(build_graph_capped(300, &[], 512).is_ok());
    }

    #[test]
    fn build_collapses_duplicates() {
        let g = build_graph(3, &[(0, 1), (1, 0), (1, 2)]).unwrap();
        assert_eq!(g, p3());
        assert_eq!(g.edge_count(), 2);
        let k1 = build_graph(1, &[]).unwrap();
        assert_eq!(k1.edge_count(), 0);
        assert_eq!(k1.order(), 1);
    }

    #[test]
    fn primitives() {
        let k4 = family(FamilyId::Complete { n: 4 }).unwrap();
        assert_eq!(k4.edge_count(), 6);
        assert!(k4.degrees().iter().all(|&d| d == 3));
        let e3 = family(FamilyId::Empty { b: 3 }).unwrap();
        assert_eq!((e3.order(), e3.edge_count()), (3, 0));
        let m2 = family(FamilyId::Matching { a: 2 }).unwrap();
        assert_eq!(m2.edges().collect::<Vec<_>>(), vec![(0, 2), (1, 3)]);
        assert_eq!(m2.regularity(), Some(1));
        assert!(family(FamilyId::Complete { n: 0 }).is_err());
        assert!(family(FamilyId::Matching { a: 0 }).is_err());
    }

    #[test]
    fn union_and_join() {
        let k1 = Graph::empty(1);
        let k2 = family(FamilyId::Complete { n: 2 }).unwrap();
        let k3 = family(FamilyId::Complete { n: 3 }).unwrap();
        let u = union(&k2, &k1);
        assert_eq!((u.order(), u.edge_count()), (3, 1));
        let u = union(&k3, &k2);
        assert_eq!((u.order(), u.edge_count(), u.component_count()), (5, 4, 2));
        let m1 = family(FamilyId::Matching { a: 1 }).unwrap();
        assert_eq!(union(&m1, &m1).edge_count(), 2);

        assert_eq!(join(&k1, &k1), k2);
        let kk = join(&union(&k2, &k1), &k1);
        assert_eq!(kk, family(FamilyId::KKOdot { n: 3 }).unwrap());
        assert_eq!((kk.order(), kk.edge_count()), (4, 4));

        // join(2K₂, K₂): formula m₁+m₂+n₁n₂ against counting the built edges.
        let j = join(&family(FamilyId::Matching { a: 2 }).unwrap(), &k2);
        let by_formula = 2 + 1 + 4 * 2;
        let by_count = (0..6)
            .flat_map(|u| (u + 1..6).map(move |v| (u, v)))
            .filter(|&(u, v)| j.has_edge(u, v))
            .count();
        assert_eq!(j.order(), 6);
        assert_eq!(by_formula, 11);
        assert_eq!(by_count, 11);
    }

    #[test]
    fn complement_examples() {
        assert_eq!(
            complement(&family(FamilyId::Complete { n: 4 }).unwrap()),
            Graph::empty(4)
        );
        assert_eq!(
            complement(&Graph::empty(3)),
            family(FamilyId::Complete { n: 3 }).unwrap()
        );
        // 2K₂ has edges 0-2, 1-3; the four missing pairs 0-1, 0-3, 1-2, 2-3 form
        // the cycle 0-1-2-3-0.
        let c4 = build_graph(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        assert_eq!(complement(&family(FamilyId::Matching { a: 2 }).unwrap()), c4);
    }

    #[test]
    fn families() {
        let g = family(FamilyId::KKOdot { n: 5 }).unwrap();
        assert_eq!(g.order(), 8);
        // K₄ ∪ K₃ plus a hub: 6 + 3 + 7.
        assert_eq!(g.edge_count(), 16);
        let g = family(FamilyId::KKDot { n: 3 }).unwrap();
        assert_eq!((g.order(), g.edge_count()), (6, 9));
        let g = family(FamilyId::MatchJoinEmpty { a: 2, b: 2 }).unwrap();
        assert_eq!((g.order(), g.edge_count()), (6, 10));
        assert!(family(FamilyId::KKOdot { n: 2 }).is_err());
        assert!(family(FamilyId::MatchJoinComplete { a: 1, b: 2 }).is_err());
        assert!(family(FamilyId::MatchJoinEmpty { a: 2, b: 1 }).is_err());
    }

    #[test]
    fn kk_dot_direct_matches_join_degrees() {
        let g = kk_dot_direct(3).unwrap();
        assert_eq!((g.order(), g.edge_count()), (6, 9));
        let mut direct = kk_dot_direct(4).unwrap().degrees();
        direct.sort_unstable();
        // hub (n−1)+n = 7, copy B vertices n = 4, the rest n−1 = 3.
        assert_eq!(direct, vec![3, 3, 3, 4, 4, 4, 4, 7]);
        for n in 3..=12 {
            let mut a = kk_dot_direct(n).unwrap().degrees();
            let mut b = family(FamilyId::KKDot { n }).unwrap().degrees();
            a.sort_unstable();
            b.sort_unstable();
            assert_eq!(a, b, "n = {n}");
        }
        assert!(kk_dot_direct(2).is_err());
    }

    #[test]
    fn degree_stats_examples() {
        let r = |p: i64, q: i64| BigRational::new(p.into(), q.into());
        assert_eq!(
            degree_stats(&family(FamilyId::KKOdot { n: 5 }).unwrap())
                .unwrap()
                .average_degree,
            r(4, 1)
        );
        for n in 3..10 {
            let s = degree_stats(&family(FamilyId::KKDot { n }).unwrap()).unwrap();
            assert_eq!(s.average_degree, r(n as i64, 1));
        }
        assert_eq!(degree_stats(&Graph::empty(5)).unwrap().average_degree, r(0, 1));
        let s = degree_stats(&p3()).unwrap();
        assert_eq!((s.edge_count, s.average_degree), (2, r(4, 3)));
        assert_eq!(degree_stats(&Graph::empty(0)), Err(GraphError::EmptyGraph));
    }

    #[test]
    fn order_zero_is_union_identity() {
        let g = family(FamilyId::KKDot { n: 4 }).unwrap();
        assert_eq!(union(&g, &Graph::empty(0)), g);
        assert_eq!(union(&Graph::empty(0), &g), g);
        assert_eq!(join(&Graph::empty(0), &g), g);
    }

    #[test]
    fn upper_bits_order() {
        // bit 0 is (0,1), bit 1 is (0,2), bit 2 is (1,2).
        assert_eq!(
            Graph::from_upper_bits(3, 0b100).edges().collect::<Vec<_>>(),
            vec![(1, 2)]
        );
        assert_eq!(
            Graph::from_upper_bits(4, 0b1000).edges().collect::<Vec<_>>(),
            vec![(0, 3)]
        );
    }
}
