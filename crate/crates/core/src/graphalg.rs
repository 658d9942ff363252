//! Matching primitives on simple undirected graphs.
//!
//! Everything here is deterministic: ties are broken by vertex index so a
//! given graph always yields the same matching.

use std::collections::VecDeque;

use crate::matching::Matching;

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SimpleGraph {
    n: usize,
    adj: Vec<Vec<usize>>,
}

impl SimpleGraph {
    pub fn new(n: usize) -> Self {
        Self {
            n,
            adj: vec![Vec::new(); n],
        }
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Self {
        let mut g = Self::new(n);
        for &(u, v) in edges {
            g.add_edge(u, v);
        }
        g
    }

    /// Inserts `{u, v}`, keeping adjacency sorted. Loops and repeats are ignored.
    pub fn add_edge(&mut self, u: usize, v: usize) {
        if u == v {
            return;
        }
        if let Err(pos) = self.adj[u].binary_search(&v) {
            self.adj[u].insert(pos, v);
            let pos = self.adj[v].binary_search(&u).unwrap_err();
            self.adj[v].insert(pos, u);
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].binary_search(&v).is_ok()
    }

    /// Edges `(u, v)` with `u < v` in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        (0..self.n)
            .flat_map(|u| self.adj[u].iter().filter(move |&&v| u < v).map(move |&v| (u, v)))
            .collect()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }
}

/// Greedy maximal matching scanning edges lexicographically.
pub fn maximal_matching(g: &SimpleGraph) -> Matching {
    extend_to_maximal(g, Matching::empty(g.n()))
}

/// Greedily adds lexicographically ordered edges of `g` to `m` until maximal.
pub fn extend_to_maximal(g: &SimpleGraph, mut m: Matching) -> Matching {
    for (u, v) in g.edges() {
        if !m.is_matched(u) && !m.is_matched(v) {
            m.add_pair(u, v).expect("both endpoints are free");
        }
    }
    m
}

/// Maximum-cardinality matching via Edmonds' blossom algorithm, O(n^3).
pub fn maximum_matching(g: &SimpleGraph) -> Matching {
    Blossom::new(g).run()
}

/// A matching covering every vertex of `must_cover`, if one exists.
///
/// Decided on a doubled graph: two copies of `g`, with each vertex outside
/// `must_cover` joined to its twin. The doubled graph has a perfect matching
/// exactly when `must_cover` is saturable, and the first copy of any perfect
/// matching is a witness.
pub fn saturating_matching(g: &SimpleGraph, must_cover: &[usize]) -> Option<Matching> {
    let n = g.n();
    let mut in_h = vec![false; n];
    for &v in must_cover {
        in_h[v] = true;
    }
    let mut doubled = SimpleGraph::new(2 * n);
    for (u, v) in g.edges() {
        doubled.add_edge(u, v);
        doubled.add_edge(u + n, v + n);
    }
    for v in (0..n).filter(|&v| !in_h[v]) {
        doubled.add_edge(v, v + n);
    }
    let perfect = has_perfect_matching(&doubled)?;
    Some(perfect.truncate(n))
}

/// A perfect matching of `g`, or `None` if none exists.
pub fn has_perfect_matching(g: &SimpleGraph) -> Option<Matching> {
    if g.n() % 2 == 1 {
        return None;
    }
    let m = maximum_matching(g);
    (2 * m.len() == g.n()).then_some(m)
}

struct Blossom<'g> {
    g: &'g SimpleGraph,
    mate: Vec<Option<usize>>,
    parent: Vec<Option<usize>>,
    base: Vec<usize>,
    used: Vec<bool>,
    in_blossom: Vec<bool>,
    queue: VecDeque<usize>,
}

impl<'g> Blossom<'g> {
    fn new(g: &'g SimpleGraph) -> Self {
        let n = g.n();
        Self {
            g,
            mate: vec![None; n],
            parent: vec![None; n],
            base: (0..n).collect(),
            used: vec![false; n],
            in_blossom: vec![false; n],
            queue: VecDeque::new(),
        }
    }

    fn run(mut self) -> Matching {
        let greedy = maximal_matching(self.g);
        self.mate = greedy.mates().to_vec();
        for root in 0..self.g.n() {
            if self.mate[root].is_some() {
                continue;
            }
            if let Some(end) = self.find_augmenting_path(root) {
                self.augment(end);
            }
        }
        Matching::from_mates(self.mate).expect("blossom keeps a valid matching")
    }

    fn augment(&mut self, mut v: usize) {
        loop {
            let pv = self.parent[v].expect("path vertex has a parent");
            let next = self.mate[pv];
            self.mate[v] = Some(pv);
            self.mate[pv] = Some(v);
            match next {
                Some(w) => v = w,
                None => break,
            }
        }
    }

    fn lca(&self, mut a: usize, mut b: usize) -> usize {
        let mut seen = vec![false; self.g.n()];
        loop {
            a = self.base[a];
            seen[a] = true;
            match self.mate[a] {
                None => break,
                Some(m) => a = self.parent[m].expect("outer vertex has a parent"),
            }
        }
        loop {
            b = self.base[b];
            if seen[b] {
                return b;
            }
            let m = self.mate[b].expect("walk reaches the root first on a's side");
            b = self.parent[m].expect("outer vertex has a parent");
        }
    }

    fn mark_path(&mut self, mut v: usize, b: usize, mut child: usize) {
        while self.base[v] != b {
            let m = self.mate[v].expect("inner path vertex is matched");
            self.in_blossom[self.base[v]] = true;
            self.in_blossom[self.base[m]] = true;
            self.parent[v] = Some(child);
            child = m;
            v = self.parent[m].expect("outer vertex has a parent");
        }
    }

    fn find_augmenting_path(&mut self, root: usize) -> Option<usize> {
        let n = self.g.n();
        self.used.iter_mut().for_each(|x| *x = false);
        self.parent.iter_mut().for_each(|x| *x = None);
        for (i, b) in self.base.iter_mut().enumerate() {
            *b = i;
        }
        self.queue.clear();
        self.used[root] = true;
        self.queue.push_back(root);
        while let Some(v) = self.queue.pop_front() {
            for idx in 0..self.g.degree(v) {
                let to = self.g.neighbors(v)[idx];
                if self.base[v] == self.base[to] || self.mate[v] == Some(to) {
                    continue;
                }
                let to_is_outer = to == root || self.mate[to].is_some_and(|m| self.parent[m].is_some());
                if to_is_outer {
                    let cur = self.lca(v, to);
                    self.in_blossom.iter_mut().for_each(|x| *x = false);
                    self.mark_path(v, cur, to);
                    self.mark_path(to, cur, v);
                    for i in 0..n {
                        if self.in_blossom[self.base[i]] {
                            self.base[i] = cur;
                            if !self.used[i] {
                                self.used[i] = true;
                                self.queue.push_back(i);
                            }
                        }
                    }
                } else if self.parent[to].is_none() {
                    self.parent[to] = Some(v);
                    match self.mate[to] {
                        None => return Some(to),
                        Some(m) => {
                            self.used[m] = true;
                            self.queue.push_back(m);
                        }
                    }
                }
            }
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(n: usize) -> SimpleGraph {
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        SimpleGraph::from_edges(n, &edges)
    }

    fn complete(n: usize) -> SimpleGraph {
        let edges: Vec<_> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
        SimpleGraph::from_edges(n, &edges)
    }

    fn petersen() -> SimpleGraph {
        let mut edges = Vec::new();
        for i in 0..5 {
            edges.push((i, (i + 1) % 5));
            edges.push((i, i + 5));
            edges.push((5 + i, 5 + (i + 2) % 5));
        }
        SimpleGraph::from_edges(10, &edges)
    }

    fn brute_max(g: &SimpleGraph) -> usize {
        fn go(edges: &[(usize, usize)], used: &mut Vec<bool>, from: usize) -> usize {
            let mut best = 0;
            for i in from..edges.len() {
                let (u, v) = edges[i];
                if !used[u] && !used[v] {
                    used[u] = true;
                    used[v] = true;
                    best = best.max(1 + go(edges, used, i + 1));
                    used[u] = false;
                    used[v] = false;
                }
            }
            best
        }
        go(&g.edges(), &mut vec![false; g.n()], 0)
    }

    fn assert_valid(g: &SimpleGraph, m: &Matching) {
        for (u, v) in m.pairs() {
            assert!(g.has_edge(u, v), "matched non-edge {u}-{v}");
        }
    }

    #[test]
    fn maximal_examples() {
        let path = SimpleGraph::from_edges(3, &[(0, 1), (1, 2)]);
        assert_eq!(maximal_matching(&path).pairs(), vec![(0, 1)]);
        assert!(maximal_matching(&SimpleGraph::new(4)).is_empty());
        assert_eq!(maximal_matching(&complete(4)).len(), 2);
    }

    #[test]
    fn maximum_examples() {
        assert_eq!(maximum_matching(&cycle(5)).len(), 2);
        let p = petersen();
        let m = maximum_matching(&p);
        assert_valid(&p, &m);
        assert_eq!(m.len(), 5);
        assert_eq!(brute_max(&p), 5);
        assert!(maximum_matching(&SimpleGraph::new(0)).is_empty());
    }

    #[test]
    fn greedy_trap_needs_augmentation() {
        // Greedy takes 1-2 first, blocking the perfect matching 0-1, 2-3.
        let g = SimpleGraph::from_edges(4, &[(1, 2), (0, 1), (2, 3)]);
        assert_eq!(maximum_matching(&g).len(), 2);
    }

    #[test]
    fn blossom_shape() {
        // Triangle 0-1-2 with stems 0-3 and 2-4 and a tail 4-5.
        let g = SimpleGraph::from_edges(6, &[(0, 1), (1, 2), (0, 2), (0, 3), (2, 4), (4, 5)]);
        let m = maximum_matching(&g);
        assert_valid(&g, &m);
        assert_eq!(m.len(), 3);
    }

    #[test]
    fn perfect_examples() {
        let edge = SimpleGraph::from_edges(2, &[(0, 1)]);
        assert_eq!(has_perfect_matching(&edge).unwrap().pairs(), vec![(0, 1)]);
        assert!(has_perfect_matching(&cycle(6)).is_some());
        assert!(has_perfect_matching(&complete(5)).is_none());
        assert!(has_perfect_matching(&SimpleGraph::new(0)).is_some());
    }

    #[test]
    fn saturating_examples() {
        let star = SimpleGraph::from_edges(4, &[(0, 1), (0, 2), (0, 3)]);
        assert!(saturating_matching(&star, &[1, 2, 3]).is_none());
        let m = saturating_matching(&star, &[2]).unwrap();
        assert!(m.is_matched(2));
        assert!(saturating_matching(&star, &[]).is_some());
        let c6 = cycle(6);
        let all: Vec<_> = (0..6).collect();
        assert_eq!(saturating_matching(&c6, &all).unwrap().len(), 3);
    }
}
