//! Helpers shared by the integration tests. The exact searches here use only
//! `verify` and never call into `solvers`.
#![allow(dead_code)]

use mlstable::blocking::StabilityBase;
use mlstable::graphalg::SimpleGraph;
use mlstable::reductions::{CnfFormula, Literal};
use mlstable::verify::is_stable;
use mlstable::{Matching, MultilayerInstance, StabilityQuery};
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Calls `visit` on every matching that uses only pairs in which at least one
/// agent approves the other in some layer. Stops early when `visit` returns true.
fn union_matchings(inst: &MultilayerInstance, visit: &mut dyn FnMut(&Matching) -> bool) -> bool {
    // Agents are decided in index order: each either stays single or pairs
    // with a later agent, so earlier decisions are never revisited.
    fn go(a: usize, adj: &[Vec<usize>], m: &mut Matching, visit: &mut dyn FnMut(&Matching) -> bool) -> bool {
        let Some(a) = (a..m.n()).find(|&x| !m.is_matched(x)) else {
            return visit(m);
        };
        for &b in &adj[a] {
            if b > a && !m.is_matched(b) {
                m.add_pair(a, b).unwrap();
                let stop = go(a + 1, adj, m, visit);
                m.unpair(a);
                if stop {
                    return true;
                }
            }
        }
        go(a + 1, adj, m, visit)
    }
    let adj = inst.union_graph();
    let mut m = Matching::empty(inst.n());
    go(0, &adj, &mut m, visit)
}

/// Decides existence exactly.
///
/// For weak and strong stability a pair of agents who never approve each
/// other can be split without creating a blocking pair, so matchings inside
/// the union approval graph suffice. For super stability two agents unhappy
/// in every layer block everywhere, so at most two such agents may remain and
/// if there are two they are paired.
pub fn exact_search(inst: &MultilayerInstance, q: &StabilityQuery) -> Option<Matching> {
    let mut found = None;
    union_matchings(inst, &mut |m| {
        if is_stable(inst, m, q) {
            found = Some(m.clone());
            return true;
        }
        if q.base == StabilityBase::Super {
            let singles: Vec<usize> = (0..m.n()).filter(|&a| !m.is_matched(a)).collect();
            if let [a, b] = singles[..] {
                let mut full = m.clone();
                full.add_pair(a, b).unwrap();
                if is_stable(inst, &full, q) {
                    found = Some(full);
                    return true;
                }
            }
        }
        false
    });
    found
}

/// Number of matchings visited by [`exact_search`] on an unsatisfiable query.
pub fn union_matching_count(inst: &MultilayerInstance) -> usize {
    let mut count = 0;
    union_matchings(inst, &mut |_| {
        count += 1;
        false
    });
    count
}

/// Exact all-layers weak stability on symmetric approvals by branching on
/// violated layer edges: in each layer, every edge needs a happy endpoint.
pub fn weak_all_layers_search(inst: &MultilayerInstance) -> Option<Matching> {
    assert!(inst.is_symmetric());
    fn happy(inst: &MultilayerInstance, m: &Matching, a: usize, i: usize) -> bool {
        m.partner(a).is_some_and(|p| inst.approves(i, a, p))
    }
    fn go(inst: &MultilayerInstance, m: &mut Matching) -> bool {
        // The first layer edge with no happy endpoint.
        let mut violated = None;
        'find: for i in 0..inst.ell() {
            for a in 0..inst.n() {
                for &b in inst.approvals(i, a) {
                    if a < b && !happy(inst, m, a, i) && !happy(inst, m, b, i) {
                        violated = Some((i, a, b));
                        break 'find;
                    }
                }
            }
        }
        let Some((i, a, b)) = violated else {
            return true;
        };
        // Some endpoint that is still single must get a partner it approves in layer i.
        for x in [a, b] {
            if m.is_matched(x) {
                continue;
            }
            for &y in inst.approvals(i, x) {
                if !m.is_matched(y) {
                    m.add_pair(x, y).unwrap();
                    if go(inst, m) {
                        return true;
                    }
                    m.unpair(x);
                }
            }
        }
        false
    }
    let mut m = Matching::empty(inst.n());
    go(inst, &mut m).then_some(m)
}

pub fn brute_force_max_matching(g: &SimpleGraph) -> usize {
    let edges = g.edges();
    fn go(k: usize, edges: &[(usize, usize)], used: &mut Vec<bool>) -> usize {
        if k == edges.len() {
            return 0;
        }
        let mut best = go(k + 1, edges, used);
        let (u, v) = edges[k];
        if !used[u] && !used[v] {
            used[u] = true;
            used[v] = true;
            best = best.max(1 + go(k + 1, edges, used));
            used[u] = false;
            used[v] = false;
        }
        best
    }
    go(0, &edges, &mut vec![false; g.n()])
}

pub fn random_graph(n: usize, p: f64, rng: &mut ChaCha8Rng) -> SimpleGraph {
    let mut g = SimpleGraph::new(n);
    for u in 0..n {
        for v in u + 1..n {
            if rng.random_bool(p) {
                g.add_edge(u, v);
            }
        }
    }
    g
}

/// Every labelled simple graph on `n` vertices.
pub fn all_graphs(n: usize) -> Vec<SimpleGraph> {
    let slots: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    (0u32..1 << slots.len())
        .map(|mask| {
            let edges: Vec<_> = slots
                .iter()
                .enumerate()
                .filter(|&(k, _)| mask >> k & 1 == 1)
                .map(|(_, &e)| e)
                .collect();
            SimpleGraph::from_edges(n, &edges)
        })
        .collect()
}

/// Every formula over three variables whose clauses have exactly three
/// literals (repeats allowed) and in which every literal occurs at most
/// twice. Clauses and formulas are taken as multisets.
pub fn bounded_three_variable_formulas() -> Vec<CnfFormula> {
    let literals: Vec<Literal> = (0..3).flat_map(|v| [Literal::pos(v), Literal::neg(v)]).collect();
    let mut clauses = Vec::new();
    for i in 0..6 {
        for j in i..6 {
            for k in j..6 {
                clauses.push([i, j, k]);
            }
        }
    }
    fn go(
        start: usize,
        clauses: &[[usize; 3]],
        counts: &mut [usize; 6],
        chosen: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if !chosen.is_empty() {
            out.push(chosen.clone());
        }
        for c in start..clauses.len() {
            let mut after = *counts;
            for &l in &clauses[c] {
                after[l] += 1;
            }
            if after.iter().all(|&k| k <= 2) {
                for &l in &clauses[c] {
                    counts[l] += 1;
                }
                chosen.push(c);
                go(c, clauses, counts, chosen, out);
                chosen.pop();
                for &l in &clauses[c] {
                    counts[l] -= 1;
                }
            }
        }
    }
    let mut raw = Vec::new();
    go(0, &clauses, &mut [0; 6], &mut Vec::new(), &mut raw);
    raw.into_iter()
        .map(|f| CnfFormula::new(3, f.iter().map(|&c| clauses[c].map(|l| literals[l])).collect()).unwrap())
        .collect()
}

/// Symmetric approvals on `n` agents in which at most `beta` agents differ
/// between layers. An edge changes both endpoints' lists, so only edges with
/// both endpoints among the chosen agents vary; the rest are shared.
pub fn few_changing_instance(n: usize, ell: usize, beta: usize, p: f64, rng: &mut ChaCha8Rng) -> MultilayerInstance {
    let changing: Vec<usize> = (0..beta.min(n)).map(|_| rng.random_range(0..n)).collect();
    let mut shared = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            if !(changing.contains(&a) && changing.contains(&b)) && rng.random_bool(p) {
                shared.push((a, b));
            }
        }
    }
    let layers: Vec<Vec<(usize, usize)>> = (0..ell)
        .map(|_| {
            let mut edges = shared.clone();
            for a in 0..n {
                for b in a + 1..n {
                    if changing.contains(&a) && changing.contains(&b) && rng.random_bool(p) {
                        edges.push((a, b));
                    }
                }
            }
            edges
        })
        .collect();
    MultilayerInstance::from_symmetric_edges(n, &layers).unwrap()
}

/// Approvals decided by a random relation on at most `types` labels, so the
/// instance has at most that many agent types. Not necessarily symmetric.
pub fn few_types_instance(n: usize, ell: usize, types: usize, p: f64, rng: &mut ChaCha8Rng) -> MultilayerInstance {
    let label: Vec<usize> = (0..n).map(|_| rng.random_range(0..types)).collect();
    let symmetric = rng.random_bool(0.5);
    let approvals = (0..ell)
        .map(|_| {
            let raw: Vec<Vec<bool>> = (0..types)
                .map(|_| (0..types).map(|_| rng.random_bool(p)).collect())
                .collect();
            let rel = |t: usize, s: usize| if symmetric { raw[t.min(s)][t.max(s)] } else { raw[t][s] };
            (0..n)
                .map(|a| (0..n).filter(|&b| b != a && rel(label[a], label[b])).collect())
                .collect()
        })
        .collect();
    MultilayerInstance::new(n, ell, approvals).unwrap()
}
