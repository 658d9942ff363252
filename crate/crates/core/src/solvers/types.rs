//! Search over type graphs, exponential only in the number of agent types.
//!
//! Agents of one type are interchangeable, so whether a matching is stable
//! depends only on which type pairs it uses and how often. Every type pair
//! {t, t'} (loops included) is labelled: unused, used once, or used at least
//! twice. A small witness instance with one copy of each once-used pair and
//! two copies of each repeated pair has exactly the same kinds of unmatched
//! pairs as any matching realizing the labelling, so it decides stability.
//! The two copies matter: agents from different pairs of the same type pair
//! can block each other.

use crate::blocking::stable_layers;
use crate::error::Result;
use crate::graphalg::{has_perfect_matching, SimpleGraph};
use crate::matching::Matching;
use crate::model::{AgentId, MultilayerInstance};
use crate::verify::{is_stable, Aggregation, StabilityQuery};

use super::{Algorithm, SolveResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Use {
    Never,
    Once,
    Repeated,
}

struct TypeView<'a> {
    inst: &'a MultilayerInstance,
    blocks: Vec<Vec<AgentId>>,
    type_of: Vec<usize>,
    /// Candidate type pairs `(t, s)` with `t <= s`.
    edges: Vec<(usize, usize)>,
}

impl<'a> TypeView<'a> {
    fn new(inst: &'a MultilayerInstance) -> Self {
        let part = inst.agent_types();
        let tau = part.tau();
        let edges = (0..tau).flat_map(|t| (t..tau).map(move |s| (t, s))).collect();
        Self {
            inst,
            blocks: part.blocks,
            type_of: part.type_of,
            edges,
        }
    }

    /// Whether an agent of type `t` approves a different agent of type `s`.
    fn approves(&self, layer: usize, t: usize, s: usize) -> bool {
        if t != s {
            self.inst.approves(layer, self.blocks[t][0], self.blocks[s][0])
        } else {
            self.blocks[t].len() >= 2 && self.inst.approves(layer, self.blocks[t][0], self.blocks[t][1])
        }
    }

    /// Agents consumed per endpoint type: one or two pairs, loops counting twice.
    fn demand(&self, e: usize, label: Use) -> usize {
        let per_pair = if self.edges[e].0 == self.edges[e].1 { 2 } else { 1 };
        match label {
            Use::Never => 0,
            Use::Once => per_pair,
            Use::Repeated => 2 * per_pair,
        }
    }

    fn add(&self, usage: &mut [usize], e: usize, label: Use, sign: isize) {
        let (t, s) = self.edges[e];
        let d = self.demand(e, label);
        let apply = |u: &mut usize, k: usize| *u = (*u as isize + sign * k as isize) as usize;
        if t == s {
            apply(&mut usage[t], d);
        } else {
            apply(&mut usage[t], d);
            apply(&mut usage[s], d);
        }
    }

    /// The witness instance for a labelling, with its (perfect) matching.
    fn witness(&self, labels: &[Use]) -> (MultilayerInstance, Matching) {
        let mut types = Vec::new();
        let mut pairs = Vec::new();
        for (e, &label) in labels.iter().enumerate() {
            let copies = match label {
                Use::Never => 0,
                Use::Once => 1,
                Use::Repeated => 2,
            };
            let (t, s) = self.edges[e];
            for _ in 0..copies {
                pairs.push((types.len(), types.len() + 1));
                types.push(t);
                types.push(s);
            }
        }
        let nj = types.len();
        let approvals = (0..self.inst.ell())
            .map(|i| {
                (0..nj)
                    .map(|x| {
                        (0..nj)
                            .filter(|&y| y != x && self.approves(i, types[x], types[y]))
                            .collect()
                    })
                    .collect()
            })
            .collect();
        let j = MultilayerInstance::new(nj, self.inst.ell(), approvals).expect("witness instance is well formed");
        let m = Matching::from_pairs(nj, &pairs).expect("witness pairs are disjoint");
        (j, m)
    }

    /// A perfect matching of the instance using once-labelled type pairs
    /// exactly once and otherwise only repeated-labelled ones.
    fn realize(&self, labels: &[Use]) -> Option<Matching> {
        let n = self.inst.n();
        let mut next = vec![0usize; self.blocks.len()];
        let take = |t: usize, next: &mut Vec<usize>| {
            let a = self.blocks[t][next[t]];
            next[t] += 1;
            a
        };
        let mut m = Matching::empty(n);
        for (e, &label) in labels.iter().enumerate() {
            if label == Use::Once {
                let (t, s) = self.edges[e];
                let a = take(t, &mut next);
                let b = take(s, &mut next);
                m.add_pair(a, b).ok()?;
            }
        }
        let rest: Vec<AgentId> = (0..n).filter(|&a| !m.is_matched(a)).collect();
        let repeated = |t: usize, s: usize| {
            let (t, s) = (t.min(s), t.max(s));
            let e = self
                .edges
                .iter()
                .position(|&x| x == (t, s))
                .expect("type pair is listed");
            labels[e] == Use::Repeated
        };
        let mut g = SimpleGraph::new(rest.len());
        for (x, &a) in rest.iter().enumerate() {
            for (y, &b) in rest.iter().enumerate().skip(x + 1) {
                if repeated(self.type_of[a], self.type_of[b]) {
                    g.add_edge(x, y);
                }
            }
        }
        let pm = has_perfect_matching(&g)?;
        for (x, y) in pm.pairs() {
            m.add_pair(rest[x], rest[y]).ok()?;
        }
        Some(m)
    }
}

/// Complete decision for any valid query, exponential in the number of agent types.
///
/// Adding pairs between single agents never hurts stability, so some stable
/// matching leaves at most one agent single; an isolated dummy agent for odd
/// `n` then lets the search look for perfect matchings only.
pub fn solve_by_types(inst: &MultilayerInstance, q: &StabilityQuery) -> Result<SolveResult> {
    q.validate(inst.ell())?;
    let n = inst.n();
    let algorithm = Algorithm::AgentTypes;
    let global = matches!(q.agg, Aggregation::AllLayers | Aggregation::Global(_));
    let finish = |m: Matching| {
        let mut r = SolveResult::exists(algorithm, m);
        if global {
            r.witness_layers = Some(stable_layers(inst, r.matching().unwrap(), q.base));
        }
        r
    };
    if n == 0 {
        let m = Matching::empty(0);
        return Ok(if is_stable(inst, &m, q) {
            finish(m)
        } else {
            SolveResult::not_exists(algorithm)
        });
    }
    let padded = if n % 2 == 1 {
        inst.with_isolated_agents(1)
    } else {
        inst.clone()
    };
    let view = TypeView::new(&padded);
    let sizes: Vec<usize> = view.blocks.iter().map(Vec::len).collect();
    let mut labels = vec![Use::Never; view.edges.len()];
    let mut usage = vec![0usize; sizes.len()];

    fn search(
        view: &TypeView,
        sizes: &[usize],
        labels: &mut Vec<Use>,
        usage: &mut Vec<usize>,
        e: usize,
        found: &mut dyn FnMut(&TypeView, &[Use]) -> bool,
    ) -> bool {
        if e == labels.len() {
            if usage.contains(&0) {
                return false;
            }
            return found(view, labels);
        }
        for label in [Use::Never, Use::Once, Use::Repeated] {
            view.add(usage, e, label, 1);
            let (t, s) = view.edges[e];
            if usage[t] <= sizes[t] && usage[s] <= sizes[s] {
                labels[e] = label;
                if search(view, sizes, labels, usage, e + 1, found) {
                    return true;
                }
            }
            view.add(usage, e, label, -1);
        }
        labels[e] = Use::Never;
        false
    }

    let mut result = None;
    let mut accept = |view: &TypeView, labels: &[Use]| {
        let (j, mj) = view.witness(labels);
        if !is_stable(&j, &mj, q) {
            return false;
        }
        let Some(m) = view.realize(labels) else {
            return false;
        };
        let m = m.truncate(n);
        if is_stable(inst, &m, q) {
            result = Some(m);
            true
        } else {
            false
        }
    };
    search(&view, &sizes, &mut labels, &mut usage, 0, &mut accept);
    Ok(match result {
        Some(m) => finish(m),
        None => SolveResult::not_exists(algorithm),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::blocking::StabilityBase;
    use crate::model::fixtures::ex2;
    use crate::oracle::{oracle_solve, OracleBudget};

    fn agrees_with_oracle(inst: &MultilayerInstance) {
        for q in StabilityQuery::all_valid(inst.ell()) {
            let r = solve_by_types(inst, &q).unwrap();
            let truth = oracle_solve(inst, &q, &OracleBudget::default()).unwrap();
            assert_eq!(r.decided(), Some(truth.is_some()), "query {q}");
            if let Some(m) = r.matching() {
                assert!(is_stable(inst, m, &q));
            }
        }
    }

    #[test]
    fn split_pairs_instance() {
        let q = StabilityQuery::new(StabilityBase::Super, Aggregation::AllLayers);
        assert!(solve_by_types(&ex2(), &q).unwrap().matching().is_some());
        agrees_with_oracle(&ex2());
    }

    #[test]
    fn complete_single_type() {
        let edges: Vec<_> = (0..6).flat_map(|a| (a + 1..6).map(move |b| (a, b))).collect();
        let inst = MultilayerInstance::from_symmetric_edges(6, &[edges]).unwrap();
        assert_eq!(inst.agent_types().tau(), 1);
        let q = StabilityQuery::new(StabilityBase::Weak, Aggregation::AllLayers);
        let m = solve_by_types(&inst, &q).unwrap().matching().cloned().unwrap();
        assert_eq!(m.len(), 3);
    }

    #[test]
    fn same_profile_pairs_are_checked() {
        // Agents 0 and 1 approve each other; 2 and 3 approve nobody. Matching
        // 0-2 and 1-3 uses one type pair twice, and then {0, 1} blocks.
        let inst = MultilayerInstance::from_symmetric_edges(4, &[vec![(0, 1)]]).unwrap();
        assert_eq!(inst.agent_types().tau(), 2);
        agrees_with_oracle(&inst);
    }

    #[test]
    fn odd_agent_count() {
        let inst = MultilayerInstance::from_symmetric_edges(5, &[vec![(0, 1), (0, 2), (1, 2)], vec![(3, 4)]]).unwrap();
        agrees_with_oracle(&inst);
        let empty = MultilayerInstance::empty(0, 2).unwrap();
        let q = StabilityQuery::new(StabilityBase::Super, Aggregation::AllLayers);
        assert!(solve_by_types(&empty, &q).unwrap().matching().is_some());
    }
}
