//! Search exponential only in the number of agents whose approvals vary.
//!
//! With symmetric approvals, an agent outside the changing set B approves the
//! same agents in every layer, and so do its approvers. Only decisions
//! involving B need guessing; the rest is a matching problem on a fixed graph.

use std::collections::HashSet;

use crate::blocking::{stable_layers, StabilityBase};
use crate::error::Result;
use crate::graphalg::{extend_to_maximal, maximum_matching, saturating_matching, SimpleGraph};
use crate::matching::Matching;
use crate::model::{AgentId, MultilayerInstance};
use crate::oracle::MatchingIter;
use crate::verify::{is_stable, Aggregation, StabilityQuery};

use super::{require_symmetric, Algorithm, SolveResult};

/// Complete decision on symmetric approvals for any valid query.
pub fn solve_by_changing(inst: &MultilayerInstance, q: &StabilityQuery) -> Result<SolveResult> {
    require_symmetric(inst)?;
    q.validate(inst.ell())?;
    let n = inst.n();
    let changing = inst.changing_agents().agents;
    let mut in_b = vec![false; n];
    for &b in &changing {
        in_b[b] = true;
    }
    // C_b: agents outside B approved by b (in every layer).
    let c_sets: Vec<Vec<AgentId>> = changing
        .iter()
        .map(|&b| (0..n).filter(|&a| !in_b[a] && inst.approves(0, b, a)).collect())
        .collect();

    let mut found = None;
    'guess: for local in MatchingIter::new(changing.len()) {
        let mut base = Matching::empty(n);
        for (x, y) in local.pairs() {
            base.add_pair(changing[x], changing[y])?;
        }
        // Edges from A \ B to everything not yet matched within B.
        let mut g = SimpleGraph::new(n);
        for a in (0..n).filter(|&a| !in_b[a]) {
            for &b in inst.approvals(0, a) {
                if !base.is_matched(b) {
                    g.add_edge(a, b);
                }
            }
        }
        let candidate = |pairs: &Matching| {
            let mut m = base.clone();
            for (a, b) in pairs.pairs() {
                m.add_pair(a, b).ok()?;
            }
            is_stable(inst, &m, q).then_some(m)
        };
        if q.base == StabilityBase::Weak {
            let unmatched_b: Vec<usize> = (0..changing.len()).filter(|&x| !base.is_matched(changing[x])).collect();
            let mut tried = HashSet::new();
            for happy_mask in 0u64..1 << unmatched_b.len() {
                for c_mask in 0u64..1 << changing.len() {
                    let mut h: Vec<AgentId> = unmatched_b
                        .iter()
                        .enumerate()
                        .filter(|&(k, _)| happy_mask >> k & 1 == 1)
                        .map(|(_, &x)| changing[x])
                        .collect();
                    for (k, c) in c_sets.iter().enumerate() {
                        if c_mask >> k & 1 == 1 {
                            h.extend_from_slice(c);
                        }
                    }
                    h.sort_unstable();
                    h.dedup();
                    if !tried.insert(h.clone()) {
                        continue;
                    }
                    let Some(nm) = saturating_matching(&g, &h) else {
                        continue;
                    };
                    if let Some(m) = candidate(&extend_to_maximal(&g, nm)) {
                        found = Some(m);
                        break 'guess;
                    }
                }
            }
        } else {
            let mut nm = maximum_matching(&g);
            let leftovers: Vec<AgentId> = (0..n).filter(|&a| !base.is_matched(a) && !nm.is_matched(a)).collect();
            for pair in leftovers.chunks_exact(2) {
                nm.add_pair(pair[0], pair[1])?;
            }
            if let Some(m) = candidate(&nm) {
                found = Some(m);
                break 'guess;
            }
        }
    }
    let algorithm = Algorithm::ChangingAgents;
    Ok(match found {
        Some(m) => {
            let mut r = SolveResult::exists(algorithm, m);
            if matches!(q.agg, Aggregation::AllLayers | Aggregation::Global(_)) {
                r.witness_layers = Some(stable_layers(inst, r.matching().unwrap(), q.base));
            }
            r
        }
        None => SolveResult::not_exists(algorithm),
    })
}
