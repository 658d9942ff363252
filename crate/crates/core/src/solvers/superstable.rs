use std::collections::HashMap;

use crate::blocking::{stable_in_layer, StabilityBase};
use crate::error::{Error, Result};
use crate::matching::Matching;
use crate::model::{AgentId, MultilayerInstance};
use crate::oracle::MatchingIter;
use crate::verify::{is_stable, pair_satisfied, Aggregation, StabilityQuery};

use super::{check_alpha, mutual_threshold_graph, require_symmetric, Algorithm, SolveResult};

/// Every matching that is super stable in `layer`; never more than three.
///
/// Mutually approving pairs are forced, and at most three agents may be left
/// over (each leftover unit contains an unhappy agent, and two unhappy
/// non-partners block). Candidates over the leftovers are checked against the
/// whole layer, which also covers one-sided approvals towards leftover agents.
pub fn layer_superstable_set(inst: &MultilayerInstance, layer: usize) -> Result<Vec<Matching>> {
    if layer >= inst.ell() {
        return Err(Error::LayerOutOfRange { layer, ell: inst.ell() });
    }
    let n = inst.n();
    let mut forced = Matching::empty(n);
    for a in 0..n {
        for &b in inst.approvals(layer, a) {
            if a < b && inst.approves(layer, b, a) && forced.add_pair(a, b).is_err() {
                return Ok(Vec::new());
            }
        }
    }
    let rest: Vec<AgentId> = (0..n).filter(|&a| !forced.is_matched(a)).collect();
    if rest.len() > 3 {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    for local in MatchingIter::new(rest.len()) {
        let mut m = forced.clone();
        for (x, y) in local.pairs() {
            m.add_pair(rest[x], rest[y])?;
        }
        if stable_in_layer(inst, &m, layer, StabilityBase::Super) {
            out.push(m);
        }
    }
    Ok(out)
}

/// Alpha-global super stability: a matching super stable in at least alpha
/// layers, found by counting identical per-layer candidates.
pub fn solve_super_global(inst: &MultilayerInstance, alpha: usize) -> Result<SolveResult> {
    check_alpha(inst, alpha)?;
    let mut index: HashMap<Vec<AgentId>, usize> = HashMap::new();
    let mut candidates: Vec<(Matching, Vec<usize>)> = Vec::new();
    for layer in 0..inst.ell() {
        for m in layer_superstable_set(inst, layer)? {
            let slot = *index.entry(m.encode()).or_insert_with(|| {
                candidates.push((m, Vec::new()));
                candidates.len() - 1
            });
            candidates[slot].1.push(layer);
        }
    }
    Ok(match candidates.into_iter().find(|(_, layers)| layers.len() >= alpha) {
        Some((m, layers)) => {
            let mut r = SolveResult::exists(Algorithm::SuperGlobal, m);
            r.witness_layers = Some(layers);
            r
        }
        None => SolveResult::not_exists(Algorithm::SuperGlobal),
    })
}

/// Forced part of any high-alpha super stable matching: the threshold graph
/// at `ell - alpha + 1`, which must itself be a matching. Returns it with the
/// agents it leaves uncovered, or `None` if some agent has two forced partners.
fn forced_skeleton(inst: &MultilayerInstance, alpha: usize) -> Option<(Matching, Vec<AgentId>)> {
    let g = mutual_threshold_graph(inst, inst.ell() - alpha + 1);
    if (0..inst.n()).any(|a| g.degree(a) >= 2) {
        return None;
    }
    let m = Matching::from_pairs(inst.n(), &g.edges()).expect("degrees are at most one");
    let free = (0..inst.n()).filter(|&a| g.degree(a) == 0).collect();
    Some((m, free))
}

fn require_high_alpha(
    inst: &MultilayerInstance,
    alpha: usize,
    num: usize,
    den: usize,
    requirement: &'static str,
) -> Result<()> {
    check_alpha(inst, alpha)?;
    if alpha * den <= inst.ell() * num {
        return Err(Error::AlphaTooLow {
            alpha,
            ell: inst.ell(),
            requirement,
        });
    }
    Ok(())
}

/// Forced skeleton plus the unique completion: at most two uncovered agents,
/// paired if there are two.
fn skeleton_candidate(inst: &MultilayerInstance, q: &StabilityQuery, algorithm: Algorithm) -> SolveResult {
    let alpha = q.alpha(inst.ell());
    let Some((mut m, free)) = forced_skeleton(inst, alpha) else {
        return SolveResult::not_exists(algorithm);
    };
    match free.as_slice() {
        [] | [_] => {}
        &[a, b] => m.add_pair(a, b).expect("both agents are uncovered"),
        _ => return SolveResult::not_exists(algorithm),
    }
    if is_stable(inst, &m, q) {
        SolveResult::exists(algorithm, m)
    } else {
        SolveResult::not_exists(algorithm)
    }
}

/// Alpha-individual super stability for symmetric approvals and alpha > ell/2.
pub fn solve_super_individual_highalpha(inst: &MultilayerInstance, alpha: usize) -> Result<SolveResult> {
    require_symmetric(inst)?;
    require_high_alpha(inst, alpha, 1, 2, "alpha > ell/2")?;
    let q = StabilityQuery::new(StabilityBase::Super, Aggregation::Individual(alpha));
    Ok(skeleton_candidate(inst, &q, Algorithm::SuperIndividualHighAlpha))
}

/// Alpha-pair super stability for symmetric approvals and alpha > 2 ell/3.
pub fn solve_super_pair_veryhighalpha(inst: &MultilayerInstance, alpha: usize) -> Result<SolveResult> {
    require_symmetric(inst)?;
    require_high_alpha(inst, alpha, 2, 3, "alpha > 2*ell/3")?;
    let q = StabilityQuery::new(StabilityBase::Super, Aggregation::Pair(alpha));
    Ok(skeleton_candidate(inst, &q, Algorithm::SuperPairVeryHighAlpha))
}

/// Alpha-pair super stability for symmetric approvals and alpha > ell/2.
///
/// After the forced skeleton at most `2^(ell+1)` agents remain uncovered in
/// any yes-instance; they are matched among themselves by backtracking, each
/// pair being checked as soon as both members are settled.
pub fn solve_super_pair_fpt(inst: &MultilayerInstance, alpha: usize) -> Result<SolveResult> {
    require_symmetric(inst)?;
    require_high_alpha(inst, alpha, 1, 2, "alpha > ell/2")?;
    let algorithm = Algorithm::SuperPairFpt;
    let Some((m, free)) = forced_skeleton(inst, alpha) else {
        return Ok(SolveResult::not_exists(algorithm));
    };
    let kernel_bound = 1u128.checked_shl(inst.ell() as u32 + 1).unwrap_or(u128::MAX);
    if free.len() as u128 > kernel_bound {
        return Ok(SolveResult::not_exists(algorithm));
    }
    let q = StabilityQuery::new(StabilityBase::Super, Aggregation::Pair(alpha));
    Ok(SolveResult::from_option(
        algorithm,
        complete_locally(inst, &q, m, &free),
    ))
}

/// Backtracking completion of `m` over the agents in `free` for a pair or
/// individual query. Agents outside `free` are treated as settled.
pub(crate) fn complete_locally(
    inst: &MultilayerInstance,
    q: &StabilityQuery,
    mut m: Matching,
    free: &[AgentId],
) -> Option<Matching> {
    let n = inst.n();
    let mut settled = vec![true; n];
    for &a in free {
        settled[a] = false;
    }
    let settled_agents: Vec<AgentId> = (0..n).filter(|&a| settled[a]).collect();
    for (i, &a) in settled_agents.iter().enumerate() {
        for &b in &settled_agents[i + 1..] {
            if !m.contains(a, b) && !pair_satisfied(inst, &m, a, b, q) {
                return None;
            }
        }
    }
    fn consistent(
        inst: &MultilayerInstance,
        q: &StabilityQuery,
        m: &Matching,
        settled: &[bool],
        new: &[AgentId],
    ) -> bool {
        new.iter().all(|&a| {
            (0..settled.len())
                .filter(|&b| settled[b] && b != a && !m.contains(a, b))
                .all(|b| pair_satisfied(inst, m, a, b, q))
        })
    }
    fn go(
        inst: &MultilayerInstance,
        q: &StabilityQuery,
        m: &mut Matching,
        settled: &mut Vec<bool>,
        free: &[AgentId],
    ) -> bool {
        let Some(pos) = free.iter().position(|&a| !settled[a]) else {
            return true;
        };
        let a = free[pos];
        settled[a] = true;
        if consistent(inst, q, m, settled, &[a]) && go(inst, q, m, settled, free) {
            return true;
        }
        for &b in &free[pos + 1..] {
            if settled[b] {
                continue;
            }
            m.add_pair(a, b).expect("both agents are unsettled");
            settled[b] = true;
            if consistent(inst, q, m, settled, &[a, b]) && go(inst, q, m, settled, free) {
                return true;
            }
            settled[b] = false;
            m.unpair(a);
        }
        settled[a] = false;
        false
    }
    go(inst, q, &mut m, &mut settled, free).then_some(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::fixtures::{ex1, ex2};

    fn m_ex2() -> Matching {
        Matching::from_pairs(4, &[(0, 1), (2, 3)]).unwrap()
    }

    #[test]
    fn per_layer_sets() {
        assert_eq!(layer_superstable_set(&ex2(), 0).unwrap(), vec![m_ex2()]);
        let two_arcs = MultilayerInstance::from_symmetric_edges(3, &[vec![(0, 1), (1, 2)]]).unwrap();
        assert!(layer_superstable_set(&two_arcs, 0).unwrap().is_empty());
        let empty = MultilayerInstance::empty(4, 1).unwrap();
        assert!(layer_superstable_set(&empty, 0).unwrap().is_empty());
    }

    #[test]
    fn one_sided_arc_into_leftovers() {
        // No mutual arcs, so all three agents are leftovers; the one-sided
        // arc 0 -> 1 decides which completions survive.
        let inst = MultilayerInstance::new(3, 1, vec![vec![vec![1], vec![], vec![]]]).unwrap();
        let got = layer_superstable_set(&inst, 0).unwrap();
        let oracle = crate::oracle::oracle_layer_superstable(&inst, 0, &Default::default()).unwrap();
        assert_eq!(got, oracle);
    }

    #[test]
    fn global_examples() {
        let r = solve_super_global(&ex2(), 2).unwrap();
        assert_eq!(r.matching(), Some(&m_ex2()));
        assert_eq!(r.witness_layers, Some(vec![0, 1]));
        assert!(solve_super_global(&ex1(), 1).unwrap().matching().is_some());
        assert_eq!(solve_super_global(&ex1(), 2).unwrap().decided(), Some(false));
    }

    #[test]
    fn high_alpha_examples() {
        assert_eq!(
            solve_super_individual_highalpha(&ex2(), 2).unwrap().decided(),
            Some(false)
        );
        let pm = MultilayerInstance::from_symmetric_edges(4, &[vec![(0, 1), (2, 3)], vec![(0, 1), (2, 3)]]).unwrap();
        assert_eq!(
            solve_super_individual_highalpha(&pm, 2).unwrap().matching(),
            Some(&m_ex2())
        );
        assert_eq!(
            solve_super_pair_veryhighalpha(&pm, 2).unwrap().matching(),
            Some(&m_ex2())
        );
        let star = MultilayerInstance::from_symmetric_edges(3, &[vec![(0, 1), (0, 2)], vec![(0, 1), (0, 2)]]).unwrap();
        assert_eq!(
            solve_super_individual_highalpha(&star, 2).unwrap().decided(),
            Some(false)
        );
        assert!(matches!(
            solve_super_individual_highalpha(&ex2(), 1),
            Err(Error::AlphaTooLow { .. })
        ));
    }

    #[test]
    fn embedded_split_pairs_instance() {
        let inst = MultilayerInstance::from_symmetric_edges(4, &[vec![(0, 1)], vec![(2, 3)], vec![]]).unwrap();
        assert_eq!(solve_super_pair_veryhighalpha(&inst, 3).unwrap().decided(), Some(false));
        assert_eq!(solve_super_pair_fpt(&inst, 3).unwrap().decided(), Some(false));
    }

    #[test]
    fn kernel_bound_rejects_without_search() {
        let inst = MultilayerInstance::empty(9, 2).unwrap();
        assert_eq!(solve_super_pair_fpt(&inst, 2).unwrap().decided(), Some(false));
    }
}
