use crate::error::Result;
use crate::graphalg::{has_perfect_matching, SimpleGraph};
use crate::matching::Matching;
use crate::model::MultilayerInstance;

use super::{check_alpha, require_symmetric, Algorithm, SolveResult};

/// All-layers strong stability on symmetric approvals.
///
/// With symmetric approvals a layer is strongly stable iff every agent with a
/// neighbour is happy. So every matched pair must be an edge of each layer or
/// consist of two agents isolated in that layer, and only agents isolated in
/// every layer may stay single. Those agents form a clique of the compatibility
/// graph, so it suffices to drop one of them when `n` is odd and ask for a
/// perfect matching.
pub fn solve_strong_alllayers_symmetric(inst: &MultilayerInstance) -> Result<Option<Matching>> {
    require_symmetric(inst)?;
    let n = inst.n();
    let compatible = |a: usize, b: usize| {
        (0..inst.ell()).all(|i| inst.approves(i, a, b) || (inst.approves_nobody(i, a) && inst.approves_nobody(i, b)))
    };
    let mut keep: Vec<usize> = (0..n).collect();
    if n % 2 == 1 {
        let loner = (0..n).find(|&a| (0..inst.ell()).all(|i| inst.approves_nobody(i, a)));
        match loner {
            Some(a) => keep.retain(|&x| x != a),
            None => return Ok(None),
        }
    }
    let mut h = SimpleGraph::new(keep.len());
    for (x, &a) in keep.iter().enumerate() {
        for (y, &b) in keep.iter().enumerate().skip(x + 1) {
            if compatible(a, b) {
                h.add_edge(x, y);
            }
        }
    }
    let Some(pm) = has_perfect_matching(&h) else {
        return Ok(None);
    };
    let pairs: Vec<_> = pm.pairs().into_iter().map(|(x, y)| (keep[x], keep[y])).collect();
    Ok(Some(Matching::from_pairs(n, &pairs)?))
}

/// Lexicographic `k`-subsets of `0..n`.
pub(crate) fn combinations(n: usize, k: usize) -> impl Iterator<Item = Vec<usize>> {
    let mut current: Option<Vec<usize>> = (k <= n).then(|| (0..k).collect());
    std::iter::from_fn(move || {
        let out = current.clone()?;
        let c = current.as_mut().unwrap();
        match (0..k).rev().find(|&i| c[i] < n - k + i) {
            Some(i) => {
                c[i] += 1;
                for j in i + 1..k {
                    c[j] = c[j - 1] + 1;
                }
            }
            None => current = None,
        }
        Some(out)
    })
}

/// Alpha-global strong stability on symmetric approvals, trying every
/// alpha-subset of layers with the all-layers algorithm.
pub fn solve_strong_global_symmetric(inst: &MultilayerInstance, alpha: usize) -> Result<SolveResult> {
    require_symmetric(inst)?;
    check_alpha(inst, alpha)?;
    for subset in combinations(inst.ell(), alpha) {
        let sub = inst.restrict_layers(&subset)?;
        if let Some(m) = solve_strong_alllayers_symmetric(&sub)? {
            let mut r = SolveResult::exists(Algorithm::StrongGlobalSymmetric, m);
            r.witness_layers = Some(subset);
            return Ok(r);
        }
    }
    Ok(SolveResult::not_exists(Algorithm::StrongGlobalSymmetric))
}
