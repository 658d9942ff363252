use crate::error::{Error, Result};
use crate::graphalg::{maximal_matching, SimpleGraph};
use crate::matching::Matching;
use crate::model::MultilayerInstance;

use super::check_alpha;

/// Edge `{a, b}` iff each of `a`, `b` approves the other in at least
/// `threshold` layers (the layers may differ per direction).
pub fn approval_threshold_graph(inst: &MultilayerInstance, threshold: usize) -> SimpleGraph {
    let n = inst.n();
    let mut g = SimpleGraph::new(n);
    for a in 0..n {
        for b in a + 1..n {
            if inst.approval_count(a, b) >= threshold && inst.approval_count(b, a) >= threshold {
                g.add_edge(a, b);
            }
        }
    }
    g
}

/// Edge `{a, b}` iff `a` and `b` approve each other in at least `threshold` layers.
pub fn mutual_threshold_graph(inst: &MultilayerInstance, threshold: usize) -> SimpleGraph {
    let n = inst.n();
    let mut g = SimpleGraph::new(n);
    for a in 0..n {
        for b in a + 1..n {
            if inst.mutual_count(a, b) >= threshold {
                g.add_edge(a, b);
            }
        }
    }
    g
}

/// An alpha-individually (hence alpha-pair) weakly stable matching, which
/// always exists when `alpha <= ceil(ell / 2)`.
///
/// A maximal matching of the approval threshold graph at `ell - alpha + 1`
/// works: an unmatched pair is either missing an edge, so one side disapproves
/// the other in `alpha` layers, or has a member that is happy in at least
/// `ell - alpha + 1 >= alpha` layers.
pub fn solve_weak_lowalpha(inst: &MultilayerInstance, alpha: usize) -> Result<Matching> {
    check_alpha(inst, alpha)?;
    let bound = inst.ell().div_ceil(2);
    if alpha > bound {
        return Err(Error::AlphaTooHigh {
            alpha,
            ell: inst.ell(),
            bound,
        });
    }
    let g = approval_threshold_graph(inst, inst.ell() - alpha + 1);
    Ok(maximal_matching(&g))
}
