use crate::blocking::StabilityBase;
use crate::error::{Error, Result};
use crate::graphalg::SimpleGraph;
use crate::matching::Matching;
use crate::model::{AgentId, MultilayerInstance};
use crate::verify::{Aggregation, StabilityQuery};

use super::GeneratedInstance;

/// Independent set of size k as k-global strong stability.
///
/// Each edge e = {v_i, v_j} (i < j) gets agents e¹..e⁴ and each vertex a
/// layer. In layer i the pairs e¹e² and e³e⁴ approve each other, in layer j
/// the pairs e¹e³ and e²e⁴. A matching can satisfy both layers of an edge
/// only by matching e¹ twice, so the stable layers form an independent set.
#[derive(Debug, Clone)]
pub struct IndependentSetReduction {
    pub generated: GeneratedInstance,
    pub edges: Vec<(usize, usize)>,
    pub k: usize,
}

pub fn reduce_is_to_global_strong(g: &SimpleGraph, k: usize) -> Result<IndependentSetReduction> {
    let nu = g.n();
    if k == 0 || k > nu {
        return Err(Error::BadParameters(format!("need 1 <= k <= {nu}, got k={k}")));
    }
    let edges = g.edges();
    let mut layers = vec![Vec::new(); nu];
    let mut names = Vec::with_capacity(4 * edges.len());
    for (e, &(i, j)) in edges.iter().enumerate() {
        let [e1, e2, e3, e4] = [4 * e, 4 * e + 1, 4 * e + 2, 4 * e + 3];
        layers[i].extend([(e1, e2), (e3, e4)]);
        layers[j].extend([(e1, e3), (e2, e4)]);
        for r in 1..=4 {
            names.push(format!("e{}_{}_{r}", i + 1, j + 1));
        }
    }
    let instance = MultilayerInstance::from_symmetric_edges(4 * edges.len(), &layers)?;
    Ok(IndependentSetReduction {
        generated: GeneratedInstance {
            instance,
            query: StabilityQuery::new(StabilityBase::Strong, Aggregation::Global(k)),
            names,
        },
        edges,
        k,
    })
}

impl IndependentSetReduction {
    /// For an independent set, the matching of all pairs approving each other
    /// in one of its layers, plus that layer set (0-based). `None` if `set`
    /// is not independent or too small.
    pub fn forward(&self, set: &[usize]) -> Option<(Matching, Vec<usize>)> {
        let mut layers: Vec<usize> = set.to_vec();
        layers.sort_unstable();
        layers.dedup();
        if layers.len() < self.k {
            return None;
        }
        layers.truncate(self.k);
        let inst = &self.generated.instance;
        let mut pairs: Vec<(AgentId, AgentId)> = Vec::new();
        for &i in &layers {
            for a in 0..inst.n() {
                pairs.extend(inst.approvals(i, a).iter().filter(|&&b| a < b).map(|&b| (a, b)));
            }
        }
        let m = Matching::from_pairs(inst.n(), &pairs).ok()?;
        Some((m, layers))
    }

    /// The vertices whose layers are in `stable_layers`.
    pub fn backward(&self, stable_layers: &[usize]) -> Vec<usize> {
        stable_layers.to_vec()
    }
}

/// An independent set of size `k`, by trying subsets in increasing mask order.
pub fn brute_force_independent_set(g: &SimpleGraph, k: usize) -> Option<Vec<usize>> {
    let n = g.n();
    assert!(n < 32, "brute force is for tiny graphs");
    (0u32..1 << n)
        .filter(|mask| mask.count_ones() as usize == k)
        .map(|mask| (0..n).filter(|&v| mask >> v & 1 == 1).collect::<Vec<_>>())
        .find(|set| set.iter().all(|&u| set.iter().all(|&v| !g.has_edge(u, v))))
}
