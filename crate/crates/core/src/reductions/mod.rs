//! Instance generators: random instances and hardness constructions.
//!
//! Each construction maps a source problem (SAT, independent set, degree-one
//! partition, or a two-layer all-layers instance) to a stability question
//! with the same answer. The structs returned carry the maps between source
//! solutions and matchings, and small brute-force solvers for the source
//! problems live next to them as test oracles.

mod degree_partition;
mod independent_set;
mod sat;

pub use degree_partition::{
    brute_force_degree_partition, reduce_degreepartition_to_pair_super, DegreePartitionReduction,
};
pub use independent_set::{brute_force_independent_set, reduce_is_to_global_strong, IndependentSetReduction};
pub use sat::{brute_force_sat, reduce_sat_to_alllayers_weak, CnfFormula, Literal, SatReduction};

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::blocking::StabilityBase;
use crate::error::{Error, Result};
use crate::graphalg::SimpleGraph;
use crate::matching::Matching;
use crate::model::{AgentId, MultilayerInstance};
use crate::verify::{Aggregation, StabilityQuery};

/// A generated instance together with the question it encodes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratedInstance {
    pub instance: MultilayerInstance,
    pub query: StabilityQuery,
    /// Display names, one per agent.
    pub names: Vec<String>,
}

/// Random approvals: every arc (or, if `symmetric`, every unordered pair) is
/// present independently with probability `p` in each layer. With
/// `bipartite`, agents `0..n/2` and `n/2..n` form the sides and only cross
/// arcs are drawn.
pub fn gen_random(
    n: usize,
    ell: usize,
    p: f64,
    symmetric: bool,
    bipartite: bool,
    seed: u64,
) -> Result<MultilayerInstance> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::BadParameters(format!("probability {p} is outside [0, 1]")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let half = n / 2;
    let allowed = |a: usize, b: usize| a != b && (!bipartite || (a < half) != (b < half));
    let mut approvals = vec![vec![Vec::new(); n]; ell];
    for layer in approvals.iter_mut() {
        for a in 0..n {
            for b in 0..n {
                if !allowed(a, b) || (symmetric && b < a) {
                    continue;
                }
                if rng.random_bool(p) {
                    layer[a].push(b);
                    if symmetric {
                        layer[b].push(a);
                    }
                }
            }
        }
    }
    MultilayerInstance::new(n, ell, approvals)
}

/// Repeats layer `i` `multiplicities[i]` times, keeping the layer order.
pub fn copy_layers(inst: &MultilayerInstance, multiplicities: &[usize]) -> Result<MultilayerInstance> {
    if multiplicities.len() != inst.ell() {
        return Err(Error::BadParameters(format!(
            "{} multiplicities for {} layers",
            multiplicities.len(),
            inst.ell()
        )));
    }
    let approvals: Vec<_> = multiplicities
        .iter()
        .enumerate()
        .flat_map(|(i, &k)| std::iter::repeat_n(inst.layer(i).to_vec(), k))
        .collect();
    if approvals.is_empty() {
        return Err(Error::BadParameters("at least one layer must be kept".into()));
    }
    MultilayerInstance::new(inst.n(), approvals.len(), approvals)
}

/// Appends `k` layers in which nobody approves anybody.
pub fn append_empty_layers(inst: &MultilayerInstance, k: usize) -> MultilayerInstance {
    let mut approvals = inst.to_approvals();
    approvals.extend(std::iter::repeat_n(vec![Vec::new(); inst.n()], k));
    MultilayerInstance::new(inst.n(), approvals.len(), approvals).expect("empty layers are valid")
}

/// Parses "n m" followed by `m` lines "u v" with 1-indexed vertices.
pub fn parse_graph(text: &str) -> Result<SimpleGraph> {
    let mut numbers = text
        .lines()
        .map(|l| l.split('#').next().unwrap_or(""))
        .flat_map(str::split_whitespace)
        .map(|tok| {
            tok.parse::<usize>()
                .map_err(|_| Error::Parse(format!("bad integer `{tok}` in graph")))
        });
    let mut next = |what: &str| {
        numbers
            .next()
            .unwrap_or_else(|| Err(Error::Parse(format!("graph ended before {what}"))))
    };
    let n = next("the vertex count")?;
    let m = next("the edge count")?;
    let mut g = SimpleGraph::new(n);
    for _ in 0..m {
        let u = next("an edge endpoint")?;
        let v = next("an edge endpoint")?;
        if u == 0 || v == 0 || u > n || v > n || u == v {
            return Err(Error::Parse(format!("invalid edge {u} {v} for {n} vertices")));
        }
        g.add_edge(u - 1, v - 1);
    }
    Ok(g)
}

/// Two-layer all-layers weak stability as alpha-global weak stability on
/// `ell` layers.
///
/// Agents a*, b* approve each other in layers 1 and 2; for each layer `i` in
/// `3..=ell-alpha+2`, a conflict agent c_i approves a* in layer `i` only.
/// Stability in any conflict layer rules out every other layer except the
/// `alpha - 2` trailing ones, so only the two original layers can complete a
/// set of `alpha`.
#[derive(Debug, Clone)]
pub struct PaddedGlobal {
    pub generated: GeneratedInstance,
    /// Number of agents in the source instance; they keep their ids.
    pub source_agents: usize,
    pub a_star: AgentId,
    pub b_star: AgentId,
}

pub fn pad_global_weak(inst2: &MultilayerInstance, ell: usize, alpha: usize) -> Result<PaddedGlobal> {
    if inst2.ell() != 2 {
        return Err(Error::BadParameters(format!(
            "source has {} layers, expected 2",
            inst2.ell()
        )));
    }
    if !inst2.is_symmetric() {
        return Err(Error::BadParameters("source approvals must be symmetric".into()));
    }
    if alpha < 2 || alpha > ell {
        return Err(Error::BadParameters(format!(
            "need 2 <= alpha <= ell, got alpha={alpha}, ell={ell}"
        )));
    }
    let n0 = inst2.n();
    let (a_star, b_star) = (n0, n0 + 1);
    let conflict_layers: Vec<usize> = (2..ell - alpha + 2).collect();
    let n = n0 + 2 + conflict_layers.len();
    let mut layers: Vec<Vec<(AgentId, AgentId)>> = vec![Vec::new(); ell];
    for (i, layer) in layers.iter_mut().enumerate().take(2) {
        for a in 0..n0 {
            for &b in inst2.approvals(i, a) {
                if a < b {
                    layer.push((a, b));
                }
            }
        }
        layer.push((a_star, b_star));
    }
    for (k, &i) in conflict_layers.iter().enumerate() {
        layers[i].push((a_star, n0 + 2 + k));
    }
    let instance = MultilayerInstance::from_symmetric_edges(n, &layers)?;
    let mut names: Vec<String> = (0..n0).map(|a| format!("s{}", a + 1)).collect();
    names.push("a*".into());
    names.push("b*".into());
    names.extend(conflict_layers.iter().map(|&i| format!("c{}", i + 1)));
    Ok(PaddedGlobal {
        generated: GeneratedInstance {
            instance,
            query: StabilityQuery::new(StabilityBase::Weak, Aggregation::Global(alpha)),
            names,
        },
        source_agents: n0,
        a_star,
        b_star,
    })
}

impl PaddedGlobal {
    /// Extends an all-layers stable source matching by {a*, b*}.
    pub fn forward(&self, m: &Matching) -> Result<Matching> {
        let mut pairs = m.pairs();
        pairs.push((self.a_star, self.b_star));
        Matching::from_pairs(self.generated.instance.n(), &pairs)
    }

    /// Restricts a target matching to the source agents.
    pub fn backward(&self, m: &Matching) -> Matching {
        m.truncate(self.source_agents)
    }
}
