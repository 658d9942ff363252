use crate::blocking::StabilityBase;
use crate::error::{Error, Result};
use crate::graphalg::SimpleGraph;
use crate::matching::Matching;
use crate::model::{AgentId, MultilayerInstance};
use crate::verify::{Aggregation, StabilityQuery};

use super::{append_empty_layers, copy_layers, GeneratedInstance};

/// Partition into two induced 1-regular parts as alpha-pair super stability.
///
/// Vertex v gets agents v¹, v², v*; two extra agents a, a′ approve nobody.
/// Layer one copies every edge onto the ¹-agents and onto the ²-agents;
/// layer two joins v¹ and v² to v*. Both layers are repeated alpha times and
/// `ell - 2 alpha` empty layers follow. Whichever of v¹, v² is not matched to
/// v* must find its partner among the neighbours on its own side.
#[derive(Debug, Clone)]
pub struct DegreePartitionReduction {
    pub generated: GeneratedInstance,
    pub graph: SimpleGraph,
}

impl DegreePartitionReduction {
    pub fn copy1(&self, v: usize) -> AgentId {
        3 * v
    }

    pub fn copy2(&self, v: usize) -> AgentId {
        3 * v + 1
    }

    pub fn star(&self, v: usize) -> AgentId {
        3 * v + 2
    }

    pub fn loners(&self) -> (AgentId, AgentId) {
        let n = self.graph.n();
        (3 * n, 3 * n + 1)
    }

    /// The matching for a partition (`first[v]` tells the side of v); `None`
    /// if some vertex does not have exactly one neighbour on its side.
    pub fn forward(&self, first: &[bool]) -> Option<Matching> {
        let g = &self.graph;
        let mut pairs = Vec::new();
        for v in 0..g.n() {
            let mut same: Vec<usize> = g
                .neighbors(v)
                .iter()
                .copied()
                .filter(|&w| first[w] == first[v])
                .collect();
            let w = same.pop().filter(|_| same.is_empty())?;
            let (own, other) = if first[v] {
                (self.copy1(v), self.copy2(v))
            } else {
                (self.copy2(v), self.copy1(v))
            };
            if v < w {
                let partner = if first[v] { self.copy1(w) } else { self.copy2(w) };
                pairs.push((own, partner));
            }
            pairs.push((other, self.star(v)));
        }
        pairs.push(self.loners());
        Matching::from_pairs(self.generated.instance.n(), &pairs).ok()
    }

    /// The side of each vertex: first iff v² is matched to v*.
    pub fn backward(&self, m: &Matching) -> Vec<bool> {
        (0..self.graph.n())
            .map(|v| m.contains(self.copy2(v), self.star(v)))
            .collect()
    }
}

pub fn reduce_degreepartition_to_pair_super(
    g: &SimpleGraph,
    ell: usize,
    alpha: usize,
) -> Result<DegreePartitionReduction> {
    let nu = g.n();
    if nu % 2 == 1 {
        return Err(Error::OddVertexCount(nu));
    }
    if alpha == 0 {
        return Err(Error::AlphaOutOfRange { alpha, ell });
    }
    if 2 * alpha > ell {
        return Err(Error::AlphaTooHigh {
            alpha,
            ell,
            bound: ell / 2,
        });
    }
    let n = 3 * nu + 2;
    let mut layer1 = Vec::new();
    let mut layer2 = Vec::new();
    for (v, w) in g.edges() {
        layer1.push((3 * v, 3 * w));
        layer1.push((3 * v + 1, 3 * w + 1));
    }
    for v in 0..nu {
        layer2.push((3 * v, 3 * v + 2));
        layer2.push((3 * v + 1, 3 * v + 2));
    }
    let base = MultilayerInstance::from_symmetric_edges(n, &[layer1, layer2])?;
    let instance = append_empty_layers(&copy_layers(&base, &[alpha, alpha])?, ell - 2 * alpha);
    let mut names = Vec::with_capacity(n);
    for v in 1..=nu {
        names.extend([format!("v{v}_1"), format!("v{v}_2"), format!("v{v}_star")]);
    }
    names.extend(["a".to_string(), "a'".to_string()]);
    Ok(DegreePartitionReduction {
        generated: GeneratedInstance {
            instance,
            query: StabilityQuery::new(StabilityBase::Super, Aggregation::Pair(alpha)),
            names,
        },
        graph: g.clone(),
    })
}

/// A side assignment making both induced subgraphs 1-regular, if any.
/// Either side may be empty.
pub fn brute_force_degree_partition(g: &SimpleGraph) -> Option<Vec<bool>> {
    let n = g.n();
    assert!(n < 32, "brute force is for tiny graphs");
    (0u32..1 << n)
        .map(|mask| (0..n).map(|v| mask >> v & 1 == 1).collect::<Vec<_>>())
        .find(|first| (0..n).all(|v| g.neighbors(v).iter().filter(|&&w| first[w] == first[v]).count() == 1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verify::is_stable;

    #[test]
    fn four_cycle() {
        let c4 = SimpleGraph::from_edges(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]);
        let r = reduce_degreepartition_to_pair_super(&c4, 2, 1).unwrap();
        let inst = &r.generated.instance;
        assert_eq!(inst.n(), 14);
        assert!(inst.is_symmetric());
        assert!((0..2).all(|i| (0..14).all(|a| inst.approvals(i, a).len() <= 4)));
        let part = brute_force_degree_partition(&c4).unwrap();
        let m = r.forward(&part).unwrap();
        assert!(is_stable(inst, &m, &r.generated.query));
        assert_eq!(r.backward(&m), part);
        let (a, b) = r.loners();
        assert!(m.contains(a, b));
    }

    #[test]
    fn single_edge_with_empty_side() {
        let k2 = SimpleGraph::from_edges(2, &[(0, 1)]);
        let part = brute_force_degree_partition(&k2).unwrap();
        assert_eq!(part[0], part[1]);
        let r = reduce_degreepartition_to_pair_super(&k2, 2, 1).unwrap();
        let m = r.forward(&part).unwrap();
        assert!(is_stable(&r.generated.instance, &m, &r.generated.query));
    }

    #[test]
    fn parameter_checks() {
        let p3 = SimpleGraph::from_edges(3, &[(0, 1), (1, 2)]);
        assert_eq!(
            reduce_degreepartition_to_pair_super(&p3, 2, 1).unwrap_err(),
            Error::OddVertexCount(3)
        );
        let k2 = SimpleGraph::from_edges(2, &[(0, 1)]);
        assert!(matches!(
            reduce_degreepartition_to_pair_super(&k2, 3, 2),
            Err(Error::AlphaTooHigh { .. })
        ));
        let r = reduce_degreepartition_to_pair_super(&k2, 5, 2).unwrap();
        assert_eq!(r.generated.instance.ell(), 5);
    }
}
