//! Multilayer approval instances and their structural parameters.
//!
//! Agents are dense indices `0..n`; layers are `0..ell` internally. Display
//! names live in [`crate::io`], never here.

use std::collections::VecDeque;

use crate::error::{Error, Result};

pub type AgentId = usize;

/// `n` agents, each approving a set of other agents in each of `ell` layers.
///
/// Immutable once built. Stores both sorted approval lists and a dense
/// adjacency bitmap per layer for constant-time lookups.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultilayerInstance {
    n: usize,
    ell: usize,
    lists: Vec<Vec<Vec<AgentId>>>,
    dense: Vec<Vec<bool>>,
}

impl MultilayerInstance {
    /// Validates and normalizes `approvals[layer][agent]`.
    ///
    /// Duplicate ids inside a list collapse silently; self-approvals and
    /// out-of-range ids are rejected.
    pub fn new(n: usize, ell: usize, approvals: Vec<Vec<Vec<AgentId>>>) -> Result<Self> {
        if ell == 0 {
            return Err(Error::NoLayers);
        }
        if approvals.len() != ell {
            return Err(Error::LayerCountMismatch {
                expected: ell,
                got: approvals.len(),
            });
        }
        let mut lists = Vec::with_capacity(ell);
        let mut dense = Vec::with_capacity(ell);
        for (layer, per_agent) in approvals.into_iter().enumerate() {
            if per_agent.len() != n {
                return Err(Error::AgentCountMismatch {
                    layer,
                    expected: n,
                    got: per_agent.len(),
                });
            }
            let mut bits = vec![false; n * n];
            let mut layer_lists = Vec::with_capacity(n);
            for (agent, mut approved) in per_agent.into_iter().enumerate() {
                for &b in &approved {
                    if b >= n {
                        return Err(Error::IdOutOfRange { id: b, n });
                    }
                    if b == agent {
                        return Err(Error::SelfApproval { agent, layer });
                    }
                    bits[agent * n + b] = true;
                }
                approved.sort_unstable();
                approved.dedup();
                layer_lists.push(approved);
            }
            lists.push(layer_lists);
            dense.push(bits);
        }
        Ok(Self { n, ell, lists, dense })
    }

    /// An instance in which nobody approves anybody.
    pub fn empty(n: usize, ell: usize) -> Result<Self> {
        Self::new(n, ell, vec![vec![Vec::new(); n]; ell])
    }

    /// Builds from undirected edge lists per layer, approving in both directions.
    pub fn from_symmetric_edges(n: usize, layers: &[Vec<(AgentId, AgentId)>]) -> Result<Self> {
        let mut approvals = vec![vec![Vec::new(); n]; layers.len()];
        for (layer, edges) in layers.iter().enumerate() {
            for &(a, b) in edges {
                if a >= n || b >= n {
                    return Err(Error::IdOutOfRange { id: a.max(b), n });
                }
                approvals[layer][a].push(b);
                approvals[layer][b].push(a);
            }
        }
        Self::new(n, layers.len(), approvals)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn ell(&self) -> usize {
        self.ell
    }

    #[inline]
    pub fn approves(&self, layer: usize, a: AgentId, b: AgentId) -> bool {
        self.dense[layer][a * self.n + b]
    }

    #[inline]
    pub fn mutual(&self, layer: usize, a: AgentId, b: AgentId) -> bool {
        self.approves(layer, a, b) && self.approves(layer, b, a)
    }

    /// Sorted approval set `T_a` of `agent` in `layer`.
    pub fn approvals(&self, layer: usize, agent: AgentId) -> &[AgentId] {
        &self.lists[layer][agent]
    }

    /// All approval lists of one layer, indexed by agent.
    pub fn layer(&self, layer: usize) -> &[Vec<AgentId>] {
        &self.lists[layer]
    }

    /// Number of layers in which `a` approves `b`.
    pub fn approval_count(&self, a: AgentId, b: AgentId) -> usize {
        (0..self.ell).filter(|&i| self.approves(i, a, b)).count()
    }

    /// Number of layers in which `a` and `b` approve each other.
    pub fn mutual_count(&self, a: AgentId, b: AgentId) -> usize {
        (0..self.ell).filter(|&i| self.mutual(i, a, b)).count()
    }

    /// True if the agent approves nobody in the given layer.
    pub fn approves_nobody(&self, layer: usize, agent: AgentId) -> bool {
        self.lists[layer][agent].is_empty()
    }

    /// The sub-instance consisting of the listed layers, in the given order.
    pub fn restrict_layers(&self, layers: &[usize]) -> Result<Self> {
        let mut approvals = Vec::with_capacity(layers.len());
        for &l in layers {
            if l >= self.ell {
                return Err(Error::LayerOutOfRange {
                    layer: l,
                    ell: self.ell,
                });
            }
            approvals.push(self.lists[l].clone());
        }
        Self::new(self.n, layers.len(), approvals)
    }

    /// The sub-instance induced by `keep` (agents renumbered in the given order).
    pub fn induced(&self, keep: &[AgentId]) -> Self {
        let mut new_id = vec![usize::MAX; self.n];
        for (i, &a) in keep.iter().enumerate() {
            new_id[a] = i;
        }
        let approvals = self
            .lists
            .iter()
            .map(|layer| {
                keep.iter()
                    .map(|&a| {
                        layer[a]
                            .iter()
                            .filter(|&&b| new_id[b] != usize::MAX)
                            .map(|&b| new_id[b])
                            .collect()
                    })
                    .collect()
            })
            .collect();
        Self::new(keep.len(), self.ell, approvals).expect("induced sub-instance stays valid")
    }

    /// Same instance plus `extra` agents that approve nobody and nobody approves.
    pub fn with_isolated_agents(&self, extra: usize) -> Self {
        let approvals = self
            .lists
            .iter()
            .map(|layer| {
                let mut l = layer.clone();
                l.extend(std::iter::repeat_with(Vec::new).take(extra));
                l
            })
            .collect();
        Self::new(self.n + extra, self.ell, approvals).expect("padding keeps ids valid")
    }

    /// Approval lists in the raw `[layer][agent]` shape accepted by [`Self::new`].
    pub fn to_approvals(&self) -> Vec<Vec<Vec<AgentId>>> {
        self.lists.clone()
    }

    /// True iff every approval is reciprocated in the same layer.
    pub fn is_symmetric(&self) -> bool {
        (0..self.ell).all(|i| (0..self.n).all(|a| self.lists[i][a].iter().all(|&b| self.approves(i, b, a))))
    }

    /// Adjacency of the union graph over all layers, with arcs symmetrized.
    pub fn union_graph(&self) -> Vec<Vec<AgentId>> {
        let mut adj = vec![Vec::new(); self.n];
        for layer in &self.lists {
            for (a, approved) in layer.iter().enumerate() {
                for &b in approved {
                    adj[a].push(b);
                    adj[b].push(a);
                }
            }
        }
        for l in &mut adj {
            l.sort_unstable();
            l.dedup();
        }
        adj
    }

    /// A 2-colouring of the union graph, or `None` if it has an odd cycle.
    pub fn bipartition(&self) -> Option<(Vec<AgentId>, Vec<AgentId>)> {
        let adj = self.union_graph();
        let mut colour: Vec<Option<bool>> = vec![None; self.n];
        let mut queue = VecDeque::new();
        for start in 0..self.n {
            if colour[start].is_some() {
                continue;
            }
            colour[start] = Some(false);
            queue.push_back(start);
            while let Some(v) = queue.pop_front() {
                let c = colour[v].unwrap();
                for &w in &adj[v] {
                    match colour[w] {
                        None => {
                            colour[w] = Some(!c);
                            queue.push_back(w);
                        }
                        Some(cw) if cw == c => return None,
                        Some(_) => {}
                    }
                }
            }
        }
        let (left, right): (Vec<_>, Vec<_>) = (0..self.n).partition(|&a| colour[a] == Some(false));
        Some((left, right))
    }

    /// Whether `a` and `b` are interchangeable: swapping them is an
    /// automorphism of every layer.
    ///
    /// With `check_received = false` the "approved by the same agents" clause
    /// is skipped; on symmetric instances this does not change the answer.
    pub fn same_type(&self, a: AgentId, b: AgentId, check_received: bool) -> bool {
        if a == b {
            return true;
        }
        (0..self.ell).all(|i| {
            if self.approves(i, a, b) != self.approves(i, b, a) {
                return false;
            }
            let given = (0..self.n)
                .filter(|&x| x != a && x != b)
                .all(|x| self.approves(i, a, x) == self.approves(i, b, x));
            if !given {
                return false;
            }
            !check_received
                || (0..self.n)
                    .filter(|&x| x != a && x != b)
                    .all(|x| self.approves(i, x, a) == self.approves(i, x, b))
        })
    }

    pub fn agent_types(&self) -> AgentTypePartition {
        self.agent_types_with(true)
    }

    /// Partition into agent types; see [`Self::same_type`].
    pub fn agent_types_with(&self, check_received: bool) -> AgentTypePartition {
        let mut blocks: Vec<Vec<AgentId>> = Vec::new();
        let mut type_of = vec![0; self.n];
        for (a, ty) in type_of.iter_mut().enumerate() {
            match blocks.iter().position(|blk| self.same_type(blk[0], a, check_received)) {
                Some(t) => {
                    blocks[t].push(a);
                    *ty = t;
                }
                None => {
                    *ty = blocks.len();
                    blocks.push(vec![a]);
                }
            }
        }
        AgentTypePartition { blocks, type_of }
    }

    /// Agents whose approval set is not the same in every layer.
    pub fn changing_agents(&self) -> ChangingSet {
        let agents = (0..self.n)
            .filter(|&a| (1..self.ell).any(|i| self.lists[i][a] != self.lists[0][a]))
            .collect();
        ChangingSet { agents }
    }
}

/// Free-function form of [`MultilayerInstance::new`].
pub fn build_instance(n: usize, ell: usize, approvals: Vec<Vec<Vec<AgentId>>>) -> Result<MultilayerInstance> {
    MultilayerInstance::new(n, ell, approvals)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AgentTypePartition {
    /// Blocks in order of their smallest member; members ascending.
    pub blocks: Vec<Vec<AgentId>>,
    pub type_of: Vec<usize>,
}

impl AgentTypePartition {
    pub fn tau(&self) -> usize {
        self.blocks.len()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChangingSet {
    pub agents: Vec<AgentId>,
}

impl ChangingSet {
    pub fn beta(&self) -> usize {
        self.agents.len()
    }

    pub fn contains(&self, a: AgentId) -> bool {
        self.agents.binary_search(&a).is_ok()
    }
}
