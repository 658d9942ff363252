use crate::error::{Error, Result};
use crate::model::AgentId;

/// A set of disjoint unordered agent pairs over `n` agents.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Matching {
    mate: Vec<Option<AgentId>>,
}

impl Matching {
    pub fn empty(n: usize) -> Self {
        Self { mate: vec![None; n] }
    }

    pub fn from_pairs(n: usize, pairs: &[(AgentId, AgentId)]) -> Result<Self> {
        let mut m = Self::empty(n);
        for &(a, b) in pairs {
            m.add_pair(a, b)?;
        }
        Ok(m)
    }

    /// Builds from a partner array, checking that it is an involution.
    pub fn from_mates(mate: Vec<Option<AgentId>>) -> Result<Self> {
        let n = mate.len();
        for (a, &m) in mate.iter().enumerate() {
            if let Some(b) = m {
                if b >= n {
                    return Err(Error::IdOutOfRange { id: b, n });
                }
                if b == a {
                    return Err(Error::DegeneratePair(a));
                }
                if mate[b] != Some(a) {
                    return Err(Error::AgentMatchedTwice(b));
                }
            }
        }
        Ok(Self { mate })
    }

    pub fn add_pair(&mut self, a: AgentId, b: AgentId) -> Result<()> {
        let n = self.mate.len();
        for x in [a, b] {
            if x >= n {
                return Err(Error::IdOutOfRange { id: x, n });
            }
        }
        if a == b {
            return Err(Error::DegeneratePair(a));
        }
        for x in [a, b] {
            if self.mate[x].is_some() {
                return Err(Error::AgentMatchedTwice(x));
            }
        }
        self.mate[a] = Some(b);
        self.mate[b] = Some(a);
        Ok(())
    }

    /// Dissolves the pair containing `a`, if any.
    pub fn unpair(&mut self, a: AgentId) {
        if let Some(b) = self.mate[a].take() {
            self.mate[b] = None;
        }
    }

    /// Number of agents the matching ranges over.
    pub fn n(&self) -> usize {
        self.mate.len()
    }

    #[inline]
    pub fn partner(&self, a: AgentId) -> Option<AgentId> {
        self.mate[a]
    }

    #[inline]
    pub fn contains(&self, a: AgentId, b: AgentId) -> bool {
        self.mate[a] == Some(b)
    }

    pub fn is_matched(&self, a: AgentId) -> bool {
        self.mate[a].is_some()
    }

    /// Pairs `(a, b)` with `a < b`, sorted.
    pub fn pairs(&self) -> Vec<(AgentId, AgentId)> {
        self.mate
            .iter()
            .enumerate()
            .filter_map(|(a, &m)| m.filter(|&b| a < b).map(|b| (a, b)))
            .collect()
    }

    pub fn len(&self) -> usize {
        self.mate.iter().filter(|m| m.is_some()).count() / 2
    }

    pub fn is_empty(&self) -> bool {
        self.mate.iter().all(Option::is_none)
    }

    /// Canonical encoding: entry `a` is the partner of `a`, or `a` itself if single.
    pub fn encode(&self) -> Vec<AgentId> {
        self.mate.iter().enumerate().map(|(a, m)| m.unwrap_or(a)).collect()
    }

    pub fn mates(&self) -> &[Option<AgentId>] {
        &self.mate
    }

    /// Drops every agent with id `>= n`, unmatching their partners.
    pub fn truncate(&self, n: usize) -> Self {
        let mate = self.mate[..n.min(self.mate.len())]
            .iter()
            .map(|m| m.filter(|&b| b < n))
            .collect();
        Self { mate }
    }
}
