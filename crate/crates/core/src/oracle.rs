//! Exhaustive ground truth over every matching of a small instance.
//!
//! Deliberately unclever: each matching is built and handed to
//! [`crate::verify`], so correctness rests only on the checker.

use crate::blocking::{stable_in_layer, StabilityBase};
use crate::error::{Error, Result};
use crate::matching::Matching;
use crate::model::MultilayerInstance;
use crate::verify::{is_stable, StabilityQuery};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleBudget {
    pub max_agents: usize,
    /// Optional cap on matchings visited per call.
    pub max_visits: Option<u64>,
}

impl Default for OracleBudget {
    fn default() -> Self {
        Self {
            max_agents: 12,
            max_visits: None,
        }
    }
}

impl OracleBudget {
    pub fn agents(max_agents: usize) -> Self {
        Self {
            max_agents,
            max_visits: None,
        }
    }

    fn admit(&self, n: usize) -> Result<()> {
        if n > self.max_agents {
            return Err(Error::BudgetExceeded {
                agents: n,
                budget: self.max_agents,
            });
        }
        Ok(())
    }
}

/// Number of matchings (including partial ones) on `n` agents.
pub fn involution_count(n: usize) -> u128 {
    let (mut prev, mut cur) = (1u128, 1u128);
    for k in 1..n {
        let next = cur + k as u128 * prev;
        prev = cur;
        cur = next;
    }
    if n == 0 {
        1
    } else {
        cur
    }
}

/// Yields every matching on `n` agents exactly once.
///
/// The smallest undecided agent is first left single, then paired with each
/// larger undecided agent in increasing order. The empty matching comes first.
#[derive(Debug, Clone)]
pub struct MatchingIter {
    n: usize,
    mate: Vec<Option<usize>>,
    decided: Vec<bool>,
    /// (agent, choice) where choice == agent means single.
    stack: Vec<(usize, usize)>,
    started: bool,
    done: bool,
}

impl MatchingIter {
    pub fn new(n: usize) -> Self {
        Self {
            n,
            mate: vec![None; n],
            decided: vec![false; n],
            stack: Vec::with_capacity(n),
            started: false,
            done: false,
        }
    }

    fn descend(&mut self) {
        let mut a = self.stack.last().map_or(0, |&(a, _)| a + 1);
        while a < self.n {
            if !self.decided[a] {
                self.decided[a] = true;
                self.stack.push((a, a));
            }
            a += 1;
        }
    }

    fn advance(&mut self) -> bool {
        while let Some((a, choice)) = self.stack.pop() {
            if choice != a {
                self.decided[choice] = false;
                self.mate[a] = None;
                self.mate[choice] = None;
            }
            let next = (choice + 1..self.n).find(|&b| !self.decided[b]);
            match next {
                Some(b) => {
                    self.decided[b] = true;
                    self.mate[a] = Some(b);
                    self.mate[b] = Some(a);
                    self.stack.push((a, b));
                    self.descend();
                    return true;
                }
                None => self.decided[a] = false,
            }
        }
        false
    }
}

impl Iterator for MatchingIter {
    type Item = Matching;

    fn next(&mut self) -> Option<Matching> {
        if self.done {
            return None;
        }
        if !self.started {
            self.started = true;
            self.descend();
        } else if !self.advance() {
            self.done = true;
            return None;
        }
        Some(Matching::from_mates(self.mate.clone()).expect("enumeration keeps mates consistent"))
    }
}

/// Every matching on `n` agents, refusing sizes beyond the budget.
pub fn enumerate_matchings(n: usize, budget: &OracleBudget) -> Result<MatchingIter> {
    budget.admit(n)?;
    Ok(MatchingIter::new(n))
}

fn visit<F: FnMut(Matching) -> bool>(n: usize, budget: &OracleBudget, mut f: F) -> Result<()> {
    for (visited, m) in (1u64..).zip(enumerate_matchings(n, budget)?) {
        if budget.max_visits.is_some_and(|cap| visited > cap) {
            return Err(Error::BudgetExceeded {
                agents: n,
                budget: budget.max_agents,
            });
        }
        if !f(m) {
            break;
        }
    }
    Ok(())
}

/// The first matching (in enumeration order) satisfying `q`.
pub fn oracle_solve(inst: &MultilayerInstance, q: &StabilityQuery, budget: &OracleBudget) -> Result<Option<Matching>> {
    q.validate(inst.ell())?;
    let mut found = None;
    visit(inst.n(), budget, |m| {
        if is_stable(inst, &m, q) {
            found = Some(m);
            false
        } else {
            true
        }
    })?;
    Ok(found)
}

/// Every matching satisfying `q`, in enumeration order.
pub fn oracle_all(inst: &MultilayerInstance, q: &StabilityQuery, budget: &OracleBudget) -> Result<Vec<Matching>> {
    q.validate(inst.ell())?;
    let mut all = Vec::new();
    visit(inst.n(), budget, |m| {
        if is_stable(inst, &m, q) {
            all.push(m);
        }
        true
    })?;
    Ok(all)
}

/// Every matching that is super stable in the given layer.
pub fn oracle_layer_superstable(
    inst: &MultilayerInstance,
    layer: usize,
    budget: &OracleBudget,
) -> Result<Vec<Matching>> {
    if layer >= inst.ell() {
        return Err(Error::LayerOutOfRange { layer, ell: inst.ell() });
    }
    let mut all = Vec::new();
    visit(inst.n(), budget, |m| {
        if stable_in_layer(inst, &m, layer, StabilityBase::Super) {
            all.push(m);
        }
        true
    })?;
    Ok(all)
}

#[cfg(test)]
mod tests {
    use std::collections::HashSet;

    use super::*;
    use crate::model::fixtures::{ex1, ex2, triangle};
    use crate::verify::Aggregation;

    #[test]
    fn counts_match_involution_numbers() {
        let expected = [1u128, 1, 2, 4, 10, 26, 76, 232, 764, 2620, 9496];
        for (n, &t) in expected.iter().enumerate() {
            assert_eq!(involution_count(n), t);
            let all: Vec<_> = MatchingIter::new(n).collect();
            assert_eq!(all.len() as u128, t);
            let distinct: HashSet<_> = all.iter().map(Matching::encode).collect();
            assert_eq!(distinct.len(), all.len());
        }
        assert_eq!(involution_count(12), 140_152);
    }

    #[test]
    fn empty_comes_first() {
        let mut it = MatchingIter::new(0);
        assert_eq!(it.next(), Some(Matching::empty(0)));
        assert_eq!(it.next(), None);
        assert!(MatchingIter::new(4).next().unwrap().is_empty());
    }

    #[test]
    fn budget_is_enforced() {
        assert_eq!(
            enumerate_matchings(13, &OracleBudget::default()).err(),
            Some(Error::BudgetExceeded { agents: 13, budget: 12 })
        );
        let tight = OracleBudget {
            max_agents: 12,
            max_visits: Some(3),
        };
        let q = StabilityQuery::new(StabilityBase::Strong, Aggregation::AllLayers);
        assert!(oracle_solve(&triangle(), &q, &tight).is_err());
    }

    #[test]
    fn solve_examples() {
        let budget = OracleBudget::default();
        let weak_all = StabilityQuery::new(StabilityBase::Weak, Aggregation::AllLayers);
        assert!(oracle_solve(&ex1(), &weak_all, &budget).unwrap().is_some());
        let m1 = Matching::from_pairs(4, &[(0, 1), (2, 3)]).unwrap();
        assert!(oracle_all(&ex1(), &weak_all, &budget).unwrap().contains(&m1));

        let pair = MultilayerInstance::from_symmetric_edges(2, &[vec![(0, 1)]]).unwrap();
        let super_all = StabilityQuery::new(StabilityBase::Super, Aggregation::AllLayers);
        assert_eq!(
            oracle_all(&pair, &super_all, &budget).unwrap(),
            vec![Matching::from_pairs(2, &[(0, 1)]).unwrap()]
        );

        let strong_all = StabilityQuery::new(StabilityBase::Strong, Aggregation::AllLayers);
        assert_eq!(oracle_solve(&triangle(), &strong_all, &budget).unwrap(), None);
    }

    #[test]
    fn layer_superstable_examples() {
        let budget = OracleBudget::default();
        assert_eq!(
            oracle_layer_superstable(&ex2(), 0, &budget).unwrap(),
            vec![Matching::from_pairs(4, &[(0, 1), (2, 3)]).unwrap()]
        );
        let e2 = MultilayerInstance::empty(2, 1).unwrap();
        assert_eq!(
            oracle_layer_superstable(&e2, 0, &budget).unwrap(),
            vec![Matching::from_pairs(2, &[(0, 1)]).unwrap()]
        );
        let e4 = MultilayerInstance::empty(4, 1).unwrap();
        assert!(oracle_layer_superstable(&e4, 0, &budget).unwrap().is_empty());
    }
}
