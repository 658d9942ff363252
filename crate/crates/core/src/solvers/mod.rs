//! Algorithms that find a stable matching or prove none exists.
//!
//! Each solver is complete for its preconditions. [`dispatch`] picks the
//! first applicable one and falls back to the oracle, reporting
//! [`Outcome::Unknown`] rather than guessing when nothing applies.

mod changing;
mod strong;
mod superstable;
mod types;
mod weak;

use std::fmt;

pub use changing::solve_by_changing;
pub use strong::{solve_strong_alllayers_symmetric, solve_strong_global_symmetric};
pub use superstable::{
    layer_superstable_set, solve_super_global, solve_super_individual_highalpha, solve_super_pair_fpt,
    solve_super_pair_veryhighalpha,
};
pub use types::solve_by_types;
pub use weak::{approval_threshold_graph, mutual_threshold_graph, solve_weak_lowalpha};

use crate::blocking::StabilityBase;
use crate::error::{Error, Result};
use crate::matching::Matching;
use crate::model::MultilayerInstance;
use crate::oracle::{oracle_solve, OracleBudget};
use crate::verify::{Aggregation, StabilityQuery};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Algorithm {
    WeakLowAlpha,
    StrongAllLayersSymmetric,
    StrongGlobalSymmetric,
    SuperGlobal,
    SuperIndividualHighAlpha,
    SuperPairVeryHighAlpha,
    SuperPairFpt,
    AgentTypes,
    ChangingAgents,
    Oracle,
    /// Nothing applicable within limits.
    None,
}

impl Algorithm {
    pub fn name(self) -> &'static str {
        match self {
            Self::WeakLowAlpha => "weak-low-alpha",
            Self::StrongAllLayersSymmetric => "strong-all-layers-symmetric",
            Self::StrongGlobalSymmetric => "strong-global-symmetric",
            Self::SuperGlobal => "super-global",
            Self::SuperIndividualHighAlpha => "super-individual-high-alpha",
            Self::SuperPairVeryHighAlpha => "super-pair-very-high-alpha",
            Self::SuperPairFpt => "super-pair-fpt",
            Self::AgentTypes => "agent-types",
            Self::ChangingAgents => "changing-agents",
            Self::Oracle => "oracle",
            Self::None => "none",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    Exists(Matching),
    NotExists,
    /// No complete procedure fit the budget.
    Unknown,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveResult {
    pub outcome: Outcome,
    pub algorithm: Algorithm,
    /// Global notions: 0-based layers in which the returned matching is stable.
    pub witness_layers: Option<Vec<usize>>,
}

impl SolveResult {
    pub(crate) fn exists(algorithm: Algorithm, m: Matching) -> Self {
        Self {
            outcome: Outcome::Exists(m),
            algorithm,
            witness_layers: None,
        }
    }

    pub(crate) fn not_exists(algorithm: Algorithm) -> Self {
        Self {
            outcome: Outcome::NotExists,
            algorithm,
            witness_layers: None,
        }
    }

    pub(crate) fn from_option(algorithm: Algorithm, m: Option<Matching>) -> Self {
        match m {
            Some(m) => Self::exists(algorithm, m),
            None => Self::not_exists(algorithm),
        }
    }

    pub fn matching(&self) -> Option<&Matching> {
        match &self.outcome {
            Outcome::Exists(m) => Some(m),
            _ => None,
        }
    }

    /// `Some(true)` for exists, `Some(false)` for not-exists, `None` if unknown.
    pub fn decided(&self) -> Option<bool> {
        match self.outcome {
            Outcome::Exists(_) => Some(true),
            Outcome::NotExists => Some(false),
            Outcome::Unknown => None,
        }
    }
}

pub(crate) fn check_alpha(inst: &MultilayerInstance, alpha: usize) -> Result<()> {
    if alpha == 0 || alpha > inst.ell() {
        return Err(Error::AlphaOutOfRange { alpha, ell: inst.ell() });
    }
    Ok(())
}

pub(crate) fn require_symmetric(inst: &MultilayerInstance) -> Result<()> {
    if inst.is_symmetric() {
        Ok(())
    } else {
        Err(Error::NotSymmetric)
    }
}

/// Size limits deciding which parameterized solvers the dispatcher may run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DispatchLimits {
    pub max_types: usize,
    pub max_changing: usize,
    pub max_subsets: u128,
    pub oracle: OracleBudget,
}

impl Default for DispatchLimits {
    fn default() -> Self {
        Self {
            max_types: 3,
            max_changing: 5,
            max_subsets: 10_000,
            oracle: OracleBudget::default(),
        }
    }
}

pub(crate) fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// Routes `q` to the first applicable complete algorithm.
pub fn dispatch(inst: &MultilayerInstance, q: &StabilityQuery, limits: &DispatchLimits) -> Result<SolveResult> {
    q.validate(inst.ell())?;
    let ell = inst.ell();
    let alpha = q.alpha(ell);
    let symmetric = inst.is_symmetric();
    let global = matches!(q.agg, Aggregation::AllLayers | Aggregation::Global(_));
    use StabilityBase::*;

    if q.base == Weak && matches!(q.agg, Aggregation::Pair(_) | Aggregation::Individual(_)) && alpha <= ell.div_ceil(2)
    {
        let m = solve_weak_lowalpha(inst, alpha)?;
        return Ok(SolveResult::exists(Algorithm::WeakLowAlpha, m));
    }
    if q.base == Super && global {
        return solve_super_global(inst, alpha);
    }
    if q.base == Strong && q.agg == Aggregation::AllLayers && symmetric {
        let m = solve_strong_alllayers_symmetric(inst)?;
        let mut r = SolveResult::from_option(Algorithm::StrongAllLayersSymmetric, m);
        if r.matching().is_some() {
            r.witness_layers = Some((0..ell).collect());
        }
        return Ok(r);
    }
    if q.base == Strong && global && symmetric && binomial(ell, alpha) <= limits.max_subsets {
        return solve_strong_global_symmetric(inst, alpha);
    }
    if q.base == Super && symmetric && 2 * alpha > ell {
        match q.agg {
            Aggregation::Individual(_) => return solve_super_individual_highalpha(inst, alpha),
            Aggregation::Pair(_) if 3 * alpha > 2 * ell => return solve_super_pair_veryhighalpha(inst, alpha),
            Aggregation::Pair(_) => return solve_super_pair_fpt(inst, alpha),
            _ => {}
        }
    }
    if inst.agent_types().tau() <= limits.max_types {
        return solve_by_types(inst, q);
    }
    if symmetric && inst.changing_agents().beta() <= limits.max_changing {
        return solve_by_changing(inst, q);
    }
    match oracle_solve(inst, q, &limits.oracle) {
        Ok(m) => {
            let mut r = SolveResult::from_option(Algorithm::Oracle, m);
            if global {
                if let Some(m) = r.matching() {
                    r.witness_layers = Some(crate::blocking::stable_layers(inst, m, q.base));
                }
            }
            Ok(r)
        }
        Err(Error::BudgetExceeded { .. }) => Ok(SolveResult {
            outcome: Outcome::Unknown,
            algorithm: Algorithm::None,
            witness_layers: None,
        }),
        Err(e) => Err(e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::fixtures::{ex1, triangle};
    use crate::reductions::gen_random;
    use crate::verify::check;

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), 10);
        assert_eq!(binomial(4, 0), 1);
        assert_eq!(binomial(3, 4), 0);
        assert_eq!(binomial(30, 15), 155_117_520);
    }

    #[test]
    fn dispatch_examples() {
        let limits = DispatchLimits::default();
        let q = StabilityQuery::new(StabilityBase::Weak, Aggregation::Pair(2));
        let r = dispatch(&ex1(), &q, &limits).unwrap();
        assert_eq!(r.algorithm, Algorithm::WeakLowAlpha);
        assert!(check(&ex1(), r.matching().unwrap(), &q).unwrap().stable);

        let q = StabilityQuery::new(StabilityBase::Super, Aggregation::Global(1));
        let r = dispatch(&ex1(), &q, &limits).unwrap();
        assert_eq!(r.algorithm, Algorithm::SuperGlobal);
        assert!(r.matching().is_some());

        let q = StabilityQuery::new(StabilityBase::Strong, Aggregation::AllLayers);
        let r = dispatch(&triangle(), &q, &limits).unwrap();
        assert_eq!(r.outcome, Outcome::NotExists);
    }

    #[test]
    fn dispatch_gives_up_honestly() {
        let inst = gen_random(30, 3, 0.3, false, false, 11).unwrap();
        let q = StabilityQuery::new(StabilityBase::Weak, Aggregation::AllLayers);
        let r = dispatch(&inst, &q, &DispatchLimits::default()).unwrap();
        assert_eq!(r.outcome, Outcome::Unknown);
    }
}
