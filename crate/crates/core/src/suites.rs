//! Randomized self-check suites, shared by the `bench` command and the test
//! harness. Every suite is deterministic for a given seed.

use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::blocking::StabilityBase;
use crate::error::Result;
use crate::matching::Matching;
use crate::model::MultilayerInstance;
use crate::oracle::{oracle_layer_superstable, oracle_solve, OracleBudget};
use crate::reductions::gen_random;
use crate::solvers::{
    dispatch, layer_superstable_set, solve_by_changing, solve_by_types, solve_strong_alllayers_symmetric,
    solve_strong_global_symmetric, solve_super_global, solve_super_individual_highalpha, solve_super_pair_fpt,
    solve_super_pair_veryhighalpha, solve_weak_lowalpha, Algorithm, DispatchLimits, SolveResult,
};
use crate::verify::{is_stable, Aggregation, StabilityQuery};

#[derive(Debug, Clone)]
pub struct SuiteReport {
    pub name: &'static str,
    pub trials: usize,
    /// Individual comparisons made across all trials.
    pub checks: usize,
    pub failures: Vec<String>,
    pub elapsed: Duration,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

pub const SUITES: [&str; 3] = ["lattice", "solver-vs-oracle", "superstable-count"];

pub fn run_suite(name: &str, seed: u64, trials: usize) -> Option<SuiteReport> {
    match name {
        "lattice" => Some(lattice(seed, trials)),
        "solver-vs-oracle" => Some(solver_vs_oracle(seed, trials)),
        "superstable-count" => Some(superstable_count(seed, trials)),
        _ => None,
    }
}

/// A random matching: agents shuffled, consecutive ones paired with
/// probability 0.75.
pub fn random_matching(n: usize, rng: &mut ChaCha8Rng) -> Matching {
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut m = Matching::empty(n);
    for pair in order.chunks_exact(2) {
        if rng.random_bool(0.75) {
            m.add_pair(pair[0], pair[1]).expect("distinct single agents");
        }
    }
    m
}

/// Asymmetric, symmetric or symmetric-bipartite approvals in equal shares.
pub fn random_mixed_instance(max_n: usize, max_ell: usize, rng: &mut ChaCha8Rng) -> MultilayerInstance {
    let n = rng.random_range(1..=max_n);
    let ell = rng.random_range(1..=max_ell);
    let p = rng.random_range(0.1..0.7);
    let kind = rng.random_range(0..3);
    gen_random(n, ell, p, kind > 0, kind == 2, rng.random()).expect("probability in range")
}

/// Checks the implications between aggregations (and between bases) on
/// random instances and matchings.
pub fn lattice(seed: u64, trials: usize) -> SuiteReport {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = Vec::new();
    let mut checks = 0;
    for trial in 0..trials {
        let inst = random_mixed_instance(8, 4, &mut rng);
        let ell = inst.ell();
        let m = random_matching(inst.n(), &mut rng);
        let alpha = rng.random_range(1..=ell);
        let holds = |base: StabilityBase, agg: Aggregation| is_stable(&inst, &m, &StabilityQuery::new(base, agg));
        for base in StabilityBase::ALL {
            let individual = base != StabilityBase::Strong;
            let all = holds(base, Aggregation::AllLayers);
            let g_a = holds(base, Aggregation::Global(alpha));
            let p_a = holds(base, Aggregation::Pair(alpha));
            let g_1 = holds(base, Aggregation::Global(1));
            let p_1 = holds(base, Aggregation::Pair(1));
            let mut arcs = vec![
                ("all-layers => a-global", all, g_a),
                ("all-layers => a-pair", all, p_a),
                ("a-global => 1-global", g_a, g_1),
                ("a-pair => 1-pair", p_a, p_1),
                ("1-global => 1-pair", g_1, p_1),
                ("a-global => a-pair", g_a, p_a),
            ];
            if individual {
                let i_l = holds(base, Aggregation::Individual(ell));
                let i_a = holds(base, Aggregation::Individual(alpha));
                let i_1 = holds(base, Aggregation::Individual(1));
                arcs.extend([
                    ("l-individual => all-layers", i_l, all),
                    ("l-individual => a-individual", i_l, i_a),
                    ("a-individual => 1-individual", i_a, i_1),
                    ("a-individual => a-pair", i_a, p_a),
                    ("1-pair => 1-individual", p_1, i_1),
                    ("1-individual => 1-pair", i_1, p_1),
                ]);
            }
            for (name, premise, conclusion) in arcs {
                checks += 1;
                if premise && !conclusion {
                    failures.push(format!("trial {trial}: {base} {name} fails (alpha={alpha})"));
                }
            }
        }
        // Super blocking implies strong implies weak, so stability goes the
        // other way.
        for agg in [
            Aggregation::AllLayers,
            Aggregation::Global(alpha),
            Aggregation::Pair(alpha),
        ] {
            let [w, s, su] = StabilityBase::ALL.map(|b| holds(b, agg));
            checks += 2;
            if su && !s || s && !w {
                failures.push(format!("trial {trial}: base order fails for {agg:?}"));
            }
        }
    }
    SuiteReport {
        name: "lattice",
        trials,
        checks,
        failures,
        elapsed: start.elapsed(),
    }
}

/// Every complete solver whose preconditions hold on `(inst, q)`, with its
/// result. The agent-type solver is only tried for at most `max_types` types.
pub fn applicable_solvers(
    inst: &MultilayerInstance,
    q: &StabilityQuery,
    max_types: usize,
) -> Vec<(Algorithm, Result<SolveResult>)> {
    let ell = inst.ell();
    let alpha = q.alpha(ell);
    let symmetric = inst.is_symmetric();
    let global = matches!(q.agg, Aggregation::AllLayers | Aggregation::Global(_));
    let mut out = Vec::new();
    match (q.base, q.agg) {
        (StabilityBase::Weak, Aggregation::Pair(_) | Aggregation::Individual(_)) if alpha <= ell.div_ceil(2) => {
            let r =
                solve_weak_lowalpha(inst, alpha).map(|m| SolveResult::from_option(Algorithm::WeakLowAlpha, Some(m)));
            out.push((Algorithm::WeakLowAlpha, r));
        }
        _ => {}
    }
    if q.base == StabilityBase::Super && global {
        out.push((Algorithm::SuperGlobal, solve_super_global(inst, alpha)));
    }
    if symmetric && q.base == StabilityBase::Strong {
        if q.agg == Aggregation::AllLayers {
            let r = solve_strong_alllayers_symmetric(inst)
                .map(|m| SolveResult::from_option(Algorithm::StrongAllLayersSymmetric, m));
            out.push((Algorithm::StrongAllLayersSymmetric, r));
        }
        if global {
            out.push((
                Algorithm::StrongGlobalSymmetric,
                solve_strong_global_symmetric(inst, alpha),
            ));
        }
    }
    if symmetric && q.base == StabilityBase::Super && 2 * alpha > ell {
        match q.agg {
            Aggregation::Individual(_) => {
                out.push((
                    Algorithm::SuperIndividualHighAlpha,
                    solve_super_individual_highalpha(inst, alpha),
                ));
            }
            Aggregation::Pair(_) => {
                if 3 * alpha > 2 * ell {
                    out.push((
                        Algorithm::SuperPairVeryHighAlpha,
                        solve_super_pair_veryhighalpha(inst, alpha),
                    ));
                }
                out.push((Algorithm::SuperPairFpt, solve_super_pair_fpt(inst, alpha)));
            }
            _ => {}
        }
    }
    if inst.agent_types().tau() <= max_types {
        out.push((Algorithm::AgentTypes, solve_by_types(inst, q)));
    }
    if symmetric && inst.changing_agents().beta() <= 3 {
        out.push((Algorithm::ChangingAgents, solve_by_changing(inst, q)));
    }
    out
}

/// Compares one solver result with the oracle's answer; `None` if they agree.
pub fn disagreement(
    inst: &MultilayerInstance,
    q: &StabilityQuery,
    truth: bool,
    r: &Result<SolveResult>,
) -> Option<String> {
    match r {
        Err(e) => Some(format!("error {e}")),
        Ok(r) => match (r.decided(), r.matching()) {
            (Some(d), _) if d != truth => Some(format!("{} says {d}, oracle says {truth}", r.algorithm)),
            (None, _) => Some(format!("{} undecided", r.algorithm)),
            (_, Some(m)) if !is_stable(inst, m, q) => Some(format!("{} returned an unstable matching", r.algorithm)),
            _ => None,
        },
    }
}

/// Every applicable complete solver, and the dispatcher, against the oracle.
pub fn solver_vs_oracle(seed: u64, trials: usize) -> SuiteReport {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let budget = OracleBudget::default();
    let limits = DispatchLimits::default();
    let mut failures = Vec::new();
    let mut checks = 0;
    for trial in 0..trials {
        let inst = random_mixed_instance(8, 4, &mut rng);
        for q in StabilityQuery::all_valid(inst.ell()) {
            let truth = oracle_solve(&inst, &q, &budget).expect("within budget").is_some();
            let mut results = applicable_solvers(&inst, &q, 4);
            results.push((Algorithm::None, dispatch(&inst, &q, &limits)));
            for (_, r) in &results {
                checks += 1;
                if let Some(why) = disagreement(&inst, &q, truth, r) {
                    failures.push(format!("trial {trial}, {q}: {why}"));
                }
            }
        }
    }
    SuiteReport {
        name: "solver-vs-oracle",
        trials,
        checks,
        failures,
        elapsed: start.elapsed(),
    }
}

/// Per-layer super-stable sets: at most three, and equal to the oracle's.
pub fn superstable_count(seed: u64, trials: usize) -> SuiteReport {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let budget = OracleBudget::default();
    let mut failures = Vec::new();
    for trial in 0..trials {
        let n = rng.random_range(1..=8);
        let p = rng.random_range(0.05..0.6);
        let symmetric = rng.random_bool(0.5);
        let inst = gen_random(n, 1, p, symmetric, false, rng.random()).expect("probability in range");
        let mut fast = layer_superstable_set(&inst, 0).expect("layer exists");
        let mut truth = oracle_layer_superstable(&inst, 0, &budget).expect("within budget");
        fast.sort_by_key(Matching::encode);
        truth.sort_by_key(Matching::encode);
        if fast.len() > 3 {
            failures.push(format!("trial {trial}: {} super-stable matchings", fast.len()));
        }
        if fast != truth {
            failures.push(format!(
                "trial {trial}: {} found, oracle has {}",
                fast.len(),
                truth.len()
            ));
        }
    }
    SuiteReport {
        name: "superstable-count",
        trials,
        checks: trials,
        failures,
        elapsed: start.elapsed(),
    }
}
