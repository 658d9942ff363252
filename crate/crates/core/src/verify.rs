//! Multilayer stability checking with machine-checkable witnesses.

use std::fmt;

use crate::blocking::{blocks_bits, is_happy, stable_layers, StabilityBase};
use crate::error::{Error, Result};
use crate::matching::Matching;
use crate::model::{AgentId, MultilayerInstance};

/// How per-layer stability is lifted to the whole instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Aggregation {
    /// Stable in every layer; same as `Global(ell)`.
    AllLayers,
    /// Stable in at least `alpha` layers simultaneously.
    Global(usize),
    /// Every unmatched pair fails to block in at least `alpha` layers.
    Pair(usize),
    /// Every unmatched pair has a member that favors the matching in at least `alpha` layers.
    Individual(usize),
}

impl Aggregation {
    /// The degree alpha, with all-layers read as `ell`.
    pub fn alpha(self, ell: usize) -> usize {
        match self {
            Self::AllLayers => ell,
            Self::Global(a) | Self::Pair(a) | Self::Individual(a) => a,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::AllLayers => "all",
            Self::Global(_) => "global",
            Self::Pair(_) => "pair",
            Self::Individual(_) => "individual",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct StabilityQuery {
    pub base: StabilityBase,
    pub agg: Aggregation,
}

impl StabilityQuery {
    pub fn new(base: StabilityBase, agg: Aggregation) -> Self {
        Self { base, agg }
    }

    /// Rejects strong individual stability (undefined) and alpha outside `1..=ell`.
    pub fn validate(&self, ell: usize) -> Result<()> {
        if self.base == StabilityBase::Strong && matches!(self.agg, Aggregation::Individual(_)) {
            return Err(Error::InvalidQuery(
                "individual stability is not defined for the strong notion",
            ));
        }
        let alpha = self.agg.alpha(ell);
        if alpha == 0 || alpha > ell {
            return Err(Error::AlphaOutOfRange { alpha, ell });
        }
        Ok(())
    }

    pub fn alpha(&self, ell: usize) -> usize {
        self.agg.alpha(ell)
    }

    /// All-layers rewritten as global(ell); other queries unchanged.
    pub fn canonical(&self, ell: usize) -> Self {
        match self.agg {
            Aggregation::AllLayers => Self::new(self.base, Aggregation::Global(ell)),
            _ => *self,
        }
    }

    /// Every valid query for `ell` layers, in a fixed order.
    pub fn all_valid(ell: usize) -> Vec<Self> {
        let mut out = Vec::new();
        for base in StabilityBase::ALL {
            out.push(Self::new(base, Aggregation::AllLayers));
            for alpha in 1..=ell {
                out.push(Self::new(base, Aggregation::Global(alpha)));
                out.push(Self::new(base, Aggregation::Pair(alpha)));
                if base != StabilityBase::Strong {
                    out.push(Self::new(base, Aggregation::Individual(alpha)));
                }
            }
        }
        out
    }
}

impl fmt::Display for StabilityQuery {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.agg {
            Aggregation::AllLayers => write!(f, "all-layers {}", self.base),
            agg => write!(f, "{}-{} {}", agg.alpha(0), agg.name(), self.base),
        }
    }
}

/// A pair that violates a pair or individual condition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairViolation {
    pub pair: (AgentId, AgentId),
    /// 0-based layers in which the pair blocks.
    pub blocking_layers: Vec<usize>,
    /// Individual aggregation only: per-member count of favoring layers.
    pub support: Option<(usize, usize)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    /// Global and all-layers: the full set of stable layers (0-based).
    Layers(Vec<usize>),
    Violation(PairViolation),
    None,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub stable: bool,
    pub witness: Witness,
}

/// Per-agent clause of individual stability: the agent does not approve the
/// other member, or (weak) / and (super) it is happy.
#[inline]
pub fn favors(base: StabilityBase, approves: bool, happy: bool) -> bool {
    match base {
        StabilityBase::Super => !approves && happy,
        _ => !approves || happy,
    }
}

fn check_sizes(inst: &MultilayerInstance, m: &Matching) -> Result<()> {
    if m.n() != inst.n() {
        return Err(Error::MatchingSizeMismatch {
            expected: inst.n(),
            got: m.n(),
        });
    }
    Ok(())
}

fn check_pair(inst: &MultilayerInstance, m: &Matching, a: AgentId, b: AgentId) -> Result<()> {
    check_sizes(inst, m)?;
    let n = inst.n();
    for x in [a, b] {
        if x >= n {
            return Err(Error::IdOutOfRange { id: x, n });
        }
    }
    if a == b {
        return Err(Error::DegeneratePair(a));
    }
    if m.contains(a, b) {
        return Err(Error::PairIsMatched(a.min(b), a.max(b)));
    }
    Ok(())
}

/// Happiness table `happy[layer][agent]`.
pub(crate) fn happiness(inst: &MultilayerInstance, m: &Matching) -> Vec<Vec<bool>> {
    (0..inst.ell())
        .map(|i| (0..inst.n()).map(|a| is_happy(inst, m, a, i)).collect())
        .collect()
}

fn pair_blocking_layers(
    inst: &MultilayerInstance,
    happy: &[Vec<bool>],
    a: AgentId,
    b: AgentId,
    base: StabilityBase,
) -> Vec<usize> {
    (0..inst.ell())
        .filter(|&i| {
            blocks_bits(
                base,
                inst.approves(i, a, b),
                happy[i][a],
                inst.approves(i, b, a),
                happy[i][b],
            )
        })
        .collect()
}

fn support(
    inst: &MultilayerInstance,
    happy: &[Vec<bool>],
    a: AgentId,
    b: AgentId,
    base: StabilityBase,
) -> (usize, usize) {
    let count = |x: AgentId, y: AgentId| {
        (0..inst.ell())
            .filter(|&i| favors(base, inst.approves(i, x, y), happy[i][x]))
            .count()
    };
    (count(a, b), count(b, a))
}

/// Number of layers in which the unmatched pair `{a, b}` does not block.
pub fn pair_nonblocking_count(
    inst: &MultilayerInstance,
    m: &Matching,
    a: AgentId,
    b: AgentId,
    base: StabilityBase,
) -> Result<usize> {
    check_pair(inst, m, a, b)?;
    let happy = happiness(inst, m);
    Ok(inst.ell() - pair_blocking_layers(inst, &happy, a, b, base).len())
}

/// Per-member counts of layers satisfying the individual clause for `{a, b}`.
pub fn individual_support_counts(
    inst: &MultilayerInstance,
    m: &Matching,
    a: AgentId,
    b: AgentId,
    base: StabilityBase,
) -> Result<(usize, usize)> {
    if base == StabilityBase::Strong {
        return Err(Error::InvalidQuery(
            "individual stability is not defined for the strong notion",
        ));
    }
    check_pair(inst, m, a, b)?;
    let happy = happiness(inst, m);
    Ok(support(inst, &happy, a, b, base))
}

/// Whether the unmatched pair `{a, b}` meets a pair or individual condition.
///
/// Only the partners of `a` and `b` in `m` matter, so this also works on
/// partial matchings during search.
pub(crate) fn pair_satisfied(
    inst: &MultilayerInstance,
    m: &Matching,
    a: AgentId,
    b: AgentId,
    q: &StabilityQuery,
) -> bool {
    let alpha = q.alpha(inst.ell());
    let mut blocking = 0;
    let (mut sa, mut sb) = (0, 0);
    for i in 0..inst.ell() {
        let (aa, ba) = (inst.approves(i, a, b), inst.approves(i, b, a));
        let (ah, bh) = (is_happy(inst, m, a, i), is_happy(inst, m, b, i));
        match q.agg {
            Aggregation::Individual(_) => {
                sa += usize::from(favors(q.base, aa, ah));
                sb += usize::from(favors(q.base, ba, bh));
            }
            _ => blocking += usize::from(blocks_bits(q.base, aa, ah, ba, bh)),
        }
    }
    match q.agg {
        Aggregation::Individual(_) => sa >= alpha || sb >= alpha,
        _ => inst.ell() - blocking >= alpha,
    }
}

/// The first unmatched pair (lexicographically) violating a pair or individual condition.
fn first_violation(
    inst: &MultilayerInstance,
    m: &Matching,
    happy: &[Vec<bool>],
    q: &StabilityQuery,
) -> Option<PairViolation> {
    let n = inst.n();
    let ell = inst.ell();
    let alpha = q.alpha(ell);
    for a in 0..n {
        for b in a + 1..n {
            if m.contains(a, b) {
                continue;
            }
            match q.agg {
                Aggregation::Pair(_) => {
                    let blocking = pair_blocking_layers(inst, happy, a, b, q.base);
                    if ell - blocking.len() < alpha {
                        return Some(PairViolation {
                            pair: (a, b),
                            blocking_layers: blocking,
                            support: None,
                        });
                    }
                }
                Aggregation::Individual(_) => {
                    let (sa, sb) = support(inst, happy, a, b, q.base);
                    if sa < alpha && sb < alpha {
                        return Some(PairViolation {
                            pair: (a, b),
                            blocking_layers: pair_blocking_layers(inst, happy, a, b, q.base),
                            support: Some((sa, sb)),
                        });
                    }
                }
                _ => unreachable!("only local aggregations have pair violations"),
            }
        }
    }
    None
}

/// Decides whether `m` satisfies `q` on `inst`, with a witness.
pub fn check(inst: &MultilayerInstance, m: &Matching, q: &StabilityQuery) -> Result<Verdict> {
    q.validate(inst.ell())?;
    check_sizes(inst, m)?;
    let alpha = q.alpha(inst.ell());
    match q.agg {
        Aggregation::AllLayers | Aggregation::Global(_) => {
            let layers = stable_layers(inst, m, q.base);
            Ok(Verdict {
                stable: layers.len() >= alpha,
                witness: Witness::Layers(layers),
            })
        }
        Aggregation::Pair(_) | Aggregation::Individual(_) => {
            let happy = happiness(inst, m);
            Ok(match first_violation(inst, m, &happy, q) {
                Some(v) => Verdict {
                    stable: false,
                    witness: Witness::Violation(v),
                },
                None => Verdict {
                    stable: true,
                    witness: Witness::None,
                },
            })
        }
    }
}

/// Boolean form of [`check`] for already validated queries; no witness built.
pub fn is_stable(inst: &MultilayerInstance, m: &Matching, q: &StabilityQuery) -> bool {
    let ell = inst.ell();
    let alpha = q.alpha(ell);
    match q.agg {
        Aggregation::AllLayers | Aggregation::Global(_) => {
            let mut stable = 0;
            for i in 0..ell {
                if crate::blocking::stable_in_layer(inst, m, i, q.base) {
                    stable += 1;
                    if stable >= alpha {
                        return true;
                    }
                } else if stable + (ell - i - 1) < alpha {
                    return false;
                }
            }
            stable >= alpha
        }
        _ => first_violation(inst, m, &happiness(inst, m), q).is_none(),
    }
}

/// Re-derives `verdict` independently and reports whether its witness holds up.
pub fn witness_rechecks(inst: &MultilayerInstance, m: &Matching, q: &StabilityQuery, verdict: &Verdict) -> bool {
    let alpha = q.alpha(inst.ell());
    match &verdict.witness {
        Witness::Layers(layers) => {
            let all_stable = layers
                .iter()
                .all(|&i| i < inst.ell() && crate::blocking::stable_in_layer(inst, m, i, q.base));
            all_stable && verdict.stable == (layers.len() >= alpha)
        }
        Witness::Violation(v) => {
            let (a, b) = v.pair;
            if verdict.stable || a >= inst.n() || b >= inst.n() || a == b || m.contains(a, b) {
                return false;
            }
            let listed_block = v
                .blocking_layers
                .iter()
                .all(|&i| i < inst.ell() && crate::blocking::blocks(inst, m, a, b, i, q.base).unwrap_or(false));
            let violated = match (q.agg, v.support) {
                (Aggregation::Pair(_), _) => pair_nonblocking_count(inst, m, a, b, q.base).is_ok_and(|c| c < alpha),
                (Aggregation::Individual(_), Some(s)) => {
                    individual_support_counts(inst, m, a, b, q.base).is_ok_and(|c| c == s && c.0 < alpha && c.1 < alpha)
                }
                _ => false,
            };
            listed_block && violated
        }
        Witness::None => verdict.stable,
    }
}
