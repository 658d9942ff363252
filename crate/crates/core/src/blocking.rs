//! Single-layer semantics: ranks, happiness and blocking pairs.
//!
//! Approval preferences have two levels, so an agent's opinion about a
//! candidate partner reduces to two bits: does it approve the candidate, and
//! is it already happy with its current partner.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::matching::Matching;
use crate::model::{AgentId, MultilayerInstance};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum StabilityBase {
    Weak,
    Strong,
    Super,
}

impl StabilityBase {
    pub const ALL: [StabilityBase; 3] = [Self::Weak, Self::Strong, Self::Super];

    pub fn name(self) -> &'static str {
        match self {
            Self::Weak => "weak",
            Self::Strong => "strong",
            Self::Super => "super",
        }
    }
}

impl fmt::Display for StabilityBase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for StabilityBase {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "weak" => Ok(Self::Weak),
            "strong" => Ok(Self::Strong),
            "super" => Ok(Self::Super),
            _ => Err(Error::Parse(format!("unknown stability base `{s}`"))),
        }
    }
}

/// 1 if `a` approves `x` in `layer`, else 0. Being single ranks 0.
pub fn rank(inst: &MultilayerInstance, a: AgentId, x: Option<AgentId>, layer: usize) -> u8 {
    x.map_or(0, |x| u8::from(inst.approves(layer, a, x)))
}

pub fn is_happy(inst: &MultilayerInstance, m: &Matching, a: AgentId, layer: usize) -> bool {
    m.partner(a).is_some_and(|p| inst.approves(layer, a, p))
}

/// Blocking decision from the two bits of each side.
///
/// `x_appr` says whether that agent approves the other one, `x_happy` whether
/// it is happy with its current partner.
#[inline]
pub fn blocks_bits(base: StabilityBase, a_appr: bool, a_happy: bool, b_appr: bool, b_happy: bool) -> bool {
    let a_strict = a_appr && !a_happy;
    let b_strict = b_appr && !b_happy;
    let a_weak = a_appr || !a_happy;
    let b_weak = b_appr || !b_happy;
    match base {
        StabilityBase::Weak => a_strict && b_strict,
        StabilityBase::Strong => (a_strict && b_weak) || (b_strict && a_weak),
        StabilityBase::Super => a_weak && b_weak,
    }
}

/// Does `{a, b}` block `m` in `layer`, without checking that it is unmatched.
#[inline]
pub(crate) fn blocks_raw(
    inst: &MultilayerInstance,
    m: &Matching,
    a: AgentId,
    b: AgentId,
    layer: usize,
    base: StabilityBase,
) -> bool {
    blocks_bits(
        base,
        inst.approves(layer, a, b),
        is_happy(inst, m, a, layer),
        inst.approves(layer, b, a),
        is_happy(inst, m, b, layer),
    )
}

/// Whether the unmatched pair `{a, b}` blocks `m` in `layer`.
pub fn blocks(
    inst: &MultilayerInstance,
    m: &Matching,
    a: AgentId,
    b: AgentId,
    layer: usize,
    base: StabilityBase,
) -> Result<bool> {
    if a == b {
        return Err(Error::DegeneratePair(a));
    }
    if m.contains(a, b) {
        return Err(Error::PairIsMatched(a.min(b), a.max(b)));
    }
    Ok(blocks_raw(inst, m, a, b, layer, base))
}

/// All unmatched pairs blocking `m` in `layer`, lexicographically.
pub fn blocking_pairs(
    inst: &MultilayerInstance,
    m: &Matching,
    layer: usize,
    base: StabilityBase,
) -> Vec<(AgentId, AgentId)> {
    let n = inst.n();
    (0..n)
        .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
        .filter(|&(a, b)| !m.contains(a, b) && blocks_raw(inst, m, a, b, layer, base))
        .collect()
}

pub fn stable_in_layer(inst: &MultilayerInstance, m: &Matching, layer: usize, base: StabilityBase) -> bool {
    let n = inst.n();
    let happy: Vec<bool> = (0..n).map(|a| is_happy(inst, m, a, layer)).collect();
    // Weak and strong blocking both need at least one approval, so only arcs matter.
    if base != StabilityBase::Super {
        return (0..n).all(|a| {
            inst.approvals(layer, a)
                .iter()
                .all(|&b| m.contains(a, b) || !blocks_bits(base, true, happy[a], inst.approves(layer, b, a), happy[b]))
        });
    }
    (0..n).all(|a| {
        (a + 1..n).all(|b| {
            m.contains(a, b)
                || !blocks_bits(
                    base,
                    inst.approves(layer, a, b),
                    happy[a],
                    inst.approves(layer, b, a),
                    happy[b],
                )
        })
    })
}

/// Layers (0-based, ascending) in which `m` is stable.
pub fn stable_layers(inst: &MultilayerInstance, m: &Matching, base: StabilityBase) -> Vec<usize> {
    (0..inst.ell()).filter(|&i| stable_in_layer(inst, m, i, base)).collect()
}

/// Symmetric approvals only: weakly stable iff the happy pairs form a maximal
/// matching of the layer's approval graph.
pub fn weak_char_check(inst: &MultilayerInstance, m: &Matching, layer: usize) -> Result<bool> {
    if !inst.is_symmetric() {
        return Err(Error::NotSymmetric);
    }
    let n = inst.n();
    Ok((0..n)
        .all(|a| is_happy(inst, m, a, layer) || inst.approvals(layer, a).iter().all(|&b| is_happy(inst, m, b, layer))))
}

/// Symmetric approvals only: strongly stable iff every agent with a
/// neighbour in the layer is matched along a layer edge.
pub fn strong_char_check(inst: &MultilayerInstance, m: &Matching, layer: usize) -> Result<bool> {
    if !inst.is_symmetric() {
        return Err(Error::NotSymmetric);
    }
    Ok((0..inst.n()).all(|a| inst.approves_nobody(layer, a) || is_happy(inst, m, a, layer)))
}
