//! JSON documents for instances, matchings, verdicts and reduction
//! certificates. Agents are referred to by name; layer indices are 1-based.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::blocking::StabilityBase;
use crate::error::{Error, Result};
use crate::matching::Matching;
use crate::model::{AgentId, MultilayerInstance};
use crate::verify::{Aggregation, StabilityQuery};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QueryDocument {
    pub base: String,
    pub agg: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<usize>,
}

impl QueryDocument {
    pub fn from_query(q: &StabilityQuery) -> Self {
        let alpha = match q.agg {
            Aggregation::AllLayers => None,
            Aggregation::Global(a) | Aggregation::Pair(a) | Aggregation::Individual(a) => Some(a),
        };
        QueryDocument {
            base: q.base.name().to_string(),
            agg: q.agg.name().to_string(),
            alpha,
        }
    }

    pub fn to_query(&self) -> Result<StabilityQuery> {
        parse_query(&self.base, &self.agg, self.alpha)
    }
}

/// Builds a query from textual flags; `all` ignores alpha, the rest need it.
pub fn parse_query(base: &str, agg: &str, alpha: Option<usize>) -> Result<StabilityQuery> {
    let base: StabilityBase = base.parse()?;
    let need = |alpha: Option<usize>| alpha.ok_or_else(|| Error::Parse(format!("aggregation `{agg}` needs an alpha")));
    let agg = match agg {
        "all" | "all-layers" => Aggregation::AllLayers,
        "global" => Aggregation::Global(need(alpha)?),
        "pair" => Aggregation::Pair(need(alpha)?),
        "individual" => Aggregation::Individual(need(alpha)?),
        other => return Err(Error::Parse(format!("unknown aggregation `{other}`"))),
    };
    Ok(StabilityQuery::new(base, agg))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceDocument {
    pub agents: Vec<String>,
    /// Per layer, agent name to approved names. Omitted agents approve nobody.
    pub layers: Vec<BTreeMap<String, Vec<String>>>,
    /// The question a generator encoded, if any.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub query: Option<QueryDocument>,
}

fn index_names(names: &[String]) -> Result<HashMap<&str, AgentId>> {
    let mut index = HashMap::with_capacity(names.len());
    for (i, name) in names.iter().enumerate() {
        if index.insert(name.as_str(), i).is_some() {
            return Err(Error::Parse(format!("duplicate agent name `{name}`")));
        }
    }
    Ok(index)
}

fn lookup(index: &HashMap<&str, AgentId>, name: &str) -> Result<AgentId> {
    index
        .get(name)
        .copied()
        .ok_or_else(|| Error::Parse(format!("unknown agent `{name}`")))
}

/// `a1, a2, ...` for agents without names.
pub fn default_names(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("a{i}")).collect()
}

impl InstanceDocument {
    pub fn from_instance(inst: &MultilayerInstance, names: &[String]) -> Self {
        assert_eq!(names.len(), inst.n(), "one name per agent");
        let layers = (0..inst.ell())
            .map(|i| {
                (0..inst.n())
                    .filter(|&a| !inst.approves_nobody(i, a))
                    .map(|a| {
                        (
                            names[a].clone(),
                            inst.approvals(i, a).iter().map(|&b| names[b].clone()).collect(),
                        )
                    })
                    .collect()
            })
            .collect();
        InstanceDocument {
            agents: names.to_vec(),
            layers,
            query: None,
        }
    }

    pub fn to_instance(&self) -> Result<MultilayerInstance> {
        let index = index_names(&self.agents)?;
        let n = self.agents.len();
        let mut approvals = vec![vec![Vec::new(); n]; self.layers.len()];
        for (layer, map) in approvals.iter_mut().zip(&self.layers) {
            for (name, approved) in map {
                let a = lookup(&index, name)?;
                layer[a] = approved.iter().map(|b| lookup(&index, b)).collect::<Result<_>>()?;
            }
        }
        MultilayerInstance::new(n, self.layers.len(), approvals)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatchingDocument {
    pub pairs: Vec<[String; 2]>,
}

pub fn pairs_by_name(m: &Matching, names: &[String]) -> Vec<[String; 2]> {
    m.pairs()
        .into_iter()
        .map(|(a, b)| [names[a].clone(), names[b].clone()])
        .collect()
}

impl MatchingDocument {
    pub fn from_matching(m: &Matching, names: &[String]) -> Self {
        MatchingDocument {
            pairs: pairs_by_name(m, names),
        }
    }

    pub fn to_matching(&self, names: &[String]) -> Result<Matching> {
        let index = index_names(names)?;
        let pairs = self
            .pairs
            .iter()
            .map(|[a, b]| Ok((lookup(&index, a)?, lookup(&index, b)?)))
            .collect::<Result<Vec<_>>>()?;
        Matching::from_pairs(names.len(), &pairs)
    }
}

/// Output of `check`, `solve` and `oracle`. Only the fields relevant to the
/// command are present.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct VerdictDocument {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stable: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exists: Option<bool>,
    pub status: String,
    pub query: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub algorithm: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness_layers: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matching: Option<Vec<[String; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub violating_pair: Option<[String; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub blocking_layers: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matchings: Option<Vec<Vec<[String; 2]>>>,
    pub elapsed_ms: f64,
}

/// Ties a generated instance to its source problem.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertificateDocument {
    pub construction: String,
    pub query: QueryDocument,
    /// Answer of the source problem by brute force, when it was small enough.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source_answer: Option<bool>,
    /// A source solution in the source's own terms.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source_solution: Option<serde_json::Value>,
    /// Its image under the construction: a stable matching of the target.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matching: Option<Vec<[String; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness_layers: Option<Vec<usize>>,
}

pub fn to_json<T: Serialize>(doc: &T) -> String {
    serde_json::to_string_pretty(doc).expect("documents serialize")
}

pub fn from_json<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
}

/// 0-based layer indices to the external 1-based form.
pub fn one_based(layers: &[usize]) -> Vec<usize> {
    layers.iter().map(|i| i + 1).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::fixtures::{ex1, ex2};
    use crate::reductions::gen_random;

    #[test]
    fn instance_round_trip() {
        for inst in [ex1(), ex2(), gen_random(7, 3, 0.4, false, false, 3).unwrap()] {
            let names = default_names(inst.n());
            let text = to_json(&InstanceDocument::from_instance(&inst, &names));
            let back: InstanceDocument = from_json(&text).unwrap();
            assert_eq!(back.to_instance().unwrap(), inst);
        }
    }

    #[test]
    fn omitted_agents_and_bad_names() {
        let doc: InstanceDocument = from_json(r#"{"agents":["x","y","z"],"layers":[{"x":["y"]},{}]}"#).unwrap();
        let inst = doc.to_instance().unwrap();
        assert!(inst.approves(0, 0, 1) && inst.approves_nobody(1, 0) && inst.approves_nobody(0, 2));
        let bad: InstanceDocument = from_json(r#"{"agents":["x","x"],"layers":[{}]}"#).unwrap();
        assert!(bad.to_instance().is_err());
        let bad: InstanceDocument = from_json(r#"{"agents":["x"],"layers":[{"x":["q"]}]}"#).unwrap();
        assert!(bad.to_instance().is_err());
        assert!(from_json::<InstanceDocument>("{").is_err());
    }

    #[test]
    fn matching_round_trip() {
        let names = default_names(5);
        let m = Matching::from_pairs(5, &[(0, 3), (1, 4)]).unwrap();
        let doc = MatchingDocument::from_matching(&m, &names);
        assert_eq!(doc.pairs[0], ["a1".to_string(), "a4".to_string()]);
        let back: MatchingDocument = from_json(&to_json(&doc)).unwrap();
        assert_eq!(back.to_matching(&names).unwrap(), m);
    }

    #[test]
    fn query_flags() {
        let q = parse_query("super", "pair", Some(2)).unwrap();
        assert_eq!(QueryDocument::from_query(&q).to_query().unwrap(), q);
        assert_eq!(parse_query("weak", "all", Some(5)).unwrap().agg, Aggregation::AllLayers);
        assert!(parse_query("weak", "global", None).is_err());
        assert!(parse_query("medium", "all", None).is_err());
    }
}
