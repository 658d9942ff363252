use std::fmt;

use crate::blocking::StabilityBase;
use crate::error::{Error, Result};
use crate::matching::Matching;
use crate::model::{AgentId, MultilayerInstance};
use crate::verify::{Aggregation, StabilityQuery};

use super::GeneratedInstance;

/// A literal over variables `0..num_vars`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Literal {
    pub var: usize,
    pub positive: bool,
}

impl Literal {
    pub fn pos(var: usize) -> Self {
        Self { var, positive: true }
    }

    pub fn neg(var: usize) -> Self {
        Self { var, positive: false }
    }

    pub fn holds(self, assignment: &[bool]) -> bool {
        assignment[self.var] == self.positive
    }
}

/// A CNF formula in which every clause has exactly three literals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CnfFormula {
    pub num_vars: usize,
    pub clauses: Vec<[Literal; 3]>,
}

impl CnfFormula {
    pub fn new(num_vars: usize, clauses: Vec<[Literal; 3]>) -> Result<Self> {
        for c in &clauses {
            if let Some(l) = c.iter().find(|l| l.var >= num_vars) {
                return Err(Error::MalformedFormula(format!("variable {} out of range", l.var + 1)));
            }
        }
        Ok(Self { num_vars, clauses })
    }

    /// Parses DIMACS CNF (`p cnf V C` header, zero-terminated clauses).
    pub fn parse_dimacs(text: &str) -> Result<Self> {
        let mut num_vars = None;
        let mut declared_clauses = None;
        let mut clauses = Vec::new();
        let mut current = Vec::new();
        for line in text.lines().map(str::trim) {
            if line.is_empty() || line.starts_with('c') || line.starts_with('%') {
                continue;
            }
            if let Some(rest) = line.strip_prefix('p') {
                let parts: Vec<_> = rest.split_whitespace().collect();
                match parts.as_slice() {
                    ["cnf", v, c] => {
                        num_vars = Some(
                            v.parse::<usize>()
                                .map_err(|_| Error::MalformedFormula(format!("bad header `{line}`")))?,
                        );
                        declared_clauses = Some(
                            c.parse::<usize>()
                                .map_err(|_| Error::MalformedFormula(format!("bad header `{line}`")))?,
                        );
                    }
                    _ => return Err(Error::MalformedFormula(format!("bad header `{line}`"))),
                }
                continue;
            }
            let vars = num_vars.ok_or_else(|| Error::MalformedFormula("clause before header".into()))?;
            for tok in line.split_whitespace() {
                let lit: i64 = tok
                    .parse()
                    .map_err(|_| Error::MalformedFormula(format!("bad literal `{tok}`")))?;
                if lit == 0 {
                    let clause: [Literal; 3] = std::mem::take(&mut current).try_into().map_err(|c: Vec<Literal>| {
                        Error::MalformedFormula(format!(
                            "clause {} has {} literals, expected 3",
                            clauses.len() + 1,
                            c.len()
                        ))
                    })?;
                    clauses.push(clause);
                } else {
                    let var = lit.unsigned_abs() as usize;
                    if var > vars {
                        return Err(Error::MalformedFormula(format!(
                            "variable {var} exceeds declared {vars}"
                        )));
                    }
                    current.push(Literal {
                        var: var - 1,
                        positive: lit > 0,
                    });
                }
            }
        }
        if !current.is_empty() {
            return Err(Error::MalformedFormula("last clause is not terminated by 0".into()));
        }
        let num_vars = num_vars.ok_or_else(|| Error::MalformedFormula("missing `p cnf` header".into()))?;
        if declared_clauses.is_some_and(|c| c != clauses.len()) {
            return Err(Error::MalformedFormula(format!(
                "header declares {} clauses, found {}",
                declared_clauses.unwrap(),
                clauses.len()
            )));
        }
        Self::new(num_vars, clauses)
    }

    /// Every variable occurs at most twice positively and twice negatively.
    pub fn check_occurrence_bounds(&self) -> Result<()> {
        let mut pos = vec![0usize; self.num_vars];
        let mut neg = vec![0usize; self.num_vars];
        for l in self.clauses.iter().flatten() {
            if l.positive {
                pos[l.var] += 1;
            } else {
                neg[l.var] += 1;
            }
        }
        match (0..self.num_vars).find(|&v| pos[v] > 2 || neg[v] > 2) {
            Some(v) => Err(Error::MalformedFormula(format!(
                "variable {} occurs {} times positively and {} times negatively (at most 2 each)",
                v + 1,
                pos[v],
                neg[v]
            ))),
            None => Ok(()),
        }
    }

    pub fn satisfied_by(&self, assignment: &[bool]) -> bool {
        self.clauses.iter().all(|c| c.iter().any(|l| l.holds(assignment)))
    }
}

impl fmt::Display for CnfFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "p cnf {} {}", self.num_vars, self.clauses.len())?;
        for c in &self.clauses {
            for l in c {
                let v = l.var as i64 + 1;
                write!(f, "{} ", if l.positive { v } else { -v })?;
            }
            writeln!(f, "0")?;
        }
        Ok(())
    }
}

/// A satisfying assignment found by trying all of them, if any.
pub fn brute_force_sat(f: &CnfFormula) -> Option<Vec<bool>> {
    assert!(f.num_vars < 32, "brute force is for tiny formulas");
    (0u32..1 << f.num_vars)
        .map(|mask| (0..f.num_vars).map(|v| mask >> v & 1 == 1).collect::<Vec<_>>())
        .find(|a| f.satisfied_by(a))
}

/// Two-layer symmetric bipartite instance with an all-layers weakly stable
/// matching iff the formula is satisfiable.
///
/// Variable x gets a_x, a_x̄, b⁺_x, b⁻_x: both a-agents approve both b-agents
/// in layer 1 and only b⁺_x in layer 2, so whichever a-agent takes b⁺_x is
/// the true literal. Clause c gets α¹, α², β¹, β², β³ with α¹ approving β¹,
/// β² and α² approving β², β³ in both layers; in layer 2, βⁱ also approves
/// the agent of the i-th literal.
#[derive(Debug, Clone)]
pub struct SatReduction {
    pub generated: GeneratedInstance,
    pub formula: CnfFormula,
}

impl SatReduction {
    pub fn literal_agent(&self, l: Literal) -> AgentId {
        4 * l.var + usize::from(!l.positive)
    }

    pub fn b_plus(&self, var: usize) -> AgentId {
        4 * var + 2
    }

    pub fn b_minus(&self, var: usize) -> AgentId {
        4 * var + 3
    }

    /// Agents α¹, α², β¹, β², β³ of clause `c`.
    pub fn clause_agents(&self, c: usize) -> [AgentId; 5] {
        let base = 4 * self.formula.num_vars + 5 * c;
        [base, base + 1, base + 2, base + 3, base + 4]
    }

    /// The matching built from a satisfying assignment; `None` if it does not satisfy.
    pub fn forward(&self, assignment: &[bool]) -> Option<Matching> {
        let f = &self.formula;
        let mut pairs = Vec::new();
        for (x, &value) in assignment.iter().enumerate().take(f.num_vars) {
            let (winner, loser) = if value {
                (Literal::pos(x), Literal::neg(x))
            } else {
                (Literal::neg(x), Literal::pos(x))
            };
            pairs.push((self.literal_agent(winner), self.b_plus(x)));
            pairs.push((self.literal_agent(loser), self.b_minus(x)));
        }
        for (c, clause) in f.clauses.iter().enumerate() {
            let i = clause.iter().position(|l| l.holds(assignment))?;
            let [a1, a2, b1, b2, b3] = self.clause_agents(c);
            pairs.extend(match i {
                0 => [(a1, b2), (a2, b3)],
                1 => [(a1, b1), (a2, b3)],
                _ => [(a1, b1), (a2, b2)],
            });
        }
        Matching::from_pairs(self.generated.instance.n(), &pairs).ok()
    }

    /// Reads the assignment off a matching: x is true iff a_x holds b⁺_x.
    pub fn backward(&self, m: &Matching) -> Vec<bool> {
        (0..self.formula.num_vars)
            .map(|x| m.contains(self.literal_agent(Literal::pos(x)), self.b_plus(x)))
            .collect()
    }
}

pub fn reduce_sat_to_alllayers_weak(f: &CnfFormula) -> Result<SatReduction> {
    f.check_occurrence_bounds()?;
    let nv = f.num_vars;
    let n = 4 * nv + 5 * f.clauses.len();
    let mut shell = SatReduction {
        generated: GeneratedInstance {
            instance: MultilayerInstance::empty(0, 1)?,
            query: StabilityQuery::new(StabilityBase::Weak, Aggregation::AllLayers),
            names: Vec::new(),
        },
        formula: f.clone(),
    };
    let mut layers = vec![Vec::new(), Vec::new()];
    let mut names = Vec::with_capacity(n);
    for x in 0..nv {
        let (ax, anx) = (
            shell.literal_agent(Literal::pos(x)),
            shell.literal_agent(Literal::neg(x)),
        );
        let (bp, bm) = (shell.b_plus(x), shell.b_minus(x));
        layers[0].extend([(ax, bp), (ax, bm), (anx, bp), (anx, bm)]);
        layers[1].extend([(ax, bp), (anx, bp)]);
        let v = x + 1;
        names.extend([
            format!("a_x{v}"),
            format!("a_not_x{v}"),
            format!("b+_x{v}"),
            format!("b-_x{v}"),
        ]);
    }
    for (c, clause) in f.clauses.iter().enumerate() {
        let [a1, a2, b1, b2, b3] = shell.clause_agents(c);
        for layer in layers.iter_mut() {
            layer.extend([(a1, b1), (a1, b2), (a2, b2), (a2, b3)]);
        }
        for (i, &l) in clause.iter().enumerate() {
            layers[1].push(([b1, b2, b3][i], shell.literal_agent(l)));
        }
        let k = c + 1;
        names.extend([
            format!("alpha1_c{k}"),
            format!("alpha2_c{k}"),
            format!("beta1_c{k}"),
            format!("beta2_c{k}"),
            format!("beta3_c{k}"),
        ]);
    }
    shell.generated.instance = MultilayerInstance::from_symmetric_edges(n, &layers)?;
    shell.generated.names = names;
    Ok(shell)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verify::is_stable;

    fn one_clause() -> CnfFormula {
        CnfFormula::new(3, vec![[Literal::pos(0), Literal::pos(1), Literal::pos(2)]]).unwrap()
    }

    #[test]
    fn dimacs_round_trip() {
        let f = CnfFormula::parse_dimacs("c tiny\np cnf 3 1\n1 2 3 0\n").unwrap();
        assert_eq!(f, one_clause());
        assert_eq!(CnfFormula::parse_dimacs(&f.to_string()).unwrap(), f);
        assert!(CnfFormula::parse_dimacs("p cnf 2 1\n1 2 0\n").is_err());
        assert!(CnfFormula::parse_dimacs("p cnf 2 1\n1 5 2 0\n").is_err());
        assert!(CnfFormula::parse_dimacs("1 2 3 0\n").is_err());
    }

    #[test]
    fn occurrence_bounds() {
        let x = Literal::pos(0);
        let f = CnfFormula::new(1, vec![[x, x, x]]).unwrap();
        assert!(matches!(
            reduce_sat_to_alllayers_weak(&f),
            Err(Error::MalformedFormula(_))
        ));
    }

    #[test]
    fn one_clause_gadget() {
        let r = reduce_sat_to_alllayers_weak(&one_clause()).unwrap();
        let inst = &r.generated.instance;
        assert_eq!((inst.n(), inst.ell()), (17, 2));
        assert!(inst.is_symmetric());
        assert!(inst.bipartition().is_some());
        assert!((0..2).all(|i| (0..17).all(|a| inst.approvals(i, a).len() <= 3)));
        let assignment = vec![true, false, false];
        let m = r.forward(&assignment).unwrap();
        assert!(is_stable(inst, &m, &r.generated.query));
        assert_eq!(r.backward(&m), assignment);
        assert!(r.forward(&[false, false, false]).is_none());
    }

    #[test]
    fn brute_force() {
        assert!(brute_force_sat(&one_clause()).is_some());
        let (x, y) = (0, 1);
        let f = CnfFormula::new(
            2,
            vec![
                [Literal::pos(x), Literal::pos(x), Literal::pos(y)],
                [Literal::neg(x), Literal::neg(x), Literal::pos(y)],
                [Literal::neg(y), Literal::neg(y), Literal::neg(y)],
            ],
        )
        .unwrap();
        assert!(brute_force_sat(&f).is_none());
    }
}
