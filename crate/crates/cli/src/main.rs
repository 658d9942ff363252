use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};

use mlstable::blocking::stable_layers;
use mlstable::io::{
    default_names, from_json, one_based, pairs_by_name, parse_query, to_json, CertificateDocument, InstanceDocument,
    MatchingDocument, QueryDocument, VerdictDocument,
};
use mlstable::oracle::{oracle_all, oracle_solve, OracleBudget};
use mlstable::reductions::{
    append_empty_layers, brute_force_degree_partition, brute_force_independent_set, brute_force_sat, gen_random,
    parse_graph, reduce_degreepartition_to_pair_super, reduce_is_to_global_strong, reduce_sat_to_alllayers_weak,
    CnfFormula, GeneratedInstance,
};
use mlstable::solvers::{dispatch, DispatchLimits, Outcome};
use mlstable::suites::{run_suite, SUITES};
use mlstable::verify::{check, Witness};
use mlstable::{Matching, MultilayerInstance, StabilityQuery};

/// Stable matchings under multilayer approval preferences.
#[derive(Parser)]
#[command(name = "mlstable", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a matching. Exit 0 if stable, 1 if not.
    Check {
        instance: PathBuf,
        matching: PathBuf,
        #[command(flatten)]
        query: QueryArgs,
    },
    /// Decide whether a stable matching exists. Exit 0 exists, 1 none, 3 unknown.
    Solve {
        instance: PathBuf,
        #[command(flatten)]
        query: QueryArgs,
        /// Largest agent count the exhaustive fallback may take on.
        #[arg(long, default_value_t = 12)]
        budget: usize,
    },
    /// Exhaustive search. Exit 0 if a stable matching exists, 1 if not.
    Oracle {
        instance: PathBuf,
        #[command(flatten)]
        query: QueryArgs,
        /// List every stable matching.
        #[arg(long)]
        all: bool,
        #[arg(long, default_value_t = 12)]
        budget: usize,
    },
    /// Write a random instance or a hardness construction.
    Gen {
        #[command(subcommand)]
        kind: GenKind,
    },
    /// Run a randomized self-check suite: lattice, solver-vs-oracle, superstable-count.
    Bench {
        suite: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        trials: usize,
    },
}

#[derive(Args)]
struct QueryArgs {
    /// weak, strong or super. Defaults to the query stored in the instance.
    #[arg(long)]
    base: Option<String>,
    /// all, global, pair or individual.
    #[arg(long, default_value = "all")]
    agg: String,
    /// Required except with `--agg all`.
    #[arg(long)]
    alpha: Option<usize>,
}

#[derive(Args)]
struct OutArgs {
    /// Instance file; standard output if absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Certificate file; defaults to `<out>.cert.json`.
    #[arg(long)]
    cert: Option<PathBuf>,
}

#[derive(Subcommand)]
enum GenKind {
    Random {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        layers: usize,
        #[arg(long)]
        p: f64,
        #[arg(long)]
        symmetric: bool,
        #[arg(long)]
        bipartite: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        out: OutArgs,
    },
    /// All-layers weak stability from a DIMACS formula.
    Sat {
        #[arg(long)]
        cnf: PathBuf,
        /// Layer count; layers beyond two are empty.
        #[arg(long, default_value_t = 2)]
        layers: usize,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Global strong stability from an independent set question.
    Is {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        k: usize,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Pair super stability from a degree-one partition question.
    Degpart {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, default_value_t = 2)]
        layers: usize,
        #[arg(long, default_value_t = 1)]
        alpha: usize,
        #[command(flatten)]
        out: OutArgs,
    },
}

struct Loaded {
    inst: MultilayerInstance,
    names: Vec<String>,
    stored_query: Option<QueryDocument>,
}

fn load_instance(path: &Path) -> anyhow::Result<Loaded> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let doc: InstanceDocument = from_json(&text).with_context(|| format!("parsing {}", path.display()))?;
    let inst = doc
        .to_instance()
        .with_context(|| format!("building {}", path.display()))?;
    Ok(Loaded {
        inst,
        names: doc.agents,
        stored_query: doc.query,
    })
}

impl QueryArgs {
    fn resolve(&self, loaded: &Loaded) -> anyhow::Result<StabilityQuery> {
        let q = match (&self.base, &loaded.stored_query) {
            (Some(base), _) => parse_query(base, &self.agg, self.alpha)?,
            (None, Some(doc)) => doc.to_query()?,
            (None, None) => bail!("no --base given and the instance stores no query"),
        };
        q.validate(loaded.inst.ell())
            .with_context(|| format!("invalid query {q}"))?;
        Ok(q)
    }
}

fn print_verdict(doc: &VerdictDocument) {
    println!("{}", to_json(doc));
}

fn elapsed_ms(start: Instant) -> f64 {
    start.elapsed().as_secs_f64() * 1000.0
}

fn cmd_check(instance: &Path, matching: &Path, query: &QueryArgs) -> anyhow::Result<ExitCode> {
    let start = Instant::now();
    let loaded = load_instance(instance)?;
    let q = query.resolve(&loaded)?;
    let text = fs::read_to_string(matching).with_context(|| format!("reading {}", matching.display()))?;
    let mdoc: MatchingDocument = from_json(&text)?;
    let m = mdoc.to_matching(&loaded.names)?;
    let verdict = check(&loaded.inst, &m, &q)?;
    let mut doc = VerdictDocument {
        stable: Some(verdict.stable),
        status: if verdict.stable { "stable" } else { "unstable" }.into(),
        query: q.to_string(),
        matching: Some(mdoc.pairs),
        ..Default::default()
    };
    match verdict.witness {
        Witness::Layers(layers) => doc.witness_layers = Some(one_based(&layers)),
        Witness::Violation(v) => {
            let (a, b) = v.pair;
            doc.violating_pair = Some([loaded.names[a].clone(), loaded.names[b].clone()]);
            doc.blocking_layers = Some(one_based(&v.blocking_layers));
        }
        Witness::None => {}
    }
    doc.elapsed_ms = elapsed_ms(start);
    print_verdict(&doc);
    Ok(ExitCode::from(if verdict.stable { 0 } else { 1 }))
}

fn cmd_solve(instance: &Path, query: &QueryArgs, budget: usize) -> anyhow::Result<ExitCode> {
    let start = Instant::now();
    let loaded = load_instance(instance)?;
    let q = query.resolve(&loaded)?;
    let limits = DispatchLimits {
        oracle: OracleBudget::agents(budget),
        ..DispatchLimits::default()
    };
    let r = dispatch(&loaded.inst, &q, &limits)?;
    let mut doc = VerdictDocument {
        query: q.to_string(),
        algorithm: Some(r.algorithm.name().into()),
        witness_layers: r.witness_layers.as_deref().map(one_based),
        ..Default::default()
    };
    let code = match &r.outcome {
        Outcome::Exists(m) => {
            if !check(&loaded.inst, m, &q)?.stable {
                bail!("solver {} returned a matching that does not verify", r.algorithm);
            }
            doc.exists = Some(true);
            doc.status = "exists".into();
            doc.matching = Some(pairs_by_name(m, &loaded.names));
            0
        }
        Outcome::NotExists => {
            doc.exists = Some(false);
            doc.status = "not-exists".into();
            1
        }
        Outcome::Unknown => {
            doc.status = "unknown".into();
            3
        }
    };
    doc.elapsed_ms = elapsed_ms(start);
    print_verdict(&doc);
    Ok(ExitCode::from(code))
}

fn cmd_oracle(instance: &Path, query: &QueryArgs, all: bool, budget: usize) -> anyhow::Result<ExitCode> {
    let start = Instant::now();
    let loaded = load_instance(instance)?;
    let q = query.resolve(&loaded)?;
    let budget = OracleBudget::agents(budget);
    let mut doc = VerdictDocument {
        query: q.to_string(),
        algorithm: Some("oracle".into()),
        ..Default::default()
    };
    let found: Option<Matching> = if all {
        let every = oracle_all(&loaded.inst, &q, &budget)?;
        doc.matchings = Some(every.iter().map(|m| pairs_by_name(m, &loaded.names)).collect());
        every.into_iter().next()
    } else {
        oracle_solve(&loaded.inst, &q, &budget)?
    };
    doc.exists = Some(found.is_some());
    doc.status = if found.is_some() { "exists" } else { "not-exists" }.into();
    if let Some(m) = &found {
        doc.matching = Some(pairs_by_name(m, &loaded.names));
        if matches!(
            q.agg,
            mlstable::Aggregation::AllLayers | mlstable::Aggregation::Global(_)
        ) {
            doc.witness_layers = Some(one_based(&stable_layers(&loaded.inst, m, q.base)));
        }
    }
    doc.elapsed_ms = elapsed_ms(start);
    print_verdict(&doc);
    Ok(ExitCode::from(if found.is_some() { 0 } else { 1 }))
}

/// Brute-forcing the source problem is skipped above this many variables or vertices.
const BRUTE_FORCE_LIMIT: usize = 20;

fn write_outputs(
    out: &OutArgs,
    generated: &GeneratedInstance,
    cert: Option<CertificateDocument>,
) -> anyhow::Result<()> {
    let mut doc = InstanceDocument::from_instance(&generated.instance, &generated.names);
    doc.query = cert.as_ref().map(|c| c.query.clone());
    let text = to_json(&doc);
    match &out.out {
        Some(path) => fs::write(path, text + "\n").with_context(|| format!("writing {}", path.display()))?,
        None => println!("{text}"),
    }
    if let Some(cert) = cert {
        let path = match (&out.cert, &out.out) {
            (Some(p), _) => p.clone(),
            (None, Some(o)) => {
                let mut s = o.clone().into_os_string();
                s.push(".cert.json");
                PathBuf::from(s)
            }
            (None, None) => return Ok(()),
        };
        fs::write(&path, to_json(&cert) + "\n").with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(())
}

fn certificate(
    construction: &str,
    generated: &GeneratedInstance,
    source_answer: Option<bool>,
    source_solution: Option<serde_json::Value>,
    matching: Option<&Matching>,
) -> CertificateDocument {
    CertificateDocument {
        construction: construction.into(),
        query: QueryDocument::from_query(&generated.query),
        source_answer,
        source_solution,
        matching: matching.map(|m| pairs_by_name(m, &generated.names)),
        witness_layers: None,
    }
}

fn cmd_gen(kind: &GenKind) -> anyhow::Result<ExitCode> {
    match kind {
        GenKind::Random {
            n,
            layers,
            p,
            symmetric,
            bipartite,
            seed,
            out,
        } => {
            let instance = gen_random(*n, *layers, *p, *symmetric, *bipartite, *seed)?;
            let generated = GeneratedInstance {
                names: default_names(instance.n()),
                query: StabilityQuery::new(mlstable::StabilityBase::Weak, mlstable::Aggregation::AllLayers),
                instance,
            };
            write_outputs(out, &generated, None)?;
        }
        GenKind::Sat { cnf, layers, out } => {
            let text = fs::read_to_string(cnf).with_context(|| format!("reading {}", cnf.display()))?;
            let formula = CnfFormula::parse_dimacs(&text)?;
            if *layers < 2 {
                bail!("the construction needs at least two layers");
            }
            let mut r = reduce_sat_to_alllayers_weak(&formula)?;
            r.generated.instance = append_empty_layers(&r.generated.instance, layers - 2);
            let solution = (formula.num_vars <= BRUTE_FORCE_LIMIT).then(|| brute_force_sat(&formula));
            let m = solution.as_ref().and_then(|s| s.as_ref()).and_then(|a| r.forward(a));
            let cert = certificate(
                "sat-to-all-layers-weak",
                &r.generated,
                solution.as_ref().map(Option::is_some),
                solution.flatten().map(|a| serde_json::json!(a)),
                m.as_ref(),
            );
            write_outputs(out, &r.generated, Some(cert))?;
        }
        GenKind::Is { graph, k, out } => {
            let g = parse_graph(&fs::read_to_string(graph).with_context(|| format!("reading {}", graph.display()))?)?;
            let r = reduce_is_to_global_strong(&g, *k)?;
            let solution = (g.n() <= BRUTE_FORCE_LIMIT).then(|| brute_force_independent_set(&g, *k));
            let image = solution.as_ref().and_then(|s| s.as_ref()).and_then(|s| r.forward(s));
            let mut cert = certificate(
                "independent-set-to-global-strong",
                &r.generated,
                solution.as_ref().map(Option::is_some),
                solution.flatten().map(|s| serde_json::json!(one_based(&s))),
                image.as_ref().map(|(m, _)| m),
            );
            cert.witness_layers = image.map(|(_, layers)| one_based(&layers));
            write_outputs(out, &r.generated, Some(cert))?;
        }
        GenKind::Degpart {
            graph,
            layers,
            alpha,
            out,
        } => {
            let g = parse_graph(&fs::read_to_string(graph).with_context(|| format!("reading {}", graph.display()))?)?;
            let r = reduce_degreepartition_to_pair_super(&g, *layers, *alpha)?;
            let solution = (g.n() <= BRUTE_FORCE_LIMIT).then(|| brute_force_degree_partition(&g));
            let m = solution.as_ref().and_then(|s| s.as_ref()).and_then(|s| r.forward(s));
            let first_part = |s: Vec<bool>| {
                let part: Vec<usize> = (0..s.len()).filter(|&v| s[v]).map(|v| v + 1).collect();
                serde_json::json!(part)
            };
            let cert = certificate(
                "degree-partition-to-pair-super",
                &r.generated,
                solution.as_ref().map(Option::is_some),
                solution.flatten().map(first_part),
                m.as_ref(),
            );
            write_outputs(out, &r.generated, Some(cert))?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_bench(suite: &str, seed: u64, trials: usize) -> anyhow::Result<ExitCode> {
    let Some(report) = run_suite(suite, seed, trials) else {
        bail!("unknown suite `{suite}`; expected one of {}", SUITES.join(", "));
    };
    println!(
        "{}: {} trials, {} checks, {} failures, {:.1} ms",
        report.name,
        report.trials,
        report.checks,
        report.failures.len(),
        report.elapsed.as_secs_f64() * 1000.0
    );
    for f in report.failures.iter().take(20) {
        println!("  {f}");
    }
    Ok(if report.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    match &cli.command {
        Command::Check {
            instance,
            matching,
            query,
        } => cmd_check(instance, matching, query),
        Command::Solve {
            instance,
            query,
            budget,
        } => cmd_solve(instance, query, *budget),
        Command::Oracle {
            instance,
            query,
            all,
            budget,
        } => cmd_oracle(instance, query, *all, *budget),
        Command::Gen { kind } => cmd_gen(kind),
        Command::Bench { suite, seed, trials } => cmd_bench(suite, *seed, *trials),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
