//! The `cqa` command line: argument parsing, input loading, output and exit
//! codes. The binary only forwards to [`run`].

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::classify::{build_check_fdet, classify, fdet_violation};
use crate::entail::{build_qent, build_qent_al, entails, EntMethod, Semantics};
use crate::error::Error;
use crate::fo::{evaluate, EvalContext, Formula};
use crate::gadgets::{horn3sat_to_wc, stcon_to_rc, stcon_to_wc, Digraph, HornFormula};
use crate::model::{consistent, holds, violations, Dependency, FactSet, Schema, Ucq};
use crate::options::{Options, DEFAULT_CAP, HARD_CAP_LIMIT, SOFT_CAP_LIMIT};
use crate::repair::{
    build_check_repair, enumerate_repairs, repair_check, repair_check_sentence, RcMethod,
};
use crate::syntax::{
    parse_database, parse_document, parse_query, print_dependencies, print_facts, print_fo,
    print_schema, ParseError, Section,
};
use crate::weakcons::{build_wcons, build_wcons_al, weakly_consistent, WcMethod};

/// Answer was true / the command succeeded.
pub const EXIT_TRUE: i32 = 0;
pub const EXIT_FALSE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
/// Method inapplicable to the input's class, or a size limit was hit.
pub const EXIT_REFUSED: i32 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "cqa",
    version,
    about = "Consistent query answering under tuple-deletion repairs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Structural classes of the dependencies (and FDET on a database).
    Classify(Inputs),
    /// Whether the database satisfies the dependencies.
    Consistent(Inputs),
    /// Whether the dependencies are forward-deterministic on the database.
    Fdet(Inputs),
    /// Whether a subset extends to a consistent subset of the database.
    Weakcons(WeakconsArgs),
    /// Whether a subset is a repair of the database.
    Repaircheck(RepaircheckArgs),
    /// All repairs and their intersection.
    Repairs(Inputs),
    /// Whether a Boolean query is entailed under AllRep or IntRep.
    Entail(EntailArgs),
    /// Prints one of the first-order rewritings.
    Rewrite(RewriteArgs),
    /// Writes a reduction instance with its known answer.
    Gadget(GadgetArgs),
    /// Runs every applicable method against the brute-force oracle.
    Oracle(OracleArgs),
}

#[derive(Args, Debug, Clone)]
struct Inputs {
    /// Dependency file; may also hold `schema:`, `database:` and `query:` sections.
    #[arg(short = 'c', long = "deps", value_name = "FILE")]
    deps: Option<PathBuf>,
    /// Database file.
    #[arg(short = 'd', long = "db", value_name = "FILE")]
    db: Option<PathBuf>,
    /// Print JSON instead of text.
    #[arg(long)]
    json: bool,
    /// Largest database the exhaustive searches accept.
    #[arg(long, env = "CQA_CAP", value_name = "N")]
    cap: Option<usize>,
}

#[derive(Args, Debug, Clone)]
struct QueryArgs {
    /// Query text, or a path to a query file.
    #[arg(short = 'q', long = "query", value_name = "QUERY")]
    query: Option<String>,
    #[arg(long = "query-file", value_name = "FILE")]
    query_file: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct WeakconsArgs {
    #[command(flatten)]
    inputs: Inputs,
    /// Subset file, in database syntax.
    #[arg(short = 's', long = "subset", value_name = "FILE")]
    subset: PathBuf,
    #[arg(long, default_value = "auto")]
    method: WcMethod,
}

#[derive(Args, Debug)]
struct RepaircheckArgs {
    #[command(flatten)]
    inputs: Inputs,
    #[arg(short = 's', long = "subset", value_name = "FILE")]
    subset: PathBuf,
    #[arg(long, default_value = "auto")]
    method: RcMethod,
}

#[derive(Args, Debug)]
struct EntailArgs {
    #[command(flatten)]
    inputs: Inputs,
    #[command(flatten)]
    query: QueryArgs,
    #[arg(long, default_value = "allrep")]
    semantics: Semantics,
    #[arg(long, default_value = "auto")]
    method: EntMethod,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Target {
    CheckFdet,
    Wcons,
    WconsAl,
    CheckRepair,
    Qent,
    QentAl,
}

#[derive(Args, Debug)]
struct RewriteArgs {
    #[arg(long, value_enum)]
    target: Target,
    #[command(flatten)]
    inputs: Inputs,
    #[command(flatten)]
    query: QueryArgs,
    /// Also evaluate the sentence on the database with this subset as the
    /// auxiliary copy.
    #[arg(long = "aux-subset", value_name = "FILE")]
    aux_subset: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum GadgetKind {
    Stcon,
    Horn3sat,
}

#[derive(Args, Debug)]
struct GadgetArgs {
    #[arg(value_enum)]
    kind: GadgetKind,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Largest number of vertices (stcon) or variables (horn3sat).
    #[arg(long, default_value_t = 6)]
    size: usize,
    /// Output directory; created if missing.
    #[arg(long, value_name = "DIR")]
    out: PathBuf,
    #[arg(long)]
    json: bool,
}

#[derive(Args, Debug)]
struct OracleArgs {
    #[command(flatten)]
    inputs: Inputs,
    #[command(flatten)]
    query: QueryArgs,
    #[arg(short = 's', long = "subset", value_name = "FILE")]
    subset: Option<PathBuf>,
}

/// A failure that ends the command with a diagnostic.
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::MethodInapplicable { .. }
            | Error::InstanceTooLarge { .. }
            | Error::FormulaTooLarge { .. }
            | Error::NotAcyclic
            | Error::NotLinear
            | Error::NotFdet(_) => EXIT_REFUSED,
            _ => EXIT_USAGE,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

type CliResult = std::result::Result<i32, Failure>;

/// Renders a parse error against its source with a caret under the span.
fn diagnostic(path: &Path, text: &str, e: &ParseError) -> String {
    let line = text
        .lines()
        .nth(e.span.line.saturating_sub(1))
        .unwrap_or("");
    let width = e.span.end.saturating_sub(e.span.start).max(1);
    format!(
        "{}:{}:{}: {} [{}]\n  | {line}\n  | {}{}",
        path.display(),
        e.span.line,
        e.span.column,
        e.message,
        e.code,
        " ".repeat(e.span.column.saturating_sub(1)),
        "^".repeat(width)
    )
}

fn read(path: &Path) -> std::result::Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

fn parsed<T>(
    path: &Path,
    text: &str,
    r: std::result::Result<T, ParseError>,
) -> std::result::Result<T, Failure> {
    r.map_err(|e| Failure::usage(diagnostic(path, text, &e)))
}

/// Dependencies, database and optional query gathered from the input files.
struct Loaded {
    sigma: Vec<Dependency>,
    schema: Schema,
    facts: Option<FactSet>,
    query: Option<Ucq>,
    opts: Options,
}

impl Loaded {
    fn facts(&self) -> std::result::Result<&FactSet, Failure> {
        self.facts
            .as_ref()
            .ok_or_else(|| Failure::usage("a database is required (-d FILE)"))
    }

    fn subset(&self, path: &Path) -> std::result::Result<FactSet, Failure> {
        let text = read(path)?;
        Ok(parsed(path, &text, parse_database(&text, &self.schema))?.facts)
    }

    fn query(&mut self, q: &QueryArgs) -> std::result::Result<Ucq, Failure> {
        let (path, text) = match (&q.query, &q.query_file) {
            (Some(_), Some(_)) => {
                return Err(Failure::usage(
                    "give the query either with -q or with --query-file",
                ))
            }
            (None, Some(p)) => (p.clone(), read(p)?),
            (Some(s), None) if Path::new(s).is_file() => (PathBuf::from(s), read(Path::new(s))?),
            (Some(s), None) => (PathBuf::from("<query>"), s.clone()),
            (None, None) => {
                return self.query.take().ok_or_else(|| {
                    Failure::usage("a query is required (-q QUERY or --query-file FILE)")
                })
            }
        };
        parsed(&path, &text, parse_query(&text, &self.schema))
    }
}

fn options(cap: Option<usize>, err: &mut dyn Write) -> std::result::Result<Options, Failure> {
    let cap = cap.unwrap_or(DEFAULT_CAP);
    if cap > HARD_CAP_LIMIT {
        return Err(Failure::usage(format!(
            "--cap may not exceed {HARD_CAP_LIMIT}"
        )));
    }
    if cap > SOFT_CAP_LIMIT {
        let _ = writeln!(
            err,
            "warning: cap {cap} is above {SOFT_CAP_LIMIT}; exhaustive searches may take very long"
        );
    }
    Ok(Options::with_cap(cap))
}

fn load(inputs: &Inputs, err: &mut dyn Write) -> std::result::Result<Loaded, Failure> {
    let opts = options(inputs.cap, err)?;
    let deps = inputs
        .deps
        .as_ref()
        .ok_or_else(|| Failure::usage("a dependency file is required (-c FILE)"))?;
    let text = read(deps)?;
    let doc = parsed(deps, &text, parse_document(&text, Section::Dependencies))?;
    let mut schema = doc.schema;
    let mut facts = doc.database;
    let query = doc.query;
    if let Some(db) = &inputs.db {
        // the database sees the dependency schema and may extend it
        let text = read(db)?;
        let database = parsed(db, &text, parse_database(&text, &schema))?;
        schema = database.schema;
        facts = Some(database.facts);
    }
    Ok(Loaded {
        sigma: doc.dependencies,
        schema,
        facts,
        query,
        opts,
    })
}

fn emit(out: &mut dyn Write, json: bool, value: &impl Serialize, text: impl FnOnce() -> String) {
    if json {
        let _ = writeln!(
            out,
            "{}",
            serde_json::to_string(value).expect("serializable")
        );
    } else {
        let _ = writeln!(out, "{}", text());
    }
}

fn verdict(b: bool) -> i32 {
    if b {
        EXIT_TRUE
    } else {
        EXIT_FALSE
    }
}

fn show_set(s: &FactSet) -> String {
    let v: Vec<String> = s.iter().map(|f| f.to_string()).collect();
    format!("{{{}}}", v.join(", "))
}

/// Parses `args` (including the program name) and runs the command. Returns
/// the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() {
                EXIT_USAGE
            } else {
                EXIT_TRUE
            };
            let text = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(err, "{text}");
            } else {
                let _ = write!(out, "{text}");
            }
            return code;
        }
    };
    match dispatch(cli.command, out, err) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn dispatch(cmd: Command, out: &mut dyn Write, err: &mut dyn Write) -> CliResult {
    match cmd {
        Command::Classify(i) => cmd_classify(&i, out, err),
        Command::Consistent(i) => cmd_consistent(&i, out, err),
        Command::Fdet(i) => cmd_fdet(&i, out, err),
        Command::Weakcons(a) => cmd_weakcons(&a, out, err),
        Command::Repaircheck(a) => cmd_repaircheck(&a, out, err),
        Command::Repairs(i) => cmd_repairs(&i, out, err),
        Command::Entail(a) => cmd_entail(&a, out, err),
        Command::Rewrite(a) => cmd_rewrite(&a, out, err),
        Command::Gadget(a) => cmd_gadget(&a, out),
        Command::Oracle(a) => cmd_oracle(&a, out, err),
    }
}

fn cmd_classify(i: &Inputs, out: &mut dyn Write, err: &mut dyn Write) -> CliResult {
    let l = load(i, err)?;
    let c = classify(&l.sigma, l.facts.as_ref());
    emit(out, i.json, &c, || {
        let order: Vec<String> = c.topo_order.iter().map(|k| k.to_string()).collect();
        let fdet = match c.fdet {
            Some(b) => b.to_string(),
            None => "unknown (no database)".into(),
        };
        format!(
            "linear: {}\nfull: {}\nacyclic: {}\ntopological order: [{}]\nfdet: {fdet}",
            c.linear,
            c.full,
            c.acyclic,
            order.join(", ")
        )
    });
    Ok(EXIT_TRUE)
}

fn cmd_consistent(i: &Inputs, out: &mut dyn Write, err: &mut dyn Write) -> CliResult {
    let l = load(i, err)?;
    let facts = l.facts()?;
    let violated: Vec<Value> = l
        .sigma
        .iter()
        .enumerate()
        .filter_map(|(k, d)| {
            violations(facts, d)
                .first()
                .map(|s| json!({"dependency": k, "substitution": s.to_string()}))
        })
        .collect();
    let ok = violated.is_empty();
    debug_assert_eq!(ok, consistent(facts, &l.sigma));
    let value = json!({"consistent": ok, "violations": violated});
    emit(out, i.json, &value, || {
        if ok {
            "consistent".into()
        } else {
            let lines: Vec<String> = violated
                .iter()
                .map(|v| {
                    format!(
                        "  dependency {} violated by {}",
                        v["dependency"],
                        v["substitution"].as_str().unwrap_or("")
                    )
                })
                .collect();
            format!("inconsistent\n{}", lines.join("\n"))
        }
    });
    Ok(verdict(ok))
}

fn cmd_fdet(i: &Inputs, out: &mut dyn Write, err: &mut dyn Write) -> CliResult {
    let l = load(i, err)?;
    let facts = l.facts()?;
    let v = fdet_violation(&l.sigma, facts);
    let value = json!({
        "fdet": v.is_none(),
        "violation": v.as_ref().map(|v| json!({
            "dependency": v.dependency,
            "substitution": v.substitution.to_string(),
            "images": v.images,
        })),
    });
    emit(out, i.json, &value, || match &v {
        None => "fdet".into(),
        Some(v) => {
            let imgs: Vec<String> = v.images.iter().map(show_set).collect();
            format!(
                "not fdet: dependency {} under {} has images {}",
                v.dependency,
                v.substitution,
                imgs.join(" and ")
            )
        }
    });
    Ok(verdict(v.is_none()))
}

fn cmd_weakcons(a: &WeakconsArgs, out: &mut dyn Write, err: &mut dyn Write) -> CliResult {
    let l = load(&a.inputs, err)?;
    let subset = l.subset(&a.subset)?;
    let o = weakly_consistent(&subset, l.facts()?, &l.sigma, a.method, &l.opts)?;
    emit(out, a.inputs.json, &o, || {
        let mut s = format!(
            "{} (method {})",
            if o.weakly_consistent {
                "weakly consistent"
            } else {
                "not weakly consistent"
            },
            o.method
        );
        if let Some(w) = &o.witness_superset {
            s.push_str(&format!("\nconsistent superset: {}", show_set(w)));
        }
        s
    });
    Ok(verdict(o.weakly_consistent))
}

fn cmd_repaircheck(a: &RepaircheckArgs, out: &mut dyn Write, err: &mut dyn Write) -> CliResult {
    let l = load(&a.inputs, err)?;
    let subset = l.subset(&a.subset)?;
    let o = repair_check(&subset, l.facts()?, &l.sigma, a.method, &l.opts)?;
    emit(out, a.inputs.json, &o, || {
        let mut s = format!(
            "{} (method {})",
            if o.is_repair {
                "repair"
            } else {
                "not a repair"
            },
            o.method
        );
        if let Some(f) = &o.blocking_fact {
            s.push_str(&format!("\ncan be extended by {f}"));
        }
        s
    });
    Ok(verdict(o.is_repair))
}

fn cmd_repairs(i: &Inputs, out: &mut dyn Write, err: &mut dyn Write) -> CliResult {
    let l = load(i, err)?;
    let rs = enumerate_repairs(l.facts()?, &l.sigma, &l.opts)?;
    emit(out, i.json, &rs, || {
        let mut s = format!("{} repair(s)\n", rs.repairs.len());
        for r in &rs.repairs {
            s.push_str(&format!("  {}\n", show_set(r)));
        }
        s.push_str(&format!("intersection: {}", show_set(&rs.intersection)));
        s
    });
    Ok(EXIT_TRUE)
}

fn cmd_entail(a: &EntailArgs, out: &mut dyn Write, err: &mut dyn Write) -> CliResult {
    let mut l = load(&a.inputs, err)?;
    let q = l.query(&a.query)?;
    let o = entails(l.facts()?, &l.sigma, &q, a.semantics, a.method, &l.opts)?;
    emit(out, a.inputs.json, &o, || {
        let mut s = format!(
            "{} under {} (method {})",
            if o.entailed {
                "entailed"
            } else {
                "not entailed"
            },
            o.semantics,
            o.method
        );
        match &o.witness {
            Some(crate::entail::Witness::Repair(r)) => {
                s.push_str(&format!("\nrepair falsifying the query: {}", show_set(r)))
            }
            Some(crate::entail::Witness::Image(m)) => {
                s.push_str(&format!("\nimage in every repair: {}", show_set(m)))
            }
            None => {}
        }
        s
    });
    Ok(verdict(o.entailed))
}

fn cmd_rewrite(a: &RewriteArgs, out: &mut dyn Write, err: &mut dyn Write) -> CliResult {
    let mut l = load(&a.inputs, err)?;
    let phi: Formula = match a.target {
        Target::CheckFdet => build_check_fdet(&l.sigma),
        Target::Wcons => build_wcons(&l.sigma)?,
        Target::WconsAl => build_wcons_al(&l.sigma)?,
        Target::CheckRepair => build_check_repair(&l.sigma)?,
        Target::Qent => {
            let q = l.query(&a.query)?;
            build_qent(&q, &l.sigma, &l.opts)?
        }
        Target::QentAl => {
            let q = l.query(&a.query)?;
            build_qent_al(&q, &l.sigma)?
        }
    };
    let text = print_fo(&phi);
    let verdict_value = match &a.aux_subset {
        None => None,
        Some(path) => {
            let subset = l.subset(path)?;
            let facts = l.facts()?;
            Some(match a.target {
                Target::CheckRepair => repair_check_sentence(&phi, &subset, facts, &l.sigma)?,
                _ => evaluate(&phi, &EvalContext::new(facts, &subset))?,
            })
        }
    };
    let value = json!({"sentence": text, "verdict": verdict_value});
    emit(out, a.inputs.json, &value, || match verdict_value {
        None => text.clone(),
        Some(b) => format!("{text}\nverdict: {b}"),
    });
    Ok(verdict_value.map_or(EXIT_TRUE, verdict))
}

fn write_file(dir: &Path, name: &str, contents: &str) -> std::result::Result<String, Failure> {
    let path = dir.join(name);
    fs::write(&path, contents).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
    Ok(path.display().to_string())
}

fn cmd_gadget(a: &GadgetArgs, out: &mut dyn Write) -> CliResult {
    fs::create_dir_all(&a.out).map_err(|e| Failure::usage(format!("{}: {e}", a.out.display())))?;
    let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
    let deps_text = |schema: &Schema, sigma: &[Dependency]| {
        format!(
            "schema:\n{}\ndependencies:\n{}",
            print_schema(schema),
            print_dependencies(sigma)
        )
    };
    let mut written = Vec::new();
    let truth = match a.kind {
        GadgetKind::Stcon => {
            let g = Digraph::random(&mut rng, a.size.max(1), 0.3);
            let wc = stcon_to_wc(&g);
            let rc = stcon_to_rc(&g);
            written.push(write_file(
                &a.out,
                "deps.ded",
                &deps_text(&wc.schema, &wc.sigma),
            )?);
            written.push(write_file(&a.out, "db.db", &print_facts(&wc.facts))?);
            written.push(write_file(&a.out, "probe.db", &print_facts(&wc.probe))?);
            written.push(write_file(
                &a.out,
                "rc.ded",
                &deps_text(&rc.schema, &rc.sigma),
            )?);
            written.push(write_file(&a.out, "rc.db", &print_facts(&rc.facts))?);
            written.push(write_file(&a.out, "rc-probe.db", &print_facts(&rc.probe))?);
            let reach = g.reachable();
            json!({
                "gadget": "stcon",
                "seed": a.seed,
                "graph": g,
                "reachable": reach,
                "weakly_consistent": !reach,
                "is_repair": reach,
            })
        }
        GadgetKind::Horn3sat => {
            let n = a.size.max(1);
            let phi = HornFormula::random(&mut rng, n, 2 * n);
            let g = horn3sat_to_wc(&phi);
            written.push(write_file(
                &a.out,
                "deps.ded",
                &deps_text(&g.schema, &g.sigma),
            )?);
            written.push(write_file(&a.out, "db.db", &print_facts(&g.facts))?);
            written.push(write_file(&a.out, "probe.db", &print_facts(&g.probe))?);
            let sat = phi.satisfiable();
            json!({
                "gadget": "horn3sat",
                "seed": a.seed,
                "formula": phi,
                "satisfiable": sat,
                "weakly_consistent": sat,
            })
        }
    };
    let truth_text = serde_json::to_string_pretty(&truth).expect("serializable") + "\n";
    written.push(write_file(&a.out, "truth.json", &truth_text)?);
    emit(
        out,
        a.json,
        &json!({"files": written, "truth": truth}),
        || written.join("\n"),
    );
    Ok(EXIT_TRUE)
}

#[derive(Serialize)]
struct OracleRow {
    task: String,
    method: String,
    answer: Option<bool>,
    oracle: bool,
    /// Why the method gave no answer.
    #[serde(skip_serializing_if = "Option::is_none")]
    refused: Option<String>,
}

fn cmd_oracle(a: &OracleArgs, out: &mut dyn Write, err: &mut dyn Write) -> CliResult {
    let mut l = load(&a.inputs, err)?;
    let query = if a.query.query.is_some() || a.query.query_file.is_some() || l.query.is_some() {
        Some(l.query(&a.query)?)
    } else {
        None
    };
    let subset = a.subset.as_ref().map(|p| l.subset(p)).transpose()?;
    let facts = l.facts()?.clone();
    let class = classify(&l.sigma, Some(&facts));
    let rs = enumerate_repairs(&facts, &l.sigma, &l.opts)?;
    let mut rows = Vec::new();
    let mut push = |task: &str, method: String, r: crate::Result<bool>, oracle: bool| {
        let (answer, refused) = match r {
            Ok(b) => (Some(b), None),
            Err(e) => (None, Some(e.to_string())),
        };
        rows.push(OracleRow {
            task: task.to_string(),
            method,
            answer,
            oracle,
            refused,
        });
    };
    if let Some(s) = &subset {
        let wc = rs.repairs.iter().any(|r| s.is_subset(r));
        for &m in WcMethod::ALL
            .iter()
            .filter(|m| m.admissible(&class).is_ok())
        {
            let r = weakly_consistent(s, &facts, &l.sigma, m, &l.opts).map(|o| o.weakly_consistent);
            push("weakcons", m.to_string(), r, wc);
        }
        for &m in RcMethod::ALL
            .iter()
            .filter(|m| m.admissible(&class).is_ok())
        {
            let r = repair_check(s, &facts, &l.sigma, m, &l.opts).map(|o| o.is_repair);
            push("repaircheck", m.to_string(), r, rs.contains(s));
        }
    }
    if let Some(q) = &query {
        for &sem in Semantics::ALL {
            let oracle = match sem {
                Semantics::AllRep => rs.repairs.iter().all(|r| holds(q, r)),
                Semantics::IntRep => holds(q, &rs.intersection),
            };
            for &m in EntMethod::ALL
                .iter()
                .filter(|m| m.admissible(&class, sem).is_ok())
            {
                let r = entails(&facts, &l.sigma, q, sem, m, &l.opts).map(|o| o.entailed);
                push(&format!("entail-{sem}"), m.to_string(), r, oracle);
            }
        }
    }
    if subset.is_none() && query.is_none() {
        return Err(Failure::usage(
            "give a subset (-s FILE), a query (-q), or both",
        ));
    }
    let agree = rows.iter().all(|r| r.answer.is_none_or(|b| b == r.oracle));
    emit(
        out,
        a.inputs.json,
        &json!({"agree": agree, "results": rows}),
        || {
            let mut s = String::new();
            for r in &rows {
                let answer = match (r.answer, &r.refused) {
                    (Some(b), _) => b.to_string(),
                    (None, Some(why)) => format!("refused ({why})"),
                    (None, None) => unreachable!("either an answer or a refusal"),
                };
                let mark = if r.answer.is_none_or(|b| b == r.oracle) {
                    "ok"
                } else {
                    "MISMATCH"
                };
                s.push_str(&format!(
                    "{:<14} {:<22} {answer:<8} oracle {} {mark}\n",
                    r.task, r.method, r.oracle
                ));
            }
            s.push_str(if agree {
                "all methods agree"
            } else {
                "disagreement found"
            });
            s
        },
    );
    Ok(verdict(agree))
}
