//! `mcl`: parse, normalize, model-check and decide coalition formulas.
//!
//! Exit status: 0 success, 1 semantic error (bad model or formula), 2 usage
//! error, 3 when `fuzz` reports discrepancies.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use mcl_core::decide::{build_countermodel, decide_sat, DecideError, Decider, GameForm};
use mcl_core::fixtures;
use mcl_core::formula::{parse, AgentUniverse, Formula};
use mcl_core::model::{classify, read_model_document, GameModel};
use mcl_core::normalform::{normalize, NormalFormError};
use mcl_core::oracle::{differential_run, DiffConfig, Generator};
use mcl_core::semantics::{eval, PointedModel};
use serde_json::{json, Map, Value};
use thiserror::Error;

#[derive(Debug, Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Semantic(String),
}

impl CliError {
    fn status(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Semantic(_) => 1,
        }
    }
}

fn semantic(e: impl std::fmt::Display) -> CliError {
    CliError::Semantic(e.to_string())
}

#[derive(Parser)]
#[command(name = "mcl", version, about = "Minimal coalition logic over general concurrent game models")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Human,
    Json,
}

#[derive(Clone, Args)]
struct Common {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Human)]
    format: Format,
    /// Print the decision trace in human output.
    #[arg(short, long)]
    verbose: bool,
}

#[derive(Args)]
struct FormulaSource {
    /// Formula text.
    #[arg(short, long, conflicts_with = "formula_file", required_unless_present = "formula_file")]
    formula: Option<String>,
    /// File holding the formula text.
    #[arg(long)]
    formula_file: Option<PathBuf>,
    /// Comma-separated agents; the order is the canonical agent order.
    /// Defaults to the agents mentioned in the formula, in order of first
    /// appearance.
    #[arg(short, long)]
    agents: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Print the formula as its core AST (true, atoms, ~, &, <C>).
    Parse {
        #[command(flatten)]
        src: FormulaSource,
        #[command(flatten)]
        common: Common,
    },
    /// Print the modal depth.
    Depth {
        #[command(flatten)]
        src: FormulaSource,
        #[command(flatten)]
        common: Common,
    },
    /// Print the standard clauses, one per line.
    Nf {
        #[command(flatten)]
        src: FormulaSource,
        #[command(flatten)]
        common: Common,
    },
    /// Report seriality, independence and determinism of a model.
    Classify {
        /// Bundled fixture name or model file path.
        #[arg(short, long)]
        model: String,
        #[command(flatten)]
        common: Common,
    },
    /// Evaluate a formula at a state of a model.
    Mc {
        #[command(flatten)]
        src: FormulaSource,
        /// Bundled fixture name or model file path.
        #[arg(short, long)]
        model: String,
        /// State name; defaults to the designated state, else the first state.
        #[arg(short, long)]
        state: Option<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Decide validity; writes a countermodel to --out when invalid.
    Valid {
        #[command(flatten)]
        src: FormulaSource,
        #[arg(short, long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Decide satisfiability; writes a witness model to --out when satisfiable.
    Sat {
        #[command(flatten)]
        src: FormulaSource,
        #[arg(short, long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Build the grafted countermodel of the first refutable clause.
    Countermodel {
        #[command(flatten)]
        src: FormulaSource,
        /// Model file to write; without it the model goes to stdout.
        #[arg(short, long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Differential run of the decider against model sampling.
    Fuzz {
        #[arg(long, default_value = "a,b")]
        agents: String,
        #[arg(long, default_value = "p,q")]
        atoms: String,
        /// Number of random formulas.
        #[arg(long, default_value_t = 200)]
        count: usize,
        #[arg(long, default_value_t = 1)]
        min_depth: usize,
        #[arg(long, default_value_t = 2)]
        max_depth: usize,
        #[arg(long, default_value_t = 6)]
        max_leaves: usize,
        /// Instances generated per axiom scheme; 0 skips schemes.
        #[arg(long, default_value_t = 20)]
        per_scheme: usize,
        /// Models sampled per scheme instance.
        #[arg(long, default_value_t = 200)]
        scheme_models: u64,
        #[arg(long, default_value_t = 3)]
        max_states: usize,
        #[arg(long, default_value_t = 2)]
        max_actions: usize,
        /// Models sampled per random formula.
        #[arg(long, default_value_t = 1000)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        common: Common,
    },
}

/// Result of one subcommand before rendering.
struct Report {
    verdict: Value,
    human: Vec<String>,
    trace: Vec<String>,
    countermodel_path: Option<PathBuf>,
    extra: Map<String, Value>,
    status: u8,
}

impl Report {
    fn new(verdict: Value, human: impl Into<String>) -> Report {
        Report {
            verdict,
            human: vec![human.into()],
            trace: Vec::new(),
            countermodel_path: None,
            extra: Map::new(),
            status: 0,
        }
    }

    fn render(&self, common: &Common) -> String {
        match common.format {
            Format::Human => {
                let mut lines = self.human.clone();
                if common.verbose {
                    lines.extend(self.trace.iter().map(|t| format!("  {t}")));
                }
                if let Some(p) = &self.countermodel_path {
                    lines.push(format!("countermodel: {}", p.display()));
                }
                lines.join("\n")
            }
            Format::Json => {
                let mut obj = Map::new();
                obj.insert("verdict".into(), self.verdict.clone());
                if let Some(p) = &self.countermodel_path {
                    obj.insert("countermodel_path".into(), json!(p.display().to_string()));
                }
                if !self.trace.is_empty() {
                    obj.insert("trace".into(), json!(self.trace));
                }
                obj.extend(self.extra.clone());
                serde_json::to_string_pretty(&Value::Object(obj)).expect("serializable")
            }
        }
    }
}

fn read_formula(src: &FormulaSource) -> Result<String, CliError> {
    match (&src.formula, &src.formula_file) {
        (Some(text), _) => Ok(text.clone()),
        (None, Some(path)) => fs::read_to_string(path)
            .map(|t| t.trim().to_string())
            .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display()))),
        (None, None) => Err(CliError::Usage("one of --formula or --formula-file is required".into())),
    }
}

fn universe_for(src: &FormulaSource, text: &str) -> Result<AgentUniverse, CliError> {
    match &src.agents {
        Some(list) => AgentUniverse::from_csv(list).map_err(|e| CliError::Usage(format!("--agents: {e}"))),
        None => AgentUniverse::infer_from_text(text)
            .map_err(|_| CliError::Usage("the formula mentions no agents; pass --agents".into())),
    }
}

fn load_formula(src: &FormulaSource) -> Result<(Formula, AgentUniverse), CliError> {
    let text = read_formula(src)?;
    let universe = universe_for(src, &text)?;
    let f = parse(&text, &universe).map_err(semantic)?;
    Ok((f, universe))
}

fn load_model(spec: &str) -> Result<(GameModel, Option<usize>), CliError> {
    if let Some(m) = fixtures::by_name(spec) {
        return Ok((m, None));
    }
    let path = Path::new(spec);
    if !path.is_file() {
        return Err(CliError::Usage(format!(
            "model '{spec}' is neither a bundled fixture ({}) nor an existing file",
            fixtures::NAMES.join(", ")
        )));
    }
    let text = fs::read_to_string(path).map_err(|e| CliError::Usage(format!("cannot read {spec}: {e}")))?;
    let (model, designated) = read_model_document(&text).map_err(|e| semantic(format!("{spec}: {e}")))?;
    model.validate().map_err(|e| semantic(format!("{spec}: {e}")))?;
    Ok((model, designated))
}

fn write_model(path: &Path, pm: &PointedModel) -> Result<(), CliError> {
    fs::write(path, pm.to_json() + "\n").map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display())))
}

fn game_form_lines(gf: &GameForm, model: &GameModel) -> Vec<String> {
    let u = model.universe();
    let names = |ids: &[usize]| ids.iter().map(|&a| model.actions()[a].clone()).collect::<Vec<_>>().join(", ");
    let betas: Vec<String> = gf
        .betas
        .iter()
        .map(|b| format!("{} witness {}", model.actions()[b.action], u.name(b.witness)))
        .collect();
    let targets: Vec<String> = gf
        .targets
        .iter()
        .map(|(label, s)| format!("{label}={}", model.state_name(*s)))
        .collect();
    vec![
        format!("hub {}", model.state_name(gf.hub)),
        format!("alphas [{}]", names(&gf.alphas)),
        format!("betas [{}]", betas.join(", ")),
        format!("targets [{}]", targets.join(", ")),
    ]
}

fn cmd_parse(src: &FormulaSource) -> Result<Report, CliError> {
    let (f, u) = load_formula(src)?;
    let core = f.print_core(&u);
    let mut r = Report::new(json!(core), core.clone());
    r.trace.push(format!("printed {}", f.print(&u)));
    Ok(r)
}

fn cmd_depth(src: &FormulaSource) -> Result<Report, CliError> {
    let (f, _) = load_formula(src)?;
    let d = f.modal_depth();
    Ok(Report::new(json!(d), d.to_string()))
}

fn cmd_nf(src: &FormulaSource) -> Result<Report, CliError> {
    let (f, u) = load_formula(src)?;
    let clauses = match normalize(&f, &u) {
        Ok(c) => c,
        Err(NormalFormError::DepthZero) => {
            return Err(semantic("formula has modal depth 0; standard clauses need depth at least 1"))
        }
        Err(e) => return Err(semantic(e)),
    };
    let lines: Vec<String> = clauses.iter().map(|c| c.display(&u).to_string()).collect();
    let mut r = Report::new(json!(lines), String::new());
    r.human = lines;
    Ok(r)
}

fn cmd_classify(model: &str) -> Result<Report, CliError> {
    let (m, _) = load_model(model)?;
    let c = classify(&m);
    let mut r = Report::new(json!(c.to_string()), c.to_string());
    r.human.extend(c.witnesses.iter().map(|w| format!("  {w}")));
    r.extra.insert(
        "classification".into(),
        json!({
            "is_gcgm": c.is_gcgm,
            "serial": c.serial,
            "independent": c.independent,
            "deterministic": c.deterministic,
            "is_cgm": c.is_cgm,
            "witnesses": c.witnesses.iter().map(|w| w.to_string()).collect::<Vec<_>>(),
        }),
    );
    Ok(r)
}

fn cmd_mc(src: &FormulaSource, model: &str, state: Option<&str>) -> Result<Report, CliError> {
    let (m, designated) = load_model(model)?;
    let text = read_formula(src)?;
    if let Some(list) = &src.agents {
        let given = AgentUniverse::from_csv(list).map_err(|e| CliError::Usage(format!("--agents: {e}")))?;
        if given.names() != m.universe().names() {
            return Err(semantic(format!(
                "--agents {} disagrees with the model agents {}",
                given.names().join(","),
                m.universe().names().join(",")
            )));
        }
    }
    let f = parse(&text, m.universe()).map_err(semantic)?;
    let s = match state {
        Some(name) => m.state_id(name).map_err(semantic)?,
        None => designated.unwrap_or(0),
    };
    let truth = eval(&m, s, &f).map_err(semantic)?;
    let mut r = Report::new(json!(truth), truth.to_string());
    r.trace.push(format!("state {}", m.state_name(s)));
    Ok(r)
}

fn cmd_valid(src: &FormulaSource, out: Option<&Path>) -> Result<Report, CliError> {
    let (f, u) = load_formula(src)?;
    let v = Decider::new(&u).valid(&f).map_err(semantic)?;
    let word = if v.valid { "VALID" } else { "INVALID" };
    let mut r = Report::new(json!(word), word);
    r.trace = v.trace.iter().map(|t| t.to_string()).collect();
    if let Some(pm) = &v.countermodel {
        r.trace.push(format!(
            "countermodel: {} states, designated {}",
            pm.model.n_states(),
            pm.state_name()
        ));
        if let Some(gf) = &v.game_form {
            r.trace.extend(game_form_lines(gf, &pm.model));
        }
        if let Some(path) = out {
            write_model(path, pm)?;
            r.countermodel_path = Some(path.to_path_buf());
        }
    }
    Ok(r)
}

fn cmd_sat(src: &FormulaSource, out: Option<&Path>) -> Result<Report, CliError> {
    let (f, u) = load_formula(src)?;
    let v = decide_sat(&f, &u).map_err(semantic)?;
    let word = if v.satisfiable { "SATISFIABLE" } else { "UNSATISFIABLE" };
    let mut r = Report::new(json!(word), word);
    r.trace = v.trace.iter().map(|t| t.to_string()).collect();
    if let (Some(pm), Some(path)) = (&v.witness, out) {
        write_model(path, pm)?;
        r.countermodel_path = Some(path.to_path_buf());
    }
    Ok(r)
}

fn cmd_countermodel(src: &FormulaSource, out: Option<&Path>) -> Result<Report, CliError> {
    let (f, u) = load_formula(src)?;
    let clauses = match normalize(&f, &u) {
        Ok(c) => c,
        Err(NormalFormError::DepthZero) => {
            return Err(semantic("formula has modal depth 0; standard clauses need depth at least 1"))
        }
        Err(e) => return Err(semantic(e)),
    };
    for (k, sf) in clauses.iter().enumerate() {
        let cm = match build_countermodel(sf, &u) {
            Ok(cm) => cm,
            Err(DecideError::ClauseValid(_)) => continue,
            Err(e) => return Err(semantic(e)),
        };
        let pm = &cm.pointed;
        let mut r = Report::new(json!("INVALID"), format!("clause {}: {}", k + 1, sf.display(&u)));
        if let Some(gf) = &cm.game_form {
            r.trace.extend(game_form_lines(gf, &pm.model));
        }
        match out {
            Some(path) => {
                write_model(path, pm)?;
                r.countermodel_path = Some(path.to_path_buf());
            }
            None => {
                r.human = vec![pm.to_json()];
                r.extra.insert(
                    "countermodel".into(),
                    serde_json::from_str(&pm.to_json()).expect("model JSON"),
                );
            }
        }
        return Ok(r);
    }
    Err(semantic("every clause is valid; no countermodel exists"))
}

#[allow(clippy::too_many_arguments)]
fn cmd_fuzz(
    agents: &str,
    atoms: &str,
    count: usize,
    min_depth: usize,
    max_depth: usize,
    max_leaves: usize,
    per_scheme: usize,
    scheme_models: u64,
    max_states: usize,
    max_actions: usize,
    samples: u64,
    seed: u64,
) -> Result<Report, CliError> {
    let universe = AgentUniverse::from_csv(agents).map_err(|e| CliError::Usage(format!("--agents: {e}")))?;
    let atoms: Vec<String> = atoms.split(',').map(str::trim).filter(|a| !a.is_empty()).map(String::from).collect();
    if atoms.is_empty() {
        return Err(CliError::Usage("--atoms must name at least one atom".into()));
    }
    if min_depth > max_depth || max_states == 0 || max_actions == 0 {
        return Err(CliError::Usage("bounds need min-depth <= max-depth and positive state and action counts".into()));
    }
    let mut generators = vec![Generator::Random { count, min_depth, max_depth }];
    if per_scheme > 0 {
        generators.push(Generator::Schemes { per_scheme, models: scheme_models });
    }
    let config = DiffConfig {
        universe,
        atoms,
        generators,
        max_states,
        max_actions,
        samples_per_formula: samples,
        max_leaves,
        seed,
    };
    let report = differential_run(&config);
    let clean = report.is_clean();
    let word = if clean { "CLEAN" } else { "DISCREPANCIES" };
    let mut r = Report::new(json!(word), word);
    r.human.extend(report.to_string().lines().map(String::from));
    r.extra.insert("report".into(), serde_json::from_str(&report.to_json()).expect("report JSON"));
    if !clean {
        r.status = 3;
    }
    Ok(r)
}

fn run(cli: Cli) -> (Result<Report, CliError>, Common) {
    match cli.command {
        Command::Parse { src, common } => (cmd_parse(&src), common),
        Command::Depth { src, common } => (cmd_depth(&src), common),
        Command::Nf { src, common } => (cmd_nf(&src), common),
        Command::Classify { model, common } => (cmd_classify(&model), common),
        Command::Mc { src, model, state, common } => {
            (cmd_mc(&src, &model, state.as_deref()), common)
        }
        Command::Valid { src, out, common } => (cmd_valid(&src, out.as_deref()), common),
        Command::Sat { src, out, common } => (cmd_sat(&src, out.as_deref()), common),
        Command::Countermodel { src, out, common } => {
            (cmd_countermodel(&src, out.as_deref()), common)
        }
        Command::Fuzz {
            agents,
            atoms,
            count,
            min_depth,
            max_depth,
            max_leaves,
            per_scheme,
            scheme_models,
            max_states,
            max_actions,
            samples,
            seed,
            common,
        } => (
            cmd_fuzz(
                &agents,
                &atoms,
                count,
                min_depth,
                max_depth,
                max_leaves,
                per_scheme,
                scheme_models,
                max_states,
                max_actions,
                samples,
                seed,
            ),
            common,
        ),
    }
}

// A closed pipe (e.g. `| head`) is not an error worth reporting.
fn emit(text: &str) {
    let _ = writeln!(io::stdout().lock(), "{text}");
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (result, common) = run(cli);
    match result {
        Ok(report) => {
            emit(&report.render(&common));
            ExitCode::from(report.status)
        }
        Err(e) => {
            match common.format {
                Format::Human => eprintln!("error: {e}"),
                Format::Json => emit(&json!({ "error": e.to_string(), "status": e.status() }).to_string()),
            }
            ExitCode::from(e.status())
        }
    }
}
