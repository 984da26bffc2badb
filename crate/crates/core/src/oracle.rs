//! Brute-force refutation and differential testing.
//!
//! The oracle shares nothing with the decision procedure: it enumerates or
//! samples small models and asks the model checker whether the formula
//! fails anywhere.

use std::collections::BTreeSet;
use std::fmt;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::decide::{DecideError, Decider};
use crate::formula::{AgentUniverse, Coalition, Formula};
use crate::model::{all_profiles, classify, random_cgm, random_model, GameModel, ModelError, Property};
use crate::semantics::{eval, eval_all, EvalError, PointedModel};

pub const DEFAULT_BUDGET: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OracleError {
    #[error("bounds must allow at least one state and one action")]
    EmptyBounds,
    #[error("formula mentions agents outside the universe")]
    UnknownAgent,
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Eval(#[from] EvalError),
}

#[derive(Debug, Clone, PartialEq)]
pub enum SearchMode {
    /// Every model up to the bounds, in binary-counter order, until the
    /// budget of examined models runs out.
    Exhaustive { budget: u64 },
    /// `n_samples` random models from a seed ladder.
    Sampled { n_samples: u64, seed: u64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchBounds {
    pub universe: AgentUniverse,
    pub atoms: Vec<String>,
    pub max_states: usize,
    pub max_actions: usize,
    pub mode: SearchMode,
}

impl SearchBounds {
    pub fn exhaustive(universe: AgentUniverse, atoms: &[&str], max_states: usize, max_actions: usize) -> SearchBounds {
        SearchBounds {
            universe,
            atoms: atoms.iter().map(|s| s.to_string()).collect(),
            max_states,
            max_actions,
            mode: SearchMode::Exhaustive { budget: DEFAULT_BUDGET },
        }
    }

    pub fn sampled(
        universe: AgentUniverse,
        atoms: &[&str],
        max_states: usize,
        max_actions: usize,
        n_samples: u64,
        seed: u64,
    ) -> SearchBounds {
        SearchBounds {
            universe,
            atoms: atoms.iter().map(|s| s.to_string()).collect(),
            max_states,
            max_actions,
            mode: SearchMode::Sampled { n_samples, seed },
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchOutcome {
    pub countermodel: Option<PointedModel>,
    pub examined: u64,
    /// The exhaustive budget ran out before the space was covered.
    pub truncated: bool,
}

impl SearchOutcome {
    pub fn found(&self) -> bool {
        self.countermodel.is_some()
    }
}

fn first_false(model: &GameModel, f: &Formula) -> Result<Option<usize>, OracleError> {
    Ok(eval_all(model, f)?.iter().position(|b| !b))
}

fn model_from_bits(
    universe: &AgentUniverse,
    atoms: &[String],
    n: usize,
    m: usize,
    profiles: &[Vec<usize>],
    label_bits: u64,
    edge_bits: u64,
) -> Result<GameModel, ModelError> {
    let names = |prefix: &str, k: usize| (0..k).map(|i| format!("{prefix}{i}")).collect::<Vec<_>>();
    let mut model = GameModel::new(universe.clone(), names("s", n), names("c", m), atoms.to_vec())?;
    let k = atoms.len();
    for s in 0..n {
        let label: BTreeSet<usize> = (0..k).filter(|a| label_bits >> (s * k + a) & 1 == 1).collect();
        model.set_label(s, label)?;
    }
    let mut bit = 0;
    for s in 0..n {
        for p in profiles {
            for t in 0..n {
                if edge_bits >> bit & 1 == 1 {
                    model.add_edge(s, p, t)?;
                }
                bit += 1;
            }
        }
    }
    Ok(model)
}

/// Looks for a pointed model within `bounds` at which `f` is false.
pub fn search_countermodel(f: &Formula, bounds: &SearchBounds) -> Result<SearchOutcome, OracleError> {
    if bounds.max_states == 0 || bounds.max_actions == 0 {
        return Err(OracleError::EmptyBounds);
    }
    if !bounds.universe.contains(f.agents_used()) {
        return Err(OracleError::UnknownAgent);
    }
    let mut atoms = bounds.atoms.clone();
    for a in f.atoms() {
        if !atoms.contains(&a) {
            atoms.push(a);
        }
    }
    match bounds.mode {
        SearchMode::Exhaustive { budget } => exhaustive(f, bounds, &atoms, budget),
        SearchMode::Sampled { n_samples, seed } => sampled(f, bounds, &atoms, n_samples, seed),
    }
}

fn exhaustive(f: &Formula, bounds: &SearchBounds, atoms: &[String], budget: u64) -> Result<SearchOutcome, OracleError> {
    let u = &bounds.universe;
    let mut examined = 0u64;
    for n in 1..=bounds.max_states {
        for m in 1..=bounds.max_actions {
            let profiles = all_profiles(u.len(), m);
            let edge_width = n * profiles.len() * n;
            let label_width = n * atoms.len();
            let width = edge_width + label_width;
            let total: u64 = if width >= 64 { u64::MAX } else { 1u64 << width };
            for code in 0..total {
                if examined >= budget {
                    return Ok(SearchOutcome {
                        countermodel: None,
                        examined,
                        truncated: true,
                    });
                }
                examined += 1;
                let label_bits = code & ((1u64 << label_width) - 1);
                let edge_bits = code >> label_width;
                let model = model_from_bits(u, atoms, n, m, &profiles, label_bits, edge_bits)?;
                if let Some(s) = first_false(&model, f)? {
                    return Ok(SearchOutcome {
                        countermodel: Some(PointedModel::new(model, s)?),
                        examined,
                        truncated: false,
                    });
                }
            }
        }
    }
    Ok(SearchOutcome {
        countermodel: None,
        examined,
        truncated: false,
    })
}

const DENSITIES: [f64; 5] = [0.1, 0.25, 0.4, 0.6, 0.85];

/// The `k`-th model of the seed ladder starting at `seed`.
pub fn ladder_model(
    universe: &AgentUniverse,
    atoms: &[String],
    max_states: usize,
    max_actions: usize,
    seed: u64,
    k: u64,
) -> Result<GameModel, ModelError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(k.wrapping_mul(0x9E37_79B9_7F4A_7C15)));
    let n = rng.gen_range(1..=max_states);
    let m = rng.gen_range(1..=max_actions);
    let inner_seed = rng.gen();
    if k % 5 == 4 {
        random_cgm(universe, atoms, n, m, inner_seed)
    } else {
        let density = *DENSITIES.choose(&mut rng).expect("nonempty");
        random_model(universe, atoms, n, m, density, inner_seed)
    }
}

fn sampled(f: &Formula, bounds: &SearchBounds, atoms: &[String], n_samples: u64, seed: u64) -> Result<SearchOutcome, OracleError> {
    for k in 0..n_samples {
        let model = ladder_model(&bounds.universe, atoms, bounds.max_states, bounds.max_actions, seed, k)?;
        if let Some(s) = first_false(&model, f)? {
            return Ok(SearchOutcome {
                countermodel: Some(PointedModel::new(model, s)?),
                examined: k + 1,
                truncated: false,
            });
        }
    }
    Ok(SearchOutcome {
        countermodel: None,
        examined: n_samples,
        truncated: false,
    })
}

// ---------------------------------------------------------------------------
// Formula generation
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq)]
pub struct FormulaGen {
    pub universe: AgentUniverse,
    pub atoms: Vec<String>,
    pub max_depth: usize,
    /// Upper bound on the number of leaves.
    pub max_leaves: usize,
}

impl FormulaGen {
    pub fn new(universe: AgentUniverse, atoms: &[&str], max_depth: usize, max_leaves: usize) -> FormulaGen {
        FormulaGen {
            universe,
            atoms: atoms.iter().map(|s| s.to_string()).collect(),
            max_depth,
            max_leaves: max_leaves.max(1),
        }
    }

    pub fn coalition<R: Rng>(&self, rng: &mut R) -> Coalition {
        Coalition::from_bits(rng.gen_range(0..(1u64 << self.universe.len())))
    }

    fn leaf<R: Rng>(&self, rng: &mut R) -> Formula {
        if self.atoms.is_empty() || rng.gen_ratio(1, 6) {
            Formula::top()
        } else {
            Formula::atom(self.atoms.choose(rng).expect("nonempty").clone())
        }
    }

    fn build<R: Rng>(&self, rng: &mut R, depth: usize, leaves: usize) -> Formula {
        if leaves <= 1 && (depth == 0 || rng.gen_bool(0.5)) {
            return self.leaf(rng);
        }
        match rng.gen_range(0..10) {
            0..=2 => Formula::not(self.build(rng, depth, leaves)),
            3..=5 if leaves >= 2 => {
                let left = rng.gen_range(1..leaves);
                Formula::and(self.build(rng, depth, left), self.build(rng, depth, leaves - left))
            }
            _ if depth > 0 => Formula::can(self.coalition(rng), self.build(rng, depth - 1, leaves)),
            _ if leaves >= 2 => {
                let left = rng.gen_range(1..leaves);
                Formula::and(self.build(rng, depth, left), self.build(rng, depth, leaves - left))
            }
            _ => self.leaf(rng),
        }
    }

    /// A formula of modal depth at most `max_depth`.
    pub fn sample<R: Rng>(&self, rng: &mut R) -> Formula {
        let leaves = rng.gen_range(1..=self.max_leaves);
        self.build(rng, self.max_depth, leaves)
    }

    /// A formula whose modal depth lies in `min_depth..=max_depth`.
    pub fn sample_with_depth<R: Rng>(&self, rng: &mut R, min_depth: usize) -> Formula {
        loop {
            let f = self.sample(rng);
            if f.modal_depth() >= min_depth {
                return f;
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Axiom schemes
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Scheme {
    Tau,
    Mg,
    Mc,
    Live,
    Sia,
    RMon,
    RCn,
    Ser,
    Ia,
    Det,
    Max,
}

impl Scheme {
    pub const VALID: [Scheme; 7] = [
        Scheme::Tau,
        Scheme::Mg,
        Scheme::Mc,
        Scheme::Live,
        Scheme::Sia,
        Scheme::RMon,
        Scheme::RCn,
    ];
    pub const INVALID: [Scheme; 4] = [Scheme::Ser, Scheme::Ia, Scheme::Det, Scheme::Max];

    pub fn name(self) -> &'static str {
        match self {
            Scheme::Tau => "A-Tau",
            Scheme::Mg => "A-MG",
            Scheme::Mc => "A-MC",
            Scheme::Live => "A-Live",
            Scheme::Sia => "A-SIA",
            Scheme::RMon => "R-Mon",
            Scheme::RCn => "R-CN",
            Scheme::Ser => "A-Ser",
            Scheme::Ia => "A-IA",
            Scheme::Det => "A-Det",
            Scheme::Max => "A-Max",
        }
    }

    /// Whether every instance holds on all general models.
    pub fn mcl_valid(self) -> bool {
        Scheme::VALID.contains(&self)
    }

    /// The model property whose failure any violation implies.
    pub fn separates(self) -> Option<Property> {
        match self {
            Scheme::Ser => Some(Property::Serial),
            Scheme::Ia => Some(Property::Independent),
            Scheme::Det => Some(Property::Deterministic),
            _ => None,
        }
    }

    /// A random instance. Invalid schemes use fresh atoms `p`, `q` for their
    /// goals; coalitions are chosen so the instance is non-degenerate.
    pub fn instance<R: Rng>(self, gen: &FormulaGen, rng: &mut R) -> Formula {
        let u = &gen.universe;
        let grand = u.grand();
        let sub = |rng: &mut R| {
            let mut g = gen.clone();
            g.max_depth = gen.max_depth.saturating_sub(1);
            g.sample(rng)
        };
        let atom = |name: &str| Formula::atom(name);
        match self {
            Scheme::Tau => tautology(sub(rng), sub(rng), rng),
            Scheme::Mg => {
                let (a, phi, psi) = (gen.coalition(rng), sub(rng), sub(rng));
                Formula::implies(
                    Formula::can(Coalition::EMPTY, Formula::implies(phi.clone(), psi.clone())),
                    Formula::implies(Formula::can(a, phi), Formula::can(a, psi)),
                )
            }
            Scheme::Mc => {
                let (a, extra, phi) = (gen.coalition(rng), gen.coalition(rng), sub(rng));
                Formula::implies(Formula::can(a, phi.clone()), Formula::can(a.union(extra), phi))
            }
            Scheme::Live => Formula::not(Formula::can(gen.coalition(rng), Formula::bot())),
            Scheme::Sia => {
                let (a, phi, psi) = (gen.coalition(rng), sub(rng), sub(rng));
                Formula::implies(
                    Formula::and(Formula::can(Coalition::EMPTY, phi.clone()), Formula::can(a, psi.clone())),
                    Formula::can(a, Formula::and(phi, psi)),
                )
            }
            Scheme::RMon => {
                // premise φ → ψ is valid by construction
                let (a, extra, chi, xi) = (gen.coalition(rng), gen.coalition(rng), sub(rng), sub(rng));
                let (phi, psi) = if rng.gen_bool(0.5) {
                    (Formula::and(chi.clone(), xi), chi)
                } else {
                    (chi.clone(), Formula::or(chi, xi))
                };
                Formula::implies(Formula::can(a, phi), Formula::can(a.union(extra), psi))
            }
            Scheme::RCn => {
                let premise = tautology(sub(rng), sub(rng), rng);
                let (a, psi) = (gen.coalition(rng), sub(rng));
                Formula::implies(Formula::can(a, psi), Formula::can(Coalition::EMPTY, premise))
            }
            Scheme::Ser => Formula::can(gen.coalition(rng), Formula::top()),
            Scheme::Ia => {
                // two nonempty disjoint coalitions; needs at least two agents
                let mut agents: Vec<usize> = (0..u.len()).collect();
                agents.shuffle(rng);
                let split = if agents.len() >= 2 { rng.gen_range(1..agents.len()) } else { 0 };
                let mut a = Coalition::EMPTY;
                let mut b = Coalition::EMPTY;
                for (k, &x) in agents.iter().enumerate() {
                    if k < split {
                        a = a.with(x);
                    } else if rng.gen_bool(0.7) || b.is_empty() {
                        b = b.with(x);
                    }
                }
                Formula::implies(
                    Formula::and(Formula::can(a, atom("p")), Formula::can(b, atom("q"))),
                    Formula::can(a.union(b), Formula::and(atom("p"), atom("q"))),
                )
            }
            Scheme::Det => {
                let a = gen.coalition(rng);
                Formula::implies(
                    Formula::can(a, Formula::or(atom("p"), atom("q"))),
                    Formula::or(Formula::can(a, atom("p")), Formula::can(grand, atom("q"))),
                )
            }
            Scheme::Max => {
                if rng.gen_bool(0.5) {
                    Formula::implies(
                        Formula::not(Formula::can(Coalition::EMPTY, Formula::not(atom("p")))),
                        Formula::can(grand, atom("p")),
                    )
                } else {
                    Formula::or(Formula::can(grand, atom("p")), Formula::can(grand, Formula::not(atom("p"))))
                }
            }
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A substitution instance of a propositional tautology template.
fn tautology<R: Rng>(phi: Formula, psi: Formula, rng: &mut R) -> Formula {
    match rng.gen_range(0..6) {
        0 => Formula::implies(phi.clone(), phi),
        1 => Formula::or(phi.clone(), Formula::not(phi)),
        2 => Formula::implies(Formula::and(phi, psi.clone()), psi),
        3 => Formula::implies(phi.clone(), Formula::implies(psi, phi)),
        4 => Formula::implies(
            Formula::and(Formula::implies(phi.clone(), psi.clone()), phi),
            psi,
        ),
        _ => Formula::iff(Formula::not(Formula::not(phi.clone())), phi),
    }
}

// ---------------------------------------------------------------------------
// Differential harness
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq)]
pub enum Generator {
    /// `count` random formulas with depth in `min_depth..=max_depth`.
    Random { count: usize, min_depth: usize, max_depth: usize },
    Fixed(Vec<Formula>),
    /// `per_scheme` instances of every scheme, each judged by the decider
    /// and checked on `models` sampled models for separation.
    Schemes { per_scheme: usize, models: u64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct DiffConfig {
    pub universe: AgentUniverse,
    pub atoms: Vec<String>,
    pub generators: Vec<Generator>,
    pub max_states: usize,
    pub max_actions: usize,
    pub samples_per_formula: u64,
    pub max_leaves: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Discrepancy {
    pub kind: String,
    pub formula: String,
    pub seed: u64,
    pub model: Option<String>,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SchemeStats {
    pub scheme: String,
    pub instances: usize,
    pub judged_as_expected: usize,
    pub models: u64,
    pub violations: u64,
    pub violations_on_wrong_class: u64,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct DiffReport {
    pub formulas: usize,
    pub valid: usize,
    pub invalid: usize,
    pub certified: usize,
    pub oracle_refuted: usize,
    pub schemes: Vec<SchemeStats>,
    pub discrepancies: Vec<Discrepancy>,
}

impl DiffReport {
    pub fn is_clean(&self) -> bool {
        self.discrepancies.is_empty()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }
}

impl fmt::Display for DiffReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "formulas: {} (valid {}, invalid {}, certified {}, refuted by oracle {})",
            self.formulas, self.valid, self.invalid, self.certified, self.oracle_refuted
        )?;
        for s in &self.schemes {
            writeln!(
                f,
                "{}: {}/{} judged as expected; {} violations over {} models, {} on the wrong class",
                s.scheme, s.judged_as_expected, s.instances, s.violations, s.models, s.violations_on_wrong_class
            )?;
        }
        writeln!(f, "discrepancies: {}", self.discrepancies.len())?;
        for d in &self.discrepancies {
            writeln!(f, "  [{}] seed {} {}: {}", d.kind, d.seed, d.formula, d.detail)?;
        }
        Ok(())
    }
}

struct Harness<'c> {
    config: &'c DiffConfig,
    report: DiffReport,
}

impl Harness<'_> {
    fn discrepancy(&mut self, kind: &str, f: &Formula, seed: u64, model: Option<String>, detail: String) {
        self.report.discrepancies.push(Discrepancy {
            kind: kind.to_string(),
            formula: f.print(&self.config.universe),
            seed,
            model,
            detail,
        });
    }

    /// Decides `f`, certifies the verdict, and cross-checks it against the
    /// sampled oracle. Returns the decider's validity verdict.
    fn check_formula(&mut self, f: &Formula, seed: u64) -> Option<bool> {
        let c = self.config;
        self.report.formulas += 1;
        let verdict = match Decider::new(&c.universe).valid(f) {
            Ok(v) => v,
            Err(e) => {
                let kind = match e {
                    DecideError::CertificationFailed(_) => "uncertified",
                    _ => "decide-error",
                };
                self.discrepancy(kind, f, seed, None, e.to_string());
                return None;
            }
        };
        if verdict.valid {
            self.report.valid += 1;
        } else {
            self.report.invalid += 1;
            let pm = verdict.countermodel.as_ref().expect("invalid verdict has countermodel");
            match eval(&pm.model, pm.state, f) {
                Ok(false) if pm.model.validate().is_ok() => self.report.certified += 1,
                other => self.discrepancy("uncertified", f, seed, Some(pm.to_json()), format!("{other:?}")),
            }
        }
        let bounds = SearchBounds {
            universe: c.universe.clone(),
            atoms: c.atoms.clone(),
            max_states: c.max_states,
            max_actions: c.max_actions,
            mode: SearchMode::Sampled {
                n_samples: c.samples_per_formula,
                seed,
            },
        };
        match search_countermodel(f, &bounds) {
            Ok(out) => {
                if let Some(pm) = out.countermodel {
                    self.report.oracle_refuted += 1;
                    if eval(&pm.model, pm.state, f).unwrap_or(true) {
                        self.discrepancy("oracle-unsound", f, seed, Some(pm.to_json()), "oracle model satisfies formula".into());
                    }
                    if verdict.valid {
                        self.discrepancy(
                            "valid-but-refuted",
                            f,
                            seed,
                            Some(pm.to_json()),
                            format!("falsified at {}", pm.state_name()),
                        );
                    }
                }
            }
            Err(e) => self.discrepancy("oracle-error", f, seed, None, e.to_string()),
        }
        Some(verdict.valid)
    }

    fn run_schemes(&mut self, per_scheme: usize, models: u64, rng: &mut ChaCha8Rng) {
        let c = self.config;
        let mut atoms = c.atoms.clone();
        for fresh in ["p", "q"] {
            if !atoms.iter().any(|a| a == fresh) {
                atoms.push(fresh.to_string());
            }
        }
        let gen = FormulaGen {
            universe: c.universe.clone(),
            atoms: atoms.clone(),
            max_depth: 2,
            max_leaves: c.max_leaves,
        };
        let sample_models: Vec<(u64, GameModel)> = (0..models)
            .filter_map(|k| {
                ladder_model(&c.universe, &atoms, c.max_states, c.max_actions, c.seed, k)
                    .ok()
                    .map(|m| (k, m))
            })
            .collect();
        let classes: Vec<_> = sample_models.iter().map(|(_, m)| classify(m)).collect();

        for scheme in Scheme::VALID.into_iter().chain(Scheme::INVALID) {
            let mut stats = SchemeStats {
                scheme: scheme.name().to_string(),
                instances: 0,
                judged_as_expected: 0,
                models: sample_models.len() as u64,
                violations: 0,
                violations_on_wrong_class: 0,
            };
            for _ in 0..per_scheme {
                let f = scheme.instance(&gen, rng);
                let seed = rng.gen();
                stats.instances += 1;
                if let Some(valid) = self.check_formula(&f, seed) {
                    if valid == scheme.mcl_valid() {
                        stats.judged_as_expected += 1;
                    } else {
                        self.discrepancy("scheme-verdict", &f, seed, None, format!("{scheme} judged valid={valid}"));
                    }
                }
                for ((k, m), class) in sample_models.iter().zip(&classes) {
                    let Ok(truth) = eval_all(m, &f) else { continue };
                    if let Some(s) = truth.iter().position(|b| !b) {
                        stats.violations += 1;
                        let wrong = match scheme.separates() {
                            Some(prop) => class.has(prop),
                            None => scheme.mcl_valid(),
                        };
                        if wrong {
                            stats.violations_on_wrong_class += 1;
                            self.discrepancy(
                                "scheme-separation",
                                &f,
                                *k,
                                Some(m.to_json_pointed(s)),
                                format!("{scheme} violated on a model that has the matching property"),
                            );
                        }
                    }
                }
            }
            self.report.schemes.push(stats);
        }
    }
}

/// Runs every generator and collects counts and discrepancies.
pub fn differential_run(config: &DiffConfig) -> DiffReport {
    let mut harness = Harness {
        config,
        report: DiffReport::default(),
    };
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let atoms: Vec<&str> = config.atoms.iter().map(String::as_str).collect();
    for g in &config.generators {
        match g {
            Generator::Random { count, min_depth, max_depth } => {
                let gen = FormulaGen::new(config.universe.clone(), &atoms, *max_depth, config.max_leaves);
                for _ in 0..*count {
                    let f = gen.sample_with_depth(&mut rng, *min_depth);
                    let seed = rng.gen();
                    harness.check_formula(&f, seed);
                }
            }
            Generator::Fixed(list) => {
                for f in list {
                    let seed = rng.gen();
                    harness.check_formula(f, seed);
                }
            }
            Generator::Schemes { per_scheme, models } => harness.run_schemes(*per_scheme, *models, &mut rng),
        }
    }
    harness.report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::formula::parse;

    fn one() -> AgentUniverse {
        AgentUniverse::new(["a"]).unwrap()
    }

    fn ab() -> AgentUniverse {
        AgentUniverse::new(["a", "b"]).unwrap()
    }

    #[test]
    fn dead_end_refutes_seriality() {
        let u = one();
        let f = parse("<{a}>true", &u).unwrap();
        let out = search_countermodel(&f, &SearchBounds::exhaustive(u, &[], 1, 1)).unwrap();
        let pm = out.countermodel.unwrap();
        assert!(pm.model.transitions_from(pm.state).is_empty());
    }

    #[test]
    fn liveness_never_refuted() {
        let u = one();
        let f = parse("~<{a}>false", &u).unwrap();
        let out = search_countermodel(&f, &SearchBounds::exhaustive(u, &["p"], 2, 1)).unwrap();
        assert!(!out.found() && !out.truncated);
        assert_eq!(out.examined, 2 * 2 + 4 * (1 << 4));
    }

    #[test]
    fn independence_refuted_by_sampling() {
        let u = ab();
        let f = parse("(<{a}>p & <{b}>q) -> <{a,b}>(p & q)", &u).unwrap();
        let out = search_countermodel(&f, &SearchBounds::sampled(u, &["p", "q"], 3, 2, 5000, 1)).unwrap();
        let pm = out.countermodel.unwrap();
        assert!(!eval(&pm.model, pm.state, &f).unwrap());
    }

    #[test]
    fn budget_truncation_is_reported() {
        let u = ab();
        let f = parse("~<{a}>false", &u).unwrap();
        let mut bounds = SearchBounds::exhaustive(u, &["p"], 3, 2);
        bounds.mode = SearchMode::Exhaustive { budget: 100 };
        let out = search_countermodel(&f, &bounds).unwrap();
        assert!(out.truncated);
        assert_eq!(out.examined, 100);
    }

    #[test]
    fn determinism_violation_on_one_mask() {
        let m = fixtures::one_mask();
        let f = parse("<{}>(l_a | ~l_a) -> (<{}>l_a | <{a,b}>~l_a)", m.universe()).unwrap();
        assert!(!eval(&m, 0, &f).unwrap());
        assert!(!classify(&m).deterministic);
    }

    #[test]
    fn empty_generator_list_gives_empty_report() {
        let config = DiffConfig {
            universe: ab(),
            atoms: vec!["p".into()],
            generators: vec![],
            max_states: 2,
            max_actions: 2,
            samples_per_formula: 10,
            max_leaves: 4,
            seed: 3,
        };
        assert_eq!(differential_run(&config), DiffReport::default());
    }

    #[test]
    fn generator_respects_depth() {
        let gen = FormulaGen::new(ab(), &["p", "q"], 2, 6);
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..200 {
            let f = gen.sample_with_depth(&mut rng, 1);
            assert!((1..=2).contains(&f.modal_depth()));
        }
    }

    #[test]
    fn scheme_instances_have_expected_shape() {
        let gen = FormulaGen::new(ab(), &["r"], 2, 4);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for scheme in Scheme::INVALID {
            let f = scheme.instance(&gen, &mut rng);
            assert!(f.atoms().iter().all(|a| a == "p" || a == "q"), "{scheme}");
        }
        let live = Scheme::Live.instance(&gen, &mut rng);
        assert_eq!(live.modal_depth(), 1);
    }
}
