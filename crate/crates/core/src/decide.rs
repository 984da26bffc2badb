//! Validity and satisfiability with certified countermodels.
//!
//! Depth-0 formulas are decided by truth table. Otherwise the formula is
//! normalized into standard clauses; a clause `γ ∨ (⋀⟨A_i⟩φ_i → ⋁⟨B_j⟩ψ_j)`
//! is valid iff `γ` is a tautology or some pair with `A_i ⊆ B_j` has
//! `(φ_{NI₀} ∧ φ_i) → ψ_j` valid. Each recursive call strictly lowers the
//! modal depth.
//!
//! A refuted clause yields a model grafted from the countermodels of all
//! pairs `A_i ⊆ B_j` onto a fresh hub whose one-round game form realises
//! every `⟨A_i⟩φ_i` and blocks every `⟨B_j⟩ψ_j`. Every countermodel is
//! re-checked with the model checker before it is returned.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use thiserror::Error;

use crate::formula::{AgentUniverse, Formula};
use crate::model::{rename_disjoint, ActionId, GameModel, ModelError, Profile, StateId};
use crate::normalform::{gamma_is_tautology, normalize, NormalFormError, PropLiteral, StandardFormula};
use crate::semantics::{eval, EvalError, PointedModel};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DecideError {
    #[error("formula mentions agents outside the universe")]
    UnknownAgent,
    #[error(transparent)]
    NormalForm(#[from] NormalFormError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error("countermodel certification failed: {0}")]
    CertificationFailed(String),
    #[error("clause is valid, no countermodel exists: {0}")]
    ClauseValid(String),
}

/// How one top-level clause was settled.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ClauseOutcome {
    /// Depth-0 input decided by truth table.
    Propositional { valid: bool },
    /// `γ` contains `⊤` or a complementary pair.
    GammaTautology,
    /// `(φ_{NI₀} ∧ φ_i) → ψ_j` is valid for this pair.
    ValidPair { pair: String },
    /// Every pair with `A_i ⊆ B_j` was refuted.
    Refuted { pairs: Vec<String> },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClauseTrace {
    pub clause: String,
    pub outcome: ClauseOutcome,
}

impl fmt::Display for ClauseTrace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.outcome {
            ClauseOutcome::Propositional { valid } => write!(
                f,
                "{}: {} by truth table",
                self.clause,
                if *valid { "valid" } else { "invalid" }
            ),
            ClauseOutcome::GammaTautology => write!(f, "{}: valid, gamma is a tautology", self.clause),
            ClauseOutcome::ValidPair { pair } => write!(f, "{}: valid via pair {pair}", self.clause),
            ClauseOutcome::Refuted { pairs } => {
                write!(f, "{}: invalid, refuted pairs [{}]", self.clause, pairs.join(", "))
            }
        }
    }
}

/// The hub's one-round game inside a grafted countermodel. State and action
/// ids refer to the grafted model.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GameForm {
    pub hub: StateId,
    /// Entry state of each grafted submodel, keyed by pair label `-i-j`.
    pub targets: Vec<(String, StateId)>,
    /// `α_i`, one per NI entry.
    pub alphas: Vec<ActionId>,
    pub betas: Vec<BetaAction>,
    /// `σ^i`: every agent plays `α_i`.
    pub sigma: Vec<Profile>,
    /// `λ^{i-j}`: `σ^i` with the witness agent switched to `β_{i-j}`.
    pub lambda: Vec<Profile>,
    pub outcomes: BTreeMap<Profile, BTreeSet<StateId>>,
}

/// `β_{i-j}` for a pair with `A_i ⊄ B_j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BetaAction {
    pub ni: usize,
    pub pi: usize,
    /// Least agent of `A_i − B_j`.
    pub witness: usize,
    pub action: ActionId,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Countermodel {
    pub pointed: PointedModel,
    pub game_form: Option<GameForm>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Verdict {
    pub valid: bool,
    pub countermodel: Option<PointedModel>,
    /// The first refuted clause, when the input had modal depth at least 1.
    pub failing_clause: Option<StandardFormula>,
    pub game_form: Option<GameForm>,
    pub trace: Vec<ClauseTrace>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SatVerdict {
    pub satisfiable: bool,
    pub witness: Option<PointedModel>,
    pub trace: Vec<ClauseTrace>,
}

/// `¬γ ∧ ⋀⟨A_i⟩φ_i ∧ ⋀¬⟨B_j⟩ψ_j`, which holds at the hub of a grafted
/// countermodel.
pub fn hub_conjunction(sf: &StandardFormula) -> Formula {
    let parts = std::iter::once(Formula::not(sf.gamma_formula()))
        .chain(sf.ni.iter().map(|(c, f)| Formula::can(*c, f.clone())))
        .chain(sf.pi.iter().map(|(c, f)| Formula::not(Formula::can(*c, f.clone()))));
    Formula::conjunction(parts)
}

/// Flattens, sorts and deduplicates conjunctions; removes double negation.
fn canonical(f: &Formula) -> Formula {
    fn conjuncts(f: &Formula, out: &mut Vec<Formula>) {
        match f {
            Formula::And(a, b) => {
                conjuncts(a, out);
                conjuncts(b, out);
            }
            other => out.push(canonical(other)),
        }
    }
    match f {
        Formula::Top | Formula::Atom(_) => f.clone(),
        Formula::Neg(g) => match &**g {
            Formula::Neg(h) => canonical(h),
            _ => Formula::not(canonical(g)),
        },
        Formula::Can(c, g) => Formula::can(*c, canonical(g)),
        Formula::And(_, _) => {
            let mut items = Vec::new();
            conjuncts(f, &mut items);
            items.sort();
            items.dedup();
            Formula::conjunction(items)
        }
    }
}

fn prop_eval(f: &Formula, truth: &BTreeSet<&str>) -> bool {
    match f {
        Formula::Top => true,
        Formula::Atom(p) => truth.contains(p.as_str()),
        Formula::Neg(g) => !prop_eval(g, truth),
        Formula::And(a, b) => prop_eval(a, truth) && prop_eval(b, truth),
        Formula::Can(..) => unreachable!("depth-0 formula"),
    }
}

/// One state, no available joint actions, labelled by `label`.
fn dead_end(universe: &AgentUniverse, atoms: &BTreeSet<String>, label: &BTreeSet<String>) -> Result<GameModel, ModelError> {
    let mut m = GameModel::new(
        universe.clone(),
        vec!["s".into()],
        vec!["idle".into()],
        atoms.iter().cloned().collect(),
    )?;
    let names: Vec<&String> = label.iter().collect();
    m.set_label_names(0, &names)?;
    Ok(m)
}

/// Atoms made true at a state so that `γ` is false there.
fn falsifying_label(gamma: &BTreeSet<PropLiteral>) -> BTreeSet<String> {
    gamma
        .iter()
        .filter_map(|l| match l {
            PropLiteral::Neg(p) => Some(p.clone()),
            _ => None,
        })
        .collect()
}

fn clause_atoms(sf: &StandardFormula) -> BTreeSet<String> {
    sf.to_formula().atoms()
}

/// Decision procedure with a verdict memo scoped to one universe.
pub struct Decider<'u> {
    universe: &'u AgentUniverse,
    memo: HashMap<Formula, Option<PointedModel>>,
}

impl<'u> Decider<'u> {
    pub fn new(universe: &'u AgentUniverse) -> Decider<'u> {
        Decider {
            universe,
            memo: HashMap::new(),
        }
    }

    pub fn universe(&self) -> &AgentUniverse {
        self.universe
    }

    /// Full validity verdict with trace and certified countermodel.
    pub fn valid(&mut self, f: &Formula) -> Result<Verdict, DecideError> {
        if !self.universe.contains(f.agents_used()) {
            return Err(DecideError::UnknownAgent);
        }
        if f.modal_depth() == 0 {
            let cm = self.refute(f)?;
            return Ok(Verdict {
                valid: cm.is_none(),
                trace: vec![ClauseTrace {
                    clause: f.print(self.universe),
                    outcome: ClauseOutcome::Propositional { valid: cm.is_none() },
                }],
                countermodel: cm,
                failing_clause: None,
                game_form: None,
            });
        }
        let clauses = normalize(f, self.universe)?;
        let mut trace = Vec::new();
        for sf in &clauses {
            let label = sf.display(self.universe).to_string();
            match self.settle_clause(sf)? {
                Ok(outcome) => trace.push(ClauseTrace { clause: label, outcome }),
                Err((pairs, cm)) => {
                    trace.push(ClauseTrace {
                        clause: label,
                        outcome: ClauseOutcome::Refuted { pairs },
                    });
                    let mut pointed = cm.pointed;
                    pointed.model.declare_atoms(f.atoms())?;
                    self.certify(&pointed, f)?;
                    return Ok(Verdict {
                        valid: false,
                        countermodel: Some(pointed),
                        failing_clause: Some(sf.clone()),
                        game_form: cm.game_form,
                        trace,
                    });
                }
            }
        }
        Ok(Verdict {
            valid: true,
            countermodel: None,
            failing_clause: None,
            game_form: None,
            trace,
        })
    }

    /// `None` if `f` is valid, otherwise a certified countermodel.
    pub fn refute(&mut self, f: &Formula) -> Result<Option<PointedModel>, DecideError> {
        let key = canonical(f);
        if let Some(hit) = self.memo.get(&key) {
            return Ok(hit.clone());
        }
        let result = if f.modal_depth() == 0 {
            self.refute_propositional(f)?
        } else {
            let mut found = None;
            for sf in normalize(f, self.universe)? {
                if let Err((_, cm)) = self.settle_clause(&sf)? {
                    let mut pointed = cm.pointed;
                    pointed.model.declare_atoms(f.atoms())?;
                    found = Some(pointed);
                    break;
                }
            }
            found
        };
        if let Some(pm) = &result {
            self.certify(pm, f)?;
        }
        self.memo.insert(key, result.clone());
        Ok(result)
    }

    fn certify(&self, pm: &PointedModel, f: &Formula) -> Result<(), DecideError> {
        pm.model
            .validate()
            .map_err(|e| DecideError::CertificationFailed(e.to_string()))?;
        if eval(&pm.model, pm.state, f)? {
            return Err(DecideError::CertificationFailed(format!(
                "{} holds at {}",
                f.print(self.universe),
                pm.state_name()
            )));
        }
        Ok(())
    }

    fn refute_propositional(&mut self, f: &Formula) -> Result<Option<PointedModel>, DecideError> {
        let atoms: Vec<String> = f.atoms().into_iter().collect();
        let n = atoms.len();
        assert!(n < 32, "truth table over {n} atoms");
        for bits in 0u64..(1u64 << n) {
            let truth: BTreeSet<&str> = (0..n)
                .filter(|i| bits >> i & 1 == 1)
                .map(|i| atoms[i].as_str())
                .collect();
            if !prop_eval(f, &truth) {
                let label = truth.iter().map(|s| s.to_string()).collect();
                let m = dead_end(self.universe, &atoms.iter().cloned().collect(), &label)?;
                return Ok(Some(PointedModel::new(m, 0)?));
            }
        }
        Ok(None)
    }

    /// `Ok(outcome)` for a valid clause, `Err((refuted pairs, countermodel))`
    /// otherwise.
    #[allow(clippy::type_complexity)]
    fn settle_clause(
        &mut self,
        sf: &StandardFormula,
    ) -> Result<Result<ClauseOutcome, (Vec<String>, Countermodel)>, DecideError> {
        if gamma_is_tautology(&sf.gamma) {
            return Ok(Ok(ClauseOutcome::GammaTautology));
        }
        let phi0 = sf.ni0().phi;
        let mut subs = Vec::new();
        for (i, (a, phi)) in sf.ni.iter().enumerate() {
            for (j, (b, psi)) in sf.pi.iter().enumerate() {
                if !a.is_subset(*b) {
                    continue;
                }
                let goal = Formula::implies(Formula::and(phi0.clone(), phi.clone()), psi.clone());
                match self.refute(&goal)? {
                    None => {
                        return Ok(Ok(ClauseOutcome::ValidPair {
                            pair: StandardFormula::pair_label(i, j),
                        }))
                    }
                    Some(pm) => subs.push((i, j, pm)),
                }
            }
        }
        let pairs = subs
            .iter()
            .map(|(i, j, _)| StandardFormula::pair_label(*i, *j))
            .collect();
        let cm = graft(sf, self.universe, subs)?;
        let hub = hub_conjunction(sf);
        if !eval(&cm.pointed.model, cm.pointed.state, &hub)? {
            return Err(DecideError::CertificationFailed(
                "hub does not satisfy the clause's negation".into(),
            ));
        }
        Ok(Err((pairs, cm)))
    }
}

/// Assembles the countermodel of a clause from its refuted pairs.
fn graft(
    sf: &StandardFormula,
    universe: &AgentUniverse,
    subs: Vec<(usize, usize, PointedModel)>,
) -> Result<Countermodel, DecideError> {
    let mut atoms = clause_atoms(sf);
    for (_, _, pm) in &subs {
        atoms.extend(pm.model.atoms().iter().cloned());
    }
    let hub_label = falsifying_label(&sf.gamma);

    if sf.ni.is_empty() {
        let m = dead_end(universe, &atoms, &hub_label)?;
        return Ok(Countermodel {
            pointed: PointedModel::new(m, 0)?,
            game_form: None,
        });
    }

    let models: Vec<GameModel> = subs.iter().map(|(_, _, pm)| pm.model.clone()).collect();
    let renamed = rename_disjoint(&models, "g");
    let n = universe.len();

    let mut states = vec!["hub".to_string()];
    let mut state_offset = Vec::new();
    for m in &renamed {
        state_offset.push(states.len());
        states.extend(m.states().iter().cloned());
    }

    let mut actions: Vec<String> = (0..sf.ni.len())
        .map(|i| format!("alpha{}", StandardFormula::ni_label(i)))
        .collect();
    let mut beta_specs = Vec::new();
    for (i, (a, _)) in sf.ni.iter().enumerate() {
        for (j, (b, _)) in sf.pi.iter().enumerate() {
            if !a.is_subset(*b) {
                let witness = a.difference(*b).first().expect("nonempty difference");
                beta_specs.push((i, j, witness, actions.len()));
                actions.push(format!("beta{}", StandardFormula::pair_label(i, j)));
            }
        }
    }
    let mut action_offset = Vec::new();
    for m in &renamed {
        action_offset.push(actions.len());
        actions.extend(m.actions().iter().cloned());
    }

    let mut model = GameModel::new(universe.clone(), states, actions, atoms.into_iter().collect())?;
    let hub: StateId = 0;
    let hub_names: Vec<&String> = hub_label.iter().collect();
    model.set_label_names(hub, &hub_names)?;

    for (k, m) in renamed.iter().enumerate() {
        for s in 0..m.n_states() {
            let gs = state_offset[k] + s;
            let names: Vec<&str> = m.label_names(s);
            model.set_label_names(gs, &names)?;
            for (p, targets) in m.transitions_from(s) {
                let gp: Profile = p.iter().map(|a| a + action_offset[k]).collect();
                for t in targets {
                    model.add_edge(gs, &gp, state_offset[k] + t)?;
                }
            }
        }
    }

    let targets: Vec<(String, StateId)> = subs
        .iter()
        .enumerate()
        .map(|(k, (i, j, pm))| (StandardFormula::pair_label(*i, *j), state_offset[k] + pm.state))
        .collect();
    let all_targets: BTreeSet<StateId> = targets.iter().map(|(_, s)| *s).collect();

    let alphas: Vec<ActionId> = (0..sf.ni.len()).collect();
    let mut outcomes = BTreeMap::new();
    let mut sigma = Vec::new();
    for (i, &alpha) in alphas.iter().enumerate() {
        let profile = vec![alpha; n];
        let outs: BTreeSet<StateId> = subs
            .iter()
            .zip(&targets)
            .filter(|((si, _, _), _)| *si == i)
            .map(|(_, (_, t))| *t)
            .collect();
        for &t in &outs {
            model.add_edge(hub, &profile, t)?;
        }
        outcomes.insert(profile.clone(), outs);
        sigma.push(profile);
    }
    let mut lambda = Vec::new();
    let mut betas = Vec::new();
    for (i, j, witness, action) in beta_specs {
        let mut profile = vec![alphas[i]; n];
        profile[witness] = action;
        for &t in &all_targets {
            model.add_edge(hub, &profile, t)?;
        }
        outcomes.insert(profile.clone(), all_targets.clone());
        lambda.push(profile);
        betas.push(BetaAction {
            ni: i,
            pi: j,
            witness,
            action,
        });
    }

    Ok(Countermodel {
        pointed: PointedModel::new(model, hub)?,
        game_form: Some(GameForm {
            hub,
            targets,
            alphas,
            betas,
            sigma,
            lambda,
            outcomes,
        }),
    })
}

/// Builds the certified countermodel of a single non-valid clause.
pub fn build_countermodel(sf: &StandardFormula, universe: &AgentUniverse) -> Result<Countermodel, DecideError> {
    let mut decider = Decider::new(universe);
    match decider.settle_clause(sf)? {
        Ok(outcome) => Err(DecideError::ClauseValid(format!("{outcome:?}"))),
        Err((_, cm)) => {
            let negated = Formula::not(sf.to_formula());
            if !eval(&cm.pointed.model, cm.pointed.state, &negated)? {
                return Err(DecideError::CertificationFailed("clause holds at hub".into()));
            }
            Ok(cm)
        }
    }
}

/// Is `f` true at every pointed general concurrent game model over
/// `universe`?
pub fn decide_valid(f: &Formula, universe: &AgentUniverse) -> Result<Verdict, DecideError> {
    Decider::new(universe).valid(f)
}

/// Satisfiability via validity of the negation; the witness is certified.
pub fn decide_sat(f: &Formula, universe: &AgentUniverse) -> Result<SatVerdict, DecideError> {
    let v = decide_valid(&Formula::not(f.clone()), universe)?;
    if let Some(w) = &v.countermodel {
        if !eval(&w.model, w.state, f)? {
            return Err(DecideError::CertificationFailed("witness falsifies formula".into()));
        }
    }
    Ok(SatVerdict {
        satisfiable: !v.valid,
        witness: v.countermodel,
        trace: v.trace,
    })
}
