//! Game models driven by the grand coalition's outcome function.
//!
//! Only `out_AG` is stored. Availability and outcomes for every other
//! coalition are derived on demand:
//!
//! * `av_AG(s)` is the set of profiles with a nonempty outcome set,
//! * `av_A(s)` is `av_AG(s)` restricted to `A`,
//! * `out_A(s, σ_A)` is the union of `out_AG(s, σ)` over profiles `σ ⊇ σ_A`.
//!
//! Every well-formed [`GameModel`] is therefore a general concurrent game
//! model; [`classify`] reports whether it additionally is serial,
//! independent and deterministic.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::formula::{is_identifier, AgentUniverse, Coalition, UniverseError};

pub type StateId = usize;
pub type ActionId = usize;

/// A joint action of the grand coalition, one action per agent in
/// canonical agent order.
pub type Profile = Vec<ActionId>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error("a model needs at least one state")]
    NoStates,
    #[error("a model needs at least one action")]
    NoActions,
    #[error("duplicate {kind} name `{name}`")]
    Duplicate { kind: &'static str, name: String },
    #[error("unknown state `{0}`")]
    UnknownState(String),
    #[error("unknown action `{0}`")]
    UnknownAction(String),
    #[error("unknown atom `{0}`")]
    UnknownAtom(String),
    #[error("invalid atom name `{0}`")]
    InvalidAtom(String),
    #[error("unknown agent `{0}`")]
    UnknownAgent(String),
    #[error("state index {0} out of range")]
    StateOutOfRange(StateId),
    #[error("action index {0} out of range")]
    ActionOutOfRange(ActionId),
    #[error("profile must assign exactly one action to each of the {expected} agents")]
    BadProfile { expected: usize },
    #[error("duplicate transition entry for state `{state}` and profile {profile}")]
    DuplicateTransition { state: String, profile: String },
    #[error("joint action domain does not match its coalition")]
    DomainMismatch,
    #[error("coalitions in a merge family must be pairwise disjoint")]
    OverlappingCoalitions,
    #[error("n_states and n_actions must be at least 1")]
    ZeroSize,
    #[error("density must lie in [0, 1], got {0}")]
    BadDensity(f64),
    #[error("stored outcome set is empty for state `{0}`")]
    EmptyOutcome(String),
    #[error(transparent)]
    Universe(#[from] UniverseError),
    #[error("malformed model document: {0}")]
    Json(String),
}

// ---------------------------------------------------------------------------
// Joint actions
// ---------------------------------------------------------------------------

/// A partial assignment of actions to agents. The domain is the coalition
/// the joint action belongs to; the empty coalition's only joint action is
/// the empty map.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct JointAction {
    slots: Vec<Option<ActionId>>,
}

impl JointAction {
    /// The empty joint action over a universe of `n_agents`.
    pub fn empty(n_agents: usize) -> JointAction {
        JointAction {
            slots: vec![None; n_agents],
        }
    }

    pub fn from_profile(profile: &[ActionId]) -> JointAction {
        JointAction {
            slots: profile.iter().copied().map(Some).collect(),
        }
    }

    pub fn from_slots(slots: Vec<Option<ActionId>>) -> JointAction {
        JointAction { slots }
    }

    pub fn slots(&self) -> &[Option<ActionId>] {
        &self.slots
    }

    pub fn get(&self, agent: usize) -> Option<ActionId> {
        self.slots.get(agent).copied().flatten()
    }

    pub fn domain(&self) -> Coalition {
        self.slots
            .iter()
            .enumerate()
            .filter(|(_, s)| s.is_some())
            .fold(Coalition::EMPTY, |c, (i, _)| c.with(i))
    }

    /// `σ|_B`; agents outside `B` are dropped.
    pub fn restrict(&self, coalition: Coalition) -> JointAction {
        JointAction {
            slots: self
                .slots
                .iter()
                .enumerate()
                .map(|(i, s)| if coalition.contains(i) { *s } else { None })
                .collect(),
        }
    }

    /// Union of two joint actions with disjoint domains.
    pub fn merge(&self, other: &JointAction) -> Option<JointAction> {
        if !self.domain().is_disjoint(other.domain()) || self.slots.len() != other.slots.len() {
            return None;
        }
        Some(JointAction {
            slots: self
                .slots
                .iter()
                .zip(&other.slots)
                .map(|(a, b)| a.or(*b))
                .collect(),
        })
    }

    /// True when `self ⊆ profile`.
    pub fn is_extended_by(&self, profile: &[ActionId]) -> bool {
        self.slots
            .iter()
            .zip(profile)
            .all(|(s, p)| s.is_none_or(|a| a == *p))
    }

    pub fn to_profile(&self) -> Option<Profile> {
        self.slots.iter().copied().collect()
    }
}

/// `⨁` over a family of pairwise disjoint coalitions with their sets of
/// joint actions: every union of one pick per member.
pub fn oplus(
    n_agents: usize,
    family: &[(Coalition, BTreeSet<JointAction>)],
) -> Result<BTreeSet<JointAction>, ModelError> {
    let mut covered = Coalition::EMPTY;
    for (c, set) in family {
        if !covered.is_disjoint(*c) {
            return Err(ModelError::OverlappingCoalitions);
        }
        covered = covered.union(*c);
        if set.iter().any(|ja| ja.domain() != *c || ja.slots.len() != n_agents) {
            return Err(ModelError::DomainMismatch);
        }
    }
    let mut acc: BTreeSet<JointAction> = BTreeSet::from([JointAction::empty(n_agents)]);
    for (_, set) in family {
        let mut next = BTreeSet::new();
        for partial in &acc {
            for pick in set {
                next.insert(partial.merge(pick).expect("disjoint domains"));
            }
        }
        acc = next;
    }
    Ok(acc)
}

// ---------------------------------------------------------------------------
// Game models
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GameModel {
    universe: AgentUniverse,
    states: Vec<String>,
    actions: Vec<String>,
    atoms: Vec<String>,
    labels: Vec<BTreeSet<usize>>,
    /// Per state: available profiles and their (nonempty) outcome sets.
    out_ag: Vec<BTreeMap<Profile, BTreeSet<StateId>>>,
}

fn check_unique(kind: &'static str, names: &[String]) -> Result<(), ModelError> {
    let mut seen = BTreeSet::new();
    for n in names {
        if !seen.insert(n.as_str()) {
            return Err(ModelError::Duplicate {
                kind,
                name: n.clone(),
            });
        }
    }
    Ok(())
}

impl GameModel {
    /// A model with the given names, empty labels and no transitions.
    pub fn new(
        universe: AgentUniverse,
        states: Vec<String>,
        actions: Vec<String>,
        atoms: Vec<String>,
    ) -> Result<GameModel, ModelError> {
        if states.is_empty() {
            return Err(ModelError::NoStates);
        }
        if actions.is_empty() {
            return Err(ModelError::NoActions);
        }
        check_unique("state", &states)?;
        check_unique("action", &actions)?;
        check_unique("atom", &atoms)?;
        if let Some(bad) = atoms.iter().find(|a| !is_identifier(a)) {
            return Err(ModelError::InvalidAtom(bad.clone()));
        }
        let n = states.len();
        Ok(GameModel {
            universe,
            states,
            actions,
            atoms,
            labels: vec![BTreeSet::new(); n],
            out_ag: vec![BTreeMap::new(); n],
        })
    }

    pub fn universe(&self) -> &AgentUniverse {
        &self.universe
    }

    pub fn n_agents(&self) -> usize {
        self.universe.len()
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn actions(&self) -> &[String] {
        &self.actions
    }

    pub fn atoms(&self) -> &[String] {
        &self.atoms
    }

    pub fn n_states(&self) -> usize {
        self.states.len()
    }

    pub fn state_name(&self, s: StateId) -> &str {
        &self.states[s]
    }

    pub fn state_id(&self, name: &str) -> Result<StateId, ModelError> {
        self.states
            .iter()
            .position(|x| x == name)
            .ok_or_else(|| ModelError::UnknownState(name.to_string()))
    }

    pub fn action_id(&self, name: &str) -> Result<ActionId, ModelError> {
        self.actions
            .iter()
            .position(|x| x == name)
            .ok_or_else(|| ModelError::UnknownAction(name.to_string()))
    }

    pub fn atom_id(&self, name: &str) -> Option<usize> {
        self.atoms.iter().position(|x| x == name)
    }

    pub fn label(&self, s: StateId) -> &BTreeSet<usize> {
        &self.labels[s]
    }

    pub fn label_names(&self, s: StateId) -> Vec<&str> {
        self.labels[s].iter().map(|&i| self.atoms[i].as_str()).collect()
    }

    pub fn holds(&self, s: StateId, atom: usize) -> bool {
        self.labels[s].contains(&atom)
    }

    fn check_state(&self, s: StateId) -> Result<(), ModelError> {
        if s < self.states.len() {
            Ok(())
        } else {
            Err(ModelError::StateOutOfRange(s))
        }
    }

    fn check_profile(&self, profile: &[ActionId]) -> Result<(), ModelError> {
        if profile.len() != self.n_agents() {
            return Err(ModelError::BadProfile {
                expected: self.n_agents(),
            });
        }
        if let Some(&a) = profile.iter().find(|&&a| a >= self.actions.len()) {
            return Err(ModelError::ActionOutOfRange(a));
        }
        Ok(())
    }

    pub fn set_label(&mut self, s: StateId, atoms: BTreeSet<usize>) -> Result<(), ModelError> {
        self.check_state(s)?;
        if let Some(&bad) = atoms.iter().find(|&&a| a >= self.atoms.len()) {
            return Err(ModelError::UnknownAtom(format!("#{bad}")));
        }
        self.labels[s] = atoms;
        Ok(())
    }

    pub fn set_label_names<S: AsRef<str>>(&mut self, s: StateId, names: &[S]) -> Result<(), ModelError> {
        let ids = names
            .iter()
            .map(|n| {
                self.atom_id(n.as_ref())
                    .ok_or_else(|| ModelError::UnknownAtom(n.as_ref().to_string()))
            })
            .collect::<Result<BTreeSet<_>, _>>()?;
        self.set_label(s, ids)
    }

    /// Adds `to` to `out_AG(from, profile)`.
    pub fn add_edge(&mut self, from: StateId, profile: &[ActionId], to: StateId) -> Result<(), ModelError> {
        self.check_state(from)?;
        self.check_state(to)?;
        self.check_profile(profile)?;
        self.out_ag[from]
            .entry(profile.to_vec())
            .or_default()
            .insert(to);
        Ok(())
    }

    /// Adds a batch of outcomes by name; `profile` maps agent to action.
    pub fn add_transition<S: AsRef<str>>(
        &mut self,
        from: &str,
        profile: &[(S, S)],
        to: &[S],
    ) -> Result<(), ModelError> {
        let from = self.state_id(from)?;
        let p = self.profile_from_names(profile)?;
        for t in to {
            let t = self.state_id(t.as_ref())?;
            self.add_edge(from, &p, t)?;
        }
        Ok(())
    }

    pub fn profile_from_names<S: AsRef<str>>(&self, pairs: &[(S, S)]) -> Result<Profile, ModelError> {
        let ja = self.joint_action_from_names(pairs)?;
        if ja.domain() != self.universe.grand() || pairs.len() != self.n_agents() {
            return Err(ModelError::BadProfile {
                expected: self.n_agents(),
            });
        }
        Ok(ja.to_profile().expect("full domain"))
    }

    pub fn joint_action_from_names<S: AsRef<str>>(&self, pairs: &[(S, S)]) -> Result<JointAction, ModelError> {
        let mut slots = vec![None; self.n_agents()];
        for (agent, action) in pairs {
            let i = self
                .universe
                .index_of(agent.as_ref())
                .ok_or_else(|| ModelError::UnknownAgent(agent.as_ref().to_string()))?;
            slots[i] = Some(self.action_id(action.as_ref())?);
        }
        Ok(JointAction { slots })
    }

    /// Available profiles at `s` with their outcome sets.
    pub fn transitions_from(&self, s: StateId) -> &BTreeMap<Profile, BTreeSet<StateId>> {
        &self.out_ag[s]
    }

    /// `out_AG(s, σ)`; empty for unavailable profiles.
    pub fn out_ag(&self, s: StateId, profile: &[ActionId]) -> BTreeSet<StateId> {
        self.out_ag[s].get(profile).cloned().unwrap_or_default()
    }

    pub fn av_ag(&self, s: StateId) -> impl Iterator<Item = &Profile> {
        self.out_ag[s].keys()
    }

    /// `av_A(s) = av_AG(s)|_A`.
    pub fn av(&self, coalition: Coalition, s: StateId) -> Result<BTreeSet<JointAction>, ModelError> {
        self.check_state(s)?;
        self.check_coalition(coalition)?;
        Ok(self.out_ag[s]
            .keys()
            .map(|p| JointAction::from_profile(p).restrict(coalition))
            .collect())
    }

    /// `out_A(s, σ_A)`: union of `out_AG` over all profiles extending `σ_A`.
    pub fn out(
        &self,
        coalition: Coalition,
        s: StateId,
        action: &JointAction,
    ) -> Result<BTreeSet<StateId>, ModelError> {
        self.check_state(s)?;
        self.check_coalition(coalition)?;
        if action.slots.len() != self.n_agents() || action.domain() != coalition {
            return Err(ModelError::DomainMismatch);
        }
        if let Some(a) = action.slots.iter().flatten().find(|&&a| a >= self.actions.len()) {
            return Err(ModelError::ActionOutOfRange(*a));
        }
        let mut result = BTreeSet::new();
        for (p, targets) in &self.out_ag[s] {
            if action.is_extended_by(p) {
                result.extend(targets.iter().copied());
            }
        }
        Ok(result)
    }

    /// All successors of `s`, i.e. `out_∅(s, ∅)`.
    pub fn successors(&self, s: StateId) -> BTreeSet<StateId> {
        self.out_ag[s].values().flatten().copied().collect()
    }

    fn check_coalition(&self, c: Coalition) -> Result<(), ModelError> {
        if self.universe.contains(c) {
            Ok(())
        } else {
            Err(ModelError::UnknownAgent(format!("bitmask {:#x}", c.bits())))
        }
    }

    /// Re-checks every structural invariant.
    pub fn validate(&self) -> Result<(), ModelError> {
        if self.states.is_empty() {
            return Err(ModelError::NoStates);
        }
        if self.actions.is_empty() {
            return Err(ModelError::NoActions);
        }
        check_unique("state", &self.states)?;
        check_unique("action", &self.actions)?;
        check_unique("atom", &self.atoms)?;
        if self.labels.len() != self.states.len() || self.out_ag.len() != self.states.len() {
            return Err(ModelError::StateOutOfRange(self.labels.len()));
        }
        for label in &self.labels {
            if let Some(&bad) = label.iter().find(|&&a| a >= self.atoms.len()) {
                return Err(ModelError::UnknownAtom(format!("#{bad}")));
            }
        }
        for (s, table) in self.out_ag.iter().enumerate() {
            for (p, targets) in table {
                self.check_profile(p)?;
                if targets.is_empty() {
                    return Err(ModelError::EmptyOutcome(self.states[s].clone()));
                }
                if let Some(&t) = targets.iter().find(|&&t| t >= self.states.len()) {
                    return Err(ModelError::StateOutOfRange(t));
                }
            }
        }
        Ok(())
    }

    /// Declares additional atoms (false everywhere unless labeled later).
    pub fn declare_atoms<I, S>(&mut self, atoms: I) -> Result<(), ModelError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        for a in atoms {
            let a = a.into();
            if !is_identifier(&a) {
                return Err(ModelError::InvalidAtom(a));
            }
            if self.atom_id(&a).is_none() {
                self.atoms.push(a);
            }
        }
        Ok(())
    }

    /// `(w,n)` for profiles, `{a:w}` for partial joint actions.
    pub fn render_joint(&self, ja: &JointAction) -> String {
        if ja.domain() == self.universe.grand() {
            let names: Vec<&str> = ja
                .slots
                .iter()
                .map(|s| self.actions[s.expect("full")].as_str())
                .collect();
            format!("({})", names.join(","))
        } else {
            let parts: Vec<String> = ja
                .slots
                .iter()
                .enumerate()
                .filter_map(|(i, s)| s.map(|a| format!("{}:{}", self.universe.name(i), self.actions[a])))
                .collect();
            format!("{{{}}}", parts.join(","))
        }
    }

    pub fn render_profile(&self, p: &[ActionId]) -> String {
        self.render_joint(&JointAction::from_profile(p))
    }

    /// Copies this model with every state and action name prefixed.
    pub fn with_prefix(&self, prefix: &str) -> GameModel {
        let mut m = self.clone();
        m.states = self.states.iter().map(|s| format!("{prefix}{s}")).collect();
        m.actions = self.actions.iter().map(|a| format!("{prefix}{a}")).collect();
        m
    }
}

/// Renames states and actions so the models' name sets are pairwise
/// disjoint: model `i` gets the prefix `{stem}{i}.`.
pub fn rename_disjoint(models: &[GameModel], stem: &str) -> Vec<GameModel> {
    models
        .iter()
        .enumerate()
        .map(|(i, m)| m.with_prefix(&format!("{stem}{i}.")))
        .collect()
}

// ---------------------------------------------------------------------------
// Classification
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Property {
    Serial,
    Independent,
    Deterministic,
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Property::Serial => "serial",
            Property::Independent => "independent",
            Property::Deterministic => "deterministic",
        })
    }
}

/// The first violation of a property under canonical order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub property: Property,
    pub state: String,
    pub profile: Option<String>,
    pub detail: String,
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.profile {
            Some(p) => write!(f, "not {} at {} {}: {}", self.property, self.state, p, self.detail),
            None => write!(f, "not {} at {}: {}", self.property, self.state, self.detail),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ModelClassification {
    pub is_gcgm: bool,
    pub serial: bool,
    pub independent: bool,
    pub deterministic: bool,
    pub is_cgm: bool,
    pub witnesses: Vec<Witness>,
}

impl ModelClassification {
    pub fn witness(&self, property: Property) -> Option<&Witness> {
        self.witnesses.iter().find(|w| w.property == property)
    }

    pub fn has(&self, property: Property) -> bool {
        match property {
            Property::Serial => self.serial,
            Property::Independent => self.independent,
            Property::Deterministic => self.deterministic,
        }
    }
}

impl fmt::Display for ModelClassification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_cgm {
            return f.write_str("CGM: serial, independent, deterministic");
        }
        let parts: Vec<String> = [Property::Serial, Property::Independent, Property::Deterministic]
            .into_iter()
            .map(|p| match self.witness(p) {
                None => p.to_string(),
                Some(w) => match &w.profile {
                    Some(prof) => format!("not {p} ({}, {prof})", w.state),
                    None => format!("not {p} ({})", w.state),
                },
            })
            .collect();
        write!(f, "GCGM: {}", parts.join(", "))
    }
}

/// Seriality, independence (rectangularity of `av_AG`) and determinism.
pub fn classify(model: &GameModel) -> ModelClassification {
    let n = model.n_agents();
    let mut witnesses = Vec::new();
    let mut serial_w = None;
    let mut indep_w = None;
    let mut det_w = None;

    for s in 0..model.n_states() {
        let table = model.transitions_from(s);
        if serial_w.is_none() && table.is_empty() {
            serial_w = Some(Witness {
                property: Property::Serial,
                state: model.state_name(s).to_string(),
                profile: None,
                detail: "no available action profile".to_string(),
            });
        }
        if indep_w.is_none() {
            let family: Vec<(Coalition, BTreeSet<JointAction>)> = (0..n)
                .map(|a| {
                    let c = Coalition::singleton(a);
                    (c, model.av(c, s).expect("valid state"))
                })
                .collect();
            let product = oplus(n, &family).expect("singletons are disjoint");
            let missing = product.iter().find(|ja| {
                let p = ja.to_profile().expect("full profile");
                !table.contains_key(&p)
            });
            if let Some(ja) = missing {
                indep_w = Some(Witness {
                    property: Property::Independent,
                    state: model.state_name(s).to_string(),
                    profile: Some(model.render_joint(ja)),
                    detail: "merge of individually available actions is not available".to_string(),
                });
            }
        }
        if det_w.is_none() {
            if let Some((p, targets)) = table.iter().find(|(_, t)| t.len() != 1) {
                det_w = Some(Witness {
                    property: Property::Deterministic,
                    state: model.state_name(s).to_string(),
                    profile: Some(model.render_profile(p)),
                    detail: format!("{} outcome states", targets.len()),
                });
            }
        }
    }

    let serial = serial_w.is_none();
    let independent = indep_w.is_none();
    let deterministic = det_w.is_none();
    witnesses.extend(serial_w);
    witnesses.extend(indep_w);
    witnesses.extend(det_w);
    ModelClassification {
        is_gcgm: model.validate().is_ok(),
        serial,
        independent,
        deterministic,
        is_cgm: serial && independent && deterministic,
        witnesses,
    }
}

// ---------------------------------------------------------------------------
// Random generation
// ---------------------------------------------------------------------------

fn numbered(prefix: &str, n: usize) -> Vec<String> {
    (0..n).map(|i| format!("{prefix}{i}")).collect()
}

/// Enumerates all `m^n` profiles in lexicographic order.
pub fn all_profiles(n_agents: usize, n_actions: usize) -> Vec<Profile> {
    let mut out = vec![Vec::with_capacity(n_agents)];
    for _ in 0..n_agents {
        out = out
            .into_iter()
            .flat_map(|p| {
                (0..n_actions).map(move |a| {
                    let mut q = p.clone();
                    q.push(a);
                    q
                })
            })
            .collect();
    }
    out
}

fn random_labels(model: &mut GameModel, rng: &mut ChaCha8Rng) {
    let n_atoms = model.atoms.len();
    for s in 0..model.n_states() {
        model.labels[s] = (0..n_atoms).filter(|_| rng.gen_bool(0.5)).collect();
    }
}

/// A random general model: each `(state, profile, target)` edge is present
/// independently with probability `density`; each atom holds at each state
/// with probability 1/2. Deterministic for a fixed seed.
pub fn random_model(
    universe: &AgentUniverse,
    atoms: &[String],
    n_states: usize,
    n_actions: usize,
    density: f64,
    seed: u64,
) -> Result<GameModel, ModelError> {
    if n_states == 0 || n_actions == 0 {
        return Err(ModelError::ZeroSize);
    }
    if !(0.0..=1.0).contains(&density) {
        return Err(ModelError::BadDensity(density));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut model = GameModel::new(
        universe.clone(),
        numbered("s", n_states),
        numbered("c", n_actions),
        atoms.to_vec(),
    )?;
    random_labels(&mut model, &mut rng);
    let profiles = all_profiles(universe.len(), n_actions);
    for s in 0..n_states {
        for p in &profiles {
            for t in 0..n_states {
                if rng.gen_bool(density) {
                    model.add_edge(s, p, t)?;
                }
            }
        }
    }
    Ok(model)
}

/// A random concurrent game model: at each state every agent gets a
/// nonempty random subset of actions, every profile in their product is
/// available and has exactly one random outcome.
pub fn random_cgm(
    universe: &AgentUniverse,
    atoms: &[String],
    n_states: usize,
    n_actions: usize,
    seed: u64,
) -> Result<GameModel, ModelError> {
    if n_states == 0 || n_actions == 0 {
        return Err(ModelError::ZeroSize);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut model = GameModel::new(
        universe.clone(),
        numbered("s", n_states),
        numbered("c", n_actions),
        atoms.to_vec(),
    )?;
    random_labels(&mut model, &mut rng);
    let n = universe.len();
    for s in 0..n_states {
        let menus: Vec<Vec<ActionId>> = (0..n)
            .map(|_| loop {
                let menu: Vec<ActionId> = (0..n_actions).filter(|_| rng.gen_bool(0.5)).collect();
                if !menu.is_empty() {
                    break menu;
                }
            })
            .collect();
        for p in all_profiles(n, n_actions) {
            if p.iter().enumerate().all(|(i, a)| menus[i].contains(a)) {
                let t = rng.gen_range(0..n_states);
                model.add_edge(s, &p, t)?;
            }
        }
    }
    Ok(model)
}

// ---------------------------------------------------------------------------
// Serialization
// ---------------------------------------------------------------------------

// Field order is alphabetical so serialized keys come out sorted.

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct StateDoc {
    #[serde(default)]
    label: Vec<String>,
    name: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TransitionDoc {
    from: String,
    profile: BTreeMap<String, String>,
    to: Vec<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ModelDoc {
    actions: Vec<String>,
    agents: Vec<String>,
    #[serde(default)]
    atoms: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    designated: Option<String>,
    states: Vec<StateDoc>,
    #[serde(default)]
    transitions: Vec<TransitionDoc>,
}

impl GameModel {
    fn to_doc(&self, designated: Option<StateId>) -> ModelDoc {
        let states = (0..self.n_states())
            .map(|s| StateDoc {
                label: self.label_names(s).into_iter().map(String::from).collect(),
                name: self.states[s].clone(),
            })
            .collect();
        let mut transitions = Vec::new();
        for (s, table) in self.out_ag.iter().enumerate() {
            for (p, targets) in table {
                transitions.push(TransitionDoc {
                    from: self.states[s].clone(),
                    profile: p
                        .iter()
                        .enumerate()
                        .map(|(i, &a)| (self.universe.name(i).to_string(), self.actions[a].clone()))
                        .collect(),
                    to: targets.iter().map(|&t| self.states[t].clone()).collect(),
                });
            }
        }
        ModelDoc {
            actions: self.actions.clone(),
            agents: self.universe.names().to_vec(),
            atoms: self.atoms.clone(),
            designated: designated.map(|s| self.states[s].clone()),
            states,
            transitions,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_doc(None)).expect("serializable")
    }

    /// Serializes with a designated state, as used for pointed models.
    pub fn to_json_pointed(&self, state: StateId) -> String {
        serde_json::to_string_pretty(&self.to_doc(Some(state))).expect("serializable")
    }

    pub fn from_json(text: &str) -> Result<GameModel, ModelError> {
        read_model_document(text).map(|(m, _)| m)
    }
}

/// Parses a model document, returning the designated state if present.
pub fn read_model_document(text: &str) -> Result<(GameModel, Option<StateId>), ModelError> {
    let doc: ModelDoc = serde_json::from_str(text).map_err(|e| ModelError::Json(e.to_string()))?;
    let universe = AgentUniverse::new(doc.agents.clone())?;
    let states: Vec<String> = doc.states.iter().map(|s| s.name.clone()).collect();
    let mut model = GameModel::new(universe, states, doc.actions.clone(), doc.atoms.clone())?;
    for (s, st) in doc.states.iter().enumerate() {
        model.set_label_names(s, &st.label)?;
    }
    let mut seen: HashMap<(StateId, Profile), ()> = HashMap::new();
    for tr in &doc.transitions {
        let from = model.state_id(&tr.from)?;
        for agent in tr.profile.keys() {
            if model.universe.index_of(agent).is_none() {
                return Err(ModelError::UnknownAgent(agent.clone()));
            }
        }
        let pairs: Vec<(&str, &str)> = tr
            .profile
            .iter()
            .map(|(a, b)| (a.as_str(), b.as_str()))
            .collect();
        let p = model.profile_from_names(&pairs)?;
        if seen.insert((from, p.clone()), ()).is_some() {
            return Err(ModelError::DuplicateTransition {
                state: tr.from.clone(),
                profile: model.render_profile(&p),
            });
        }
        for t in &tr.to {
            let t = model.state_id(t)?;
            model.add_edge(from, &p, t)?;
        }
    }
    let designated = doc.designated.as_deref().map(|d| model.state_id(d)).transpose()?;
    Ok((model, designated))
}
