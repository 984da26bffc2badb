//! Model checking.
//!
//! [`eval`] walks the formula top-down and recomputes subformulas at every
//! visited state. [`eval_all`] labels all states bottom-up, once per distinct
//! subformula. The two routes share no code beyond the model's accessors and
//! are cross-checked in tests.

use std::collections::{BTreeMap, HashMap};

use thiserror::Error;

use crate::formula::{Coalition, Formula};
use crate::model::{GameModel, JointAction, ModelError, StateId};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EvalError {
    #[error("atom `{0}` is not declared by the model")]
    UndeclaredAtom(String),
    #[error("formula mentions agents outside the model's universe")]
    UnknownAgent,
    #[error("joint action {0} is not available")]
    NotAvailable(String),
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// A model together with a designated state.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointedModel {
    pub model: GameModel,
    pub state: StateId,
}

impl PointedModel {
    pub fn new(model: GameModel, state: StateId) -> Result<PointedModel, ModelError> {
        if state >= model.n_states() {
            return Err(ModelError::StateOutOfRange(state));
        }
        Ok(PointedModel { model, state })
    }

    pub fn by_name(model: GameModel, state: &str) -> Result<PointedModel, ModelError> {
        let s = model.state_id(state)?;
        Ok(PointedModel { model, state: s })
    }

    pub fn state_name(&self) -> &str {
        self.model.state_name(self.state)
    }

    pub fn eval(&self, f: &Formula) -> Result<bool, EvalError> {
        eval(&self.model, self.state, f)
    }

    pub fn to_json(&self) -> String {
        self.model.to_json_pointed(self.state)
    }
}

/// Rejects formulas whose atoms or agents the model does not declare.
pub fn check_formula(model: &GameModel, f: &Formula) -> Result<(), EvalError> {
    if let Some(a) = f.atoms().into_iter().find(|a| model.atom_id(a).is_none()) {
        return Err(EvalError::UndeclaredAtom(a));
    }
    if !model.universe().contains(f.agents_used()) {
        return Err(EvalError::UnknownAgent);
    }
    Ok(())
}

/// Truth of `f` at `state`.
pub fn eval(model: &GameModel, state: StateId, f: &Formula) -> Result<bool, EvalError> {
    if state >= model.n_states() {
        return Err(ModelError::StateOutOfRange(state).into());
    }
    check_formula(model, f)?;
    Ok(eval_at(model, state, f))
}

fn eval_at(model: &GameModel, s: StateId, f: &Formula) -> bool {
    match f {
        Formula::Top => true,
        Formula::Atom(p) => model.holds(s, model.atom_id(p).expect("checked")),
        Formula::Neg(g) => !eval_at(model, s, g),
        Formula::And(a, b) => eval_at(model, s, a) && eval_at(model, s, b),
        Formula::Can(c, g) => {
            // restriction of each available profile to c -> all outcomes good so far
            let mut groups: BTreeMap<JointAction, bool> = BTreeMap::new();
            for (p, targets) in model.transitions_from(s) {
                let key = JointAction::from_profile(p).restrict(*c);
                let ok = groups.entry(key).or_insert(true);
                if *ok && !targets.iter().all(|&t| eval_at(model, t, g)) {
                    *ok = false;
                }
            }
            groups.values().any(|&ok| ok)
        }
    }
}

/// Truth of `f` at every state, indexed by state id.
pub fn eval_all(model: &GameModel, f: &Formula) -> Result<Vec<bool>, EvalError> {
    check_formula(model, f)?;
    let mut memo: HashMap<&Formula, Vec<bool>> = HashMap::new();
    Ok(label(model, f, &mut memo))
}

fn label<'f>(model: &GameModel, f: &'f Formula, memo: &mut HashMap<&'f Formula, Vec<bool>>) -> Vec<bool> {
    if let Some(v) = memo.get(f) {
        return v.clone();
    }
    let n = model.n_states();
    let v = match f {
        Formula::Top => vec![true; n],
        Formula::Atom(p) => {
            let i = model.atom_id(p).expect("checked");
            (0..n).map(|s| model.holds(s, i)).collect()
        }
        Formula::Neg(g) => label(model, g, memo).into_iter().map(|b| !b).collect(),
        Formula::And(a, b) => {
            let x = label(model, a, memo);
            let y = label(model, b, memo);
            x.into_iter().zip(y).map(|(p, q)| p && q).collect()
        }
        Formula::Can(c, g) => {
            let inner = label(model, g, memo);
            (0..n).map(|s| can_at(model, s, *c, &inner)).collect()
        }
    };
    memo.insert(f, v.clone());
    v
}

// Enumerates av_A(s) and checks each out_A(s, σ_A) against the inner labeling.
fn can_at(model: &GameModel, s: StateId, c: Coalition, inner: &[bool]) -> bool {
    let av = model.av(c, s).expect("valid state and coalition");
    av.iter().any(|ja| {
        model
            .out(c, s, ja)
            .expect("available joint action")
            .iter()
            .all(|&t| inner[t])
    })
}

/// Whether `action` (available to `coalition` at `state`) guarantees `f`.
pub fn ensures(
    model: &GameModel,
    state: StateId,
    coalition: Coalition,
    action: &JointAction,
    f: &Formula,
) -> Result<bool, EvalError> {
    check_formula(model, f)?;
    let av = model.av(coalition, state)?;
    if action.domain() != coalition || !av.contains(action) {
        return Err(EvalError::NotAvailable(model.render_joint(action)));
    }
    let truth = eval_all(model, f)?;
    Ok(model.out(coalition, state, action)?.iter().all(|&t| truth[t]))
}
