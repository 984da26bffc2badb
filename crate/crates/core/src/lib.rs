//! Minimal coalition logic over general concurrent game models.
//!
//! The crate covers the whole pipeline: parsing formulas, building and
//! classifying models, model checking, normal forms, a decision procedure
//! that produces certified countermodels, and a bounded brute-force oracle
//! used for differential testing.

pub mod decide;
pub mod fixtures;
pub mod formula;
pub mod model;
pub mod normalform;
pub mod oracle;
pub mod semantics;

pub use formula::{parse, AgentUniverse, Coalition, Formula, ParseError};
pub use model::{classify, GameModel, JointAction, ModelClassification, ModelError};

pub use semantics::{ensures, eval, eval_all, EvalError, PointedModel};
pub use decide::{decide_sat, decide_valid, DecideError, Verdict};
pub use normalform::{normalize, StandardFormula};
