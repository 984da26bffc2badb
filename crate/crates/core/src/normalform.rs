//! Conjunctions of standard formulas.
//!
//! A standard formula is `γ ∨ (⋀_{NI} ⟨A_i⟩φ_i → ⋁_{PI} ⟨B_j⟩ψ_j)` where `γ`
//! is a disjunction of propositional literals, `(AG, ⊥) ∈ PI` and, when `NI`
//! is nonempty, `(∅, ⊤) ∈ NI`.
//!
//! [`normalize`] treats maximal modal subformulas as opaque atoms, pushes
//! negations inward and distributes to CNF. Clauses and literals are
//! deduplicated; nothing else is removed, so every modal atom survives in
//! some clause and the maximal clause depth equals the input depth.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::formula::{AgentUniverse, Coalition, Formula};

/// Upper bound on the number of CNF clauses built during distribution.
pub const MAX_CLAUSES: usize = 200_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NormalFormError {
    #[error("formula has modal depth 0; use the propositional path")]
    DepthZero,
    #[error("formula mentions agents outside the universe")]
    UnknownAgent,
    #[error("clause form exceeds {MAX_CLAUSES} clauses")]
    TooLarge,
}

/// A propositional literal of `γ`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PropLiteral {
    Top,
    Pos(String),
    Neg(String),
}

impl PropLiteral {
    pub fn to_formula(&self) -> Formula {
        match self {
            PropLiteral::Top => Formula::top(),
            PropLiteral::Pos(p) => Formula::atom(p.clone()),
            PropLiteral::Neg(p) => Formula::not(Formula::atom(p.clone())),
        }
    }
}

/// `true` iff the disjunction contains `⊤` or a complementary pair.
pub fn gamma_is_tautology(gamma: &BTreeSet<PropLiteral>) -> bool {
    gamma.iter().any(|lit| match lit {
        PropLiteral::Top => true,
        PropLiteral::Pos(p) => gamma.contains(&PropLiteral::Neg(p.clone())),
        PropLiteral::Neg(_) => false,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct StandardFormula {
    pub gamma: BTreeSet<PropLiteral>,
    pub ni: Vec<(Coalition, Formula)>,
    pub pi: Vec<(Coalition, Formula)>,
}

/// Positions (0-based, into `ni`) of empty-coalition entries and the
/// conjunction of their goals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ni0Summary {
    pub indices: Vec<usize>,
    pub phi: Formula,
}

impl StandardFormula {
    /// Checks the two padding conditions.
    pub fn is_well_formed(&self, universe: &AgentUniverse) -> bool {
        let ag_bot = (universe.grand(), Formula::bot());
        let empty_top = (Coalition::EMPTY, Formula::top());
        self.pi.contains(&ag_bot)
            && (self.ni.is_empty() || self.ni.contains(&empty_top))
            && self
                .ni
                .iter()
                .chain(&self.pi)
                .all(|(c, _)| universe.contains(*c))
    }

    pub fn ni0(&self) -> Ni0Summary {
        let indices: Vec<usize> = self
            .ni
            .iter()
            .enumerate()
            .filter(|(_, (c, _))| c.is_empty())
            .map(|(i, _)| i)
            .collect();
        let phi = Formula::conjunction(indices.iter().map(|&i| self.ni[i].1.clone()));
        Ni0Summary { indices, phi }
    }

    pub fn gamma_formula(&self) -> Formula {
        Formula::disjunction(self.gamma.iter().map(PropLiteral::to_formula))
    }

    /// `γ ∨ (⋀ ⟨A_i⟩φ_i → ⋁ ⟨B_j⟩ψ_j)` as a plain formula.
    pub fn to_formula(&self) -> Formula {
        let lhs = Formula::conjunction(self.ni.iter().map(|(c, f)| Formula::can(*c, f.clone())));
        let rhs = Formula::disjunction(self.pi.iter().map(|(c, f)| Formula::can(*c, f.clone())));
        Formula::or(self.gamma_formula(), Formula::implies(lhs, rhs))
    }

    pub fn modal_depth(&self) -> usize {
        self.ni
            .iter()
            .chain(&self.pi)
            .map(|(_, f)| f.modal_depth() + 1)
            .max()
            .unwrap_or(0)
    }

    pub fn display<'a>(&'a self, universe: &'a AgentUniverse) -> StandardDisplay<'a> {
        StandardDisplay { sf: self, universe }
    }

    /// Index label used in traces: NI entries are `-1, -2, ...`, PI entries
    /// are `1, 2, ...`.
    pub fn ni_label(i: usize) -> String {
        format!("-{}", i + 1)
    }

    pub fn pi_label(j: usize) -> String {
        format!("{}", j + 1)
    }

    pub fn pair_label(i: usize, j: usize) -> String {
        format!("-{}-{}", i + 1, j + 1)
    }
}

pub struct StandardDisplay<'a> {
    sf: &'a StandardFormula,
    universe: &'a AgentUniverse,
}

impl fmt::Display for StandardDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let u = self.universe;
        let gamma = self.sf.gamma_formula().print(u);
        let side = |items: &[(Coalition, Formula)], sep: &str, empty: &str| {
            if items.is_empty() {
                return empty.to_string();
            }
            items
                .iter()
                .map(|(c, g)| Formula::can(*c, g.clone()).print(u))
                .map(|s| if items.len() > 1 { format!("({s})") } else { s })
                .collect::<Vec<_>>()
                .join(sep)
        };
        let lhs = side(&self.sf.ni, " & ", "true");
        let rhs = side(&self.sf.pi, " | ", "false");
        write!(f, "{gamma} | (({lhs}) -> ({rhs}))")
    }
}

// ---------------------------------------------------------------------------
// CNF over the propositional skeleton
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum Literal {
    Top,
    Atom(String, bool),
    Modal(Coalition, Formula, bool),
}

type Clause = Vec<Literal>;

fn push_unique<T: PartialEq>(v: &mut Vec<T>, x: T) {
    if !v.contains(&x) {
        v.push(x);
    }
}

// CNF of `f` if `positive`, else of `¬f`. An empty clause is ⊥.
fn cnf(f: &Formula, positive: bool) -> Result<Vec<Clause>, NormalFormError> {
    Ok(match (f, positive) {
        (Formula::Top, true) => vec![vec![Literal::Top]],
        (Formula::Top, false) => vec![vec![]],
        (Formula::Atom(p), pol) => vec![vec![Literal::Atom(p.clone(), pol)]],
        (Formula::Can(c, g), pol) => vec![vec![Literal::Modal(*c, (**g).clone(), pol)]],
        (Formula::Neg(g), pol) => cnf(g, !pol)?,
        (Formula::And(a, b), true) => {
            let mut out = cnf(a, true)?;
            for c in cnf(b, true)? {
                push_unique(&mut out, c);
            }
            out
        }
        (Formula::And(a, b), false) => {
            // ¬(a ∧ b) = ¬a ∨ ¬b
            let left = cnf(a, false)?;
            let right = cnf(b, false)?;
            if left.len().saturating_mul(right.len()) > MAX_CLAUSES {
                return Err(NormalFormError::TooLarge);
            }
            let mut out = Vec::new();
            for l in &left {
                for r in &right {
                    let mut c = l.clone();
                    for lit in r {
                        push_unique(&mut c, lit.clone());
                    }
                    push_unique(&mut out, c);
                }
            }
            out
        }
    })
}

fn to_standard(clause: Clause, universe: &AgentUniverse) -> StandardFormula {
    let mut gamma = BTreeSet::new();
    let mut ni = Vec::new();
    let mut pi = Vec::new();
    for lit in clause {
        match lit {
            Literal::Top => {
                gamma.insert(PropLiteral::Top);
            }
            Literal::Atom(p, true) => {
                gamma.insert(PropLiteral::Pos(p));
            }
            Literal::Atom(p, false) => {
                gamma.insert(PropLiteral::Neg(p));
            }
            Literal::Modal(c, g, true) => push_unique(&mut pi, (c, g)),
            Literal::Modal(c, g, false) => push_unique(&mut ni, (c, g)),
        }
    }
    if !ni.is_empty() {
        push_unique(&mut ni, (Coalition::EMPTY, Formula::top()));
    }
    push_unique(&mut pi, (universe.grand(), Formula::bot()));
    StandardFormula { gamma, ni, pi }
}

/// Rewrites a formula of modal depth at least 1 into an equivalent
/// conjunction of standard formulas of the same modal depth.
pub fn normalize(f: &Formula, universe: &AgentUniverse) -> Result<Vec<StandardFormula>, NormalFormError> {
    if f.modal_depth() == 0 {
        return Err(NormalFormError::DepthZero);
    }
    if !universe.contains(f.agents_used()) {
        return Err(NormalFormError::UnknownAgent);
    }
    let mut out: Vec<StandardFormula> = Vec::new();
    for clause in cnf(f, true)? {
        push_unique(&mut out, to_standard(clause, universe));
    }
    Ok(out)
}

/// The conjunction of the clauses as a single formula.
pub fn conjunction_of(clauses: &[StandardFormula]) -> Formula {
    Formula::conjunction(clauses.iter().map(StandardFormula::to_formula))
}
