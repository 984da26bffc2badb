//! Formulas of coalition logic: agents, coalitions, the core AST, a
//! recursive-descent parser for the concrete grammar and a printer that
//! emits minimal parentheses.
//!
//! Only five constructors exist in the AST (`Top`, `Atom`, `Neg`, `And`,
//! `Can`). Everything else the grammar offers (`false`, `|`, `->`, `<->`,
//! `[A]`, `box`, `dia`) is lowered while parsing.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

/// Maximum number of agents; coalitions are bitmasks over the universe.
pub const MAX_AGENTS: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum UniverseError {
    #[error("agent universe must be nonempty")]
    Empty,
    #[error("duplicate agent name `{0}`")]
    Duplicate(String),
    #[error("invalid agent name `{0}`")]
    InvalidName(String),
    #[error("at most {MAX_AGENTS} agents are supported, got {0}")]
    TooMany(usize),
}

/// The grand coalition: a nonempty, ordered list of distinct agent names.
///
/// Declaration order is the canonical order used for tie-breaking and
/// serialization.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AgentUniverse {
    agents: Vec<String>,
}

impl AgentUniverse {
    pub fn new<I, S>(names: I) -> Result<Self, UniverseError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let agents: Vec<String> = names.into_iter().map(Into::into).collect();
        if agents.is_empty() {
            return Err(UniverseError::Empty);
        }
        if agents.len() > MAX_AGENTS {
            return Err(UniverseError::TooMany(agents.len()));
        }
        let mut seen = BTreeSet::new();
        for name in &agents {
            if !is_identifier(name) {
                return Err(UniverseError::InvalidName(name.clone()));
            }
            if !seen.insert(name.as_str()) {
                return Err(UniverseError::Duplicate(name.clone()));
            }
        }
        Ok(AgentUniverse { agents })
    }

    /// Parses a comma-separated agent list such as `a,b`.
    pub fn from_csv(list: &str) -> Result<Self, UniverseError> {
        let names: Vec<&str> = list
            .split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .collect();
        AgentUniverse::new(names)
    }

    /// Collects agent names mentioned inside coalition braces, in order of
    /// first appearance.
    pub fn infer_from_text(text: &str) -> Result<Self, UniverseError> {
        let mut names: Vec<String> = Vec::new();
        let mut lexer = Lexer::new(text);
        let mut in_braces = false;
        while let Ok(Some((tok, _))) = lexer.next_token() {
            match tok {
                Token::LBrace => in_braces = true,
                Token::RBrace => in_braces = false,
                Token::Ident(name) if in_braces && !names.contains(&name) => names.push(name),
                _ => {}
            }
        }
        AgentUniverse::new(names)
    }

    pub fn len(&self) -> usize {
        self.agents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.agents.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.agents
    }

    pub fn name(&self, index: usize) -> &str {
        &self.agents[index]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.agents.iter().position(|a| a == name)
    }

    pub fn grand(&self) -> Coalition {
        Coalition::full(self.len())
    }

    pub fn coalition<S: AsRef<str>>(&self, names: &[S]) -> Result<Coalition, String> {
        let mut c = Coalition::EMPTY;
        for n in names {
            let idx = self
                .index_of(n.as_ref())
                .ok_or_else(|| n.as_ref().to_string())?;
            c = c.with(idx);
        }
        Ok(c)
    }

    /// Every coalition over this universe in binary-counter order.
    pub fn coalitions(&self) -> impl Iterator<Item = Coalition> {
        let n = self.len();
        let limit: u128 = 1u128 << n;
        (0..limit).map(|bits| Coalition(bits as u64))
    }

    pub fn contains(&self, c: Coalition) -> bool {
        c.is_subset(self.grand())
    }

    pub fn render(&self, c: Coalition) -> String {
        let names: Vec<&str> = c.members().map(|i| self.name(i)).collect();
        format!("{{{}}}", names.join(","))
    }
}

/// A subset of the agent universe, stored as a bitmask over agent indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Coalition(u64);

impl Coalition {
    pub const EMPTY: Coalition = Coalition(0);

    pub fn full(n: usize) -> Coalition {
        if n >= 64 {
            Coalition(u64::MAX)
        } else {
            Coalition((1u64 << n) - 1)
        }
    }

    pub fn from_bits(bits: u64) -> Coalition {
        Coalition(bits)
    }

    pub fn singleton(agent: usize) -> Coalition {
        Coalition(1u64 << agent)
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn with(self, agent: usize) -> Coalition {
        Coalition(self.0 | (1u64 << agent))
    }

    pub fn contains(self, agent: usize) -> bool {
        agent < 64 && self.0 & (1u64 << agent) != 0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_subset(self, other: Coalition) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn union(self, other: Coalition) -> Coalition {
        Coalition(self.0 | other.0)
    }

    pub fn intersection(self, other: Coalition) -> Coalition {
        Coalition(self.0 & other.0)
    }

    pub fn difference(self, other: Coalition) -> Coalition {
        Coalition(self.0 & !other.0)
    }

    pub fn is_disjoint(self, other: Coalition) -> bool {
        self.0 & other.0 == 0
    }

    /// `AG - self` relative to a universe of `n` agents.
    pub fn complement(self, n: usize) -> Coalition {
        Coalition::full(n).difference(self)
    }

    /// Member indices in ascending (canonical) order.
    pub fn members(self) -> impl Iterator<Item = usize> {
        (0..64).filter(move |&i| self.0 & (1u64 << i) != 0)
    }

    /// Least member in canonical order.
    pub fn first(self) -> Option<usize> {
        if self.0 == 0 {
            None
        } else {
            Some(self.0.trailing_zeros() as usize)
        }
    }
}

/// Core abstract syntax.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Top,
    Atom(String),
    Neg(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    /// `<A>φ`: some available joint action of `A` ensures `φ`.
    Can(Coalition, Box<Formula>),
}

impl Formula {
    pub fn top() -> Formula {
        Formula::Top
    }

    /// Falsum is `~true`; there is no separate constructor.
    pub fn bot() -> Formula {
        Formula::Neg(Box::new(Formula::Top))
    }

    pub fn atom(name: impl Into<String>) -> Formula {
        Formula::Atom(name.into())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Formula {
        Formula::Neg(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn can(c: Coalition, f: Formula) -> Formula {
        Formula::Can(c, Box::new(f))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::not(Formula::and(Formula::not(a), Formula::not(b)))
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::not(Formula::and(a, Formula::not(b)))
    }

    pub fn iff(a: Formula, b: Formula) -> Formula {
        Formula::and(Formula::implies(a.clone(), b.clone()), Formula::implies(b, a))
    }

    /// `[A]φ = ~<A>~φ`.
    pub fn dual(c: Coalition, f: Formula) -> Formula {
        Formula::not(Formula::can(c, Formula::not(f)))
    }

    /// `box φ = <{}>true -> <{}>φ`.
    pub fn boxed(f: Formula) -> Formula {
        Formula::implies(
            Formula::can(Coalition::EMPTY, Formula::Top),
            Formula::can(Coalition::EMPTY, f),
        )
    }

    /// `dia φ = <{}>true & [{}]φ`.
    pub fn diamond(f: Formula) -> Formula {
        Formula::and(
            Formula::can(Coalition::EMPTY, Formula::Top),
            Formula::dual(Coalition::EMPTY, f),
        )
    }

    /// Conjunction of a list; `true` when empty, the sole element when single.
    pub fn conjunction<I: IntoIterator<Item = Formula>>(items: I) -> Formula {
        let mut iter = items.into_iter();
        match iter.next() {
            None => Formula::Top,
            Some(first) => iter.fold(first, Formula::and),
        }
    }

    /// Disjunction of a list; `false` when empty.
    pub fn disjunction<I: IntoIterator<Item = Formula>>(items: I) -> Formula {
        let mut iter = items.into_iter();
        match iter.next() {
            None => Formula::bot(),
            Some(first) => iter.fold(first, Formula::or),
        }
    }

    pub fn is_bot(&self) -> bool {
        matches!(self, Formula::Neg(inner) if **inner == Formula::Top)
    }

    pub fn modal_depth(&self) -> usize {
        match self {
            Formula::Top | Formula::Atom(_) => 0,
            Formula::Neg(f) => f.modal_depth(),
            Formula::And(a, b) => a.modal_depth().max(b.modal_depth()),
            Formula::Can(_, f) => 1 + f.modal_depth(),
        }
    }

    pub fn atoms(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms(&self, out: &mut BTreeSet<String>) {
        match self {
            Formula::Top => {}
            Formula::Atom(p) => {
                out.insert(p.clone());
            }
            Formula::Neg(f) | Formula::Can(_, f) => f.collect_atoms(out),
            Formula::And(a, b) => {
                a.collect_atoms(out);
                b.collect_atoms(out);
            }
        }
    }

    /// Union of all coalitions occurring in the formula.
    pub fn agents_used(&self) -> Coalition {
        match self {
            Formula::Top | Formula::Atom(_) => Coalition::EMPTY,
            Formula::Neg(f) => f.agents_used(),
            Formula::And(a, b) => a.agents_used().union(b.agents_used()),
            Formula::Can(c, f) => c.union(f.agents_used()),
        }
    }

    pub fn size(&self) -> usize {
        match self {
            Formula::Top | Formula::Atom(_) => 1,
            Formula::Neg(f) | Formula::Can(_, f) => 1 + f.size(),
            Formula::And(a, b) => 1 + a.size() + b.size(),
        }
    }

    /// Renders the formula in the concrete grammar.
    pub fn display<'a>(&'a self, universe: &'a AgentUniverse) -> Display<'a> {
        Display {
            formula: self,
            universe,
        }
    }

    pub fn print(&self, universe: &AgentUniverse) -> String {
        self.display(universe).to_string()
    }

    /// Renders the core AST with no re-sugaring: only `true`, atoms, `~`,
    /// fully parenthesized `&`, and `<C>`. The output parses back to `self`.
    pub fn print_core(&self, universe: &AgentUniverse) -> String {
        match self {
            Formula::Top => "true".to_string(),
            Formula::Atom(p) => p.clone(),
            Formula::Neg(g) => format!("~{}", g.print_core(universe)),
            Formula::And(a, b) => format!("({} & {})", a.print_core(universe), b.print_core(universe)),
            Formula::Can(c, g) => format!("<{}>{}", universe.render(*c), g.print_core(universe)),
        }
    }
}

// ---------------------------------------------------------------------------
// Printing
// ---------------------------------------------------------------------------

// Binding strength, loosest first. Parenthesize a child whose level is below
// the level its position requires.
const LEVEL_IMP: u8 = 1;
const LEVEL_OR: u8 = 2;
const LEVEL_AND: u8 = 3;
const LEVEL_UNARY: u8 = 4;

pub struct Display<'a> {
    formula: &'a Formula,
    universe: &'a AgentUniverse,
}

impl fmt::Display for Display<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        write_formula(&mut out, self.formula, self.universe, 0);
        f.write_str(&out)
    }
}

/// How a core node is rendered. Re-sugaring only picks forms that parse back
/// to the identical AST.
enum Shape<'a> {
    Top,
    Bot,
    Atom(&'a str),
    Not(&'a Formula),
    And(&'a Formula, &'a Formula),
    Or(&'a Formula, &'a Formula),
    Imp(&'a Formula, &'a Formula),
    Can(Coalition, &'a Formula),
    Dual(Coalition, &'a Formula),
}

fn shape(f: &Formula) -> Shape<'_> {
    match f {
        Formula::Top => Shape::Top,
        Formula::Atom(p) => Shape::Atom(p),
        Formula::And(a, b) => Shape::And(a, b),
        Formula::Can(c, g) => Shape::Can(*c, g),
        Formula::Neg(inner) => match inner.as_ref() {
            Formula::Top => Shape::Bot,
            Formula::And(a, b) => match (a.as_ref(), b.as_ref()) {
                (Formula::Neg(x), Formula::Neg(y)) => Shape::Or(x, y),
                (x, Formula::Neg(y)) => Shape::Imp(x, y),
                _ => Shape::Not(inner),
            },
            Formula::Can(c, g) => match g.as_ref() {
                Formula::Neg(h) => Shape::Dual(*c, h),
                _ => Shape::Not(inner),
            },
            _ => Shape::Not(inner),
        },
    }
}

fn level(s: &Shape<'_>) -> u8 {
    match s {
        Shape::Imp(..) => LEVEL_IMP,
        Shape::Or(..) => LEVEL_OR,
        Shape::And(..) => LEVEL_AND,
        _ => LEVEL_UNARY,
    }
}

fn write_formula(out: &mut String, f: &Formula, u: &AgentUniverse, min_level: u8) {
    let s = shape(f);
    let paren = level(&s) < min_level;
    if paren {
        out.push('(');
    }
    match s {
        Shape::Top => out.push_str("true"),
        Shape::Bot => out.push_str("false"),
        Shape::Atom(p) => out.push_str(p),
        Shape::Not(g) => {
            out.push('~');
            write_formula(out, g, u, LEVEL_UNARY);
        }
        Shape::Can(c, g) => {
            out.push('<');
            out.push_str(&u.render(c));
            out.push('>');
            write_formula(out, g, u, LEVEL_UNARY);
        }
        Shape::Dual(c, g) => {
            out.push('[');
            out.push_str(&u.render(c));
            out.push(']');
            write_formula(out, g, u, LEVEL_UNARY);
        }
        Shape::And(a, b) => {
            write_formula(out, a, u, LEVEL_AND);
            out.push_str(" & ");
            write_formula(out, b, u, LEVEL_UNARY);
        }
        Shape::Or(a, b) => {
            write_formula(out, a, u, LEVEL_OR);
            out.push_str(" | ");
            write_formula(out, b, u, LEVEL_AND);
        }
        Shape::Imp(a, b) => {
            write_formula(out, a, u, LEVEL_OR);
            out.push_str(" -> ");
            write_formula(out, b, u, LEVEL_IMP);
        }
    }
    if paren {
        out.push(')');
    }
}

// ---------------------------------------------------------------------------
// Lexing and parsing
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("empty input")]
    Empty,
    #[error("syntax error at byte {pos}: {message}")]
    Syntax { pos: usize, message: String },
    #[error("unknown agent `{name}` at byte {pos}")]
    UnknownAgent { name: String, pos: usize },
    #[error(transparent)]
    Universe(#[from] UniverseError),
}

pub fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Token {
    Ident(String),
    Tilde,
    Amp,
    Bar,
    Arrow,
    DoubleArrow,
    Lt,
    Gt,
    LBracket,
    RBracket,
    LBrace,
    RBrace,
    LParen,
    RParen,
    Comma,
}

impl Token {
    fn describe(&self) -> String {
        match self {
            Token::Ident(s) => format!("`{s}`"),
            Token::Tilde => "`~`".into(),
            Token::Amp => "`&`".into(),
            Token::Bar => "`|`".into(),
            Token::Arrow => "`->`".into(),
            Token::DoubleArrow => "`<->`".into(),
            Token::Lt => "`<`".into(),
            Token::Gt => "`>`".into(),
            Token::LBracket => "`[`".into(),
            Token::RBracket => "`]`".into(),
            Token::LBrace => "`{`".into(),
            Token::RBrace => "`}`".into(),
            Token::LParen => "`(`".into(),
            Token::RParen => "`)`".into(),
            Token::Comma => "`,`".into(),
        }
    }
}

struct Lexer<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Self {
        Lexer { src, pos: 0 }
    }

    fn next_token(&mut self) -> Result<Option<(Token, usize)>, ParseError> {
        let bytes = self.src.as_bytes();
        while self.pos < bytes.len() && (bytes[self.pos] as char).is_ascii_whitespace() {
            self.pos += 1;
        }
        if self.pos >= bytes.len() {
            return Ok(None);
        }
        let start = self.pos;
        let rest = &self.src[start..];
        let (tok, len) = if rest.starts_with("<->") {
            (Token::DoubleArrow, 3)
        } else if rest.starts_with("->") {
            (Token::Arrow, 2)
        } else {
            let c = rest.chars().next().expect("nonempty");
            match c {
                '~' => (Token::Tilde, 1),
                '&' => (Token::Amp, 1),
                '|' => (Token::Bar, 1),
                '<' => (Token::Lt, 1),
                '>' => (Token::Gt, 1),
                '[' => (Token::LBracket, 1),
                ']' => (Token::RBracket, 1),
                '{' => (Token::LBrace, 1),
                '}' => (Token::RBrace, 1),
                '(' => (Token::LParen, 1),
                ')' => (Token::RParen, 1),
                ',' => (Token::Comma, 1),
                c if c.is_ascii_alphabetic() || c == '_' => {
                    let len = rest
                        .find(|ch: char| !(ch.is_ascii_alphanumeric() || ch == '_'))
                        .unwrap_or(rest.len());
                    (Token::Ident(rest[..len].to_string()), len)
                }
                other => {
                    return Err(ParseError::Syntax {
                        pos: start,
                        message: format!("unexpected character `{other}`"),
                    })
                }
            }
        };
        self.pos += len;
        Ok(Some((tok, start)))
    }
}

struct Parser<'u> {
    tokens: Vec<(Token, usize)>,
    idx: usize,
    end: usize,
    universe: &'u AgentUniverse,
}

/// Parses `text` over `universe`, returning the lowered core AST.
pub fn parse(text: &str, universe: &AgentUniverse) -> Result<Formula, ParseError> {
    let mut lexer = Lexer::new(text);
    let mut tokens = Vec::new();
    while let Some(t) = lexer.next_token()? {
        tokens.push(t);
    }
    if tokens.is_empty() {
        return Err(ParseError::Empty);
    }
    let mut p = Parser {
        tokens,
        idx: 0,
        end: text.len(),
        universe,
    };
    let f = p.formula()?;
    if let Some((tok, pos)) = p.peek_full() {
        return Err(ParseError::Syntax {
            pos,
            message: format!("unexpected {} after complete formula", tok.describe()),
        });
    }
    Ok(f)
}

/// Parses with the universe inferred from the coalitions in the text.
pub fn parse_inferring_universe(text: &str) -> Result<(Formula, AgentUniverse), ParseError> {
    let universe = AgentUniverse::infer_from_text(text)?;
    let f = parse(text, &universe)?;
    Ok((f, universe))
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.idx).map(|(t, _)| t)
    }

    fn peek_full(&self) -> Option<(Token, usize)> {
        self.tokens.get(self.idx).cloned()
    }

    fn pos(&self) -> usize {
        self.tokens.get(self.idx).map(|(_, p)| *p).unwrap_or(self.end)
    }

    fn bump(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.idx).map(|(t, _)| t.clone());
        self.idx += 1;
        t
    }

    fn eat(&mut self, tok: &Token) -> bool {
        if self.peek() == Some(tok) {
            self.idx += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: Token) -> Result<(), ParseError> {
        if self.eat(&tok) {
            Ok(())
        } else {
            Err(self.error(format!("expected {}", tok.describe())))
        }
    }

    fn error(&self, message: String) -> ParseError {
        let found = match self.peek() {
            Some(t) => format!(", found {}", t.describe()),
            None => ", found end of input".to_string(),
        };
        ParseError::Syntax {
            pos: self.pos(),
            message: format!("{message}{found}"),
        }
    }

    fn formula(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.imp()?;
        while self.eat(&Token::DoubleArrow) {
            let rhs = self.imp()?;
            lhs = Formula::iff(lhs, rhs);
        }
        Ok(lhs)
    }

    fn imp(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.or()?;
        if self.eat(&Token::Arrow) {
            let rhs = self.imp()?;
            return Ok(Formula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn or(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.and()?;
        while self.eat(&Token::Bar) {
            let rhs = self.and()?;
            lhs = Formula::or(lhs, rhs);
        }
        Ok(lhs)
    }

    fn and(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.unary()?;
        while self.eat(&Token::Amp) {
            let rhs = self.unary()?;
            lhs = Formula::and(lhs, rhs);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        match self.peek() {
            Some(Token::Tilde) => {
                self.bump();
                Ok(Formula::not(self.unary()?))
            }
            Some(Token::Lt) => {
                self.bump();
                let c = self.coalition()?;
                self.expect(Token::Gt)?;
                Ok(Formula::can(c, self.unary()?))
            }
            Some(Token::LBracket) => {
                self.bump();
                let c = self.coalition()?;
                self.expect(Token::RBracket)?;
                Ok(Formula::dual(c, self.unary()?))
            }
            Some(Token::Ident(kw)) if kw == "box" => {
                self.bump();
                Ok(Formula::boxed(self.unary()?))
            }
            Some(Token::Ident(kw)) if kw == "dia" => {
                self.bump();
                Ok(Formula::diamond(self.unary()?))
            }
            _ => self.atom(),
        }
    }

    fn atom(&mut self) -> Result<Formula, ParseError> {
        match self.peek().cloned() {
            Some(Token::Ident(name)) => {
                self.bump();
                Ok(match name.as_str() {
                    "true" => Formula::Top,
                    "false" => Formula::bot(),
                    _ => Formula::Atom(name),
                })
            }
            Some(Token::LParen) => {
                self.bump();
                let f = self.formula()?;
                self.expect(Token::RParen)?;
                Ok(f)
            }
            _ => Err(self.error("expected a formula".to_string())),
        }
    }

    fn coalition(&mut self) -> Result<Coalition, ParseError> {
        self.expect(Token::LBrace)?;
        let mut c = Coalition::EMPTY;
        if self.eat(&Token::RBrace) {
            return Ok(c);
        }
        loop {
            let pos = self.pos();
            match self.bump() {
                Some(Token::Ident(name)) => {
                    let idx = self
                        .universe
                        .index_of(&name)
                        .ok_or(ParseError::UnknownAgent { name, pos })?;
                    c = c.with(idx);
                }
                _ => {
                    self.idx -= 1;
                    return Err(self.error("expected an agent name".to_string()));
                }
            }
            if self.eat(&Token::RBrace) {
                return Ok(c);
            }
            self.expect(Token::Comma)?;
        }
    }
}
