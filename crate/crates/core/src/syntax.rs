//! Formulas of basic hybrid modal logic.
//!
//! The language is built from two disjoint namespaces of identifiers:
//! nominals (names of single worlds) and propositional variables. An
//! identifier is a lowercase letter followed by letters, digits or
//! underscores; identifiers whose first letter lies in `i..=n` are nominals,
//! all others are propositional variables. This split is part of the surface
//! grammar: `j` parses as a nominal, `p` as a proposition.
//!
//! The ASCII surface syntax accepted by [`parse`] and produced by the
//! [`Display`](std::fmt::Display) impl of [`Formula`]:
//!
//! ```text
//! formula = or , [ "->" , formula ] ;          (* "->" right-associative *)
//! or      = and , { "|" , and } ;
//! and     = unary , { "&" , unary } ;
//! unary   = "~" unary | "@" nominal unary | "[]" unary | "<>" unary | atom ;
//! atom    = prop | nominal | "R" "(" nominal "," nominal ")" | "(" formula ")" ;
//! ```
//!
//! Precedence is `~ @ [] <>` over `&` over `|` over `->`.

mod parse;

pub use parse::{parse, ParseError, ParseErrorKind};

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Is `s` a well-formed identifier (lowercase letter, then letters, digits
/// or underscores)?
pub fn is_ident(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_lowercase() => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Does identifier `s` belong to the nominal namespace (first letter in
/// `i..=n`)?
pub fn is_nominal_ident(s: &str) -> bool {
    is_ident(s) && matches!(s.as_bytes()[0], b'i'..=b'n')
}

/// The name of a single world. Nominals are interned as shared strings, so
/// cloning is cheap and equality is plain content comparison.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Nominal(Arc<str>);

impl Nominal {
    /// Panics if `name` is not in the nominal namespace.
    pub fn new(name: impl AsRef<str>) -> Self {
        let name = name.as_ref();
        assert!(
            is_nominal_ident(name),
            "{name:?} is not a nominal identifier (must start with i..n)"
        );
        Nominal(Arc::from(name))
    }

    pub fn try_new(name: &str) -> Option<Self> {
        is_nominal_ident(name).then(|| Nominal(Arc::from(name)))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Nominal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for Nominal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Nominal({})", self.0)
    }
}

/// A propositional variable, disjoint from the nominal namespace.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PropVar(Arc<str>);

impl PropVar {
    /// Panics if `name` is not in the propositional namespace.
    pub fn new(name: impl AsRef<str>) -> Self {
        let name = name.as_ref();
        assert!(
            is_ident(name) && !is_nominal_ident(name),
            "{name:?} is not a propositional identifier"
        );
        PropVar(Arc::from(name))
    }

    pub fn try_new(name: &str) -> Option<Self> {
        (is_ident(name) && !is_nominal_ident(name)).then(|| PropVar(Arc::from(name)))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for PropVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for PropVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PropVar({})", self.0)
    }
}

/// Mints fresh nominals `<prefix>1, <prefix>2, ...`, skipping a caller
/// supplied avoid set. Used for oracle padding and for eigenvariables.
#[derive(Debug, Clone)]
pub struct NominalGen {
    prefix: String,
    counter: usize,
}

impl NominalGen {
    /// Panics unless `prefix` itself is a nominal identifier.
    pub fn new(prefix: &str) -> Self {
        assert!(
            is_nominal_ident(prefix),
            "prefix must be a nominal identifier"
        );
        NominalGen {
            prefix: prefix.to_string(),
            counter: 0,
        }
    }

    pub fn fresh(&mut self, avoid: &BTreeSet<Nominal>) -> Nominal {
        loop {
            self.counter += 1;
            let candidate = Nominal::new(format!("{}{}", self.prefix, self.counter));
            if !avoid.contains(&candidate) {
                return candidate;
            }
        }
    }
}

/// A hybrid-logic formula. Subformulas are shared behind `Arc`, so cloning a
/// formula or splitting off a subformula never copies the tree.
///
/// `Prop`, `Nom` and `Rel` are the elementary forms; everything else counts
/// towards [`Formula::degree`].
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Formula {
    Prop(PropVar),
    Nom(Nominal),
    /// `R(i,j)`: the world named `j` is accessible from the world named `i`.
    /// True or false independently of the world of evaluation.
    Rel(Nominal, Nominal),
    And(Arc<Formula>, Arc<Formula>),
    Or(Arc<Formula>, Arc<Formula>),
    Imp(Arc<Formula>, Arc<Formula>),
    Neg(Arc<Formula>),
    /// `@_i φ`: `φ` holds at the world named `i`.
    At(Nominal, Arc<Formula>),
    Box(Arc<Formula>),
    Dia(Arc<Formula>),
}

impl Formula {
    pub fn prop(name: impl AsRef<str>) -> Self {
        Formula::Prop(PropVar::new(name))
    }

    pub fn nom(name: impl AsRef<str>) -> Self {
        Formula::Nom(Nominal::new(name))
    }

    pub fn rel(from: impl AsRef<str>, to: impl AsRef<str>) -> Self {
        Formula::Rel(Nominal::new(from), Nominal::new(to))
    }

    pub fn and(l: impl Into<Arc<Formula>>, r: impl Into<Arc<Formula>>) -> Self {
        Formula::And(l.into(), r.into())
    }

    pub fn or(l: impl Into<Arc<Formula>>, r: impl Into<Arc<Formula>>) -> Self {
        Formula::Or(l.into(), r.into())
    }

    pub fn imp(l: impl Into<Arc<Formula>>, r: impl Into<Arc<Formula>>) -> Self {
        Formula::Imp(l.into(), r.into())
    }

    pub fn neg(f: impl Into<Arc<Formula>>) -> Self {
        Formula::Neg(f.into())
    }

    pub fn at(n: &Nominal, f: impl Into<Arc<Formula>>) -> Self {
        Formula::At(n.clone(), f.into())
    }

    pub fn bx(f: impl Into<Arc<Formula>>) -> Self {
        Formula::Box(f.into())
    }

    pub fn dia(f: impl Into<Arc<Formula>>) -> Self {
        Formula::Dia(f.into())
    }

    /// Elementary formulas are exactly `p`, `i` and `R(i,j)`.
    pub fn is_elementary(&self) -> bool {
        matches!(self, Formula::Prop(_) | Formula::Nom(_) | Formula::Rel(..))
    }

    /// Number of connectives. Zero exactly on elementary formulas, and every
    /// immediate subformula has strictly smaller degree.
    pub fn degree(&self) -> usize {
        match self {
            Formula::Prop(_) | Formula::Nom(_) | Formula::Rel(..) => 0,
            Formula::Neg(f) | Formula::At(_, f) | Formula::Box(f) | Formula::Dia(f) => {
                1 + f.degree()
            }
            Formula::And(l, r) | Formula::Or(l, r) | Formula::Imp(l, r) => {
                1 + l.degree() + r.degree()
            }
        }
    }

    /// All nominals occurring in the formula, in `Nom`, `Rel` and `@`
    /// positions.
    pub fn nominals(&self) -> BTreeSet<Nominal> {
        let mut out = BTreeSet::new();
        self.collect_nominals(&mut out);
        out
    }

    fn collect_nominals(&self, out: &mut BTreeSet<Nominal>) {
        match self {
            Formula::Prop(_) => {}
            Formula::Nom(i) => {
                out.insert(i.clone());
            }
            Formula::Rel(i, j) => {
                out.insert(i.clone());
                out.insert(j.clone());
            }
            Formula::Neg(f) | Formula::Box(f) | Formula::Dia(f) => f.collect_nominals(out),
            Formula::At(i, f) => {
                out.insert(i.clone());
                f.collect_nominals(out);
            }
            Formula::And(l, r) | Formula::Or(l, r) | Formula::Imp(l, r) => {
                l.collect_nominals(out);
                r.collect_nominals(out);
            }
        }
    }

    /// All propositional variables occurring in the formula.
    pub fn props(&self) -> BTreeSet<PropVar> {
        let mut out = BTreeSet::new();
        self.collect_props(&mut out);
        out
    }

    fn collect_props(&self, out: &mut BTreeSet<PropVar>) {
        match self {
            Formula::Prop(p) => {
                out.insert(p.clone());
            }
            Formula::Nom(_) | Formula::Rel(..) => {}
            Formula::Neg(f) | Formula::At(_, f) | Formula::Box(f) | Formula::Dia(f) => {
                f.collect_props(out)
            }
            Formula::And(l, r) | Formula::Or(l, r) | Formula::Imp(l, r) => {
                l.collect_props(out);
                r.collect_props(out);
            }
        }
    }

    /// Does nominal `n` occur anywhere in the formula?
    pub fn mentions_nominal(&self, n: &Nominal) -> bool {
        match self {
            Formula::Prop(_) => false,
            Formula::Nom(i) => i == n,
            Formula::Rel(i, j) => i == n || j == n,
            Formula::Neg(f) | Formula::Box(f) | Formula::Dia(f) => f.mentions_nominal(n),
            Formula::At(i, f) => i == n || f.mentions_nominal(n),
            Formula::And(l, r) | Formula::Or(l, r) | Formula::Imp(l, r) => {
                l.mentions_nominal(n) || r.mentions_nominal(n)
            }
        }
    }

    // Precedence levels for printing: -> is 0, | is 1, & is 2, unary 3.
    fn fmt_prec(&self, f: &mut fmt::Formatter<'_>, ctx: u8) -> fmt::Result {
        let prec = match self {
            Formula::Imp(..) => 0,
            Formula::Or(..) => 1,
            Formula::And(..) => 2,
            _ => 3,
        };
        let parens = prec < ctx;
        if parens {
            f.write_str("(")?;
        }
        match self {
            Formula::Prop(p) => write!(f, "{p}")?,
            Formula::Nom(i) => write!(f, "{i}")?,
            Formula::Rel(i, j) => write!(f, "R({i},{j})")?,
            Formula::And(l, r) => {
                l.fmt_prec(f, 2)?;
                f.write_str(" & ")?;
                r.fmt_prec(f, 3)?;
            }
            Formula::Or(l, r) => {
                l.fmt_prec(f, 1)?;
                f.write_str(" | ")?;
                r.fmt_prec(f, 2)?;
            }
            Formula::Imp(l, r) => {
                l.fmt_prec(f, 1)?;
                f.write_str(" -> ")?;
                // A conjunction or disjunction to the right of an arrow is
                // printed with explicit parentheses; mixed ->/& precedence
                // is where readers stumble.
                match **r {
                    Formula::And(..) | Formula::Or(..) => {
                        f.write_str("(")?;
                        r.fmt_prec(f, 0)?;
                        f.write_str(")")?;
                    }
                    _ => r.fmt_prec(f, 0)?,
                }
            }
            Formula::Neg(x) => {
                f.write_str("~")?;
                x.fmt_prec(f, 3)?;
            }
            Formula::At(i, x) => {
                write!(f, "@{i} ")?;
                x.fmt_prec(f, 3)?;
            }
            Formula::Box(x) => {
                f.write_str("[]")?;
                x.fmt_prec(f, 3)?;
            }
            Formula::Dia(x) => {
                f.write_str("<>")?;
                x.fmt_prec(f, 3)?;
            }
        }
        if parens {
            f.write_str(")")?;
        }
        Ok(())
    }
}

impl fmt::Display for Formula {
    /// Renders the formula in the surface grammar; the output reparses to a
    /// structurally equal formula.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_prec(f, 0)
    }
}

impl Serialize for Nominal {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.0)
    }
}

impl<'de> Deserialize<'de> for Nominal {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        Nominal::try_new(&s)
            .ok_or_else(|| D::Error::custom(format!("{s:?} is not a nominal identifier")))
    }
}

impl Serialize for PropVar {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.0)
    }
}

impl<'de> Deserialize<'de> for PropVar {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        PropVar::try_new(&s)
            .ok_or_else(|| D::Error::custom(format!("{s:?} is not a propositional identifier")))
    }
}

/// Formulas serialize as their surface-syntax rendering and deserialize via
/// [`parse`], so JSON interchange uses the same grammar as the CLI.
impl Serialize for Formula {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Formula {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        parse(&s).map_err(D::Error::custom)
    }
}
