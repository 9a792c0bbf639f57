//! Propositional formulas over an interned alphabet.

use std::collections::HashMap;
use std::fmt;

use crate::bits::{BitSet, StateSet};
use crate::error::{Error, Limits, Result};

/// An ordered alphabet of distinct variable names.
///
/// Positions are assigned on insertion and never change.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct VarTable {
    names: Vec<String>,
    index: HashMap<String, usize>,
}

impl VarTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_names<I, S>(names: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut table = VarTable::new();
        for name in names {
            let name = name.into();
            if table.contains(&name) {
                return Err(Error::Validation(format!("duplicate variable `{name}`")));
            }
            table.intern(name)?;
        }
        Ok(table)
    }

    /// Returns the position of `name`, adding it if absent.
    pub fn intern(&mut self, name: impl Into<String>) -> Result<usize> {
        let name = name.into();
        if !is_identifier(&name) {
            return Err(Error::Validation(format!(
                "`{name}` is not a valid identifier"
            )));
        }
        if let Some(&i) = self.index.get(&name) {
            return Ok(i);
        }
        let i = self.names.len();
        self.index.insert(name.clone(), i);
        self.names.push(name);
        Ok(i)
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn position(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn contains(&self, name: &str) -> bool {
        self.index.contains_key(name)
    }

    pub fn name(&self, pos: usize) -> &str {
        &self.names[pos]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    /// The set of all positions.
    pub fn full(&self) -> StateSet {
        BitSet::full(self.len())
    }

    /// Fails unless every member of `set` is a position of this table.
    pub fn check(&self, set: &StateSet) -> Result<()> {
        if set.bound() > self.len() {
            return Err(Error::Usage(format!(
                "set mentions position {} outside an alphabet of {} variables",
                set.bound() - 1,
                self.len()
            )));
        }
        Ok(())
    }

    /// Builds a set from variable names.
    pub fn set_of<S: AsRef<str>>(&self, names: &[S]) -> Result<StateSet> {
        names
            .iter()
            .map(|n| {
                let n = n.as_ref();
                self.position(n)
                    .ok_or_else(|| Error::Usage(format!("unknown variable `{n}`")))
            })
            .collect()
    }

    /// Every subset of the alphabet, in canonical order.
    pub fn all_states(&self, limits: &Limits) -> Result<impl Iterator<Item = StateSet>> {
        limits.check_vars("state enumeration", self.len())?;
        let n = self.len();
        Ok((0u64..(1u64 << n)).map(move |c| BitSet::from_code(c, n)))
    }

    /// `{a,b}` notation.
    pub fn show_set(&self, set: &StateSet) -> String {
        let names: Vec<&str> = set.iter().map(|i| self.name(i)).collect();
        format!("{{{}}}", names.join(","))
    }

    /// Digit notation: one `0`/`1` per variable in declaration order.
    pub fn show_digits(&self, set: &StateSet) -> String {
        (0..self.len())
            .map(|i| if set.contains(i) { '1' } else { '0' })
            .collect()
    }

    /// Parses either digit notation (`0110`) or set notation (`{a,b}`).
    pub fn parse_state(&self, text: &str) -> Result<StateSet> {
        let t = text.trim();
        if t.starts_with('{') {
            let inner = t
                .strip_prefix('{')
                .and_then(|s| s.strip_suffix('}'))
                .ok_or_else(|| Error::parse(1, 0, format!("unterminated set `{t}`")))?;
            let mut set = StateSet::new();
            for (i, name) in split_list(inner).into_iter().enumerate() {
                let pos = self
                    .position(name)
                    .ok_or_else(|| Error::parse(1, i, format!("unknown variable `{name}`")))?;
                set.insert(pos);
            }
            return Ok(set);
        }
        if t.len() != self.len() || !t.bytes().all(|b| b == b'0' || b == b'1') {
            return Err(Error::parse(
                1,
                0,
                format!("`{t}` is not a {}-digit state or a set literal", self.len()),
            ));
        }
        Ok(t.bytes()
            .enumerate()
            .filter(|(_, b)| *b == b'1')
            .map(|(i, _)| i)
            .collect())
    }
}

pub(crate) fn split_list(inner: &str) -> Vec<&str> {
    inner
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .collect()
}

pub fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// A propositional formula whose variables are positions in a [`VarTable`].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    Const(bool),
    Var(usize),
    Not(Box<Formula>),
    And(Vec<Formula>),
    Or(Vec<Formula>),
}

impl Formula {
    pub const TRUE: Formula = Formula::Const(true);
    pub const FALSE: Formula = Formula::Const(false);

    pub fn var(pos: usize) -> Formula {
        Formula::Var(pos)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn and(parts: Vec<Formula>) -> Formula {
        Formula::And(parts)
    }

    pub fn or(parts: Vec<Formula>) -> Formula {
        Formula::Or(parts)
    }

    /// Truth value with the members of `w` set to 1 and every other variable to 0.
    pub fn eval(&self, w: &StateSet) -> bool {
        match self {
            Formula::Const(b) => *b,
            Formula::Var(i) => w.contains(*i),
            Formula::Not(f) => !f.eval(w),
            Formula::And(fs) => fs.iter().all(|f| f.eval(w)),
            Formula::Or(fs) => fs.iter().any(|f| f.eval(w)),
        }
    }

    /// Like [`Formula::eval`], but checks that both sides fit `table`.
    pub fn eval_in(&self, table: &VarTable, w: &StateSet) -> Result<bool> {
        table.check(w)?;
        self.check(table)?;
        Ok(self.eval(w))
    }

    /// Fails if a variable position falls outside `table`.
    pub fn check(&self, table: &VarTable) -> Result<()> {
        let support = self.support();
        if support.bound() > table.len() {
            return Err(Error::Usage(format!(
                "formula mentions position {} outside an alphabet of {} variables",
                support.bound() - 1,
                table.len()
            )));
        }
        Ok(())
    }

    /// Positions of the variables that occur in the formula.
    pub fn support(&self) -> BitSet {
        let mut out = BitSet::new();
        self.collect_support(&mut out);
        out
    }

    fn collect_support(&self, out: &mut BitSet) {
        match self {
            Formula::Const(_) => {}
            Formula::Var(i) => {
                out.insert(*i);
            }
            Formula::Not(f) => f.collect_support(out),
            Formula::And(fs) | Formula::Or(fs) => fs.iter().for_each(|f| f.collect_support(out)),
        }
    }

    /// Renames variable positions.
    pub fn remap(&self, map: &impl Fn(usize) -> usize) -> Formula {
        match self {
            Formula::Const(b) => Formula::Const(*b),
            Formula::Var(i) => Formula::Var(map(*i)),
            Formula::Not(f) => Formula::not(f.remap(map)),
            Formula::And(fs) => Formula::And(fs.iter().map(|f| f.remap(map)).collect()),
            Formula::Or(fs) => Formula::Or(fs.iter().map(|f| f.remap(map)).collect()),
        }
    }

    /// Replaces the variables for which `value` answers with constants, then folds.
    pub fn substitute(&self, value: &impl Fn(usize) -> Option<bool>) -> Formula {
        let replaced = self.replace(value);
        replaced.simplify()
    }

    fn replace(&self, value: &impl Fn(usize) -> Option<bool>) -> Formula {
        match self {
            Formula::Const(b) => Formula::Const(*b),
            Formula::Var(i) => value(*i).map_or(Formula::Var(*i), Formula::Const),
            Formula::Not(f) => Formula::not(f.replace(value)),
            Formula::And(fs) => Formula::And(fs.iter().map(|f| f.replace(value)).collect()),
            Formula::Or(fs) => Formula::Or(fs.iter().map(|f| f.replace(value)).collect()),
        }
    }

    /// Constant folding, double-negation removal and flattening of nested
    /// conjunctions and disjunctions. The truth table is unchanged.
    pub fn simplify(&self) -> Formula {
        match self {
            Formula::Const(_) | Formula::Var(_) => self.clone(),
            Formula::Not(f) => match f.simplify() {
                Formula::Const(b) => Formula::Const(!b),
                Formula::Not(inner) => *inner,
                other => Formula::not(other),
            },
            Formula::And(fs) => fold_nary(fs, true),
            Formula::Or(fs) => fold_nary(fs, false),
        }
    }

    /// Truth-table equality over the union of both supports.
    pub fn equivalent(&self, other: &Formula, limits: &Limits) -> Result<bool> {
        let support = self.support().union(&other.support());
        limits.check_vars("truth-table comparison", support.len())?;
        let same = support.subsets().all(|w| self.eval(&w) == other.eval(&w));
        Ok(same)
    }

    pub fn display<'a>(&'a self, table: &'a VarTable) -> FormulaDisplay<'a> {
        FormulaDisplay {
            formula: self,
            table,
        }
    }
}

/// Folds an n-ary connective. `conj` selects And (identity 1) or Or (identity 0).
fn fold_nary(parts: &[Formula], conj: bool) -> Formula {
    let mut out = Vec::with_capacity(parts.len());
    for part in parts {
        match part.simplify() {
            Formula::Const(b) if b == conj => {}
            Formula::Const(b) => return Formula::Const(b),
            Formula::And(inner) if conj => out.extend(inner),
            Formula::Or(inner) if !conj => out.extend(inner),
            other => out.push(other),
        }
    }
    match out.len() {
        0 => Formula::Const(conj),
        1 => out.pop().unwrap(),
        _ if conj => Formula::And(out),
        _ => Formula::Or(out),
    }
}

/// Canonical text form: `!`, `&`, `|`, with parentheses only where needed.
pub struct FormulaDisplay<'a> {
    formula: &'a Formula,
    table: &'a VarTable,
}

impl FormulaDisplay<'_> {
    fn write(&self, f: &mut fmt::Formatter<'_>, node: &Formula, parent: u8) -> fmt::Result {
        // Binding strength: Or = 1, And = 2, Not/atoms = 3.
        match node {
            Formula::Const(b) => write!(f, "{}", u8::from(*b)),
            Formula::Var(i) => match self.table.names().get(*i) {
                Some(name) => write!(f, "{name}"),
                None => write!(f, "?{i}"),
            },
            Formula::Not(inner) => {
                write!(f, "!")?;
                self.write(f, inner, 3)
            }
            Formula::And(parts) | Formula::Or(parts) => {
                let (own, sep, empty) = match node {
                    Formula::And(_) => (2, " & ", "1"),
                    _ => (1, " | ", "0"),
                };
                match parts.len() {
                    0 => return write!(f, "{empty}"),
                    1 => return self.write(f, &parts[0], parent),
                    _ => {}
                }
                let wrap = parent >= own;
                if wrap {
                    write!(f, "(")?;
                }
                for (k, p) in parts.iter().enumerate() {
                    if k > 0 {
                        write!(f, "{sep}")?;
                    }
                    self.write(f, p, own)?;
                }
                if wrap {
                    write!(f, ")")?;
                }
                Ok(())
            }
        }
    }
}

impl fmt::Display for FormulaDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write(f, self.formula, 0)
    }
}

/// Parses `text` against `table`.
///
/// Grammar: identifiers, `0`, `1`, `!`, `&`, `|` and parentheses, with `!`
/// binding tightest and `|` loosest. Chains of the same connective become a
/// single n-ary node.
pub fn parse_formula(text: &str, table: &VarTable) -> Result<Formula> {
    parse_formula_at(text, table, 1, 0)
}

/// [`parse_formula`] with errors reported at `line` and shifted by `base` bytes.
pub(crate) fn parse_formula_at(
    text: &str,
    table: &VarTable,
    line: usize,
    base: usize,
) -> Result<Formula> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
        table,
        line,
        base,
    };
    let f = p.disjunction()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(f)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    table: &'a VarTable,
    line: usize,
    base: usize,
}

impl Parser<'_> {
    fn error(&self, message: impl Into<String>) -> Error {
        Error::parse(self.line, self.base + self.pos, message)
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn eat(&mut self, c: u8) -> bool {
        self.skip_ws();
        if self.src.get(self.pos) == Some(&c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn disjunction(&mut self) -> Result<Formula> {
        let mut parts = vec![self.conjunction()?];
        while self.eat(b'|') {
            parts.push(self.conjunction()?);
        }
        Ok(if parts.len() == 1 {
            parts.pop().unwrap()
        } else {
            Formula::Or(parts)
        })
    }

    fn conjunction(&mut self) -> Result<Formula> {
        let mut parts = vec![self.unary()?];
        while self.eat(b'&') {
            parts.push(self.unary()?);
        }
        Ok(if parts.len() == 1 {
            parts.pop().unwrap()
        } else {
            Formula::And(parts)
        })
    }

    fn unary(&mut self) -> Result<Formula> {
        if self.eat(b'!') {
            return Ok(Formula::not(self.unary()?));
        }
        self.atom()
    }

    fn atom(&mut self) -> Result<Formula> {
        self.skip_ws();
        let start = self.pos;
        match self.src.get(self.pos) {
            None => Err(self.error("unexpected end of formula")),
            Some(b'(') => {
                self.pos += 1;
                let f = self.disjunction()?;
                if !self.eat(b')') {
                    return Err(self.error("expected `)`"));
                }
                Ok(f)
            }
            Some(c) if c.is_ascii_alphanumeric() || *c == b'_' => {
                while self
                    .src
                    .get(self.pos)
                    .is_some_and(|c| c.is_ascii_alphanumeric() || *c == b'_')
                {
                    self.pos += 1;
                }
                let word = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                match word {
                    "0" => Ok(Formula::FALSE),
                    "1" => Ok(Formula::TRUE),
                    _ if is_identifier(word) => match self.table.position(word) {
                        Some(i) => Ok(Formula::Var(i)),
                        None => {
                            self.pos = start;
                            Err(self.error(format!("unknown identifier `{word}`")))
                        }
                    },
                    _ => {
                        self.pos = start;
                        Err(self.error(format!("invalid token `{word}`")))
                    }
                }
            }
            Some(&c) => Err(self.error(format!("unexpected character `{}`", c as char))),
        }
    }
}

/// `{W ⊆ V | φ(W)}` by exhaustive enumeration, in canonical order.
pub fn satisfying_sets(
    formula: &Formula,
    table: &VarTable,
    limits: &Limits,
) -> Result<Vec<StateSet>> {
    formula.check(table)?;
    Ok(table
        .all_states(limits)?
        .filter(|w| formula.eval(w))
        .collect())
}
