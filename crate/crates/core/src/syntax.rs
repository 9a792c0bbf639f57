//! Line-oriented text formats for every model kind. `#` starts a comment.
//!
//! ```text
//! # network or control network
//! var x, y
//! control u
//! freeze y
//! x' = !x & y | u
//! y' = x & !y
//!
//! # control instance: a network block plus
//! start {01}
//! target {11}
//! mode syn
//!
//! # P system
//! alphabet a, b
//! r1: {a,b} -> {a} | 1
//! r2: {a} -> {} | !b
//! quasimode maxpar        # or `advise {r1, r2}` lines
//!
//! # reaction system
//! species x, y, z, w
//! a1: reactants {x,y} inhibitors {z} products {w}
//! ```

use std::collections::BTreeSet;

use crate::bcn::{freeze_control_names, freeze_formula, BooleanControlNetwork};
use crate::bits::StateSet;
use crate::bn::{BooleanMode, BooleanNetwork};
use crate::boolp::{BooleanPSystem, Quasimode, Rule};
use crate::cofase::CoFaSeInstance;
use crate::error::{Error, Result};
use crate::formula::{is_identifier, parse_formula_at, split_list, Formula, VarTable};
use crate::translate::{Reaction, ReactionSystem};

/// Non-blank lines with comments removed: (line number, byte offset of the
/// content within the line, content).
fn lines(text: &str) -> impl Iterator<Item = (usize, usize, &str)> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let content = raw.split('#').next().unwrap_or("");
        let trimmed = content.trim_start();
        let offset = content.len() - trimmed.len();
        let trimmed = trimmed.trim_end();
        (!trimmed.is_empty()).then_some((i + 1, offset, trimmed))
    })
}

/// Splits `keyword rest` and returns `rest` with its offset.
fn keyword<'a>(line: &'a str, word: &str) -> Option<(&'a str, usize)> {
    let rest = line.strip_prefix(word)?;
    if !rest.is_empty() && !rest.starts_with(char::is_whitespace) {
        return None;
    }
    let trimmed = rest.trim_start();
    Some((trimmed, word.len() + rest.len() - trimmed.len()))
}

fn names(list: &str, line: usize, offset: usize) -> Result<Vec<String>> {
    let names = split_list(list);
    if names.is_empty() {
        return Err(Error::parse(line, offset, "expected a list of names"));
    }
    for n in &names {
        if !is_identifier(n) {
            return Err(Error::parse(
                line,
                offset,
                format!("`{n}` is not an identifier"),
            ));
        }
    }
    Ok(names.into_iter().map(String::from).collect())
}

fn at_line(line: usize, offset: usize) -> impl Fn(Error) -> Error {
    move |e| match e {
        Error::Parse { .. } | Error::Capacity { .. } => e,
        other => Error::parse(line, offset, other.to_string()),
    }
}

/// `{a,b}` against `table`.
fn parse_set(text: &str, table: &VarTable, line: usize, offset: usize) -> Result<StateSet> {
    let inner = text
        .trim()
        .strip_prefix('{')
        .and_then(|s| s.strip_suffix('}'))
        .ok_or_else(|| {
            Error::parse(
                line,
                offset,
                format!("expected a set literal, got `{text}`"),
            )
        })?;
    table
        .set_of(&split_list(inner))
        .map_err(at_line(line, offset))
}

/// Parses a network with optional `control` and `freeze` declarations.
///
/// `freeze x` declares `u_x0` and `u_x1` and rewrites the update of `x` to
/// `(f_x & !u_x0) | u_x1`.
pub fn parse_bcn(text: &str) -> Result<BooleanControlNetwork> {
    parse_bcn_lines(text, &mut |_, _, _| Ok(false))
}

/// Parses a network without controls.
pub fn parse_bn(text: &str) -> Result<BooleanNetwork> {
    let bcn = parse_bcn(text)?;
    if !bcn.u_table().is_empty() {
        return Err(Error::parse(
            1,
            0,
            "a plain network declares no controls; use the control network format",
        ));
    }
    BooleanNetwork::new(bcn.x_table().clone(), bcn.updates().to_vec())
}

/// `extra` consumes lines that are not part of the network block.
fn parse_bcn_lines(
    text: &str,
    extra: &mut dyn FnMut(usize, usize, &str) -> Result<bool>,
) -> Result<BooleanControlNetwork> {
    let mut x = VarTable::new();
    let mut u_names: Vec<(String, usize)> = Vec::new();
    let mut frozen: Vec<(String, usize, usize)> = Vec::new();
    let mut updates: Vec<(usize, usize, &str, &str)> = Vec::new();
    for (line, off, content) in lines(text) {
        if let Some((rest, k)) = keyword(content, "var") {
            for n in names(rest, line, off + k)? {
                x.intern(n).map_err(at_line(line, off + k))?;
            }
        } else if let Some((rest, k)) = keyword(content, "control") {
            for n in names(rest, line, off + k)? {
                u_names.push((n, line));
            }
        } else if let Some((rest, k)) = keyword(content, "freeze") {
            for n in names(rest, line, off + k)? {
                frozen.push((n, line, off + k));
            }
        } else if let Some((lhs, rhs)) = content.split_once('=') {
            let target = lhs.trim();
            let Some(var) = target.strip_suffix('\'') else {
                return Err(Error::parse(
                    line,
                    off,
                    format!("expected `x' = ...`, got `{target}`"),
                ));
            };
            let rhs_off = off + lhs.len() + 1;
            updates.push((line, rhs_off, var.trim(), rhs));
        } else if !extra(line, off, content)? {
            return Err(Error::parse(
                line,
                off,
                format!("unrecognized line `{content}`"),
            ));
        }
    }
    for (var, line, off) in &frozen {
        if !x.contains(var) {
            return Err(Error::parse(
                *line,
                *off,
                format!("cannot freeze unknown variable `{var}`"),
            ));
        }
        let (c0, c1) = freeze_control_names(var);
        u_names.push((c0, *line));
        u_names.push((c1, *line));
    }
    let mut u = VarTable::new();
    for (n, line) in &u_names {
        if x.contains(n) {
            return Err(Error::parse(
                *line,
                0,
                format!("`{n}` is both a variable and a control"),
            ));
        }
        u.intern(n.clone()).map_err(at_line(*line, 0))?;
    }
    let mut table = x.clone();
    for n in u.names() {
        table.intern(n.clone())?;
    }
    let mut slots: Vec<Option<Formula>> = vec![None; x.len()];
    for (line, off, var, rhs) in updates {
        let pos = x.position(var).ok_or_else(|| {
            Error::parse(line, off, format!("update for undeclared variable `{var}`"))
        })?;
        if slots[pos].is_some() {
            return Err(Error::parse(
                line,
                off,
                format!("second update for `{var}`"),
            ));
        }
        slots[pos] = Some(parse_formula_at(rhs, &table, line, off)?);
    }
    let mut formulas = Vec::with_capacity(x.len());
    for (i, slot) in slots.into_iter().enumerate() {
        match slot {
            Some(f) => formulas.push(f),
            None => {
                return Err(Error::parse(1, 0, format!("no update for `{}`", x.name(i))));
            }
        }
    }
    for (var, _, _) in &frozen {
        let (c0, c1) = freeze_control_names(var);
        let pos = x.position(var).expect("checked above");
        let (p0, p1) = (table.position(&c0).unwrap(), table.position(&c1).unwrap());
        let f = std::mem::replace(&mut formulas[pos], Formula::FALSE);
        formulas[pos] = freeze_formula(f, p0, p1);
    }
    BooleanControlNetwork::new(x, u, formulas)
}

/// Parses a control instance: a network block with `start`, `target` and an
/// optional `mode` line (default `syn`).
pub fn parse_cofase(text: &str) -> Result<CoFaSeInstance> {
    let mut start: Option<(usize, usize, String)> = None;
    let mut target: Option<(usize, usize, String)> = None;
    let mut mode: Option<(usize, usize, String)> = None;
    let bcn = parse_bcn_lines(text, &mut |line, off, content| {
        for (word, slot) in [
            ("start", &mut start),
            ("target", &mut target),
            ("mode", &mut mode),
        ] {
            if let Some((rest, k)) = keyword(content, word) {
                if slot.is_some() {
                    return Err(Error::parse(line, off, format!("second `{word}` line")));
                }
                *slot = Some((line, off + k, rest.to_string()));
                return Ok(true);
            }
        }
        Ok(false)
    })?;
    let x = bcn.x_table();
    let states = |slot: Option<(usize, usize, String)>, word: &str| -> Result<Vec<StateSet>> {
        let (line, off, rest) =
            slot.ok_or_else(|| Error::parse(1, 0, format!("missing `{word}` line")))?;
        let inner = rest
            .strip_prefix('{')
            .and_then(|s| s.strip_suffix('}'))
            .ok_or_else(|| Error::parse(line, off, "expected `{state, ...}`"))?;
        split_list(inner)
            .into_iter()
            .map(|s| x.parse_state(s).map_err(|e| relocate(e, line, off)))
            .collect()
    };
    let start = states(start, "start")?;
    let target = states(target, "target")?;
    let mode = match mode {
        Some((line, off, m)) => BooleanMode::parse(&m, x).map_err(|e| relocate(e, line, off))?,
        None => BooleanMode::synchronous(x),
    };
    CoFaSeInstance::new(bcn, start, target, mode)
}

fn relocate(e: Error, line: usize, off: usize) -> Error {
    match e {
        Error::Parse {
            offset, message, ..
        } => Error::Parse {
            line,
            offset: off + offset,
            message,
        },
        other => at_line(line, off)(other),
    }
}

/// Text form of a control instance.
pub fn cofase_to_text(inst: &CoFaSeInstance) -> String {
    let x = inst.bcn.x_table();
    let list = |v: &[StateSet]| {
        v.iter()
            .map(|s| x.show_digits(s))
            .collect::<Vec<_>>()
            .join(", ")
    };
    format!(
        "{}start {{{}}}\ntarget {{{}}}\nmode {}\n",
        inst.bcn.to_text(),
        list(&inst.start),
        list(&inst.target),
        inst.mode.show(x)
    )
}

/// A parsed P system file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SystemFile {
    pub system: BooleanPSystem,
    /// From a `quasimode` line or from `advise` lines.
    pub quasimode: Option<Quasimode>,
}

/// Parses `alphabet`, rule lines `id: {a} -> {b} | guard` (guard defaults to
/// `1`), and an optional quasimode.
pub fn parse_system(text: &str) -> Result<SystemFile> {
    let mut table = VarTable::new();
    let mut rule_lines = Vec::new();
    let mut quasimode: Option<Quasimode> = None;
    let mut advised: Vec<BTreeSet<String>> = Vec::new();
    let mut advise_line = None;
    for (line, off, content) in lines(text) {
        if let Some((rest, k)) = keyword(content, "alphabet") {
            for n in names(rest, line, off + k)? {
                table.intern(n).map_err(at_line(line, off + k))?;
            }
        } else if let Some((rest, k)) = keyword(content, "quasimode") {
            if quasimode.is_some() {
                return Err(Error::parse(line, off, "second `quasimode` line"));
            }
            quasimode = Some(parse_quasimode_at(rest, line, off + k)?);
        } else if let Some((rest, k)) = keyword(content, "advise") {
            let inner = rest
                .strip_prefix('{')
                .and_then(|s| s.strip_suffix('}'))
                .ok_or_else(|| Error::parse(line, off + k, "expected `advise {r1, r2}`"))?;
            advised.push(split_list(inner).into_iter().map(String::from).collect());
            advise_line.get_or_insert(line);
        } else {
            rule_lines.push((line, off, content));
        }
    }
    let rules = rule_lines
        .into_iter()
        .map(|(line, off, content)| parse_rule(content, &table, line, off))
        .collect::<Result<Vec<_>>>()?;
    if let Some(line) = advise_line {
        if quasimode.is_some() {
            return Err(Error::parse(
                line,
                0,
                "both `quasimode` and `advise` lines given",
            ));
        }
        quasimode = Some(Quasimode::explicit(advised));
    }
    let system = BooleanPSystem::new(table, rules)?;
    if let Some(q) = &quasimode {
        q.check(&system)?;
    }
    Ok(SystemFile { system, quasimode })
}

fn parse_rule(content: &str, table: &VarTable, line: usize, off: usize) -> Result<Rule> {
    let (id, body) = content.split_once(':').ok_or_else(|| {
        Error::parse(
            line,
            off,
            format!("expected `id: {{..}} -> {{..}} | guard`, got `{content}`"),
        )
    })?;
    let id = id.trim();
    if !is_identifier(id) {
        return Err(Error::parse(line, off, format!("`{id}` is not a rule id")));
    }
    let body_off = off + id.len() + 1;
    let (sets, guard) = match body.split_once('|') {
        Some((s, g)) => (s, Some((g, body_off + s.len() + 1))),
        None => (body, None),
    };
    let (lhs, rhs) = sets
        .split_once("->")
        .ok_or_else(|| Error::parse(line, body_off, "expected `->`"))?;
    let lhs_set = parse_set(lhs, table, line, body_off)?;
    let rhs_set = parse_set(rhs, table, line, body_off + lhs.len() + 2)?;
    let guard = match guard {
        Some((g, g_off)) => parse_formula_at(g, table, line, g_off)?,
        None => Formula::TRUE,
    };
    Ok(Rule::new(id, lhs_set, rhs_set, guard))
}

/// Text form of a system with an optional quasimode line.
pub fn system_to_text(system: &BooleanPSystem, quasimode: Option<&Quasimode>) -> String {
    let mut out = system.to_text();
    if let Some(q) = quasimode {
        out.push_str(&format!("quasimode {q}\n"));
    }
    out
}

/// Parses a quasimode expression: `maxpar`, `seq`, `async`, `powerset {r1,r2}`,
/// or an explicit family `{{r1,r2},{r3}}`, joined by `*` for dotted products.
pub fn parse_quasimode(text: &str) -> Result<Quasimode> {
    parse_quasimode_at(text, 1, 0)
}

fn parse_quasimode_at(text: &str, line: usize, base: usize) -> Result<Quasimode> {
    let mut terms = Vec::new();
    let mut depth = 0i32;
    let mut from = 0;
    for (i, c) in text.char_indices() {
        match c {
            '{' => depth += 1,
            '}' => depth -= 1,
            '*' if depth == 0 => {
                terms.push((from, &text[from..i]));
                from = i + 1;
            }
            _ => {}
        }
        if depth < 0 {
            return Err(Error::parse(line, base + i, "unbalanced `}`"));
        }
    }
    if depth != 0 {
        return Err(Error::parse(line, base + text.len(), "unbalanced `{`"));
    }
    terms.push((from, &text[from..]));
    let mut out: Option<Quasimode> = None;
    for (start, term) in terms {
        let q = parse_term(term, line, base + start)?;
        out = Some(match out {
            None => q,
            Some(acc) => acc.dotted(q),
        });
    }
    Ok(out.expect("at least one term"))
}

fn parse_term(term: &str, line: usize, off: usize) -> Result<Quasimode> {
    let t = term.trim();
    let ids = |s: &str| -> Result<BTreeSet<String>> {
        let inner = s
            .trim()
            .strip_prefix('{')
            .and_then(|s| s.strip_suffix('}'))
            .ok_or_else(|| Error::parse(line, off, format!("expected `{{ids}}`, got `{s}`")))?;
        let set: BTreeSet<String> = split_list(inner).into_iter().map(String::from).collect();
        match set.iter().find(|id| !is_identifier(id)) {
            Some(bad) => Err(Error::parse(line, off, format!("`{bad}` is not a rule id"))),
            None => Ok(set),
        }
    };
    match t {
        "maxpar" => return Ok(Quasimode::MaxPar),
        "seq" => return Ok(Quasimode::Seq),
        "async" => return Ok(Quasimode::Async),
        _ => {}
    }
    if let Some((rest, _)) = keyword(t, "powerset") {
        return Ok(Quasimode::Powerset(ids(rest)?));
    }
    let inner = t
        .strip_prefix('{')
        .and_then(|s| s.strip_suffix('}'))
        .ok_or_else(|| Error::parse(line, off, format!("unknown quasimode `{t}`")))?;
    let mut family = Vec::new();
    let mut depth = 0;
    let mut from = None;
    for (i, c) in inner.char_indices() {
        match c {
            '{' => {
                depth += 1;
                from = Some(i);
            }
            '}' => {
                depth -= 1;
                let f = from
                    .take()
                    .ok_or_else(|| Error::parse(line, off, "nested sets"))?;
                family.push(ids(&inner[f..=i])?);
            }
            ',' | ' ' | '\t' if depth == 0 => {}
            _ if depth == 0 => {
                return Err(Error::parse(
                    line,
                    off,
                    format!("unexpected `{c}` in rule-set family"),
                ));
            }
            _ => {}
        }
        if depth > 1 {
            return Err(Error::parse(line, off, "nested sets"));
        }
    }
    Ok(Quasimode::explicit(family))
}

/// Parses a reaction system. Without a `species` line the species are taken
/// in order of first appearance.
pub fn parse_rs(text: &str) -> Result<ReactionSystem> {
    let mut declared: Option<VarTable> = None;
    let mut raw = Vec::new();
    for (line, off, content) in lines(text) {
        if let Some((rest, k)) = keyword(content, "species") {
            let t = declared.get_or_insert_with(VarTable::new);
            for n in names(rest, line, off + k)? {
                t.intern(n).map_err(at_line(line, off + k))?;
            }
            continue;
        }
        let (id, body) = content.split_once(':').ok_or_else(|| {
            Error::parse(
                line,
                off,
                format!("expected `id: reactants {{..}} ...`, got `{content}`"),
            )
        })?;
        let id = id.trim();
        if !is_identifier(id) {
            return Err(Error::parse(
                line,
                off,
                format!("`{id}` is not a reaction id"),
            ));
        }
        let mut parts: [Option<Vec<String>>; 3] = [None, None, None];
        let mut rest = body.trim();
        while !rest.is_empty() {
            let (word, after) = rest
                .split_once(char::is_whitespace)
                .ok_or_else(|| Error::parse(line, off, format!("dangling `{rest}`")))?;
            let slot = match word {
                "reactants" => 0,
                "inhibitors" => 1,
                "products" => 2,
                other => return Err(Error::parse(line, off, format!("unknown field `{other}`"))),
            };
            let after = after.trim_start();
            let close = after
                .find('}')
                .filter(|_| after.starts_with('{'))
                .ok_or_else(|| Error::parse(line, off, format!("expected a set after `{word}`")))?;
            let items = split_list(&after[1..close]);
            for s in &items {
                if !is_identifier(s) {
                    return Err(Error::parse(line, off, format!("`{s}` is not a species")));
                }
            }
            if parts[slot]
                .replace(items.into_iter().map(String::from).collect())
                .is_some()
            {
                return Err(Error::parse(line, off, format!("second `{word}` field")));
            }
            rest = after[close + 1..].trim_start();
        }
        if parts[0].is_none() || parts[2].is_none() {
            return Err(Error::parse(
                line,
                off,
                "a reaction needs reactants and products",
            ));
        }
        raw.push((line, off, id.to_string(), parts));
    }
    let inferred = declared.is_none();
    let mut species = declared.unwrap_or_default();
    let mut reactions = Vec::new();
    for (line, off, id, parts) in raw {
        let mut sets = Vec::new();
        for names in parts {
            let names = names.unwrap_or_default();
            if inferred {
                for n in &names {
                    if !species.contains(n) {
                        species.intern(n.clone())?;
                    }
                }
            }
            sets.push(species.set_of(&names).map_err(at_line(line, off))?);
        }
        let [reactants, inhibitors, products]: [StateSet; 3] =
            sets.try_into().expect("three fields");
        reactions.push(Reaction {
            id,
            reactants,
            inhibitors,
            products,
        });
    }
    ReactionSystem::new(species, reactions, false)
}
