//! Text formats: terminologies, signatures and ABoxes in, concepts and
//! reports out.
//!
//! Terminologies and ABoxes use a KRSS-style s-expression dialect; signatures
//! are line based.

use std::fmt;
use std::fmt::Write as _;

use crate::diff::{Direction, Inclusion, Mode, ModeReport, WitnessKey, WitnessReport};
use crate::error::{Error, Result};
use crate::model::{Abox, Assertion, Axiom, Concept, ConceptName, RoleName, Signature, Terminology};

/// A 1-based position in the input.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub struct SourceLocation {
    pub line: usize,
    pub column: usize,
}

impl fmt::Display for SourceLocation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Debug)]
enum Sexp {
    Sym(String, SourceLocation),
    List(Vec<Sexp>, SourceLocation),
}

impl Sexp {
    fn loc(&self) -> SourceLocation {
        match self {
            Sexp::Sym(_, l) | Sexp::List(_, l) => *l,
        }
    }
}

fn syntax(loc: SourceLocation, msg: impl Into<String>) -> Error {
    Error::Syntax { loc, msg: msg.into() }
}

fn is_name_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || matches!(c, '_' | '.' | ':' | '-')
}

/// Validates a name token.
fn check_name(tok: &str, loc: SourceLocation) -> Result<()> {
    if tok.starts_with('@') {
        return Err(Error::ReservedName { loc, name: tok.to_string() });
    }
    if let Some((i, c)) = tok.char_indices().find(|&(_, c)| !is_name_char(c)) {
        let col = loc.column + tok[..i].chars().count();
        return Err(syntax(SourceLocation { line: loc.line, column: col }, format!("invalid character {c:?} in name")));
    }
    Ok(())
}

/// Reads every top-level s-expression.
fn read_all(text: &str) -> Result<Vec<Sexp>> {
    let mut stack: Vec<(Vec<Sexp>, SourceLocation)> = Vec::new();
    let mut top = Vec::new();
    let mut chars = text.chars().peekable();
    let (mut line, mut col) = (1usize, 1usize);
    while let Some(&c) = chars.peek() {
        let loc = SourceLocation { line, column: col };
        match c {
            '\n' => {
                chars.next();
                line += 1;
                col = 1;
            }
            c if c.is_whitespace() => {
                chars.next();
                col += 1;
            }
            ';' => {
                while chars.peek().is_some_and(|&c| c != '\n') {
                    chars.next();
                }
            }
            '(' => {
                chars.next();
                col += 1;
                stack.push((Vec::new(), loc));
            }
            ')' => {
                chars.next();
                col += 1;
                let (items, open) = stack.pop().ok_or_else(|| syntax(loc, "unbalanced ')'"))?;
                let list = Sexp::List(items, open);
                match stack.last_mut() {
                    Some((parent, _)) => parent.push(list),
                    None => top.push(list),
                }
            }
            _ => {
                let mut tok = String::new();
                while let Some(&c) = chars.peek() {
                    if c.is_whitespace() || c == '(' || c == ')' || c == ';' {
                        break;
                    }
                    tok.push(c);
                    chars.next();
                    col += 1;
                }
                let sym = Sexp::Sym(tok, loc);
                match stack.last_mut() {
                    Some((parent, _)) => parent.push(sym),
                    None => return Err(syntax(loc, "expected '('")),
                }
            }
        }
    }
    if let Some((_, open)) = stack.pop() {
        return Err(syntax(open, "unclosed '('"));
    }
    Ok(top)
}

fn name_of(s: &Sexp) -> Result<String> {
    match s {
        Sexp::Sym(tok, loc) => {
            check_name(tok, *loc)?;
            Ok(tok.clone())
        }
        Sexp::List(_, loc) => Err(syntax(*loc, "expected a name")),
    }
}

fn head(items: &[Sexp], loc: SourceLocation) -> Result<&str> {
    match items.first() {
        Some(Sexp::Sym(h, _)) => Ok(h),
        Some(other) => Err(syntax(other.loc(), "expected a keyword")),
        None => Err(syntax(loc, "empty form")),
    }
}

fn arity(items: &[Sexp], n: usize, loc: SourceLocation, form: &str) -> Result<()> {
    if items.len() != n {
        return Err(syntax(loc, format!("`{form}` expects {} argument(s)", n - 1)));
    }
    Ok(())
}

fn concept_of(s: &Sexp) -> Result<Concept> {
    match s {
        Sexp::Sym(tok, loc) => {
            if tok == "top" {
                Ok(Concept::Top)
            } else {
                check_name(tok, *loc)?;
                Ok(Concept::atom(tok.as_str()))
            }
        }
        Sexp::List(items, loc) => {
            let loc = *loc;
            match head(items, loc)? {
                "and" => {
                    if items.len() < 2 {
                        return Err(syntax(loc, "`and` expects at least one concept"));
                    }
                    Ok(Concept::conj(items[1..].iter().map(concept_of).collect::<Result<Vec<_>>>()?))
                }
                "some" => {
                    arity(items, 3, loc, "some")?;
                    Ok(Concept::exists(name_of(&items[1])?, concept_of(&items[2])?))
                }
                "ran" => {
                    arity(items, 2, loc, "ran")?;
                    Ok(Concept::ran(name_of(&items[1])?))
                }
                "some-all" => {
                    arity(items, 3, loc, "some-all")?;
                    let roles = match &items[1] {
                        Sexp::List(rs, _) if !rs.is_empty() => rs.iter().map(name_of).collect::<Result<Vec<_>>>()?,
                        other => return Err(syntax(other.loc(), "expected a non-empty role list")),
                    };
                    Ok(Concept::exists_roles(roles, concept_of(&items[2])?))
                }
                "some-u" => {
                    arity(items, 2, loc, "some-u")?;
                    Ok(Concept::exists_universal(concept_of(&items[1])?))
                }
                other => Err(syntax(loc, format!("unknown concept constructor `{other}`"))),
            }
        }
    }
}

/// Parses a single concept expression, including the extended constructors.
pub fn parse_concept(text: &str) -> Result<Concept> {
    let forms = read_concept_forms(text)?;
    match forms.as_slice() {
        [one] => concept_of(one),
        [] => Err(syntax(SourceLocation { line: 1, column: 1 }, "expected a concept")),
        [_, extra, ..] => Err(syntax(extra.loc(), "trailing input after concept")),
    }
}

/// Like `read_all` but also accepts a bare symbol at top level.
fn read_concept_forms(text: &str) -> Result<Vec<Sexp>> {
    let trimmed = text.trim();
    if !trimmed.is_empty() && !trimmed.starts_with('(') && !trimmed.contains(char::is_whitespace) {
        let offset = text.len() - text.trim_start().len();
        let before = &text[..offset];
        let line = 1 + before.matches('\n').count();
        let column = 1 + before.rsplit('\n').next().map_or(0, |s| s.chars().count());
        return Ok(vec![Sexp::Sym(trimmed.to_string(), SourceLocation { line, column })]);
    }
    read_all(text)
}

fn rhs_concept(s: &Sexp) -> Result<Concept> {
    let c = concept_of(s)?;
    if !c.is_el() {
        return Err(syntax(s.loc(), "only EL constructors are allowed in axioms"));
    }
    if c == Concept::Top {
        return Err(Error::InvalidAxiom(format!("{}: right-hand side is top", s.loc())));
    }
    Ok(c)
}

/// Parses a terminology file.
pub fn parse_terminology(text: &str) -> Result<Terminology> {
    let mut axioms = Vec::new();
    let mut defined = std::collections::BTreeSet::new();
    for form in read_all(text)? {
        let (items, loc) = match &form {
            Sexp::List(items, loc) => (items, *loc),
            Sexp::Sym(_, loc) => return Err(syntax(*loc, "expected '('")),
        };
        let kw = head(items, loc)?;
        let axiom = match kw {
            "define-concept" | "define-primitive-concept" => {
                arity(items, 3, loc, kw)?;
                let a = ConceptName::new(name_of(&items[1])?);
                if !defined.insert(a.clone()) {
                    return Err(Error::DuplicateDefinition(a));
                }
                let c = rhs_concept(&items[2])?;
                if kw == "define-concept" {
                    Axiom::EqAtom(a, c)
                } else {
                    Axiom::SubAtom(a, c)
                }
            }
            "define-primitive-role" => {
                let r = name_of(items.get(1).ok_or_else(|| syntax(loc, "missing role name"))?)?;
                match items.len() {
                    2 => continue,
                    4 => {
                        match &items[2] {
                            Sexp::Sym(k, _) if k == ":parent" => {}
                            other => return Err(syntax(other.loc(), "expected `:parent`")),
                        }
                        Axiom::RoleIncl(RoleName::new(r), RoleName::new(name_of(&items[3])?))
                    }
                    _ => return Err(syntax(loc, "expected `(define-primitive-role NAME [:parent NAME])`")),
                }
            }
            "range" | "domain" => {
                arity(items, 3, loc, kw)?;
                let r = RoleName::new(name_of(&items[1])?);
                let c = rhs_concept(&items[2])?;
                if kw == "range" {
                    Axiom::RangeRestr(r, c)
                } else {
                    Axiom::DomainRestr(r, c)
                }
            }
            other => return Err(syntax(loc, format!("unknown form `{other}`"))),
        };
        axioms.push(axiom);
    }
    Terminology::new(axioms)
}

/// Parses a signature file of `concept NAME` / `role NAME` lines.
pub fn parse_signature(text: &str) -> Result<Signature> {
    let mut concepts = Vec::new();
    let mut roles = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("");
        let mut words = line.split_whitespace();
        let Some(kind) = words.next() else { continue };
        let col_of = |w: &str| 1 + raw[..(w.as_ptr() as usize - raw.as_ptr() as usize)].chars().count();
        let loc = SourceLocation { line: i + 1, column: col_of(kind) };
        let name = words.next().ok_or_else(|| syntax(loc, "missing name"))?;
        let name_loc = SourceLocation { line: i + 1, column: col_of(name) };
        check_name(name, name_loc)?;
        if let Some(extra) = words.next() {
            return Err(syntax(SourceLocation { line: i + 1, column: col_of(extra) }, "trailing input"));
        }
        match kind {
            "concept" => concepts.push(name.to_string()),
            "role" => roles.push(name.to_string()),
            other => return Err(syntax(loc, format!("expected `concept` or `role`, found `{other}`"))),
        }
    }
    Signature::new(concepts, roles)
}

/// Parses an ABox file of `(instance a A)` and `(related a b r)` forms.
pub fn parse_abox(text: &str) -> Result<Abox> {
    let mut out = Vec::new();
    for form in read_all(text)? {
        let (items, loc) = match &form {
            Sexp::List(items, loc) => (items, *loc),
            Sexp::Sym(_, loc) => return Err(syntax(*loc, "expected '('")),
        };
        match head(items, loc)? {
            "instance" => {
                arity(items, 3, loc, "instance")?;
                let ind = name_of(&items[1])?;
                match &items[2] {
                    Sexp::Sym(t, _) if t == "top" => out.push(Assertion::top(ind)),
                    other => out.push(Assertion::concept(name_of(other)?, ind)),
                }
            }
            "related" => {
                arity(items, 4, loc, "related")?;
                out.push(Assertion::role(name_of(&items[3])?, name_of(&items[1])?, name_of(&items[2])?));
            }
            other => return Err(syntax(loc, format!("unknown form `{other}`"))),
        }
    }
    Abox::new(out)
}

fn write_concept(out: &mut String, c: &Concept) {
    match c {
        Concept::Top => out.push_str("top"),
        Concept::Atom(a) => out.push_str(a.as_str()),
        Concept::Ran(r) => {
            let _ = write!(out, "(ran {r})");
        }
        Concept::Exists(r, f) => {
            let _ = write!(out, "(some {r} ");
            write_concept(out, f);
            out.push(')');
        }
        Concept::ExistsRoles(rs, f) => {
            out.push_str("(some-all (");
            for (i, r) in rs.iter().enumerate() {
                if i > 0 {
                    out.push(' ');
                }
                out.push_str(r.as_str());
            }
            out.push_str(") ");
            write_concept(out, f);
            out.push(')');
        }
        Concept::ExistsUniversal(f) => {
            out.push_str("(some-u ");
            write_concept(out, f);
            out.push(')');
        }
        Concept::Conj(cs) => {
            out.push_str("(and");
            for c in cs {
                out.push(' ');
                write_concept(out, c);
            }
            out.push(')');
        }
    }
}

/// Renders a concept as an s-expression.
pub fn render_concept(c: &Concept) -> String {
    let mut out = String::new();
    write_concept(&mut out, c);
    out
}

/// Renders one axiom as a terminology form.
pub fn render_axiom(ax: &Axiom) -> String {
    match ax {
        Axiom::SubAtom(a, c) => format!("(define-primitive-concept {a} {})", render_concept(c)),
        Axiom::EqAtom(a, c) => format!("(define-concept {a} {})", render_concept(c)),
        Axiom::RangeRestr(r, c) => format!("(range {r} {})", render_concept(c)),
        Axiom::DomainRestr(r, c) => format!("(domain {r} {})", render_concept(c)),
        Axiom::RoleIncl(r, s) => format!("(define-primitive-role {r} :parent {s})"),
    }
}

/// Renders a terminology, one axiom per line.
pub fn render_terminology(t: &Terminology) -> String {
    t.axioms().iter().map(|a| render_axiom(a) + "\n").collect()
}

/// Renders a signature in the signature file format.
pub fn render_signature(sig: &Signature) -> String {
    let mut out = String::new();
    for c in &sig.concept_names {
        let _ = writeln!(out, "concept {c}");
    }
    for r in &sig.role_names {
        let _ = writeln!(out, "role {r}");
    }
    out
}

/// Renders an ABox in the ABox file format.
pub fn render_abox(abox: &Abox) -> String {
    let mut out = String::new();
    for a in abox.assertions() {
        match a {
            Assertion::Concept(Some(c), i) => {
                let _ = writeln!(out, "(instance {i} {c})");
            }
            Assertion::Concept(None, i) => {
                let _ = writeln!(out, "(instance {i} top)");
            }
            Assertion::Role(r, x, y) => {
                let _ = writeln!(out, "(related {x} {y} {r})");
            }
        }
    }
    out
}

/// Renders an inclusion as `C ⊑ D` with s-expression operands.
pub fn render_inclusion(inc: &Inclusion) -> String {
    format!("{} ⊑ {}", render_concept(&inc.lhs), render_concept(&inc.rhs))
}

/// Report output formats.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ReportFormat {
    Text,
    Tsv,
}

fn key_fields(key: &WitnessKey) -> (&'static str, String) {
    match key {
        WitnessKey::Role(r, s) => ("role", format!("{r} ⊑ {s}")),
        WitnessKey::Rhs(a) => ("rhs", a.to_string()),
        WitnessKey::LhsAtomic(a) => ("lhs-atomic", a.to_string()),
        WitnessKey::LhsDom(r) => ("lhs-dom", r.to_string()),
        WitnessKey::LhsRan(r) => ("lhs-ran", r.to_string()),
    }
}

fn example_field(m: &ModeReport, key: &WitnessKey) -> String {
    if let Some(inc) = m.examples.get(key) {
        render_inclusion(inc)
    } else if m.overflow.contains(key) {
        "<example exceeds size cap>".to_string()
    } else {
        String::new()
    }
}

/// Renders a witness report as text or TSV.
pub fn render_report(report: &WitnessReport, format: ReportFormat) -> String {
    let mut out = String::new();
    match format {
        ReportFormat::Tsv => {
            out.push_str("direction\tmode\tcategory\tname\texample\n");
            for ((dir, mode), m) in &report.entries {
                for key in m.keys() {
                    let (cat, name) = key_fields(&key);
                    let _ = writeln!(out, "{}\t{}\t{cat}\t{name}\t{}", dir.label(), mode.label(), example_field(m, &key));
                }
            }
        }
        ReportFormat::Text => {
            out.push_str("# logical difference report\n");
            let directions: Vec<Direction> = {
                let mut d: Vec<Direction> = report.entries.keys().map(|(d, _)| *d).collect();
                d.dedup();
                d
            };
            for dir in directions {
                let _ = writeln!(out, "direction {}", dir.label());
                let modes: Vec<(&Mode, &ModeReport)> =
                    report.entries.iter().filter(|((d, _), _)| *d == dir).map(|((_, m), r)| (m, r)).collect();
                if modes.iter().all(|(_, r)| r.is_empty()) {
                    out.push_str("  no difference\n");
                    continue;
                }
                for (mode, m) in modes {
                    let _ = writeln!(out, "  mode {}", mode.label());
                    if m.is_empty() {
                        out.push_str("    no difference\n");
                        continue;
                    }
                    for key in m.keys() {
                        let (cat, name) = key_fields(&key);
                        let _ = writeln!(out, "    {cat}: {name}");
                        let ex = example_field(m, &key);
                        if !ex.is_empty() {
                            let _ = writeln!(out, "      example: {ex}");
                        }
                    }
                }
            }
        }
    }
    out
}
