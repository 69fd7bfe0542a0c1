//! A small, indentation-based subset of UVL.
//!
//! ```text
//! features
//!   Car
//!     mandatory
//!       Carbody
//!     optional
//!       Radio
//! constraints
//!   Radio => Carbody
//! ```
//!
//! Children listed under `mandatory`/`optional` blocks are AND-children with
//! the corresponding flag. Children under `or`/`alternative` form a single
//! group. A feature either has AND blocks or exactly one `or`/`alternative`
//! block. Indentation is spaces only; lines whose content starts with `//`
//! are comments.

use std::collections::HashSet;
use std::fmt::{self, Write as _};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum UvlError {
    #[error("syntax error at {line}:{column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("line {line}: duplicate feature name `{name}`")]
    DuplicateFeature { name: String, line: usize },
    #[error("line {line}: group under `{feature}` has no children")]
    EmptyGroup { feature: String, line: usize },
    #[error("line {line}: constraint references unknown feature `{name}`")]
    UnknownFeature { name: String, line: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GroupKind {
    And,
    Or,
    Alternative,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeNode {
    pub name: String,
    pub kind: GroupKind,
    /// `(child, mandatory)`; the flag is always `false` for OR/ALT children.
    pub children: Vec<(TreeNode, bool)>,
}

impl TreeNode {
    pub fn leaf(name: impl Into<String>) -> TreeNode {
        TreeNode {
            name: name.into(),
            kind: GroupKind::And,
            children: Vec::new(),
        }
    }

    /// Pre-order walk (document order).
    pub fn walk<'a>(&'a self, visit: &mut impl FnMut(&'a TreeNode)) {
        visit(self);
        for (child, _) in &self.children {
            child.walk(visit);
        }
    }
}

/// Propositional formula over feature names.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Formula {
    Var(String),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
}

impl Formula {
    pub fn var(name: impl Into<String>) -> Formula {
        Formula::Var(name.into())
    }

    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn iff(a: Formula, b: Formula) -> Formula {
        Formula::Iff(Box::new(a), Box::new(b))
    }

    pub fn eval(&self, value: &impl Fn(&str) -> bool) -> bool {
        match self {
            Formula::Var(n) => value(n),
            Formula::Not(f) => !f.eval(value),
            Formula::And(a, b) => a.eval(value) && b.eval(value),
            Formula::Or(a, b) => a.eval(value) || b.eval(value),
            Formula::Implies(a, b) => !a.eval(value) || b.eval(value),
            Formula::Iff(a, b) => a.eval(value) == b.eval(value),
        }
    }

    pub fn names<'a>(&'a self, out: &mut Vec<&'a str>) {
        match self {
            Formula::Var(n) => out.push(n),
            Formula::Not(f) => f.names(out),
            Formula::And(a, b)
            | Formula::Or(a, b)
            | Formula::Implies(a, b)
            | Formula::Iff(a, b) => {
                a.names(out);
                b.names(out);
            }
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn operand(f: &mut fmt::Formatter<'_>, x: &Formula) -> fmt::Result {
            match x {
                Formula::Var(_) | Formula::Not(_) => write!(f, "{x}"),
                _ => write!(f, "({x})"),
            }
        }
        match self {
            Formula::Var(n) => f.write_str(&quote_name(n)),
            Formula::Not(x) => {
                f.write_str("!")?;
                operand(f, x)
            }
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) | Formula::Iff(a, b) => {
                let op = match self {
                    Formula::And(..) => "&",
                    Formula::Or(..) => "|",
                    Formula::Implies(..) => "=>",
                    _ => "<=>",
                };
                operand(f, a)?;
                write!(f, " {op} ")?;
                operand(f, b)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FeatureTree {
    pub root: TreeNode,
    pub constraints: Vec<Formula>,
}

impl FeatureTree {
    /// Feature names in document order.
    pub fn features(&self) -> Vec<&str> {
        let mut out = Vec::new();
        self.root.walk(&mut |n| out.push(n.name.as_str()));
        out
    }
}

const KEYWORDS: [&str; 6] = [
    "features",
    "constraints",
    "mandatory",
    "optional",
    "or",
    "alternative",
];

fn is_bare_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '.'
}

fn quote_name(name: &str) -> String {
    if !name.is_empty() && name.chars().all(is_bare_char) && !KEYWORDS.contains(&name) {
        name.to_string()
    } else {
        format!("\"{name}\"")
    }
}

/// Canonical printer; `parse_feature_tree(&print_feature_tree(t)) == t`.
pub fn print_feature_tree(tree: &FeatureTree) -> String {
    fn node(out: &mut String, n: &TreeNode, depth: usize) {
        let pad = "  ".repeat(depth);
        let _ = writeln!(out, "{pad}{}", quote_name(&n.name));
        if n.children.is_empty() {
            return;
        }
        match n.kind {
            GroupKind::And => {
                let mut i = 0;
                while i < n.children.len() {
                    let flag = n.children[i].1;
                    let kw = if flag { "mandatory" } else { "optional" };
                    let _ = writeln!(out, "{pad}  {kw}");
                    while i < n.children.len() && n.children[i].1 == flag {
                        node(out, &n.children[i].0, depth + 2);
                        i += 1;
                    }
                }
            }
            GroupKind::Or | GroupKind::Alternative => {
                let kw = if n.kind == GroupKind::Or { "or" } else { "alternative" };
                let _ = writeln!(out, "{pad}  {kw}");
                for (c, _) in &n.children {
                    node(out, c, depth + 2);
                }
            }
        }
    }

    let mut out = String::from("features\n");
    node(&mut out, &tree.root, 1);
    if !tree.constraints.is_empty() {
        out.push_str("constraints\n");
        for c in &tree.constraints {
            let _ = writeln!(out, "  {c}");
        }
    }
    out
}

struct Line<'a> {
    number: usize,
    indent: usize,
    text: &'a str,
}

struct TreeParser<'a> {
    lines: Vec<Line<'a>>,
    pos: usize,
    seen: HashSet<String>,
}

fn syntax(line: usize, column: usize, message: impl Into<String>) -> UvlError {
    UvlError::Syntax {
        line,
        column,
        message: message.into(),
    }
}

/// Parses a feature name token occupying the whole line content.
fn parse_name(line: &Line<'_>) -> Result<String, UvlError> {
    let col = line.indent + 1;
    let text = line.text;
    if let Some(rest) = text.strip_prefix('"') {
        match rest.find('"') {
            Some(end) if end + 1 == rest.len() && end > 0 => Ok(rest[..end].to_string()),
            Some(0) => Err(syntax(line.number, col, "empty feature name")),
            Some(end) => Err(syntax(
                line.number,
                col + end + 2,
                "unexpected text after feature name",
            )),
            None => Err(syntax(line.number, col, "unterminated quoted name")),
        }
    } else if let Some((i, c)) = text.char_indices().find(|(_, c)| !is_bare_char(*c)) {
        Err(syntax(
            line.number,
            col + text[..i].chars().count(),
            format!("unexpected character `{c}` in feature name"),
        ))
    } else {
        Ok(text.to_string())
    }
}

impl<'a> TreeParser<'a> {
    fn peek(&self) -> Option<&Line<'a>> {
        self.lines.get(self.pos)
    }

    fn feature(&mut self, indent: usize) -> Result<TreeNode, UvlError> {
        let line = &self.lines[self.pos];
        debug_assert_eq!(line.indent, indent);
        if KEYWORDS.contains(&line.text) {
            return Err(syntax(
                line.number,
                indent + 1,
                format!("expected a feature name, found keyword `{}`", line.text),
            ));
        }
        let name = parse_name(line)?;
        if !self.seen.insert(name.clone()) {
            return Err(UvlError::DuplicateFeature {
                name,
                line: line.number,
            });
        }
        self.pos += 1;

        let mut node = TreeNode::leaf(name);
        let mut group_indent = None;
        let mut has_and = false;
        let mut has_group = false;
        while let Some(next) = self.peek() {
            if next.indent <= indent {
                break;
            }
            let expected = *group_indent.get_or_insert(next.indent);
            if next.indent != expected {
                return Err(syntax(next.number, next.indent + 1, "inconsistent indentation"));
            }
            let (kind, mandatory) = match next.text {
                "mandatory" => (GroupKind::And, true),
                "optional" => (GroupKind::And, false),
                "or" => (GroupKind::Or, false),
                "alternative" => (GroupKind::Alternative, false),
                other => {
                    return Err(syntax(
                        next.number,
                        next.indent + 1,
                        format!("expected `mandatory`, `optional`, `or` or `alternative`, found `{other}`"),
                    ))
                }
            };
            let kw_line = next.number;
            if kind == GroupKind::And {
                if has_group {
                    return Err(syntax(kw_line, expected + 1, "feature mixes an or/alternative group with and-children"));
                }
                has_and = true;
            } else {
                if has_and || has_group {
                    return Err(syntax(kw_line, expected + 1, "feature may have only one or/alternative group"));
                }
                has_group = true;
                node.kind = kind;
            }
            self.pos += 1;
            let children = self.block(expected)?;
            if children.is_empty() {
                return Err(UvlError::EmptyGroup {
                    feature: node.name.clone(),
                    line: kw_line,
                });
            }
            node.children
                .extend(children.into_iter().map(|c| (c, mandatory)));
        }
        Ok(node)
    }

    fn block(&mut self, keyword_indent: usize) -> Result<Vec<TreeNode>, UvlError> {
        let mut out = Vec::new();
        let mut child_indent = None;
        while let Some(next) = self.peek() {
            if next.indent <= keyword_indent {
                break;
            }
            let expected = *child_indent.get_or_insert(next.indent);
            if next.indent != expected {
                return Err(syntax(next.number, next.indent + 1, "inconsistent indentation"));
            }
            out.push(self.feature(expected)?);
        }
        Ok(out)
    }
}

/// Parses the UVL subset into a [`FeatureTree`].
pub fn parse_feature_tree(text: &str) -> Result<FeatureTree, UvlError> {
    let mut lines = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let number = i + 1;
        let raw = raw.trim_end();
        if let Some(col) = raw.find('\t') {
            return Err(syntax(number, col + 1, "tabs are not allowed; indent with spaces"));
        }
        let content = raw.trim_start_matches(' ');
        if content.is_empty() || content.starts_with("//") {
            continue;
        }
        lines.push(Line {
            number,
            indent: raw.len() - content.len(),
            text: content,
        });
    }

    let first = lines
        .first()
        .ok_or_else(|| syntax(1, 1, "expected `features`"))?;
    if first.text != "features" || first.indent != 0 {
        return Err(syntax(first.number, first.indent + 1, "expected `features`"));
    }

    let split = lines
        .iter()
        .position(|l| l.indent == 0 && l.text == "constraints")
        .unwrap_or(lines.len());
    let constraint_lines = lines.split_off(split);
    let features_line = lines.remove(0);

    let mut parser = TreeParser {
        lines,
        pos: 0,
        seen: HashSet::new(),
    };
    let root_line = parser.peek().ok_or_else(|| {
        syntax(features_line.number + 1, 1, "expected a root feature")
    })?;
    if root_line.indent == 0 {
        return Err(syntax(root_line.number, 1, "root feature must be indented under `features`"));
    }
    let root_indent = root_line.indent;
    let root = parser.feature(root_indent)?;
    if let Some(extra) = parser.peek() {
        let msg = if extra.indent == 0 {
            format!("unexpected `{}`", extra.text)
        } else {
            "only one root feature is allowed".to_string()
        };
        return Err(syntax(extra.number, extra.indent + 1, msg));
    }

    let mut constraints = Vec::new();
    for line in constraint_lines.iter().skip(1) {
        if line.indent == 0 {
            return Err(syntax(line.number, 1, "constraints must be indented"));
        }
        let formula = ConstraintParser::new(line)?.parse()?;
        let mut names = Vec::new();
        formula.names(&mut names);
        if let Some(unknown) = names.into_iter().find(|n| !parser.seen.contains(*n)) {
            return Err(UvlError::UnknownFeature {
                name: unknown.to_string(),
                line: line.number,
            });
        }
        constraints.push(formula);
    }

    Ok(FeatureTree { root, constraints })
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Name(String),
    Not,
    And,
    Or,
    Implies,
    Iff,
    Open,
    Close,
}

struct ConstraintParser {
    line: usize,
    toks: Vec<(Tok, usize)>,
    pos: usize,
    end_col: usize,
}

impl ConstraintParser {
    fn new(line: &Line<'_>) -> Result<Self, UvlError> {
        let mut toks = Vec::new();
        let chars: Vec<char> = line.text.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let col = line.indent + i + 1;
            let c = chars[i];
            let rest: String = chars[i..chars.len().min(i + 3)].iter().collect();
            if c == ' ' {
                i += 1;
            } else if rest.starts_with("<=>") {
                toks.push((Tok::Iff, col));
                i += 3;
            } else if rest.starts_with("=>") {
                toks.push((Tok::Implies, col));
                i += 2;
            } else if c == '!' {
                toks.push((Tok::Not, col));
                i += 1;
            } else if c == '&' {
                toks.push((Tok::And, col));
                i += 1;
            } else if c == '|' {
                toks.push((Tok::Or, col));
                i += 1;
            } else if c == '(' {
                toks.push((Tok::Open, col));
                i += 1;
            } else if c == ')' {
                toks.push((Tok::Close, col));
                i += 1;
            } else if c == '"' {
                let end = chars[i + 1..]
                    .iter()
                    .position(|&c| c == '"')
                    .ok_or_else(|| syntax(line.number, col, "unterminated quoted name"))?;
                if end == 0 {
                    return Err(syntax(line.number, col, "empty feature name"));
                }
                toks.push((Tok::Name(chars[i + 1..i + 1 + end].iter().collect()), col));
                i += end + 2;
            } else if is_bare_char(c) {
                let start = i;
                while i < chars.len() && is_bare_char(chars[i]) {
                    i += 1;
                }
                toks.push((Tok::Name(chars[start..i].iter().collect()), col));
            } else {
                return Err(syntax(line.number, col, format!("unexpected character `{c}`")));
            }
        }
        Ok(ConstraintParser {
            line: line.number,
            toks,
            pos: 0,
            end_col: line.indent + chars.len() + 1,
        })
    }

    fn parse(mut self) -> Result<Formula, UvlError> {
        let f = self.iff()?;
        if let Some((_, col)) = self.toks.get(self.pos) {
            return Err(syntax(self.line, *col, "unexpected token"));
        }
        Ok(f)
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.toks.get(self.pos).map(|(t, _)| t) == Some(tok) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn iff(&mut self) -> Result<Formula, UvlError> {
        let mut lhs = self.implies()?;
        while self.eat(&Tok::Iff) {
            lhs = Formula::iff(lhs, self.implies()?);
        }
        Ok(lhs)
    }

    fn implies(&mut self) -> Result<Formula, UvlError> {
        let lhs = self.or()?;
        if self.eat(&Tok::Implies) {
            Ok(Formula::implies(lhs, self.implies()?))
        } else {
            Ok(lhs)
        }
    }

    fn or(&mut self) -> Result<Formula, UvlError> {
        let mut lhs = self.and()?;
        while self.eat(&Tok::Or) {
            lhs = Formula::or(lhs, self.and()?);
        }
        Ok(lhs)
    }

    fn and(&mut self) -> Result<Formula, UvlError> {
        let mut lhs = self.unary()?;
        while self.eat(&Tok::And) {
            lhs = Formula::and(lhs, self.unary()?);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula, UvlError> {
        match self.toks.get(self.pos).cloned() {
            Some((Tok::Not, _)) => {
                self.pos += 1;
                Ok(Formula::not(self.unary()?))
            }
            Some((Tok::Open, col)) => {
                self.pos += 1;
                let inner = self.iff()?;
                if !self.eat(&Tok::Close) {
                    let at = self.toks.get(self.pos).map_or(self.end_col, |t| t.1);
                    return Err(syntax(self.line, at, format!("expected `)` to close `(` at column {col}")));
                }
                Ok(inner)
            }
            Some((Tok::Name(n), _)) => {
                self.pos += 1;
                Ok(Formula::Var(n))
            }
            Some((_, col)) => Err(syntax(self.line, col, "expected a feature name, `!` or `(`")),
            None => Err(syntax(self.line, self.end_col, "unexpected end of constraint")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_document() {
        let t = parse_feature_tree("features\n  Root").unwrap();
        assert_eq!(t.root, TreeNode::leaf("Root"));
        assert!(t.constraints.is_empty());
    }

    #[test]
    fn blocks_keep_child_order() {
        let src = "features\n  A\n    mandatory\n      B\n    optional\n      C\n    mandatory\n      D\n";
        let t = parse_feature_tree(src).unwrap();
        let flags: Vec<_> = t.root.children.iter().map(|(c, m)| (c.name.as_str(), *m)).collect();
        assert_eq!(flags, [("B", true), ("C", false), ("D", true)]);
        assert_eq!(print_feature_tree(&t), src);
    }

    #[test]
    fn duplicate_names_rejected() {
        let src = "features\n  Car\n    optional\n      Radio\n      Radio\n";
        assert_eq!(
            parse_feature_tree(src),
            Err(UvlError::DuplicateFeature { name: "Radio".into(), line: 5 })
        );
    }

    #[test]
    fn empty_group_rejected() {
        let src = "features\n  Car\n    or\n";
        assert!(matches!(parse_feature_tree(src), Err(UvlError::EmptyGroup { line: 3, .. })));
    }

    #[test]
    fn unknown_constraint_feature() {
        let src = "features\n  Car\nconstraints\n  Car => Boat\n";
        assert_eq!(
            parse_feature_tree(src),
            Err(UvlError::UnknownFeature { name: "Boat".into(), line: 4 })
        );
    }

    #[test]
    fn syntax_errors_carry_positions() {
        let err = parse_feature_tree("features\n  Car\n    optional\n      Ra-dio\n").unwrap_err();
        assert_eq!(
            err,
            UvlError::Syntax { line: 4, column: 9, message: "unexpected character `-` in feature name".into() }
        );
        let err = parse_feature_tree("features\n  Car\nconstraints\n  (Car & Car\n").unwrap_err();
        assert!(matches!(err, UvlError::Syntax { line: 4, column: 13, .. }), "{err:?}");
        let err = parse_feature_tree("features\n\tCar\n").unwrap_err();
        assert!(matches!(err, UvlError::Syntax { line: 2, column: 1, .. }));
        let err = parse_feature_tree("feature\n  Car\n").unwrap_err();
        assert!(matches!(err, UvlError::Syntax { line: 1, .. }));
        let err = parse_feature_tree("features\n  A\n    or\n      B\n    optional\n      C\n").unwrap_err();
        assert!(matches!(err, UvlError::Syntax { line: 5, .. }));
        let err = parse_feature_tree("features\n  A\n  B\n").unwrap_err();
        assert!(matches!(err, UvlError::Syntax { line: 3, .. }));
    }

    #[test]
    fn constraint_precedence() {
        let src = "features\n  A\n    optional\n      B\n      C\n      D\nconstraints\n  !A | B & C => D <=> A\n";
        let t = parse_feature_tree(src).unwrap();
        let (a, b, c, d) = (Formula::var("A"), Formula::var("B"), Formula::var("C"), Formula::var("D"));
        let expected = Formula::iff(
            Formula::implies(Formula::or(Formula::not(a.clone()), Formula::and(b, c)), d),
            a,
        );
        assert_eq!(t.constraints, vec![expected]);
        let printed = print_feature_tree(&t);
        assert_eq!(parse_feature_tree(&printed).unwrap(), t);
    }

    #[test]
    fn quoted_names_round_trip() {
        let src = "features\n  \"Root Node\"\n    alternative\n      \"or\"\n      x.y\nconstraints\n  \"or\" => !x.y\n";
        let t = parse_feature_tree(src).unwrap();
        assert_eq!(t.features(), ["Root Node", "or", "x.y"]);
        assert_eq!(print_feature_tree(&t), src);
    }
}
