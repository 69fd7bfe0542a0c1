//! DIMACS CNF with FeatureIDE-style `c <var> <name>` comments.
//!
//! Named variables become features (in ascending variable order), unnamed
//! ones auxiliary variables numbered after the features. A file without any
//! name comment names every variable by its number.

use std::collections::HashMap;
use std::fmt::Write as _;

use thiserror::Error;

use super::{Clause, FeatureModel, Lit};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DimacsError {
    #[error("line {line}: malformed header: {message}")]
    MalformedHeader { line: usize, message: String },
    #[error("missing `p cnf` header")]
    MissingHeader,
    #[error("line {line}: literal {literal} out of range (header declares {vars} variables)")]
    LiteralOutOfRange { line: usize, literal: i64, vars: usize },
    #[error("line {line}: invalid token `{token}`")]
    BadToken { line: usize, token: String },
    #[error("last clause is not terminated by 0")]
    Unterminated,
    #[error("line {line}: empty clause")]
    EmptyClause { line: usize },
    #[error("header declares {declared} clauses but {found} were found")]
    ClauseCount { declared: usize, found: usize },
    #[error("line {line}: variable {var} is named twice")]
    DuplicateName { line: usize, var: usize },
    #[error("line {line}: feature name `{name}` is used twice")]
    DuplicateFeature { line: usize, name: String },
}

pub fn parse_dimacs(text: &str) -> Result<FeatureModel, DimacsError> {
    let mut names: HashMap<usize, (String, usize)> = HashMap::new();
    let mut header: Option<(usize, usize)> = None;
    let mut raw_clauses: Vec<Vec<i64>> = Vec::new();
    let mut current: Vec<i64> = Vec::new();

    for (i, line) in text.lines().enumerate() {
        let number = i + 1;
        let line = line.trim();
        if line.is_empty() || line.starts_with('%') {
            continue;
        }
        if let Some(rest) = line.strip_prefix('c') {
            if rest.is_empty() || rest.starts_with(char::is_whitespace) {
                let rest = rest.trim();
                if let Some((idx, name)) = rest.split_once(char::is_whitespace) {
                    if let Ok(var) = idx.parse::<usize>() {
                        let name = name.trim();
                        if var > 0
                            && !name.is_empty()
                            && names.insert(var, (name.to_string(), number)).is_some()
                        {
                            return Err(DimacsError::DuplicateName { line: number, var });
                        }
                    }
                }
                continue;
            }
        }
        if let Some(rest) = line.strip_prefix('p') {
            if header.is_some() {
                return Err(DimacsError::MalformedHeader {
                    line: number,
                    message: "duplicate header".into(),
                });
            }
            let parts: Vec<&str> = rest.split_whitespace().collect();
            let bad = |message: &str| DimacsError::MalformedHeader {
                line: number,
                message: message.into(),
            };
            if parts.len() != 3 || parts[0] != "cnf" {
                return Err(bad("expected `p cnf <variables> <clauses>`"));
            }
            let vars = parts[1].parse().map_err(|_| bad("variable count is not a number"))?;
            let count = parts[2].parse().map_err(|_| bad("clause count is not a number"))?;
            header = Some((vars, count));
            continue;
        }
        let Some((vars, _)) = header else {
            return Err(DimacsError::MissingHeader);
        };
        for tok in line.split_whitespace() {
            let lit: i64 = tok.parse().map_err(|_| DimacsError::BadToken {
                line: number,
                token: tok.to_string(),
            })?;
            if lit == 0 {
                if current.is_empty() {
                    return Err(DimacsError::EmptyClause { line: number });
                }
                raw_clauses.push(std::mem::take(&mut current));
            } else {
                if lit.unsigned_abs() as usize > vars {
                    return Err(DimacsError::LiteralOutOfRange {
                        line: number,
                        literal: lit,
                        vars,
                    });
                }
                current.push(lit);
            }
        }
    }
    if !current.is_empty() {
        return Err(DimacsError::Unterminated);
    }
    let (vars, declared) = header.ok_or(DimacsError::MissingHeader)?;
    if declared != raw_clauses.len() {
        return Err(DimacsError::ClauseCount {
            declared,
            found: raw_clauses.len(),
        });
    }

    for (&var, (_, line)) in &names {
        if var > vars {
            return Err(DimacsError::LiteralOutOfRange {
                line: *line,
                literal: var as i64,
                vars,
            });
        }
    }
    let unnamed_file = names.is_empty();

    // old 1-based variable -> new 0-based variable
    let mut remap = vec![0usize; vars + 1];
    let mut features = Vec::new();
    let mut seen = HashMap::new();
    for var in 1..=vars {
        let name = match names.get(&var) {
            Some((n, line)) => {
                if seen.insert(n.clone(), ()).is_some() {
                    return Err(DimacsError::DuplicateFeature {
                        line: *line,
                        name: n.clone(),
                    });
                }
                n.clone()
            }
            None if unnamed_file => var.to_string(),
            None => continue,
        };
        remap[var] = features.len();
        features.push(name);
    }
    let mut next_aux = features.len();
    for var in 1..=vars {
        if !unnamed_file && !names.contains_key(&var) {
            remap[var] = next_aux;
            next_aux += 1;
        }
    }
    let aux = next_aux - features.len();

    let clauses: Vec<Clause> = raw_clauses
        .into_iter()
        .map(|c| {
            c.into_iter()
                .map(|l| Lit::new(remap[l.unsigned_abs() as usize], l > 0))
                .collect()
        })
        .collect();
    Ok(FeatureModel::new(features, clauses, aux).expect("validated during parsing"))
}

pub fn write_dimacs(model: &FeatureModel) -> String {
    let mut out = String::new();
    for (i, name) in model.features().iter().enumerate() {
        let _ = writeln!(out, "c {} {}", i + 1, name);
    }
    let _ = writeln!(out, "p cnf {} {}", model.num_vars(), model.clauses().len());
    for clause in model.clauses() {
        for l in clause {
            let _ = write!(out, "{} ", l.to_dimacs());
        }
        out.push_str("0\n");
    }
    out
}
