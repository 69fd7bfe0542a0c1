//! Sample files: a `# model=<name> seed=<seed>` header followed by one
//! configuration per line as semicolon-separated `Name` / `!Name` entries.
//! Undecided features of partial configurations are omitted.

use std::fmt::Write as _;

use thiserror::Error;

use super::Sample;
use crate::model::FeatureModel;
use crate::sat::{Decision, PartialConfiguration};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SampleFileError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: unknown feature `{name}`")]
    UnknownFeature { line: usize, name: String },
    #[error("line {line}: feature `{name}` listed more than once")]
    DuplicateFeature { line: usize, name: String },
}

impl SampleFileError {
    /// Whether the error is about the sample disagreeing with the model
    /// rather than about the file's syntax.
    pub fn is_inconsistency(&self) -> bool {
        !matches!(self, SampleFileError::Syntax { .. })
    }
}

/// A parsed sample file, not yet bound to a model.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SampleFile {
    pub model: Option<String>,
    pub seed: Option<u64>,
    /// `(line, entries)` per configuration.
    pub rows: Vec<(usize, Vec<(String, bool)>)>,
}

pub fn parse_sample_file(text: &str) -> Result<SampleFile, SampleFileError> {
    let mut file = SampleFile::default();
    let mut seen_header = false;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.trim();
        if content.is_empty() {
            continue;
        }
        if let Some(comment) = content.strip_prefix('#') {
            if !seen_header && file.rows.is_empty() {
                seen_header = true;
                for field in comment.split_whitespace() {
                    match field.split_once('=') {
                        Some(("model", v)) => file.model = Some(v.to_string()),
                        Some(("seed", v)) => {
                            file.seed = Some(v.parse().map_err(|_| SampleFileError::Syntax {
                                line,
                                message: format!("invalid seed `{v}`"),
                            })?)
                        }
                        _ => {}
                    }
                }
            }
            continue;
        }
        let mut entries = Vec::new();
        for part in content.split(';') {
            let part = part.trim();
            let (name, selected) = match part.strip_prefix('!') {
                Some(rest) => (rest.trim(), false),
                None => (part, true),
            };
            if name.is_empty() {
                return Err(SampleFileError::Syntax {
                    line,
                    message: "empty entry".into(),
                });
            }
            entries.push((name.to_string(), selected));
        }
        file.rows.push((line, entries));
    }
    Ok(file)
}

impl SampleFile {
    /// Resolves names against `model`.
    pub fn into_sample(self, model: &FeatureModel) -> Result<Sample, SampleFileError> {
        let mut configs = Vec::with_capacity(self.rows.len());
        for (line, entries) in self.rows {
            let mut config = PartialConfiguration::undecided(model.num_features());
            for (name, selected) in entries {
                let var = model
                    .var_of(&name)
                    .ok_or_else(|| SampleFileError::UnknownFeature {
                        line,
                        name: name.clone(),
                    })?;
                if config.get(var) != Decision::Undecided {
                    return Err(SampleFileError::DuplicateFeature { line, name });
                }
                config.set(var, Decision::from_bool(selected));
            }
            configs.push(config);
        }
        Ok(Sample::from_partials(configs))
    }
}

pub fn write_sample_file(model: &FeatureModel, sample: &Sample, model_name: &str, seed: u64) -> String {
    let mut out = format!("# model={model_name} seed={seed}\n");
    for c in sample.configurations() {
        let entries: Vec<String> = c
            .values()
            .iter()
            .enumerate()
            .filter_map(|(v, d)| {
                d.as_bool().map(|sel| {
                    let name = &model.features()[v];
                    if sel {
                        name.clone()
                    } else {
                        format!("!{name}")
                    }
                })
            })
            .collect();
        let _ = writeln!(out, "{}", entries.join(";"));
    }
    out
}
