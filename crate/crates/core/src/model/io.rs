//! Loading models from files and converting between formats.

use std::path::Path;

use super::{
    compile_to_cnf, parse_dimacs, parse_feature_tree, print_feature_tree, write_dimacs, FeatureModel,
    FeatureTree, Formula, GroupKind, TreeNode,
};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelFormat {
    Uvl,
    Dimacs,
}

impl ModelFormat {
    /// Chosen by file extension: `.uvl`, or `.dimacs` / `.cnf`.
    pub fn from_path(path: &Path) -> Result<ModelFormat> {
        match path.extension().and_then(|e| e.to_str()) {
            Some("uvl") => Ok(ModelFormat::Uvl),
            Some("dimacs") | Some("cnf") => Ok(ModelFormat::Dimacs),
            _ => Err(Error::UnknownFormat(path.display().to_string())),
        }
    }
}

pub fn read_model(text: &str, format: ModelFormat) -> Result<FeatureModel> {
    Ok(match format {
        ModelFormat::Uvl => compile_to_cnf(&parse_feature_tree(text)?),
        ModelFormat::Dimacs => parse_dimacs(text)?,
    })
}

pub fn load_model(path: impl AsRef<Path>) -> Result<FeatureModel> {
    let path = path.as_ref();
    let format = ModelFormat::from_path(path)?;
    read_model(&std::fs::read_to_string(path)?, format)
}

/// Rebuilds a flat feature tree from a CNF model: the first feature with a
/// positive unit clause becomes the root, every other feature an optional
/// child, and each remaining clause a constraint.
pub fn tree_from_model(model: &FeatureModel) -> Result<FeatureTree> {
    if model.aux_var_count() > 0 {
        return Err(Error::Unsupported(
            "models with auxiliary variables cannot be written as UVL".into(),
        ));
    }
    let root_clause = model
        .clauses()
        .iter()
        .position(|c| c.len() == 1 && c[0].is_positive())
        .ok_or_else(|| Error::Unsupported("no root feature: the model has no positive unit clause".into()))?;
    let root_var = model.clauses()[root_clause][0].var();
    let name = |v: usize| model.features()[v].clone();
    let children = (0..model.num_features())
        .filter(|&v| v != root_var)
        .map(|v| (TreeNode::leaf(name(v)), false))
        .collect();
    let constraints = model
        .clauses()
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != root_clause)
        .map(|(_, clause)| {
            clause
                .iter()
                .map(|l| {
                    let atom = Formula::var(name(l.var()));
                    if l.is_positive() {
                        atom
                    } else {
                        Formula::not(atom)
                    }
                })
                .reduce(Formula::or)
                .expect("clauses are non-empty")
        })
        .collect();
    Ok(FeatureTree {
        root: TreeNode {
            name: name(root_var),
            kind: GroupKind::And,
            children,
        },
        constraints,
    })
}

/// Converts model text from one format to another.
pub fn convert(text: &str, from: ModelFormat, to: ModelFormat) -> Result<String> {
    Ok(match (from, to) {
        (ModelFormat::Uvl, ModelFormat::Uvl) => print_feature_tree(&parse_feature_tree(text)?),
        (ModelFormat::Uvl, ModelFormat::Dimacs) => write_dimacs(&compile_to_cnf(&parse_feature_tree(text)?)),
        (ModelFormat::Dimacs, ModelFormat::Dimacs) => write_dimacs(&parse_dimacs(text)?),
        (ModelFormat::Dimacs, ModelFormat::Uvl) => print_feature_tree(&tree_from_model(&parse_dimacs(text)?)?),
    })
}
