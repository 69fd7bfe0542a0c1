//! Seeded random feature trees with cross-tree constraints.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::model::{compile_to_cnf, FeatureTree, Formula, GroupKind, TreeNode};
use crate::sat::{core_dead_features, ensure_satisfiable};

#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticConfig {
    pub features: usize,
    /// Number of cross-tree constraints to add.
    pub constraints: usize,
    pub max_children: usize,
    /// Probability that a feature with at least two children is an OR group.
    pub or_share: f64,
    /// Probability that a feature with at least two children is an
    /// alternative group.
    pub alternative_share: f64,
    /// Probability that an AND-child is mandatory.
    pub mandatory_share: f64,
    pub seed: u64,
}

impl Default for SyntheticConfig {
    fn default() -> Self {
        SyntheticConfig {
            features: 20,
            constraints: 4,
            max_children: 4,
            or_share: 0.2,
            alternative_share: 0.2,
            mandatory_share: 0.25,
            seed: 0,
        }
    }
}

/// Generates a satisfiable feature tree with features named `F<i>` in
/// document order. Constraints that would make the model void or introduce
/// dead features are skipped, so fewer than `constraints` may be added.
pub fn synthetic_tree(config: &SyntheticConfig) -> FeatureTree {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let n = config.features.max(1);
    let max_children = config.max_children.max(1);

    let mut children: Vec<Vec<usize>> = vec![Vec::new(); n];
    for i in 1..n {
        let open: Vec<usize> = (0..i).filter(|&p| children[p].len() < max_children).collect();
        // bias towards recent nodes for some depth
        let lo = open.len().saturating_sub(8);
        let parent = if rng.gen_bool(0.5) {
            open[rng.gen_range(lo..open.len())]
        } else {
            *open.choose(&mut rng).expect("node 0 or a later node has room")
        };
        children[parent].push(i);
    }

    let mut kinds = vec![GroupKind::And; n];
    let mut mandatory = vec![false; n];
    for p in 0..n {
        if children[p].len() >= 2 {
            let roll: f64 = rng.gen();
            if roll < config.or_share {
                kinds[p] = GroupKind::Or;
            } else if roll < config.or_share + config.alternative_share {
                kinds[p] = GroupKind::Alternative;
            }
        }
        if kinds[p] == GroupKind::And {
            for &c in &children[p] {
                mandatory[c] = rng.gen_bool(config.mandatory_share);
            }
        }
    }

    fn build(
        v: usize,
        children: &[Vec<usize>],
        kinds: &[GroupKind],
        mandatory: &[bool],
        next: &mut usize,
    ) -> TreeNode {
        let name = format!("F{}", *next);
        *next += 1;
        TreeNode {
            name,
            kind: kinds[v],
            children: children[v]
                .iter()
                .map(|&c| {
                    let flag = kinds[v] == GroupKind::And && mandatory[c];
                    (build(c, children, kinds, mandatory, next), flag)
                })
                .collect(),
        }
    }
    let mut next = 0;
    let root = build(0, &children, &kinds, &mandatory, &mut next);
    let mut tree = FeatureTree {
        root,
        constraints: Vec::new(),
    };

    let names: Vec<String> = tree.features().into_iter().map(str::to_string).collect();
    if n < 3 {
        return tree;
    }
    let mut attempts = 0;
    while tree.constraints.len() < config.constraints && attempts < config.constraints * 20 {
        attempts += 1;
        let picked: Vec<&String> = names[1..].choose_multiple(&mut rng, 3).collect();
        let (a, b, c) = (
            Formula::var(picked[0].as_str()),
            Formula::var(picked[1].as_str()),
            Formula::var(picked[2].as_str()),
        );
        let roll: f64 = rng.gen();
        let constraint = if roll < 0.45 {
            Formula::implies(a, b)
        } else if roll < 0.8 {
            Formula::implies(a, Formula::not(b))
        } else {
            Formula::implies(a, Formula::or(b, c))
        };
        tree.constraints.push(constraint);
        let model = compile_to_cnf(&tree);
        let keep = ensure_satisfiable(&model).is_ok()
            && core_dead_features(&model).is_ok_and(|cd| cd.dead.is_empty());
        if !keep {
            tree.constraints.pop();
        }
    }
    tree
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_and_well_formed() {
        let cfg = SyntheticConfig {
            features: 30,
            constraints: 8,
            seed: 5,
            ..SyntheticConfig::default()
        };
        let a = synthetic_tree(&cfg);
        assert_eq!(a, synthetic_tree(&cfg));
        assert_eq!(a.features().len(), 30);
        assert_eq!(a.features()[0], "F0");
        assert_eq!(a.features()[29], "F29");
        let m = compile_to_cnf(&a);
        assert!(ensure_satisfiable(&m).is_ok());
        assert!(core_dead_features(&m).unwrap().dead.is_empty());
        // the generated tree survives a print/parse cycle
        let printed = crate::model::print_feature_tree(&a);
        assert_eq!(crate::model::parse_feature_tree(&printed).unwrap(), a);
    }
}
