//! Reference implementations used as test oracles. They work from the
//! feature tree or from exhaustive enumeration and share no code with the
//! SAT-backed paths under test.

#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap};
use std::path::PathBuf;

use multiwise::experiment::{synthetic_tree, SyntheticConfig};
use multiwise::model::{compile_to_cnf, parse_feature_tree, FeatureModel, FeatureTree, GroupKind, TreeNode};

pub fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data").join(name)
}

pub fn car_tree() -> FeatureTree {
    parse_feature_tree(&std::fs::read_to_string(data("car.uvl")).unwrap()).unwrap()
}

pub fn car() -> FeatureModel {
    compile_to_cnf(&car_tree())
}

/// Feature names indexed by the breadth-first literal numbering of the car model.
pub const CAR_LITERALS: [&str; 11] = [
    "Car",
    "Carbody",
    "Radio",
    "Gearbox",
    "Ports",
    "Navigation",
    "Bluetooth",
    "Manual",
    "Automatic",
    "USB",
    "CD",
];

/// `(name, selected)` for a signed literal of the car model. `0` is
/// `Car`, which is never negated.
pub fn car_lit(lit: i32) -> (&'static str, bool) {
    (CAR_LITERALS[lit.unsigned_abs() as usize], lit >= 0)
}

/// Whether a selection (by name) satisfies the tree's hierarchy, group
/// semantics and cross-tree constraints.
pub fn tree_accepts(tree: &FeatureTree, selected: &HashMap<&str, bool>) -> bool {
    fn node_ok(node: &TreeNode, sel: &HashMap<&str, bool>) -> bool {
        let parent = sel[node.name.as_str()];
        let chosen = node.children.iter().filter(|(c, _)| sel[c.name.as_str()]).count();
        for (child, mandatory) in &node.children {
            let c = sel[child.name.as_str()];
            if c && !parent {
                return false;
            }
            if *mandatory && parent && !c {
                return false;
            }
        }
        if parent && !node.children.is_empty() {
            match node.kind {
                GroupKind::And => {}
                GroupKind::Or if chosen == 0 => return false,
                GroupKind::Alternative if chosen != 1 => return false,
                _ => {}
            }
        }
        node.children.iter().all(|(c, _)| node_ok(c, sel))
    }
    selected[tree.root.name.as_str()]
        && node_ok(&tree.root, selected)
        && tree
            .constraints
            .iter()
            .all(|f| f.eval(&|name: &str| selected[name]))
}

/// Every valid configuration of the tree by truth-table sweep, as selections
/// over the features in document order.
pub fn valid_by_sweep(tree: &FeatureTree) -> Vec<Vec<bool>> {
    let names = tree.features();
    let n = names.len();
    assert!(n <= 22, "truth table too large");
    let mut out = Vec::new();
    let mut sel: HashMap<&str, bool> = names.iter().map(|&s| (s, false)).collect();
    for bits in 0u64..(1 << n) {
        for (i, name) in names.iter().enumerate() {
            sel.insert(name, bits >> i & 1 == 1);
        }
        if tree_accepts(tree, &sel) {
            out.push((0..n).map(|i| bits >> i & 1 == 1).collect());
        }
    }
    out
}

pub type Tuple = Vec<(usize, bool)>;

/// All t-wise tuples over `scope` that appear in at least one configuration.
pub fn harvest_tuples(configs: &[Vec<bool>], scope: &[usize], t: usize) -> BTreeSet<Tuple> {
    let mut scope = scope.to_vec();
    scope.sort_unstable();
    let mut out = BTreeSet::new();
    if t == 0 || t > scope.len() {
        return out;
    }
    for c in configs {
        for combo in combinations(&scope, t) {
            out.insert(combo.iter().map(|&v| (v, c[v])).collect());
        }
    }
    out
}

/// Index combinations of size `k` in lexicographic order.
pub fn combinations(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn go(items: &[usize], k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..items.len() {
            cur.push(items[i]);
            go(items, k, i + 1, cur, out);
            cur.pop();
        }
    }
    go(items, k, 0, &mut cur, &mut out);
    out
}

/// `(valid, covered)` by checking every harvested tuple against every
/// configuration of the sample.
pub fn brute_coverage(valid: &BTreeSet<Tuple>, sample: &[Vec<bool>]) -> (usize, usize) {
    let covered = valid
        .iter()
        .filter(|tuple| sample.iter().any(|c| tuple.iter().all(|&(v, s)| c[v] == s)))
        .count();
    (valid.len(), covered)
}

/// Clause count of the structural encoding, computed from the tree alone:
/// one root unit, one child-implies-parent clause per child, one more per
/// mandatory child, one per OR/alternative group and the pairwise exclusions
/// of alternative groups.
pub fn structural_clause_count(tree: &FeatureTree) -> usize {
    let mut count = 1;
    tree.root.walk(&mut |node| {
        let k = node.children.len();
        count += k;
        count += node.children.iter().filter(|(_, m)| *m).count();
        match node.kind {
            GroupKind::Or if k > 0 => count += 1,
            GroupKind::Alternative if k > 0 => count += 1 + k * (k - 1) / 2,
            _ => {}
        }
    });
    count
}

/// Small synthetic trees for oracle comparisons.
pub fn small_tree(seed: u64, features: usize, constraints: usize) -> FeatureTree {
    synthetic_tree(&SyntheticConfig {
        features,
        constraints,
        max_children: 4,
        seed,
        ..SyntheticConfig::default()
    })
}

/// Selection of a configuration in model variable order from one in tree
/// document order.
pub fn to_model_order(tree: &FeatureTree, model: &FeatureModel, config: &[bool]) -> Vec<bool> {
    let names = tree.features();
    let mut out = vec![false; model.num_features()];
    for (i, name) in names.iter().enumerate() {
        out[model.var_of(name).unwrap()] = config[i];
    }
    out
}

pub fn tuple_pairs(set: &multiwise::interactions::TupleSet) -> BTreeSet<Tuple> {
    set.iter()
        .map(|t| t.lits().iter().map(|l| (l.var(), l.is_positive())).collect())
        .collect()
}
