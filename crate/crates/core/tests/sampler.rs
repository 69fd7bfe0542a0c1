mod common;

use common::*;
use multiwise::interactions::coverage_ratio;
use multiwise::model::compile_to_cnf;
use multiwise::model::FeatureModel;
use multiwise::sampler::file::{parse_sample_file, write_sample_file};
use multiwise::sampler::{
    covering_strategy, multiwise_sample, multiwise_sample_observed, FeatureGroup, GroupOrder, GroupSpec, Sample,
    SamplerOptions, TupleOrder,
};
use multiwise::sat::CompletionPolicy;
use multiwise::Error;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn car_groups(m: &FeatureModel) -> GroupSpec {
    GroupSpec::from_json(m, &std::fs::read_to_string(data("table1.json")).unwrap()).unwrap()
}

fn selections(sample: &Sample) -> Vec<Vec<bool>> {
    sample
        .complete_configurations()
        .expect("complete sample")
        .iter()
        .map(|c| c.selection().to_vec())
        .collect()
}

fn random_spec(m: &FeatureModel, rng: &mut ChaCha8Rng) -> GroupSpec {
    let mut features = m.all_features();
    features.shuffle(rng);
    let k = rng.gen_range(0..=3usize);
    let mut groups = Vec::new();
    for i in 0..k {
        let take = rng.gen_range(0..=features.len().min(6));
        let members: Vec<usize> = features.drain(..take).collect();
        groups.push(FeatureGroup::new(format!("G{i}"), rng.gen_range(0..=3), members));
    }
    GroupSpec {
        groups,
        default_t: rng.gen_range(0..=2),
    }
}

/// Checks every resolved group against the exhaustive oracle.
fn assert_groups_covered(tree: &multiwise::model::FeatureTree, m: &FeatureModel, spec: &GroupSpec, sample: &Sample) {
    let valid = valid_by_sweep(tree);
    let configs = selections(sample);
    for c in &configs {
        assert!(m.satisfied_by(c));
    }
    for g in spec.resolve(m, 6).unwrap() {
        let (v, c) = brute_coverage(&harvest_tuples(&valid, &g.members, g.t), &configs);
        assert_eq!(v, c, "group {} t={} not covered", g.name, g.t);
    }
}

#[test]
fn worked_example_per_group_and_deferred() {
    let m = car();
    let spec = car_groups(&m);
    for defer in [false, true] {
        let options = SamplerOptions {
            defer_completion: defer,
            ..SamplerOptions::default()
        };
        let s = multiwise_sample(&m, &spec, &options).unwrap();
        assert!(s.is_valid_for(&m));
        assert!((2..=3).contains(&s.len()), "size {}", s.len());
        assert_groups_covered(&car_tree(), &m, &spec, &s);
    }
}

#[test]
fn groups_are_observed_in_order() {
    let m = car();
    let mut seen = Vec::new();
    multiwise_sample_observed(&m, &car_groups(&m), &SamplerOptions::default(), |g, s| {
        seen.push((g.name.clone(), s.len()))
    })
    .unwrap();
    let names: Vec<&str> = seen.iter().map(|(n, _)| n.as_str()).collect();
    assert_eq!(names, ["TG_1", "TG_2", "default"]);
    // the default group at t = 0 adds nothing
    assert_eq!(seen[1].1, seen[2].1);
}

#[test]
fn single_group_equals_covering_strategy() {
    let m = car();
    for t in 1..=3 {
        let options = SamplerOptions::default();
        let a = multiwise_sample(&m, &GroupSpec::uniform(&m, t), &options).unwrap();
        let b = covering_strategy(&m, &m.all_features(), t, Sample::new(), &options).unwrap();
        assert_eq!(a, b, "t = {t}");
        assert_eq!(coverage_ratio(&m, a.configurations(), t, &m.all_features()).unwrap().ratio(), 1.0);
    }
}

#[test]
fn baseline_sizes_on_car() {
    let m = car();
    let t2 = multiwise_sample(&m, &GroupSpec::uniform(&m, 2), &SamplerOptions::default()).unwrap();
    let t3 = multiwise_sample(&m, &GroupSpec::uniform(&m, 3), &SamplerOptions::default()).unwrap();
    assert!((4..=11).contains(&t2.len()), "{}", t2.len());
    assert!((9..=27).contains(&t3.len()), "{}", t3.len());
}

#[test]
fn empty_spec_gives_empty_sample() {
    let m = car();
    let spec = GroupSpec { groups: vec![], default_t: 0 };
    assert!(multiwise_sample(&m, &spec, &SamplerOptions::default()).unwrap().is_empty());
    assert!(multiwise_sample(&m, &GroupSpec::uniform(&m, 0), &SamplerOptions::default()).unwrap().is_empty());
}

#[test]
fn group_guarantee_on_random_specs() {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    for i in 0..20 {
        let tree = small_tree(500 + i, 12, 4);
        let m = compile_to_cnf(&tree);
        let spec = random_spec(&m, &mut rng);
        for defer in [false, true] {
            for order in [GroupOrder::Spec, GroupOrder::DescendingT] {
                let options = SamplerOptions {
                    defer_completion: defer,
                    order,
                    ..SamplerOptions::default()
                };
                let s = multiwise_sample(&m, &spec, &options).unwrap();
                assert_groups_covered(&tree, &m, &spec, &s);
            }
        }
    }
}

#[test]
fn other_policies_keep_the_guarantee() {
    let m = car();
    let spec = GroupSpec::uniform(&m, 2);
    for (completion, tuple_order) in [
        (CompletionPolicy::PreferSelect, TupleOrder::Lexicographic),
        (CompletionPolicy::Random { seed: 3 }, TupleOrder::Shuffled),
    ] {
        let options = SamplerOptions {
            completion,
            tuple_order,
            seed: 11,
            ..SamplerOptions::default()
        };
        let s = multiwise_sample(&m, &spec, &options).unwrap();
        assert_groups_covered(&car_tree(), &m, &spec, &s);
        assert_eq!(s, multiwise_sample(&m, &spec, &options).unwrap(), "replay differs");
    }
}

#[test]
fn errors() {
    let m = car();
    let bad = GroupSpec::from_json(&m, r#"{"groups":[{"name":"g","t":1,"features":["Wheel"]}],"default_t":0}"#);
    assert!(matches!(bad, Err(Error::UnknownFeature(_))));
    assert!(matches!(GroupSpec::from_json(&m, "{"), Err(Error::GroupSpec(_))));
    let options = SamplerOptions { max_t: 2, ..SamplerOptions::default() };
    assert!(matches!(
        multiwise_sample(&m, &GroupSpec::uniform(&m, 3), &options),
        Err(Error::StrengthTooLarge { t: 3, max: 2 })
    ));
}

#[test]
fn group_spec_json_round_trip() {
    let m = car();
    let spec = car_groups(&m);
    assert_eq!(GroupSpec::from_json(&m, &spec.to_json(&m)).unwrap(), spec);
}

#[test]
fn sample_file_round_trip() {
    let m = car();
    for spec in [car_groups(&m), GroupSpec::uniform(&m, 3)] {
        let s = multiwise_sample(&m, &spec, &SamplerOptions::default()).unwrap();
        let text = write_sample_file(&m, &s, "car", 0);
        let back = parse_sample_file(&text).unwrap().into_sample(&m).unwrap();
        assert_eq!(back, s);
        assert_eq!(write_sample_file(&m, &back, "car", 0), text);
    }
}
