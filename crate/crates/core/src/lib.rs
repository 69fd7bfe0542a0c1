//! Sampling configurations of feature models so that user-chosen groups of
//! features are covered at their own t-wise interaction strength.
//!
//! ```
//! use multiwise::model::{compile_to_cnf, parse_feature_tree};
//! use multiwise::sampler::{multiwise_sample, GroupSpec, SamplerOptions};
//!
//! let tree = parse_feature_tree("features\n  App\n    optional\n      Log\n      Cache\n").unwrap();
//! let model = compile_to_cnf(&tree);
//! let sample = multiwise_sample(&model, &GroupSpec::uniform(&model, 2), &SamplerOptions::default()).unwrap();
//! assert!(sample.is_valid_for(&model));
//! ```

pub mod cli;
pub mod error;
pub mod experiment;
pub mod interactions;
pub mod model;
pub mod sampler;
pub mod sat;

pub use error::{Error, Result};
