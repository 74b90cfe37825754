//! Synthesis of object-selection predicates from labeled examples.
//!
//! Objects are attribute maps. Given positive and negative examples, the
//! engine finds a disjunction of class-guarded conjunctions that selects
//! every positive, no negative, and uses as few clauses as possible, each
//! clause as general as the negatives allow. The search runs over symbolic
//! product lattices of attribute values.
//!
//! ```
//! use lattice_select::{fixtures, synthesize, SynthesisOptions};
//!
//! let dataset = fixtures::motivating_dataset();
//! let report = synthesize(&dataset, &fixtures::motivating_edit(), &SynthesisOptions::default()).unwrap();
//! assert_eq!(report.selected, ["pi7", "pi10", "pi14"]);
//! ```

pub mod budget;
pub mod cover;
pub mod dataset;
pub mod dsl;
pub mod error;
pub mod exec;
pub mod fixtures;
pub mod generate;
pub mod interval;
pub mod lattice;
pub mod oracle;
pub mod representatives;
pub mod search;
pub mod synth;

pub use budget::Budget;
pub use dataset::{build_specification, load_dataset, Dataset, EditRequest, LabelsFile, Specification};
pub use error::{Error, Result};
pub use exec::Execution;
pub use synth::{synthesize, SynthesisMode, SynthesisOptions, SynthesisReport};
