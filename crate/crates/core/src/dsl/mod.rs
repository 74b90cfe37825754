//! The image-manipulation DSL: programs `Apply(action, objects)` whose
//! object sets are filtered by predicates over attributes.

mod ast;
mod eval;
mod metrics;
mod parse;
mod print;
mod transform;

pub use ast::{Action, EditPlan, Effect, Membership, Objects, PlanEntry, Predicate, Program, ValueSet};
pub use eval::{
    check_correctness, eval_predicate, run_program, select, validate_predicate, validate_program,
    Verdict, Violation, ViolationKind,
};
pub use metrics::{ast_metrics, predicate_metrics, ProgramMetrics};
pub use parse::{parse_action, parse_predicate, parse_program};
pub use print::{print_action, print_predicate, print_program};
pub use transform::element_to_predicate;
