use serde::{Deserialize, Serialize};

use super::ast::{Action, Objects, Predicate, Program};

/// Size and operator counts of a program.
///
/// Every grammar node counts 1, an attribute reference 1, and each symbol or
/// interval literal 1. Actions with an argument count the argument too, as
/// does `class(τ)`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProgramMetrics {
    pub ast_size: usize,
    pub count_and: usize,
    pub count_or: usize,
    pub count_in: usize,
    pub count_notin: usize,
}

pub fn ast_metrics(program: &Program) -> ProgramMetrics {
    let mut m = ProgramMetrics {
        ast_size: 1,
        ..Default::default()
    };
    m.ast_size += match program.action {
        Action::Remove => 1,
        _ => 2,
    };
    let mut objects = &program.objects;
    loop {
        m.ast_size += 1;
        match objects {
            Objects::All => break,
            Objects::Filter(p, inner) => {
                predicate_metrics(p, &mut m);
                objects = inner;
            }
        }
    }
    m
}

pub fn predicate_metrics(p: &Predicate, m: &mut ProgramMetrics) {
    m.ast_size += 1;
    match p {
        Predicate::True | Predicate::False => {}
        Predicate::ClassIs(_) => m.ast_size += 1,
        Predicate::Membership(mem) => {
            m.ast_size += 1 + mem.values.literal_count();
            if mem.negated {
                m.count_notin += 1;
            } else {
                m.count_in += 1;
            }
        }
        Predicate::And(a, b) => {
            m.count_and += 1;
            predicate_metrics(a, m);
            predicate_metrics(b, m);
        }
        Predicate::Or(a, b) => {
            m.count_or += 1;
            predicate_metrics(a, m);
            predicate_metrics(b, m);
        }
        Predicate::Not(a) => predicate_metrics(a, m),
    }
}
