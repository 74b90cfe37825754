use serde::{Deserialize, Serialize};

use super::ast::{EditPlan, Membership, Objects, PlanEntry, Predicate, Program, ValueSet};
use crate::dataset::{AttributeKind, Dataset, ObjectRecord, Specification, Value};
use crate::error::{Error, Result};

pub fn eval_predicate(p: &Predicate, object: &ObjectRecord) -> Result<bool> {
    Ok(match p {
        Predicate::True => true,
        Predicate::False => false,
        Predicate::ClassIs(c) => object.class_name == *c,
        Predicate::Membership(m) => eval_membership(m, object)?,
        Predicate::And(a, b) => eval_predicate(a, object)? && eval_predicate(b, object)?,
        Predicate::Or(a, b) => eval_predicate(a, object)? || eval_predicate(b, object)?,
        Predicate::Not(a) => !eval_predicate(a, object)?,
    })
}

fn eval_membership(m: &Membership, object: &ObjectRecord) -> Result<bool> {
    let value = object
        .value(&m.attribute)
        .ok_or_else(|| Error::UnknownAttribute {
            class: object.class_name.clone(),
            attribute: m.attribute.clone(),
        })?;
    let inside = match (&m.values, value) {
        (ValueSet::Symbols(items), Value::Symbol(s)) => items.iter().any(|i| i == s),
        (ValueSet::Intervals(items), Value::Number(v)) => items.iter().any(|i| i.contains(*v)),
        (ValueSet::Symbols(_), Value::Number(_)) => {
            return Err(type_error(m, "symbol set applied to a numeric value"))
        }
        (ValueSet::Intervals(_), Value::Symbol(_)) => {
            return Err(type_error(m, "interval applied to a categorical value"))
        }
    };
    Ok(inside != m.negated)
}

fn type_error(m: &Membership, message: &str) -> Error {
    Error::TypeMismatch {
        attribute: m.attribute.clone(),
        message: message.to_string(),
    }
}

fn eval_on(p: &Predicate, object: &ObjectRecord) -> Result<bool> {
    eval_predicate(p, object).map_err(|e| Error::Eval {
        object: object.id.clone(),
        source: Box::new(e),
    })
}

/// Indices of the objects selected by `objects`, in dataset order.
pub fn select(objects: &Objects, dataset: &Dataset) -> Result<Vec<usize>> {
    match objects {
        Objects::All => Ok((0..dataset.objects.len()).collect()),
        Objects::Filter(p, inner) => {
            let mut out = Vec::new();
            for i in select(inner, dataset)? {
                if eval_on(p, &dataset.objects[i])? {
                    out.push(i);
                }
            }
            Ok(out)
        }
    }
}

pub fn run_program(program: &Program, dataset: &Dataset) -> Result<EditPlan> {
    Ok(select(&program.objects, dataset)?
        .into_iter()
        .map(|i| PlanEntry {
            object: dataset.objects[i].id.clone(),
            action: program.action.clone(),
        })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ViolationKind {
    PositiveNotSelected,
    NegativeSelected,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub object: String,
    pub kind: ViolationKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub violations: Vec<Violation>,
}

impl Verdict {
    pub fn is_correct(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Every positive is selected and no negative is.
pub fn check_correctness(p: &Predicate, spec: &Specification<'_>) -> Result<Verdict> {
    let objects = &spec.dataset.objects;
    let mut violations = Vec::new();
    for &i in &spec.positives {
        if !eval_on(p, &objects[i])? {
            violations.push(Violation {
                object: objects[i].id.clone(),
                kind: ViolationKind::PositiveNotSelected,
            });
        }
    }
    for &i in &spec.negatives {
        if eval_on(p, &objects[i])? {
            violations.push(Violation {
                object: objects[i].id.clone(),
                kind: ViolationKind::NegativeSelected,
            });
        }
    }
    Ok(Verdict { violations })
}

/// Checks class and attribute names and value kinds against the schemas.
/// A membership is accepted when some class declares the attribute with a
/// matching kind.
pub fn validate_predicate(p: &Predicate, dataset: &Dataset) -> Result<()> {
    match p {
        Predicate::True | Predicate::False => Ok(()),
        Predicate::ClassIs(c) => {
            if dataset.schemas.contains_key(c) {
                Ok(())
            } else {
                Err(Error::UnknownClass(c.clone()))
            }
        }
        Predicate::Membership(m) => {
            let decls: Vec<&AttributeKind> = dataset
                .schemas
                .values()
                .filter_map(|s| s.attribute(&m.attribute))
                .map(|a| &a.kind)
                .collect();
            if decls.is_empty() {
                return Err(Error::UnknownAttribute {
                    class: "*".into(),
                    attribute: m.attribute.clone(),
                });
            }
            let fits = decls.iter().any(|k| {
                matches!(
                    (k, &m.values),
                    (AttributeKind::Categorical { .. }, ValueSet::Symbols(_))
                        | (AttributeKind::Numeric { .. }, ValueSet::Intervals(_))
                )
            });
            if fits {
                Ok(())
            } else {
                Err(type_error(m, "value set kind does not match the attribute"))
            }
        }
        Predicate::And(a, b) | Predicate::Or(a, b) => {
            validate_predicate(a, dataset)?;
            validate_predicate(b, dataset)
        }
        Predicate::Not(a) => validate_predicate(a, dataset),
    }
}

pub fn validate_program(program: &Program, dataset: &Dataset) -> Result<()> {
    program.action.validate()?;
    let mut objects = &program.objects;
    while let Objects::Filter(p, inner) = objects {
        validate_predicate(p, dataset)?;
        objects = inner;
    }
    Ok(())
}
