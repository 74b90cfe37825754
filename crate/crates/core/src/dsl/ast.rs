use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::interval::Interval;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Effect {
    Highlight,
    Blackout,
    Blur,
    Mosaic,
}

impl Effect {
    pub const ALL: [Effect; 4] = [Effect::Highlight, Effect::Blackout, Effect::Blur, Effect::Mosaic];

    pub fn name(self) -> &'static str {
        match self {
            Effect::Highlight => "Highlight",
            Effect::Blackout => "Blackout",
            Effect::Blur => "Blur",
            Effect::Mosaic => "Mosaic",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "op")]
pub enum Action {
    Cover { effect: Effect },
    Remove,
    Recolor { color: String },
    Inpaint { prompt: String },
}

impl Action {
    pub fn validate(&self) -> Result<()> {
        match self {
            Action::Recolor { color } => {
                let hex = color.strip_prefix('#').unwrap_or("");
                if hex.len() != 6 || !hex.bytes().all(|b| b.is_ascii_hexdigit()) {
                    return Err(Error::Action(format!("color `{color}` is not #RRGGBB")));
                }
            }
            Action::Inpaint { prompt } if prompt.trim().is_empty() => {
                return Err(Error::Action("inpaint prompt is empty".into()));
            }
            _ => {}
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ValueSet {
    Symbols(Vec<String>),
    /// Disjoint and sorted; never empty.
    Intervals(Vec<Interval>),
}

impl ValueSet {
    pub fn literal_count(&self) -> usize {
        match self {
            ValueSet::Symbols(s) => s.len(),
            ValueSet::Intervals(i) => i.len(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Membership {
    pub attribute: String,
    pub negated: bool,
    pub values: ValueSet,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Predicate {
    True,
    False,
    /// Holds exactly for objects of the named class.
    ClassIs(String),
    Membership(Membership),
    And(Box<Predicate>, Box<Predicate>),
    Or(Box<Predicate>, Box<Predicate>),
    Not(Box<Predicate>),
}

impl Predicate {
    pub fn and(a: Predicate, b: Predicate) -> Predicate {
        Predicate::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Predicate, b: Predicate) -> Predicate {
        Predicate::Or(Box::new(a), Box::new(b))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(a: Predicate) -> Predicate {
        Predicate::Not(Box::new(a))
    }

    pub fn member(attribute: &str, negated: bool, values: ValueSet) -> Predicate {
        Predicate::Membership(Membership {
            attribute: attribute.to_string(),
            negated,
            values,
        })
    }

    /// Left-nested conjunction; `True` when empty.
    pub fn all_of(items: impl IntoIterator<Item = Predicate>) -> Predicate {
        items
            .into_iter()
            .reduce(Predicate::and)
            .unwrap_or(Predicate::True)
    }

    /// Left-nested disjunction; `False` when empty.
    pub fn any_of(items: impl IntoIterator<Item = Predicate>) -> Predicate {
        items
            .into_iter()
            .reduce(Predicate::or)
            .unwrap_or(Predicate::False)
    }

    /// The top-level disjuncts.
    pub fn clauses(&self) -> Vec<&Predicate> {
        match self {
            Predicate::Or(a, b) => {
                let mut out = a.clauses();
                out.extend(b.clauses());
                out
            }
            Predicate::False => Vec::new(),
            other => vec![other],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Objects {
    All,
    Filter(Box<Predicate>, Box<Objects>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Program {
    pub action: Action,
    pub objects: Objects,
}

impl Program {
    /// `Apply(action, Filter(φ, All))`.
    pub fn filter(action: Action, predicate: Predicate) -> Program {
        Program {
            action,
            objects: Objects::Filter(Box::new(predicate), Box::new(Objects::All)),
        }
    }
}

impl fmt::Display for Program {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&super::print_program(self))
    }
}

impl fmt::Display for Predicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&super::print_predicate(self))
    }
}

impl fmt::Display for Action {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&super::print_action(self))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlanEntry {
    pub object: String,
    pub action: Action,
}

/// The evaluated program: selected objects in dataset order.
pub type EditPlan = Vec<PlanEntry>;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn action_json_uses_op_tag() {
        let json = serde_json::to_string(&Action::Remove).unwrap();
        assert_eq!(json, r#"{"op":"Remove"}"#);
        let cover: Action = serde_json::from_str(r#"{"op":"Cover","effect":"Blur"}"#).unwrap();
        assert_eq!(cover, Action::Cover { effect: Effect::Blur });
        let plan = vec![PlanEntry {
            object: "pi7".into(),
            action: Action::Remove,
        }];
        assert_eq!(
            serde_json::to_string(&plan).unwrap(),
            r#"[{"object":"pi7","action":{"op":"Remove"}}]"#
        );
    }

    #[test]
    fn action_validation() {
        assert!(Action::Recolor { color: "#ff00AA".into() }.validate().is_ok());
        assert!(Action::Recolor { color: "ff0000".into() }.validate().is_err());
        assert!(Action::Recolor { color: "#ff000".into() }.validate().is_err());
        assert!(Action::Inpaint { prompt: " ".into() }.validate().is_err());
        assert!(Action::Inpaint { prompt: "a dog".into() }.validate().is_ok());
    }

    #[test]
    fn clause_split() {
        let a = Predicate::ClassIs("A".into());
        let b = Predicate::ClassIs("B".into());
        let c = Predicate::True;
        let p = Predicate::any_of([a.clone(), b.clone(), c.clone()]);
        assert_eq!(p.clauses(), vec![&a, &b, &c]);
        assert!(Predicate::False.clauses().is_empty());
        assert_eq!(Predicate::all_of([]), Predicate::True);
    }
}
