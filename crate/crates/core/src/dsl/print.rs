use std::fmt::Write;

use super::ast::{Action, Membership, Objects, Predicate, Program, ValueSet};

pub fn print_program(p: &Program) -> String {
    let mut out = String::new();
    out.push_str("Apply(");
    out.push_str(&print_action(&p.action));
    out.push_str(", ");
    print_objects(&p.objects, &mut out);
    out.push(')');
    out
}

pub fn print_action(a: &Action) -> String {
    match a {
        Action::Cover { effect } => format!("Cover({})", effect.name()),
        Action::Remove => "Remove".to_string(),
        Action::Recolor { color } => format!("Recolor({color})"),
        Action::Inpaint { prompt } => format!("Inpaint({})", quote(prompt)),
    }
}

fn print_objects(o: &Objects, out: &mut String) {
    match o {
        Objects::All => out.push_str("All"),
        Objects::Filter(p, inner) => {
            out.push_str("Filter(");
            write_pred(p, out);
            out.push_str(", ");
            print_objects(inner, out);
            out.push(')');
        }
    }
}

pub fn print_predicate(p: &Predicate) -> String {
    let mut out = String::new();
    write_pred(p, &mut out);
    out
}

fn precedence(p: &Predicate) -> u8 {
    match p {
        Predicate::Or(..) => 1,
        Predicate::And(..) => 2,
        Predicate::Not(_) => 3,
        _ => 4,
    }
}

fn write_child(p: &Predicate, parens: bool, out: &mut String) {
    if parens {
        out.push('(');
        write_pred(p, out);
        out.push(')');
    } else {
        write_pred(p, out);
    }
}

fn write_pred(p: &Predicate, out: &mut String) {
    let prec = precedence(p);
    match p {
        Predicate::True => out.push_str("true"),
        Predicate::False => out.push_str("false"),
        Predicate::ClassIs(c) => {
            out.push_str("class(");
            out.push_str(&name(c));
            out.push(')');
        }
        Predicate::Membership(m) => write_membership(m, out),
        Predicate::And(a, b) | Predicate::Or(a, b) => {
            write_child(a, precedence(a) < prec, out);
            out.push_str(if prec == 2 { " && " } else { " || " });
            write_child(b, precedence(b) <= prec, out);
        }
        Predicate::Not(a) => {
            out.push('!');
            write_child(a, precedence(a) < prec, out);
        }
    }
}

fn write_membership(m: &Membership, out: &mut String) {
    out.push_str("x.");
    out.push_str(&name(&m.attribute));
    out.push_str(if m.negated { " notin " } else { " in " });
    match &m.values {
        ValueSet::Symbols(items) => {
            out.push('{');
            for (i, s) in items.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                out.push_str(&name(s));
            }
            out.push('}');
        }
        ValueSet::Intervals(items) => {
            for (i, iv) in items.iter().enumerate() {
                if i > 0 {
                    out.push_str(" | ");
                }
                write!(out, "{iv}").expect("writing to a String cannot fail");
            }
        }
    }
}

pub(crate) fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

fn name(s: &str) -> String {
    if is_identifier(s) {
        s.to_string()
    } else {
        quote(s)
    }
}

fn quote(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}
