use std::fmt::Write;

use crate::fo::Formula;
use crate::model::{join, Database, Dependency, FactSet, Schema};

/// Fully parenthesized rendering that `parse_fo` reads back to the same tree.
pub fn print_fo(phi: &Formula) -> String {
    let mut out = String::new();
    write_fo(phi, &mut out);
    out
}

fn write_fo(phi: &Formula, out: &mut String) {
    match phi {
        Formula::True => out.push_str("true"),
        Formula::False => out.push_str("false"),
        Formula::Atom(a) => {
            let _ = write!(out, "{a}");
        }
        Formula::Eq(s, t) => {
            let _ = write!(out, "{s} = {t}");
        }
        Formula::Neq(s, t) => {
            let _ = write!(out, "{s} != {t}");
        }
        Formula::Not(g) => {
            out.push('!');
            write_fo(g, out);
        }
        Formula::And(gs) => write_list(gs, " & ", out),
        Formula::Or(gs) => write_list(gs, " | ", out),
        Formula::Implies(a, b) => {
            out.push('(');
            write_fo(a, out);
            out.push_str(" -> ");
            write_fo(b, out);
            out.push(')');
        }
        Formula::Exists(vs, g) => {
            let _ = write!(out, "exists {}: ", join(vs, ","));
            write_fo(g, out);
        }
        Formula::Forall(vs, g) => {
            let _ = write!(out, "forall {}: ", join(vs, ","));
            write_fo(g, out);
        }
    }
}

fn write_list(gs: &[Formula], sep: &str, out: &mut String) {
    out.push('(');
    for (i, g) in gs.iter().enumerate() {
        if i > 0 {
            out.push_str(sep);
        }
        write_fo(g, out);
    }
    out.push(')');
}

pub fn print_schema(schema: &Schema) -> String {
    schema
        .predicates()
        .map(|(p, n)| format!("{p}/{n}\n"))
        .collect()
}

pub fn print_dependencies(sigma: &[Dependency]) -> String {
    sigma.iter().map(|d| format!("{d}\n")).collect()
}

pub fn print_facts(facts: &FactSet) -> String {
    facts.iter().map(|f| format!("{f}.\n")).collect()
}

pub fn print_database(db: &Database) -> String {
    print_facts(&db.facts)
}
