//! Parse, print and evaluate first-order sentences over a database and an
//! auxiliary subset, and unify atoms.

use cqa::fo::{evaluate, unify_atoms, EvalContext};
use cqa::model::{Atom, Term};
use cqa::syntax::{parse_database, parse_fo, print_fo};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let db = parse_database("P(a,b). P(b,c). T(c).", &Default::default())?;
    let aux = parse_database("P(a,b).", &Default::default())?;

    for src in [
        "forall x,y: (P(x,y) -> exists z: P(y,z) | T(y))",
        "exists x,y: (P^aux(x,y) & !T(y))",
        "forall x: (T(x) -> x = c)",
    ] {
        let phi = parse_fo(src)?;
        let value = evaluate(&phi, &EvalContext::new(&db.facts, &aux.facts))?;
        println!("{:<48} {value}", print_fo(&phi));
    }

    let a = Atom::new("T", vec![Term::cst("e"), Term::var("z1")]);
    let b = Atom::new("T", vec![Term::var("y"), Term::var("z")]);
    match unify_atoms(&a, &b) {
        Some(u) => println!("mgu of {a} and {b}: {u:?}"),
        None => println!("{a} and {b} do not unify"),
    }
    Ok(())
}
