//! The first-order rewritings, printed and evaluated. Auxiliary atoms
//! `p^aux(..)` range over the subset under test.

use cqa::classify::build_check_fdet;
use cqa::entail::{build_qent, build_qent_al};
use cqa::fo::{evaluate, EvalContext};
use cqa::model::FactSet;
use cqa::options::Options;
use cqa::repair::build_check_repair;
use cqa::syntax::{parse_database, parse_dependencies, parse_query, print_fo};
use cqa::weakcons::{build_wcons, build_wcons_al};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let (schema, sigma) = parse_dependencies(
        "forall v: R(v,v) -> false .
         forall x,y,z: P(x,y), T(x,z) -> exists w: R(x,w), w != z .",
    )?;
    let db = parse_database("P(a,b). T(a,c). R(a,d). P(e,f). T(e,g). R(e,e).", &schema)?;

    let wcons = build_wcons(&sigma)?;
    println!("WCons:\n  {}", print_fo(&wcons));
    for subset in ["P(a,b). T(a,c).", "P(e,f). T(e,g)."] {
        let s = parse_database(subset, &schema)?.facts;
        println!(
            "  on {subset}: {}",
            evaluate(&wcons, &EvalContext::new(&db.facts, &s))?
        );
    }

    let none = FactSet::new();
    let check_fdet = build_check_fdet(&sigma);
    println!(
        "CheckFDET holds: {}",
        evaluate(&check_fdet, &EvalContext::new(&db.facts, &none))?
    );
    println!("CheckRepair:\n  {}", print_fo(&build_check_repair(&sigma)?));

    let q = parse_query("exists z: T(e,z)", &db.schema)?;
    let qent = build_qent(&q, &sigma, &Options::default())?;
    println!(
        "QEnt for {q}: {} implications, value {}",
        print_fo(&qent).matches(" -> ").count(),
        evaluate(&qent, &EvalContext::new(&db.facts, &none))?
    );

    let (schema, sigma) = parse_dependencies(
        "forall x,y: P(x,y) -> exists z: T(y,z), y != z .
         forall x,y: T(x,y) -> exists v,w: R(x,v,w) .",
    )?;
    let db = parse_database("P(a,b). T(b,c). T(a,d). T(a,e). R(a,d,b).", &schema)?;
    println!("WCons^AL:\n  {}", print_fo(&build_wcons_al(&sigma)?));
    for src in [
        "exists x,y,z: T(x,y), T(x,z), y != z",
        "exists x,y,z: P(x,y), R(x,y,z)",
    ] {
        let q = parse_query(src, &db.schema)?;
        let phi = build_qent_al(&q, &sigma)?;
        println!(
            "QEnt^AL {}\n  = {}",
            print_fo(&phi),
            evaluate(&phi, &EvalContext::new(&db.facts, &none))?
        );
    }
    Ok(())
}
