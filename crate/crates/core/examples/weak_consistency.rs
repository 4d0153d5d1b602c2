//! Weak consistency: can a subset grow into a consistent subset of the
//! database? Every method admissible for the class gives the same answer.

use cqa::classify::classify;
use cqa::options::Options;
use cqa::syntax::{parse_database, parse_dependencies};
use cqa::weakcons::{forward_closure, unique_repair_linear, weakly_consistent, WcMethod};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let opts = Options::default();

    // acyclic and FDET on this database
    let (schema, sigma) = parse_dependencies(
        "forall v: R(v,v) -> false .
         forall x,y,z: P(x,y), T(x,z) -> exists w: R(x,w), w != z .",
    )?;
    let db = parse_database("P(a,b). T(a,c). R(a,d). P(e,f). T(e,g). R(e,e).", &schema)?;
    let class = classify(&sigma, Some(&db.facts));
    for subset in ["P(a,b). T(a,c).", "P(e,f). T(e,g)."] {
        let s = parse_database(subset, &schema)?.facts;
        let fc = forward_closure(&s, &db.facts, &sigma)?;
        println!("{subset}  forward closure has {} facts", fc.closure.len());
        for &m in WcMethod::ALL
            .iter()
            .filter(|m| m.admissible(&class).is_ok())
        {
            let o = weakly_consistent(&s, &db.facts, &sigma, m, &opts)?;
            println!("  {m:<24} {}", o.weakly_consistent);
        }
    }

    // acyclic and linear: a unique repair decides everything
    let (schema, sigma) = parse_dependencies(
        "forall x,y: P(x,y) -> exists z: T(y,z), y != z .
         forall x,y: T(x,y) -> exists v,w: R(x,v,w) .",
    )?;
    let db = parse_database("P(a,b). T(b,c). T(a,d). T(a,e). R(a,d,b).", &schema)?;
    let r = unique_repair_linear(&db.facts, &sigma)?;
    println!(
        "unique repair: {}",
        cqa::syntax::print_facts(&r).replace('\n', " ")
    );
    for subset in ["T(a,e).", "P(a,b). T(b,c)."] {
        let s = parse_database(subset, &schema)?.facts;
        let o = weakly_consistent(&s, &db.facts, &sigma, WcMethod::Auto, &opts)?;
        println!("{subset:<18} {} via {}", o.weakly_consistent, o.method);
    }
    Ok(())
}
