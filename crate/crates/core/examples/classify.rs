//! Parse a dependency set and a database, then report the structural classes
//! the decision procedures care about.

use cqa::classify::{classify, dependency_graph, fdet_violation};
use cqa::syntax::{parse_database, parse_dependencies};

const DEPS: &str = "
forall v: R(v,v) -> false .
forall x,y,z: P(x,y), T(x,z) -> exists w: R(x,w), w != z .
";

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let (schema, sigma) = parse_dependencies(DEPS)?;
    let db = parse_database("P(a,b). T(a,c). R(a,d). P(e,f). T(e,g). R(e,e).", &schema)?;

    for (i, d) in sigma.iter().enumerate() {
        println!("[{i}] {d}");
    }
    println!("dependency graph: {:?}", dependency_graph(&sigma));

    let c = classify(&sigma, Some(&db.facts));
    println!("{}", serde_json::to_string_pretty(&c)?);

    // one more R fact for a gives the second dependency two head images
    let wider = parse_database("P(a,b). T(a,c). R(a,d). R(a,f).", &schema)?;
    if let Some(v) = fdet_violation(&sigma, &wider.facts) {
        println!(
            "not FDET on the wider database: dependency {} under {} has {} images",
            v.dependency,
            v.substitution,
            v.images.len()
        );
    }
    Ok(())
}
