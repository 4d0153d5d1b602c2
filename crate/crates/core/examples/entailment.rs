//! Query entailment under the two repair semantics: true in every repair
//! (AllRep) versus true in the intersection of the repairs (IntRep).

use cqa::entail::{entails, EntMethod, Semantics};
use cqa::options::Options;
use cqa::syntax::{parse_database, parse_dependencies, parse_query};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let (schema, sigma) = parse_dependencies(
        "forall x,y,z: P(x,y), P(x,z), y != z -> false .
         forall x: T(x) -> exists y: P(y,x) .",
    )?;
    let db = parse_database("P(c,a). P(c,b). P(d,c). T(a). T(b).", &schema)?;
    let opts = Options::default();

    // every repair keeps one of P(c,a), P(c,b), but no single one survives in all
    let q = parse_query("exists x: P(c,x)", &db.schema)?;
    for sem in Semantics::ALL.iter().copied() {
        let o = entails(&db.facts, &sigma, &q, sem, EntMethod::Auto, &opts)?;
        println!("{q}  {sem}: {} (method {})", o.entailed, o.method);
        println!("  {}", serde_json::to_string(&o)?);
    }

    let q = parse_query("exists x: T(x) | exists y: P(y,y)", &db.schema)?;
    let o = entails(
        &db.facts,
        &sigma,
        &q,
        Semantics::AllRep,
        EntMethod::Alg2AllRep,
        &opts,
    )?;
    println!("{q}  allrep via alg2: {}", o.entailed);

    let fact = cqa::model::Fact::new("P", &["d", "c"]);
    let o = cqa::entail::instance_check(&db.facts, &sigma, &fact, EntMethod::Auto, &opts)?;
    println!("{fact} in every repair: {}", o.entailed);
    Ok(())
}
