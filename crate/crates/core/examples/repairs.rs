//! Enumerate the repairs of a small inconsistent database and check
//! candidate subsets with each repair-checking method.

use cqa::options::Options;
use cqa::repair::{enumerate_repairs, repair_check, RcMethod};
use cqa::syntax::{parse_database, parse_dependencies};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // a key on P, and every T value must occur as a P value
    let (schema, sigma) = parse_dependencies(
        "forall x,y,z: P(x,y), P(x,z), y != z -> false .
         forall x: T(x) -> exists y: P(y,x) .",
    )?;
    let db = parse_database("P(c,a). P(c,b). P(d,c). T(a). T(b).", &schema)?;
    let opts = Options::default();

    let rs = enumerate_repairs(&db.facts, &sigma, &opts)?;
    for r in &rs.repairs {
        println!("repair: {}", cqa::syntax::print_facts(r).replace('\n', " "));
    }
    println!(
        "intersection: {}",
        cqa::syntax::print_facts(&rs.intersection).replace('\n', " ")
    );

    for candidate in ["P(c,a). P(d,c). T(a).", "P(d,c).", "P(c,a). P(c,b)."] {
        let s = parse_database(candidate, &schema)?.facts;
        for m in [RcMethod::Brute, RcMethod::GeneralWc, RcMethod::AcyclicLocal] {
            let o = repair_check(&s, &db.facts, &sigma, m, &opts)?;
            let blocking = o
                .blocking_fact
                .map(|f| format!(", add {f}"))
                .unwrap_or_default();
            println!("{candidate:<24} {m:<14} repair={}{blocking}", o.is_repair);
        }
    }
    Ok(())
}
