//! Random instances checked against the brute-force repair oracle, the way
//! the test suites do it, on a handful of seeds.

use cqa::classify::classify;
use cqa::entail::{entails, EntMethod, Semantics};
use cqa::model::holds;
use cqa::options::Options;
use cqa::random::{random_instance, random_query, Profile};
use cqa::repair::enumerate_repairs;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let opts = Options::default();
    let profile = Profile::general(8).acyclic().linear();
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    for _ in 0..5 {
        let i = random_instance(&mut rng, &profile);
        let q = random_query(&mut rng, &i.schema, 2, 2);
        let rs = enumerate_repairs(&i.facts, &i.sigma, &opts)?;
        let class = classify(&i.sigma, Some(&i.facts));
        println!(
            "{} deps, {} facts, {} repairs, query {q}",
            i.sigma.len(),
            i.facts.len(),
            rs.repairs.len()
        );
        for sem in Semantics::ALL.iter().copied() {
            let oracle = match sem {
                Semantics::AllRep => rs.repairs.iter().all(|r| holds(&q, r)),
                Semantics::IntRep => holds(&q, &rs.intersection),
            };
            for &m in EntMethod::ALL
                .iter()
                .filter(|m| m.admissible(&class, sem).is_ok())
            {
                let got = entails(&i.facts, &i.sigma, &q, sem, m, &opts)?.entailed;
                let mark = if got == oracle { "" } else { "  <- disagrees" };
                println!("  {sem} {m:<20} {got}{mark}");
            }
        }
    }
    Ok(())
}
