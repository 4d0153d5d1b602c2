//! Reduction instances with a known answer: graph reachability and Horn
//! satisfiability encoded as weak consistency and repair checking.

use cqa::gadgets::{horn3sat_to_wc, stcon_to_rc, stcon_to_wc, Digraph, HornClause, HornFormula};
use cqa::options::Options;
use cqa::repair::{repair_check, RcMethod};
use cqa::weakcons::{weakly_consistent, WcMethod};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let opts = Options::default();
    let names = |n: usize| (1..=n).map(|i| format!("v{i}")).collect::<Vec<_>>();

    for (edges, t) in [(vec![(0, 1), (1, 2)], 2), (vec![(0, 1), (2, 1)], 2)] {
        let g = Digraph::new(names(3), &edges, 0, t)?;
        let wc = stcon_to_wc(&g);
        let probe_ok = weakly_consistent(&wc.probe, &wc.facts, &wc.sigma, WcMethod::Auto, &opts)?;
        let rc = stcon_to_rc(&g);
        let empty_repair = repair_check(&rc.probe, &rc.facts, &rc.sigma, RcMethod::Auto, &opts)?;
        println!(
            "edges {edges:?}: reachable={} probe weakly consistent={} empty set a repair={}",
            g.reachable(),
            probe_ok.weakly_consistent,
            empty_repair.is_repair
        );
    }

    let clause = |neg: &[&str], pos: Option<&str>| HornClause {
        negative: neg.iter().map(|s| s.to_string()).collect(),
        positive: pos.map(str::to_string),
    };
    let vars = vec!["a".to_string(), "b".to_string()];
    let phi = HornFormula::new(
        vars,
        vec![
            clause(&[], Some("a")),
            clause(&["a"], Some("b")),
            clause(&["a", "b"], None),
        ],
    )?;
    let g = horn3sat_to_wc(&phi);
    let o = weakly_consistent(&g.probe, &g.facts, &g.sigma, WcMethod::Auto, &opts)?;
    println!(
        "horn formula satisfiable={} clause facts weakly consistent={}",
        phi.satisfiable(),
        o.weakly_consistent
    );
    Ok(())
}
