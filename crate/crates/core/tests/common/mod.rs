//! Random suites that compare every admissible method with the exhaustive
//! repair oracle. Shared by the integration tests and the acceptance runner.

#![allow(dead_code)]

use std::fmt;

use cqa::classify::{build_check_fdet, classify, is_fdet};
use cqa::entail::{
    build_qent, build_qent_al, entails, entails_alg4, subset_bound, EntMethod, Semantics,
};
use cqa::fo::{evaluate, EvalContext};
use cqa::model::{holds, FactSet};
use cqa::options::Options;
use cqa::random::{random_instance, random_query, random_subset, Instance, Profile};
use cqa::repair::{build_check_repair, enumerate_repairs, repair_check, RcMethod, RepairSet};
use cqa::weakcons::{
    build_wcons, build_wcons_al, forward_closure, unique_repair_linear, weakly_consistent, WcMethod,
};
use cqa::Error;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Outcome of a suite: how many comparisons ran and which ones disagreed.
#[derive(Default, Debug)]
pub struct Report {
    pub instances: usize,
    pub checks: usize,
    /// Comparisons a method declined for size reasons.
    pub declined: usize,
    pub mismatches: Vec<String>,
}

impl Report {
    pub fn ok(&self) -> bool {
        self.mismatches.is_empty() && self.checks > 0
    }

    fn check(&mut self, what: impl FnOnce() -> String, got: bool, want: bool) {
        self.checks += 1;
        if got != want && self.mismatches.len() < 20 {
            self.mismatches
                .push(format!("{}: got {got}, oracle {want}", what()));
        }
    }

    fn absorb(&mut self, other: Report) {
        self.instances += other.instances;
        self.checks += other.checks;
        self.declined += other.declined;
        self.mismatches.extend(other.mismatches);
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} instances, {} checks, {} declined, {} mismatches",
            self.instances,
            self.checks,
            self.declined,
            self.mismatches.len()
        )?;
        for m in &self.mismatches {
            write!(f, "\n  {m}")?;
        }
        Ok(())
    }
}

fn describe(i: &Instance) -> String {
    let deps: Vec<String> = i.sigma.iter().map(|d| d.to_string()).collect();
    let facts: Vec<String> = i.facts.iter().map(|f| f.to_string()).collect();
    format!("[{}] D={{{}}}", deps.join(" "), facts.join(" "))
}

fn show(s: &FactSet) -> String {
    let v: Vec<String> = s.iter().map(|f| f.to_string()).collect();
    format!("{{{}}}", v.join(" "))
}

/// The named classes of the agreement suite.
pub fn classes() -> Vec<(&'static str, Profile)> {
    let small = Profile::general(10).max_deps(4);
    vec![
        ("general", Profile::general(8)),
        ("linear", small.clone().linear()),
        ("fdet", small.clone().fdet()),
        ("acyclic", small.clone().acyclic()),
        ("linear+fdet", small.clone().linear().fdet()),
        ("acyclic+fdet", small.clone().acyclic().fdet()),
        ("acyclic+linear", small.clone().acyclic().linear()),
    ]
}

/// Subsets worth asking about: random ones, the repairs, the intersection and
/// repairs with one fact removed or added.
fn probes(rng: &mut ChaCha8Rng, i: &Instance, rs: &RepairSet) -> Vec<FactSet> {
    let mut out = vec![
        random_subset(rng, &i.facts),
        FactSet::new(),
        rs.intersection.clone(),
    ];
    for r in rs.repairs.iter().take(2) {
        out.push(r.clone());
        if let Some(f) = r.iter().next() {
            let mut smaller = r.clone();
            smaller.remove(f);
            out.push(smaller);
        }
        if let Some(f) = i.facts.difference(r).next() {
            let mut larger = r.clone();
            larger.insert(f.clone());
            out.push(larger);
        }
    }
    out.sort();
    out.dedup();
    out
}

/// The query-entailment rewriting quantifies over sets of up to `K` atoms,
/// so its sentence is only evaluated where `K` is small; larger instances
/// count as declined.
pub const QENT_MAX_BOUND: u128 = 4;

/// Every admissible method for weak consistency, repair checking and both
/// entailment semantics against the repair oracle.
pub fn agreement(profile: &Profile, n: usize, seed: u64) -> Report {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let opts = Options::default();
    let mut rep = Report::default();
    for _ in 0..n {
        let i = random_instance(&mut rng, profile);
        rep.instances += 1;
        let class = classify(&i.sigma, Some(&i.facts));
        let rs = enumerate_repairs(&i.facts, &i.sigma, &opts).expect("under the cap");
        for s in probes(&mut rng, &i, &rs) {
            let wc_oracle = rs.repairs.iter().any(|r| s.is_subset(r));
            for &m in WcMethod::ALL
                .iter()
                .filter(|m| m.admissible(&class).is_ok())
            {
                let got = weakly_consistent(&s, &i.facts, &i.sigma, m, &opts)
                    .expect("admissible")
                    .weakly_consistent;
                rep.check(
                    || format!("wc {m} {} on {}", show(&s), describe(&i)),
                    got,
                    wc_oracle,
                );
            }
            let rc_oracle = rs.contains(&s);
            for &m in RcMethod::ALL
                .iter()
                .filter(|m| m.admissible(&class).is_ok())
            {
                let got = repair_check(&s, &i.facts, &i.sigma, m, &opts)
                    .expect("admissible")
                    .is_repair;
                rep.check(
                    || format!("rc {m} {} on {}", show(&s), describe(&i)),
                    got,
                    rc_oracle,
                );
            }
        }
        let q = random_query(&mut rng, &i.schema, 3, 2);
        for &sem in Semantics::ALL {
            let oracle = match sem {
                Semantics::AllRep => rs.repairs.iter().all(|r| holds(&q, r)),
                Semantics::IntRep => holds(&q, &rs.intersection),
            };
            for &m in EntMethod::ALL
                .iter()
                .filter(|m| m.admissible(&class, sem).is_ok())
            {
                if m == EntMethod::RewriteQent && subset_bound(&i.sigma).2 > QENT_MAX_BOUND {
                    rep.declined += 1;
                    continue;
                }
                match entails(&i.facts, &i.sigma, &q, sem, m, &opts) {
                    Ok(o) => rep.check(
                        || format!("entail {sem} {m} {q} on {}", describe(&i)),
                        o.entailed,
                        oracle,
                    ),
                    Err(Error::FormulaTooLarge { .. } | Error::InstanceTooLarge { .. }) => {
                        rep.declined += 1
                    }
                    Err(e) => rep.mismatches.push(format!("entail {sem} {m}: error {e}")),
                }
            }
        }
    }
    rep
}

/// Each rewriting evaluated against its algorithmic counterpart.
pub fn rewriting_parity(n: usize, seed: u64) -> Report {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let opts = Options::default();
    let mut rep = Report::default();
    let none = FactSet::new();
    let acyclic_fdet = Profile::general(10).max_deps(4).acyclic().fdet();
    let acyclic_linear = Profile::general(10).max_deps(4).acyclic().linear();
    // k^(h+1) <= 4 keeps the atom-set enumeration small: linear bodies, or a
    // single dependency with two body atoms
    let small_bound = Profile::general(8).max_deps(1).acyclic().fdet();
    let small_linear = Profile::general(8).max_deps(4).acyclic().fdet().linear();
    let general = Profile::general(8);

    for _ in 0..n {
        // WCons against the forward closure; CheckRepair against the oracle
        let i = random_instance(&mut rng, &acyclic_fdet);
        rep.instances += 1;
        let wcons = build_wcons(&i.sigma).expect("acyclic");
        let check_repair = build_check_repair(&i.sigma).expect("acyclic");
        let rs = enumerate_repairs(&i.facts, &i.sigma, &opts).expect("under the cap");
        for s in probes(&mut rng, &i, &rs) {
            let fc = forward_closure(&s, &i.facts, &i.sigma).expect("fdet");
            let want = cqa::model::consistent(&fc.closure, &i.sigma);
            let got = evaluate(&wcons, &EvalContext::new(&i.facts, &s)).expect("sentence");
            rep.check(
                || format!("WCons {} on {}", show(&s), describe(&i)),
                got,
                want,
            );
            let got = cqa::repair::repair_check_sentence(&check_repair, &s, &i.facts, &i.sigma)
                .expect("sentence");
            rep.check(
                || format!("CheckRepair {} on {}", show(&s), describe(&i)),
                got,
                rs.contains(&s),
            );
        }
        let got = evaluate(
            &build_check_fdet(&i.sigma),
            &EvalContext::new(&i.facts, &none),
        )
        .unwrap();
        rep.check(
            || format!("CheckFDET on {}", describe(&i)),
            got,
            is_fdet(&i.sigma, &i.facts),
        );

        // WCons^AL against the unique repair; QEnt^AL against evaluation on it
        let i = random_instance(&mut rng, &acyclic_linear);
        rep.instances += 1;
        let wcons_al = build_wcons_al(&i.sigma).expect("acyclic linear");
        let check_repair = build_check_repair(&i.sigma).expect("acyclic");
        let r = unique_repair_linear(&i.facts, &i.sigma).expect("linear");
        let rs = enumerate_repairs(&i.facts, &i.sigma, &opts).expect("under the cap");
        for s in probes(&mut rng, &i, &rs) {
            let got = evaluate(&wcons_al, &EvalContext::new(&i.facts, &s)).expect("sentence");
            rep.check(
                || format!("WConsAL {} on {}", show(&s), describe(&i)),
                got,
                s.is_subset(&r),
            );
            let got = cqa::repair::repair_check_sentence(&check_repair, &s, &i.facts, &i.sigma)
                .expect("sentence");
            rep.check(
                || format!("CheckRepair {} on {}", show(&s), describe(&i)),
                got,
                rs.contains(&s),
            );
        }
        let q = random_query(&mut rng, &i.schema, 3, 2);
        let phi = build_qent_al(&q, &i.sigma).expect("acyclic linear");
        let got = evaluate(&phi, &EvalContext::new(&i.facts, &none)).expect("sentence");
        rep.check(
            || format!("QEntAL {q} on {}", describe(&i)),
            got,
            holds(&q, &r),
        );
        // CheckFDET also on instances that may violate it
        let got = evaluate(
            &build_check_fdet(&i.sigma),
            &EvalContext::new(&i.facts, &none),
        )
        .unwrap();
        rep.check(
            || format!("CheckFDET on {}", describe(&i)),
            got,
            is_fdet(&i.sigma, &i.facts),
        );

        // and on unrestricted dependency sets
        let i = random_instance(&mut rng, &general);
        rep.instances += 1;
        let got = evaluate(
            &build_check_fdet(&i.sigma),
            &EvalContext::new(&i.facts, &none),
        )
        .unwrap();
        rep.check(
            || format!("CheckFDET on {}", describe(&i)),
            got,
            is_fdet(&i.sigma, &i.facts),
        );

        // QEnt against alg4 where the atom-set enumeration is small
        let profile = if rng_bool(&mut rng) {
            &small_bound
        } else {
            &small_linear
        };
        let i = random_instance(&mut rng, profile);
        rep.instances += 1;
        let (_, _, bound) = subset_bound(&i.sigma);
        if bound <= QENT_MAX_BOUND {
            let q = random_query(&mut rng, &i.schema, 2, 2);
            match build_qent(&q, &i.sigma, &opts) {
                Ok(phi) => {
                    let got = evaluate(&phi, &EvalContext::new(&i.facts, &none)).expect("sentence");
                    let (want, _) = entails_alg4(&i.facts, &i.sigma, &q, &opts).expect("alg4");
                    rep.check(|| format!("QEnt {q} on {}", describe(&i)), got, want);
                }
                Err(Error::FormulaTooLarge { .. }) => rep.declined += 1,
                Err(e) => rep.mismatches.push(format!("QEnt: error {e}")),
            }
        } else {
            rep.declined += 1;
        }
    }
    rep
}

fn rng_bool(rng: &mut ChaCha8Rng) -> bool {
    use rand::Rng;
    rng.gen_bool(0.5)
}

/// Runs `agreement` over every class.
pub fn agreement_all(n: usize, seed: u64) -> Vec<(&'static str, Report)> {
    classes()
        .into_iter()
        .enumerate()
        .map(|(k, (name, p))| (name, agreement(&p, n, seed + k as u64)))
        .collect()
}

pub fn merge(reports: Vec<(&'static str, Report)>) -> Report {
    let mut all = Report::default();
    for (name, mut r) in reports {
        for m in &mut r.mismatches {
            *m = format!("[{name}] {m}");
        }
        all.absorb(r);
    }
    all
}

/// Reachability against both STCON gadgets, Horn satisfiability against the
/// Horn gadget.
pub fn gadget_fidelity(graphs: usize, formulas: usize, seed: u64) -> Report {
    use cqa::gadgets::{horn3sat_to_wc, stcon_to_rc, stcon_to_wc, Digraph, HornFormula};
    use rand::Rng;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let opts = Options::default();
    let mut rep = Report::default();
    for _ in 0..graphs {
        let density = rng.gen_range(0.05..0.5);
        let g = Digraph::random(&mut rng, 8, density);
        rep.instances += 1;
        let reach = g.reachable();
        let wc = stcon_to_wc(&g);
        let got = weakly_consistent(&wc.probe, &wc.facts, &wc.sigma, WcMethod::Auto, &opts)
            .expect("linear")
            .weakly_consistent;
        rep.check(|| format!("stcon wc {g:?}"), !got, reach);
        let rc = stcon_to_rc(&g);
        let got = repair_check(&rc.probe, &rc.facts, &rc.sigma, RcMethod::Auto, &opts)
            .expect("linear")
            .is_repair;
        rep.check(|| format!("stcon rc {g:?}"), got, reach);
    }
    for _ in 0..formulas {
        let clauses = rng.gen_range(1..=10);
        let phi = HornFormula::random(&mut rng, 6, clauses);
        rep.instances += 1;
        let g = horn3sat_to_wc(&phi);
        let got = weakly_consistent(&g.probe, &g.facts, &g.sigma, WcMethod::Auto, &opts)
            .expect("full")
            .weakly_consistent;
        rep.check(|| format!("horn {phi:?}"), got, phi.satisfiable());
    }
    rep
}

/// Linear dependencies and fact queries make the two semantics coincide, and
/// IntRep entailment always implies AllRep entailment.
pub fn structural(n: usize, seed: u64) -> Report {
    use cqa::entail::fact_query;
    use rand::seq::IteratorRandom;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let opts = Options::default();
    let mut rep = Report::default();
    let run = |facts: &FactSet, sigma: &[cqa::model::Dependency], q: &cqa::model::Ucq, sem| {
        entails(facts, sigma, q, sem, EntMethod::Auto, &opts)
            .expect("auto always answers")
            .entailed
    };
    for (k, (name, p)) in classes().into_iter().enumerate() {
        let mut rng_k = ChaCha8Rng::seed_from_u64(seed + k as u64);
        for _ in 0..n {
            let i = random_instance(&mut rng_k, &p);
            rep.instances += 1;
            let linear = classify(&i.sigma, None).linear;
            let q = random_query(&mut rng_k, &i.schema, 3, 2);
            let all = run(&i.facts, &i.sigma, &q, Semantics::AllRep);
            let int = run(&i.facts, &i.sigma, &q, Semantics::IntRep);
            rep.check(
                || format!("[{name}] intrep implies allrep {q} on {}", describe(&i)),
                !int || all,
                true,
            );
            if linear {
                rep.check(
                    || format!("[{name}] linear {q} on {}", describe(&i)),
                    int,
                    all,
                );
            }
            if let Some(f) = i.facts.iter().choose(&mut rng) {
                let fq = fact_query(f);
                let all = run(&i.facts, &i.sigma, &fq, Semantics::AllRep);
                let int = run(&i.facts, &i.sigma, &fq, Semantics::IntRep);
                rep.check(
                    || format!("[{name}] fact query {fq} on {}", describe(&i)),
                    int,
                    all,
                );
            }
        }
    }
    rep
}

/// Path of a file under `tests/fixtures`.
pub fn fixture(name: &str) -> String {
    format!("{}/tests/fixtures/{name}", env!("CARGO_MANIFEST_DIR"))
}

/// One invocation of every command (and most methods) on the fixtures.
pub fn cli_invocations() -> Vec<Vec<String>> {
    let f = fixture;
    let mut runs: Vec<Vec<String>> = vec![
        vec![
            "classify".into(),
            "-c".into(),
            f("ex2.ded"),
            "-d".into(),
            f("ex2.db"),
        ],
        vec![
            "classify".into(),
            "-c".into(),
            f("ex3.ded"),
            "--json".into(),
        ],
        vec![
            "consistent".into(),
            "-c".into(),
            f("ex1.ded"),
            "-d".into(),
            f("ex1.db"),
        ],
        vec![
            "consistent".into(),
            "-c".into(),
            f("empty.ded"),
            "-d".into(),
            f("any.db"),
            "--json".into(),
        ],
        vec![
            "fdet".into(),
            "-c".into(),
            f("ex2.ded"),
            "-d".into(),
            f("ex2.db"),
            "--json".into(),
        ],
        vec![
            "repairs".into(),
            "-c".into(),
            f("ex1.ded"),
            "-d".into(),
            f("ex1.db"),
            "--json".into(),
        ],
        vec![
            "repairs".into(),
            "-c".into(),
            f("ex3.ded"),
            "-d".into(),
            f("ex3.db"),
        ],
    ];
    for m in WcMethod::ALL {
        for (deps, db, sub) in [
            ("ex2.ded", "ex2.db", "ex2.bad.db"),
            ("ex3.ded", "ex3.db", "ex3.good.db"),
        ] {
            runs.push(vec![
                "weakcons".into(),
                "-c".into(),
                f(deps),
                "-d".into(),
                f(db),
                "-s".into(),
                f(sub),
                "--method".into(),
                m.to_string(),
                "--json".into(),
            ]);
        }
    }
    for m in RcMethod::ALL {
        runs.push(vec![
            "repaircheck".into(),
            "-c".into(),
            f("ex1.ded"),
            "-d".into(),
            f("ex1.db"),
            "-s".into(),
            f("ex1.repair.db"),
            "--method".into(),
            m.to_string(),
            "--json".into(),
        ]);
    }
    for m in EntMethod::ALL {
        for sem in Semantics::ALL {
            runs.push(vec![
                "entail".into(),
                "-c".into(),
                f("ex2.ded"),
                "-d".into(),
                f("ex2.db"),
                "-q".into(),
                f("ex2.q"),
                "--semantics".into(),
                sem.to_string(),
                "--method".into(),
                m.to_string(),
                "--json".into(),
            ]);
        }
    }
    runs.push(vec![
        "entail".into(),
        "-c".into(),
        f("ex1.ded"),
        "-d".into(),
        f("ex1.db"),
        "-q".into(),
        "exists x: P(c,x)".into(),
        "--semantics".into(),
        "intrep".into(),
    ]);
    for target in ["check-fdet", "wcons", "check-repair", "qent"] {
        runs.push(vec![
            "rewrite".into(),
            "--target".into(),
            target.into(),
            "-c".into(),
            f("ex2.ded"),
            "-d".into(),
            f("ex2.db"),
            "--query-file".into(),
            f("ex2.q"),
            "--aux-subset".into(),
            f("ex2.good.db"),
        ]);
    }
    for target in ["wcons-al", "qent-al"] {
        runs.push(vec![
            "rewrite".into(),
            "--target".into(),
            target.into(),
            "-c".into(),
            f("ex3.ded"),
            "-q".into(),
            f("q1.q"),
        ]);
    }
    runs.push(vec![
        "oracle".into(),
        "-c".into(),
        f("ex3.ded"),
        "-d".into(),
        f("ex3.db"),
        "-s".into(),
        f("ex3.bad.db"),
        "-q".into(),
        f("q2.q"),
        "--json".into(),
    ]);
    runs
}

/// Output of one run of the binary: exit code, stdout, stderr.
pub fn run_cli(args: &[String]) -> (i32, String, String) {
    let out = std::process::Command::new(env!("CARGO_BIN_EXE_cqa"))
        .args(args)
        .env_remove("CQA_CAP")
        .output()
        .expect("the binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&out.stdout).into_owned(),
        String::from_utf8_lossy(&out.stderr).into_owned(),
    )
}

/// Runs every invocation twice, and the gadget generators twice into the
/// same directory, comparing output byte for byte.
pub fn determinism() -> Report {
    let mut rep = Report::default();
    for args in cli_invocations() {
        rep.instances += 1;
        let a = run_cli(&args);
        let b = run_cli(&args);
        rep.check(|| format!("cqa {}", args.join(" ")), a == b, true);
    }
    let dir = tempfile::tempdir().expect("temporary directory");
    for kind in ["stcon", "horn3sat"] {
        let out = dir.path().join(kind).display().to_string();
        let args: Vec<String> = [
            "gadget", kind, "--seed", "11", "--size", "6", "--out", &out, "--json",
        ]
        .iter()
        .map(|s| s.to_string())
        .collect();
        let snapshot = || {
            let mut files: Vec<(String, Vec<u8>)> = std::fs::read_dir(&out)
                .map(|rd| {
                    rd.map(|e| {
                        let e = e.expect("entry");
                        (
                            e.file_name().to_string_lossy().into_owned(),
                            std::fs::read(e.path()).expect("readable"),
                        )
                    })
                    .collect()
                })
                .unwrap_or_default();
            files.sort();
            files
        };
        rep.instances += 1;
        let a = (run_cli(&args), snapshot());
        let b = (run_cli(&args), snapshot());
        rep.check(
            || format!("cqa {}", args.join(" ")),
            a == b && !a.1.is_empty(),
            true,
        );
    }
    rep
}
