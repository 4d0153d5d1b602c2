//! Hand-encoded vectors for the Horn-to-linear weak-consistency reduction.
//!
//! A rule `r: a <- b1,..,bk` becomes `H(r,a,i,j)` and `B(r,b1)..B(r,bk)`.
//! The rules sharing a head form a ring through the last two arguments:
//! `H(r1,a,1,2), H(r2,a,2,3), .., H(rh,a,h,1)`; a head used once gets
//! `H(r,a,1,1)`. Headless rules use the head `false`. Deleting facts in the
//! unique repair mirrors derivation: `H` facts of an atom disappear once it
//! is derived, `B` facts once their atom is.
//!
//! An atom heading no rule has no `H` facts, so its `B` facts go at once and
//! it behaves as derived. Such atoms get the tautology `a <- a`, which keeps
//! them underived without changing the formula.

use cqa::model::{Fact, FactSet};
use cqa::options::Options;
use cqa::syntax::parse_dependencies;
use cqa::weakcons::{weakly_consistent, WcMethod};

const SIGMA: &str = "\
forall x,y,z,w: H(x,y,z,w) -> exists v: B(x,v) .
forall x,y,z,w: H(x,y,z,w) -> exists v,t: H(v,y,w,t) .
forall x,y: B(x,y) -> exists z,w,v: H(z,y,w,v) .
";

/// Rules as `(id, head, body)`; the probe is the `H` fact of `r1`.
fn probe_is_weakly_consistent(rules: &[(&str, &str, &[&str])]) -> Vec<bool> {
    let (_, sigma) = parse_dependencies(SIGMA).unwrap();
    let mut facts = FactSet::new();
    let mut probe = None;
    let heads: Vec<&str> = rules.iter().map(|r| r.1).collect();
    for (k, (id, head, body)) in rules.iter().enumerate() {
        let ring: Vec<usize> = (0..rules.len()).filter(|&j| heads[j] == *head).collect();
        let pos = ring.iter().position(|&j| j == k).unwrap();
        let here = (pos + 1).to_string();
        let next = ((pos + 1) % ring.len() + 1).to_string();
        let h = Fact::new("H", &[id, head, &here, &next]);
        if k == 0 {
            probe = Some(h.clone());
        }
        facts.insert(h);
        for b in body.iter() {
            facts.insert(Fact::new("B", &[id, b]));
        }
    }
    let probe = FactSet::from([probe.unwrap()]);
    [WcMethod::LinearRepair, WcMethod::Brute]
        .iter()
        .map(|&m| {
            weakly_consistent(&probe, &facts, &sigma, m, &Options::default())
                .unwrap()
                .weakly_consistent
        })
        .collect()
}

#[test]
fn an_atom_without_rules_counts_as_derived() {
    // b <- a.  false <- b.   is satisfiable, yet without a rule for a the
    // probe is deleted
    let v = probe_is_weakly_consistent(&[("r1", "false", &["b"]), ("r2", "b", &["a"])]);
    assert_eq!(v, [false; 2]);
}

#[test]
fn unsatisfiable_formulas_delete_the_probe() {
    // a.  false <- a.
    let v = probe_is_weakly_consistent(&[("r1", "false", &["a"]), ("r2", "a", &[])]);
    assert_eq!(v, [false; 2]);
    // a.  b <- a.  false <- a, b.
    let v = probe_is_weakly_consistent(&[
        ("r1", "false", &["a", "b"]),
        ("r2", "a", &[]),
        ("r3", "b", &["a"]),
    ]);
    assert_eq!(v, [false; 2]);
}

#[test]
fn satisfiable_formulas_keep_the_probe() {
    // b <- a.  false <- b.   (a is never derived)
    let v = probe_is_weakly_consistent(&[
        ("r1", "false", &["b"]),
        ("r2", "b", &["a"]),
        ("r3", "a", &["a"]),
    ]);
    assert_eq!(v, [true; 2]);
    // a.  false <- a, c.  c <- d.
    let v = probe_is_weakly_consistent(&[
        ("r1", "false", &["a", "c"]),
        ("r2", "a", &[]),
        ("r3", "c", &["d"]),
        ("r4", "d", &["d"]),
    ]);
    assert_eq!(v, [true; 2]);
}

#[test]
fn shared_heads_form_a_ring() {
    // a <- c.  a.  false <- a.   (the second rule for a fires)
    let v = probe_is_weakly_consistent(&[
        ("r1", "false", &["a"]),
        ("r2", "a", &["c"]),
        ("r3", "a", &[]),
        ("r4", "c", &["c"]),
    ]);
    assert_eq!(v, [false; 2]);
    // two headless rules, one of them firing
    let v = probe_is_weakly_consistent(&[
        ("r1", "false", &["c"]),
        ("r2", "false", &[]),
        ("r3", "c", &["c"]),
    ]);
    assert_eq!(v, [false; 2]);
}
