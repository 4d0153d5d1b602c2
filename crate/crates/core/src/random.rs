//! Seeded random instances for testing the decision procedures against each
//! other.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::classify::is_fdet;
use crate::model::{
    Atom, Conjunction, Cq, Dependency, Fact, FactSet, Inequality, Schema, Sym, Term, Ucq,
};

const PREDICATES: &[(&str, usize)] = &[("P", 2), ("Q", 1), ("R", 2), ("S", 1), ("T", 2)];
/// Occurs in databases only, never in dependencies.
const LOOSE: (&str, usize) = ("U", 1);
const CONSTANTS: &[&str] = &["a", "b", "c"];

/// Shape of the generated dependency sets and databases.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Profile {
    pub linear: bool,
    pub acyclic: bool,
    /// Rejection-sampled on the database.
    pub fdet: bool,
    pub full: bool,
    pub max_deps: usize,
    pub max_facts: usize,
    pub max_body: usize,
}

impl Profile {
    pub fn general(max_facts: usize) -> Self {
        Profile {
            linear: false,
            acyclic: false,
            fdet: false,
            full: false,
            max_deps: 3,
            max_facts,
            max_body: 2,
        }
    }

    pub fn linear(mut self) -> Self {
        self.linear = true;
        self
    }

    pub fn acyclic(mut self) -> Self {
        self.acyclic = true;
        self
    }

    pub fn fdet(mut self) -> Self {
        self.fdet = true;
        self
    }

    pub fn full(mut self) -> Self {
        self.full = true;
        self
    }

    pub fn max_deps(mut self, n: usize) -> Self {
        self.max_deps = n;
        self
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    pub schema: Schema,
    pub sigma: Vec<Dependency>,
    pub facts: FactSet,
}

fn atom(pred: (&str, usize), mut arg: impl FnMut() -> Term) -> Atom {
    Atom::new(pred.0, (0..pred.1).map(|_| arg()).collect())
}

fn constant(rng: &mut impl Rng) -> Term {
    Term::cst(CONSTANTS.choose(rng).expect("nonempty"))
}

fn dependency(rng: &mut impl Rng, p: &Profile) -> Dependency {
    // Under `acyclic`, body predicates rank strictly below head predicates,
    // so every edge of the dependency graph climbs in rank.
    let split = if p.acyclic {
        rng.gen_range(1..PREDICATES.len())
    } else {
        0
    };
    let body_preds = if p.acyclic {
        &PREDICATES[..split]
    } else {
        PREDICATES
    };
    let head_preds = if p.acyclic {
        &PREDICATES[split..]
    } else {
        PREDICATES
    };

    let body_vars: Vec<Term> = ["x1", "x2", "x3"].iter().map(|v| Term::var(v)).collect();
    let n_body = if p.linear {
        1
    } else {
        rng.gen_range(1..=p.max_body.max(1))
    };
    let mut atoms: Vec<Atom> = (0..n_body)
        .map(|_| {
            let pred = *body_preds.choose(rng).expect("nonempty");
            atom(pred, || {
                if rng.gen_bool(0.9) {
                    body_vars[rng.gen_range(0..body_vars.len())].clone()
                } else {
                    constant(rng)
                }
            })
        })
        .collect();
    // every body needs a variable for the dependency to be interesting
    if atoms.iter().all(|a| a.vars().next().is_none()) {
        atoms[0].args[0] = body_vars[0].clone();
    }
    let mut body = Conjunction::new(atoms, Vec::new());
    let vars = body.vars();
    if vars.len() >= 2 && rng.gen_bool(0.25) {
        body.ineqs.push(Inequality::new(
            Term::Var(vars[0].clone()),
            Term::Var(vars[1].clone()),
        ));
    }

    let head = if rng.gen_bool(0.3) {
        Ucq::bot()
    } else {
        let n = if rng.gen_bool(0.25) { 2 } else { 1 };
        Ucq::new(
            (0..n)
                .map(|_| disjunct(rng, p, head_preds, &vars))
                .collect(),
        )
    };
    Dependency::new(body, head)
}

fn disjunct(
    rng: &mut impl Rng,
    p: &Profile,
    preds: &[(&'static str, usize)],
    frontier: &[Sym],
) -> Cq {
    let existentials = [Sym::new("y1"), Sym::new("y2")];
    let n = if rng.gen_bool(0.3) { 2 } else { 1 };
    let atoms: Vec<Atom> = (0..n)
        .map(|_| {
            let pred = *preds.choose(rng).expect("nonempty");
            atom(pred, || {
                let roll: f64 = rng.gen();
                if roll < 0.6 && !frontier.is_empty() {
                    Term::Var(frontier[rng.gen_range(0..frontier.len())].clone())
                } else if roll < 0.9 && !p.full {
                    Term::Var(existentials[rng.gen_range(0..2)].clone())
                } else {
                    constant(rng)
                }
            })
        })
        .collect();
    let mut body = Conjunction::new(atoms, Vec::new());
    let exists: Vec<Sym> = body
        .vars()
        .into_iter()
        .filter(|v| existentials.contains(v))
        .collect();
    if let Some(y) = exists.first() {
        if rng.gen_bool(0.3) {
            let other = if !frontier.is_empty() && rng.gen_bool(0.7) {
                Term::Var(frontier[rng.gen_range(0..frontier.len())].clone())
            } else {
                constant(rng)
            };
            body.ineqs
                .push(Inequality::new(Term::Var(y.clone()), other));
        }
    }
    Cq::new(exists, body)
}

fn database(rng: &mut impl Rng, preds: &[(&str, usize)], max_facts: usize) -> FactSet {
    let target = rng.gen_range(0..=max_facts);
    let mut facts = FactSet::new();
    for _ in 0..target * 2 {
        if facts.len() == target {
            break;
        }
        let &(p, arity) = preds.choose(rng).expect("nonempty");
        let args: Vec<&str> = (0..arity)
            .map(|_| *CONSTANTS.choose(rng).expect("nonempty"))
            .collect();
        facts.insert(Fact::new(p, &args));
    }
    facts
}

/// A random instance of the requested shape.
pub fn random_instance(rng: &mut impl Rng, p: &Profile) -> Instance {
    loop {
        let n = rng.gen_range(1..=p.max_deps.max(1));
        let sigma: Vec<Dependency> = (0..n).map(|_| dependency(rng, p)).collect();
        let mut preds: Vec<(&str, usize)> = PREDICATES.to_vec();
        if rng.gen_bool(0.2) {
            preds.push(LOOSE);
        }
        for _ in 0..50 {
            let facts = database(rng, &preds, p.max_facts);
            if p.fdet && !is_fdet(&sigma, &facts) {
                continue;
            }
            let mut schema = Schema::from_dependencies(&sigma).expect("fixed arities");
            for &(q, arity) in &preds {
                schema.declare(&Sym::new(q), arity).expect("fixed arities");
            }
            return Instance {
                schema,
                sigma,
                facts,
            };
        }
    }
}

/// A Boolean safe UCQ over the instance's predicates.
pub fn random_query(
    rng: &mut impl Rng,
    schema: &Schema,
    max_atoms: usize,
    max_disjuncts: usize,
) -> Ucq {
    let preds: Vec<(Sym, usize)> = schema.predicates().map(|(p, n)| (p.clone(), n)).collect();
    let vars = [Sym::new("z1"), Sym::new("z2"), Sym::new("z3")];
    let n = rng.gen_range(1..=max_disjuncts.max(1));
    Ucq::new(
        (0..n)
            .map(|_| {
                let k = rng.gen_range(1..=max_atoms.max(1));
                let atoms: Vec<Atom> = (0..k)
                    .map(|_| {
                        let (p, arity) = preds.choose(rng).expect("nonempty schema");
                        Atom::new(
                            p.as_str(),
                            (0..*arity)
                                .map(|_| {
                                    if rng.gen_bool(0.75) {
                                        Term::Var(vars[rng.gen_range(0..vars.len())].clone())
                                    } else {
                                        constant(rng)
                                    }
                                })
                                .collect(),
                        )
                    })
                    .collect();
                let mut body = Conjunction::new(atoms, Vec::new());
                let used = body.vars();
                if used.len() >= 2 && rng.gen_bool(0.2) {
                    body.ineqs.push(Inequality::new(
                        Term::Var(used[0].clone()),
                        Term::Var(used[1].clone()),
                    ));
                }
                Cq::new(used, body)
            })
            .collect(),
    )
}

/// Each fact kept with probability one half.
pub fn random_subset(rng: &mut impl Rng, facts: &FactSet) -> FactSet {
    facts
        .iter()
        .filter(|_| rng.gen_bool(0.5))
        .cloned()
        .collect()
}
