//! Instances built from graph reachability and Horn satisfiability, with the
//! answer known independently of the engine.

use std::collections::{BTreeSet, VecDeque};

use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{Dependency, Fact, FactSet, Schema};
use crate::syntax::parse_dependencies;

/// The constant that terminates adjacency lists; no vertex may use it.
pub const NIL: &str = "0";

/// A directed graph with designated source and target.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Digraph {
    pub vertices: Vec<String>,
    /// Adjacency lists by vertex index, in the order edges were given.
    pub edges: Vec<Vec<usize>>,
    pub s: usize,
    pub t: usize,
}

impl Digraph {
    /// Builds a graph; repeated edges are dropped.
    pub fn new(
        vertices: Vec<String>,
        edges: &[(usize, usize)],
        s: usize,
        t: usize,
    ) -> Result<Self> {
        if let Some(v) = vertices.iter().find(|v| v.as_str() == NIL) {
            return Err(Error::Invalid(format!("vertex name {v} is reserved")));
        }
        let n = vertices.len();
        if s >= n || t >= n || edges.iter().any(|&(a, b)| a >= n || b >= n) {
            return Err(Error::Invalid("vertex index out of range".into()));
        }
        let mut adj = vec![Vec::new(); n];
        for &(a, b) in edges {
            if !adj[a].contains(&b) {
                adj[a].push(b);
            }
        }
        Ok(Digraph {
            vertices,
            edges: adj,
            s,
            t,
        })
    }

    /// A graph on `v1..vn` with each edge present with probability `density`.
    pub fn random(rng: &mut impl Rng, max_vertices: usize, density: f64) -> Self {
        let n = rng.gen_range(1..=max_vertices.max(1));
        let vertices = (1..=n).map(|i| format!("v{i}")).collect();
        let mut edges = Vec::new();
        for a in 0..n {
            for b in 0..n {
                if rng.gen_bool(density) {
                    edges.push((a, b));
                }
            }
        }
        let s = rng.gen_range(0..n);
        let t = rng.gen_range(0..n);
        Digraph::new(vertices, &edges, s, t).expect("well-formed by construction")
    }

    /// `t` is reachable from `s`, by a path of length zero when `s = t`.
    pub fn reachable(&self) -> bool {
        let mut seen = vec![false; self.vertices.len()];
        let mut queue = VecDeque::from([self.s]);
        seen[self.s] = true;
        while let Some(a) = queue.pop_front() {
            if a == self.t {
                return true;
            }
            for &b in &self.edges[a] {
                if !seen[b] {
                    seen[b] = true;
                    queue.push_back(b);
                }
            }
        }
        false
    }

    fn encode(&self) -> FactSet {
        let mut d = FactSet::new();
        d.insert(Fact::new("Vert", &[NIL]));
        d.insert(Fact::new("Succ", &[NIL, NIL, NIL]));
        for (i, a) in self.vertices.iter().enumerate() {
            if i != self.t {
                d.insert(Fact::new("Vert", &[a]));
            }
            let mut prev = NIL;
            for &b in &self.edges[i] {
                let b = self.vertices[b].as_str();
                d.insert(Fact::new("Succ", &[a, prev, b]));
                prev = b;
            }
            d.insert(Fact::new("Succ", &[a, prev, NIL]));
        }
        d
    }
}

/// A generated instance and the subset the question is about.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Gadget {
    pub schema: Schema,
    pub sigma: Vec<Dependency>,
    pub facts: FactSet,
    pub probe: FactSet,
}

fn dependencies(src: &str) -> (Schema, Vec<Dependency>) {
    parse_dependencies(src).expect("gadget dependencies parse")
}

const STCON_DEPS: &str = "\
forall x,y,z: Succ(x,y,z) -> Vert(y) .
forall x,y,z: Succ(x,y,z) -> exists w: Succ(x,z,w) .
forall x: Vert(x) -> exists y: Succ(x,0,y) .
";

const START_DEPS: &str = "\
forall x: Start(x) -> Vert(x) .
forall x: Vert(x) -> exists y: Start(y) .
forall x,y,z: Succ(x,y,z) -> exists w: Start(w) .
";

/// Linear dependencies under which `{Vert(s)}` is weakly consistent iff `t`
/// is not reachable from `s`.
///
/// Beyond the adjacency lists the database holds `Vert(0)` and
/// `Succ(0,0,0)`: every list starts with a `Succ(a,0,b)` fact, whose middle
/// argument must itself be a vertex, and that vertex needs a list of its own.
pub fn stcon_to_wc(g: &Digraph) -> Gadget {
    let (schema, sigma) = dependencies(STCON_DEPS);
    Gadget {
        schema,
        sigma,
        facts: g.encode(),
        probe: FactSet::from([Fact::new("Vert", &[&g.vertices[g.s]])]),
    }
}

/// Linear dependencies under which the empty set is a repair iff `t` is
/// reachable from `s`; equivalently `Start(s)` is not entailed.
pub fn stcon_to_rc(g: &Digraph) -> Gadget {
    let (schema, sigma) = dependencies(&format!("{STCON_DEPS}{START_DEPS}"));
    let mut facts = g.encode();
    facts.insert(start_fact(g));
    Gadget {
        schema,
        sigma,
        facts,
        probe: FactSet::new(),
    }
}

/// The `Start(s)` fact of the repair-checking gadget.
pub fn start_fact(g: &Digraph) -> Fact {
    Fact::new("Start", &[&g.vertices[g.s]])
}

/// A Horn clause with at most three literals.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HornClause {
    pub negative: Vec<String>,
    pub positive: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HornFormula {
    pub variables: Vec<String>,
    pub clauses: Vec<HornClause>,
}

impl HornFormula {
    pub fn new(variables: Vec<String>, clauses: Vec<HornClause>) -> Result<Self> {
        for c in &clauses {
            let len = c.negative.len() + usize::from(c.positive.is_some());
            if len == 0 || len > 3 {
                return Err(Error::Invalid(format!(
                    "clause with {len} literals; expected 1 to 3"
                )));
            }
            if let Some(v) = c
                .negative
                .iter()
                .chain(&c.positive)
                .find(|v| !variables.contains(v))
            {
                return Err(Error::Invalid(format!("undeclared variable {v}")));
            }
        }
        if variables.iter().any(|v| v == NIL) {
            return Err(Error::Invalid(format!("variable name {NIL} is reserved")));
        }
        Ok(HornFormula { variables, clauses })
    }

    /// Random clauses over `p1..pn`.
    pub fn random(rng: &mut impl Rng, max_vars: usize, max_clauses: usize) -> Self {
        let n = rng.gen_range(1..=max_vars.max(1));
        let variables: Vec<String> = (1..=n).map(|i| format!("p{i}")).collect();
        let m = rng.gen_range(1..=max_clauses.max(1));
        let pick = |rng: &mut dyn rand::RngCore| variables[rng.gen_range(0..n)].clone();
        let clauses = (0..m)
            .map(|_| {
                let len = rng.gen_range(1..=3);
                let positive = rng.gen_bool(0.6).then(|| pick(rng));
                let negs = len - usize::from(positive.is_some());
                HornClause {
                    negative: (0..negs).map(|_| pick(rng)).collect(),
                    positive,
                }
            })
            .collect();
        HornFormula::new(variables.clone(), clauses).expect("well-formed by construction")
    }

    /// Unit propagation from the positive facts, then a check of the purely
    /// negative clauses against the least model.
    pub fn satisfiable(&self) -> bool {
        let mut truth: BTreeSet<&str> = BTreeSet::new();
        loop {
            let mut changed = false;
            for c in &self.clauses {
                if let Some(p) = &c.positive {
                    if !truth.contains(p.as_str())
                        && c.negative.iter().all(|n| truth.contains(n.as_str()))
                    {
                        truth.insert(p);
                        changed = true;
                    }
                }
            }
            if !changed {
                break;
            }
        }
        self.clauses
            .iter()
            .filter(|c| c.positive.is_none())
            .all(|c| !c.negative.iter().all(|n| truth.contains(n.as_str())))
    }
}

const HORN_DEPS: &str = "\
forall x: C(0,0,x) -> A(x) .
forall x,y: C(x,0,y), A(x) -> A(y) .
forall x,y,z: C(x,y,z), A(x), A(y) -> A(z) .
forall x: Cf(x,0,0), A(x) -> false .
forall x,y: Cf(x,y,0), A(x), A(y) -> false .
forall x,y,z: Cf(x,y,z), A(x), A(y), A(z) -> false .
";

/// Full dependencies under which the clause facts are weakly consistent iff
/// the formula is satisfiable.
pub fn horn3sat_to_wc(phi: &HornFormula) -> Gadget {
    let (schema, sigma) = dependencies(HORN_DEPS);
    let mut probe = FactSet::new();
    for c in &phi.clauses {
        let neg: Vec<&str> = c.negative.iter().map(String::as_str).collect();
        let fact = match (&c.positive, neg.as_slice()) {
            (Some(p), []) => Fact::new("C", &[NIL, NIL, p]),
            (Some(p), [a]) => Fact::new("C", &[a, NIL, p]),
            (Some(p), [a, b]) => Fact::new("C", &[a, b, p]),
            (None, [a]) => Fact::new("Cf", &[a, NIL, NIL]),
            (None, [a, b]) => Fact::new("Cf", &[a, b, NIL]),
            (None, [a, b, c]) => Fact::new("Cf", &[a, b, c]),
            _ => unreachable!("clause lengths are checked on construction"),
        };
        probe.insert(fact);
    }
    let mut facts = probe.clone();
    facts.extend(phi.variables.iter().map(|v| Fact::new("A", &[v])));
    Gadget {
        schema,
        sigma,
        facts,
        probe,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::options::Options;
    use crate::repair::{enumerate_repairs, repair_check, RcMethod};
    use crate::weakcons::{weakly_consistent, WcMethod};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn graph(n: usize, edges: &[(usize, usize)], s: usize, t: usize) -> Digraph {
        Digraph::new((1..=n).map(|i| format!("v{i}")).collect(), edges, s, t).unwrap()
    }

    fn wc(g: &Gadget, m: WcMethod) -> bool {
        weakly_consistent(&g.probe, &g.facts, &g.sigma, m, &Options::default())
            .unwrap()
            .weakly_consistent
    }

    #[test]
    fn path_blocks_the_probe() {
        let g = graph(2, &[(0, 1)], 0, 1);
        assert!(g.reachable());
        let gad = stcon_to_wc(&g);
        for m in [
            WcMethod::Reach,
            WcMethod::LinearRepair,
            WcMethod::Fc,
            WcMethod::Brute,
        ] {
            assert!(!wc(&gad, m), "{m}");
        }
    }

    #[test]
    fn isolated_target_leaves_the_probe_alone() {
        let g = graph(3, &[(0, 1), (1, 0)], 0, 2);
        assert!(!g.reachable());
        let gad = stcon_to_wc(&g);
        for m in [WcMethod::Reach, WcMethod::LinearRepair, WcMethod::Fc] {
            assert!(wc(&gad, m), "{m}");
        }
    }

    #[test]
    fn source_equal_to_target() {
        let g = graph(1, &[], 0, 0);
        assert!(g.reachable());
        assert!(!wc(&stcon_to_wc(&g), WcMethod::Auto));
    }

    #[test]
    fn reserved_vertex_name() {
        assert!(Digraph::new(vec!["0".into()], &[], 0, 0).is_err());
    }

    #[test]
    fn repair_checking_gadget() {
        let opts = Options::default();
        for (g, reach) in [
            (graph(2, &[(0, 1)], 0, 1), true),
            (graph(2, &[(1, 0)], 0, 1), false),
            (graph(1, &[], 0, 0), true),
        ] {
            let gad = stcon_to_rc(&g);
            let rc =
                repair_check(&gad.probe, &gad.facts, &gad.sigma, RcMethod::Auto, &opts).unwrap();
            assert_eq!(rc.is_repair, reach);
            let rs = enumerate_repairs(&gad.facts, &gad.sigma, &opts).unwrap();
            assert_eq!(rs.repairs == vec![FactSet::new()], reach);
            assert_eq!(!rs.intersection.contains(&start_fact(&g)), reach);
        }
    }

    fn clause(neg: &[&str], pos: Option<&str>) -> HornClause {
        HornClause {
            negative: neg.iter().map(|s| s.to_string()).collect(),
            positive: pos.map(str::to_string),
        }
    }

    #[test]
    fn horn_units() {
        let vars = vec!["a".to_string()];
        let sat = HornFormula::new(vars.clone(), vec![clause(&[], Some("a"))]).unwrap();
        let unsat =
            HornFormula::new(vars, vec![clause(&[], Some("a")), clause(&["a"], None)]).unwrap();
        assert!(sat.satisfiable());
        assert!(!unsat.satisfiable());
        assert!(wc(&horn3sat_to_wc(&sat), WcMethod::Auto));
        assert!(!wc(&horn3sat_to_wc(&unsat), WcMethod::Auto));
        assert!(!wc(&horn3sat_to_wc(&unsat), WcMethod::Brute));
    }

    #[test]
    fn horn_encoding_shapes() {
        let vars: Vec<String> = ["a", "b", "c"].iter().map(|s| s.to_string()).collect();
        let phi = HornFormula::new(
            vars,
            vec![
                clause(&[], Some("a")),
                clause(&["a"], Some("b")),
                clause(&["a", "b"], Some("c")),
                clause(&["a"], None),
                clause(&["a", "b"], None),
                clause(&["a", "b", "c"], None),
            ],
        )
        .unwrap();
        let g = horn3sat_to_wc(&phi);
        let got: Vec<String> = g.probe.iter().map(|f| f.to_string()).collect();
        assert_eq!(
            got,
            [
                "C(0,0,a)",
                "C(a,0,b)",
                "C(a,b,c)",
                "Cf(a,0,0)",
                "Cf(a,b,0)",
                "Cf(a,b,c)"
            ]
        );
    }

    #[test]
    fn random_gadgets_match_their_oracles() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..40 {
            let g = Digraph::random(&mut rng, 5, 0.3);
            assert_eq!(
                wc(&stcon_to_wc(&g), WcMethod::Auto),
                !g.reachable(),
                "{g:?}"
            );
            let phi = HornFormula::random(&mut rng, 4, 5);
            assert_eq!(
                wc(&horn3sat_to_wc(&phi), WcMethod::Auto),
                phi.satisfiable(),
                "{phi:?}"
            );
        }
    }
}
