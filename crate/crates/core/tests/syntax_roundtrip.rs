use cqa::fo::Formula;
use cqa::model::{Atom, Sym, Term};
use cqa::syntax::{parse_fo, print_fo};
use proptest::prelude::*;

const VARS: &[&str] = &["x", "y", "z"];
const CONSTS: &[&str] = &["a", "b", "c1", "0"];

fn term() -> impl Strategy<Value = Term> {
    prop_oneof![
        prop::sample::select(VARS).prop_map(Term::var),
        prop::sample::select(CONSTS).prop_map(Term::cst),
    ]
}

fn atom() -> impl Strategy<Value = Atom> {
    (
        prop::sample::select(&[("P", 2usize), ("Q", 1), ("R", 3)][..]),
        prop::collection::vec(term(), 3),
        any::<bool>(),
    )
        .prop_map(|((p, n), mut args, aux)| {
            args.truncate(n);
            let mut a = Atom::new(p, args);
            a.aux = aux;
            a
        })
}

fn vars() -> impl Strategy<Value = Vec<Sym>> {
    prop::sample::subsequence(VARS, 1..=3).prop_map(|v| v.into_iter().map(Sym::new).collect())
}

fn formula() -> impl Strategy<Value = Formula> {
    let leaf = prop_oneof![
        Just(Formula::True),
        Just(Formula::False),
        atom().prop_map(Formula::Atom),
        (term(), term()).prop_map(|(s, t)| Formula::Eq(s, t)),
        (term(), term()).prop_map(|(s, t)| Formula::Neq(s, t)),
    ];
    leaf.prop_recursive(5, 48, 4, |inner| {
        prop_oneof![
            inner.clone().prop_map(|f| Formula::Not(Box::new(f))),
            prop::collection::vec(inner.clone(), 2..4).prop_map(Formula::And),
            prop::collection::vec(inner.clone(), 2..4).prop_map(Formula::Or),
            (inner.clone(), inner.clone())
                .prop_map(|(a, b)| Formula::Implies(Box::new(a), Box::new(b))),
            (vars(), inner.clone()).prop_map(|(v, f)| Formula::Exists(v, Box::new(f))),
            (vars(), inner).prop_map(|(v, f)| Formula::Forall(v, Box::new(f))),
        ]
    })
}

/// Closing the formula keeps every variable bound, so the parser reads the
/// same terms back as variables.
fn sentence() -> impl Strategy<Value = Formula> {
    formula().prop_map(|f| Formula::Forall(VARS.iter().map(|v| Sym::new(v)).collect(), Box::new(f)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn printed_sentences_parse_back(phi in sentence()) {
        let text = print_fo(&phi);
        let back = parse_fo(&text).map_err(|e| TestCaseError::fail(format!("{text}: {e}")))?;
        prop_assert_eq!(back, phi, "{}", text);
    }

    #[test]
    fn printing_is_stable(phi in sentence()) {
        let text = print_fo(&phi);
        prop_assert_eq!(print_fo(&parse_fo(&text).unwrap()), text);
    }
}
