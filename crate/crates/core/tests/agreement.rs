mod common;

use common::{agreement, classes, rewriting_parity};

#[test]
fn methods_agree_with_the_repair_oracle() {
    for (k, (name, p)) in classes().into_iter().enumerate() {
        let rep = agreement(&p, 120, 1000 + k as u64);
        assert!(rep.ok(), "{name}: {rep}");
    }
}

#[test]
fn rewritings_agree_with_their_algorithms() {
    let rep = rewriting_parity(150, 2000);
    assert!(rep.ok(), "{rep}");
}
