use std::collections::BTreeSet;

use crate::model::{Dependency, Sym};

/// Source of variable names that clash with nothing seen so far.
#[derive(Clone, Debug, Default)]
pub struct NameSupply {
    used: BTreeSet<Sym>,
    counter: usize,
}

impl NameSupply {
    pub fn new() -> Self {
        Self::default()
    }

    /// Reserves every variable and constant name of the dependencies.
    pub fn avoiding(sigma: &[Dependency]) -> Self {
        let mut s = Self::new();
        for d in sigma {
            s.reserve(d.all_vars());
            s.reserve(d.constants());
        }
        s
    }

    pub fn reserve(&mut self, names: impl IntoIterator<Item = Sym>) {
        self.used.extend(names);
    }

    /// A fresh name derived from `base` (its trailing `_n` suffix is replaced).
    pub fn fresh(&mut self, base: &Sym) -> Sym {
        let stem = match base.as_str().rsplit_once('_') {
            Some((s, n)) if !s.is_empty() && n.chars().all(|c| c.is_ascii_digit()) => s,
            _ => base.as_str(),
        };
        loop {
            self.counter += 1;
            let cand = Sym::from(format!("{stem}_{}", self.counter));
            if self.used.insert(cand.clone()) {
                return cand;
            }
        }
    }

    /// Copy of `dep` with all its variables renamed to fresh ones.
    pub fn rename_apart(&mut self, dep: &Dependency) -> Dependency {
        let vars: Vec<Sym> = dep.all_vars().into_iter().collect();
        let fresh: Vec<Sym> = vars.iter().map(|v| self.fresh(v)).collect();
        dep.rename_vars(|v| {
            let i = vars.iter().position(|w| w == v).expect("variable of dep");
            fresh[i].clone()
        })
    }
}
