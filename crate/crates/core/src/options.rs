/// Resource limits shared by the exponential procedures.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Options {
    /// Largest database the exhaustive searches accept.
    pub cap: usize,
    /// Largest number of atom sets a query-entailment sentence may range over.
    pub max_atom_sets: u128,
}

pub const DEFAULT_CAP: usize = 20;
pub const DEFAULT_MAX_ATOM_SETS: u128 = 100_000;
/// Caps above this value are accepted with a warning.
pub const SOFT_CAP_LIMIT: usize = 24;
/// Subset enumeration uses 64-bit masks.
pub const HARD_CAP_LIMIT: usize = 40;

impl Default for Options {
    fn default() -> Self {
        Options {
            cap: DEFAULT_CAP,
            max_atom_sets: DEFAULT_MAX_ATOM_SETS,
        }
    }
}

impl Options {
    pub fn with_cap(cap: usize) -> Self {
        Options {
            cap: cap.min(HARD_CAP_LIMIT),
            ..Self::default()
        }
    }
}
