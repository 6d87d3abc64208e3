//! Truth-table semantics of k-SAT formulae.
//!
//! Assignment `a ∈ {0,1}^n` is encoded as an integer whose bit `i` is the
//! value of `x_{i+1}` (so `x1` is the least significant bit). A truth table is
//! a `2^n`-bit vector indexed by that integer.

mod census;
mod function;
mod implicants;
mod witness;

pub use census::{
    dedupe_formula_tables, enumerate_functions, minimal_formula_census, reachable_tables,
    CensusError, CensusReport, MinimalFormulaStats, CENSUS_STATE_BUDGET,
};
pub use function::{classify_function, variable_directions, Direction, FunctionFlags};
pub use implicants::{prime_implicants, Implicant};
pub use witness::{is_minimal, is_sparsely_minimal, witness, MinimalityReport};

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt::Write;

use crate::combin::{low_mask, submasks};
use crate::formula::Formula;

/// Default variable cap for truth-table operations.
pub const DEFAULT_TABLE_CAP: usize = 24;
/// Variable cap for prime-implicant based classification.
pub const IMPLICANT_CAP: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SemanticsError {
    #[error("{n} variables exceeds the configured cap of {cap}")]
    CapExceeded { n: usize, cap: usize },
    #[error("clause index {index} out of range for {len} clauses")]
    ClauseIndex { index: usize, len: usize },
    #[error("malformed truth table: {0}")]
    BadTable(&'static str),
}

/// A full assignment of `n` variables.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Assignment {
    pub n: usize,
    pub bits: u64,
}

impl Assignment {
    pub fn value(&self, var: usize) -> bool {
        self.bits >> var & 1 == 1
    }

    /// Number of variables assigned 1.
    pub fn weight(&self) -> u32 {
        self.bits.count_ones()
    }
}

/// A Boolean function of `n` variables as a packed bit vector.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TruthTable {
    n: usize,
    words: Vec<u64>,
}

impl TruthTable {
    pub fn zero(n: usize) -> Self {
        assert!(n <= 40, "truth tables limited to 40 variables");
        let words = if n >= 6 { 1usize << (n - 6) } else { 1 };
        TruthTable {
            n,
            words: vec![0; words],
        }
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(u64) -> bool) -> Self {
        let mut t = TruthTable::zero(n);
        for a in 0..1u64 << n {
            if f(a) {
                t.set(a);
            }
        }
        t
    }

    /// Table of at most 6 variables packed in one word.
    pub fn from_word(n: usize, word: u64) -> Self {
        assert!(n <= 6);
        TruthTable {
            n,
            words: vec![word & Self::word_mask(n)],
        }
    }

    fn word_mask(n: usize) -> u64 {
        if n >= 6 {
            u64::MAX
        } else {
            low_mask(1 << n)
        }
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    /// Low word, for tables of at most 6 variables.
    pub fn as_word(&self) -> u64 {
        self.words[0]
    }

    #[inline]
    pub fn get(&self, a: u64) -> bool {
        self.words[(a >> 6) as usize] >> (a & 63) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, a: u64) {
        self.words[(a >> 6) as usize] |= 1 << (a & 63);
    }

    pub fn clear(&mut self, a: u64) {
        self.words[(a >> 6) as usize] &= !(1 << (a & 63));
    }

    pub fn count_ones(&self) -> u64 {
        self.words.iter().map(|w| u64::from(w.count_ones())).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn ones(&self) -> impl Iterator<Item = u64> + '_ {
        (0..1u64 << self.n).filter(move |&a| self.get(a))
    }

    /// Replace every variable marked in `flip` by its negation.
    pub fn negate_inputs(&self, flip: u64) -> TruthTable {
        let mut out = TruthTable::zero(self.n);
        for a in self.ones() {
            out.set(a ^ flip);
        }
        out
    }

    /// Hex string: byte `j` holds assignments `8j..8j+7`, least significant
    /// bit first; bytes are written in increasing order.
    pub fn to_hex(&self) -> String {
        let nbytes = core::cmp::max(1, (1usize << self.n) / 8);
        let mut s = String::with_capacity(2 * nbytes);
        for j in 0..nbytes {
            let byte = (self.words[j / 8] >> (8 * (j % 8))) & 0xff;
            write!(s, "{byte:02x}").expect("write to string");
        }
        s
    }

    pub fn from_hex(n: usize, hex: &str) -> Result<Self, SemanticsError> {
        let nbytes = core::cmp::max(1, (1usize << n) / 8);
        if hex.len() != 2 * nbytes {
            return Err(SemanticsError::BadTable(
                "hex length does not match variable count",
            ));
        }
        let mut t = TruthTable::zero(n);
        for j in 0..nbytes {
            let byte = u64::from_str_radix(&hex[2 * j..2 * j + 2], 16)
                .map_err(|_| SemanticsError::BadTable("invalid hex digit"))?;
            t.words[j / 8] |= byte << (8 * (j % 8));
        }
        if n < 3 && t.words[0] & !Self::word_mask(n) != 0 {
            return Err(SemanticsError::BadTable("bits set beyond 2^n assignments"));
        }
        Ok(t)
    }
}

/// Cube of assignments satisfying `clause` over `n` variables, enumerated.
pub(crate) fn cube_points(n: usize, vars: u64, pos: u64) -> impl Iterator<Item = u64> {
    let free = low_mask(n) & !vars;
    submasks(free).map(move |s| s | pos)
}

pub(crate) fn check_cap(n: usize, cap: usize) -> Result<(), SemanticsError> {
    if n > cap {
        Err(SemanticsError::CapExceeded { n, cap })
    } else {
        Ok(())
    }
}

/// Truth table of a formula: `a` is set iff some clause is satisfied by `a`.
pub fn truth_table(f: &Formula, cap: usize) -> Result<TruthTable, SemanticsError> {
    check_cap(f.n(), cap)?;
    let mut t = TruthTable::zero(f.n());
    for c in f.clauses() {
        for a in cube_points(f.n(), c.vars(), c.pos()) {
            t.set(a);
        }
    }
    Ok(t)
}
