//! k-SAT formulae in disjunctive normal form.
//!
//! A [`Clause`] is a conjunction of `k` literals on `k` distinct variables and a
//! [`Formula`] is a set of clauses over variables `0..n`. Both bit sets are
//! single machine words, so `n <= 64`.

mod blowup;
mod copies;
mod distance;
mod profile;
pub(crate) mod syntax;

pub use blowup::blowup;
pub use copies::{count_copies, count_embeddings, CopyMode};
pub use distance::{
    unate_distance, DistanceCapExceeded, DistanceMode, UnateDistance, DEFAULT_EXACT_CAP,
};
pub use profile::{alpha_profile, AlphaProfile};
pub use syntax::{
    classify_syntactic, is_dense, literal_occurrences, monotone_link, negate_variables,
    variable_usage, SyntacticFlags,
};

use alloc::vec::Vec;
use core::fmt;

use crate::combin::{elements, low_mask};

/// Largest supported variable count.
pub const MAX_VARS: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FormulaError {
    #[error("formula has {n} variables; at most {MAX_VARS} are supported")]
    TooManyVariables { n: usize },
    #[error("clause width must be at least 2, got {k}")]
    WidthTooSmall { k: usize },
    #[error("variable {var} is out of range for {n} variables")]
    VariableOutOfRange { var: usize, n: usize },
    #[error("clause has {found} distinct variables, expected {expected}")]
    WrongWidth { expected: usize, found: usize },
    #[error("variable {var} appears twice in one clause")]
    RepeatedVariable { var: usize },
    #[error("clause index {index} out of range for {len} clauses")]
    ClauseIndex { index: usize, len: usize },
}

/// A literal `x_var` or its negation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Literal {
    pub var: usize,
    pub negated: bool,
}

impl Literal {
    pub const fn pos(var: usize) -> Self {
        Literal {
            var,
            negated: false,
        }
    }

    pub const fn neg(var: usize) -> Self {
        Literal { var, negated: true }
    }

    pub const fn complement(self) -> Self {
        Literal {
            var: self.var,
            negated: !self.negated,
        }
    }

    /// Signed 1-indexed form used by the text formats.
    pub fn to_dimacs(self) -> i64 {
        let v = self.var as i64 + 1;
        if self.negated {
            -v
        } else {
            v
        }
    }

    pub fn from_dimacs(x: i64) -> Option<Self> {
        if x == 0 {
            return None;
        }
        let var = (x.unsigned_abs() - 1) as usize;
        Some(Literal {
            var,
            negated: x < 0,
        })
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_dimacs())
    }
}

/// A conjunction of literals: `vars` is the support, `negs ⊆ vars` marks the
/// negated ones.
///
/// The derived order compares `vars` first; for a fixed width this is colex
/// order on supports, which is the canonical clause order of a [`Formula`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Clause {
    vars: u64,
    negs: u64,
}

impl Clause {
    /// Build from raw masks. Panics if `negs` is not a subset of `vars`.
    pub fn from_masks(vars: u64, negs: u64) -> Self {
        assert_eq!(
            negs & !vars,
            0,
            "negated variables must be a subset of the support"
        );
        Clause { vars, negs }
    }

    pub fn from_literals(lits: &[Literal]) -> Result<Self, FormulaError> {
        let mut vars = 0u64;
        let mut negs = 0u64;
        for l in lits {
            if l.var >= MAX_VARS {
                return Err(FormulaError::VariableOutOfRange {
                    var: l.var,
                    n: MAX_VARS,
                });
            }
            let bit = 1u64 << l.var;
            if vars & bit != 0 {
                return Err(FormulaError::RepeatedVariable { var: l.var });
            }
            vars |= bit;
            if l.negated {
                negs |= bit;
            }
        }
        Ok(Clause { vars, negs })
    }

    /// Monotone clause on the given support.
    pub fn monotone(vars: u64) -> Self {
        Clause { vars, negs: 0 }
    }

    #[inline]
    pub const fn vars(&self) -> u64 {
        self.vars
    }

    #[inline]
    pub const fn negs(&self) -> u64 {
        self.negs
    }

    /// Variables appearing as positive literals.
    #[inline]
    pub const fn pos(&self) -> u64 {
        self.vars & !self.negs
    }

    #[inline]
    pub const fn width(&self) -> usize {
        self.vars.count_ones() as usize
    }

    #[inline]
    pub const fn is_monotone(&self) -> bool {
        self.negs == 0
    }

    pub fn contains(&self, lit: Literal) -> bool {
        let bit = 1u64 << lit.var;
        self.vars & bit != 0 && ((self.negs & bit != 0) == lit.negated)
    }

    /// Literals in increasing variable order.
    pub fn literals(&self) -> impl Iterator<Item = Literal> + '_ {
        elements(self.vars).map(move |v| Literal {
            var: v,
            negated: self.negs >> v & 1 == 1,
        })
    }

    /// True iff the assignment (bit `i` = value of `x_i`) satisfies every literal.
    #[inline]
    pub const fn satisfied_by(&self, assignment: u64) -> bool {
        assignment & self.vars == self.pos()
    }

    /// Flip the sign of every variable in `flip` that the clause uses.
    #[inline]
    pub const fn flip(&self, flip: u64) -> Self {
        Clause {
            vars: self.vars,
            negs: self.negs ^ (flip & self.vars),
        }
    }
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for l in self.literals() {
            if !first {
                f.write_str(" ")?;
            }
            first = false;
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

/// A duplicate-free set of width-`k` clauses over variables `0..n`, kept in
/// canonical (sorted) order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Formula {
    n: usize,
    k: usize,
    clauses: Vec<Clause>,
}

impl Formula {
    pub fn new(
        n: usize,
        k: usize,
        clauses: impl IntoIterator<Item = Clause>,
    ) -> Result<Self, FormulaError> {
        if n > MAX_VARS {
            return Err(FormulaError::TooManyVariables { n });
        }
        if k < 2 {
            return Err(FormulaError::WidthTooSmall { k });
        }
        let allowed = low_mask(n);
        let mut out: Vec<Clause> = Vec::new();
        for c in clauses {
            if c.width() != k {
                return Err(FormulaError::WrongWidth {
                    expected: k,
                    found: c.width(),
                });
            }
            if c.vars & !allowed != 0 {
                let var = (c.vars & !allowed).trailing_zeros() as usize;
                return Err(FormulaError::VariableOutOfRange { var, n });
            }
            out.push(c);
        }
        out.sort_unstable();
        out.dedup();
        Ok(Formula { n, k, clauses: out })
    }

    /// Convenience constructor from signed 1-indexed literals, e.g.
    /// `&[&[-1, 2], &[2, 3]]` for `{x̄1x2, x2x3}`.
    pub fn from_dimacs(n: usize, k: usize, clauses: &[&[i64]]) -> Result<Self, FormulaError> {
        let mut cs = Vec::with_capacity(clauses.len());
        for lits in clauses {
            let mut ls = Vec::with_capacity(lits.len());
            for &x in lits.iter() {
                let l = Literal::from_dimacs(x)
                    .ok_or(FormulaError::VariableOutOfRange { var: 0, n })?;
                if l.var >= n {
                    return Err(FormulaError::VariableOutOfRange { var: l.var, n });
                }
                ls.push(l);
            }
            cs.push(Clause::from_literals(&ls)?);
        }
        Formula::new(n, k, cs)
    }

    pub fn empty(n: usize, k: usize) -> Result<Self, FormulaError> {
        Formula::new(n, k, core::iter::empty())
    }

    /// The complete monotone formula: every k-subset carries its positive clause.
    pub fn complete_monotone(n: usize, k: usize) -> Result<Self, FormulaError> {
        Formula::new(
            n,
            k,
            crate::combin::Subsets::new(n, k).map(Clause::monotone),
        )
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn k(&self) -> usize {
        self.k
    }

    #[inline]
    pub fn clauses(&self) -> &[Clause] {
        &self.clauses
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.clauses.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.clauses.is_empty()
    }

    pub fn contains(&self, c: &Clause) -> bool {
        self.clauses.binary_search(c).is_ok()
    }

    /// Variables used by at least one clause.
    pub fn support(&self) -> u64 {
        self.clauses.iter().fold(0, |acc, c| acc | c.vars)
    }

    /// Number of variables used by some clause, `v(F)`.
    pub fn used_variables(&self) -> usize {
        self.support().count_ones() as usize
    }

    /// Same clauses viewed over a different variable count.
    pub fn with_n(&self, n: usize) -> Result<Self, FormulaError> {
        Formula::new(n, self.k, self.clauses.iter().copied())
    }

    pub fn without_clause(&self, index: usize) -> Result<Self, FormulaError> {
        if index >= self.clauses.len() {
            return Err(FormulaError::ClauseIndex {
                index,
                len: self.clauses.len(),
            });
        }
        let mut clauses = self.clauses.clone();
        clauses.remove(index);
        Ok(Formula {
            n: self.n,
            k: self.k,
            clauses,
        })
    }

    /// Subformula made of the clauses selected by `keep`.
    pub fn filter(&self, mut keep: impl FnMut(&Clause) -> bool) -> Self {
        Formula {
            n: self.n,
            k: self.k,
            clauses: self.clauses.iter().copied().filter(|c| keep(c)).collect(),
        }
    }

    /// Apply a variable relabeling `perm[old] = new` (must be injective into `0..n`).
    pub fn relabel(&self, perm: &[usize]) -> Result<Self, FormulaError> {
        let clauses = self.clauses.iter().map(|c| {
            let mut vars = 0u64;
            let mut negs = 0u64;
            for v in elements(c.vars) {
                let bit = 1u64 << perm[v];
                vars |= bit;
                if c.negs >> v & 1 == 1 {
                    negs |= bit;
                }
            }
            Clause { vars, negs }
        });
        Formula::new(self.n, self.k, clauses.collect::<Vec<_>>())
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, c) in self.clauses.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "({c})")?;
        }
        f.write_str("}")
    }
}

/// Sign choice per variable: bit set = variable kept positive, cleared = negated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SignVector {
    n: usize,
    signs: u64,
}

impl SignVector {
    pub fn new(n: usize, signs: u64) -> Self {
        assert!(n <= MAX_VARS);
        SignVector {
            n,
            signs: signs & low_mask(n),
        }
    }

    pub fn all_positive(n: usize) -> Self {
        SignVector::new(n, low_mask(n))
    }

    pub fn all_negative(n: usize) -> Self {
        SignVector::new(n, 0)
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn bits(&self) -> u64 {
        self.signs
    }

    /// Variables that are negated by this sign vector.
    #[inline]
    pub fn negated(&self) -> u64 {
        !self.signs & low_mask(self.n)
    }

    pub fn is_positive(&self, var: usize) -> bool {
        self.signs >> var & 1 == 1
    }

    /// True iff every literal of `c` agrees with this sign choice.
    #[inline]
    pub fn agrees_with(&self, c: &Clause) -> bool {
        c.negs == c.vars & self.negated()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn construction_validates() {
        assert!(matches!(
            Formula::from_dimacs(3, 2, &[&[1, 2, 3]]),
            Err(FormulaError::WrongWidth { .. })
        ));
        assert!(matches!(
            Formula::from_dimacs(2, 2, &[&[1, 3]]),
            Err(FormulaError::VariableOutOfRange { .. })
        ));
        assert!(matches!(
            Formula::from_dimacs(3, 2, &[&[1, -1]]),
            Err(FormulaError::RepeatedVariable { .. })
        ));
        assert!(matches!(
            Formula::empty(3, 1),
            Err(FormulaError::WidthTooSmall { .. })
        ));
        assert!(matches!(
            Formula::empty(65, 2),
            Err(FormulaError::TooManyVariables { .. })
        ));
    }

    #[test]
    fn duplicates_collapse_and_order_is_canonical() {
        let f = Formula::from_dimacs(4, 2, &[&[3, 4], &[2, 1], &[1, 2], &[-1, 2]]).unwrap();
        assert_eq!(f.len(), 3);
        let text: Vec<_> = f.clauses().iter().map(|c| alloc::format!("{c}")).collect();
        assert_eq!(text, ["1 2", "-1 2", "3 4"]);
    }

    #[test]
    fn satisfaction() {
        let c = Clause::from_literals(&[Literal::pos(0), Literal::neg(2)]).unwrap();
        assert!(c.satisfied_by(0b001));
        assert!(!c.satisfied_by(0b101));
        assert!(c.contains(Literal::neg(2)));
        assert!(!c.contains(Literal::pos(2)));
    }
}
