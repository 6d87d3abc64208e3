use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use super::{Clause, Formula};
use crate::combin::elements;

/// Which isomorphisms identify two formulae.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CopyMode {
    /// Relabeling variables only.
    Relabel,
    /// Relabeling plus negating variables. Not the notion used for
    /// subformula copies; offered for exploration.
    RelabelAndNegate,
}

/// Number of distinct clause subsets of `g` isomorphic to `pattern`.
pub fn count_copies(g: &Formula, pattern: &Formula, mode: CopyMode) -> u64 {
    let mut search = CopySearch::new(g, pattern, mode);
    search.run();
    search.images.len() as u64
}

/// Number of injective variable maps `φ: vars(pattern) → vars(g)` (with sign
/// flips in [`CopyMode::RelabelAndNegate`]) carrying every pattern clause into `g`.
pub fn count_embeddings(g: &Formula, pattern: &Formula, mode: CopyMode) -> u64 {
    let mut search = CopySearch::new(g, pattern, mode);
    search.run();
    search.embeddings
}

struct CopySearch<'a> {
    g: &'a Formula,
    order: Vec<Clause>,
    mode: CopyMode,
    /// image variable per pattern variable
    map: [Option<u8>; 64],
    /// sign flip per pattern variable (only in negate mode)
    flip: u64,
    used: u64,
    chosen: Vec<Clause>,
    images: BTreeSet<Vec<Clause>>,
    embeddings: u64,
}

impl<'a> CopySearch<'a> {
    fn new(g: &'a Formula, pattern: &Formula, mode: CopyMode) -> Self {
        assert_eq!(
            g.k(),
            pattern.k(),
            "copy counting needs equal clause widths"
        );
        // Greedy order: each next clause overlaps the already covered variables
        // as much as possible, which keeps the candidate lists short.
        let mut rest: Vec<Clause> = pattern.clauses().to_vec();
        let mut order = Vec::with_capacity(rest.len());
        let mut covered = 0u64;
        while !rest.is_empty() {
            let (i, _) = rest
                .iter()
                .enumerate()
                .max_by_key(|(i, c)| ((c.vars() & covered).count_ones(), usize::MAX - i))
                .expect("non-empty");
            let c = rest.remove(i);
            covered |= c.vars();
            order.push(c);
        }
        CopySearch {
            g,
            order,
            mode,
            map: [None; 64],
            flip: 0,
            used: 0,
            chosen: Vec::new(),
            images: BTreeSet::new(),
            embeddings: 0,
        }
    }

    fn run(&mut self) {
        if self.order.is_empty() {
            // the empty formula has exactly one copy: the empty subformula
            self.images.insert(Vec::new());
            self.embeddings = 1;
            return;
        }
        self.extend(0);
    }

    fn extend(&mut self, depth: usize) {
        if depth == self.order.len() {
            self.embeddings += 1;
            let mut img = self.chosen.clone();
            img.sort_unstable();
            self.images.insert(img);
            return;
        }
        let c = self.order[depth];
        let mut mapped_img = 0u64;
        let mut unmapped = Vec::new();
        for v in elements(c.vars()) {
            match self.map[v] {
                Some(t) => mapped_img |= 1u64 << t,
                None => unmapped.push(v),
            }
        }
        for idx in 0..self.g.len() {
            let gc = self.g.clauses()[idx];
            if gc.vars() & mapped_img != mapped_img {
                continue;
            }
            // mapped variables must carry matching signs
            let ok = elements(c.vars()).all(|v| match self.map[v] {
                Some(t) => self.sign_matches(v, c, t as usize, gc),
                None => true,
            });
            if !ok {
                continue;
            }
            let free_targets = gc.vars() & !mapped_img;
            if free_targets & self.used != 0 {
                continue;
            }
            let targets: Vec<usize> = elements(free_targets).collect();
            self.chosen.push(gc);
            self.assign(depth, c, gc, &unmapped, &targets, 0);
            self.chosen.pop();
        }
    }

    fn sign_matches(&self, v: usize, c: Clause, t: usize, gc: Clause) -> bool {
        let sv = c.negs() >> v & 1 == 1;
        let st = gc.negs() >> t & 1 == 1;
        let f = self.flip >> v & 1 == 1;
        (sv ^ f) == st
    }

    fn assign(
        &mut self,
        depth: usize,
        c: Clause,
        gc: Clause,
        unmapped: &[usize],
        targets: &[usize],
        i: usize,
    ) {
        if i == unmapped.len() {
            self.extend(depth + 1);
            return;
        }
        let v = unmapped[i];
        for &t in targets {
            if self.used >> t & 1 == 1 {
                continue;
            }
            let sv = c.negs() >> v & 1 == 1;
            let st = gc.negs() >> t & 1 == 1;
            let needs_flip = sv != st;
            if needs_flip && self.mode == CopyMode::Relabel {
                continue;
            }
            self.map[v] = Some(t as u8);
            self.used |= 1u64 << t;
            if needs_flip {
                self.flip |= 1u64 << v;
            }
            self.assign(depth, c, gc, unmapped, targets, i + 1);
            self.map[v] = None;
            self.used &= !(1u64 << t);
            self.flip &= !(1u64 << v);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::blowup;

    fn f(n: usize, k: usize, cs: &[&[i64]]) -> Formula {
        Formula::from_dimacs(n, k, cs).unwrap()
    }

    #[test]
    fn trivial_copies() {
        let b = f(2, 2, &[&[1, 2]]);
        assert_eq!(count_copies(&f(2, 2, &[&[1, 2]]), &b, CopyMode::Relabel), 1);
        // the negated clause is not a relabeling of a monotone clause
        assert_eq!(
            count_copies(&f(3, 2, &[&[1, 2], &[-1, 3]]), &b, CopyMode::Relabel),
            1
        );
        assert_eq!(
            count_copies(
                &f(3, 2, &[&[1, 2], &[-1, 3]]),
                &b,
                CopyMode::RelabelAndNegate
            ),
            2
        );
        // one unordered copy, two labeled embeddings
        assert_eq!(
            count_embeddings(&f(2, 2, &[&[1, 2]]), &b, CopyMode::Relabel),
            2
        );
    }

    #[test]
    fn paths_in_triangle() {
        let tri = Formula::complete_monotone(3, 2).unwrap();
        let path = f(3, 2, &[&[1, 2], &[2, 3]]);
        assert_eq!(count_copies(&tri, &path, CopyMode::Relabel), 3);
        assert_eq!(count_embeddings(&tri, &path, CopyMode::Relabel), 6);
    }

    #[test]
    fn blowup_contains_parallel_pair_obstruction() {
        // {x1x2, x̄1x2}[2] contains {v1v2, v1'v2, v̄1'v2}
        let g = blowup(&f(2, 2, &[&[1, 2], &[-1, 2]]), 2).unwrap();
        let pattern = f(3, 2, &[&[1, 2], &[3, 2], &[-3, 2]]);
        assert!(count_copies(&g, &pattern, CopyMode::Relabel) >= 1);
    }

    #[test]
    fn literal_subset_is_a_copy() {
        let g = f(5, 3, &[&[1, 2, 3], &[-1, 2, 4], &[3, 4, -5], &[1, 4, 5]]);
        let sub = g.filter(|c| !c.is_monotone());
        assert!(count_copies(&g, &sub, CopyMode::Relabel) >= 1);
    }
}
