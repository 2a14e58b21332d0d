//! Exact backtracking search: completion, counting and minimal embeddings.
//!
//! Conflicts are tracked in three `u128` masks (columns, plus-diagonals,
//! minus-diagonals) plus a mask of filled rows, which bounds the board at
//! [`MAX_EXACT_N`]. The search always branches on the empty row with the
//! fewest available squares, breaking ties by the lowest row index.

use std::ops::ControlFlow;

use crate::board::{PartialConfig, Square};
use crate::error::{QueensError, Result};

/// Largest board the bitmask search accepts (`2n - 1` diagonal bits must fit in a `u128`).
pub const MAX_EXACT_N: usize = 64;

/// Default ceiling for [`enumerate_all`].
pub const ENUMERATION_CEILING: usize = 12;

/// Limits on a search. Zero means unlimited.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SolveBudget {
    pub node_limit: u64,
    pub solution_cap: u64,
}

impl SolveBudget {
    pub const UNLIMITED: SolveBudget = SolveBudget {
        node_limit: 0,
        solution_cap: 0,
    };

    pub fn with_node_limit(node_limit: u64) -> Self {
        SolveBudget {
            node_limit,
            ..Self::UNLIMITED
        }
    }

    pub fn with_solution_cap(solution_cap: u64) -> Self {
        SolveBudget {
            solution_cap,
            ..Self::UNLIMITED
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Completion {
    /// A full configuration containing the input.
    Completed(PartialConfig),
    /// The search tree was fully explored without finding a completion.
    Incompletable,
    /// The node limit ran out first. This is not a proof of anything.
    BudgetExhausted,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CountResult {
    pub count: u64,
    /// True when the node limit or solution cap stopped the search early,
    /// in which case `count` is only a lower bound.
    pub exhausted: bool,
    pub nodes: u64,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Branching {
    FailFirst,
    RowOrder,
}

struct Search {
    n: usize,
    full: u128,
    open_rows: u128,
    cols: u128,
    /// bit `r + c` (0-based) for each occupied plus-diagonal
    plus: u128,
    /// bit `c - r + n - 1` (0-based) for each occupied minus-diagonal
    minus: u128,
    placement: Vec<Option<usize>>,
    branching: Branching,
    nodes: u64,
    node_limit: u64,
    aborted: bool,
}

impl Search {
    fn new(cfg: &PartialConfig, branching: Branching, node_limit: u64) -> Result<Self> {
        let n = cfg.n();
        if n > MAX_EXACT_N {
            return Err(QueensError::TooLarge {
                what: "exact search",
                limit: MAX_EXACT_N,
                got: n,
            });
        }
        let full = if n == 128 { u128::MAX } else { (1u128 << n) - 1 };
        let mut s = Search {
            n,
            full,
            open_rows: full,
            cols: 0,
            plus: 0,
            minus: 0,
            placement: vec![None; n],
            branching,
            nodes: 0,
            node_limit,
            aborted: false,
        };
        // PartialConfig guarantees the queens are mutually non-attacking.
        for q in cfg.queens() {
            s.place(q.row - 1, q.col - 1);
        }
        Ok(s)
    }

    fn available(&self, r: usize) -> u128 {
        self.full & !self.cols & !(self.plus >> r) & !(self.minus >> (self.n - 1 - r))
    }

    fn place(&mut self, r: usize, c: usize) {
        self.open_rows &= !(1 << r);
        self.cols |= 1 << c;
        self.plus |= 1 << (r + c);
        self.minus |= 1 << (c + self.n - 1 - r);
        self.placement[r] = Some(c);
    }

    fn unplace(&mut self, r: usize, c: usize) {
        self.open_rows |= 1 << r;
        self.cols &= !(1 << c);
        self.plus &= !(1 << (r + c));
        self.minus &= !(1 << (c + self.n - 1 - r));
        self.placement[r] = None;
    }

    fn choose_row(&self) -> Option<(usize, u128)> {
        let mut rows = self.open_rows;
        let mut best: Option<(usize, u128)> = None;
        while rows != 0 {
            let r = rows.trailing_zeros() as usize;
            rows &= rows - 1;
            let avail = self.available(r);
            if self.branching == Branching::RowOrder {
                return Some((r, avail));
            }
            let better = match best {
                None => true,
                Some((_, b)) => avail.count_ones() < b.count_ones(),
            };
            if better {
                best = Some((r, avail));
                if avail == 0 {
                    break;
                }
            }
        }
        best
    }

    /// Depth-first search; `visit` sees the column of every row for each full configuration.
    fn run<F>(&mut self, visit: &mut F) -> ControlFlow<()>
    where
        F: FnMut(&[Option<usize>]) -> ControlFlow<()>,
    {
        self.nodes += 1;
        if self.node_limit > 0 && self.nodes > self.node_limit {
            self.aborted = true;
            return ControlFlow::Break(());
        }
        let Some((r, mut avail)) = self.choose_row() else {
            return visit(&self.placement);
        };
        while avail != 0 {
            let c = avail.trailing_zeros() as usize;
            avail &= avail - 1;
            self.place(r, c);
            let flow = self.run(visit);
            self.unplace(r, c);
            flow?;
        }
        ControlFlow::Continue(())
    }
}

fn placement_to_config(n: usize, placement: &[Option<usize>]) -> PartialConfig {
    let queens = placement
        .iter()
        .enumerate()
        .map(|(r, c)| Square::new(r + 1, c.expect("full placement") + 1));
    PartialConfig::new(n, queens).expect("search only produces valid configurations")
}

/// Walks every completion of `cfg`. Returns `true` when the walk was cut
/// short by the node limit (a `Break` from `visit` is not counted as that).
pub fn for_each_completion<F>(cfg: &PartialConfig, node_limit: u64, mut visit: F) -> Result<bool>
where
    F: FnMut(&PartialConfig) -> ControlFlow<()>,
{
    let mut search = Search::new(cfg, Branching::FailFirst, node_limit)?;
    let n = cfg.n();
    let _ = search.run(&mut |p: &[Option<usize>]| visit(&placement_to_config(n, p)));
    Ok(search.aborted)
}

/// Finds one completion of `cfg`, or proves there is none.
pub fn complete(cfg: &PartialConfig, budget: SolveBudget) -> Result<Completion> {
    let mut found = None;
    let aborted = for_each_completion(cfg, budget.node_limit, |q| {
        found = Some(q.clone());
        ControlFlow::Break(())
    })?;
    Ok(match found {
        Some(q) => Completion::Completed(q),
        None if aborted => Completion::BudgetExhausted,
        None => Completion::Incompletable,
    })
}

/// Counts the full configurations containing `cfg`.
pub fn count_completions(cfg: &PartialConfig, budget: SolveBudget) -> Result<CountResult> {
    let mut search = Search::new(cfg, Branching::FailFirst, budget.node_limit)?;
    let mut count = 0u64;
    let mut capped = false;
    let _ = search.run(&mut |_: &[Option<usize>]| {
        count += 1;
        if budget.solution_cap > 0 && count >= budget.solution_cap {
            capped = true;
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    });
    Ok(CountResult {
        count,
        exhausted: search.aborted || capped,
        nodes: search.nodes,
    })
}

/// `Q(n)`, the number of `n`-queens configurations, for `n <= ENUMERATION_CEILING`.
pub fn enumerate_all(n: usize) -> Result<u64> {
    enumerate_all_with_ceiling(n, ENUMERATION_CEILING)
}

pub fn enumerate_all_with_ceiling(n: usize, ceiling: usize) -> Result<u64> {
    if n > ceiling {
        return Err(QueensError::TooLarge {
            what: "full enumeration",
            limit: ceiling,
            got: n,
        });
    }
    Ok(count_completions(&PartialConfig::empty(n)?, SolveBudget::UNLIMITED)?.count)
}

/// The lexicographically first `n`-queens configuration, comparing the
/// column sequence row by row.
pub fn lexicographic_first(n: usize) -> Result<Option<PartialConfig>> {
    let mut search = Search::new(&PartialConfig::empty(n)?, Branching::RowOrder, 0)?;
    let mut found = None;
    let _ = search.run(&mut |p: &[Option<usize>]| {
        found = Some(placement_to_config(n, p));
        ControlFlow::Break(())
    });
    Ok(found)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Embedding {
    pub n_star: usize,
    /// Row and column offsets `(i0, j0)` applied to every queen.
    pub offset: (usize, usize),
    pub completion: PartialConfig,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EmbeddingOutcome {
    Found(Embedding),
    NotFoundBelowCeiling,
}

/// Smallest `n* >= n` such that `cfg`, shifted by some offset onto an
/// `n* x n*` board, is completable. Candidates are tried with `n*`
/// ascending and offsets in lexicographic order; the first hit wins.
pub fn min_embedding(cfg: &PartialConfig, n_ceiling: usize) -> Result<EmbeddingOutcome> {
    let n = cfg.n();
    for n_star in n..=n_ceiling {
        for i0 in 0..=n_star - n {
            for j0 in 0..=n_star - n {
                let shifted = cfg.shifted(n_star, i0, j0)?;
                if let Completion::Completed(q) = complete(&shifted, SolveBudget::UNLIMITED)? {
                    return Ok(EmbeddingOutcome::Found(Embedding {
                        n_star,
                        offset: (i0, j0),
                        completion: q,
                    }));
                }
            }
        }
    }
    Ok(EmbeddingOutcome::NotFoundBelowCeiling)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::board::{is_valid_partial, Symmetry};

    fn nauck() -> PartialConfig {
        PartialConfig::new(8, [Square::new(4, 2), Square::new(5, 4)]).unwrap()
    }

    /// Independent oracle: all row permutations, filtered on diagonal clashes.
    fn permutation_count(n: usize, fixed: &[Square]) -> u64 {
        use itertools::Itertools;
        (0..n)
            .permutations(n)
            .filter(|p| {
                (0..n).all(|a| {
                    ((a + 1)..n).all(|b| (p[a] as isize - p[b] as isize).unsigned_abs() != b - a)
                })
            })
            .filter(|p| fixed.iter().all(|q| p[q.row - 1] == q.col - 1))
            .count() as u64
    }

    #[test]
    fn nauck_completes_with_two_completions() {
        match complete(&nauck(), SolveBudget::UNLIMITED).unwrap() {
            Completion::Completed(q) => {
                assert!(nauck().is_subset_of(&q));
                assert!(q.is_complete());
                assert!(is_valid_partial(q.queens(), 8).unwrap());
            }
            other => panic!("{other:?}"),
        }
        let c = count_completions(&nauck(), SolveBudget::UNLIMITED).unwrap();
        assert_eq!(c.count, 2);
        assert!(!c.exhausted);
        assert_eq!(permutation_count(8, nauck().queens()), 2);
    }

    #[test]
    fn small_boards() {
        let empty = |n| PartialConfig::empty(n).unwrap();
        assert_eq!(complete(&empty(3), SolveBudget::UNLIMITED).unwrap(), Completion::Incompletable);
        assert_eq!(complete(&empty(2), SolveBudget::UNLIMITED).unwrap(), Completion::Incompletable);
        let Completion::Completed(q4) = complete(&empty(4), SolveBudget::UNLIMITED).unwrap() else {
            panic!("4-queens exists");
        };
        let sols: Vec<Vec<Square>> = vec![
            vec![Square::new(1, 2), Square::new(2, 4), Square::new(3, 1), Square::new(4, 3)],
            vec![Square::new(1, 3), Square::new(2, 1), Square::new(3, 4), Square::new(4, 2)],
        ];
        assert!(sols.contains(&q4.queens().to_vec()));
        assert_eq!(enumerate_all(1).unwrap(), 1);
        assert_eq!(enumerate_all(2).unwrap(), 0);
        assert_eq!(enumerate_all(3).unwrap(), 0);
    }

    #[test]
    fn counts_agree_with_permutation_oracle() {
        for n in 1..=8 {
            assert_eq!(enumerate_all(n).unwrap(), permutation_count(n, &[]), "n = {n}");
        }
    }

    #[test]
    fn enumeration_ceiling_is_enforced() {
        assert!(matches!(enumerate_all(13), Err(QueensError::TooLarge { .. })));
        assert!(enumerate_all_with_ceiling(13, 13).is_ok());
    }

    #[test]
    fn budget_exhaustion_is_not_a_proof() {
        let cfg = PartialConfig::empty(30).unwrap();
        assert_eq!(
            complete(&cfg, SolveBudget::with_node_limit(3)).unwrap(),
            Completion::BudgetExhausted
        );
        let c = count_completions(&PartialConfig::empty(8).unwrap(), SolveBudget::with_solution_cap(5))
            .unwrap();
        assert_eq!(c.count, 5);
        assert!(c.exhausted);
    }

    #[test]
    fn lexicographic_first_four() {
        let q = lexicographic_first(4).unwrap().unwrap();
        assert_eq!(
            q.queens(),
            &[Square::new(1, 2), Square::new(2, 4), Square::new(3, 1), Square::new(4, 3)]
        );
        assert!(lexicographic_first(3).unwrap().is_none());
    }

    #[test]
    fn incompletable_is_symmetry_invariant() {
        // a corner queen on the 4x4 board lies in no solution
        let cfg = PartialConfig::new(4, [Square::new(1, 1)]).unwrap();
        for s in Symmetry::ALL {
            assert_eq!(
                complete(&cfg.transformed(s), SolveBudget::UNLIMITED).unwrap(),
                Completion::Incompletable
            );
        }
    }

    #[test]
    fn embedding_examples() {
        match min_embedding(&nauck(), 10).unwrap() {
            EmbeddingOutcome::Found(e) => {
                assert_eq!(e.n_star, 8);
                assert_eq!(e.offset, (0, 0));
            }
            other => panic!("{other:?}"),
        }
        match min_embedding(&PartialConfig::empty(2).unwrap(), 6).unwrap() {
            EmbeddingOutcome::Found(e) => {
                assert_eq!(e.n_star, 4);
                assert_eq!(e.offset, (0, 0));
            }
            other => panic!("{other:?}"),
        }
        assert_eq!(
            min_embedding(&PartialConfig::empty(2).unwrap(), 3).unwrap(),
            EmbeddingOutcome::NotFoundBelowCeiling
        );
    }

    #[test]
    fn refuses_oversized_boards() {
        let cfg = PartialConfig::empty(65).unwrap();
        assert!(matches!(
            complete(&cfg, SolveBudget::UNLIMITED),
            Err(QueensError::TooLarge { .. })
        ));
    }
}
