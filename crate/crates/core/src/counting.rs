//! Exact avoider counts: closed forms, brute force, and certificates.

use std::collections::HashSet;
use std::thread;

use thiserror::Error;

use crate::boards::{feasible_boards, BoardError, FerrersBoard, Transversal};
use crate::codec::{transfer, valid_count, CodecError};
use crate::count::Count;
use crate::pops::{avoids, ClawFamily, ClawShape, Pop};

/// Largest board order brute force will enumerate unless configured otherwise.
pub const DEFAULT_CAP: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CountError {
    #[error("board order {n} exceeds the brute-force cap {cap}")]
    CapExceeded { n: usize, cap: usize },
    #[error("count overflowed the target integer type")]
    Overflow,
    #[error("families {a} and {b} differ in m, k or d")]
    ParamMismatch { a: String, b: String },
    #[error("equivalence violated on board {board}: {reason}")]
    EquivalenceViolated { board: String, reason: String },
    #[error("invalid parameter: {0}")]
    InvalidParam(String),
    #[error(transparent)]
    Board(#[from] BoardError),
    #[error(transparent)]
    Codec(#[from] CodecError),
}

fn lift<C: Count>(x: usize) -> Result<C, CountError> {
    C::from_usize(x).ok_or(CountError::Overflow)
}

fn product<C: Count, I: IntoIterator<Item = usize>>(factors: I) -> Result<C, CountError> {
    factors.into_iter().try_fold(C::one(), |acc, f| {
        acc.checked_mul(&lift(f)?).ok_or(CountError::Overflow)
    })
}

fn factorial<C: Count>(n: usize) -> Result<C, CountError> {
    product(1..=n)
}

/// `∏_t f(l_t)` over the white profile, with `f(l) = l` below `m` and the
/// valid-set size from `m` on.
pub fn count_avoiders_formula<C: Count>(
    board: &FerrersBoard,
    family: &ClawFamily,
) -> Result<C, CountError> {
    let profile = board.white_profile()?;
    let shape = family.shape();
    product(profile.into_iter().map(|l| valid_count(l, shape)))
}

/// Avoiders of the family on the `n × n` square.
pub fn count_square_formula<C: Count>(n: usize, shape: ClawShape) -> Result<C, CountError> {
    let ClawShape { m, k, d } = shape;
    if n < m {
        return factorial(n);
    }
    let tail = m - k * d - 1;
    let long_rows = n.saturating_sub(d + m - 1);
    let middle = (m..=(d + m - 1).min(n)).map(|l| tail + k * (d + m - 1 - l));
    let tail_part: C = product(std::iter::repeat_n(tail, long_rows))?;
    let middle_part: C = product(middle)?;
    let head: C = factorial(m - 1)?;
    tail_part
        .checked_mul(&middle_part)
        .and_then(|x| x.checked_mul(&head))
        .ok_or(CountError::Overflow)
}

/// Permutations of length `n` avoiding one claw of size `m`.
pub fn count_single_claw<C: Count>(n: usize, m: usize) -> Result<C, CountError> {
    if n == 0 || m == 0 {
        return Err(CountError::InvalidParam("n and m must be positive".into()));
    }
    if n < m {
        return factorial(n);
    }
    let head: C = factorial(m - 1)?;
    let power: C = product(std::iter::repeat_n(m - 1, n - m + 1))?;
    head.checked_mul(&power).ok_or(CountError::Overflow)
}

/// Exhaustive enumeration settings.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BruteForce {
    pub cap: usize,
    pub jobs: usize,
}

impl Default for BruteForce {
    fn default() -> Self {
        BruteForce {
            cap: DEFAULT_CAP,
            jobs: 1,
        }
    }
}

impl BruteForce {
    pub fn with_cap(cap: usize) -> Self {
        BruteForce {
            cap,
            ..Self::default()
        }
    }

    pub fn jobs(self, jobs: usize) -> Self {
        BruteForce {
            jobs: jobs.max(1),
            ..self
        }
    }

    fn check_cap(&self, board: &FerrersBoard) -> Result<(), CountError> {
        if board.order() > self.cap {
            return Err(CountError::CapExceeded {
                n: board.order(),
                cap: self.cap,
            });
        }
        Ok(())
    }

    /// Transversals of `board` avoiding every member of `pops`, in lexicographic order.
    pub fn avoiders<P>(
        &self,
        board: &FerrersBoard,
        pops: &P,
    ) -> Result<Vec<Transversal>, CountError>
    where
        P: AsRef<[Pop]> + Sync + ?Sized,
    {
        self.check_cap(board)?;
        let all: Vec<Transversal> = board.transversals().collect();
        if self.jobs <= 1 || all.len() < 2 * self.jobs {
            return Ok(all.into_iter().filter(|t| avoids(t, pops)).collect());
        }
        let chunk = all.len().div_ceil(self.jobs);
        let kept: Vec<Vec<Transversal>> = thread::scope(|s| {
            let handles: Vec<_> = all
                .chunks(chunk)
                .map(|part| {
                    s.spawn(move || part.iter().filter(|t| avoids(t, pops)).cloned().collect())
                })
                .collect();
            handles
                .into_iter()
                .map(|h| h.join().expect("worker panicked"))
                .collect()
        });
        Ok(kept.into_iter().flatten().collect())
    }

    /// `|S_λ(pops)|` by enumeration.
    pub fn count<C: Count, P>(&self, board: &FerrersBoard, pops: &P) -> Result<C, CountError>
    where
        P: AsRef<[Pop]> + Sync + ?Sized,
    {
        lift(self.avoiders(board, pops)?.len())
    }
}

/// Brute-force count with the default settings.
pub fn count_avoiders_bruteforce<C: Count>(
    board: &FerrersBoard,
    family: &ClawFamily,
) -> Result<C, CountError> {
    BruteForce::default().count(board, family)
}

/// Result of comparing two families on one board.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountReport<C> {
    pub board: FerrersBoard,
    pub family_a: ClawFamily,
    pub family_b: Option<ClawFamily>,
    pub method: &'static str,
    pub count_a: C,
    pub count_b: Option<C>,
    /// Number of transversals pushed through the transfer map and back.
    pub pairs_checked: Option<usize>,
}

impl<C> CountReport<C> {
    pub fn certified(&self) -> bool {
        self.pairs_checked.is_some()
    }
}

/// Brute-force counts for both families, plus a check that `transfer` is a
/// bijection between the two avoider sets that inverts back to the identity.
pub fn equivalence_check<C: Count>(
    board: &FerrersBoard,
    a: &ClawFamily,
    b: &ClawFamily,
    brute: &BruteForce,
) -> Result<CountReport<C>, CountError> {
    if a.shape() != b.shape() {
        return Err(CountError::ParamMismatch {
            a: a.to_string(),
            b: b.to_string(),
        });
    }
    let violated = |reason: String| CountError::EquivalenceViolated {
        board: board.to_string(),
        reason,
    };
    let left = brute.avoiders(board, a)?;
    let right = brute.avoiders(board, b)?;
    if left.len() != right.len() {
        return Err(violated(format!(
            "{} avoiders of {a} but {} of {b}",
            left.len(),
            right.len()
        )));
    }
    let right_set: HashSet<&Transversal> = right.iter().collect();
    let mut images = HashSet::with_capacity(left.len());
    for t in &left {
        let image = transfer(t, a, b)?;
        if !right_set.contains(&image) {
            return Err(violated(format!(
                "{t} maps to {image}, which does not avoid {b}"
            )));
        }
        let back = transfer(&image, b, a)?;
        if &back != t {
            return Err(violated(format!("{t} maps to {image} and back to {back}")));
        }
        if !images.insert(image.clone()) {
            return Err(violated(format!("{image} is hit twice")));
        }
    }
    Ok(CountReport {
        board: board.clone(),
        family_a: a.clone(),
        family_b: Some(b.clone()),
        method: "bruteforce+transfer",
        count_a: lift(left.len())?,
        count_b: Some(lift(right.len())?),
        pairs_checked: Some(left.len()),
    })
}

/// A board on which two families have different avoider counts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Distinguisher<C> {
    pub board: FerrersBoard,
    pub count_a: C,
    pub count_b: C,
}

/// Scans boards by increasing order, the square first and then every feasible
/// board of that order lexicographically, and returns the first on which the
/// formula counts differ. The hit is confirmed by brute force.
pub fn distinguishing_board_search<C: Count>(
    a: &ClawFamily,
    b: &ClawFamily,
    max_n: usize,
    brute: &BruteForce,
) -> Result<Option<Distinguisher<C>>, CountError> {
    if max_n > brute.cap {
        return Err(CountError::CapExceeded {
            n: max_n,
            cap: brute.cap,
        });
    }
    for n in 1..=max_n {
        let square = FerrersBoard::square(n);
        let rest = feasible_boards(n).into_iter().filter(|b| !b.is_square());
        for board in std::iter::once(square).chain(rest) {
            let count_a: C = count_avoiders_formula(&board, a)?;
            let count_b: C = count_avoiders_formula(&board, b)?;
            if count_a == count_b {
                continue;
            }
            let brute_a: C = brute.count(&board, a)?;
            let brute_b: C = brute.count(&board, b)?;
            if brute_a != count_a || brute_b != count_b {
                return Err(CountError::EquivalenceViolated {
                    board: board.to_string(),
                    reason: format!(
                        "formula gives {count_a} vs {count_b}, enumeration gives {brute_a} vs {brute_b}"
                    ),
                });
            }
            return Ok(Some(Distinguisher {
                board,
                count_a,
                count_b,
            }));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::count::ExactCount;

    fn fam(m: usize, k: usize, d: usize, a: usize) -> ClawFamily {
        ClawFamily::new(m, k, d, a).unwrap()
    }

    fn shape(m: usize, k: usize, d: usize) -> ClawShape {
        ClawShape::new(m, k, d).unwrap()
    }

    fn figure_board() -> FerrersBoard {
        "6,6,6,6,5,3".parse().unwrap()
    }

    #[test]
    fn figure_board_counts() {
        let b = figure_board();
        assert_eq!(
            count_avoiders_formula::<u64>(&b, &fam(4, 1, 2, 1)).unwrap(),
            72
        );
        assert_eq!(
            count_avoiders_bruteforce::<u64>(&b, &fam(4, 1, 2, 1)).unwrap(),
            72
        );
    }

    #[test]
    fn square_counts() {
        let sq6 = FerrersBoard::square(6);
        assert_eq!(
            count_avoiders_formula::<u64>(&sq6, &fam(4, 1, 2, 1)).unwrap(),
            12
        );
        assert_eq!(
            count_avoiders_bruteforce::<u64>(&sq6, &fam(4, 1, 2, 1)).unwrap(),
            12
        );
        assert_eq!(count_square_formula::<u64>(6, shape(4, 1, 2)).unwrap(), 12);
        assert_eq!(count_square_formula::<u64>(6, shape(3, 0, 0)).unwrap(), 32);
        assert_eq!(count_square_formula::<u64>(3, shape(4, 1, 2)).unwrap(), 6);
        let sq4 = FerrersBoard::square(4);
        assert_eq!(
            count_avoiders_bruteforce::<u64>(&sq4, &fam(3, 0, 0, 1)).unwrap(),
            8
        );
        assert_eq!(
            count_avoiders_bruteforce::<u64>(&sq4, &fam(5, 1, 1, 2)).unwrap(),
            24
        );
    }

    #[test]
    fn zero_factor() {
        // a = 1, m = kd + 1 and every l ≥ d(k + 1).
        let f = fam(3, 2, 1, 1);
        assert_eq!(
            count_avoiders_formula::<u64>(&FerrersBoard::square(4), &f).unwrap(),
            0
        );
        assert_eq!(
            count_avoiders_bruteforce::<u64>(&FerrersBoard::square(4), &f).unwrap(),
            0
        );
    }

    #[test]
    fn single_claw() {
        assert_eq!(count_single_claw::<u64>(6, 3).unwrap(), 32);
        assert_eq!(count_single_claw::<u64>(5, 5).unwrap(), 96);
        assert_eq!(count_single_claw::<u64>(2, 3).unwrap(), 2);
        assert!(count_single_claw::<u64>(0, 3).is_err());
    }

    #[test]
    fn overflow_is_reported() {
        assert_eq!(count_single_claw::<u8>(9, 3), Err(CountError::Overflow));
        assert_eq!(
            count_square_formula::<u32>(40, shape(3, 0, 0)),
            Err(CountError::Overflow)
        );
        let big: ExactCount = count_square_formula(40, shape(3, 0, 0)).unwrap();
        assert_eq!(big, ExactCount::from(2u8).pow(39));
    }

    #[test]
    fn cap_is_enforced() {
        let brute = BruteForce::with_cap(5);
        let err = brute
            .count::<u64, _>(&FerrersBoard::square(6), &fam(3, 0, 0, 1))
            .unwrap_err();
        assert_eq!(err, CountError::CapExceeded { n: 6, cap: 5 });
    }

    #[test]
    fn parallel_matches_serial() {
        let b = FerrersBoard::square(7);
        let f = fam(4, 1, 2, 2);
        let serial: u64 = BruteForce::default().count(&b, &f).unwrap();
        let parallel: u64 = BruteForce::default().jobs(4).count(&b, &f).unwrap();
        assert_eq!(serial, parallel);
        assert_eq!(
            BruteForce::default().avoiders(&b, &f).unwrap(),
            BruteForce::default().jobs(3).avoiders(&b, &f).unwrap()
        );
    }

    #[test]
    fn equivalence_reports() {
        let brute = BruteForce::default();
        let r: CountReport<u64> =
            equivalence_check(&figure_board(), &fam(4, 1, 2, 1), &fam(4, 1, 2, 2), &brute).unwrap();
        assert_eq!((r.count_a, r.count_b), (72, Some(72)));
        assert_eq!(r.pairs_checked, Some(72));
        let r: CountReport<u64> = equivalence_check(
            &FerrersBoard::square(4),
            &fam(3, 0, 0, 1),
            &fam(3, 0, 0, 2),
            &brute,
        )
        .unwrap();
        assert_eq!((r.count_a, r.count_b), (8, Some(8)));
        let r: CountReport<u64> = equivalence_check(
            &FerrersBoard::square(4),
            &fam(3, 2, 1, 1),
            &fam(3, 2, 1, 1),
            &brute,
        )
        .unwrap();
        assert_eq!((r.count_a, r.pairs_checked), (0, Some(0)));
        assert!(matches!(
            equivalence_check::<u64>(&figure_board(), &fam(4, 1, 2, 1), &fam(4, 1, 1, 1), &brute),
            Err(CountError::ParamMismatch { .. })
        ));
    }

    #[test]
    fn distinguishers() {
        let brute = BruteForce::default();
        let hit = distinguishing_board_search::<u64>(&fam(4, 1, 1, 1), &fam(4, 1, 2, 2), 6, &brute)
            .unwrap()
            .unwrap();
        assert_eq!(hit.board, FerrersBoard::square(5));
        assert_eq!((hit.count_a, hit.count_b), (24, 12));
        let none =
            distinguishing_board_search::<u64>(&fam(4, 1, 2, 1), &fam(4, 1, 2, 2), 6, &brute)
                .unwrap();
        assert_eq!(none, None);
        assert!(matches!(
            distinguishing_board_search::<u64>(&fam(3, 0, 0, 1), &fam(4, 0, 0, 2), 9, &brute),
            Err(CountError::CapExceeded { .. })
        ));
    }
}
