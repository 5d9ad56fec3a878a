//! Partially ordered patterns and the claw families built from them.
//!
//! A POP of size `m` is a strict partial order on the position labels `1..=m`.
//! A subsequence is an occurrence when every relation `x > y` of the order holds
//! between the values at positions `x` and `y`; incomparable labels are
//! unconstrained. A classical pattern is the special case of a chain.

use std::fmt;
use std::str::FromStr;

use itertools::Itertools;
use thiserror::Error;

use crate::boards::{FerrersBoard, Transversal};

/// Labels are packed into a `u64` per row of the relation matrix.
pub const MAX_POP_SIZE: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PopError {
    #[error("relations contain a cycle through label {label}")]
    CycleDetected { label: usize },
    #[error("label {label} is outside 1..={size}")]
    LabelOutOfRange { label: usize, size: usize },
    #[error("apex {apex} exceeds the pattern size {size}")]
    ApexOutOfRange { apex: usize, size: usize },
    #[error("invalid parameter: {0}")]
    InvalidParam(String),
    #[error("cannot parse {what}: {input:?}")]
    Parse { what: &'static str, input: String },
}

/// A strict partial order on `1..=size`, kept transitively closed.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Pop {
    size: usize,
    /// `below[x - 1]` has bit `y - 1` set iff `x > y` in the order.
    below: Vec<u64>,
}

impl Pop {
    /// Builds the order generated by `relations`, each pair reading `(x, y)` as `x > y`.
    pub fn new(size: usize, relations: &[(usize, usize)]) -> Result<Self, PopError> {
        if size == 0 || size > MAX_POP_SIZE {
            return Err(PopError::InvalidParam(format!(
                "POP size must lie in 1..={MAX_POP_SIZE}, got {size}"
            )));
        }
        let mut below = vec![0u64; size];
        for &(x, y) in relations {
            for label in [x, y] {
                if label == 0 || label > size {
                    return Err(PopError::LabelOutOfRange { label, size });
                }
            }
            below[x - 1] |= 1 << (y - 1);
        }
        // Warshall closure on bit rows.
        for k in 0..size {
            for i in 0..size {
                if below[i] >> k & 1 == 1 {
                    below[i] |= below[k];
                }
            }
        }
        if let Some(i) = (0..size).find(|&i| below[i] >> i & 1 == 1) {
            return Err(PopError::CycleDetected { label: i + 1 });
        }
        Ok(Pop { size, below })
    }

    /// The chain POP of a classical pattern such as `[2, 3, 1]`.
    pub fn classical(pattern: &[usize]) -> Result<Self, PopError> {
        let m = pattern.len();
        if !pattern.iter().copied().sorted().eq(1..=m) {
            return Err(PopError::InvalidParam(format!(
                "{pattern:?} is not a permutation"
            )));
        }
        let relations: Vec<_> = (1..=m)
            .cartesian_product(1..=m)
            .filter(|&(x, y)| pattern[x - 1] > pattern[y - 1])
            .collect();
        Pop::new(m, &relations)
    }

    /// The claw of size `size` whose apex label `apex` lies above every other label.
    pub fn claw(size: usize, apex: usize) -> Result<Self, PopError> {
        if apex == 0 || apex > size {
            return Err(PopError::ApexOutOfRange { apex, size });
        }
        let relations: Vec<_> = (1..=size)
            .filter(|&y| y != apex)
            .map(|y| (apex, y))
            .collect();
        Pop::new(size, &relations)
    }

    pub fn size(&self) -> usize {
        self.size
    }

    /// Whether `x > y` in the order.
    pub fn is_above(&self, x: usize, y: usize) -> bool {
        self.below[x - 1] >> (y - 1) & 1 == 1
    }

    /// All closed relations `(x, y)` meaning `x > y`, sorted.
    pub fn relations(&self) -> Vec<(usize, usize)> {
        (1..=self.size)
            .cartesian_product(1..=self.size)
            .filter(|&(x, y)| self.is_above(x, y))
            .collect()
    }

    /// Whether the relation set of `self` contains that of `other`.
    pub fn refines(&self, other: &Pop) -> bool {
        self.size == other.size
            && self
                .below
                .iter()
                .zip(&other.below)
                .all(|(a, b)| a & b == *b)
    }

    /// Whether `values` (length `size`) satisfies every relation.
    pub fn is_realized_by(&self, values: &[usize]) -> bool {
        debug_assert_eq!(values.len(), self.size);
        (0..self.size).all(|x| {
            let mut rest = self.below[x];
            while rest != 0 {
                let y = rest.trailing_zeros() as usize;
                if values[x] <= values[y] {
                    return false;
                }
                rest &= rest - 1;
            }
            true
        })
    }

    /// The classical patterns of length `size` that realize the order, lexicographically.
    pub fn patterns(&self) -> Vec<Vec<usize>> {
        (1..=self.size)
            .permutations(self.size)
            .filter(|p| self.is_realized_by(p))
            .collect()
    }

    /// Position subsets `i_1 < … < i_m` (1-based) of `perm` realizing the order, lexicographically.
    pub fn occurrences_in_permutation(&self, perm: &[usize]) -> Vec<Vec<usize>> {
        let mut picked = Vec::with_capacity(self.size);
        (1..=perm.len())
            .combinations(self.size)
            .filter(|idx| {
                picked.clear();
                picked.extend(idx.iter().map(|&i| perm[i - 1]));
                self.is_realized_by(&picked)
            })
            .collect()
    }

    /// The least (lexicographic in columns) occurrence contained in the board, if any.
    pub fn occurrence_in(&self, t: &Transversal) -> Option<OccurrenceWitness> {
        let board = t.board();
        let mut values = Vec::with_capacity(self.size);
        (1..=t.order()).combinations(self.size).find_map(|columns| {
            values.clear();
            values.extend(columns.iter().map(|&c| t.value_at(c)));
            if !self.is_realized_by(&values) {
                return None;
            }
            let top = *values.iter().max().expect("non-empty pattern");
            let right = *columns.last().expect("non-empty pattern");
            board.contains_cell(top, right).then(|| OccurrenceWitness {
                columns,
                values: values.clone(),
            })
        })
    }
}

impl fmt::Display for Pop {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:", self.size)?;
        let rels = self.relations();
        for (i, (x, y)) in rels.iter().enumerate() {
            let sep = if i == 0 { " " } else { ", " };
            write!(f, "{sep}{x}>{y}")?;
        }
        Ok(())
    }
}

impl FromStr for Pop {
    type Err = PopError;

    /// `m: x>y, x>z, ...`; the relation list may be empty.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || PopError::Parse {
            what: "POP",
            input: s.to_string(),
        };
        let (size, rest) = s.split_once(':').ok_or_else(bad)?;
        let size: usize = size.trim().parse().map_err(|_| bad())?;
        let mut relations = Vec::new();
        for item in rest.split(',').map(str::trim).filter(|x| !x.is_empty()) {
            let (x, y) = item.split_once('>').ok_or_else(bad)?;
            let x = x.trim().parse().map_err(|_| bad())?;
            let y = y.trim().parse().map_err(|_| bad())?;
            relations.push((x, y));
        }
        Pop::new(size, &relations)
    }
}

/// Columns and values certifying an occurrence inside a board.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OccurrenceWitness {
    pub columns: Vec<usize>,
    pub values: Vec<usize>,
}

/// Whether every cell of the rectangle spanned by `columns` × rows-of-`values` is on the board.
pub fn rectangle_in_board(board: &FerrersBoard, columns: &[usize], values: &[usize]) -> bool {
    values
        .iter()
        .all(|&v| columns.iter().all(|&c| board.contains_cell(v, c)))
}

/// Whether `t` contains no member of `pops`.
pub fn avoids<P: AsRef<[Pop]> + ?Sized>(t: &Transversal, pops: &P) -> bool {
    pops.as_ref().iter().all(|p| p.occurrence_in(t).is_none())
}

/// The parameters `(m, k, d)` shared by every family `P^a_(m,k,d)` with a legal apex base.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ClawShape {
    pub m: usize,
    pub k: usize,
    pub d: usize,
}

impl ClawShape {
    /// Requires `m ≥ 1` and `kd + 1 ≤ m`, so that `a = 1` is legal. `d` is
    /// normalized to 0 when `k = 0`.
    pub fn new(m: usize, k: usize, d: usize) -> Result<Self, PopError> {
        let d = if k == 0 { 0 } else { d };
        if m == 0 {
            return Err(PopError::InvalidParam("m must be positive".into()));
        }
        if k * d + 1 > m {
            return Err(PopError::InvalidParam(format!(
                "kd + 1 = {} exceeds m = {m}",
                k * d + 1
            )));
        }
        Ok(ClawShape { m, k, d })
    }

    /// Apex bases `a` with `a + kd ≤ m`.
    pub fn legal_bases(&self) -> std::ops::RangeInclusive<usize> {
        1..=self.m - self.k * self.d
    }
}

impl fmt::Display for ClawShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{},{}", self.m, self.k, self.d)
    }
}

/// The family `P^a_(m,k,d)`: claws of size `m` with apexes `a, a + d, …, a + kd`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClawFamily {
    shape: ClawShape,
    base: usize,
    claws: Vec<Pop>,
}

impl ClawFamily {
    pub fn new(m: usize, k: usize, d: usize, a: usize) -> Result<Self, PopError> {
        if m == 0 || a == 0 {
            return Err(PopError::InvalidParam("m and a must be positive".into()));
        }
        let d = if k == 0 { 0 } else { d };
        let top = a + k * d;
        if top > m {
            return Err(PopError::ApexOutOfRange { apex: top, size: m });
        }
        let shape = ClawShape::new(m, k, d)?;
        ClawFamily::with_shape(shape, a)
    }

    pub fn with_shape(shape: ClawShape, a: usize) -> Result<Self, PopError> {
        let top = a + shape.k * shape.d;
        if a == 0 {
            return Err(PopError::InvalidParam("a must be positive".into()));
        }
        if top > shape.m {
            return Err(PopError::ApexOutOfRange {
                apex: top,
                size: shape.m,
            });
        }
        let claws = (0..=shape.k)
            .map(|j| Pop::claw(shape.m, a + j * shape.d))
            .collect::<Result<_, _>>()?;
        Ok(ClawFamily {
            shape,
            base: a,
            claws,
        })
    }

    pub fn shape(&self) -> ClawShape {
        self.shape
    }

    pub fn m(&self) -> usize {
        self.shape.m
    }

    pub fn k(&self) -> usize {
        self.shape.k
    }

    pub fn d(&self) -> usize {
        self.shape.d
    }

    /// The base apex `a`.
    pub fn base(&self) -> usize {
        self.base
    }

    /// Apex labels `a + jd` for `j = 0..=k`, increasing.
    pub fn apexes(&self) -> impl Iterator<Item = usize> + '_ {
        (0..=self.shape.k).map(move |j| self.base + j * self.shape.d)
    }

    pub fn claws(&self) -> &[Pop] {
        &self.claws
    }

    /// First member with an occurrence in `t`, paired with its least witness.
    pub fn occurrence_in(&self, t: &Transversal) -> Option<(usize, OccurrenceWitness)> {
        self.claws
            .iter()
            .enumerate()
            .find_map(|(j, p)| p.occurrence_in(t).map(|w| (j, w)))
    }
}

impl AsRef<[Pop]> for ClawFamily {
    fn as_ref(&self) -> &[Pop] {
        &self.claws
    }
}

impl fmt::Display for ClawFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{}", self.shape, self.base)
    }
}

impl FromStr for ClawFamily {
    type Err = PopError;

    /// `m,k,d,a`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || PopError::Parse {
            what: "family",
            input: s.to_string(),
        };
        let nums: Vec<usize> = s
            .split(',')
            .map(|x| x.trim().parse())
            .collect::<Result<_, _>>()
            .map_err(|_| bad())?;
        match nums[..] {
            [m, k, d, a] => ClawFamily::new(m, k, d, a),
            _ => Err(bad()),
        }
    }
}
