//! Ferrers boards and their transversals.
//!
//! Boards are drawn in French notation: row lengths weakly increase from the
//! top row to the bottom row. A board is stored by its parts `λ_1 ≥ … ≥ λ_n`,
//! where `λ_v` is the length of the row that holds value `v`. Values are
//! counted bottom-up, so value `v` lives in top-down row `n + 1 - v` and the
//! topmost row carries the largest value.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BoardError {
    #[error("board has no parts")]
    Empty,
    #[error("part {index} is not positive")]
    NonPositivePart { index: usize },
    #[error("parts are not weakly decreasing at position {index}")]
    NotWeaklyDecreasing { index: usize },
    #[error("board admits no transversal")]
    InfeasibleBoard,
    #[error("values are not a permutation of 1..={n}")]
    NotAPermutation { n: usize },
    #[error("the 1 in column {column} lies outside the board")]
    CellOutsideBoard { column: usize },
    #[error("cannot parse {what}: {input:?}")]
    Parse { what: &'static str, input: String },
}

/// A Ferrers board given by weakly decreasing positive parts.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FerrersBoard {
    parts: Vec<usize>,
}

impl FerrersBoard {
    pub fn new(parts: Vec<usize>) -> Result<Self, BoardError> {
        if parts.is_empty() {
            return Err(BoardError::Empty);
        }
        if let Some(index) = parts.iter().position(|&p| p == 0) {
            return Err(BoardError::NonPositivePart { index: index + 1 });
        }
        if let Some(index) = parts.windows(2).position(|w| w[0] < w[1]) {
            return Err(BoardError::NotWeaklyDecreasing { index: index + 2 });
        }
        Ok(FerrersBoard { parts })
    }

    /// The `n × n` square board.
    pub fn square(n: usize) -> Self {
        assert!(n > 0, "square board needs n ≥ 1");
        FerrersBoard { parts: vec![n; n] }
    }

    /// Number of rows.
    pub fn order(&self) -> usize {
        self.parts.len()
    }

    /// Parts `λ_1, …, λ_n`, indexed by value.
    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    /// `λ_v`: length of the row holding value `v` (1-based).
    pub fn row_length_of_value(&self, value: usize) -> usize {
        self.parts[value - 1]
    }

    /// Row lengths `μ_1 ≤ … ≤ μ_n` read from the top row down.
    pub fn row_lengths_top_down(&self) -> Vec<usize> {
        self.parts.iter().rev().copied().collect()
    }

    /// Value carried by top-down row `row` (1-based).
    pub fn value_of_row(&self, row: usize) -> usize {
        self.order() + 1 - row
    }

    pub fn is_square(&self) -> bool {
        self.parts.iter().all(|&p| p == self.order())
    }

    /// `λ_1 = n` and `λ_i ≥ n - i + 1` for every `i`.
    pub fn is_feasible(&self) -> bool {
        let n = self.order();
        self.parts[0] == n && self.parts.iter().enumerate().all(|(i, &p)| p + i >= n)
    }

    /// Whether the cell in column `column` of the row holding `value` is on the board.
    pub fn contains_cell(&self, value: usize, column: usize) -> bool {
        column >= 1 && value >= 1 && value <= self.order() && column <= self.parts[value - 1]
    }

    pub fn cell_count(&self) -> usize {
        self.parts.iter().sum()
    }

    /// White cells in the top row of the white subboard at each insertion step.
    ///
    /// After `t - 1` steps the grayed columns all lie inside row `t`, so the
    /// count is `μ_t - (t - 1)` regardless of where the earlier 1s went.
    pub fn white_profile(&self) -> Result<Vec<usize>, BoardError> {
        if !self.is_feasible() {
            return Err(BoardError::InfeasibleBoard);
        }
        Ok(self
            .row_lengths_top_down()
            .into_iter()
            .enumerate()
            .map(|(t, mu)| mu - t)
            .collect())
    }

    /// Every transversal, in lexicographic order of the value sequence.
    pub fn transversals(&self) -> Transversals<'_> {
        Transversals::new(self)
    }
}

impl fmt::Display for FerrersBoard {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_list(f, &self.parts)
    }
}

impl FromStr for FerrersBoard {
    type Err = BoardError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let raw = parse_list(s).ok_or_else(|| BoardError::Parse {
            what: "board",
            input: s.to_string(),
        })?;
        if let Some(index) = raw.iter().position(|&p| p <= 0) {
            return Err(BoardError::NonPositivePart { index: index + 1 });
        }
        FerrersBoard::new(raw.into_iter().map(|p| p as usize).collect())
    }
}

/// All transversal-feasible boards of order `n`, in lexicographic order of parts.
pub fn feasible_boards(n: usize) -> Vec<FerrersBoard> {
    fn extend(n: usize, parts: &mut Vec<usize>, out: &mut Vec<FerrersBoard>) {
        let i = parts.len();
        if i == n {
            out.push(FerrersBoard {
                parts: parts.clone(),
            });
            return;
        }
        let upper = parts.last().copied().unwrap_or(n);
        let lower = if i == 0 { n } else { n - i };
        for p in lower..=upper {
            parts.push(p);
            extend(n, parts, out);
            parts.pop();
        }
    }
    let mut out = Vec::new();
    if n > 0 {
        extend(n, &mut Vec::with_capacity(n), &mut out);
    }
    out
}

/// A 0–1 filling with exactly one 1 per row and column, stored column by column.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Transversal {
    board: FerrersBoard,
    values: Vec<usize>,
}

impl Transversal {
    pub fn new(board: FerrersBoard, values: Vec<usize>) -> Result<Self, BoardError> {
        let n = board.order();
        let mut seen = vec![false; n + 1];
        for &v in &values {
            if v == 0 || v > n || seen[v] {
                return Err(BoardError::NotAPermutation { n });
            }
            seen[v] = true;
        }
        if values.len() != n {
            return Err(BoardError::NotAPermutation { n });
        }
        if let Some(c) = (1..=n).find(|&c| !board.contains_cell(values[c - 1], c)) {
            return Err(BoardError::CellOutsideBoard { column: c });
        }
        Ok(Transversal { board, values })
    }

    /// Parses the comma-separated value list against `board`.
    pub fn parse(board: FerrersBoard, s: &str) -> Result<Self, BoardError> {
        let raw = parse_list(s).ok_or_else(|| BoardError::Parse {
            what: "transversal",
            input: s.to_string(),
        })?;
        if raw.iter().any(|&v| v <= 0) {
            return Err(BoardError::NotAPermutation { n: board.order() });
        }
        Transversal::new(board, raw.into_iter().map(|v| v as usize).collect())
    }

    pub(crate) fn from_parts_unchecked(board: FerrersBoard, values: Vec<usize>) -> Self {
        Transversal { board, values }
    }

    pub fn board(&self) -> &FerrersBoard {
        &self.board
    }

    pub fn values(&self) -> &[usize] {
        &self.values
    }

    pub fn order(&self) -> usize {
        self.values.len()
    }

    /// Value of the 1 in `column` (1-based).
    pub fn value_at(&self, column: usize) -> usize {
        self.values[column - 1]
    }

    /// Column holding `value` (1-based).
    pub fn column_of_value(&self, value: usize) -> usize {
        self.values
            .iter()
            .position(|&v| v == value)
            .expect("value in range")
            + 1
    }

    /// Filled cells as `(top-down row, column)` pairs, ordered by column.
    pub fn cells(&self) -> Vec<(usize, usize)> {
        self.values
            .iter()
            .enumerate()
            .map(|(i, &v)| (self.board.value_of_row(v), i + 1))
            .collect()
    }

    /// Rebuilds a transversal from `(top-down row, column)` cells in any order.
    pub fn from_cells(board: FerrersBoard, cells: &[(usize, usize)]) -> Result<Self, BoardError> {
        let n = board.order();
        let mut values = vec![0; n];
        for &(row, column) in cells {
            if row == 0 || row > n || column == 0 || column > n || values[column - 1] != 0 {
                return Err(BoardError::NotAPermutation { n });
            }
            values[column - 1] = board.value_of_row(row);
        }
        Transversal::new(board, values)
    }
}

impl fmt::Display for Transversal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_list(f, &self.values)
    }
}

/// Lexicographic backtracking over value sequences that fit the board.
pub struct Transversals<'a> {
    board: &'a FerrersBoard,
    values: Vec<usize>,
    used: Vec<bool>,
    started: bool,
    done: bool,
}

impl<'a> Transversals<'a> {
    fn new(board: &'a FerrersBoard) -> Self {
        let n = board.order();
        Transversals {
            board,
            values: Vec::with_capacity(n),
            used: vec![false; n + 1],
            started: false,
            done: !board.is_feasible(),
        }
    }

    /// Smallest unused value `> after` whose row reaches `column`.
    fn next_value(&self, column: usize, after: usize) -> Option<usize> {
        (after + 1..=self.board.order())
            .find(|&v| !self.used[v] && self.board.contains_cell(v, column))
    }

    /// Fills the remaining columns with the smallest fitting values, trying
    /// values `> after` first in the current column and backtracking on dead ends.
    fn search(&mut self, mut after: usize) -> bool {
        let n = self.board.order();
        loop {
            if self.values.len() == n {
                return true;
            }
            let column = self.values.len() + 1;
            match self.next_value(column, after) {
                Some(v) => {
                    self.used[v] = true;
                    self.values.push(v);
                    after = 0;
                }
                None => match self.values.pop() {
                    Some(v) => {
                        self.used[v] = false;
                        after = v;
                    }
                    None => return false,
                },
            }
        }
    }
}

impl Iterator for Transversals<'_> {
    type Item = Transversal;

    fn next(&mut self) -> Option<Transversal> {
        if self.done {
            return None;
        }
        let found = if !self.started {
            self.started = true;
            self.search(0)
        } else {
            let v = self.values.pop().expect("complete transversal");
            self.used[v] = false;
            self.search(v)
        };
        if !found {
            self.done = true;
            return None;
        }
        Some(Transversal::from_parts_unchecked(
            self.board.clone(),
            self.values.clone(),
        ))
    }
}

pub(crate) fn parse_list(s: &str) -> Option<Vec<i64>> {
    let s = s.trim();
    if s.is_empty() {
        return None;
    }
    s.split(',').map(|x| x.trim().parse::<i64>().ok()).collect()
}

pub(crate) fn write_list(f: &mut fmt::Formatter<'_>, items: &[usize]) -> fmt::Result {
    for (i, x) in items.iter().enumerate() {
        if i > 0 {
            f.write_str(",")?;
        }
        write!(f, "{x}")?;
    }
    Ok(())
}
