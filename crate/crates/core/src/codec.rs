//! The insertion encoding for transversals that avoid a claw family.
//!
//! The 1s of a transversal are removed and put back row by row from the top.
//! At each step the 1 goes into the top row of the remaining white subboard,
//! whose white columns are `c_1 < … < c_l`. For a claw family only some of those
//! `l` positions keep the filling extendable; the step records the rank of the
//! chosen position among them, or 0 when the choice is forced. Because the
//! valid set depends only on `l` and `(m, k, d)` in size, words are shared
//! between families that differ only in their apex base, which gives the
//! transfer bijection.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::boards::{parse_list, write_list, BoardError, FerrersBoard, Transversal};
use crate::pops::{avoids, ClawFamily, ClawShape};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CodecError {
    #[error("transversal contains a member of family {family}")]
    NotAvoiding { family: String },
    #[error("step {step}: chosen column is not a valid position")]
    SoundnessViolation { step: usize },
    #[error("step {step}: letter {letter} does not match a valid set of size {valid}")]
    LetterOutOfRange {
        step: usize,
        letter: usize,
        valid: usize,
    },
    #[error("step {step}: no valid position, the board has no avoiding transversal")]
    EmptyValidSet { step: usize },
    #[error("word has {got} letters, board has {expected} rows")]
    LengthMismatch { expected: usize, got: usize },
    #[error("families {from} and {to} differ in m, k or d")]
    ParamMismatch { from: String, to: String },
    #[error("inconsistent insertion state: {0}")]
    StateInconsistent(String),
    #[error(transparent)]
    Board(#[from] BoardError),
    #[error("cannot parse word: {0:?}")]
    Parse(String),
}

/// `m - kd - 1 + k·max(0, d - l + m - 1)`: the number of valid positions when `l ≥ m`.
pub fn valid_set_size(l: usize, shape: ClawShape) -> usize {
    let ClawShape { m, k, d } = shape;
    debug_assert!(l >= m, "closed form applies for l ≥ m");
    let slack = (d + m).saturating_sub(l + 1);
    m - k * d - 1 + k * slack
}

/// Number of valid positions in a top row of `l` white cells, for any `l ≥ 1`.
pub fn valid_count(l: usize, shape: ClawShape) -> usize {
    if l < shape.m {
        l
    } else {
        valid_set_size(l, shape)
    }
}

/// Valid positions (1-based, among the `l` white cells) for the family.
///
/// With `l < m` no claw fits, so every position is valid. Otherwise position
/// `i` is valid when `i < a`, or when it is not an apex position and every
/// apex label `a + jd < i` leaves fewer than `m - (a + jd)` cells to its right.
pub fn valid_positions(l: usize, family: &ClawFamily) -> Vec<usize> {
    let m = family.m();
    if l < m {
        return (1..=l).collect();
    }
    let apexes: Vec<usize> = family.apexes().collect();
    (1..=l)
        .filter(|&i| {
            if i < family.base() {
                return true;
            }
            !apexes.contains(&i) && apexes.iter().filter(|&&x| x < i).all(|&x| l - i < m - x)
        })
        .collect()
}

/// A partially filled board: the top `placed.len()` rows hold 1s in the given columns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InsertionState {
    board: FerrersBoard,
    placed: Vec<usize>,
}

impl InsertionState {
    pub fn empty(board: FerrersBoard) -> Result<Self, CodecError> {
        InsertionState::new(board, Vec::new())
    }

    /// `placed[t - 1]` is the column of the 1 in top-down row `t`.
    pub fn new(board: FerrersBoard, placed: Vec<usize>) -> Result<Self, CodecError> {
        if !board.is_feasible() {
            return Err(BoardError::InfeasibleBoard.into());
        }
        let mu = board.row_lengths_top_down();
        if placed.len() > board.order() {
            return Err(CodecError::StateInconsistent(format!(
                "{} rows placed on a board of order {}",
                placed.len(),
                board.order()
            )));
        }
        let mut used = vec![false; board.order() + 1];
        for (t, &c) in placed.iter().enumerate() {
            if c == 0 || c > mu[t] {
                return Err(CodecError::StateInconsistent(format!(
                    "row {} has no column {c}",
                    t + 1
                )));
            }
            if used[c] {
                return Err(CodecError::StateInconsistent(format!(
                    "column {c} used twice"
                )));
            }
            used[c] = true;
        }
        Ok(InsertionState { board, placed })
    }

    pub fn board(&self) -> &FerrersBoard {
        &self.board
    }

    pub fn placed(&self) -> &[usize] {
        &self.placed
    }

    /// 1-based index of the next row to fill.
    pub fn step(&self) -> usize {
        self.placed.len() + 1
    }

    pub fn is_complete(&self) -> bool {
        self.placed.len() == self.board.order()
    }

    /// White columns of the top white row, increasing.
    pub fn white_columns(&self) -> Vec<usize> {
        if self.is_complete() {
            return Vec::new();
        }
        let width = self.board.row_lengths_top_down()[self.placed.len()];
        (1..=width).filter(|c| !self.placed.contains(c)).collect()
    }

    /// Puts the next 1 into `column` of the top white row.
    pub fn place(&mut self, column: usize) -> Result<(), CodecError> {
        if !self.white_columns().contains(&column) {
            return Err(CodecError::StateInconsistent(format!(
                "column {column} is not white in row {}",
                self.step()
            )));
        }
        self.placed.push(column);
        Ok(())
    }

    /// The transversal once every row is filled.
    pub fn to_transversal(&self) -> Option<Transversal> {
        if !self.is_complete() {
            return None;
        }
        let cells: Vec<_> = self
            .placed
            .iter()
            .enumerate()
            .map(|(t, &c)| (t + 1, c))
            .collect();
        Transversal::from_cells(self.board.clone(), &cells).ok()
    }

    pub fn step_info(&self, shape: ClawShape) -> EncodingStep {
        let white_columns = self.white_columns();
        let l = white_columns.len();
        EncodingStep {
            step: self.step(),
            delta: l as i64 - shape.m as i64 + 1,
            l,
            white_columns,
        }
    }
}

/// Exhaustive validity: position `i` is valid iff filling it leaves at least one
/// completion into a transversal that avoids the family.
pub fn valid_positions_oracle(
    state: &InsertionState,
    family: &ClawFamily,
) -> Result<Vec<usize>, CodecError> {
    if state.is_complete() {
        return Err(CodecError::StateInconsistent("no row left to fill".into()));
    }
    let whites = state.white_columns();
    let mut out = Vec::new();
    for (i, &c) in whites.iter().enumerate() {
        let mut next = state.clone();
        next.place(c)?;
        if has_avoiding_completion(&mut next, family) {
            out.push(i + 1);
        }
    }
    Ok(out)
}

fn has_avoiding_completion(state: &mut InsertionState, family: &ClawFamily) -> bool {
    if let Some(t) = state.to_transversal() {
        return avoids(&t, family);
    }
    for c in state.white_columns() {
        state.placed.push(c);
        let found = has_avoiding_completion(state, family);
        state.placed.pop();
        if found {
            return true;
        }
    }
    false
}

/// One step of the insertion process.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EncodingStep {
    pub step: usize,
    pub white_columns: Vec<usize>,
    pub l: usize,
    /// `l - m + 1`.
    pub delta: i64,
}

/// A word over `{0, …, n}`, one letter per row from the top.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EncodingWord(pub Vec<usize>);

impl EncodingWord {
    pub fn letters(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for EncodingWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_list(f, &self.0)
    }
}

impl FromStr for EncodingWord {
    type Err = CodecError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let raw = parse_list(s).ok_or_else(|| CodecError::Parse(s.to_string()))?;
        if raw.iter().any(|&x| x < 0) {
            return Err(CodecError::Parse(s.to_string()));
        }
        Ok(EncodingWord(raw.into_iter().map(|x| x as usize).collect()))
    }
}

/// Steps of the insertion process replayed for `t`, top row first.
pub fn insertion_steps(t: &Transversal, shape: ClawShape) -> Vec<EncodingStep> {
    let board = t.board();
    let mut state = InsertionState::empty(board.clone()).expect("transversal board is feasible");
    let mut steps = Vec::with_capacity(t.order());
    for row in 1..=board.order() {
        steps.push(state.step_info(shape));
        let column = t.column_of_value(board.value_of_row(row));
        state.place(column).expect("transversal cell is white");
    }
    steps
}

/// Encodes a family-avoiding transversal.
pub fn encode(t: &Transversal, family: &ClawFamily) -> Result<EncodingWord, CodecError> {
    if !avoids(t, family) {
        return Err(CodecError::NotAvoiding {
            family: family.to_string(),
        });
    }
    let board = t.board();
    let mut letters = Vec::with_capacity(t.order());
    for step in insertion_steps(t, family.shape()) {
        let column = t.column_of_value(board.value_of_row(step.step));
        let position = step
            .white_columns
            .iter()
            .position(|&c| c == column)
            .expect("column is white")
            + 1;
        let valid = valid_positions(step.l, family);
        let rank = valid
            .iter()
            .position(|&i| i == position)
            .ok_or(CodecError::SoundnessViolation { step: step.step })?
            + 1;
        letters.push(if valid.len() == 1 { 0 } else { rank });
    }
    Ok(EncodingWord(letters))
}

/// Replays a word on `board`, choosing valid positions of `family`.
pub fn decode(
    word: &EncodingWord,
    board: &FerrersBoard,
    family: &ClawFamily,
) -> Result<Transversal, CodecError> {
    if !board.is_feasible() {
        return Err(BoardError::InfeasibleBoard.into());
    }
    if word.len() != board.order() {
        return Err(CodecError::LengthMismatch {
            expected: board.order(),
            got: word.len(),
        });
    }
    let mut state = InsertionState::empty(board.clone())?;
    for &letter in word.letters() {
        let step = state.step();
        let whites = state.white_columns();
        let valid = valid_positions(whites.len(), family);
        let position = match (letter, valid.len()) {
            (_, 0) => return Err(CodecError::EmptyValidSet { step }),
            (0, 1) => valid[0],
            (j, size) if size >= 2 && (1..=size).contains(&j) => valid[j - 1],
            (letter, valid) => {
                return Err(CodecError::LetterOutOfRange {
                    step,
                    letter,
                    valid,
                })
            }
        };
        state.place(whites[position - 1])?;
    }
    Ok(state.to_transversal().expect("every row filled"))
}

/// `decode(encode(t, from), board, to)`: maps avoiders of `from` onto avoiders of `to`.
pub fn transfer(
    t: &Transversal,
    from: &ClawFamily,
    to: &ClawFamily,
) -> Result<Transversal, CodecError> {
    if from.shape() != to.shape() {
        return Err(CodecError::ParamMismatch {
            from: from.to_string(),
            to: to.to_string(),
        });
    }
    let word = encode(t, from)?;
    decode(&word, t.board(), to)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fam(m: usize, k: usize, d: usize, a: usize) -> ClawFamily {
        ClawFamily::new(m, k, d, a).unwrap()
    }

    fn figure_board() -> FerrersBoard {
        "6,6,6,6,5,3".parse().unwrap()
    }

    fn shape(m: usize, k: usize, d: usize) -> ClawShape {
        ClawShape::new(m, k, d).unwrap()
    }

    #[test]
    fn formula_examples() {
        let f = fam(4, 1, 2, 1);
        assert_eq!(valid_positions(4, &f), vec![2, 4]);
        assert_eq!(valid_positions(3, &f), vec![1, 2, 3]);
        assert_eq!(valid_positions(5, &f), vec![5]);
    }

    #[test]
    fn closed_form_examples() {
        assert_eq!(valid_set_size(4, shape(4, 1, 2)), 2);
        assert_eq!(valid_set_size(6, shape(4, 1, 2)), 1);
        assert_eq!(valid_set_size(6, shape(3, 2, 1)), 0);
    }

    #[test]
    fn oracle_examples() {
        let b = figure_board();
        // Step 2 of the encoding of 2,6,5,1,3,4: the top 1 sits in column 2.
        let state = InsertionState::new(b.clone(), vec![2]).unwrap();
        assert_eq!(state.white_columns(), vec![1, 3, 4, 5]);
        assert_eq!(
            valid_positions_oracle(&state, &fam(4, 1, 2, 1)).unwrap(),
            vec![2, 4]
        );

        let start = InsertionState::empty(b.clone()).unwrap();
        assert_eq!(
            valid_positions_oracle(&start, &fam(4, 1, 2, 2)).unwrap(),
            vec![1, 2, 3]
        );

        let last = InsertionState::new(b, vec![2, 3, 6, 5, 1]).unwrap();
        assert_eq!(last.white_columns(), vec![4]);
        assert_eq!(
            valid_positions_oracle(&last, &fam(4, 1, 2, 1)).unwrap(),
            vec![1]
        );
    }

    #[test]
    fn oracle_rejects_bad_state() {
        let b = figure_board();
        assert!(matches!(
            InsertionState::new(b.clone(), vec![4]),
            Err(CodecError::StateInconsistent(_))
        ));
        assert!(matches!(
            InsertionState::new(b.clone(), vec![2, 2]),
            Err(CodecError::StateInconsistent(_))
        ));
        let full = InsertionState::new(b, vec![2, 3, 6, 5, 1, 4]).unwrap();
        assert!(matches!(
            valid_positions_oracle(&full, &fam(4, 1, 2, 1)),
            Err(CodecError::StateInconsistent(_))
        ));
    }

    #[test]
    fn worked_example_round_trip() {
        let b = figure_board();
        let t = Transversal::parse(b.clone(), "2,6,5,1,3,4").unwrap();
        let word = encode(&t, &fam(4, 1, 2, 1)).unwrap();
        assert_eq!(word.to_string(), "2,1,2,3,1,0");
        let back = decode(&word, &b, &fam(4, 1, 2, 1)).unwrap();
        assert_eq!(back, t);
        let moved = decode(&word, &b, &fam(4, 1, 2, 2)).unwrap();
        assert_eq!(moved.values(), &[5, 6, 2, 1, 4, 3]);
        assert_eq!(
            transfer(&t, &fam(4, 1, 2, 1), &fam(4, 1, 2, 2)).unwrap(),
            moved
        );
    }

    #[test]
    fn worked_example_steps() {
        let t = Transversal::parse(figure_board(), "2,6,5,1,3,4").unwrap();
        let steps = insertion_steps(&t, shape(4, 1, 2));
        let ls: Vec<_> = steps.iter().map(|s| s.l).collect();
        assert_eq!(ls, vec![3, 4, 4, 3, 2, 1]);
        assert_eq!(steps[1].white_columns, vec![1, 3, 4, 5]);
        assert_eq!(steps[1].delta, 1);
    }

    #[test]
    fn staircase_is_all_forced() {
        let b: FerrersBoard = "3,2,1".parse().unwrap();
        let t = b.transversals().next().unwrap();
        for f in [fam(2, 0, 0, 1), fam(3, 1, 1, 1), fam(3, 0, 0, 3)] {
            assert_eq!(encode(&t, &f).unwrap().letters(), &[0, 0, 0]);
        }
    }

    #[test]
    fn encode_rejects_containing_input() {
        let t = Transversal::parse(figure_board(), "2,6,5,1,3,4").unwrap();
        assert!(matches!(
            encode(&t, &fam(4, 1, 2, 2)),
            Err(CodecError::NotAvoiding { .. })
        ));
    }

    #[test]
    fn decode_letter_errors() {
        let b = figure_board();
        let f = fam(4, 1, 2, 1);
        // Step 2 has |I| = 2.
        let err = decode(&"2,3,1,1,1,0".parse().unwrap(), &b, &f).unwrap_err();
        assert_eq!(
            err,
            CodecError::LetterOutOfRange {
                step: 2,
                letter: 3,
                valid: 2
            }
        );
        let err = decode(&"2,0,1,1,1,0".parse().unwrap(), &b, &f).unwrap_err();
        assert_eq!(
            err,
            CodecError::LetterOutOfRange {
                step: 2,
                letter: 0,
                valid: 2
            }
        );
        // The last step is forced and must be written as 0.
        let err = decode(&"2,1,2,3,1,1".parse().unwrap(), &b, &f).unwrap_err();
        assert_eq!(
            err,
            CodecError::LetterOutOfRange {
                step: 6,
                letter: 1,
                valid: 1
            }
        );
        let err = decode(&"2,1".parse().unwrap(), &b, &f).unwrap_err();
        assert_eq!(
            err,
            CodecError::LengthMismatch {
                expected: 6,
                got: 2
            }
        );
    }

    #[test]
    fn decode_reports_empty_valid_set() {
        // m = kd + 1 with a = 1: on the 3×3 square the first row has no valid cell.
        let f = fam(3, 2, 1, 1);
        let err = decode(&"1,1,0".parse().unwrap(), &FerrersBoard::square(3), &f).unwrap_err();
        assert_eq!(err, CodecError::EmptyValidSet { step: 1 });
    }

    #[test]
    fn transfer_checks_shape() {
        let t = Transversal::parse(figure_board(), "2,6,5,1,3,4").unwrap();
        assert!(matches!(
            transfer(&t, &fam(4, 1, 2, 1), &fam(4, 1, 1, 1)),
            Err(CodecError::ParamMismatch { .. })
        ));
        let same = transfer(&t, &fam(4, 1, 2, 1), &fam(4, 1, 2, 1)).unwrap();
        assert_eq!(same, t);
    }
}
