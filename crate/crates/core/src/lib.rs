//! Partially ordered claw patterns on Ferrers-board transversals.
//!
//! The crate models Ferrers boards and their transversals ([`boards`]), POPs
//! and the claw families `P^a_(m,k,d)` ([`pops`]), the insertion encoding that
//! turns an avoiding transversal into a word and back ([`codec`]), and exact
//! avoider counts with brute-force cross-checks ([`counting`]).
//!
//! ```
//! use popboards::{decode, encode, ClawFamily, FerrersBoard, Transversal};
//!
//! let board: FerrersBoard = "6,6,6,6,5,3".parse().unwrap();
//! let t = Transversal::parse(board.clone(), "2,6,5,1,3,4").unwrap();
//! let from: ClawFamily = "4,1,2,1".parse().unwrap();
//! let to: ClawFamily = "4,1,2,2".parse().unwrap();
//!
//! let word = encode(&t, &from).unwrap();
//! assert_eq!(word.to_string(), "2,1,2,3,1,0");
//! assert_eq!(decode(&word, &board, &to).unwrap().to_string(), "5,6,2,1,4,3");
//! ```

pub mod boards;
pub mod codec;
pub mod count;
pub mod counting;
pub mod pops;

pub use boards::{feasible_boards, BoardError, FerrersBoard, Transversal};
pub use codec::{
    decode, encode, insertion_steps, transfer, valid_count, valid_positions,
    valid_positions_oracle, valid_set_size, CodecError, EncodingStep, EncodingWord, InsertionState,
};
pub use count::{Count, ExactCount};
pub use counting::{
    count_avoiders_bruteforce, count_avoiders_formula, count_single_claw, count_square_formula,
    distinguishing_board_search, equivalence_check, BruteForce, CountError, CountReport,
    Distinguisher, DEFAULT_CAP,
};
pub use pops::{
    avoids, rectangle_in_board, ClawFamily, ClawShape, OccurrenceWitness, Pop, PopError,
};

/// Counts in machine words; arithmetic reports overflow.
pub type SmallCount = u64;
