use itertools::Itertools;
use popboards::{
    avoids, count_avoiders_formula, feasible_boards, ClawFamily, ClawShape, FerrersBoard, Pop,
    Transversal,
};
use proptest::prelude::*;

fn arb_pop(max_m: usize) -> impl Strategy<Value = Pop> {
    (1..=max_m).prop_flat_map(|m| {
        // Only pairs x < y in a random relabeling, so the relation graph is acyclic.
        (
            Just(m),
            Just(m).prop_shuffle_labels(),
            prop::collection::vec(any::<bool>(), m * m),
        )
            .prop_map(|(m, labels, bits)| {
                let rels: Vec<(usize, usize)> = (0..m)
                    .cartesian_product(0..m)
                    .filter(|&(i, j)| i < j && bits[i * m + j])
                    .map(|(i, j)| (labels[j], labels[i]))
                    .collect();
                Pop::new(m, &rels).unwrap()
            })
    })
}

trait ShuffleLabels {
    fn prop_shuffle_labels(self) -> BoxedStrategy<Vec<usize>>;
}

impl ShuffleLabels for Just<usize> {
    fn prop_shuffle_labels(self) -> BoxedStrategy<Vec<usize>> {
        let m = self.0;
        Just((1..=m).collect::<Vec<_>>()).prop_shuffle().boxed()
    }
}

fn arb_board(max_n: usize) -> impl Strategy<Value = FerrersBoard> {
    (1..=max_n).prop_flat_map(|n| {
        let boards = feasible_boards(n);
        (0..boards.len()).prop_map(move |i| boards[i].clone())
    })
}

fn arb_transversal(max_n: usize) -> impl Strategy<Value = Transversal> {
    arb_board(max_n).prop_flat_map(|b| {
        let all: Vec<Transversal> = b.transversals().collect();
        (0..all.len()).prop_map(move |i| all[i].clone())
    })
}

fn arb_family(max_m: usize) -> impl Strategy<Value = ClawFamily> {
    (1..=max_m, 0..=3usize, 0..=3usize)
        .prop_filter_map("kd + 1 ≤ m", |(m, k, d)| ClawShape::new(m, k, d).ok())
        .prop_flat_map(|shape| {
            shape
                .legal_bases()
                .prop_map(move |a| ClawFamily::with_shape(shape, a).unwrap())
        })
}

proptest! {
    #[test]
    fn patterns_are_the_self_containing_permutations(pop in arb_pop(5)) {
        let m = pop.size();
        let expected: Vec<Vec<usize>> = (1..=m)
            .permutations(m)
            .filter(|s| !pop.occurrences_in_permutation(s).is_empty())
            .collect();
        prop_assert_eq!(pop.patterns(), expected);
    }

    #[test]
    fn text_form_round_trips(pop in arb_pop(6)) {
        prop_assert_eq!(pop.to_string().parse::<Pop>().unwrap(), pop);
    }

    #[test]
    fn more_relations_never_add_occurrences(
        pop in arb_pop(4),
        t in arb_transversal(6),
        extra in prop::collection::vec((1..=4usize, 1..=4usize), 0..3),
    ) {
        let mut rels = pop.relations();
        rels.extend(extra.into_iter().filter(|&(x, y)| x <= pop.size() && y <= pop.size()));
        if let Ok(stronger) = Pop::new(pop.size(), &rels) {
            prop_assert!(stronger.refines(&pop));
            if avoids(&t, std::slice::from_ref(&pop)) {
                prop_assert!(avoids(&t, std::slice::from_ref(&stronger)));
            }
        }
    }

    #[test]
    fn cells_round_trip(t in arb_transversal(7)) {
        let back = Transversal::from_cells(t.board().clone(), &t.cells()).unwrap();
        prop_assert_eq!(back, t);
    }

    #[test]
    fn formula_count_ignores_base(board in arb_board(12), family in arb_family(8)) {
        let shape = family.shape();
        let here: u128 = count_avoiders_formula(&board, &family).unwrap();
        for a in shape.legal_bases() {
            let other = ClawFamily::with_shape(shape, a).unwrap();
            prop_assert_eq!(count_avoiders_formula::<u128>(&board, &other).unwrap(), here);
        }
    }
}
