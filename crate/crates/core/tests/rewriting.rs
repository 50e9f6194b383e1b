//! Randomized exercise of the 2-cell rewriting: synthesize homotopies between
//! dipaths by interleaving tile moves with inserted and cancelled detours,
//! then check that extraction yields a pure tile-move sequence replaying the
//! source into the target.

mod util;

use rand_chacha::ChaCha8Rng;
use rand::prelude::*;

use dihom_core::lang;
use dihom_core::paths::{dihomotopy_neighbors, TileIndex};
use dihom_core::pcs::{standard_cube, PrecubicalSet};
use dihom_core::twocells::extract_dihomotopy;
use util::{random_dipath, synthesize_homotopy};

fn exercise_complex(c: &PrecubicalSet, seed: u64, rounds: usize, start: usize, path_len: usize) {
    let tiles = TileIndex::new(c);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut extracted = 0;
    for round in 0..rounds {
        let f = random_dipath(c, &mut rng, start, path_len);
        let Some(cell) = synthesize_homotopy(c, &tiles, &mut rng, &f, 6) else {
            continue;
        };
        let target = cell.target(c);
        assert!(target.is_dipath());
        let moves = extract_dihomotopy(c, &cell)
            .unwrap_or_else(|e| panic!("round {round}: extraction failed: {e}"));
        // Replay: only tile moves, source to target.
        let mut cur = cell.source.clone();
        for mv in &moves {
            let neighbors = dihomotopy_neighbors(c, &tiles, &cur);
            cur.steps[mv.position] = mv.to.0;
            cur.steps[mv.position + 1] = mv.to.1;
            assert!(
                neighbors.contains(&cur) || mv.from == mv.to,
                "round {round}: replayed move is not a dihomotopy step"
            );
        }
        assert_eq!(cur, target, "round {round}: replay must reach the target");
        extracted += 1;
    }
    assert!(extracted >= rounds / 2, "too few successful rounds: {extracted}");
}

#[test]
fn synthesized_homotopies_extract_on_y2() {
    let y2 = standard_cube(2).unwrap();
    exercise_complex(&y2, 11, 30, 0, 2);
}

#[test]
fn synthesized_homotopies_extract_on_y3() {
    let y3 = standard_cube(3).unwrap();
    exercise_complex(&y3, 23, 25, 0, 3);
}

#[test]
fn synthesized_homotopies_extract_on_y4() {
    let y4 = standard_cube(4).unwrap();
    exercise_complex(&y4, 53, 10, 0, 4);
}

#[test]
fn synthesized_homotopies_extract_on_program_semantics() {
    let s = lang::semantics(&lang::parse("(P(a);V(a)) || (P(a);V(a))").unwrap()).unwrap();
    exercise_complex(&s.pcs, 37, 25, s.beg, 4);
    let swiss =
        lang::semantics(&lang::parse("P(a);P(b);V(b);V(a) || P(b);P(a);V(a);V(b)").unwrap())
            .unwrap();
    exercise_complex(&swiss.pcs, 41, 15, swiss.beg, 6);
}
