//! Shared helpers for the randomized suites: random dipaths, homotopy
//! synthesis by interleaving tile moves with detours, and a random generator
//! of conservative programs.

#![allow(dead_code)]

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use dihom_core::paths::{
    apply_move, homotopy_neighbors, HomotopyMove, MoveRule, PathT, Step,
    TileIndex,
};
use dihom_core::pcs::PrecubicalSet;
use dihom_core::twocells::{FormalTwoCell, Generator, Slice};

/// Convert one homotopy move applied to `path` into a slice.
pub fn move_to_slice(
    c: &PrecubicalSet,
    tiles: &TileIndex,
    path: &PathT,
    mv: HomotopyMove,
) -> Option<(Slice, PathT)> {
    let next = apply_move(c, tiles, path, mv)?;
    let k = mv.position;
    let left = PathT { start: path.start, steps: path.steps[..k].to_vec() };
    let gen = match mv.rule {
        MoveRule::Tile => {
            let (a, b) = (path.steps[k], path.steps[k + 1]);
            let (b_out, a_out) = (next.steps[k], next.steps[k + 1]);
            Generator::Gamma { a, b, b_out, a_out }
        }
        MoveRule::InsertFwdRev => Generator::Eta { a: Step::fwd(mv.edge) },
        MoveRule::InsertRevFwd => Generator::Eta { a: Step::rev(mv.edge) },
        MoveRule::Delete => Generator::Eps { a: path.steps[k + 1] },
    };
    let right_steps = match mv.rule {
        MoveRule::Tile => path.steps[k + 2..].to_vec(),
        MoveRule::InsertFwdRev | MoveRule::InsertRevFwd => path.steps[k..].to_vec(),
        MoveRule::Delete => path.steps[k + 2..].to_vec(),
    };
    let right_start = match mv.rule {
        MoveRule::Tile | MoveRule::Delete => path.vertex_at(c, k + 2),
        MoveRule::InsertFwdRev | MoveRule::InsertRevFwd => path.vertex_at(c, k),
    };
    let slice = Slice { left, gen, right: PathT { start: right_start, steps: right_steps } };
    Some((slice, next))
}

/// Random dipath from a random walk out of `start`.
pub fn random_dipath(c: &PrecubicalSet, rng: &mut impl Rng, start: usize, len: usize) -> PathT {
    let mut outgoing: Vec<Vec<usize>> = vec![Vec::new(); c.cell_count(0)];
    for e in 0..c.cell_count(1) {
        outgoing[c.edge_src(e)].push(e);
    }
    let mut p = PathT::empty(start);
    for _ in 0..len {
        let at = p.end(c);
        if outgoing[at].is_empty() {
            break;
        }
        let e = outgoing[at][rng.gen_range(0..outgoing[at].len())];
        p.steps.push(Step::fwd(e));
    }
    p
}

/// Synthesize a homotopy out of `f`: random tile moves and detours, then a
/// cleanup search back to some dipath. Returns the cell (or None when the
/// cleanup cannot reach a dipath, which does not happen for balanced moves).
pub fn synthesize_homotopy(
    c: &PrecubicalSet,
    tiles: &TileIndex,
    rng: &mut impl Rng,
    f: &PathT,
    moves: usize,
) -> Option<FormalTwoCell> {
    let mut slices = Vec::new();
    let mut cur = f.clone();
    for _ in 0..moves {
        let mut candidates: Vec<HomotopyMove> = Vec::new();
        for k in 0..cur.steps.len().saturating_sub(1) {
            if !tiles.partners((cur.steps[k], cur.steps[k + 1])).is_empty() {
                for (x, _, _) in tiles.partners((cur.steps[k], cur.steps[k + 1])) {
                    candidates.push(HomotopyMove { rule: MoveRule::Tile, position: k, edge: x.edge });
                }
            }
            if cur.steps[k].reverse() == cur.steps[k + 1] {
                candidates.push(HomotopyMove {
                    rule: MoveRule::Delete,
                    position: k,
                    edge: cur.steps[k].edge,
                });
            }
        }
        // Keep intermediate paths from growing unboundedly.
        if cur.len() <= f.len() + 4 {
            for k in 0..=cur.steps.len() {
                let at = cur.vertex_at(c, k);
                for e in 0..c.cell_count(1) {
                    if c.edge_src(e) == at {
                        candidates.push(HomotopyMove { rule: MoveRule::InsertFwdRev, position: k, edge: e });
                    }
                    if c.edge_tgt(e) == at {
                        candidates.push(HomotopyMove { rule: MoveRule::InsertRevFwd, position: k, edge: e });
                    }
                }
            }
        }
        if candidates.is_empty() {
            break;
        }
        let mv = candidates[rng.gen_range(0..candidates.len())];
        let (slice, next) = move_to_slice(c, tiles, &cur, mv)?;
        slices.push(slice);
        cur = next;
    }
    // Cleanup: search over homotopy neighbors of length ≤ |cur| for a dipath.
    if !cur.is_dipath() {
        use std::collections::{BTreeMap, BTreeSet, VecDeque};
        let bound = cur.len();
        let mut parents: BTreeMap<PathT, (PathT, HomotopyMove)> = BTreeMap::new();
        let mut seen = BTreeSet::from([cur.clone()]);
        let mut queue = VecDeque::from([cur.clone()]);
        let mut found: Option<PathT> = None;
        while let Some(p) = queue.pop_front() {
            if p.is_dipath() {
                found = Some(p);
                break;
            }
            for n in homotopy_neighbors(c, tiles, &p) {
                if n.len() > bound || seen.contains(&n) {
                    continue;
                }
                // Identify the move that produced n to record it later.
                if let Some(mv) = identify_move(c, tiles, &p, &n) {
                    seen.insert(n.clone());
                    parents.insert(n.clone(), (p.clone(), mv));
                    queue.push_back(n);
                }
            }
        }
        let target = found?;
        let mut trail = Vec::new();
        let mut node = target;
        while node != cur {
            let (prev, mv) = parents.get(&node)?.clone();
            trail.push(mv);
            node = prev;
        }
        trail.reverse();
        for mv in trail {
            let (slice, next) = move_to_slice(c, tiles, &cur, mv)?;
            slices.push(slice);
            cur = next;
        }
    }
    Some(FormalTwoCell { source: f.clone(), slices })
}

fn identify_move(
    c: &PrecubicalSet,
    tiles: &TileIndex,
    from: &PathT,
    to: &PathT,
) -> Option<HomotopyMove> {
    if to.len() == from.len() {
        for k in 0..from.steps.len().saturating_sub(1) {
            if from.steps[..k] == to.steps[..k] && from.steps[k + 2..] == to.steps[k + 2..] {
                let mv = HomotopyMove { rule: MoveRule::Tile, position: k, edge: to.steps[k].edge };
                if apply_move(c, tiles, from, mv).as_ref() == Some(to) {
                    return Some(mv);
                }
            }
        }
    } else if to.len() + 2 == from.len() {
        for k in 0..from.steps.len().saturating_sub(1) {
            let mv = HomotopyMove { rule: MoveRule::Delete, position: k, edge: from.steps[k].edge };
            if apply_move(c, tiles, from, mv).as_ref() == Some(to) {
                return Some(mv);
            }
        }
    } else if to.len() == from.len() + 2 {
        for k in 0..=from.steps.len() {
            for rule in [MoveRule::InsertFwdRev, MoveRule::InsertRevFwd] {
                if k < to.steps.len() {
                    let mv = HomotopyMove { rule, position: k, edge: to.steps[k].edge };
                    if apply_move(c, tiles, from, mv).as_ref() == Some(to) {
                        return Some(mv);
                    }
                }
            }
        }
    }
    None
}


use dihom_core::lang::{self, Program};

/// Random program with at most `threads` parallel components over the given
/// mutex pool: conservative by construction checks, loop bodies balanced.
pub fn random_program(rng: &mut impl Rng, threads: usize, mutexes: &[&str], depth: usize) -> Program {
    let t = rng.gen_range(1..=threads);
    let mut p = random_thread(rng, mutexes, depth);
    for _ in 1..t {
        p = Program::Par(Box::new(p), Box::new(random_thread(rng, mutexes, depth)));
    }
    p
}

fn random_thread(rng: &mut impl Rng, mutexes: &[&str], depth: usize) -> Program {
    if depth == 0 {
        return random_atom(rng, mutexes);
    }
    match rng.gen_range(0..6) {
        0 | 1 => Program::Seq(
            Box::new(random_thread(rng, mutexes, depth - 1)),
            Box::new(random_thread(rng, mutexes, depth - 1)),
        ),
        2 => Program::Or(
            Box::new(random_thread(rng, mutexes, depth - 1)),
            Box::new(random_thread(rng, mutexes, depth - 1)),
        ),
        3 => Program::Star(Box::new(random_thread(rng, mutexes, depth - 1))),
        _ => random_atom(rng, mutexes),
    }
}

fn random_atom(rng: &mut impl Rng, mutexes: &[&str]) -> Program {
    match rng.gen_range(0..4) {
        0 => Program::Action(format!("act{}", rng.gen_range(0..3))),
        1 | 2 => {
            let m = mutexes[rng.gen_range(0..mutexes.len())];
            // balanced lock/release keeps most samples conservative
            Program::Seq(
                Box::new(Program::Lock(m.to_string())),
                Box::new(Program::Unlock(m.to_string())),
            )
        }
        _ => {
            let m = mutexes[rng.gen_range(0..mutexes.len())];
            if rng.gen_bool(0.5) {
                Program::Lock(m.to_string())
            } else {
                Program::Unlock(m.to_string())
            }
        }
    }
}

/// Sample conservative programs whose semantics is geometric (in the
/// category-of-elements sense), by rejection.
pub fn sample_nice_programs(seed: u64, count: usize) -> Vec<(Program, lang::PointedPcs)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mutexes = ["a", "b", "c"];
    let mut out = Vec::new();
    while out.len() < count {
        let p = random_program(&mut rng, 3, &mutexes, 3);
        if lang::delta(&p).is_err() || p.contains_one() {
            continue;
        }
        let Ok(sem) = lang::semantics(&p) else { continue };
        if sem.pcs.cell_count(0) > 150 {
            continue;
        }
        if !dihom_core::npc::check_geometric_via_elements(&sem.pcs).0 {
            continue;
        }
        out.push((p, sem));
    }
    out
}
