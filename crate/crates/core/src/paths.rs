//! Paths with possibly reversed edges, the tile relation on length-2 paths,
//! dihomotopy and bounded homotopy deciders, class enumeration and geodesic
//! predicates.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::pcs::{CellId, PrecubicalSet, Sign};

/// One step of a path: an edge, possibly taken backwards.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
pub struct Step {
    pub edge: usize,
    pub reversed: bool,
}

impl Step {
    pub fn fwd(edge: usize) -> Step {
        Step { edge, reversed: false }
    }

    pub fn rev(edge: usize) -> Step {
        Step { edge, reversed: true }
    }

    pub fn reverse(self) -> Step {
        Step { edge: self.edge, reversed: !self.reversed }
    }

    pub fn src(self, c: &PrecubicalSet) -> usize {
        if self.reversed {
            c.edge_tgt(self.edge)
        } else {
            c.edge_src(self.edge)
        }
    }

    pub fn tgt(self, c: &PrecubicalSet) -> usize {
        if self.reversed {
            c.edge_src(self.edge)
        } else {
            c.edge_tgt(self.edge)
        }
    }
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum PathError {
    #[error("step {index}: edge {edge} does not exist")]
    NoSuchEdge { index: usize, edge: usize },
    #[error("step {index} starts at vertex {got} but the path is at {expected}")]
    NotComposable { index: usize, expected: usize, got: usize },
    #[error("start vertex {0} does not exist")]
    NoSuchVertex(usize),
    #[error("paths have different endpoints: {0:?} vs {1:?}")]
    EndpointMismatch((usize, usize), (usize, usize)),
    #[error("malformed path spec: {0}")]
    Parse(String),
}

/// A path: a start vertex and a sequence of composable steps.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
pub struct PathT {
    pub start: usize,
    pub steps: Vec<Step>,
}

impl PathT {
    pub fn empty(at: usize) -> PathT {
        PathT { start: at, steps: vec![] }
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn end(&self, c: &PrecubicalSet) -> usize {
        self.steps.last().map(|s| s.tgt(c)).unwrap_or(self.start)
    }

    pub fn is_dipath(&self) -> bool {
        self.steps.iter().all(|s| !s.reversed)
    }

    /// Vertex reached after `i` steps.
    pub fn vertex_at(&self, c: &PrecubicalSet, i: usize) -> usize {
        if i == 0 {
            self.start
        } else {
            self.steps[i - 1].tgt(c)
        }
    }

    pub fn reversal(&self, c: &PrecubicalSet) -> PathT {
        let steps: Vec<Step> = self.steps.iter().rev().map(|s| s.reverse()).collect();
        PathT { start: self.end(c), steps }
    }

    pub fn concat(&self, other: &PathT) -> PathT {
        let mut steps = self.steps.clone();
        steps.extend(other.steps.iter().copied());
        PathT { start: self.start, steps }
    }

    pub fn validate(&self, c: &PrecubicalSet) -> Result<(), PathError> {
        if self.start >= c.cell_count(0) {
            return Err(PathError::NoSuchVertex(self.start));
        }
        let mut at = self.start;
        for (i, s) in self.steps.iter().enumerate() {
            if s.edge >= c.cell_count(1) {
                return Err(PathError::NoSuchEdge { index: i, edge: s.edge });
            }
            if s.src(c) != at {
                return Err(PathError::NotComposable { index: i, expected: at, got: s.src(c) });
            }
            at = s.tgt(c);
        }
        Ok(())
    }

    /// Text form `x0 -e-> x1 <-e- x2 …`.
    pub fn display(&self, c: &PrecubicalSet) -> String {
        let mut out = format!("{}", self.start);
        for s in &self.steps {
            let next = s.tgt(c);
            if s.reversed {
                out.push_str(&format!(" <-{}- {}", s.edge, next));
            } else {
                out.push_str(&format!(" -{}-> {}", s.edge, next));
            }
        }
        out
    }

    /// Parse the text form produced by [`PathT::display`].
    pub fn parse(spec: &str) -> Result<PathT, PathError> {
        let toks: Vec<&str> = spec.split_whitespace().collect();
        if toks.is_empty() {
            return Err(PathError::Parse("empty spec".into()));
        }
        let start: usize =
            toks[0].parse().map_err(|_| PathError::Parse(format!("bad vertex `{}`", toks[0])))?;
        let mut steps = Vec::new();
        let mut i = 1;
        while i < toks.len() {
            let arrow = toks[i];
            let step = if let Some(e) = arrow.strip_prefix('-').and_then(|s| s.strip_suffix("->")) {
                Step::fwd(e.parse().map_err(|_| PathError::Parse(format!("bad edge `{arrow}`")))?)
            } else if let Some(e) = arrow.strip_prefix("<-").and_then(|s| s.strip_suffix('-')) {
                Step::rev(e.parse().map_err(|_| PathError::Parse(format!("bad edge `{arrow}`")))?)
            } else {
                return Err(PathError::Parse(format!("bad arrow `{arrow}`")));
            };
            steps.push(step);
            i += 1;
            if i >= toks.len() {
                return Err(PathError::Parse("arrow without target vertex".into()));
            }
            let _v: usize =
                toks[i].parse().map_err(|_| PathError::Parse(format!("bad vertex `{}`", toks[i])))?;
            i += 1;
        }
        Ok(PathT { start, steps })
    }
}

/// All oriented tile instances of a complex, indexed by the source pair.
///
/// Each square `a·b ⋄ b′·a′` contributes eight instances: the four clauses on
/// possibly-reversed steps and their symmetric versions.
#[derive(Clone, Debug, Default)]
pub struct TileIndex {
    map: BTreeMap<(Step, Step), BTreeSet<(Step, Step, usize)>>,
}

impl TileIndex {
    pub fn new(c: &PrecubicalSet) -> TileIndex {
        let mut map: BTreeMap<(Step, Step), BTreeSet<(Step, Step, usize)>> = BTreeMap::new();
        let mut add = |src: (Step, Step), tgt: (Step, Step), sq: usize| {
            map.entry(src).or_default().insert((tgt.0, tgt.1, sq));
            map.entry(tgt).or_default().insert((src.0, src.1, sq));
        };
        for sq in 0..c.cell_count(2) {
            let cell = CellId::new(2, sq);
            let a = Step::fwd(c.face(cell, 0, Sign::Neg).index);
            let b = Step::fwd(c.face(cell, 1, Sign::Pos).index);
            let bp = Step::fwd(c.face(cell, 1, Sign::Neg).index);
            let ap = Step::fwd(c.face(cell, 0, Sign::Pos).index);
            // a·b ⋄ b′·a′
            add((a, b), (bp, ap), sq);
            // b̄·ā ⋄ ā′·b̄′
            add((b.reverse(), a.reverse()), (ap.reverse(), bp.reverse()), sq);
            // ā·b′ ⋄ b·ā′
            add((a.reverse(), bp), (b, ap.reverse()), sq);
            // b̄′·a ⋄ a′·b̄
            add((bp.reverse(), a), (ap, b.reverse()), sq);
        }
        TileIndex { map }
    }

    /// All tile partners of a length-2 source. A degenerate square may relate
    /// a pair to itself; such self-partners are included.
    pub fn partners(&self, src: (Step, Step)) -> Vec<(Step, Step, usize)> {
        self.map.get(&src).map(|s| s.iter().copied().collect()).unwrap_or_default()
    }

    /// The unique tile partner, if there is exactly one.
    pub fn unique_partner(&self, src: (Step, Step)) -> Option<(Step, Step)> {
        let ps = self.partners(src);
        let mut outs: BTreeSet<(Step, Step)> = ps.iter().map(|(x, y, _)| (*x, *y)).collect();
        if outs.len() == 1 {
            outs.pop_first()
        } else {
            None
        }
    }

    /// A source pair admitting two different partners, when one exists (the
    /// oriented form of a square-closing ambiguity).
    pub fn ambiguous_source(&self) -> Option<(Step, Step)> {
        for (src, tgts) in &self.map {
            let outs: BTreeSet<(Step, Step)> = tgts.iter().map(|(x, y, _)| (*x, *y)).collect();
            if outs.len() > 1 {
                return Some(*src);
            }
        }
        None
    }
}

/// A single (di)homotopy move, serialized as (rule, position).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum MoveRule {
    /// Replace the pair at the position by its tile partner.
    Tile,
    /// Insert `a·ā` at the position (edge taken forward then backward).
    InsertFwdRev,
    /// Insert `ā·a` at the position.
    InsertRevFwd,
    /// Delete the mutually inverse pair at the position.
    Delete,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct HomotopyMove {
    pub rule: MoveRule,
    pub position: usize,
    /// The edge involved: the inserted/deleted edge, or the first edge of the
    /// replacement pair for tile moves.
    pub edge: usize,
}

/// Apply one move to a path. Returns `None` when it does not apply.
pub fn apply_move(c: &PrecubicalSet, tiles: &TileIndex, s: &PathT, mv: HomotopyMove) -> Option<PathT> {
    let k = mv.position;
    match mv.rule {
        MoveRule::Tile => {
            if k + 1 >= s.steps.len() {
                return None;
            }
            let src = (s.steps[k], s.steps[k + 1]);
            for (x, y, _) in tiles.partners(src) {
                if x.edge == mv.edge {
                    let mut steps = s.steps.clone();
                    steps[k] = x;
                    steps[k + 1] = y;
                    return Some(PathT { start: s.start, steps });
                }
            }
            None
        }
        MoveRule::InsertFwdRev => {
            if k > s.steps.len() || c.edge_src(mv.edge) != s.vertex_at(c, k) {
                return None;
            }
            let mut steps = s.steps.clone();
            steps.splice(k..k, [Step::fwd(mv.edge), Step::rev(mv.edge)]);
            Some(PathT { start: s.start, steps })
        }
        MoveRule::InsertRevFwd => {
            if k > s.steps.len() || c.edge_tgt(mv.edge) != s.vertex_at(c, k) {
                return None;
            }
            let mut steps = s.steps.clone();
            steps.splice(k..k, [Step::rev(mv.edge), Step::fwd(mv.edge)]);
            Some(PathT { start: s.start, steps })
        }
        MoveRule::Delete => {
            if k + 1 >= s.steps.len()
                || s.steps[k].reverse() != s.steps[k + 1]
                || s.steps[k].edge != mv.edge
            {
                return None;
            }
            let mut steps = s.steps.clone();
            steps.drain(k..=k + 1);
            Some(PathT { start: s.start, steps })
        }
    }
}

/// All paths reachable from `s` by one tile move.
pub fn dihomotopy_neighbors(_c: &PrecubicalSet, tiles: &TileIndex, s: &PathT) -> BTreeSet<PathT> {
    let mut out = BTreeSet::new();
    for k in 0..s.steps.len().saturating_sub(1) {
        let src = (s.steps[k], s.steps[k + 1]);
        for (x, y, _) in tiles.partners(src) {
            let mut steps = s.steps.clone();
            steps[k] = x;
            steps[k + 1] = y;
            out.insert(PathT { start: s.start, steps });
        }
    }
    out
}

/// One homotopy step: a tile move, an insertion of `a·ā` or `ā·a`, or a
/// deletion of such a pair.
pub fn homotopy_neighbors(c: &PrecubicalSet, tiles: &TileIndex, s: &PathT) -> BTreeSet<PathT> {
    let mut out = dihomotopy_neighbors(c, tiles, s);
    for k in 0..=s.steps.len() {
        let at = s.vertex_at(c, k);
        for e in 0..c.cell_count(1) {
            if c.edge_src(e) == at {
                let mut steps = s.steps.clone();
                steps.splice(k..k, [Step::fwd(e), Step::rev(e)]);
                out.insert(PathT { start: s.start, steps });
            }
            if c.edge_tgt(e) == at {
                let mut steps = s.steps.clone();
                steps.splice(k..k, [Step::rev(e), Step::fwd(e)]);
                out.insert(PathT { start: s.start, steps });
            }
        }
    }
    for k in 0..s.steps.len().saturating_sub(1) {
        if s.steps[k].reverse() == s.steps[k + 1] {
            let mut steps = s.steps.clone();
            steps.drain(k..=k + 1);
            out.insert(PathT { start: s.start, steps });
        }
    }
    out
}

/// Decide dihomotopy by search over tile moves. Tile moves preserve length,
/// so the reachable set is finite.
pub fn are_dihomotopic(c: &PrecubicalSet, s: &PathT, t: &PathT) -> Result<bool, PathError> {
    s.validate(c)?;
    t.validate(c)?;
    let (es, et) = ((s.start, s.end(c)), (t.start, t.end(c)));
    if es != et {
        return Err(PathError::EndpointMismatch(es, et));
    }
    if s.len() != t.len() {
        return Ok(false);
    }
    let tiles = TileIndex::new(c);
    Ok(dihomotopy_class(c, &tiles, s).contains(t))
}

/// The full dihomotopy class of `s`.
pub fn dihomotopy_class(c: &PrecubicalSet, tiles: &TileIndex, s: &PathT) -> BTreeSet<PathT> {
    let mut seen = BTreeSet::from([s.clone()]);
    let mut queue = VecDeque::from([s.clone()]);
    while let Some(p) = queue.pop_front() {
        for n in dihomotopy_neighbors(c, tiles, &p) {
            if seen.insert(n.clone()) {
                queue.push_back(n);
            }
        }
    }
    seen
}

/// Outcome of the bounded homotopy search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Homotopic {
    Yes(Vec<HomotopyMove>),
    No,
    Unknown,
}

impl Homotopic {
    pub fn is_yes(&self) -> bool {
        matches!(self, Homotopic::Yes(_))
    }
}

/// Decide homotopy by search over homotopy steps, with intermediate paths
/// bounded by `max(|s|,|t|) + budget`.
///
/// `No` is returned only when the search exhausted the whole component
/// without ever being cut off by the length bound; otherwise a bounded
/// component not containing `t` yields `Unknown`.
pub fn are_homotopic(
    c: &PrecubicalSet,
    s: &PathT,
    t: &PathT,
    budget: usize,
) -> Result<Homotopic, PathError> {
    s.validate(c)?;
    t.validate(c)?;
    let (es, et) = ((s.start, s.end(c)), (t.start, t.end(c)));
    if es != et {
        return Err(PathError::EndpointMismatch(es, et));
    }
    let bound = s.len().max(t.len()) + budget;
    let tiles = TileIndex::new(c);
    let mut parents: BTreeMap<PathT, (PathT, HomotopyMove)> = BTreeMap::new();
    let mut seen = BTreeSet::from([s.clone()]);
    let mut queue = VecDeque::from([s.clone()]);
    let mut truncated = false;
    while let Some(p) = queue.pop_front() {
        if p == *t {
            let mut moves = Vec::new();
            let mut cur = p;
            while let Some((prev, mv)) = parents.get(&cur) {
                moves.push(*mv);
                cur = prev.clone();
            }
            moves.reverse();
            return Ok(Homotopic::Yes(moves));
        }
        // Tile moves.
        for k in 0..p.steps.len().saturating_sub(1) {
            for (x, y, _) in tiles.partners((p.steps[k], p.steps[k + 1])) {
                let mut steps = p.steps.clone();
                steps[k] = x;
                steps[k + 1] = y;
                let n = PathT { start: p.start, steps };
                if seen.insert(n.clone()) {
                    parents.insert(
                        n.clone(),
                        (p.clone(), HomotopyMove { rule: MoveRule::Tile, position: k, edge: x.edge }),
                    );
                    queue.push_back(n);
                }
            }
        }
        // Deletions.
        for k in 0..p.steps.len().saturating_sub(1) {
            if p.steps[k].reverse() == p.steps[k + 1] {
                let mut steps = p.steps.clone();
                let edge = steps[k].edge;
                steps.drain(k..=k + 1);
                let n = PathT { start: p.start, steps };
                if seen.insert(n.clone()) {
                    parents.insert(
                        n.clone(),
                        (p.clone(), HomotopyMove { rule: MoveRule::Delete, position: k, edge }),
                    );
                    queue.push_back(n);
                }
            }
        }
        // Insertions, if the bound allows.
        if p.len() + 2 > bound {
            truncated = true;
            continue;
        }
        for k in 0..=p.steps.len() {
            let at = p.vertex_at(c, k);
            for e in 0..c.cell_count(1) {
                if c.edge_src(e) == at {
                    let mut steps = p.steps.clone();
                    steps.splice(k..k, [Step::fwd(e), Step::rev(e)]);
                    let n = PathT { start: p.start, steps };
                    if seen.insert(n.clone()) {
                        parents.insert(
                            n.clone(),
                            (
                                p.clone(),
                                HomotopyMove { rule: MoveRule::InsertFwdRev, position: k, edge: e },
                            ),
                        );
                        queue.push_back(n);
                    }
                }
                if c.edge_tgt(e) == at {
                    let mut steps = p.steps.clone();
                    steps.splice(k..k, [Step::rev(e), Step::fwd(e)]);
                    let n = PathT { start: p.start, steps };
                    if seen.insert(n.clone()) {
                        parents.insert(
                            n.clone(),
                            (
                                p.clone(),
                                HomotopyMove { rule: MoveRule::InsertRevFwd, position: k, edge: e },
                            ),
                        );
                        queue.push_back(n);
                    }
                }
            }
        }
    }
    if truncated {
        Ok(Homotopic::Unknown)
    } else {
        Ok(Homotopic::No)
    }
}

/// All dipaths from `x` to `y` of length at most `len_bound`.
pub fn enumerate_dipaths(c: &PrecubicalSet, x: usize, y: usize, len_bound: usize) -> Vec<PathT> {
    let mut out = Vec::new();
    let mut outgoing: Vec<Vec<usize>> = vec![Vec::new(); c.cell_count(0)];
    for e in 0..c.cell_count(1) {
        outgoing[c.edge_src(e)].push(e);
    }
    let mut stack = vec![PathT::empty(x)];
    while let Some(p) = stack.pop() {
        let at = p.end(c);
        if at == y {
            out.push(p.clone());
        }
        if p.len() == len_bound {
            continue;
        }
        for e in outgoing[at].iter().rev() {
            let mut steps = p.steps.clone();
            steps.push(Step::fwd(*e));
            stack.push(PathT { start: x, steps });
        }
    }
    out.sort();
    out
}

/// Dihomotopy classes of dipaths `x → y` with length ≤ `len_bound`, each class
/// listed with its members, classes sorted by least representative.
pub fn dihomotopy_classes(
    c: &PrecubicalSet,
    x: usize,
    y: usize,
    len_bound: usize,
) -> Vec<Vec<PathT>> {
    let all = enumerate_dipaths(c, x, y, len_bound);
    let tiles = TileIndex::new(c);
    let index: BTreeMap<&PathT, usize> = all.iter().enumerate().map(|(i, p)| (p, i)).collect();
    let mut uf: Vec<usize> = (0..all.len()).collect();
    fn find(uf: &mut Vec<usize>, mut i: usize) -> usize {
        while uf[i] != i {
            uf[i] = uf[uf[i]];
            i = uf[i];
        }
        i
    }
    for (i, p) in all.iter().enumerate() {
        for n in dihomotopy_neighbors(c, &tiles, p) {
            if let Some(&j) = index.get(&n) {
                let (ri, rj) = (find(&mut uf, i), find(&mut uf, j));
                if ri != rj {
                    uf[ri.max(rj)] = ri.min(rj);
                }
            }
        }
    }
    let mut classes: BTreeMap<usize, Vec<PathT>> = BTreeMap::new();
    for (i, p) in all.iter().enumerate() {
        classes.entry(find(&mut uf, i)).or_default().push(p.clone());
    }
    classes.into_values().collect()
}

/// A path is locally geodesic when its dihomotopy class contains no member
/// with an adjacent mutually-inverse pair.
pub fn is_locally_geodesic(c: &PrecubicalSet, s: &PathT) -> Result<bool, PathError> {
    s.validate(c)?;
    let tiles = TileIndex::new(c);
    for p in dihomotopy_class(c, &tiles, s) {
        for k in 0..p.steps.len().saturating_sub(1) {
            if p.steps[k].reverse() == p.steps[k + 1] {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Outcome of the bounded geodesic check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Geodesic {
    Yes,
    No(PathT),
    Unknown,
}

/// A path is geodesic when no strictly shorter path between its endpoints is
/// homotopic to it; shorter candidates are tested with the given budget.
pub fn is_geodesic(c: &PrecubicalSet, s: &PathT, budget: usize) -> Result<Geodesic, PathError> {
    s.validate(c)?;
    let x = s.start;
    let y = s.end(c);
    let mut unknown = false;
    for cand in enumerate_paths(c, x, y, s.len().saturating_sub(1)) {
        match are_homotopic(c, s, &cand, budget)? {
            Homotopic::Yes(_) => return Ok(Geodesic::No(cand)),
            Homotopic::No => {}
            Homotopic::Unknown => unknown = true,
        }
    }
    if unknown {
        Ok(Geodesic::Unknown)
    } else {
        Ok(Geodesic::Yes)
    }
}

/// All paths (possibly reversed steps) from `x` to `y` of length ≤ `len_bound`.
pub fn enumerate_paths(c: &PrecubicalSet, x: usize, y: usize, len_bound: usize) -> Vec<PathT> {
    let mut out = Vec::new();
    let mut incident: Vec<Vec<Step>> = vec![Vec::new(); c.cell_count(0)];
    for e in 0..c.cell_count(1) {
        incident[c.edge_src(e)].push(Step::fwd(e));
        incident[c.edge_tgt(e)].push(Step::rev(e));
    }
    let mut stack = vec![PathT::empty(x)];
    while let Some(p) = stack.pop() {
        let at = p.end(c);
        if at == y {
            out.push(p.clone());
        }
        if p.len() == len_bound {
            continue;
        }
        for s in incident[at].iter().rev() {
            let mut steps = p.steps.clone();
            steps.push(*s);
            stack.push(PathT { start: x, steps });
        }
    }
    out.sort();
    out
}
