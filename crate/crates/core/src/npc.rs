//! Non-positive curvature checks: geometricity, the cube property, unique
//! fillings, vertex links and their flagness, and the combined verdict with
//! the link-condition cross-check.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::pcs::{
    find_morphisms, hollow_cube, lambda_complex, lift_status, standard_cube, CellId, CubeWord,
    Letter, PcsError, PcsMorphism, PrecubicalSet, Sign,
};

/// A finite presimplicial set: simplices per dimension with face maps
/// `∂_{i}: S(n+1) → S(n)` for `0 ≤ i ≤ n+1`, satisfying
/// `∂_i ∘ ∂_j = ∂_{j-1} ∘ ∂_i` for `i < j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PresimplicialSet {
    cells: Vec<usize>,
    /// `faces[n][i][c]`: the `i`-th face of the `(n+1)`-simplex `c`, `i ≤ n+1`.
    faces: Vec<Vec<Vec<usize>>>,
}

impl PresimplicialSet {
    pub fn empty() -> PresimplicialSet {
        PresimplicialSet { cells: vec![0], faces: vec![] }
    }

    pub fn dim(&self) -> usize {
        self.cells.len() - 1
    }

    pub fn cell_count(&self, d: usize) -> usize {
        self.cells.get(d).copied().unwrap_or(0)
    }

    pub fn cell_counts(&self) -> &[usize] {
        &self.cells
    }

    pub fn face(&self, c: CellId, i: usize) -> CellId {
        assert!(c.dim >= 1 && i <= c.dim);
        CellId::new(c.dim - 1, self.faces[c.dim - 1][i][c.index])
    }

    pub fn all_cells(&self) -> Vec<CellId> {
        let mut out = Vec::new();
        for d in 0..=self.dim() {
            for i in 0..self.cell_count(d) {
                out.push(CellId::new(d, i));
            }
        }
        out
    }

    /// Check the presimplicial identities; returns the first violation.
    pub fn validate(&self) -> Result<(), String> {
        for n in 0..self.dim().saturating_sub(1) {
            for c in 0..self.cell_count(n + 2) {
                let cell = CellId::new(n + 2, c);
                for j in 1..=n + 2 {
                    for i in 0..j {
                        let lhs = self.face(self.face(cell, j), i);
                        let rhs = self.face(self.face(cell, i), j - 1);
                        if lhs != rhs {
                            return Err(format!("identity fails at {n}-level cell {c} (i={i}, j={j})"));
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

/// The standard `m`-simplex: `k`-simplices are the `(k+1)`-subsets of `{0..m}`.
pub fn standard_simplex(m: usize) -> PresimplicialSet {
    let subsets = subsets_by_size(m);
    build_from_subsets(&subsets)
}

/// The hollow standard `m`-simplex (the top simplex removed).
pub fn hollow_simplex(m: usize) -> PresimplicialSet {
    let mut subsets = subsets_by_size(m);
    subsets.last_mut().unwrap().clear();
    while subsets.len() > 1 && subsets.last().unwrap().is_empty() {
        subsets.pop();
    }
    build_from_subsets(&subsets)
}

fn subsets_by_size(m: usize) -> Vec<Vec<Vec<usize>>> {
    let mut by_size: Vec<Vec<Vec<usize>>> = vec![Vec::new(); m + 1];
    let total = 1usize << (m + 1);
    for mask in 1..total {
        let set: Vec<usize> = (0..=m).filter(|i| mask & (1 << i) != 0).collect();
        by_size[set.len() - 1].push(set);
    }
    for sets in by_size.iter_mut() {
        sets.sort();
    }
    by_size
}

fn build_from_subsets(by_size: &[Vec<Vec<usize>>]) -> PresimplicialSet {
    let index: BTreeMap<Vec<usize>, usize> = by_size
        .iter()
        .flat_map(|sets| sets.iter().enumerate().map(|(i, s)| (s.clone(), i)))
        .collect();
    let cells: Vec<usize> = by_size.iter().map(|s| s.len()).collect();
    let mut faces = Vec::new();
    for d in 1..cells.len() {
        let mut per_axis = vec![vec![0; cells[d]]; d + 1];
        for (c, set) in by_size[d].iter().enumerate() {
            for i in 0..=d {
                let mut f = set.clone();
                f.remove(i);
                per_axis[i][c] = index[&f];
            }
        }
        faces.push(per_axis);
    }
    PresimplicialSet { cells, faces }
}

/// All presimplicial morphisms `D → S` extending `partial`, in lexicographic
/// order of the image vector over cells sorted by `(dimension, id)`.
pub fn find_simplicial_morphisms(
    d: &PresimplicialSet,
    s: &PresimplicialSet,
    partial: &BTreeMap<CellId, CellId>,
) -> Vec<Vec<Vec<usize>>> {
    let mut assign: Vec<Vec<usize>> = (0..=d.dim()).map(|k| vec![usize::MAX; d.cell_count(k)]).collect();
    for (src, tgt) in partial {
        if src.dim != tgt.dim || src.index >= d.cell_count(src.dim) || tgt.index >= s.cell_count(tgt.dim) {
            return Vec::new();
        }
        if !propagate(d, s, &mut assign, *src, *tgt) {
            return Vec::new();
        }
    }
    let mut order = Vec::new();
    for k in (0..=d.dim()).rev() {
        for i in 0..d.cell_count(k) {
            order.push(CellId::new(k, i));
        }
    }
    let mut results = Vec::new();
    search(d, s, &mut assign, &order, 0, &mut results);
    results.sort();
    results
}

fn propagate(
    d: &PresimplicialSet,
    s: &PresimplicialSet,
    assign: &mut [Vec<usize>],
    src: CellId,
    tgt: CellId,
) -> bool {
    let cur = assign[src.dim][src.index];
    if cur != usize::MAX {
        return cur == tgt.index;
    }
    assign[src.dim][src.index] = tgt.index;
    if src.dim >= 1 {
        for i in 0..=src.dim {
            if !propagate(d, s, assign, d.face(src, i), s.face(tgt, i)) {
                return false;
            }
        }
    }
    true
}

fn search(
    d: &PresimplicialSet,
    s: &PresimplicialSet,
    assign: &mut Vec<Vec<usize>>,
    order: &[CellId],
    pos: usize,
    results: &mut Vec<Vec<Vec<usize>>>,
) {
    let mut pos = pos;
    while pos < order.len() && assign[order[pos].dim][order[pos].index] != usize::MAX {
        pos += 1;
    }
    if pos == order.len() {
        results.push(assign.clone());
        return;
    }
    let cell = order[pos];
    for t in 0..s.cell_count(cell.dim) {
        let snapshot = assign.clone();
        if propagate(d, s, assign, cell, CellId::new(cell.dim, t)) {
            search(d, s, assign, order, pos + 1, results);
        }
        *assign = snapshot;
    }
}

/// The link of a vertex: its `(n-1)`-simplices are the pairs `(u, y)` with
/// `u ∈ {-,+}^n`, `y ∈ C(n)` and `∂u(y) = x`.
#[derive(Clone, Debug)]
pub struct VertexLink {
    pub complex: PresimplicialSet,
    /// For each dimension of the link, the `(u, y)` pair each simplex stands for.
    pub pairs: Vec<Vec<(Vec<Sign>, CellId)>>,
}

pub fn link(c: &PrecubicalSet, x: usize) -> VertexLink {
    let mut pairs: Vec<Vec<(Vec<Sign>, CellId)>> = Vec::new();
    let mut index: BTreeMap<(Vec<Sign>, CellId), usize> = BTreeMap::new();
    for n in 1..=c.dim() {
        let mut level = Vec::new();
        for y in c.cells_of_dim(n) {
            for u in crate::pcs::sign_words(n) {
                let word = CubeWord(u.iter().map(|s| Letter::from_sign(*s)).collect());
                if c.iterated_face(y, &word).expect("valid corner word").index == x {
                    index.insert((u.clone(), y), level.len());
                    level.push((u, y));
                }
            }
        }
        pairs.push(level);
    }
    while pairs.len() > 1 && pairs.last().unwrap().is_empty() {
        pairs.pop();
    }
    if pairs.is_empty() || pairs[0].is_empty() {
        return VertexLink { complex: PresimplicialSet::empty(), pairs: vec![vec![]] };
    }
    let cells: Vec<usize> = pairs.iter().map(|l| l.len()).collect();
    let mut faces = Vec::new();
    for d in 1..cells.len() {
        // a d-simplex of the link is a pair (u, y) with |u| = d+1
        let mut per_axis = vec![vec![0; cells[d]]; d + 1];
        for (ci, (u, y)) in pairs[d].iter().enumerate() {
            for i in 0..=d {
                let mut u2 = u.clone();
                let sign = u2.remove(i);
                let y2 = c.face(*y, i, sign);
                per_axis[i][ci] = index[&(u2, y2)];
            }
        }
        faces.push(per_axis);
    }
    VertexLink { complex: PresimplicialSet { cells, faces }, pairs }
}

/// The link of the whole complex: disjoint union of all vertex links.
pub fn link_global(c: &PrecubicalSet) -> PresimplicialSet {
    let mut acc = PresimplicialSet::empty();
    for x in 0..c.cell_count(0) {
        let l = link(c, x).complex;
        acc = disjoint_union(&acc, &l);
    }
    acc
}

fn disjoint_union(a: &PresimplicialSet, b: &PresimplicialSet) -> PresimplicialSet {
    let dim = a.dim().max(b.dim());
    let mut cells = vec![0; dim + 1];
    let mut offsets = vec![0; dim + 1];
    for d in 0..=dim {
        offsets[d] = a.cell_count(d);
        cells[d] = a.cell_count(d) + b.cell_count(d);
    }
    while cells.len() > 1 && *cells.last().unwrap() == 0 {
        cells.pop();
    }
    let dim = cells.len() - 1;
    let mut faces = Vec::new();
    for d in 1..=dim {
        let mut per_axis = vec![vec![0; cells[d]]; d + 1];
        for i in 0..=d {
            for c in 0..a.cell_count(d) {
                per_axis[i][c] = a.face(CellId::new(d, c), i).index;
            }
            for c in 0..b.cell_count(d) {
                per_axis[i][offsets[d] + c] = offsets[d - 1] + b.face(CellId::new(d, c), i).index;
            }
        }
        faces.push(per_axis);
    }
    PresimplicialSet { cells, faces }
}

/// Flagness: every hollow simplex on `n ≥ 3` vertices (geometric dimension
/// `n-1 ≥ 2`) mapping into `S` fills uniquely. Hollow simplices with more than
/// `dim S + 2` vertices cannot map into `S`, so the scan is bounded.
pub fn is_flag(s: &PresimplicialSet) -> (bool, Option<String>) {
    for m in 2..=s.dim() + 1 {
        let hollow = hollow_simplex(m);
        let full = standard_simplex(m);
        let borders = find_simplicial_morphisms(&hollow, s, &BTreeMap::new());
        for f in borders {
            // Seed the full simplex with the border images; indices agree in
            // every dimension below m because hollow/full share the subsets.
            let mut partial = BTreeMap::new();
            for d in 0..m {
                for i in 0..hollow.cell_count(d) {
                    partial.insert(CellId::new(d, i), CellId::new(d, f[d][i]));
                }
            }
            let fillers = find_simplicial_morphisms(&full, s, &partial);
            if fillers.len() != 1 {
                return (
                    false,
                    Some(format!(
                        "hollow simplex on {} vertices has {} fillers (vertex images {:?})",
                        m + 1,
                        fillers.len(),
                        f[0]
                    )),
                );
            }
        }
    }
    (true, None)
}

/// Report of the five 2-dimensional geometricity conditions.
#[derive(Clone, Debug, Default, Serialize)]
pub struct GeometricityReport {
    pub looping_edge: Option<usize>,
    pub folded_square: Option<usize>,
    pub parallel_edges: Option<(usize, usize)>,
    pub pinned_squares: Option<(usize, usize)>,
    /// A border morphism with at least two closing squares.
    pub square_closing_not_unique: Option<String>,
}

impl GeometricityReport {
    pub fn is_geometric(&self) -> bool {
        self.looping_edge.is_none()
            && self.folded_square.is_none()
            && self.parallel_edges.is_none()
            && self.pinned_squares.is_none()
            && self.square_closing_not_unique.is_none()
    }
}

/// Check the five conditions of the 2-dimensional geometricity criterion.
/// Input must be 2-truncated (use `truncate` first).
pub fn geometricity_report(c: &PrecubicalSet) -> Result<GeometricityReport, PcsError> {
    if c.dim() > 2 {
        return Err(PcsError::Structural("geometricity report expects a 2-truncated complex".into()));
    }
    let mut report = GeometricityReport::default();
    for e in 0..c.cell_count(1) {
        if c.edge_src(e) == c.edge_tgt(e) {
            report.looping_edge = Some(e);
            break;
        }
    }
    let corner = |sq: usize, w: &str| {
        c.iterated_face(CellId::new(2, sq), &CubeWord::parse(w).unwrap()).unwrap().index
    };
    for sq in 0..c.cell_count(2) {
        if corner(sq, "--") == corner(sq, "++") || corner(sq, "-+") == corner(sq, "+-") {
            report.folded_square = Some(sq);
            break;
        }
    }
    'outer: for e in 0..c.cell_count(1) {
        for f in e + 1..c.cell_count(1) {
            if c.edge_src(e) == c.edge_src(f) && c.edge_tgt(e) == c.edge_tgt(f) {
                report.parallel_edges = Some((e, f));
                break 'outer;
            }
        }
    }
    'outer2: for sq in 0..c.cell_count(2) {
        for sq2 in sq + 1..c.cell_count(2) {
            let diag1 = corner(sq, "--") == corner(sq2, "--") && corner(sq, "++") == corner(sq2, "++");
            let diag2 = corner(sq, "+-") == corner(sq2, "+-") && corner(sq, "-+") == corner(sq2, "-+");
            if diag1 || diag2 {
                report.pinned_squares = Some((sq, sq2));
                break 'outer2;
            }
        }
    }
    // At most one square closing, via the four Λu ↪ Y2 lifting templates.
    'templates: for u in crate::pcs::sign_words(2) {
        let lam = lambda_complex(&u)?;
        let y2 = standard_cube(2)?;
        let incl = lambda_inclusion(&lam, &y2)?;
        for h in find_morphisms(&lam, c, &BTreeMap::new()) {
            let st = lift_status(c, &incl, &h)?;
            if st.count > 1 {
                report.square_closing_not_unique = Some(format!(
                    "Λ{} morphism with image vertices {:?} closes {} squares",
                    word_str(&u),
                    h.map[0],
                    st.count
                ));
                break 'templates;
            }
        }
    }
    Ok(report)
}

fn word_str(u: &[Sign]) -> String {
    u.iter().map(|s| if *s == Sign::Neg { '-' } else { '+' }).collect()
}

/// The canonical inclusion of a standard-construction subcomplex (`Λu`, `∂Yn`)
/// into `Yn` or `∂Yn`.
///
/// Both sides enumerate cells in lexicographic word order, so the inclusion is
/// the unique injective morphism whose image indices are increasing in every
/// dimension.
pub fn lambda_inclusion(sub: &PrecubicalSet, ambient: &PrecubicalSet) -> Result<PcsMorphism, PcsError> {
    let ms = find_morphisms(sub, ambient, &BTreeMap::new());
    ms.into_iter()
        .filter(|m| {
            (0..=sub.dim()).all(|k| {
                let mut seen = BTreeSet::new();
                m.map[k].iter().all(|t| seen.insert(*t))
            })
        })
        .find(|m| m.map.iter().all(|level| level.windows(2).all(|w| w[0] < w[1])))
        .ok_or_else(|| PcsError::Structural("no canonical inclusion found".into()))
}

/// Witness that the category of elements fails geometricity.
#[derive(Clone, Debug, Serialize)]
pub enum ElWitness {
    SelfIntersection { cell: CellId, word1: String, word2: String },
    NoMaximalCommonFace { a: CellId, b: CellId },
}

/// Geometricity via the category of elements: no self-intersection, and every
/// pair of cells with a common iterated face has a greatest common one.
pub fn check_geometric_via_elements(c: &PrecubicalSet) -> (bool, Option<ElWitness>) {
    // Self-intersection: u ↦ ∂u(x) must be injective.
    for x in c.all_cells() {
        let mut seen: BTreeMap<CellId, CubeWord> = BTreeMap::new();
        for w in all_face_words(x.dim) {
            let f = c.iterated_face(x, &w).expect("face word");
            if let Some(prev) = seen.get(&f) {
                return (
                    false,
                    Some(ElWitness::SelfIntersection {
                        cell: x,
                        word1: prev.to_string(),
                        word2: w.to_string(),
                    }),
                );
            }
            seen.insert(f, w);
        }
    }
    // Down-sets of the iterated-face order.
    let cells = c.all_cells();
    let down: BTreeMap<CellId, BTreeSet<CellId>> =
        cells.iter().map(|x| (*x, c.iterated_faces(*x))).collect();
    for (i, a) in cells.iter().enumerate() {
        for b in cells.iter().skip(i + 1) {
            let common: Vec<CellId> = down[a].intersection(&down[b]).copied().collect();
            if common.is_empty() {
                continue;
            }
            let has_top = common.iter().any(|m| common.iter().all(|z| down[m].contains(z)));
            if !has_top {
                return (false, Some(ElWitness::NoMaximalCommonFace { a: *a, b: *b }));
            }
        }
    }
    (true, None)
}

fn all_face_words(n: usize) -> Vec<CubeWord> {
    let mut out = vec![CubeWord(vec![])];
    for _ in 0..n {
        let mut next = Vec::new();
        for w in &out {
            for l in [Letter::Minus, Letter::Zero, Letter::Plus] {
                let mut w2 = w.0.clone();
                w2.push(l);
                next.push(CubeWord(w2));
            }
        }
        out = next;
    }
    out
}

/// Cube property: each of the four canonical inclusions `Λu ↪ ∂Y3`
/// (`u ∈ {+-+, -+-, ---, +++}`) lifts at least once against every morphism
/// `Λu → C`.
pub fn check_cube_property(c: &PrecubicalSet) -> Result<(bool, Option<String>), PcsError> {
    let dy3 = hollow_cube(3)?;
    for u in [
        [Sign::Pos, Sign::Neg, Sign::Pos],
        [Sign::Neg, Sign::Pos, Sign::Neg],
        [Sign::Neg, Sign::Neg, Sign::Neg],
        [Sign::Pos, Sign::Pos, Sign::Pos],
    ] {
        let lam = lambda_complex(&u)?;
        let incl = lambda_inclusion(&lam, &dy3)?;
        for h in find_morphisms(&lam, c, &BTreeMap::new()) {
            let st = lift_status(c, &incl, &h)?;
            if st.count == 0 {
                return Ok((
                    false,
                    Some(format!(
                        "Λ{} morphism with vertex images {:?} does not extend to ∂Y3",
                        word_str(&u),
                        h.map[0]
                    )),
                ));
            }
        }
    }
    Ok((true, None))
}

/// Cube property over all eight corner templates `Λu ↪ ∂Y3`, `u ∈ {-,+}³`.
///
/// The four-template form of [`check_cube_property`] does not imply this one
/// in general: a half hollow cube anchored at one of the other four corners
/// can fail to close even when the four canonical inclusions all lift. The
/// all-corners form is the one that matches flagness of the vertex links.
pub fn check_cube_property_all_corners(c: &PrecubicalSet) -> Result<(bool, Option<String>), PcsError> {
    let dy3 = hollow_cube(3)?;
    for u in crate::pcs::sign_words(3) {
        let lam = lambda_complex(&u)?;
        let incl = lambda_inclusion(&lam, &dy3)?;
        for h in find_morphisms(&lam, c, &BTreeMap::new()) {
            let st = lift_status(c, &incl, &h)?;
            if st.count == 0 {
                return Ok((
                    false,
                    Some(format!(
                        "Λ{} morphism with vertex images {:?} does not extend to ∂Y3",
                        word_str(&u),
                        h.map[0]
                    )),
                ));
            }
        }
    }
    Ok((true, None))
}

/// Unique `k`-cube filling: every `∂Yk → C` extends to `Yk → C` exactly once
/// for `k ≥ 3`; for `k = 2` the at-most-once variant is checked instead.
pub fn unique_filling(c: &PrecubicalSet, k: usize) -> Result<(bool, Option<String>), PcsError> {
    assert!(k >= 2);
    let hollow = hollow_cube(k)?;
    let full = standard_cube(k)?;
    let incl = lambda_inclusion(&hollow, &full)?;
    for h in find_morphisms(&hollow, c, &BTreeMap::new()) {
        let st = lift_status(c, &incl, &h)?;
        let ok = if k >= 3 { st.count == 1 } else { st.count <= 1 };
        if !ok {
            return Ok((
                false,
                Some(format!("∂Y{k} morphism with vertex images {:?} has {} fillers", h.map[0], st.count)),
            ));
        }
    }
    Ok((true, None))
}

/// The combined verdict, with the axiomatic route and the link-condition route.
#[derive(Clone, Debug, Serialize)]
pub struct NpcVerdict {
    pub geometric: bool,
    pub cube_property: bool,
    pub unique_fillings: BTreeMap<usize, bool>,
    pub flag_links: bool,
    /// `Some(true)` when both routes agree (only meaningful for geometric input).
    pub theorem_agreement: Option<bool>,
    pub witnesses: Vec<String>,
}

impl NpcVerdict {
    pub fn npc(&self) -> bool {
        self.geometric && self.cube_property && self.unique_fillings.values().all(|b| *b)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "geometric": self.geometric,
            "cube_property": self.cube_property,
            "unique_fillings": self.unique_fillings,
            "flag_links": self.flag_links,
            "npc": self.npc(),
            "theorem_agreement": self.theorem_agreement,
            "witnesses": self.witnesses,
        })
    }
}

/// Compute the verdict: geometricity, cube property and unique fillings on one
/// route, flagness of every vertex link on the other, plus the cross-check
/// that the two routes agree on geometric complexes.
///
/// Checks stop at the first witness; [`npc_verdict_full`] keeps scanning.
pub fn npc_verdict(c: &PrecubicalSet) -> Result<NpcVerdict, PcsError> {
    npc_verdict_with(c, false)
}

/// Like [`npc_verdict`], but collects a witness for every failing vertex link
/// instead of stopping at the first.
pub fn npc_verdict_full(c: &PrecubicalSet) -> Result<NpcVerdict, PcsError> {
    npc_verdict_with(c, true)
}

fn npc_verdict_with(c: &PrecubicalSet, full_witnesses: bool) -> Result<NpcVerdict, PcsError> {
    let mut witnesses = Vec::new();
    let (geometric, gw) = check_geometric_via_elements(c);
    if let Some(w) = gw {
        witnesses.push(format!("geometricity: {w:?}"));
    }
    let (cube_property, cw) = check_cube_property(c)?;
    if let Some(w) = cw {
        witnesses.push(format!("cube property: {w}"));
    }
    let mut unique_fillings = BTreeMap::new();
    for k in 3..=c.dim() + 1 {
        let (ok, w) = unique_filling(c, k)?;
        unique_fillings.insert(k, ok);
        if let Some(w) = w {
            witnesses.push(format!("unique {k}-filling: {w}"));
        }
    }
    let mut flag_links = true;
    for x in 0..c.cell_count(0) {
        let l = link(c, x);
        debug_assert!(l.complex.validate().is_ok());
        let (ok, w) = is_flag(&l.complex);
        if !ok {
            flag_links = false;
            if let Some(w) = w {
                witnesses.push(format!("link of vertex {x} not flag: {w}"));
            }
            if !full_witnesses {
                break;
            }
        }
    }
    let axiom_route = cube_property && unique_fillings.values().all(|b| *b);
    let theorem_agreement = if geometric { Some(axiom_route == flag_links) } else { None };
    Ok(NpcVerdict { geometric, cube_property, unique_fillings, flag_links, theorem_agreement, witnesses })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pcs::{PcsBuilder, StandardCubeIndex};

    #[test]
    fn standard_simplices() {
        let z2 = standard_simplex(2);
        assert_eq!(z2.cell_counts(), &[3, 3, 1]);
        assert!(z2.validate().is_ok());
        let h2 = hollow_simplex(2);
        assert_eq!(h2.cell_counts(), &[3, 3]);
        let z3 = standard_simplex(3);
        assert_eq!(z3.cell_counts(), &[4, 6, 4, 1]);
        assert!(z3.validate().is_ok());
    }

    #[test]
    fn flag_examples() {
        // Solid triangle: flag. Hollow triangle: not flag.
        assert!(is_flag(&standard_simplex(2)).0);
        assert!(!is_flag(&hollow_simplex(2)).0);
        assert!(is_flag(&PresimplicialSet::empty()).0);
        assert!(is_flag(&hollow_simplex(1)).0); // two points, nothing to fill
    }

    #[test]
    fn link_of_square_corner() {
        let y2 = standard_cube(2).unwrap();
        // corner -- is vertex 0 in lexicographic order
        let l = link(&y2, 0);
        assert_eq!(l.complex.cell_counts(), &[2, 1]);
        let y3 = standard_cube(3).unwrap();
        let l = link(&y3, 0);
        // solid triangle
        assert_eq!(l.complex.cell_counts(), &[3, 3, 1]);
        assert!(is_flag(&l.complex).0);
        let dy3 = hollow_cube(3).unwrap();
        let l = link(&dy3, 0);
        assert_eq!(l.complex.cell_counts(), &[3, 3]);
        assert!(!is_flag(&l.complex).0);
    }

    #[test]
    fn link_example_from_text() {
        // A square plus a free edge at the corner x: the link of x has points
        // a, b, c and one segment (the square) with endpoints b, c.
        let mut b = PcsBuilder::new();
        let v = b.add_vertices(6); // x=0, y1=1, y2=2, y3=3, z=4, z'=5
        let ea = b.add_edge(v[0], v[3]);
        let eb = b.add_edge(v[0], v[1]);
        let ec = b.add_edge(v[0], v[2]);
        let e_y1z = b.add_edge(v[1], v[4]);
        let e_y2z = b.add_edge(v[2], v[4]);
        let _e1 = b.add_edge(v[1], v[5]);
        let _e2 = b.add_edge(v[3], v[5]);
        b.add_square(ec, e_y1z, eb, e_y2z);
        let c = b.finish().unwrap();
        assert!(c.validate().is_ok());
        let l = link(&c, 0);
        assert_eq!(l.complex.cell_counts(), &[3, 1]);
        let seg = CellId::new(1, 0);
        let f0 = l.complex.face(seg, 0);
        let f1 = l.complex.face(seg, 1);
        let pts: BTreeSet<usize> = [f0.index, f1.index].into();
        let names: Vec<usize> = l.pairs[0].iter().map(|(_, y)| y.index).collect();
        assert_eq!(pts.len(), 2);
        assert!(pts.iter().all(|p| names[*p] == eb || names[*p] == ec));
        assert!(names.contains(&ea));
    }

    #[test]
    fn geometricity_counterexamples() {
        // (2) loop edge
        let mut b = PcsBuilder::new();
        let v = b.add_vertex();
        b.add_edge(v, v);
        let c = b.finish().unwrap();
        let r = geometricity_report(&c).unwrap();
        assert_eq!(r.looping_edge, Some(0));
        assert!(!check_geometric_via_elements(&c).0);

        // (1) parallel edges
        let mut b = PcsBuilder::new();
        let v = b.add_vertices(2);
        b.add_edge(v[0], v[1]);
        b.add_edge(v[0], v[1]);
        let c = b.finish().unwrap();
        let r = geometricity_report(&c).unwrap();
        assert_eq!(r.parallel_edges, Some((0, 1)));
        assert!(!check_geometric_via_elements(&c).0);

        // (3) two edges in opposite directions
        let mut b = PcsBuilder::new();
        let v = b.add_vertices(2);
        b.add_edge(v[0], v[1]);
        b.add_edge(v[1], v[0]);
        let c = b.finish().unwrap();
        assert!(!check_geometric_via_elements(&c).0);

        // (4) directed triangle is geometric
        let mut b = PcsBuilder::new();
        let v = b.add_vertices(3);
        b.add_edge(v[0], v[1]);
        b.add_edge(v[1], v[2]);
        b.add_edge(v[2], v[0]);
        let c = b.finish().unwrap();
        assert!(geometricity_report(&c).unwrap().is_geometric());
        assert!(check_geometric_via_elements(&c).0);
    }

    #[test]
    fn pinned_squares_detected() {
        // Two squares glued on both diagonal corner pairs (-+ and +-).
        let mut b = PcsBuilder::new();
        let v = b.add_vertices(4); // x=0, y=1, p=2 (-+ corner), q=3 (+- corner)
        let e_a = b.add_edge(v[0], v[2]); // -0 (x → p)
        let e_b = b.add_edge(v[2], v[1]); // 0+ (p → y)
        let e_bp = b.add_edge(v[0], v[3]); // 0- (x → q)
        let e_ap = b.add_edge(v[3], v[1]); // +0 (q → y)
        b.add_square(e_a, e_ap, e_bp, e_b);
        let v2 = b.add_vertex(); // x'
        let v3 = b.add_vertex(); // y'
        let f_a = b.add_edge(v2, v[2]);
        let f_b = b.add_edge(v[2], v3);
        let f_bp = b.add_edge(v2, v[3]);
        let f_ap = b.add_edge(v[3], v3);
        b.add_square(f_a, f_ap, f_bp, f_b);
        let c = b.finish().unwrap();
        assert!(c.validate().is_ok());
        let r = geometricity_report(&c).unwrap();
        assert_eq!(r.pinned_squares, Some((0, 1)));
        assert!(!check_geometric_via_elements(&c).0);
    }

    #[test]
    fn el_route_matches_report_on_2dim() {
        let y2 = standard_cube(2).unwrap();
        assert!(geometricity_report(&y2).unwrap().is_geometric());
        assert!(check_geometric_via_elements(&y2).0);
        let dy2 = hollow_cube(2).unwrap();
        assert!(geometricity_report(&dy2).unwrap().is_geometric());
        assert!(check_geometric_via_elements(&dy2).0);
    }

    #[test]
    fn cube_property_examples() {
        let y3 = standard_cube(3).unwrap();
        assert!(check_cube_property(&y3).unwrap().0);
        let dy3 = hollow_cube(3).unwrap();
        assert!(check_cube_property(&dy3).unwrap().0);
        // Hollow cube minus the bottom face 0-0 fails the cube property.
        let idx = StandardCubeIndex::new(3);
        let bottom = idx.id_of(&CubeWord::parse("0-0").unwrap()).unwrap();
        let (c, _) = dy3.subcomplex(|cell| cell != bottom);
        assert!(!check_cube_property(&c).unwrap().0);
    }

    #[test]
    fn unique_filling_examples() {
        let y3 = standard_cube(3).unwrap();
        assert!(unique_filling(&y3, 3).unwrap().0);
        let dy3 = hollow_cube(3).unwrap();
        assert!(!unique_filling(&dy3, 3).unwrap().0);
    }

    #[test]
    fn link_global_is_union_of_vertex_links() {
        let y2 = standard_cube(2).unwrap();
        let g = link_global(&y2);
        // four corners, each with two points and one segment
        assert_eq!(g.cell_counts(), &[8, 4]);
        assert!(g.validate().is_ok());
    }

    #[test]
    fn full_witness_mode_scans_all_links() {
        let dy3 = hollow_cube(3).unwrap();
        let first = npc_verdict(&dy3).unwrap();
        let full = npc_verdict_full(&dy3).unwrap();
        // every one of the 8 vertex links of the hollow cube is a hollow triangle
        assert_eq!(first.witnesses.iter().filter(|w| w.contains("not flag")).count(), 1);
        assert_eq!(full.witnesses.iter().filter(|w| w.contains("not flag")).count(), 8);
    }

    /// The four-template cube property is strictly weaker than the
    /// all-corners one: a half hollow cube anchored at a non-canonical corner
    /// admits no morphism from the four templates (so the four-template check
    /// passes vacuously) while its own inclusion fails to close, and the link
    /// of its anchor corner is an unfillable hollow triangle.
    #[test]
    fn half_cube_at_noncanonical_corner_separates_the_routes() {
        let lam = lambda_complex(&[Sign::Neg, Sign::Pos, Sign::Pos]).unwrap();
        assert!(check_geometric_via_elements(&lam).0);
        assert!(check_cube_property(&lam).unwrap().0, "four templates: vacuous");
        assert!(!check_cube_property_all_corners(&lam).unwrap().0);
        let v = npc_verdict(&lam).unwrap();
        assert!(v.npc(), "the four-template definition calls it NPC");
        assert!(!v.flag_links);
        assert_eq!(v.theorem_agreement, Some(false), "the verdict reports the disagreement");
        // A canonical-corner half cube fails the four-template check directly.
        let lam2 = lambda_complex(&[Sign::Pos, Sign::Neg, Sign::Pos]).unwrap();
        assert!(!check_cube_property(&lam2).unwrap().0);
    }

    #[test]
    fn verdict_on_standard_complexes() {
        let y3 = standard_cube(3).unwrap();
        let v = npc_verdict(&y3).unwrap();
        assert!(v.npc());
        assert!(v.flag_links);
        assert_eq!(v.theorem_agreement, Some(true));

        let dy3 = hollow_cube(3).unwrap();
        let v = npc_verdict(&dy3).unwrap();
        assert!(!v.npc());
        assert!(!v.flag_links);
        assert_eq!(v.theorem_agreement, Some(true));
    }
}
