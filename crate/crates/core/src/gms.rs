//! Finite generalized metric spaces (directed distances with +∞ allowed),
//! chain/coequalizer distances, the two symmetrizations, grid realizations of
//! precubical sets and the numeric local-distance and CAT(0) spot checks.

use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

use crate::pcs::{CellId, CubeWord, Letter, PrecubicalSet, Sign};

pub const INF: f64 = f64::INFINITY;

/// Comparison slack for exact identities on floating-point distances.
pub const EPS: f64 = 1e-9;

#[derive(Error, Debug, Clone, PartialEq)]
pub enum GmsError {
    #[error("point {0} out of range")]
    NoSuchPoint(usize),
    #[error("input complex is not geometric: {0}")]
    NotGeometric(String),
    #[error("resolution must be at least 1")]
    BadResolution,
    #[error("{0}")]
    Invalid(String),
}

/// A finite generalized metric space: named points and a distance matrix.
#[derive(Clone, Debug, Serialize)]
pub struct FinitePointSpace {
    pub names: Vec<String>,
    pub dist: Vec<Vec<f64>>,
}

impl FinitePointSpace {
    pub fn new(names: Vec<String>, dist: Vec<Vec<f64>>) -> FinitePointSpace {
        FinitePointSpace { names, dist }
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn d(&self, x: usize, y: usize) -> f64 {
        self.dist[x][y]
    }

    /// The space with `d(x,x) = 0` and `∞` elsewhere.
    pub fn discrete(names: Vec<String>) -> FinitePointSpace {
        let n = names.len();
        let mut dist = vec![vec![INF; n]; n];
        for (i, row) in dist.iter_mut().enumerate() {
            row[i] = 0.0;
        }
        FinitePointSpace { names, dist }
    }

    /// All violated instances of the two axioms.
    pub fn validate(&self) -> Vec<String> {
        let mut out = Vec::new();
        let n = self.len();
        for x in 0..n {
            if self.dist[x][x].abs() > EPS {
                out.push(format!("d({x},{x}) = {} != 0", self.dist[x][x]));
            }
            for y in 0..n {
                if self.dist[x][y] < 0.0 {
                    out.push(format!("d({x},{y}) < 0"));
                }
            }
        }
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    if self.dist[x][z] > self.dist[x][y] + self.dist[y][z] + EPS {
                        out.push(format!(
                            "triangle inequality fails: d({x},{z}) > d({x},{y}) + d({y},{z})"
                        ));
                    }
                }
            }
        }
        out
    }

    pub fn is_symmetric(&self) -> bool {
        let n = self.len();
        (0..n).all(|x| (0..n).all(|y| (self.dist[x][y] - self.dist[y][x]).abs() <= EPS
            || (self.dist[x][y] == INF && self.dist[y][x] == INF)))
    }

    /// CSV rendering: header of names, then rows with `inf` for +∞.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(&self.names.join(","));
        out.push('\n');
        for row in &self.dist {
            let cells: Vec<String> = row
                .iter()
                .map(|v| if v.is_infinite() { "inf".to_string() } else { format!("{v}") })
                .collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    /// JSON rendering with `null` for +∞.
    pub fn to_json(&self) -> serde_json::Value {
        let dist: Vec<Vec<serde_json::Value>> = self
            .dist
            .iter()
            .map(|row| {
                row.iter()
                    .map(|v| {
                        if v.is_infinite() {
                            serde_json::Value::Null
                        } else {
                            serde_json::json!(v)
                        }
                    })
                    .collect()
            })
            .collect();
        serde_json::json!({ "points": self.names, "dist": dist })
    }
}

/// Min-plus transitive closure (Floyd–Warshall with +∞).
fn min_plus_closure(dist: &mut Vec<Vec<f64>>) {
    let n = dist.len();
    for k in 0..n {
        for i in 0..n {
            if dist[i][k] == INF {
                continue;
            }
            for j in 0..n {
                let via = dist[i][k] + dist[k][j];
                if via < dist[i][j] {
                    dist[i][j] = via;
                }
            }
        }
    }
}

/// Coequalizer distance: identify point pairs, then take the infimum of chain
/// lengths (block distances with free hops across identifications).
pub fn chain_distance(space: &FinitePointSpace, glue: &[(usize, usize)]) -> Result<FinitePointSpace, GmsError> {
    let n = space.len();
    for &(a, b) in glue {
        if a >= n || b >= n {
            return Err(GmsError::NoSuchPoint(a.max(b)));
        }
    }
    let mut uf: Vec<usize> = (0..n).collect();
    fn find(uf: &mut Vec<usize>, mut x: usize) -> usize {
        while uf[x] != x {
            uf[x] = uf[uf[x]];
            x = uf[x];
        }
        x
    }
    for &(a, b) in glue {
        let (ra, rb) = (find(&mut uf, a), find(&mut uf, b));
        if ra != rb {
            uf[ra.max(rb)] = ra.min(rb);
        }
    }
    let mut reps: Vec<usize> = (0..n).map(|x| find(&mut uf, x)).collect();
    let mut ids: Vec<usize> = reps.clone();
    ids.sort_unstable();
    ids.dedup();
    let index: BTreeMap<usize, usize> = ids.iter().enumerate().map(|(i, r)| (*r, i)).collect();
    for r in reps.iter_mut() {
        *r = index[r];
    }
    let m = ids.len();
    let mut dist = vec![vec![INF; m]; m];
    for (i, row) in dist.iter_mut().enumerate() {
        row[i] = 0.0;
    }
    for x in 0..n {
        for y in 0..n {
            let (cx, cy) = (reps[x], reps[y]);
            if space.dist[x][y] < dist[cx][cy] {
                dist[cx][cy] = space.dist[x][y];
            }
        }
    }
    min_plus_closure(&mut dist);
    let names = ids.iter().map(|r| space.names[*r].clone()).collect();
    Ok(FinitePointSpace { names, dist })
}

/// Left adjoint symmetrization: the largest symmetric metric below `d`,
/// computed as the shortest-path closure over the one-step costs
/// `min(d(x,y), d(y,x))`.
pub fn symmetrize_left(space: &FinitePointSpace) -> FinitePointSpace {
    let n = space.len();
    let mut dist = vec![vec![INF; n]; n];
    for x in 0..n {
        for y in 0..n {
            dist[x][y] = space.dist[x][y].min(space.dist[y][x]);
        }
        dist[x][x] = 0.0;
    }
    min_plus_closure(&mut dist);
    FinitePointSpace { names: space.names.clone(), dist }
}

/// Right adjoint symmetrization: pointwise maximum.
pub fn symmetrize_right(space: &FinitePointSpace) -> FinitePointSpace {
    let n = space.len();
    let mut dist = vec![vec![INF; n]; n];
    for x in 0..n {
        for y in 0..n {
            dist[x][y] = space.dist[x][y].max(space.dist[y][x]);
        }
        dist[x][x] = 0.0;
    }
    FinitePointSpace { names: space.names.clone(), dist }
}

/// Per-cube metric of a realization.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CubeMetric {
    /// Product (maximum) metric, the realization default.
    Linf,
    /// Euclidean metric, the CAT(0) setting.
    L2,
}

impl std::str::FromStr for CubeMetric {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "linf" => Ok(CubeMetric::Linf),
            "l2" => Ok(CubeMetric::L2),
            _ => Err(format!("unknown metric `{s}` (expected linf or l2)")),
        }
    }
}

/// A sampled point of the realization: the carrier cube and grid coordinates
/// strictly inside it (0 < g < k on every axis).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct GridNode {
    pub cell: CellId,
    pub coords: Vec<usize>,
}

/// Grid realization of a geometric precubical set: each `n`-cube is sampled at
/// `(k+1)^n` nodes, nodes on shared faces are identified, in-cube distances
/// follow the chosen metric, and global distances are chain distances.
#[derive(Clone, Debug)]
pub struct RealizationGrid {
    pub source: PrecubicalSet,
    pub k: usize,
    pub metric: CubeMetric,
    pub directed: bool,
    pub space: FinitePointSpace,
    pub nodes: Vec<GridNode>,
    node_index: BTreeMap<GridNode, usize>,
    pub source_hash: String,
}

impl RealizationGrid {
    /// Id of the sampled point of `cube` at the given grid coordinates.
    pub fn node_at(&self, cube: CellId, coords: &[usize]) -> Option<usize> {
        let canon = canonical_node(&self.source, self.k, cube, coords);
        self.node_index.get(&canon).copied()
    }

    /// The sampled point sitting at a vertex of the complex.
    pub fn vertex_node(&self, v: usize) -> Option<usize> {
        self.node_at(CellId::new(0, v), &[])
    }

    /// Coordinates of a node inside an incident cube, when the node lies in
    /// the closure of `cube`.
    pub fn coords_in(&self, node: usize, cube: CellId) -> Option<Vec<f64>> {
        let gn = &self.nodes[node];
        let emb = embedding_word(&self.source, gn.cell, cube)?;
        let mut coords = Vec::with_capacity(cube.dim);
        let mut inner = gn.coords.iter();
        for letter in &emb.0 {
            match letter {
                Letter::Zero => coords.push(*inner.next().unwrap() as f64 / self.k as f64),
                Letter::Minus => coords.push(0.0),
                Letter::Plus => coords.push(1.0),
            }
        }
        Some(coords)
    }
}

/// Reduce `(cube, coords)` to its carrier: strip axes pinned to a face.
fn canonical_node(c: &PrecubicalSet, k: usize, cube: CellId, coords: &[usize]) -> GridNode {
    let mut cell = cube;
    let mut coords = coords.to_vec();
    loop {
        let mut changed = false;
        let mut i = 0;
        while i < coords.len() {
            if coords[i] == 0 || coords[i] == k {
                let sign = if coords[i] == 0 { Sign::Neg } else { Sign::Pos };
                cell = c.face(cell, i, sign);
                coords.remove(i);
                changed = true;
            } else {
                i += 1;
            }
        }
        if !changed {
            break;
        }
    }
    GridNode { cell, coords }
}

/// The word `u` with `∂u(cube) = sub`, when `sub` is an iterated face of
/// `cube` (unique for complexes without self-intersection).
fn embedding_word(c: &PrecubicalSet, sub: CellId, cube: CellId) -> Option<CubeWord> {
    if sub == cube {
        return Some(CubeWord(vec![Letter::Zero; cube.dim]));
    }
    let mut found = None;
    let mut stack = vec![CubeWord(vec![])];
    // enumerate words over {-,0,+} of length cube.dim with sub.dim zeros
    while let Some(w) = stack.pop() {
        if w.len() == cube.dim {
            if w.zeros() == sub.dim && c.iterated_face(cube, &w).ok()? == sub {
                found = Some(w);
                break;
            }
            continue;
        }
        for l in [Letter::Minus, Letter::Zero, Letter::Plus] {
            let mut w2 = w.0.clone();
            w2.push(l);
            stack.push(CubeWord(w2));
        }
    }
    found
}

/// In-cube distance between grid coordinate vectors, scaled to edge length 1.
fn cube_distance(metric: CubeMetric, directed: bool, k: usize, a: &[usize], b: &[usize]) -> f64 {
    let mut acc: f64 = 0.0;
    for (x, y) in a.iter().zip(b) {
        let delta = *y as f64 - *x as f64;
        if directed && delta < 0.0 {
            return INF;
        }
        let d = delta.abs() / k as f64;
        match metric {
            CubeMetric::Linf => acc = acc.max(d),
            CubeMetric::L2 => acc += d * d,
        }
    }
    match metric {
        CubeMetric::Linf => acc,
        CubeMetric::L2 => acc.sqrt(),
    }
}

/// Build the grid realization. The input must be geometric.
pub fn realize_grid(
    c: &PrecubicalSet,
    k: usize,
    metric: CubeMetric,
    directed: bool,
) -> Result<RealizationGrid, GmsError> {
    if k == 0 {
        return Err(GmsError::BadResolution);
    }
    let (geo, witness) = crate::npc::check_geometric_via_elements(c);
    if !geo {
        return Err(GmsError::NotGeometric(format!("{witness:?}")));
    }
    // Collect canonical nodes.
    let mut nodes: Vec<GridNode> = Vec::new();
    for d in 0..=c.dim() {
        for cell in c.cells_of_dim(d) {
            for coords in interior_coords(d, k) {
                nodes.push(GridNode { cell, coords });
            }
        }
    }
    nodes.sort();
    let node_index: BTreeMap<GridNode, usize> =
        nodes.iter().enumerate().map(|(i, n)| (n.clone(), i)).collect();
    let n = nodes.len();
    // Arcs: complete graphs within each maximal cube (cubes that are faces of
    // others contribute only duplicate arcs).
    let mut adj: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
    for d in 0..=c.dim() {
        for cell in c.cells_of_dim(d) {
            if is_proper_face(c, cell) {
                continue;
            }
            let full: Vec<Vec<usize>> = all_coords(d, k);
            let ids: Vec<usize> = full
                .iter()
                .map(|g| node_index[&canonical_node(c, k, cell, g)])
                .collect();
            for (i, gi) in full.iter().enumerate() {
                for (j, gj) in full.iter().enumerate() {
                    if i == j {
                        continue;
                    }
                    let w = cube_distance(metric, directed, k, gi, gj);
                    if w.is_finite() {
                        adj[ids[i]].push((ids[j], w));
                    }
                }
            }
        }
    }
    // All-pairs shortest paths by Dijkstra from every node.
    let mut dist = vec![vec![INF; n]; n];
    for (s, row) in dist.iter_mut().enumerate() {
        dijkstra(&adj, s, row);
    }
    let names: Vec<String> = nodes
        .iter()
        .map(|gn| {
            let cs: Vec<String> = gn.coords.iter().map(|v| v.to_string()).collect();
            format!("{}d{}#{}({})", gn.cell.dim, gn.cell.index, k, cs.join(","))
        })
        .collect();
    let space = FinitePointSpace { names, dist };
    Ok(RealizationGrid {
        source: c.clone(),
        k,
        metric,
        directed,
        space,
        nodes,
        node_index,
        source_hash: c.content_hash(),
    })
}

fn interior_coords(d: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for _ in 0..d {
        let mut next = Vec::new();
        for w in &out {
            for v in 1..k {
                let mut w2 = w.clone();
                w2.push(v);
                next.push(w2);
            }
        }
        out = next;
    }
    out
}

fn all_coords(d: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for _ in 0..d {
        let mut next = Vec::new();
        for w in &out {
            for v in 0..=k {
                let mut w2 = w.clone();
                w2.push(v);
                next.push(w2);
            }
        }
        out = next;
    }
    out
}

fn is_proper_face(c: &PrecubicalSet, cell: CellId) -> bool {
    for d in cell.dim + 1..=c.dim() {
        for big in c.cells_of_dim(d) {
            if c.iterated_faces(big).contains(&cell) {
                return true;
            }
        }
    }
    false
}

fn dijkstra(adj: &[Vec<(usize, f64)>], s: usize, dist: &mut [f64]) {
    use std::cmp::Ordering;
    use std::collections::BinaryHeap;
    #[derive(PartialEq)]
    struct Item(f64, usize);
    impl Eq for Item {}
    impl Ord for Item {
        fn cmp(&self, other: &Self) -> Ordering {
            other.0.partial_cmp(&self.0).unwrap_or(Ordering::Equal).then(other.1.cmp(&self.1))
        }
    }
    impl PartialOrd for Item {
        fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
            Some(self.cmp(other))
        }
    }
    dist[s] = 0.0;
    let mut heap = BinaryHeap::from([Item(0.0, s)]);
    while let Some(Item(d, u)) = heap.pop() {
        if d > dist[u] {
            continue;
        }
        for (v, w) in &adj[u] {
            let nd = d + w;
            if nd < dist[*v] {
                dist[*v] = nd;
                heap.push(Item(nd, *v));
            }
        }
    }
}

/// Result of the escape-distance check around one sampled point.
#[derive(Clone, Debug, Serialize)]
pub struct LocalDistanceReport {
    pub point: usize,
    pub escape: f64,
    /// Sampled points violating `d(x,y) < ε(x) ⟹ d(x,y) = in-cube distance`.
    pub violations: Vec<(usize, f64, f64)>,
}

impl LocalDistanceReport {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Check the local-distance property at a sampled point: within the escape
/// distance, global distances agree with some in-cube distance.
pub fn check_local_distance(rg: &RealizationGrid, x: usize) -> Result<LocalDistanceReport, GmsError> {
    if x >= rg.nodes.len() {
        return Err(GmsError::NoSuchPoint(x));
    }
    let c = &rg.source;
    let carrier = rg.nodes[x].cell;
    // Cubes containing x: those with the carrier as iterated face.
    let mut containing = Vec::new();
    for d in carrier.dim..=c.dim() {
        for cube in c.cells_of_dim(d) {
            if cube == carrier || c.iterated_faces(cube).contains(&carrier) {
                containing.push(cube);
            }
        }
    }
    let mut escape = INF;
    for cube in &containing {
        if cube.dim == 0 {
            continue;
        }
        let coords = rg.coords_in(x, *cube).expect("containing cube");
        for (i, v) in coords.iter().enumerate() {
            for face in [0.0, 1.0] {
                if (v - face).abs() > EPS {
                    escape = escape.min((v - face).abs());
                }
                let _ = i;
            }
        }
    }
    let mut violations = Vec::new();
    for y in 0..rg.nodes.len() {
        if y == x {
            continue;
        }
        let global = rg.space.d(x, y);
        if global >= escape {
            continue;
        }
        // Some common cube must realize the distance exactly.
        let mut best = INF;
        for cube in &containing {
            if let (Some(cx), Some(cy)) = (rg.coords_in(x, *cube), rg.coords_in(y, *cube)) {
                let gx: Vec<usize> = cx.iter().map(|v| (v * rg.k as f64).round() as usize).collect();
                let gy: Vec<usize> = cy.iter().map(|v| (v * rg.k as f64).round() as usize).collect();
                best = best.min(cube_distance(rg.metric, rg.directed, rg.k, &gx, &gy));
            }
        }
        if (best - global).abs() > EPS {
            violations.push((y, global, best));
        }
    }
    Ok(LocalDistanceReport { point: x, escape, violations })
}

/// Outcome of the comparison-triangle check.
#[derive(Clone, Debug, Serialize)]
pub enum Cat0Outcome {
    Pass,
    Fail { p: usize, q: usize, gap: f64 },
}

impl Cat0Outcome {
    pub fn passed(&self) -> bool {
        matches!(self, Cat0Outcome::Pass)
    }
}

/// Shortest grid path between two nodes (deterministic tie-breaking), as the
/// node sequence.
pub fn grid_geodesic(rg: &RealizationGrid, from: usize, to: usize) -> Option<Vec<usize>> {
    // rebuild local adjacency from the distance matrix is wrong; recompute arcs
    // by scanning cubes as in realize_grid, then run Dijkstra with parents.
    let c = &rg.source;
    let k = rg.k;
    let n = rg.nodes.len();
    let mut adj: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
    for d in 0..=c.dim() {
        for cell in c.cells_of_dim(d) {
            if is_proper_face(c, cell) {
                continue;
            }
            let full = all_coords(d, k);
            let ids: Vec<usize> = full
                .iter()
                .map(|g| rg.node_index[&canonical_node(c, k, cell, g)])
                .collect();
            for (i, gi) in full.iter().enumerate() {
                for (j, gj) in full.iter().enumerate() {
                    if i != j {
                        let w = cube_distance(rg.metric, rg.directed, k, gi, gj);
                        if w.is_finite() {
                            adj[ids[i]].push((ids[j], w));
                        }
                    }
                }
            }
        }
    }
    let mut dist = vec![INF; n];
    let mut parent = vec![usize::MAX; n];
    use std::cmp::Ordering;
    use std::collections::BinaryHeap;
    #[derive(PartialEq)]
    struct Item(f64, usize);
    impl Eq for Item {}
    impl Ord for Item {
        fn cmp(&self, other: &Self) -> Ordering {
            other.0.partial_cmp(&self.0).unwrap_or(Ordering::Equal).then(other.1.cmp(&self.1))
        }
    }
    impl PartialOrd for Item {
        fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
            Some(self.cmp(other))
        }
    }
    dist[from] = 0.0;
    let mut heap = BinaryHeap::from([Item(0.0, from)]);
    while let Some(Item(d, u)) = heap.pop() {
        if d > dist[u] {
            continue;
        }
        for (v, w) in &adj[u] {
            let nd = d + w;
            if nd + EPS < dist[*v] || (nd < dist[*v] + EPS && parent[*v] > u && parent[*v] != usize::MAX) {
                if nd < dist[*v] {
                    dist[*v] = nd;
                }
                parent[*v] = u;
                heap.push(Item(dist[*v], *v));
            }
        }
    }
    if dist[to] == INF {
        return None;
    }
    let mut path = vec![to];
    let mut cur = to;
    while cur != from {
        cur = parent[cur];
        if cur == usize::MAX {
            return None;
        }
        path.push(cur);
    }
    path.reverse();
    Some(path)
}

/// Arclength positions of the nodes along a geodesic polyline.
fn arclengths(rg: &RealizationGrid, path: &[usize]) -> Vec<f64> {
    let mut out = vec![0.0];
    for w in path.windows(2) {
        let d = rg.space.d(w[0], w[1]);
        out.push(out.last().unwrap() + d);
    }
    out
}

/// Comparison-triangle check: sample pairs of nodes on distinct sides of the
/// geodesic triangle `x, y, z` and compare their distance with the planar
/// comparison triangle, up to `tol`.
pub fn cat0_triangle_check(
    rg: &RealizationGrid,
    x: usize,
    y: usize,
    z: usize,
    sample_count: usize,
    tol: f64,
) -> Result<Cat0Outcome, GmsError> {
    for p in [x, y, z] {
        if p >= rg.nodes.len() {
            return Err(GmsError::NoSuchPoint(p));
        }
    }
    let dxy = rg.space.d(x, y);
    let dyz = rg.space.d(y, z);
    let dzx = rg.space.d(z, x);
    if !(dxy.is_finite() && dyz.is_finite() && dzx.is_finite()) {
        return Err(GmsError::Invalid("triangle sides must be finite; symmetrize first".into()));
    }
    if dxy <= EPS || dyz <= EPS || dzx <= EPS {
        return Ok(Cat0Outcome::Pass);
    }
    let side_xy = grid_geodesic(rg, x, y).ok_or_else(|| GmsError::Invalid("no path x→y".into()))?;
    let side_yz = grid_geodesic(rg, y, z).ok_or_else(|| GmsError::Invalid("no path y→z".into()))?;
    let side_zx = grid_geodesic(rg, z, x).ok_or_else(|| GmsError::Invalid("no path z→x".into()))?;
    // Planar comparison triangle: x̄ at the origin, ȳ on the axis, z̄ above.
    let lxy = *arclengths(rg, &side_xy).last().unwrap();
    let lyz = *arclengths(rg, &side_yz).last().unwrap();
    let lzx = *arclengths(rg, &side_zx).last().unwrap();
    let xbar = (0.0, 0.0);
    let ybar = (lxy, 0.0);
    let t = (lzx * lzx + lxy * lxy - lyz * lyz) / (2.0 * lxy);
    let h2 = lzx * lzx - t * t;
    let zbar = (t, if h2 > 0.0 { h2.sqrt() } else { 0.0 });
    let lerp = |a: (f64, f64), b: (f64, f64), s: f64| -> (f64, f64) {
        (a.0 + (b.0 - a.0) * s, a.1 + (b.1 - a.1) * s)
    };
    // Comparison point of the i-th node of a side.
    let side_points = |side: &[usize], a: (f64, f64), b: (f64, f64)| -> Vec<((f64, f64), usize)> {
        let arcs = arclengths(rg, side);
        let total = *arcs.last().unwrap();
        side.iter()
            .zip(arcs.iter())
            .map(|(node, s)| (lerp(a, b, if total > 0.0 { s / total } else { 0.0 }), *node))
            .collect()
    };
    let sides = [
        side_points(&side_xy, xbar, ybar),
        side_points(&side_yz, ybar, zbar),
        side_points(&side_zx, zbar, xbar),
    ];
    let mut worst: Option<(usize, usize, f64)> = None;
    let mut checked = 0usize;
    'outer: for si in 0..3 {
        for sj in si + 1..3 {
            let (pa, pb) = (&sides[si], &sides[sj]);
            let stride_a = (pa.len() / sample_count.max(1)).max(1);
            let stride_b = (pb.len() / sample_count.max(1)).max(1);
            for (cp, p) in pa.iter().step_by(stride_a) {
                for (cq, q) in pb.iter().step_by(stride_b) {
                    let dg = rg.space.d(*p, *q);
                    let dc = ((cp.0 - cq.0).powi(2) + (cp.1 - cq.1).powi(2)).sqrt();
                    let gap = dg - dc;
                    if gap > tol && worst.map(|(_, _, g)| gap > g).unwrap_or(true) {
                        worst = Some((*p, *q, gap));
                    }
                    checked += 1;
                    if checked >= sample_count * sample_count {
                        break 'outer;
                    }
                }
            }
        }
    }
    Ok(match worst {
        None => Cat0Outcome::Pass,
        Some((p, q, gap)) => Cat0Outcome::Fail { p, q, gap },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pcs::{hollow_cube, standard_cube};

    fn close(a: f64, b: f64) -> bool {
        (a == INF && b == INF) || (a - b).abs() < EPS
    }

    fn directed_plane_samples() -> FinitePointSpace {
        // Points of the directed plane: (0,0), (1,1), (1,-1), (1,0), (0,-1), (0,1).
        let pts: [(f64, f64); 6] = [(0., 0.), (1., 1.), (1., -1.), (1., 0.), (0., -1.), (0., 1.)];
        let d1 = |a: f64, b: f64| if b >= a { b - a } else { INF };
        let n = pts.len();
        let mut dist = vec![vec![0.0; n]; n];
        for i in 0..n {
            for j in 0..n {
                dist[i][j] = d1(pts[i].0, pts[j].0).max(d1(pts[i].1, pts[j].1));
            }
        }
        FinitePointSpace::new(pts.iter().map(|p| format!("{p:?}")).collect(), dist)
    }

    #[test]
    fn validate_space_axioms() {
        let s = directed_plane_samples();
        assert!(s.validate().is_empty());
        let mut bad = s.clone();
        bad.dist[0][0] = 1.0;
        assert!(!bad.validate().is_empty());
        // d_infty is a valid space
        let d = FinitePointSpace::discrete(vec!["a".into(), "b".into()]);
        assert!(d.validate().is_empty());
    }

    #[test]
    fn symmetrization_examples() {
        let s = directed_plane_samples();
        let sym = symmetrize_left(&s);
        assert!(sym.validate().is_empty());
        assert!(sym.is_symmetric());
        // dˢ((0,0),(1,1)) = 1 and dˢ((0,0),(1,-1)) = 2
        assert!((sym.d(0, 1) - 1.0).abs() < 1e-9);
        assert!((sym.d(0, 2) - 2.0).abs() < 1e-9);
        // pointwise below the original
        for x in 0..s.len() {
            for y in 0..s.len() {
                assert!(sym.d(x, y) <= s.d(x, y) + EPS);
            }
        }
        // right adjoint: pointwise maximum, so a finite forward distance with
        // an infinite reverse one symmetrizes to infinity
        let vee = symmetrize_right(&s);
        assert_eq!(vee.d(0, 1), INF);
        assert_eq!(vee.d(0, 2), INF);
        assert!(vee.is_symmetric());
        assert!(vee.validate().is_empty());
        // already-symmetric spaces are fixed
        let again = symmetrize_left(&sym);
        for x in 0..s.len() {
            for y in 0..s.len() {
                assert!(close(again.d(x, y), sym.d(x, y)));
            }
        }
    }

    #[test]
    fn chain_distance_directed_circle() {
        // Directed interval [0,1] sampled at k=4, glue 1 ~ 0.
        let k = 4;
        let n = k + 1;
        let mut dist = vec![vec![INF; n]; n];
        for i in 0..n {
            for j in 0..n {
                if j >= i {
                    dist[i][j] = (j - i) as f64 / k as f64;
                }
            }
        }
        let s = FinitePointSpace::new((0..n).map(|i| format!("{i}")).collect(), dist);
        assert!(s.validate().is_empty());
        let circle = chain_distance(&s, &[(0, k)]).unwrap();
        assert!(circle.validate().is_empty());
        assert_eq!(circle.len(), k);
        // d(0.75, 0.25) = 0.5 through the glue point
        assert!((circle.d(3, 1) - 0.5).abs() < EPS);
        // no gluing: unchanged
        let same = chain_distance(&s, &[]).unwrap();
        for i in 0..n {
            for j in 0..n {
                assert_eq!(same.d(i, j), s.d(i, j));
            }
        }
        // quotient is pointwise below
        for i in 0..k {
            for j in 0..k {
                assert!(circle.d(i, j) <= s.d(i, j) + EPS);
            }
        }
    }

    #[test]
    fn instantaneous_quotient_is_isometry() {
        // Duplicate a point at distance 0 both ways, quotient, recover.
        let base = directed_plane_samples();
        let n = base.len();
        let mut dist = vec![vec![0.0; n + 1]; n + 1];
        for i in 0..n {
            for j in 0..n {
                dist[i][j] = base.d(i, j);
            }
        }
        for j in 0..n {
            dist[n][j] = base.d(0, j);
            dist[j][n] = base.d(j, 0);
        }
        dist[n][n] = 0.0;
        let mut names = base.names.clone();
        names.push("copy".into());
        let doubled = FinitePointSpace::new(names, dist);
        assert!(doubled.validate().is_empty());
        let q = chain_distance(&doubled, &[(0, n)]).unwrap();
        assert_eq!(q.len(), n);
        for i in 0..n {
            for j in 0..n {
                assert!(close(q.d(i, j), base.d(i, j)), "({i},{j})");
            }
        }
    }

    #[test]
    fn realize_interval_and_square() {
        let y1 = standard_cube(1).unwrap();
        let rg = realize_grid(&y1, 2, CubeMetric::Linf, false).unwrap();
        assert_eq!(rg.space.len(), 3);
        let a = rg.vertex_node(0).unwrap();
        let b = rg.vertex_node(1).unwrap();
        assert!((rg.space.d(a, b) - 1.0).abs() < EPS);
        assert!(rg.space.validate().is_empty());

        let y2 = standard_cube(2).unwrap();
        let rg = realize_grid(&y2, 4, CubeMetric::Linf, false).unwrap();
        // corner -- (vertex 0) to corner ++ (vertex 3): product metric gives 1
        let a = rg.vertex_node(0).unwrap();
        let b = rg.vertex_node(3).unwrap();
        assert!((rg.space.d(a, b) - 1.0).abs() < EPS);
        // directed: ++ cannot reach --
        let rg = realize_grid(&y2, 2, CubeMetric::Linf, true).unwrap();
        let a = rg.vertex_node(0).unwrap();
        let b = rg.vertex_node(3).unwrap();
        assert!(rg.space.d(a, b).is_finite());
        assert_eq!(rg.space.d(b, a), INF);
        // non-geometric input is rejected
        let mut bb = crate::pcs::PcsBuilder::new();
        let v = bb.add_vertex();
        bb.add_edge(v, v);
        let looped = bb.finish().unwrap();
        assert!(matches!(
            realize_grid(&looped, 2, CubeMetric::Linf, false),
            Err(GmsError::NotGeometric(_))
        ));
    }

    #[test]
    fn grid_refinement_monotone() {
        let y2 = standard_cube(2).unwrap();
        let rg2 = realize_grid(&y2, 2, CubeMetric::L2, false).unwrap();
        let rg4 = realize_grid(&y2, 4, CubeMetric::L2, false).unwrap();
        // distances at resolution 2k are ≤ those at k on shared nodes
        for v in 0..4 {
            for w in 0..4 {
                let a2 = rg2.vertex_node(v).unwrap();
                let b2 = rg2.vertex_node(w).unwrap();
                let a4 = rg4.vertex_node(v).unwrap();
                let b4 = rg4.vertex_node(w).unwrap();
                assert!(rg4.space.d(a4, b4) <= rg2.space.d(a2, b2) + EPS);
            }
        }
    }

    #[test]
    fn local_distance_reports() {
        let y2 = standard_cube(2).unwrap();
        let rg = realize_grid(&y2, 4, CubeMetric::Linf, false).unwrap();
        // interior point of the square
        let sq = CellId::new(2, 0);
        let x = rg.node_at(sq, &[2, 2]).unwrap();
        let rep = check_local_distance(&rg, x).unwrap();
        assert!(rep.holds(), "{rep:?}");
        assert!((rep.escape - 0.5).abs() < EPS);
        // a vertex shared by two squares glued along an edge
        let mut b = crate::pcs::PcsBuilder::new();
        let v = b.add_vertices(6);
        let e01 = b.add_edge(v[0], v[1]);
        let e12 = b.add_edge(v[1], v[2]);
        let e34 = b.add_edge(v[3], v[4]);
        let e45 = b.add_edge(v[4], v[5]);
        let e03 = b.add_edge(v[0], v[3]);
        let e14 = b.add_edge(v[1], v[4]);
        let e25 = b.add_edge(v[2], v[5]);
        b.add_square(e01, e34, e03, e14);
        b.add_square(e12, e45, e14, e25);
        let two = b.finish().unwrap();
        assert!(two.validate().is_ok());
        let rg = realize_grid(&two, 4, CubeMetric::Linf, false).unwrap();
        let x = rg.vertex_node(1).unwrap();
        let rep = check_local_distance(&rg, x).unwrap();
        assert!(rep.holds(), "{rep:?}");
        // isolated vertex: escape distance infinite
        let p = crate::pcs::PrecubicalSet::point();
        let rg = realize_grid(&p, 2, CubeMetric::Linf, false).unwrap();
        let rep = check_local_distance(&rg, 0).unwrap();
        assert_eq!(rep.escape, INF);
        assert!(rep.holds());
    }

    #[test]
    fn cat0_flat_square_passes_and_corner_fails() {
        let y2 = standard_cube(2).unwrap();
        let rg = realize_grid(&y2, 8, CubeMetric::L2, false).unwrap();
        let (a, b, c) = (
            rg.vertex_node(0).unwrap(),
            rg.vertex_node(1).unwrap(),
            rg.vertex_node(2).unwrap(),
        );
        let out = cat0_triangle_check(&rg, a, b, c, 200, 0.05).unwrap();
        assert!(out.passed(), "{out:?}");
        // degenerate triangle
        let out = cat0_triangle_check(&rg, a, a, a, 10, 0.05).unwrap();
        assert!(out.passed());

        // ∂Y3 surface: a triangle of face centers around a corner fails.
        let dy3 = hollow_cube(3).unwrap();
        let rg = realize_grid(&dy3, 8, CubeMetric::L2, false).unwrap();
        // squares incident to the corner +++ : 00+, 0+0, +00
        let centers: Vec<usize> = (0..dy3.cell_count(2))
            .filter(|sq| dy3.corners(CellId::new(2, *sq)).contains(&7))
            .map(|sq| rg.node_at(CellId::new(2, sq), &[4, 4]).unwrap())
            .collect();
        assert_eq!(centers.len(), 3);
        let out = cat0_triangle_check(&rg, centers[0], centers[1], centers[2], 200, 0.05).unwrap();
        match out {
            Cat0Outcome::Fail { gap, .. } => assert!(gap > 0.05),
            Cat0Outcome::Pass => panic!("expected a comparison violation around the corner"),
        }
    }

    #[test]
    fn csv_and_json_outputs() {
        let s = FinitePointSpace::discrete(vec!["a".into(), "b".into()]);
        let csv = s.to_csv();
        assert!(csv.contains("inf"));
        let j = s.to_json();
        assert_eq!(j["dist"][0][1], serde_json::Value::Null);
    }
}
