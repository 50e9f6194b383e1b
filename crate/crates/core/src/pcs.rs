//! Finite precubical sets as concrete presheaves.
//!
//! A complex stores, per dimension, the number of cubes together with total
//! face maps `∂ε_{i,n}: C(n+1) → C(n)` for `0 ≤ i ≤ n` and `ε ∈ {-,+}`,
//! subject to the relations `∂ε_j ∘ ∂ε'_i = ∂ε'_i ∘ ∂ε_{j+1}` for `i ≤ j`.
//! Edges may carry labels; parallel edges of a square must then agree.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Default bound on the dimension of generated standard cubes.
pub const DEFAULT_DIM_BOUND: usize = 6;

/// Sign of a face map.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
pub enum Sign {
    Neg,
    Pos,
}

impl Sign {
    pub fn flip(self) -> Sign {
        match self {
            Sign::Neg => Sign::Pos,
            Sign::Pos => Sign::Neg,
        }
    }
}

/// A cube of a complex, addressed by dimension and index within that dimension.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
pub struct CellId {
    pub dim: usize,
    pub index: usize,
}

impl CellId {
    pub fn new(dim: usize, index: usize) -> Self {
        CellId { dim, index }
    }
}

/// Letters of the explicit description of standard cubes.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Letter {
    Minus,
    Zero,
    Plus,
}

impl Letter {
    pub fn from_sign(s: Sign) -> Letter {
        match s {
            Sign::Neg => Letter::Minus,
            Sign::Pos => Letter::Plus,
        }
    }

    pub fn to_sign(self) -> Option<Sign> {
        match self {
            Letter::Minus => Some(Sign::Neg),
            Letter::Plus => Some(Sign::Pos),
            Letter::Zero => None,
        }
    }

    pub fn flip(self) -> Letter {
        match self {
            Letter::Minus => Letter::Plus,
            Letter::Plus => Letter::Minus,
            Letter::Zero => Letter::Zero,
        }
    }

    fn as_char(self) -> char {
        match self {
            Letter::Minus => '-',
            Letter::Zero => '0',
            Letter::Plus => '+',
        }
    }

    fn from_char(c: char) -> Option<Letter> {
        match c {
            '-' => Some(Letter::Minus),
            '0' => Some(Letter::Zero),
            '+' => Some(Letter::Plus),
            _ => None,
        }
    }
}

/// A word over `{-,0,+}` naming a cube of a standard cube `Yn`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct CubeWord(pub Vec<Letter>);

impl CubeWord {
    pub fn parse(s: &str) -> Result<CubeWord, PcsError> {
        let mut letters = Vec::with_capacity(s.len());
        for c in s.chars() {
            letters.push(Letter::from_char(c).ok_or_else(|| PcsError::MalformedWord(s.to_string()))?);
        }
        Ok(CubeWord(letters))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Number of `0` letters, i.e. the dimension of the named cube.
    pub fn zeros(&self) -> usize {
        self.0.iter().filter(|l| **l == Letter::Zero).count()
    }

    /// Replace the `i`-th `0` letter by the given sign.
    pub fn face(&self, i: usize, sign: Sign) -> CubeWord {
        debug_assert!(i < self.zeros(), "face axis {i} out of range for {self}");
        let mut out = self.0.clone();
        let mut seen = 0;
        for l in out.iter_mut() {
            if *l == Letter::Zero {
                if seen == i {
                    *l = Letter::from_sign(sign);
                    break;
                }
                seen += 1;
            }
        }
        CubeWord(out)
    }

    /// Letterwise complement `ū` (swapping `-` and `+`).
    pub fn complement(&self) -> CubeWord {
        CubeWord(self.0.iter().map(|l| l.flip()).collect())
    }

    pub fn shares_letter_with(&self, u: &CubeWord) -> bool {
        self.0.iter().zip(&u.0).any(|(a, b)| a == b && *a != Letter::Zero)
    }
}

impl std::fmt::Display for CubeWord {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.0.is_empty() {
            return write!(f, "ε");
        }
        for l in &self.0 {
            f.write_char(l.as_char())?;
        }
        Ok(())
    }
}

/// Enumerate all sign words in `{-,+}^n` in lexicographic order (`-` before `+`).
pub fn sign_words(n: usize) -> Vec<Vec<Sign>> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        let mut next = Vec::with_capacity(out.len() * 2);
        for w in &out {
            for s in [Sign::Neg, Sign::Pos] {
                let mut w2 = w.clone();
                w2.push(s);
                next.push(w2);
            }
        }
        out = next;
    }
    out
}

/// Enumerate all words in `{-,0,+}^n` in lexicographic order.
fn all_words(n: usize) -> Vec<CubeWord> {
    let mut out = vec![CubeWord(vec![])];
    for _ in 0..n {
        let mut next = Vec::with_capacity(out.len() * 3);
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

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum PcsError {
    #[error("dimension {0} exceeds the configured bound {1}")]
    DimensionBound(usize, usize),
    #[error("malformed cube word: {0}")]
    MalformedWord(String),
    #[error("invalid cell reference {0:?}")]
    InvalidCell(CellId),
    #[error("structural error: {0}")]
    Structural(String),
    #[error("not a morphism: {0}")]
    NotAMorphism(String),
}

/// One violated instance of the presheaf relations.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FaceRelationViolation {
    pub n: usize,
    pub i: usize,
    pub j: usize,
    pub sign_outer: Sign,
    pub sign_inner: Sign,
    pub cell: usize,
}

/// Report produced by [`PrecubicalSet::validate`].
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub face_violations: Vec<FaceRelationViolation>,
    /// Squares whose parallel edges carry different labels.
    pub label_violations: Vec<usize>,
    pub structural: Vec<String>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.face_violations.is_empty() && self.label_violations.is_empty() && self.structural.is_empty()
    }
}

/// A finite precubical set, with optional edge labels.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrecubicalSet {
    /// `cells[d]` is the number of `d`-cubes. Trailing entry may be zero only
    /// for the empty complex.
    cells: Vec<usize>,
    /// `faces[s][n][i][c]` is the `i`-th `s`-face of the `(n+1)`-cube `c`.
    faces_neg: Vec<Vec<Vec<usize>>>,
    faces_pos: Vec<Vec<Vec<usize>>>,
    labels: Option<BTreeMap<usize, String>>,
}

impl PrecubicalSet {
    pub fn empty() -> PrecubicalSet {
        PrecubicalSet { cells: vec![0], faces_neg: vec![], faces_pos: vec![], labels: None }
    }

    pub fn point() -> PrecubicalSet {
        PrecubicalSet { cells: vec![1], faces_neg: vec![], faces_pos: vec![], labels: None }
    }

    /// Maximal populated dimension.
    pub fn dim(&self) -> usize {
        self.cells.len() - 1
    }

    pub fn cell_count(&self, d: usize) -> usize {
        self.cells.get(d).copied().unwrap_or(0)
    }

    pub fn cell_counts(&self) -> &[usize] {
        &self.cells
    }

    pub fn total_cells(&self) -> usize {
        self.cells.iter().sum()
    }

    pub fn cells_of_dim(&self, d: usize) -> impl Iterator<Item = CellId> {
        (0..self.cell_count(d)).map(move |i| CellId::new(d, i))
    }

    pub fn all_cells(&self) -> Vec<CellId> {
        let mut out = Vec::new();
        for d in 0..=self.dim() {
            out.extend(self.cells_of_dim(d));
        }
        out
    }

    pub fn contains(&self, c: CellId) -> bool {
        c.index < self.cell_count(c.dim)
    }

    /// `∂ε_i(c)`; panics on out-of-range input.
    pub fn face(&self, c: CellId, i: usize, sign: Sign) -> CellId {
        assert!(c.dim >= 1 && i < c.dim, "face index {i} out of range for {c:?}");
        let table = match sign {
            Sign::Neg => &self.faces_neg,
            Sign::Pos => &self.faces_pos,
        };
        CellId::new(c.dim - 1, table[c.dim - 1][i][c.index])
    }

    /// Iterated face `∂u(c)` where `u` has one letter per axis of `c`.
    pub fn iterated_face(&self, c: CellId, u: &CubeWord) -> Result<CellId, PcsError> {
        if !self.contains(c) {
            return Err(PcsError::InvalidCell(c));
        }
        if u.len() != c.dim {
            return Err(PcsError::MalformedWord(format!(
                "word {u} has length {} but cell has dimension {}",
                u.len(),
                c.dim
            )));
        }
        let mut cur = c;
        for i in (0..u.len()).rev() {
            if let Some(sign) = u.0[i].to_sign() {
                cur = self.face(cur, i, sign);
            }
        }
        Ok(cur)
    }

    /// The `2^dim` vertex corners `∂u(c)`, `u ∈ {-,+}^dim`, in lexicographic order of `u`.
    pub fn corners(&self, c: CellId) -> Vec<usize> {
        sign_words(c.dim)
            .into_iter()
            .map(|w| {
                let word = CubeWord(w.into_iter().map(Letter::from_sign).collect());
                self.iterated_face(c, &word).expect("corner of valid cell").index
            })
            .collect()
    }

    /// All iterated faces of `c` (including `c` itself), deduplicated.
    pub fn iterated_faces(&self, c: CellId) -> BTreeSet<CellId> {
        let mut out = BTreeSet::new();
        let mut stack = vec![c];
        while let Some(x) = stack.pop() {
            if !out.insert(x) {
                continue;
            }
            for i in 0..x.dim {
                for s in [Sign::Neg, Sign::Pos] {
                    stack.push(self.face(x, i, s));
                }
            }
        }
        out
    }

    pub fn labels(&self) -> Option<&BTreeMap<usize, String>> {
        self.labels.as_ref()
    }

    pub fn label(&self, edge: usize) -> Option<&str> {
        self.labels.as_ref().and_then(|m| m.get(&edge)).map(|s| s.as_str())
    }

    pub fn set_labels(&mut self, labels: BTreeMap<usize, String>) {
        self.labels = Some(labels);
    }

    pub fn drop_labels(&mut self) {
        self.labels = None;
    }

    /// Source vertex of an edge (`∂-_0`).
    pub fn edge_src(&self, e: usize) -> usize {
        self.face(CellId::new(1, e), 0, Sign::Neg).index
    }

    /// Target vertex of an edge (`∂+_0`).
    pub fn edge_tgt(&self, e: usize) -> usize {
        self.face(CellId::new(1, e), 0, Sign::Pos).index
    }

    /// Check the presheaf relations and the label condition; report every violation.
    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::default();
        // Dual of the relations on generators: for i ≤ j and c ∈ C(n+2),
        //   ∂ε_{j,n} ∂ε'_{i,n+1} c = ∂ε'_{i,n} ∂ε_{j+1,n+1} c.
        for n in 0..self.dim().saturating_sub(1) {
            for c in 0..self.cell_count(n + 2) {
                let cell = CellId::new(n + 2, c);
                for i in 0..=n {
                    for j in i..=n {
                        for sign_outer in [Sign::Neg, Sign::Pos] {
                            for sign_inner in [Sign::Neg, Sign::Pos] {
                                let lhs = self.face(self.face(cell, i, sign_inner), j, sign_outer);
                                let rhs = self.face(self.face(cell, j + 1, sign_outer), i, sign_inner);
                                if lhs != rhs {
                                    report.face_violations.push(FaceRelationViolation {
                                        n,
                                        i,
                                        j,
                                        sign_outer,
                                        sign_inner,
                                        cell: c,
                                    });
                                }
                            }
                        }
                    }
                }
            }
        }
        if let Some(labels) = &self.labels {
            for sq in 0..self.cell_count(2) {
                let cell = CellId::new(2, sq);
                for i in 0..2 {
                    let l0 = labels.get(&self.face(cell, i, Sign::Neg).index);
                    let l1 = labels.get(&self.face(cell, i, Sign::Pos).index);
                    if l0 != l1 {
                        report.label_violations.push(sq);
                    }
                }
            }
            report.label_violations.dedup();
        }
        report
    }

    /// Overwrite one face entry; used to inject violations in tests.
    pub fn set_face_unchecked(&mut self, c: CellId, i: usize, sign: Sign, target: usize) {
        let table = match sign {
            Sign::Neg => &mut self.faces_neg,
            Sign::Pos => &mut self.faces_pos,
        };
        table[c.dim - 1][i][c.index] = target;
    }

    /// Keep exactly the cells on which `keep` holds. The kept set must be
    /// closed under faces. Returns the new complex and the per-dimension
    /// renumbering (old index → new index).
    pub fn subcomplex(&self, keep: impl Fn(CellId) -> bool) -> (PrecubicalSet, Vec<Vec<Option<usize>>>) {
        let mut maps: Vec<Vec<Option<usize>>> = Vec::new();
        let mut counts: Vec<usize> = Vec::new();
        for d in 0..=self.dim() {
            let mut map = vec![None; self.cell_count(d)];
            let mut next = 0;
            for i in 0..self.cell_count(d) {
                if keep(CellId::new(d, i)) {
                    map[i] = Some(next);
                    next += 1;
                }
            }
            maps.push(map);
            counts.push(next);
        }
        while counts.len() > 1 && *counts.last().unwrap() == 0 {
            counts.pop();
        }
        let dim = counts.len() - 1;
        let mut faces_neg = Vec::new();
        let mut faces_pos = Vec::new();
        for d in 1..=dim {
            let mut neg = vec![vec![0; counts[d]]; d];
            let mut pos = vec![vec![0; counts[d]]; d];
            for old in 0..self.cell_count(d) {
                let Some(new) = maps[d][old] else { continue };
                for i in 0..d {
                    for (sign, table) in [(Sign::Neg, &mut neg), (Sign::Pos, &mut pos)] {
                        let f = self.face(CellId::new(d, old), i, sign).index;
                        table[i][new] = maps[d - 1][f].expect("kept set must be closed under faces");
                    }
                }
            }
            faces_neg.push(neg);
            faces_pos.push(pos);
        }
        let labels = self.labels.as_ref().map(|ls| {
            ls.iter()
                .filter_map(|(e, l)| maps[1].get(*e).copied().flatten().map(|ne| (ne, l.clone())))
                .collect()
        });
        (PrecubicalSet { cells: counts, faces_neg, faces_pos, labels }, maps)
    }

    /// `C ∖ X`: cells having no vertex of `X` among their iterated faces.
    pub fn remove_vertices(&self, x: &BTreeSet<usize>) -> (PrecubicalSet, Vec<Vec<Option<usize>>>) {
        self.subcomplex(|c| {
            if c.dim == 0 {
                !x.contains(&c.index)
            } else {
                self.corners(c).iter().all(|v| !x.contains(v))
            }
        })
    }

    /// Truncate to dimension at most `n`.
    pub fn truncate(&self, n: usize) -> PrecubicalSet {
        let (t, _) = self.subcomplex(|c| c.dim <= n);
        t
    }

    /// Quotient identifying vertices pairwise; higher cells are untouched.
    /// Returns the quotient and the old-vertex → new-vertex map.
    pub fn glue_vertex_pairs(&self, pairs: &[(usize, usize)]) -> (PrecubicalSet, Vec<usize>) {
        self.try_glue_vertex_pairs(pairs).expect("vertex ids in range")
    }

    pub fn try_glue_vertex_pairs(
        &self,
        pairs: &[(usize, usize)],
    ) -> Result<(PrecubicalSet, Vec<usize>), PcsError> {
        let n0 = self.cell_count(0);
        if let Some(&(a, b)) = pairs.iter().find(|(a, b)| *a >= n0 || *b >= n0) {
            return Err(PcsError::InvalidCell(CellId::new(0, a.max(b))));
        }
        let mut uf: Vec<usize> = (0..n0).collect();
        fn find(uf: &mut Vec<usize>, mut x: usize) -> usize {
            while uf[x] != x {
                uf[x] = uf[uf[x]];
                x = uf[x];
            }
            x
        }
        for &(a, b) in pairs {
            let (ra, rb) = (find(&mut uf, a), find(&mut uf, b));
            if ra != rb {
                let (lo, hi) = (ra.min(rb), ra.max(rb));
                uf[hi] = lo;
            }
        }
        let mut reps: Vec<usize> = (0..n0).map(|v| find(&mut uf, v)).collect();
        let mut rep_ids: Vec<usize> = reps.clone();
        rep_ids.sort_unstable();
        rep_ids.dedup();
        let rep_index: HashMap<usize, usize> = rep_ids.iter().enumerate().map(|(i, r)| (*r, i)).collect();
        for r in reps.iter_mut() {
            *r = rep_index[r];
        }
        let mut out = self.clone();
        out.cells[0] = rep_ids.len();
        if out.dim() >= 1 {
            for e in 0..out.cell_count(1) {
                out.faces_neg[0][0][e] = reps[self.faces_neg[0][0][e]];
                out.faces_pos[0][0][e] = reps[self.faces_pos[0][0][e]];
            }
        }
        Ok((out, reps))
    }

    /// `C[x=y]`.
    pub fn glue_vertices(&self, x: usize, y: usize) -> (PrecubicalSet, Vec<usize>) {
        self.glue_vertex_pairs(&[(x, y)])
    }

    /// Disjoint union, `C` first. Returns the complex and the id offsets of `D`'s cells.
    pub fn coproduct(&self, other: &PrecubicalSet) -> (PrecubicalSet, Vec<usize>) {
        let dim = self.dim().max(other.dim());
        let mut cells = vec![0; dim + 1];
        let mut offsets = vec![0; dim + 1];
        for d in 0..=dim {
            offsets[d] = self.cell_count(d);
            cells[d] = self.cell_count(d) + other.cell_count(d);
        }
        while cells.len() > 1 && *cells.last().unwrap() == 0 {
            cells.pop();
            offsets.pop();
        }
        let dim = cells.len() - 1;
        let mut faces_neg = Vec::new();
        let mut faces_pos = Vec::new();
        for d in 1..=dim {
            let mut neg = vec![vec![0; cells[d]]; d];
            let mut pos = vec![vec![0; cells[d]]; d];
            for i in 0..d {
                for c in 0..self.cell_count(d) {
                    neg[i][c] = self.face(CellId::new(d, c), i, Sign::Neg).index;
                    pos[i][c] = self.face(CellId::new(d, c), i, Sign::Pos).index;
                }
                for c in 0..other.cell_count(d) {
                    neg[i][offsets[d] + c] = offsets[d - 1] + other.face(CellId::new(d, c), i, Sign::Neg).index;
                    pos[i][offsets[d] + c] = offsets[d - 1] + other.face(CellId::new(d, c), i, Sign::Pos).index;
                }
            }
            faces_neg.push(neg);
            faces_pos.push(pos);
        }
        let labels = if self.labels.is_some() || other.labels.is_some() {
            let mut m = BTreeMap::new();
            if let Some(ls) = &self.labels {
                m.extend(ls.iter().map(|(e, l)| (*e, l.clone())));
            }
            if let Some(ls) = &other.labels {
                let off = offsets.get(1).copied().unwrap_or(0);
                m.extend(ls.iter().map(|(e, l)| (off + e, l.clone())));
            }
            Some(m)
        } else {
            None
        };
        (PrecubicalSet { cells, faces_neg, faces_pos, labels }, offsets)
    }

    /// Index of the pair `(c, d)` inside `(C ⊗ D)(nc + nd)`.
    pub fn tensor_cell_index(&self, other: &PrecubicalSet, c: CellId, d: CellId) -> usize {
        let n = c.dim + d.dim;
        let mut offset = 0;
        for i in 0..c.dim {
            if n - i <= other.dim() {
                offset += self.cell_count(i) * other.cell_count(n - i);
            }
        }
        offset + c.index * other.cell_count(d.dim) + d.index
    }

    /// Tensor product `C ⊗ D`.
    pub fn tensor(&self, other: &PrecubicalSet) -> PrecubicalSet {
        let dim = self.dim() + other.dim();
        let mut cells = vec![0; dim + 1];
        for n in 0..=dim {
            for i in 0..=n.min(self.dim()) {
                let j = n - i;
                if j <= other.dim() {
                    cells[n] += self.cell_count(i) * other.cell_count(j);
                }
            }
        }
        while cells.len() > 1 && *cells.last().unwrap() == 0 {
            cells.pop();
        }
        let dim = cells.len() - 1;
        let mut faces_neg = Vec::new();
        let mut faces_pos = Vec::new();
        for n in 1..=dim {
            let mut neg = vec![vec![0; cells[n]]; n];
            let mut pos = vec![vec![0; cells[n]]; n];
            for i in 0..=n.min(self.dim()) {
                let j = n - i;
                if j > other.dim() {
                    continue;
                }
                for c in 0..self.cell_count(i) {
                    for d in 0..other.cell_count(j) {
                        let id = self.tensor_cell_index(other, CellId::new(i, c), CellId::new(j, d));
                        for k in 0..n {
                            for (sign, table) in [(Sign::Neg, &mut neg), (Sign::Pos, &mut pos)] {
                                let image = if k < i {
                                    let fc = self.face(CellId::new(i, c), k, sign);
                                    self.tensor_cell_index(other, fc, CellId::new(j, d))
                                } else {
                                    let fd = other.face(CellId::new(j, d), k - i, sign);
                                    self.tensor_cell_index(other, CellId::new(i, c), fd)
                                };
                                table[k][id] = image;
                            }
                        }
                    }
                }
            }
            faces_neg.push(neg);
            faces_pos.push(pos);
        }
        let labels = if self.labels.is_some() || other.labels.is_some() {
            let mut m = BTreeMap::new();
            // Edges are (edge of C, vertex of D) or (vertex of C, edge of D).
            for c in 0..self.cell_count(1) {
                if let Some(l) = self.label(c) {
                    for d in 0..other.cell_count(0) {
                        let id = self.tensor_cell_index(other, CellId::new(1, c), CellId::new(0, d));
                        m.insert(id, l.to_string());
                    }
                }
            }
            for d in 0..other.cell_count(1) {
                if let Some(l) = other.label(d) {
                    for c in 0..self.cell_count(0) {
                        let id = self.tensor_cell_index(other, CellId::new(0, c), CellId::new(1, d));
                        m.insert(id, l.to_string());
                    }
                }
            }
            Some(m)
        } else {
            None
        };
        PrecubicalSet { cells, faces_neg, faces_pos, labels }
    }

    /// JSON wire form per the documented schema.
    pub fn to_json(&self) -> serde_json::Value {
        let wire = WirePcs {
            dim: self.dim(),
            cells: self.cells.clone(),
            faces: WireFaces { neg: self.faces_neg.clone(), pos: self.faces_pos.clone() },
            labels: self.labels.clone(),
        };
        serde_json::to_value(wire).expect("serializable")
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string(&self.to_json()).expect("serializable")
    }

    /// Decode and structurally validate a complex from JSON text.
    pub fn from_json_str(s: &str) -> Result<PrecubicalSet, PcsError> {
        let wire: WirePcs =
            serde_json::from_str(s).map_err(|e| PcsError::Structural(format!("json: {e}")))?;
        Self::from_wire(wire)
    }

    pub fn from_json(v: serde_json::Value) -> Result<PrecubicalSet, PcsError> {
        let wire: WirePcs =
            serde_json::from_value(v).map_err(|e| PcsError::Structural(format!("json: {e}")))?;
        Self::from_wire(wire)
    }

    fn from_wire(wire: WirePcs) -> Result<PrecubicalSet, PcsError> {
        let cells = wire.cells;
        if cells.is_empty() {
            return Err(PcsError::Structural("cells must contain at least dimension 0".into()));
        }
        if wire.dim + 1 != cells.len() {
            return Err(PcsError::Structural(format!(
                "dim {} does not match cells array of length {}",
                wire.dim,
                cells.len()
            )));
        }
        let dim = cells.len() - 1;
        if dim > 0 && cells[dim] == 0 {
            return Err(PcsError::Structural("top dimension must be populated".into()));
        }
        let total: usize = cells.iter().sum();
        if total > 2_000_000 {
            return Err(PcsError::Structural("complex too large".into()));
        }
        for (name, table) in [("neg", &wire.faces.neg), ("pos", &wire.faces.pos)] {
            if table.len() != dim {
                return Err(PcsError::Structural(format!(
                    "faces.{name} must have one entry per dimension 1..={dim}"
                )));
            }
            for (n, per_axis) in table.iter().enumerate() {
                if per_axis.len() != n + 1 {
                    return Err(PcsError::Structural(format!(
                        "faces.{name}[{n}] must have {} axes",
                        n + 1
                    )));
                }
                for (i, map) in per_axis.iter().enumerate() {
                    if map.len() != cells[n + 1] {
                        return Err(PcsError::Structural(format!(
                            "faces.{name}[{n}][{i}] must map every {}-cell",
                            n + 1
                        )));
                    }
                    if let Some(bad) = map.iter().find(|t| **t >= cells[n]) {
                        return Err(PcsError::Structural(format!(
                            "faces.{name}[{n}][{i}] target {bad} out of range"
                        )));
                    }
                }
            }
        }
        if let Some(labels) = &wire.labels {
            if let Some((e, _)) = labels.iter().find(|(e, _)| **e >= cells.get(1).copied().unwrap_or(0)) {
                return Err(PcsError::Structural(format!("label on nonexistent edge {e}")));
            }
        }
        Ok(PrecubicalSet {
            cells,
            faces_neg: wire.faces.neg,
            faces_pos: wire.faces.pos,
            labels: wire.labels,
        })
    }

    /// DOT rendering of the 1-skeleton; squares are listed as comments.
    pub fn to_dot(&self, name: &str) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "digraph \"{name}\" {{");
        for v in 0..self.cell_count(0) {
            let _ = writeln!(out, "  v{v} [label=\"{v}\"];");
        }
        for e in 0..self.cell_count(1) {
            let label = self.label(e).map(|l| format!(" [label=\"{l}\"]")).unwrap_or_default();
            let _ = writeln!(out, "  v{} -> v{} // edge {e}{label}", self.edge_src(e), self.edge_tgt(e));
        }
        for sq in 0..self.cell_count(2) {
            let c = CellId::new(2, sq);
            let _ = writeln!(
                out,
                "  // square {sq}: d0-={} d0+={} d1-={} d1+={}",
                self.face(c, 0, Sign::Neg).index,
                self.face(c, 0, Sign::Pos).index,
                self.face(c, 1, Sign::Neg).index,
                self.face(c, 1, Sign::Pos).index,
            );
        }
        out.push_str("}\n");
        out
    }

    /// FNV-1a hash of the canonical JSON encoding, as a hex string.
    pub fn content_hash(&self) -> String {
        let bytes = self.to_json_string();
        let mut h: u64 = 0xcbf29ce484222325;
        for b in bytes.as_bytes() {
            h ^= *b as u64;
            h = h.wrapping_mul(0x100000001b3);
        }
        format!("{h:016x}")
    }
}

#[derive(Serialize, Deserialize)]
struct WireFaces {
    neg: Vec<Vec<Vec<usize>>>,
    pos: Vec<Vec<Vec<usize>>>,
}

#[derive(Serialize, Deserialize)]
struct WirePcs {
    dim: usize,
    cells: Vec<usize>,
    faces: WireFaces,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    labels: Option<BTreeMap<usize, String>>,
}

/// Builder for hand-made complexes.
#[derive(Clone, Debug, Default)]
pub struct PcsBuilder {
    cells: Vec<usize>,
    faces_neg: Vec<Vec<Vec<usize>>>,
    faces_pos: Vec<Vec<Vec<usize>>>,
    labels: BTreeMap<usize, String>,
}

impl PcsBuilder {
    pub fn new() -> Self {
        PcsBuilder { cells: vec![0], ..Default::default() }
    }

    pub fn add_vertex(&mut self) -> usize {
        self.cells[0] += 1;
        self.cells[0] - 1
    }

    pub fn add_vertices(&mut self, n: usize) -> Vec<usize> {
        (0..n).map(|_| self.add_vertex()).collect()
    }

    pub fn add_edge(&mut self, src: usize, tgt: usize) -> usize {
        self.ensure_dim(1);
        self.faces_neg[0][0].push(src);
        self.faces_pos[0][0].push(tgt);
        self.cells[1] += 1;
        self.cells[1] - 1
    }

    pub fn add_labeled_edge(&mut self, src: usize, tgt: usize, label: &str) -> usize {
        let e = self.add_edge(src, tgt);
        self.labels.insert(e, label.to_string());
        e
    }

    /// Add a square with faces `∂-_0 = d0n`, `∂+_0 = d0p`, `∂-_1 = d1n`, `∂+_1 = d1p`.
    pub fn add_square(&mut self, d0n: usize, d0p: usize, d1n: usize, d1p: usize) -> usize {
        self.ensure_dim(2);
        self.faces_neg[1][0].push(d0n);
        self.faces_pos[1][0].push(d0p);
        self.faces_neg[1][1].push(d1n);
        self.faces_pos[1][1].push(d1p);
        self.cells[2] += 1;
        self.cells[2] - 1
    }

    fn ensure_dim(&mut self, d: usize) {
        while self.cells.len() <= d {
            let n = self.cells.len();
            self.cells.push(0);
            self.faces_neg.push(vec![vec![]; n]);
            self.faces_pos.push(vec![vec![]; n]);
        }
    }

    pub fn finish(self) -> Result<PrecubicalSet, PcsError> {
        let mut cells = self.cells;
        while cells.len() > 1 && *cells.last().unwrap() == 0 {
            cells.pop();
        }
        let dim = cells.len() - 1;
        let faces_neg: Vec<_> = self.faces_neg.into_iter().take(dim).collect();
        let faces_pos: Vec<_> = self.faces_pos.into_iter().take(dim).collect();
        for (n, (neg, pos)) in faces_neg.iter().zip(&faces_pos).enumerate() {
            for table in [neg, pos] {
                for map in table {
                    if map.len() != cells[n + 1] {
                        return Err(PcsError::Structural("face map not total".into()));
                    }
                    if map.iter().any(|t| *t >= cells[n]) {
                        return Err(PcsError::Structural("face target out of range".into()));
                    }
                }
            }
        }
        let labels = if self.labels.is_empty() { None } else { Some(self.labels) };
        Ok(PrecubicalSet { cells, faces_neg, faces_pos, labels })
    }
}

/// Lookup tables for the word description of `Yn`.
pub struct StandardCubeIndex {
    pub n: usize,
    pub by_dim: Vec<Vec<CubeWord>>,
    index: HashMap<CubeWord, CellId>,
}

impl StandardCubeIndex {
    pub fn new(n: usize) -> StandardCubeIndex {
        let mut by_dim: Vec<Vec<CubeWord>> = vec![Vec::new(); n + 1];
        for w in all_words(n) {
            by_dim[w.zeros()].push(w);
        }
        let mut index = HashMap::new();
        for (d, words) in by_dim.iter().enumerate() {
            for (i, w) in words.iter().enumerate() {
                index.insert(w.clone(), CellId::new(d, i));
            }
        }
        StandardCubeIndex { n, by_dim, index }
    }

    pub fn id_of(&self, w: &CubeWord) -> Option<CellId> {
        self.index.get(w).copied()
    }

    pub fn word_of(&self, c: CellId) -> &CubeWord {
        &self.by_dim[c.dim][c.index]
    }
}

/// The standard cube `Yn` with cells named by words in `{-,0,+}^n`.
pub fn standard_cube(n: usize) -> Result<PrecubicalSet, PcsError> {
    standard_cube_bounded(n, DEFAULT_DIM_BOUND)
}

pub fn standard_cube_bounded(n: usize, bound: usize) -> Result<PrecubicalSet, PcsError> {
    if n > bound {
        return Err(PcsError::DimensionBound(n, bound));
    }
    let idx = StandardCubeIndex::new(n);
    let cells: Vec<usize> = idx.by_dim.iter().map(|v| v.len()).collect();
    let mut faces_neg = Vec::new();
    let mut faces_pos = Vec::new();
    for d in 1..=n {
        let mut neg = vec![vec![0; cells[d]]; d];
        let mut pos = vec![vec![0; cells[d]]; d];
        for (c, w) in idx.by_dim[d].iter().enumerate() {
            for i in 0..d {
                neg[i][c] = idx.id_of(&w.face(i, Sign::Neg)).unwrap().index;
                pos[i][c] = idx.id_of(&w.face(i, Sign::Pos)).unwrap().index;
            }
        }
        faces_neg.push(neg);
        faces_pos.push(pos);
    }
    Ok(PrecubicalSet { cells, faces_neg, faces_pos, labels: None })
}

/// The standard hollow cube `∂Yn` (`∂Y0` is empty).
pub fn hollow_cube(n: usize) -> Result<PrecubicalSet, PcsError> {
    if n == 0 {
        return Ok(PrecubicalSet::empty());
    }
    let full = standard_cube(n)?;
    let (sub, _) = full.subcomplex(|c| c.dim < n);
    Ok(sub)
}

/// `Λu ⊆ ∂Yn`: cubes sharing at least one letter with the sign word `u`.
///
/// Cross-checked against the equivalent description as `∂Yn` minus the cubes
/// having the complemented vertex `ū` as iterated face.
pub fn lambda_complex(u: &[Sign]) -> Result<PrecubicalSet, PcsError> {
    let n = u.len();
    if n == 0 {
        return Err(PcsError::Structural("lambda complex needs n >= 1".into()));
    }
    let uword = CubeWord(u.iter().map(|s| Letter::from_sign(*s)).collect());
    let idx = StandardCubeIndex::new(n);
    let full = standard_cube(n)?;
    let (by_letters, _) =
        full.subcomplex(|c| c.dim < n && idx.word_of(c).shares_letter_with(&uword));
    // Independent construction: remove cubes with ū as iterated corner.
    let hollow = hollow_cube(n)?;
    let hidx = StandardCubeIndex::new(n);
    let ubar = uword.complement();
    let ubar_id = hidx.id_of(&ubar).unwrap();
    let (by_removal, _) = hollow.subcomplex(|c| {
        !hollow
            .iterated_faces(c)
            .contains(&CellId::new(0, full_to_hollow_vertex(&hidx, ubar_id)))
    });
    debug_assert_eq!(by_letters, by_removal, "two constructions of Λu must agree");
    if by_letters != by_removal {
        return Err(PcsError::Structural("lambda complex cross-check failed".into()));
    }
    Ok(by_letters)
}

fn full_to_hollow_vertex(_idx: &StandardCubeIndex, v: CellId) -> usize {
    // Vertices of ∂Yn and Yn share indices: removing the top cell does not
    // renumber lower dimensions.
    v.index
}

/// A morphism of precubical sets, stored as a per-dimension total map.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PcsMorphism {
    pub source: PrecubicalSet,
    pub target: PrecubicalSet,
    /// `map[d][i]` is the image index of the `d`-cell `i`.
    pub map: Vec<Vec<usize>>,
}

impl PcsMorphism {
    pub fn apply(&self, c: CellId) -> CellId {
        CellId::new(c.dim, self.map[c.dim][c.index])
    }

    /// Check commutation with all face maps and label preservation.
    pub fn check(&self) -> Result<(), PcsError> {
        if self.map.len() != self.source.dim() + 1 {
            return Err(PcsError::NotAMorphism("map must cover every dimension".into()));
        }
        for d in 0..=self.source.dim() {
            if self.map[d].len() != self.source.cell_count(d) {
                return Err(PcsError::NotAMorphism(format!("map not total in dimension {d}")));
            }
            if self.map[d].iter().any(|t| *t >= self.target.cell_count(d)) {
                return Err(PcsError::NotAMorphism(format!("image out of range in dimension {d}")));
            }
        }
        for d in 1..=self.source.dim() {
            for c in 0..self.source.cell_count(d) {
                for i in 0..d {
                    for sign in [Sign::Neg, Sign::Pos] {
                        let lhs = self.apply(self.source.face(CellId::new(d, c), i, sign));
                        let rhs = self.target.face(self.apply(CellId::new(d, c)), i, sign);
                        if lhs != rhs {
                            return Err(PcsError::NotAMorphism(format!(
                                "face {i}{sign:?} of {d}-cell {c} not preserved"
                            )));
                        }
                    }
                }
            }
        }
        if self.source.labels().is_some() && self.target.labels().is_some() {
            for e in 0..self.source.cell_count(1) {
                if let Some(l) = self.source.label(e) {
                    if self.target.label(self.map[1][e]) != Some(l) {
                        return Err(PcsError::NotAMorphism(format!("label of edge {e} not preserved")));
                    }
                }
            }
        }
        Ok(())
    }

    /// The identity morphism.
    pub fn identity(c: &PrecubicalSet) -> PcsMorphism {
        let map = (0..=c.dim()).map(|d| (0..c.cell_count(d)).collect()).collect();
        PcsMorphism { source: c.clone(), target: c.clone(), map }
    }

    /// Inclusion morphism from a subcomplex renumbering.
    pub fn inclusion(sub: &PrecubicalSet, ambient: &PrecubicalSet, maps: &[Vec<Option<usize>>]) -> PcsMorphism {
        let mut map = vec![Vec::new(); sub.dim() + 1];
        for (d, m) in maps.iter().enumerate() {
            if d > sub.dim() {
                break;
            }
            let mut inv = vec![0; sub.cell_count(d)];
            for (old, new) in m.iter().enumerate() {
                if let Some(new) = new {
                    inv[*new] = old;
                }
            }
            map[d] = inv;
        }
        PcsMorphism { source: sub.clone(), target: ambient.clone(), map }
    }
}

/// All morphisms `D → C` extending `partial`, ordered lexicographically by the
/// image vector over cells sorted by `(dimension, id)`.
pub fn find_morphisms(
    d: &PrecubicalSet,
    c: &PrecubicalSet,
    partial: &BTreeMap<CellId, CellId>,
) -> Vec<PcsMorphism> {
    // Assignment table, usize::MAX = unassigned.
    let mut assign: Vec<Vec<usize>> = (0..=d.dim()).map(|k| vec![usize::MAX; d.cell_count(k)]).collect();
    // Seed with the partial assignment, propagating faces downward.
    for (src, tgt) in partial {
        if !d.contains(*src) || !c.contains(*tgt) || src.dim != tgt.dim {
            return Vec::new();
        }
        if !propagate(d, c, &mut assign, *src, *tgt) {
            return Vec::new();
        }
    }

    // Process cells from the top dimension down so faces get forced; isolated
    // vertices are enumerated last. Within a dimension, prefer cells that are
    // already constrained by an assigned coface.
    let mut order: Vec<CellId> = Vec::new();
    for k in (0..=d.dim()).rev() {
        for i in 0..d.cell_count(k) {
            order.push(CellId::new(k, i));
        }
    }

    let mut results = Vec::new();
    search(d, c, &mut assign, &order, 0, &mut results);

    // Deterministic output: lexicographic on the (dim, id)-ordered image vector.
    results.sort();
    results
        .into_iter()
        .map(|map| PcsMorphism { source: d.clone(), target: c.clone(), map })
        .collect()
}

fn propagate(
    d: &PrecubicalSet,
    c: &PrecubicalSet,
    assign: &mut [Vec<usize>],
    src: CellId,
    tgt: CellId,
) -> bool {
    let cur = assign[src.dim][src.index];
    if cur != usize::MAX {
        return cur == tgt.index;
    }
    if d.labels().is_some() && c.labels().is_some() && src.dim == 1 {
        if let Some(l) = d.label(src.index) {
            if c.label(tgt.index) != Some(l) {
                return false;
            }
        }
    }
    assign[src.dim][src.index] = tgt.index;
    for i in 0..src.dim {
        for sign in [Sign::Neg, Sign::Pos] {
            if !propagate(d, c, assign, d.face(src, i, sign), c.face(tgt, i, sign)) {
                return false;
            }
        }
    }
    true
}

fn search(
    d: &PrecubicalSet,
    c: &PrecubicalSet,
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
    for t in 0..c.cell_count(cell.dim) {
        let snapshot = assign.clone();
        if propagate(d, c, assign, cell, CellId::new(cell.dim, t)) {
            search(d, c, assign, order, pos + 1, results);
        }
        *assign = snapshot;
    }
}

/// Result of counting lifts of `incl : D ↪ E` against `h : D → C`.
#[derive(Clone, Debug)]
pub struct LiftStatus {
    pub count: usize,
    pub witnesses: Vec<PcsMorphism>,
}

/// Count morphisms `g : E → C` with `g ∘ incl = h`.
pub fn lift_status(c: &PrecubicalSet, incl: &PcsMorphism, h: &PcsMorphism) -> Result<LiftStatus, PcsError> {
    h.check().map_err(|e| PcsError::NotAMorphism(format!("h is not a morphism: {e}")))?;
    let mut partial = BTreeMap::new();
    for dcell in incl.source.all_cells() {
        partial.insert(incl.apply(dcell), h.apply(dcell));
    }
    let all = find_morphisms(&incl.target, c, &partial);
    Ok(LiftStatus { count: all.len(), witnesses: all.into_iter().take(2).collect() })
}

/// A tile `a·b ⋄ b′·a′` read off a square, with `a = ∂-_0`, `b = ∂+_1`,
/// `b′ = ∂-_1`, `a′ = ∂+_0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct TileQuad {
    pub a: usize,
    pub b: usize,
    pub b_prime: usize,
    pub a_prime: usize,
    pub square: usize,
}

/// All tiles of `C`, one per square per orientation (symmetric closure).
pub fn tiles(c: &PrecubicalSet) -> BTreeSet<TileQuad> {
    let mut out = BTreeSet::new();
    for sq in 0..c.cell_count(2) {
        let cell = CellId::new(2, sq);
        let a = c.face(cell, 0, Sign::Neg).index;
        let b = c.face(cell, 1, Sign::Pos).index;
        let b_prime = c.face(cell, 1, Sign::Neg).index;
        let a_prime = c.face(cell, 0, Sign::Pos).index;
        out.insert(TileQuad { a, b, b_prime, a_prime, square: sq });
        out.insert(TileQuad { a: b_prime, b: a_prime, b_prime: a, a_prime: b, square: sq });
    }
    out
}

/// Fill hollow borders of dimension `3..=dmax`, one cube per border morphism.
///
/// On a 2-truncated complex this computes the right adjoint to 2-truncation,
/// restricted to dimensions at most `dmax`.
pub fn complete(c2: &PrecubicalSet, dmax: usize) -> Result<PrecubicalSet, PcsError> {
    let mut cur = c2.clone();
    for k in 3..=dmax {
        let hollow = hollow_cube(k)?;
        let morphisms = find_morphisms(&hollow, &cur, &BTreeMap::new());
        if morphisms.is_empty() {
            continue;
        }
        // A filler's faces are the images of the one-zero words of Yk.
        let idx = StandardCubeIndex::new(k);
        let mut new_cells: Vec<(Vec<usize>, Vec<usize>)> = Vec::new();
        let mut seen: BTreeSet<(Vec<usize>, Vec<usize>)> = BTreeSet::new();
        // Existing k-cells, to keep completion idempotent.
        for existing in 0..cur.cell_count(k) {
            let mut neg = Vec::new();
            let mut pos = Vec::new();
            for i in 0..k {
                neg.push(cur.face(CellId::new(k, existing), i, Sign::Neg).index);
                pos.push(cur.face(CellId::new(k, existing), i, Sign::Pos).index);
            }
            seen.insert((neg, pos));
        }
        for m in &morphisms {
            let mut neg = Vec::new();
            let mut pos = Vec::new();
            for i in 0..k {
                let mut w = CubeWord(vec![Letter::Zero; k]);
                w.0[i] = Letter::Minus;
                let target = m.apply(idx.id_of(&w).unwrap());
                neg.push(target.index);
                w.0[i] = Letter::Plus;
                let target = m.apply(idx.id_of(&w).unwrap());
                pos.push(target.index);
            }
            let key = (neg.clone(), pos.clone());
            if seen.insert(key) {
                new_cells.push((neg, pos));
            }
        }
        if new_cells.is_empty() {
            continue;
        }
        // Extend the complex with the fillers.
        let mut cells = cur.cells.clone();
        while cells.len() <= k {
            cells.push(0);
        }
        let mut faces_neg = cur.faces_neg.clone();
        let mut faces_pos = cur.faces_pos.clone();
        while faces_neg.len() < k {
            let n = faces_neg.len() + 1;
            faces_neg.push(vec![vec![]; n]);
            faces_pos.push(vec![vec![]; n]);
        }
        for (neg, pos) in new_cells {
            for i in 0..k {
                faces_neg[k - 1][i].push(neg[i]);
                faces_pos[k - 1][i].push(pos[i]);
            }
            cells[k] += 1;
        }
        cur = PrecubicalSet { cells, faces_neg, faces_pos, labels: cur.labels.clone() };
    }
    Ok(cur)
}

/// Exhaustive isomorphism test for small complexes.
pub fn is_isomorphic(c: &PrecubicalSet, d: &PrecubicalSet) -> bool {
    if c.cell_counts() != d.cell_counts() {
        return false;
    }
    find_morphisms(c, d, &BTreeMap::new()).iter().any(|m| {
        (0..=c.dim()).all(|k| {
            let mut seen = vec![false; d.cell_count(k)];
            m.map[k].iter().all(|t| {
                if seen[*t] {
                    false
                } else {
                    seen[*t] = true;
                    true
                }
            })
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn binom(n: usize, k: usize) -> usize {
        if k > n {
            return 0;
        }
        let mut r = 1usize;
        for i in 0..k {
            r = r * (n - i) / (i + 1);
        }
        r
    }

    #[test]
    fn standard_cube_counts() {
        for n in 0..=6 {
            let c = standard_cube(n).unwrap();
            for k in 0..=n {
                assert_eq!(c.cell_count(k), binom(n, k) * 2usize.pow((n - k) as u32), "Y{n}({k})");
            }
            assert!(c.validate().is_ok());
        }
        assert_eq!(standard_cube(3).unwrap().total_cells(), 27);
        assert_eq!(standard_cube(3).unwrap().cell_counts(), &[8, 12, 6, 1]);
        assert!(matches!(standard_cube(7), Err(PcsError::DimensionBound(7, 6))));
    }

    #[test]
    fn standard_cube_zero_and_two() {
        let y0 = standard_cube(0).unwrap();
        assert_eq!(y0.cell_counts(), &[1]);
        let y2 = standard_cube(2).unwrap();
        assert_eq!(y2.cell_counts(), &[4, 4, 1]);
        // Vertices in lexicographic order: --, -+, +-, ++.
        // Edges in lexicographic order: -0, 0-, 0+, +0.
        let idx = StandardCubeIndex::new(2);
        let e = idx.id_of(&CubeWord::parse("-0").unwrap()).unwrap();
        assert_eq!(y2.edge_src(e.index), idx.id_of(&CubeWord::parse("--").unwrap()).unwrap().index);
        assert_eq!(y2.edge_tgt(e.index), idx.id_of(&CubeWord::parse("-+").unwrap()).unwrap().index);
    }

    #[test]
    fn hollow_cube_counts() {
        assert_eq!(hollow_cube(0).unwrap().cell_counts(), &[0]);
        assert_eq!(hollow_cube(2).unwrap().cell_counts(), &[4, 4]);
        assert_eq!(hollow_cube(3).unwrap().cell_counts(), &[8, 12, 6]);
        assert!(hollow_cube(3).unwrap().validate().is_ok());
    }

    #[test]
    fn validate_flags_injected_mismatch() {
        let mut y3 = standard_cube(3).unwrap();
        assert!(y3.validate().is_ok());
        // Divert one vertex-level face of an edge that takes part in a square.
        let idx = StandardCubeIndex::new(3);
        let edge = idx.id_of(&CubeWord::parse("-00").unwrap()).unwrap();
        // not a meaningful complex any more, just a relation violation
        let old = y3.face(CellId::new(2, edge.index), 0, Sign::Neg);
        y3.set_face_unchecked(CellId::new(2, edge.index), 0, Sign::Neg, (old.index + 1) % y3.cell_count(1));
        let report = y3.validate();
        assert!(!report.is_ok());
        assert!(report.face_violations.iter().any(|v| v.n == 0));
    }

    #[test]
    fn iterated_face_on_y2() {
        let y2 = standard_cube(2).unwrap();
        let idx = StandardCubeIndex::new(2);
        let square = idx.id_of(&CubeWord::parse("00").unwrap()).unwrap();
        let v = y2.iterated_face(square, &CubeWord::parse("-+").unwrap()).unwrap();
        assert_eq!(idx.word_of(v).to_string(), "-+");
        let same = y2.iterated_face(square, &CubeWord::parse("00").unwrap()).unwrap();
        assert_eq!(same, square);
        let e = y2.iterated_face(square, &CubeWord::parse("0-").unwrap()).unwrap();
        assert_eq!(idx.word_of(e).to_string(), "0-");
    }

    #[test]
    fn lambda_complexes() {
        let l = lambda_complex(&[Sign::Neg, Sign::Pos]).unwrap();
        // vertices --, -+, ++ and edges -0, 0+
        assert_eq!(l.cell_counts(), &[3, 2]);
        let l = lambda_complex(&[Sign::Pos, Sign::Pos]).unwrap();
        assert_eq!(l.cell_counts(), &[3, 2]);
        let l = lambda_complex(&[Sign::Pos, Sign::Neg, Sign::Pos]).unwrap();
        assert_eq!(l.cell_counts(), &[7, 9, 3]);
        assert!(l.validate().is_ok());
    }

    #[test]
    fn tensor_of_intervals_is_square() {
        let y1 = standard_cube(1).unwrap();
        let t = y1.tensor(&y1);
        assert_eq!(t.cell_counts(), &[4, 4, 1]);
        assert!(t.validate().is_ok());
        assert!(is_isomorphic(&t, &standard_cube(2).unwrap()));
        // Tensor with the unit point.
        let p = PrecubicalSet::point();
        let y2 = standard_cube(2).unwrap();
        assert!(is_isomorphic(&y2.tensor(&p), &y2));
        // 2-edge chain ⊗ Y1.
        let mut b = PcsBuilder::new();
        let v = b.add_vertices(3);
        b.add_edge(v[0], v[1]);
        b.add_edge(v[1], v[2]);
        let chain = b.finish().unwrap();
        let t = chain.tensor(&y1);
        assert_eq!(t.cell_counts(), &[6, 7, 2]);
        assert!(t.validate().is_ok());
    }

    #[test]
    fn remove_and_glue() {
        let y2 = standard_cube(2).unwrap();
        let idx = StandardCubeIndex::new(2);
        let pp = idx.id_of(&CubeWord::parse("++").unwrap()).unwrap().index;
        let (r, _) = y2.remove_vertices(&BTreeSet::from([pp]));
        assert_eq!(r.cell_counts(), &[3, 2]);
        assert!(r.validate().is_ok());
        let (same, _) = y2.remove_vertices(&BTreeSet::new());
        assert_eq!(same, y2);

        let mut b = PcsBuilder::new();
        let v = b.add_vertices(4);
        b.add_edge(v[0], v[1]);
        b.add_edge(v[2], v[3]);
        let two = b.finish().unwrap();
        let (glued, map) = two.glue_vertices(1, 2);
        assert_eq!(glued.cell_count(0), 3);
        assert_eq!(glued.edge_tgt(0), glued.edge_src(1));
        assert_eq!(map[1], map[2]);
    }

    #[test]
    fn truncate_complete_roundtrip() {
        let y3 = standard_cube(3).unwrap();
        let t = y3.truncate(2);
        assert_eq!(t.cell_counts(), &[8, 12, 6]);
        let c = complete(&t, 3).unwrap();
        assert!(is_isomorphic(&c, &y3));
        let h2 = hollow_cube(2).unwrap();
        assert_eq!(complete(&h2, 3).unwrap(), h2);
        // Idempotence.
        let c2 = complete(&c, 3).unwrap();
        assert!(is_isomorphic(&c2, &y3));
    }

    #[test]
    fn morphism_search() {
        let y0 = standard_cube(0).unwrap();
        let y2 = standard_cube(2).unwrap();
        assert_eq!(find_morphisms(&y0, &y2, &BTreeMap::new()).len(), 4);

        let dy3 = hollow_cube(3).unwrap();
        // No 3-cube available in the hollow cube.
        let y3 = standard_cube(3).unwrap();
        assert!(find_morphisms(&y3, &dy3, &BTreeMap::new()).is_empty());

        // Identity on Λ^{+-+} extends uniquely to the identity of ∂Y3.
        let lam = lambda_complex(&[Sign::Pos, Sign::Neg, Sign::Pos]).unwrap();
        let incl = inclusion_into(&lam, &dy3);
        let mut partial = BTreeMap::new();
        for cell in lam.all_cells() {
            partial.insert(incl.apply(cell), incl.apply(cell));
        }
        let ms = find_morphisms(&dy3, &dy3, &partial);
        assert_eq!(ms.len(), 1);
        assert_eq!(ms[0], PcsMorphism::identity(&dy3));
    }

    /// Inclusion of a Λ-type subcomplex into ∂Yn or Yn, matching by word identity.
    fn inclusion_into(sub: &PrecubicalSet, ambient: &PrecubicalSet) -> PcsMorphism {
        let ms = find_morphisms(sub, ambient, &BTreeMap::new());
        // the inclusion is the unique injective morphism found by seeding nothing
        // only valid in tests on rigid complexes; pick the injective one
        ms.into_iter()
            .find(|m| {
                (0..=sub.dim()).all(|k| {
                    let mut seen = std::collections::HashSet::new();
                    m.map[k].iter().all(|t| seen.insert(*t))
                })
            })
            .expect("inclusion exists")
    }

    #[test]
    fn lift_status_examples() {
        let y2 = standard_cube(2).unwrap();
        let lam = lambda_complex(&[Sign::Neg, Sign::Pos]).unwrap();
        let incl = inclusion_into(&lam, &y2);
        let st = lift_status(&y2, &incl, &incl).unwrap();
        assert_eq!(st.count, 1);

        let dy3 = hollow_cube(3).unwrap();
        let y3 = standard_cube(3).unwrap();
        let incl = inclusion_into(&dy3, &y3);
        let id = PcsMorphism::identity(&dy3);
        let st = lift_status(&dy3, &incl, &id).unwrap();
        assert_eq!(st.count, 0);
    }

    #[test]
    fn tiles_of_y2() {
        let y2 = standard_cube(2).unwrap();
        let idx = StandardCubeIndex::new(2);
        let id = |s: &str| idx.id_of(&CubeWord::parse(s).unwrap()).unwrap().index;
        let ts = tiles(&y2);
        assert_eq!(ts.len(), 2);
        assert!(ts.contains(&TileQuad {
            a: id("-0"),
            b: id("0+"),
            b_prime: id("0-"),
            a_prime: id("+0"),
            square: 0
        }));
        let mut b = PcsBuilder::new();
        let v = b.add_vertices(2);
        b.add_edge(v[0], v[1]);
        let interval = b.finish().unwrap();
        assert!(tiles(&interval).is_empty());
    }

    #[test]
    fn json_roundtrip_and_rejects() {
        let y2 = standard_cube(2).unwrap();
        let s = y2.to_json_string();
        let back = PrecubicalSet::from_json_str(&s).unwrap();
        assert_eq!(back, y2);
        assert!(PrecubicalSet::from_json_str("{}").is_err());
        assert!(PrecubicalSet::from_json_str("{\"dim\":0,\"cells\":[],\"faces\":{\"neg\":[],\"pos\":[]}}").is_err());
        // face target out of range
        let bad = r#"{"dim":1,"cells":[1,1],"faces":{"neg":[[[5]]],"pos":[[[0]]]}}"#;
        assert!(PrecubicalSet::from_json_str(bad).is_err());
    }
}
