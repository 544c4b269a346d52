//! Truncated (n+1)-simplicial sets.
//!
//! A multi-index lists the degrees `(p_n, …, p_1, q)`; axis `a < n` carries
//! `p_{n-a}` and the last axis carries `q`. Every degree is bounded by the
//! truncation `D`. Cells at each index are numbered densely and the face and
//! degeneracy maps are stored as tables.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::hash::Hash;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fincat::{Arrow, ArrowId, Composition, ExplicitCategory, ObjId};
use crate::prescat::{Tag, UnionFind};

pub type Cell = u32;

/// The structure tag of an axis.
pub fn axis_tag(n: usize, axis: usize) -> Tag {
    if axis == n {
        Tag::W
    } else {
        Tag::V(n - axis)
    }
}

/// The axis carrying a tag.
pub fn tag_axis(n: usize, tag: Tag) -> usize {
    match tag {
        Tag::W => n,
        Tag::V(i) => n - i,
    }
}

/// A monotone map `[dom] → [cod]`, stored by its values.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monotone {
    pub vals: Vec<usize>,
    pub cod: usize,
}

impl Monotone {
    pub fn identity(m: usize) -> Self {
        Monotone {
            vals: (0..=m).collect(),
            cod: m,
        }
    }

    /// `[m-1] → [m]` skipping `i`.
    pub fn coface(m: usize, i: usize) -> Self {
        Monotone {
            vals: (0..=m).filter(|&v| v != i).collect(),
            cod: m,
        }
    }

    /// `[m+1] → [m]` hitting `j` twice.
    pub fn codegeneracy(m: usize, j: usize) -> Self {
        Monotone {
            vals: (0..=m + 1).map(|v| if v <= j { v } else { v - 1 }).collect(),
            cod: m,
        }
    }

    pub fn dom(&self) -> usize {
        self.vals.len() - 1
    }

    /// `self` followed by `next`.
    pub fn then(&self, next: &Monotone) -> Monotone {
        Monotone {
            vals: self.vals.iter().map(|&v| next.vals[v]).collect(),
            cod: next.cod,
        }
    }

    pub fn is_injective(&self) -> bool {
        self.vals.windows(2).all(|w| w[0] < w[1])
    }

    /// Values of the codomain not hit, increasing.
    pub fn missing(&self) -> Vec<usize> {
        (0..=self.cod).filter(|v| !self.vals.contains(v)).collect()
    }

    /// Positions `j` with `θ(j) = θ(j+1)`, increasing.
    pub fn collapsed(&self) -> Vec<usize> {
        (0..self.dom()).filter(|&j| self.vals[j] == self.vals[j + 1]).collect()
    }

    pub fn preserves_top(&self) -> bool {
        self.vals[self.dom()] == self.cod
    }

    /// All monotone maps `[k] → [m]`, lexicographically.
    pub fn all(k: usize, m: usize) -> Vec<Monotone> {
        let mut out = Vec::new();
        let mut vals = vec![0; k + 1];
        fn rec(pos: usize, lo: usize, m: usize, vals: &mut Vec<usize>, out: &mut Vec<Monotone>) {
            if pos == vals.len() {
                out.push(Monotone {
                    vals: vals.clone(),
                    cod: m,
                });
                return;
            }
            for v in lo..=m {
                vals[pos] = v;
                rec(pos + 1, v, m, vals, out);
            }
        }
        rec(0, 0, m, &mut vals, &mut out);
        out
    }
}

/// A multisimplicial operator `Δ[k] → Δ[m]`, one monotone map per axis.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Operator(pub Vec<Monotone>);

impl Operator {
    pub fn identity(m: &[usize]) -> Self {
        Operator(m.iter().map(|&d| Monotone::identity(d)).collect())
    }

    pub fn dom(&self) -> Vec<usize> {
        self.0.iter().map(Monotone::dom).collect()
    }

    pub fn cod(&self) -> Vec<usize> {
        self.0.iter().map(|t| t.cod).collect()
    }

    /// `self` followed by `next`.
    pub fn then(&self, next: &Operator) -> Operator {
        Operator(self.0.iter().zip(&next.0).map(|(a, b)| a.then(b)).collect())
    }

    pub fn is_injective(&self) -> bool {
        self.0.iter().all(Monotone::is_injective)
    }

    /// A coface or codegeneracy in one axis, identities elsewhere.
    pub fn elementary(m: &[usize], axis: usize, t: Monotone) -> Self {
        Operator(
            m.iter()
                .enumerate()
                .map(|(a, &d)| if a == axis { t.clone() } else { Monotone::identity(d) })
                .collect(),
        )
    }

    /// All operators `Δ[k] → Δ[m]`.
    pub fn all(k: &[usize], m: &[usize]) -> Vec<Operator> {
        let per_axis: Vec<Vec<Monotone>> = k.iter().zip(m).map(|(&a, &b)| Monotone::all(a, b)).collect();
        let mut out = vec![Vec::new()];
        for choices in &per_axis {
            let mut next = Vec::with_capacity(out.len() * choices.len());
            for prefix in &out {
                for c in choices {
                    let mut p: Vec<Monotone> = prefix.clone();
                    p.push(c.clone());
                    next.push(p);
                }
            }
            out = next;
        }
        out.into_iter().map(Operator).collect()
    }
}

/// Every multi-index with all degrees `≤ bound`, in flat order.
pub fn indices(axes: usize, bound: usize) -> Vec<Vec<usize>> {
    let total = (bound + 1).pow(axes as u32);
    (0..total).map(|f| unflatten(f, axes, bound)).collect()
}

fn unflatten(mut f: usize, axes: usize, bound: usize) -> Vec<usize> {
    let mut m = vec![0; axes];
    for a in (0..axes).rev() {
        m[a] = f % (bound + 1);
        f /= bound + 1;
    }
    m
}

/// A truncated (n+1)-simplicial set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedMSSet {
    n: usize,
    bound: usize,
    names: Vec<Vec<String>>,
    /// `faces[flat][axis][i][cell]`
    faces: Vec<Vec<Vec<Vec<Cell>>>>,
    /// `degens[flat][axis][j][cell]`, present only below the bound.
    degens: Vec<Vec<Vec<Vec<Cell>>>>,
}

impl TruncatedMSSet {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn axes(&self) -> usize {
        self.n + 1
    }

    pub fn bound(&self) -> usize {
        self.bound
    }

    pub fn index_count(&self) -> usize {
        self.names.len()
    }

    pub fn flat(&self, m: &[usize]) -> usize {
        debug_assert!(m.len() == self.axes() && m.iter().all(|&d| d <= self.bound));
        m.iter().fold(0, |acc, &d| acc * (self.bound + 1) + d)
    }

    pub fn multi(&self, flat: usize) -> Vec<usize> {
        unflatten(flat, self.axes(), self.bound)
    }

    pub fn in_bound(&self, m: &[usize]) -> bool {
        m.len() == self.axes() && m.iter().all(|&d| d <= self.bound)
    }

    pub fn count(&self, m: &[usize]) -> usize {
        self.names[self.flat(m)].len()
    }

    pub fn count_at(&self, flat: usize) -> usize {
        self.names[flat].len()
    }

    pub fn total_cells(&self) -> usize {
        self.names.iter().map(Vec::len).sum()
    }

    pub fn cell_name(&self, flat: usize, c: Cell) -> &str {
        &self.names[flat][c as usize]
    }

    pub fn find_cell(&self, flat: usize, name: &str) -> Option<Cell> {
        self.names[flat].iter().position(|n| n == name).map(|c| c as Cell)
    }

    /// `d_i` in `axis`; needs a positive degree there.
    pub fn face(&self, flat: usize, axis: usize, i: usize, c: Cell) -> Cell {
        self.faces[flat][axis][i][c as usize]
    }

    /// `s_j` in `axis`, when the result is within the bound.
    pub fn degen(&self, flat: usize, axis: usize, j: usize, c: Cell) -> Option<Cell> {
        self.degens[flat][axis].get(j).map(|t| t[c as usize])
    }

    fn step(&self, flat: usize, axis: usize, up: bool) -> usize {
        let stride = (self.bound + 1).pow((self.axes() - 1 - axis) as u32);
        if up {
            flat + stride
        } else {
            flat - stride
        }
    }

    /// `θ^* c` for a cell `c` at `θ`'s codomain.
    pub fn act(&self, op: &Operator, c: Cell) -> Cell {
        let mut flat = self.flat(&op.cod());
        let mut cell = c;
        for (axis, t) in op.0.iter().enumerate() {
            for &i in t.missing().iter().rev() {
                cell = self.face(flat, axis, i, cell);
                flat = self.step(flat, axis, false);
            }
        }
        for (axis, t) in op.0.iter().enumerate() {
            for j in t.collapsed() {
                cell = self.degen(flat, axis, j, cell).expect("operator domain is within the bound");
                flat = self.step(flat, axis, true);
            }
        }
        cell
    }

    /// Whether `c` is in the image of some degeneracy.
    pub fn is_degenerate(&self, flat: usize, c: Cell) -> bool {
        self.degenerate_source(flat, c).is_some()
    }

    /// A cell `y` and degeneracy `(axis, j)` with `s_j y = c`, if any.
    pub fn degenerate_source(&self, flat: usize, c: Cell) -> Option<(usize, usize, Cell)> {
        let m = self.multi(flat);
        for axis in 0..self.axes() {
            if m[axis] == 0 {
                continue;
            }
            let below = self.step(flat, axis, false);
            for j in 0..m[axis] {
                // s_j d_j c = c exactly when c is degenerate along s_j
                let y = self.face(flat, axis, j, c);
                if self.degen(below, axis, j, y) == Some(c) {
                    return Some((axis, j, y));
                }
            }
        }
        None
    }

    /// Nondegenerate cells as `(flat index, cell)`.
    pub fn nondegenerate(&self) -> Vec<(usize, Cell)> {
        (0..self.index_count())
            .flat_map(|f| (0..self.count_at(f) as Cell).map(move |c| (f, c)))
            .filter(|&(f, c)| !self.is_degenerate(f, c))
            .collect()
    }

    /// Every violated simplicial identity within the bound.
    pub fn validation_problems(&self) -> Vec<String> {
        let mut out = Vec::new();
        let axes = self.axes();
        let d = self.bound;
        let mut fail = |msg: String| {
            if out.len() < 50 {
                out.push(msg);
            }
        };
        for flat in 0..self.index_count() {
            let m = self.multi(flat);
            for c in 0..self.count_at(flat) as Cell {
                for a in 0..axes {
                    // d_i d_j = d_{j-1} d_i for i < j
                    if m[a] >= 2 {
                        let f1 = self.step(flat, a, false);
                        for j in 0..=m[a] {
                            for i in 0..j {
                                let lhs = self.face(f1, a, i, self.face(flat, a, j, c));
                                let rhs = self.face(f1, a, j - 1, self.face(flat, a, i, c));
                                if lhs != rhs {
                                    fail(format!("d{i} d{j} at {m:?} axis {a} cell {c}"));
                                }
                            }
                        }
                    }
                    if m[a] < d {
                        let up = self.step(flat, a, true);
                        for j in 0..=m[a] {
                            let s = self.degen(flat, a, j, c).unwrap();
                            for i in 0..=m[a] + 1 {
                                let lhs = self.face(up, a, i, s);
                                let rhs = if i == j || i == j + 1 {
                                    c
                                } else if i < j {
                                    let below = self.step(flat, a, false);
                                    self.degen(below, a, j - 1, self.face(flat, a, i, c)).unwrap()
                                } else {
                                    let below = self.step(flat, a, false);
                                    self.degen(below, a, j, self.face(flat, a, i - 1, c)).unwrap()
                                };
                                if lhs != rhs {
                                    fail(format!("d{i} s{j} at {m:?} axis {a} cell {c}"));
                                }
                            }
                            if m[a] + 1 < d {
                                for i in 0..=j {
                                    let lhs = self.degen(up, a, i, s).unwrap();
                                    let rhs = self.degen(up, a, j + 1, self.degen(flat, a, i, c).unwrap());
                                    if Some(lhs) != rhs {
                                        fail(format!("s{i} s{j} at {m:?} axis {a} cell {c}"));
                                    }
                                }
                            }
                        }
                    }
                    for b in 0..axes {
                        if a == b {
                            continue;
                        }
                        // faces and degeneracies in distinct axes commute
                        let ops_a = self.elementary_ops(&m, a);
                        let ops_b = self.elementary_ops(&m, b);
                        for oa in &ops_a {
                            for ob in &ops_b {
                                let (Some(x), Some(y)) = (
                                    self.apply_elem(&m, oa, c).and_then(|(m1, c1)| self.apply_elem(&m1, &(b, ob.1, ob.2), c1)),
                                    self.apply_elem(&m, ob, c).and_then(|(m1, c1)| self.apply_elem(&m1, &(a, oa.1, oa.2), c1)),
                                ) else {
                                    continue;
                                };
                                if x != y {
                                    fail(format!("axes {a},{b} do not commute at {m:?} cell {c}"));
                                }
                            }
                        }
                    }
                }
            }
        }
        out
    }

    /// Elementary operators at `m` in `axis`: `(axis, is_face, position)`.
    fn elementary_ops(&self, m: &[usize], axis: usize) -> Vec<(usize, bool, usize)> {
        let mut v = Vec::new();
        if m[axis] > 0 {
            v.extend((0..=m[axis]).map(|i| (axis, true, i)));
        }
        if m[axis] < self.bound {
            v.extend((0..=m[axis]).map(|j| (axis, false, j)));
        }
        v
    }

    fn apply_elem(&self, m: &[usize], op: &(usize, bool, usize), c: Cell) -> Option<(Vec<usize>, Cell)> {
        let (axis, is_face, pos) = *op;
        let flat = self.flat(m);
        let mut m2 = m.to_vec();
        if is_face {
            if m[axis] == 0 || pos > m[axis] {
                return None;
            }
            m2[axis] -= 1;
            Some((m2, self.face(flat, axis, pos, c)))
        } else {
            if m[axis] >= self.bound || pos > m[axis] {
                return None;
            }
            m2[axis] += 1;
            Some((m2, self.degen(flat, axis, pos, c)?))
        }
    }

    pub fn is_valid(&self) -> bool {
        self.validation_problems().is_empty()
    }

    pub fn to_json_value(&self) -> MSSetJson {
        let key = |flat: usize| {
            self.multi(flat)
                .iter()
                .map(|d| d.to_string())
                .collect::<Vec<_>>()
                .join(",")
        };
        let mut cells = BTreeMap::new();
        let mut action = Vec::new();
        for flat in 0..self.index_count() {
            cells.insert(key(flat), self.names[flat].clone());
            let m = self.multi(flat);
            for axis in 0..self.axes() {
                if m[axis] > 0 {
                    let below = self.step(flat, axis, false);
                    for i in 0..=m[axis] {
                        action.push(ActionJson {
                            index: key(flat),
                            axis,
                            kind: OpKind::Face,
                            position: i,
                            map: self.faces[flat][axis][i]
                                .iter()
                                .map(|&c| self.names[below][c as usize].clone())
                                .collect(),
                        });
                    }
                }
                if m[axis] < self.bound {
                    let above = self.step(flat, axis, true);
                    for j in 0..=m[axis] {
                        action.push(ActionJson {
                            index: key(flat),
                            axis,
                            kind: OpKind::Degeneracy,
                            position: j,
                            map: self.degens[flat][axis][j]
                                .iter()
                                .map(|&c| self.names[above][c as usize].clone())
                                .collect(),
                        });
                    }
                }
            }
        }
        MSSetJson {
            n: self.n,
            truncation: self.bound,
            cells,
            action,
        }
    }

    pub fn from_json_value(json: &MSSetJson) -> Result<Self> {
        let axes = json.n + 1;
        let bound = json.truncation;
        let idx = indices(axes, bound);
        let key = |m: &[usize]| m.iter().map(|d| d.to_string()).collect::<Vec<_>>().join(",");
        let mut problems = Vec::new();
        let names: Vec<Vec<String>> = idx
            .iter()
            .map(|m| json.cells.get(&key(m)).cloned().unwrap_or_default())
            .collect();
        let mut x = TruncatedMSSet {
            n: json.n,
            bound,
            names,
            faces: Vec::new(),
            degens: Vec::new(),
        };
        let lookup: Vec<HashMap<&str, Cell>> = x
            .names
            .iter()
            .map(|ns| ns.iter().enumerate().map(|(i, n)| (n.as_str(), i as Cell)).collect())
            .collect();
        let mut faces: Vec<Vec<Vec<Vec<Cell>>>> = idx
            .iter()
            .map(|m| m.iter().map(|&d| if d > 0 { vec![Vec::new(); d + 1] } else { Vec::new() }).collect())
            .collect();
        let mut degens: Vec<Vec<Vec<Vec<Cell>>>> = idx
            .iter()
            .map(|m| m.iter().map(|&d| if d < bound { vec![Vec::new(); d + 1] } else { Vec::new() }).collect())
            .collect();
        for a in &json.action {
            let Some(flat) = idx.iter().position(|m| key(m) == a.index) else {
                problems.push(format!("unknown index {}", a.index));
                continue;
            };
            let m = &idx[flat];
            let target = match a.kind {
                OpKind::Face if a.axis < axes && m[a.axis] > 0 && a.position <= m[a.axis] => x.step(flat, a.axis, false),
                OpKind::Degeneracy if a.axis < axes && m[a.axis] < bound && a.position <= m[a.axis] => x.step(flat, a.axis, true),
                _ => {
                    problems.push(format!("operator out of range at {}", a.index));
                    continue;
                }
            };
            let map: Option<Vec<Cell>> = a.map.iter().map(|n| lookup[target].get(n.as_str()).copied()).collect();
            match map {
                Some(map) if map.len() == x.names[flat].len() => {
                    let slot = match a.kind {
                        OpKind::Face => &mut faces[flat][a.axis][a.position],
                        OpKind::Degeneracy => &mut degens[flat][a.axis][a.position],
                    };
                    *slot = map;
                }
                _ => problems.push(format!("bad map for operator at {}", a.index)),
            }
        }
        for (flat, per_axis) in faces.iter().chain(degens.iter()).enumerate() {
            for tables in per_axis {
                for t in tables {
                    if t.len() != x.names[flat % idx.len()].len() {
                        problems.push(format!("missing operator at {}", key(&idx[flat % idx.len()])));
                    }
                }
            }
        }
        if !problems.is_empty() {
            problems.dedup();
            return Err(Error::Invalid(problems));
        }
        x.faces = faces;
        x.degens = degens;
        Ok(x)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_json_value()).expect("msset serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Self::from_json_value(&serde_json::from_str(s)?)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OpKind {
    Face,
    Degeneracy,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ActionJson {
    /// Source index, degrees separated by commas.
    pub index: String,
    pub axis: usize,
    pub kind: OpKind,
    pub position: usize,
    /// Image of each source cell, in the source's cell order.
    pub map: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MSSetJson {
    pub n: usize,
    pub truncation: usize,
    pub cells: BTreeMap<String, Vec<String>>,
    pub action: Vec<ActionJson>,
}

/// Builds a truncated multisimplicial set from cell keys: `cells_at` lists the
/// cells of an index, and `face`/`degen` compute keys of the results.
pub(crate) fn build_msset<K, FC, FF, FD, FN>(
    n: usize,
    bound: usize,
    cells_at: FC,
    face: FF,
    degen: FD,
    name: FN,
) -> TruncatedMSSet
where
    K: Clone + Eq + Hash,
    FC: Fn(&[usize]) -> Vec<K>,
    FF: Fn(&[usize], usize, usize, &K) -> K,
    FD: Fn(&[usize], usize, usize, &K) -> K,
    FN: Fn(&K) -> String,
{
    let axes = n + 1;
    let idx = indices(axes, bound);
    let keys: Vec<Vec<K>> = idx.iter().map(|m| cells_at(m)).collect();
    let lookup: Vec<HashMap<&K, Cell>> = keys
        .iter()
        .map(|ks| ks.iter().enumerate().map(|(i, k)| (k, i as Cell)).collect())
        .collect();
    let mut x = TruncatedMSSet {
        n,
        bound,
        names: keys.iter().map(|ks| ks.iter().map(&name).collect()).collect(),
        faces: Vec::with_capacity(idx.len()),
        degens: Vec::with_capacity(idx.len()),
    };
    let flat_of = |m: &[usize]| m.iter().fold(0, |acc, &d| acc * (bound + 1) + d);
    for (flat, m) in idx.iter().enumerate() {
        let mut per_axis_f = Vec::with_capacity(axes);
        let mut per_axis_d = Vec::with_capacity(axes);
        for axis in 0..axes {
            let mut fs = Vec::new();
            if m[axis] > 0 {
                let mut below = m.clone();
                below[axis] -= 1;
                let bf = flat_of(&below);
                for i in 0..=m[axis] {
                    fs.push(
                        keys[flat]
                            .iter()
                            .map(|k| lookup[bf][&face(m, axis, i, k)])
                            .collect(),
                    );
                }
            }
            let mut ds = Vec::new();
            if m[axis] < bound {
                let mut above = m.clone();
                above[axis] += 1;
                let af = flat_of(&above);
                for j in 0..=m[axis] {
                    ds.push(
                        keys[flat]
                            .iter()
                            .map(|k| lookup[af][&degen(m, axis, j, k)])
                            .collect(),
                    );
                }
            }
            per_axis_f.push(fs);
            per_axis_d.push(ds);
        }
        x.faces.push(per_axis_f);
        x.degens.push(per_axis_d);
    }
    x
}

fn monotone_name(t: &Monotone) -> String {
    t.vals.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("")
}

/// The standard multisimplex `Δ[degrees]`: cells at `k` are operators
/// `Δ[k] → Δ[degrees]`.
pub fn standard(degrees: &[usize], bound: usize) -> TruncatedMSSet {
    assert!(!degrees.is_empty(), "a multi-index has at least one axis");
    let m = degrees.to_vec();
    build_msset(
        degrees.len() - 1,
        bound,
        |k| Operator::all(k, &m),
        |k, axis, i, op: &Operator| {
            let mut o = op.clone();
            o.0[axis] = Monotone::coface(k[axis], i).then(&op.0[axis]);
            o
        },
        |k, axis, j, op: &Operator| {
            let mut o = op.clone();
            o.0[axis] = Monotone::codegeneracy(k[axis], j).then(&op.0[axis]);
            o
        },
        |op| op.0.iter().map(monotone_name).collect::<Vec<_>>().join("|"),
    )
}

/// The terminal object: one cell everywhere.
pub fn terminal(n: usize, bound: usize) -> TruncatedMSSet {
    standard(&vec![0; n + 1], bound)
}

/// Indexwise product with diagonal action.
pub fn product_msset(x: &TruncatedMSSet, y: &TruncatedMSSet) -> Result<TruncatedMSSet> {
    if x.n != y.n || x.bound != y.bound {
        return Err(Error::usage("product needs equal n and truncation"));
    }
    Ok(build_msset(
        x.n,
        x.bound,
        |m| {
            let (fx, fy) = (x.flat(m), y.flat(m));
            let mut v = Vec::new();
            for a in 0..x.count_at(fx) as Cell {
                for b in 0..y.count_at(fy) as Cell {
                    v.push((a, b));
                }
            }
            v
        },
        |m, axis, i, &(a, b)| (x.face(x.flat(m), axis, i, a), y.face(y.flat(m), axis, i, b)),
        |m, axis, j, &(a, b)| {
            (
                x.degen(x.flat(m), axis, j, a).unwrap(),
                y.degen(y.flat(m), axis, j, b).unwrap(),
            )
        },
        |&(a, b)| format!("({a},{b})"),
    )
    .with_names(|flat, c| {
        let nb = y.count_at(flat) as Cell;
        format!("({},{})", x.cell_name(flat, c / nb), y.cell_name(flat, c % nb))
    }))
}

impl TruncatedMSSet {
    fn with_names(mut self, name: impl Fn(usize, Cell) -> String) -> Self {
        for flat in 0..self.names.len() {
            self.names[flat] = (0..self.names[flat].len() as Cell).map(|c| name(flat, c)).collect();
        }
        self
    }
}

/// A map of truncated multisimplicial sets, one cell function per index.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MSSetMap {
    pub maps: Vec<Vec<Cell>>,
}

impl MSSetMap {
    pub fn identity(x: &TruncatedMSSet) -> Self {
        MSSetMap {
            maps: (0..x.index_count()).map(|f| (0..x.count_at(f) as Cell).collect()).collect(),
        }
    }

    pub fn then(&self, next: &MSSetMap) -> MSSetMap {
        MSSetMap {
            maps: self
                .maps
                .iter()
                .zip(&next.maps)
                .map(|(a, b)| a.iter().map(|&c| b[c as usize]).collect())
                .collect(),
        }
    }

    /// Every failed naturality square for faces and degeneracies.
    pub fn naturality_problems(&self, x: &TruncatedMSSet, y: &TruncatedMSSet) -> Vec<String> {
        let mut out = Vec::new();
        if x.n != y.n || x.bound != y.bound || self.maps.len() != x.index_count() {
            out.push("shape mismatch".to_string());
            return out;
        }
        for flat in 0..x.index_count() {
            if self.maps[flat].len() != x.count_at(flat) {
                out.push(format!("map at {:?} has the wrong size", x.multi(flat)));
                return out;
            }
        }
        for flat in 0..x.index_count() {
            let m = x.multi(flat);
            for axis in 0..x.axes() {
                for c in 0..x.count_at(flat) as Cell {
                    let fc = self.maps[flat][c as usize];
                    if m[axis] > 0 {
                        let below = x.step(flat, axis, false);
                        for i in 0..=m[axis] {
                            if self.maps[below][x.face(flat, axis, i, c) as usize] != y.face(flat, axis, i, fc) {
                                out.push(format!("face d{i} axis {axis} at {m:?}"));
                            }
                        }
                    }
                    if m[axis] < x.bound {
                        let above = x.step(flat, axis, true);
                        for j in 0..=m[axis] {
                            let lhs = self.maps[above][x.degen(flat, axis, j, c).unwrap() as usize];
                            if Some(lhs) != y.degen(flat, axis, j, fc) {
                                out.push(format!("degeneracy s{j} axis {axis} at {m:?}"));
                            }
                        }
                    }
                }
            }
        }
        out.dedup();
        out
    }

    pub fn is_natural(&self, x: &TruncatedMSSet, y: &TruncatedMSSet) -> bool {
        self.naturality_problems(x, y).is_empty()
    }

    pub fn is_injective(&self) -> bool {
        self.maps.iter().all(|m| {
            let mut v = m.clone();
            v.sort_unstable();
            v.windows(2).all(|w| w[0] != w[1])
        })
    }

    pub fn is_bijective(&self, y: &TruncatedMSSet) -> bool {
        self.maps
            .iter()
            .enumerate()
            .all(|(f, m)| crate::fincat::is_bijection(&m.iter().map(|&c| c as usize).collect::<Vec<_>>(), y.count_at(f)))
    }
}

/// The sub-object on the cells marked in `keep`, which must be closed under
/// the action, and its inclusion.
pub fn restrict(x: &TruncatedMSSet, keep: &[Vec<bool>]) -> (TruncatedMSSet, MSSetMap) {
    let new_of: Vec<Vec<Option<Cell>>> = keep
        .iter()
        .map(|k| {
            let mut next = 0;
            k.iter()
                .map(|&b| {
                    b.then(|| {
                        next += 1;
                        next - 1
                    })
                })
                .collect()
        })
        .collect();
    let old: Vec<Vec<Cell>> = keep
        .iter()
        .map(|k| (0..k.len() as Cell).filter(|&c| k[c as usize]).collect())
        .collect();
    let sub = build_msset(
        x.n,
        x.bound,
        |m| old[x.flat(m)].clone(),
        |m, axis, i, &c| x.face(x.flat(m), axis, i, c),
        |m, axis, j, &c| x.degen(x.flat(m), axis, j, c).unwrap(),
        |_| String::new(),
    )
    .with_names(|flat, c| x.cell_name(flat, old[flat][c as usize]).to_string());
    debug_assert!(new_of.iter().zip(&old).all(|(n, o)| o.iter().all(|&c| n[c as usize].is_some())));
    (sub, MSSetMap { maps: old })
}

/// The sub-object generated by the cells of total dimension `≤ k`, with its
/// inclusion.
pub fn skeleton(x: &TruncatedMSSet, k: usize) -> (TruncatedMSSet, MSSetMap) {
    let mut keep: Vec<Vec<bool>> = (0..x.index_count()).map(|f| vec![false; x.count_at(f)]).collect();
    let mut queue = VecDeque::new();
    for flat in 0..x.index_count() {
        if x.multi(flat).iter().sum::<usize>() <= k {
            for c in 0..x.count_at(flat) as Cell {
                keep[flat][c as usize] = true;
                queue.push_back((flat, c));
            }
        }
    }
    while let Some((flat, c)) = queue.pop_front() {
        let m = x.multi(flat);
        for axis in 0..x.axes() {
            let mut next = Vec::new();
            if m[axis] > 0 {
                let below = x.step(flat, axis, false);
                next.extend((0..=m[axis]).map(|i| (below, x.face(flat, axis, i, c))));
            }
            if m[axis] < x.bound {
                let above = x.step(flat, axis, true);
                next.extend((0..=m[axis]).map(|j| (above, x.degen(flat, axis, j, c).unwrap())));
            }
            for (f2, c2) in next {
                if !keep[f2][c2 as usize] {
                    keep[f2][c2 as usize] = true;
                    queue.push_back((f2, c2));
                }
            }
        }
    }
    restrict(x, &keep)
}

/// An index of total dimension `≥ 3` where cells do not match compatible
/// families over the 2-skeleton of the representable.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoskeletonFailure {
    pub index: Vec<usize>,
    pub cells: usize,
    /// Families counted, capped at `cells + 1`.
    pub families: usize,
    pub injective: bool,
}

fn mark_covered(i: usize, faces: &[Vec<(usize, usize, usize)>], covered: &mut [bool]) {
    covered[i] = true;
    for &(_, _, f) in &faces[i] {
        if !covered[f] {
            mark_covered(f, faces, covered);
        }
    }
}

/// Backtracking over compatible families, one op at a time.
struct FamilySearch<'a> {
    x: &'a TruncatedMSSet,
    faces: &'a [Vec<(usize, usize, usize)>],
    dom_flat: &'a [usize],
    /// Cells at an index with a given face at a given position.
    by_face: &'a mut HashMap<(usize, usize), HashMap<Cell, Vec<Cell>>>,
    assigned: Vec<Option<Cell>>,
    trail: Vec<usize>,
    families: usize,
    cap: usize,
}

impl FamilySearch<'_> {
    /// Sets op `i` to `c` and its faces accordingly; false on a clash.
    fn assign(&mut self, i: usize, c: Cell) -> bool {
        match self.assigned[i] {
            Some(v) => return v == c,
            None => {
                self.assigned[i] = Some(c);
                self.trail.push(i);
            }
        }
        for &(axis, j, f) in &self.faces[i] {
            let v = self.x.face(self.dom_flat[i], axis, j, c);
            if !self.assign(f, v) {
                return false;
            }
        }
        true
    }

    fn candidates(&mut self, i: usize) -> Vec<Cell> {
        let k = self.dom_flat[i];
        let known = self.faces[i]
            .iter()
            .enumerate()
            .find_map(|(pos, &(_, _, f))| self.assigned[f].map(|v| (pos, v)));
        match known {
            None => (0..self.x.count_at(k) as Cell).collect(),
            Some((pos, v)) => {
                let (axis, j, _) = self.faces[i][pos];
                let x = self.x;
                let table = self.by_face.entry((k, pos)).or_insert_with(|| {
                    let mut t: HashMap<Cell, Vec<Cell>> = HashMap::new();
                    for c in 0..x.count_at(k) as Cell {
                        t.entry(x.face(k, axis, j, c)).or_default().push(c);
                    }
                    t
                });
                table.get(&v).cloned().unwrap_or_default()
            }
        }
    }

    fn run(&mut self, order: &[usize], at: usize) {
        if self.families > self.cap {
            return;
        }
        let Some(&i) = order.get(at) else {
            self.families += 1;
            return;
        };
        if self.assigned[i].is_some() {
            // fixed, with its faces, by an earlier op
            self.run(order, at + 1);
            return;
        }
        for c in self.candidates(i) {
            let mark = self.trail.len();
            if self.assign(i, c) {
                self.run(order, at + 1);
            }
            self.undo(mark);
        }
    }

    fn undo(&mut self, mark: usize) {
        for t in self.trail.drain(mark..) {
            self.assigned[t] = None;
        }
    }
}

/// Failures of the 2-coskeleton property within the bound.
pub fn coskeleton_failures(x: &TruncatedMSSet) -> Vec<CoskeletonFailure> {
    let mut out = Vec::new();
    // cells of each index grouped by their tuple of faces
    let mut by_face: HashMap<(usize, usize), HashMap<Cell, Vec<Cell>>> = HashMap::new();
    for flat in 0..x.index_count() {
        let m = x.multi(flat);
        if m.iter().sum::<usize>() < 3 {
            continue;
        }
        let mut ops: Vec<Operator> = indices(x.axes(), x.bound)
            .into_iter()
            .filter(|k| k.iter().sum::<usize>() <= 2 && k.iter().zip(&m).all(|(a, b)| a <= b))
            .flat_map(|k| Operator::all(&k, &m).into_iter().filter(Operator::is_injective))
            .collect();
        // each op right after its faces, so choices are constrained early
        ops.sort_by_key(|o| std::cmp::Reverse(o.dom().iter().sum::<usize>()));
        let mut ordered: Vec<Operator> = Vec::with_capacity(ops.len());
        let mut seen: std::collections::HashSet<Operator> = std::collections::HashSet::new();
        fn emit(op: &Operator, seen: &mut std::collections::HashSet<Operator>, ordered: &mut Vec<Operator>) {
            if seen.contains(op) {
                return;
            }
            let k = op.dom();
            for axis in 0..k.len() {
                for i in 0..=k[axis] {
                    if k[axis] > 0 {
                        let mut f = op.clone();
                        f.0[axis] = Monotone::coface(k[axis], i).then(&op.0[axis]);
                        emit(&f, seen, ordered);
                    }
                }
            }
            seen.insert(op.clone());
            ordered.push(op.clone());
        }
        for op in &ops {
            emit(op, &mut seen, &mut ordered);
        }
        let ops = ordered;
        let pos: HashMap<&Operator, usize> = ops.iter().enumerate().map(|(i, o)| (o, i)).collect();
        // faces of each op, as (axis, i, index of θ∘δ_i)
        let faces: Vec<Vec<(usize, usize, usize)>> = ops
            .iter()
            .map(|op| {
                let k = op.dom();
                let mut v = Vec::new();
                for axis in 0..k.len() {
                    if k[axis] == 0 {
                        continue;
                    }
                    for i in 0..=k[axis] {
                        let mut f = op.clone();
                        f.0[axis] = Monotone::coface(k[axis], i).then(&op.0[axis]);
                        v.push((axis, i, pos[&f]));
                    }
                }
                v
            })
            .collect();
        let dom_flat: Vec<usize> = ops.iter().map(|o| x.flat(&o.dom())).collect();
        let cells = x.count_at(flat);
        // face sequences realizing each op, replayed per cell
        let seqs: Vec<Vec<(usize, usize, usize)>> = ops
            .iter()
            .map(|op| {
                let mut at = flat;
                let mut seq = Vec::new();
                for (axis, t) in op.0.iter().enumerate() {
                    for &i in t.missing().iter().rev() {
                        seq.push((at, axis, i));
                        at = x.step(at, axis, false);
                    }
                }
                seq
            })
            .collect();
        let mut images: std::collections::HashSet<Vec<Cell>> = std::collections::HashSet::with_capacity(cells);
        for c in 0..cells as Cell {
            images.insert(
                seqs.iter()
                    .map(|seq| seq.iter().fold(c, |cell, &(at, axis, i)| x.face(at, axis, i, cell)))
                    .collect(),
            );
        }
        let injective = images.len() == cells;
        let total = |o: &Operator| o.dom().iter().sum::<usize>();
        // 2-cells first, each next one sharing as many faces as possible with
        // those already placed; a placed op fixes all its faces
        let mut covered = vec![false; ops.len()];
        let mut order: Vec<usize> = Vec::with_capacity(ops.len());
        let mut pending: Vec<usize> = (0..ops.len()).filter(|&i| total(&ops[i]) == 2).collect();
        while !pending.is_empty() {
            let best = (0..pending.len())
                .max_by_key(|&j| {
                    let i = pending[j];
                    (faces[i].iter().filter(|f| covered[f.2]).count(), std::cmp::Reverse(i))
                })
                .expect("nonempty");
            let i = pending.remove(best);
            mark_covered(i, &faces, &mut covered);
            order.push(i);
        }
        for i in 0..ops.len() {
            if !covered[i] {
                mark_covered(i, &faces, &mut covered);
                order.push(i);
            }
        }
        let mut search = FamilySearch {
            x,
            faces: &faces,
            dom_flat: &dom_flat,
            by_face: &mut by_face,
            assigned: vec![None; ops.len()],
            trail: Vec::new(),
            families: 0,
            cap: cells,
        };
        search.run(&order, 0);
        let families = search.families;
        if !injective || families != cells {
            out.push(CoskeletonFailure {
                index: m,
                cells,
                families,
                injective,
            });
        }
    }
    out
}

/// Whether every cell of total dimension `≥ 3` is uniquely determined by, and
/// every compatible family is realized from, its 2-dimensional faces.
pub fn is_two_coskeletal(x: &TruncatedMSSet) -> bool {
    coskeleton_failures(x).is_empty()
}

struct SimplexData {
    /// Flat index (in the `L`-grid) of each object's multi-index.
    obj_index: Vec<usize>,
    /// First arrow into each object.
    arrow_base: Vec<usize>,
    arrow_target: Vec<ObjId>,
    operators: Vec<Operator>,
    /// Per `L`-grid index `m`, position of each operator into `m`.
    op_pos: Vec<HashMap<Operator, usize>>,
}

/// The category of multisimplices `ΔX` restricted to degrees `≤ L`: objects
/// are cells, arrows `(θ, x): (k, θ^*x) → (m, x)` are operators over `X`.
#[derive(Clone)]
pub struct SimplexCategory {
    pub category: ExplicitCategory,
    /// `(flat index in X, cell)` of each object.
    pub objects: Vec<(usize, Cell)>,
    pub level: usize,
    data: Arc<SimplexData>,
}

impl SimplexCategory {
    pub fn operator(&self, a: ArrowId) -> &Operator {
        &self.data.operators[a]
    }

    pub fn object_of(&self, x: &TruncatedMSSet, m: &[usize], c: Cell) -> ObjId {
        let flat = x.flat(m);
        self.objects
            .binary_search(&(flat, c))
            .expect("cell lies within the level")
    }

    /// The arrow `(θ, x)` for an operator into the index of object `x`.
    pub fn arrow(&self, op: &Operator, target: ObjId) -> ArrowId {
        self.data.arrow_base[target] + self.data.op_pos[self.data.obj_index[target]][op]
    }
}

fn grid_flat(m: &[usize], level: usize) -> usize {
    m.iter().fold(0, |acc, &d| acc * (level + 1) + d)
}

/// Builds `ΔX` with all multi-indices of degrees `≤ level`.
pub fn simplex_category(x: &TruncatedMSSet, level: usize) -> Result<SimplexCategory> {
    if level > x.bound {
        return Err(Error::usage("level exceeds the truncation"));
    }
    let grid = indices(x.axes(), level);
    let ops_into: Vec<Vec<Operator>> = grid
        .iter()
        .map(|m| grid.iter().flat_map(|k| Operator::all(k, m)).collect())
        .collect();
    let op_pos: Vec<HashMap<Operator, usize>> = ops_into
        .iter()
        .map(|ops| ops.iter().cloned().enumerate().map(|(i, o)| (o, i)).collect())
        .collect();
    let mut objects = Vec::new();
    let mut obj_index = Vec::new();
    let mut names = Vec::new();
    let mut order: Vec<(usize, usize)> = grid.iter().enumerate().map(|(g, m)| (x.flat(m), g)).collect();
    order.sort();
    for &(flat, g) in &order {
        for c in 0..x.count_at(flat) as Cell {
            objects.push((flat, c));
            obj_index.push(g);
            names.push(format!("{:?}:{}", grid[g], x.cell_name(flat, c)));
        }
    }
    let obj_of = |flat: usize, c: Cell| objects.binary_search(&(flat, c)).unwrap();
    let mut arrows = Vec::new();
    let mut arrow_base = Vec::with_capacity(objects.len());
    let mut arrow_target = Vec::new();
    let mut operators = Vec::new();
    for (o, &(_, c)) in objects.iter().enumerate() {
        arrow_base.push(arrows.len());
        for op in &ops_into[obj_index[o]] {
            let src_cell = x.act(op, c);
            let src = obj_of(x.flat(&op.dom()), src_cell);
            arrows.push(Arrow {
                name: format!(
                    "{}>{}",
                    op.0.iter().map(monotone_name).collect::<Vec<_>>().join("|"),
                    names[o]
                ),
                src,
                tgt: o,
            });
            arrow_target.push(o);
            operators.push(op.clone());
        }
    }
    let identities: Vec<ArrowId> = (0..objects.len())
        .map(|o| {
            let m = &grid[obj_index[o]];
            arrow_base[o] + op_pos[obj_index[o]][&Operator::identity(m)]
        })
        .collect();
    let data = Arc::new(SimplexData {
        obj_index,
        arrow_base,
        arrow_target,
        operators,
        op_pos,
    });
    let rule_data = Arc::clone(&data);
    let rule = move |f: ArrowId, g: ArrowId| {
        let d = &rule_data;
        let target = d.arrow_target[g];
        let op = d.operators[f].then(&d.operators[g]);
        d.arrow_base[target] + d.op_pos[d.obj_index[target]][&op]
    };
    let category = ExplicitCategory::new(names, arrows, identities, Composition::Rule(Arc::new(rule)));
    Ok(SimplexCategory {
        category,
        objects,
        level,
        data,
    })
}

/// Per-index outcome of comparing `colim_{ΔX} Δ[m]` with `X`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ColimitIndexCheck {
    pub index: Vec<usize>,
    pub classes: usize,
    pub cells: usize,
    pub bijective: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ColimitCheck {
    pub per_index: Vec<ColimitIndexCheck>,
}

impl ColimitCheck {
    pub fn is_iso(&self) -> bool {
        self.per_index.iter().all(|c| c.bijective)
    }
}

/// Computes the colimit of the standard multisimplices over `ΔX` (degrees
/// `≤ level`) at every index `≤ level` and compares it with `X`.
pub fn colim_over_simplices(x: &TruncatedMSSet, level: usize) -> Result<ColimitCheck> {
    if level > x.bound {
        return Err(Error::usage("level exceeds the truncation"));
    }
    let grid = indices(x.axes(), level);
    let mut objects: Vec<(Vec<usize>, Cell)> = Vec::new();
    for m in &grid {
        for c in 0..x.count(m) as Cell {
            objects.push((m.clone(), c));
        }
    }
    let obj_of: HashMap<(Vec<usize>, Cell), usize> =
        objects.iter().cloned().enumerate().map(|(i, o)| (o, i)).collect();
    let mut per_index = Vec::new();
    for k in &grid {
        let ops: Vec<Vec<Operator>> = grid.iter().map(|m| Operator::all(k, m)).collect();
        let pos: Vec<HashMap<&Operator, usize>> = ops
            .iter()
            .map(|v| v.iter().enumerate().map(|(i, o)| (o, i)).collect())
            .collect();
        let gidx = |m: &[usize]| grid_flat(m, level);
        let mut base = Vec::with_capacity(objects.len());
        let mut total = 0;
        for (m, _) in &objects {
            base.push(total);
            total += ops[gidx(m)].len();
        }
        let mut uf = UnionFind::new(total);
        // elementary operators generate every arrow of ΔX
        for (o, (m, c)) in objects.iter().enumerate() {
            for axis in 0..m.len() {
                let mut elementary = Vec::new();
                if m[axis] > 0 {
                    elementary.extend((0..=m[axis]).map(|i| Monotone::coface(m[axis], i)));
                }
                if m[axis] < level {
                    elementary.extend((0..=m[axis]).map(|j| Monotone::codegeneracy(m[axis], j)));
                }
                for t in elementary {
                    let phi = Operator::elementary(m, axis, t);
                    let m2 = phi.dom();
                    let src = obj_of[&(m2.clone(), x.act(&phi, *c))];
                    for (i, th) in ops[gidx(&m2)].iter().enumerate() {
                        let composite = th.then(&phi);
                        uf.union(base[src] + i, base[o] + pos[gidx(m)][&composite]);
                    }
                }
            }
        }
        let cells = x.count(k);
        let mut class_cell: HashMap<usize, Cell> = HashMap::new();
        let mut consistent = true;
        for (o, (m, c)) in objects.iter().enumerate() {
            for (i, th) in ops[gidx(m)].iter().enumerate() {
                let image = x.act(th, *c);
                let root = uf.find(base[o] + i);
                match class_cell.insert(root, image) {
                    Some(prev) if prev != image => consistent = false,
                    _ => {}
                }
            }
        }
        let classes = class_cell.len();
        let mut hit: Vec<Cell> = class_cell.values().copied().collect();
        hit.sort_unstable();
        hit.dedup();
        let bijective = consistent && classes == cells && hit.len() == cells;
        per_index.push(ColimitIndexCheck {
            index: k.clone(),
            classes,
            cells,
            bijective,
        });
    }
    Ok(ColimitCheck { per_index })
}

/// All maps `X → Y`, assigning nondegenerate cells by increasing dimension.
pub fn enumerate_maps(x: &TruncatedMSSet, y: &TruncatedMSSet, max_nodes: u64) -> Result<Vec<MSSetMap>> {
    if x.n != y.n || x.bound != y.bound {
        return Err(Error::usage("maps need equal n and truncation"));
    }
    let mut order: Vec<usize> = (0..x.index_count()).collect();
    order.sort_by_key(|&f| (x.multi(f).iter().sum::<usize>(), f));
    let cells: Vec<(usize, Cell)> = order
        .iter()
        .flat_map(|&f| (0..x.count_at(f) as Cell).map(move |c| (f, c)))
        .collect();
    let sources: Vec<Option<(usize, usize, Cell)>> =
        cells.iter().map(|&(f, c)| x.degenerate_source(f, c)).collect();
    let mut state = MSSetMap {
        maps: (0..x.index_count()).map(|f| vec![0; x.count_at(f)]).collect(),
    };
    let mut out = Vec::new();
    let mut nodes = 0u64;
    #[allow(clippy::too_many_arguments)]
    fn rec(
        i: usize,
        x: &TruncatedMSSet,
        y: &TruncatedMSSet,
        cells: &[(usize, Cell)],
        sources: &[Option<(usize, usize, Cell)>],
        state: &mut MSSetMap,
        out: &mut Vec<MSSetMap>,
        nodes: &mut u64,
        max_nodes: u64,
    ) -> Result<()> {
        if i == cells.len() {
            if state.is_natural(x, y) {
                out.push(state.clone());
            }
            return Ok(());
        }
        let (flat, c) = cells[i];
        let m = x.multi(flat);
        let candidates: Vec<Cell> = match sources[i] {
            Some((axis, j, src)) => {
                let below = x.step(flat, axis, false);
                vec![y.degen(below, axis, j, state.maps[below][src as usize]).unwrap()]
            }
            None => (0..y.count_at(flat) as Cell).collect(),
        };
        for cand in candidates {
            *nodes += 1;
            if *nodes > max_nodes {
                return Err(Error::Resource {
                    bound: "max_nodes",
                    detail: format!("map search exceeded {max_nodes} nodes"),
                });
            }
            let faces_ok = (0..m.len()).all(|axis| {
                m[axis] == 0 || {
                    let below = x.step(flat, axis, false);
                    (0..=m[axis]).all(|k| {
                        state.maps[below][x.face(flat, axis, k, c) as usize] == y.face(flat, axis, k, cand)
                    })
                }
            });
            if faces_ok {
                state.maps[flat][c as usize] = cand;
                rec(i + 1, x, y, cells, sources, state, out, nodes, max_nodes)?;
            }
        }
        Ok(())
    }
    rec(0, x, y, &cells, &sources, &mut state, &mut out, &mut nodes, max_nodes)?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn monotone_counts() {
        for k in 0..4 {
            for m in 0..4 {
                let all = Monotone::all(k, m);
                // C(k+m+1, k+1)
                let binom = (0..=k).fold(1usize, |acc, i| acc * (k + m + 1 - i) / (i + 1));
                assert_eq!(all.len(), binom);
            }
        }
        assert_eq!(Monotone::coface(2, 1).vals, vec![0, 2]);
        assert_eq!(Monotone::codegeneracy(1, 0).vals, vec![0, 0, 1]);
    }

    #[test]
    fn standard_counts() {
        let pt = terminal(1, 2);
        assert!((0..pt.index_count()).all(|f| pt.count_at(f) == 1));
        let sq = standard(&[1, 1], 2);
        assert_eq!(sq.count(&[0, 0]), 4);
        let e = standard(&[0, 1], 2);
        assert_eq!(e.count(&[1, 1]), 3);
        for x in [&pt, &sq, &e, &standard(&[2, 1], 2), &standard(&[1, 0, 1], 2)] {
            assert!(x.is_valid(), "{:?}", x.validation_problems());
        }
    }

    #[test]
    fn act_matches_standard_precomposition() {
        let x = standard(&[2, 1], 2);
        for k in indices(2, 2) {
            for m in indices(2, 2) {
                for op in Operator::all(&k, &m) {
                    for c in 0..x.count(&m) as Cell {
                        let cell = &x.names[x.flat(&m)][c as usize];
                        let expected_ops = Operator::all(&m, &[2, 1]);
                        let xc = expected_ops
                            .iter()
                            .find(|o| o.0.iter().map(monotone_name).collect::<Vec<_>>().join("|") == *cell)
                            .unwrap();
                        let want = op.then(xc);
                        let got = x.act(&op, c);
                        let name = want.0.iter().map(monotone_name).collect::<Vec<_>>().join("|");
                        assert_eq!(x.cell_name(x.flat(&k), got), name);
                    }
                }
            }
        }
    }

    #[test]
    fn products() {
        let a = standard(&[1, 0], 2);
        let b = standard(&[0, 1], 2);
        let p = product_msset(&a, &b).unwrap();
        let sq = standard(&[1, 1], 2);
        for f in 0..p.index_count() {
            assert_eq!(p.count_at(f), a.count_at(f) * b.count_at(f));
            assert_eq!(p.count_at(f), sq.count_at(f));
        }
        assert!(p.is_valid());
        // (α, β) ↦ the operator with α's first axis and β's second
        let map = MSSetMap {
            maps: (0..p.index_count())
                .map(|f| {
                    let m = p.multi(f);
                    let ops_a = Operator::all(&m, &[1, 0]);
                    let ops_b = Operator::all(&m, &[0, 1]);
                    let ops = Operator::all(&m, &[1, 1]);
                    let nb = ops_b.len();
                    (0..p.count_at(f))
                        .map(|c| {
                            let (oa, ob) = (&ops_a[c / nb], &ops_b[c % nb]);
                            let joined = Operator(vec![oa.0[0].clone(), ob.0[1].clone()]);
                            ops.iter().position(|o| *o == joined).unwrap() as Cell
                        })
                        .collect()
                })
                .collect(),
        };
        assert!(map.is_natural(&p, &sq));
        assert!(map.is_bijective(&sq));
        let t = product_msset(&sq, &terminal(1, 2)).unwrap();
        assert_eq!(t.total_cells(), sq.total_cells());
    }

    #[test]
    fn skeleta() {
        let sq = standard(&[1, 1], 2);
        let (all, _) = skeleton(&sq, 100);
        assert_eq!(all.total_cells(), sq.total_cells());
        let (sk1, inc) = skeleton(&sq, 1);
        assert_eq!(sk1.count(&[1, 1]), 8);
        assert!(sk1.is_valid());
        assert!(inc.is_natural(&sk1, &sq));
        assert!(inc.is_injective());
        let pt = terminal(2, 1);
        assert_eq!(skeleton(&pt, 0).0.total_cells(), pt.total_cells());
    }

    #[test]
    fn coskeleta() {
        assert!(is_two_coskeletal(&standard(&[1, 2], 3)));
        assert!(is_two_coskeletal(&standard(&[0, 3], 3)));
        let (hollow, _) = skeleton(&standard(&[0, 3], 3), 2);
        let failures = coskeleton_failures(&hollow);
        assert!(!failures.is_empty());
        assert!(failures.iter().any(|f| f.index == vec![0, 3] && f.families > f.cells));
    }

    #[test]
    fn simplex_categories() {
        let e = standard(&[0, 1], 2);
        let dx = simplex_category(&e, 1).unwrap();
        let count = |m: &[usize]| dx.objects.iter().filter(|&&(f, _)| e.multi(f) == m).count();
        assert_eq!(
            (count(&[0, 0]), count(&[0, 1]), count(&[1, 0]), count(&[1, 1])),
            (2, 3, 2, 3)
        );
        assert!(crate::fincat::validate_category(&dx.category).is_valid());
        // the identity cell of Δ[0,1] is terminal
        let top = dx.object_of(&e, &[0, 1], e.find_cell(e.flat(&[0, 1]), "0|01").unwrap());
        for o in dx.category.objects() {
            assert_eq!(dx.category.hom(o, top).len(), 1);
        }
        let bigger = simplex_category(&e, 2).unwrap();
        assert!(bigger.category.object_count() > dx.category.object_count());
    }

    #[test]
    fn colimits_over_simplices() {
        for x in [standard(&[0, 1], 2), standard(&[1, 1], 2), skeleton(&standard(&[1, 1], 2), 1).0] {
            let check = colim_over_simplices(&x, 2).unwrap();
            assert!(check.is_iso(), "{check:?}");
        }
    }

    #[test]
    fn yoneda_for_maps() {
        let x = standard(&[1, 1], 2);
        let maps = enumerate_maps(&standard(&[0, 1], 2), &x, 1_000_000).unwrap();
        assert_eq!(maps.len(), x.count(&[0, 1]));
    }

    #[test]
    fn json_round_trip() {
        let (x, _) = skeleton(&standard(&[1, 1], 2), 1);
        let s = x.to_json();
        let back = TruncatedMSSet::from_json(&s).unwrap();
        assert_eq!(back, x);
    }
}
