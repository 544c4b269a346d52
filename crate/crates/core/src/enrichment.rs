//! The embedding `Rel^n Cat → Rel^{n+1} Cat` with its right adjoint left
//! inverse, and the Grothendieck enrichment of an (n+1)-relative category by
//! zigzags.

use std::collections::{HashMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fincat::{Arrow, ArrowId, Composition, ExplicitCategory, Functor, ObjId};
use crate::relcat::{is_relative_functor, product_nrel, search_relative_functors, NRelCategory};

/// Duplicates `w` as `v_{n+1}`.
pub fn embed(c: &NRelCategory) -> NRelCategory {
    let amb = c.ambient();
    let w: Vec<bool> = amb.arrow_ids().map(|a| c.in_w(a)).collect();
    let mut v: Vec<Vec<bool>> = (1..=c.n())
        .map(|i| amb.arrow_ids().map(|a| c.in_v(i, a)).collect())
        .collect();
    v.push(w.clone());
    NRelCategory::from_masks(c.n() + 1, amb.clone(), v, w)
}

/// `ā D`: composites of arrows in `v_1, …, v_{n-1}` for `D` of degree `n`.
pub fn bar_arrows(d: &NRelCategory) -> HashSet<ArrowId> {
    let amb = d.ambient();
    amb.closure(amb.arrow_ids().filter(|&a| (1..d.n()).any(|i| d.in_v(i, a))))
}

/// The right adjoint `(aD, v_1, …, v_{n+1}, w) ↦ (āD, v_1, …, v_n, w)`, with
/// the inclusion of arrows.
pub fn restrict(d: &NRelCategory) -> Result<(NRelCategory, Vec<ArrowId>)> {
    if d.n() < 2 {
        return Err(Error::usage("restrict needs degree at least 2"));
    }
    let (sub, kept) = d.ambient().wide_subcategory(&bar_arrows(d));
    let v = (1..d.n()).map(|i| kept.iter().map(|&a| d.in_v(i, a)).collect()).collect();
    let w = kept.iter().map(|&a| d.in_w(a)).collect();
    Ok((NRelCategory::from_masks(d.n() - 1, sub, v, w), kept))
}

/// Equality of explicit n-relative categories, arrow ids included.
pub fn same_nrel(a: &NRelCategory, b: &NRelCategory) -> bool {
    let (x, y) = (a.ambient(), b.ambient());
    a.n() == b.n()
        && x.object_count() == y.object_count()
        && x.arrow_count() == y.arrow_count()
        && x.arrow_ids().all(|f| x.arrow(f) == y.arrow(f) && a.tags(f) == b.tags(f))
        && x.objects().all(|o| x.identity(o) == y.identity(o))
        && x.composable_pairs().all(|(f, g)| y.try_compose(f, g) == Some(x.compose(f, g)))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AdjunctionCheck {
    /// Relative functors `embed C → D`.
    pub left: usize,
    /// Relative functors `C → restrict D`.
    pub right: usize,
    pub bijective: bool,
}

/// Compares `map(embed C, D)` with `map(C, restrict D)` through the inclusion
/// `restrict D → D`.
pub fn adjunction_check(c: &NRelCategory, d: &NRelCategory, max_nodes: u64) -> Result<AdjunctionCheck> {
    if d.n() != c.n() + 1 {
        return Err(Error::usage("D must have degree one more than C"));
    }
    let mut left = HashSet::new();
    search_relative_functors(&embed(c), d, max_nodes, &mut |f| {
        left.insert(f.clone());
    })?;
    let (r, kept) = restrict(d)?;
    let mut images = HashSet::new();
    let mut right = 0;
    search_relative_functors(c, &r, max_nodes, &mut |f| {
        right += 1;
        images.insert(Functor {
            object_map: f.object_map.clone(),
            arrow_map: f.arrow_map.iter().map(|&a| kept[a]).collect(),
        });
    })?;
    Ok(AdjunctionCheck {
        left: left.len(),
        right,
        bijective: images.len() == right && images == left,
    })
}

/// A zigzag type: the orientation of each position.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "TypeJson", try_from = "TypeJson")]
pub struct ZigzagType {
    forward: Vec<bool>,
}

#[derive(Serialize, Deserialize)]
struct TypeJson {
    plus: Vec<usize>,
    minus: Vec<usize>,
}

impl From<ZigzagType> for TypeJson {
    fn from(t: ZigzagType) -> Self {
        TypeJson {
            plus: t.plus(),
            minus: t.minus(),
        }
    }
}

impl TryFrom<TypeJson> for ZigzagType {
    type Error = Error;

    fn try_from(j: TypeJson) -> Result<Self> {
        ZigzagType::from_sets(&j.plus, &j.minus)
    }
}

impl ZigzagType {
    pub fn new(forward: Vec<bool>) -> Self {
        ZigzagType { forward }
    }

    /// From the 1-based sets `T₊` and `T₋`.
    pub fn from_sets(plus: &[usize], minus: &[usize]) -> Result<Self> {
        let m = plus.len() + minus.len();
        let mut forward = vec![None; m];
        for (set, dir) in [(plus, true), (minus, false)] {
            for &i in set {
                match forward.get_mut(i.wrapping_sub(1)) {
                    Some(slot @ None) => *slot = Some(dir),
                    _ => return Err(Error::usage("T₊ and T₋ must partition {1, …, m}")),
                }
            }
        }
        Ok(ZigzagType {
            forward: forward.into_iter().map(|d| d.expect("filled")).collect(),
        })
    }

    pub fn len(&self) -> usize {
        self.forward.len()
    }

    pub fn is_empty(&self) -> bool {
        self.forward.is_empty()
    }

    /// Orientation of position `i` (0-based).
    pub fn is_forward(&self, i: usize) -> bool {
        self.forward[i]
    }

    pub fn plus(&self) -> Vec<usize> {
        (1..=self.len()).filter(|&i| self.forward[i - 1]).collect()
    }

    pub fn minus(&self) -> Vec<usize> {
        (1..=self.len()).filter(|&i| !self.forward[i - 1]).collect()
    }

    /// All types of length `≤ max_len`, shortest first.
    pub fn all(max_len: usize) -> Vec<ZigzagType> {
        let mut out = Vec::new();
        for m in 0..=max_len {
            for bits in 0..1usize << m {
                out.push(ZigzagType::new((0..m).map(|i| bits >> (m - 1 - i) & 1 == 0).collect()));
            }
        }
        out
    }

    pub fn concat(&self, other: &ZigzagType) -> ZigzagType {
        ZigzagType::new(self.forward.iter().chain(&other.forward).copied().collect())
    }
}

impl fmt::Display for ZigzagType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for &d in &self.forward {
            write!(f, "{}", if d { '+' } else { '-' })?;
        }
        write!(f, "]")
    }
}

/// The category of types up to a length bound. Arrow `a` is the weakly
/// monotone map `maps[a]` (0-based values).
#[derive(Clone, Debug)]
pub struct TypeCategory {
    pub category: ExplicitCategory,
    pub types: Vec<ZigzagType>,
    pub maps: Vec<Vec<usize>>,
}

impl TypeCategory {
    pub fn find(&self, t: &ZigzagType) -> Option<ObjId> {
        self.types.iter().position(|u| u == t)
    }
}

fn monotone_maps(m: usize, target: usize) -> Vec<Vec<usize>> {
    fn go(m: usize, target: usize, low: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == m {
            out.push(cur.clone());
            return;
        }
        for v in low..target {
            cur.push(v);
            go(m, target, v, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(m, target, 0, &mut Vec::new(), &mut out);
    out
}

pub fn type_category(max_len: usize) -> TypeCategory {
    let types = ZigzagType::all(max_len);
    let mut arrows = Vec::new();
    let mut maps = Vec::new();
    let mut lookup: HashMap<(ObjId, ObjId, Vec<usize>), ArrowId> = HashMap::new();
    for (s, ts) in types.iter().enumerate() {
        for (t, tt) in types.iter().enumerate() {
            for map in monotone_maps(ts.len(), tt.len()) {
                if (0..ts.len()).all(|i| ts.is_forward(i) == tt.is_forward(map[i])) {
                    let vals: Vec<String> = map.iter().map(|v| (v + 1).to_string()).collect();
                    lookup.insert((s, t, map.clone()), arrows.len());
                    arrows.push(Arrow {
                        name: format!("{ts}→{tt}:{}", vals.join(",")),
                        src: s,
                        tgt: t,
                    });
                    maps.push(map);
                }
            }
        }
    }
    let identities = types
        .iter()
        .enumerate()
        .map(|(o, t)| lookup[&(o, o, (0..t.len()).collect())])
        .collect();
    let mut table = HashMap::new();
    for (f, af) in arrows.iter().enumerate() {
        for (g, ag) in arrows.iter().enumerate() {
            if af.tgt == ag.src {
                let composite = maps[f].iter().map(|&v| maps[g][v]).collect();
                table.insert((f, g), lookup[&(af.src, ag.tgt, composite)]);
            }
        }
    }
    let names = types.iter().map(|t| t.to_string()).collect();
    TypeCategory {
        category: ExplicitCategory::new(names, arrows, identities, Composition::Table(table)),
        types,
        maps,
    }
}

/// A zigzag `X — ⋯ — Y`. A backward arrow at position `i` points from the
/// node after it to the node before it.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Zigzag {
    #[serde(rename = "type")]
    pub ty: ZigzagType,
    pub from: ObjId,
    pub to: ObjId,
    pub arrows: Vec<ArrowId>,
}

impl Zigzag {
    /// The `m + 1` nodes, or `None` if the arrows do not chain.
    pub fn nodes(&self, c: &ExplicitCategory) -> Option<Vec<ObjId>> {
        if self.arrows.len() != self.ty.len() {
            return None;
        }
        let mut nodes = vec![self.from];
        for (i, &a) in self.arrows.iter().enumerate() {
            let prev = *nodes.last().expect("nonempty");
            let (start, next) = if self.ty.is_forward(i) {
                (c.src(a), c.tgt(a))
            } else {
                (c.tgt(a), c.src(a))
            };
            if start != prev {
                return None;
            }
            nodes.push(next);
        }
        (*nodes.last().expect("nonempty") == self.to).then_some(nodes)
    }

    pub fn is_valid(&self, c: &NRelCategory) -> bool {
        let bar = bar_arrows(c);
        self.nodes(c.ambient()).is_some()
            && (0..self.ty.len()).all(|i| self.ty.is_forward(i) || bar.contains(&self.arrows[i]))
    }

    pub fn identity(x: ObjId) -> Zigzag {
        Zigzag {
            ty: ZigzagType::new(Vec::new()),
            from: x,
            to: x,
            arrows: Vec::new(),
        }
    }

    pub fn display(&self, c: &ExplicitCategory) -> String {
        let mut s = c.object_name(self.from).to_string();
        for (i, &a) in self.arrows.iter().enumerate() {
            let arrow = if self.ty.is_forward(i) { "→" } else { "←" };
            let next = if self.ty.is_forward(i) { c.tgt(a) } else { c.src(a) };
            s.push_str(&format!(" {arrow}{} {}", c.arrow_name(a), c.object_name(next)));
        }
        s
    }
}

/// Concatenation of zigzags `X — Y` and `Y — Z`.
pub fn enriched_compose(first: &Zigzag, second: &Zigzag) -> Result<Zigzag> {
    if first.to != second.from {
        return Err(Error::usage("zigzag endpoints do not match"));
    }
    Ok(Zigzag {
        ty: first.ty.concat(&second.ty),
        from: first.from,
        to: second.to,
        arrows: first.arrows.iter().chain(&second.arrows).copied().collect(),
    })
}

/// All zigzags of type `ty` from `x` to `y` with backward arrows in `ā`.
pub fn enumerate_zigzags(c: &NRelCategory, x: ObjId, y: ObjId, ty: &ZigzagType) -> Vec<Zigzag> {
    let amb = c.ambient();
    let bar = bar_arrows(c);
    let mut out = Vec::new();
    let mut stack: Vec<(ObjId, Vec<ArrowId>)> = vec![(x, Vec::new())];
    while let Some((node, arrows)) = stack.pop() {
        let i = arrows.len();
        if i == ty.len() {
            if node == y {
                out.push(Zigzag {
                    ty: ty.clone(),
                    from: x,
                    to: y,
                    arrows,
                });
            }
            continue;
        }
        let steps: Vec<(ArrowId, ObjId)> = if ty.is_forward(i) {
            amb.outgoing(node).iter().map(|&a| (a, amb.tgt(a))).collect()
        } else {
            amb.incoming(node)
                .iter()
                .filter(|a| bar.contains(a))
                .map(|&a| (a, amb.src(a)))
                .collect()
        };
        for (a, next) in steps.into_iter().rev() {
            let mut more = arrows.clone();
            more.push(a);
            stack.push((next, more));
        }
    }
    out
}

/// A ladder between zigzags of one type: verticals at the interior nodes.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Ladder {
    pub src: ObjId,
    pub tgt: ObjId,
    pub verticals: Vec<ArrowId>,
}

/// The n-relative arrow category `C^T(X, Y)` for `C` of degree `n + 1`.
#[derive(Clone, Debug)]
pub struct ArrowCategory {
    pub ty: ZigzagType,
    pub from: ObjId,
    pub to: ObjId,
    pub zigzags: Vec<Zigzag>,
    pub ladders: Vec<Ladder>,
    pub nrel: NRelCategory,
    zigzag_index: HashMap<Zigzag, ObjId>,
    ladder_index: HashMap<Ladder, ArrowId>,
}

impl ArrowCategory {
    pub fn zigzag(&self, z: &Zigzag) -> Option<ObjId> {
        self.zigzag_index.get(z).copied()
    }

    pub fn ladder(&self, l: &Ladder) -> Option<ArrowId> {
        self.ladder_index.get(l).copied()
    }
}

fn ladder_commutes(c: &ExplicitCategory, top: &Zigzag, bottom: &Zigzag, verticals: &[ArrowId]) -> bool {
    let m = top.ty.len();
    let full: Vec<ArrowId> = std::iter::once(c.identity(top.from))
        .chain(verticals.iter().copied())
        .chain(std::iter::once(c.identity(top.to)))
        .collect();
    (0..m).all(|i| {
        let (f, g) = (top.arrows[i], bottom.arrows[i]);
        if top.ty.is_forward(i) {
            c.compose(f, full[i + 1]) == c.compose(full[i], g)
        } else {
            c.compose(f, full[i]) == c.compose(full[i + 1], g)
        }
    })
}

pub fn arrow_category(c: &NRelCategory, x: ObjId, y: ObjId, ty: &ZigzagType) -> Result<ArrowCategory> {
    if c.n() < 2 {
        return Err(Error::usage("arrow categories need degree at least 2"));
    }
    let amb = c.ambient();
    let n = c.n() - 1;
    let zigzags = enumerate_zigzags(c, x, y, ty);
    let zigzag_index: HashMap<Zigzag, ObjId> = zigzags.iter().cloned().enumerate().map(|(i, z)| (z, i)).collect();
    let nodes: Vec<Vec<ObjId>> = zigzags.iter().map(|z| z.nodes(amb).expect("enumerated")).collect();
    let interior = ty.len().saturating_sub(1);
    // ladders whose verticals all satisfy `keep`
    let ladders_in = |keep: &dyn Fn(ArrowId) -> bool| -> Vec<Ladder> {
        let mut out = Vec::new();
        for (s, top) in zigzags.iter().enumerate() {
            for (t, bottom) in zigzags.iter().enumerate() {
                let choices: Vec<Vec<ArrowId>> = (1..=interior)
                    .map(|k| amb.hom(nodes[s][k], nodes[t][k]).iter().copied().filter(|&a| keep(a)).collect())
                    .collect();
                let mut current = vec![0usize; interior];
                'outer: loop {
                    if choices.iter().all(|ch| !ch.is_empty()) {
                        let verticals: Vec<ArrowId> = (0..interior).map(|k| choices[k][current[k]]).collect();
                        if ladder_commutes(amb, top, bottom, &verticals) {
                            out.push(Ladder { src: s, tgt: t, verticals });
                        }
                    } else {
                        break;
                    }
                    for k in (0..interior).rev() {
                        current[k] += 1;
                        if current[k] < choices[k].len() {
                            continue 'outer;
                        }
                        current[k] = 0;
                    }
                    break;
                }
            }
        }
        out
    };
    let compose = |l: &Ladder, r: &Ladder| Ladder {
        src: l.src,
        tgt: r.tgt,
        verticals: l.verticals.iter().zip(&r.verticals).map(|(&a, &b)| amb.compose(a, b)).collect(),
    };
    let mut set: HashSet<Ladder> = HashSet::new();
    for i in 1..=n {
        set.extend(ladders_in(&|a| c.in_v(i, a)));
    }
    // close under componentwise composition
    let mut frontier: Vec<Ladder> = set.iter().cloned().collect();
    while !frontier.is_empty() {
        let all: Vec<Ladder> = set.iter().cloned().collect();
        let mut next = Vec::new();
        for f in &frontier {
            for g in &all {
                for h in [(f, g), (g, f)] {
                    if h.0.tgt == h.1.src {
                        let k = compose(h.0, h.1);
                        if !set.contains(&k) {
                            set.insert(k.clone());
                            next.push(k);
                        }
                    }
                }
            }
        }
        frontier = next;
    }
    let mut ladders: Vec<Ladder> = set.into_iter().collect();
    ladders.sort_by(|a, b| (a.src, a.tgt, &a.verticals).cmp(&(b.src, b.tgt, &b.verticals)));
    let ladder_index: HashMap<Ladder, ArrowId> = ladders.iter().cloned().enumerate().map(|(i, l)| (l, i)).collect();
    let identities: Vec<ArrowId> = (0..zigzags.len())
        .map(|s| {
            ladder_index[&Ladder {
                src: s,
                tgt: s,
                verticals: (1..=interior).map(|k| amb.identity(nodes[s][k])).collect(),
            }]
        })
        .collect();
    let mut table = HashMap::new();
    let mut outgoing: Vec<Vec<ArrowId>> = vec![Vec::new(); zigzags.len()];
    for (i, l) in ladders.iter().enumerate() {
        outgoing[l.src].push(i);
    }
    for (f, lf) in ladders.iter().enumerate() {
        for &g in &outgoing[lf.tgt] {
            table.insert((f, g), ladder_index[&compose(lf, &ladders[g])]);
        }
    }
    let arrows = ladders
        .iter()
        .map(|l| Arrow {
            name: format!(
                "({})",
                l.verticals.iter().map(|&a| amb.arrow_name(a)).collect::<Vec<_>>().join(",")
            ),
            src: l.src,
            tgt: l.tgt,
        })
        .collect();
    let names = zigzags.iter().map(|z| z.display(amb)).collect();
    let category = ExplicitCategory::new(names, arrows, identities, Composition::Table(table));
    let all_in = |pred: &dyn Fn(ArrowId) -> bool| -> Vec<bool> {
        ladders.iter().map(|l| l.verticals.iter().all(|&a| pred(a))).collect()
    };
    let v = (1..=n).map(|i| all_in(&|a| c.in_v(i, a))).collect();
    let w = all_in(&|a| c.in_w(a));
    Ok(ArrowCategory {
        ty: ty.clone(),
        from: x,
        to: y,
        zigzags,
        ladders,
        nrel: NRelCategory::from_masks(n, category, v, w),
        zigzag_index,
        ladder_index,
    })
}

/// Node `j` of `t_* Z` is node `ν(j) = #{i : t(i) < j}` of `Z`.
fn node_map(t: &[usize], target_len: usize) -> Vec<usize> {
    (0..=target_len).map(|j| t.iter().filter(|&&v| v < j).count()).collect()
}

/// `t_* Z`: each arrow is the composite of its fiber, or an identity.
pub fn push_zigzag(c: &ExplicitCategory, z: &Zigzag, t: &[usize], target: &ZigzagType) -> Zigzag {
    let nodes = z.nodes(c).expect("valid zigzag");
    let nu = node_map(t, target.len());
    let arrows = (0..target.len())
        .map(|j| {
            let (lo, hi) = (nu[j], nu[j + 1]);
            if lo == hi {
                c.identity(nodes[lo])
            } else if target.is_forward(j) {
                c.compose_all(&z.arrows[lo..hi])
            } else {
                let reversed: Vec<ArrowId> = z.arrows[lo..hi].iter().rev().copied().collect();
                c.compose_all(&reversed)
            }
        })
        .collect();
    Zigzag {
        ty: target.clone(),
        from: z.from,
        to: z.to,
        arrows,
    }
}

/// `t_*: C^T(X, Y) → C^{T'}(X, Y)`.
pub fn pushforward(c: &NRelCategory, source: &ArrowCategory, target: &ArrowCategory, t: &[usize]) -> Result<Functor> {
    let amb = c.ambient();
    if t.len() != source.ty.len()
        || t.windows(2).any(|w| w[0] > w[1])
        || t.iter().enumerate().any(|(i, &v)| v >= target.ty.len() || source.ty.is_forward(i) != target.ty.is_forward(v))
    {
        return Err(Error::usage("not a map of types"));
    }
    let missing = || Error::Invalid(vec!["pushforward leaves the arrow category".into()]);
    let object_map = source
        .zigzags
        .iter()
        .map(|z| target.zigzag(&push_zigzag(amb, z, t, &target.ty)).ok_or_else(missing))
        .collect::<Result<Vec<_>>>()?;
    let nu = node_map(t, target.ty.len());
    let m = source.ty.len();
    let arrow_map = source
        .ladders
        .iter()
        .map(|l| {
            let nodes = source.zigzags[l.src].nodes(amb).expect("valid");
            let vertical = |k: usize| {
                if k == 0 || k == m {
                    amb.identity(nodes[k])
                } else {
                    l.verticals[k - 1]
                }
            };
            let pushed = Ladder {
                src: object_map[l.src],
                tgt: object_map[l.tgt],
                verticals: (1..target.ty.len()).map(|j| vertical(nu[j])).collect(),
            };
            target.ladder(&pushed).ok_or_else(missing)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Functor { object_map, arrow_map })
}

/// `C^{(T)}(X, Y)` at a length bound: arrow categories and pushforwards.
#[derive(Clone, Debug)]
pub struct TypeDiagram {
    pub types: TypeCategory,
    pub categories: Vec<ArrowCategory>,
    pub pushforwards: Vec<Functor>,
}

pub fn type_diagram(c: &NRelCategory, x: ObjId, y: ObjId, max_len: usize) -> Result<TypeDiagram> {
    let types = type_category(max_len);
    let categories = types
        .types
        .iter()
        .map(|t| arrow_category(c, x, y, t))
        .collect::<Result<Vec<_>>>()?;
    let tc = &types.category;
    let pushforwards = tc
        .arrow_ids()
        .map(|a| pushforward(c, &categories[tc.src(a)], &categories[tc.tgt(a)], &types.maps[a]))
        .collect::<Result<Vec<_>>>()?;
    Ok(TypeDiagram {
        types,
        categories,
        pushforwards,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FunctorialityReport {
    pub type_arrows: usize,
    pub composable_pairs: usize,
    pub identities: bool,
    pub composition: bool,
    /// Every `t_*` is a relative functor.
    pub relative: bool,
}

impl FunctorialityReport {
    pub fn holds(&self) -> bool {
        self.identities && self.composition && self.relative
    }
}

pub fn pushforward_functoriality(d: &TypeDiagram) -> FunctorialityReport {
    let tc = &d.types.category;
    let identities = tc.objects().all(|o| d.pushforwards[tc.identity(o)] == Functor::identity(d.categories[o].nrel.ambient()));
    let mut composable_pairs = 0;
    let mut composition = true;
    for (f, g) in tc.composable_pairs() {
        composable_pairs += 1;
        composition &= d.pushforwards[tc.compose(f, g)] == d.pushforwards[f].then(&d.pushforwards[g]);
    }
    let relative = tc
        .arrow_ids()
        .all(|a| is_relative_functor(&d.pushforwards[a], &d.categories[tc.src(a)].nrel, &d.categories[tc.tgt(a)].nrel));
    FunctorialityReport {
        type_arrows: tc.arrow_count(),
        composable_pairs,
        identities,
        composition,
        relative,
    }
}

/// `Gr C^{(T)}(X, Y)`: objects `(T, Z)`, arrows `(t, z)` with `z: t_*Z → Z'`.
#[derive(Clone, Debug)]
pub struct Grothendieck {
    pub diagram: TypeDiagram,
    /// `(type, zigzag)` per object.
    pub objects: Vec<(ObjId, ObjId)>,
    /// `(type arrow, source zigzag, ladder in the target arrow category)`.
    pub arrows: Vec<(ArrowId, ObjId, ArrowId)>,
    pub nrel: NRelCategory,
    object_index: HashMap<(ObjId, ObjId), ObjId>,
    arrow_index: HashMap<(ArrowId, ObjId, ArrowId), ArrowId>,
}

impl Grothendieck {
    pub fn object(&self, ty: ObjId, z: ObjId) -> Option<ObjId> {
        self.object_index.get(&(ty, z)).copied()
    }

    pub fn arrow(&self, t: ArrowId, z: ObjId, ladder: ArrowId) -> Option<ArrowId> {
        self.arrow_index.get(&(t, z, ladder)).copied()
    }

    pub fn zigzag(&self, o: ObjId) -> &Zigzag {
        let (ty, z) = self.objects[o];
        &self.diagram.categories[ty].zigzags[z]
    }
}

/// Composition `(t', z')(t, z) = (t't, z' ∘ t'_*(z))`. A pair `(t, z)` lies
/// in `v_i` or `w` when `z` does.
pub fn grothendieck(c: &NRelCategory, x: ObjId, y: ObjId, max_len: usize) -> Result<Grothendieck> {
    let diagram = type_diagram(c, x, y, max_len)?;
    let tc = &diagram.types.category;
    let mut objects = Vec::new();
    for (ty, cat) in diagram.categories.iter().enumerate() {
        objects.extend((0..cat.zigzags.len()).map(|z| (ty, z)));
    }
    let object_index: HashMap<(ObjId, ObjId), ObjId> = objects.iter().copied().enumerate().map(|(i, o)| (o, i)).collect();
    let mut arrows = Vec::new();
    let mut records = Vec::new();
    for t in tc.arrow_ids() {
        let (s, u) = (tc.src(t), tc.tgt(t));
        let target = diagram.categories[u].nrel.ambient();
        for z in 0..diagram.categories[s].zigzags.len() {
            let pushed = diagram.pushforwards[t].object_map[z];
            for &l in target.outgoing(pushed) {
                records.push((t, z, l));
                arrows.push(Arrow {
                    name: format!(
                        "({},{},{})",
                        tc.arrow_name(t),
                        diagram.categories[s].nrel.ambient().object_name(z),
                        target.arrow_name(l)
                    ),
                    src: object_index[&(s, z)],
                    tgt: object_index[&(u, target.tgt(l))],
                });
            }
        }
    }
    let arrow_index: HashMap<(ArrowId, ObjId, ArrowId), ArrowId> =
        records.iter().copied().enumerate().map(|(i, r)| (r, i)).collect();
    let identities = objects
        .iter()
        .map(|&(ty, z)| {
            let amb = diagram.categories[ty].nrel.ambient();
            arrow_index[&(tc.identity(ty), z, amb.identity(z))]
        })
        .collect();
    let mut outgoing: Vec<Vec<ArrowId>> = vec![Vec::new(); objects.len()];
    for (i, a) in arrows.iter().enumerate() {
        outgoing[a.src].push(i);
    }
    let mut table = HashMap::new();
    for (f, &(t, z, l)) in records.iter().enumerate() {
        for &g in &outgoing[arrows[f].tgt] {
            let (t2, _, l2) = records[g];
            let cat = diagram.categories[tc.tgt(t2)].nrel.ambient();
            let ladder = cat.compose(diagram.pushforwards[t2].arrow_map[l], l2);
            table.insert((f, g), arrow_index[&(tc.compose(t, t2), z, ladder)]);
        }
    }
    let names = objects
        .iter()
        .map(|&(ty, z)| format!("{}:{}", diagram.types.types[ty], diagram.categories[ty].nrel.ambient().object_name(z)))
        .collect();
    let category = ExplicitCategory::new(names, arrows, identities, Composition::Table(table));
    let n = c.n() - 1;
    let tag_of = |pred: &dyn Fn(&NRelCategory, ArrowId) -> bool| -> Vec<bool> {
        records
            .iter()
            .map(|&(t, _, l)| pred(&diagram.categories[tc.tgt(t)].nrel, l))
            .collect()
    };
    let v = (1..=n).map(|i| tag_of(&|r, l| r.in_v(i, l))).collect();
    let w = tag_of(&|r, l| r.in_w(l));
    Ok(Grothendieck {
        nrel: NRelCategory::from_masks(n, category, v, w),
        objects,
        arrows: records,
        object_index,
        arrow_index,
        diagram,
    })
}

/// Composition `Gr(X, Y) × Gr(Y, Z) → Gr(X, Z)` by concatenating zigzags,
/// type maps and ladders (identity vertical at `Y`). `xz` needs a length
/// bound at least the sum of the other two.
pub fn composition_functor(c: &NRelCategory, xy: &Grothendieck, yz: &Grothendieck, xz: &Grothendieck) -> Result<Functor> {
    let amb = c.ambient();
    let (ta, tb, tc) = (&xy.diagram.types, &yz.diagram.types, &xz.diagram.types);
    let missing = || Error::usage("Gr(X, Z) has too small a length bound");
    let concat_object = |p: ObjId, q: ObjId| -> Result<ObjId> {
        let z = enriched_compose(xy.zigzag(p), yz.zigzag(q))?;
        let ty = tc.find(&z.ty).ok_or_else(missing)?;
        let zi = xz.diagram.categories[ty].zigzag(&z).ok_or_else(missing)?;
        xz.object(ty, zi).ok_or_else(missing)
    };
    let (ca, cb) = (xy.nrel.ambient(), yz.nrel.ambient());
    let mut object_map = Vec::with_capacity(ca.object_count() * cb.object_count());
    for p in ca.objects() {
        for q in cb.objects() {
            object_map.push(concat_object(p, q)?);
        }
    }
    let mut arrow_map = Vec::with_capacity(ca.arrow_count() * cb.arrow_count());
    for f in ca.arrow_ids() {
        for g in cb.arrow_ids() {
            let (t1, _, l1) = xy.arrows[f];
            let (t2, _, l2) = yz.arrows[g];
            let (s1, u1, s2, u2) = (
                ta.category.src(t1),
                ta.category.tgt(t1),
                tb.category.src(t2),
                tb.category.tgt(t2),
            );
            let len1t = ta.types[u1].len();
            let map: Vec<usize> = ta.maps[t1]
                .iter()
                .copied()
                .chain(tb.maps[t2].iter().map(|&v| v + len1t))
                .collect();
            let src_ty = ta.types[s1].concat(&tb.types[s2]);
            let tgt_ty = ta.types[u1].concat(&tb.types[u2]);
            let (s, u) = (tc.find(&src_ty).ok_or_else(missing)?, tc.find(&tgt_ty).ok_or_else(missing)?);
            let t = tc
                .category
                .hom(s, u)
                .iter()
                .copied()
                .find(|&a| tc.maps[a] == map)
                .ok_or_else(missing)?;
            let source = object_map[ca.src(f) * cb.object_count() + cb.src(g)];
            let (_, z) = xz.objects[source];
            let (lad1, lad2) = (&xy.diagram.categories[u1].ladders[l1], &yz.diagram.categories[u2].ladders[l2]);
            let cat = &xz.diagram.categories[tc.category.tgt(t)];
            let target_obj = object_map[ca.tgt(f) * cb.object_count() + cb.tgt(g)];
            let pushed_src = xz.diagram.pushforwards[t].object_map[z];
            let mut verticals = lad1.verticals.clone();
            if len1t > 0 && !tb.types[u2].is_empty() {
                verticals.push(amb.identity(xy.zigzag(ca.src(f)).to));
            }
            verticals.extend(&lad2.verticals);
            let ladder = Ladder {
                src: pushed_src,
                tgt: xz.objects[target_obj].1,
                verticals,
            };
            let l = cat.ladder(&ladder).ok_or_else(missing)?;
            arrow_map.push(xz.arrow(t, z, l).ok_or_else(missing)?);
        }
    }
    Ok(Functor { object_map, arrow_map })
}

/// Whether the composition of the enrichment is a map of n-relative
/// categories on the given instance.
pub fn composition_is_relative(c: &NRelCategory, xy: &Grothendieck, yz: &Grothendieck, xz: &Grothendieck) -> Result<bool> {
    let f = composition_functor(c, xy, yz, xz)?;
    let product = product_nrel(&[xy.nrel.clone(), yz.nrel.clone()])?;
    Ok(is_relative_functor(&f, &product, &xz.nrel))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::nrel_corpus;
    use crate::fincat::{chain, validate_category};
    use crate::nerve::DEFAULT_MAX_NODES;
    use crate::prescat::Budget;
    use crate::relcat::{chain_v, chain_w, make_nrelcat, validate_nrel};

    fn square() -> NRelCategory {
        embed(&product_nrel(&[chain_v(1, 1, 1), chain_w(1, 1)]).unwrap())
    }

    #[test]
    fn restrict_inverts_embed() {
        for entry in nrel_corpus() {
            let e = embed(&entry.nrel);
            assert_eq!(e.n(), entry.nrel.n() + 1);
            let (r, kept) = restrict(&e).unwrap();
            assert!(same_nrel(&r, &entry.nrel), "{}", entry.name);
            assert_eq!(kept, entry.nrel.ambient().arrow_ids().collect::<Vec<_>>());
        }
        for entry in nrel_corpus().into_iter().take(8) {
            assert!(validate_nrel(&embed(&entry.nrel), Budget::default()).unwrap().is_valid(), "{}", entry.name);
        }
        let e = embed(&chain_v(1, 1, 1));
        let amb = e.ambient();
        assert!(amb.arrow_ids().all(|a| e.in_v(2, a) == amb.is_identity(a) && e.in_w(a) == amb.is_identity(a)));
        assert!(restrict(&chain_w(1, 1)).is_err());
    }

    #[test]
    fn restrict_drops_the_last_layer() {
        let c = chain(1);
        let all: Vec<ArrowId> = c.arrow_ids().collect();
        let ids: Vec<ArrowId> = c.objects().map(|o| c.identity(o)).collect();
        let d = make_nrelcat(2, c, vec![ids.clone(), all], ids).unwrap();
        let (r, _) = restrict(&d).unwrap();
        assert_eq!(r.ambient().arrow_count(), 2);
        assert!(r.ambient().arrow_ids().all(|a| r.ambient().is_identity(a)));
    }

    #[test]
    fn adjunction_on_small_instances() {
        let left = [chain_v(1, 1, 1), chain_w(1, 1), chain_v(2, 1, 1)];
        let right: Vec<NRelCategory> = nrel_corpus().into_iter().filter(|e| e.nrel.n() == 2).map(|e| e.nrel).collect();
        for c in &left {
            for d in &right {
                let r = adjunction_check(c, d, DEFAULT_MAX_NODES).unwrap();
                assert!(r.bijective, "{r:?}");
            }
        }
    }

    // weakly monotone maps respecting orientation, by listing all functions
    fn oracle_type_arrows(s: &ZigzagType, t: &ZigzagType) -> usize {
        let (m, k) = (s.len(), t.len());
        (0..k.pow(m as u32))
            .map(|code| (0..m).map(|i| code / k.pow(i as u32) % k).collect::<Vec<_>>())
            .filter(|f| f.windows(2).all(|w| w[0] <= w[1]) && (0..m).all(|i| s.is_forward(i) == t.is_forward(f[i])))
            .count()
    }

    #[test]
    fn types() {
        let tc = type_category(2);
        assert_eq!(tc.types.len(), 7);
        assert!(validate_category(&tc.category).is_valid());
        let plus = tc.find(&ZigzagType::from_sets(&[1], &[]).unwrap()).unwrap();
        let plus2 = tc.find(&ZigzagType::from_sets(&[1, 2], &[]).unwrap()).unwrap();
        let minus = tc.find(&ZigzagType::from_sets(&[], &[1]).unwrap()).unwrap();
        assert_eq!(tc.category.hom(plus, plus2).len(), 2);
        assert!(tc.category.hom(plus, minus).is_empty());
        let tc3 = type_category(3);
        for (s, ts) in tc3.types.iter().enumerate() {
            for (t, tt) in tc3.types.iter().enumerate() {
                assert_eq!(tc3.category.hom(s, t).len(), oracle_type_arrows(ts, tt), "{ts} {tt}");
            }
        }
        assert!(ZigzagType::from_sets(&[1], &[1]).is_err());
        assert!(ZigzagType::from_sets(&[2], &[]).is_err());
    }

    #[test]
    fn arrow_categories() {
        let e = embed(&chain_v(1, 1, 1));
        let empty = ZigzagType::new(Vec::new());
        assert_eq!(arrow_category(&e, 0, 0, &empty).unwrap().zigzags.len(), 1);
        assert_eq!(arrow_category(&e, 0, 1, &empty).unwrap().zigzags.len(), 0);
        let a = arrow_category(&e, 0, 1, &ZigzagType::new(vec![true])).unwrap();
        assert_eq!(a.zigzags.len(), 1);
        assert_eq!(a.nrel.ambient().arrow_count(), 1);
        let b = arrow_category(&e, 0, 1, &ZigzagType::new(vec![false])).unwrap();
        assert!(b.zigzags.is_empty());
        let sq = square();
        for ty in ZigzagType::all(3) {
            let a = arrow_category(&sq, 0, 3, &ty).unwrap();
            assert!(validate_category(a.nrel.ambient()).is_valid(), "{ty}");
            assert!(a.nrel.structure_problems().is_empty(), "{ty}");
            assert!(a.zigzags.iter().all(|z| z.is_valid(&sq)));
        }
    }

    #[test]
    fn pushforwards() {
        let sq = square();
        for max_len in 0..=3 {
            let d = type_diagram(&sq, 0, 3, max_len).unwrap();
            let r = pushforward_functoriality(&d);
            assert!(r.holds(), "{max_len}: {r:?}");
        }
        let amb = sq.ambient();
        let (f, g) = (amb.hom(0, 1)[0], amb.hom(1, 3)[0]);
        let two = Zigzag {
            ty: ZigzagType::new(vec![true, true]),
            from: 0,
            to: 3,
            arrows: vec![f, g],
        };
        let one = push_zigzag(amb, &two, &[0, 0], &ZigzagType::new(vec![true]));
        assert_eq!(one.arrows, vec![amb.compose(f, g)]);
        let padded = push_zigzag(amb, &two, &[0, 2], &ZigzagType::new(vec![true, false, true]));
        assert_eq!(padded.arrows, vec![f, amb.identity(1), g]);
    }

    #[test]
    fn grothendieck_constructions() {
        let e = embed(&chain_v(1, 1, 1));
        let gr = grothendieck(&e, 0, 1, 1).unwrap();
        assert_eq!(gr.nrel.ambient().object_count(), 1);
        let sq = square();
        for max_len in 0..=2 {
            let gr = grothendieck(&sq, 0, 3, max_len).unwrap();
            let amb = gr.nrel.ambient();
            assert!(validate_category(amb).is_valid());
            assert!(gr.nrel.structure_problems().is_empty());
            for o in amb.objects() {
                let (ty, z) = gr.objects[o];
                let cat = gr.diagram.categories[ty].nrel.ambient();
                let id = gr.arrow(gr.diagram.types.category.identity(ty), z, cat.identity(z)).unwrap();
                assert_eq!(amb.identity(o), id);
            }
        }
    }

    #[test]
    fn zigzag_composition() {
        let sq = square();
        let d = type_diagram(&sq, 0, 3, 2).unwrap();
        let zigzags: Vec<&Zigzag> = d.categories.iter().flat_map(|c| &c.zigzags).collect();
        let back = enumerate_zigzags(&sq, 3, 3, &ZigzagType::new(vec![false, true]));
        for z in &zigzags {
            assert_eq!(&enriched_compose(&Zigzag::identity(0), z).unwrap(), *z);
            assert_eq!(&enriched_compose(z, &Zigzag::identity(3)).unwrap(), *z);
            for b in &back {
                let zb = enriched_compose(z, b).unwrap();
                assert_eq!(zb.ty.len(), z.ty.len() + 2);
                assert!(zb.is_valid(&sq));
                for c in &back {
                    let left = enriched_compose(&zb, c).unwrap();
                    let right = enriched_compose(z, &enriched_compose(b, c).unwrap()).unwrap();
                    assert_eq!(left, right);
                }
            }
        }
        assert!(enriched_compose(zigzags[0], zigzags[0]).is_err());
        let json = serde_json::to_string(zigzags[0]).unwrap();
        assert!(json.contains("\"plus\""));
        assert_eq!(&serde_json::from_str::<Zigzag>(&json).unwrap(), zigzags[0]);
    }

    #[test]
    fn enriched_composition_functor() {
        let sq = square();
        let xy = grothendieck(&sq, 0, 1, 1).unwrap();
        let yz = grothendieck(&sq, 1, 3, 1).unwrap();
        let xz = grothendieck(&sq, 0, 3, 2).unwrap();
        let f = composition_functor(&sq, &xy, &yz, &xz).unwrap();
        let product = product_nrel(&[xy.nrel.clone(), yz.nrel.clone()]).unwrap();
        assert!(f.is_functor(product.ambient(), xz.nrel.ambient()));
        assert!(composition_is_relative(&sq, &xy, &yz, &xz).unwrap());
        let small = grothendieck(&sq, 0, 3, 1).unwrap();
        assert!(composition_functor(&sq, &xy, &yz, &small).is_err());
    }
}
