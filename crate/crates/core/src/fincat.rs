//! Explicit finite categories, functors between them, chains and products.
//!
//! Objects and arrows are addressed by dense indices ([`ObjId`], [`ArrowId`]);
//! every object and arrow also carries a unique string name which is what the
//! JSON format uses. Composition is written diagrammatically: `compose(f, g)`
//! is "first `f`, then `g`" and requires `tgt(f) == src(g)`.

use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type ObjId = usize;
pub type ArrowId = usize;

const UNSET: usize = usize::MAX;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arrow {
    pub name: String,
    pub src: ObjId,
    pub tgt: ObjId,
}

/// How composites are obtained.
#[derive(Clone)]
pub enum Composition {
    /// Total table over composable pairs, keyed `(first, second)`.
    Table(HashMap<(ArrowId, ArrowId), ArrowId>),
    /// Componentwise composition in a product; arrow `l * |arrows(right)| + r`.
    Product {
        left: Arc<ExplicitCategory>,
        right: Arc<ExplicitCategory>,
    },
    /// Composition computed by a rule; only called on composable pairs.
    Rule(Arc<dyn Fn(ArrowId, ArrowId) -> ArrowId + Send + Sync>),
}

impl fmt::Debug for Composition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Composition::Table(t) => write!(f, "Table({} entries)", t.len()),
            Composition::Product { .. } => write!(f, "Product"),
            Composition::Rule(_) => write!(f, "Rule"),
        }
    }
}

/// A finite category given by total data.
#[derive(Clone, Debug)]
pub struct ExplicitCategory {
    objects: Vec<String>,
    arrows: Vec<Arrow>,
    identities: Vec<ArrowId>,
    composition: Composition,
    homs: HashMap<(ObjId, ObjId), Vec<ArrowId>>,
    outgoing: Vec<Vec<ArrowId>>,
    incoming: Vec<Vec<ArrowId>>,
}

impl ExplicitCategory {
    /// Assembles a category from its parts. Laws are not checked here; see
    /// [`validate_category`].
    pub fn new(
        objects: Vec<String>,
        arrows: Vec<Arrow>,
        identities: Vec<ArrowId>,
        composition: Composition,
    ) -> Self {
        let mut homs: HashMap<(ObjId, ObjId), Vec<ArrowId>> = HashMap::new();
        let mut outgoing = vec![Vec::new(); objects.len()];
        let mut incoming = vec![Vec::new(); objects.len()];
        for (id, a) in arrows.iter().enumerate() {
            homs.entry((a.src, a.tgt)).or_default().push(id);
            outgoing[a.src].push(id);
            incoming[a.tgt].push(id);
        }
        ExplicitCategory {
            objects,
            arrows,
            identities,
            composition,
            homs,
            outgoing,
            incoming,
        }
    }

    /// Builds a category from names and a composition list `(f, g, g∘f)`.
    pub fn from_names(
        objects: &[&str],
        arrows: &[(&str, &str, &str)],
        identities: &[(&str, &str)],
        compose: &[(&str, &str, &str)],
    ) -> Result<Self> {
        let json = CategoryJson {
            objects: objects.iter().map(|s| s.to_string()).collect(),
            arrows: arrows
                .iter()
                .map(|(id, s, t)| ArrowJson {
                    id: id.to_string(),
                    src: s.to_string(),
                    tgt: t.to_string(),
                })
                .collect(),
            identities: identities
                .iter()
                .map(|(o, a)| (o.to_string(), a.to_string()))
                .collect(),
            compose: compose
                .iter()
                .map(|(f, g, h)| [f.to_string(), g.to_string(), h.to_string()])
                .collect(),
        };
        Self::from_json_value(&json)
    }

    pub fn object_count(&self) -> usize {
        self.objects.len()
    }

    pub fn arrow_count(&self) -> usize {
        self.arrows.len()
    }

    pub fn objects(&self) -> impl Iterator<Item = ObjId> {
        0..self.objects.len()
    }

    pub fn arrow_ids(&self) -> impl Iterator<Item = ArrowId> {
        0..self.arrows.len()
    }

    pub fn object_name(&self, o: ObjId) -> &str {
        &self.objects[o]
    }

    pub fn arrow(&self, a: ArrowId) -> &Arrow {
        &self.arrows[a]
    }

    pub fn arrow_name(&self, a: ArrowId) -> &str {
        &self.arrows[a].name
    }

    pub fn src(&self, a: ArrowId) -> ObjId {
        self.arrows[a].src
    }

    pub fn tgt(&self, a: ArrowId) -> ObjId {
        self.arrows[a].tgt
    }

    pub fn identity(&self, o: ObjId) -> ArrowId {
        self.identities[o]
    }

    pub fn is_identity(&self, a: ArrowId) -> bool {
        let arr = &self.arrows[a];
        arr.src == arr.tgt && self.identities[arr.src] == a
    }

    pub fn composition(&self) -> &Composition {
        &self.composition
    }

    pub fn hom(&self, x: ObjId, y: ObjId) -> &[ArrowId] {
        self.homs.get(&(x, y)).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn outgoing(&self, x: ObjId) -> &[ArrowId] {
        &self.outgoing[x]
    }

    pub fn incoming(&self, x: ObjId) -> &[ArrowId] {
        &self.incoming[x]
    }

    pub fn find_object(&self, name: &str) -> Option<ObjId> {
        self.objects.iter().position(|o| o == name)
    }

    pub fn find_arrow(&self, name: &str) -> Option<ArrowId> {
        self.arrows.iter().position(|a| a.name == name)
    }

    /// Composite of `f` then `g`, or `None` when they are not composable or
    /// the table has no entry.
    pub fn try_compose(&self, f: ArrowId, g: ArrowId) -> Option<ArrowId> {
        if self.arrows[f].tgt != self.arrows[g].src {
            return None;
        }
        match &self.composition {
            Composition::Table(t) => t.get(&(f, g)).copied(),
            Composition::Product { left, right } => {
                let nr = right.arrow_count();
                let (fl, fr) = (f / nr, f % nr);
                let (gl, gr) = (g / nr, g % nr);
                Some(left.try_compose(fl, gl)? * nr + right.try_compose(fr, gr)?)
            }
            Composition::Rule(rule) => Some(rule(f, g)),
        }
    }

    /// Composite of `f` then `g`.
    ///
    /// Panics when the pair is not composable; use [`Self::try_compose`]
    /// for unchecked input.
    pub fn compose(&self, f: ArrowId, g: ArrowId) -> ArrowId {
        self.try_compose(f, g).unwrap_or_else(|| {
            panic!(
                "arrows {} and {} are not composable",
                self.arrows[f].name, self.arrows[g].name
            )
        })
    }

    /// Composite of a nonempty composable sequence.
    pub fn compose_all(&self, path: &[ArrowId]) -> ArrowId {
        let mut acc = path[0];
        for &a in &path[1..] {
            acc = self.compose(acc, a);
        }
        acc
    }

    /// Iterates all composable pairs `(f, g)` with `tgt f = src g`.
    pub fn composable_pairs(&self) -> impl Iterator<Item = (ArrowId, ArrowId)> + '_ {
        self.arrows.iter().enumerate().flat_map(move |(f, a)| {
            self.outgoing[a.tgt].iter().map(move |&g| (f, g))
        })
    }

    /// Whether the category is a preorder with antisymmetry (at most one arrow
    /// per ordered pair, no nontrivial cycles).
    pub fn is_poset(&self) -> bool {
        self.homs.iter().all(|(&(x, y), hs)| {
            hs.len() == 1 && (x == y || self.hom(y, x).is_empty())
        })
    }

    /// The smallest set of arrows containing `seed` and all identities that is
    /// closed under composition.
    pub fn closure(&self, seed: impl IntoIterator<Item = ArrowId>) -> HashSet<ArrowId> {
        let mut set: HashSet<ArrowId> = self.identities.iter().copied().collect();
        set.extend(seed);
        let gen_set = set.clone();
        // every composite of generators is a right extension of its first letter
        let mut queue: VecDeque<ArrowId> = set.iter().copied().collect();
        while let Some(a) = queue.pop_front() {
            for &g in &self.outgoing[self.tgt(a)] {
                if !gen_set.contains(&g) {
                    continue;
                }
                let c = self.compose(a, g);
                if set.insert(c) {
                    queue.push_back(c);
                }
            }
        }
        set
    }

    /// Whether `arrows` contains every identity and is closed under composition.
    pub fn is_wide_subcategory(&self, arrows: &HashSet<ArrowId>) -> bool {
        self.identities.iter().all(|i| arrows.contains(i))
            && arrows.iter().all(|&f| {
                self.outgoing[self.tgt(f)]
                    .iter()
                    .filter(|g| arrows.contains(g))
                    .all(|&g| arrows.contains(&self.compose(f, g)))
            })
    }

    /// The wide subcategory on the given arrows, with arrows renumbered in
    /// their original order. Returns the subcategory and the map from new to
    /// old arrow ids.
    pub fn wide_subcategory(&self, arrows: &HashSet<ArrowId>) -> (ExplicitCategory, Vec<ArrowId>) {
        let mut kept: Vec<ArrowId> = arrows.iter().copied().collect();
        kept.sort_unstable();
        let new_of: HashMap<ArrowId, ArrowId> =
            kept.iter().enumerate().map(|(n, &o)| (o, n)).collect();
        let new_arrows = kept.iter().map(|&a| self.arrows[a].clone()).collect();
        let identities = self.identities.iter().map(|i| new_of[i]).collect();
        let mut table = HashMap::new();
        for &f in &kept {
            for &g in &self.outgoing[self.tgt(f)] {
                if let Some(&ng) = new_of.get(&g) {
                    if let Some(&nh) = new_of.get(&self.compose(f, g)) {
                        table.insert((new_of[&f], ng), nh);
                    }
                }
            }
        }
        let sub = ExplicitCategory::new(
            self.objects.clone(),
            new_arrows,
            identities,
            Composition::Table(table),
        );
        (sub, kept)
    }

    /// Copy of this category with a materialized composition table.
    pub fn materialized(&self) -> ExplicitCategory {
        let table = self
            .composable_pairs()
            .filter_map(|(f, g)| self.try_compose(f, g).map(|h| ((f, g), h)))
            .collect();
        ExplicitCategory::new(
            self.objects.clone(),
            self.arrows.clone(),
            self.identities.clone(),
            Composition::Table(table),
        )
    }

    /// Canonical JSON value (objects, arrows and composites sorted by name).
    pub fn to_json_value(&self) -> CategoryJson {
        let mut objects = self.objects.clone();
        objects.sort();
        let mut arrows: Vec<ArrowJson> = self
            .arrows
            .iter()
            .map(|a| ArrowJson {
                id: a.name.clone(),
                src: self.objects[a.src].clone(),
                tgt: self.objects[a.tgt].clone(),
            })
            .collect();
        arrows.sort_by(|a, b| a.id.cmp(&b.id));
        let identities = self
            .objects()
            .map(|o| (self.objects[o].clone(), self.arrows[self.identities[o]].name.clone()))
            .collect();
        let mut compose: Vec<[String; 3]> = self
            .composable_pairs()
            .filter_map(|(f, g)| {
                self.try_compose(f, g).map(|h| {
                    [
                        self.arrows[f].name.clone(),
                        self.arrows[g].name.clone(),
                        self.arrows[h].name.clone(),
                    ]
                })
            })
            .collect();
        compose.sort();
        CategoryJson {
            objects,
            arrows,
            identities,
            compose,
        }
    }

    pub fn from_json_value(json: &CategoryJson) -> Result<Self> {
        let mut problems = Vec::new();
        let mut object_names = json.objects.clone();
        object_names.sort();
        object_names.dedup();
        if object_names.len() != json.objects.len() {
            problems.push("duplicate object names".to_string());
        }
        let obj_of: HashMap<&str, ObjId> = object_names
            .iter()
            .enumerate()
            .map(|(i, n)| (n.as_str(), i))
            .collect();
        let mut arrow_json = json.arrows.clone();
        arrow_json.sort_by(|a, b| a.id.cmp(&b.id));
        let mut arrows = Vec::with_capacity(arrow_json.len());
        for a in &arrow_json {
            match (obj_of.get(a.src.as_str()), obj_of.get(a.tgt.as_str())) {
                (Some(&s), Some(&t)) => arrows.push(Arrow {
                    name: a.id.clone(),
                    src: s,
                    tgt: t,
                }),
                _ => problems.push(format!("arrow {} has an undeclared endpoint", a.id)),
            }
        }
        if arrow_json.windows(2).any(|w| w[0].id == w[1].id) {
            problems.push("duplicate arrow ids".to_string());
        }
        let arrow_of: HashMap<&str, ArrowId> = arrows
            .iter()
            .enumerate()
            .map(|(i, a)| (a.name.as_str(), i))
            .collect();
        let mut identities = vec![UNSET; object_names.len()];
        for (o, a) in &json.identities {
            match (obj_of.get(o.as_str()), arrow_of.get(a.as_str())) {
                (Some(&o), Some(&a)) => identities[o] = a,
                _ => problems.push(format!("identity entry {o} -> {a} names unknown data")),
            }
        }
        for (o, &i) in identities.iter().enumerate() {
            if i == UNSET {
                problems.push(format!("object {} has no identity", object_names[o]));
            }
        }
        let mut table = HashMap::new();
        for [f, g, h] in &json.compose {
            match (
                arrow_of.get(f.as_str()),
                arrow_of.get(g.as_str()),
                arrow_of.get(h.as_str()),
            ) {
                (Some(&f), Some(&g), Some(&h)) => {
                    table.insert((f, g), h);
                }
                _ => problems.push(format!("composite ({f}, {g}) -> {h} names unknown arrows")),
            }
        }
        if !problems.is_empty() {
            return Err(Error::Invalid(problems));
        }
        Ok(ExplicitCategory::new(
            object_names,
            arrows,
            identities,
            Composition::Table(table),
        ))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_json_value()).expect("category serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Self::from_json_value(&serde_json::from_str(s)?)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArrowJson {
    pub id: String,
    pub src: String,
    pub tgt: String,
}

/// JSON form of a category. `compose` entries are `[f, g, h]` with `h` the
/// composite "first `f`, then `g`".
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CategoryJson {
    pub objects: Vec<String>,
    pub arrows: Vec<ArrowJson>,
    pub identities: BTreeMap<String, String>,
    pub compose: Vec<[String; 3]>,
}

/// One violated category law.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    IdentityEndpoints { object: String },
    MissingComposite { first: String, second: String },
    ExtraComposite { first: String, second: String },
    CompositeEndpoints { first: String, second: String, composite: String },
    LeftIdentity { arrow: String },
    RightIdentity { arrow: String },
    Associativity { f: String, g: String, h: String },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::IdentityEndpoints { object } => {
                write!(f, "identity of {object} is not an endomorphism of it")
            }
            Violation::MissingComposite { first, second } => {
                write!(f, "no composite for ({first}, {second})")
            }
            Violation::ExtraComposite { first, second } => {
                write!(f, "composite given for non-composable ({first}, {second})")
            }
            Violation::CompositeEndpoints {
                first,
                second,
                composite,
            } => write!(f, "composite {composite} of ({first}, {second}) has wrong endpoints"),
            Violation::LeftIdentity { arrow } => write!(f, "identity is not left neutral for {arrow}"),
            Violation::RightIdentity { arrow } => write!(f, "identity is not right neutral for {arrow}"),
            Violation::Associativity { f: a, g, h } => {
                write!(f, "associativity fails on ({a}, {g}, {h})")
            }
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks every category law exhaustively.
pub fn validate_category(c: &ExplicitCategory) -> ValidationReport {
    let mut violations = Vec::new();
    let name = |a: ArrowId| c.arrow_name(a).to_string();
    for o in c.objects() {
        let i = c.identity(o);
        if i >= c.arrow_count() || c.src(i) != o || c.tgt(i) != o {
            violations.push(Violation::IdentityEndpoints {
                object: c.object_name(o).to_string(),
            });
        }
    }
    if !violations.is_empty() {
        return ValidationReport { violations };
    }
    if let Composition::Table(t) = c.composition() {
        for &(f, g) in t.keys() {
            if c.tgt(f) != c.src(g) {
                violations.push(Violation::ExtraComposite {
                    first: name(f),
                    second: name(g),
                });
            }
        }
    }
    let mut complete = true;
    for (f, g) in c.composable_pairs() {
        match c.try_compose(f, g) {
            None => {
                complete = false;
                violations.push(Violation::MissingComposite {
                    first: name(f),
                    second: name(g),
                });
            }
            Some(h) if c.src(h) != c.src(f) || c.tgt(h) != c.tgt(g) => {
                complete = false;
                violations.push(Violation::CompositeEndpoints {
                    first: name(f),
                    second: name(g),
                    composite: name(h),
                });
            }
            Some(_) => {}
        }
    }
    for f in c.arrow_ids() {
        if c.try_compose(c.identity(c.src(f)), f) != Some(f) {
            violations.push(Violation::LeftIdentity { arrow: name(f) });
        }
        if c.try_compose(f, c.identity(c.tgt(f))) != Some(f) {
            violations.push(Violation::RightIdentity { arrow: name(f) });
        }
    }
    if complete {
        for (f, g) in c.composable_pairs() {
            let fg = c.compose(f, g);
            for &h in c.outgoing(c.tgt(g)) {
                if c.compose(fg, h) != c.compose(f, c.compose(g, h)) {
                    violations.push(Violation::Associativity {
                        f: name(f),
                        g: name(g),
                        h: name(h),
                    });
                }
            }
        }
    }
    ValidationReport { violations }
}

/// The poset category `0 → 1 → ⋯ → p`; arrow `i→j` exists for `i ≤ j`.
pub fn chain(p: usize) -> ExplicitCategory {
    let objects: Vec<String> = (0..=p).map(|i| i.to_string()).collect();
    let mut arrows = Vec::new();
    let mut index = HashMap::new();
    for i in 0..=p {
        for j in i..=p {
            index.insert((i, j), arrows.len());
            arrows.push(Arrow {
                name: format!("{i}<{j}"),
                src: i,
                tgt: j,
            });
        }
    }
    let identities = (0..=p).map(|i| index[&(i, i)]).collect();
    let mut table = HashMap::new();
    for i in 0..=p {
        for j in i..=p {
            for k in j..=p {
                table.insert((index[&(i, j)], index[&(j, k)]), index[&(i, k)]);
            }
        }
    }
    ExplicitCategory::new(objects, arrows, identities, Composition::Table(table))
}

/// The discrete category on the objects `0, …, p`.
pub fn discrete_chain(p: usize) -> ExplicitCategory {
    let objects: Vec<String> = (0..=p).map(|i| i.to_string()).collect();
    let arrows = (0..=p)
        .map(|i| Arrow {
            name: format!("{i}<{i}"),
            src: i,
            tgt: i,
        })
        .collect();
    let table = (0..=p).map(|i| ((i, i), i)).collect();
    ExplicitCategory::new(objects, arrows, (0..=p).collect(), Composition::Table(table))
}

/// The product category. Object `(c, d)` has index `c * |obj D| + d` and arrow
/// `(f, g)` has index `f * |arr D| + g`.
pub fn product(c: &ExplicitCategory, d: &ExplicitCategory) -> ExplicitCategory {
    let (no, na) = (d.object_count(), d.arrow_count());
    let mut objects = Vec::with_capacity(c.object_count() * no);
    for x in c.objects() {
        for y in d.objects() {
            objects.push(format!("({},{})", c.object_name(x), d.object_name(y)));
        }
    }
    let mut arrows = Vec::with_capacity(c.arrow_count() * na);
    for f in c.arrow_ids() {
        for g in d.arrow_ids() {
            arrows.push(Arrow {
                name: format!("({},{})", c.arrow_name(f), d.arrow_name(g)),
                src: c.src(f) * no + d.src(g),
                tgt: c.tgt(f) * no + d.tgt(g),
            });
        }
    }
    let mut identities = Vec::with_capacity(objects.len());
    for x in c.objects() {
        for y in d.objects() {
            identities.push(c.identity(x) * na + d.identity(y));
        }
    }
    ExplicitCategory::new(
        objects,
        arrows,
        identities,
        Composition::Product {
            left: Arc::new(c.clone()),
            right: Arc::new(d.clone()),
        },
    )
}

/// `chain(d_0) × chain(d_1) × ⋯`, nested to the right. Object and arrow
/// indices are mixed radix with the first factor most significant.
pub fn product_of_chains(dims: &[usize]) -> ExplicitCategory {
    match dims.split_last() {
        None => chain(0),
        Some((&last, rest)) => rest
            .iter()
            .rev()
            .fold(chain(last), |acc, &d| product(&chain(d), &acc)),
    }
}

/// The two projection functors out of `product(c, d)`.
pub fn product_projections(c: &ExplicitCategory, d: &ExplicitCategory) -> (Functor, Functor) {
    let (no, na) = (d.object_count(), d.arrow_count());
    let total_o = c.object_count() * no;
    let total_a = c.arrow_count() * na;
    let left = Functor {
        object_map: (0..total_o).map(|o| o / no).collect(),
        arrow_map: (0..total_a).map(|a| a / na).collect(),
    };
    let right = Functor {
        object_map: (0..total_o).map(|o| o % no).collect(),
        arrow_map: (0..total_a).map(|a| a % na).collect(),
    };
    (left, right)
}

/// A functor between two explicit categories, stored as its two maps.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Functor {
    pub object_map: Vec<ObjId>,
    pub arrow_map: Vec<ArrowId>,
}

impl Functor {
    pub fn identity(c: &ExplicitCategory) -> Self {
        Functor {
            object_map: c.objects().collect(),
            arrow_map: c.arrow_ids().collect(),
        }
    }

    /// `self` followed by `next`.
    pub fn then(&self, next: &Functor) -> Functor {
        Functor {
            object_map: self.object_map.iter().map(|&o| next.object_map[o]).collect(),
            arrow_map: self.arrow_map.iter().map(|&a| next.arrow_map[a]).collect(),
        }
    }

    /// Lists every way this fails to be a functor `source → target`.
    pub fn violations(&self, source: &ExplicitCategory, target: &ExplicitCategory) -> Vec<String> {
        let mut out = Vec::new();
        if self.object_map.len() != source.object_count()
            || self.arrow_map.len() != source.arrow_count()
        {
            out.push("map sizes do not match the source".to_string());
            return out;
        }
        if self.object_map.iter().any(|&o| o >= target.object_count())
            || self.arrow_map.iter().any(|&a| a >= target.arrow_count())
        {
            out.push("map values out of range".to_string());
            return out;
        }
        for a in source.arrow_ids() {
            let fa = self.arrow_map[a];
            if target.src(fa) != self.object_map[source.src(a)]
                || target.tgt(fa) != self.object_map[source.tgt(a)]
            {
                out.push(format!("endpoints of {} not preserved", source.arrow_name(a)));
            }
        }
        for o in source.objects() {
            if self.arrow_map[source.identity(o)] != target.identity(self.object_map[o]) {
                out.push(format!("identity of {} not preserved", source.object_name(o)));
            }
        }
        if !out.is_empty() {
            return out;
        }
        for (f, g) in source.composable_pairs() {
            let h = source.compose(f, g);
            if target.try_compose(self.arrow_map[f], self.arrow_map[g]) != Some(self.arrow_map[h]) {
                out.push(format!(
                    "composite of ({}, {}) not preserved",
                    source.arrow_name(f),
                    source.arrow_name(g)
                ));
            }
        }
        out
    }

    pub fn is_functor(&self, source: &ExplicitCategory, target: &ExplicitCategory) -> bool {
        self.violations(source, target).is_empty()
    }

    /// Whether the functor is bijective on objects and on arrows.
    pub fn is_bijective(&self, target: &ExplicitCategory) -> bool {
        is_bijection(&self.object_map, target.object_count())
            && is_bijection(&self.arrow_map, target.arrow_count())
    }
}

pub(crate) fn is_bijection(map: &[usize], codomain: usize) -> bool {
    if map.len() != codomain {
        return false;
    }
    let mut seen = vec![false; codomain];
    for &m in map {
        if m >= codomain || seen[m] {
            return false;
        }
        seen[m] = true;
    }
    true
}

/// Bounds for functor enumeration.
#[derive(Clone, Copy, Debug)]
pub struct SearchLimits {
    /// Refuse when `|obj D|^|obj C|` exceeds this.
    pub max_object_maps: f64,
    /// Refuse when the backtracking search tries more candidates than this.
    pub max_nodes: u64,
}

impl Default for SearchLimits {
    fn default() -> Self {
        SearchLimits {
            max_object_maps: 1e7,
            max_nodes: 50_000_000,
        }
    }
}

/// All functors `c → d`.
pub fn enumerate_functors(
    c: &ExplicitCategory,
    d: &ExplicitCategory,
    limits: SearchLimits,
) -> Result<Vec<Functor>> {
    let candidates = (d.object_count() as f64).powi(c.object_count() as i32);
    if candidates > limits.max_object_maps {
        return Err(Error::Resource {
            bound: "max_object_maps",
            detail: format!(
                "{}^{} candidate object maps exceed {}",
                d.object_count(),
                c.object_count(),
                limits.max_object_maps
            ),
        });
    }
    let mut out = Vec::new();
    search_functors(c, d, &|_, _| true, limits.max_nodes, &mut |f| out.push(f.clone()))?;
    Ok(out)
}

#[derive(Clone, Copy, Debug)]
enum Step {
    Root(ObjId),
    /// Source endpoint known; the arrow's image fixes the target object.
    TreeOut(ArrowId),
    /// Target endpoint known; the arrow's image fixes the source object.
    TreeIn(ArrowId),
    Arrow(ArrowId),
}

struct Plan {
    steps: Vec<Step>,
    /// Per step, composable triples `(f, g, f;g)` fully assigned at that step.
    checks: Vec<Vec<(ArrowId, ArrowId, ArrowId)>>,
    /// Per step, two earlier arrows whose composite is the step's arrow.
    forced: Vec<Option<(ArrowId, ArrowId)>>,
}

fn plan_search(c: &ExplicitCategory) -> Plan {
    let mut steps = Vec::new();
    let mut obj_time = vec![UNSET; c.object_count()];
    let mut arrow_time = vec![UNSET; c.arrow_count()];
    let schedule_between = |x: ObjId,
                                steps: &mut Vec<Step>,
                                obj_time: &Vec<usize>,
                                arrow_time: &mut Vec<usize>| {
        let mut pending: Vec<ArrowId> = c
            .outgoing(x)
            .iter()
            .chain(c.incoming(x))
            .copied()
            .filter(|&a| {
                arrow_time[a] == UNSET
                    && !c.is_identity(a)
                    && obj_time[c.src(a)] != UNSET
                    && obj_time[c.tgt(a)] != UNSET
            })
            .collect();
        pending.sort_unstable();
        pending.dedup();
        for a in pending {
            arrow_time[a] = steps.len();
            steps.push(Step::Arrow(a));
        }
    };
    for root in c.objects() {
        if obj_time[root] != UNSET {
            continue;
        }
        obj_time[root] = steps.len();
        steps.push(Step::Root(root));
        schedule_between(root, &mut steps, &obj_time, &mut arrow_time);
        let mut queue = VecDeque::from([root]);
        while let Some(x) = queue.pop_front() {
            let mut around: Vec<ArrowId> = c.outgoing(x).iter().chain(c.incoming(x)).copied().collect();
            around.sort_unstable();
            for a in around {
                let (s, t) = (c.src(a), c.tgt(a));
                let (step, y) = if s == x && obj_time[t] == UNSET {
                    (Step::TreeOut(a), t)
                } else if t == x && obj_time[s] == UNSET {
                    (Step::TreeIn(a), s)
                } else {
                    continue;
                };
                arrow_time[a] = steps.len();
                obj_time[y] = steps.len();
                steps.push(step);
                schedule_between(y, &mut steps, &obj_time, &mut arrow_time);
                queue.push_back(y);
            }
        }
    }
    for o in c.objects() {
        arrow_time[c.identity(o)] = obj_time[o];
    }
    let mut checks = vec![Vec::new(); steps.len()];
    let mut forced = vec![None; steps.len()];
    for (f, g) in c.composable_pairs() {
        if c.is_identity(f) || c.is_identity(g) {
            continue;
        }
        let h = c.compose(f, g);
        let when = arrow_time[f].max(arrow_time[g]).max(arrow_time[h]);
        checks[when].push((f, g, h));
        let is_step_arrow = matches!(
            steps[when],
            Step::TreeOut(a) | Step::TreeIn(a) | Step::Arrow(a) if a == h
        );
        if is_step_arrow && arrow_time[f] < when && arrow_time[g] < when && forced[when].is_none() {
            forced[when] = Some((f, g));
        }
    }
    Plan {
        steps,
        checks,
        forced,
    }
}

/// Backtracking enumeration of the functors `c → d` whose arrow images satisfy
/// `allowed(source_arrow, target_arrow)`; each is passed to `visit`.
pub(crate) fn search_functors(
    c: &ExplicitCategory,
    d: &ExplicitCategory,
    allowed: &dyn Fn(ArrowId, ArrowId) -> bool,
    max_nodes: u64,
    visit: &mut dyn FnMut(&Functor),
) -> Result<()> {
    let plan = plan_search(c);
    let mut state = SearchState {
        c,
        d,
        allowed,
        plan: &plan,
        functor: Functor {
            object_map: vec![UNSET; c.object_count()],
            arrow_map: vec![UNSET; c.arrow_count()],
        },
        nodes: 0,
        max_nodes,
    };
    state.run(0, visit)
}

struct SearchState<'a> {
    c: &'a ExplicitCategory,
    d: &'a ExplicitCategory,
    allowed: &'a dyn Fn(ArrowId, ArrowId) -> bool,
    plan: &'a Plan,
    functor: Functor,
    nodes: u64,
    max_nodes: u64,
}

impl SearchState<'_> {
    fn set_object(&mut self, o: ObjId, image: ObjId) -> bool {
        self.functor.object_map[o] = image;
        let id = self.c.identity(o);
        self.functor.arrow_map[id] = self.d.identity(image);
        (self.allowed)(id, self.d.identity(image))
    }

    fn checks_pass(&self, step: usize) -> bool {
        let fm = &self.functor.arrow_map;
        self.plan.checks[step]
            .iter()
            .all(|&(f, g, h)| self.d.try_compose(fm[f], fm[g]) == Some(fm[h]))
    }

    fn run(&mut self, step: usize, visit: &mut dyn FnMut(&Functor)) -> Result<()> {
        if step == self.plan.steps.len() {
            visit(&self.functor);
            return Ok(());
        }
        let candidates: Vec<(Option<ObjId>, ArrowId)> = match self.plan.steps[step] {
            Step::Root(_) => self.d.objects().map(|o| (Some(o), UNSET)).collect(),
            Step::TreeOut(a) | Step::TreeIn(a) | Step::Arrow(a) => {
                let out = matches!(self.plan.steps[step], Step::TreeOut(_));
                let inn = matches!(self.plan.steps[step], Step::TreeIn(_));
                let pool: Vec<ArrowId> = if let Some((f, g)) = self.plan.forced[step] {
                    let fm = &self.functor.arrow_map;
                    match self.d.try_compose(fm[f], fm[g]) {
                        Some(h) => vec![h],
                        None => vec![],
                    }
                } else if out {
                    self.d.outgoing(self.functor.object_map[self.c.src(a)]).to_vec()
                } else if inn {
                    self.d.incoming(self.functor.object_map[self.c.tgt(a)]).to_vec()
                } else {
                    let fo = &self.functor.object_map;
                    self.d.hom(fo[self.c.src(a)], fo[self.c.tgt(a)]).to_vec()
                };
                pool.into_iter()
                    .filter(|&b| {
                        let fo = &self.functor.object_map;
                        let src_ok = inn || self.d.src(b) == fo[self.c.src(a)];
                        let tgt_ok = out || self.d.tgt(b) == fo[self.c.tgt(a)];
                        src_ok && tgt_ok && (self.allowed)(a, b)
                    })
                    .map(|b| {
                        let new_obj = if out {
                            Some(self.d.tgt(b))
                        } else if inn {
                            Some(self.d.src(b))
                        } else {
                            None
                        };
                        (new_obj, b)
                    })
                    .collect()
            }
        };
        for (new_obj, b) in candidates {
            self.nodes += 1;
            if self.nodes > self.max_nodes {
                return Err(Error::Resource {
                    bound: "max_nodes",
                    detail: format!("functor search exceeded {} nodes", self.max_nodes),
                });
            }
            let ok = match self.plan.steps[step] {
                Step::Root(o) => self.set_object(o, new_obj.unwrap()),
                Step::TreeOut(a) => {
                    self.functor.arrow_map[a] = b;
                    self.set_object(self.c.tgt(a), new_obj.unwrap())
                }
                Step::TreeIn(a) => {
                    self.functor.arrow_map[a] = b;
                    self.set_object(self.c.src(a), new_obj.unwrap())
                }
                Step::Arrow(a) => {
                    self.functor.arrow_map[a] = b;
                    true
                }
            };
            if ok && self.checks_pass(step) {
                self.run(step + 1, visit)?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn binom(n: usize, k: usize) -> usize {
        (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
    }

    /// Independent count of monotone maps `[p] → [q]` by brute force over all
    /// functions.
    fn brute_monotone(p: usize, q: usize) -> usize {
        let total = (q + 1).pow(p as u32 + 1);
        (0..total)
            .filter(|&code| {
                let mut vals = Vec::new();
                let mut c = code;
                for _ in 0..=p {
                    vals.push(c % (q + 1));
                    c /= q + 1;
                }
                vals.windows(2).all(|w| w[0] <= w[1])
            })
            .count()
    }

    #[test]
    fn chain_counts() {
        assert_eq!(chain(0).object_count(), 1);
        assert_eq!(chain(0).arrow_count(), 1);
        assert_eq!(chain(2).object_count(), 3);
        assert_eq!(chain(2).arrow_count(), 6);
        assert_eq!(chain(5).arrow_count(), 21);
        assert!(validate_category(&chain(2)).is_valid());
        assert!(chain(3).is_poset());
    }

    #[test]
    fn discrete_chain_and_inclusion() {
        let d = discrete_chain(3);
        assert_eq!((d.object_count(), d.arrow_count()), (4, 4));
        assert!(validate_category(&d).is_valid());
        assert_eq!(discrete_chain(0).arrow_count(), 1);
        let c = chain(3);
        let incl = Functor {
            object_map: (0..4).collect(),
            arrow_map: (0..4).map(|i| c.identity(i)).collect(),
        };
        assert!(incl.is_functor(&d, &c));
    }

    #[test]
    fn products() {
        let sq = product(&chain(1), &chain(1));
        assert_eq!((sq.object_count(), sq.arrow_count()), (4, 9));
        assert!(validate_category(&sq).is_valid());
        let p = product(&chain(1), &chain(2));
        assert_eq!((p.object_count(), p.arrow_count()), (6, 18));
        let (l, r) = product_projections(&chain(1), &chain(2));
        assert!(l.is_functor(&p, &chain(1)));
        assert!(r.is_functor(&p, &chain(2)));
    }

    #[test]
    fn product_with_terminal_is_isomorphic() {
        let c = product(&chain(1), &chain(2));
        let pc = product(&c, &chain(0));
        let (back, _) = product_projections(&c, &chain(0));
        assert!(back.is_functor(&pc, &c));
        assert!(back.is_bijective(&c));
    }

    #[test]
    fn product_is_associative_up_to_iso() {
        let (a, b, c) = (chain(1), chain(2), chain(1));
        let left = product(&product(&a, &b), &c);
        let right = product(&a, &product(&b, &c));
        let (nb, nc) = (b.object_count(), c.object_count());
        let (mb, mc) = (b.arrow_count(), c.arrow_count());
        // ((x,y),z) ↦ (x,(y,z)); both orders are the same mixed radix
        let iso = Functor {
            object_map: (0..left.object_count()).collect(),
            arrow_map: (0..left.arrow_count()).collect(),
        };
        assert!(iso.is_functor(&left, &right));
        assert!(iso.is_bijective(&right));
        assert_eq!(left.object_count(), 2 * nb * nc);
        assert_eq!(left.arrow_count(), 3 * mb * mc);
    }

    #[test]
    fn corrupted_associativity_is_reported() {
        // e;e = 1x makes e an involution, but then e;f = g forces e;g = f
        let c = ExplicitCategory::from_names(
            &["x", "y"],
            &[("1x", "x", "x"), ("1y", "y", "y"), ("e", "x", "x"), ("f", "x", "y"), ("g", "x", "y")],
            &[("x", "1x"), ("y", "1y")],
            &[
                ("1x", "1x", "1x"),
                ("1y", "1y", "1y"),
                ("1x", "e", "e"),
                ("e", "1x", "e"),
                ("e", "e", "1x"),
                ("1x", "f", "f"),
                ("1x", "g", "g"),
                ("f", "1y", "f"),
                ("g", "1y", "g"),
                ("e", "f", "g"),
                ("e", "g", "g"),
            ],
        )
        .unwrap();
        let report = validate_category(&c);
        assert!(report.violations.contains(&Violation::Associativity {
            f: "e".into(),
            g: "e".into(),
            h: "f".into()
        }));
    }

    #[test]
    fn missing_composite_is_reported() {
        let c = ExplicitCategory::from_names(
            &["x"],
            &[("1x", "x", "x"), ("e", "x", "x")],
            &[("x", "1x")],
            &[("1x", "1x", "1x"), ("1x", "e", "e"), ("e", "1x", "e")],
        )
        .unwrap();
        let report = validate_category(&c);
        assert_eq!(
            report.violations,
            vec![Violation::MissingComposite {
                first: "e".into(),
                second: "e".into()
            }]
        );
    }

    #[test]
    fn functor_counts() {
        let lim = SearchLimits::default();
        assert_eq!(enumerate_functors(&chain(1), &chain(1), lim).unwrap().len(), 3);
        let sq = product(&chain(1), &chain(1));
        assert_eq!(enumerate_functors(&chain(0), &sq, lim).unwrap().len(), 4);
        // down-sets of the 2×2 grid, counted independently below
        assert_eq!(enumerate_functors(&sq, &chain(1), lim).unwrap().len(), 6);
    }

    #[test]
    fn grid_to_chain_matches_brute_force() {
        // monotone maps {0,1}² → {0,1} by brute force over all 16 functions
        let count = (0..16u32)
            .filter(|&m| {
                let v = |x: u32, y: u32| (m >> (2 * x + y)) & 1;
                v(0, 0) <= v(0, 1) && v(0, 0) <= v(1, 0) && v(0, 1) <= v(1, 1) && v(1, 0) <= v(1, 1)
            })
            .count();
        assert_eq!(count, 6);
    }

    #[test]
    fn chain_functor_counts_match_binomials() {
        let lim = SearchLimits::default();
        for p in 0..=4 {
            for q in 0..=4 {
                let n = enumerate_functors(&chain(p), &chain(q), lim).unwrap();
                assert_eq!(n.len(), brute_monotone(p, q), "p={p} q={q}");
                assert_eq!(n.len(), binom(p + q + 1, q), "p={p} q={q}");
                for f in &n {
                    assert!(f.is_functor(&chain(p), &chain(q)));
                }
            }
        }
    }

    #[test]
    fn size_guard_is_reported() {
        let lim = SearchLimits {
            max_object_maps: 10.0,
            ..Default::default()
        };
        let err = enumerate_functors(&chain(3), &chain(3), lim).unwrap_err();
        assert!(err.is_resource());
    }

    #[test]
    fn functors_into_non_posets() {
        // parallel pair: two objects, two parallel arrows
        let pp = ExplicitCategory::from_names(
            &["x", "y"],
            &[("1x", "x", "x"), ("1y", "y", "y"), ("f", "x", "y"), ("g", "x", "y")],
            &[("x", "1x"), ("y", "1y")],
            &[
                ("1x", "1x", "1x"),
                ("1y", "1y", "1y"),
                ("1x", "f", "f"),
                ("1x", "g", "g"),
                ("f", "1y", "f"),
                ("g", "1y", "g"),
            ],
        )
        .unwrap();
        assert!(validate_category(&pp).is_valid());
        let fs = enumerate_functors(&chain(1), &pp, SearchLimits::default()).unwrap();
        // identities at x and y, plus f and g
        assert_eq!(fs.len(), 4);
        let all = enumerate_functors(&pp, &pp, SearchLimits::default()).unwrap();
        for f in &all {
            assert!(f.is_functor(&pp, &pp));
        }
        // object maps: (x,x),(y,y) with constant arrows, or (x,y) with 2×2 choices
        assert_eq!(all.len(), 2 + 4);
    }

    #[test]
    fn json_round_trip_is_bit_exact() {
        let c = product(&chain(1), &chain(1));
        let s = c.to_json();
        let back = ExplicitCategory::from_json(&s).unwrap();
        assert_eq!(back.to_json(), s);
        assert!(validate_category(&back).is_valid());
    }

    #[test]
    fn closure_and_subcategories() {
        let c = chain(2);
        let steps = [c.hom(0, 1)[0], c.hom(1, 2)[0]];
        let cl = c.closure(steps);
        assert_eq!(cl.len(), 6);
        assert!(c.is_wide_subcategory(&cl));
        let only: HashSet<ArrowId> = steps.iter().copied().chain((0..3).map(|o| c.identity(o))).collect();
        assert!(!c.is_wide_subcategory(&only));
    }
}
