//! Finitely presented categories and a bounded word-problem engine.
//!
//! Two paths are equal in a presented category when they are related by the
//! smallest congruence containing the relations. Equality is decided by
//! exploring one-step rewrites `u·l·v ↔ u·r·v` among paths of bounded length,
//! falling back to a finite model when the explored class is not closed.

use std::collections::{HashMap, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fincat::{
    validate_category, ArrowId, CategoryJson, Composition, ExplicitCategory, ObjId, Arrow,
};

/// Membership label of a generator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Tag {
    /// The `i`-th relative subcategory, `i ≥ 1`.
    V(usize),
    W,
}

impl fmt::Display for Tag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tag::V(i) => write!(f, "v{i}"),
            Tag::W => write!(f, "w"),
        }
    }
}

impl std::str::FromStr for Tag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "w" {
            return Ok(Tag::W);
        }
        s.strip_prefix('v')
            .and_then(|i| i.parse::<usize>().ok())
            .filter(|&i| (1..64).contains(&i))
            .map(Tag::V)
            .ok_or_else(|| Error::usage(format!("unknown tag `{s}`")))
    }
}

/// A set of tags. A `w`-tagged generator belongs to every `v_i` as well.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct Tags(u64);

impl Tags {
    pub fn none() -> Self {
        Tags(0)
    }

    pub fn of(tags: &[Tag]) -> Self {
        tags.iter().fold(Tags(0), |acc, &t| acc.with(t))
    }

    fn bit(t: Tag) -> u64 {
        match t {
            Tag::W => 1,
            Tag::V(i) => 1 << i,
        }
    }

    pub fn with(self, t: Tag) -> Self {
        Tags(self.0 | Self::bit(t))
    }

    /// Whether `t` was listed explicitly.
    pub fn lists(self, t: Tag) -> bool {
        self.0 & Self::bit(t) != 0
    }

    /// Whether a generator with these tags lies in the subcategory `t`.
    pub fn belongs_to(self, t: Tag) -> bool {
        self.lists(t) || self.lists(Tag::W)
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    /// Whether every tag listed here is also listed in `other`.
    pub fn is_subset(self, other: Tags) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn iter(self) -> impl Iterator<Item = Tag> {
        let w = self.lists(Tag::W).then_some(Tag::W);
        (1..64)
            .filter(move |&i| self.0 & (1u64 << i) != 0)
            .map(Tag::V)
            .chain(w)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generator {
    pub name: String,
    pub src: ObjId,
    pub tgt: ObjId,
    pub tags: Tags,
}

/// A composable word of generators; the empty word is the identity of `src`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Path {
    pub src: ObjId,
    pub tgt: ObjId,
    pub word: Vec<usize>,
}

impl Path {
    pub fn identity(o: ObjId) -> Self {
        Path {
            src: o,
            tgt: o,
            word: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.word.len()
    }

    pub fn is_empty(&self) -> bool {
        self.word.is_empty()
    }

    /// `self` followed by `next`; the caller guarantees `self.tgt == next.src`.
    pub fn then(&self, next: &Path) -> Path {
        let mut word = self.word.clone();
        word.extend_from_slice(&next.word);
        Path {
            src: self.src,
            tgt: next.tgt,
            word,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Presentation {
    pub objects: Vec<String>,
    pub generators: Vec<Generator>,
    pub relations: Vec<(Path, Path)>,
}

impl Presentation {
    pub fn new(objects: Vec<String>) -> Self {
        Presentation {
            objects,
            ..Default::default()
        }
    }

    pub fn add_object(&mut self, name: impl Into<String>) -> ObjId {
        self.objects.push(name.into());
        self.objects.len() - 1
    }

    pub fn add_generator(
        &mut self,
        name: impl Into<String>,
        src: ObjId,
        tgt: ObjId,
        tags: Tags,
    ) -> usize {
        self.generators.push(Generator {
            name: name.into(),
            src,
            tgt,
            tags,
        });
        self.generators.len() - 1
    }

    pub fn add_relation(&mut self, lhs: Path, rhs: Path) {
        self.relations.push((lhs, rhs));
    }

    pub fn generator_path(&self, g: usize) -> Path {
        Path {
            src: self.generators[g].src,
            tgt: self.generators[g].tgt,
            word: vec![g],
        }
    }

    /// The path starting at `src` along `word`, checking composability.
    pub fn path(&self, src: ObjId, word: &[usize]) -> Result<Path> {
        let mut at = src;
        for &g in word {
            let gen = self
                .generators
                .get(g)
                .ok_or_else(|| Error::usage(format!("no generator {g}")))?;
            if gen.src != at {
                return Err(Error::usage(format!(
                    "generator {} does not start at {}",
                    gen.name, self.objects[at]
                )));
            }
            at = gen.tgt;
        }
        Ok(Path {
            src,
            tgt: at,
            word: word.to_vec(),
        })
    }

    pub fn find_generator(&self, name: &str) -> Option<usize> {
        self.generators.iter().position(|g| g.name == name)
    }

    fn path_problems(&self, p: &Path, what: &str, out: &mut Vec<String>) {
        if p.src >= self.objects.len() || p.tgt >= self.objects.len() {
            out.push(format!("{what} has an undeclared endpoint"));
            return;
        }
        match self.path(p.src, &p.word) {
            Ok(q) if q.tgt == p.tgt => {}
            Ok(_) => out.push(format!("{what} ends at the wrong object")),
            Err(e) => out.push(format!("{what}: {e}")),
        }
    }

    /// Checks generator endpoints and that relations are parallel paths.
    pub fn validate(&self) -> Result<()> {
        let mut out = Vec::new();
        for g in &self.generators {
            if g.src >= self.objects.len() || g.tgt >= self.objects.len() {
                out.push(format!("generator {} has an undeclared endpoint", g.name));
            }
        }
        if !out.is_empty() {
            return Err(Error::Invalid(out));
        }
        for (i, (l, r)) in self.relations.iter().enumerate() {
            self.path_problems(l, &format!("relation {i} left side"), &mut out);
            self.path_problems(r, &format!("relation {i} right side"), &mut out);
            if l.src != r.src || l.tgt != r.tgt {
                out.push(format!("relation {i} is not between parallel paths"));
            }
        }
        if out.is_empty() {
            Ok(())
        } else {
            Err(Error::Invalid(out))
        }
    }

    pub fn display_path(&self, p: &Path) -> String {
        if p.word.is_empty() {
            format!("id[{}]", self.objects[p.src])
        } else {
            p.word
                .iter()
                .map(|&g| self.generators[g].name.as_str())
                .collect::<Vec<_>>()
                .join(";")
        }
    }

    fn outgoing(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.objects.len()];
        for (i, g) in self.generators.iter().enumerate() {
            out[g.src].push(i);
        }
        out
    }

    fn objects_along(&self, src: ObjId, word: &[usize]) -> Vec<ObjId> {
        let mut objs = Vec::with_capacity(word.len() + 1);
        objs.push(src);
        objs.extend(word.iter().map(|&g| self.generators[g].tgt));
        objs
    }

    /// Calls `emit(position, result)` for every occurrence of `from` in the
    /// word, replaced by `to`. An empty `from` occurs at each position whose
    /// object is `at`.
    fn rewrite_sites(
        &self,
        objs: &[ObjId],
        word: &[usize],
        from: &[usize],
        to: &[usize],
        at: ObjId,
        emit: &mut dyn FnMut(usize, Vec<usize>),
    ) {
        for pos in 0..=word.len() {
            let hit = if from.is_empty() {
                objs[pos] == at
            } else {
                word[pos..].starts_with(from)
            };
            if hit {
                let mut next = Vec::with_capacity(word.len() + to.len() - from.len().min(word.len()));
                next.extend_from_slice(&word[..pos]);
                next.extend_from_slice(to);
                next.extend_from_slice(&word[pos + from.len()..]);
                emit(pos, next);
            }
        }
    }

    /// Every one-step rewrite of `word`, in both directions of every relation.
    fn neighbours(&self, src: ObjId, word: &[usize], emit: &mut dyn FnMut(RewriteStep)) {
        let objs = self.objects_along(src, word);
        for (i, (l, r)) in self.relations.iter().enumerate() {
            for forward in [true, false] {
                let (from, to) = if forward { (l, r) } else { (r, l) };
                self.rewrite_sites(&objs, word, &from.word, &to.word, from.src, &mut |pos, next| {
                    emit(RewriteStep {
                        relation: i,
                        forward,
                        position: pos,
                        result: next,
                    })
                });
            }
        }
    }

    pub fn to_json_value(&self) -> PresentationJson {
        let gname = |g: &usize| self.generators[*g].name.clone();
        PresentationJson {
            objects: self.objects.clone(),
            generators: self
                .generators
                .iter()
                .map(|g| GeneratorJson {
                    id: g.name.clone(),
                    src: self.objects[g.src].clone(),
                    tgt: self.objects[g.tgt].clone(),
                    tags: g.tags.iter().map(|t| t.to_string()).collect(),
                })
                .collect(),
            relations: self
                .relations
                .iter()
                .map(|(l, r)| RelationJson {
                    src: self.objects[l.src].clone(),
                    tgt: self.objects[l.tgt].clone(),
                    lhs: l.word.iter().map(gname).collect(),
                    rhs: r.word.iter().map(gname).collect(),
                })
                .collect(),
        }
    }

    pub fn from_json_value(json: &PresentationJson) -> Result<Self> {
        let obj_of: HashMap<&str, ObjId> = json
            .objects
            .iter()
            .enumerate()
            .map(|(i, o)| (o.as_str(), i))
            .collect();
        let obj = |name: &str| {
            obj_of
                .get(name)
                .copied()
                .ok_or_else(|| Error::Invalid(vec![format!("undeclared object `{name}`")]))
        };
        let mut p = Presentation::new(json.objects.clone());
        for g in &json.generators {
            let tags = g
                .tags
                .iter()
                .map(|t| t.parse())
                .collect::<Result<Vec<Tag>>>()?;
            p.add_generator(g.id.clone(), obj(&g.src)?, obj(&g.tgt)?, Tags::of(&tags));
        }
        let gen_of: HashMap<String, usize> = p
            .generators
            .iter()
            .enumerate()
            .map(|(i, g)| (g.name.clone(), i))
            .collect();
        let word = |names: &[String]| {
            names
                .iter()
                .map(|n| {
                    gen_of
                        .get(n)
                        .copied()
                        .ok_or_else(|| Error::Invalid(vec![format!("undeclared generator `{n}`")]))
                })
                .collect::<Result<Vec<usize>>>()
        };
        for r in &json.relations {
            let (s, t) = (obj(&r.src)?, obj(&r.tgt)?);
            p.add_relation(
                Path { src: s, tgt: t, word: word(&r.lhs)? },
                Path { src: s, tgt: t, word: word(&r.rhs)? },
            );
        }
        p.validate()?;
        Ok(p)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorJson {
    pub id: String,
    pub src: String,
    pub tgt: String,
    #[serde(default)]
    pub tags: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationJson {
    pub src: String,
    pub tgt: String,
    pub lhs: Vec<String>,
    pub rhs: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PresentationJson {
    pub objects: Vec<String>,
    pub generators: Vec<GeneratorJson>,
    pub relations: Vec<RelationJson>,
}

/// Limits for the word-problem engine.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    /// Longest path the engine will consider.
    pub max_len: usize,
    /// Most paths held in memory at once.
    pub max_classes: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_len: 8,
            max_classes: 200_000,
        }
    }
}

/// Replace one occurrence of a relation side by the other side.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RewriteStep {
    pub relation: usize,
    /// `true` rewrites left side to right side.
    pub forward: bool,
    pub position: usize,
    /// The word after the step.
    pub result: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DistinctCertificate {
    /// The full congruence class of the first path, closed under every
    /// rewrite and not containing the second.
    ClosedClass { class: Vec<Vec<usize>> },
    /// A finite category satisfying the relations in which the two paths
    /// differ.
    Model {
        category: CategoryJson,
        generator_images: Vec<String>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum EqualityDecision {
    Equal { trace: Vec<RewriteStep> },
    Distinct { certificate: DistinctCertificate },
    Unknown { reason: String },
}

impl EqualityDecision {
    pub fn is_equal(&self) -> bool {
        matches!(self, EqualityDecision::Equal { .. })
    }

    pub fn is_distinct(&self) -> bool {
        matches!(self, EqualityDecision::Distinct { .. })
    }

    pub fn is_unknown(&self) -> bool {
        matches!(self, EqualityDecision::Unknown { .. })
    }

    /// Re-checks the certificate from scratch. `Unknown` never verifies.
    pub fn verify(&self, p: &Presentation, a: &Path, b: &Path) -> bool {
        match self {
            EqualityDecision::Equal { trace } => replay(p, a, trace).as_ref() == Some(b),
            EqualityDecision::Distinct {
                certificate: DistinctCertificate::ClosedClass { class },
            } => {
                let members: std::collections::HashSet<&Vec<usize>> = class.iter().collect();
                let mut closed = members.contains(&a.word) && !members.contains(&b.word);
                for w in class {
                    p.neighbours(a.src, w, &mut |s| closed &= members.contains(&s.result));
                }
                closed
            }
            EqualityDecision::Distinct {
                certificate:
                    DistinctCertificate::Model {
                        category,
                        generator_images,
                    },
            } => {
                let Ok(c) = ExplicitCategory::from_json_value(category) else {
                    return false;
                };
                if !validate_category(&c).is_valid() {
                    return false;
                }
                let Some(images) = generator_images
                    .iter()
                    .map(|n| c.find_arrow(n))
                    .collect::<Option<Vec<ArrowId>>>()
                else {
                    return false;
                };
                let Some(map) = model_map(p, &c, &images) else {
                    return false;
                };
                let eval = |q: &Path| map.try_evaluate(&c, q);
                p.relations.iter().all(|(l, r)| eval(l).is_some() && eval(l) == eval(r))
                    && eval(a).is_some()
                    && eval(a) != eval(b)
            }
            EqualityDecision::Unknown { .. } => false,
        }
    }
}

/// Applies a rewrite trace to `a`, returning the final path when every step
/// is a valid rewrite.
pub fn replay(p: &Presentation, a: &Path, trace: &[RewriteStep]) -> Option<Path> {
    let mut word = a.word.clone();
    for step in trace {
        let mut ok = false;
        let objs = p.objects_along(a.src, &word);
        let (l, r) = p.relations.get(step.relation)?;
        let (from, to) = if step.forward { (l, r) } else { (r, l) };
        p.rewrite_sites(&objs, &word, &from.word, &to.word, from.src, &mut |pos, next| {
            ok |= pos == step.position && next == step.result;
        });
        if !ok {
            return None;
        }
        word = step.result.clone();
    }
    p.path(a.src, &word).ok()
}

fn check_parallel(p: &Presentation, a: &Path, b: &Path) -> Result<()> {
    let mut problems = Vec::new();
    p.path_problems(a, "first path", &mut problems);
    p.path_problems(b, "second path", &mut problems);
    if !problems.is_empty() {
        return Err(Error::usage(problems.join("; ")));
    }
    if a.src != b.src || a.tgt != b.tgt {
        return Err(Error::usage("paths are not parallel"));
    }
    Ok(())
}

/// Decides whether two parallel paths are equal in the presented category.
pub fn decide_equal(
    p: &Presentation,
    a: &Path,
    b: &Path,
    budget: Budget,
) -> Result<EqualityDecision> {
    check_parallel(p, a, b)?;
    if a.len() > budget.max_len || b.len() > budget.max_len {
        return Ok(EqualityDecision::Unknown {
            reason: format!("a path is longer than max_len = {}", budget.max_len),
        });
    }
    let mut seen: HashMap<Vec<usize>, usize> = HashMap::new();
    let mut nodes: Vec<(Vec<usize>, Option<(usize, RewriteStep)>)> = vec![(a.word.clone(), None)];
    seen.insert(a.word.clone(), 0);
    let (mut overflow, mut capped) = (false, false);
    let mut i = 0;
    while i < nodes.len() {
        if nodes[i].0 == b.word {
            let mut trace = Vec::new();
            let mut at = i;
            while let Some((parent, step)) = &nodes[at].1 {
                trace.push(step.clone());
                at = *parent;
            }
            trace.reverse();
            return Ok(EqualityDecision::Equal { trace });
        }
        let word = nodes[i].0.clone();
        let mut fresh = Vec::new();
        p.neighbours(a.src, &word, &mut |step| {
            if step.result.len() > budget.max_len {
                overflow = true;
            } else if !seen.contains_key(&step.result) {
                fresh.push(step);
            }
        });
        for step in fresh {
            if seen.contains_key(&step.result) {
                continue;
            }
            if nodes.len() >= budget.max_classes {
                capped = true;
                break;
            }
            seen.insert(step.result.clone(), nodes.len());
            nodes.push((step.result.clone(), Some((i, step))));
        }
        if capped {
            break;
        }
        i += 1;
    }
    if !overflow && !capped {
        let mut class: Vec<Vec<usize>> = nodes.into_iter().map(|n| n.0).collect();
        class.sort();
        return Ok(EqualityDecision::Distinct {
            certificate: DistinctCertificate::ClosedClass { class },
        });
    }
    if capped {
        return Ok(EqualityDecision::Unknown {
            reason: format!("class of the first path exceeds max_classes = {}", budget.max_classes),
        });
    }
    match realize(p, budget) {
        Ok(model) => {
            let (ia, ib) = (model.interpret(a), model.interpret(b));
            if ia == ib {
                // the model's classes come from the same bounded rewrites
                Ok(EqualityDecision::Unknown {
                    reason: "model identifies the paths but no bounded rewrite trace exists".into(),
                })
            } else {
                let c = &model.category;
                Ok(EqualityDecision::Distinct {
                    certificate: DistinctCertificate::Model {
                        category: c.to_json_value(),
                        generator_images: model
                            .generator_image
                            .iter()
                            .map(|&g| c.arrow_name(g).to_string())
                            .collect(),
                    },
                })
            }
        }
        Err(u) => Ok(EqualityDecision::Unknown {
            reason: format!(
                "class of the first path leaves max_len = {} and no finite model was found ({})",
                budget.max_len,
                u.diagnostics.join("; ")
            ),
        }),
    }
}

pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Merges the classes; the smaller root survives.
    pub(crate) fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (keep, drop) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[drop] = keep;
        true
    }
}

/// Every path of length at most `max_len`, shortest first; `None` past `cap`.
fn enumerate_paths(p: &Presentation, max_len: usize, cap: usize) -> Option<Vec<Path>> {
    let out_gens = p.outgoing();
    let mut paths: Vec<Path> = (0..p.objects.len()).map(Path::identity).collect();
    let mut layer_start = 0;
    for _ in 0..max_len {
        let layer_end = paths.len();
        for i in layer_start..layer_end {
            for &g in &out_gens[paths[i].tgt] {
                if paths.len() >= cap {
                    return None;
                }
                let mut word = paths[i].word.clone();
                word.push(g);
                paths.push(Path {
                    src: paths[i].src,
                    tgt: p.generators[g].tgt,
                    word,
                });
            }
        }
        layer_start = layer_end;
    }
    Some(paths)
}

/// The explicit category presented by a presentation, together with the
/// quotient map from paths.
#[derive(Clone, Debug)]
pub struct Realization {
    pub category: ExplicitCategory,
    /// Image of each generator.
    pub generator_image: Vec<ArrowId>,
    /// A shortest path representing each arrow.
    pub representatives: Vec<Path>,
}

impl Realization {
    pub fn interpret(&self, path: &Path) -> ArrowId {
        path.word.iter().fold(self.category.identity(path.src), |acc, &g| {
            self.category.compose(acc, self.generator_image[g])
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Undecided {
    pub diagnostics: Vec<String>,
}

impl fmt::Display for Undecided {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "undecided: {}", self.diagnostics.join("; "))
    }
}

/// Materializes the presented category when it is finite and every hom-set
/// stabilizes within the budget.
///
/// For each bound `B ≤ max_len` the paths of length `≤ B` are grouped by
/// bounded rewriting. When every path of length `B` is congruent to a shorter
/// one, the classes of paths of length `< B` form a candidate category whose
/// composition reduces concatenations prefix by prefix. The candidate is
/// accepted once it validates and satisfies every relation; its arrows are
/// then exactly the congruence classes.
pub fn realize(p: &Presentation, budget: Budget) -> std::result::Result<Realization, Undecided> {
    if let Err(e) = p.validate() {
        return Err(Undecided {
            diagnostics: vec![e.to_string()],
        });
    }
    let mut diagnostics = Vec::new();
    for bound in 1..=budget.max_len {
        let Some(paths) = enumerate_paths(p, bound, budget.max_classes) else {
            diagnostics.push(format!(
                "more than {} paths of length <= {bound}",
                budget.max_classes
            ));
            return Err(Undecided { diagnostics });
        };
        match candidate(p, &paths, bound) {
            Ok(r) => return Ok(r),
            Err(d) => {
                if let Some(d) = d {
                    diagnostics.push(format!("bound {bound}: {d}"));
                }
            }
        }
    }
    diagnostics.push(format!(
        "hom-sets did not stabilize within max_len = {}",
        budget.max_len
    ));
    Err(Undecided { diagnostics })
}

/// `Err(None)` when paths of length `bound` do not all reduce.
fn candidate(
    p: &Presentation,
    paths: &[Path],
    bound: usize,
) -> std::result::Result<Realization, Option<String>> {
    let index: HashMap<(ObjId, &[usize]), usize> = paths
        .iter()
        .enumerate()
        .map(|(i, q)| ((q.src, q.word.as_slice()), i))
        .collect();
    let mut uf = UnionFind::new(paths.len());
    for (i, q) in paths.iter().enumerate() {
        let objs = p.objects_along(q.src, &q.word);
        for (l, r) in &p.relations {
            p.rewrite_sites(&objs, &q.word, &l.word, &r.word, l.src, &mut |_, next| {
                if let Some(&j) = index.get(&(q.src, next.as_slice())) {
                    uf.union(i, j);
                }
            });
        }
    }
    let short = bound - 1;
    // roots are the smallest index, hence a shortest path, of each class
    let roots: Vec<usize> = (0..paths.len()).map(|i| uf.find(i)).collect();
    if paths
        .iter()
        .zip(&roots)
        .any(|(q, &r)| q.len() == bound && paths[r].len() > short)
    {
        return Err(None);
    }
    let mut arrow_of_root: HashMap<usize, ArrowId> = HashMap::new();
    let mut representatives = Vec::new();
    let mut arrows = Vec::new();
    for (i, q) in paths.iter().enumerate() {
        if q.len() <= short && roots[i] == i {
            arrow_of_root.insert(i, arrows.len());
            arrows.push(Arrow {
                name: p.display_path(q),
                src: q.src,
                tgt: q.tgt,
            });
            representatives.push(q.clone());
        }
    }
    let class_of = |src: ObjId, word: &[usize]| -> ArrowId {
        let mut word = word.to_vec();
        while word.len() > short {
            let head = index[&(src, &word[..bound])];
            let mut reduced = paths[roots[head]].word.clone();
            reduced.extend_from_slice(&word[bound..]);
            word = reduced;
        }
        arrow_of_root[&roots[index[&(src, word.as_slice())]]]
    };
    let identities: Vec<ArrowId> = (0..p.objects.len()).map(|o| class_of(o, &[])).collect();
    let mut outgoing = vec![Vec::new(); p.objects.len()];
    for (a, arr) in arrows.iter().enumerate() {
        outgoing[arr.src].push(a);
    }
    let mut table = HashMap::new();
    for (f, rf) in representatives.iter().enumerate() {
        for &g in &outgoing[rf.tgt] {
            let mut word = rf.word.clone();
            word.extend_from_slice(&representatives[g].word);
            table.insert((f, g), class_of(rf.src, &word));
        }
    }
    let generator_image: Vec<ArrowId> = (0..p.generators.len())
        .map(|g| class_of(p.generators[g].src, &[g]))
        .collect();
    let category = ExplicitCategory::new(
        p.objects.clone(),
        arrows,
        identities,
        Composition::Table(table),
    );
    let report = validate_category(&category);
    if !report.is_valid() {
        return Err(Some(format!(
            "candidate is not a category ({})",
            report.violations[0]
        )));
    }
    let r = Realization {
        category,
        generator_image,
        representatives,
    };
    for (i, (lhs, rhs)) in p.relations.iter().enumerate() {
        if r.interpret(lhs) != r.interpret(rhs) {
            return Err(Some(format!("relation {i} fails in the candidate")));
        }
    }
    for (i, q) in paths.iter().enumerate() {
        if r.interpret(q) != class_of(q.src, &paths[roots[i]].word) {
            return Err(Some(format!(
                "path {} is not interpreted by its class",
                p.display_path(q)
            )));
        }
    }
    Ok(r)
}

/// Assignment of presentation objects and generators into an explicit
/// category.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorMap {
    pub objects: Vec<ObjId>,
    pub generators: Vec<ArrowId>,
}

impl GeneratorMap {
    pub fn try_evaluate(&self, c: &ExplicitCategory, path: &Path) -> Option<ArrowId> {
        let start = c.identity(*self.objects.get(path.src)?);
        path.word.iter().try_fold(start, |acc, &g| {
            c.try_compose(acc, *self.generators.get(g)?)
        })
    }

    pub fn evaluate(&self, c: &ExplicitCategory, path: &Path) -> ArrowId {
        self.try_evaluate(c, path)
            .expect("generator map respects endpoints")
    }

    fn check_endpoints(&self, p: &Presentation, c: &ExplicitCategory) -> Result<()> {
        if self.objects.len() != p.objects.len() || self.generators.len() != p.generators.len() {
            return Err(Error::usage("generator map does not cover the presentation"));
        }
        if self.objects.iter().any(|&o| o >= c.object_count()) {
            return Err(Error::usage("generator map sends an object out of range"));
        }
        for (g, &a) in p.generators.iter().zip(&self.generators) {
            if a >= c.arrow_count()
                || c.src(a) != self.objects[g.src]
                || c.tgt(a) != self.objects[g.tgt]
            {
                return Err(Error::usage(format!(
                    "generator {} is not sent to an arrow between the images of its endpoints",
                    g.name
                )));
            }
        }
        Ok(())
    }
}

fn model_map(p: &Presentation, c: &ExplicitCategory, images: &[ArrowId]) -> Option<GeneratorMap> {
    let objects = p
        .objects
        .iter()
        .map(|o| c.find_object(o))
        .collect::<Option<Vec<ObjId>>>()?;
    let map = GeneratorMap {
        objects,
        generators: images.to_vec(),
    };
    map.check_endpoints(p, c).ok()?;
    Some(map)
}

/// Whether every relation of `p` holds after applying `map`.
pub fn check_functor_well_defined(
    p: &Presentation,
    c: &ExplicitCategory,
    map: &GeneratorMap,
) -> Result<bool> {
    map.check_endpoints(p, c)?;
    Ok(p
        .relations
        .iter()
        .all(|(l, r)| map.evaluate(c, l) == map.evaluate(c, r)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Yes,
    No,
    Unknown,
}

impl Verdict {
    pub fn and(self, other: Verdict) -> Verdict {
        match (self, other) {
            (Verdict::No, _) | (_, Verdict::No) => Verdict::No,
            (Verdict::Yes, Verdict::Yes) => Verdict::Yes,
            _ => Verdict::Unknown,
        }
    }

    pub fn from_bool(b: bool) -> Verdict {
        if b {
            Verdict::Yes
        } else {
            Verdict::No
        }
    }
}

/// Outcome of comparing a presented category with an explicit one along a
/// generator map.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IsoReport {
    pub well_defined: bool,
    pub objects_bijective: bool,
    pub surjective: Verdict,
    pub injective: Verdict,
    /// Arrows of the target that no path reaches.
    pub unreached: Vec<String>,
    /// Distinct arrows of the presented category with the same image.
    pub collisions: Vec<(String, String)>,
    pub notes: Vec<String>,
}

impl IsoReport {
    pub fn verdict(&self) -> Verdict {
        Verdict::from_bool(self.well_defined && self.objects_bijective)
            .and(self.surjective)
            .and(self.injective)
    }

    pub fn is_iso(&self) -> bool {
        self.verdict() == Verdict::Yes
    }
}

/// For each arrow of `c`, a shortest path of `p` mapping onto it, if any.
/// Requires the object map to be a bijection.
pub fn arrow_witnesses(
    p: &Presentation,
    c: &ExplicitCategory,
    map: &GeneratorMap,
) -> Vec<Option<Path>> {
    let mut preimage = vec![usize::MAX; c.object_count()];
    for (o, &fo) in map.objects.iter().enumerate() {
        preimage[fo] = o;
    }
    let out_gens = p.outgoing();
    let mut witness: Vec<Option<Path>> = vec![None; c.arrow_count()];
    for start in 0..p.objects.len() {
        let id = c.identity(map.objects[start]);
        if witness[id].is_none() {
            witness[id] = Some(Path::identity(start));
        }
        let mut queue = VecDeque::from([(id, Path::identity(start))]);
        let mut seen = std::collections::HashSet::from([id]);
        while let Some((arrow, path)) = queue.pop_front() {
            let at = preimage[c.tgt(arrow)];
            for &g in &out_gens[at] {
                let next = c.compose(arrow, map.generators[g]);
                if seen.insert(next) {
                    let mut word = path.word.clone();
                    word.push(g);
                    let q = Path {
                        src: start,
                        tgt: p.generators[g].tgt,
                        word,
                    };
                    if witness[next].as_ref().is_none_or(|w| w.len() > q.len()) {
                        witness[next] = Some(q.clone());
                    }
                    queue.push_back((next, q));
                }
            }
        }
    }
    witness
}

const MAX_REPORTED: usize = 10;

/// Compares the category presented by `p` with `c` along `map`: bijectivity
/// on objects, then surjectivity and injectivity on every hom-set.
pub fn compare_presented_to_explicit(
    p: &Presentation,
    c: &ExplicitCategory,
    map: &GeneratorMap,
    budget: Budget,
) -> Result<IsoReport> {
    let well_defined = check_functor_well_defined(p, c, map)?;
    let objects_bijective = crate::fincat::is_bijection(&map.objects, c.object_count());
    let mut report = IsoReport {
        well_defined,
        objects_bijective,
        surjective: Verdict::Unknown,
        injective: Verdict::Unknown,
        unreached: Vec::new(),
        collisions: Vec::new(),
        notes: Vec::new(),
    };
    if !well_defined {
        report.notes.push("some relation does not hold in the target".into());
        return Ok(report);
    }
    if !objects_bijective {
        report.notes.push("object map is not a bijection".into());
        return Ok(report);
    }
    let witness = arrow_witnesses(p, c, map);
    report.unreached = c
        .arrow_ids()
        .filter(|&a| witness[a].is_none())
        .map(|a| c.arrow_name(a).to_string())
        .collect();
    report.surjective = Verdict::from_bool(report.unreached.is_empty());
    match realize(p, budget) {
        Ok(model) => {
            let mut first: HashMap<ArrowId, usize> = HashMap::new();
            for (m, rep) in model.representatives.iter().enumerate() {
                let image = map.evaluate(c, rep);
                if let Some(&prev) = first.get(&image) {
                    if report.collisions.len() < MAX_REPORTED {
                        report.collisions.push((
                            p.display_path(&model.representatives[prev]),
                            p.display_path(rep),
                        ));
                    }
                } else {
                    first.insert(image, m);
                }
            }
            report.injective = Verdict::from_bool(report.collisions.is_empty());
        }
        Err(u) => {
            report
                .notes
                .push(format!("presented category not realized: {u}"));
            let paths = enumerate_paths(p, budget.max_len, budget.max_classes);
            let Some(paths) = paths else {
                report.notes.push("path universe exceeds max_classes".into());
                return Ok(report);
            };
            for q in &paths {
                let Some(w) = &witness[map.evaluate(c, q)] else {
                    continue;
                };
                if w.word == q.word {
                    continue;
                }
                if let EqualityDecision::Distinct { .. } = decide_equal(p, q, w, budget)? {
                    report.collisions.push((p.display_path(w), p.display_path(q)));
                    report.injective = Verdict::No;
                    break;
                }
            }
        }
    }
    Ok(report)
}

/// The grid presentation of `chain(d_0) × ⋯ × chain(d_k)`: one generator per
/// unit step and one relation per unit square. The map goes to
/// [`crate::fincat::product_of_chains`].
pub fn grid_presentation(dims: &[usize]) -> (Presentation, GeneratorMap) {
    let radices: Vec<usize> = dims.iter().map(|d| d + 1).collect();
    let total: usize = radices.iter().product();
    let coords = |mut i: usize| {
        let mut x = vec![0; dims.len()];
        for k in (0..dims.len()).rev() {
            x[k] = i % radices[k];
            i /= radices[k];
        }
        x
    };
    let flat = |x: &[usize]| x.iter().zip(&radices).fold(0, |acc, (&v, &r)| acc * r + v);
    let name = |x: &[usize]| {
        format!(
            "({})",
            x.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",")
        )
    };
    let chains: Vec<ExplicitCategory> = dims.iter().map(|&d| crate::fincat::chain(d)).collect();
    let arrow_index = |parts: &[ArrowId]| {
        parts
            .iter()
            .zip(&chains)
            .fold(0, |acc, (&a, ch)| acc * ch.arrow_count() + a)
    };
    let mut p = Presentation::new((0..total).map(|i| name(&coords(i))).collect());
    let mut images = Vec::new();
    let mut step: HashMap<(usize, usize), usize> = HashMap::new();
    for i in 0..total {
        let x = coords(i);
        for k in 0..dims.len() {
            if x[k] < dims[k] {
                let mut y = x.clone();
                y[k] += 1;
                let g = p.add_generator(format!("e{k}@{}", name(&x)), i, flat(&y), Tags::none());
                step.insert((i, k), g);
                let parts: Vec<ArrowId> = (0..dims.len())
                    .map(|j| {
                        if j == k {
                            chains[j].hom(x[j], x[j] + 1)[0]
                        } else {
                            chains[j].identity(x[j])
                        }
                    })
                    .collect();
                images.push(arrow_index(&parts));
            }
        }
    }
    for i in 0..total {
        let x = coords(i);
        for k in 0..dims.len() {
            for l in k + 1..dims.len() {
                if x[k] < dims[k] && x[l] < dims[l] {
                    let (mut xk, mut xl, mut xkl) = (x.clone(), x.clone(), x.clone());
                    xk[k] += 1;
                    xl[l] += 1;
                    xkl[k] += 1;
                    xkl[l] += 1;
                    let (ik, il) = (flat(&xk), flat(&xl));
                    p.add_relation(
                        Path {
                            src: i,
                            tgt: flat(&xkl),
                            word: vec![step[&(i, k)], step[&(ik, l)]],
                        },
                        Path {
                            src: i,
                            tgt: flat(&xkl),
                            word: vec![step[&(i, l)], step[&(il, k)]],
                        },
                    );
                }
            }
        }
    }
    let map = GeneratorMap {
        objects: (0..total).collect(),
        generators: images,
    };
    (p, map)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::{chain, product, product_of_chains};

    fn square() -> Presentation {
        let (p, _) = grid_presentation(&[1, 1]);
        p
    }

    fn idempotent() -> (Presentation, Path, Path) {
        let mut p = Presentation::new(vec!["x".into()]);
        let e = p.add_generator("e", 0, 0, Tags::none());
        p.add_relation(
            Path { src: 0, tgt: 0, word: vec![e, e] },
            Path { src: 0, tgt: 0, word: vec![e] },
        );
        (p, Path { src: 0, tgt: 0, word: vec![e] }, Path::identity(0))
    }

    fn parallel_pair() -> Presentation {
        let mut p = Presentation::new(vec!["x".into(), "y".into()]);
        p.add_generator("f", 0, 1, Tags::none());
        p.add_generator("g", 0, 1, Tags::none());
        p
    }

    #[test]
    fn square_paths_are_equal() {
        let p = square();
        let (a, b) = (&p.relations[0].0, &p.relations[0].1);
        let d = decide_equal(&p, a, b, Budget::default()).unwrap();
        assert!(d.is_equal());
        assert!(d.verify(&p, a, b));
    }

    #[test]
    fn free_parallel_generators_are_distinct() {
        let p = parallel_pair();
        let (f, g) = (p.generator_path(0), p.generator_path(1));
        let d = decide_equal(&p, &f, &g, Budget::default()).unwrap();
        assert!(d.is_distinct());
        assert!(d.verify(&p, &f, &g));
        assert!(!d.verify(&p, &f, &f));
    }

    #[test]
    fn zero_budget_is_unknown() {
        let (p, e, _) = idempotent();
        let ee = e.then(&e);
        let budget = Budget { max_len: 0, ..Default::default() };
        assert!(decide_equal(&p, &e, &ee, budget).unwrap().is_unknown());
    }

    #[test]
    fn non_parallel_paths_are_a_usage_error() {
        let mut p = parallel_pair();
        p.add_generator("h", 1, 1, Tags::none());
        let err = decide_equal(&p, &p.generator_path(0), &p.generator_path(2), Budget::default());
        assert!(matches!(err, Err(Error::Usage(_))));
    }

    #[test]
    fn model_certificate_when_class_is_infinite() {
        let (p, e, id) = idempotent();
        let d = decide_equal(&p, &e, &id, Budget { max_len: 3, ..Default::default() }).unwrap();
        match &d {
            EqualityDecision::Distinct {
                certificate: DistinctCertificate::Model { category, .. },
            } => assert_eq!(category.arrows.len(), 2),
            other => panic!("expected a model certificate, got {other:?}"),
        }
        assert!(d.verify(&p, &e, &id));
        let ee = e.then(&e).then(&e);
        let d = decide_equal(&p, &ee, &e, Budget { max_len: 3, ..Default::default() }).unwrap();
        assert!(d.is_equal());
        assert!(d.verify(&p, &ee, &e));
    }

    #[test]
    fn equal_traces_are_replayable_json() {
        let p = square();
        let (a, b) = (&p.relations[0].0, &p.relations[0].1);
        let d = decide_equal(&p, a, b, Budget::default()).unwrap();
        let s = serde_json::to_string(&d).unwrap();
        let back: EqualityDecision = serde_json::from_str(&s).unwrap();
        assert!(back.verify(&p, a, b));
    }

    #[test]
    fn realize_square() {
        let r = realize(&square(), Budget::default()).unwrap();
        assert_eq!(r.category.object_count(), 4);
        assert_eq!(r.category.arrow_count(), 9);
        assert!(validate_category(&r.category).is_valid());
        assert_eq!(product(&chain(1), &chain(1)).arrow_count(), 9);
    }

    #[test]
    fn realize_discrete_and_free() {
        let p = Presentation::new(vec!["a".into(), "b".into(), "c".into()]);
        let r = realize(&p, Budget::default()).unwrap();
        assert_eq!((r.category.object_count(), r.category.arrow_count()), (3, 3));
        let mut free = Presentation::new(vec!["x".into()]);
        free.add_generator("s", 0, 0, Tags::none());
        assert!(realize(&free, Budget::default()).is_err());
    }

    #[test]
    fn realize_involution() {
        let mut p = Presentation::new(vec!["x".into()]);
        let s = p.add_generator("s", 0, 0, Tags::none());
        p.add_relation(Path { src: 0, tgt: 0, word: vec![s, s] }, Path::identity(0));
        let r = realize(&p, Budget::default()).unwrap();
        assert_eq!(r.category.arrow_count(), 2);
        let ss = r.category.compose(r.generator_image[s], r.generator_image[s]);
        assert!(r.category.is_identity(ss));
    }

    #[test]
    fn well_definedness() {
        let (p, map) = grid_presentation(&[1, 1]);
        let c = product_of_chains(&[1, 1]);
        assert!(check_functor_well_defined(&p, &c, &map).unwrap());

        // the two sides of the square sent to distinct parallel arrows
        let target = ExplicitCategory::from_names(
            &["00", "01", "10", "11"],
            &[
                ("1_00", "00", "00"), ("1_01", "01", "01"), ("1_10", "10", "10"), ("1_11", "11", "11"),
                ("a", "00", "10"), ("b", "00", "01"), ("c", "10", "11"), ("d", "01", "11"),
                ("ac", "00", "11"), ("bd", "00", "11"),
            ],
            &[("00", "1_00"), ("01", "1_01"), ("10", "1_10"), ("11", "1_11")],
            &[
                ("1_00", "1_00", "1_00"), ("1_01", "1_01", "1_01"), ("1_10", "1_10", "1_10"), ("1_11", "1_11", "1_11"),
                ("1_00", "a", "a"), ("a", "1_10", "a"), ("1_00", "b", "b"), ("b", "1_01", "b"),
                ("1_10", "c", "c"), ("c", "1_11", "c"), ("1_01", "d", "d"), ("d", "1_11", "d"),
                ("1_00", "ac", "ac"), ("ac", "1_11", "ac"), ("1_00", "bd", "bd"), ("bd", "1_11", "bd"),
                ("a", "c", "ac"), ("b", "d", "bd"),
            ],
        )
        .unwrap();
        assert!(validate_category(&target).is_valid());
        let o = |n: &str| target.find_object(n).unwrap();
        let a = |n: &str| target.find_arrow(n).unwrap();
        // grid objects: (0,0),(0,1),(1,0),(1,1); generators e0@(0,0), e1@(0,0), e1@(1,0), e0@(0,1)
        let names: Vec<&str> = p.generators.iter().map(|g| g.name.as_str()).collect();
        let gens = names
            .iter()
            .map(|n| match *n {
                "e0@(0,0)" => a("a"),
                "e1@(0,0)" => a("b"),
                "e1@(1,0)" => a("c"),
                "e0@(0,1)" => a("d"),
                other => panic!("unexpected generator {other}"),
            })
            .collect();
        let bad = GeneratorMap {
            objects: vec![o("00"), o("01"), o("10"), o("11")],
            generators: gens,
        };
        assert!(!check_functor_well_defined(&p, &target, &bad).unwrap());

        let free = parallel_pair();
        let pp_map = GeneratorMap { objects: vec![0, 3], generators: vec![c.hom(0, 3)[0], c.hom(0, 3)[0]] };
        assert!(check_functor_well_defined(&free, &c, &pp_map).unwrap());
        let wrong = GeneratorMap { objects: vec![0, 1], generators: vec![c.hom(0, 3)[0], c.hom(0, 3)[0]] };
        assert!(matches!(check_functor_well_defined(&free, &chain(1), &wrong), Err(Error::Usage(_))));
    }

    #[test]
    fn square_iso_and_its_failures() {
        let (p, map) = grid_presentation(&[1, 1]);
        let c = product_of_chains(&[1, 1]);
        let report = compare_presented_to_explicit(&p, &c, &map, Budget::default()).unwrap();
        assert!(report.is_iso(), "{report:?}");

        let mut free = p.clone();
        free.relations.clear();
        let report = compare_presented_to_explicit(&free, &c, &map, Budget::default()).unwrap();
        assert_eq!(report.injective, Verdict::No);
        assert_eq!(report.surjective, Verdict::Yes);
        assert_eq!(report.collisions.len(), 1);

        // drop one generator: the arrows through it are unreachable
        let mut partial = Presentation::new(p.objects.clone());
        let keep: Vec<usize> = (0..p.generators.len()).filter(|&g| g != 0).collect();
        for &g in &keep {
            let gen = &p.generators[g];
            partial.add_generator(gen.name.clone(), gen.src, gen.tgt, gen.tags);
        }
        let pmap = GeneratorMap {
            objects: map.objects.clone(),
            generators: keep.iter().map(|&g| map.generators[g]).collect(),
        };
        let report = compare_presented_to_explicit(&partial, &c, &pmap, Budget::default()).unwrap();
        assert_eq!(report.surjective, Verdict::No);
        assert!(!report.unreached.is_empty());
    }

    #[test]
    fn grids_realize_to_products() {
        for dims in [vec![2], vec![1, 2], vec![2, 2], vec![1, 1, 1]] {
            let (p, map) = grid_presentation(&dims);
            let c = product_of_chains(&dims);
            let report = compare_presented_to_explicit(&p, &c, &map, Budget::default()).unwrap();
            assert!(report.is_iso(), "{dims:?}: {report:?}");
        }
    }

    #[test]
    fn presentation_json_round_trip() {
        let mut p = square();
        p.generators[0].tags = Tags::of(&[Tag::V(2), Tag::W]);
        let json = serde_json::to_string(&p.to_json_value()).unwrap();
        let back = Presentation::from_json_value(&serde_json::from_str(&json).unwrap()).unwrap();
        assert_eq!(back, p);
    }

    #[test]
    fn tags() {
        let t = Tags::of(&[Tag::W]);
        assert!(t.belongs_to(Tag::V(3)));
        assert!(!Tags::of(&[Tag::V(1)]).belongs_to(Tag::V(2)));
        assert_eq!("v12".parse::<Tag>().unwrap(), Tag::V(12));
        assert!("x".parse::<Tag>().is_err());
        assert_eq!(Tags::of(&[Tag::V(2), Tag::W]).iter().collect::<Vec<_>>(), vec![Tag::V(2), Tag::W]);
    }
}
