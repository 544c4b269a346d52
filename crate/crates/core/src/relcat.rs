//! n-relative categories: an ambient category with wide subcategories
//! `v_1, …, v_n` and `w ⊆ v_i`.

use std::collections::{BTreeMap, HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fincat::{
    chain, product, search_functors, validate_category, ArrowId, CategoryJson, ExplicitCategory,
    Functor, ObjId, SearchLimits,
};
use crate::prescat::{
    compare_presented_to_explicit, realize, Budget, GeneratorMap, IsoReport, Path, Presentation,
    Realization, Tag, Tags, Undecided, UnionFind,
};

/// An n-relative category with an explicit ambient category.
#[derive(Clone, Debug)]
pub struct NRelCategory {
    n: usize,
    ambient: ExplicitCategory,
    v: Vec<Vec<bool>>,
    w: Vec<bool>,
}

impl NRelCategory {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn ambient(&self) -> &ExplicitCategory {
        &self.ambient
    }

    /// Whether `a` lies in `v_i`, `1 ≤ i ≤ n`.
    pub fn in_v(&self, i: usize, a: ArrowId) -> bool {
        self.v[i - 1][a]
    }

    pub fn in_w(&self, a: ArrowId) -> bool {
        self.w[a]
    }

    pub fn in_tag(&self, t: Tag, a: ArrowId) -> bool {
        match t {
            Tag::V(i) => self.in_v(i, a),
            Tag::W => self.in_w(a),
        }
    }

    /// The structure subcategories containing `a`.
    pub fn tags(&self, a: ArrowId) -> Tags {
        let mut t = Tags::none();
        for i in 1..=self.n {
            if self.in_v(i, a) {
                t = t.with(Tag::V(i));
            }
        }
        if self.in_w(a) {
            t = t.with(Tag::W);
        }
        t
    }

    pub fn v_arrows(&self, i: usize) -> Vec<ArrowId> {
        (0..self.ambient.arrow_count()).filter(|&a| self.in_v(i, a)).collect()
    }

    pub fn w_arrows(&self) -> Vec<ArrowId> {
        (0..self.ambient.arrow_count()).filter(|&a| self.in_w(a)).collect()
    }

    /// Assembles the value without checking the structural invariants.
    pub(crate) fn from_masks(
        n: usize,
        ambient: ExplicitCategory,
        v: Vec<Vec<bool>>,
        w: Vec<bool>,
    ) -> Self {
        NRelCategory { n, ambient, v, w }
    }

    /// Arrows not in the compositional closure of `v_1 ∪ ⋯ ∪ v_n`.
    pub fn ungenerated_arrows(&self) -> Vec<ArrowId> {
        let c = &self.ambient;
        let seed = c.arrow_ids().filter(|&a| (1..=self.n).any(|i| self.in_v(i, a)));
        let closure = c.closure(seed);
        c.arrow_ids().filter(|a| !closure.contains(a)).collect()
    }

    /// Every structural invariant violation: non-wide or non-closed
    /// subcategories and `w ⊄ v_i`.
    pub fn structure_problems(&self) -> Vec<String> {
        let c = &self.ambient;
        let mut out = Vec::new();
        let check = |label: String, mask: &[bool], out: &mut Vec<String>| {
            for o in c.objects() {
                if !mask[c.identity(o)] {
                    out.push(format!("{label} misses the identity of {}", c.object_name(o)));
                }
            }
            for (f, g) in c.composable_pairs() {
                if mask[f] && mask[g] && !mask[c.compose(f, g)] {
                    out.push(format!(
                        "{label} is not closed under composing {} then {}",
                        c.arrow_name(f),
                        c.arrow_name(g)
                    ));
                }
            }
        };
        for i in 1..=self.n {
            check(format!("v{i}"), &self.v[i - 1], &mut out);
        }
        check("w".into(), &self.w, &mut out);
        for i in 1..=self.n {
            for a in c.arrow_ids() {
                if self.w[a] && !self.v[i - 1][a] {
                    out.push(format!("w arrow {} is not in v{i}", c.arrow_name(a)));
                }
            }
        }
        out
    }

    /// The presentation with one generator per non-identity arrow, tagged by
    /// membership, and one relation per composite.
    pub fn to_presented(&self) -> (PresentedNRel, GeneratorMap) {
        let c = &self.ambient;
        let mut p = Presentation::new(c.objects().map(|o| c.object_name(o).to_string()).collect());
        let mut gen_of = vec![usize::MAX; c.arrow_count()];
        let mut images = Vec::new();
        for a in c.arrow_ids().filter(|&a| !c.is_identity(a)) {
            gen_of[a] = p.add_generator(c.arrow_name(a), c.src(a), c.tgt(a), self.tags(a));
            images.push(a);
        }
        let word = |a: ArrowId| -> Vec<usize> {
            if c.is_identity(a) {
                vec![]
            } else {
                vec![gen_of[a]]
            }
        };
        for (f, g) in c.composable_pairs() {
            if c.is_identity(f) || c.is_identity(g) {
                continue;
            }
            let h = c.compose(f, g);
            p.add_relation(
                Path {
                    src: c.src(f),
                    tgt: c.tgt(g),
                    word: vec![gen_of[f], gen_of[g]],
                },
                Path {
                    src: c.src(f),
                    tgt: c.tgt(g),
                    word: word(h),
                },
            );
        }
        let map = GeneratorMap {
            objects: c.objects().collect(),
            generators: images,
        };
        (
            PresentedNRel {
                n: self.n,
                presentation: p,
            },
            map,
        )
    }

    pub fn to_json_value(&self) -> NRelJson {
        let names = |mask: &[bool]| {
            let mut v: Vec<String> = (0..mask.len())
                .filter(|&a| mask[a])
                .map(|a| self.ambient.arrow_name(a).to_string())
                .collect();
            v.sort();
            v
        };
        NRelJson {
            category: self.ambient.to_json_value(),
            n: self.n,
            v: self.v.iter().map(|m| names(m)).collect(),
            w: names(&self.w),
        }
    }

    pub fn from_json_value(json: &NRelJson) -> Result<Self> {
        let ambient = ExplicitCategory::from_json_value(&json.category)?;
        let lookup = |names: &[String]| {
            names
                .iter()
                .map(|n| {
                    ambient
                        .find_arrow(n)
                        .ok_or_else(|| Error::Invalid(vec![format!("unknown arrow `{n}`")]))
                })
                .collect::<Result<Vec<ArrowId>>>()
        };
        let v = json.v.iter().map(|names| lookup(names)).collect::<Result<Vec<_>>>()?;
        let w = lookup(&json.w)?;
        make_nrelcat(json.n, ambient, v, w)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_json_value()).expect("category serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Self::from_json_value(&serde_json::from_str(s)?)
    }
}

/// JSON form: the category format plus `n`, `v` and `w`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NRelJson {
    #[serde(flatten)]
    pub category: CategoryJson,
    pub n: usize,
    pub v: Vec<Vec<String>>,
    pub w: Vec<String>,
}

/// Builds an n-relative category, enforcing that every `v_i` and `w` is a wide
/// subcategory and that `w ⊆ v_i`. The axioms are checked separately.
pub fn make_nrelcat(
    n: usize,
    ambient: ExplicitCategory,
    v: Vec<Vec<ArrowId>>,
    w: Vec<ArrowId>,
) -> Result<NRelCategory> {
    if n == 0 {
        return Err(Error::usage("n must be positive"));
    }
    if v.len() != n {
        return Err(Error::usage(format!("expected {n} subcategories v_i, got {}", v.len())));
    }
    let count = ambient.arrow_count();
    let mask = |arrows: &[ArrowId]| -> Result<Vec<bool>> {
        let mut m = vec![false; count];
        for &a in arrows {
            *m.get_mut(a)
                .ok_or_else(|| Error::Invalid(vec![format!("arrow index {a} out of range")]))? = true;
        }
        Ok(m)
    };
    let v = v.iter().map(|a| mask(a)).collect::<Result<Vec<_>>>()?;
    let w = mask(&w)?;
    let c = NRelCategory { n, ambient, v, w };
    let problems = c.structure_problems();
    if problems.is_empty() {
        Ok(c)
    } else {
        Err(Error::Invalid(problems))
    }
}

/// Axiom (i): every arrow is a composite of arrows from the `v_i`.
pub fn check_axiom_generation(c: &NRelCategory) -> bool {
    c.ungenerated_arrows().is_empty()
}

/// The presentation whose generators are the non-identity arrows of each
/// `v_i` (one copy per `i`) and whose relations are the commuting squares
/// `x₁;y₂ = y₁;x₂` with `x₁, x₂ ∈ v_i` and `y₁, y₂ ∈ v_j`, including `i = j`
/// and identity edges.
pub fn square_presentation(c: &NRelCategory) -> (Presentation, GeneratorMap) {
    let amb = &c.ambient;
    let mut p = Presentation::new(amb.objects().map(|o| amb.object_name(o).to_string()).collect());
    let mut copy: Vec<HashMap<ArrowId, usize>> = vec![HashMap::new(); c.n];
    let mut images = Vec::new();
    for i in 1..=c.n {
        for a in c.v_arrows(i) {
            if amb.is_identity(a) {
                continue;
            }
            let mut tags = Tags::of(&[Tag::V(i)]);
            if c.in_w(a) {
                tags = tags.with(Tag::W);
            }
            let g = p.add_generator(format!("{}@v{i}", amb.arrow_name(a)), amb.src(a), amb.tgt(a), tags);
            copy[i - 1].insert(a, g);
            images.push(a);
        }
    }
    // composable pairs (x ∈ v_i, y ∈ v_j) grouped by composite
    let pairs_by_composite = |i: usize, j: usize| {
        let mut groups: HashMap<ArrowId, Vec<Vec<usize>>> = HashMap::new();
        for x in c.v_arrows(i) {
            for &y in amb.outgoing(amb.tgt(x)) {
                if !c.in_v(j, y) {
                    continue;
                }
                let mut word = Vec::new();
                if !amb.is_identity(x) {
                    word.push(copy[i - 1][&x]);
                }
                if !amb.is_identity(y) {
                    word.push(copy[j - 1][&y]);
                }
                groups.entry(amb.compose(x, y)).or_default().push(word);
            }
        }
        groups
    };
    let mut seen: HashSet<(ObjId, Vec<usize>, Vec<usize>)> = HashSet::new();
    for i in 1..=c.n {
        for j in i..=c.n {
            let ij = pairs_by_composite(i, j);
            let ji = if i == j { ij.clone() } else { pairs_by_composite(j, i) };
            let mut composites: Vec<&ArrowId> = ij.keys().collect();
            composites.sort();
            for h in composites {
                let (Some(a_side), Some(b_side)) = (ij.get(h), ji.get(h)) else {
                    continue;
                };
                let (src, tgt) = (amb.src(*h), amb.tgt(*h));
                let mut relate = |l: &Vec<usize>, r: &Vec<usize>| {
                    if l != r && seen.insert((src, l.clone(), r.clone())) {
                        p.add_relation(
                            Path { src, tgt, word: l.clone() },
                            Path { src, tgt, word: r.clone() },
                        );
                    }
                };
                for a in a_side {
                    relate(a, &b_side[0]);
                }
                for b in b_side {
                    relate(b, &a_side[0]);
                }
            }
        }
    }
    let map = GeneratorMap {
        objects: amb.objects().collect(),
        generators: images,
    };
    (p, map)
}

/// Axiom (ii): the ambient category is presented by the `v_i` and their
/// commuting squares. Requires axiom (i).
pub fn check_axiom_relations(c: &NRelCategory, budget: Budget) -> Result<IsoReport> {
    if !check_axiom_generation(c) {
        return Err(Error::usage("axiom (i) fails, so relations are not checked"));
    }
    let (p, map) = square_presentation(c);
    compare_presented_to_explicit(&p, &c.ambient, &map, budget)
}

/// `p^w`: every structure subcategory is all of `chain(p)`.
pub fn chain_w(p: usize, n: usize) -> NRelCategory {
    let c = chain(p);
    let all = vec![true; c.arrow_count()];
    NRelCategory::from_masks(n, c, vec![all.clone(); n], all)
}

/// `p^{v_i}`: `v_i` is all of `chain(p)`, the others are discrete.
pub fn chain_v(p: usize, i: usize, n: usize) -> NRelCategory {
    assert!((1..=n).contains(&i), "chain_v needs 1 <= i <= n");
    let c = chain(p);
    let all = vec![true; c.arrow_count()];
    let ids: Vec<bool> = c.arrow_ids().map(|a| c.is_identity(a)).collect();
    let v = (1..=n).map(|j| if j == i { all.clone() } else { ids.clone() }).collect();
    NRelCategory::from_masks(n, c, v, ids)
}

/// Chain with structure given by a tag: `p^w` or `p^{v_i}`.
pub fn chain_tagged(p: usize, tag: Tag, n: usize) -> NRelCategory {
    match tag {
        Tag::W => chain_w(p, n),
        Tag::V(i) => chain_v(p, i, n),
    }
}

fn product_pair(a: &NRelCategory, b: &NRelCategory) -> NRelCategory {
    let ambient = product(&a.ambient, &b.ambient);
    let nb = b.ambient.arrow_count();
    let combine = |ma: &[bool], mb: &[bool]| -> Vec<bool> {
        (0..ambient.arrow_count()).map(|x| ma[x / nb] && mb[x % nb]).collect()
    };
    let v = (0..a.n).map(|i| combine(&a.v[i], &b.v[i])).collect();
    let w = combine(&a.w, &b.w);
    NRelCategory::from_masks(a.n, ambient, v, w)
}

/// Componentwise product, nested to the right like [`crate::fincat::product`].
pub fn product_nrel(factors: &[NRelCategory]) -> Result<NRelCategory> {
    let (last, rest) = factors
        .split_last()
        .ok_or_else(|| Error::usage("product of an empty list"))?;
    if factors.iter().any(|f| f.n != last.n) {
        return Err(Error::usage("factors have different n"));
    }
    Ok(rest
        .iter()
        .rev()
        .fold(last.clone(), |acc, f| product_pair(f, &acc)))
}

/// Whether `f` carries every `v_i` and `w` of `c` into those of `d`.
pub fn is_relative_functor(f: &Functor, c: &NRelCategory, d: &NRelCategory) -> bool {
    f.is_functor(&c.ambient, &d.ambient)
        && c.ambient
            .arrow_ids()
            .all(|a| c.tags(a).is_subset(d.tags(f.arrow_map[a])))
}

/// All relative functors `c → d`.
pub fn enumerate_relative_functors(
    c: &NRelCategory,
    d: &NRelCategory,
    limits: SearchLimits,
) -> Result<Vec<Functor>> {
    if c.n != d.n {
        return Err(Error::usage("relative functors need equal n"));
    }
    let candidates = (d.ambient.object_count() as f64).powi(c.ambient.object_count() as i32);
    if candidates > limits.max_object_maps {
        return Err(Error::Resource {
            bound: "max_object_maps",
            detail: format!(
                "{}^{} candidate object maps exceed {}",
                d.ambient.object_count(),
                c.ambient.object_count(),
                limits.max_object_maps
            ),
        });
    }
    let mut out = Vec::new();
    search_relative_functors(c, d, limits.max_nodes, &mut |f| out.push(f.clone()))?;
    Ok(out)
}

/// Backtracking search over relative functors with only a node budget.
pub(crate) fn search_relative_functors(
    c: &NRelCategory,
    d: &NRelCategory,
    max_nodes: u64,
    visit: &mut dyn FnMut(&Functor),
) -> Result<()> {
    let ct: Vec<Tags> = c.ambient.arrow_ids().map(|a| c.tags(a)).collect();
    let dt: Vec<Tags> = d.ambient.arrow_ids().map(|a| d.tags(a)).collect();
    search_functors(
        &c.ambient,
        &d.ambient,
        &|a, b| ct[a].is_subset(dt[b]),
        max_nodes,
        visit,
    )
}

/// An n-relative category whose ambient category is given by a presentation.
/// A generator lies in `v_i` when tagged `v_i` or `w`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PresentedNRel {
    pub n: usize,
    pub presentation: Presentation,
}

impl PresentedNRel {
    /// Materializes the ambient category; `v_i` and `w` are the subcategories
    /// generated by the corresponding generators.
    pub fn realize(&self, budget: Budget) -> std::result::Result<(NRelCategory, Realization), Undecided> {
        let r = realize(&self.presentation, budget)?;
        let c = &r.category;
        let gens = &self.presentation.generators;
        let closure_of = |t: Tag| -> Vec<bool> {
            let seed = (0..gens.len())
                .filter(|&g| match t {
                    Tag::W => gens[g].tags.lists(Tag::W),
                    Tag::V(_) => gens[g].tags.belongs_to(t),
                })
                .map(|g| r.generator_image[g]);
            let set = c.closure(seed);
            c.arrow_ids().map(|a| set.contains(&a)).collect()
        };
        let v = (1..=self.n).map(|i| closure_of(Tag::V(i))).collect();
        let w = closure_of(Tag::W);
        Ok((NRelCategory::from_masks(self.n, c.clone(), v, w), r))
    }
}

/// A diagram of n-relative categories: one value per index object and a
/// relative functor per index arrow (identities may carry anything).
#[derive(Clone, Debug)]
pub struct NRelDiagram {
    pub index: ExplicitCategory,
    pub values: Vec<NRelCategory>,
    pub maps: Vec<Functor>,
}

/// A colimit at the level of presentations, with the insertion of each piece.
#[derive(Clone, Debug)]
pub struct NRelColimit {
    pub nrel: PresentedNRel,
    /// For each index object, its objects' classes in the colimit.
    pub object_of: Vec<Vec<ObjId>>,
    /// For each index object, the colimit path of each of its arrows.
    pub path_of: Vec<Vec<Path>>,
}

/// Colimit of a diagram of explicit n-relative categories: disjoint union of
/// the pieces' presentations, glued along every index arrow.
pub fn colim_nrelcat(diagram: &NRelDiagram) -> Result<NRelColimit> {
    let idx = &diagram.index;
    if diagram.values.len() != idx.object_count() || diagram.maps.len() != idx.arrow_count() {
        return Err(Error::usage("diagram does not match its index category"));
    }
    let n = diagram.values.first().map_or(1, |v| v.n);
    if diagram.values.iter().any(|v| v.n != n) {
        return Err(Error::usage("pieces have different n"));
    }
    let mut offset = Vec::new();
    let mut total = 0;
    for v in &diagram.values {
        offset.push(total);
        total += v.ambient.object_count();
    }
    let mut uf = UnionFind::new(total);
    for u in idx.arrow_ids().filter(|&u| !idx.is_identity(u)) {
        let (k, l) = (idx.src(u), idx.tgt(u));
        let f = &diagram.maps[u];
        for o in diagram.values[k].ambient.objects() {
            uf.union(offset[k] + o, offset[l] + f.object_map[o]);
        }
    }
    let mut class_id: BTreeMap<usize, ObjId> = BTreeMap::new();
    let mut names = Vec::new();
    let mut object_of = Vec::new();
    for (k, v) in diagram.values.iter().enumerate() {
        let mut objs = Vec::new();
        for o in v.ambient.objects() {
            let root = uf.find(offset[k] + o);
            let id = *class_id.entry(root).or_insert_with(|| {
                names.push(format!("{}:{}", idx.object_name(k), v.ambient.object_name(o)));
                names.len() - 1
            });
            objs.push(id);
        }
        object_of.push(objs);
    }
    let mut p = Presentation::new(names);
    let mut path_of = Vec::new();
    for (k, v) in diagram.values.iter().enumerate() {
        let c = &v.ambient;
        let mut paths = Vec::new();
        for a in c.arrow_ids() {
            let (s, t) = (object_of[k][c.src(a)], object_of[k][c.tgt(a)]);
            let word = if c.is_identity(a) {
                vec![]
            } else {
                let name = format!("{}:{}", idx.object_name(k), c.arrow_name(a));
                vec![p.add_generator(name, s, t, v.tags(a))]
            };
            paths.push(Path { src: s, tgt: t, word });
        }
        for (f, g) in c.composable_pairs() {
            if c.is_identity(f) || c.is_identity(g) {
                continue;
            }
            p.add_relation(paths[f].then(&paths[g]), paths[c.compose(f, g)].clone());
        }
        path_of.push(paths);
    }
    for u in idx.arrow_ids().filter(|&u| !idx.is_identity(u)) {
        let (k, l) = (idx.src(u), idx.tgt(u));
        let f = &diagram.maps[u];
        for a in diagram.values[k].ambient.arrow_ids() {
            let (lhs, rhs) = (&path_of[k][a], &path_of[l][f.arrow_map[a]]);
            if lhs != rhs {
                p.add_relation(lhs.clone(), rhs.clone());
            }
        }
    }
    Ok(NRelColimit {
        nrel: PresentedNRel { n, presentation: p },
        object_of,
        path_of,
    })
}

/// Checks `c` is a category and a valid n-relative structure, and reports
/// both axioms.
#[derive(Clone, Debug, Serialize)]
pub struct NRelValidation {
    pub category_violations: Vec<String>,
    pub structure_problems: Vec<String>,
    pub axiom_generation: bool,
    pub ungenerated: Vec<String>,
    pub axiom_relations: Option<IsoReport>,
}

impl NRelValidation {
    pub fn is_valid(&self) -> bool {
        self.category_violations.is_empty()
            && self.structure_problems.is_empty()
            && self.axiom_generation
            && self.axiom_relations.as_ref().is_some_and(|r| r.is_iso())
    }
}

pub fn validate_nrel(c: &NRelCategory, budget: Budget) -> Result<NRelValidation> {
    let category_violations: Vec<String> = validate_category(&c.ambient)
        .violations
        .iter()
        .map(|v| v.to_string())
        .collect();
    let structure_problems = c.structure_problems();
    let ungenerated: Vec<String> = c
        .ungenerated_arrows()
        .into_iter()
        .map(|a| c.ambient.arrow_name(a).to_string())
        .collect();
    let axiom_generation = ungenerated.is_empty();
    let axiom_relations = if axiom_generation && category_violations.is_empty() {
        Some(check_axiom_relations(c, budget)?)
    } else {
        None
    };
    Ok(NRelValidation {
        category_violations,
        structure_problems,
        axiom_generation,
        ungenerated,
        axiom_relations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{counterexamples, nrel_corpus};
    use crate::fincat::enumerate_functors;
    use crate::prescat::Verdict;

    fn ids(c: &ExplicitCategory) -> Vec<ArrowId> {
        c.objects().map(|o| c.identity(o)).collect()
    }

    #[test]
    fn make_accepts_standard_examples() {
        let c = chain(1);
        let one = make_nrelcat(1, c.clone(), vec![c.arrow_ids().collect()], ids(&c)).unwrap();
        assert_eq!(one.v_arrows(1), chain_v(1, 1, 1).v_arrows(1));
        assert_eq!(one.w_arrows(), chain_v(1, 1, 1).w_arrows());
        for n in 1..=3 {
            let t = chain(0);
            let all: Vec<ArrowId> = t.arrow_ids().collect();
            assert!(make_nrelcat(n, t, vec![all.clone(); n], all).is_ok());
        }
    }

    #[test]
    fn make_rejects_bad_structure() {
        let c = chain(1);
        let err = make_nrelcat(1, c.clone(), vec![ids(&c)], c.arrow_ids().collect()).unwrap_err();
        assert!(matches!(err, Error::Invalid(ref p) if p.iter().any(|s| s.contains("not in v1"))));
        let c2 = chain(2);
        let steps = vec![c2.identity(0), c2.identity(1), c2.identity(2), c2.hom(0, 1)[0], c2.hom(1, 2)[0]];
        let err = make_nrelcat(1, c2.clone(), vec![steps], ids(&c2)).unwrap_err();
        assert!(matches!(err, Error::Invalid(ref p) if p.iter().any(|s| s.contains("not closed"))));
        let err = make_nrelcat(1, c2.clone(), vec![vec![c2.identity(0)]], vec![c2.identity(0)]).unwrap_err();
        assert!(matches!(err, Error::Invalid(ref p) if p.iter().any(|s| s.contains("misses the identity"))));
    }

    #[test]
    fn generation_axiom() {
        for i in 1..=3 {
            assert!(check_axiom_generation(&chain_v(3, i, 3)));
        }
        let c = chain(1);
        let discrete = make_nrelcat(1, c.clone(), vec![ids(&c)], ids(&c)).unwrap();
        assert!(!check_axiom_generation(&discrete));
        assert_eq!(discrete.ungenerated_arrows(), vec![c.hom(0, 1)[0]]);
        for entry in nrel_corpus() {
            let c = &entry.nrel;
            let all = make_nrelcat(
                c.n(),
                c.ambient().clone(),
                vec![c.ambient().arrow_ids().collect(); c.n()],
                c.w_arrows(),
            )
            .unwrap();
            assert!(check_axiom_generation(&all), "{}", entry.name);
        }
    }

    #[test]
    fn relations_axiom_on_corpus() {
        for entry in nrel_corpus() {
            let report = check_axiom_relations(&entry.nrel, Budget::default()).unwrap();
            assert!(report.is_iso(), "{}: {report:?}", entry.name);
        }
    }

    #[test]
    fn relations_axiom_fails_on_counterexamples() {
        let ce = counterexamples();
        assert!(!check_axiom_generation(&ce[0].nrel));
        for entry in &ce[1..] {
            assert!(check_axiom_generation(&entry.nrel), "{}", entry.name);
            let report = check_axiom_relations(&entry.nrel, Budget::default()).unwrap();
            assert_eq!(report.injective, Verdict::No, "{}", entry.name);
            assert_eq!(report.surjective, Verdict::Yes, "{}", entry.name);
        }
    }

    #[test]
    fn collapsed_parallel_pair_is_square_generated() {
        // one arrow lying in both v1 and v2: the square with identity edges
        // identifies its two generator copies
        let entry = nrel_corpus()
            .into_iter()
            .find(|e| e.name.starts_with("arrow in v1 and v2"))
            .unwrap();
        let (p, _) = square_presentation(&entry.nrel);
        assert_eq!(p.generators.len(), 2);
        assert!(check_axiom_relations(&entry.nrel, Budget::default()).unwrap().is_iso());
    }

    #[test]
    fn standard_chains() {
        assert_eq!(chain_w(0, 2).ambient().arrow_count(), 1);
        assert_eq!(chain_v(0, 1, 2).ambient().arrow_count(), 1);
        let c = chain_v(1, 1, 1);
        assert_eq!(c.v_arrows(1).len(), 3);
        assert_eq!(c.w_arrows().len(), 2);
        let w = chain_w(2, 2);
        assert_eq!(w.v_arrows(1).len(), 6);
        assert_eq!(w.v_arrows(2).len(), 6);
        assert_eq!(w.w_arrows().len(), 6);
        for p in 0..=2 {
            for n in 1..=3 {
                for i in 1..=n {
                    let c = chain_v(p, i, n);
                    assert!(c.structure_problems().is_empty());
                    assert!(check_axiom_relations(&c, Budget::default()).unwrap().is_iso());
                }
                let c = chain_w(p, n);
                assert!(check_axiom_relations(&c, Budget::default()).unwrap().is_iso());
            }
        }
    }

    #[test]
    fn products() {
        let c = product_nrel(&[chain_v(1, 1, 1), chain_w(1, 1)]).unwrap();
        assert_eq!(c.ambient().arrow_count(), 9);
        assert_eq!(c.v_arrows(1).len(), 9);
        // |1| × 1
        assert_eq!(c.w_arrows().len(), 2 * 3);
        assert!(c.structure_problems().is_empty());
        let p = product_nrel(&[chain_v(2, 2, 2), chain_v(2, 1, 2)]).unwrap();
        assert_eq!(p.w_arrows().len(), 3 * 3);
        assert_eq!(p.v_arrows(1).len(), 3 * 6);
        assert_eq!(p.v_arrows(2).len(), 6 * 3);
        let t = product_nrel(&[c.clone(), chain_w(0, 1)]).unwrap();
        assert_eq!(t.ambient().arrow_count(), c.ambient().arrow_count());
        assert_eq!(t.w_arrows(), c.w_arrows());
        assert!(product_nrel(&[chain_w(1, 1), chain_w(1, 2)]).is_err());
    }

    #[test]
    fn relative_functor_counts() {
        let lim = SearchLimits::default();
        let c = product_nrel(&[chain_v(1, 1, 1), chain_w(1, 1)]).unwrap();
        let d = chain_v(1, 1, 1);
        let rel = enumerate_relative_functors(&c, &d, lim).unwrap();
        // brute force: every functor, filtered by structure preservation
        let all = enumerate_functors(c.ambient(), d.ambient(), lim).unwrap();
        let filtered: Vec<&Functor> = all.iter().filter(|f| is_relative_functor(f, &c, &d)).collect();
        assert_eq!(rel.len(), filtered.len());
        assert_eq!(rel.len(), 3);
        assert_eq!(enumerate_relative_functors(&c, &chain_w(0, 1), lim).unwrap().len(), 1);
        assert_eq!(enumerate_relative_functors(&chain_w(0, 1), &c, lim).unwrap().len(), 4);
    }

    #[test]
    fn relative_functors_are_a_subset_of_functors() {
        let lim = SearchLimits::default();
        let corpus = nrel_corpus();
        for a in corpus.iter().filter(|e| e.nrel.n() == 1) {
            for b in corpus.iter().filter(|e| e.nrel.n() == 1) {
                let rel = enumerate_relative_functors(&a.nrel, &b.nrel, lim).unwrap();
                let all = enumerate_functors(a.nrel.ambient(), b.nrel.ambient(), lim).unwrap();
                let expected: HashSet<Functor> = all
                    .into_iter()
                    .filter(|f| is_relative_functor(f, &a.nrel, &b.nrel))
                    .collect();
                let got: HashSet<Functor> = rel.into_iter().collect();
                assert_eq!(got, expected, "{} -> {}", a.name, b.name);
            }
        }
    }

    #[test]
    fn colimit_over_terminal_index() {
        let c = product_nrel(&[chain_v(1, 1, 1), chain_w(1, 1)]).unwrap();
        let d = NRelDiagram {
            index: chain(0),
            values: vec![c.clone()],
            maps: vec![Functor::identity(c.ambient())],
        };
        let colim = colim_nrelcat(&d).unwrap();
        let (r, _) = colim.nrel.realize(Budget::default()).unwrap();
        assert_eq!(r.ambient().arrow_count(), 9);
        assert_eq!(r.w_arrows().len(), 6);
        assert_eq!(r.v_arrows(1).len(), 9);
    }

    #[test]
    fn pushout_of_two_arrows() {
        // span a ← c → b with c terminal, glued at a's target and b's source
        let index = ExplicitCategory::from_names(
            &["a", "b", "c"],
            &[("1a", "a", "a"), ("1b", "b", "b"), ("1c", "c", "c"), ("u", "c", "a"), ("v", "c", "b")],
            &[("a", "1a"), ("b", "1b"), ("c", "1c")],
            &[
                ("1a", "1a", "1a"),
                ("1b", "1b", "1b"),
                ("1c", "1c", "1c"),
                ("1c", "u", "u"),
                ("u", "1a", "u"),
                ("1c", "v", "v"),
                ("v", "1b", "v"),
            ],
        )
        .unwrap();
        let one = chain_v(1, 1, 1);
        let point = chain_w(0, 1);
        let at = |o: ObjId| Functor {
            object_map: vec![o],
            arrow_map: vec![one.ambient().identity(o)],
        };
        let u = index.find_arrow("u").unwrap();
        let v = index.find_arrow("v").unwrap();
        let mut maps = vec![Functor::identity(one.ambient()); index.arrow_count()];
        maps[u] = at(1);
        maps[v] = at(0);
        maps[index.find_arrow("1c").unwrap()] = Functor::identity(point.ambient());
        let values = vec![one.clone(), one, point];
        let colim = colim_nrelcat(&NRelDiagram { index, values, maps }).unwrap();
        assert_eq!(colim.nrel.presentation.objects.len(), 3);
        let (r, _) = colim.nrel.realize(Budget::default()).unwrap();
        assert_eq!(r.ambient().arrow_count(), 6);
        assert_eq!(r.v_arrows(1).len(), 6);
        assert_eq!(r.w_arrows().len(), 3);
    }

    #[test]
    fn presented_round_trip() {
        for entry in nrel_corpus() {
            let (p, _) = entry.nrel.to_presented();
            let (r, _) = p.realize(Budget::default()).unwrap();
            assert_eq!(r.ambient().arrow_count(), entry.nrel.ambient().arrow_count(), "{}", entry.name);
            assert_eq!(r.w_arrows().len(), entry.nrel.w_arrows().len(), "{}", entry.name);
            for i in 1..=r.n() {
                assert_eq!(r.v_arrows(i).len(), entry.nrel.v_arrows(i).len(), "{}", entry.name);
            }
        }
    }

    #[test]
    fn json_round_trip() {
        for entry in nrel_corpus().into_iter().chain(counterexamples()) {
            let s = entry.nrel.to_json();
            let back = NRelCategory::from_json(&s).unwrap();
            assert_eq!(back.to_json(), s, "{}", entry.name);
        }
    }
}
