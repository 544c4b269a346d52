//! The verification battery over the bundled corpus: one entry per
//! acceptance criterion, each made of individual labelled checks.

use std::time::Instant;

use serde::Serialize;

use crate::corpus::{counterexamples, msset_corpus, nrel_corpus};
use crate::division::{
    canonical_iso_check, division, homotopy_h, mapping_colim_check, MappingColimit, nerve_homotopy_k, projection_mismatches,
    strict_homotopy_check, tau,
};
use crate::enrichment::{adjunction_check, embed, grothendieck, pushforward_functoriality, restrict, same_nrel, type_diagram};
use crate::error::{Error, Result};
use crate::fincat::{chain, product_of_chains, validate_category, Functor};
use crate::msset::{colim_over_simplices, indices, is_two_coskeletal, skeleton, standard, TruncatedMSSet};
use crate::nerve::{counit, k_adjoint, nerve, standard_nrel, unit, DEFAULT_MAX_NODES};
use crate::prescat::{compare_presented_to_explicit, decide_equal, grid_presentation, realize, Budget, Path, Tag, Verdict};
use crate::relcat::{chain_v, chain_w, make_nrelcat, product_nrel, NRelCategory};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", content = "detail", rename_all = "snake_case")]
pub enum Outcome {
    Pass,
    Fail(String),
    /// A search or rewriting budget ran out; not a verification failure.
    Resource(String),
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub label: String,
    #[serde(flatten)]
    pub outcome: Outcome,
    pub seconds: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct CriterionReport {
    pub id: usize,
    pub key: &'static str,
    pub checks: Vec<Check>,
    pub seconds: f64,
    pub limit_seconds: Option<f64>,
}

impl CriterionReport {
    pub fn within_time(&self) -> bool {
        self.limit_seconds.is_none_or(|l| self.seconds < l)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| matches!(c.outcome, Outcome::Fail(_)))
    }

    pub fn exhausted(&self) -> bool {
        self.checks.iter().any(|c| matches!(c.outcome, Outcome::Resource(_)))
    }

    pub fn passed(&self) -> bool {
        self.within_time() && self.checks.iter().all(|c| c.outcome == Outcome::Pass)
    }

    /// `PASS`/`FAIL` line with counts and the first failing check.
    pub fn line(&self) -> String {
        let ok = self.checks.iter().filter(|c| c.outcome == Outcome::Pass).count();
        let mut s = format!(
            "[{}] {}. {}: {}/{} checks, {:.1}s",
            if self.passed() { "PASS" } else { "FAIL" },
            self.id,
            self.key,
            ok,
            self.checks.len(),
            self.seconds
        );
        if let Some(l) = self.limit_seconds {
            s.push_str(&format!(" (limit {l:.0}s)"));
        }
        if let Some(c) = self.checks.iter().find(|c| c.outcome != Outcome::Pass) {
            let detail = match &c.outcome {
                Outcome::Fail(d) => format!("failed: {d}"),
                Outcome::Resource(d) => format!("budget exhausted: {d}"),
                Outcome::Pass => unreachable!(),
            };
            s.push_str(&format!("; first problem: {} {detail}", c.label));
        }
        s
    }
}

struct Recorder {
    checks: Vec<Check>,
}

impl Recorder {
    fn new() -> Self {
        Recorder { checks: Vec::new() }
    }

    fn bool(&mut self, label: impl Into<String>, ok: bool, detail: impl FnOnce() -> String) {
        let outcome = if ok { Outcome::Pass } else { Outcome::Fail(detail()) };
        self.checks.push(Check {
            label: label.into(),
            outcome,
            seconds: 0.0,
        });
    }

    /// Records `f`; errors become failures, or resource outcomes for budgets.
    fn run(&mut self, label: impl Into<String>, f: impl FnOnce() -> Result<std::result::Result<(), String>>) {
        let start = Instant::now();
        let outcome = match f() {
            Ok(Ok(())) => Outcome::Pass,
            Ok(Err(d)) => Outcome::Fail(d),
            Err(e) if e.is_resource() => Outcome::Resource(e.to_string()),
            Err(e) => Outcome::Fail(e.to_string()),
        };
        self.checks.push(Check {
            label: label.into(),
            outcome,
            seconds: start.elapsed().as_secs_f64(),
        });
    }

    fn finish(self, id: usize, key: &'static str, start: Instant, limit_seconds: Option<f64>) -> CriterionReport {
        CriterionReport {
            id,
            key,
            checks: self.checks,
            seconds: start.elapsed().as_secs_f64(),
            limit_seconds,
        }
    }
}

fn expect(ok: bool, detail: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(detail())
    }
}

/// Truncation used for coskeletal checks: 3 when `n = 1`, else 2.
fn coskeletal_bound(c: &NRelCategory) -> usize {
    if c.n() == 1 {
        3
    } else {
        2
    }
}

pub fn counit_isomorphisms(budget: Budget) -> CriterionReport {
    let start = Instant::now();
    let mut r = Recorder::new();
    let corpus = nrel_corpus();
    r.bool("corpus has at least 12 members", corpus.len() >= 12, || format!("{}", corpus.len()));
    for entry in &corpus {
        r.run(format!("counit iso on {}", entry.name), || {
            let rep = counit(&entry.nrel, budget)?;
            Ok(expect(rep.is_iso(), || format!("{:?}", rep.iso)))
        });
    }
    let mut violating = 0;
    for entry in counterexamples() {
        if entry.name.contains("axiom ii") {
            violating += 1;
            r.run(format!("counit not injective on {}", entry.name), || {
                let rep = counit(&entry.nrel, budget)?;
                Ok(expect(rep.iso.injective == Verdict::No, || format!("{:?}", rep.iso)))
            });
        } else {
            r.run(format!("counit not iso on {}", entry.name), || {
                let rep = counit(&entry.nrel, budget)?;
                Ok(expect(!rep.is_iso(), || "reported iso".into()))
            });
        }
    }
    r.bool("at least 2 axiom-(ii) counterexamples", violating >= 2, || violating.to_string());
    r.finish(1, "counit isomorphism", start, Some(60.0))
}

pub fn unit_isomorphisms(budget: Budget) -> CriterionReport {
    let start = Instant::now();
    let mut r = Recorder::new();
    for entry in nrel_corpus() {
        let bounds: &[usize] = if entry.nrel.n() == 1 && entry.nrel.ambient().is_poset() { &[2, 3] } else { &[2] };
        for &d in bounds {
            r.run(format!("unit iso on N({}) at D={d}", entry.name), || {
                let nv = nerve(&entry.nrel, d, DEFAULT_MAX_NODES)?;
                let rep = unit(&nv.msset, budget)?;
                Ok(expect(rep.is_iso(), || format!("{:?}", rep.per_index.iter().find(|i| !(i.injective && i.surjective)))))
            });
        }
    }
    for n in 1..=2 {
        for axis in 0..n {
            for p in 1..=2 {
                let mut degrees = vec![0; n + 1];
                degrees[axis] = p;
                r.run(format!("unit iso on Δ{degrees:?}"), || {
                    let rep = unit(&standard(&degrees, 2), budget)?;
                    Ok(expect(rep.is_iso(), || "not iso".into()))
                });
            }
        }
    }
    r.run("unit on Δ[0,1] at (1,1) is injective with image 3 of 6", || {
        let rep = unit(&standard(&[0, 1], 2), budget)?;
        let at = rep.per_index.iter().find(|i| i.index == [1, 1]).expect("index present");
        Ok(expect(
            rep.is_injective() && at.injective && (at.cells, at.target_cells) == (3, 6),
            || format!("{at:?}"),
        ))
    });
    r.finish(2, "unit isomorphism on nerves and single-axis standards", start, None)
}

pub fn two_skeleton() -> CriterionReport {
    let start = Instant::now();
    let mut r = Recorder::new();
    let mut inputs: Vec<(String, TruncatedMSSet)> = msset_corpus(3)
        .into_iter()
        .map(|e| (e.name.to_string(), e.msset))
        .collect();
    inputs.push(("Δ[1,2]".into(), standard(&[1, 2], 3)));
    inputs.push(("Δ[0,1,1]".into(), standard(&[0, 1, 1], 3)));
    for (name, x) in &inputs {
        r.run(format!("K sk2 X = K X for {name}"), || {
            let (sk, _) = skeleton(x, 2);
            Ok(expect(k_adjoint(&sk)?.presentation() == k_adjoint(x)?.presentation(), || "presentations differ".into()))
        });
    }
    for entry in nrel_corpus() {
        let d = coskeletal_bound(&entry.nrel);
        r.run(format!("N({}) is 2-coskeletal at D={d}", entry.name), || {
            let nv = nerve(&entry.nrel, d, DEFAULT_MAX_NODES)?;
            Ok(expect(is_two_coskeletal(&nv.msset), || "coskeleton failure".into()))
        });
        r.run(format!("K sk2 N({}) = K N", entry.name), || {
            let nv = nerve(&entry.nrel, 2, DEFAULT_MAX_NODES)?;
            let (sk, _) = skeleton(&nv.msset, 2);
            Ok(expect(
                k_adjoint(&sk)?.presentation() == k_adjoint(&nv.msset)?.presentation(),
                || "presentations differ".into(),
            ))
        });
    }
    r.finish(3, "2-skeleton property", start, None)
}

/// Test shapes `T` for the ambient colimit: a point, a bare arrow, a bare
/// composable pair, and `1^{v_i}`, `1^w`.
fn ambient_shapes(n: usize) -> Vec<(String, NRelCategory)> {
    let bare = |p: usize| {
        let c = chain(p);
        let ids: Vec<usize> = c.objects().map(|o| c.identity(o)).collect();
        make_nrelcat(n, c, vec![ids.clone(); n], ids).expect("identities form wide subcategories")
    };
    let mut out = vec![
        ("point".to_string(), chain_w(0, n)),
        ("bare arrow".to_string(), bare(1)),
        ("bare composable pair".to_string(), bare(2)),
        ("1^w".to_string(), chain_w(1, n)),
    ];
    out.extend((1..=n).map(|i| (format!("1^v{i}"), chain_v(1, i, n))));
    out
}

pub fn colimits_of_simplices() -> CriterionReport {
    let start = Instant::now();
    let mut r = Recorder::new();
    let level = 2;
    let inputs: Vec<_> = msset_corpus(level)
        .into_iter()
        .filter(|e| e.msset.nondegenerate().len() <= 50)
        .collect();
    r.bool("corpus is nonempty", !inputs.is_empty(), String::new);
    for entry in &inputs {
        r.run(format!("colim over ΔX of Δ[m] = X for {}", entry.name), || {
            let rep = colim_over_simplices(&entry.msset, level)?;
            Ok(expect(rep.is_iso(), || format!("{:?}", rep.per_index.iter().find(|i| !i.bijective))))
        });
    }
    // every corpus member has n = 1
    let n = 1;
    // squares and pairs into Δ_rel Δ[2,2] number in the hundreds of millions; L = 1 for those
    let mut shapes: Vec<(String, NRelCategory, usize)> = ambient_shapes(n)
        .into_iter()
        .map(|(name, t)| {
            let l = if name.contains("pair") { 1 } else { level };
            (name, t, l)
        })
        .collect();
    // the other nerve indices ≤ (1,1) are the point, 1^v1 and 1^w above
    shapes.push(("nerve index [1, 1]".to_string(), standard_nrel(n, &[1, 1]), 1));
    for (shape, t, l) in &shapes {
        let prepared = MappingColimit::new(t, n + 1, *l);
        for entry in &inputs {
            r.run(format!("colim map({shape}, Δ_rel F) = map({shape}, Δ_rel X) at L={l} for {}", entry.name), || {
                let rep = prepared.as_ref().map_err(clone_error)?.check(&entry.msset)?;
                Ok(expect(rep.is_bijective(), || format!("{rep:?}")))
            });
        }
    }
    r.finish(4, "colimit isomorphisms over the category of simplices", start, Some(120.0))
}

fn clone_error(e: &Error) -> Error {
    match e {
        Error::Resource { bound, detail } => Error::Resource {
            bound,
            detail: detail.clone(),
        },
        other => Error::Invalid(vec![other.to_string()]),
    }
}

pub fn divisions() -> CriterionReport {
    let start = Instant::now();
    let mut r = Recorder::new();
    for entry in nrel_corpus() {
        for level in 1..=2 {
            r.run(format!("π_t detects the structure of δ({}) at L={level}", entry.name), || {
                let d = division(&entry.nrel, level)?;
                let bad = projection_mismatches(&d);
                Ok(expect(bad.is_empty(), || format!("{} arrows disagree", bad.len())))
            });
        }
    }
    // n = 2 is limited to degree 1: δ2 × δ2 × δ2 already has 6859 objects
    let cases: Vec<(usize, Vec<usize>, usize)> = indices(2, 2)
        .into_iter()
        .map(|m| (1, m, 2))
        .chain(indices(3, 1).into_iter().map(|m| (2, m, 1)))
        .collect();
    for (n, m, level) in cases {
        r.run(format!("canonical iso Δ_rel Δ{m:?} ≅ division product at L={level}"), || {
            let rep = canonical_iso_check(n, &m, level)?;
            Ok(expect(rep.is_iso(), || {
                let bad: Vec<String> = rep
                    .structures
                    .iter()
                    .filter(|s| !s.agree)
                    .map(|s| format!("{} has {} vs {} arrows", s.structure, s.delta_rel, s.divisions))
                    .collect();
                format!("ambient iso {}; {}", rep.ambient_iso, bad.join(", "))
            }))
        });
    }
    let shapes = [
        ("0^w", chain_w(0, 1)),
        ("1^w", chain_w(1, 1)),
        ("1^v1", chain_v(1, 1, 1)),
        ("1^v1 x 1^w", product_nrel(&[chain_v(1, 1, 1), chain_w(1, 1)]).expect("same n")),
    ];
    let inputs = [
        ("Δ[0,1]", standard(&[0, 1], 1)),
        ("Δ[1,1]", standard(&[1, 1], 1)),
        ("sk1 Δ[1,1]", skeleton(&standard(&[1, 1], 1), 1).0),
    ];
    for (shape, t) in &shapes {
        for (name, x) in &inputs {
            r.run(format!("mapping colimit for T={shape}, X={name}, L=1"), || {
                let rep = mapping_colim_check(t, x, 1)?;
                Ok(expect(rep.is_bijective(), || format!("{rep:?}")))
            });
        }
    }
    r.finish(5, "division suite", start, None)
}

pub fn strict_homotopies() -> CriterionReport {
    let start = Instant::now();
    let mut r = Recorder::new();
    for p in 0..=2 {
        for tag in [Tag::V(1), Tag::W] {
            r.run(format!("π_t τ = 1, h0 = 1, h1 = τ π_t for p={p}, {tag}"), || {
                let (c, d, t) = tau(p, tag, 1, p.max(1))?;
                let pi = d.terminal_projection();
                let h = homotopy_h(&d, &t);
                let id = Functor::identity(d.nrel.ambient());
                let g = pi.then(&t);
                Ok(expect(t.then(&pi) == Functor::identity(c.ambient()), || "π_t τ ≠ 1".into())
                    .and(expect(strict_homotopy_check(&h, &d.nrel, &d.nrel, &id, &g)?, || "h is not a strict homotopy from 1 to τπ_t".into())))
            });
        }
    }
    // the nerve of δ2 at D = 2 is out of reach; p ≤ 1 here
    for p in 0..=1 {
        for tag in [Tag::V(1), Tag::W] {
            r.run(format!("k restricts to N(1) and N(τπ_t) at D=2 for p={p}, {tag}"), || {
                let (_, d, t) = tau(p, tag, 1, p.max(1))?;
                let h = homotopy_h(&d, &t);
                let id = Functor::identity(d.nrel.ambient());
                let g = d.terminal_projection().then(&t);
                let k = nerve_homotopy_k(&h, &d.nrel, &d.nrel, &id, &g, 2)?;
                Ok(expect(k.natural && k.starts_at_f && k.ends_at_g, || {
                    format!("natural {}, start {}, end {}", k.natural, k.starts_at_f, k.ends_at_g)
                }))
            });
        }
    }
    r.finish(6, "strict homotopies of divisions", start, None)
}

pub fn appendix() -> CriterionReport {
    let start = Instant::now();
    let mut r = Recorder::new();
    for entry in nrel_corpus() {
        r.run(format!("restrict embed = id on {}", entry.name), || {
            let (back, _) = restrict(&embed(&entry.nrel))?;
            Ok(expect(same_nrel(&back, &entry.nrel), || "differs".into()))
        });
    }
    let left = [
        ("1^v1", chain_v(1, 1, 1)),
        ("1^w", chain_w(1, 1)),
        ("2^v1", chain_v(2, 1, 1)),
    ];
    for (lname, c) in &left {
        for entry in nrel_corpus().iter().filter(|e| e.nrel.n() == 2) {
            r.run(format!("map(embed {lname}, {}) ≅ map({lname}, restrict)", entry.name), || {
                let rep = adjunction_check(c, &entry.nrel, DEFAULT_MAX_NODES)?;
                Ok(expect(rep.bijective, || format!("{rep:?}")))
            });
        }
    }
    let square = embed(&product_nrel(&[chain_v(1, 1, 1), chain_w(1, 1)]).expect("same n"));
    let involution = embed(&nrel_corpus().into_iter().find(|e| e.name.starts_with("involution")).expect("listed").nrel);
    let instances = [
        ("embed(1^v1 x 1^w), 0 to 3", &square, 0, 3),
        ("embed(1^v1 x 1^w), 0 to 0", &square, 0, 0),
        ("embed(involution), x to x", &involution, 0, 0),
    ];
    for (name, c, x, y) in instances {
        for max_len in 0..=3 {
            r.run(format!("pushforward functoriality on {name} at maxLen {max_len}"), || {
                let rep = pushforward_functoriality(&type_diagram(c, x, y, max_len)?);
                Ok(expect(rep.holds(), || format!("{rep:?}")))
            });
            r.run(format!("Grothendieck construction laws on {name} at maxLen {max_len}"), || {
                let gr = grothendieck(c, x, y, max_len)?;
                let v = validate_category(gr.nrel.ambient());
                let problems = gr.nrel.structure_problems();
                Ok(expect(v.is_valid() && problems.is_empty(), || {
                    format!("{} violations, {} structure problems", v.violations.len(), problems.len())
                }))
            });
        }
    }
    r.finish(7, "appendix: embedding, adjoint and Grothendieck enrichment", start, None)
}

/// All paths of generators from `x`, grouped by target.
fn paths_from(p: &crate::prescat::Presentation, x: usize) -> Vec<Vec<Path>> {
    let mut by_target = vec![Vec::new(); p.objects.len()];
    let mut stack = vec![Path::identity(x)];
    while let Some(path) = stack.pop() {
        for (g, gen) in p.generators.iter().enumerate() {
            if gen.src == path.tgt {
                stack.push(path.then(&p.generator_path(g)));
            }
        }
        by_target[path.tgt].push(path);
    }
    by_target
}

fn partitions(total: usize, largest: usize) -> Vec<Vec<usize>> {
    if total == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for first in (1..=largest.min(total)).rev() {
        for mut rest in partitions(total - first, first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

pub fn word_problem() -> CriterionReport {
    let start = Instant::now();
    let mut r = Recorder::new();
    let budget = Budget {
        max_len: 8,
        ..Budget::default()
    };
    for total in 1..=6 {
        for dims in partitions(total, total) {
            let (p, map) = grid_presentation(&dims);
            r.run(format!("decide_equal on grid {dims:?}"), || {
                let (mut calls, mut unknown, mut wrong) = (0, 0, 0);
                for x in 0..p.objects.len() {
                    for group in paths_from(&p, x) {
                        for other in group.iter().skip(1) {
                            calls += 1;
                            let d = decide_equal(&p, &group[0], other, budget)?;
                            if d.is_unknown() {
                                unknown += 1;
                            } else if !d.is_equal() || !d.verify(&p, &group[0], other) {
                                wrong += 1;
                            }
                        }
                    }
                }
                Ok(expect(unknown == 0 && wrong == 0, || format!("{calls} calls, {unknown} unknown, {wrong} wrong")))
            });
            r.run(format!("realize reproduces the product of chains {dims:?}"), || {
                let c = product_of_chains(&dims);
                let rep = compare_presented_to_explicit(&p, &c, &map, budget)?;
                let real = realize(&p, budget).map_err(|u| Error::Resource {
                    bound: "word_problem",
                    detail: u.to_string(),
                })?;
                let f = Functor {
                    object_map: map.objects.clone(),
                    arrow_map: real.representatives.iter().map(|path| map.evaluate(&c, path)).collect(),
                };
                Ok(expect(rep.is_iso(), || format!("{rep:?}")).and(expect(
                    f.is_functor(&real.category, &c) && f.is_bijective(&c),
                    || "realized category differs".into(),
                )))
            });
        }
    }
    r.finish(8, "word problem on products of chains", start, None)
}

/// Every criterion in order.
pub fn run_all(budget: Budget) -> Vec<CriterionReport> {
    vec![
        counit_isomorphisms(budget),
        unit_isomorphisms(budget),
        two_skeleton(),
        colimits_of_simplices(),
        divisions(),
        strict_homotopies(),
        appendix(),
        word_problem(),
    ]
}
