//! Small named instances used by the test suite and the `suite` command.

use crate::fincat::ExplicitCategory;
use crate::msset::{skeleton, standard, TruncatedMSSet};
use crate::nerve::{nerve, DEFAULT_MAX_NODES};
use crate::relcat::{chain_v, chain_w, make_nrelcat, product_nrel, NRelCategory};

pub struct NamedNRel {
    pub name: &'static str,
    pub nrel: NRelCategory,
}

fn named(name: &'static str, nrel: NRelCategory) -> NamedNRel {
    NamedNRel { name, nrel }
}

fn arrows(c: &ExplicitCategory, names: &[&str]) -> Vec<usize> {
    names
        .iter()
        .map(|n| c.find_arrow(n).unwrap_or_else(|| panic!("no arrow {n}")))
        .collect()
}

fn build(
    n: usize,
    c: ExplicitCategory,
    v: &[&[&str]],
    w: &[&str],
) -> NRelCategory {
    let v = v.iter().map(|names| arrows(&c, names)).collect();
    let w = arrows(&c, w);
    make_nrelcat(n, c, v, w).expect("corpus entry is well formed")
}

/// Two parallel arrows `f, g: x → y`.
pub fn parallel_pair() -> ExplicitCategory {
    ExplicitCategory::from_names(
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
    .expect("static data")
}

fn one_object(e: &str, ee: &str) -> ExplicitCategory {
    ExplicitCategory::from_names(
        &["x"],
        &[("1x", "x", "x"), (e, "x", "x")],
        &[("x", "1x")],
        &[("1x", "1x", "1x"), ("1x", e, e), (e, "1x", e), (e, e, ee)],
    )
    .expect("static data")
}

/// `a: x → y`, `c: x → z`, `b: y → t`, `d: z → t` with `a;b = c;d = k`.
pub fn commuting_square_with_diagonal() -> ExplicitCategory {
    ExplicitCategory::from_names(
        &["x", "y", "z", "t"],
        &[
            ("1x", "x", "x"),
            ("1y", "y", "y"),
            ("1z", "z", "z"),
            ("1t", "t", "t"),
            ("a", "x", "y"),
            ("c", "x", "z"),
            ("b", "y", "t"),
            ("d", "z", "t"),
            ("k", "x", "t"),
        ],
        &[("x", "1x"), ("y", "1y"), ("z", "1z"), ("t", "1t")],
        &[
            ("1x", "1x", "1x"),
            ("1y", "1y", "1y"),
            ("1z", "1z", "1z"),
            ("1t", "1t", "1t"),
            ("1x", "a", "a"),
            ("a", "1y", "a"),
            ("1x", "c", "c"),
            ("c", "1z", "c"),
            ("1y", "b", "b"),
            ("b", "1t", "b"),
            ("1z", "d", "d"),
            ("d", "1t", "d"),
            ("1x", "k", "k"),
            ("k", "1t", "k"),
            ("a", "b", "k"),
            ("c", "d", "k"),
        ],
    )
    .expect("static data")
}

/// n-relative categories satisfying both axioms.
pub fn nrel_corpus() -> Vec<NamedNRel> {
    let pp = parallel_pair;
    let ids2 = ["1x", "1y"];
    vec![
        named("0^w (n=1)", chain_w(0, 1)),
        named("1^v1 (n=1)", chain_v(1, 1, 1)),
        named("1^w (n=1)", chain_w(1, 1)),
        named(
            "1^v1 x 1^w (n=1)",
            product_nrel(&[chain_v(1, 1, 1), chain_w(1, 1)]).expect("same n"),
        ),
        named(
            "2^v1 x 1^w (n=1)",
            product_nrel(&[chain_v(2, 1, 1), chain_w(1, 1)]).expect("same n"),
        ),
        named("parallel pair in v1 (n=1)", build(1, pp(), &[&["1x", "1y", "f", "g"]], &ids2)),
        named("idempotent (n=1)", build(1, one_object("e", "e"), &[&["1x", "e"]], &["1x", "e"])),
        named("involution (n=1)", build(1, one_object("s", "1x"), &[&["1x", "s"]], &["1x", "s"])),
        named("2^w (n=2)", chain_w(2, 2)),
        named("2^v1 (n=2)", chain_v(2, 1, 2)),
        named(
            "1^v2 x 1^v1 (n=2)",
            product_nrel(&[chain_v(1, 2, 2), chain_v(1, 1, 2)]).expect("same n"),
        ),
        named(
            "1^v2 x 1^v1 x 1^w (n=2)",
            product_nrel(&[chain_v(1, 2, 2), chain_v(1, 1, 2), chain_w(1, 2)]).expect("same n"),
        ),
        named(
            "parallel pair f in v1, g in v2 (n=2)",
            build(2, pp(), &[&["1x", "1y", "f"], &["1x", "1y", "g"]], &ids2),
        ),
        named("arrow in v1 and v2 (n=2)", {
            let c = crate::fincat::chain(1);
            let all: Vec<usize> = c.arrow_ids().collect();
            let ids: Vec<usize> = c.objects().map(|o| c.identity(o)).collect();
            make_nrelcat(2, c, vec![all.clone(), all], ids).expect("well formed")
        }),
        named(
            "1^v3 x 1^v2 x 1^v1 (n=3)",
            product_nrel(&[chain_v(1, 3, 3), chain_v(1, 2, 3), chain_v(1, 1, 3)]).expect("same n"),
        ),
    ]
}

/// Structurally valid n-relative categories violating an axiom.
pub fn counterexamples() -> Vec<NamedNRel> {
    let sq = commuting_square_with_diagonal;
    let ids = ["1x", "1y", "1z", "1t"];
    vec![
        named("1 with discrete v1 (n=1, axiom i fails)", {
            let c = crate::fincat::chain(1);
            let ids: Vec<usize> = c.objects().map(|o| c.identity(o)).collect();
            make_nrelcat(1, c, vec![ids.clone()], ids).expect("well formed")
        }),
        named(
            "square a,c in v1 and b,d in v2 (n=2, axiom ii fails)",
            build(
                2,
                sq(),
                &[&["1x", "1y", "1z", "1t", "a", "c"], &["1x", "1y", "1z", "1t", "b", "d"]],
                &ids,
            ),
        ),
        named(
            "square a,c in v1, b in v2, d in v3 (n=3, axiom ii fails)",
            build(
                3,
                sq(),
                &[
                    &["1x", "1y", "1z", "1t", "a", "c"],
                    &["1x", "1y", "1z", "1t", "b"],
                    &["1x", "1y", "1z", "1t", "d"],
                ],
                &ids,
            ),
        ),
    ]
}

pub struct NamedMSSet {
    pub name: &'static str,
    pub msset: TruncatedMSSet,
}

/// Small multisimplicial sets (n = 1) at the given truncation.
pub fn msset_corpus(bound: usize) -> Vec<NamedMSSet> {
    let named = |name, msset| NamedMSSet { name, msset };
    vec![
        named("Δ[0,0]", standard(&[0, 0], bound)),
        named("Δ[1,0]", standard(&[1, 0], bound)),
        named("Δ[0,1]", standard(&[0, 1], bound)),
        named("Δ[1,1]", standard(&[1, 1], bound)),
        named("Δ[2,0]", standard(&[2, 0], bound)),
        named("sk1 Δ[0,2]", skeleton(&standard(&[0, 2], bound), 1).0),
        named("sk1 Δ[1,1]", skeleton(&standard(&[1, 1], bound), 1).0),
        named(
            "N(1^v1)",
            nerve(&chain_v(1, 1, 1), bound, DEFAULT_MAX_NODES)
                .expect("small nerve")
                .msset,
        ),
    ]
}
