use proptest::prelude::*;

use nrelcat::enrichment::{embed, enriched_compose, enumerate_zigzags, Zigzag, ZigzagType};
use nrelcat::fincat::{chain, product_of_chains, Functor};
use nrelcat::msset::{standard, Monotone, Operator, TruncatedMSSet};
use nrelcat::nerve::{nerve, DEFAULT_MAX_NODES};
use nrelcat::prescat::{decide_equal, Budget, Presentation, Tag, Tags};
use nrelcat::relcat::{chain_tagged, chain_w, is_relative_functor, product_nrel, NRelCategory};

fn monotone(k: usize, m: usize) -> impl Strategy<Value = Monotone> {
    proptest::collection::vec(0..=m, k + 1).prop_map(move |mut vals| {
        vals.sort_unstable();
        Monotone { vals, cod: m }
    })
}

fn operator(k: Vec<usize>, m: Vec<usize>) -> impl Strategy<Value = Operator> {
    k.into_iter()
        .zip(m)
        .map(|(a, b)| monotone(a, b))
        .collect::<Vec<_>>()
        .prop_map(Operator)
}

/// Three multi-indices `k, j, m` with degrees at most 2 and two axes.
fn indices() -> impl Strategy<Value = [Vec<usize>; 3]> {
    let idx = || proptest::collection::vec(0usize..=2, 2);
    (idx(), idx(), idx()).prop_map(|(a, b, c)| [a, b, c])
}

fn act_law(x: &TruncatedMSSet, theta: &Operator, phi: &Operator, cell: usize) {
    let m = phi.cod();
    let c = (cell % x.count(&m)) as u32;
    let composite = theta.then(phi);
    assert_eq!(x.act(&composite, c), x.act(theta, x.act(phi, c)));
    assert_eq!(x.act(&Operator::identity(&m), c), c);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn action_on_standard_is_functorial(
        (theta, phi, degrees, cell) in indices().prop_flat_map(|[k, j, m]| {
            (operator(k, j.clone()), operator(j, m), proptest::collection::vec(0usize..=2, 2), any::<usize>())
        })
    ) {
        let x = standard(&degrees, 2);
        act_law(&x, &theta, &phi, cell);
    }

    #[test]
    fn action_on_nerve_is_functorial(
        (theta, phi, cell) in indices().prop_flat_map(|[k, j, m]| {
            (operator(k, j.clone()), operator(j, m), any::<usize>())
        })
    ) {
        let c = product_nrel(&[chain_tagged(1, Tag::V(1), 1), chain_w(1, 1)]).unwrap();
        let x = nerve(&c, 2, DEFAULT_MAX_NODES).unwrap().msset;
        act_law(&x, &theta, &phi, cell);
    }

    #[test]
    fn nrel_json_round_trips(dims in proptest::collection::vec(0usize..=2, 1..=3), tags in proptest::collection::vec(0usize..=2, 3)) {
        let factors: Vec<NRelCategory> = dims
            .iter()
            .zip(&tags)
            .map(|(&p, &t)| chain_tagged(p, if t == 0 { Tag::W } else { Tag::V(t) }, 2))
            .collect();
        let c = product_nrel(&factors).unwrap();
        let text = c.to_json();
        let back = NRelCategory::from_json(&text).unwrap();
        prop_assert_eq!(back.to_json(), text);
        prop_assert!(back.structure_problems().is_empty());
    }

    #[test]
    fn relative_functors_compose(p in 0usize..=3, q in 0usize..=3, r in 0usize..=3, seed in any::<u64>()) {
        // monotone maps between chains are functors; with w tags they are relative
        let pick = |from: usize, to: usize, s: u64| {
            let mut vals: Vec<usize> = (0..=from).map(|i| ((s >> (4 * i)) as usize) % (to + 1)).collect();
            vals.sort_unstable();
            vals
        };
        let to_functor = |vals: &[usize], from: usize, to: usize| {
            let (a, b) = (chain(from), chain(to));
            Functor {
                object_map: vals.to_vec(),
                arrow_map: a.arrow_ids().map(|f| b.hom(vals[a.src(f)], vals[a.tgt(f)])[0]).collect(),
            }
        };
        let f = to_functor(&pick(p, q, seed), p, q);
        let g = to_functor(&pick(q, r, seed.rotate_left(32)), q, r);
        let (cp, cq, cr) = (chain_w(p, 1), chain_w(q, 1), chain_w(r, 1));
        prop_assert!(is_relative_functor(&f, &cp, &cq));
        prop_assert!(is_relative_functor(&g, &cq, &cr));
        prop_assert!(is_relative_functor(&f.then(&g), &cp, &cr));
    }

    #[test]
    fn free_words_are_distinct_or_equal_exactly(
        word_a in proptest::collection::vec(0usize..2, 0..5),
        word_b in proptest::collection::vec(0usize..2, 0..5),
    ) {
        // one object, two loops, no relations
        let mut p = Presentation::new(vec!["x".into()]);
        p.add_generator("a", 0, 0, Tags::none());
        p.add_generator("b", 0, 0, Tags::none());
        let a = p.path(0, &word_a).unwrap();
        let b = p.path(0, &word_b).unwrap();
        let d = decide_equal(&p, &a, &b, Budget::default()).unwrap();
        prop_assert_eq!(d.is_equal(), word_a == word_b);
        prop_assert_eq!(d.is_distinct(), word_a != word_b);
        prop_assert!(d.verify(&p, &a, &b));
    }

    #[test]
    fn grid_paths_with_shared_ends_are_equal(dims in proptest::collection::vec(1usize..=2, 2..=3), seed in any::<u64>()) {
        // two shuffles of the same multiset of unit steps from the origin
        let (p, _) = nrelcat::prescat::grid_presentation(&dims);
        let mut steps: Vec<usize> = dims.iter().enumerate().flat_map(|(k, &d)| std::iter::repeat_n(k, d)).collect();
        let walk = |order: &[usize]| {
            let mut at = vec![0; dims.len()];
            let mut word = Vec::new();
            for &k in order {
                let name = format!("e{k}@({})", at.iter().map(|v: &usize| v.to_string()).collect::<Vec<_>>().join(","));
                word.push(p.find_generator(&name).unwrap());
                at[k] += 1;
            }
            p.path(0, &word).unwrap()
        };
        let a = walk(&steps);
        let mut s = seed;
        for i in (1..steps.len()).rev() {
            steps.swap(i, (s % (i as u64 + 1)) as usize);
            s = s.rotate_left(7) ^ 0x9e37_79b9_7f4a_7c15;
        }
        let b = walk(&steps);
        let d = decide_equal(&p, &a, &b, Budget::default()).unwrap();
        prop_assert!(d.is_equal());
        prop_assert!(d.verify(&p, &a, &b));
        let c = product_of_chains(&dims);
        prop_assert_eq!(c.object_count(), p.objects.len());
    }
}

fn zigzag_pool() -> (NRelCategory, Vec<Vec<Vec<Zigzag>>>) {
    // embed(2^w): backward arrows may be any arrow of the chain
    let c = embed(&chain_w(2, 1));
    let types: Vec<ZigzagType> = ZigzagType::all(2);
    let objects = c.ambient().object_count();
    let pool = (0..objects)
        .map(|x| {
            (0..objects)
                .map(|y| types.iter().flat_map(|t| enumerate_zigzags(&c, x, y, t)).collect())
                .collect()
        })
        .collect();
    (c, pool)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn zigzag_composition_is_associative_and_unital(
        ends in proptest::collection::vec(0usize..3, 4),
        picks in proptest::collection::vec(any::<usize>(), 3),
    ) {
        let (c, pool) = zigzag_pool();
        let pick = |i: usize| {
            let options = &pool[ends[i]][ends[i + 1]];
            options[picks[i] % options.len()].clone()
        };
        let (f, g, h) = (pick(0), pick(1), pick(2));
        let left = enriched_compose(&enriched_compose(&f, &g).unwrap(), &h).unwrap();
        let right = enriched_compose(&f, &enriched_compose(&g, &h).unwrap()).unwrap();
        prop_assert_eq!(&left, &right);
        prop_assert!(left.is_valid(&c));
        prop_assert_eq!(enriched_compose(&Zigzag::identity(ends[0]), &f).unwrap(), f.clone());
        prop_assert_eq!(enriched_compose(&f, &Zigzag::identity(ends[1])).unwrap(), f.clone());
        let text = serde_json::to_string(&left).unwrap();
        prop_assert_eq!(serde_json::from_str::<Zigzag>(&text).unwrap(), left);
    }
}
