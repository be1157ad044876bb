use proptest::prelude::*;
use proptest::sample::select;

use num_bigint::BigInt;
use triplex::config::parse_config_file;
use triplex::formats::{dimacs_parse, dimacs_write, graph6_decode, graph6_encode, EdgeList};
use triplex::gf::FieldCtx;
use triplex::orbits::{block_decomposition, pair_orbits, GenAction, PairEngine};
use triplex::quadspace::{GeneratorKind, QuadSpace, Sign, Vector};
use triplex::srg::{build_qminus_graph, build_reference, build_vo_graph, reference_automorphisms, Family, SrgInstance};
use triplex::talg::{
    dim_t0, parse_sparse_triples, t_closure, t_closure_ordered, triple_regularity_check, write_sparse_triples, ExactMat,
};

const ODD_Q: [(u64, u32); 18] = [
    (3, 1), (5, 1), (7, 1), (3, 2), (11, 1), (13, 1), (17, 1), (19, 1), (23, 1), (5, 2),
    (3, 3), (29, 1), (31, 1), (37, 1), (41, 1), (43, 1), (47, 1), (7, 2),
];

fn polar_action(g: &SrgInstance, kinds: &[GeneratorKind]) -> GenAction {
    let space = g.geometry().unwrap().space.clone();
    let mut maps = Vec::new();
    for &k in kinds {
        maps.extend(space.generator_set(k).unwrap());
    }
    GenAction::induce_action(&maps, g).unwrap()
}

fn small_instances() -> Vec<(SrgInstance, Option<GenAction>)> {
    let mut out = Vec::new();
    for f in [
        Family::Cycle5,
        Family::Grid(3),
        Family::Paley(9),
        Family::Paley(13),
        Family::Petersen,
        Family::CompleteMultipartite { parts: 3, size: 2 },
    ] {
        let g = build_reference(f).unwrap();
        let a = GenAction::from_permutations(&g, reference_automorphisms(f).unwrap()).unwrap();
        out.push((g, Some(a)));
    }
    for eps in [Sign::Minus, Sign::Plus] {
        let g = build_vo_graph(2, eps).unwrap();
        let a = polar_action(&g, &[GeneratorKind::Orthogonal, GeneratorKind::Translations]);
        out.push((g, Some(a)));
    }
    let g = build_qminus_graph(2).unwrap();
    let a = polar_action(&g, &[GeneratorKind::Orthogonal]);
    out.push((g, Some(a)));
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn norm_form_similarity((p, e) in select(&ODD_Q[..]), x in any::<u32>(), y in any::<u32>(), pick in any::<u32>()) {
        let ctx = FieldCtx::new(p, e).unwrap();
        let q = ctx.order();
        let delta = ctx.find_nonsquare().unwrap();
        let nonsquares: Vec<_> = ctx.nonzero_elements().filter(|&a| !ctx.is_square(a).unwrap()).collect();
        prop_assert_eq!(nonsquares.len() as u32, (q - 1) / 2);
        let lambda = nonsquares[pick as usize % nonsquares.len()];
        let ac = ctx.solve_norm_form(delta, lambda).unwrap();
        let (x, y) = (ctx.elem(x % q).unwrap(), ctx.elem(y % q).unwrap());
        let (gx, gy) = ctx.norm_similarity(delta, ac, (x, y));
        prop_assert_eq!(ctx.norm_form(delta, gx, gy), ctx.mul(lambda, ctx.norm_form(delta, x, y)));
    }

    #[test]
    fn frobenius_is_multiplicative((p, e) in select(vec![(2u64, 2u32), (2, 3), (2, 6), (3, 2), (3, 3), (5, 2), (7, 2)]), a in any::<u32>(), b in any::<u32>()) {
        let ctx = FieldCtx::new(p, e).unwrap();
        let q = ctx.order();
        let (a, b) = (ctx.elem(a % q).unwrap(), ctx.elem(b % q).unwrap());
        prop_assert_eq!(ctx.frobenius(ctx.mul(a, b)), ctx.mul(ctx.frobenius(a), ctx.frobenius(b)));
        prop_assert_eq!(ctx.frobenius(ctx.add(a, b)), ctx.add(ctx.frobenius(a), ctx.frobenius(b)));
        prop_assert_eq!(ctx.frobenius_power(a, e), a);
    }

    #[test]
    fn bilinear_form_is_symmetric_biadditive((p, e) in select(vec![(3u64, 1u32), (5, 1), (7, 1), (3, 2), (2, 3)]), seeds in prop::collection::vec(any::<u64>(), 3)) {
        let space = QuadSpace::qminus5(std::sync::Arc::new(FieldCtx::new(p, e).unwrap())).unwrap();
        let size = space.vector_count();
        let [x, y, z] = [0, 1, 2].map(|i| space.decode(seeds[i] % size));
        let ctx = space.ctx();
        prop_assert_eq!(space.eval_b(&x, &y).unwrap(), space.eval_b(&y, &x).unwrap());
        prop_assert_eq!(
            space.eval_b(&x.add(ctx, &y), &z).unwrap(),
            ctx.add(space.eval_b(&x, &z).unwrap(), space.eval_b(&y, &z).unwrap())
        );
        // B(x, y) = Q(x + y) - Q(x) - Q(y)
        let polar = ctx.sub(ctx.sub(space.eval_q(&x.add(ctx, &y)).unwrap(), space.eval_q(&x).unwrap()), space.eval_q(&y).unwrap());
        prop_assert_eq!(space.eval_b(&x, &y).unwrap(), polar);
    }

    #[test]
    fn random_reflections_are_isometries(q in select(vec![2u64, 3, 4, 5]), seed in any::<u64>(), probes in prop::collection::vec(any::<u64>(), 8)) {
        let (p, e) = if q == 4 { (2, 2) } else { (q, 1) };
        let space = QuadSpace::qminus5(std::sync::Arc::new(FieldCtx::new(p, e).unwrap())).unwrap();
        let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(seed);
        let r = space.random_orthogonal(&mut rng, 1).unwrap().remove(0);
        for k in probes {
            let x = space.decode(k % space.vector_count());
            prop_assert_eq!(space.eval_q(&r.apply(space.ctx(), &x)).unwrap(), space.eval_q(&x).unwrap());
        }
    }

    #[test]
    fn base_vertex_independence(idx in 0usize..3, base in any::<u32>()) {
        let g = match idx {
            0 => build_qminus_graph(2).unwrap(),
            1 => build_vo_graph(3, Sign::Minus).unwrap(),
            _ => build_reference(Family::Paley(13)).unwrap(),
        };
        let table = g.intersection_numbers().unwrap();
        let sizes: Vec<usize> = (0..3).map(|i| g.delta(i).len()).collect();
        let t0 = dim_t0(&g).unwrap().dim;
        let b = base as usize % g.order();
        let h = g.rebased(b).unwrap();
        prop_assert_eq!(h.intersection_numbers().unwrap(), table);
        prop_assert_eq!((0..3).map(|i| h.delta(i).len()).collect::<Vec<_>>(), sizes);
        prop_assert_eq!(dim_t0(&h).unwrap().dim, t0);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn orbit_counts_ignore_generator_order(k in 0usize..9, perm in any::<u64>()) {
        let (g, a) = small_instances().swap_remove(k);
        let a = a.unwrap();
        let mut order: Vec<usize> = (0..a.len()).collect();
        use rand::seq::SliceRandom;
        order.shuffle(&mut <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(perm));
        let d1 = block_decomposition(&a, &g, PairEngine::Auto).unwrap();
        let d2 = block_decomposition(&a.reordered(&order), &g, PairEngine::Auto).unwrap();
        prop_assert_eq!(d1.d, d2.d);
        for i in 0..3 {
            for j in 0..3 {
                prop_assert_eq!(d1.d[i][j], d1.d[j][i]);
            }
        }
        if d1.rank3 {
            prop_assert_eq!(d1.total, 5 + d1.d[1][1] + d1.d[2][2] + 2 * d1.d[1][2]);
        }
    }

    #[test]
    fn more_generators_never_more_orbits(k in 0usize..9, mask in any::<u64>()) {
        let (g, a) = small_instances().swap_remove(k);
        let a = a.unwrap();
        let sub: Vec<usize> = (0..a.len()).filter(|i| mask >> (i % 64) & 1 == 1).collect();
        let sub = if sub.is_empty() { GenAction::trivial(g.order()) } else { a.reordered(&sub) };
        let small = block_decomposition(&sub, &g, PairEngine::Auto).unwrap();
        let big = block_decomposition(&a, &g, PairEngine::Auto).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                prop_assert!(big.d[i][j] <= small.d[i][j]);
            }
        }
        // both engines give the same partition of each block
        for (i, j) in [(1, 1), (1, 2), (2, 2)] {
            let x = pair_orbits(&sub, &g, i, j, PairEngine::TripleBfs).unwrap();
            let y = pair_orbits(&sub, &g, i, j, PairEngine::Schreier).unwrap();
            prop_assert_eq!(x.canonical_labels(), y.canonical_labels());
        }
    }

    #[test]
    fn algebra_chain_and_triple_regularity(k in 0usize..9, order in Just((0..5).collect::<Vec<usize>>()).prop_shuffle()) {
        let (g, a) = small_instances().swap_remove(k);
        let t0 = dim_t0(&g).unwrap().dim;
        let t = t_closure(&g, 200).unwrap().dim();
        prop_assert_eq!(t_closure_ordered(&g, 200, &order).unwrap().dim(), t);
        let total = block_decomposition(&a.unwrap(), &g, PairEngine::Auto).unwrap().total;
        prop_assert!(t0 <= t && t <= total, "{} <= {} <= {}", t0, t, total);
        prop_assert_eq!(triple_regularity_check(&g).regular, t == t0);
    }

    #[test]
    fn sparse_triples_round_trip(entries in prop::collection::vec((-50i64..50, 1i64..7), 9), count in 1usize..4) {
        let mats: Vec<ExactMat> = (0..count)
            .map(|k| {
                let num: Vec<BigInt> = entries.iter().map(|(x, _)| BigInt::from(x * (k as i64 + 1))).collect();
                ExactMat::new(3, num, BigInt::from(entries[k].1)).unwrap()
            })
            .collect();
        prop_assert_eq!(parse_sparse_triples(&write_sparse_triples(&mats, "prop")).unwrap(), mats);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(4))]

    #[test]
    fn witness_maps_never_split_orbits(lambda in 1u32..3) {
        let g = build_qminus_graph(3).unwrap();
        let space = g.geometry().unwrap().space.clone();
        let base = polar_action(&g, &[GeneratorKind::Orthogonal]);
        let lambda = space.ctx().elem(lambda).unwrap();
        let phi = space.witness_phi_lambda(lambda).unwrap();
        let theta = space.witness_theta_lambda(lambda, &Vector::basis(6, 3)).unwrap();
        let rho = space.witness_rho_similarity().unwrap();
        let mut grown = base.clone();
        grown.extend(GenAction::induce_action(&[phi, theta, rho], &g).unwrap());
        let d0 = block_decomposition(&base, &g, PairEngine::Auto).unwrap();
        let d1 = block_decomposition(&grown, &g, PairEngine::Auto).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                prop_assert!(d1.d[i][j] <= d0.d[i][j]);
            }
        }
    }
}

proptest! {
    #[test]
    fn graph6_and_dimacs_round_trip(n in 0usize..80, seed in any::<u64>()) {
        let mut state = seed;
        let mut edges = Vec::new();
        for j in 1..n {
            for i in 0..j {
                state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                if state >> 61 == 0 {
                    edges.push((i, j));
                }
            }
        }
        edges.sort_unstable();
        let g = EdgeList { n, edges };
        prop_assert_eq!(graph6_decode(&graph6_encode(&g)).unwrap(), g.clone());
        prop_assert_eq!(dimacs_parse(&dimacs_write(&g, "x")).unwrap(), g);
    }

    #[test]
    fn parsers_never_panic(s in "\\PC*") {
        let _ = graph6_decode(&s);
        let _ = dimacs_parse(&s);
        let _ = parse_sparse_triples(&s);
        let _ = parse_config_file(&s);
        let _ = s.parse::<Family>();
    }
}
