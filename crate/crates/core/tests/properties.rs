mod common;

use abelquot::blocks::{
    block_action, block_restriction, is_primitive, is_transitive, minimal_block_system, orbits,
};
use abelquot::certify::{
    certify, hypothesis_check, recheck, verify_theorem, wreath_product, WreathSpec,
};
use abelquot::enumeration::transitive_groups;
use abelquot::structure::{
    abelianization_order, composition_factors, composition_factors_with, derived_subgroup,
    quotient_action, FactorOptions, SeriesStrategy,
};
use abelquot::{build_chain, format_group, parse_group, GroupSpec, Permutation};
use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use proptest::prelude::*;
use rand::SeedableRng;

fn perm(n: usize) -> impl Strategy<Value = Permutation> {
    Just((0..n).collect::<Vec<usize>>())
        .prop_shuffle()
        .prop_map(|v| Permutation::from_images(v).unwrap())
}

fn perms(n: usize, k: usize) -> impl Strategy<Value = Vec<Permutation>> {
    proptest::collection::vec(perm(n), k)
}

fn group(max_degree: usize) -> impl Strategy<Value = GroupSpec> {
    (2..=max_degree, 1..=3usize)
        .prop_flat_map(|(n, k)| perms(n, k).prop_map(move |g| GroupSpec::new(n, g).unwrap()))
}

fn transitive_group(max_degree: usize) -> impl Strategy<Value = GroupSpec> {
    group(max_degree).prop_filter("transitive", is_transitive)
}

fn order(g: &GroupSpec) -> u64 {
    build_chain(g).order().to_u64().unwrap()
}

fn small_transitive() -> Vec<GroupSpec> {
    (2..=4)
        .flat_map(|n| transitive_groups(n).unwrap().groups)
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn permutation_algebra((a, b, c) in (2..9usize).prop_flat_map(|n| (perm(n), perm(n), perm(n)))) {
        prop_assert_eq!(a.then(&b).then(&c), a.then(&b.then(&c)));
        prop_assert!(a.then(&a.inverse()).is_identity());
        prop_assert!(a.pow(a.order()).is_identity());
        prop_assert_eq!(a.cycle_type().iter().sum::<usize>(), a.degree());
        let transpositions: usize = a.cycles().iter().map(|c| c.len() - 1).sum();
        prop_assert_eq!(a.is_even(), transpositions.is_multiple_of(2));
        prop_assert_eq!(a.then(&b).is_even(), a.is_even() == b.is_even());
        prop_assert_eq!(Permutation::commutator(&a, &b).is_identity(), a.then(&b) == b.then(&a));
    }

    #[test]
    fn group_files_round_trip(g in group(9)) {
        prop_assert_eq!(parse_group(&format_group(&g)).unwrap(), g);
    }

    #[test]
    fn chain_matches_closure(g in group(7), seed in any::<u64>()) {
        let chain = build_chain(&g);
        let brute = common::elems_of(&g);
        prop_assert_eq!(chain.order(), BigUint::from(brute.len()));
        for p in g.generators() {
            prop_assert!(chain.contains(p).unwrap());
        }
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..5 {
            let x = chain.random_element(&mut rng);
            prop_assert!(brute.contains(x.images()));
        }
        let listed: std::collections::HashSet<Vec<u32>> =
            chain.elements().unwrap().map(|p| p.images().to_vec()).collect();
        prop_assert_eq!(listed, brute);
    }

    #[test]
    fn orbits_partition_the_points(g in group(9)) {
        let mut points: Vec<usize> = orbits(&g).concat();
        points.sort_unstable();
        prop_assert_eq!(points, (0..g.degree()).collect::<Vec<_>>());
    }

    #[test]
    fn minimal_blocks_give_primitive_restrictions(g in transitive_group(9)) {
        match minimal_block_system(&g).unwrap() {
            None => prop_assert!(is_primitive(&g).unwrap()),
            Some(bs) => {
                bs.check_invariant(&g).unwrap();
                let (r, d) = (bs.block_size(), bs.block_count());
                prop_assert_eq!(r * d, g.degree());
                prop_assert!(r >= 2 && d >= 2);
                let top = block_action(&g, &bs).unwrap();
                prop_assert!(is_transitive(&top));
                prop_assert_eq!(order(&g) % order(&top), 0);
                let restriction = block_restriction(&g, &bs, 0).unwrap();
                prop_assert!(is_transitive(&restriction));
                prop_assert!(is_primitive(&restriction).unwrap());
                // G embeds in R wr π(G).
                let bound = BigUint::from(order(&restriction)).pow(d as u32) * order(&top);
                prop_assert!(BigUint::from(order(&g)) <= bound);
                prop_assert!(hypothesis_check(&g, &bs).unwrap().holds());
            }
        }
    }

    #[test]
    fn derived_subgroup_is_normal_with_abelian_quotient(g in group(7)) {
        let d = derived_subgroup(&g);
        let g_chain = build_chain(&g);
        let d_chain = build_chain(&d);
        for x in d.generators() {
            prop_assert!(g_chain.contains(x).unwrap());
            for s in g.generators() {
                prop_assert!(d_chain.contains(&x.conjugate_by(s)).unwrap());
            }
        }
        let index = g_chain.order() / d_chain.order();
        prop_assert_eq!(&index, &abelianization_order(&g));
        let q = quotient_action(&g, &d).unwrap();
        prop_assert_eq!(BigUint::from(q.degree()), index.clone());
        prop_assert_eq!(build_chain(&q).order(), index);
        prop_assert_eq!(abelianization_order(&q), BigUint::from(q.degree()));
    }

    #[test]
    fn composition_factors_multiply_to_the_order(g in group(7), seed in any::<u64>()) {
        let factors = composition_factors(&g).unwrap();
        let product: BigUint = factors.iter().map(|f| BigUint::from(f.order)).product();
        prop_assert_eq!(product, build_chain(&g).order());
        prop_assert!(factors.iter().all(|f| f.abelian == is_prime(f.order)));
        if order(&g) <= 2000 {
            let opts = FactorOptions {
                strategy: SeriesStrategy::ElementClosures { seed: Some(seed) },
                ..FactorOptions::default()
            };
            prop_assert_eq!(composition_factors_with(&g, &opts).unwrap(), factors);
        }
    }

    #[test]
    fn wreath_products_decompose(i in 0usize..8, j in 0usize..8) {
        let small = small_transitive();
        let (r, t) = (&small[i % small.len()], &small[j % small.len()]);
        let spec = WreathSpec::new(r.clone(), t.clone());
        let w = spec.build().unwrap();
        let bs = spec.fiber_blocks().unwrap();
        prop_assert!(is_transitive(&w));
        prop_assert_eq!(
            BigUint::from(order(&w)),
            BigUint::from(order(r)).pow(t.degree() as u32) * order(t)
        );
        prop_assert_eq!(order(&block_action(&w, &bs).unwrap()), order(t));
        prop_assert_eq!(order(&block_restriction(&w, &bs, 0).unwrap()), order(r));
        let report = hypothesis_check(&w, &bs).unwrap();
        prop_assert!(report.holds());
        prop_assert!(report.blocks.iter().all(|b| b.order == BigUint::from(order(r))));
        prop_assert_eq!(wreath_product(r, t).unwrap(), w);
    }

    #[test]
    fn certificates_are_sound_and_recheckable(g in transitive_group(9)) {
        let cert = certify(&g).unwrap();
        recheck(&cert).unwrap();
        let path = cert.path();
        for pair in path.windows(2) {
            prop_assert!(pair[1].degree < pair[0].degree);
        }
        let mut total = path.last().unwrap().bound_hi.clone();
        for node in &path[..path.len() - 1] {
            total += &node.step.as_ref().unwrap().term_hi;
        }
        prop_assert_eq!(total, cert.bound_hi.clone());
        let m = abelianization_order(&g);
        let bound = cert.bound_hi.to_f64().unwrap();
        prop_assert!(m.to_f64().unwrap().log2() <= bound + 1e-9);
        let report = verify_theorem(&g).unwrap();
        prop_assert!(report.passes());
        prop_assert_eq!(report.certificate_bound_hi, cert.bound_hi);
    }
}

fn is_prime(m: u64) -> bool {
    m >= 2
        && (2..m)
            .take_while(|d| d * d <= m)
            .all(|d| !m.is_multiple_of(d))
}

#[test]
fn c2_certificate_bound_is_one() {
    let c2 = GroupSpec::new(2, vec![Permutation::from_cycles(2, &[&[0, 1]]).unwrap()]).unwrap();
    assert_eq!(certify(&c2).unwrap().bound_hi, BigRational::one());
}
