use std::collections::BTreeSet;

use proptest::prelude::*;

use seqgraph_core::embedding::{
    canonical_rotation, face_trace, psi, segment_map, Dyadic, RotationSystem,
};
use seqgraph_core::gaps::{circulant_step, gap_profile, is_nice_permutation, three_gap_holds};
use seqgraph_core::graph::{build_graph, is_same_labeled_graph, minor_reduce};
use seqgraph_core::iet::{odometer_apply, verify_evolution, Convention, IetSpec, Tolerance};
use seqgraph_core::real::Fixed;
use seqgraph_core::sequence::{
    kronecker_prefix, radical_inverse, vdc_prefix, vdc_successor_bits, KroneckerParams,
    SortedSequence, Theta,
};

fn nonsquare() -> impl Strategy<Value = u32> {
    (2u32..5000).prop_filter("not a perfect square", |k| {
        let r = (*k as f64).sqrt() as u32;
        r * r != *k && (r + 1) * (r + 1) != *k
    })
}

fn sqrt_theta(k: u32) -> Theta {
    Theta::parse(&format!("sqrt({k})")).unwrap()
}

fn kronecker(k: u32, n: usize) -> SortedSequence {
    kronecker_prefix(&KroneckerParams::new(sqrt_theta(k)), n).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn successor_is_one_cycle(k in nonsquare(), n in 1usize..400) {
        let seq = kronecker(k, n);
        let mut seen = BTreeSet::new();
        let mut i = 0;
        for _ in 0..n {
            prop_assert!(seen.insert(i));
            i = seq.successor(i).unwrap();
        }
        prop_assert_eq!(i, 0);
        prop_assert_eq!(seq.pi()[0], 0);
    }

    #[test]
    fn doubling_precision_keeps_the_order(k in nonsquare(), n in 2usize..600) {
        let theta = sqrt_theta(k);
        let a = kronecker_prefix(&KroneckerParams::new(theta.clone()), n).unwrap();
        let b = kronecker_prefix(&KroneckerParams::with_precision(theta, 256), n).unwrap();
        prop_assert_eq!(a.pi(), b.pi());
    }

    #[test]
    fn at_most_three_gaps(k in nonsquare(), n in 2usize..800) {
        let seq = kronecker(k, n);
        let p = gap_profile(&seq).unwrap();
        prop_assert!(p.distinct_count <= 3);
        prop_assert!(three_gap_holds(seq.permutation()));
        let values = p.values();
        if values.len() == 3 {
            let mut sorted = values.clone();
            sorted.sort();
            // The middle value is the sum of the outer two.
            prop_assert_eq!(sorted[1], sorted[0] + sorted[2]);
        }
    }

    #[test]
    fn nice_iff_circulant(k in nonsquare(), n in 2usize..800) {
        let seq = kronecker(k, n);
        let perm = seq.permutation();
        prop_assert_eq!(is_nice_permutation(perm), circulant_step(perm).is_some());
    }

    #[test]
    fn graphs_are_four_regular(k in nonsquare(), n in 1usize..300) {
        let g = build_graph(&kronecker(k, n));
        prop_assert_eq!(g.edges().count(), 2 * n);
        for v in 0..n {
            prop_assert_eq!(g.degree(v), 4);
        }
    }

    #[test]
    fn minor_lemma_kronecker(k in nonsquare(), m in 3usize..48, cut in 0.0f64..1.0) {
        let n = 2 + ((m - 2) as f64 * cut) as usize;
        prop_assume!(n < m);
        let params = KroneckerParams::new(sqrt_theta(k));
        let host = build_graph(&kronecker_prefix(&params, m).unwrap());
        let reduced = minor_reduce(&host, n).unwrap().graph;
        let expected = build_graph(&kronecker_prefix(&params, n).unwrap()).without_last_edge();
        prop_assert!(is_same_labeled_graph(&reduced, &expected));
    }

    #[test]
    fn minor_lemma_vdc(base in 2u64..6, m in 3usize..64, cut in 0.0f64..1.0) {
        let n = 2 + ((m - 2) as f64 * cut) as usize;
        prop_assume!(n < m);
        let host = build_graph(&vdc_prefix(base, m).unwrap());
        let reduced = minor_reduce(&host, n).unwrap().graph;
        let expected = build_graph(&vdc_prefix(base, n).unwrap()).without_last_edge();
        prop_assert!(is_same_labeled_graph(&reduced, &expected));
    }

    #[test]
    fn successor_bits_match_sorting(m in 1u32..=6, seed in any::<u64>()) {
        let n = 1usize << (2 * m);
        let seq = vdc_prefix(2, n).unwrap();
        let i = (seed % n as u64) as usize;
        prop_assert_eq!(vdc_successor_bits(i as u64, m).unwrap() as usize, seq.successor(i).unwrap());
    }

    #[test]
    fn odometer_steps_the_vdc_sequence(k in 0u64..(1 << 40)) {
        prop_assert_eq!(odometer_apply(&radical_inverse(k, 2)).unwrap(), radical_inverse(k + 1, 2));
    }

    #[test]
    fn segment_identification_round_trips(m in 1u32..=6, k in 1u32..=8, num in 1i64..1023) {
        let s = segment_map(m, k).unwrap();
        let t = s.far_start + Dyadic::new(num, 10) * s.length;
        let image = s.to_near(t).unwrap();
        prop_assert_eq!(image - s.near_start, t - s.far_start);
        prop_assert_eq!(s.to_far(image), Some(t));
    }

    #[test]
    fn two_interval_orbit_is_kronecker(k in nonsquare(), n in 2usize..300) {
        let params = KroneckerParams::new(sqrt_theta(k));
        let seq = kronecker_prefix(&params, n).unwrap();
        let spec = IetSpec::kronecker(&params, n, Convention::Transposed).unwrap();
        prop_assert!(verify_evolution(&seq, &spec, &Tolerance::pow2(64)));
        let reversed = spec.with_convention(Convention::AsWritten);
        prop_assert!(!verify_evolution(&seq, &reversed, &Tolerance::pow2(64)) || n == 2);
    }

    #[test]
    fn iet_images_stay_in_the_unit_interval(
        weights in prop::collection::vec(1u32..1000, 2..7),
        shuffle in any::<u64>(),
        x in 0u64..(1 << 40),
    ) {
        let bits = 96;
        let k = weights.len();
        let total: u32 = weights.iter().sum();
        let mut lengths: Vec<Fixed> = weights
            .iter()
            .map(|&w| Fixed::from_int(w as i64, bits).div(&Fixed::from_int(total as i64, bits)).unwrap())
            .collect();
        let head = lengths[..k - 1].iter().fold(Fixed::zero(bits), |a, l| a.add(l));
        lengths[k - 1] = Fixed::one(bits).sub(&head);
        let mut perm: Vec<usize> = (1..=k).collect();
        let mut s = shuffle;
        for i in (1..k).rev() {
            perm.swap(i, (s % (i as u64 + 1)) as usize);
            s /= i as u64 + 1;
        }
        let spec = IetSpec::new(perm, lengths, Convention::AsWritten).unwrap();
        let point = Fixed::from_int(x as i64, bits).div(&Fixed::from_int(1 << 40, bits)).unwrap();
        for c in [Convention::AsWritten, Convention::Transposed] {
            let image = spec.with_convention(c).apply(&point).unwrap();
            prop_assert!(image.in_unit_interval());
            let back = spec.with_convention(c.other()).apply(&image).unwrap();
            prop_assert_eq!(back, point.clone());
        }
    }

    #[test]
    fn random_rotations_have_nonnegative_genus(
        edges in prop::collection::vec((0usize..6, 0usize..6), 5..14),
        seed in any::<u64>(),
    ) {
        let mut edges = edges;
        // Chain the vertices so the graph is connected.
        for v in 0..5 {
            edges.push((v, v + 1));
        }
        let mut rotation = vec![Vec::new(); 6];
        for (e, &(a, b)) in edges.iter().enumerate() {
            rotation[a].push(2 * e);
            rotation[b].push(2 * e + 1);
        }
        let mut s = seed;
        for darts in rotation.iter_mut() {
            for i in (1..darts.len()).rev() {
                darts.swap(i, (s % (i as u64 + 1)) as usize);
                s = s.rotate_left(7) ^ 0x9e37_79b9;
            }
        }
        let rs = RotationSystem::new(6, edges, rotation).unwrap();
        let f = face_trace(&rs).unwrap();
        prop_assert!(f.genus >= 0);
        prop_assert!(f.euler_characteristic <= 2);
        prop_assert_eq!(f.face_sizes.iter().sum::<usize>(), 2 * rs.edge_count());
    }
}

#[test]
fn psi_is_a_bijection_onto_the_lattice() {
    for m in 1..=5u32 {
        let n = 1u64 << (2 * m);
        let points: BTreeSet<(u64, u64)> = (0..n).map(|i| psi(i, m).unwrap()).collect();
        assert_eq!(points.len() as u64, n);
        assert!(points.iter().all(|&(x, y)| x < 1 << m && y < 1 << m));
    }
}

#[test]
fn canonical_rotation_of_nice_kronecker_graphs() {
    for n in [5, 8, 13, 21, 34] {
        let g = build_graph(&kronecker_prefix(&KroneckerParams::new(Theta::Golden), n).unwrap());
        let f = face_trace(&canonical_rotation(&g).unwrap()).unwrap();
        assert!(f.genus >= 1, "N = {n}");
    }
}
