//! Library results checked against brute-force reimplementations that share
//! no code with the crate.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use seqgraph_core::embedding::{
    circulant_rotation_system, face_trace, torus_rotation_system, TorusOrder,
};
use seqgraph_core::gaps::{gap_profile, is_nice_n, nice_n_scan};
use seqgraph_core::graph::{build_graph, is_same_labeled_graph, minor_reduce, MultiGraph};
use seqgraph_core::iet::{iet_orbit, odometer_apply, IetMap, Tolerance};
use seqgraph_core::sequence::{
    kronecker_prefix, radical_inverse, vdc_prefix, vdc_successor_bits, KroneckerParams, Theta,
};
use seqgraph_core::{Cycle, EdgeId};

/// Sorting permutation of `frac(k * theta)` in double precision.
fn float_order(theta: f64, n: usize) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..n).collect();
    let value = |k: usize| (k as f64 * theta).fract();
    idx.sort_by(|&a, &b| value(a).partial_cmp(&value(b)).unwrap());
    idx
}

/// Smallest gap between sorted `frac(k * theta)`, to make sure double
/// precision can be trusted.
fn float_min_gap(theta: f64, n: usize) -> f64 {
    let mut v: Vec<f64> = (0..n).map(|k| (k as f64 * theta).fract()).collect();
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    v.windows(2).map(|w| w[1] - w[0]).fold(1.0, f64::min)
}

#[test]
fn kronecker_orders_match_double_precision_sort() {
    let golden = (1.0 + 5f64.sqrt()) / 2.0;
    for (theta, f) in [(Theta::Golden, golden), (Theta::Sqrt2, 2f64.sqrt())] {
        for n in [1, 2, 3, 10, 77, 500, 2000] {
            assert!(float_min_gap(f, n) > 1e-9);
            let seq = kronecker_prefix(&KroneckerParams::new(theta.clone()), n).unwrap();
            assert_eq!(seq.pi(), float_order(f, n).as_slice(), "{} N = {n}", theta.name());
        }
    }
    let theta = Theta::parse("sqrt(7)").unwrap();
    let seq = kronecker_prefix(&KroneckerParams::new(theta), 300).unwrap();
    assert_eq!(seq.pi(), float_order(7f64.sqrt(), 300).as_slice());
}

/// `rev_b(k)` as an integer numerator over `b^digits`.
fn reversed_digits(mut k: u64, base: u64, digits: u32) -> u64 {
    let mut out = 0;
    for _ in 0..digits {
        out = out * base + k % base;
        k /= base;
    }
    out
}

#[test]
fn vdc_orders_match_integer_digit_reversal() {
    for base in [2u64, 3, 5, 10] {
        for n in [1usize, 2, 7, 64, 243, 500] {
            let mut digits = 1;
            while base.pow(digits) < n as u64 {
                digits += 1;
            }
            let mut idx: Vec<usize> = (0..n).collect();
            idx.sort_by_key(|&k| reversed_digits(k as u64, base, digits));
            let seq = vdc_prefix(base, n).unwrap();
            assert_eq!(seq.pi(), idx.as_slice(), "base {base}, N = {n}");
        }
    }
}

#[test]
fn radical_inverse_examples() {
    let q = |a: i64, b: i64| BigRational::new(BigInt::from(a), BigInt::from(b));
    assert_eq!(radical_inverse(6, 2), q(3, 8));
    assert_eq!(radical_inverse(5, 3), q(7, 9));
    assert_eq!(radical_inverse(0, 7), q(0, 1));
}

/// Successor by scanning for the next larger value.
fn brute_successor(values: &[f64], i: usize) -> usize {
    let above = (0..values.len())
        .filter(|&j| values[j] > values[i])
        .min_by(|&a, &b| values[a].partial_cmp(&values[b]).unwrap());
    above.unwrap_or_else(|| {
        (0..values.len())
            .min_by(|&a, &b| values[a].partial_cmp(&values[b]).unwrap())
            .unwrap()
    })
}

#[test]
fn successors_match_linear_scan() {
    let golden = (1.0 + 5f64.sqrt()) / 2.0;
    let n = 150;
    let values: Vec<f64> = (0..n).map(|k| (k as f64 * golden).fract()).collect();
    let seq = kronecker_prefix(&KroneckerParams::new(Theta::Golden), n).unwrap();
    for i in 0..n {
        assert_eq!(seq.successor(i).unwrap(), brute_successor(&values, i));
    }
}

#[test]
fn successor_bits_match_scan_over_dyadic_values() {
    for m in 1..=4u32 {
        let n = 1usize << (2 * m);
        let values: Vec<f64> = (0..n)
            .map(|k| reversed_digits(k as u64, 2, 2 * m) as f64 / n as f64)
            .collect();
        for i in 0..n {
            assert_eq!(
                vdc_successor_bits(i as u64, m).unwrap() as usize,
                brute_successor(&values, i)
            );
        }
    }
}

#[test]
fn gap_profiles_match_direct_counting() {
    for n in [2, 5, 6, 8, 50, 333] {
        let seq = kronecker_prefix(&KroneckerParams::new(Theta::Sqrt2), n).unwrap();
        let gaps: BTreeSet<i64> = (0..n)
            .map(|i| seq.successor(i).unwrap() as i64 - i as i64)
            .collect();
        let p = gap_profile(&seq).unwrap();
        assert_eq!(p.distinct_count, gaps.len());
        assert_eq!(p.values().into_iter().collect::<BTreeSet<_>>(), gaps);
        let runs: usize = p.gaps.iter().map(|r| r.hi - r.lo).sum();
        assert_eq!(runs, n);
    }
}

#[test]
fn nice_n_match_definition() {
    let golden = (1.0 + 5f64.sqrt()) / 2.0;
    let mut expected = Vec::new();
    for n in 2..=400usize {
        let order = float_order(golden, n);
        if order[1] + order[n - 1] == n {
            expected.push(n);
        }
    }
    assert_eq!(
        nice_n_scan(&KroneckerParams::new(Theta::Golden), 400).unwrap(),
        expected
    );
    assert_eq!(expected[..6], [2, 3, 5, 8, 13, 21]);
    for &n in &expected[..8] {
        let seq = kronecker_prefix(&KroneckerParams::new(Theta::Golden), n).unwrap();
        assert!(is_nice_n(&seq));
    }
}

/// `G'_N` written down edge by edge from the sorting permutation.
fn direct_reduced_graph(pi: &[usize]) -> MultiGraph {
    let n = pi.len();
    let mut g = MultiGraph::with_vertices(0..n);
    for i in 0..n - 1 {
        g.add_edge(EdgeId::c1(i), i, i + 1).unwrap();
    }
    for k in 0..n {
        g.add_edge(EdgeId::cpi(k), pi[k], pi[(k + 1) % n]).unwrap();
    }
    g
}

#[test]
fn minor_reduction_matches_direct_construction() {
    for (m, n) in [(16, 8), (16, 10), (64, 2), (13, 8), (30, 29)] {
        let vdc = vdc_prefix(2, m).unwrap();
        let r = minor_reduce(&build_graph(&vdc), n).unwrap();
        let direct = direct_reduced_graph(vdc_prefix(2, n).unwrap().pi());
        assert!(is_same_labeled_graph(&r.graph, &direct), "vdc {m} -> {n}");
        assert!(r
            .graph
            .labeled_edge_multiset()
            .keys()
            .all(|&(_, _, c)| c == Cycle::C1 || c == Cycle::Cpi));

        let params = KroneckerParams::new(Theta::Golden);
        let kron = kronecker_prefix(&params, m).unwrap();
        let r = minor_reduce(&build_graph(&kron), n).unwrap();
        let direct = direct_reduced_graph(kronecker_prefix(&params, n).unwrap().pi());
        assert!(is_same_labeled_graph(&r.graph, &direct), "kronecker {m} -> {n}");
    }
}

/// Faces of the circulant `(+1, +c, -1, -c)` rotation counted by walking
/// directed steps: leaving `v` by step `s`, the next step out of `v + s`
/// follows the reversed step `-s` in the cyclic order.
fn brute_torus_faces(n: i64, c: i64) -> usize {
    let order = [1, c, -1, -c];
    let pos = |s: i64| order.iter().position(|&t| t == s).unwrap();
    let mut seen = BTreeSet::new();
    let mut faces = 0;
    for v in 0..n {
        for &s in &order {
            if seen.contains(&(v, pos(s))) {
                continue;
            }
            faces += 1;
            let (mut x, mut k) = (v, pos(s));
            while seen.insert((x, k)) {
                let step = order[k];
                x = (x + step).rem_euclid(n);
                k = (pos(-step) + 1) % 4;
            }
        }
    }
    faces
}

#[test]
fn torus_faces_match_direct_walk() {
    for (n, c) in [(5, 2), (8, 5), (13, 5), (21, 13), (12, 5), (29, 17)] {
        let f = face_trace(&torus_rotation_system(n, c).unwrap()).unwrap();
        assert_eq!(f.face_count, brute_torus_faces(n as i64, c as i64), "N = {n}");
        assert_eq!(f.genus, 1);
        let mirrored = face_trace(&circulant_rotation_system(n, c, TorusOrder::Mirrored).unwrap()).unwrap();
        assert!(mirrored.genus >= 0);
    }
}

/// Next van der Corput value by carrying in the reversed digits.
#[test]
fn odometer_matches_bit_reversed_increment() {
    let bits = 12;
    for k in 0..(1u64 << bits) - 1 {
        let here = radical_inverse(k, 2);
        let next = radical_inverse(k + 1, 2);
        assert_eq!(odometer_apply(&here).unwrap(), next, "k = {k}");
    }
}

#[test]
fn odometer_orbit_is_the_vdc_prefix() {
    let report = iet_orbit(
        &IetMap::Odometer,
        IetMap::Odometer.origin(),
        512,
        &Tolerance::Exact,
    )
    .unwrap();
    assert!(report.distinct_ok);
    let seq = report.into_sequence().unwrap();
    assert_eq!(seq.pi(), vdc_prefix(2, 512).unwrap().pi());
}
