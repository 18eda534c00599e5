//! Gap structure `S(i) - i` of a sorting permutation, the nice-N condition
//! and circulant recognition.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::SequenceGraph;
use crate::sequence::{KroneckerOrders, KroneckerParams, SortPermutation, SortedSequence};

/// A maximal run of consecutive indices `lo..hi` sharing one gap value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct GapRun {
    pub value: i64,
    pub lo: usize,
    pub hi: usize,
}

/// Signed successor gaps `S(i) - i` grouped into maximal index runs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GapProfile {
    pub n: usize,
    pub gaps: Vec<GapRun>,
    pub distinct_count: usize,
    /// `pi(1)`, the index of the smallest nonzero term when `pi(0) = 0`.
    pub pi1: usize,
    /// `pi(N-1)`, the index of the largest term.
    pub pi_last: usize,
}

impl GapProfile {
    pub fn from_permutation(perm: &SortPermutation) -> Result<Self> {
        let n = perm.len();
        if n < 2 {
            return Err(Error::InvalidParam("gap profile needs N >= 2".into()));
        }
        let mut gaps: Vec<GapRun> = Vec::new();
        let mut seen = BTreeSet::new();
        for i in 0..n {
            let value = perm.successor_of(i) as i64 - i as i64;
            seen.insert(value);
            match gaps.last_mut() {
                Some(run) if run.value == value => run.hi = i + 1,
                _ => gaps.push(GapRun {
                    value,
                    lo: i,
                    hi: i + 1,
                }),
            }
        }
        Ok(GapProfile {
            n,
            gaps,
            distinct_count: seen.len(),
            pi1: perm.pi()[1],
            pi_last: perm.pi()[n - 1],
        })
    }

    /// Distinct gap values in order of first appearance.
    pub fn values(&self) -> Vec<i64> {
        let mut out: Vec<i64> = Vec::new();
        for run in &self.gaps {
            if !out.contains(&run.value) {
                out.push(run.value);
            }
        }
        out
    }
}

pub fn gap_profile(seq: &SortedSequence) -> Result<GapProfile> {
    GapProfile::from_permutation(seq.permutation())
}

/// Checks every gap against the three-case formula in `pi(1)` and `pi(N-1)`.
pub fn three_gap_holds(perm: &SortPermutation) -> bool {
    let n = perm.len();
    if n < 2 {
        return false;
    }
    let p1 = perm.pi()[1] as i64;
    let pl = perm.pi()[n - 1] as i64;
    let n_i = n as i64;
    (0..n).all(|i| {
        let gap = perm.successor_of(i) as i64 - i as i64;
        let i = i as i64;
        let expected = if i < n_i - p1 {
            p1
        } else if i >= pl {
            -pl
        } else {
            p1 - pl
        };
        // The first and second ranges must not overlap.
        let ambiguous = i < n_i - p1 && i >= pl;
        !ambiguous && gap == expected
    })
}

pub fn verify_three_gap(seq: &SortedSequence) -> bool {
    three_gap_holds(seq.permutation())
}

/// `N = pi(1) + pi(N-1)`.
pub fn is_nice_permutation(perm: &SortPermutation) -> bool {
    let n = perm.len();
    n >= 2 && perm.pi()[1] + perm.pi()[n - 1] == n
}

pub fn is_nice_n(seq: &SortedSequence) -> bool {
    is_nice_permutation(seq.permutation())
}

/// All nice `N` in `2..=n_max` for a Kronecker sequence, ascending.
pub fn nice_n_scan(params: &KroneckerParams, n_max: usize) -> Result<Vec<usize>> {
    if n_max < 2 {
        return Err(Error::InvalidParam("n_max must be at least 2".into()));
    }
    let mut out = Vec::new();
    for (k, perm) in KroneckerOrders::new(params, n_max)?.enumerate() {
        let perm = perm?;
        if is_nice_permutation(&perm) {
            out.push(k + 1);
        }
    }
    Ok(out)
}

/// Connection set `{1, c}` of a circulant sequence graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ConnectionSet {
    pub n: usize,
    pub c: usize,
    /// `c = ±1 mod N`: the set collapses to `{1}` and the Cpi edges run
    /// parallel to the C1 edges.
    pub collapsed: bool,
}

impl ConnectionSet {
    pub fn steps(&self) -> [usize; 2] {
        [1, self.c]
    }
}

/// Returns `{1, pi(1)}` when `S(i) = i + pi(1) mod N` for every `i`.
pub fn circulant_step(perm: &SortPermutation) -> Option<ConnectionSet> {
    let n = perm.len();
    if n < 2 {
        return None;
    }
    let c = perm.pi()[1];
    (0..n)
        .all(|i| perm.successor_of(i) == (i + c) % n)
        .then_some(ConnectionSet {
            n,
            c,
            collapsed: c % n == 1 || c % n == n - 1,
        })
}

/// Circulant check against the graph's Cpi edges, with `pi(1)` from `seq`.
pub fn circulant_check(g: &SequenceGraph, seq: &SortedSequence) -> Option<ConnectionSet> {
    let n = g.n();
    if n < 2 || seq.len() != n {
        return None;
    }
    let c = seq.pi()[1];
    g.cpi_edges()
        .iter()
        .all(|e| (e.v + n - e.u) % n == c)
        .then_some(ConnectionSet {
            n,
            c,
            collapsed: c == 1 || c == n - 1,
        })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::build_graph;
    use crate::sequence::{kronecker_prefix, vdc_prefix, Theta};

    fn golden(n: usize) -> SortedSequence {
        kronecker_prefix(&KroneckerParams::new(Theta::Golden), n).unwrap()
    }

    #[test]
    fn golden_eight_profile() {
        let p = gap_profile(&golden(8)).unwrap();
        let values: BTreeSet<i64> = p.gaps.iter().map(|r| r.value).collect();
        assert_eq!(values, BTreeSet::from([5, -3]));
        assert!(values.iter().all(|v| v.rem_euclid(8) == 5));
        assert_eq!((p.pi1, p.pi_last), (5, 3));
    }

    #[test]
    fn golden_six_profile() {
        let p = gap_profile(&golden(6)).unwrap();
        assert_eq!(
            p.gaps,
            vec![
                GapRun { value: 5, lo: 0, hi: 1 },
                GapRun { value: 2, lo: 1, hi: 3 },
                GapRun { value: -3, lo: 3, hi: 6 },
            ]
        );
        assert_eq!(p.values(), vec![5, 2, -3]);
        assert_eq!((p.pi1, p.pi_last), (5, 3));
        assert!(verify_three_gap(&golden(6)));
    }

    #[test]
    fn two_terms() {
        let p = gap_profile(&golden(2)).unwrap();
        assert_eq!(p.values(), vec![1, -1]);
        assert!(gap_profile(&golden(1)).is_err());
    }

    #[test]
    fn nice_examples() {
        assert!(is_nice_n(&golden(8)));
        assert!(!is_nice_n(&golden(6)));
        assert!(is_nice_n(&golden(2)));
    }

    #[test]
    fn vdc_is_not_three_gap() {
        let seq = vdc_prefix(2, 16).unwrap();
        assert!(!verify_three_gap(&seq));
        assert!(gap_profile(&seq).unwrap().distinct_count > 3);
    }

    #[test]
    fn circulant_examples() {
        let s8 = golden(8);
        let set = circulant_check(&build_graph(&s8), &s8).unwrap();
        assert_eq!(set.steps(), [1, 5]);
        assert!(!set.collapsed);

        let s6 = golden(6);
        assert_eq!(circulant_check(&build_graph(&s6), &s6), None);

        let s2 = golden(2);
        let set = circulant_check(&build_graph(&s2), &s2).unwrap();
        assert_eq!(set.steps(), [1, 1]);
        assert!(set.collapsed);
        assert_eq!(circulant_step(s2.permutation()), Some(set));
    }

    #[test]
    fn scan_small() {
        let nice = nice_n_scan(&KroneckerParams::new(Theta::Golden), 100).unwrap();
        assert_eq!(nice[0], 2);
        assert!(nice.contains(&8));
        assert!(!nice.contains(&6));
        assert!(nice_n_scan(&KroneckerParams::new(Theta::Golden), 1).is_err());
    }
}
