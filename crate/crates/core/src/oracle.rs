//! Exact brute-force ground truth at desk scale: full enumeration of tours,
//! cycle covers, and matchings, plus the exact Pareto sets every acceptance
//! test compares against.
//!
//! The enumerators here are written independently of the recursive
//! enumeration inside the pareto module (permutation iteration instead of
//! successor recursion), so the two routes cross-check each other.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::graph::{weight_of, EdgeSet, Instance, Orientation};
use crate::pareto::{filter_dominated, ParetoSet, Sense};

/// In-place next lexicographic permutation; false once exhausted.
fn next_perm(a: &mut [usize]) -> bool {
    if a.len() < 2 {
        return false;
    }
    let mut i = a.len() - 1;
    while i > 0 && a[i - 1] >= a[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = a.len() - 1;
    while a[j] <= a[i - 1] {
        j -= 1;
    }
    a.swap(i - 1, j);
    a[i..].reverse();
    true
}

/// Visits every Hamiltonian cycle of the complete graph on 0..n in
/// deterministic lexicographic order. Undirected tours are visited once
/// (reversals skipped).
pub fn for_each_tour(n: usize, orientation: Orientation, mut f: impl FnMut(&EdgeSet)) {
    let min_n = if orientation == Orientation::Directed { 2 } else { 3 };
    if n < min_n {
        return;
    }
    let mut rest: Vec<usize> = (1..n).collect();
    loop {
        let skip = orientation == Orientation::Undirected && rest.first() > rest.last();
        if !skip {
            let mut set = EdgeSet::new(orientation);
            set.insert(0, rest[0]);
            for w in rest.windows(2) {
                set.insert(w[0], w[1]);
            }
            set.insert(*rest.last().unwrap(), 0);
            f(&set);
        }
        if !next_perm(&mut rest) {
            break;
        }
    }
}

/// Visits every cycle cover of the complete graph on 0..n: directed covers
/// are fixed-point-free permutations; undirected 2-factors additionally
/// exclude transpositions and are deduplicated over cycle orientations.
pub fn for_each_cycle_cover(n: usize, orientation: Orientation, mut f: impl FnMut(&EdgeSet)) {
    match orientation {
        Orientation::Directed => {
            if n < 2 {
                return;
            }
            let mut perm: Vec<usize> = (0..n).collect();
            loop {
                if perm.iter().enumerate().all(|(v, &s)| v != s) {
                    let set = EdgeSet::from_edges(
                        Orientation::Directed,
                        perm.iter().enumerate().map(|(v, &s)| (v, s)),
                    );
                    f(&set);
                }
                if !next_perm(&mut perm) {
                    break;
                }
            }
        }
        Orientation::Undirected => {
            if n < 3 {
                return;
            }
            let mut seen: BTreeSet<EdgeSet> = BTreeSet::new();
            let mut perm: Vec<usize> = (0..n).collect();
            loop {
                let ok = perm
                    .iter()
                    .enumerate()
                    .all(|(v, &s)| v != s && perm[s] != v);
                if ok {
                    let set = EdgeSet::from_edges(
                        Orientation::Undirected,
                        perm.iter().enumerate().map(|(v, &s)| (v, s)),
                    );
                    if seen.insert(set.clone()) {
                        f(&set);
                    }
                }
                if !next_perm(&mut perm) {
                    break;
                }
            }
        }
    }
}

/// Visits every matching of the complete graph on 0..n (including the empty
/// one) by branching on the smallest unmatched vertex.
pub fn for_each_matching(n: usize, mut f: impl FnMut(&EdgeSet)) {
    fn rec(n: usize, v: usize, used: &mut Vec<bool>, cur: &mut EdgeSet, f: &mut impl FnMut(&EdgeSet)) {
        let Some(v) = (v..n).find(|&x| !used[x]) else {
            f(cur);
            return;
        };
        // v stays unmatched.
        used[v] = true;
        rec(n, v + 1, used, cur, f);
        // v matched to any later free vertex.
        for u in v + 1..n {
            if !used[u] {
                used[u] = true;
                cur.insert(v, u);
                rec(n, v + 1, used, cur, f);
                cur.remove(v, u);
                used[u] = false;
            }
        }
        used[v] = false;
    }
    let mut cur = EdgeSet::new(Orientation::Undirected);
    rec(n, 0, &mut vec![false; n], &mut cur, &mut f);
}

fn tour_budget(inst: &Instance) -> usize {
    match inst.orientation() {
        Orientation::Directed => 9,
        Orientation::Undirected => 10,
    }
}

/// Exact Pareto set of Hamiltonian cycles. Refuses n beyond the enumeration
/// budget (9 directed, 10 undirected).
pub fn exact_tour_pareto(inst: &Instance, sense: Sense) -> Result<ParetoSet> {
    if inst.n() > tour_budget(inst) {
        return Err(Error::Budget(format!(
            "exact tour enumeration refused for n = {} (limit {})",
            inst.n(),
            tour_budget(inst)
        )));
    }
    let mut raw = ParetoSet::new(sense);
    let mut err = None;
    for_each_tour(inst.n(), inst.orientation(), |t| match weight_of(inst, t) {
        Ok(w) => raw.items.push((t.clone(), w)),
        Err(e) => err = Some(e),
    });
    if let Some(e) = err {
        return Err(e);
    }
    Ok(filter_dominated(&raw))
}

/// Exact Pareto set of cycle covers; refuses n > 8.
pub fn exact_cc_pareto(inst: &Instance, sense: Sense) -> Result<ParetoSet> {
    if inst.n() > 8 {
        return Err(Error::Budget(format!(
            "exact cycle-cover enumeration refused for n = {}",
            inst.n()
        )));
    }
    let mut raw = ParetoSet::new(sense);
    let mut err = None;
    for_each_cycle_cover(inst.n(), inst.orientation(), |t| match weight_of(inst, t) {
        Ok(w) => raw.items.push((t.clone(), w)),
        Err(e) => err = Some(e),
    });
    if let Some(e) = err {
        return Err(e);
    }
    Ok(filter_dominated(&raw))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{validate, Role};
    use crate::pareto::{dominates, verify_approx_pareto};
    use crate::rat::rat;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn tour_counts() {
        let mut c = 0;
        for_each_tour(4, Orientation::Directed, |_| c += 1);
        assert_eq!(c, 6); // (n-1)!
        let mut c = 0;
        for_each_tour(5, Orientation::Undirected, |_| c += 1);
        assert_eq!(c, 12); // (n-1)!/2
    }

    #[test]
    fn cover_counts_match_known_values() {
        // Directed covers are fixed-point-free permutations.
        for (n, expect) in [(2, 1), (3, 2), (4, 9), (5, 44), (6, 265)] {
            let mut c = 0;
            for_each_cycle_cover(n, Orientation::Directed, |_| c += 1);
            assert_eq!(c, expect, "derangements of {n}");
        }
        // Undirected 2-factors of K_n.
        for (n, expect) in [(3, 1), (4, 3), (5, 12), (6, 70), (7, 465)] {
            let mut c = 0;
            for_each_cycle_cover(n, Orientation::Undirected, |_| c += 1);
            assert_eq!(c, expect, "2-factors of K{n}");
        }
    }

    #[test]
    fn covers_are_valid_and_distinct() {
        for orientation in [Orientation::Directed, Orientation::Undirected] {
            let inst = Instance::from_fn(orientation, 6, 1, None, |_, _| vec![1]).unwrap();
            let mut seen = BTreeSet::new();
            for_each_cycle_cover(6, orientation, |cc| {
                assert!(validate(cc, Role::CycleCover, &inst).is_ok());
                assert!(seen.insert(cc.clone()));
            });
        }
    }

    #[test]
    fn matching_count_is_telephone_number() {
        // Involutions of n elements: 1, 2, 4, 10, 26, 76, 232.
        let mut c = 0;
        for_each_matching(6, |_| c += 1);
        assert_eq!(c, 76);
    }

    #[test]
    fn directed_triangle_has_two_tours_one_weight_each() {
        let inst = Instance::from_fn(Orientation::Directed, 3, 1, None, |_, _| vec![1]).unwrap();
        let p = exact_tour_pareto(&inst, Sense::Max).unwrap();
        // Both rotations have equal weight; duplicates collapse to one.
        assert_eq!(p.len(), 1);
        assert_eq!(p.items[0].1 .0, vec![3]);
    }

    #[test]
    fn symmetric_instance_pareto_closed_under_reversal() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let inst = Instance::from_fn(Orientation::Undirected, 6, 2, None, |_, _| {
            vec![rng.gen_range(0..9), rng.gen_range(0..9)]
        })
        .unwrap();
        let p = exact_tour_pareto(&inst, Sense::Max).unwrap();
        for (t, w) in &p.items {
            // Undirected edge sets are their own reversals; check validity
            // and non-domination instead.
            assert!(validate(t, Role::Tour, &inst).is_ok());
            for (_, other) in &p.items {
                assert!(!dominates(other, w, Sense::Max).unwrap());
            }
        }
    }

    #[test]
    fn two_vertex_directed_cover_is_unique() {
        let inst = Instance::from_fn(Orientation::Directed, 2, 1, None, |_, _| vec![4]).unwrap();
        let p = exact_cc_pareto(&inst, Sense::Max).unwrap();
        assert_eq!(p.len(), 1);
        assert_eq!(p.items[0].1 .0, vec![8]);
    }

    #[test]
    fn tours_are_covered_by_cc_pareto() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let inst = Instance::from_fn(Orientation::Directed, 6, 2, None, |_, _| {
            vec![rng.gen_range(0..15), rng.gen_range(0..15)]
        })
        .unwrap();
        let tours = exact_tour_pareto(&inst, Sense::Max).unwrap();
        let covers = exact_cc_pareto(&inst, Sense::Max).unwrap();
        // Tours are cycle covers: every Pareto tour is weakly covered.
        assert!(verify_approx_pareto(&covers, &tours, &rat(1, 1), Sense::Max)
            .unwrap()
            .is_ok());
    }

    #[test]
    fn budget_refusals() {
        let big = Instance::from_fn(Orientation::Directed, 10, 1, None, |_, _| vec![1]).unwrap();
        assert!(matches!(exact_tour_pareto(&big, Sense::Max), Err(Error::Budget(_))));
        let nine = Instance::from_fn(Orientation::Directed, 9, 1, None, |_, _| vec![1]).unwrap();
        assert!(matches!(exact_cc_pareto(&nine, Sense::Max), Err(Error::Budget(_))));
    }

    #[test]
    fn oracle_and_pareto_enumerations_agree_on_counts() {
        // Two independently written enumerators must see the same worlds.
        use crate::pareto::{cc_pareto_approx, CcParams};
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for orientation in [Orientation::Directed, Orientation::Undirected] {
            let inst = Instance::from_fn(orientation, 6, 2, None, |_, _| {
                vec![rng.gen_range(0..10), rng.gen_range(0..10)]
            })
            .unwrap();
            let via_pareto = cc_pareto_approx(&inst, &CcParams::exact(rat(1, 2), Sense::Max)).unwrap();
            let via_oracle = exact_cc_pareto(&inst, Sense::Max).unwrap();
            let a: BTreeSet<Vec<u128>> = via_pareto.items.iter().map(|(_, w)| w.0.clone()).collect();
            let b: BTreeSet<Vec<u128>> = via_oracle.items.iter().map(|(_, w)| w.0.clone()).collect();
            assert_eq!(a, b);
        }
    }
}
