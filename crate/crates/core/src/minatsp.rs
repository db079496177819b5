//! Iterated-cycle-cover minimization: approximate Pareto curves for
//! directed minimum TSP under the gamma-triangle inequality.
//!
//! Each round computes approximate Pareto curves of minimum cycle covers,
//! keeps connected ones as finished configurations, recurses on one
//! representative vertex per cycle with gamma^j-weighted accumulation, and
//! sparsifies each level to one configuration per eps'-signature. Finished
//! configurations unwind into tours by repeated merge-and-shortcut; every
//! output tour carries the certificate w(H) <= w' (exact rationals).

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::graph::{
    cycles_of, gamma_check, validate, weight_of, EdgeSet, GammaCheck, Instance, Orientation,
    Role, WeightVector,
};
use crate::pareto::{cc_pareto_on, dominates, CcMode, CcParams, ParetoSet, Sense, Signature};
use crate::rat::{ln_enclosure, rat, rat_int, PowerTable, Rat};

#[derive(Debug, Clone)]
pub struct MinAtspParams {
    pub eps: Rat,
    pub gamma: Rat,
    pub cc_mode: CcMode,
    pub cc_exact_threshold: usize,
    pub fail_prob: Rat,
}

impl MinAtspParams {
    pub fn new(eps: Rat, gamma: Rat) -> Self {
        MinAtspParams {
            eps,
            gamma,
            cc_mode: CcMode::Exact,
            cc_exact_threshold: 8,
            fail_prob: rat(1, 2),
        }
    }
}

/// A recursion node: a cycle cover on a vertex subset, the accumulated
/// gamma-discounted weight of its ancestor chain, and the parent link.
#[derive(Debug, Clone)]
pub struct Configuration {
    pub cover: EdgeSet,
    pub verts: Vec<usize>,
    pub w_acc: Vec<Rat>,
    pub parent: Option<usize>,
    pub depth: usize,
}

/// Per-output audit record: the chain of depths, the accumulated weight,
/// the final tour weight, and whether w(H) <= w' held exactly.
#[derive(Debug, Clone)]
pub struct TourCertificate {
    pub depths: Vec<usize>,
    pub accumulated: Vec<Rat>,
    pub tour_weight: WeightVector,
    pub holds: bool,
}

#[derive(Debug, Clone)]
pub struct MinAtspOutcome {
    pub pareto: ParetoSet,
    /// Certificates aligned with `pareto.items`.
    pub certificates: Vec<TourCertificate>,
    /// (depth, configurations kept after sparsification, signature bound Q).
    pub level_sizes: Vec<(usize, usize, BigInt)>,
    /// |V'| <= n/2^depth held for every configuration.
    pub vertex_bound_ok: bool,
    pub max_depth: usize,
    pub guaranteed: bool,
}

/// One vertex per cycle, deterministically the smallest of each cycle,
/// in increasing order.
pub fn representative_vertices(cover: &EdgeSet, n: usize) -> Result<Vec<usize>> {
    let cycles = cycles_of(cover, n)?;
    let mut reps: Vec<usize> = cycles.iter().map(|c| c[0]).collect();
    reps.sort_unstable();
    Ok(reps)
}

/// Combines a coarse tour H (one vertex per cycle of `cover`) with the
/// finer cycle cover: each cycle is traversed from its representative, and
/// consecutive cycles are joined by a shortcut edge from the predecessor
/// of one representative to the next representative. Under the
/// gamma-triangle inequality, w(result) <= w(cover) + gamma * w(H).
pub fn merge_and_shortcut(
    inst: &Instance,
    h: &EdgeSet,
    h_verts: &[usize],
    cover: &EdgeSet,
) -> Result<EdgeSet> {
    let cycles = cycles_of(cover, inst.n())?;
    if h.is_empty() {
        if h_verts.len() != 1 || cycles.len() != 1 {
            return Err(Error::Structure(
                "trivial tour merge needs a single representative and a single cycle".into(),
            ));
        }
        if !cycles[0].contains(&h_verts[0]) {
            return Err(Error::Structure("representative not on the cycle".into()));
        }
        return Ok(cover.clone());
    }
    let h_cycles = cycles_of(h, inst.n())?;
    if h_cycles.len() != 1 || h_cycles[0].len() != h_verts.len() {
        return Err(Error::Structure("H must be a single cycle on its vertex set".into()));
    }
    let order = &h_cycles[0];
    // Each cycle must contain exactly one vertex of H.
    let mut cycle_of = std::collections::BTreeMap::new();
    for (ci, cyc) in cycles.iter().enumerate() {
        let mut reps = cyc.iter().filter(|v| h_verts.contains(v));
        let rep = reps.next();
        if rep.is_none() || reps.next().is_some() {
            return Err(Error::Structure(
                "H's vertices are not a transversal of the cover's cycles".into(),
            ));
        }
        cycle_of.insert(*rep.unwrap(), ci);
    }
    if cycle_of.len() != order.len() {
        return Err(Error::Structure("representatives do not match the cover".into()));
    }
    let mut out = EdgeSet::new(Orientation::Directed);
    for (i, &rep) in order.iter().enumerate() {
        let next_rep = order[(i + 1) % order.len()];
        let cyc = &cycles[cycle_of[&rep]];
        let start = cyc.iter().position(|&v| v == rep).unwrap();
        // Traverse the cycle from rep, keeping all but the closing edge.
        for d in 0..cyc.len() - 1 {
            out.insert(cyc[(start + d) % cyc.len()], cyc[(start + d + 1) % cyc.len()]);
        }
        let prev = cyc[(start + cyc.len() - 1) % cyc.len()];
        out.insert(prev, next_rep);
    }
    Ok(out)
}

fn signature_of_rats(table: &mut PowerTable, w: &[Rat]) -> Result<Signature> {
    Ok(Signature(
        w.iter()
            .map(|x| {
                if x.is_zero() {
                    None
                } else {
                    Some(table.index_of(x))
                }
            })
            .collect(),
    ))
}

/// Keeps at most one configuration per eps'-signature of the accumulated
/// weight; the first in deterministic insertion order survives.
pub fn sparsify(configs: Vec<Configuration>, eps_prime: &Rat) -> Result<Vec<Configuration>> {
    let mut table = PowerTable::new(Rat::one() + eps_prime)?;
    let mut seen = std::collections::BTreeSet::new();
    let mut out = Vec::new();
    for c in configs {
        let sig = signature_of_rats(&mut table, &c.w_acc)?;
        if seen.insert(sig) {
            out.push(c);
        }
    }
    Ok(out)
}

fn floor_log2(n: usize) -> usize {
    (usize::BITS - 1 - n.leading_zeros()) as usize
}

/// Upper bound Q on the number of distinct eps'-signatures of accumulated
/// weights, counting the ZERO symbol: (l_max + 2)^k.
pub fn signature_count_bound(inst: &Instance, eps_prime: &Rat) -> Result<BigInt> {
    let max_edge: u128 = inst
        .edge_pairs()
        .iter()
        .flat_map(|&(u, v)| inst.weight(u, v).iter().map(|&x| x as u128))
        .max()
        .unwrap_or(0);
    let w_max = rat_int(max_edge.max(1) * inst.n() as u128 * (floor_log2(inst.n()) as u128 + 1));
    let l_max: BigInt = if w_max <= Rat::one() {
        BigInt::zero()
    } else {
        let num = ln_enclosure(&w_max)?;
        let den = ln_enclosure(&(Rat::one() + eps_prime))?;
        (num.hi / den.lo).ceil().to_integer()
    };
    let base = l_max + 2;
    let mut q = BigInt::one();
    for _ in 0..inst.k() {
        q *= &base;
    }
    Ok(q)
}

fn is_connected_cover(cover: &EdgeSet, n: usize) -> Result<bool> {
    Ok(cycles_of(cover, n)?.len() == 1)
}

/// Approximate Pareto curve for directed minimum TSP on gamma-triangle
/// instances; ratio sum_{j<floor(log2 n)} gamma^j + eps (log2 n + eps for
/// gamma = 1, 1/(1-gamma) + eps otherwise).
pub fn min_atsp(inst: &Instance, params: &MinAtspParams) -> Result<MinAtspOutcome> {
    if inst.orientation() != Orientation::Directed {
        return Err(Error::Domain("min_atsp needs a directed instance".into()));
    }
    if !params.eps.is_positive() {
        return Err(Error::Domain("eps must be positive".into()));
    }
    match gamma_check(inst, &params.gamma)? {
        GammaCheck::Ok => {}
        GammaCheck::Violated(w) => {
            return Err(Error::Domain(format!(
                "instance violates the gamma-triangle inequality at ({}, {}, {}) coordinate {}",
                w.u, w.x, w.v, w.coord
            )))
        }
    }
    let n = inst.n();
    // eps' = eps^2 / ceil(log2 n)^3; the formula degenerates below n = 4,
    // where depth <= 1 makes sparsification irrelevant anyway.
    let eps_prime = if n >= 4 {
        let l = rat(floor_log2(n.next_power_of_two()) as i64, 1);
        &params.eps * &params.eps / (&l * &l * &l)
    } else {
        params.eps.clone()
    };
    let q_bound = signature_count_bound(inst, &eps_prime)?;
    let cc = |verts: &[usize]| -> Result<ParetoSet> {
        let p = CcParams {
            eps: eps_prime.clone(),
            sense: Sense::Min,
            mode: params.cc_mode,
            fail_prob: params.fail_prob.clone(),
            thin: false,
            exact_threshold: params.cc_exact_threshold,
            scalarize_grid: 8,
        };
        cc_pareto_on(inst, verts, &p)
    };

    let mut arena: Vec<Configuration> = Vec::new();
    let mut level_sizes = Vec::new();
    let mut vertex_bound_ok = true;
    let mut guaranteed = true;
    let all: Vec<usize> = (0..n).collect();
    let pc0 = cc(&all)?;
    guaranteed &= pc0.guaranteed;
    let mut frontier: Vec<usize> = Vec::new();
    for (cover, w) in pc0.items {
        arena.push(Configuration {
            cover,
            verts: all.clone(),
            w_acc: w.to_rats(),
            parent: None,
            depth: 0,
        });
        frontier.push(arena.len() - 1);
    }
    level_sizes.push((0usize, frontier.len(), q_bound.clone()));

    let mut finals: Vec<usize> = Vec::new();
    let mut depth = 1usize;
    let mut max_depth = 0usize;
    while !frontier.is_empty() {
        let mut next: Vec<Configuration> = Vec::new();
        for &ci in &frontier {
            let (cover, w_acc) = {
                let c = &arena[ci];
                (c.cover.clone(), c.w_acc.clone())
            };
            if is_connected_cover(&cover, n)? {
                finals.push(ci);
                continue;
            }
            let reps = representative_vertices(&cover, n)?;
            if reps.len() * (1 << depth) > n {
                vertex_bound_ok = false;
            }
            let gamma_pow = pow_rat(&params.gamma, depth);
            let pc = cc(&reps)?;
            guaranteed &= pc.guaranteed;
            for (cov, w) in pc.items {
                let mut acc = w_acc.clone();
                for (a, b) in acc.iter_mut().zip(w.to_rats()) {
                    *a += &gamma_pow * b;
                }
                next.push(Configuration {
                    cover: cov,
                    verts: reps.clone(),
                    w_acc: acc,
                    parent: Some(ci),
                    depth,
                });
            }
        }
        let sparsified = sparsify(next, &eps_prime)?;
        if !sparsified.is_empty() {
            max_depth = depth;
            if BigInt::from(sparsified.len()) > q_bound {
                vertex_bound_ok = false;
            }
        }
        level_sizes.push((depth, sparsified.len(), q_bound.clone()));
        frontier = Vec::new();
        for c in sparsified {
            arena.push(c);
            frontier.push(arena.len() - 1);
        }
        depth += 1;
        if depth > floor_log2(n.max(2)) + 2 {
            return Err(Error::Structure("recursion exceeded its depth bound".into()));
        }
    }

    // Unwind every final configuration into a tour on V.
    let mut items: Vec<(EdgeSet, WeightVector, TourCertificate)> = Vec::new();
    for &fi in &finals {
        let mut chain = vec![fi];
        while let Some(p) = arena[chain[chain.len() - 1]].parent {
            chain.push(p);
        }
        // chain runs from the final (deepest) configuration to the root.
        let mut tour = arena[fi].cover.clone();
        let mut tour_verts = arena[fi].verts.clone();
        for idx in 1..chain.len() {
            let parent = &arena[chain[idx]];
            tour = merge_and_shortcut(inst, &tour, &tour_verts, &parent.cover)?;
            tour_verts = parent.verts.clone();
        }
        validate(&tour, Role::Tour, inst).map_err(|v| Error::Structure(v.to_string()))?;
        let w = weight_of(inst, &tour)?;
        let w_acc = arena[fi].w_acc.clone();
        let holds = w
            .to_rats()
            .iter()
            .zip(&w_acc)
            .all(|(a, b)| a <= b);
        let cert = TourCertificate {
            depths: chain.iter().rev().map(|&i| arena[i].depth).collect(),
            accumulated: w_acc,
            tour_weight: w.clone(),
            holds,
        };
        items.push((tour, w, cert));
    }

    // Dominance filter (minimization), keeping certificates aligned.
    let mut kept: Vec<(EdgeSet, WeightVector, TourCertificate)> = Vec::new();
    for (t, w, c) in items {
        if kept
            .iter()
            .any(|(_, kw, _)| kw == &w || dominates(kw, &w, Sense::Min).unwrap_or(false))
        {
            continue;
        }
        kept.retain(|(_, kw, _)| !dominates(&w, kw, Sense::Min).unwrap_or(false));
        kept.push((t, w, c));
    }
    let mut pareto = ParetoSet::new(Sense::Min);
    pareto.guaranteed = guaranteed;
    let mut certificates = Vec::new();
    for (t, w, c) in kept {
        pareto.items.push((t, w));
        certificates.push(c);
    }
    Ok(MinAtspOutcome {
        pareto,
        certificates,
        level_sizes,
        vertex_bound_ok,
        max_depth,
        guaranteed,
    })
}

fn pow_rat(r: &Rat, e: usize) -> Rat {
    let mut out = Rat::one();
    for _ in 0..e {
        out *= r;
    }
    out
}

/// The ratio the algorithm guarantees on a gamma-instance of n vertices:
/// sum_{j=0}^{floor(log2 n)-1} gamma^j + eps.
pub fn guaranteed_alpha(n: usize, gamma: &Rat, eps: &Rat) -> Rat {
    let mut r = Rat::zero();
    for j in 0..floor_log2(n.max(2)).max(1) {
        r += pow_rat(gamma, j);
    }
    r + eps
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen::{gamma_instance, metric_instance};
    use crate::oracle;
    use crate::pareto::verify_approx_pareto;

    #[test]
    fn two_vertex_instance_returns_its_only_tour() {
        let inst = gamma_instance(Orientation::Directed, 2, 2, 3, &rat(1, 1), 50).unwrap();
        let out = min_atsp(&inst, &MinAtspParams::new(rat(1, 2), rat(1, 1))).unwrap();
        assert_eq!(out.pareto.len(), 1);
        assert_eq!(out.max_depth, 0);
        assert!(out.certificates[0].holds);
    }

    #[test]
    fn representative_selection() {
        let cover = EdgeSet::from_edges(
            Orientation::Directed,
            [(0, 1), (1, 0), (2, 4), (4, 3), (3, 2)],
        );
        assert_eq!(representative_vertices(&cover, 5).unwrap(), vec![0, 2]);
        let single = EdgeSet::from_edges(Orientation::Directed, [(0, 1), (1, 0)]);
        assert_eq!(representative_vertices(&single, 2).unwrap(), vec![0]);
    }

    #[test]
    fn representatives_halve_the_vertex_count() {
        let cover = EdgeSet::from_edges(
            Orientation::Directed,
            [(0, 1), (1, 0), (2, 3), (3, 2), (4, 5), (5, 4)],
        );
        let reps = representative_vertices(&cover, 6).unwrap();
        assert!(reps.len() * 2 <= 6);
    }

    #[test]
    fn merge_single_cycle_trivial_case() {
        let inst = metric_instance(Orientation::Directed, 4, 1, 5).unwrap();
        let cover = EdgeSet::from_edges(Orientation::Directed, [(0, 1), (1, 2), (2, 3), (3, 0)]);
        let h = EdgeSet::new(Orientation::Directed);
        let merged = merge_and_shortcut(&inst, &h, &[0], &cover).unwrap();
        assert_eq!(merged, cover);
    }

    #[test]
    fn merge_two_cycles_bounded_by_gamma_inequality() {
        let inst = metric_instance(Orientation::Directed, 4, 1, 9).unwrap();
        let cover = EdgeSet::from_edges(Orientation::Directed, [(0, 1), (1, 0), (2, 3), (3, 2)]);
        let h = EdgeSet::from_edges(Orientation::Directed, [(0, 2), (2, 0)]);
        let merged = merge_and_shortcut(&inst, &h, &[0, 2], &cover).unwrap();
        assert!(validate(&merged, Role::Tour, &inst).is_ok());
        let wm = weight_of(&inst, &merged).unwrap().0[0];
        let wc = weight_of(&inst, &cover).unwrap().0[0];
        let wh = weight_of(&inst, &h).unwrap().0[0];
        assert!(wm <= wc + wh);
    }

    #[test]
    fn merge_rejects_non_transversals() {
        let inst = metric_instance(Orientation::Directed, 4, 1, 2).unwrap();
        let cover = EdgeSet::from_edges(Orientation::Directed, [(0, 1), (1, 0), (2, 3), (3, 2)]);
        let h = EdgeSet::from_edges(Orientation::Directed, [(0, 1), (1, 0)]);
        assert!(merge_and_shortcut(&inst, &h, &[0, 1], &cover).is_err());
    }

    #[test]
    fn sparsify_keeps_first_per_signature() {
        let mk = |w: Vec<Rat>| Configuration {
            cover: EdgeSet::new(Orientation::Directed),
            verts: vec![],
            w_acc: w,
            parent: None,
            depth: 0,
        };
        let configs = vec![
            mk(vec![rat(5, 1), rat(9, 1)]),
            mk(vec![rat(11, 1), rat(2, 1)]),
            mk(vec![rat(5, 1), rat(9, 1)]),
        ];
        let out = sparsify(configs, &rat(1, 1)).unwrap();
        assert_eq!(out.len(), 2);
        assert_eq!(out[0].w_acc[0], rat(5, 1));
        // Distinct signatures all survive.
        let configs = vec![mk(vec![rat(1, 1)]), mk(vec![rat(3, 1)]), mk(vec![rat(9, 1)])];
        assert_eq!(sparsify(configs, &rat(1, 1)).unwrap().len(), 3);
    }

    #[test]
    fn metric_instances_meet_the_log_bound() {
        for seed in [0u64, 1, 2] {
            let inst = metric_instance(Orientation::Directed, 8, 2, 100 + seed).unwrap();
            let params = MinAtspParams::new(rat(1, 2), rat(1, 1));
            let out = min_atsp(&inst, &params).unwrap();
            assert!(out.guaranteed);
            assert!(out.vertex_bound_ok);
            assert!(out.max_depth < 3, "depth {}", out.max_depth);
            for c in &out.certificates {
                assert!(c.holds);
            }
            let alpha = guaranteed_alpha(8, &rat(1, 1), &rat(1, 2));
            assert_eq!(alpha, rat(7, 2));
            let reference = oracle::exact_tour_pareto(&inst, Sense::Min).unwrap();
            assert!(
                verify_approx_pareto(&out.pareto, &reference, &alpha, Sense::Min)
                    .unwrap()
                    .is_ok(),
                "seed {seed}"
            );
        }
    }

    #[test]
    fn gamma_instances_meet_the_geometric_bound() {
        for seed in [0u64, 1] {
            let g = rat(3, 5);
            let inst = gamma_instance(Orientation::Directed, 7, 2, 200 + seed, &g, 60).unwrap();
            let params = MinAtspParams::new(rat(1, 2), g.clone());
            let out = min_atsp(&inst, &params).unwrap();
            let alpha = guaranteed_alpha(7, &g, &rat(1, 2));
            let reference = oracle::exact_tour_pareto(&inst, Sense::Min).unwrap();
            assert!(
                verify_approx_pareto(&out.pareto, &reference, &alpha, Sense::Min)
                    .unwrap()
                    .is_ok(),
                "seed {seed}"
            );
        }
    }

    #[test]
    fn three_vertex_instance_connects_at_depth_zero() {
        let inst = gamma_instance(Orientation::Directed, 3, 2, 11, &rat(1, 1), 50).unwrap();
        let out = min_atsp(&inst, &MinAtspParams::new(rat(1, 2), rat(1, 1))).unwrap();
        // Directed covers on three vertices are single triangles.
        assert_eq!(out.max_depth, 0);
        assert!(!out.pareto.is_empty());
        for c in &out.certificates {
            assert!(c.holds);
        }
    }

    #[test]
    fn scalarize_mode_runs_beyond_the_exact_threshold() {
        // n = 10 exceeds the exact enumeration threshold; the scalarize
        // mode still produces tours with valid certificates, flagged as
        // carrying no guarantee.
        let inst = metric_instance(Orientation::Directed, 10, 2, 77).unwrap();
        let mut params = MinAtspParams::new(rat(1, 2), rat(1, 1));
        params.cc_mode = crate::pareto::CcMode::Scalarize;
        let out = min_atsp(&inst, &params).unwrap();
        assert!(!out.guaranteed);
        assert!(!out.pareto.is_empty());
        assert!(!out.pareto.guaranteed);
        for c in &out.certificates {
            assert!(c.holds);
        }
        for (tour, _) in &out.pareto.items {
            assert!(validate(tour, Role::Tour, &inst).is_ok());
        }
        // Exact mode refuses the same size rather than degrading.
        let exact = MinAtspParams::new(rat(1, 2), rat(1, 1));
        assert!(matches!(min_atsp(&inst, &exact), Err(Error::Budget(_))));
    }

    #[test]
    fn rejects_non_gamma_instances() {
        let inst = crate::gen::random_instance(Orientation::Directed, 5, 2, 5, 100).unwrap();
        let err = min_atsp(&inst, &MinAtspParams::new(rat(1, 2), rat(1, 1)));
        assert!(matches!(err, Err(Error::Domain(_))));
    }
}
