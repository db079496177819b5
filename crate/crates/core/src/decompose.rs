//! Cycle-cover decompositions: lightness testing, the randomized Las Vegas
//! decomposition, the deterministic kernelized decomposition, and the
//! knockout-tournament tightness fixtures.
//!
//! A decomposition deletes one edge of every cycle of a cover C, keeping a
//! path collection P. For 1/eta-light covers (eta = eps^2 / (2 ln k)) the
//! kept weight reaches (1/2 - eps) * w(C) componentwise on directed covers
//! and (2/3 - eps) * w(C) on undirected ones.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{cycles_of, EdgeSet, Instance, Orientation};
use crate::rat::{ln_enclosure, rat, rat_int, Rat};

/// An edge of a weighted cycle cover. `id` is stable within the cover and
/// is what back-maps refer to.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WEdge {
    pub id: usize,
    pub tail: usize,
    pub head: usize,
    pub weight: Vec<u128>,
}

/// A cycle cover with per-edge weight vectors. May be standalone (e.g. the
/// tournament fixtures), with no enclosing instance.
#[derive(Debug, Clone)]
pub struct WeightedCycleCover {
    orientation: Orientation,
    k: usize,
    n: usize,
    cycles: Vec<Vec<WEdge>>,
}

impl WeightedCycleCover {
    pub fn from_cycles(
        orientation: Orientation,
        k: usize,
        n: usize,
        cycles: Vec<Vec<(usize, usize, Vec<u128>)>>,
    ) -> Result<Self> {
        let min_len = if orientation == Orientation::Directed { 2 } else { 3 };
        let mut id = 0;
        let mut out = Vec::new();
        for cyc in &cycles {
            if cyc.len() < min_len {
                return Err(Error::Structure(format!(
                    "cycle of length {} below minimum {min_len}",
                    cyc.len()
                )));
            }
            let mut edges = Vec::new();
            for (tail, head, w) in cyc {
                if w.len() != k {
                    return Err(Error::Dimension(w.len(), k));
                }
                edges.push(WEdge { id, tail: *tail, head: *head, weight: w.clone() });
                id += 1;
            }
            out.push(edges);
        }
        Ok(WeightedCycleCover { orientation, k, n, cycles: out })
    }

    /// Extracts the weighted cover of `set` (a valid cycle cover) from an
    /// instance, edge ids assigned in deterministic cycle order.
    pub fn from_instance_cover(inst: &Instance, set: &EdgeSet) -> Result<Self> {
        let cycles = cycles_of(set, inst.n())?;
        let mut cyc_edges = Vec::new();
        for cyc in &cycles {
            let mut edges = Vec::new();
            for i in 0..cyc.len() {
                let (u, v) = (cyc[i], cyc[(i + 1) % cyc.len()]);
                edges.push((u, v, inst.weight_vec(u, v).0));
            }
            cyc_edges.push(edges);
        }
        WeightedCycleCover::from_cycles(inst.orientation(), inst.k(), inst.n(), cyc_edges)
    }

    /// Reassembles a cover from an explicit weighted edge list (fixture
    /// import path).
    pub fn from_weighted_edges(
        orientation: Orientation,
        k: usize,
        n: usize,
        edges: &[(usize, usize, Vec<u128>)],
    ) -> Result<Self> {
        let set = EdgeSet::from_edges(orientation, edges.iter().map(|&(u, v, _)| (u, v)));
        let lookup = |u: usize, v: usize| -> Result<Vec<u128>> {
            edges
                .iter()
                .find(|&&(a, b, _)| match orientation {
                    Orientation::Directed => (a, b) == (u, v),
                    Orientation::Undirected => {
                        (a.min(b), a.max(b)) == (u.min(v), u.max(v))
                    }
                })
                .map(|(_, _, w)| w.clone())
                .ok_or(Error::InvalidEdge(u, v))
        };
        let cycles = cycles_of(&set, n)?;
        let mut covered = BTreeSet::new();
        for c in &cycles {
            covered.extend(c.iter().copied());
        }
        if covered.len() != set.vertices().len() {
            return Err(Error::Structure("cycle cover edge list is not a union of cycles".into()));
        }
        let mut cyc_edges = Vec::new();
        for cyc in &cycles {
            let mut es = Vec::new();
            for i in 0..cyc.len() {
                let (u, v) = (cyc[i], cyc[(i + 1) % cyc.len()]);
                es.push((u, v, lookup(u, v)?));
            }
            cyc_edges.push(es);
        }
        WeightedCycleCover::from_cycles(orientation, k, n, cyc_edges)
    }

    pub fn orientation(&self) -> Orientation {
        self.orientation
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn cycles(&self) -> &[Vec<WEdge>] {
        &self.cycles
    }

    pub fn edge_count(&self) -> usize {
        self.cycles.iter().map(|c| c.len()).sum()
    }

    pub fn all_edges(&self) -> impl Iterator<Item = &WEdge> {
        self.cycles.iter().flatten()
    }

    pub fn total_weight(&self) -> Vec<u128> {
        let mut t = vec![0u128; self.k];
        for e in self.all_edges() {
            for (a, b) in t.iter_mut().zip(&e.weight) {
                *a += b;
            }
        }
        t
    }
}

/// The lightness parameter eta = eps^2 / (2 ln k), computed from a
/// certified enclosure of ln k. The upper bound of the enclosure is used,
/// so the returned value never exceeds the true eta and lightness checks
/// err on the strict side.
pub fn eta(k: usize, eps: &Rat) -> Result<Rat> {
    if k < 2 {
        return Err(Error::Domain("eta is defined for k >= 2".into()));
    }
    if !(eps > &Rat::zero() && eps < &rat(1, 2)) {
        return Err(Error::Domain("eta needs eps in (0, 1/2)".into()));
    }
    let lnk = ln_enclosure(&rat_int(k as u128))?;
    Ok(eps * eps / (rat(2, 1) * lnk.hi))
}

/// True iff every edge satisfies w(e) <= w(C)/gamma componentwise.
pub fn is_light(cover: &WeightedCycleCover, gamma: &Rat) -> Result<bool> {
    Ok(lightness_witness(cover, gamma)?.is_none())
}

/// First (edge, coordinate) violating gamma-lightness, if any.
pub fn lightness_witness(
    cover: &WeightedCycleCover,
    gamma: &Rat,
) -> Result<Option<((usize, usize), usize)>> {
    if gamma < &Rat::one() {
        return Err(Error::Domain("lightness parameter must be >= 1".into()));
    }
    let total = cover.total_weight();
    let p = gamma.numer();
    let q = gamma.denom();
    for e in cover.all_edges() {
        for (i, &w) in e.weight.iter().enumerate() {
            // gamma * w(e) <= w(C)  <=>  p*w <= q*total
            if BigInt::from(w) * p > BigInt::from(total[i]) * q {
                return Ok(Some(((e.tail, e.head), i)));
            }
        }
    }
    Ok(None)
}

/// Result of a decomposition: kept edges (in deterministic cover order) and
/// the ids removed, exactly one per cycle of the input cover.
#[derive(Debug, Clone)]
pub struct Decomposition {
    pub kept: Vec<WEdge>,
    pub removed_ids: BTreeSet<usize>,
    pub weight: Vec<u128>,
}

impl Decomposition {
    fn from_removed(cover: &WeightedCycleCover, removed: BTreeSet<usize>) -> Self {
        let mut kept = Vec::new();
        let mut weight = vec![0u128; cover.k()];
        for e in cover.all_edges() {
            if !removed.contains(&e.id) {
                for (a, b) in weight.iter_mut().zip(&e.weight) {
                    *a += b;
                }
                kept.push(e.clone());
            }
        }
        Decomposition { kept, removed_ids: removed, weight }
    }

    /// Kept edges as a plain edge set (meaningful when the cover lives on
    /// instance vertices).
    pub fn edge_set(&self, orientation: Orientation) -> EdgeSet {
        EdgeSet::from_edges(orientation, self.kept.iter().map(|e| (e.tail, e.head)))
    }
}

/// Exact check kept >= ratio * total componentwise.
pub fn meets_ratio(kept: &[u128], total: &[u128], ratio: &Rat) -> bool {
    let p = ratio.numer();
    let q = ratio.denom();
    kept.iter()
        .zip(total)
        .all(|(&a, &t)| BigInt::from(a) * q >= BigInt::from(t) * p)
}

/// Target decomposition ratio (1/2 - eps directed, 2/3 - eps undirected).
pub fn target_ratio(orientation: Orientation, eps: &Rat) -> Rat {
    let base = match orientation {
        Orientation::Directed => rat(1, 2),
        Orientation::Undirected => rat(2, 3),
    };
    let r = base - eps;
    if r < Rat::zero() {
        Rat::zero()
    } else {
        r
    }
}

/// k = 1 has a well-defined lightest edge; deleting it per cycle attains
/// the exact mono-criterion ratios (1/2 directed, 2/3 undirected).
fn decompose_lightest(cover: &WeightedCycleCover) -> Decomposition {
    let mut removed = BTreeSet::new();
    for cyc in cover.cycles() {
        let victim = cyc
            .iter()
            .min_by_key(|e| (e.weight.clone(), canonical_pair(cover.orientation(), e)))
            .unwrap();
        removed.insert(victim.id);
    }
    Decomposition::from_removed(cover, removed)
}

fn canonical_pair(orientation: Orientation, e: &WEdge) -> (usize, usize) {
    match orientation {
        Orientation::Directed => (e.tail, e.head),
        Orientation::Undirected => (e.tail.min(e.head), e.tail.max(e.head)),
    }
}

fn check_lightness_pre(cover: &WeightedCycleCover, eps: &Rat) -> Result<()> {
    let eta = eta(cover.k(), eps)?;
    let gamma = Rat::one() / eta;
    if let Some((edge, coord)) = lightness_witness(cover, &gamma)? {
        return Err(Error::Lightness { edge, coord });
    }
    Ok(())
}

/// Las Vegas decomposition: deletes one uniformly random edge per cycle and
/// resamples until the (1/2-eps) / (2/3-eps) bound holds componentwise;
/// after `max_rounds` unsuccessful rounds it falls back to the
/// deterministic algorithm. Requires a 1/eta(k,eps)-light cover for k >= 2.
pub fn decompose_randomized(
    cover: &WeightedCycleCover,
    eps: &Rat,
    seed: u64,
    max_rounds: u32,
) -> Result<Decomposition> {
    if cover.k() == 1 {
        return Ok(decompose_lightest(cover));
    }
    check_lightness_pre(cover, eps)?;
    let total = cover.total_weight();
    let ratio = target_ratio(cover.orientation(), eps);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..max_rounds {
        let mut removed = BTreeSet::new();
        for cyc in cover.cycles() {
            let pick = rng.gen_range(0..cyc.len());
            removed.insert(cyc[pick].id);
        }
        let d = Decomposition::from_removed(cover, removed);
        if meets_ratio(&d.weight, &total, &ratio) {
            return Ok(d);
        }
    }
    decompose_deterministic(cover, eps)
}

/// Back-map of a normalization: new edge id -> originating edge id, or None
/// for a zero-weight padding edge.
#[derive(Debug, Clone)]
pub struct BackMap {
    pub source: Vec<Option<usize>>,
}

/// Rewrites the cover into cycles of the shortest possible length (2-cycles
/// directed, 3-cycles undirected) on synthetic vertices. Edge weights are
/// preserved; odd remainders get zero-weight padding edges. Decompositions
/// of the output lift through the back-map.
pub fn normalize(cover: &WeightedCycleCover) -> (WeightedCycleCover, BackMap) {
    let group = match cover.orientation() {
        Orientation::Directed => 2usize,
        Orientation::Undirected => 3usize,
    };
    let mut source = Vec::new();
    let mut cycles: Vec<Vec<(usize, usize, Vec<u128>)>> = Vec::new();
    let mut next_vertex = 0usize;
    let zero = vec![0u128; cover.k()];
    for cyc in cover.cycles() {
        for chunk in cyc.chunks(group) {
            // Synthetic cycle on `group` fresh vertices.
            let verts: Vec<usize> = (0..group).map(|i| next_vertex + i).collect();
            next_vertex += group;
            let mut edges = Vec::new();
            for i in 0..group {
                let (t, h) = (verts[i], verts[(i + 1) % group]);
                if let Some(e) = chunk.get(i) {
                    source.push(Some(e.id));
                    edges.push((t, h, e.weight.clone()));
                } else {
                    source.push(None);
                    edges.push((t, h, zero.clone()));
                }
            }
            cycles.push(edges);
        }
    }
    let norm = WeightedCycleCover::from_cycles(cover.orientation(), cover.k(), next_vertex, cycles)
        .expect("normalization produces valid cycles");
    (norm, BackMap { source })
}

/// A kernel cycle after greedy merging: per position, the normalized edge
/// ids stacked there and their componentwise weight (original integer
/// scale; the 1/eta normalization only matters for the merge condition).
struct KernelCycle {
    positions: Vec<(Vec<usize>, Vec<u128>)>,
}

impl KernelCycle {
    fn weight(&self) -> Vec<u128> {
        let k = self.positions[0].1.len();
        let mut t = vec![0u128; k];
        for (_, w) in &self.positions {
            for (a, b) in t.iter_mut().zip(w) {
                *a += b;
            }
        }
        t
    }

    /// Largest scaled coordinate w_i(c)/total_i, for the greedy order.
    fn max_coord(&self, total: &[u128]) -> Rat {
        self.weight()
            .iter()
            .zip(total)
            .filter(|(_, &t)| t > 0)
            .map(|(&w, &t)| Rat::new(BigInt::from(w), BigInt::from(t)))
            .max()
            .unwrap_or_else(Rat::zero)
    }

    fn encoding(&self) -> Vec<usize> {
        let mut ids: Vec<usize> = self.positions.iter().flat_map(|(ids, _)| ids.clone()).collect();
        ids.sort_unstable();
        ids
    }
}

/// Exhaustive-search budget for the kernel (number of decompositions).
pub const KERNEL_BUDGET: u128 = 1_000_000;

/// Deterministic decomposition per the kernelization route: normalize,
/// scale every active objective to total 1/eta, greedily merge cycle pairs
/// with combined weight at most 1, exhaustively search the kernel for the
/// best decomposition, and lift back. Refuses kernels whose search space
/// exceeds [`KERNEL_BUDGET`].
pub fn decompose_deterministic(cover: &WeightedCycleCover, eps: &Rat) -> Result<Decomposition> {
    if cover.k() == 1 {
        return Ok(decompose_lightest(cover));
    }
    check_lightness_pre(cover, eps)?;
    let eta_v = eta(cover.k(), eps)?;
    let total = cover.total_weight();
    let ratio = target_ratio(cover.orientation(), eps);

    let (norm, back) = normalize(cover);
    let kernel = kernelize(&norm, &total, &eta_v);

    // Exhaustive search: delete one position per kernel cycle, maximizing
    // the minimal kept fraction over active coordinates. Pure integer
    // arithmetic with incremental updates; the chosen decomposition is
    // re-checked exactly after lifting.
    let mut space: u128 = 1;
    for c in &kernel {
        space = space.saturating_mul(c.positions.len() as u128);
        if space > KERNEL_BUDGET {
            return Err(Error::Budget(format!(
                "kernel search space exceeds {KERNEL_BUDGET} decompositions ({} cycles)",
                kernel.len()
            )));
        }
    }
    let active: Vec<usize> = (0..cover.k()).filter(|&i| total[i] > 0).collect();
    let kernel_total: Vec<u128> = {
        let mut t = vec![0u128; active.len()];
        for c in &kernel {
            for (a, b) in t.iter_mut().zip(c.weight()) {
                *a += b;
            }
        }
        t
    };
    const SCALE: u128 = 1 << 40;
    let score_of = |kept: &[u128]| -> u128 {
        kept.iter()
            .zip(active.iter().map(|&i| total[i]))
            .map(|(&a, t)| a * SCALE / t)
            .min()
            .unwrap_or(u128::MAX)
    };
    let mut choice = vec![0usize; kernel.len()];
    let mut kept: Vec<u128> = kernel_total.clone();
    for c in &kernel {
        for (a, b) in kept.iter_mut().zip(&c.positions[0].1) {
            *a -= b;
        }
    }
    let mut best_choice = choice.clone();
    let mut best_score = score_of(&kept);
    loop {
        // Mixed-radix increment with delta updates of the kept weight.
        let mut i = 0;
        loop {
            if i == kernel.len() {
                break;
            }
            let old = choice[i];
            choice[i] += 1;
            if choice[i] < kernel[i].positions.len() {
                for (x, (o, n)) in kept.iter_mut().zip(
                    kernel[i].positions[old].1.iter().zip(&kernel[i].positions[choice[i]].1),
                ) {
                    *x = *x + o - n;
                }
                break;
            }
            choice[i] = 0;
            for (x, (o, n)) in kept.iter_mut().zip(
                kernel[i].positions[old].1.iter().zip(&kernel[i].positions[0].1),
            ) {
                *x = *x + o - n;
            }
            i += 1;
        }
        if i == kernel.len() {
            break;
        }
        let score = score_of(&kept);
        if score > best_score {
            best_score = score;
            best_choice = choice.clone();
        }
    }

    // Lift: deleted kernel positions name normalized edge ids; map those to
    // original edges (padding drops out), then re-add all but one deleted
    // edge per original cycle so exactly one edge per cycle stays removed.
    let mut deleted_orig: BTreeSet<usize> = BTreeSet::new();
    for (c, &pick) in kernel.iter().zip(&best_choice) {
        for &nid in &c.positions[pick].0 {
            if let Some(oid) = back.source[nid] {
                deleted_orig.insert(oid);
            }
        }
    }
    let mut removed = BTreeSet::new();
    for cyc in cover.cycles() {
        let light_key = |e: &&WEdge| (e.weight.iter().sum::<u128>(), e.id);
        let victim = cyc
            .iter()
            .filter(|e| deleted_orig.contains(&e.id))
            .min_by_key(light_key)
            .or_else(|| cyc.iter().min_by_key(light_key))
            .unwrap();
        removed.insert(victim.id);
    }
    let d = Decomposition::from_removed(cover, removed);
    debug_assert!(meets_ratio(&d.weight, &total, &ratio));
    if !meets_ratio(&d.weight, &total, &ratio) {
        return Err(Error::Structure(
            "deterministic decomposition missed its guaranteed bound".into(),
        ));
    }
    Ok(d)
}

/// Builds the merged kernel of a normalized cover: repeatedly merges the
/// two lightest (by maximal scaled coordinate, ties by edge-id encoding)
/// cycles whose combined weight stays within the scaled unit bound, i.e.
/// w_i(c) + w_i(c') <= eta * total_i for every active coordinate.
fn kernelize(norm: &WeightedCycleCover, total: &[u128], eta_v: &Rat) -> Vec<KernelCycle> {
    let active: Vec<usize> = (0..norm.k()).filter(|&i| total[i] > 0).collect();
    let active_total: Vec<u128> = active.iter().map(|&i| total[i]).collect();
    let eta_num = eta_v.numer().clone();
    let eta_den = eta_v.denom().clone();
    let mergeable = |wa: &[u128], wb: &[u128]| -> bool {
        wa.iter().zip(wb).zip(&active_total).all(|((&a, &b), &t)| {
            BigInt::from(a + b) * &eta_den <= &eta_num * BigInt::from(t)
        })
    };
    let mut cycles: Vec<KernelCycle> = norm
        .cycles()
        .iter()
        .map(|cyc| KernelCycle {
            positions: cyc
                .iter()
                .map(|e| {
                    let w: Vec<u128> = active.iter().map(|&i| e.weight[i]).collect();
                    (vec![e.id], w)
                })
                .collect(),
        })
        .collect();
    loop {
        let mut order: Vec<usize> = (0..cycles.len()).collect();
        order.sort_by(|&a, &b| {
            (cycles[a].max_coord(&active_total), cycles[a].encoding())
                .cmp(&(cycles[b].max_coord(&active_total), cycles[b].encoding()))
        });
        let mut merged = None;
        'outer: for x in 0..order.len() {
            for y in x + 1..order.len() {
                let (a, b) = (order[x], order[y]);
                let wa = cycles[a].weight();
                let wb = cycles[b].weight();
                if mergeable(&wa, &wb) {
                    merged = Some((a, b));
                    break 'outer;
                }
            }
        }
        let Some((a, b)) = merged else { break };
        // Remove the larger index first; the smaller stays stable.
        let (lo, hi) = (a.min(b), a.max(b));
        let donor = cycles.swap_remove(hi);
        let target = &mut cycles[lo];
        for (pos, (ids, w)) in donor.positions.into_iter().enumerate() {
            target.positions[pos].0.extend(ids);
            for (t, v) in target.positions[pos].1.iter_mut().zip(w) {
                *t += v;
            }
        }
    }
    cycles
}

/// Exhausts every one-edge-per-cycle decomposition (product of cycle
/// lengths at most 10^6) and returns the one maximizing the minimal
/// per-coordinate ratio w_i(P)/w_i(C) (0/0 counted as 1), ties resolved by
/// the lexicographically first deletion choice.
pub fn best_decomposition_bruteforce(
    cover: &WeightedCycleCover,
) -> Result<(Decomposition, Rat)> {
    let mut space: u128 = 1;
    for c in cover.cycles() {
        space = space.saturating_mul(c.len() as u128);
        if space > KERNEL_BUDGET {
            return Err(Error::Budget(format!(
                "decomposition space exceeds {KERNEL_BUDGET}"
            )));
        }
    }
    let total = cover.total_weight();
    let mut choice = vec![0usize; cover.cycles().len()];
    let mut best: Option<(Rat, Vec<usize>)> = None;
    loop {
        let mut kept = total.clone();
        for (cyc, &pick) in cover.cycles().iter().zip(&choice) {
            for (a, b) in kept.iter_mut().zip(&cyc[pick].weight) {
                *a -= b;
            }
        }
        let ratio = kept
            .iter()
            .zip(&total)
            .map(|(&p, &t)| {
                if t == 0 {
                    Rat::one()
                } else {
                    rat_int(p) / rat_int(t)
                }
            })
            .min()
            .unwrap_or_else(Rat::one);
        if best.as_ref().is_none_or(|(b, _)| ratio > *b) {
            best = Some((ratio, choice.clone()));
        }
        let mut i = 0;
        loop {
            if i == choice.len() {
                break;
            }
            choice[i] += 1;
            if choice[i] < cover.cycles()[i].len() {
                break;
            }
            choice[i] = 0;
            i += 1;
        }
        if i == choice.len() {
            break;
        }
    }
    let (ratio, choice) = best.unwrap();
    let removed: BTreeSet<usize> = cover
        .cycles()
        .iter()
        .zip(&choice)
        .map(|(cyc, &pick)| cyc[pick].id)
        .collect();
    Ok((Decomposition::from_removed(cover, removed), ratio))
}

/// Knockout-tournament fixture: the cycle cover whose decompositions encode
/// tournament outcomes. Directed brackets need k = 2^l objectives (l >= 2):
/// rounds of pairwise matches followed by three finals, each match a
/// 2-cycle whose edges carry weight 1-eps on the competing index sets.
/// Undirected brackets need k = 3^l (l >= 1): ternary matches (triangles)
/// and two finals. Weights are integerized by the denominator of eps.
pub fn tournament_fixture(k: usize, orientation: Orientation, eps: &Rat) -> Result<WeightedCycleCover> {
    if !(eps > &Rat::zero() && eps < &Rat::one()) {
        return Err(Error::Domain("tournament fixture needs eps in (0, 1)".into()));
    }
    // Weight of a win: (1 - eps) scaled by the denominator of eps.
    let q = u128::try_from(eps.denom().clone())
        .map_err(|_| Error::Domain("eps denominator too large".into()))?;
    let p = u128::try_from(eps.numer().clone())
        .map_err(|_| Error::Domain("eps numerator too large".into()))?;
    let win = q - p;
    let team_weight = |k: usize, lo: usize, hi: usize| -> Vec<u128> {
        (0..k).map(|i| if i >= lo && i < hi { win } else { 0 }).collect()
    };
    match orientation {
        Orientation::Directed => {
            let l = k.trailing_zeros() as usize;
            if k < 4 || k != 1 << l {
                return Err(Error::Domain(format!(
                    "directed tournament needs k = 2^l with l >= 2, got {k}"
                )));
            }
            // Matches as (team I interval, team J interval).
            let mut matches = Vec::new();
            for r in 1..l {
                let block = 1usize << r;
                for b in 0..k / block {
                    let lo = b * block;
                    matches.push(((lo, lo + block / 2), (lo + block / 2, lo + block)));
                }
            }
            for _ in 0..3 {
                matches.push(((0, k / 2), (k / 2, k)));
            }
            let mut cycles = Vec::new();
            for (m, ((ilo, ihi), (jlo, jhi))) in matches.iter().enumerate() {
                let (a, b) = (2 * m, 2 * m + 1);
                cycles.push(vec![
                    (a, b, team_weight(k, *ilo, *ihi)),
                    (b, a, team_weight(k, *jlo, *jhi)),
                ]);
            }
            WeightedCycleCover::from_cycles(orientation, k, 2 * matches.len(), cycles)
        }
        Orientation::Undirected => {
            let mut l = 0usize;
            let mut x = k;
            while x.is_multiple_of(3) {
                x /= 3;
                l += 1;
            }
            if x != 1 || l < 1 {
                return Err(Error::Domain(format!(
                    "undirected tournament needs k = 3^l with l >= 1, got {k}"
                )));
            }
            let mut matches = Vec::new();
            for r in 1..l {
                let block = 3usize.pow(r as u32);
                for b in 0..k / block {
                    let lo = b * block;
                    let third = block / 3;
                    matches.push(((lo, lo + third), (lo + third, lo + 2 * third), (lo + 2 * third, lo + block)));
                }
            }
            for _ in 0..2 {
                matches.push(((0, k / 3), (k / 3, 2 * k / 3), (2 * k / 3, k)));
            }
            let mut cycles = Vec::new();
            for (m, (t1, t2, t3)) in matches.iter().enumerate() {
                let (a, b, c) = (3 * m, 3 * m + 1, 3 * m + 2);
                cycles.push(vec![
                    (a, b, team_weight(k, t1.0, t1.1)),
                    (b, c, team_weight(k, t2.0, t2.1)),
                    (c, a, team_weight(k, t3.0, t3.1)),
                ]);
            }
            WeightedCycleCover::from_cycles(orientation, k, 3 * matches.len(), cycles)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rat_to_f64;
    use rand::{Rng, SeedableRng};

    fn uniform_two_cycles(m: usize, k: usize, w: u128) -> WeightedCycleCover {
        let cycles = (0..m)
            .map(|i| {
                vec![
                    (2 * i, 2 * i + 1, vec![w; k]),
                    (2 * i + 1, 2 * i, vec![w; k]),
                ]
            })
            .collect();
        WeightedCycleCover::from_cycles(Orientation::Directed, k, 2 * m, cycles).unwrap()
    }

    fn uniform_triangles(m: usize, k: usize, w: u128) -> WeightedCycleCover {
        let cycles = (0..m)
            .map(|i| {
                let (a, b, c) = (3 * i, 3 * i + 1, 3 * i + 2);
                vec![
                    (a, b, vec![w; k]),
                    (b, c, vec![w; k]),
                    (c, a, vec![w; k]),
                ]
            })
            .collect();
        WeightedCycleCover::from_cycles(Orientation::Undirected, k, 3 * m, cycles).unwrap()
    }

    /// Random cover of short cycles with weights jittered in [lo, hi];
    /// light for 1/eta(k, eps) once the edge count and jitter allow
    /// max_edge <= eta * total.
    fn jittered_cover(
        seed: u64,
        n_cycles: usize,
        k: usize,
        orientation: Orientation,
        lo: u64,
        hi: u64,
    ) -> WeightedCycleCover {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let clen = if orientation == Orientation::Directed { 2 } else { 3 };
        let mut next = 0usize;
        let mut cycles = Vec::new();
        for _ in 0..n_cycles {
            let verts: Vec<usize> = (0..clen).map(|i| next + i).collect();
            next += clen;
            cycles.push(
                (0..clen)
                    .map(|i| {
                        let w: Vec<u128> = (0..k).map(|_| rng.gen_range(lo..=hi) as u128).collect();
                        (verts[i], verts[(i + 1) % clen], w)
                    })
                    .collect(),
            );
        }
        WeightedCycleCover::from_cycles(orientation, k, next, cycles).unwrap()
    }

    #[test]
    fn eta_value_and_monotonicity() {
        // eta(2, 1/4) = (1/16)/(2 ln 2) ~ 0.0451.
        let e2 = eta(2, &rat(1, 4)).unwrap();
        let v = rat_to_f64(&e2);
        assert!((v - 0.0625 / (2.0 * std::f64::consts::LN_2)).abs() < 1e-9, "{v}");
        // Strictly decreasing in k.
        let mut prev = e2;
        for k in 3..8 {
            let e = eta(k, &rat(1, 4)).unwrap();
            assert!(e < prev);
            prev = e;
        }
        assert!(eta(1, &rat(1, 4)).is_err());
        assert!(eta(2, &rat(1, 2)).is_err());
    }

    #[test]
    fn eta_exceeds_eps_cubed_in_domain() {
        // eta > eps^3 whenever eps < 1/(2 ln k).
        for k in [2usize, 4, 8] {
            let lnk = (k as f64).ln();
            for (p, q) in [(1i64, 10i64), (1, 4), (2, 5)] {
                let eps = rat(p, q);
                if rat_to_f64(&eps) < 1.0 / (2.0 * lnk) {
                    let e = eta(k, &eps).unwrap();
                    assert!(e > &eps * &eps * &eps, "k={k} eps={p}/{q}");
                }
            }
        }
    }

    #[test]
    fn lightness_examples() {
        // All edges equal with m edges total: light exactly up to gamma = m.
        let c = uniform_two_cycles(3, 2, 10);
        assert!(is_light(&c, &rat(6, 1)).unwrap());
        assert!(!is_light(&c, &rat(13, 2)).unwrap());
        // Single edge carrying everything in one coordinate: gamma <= 1 only.
        let heavy = WeightedCycleCover::from_cycles(
            Orientation::Directed,
            1,
            2,
            vec![vec![(0, 1, vec![7]), (1, 0, vec![0])]],
        )
        .unwrap();
        assert!(is_light(&heavy, &rat(1, 1)).unwrap());
        assert!(!is_light(&heavy, &rat(3, 2)).unwrap());
        assert!(is_light(&heavy, &rat(1, 2)).is_err());
    }

    #[test]
    fn tournament_k4_structure_and_lightness() {
        let eps = rat(1, 8);
        let t = tournament_fixture(4, Orientation::Directed, &eps).unwrap();
        // 5 matches: 2 first-round plus 3 finals; every objective in 4.
        assert_eq!(t.cycles().len(), 5);
        let win = 7u128; // (1 - 1/8) scaled by 8
        let total = t.total_weight();
        assert_eq!(total, vec![4 * win; 4]);
        for e in t.all_edges() {
            for &w in &e.weight {
                assert!(w == 0 || w == win);
            }
        }
        // Every edge weighs at most w(C)/4 per objective.
        assert!(is_light(&t, &rat(4, 1)).unwrap());
    }

    #[test]
    fn tournament_k8_bracket_size() {
        let t = tournament_fixture(8, Orientation::Directed, &rat(1, 8)).unwrap();
        // Round one: four matches, round two: two, finals: three.
        assert_eq!(t.cycles().len(), 9);
        let total = t.total_weight();
        assert_eq!(total, vec![5 * 7; 8]);
        assert!(tournament_fixture(6, Orientation::Directed, &rat(1, 8)).is_err());
        assert!(tournament_fixture(2, Orientation::Directed, &rat(1, 8)).is_err());
    }

    #[test]
    fn tournament_undirected_k3_and_k9() {
        let t3 = tournament_fixture(3, Orientation::Undirected, &rat(1, 8)).unwrap();
        assert_eq!(t3.cycles().len(), 2);
        assert_eq!(t3.total_weight(), vec![2 * 7; 3]);
        let t9 = tournament_fixture(9, Orientation::Undirected, &rat(1, 8)).unwrap();
        assert_eq!(t9.cycles().len(), 5);
        assert_eq!(t9.total_weight(), vec![3 * 7; 9]);
    }

    #[test]
    fn tournament_tightness_via_bruteforce() {
        // Every decomposition of the k=4 fixture leaves some objective at
        // no more than a single win.
        let eps = rat(1, 8);
        let win = 7u128;
        let t = tournament_fixture(4, Orientation::Directed, &eps).unwrap();
        let (_, ratio) = best_decomposition_bruteforce(&t).unwrap();
        assert_eq!(ratio, rat(1, 4));
        // Exhaustive confirmation of the underdog argument.
        let mut counted = 0;
        let mut choice = vec![0usize; 5];
        loop {
            let mut kept = t.total_weight();
            for (cyc, &pick) in t.cycles().iter().zip(&choice) {
                for (a, b) in kept.iter_mut().zip(&cyc[pick].weight) {
                    *a -= b;
                }
            }
            assert!(kept.iter().any(|&w| w <= win), "choice {choice:?}");
            counted += 1;
            let mut i = 0;
            loop {
                if i == 5 {
                    break;
                }
                choice[i] += 1;
                if choice[i] < 2 {
                    break;
                }
                choice[i] = 0;
                i += 1;
            }
            if i == 5 {
                break;
            }
        }
        assert_eq!(counted, 32);
    }

    #[test]
    fn randomized_symmetric_cycles_hit_exact_ratios() {
        // Equal-weight 2-cycles (enough of them to be light): every
        // decomposition keeps exactly half.
        let c = uniform_two_cycles(18, 2, 5);
        let d = decompose_randomized(&c, &rat(1, 5), 7, 64).unwrap();
        assert_eq!(d.weight, vec![90, 90]);
        assert_eq!(d.removed_ids.len(), 18);
        // Equal-weight triangles: exactly two thirds.
        let c = uniform_triangles(12, 2, 5);
        let d = decompose_randomized(&c, &rat(1, 5), 7, 64).unwrap();
        assert_eq!(d.weight, vec![120, 120]);
    }

    #[test]
    fn randomized_rejects_heavy_covers() {
        let t = tournament_fixture(4, Orientation::Directed, &rat(1, 8)).unwrap();
        assert!(matches!(
            decompose_randomized(&t, &rat(1, 5), 3, 16),
            Err(Error::Lightness { .. })
        ));
    }

    #[test]
    fn randomized_bound_on_light_covers() {
        // k = 3 requires ~63 near-uniform edges for 1/eta-lightness.
        let eps = rat(1, 5);
        for seed in 0..25u64 {
            let c = jittered_cover(seed, 40, 3, Orientation::Directed, 930, 1070);
            let gamma = Rat::one() / eta(3, &eps).unwrap();
            assert!(is_light(&c, &gamma).unwrap(), "seed {seed} not light");
            let d = decompose_randomized(&c, &eps, seed, 64).unwrap();
            assert!(meets_ratio(&d.weight, &c.total_weight(), &target_ratio(Orientation::Directed, &eps)));
            assert_eq!(d.removed_ids.len(), c.cycles().len());
        }
    }

    #[test]
    fn k1_deletes_lightest_edges() {
        let c = WeightedCycleCover::from_cycles(
            Orientation::Directed,
            1,
            5,
            vec![
                vec![(0, 1, vec![9]), (1, 0, vec![3])],
                vec![(2, 3, vec![4]), (3, 4, vec![8]), (4, 2, vec![6])],
            ],
        )
        .unwrap();
        let d = decompose_randomized(&c, &rat(1, 5), 0, 8).unwrap();
        assert_eq!(d.weight, vec![9 + 8 + 6]);
        let d2 = decompose_deterministic(&c, &rat(1, 5)).unwrap();
        assert_eq!(d2.weight, d.weight);
    }

    #[test]
    fn normalize_examples() {
        // Directed 4-cycle becomes two 2-cycles.
        let c = WeightedCycleCover::from_cycles(
            Orientation::Directed,
            1,
            4,
            vec![vec![
                (0, 1, vec![1]),
                (1, 2, vec![2]),
                (2, 3, vec![3]),
                (3, 0, vec![4]),
            ]],
        )
        .unwrap();
        let (norm, back) = normalize(&c);
        assert_eq!(norm.cycles().len(), 2);
        assert_eq!(back.source, vec![Some(0), Some(1), Some(2), Some(3)]);
        assert_eq!(norm.total_weight(), c.total_weight());
        // Directed 3-cycle gets one zero padding edge.
        let c = WeightedCycleCover::from_cycles(
            Orientation::Directed,
            1,
            3,
            vec![vec![(0, 1, vec![1]), (1, 2, vec![2]), (2, 0, vec![3])]],
        )
        .unwrap();
        let (norm, back) = normalize(&c);
        assert_eq!(norm.cycles().len(), 2);
        assert_eq!(back.source, vec![Some(0), Some(1), Some(2), None]);
        assert_eq!(norm.total_weight(), c.total_weight());
    }

    #[test]
    fn normalize_preserves_weight_randomized() {
        let mut rng = ChaCha8Rng::seed_from_u64(404);
        for _ in 0..100 {
            let orientation = if rng.gen_bool(0.5) {
                Orientation::Directed
            } else {
                Orientation::Undirected
            };
            let min_len = if orientation == Orientation::Directed { 2 } else { 3 };
            let mut next = 0;
            let mut cycles = Vec::new();
            for _ in 0..rng.gen_range(1..5) {
                let len = rng.gen_range(min_len..=min_len + 5);
                let verts: Vec<usize> = (0..len).map(|i| next + i).collect();
                next += len;
                cycles.push(
                    (0..len)
                        .map(|i| {
                            (verts[i], verts[(i + 1) % len], vec![rng.gen_range(0..50u64) as u128, rng.gen_range(0..50u64) as u128])
                        })
                        .collect(),
                );
            }
            let c = WeightedCycleCover::from_cycles(orientation, 2, next, cycles).unwrap();
            let (norm, back) = normalize(&c);
            assert_eq!(norm.total_weight(), c.total_weight());
            // Back-map hits every original edge exactly once.
            let mut seen: Vec<usize> = back.source.iter().flatten().copied().collect();
            seen.sort_unstable();
            let expect: Vec<usize> = (0..c.edge_count()).collect();
            assert_eq!(seen, expect);
        }
    }

    #[test]
    fn deterministic_symmetric_two_cycles_exact_half() {
        let c = uniform_two_cycles(18, 2, 5);
        let d = decompose_deterministic(&c, &rat(1, 5)).unwrap();
        assert_eq!(d.weight, vec![90, 90]);
        assert_eq!(d.removed_ids.len(), 18);
    }

    #[test]
    fn deterministic_matches_randomized_bound_at_k2() {
        // 19 two-cycles with near-uniform weights: light for k = 2 and
        // within the kernel search budget (2^19 decompositions).
        let eps = rat(1, 5);
        for seed in 100..106u64 {
            let c = jittered_cover(seed, 19, 2, Orientation::Directed, 960, 1040);
            let gamma = Rat::one() / eta(2, &eps).unwrap();
            assert!(is_light(&c, &gamma).unwrap(), "seed {seed}");
            let total = c.total_weight();
            let ratio = target_ratio(Orientation::Directed, &eps);
            let dr = decompose_randomized(&c, &eps, seed, 64).unwrap();
            let dd = decompose_deterministic(&c, &eps).unwrap();
            assert!(meets_ratio(&dr.weight, &total, &ratio));
            assert!(meets_ratio(&dd.weight, &total, &ratio));
            assert_eq!(dd.removed_ids.len(), c.cycles().len());
        }
    }

    #[test]
    fn deterministic_undirected_triangles_within_budget() {
        // 12 triangles: 3^12 kernel decompositions.
        let eps = rat(1, 5);
        let c = jittered_cover(7, 12, 2, Orientation::Undirected, 985, 1015);
        let gamma = Rat::one() / eta(2, &eps).unwrap();
        assert!(is_light(&c, &gamma).unwrap());
        let d = decompose_deterministic(&c, &eps).unwrap();
        assert!(meets_ratio(&d.weight, &c.total_weight(), &target_ratio(Orientation::Undirected, &eps)));
    }

    #[test]
    fn deterministic_refuses_oversized_kernels() {
        // Light k=3 covers need so many comparable cycles that the kernel
        // search space cannot fit the budget; the refusal is explicit.
        let eps = rat(1, 5);
        let c = jittered_cover(9, 40, 3, Orientation::Directed, 930, 1070);
        assert!(matches!(
            decompose_deterministic(&c, &eps),
            Err(Error::Budget(_))
        ));
    }

    #[test]
    fn kernel_size_within_paper_bound() {
        // After merging, at most 2k/eta cycles remain.
        let eps = rat(1, 5);
        for seed in 200..250u64 {
            let k = 2 + (seed as usize % 3);
            let c = jittered_cover(seed, 45, k, Orientation::Directed, 930, 1070);
            let eta_v = eta(k, &eps).unwrap();
            if !is_light(&c, &(Rat::one() / &eta_v)).unwrap() {
                continue;
            }
            let (norm, _) = normalize(&c);
            let kernel = kernelize(&norm, &c.total_weight(), &eta_v);
            let bound = rat_int(2 * k as u128) / &eta_v;
            assert!(rat_int(kernel.len() as u128) <= bound, "seed {seed}: {} cycles", kernel.len());
        }
    }

    #[test]
    fn bruteforce_examples() {
        // Single symmetric 2-cycle: ratio exactly 1/2.
        let c = uniform_two_cycles(1, 1, 4);
        let (_, ratio) = best_decomposition_bruteforce(&c).unwrap();
        assert_eq!(ratio, rat(1, 2));
        // k = 1: deleting lightest edges guarantees at least 1/2.
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for _ in 0..20 {
            let mut next = 0;
            let mut cycles = Vec::new();
            for _ in 0..rng.gen_range(1..4) {
                let len = rng.gen_range(2..6);
                let verts: Vec<usize> = (0..len).map(|i| next + i).collect();
                next += len;
                cycles.push(
                    (0..len)
                        .map(|i| (verts[i], verts[(i + 1) % len], vec![rng.gen_range(1..30u64) as u128]))
                        .collect(),
                );
            }
            let c = WeightedCycleCover::from_cycles(Orientation::Directed, 1, next, cycles).unwrap();
            let (_, ratio) = best_decomposition_bruteforce(&c).unwrap();
            assert!(ratio >= rat(1, 2));
        }
    }

    #[test]
    fn bruteforce_respects_budget() {
        // 21 cycles of length 2 exceed 10^6 decompositions.
        let c = uniform_two_cycles(21, 1, 1);
        assert!(matches!(best_decomposition_bruteforce(&c), Err(Error::Budget(_))));
    }
}
