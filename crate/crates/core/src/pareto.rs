//! Dominance, epsilon-signatures, Pareto-set containers, approximate Pareto
//! curves of cycle covers, and verification of alpha-approximate curves.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::graph::{weight_of, EdgeSet, Instance, Orientation, WeightVector};
use crate::rat::{rat_int, PowerTable, Rat};
use crate::solver::{optimal_cycle_cover, ScalarWeights};

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sense {
    Max,
    Min,
}

/// `a` dominates `b`: componentwise at least as good with one coordinate
/// strictly better (reversed for minimization).
pub fn dominates(a: &WeightVector, b: &WeightVector, sense: Sense) -> Result<bool> {
    if a.len() != b.len() {
        return Err(Error::Dimension(a.len(), b.len()));
    }
    let mut strict = false;
    for (x, y) in a.0.iter().zip(&b.0) {
        let (better_eq, better) = match sense {
            Sense::Max => (x >= y, x > y),
            Sense::Min => (x <= y, x < y),
        };
        if !better_eq {
            return Ok(false);
        }
        if better {
            strict = true;
        }
    }
    Ok(strict)
}

/// A set of solutions with their weight vectors. `guaranteed` records
/// whether the producing computation carries its formal approximation
/// guarantee (exact enumeration does; heuristic scalarization does not).
#[derive(Debug, Clone)]
pub struct ParetoSet {
    pub sense: Sense,
    pub items: Vec<(EdgeSet, WeightVector)>,
    pub guaranteed: bool,
}

impl ParetoSet {
    pub fn new(sense: Sense) -> Self {
        ParetoSet { sense, items: Vec::new(), guaranteed: true }
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn weights(&self) -> Vec<&WeightVector> {
        self.items.iter().map(|(_, w)| w).collect()
    }
}

/// Removes dominated items (and duplicate weight vectors, keeping the first
/// in the set's deterministic order). Idempotent.
pub fn filter_dominated(set: &ParetoSet) -> ParetoSet {
    let mut kept: Vec<(EdgeSet, WeightVector)> = Vec::new();
    for (edges, w) in &set.items {
        let mut dominated = false;
        for (_, kw) in &kept {
            if kw == w || dominates(kw, w, set.sense).unwrap_or(false) {
                dominated = true;
                break;
            }
        }
        if dominated {
            continue;
        }
        kept.retain(|(_, kw)| !dominates(w, kw, set.sense).unwrap_or(false));
        kept.push((edges.clone(), w.clone()));
    }
    ParetoSet { sense: set.sense, items: kept, guaranteed: set.guaranteed }
}

/// Geometric bucket vector: entry i is None (the ZERO symbol) iff w_i = 0,
/// else the unique l with (1+eps)^l <= w_i < (1+eps)^(l+1).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Signature(pub Vec<Option<u64>>);

pub fn signature_with(table: &mut PowerTable, w: &[Rat]) -> Signature {
    Signature(
        w.iter()
            .map(|x| {
                if x.is_zero() {
                    None
                } else {
                    Some(table.index_of(x))
                }
            })
            .collect(),
    )
}

pub fn signature(w: &WeightVector, eps: &Rat) -> Result<Signature> {
    if !(eps > &Rat::zero()) {
        return Err(Error::Domain("signature needs eps > 0".into()));
    }
    let mut table = PowerTable::new(Rat::one() + eps)?;
    Ok(signature_with(&mut table, &w.to_rats()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CcMode {
    Exact,
    Scalarize,
}

#[derive(Debug, Clone)]
pub struct CcParams {
    pub eps: Rat,
    pub sense: Sense,
    pub mode: CcMode,
    /// Failure probability budget; vacuous under exact enumeration.
    pub fail_prob: Rat,
    /// Thin the exact curve to one representative per eps-signature.
    pub thin: bool,
    /// Refuse exact enumeration above this vertex count.
    pub exact_threshold: usize,
    /// Lattice resolution for the scalarization sweep.
    pub scalarize_grid: u64,
}

impl CcParams {
    pub fn exact(eps: Rat, sense: Sense) -> Self {
        CcParams {
            eps,
            sense,
            mode: CcMode::Exact,
            fail_prob: crate::rat::rat(1, 2),
            thin: false,
            exact_threshold: 8,
            scalarize_grid: 8,
        }
    }
}

/// Enumerates all cycle covers over the vertex subset `verts` (directed:
/// one-regular digraphs without fixed points; undirected: 2-factors with
/// cycles of length >= 3), invoking `f` on each cover's edge list.
///
/// This is the enumeration used by the exact mode of [`cc_pareto_approx`];
/// the oracle module carries an independently written enumerator.
fn enumerate_covers_on(
    orientation: Orientation,
    verts: &[usize],
    f: &mut impl FnMut(&[(usize, usize)]),
) {
    let m = verts.len();
    match orientation {
        Orientation::Directed => {
            // Build successor assignments without fixed points.
            fn rec(
                m: usize,
                verts: &[usize],
                succ: &mut Vec<usize>,
                used: &mut Vec<bool>,
                buf: &mut Vec<(usize, usize)>,
                f: &mut impl FnMut(&[(usize, usize)]),
            ) {
                let u = succ.len();
                if u == m {
                    buf.clear();
                    buf.extend(succ.iter().enumerate().map(|(a, &b)| (verts[a], verts[b])));
                    f(buf);
                    return;
                }
                for v in 0..m {
                    if v != u && !used[v] {
                        used[v] = true;
                        succ.push(v);
                        rec(m, verts, succ, used, buf, f);
                        succ.pop();
                        used[v] = false;
                    }
                }
            }
            if m >= 2 {
                rec(m, verts, &mut Vec::new(), &mut vec![false; m], &mut Vec::new(), f);
            }
        }
        Orientation::Undirected => {
            // Partition into cycles of length >= 3: repeatedly route a cycle
            // through the smallest uncovered vertex.
            fn rec(
                m: usize,
                verts: &[usize],
                covered: &mut Vec<bool>,
                edges: &mut Vec<(usize, usize)>,
                buf: &mut Vec<(usize, usize)>,
                f: &mut impl FnMut(&[(usize, usize)]),
            ) {
                let Some(s) = (0..m).find(|&v| !covered[v]) else {
                    buf.clear();
                    buf.extend(edges.iter().map(|&(a, b)| (verts[a], verts[b])));
                    f(buf);
                    return;
                };
                covered[s] = true;
                // Grow a path s..last, close it when length >= 3. The second
                // vertex is kept below the last to skip reversals.
                #[allow(clippy::too_many_arguments)]
                fn grow(
                    m: usize,
                    verts: &[usize],
                    s: usize,
                    path: &mut Vec<usize>,
                    covered: &mut Vec<bool>,
                    edges: &mut Vec<(usize, usize)>,
                    buf: &mut Vec<(usize, usize)>,
                    f: &mut impl FnMut(&[(usize, usize)]),
                ) {
                    let last = *path.last().unwrap();
                    if path.len() >= 3 && path[1] < last {
                        let mut es: Vec<(usize, usize)> =
                            path.windows(2).map(|w| (w[0], w[1])).collect();
                        es.push((last, s));
                        let baselen = edges.len();
                        edges.extend(es);
                        rec(m, verts, covered, edges, buf, f);
                        edges.truncate(baselen);
                    }
                    for v in 0..m {
                        if !covered[v] && v != s {
                            covered[v] = true;
                            path.push(v);
                            grow(m, verts, s, path, covered, edges, buf, f);
                            path.pop();
                            covered[v] = false;
                        }
                    }
                }
                grow(m, verts, s, &mut vec![s], covered, edges, buf, f);
                covered[s] = false;
            }
            if m >= 3 {
                rec(m, verts, &mut vec![false; m], &mut Vec::new(), &mut Vec::new(), f);
            }
        }
    }
}

/// Reusable cover enumeration over a fixed vertex subset: edge lists are
/// produced once and can be ranked under several weight functions (the
/// beta grid re-weighs the same covers repeatedly).
pub struct CoverEnumeration {
    orientation: Orientation,
    covers: Vec<Vec<(usize, usize)>>,
}

impl CoverEnumeration {
    pub fn new(orientation: Orientation, verts: &[usize], threshold: usize) -> Result<Self> {
        if verts.len() > threshold {
            return Err(Error::Budget(format!(
                "exact cycle-cover enumeration refused for n = {} > threshold {}",
                verts.len(),
                threshold
            )));
        }
        let mut covers = Vec::new();
        enumerate_covers_on(orientation, verts, &mut |edges| covers.push(edges.to_vec()));
        Ok(CoverEnumeration { orientation, covers })
    }

    pub fn len(&self) -> usize {
        self.covers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.covers.is_empty()
    }

    /// Exact Pareto set of the enumerated covers under `inst`'s weights.
    pub fn pareto(&self, inst: &Instance, sense: Sense) -> Result<ParetoSet> {
        let k = inst.k();
        let mut kept: Vec<(usize, Vec<u128>)> = Vec::new();
        for (idx, edges) in self.covers.iter().enumerate() {
            let mut w = vec![0u128; k];
            for &(u, v) in edges {
                if u >= inst.n() || v >= inst.n() || u == v {
                    return Err(Error::InvalidEdge(u, v));
                }
                for (a, &x) in w.iter_mut().zip(inst.weight(u, v)) {
                    *a += x as u128;
                }
            }
            if kept.iter().any(|(_, kw)| kw == &w || dominates_raw(kw, &w, sense)) {
                continue;
            }
            kept.retain(|(_, kw)| !dominates_raw(&w, kw, sense));
            kept.push((idx, w));
        }
        let mut out = ParetoSet::new(sense);
        for (idx, w) in kept {
            let set = EdgeSet::from_edges(self.orientation, self.covers[idx].iter().copied());
            out.items.push((set, WeightVector(w)));
        }
        Ok(out)
    }
}

fn dominates_raw(a: &[u128], b: &[u128], sense: Sense) -> bool {
    let mut strict = false;
    for (x, y) in a.iter().zip(b) {
        let (ge, gt) = match sense {
            Sense::Max => (x >= y, x > y),
            Sense::Min => (x <= y, x < y),
        };
        if !ge {
            return false;
        }
        strict |= gt;
    }
    strict
}

/// Approximate Pareto curve of cycle covers over a vertex subset.
///
/// Exact mode enumerates every cycle cover and filters dominance (a true
/// Pareto curve, failure probability zero), optionally thinned to one
/// representative per eps-signature; it refuses subsets larger than the
/// enumeration threshold. Scalarize mode sweeps a lattice of nonnegative
/// weight combinations through the optimal cycle-cover solver and carries
/// no approximation guarantee.
pub fn cc_pareto_on(inst: &Instance, verts: &[usize], params: &CcParams) -> Result<ParetoSet> {
    if !(params.eps > Rat::zero()) {
        return Err(Error::Domain("cc_pareto_approx needs eps > 0".into()));
    }
    let min_n = match inst.orientation() {
        Orientation::Directed => 2,
        Orientation::Undirected => 3,
    };
    if verts.len() < min_n {
        return Err(Error::Domain(format!(
            "no {} cycle cover on {} vertices",
            inst.orientation(),
            verts.len()
        )));
    }
    match params.mode {
        CcMode::Exact => {
            let covers = CoverEnumeration::new(inst.orientation(), verts, params.exact_threshold)?;
            let mut filtered = covers.pareto(inst, params.sense)?;
            if params.thin {
                let mut table = PowerTable::new(Rat::one() + &params.eps)?;
                let mut seen = std::collections::BTreeSet::new();
                filtered.items.retain(|(_, w)| {
                    let sig = signature_with(&mut table, &w.to_rats());
                    seen.insert(sig)
                });
            }
            filtered.guaranteed = true;
            Ok(filtered)
        }
        CcMode::Scalarize => {
            let sub = restrict_instance(inst, verts)?;
            let k = inst.k();
            let mut out = ParetoSet::new(params.sense);
            out.guaranteed = false;
            let mut coeff_sets = Vec::new();
            compositions(params.scalarize_grid, k, &mut Vec::new(), &mut coeff_sets);
            for coeffs in coeff_sets {
                if coeffs.iter().all(|&c| c == 0) {
                    continue;
                }
                let rc: Vec<Rat> = coeffs.iter().map(|&c| rat_int(c as u128)).collect();
                let sw = ScalarWeights::from_scalarization(&sub, &rc)?;
                let (cover, _) = optimal_cycle_cover(&sub, &sw, params.sense)?;
                let lifted = EdgeSet::from_edges(
                    inst.orientation(),
                    cover.iter().map(|&(u, v)| (verts[u], verts[v])),
                );
                let w = weight_of(inst, &lifted)?;
                out.items.push((lifted, w));
            }
            let mut filtered = filter_dominated(&out);
            filtered.guaranteed = false;
            Ok(filtered)
        }
    }
}

pub fn cc_pareto_approx(inst: &Instance, params: &CcParams) -> Result<ParetoSet> {
    let verts: Vec<usize> = (0..inst.n()).collect();
    cc_pareto_on(inst, &verts, params)
}

fn compositions(total: u64, k: usize, cur: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
    if k == 1 {
        let mut c = cur.clone();
        c.push(total);
        out.push(c);
        return;
    }
    for x in 0..=total {
        cur.push(x);
        compositions(total - x, k - 1, cur, out);
        cur.pop();
    }
}

/// Builds the complete sub-instance induced by `verts` (indices renamed to
/// 0..m in the given order).
pub fn restrict_instance(inst: &Instance, verts: &[usize]) -> Result<Instance> {
    Instance::from_fn(inst.orientation(), verts.len(), inst.k(), inst.gamma().cloned(), |u, v| {
        inst.weight(verts[u], verts[v]).to_vec()
    })
}

/// The uncovered reference item, when verification fails.
#[derive(Debug, Clone)]
pub struct Counterexample {
    pub weight: WeightVector,
}

/// Checks that every item of `reference` is alpha-covered by some item of
/// `candidate` componentwise (exact rational comparison): for maximization
/// w(c) >= alpha*w(r), for minimization w(c) <= alpha*w(r).
pub fn verify_approx_pareto(
    candidate: &ParetoSet,
    reference: &ParetoSet,
    alpha: &Rat,
    sense: Sense,
) -> Result<std::result::Result<(), Counterexample>> {
    match sense {
        Sense::Max if alpha > &Rat::one() => {
            return Err(Error::Domain("alpha must be <= 1 for maximization".into()))
        }
        Sense::Min if alpha < &Rat::one() => {
            return Err(Error::Domain("alpha must be >= 1 for minimization".into()))
        }
        _ => {}
    }
    let p = alpha.numer();
    let q = alpha.denom();
    for (_, rw) in &reference.items {
        let covered = candidate.items.iter().any(|(_, cw)| {
            if cw.len() != rw.len() {
                return false;
            }
            cw.0.iter().zip(&rw.0).all(|(&c, &r)| {
                // c >= (p/q) r  <=>  q c >= p r (max); reversed for min.
                let lhs = num_bigint::BigInt::from(c) * q;
                let rhs = num_bigint::BigInt::from(r) * p;
                match sense {
                    Sense::Max => lhs >= rhs,
                    Sense::Min => lhs <= rhs,
                }
            })
        });
        if !covered {
            return Ok(Err(Counterexample { weight: rw.clone() }));
        }
    }
    Ok(Ok(()))
}
