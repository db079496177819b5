//! Mono-criterion building blocks: optimal cycle covers via assignment and
//! 2-factor reductions, maximum-weight matchings, and the single-objective
//! TSP base-case approximations invoked by the recursive algorithms.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::graph::{cycles_of, EdgeSet, Instance, Orientation};
use crate::matching;
use crate::pareto::Sense;
use crate::patch::greedy_complete;
use crate::rat::Rat;

/// Nonnegative scalar edge weights: one coordinate of the weight vectors,
/// or an integerized nonnegative rational scalarization of them.
#[derive(Debug, Clone)]
pub struct ScalarWeights {
    n: usize,
    vals: Vec<i128>,
}

impl ScalarWeights {
    pub fn from_coordinate(inst: &Instance, coord: usize) -> Result<Self> {
        if coord >= inst.k() {
            return Err(Error::Domain(format!("coordinate {coord} out of range")));
        }
        let n = inst.n();
        let mut vals = vec![0i128; n * n];
        for u in 0..n {
            for v in 0..n {
                if u != v {
                    vals[u * n + v] = inst.weight(u, v)[coord] as i128;
                }
            }
        }
        Ok(ScalarWeights { n, vals })
    }

    /// Linear scalarization with nonnegative rational coefficients (not all
    /// zero), cleared to integers via the common denominator.
    pub fn from_scalarization(inst: &Instance, coeffs: &[Rat]) -> Result<Self> {
        if coeffs.len() != inst.k() {
            return Err(Error::Dimension(coeffs.len(), inst.k()));
        }
        if coeffs.iter().any(|c| c.is_negative()) || coeffs.iter().all(|c| c.is_zero()) {
            return Err(Error::Domain(
                "scalarization coefficients must be nonnegative and not all zero".into(),
            ));
        }
        let mut denom = BigInt::from(1);
        for c in coeffs {
            denom = num_integer::lcm(denom, c.denom().clone());
        }
        let ints: Vec<BigInt> = coeffs.iter().map(|c| (c * Rat::from_integer(denom.clone())).to_integer()).collect();
        let n = inst.n();
        let mut vals = vec![0i128; n * n];
        for u in 0..n {
            for v in 0..n {
                if u == v {
                    continue;
                }
                let mut acc = BigInt::zero();
                for (i, &x) in inst.weight(u, v).iter().enumerate() {
                    acc += &ints[i] * BigInt::from(x);
                }
                vals[u * n + v] = i128::try_from(acc)
                    .map_err(|_| Error::Domain("scalarized weight exceeds 128 bits".into()))?;
            }
        }
        Ok(ScalarWeights { n, vals })
    }

    pub fn get(&self, u: usize, v: usize) -> i128 {
        self.vals[u * self.n + v]
    }

    pub fn sum_over(&self, set: &EdgeSet) -> i128 {
        set.iter().map(|&(u, v)| self.get(u, v)).sum()
    }

    fn max_abs(&self) -> i128 {
        self.vals.iter().map(|v| v.abs()).max().unwrap_or(0)
    }
}

/// O(n^3) assignment solver (shortest augmenting paths with potentials).
/// Returns, for each row, its assigned column, minimizing total cost.
fn assignment_min(n: usize, cost: impl Fn(usize, usize) -> i128) -> Vec<usize> {
    const INF: i128 = i128::MAX / 4;
    let mut u = vec![0i128; n + 1];
    let mut v = vec![0i128; n + 1];
    let mut p = vec![n; n + 1];
    let mut way = vec![n; n + 1];
    for row in 0..n {
        p[n] = row;
        let mut j0 = n;
        let mut minv = vec![INF; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = p[j0];
            let mut delta = INF;
            let mut j1 = n;
            for j in 0..n {
                if !used[j] {
                    let cur = cost(i0, j) - u[i0] - v[j];
                    if cur < minv[j] {
                        minv[j] = cur;
                        way[j] = j0;
                    }
                    if minv[j] < delta {
                        delta = minv[j];
                        j1 = j;
                    }
                }
            }
            for j in 0..=n {
                if used[j] {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if p[j0] == n {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
            if j0 == n {
                break;
            }
        }
    }
    let mut col_of = vec![usize::MAX; n];
    for j in 0..n {
        if p[j] < n {
            col_of[p[j]] = j;
        }
    }
    col_of
}

/// Optimal cycle cover with respect to scalar weights.
///
/// Directed instances reduce to the assignment problem on the bipartite
/// doubling; undirected instances reduce the 2-factor problem to
/// maximum-weight perfect matching via the standard vertex-splitting gadget.
pub fn optimal_cycle_cover(
    inst: &Instance,
    sw: &ScalarWeights,
    sense: Sense,
) -> Result<(EdgeSet, i128)> {
    let n = inst.n();
    match inst.orientation() {
        Orientation::Directed => {
            let big = (n as i128 + 1) * (sw.max_abs() + 1);
            let cost = |u: usize, v: usize| -> i128 {
                if u == v {
                    big
                } else {
                    match sense {
                        Sense::Max => -sw.get(u, v),
                        Sense::Min => sw.get(u, v),
                    }
                }
            };
            let succ = assignment_min(n, cost);
            let mut set = EdgeSet::new(Orientation::Directed);
            for (u, &v) in succ.iter().enumerate() {
                if u == v {
                    return Err(Error::Structure("assignment used a forbidden self-loop".into()));
                }
                set.insert(u, v);
            }
            let val = sw.sum_over(&set);
            Ok((set, val))
        }
        Orientation::Undirected => {
            if n < 3 {
                return Err(Error::Domain("no undirected cycle cover exists for n < 3".into()));
            }
            // Gadget: vertex copies 2u, 2u+1; per pair {u,v} internal nodes
            // d_u, d_v joined by a zero edge, with stub edges carrying w.
            // Perfect matchings of the gadget are exactly the 2-factors.
            let mut edges: Vec<(usize, usize, i128)> = Vec::new();
            let mut pair_nodes = std::collections::BTreeMap::new();
            let mut next = 2 * n;
            for u in 0..n {
                for v in u + 1..n {
                    let du = next;
                    let dv = next + 1;
                    next += 2;
                    pair_nodes.insert((u, v), (du, dv));
                    let w = match sense {
                        Sense::Max => sw.get(u, v),
                        Sense::Min => -sw.get(u, v),
                    };
                    edges.push((du, dv, 0));
                    edges.push((2 * u, du, w));
                    edges.push((2 * u + 1, du, w));
                    edges.push((2 * v, dv, w));
                    edges.push((2 * v + 1, dv, w));
                }
            }
            let mate = matching::max_weight_matching(next, &edges, true)?;
            let mut set = EdgeSet::new(Orientation::Undirected);
            for (&(u, v), &(du, dv)) in &pair_nodes {
                if mate[du] != Some(dv) {
                    set.insert(u, v);
                }
            }
            for u in 0..2 * n {
                if mate[u].is_none() {
                    return Err(Error::Structure("gadget matching is not perfect".into()));
                }
            }
            cycles_of(&set, n).map_err(|_| Error::Structure("gadget did not yield a 2-factor".into()))?;
            let val = sw.sum_over(&set);
            Ok((set, val))
        }
    }
}

/// Maximum-weight matching (not necessarily perfect) on an undirected
/// instance; returns the matching as an edge set.
pub fn max_weight_matching(inst: &Instance, sw: &ScalarWeights) -> Result<EdgeSet> {
    if inst.orientation() != Orientation::Undirected {
        return Err(Error::Domain("matchings are computed on undirected instances".into()));
    }
    let n = inst.n();
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            edges.push((u, v, sw.get(u, v)));
        }
    }
    let mate = matching::max_weight_matching(n, &edges, false)?;
    let mut set = EdgeSet::new(Orientation::Undirected);
    for (v, m) in mate.iter().enumerate() {
        if let Some(u) = m {
            if v < *u {
                set.insert(v, *u);
            }
        }
    }
    Ok(set)
}

/// Exact maximum-weight Hamiltonian cycle by Held-Karp dynamic programming.
/// Used as the small-n exact path; independent of the enumeration oracles.
pub fn held_karp_max_tour(n: usize, score: impl Fn(usize, usize) -> i128) -> Result<(Vec<usize>, i128)> {
    if !(2..=20).contains(&n) {
        return Err(Error::Budget(format!("held-karp supports 2 <= n <= 20, got {n}")));
    }
    const NEG: i128 = i128::MIN / 4;
    let full = 1usize << (n - 1); // subsets of vertices 1..n-1
    let mut dp = vec![NEG; full * (n - 1)];
    let mut par = vec![usize::MAX; full * (n - 1)];
    for last in 0..n - 1 {
        dp[(1 << last) * (n - 1) + last] = score(0, last + 1);
    }
    for mask in 1..full {
        for last in 0..n - 1 {
            if mask & (1 << last) == 0 || dp[mask * (n - 1) + last] == NEG {
                continue;
            }
            let base = dp[mask * (n - 1) + last];
            for nxt in 0..n - 1 {
                if mask & (1 << nxt) != 0 {
                    continue;
                }
                let nm = mask | (1 << nxt);
                let cand = base + score(last + 1, nxt + 1);
                if cand > dp[nm * (n - 1) + nxt] {
                    dp[nm * (n - 1) + nxt] = cand;
                    par[nm * (n - 1) + nxt] = last;
                }
            }
        }
    }
    let fullmask = full - 1;
    let mut best = NEG;
    let mut best_last = 0;
    for last in 0..n - 1 {
        let cand = dp[fullmask * (n - 1) + last] + score(last + 1, 0);
        if cand > best {
            best = cand;
            best_last = last;
        }
    }
    let mut order = Vec::with_capacity(n);
    let mut mask = fullmask;
    let mut last = best_last;
    while last != usize::MAX {
        order.push(last + 1);
        let p = par[mask * (n - 1) + last];
        mask &= !(1 << last);
        last = p;
    }
    order.push(0);
    order.reverse();
    Ok((order, best))
}

/// Single-objective Max-TSP: exact for n up to `exact_threshold` (default 9),
/// otherwise the cycle-cover construction (compute a maximum-weight cycle
/// cover, remove the lightest edge of each cycle, reconnect greedily). The
/// construction guarantees 1/2 of optimum on directed instances and 2/3 on
/// undirected ones, because cycles have length >= 2 resp. >= 3.
pub fn mono_tsp_approx(
    inst: &Instance,
    sw: &ScalarWeights,
    exact_threshold: usize,
) -> Result<(EdgeSet, i128)> {
    let n = inst.n();
    match inst.orientation() {
        Orientation::Directed if n < 2 => {
            return Err(Error::Domain("directed tours need n >= 2".into()))
        }
        Orientation::Undirected if n < 3 => {
            return Err(Error::Domain("undirected tours need n >= 3".into()))
        }
        _ => {}
    }
    if n <= exact_threshold {
        let (order, val) = held_karp_max_tour(n, |u, v| sw.get(u, v))?;
        let mut set = EdgeSet::new(inst.orientation());
        for i in 0..n {
            set.insert(order[i], order[(i + 1) % n]);
        }
        // Undirected tours count both traversal directions; the weight is
        // direction-independent, so recompute from the canonical edge set.
        let val = if inst.orientation() == Orientation::Undirected {
            sw.sum_over(&set)
        } else {
            val
        };
        return Ok((set, val));
    }
    let (cover, _) = optimal_cycle_cover(inst, sw, Sense::Max)?;
    let cycles = cycles_of(&cover, n)?;
    let mut paths = cover.clone();
    for cyc in &cycles {
        let mut lightest: Option<((i128, usize, usize), (usize, usize))> = None;
        for i in 0..cyc.len() {
            let (u, v) = (cyc[i], cyc[(i + 1) % cyc.len()]);
            let key = match inst.orientation() {
                Orientation::Directed => (sw.get(u, v), u, v),
                Orientation::Undirected => (sw.get(u, v), u.min(v), u.max(v)),
            };
            if lightest.is_none() || key < lightest.as_ref().unwrap().0 {
                lightest = Some((key, (u, v)));
            }
        }
        let (_, (u, v)) = lightest.unwrap();
        paths.remove(u, v);
    }
    let tour = greedy_complete(&paths, n, inst.orientation(), |u, v| sw.get(u, v))?;
    let val = sw.sum_over(&tour);
    Ok((tour, val))
}
