//! Complete weighted graph instances and the structural edge-set objects
//! (cycle covers, path collections, tours) shared by every algorithm.
//!
//! Instances are immutable after construction and all operations here are
//! pure functions, so everything can be shared freely across threads.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::rat::Rat;

/// Edge weights are nonnegative integers bounded so that sums over any
/// edge set fit comfortably in the 128-bit accumulators.
pub const MAX_WEIGHT: u64 = 1 << 60;

pub type Edge = (usize, usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Orientation {
    Directed,
    Undirected,
}

impl fmt::Display for Orientation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Orientation::Directed => write!(f, "directed"),
            Orientation::Undirected => write!(f, "undirected"),
        }
    }
}

/// A k-tuple of accumulated edge weights. Entries are kept in 128 bits:
/// single edges are bounded by [`MAX_WEIGHT`], so sums never overflow.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WeightVector(pub Vec<u128>);

impl WeightVector {
    pub fn zero(k: usize) -> Self {
        WeightVector(vec![0; k])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn add_assign(&mut self, other: &WeightVector) -> Result<()> {
        if self.len() != other.len() {
            return Err(Error::Dimension(self.len(), other.len()));
        }
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            *a += b;
        }
        Ok(())
    }

    pub fn to_rats(&self) -> Vec<Rat> {
        self.0.iter().map(|&v| Rat::from_integer(BigInt::from(v))).collect()
    }
}

/// A complete graph with k-dimensional nonnegative integer edge weights.
///
/// Directed instances store both orientations of every pair independently;
/// undirected instances are stored symmetrically and validated as such.
#[derive(Debug, Clone)]
pub struct Instance {
    orientation: Orientation,
    n: usize,
    k: usize,
    gamma: Option<Rat>,
    /// Flat n*n*k weights, diagonal entries all zero.
    w: Vec<u64>,
}

impl Instance {
    pub fn from_fn(
        orientation: Orientation,
        n: usize,
        k: usize,
        gamma: Option<Rat>,
        mut f: impl FnMut(usize, usize) -> Vec<u64>,
    ) -> Result<Self> {
        if n < 2 {
            return Err(Error::Domain(format!("vertex count {n} < 2")));
        }
        if k < 1 {
            return Err(Error::Domain("criteria count must be >= 1".into()));
        }
        if let Some(g) = &gamma {
            if *g < crate::rat::rat(1, 2) || *g > crate::rat::rat(1, 1) {
                return Err(Error::Domain("gamma must lie in [1/2, 1]".into()));
            }
        }
        let mut w = vec![0u64; n * n * k];
        for u in 0..n {
            for v in 0..n {
                if u == v {
                    continue;
                }
                if orientation == Orientation::Undirected && u > v {
                    continue;
                }
                let wv = f(u, v);
                if wv.len() != k {
                    return Err(Error::Dimension(wv.len(), k));
                }
                for (i, &x) in wv.iter().enumerate() {
                    if x > MAX_WEIGHT {
                        return Err(Error::Domain(format!(
                            "weight {x} on ({u},{v}) exceeds 2^60"
                        )));
                    }
                    w[(u * n + v) * k + i] = x;
                    if orientation == Orientation::Undirected {
                        w[(v * n + u) * k + i] = x;
                    }
                }
            }
        }
        Ok(Instance { orientation, n, k, gamma, w })
    }

    pub fn orientation(&self) -> Orientation {
        self.orientation
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn gamma(&self) -> Option<&Rat> {
        self.gamma.as_ref()
    }

    pub fn with_gamma(mut self, gamma: Option<Rat>) -> Self {
        self.gamma = gamma;
        self
    }

    /// Weight vector of edge (u, v) as a k-slice. Panics on out-of-range
    /// indices; use [`weight_of`] for checked accumulation.
    pub fn weight(&self, u: usize, v: usize) -> &[u64] {
        &self.w[(u * self.n + v) * self.k..(u * self.n + v) * self.k + self.k]
    }

    pub fn weight_vec(&self, u: usize, v: usize) -> WeightVector {
        WeightVector(self.weight(u, v).iter().map(|&x| x as u128).collect())
    }

    /// All edges: ordered pairs for directed, u < v for undirected.
    pub fn edge_pairs(&self) -> Vec<Edge> {
        let mut out = Vec::new();
        for u in 0..self.n {
            for v in 0..self.n {
                if u == v {
                    continue;
                }
                if self.orientation == Orientation::Undirected && u > v {
                    continue;
                }
                out.push((u, v));
            }
        }
        out
    }

    /// Derives a new instance with the same shape but rewritten weights.
    pub fn map_weights(&self, mut f: impl FnMut(usize, usize, &[u64]) -> Vec<u64>) -> Result<Self> {
        Instance::from_fn(self.orientation, self.n, self.k, self.gamma.clone(), |u, v| {
            f(u, v, self.weight(u, v))
        })
    }

    /// Drops weight coordinate `i`, keeping the remaining ones in order.
    pub fn drop_coordinate(&self, i: usize) -> Result<Self> {
        if self.k < 2 || i >= self.k {
            return Err(Error::Domain(format!("cannot drop coordinate {i} of {}", self.k)));
        }
        Instance::from_fn(self.orientation, self.n, self.k - 1, self.gamma.clone(), |u, v| {
            let w = self.weight(u, v);
            w.iter()
                .enumerate()
                .filter(|(j, _)| *j != i)
                .map(|(_, &x)| x)
                .collect()
        })
    }
}

/// Role an edge set claims to play; checked by [`validate`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Role {
    CycleCover,
    PathCollection,
    Tour,
}

/// A set of edges over an instance's vertices. Undirected edges are stored
/// canonically as (min, max); directed edges keep their orientation.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgeSet {
    orientation: Orientation,
    edges: BTreeSet<Edge>,
}

impl EdgeSet {
    pub fn new(orientation: Orientation) -> Self {
        EdgeSet { orientation, edges: BTreeSet::new() }
    }

    pub fn from_edges(orientation: Orientation, edges: impl IntoIterator<Item = Edge>) -> Self {
        let mut s = EdgeSet::new(orientation);
        for (u, v) in edges {
            s.insert(u, v);
        }
        s
    }

    pub fn orientation(&self) -> Orientation {
        self.orientation
    }

    fn canon(&self, u: usize, v: usize) -> Edge {
        match self.orientation {
            Orientation::Directed => (u, v),
            Orientation::Undirected => (u.min(v), u.max(v)),
        }
    }

    pub fn insert(&mut self, u: usize, v: usize) -> bool {
        let e = self.canon(u, v);
        self.edges.insert(e)
    }

    pub fn remove(&mut self, u: usize, v: usize) -> bool {
        let e = self.canon(u, v);
        self.edges.remove(&e)
    }

    pub fn contains(&self, u: usize, v: usize) -> bool {
        self.edges.contains(&self.canon(u, v))
    }

    pub fn iter(&self) -> impl Iterator<Item = &Edge> {
        self.edges.iter()
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn union(&self, other: &EdgeSet) -> EdgeSet {
        let mut s = self.clone();
        for &(u, v) in other.iter() {
            s.insert(u, v);
        }
        s
    }

    pub fn vertices(&self) -> BTreeSet<usize> {
        let mut vs = BTreeSet::new();
        for &(u, v) in &self.edges {
            vs.insert(u);
            vs.insert(v);
        }
        vs
    }
}

/// First violated invariant plus a witness, as a value (not an error).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub rule: &'static str,
    pub vertex: Option<usize>,
    pub edge: Option<Edge>,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.rule)?;
        if let Some(v) = self.vertex {
            write!(f, " (vertex {v})")?;
        }
        if let Some(e) = self.edge {
            write!(f, " (edge {e:?})")?;
        }
        Ok(())
    }
}

fn violation(rule: &'static str, vertex: Option<usize>, edge: Option<Edge>) -> Violation {
    Violation { rule, vertex, edge }
}

/// Componentwise sum of edge weights; the empty set maps to the zero vector.
pub fn weight_of(inst: &Instance, set: &EdgeSet) -> Result<WeightVector> {
    let mut acc = WeightVector::zero(inst.k());
    for &(u, v) in set.iter() {
        if u >= inst.n() || v >= inst.n() || u == v {
            return Err(Error::InvalidEdge(u, v));
        }
        for (a, &x) in acc.0.iter_mut().zip(inst.weight(u, v)) {
            *a += x as u128;
        }
    }
    Ok(acc)
}

/// Checks the structural invariants of `role`; reports the first violation.
pub fn validate(set: &EdgeSet, role: Role, inst: &Instance) -> std::result::Result<(), Violation> {
    let n = inst.n();
    if set.orientation() != inst.orientation() {
        return Err(violation("orientation mismatch", None, None));
    }
    for &(u, v) in set.iter() {
        if u >= n || v >= n {
            return Err(violation("edge endpoint out of range", None, Some((u, v))));
        }
        if u == v {
            return Err(violation("self-loop", None, Some((u, v))));
        }
    }
    match inst.orientation() {
        Orientation::Directed => validate_directed(set, role, n),
        Orientation::Undirected => validate_undirected(set, role, n),
    }
}

fn validate_directed(set: &EdgeSet, role: Role, n: usize) -> std::result::Result<(), Violation> {
    let mut indeg = vec![0usize; n];
    let mut outdeg = vec![0usize; n];
    let mut succ = vec![usize::MAX; n];
    for &(u, v) in set.iter() {
        outdeg[u] += 1;
        indeg[v] += 1;
        succ[u] = v;
    }
    match role {
        Role::CycleCover | Role::Tour => {
            for v in 0..n {
                if outdeg[v] != 1 {
                    return Err(violation("vertex out-degree != 1", Some(v), None));
                }
                if indeg[v] != 1 {
                    return Err(violation("vertex in-degree != 1", Some(v), None));
                }
            }
            if role == Role::Tour {
                // A tour is a cycle cover with a single spanning cycle.
                let mut seen = 1usize;
                let mut v = succ[0];
                while v != 0 {
                    seen += 1;
                    v = succ[v];
                }
                if seen != n {
                    return Err(violation("tour does not span all vertices in one cycle", Some(succ[0]), None));
                }
            }
            Ok(())
        }
        Role::PathCollection => {
            for v in 0..n {
                if outdeg[v] > 1 {
                    return Err(violation("vertex out-degree > 1", Some(v), None));
                }
                if indeg[v] > 1 {
                    return Err(violation("vertex in-degree > 1", Some(v), None));
                }
            }
            // No directed cycle: follow successors from every start.
            let mut state = vec![0u8; n]; // 0 unseen, 1 done
            for s in 0..n {
                if state[s] == 1 {
                    continue;
                }
                let mut path = Vec::new();
                let mut v = s;
                loop {
                    path.push(v);
                    if path.len() > n {
                        return Err(violation("path collection contains a cycle", Some(v), None));
                    }
                    if succ[v] == usize::MAX || state[succ[v]] == 1 {
                        break;
                    }
                    if succ[v] == s {
                        return Err(violation("path collection contains a cycle", Some(s), None));
                    }
                    v = succ[v];
                    if path.contains(&v) {
                        return Err(violation("path collection contains a cycle", Some(v), None));
                    }
                }
                for p in path {
                    state[p] = 1;
                }
            }
            Ok(())
        }
    }
}

fn validate_undirected(set: &EdgeSet, role: Role, n: usize) -> std::result::Result<(), Violation> {
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    for &(u, v) in set.iter() {
        adj[u].push(v);
        adj[v].push(u);
    }
    match role {
        Role::CycleCover | Role::Tour => {
            if n < 3 {
                return Err(violation("undirected cycles need at least 3 vertices", Some(0), None));
            }
            for v in 0..n {
                if adj[v].len() != 2 {
                    return Err(violation("vertex degree != 2", Some(v), None));
                }
            }
            // Degree-2 everywhere on a simple graph forces cycles of length
            // >= 3; for a tour also check the single cycle spans everything.
            if role == Role::Tour {
                let mut seen = vec![false; n];
                let mut prev = 0usize;
                let mut v = adj[0][0];
                seen[0] = true;
                let mut count = 1usize;
                while v != 0 {
                    seen[v] = true;
                    count += 1;
                    let next = if adj[v][0] == prev { adj[v][1] } else { adj[v][0] };
                    prev = v;
                    v = next;
                }
                if count != n {
                    return Err(violation("tour does not span all vertices in one cycle", Some(prev), None));
                }
            }
            Ok(())
        }
        Role::PathCollection => {
            for v in 0..n {
                if adj[v].len() > 2 {
                    return Err(violation("vertex degree > 2", Some(v), None));
                }
            }
            // Acyclicity: each connected component must contain a vertex of
            // degree < 2.
            let mut seen = vec![false; n];
            for s in 0..n {
                if seen[s] || adj[s].is_empty() {
                    continue;
                }
                let mut stack = vec![s];
                let mut comp = Vec::new();
                seen[s] = true;
                while let Some(v) = stack.pop() {
                    comp.push(v);
                    for &w in &adj[v] {
                        if !seen[w] {
                            seen[w] = true;
                            stack.push(w);
                        }
                    }
                }
                let edges: usize = comp.iter().map(|&v| adj[v].len()).sum::<usize>() / 2;
                if edges >= comp.len() {
                    return Err(violation("path collection contains a cycle", Some(s), None));
                }
            }
            Ok(())
        }
    }
}

/// Witness for a failed gamma-triangle check: w(u,v) > gamma*(w(u,x)+w(x,v))
/// in coordinate `coord`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GammaWitness {
    pub u: usize,
    pub x: usize,
    pub v: usize,
    pub coord: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GammaCheck {
    Ok,
    Violated(GammaWitness),
}

/// Verifies the gamma-triangle inequality componentwise over all ordered
/// triples of distinct vertices; exact rational comparison.
pub fn gamma_check(inst: &Instance, gamma: &Rat) -> Result<GammaCheck> {
    if *gamma < crate::rat::rat(1, 2) || *gamma > crate::rat::rat(1, 1) {
        return Err(Error::Domain("gamma must lie in [1/2, 1]".into()));
    }
    let p = gamma.numer();
    let q = gamma.denom();
    let n = inst.n();
    for u in 0..n {
        for v in 0..n {
            if v == u {
                continue;
            }
            let wuv = inst.weight(u, v);
            for x in 0..n {
                if x == u || x == v {
                    continue;
                }
                let wux = inst.weight(u, x);
                let wxv = inst.weight(x, v);
                for i in 0..inst.k() {
                    // q*w(u,v) <= p*(w(u,x)+w(x,v))
                    let lhs = BigInt::from(wuv[i]) * q;
                    let rhs = (BigInt::from(wux[i]) + BigInt::from(wxv[i])) * p;
                    if lhs > rhs {
                        return Ok(GammaCheck::Violated(GammaWitness { u, x, v, coord: i }));
                    }
                }
            }
        }
    }
    Ok(GammaCheck::Ok)
}

/// Decomposes a cycle cover (or tour) into its cycles as vertex sequences.
/// Each cycle starts at its smallest vertex; directed cycles follow edge
/// direction, undirected ones start toward the smaller neighbor.
pub fn cycles_of(set: &EdgeSet, n: usize) -> Result<Vec<Vec<usize>>> {
    match set.orientation() {
        Orientation::Directed => {
            let mut succ = vec![usize::MAX; n];
            for &(u, v) in set.iter() {
                if u >= n || v >= n {
                    return Err(Error::InvalidEdge(u, v));
                }
                if succ[u] != usize::MAX {
                    return Err(Error::Structure(format!("vertex {u} has out-degree > 1")));
                }
                succ[u] = v;
            }
            let mut seen = vec![false; n];
            let mut cycles = Vec::new();
            for s in 0..n {
                if seen[s] || succ[s] == usize::MAX {
                    continue;
                }
                let mut cyc = vec![s];
                seen[s] = true;
                let mut v = succ[s];
                while v != s {
                    if v == usize::MAX || v >= n || seen[v] {
                        return Err(Error::Structure("edge set is not a union of directed cycles".into()));
                    }
                    seen[v] = true;
                    cyc.push(v);
                    v = succ[v];
                }
                cycles.push(cyc);
            }
            Ok(cycles)
        }
        Orientation::Undirected => {
            let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
            for &(u, v) in set.iter() {
                if u >= n || v >= n {
                    return Err(Error::InvalidEdge(u, v));
                }
                adj[u].push(v);
                adj[v].push(u);
            }
            let mut seen = vec![false; n];
            let mut cycles = Vec::new();
            for s in 0..n {
                if seen[s] || adj[s].is_empty() {
                    continue;
                }
                if adj[s].len() != 2 {
                    return Err(Error::Structure(format!("vertex {s} has degree != 2")));
                }
                let mut cyc = vec![s];
                seen[s] = true;
                let mut prev = s;
                let mut v = adj[s][0].min(adj[s][1]);
                while v != s {
                    if seen[v] || adj[v].len() != 2 {
                        return Err(Error::Structure("edge set is not a union of cycles".into()));
                    }
                    seen[v] = true;
                    cyc.push(v);
                    let next = if adj[v][0] == prev { adj[v][1] } else { adj[v][0] };
                    prev = v;
                    v = next;
                }
                if cyc.len() < 3 {
                    return Err(Error::Structure("undirected cycle shorter than 3".into()));
                }
                cycles.push(cyc);
            }
            Ok(cycles)
        }
    }
}

/// Components of a path collection as vertex sequences (isolated vertices
/// excluded). Directed paths run tail to head.
pub fn paths_of(set: &EdgeSet, n: usize) -> Result<Vec<Vec<usize>>> {
    match set.orientation() {
        Orientation::Directed => {
            let mut succ = vec![usize::MAX; n];
            let mut has_pred = vec![false; n];
            for &(u, v) in set.iter() {
                if succ[u] != usize::MAX {
                    return Err(Error::Structure(format!("vertex {u} has out-degree > 1")));
                }
                succ[u] = v;
                if has_pred[v] {
                    return Err(Error::Structure(format!("vertex {v} has in-degree > 1")));
                }
                has_pred[v] = true;
            }
            let mut paths = Vec::new();
            for s in 0..n {
                if has_pred[s] || succ[s] == usize::MAX {
                    continue;
                }
                let mut path = vec![s];
                let mut v = succ[s];
                loop {
                    path.push(v);
                    if succ[v] == usize::MAX {
                        break;
                    }
                    v = succ[v];
                    if path.len() > n {
                        return Err(Error::Structure("cycle in path collection".into()));
                    }
                }
                paths.push(path);
            }
            Ok(paths)
        }
        Orientation::Undirected => {
            let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
            for &(u, v) in set.iter() {
                adj[u].push(v);
                adj[v].push(u);
            }
            let mut seen = vec![false; n];
            let mut paths = Vec::new();
            for s in 0..n {
                if seen[s] || adj[s].len() != 1 {
                    continue;
                }
                let mut path = vec![s];
                seen[s] = true;
                let mut prev = s;
                let mut v = adj[s][0];
                loop {
                    seen[v] = true;
                    path.push(v);
                    let next: Vec<usize> = adj[v].iter().copied().filter(|&w| w != prev).collect();
                    if next.is_empty() {
                        break;
                    }
                    if next.len() > 1 {
                        return Err(Error::Structure("vertex degree > 2 in path collection".into()));
                    }
                    prev = v;
                    v = next[0];
                }
                paths.push(path);
            }
            // Any vertex with edges left unseen sits on a cycle.
            for v in 0..n {
                if !adj[v].is_empty() && !seen[v] {
                    return Err(Error::Structure("cycle in path collection".into()));
                }
            }
            Ok(paths)
        }
    }
}

/// Restricts a directed tour to a vertex subset, visiting the kept vertices
/// in tour order. A singleton subset yields the empty edge set (a trivial
/// tour the caller must handle).
pub fn shortcut_tour(tour: &EdgeSet, keep: &BTreeSet<usize>, inst: &Instance) -> Result<EdgeSet> {
    if inst.orientation() != Orientation::Directed {
        return Err(Error::Domain("shortcut_tour requires a directed instance".into()));
    }
    if keep.is_empty() {
        return Err(Error::Domain("shortcut_tour requires a nonempty subset".into()));
    }
    validate(tour, Role::Tour, inst).map_err(|v| Error::Structure(v.to_string()))?;
    for &v in keep {
        if v >= inst.n() {
            return Err(Error::InvalidEdge(v, v));
        }
    }
    let order = &cycles_of(tour, inst.n())?[0];
    let kept: Vec<usize> = order.iter().copied().filter(|v| keep.contains(v)).collect();
    if kept.len() != keep.len() {
        return Err(Error::Domain("subset contains vertices not on the tour".into()));
    }
    let mut out = EdgeSet::new(Orientation::Directed);
    if kept.len() == 1 {
        return Ok(out);
    }
    for i in 0..kept.len() {
        out.insert(kept[i], kept[(i + 1) % kept.len()]);
    }
    Ok(out)
}

/// Helper used by generators and tests: weight map from explicit entries.
pub fn instance_from_matrix(
    orientation: Orientation,
    k: usize,
    gamma: Option<Rat>,
    m: &[Vec<Vec<u64>>],
) -> Result<Instance> {
    let n = m.len();
    let mut pairs = BTreeMap::new();
    for (u, row) in m.iter().enumerate() {
        if row.len() != n {
            return Err(Error::Dimension(row.len(), n));
        }
        for (v, wv) in row.iter().enumerate() {
            if u != v {
                pairs.insert((u, v), wv.clone());
            }
        }
    }
    if orientation == Orientation::Undirected {
        for u in 0..n {
            for v in u + 1..n {
                if pairs[&(u, v)] != pairs[&(v, u)] {
                    return Err(Error::Structure(format!("asymmetric weights on ({u},{v})")));
                }
            }
        }
    }
    Instance::from_fn(orientation, n, k, gamma, |u, v| pairs[&(u, v)].clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rat;

    fn uniform(orientation: Orientation, n: usize, k: usize, w: u64) -> Instance {
        Instance::from_fn(orientation, n, k, None, |_, _| vec![w; k]).unwrap()
    }

    #[test]
    fn weight_of_empty_and_single() {
        let inst = Instance::from_fn(Orientation::Undirected, 3, 2, None, |u, v| {
            if (u, v) == (0, 1) {
                vec![3, 5]
            } else {
                vec![0, 0]
            }
        })
        .unwrap();
        let empty = EdgeSet::new(Orientation::Undirected);
        assert_eq!(weight_of(&inst, &empty).unwrap(), WeightVector(vec![0, 0]));
        let single = EdgeSet::from_edges(Orientation::Undirected, [(0, 1)]);
        assert_eq!(weight_of(&inst, &single).unwrap(), WeightVector(vec![3, 5]));
    }

    #[test]
    fn weight_of_rejects_bad_edges() {
        let inst = uniform(Orientation::Directed, 3, 1, 1);
        let set = EdgeSet::from_edges(Orientation::Directed, [(0, 7)]);
        assert!(matches!(weight_of(&inst, &set), Err(Error::InvalidEdge(0, 7))));
    }

    #[test]
    fn validate_directed_two_cycle_cover() {
        let inst = uniform(Orientation::Directed, 2, 1, 1);
        let set = EdgeSet::from_edges(Orientation::Directed, [(0, 1), (1, 0)]);
        assert!(validate(&set, Role::CycleCover, &inst).is_ok());
        assert!(validate(&set, Role::Tour, &inst).is_ok());
    }

    #[test]
    fn validate_undirected_triangle_cover() {
        let inst = uniform(Orientation::Undirected, 3, 1, 1);
        let set = EdgeSet::from_edges(Orientation::Undirected, [(0, 1), (1, 2), (2, 0)]);
        assert!(validate(&set, Role::CycleCover, &inst).is_ok());
    }

    #[test]
    fn validate_rejects_undirected_two_cycle() {
        let inst = uniform(Orientation::Undirected, 2, 1, 1);
        // (0,1) and (1,0) collapse to one undirected edge; no cycle of
        // length >= 3 exists on two vertices.
        let set = EdgeSet::from_edges(Orientation::Undirected, [(0, 1), (1, 0)]);
        assert_eq!(set.len(), 1);
        assert!(validate(&set, Role::CycleCover, &inst).is_err());
    }

    #[test]
    fn validate_path_collections() {
        let inst = uniform(Orientation::Directed, 4, 1, 1);
        let paths = EdgeSet::from_edges(Orientation::Directed, [(0, 1), (2, 3)]);
        assert!(validate(&paths, Role::PathCollection, &inst).is_ok());
        let cyc = EdgeSet::from_edges(Orientation::Directed, [(0, 1), (1, 0)]);
        assert!(validate(&cyc, Role::PathCollection, &inst).is_err());
        let und = uniform(Orientation::Undirected, 4, 1, 1);
        let tri = EdgeSet::from_edges(Orientation::Undirected, [(0, 1), (1, 2), (2, 0)]);
        assert!(validate(&tri, Role::PathCollection, &und).is_err());
    }

    #[test]
    fn cycle_cover_of_length_n_is_a_tour() {
        let inst = uniform(Orientation::Directed, 4, 1, 1);
        let one_cycle = EdgeSet::from_edges(Orientation::Directed, [(0, 1), (1, 2), (2, 3), (3, 0)]);
        assert!(validate(&one_cycle, Role::CycleCover, &inst).is_ok());
        assert!(validate(&one_cycle, Role::Tour, &inst).is_ok());
        let two_cycles = EdgeSet::from_edges(Orientation::Directed, [(0, 1), (1, 0), (2, 3), (3, 2)]);
        assert!(validate(&two_cycles, Role::CycleCover, &inst).is_ok());
        assert!(validate(&two_cycles, Role::Tour, &inst).is_err());
    }

    #[test]
    fn gamma_check_equality_case() {
        // All edges weight 1 and gamma = 1/2: 1 <= (1/2)*2 holds with equality.
        let inst = uniform(Orientation::Directed, 4, 1, 1);
        assert_eq!(gamma_check(&inst, &rat(1, 2)).unwrap(), GammaCheck::Ok);
    }

    #[test]
    fn gamma_check_witness() {
        let inst = Instance::from_fn(Orientation::Directed, 3, 1, None, |u, v| {
            if (u, v) == (0, 1) {
                vec![10]
            } else {
                vec![1]
            }
        })
        .unwrap();
        match gamma_check(&inst, &rat(1, 1)).unwrap() {
            GammaCheck::Violated(w) => {
                assert_eq!((w.u, w.v, w.coord), (0, 1, 0));
                assert_eq!(w.x, 2);
            }
            GammaCheck::Ok => panic!("expected witness"),
        }
        assert!(gamma_check(&inst, &rat(2, 1)).is_err());
    }

    #[test]
    fn shortcut_identity_and_pair() {
        let inst = Instance::from_fn(Orientation::Directed, 3, 1, Some(rat(1, 1)), |_, _| vec![5]).unwrap();
        let tour = EdgeSet::from_edges(Orientation::Directed, [(0, 1), (1, 2), (2, 0)]);
        let all: BTreeSet<usize> = [0, 1, 2].into();
        assert_eq!(shortcut_tour(&tour, &all, &inst).unwrap(), tour);
        let pair: BTreeSet<usize> = [0, 2].into();
        let cut = shortcut_tour(&tour, &pair, &inst).unwrap();
        assert_eq!(cut, EdgeSet::from_edges(Orientation::Directed, [(0, 2), (2, 0)]));
        // Metric all-5 instance: 10 <= 15, never heavier than the original.
        let w = weight_of(&inst, &cut).unwrap();
        assert!(w.0[0] <= weight_of(&inst, &tour).unwrap().0[0]);
        let single: BTreeSet<usize> = [1].into();
        assert!(shortcut_tour(&tour, &single, &inst).unwrap().is_empty());
    }

    #[test]
    fn shortcut_alternating_subset_on_metric_instances() {
        // Restricting a metric 5-tour to alternating vertices never gains
        // weight, over 100 seeded instances.
        for seed in 0..100u64 {
            let inst = crate::gen::metric_instance(Orientation::Directed, 5, 2, seed).unwrap();
            let tour = EdgeSet::from_edges(Orientation::Directed, (0..5).map(|i| (i, (i + 1) % 5)));
            let keep: BTreeSet<usize> = [0, 2, 4].into();
            let cut = shortcut_tour(&tour, &keep, &inst).unwrap();
            assert_eq!(cut.len(), 3);
            let (cw, tw) = (weight_of(&inst, &cut).unwrap(), weight_of(&inst, &tour).unwrap());
            for i in 0..2 {
                assert!(cw.0[i] <= tw.0[i], "seed {seed}");
            }
        }
    }

    #[test]
    fn cycles_and_paths_extraction() {
        let set = EdgeSet::from_edges(Orientation::Directed, [(0, 1), (1, 0), (2, 3), (3, 4), (4, 2)]);
        let cycles = cycles_of(&set, 5).unwrap();
        assert_eq!(cycles, vec![vec![0, 1], vec![2, 3, 4]]);
        let paths = EdgeSet::from_edges(Orientation::Directed, [(0, 1), (1, 2), (4, 3)]);
        assert_eq!(paths_of(&paths, 5).unwrap(), vec![vec![0, 1, 2], vec![4, 3]]);
    }
}
