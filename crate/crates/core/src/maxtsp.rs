//! Recursive approximate-Pareto-curve algorithms for maximization TSP:
//! the (1/2 - eps) directed algorithm (beta-truncation, edge contraction,
//! decomposition) and the (2/3 - eps) undirected algorithm (L-zeroing
//! instead of contraction, zero-weight-edge stripping).
//!
//! The formal iteration bounds f/g/h make verbatim enumeration infeasible
//! at any interesting size, so subset and bound grids are budgeted;
//! whenever a budget clips the formal bound the output carries truncation
//! flags and the guarantee becomes empirical rather than formal.

use std::collections::BTreeSet;

use num_traits::Signed;

use crate::decompose::{decompose_randomized, eta, is_light, WeightedCycleCover};
use crate::error::{Error, Result};
use crate::graph::{paths_of, validate, weight_of, EdgeSet, Instance, Orientation, Role};
use crate::pareto::{cc_pareto_approx, filter_dominated, CcMode, CcParams, CoverEnumeration, ParetoSet, Sense};
use crate::patch::greedy_complete;
use crate::rat::{derive_seed, ln_enclosure, rat, rat_int, Rat};
use crate::solver::{mono_tsp_approx, ScalarWeights};

/// Enumeration budgets. Defaults keep desk-scale runs tractable; the
/// formal subset bounds are recorded as truncated when clipped.
#[derive(Debug, Clone)]
pub struct Budgets {
    pub max_k_cardinality: usize,
    pub k_enum_budget: usize,
    pub max_beta_per_coord: usize,
    pub max_beta_combos: usize,
    pub cc_mode: CcMode,
    pub cc_exact_threshold: usize,
    pub mono_exact_threshold: usize,
    pub threads: usize,
}

impl Default for Budgets {
    fn default() -> Self {
        Budgets {
            max_k_cardinality: 2,
            k_enum_budget: 5000,
            max_beta_per_coord: 12,
            max_beta_combos: 256,
            cc_mode: CcMode::Exact,
            cc_exact_threshold: 8,
            mono_exact_threshold: 9,
            threads: 1,
        }
    }
}

/// Which budget limits were actually hit.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct Truncation {
    pub k_sets: bool,
    pub beta_grid: bool,
    pub cc_heuristic: bool,
}

impl Truncation {
    pub fn merge(&mut self, o: Truncation) {
        self.k_sets |= o.k_sets;
        self.beta_grid |= o.beta_grid;
        self.cc_heuristic |= o.cc_heuristic;
    }

    /// True iff the formal approximation guarantee applies (no budget was
    /// hit and cycle covers were exact).
    pub fn formal_guarantee(&self) -> bool {
        !self.k_sets && !self.beta_grid && !self.cc_heuristic
    }
}

#[derive(Debug, Clone)]
pub struct MaxTspOutcome {
    pub set: ParetoSet,
    pub truncation: Truncation,
}

/// All-or-nothing truncation: an edge keeps its weight vector iff it is
/// componentwise at most beta, else it becomes the zero vector.
pub fn beta_truncate(inst: &Instance, beta: &[u64]) -> Result<Instance> {
    if beta.len() != inst.k() {
        return Err(Error::Dimension(beta.len(), inst.k()));
    }
    inst.map_weights(|_, _, w| {
        if w.iter().zip(beta).all(|(x, b)| x <= b) {
            w.to_vec()
        } else {
            vec![0; w.len()]
        }
    })
}

/// Zeroes all edges incident to the vertex set `l` (undirected heavy-edge
/// handling).
pub fn zero_out(inst: &Instance, l: &BTreeSet<usize>) -> Result<Instance> {
    inst.map_weights(|u, v, w| {
        if l.contains(&u) || l.contains(&v) {
            vec![0; w.len()]
        } else {
            w.to_vec()
        }
    })
}

fn check_eps_domain(k: usize, eps: &Rat) -> Result<()> {
    if !eps.is_positive() {
        return Err(Error::Domain("eps must be positive".into()));
    }
    if k >= 2 {
        let lnk = ln_enclosure(&rat_int(k as u128))?;
        if eps * rat(2, 1) * lnk.lo >= Rat::from_integer(1.into()) {
            return Err(Error::Domain(format!(
                "eps must be below 1/(2 ln k) for k = {k}"
            )));
        }
    }
    Ok(())
}

fn log_ratio_ceil(numer_arg: &Rat, k: usize, eps: &Rat) -> Result<u64> {
    if numer_arg >= &Rat::from_integer(1.into()) {
        return Err(Error::Domain(
            "iteration bound needs its numerator log to be negative".into(),
        ));
    }
    let eta_v = eta(k, eps)?;
    let eps3 = eps * eps * eps;
    if eta_v <= eps3 {
        return Err(Error::Domain("iteration bound needs eta > eps^3".into()));
    }
    let den_arg = Rat::from_integer(1.into()) - eta_v + eps3;
    let num = ln_enclosure(numer_arg)?;
    let den = ln_enclosure(&den_arg)?;
    if !num.hi.is_negative() || !den.hi.is_negative() {
        return Err(Error::Domain("iteration bound logs must both be negative".into()));
    }
    // Both negative; the ratio's certified upper bound is num.lo / den.hi.
    let upper = &num.lo / &den.hi;
    let ceil = upper.ceil().to_integer();
    u64::try_from(ceil).map_err(|_| Error::Budget("iteration bound exceeds u64".into()))
}

/// Contraction iteration bound f(k, eps) = k * ceil(log(1/2+eps) / log(1-eta+eps^3)).
pub fn f_bound(k: usize, eps: &Rat) -> Result<u64> {
    check_eps_domain(k, eps)?;
    let m = log_ratio_ceil(&(rat(1, 2) + eps), k, eps)?;
    (k as u64).checked_mul(m).ok_or_else(|| Error::Budget("f bound exceeds u64".into()))
}

/// Undirected iteration bound g(k, eps) = k * ceil(log(1/6+eps) / log(1-eta+eps^3)).
pub fn g_bound(k: usize, eps: &Rat) -> Result<u64> {
    check_eps_domain(k, eps)?;
    let m = log_ratio_ceil(&(rat(1, 6) + eps), k, eps)?;
    (k as u64).checked_mul(m).ok_or_else(|| Error::Budget("g bound exceeds u64".into()))
}

/// Subset cardinality bound h(k, eps) = 2 * floor(2k*g/eps) * g.
pub fn h_bound(k: usize, eps: &Rat) -> Result<u64> {
    let g = g_bound(k, eps)?;
    let h_prime = (rat_int(2 * k as u128) * rat_int(g as u128) / eps).floor().to_integer();
    let h_prime = u64::try_from(h_prime).map_err(|_| Error::Budget("h' exceeds u64".into()))?;
    h_prime
        .checked_mul(2)
        .and_then(|x| x.checked_mul(g))
        .ok_or_else(|| Error::Budget("h bound exceeds u64".into()))
}

/// Enumerates path covers of cardinality 0..=size_bound in lexicographic
/// order (the empty set first), stopping once `budget` sets were produced.
/// Returns the sets and whether the budget truncated the enumeration.
pub fn enumerate_k_sets(inst: &Instance, size_bound: usize, budget: usize) -> (Vec<EdgeSet>, bool) {
    let edges = inst.edge_pairs();
    let mut out = vec![EdgeSet::new(inst.orientation())];
    for card in 1..=size_bound.min(edges.len()) {
        let mut stack: Vec<(usize, Vec<usize>)> = vec![(0, Vec::new())];
        // Depth-first lexicographic combination enumeration.
        while let Some((start, chosen)) = stack.pop() {
            if chosen.len() == card {
                let set = EdgeSet::from_edges(
                    inst.orientation(),
                    chosen.iter().map(|&i| edges[i]),
                );
                if set.len() == card && validate(&set, Role::PathCollection, inst).is_ok() {
                    out.push(set);
                    if out.len() >= budget {
                        return (out, true);
                    }
                }
                continue;
            }
            // Push in reverse so smaller indices pop first.
            let remaining = card - chosen.len();
            if edges.len() < remaining || start > edges.len() - remaining {
                continue;
            }
            for i in (start..=edges.len() - remaining).rev() {
                let mut c = chosen.clone();
                c.push(i);
                stack.push((i + 1, c));
            }
        }
    }
    (out, false)
}

/// Renaming table of a directed contraction: reduced vertex -> the original
/// path it stands for (tail..head order; singletons for untouched vertices).
#[derive(Debug, Clone)]
pub struct ContractionMap {
    pub groups: Vec<Vec<usize>>,
    pub k_edges: EdgeSet,
}

impl ContractionMap {
    /// Rebuilds an original-space tour from a reduced tour: reduced edges
    /// (p, q) become (last of p, first of q) and every group contributes
    /// its internal path. An empty reduced tour on a single group closes
    /// the Hamiltonian path directly.
    pub fn lift_tour(&self, reduced: &EdgeSet) -> Result<EdgeSet> {
        let mut out = EdgeSet::new(Orientation::Directed);
        for g in &self.groups {
            for w in g.windows(2) {
                out.insert(w[0], w[1]);
            }
        }
        if reduced.is_empty() {
            if self.groups.len() != 1 {
                return Err(Error::Structure("empty reduced tour with several groups".into()));
            }
            let g = &self.groups[0];
            if g.len() < 2 {
                return Err(Error::Structure("cannot close a single-vertex group".into()));
            }
            out.insert(*g.last().unwrap(), g[0]);
            return Ok(out);
        }
        for &(p, q) in reduced.iter() {
            if p >= self.groups.len() || q >= self.groups.len() {
                return Err(Error::InvalidEdge(p, q));
            }
            out.insert(*self.groups[p].last().unwrap(), self.groups[q][0]);
        }
        Ok(out)
    }
}

/// Contracts a directed path cover K: each maximal path collapses to one
/// vertex whose incoming edges are the tail's and outgoing edges the
/// head's. The reduced graph is complete; weights transfer accordingly.
pub fn contract_directed(inst: &Instance, k_set: &EdgeSet) -> Result<(Instance, ContractionMap)> {
    if inst.orientation() != Orientation::Directed {
        return Err(Error::Domain("contraction requires a directed instance".into()));
    }
    validate(k_set, Role::PathCollection, inst)
        .map_err(|v| Error::Structure(format!("K is not a path cover: {v}")))?;
    let paths = paths_of(k_set, inst.n())?;
    let mut in_path = vec![false; inst.n()];
    for p in &paths {
        for &v in p {
            in_path[v] = true;
        }
    }
    let mut groups: Vec<Vec<usize>> = paths;
    for v in 0..inst.n() {
        if !in_path[v] {
            groups.push(vec![v]);
        }
    }
    groups.sort_by_key(|g| g[0]);
    if groups.len() == 1 {
        // Fully contracted: K is a Hamiltonian path. Represent the reduced
        // instance minimally; callers handle the single-vertex case via
        // lift_tour on an empty tour.
        let map = ContractionMap { groups, k_edges: k_set.clone() };
        let reduced = Instance::from_fn(Orientation::Directed, 2, inst.k(), None, |_, _| {
            vec![0; inst.k()]
        })?;
        return Ok((reduced, map));
    }
    let reduced = Instance::from_fn(Orientation::Directed, groups.len(), inst.k(), None, |p, q| {
        inst.weight(*groups[p].last().unwrap(), groups[q][0]).to_vec()
    })?;
    Ok((reduced, ContractionMap { groups, k_edges: k_set.clone() }))
}

/// Connects a path collection into a tour, choosing connection edges
/// greedily by maximal weight-sum (ties lexicographic).
pub fn complete_to_tour(paths: &EdgeSet, inst: &Instance) -> Result<EdgeSet> {
    validate(paths, Role::PathCollection, inst)
        .map_err(|v| Error::Structure(format!("not a path collection: {v}")))?;
    let tour = greedy_complete(paths, inst.n(), inst.orientation(), |u, v| {
        inst.weight(u, v).iter().map(|&x| x as i128).sum()
    })?;
    debug_assert!(validate(&tour, Role::Tour, inst).is_ok());
    Ok(tour)
}

/// Beta grid: per coordinate the distinct edge-weight values (evenly
/// subsampled to the per-coordinate cap, always keeping the maximum), then
/// the cartesian product ordered so the no-truncation bound comes first.
fn beta_grid(inst: &Instance, budgets: &Budgets) -> (Vec<Vec<u64>>, bool) {
    let mut truncated = false;
    let mut per_coord: Vec<Vec<u64>> = Vec::new();
    for i in 0..inst.k() {
        let mut vals: BTreeSet<u64> = BTreeSet::new();
        for &(u, v) in &inst.edge_pairs() {
            vals.insert(inst.weight(u, v)[i]);
        }
        let vals: Vec<u64> = vals.into_iter().collect();
        let cap = budgets.max_beta_per_coord.max(1);
        let picked: Vec<u64> = if vals.len() <= cap {
            vals
        } else {
            truncated = true;
            (0..cap).map(|j| vals[j * (vals.len() - 1) / (cap - 1)]).collect()
        };
        // Descending, so the all-maxima combination is generated first.
        per_coord.push(picked.into_iter().rev().collect());
    }
    let mut combos: Vec<Vec<u64>> = vec![Vec::new()];
    for coord_vals in &per_coord {
        let mut next = Vec::new();
        'outer: for c in &combos {
            for &v in coord_vals {
                let mut c2 = c.clone();
                c2.push(v);
                next.push(c2);
                if next.len() > budgets.max_beta_combos {
                    truncated = true;
                    break 'outer;
                }
            }
        }
        combos = next;
    }
    combos.truncate(budgets.max_beta_combos.max(1));
    (combos, truncated)
}

fn cc_params(eps: &Rat, budgets: &Budgets) -> CcParams {
    CcParams {
        eps: eps.clone(),
        sense: Sense::Max,
        mode: budgets.cc_mode,
        fail_prob: rat(1, 2),
        thin: false,
        exact_threshold: budgets.cc_exact_threshold,
        scalarize_grid: 8,
    }
}

/// The light branch shared by both algorithms: compute an approximate
/// Pareto curve of cycle covers under the truncated weights, keep covers
/// whose every edge obeys the eta-lightness filter, decompose, and return
/// the kept paths (still on the working instance's vertices). In exact
/// mode the covers come from a per-K enumeration shared across the beta
/// grid.
fn light_branch_paths(
    covers: Option<&CoverEnumeration>,
    work: &Instance,
    eps_step: &Rat,
    lightness_gamma: &Rat,
    budgets: &Budgets,
    seed: u64,
    trunc: &mut Truncation,
) -> Result<Vec<EdgeSet>> {
    let pcc = match covers {
        Some(c) => c.pareto(work, Sense::Max)?,
        None => cc_pareto_approx(work, &cc_params(eps_step, budgets))?,
    };
    if !pcc.guaranteed {
        trunc.cc_heuristic = true;
    }
    let gamma = lightness_gamma;
    let mut out = Vec::new();
    for (idx, (cover, _)) in pcc.items.iter().enumerate() {
        let wcc = WeightedCycleCover::from_instance_cover(work, cover)?;
        if !is_light(&wcc, gamma)? {
            continue;
        }
        let d = decompose_randomized(&wcc, eps_step, derive_seed(seed, idx as u64), 64)?;
        out.push(d.edge_set(work.orientation()));
    }
    Ok(out)
}

fn strip_zero_edges(set: &EdgeSet, weights: &Instance) -> EdgeSet {
    EdgeSet::from_edges(
        set.orientation(),
        set.iter()
            .filter(|&&(u, v)| weights.weight(u, v).iter().any(|&x| x > 0))
            .copied(),
    )
}

fn run_k_branches<F>(ksets: &[EdgeSet], threads: usize, f: F) -> Result<Vec<EdgeSet>>
where
    F: Fn(usize, &EdgeSet) -> Result<Vec<EdgeSet>> + Sync,
{
    if threads <= 1 || ksets.len() < 2 {
        let mut out = Vec::new();
        for (i, k) in ksets.iter().enumerate() {
            out.extend(f(i, k)?);
        }
        return Ok(out);
    }
    let chunk = ksets.len().div_ceil(threads);
    let results: Vec<Result<Vec<(usize, Vec<EdgeSet>)>>> = std::thread::scope(|scope| {
        let mut handles = Vec::new();
        for (ci, slice) in ksets.chunks(chunk).enumerate() {
            let f = &f;
            handles.push(scope.spawn(move || {
                let mut local = Vec::new();
                for (j, k) in slice.iter().enumerate() {
                    local.push((ci * chunk + j, f(ci * chunk + j, k)?));
                }
                Ok(local)
            }));
        }
        handles.into_iter().map(|h| h.join().expect("branch thread panicked")).collect()
    });
    let mut indexed = Vec::new();
    for r in results {
        indexed.extend(r?);
    }
    indexed.sort_by_key(|(i, _)| *i);
    Ok(indexed.into_iter().flat_map(|(_, v)| v).collect())
}

fn max_atsp_tours(
    inst: &Instance,
    eps: &Rat,
    budgets: &Budgets,
    seed: u64,
) -> Result<(Vec<EdgeSet>, Truncation)> {
    let k = inst.k();
    let mut trunc = Truncation::default();
    if k == 1 {
        let sw = ScalarWeights::from_coordinate(inst, 0)?;
        let (tour, _) = mono_tsp_approx(inst, &sw, budgets.mono_exact_threshold)?;
        return Ok((vec![tour], trunc));
    }
    check_eps_domain(k, eps)?;
    let eps_half = eps / rat(2, 1);
    let formal_f = f_bound(k, &eps_half).unwrap_or(u64::MAX);
    let size_bound = budgets.max_k_cardinality.min(formal_f.min(usize::MAX as u64) as usize);
    if (size_bound as u64) < formal_f {
        trunc.k_sets = true;
    }
    let (ksets, ktrunc) = enumerate_k_sets(inst, size_bound, budgets.k_enum_budget);
    trunc.k_sets |= ktrunc;
    let lightness_gamma = Rat::from_integer(1.into()) / eta(k, &eps_half)?;

    let trunc_cell = std::sync::Mutex::new(Truncation::default());
    let tours = run_k_branches(&ksets, budgets.threads, |ki, k_set| {
        let mut local_trunc = Truncation::default();
        let mut local = Vec::new();
        let (reduced, cmap) = contract_directed(inst, k_set)?;
        if cmap.groups.len() == 1 {
            local.push(cmap.lift_tour(&EdgeSet::new(Orientation::Directed))?);
            return Ok(local);
        }
        let branch_seed = derive_seed(seed, ki as u64);
        // Light branch over the beta grid; covers enumerated once per K.
        let (betas, btrunc) = beta_grid(&reduced, budgets);
        local_trunc.beta_grid |= btrunc;
        let cover_enum = match budgets.cc_mode {
            CcMode::Exact => Some(CoverEnumeration::new(
                Orientation::Directed,
                &(0..reduced.n()).collect::<Vec<_>>(),
                budgets.cc_exact_threshold,
            )?),
            CcMode::Scalarize => None,
        };
        let mut seen_patterns: BTreeSet<Vec<bool>> = BTreeSet::new();
        for (bi, beta) in betas.iter().enumerate() {
            // Distinct bounds often zero the same edge set; identical
            // truncation patterns yield identical branches.
            let pattern: Vec<bool> = reduced
                .edge_pairs()
                .iter()
                .map(|&(u, v)| reduced.weight(u, v).iter().zip(beta).all(|(x, b)| x <= b))
                .collect();
            if !seen_patterns.insert(pattern) {
                continue;
            }
            let truncated_inst = beta_truncate(&reduced, beta)?;
            let paths = light_branch_paths(
                cover_enum.as_ref(),
                &truncated_inst,
                &eps_half,
                &lightness_gamma,
                budgets,
                derive_seed(branch_seed, bi as u64),
                &mut local_trunc,
            )?;
            for p in paths {
                let reduced_tour = complete_to_tour(&p, &reduced)?;
                local.push(cmap.lift_tour(&reduced_tour)?);
            }
        }
        // Recursion branch: drop one objective, solve with k-1 criteria.
        for i in 0..k {
            let dropped = reduced.drop_coordinate(i)?;
            let (rec_tours, rec_trunc) = max_atsp_tours(
                &dropped,
                &eps_half,
                budgets,
                derive_seed(branch_seed, (k + i) as u64),
            )?;
            local_trunc.merge(rec_trunc);
            for t in rec_tours {
                local.push(cmap.lift_tour(&t)?);
            }
        }
        trunc_cell.lock().unwrap().merge(local_trunc);
        Ok(local)
    })?;
    trunc.merge(*trunc_cell.lock().unwrap());
    Ok((tours, trunc))
}

/// Multi-criteria Max-ATSP (directed): with exhaustive budgets this is the
/// (1/2 - eps)-approximate Pareto-curve algorithm; with the default desk
/// budgets the formal bound holds on the branches that fit and truncation
/// is recorded in the outcome.
pub fn max_atsp(
    inst: &Instance,
    eps: &Rat,
    _fail_prob: &Rat,
    budgets: &Budgets,
    seed: u64,
) -> Result<MaxTspOutcome> {
    if inst.orientation() != Orientation::Directed {
        return Err(Error::Domain("max_atsp needs a directed instance".into()));
    }
    let (tours, truncation) = max_atsp_tours(inst, eps, budgets, seed)?;
    Ok(MaxTspOutcome { set: collect_tours(inst, tours)?, truncation })
}

fn max_stsp_tours(
    inst: &Instance,
    eps: &Rat,
    budgets: &Budgets,
    seed: u64,
) -> Result<(Vec<EdgeSet>, Truncation)> {
    let k = inst.k();
    let mut trunc = Truncation::default();
    if k == 1 {
        let sw = ScalarWeights::from_coordinate(inst, 0)?;
        let (tour, _) = mono_tsp_approx(inst, &sw, budgets.mono_exact_threshold)?;
        return Ok((vec![tour], trunc));
    }
    check_eps_domain(k, eps)?;
    let eps_third = eps / rat(3, 1);
    let formal_h = h_bound(k, &eps_third).unwrap_or(u64::MAX);
    let size_bound = budgets.max_k_cardinality.min(formal_h.min(usize::MAX as u64) as usize);
    if (size_bound as u64) < formal_h {
        trunc.k_sets = true;
    }
    let (ksets, ktrunc) = enumerate_k_sets(inst, size_bound, budgets.k_enum_budget);
    trunc.k_sets |= ktrunc;
    let lightness_gamma = Rat::from_integer(1.into()) / eta(k, &eps_third)?;

    let trunc_cell = std::sync::Mutex::new(Truncation::default());
    let tours = run_k_branches(&ksets, budgets.threads, |ki, k_set| {
        let mut local_trunc = Truncation::default();
        let mut local = Vec::new();
        let l: BTreeSet<usize> = k_set.vertices();
        let zeroed = zero_out(inst, &l)?;
        let branch_seed = derive_seed(seed, ki as u64);
        let (betas, btrunc) = beta_grid(&zeroed, budgets);
        local_trunc.beta_grid |= btrunc;
        let cover_enum = match budgets.cc_mode {
            CcMode::Exact => Some(CoverEnumeration::new(
                Orientation::Undirected,
                &(0..inst.n()).collect::<Vec<_>>(),
                budgets.cc_exact_threshold,
            )?),
            CcMode::Scalarize => None,
        };
        let mut seen_patterns: BTreeSet<Vec<bool>> = BTreeSet::new();
        for (bi, beta) in betas.iter().enumerate() {
            let pattern: Vec<bool> = zeroed
                .edge_pairs()
                .iter()
                .map(|&(u, v)| zeroed.weight(u, v).iter().zip(beta).all(|(x, b)| x <= b))
                .collect();
            if !seen_patterns.insert(pattern) {
                continue;
            }
            let truncated_inst = beta_truncate(&zeroed, beta)?;
            let paths = light_branch_paths(
                cover_enum.as_ref(),
                &truncated_inst,
                &eps_third,
                &lightness_gamma,
                budgets,
                derive_seed(branch_seed, bi as u64),
                &mut local_trunc,
            )?;
            for p in paths {
                let stripped = strip_zero_edges(&p, &truncated_inst);
                let with_k = stripped.union(k_set);
                if validate(&with_k, Role::PathCollection, inst).is_err() {
                    continue;
                }
                local.push(complete_to_tour(&with_k, inst)?);
            }
        }
        for i in 0..k {
            let dropped = zeroed.drop_coordinate(i)?;
            let (rec_tours, rec_trunc) = max_stsp_tours(
                &dropped,
                &eps_third,
                budgets,
                derive_seed(branch_seed, (k + i) as u64),
            )?;
            local_trunc.merge(rec_trunc);
            for t in rec_tours {
                let stripped = strip_zero_edges(&t, &dropped);
                let with_k = stripped.union(k_set);
                if validate(&with_k, Role::PathCollection, inst).is_err() {
                    continue;
                }
                local.push(complete_to_tour(&with_k, inst)?);
            }
        }
        trunc_cell.lock().unwrap().merge(local_trunc);
        Ok(local)
    })?;
    trunc.merge(*trunc_cell.lock().unwrap());
    Ok((tours, trunc))
}

/// Multi-criteria Max-STSP (undirected), the (2/3 - eps) analog.
pub fn max_stsp(
    inst: &Instance,
    eps: &Rat,
    _fail_prob: &Rat,
    budgets: &Budgets,
    seed: u64,
) -> Result<MaxTspOutcome> {
    if inst.orientation() != Orientation::Undirected {
        return Err(Error::Domain("max_stsp needs an undirected instance".into()));
    }
    let (tours, truncation) = max_stsp_tours(inst, eps, budgets, seed)?;
    Ok(MaxTspOutcome { set: collect_tours(inst, tours)?, truncation })
}

fn collect_tours(inst: &Instance, tours: Vec<EdgeSet>) -> Result<ParetoSet> {
    let mut set = ParetoSet::new(Sense::Max);
    for t in tours {
        debug_assert!(validate(&t, Role::Tour, inst).is_ok());
        let w = weight_of(inst, &t)?;
        set.items.push((t, w));
    }
    Ok(filter_dominated(&set))
}
