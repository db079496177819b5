//! Subtour patching: connecting a path collection into a Hamiltonian cycle
//! by greedily adding the best-scoring feasible connection edges.

use crate::error::{Error, Result};
use crate::graph::{paths_of, EdgeSet, Orientation};

/// Connects `paths` (a valid path collection over 0..n) into a single tour.
/// Connection edges are chosen greedily by maximal `score`, ties broken by
/// the lexicographically smallest (tail, head) pair.
pub(crate) fn greedy_complete(
    paths: &EdgeSet,
    n: usize,
    orientation: Orientation,
    score: impl Fn(usize, usize) -> i128,
) -> Result<EdgeSet> {
    let comps = paths_of(paths, n)?;
    let mut on_path = vec![false; n];
    for p in &comps {
        for &v in p {
            on_path[v] = true;
        }
    }
    // Fragments as endpoint pairs; isolated vertices are trivial fragments.
    let mut frags: Vec<(usize, usize)> = comps
        .iter()
        .map(|p| (*p.first().unwrap(), *p.last().unwrap()))
        .collect();
    for v in 0..n {
        if !on_path[v] {
            frags.push((v, v));
        }
    }
    frags.sort();
    let mut out = paths.clone();
    match orientation {
        Orientation::Directed => {
            while frags.len() > 1 {
                let mut best: Option<(i128, usize, usize)> = None;
                for i in 0..frags.len() {
                    for j in 0..frags.len() {
                        if i == j {
                            continue;
                        }
                        let s = score(frags[i].1, frags[j].0);
                        let better = match &best {
                            None => true,
                            Some((bs, bi, bj)) => {
                                s > *bs
                                    || (s == *bs
                                        && (frags[i].1, frags[j].0)
                                            < (frags[*bi].1, frags[*bj].0))
                            }
                        };
                        if better {
                            best = Some((s, i, j));
                        }
                    }
                }
                let (_, i, j) = best.unwrap();
                out.insert(frags[i].1, frags[j].0);
                let merged = (frags[i].0, frags[j].1);
                let (lo, hi) = (i.min(j), i.max(j));
                frags.remove(hi);
                frags.remove(lo);
                frags.push(merged);
                frags.sort();
            }
            let (s, e) = frags[0];
            if n == 1 {
                return Err(Error::Structure("cannot close a tour on one vertex".into()));
            }
            out.insert(e, s);
        }
        Orientation::Undirected => {
            if n < 3 {
                return Err(Error::Structure("undirected tours need at least 3 vertices".into()));
            }
            while frags.len() > 1 {
                let mut best: Option<(i128, usize, usize, usize, usize)> = None;
                for i in 0..frags.len() {
                    for j in 0..frags.len() {
                        if i == j {
                            continue;
                        }
                        for &x in &[frags[i].0, frags[i].1] {
                            for &y in &[frags[j].0, frags[j].1] {
                                let s = score(x, y);
                                let key = (x.min(y), x.max(y));
                                let better = match &best {
                                    None => true,
                                    Some((bs, bx, by, _, _)) => {
                                        s > *bs || (s == *bs && key < (*bx, *by))
                                    }
                                };
                                if better {
                                    best = Some((s, key.0, key.1, i, j));
                                }
                            }
                        }
                    }
                }
                let (_, x, y, i, j) = best.unwrap();
                out.insert(x, y);
                let other = |f: (usize, usize), used: usize| if f.0 == used { f.1 } else { f.0 };
                let (fi, fj) = (frags[i], frags[j]);
                let used_i = if x == fi.0 || x == fi.1 { x } else { y };
                let used_j = if used_i == x { y } else { x };
                let merged = (other(fi, used_i), other(fj, used_j));
                let (lo, hi) = (i.min(j), i.max(j));
                frags.remove(hi);
                frags.remove(lo);
                frags.push((merged.0.min(merged.1), merged.0.max(merged.1)));
                frags.sort();
            }
            let (s, e) = frags[0];
            out.insert(s, e);
        }
    }
    Ok(out)
}
