//! Seeded instance generators: uniform random weights, metric instances
//! from rounded planar points, and gamma-triangle instances produced by
//! repeated closure.

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{gamma_check, GammaCheck, Instance, Orientation};
use crate::rat::{rat, Rat};

pub fn random_instance(
    orientation: Orientation,
    n: usize,
    k: usize,
    seed: u64,
    max_w: u64,
) -> Result<Instance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Instance::from_fn(orientation, n, k, None, |_, _| {
        (0..k).map(|_| rng.gen_range(0..=max_w)).collect()
    })
}

/// Repeated gamma-closure: w(u,v) <- min(w(u,v), floor(gamma*(w(u,x)+w(x,v))))
/// until stable. Weights are nonincreasing, so this terminates; the
/// fixpoint satisfies the gamma-triangle inequality by construction.
fn gamma_closure(w: &mut [Vec<u64>], n: usize, k: usize, gamma: &Rat) {
    let p = gamma.numer().clone();
    let q = gamma.denom().clone();
    loop {
        let mut changed = false;
        for u in 0..n {
            for v in 0..n {
                if u == v {
                    continue;
                }
                for x in 0..n {
                    if x == u || x == v {
                        continue;
                    }
                    for i in 0..k {
                        let sum = BigInt::from(w[u * n + x][i]) + BigInt::from(w[x * n + v][i]);
                        let bound = (&sum * &p) / &q;
                        let bound = bound.to_u64().unwrap_or(u64::MAX);
                        if w[u * n + v][i] > bound {
                            w[u * n + v][i] = bound;
                            changed = true;
                        }
                    }
                }
            }
        }
        if !changed {
            break;
        }
    }
}

/// Random instance closed under the gamma-triangle inequality; the result
/// always passes [`gamma_check`] and carries the gamma declaration.
pub fn gamma_instance(
    orientation: Orientation,
    n: usize,
    k: usize,
    seed: u64,
    gamma: &Rat,
    max_w: u64,
) -> Result<Instance> {
    if *gamma < rat(1, 2) || *gamma > rat(1, 1) {
        return Err(Error::Domain("gamma must lie in [1/2, 1]".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut w: Vec<Vec<u64>> = (0..n * n)
        .map(|idx| {
            let (u, v) = (idx / n, idx % n);
            if u == v {
                vec![0; k]
            } else {
                (0..k).map(|_| rng.gen_range(1..=max_w)).collect()
            }
        })
        .collect();
    if orientation == Orientation::Undirected {
        for u in 0..n {
            for v in u + 1..n {
                let copy = w[u * n + v].clone();
                w[v * n + u] = copy;
            }
        }
    }
    gamma_closure(&mut w, n, k, gamma);
    let inst = Instance::from_fn(orientation, n, k, Some(gamma.clone()), |u, v| {
        w[u * n + v].clone()
    })?;
    debug_assert_eq!(gamma_check(&inst, gamma)?, GammaCheck::Ok);
    Ok(inst)
}

/// Metric instance: rounded planar Euclidean distances (independent point
/// sets per criterion), then metric closure to repair rounding artifacts.
pub fn metric_instance(orientation: Orientation, n: usize, k: usize, seed: u64) -> Result<Instance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let one = rat(1, 1);
    let mut w: Vec<Vec<u64>> = vec![vec![0; k]; n * n];
    for i in 0..k {
        let pts: Vec<(f64, f64)> =
            (0..n).map(|_| (rng.gen_range(0.0..1000.0), rng.gen_range(0.0..1000.0))).collect();
        for u in 0..n {
            for v in 0..n {
                if u != v {
                    let dx = pts[u].0 - pts[v].0;
                    let dy = pts[u].1 - pts[v].1;
                    w[u * n + v][i] = (dx * dx + dy * dy).sqrt().round() as u64;
                }
            }
        }
    }
    gamma_closure(&mut w, n, k, &one);
    let inst =
        Instance::from_fn(orientation, n, k, Some(one.clone()), |u, v| w[u * n + v].clone())?;
    debug_assert_eq!(gamma_check(&inst, &one)?, GammaCheck::Ok);
    Ok(inst)
}
