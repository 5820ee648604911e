// Copyright 2026 The digista Authors
// SPDX-License-Identifier: Apache-2.0

//! Derivative-free polishing of an angle sequence.
//!
//! Nelder-Mead on the flattened angles, maximizing a caller-supplied
//! objective (normally the ideal-circuit fidelity). The initial simplex
//! displaces each coordinate by `simplex_size` with a seeded random sign, and
//! the search restarts around the incumbent until a restart stops paying off.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::AngleSequence;
use crate::error::Result;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RefineOptions {
    /// Edge length of the starting simplex, in radians.
    pub simplex_size: f64,
    /// Stop once a whole simplex cycle improves the best value by less.
    pub tolerance: f64,
    pub max_evaluations: usize,
    pub seed: u64,
}

impl Default for RefineOptions {
    fn default() -> Self {
        RefineOptions {
            simplex_size: 0.05,
            tolerance: 1e-9,
            max_evaluations: 2000,
            seed: 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Refined {
    pub angles: AngleSequence,
    pub before: f64,
    pub after: f64,
    pub evaluations: usize,
}

/// Maximize `objective` starting from `seq`.
///
/// Never returns a worse sequence than the input: if nothing beats the
/// starting value, `seq` comes back unchanged.
pub fn refine_angles<F>(seq: &AngleSequence, opts: &RefineOptions, mut objective: F) -> Result<Refined>
where
    F: FnMut(&AngleSequence) -> Result<f64>,
{
    let x0 = seq.flatten();
    let before = objective(seq)?;
    if x0.is_empty() || opts.max_evaluations == 0 {
        return Ok(Refined {
            angles: seq.clone(),
            before,
            after: before,
            evaluations: 1,
        });
    }

    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut evals = 1;
    // Minimize the negated objective.
    let mut cost = |x: &[f64], evals: &mut usize| -> Result<f64> {
        *evals += 1;
        Ok(-objective(&seq.with_flat(x))?)
    };

    let mut best_x = x0.clone();
    let mut best_f = -before;
    loop {
        let start_f = best_f;
        let (x, f) = nelder_mead(
            &best_x,
            best_f,
            opts,
            &mut rng,
            &mut evals,
            &mut cost,
        )?;
        if f < best_f {
            best_x = x;
            best_f = f;
        }
        if start_f - best_f < opts.tolerance || evals >= opts.max_evaluations {
            break;
        }
    }

    if best_f < -before {
        Ok(Refined {
            angles: seq.with_flat(&best_x),
            before,
            after: -best_f,
            evaluations: evals,
        })
    } else {
        Ok(Refined {
            angles: seq.clone(),
            before,
            after: before,
            evaluations: evals,
        })
    }
}

fn nelder_mead<C>(
    x0: &[f64],
    f0: f64,
    opts: &RefineOptions,
    rng: &mut ChaCha8Rng,
    evals: &mut usize,
    cost: &mut C,
) -> Result<(Vec<f64>, f64)>
where
    C: FnMut(&[f64], &mut usize) -> Result<f64>,
{
    let n = x0.len();
    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(n + 1);
    simplex.push((x0.to_vec(), f0));
    for i in 0..n {
        if *evals >= opts.max_evaluations {
            break;
        }
        let mut x = x0.to_vec();
        let sign = if rng.gen::<bool>() { 1.0 } else { -1.0 };
        x[i] += sign * opts.simplex_size;
        let f = cost(&x, evals)?;
        simplex.push((x, f));
    }
    if simplex.len() < n + 1 {
        return Ok(best_of(simplex));
    }

    let mut cycle_best = f0;
    let mut iters = 0;
    while *evals < opts.max_evaluations {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        iters += 1;
        if iters % (n + 1) == 0 {
            let spread = simplex[n].1 - simplex[0].1;
            if cycle_best - simplex[0].1 < opts.tolerance && spread < opts.tolerance {
                break;
            }
            cycle_best = simplex[0].1;
        }

        let centroid: Vec<f64> = (0..n)
            .map(|k| simplex[..n].iter().map(|(x, _)| x[k]).sum::<f64>() / n as f64)
            .collect();
        let worst = simplex[n].clone();
        let toward = |t: f64| -> Vec<f64> {
            centroid
                .iter()
                .zip(&worst.0)
                .map(|(c, w)| c + t * (w - c))
                .collect()
        };

        let xr = toward(-1.0);
        let fr = cost(&xr, evals)?;
        if fr < simplex[0].1 {
            let xe = toward(-2.0);
            let fe = cost(&xe, evals)?;
            simplex[n] = if fe < fr { (xe, fe) } else { (xr, fr) };
            continue;
        }
        if fr < simplex[n - 1].1 {
            simplex[n] = (xr, fr);
            continue;
        }
        let (xc, fc) = if fr < worst.1 {
            let xc = toward(-0.5);
            let fc = cost(&xc, evals)?;
            (xc, fc)
        } else {
            let xc = toward(0.5);
            let fc = cost(&xc, evals)?;
            (xc, fc)
        };
        if fc < worst.1.min(fr) {
            simplex[n] = (xc, fc);
            continue;
        }
        // Shrink toward the best vertex.
        let best = simplex[0].0.clone();
        for vertex in simplex.iter_mut().skip(1) {
            if *evals >= opts.max_evaluations {
                break;
            }
            let x: Vec<f64> = best
                .iter()
                .zip(&vertex.0)
                .map(|(b, v)| b + 0.5 * (v - b))
                .collect();
            let f = cost(&x, evals)?;
            *vertex = (x, f);
        }
    }
    Ok(best_of(simplex))
}

fn best_of(simplex: Vec<(Vec<f64>, f64)>) -> (Vec<f64>, f64) {
    simplex
        .into_iter()
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .expect("non-empty simplex")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::PauliString;
    use crate::sta::Slot;

    fn seq(values: &[f64]) -> AngleSequence {
        AngleSequence {
            slots: vec![Slot::single(PauliString::XI), Slot::single(PauliString::ZI)],
            theta: values.chunks(2).map(|c| c.to_vec()).collect(),
        }
    }

    fn bowl(s: &AngleSequence) -> Result<f64> {
        let x = s.flatten();
        Ok(1.0 - (x[0] - 0.3).powi(2) - 2.0 * (x[1] + 0.1).powi(2) - (x[2] - x[3]).powi(2))
    }

    #[test]
    fn finds_quadratic_maximum() {
        let r = refine_angles(&seq(&[0.0, 0.0, 0.5, -0.5]), &RefineOptions::default(), bowl).unwrap();
        assert!(r.after > r.before);
        assert!(r.after > 1.0 - 1e-7, "{}", r.after);
        let x = r.angles.flatten();
        assert!((x[0] - 0.3).abs() < 1e-3);
        assert!((x[1] + 0.1).abs() < 1e-3);
        assert!(r.evaluations <= 2000 + 4);
    }

    #[test]
    fn keeps_input_at_optimum() {
        let start = seq(&[0.3, -0.1, 0.2, 0.2]);
        let r = refine_angles(&start, &RefineOptions::default(), bowl).unwrap();
        assert_eq!(r.angles, start);
        assert_eq!(r.after, r.before);
    }

    #[test]
    fn deterministic_for_fixed_seed() {
        let start = seq(&[0.0, 0.4, 0.5, -0.5]);
        let opts = RefineOptions {
            max_evaluations: 60,
            ..Default::default()
        };
        let a = refine_angles(&start, &opts, bowl).unwrap();
        let b = refine_angles(&start, &opts, bowl).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn respects_evaluation_budget() {
        let opts = RefineOptions {
            max_evaluations: 25,
            ..Default::default()
        };
        let r = refine_angles(&seq(&[1.0, 1.0, 1.0, -1.0]), &opts, bowl).unwrap();
        assert!(r.evaluations <= 25 + 4);
        assert!(r.after >= r.before);
    }
}
