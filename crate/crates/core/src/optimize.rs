//! Multi-start minimization of `<chi|O|chi>` over pure product states.

use rayon::prelude::*;

use crate::linalg::{ComplexMatrix, Dims, C64, ZERO};
use crate::states::{random_product, seeded_rng, ProductStateParam};

/// Values within this distance of the incumbent count as ties.
pub const TIE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimizerConfig {
    pub restarts: usize,
    pub seed: u64,
    /// Sweep-to-sweep change below which a restart counts as converged.
    pub tol: f64,
    pub max_sweeps: usize,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        OptimizerConfig {
            restarts: 64,
            seed: 0,
            tol: 1e-12,
            max_sweeps: 500,
        }
    }
}

impl OptimizerConfig {
    pub fn with_seed(self, seed: u64) -> Self {
        OptimizerConfig { seed, ..self }
    }

    pub fn with_restarts(self, restarts: usize) -> Self {
        OptimizerConfig {
            restarts: restarts.max(1),
            ..self
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptimizationResult {
    pub value: f64,
    pub argument: ProductStateParam,
    pub restarts_used: usize,
    pub converged: bool,
    /// Max minus min over the per-restart optima.
    pub spread: f64,
}

struct Restart {
    value: f64,
    argument: ProductStateParam,
    converged: bool,
}

/// Digit table: `table[flat][party]`.
fn digit_table(dims: &Dims) -> Vec<Vec<usize>> {
    (0..dims.total()).map(|i| dims.digits(i)).collect()
}

/// Hermitian form of the objective in the free party's vector.
fn effective_operator(
    obs: &ComplexMatrix,
    table: &[Vec<usize>],
    parties: &[Vec<C64>],
    free: usize,
) -> ComplexMatrix {
    let n = obs.rows();
    let d = parties[free].len();
    let weights: Vec<C64> = table
        .iter()
        .map(|digits| {
            parties
                .iter()
                .enumerate()
                .filter(|(k, _)| *k != free)
                .fold(C64::new(1.0, 0.0), |acc, (k, v)| acc * v[digits[k]])
        })
        .collect();
    let mut h = ComplexMatrix::zeros(d, d);
    for i in 0..n {
        let wi = weights[i].conj();
        if wi == ZERO {
            continue;
        }
        let a = table[i][free];
        for j in 0..n {
            let wj = weights[j];
            if wj == ZERO {
                continue;
            }
            h[(a, table[j][free])] += wi * obs[(i, j)] * wj;
        }
    }
    h.hermitian_part()
}

fn refine(
    obs: &ComplexMatrix,
    table: &[Vec<usize>],
    mut arg: ProductStateParam,
    config: &OptimizerConfig,
) -> Restart {
    let parties = arg.parties().len();
    let mut value = obs.expectation(&arg.to_vector());
    let mut converged = false;
    for _ in 0..config.max_sweeps {
        let previous = value;
        for free in 0..parties {
            let h = effective_operator(obs, table, arg.parties(), free);
            let eig = h.eigh();
            value = eig.values[0];
            arg.set_party(free, eig.vector(0));
        }
        if (previous - value).abs() < config.tol {
            converged = true;
            break;
        }
    }
    let arg = ProductStateParam::from_unnormalized(arg.parties().to_vec());
    Restart {
        value: obs.expectation(&arg.to_vector()),
        argument: arg,
        converged,
    }
}

/// Lowest value wins; near-ties go to the earliest restart.
fn select(results: Vec<Restart>) -> OptimizationResult {
    let restarts_used = results.len();
    let lo = results.iter().map(|r| r.value).fold(f64::INFINITY, f64::min);
    let hi = results.iter().map(|r| r.value).fold(f64::NEG_INFINITY, f64::max);
    let mut best: Option<Restart> = None;
    for r in results {
        match &best {
            Some(b) if r.value >= b.value - TIE_TOL => {}
            _ => best = Some(r),
        }
    }
    let best = best.expect("at least one restart");
    if !best.converged {
        log::warn!(
            "product optimizer: best restart did not converge (value {:.3e})",
            best.value
        );
    }
    OptimizationResult {
        value: best.value,
        argument: best.argument,
        restarts_used,
        converged: best.converged,
        spread: hi - lo,
    }
}

/// Approximate `min <chi|obs|chi>` over product states; an upper bound on the
/// true minimum. Deterministic for a fixed config.
pub fn min_over_products(
    obs: &ComplexMatrix,
    dims: &Dims,
    config: &OptimizerConfig,
) -> OptimizationResult {
    assert_eq!(obs.rows(), dims.total(), "observable does not match dims");
    let obs = obs.hermitian_part();
    let table = digit_table(dims);
    let restarts = config.restarts.max(1);
    let results: Vec<Restart> = (0..restarts)
        .into_par_iter()
        .map(|i| {
            let mut rng = seeded_rng(config.seed.wrapping_add(i as u64));
            refine(&obs, &table, random_product(dims, &mut rng), config)
        })
        .collect();
    select(results)
}

/// Approximate `max <chi|obs|chi>` over product states; a lower bound on the
/// true maximum.
pub fn max_over_products(
    obs: &ComplexMatrix,
    dims: &Dims,
    config: &OptimizerConfig,
) -> OptimizationResult {
    let mut r = min_over_products(&obs.scale_real(-1.0), dims, config);
    r.value = -r.value;
    r
}
