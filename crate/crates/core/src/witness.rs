//! Entanglement witnesses: verdicts, triviality, optimality and the shifted
//! family `lambda I - L`.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::{
    kron_vec, partial_transpose, swap_operator, ComplexMatrix, Dims, C64,
    HERMITIAN_TOL, ZERO,
};
use crate::optimize::{max_over_products, min_over_products, OptimizationResult, OptimizerConfig};
use crate::states::{
    random_unitary, schmidt_decompose, schmidt_of_vector, seeded_rng, DensityMatrix, PureState,
    PSD_TOL,
};

/// Product-state minimum below `-TOL_WITNESS` means "not a witness".
pub const TOL_WITNESS: f64 = 1e-8;
/// Product-state minimum within `TOL_ZERO` of zero counts as touching.
pub const TOL_ZERO: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub struct Shift {
    pub lambda: f64,
    pub test_op: ComplexMatrix,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Witness {
    operator: ComplexMatrix,
    dims: Dims,
    shift: Option<Shift>,
}

impl Witness {
    pub fn new(operator: ComplexMatrix, dims: Dims) -> Result<Self> {
        dims.check_matrix(&operator)?;
        if !operator.is_hermitian(HERMITIAN_TOL) {
            return Err(Error::InvalidArgument(format!(
                "witness operator not Hermitian (defect {:.3e})",
                operator.hermiticity_defect()
            )));
        }
        Ok(Witness {
            operator,
            dims,
            shift: None,
        })
    }

    /// `lambda I - L` with `L` positive semidefinite.
    pub fn shifted(lambda: f64, test_op: ComplexMatrix, dims: Dims) -> Result<Self> {
        dims.check_matrix(&test_op)?;
        if !test_op.is_hermitian(HERMITIAN_TOL) {
            return Err(Error::InvalidArgument("test operator not Hermitian".into()));
        }
        let min = test_op.min_eigenvalue();
        if min < -PSD_TOL {
            return Err(Error::InvalidArgument(format!(
                "test operator has negative eigenvalue {min:.3e}"
            )));
        }
        let n = dims.total();
        let operator = &ComplexMatrix::identity(n).scale_real(lambda) - &test_op;
        Ok(Witness {
            operator,
            dims,
            shift: Some(Shift { lambda, test_op }),
        })
    }

    /// Swap operator on two `d`-level systems.
    pub fn swap(d: usize) -> Self {
        Witness {
            operator: swap_operator(d),
            dims: Dims::qudits(d),
            shift: None,
        }
    }

    pub fn operator(&self) -> &ComplexMatrix {
        &self.operator
    }

    pub fn dims(&self) -> &Dims {
        &self.dims
    }

    pub fn shift(&self) -> Option<&Shift> {
        self.shift.as_ref()
    }

    pub fn expectation(&self, rho: &DensityMatrix) -> f64 {
        rho.expectation(&self.operator)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Verdict {
    Witness(OptimizationResult),
    /// Carries the product state with negative expectation.
    Violated(OptimizationResult),
}

impl Verdict {
    pub fn is_witness(&self) -> bool {
        matches!(self, Verdict::Witness(_))
    }

    pub fn result(&self) -> &OptimizationResult {
        match self {
            Verdict::Witness(r) | Verdict::Violated(r) => r,
        }
    }
}

pub fn is_witness(w: &Witness, config: &OptimizerConfig) -> Verdict {
    let r = min_over_products(w.operator(), w.dims(), config);
    if r.value >= -TOL_WITNESS {
        Verdict::Witness(r)
    } else {
        Verdict::Violated(r)
    }
}

/// Positive semidefinite witnesses detect nothing.
pub fn is_trivial(w: &Witness) -> bool {
    w.operator().min_eigenvalue() >= -PSD_TOL
}

/// `max <L>` over product states: the smallest `lambda` making `lambda I - L`
/// a witness.
pub fn lambda_min(test_op: &ComplexMatrix, dims: &Dims, config: &OptimizerConfig) -> Result<f64> {
    dims.check_matrix(test_op)?;
    let min = test_op.min_eigenvalue();
    if min < -PSD_TOL {
        return Err(Error::InvalidArgument(format!(
            "test operator has negative eigenvalue {min:.3e}"
        )));
    }
    Ok(max_over_products(test_op, dims, config).value)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Finer {
    First,
    Second,
    Equal,
}

/// Orders two shifted witnesses sharing the test operator: smaller `lambda`
/// is finer.
pub fn compare_finer_shifted(
    w1: &Witness,
    w2: &Witness,
    config: &OptimizerConfig,
) -> Result<Finer> {
    let (s1, s2) = match (w1.shift(), w2.shift()) {
        (Some(a), Some(b)) => (a, b),
        _ => return Err(Error::Incomparable),
    };
    if w1.dims() != w2.dims()
        || s1.test_op.rows() != s2.test_op.rows()
        || s1.test_op.max_abs_diff(&s2.test_op) > HERMITIAN_TOL
    {
        return Err(Error::Incomparable);
    }
    let floor = lambda_min(&s1.test_op, w1.dims(), config)?;
    for s in [s1, s2] {
        if s.lambda < floor - TOL_WITNESS {
            return Err(Error::NotAWitness(s.lambda - floor));
        }
    }
    let diff = s1.lambda - s2.lambda;
    Ok(if diff.abs() <= 1e-12 {
        Finer::Equal
    } else if diff < 0.0 {
        Finer::First
    } else {
        Finer::Second
    })
}

/// A witness touching the product states: `min <W> ~ 0`.
pub fn is_optimal(w: &Witness, config: &OptimizerConfig) -> Result<bool> {
    let r = min_over_products(w.operator(), w.dims(), config);
    if r.value < -TOL_WITNESS {
        return Err(Error::NotAWitness(r.value));
    }
    Ok(r.value <= TOL_ZERO)
}

/// `(|psi><psi|)^Gamma`, partial transpose on the second party.
pub fn ppt_witness_from_pure(psi: &PureState) -> Result<Witness> {
    let sd = schmidt_decompose(psi)?;
    if sd.rank() < 2 {
        return Err(Error::InvalidArgument(
            "product state gives a trivial witness".into(),
        ));
    }
    let op = partial_transpose(&psi.projector(), psi.dims(), 1)?;
    Witness::new(op.hermitian_part(), psi.dims().clone())
}

/// `W' = Lambda*(W) / p` for the mixing channel `p id + (1 - p) Tr(.) sigma`
/// applied to `W = lambda I - L`; again of the form `lambda' I - L`.
pub fn mixing_dual_shift(w: &Witness, p: f64, sigma: &DensityMatrix) -> Result<Witness> {
    let s = w.shift().ok_or_else(|| {
        Error::InvalidArgument("mixing shift needs a witness of the form lambda I - L".into())
    })?;
    if !(p > 0.0 && p <= 1.0) {
        return Err(Error::InvalidArgument(format!("mixing probability {p} outside (0, 1]")));
    }
    if sigma.dims() != w.dims() {
        return Err(Error::DimensionMismatch(format!(
            "sigma dims {} vs witness dims {}",
            sigma.dims(),
            w.dims()
        )));
    }
    let lambda = shifted_lambda(s.lambda, p, sigma.expectation(&s.test_op));
    Witness::shifted(lambda, s.test_op.clone(), w.dims().clone())
}

/// `lambda / p - ((1 - p) / p) <L>_sigma`.
pub fn shifted_lambda(lambda: f64, p: f64, expectation_l: f64) -> f64 {
    lambda / p - (1.0 - p) / p * expectation_l
}

/// Columns `e_x (x) b_i` (or `b_i (x) e_x` when `frame_left`) for an
/// orthonormal frame `b`, flattened so that `psi = T * stacked`.
fn frame_isometry(frame: &[Vec<C64>], free_dim: usize, frame_left: bool) -> ComplexMatrix {
    let r = frame.len();
    let fd = frame[0].len();
    let n = free_dim * fd;
    let mut t = ComplexMatrix::zeros(n, r * free_dim);
    for (i, b) in frame.iter().enumerate() {
        for x in 0..free_dim {
            let mut e = vec![ZERO; free_dim];
            e[x] = C64::new(1.0, 0.0);
            let col = if frame_left { kron_vec(b, &e) } else { kron_vec(&e, b) };
            for (row, c) in col.into_iter().enumerate() {
                t[(row, i * free_dim + x)] = c;
            }
        }
    }
    t
}

fn class_restart(
    l: &ComplexMatrix,
    r: usize,
    d1: usize,
    d2: usize,
    seed: u64,
    config: &OptimizerConfig,
) -> f64 {
    let mut rng = seeded_rng(seed);
    let u = random_unitary(d2, &mut rng);
    // Orthonormal frame on the fixed side, starting on the right.
    let mut frame: Vec<Vec<C64>> = (0..r).map(|i| u.column(i)).collect();
    let mut frame_left = false;
    let mut value = f64::NEG_INFINITY;
    for _ in 0..config.max_sweeps {
        let previous = value;
        for _ in 0..2 {
            let free_dim = if frame_left { d2 } else { d1 };
            let t = frame_isometry(&frame, free_dim, frame_left);
            let h = (&(&t.adjoint() * l) * &t).hermitian_part();
            let eig = h.eigh();
            let top = eig.values.len() - 1;
            value = eig.values[top];
            let psi = t.mul_vec(&eig.vector(top));
            let sd = schmidt_of_vector(&psi, d1, d2);
            // Re-express psi over an orthonormal frame on the other side.
            frame_left = !frame_left;
            frame = if frame_left {
                (0..r).map(|i| sd.left[i].clone()).collect()
            } else {
                (0..r).map(|i| sd.right[i].clone()).collect()
            };
        }
        if (value - previous).abs() < config.tol {
            break;
        }
    }
    value
}

/// `max <psi|L|psi>` over unit vectors of Schmidt rank at most `r`.
pub fn schmidt_class_max(
    l: &ComplexMatrix,
    r: usize,
    dims: &Dims,
    config: &OptimizerConfig,
) -> Result<f64> {
    let (d1, d2) = dims.bipartite()?;
    dims.check_matrix(l)?;
    if r == 0 || r > d1.min(d2) {
        return Err(Error::InvalidArgument(format!(
            "Schmidt rank {r} outside 1..={}",
            d1.min(d2)
        )));
    }
    let l = l.hermitian_part();
    let values: Vec<f64> = (0..config.restarts.max(1))
        .into_par_iter()
        .map(|i| class_restart(&l, r, d1, d2, config.seed.wrapping_add(i as u64), config))
        .collect();
    Ok(values.into_iter().fold(f64::NEG_INFINITY, f64::max))
}
