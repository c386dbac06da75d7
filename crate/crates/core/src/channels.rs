//! Kraus-form channels, their duals and Choi matrices, and the channel
//! families used throughout the crate.

use crate::error::{Error, Result};
use crate::linalg::{
    kron, normalized, numerical_rank, partial_trace, swap_operator, ComplexMatrix, Dims, C64,
    HERMITIAN_TOL, ZERO,
};
use crate::states::{
    max_entangled, schmidt_coefficients_across, schmidt_form_state, Bipartition, DensityMatrix,
    PSD_TOL,
};

/// Tolerance for `sum_j M_j^dagger M_j = I`, POVM completeness and unitarity.
pub const COMPLETENESS_TOL: f64 = 1e-10;

// Eigen-weights below this are dropped when building Kraus lists.
const WEIGHT_CUTOFF: f64 = 1e-14;

/// Representation used by `apply`/`dual_apply` when a closed form is known.
#[derive(Debug, Clone)]
enum ClosedForm {
    /// `rho -> sum_j Tr(E_j rho) rho_j`
    Measurement {
        effects: Vec<ComplexMatrix>,
        outputs: Vec<ComplexMatrix>,
    },
    /// `rho -> p rho + (1 - p) Tr(rho) sigma`
    Mixing { p: f64, sigma: ComplexMatrix },
}

#[derive(Debug, Clone)]
pub struct KrausChannel {
    kraus: Vec<ComplexMatrix>,
    dims: Dims,
    label: String,
    trace_preserving: bool,
    closed_form: Option<ClosedForm>,
}

impl KrausChannel {
    pub fn new(kraus: Vec<ComplexMatrix>, dims: Dims, label: impl Into<String>) -> Result<Self> {
        if kraus.is_empty() {
            return Err(Error::InvalidArgument("channel needs at least one Kraus operator".into()));
        }
        for (j, m) in kraus.iter().enumerate() {
            dims.check_matrix(m).map_err(|e| e.in_field(&format!("kraus[{j}]")))?;
        }
        let trace_preserving = completeness_defect(&kraus) <= COMPLETENESS_TOL;
        Ok(KrausChannel {
            kraus,
            dims,
            label: label.into(),
            trace_preserving,
            closed_form: None,
        })
    }

    pub fn identity(dims: Dims) -> Self {
        let n = dims.total();
        Self::new(vec![ComplexMatrix::identity(n)], dims, "identity").expect("identity channel")
    }

    pub fn unitary(u: ComplexMatrix, dims: Dims, label: impl Into<String>) -> Result<Self> {
        let defect = u.unitarity_defect();
        if defect > COMPLETENESS_TOL {
            return Err(Error::NotUnitary {
                index: 0,
                deviation: defect,
            });
        }
        Self::new(vec![u], dims, label)
    }

    /// `rho -> V rho V` with `V|ab> = |ba>` on two qudits.
    pub fn swap(d: usize) -> Self {
        Self::new(vec![swap_operator(d)], Dims::qudits(d), "swap").expect("swap channel")
    }

    pub fn kraus(&self) -> &[ComplexMatrix] {
        &self.kraus
    }

    pub fn dims(&self) -> &Dims {
        &self.dims
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn is_trace_preserving(&self) -> bool {
        self.trace_preserving
    }

    /// Same channel, different Kraus list. Closed forms are dropped so that
    /// `apply` exercises the given operators.
    pub fn with_kraus(&self, kraus: Vec<ComplexMatrix>) -> Result<Self> {
        Self::new(kraus, self.dims.clone(), self.label.clone())
    }

    /// Operator image `sum_j M_j X M_j^dagger` of an arbitrary matrix.
    pub fn apply_operator(&self, x: &ComplexMatrix) -> Result<ComplexMatrix> {
        self.dims.check_matrix(x)?;
        Ok(match &self.closed_form {
            Some(ClosedForm::Measurement { effects, outputs }) => {
                let n = self.dims.total();
                effects
                    .iter()
                    .zip(outputs)
                    .fold(ComplexMatrix::zeros(n, n), |acc, (e, out)| {
                        &acc + &out.scale(e.trace_product(x))
                    })
            }
            Some(ClosedForm::Mixing { p, sigma }) => {
                &x.scale_real(*p) + &sigma.scale(x.trace() * (1.0 - p))
            }
            None => {
                let n = self.dims.total();
                self.kraus
                    .iter()
                    .fold(ComplexMatrix::zeros(n, n), |acc, m| &acc + &m.sandwich(x))
            }
        })
    }

    pub fn apply(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        if rho.dims() != &self.dims {
            return Err(Error::DimensionMismatch(format!(
                "state dims {} vs channel dims {}",
                rho.dims(),
                self.dims
            )));
        }
        let out = self.apply_operator(rho.matrix())?;
        Ok(DensityMatrix::from_parts(out.hermitian_part(), self.dims.clone()))
    }

    /// Heisenberg-picture map `O -> sum_j M_j^dagger O M_j`.
    pub fn dual_apply(&self, obs: &ComplexMatrix) -> Result<ComplexMatrix> {
        self.dims.check_matrix(obs)?;
        let n = self.dims.total();
        Ok(match &self.closed_form {
            Some(ClosedForm::Measurement { effects, outputs }) => effects
                .iter()
                .zip(outputs)
                .fold(ComplexMatrix::zeros(n, n), |acc, (e, out)| {
                    &acc + &e.scale(out.trace_product(obs))
                }),
            Some(ClosedForm::Mixing { p, sigma }) => {
                let shift = sigma.trace_product(obs) * (1.0 - p);
                &obs.scale_real(*p) + &ComplexMatrix::identity(n).scale(shift)
            }
            None => self
                .kraus
                .iter()
                .fold(ComplexMatrix::zeros(n, n), |acc, m| {
                    &acc + &(&(&m.adjoint() * obs) * m)
                }),
        })
    }

    /// `M_j |v>`, unnormalized.
    pub fn kraus_image(&self, j: usize, v: &[C64]) -> Vec<C64> {
        self.kraus[j].mul_vec(v)
    }

    /// Kraus list `M'_i = sum_j u_ij M_j` for a unitary `u` on the Kraus index.
    pub fn remix(&self, u: &ComplexMatrix) -> Result<Vec<ComplexMatrix>> {
        let k = self.kraus.len();
        if u.rows() != k || u.cols() != k {
            return Err(Error::DimensionMismatch(format!(
                "remixing unitary is {}x{}, channel has {k} Kraus operators",
                u.rows(),
                u.cols()
            )));
        }
        let n = self.dims.total();
        Ok((0..k)
            .map(|i| {
                self.kraus
                    .iter()
                    .enumerate()
                    .fold(ComplexMatrix::zeros(n, n), |acc, (j, m)| &acc + &m.scale(u[(i, j)]))
            })
            .collect())
    }

    /// Kraus operators of the orthogonal (Choi-eigenbasis) decomposition.
    pub fn canonical_kraus(&self) -> Vec<ComplexMatrix> {
        let choi = self.choi();
        let n = self.dims.total();
        let scale = (n as f64).sqrt();
        let eig = choi.matrix().eigh();
        let top = eig.values.iter().copied().fold(0.0f64, f64::max).max(1.0);
        eig.values
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, &mu)| mu > 1e-12 * top)
            .map(|(k, &mu)| {
                let w = eig.vector(k);
                let amp = scale * mu.sqrt();
                ComplexMatrix::from_fn(n, n, |s, r| w[r * n + s] * amp)
            })
            .collect()
    }

    /// Choi state `(id (x) Lambda)(phi+_{R_1 1} (x) ... (x) phi+_{R_n n})`,
    /// parties ordered `R_1..R_n, 1..n`.
    pub fn choi(&self) -> ChoiMatrix {
        let n = self.dims.total();
        let vectors = self.choi_vectors();
        let mut j = ComplexMatrix::zeros(n * n, n * n);
        for v in &vectors {
            j = &j + &ComplexMatrix::projector(v);
        }
        ChoiMatrix {
            state: DensityMatrix::from_parts(j.hermitian_part(), self.dims.concat(&self.dims)),
            system_parties: self.dims.parties(),
            vectors,
        }
    }

    /// `(I (x) M_j)|Phi>` for every Kraus operator.
    pub fn choi_vectors(&self) -> Vec<Vec<C64>> {
        let n = self.dims.total();
        let amp = 1.0 / (n as f64).sqrt();
        self.kraus
            .iter()
            .map(|m| {
                let mut v = vec![ZERO; n * n];
                for r in 0..n {
                    for s in 0..n {
                        v[r * n + s] = m[(s, r)] * amp;
                    }
                }
                v
            })
            .collect()
    }
}

/// `max |sum_j M_j^dagger M_j - I|` elementwise.
pub fn completeness_defect(kraus: &[ComplexMatrix]) -> f64 {
    let n = kraus[0].cols();
    let sum = kraus
        .iter()
        .fold(ComplexMatrix::zeros(n, n), |acc, m| &acc + &(&m.adjoint() * m));
    sum.max_abs_diff(&ComplexMatrix::identity(n))
}

#[derive(Debug, Clone)]
pub struct ChoiMatrix {
    state: DensityMatrix,
    system_parties: usize,
    vectors: Vec<Vec<C64>>,
}

/// Schmidt rank of a Choi matrix across a cut, exact for pure Choi states.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ChoiCutRank {
    pub rank: usize,
    /// `false` when the Choi matrix is mixed and `rank` is only the maximum
    /// over the Kraus-induced pure decomposition (an upper bound on the
    /// Schmidt number).
    pub exact: bool,
}

impl ChoiMatrix {
    pub fn state(&self) -> &DensityMatrix {
        &self.state
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        self.state.matrix()
    }

    pub fn dims(&self) -> &Dims {
        self.state.dims()
    }

    /// Party index of reference `R_a` (0-based `a`).
    pub fn reference_party(&self, a: usize) -> usize {
        a
    }

    /// Party index of system `a` (0-based `a`).
    pub fn system_party(&self, a: usize) -> usize {
        self.system_parties + a
    }

    /// `Tr_R J`, equal to `Lambda(I / D)`.
    pub fn system_marginal(&self) -> Result<ComplexMatrix> {
        let keep: Vec<usize> = (0..self.system_parties).map(|a| self.system_party(a)).collect();
        partial_trace(self.matrix(), self.dims(), &keep)
    }

    /// Recover `Lambda(rho) = D Tr_R[(rho^T (x) I) J]`.
    pub fn contract(&self, rho: &ComplexMatrix) -> Result<ComplexMatrix> {
        let n = rho.rows();
        if n * n != self.matrix().rows() {
            return Err(Error::DimensionMismatch(format!(
                "{n}x{n} input for a Choi matrix of size {}",
                self.matrix().rows()
            )));
        }
        let lifted = &kron(&rho.transpose(), &ComplexMatrix::identity(n)) * self.matrix();
        let keep: Vec<usize> = (0..self.system_parties).map(|a| self.system_party(a)).collect();
        Ok(partial_trace(&lifted, self.dims(), &keep)?.scale_real(n as f64))
    }

    pub fn is_pure(&self) -> bool {
        self.matrix().rank() <= 1
    }

    pub fn cut_rank(&self, cut: &Bipartition) -> Result<ChoiCutRank> {
        let ranks = self
            .vectors
            .iter()
            .filter_map(|v| normalized(v))
            .map(|v| schmidt_coefficients_across(&v, self.dims(), cut).map(|c| numerical_rank(&c)))
            .collect::<Result<Vec<_>>>()?;
        let exact = self.is_pure();
        if exact && self.vectors.len() > 1 {
            // A single pure state hidden behind several proportional Kraus operators.
            let top = self.matrix().eigh();
            let v = top.vector(top.values.len() - 1);
            let c = schmidt_coefficients_across(&v, self.dims(), cut)?;
            return Ok(ChoiCutRank {
                rank: numerical_rank(&c),
                exact,
            });
        }
        Ok(ChoiCutRank {
            rank: ranks.into_iter().max().unwrap_or(0),
            exact,
        })
    }
}

fn check_effect(e: &ComplexMatrix, j: usize, dims: &Dims) -> Result<()> {
    dims.check_matrix(e).map_err(|err| err.in_field(&format!("effects[{j}]")))?;
    if !e.is_hermitian(HERMITIAN_TOL) {
        return Err(Error::InvalidArgument(format!("effects[{j}] is not Hermitian")));
    }
    let min = e.min_eigenvalue();
    if min < -PSD_TOL {
        return Err(Error::InvalidArgument(format!(
            "effects[{j}] has negative eigenvalue {min:.3e}"
        )));
    }
    Ok(())
}

/// `rho -> sum_j Tr(E_j rho) rho_j`.
///
/// Kraus operators are `sqrt(r_i e_m) |v_i><f_m|` built from the eigenbases
/// of each output `rho_j = sum r_i |v_i><v_i|` and effect
/// `E_j = sum e_m |f_m><f_m|`.
pub fn measurement_channel(
    effects: Vec<ComplexMatrix>,
    outputs: Vec<DensityMatrix>,
) -> Result<KrausChannel> {
    if effects.is_empty() || effects.len() != outputs.len() {
        return Err(Error::InvalidArgument(format!(
            "{} effects for {} outputs",
            effects.len(),
            outputs.len()
        )));
    }
    let dims = outputs[0].dims().clone();
    for (j, out) in outputs.iter().enumerate() {
        if out.dims() != &dims {
            return Err(Error::DimensionMismatch(format!(
                "outputs[{j}] has dims {}, expected {dims}",
                out.dims()
            )));
        }
        if out.is_subnormalized() {
            return Err(Error::InvalidArgument(format!("outputs[{j}] is not unit trace")));
        }
    }
    for (j, e) in effects.iter().enumerate() {
        check_effect(e, j, &dims)?;
    }
    let n = dims.total();
    let total = effects
        .iter()
        .fold(ComplexMatrix::zeros(n, n), |acc, e| &acc + e);
    let defect = total.max_abs_diff(&ComplexMatrix::identity(n));
    if defect > COMPLETENESS_TOL {
        return Err(Error::IncompletePovm(defect));
    }

    let mut kraus = Vec::new();
    for (e, out) in effects.iter().zip(&outputs) {
        let ee = e.eigh();
        let oe = out.matrix().eigh();
        for (i, &r) in oe.values.iter().enumerate() {
            for (m, &w) in ee.values.iter().enumerate() {
                let weight = r.max(0.0) * w.max(0.0);
                if weight > WEIGHT_CUTOFF {
                    kraus.push(
                        ComplexMatrix::outer(&oe.vector(i), &ee.vector(m)).scale_real(weight.sqrt()),
                    );
                }
            }
        }
    }
    let mut ch = KrausChannel::new(kraus, dims, "measurement")?;
    ch.closed_form = Some(ClosedForm::Measurement {
        effects,
        outputs: outputs.iter().map(|o| o.matrix().clone()).collect(),
    });
    Ok(ch)
}

/// `rho -> sum_a p_a U_a rho U_a^dagger`.
pub fn random_unitary_channel(
    unitaries: Vec<ComplexMatrix>,
    probabilities: &[f64],
    dims: Dims,
) -> Result<KrausChannel> {
    if unitaries.len() != probabilities.len() || unitaries.is_empty() {
        return Err(Error::BadProbabilities(format!(
            "{} probabilities for {} unitaries",
            probabilities.len(),
            unitaries.len()
        )));
    }
    if let Some(p) = probabilities.iter().find(|&&p| p.is_nan() || p < 0.0) {
        return Err(Error::BadProbabilities(format!("negative entry {p}")));
    }
    let sum: f64 = probabilities.iter().sum();
    if (sum - 1.0).abs() > COMPLETENESS_TOL {
        return Err(Error::BadProbabilities(format!("entries sum to {sum}")));
    }
    for (index, u) in unitaries.iter().enumerate() {
        dims.check_matrix(u).map_err(|e| e.in_field(&format!("unitaries[{index}]")))?;
        let deviation = u.unitarity_defect();
        if deviation > COMPLETENESS_TOL {
            return Err(Error::NotUnitary { index, deviation });
        }
    }
    let kraus = unitaries
        .iter()
        .zip(probabilities)
        .filter(|(_, &p)| p > 0.0)
        .map(|(u, &p)| u.scale_real(p.sqrt()))
        .collect();
    KrausChannel::new(kraus, dims, "random_unitary")
}

/// `rho -> Tr(phi+_k rho)|psi><psi| + Tr((1 - phi+_k) rho) I/d^2` with
/// `|psi> = sum_b lambda_b |bb>`.
pub fn example1_channel(k: usize, d: usize, schmidt_coeffs: &[f64]) -> Result<KrausChannel> {
    if k < 2 || k > d {
        return Err(Error::InvalidArgument(format!("need 2 <= k <= d, got k={k}, d={d}")));
    }
    validate_schmidt_coefficients(schmidt_coeffs, d)?;
    let phi = max_entangled(k, d)?.projector();
    let dims = Dims::qudits(d);
    let n = d * d;
    let psi = schmidt_form_state(schmidt_coeffs)?;
    let effects = vec![phi.clone(), &ComplexMatrix::identity(n) - &phi];
    let outputs = vec![psi.density(), DensityMatrix::maximally_mixed(dims)];
    Ok(measurement_channel(effects, outputs)?.with_label("example1"))
}

/// Positive, non-increasing, unit-norm coefficient vector of length `d`.
pub fn validate_schmidt_coefficients(coeffs: &[f64], d: usize) -> Result<()> {
    if coeffs.len() != d {
        return Err(Error::InvalidArgument(format!(
            "expected {d} Schmidt coefficients, got {}",
            coeffs.len()
        )));
    }
    if coeffs.iter().any(|&c| c.is_nan() || c <= 0.0) {
        return Err(Error::InvalidArgument("Schmidt coefficients must be positive".into()));
    }
    if coeffs.windows(2).any(|w| w[1] > w[0]) {
        return Err(Error::InvalidArgument("Schmidt coefficients must be descending".into()));
    }
    let norm: f64 = coeffs.iter().map(|c| c * c).sum();
    if (norm - 1.0).abs() > COMPLETENESS_TOL {
        return Err(Error::InvalidArgument(format!(
            "squared Schmidt coefficients sum to {norm}"
        )));
    }
    Ok(())
}

/// `rho -> p rho + (1 - p) Tr(rho) sigma`.
pub fn mixing_channel(p: f64, sigma: &DensityMatrix) -> Result<KrausChannel> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidArgument(format!("mixing probability {p} outside [0, 1]")));
    }
    if sigma.is_subnormalized() {
        return Err(Error::InvalidArgument("sigma is not unit trace".into()));
    }
    let dims = sigma.dims().clone();
    let n = dims.total();
    let mut kraus = Vec::new();
    if p > 0.0 {
        kraus.push(ComplexMatrix::identity(n).scale_real(p.sqrt()));
    }
    let eig = sigma.matrix().eigh();
    for (i, &s) in eig.values.iter().enumerate() {
        let weight = (1.0 - p) * s.max(0.0);
        if weight > WEIGHT_CUTOFF {
            let v = eig.vector(i);
            for b in 0..n {
                let mut e = vec![ZERO; n];
                e[b] = C64::new(1.0, 0.0);
                kraus.push(ComplexMatrix::outer(&v, &e).scale_real(weight.sqrt()));
            }
        }
    }
    let mut ch = KrausChannel::new(kraus, dims, "mixing")?;
    ch.closed_form = Some(ClosedForm::Mixing {
        p,
        sigma: sigma.matrix().clone(),
    });
    Ok(ch)
}

/// `rho -> Tr(rho) sigma`.
pub fn constant_channel(sigma: &DensityMatrix) -> Result<KrausChannel> {
    Ok(mixing_channel(0.0, sigma)?.with_label("constant"))
}
