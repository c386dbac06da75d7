//! Pure and mixed states, Schmidt decompositions, and seeded samplers.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Exp1, StandardNormal};

use crate::error::{Error, Result};
use crate::linalg::{
    self, kron_vec, normalized, numerical_rank, partial_transpose, permute_vector, ComplexMatrix,
    Dims, C64, HERMITIAN_TOL, ONE, ZERO,
};

pub const NORM_TOL: f64 = 1e-12;
pub const TRACE_TOL: f64 = 1e-10;
pub const PSD_TOL: f64 = 1e-10;

/// A state vector over a tensor-product space.
///
/// Vectors that are not unit-norm are allowed only when explicitly flagged,
/// e.g. the image of a product state under a single Kraus operator.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    amplitudes: Vec<C64>,
    dims: Dims,
    normalized: bool,
}

impl PureState {
    pub fn new(amplitudes: Vec<C64>, dims: Dims) -> Result<Self> {
        check_len(&amplitudes, &dims)?;
        let n = linalg::norm(&amplitudes);
        if (n - 1.0).abs() > NORM_TOL {
            return Err(Error::InvalidArgument(format!(
                "state norm {n} deviates from 1"
            )));
        }
        Ok(PureState {
            amplitudes,
            dims,
            normalized: true,
        })
    }

    /// Wrap a vector of arbitrary norm; the state is flagged non-normalized.
    pub fn unnormalized(amplitudes: Vec<C64>, dims: Dims) -> Result<Self> {
        check_len(&amplitudes, &dims)?;
        let normalized = (linalg::norm(&amplitudes) - 1.0).abs() <= NORM_TOL;
        Ok(PureState {
            amplitudes,
            dims,
            normalized,
        })
    }

    /// Rescale to unit norm. Fails on the zero vector.
    pub fn normalize(&self) -> Result<Self> {
        let amplitudes = normalized(&self.amplitudes)
            .ok_or_else(|| Error::Numerical("cannot normalize the zero vector".into()))?;
        Ok(PureState {
            amplitudes,
            dims: self.dims.clone(),
            normalized: true,
        })
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn dims(&self) -> &Dims {
        &self.dims
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    pub fn norm(&self) -> f64 {
        linalg::norm(&self.amplitudes)
    }

    pub fn projector(&self) -> ComplexMatrix {
        ComplexMatrix::projector(&self.amplitudes)
    }

    pub fn density(&self) -> DensityMatrix {
        DensityMatrix {
            matrix: self.projector(),
            dims: self.dims.clone(),
            subnormalized: !self.normalized,
        }
    }

    pub fn overlap(&self, other: &PureState) -> C64 {
        linalg::inner(&self.amplitudes, &other.amplitudes)
    }
}

fn check_len(v: &[C64], dims: &Dims) -> Result<()> {
    if v.len() != dims.total() {
        return Err(Error::DimensionMismatch(format!(
            "{} amplitudes for dims {dims}",
            v.len()
        )));
    }
    Ok(())
}

/// Unit-trace positive semidefinite operator (or a flagged sub-normalized one).
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
    dims: Dims,
    subnormalized: bool,
}

impl DensityMatrix {
    pub fn new(matrix: ComplexMatrix, dims: Dims) -> Result<Self> {
        let rho = Self::validated(matrix, dims)?;
        let tr = rho.trace();
        if (tr - 1.0).abs() > TRACE_TOL {
            return Err(Error::InvalidArgument(format!("trace {tr} deviates from 1")));
        }
        Ok(rho)
    }

    /// Accept a PSD operator with trace at most one.
    pub fn subnormalized(matrix: ComplexMatrix, dims: Dims) -> Result<Self> {
        let mut rho = Self::validated(matrix, dims)?;
        let tr = rho.trace();
        if tr > 1.0 + TRACE_TOL {
            return Err(Error::InvalidArgument(format!("trace {tr} exceeds 1")));
        }
        rho.subnormalized = (tr - 1.0).abs() > TRACE_TOL;
        Ok(rho)
    }

    fn validated(matrix: ComplexMatrix, dims: Dims) -> Result<Self> {
        dims.check_matrix(&matrix)?;
        let defect = matrix.hermiticity_defect();
        if defect > HERMITIAN_TOL {
            return Err(Error::InvalidArgument(format!(
                "density matrix is not Hermitian (defect {defect:.3e})"
            )));
        }
        let min = matrix.min_eigenvalue();
        if min < -PSD_TOL {
            return Err(Error::InvalidArgument(format!(
                "density matrix has negative eigenvalue {min:.3e}"
            )));
        }
        Ok(DensityMatrix {
            matrix,
            dims,
            subnormalized: false,
        })
    }

    /// Skip validation; the caller guarantees the invariants up to rounding.
    pub(crate) fn from_parts(matrix: ComplexMatrix, dims: Dims) -> Self {
        let tr = matrix.trace().re;
        DensityMatrix {
            matrix,
            dims,
            subnormalized: (tr - 1.0).abs() > TRACE_TOL,
        }
    }

    pub fn maximally_mixed(dims: Dims) -> Self {
        let n = dims.total();
        DensityMatrix {
            matrix: ComplexMatrix::identity(n).scale_real(1.0 / n as f64),
            dims,
            subnormalized: false,
        }
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn dims(&self) -> &Dims {
        &self.dims
    }

    pub fn is_subnormalized(&self) -> bool {
        self.subnormalized
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace().re
    }

    /// `Tr(O rho)`, real part.
    pub fn expectation(&self, obs: &ComplexMatrix) -> f64 {
        obs.trace_product(&self.matrix).re
    }

    /// Smallest eigenvalue of the partial transpose on the second party.
    pub fn partial_transpose_min_eigenvalue(&self) -> Result<f64> {
        Ok(partial_transpose(&self.matrix, &self.dims, 1)?.min_eigenvalue())
    }

    /// Positive partial transpose test at tolerance `PSD_TOL`.
    pub fn is_ppt(&self) -> Result<bool> {
        Ok(self.partial_transpose_min_eigenvalue()? >= -PSD_TOL)
    }
}

/// Per-party unit vectors `|chi_1> (x) ... (x) |chi_n>`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProductStateParam {
    parties: Vec<Vec<C64>>,
}

impl ProductStateParam {
    pub fn new(parties: Vec<Vec<C64>>) -> Result<Self> {
        if parties.is_empty() {
            return Err(Error::InvalidArgument("product state without parties".into()));
        }
        for (i, v) in parties.iter().enumerate() {
            let n = linalg::norm(v);
            if (n - 1.0).abs() > NORM_TOL {
                return Err(Error::InvalidArgument(format!(
                    "party {i} vector has norm {n}"
                )));
            }
        }
        Ok(ProductStateParam { parties })
    }

    /// Normalizes each party vector; used by the optimizer after updates.
    pub(crate) fn from_unnormalized(parties: Vec<Vec<C64>>) -> Self {
        ProductStateParam {
            parties: parties
                .into_iter()
                .map(|v| normalized(&v).expect("nonzero party vector"))
                .collect(),
        }
    }

    pub fn parties(&self) -> &[Vec<C64>] {
        &self.parties
    }

    pub fn party(&self, i: usize) -> &[C64] {
        &self.parties[i]
    }

    pub(crate) fn set_party(&mut self, i: usize, v: Vec<C64>) {
        self.parties[i] = v;
    }

    pub fn dims(&self) -> Dims {
        Dims::new(self.parties.iter().map(Vec::len).collect()).expect("party dims >= 2")
    }

    pub fn to_vector(&self) -> Vec<C64> {
        self.parties
            .iter()
            .skip(1)
            .fold(self.parties[0].clone(), |acc, v| kron_vec(&acc, v))
    }

    pub fn to_state(&self) -> PureState {
        PureState {
            amplitudes: self.to_vector(),
            dims: self.dims(),
            normalized: true,
        }
    }
}

/// Two non-empty, disjoint blocks covering all parties (0-based indices).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bipartition {
    left: Vec<usize>,
    right: Vec<usize>,
}

impl Bipartition {
    pub fn new(left: Vec<usize>, parties: usize) -> Result<Self> {
        let mut left = left;
        left.sort_unstable();
        left.dedup();
        if let Some(&p) = left.iter().find(|&&p| p >= parties) {
            return Err(Error::InvalidCut(format!(
                "party {p} out of range for {parties} parties"
            )));
        }
        let right: Vec<usize> = (0..parties).filter(|p| !left.contains(p)).collect();
        if left.is_empty() || right.is_empty() {
            return Err(Error::InvalidCut("both blocks must be non-empty".into()));
        }
        Ok(Bipartition { left, right })
    }

    /// The `{0} : {1}` cut of a bipartite system.
    pub fn first_party() -> Self {
        Bipartition {
            left: vec![0],
            right: vec![1],
        }
    }

    pub fn left(&self) -> &[usize] {
        &self.left
    }

    pub fn right(&self) -> &[usize] {
        &self.right
    }
}

#[derive(Debug, Clone)]
pub struct SchmidtDecomposition {
    /// Descending, non-negative.
    pub coefficients: Vec<f64>,
    pub left: Vec<Vec<C64>>,
    pub right: Vec<Vec<C64>>,
}

impl SchmidtDecomposition {
    pub fn rank(&self) -> usize {
        numerical_rank(&self.coefficients)
    }

    pub fn reconstruct(&self) -> Vec<C64> {
        let n = self.left[0].len() * self.right[0].len();
        let mut out = vec![ZERO; n];
        for ((c, l), r) in self.coefficients.iter().zip(&self.left).zip(&self.right) {
            for (o, x) in out.iter_mut().zip(kron_vec(l, r)) {
                *o += x * c;
            }
        }
        out
    }
}

/// Schmidt decomposition of a vector on `dl x dr` via the SVD of its
/// reshaped amplitude matrix.
pub fn schmidt_of_vector(v: &[C64], dl: usize, dr: usize) -> SchmidtDecomposition {
    let m = ComplexMatrix::from_fn(dl, dr, |i, j| v[i * dr + j]);
    let svd = m.svd();
    let k = svd.singular.len();
    SchmidtDecomposition {
        coefficients: svd.singular,
        left: (0..k).map(|t| svd.u.column(t)).collect(),
        right: (0..k).map(|t| svd.v_adj.row(t)).collect(),
    }
}

pub fn schmidt_decompose(psi: &PureState) -> Result<SchmidtDecomposition> {
    let (d1, d2) = psi.dims.bipartite()?;
    Ok(schmidt_of_vector(&psi.amplitudes, d1, d2))
}

/// Schmidt coefficients of an arbitrary vector across a cut.
pub fn schmidt_coefficients_across(v: &[C64], dims: &Dims, cut: &Bipartition) -> Result<Vec<f64>> {
    let order: Vec<usize> = cut.left.iter().chain(&cut.right).copied().collect();
    if order.len() != dims.parties() {
        return Err(Error::InvalidCut(format!(
            "cut covers {} parties, state has {}",
            order.len(),
            dims.parties()
        )));
    }
    let (w, _) = permute_vector(v, dims, &order)?;
    let dl: usize = cut.left.iter().map(|&p| dims.get(p)).product();
    let dr = dims.total() / dl;
    Ok(schmidt_of_vector(&w, dl, dr).coefficients)
}

pub fn schmidt_rank(psi: &PureState, cut: &Bipartition) -> Result<usize> {
    Ok(numerical_rank(&schmidt_coefficients_across(
        &psi.amplitudes,
        &psi.dims,
        cut,
    )?))
}

/// `(1/sqrt k) sum_{a<k} |aa>` embedded in `d x d`.
pub fn max_entangled(k: usize, d: usize) -> Result<PureState> {
    if d < 2 {
        return Err(Error::DimensionMismatch(format!("local dimension {d} below 2")));
    }
    if k == 0 || k > d {
        return Err(Error::DimensionMismatch(format!(
            "Schmidt rank {k} not in 1..={d}"
        )));
    }
    if k == 1 {
        log::warn!("max_entangled with k = 1 is the product state |00>");
    }
    let amp = C64::new(1.0 / (k as f64).sqrt(), 0.0);
    let mut v = vec![ZERO; d * d];
    for a in 0..k {
        v[a * d + a] = amp;
    }
    PureState::new(v, Dims::qudits(d))
}

#[derive(Debug, Clone)]
pub struct BellStates {
    pub phi_plus: PureState,
    pub phi_minus: PureState,
    pub psi_plus: PureState,
    pub psi_minus: PureState,
}

impl BellStates {
    pub fn all(&self) -> [(&'static str, &PureState); 4] {
        [
            ("phi_plus", &self.phi_plus),
            ("phi_minus", &self.phi_minus),
            ("psi_plus", &self.psi_plus),
            ("psi_minus", &self.psi_minus),
        ]
    }
}

pub fn bell_states() -> BellStates {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let make = |a: [f64; 4]| {
        PureState::new(
            a.iter().map(|&x| C64::new(x * s, 0.0)).collect(),
            Dims::qudits(2),
        )
        .expect("Bell states are normalized")
    };
    BellStates {
        phi_plus: make([1.0, 0.0, 0.0, 1.0]),
        phi_minus: make([1.0, 0.0, 0.0, -1.0]),
        psi_plus: make([0.0, 1.0, 1.0, 0.0]),
        psi_minus: make([0.0, 1.0, -1.0, 0.0]),
    }
}

/// Generator used by every seeded sampler in the crate.
pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform point on the unit sphere of `C^d`.
pub fn random_unit_vector<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Vec<C64> {
    loop {
        let v: Vec<C64> = (0..d)
            .map(|_| C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
            .collect();
        if let Some(u) = normalized(&v) {
            return u;
        }
    }
}

pub fn random_product<R: Rng + ?Sized>(dims: &Dims, rng: &mut R) -> ProductStateParam {
    ProductStateParam {
        parties: dims
            .as_slice()
            .iter()
            .map(|&d| random_unit_vector(d, rng))
            .collect(),
    }
}

pub fn random_product_state(dims: &Dims, seed: u64) -> ProductStateParam {
    random_product(dims, &mut seeded_rng(seed))
}

/// Haar-random pure state on the full space.
pub fn random_pure_state<R: Rng + ?Sized>(dims: &Dims, rng: &mut R) -> PureState {
    PureState {
        amplitudes: random_unit_vector(dims.total(), rng),
        dims: dims.clone(),
        normalized: true,
    }
}

/// Random bipartite pure state with Schmidt rank exactly `r` (generically).
pub fn random_state_with_schmidt_rank<R: Rng + ?Sized>(
    dims: &Dims,
    r: usize,
    rng: &mut R,
) -> Result<PureState> {
    let (d1, d2) = dims.bipartite()?;
    if r == 0 || r > d1.min(d2) {
        return Err(Error::InvalidArgument(format!(
            "Schmidt rank {r} impossible on {dims}"
        )));
    }
    let u1 = random_unitary(d1, rng);
    let u2 = random_unitary(d2, rng);
    let weights: Vec<f64> = (0..r).map(|_| rng.random::<f64>() + 0.05).collect();
    let total: f64 = weights.iter().map(|w| w * w).sum::<f64>().sqrt();
    let mut v = vec![ZERO; d1 * d2];
    for (t, w) in weights.iter().enumerate() {
        let term = kron_vec(&u1.column(t), &u2.column(t));
        for (o, x) in v.iter_mut().zip(term) {
            *o += x * (w / total);
        }
    }
    PureState::new(v, dims.clone())
}

pub fn random_unitary<R: Rng + ?Sized>(d: usize, rng: &mut R) -> ComplexMatrix {
    let g = ComplexMatrix::from_fn(d, d, |_, _| {
        C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    });
    g.qr_unitary()
}

/// Convex mixture of `terms` random product projectors with flat-Dirichlet
/// weights.
pub fn random_separable(dims: &Dims, terms: usize, seed: u64) -> Result<DensityMatrix> {
    if terms == 0 {
        return Err(Error::InvalidArgument("at least one term required".into()));
    }
    let mut rng = seeded_rng(seed);
    let raw: Vec<f64> = (0..terms).map(|_| rng.sample::<f64, _>(Exp1)).collect();
    let total: f64 = raw.iter().sum();
    let n = dims.total();
    let mut m = ComplexMatrix::zeros(n, n);
    for w in raw {
        let chi = random_product(dims, &mut rng).to_vector();
        m = &m + &ComplexMatrix::projector(&chi).scale_real(w / total);
    }
    Ok(DensityMatrix::from_parts(m.hermitian_part(), dims.clone()))
}

/// `sum_b lambda_b |bb>` on `d x d`.
pub fn schmidt_form_state(coefficients: &[f64]) -> Result<PureState> {
    let d = coefficients.len();
    let mut v = vec![ZERO; d * d];
    for (b, &l) in coefficients.iter().enumerate() {
        v[b * d + b] = ONE * l;
    }
    PureState::new(v, Dims::qudits(d))
}
