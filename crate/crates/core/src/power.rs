//! Structural classification of Kraus operators, channel Schmidt measures and
//! non-entangling certificates.

use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::channels::{validate_schmidt_coefficients, KrausChannel};
use crate::error::{Error, Result};
use crate::json;
use crate::linalg::{
    normalized, numerical_rank, operator_schmidt, swap_operator, ComplexMatrix, Dims, C64, ZERO,
};
use crate::optimize::{min_over_products, OptimizerConfig};
use crate::states::{
    max_entangled, random_product, random_unitary, schmidt_coefficients_across,
    schmidt_of_vector, seeded_rng, Bipartition, ProductStateParam, PureState,
};
use crate::witness::{is_witness, ppt_witness_from_pure, Verdict, Witness, TOL_WITNESS};

/// A probe counts as entangling when the normalized image has second Schmidt
/// coefficient above this.
pub const PROBE_SCHMIDT_TOL: f64 = 1e-3;

/// Threshold slack for the Example-1 bound.
pub const THRESHOLD_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnalysisConfig {
    pub optimizer: OptimizerConfig,
    /// Random product inputs per probed Kraus operator.
    pub probes: usize,
    /// Local-ascent steps refining the best probe.
    pub ascent_steps: usize,
    /// Random unitary remixings of the Kraus list.
    pub remixings: usize,
}

impl Default for AnalysisConfig {
    fn default() -> Self {
        AnalysisConfig {
            optimizer: OptimizerConfig::default(),
            probes: 200,
            ascent_steps: 10,
            remixings: 256,
        }
    }
}

impl AnalysisConfig {
    pub fn seed(&self) -> u64 {
        self.optimizer.seed
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KrausForm {
    TensorProduct,
    PermutationLocal,
    Rank1Product,
    Unknown,
}

/// A product input whose image under one Kraus operator is entangled.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbeHit {
    pub input: ProductStateParam,
    /// Normalized image `M|chi> / |M|chi>|`.
    pub image: Vec<C64>,
    /// Largest second Schmidt coefficient over single-party cuts.
    pub second_coefficient: f64,
}

#[derive(Debug, Clone)]
pub struct KrausStructure {
    pub form: KrausForm,
    /// Per-party operators for the tensor and permutation-local forms.
    pub factors: Option<Vec<ComplexMatrix>>,
    /// Party permutation for the permutation-local form.
    pub permutation: Option<Vec<usize>>,
    pub witness_violation: Option<ProbeHit>,
}

impl KrausStructure {
    fn known(form: KrausForm, factors: Option<Vec<ComplexMatrix>>, permutation: Option<Vec<usize>>) -> Self {
        KrausStructure {
            form,
            factors,
            permutation,
            witness_violation: None,
        }
    }

    pub fn is_product_preserving(&self) -> bool {
        self.form != KrausForm::Unknown
    }
}

fn tensor_factors(m: &ComplexMatrix, dims: &Dims) -> Result<Option<Vec<ComplexMatrix>>> {
    let os = operator_schmidt(m, dims)?;
    Ok(match os.rank() {
        0 => {
            let (d1, d2) = dims.bipartite()?;
            Some(vec![ComplexMatrix::zeros(d1, d1), ComplexMatrix::zeros(d2, d2)])
        }
        1 => Some(vec![os.left[0].scale_real(os.singular[0]), os.right[0].clone()]),
        _ => None,
    })
}

/// Exact structural test without probing; `None` if no product-preserving
/// form applies.
pub fn classify_structural(m: &ComplexMatrix, dims: &Dims) -> Result<Option<KrausStructure>> {
    let (d1, d2) = dims.bipartite()?;
    dims.check_matrix(m)?;
    if let Some(f) = tensor_factors(m, dims)? {
        return Ok(Some(KrausStructure::known(KrausForm::TensorProduct, Some(f), None)));
    }
    if d1 == d2 {
        // M = (A (x) B) V  <=>  M V^dagger is a simple tensor.
        let candidate = m * &swap_operator(d1);
        if let Some(f) = tensor_factors(&candidate, dims)? {
            return Ok(Some(KrausStructure::known(
                KrausForm::PermutationLocal,
                Some(f),
                Some(vec![1, 0]),
            )));
        }
    }
    let svd = m.svd();
    if numerical_rank(&svd.singular) == 1 {
        let u = svd.u.column(0);
        let c = schmidt_of_vector(&u, d1, d2).coefficients;
        if numerical_rank(&c) == 1 {
            return Ok(Some(KrausStructure::known(KrausForm::Rank1Product, None, None)));
        }
    }
    Ok(None)
}

/// Second Schmidt coefficient of `M|chi>` (normalized), maximized over
/// single-party cuts.
fn probe_score(m: &ComplexMatrix, dims: &Dims, chi: &ProductStateParam) -> Option<(f64, Vec<C64>)> {
    let image = normalized(&m.mul_vec(&chi.to_vector()))?;
    let parties = dims.parties();
    let cuts = if parties == 2 { 1 } else { parties };
    let mut score = 0.0f64;
    for i in 0..cuts {
        let cut = Bipartition::new(vec![i], parties).ok()?;
        let c = schmidt_coefficients_across(&image, dims, &cut).ok()?;
        score = score.max(c.get(1).copied().unwrap_or(0.0));
    }
    Some((score, image))
}

fn perturb<R: Rng>(chi: &ProductStateParam, scale: f64, rng: &mut R) -> ProductStateParam {
    let parties = chi
        .parties()
        .iter()
        .map(|v| {
            let w: Vec<C64> = v
                .iter()
                .map(|z| {
                    z + C64::new(rng.sample::<f64, _>(StandardNormal), rng.sample::<f64, _>(StandardNormal))
                        * scale
                })
                .collect();
            normalized(&w).unwrap_or_else(|| v.clone())
        })
        .collect();
    ProductStateParam::new(parties).expect("normalized parties")
}

/// Random product inputs followed by local ascent on the second Schmidt
/// coefficient of the image.
pub fn probe_kraus(m: &ComplexMatrix, dims: &Dims, config: &AnalysisConfig) -> Option<ProbeHit> {
    let mut rng = seeded_rng(config.seed());
    let mut best: Option<(f64, ProductStateParam, Vec<C64>)> = None;
    for _ in 0..config.probes {
        let chi = random_product(dims, &mut rng);
        if let Some((s, image)) = probe_score(m, dims, &chi) {
            if best.as_ref().is_none_or(|b| s > b.0) {
                best = Some((s, chi, image));
            }
        }
    }
    let (mut score, mut input, mut image) = best?;
    let mut scale = 0.1;
    for _ in 0..config.ascent_steps {
        let trial = perturb(&input, scale, &mut rng);
        match probe_score(m, dims, &trial) {
            Some((s, img)) if s > score => {
                score = s;
                input = trial;
                image = img;
            }
            _ => scale *= 0.5,
        }
    }
    (score > PROBE_SCHMIDT_TOL).then_some(ProbeHit {
        input,
        image,
        second_coefficient: score,
    })
}

/// Classifies `m` into a product-preserving form, falling back to a probe for
/// entangled images. More than two parties is probe-only.
pub fn classify_kraus(m: &ComplexMatrix, dims: &Dims, config: &AnalysisConfig) -> Result<KrausStructure> {
    dims.check_matrix(m)?;
    if dims.parties() == 2 {
        if let Some(s) = classify_structural(m, dims)? {
            return Ok(s);
        }
    } else {
        log::warn!("classify_kraus on {} parties: probe only", dims.parties());
    }
    Ok(KrausStructure {
        form: KrausForm::Unknown,
        factors: None,
        permutation: None,
        witness_violation: probe_kraus(m, dims, config),
    })
}

#[derive(Debug, Clone)]
pub struct RankSearch {
    /// Lower bound on `max r(M|chi>)` over products.
    pub rank: usize,
    pub input: Option<ProductStateParam>,
}

/// `max_chi r(M|chi>)` by random product inputs; `1` for structurally
/// product-preserving `M`.
pub fn channel_schmidt_rank_rank1(
    m: &ComplexMatrix,
    dims: &Dims,
    config: &AnalysisConfig,
) -> Result<RankSearch> {
    let (d1, d2) = dims.bipartite()?;
    if classify_structural(m, dims)?.is_some() {
        return Ok(RankSearch { rank: 1, input: None });
    }
    let cap = d1.min(d2);
    let mut rng = seeded_rng(config.seed());
    let mut best = RankSearch { rank: 0, input: None };
    for _ in 0..config.probes.max(1) {
        let chi = random_product(dims, &mut rng);
        if let Some(image) = normalized(&m.mul_vec(&chi.to_vector())) {
            let r = numerical_rank(&schmidt_of_vector(&image, d1, d2).coefficients);
            if r > best.rank {
                best = RankSearch { rank: r, input: Some(chi) };
                if r == cap {
                    break;
                }
            }
        }
    }
    best.rank = best.rank.max(1);
    Ok(best)
}

#[derive(Debug, Clone)]
pub struct ChannelSchmidtBounds {
    pub lower: usize,
    pub upper: usize,
    pub method: String,
    /// Kraus list achieving `upper`.
    pub certificate: Option<Vec<ComplexMatrix>>,
}

/// `|phi>` if every Kraus operator has the form `|phi><v_j|`.
pub fn replacement_target(ch: &KrausChannel) -> Option<Vec<C64>> {
    let n = ch.dims().total();
    let k = ch.kraus().len();
    let stacked = ComplexMatrix::from_fn(n, n * k, |i, j| ch.kraus()[j / n][(i, j % n)]);
    let svd = stacked.svd();
    (numerical_rank(&svd.singular) == 1).then(|| svd.u.column(0))
}

fn decomposition_rank(kraus: &[ComplexMatrix], dims: &Dims, config: &AnalysisConfig) -> Result<usize> {
    let mut worst = 1;
    for m in kraus {
        if m.frobenius_norm() < 1e-12 {
            continue;
        }
        worst = worst.max(channel_schmidt_rank_rank1(m, dims, config)?.rank);
    }
    Ok(worst)
}

fn random_remixing(ch: &KrausChannel, index: usize, config: &AnalysisConfig) -> Result<Vec<ComplexMatrix>> {
    let mut rng = seeded_rng(config.seed().wrapping_add(0x5EED).wrapping_add(index as u64));
    ch.remix(&random_unitary(ch.kraus().len(), &mut rng))
}

/// Bounds on the channel Schmidt number: exact for replacement channels,
/// otherwise the best max-rank over sampled Kraus decompositions.
pub fn channel_schmidt_number_bounds(
    ch: &KrausChannel,
    config: &AnalysisConfig,
) -> Result<ChannelSchmidtBounds> {
    let (d1, d2) = ch.dims().bipartite()?;
    if let Some(phi) = replacement_target(ch) {
        let r = numerical_rank(&schmidt_of_vector(&phi, d1, d2).coefficients);
        return Ok(ChannelSchmidtBounds {
            lower: r,
            upper: r,
            method: "replacement channel: exact Schmidt rank of the prepared state".into(),
            certificate: Some(ch.kraus().to_vec()),
        });
    }

    let mut candidates = vec![
        ("given Kraus list".to_string(), ch.kraus().to_vec()),
        ("canonical Choi decomposition".to_string(), ch.canonical_kraus()),
    ];
    let mut best: Option<(usize, String, Vec<ComplexMatrix>)> = None;
    for (name, kraus) in candidates.drain(..) {
        let r = decomposition_rank(&kraus, ch.dims(), config)?;
        if best.as_ref().is_none_or(|b| r < b.0) {
            best = Some((r, name, kraus));
        }
    }
    if best.as_ref().is_some_and(|b| b.0 > 1) && ch.kraus().len() > 1 {
        let remixed: Vec<(usize, usize)> = (0..config.remixings)
            .into_par_iter()
            .map(|i| {
                let kraus = random_remixing(ch, i, config)?;
                Ok((decomposition_rank(&kraus, ch.dims(), config)?, i))
            })
            .collect::<Result<Vec<_>>>()?;
        if let Some(&(r, i)) = remixed.iter().min_by_key(|(r, i)| (*r, *i)) {
            if r < best.as_ref().map_or(usize::MAX, |b| b.0) {
                best = Some((r, format!("random remixing #{i}"), random_remixing(ch, i, config)?));
            }
        }
    }
    let (upper, name, kraus) = best.expect("at least one decomposition");
    let lower = if upper >= 2
        && certify_stochastically_nonentangling(ch, config)?.verdict == CertVerdict::Entangling
    {
        2
    } else {
        1
    };
    Ok(ChannelSchmidtBounds {
        lower,
        upper,
        method: format!(
            "upper: minimum over {} decompositions (best: {name}); lower: {}",
            2 + if upper > 1 && ch.kraus().len() > 1 { config.remixings } else { 0 },
            if lower == 2 { "entangling certificate" } else { "trivial" }
        ),
        certificate: Some(kraus),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CertVerdict {
    StochasticallyNonentangling,
    Entangling,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StructureSummary {
    pub form: KrausForm,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub permutation: Option<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Evidence {
    Structures {
        decomposition: String,
        structures: Vec<StructureSummary>,
    },
    WitnessViolation {
        witness: String,
        value: f64,
    },
    KrausProbe {
        kraus_index: usize,
        second_schmidt_coefficient: f64,
    },
    None {
        note: String,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WitnessEvaluation {
    pub witness: String,
    pub min_value: f64,
    pub converged: bool,
    pub violated: bool,
}

/// Enough data to recompute the violating value from the channel.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Replay {
    pub witness_label: String,
    #[serde(with = "json::matrix")]
    pub witness: ComplexMatrix,
    /// Product input, one vector per party.
    #[serde(with = "json::vectors")]
    pub input: Vec<Vec<C64>>,
    /// When set, the witness is evaluated on the normalized image of this
    /// Kraus operator instead of the full channel output.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub kraus_index: Option<usize>,
    pub expected_value: f64,
}

impl Replay {
    pub fn evaluate(&self, ch: &KrausChannel) -> Result<f64> {
        let chi = ProductStateParam::new(self.input.clone())?.to_vector();
        ch.dims().check_matrix(&self.witness)?;
        if chi.len() != ch.dims().total() {
            return Err(Error::DimensionMismatch("replay input does not match channel".into()));
        }
        match self.kraus_index {
            Some(j) => {
                let m = ch.kraus().get(j).ok_or_else(|| {
                    Error::InvalidArgument(format!("replay Kraus index {j} out of range"))
                })?;
                let image = normalized(&m.mul_vec(&chi))
                    .ok_or_else(|| Error::Numerical("replay image vanishes".into()))?;
                Ok(self.witness.expectation(&image))
            }
            None => Ok(ch.dual_apply(&self.witness)?.expectation(&chi)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub channel: String,
    pub verdict: CertVerdict,
    pub evidence: Evidence,
    pub witness_evaluations: Vec<WitnessEvaluation>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub replay: Option<Replay>,
    pub tool_version: String,
}

impl Certificate {
    fn new(ch: &KrausChannel, verdict: CertVerdict, evidence: Evidence) -> Self {
        Certificate {
            channel: ch.label().to_string(),
            verdict,
            evidence,
            witness_evaluations: Vec::new(),
            replay: None,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct LabeledWitness {
    pub label: String,
    pub witness: Witness,
}

impl LabeledWitness {
    pub fn new(label: impl Into<String>, witness: Witness) -> Self {
        LabeledWitness {
            label: label.into(),
            witness,
        }
    }
}

/// `(I (x) X^a Z^b)|phi+>` for `a, b < d`.
pub fn generalized_bell_states(d: usize) -> Vec<(String, PureState)> {
    let phi = max_entangled(d, d).expect("d >= 2");
    let mut out = Vec::with_capacity(d * d);
    for a in 0..d {
        for b in 0..d {
            let mut v = vec![ZERO; d * d];
            for j in 0..d {
                let phase = C64::from_polar(1.0, 2.0 * std::f64::consts::PI * (b * j) as f64 / d as f64);
                v[j * d + (j + a) % d] = phi.amplitudes()[j * d + j] * phase;
            }
            out.push((format!("bell({a},{b})"), PureState::new(v, Dims::qudits(d)).expect("unit")));
        }
    }
    out
}

/// Shifted `phi+` witnesses, the swap, and PPT witnesses from (generalized)
/// Bell states. Empty unless the dims are `d x d`.
pub fn default_witness_family(dims: &Dims) -> Vec<LabeledWitness> {
    let d = match dims.bipartite() {
        Ok((a, b)) if a == b => a,
        _ => return Vec::new(),
    };
    let phi = max_entangled(d, d).expect("d >= 2").projector();
    let mut family = vec![
        LabeledWitness::new(
            "0.8*I - phi+",
            Witness::shifted(0.8, phi.clone(), dims.clone()).expect("PSD"),
        ),
        LabeledWitness::new(
            format!("(1/{d})*I - phi+"),
            Witness::shifted(1.0 / d as f64, phi, dims.clone()).expect("PSD"),
        ),
        LabeledWitness::new("swap", Witness::swap(d)),
    ];
    let bells: Vec<(String, PureState)> = if d == 2 {
        crate::states::bell_states()
            .all()
            .iter()
            .map(|(n, s)| (n.to_string(), (*s).clone()))
            .collect()
    } else {
        generalized_bell_states(d)
    };
    for (name, psi) in bells {
        let w = ppt_witness_from_pure(&psi).expect("Bell states are entangled");
        family.push(LabeledWitness::new(format!("ppt({name})"), w));
    }
    family
}

/// `min_chi <chi|Lambda*(W)|chi>`; entangling when negative, never a
/// non-entangling verdict.
pub fn detect_entangling(
    ch: &KrausChannel,
    w: &LabeledWitness,
    config: &AnalysisConfig,
) -> Result<Certificate> {
    if w.witness.dims() != ch.dims() {
        return Err(Error::DimensionMismatch(format!(
            "witness dims {} vs channel dims {}",
            w.witness.dims(),
            ch.dims()
        )));
    }
    if let Verdict::Violated(r) = is_witness(&w.witness, &config.optimizer) {
        return Err(Error::NotAWitness(r.value));
    }
    let dual = ch.dual_apply(w.witness.operator())?;
    let r = min_over_products(&dual, ch.dims(), &config.optimizer);
    let eval = WitnessEvaluation {
        witness: w.label.clone(),
        min_value: r.value,
        converged: r.converged,
        violated: r.value <= -TOL_WITNESS,
    };
    let mut cert = if eval.violated {
        let mut c = Certificate::new(
            ch,
            CertVerdict::Entangling,
            Evidence::WitnessViolation {
                witness: w.label.clone(),
                value: r.value,
            },
        );
        c.replay = Some(Replay {
            witness_label: w.label.clone(),
            witness: w.witness.operator().clone(),
            input: r.argument.parties().to_vec(),
            kraus_index: None,
            expected_value: r.value,
        });
        c
    } else {
        Certificate::new(
            ch,
            CertVerdict::Inconclusive,
            Evidence::None {
                note: format!("no violation of {}", w.label),
            },
        )
    };
    cert.witness_evaluations.push(eval);
    Ok(cert)
}

fn structural_decomposition(kraus: &[ComplexMatrix], dims: &Dims) -> Result<Option<Vec<StructureSummary>>> {
    let mut out = Vec::with_capacity(kraus.len());
    for m in kraus {
        match classify_structural(m, dims)? {
            Some(s) => out.push(StructureSummary {
                form: s.form,
                permutation: s.permutation,
            }),
            None => return Ok(None),
        }
    }
    Ok(Some(out))
}

/// Certificate with the default witness family only.
pub fn certify_stochastically_nonentangling(
    ch: &KrausChannel,
    config: &AnalysisConfig,
) -> Result<Certificate> {
    certify_with_witnesses(ch, &[], config)
}

/// Structural check over the given, canonical and remixed Kraus lists; then
/// the witnesses (`extra` first, then the default family); then single-Kraus
/// probes.
pub fn certify_with_witnesses(
    ch: &KrausChannel,
    extra: &[LabeledWitness],
    config: &AnalysisConfig,
) -> Result<Certificate> {
    let dims = ch.dims();
    dims.bipartite()?;

    for (name, kraus) in [
        ("given Kraus list", ch.kraus().to_vec()),
        ("canonical Choi decomposition", ch.canonical_kraus()),
    ] {
        if let Some(structures) = structural_decomposition(&kraus, dims)? {
            return Ok(Certificate::new(
                ch,
                CertVerdict::StochasticallyNonentangling,
                Evidence::Structures {
                    decomposition: name.into(),
                    structures,
                },
            ));
        }
    }
    if ch.kraus().len() > 1 {
        let found = (0..config.remixings).into_par_iter().find_map_first(|i| {
            let kraus = random_remixing(ch, i, config).ok()?;
            structural_decomposition(&kraus, dims).ok().flatten().map(|s| (i, s))
        });
        if let Some((i, structures)) = found {
            return Ok(Certificate::new(
                ch,
                CertVerdict::StochasticallyNonentangling,
                Evidence::Structures {
                    decomposition: format!("random remixing #{i}"),
                    structures,
                },
            ));
        }
    }

    let family: Vec<LabeledWitness> = extra
        .iter()
        .cloned()
        .chain(default_witness_family(dims))
        .collect();
    let mut evaluations = Vec::new();
    let mut first: Option<Certificate> = None;
    for w in &family {
        let cert = detect_entangling(ch, w, config)?;
        evaluations.extend(cert.witness_evaluations.iter().cloned());
        if first.is_none() && cert.verdict == CertVerdict::Entangling {
            first = Some(cert);
        }
    }
    if let Some(mut cert) = first {
        cert.witness_evaluations = evaluations;
        return Ok(cert);
    }

    for (j, m) in ch.kraus().iter().enumerate() {
        let s = classify_kraus(m, dims, config)?;
        if let Some(hit) = s.witness_violation {
            let (d1, d2) = dims.bipartite()?;
            let s1 = schmidt_of_vector(&hit.image, d1, d2).coefficients[0];
            let n = dims.total();
            let w = &ComplexMatrix::identity(n).scale_real(s1 * s1) - &ComplexMatrix::projector(&hit.image);
            let value = w.expectation(&hit.image);
            let mut cert = Certificate::new(
                ch,
                CertVerdict::Entangling,
                Evidence::KrausProbe {
                    kraus_index: j,
                    second_schmidt_coefficient: hit.second_coefficient,
                },
            );
            cert.replay = Some(Replay {
                witness_label: "s1^2*I - |image><image|".into(),
                witness: w,
                input: hit.input.parties().to_vec(),
                kraus_index: Some(j),
                expected_value: value,
            });
            cert.witness_evaluations = evaluations;
            return Ok(cert);
        }
    }

    let mut cert = Certificate::new(
        ch,
        CertVerdict::Inconclusive,
        Evidence::None {
            note: "no product-preserving decomposition found and no violation detected".into(),
        },
    );
    cert.witness_evaluations = evaluations;
    Ok(cert)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Example1Threshold {
    pub certified: bool,
    /// `lambda_0 lambda_1` after sorting and normalizing.
    pub product: f64,
    /// `(k - 1) / d^2`.
    pub bound: f64,
    /// `1 / (1 + d^2 lambda_0 lambda_1)`.
    pub p_max: f64,
    /// `1 / k`.
    pub effect_bound: f64,
}

/// Sufficient condition `lambda_0 lambda_1 <= (k-1)/d^2` for the Example-1
/// channel to be non-entangling. Coefficients are sorted descending and
/// renormalized first.
pub fn example1_threshold(k: usize, d: usize, schmidt_coeffs: &[f64]) -> Result<Example1Threshold> {
    if k < 2 || k > d {
        return Err(Error::InvalidArgument(format!("need 2 <= k <= d, got k={k}, d={d}")));
    }
    let mut c = schmidt_coeffs.to_vec();
    c.sort_by(|a, b| b.total_cmp(a));
    let norm = c.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm > 0.0 {
        c.iter_mut().for_each(|x| *x /= norm);
    }
    validate_schmidt_coefficients(&c, d)?;
    let product = c[0] * c[1];
    let d2 = (d * d) as f64;
    let bound = (k as f64 - 1.0) / d2;
    Ok(Example1Threshold {
        certified: product <= bound + THRESHOLD_SLACK,
        product,
        bound,
        p_max: 1.0 / (1.0 + d2 * product),
        effect_bound: 1.0 / k as f64,
    })
}

/// `Lambda*(W) >= 0` for every sampled witness. Sampling evidence only.
pub fn entanglement_annihilating_check(ch: &KrausChannel, witnesses: &[Witness]) -> Result<bool> {
    for w in witnesses {
        if ch.dual_apply(w.operator())?.min_eigenvalue() < -1e-10 {
            return Ok(false);
        }
    }
    Ok(true)
}
