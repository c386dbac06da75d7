//! Acceptance criteria, one PASS/FAIL line each.
//!
//! Runs without the libtest harness so the lines show up in plain
//! `cargo test` output.

use std::error::Error as StdError;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use entpow::channels::{
    constant_channel, example1_channel, measurement_channel, mixing_channel, KrausChannel,
};
use entpow::linalg::{kron, kron_vec, numerical_rank, partial_trace, swap_operator, ComplexMatrix, Dims, C64};
use entpow::optimize::{min_over_products, OptimizerConfig};
use entpow::power::{
    channel_schmidt_number_bounds, channel_schmidt_rank_rank1, classify_kraus,
    default_witness_family, example1_threshold, AnalysisConfig, KrausForm,
};
use entpow::scan::{run_scan, Engine};
use entpow::scenarios::Scenario;
use entpow::states::{
    max_entangled, random_product, random_pure_state, random_separable,
    random_state_with_schmidt_rank, random_unit_vector, random_unitary, schmidt_of_vector,
    seeded_rng, DensityMatrix, PureState,
};
use entpow::witness::{lambda_min, mixing_dual_shift, schmidt_class_max, Witness};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

type Check = Result<String, Box<dyn StdError>>;
type Criterion = (&'static str, fn() -> Check);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        #[allow(clippy::neg_cmp_op_on_partial_ord)]
        let failed = !$cond;
        if failed {
            return Err(format!($($msg)+).into());
        }
    };
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let t = Instant::now();
    let out = f();
    (out, t.elapsed())
}

fn ginibre(n: usize, rng: &mut ChaCha8Rng) -> ComplexMatrix {
    ComplexMatrix::from_fn(n, n, |_, _| {
        C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    })
}

fn random_psd(n: usize, rng: &mut ChaCha8Rng) -> ComplexMatrix {
    let g = ginibre(n, rng);
    let m = &g * &g.adjoint();
    m.scale_real(1.0 / m.trace().re).hermitian_part()
}

fn schmidt_rank_of(v: &[C64], d1: usize, d2: usize) -> Option<usize> {
    let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if n < 1e-12 {
        return None;
    }
    let w: Vec<C64> = v.iter().map(|z| z / n).collect();
    Some(numerical_rank(&schmidt_of_vector(&w, d1, d2).coefficients))
}

fn ac1_fig3() -> Check {
    let step = 0.01;
    let ((grid, csv), elapsed) = timed(|| {
        let g = run_scan(&Scenario::Fig3, step, Engine::ClosedForm, &OptimizerConfig::default());
        let csv = g.as_ref().map(|g| g.to_csv()).unwrap_or_default();
        (g, csv)
    });
    let grid = grid?;
    ensure!(elapsed < Duration::from_secs(10), "closed-form scan took {elapsed:?}");
    ensure!(grid.rows.len() == 101 * 101, "grid has {} rows", grid.rows.len());
    ensure!(csv.starts_with("p,q,min_value\n"), "bad CSV header");
    ensure!(grid.value_at(0.0, 0.0) == Some(0.75), "(0,0) -> {:?}", grid.value_at(0.0, 0.0));

    // Sign structure against the derived contour q*(p) = min(1/2, (3 - 3p)/4).
    let qstar = |p: f64| 0.5f64.min((3.0 - 3.0 * p) / 4.0);
    for r in &grid.rows {
        let c = qstar(r.p);
        if r.q < c - 1e-9 {
            ensure!(r.min_value > 0.0, "({}, {}) below contour but {}", r.p, r.q, r.min_value);
        } else if r.q > c + 1e-9 {
            ensure!(r.min_value < 0.0, "({}, {}) above contour but {}", r.p, r.q, r.min_value);
        } else {
            ensure!(r.min_value.abs() < 1e-12, "({}, {}) on contour but {}", r.p, r.q, r.min_value);
        }
    }
    // Both segments are exact zeros of the closed form.
    for i in 0..=100 {
        let t = i as f64 / 100.0;
        let p1 = t / 3.0;
        ensure!(Scenario::Fig3.closed_form(p1, 0.5).abs() < 1e-12, "q = 1/2 segment off at p = {p1}");
        let p2 = 1.0 / 3.0 + t * 2.0 / 3.0;
        let q2 = (3.0 - 3.0 * p2) / 4.0;
        ensure!(Scenario::Fig3.closed_form(p2, q2).abs() < 1e-12, "3p+4q=3 segment off at p = {p2}");
    }
    // The spec's literal "3p + 4q = 3 for q >= 1/2" branch lies strictly inside the negative region.
    let literal = Scenario::Fig3.closed_form(0.2, 0.6);
    ensure!(literal < 0.0, "unexpected sign on the literal branch: {literal}");

    // Kink located from the grid: last p whose first non-positive q is 1/2.
    let axis: Vec<f64> = (0..=100).map(|i| i as f64 * step).collect();
    let crossing = |p: f64| {
        axis.iter()
            .copied()
            .find(|&q| grid.value_at(p, q).is_some_and(|v| v <= 1e-12))
    };
    let kink_p = axis
        .iter()
        .copied()
        .filter(|&p| crossing(p).is_some_and(|q| (q - 0.5).abs() < 1e-9))
        .fold(f64::NAN, f64::max);
    ensure!((kink_p - 1.0 / 3.0).abs() <= step, "kink at p = {kink_p}");
    let (a, b) = (grid.value_at(0.33, 0.5).unwrap(), grid.value_at(0.34, 0.5).unwrap());
    ensure!(a >= 0.0 && b < 0.0, "no crossing between (0.33,0.5) and (0.34,0.5): {a}, {b}");

    // Optimizer engine at 100 random grid points.
    let mut rng = seeded_rng(2024);
    let config = OptimizerConfig::default().with_seed(11);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let r = &grid.rows[rng.random_range(0..grid.rows.len())];
        let v = Scenario::Fig3.optimized(r.p, r.q, &config)?.value;
        worst = worst.max((v - r.min_value).abs());
    }
    ensure!(worst <= 1e-6, "optimizer deviates by {worst:e}");
    Ok(format!(
        "scan {elapsed:.2?}, kink from grid at ({kink_p:.2}, 0.50), derived (1/3, 1/2), \
         optimizer max dev {worst:.1e}; note: the stated kink (1/2, 1/3) corresponds to swapped axes, \
         and the 3p+4q=3 branch is the q <= 1/2 side"
    ))
}

fn ac2_fig4() -> Check {
    let config = OptimizerConfig::default().with_seed(5);
    let scenario = Scenario::fig4();
    let (grid, elapsed) = timed(|| run_scan(&scenario, 0.05, Engine::Optimizer, &config));
    let grid = grid?;
    ensure!(elapsed < Duration::from_secs(60), "optimizer scan took {elapsed:?}");
    let at = |p, q| grid.value_at(p, q).ok_or(format!("missing ({p},{q})"));
    let v10 = at(1.0, 0.0)?;
    let v00 = at(0.0, 0.0)?;
    let v01 = at(0.0, 1.0)?;
    ensure!((v10 + 0.2).abs() <= 1e-6, "(1,0) -> {v10}");
    ensure!((v00 - 0.3).abs() <= 1e-6, "(0,0) -> {v00}");
    ensure!((v01 - 0.3).abs() <= 1e-6, "(0,1) -> {v01}");
    let negatives = grid.rows.iter().filter(|r| r.min_value < -1e-6).count();
    ensure!(negatives > 0, "no negative region");

    let closed = run_scan(&scenario, 0.05, Engine::ClosedForm, &config)?;
    let dev4 = grid
        .rows
        .iter()
        .zip(&closed.rows)
        .map(|(a, b)| (a.min_value - b.min_value).abs())
        .fold(0.0, f64::max);
    ensure!(dev4 <= 1e-6, "fig4 engines differ by {dev4:e}");
    let f3o = run_scan(&Scenario::Fig3, 0.05, Engine::Optimizer, &config)?;
    let f3c = run_scan(&Scenario::Fig3, 0.05, Engine::ClosedForm, &config)?;
    let dev3 = f3o
        .rows
        .iter()
        .zip(&f3c.rows)
        .map(|(a, b)| (a.min_value - b.min_value).abs())
        .fold(0.0, f64::max);
    ensure!(dev3 <= 1e-6, "fig3 engines differ by {dev3:e}");

    let typo = Scenario::Fig4 { witness_constant: 1.25 };
    let lo_opt = run_scan(&typo, 0.05, Engine::Optimizer, &config)?
        .rows
        .iter()
        .map(|r| r.min_value)
        .fold(f64::INFINITY, f64::min);
    let lo_closed = run_scan(&typo, 0.01, Engine::ClosedForm, &config)?
        .rows
        .iter()
        .map(|r| r.min_value)
        .fold(f64::INFINITY, f64::min);
    ensure!(lo_opt >= 0.25 - 1e-6 && lo_closed >= 0.25 - 1e-6, "constant 5/4 minima {lo_opt}, {lo_closed}");
    Ok(format!(
        "optimizer scan {elapsed:.2?}; (1,0)={v10:.9}, (0,0)={v00:.9}, (0,1)={v01:.9}; \
         {negatives} negative points; engine dev fig3 {dev3:.1e}, fig4 {dev4:.1e}; \
         constant 5/4 grid min {lo_closed:.6}"
    ))
}

fn ac3_example1() -> Check {
    let (k, d) = (2, 3);
    let dims = Dims::qudits(d);
    let vectors: Vec<Vec<f64>> = vec![
        vec![0.99, (0.0199f64 / 2.0).sqrt(), (0.0199f64 / 2.0).sqrt()],
        vec![0.995, 0.08, (1.0f64 - 0.990025 - 0.0064).sqrt()],
        vec![0.999, 0.04, (1.0f64 - 0.998001 - 0.0016).sqrt()],
    ];
    let family = default_witness_family(&dims);
    let config = OptimizerConfig::default().with_seed(3).with_restarts(32);
    let mut worst_ppt = f64::INFINITY;
    let mut worst_dual = f64::INFINITY;
    for c in &vectors {
        let t = example1_threshold(k, d, c)?;
        ensure!(t.product <= 1.0 / 9.0 && t.certified, "threshold not met for {c:?}");
        let ch = example1_channel(k, d, c)?;
        for i in 0..500u64 {
            let sigma = random_separable(&dims, 1 + (i as usize % 4), 7000 + i)?;
            let out = ch.apply(&sigma)?;
            let m = out.partial_transpose_min_eigenvalue()?;
            worst_ppt = worst_ppt.min(m);
            ensure!(out.is_ppt()?, "output {i} not PPT (min eig {m:e}) for {c:?}");
        }
        for w in &family {
            let dual = ch.dual_apply(w.witness.operator())?;
            let v = min_over_products(&dual, &dims, &config).value;
            worst_dual = worst_dual.min(v);
            ensure!(v >= -1e-6, "witness {} gives {v} for {c:?}", w.label);
        }
    }
    let ch = example1_channel(k, d, &vectors[0])?;
    let out = ch.apply(&max_entangled(k, d)?.density())?;
    let eig = out.matrix().eigh();
    let ranks = numerical_rank(&eig.values.iter().rev().map(|v| v.max(0.0)).collect::<Vec<_>>());
    ensure!(ranks == 1, "image of phi+_2 is not pure (rank {ranks})");
    let top = eig.vector(eig.values.len() - 1);
    let r = schmidt_rank_of(&top, d, d).unwrap_or(0);
    ensure!(r == 3, "image of phi+_2 has Schmidt rank {r}");
    Ok(format!(
        "3 coefficient vectors x 500 separable inputs all PPT (worst min eig {worst_ppt:.2e}); \
         {} witnesses, worst dual minimum {worst_dual:.3e}; Schmidt rank of Lambda(phi+_2) = {r}",
        family.len()
    ))
}

fn ac4_channel_schmidt() -> Check {
    let config = AnalysisConfig::default();
    let dims4 = Dims::qudits(4);
    let mut slowest = Duration::ZERO;
    for k in 2..=4 {
        for kp in 2..=4 {
            let m = ComplexMatrix::outer(
                max_entangled(kp, 4)?.amplitudes(),
                max_entangled(k, 4)?.amplitudes(),
            );
            let (r, t) = timed(|| channel_schmidt_rank_rank1(&m, &dims4, &config));
            let r = r?.rank;
            ensure!(r == kp, "r(|phi+_{kp}><phi+_{k}|) = {r}");
            ensure!(t < Duration::from_secs(5), "rank search took {t:?}");
            slowest = slowest.max(t);
        }
    }
    let (b, t) = timed(|| channel_schmidt_number_bounds(&KrausChannel::swap(2), &config));
    let b = b?;
    ensure!((b.lower, b.upper) == (1, 1), "swap bounds ({}, {})", b.lower, b.upper);
    ensure!(t < Duration::from_secs(5), "swap bounds took {t:?}");
    slowest = slowest.max(t);
    for k in 2..=3 {
        let ch = constant_channel(&max_entangled(k, 3)?.density())?;
        let (b, t) = timed(|| channel_schmidt_number_bounds(&ch, &config));
        let b = b?;
        ensure!((b.lower, b.upper) == (k, k), "replacement k={k} bounds ({}, {})", b.lower, b.upper);
        ensure!(t < Duration::from_secs(5), "replacement bounds took {t:?}");
        slowest = slowest.max(t);
    }
    Ok(format!(
        "r(|phi+_k'><phi+_k|) = k' for 2 <= k, k' <= 4; swap (1,1); replacement (2,2), (3,3); slowest case {slowest:.2?}"
    ))
}

/// Independent oracle for `max <phi+>` over two-qubit products: dense random
/// sampling, then stochastic hill climbing from the best sample.
fn brute_force_phi_plus_max(samples: usize, seed: u64) -> f64 {
    let mut rng = seeded_rng(seed);
    let value = |a: &[C64], b: &[C64]| 0.5 * (a[0] * b[0] + a[1] * b[1]).norm_sqr();
    let mut best = (f64::NEG_INFINITY, vec![], vec![]);
    for _ in 0..samples {
        let a = random_unit_vector(2, &mut rng);
        let b = random_unit_vector(2, &mut rng);
        let v = value(&a, &b);
        if v > best.0 {
            best = (v, a, b);
        }
    }
    let (mut v, mut a, mut b) = best;
    let mut scale = 0.05;
    for _ in 0..20_000 {
        let jitter = |x: &[C64], rng: &mut ChaCha8Rng| -> Vec<C64> {
            let y: Vec<C64> = x
                .iter()
                .map(|z| z + C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)) * scale)
                .collect();
            let n = y.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            y.iter().map(|z| z / n).collect()
        };
        let na = jitter(&a, &mut rng);
        let nb = jitter(&b, &mut rng);
        let nv = value(&na, &nb);
        if nv > v {
            v = nv;
            a = na;
            b = nb;
        } else {
            scale = (scale * 0.999).max(1e-7);
        }
    }
    v
}

fn ac5_witness_algebra() -> Check {
    let config = OptimizerConfig::default().with_seed(9);
    let dims2 = Dims::qudits(2);
    let phi2 = max_entangled(2, 2)?.projector();
    let oracle = brute_force_phi_plus_max(1_000_000, 77);
    let lm = lambda_min(&phi2, &dims2, &config)?;
    ensure!((oracle - 0.5).abs() <= 1e-6, "oracle gives {oracle}");
    ensure!((lm - oracle).abs() <= 1e-6 && (lm - 0.5).abs() <= 1e-6, "lambda_min {lm} vs oracle {oracle}");

    let phi3 = max_entangled(3, 3)?.projector();
    for r in 1..=3 {
        let v = schmidt_class_max(&phi3, r, &Dims::qudits(3), &config)?;
        ensure!((v - r as f64 / 3.0).abs() <= 1e-6, "schmidt_class_max(r={r}) = {v}");
    }

    let mut rng = seeded_rng(123);
    let mut worst_identity = 0.0f64;
    let mut worst_gap = f64::INFINITY;
    for i in 0..100u64 {
        let dims = if i % 2 == 0 { Dims::qudits(2) } else { Dims::new(vec![2, 3])? };
        let n = dims.total();
        let p: f64 = rng.random_range(0.05..=1.0);
        let sigma = random_separable(&dims, 1 + (i as usize % 5), 500 + i)?;
        let l = random_psd(n, &mut rng).scale_real(rng.random_range(0.5..2.0));
        let lam = lambda_min(&l, &dims, &config.with_restarts(16))? + rng.random_range(0.0..0.5);
        let w = Witness::shifted(lam, l.clone(), dims.clone())?;
        let ch = mixing_channel(p, &sigma)?;
        let dual = ch.dual_apply(w.operator())?;
        let expected = &ComplexMatrix::identity(n).scale_real(lam - (1.0 - p) * sigma.expectation(&l))
            - &l.scale_real(p);
        let shifted = mixing_dual_shift(&w, p, &sigma)?;
        let dev = dual
            .max_abs_diff(&expected)
            .max(dual.max_abs_diff(&shifted.operator().scale_real(p)));
        worst_identity = worst_identity.max(dev);
        ensure!(dev <= 1e-12, "dual-shift identity off by {dev:e}");
        let gap = shifted.shift().unwrap().lambda - lam;
        worst_gap = worst_gap.min(gap);
        ensure!(gap >= -1e-9, "lambda' < lambda by {gap:e} for a separable mix");
    }

    let omega = max_entangled(2, 2)?.density();
    for &lam in &[0.5, 0.6, 0.8, 0.95] {
        for &p in &[0.1, 0.5, 0.9] {
            let w = Witness::shifted(lam, phi2.clone(), dims2.clone())?;
            let lp = mixing_dual_shift(&w, p, &omega)?.shift().unwrap().lambda;
            ensure!(lp < lam, "entangled mix: lambda' = {lp} >= {lam}");
        }
    }
    Ok(format!(
        "oracle max <phi+> = {oracle:.9}, lambda_min = {lm:.9}; schmidt_class_max = r/3; \
         dual-shift max dev {worst_identity:.1e}; min (lambda' - lambda) = {worst_gap:.3e}; \
         entangled mix lowers lambda"
    ))
}

fn random_form(form: KrausForm, d: usize, rng: &mut ChaCha8Rng) -> ComplexMatrix {
    match form {
        KrausForm::TensorProduct => kron(&ginibre(d, rng), &ginibre(d, rng)),
        KrausForm::PermutationLocal => &kron(&ginibre(d, rng), &ginibre(d, rng)) * &swap_operator(d),
        KrausForm::Rank1Product => {
            let out = kron_vec(&random_unit_vector(d, rng), &random_unit_vector(d, rng));
            let bra = random_unit_vector(d * d, rng);
            ComplexMatrix::outer(&out, &bra)
        }
        KrausForm::Unknown => unreachable!(),
    }
}

const FORMS: [KrausForm; 3] = [
    KrausForm::TensorProduct,
    KrausForm::PermutationLocal,
    KrausForm::Rank1Product,
];

/// Isometry `V: C^n -> C^(n k)` split into `k` Kraus blocks.
fn random_channel(dims: &Dims, k: usize, rng: &mut ChaCha8Rng) -> KrausChannel {
    let n = dims.total();
    let u = random_unitary(n * k, rng);
    let kraus = (0..k)
        .map(|b| ComplexMatrix::from_fn(n, n, |i, j| u[(b * n + i, j)]))
        .collect();
    KrausChannel::new(kraus, dims.clone(), "random").expect("valid Kraus list")
}

fn non_entangling_channel(kind: usize, rng: &mut ChaCha8Rng) -> KrausChannel {
    let dims = Dims::qudits(2);
    match kind {
        0 => {
            let w: Vec<f64> = (0..3).map(|_| rng.random::<f64>() + 0.1).collect();
            let total: f64 = w.iter().sum();
            let kraus = w
                .iter()
                .map(|x| kron(&random_unitary(2, rng), &random_unitary(2, rng)).scale_real((x / total).sqrt()))
                .collect();
            KrausChannel::new(kraus, dims, "local unitary mixture").unwrap()
        }
        1 => {
            let m = &kron(&random_unitary(2, rng), &random_unitary(2, rng)) * &swap_operator(2);
            KrausChannel::new(vec![m], dims, "swap with local unitaries").unwrap()
        }
        2 => {
            let sigma = random_separable(&dims, 3, rng.random()).unwrap();
            mixing_channel(rng.random_range(0.0..1.0), &sigma).unwrap()
        }
        _ => {
            let basis = random_unitary(4, rng);
            let effects = (0..4).map(|i| ComplexMatrix::projector(&basis.column(i))).collect();
            let outputs = (0..4)
                .map(|_| PureState::new(random_product(&dims, rng).to_vector(), dims.clone()).unwrap().density())
                .collect();
            measurement_channel(effects, outputs).unwrap()
        }
    }
}

fn ac6_properties() -> Check {
    let mut rng = seeded_rng(606);
    let dims3 = Dims::qudits(3);
    let config = AnalysisConfig::default();

    // Product-preserving forms never raise the Schmidt rank.
    let mut mono_violations = 0;
    for form in FORMS {
        for _ in 0..1000 {
            let m = random_form(form, 3, &mut rng);
            let r_in = rng.random_range(1..=3);
            let psi = random_state_with_schmidt_rank(&dims3, r_in, &mut rng)?;
            if let Some(r_out) = schmidt_rank_of(&m.mul_vec(psi.amplitudes()), 3, 3) {
                if r_out > r_in {
                    mono_violations += 1;
                }
            }
        }
    }
    ensure!(mono_violations == 0, "{mono_violations} monotonicity violations");

    // Non-entangling channels keep shifted witnesses non-negative on products.
    let opt = OptimizerConfig::default().with_seed(4).with_restarts(32);
    let mut worst_ne = f64::INFINITY;
    for i in 0..200 {
        let ch = non_entangling_channel(i % 4, &mut rng);
        let l = if i % 2 == 0 {
            random_pure_state(ch.dims(), &mut rng).projector()
        } else {
            random_psd(4, &mut rng)
        };
        let lam = lambda_min(&l, ch.dims(), &opt)? + rng.random_range(0.0..0.3);
        let w = Witness::shifted(lam, l, ch.dims().clone())?;
        let v = min_over_products(&ch.dual_apply(w.operator())?, ch.dims(), &opt).value;
        worst_ne = worst_ne.min(v);
        ensure!(v >= -1e-6, "pair {i} ({}) gives {v}", ch.label());
    }

    // Duality and Choi consistency on random channels.
    let mut worst_residual = 0.0f64;
    for i in 0..200 {
        let dims = if i % 2 == 0 { Dims::qudits(2) } else { Dims::new(vec![2, 3])? };
        let n = dims.total();
        let ch = random_channel(&dims, 1 + i % 4, &mut rng);
        let rho = DensityMatrix::new(random_psd(n, &mut rng), dims.clone())?;
        let obs = random_psd(n, &mut rng);
        let lhs = ch.dual_apply(&obs)?.trace_product(rho.matrix());
        let out = ch.apply(&rho)?;
        let rhs = obs.trace_product(out.matrix());
        let choi = ch.choi();
        let via = choi.contract(rho.matrix())?;
        let marginal = partial_trace(choi.matrix(), choi.dims(), &(0..dims.parties()).collect::<Vec<_>>())?;
        let unital = ch.dual_apply(&ComplexMatrix::identity(n))?.max_abs_diff(&ComplexMatrix::identity(n));
        let r = (lhs - rhs)
            .norm()
            .max(via.max_abs_diff(out.matrix()))
            // Trace-preserving channels have maximally mixed reference marginals.
            .max(marginal.max_abs_diff(&ComplexMatrix::identity(n).scale_real(1.0 / n as f64)))
            .max(unital);
        worst_residual = worst_residual.max(r);
    }
    ensure!(worst_residual <= 1e-9, "duality/Choi residual {worst_residual:e}");

    // Structural classification of generated forms.
    let mut misclassified = 0;
    for form in FORMS {
        for i in 0..1000 {
            let d = 2 + i % 2;
            let m = random_form(form, d, &mut rng);
            if classify_kraus(&m, &Dims::qudits(d), &config)?.form != form {
                misclassified += 1;
            }
        }
    }
    ensure!(misclassified == 0, "{misclassified} generated operators misclassified");
    Ok(format!(
        "monotonicity 3x1000 pairs, 0 violations; non-entangling channels 200 pairs, worst {worst_ne:.3e}; \
         duality/Choi 200 channels, max residual {worst_residual:.1e}; classify 3x1000, 0 unknowns"
    ))
}

fn main() {
    let criteria: [Criterion; 6] = [
        ("AC1 fig3 scan and contour", ac1_fig3),
        ("AC2 fig4 scan and witness constant", ac2_fig4),
        ("AC3 threshold example channel", ac3_example1),
        ("AC4 channel Schmidt measures", ac4_channel_schmidt),
        ("AC5 witness algebra", ac5_witness_algebra),
        ("AC6 property suites", ac6_properties),
    ];
    // Filters passed by `cargo test <filter>` select criteria by substring.
    let filters: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    let mut ran = 0;
    for (name, f) in criteria {
        if !filters.is_empty() && !filters.iter().any(|x| name.contains(x.as_str())) {
            continue;
        }
        ran += 1;
        let (result, elapsed) = timed(|| catch_unwind(AssertUnwindSafe(f)));
        let line = match result {
            Ok(Ok(detail)) => format!("PASS {name} [{elapsed:.2?}]: {detail}"),
            Ok(Err(e)) => {
                failed += 1;
                format!("FAIL {name} [{elapsed:.2?}]: {e}")
            }
            Err(panic) => {
                failed += 1;
                let msg = panic
                    .downcast_ref::<String>()
                    .cloned()
                    .or_else(|| panic.downcast_ref::<&str>().map(|s| s.to_string()))
                    .unwrap_or_default();
                format!("FAIL {name} [{elapsed:.2?}]: panic: {msg}")
            }
        };
        println!("{line}");
    }
    println!("acceptance: {} passed, {failed} failed", ran - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
