//! The two two-qubit scenarios scanned by the CLI: a swap-witnessed
//! measure-and-prepare channel and a three-unitary mixture under a shifted
//! `phi+` witness.

use std::fmt;
use std::str::FromStr;

use crate::channels::{measurement_channel, random_unitary_channel, KrausChannel};
use crate::error::{Error, Result};
use crate::linalg::{kron, ComplexMatrix, Dims};
use crate::optimize::{min_over_products, OptimizationResult, OptimizerConfig};
use crate::states::{bell_states, DensityMatrix};
use crate::witness::Witness;

/// Default shift for the `c I - phi+` witness of the unitary-mixture scenario.
pub const FIG4_WITNESS_CONSTANT: f64 = 0.8;

/// Measure `{psi-, I - psi-}` and prepare `p psi- + (1-p) I/4` or
/// `q psi- + (1-q) psi+`.
pub fn fig3_channel(p: f64, q: f64) -> Result<KrausChannel> {
    check_unit("p", p)?;
    check_unit("q", q)?;
    let b = bell_states();
    let dims = Dims::qudits(2);
    let e0 = b.psi_minus.projector();
    let e1 = &ComplexMatrix::identity(4) - &e0;
    let rho0 = &e0.scale_real(p) + &ComplexMatrix::identity(4).scale_real((1.0 - p) / 4.0);
    let rho1 = &e0.scale_real(q) + &b.psi_plus.projector().scale_real(1.0 - q);
    let ch = measurement_channel(
        vec![e0, e1],
        vec![
            DensityMatrix::new(rho0.hermitian_part(), dims.clone())?,
            DensityMatrix::new(rho1.hermitian_part(), dims)?,
        ],
    )?;
    Ok(ch.with_label(format!("fig3(p={p},q={q})")))
}

pub fn fig3_witness() -> Witness {
    Witness::swap(2)
}

/// `min_x f(x)` over `x = <psi->` in `[0, 1/2]` with
/// `f(x) = (1-3p)/2 x + (1-2q)(1-x)`.
pub fn closed_form_fig3_min(p: f64, q: f64) -> f64 {
    let f = |x: f64| (1.0 - 3.0 * p) / 2.0 * x + (1.0 - 2.0 * q) * (1.0 - x);
    f(0.0).min(f(0.5))
}

/// `CX` with the first qubit as control.
pub fn cx() -> ComplexMatrix {
    ComplexMatrix::from_real_rows(&[
        &[1.0, 0.0, 0.0, 0.0],
        &[0.0, 1.0, 0.0, 0.0],
        &[0.0, 0.0, 0.0, 1.0],
        &[0.0, 0.0, 1.0, 0.0],
    ])
}

/// `I (x) X`.
pub fn ix() -> ComplexMatrix {
    let x = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]);
    kron(&ComplexMatrix::identity(2), &x)
}

/// Unitaries `{I, CX, I (x) X}` with probabilities `(1-p-q, p, q)`.
pub fn fig4_channel(p: f64, q: f64) -> Result<KrausChannel> {
    check_unit("p", p)?;
    check_unit("q", q)?;
    if p + q > 1.0 + 1e-12 {
        return Err(Error::BadProbabilities(format!("p + q = {} exceeds 1", p + q)));
    }
    let r = (1.0 - p - q).max(0.0);
    let ch = random_unitary_channel(
        vec![ComplexMatrix::identity(4), cx(), ix()],
        &[r, p, q],
        Dims::qudits(2),
    )?;
    Ok(ch.with_label(format!("fig4(p={p},q={q})")))
}

pub fn fig4_witness(constant: f64) -> Witness {
    let phi = bell_states().phi_plus.projector();
    Witness::shifted(constant, phi, Dims::qudits(2)).expect("phi+ is PSD")
}

/// Terms `(weight, u)` with `<u|(a (x) b)>` over real amplitudes, indexed
/// `a0b0, a0b1, a1b0, a1b1`.
fn fig4_terms(p: f64, q: f64) -> [(f64, [f64; 4]); 3] {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    [
        (1.0 - p - q, [h, 0.0, 0.0, h]),
        (p, [h, 0.0, h, 0.0]),
        (q, [0.0, h, h, 0.0]),
    ]
}

fn fig4_objective(c: f64, terms: &[(f64, [f64; 4]); 3], a: [f64; 2], b: [f64; 2]) -> f64 {
    let prod = [a[0] * b[0], a[0] * b[1], a[1] * b[0], a[1] * b[1]];
    terms.iter().fold(c, |acc, (w, u)| {
        let o: f64 = u.iter().zip(&prod).map(|(x, y)| x * y).sum();
        acc - w * o * o
    })
}

/// Lowest eigenpair of a real symmetric 2x2 matrix.
fn min_eigen2(m: [[f64; 2]; 2]) -> (f64, [f64; 2]) {
    let (a, b, d) = (m[0][0], m[0][1], m[1][1]);
    let mean = 0.5 * (a + d);
    let rad = (0.25 * (a - d) * (a - d) + b * b).sqrt();
    let lam = mean - rad;
    let v1 = [b, lam - a];
    let v2 = [lam - d, b];
    let n1 = v1[0].hypot(v1[1]);
    let n2 = v2[0].hypot(v2[1]);
    let v = if n1 < 1e-300 && n2 < 1e-300 {
        [1.0, 0.0]
    } else if n1 >= n2 {
        [v1[0] / n1, v1[1] / n1]
    } else {
        [v2[0] / n2, v2[1] / n2]
    };
    (lam, v)
}

/// Quadratic form in the free factor with the other fixed.
fn fig4_effective(c: f64, terms: &[(f64, [f64; 4]); 3], fixed: [f64; 2], free_left: bool) -> [[f64; 2]; 2] {
    let mut m = [[c, 0.0], [0.0, c]];
    for (w, u) in terms {
        // u . (x (x) fixed) or u . (fixed (x) x), linear in x.
        let g = if free_left {
            [u[0] * fixed[0] + u[1] * fixed[1], u[2] * fixed[0] + u[3] * fixed[1]]
        } else {
            [u[0] * fixed[0] + u[2] * fixed[1], u[1] * fixed[0] + u[3] * fixed[1]]
        };
        for i in 0..2 {
            for j in 0..2 {
                m[i][j] -= w * g[i] * g[j];
            }
        }
    }
    m
}

/// `min <chi|Lambda*(c I - phi+)|chi>` over real product amplitudes, from an
/// angle grid refined by alternating exact 2x2 minimization.
pub fn closed_form_fig4_min_with(p: f64, q: f64, constant: f64) -> f64 {
    const GRID: usize = 90;
    let terms = fig4_terms(p, q);
    let angle = |i: usize| std::f64::consts::PI * i as f64 / GRID as f64;
    let mut seeds: Vec<(f64, f64, f64)> = Vec::with_capacity(GRID * GRID);
    for i in 0..GRID {
        for j in 0..GRID {
            let (ta, tb) = (angle(i), angle(j));
            let a = [ta.cos(), ta.sin()];
            let b = [tb.cos(), tb.sin()];
            seeds.push((fig4_objective(constant, &terms, a, b), ta, tb));
        }
    }
    seeds.sort_by(|x, y| x.0.total_cmp(&y.0));
    let mut best = f64::INFINITY;
    for &(_, ta, tb) in seeds.iter().take(8) {
        let mut a = [ta.cos(), ta.sin()];
        let mut b = [tb.cos(), tb.sin()];
        let mut value = fig4_objective(constant, &terms, a, b);
        for _ in 0..500 {
            let previous = value;
            let (_, na) = min_eigen2(fig4_effective(constant, &terms, b, true));
            a = na;
            let (v, nb) = min_eigen2(fig4_effective(constant, &terms, a, false));
            b = nb;
            value = v;
            if (previous - value).abs() < 1e-15 {
                break;
            }
        }
        best = best.min(fig4_objective(constant, &terms, a, b));
    }
    best
}

pub fn closed_form_fig4_min(p: f64, q: f64) -> f64 {
    closed_form_fig4_min_with(p, q, FIG4_WITNESS_CONSTANT)
}

fn check_unit(name: &str, x: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::InvalidArgument(format!("{name} = {x} outside [0, 1]")));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Scenario {
    Fig3,
    Fig4 { witness_constant: f64 },
}

impl Scenario {
    pub fn fig4() -> Self {
        Scenario::Fig4 {
            witness_constant: FIG4_WITNESS_CONSTANT,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Scenario::Fig3 => "fig3",
            Scenario::Fig4 { .. } => "fig4",
        }
    }

    /// Parameter points the scenario is defined on.
    pub fn in_domain(&self, p: f64, q: f64) -> bool {
        let unit = (0.0..=1.0).contains(&p) && (0.0..=1.0).contains(&q);
        match self {
            Scenario::Fig3 => unit,
            Scenario::Fig4 { .. } => unit && p + q <= 1.0 + 1e-9,
        }
    }

    pub fn channel(&self, p: f64, q: f64) -> Result<KrausChannel> {
        match self {
            Scenario::Fig3 => fig3_channel(p, q),
            Scenario::Fig4 { .. } => fig4_channel(p, q.min(1.0 - p).max(0.0)),
        }
    }

    pub fn witness(&self) -> Witness {
        match self {
            Scenario::Fig3 => fig3_witness(),
            Scenario::Fig4 { witness_constant } => fig4_witness(*witness_constant),
        }
    }

    pub fn closed_form(&self, p: f64, q: f64) -> f64 {
        match self {
            Scenario::Fig3 => closed_form_fig3_min(p, q),
            Scenario::Fig4 { witness_constant } => {
                closed_form_fig4_min_with(p, q.min(1.0 - p).max(0.0), *witness_constant)
            }
        }
    }

    /// Generic product-state minimization of `Lambda*(W)`.
    pub fn optimized(&self, p: f64, q: f64, config: &OptimizerConfig) -> Result<OptimizationResult> {
        let ch = self.channel(p, q)?;
        let dual = ch.dual_apply(self.witness().operator())?;
        Ok(min_over_products(&dual, ch.dims(), config))
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Scenario {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fig3" => Ok(Scenario::Fig3),
            "fig4" => Ok(Scenario::fig4()),
            other => Err(Error::InvalidArgument(format!("unknown scenario '{other}'"))),
        }
    }
}

/// Dual of the swap under the fig3 channel: `((1-3p)/2) E0 + (1-2q) E1`.
pub fn fig3_dual_swap(p: f64, q: f64) -> ComplexMatrix {
    let e0 = bell_states().psi_minus.projector();
    let e1 = &ComplexMatrix::identity(4) - &e0;
    &e0.scale_real((1.0 - 3.0 * p) / 2.0) + &e1.scale_real(1.0 - 2.0 * q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::swap_operator;

    fn cfg() -> OptimizerConfig {
        OptimizerConfig::default().with_seed(1).with_restarts(16)
    }

    #[test]
    fn fig3_closed_form_points() {
        assert!((closed_form_fig3_min(0.0, 0.0) - 0.75).abs() < 1e-15);
        assert!((closed_form_fig3_min(1.0, 1.0) + 1.0).abs() < 1e-15);
        assert!((closed_form_fig3_min(0.9, 0.9) + 0.825).abs() < 1e-12);
        let k = closed_form_fig3_min(1.0 / 3.0, 0.5);
        assert!(k.abs() < 1e-15);
    }

    #[test]
    fn fig3_dual_matches_channel() {
        let (p, q) = (0.2, 0.7);
        let ch = fig3_channel(p, q).unwrap();
        let dual = ch.dual_apply(&swap_operator(2)).unwrap();
        assert!(dual.max_abs_diff(&fig3_dual_swap(p, q)) < 1e-12);
    }

    #[test]
    fn fig3_engines_agree() {
        for &(p, q) in &[(0.0, 0.0), (1.0, 1.0), (0.9, 0.9), (0.25, 0.6), (0.7, 0.1)] {
            let r = Scenario::Fig3.optimized(p, q, &cfg()).unwrap();
            assert!((r.value - closed_form_fig3_min(p, q)).abs() < 1e-9, "({p},{q})");
        }
    }

    #[test]
    fn fig4_closed_form_points() {
        assert!((closed_form_fig4_min(1.0, 0.0) + 0.2).abs() < 1e-12);
        assert!((closed_form_fig4_min(0.0, 0.0) - 0.3).abs() < 1e-12);
        assert!((closed_form_fig4_min(0.0, 1.0) - 0.3).abs() < 1e-12);
        assert!(closed_form_fig4_min_with(0.5, 0.2, 1.25) >= 0.25 - 1e-12);
    }

    #[test]
    fn fig4_engines_agree() {
        let s = Scenario::fig4();
        for &(p, q) in &[(1.0, 0.0), (0.0, 0.0), (0.3, 0.3), (0.6, 0.1), (0.2, 0.75)] {
            let r = s.optimized(p, q, &cfg()).unwrap();
            assert!((r.value - s.closed_form(p, q)).abs() < 1e-9, "({p},{q})");
        }
    }

    #[test]
    fn cx_maps_phi_plus_to_plus_zero() {
        let phi = bell_states().phi_plus.projector();
        let image = cx().sandwich(&phi);
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let plus0 = ComplexMatrix::from_real_rows(&[&[h], &[0.0], &[h], &[0.0]]);
        let expected = &plus0 * &plus0.adjoint();
        assert!(image.max_abs_diff(&expected) < 1e-15);
    }

    #[test]
    fn fig4_rejects_overfull_probabilities() {
        assert!(fig4_channel(0.7, 0.6).is_err());
        assert!(!Scenario::fig4().in_domain(0.7, 0.6));
        assert_eq!("fig3".parse::<Scenario>().unwrap(), Scenario::Fig3);
        assert!("fig5".parse::<Scenario>().is_err());
    }
}
