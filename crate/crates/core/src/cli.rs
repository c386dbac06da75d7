//! Command-line front end.

use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

use crate::channels::KrausChannel;
use crate::error::Error;
use crate::io::{read_spec, Spec, State};
use crate::linalg::{numerical_rank, swap_operator};
use crate::optimize::OptimizerConfig;
use crate::power::{
    certify_with_witnesses, channel_schmidt_number_bounds, channel_schmidt_rank_rank1,
    AnalysisConfig,
};
use crate::scan::{run_scan, Engine};
use crate::scenarios::{Scenario, FIG4_WITNESS_CONSTANT};
use crate::states::{schmidt_coefficients_across, Bipartition};

#[derive(Debug, Parser)]
#[command(name = "entpow", version, about = "Entangling power of finite-dimensional quantum channels")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ScenarioArg {
    Fig3,
    Fig4,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EngineArg {
    #[value(name = "closed_form")]
    ClosedForm,
    #[value(name = "optimizer")]
    Optimizer,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Certify a channel spec as stochastically non-entangling, entangling or
    /// inconclusive; prints certificate JSON.
    Classify {
        spec: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 64)]
        restarts: usize,
    },
    /// Scan the minimum of the dual witness over a (p, q) grid; writes CSV.
    Scan {
        #[arg(long, value_enum)]
        scenario: ScenarioArg,
        #[arg(long, default_value_t = 0.01)]
        step: f64,
        #[arg(long, value_enum, default_value_t = EngineArg::ClosedForm)]
        engine: EngineArg,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 64)]
        restarts: usize,
        /// Shift `c` of the `c I - phi+` witness (fig4 only).
        #[arg(long, default_value_t = FIG4_WITNESS_CONSTANT)]
        witness_constant: f64,
    },
    /// Schmidt rank of a state, or Schmidt measures of a channel.
    Schmidt {
        spec: PathBuf,
        /// 1-based parties, e.g. `1:2`; channel Choi cuts use `R1..Rn` for
        /// references, e.g. `(R1,1):(R2,2)`.
        #[arg(long)]
        cut: Option<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Debug)]
pub enum CliError {
    Input(String),
    Numerical(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Input(_) => 2,
            CliError::Numerical(_) => 3,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Input(m) => write!(f, "input error: {m}"),
            CliError::Numerical(m) => write!(f, "numerical failure: {m}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Numerical(_) => CliError::Numerical(e.to_string()),
            other => CliError::Input(other.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Input(e.to_string())
    }
}

/// Parses `A:B` where each block is a comma list of 1-based parties,
/// optionally parenthesized; `Rk` names reference `k` of a Choi state with
/// `systems` system parties. A lone block means "versus the rest".
pub fn parse_cut(text: &str, parties: usize, systems: Option<usize>) -> Result<Bipartition, Error> {
    let blocks: Vec<&str> = text.split(':').collect();
    if blocks.is_empty() || blocks.len() > 2 {
        return Err(Error::InvalidCut(format!("'{text}' is not of the form A:B")));
    }
    let parse_block = |block: &str| -> Result<Vec<usize>, Error> {
        let inner = block.trim().trim_start_matches('(').trim_end_matches(')');
        let mut out = Vec::new();
        for tok in inner.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            let (is_ref, num) = match tok.strip_prefix(['R', 'r']) {
                Some(rest) => (true, rest),
                None => (false, tok),
            };
            let k: usize = num
                .parse()
                .map_err(|_| Error::InvalidCut(format!("bad party '{tok}'")))?;
            if k == 0 {
                return Err(Error::InvalidCut(format!("parties are 1-based, got '{tok}'")));
            }
            let index = match (is_ref, systems) {
                (true, Some(n)) if k <= n => k - 1,
                (false, Some(n)) if k <= n => n + k - 1,
                (false, None) => k - 1,
                _ => return Err(Error::InvalidCut(format!("party '{tok}' out of range"))),
            };
            out.push(index);
        }
        Ok(out)
    };
    let left = parse_block(blocks[0])?;
    let cut = Bipartition::new(left, parties)?;
    if blocks.len() == 2 {
        let mut right = parse_block(blocks[1])?;
        right.sort_unstable();
        if right != cut.right() {
            return Err(Error::InvalidCut(format!(
                "'{text}': the two blocks must partition all {parties} parties"
            )));
        }
    }
    Ok(cut)
}

pub fn run(cli: Cli, out: &mut dyn Write) -> Result<(), CliError> {
    match cli.command {
        Command::Classify { spec, seed, restarts } => {
            let built = match read_spec(&spec)? {
                Spec::Channel(c) => c.build()?,
                Spec::State(_) => return Err(CliError::Input("kind: expected a channel spec".into())),
            };
            let config = AnalysisConfig {
                optimizer: OptimizerConfig::default().with_seed(seed).with_restarts(restarts),
                ..AnalysisConfig::default()
            };
            let cert = certify_with_witnesses(&built.channel, &built.witnesses, &config)?;
            let text = serde_json::to_string_pretty(&cert)
                .map_err(|e| CliError::Numerical(e.to_string()))?;
            writeln!(out, "{text}")?;
        }
        Command::Scan {
            scenario,
            step,
            engine,
            out: path,
            seed,
            restarts,
            witness_constant,
        } => {
            let scenario = match scenario {
                ScenarioArg::Fig3 => Scenario::Fig3,
                ScenarioArg::Fig4 => Scenario::Fig4 { witness_constant },
            };
            let engine = match engine {
                EngineArg::ClosedForm => Engine::ClosedForm,
                EngineArg::Optimizer => Engine::Optimizer,
            };
            let config = OptimizerConfig::default().with_seed(seed).with_restarts(restarts);
            let grid = run_scan(&scenario, step, engine, &config)?;
            std::fs::write(&path, grid.to_csv())?;
            writeln!(out, "wrote {} rows to {}", grid.rows.len(), path.display())?;
        }
        Command::Schmidt { spec, cut, seed } => {
            let config = AnalysisConfig {
                optimizer: OptimizerConfig::default().with_seed(seed),
                ..AnalysisConfig::default()
            };
            match read_spec(&spec)? {
                Spec::State(s) => report_state(s.build()?, cut.as_deref(), out)?,
                Spec::Channel(c) => report_channel(&c.build()?.channel, cut.as_deref(), &config, out)?,
            }
        }
    }
    Ok(())
}

fn report_state(state: State, cut: Option<&str>, out: &mut dyn Write) -> Result<(), CliError> {
    match state {
        State::Pure(psi) => {
            let parties = psi.dims().parties();
            let cut = parse_cut(cut.unwrap_or("1"), parties, None)?;
            let c = schmidt_coefficients_across(psi.amplitudes(), psi.dims(), &cut)?;
            let rank = numerical_rank(&c);
            writeln!(out, "schmidt rank: {rank} (method: SVD across cut {:?}:{:?}, 0-based)", cut.left(), cut.right())?;
            writeln!(out, "coefficients: {:?}", &c[..rank])?;
        }
        State::Mixed(rho) => {
            let eig = rho.matrix().eigh();
            let top = eig.values.len() - 1;
            if numerical_rank(&eig.values.iter().rev().map(|v| v.max(0.0)).collect::<Vec<_>>()) == 1 {
                let cut = parse_cut(cut.unwrap_or("1"), rho.dims().parties(), None)?;
                let c = schmidt_coefficients_across(&eig.vector(top), rho.dims(), &cut)?;
                writeln!(out, "schmidt rank: {} (method: pure mixed-state input, SVD)", numerical_rank(&c))?;
            } else {
                let min = rho.partial_transpose_min_eigenvalue()?;
                writeln!(out, "schmidt number: not computed for mixed states")?;
                writeln!(
                    out,
                    "partial transpose min eigenvalue: {min:.6e} ({})",
                    if min >= -1e-10 { "PPT" } else { "NPT: Schmidt number >= 2" }
                )?;
            }
        }
    }
    Ok(())
}

fn report_channel(
    ch: &KrausChannel,
    cut: Option<&str>,
    config: &AnalysisConfig,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    if let Some(text) = cut {
        let n = ch.dims().parties();
        let choi = ch.choi();
        let bip = parse_cut(text, 2 * n, Some(n))?;
        let r = choi.cut_rank(&bip)?;
        writeln!(
            out,
            "choi cut {text}: schmidt {} {} (method: {})",
            if r.exact { "rank" } else { "number <=" },
            r.rank,
            if r.exact { "SVD of the pure Choi vector" } else { "max over Kraus-induced pure decomposition" }
        )?;
        let is_swap = ch.kraus().len() == 1
            && ch.dims().bipartite().is_ok_and(|(a, b)| a == b)
            && ch.kraus()[0].max_abs_diff(&swap_operator(ch.dims().get(0))) < 1e-12;
        let pairs_own_systems = (0..n).all(|a| {
            let l = bip.left();
            l.contains(&a) == l.contains(&(n + a))
        });
        if is_swap && pairs_own_systems && n == 2 {
            let d = ch.dims().get(0);
            writeln!(
                out,
                "note: pairing each reference with its own system gives rank d^2 = {}, not d = {d}",
                d * d
            )?;
        }
        return Ok(());
    }
    if ch.kraus().len() == 1 {
        let r = channel_schmidt_rank_rank1(&ch.kraus()[0], ch.dims(), config)?;
        writeln!(out, "channel schmidt rank: {} (method: max over product inputs; lower bound)", r.rank)?;
    }
    let b = channel_schmidt_number_bounds(ch, config)?;
    writeln!(out, "channel schmidt number: ({}, {}) (method: {})", b.lower, b.upper, b.method)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cuts() {
        let c = parse_cut("1:2", 2, None).unwrap();
        assert_eq!((c.left(), c.right()), (&[0][..], &[1][..]));
        let c = parse_cut("(R1,1):(R2,2)", 4, Some(2)).unwrap();
        assert_eq!((c.left(), c.right()), (&[0, 2][..], &[1, 3][..]));
        let c = parse_cut("R1,R2", 4, Some(2)).unwrap();
        assert_eq!(c.right(), &[2, 3][..]);
        assert!(parse_cut("1:1", 2, None).is_err());
        assert!(parse_cut("3:1", 2, None).is_err());
        assert!(parse_cut("R1:1", 2, None).is_err());
        assert!(parse_cut("1,2", 2, None).is_err());
    }
}
