//! JSON specs for states, channels and witnesses.
//!
//! Matrices are row-major arrays of rows; each entry is `[re, im]` or a bare
//! real number. Every spec carries an explicit `"dims"` list.

use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::channels::{
    example1_channel, measurement_channel, mixing_channel, random_unitary_channel, KrausChannel,
};
use crate::error::{Error, Result};
use crate::json::{matrix_from_rows, to_pairs};
use crate::linalg::{swap_operator, ComplexMatrix, Dims, C64};
use crate::optimize::OptimizationResult;
use crate::power::LabeledWitness;
use crate::states::{DensityMatrix, PureState};
use crate::witness::{ppt_witness_from_pure, Witness};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Entry {
    Real(f64),
    Complex([f64; 2]),
}

impl Entry {
    fn value(self) -> C64 {
        match self {
            Entry::Real(x) => C64::new(x, 0.0),
            Entry::Complex([re, im]) => C64::new(re, im),
        }
    }
}

pub type MatrixJson = Vec<Vec<Entry>>;

fn field_err(field: &str, e: impl std::fmt::Display) -> Error {
    Error::InvalidArgument(format!("{field}: {e}"))
}

fn in_field(field: &str) -> impl Fn(Error) -> Error + '_ {
    move |e| e.in_field(field)
}

fn parse_matrix(field: &str, m: &MatrixJson) -> Result<ComplexMatrix> {
    let rows: Vec<Vec<[f64; 2]>> = m
        .iter()
        .map(|row| row.iter().map(|e| { let z = e.value(); [z.re, z.im] }).collect())
        .collect();
    matrix_from_rows(&rows).map_err(|e| field_err(field, e))
}

fn parse_square(field: &str, m: &MatrixJson, dims: &Dims) -> Result<ComplexMatrix> {
    let m = parse_matrix(field, m)?;
    dims.check_matrix(&m).map_err(|e| e.in_field(field))?;
    Ok(m)
}

fn parse_vector(field: &str, v: &[Entry], dims: &Dims) -> Result<Vec<C64>> {
    if v.len() != dims.total() {
        return Err(Error::DimensionMismatch(format!(
            "{field}: {} amplitudes for dims {dims}",
            v.len()
        )));
    }
    Ok(v.iter().map(|e| e.value()).collect())
}

fn parse_dims(field: &str, dims: &[usize]) -> Result<Dims> {
    Dims::new(dims.to_vec()).map_err(in_field(field))
}

pub fn matrix_json(m: &ComplexMatrix) -> MatrixJson {
    (0..m.rows())
        .map(|i| m.row(i).iter().map(|z| Entry::Complex([z.re, z.im])).collect())
        .collect()
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum StatePayload {
    Pure { amplitudes: Vec<Entry> },
    Mixed { matrix: MatrixJson },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StateSpec {
    pub dims: Vec<usize>,
    #[serde(flatten)]
    pub payload: StatePayload,
}

#[derive(Debug)]
pub enum State {
    Pure(PureState),
    Mixed(DensityMatrix),
}

impl StateSpec {
    pub fn build(&self) -> Result<State> {
        let dims = parse_dims("dims", &self.dims)?;
        match &self.payload {
            StatePayload::Pure { amplitudes } => {
                let v = parse_vector("amplitudes", amplitudes, &dims)?;
                Ok(State::Pure(PureState::new(v, dims).map_err(in_field("amplitudes"))?))
            }
            StatePayload::Mixed { matrix } => {
                let m = parse_square("matrix", matrix, &dims)?;
                Ok(State::Mixed(DensityMatrix::new(m, dims).map_err(in_field("matrix"))?))
            }
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WitnessPayload {
    Matrix { matrix: MatrixJson },
    Shifted { lambda: f64, test_op: MatrixJson },
    Swap {},
    PptPure { amplitudes: Vec<Entry> },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WitnessSpec {
    /// Defaults to the enclosing channel's dims when embedded.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dims: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    #[serde(flatten)]
    pub payload: WitnessPayload,
}

impl WitnessSpec {
    pub fn build(&self, default_dims: Option<&Dims>, field: &str) -> Result<LabeledWitness> {
        let dims = match (&self.dims, default_dims) {
            (Some(d), _) => parse_dims(&format!("{field}.dims"), d)?,
            (None, Some(d)) => d.clone(),
            (None, None) => return Err(field_err(field, "missing field `dims`")),
        };
        let (label, witness) = match &self.payload {
            WitnessPayload::Matrix { matrix } => {
                let m = parse_square(&format!("{field}.matrix"), matrix, &dims)?;
                ("matrix".to_string(), Witness::new(m, dims).map_err(in_field(field))?)
            }
            WitnessPayload::Shifted { lambda, test_op } => {
                let l = parse_square(&format!("{field}.test_op"), test_op, &dims)?;
                (
                    format!("{lambda}*I - L"),
                    Witness::shifted(*lambda, l, dims).map_err(in_field(field))?,
                )
            }
            WitnessPayload::Swap {} => {
                let (a, b) = dims.bipartite().map_err(in_field(field))?;
                if a != b {
                    return Err(field_err(field, "swap needs equal local dimensions"));
                }
                ("swap".to_string(), Witness::new(swap_operator(a), dims)?)
            }
            WitnessPayload::PptPure { amplitudes } => {
                let v = parse_vector(&format!("{field}.amplitudes"), amplitudes, &dims)?;
                let psi = PureState::new(v, dims).map_err(in_field(field))?;
                (
                    "ppt_pure".to_string(),
                    ppt_witness_from_pure(&psi).map_err(in_field(field))?,
                )
            }
        };
        Ok(LabeledWitness::new(self.label.clone().unwrap_or(label), witness))
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ChannelPayload {
    Kraus {
        kraus: Vec<MatrixJson>,
    },
    Measurement {
        effects: Vec<MatrixJson>,
        outputs: Vec<MatrixJson>,
    },
    RandomUnitary {
        unitaries: Vec<MatrixJson>,
        probabilities: Vec<f64>,
    },
    Example1 {
        k: usize,
        coefficients: Vec<f64>,
    },
    Mixing {
        p: f64,
        sigma: MatrixJson,
    },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ChannelSpec {
    pub dims: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    #[serde(flatten)]
    pub payload: ChannelPayload,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub witnesses: Vec<WitnessSpec>,
}

#[derive(Debug)]
pub struct BuiltChannel {
    pub channel: KrausChannel,
    pub witnesses: Vec<LabeledWitness>,
}

fn list<T>(field: &str, items: &[T], mut f: impl FnMut(&str, &T) -> Result<ComplexMatrix>) -> Result<Vec<ComplexMatrix>> {
    items
        .iter()
        .enumerate()
        .map(|(i, x)| f(&format!("{field}[{i}]"), x))
        .collect()
}

impl ChannelSpec {
    pub fn build(&self) -> Result<BuiltChannel> {
        let dims = parse_dims("dims", &self.dims)?;
        let channel = match &self.payload {
            ChannelPayload::Kraus { kraus } => {
                if kraus.is_empty() {
                    return Err(field_err("kraus", "empty list"));
                }
                let ops = list("kraus", kraus, |f, m| parse_square(f, m, &dims))?;
                KrausChannel::new(ops, dims.clone(), "kraus")?
            }
            ChannelPayload::Measurement { effects, outputs } => {
                let es = list("effects", effects, |f, m| parse_square(f, m, &dims))?;
                let os = list("outputs", outputs, |f, m| parse_square(f, m, &dims))?
                    .into_iter()
                    .enumerate()
                    .map(|(i, m)| {
                        DensityMatrix::new(m, dims.clone()).map_err(in_field(&format!("outputs[{i}]")))
                    })
                    .collect::<Result<Vec<_>>>()?;
                measurement_channel(es, os).map_err(in_field("effects"))?
            }
            ChannelPayload::RandomUnitary {
                unitaries,
                probabilities,
            } => {
                let us = list("unitaries", unitaries, |f, m| parse_square(f, m, &dims))?;
                random_unitary_channel(us, probabilities, dims.clone()).map_err(|e| match e {
                    Error::BadProbabilities(_) => field_err("probabilities", e),
                    Error::NotUnitary { index, .. } => field_err(&format!("unitaries[{index}]"), e),
                    other => other,
                })?
            }
            ChannelPayload::Example1 { k, coefficients } => {
                let (a, b) = dims.bipartite().map_err(in_field("dims"))?;
                if a != b {
                    return Err(field_err("dims", "example1 needs equal local dimensions"));
                }
                example1_channel(*k, a, coefficients).map_err(in_field("coefficients"))?
            }
            ChannelPayload::Mixing { p, sigma } => {
                let s = parse_square("sigma", sigma, &dims)?;
                let s = DensityMatrix::new(s, dims.clone()).map_err(in_field("sigma"))?;
                mixing_channel(*p, &s).map_err(in_field("p"))?
            }
        };
        let channel = match &self.label {
            Some(l) => channel.with_label(l.clone()),
            None => channel,
        };
        let witnesses = self
            .witnesses
            .iter()
            .enumerate()
            .map(|(i, w)| w.build(Some(&dims), &format!("witnesses[{i}]")))
            .collect::<Result<Vec<_>>>()?;
        Ok(BuiltChannel { channel, witnesses })
    }

    /// Kraus-form spec reproducing `ch`.
    pub fn from_channel(ch: &KrausChannel) -> Self {
        ChannelSpec {
            dims: ch.dims().as_slice().to_vec(),
            label: Some(ch.label().to_string()),
            payload: ChannelPayload::Kraus {
                kraus: ch.kraus().iter().map(matrix_json).collect(),
            },
            witnesses: Vec::new(),
        }
    }
}

#[derive(Debug)]
pub enum Spec {
    State(StateSpec),
    Channel(ChannelSpec),
}

fn from_value<T: serde::de::DeserializeOwned>(v: Value) -> Result<T> {
    serde_json::from_value(v).map_err(|e| Error::InvalidArgument(format!("spec: {e}")))
}

pub fn parse_spec(text: &str) -> Result<Spec> {
    let v: Value = serde_json::from_str(text)
        .map_err(|e| Error::InvalidArgument(format!("malformed JSON: {e}")))?;
    let kind = v
        .get("kind")
        .and_then(Value::as_str)
        .ok_or_else(|| field_err("kind", "missing or not a string"))?;
    match kind {
        "pure" | "mixed" => Ok(Spec::State(from_value(v)?)),
        "kraus" | "measurement" | "random_unitary" | "example1" | "mixing" => {
            Ok(Spec::Channel(from_value(v)?))
        }
        other => Err(field_err("kind", format!("unknown kind '{other}'"))),
    }
}

pub fn parse_channel_spec(text: &str) -> Result<ChannelSpec> {
    match parse_spec(text)? {
        Spec::Channel(c) => Ok(c),
        Spec::State(_) => Err(field_err("kind", "expected a channel spec")),
    }
}

pub fn parse_witness_spec(text: &str) -> Result<WitnessSpec> {
    from_value(
        serde_json::from_str(text).map_err(|e| Error::InvalidArgument(format!("malformed JSON: {e}")))?,
    )
}

pub fn read_spec(path: &Path) -> Result<Spec> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::InvalidArgument(format!("{}: {e}", path.display())))?;
    parse_spec(&text)
}

pub fn optimization_json(r: &OptimizationResult) -> Value {
    json!({
        "value": r.value,
        "argument": r.argument.parties().iter().map(|v| to_pairs(v)).collect::<Vec<_>>(),
        "restarts": r.restarts_used,
        "converged": r.converged,
        "spread": r.spread,
    })
}
