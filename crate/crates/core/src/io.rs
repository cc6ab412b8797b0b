//! JSON file formats shared by the command-line front end.
//!
//! Every top-level document carries `"schema": "qsynth/1"`. Matrices use the
//! `{rows, cols, data: [[re, im], ...]}` form of [`ComplexMatrix`].

use std::fs;
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::blocks::Circuit;
use crate::closedform::Params2x2;
use crate::numkit::{ComplexMatrix, C64};
use crate::sim::{FockState, GaussianMoments};
use crate::synth::{ElementCounts, SynthesisResult};

pub const SCHEMA: &str = "qsynth/1";

fn schema() -> String {
    SCHEMA.to_string()
}

#[derive(Debug, thiserror::Error)]
pub enum ReadError {
    #[error("cannot read {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("malformed JSON in {path}: {source}")]
    Json {
        path: PathBuf,
        source: serde_json::Error,
    },
    #[error("{path}: unsupported schema {found:?}, expected {SCHEMA:?}")]
    Schema { path: PathBuf, found: String },
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, ReadError> {
    let text = fs::read_to_string(path).map_err(|source| ReadError::Io {
        path: path.to_owned(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|source| ReadError::Json {
        path: path.to_owned(),
        source,
    })
}

pub fn to_json_string<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("plain data serialises")
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> std::io::Result<()> {
    let mut text = to_json_string(value);
    text.push('\n');
    fs::write(path, text)
}

/// Netlist document: the circuit fields at top level next to `schema`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NetlistFile {
    #[serde(default = "schema")]
    pub schema: String,
    #[serde(flatten)]
    pub circuit: Circuit,
}

impl NetlistFile {
    pub fn new(circuit: Circuit) -> Self {
        NetlistFile {
            schema: schema(),
            circuit,
        }
    }

    pub fn read(path: &Path) -> Result<Circuit, ReadError> {
        let file: NetlistFile = read_json(path)?;
        if file.schema != SCHEMA {
            return Err(ReadError::Schema {
                path: path.to_owned(),
                found: file.schema,
            });
        }
        Ok(file.circuit)
    }
}

/// Post-synthesis checks written next to the netlist.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub schema: String,
    pub n: usize,
    pub m: usize,
    pub n_modes: usize,
    pub n_full_ancillas: usize,
    pub passive: bool,
    pub singular_values: Vec<f64>,
    pub counts: ElementCounts,
    pub quasiunitarity_deviation: f64,
    pub block_deviation: f64,
    pub circuit_deviation: f64,
    /// `max |<a_out> - T alpha|` for a seeded random coherent input; absent
    /// when no seed was given.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mean_field_deviation: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub tol: f64,
    pub ok: bool,
}

impl VerificationReport {
    pub fn new(r: &SynthesisResult, tol: f64) -> Self {
        let ok = r.quasiunitarity_deviation < tol && r.block_deviation < tol;
        VerificationReport {
            schema: schema(),
            n: r.n,
            m: r.m,
            n_modes: r.circuit.n_modes,
            n_full_ancillas: r.n_full_ancillas(),
            passive: r.circuit.is_passive(),
            singular_values: r.singular_values.clone(),
            counts: r.counts,
            quasiunitarity_deviation: r.quasiunitarity_deviation,
            block_deviation: r.block_deviation,
            circuit_deviation: r.circuit_deviation,
            mean_field_deviation: None,
            seed: None,
            tol,
            ok,
        }
    }

    pub fn with_mean_field(mut self, seed: u64, deviation: f64) -> Self {
        self.seed = Some(seed);
        self.mean_field_deviation = Some(deviation);
        self.ok &= deviation < self.tol;
        self
    }
}

/// One row of a Fock outcome table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Outcome {
    pub occupation: Vec<u32>,
    pub re: f64,
    pub im: f64,
    pub prob: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutcomeTable {
    pub schema: String,
    pub input: Vec<u32>,
    /// Probability mass kept by the predicate; the rows are renormalised by it.
    pub acceptance: f64,
    pub outcomes: Vec<Outcome>,
}

impl OutcomeTable {
    pub fn new(input: Vec<u32>, state: &FockState, acceptance: f64) -> Self {
        let outcomes = state
            .iter()
            .map(|(occ, amp)| Outcome {
                occupation: occ.to_vec(),
                re: amp.re,
                im: amp.im,
                prob: amp.norm_sqr(),
            })
            .collect();
        OutcomeTable {
            schema: schema(),
            input,
            acceptance,
            outcomes,
        }
    }

    pub fn probability(&self, occupation: &[u32]) -> f64 {
        self.outcomes
            .iter()
            .find(|o| o.occupation == occupation)
            .map_or(0.0, |o| o.prob)
    }
}

/// Output mean field of one mode.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModeMean {
    pub mode: usize,
    pub re: f64,
    pub im: f64,
    pub photon_number: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeansTable {
    pub schema: String,
    pub commutator_residual: f64,
    pub means: Vec<ModeMean>,
}

impl MeansTable {
    pub fn new(g: &GaussianMoments) -> Self {
        let means = g
            .means()
            .iter()
            .enumerate()
            .map(|(mode, z)| ModeMean {
                mode,
                re: z.re,
                im: z.im,
                photon_number: g.photon_number(mode),
            })
            .collect();
        MeansTable {
            schema: schema(),
            commutator_residual: g.commutator_residual(),
            means,
        }
    }
}

/// Output of the `naimark` command.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NaimarkFile {
    pub schema: String,
    pub extension: ComplexMatrix,
    pub unitarity_deviation: f64,
    pub netlist: NetlistFile,
}

/// Output of the `analytic2x2` command.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Analytic2x2File {
    pub schema: String,
    pub params: Params2x2,
    pub reconstruction_deviation: f64,
    pub netlist: NetlistFile,
}

/// `[[re, im], ...]` coherent amplitudes.
pub fn parse_amplitudes(pairs: &[[f64; 2]]) -> Vec<C64> {
    pairs.iter().map(|&[re, im]| C64::new(re, im)).collect()
}

/// Parses an occupation list such as `"1,1,0"`.
pub fn parse_occupation(spec: &str) -> Result<Vec<u32>, String> {
    spec.split(',')
        .map(|s| {
            s.trim()
                .parse::<u32>()
                .map_err(|e| format!("bad occupation entry {s:?}: {e}"))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::blocks::Element;

    #[test]
    fn netlist_is_flat_with_schema() {
        let mut c = Circuit::empty(2);
        c.elements.push(Element::beam_splitter(0, 1, 0.5));
        let v = serde_json::to_value(NetlistFile::new(c.clone())).unwrap();
        assert_eq!(v["schema"], SCHEMA);
        assert_eq!(v["n_modes"], 2);
        assert_eq!(v["elements"][0]["type"], "bs");
        let back: NetlistFile = serde_json::from_value(v).unwrap();
        assert_eq!(back.circuit, c);
    }

    #[test]
    fn wrong_schema_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("n.json");
        let mut v = serde_json::to_value(NetlistFile::new(Circuit::empty(1))).unwrap();
        v["schema"] = "qsynth/0".into();
        std::fs::write(&path, v.to_string()).unwrap();
        assert!(matches!(NetlistFile::read(&path), Err(ReadError::Schema { .. })));
    }

    #[test]
    fn occupation_spec() {
        assert_eq!(parse_occupation("1, 1,0").unwrap(), vec![1, 1, 0]);
        assert!(parse_occupation("1,-1").is_err());
        assert!(parse_occupation("").is_err());
    }
}
