//! Applications: Naimark extensions of rank-one POVMs and verification of the
//! postselected linear-optical controlled-Z gate.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numkit::{svd, ComplexMatrix, C64};
use crate::sim::{fock_evolve, passive_block, postselect, CountPredicate};
use crate::synth::SynthesisResult;

/// Rank-one POVM `E_i = |phi_i><phi_i|` on an n-dimensional space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "PovmJson", into = "PovmJson")]
pub struct RankOnePovm {
    pub dim: usize,
    pub vectors: Vec<Vec<C64>>,
}

/// Wire form: `{"dim": n, "vectors": [[[re, im], ...], ...]}`, or
/// `{"dim": n, "operators": [matrix, ...]}` with rank-one operators.
#[derive(Serialize, Deserialize)]
struct PovmJson {
    dim: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    vectors: Option<Vec<Vec<[f64; 2]>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    operators: Option<Vec<ComplexMatrix>>,
}

/// Relative residual above which an operator is not considered rank one.
const RANK_ONE_TOL: f64 = 1e-9;

impl TryFrom<PovmJson> for RankOnePovm {
    type Error = Error;

    fn try_from(raw: PovmJson) -> Result<Self> {
        match (raw.vectors, raw.operators) {
            (Some(vs), None) => {
                let vectors = vs
                    .into_iter()
                    .map(|v| v.into_iter().map(|[re, im]| C64::new(re, im)).collect())
                    .collect();
                RankOnePovm::new(raw.dim, vectors)
            }
            (None, Some(ops)) => RankOnePovm::from_operators(raw.dim, &ops),
            _ => Err(Error::Shape(
                "POVM needs exactly one of `vectors` or `operators`".into(),
            )),
        }
    }
}

impl From<RankOnePovm> for PovmJson {
    fn from(p: RankOnePovm) -> Self {
        PovmJson {
            dim: p.dim,
            vectors: Some(
                p.vectors
                    .iter()
                    .map(|v| v.iter().map(|z| [z.re, z.im]).collect())
                    .collect(),
            ),
            operators: None,
        }
    }
}

impl RankOnePovm {
    pub fn new(dim: usize, vectors: Vec<Vec<C64>>) -> Result<Self> {
        if dim == 0 || vectors.is_empty() {
            return Err(Error::Shape(
                "POVM needs dim >= 1 and at least one element".into(),
            ));
        }
        if let Some(v) = vectors.iter().find(|v| v.len() != dim) {
            return Err(Error::Shape(format!(
                "POVM vector of length {} in dimension {dim}",
                v.len()
            )));
        }
        let p = RankOnePovm { dim, vectors };
        p.matrix().check_finite()?;
        Ok(p)
    }

    /// Factors each operator as `phi phi^dagger` using its largest-diagonal
    /// column; operators that are not rank one are rejected.
    pub fn from_operators(dim: usize, ops: &[ComplexMatrix]) -> Result<Self> {
        let mut vectors = Vec::with_capacity(ops.len());
        for (index, e) in ops.iter().enumerate() {
            if e.rows() != dim || e.cols() != dim {
                return Err(Error::Shape(format!(
                    "POVM operator {index} is {}x{}, expected {dim}x{dim}",
                    e.rows(),
                    e.cols()
                )));
            }
            let (k, diag) = (0..dim)
                .map(|k| (k, e[(k, k)].re))
                .max_by(|a, b| a.1.total_cmp(&b.1))
                .expect("dim >= 1");
            let phi: Vec<C64> = if diag > 0.0 {
                e.column(k).iter().map(|z| z / diag.sqrt()).collect()
            } else {
                vec![C64::new(0.0, 0.0); dim]
            };
            let outer = ComplexMatrix::from_fn(dim, dim, |r, c| phi[r] * phi[c].conj());
            let residual = outer.max_abs_diff(e);
            if residual > RANK_ONE_TOL * e.max_abs().max(1.0) {
                return Err(Error::NotRankOne { index, residual });
            }
            vectors.push(phi);
        }
        RankOnePovm::new(dim, vectors)
    }

    /// `T` with the POVM vectors as columns (n x m).
    pub fn matrix(&self) -> ComplexMatrix {
        ComplexMatrix::from_fn(self.dim, self.vectors.len(), |r, c| self.vectors[c][r])
    }

    /// `max |T T^dagger - I|`.
    pub fn completeness_deviation(&self) -> f64 {
        let t = self.matrix();
        (&t * &t.adjoint()).max_abs_diff(&ComplexMatrix::identity(self.dim))
    }

    /// `<psi|E_i|psi>` for every element.
    pub fn probabilities(&self, psi: &[C64]) -> Vec<f64> {
        self.vectors
            .iter()
            .map(|phi| {
                phi.iter()
                    .zip(psi)
                    .map(|(a, b)| a.conj() * b)
                    .sum::<C64>()
                    .norm_sqr()
            })
            .collect()
    }
}

/// m x m unitary whose first n rows are the POVM matrix `T`: measuring
/// `(psi, 0)` in the basis of its columns realises the POVM. The last `m - n`
/// rows are the ancilla outputs.
pub fn naimark_extension(p: &RankOnePovm, tol: f64) -> Result<ComplexMatrix> {
    let deviation = p.completeness_deviation();
    if deviation.is_nan() || deviation >= tol {
        return Err(Error::InvalidPovm { deviation });
    }
    let t = p.matrix();
    let (n, m) = (t.rows(), t.cols());
    let f = svd(&t)?;
    let worst = f.singulars.iter().map(|s| (s - 1.0).abs()).fold(0.0, f64::max);
    if worst.is_nan() || worst >= tol {
        return Err(Error::InvalidPovm { deviation: worst });
    }
    // U D W with D = I after padding: extension = diag(U, I_{m-n}) W
    let mut u_pad = ComplexMatrix::identity(m);
    u_pad.set_block(0, 0, &f.u);
    let ext = &u_pad * &f.w;
    debug_assert!(ext.submatrix(0, 0, n, m)?.max_abs_diff(&t) < 1e-8);
    Ok(ext)
}

/// The trine POVM on a qubit: three real vectors at 120 degrees.
pub fn trine_povm() -> RankOnePovm {
    let scale = (2.0f64 / 3.0).sqrt();
    let vectors = (0..3)
        .map(|i| {
            let angle = 2.0 * std::f64::consts::PI * i as f64 / 3.0;
            vec![
                C64::new(scale * angle.cos(), 0.0),
                C64::new(scale * angle.sin(), 0.0),
            ]
        })
        .collect();
    RankOnePovm { dim: 2, vectors }
}

/// Mode labels of the dual-rail controlled-Z gate.
pub const CZ_MODES: [&str; 4] = ["cH", "cV", "tH", "tV"];

/// Four-mode transformation of the postselected controlled-Z gate with
/// `t11 = sqrt(1/3)`, `t13 = t31 = sqrt(2/3)`.
pub fn cz_gate_target() -> ComplexMatrix {
    let a = (1.0f64 / 3.0).sqrt();
    let b = (2.0f64 / 3.0).sqrt();
    ComplexMatrix::from_real_rows(&[
        &[a, 0.0, b, 0.0],
        &[0.0, a, 0.0, 0.0],
        &[b, 0.0, -a, 0.0],
        &[0.0, 0.0, 0.0, -a],
    ])
    .expect("4x4")
}

/// `k = -t13 t31 / 2`, the postselected amplitude scale of the gate.
pub fn cz_k(t: &ComplexMatrix) -> C64 {
    -t[(0, 2)] * t[(2, 0)] / 2.0
}

/// Outcome of simulating the four computational inputs through a CZ network.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CzReport {
    /// Inputs in the order HH, HV, VH, VV (control, target).
    pub inputs: Vec<String>,
    /// Raw amplitude of the unchanged two-photon output for each input.
    pub amplitudes: Vec<[f64; 2]>,
    /// Amplitudes after dividing out the global phase of the VV branch.
    pub gauged_amplitudes: Vec<[f64; 2]>,
    /// Sign of each gauged amplitude; `[-1, 1, 1, 1]` for a CZ.
    pub phase_pattern: Vec<i8>,
    /// Postselection success probability for each input.
    pub success_probs: Vec<f64>,
    pub k: [f64; 2],
    pub n_full_ancillas: usize,
}

/// Fock-simulates the four dual-rail inputs through the passive network of
/// `result`, postselects one photon in the control pair and one in the target
/// pair, and checks the controlled-Z pattern within `tol`.
pub fn verify_cz(result: &SynthesisResult, tol: f64) -> Result<CzReport> {
    let a = passive_block(&result.s_total, tol)?;
    let n_modes = a.rows();
    if result.n != 4 || result.m != 4 {
        return Err(Error::Shape("CZ network must have 4 nominal modes".into()));
    }
    let t = a.submatrix(0, 0, 4, 4)?;
    let k = cz_k(&t);
    let predicate = CountPredicate::default().exactly(&[0, 1], 1).exactly(&[2, 3], 1);

    let mut report = CzReport {
        inputs: Vec::new(),
        amplitudes: Vec::new(),
        gauged_amplitudes: Vec::new(),
        phase_pattern: Vec::new(),
        success_probs: Vec::new(),
        k: [k.re, k.im],
        n_full_ancillas: result.n_full_ancillas(),
    };
    let mut raw = Vec::new();
    for control in 0..2 {
        for target in 2..4 {
            let mut occ = vec![0u32; n_modes];
            occ[control] = 1;
            occ[target] = 1;
            let out = fock_evolve(&a, &occ)?;
            let (kept, prob) = postselect(&out, |o| predicate.accepts(o))?;
            let amp = out.amplitude(&occ);
            // the postselected state must be the input state itself
            let leak = (kept.amplitude(&occ).norm_sqr() - 1.0).abs();
            if leak > tol {
                return Err(Error::CzMismatch(format!(
                    "input {}{} leaks into other postselected outcomes ({leak:e})",
                    CZ_MODES[control], CZ_MODES[target]
                )));
            }
            report
                .inputs
                .push(format!("{}{}", CZ_MODES[control], CZ_MODES[target]));
            report.success_probs.push(prob);
            raw.push(amp);
        }
    }

    let reference = raw[3] / raw[3].norm();
    let expected = [-1i8, 1, 1, 1];
    for (i, &amp) in raw.iter().enumerate() {
        let gauged = amp / reference;
        let sign = if gauged.re < 0.0 { -1 } else { 1 };
        report.amplitudes.push([amp.re, amp.im]);
        report.gauged_amplitudes.push([gauged.re, gauged.im]);
        report.phase_pattern.push(sign);
        let ideal = C64::new(f64::from(expected[i]) * k.norm(), 0.0);
        if (gauged - ideal).norm() > tol {
            return Err(Error::CzMismatch(format!(
                "input {} amplitude {gauged} differs from {ideal}",
                report.inputs[i]
            )));
        }
        if (report.success_probs[i] - k.norm_sqr()).abs() > tol {
            return Err(Error::CzMismatch(format!(
                "input {} success probability {} differs from k^2 = {}",
                report.inputs[i],
                report.success_probs[i],
                k.norm_sqr()
            )));
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::synth::{synthesize, SynthConfig};

    #[test]
    fn trine_extension_is_unitary() {
        let p = trine_povm();
        assert!(p.completeness_deviation() < 1e-15);
        let ext = naimark_extension(&p, 1e-10).unwrap();
        assert_eq!(ext.rows(), 3);
        assert!(ext.unitarity_deviation() < 1e-13);
        assert!(ext.submatrix(0, 0, 2, 3).unwrap().max_abs_diff(&p.matrix()) < 1e-13);
    }

    #[test]
    fn orthonormal_basis_extends_to_itself() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let p = RankOnePovm::new(
            2,
            vec![
                vec![C64::new(h, 0.0), C64::new(0.0, h)],
                vec![C64::new(h, 0.0), C64::new(0.0, -h)],
            ],
        )
        .unwrap();
        let ext = naimark_extension(&p, 1e-10).unwrap();
        assert!(ext.max_abs_diff(&p.matrix()) < 1e-14);
    }

    #[test]
    fn incomplete_povm_rejected() {
        let p = RankOnePovm::new(2, vec![vec![C64::new(1.0, 0.0), C64::new(0.0, 0.0)]]).unwrap();
        assert!(matches!(
            naimark_extension(&p, 1e-10),
            Err(Error::InvalidPovm { .. })
        ));
    }

    #[test]
    fn operator_form_factorises() {
        let trine = trine_povm();
        let ops: Vec<ComplexMatrix> = trine
            .vectors
            .iter()
            .map(|v| ComplexMatrix::from_fn(2, 2, |r, c| v[r] * v[c].conj()))
            .collect();
        let p = RankOnePovm::from_operators(2, &ops).unwrap();
        let psi = [C64::new(0.6, 0.0), C64::new(0.0, 0.8)];
        for (a, b) in p.probabilities(&psi).iter().zip(trine.probabilities(&psi)) {
            assert!((a - b).abs() < 1e-15);
        }
        let mixed = ComplexMatrix::identity(2).scale(C64::new(0.5, 0.0));
        assert!(matches!(
            RankOnePovm::from_operators(2, &[mixed]),
            Err(Error::NotRankOne { index: 0, .. })
        ));
    }

    #[test]
    fn povm_json_forms() {
        let json = r#"{"dim":1,"vectors":[[[0.6,0]],[[0,0.8]]]}"#;
        let p: RankOnePovm = serde_json::from_str(json).unwrap();
        assert!(p.completeness_deviation() < 1e-15);
        let json = r#"{"dim":1,"operators":[{"rows":1,"cols":1,"data":[[1,0]]}]}"#;
        let p: RankOnePovm = serde_json::from_str(json).unwrap();
        assert_eq!(p.vectors, vec![vec![C64::new(1.0, 0.0)]]);
        assert!(serde_json::from_str::<RankOnePovm>(r#"{"dim":1}"#).is_err());
    }

    #[test]
    fn cz_target_constants() {
        let t = cz_gate_target();
        assert!((t[(0, 0)].re - (1.0f64 / 3.0).sqrt()).abs() < 1e-16);
        let k = cz_k(&t);
        assert!((k.re + 1.0 / 3.0).abs() < 1e-15);
        assert!((k.norm_sqr() - 1.0 / 9.0).abs() < 1e-15);
        let f = svd(&t).unwrap();
        let r = (1.0f64 / 3.0).sqrt();
        for (s, want) in f.singulars.iter().zip([1.0, 1.0, r, r]) {
            assert!((s - want).abs() < 1e-12);
        }
    }

    #[test]
    fn cz_amplitudes() {
        let result = synthesize(&cz_gate_target(), &SynthConfig::default()).unwrap();
        let report = verify_cz(&result, 1e-10).unwrap();
        assert_eq!(report.phase_pattern, vec![-1, 1, 1, 1]);
        // raw amplitudes: HH +1/3, the others -1/3 (k = -1/3)
        assert!((report.amplitudes[0][0] - 1.0 / 3.0).abs() < 1e-12);
        assert!((report.amplitudes[1][0] + 1.0 / 3.0).abs() < 1e-12);
        assert_eq!(report.n_full_ancillas, 2);
    }
}
