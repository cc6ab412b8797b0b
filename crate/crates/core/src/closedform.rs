//! Closed-form decomposition of an arbitrary complex 2 x 2 transformation.
//!
//! `T` is brought to the real upper-triangular form
//!
//! ```text
//! T_re = PS1(-xi1) PS2(-xi2) BS(vartheta) PS1(-phi11) PS2(-phi21) T PS1(xi1)
//!      = [[|t~11|, |t~12|], [0, |t~22|]]
//! ```
//!
//! whose SVD is two real rotations, `T_re = BS(theta1) D BS(theta2)`. Undoing
//! the phases gives
//!
//! ```text
//! T = PS2(phi21) PS1(phi11) BS(-vartheta) PS2(xi2) PS1(xi1) BS(theta1)   (= U)
//!     . D . BS(theta2) PS1(-xi1)                                          (= W)
//! ```
//!
//! and `U` collapses to `PS1(alpha1) PS2(alpha2) BS(gamma) PS1(beta1) PS2(beta2)`.
//! Here `BS(t) = [[cos t, sin t], [-sin t, cos t]]`, `PS1(t) = diag(e^{it}, 1)`
//! and `PS2(t) = diag(1, e^{it})`. All phases are normalised to `(-pi, pi]`.

use serde::{Deserialize, Serialize};

use crate::blocks::{circuit_smatrix, Circuit, Element};
use crate::error::{Error, Result};
use crate::mesh::{arg, wrap_phase};
use crate::numkit::{self, ComplexMatrix, C64};
use crate::synth::{classify_singulars, singular_element, ElementCounts, SynthesisResult};

/// Largest tolerated excess of `|cos gamma|` above 1 before clamping.
const GAMMA_CLAMP_SLACK: f64 = 1e-12;

/// Parameters of the closed-form 2 x 2 decomposition.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Params2x2 {
    /// Phases of `t11` and `t21`.
    pub phi11: f64,
    pub phi21: f64,
    /// Rotation nulling the bottom-left entry.
    pub vartheta: f64,
    pub xi1: f64,
    pub xi2: f64,
    pub theta1: f64,
    pub theta2: f64,
    pub sigma1: f64,
    pub sigma2: f64,
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub alpha1: f64,
    pub alpha2: f64,
    pub beta1: f64,
    pub beta2: f64,
}

fn bs(theta: f64) -> ComplexMatrix {
    let (c, s) = (theta.cos(), theta.sin());
    ComplexMatrix::from_real_rows(&[&[c, s], &[-s, c]]).expect("2x2")
}

fn ps1(phi: f64) -> ComplexMatrix {
    ComplexMatrix::from_diagonal(&[C64::from_polar(1.0, phi), C64::new(1.0, 0.0)])
}

fn ps2(phi: f64) -> ComplexMatrix {
    ComplexMatrix::from_diagonal(&[C64::new(1.0, 0.0), C64::from_polar(1.0, phi)])
}

fn chain(factors: &[ComplexMatrix]) -> ComplexMatrix {
    factors.iter().fold(ComplexMatrix::identity(2), |acc, f| &acc * f)
}

/// Computes the closed-form parameters of a 2 x 2 matrix.
pub fn analytic_params(t: &ComplexMatrix) -> Result<Params2x2> {
    if t.rows() != 2 || t.cols() != 2 {
        return Err(Error::Shape(format!(
            "closed form needs a 2x2 matrix, got {}x{}",
            t.rows(),
            t.cols()
        )));
    }
    t.check_finite()?;

    let phi11 = arg(t[(0, 0)]);
    let phi21 = arg(t[(1, 0)]);
    // atan2 covers |t11| = 0 (vartheta = pi/2)
    let vartheta = t[(1, 0)].norm().atan2(t[(0, 0)].norm());
    let (cv, sv) = (vartheta.cos(), vartheta.sin());

    let e12 = C64::from_polar(t[(0, 1)].norm(), phi12_rel(t, 0));
    let e22 = C64::from_polar(t[(1, 1)].norm(), phi12_rel(t, 1));
    let tt11 = t[(0, 0)].norm() * cv + t[(1, 0)].norm() * sv;
    let tt12 = e12 * cv + e22 * sv;
    let tt22 = -e12 * sv + e22 * cv;

    let xi1 = arg(tt12);
    let xi2 = arg(tt22);

    let (a, b, d) = (tt11.abs(), tt12.norm(), tt22.norm());
    let p1 = b * d;
    let p2 = a * b;
    let q1 = a * a - d * d + b * b;
    let q2 = a * a - d * d - b * b;
    let theta1 = -0.5 * arg(C64::new(q1, 2.0 * p1));
    let theta2 = 0.5 * arg(C64::new(q2, 2.0 * p2));

    let s = a * a + b * b + d * d;
    let sigma1 = ((s + (q1 * q1 + 4.0 * p1 * p1).sqrt()) / 2.0).sqrt();
    // sigma1 * sigma2 = det T_re = a d; the difference form of sigma2 loses
    // half its digits when sigma2 << sigma1.
    let sigma2 = if sigma1 > 0.0 { a * d / sigma1 } else { 0.0 };

    let rel = C64::from_polar(1.0, xi2 - xi1);
    let (c1, s1) = (theta1.cos(), theta1.sin());
    let z_alpha = cv * c1 + rel * sv * s1;
    let z_beta = cv * s1 - rel * sv * c1;
    let alpha = arg(z_alpha);
    let beta = arg(z_beta);
    let cos_gamma = z_alpha.norm();
    if cos_gamma > 1.0 + GAMMA_CLAMP_SLACK {
        return Err(Error::OutOfRange {
            what: "cos gamma",
            value: cos_gamma,
            range: "[0, 1]",
        });
    }
    let gamma = cos_gamma.clamp(0.0, 1.0).acos();

    Ok(Params2x2 {
        phi11,
        phi21,
        vartheta,
        xi1,
        xi2,
        theta1,
        theta2,
        sigma1,
        sigma2,
        alpha,
        beta,
        gamma,
        alpha1: wrap_phase(phi11 + xi1 + (alpha + beta) / 2.0),
        alpha2: wrap_phase(phi21 + xi2 - (alpha + beta) / 2.0),
        beta1: wrap_phase((alpha - beta) / 2.0),
        beta2: wrap_phase((beta - alpha) / 2.0),
    })
}

/// `phi_{r2} - phi_{r1}` for row `r`.
fn phi12_rel(t: &ComplexMatrix, r: usize) -> f64 {
    arg(t[(r, 1)]) - arg(t[(r, 0)])
}

impl Params2x2 {
    pub fn d_matrix(&self) -> ComplexMatrix {
        ComplexMatrix::from_real_diagonal(&[self.sigma1, self.sigma2])
    }

    /// `U` from the unsimplified chain.
    pub fn u_chain(&self) -> ComplexMatrix {
        chain(&[
            ps2(self.phi21),
            ps1(self.phi11),
            bs(-self.vartheta),
            ps2(self.xi2),
            ps1(self.xi1),
            bs(self.theta1),
        ])
    }

    /// `U = PS1(alpha1) PS2(alpha2) BS(gamma) PS1(beta1) PS2(beta2)`.
    pub fn u_simplified(&self) -> ComplexMatrix {
        chain(&[
            ps1(self.alpha1),
            ps2(self.alpha2),
            bs(self.gamma),
            ps1(self.beta1),
            ps2(self.beta2),
        ])
    }

    pub fn w(&self) -> ComplexMatrix {
        chain(&[bs(self.theta2), ps1(-self.xi1)])
    }

    /// `T` rebuilt from the unsimplified chain.
    pub fn reconstruct(&self) -> ComplexMatrix {
        chain(&[self.u_chain(), self.d_matrix(), self.w()])
    }
}

/// Builds the netlist and `S_total` directly from closed-form parameters,
/// using the simplified `U`. Deviations are measured against
/// [`Params2x2::reconstruct`].
pub fn analytic_circuit(p: &Params2x2, eps_sigma: f64) -> Result<SynthesisResult> {
    let classification = classify_singulars(&[p.sigma1, p.sigma2], eps_sigma, 2)?;
    let n_modes = classification.n_modes;

    // chronological: W, then the singular stage, then U
    let mut elements = vec![Element::phase(0, -p.xi1), Element::beam_splitter(0, 1, p.theta2)];
    for (j, ms) in classification.modes.iter().enumerate() {
        if let Some(anc) = ms.ancilla {
            elements.push(singular_element(j, anc, ms.sigma));
        }
    }
    elements.extend([
        Element::phase(1, p.beta2),
        Element::phase(0, p.beta1),
        Element::beam_splitter(0, 1, p.gamma),
        Element::phase(1, p.alpha2),
        Element::phase(0, p.alpha1),
    ]);

    let circuit = Circuit {
        n_modes,
        n_nominal: 2,
        ancilla_inputs: Vec::new(),
        ancilla_outputs: Vec::new(),
        full_ancillas: (2..n_modes).collect(),
        elements,
    };
    let s_total = circuit_smatrix(&circuit)?;
    let mut counts = ElementCounts::tally(&circuit.elements);
    counts.mesh_beam_splitters = 2;

    let t = p.reconstruct();
    let block_deviation = numkit::upper_left_block(&s_total, 2, 2)?.max_abs_diff(&t);
    let quasiunitarity_deviation = numkit::quasiunitarity_deviation(&s_total)?;
    Ok(SynthesisResult {
        n: 2,
        m: 2,
        circuit,
        s_total,
        classification,
        counts,
        singular_values: vec![p.sigma1, p.sigma2],
        block_deviation,
        quasiunitarity_deviation,
        circuit_deviation: 0.0,
    })
}
