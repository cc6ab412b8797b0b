//! Triangular (Reck-style) decomposition of an n x n unitary into beam
//! splitters and phase shifters.
//!
//! The adjoint `V = U^dagger` is reduced to a diagonal by nulling its
//! sub-diagonal entries column by column, bottom row first, each step mixing
//! two neighbouring rows with `M = BS(theta) PS_a(phi)`:
//!
//! ```text
//! M_K ... M_1 U^dagger = D   =>   U = D^* M_K ... M_1
//! ```
//!
//! so the emitted chronological sequence is `M_1, ..., M_K` followed by one
//! phase shifter per mode for `D^*`. Every beam splitter angle lies in
//! `[0, pi/2]`; all complex phases live in phase shifters.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::blocks::Element;
use crate::error::{Error, Result};
use crate::numkit::{ComplexMatrix, C64};

/// Mesh layout used to decompose unitary factors. Any scheme must satisfy the
/// [`reck_decompose`] contract: same preconditions, element list whose
/// product reconstructs the input.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MeshScheme {
    #[default]
    Reck,
}

impl MeshScheme {
    pub fn decompose(self, u: &ComplexMatrix, tol: f64) -> Result<Vec<Element>> {
        match self {
            MeshScheme::Reck => reck_decompose(u, tol),
        }
    }
}

/// Phases this small are rounding residue; dropping one moves the product by
/// less than 1e-15.
const NEGLIGIBLE_PHASE: f64 = 4.0 * f64::EPSILON;

/// Decomposes a unitary into chronologically ordered elements on modes
/// `0..n`. Zero-parameter elements are omitted, so the identity yields an
/// empty list.
pub fn reck_decompose(u: &ComplexMatrix, tol: f64) -> Result<Vec<Element>> {
    if !u.is_square() {
        return Err(Error::Shape(format!(
            "mesh decomposition needs a square matrix, got {}x{}",
            u.rows(),
            u.cols()
        )));
    }
    u.check_finite()?;
    let deviation = u.unitarity_deviation();
    if deviation.is_nan() || deviation >= tol {
        return Err(Error::NotUnitary { deviation });
    }

    let n = u.rows();
    let mut v = u.adjoint();
    let mut elements = Vec::new();
    for col in 0..n.saturating_sub(1) {
        for b in (col + 1..n).rev() {
            let a = b - 1;
            let (x, y) = (v[(a, col)], v[(b, col)]);
            if y.norm() == 0.0 {
                continue;
            }
            let phi = wrap_phase(arg(y) - arg(x));
            let theta = y.norm().atan2(x.norm());

            let (c, s) = (theta.cos(), theta.sin());
            let rot = C64::from_polar(1.0, phi);
            for k in 0..n {
                let va = v[(a, k)] * rot;
                let vb = v[(b, k)];
                v[(a, k)] = va * c + vb * s;
                v[(b, k)] = vb * c - va * s;
            }
            if phi.abs() > NEGLIGIBLE_PHASE {
                elements.push(Element::phase(a, phi));
            }
            if theta != 0.0 {
                elements.push(Element::beam_splitter(a, b, theta));
            }
        }
    }
    for k in 0..n {
        let phi = wrap_phase(-arg(v[(k, k)]));
        if phi.abs() > NEGLIGIBLE_PHASE {
            elements.push(Element::phase(k, phi));
        }
    }
    Ok(elements)
}

/// The n x n mode transformation realised by passive elements, or `None` if
/// an element is active or addresses a mode outside `0..n`.
pub fn elements_unitary(elements: &[Element], n: usize) -> Option<ComplexMatrix> {
    let mut m = ComplexMatrix::identity(n);
    for e in elements {
        if e.validate(n).is_err() {
            return None;
        }
        match *e {
            Element::PhaseShifter { mode, phi } => {
                let z = C64::from_polar(1.0, phi);
                for k in 0..n {
                    m[(mode, k)] *= z;
                }
            }
            Element::BeamSplitter { modes: [a, b], theta } => {
                let (c, s) = (theta.cos(), theta.sin());
                for k in 0..n {
                    let (ra, rb) = (m[(a, k)], m[(b, k)]);
                    m[(a, k)] = ra * c + rb * s;
                    m[(b, k)] = rb * c - ra * s;
                }
            }
            Element::TwoModeSqueezer { .. } => return None,
        }
    }
    Some(m)
}

/// Max-entry deviation between the elements' product and `u`; infinity when
/// the elements cannot be evaluated as a unitary of `u`'s size.
pub fn mesh_verify(elements: &[Element], u: &ComplexMatrix, _tol: f64) -> f64 {
    if !u.is_square() {
        return f64::INFINITY;
    }
    elements_unitary(elements, u.rows()).map_or(f64::INFINITY, |m| m.max_abs_diff(u))
}

/// Argument with `arg(0) = 0`.
pub(crate) fn arg(z: C64) -> f64 {
    if z.norm() == 0.0 {
        0.0
    } else {
        z.arg()
    }
}

/// Maps a phase to `(-pi, pi]`.
pub(crate) fn wrap_phase(phi: f64) -> f64 {
    let mut p = phi % (2.0 * PI);
    if p <= -PI {
        p += 2.0 * PI;
    } else if p > PI {
        p -= 2.0 * PI;
    }
    p
}
