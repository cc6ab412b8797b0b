//! Elementary optical elements, their quasiunitary scattering matrices, and the
//! circuit (netlist) container.
//!
//! Every scattering matrix here acts on the stacked operator vector
//! `(a_0 .. a_{N-1}, a_0^dagger .. a_{N-1}^dagger)`. Mode indices are
//! 0-based. Elements in a [`Circuit`] are chronological: the first element
//! acts first, so the circuit matrix is the product with the *last* element
//! leftmost.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numkit::{ComplexMatrix, C64, ZERO};

/// One optical building block.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type")]
pub enum Element {
    /// `a -> e^{i phi} a`.
    #[serde(rename = "ps")]
    PhaseShifter { mode: usize, phi: f64 },
    /// Real rotation `[[cos, sin], [-sin, cos]]` on `(modes[0], modes[1])`.
    #[serde(rename = "bs")]
    BeamSplitter { modes: [usize; 2], theta: f64 },
    /// Parametric amplifier, `a_0 -> cosh(xi) a_0 + sinh(xi) a_1^dagger`.
    #[serde(rename = "tms")]
    TwoModeSqueezer { modes: [usize; 2], xi: f64 },
}

impl Element {
    pub fn phase(mode: usize, phi: f64) -> Self {
        Element::PhaseShifter { mode, phi }
    }

    pub fn beam_splitter(a: usize, b: usize, theta: f64) -> Self {
        Element::BeamSplitter { modes: [a, b], theta }
    }

    pub fn squeezer(a: usize, b: usize, xi: f64) -> Self {
        Element::TwoModeSqueezer { modes: [a, b], xi }
    }

    pub fn modes(&self) -> Vec<usize> {
        match *self {
            Element::PhaseShifter { mode, .. } => vec![mode],
            Element::BeamSplitter { modes, .. } | Element::TwoModeSqueezer { modes, .. } => modes.to_vec(),
        }
    }

    pub fn is_passive(&self) -> bool {
        !matches!(self, Element::TwoModeSqueezer { .. })
    }

    pub fn validate(&self, n_modes: usize) -> Result<()> {
        let modes = self.modes();
        if let Some(&mode) = modes.iter().find(|&&m| m >= n_modes) {
            return Err(Error::ModeOutOfRange { mode, n_modes });
        }
        if modes.len() == 2 && modes[0] == modes[1] {
            return Err(Error::RepeatedMode(modes[0]));
        }
        let param = match *self {
            Element::PhaseShifter { phi, .. } => phi,
            Element::BeamSplitter { theta, .. } => theta,
            Element::TwoModeSqueezer { xi, .. } => xi,
        };
        if !param.is_finite() {
            return Err(Error::OutOfRange {
                what: "element parameter",
                value: param,
                range: "finite",
            });
        }
        Ok(())
    }

    /// Scattering matrix on the element's own modes, ordered
    /// `(modes.., modes^dagger..)`: 2x2 for a phase shifter, 4x4 otherwise.
    pub fn local_smatrix(&self) -> ComplexMatrix {
        match *self {
            Element::PhaseShifter { phi, .. } => phase_matrix(phi),
            Element::BeamSplitter { theta, .. } => rotation_matrix(theta.cos(), theta.sin()),
            Element::TwoModeSqueezer { xi, .. } => amplifier_matrix(xi.cosh(), xi.sinh()),
        }
    }
}

/// Loss channel of transmission `sigma` realised by a beam splitter with a
/// vacuum ancilla, ordered `(a_1, a_2, a_1^dagger, a_2^dagger)`.
pub fn lift_loss(sigma: f64) -> Result<ComplexMatrix> {
    if !(0.0..1.0).contains(&sigma) {
        return Err(Error::OutOfRange {
            what: "loss sigma",
            value: sigma,
            range: "[0, 1)",
        });
    }
    Ok(rotation_matrix(sigma, (1.0 - sigma * sigma).sqrt()))
}

/// Gain channel `sigma > 1` realised by a parametric amplifier with a vacuum
/// ancilla (`cosh xi = sigma`).
pub fn lift_gain(sigma: f64) -> Result<ComplexMatrix> {
    if !(sigma > 1.0 && sigma.is_finite()) {
        return Err(Error::OutOfRange {
            what: "gain sigma",
            value: sigma,
            range: "(1, inf)",
        });
    }
    Ok(amplifier_matrix(sigma, (sigma * sigma - 1.0).sqrt()))
}

/// `diag(e^{i phi}, e^{-i phi})`.
pub fn lift_phase(phi: f64) -> Result<ComplexMatrix> {
    if !phi.is_finite() {
        return Err(Error::OutOfRange {
            what: "phase",
            value: phi,
            range: "finite",
        });
    }
    Ok(phase_matrix(phi))
}

fn phase_matrix(phi: f64) -> ComplexMatrix {
    ComplexMatrix::from_diagonal(&[C64::from_polar(1.0, phi), C64::from_polar(1.0, -phi)])
}

fn rotation_matrix(c: f64, s: f64) -> ComplexMatrix {
    let r = |x: f64| C64::new(x, 0.0);
    let mut m = ComplexMatrix::zeros(4, 4);
    for off in [0, 2] {
        m[(off, off)] = r(c);
        m[(off, off + 1)] = r(s);
        m[(off + 1, off)] = r(-s);
        m[(off + 1, off + 1)] = r(c);
    }
    m
}

fn amplifier_matrix(c: f64, s: f64) -> ComplexMatrix {
    let r = |x: f64| C64::new(x, 0.0);
    let mut m = ComplexMatrix::from_real_diagonal(&[c, c, c, c]);
    m[(0, 3)] = r(s);
    m[(1, 2)] = r(s);
    m[(2, 1)] = r(s);
    m[(3, 0)] = r(s);
    m
}

/// Row/column indices of the element inside a 2N x 2N scattering matrix.
fn embedded_indices(e: &Element, n_modes: usize) -> Vec<usize> {
    let modes = e.modes();
    modes
        .iter()
        .copied()
        .chain(modes.iter().map(|m| m + n_modes))
        .collect()
}

/// Places the element's local scattering matrix into the 2N x 2N identity.
pub fn embed_element(e: &Element, n_modes: usize) -> Result<ComplexMatrix> {
    e.validate(n_modes)?;
    Ok(embed_local(
        &e.local_smatrix(),
        &embedded_indices(e, n_modes),
        n_modes,
    ))
}

/// Embeds a local matrix at rows/cols `idx` of the 2N x 2N identity.
pub(crate) fn embed_local(local: &ComplexMatrix, idx: &[usize], n_modes: usize) -> ComplexMatrix {
    let mut s = ComplexMatrix::identity(2 * n_modes);
    for (li, &gi) in idx.iter().enumerate() {
        for (lj, &gj) in idx.iter().enumerate() {
            s[(gi, gj)] = local[(li, lj)];
        }
    }
    s
}

/// `s <- E s` for the embedded element `E`, touching only the element's rows.
pub(crate) fn apply_left(e: &Element, n_modes: usize, s: &mut ComplexMatrix) {
    let idx = embedded_indices(e, n_modes);
    let local = e.local_smatrix();
    let cols = s.cols();
    let old: Vec<Vec<C64>> = idx.iter().map(|&r| s.row(r).to_vec()).collect();
    for (li, &gi) in idx.iter().enumerate() {
        for c in 0..cols {
            let mut acc = ZERO;
            for (lj, row) in old.iter().enumerate() {
                acc += local[(li, lj)] * row[c];
            }
            s[(gi, c)] = acc;
        }
    }
}

/// A netlist: chronological element list plus mode bookkeeping.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Circuit {
    /// Total modes, ancillas included.
    pub n_modes: usize,
    /// Modes `0..n_nominal` belong to the (padded) transformation itself.
    pub n_nominal: usize,
    /// Padding modes that exist only on the input side.
    pub ancilla_inputs: Vec<usize>,
    /// Padding modes that exist only on the output side.
    pub ancilla_outputs: Vec<usize>,
    /// Vacuum-initialised modes present through the whole network.
    pub full_ancillas: Vec<usize>,
    pub elements: Vec<Element>,
}

impl Circuit {
    /// A circuit of `n_modes` nominal modes and no elements.
    pub fn empty(n_modes: usize) -> Self {
        Circuit {
            n_modes,
            n_nominal: n_modes,
            ancilla_inputs: Vec::new(),
            ancilla_outputs: Vec::new(),
            full_ancillas: Vec::new(),
            elements: Vec::new(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_nominal > self.n_modes {
            return Err(Error::Shape(format!(
                "{} nominal modes exceed {} total",
                self.n_nominal, self.n_modes
            )));
        }
        for &a in &self.full_ancillas {
            if a < self.n_nominal || a >= self.n_modes {
                return Err(Error::ModeOutOfRange {
                    mode: a,
                    n_modes: self.n_modes,
                });
            }
        }
        for &a in self.ancilla_inputs.iter().chain(&self.ancilla_outputs) {
            if a >= self.n_nominal {
                return Err(Error::ModeOutOfRange {
                    mode: a,
                    n_modes: self.n_nominal,
                });
            }
        }
        if self
            .ancilla_inputs
            .iter()
            .any(|a| self.ancilla_outputs.contains(a))
        {
            return Err(Error::Shape(
                "a padding mode is both input and output ancilla".into(),
            ));
        }
        self.elements.iter().try_for_each(|e| e.validate(self.n_modes))
    }

    pub fn is_passive(&self) -> bool {
        self.elements.iter().all(Element::is_passive)
    }

    /// Appends `other`'s elements, which then act after this circuit's.
    pub fn then(mut self, other: &Circuit) -> Result<Circuit> {
        if other.n_modes != self.n_modes {
            return Err(Error::Shape(format!(
                "cannot chain a {}-mode circuit after a {}-mode one",
                other.n_modes, self.n_modes
            )));
        }
        self.elements.extend_from_slice(&other.elements);
        Ok(self)
    }
}

/// Overall 2N x 2N scattering matrix of the circuit.
pub fn circuit_smatrix(c: &Circuit) -> Result<ComplexMatrix> {
    c.validate()?;
    Ok(elements_smatrix(&c.elements, c.n_modes))
}

/// Product of embedded elements, last element leftmost. Elements must already
/// be validated against `n_modes`.
pub(crate) fn elements_smatrix(elements: &[Element], n_modes: usize) -> ComplexMatrix {
    let mut s = ComplexMatrix::identity(2 * n_modes);
    for e in elements {
        apply_left(e, n_modes, &mut s);
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numkit::quasiunitarity_deviation;

    fn real(rows: &[&[f64]]) -> ComplexMatrix {
        ComplexMatrix::from_real_rows(rows).unwrap()
    }

    #[test]
    fn loss_lift_patterns() {
        let s = lift_loss(0.0).unwrap();
        let expected = real(&[
            &[0.0, 1.0, 0.0, 0.0],
            &[-1.0, 0.0, 0.0, 0.0],
            &[0.0, 0.0, 0.0, 1.0],
            &[0.0, 0.0, -1.0, 0.0],
        ]);
        assert_eq!(s, expected);

        let s = lift_loss(0.6).unwrap();
        assert!((s[(0, 0)].re - 0.6).abs() < 1e-15);
        assert!((s[(0, 1)].re - 0.8).abs() < 1e-15);
        assert!((s[(1, 0)].re + 0.8).abs() < 1e-15);
        assert!((s[(3, 2)].re + 0.8).abs() < 1e-15);

        assert!(quasiunitarity_deviation(&lift_loss(1.0 - 1e-3).unwrap()).unwrap() < 1e-14);
        assert!(lift_loss(1.0).is_err());
        assert!(lift_loss(-0.1).is_err());
    }

    #[test]
    fn gain_lift_patterns() {
        let s = lift_gain(2.0).unwrap();
        let r3 = 3f64.sqrt();
        for (r, c) in [(0, 3), (1, 2), (2, 1), (3, 0)] {
            assert_eq!(s[(r, c)].re, r3);
        }
        assert_eq!(s[(0, 0)].re, 2.0);
        let sigma = 0.5f64.cosh();
        let s = lift_gain(sigma).unwrap();
        assert!((s[(0, 0)].re.acosh() - 0.5).abs() < 1e-12);
        assert!(quasiunitarity_deviation(&lift_gain(5.0).unwrap()).unwrap() < 1e-13);
        assert!(lift_gain(1.0).is_err());
        assert!(lift_gain(0.3).is_err());
    }

    #[test]
    fn phase_lift_values() {
        assert_eq!(lift_phase(0.0).unwrap(), ComplexMatrix::identity(2));
        let s = lift_phase(std::f64::consts::PI).unwrap();
        assert!(s.max_abs_diff(&ComplexMatrix::identity(2).scale(C64::new(-1.0, 0.0))) < 1e-15);
        let s = lift_phase(std::f64::consts::FRAC_PI_2).unwrap();
        let expected = ComplexMatrix::from_diagonal(&[C64::new(0.0, 1.0), C64::new(0.0, -1.0)]);
        assert!(s.max_abs_diff(&expected) < 1e-15);
        assert!(lift_phase(f64::NAN).is_err());
    }

    #[test]
    fn embedding_examples() {
        assert_eq!(
            embed_element(&Element::phase(0, 0.0), 3).unwrap(),
            ComplexMatrix::identity(6)
        );

        // total-loss beam splitter between modes 1 and 2 of a 3-mode system
        let sd = embed_element(&Element::beam_splitter(1, 2, 0.0f64.acos()), 3).unwrap();
        let expected = real(&[
            &[1.0, 0.0, 0.0, 0.0, 0.0, 0.0],
            &[0.0, 0.0, 1.0, 0.0, 0.0, 0.0],
            &[0.0, -1.0, 0.0, 0.0, 0.0, 0.0],
            &[0.0, 0.0, 0.0, 1.0, 0.0, 0.0],
            &[0.0, 0.0, 0.0, 0.0, 0.0, 1.0],
            &[0.0, 0.0, 0.0, 0.0, -1.0, 0.0],
        ]);
        assert!(sd.max_abs_diff(&expected) < 1e-15);

        let xi = 2f64.acosh();
        let s = embed_element(&Element::squeezer(1, 3, xi), 4).unwrap();
        let r3 = 3f64.sqrt();
        assert!((s[(1, 1)].re - 2.0).abs() < 1e-14);
        assert!((s[(1, 7)].re - r3).abs() < 1e-14);
        assert!((s[(3, 5)].re - r3).abs() < 1e-14);
        assert!((s[(5, 3)].re - r3).abs() < 1e-14);
        assert!((s[(7, 1)].re - r3).abs() < 1e-14);
        assert!(quasiunitarity_deviation(&s).unwrap() < 1e-13);
    }

    #[test]
    fn embedding_rejects_bad_modes() {
        assert_eq!(
            embed_element(&Element::beam_splitter(0, 3, 0.1), 3).unwrap_err(),
            Error::ModeOutOfRange { mode: 3, n_modes: 3 }
        );
        assert_eq!(
            embed_element(&Element::squeezer(1, 1, 0.1), 3).unwrap_err(),
            Error::RepeatedMode(1)
        );
    }

    #[test]
    fn row_application_matches_explicit_embedding() {
        let elements = [
            Element::phase(2, 0.7),
            Element::beam_splitter(0, 2, 1.1),
            Element::squeezer(1, 3, 0.4),
            Element::beam_splitter(3, 1, -0.3),
            Element::phase(3, -2.0),
        ];
        let mut explicit = ComplexMatrix::identity(8);
        for e in &elements {
            explicit = &embed_element(e, 4).unwrap() * &explicit;
        }
        let fast = elements_smatrix(&elements, 4);
        assert!(fast.max_abs_diff(&explicit) < 1e-14);
    }

    #[test]
    fn empty_circuit_is_identity() {
        assert_eq!(
            circuit_smatrix(&Circuit::empty(2)).unwrap(),
            ComplexMatrix::identity(4)
        );
    }

    #[test]
    fn netlist_element_json_shape() {
        let e = Element::beam_splitter(0, 2, 0.25);
        assert_eq!(
            serde_json::to_string(&e).unwrap(),
            r#"{"type":"bs","modes":[0,2],"theta":0.25}"#
        );
        let p: Element = serde_json::from_str(r#"{"type":"ps","mode":1,"phi":-1.5}"#).unwrap();
        assert_eq!(p, Element::phase(1, -1.5));
        let t: Element = serde_json::from_str(r#"{"type":"tms","modes":[0,1],"xi":0.3}"#).unwrap();
        assert_eq!(t, Element::squeezer(0, 1, 0.3));
    }
}
