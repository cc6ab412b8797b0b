//! Synthesis of an arbitrary complex transformation `T` (n outputs x m
//! inputs) into a quasiunitary `S_total` and a netlist.
//!
//! Pipeline:
//!
//! 1. `T = U D W` by SVD, then padding of all three factors to
//!    `max(n, m)` square with identity rows/columns.
//! 2. `U` and `W` are decomposed into meshes of phase shifters and beam
//!    splitters on the nominal modes.
//! 3. Every singular value with `|sigma - 1| > eps_sigma` receives its own
//!    full ancilla, numbered after the nominal modes in mode order.
//! 4. Each such `sigma` becomes a beam splitter (`sigma < 1`) or a two-mode
//!    squeezer (`sigma > 1`) coupling the nominal mode to its ancilla.
//! 5. `S_total = S_U * prod_j S_Dj * S_W`.
//!
//! The netlist lists `mesh(W)`, then the singular-value stage, then
//! `mesh(U)`.

use serde::{Deserialize, Serialize};

use crate::blocks::{self, Circuit, Element};
use crate::error::{Error, Result};
use crate::mesh::MeshScheme;
use crate::numkit::{self, svd, ComplexMatrix, SvdFactors, C64, DEFAULT_TOL};

/// Default threshold below which `|sigma - 1|` counts as unity.
pub const DEFAULT_EPS_SIGMA: f64 = 1e-9;

/// Knobs for [`synthesize`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SynthConfig {
    /// Absolute max-entry tolerance for all post-checks.
    pub tol: f64,
    /// Singular values within this distance of 1 compile to nothing.
    pub eps_sigma: f64,
    /// Largest accepted singular value.
    pub sigma_max: f64,
    pub mesh: MeshScheme,
}

impl Default for SynthConfig {
    fn default() -> Self {
        SynthConfig {
            tol: DEFAULT_TOL,
            eps_sigma: DEFAULT_EPS_SIGMA,
            sigma_max: 50f64.cosh(),
            mesh: MeshScheme::Reck,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SigmaClass {
    Unit,
    Loss,
    Gain,
}

/// Classification of one nominal mode's singular value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModeSigma {
    pub class: SigmaClass,
    pub sigma: f64,
    /// Full ancilla paired with this mode; present iff `class != Unit`.
    pub ancilla: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SingularClassification {
    pub n_nominal: usize,
    /// Total mode count, nominal plus full ancillas.
    pub n_modes: usize,
    /// One entry per nominal mode.
    pub modes: Vec<ModeSigma>,
}

impl SingularClassification {
    pub fn n_ancillas(&self) -> usize {
        self.n_modes - self.n_nominal
    }

    pub fn is_passive(&self) -> bool {
        self.modes.iter().all(|m| m.class != SigmaClass::Gain)
    }
}

/// Element tallies of a synthesized circuit.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ElementCounts {
    /// All beam splitters, mesh and loss stage.
    pub beam_splitters: usize,
    /// Beam splitters inside the `U` and `W` meshes.
    pub mesh_beam_splitters: usize,
    pub phase_shifters: usize,
    pub squeezers: usize,
}

impl ElementCounts {
    pub fn tally(elements: &[Element]) -> Self {
        let mut c = ElementCounts::default();
        for e in elements {
            match e {
                Element::PhaseShifter { .. } => c.phase_shifters += 1,
                Element::BeamSplitter { .. } => c.beam_splitters += 1,
                Element::TwoModeSqueezer { .. } => c.squeezers += 1,
            }
        }
        c
    }

    /// Elements coupling nominal modes to full ancillas.
    pub fn singular_stage(&self) -> usize {
        self.beam_splitters - self.mesh_beam_splitters + self.squeezers
    }

    pub fn within(&self, bounds: &CountBounds) -> bool {
        self.mesh_beam_splitters <= bounds.max_bs
            && self.phase_shifters <= bounds.max_ps
            && self.singular_stage() <= bounds.max_d
    }
}

/// Upper bounds on element counts for an n x m transformation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountBounds {
    /// Variable beam splitters in the two unitary meshes.
    pub max_bs: usize,
    /// Phase shifters in the two unitary meshes.
    pub max_ps: usize,
    /// Beam splitters or amplifiers in the singular-value stage.
    pub max_d: usize,
}

pub fn count_bounds(n: usize, m: usize) -> CountBounds {
    CountBounds {
        max_bs: n * n.saturating_sub(1) / 2 + m * m.saturating_sub(1) / 2,
        max_ps: n * (n + 1) / 2 + m * (m + 1) / 2,
        max_d: n.min(m),
    }
}

/// Everything produced by one synthesis run.
#[derive(Debug, Clone, PartialEq)]
pub struct SynthesisResult {
    /// Output count of `T`.
    pub n: usize,
    /// Input count of `T`.
    pub m: usize,
    pub circuit: Circuit,
    pub s_total: ComplexMatrix,
    pub classification: SingularClassification,
    pub counts: ElementCounts,
    pub singular_values: Vec<f64>,
    pub block_deviation: f64,
    pub quasiunitarity_deviation: f64,
    /// `max |circuit_smatrix(circuit) - s_total|`.
    pub circuit_deviation: f64,
}

impl SynthesisResult {
    pub fn n_full_ancillas(&self) -> usize {
        self.classification.n_ancillas()
    }
}

/// Pads the SVD factors of an n x m matrix to `max(n, m)` square matrices.
pub fn pad_factors(
    f: &SvdFactors,
    n: usize,
    m: usize,
) -> Result<(ComplexMatrix, ComplexMatrix, ComplexMatrix)> {
    check_factor_shapes(f, n, m)?;
    let size = n.max(m);
    let pad = |x: &ComplexMatrix| {
        let mut p = ComplexMatrix::identity(size);
        p.set_block(0, 0, x);
        p
    };
    let mut diag = vec![1.0; size];
    diag[..f.singulars.len()].copy_from_slice(&f.singulars);
    Ok((pad(&f.u), ComplexMatrix::from_real_diagonal(&diag), pad(&f.w)))
}

fn check_factor_shapes(f: &SvdFactors, n: usize, m: usize) -> Result<()> {
    let ok = f.u.rows() == n
        && f.u.is_square()
        && f.w.rows() == m
        && f.w.is_square()
        && f.singulars.len() == n.min(m);
    if ok {
        Ok(())
    } else {
        Err(Error::Shape(format!(
            "factors U {}x{}, W {}x{}, {} singular values do not fit a {n}x{m} matrix",
            f.u.rows(),
            f.u.cols(),
            f.w.rows(),
            f.w.cols(),
            f.singulars.len()
        )))
    }
}

/// Assigns a full ancilla to every singular value away from 1, in mode
/// order, numbered from `n_nominal`. Missing trailing values count as 1.
pub fn classify_singulars(
    singulars: &[f64],
    eps_sigma: f64,
    n_nominal: usize,
) -> Result<SingularClassification> {
    if singulars.len() > n_nominal {
        return Err(Error::Shape(format!(
            "{} singular values for {n_nominal} nominal modes",
            singulars.len()
        )));
    }
    let mut next = n_nominal;
    let mut modes = Vec::with_capacity(n_nominal);
    for j in 0..n_nominal {
        let sigma = singulars.get(j).copied().unwrap_or(1.0);
        if !(sigma >= 0.0 && sigma.is_finite()) {
            return Err(Error::OutOfRange {
                what: "singular value",
                value: sigma,
                range: "[0, inf)",
            });
        }
        let class = if (sigma - 1.0).abs() <= eps_sigma {
            SigmaClass::Unit
        } else if sigma < 1.0 {
            SigmaClass::Loss
        } else {
            SigmaClass::Gain
        };
        let ancilla = (class != SigmaClass::Unit).then(|| {
            next += 1;
            next - 1
        });
        modes.push(ModeSigma {
            class,
            sigma,
            ancilla,
        });
    }
    Ok(SingularClassification {
        n_nominal,
        n_modes: next,
        modes,
    })
}

/// `diag(U_i, I_{n_a}, U_i^*, I_{n_a})` for an n_N x n_N unitary piece.
pub fn lift_unitary_factor(piece: &ComplexMatrix, n_a: usize) -> Result<ComplexMatrix> {
    if !piece.is_square() {
        return Err(Error::Shape("unitary piece must be square".into()));
    }
    let n_nominal = piece.rows();
    let n_modes = n_nominal + n_a;
    let mut s = ComplexMatrix::identity(2 * n_modes);
    s.set_block(0, 0, piece);
    s.set_block(n_modes, n_modes, &piece.conj());
    Ok(s)
}

/// Identity with the loss or gain pattern of `sigma` written at rows/cols
/// `{j, m_aj, j + N, m_aj + N}`.
pub fn lift_singular(
    j: usize,
    m_aj: usize,
    sigma: f64,
    n_modes: usize,
    eps_sigma: f64,
) -> Result<ComplexMatrix> {
    if (sigma - 1.0).abs() <= eps_sigma {
        return Err(Error::OutOfRange {
            what: "sigma",
            value: sigma,
            range: "|sigma - 1| > eps_sigma",
        });
    }
    for mode in [j, m_aj] {
        if mode >= n_modes {
            return Err(Error::ModeOutOfRange { mode, n_modes });
        }
    }
    if j == m_aj {
        return Err(Error::RepeatedMode(j));
    }
    let local = if sigma < 1.0 {
        blocks::lift_loss(sigma)?
    } else {
        blocks::lift_gain(sigma)?
    };
    Ok(blocks::embed_local(
        &local,
        &[j, m_aj, j + n_modes, m_aj + n_modes],
        n_modes,
    ))
}

/// Physical element realising singular value `sigma` on `(j, ancilla)`.
pub fn singular_element(j: usize, ancilla: usize, sigma: f64) -> Element {
    if sigma < 1.0 {
        Element::beam_splitter(j, ancilla, sigma.clamp(0.0, 1.0).acos())
    } else {
        Element::squeezer(j, ancilla, sigma.acosh())
    }
}

/// Runs the full pipeline on `t` using a fresh SVD.
pub fn synthesize(t: &ComplexMatrix, cfg: &SynthConfig) -> Result<SynthesisResult> {
    check_input(t)?;
    let factors = svd(t)?;
    synthesize_with_factors(t, &factors, cfg)
}

fn check_input(t: &ComplexMatrix) -> Result<()> {
    if t.rows() == 0 || t.cols() == 0 {
        return Err(Error::Shape("cannot synthesize an empty matrix".into()));
    }
    t.check_finite()
}

/// Runs the pipeline with caller-supplied factors `t = U D W`, e.g. a
/// fixed gauge choice. The factors must reproduce `t`; the post-check
/// enforces it.
pub fn synthesize_with_factors(
    t: &ComplexMatrix,
    factors: &SvdFactors,
    cfg: &SynthConfig,
) -> Result<SynthesisResult> {
    check_input(t)?;
    let (n, m) = (t.rows(), t.cols());
    check_factor_shapes(factors, n, m)?;
    if let Some(&sigma) = factors.singulars.iter().find(|&&s| s > cfg.sigma_max) {
        return Err(Error::OutOfRange {
            what: "singular value",
            value: sigma,
            range: "<= sigma_max",
        });
    }

    let n_nominal = n.max(m);
    let (u_pad, _, w_pad) = pad_factors(factors, n, m)?;
    let classification = classify_singulars(&factors.singulars, cfg.eps_sigma, n_nominal)?;
    let n_modes = classification.n_modes;
    let n_a = classification.n_ancillas();

    let s_u = lift_unitary_factor(&u_pad, n_a)?;
    let s_w = lift_unitary_factor(&w_pad, n_a)?;
    let mut s_total = s_w;
    let mut singular_stage = Vec::new();
    for (j, ms) in classification.modes.iter().enumerate() {
        if let Some(anc) = ms.ancilla {
            let s_d = lift_singular(j, anc, ms.sigma, n_modes, cfg.eps_sigma)?;
            s_total = &s_d * &s_total;
            singular_stage.push(singular_element(j, anc, ms.sigma));
        }
    }
    s_total = &s_u * &s_total;

    let w_mesh = cfg.mesh.decompose(&factors.w, cfg.tol)?;
    let u_mesh = cfg.mesh.decompose(&factors.u, cfg.tol)?;
    let mesh_bs = w_mesh
        .iter()
        .chain(&u_mesh)
        .filter(|e| matches!(e, Element::BeamSplitter { .. }))
        .count();

    let mut elements = w_mesh;
    elements.extend(singular_stage);
    elements.extend(u_mesh);
    let circuit = Circuit {
        n_modes,
        n_nominal,
        ancilla_inputs: (m..n).collect(),
        ancilla_outputs: (n..m).collect(),
        full_ancillas: (n_nominal..n_modes).collect(),
        elements,
    };
    let mut counts = ElementCounts::tally(&circuit.elements);
    counts.mesh_beam_splitters = mesh_bs;

    let block_deviation = numkit::upper_left_block(&s_total, n, m)?.max_abs_diff(t);
    let quasiunitarity_deviation = numkit::quasiunitarity_deviation(&s_total)?;
    let circuit_deviation = blocks::circuit_smatrix(&circuit)?.max_abs_diff(&s_total);
    let ok = |d: f64| d < cfg.tol;
    if !(ok(block_deviation) && ok(quasiunitarity_deviation) && ok(circuit_deviation)) {
        return Err(Error::Verification {
            block_deviation,
            quasiunitarity_deviation,
            circuit_deviation,
        });
    }

    Ok(SynthesisResult {
        n,
        m,
        circuit,
        s_total,
        classification,
        counts,
        singular_values: factors.singulars.clone(),
        block_deviation,
        quasiunitarity_deviation,
        circuit_deviation,
    })
}

/// Nominal-mode mean fields after the network for coherent amplitudes
/// `alpha` on the first `m` inputs, vacuum elsewhere.
pub fn nominal_means(result: &SynthesisResult, alpha: &[C64]) -> Result<Vec<C64>> {
    use crate::sim::{evolve_moments, GaussianMoments};
    if alpha.len() != result.m {
        return Err(Error::Shape(format!(
            "{} coherent amplitudes for {} inputs",
            alpha.len(),
            result.m
        )));
    }
    let input = GaussianMoments::coherent(result.circuit.n_modes, alpha)?;
    let out = evolve_moments(&result.s_total, &input)?;
    Ok(out.means()[..result.n].to_vec())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn real(rows: &[&[f64]]) -> ComplexMatrix {
        ComplexMatrix::from_real_rows(rows).unwrap()
    }

    #[test]
    fn bounds_formula() {
        let b = |n, m| {
            let c = count_bounds(n, m);
            (c.max_bs, c.max_ps, c.max_d)
        };
        assert_eq!(b(2, 2), (2, 6, 2));
        assert_eq!(b(4, 4), (12, 20, 4));
        assert_eq!(b(2, 3), (4, 9, 2));
    }

    #[test]
    fn classification_examples() {
        let c = classify_singulars(&[1.0, 0.0], DEFAULT_EPS_SIGMA, 2).unwrap();
        assert_eq!(c.n_modes, 3);
        assert_eq!(c.modes[1].ancilla, Some(2));
        assert_eq!(c.modes[0].class, SigmaClass::Unit);

        let r = (1.0f64 / 3.0).sqrt();
        let c = classify_singulars(&[1.0, 1.0, r, r], DEFAULT_EPS_SIGMA, 4).unwrap();
        assert_eq!(c.n_modes, 6);
        assert_eq!(
            c.modes.iter().map(|m| m.ancilla).collect::<Vec<_>>(),
            vec![None, None, Some(4), Some(5)]
        );

        let eps = 1e-9;
        let c = classify_singulars(&[1.0 + eps / 2.0, 1.0 - eps / 2.0], eps, 2).unwrap();
        assert_eq!(c.n_ancillas(), 0);

        assert!(classify_singulars(&[-0.1], eps, 1).is_err());
    }

    #[test]
    fn padding_square_is_noop() {
        let f = svd(&real(&[&[0.5, -0.5], &[-0.5, 0.5]])).unwrap();
        let (u, d, w) = pad_factors(&f, 2, 2).unwrap();
        assert_eq!(u, f.u);
        assert_eq!(w, f.w);
        assert_eq!(d, f.d_matrix());
    }

    #[test]
    fn padding_tall_column() {
        let t = real(&[&[1.0], &[0.0], &[0.0]]);
        let f = svd(&t).unwrap();
        let (u, d, w) = pad_factors(&f, 3, 1).unwrap();
        assert_eq!((w.rows(), d.rows()), (3, 3));
        let prod = &(&u * &d) * &w;
        assert!(prod.submatrix(0, 0, 3, 1).unwrap().max_abs_diff(&t) < 1e-14);
    }

    #[test]
    fn padding_wide_coisometry() {
        // rows orthonormal: T T^dagger = I_2
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let t = real(&[&[h, 0.0, h], &[0.0, 1.0, 0.0]]);
        let f = svd(&t).unwrap();
        let (u, d, w) = pad_factors(&f, 2, 3).unwrap();
        assert!(d.max_abs_diff(&ComplexMatrix::identity(3)) < 1e-14);
        assert!((&u * &w).unitarity_deviation() < 1e-14);
    }

    #[test]
    fn unitary_piece_lift() {
        assert_eq!(
            lift_unitary_factor(&ComplexMatrix::identity(2), 1).unwrap(),
            ComplexMatrix::identity(6)
        );
        let (c, s) = (0.4f64.cos(), 0.4f64.sin());
        let u = ComplexMatrix::from_rows(&[
            vec![C64::new(c, 0.0), C64::new(0.0, s)],
            vec![C64::new(0.0, s), C64::new(c, 0.0)],
        ])
        .unwrap();
        let s_u = lift_unitary_factor(&u, 2).unwrap();
        assert_eq!(s_u.rows(), 8);
        assert!(numkit::quasiunitarity_deviation(&s_u).unwrap() < 1e-14);
        assert_eq!(s_u[(4, 5)], C64::new(0.0, -s));
    }

    #[test]
    fn singular_lift_total_loss() {
        let sd = lift_singular(1, 2, 0.0, 3, DEFAULT_EPS_SIGMA).unwrap();
        let expected = real(&[
            &[1.0, 0.0, 0.0, 0.0, 0.0, 0.0],
            &[0.0, 0.0, 1.0, 0.0, 0.0, 0.0],
            &[0.0, -1.0, 0.0, 0.0, 0.0, 0.0],
            &[0.0, 0.0, 0.0, 1.0, 0.0, 0.0],
            &[0.0, 0.0, 0.0, 0.0, 0.0, 1.0],
            &[0.0, 0.0, 0.0, 0.0, -1.0, 0.0],
        ]);
        assert_eq!(sd, expected);
        assert!(lift_singular(0, 1, 1.0, 2, DEFAULT_EPS_SIGMA).is_err());
        assert!(lift_singular(0, 2, 0.5, 2, DEFAULT_EPS_SIGMA).is_err());
    }

    #[test]
    fn singular_lift_gain_pattern() {
        let s = lift_singular(0, 1, 2.0, 2, DEFAULT_EPS_SIGMA).unwrap();
        assert_eq!(s, blocks::lift_gain(2.0).unwrap());
    }

    #[test]
    fn identity_synthesizes_to_nothing() {
        let r = synthesize(&ComplexMatrix::identity(3), &SynthConfig::default()).unwrap();
        assert!(r.circuit.elements.is_empty());
        assert_eq!(r.n_full_ancillas(), 0);
    }

    #[test]
    fn diagonal_loss_and_gain() {
        let t = real(&[&[0.5, 0.0], &[0.0, 2.0]]);
        let r = synthesize(&t, &SynthConfig::default()).unwrap();
        assert_eq!(r.circuit.n_modes, 4);
        assert_eq!(r.counts.squeezers, 1);
        assert_eq!(r.counts.singular_stage(), 2);
        assert!(r.block_deviation < 1e-14);
    }

    #[test]
    fn rejects_bad_inputs() {
        let cfg = SynthConfig::default();
        assert!(matches!(
            synthesize(&ComplexMatrix::zeros(0, 0), &cfg),
            Err(Error::Shape(_))
        ));
        let huge = real(&[&[1e30]]);
        assert!(matches!(synthesize(&huge, &cfg), Err(Error::OutOfRange { .. })));
    }

    #[test]
    fn inconsistent_injected_factors_fail_post_check() {
        let t = real(&[&[0.5, 0.0], &[0.0, 0.5]]);
        let f = SvdFactors {
            u: ComplexMatrix::identity(2),
            singulars: vec![0.5, 0.25],
            w: ComplexMatrix::identity(2),
        };
        match synthesize_with_factors(&t, &f, &SynthConfig::default()) {
            Err(Error::Verification { block_deviation, .. }) => {
                assert!((block_deviation - 0.25).abs() < 1e-15)
            }
            other => panic!("unexpected {other:?}"),
        }
    }
}
