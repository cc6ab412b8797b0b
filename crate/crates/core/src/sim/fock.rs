use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numkit::{ComplexMatrix, C64};

pub const MAX_PHOTONS: u32 = 6;
pub const MAX_MODES: usize = 8;
/// Amplitudes below this magnitude are dropped.
pub const PRUNE: f64 = 1e-15;
const UNITARY_TOL: f64 = 1e-10;

pub type Occupation = Vec<u32>;

/// Sparse pure state over Fock occupations.
#[derive(Debug, Clone, PartialEq)]
pub struct FockState {
    n_modes: usize,
    amplitudes: BTreeMap<Occupation, C64>,
}

impl FockState {
    pub fn basis(occupation: &[u32]) -> Self {
        FockState {
            n_modes: occupation.len(),
            amplitudes: BTreeMap::from([(occupation.to_vec(), C64::new(1.0, 0.0))]),
        }
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    pub fn amplitude(&self, occupation: &[u32]) -> C64 {
        self.amplitudes
            .get(occupation)
            .copied()
            .unwrap_or(C64::new(0.0, 0.0))
    }

    pub fn probability(&self, occupation: &[u32]) -> f64 {
        self.amplitude(occupation).norm_sqr()
    }

    /// Total probability of outcomes satisfying `pred`.
    pub fn probability_where(&self, pred: impl Fn(&[u32]) -> bool) -> f64 {
        self.iter()
            .filter(|(occ, _)| pred(occ))
            .map(|(_, a)| a.norm_sqr())
            .sum()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.values().map(|a| a.norm_sqr()).sum()
    }

    /// Outcomes in lexicographic occupation order.
    pub fn iter(&self) -> impl Iterator<Item = (&[u32], C64)> {
        self.amplitudes.iter().map(|(k, &v)| (k.as_slice(), v))
    }

    pub fn len(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amplitudes.is_empty()
    }
}

/// Output state of a passive network `a_out = A a_in` fed with the Fock state
/// `input`.
///
/// Each input creation operator is rewritten in output operators,
/// `a_in,k^dagger = sum_j A[j][k] a_out,j^dagger`, and the product of these
/// polynomials is expanded over the vacuum.
pub fn fock_evolve(a: &ComplexMatrix, input: &[u32]) -> Result<FockState> {
    let n = a.rows();
    if !a.is_square() || input.len() != n {
        return Err(Error::Shape(format!(
            "{}-mode occupation for a {}x{} network",
            input.len(),
            a.rows(),
            a.cols()
        )));
    }
    if n > MAX_MODES {
        return Err(Error::FockLimit(format!("{n} modes exceed {MAX_MODES}")));
    }
    let photons: u32 = input.iter().sum();
    if photons > MAX_PHOTONS {
        return Err(Error::FockLimit(format!(
            "{photons} photons exceed {MAX_PHOTONS}"
        )));
    }
    let deviation = a.unitarity_deviation();
    if deviation.is_nan() || deviation >= UNITARY_TOL {
        return Err(Error::NotUnitary { deviation });
    }

    // monomial exponents -> coefficient
    let mut poly: BTreeMap<Occupation, C64> = BTreeMap::from([(vec![0; n], C64::new(1.0, 0.0))]);
    for (k, &count) in input.iter().enumerate() {
        for _ in 0..count {
            let mut next: BTreeMap<Occupation, C64> = BTreeMap::new();
            for (mono, coeff) in &poly {
                for j in 0..n {
                    let w = a[(j, k)];
                    if w.norm() == 0.0 {
                        continue;
                    }
                    let mut m = mono.clone();
                    m[j] += 1;
                    *next.entry(m).or_default() += coeff * w;
                }
            }
            poly = next;
        }
    }

    let input_norm: f64 = input.iter().map(|&c| factorial(c)).product::<f64>().sqrt();
    let amplitudes = poly
        .into_iter()
        .map(|(occ, coeff)| {
            let out_norm: f64 = occ.iter().map(|&c| factorial(c)).product::<f64>().sqrt();
            let amp = coeff * out_norm / input_norm;
            (occ, amp)
        })
        .filter(|(_, amp)| amp.norm() >= PRUNE)
        .collect();
    Ok(FockState {
        n_modes: n,
        amplitudes,
    })
}

fn factorial(k: u32) -> f64 {
    (1..=k).map(f64::from).product()
}

/// Keeps only outcomes accepted by `pred`, renormalised, and reports the
/// accepted probability mass.
pub fn postselect(state: &FockState, pred: impl Fn(&[u32]) -> bool) -> Result<(FockState, f64)> {
    let kept: BTreeMap<Occupation, C64> = state
        .amplitudes
        .iter()
        .filter(|(occ, _)| pred(occ))
        .map(|(k, &v)| (k.clone(), v))
        .collect();
    let mass: f64 = kept.values().map(|a| a.norm_sqr()).sum();
    if mass <= 0.0 {
        return Err(Error::ZeroAcceptance);
    }
    let scale = 1.0 / mass.sqrt();
    let amplitudes = kept.into_iter().map(|(k, v)| (k, v * scale)).collect();
    Ok((
        FockState {
            n_modes: state.n_modes,
            amplitudes,
        },
        mass,
    ))
}

/// Photon-count window on the summed occupation of a set of modes. A
/// single-mode `modes` list gives a per-mode constraint.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountWindow {
    pub modes: Vec<usize>,
    #[serde(default)]
    pub min: u32,
    #[serde(default = "unbounded")]
    pub max: u32,
}

fn unbounded() -> u32 {
    u32::MAX
}

/// Conjunction of count windows; the empty predicate accepts everything.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountPredicate {
    pub windows: Vec<CountWindow>,
}

impl CountPredicate {
    pub fn new(windows: Vec<CountWindow>) -> Self {
        CountPredicate { windows }
    }

    /// Exactly `count` photons across `modes`.
    pub fn exactly(mut self, modes: &[usize], count: u32) -> Self {
        self.windows.push(CountWindow {
            modes: modes.to_vec(),
            min: count,
            max: count,
        });
        self
    }

    pub fn accepts(&self, occupation: &[u32]) -> bool {
        self.windows.iter().all(|w| {
            let total: u32 = w
                .modes
                .iter()
                .map(|&m| occupation.get(m).copied().unwrap_or(0))
                .sum();
            (w.min..=w.max).contains(&total)
        })
    }
}

/// Extracts the N x N annihilation block of a passive `S_total`.
pub fn passive_block(s_total: &ComplexMatrix, tol: f64) -> Result<ComplexMatrix> {
    if !s_total.is_square() || !s_total.rows().is_multiple_of(2) {
        return Err(Error::OddDimension {
            rows: s_total.rows(),
            cols: s_total.cols(),
        });
    }
    let n = s_total.rows() / 2;
    let mut worst = (0, 0, 0.0f64);
    for r in 0..2 * n {
        for c in 0..2 * n {
            if (r < n) != (c < n) {
                let mag = s_total[(r, c)].norm();
                if mag > worst.2 {
                    worst = (r, c, mag);
                }
            }
        }
    }
    if worst.2 > tol {
        return Err(Error::NotPassive {
            row: worst.0,
            col: worst.1,
            magnitude: worst.2,
        });
    }
    s_total.submatrix(0, 0, n, n)
}
