//! Compiles arbitrary linear optical transformations, lossy or amplifying,
//! into quasiunitary scattering matrices and netlists of phase shifters, beam
//! splitters, and two-mode squeezers.
//!
//! The entry point is [`synth::synthesize`]: it embeds an `n x m` complex
//! matrix `T` as the upper-left block of a `2N x 2N` quasiunitary `S_total`
//! (`S G S^dagger = G`), adding one vacuum ancilla per singular value away
//! from 1, and emits the element sequence realising it. [`sim`] checks the
//! result physically, [`closedform`] solves the 2 x 2 case analytically, and
//! [`apps`] covers Naimark extensions of rank-one POVMs and the
//! postselected controlled-Z gate.
//!
//! ```
//! use qsynth::numkit::ComplexMatrix;
//! use qsynth::synth::{synthesize, SynthConfig};
//!
//! let t = ComplexMatrix::from_real_rows(&[&[0.5, -0.5], &[-0.5, 0.5]]).unwrap();
//! let result = synthesize(&t, &SynthConfig::default()).unwrap();
//! assert_eq!(result.n_full_ancillas(), 1);
//! assert!(result.block_deviation < 1e-10);
//! ```

pub mod apps;
pub mod blocks;
pub mod cli;
pub mod closedform;
pub mod error;
pub mod io;
pub mod mesh;
pub mod numkit;
pub mod random;
pub mod sim;
pub mod synth;

pub use error::{Error, Result};
