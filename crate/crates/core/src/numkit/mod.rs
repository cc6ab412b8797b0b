//! Dense complex linear algebra and the quasiunitarity metric.

mod matrix;
mod svd;

pub use matrix::{ComplexMatrix, C64, ONE, ZERO};
pub use svd::{svd, SvdFactors};

use crate::error::{Error, Result};

/// Default absolute max-entry tolerance for every verification check.
pub const DEFAULT_TOL: f64 = 1e-10;

/// `G = diag(+1 x N, -1 x N)`.
pub fn g_metric(n_modes: usize) -> ComplexMatrix {
    let mut g = ComplexMatrix::identity(2 * n_modes);
    for k in n_modes..2 * n_modes {
        g[(k, k)] = C64::new(-1.0, 0.0);
    }
    g
}

/// `max |S G S^dagger - G|`; zero exactly when `s` is quasiunitary.
pub fn quasiunitarity_deviation(s: &ComplexMatrix) -> Result<f64> {
    if !s.is_square() || !s.rows().is_multiple_of(2) {
        return Err(Error::OddDimension {
            rows: s.rows(),
            cols: s.cols(),
        });
    }
    let n = s.rows() / 2;
    // S G S^dagger = S_left S_left^dagger - S_right S_right^dagger, computed
    // directly to avoid materialising G.
    let dim = s.rows();
    let mut worst: f64 = 0.0;
    for i in 0..dim {
        let ri = s.row(i);
        for j in 0..dim {
            let rj = s.row(j);
            let mut acc = C64::new(0.0, 0.0);
            for k in 0..dim {
                let term = ri[k] * rj[k].conj();
                if k < n {
                    acc += term;
                } else {
                    acc -= term;
                }
            }
            let target = match (i == j, i < n) {
                (true, true) => 1.0,
                (true, false) => -1.0,
                _ => 0.0,
            };
            worst = worst.max((acc - target).norm());
        }
    }
    Ok(worst)
}

/// The `n x m` block in the top-left corner of `s`.
pub fn upper_left_block(s: &ComplexMatrix, n: usize, m: usize) -> Result<ComplexMatrix> {
    s.submatrix(0, 0, n, m)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn metric_small_sizes() {
        let diag = |n: usize| (0..2 * n).map(|k| g_metric(n)[(k, k)].re).collect::<Vec<_>>();
        assert_eq!(diag(1), vec![1.0, -1.0]);
        assert_eq!(diag(2), vec![1.0, 1.0, -1.0, -1.0]);
        assert_eq!(diag(3), vec![1.0, 1.0, 1.0, -1.0, -1.0, -1.0]);
        let g = g_metric(3);
        assert_eq!(&g * &g, ComplexMatrix::identity(6));
    }

    #[test]
    fn deviation_of_identity_and_scaling() {
        assert_eq!(
            quasiunitarity_deviation(&ComplexMatrix::identity(4)).unwrap(),
            0.0
        );
        // S G S^dagger = diag(4, 4, -0.25, -0.25); residual diag(3, 3, 0.75, 0.75)
        let s = ComplexMatrix::from_real_diagonal(&[2.0, 2.0, 0.5, 0.5]);
        assert!((quasiunitarity_deviation(&s).unwrap() - 3.0).abs() < 1e-15);
    }

    #[test]
    fn odd_dimension_rejected() {
        let err = quasiunitarity_deviation(&ComplexMatrix::identity(3)).unwrap_err();
        assert_eq!(err, Error::OddDimension { rows: 3, cols: 3 });
        assert!(quasiunitarity_deviation(&ComplexMatrix::zeros(2, 4)).is_err());
    }

    #[test]
    fn block_extraction() {
        let s = ComplexMatrix::identity(6);
        let b = upper_left_block(&s, 2, 3).unwrap();
        assert_eq!(
            b,
            ComplexMatrix::from_real_rows(&[&[1.0, 0.0, 0.0], &[0.0, 1.0, 0.0]]).unwrap()
        );
        let empty = upper_left_block(&s, 0, 0).unwrap();
        assert_eq!((empty.rows(), empty.cols()), (0, 0));
        assert!(upper_left_block(&s, 7, 1).is_err());
    }
}
