//! Complex singular value decomposition by one-sided (Hestenes) Jacobi
//! rotations.
//!
//! One-sided Jacobi orthogonalizes the columns of the input in place and
//! accumulates the rotations into the right factor. Columns end up orthogonal
//! to relative precision, so small singular values are resolved as accurately
//! as large ones. The matrices handled here are small (tens of modes), where
//! the O(n^3) per sweep cost is irrelevant.

use serde::{Deserialize, Serialize};

use super::matrix::{ComplexMatrix, C64, ZERO};
use crate::error::{Error, Result};

const MAX_SWEEPS: usize = 80;

/// `T = u * diag(singulars) * w`, with `w` the factor that acts first.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SvdFactors {
    /// n x n unitary.
    pub u: ComplexMatrix,
    /// min(n, m) values, descending, non-negative.
    pub singulars: Vec<f64>,
    /// m x m unitary.
    pub w: ComplexMatrix,
}

impl SvdFactors {
    /// The n x m rectangular diagonal matrix of singular values.
    pub fn d_matrix(&self) -> ComplexMatrix {
        let (n, m) = (self.u.rows(), self.w.rows());
        let mut d = ComplexMatrix::zeros(n, m);
        for (j, &s) in self.singulars.iter().enumerate() {
            d[(j, j)] = C64::new(s, 0.0);
        }
        d
    }

    /// `u * D * w`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        &(&self.u * &self.d_matrix()) * &self.w
    }
}

/// Decomposes `t` (n x m) as `U * D * W` with descending singular values.
pub fn svd(t: &ComplexMatrix) -> Result<SvdFactors> {
    if t.rows() == 0 || t.cols() == 0 {
        return Err(Error::Shape("svd of an empty matrix".into()));
    }
    t.check_finite()?;
    if t.rows() >= t.cols() {
        let (u, singulars, v) = tall_svd(t)?;
        Ok(SvdFactors {
            u,
            singulars,
            w: v.adjoint(),
        })
    } else {
        // t^dagger = U' S V'^dagger  =>  t = V' S U'^dagger
        let (u_adj, singulars, v_adj) = tall_svd(&t.adjoint())?;
        Ok(SvdFactors {
            u: v_adj,
            singulars,
            w: u_adj.adjoint(),
        })
    }
}

/// SVD of an n x m matrix with n >= m: returns (U n x n, sigma, V m x m) such
/// that `t = U S V^dagger`.
fn tall_svd(t: &ComplexMatrix) -> Result<(ComplexMatrix, Vec<f64>, ComplexMatrix)> {
    let (n, m) = (t.rows(), t.cols());
    let mut cols: Vec<Vec<C64>> = (0..m).map(|c| t.column(c)).collect();
    let mut v: Vec<Vec<C64>> = (0..m)
        .map(|c| {
            let mut e = vec![ZERO; m];
            e[c] = C64::new(1.0, 0.0);
            e
        })
        .collect();

    let tol = f64::EPSILON * (n as f64);
    let mut converged = m < 2;
    for _ in 0..MAX_SWEEPS {
        if converged {
            break;
        }
        let mut rotated = false;
        for p in 0..m {
            for q in p + 1..m {
                let alpha = norm_sqr(&cols[p]);
                let beta = norm_sqr(&cols[q]);
                let gamma = inner(&cols[p], &cols[q]);
                let g = gamma.norm();
                if g == 0.0 || g <= tol * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let phase = gamma / g;
                let zeta = (beta - alpha) / (2.0 * g);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                rotate(&mut cols, p, q, c, s, phase);
                rotate(&mut v, p, q, c, s, phase);
            }
        }
        converged = !rotated;
    }
    if !converged {
        return Err(Error::SvdNoConvergence { sweeps: MAX_SWEEPS });
    }

    let mut order: Vec<(f64, usize)> = cols.iter().map(|c| (norm_sqr(c).sqrt(), 0)).collect();
    for (k, o) in order.iter_mut().enumerate() {
        o.1 = k;
    }
    order.sort_by(|a, b| b.0.total_cmp(&a.0));

    let sigma_max = order.first().map_or(0.0, |o| o.0);
    let negligible = sigma_max * f64::EPSILON * (n.max(m) as f64);

    let mut u_cols: Vec<Option<Vec<C64>>> = vec![None; n];
    let mut singulars = Vec::with_capacity(m);
    let mut v_out = ComplexMatrix::zeros(m, m);
    for (j, &(sigma, src)) in order.iter().enumerate() {
        singulars.push(sigma);
        v_out.set_column(j, &v[src]);
        if sigma > negligible && sigma > 0.0 {
            u_cols[j] = Some(cols[src].iter().map(|z| z / sigma).collect());
        }
    }
    let u = complete_orthonormal(n, u_cols);
    Ok((u, singulars, v_out))
}

/// Applies the column rotation
/// `[x_p, x_q] <- [c x_p - s e^{-i phi} x_q, s e^{i phi} x_p + c x_q]`.
fn rotate(cols: &mut [Vec<C64>], p: usize, q: usize, c: f64, s: f64, phase: C64) {
    let (head, tail) = cols.split_at_mut(q);
    let (xp, xq) = (&mut head[p], &mut tail[0]);
    for (a, b) in xp.iter_mut().zip(xq.iter_mut()) {
        let (ap, aq) = (*a, *b);
        *a = ap * c - aq * phase.conj() * s;
        *b = ap * phase * s + aq * c;
    }
}

fn inner(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

fn norm_sqr(a: &[C64]) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum()
}

/// Fills the missing slots with unit vectors orthogonal to every present one,
/// drawn from the standard basis by modified Gram-Schmidt.
fn complete_orthonormal(n: usize, mut slots: Vec<Option<Vec<C64>>>) -> ComplexMatrix {
    let mut basis: Vec<Vec<C64>> = slots.iter().flatten().cloned().collect();
    for slot in slots.iter_mut().filter(|s| s.is_none()) {
        let mut best: Option<(f64, Vec<C64>)> = None;
        for k in 0..n {
            let mut e = vec![ZERO; n];
            e[k] = C64::new(1.0, 0.0);
            // two passes keep the result orthogonal to working precision
            for _ in 0..2 {
                for b in &basis {
                    let proj = inner(b, &e);
                    for (x, y) in e.iter_mut().zip(b) {
                        *x -= proj * y;
                    }
                }
            }
            let norm = norm_sqr(&e).sqrt();
            if best.as_ref().is_none_or(|(bn, _)| norm > *bn) {
                best = Some((norm, e));
            }
        }
        let (norm, e) = best.expect("n >= 1");
        let unit: Vec<C64> = e.iter().map(|z| z / norm).collect();
        basis.push(unit.clone());
        *slot = Some(unit);
    }
    let mut u = ComplexMatrix::zeros(n, n);
    for (j, col) in slots.into_iter().enumerate() {
        u.set_column(j, &col.expect("filled"));
    }
    u
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check(t: &ComplexMatrix) -> SvdFactors {
        let f = svd(t).unwrap();
        assert!(f.u.unitarity_deviation() < 1e-13, "u not unitary");
        assert!(f.w.unitarity_deviation() < 1e-13, "w not unitary");
        assert!(f.singulars.windows(2).all(|w| w[0] >= w[1]));
        assert!(f.singulars.iter().all(|&s| s >= 0.0));
        assert!(f.reconstruct().max_abs_diff(t) < 1e-13);
        f
    }

    #[test]
    fn lossy_beam_splitter_singulars() {
        let t = ComplexMatrix::from_real_rows(&[&[0.5, -0.5], &[-0.5, 0.5]]).unwrap();
        let f = check(&t);
        assert!((f.singulars[0] - 1.0).abs() < 1e-15);
        assert!(f.singulars[1].abs() < 1e-15);
    }

    #[test]
    fn identity_is_its_own_svd() {
        let f = check(&ComplexMatrix::identity(3));
        assert!(f.singulars.iter().all(|&s| (s - 1.0).abs() < 1e-15));
        assert!((&f.u * &f.w).unitarity_deviation() < 1e-15);
    }

    #[test]
    fn zero_and_rank_deficient() {
        let f = check(&ComplexMatrix::zeros(3, 2));
        assert_eq!(f.singulars, vec![0.0, 0.0]);
        let col = ComplexMatrix::from_real_rows(&[&[1.0], &[0.0], &[0.0]]).unwrap();
        let f = check(&col);
        assert_eq!(f.u.rows(), 3);
        assert_eq!(f.w.rows(), 1);
    }

    #[test]
    fn wide_and_tall_shapes() {
        let t = ComplexMatrix::from_fn(2, 4, |r, c| C64::new((r * 3 + c) as f64 * 0.1, (c as f64) - 1.0));
        let f = check(&t);
        assert_eq!((f.u.rows(), f.w.rows(), f.singulars.len()), (2, 4, 2));
        let f = check(&t.adjoint());
        assert_eq!((f.u.rows(), f.w.rows(), f.singulars.len()), (4, 2, 2));
    }

    #[test]
    fn empty_input_rejected() {
        assert!(matches!(svd(&ComplexMatrix::zeros(0, 2)), Err(Error::Shape(_))));
    }
}
