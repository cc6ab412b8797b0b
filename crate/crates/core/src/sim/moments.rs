use crate::error::{Error, Result};
use crate::numkit::{g_metric, ComplexMatrix, C64, ONE};

/// First and second moments of the stacked operator vector
/// `X = (a_0 .. a_{N-1}, a_0^dagger .. a_{N-1}^dagger)`.
///
/// `second[(i, j)] = <dX_i dX_j^dagger>` with `dX = X - <X>`. For vacuum
/// (and any coherent state) this is `diag(1 x N, 0 x N)`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianMoments {
    pub mean: Vec<C64>,
    pub second: ComplexMatrix,
}

impl GaussianMoments {
    pub fn vacuum(n_modes: usize) -> Self {
        let mut diag = vec![0.0; 2 * n_modes];
        diag[..n_modes].fill(1.0);
        GaussianMoments {
            mean: vec![C64::new(0.0, 0.0); 2 * n_modes],
            second: ComplexMatrix::from_real_diagonal(&diag),
        }
    }

    /// Coherent amplitudes on the first `alpha.len()` modes, vacuum on the rest.
    pub fn coherent(n_modes: usize, alpha: &[C64]) -> Result<Self> {
        if alpha.len() > n_modes {
            return Err(Error::Shape(format!(
                "{} coherent amplitudes for {n_modes} modes",
                alpha.len()
            )));
        }
        let mut g = Self::vacuum(n_modes);
        for (k, &a) in alpha.iter().enumerate() {
            g.mean[k] = a;
            g.mean[k + n_modes] = a.conj();
        }
        Ok(g)
    }

    pub fn n_modes(&self) -> usize {
        self.mean.len() / 2
    }

    /// `<a_k>` for every mode.
    pub fn means(&self) -> &[C64] {
        &self.mean[..self.n_modes()]
    }

    /// Largest `|<a_k> - conj(<a_k^dagger>)|`.
    pub fn mean_conjugacy_residual(&self) -> f64 {
        let n = self.n_modes();
        (0..n)
            .map(|k| (self.mean[k] - self.mean[k + n].conj()).norm())
            .fold(0.0, f64::max)
    }

    /// Residual of the canonical commutation relations encoded in the second
    /// moments: `max |M - (P M P)^T - G|` with `P` swapping the two halves.
    /// Zero for every physical state.
    pub fn commutator_residual(&self) -> f64 {
        let n = self.n_modes();
        let swap = |i: usize| if i < n { i + n } else { i - n };
        let g = g_metric(n);
        let dim = 2 * n;
        let mut worst: f64 = 0.0;
        for i in 0..dim {
            for j in 0..dim {
                let swapped = self.second[(swap(j), swap(i))];
                let r = self.second[(i, j)] - swapped - g[(i, j)];
                worst = worst.max(r.norm());
            }
        }
        worst
    }

    /// Mean photon number `<a_k^dagger a_k>` of mode `k`.
    pub fn photon_number(&self, k: usize) -> f64 {
        // <a^dagger a> = <a a^dagger> - 1 = second[k, k] + |<a>|^2 - 1
        (self.second[(k, k)] - ONE).re + self.mean[k].norm_sqr()
    }
}

/// Pushes moments through `X_out = S X_in`.
pub fn evolve_moments(s: &ComplexMatrix, g: &GaussianMoments) -> Result<GaussianMoments> {
    let dim = g.mean.len();
    if !s.is_square() || s.rows() != dim || g.second.rows() != dim || g.second.cols() != dim {
        return Err(Error::Shape(format!(
            "scattering matrix {}x{} does not act on {}-entry moments",
            s.rows(),
            s.cols(),
            dim
        )));
    }
    Ok(GaussianMoments {
        mean: s.mul_vec(&g.mean)?,
        second: &(s * &g.second) * &s.adjoint(),
    })
}
