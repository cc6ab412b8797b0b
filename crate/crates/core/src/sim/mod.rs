//! Verification engines: exact few-photon evolution through passive networks
//! and first/second moment propagation through any quasiunitary network.

mod fock;
mod moments;

pub use fock::{
    fock_evolve, passive_block, postselect, CountPredicate, CountWindow, FockState, Occupation, MAX_MODES,
    MAX_PHOTONS,
};
pub use moments::{evolve_moments, GaussianMoments};

#[cfg(test)]
mod tests {
    use super::*;
    use crate::blocks::lift_gain;
    use crate::error::Error;
    use crate::numkit::{ComplexMatrix, C64};

    /// Independent oracle: `<out|U|in> = perm(A[rows(out), cols(in)]) /
    /// sqrt(prod out! prod in!)` with the permanent summed over all
    /// permutations.
    fn permanent_amplitude(a: &ComplexMatrix, input: &[u32], output: &[u32]) -> C64 {
        let expand = |occ: &[u32]| -> Vec<usize> {
            occ.iter()
                .enumerate()
                .flat_map(|(k, &c)| std::iter::repeat_n(k, c as usize))
                .collect()
        };
        let (cols, rows) = (expand(input), expand(output));
        if cols.len() != rows.len() {
            return C64::new(0.0, 0.0);
        }
        let mut perm: Vec<usize> = (0..cols.len()).collect();
        let mut total = C64::new(0.0, 0.0);
        loop {
            total += perm
                .iter()
                .enumerate()
                .map(|(i, &p)| a[(rows[i], cols[p])])
                .product::<C64>();
            if !next_permutation(&mut perm) {
                break;
            }
        }
        let fact = |occ: &[u32]| {
            occ.iter()
                .map(|&c| (1..=c).product::<u32>() as f64)
                .product::<f64>()
        };
        total / (fact(input) * fact(output)).sqrt()
    }

    fn next_permutation(p: &mut [usize]) -> bool {
        let Some(i) = (1..p.len()).rev().find(|&i| p[i - 1] < p[i]) else {
            return false;
        };
        let j = (i..p.len()).rev().find(|&j| p[j] > p[i - 1]).unwrap();
        p.swap(i - 1, j);
        p[i..].reverse();
        true
    }

    fn all_occupations(modes: usize, photons: u32) -> Vec<Vec<u32>> {
        if modes == 1 {
            return vec![vec![photons]];
        }
        (0..=photons)
            .flat_map(|k| {
                all_occupations(modes - 1, photons - k)
                    .into_iter()
                    .map(move |mut rest| {
                        rest.insert(0, k);
                        rest
                    })
            })
            .collect()
    }

    fn lossy_bs_block() -> ComplexMatrix {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        ComplexMatrix::from_real_rows(&[&[0.5, -0.5, h], &[-0.5, 0.5, h], &[h, h, 0.0]]).unwrap()
    }

    fn random_unitary(n: usize, seed: u64) -> ComplexMatrix {
        crate::random::random_unitary(n, &mut crate::random::rng(seed))
    }

    #[test]
    fn identity_preserves_input() {
        let s = fock_evolve(&ComplexMatrix::identity(3), &[2, 0, 1]).unwrap();
        assert_eq!(s.len(), 1);
        assert!((s.amplitude(&[2, 0, 1]) - C64::new(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn hong_ou_mandel_dip() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let bs = ComplexMatrix::from_real_rows(&[&[h, h], &[-h, h]]).unwrap();
        let s = fock_evolve(&bs, &[1, 1]).unwrap();
        assert!(s.probability(&[1, 1]) < 1e-30);
        assert!((s.probability(&[2, 0]) - 0.5).abs() < 1e-15);
        assert!((s.probability(&[0, 2]) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn lossy_beam_splitter_statistics() {
        let a = lossy_bs_block();
        let s = fock_evolve(&a, &[1, 1, 0]).unwrap();
        for occ in all_occupations(3, 2) {
            let want = permanent_amplitude(&a, &[1, 1, 0], &occ);
            assert!((s.amplitude(&occ) - want).norm() < 1e-14, "{occ:?}");
        }
        let nominal = |o: &[u32]| o[0] + o[1];
        assert!(s.probability_where(|o| nominal(o) == 1) < 1e-30);
        assert!((s.probability(&[1, 1, 0]) - 0.25).abs() < 1e-14);
        assert!((s.probability(&[0, 0, 2]) - 0.5).abs() < 1e-14);

        let (_, p) = postselect(&s, |o| nominal(o) == 2).unwrap();
        assert!((p - 0.5).abs() < 1e-14);
    }

    #[test]
    fn agrees_with_permanent_oracle_on_random_networks() {
        for (seed, n) in [(1, 2), (2, 3), (3, 4), (4, 4)] {
            let a = random_unitary(n, seed);
            for photons in 1..=3 {
                for input in all_occupations(n, photons) {
                    let s = fock_evolve(&a, &input).unwrap();
                    assert!((s.norm_sqr() - 1.0).abs() < 1e-12);
                    for out in all_occupations(n, photons) {
                        let want = permanent_amplitude(&a, &input, &out);
                        assert!((s.amplitude(&out) - want).norm() < 1e-12);
                    }
                }
            }
        }
    }

    #[test]
    fn limits_and_errors() {
        let id = ComplexMatrix::identity(2);
        assert!(matches!(fock_evolve(&id, &[4, 3]), Err(Error::FockLimit(_))));
        assert!(matches!(
            fock_evolve(&ComplexMatrix::identity(9), &[0; 9]),
            Err(Error::FockLimit(_))
        ));
        assert!(matches!(fock_evolve(&id, &[1]), Err(Error::Shape(_))));
        let lossy = ComplexMatrix::from_real_rows(&[&[0.5, 0.0], &[0.0, 1.0]]).unwrap();
        assert!(matches!(
            fock_evolve(&lossy, &[1, 0]),
            Err(Error::NotUnitary { .. })
        ));
    }

    #[test]
    fn postselect_accept_all_and_none() {
        let s = fock_evolve(&random_unitary(3, 9), &[1, 0, 1]).unwrap();
        let (kept, p) = postselect(&s, |_| true).unwrap();
        assert!((p - 1.0).abs() < 1e-12);
        assert_eq!(kept.len(), s.len());
        assert_eq!(postselect(&s, |_| false).unwrap_err(), Error::ZeroAcceptance);
    }

    #[test]
    fn count_predicate_windows() {
        let p = CountPredicate::default().exactly(&[0, 1], 1).exactly(&[2, 3], 1);
        assert!(p.accepts(&[1, 0, 0, 1, 0]));
        assert!(!p.accepts(&[1, 1, 0, 0, 0]));
        let json = r#"{"windows":[{"modes":[2],"max":0}]}"#;
        let q: CountPredicate = serde_json::from_str(json).unwrap();
        assert!(q.accepts(&[3, 1, 0]));
        assert!(!q.accepts(&[0, 0, 1]));
        assert!(CountPredicate::default().accepts(&[5]));
    }

    #[test]
    fn passive_block_examples() {
        assert_eq!(
            passive_block(&ComplexMatrix::identity(4), 1e-10).unwrap(),
            ComplexMatrix::identity(2)
        );
        match passive_block(&lift_gain(2.0).unwrap(), 1e-10) {
            Err(Error::NotPassive { magnitude, .. }) => assert!((magnitude - 3f64.sqrt()).abs() < 1e-15),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn moments_through_gain() {
        let g = GaussianMoments::coherent(2, &[C64::new(1.0, 0.0)]).unwrap();
        let out = evolve_moments(&lift_gain(2.0).unwrap(), &g).unwrap();
        assert!((out.means()[0] - C64::new(2.0, 0.0)).norm() < 1e-15);
        assert!(out.commutator_residual() < 1e-14);
        // amplified vacuum noise: <n> = 4 * 1 + (sigma^2 - 1) = 7
        assert!((out.photon_number(0) - 7.0).abs() < 1e-13);
        assert!(out.mean_conjugacy_residual() < 1e-15);
    }

    #[test]
    fn vacuum_through_passive_stays_vacuum() {
        let u = random_unitary(3, 5);
        let s = crate::synth::lift_unitary_factor(&u, 0).unwrap();
        let out = evolve_moments(&s, &GaussianMoments::vacuum(3)).unwrap();
        let vac = GaussianMoments::vacuum(3);
        assert!(out.second.max_abs_diff(&vac.second) < 1e-14);
        assert!(out.mean.iter().all(|z| z.norm() == 0.0));
    }

    #[test]
    fn moments_dimension_mismatch() {
        let g = GaussianMoments::vacuum(2);
        assert!(matches!(
            evolve_moments(&ComplexMatrix::identity(6), &g),
            Err(Error::Shape(_))
        ));
        assert!(GaussianMoments::coherent(1, &[C64::new(1.0, 0.0); 2]).is_err());
    }
}
