//! Coherent light through a lossy amplifier network: output means follow
//! `T alpha` while the amplifier adds noise photons.

use qsynth::numkit::{ComplexMatrix, C64};
use qsynth::sim::{evolve_moments, GaussianMoments};
use qsynth::synth::{nominal_means, synthesize, SynthConfig};

fn main() -> qsynth::Result<()> {
    let t = ComplexMatrix::from_real_rows(&[&[1.5, 0.0], &[0.0, 0.5]])?;
    let result = synthesize(&t, &SynthConfig::default())?;
    println!(
        "{} squeezers, {} beam splitters",
        result.counts.squeezers, result.counts.beam_splitters
    );

    let alpha = [C64::new(1.0, 0.0), C64::new(0.0, 2.0)];
    let means = nominal_means(&result, &alpha)?;
    let expected = t.mul_vec(&alpha)?;
    for k in 0..2 {
        println!("mode {k}: <a> = {:.6}, T alpha = {:.6}", means[k], expected[k]);
    }

    let input = GaussianMoments::coherent(result.circuit.n_modes, &alpha)?;
    let out = evolve_moments(&result.s_total, &input)?;
    for k in 0..result.circuit.n_modes {
        println!("mode {k}: <n> = {:.4}", out.photon_number(k));
    }
    println!("commutator residual {:.1e}", out.commutator_residual());
    Ok(())
}
