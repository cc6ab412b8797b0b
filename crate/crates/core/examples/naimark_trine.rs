//! The trine POVM on a qubit realised as a three-port interferometer.

use qsynth::apps::{naimark_extension, trine_povm};
use qsynth::numkit::C64;
use qsynth::synth::{synthesize, SynthConfig};

fn main() -> qsynth::Result<()> {
    let povm = trine_povm();
    let v = naimark_extension(&povm, 1e-10)?;
    println!("extension unitarity deviation {:.1e}", v.unitarity_deviation());

    let result = synthesize(&v, &SynthConfig::default())?;
    println!(
        "{} elements, passive: {}",
        result.circuit.elements.len(),
        result.circuit.is_passive()
    );

    let psi = [C64::new(0.8, 0.0), C64::new(0.0, 0.6)];
    let amps = v.adjoint().mul_vec(&[psi[0], psi[1], C64::new(0.0, 0.0)])?;
    for (i, (amp, p)) in amps.iter().zip(povm.probabilities(&psi)).enumerate() {
        println!(
            "outcome {i}: detector {:.6}, <psi|E|psi> {:.6}",
            amp.norm_sqr(),
            p
        );
    }
    Ok(())
}
