//! Postselected controlled-Z gate on dual-rail qubits.

use qsynth::apps::{cz_gate_target, verify_cz};
use qsynth::synth::{synthesize, SynthConfig};

fn main() -> qsynth::Result<()> {
    let result = synthesize(&cz_gate_target(), &SynthConfig::default())?;
    println!("singular values {:?}", result.singular_values);
    println!(
        "{} full ancillas, {} elements",
        result.n_full_ancillas(),
        result.circuit.elements.len()
    );

    let report = verify_cz(&result, 1e-10)?;
    for i in 0..4 {
        let [re, im] = report.amplitudes[i];
        println!(
            "{}: amplitude {re:+.6}{im:+.6}i, success {:.6}, sign {:+}",
            report.inputs[i], report.success_probs[i], report.phase_pattern[i]
        );
    }
    Ok(())
}
