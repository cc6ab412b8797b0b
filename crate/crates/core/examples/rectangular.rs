//! A 3-output, 2-input transformation: padding ancillas square it up and the
//! netlist is written as JSON.

use qsynth::io::{to_json_string, NetlistFile};
use qsynth::random::{rng, with_singulars};
use qsynth::synth::{synthesize, SynthConfig};

fn main() -> qsynth::Result<()> {
    let t = with_singulars(&mut rng(3), 3, 2, &[1.4, 0.6]);
    let result = synthesize(&t, &SynthConfig::default())?;
    let c = &result.circuit;
    println!(
        "modes {}, input-only padding {:?}, output-only padding {:?}, full ancillas {:?}",
        c.n_modes, c.ancilla_inputs, c.ancilla_outputs, c.full_ancillas
    );
    println!("block deviation {:.1e}", result.block_deviation);
    println!("{}", to_json_string(&NetlistFile::new(result.circuit)));
    Ok(())
}
