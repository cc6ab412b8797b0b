//! A beam splitter with one output port discarded: synthesize it, then show
//! that two photons are either both lost or both kept.

use qsynth::numkit::ComplexMatrix;
use qsynth::sim::{fock_evolve, passive_block};
use qsynth::synth::{synthesize, SynthConfig};

fn main() -> qsynth::Result<()> {
    let t = ComplexMatrix::from_real_rows(&[&[0.5, -0.5], &[-0.5, 0.5]])?;
    let result = synthesize(&t, &SynthConfig::default())?;

    println!("singular values: {:?}", result.singular_values);
    println!("full ancillas:   {:?}", result.circuit.full_ancillas);
    for e in &result.circuit.elements {
        println!("  {e:?}");
    }
    println!(
        "block deviation {:.1e}, quasiunitarity deviation {:.1e}",
        result.block_deviation, result.quasiunitarity_deviation
    );

    let a = passive_block(&result.s_total, 1e-10)?;
    let out = fock_evolve(&a, &[1, 1, 0])?;
    for (occ, amp) in out.iter() {
        println!("  {occ:?}  P = {:.4}", amp.norm_sqr());
    }
    let kept = out.probability_where(|o| o[0] + o[1] == 2);
    let single = out.probability_where(|o| o[0] + o[1] == 1);
    println!("P(both kept) = {kept:.4}, P(exactly one kept) = {single:.1e}");
    Ok(())
}
