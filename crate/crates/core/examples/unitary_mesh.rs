//! Triangular beam-splitter mesh for a random 5-mode unitary.

use qsynth::blocks::Element;
use qsynth::mesh::{elements_unitary, reck_decompose};
use qsynth::random::{random_unitary, rng};

fn main() -> qsynth::Result<()> {
    let n = 5;
    let u = random_unitary(n, &mut rng(11));
    let elements = reck_decompose(&u, 1e-10)?;

    let bs = elements
        .iter()
        .filter(|e| matches!(e, Element::BeamSplitter { .. }))
        .count();
    let ps = elements.len() - bs;
    println!(
        "{bs} beam splitters (bound {}), {ps} phase shifters (bound {})",
        n * (n - 1) / 2,
        n * (n + 1) / 2
    );
    for e in &elements {
        println!("  {e:?}");
    }
    let rebuilt = elements_unitary(&elements, n).expect("mesh is passive");
    println!("reconstruction error {:.1e}", rebuilt.max_abs_diff(&u));
    Ok(())
}
