//! Closed-form decomposition of a 2 x 2 transformation that attenuates one
//! channel and amplifies the other, checked against the numerical pipeline.

use qsynth::closedform::{analytic_circuit, analytic_params};
use qsynth::numkit::{ComplexMatrix, C64};
use qsynth::synth::{synthesize, SynthConfig, DEFAULT_EPS_SIGMA};

fn main() -> qsynth::Result<()> {
    let t = ComplexMatrix::from_rows(&[
        vec![C64::new(0.3, 0.4), C64::new(-0.2, 0.0)],
        vec![C64::new(0.0, 0.1), C64::new(1.7, 0.0)],
    ])?;

    let p = analytic_params(&t)?;
    println!("sigma1 = {:.6}, sigma2 = {:.6}", p.sigma1, p.sigma2);
    println!("W: xi1 = {:.4}, theta2 = {:.4}", p.xi1, p.theta2);
    println!(
        "U: gamma = {:.4}, alpha = ({:.4}, {:.4}), beta = ({:.4}, {:.4})",
        p.gamma, p.alpha1, p.alpha2, p.beta1, p.beta2
    );

    let analytic = analytic_circuit(&p, DEFAULT_EPS_SIGMA)?;
    println!("analytic netlist ({} elements):", analytic.circuit.elements.len());
    for e in &analytic.circuit.elements {
        println!("  {e:?}");
    }

    let numeric = synthesize(&t, &SynthConfig::default())?;
    println!("numeric singular values {:?}", numeric.singular_values);
    println!(
        "analytic block deviation {:.1e}, numeric {:.1e}",
        analytic.block_deviation, numeric.block_deviation
    );
    println!(
        "squeezers: analytic {}, numeric {}",
        analytic.counts.squeezers, numeric.counts.squeezers
    );
    Ok(())
}
