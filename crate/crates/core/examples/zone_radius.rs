//! Stirling numbers, closed-form sigmoid derivatives and the zone radius.
//!
//! ```bash
//! cargo run --example zone_radius
//! ```

use stratified_pinn::calculus::{delta_epsilon, epsilon_n, sigmoid_derivative, stirling2, ZoneRadiusSpec};

fn main() -> stratified_pinn::Result<()> {
    println!("S(m, n) for m <= 7:");
    for m in 0..=7 {
        let row: Vec<String> = (0..=m).map(|n| format!("{:>4}", stirling2(m, n).unwrap())).collect();
        println!("  m={m}: {}", row.join(""));
    }

    println!("\nsigma^(n)(x):");
    for x in [-4.0, 0.0, 1.5, 6.0] {
        let d: Vec<String> = (1..=4)
            .map(|n| format!("{:+.3e}", sigmoid_derivative(n, x).unwrap()))
            .collect();
        println!("  x={x:>4}: {}", d.join("  "));
    }

    println!("\nzone radius for eps = 1e-3:");
    for n in 1..=6 {
        let spec = ZoneRadiusSpec::new(1e-3, n)?;
        println!(
            "  n={n}: eps_n = {:.3e}, delta = {:.4}",
            epsilon_n(&spec)?,
            delta_epsilon(&spec)?
        );
    }
    Ok(())
}
