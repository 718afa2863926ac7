//! Compare the brute-force oracle with the stationary-phase leading order
//! for an admissible ellipse along a doubling wave-number ladder.
//!
//!     cargo run --release -p nonscatter --example leading_vs_oracle

use nonscatter::asymptotics::leading_order;
use nonscatter::density::HerglotzDensity;
use nonscatter::geometry::RadiusFunction;
use nonscatter::oracle::{integral_i, QuadratureConfig, QuadratureSpec};

fn main() -> nonscatter::Result<()> {
    let q = 4.0;
    let rf = RadiusFunction::centered_ellipse(1.2, 1.0)?;
    let phi = HerglotzDensity::mode(-1);
    let eta = 0.7;
    let cfg = QuadratureConfig::default();

    println!("{:>6} {:>24} {:>24} {:>14}", "k", "oracle", "leading", "k*residual");
    for k in [10.0, 20.0, 40.0, 80.0] {
        let spec = QuadratureSpec::auto(&rf, q, k, &cfg)?;
        let oracle = integral_i(&rf, q, &phi, eta, k, spec)?;
        let lead = leading_order(&rf, q, &phi, eta, k, 0)?;
        println!(
            "{:>6} {:>11.4e}{:>+11.4e}i {:>11.4e}{:>+11.4e}i {:>14.4e}",
            k,
            oracle.re,
            oracle.im,
            lead.re,
            lead.im,
            k * (oracle.value() - lead).norm()
        );
    }
    Ok(())
}
