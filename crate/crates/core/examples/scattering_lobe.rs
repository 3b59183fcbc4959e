//! Gaussian width of the Kirchhoff main lobe across the band.

use thz_gbsm::scattering::{mainlobe_sigma, material, material_names};

fn main() -> thz_gbsm::Result<()> {
    println!("materials: {}", material_names().join(", "));
    let surface = material("fig3")?;
    for f in (300..=350).step_by(10) {
        let s = mainlobe_sigma(&surface, f as f64 * 1e9)?;
        println!("{f} GHz  sigma = {s:.4} rad ({:.2} deg)", s.to_degrees());
    }
    Ok(())
}
