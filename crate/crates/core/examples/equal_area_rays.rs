//! Equal-area ray angles against random Gaussian draws.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thz_gbsm::rays::{draw_relative_angles, mea_discretize};

fn main() -> thz_gbsm::Result<()> {
    let sigma = 2.8f64.to_radians();
    let mea = mea_discretize(sigma, 20)?;
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let random = draw_relative_angles(sigma, 20, &mut rng);
    let rms = |v: &[f64]| (v.iter().map(|x| x * x).sum::<f64>() / v.len() as f64).sqrt();
    println!("sigma        {:.5} rad", sigma);
    println!("mea rms      {:.5} rad", rms(&mea));
    println!("random rms   {:.5} rad", rms(&random));
    for (m, r) in mea.iter().zip(&random) {
        println!("{m:>+10.5} {r:>+10.5}");
    }
    Ok(())
}
