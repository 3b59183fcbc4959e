//! RMS delay spread of a short-range link over scenario draws.

use thz_gbsm::config::preset;
use thz_gbsm::run::rms_delay_spreads;

fn main() -> thz_gbsm::Result<()> {
    let cfg = preset("fig9")?;
    let mut s = rms_delay_spreads(&cfg, 300e9)?;
    s.sort_by(f64::total_cmp);
    let q = |p: f64| s[((s.len() - 1) as f64 * p).round() as usize] * 1e9;
    println!("{} draws", s.len());
    println!("10%  {:.4} ns", q(0.1));
    println!("50%  {:.4} ns", q(0.5));
    println!("90%  {:.4} ns", q(0.9));
    Ok(())
}
