//! Energy thresholds and regime classification for a few channel settings.
//!
//!     cargo run --example thresholds

use noma_mec::{System, SystemParams};

fn main() -> noma_mec::Result<()> {
    for h_n_sq in [0.5, 1.0, 2.0] {
        let sys = System::new(SystemParams::new(15.0, 5.0, 1.0, h_n_sq)?)?;
        println!(
            "|h_n|^2 = {h_n_sq}: OMA needs E > {:.3}, hybrid above E1 = {:.3}, pure NOMA from E2 = {:.3}",
            sys.e_oma_min(),
            sys.e1(),
            sys.e2()
        );
        for e in [10.0, 50.0, 500.0, 2000.0] {
            println!("  E = {e:>6}: {}", sys.classify(e));
        }
    }
    Ok(())
}
