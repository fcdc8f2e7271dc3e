//! Ratio of relative entropy to dissipation along a rescaled run, and the
//! mismatch in the identity relating the two entropies.

use fracpme::verify::{probes, VerifyOptions};

fn main() -> fracpme::Result<()> {
    for line in probes(&VerifyOptions::quick())? {
        println!("{line}");
    }
    Ok(())
}
