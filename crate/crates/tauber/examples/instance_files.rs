//! Instances live in a small text format, so experiment inputs can be
//! versioned and edited by hand. This writes a catalog instance out, reads
//! it back, checks the round trip, and parses a custom instance from a
//! string.

use tauber::catalog;
use tauber::format::{parse_instance, read_instance_file, write_instance_file, write_instance};
use tauber::value::{avg_value_family, Bound};

fn main() -> tauber::Result<()> {
    let spec = catalog::by_name("ergodic5")?;
    let dir = std::env::temp_dir();
    let path = dir.join("ergodic5.game");
    write_instance_file(&spec, &path)?;
    let back = read_instance_file(&path)?;
    println!("round trip of {}: states preserved = {}", path.display(), back.num_states() == spec.num_states());
    println!();
    print!("{}", write_instance(&spec));

    // A custom three-state chain, straight from text.
    let custom = parse_instance(
        "# instance little-chain\n\
         states 3\n\
         s 0 g=0.1 A=2 B=1\n\
         s 1 g=0.6 A=1 B=1\n\
         s 2 g=0.9 A=1 B=1\n\
         t 0 0 0 -> 1\n\
         t 0 1 0 -> 2\n\
         t 1 0 0 -> 1\n\
         t 2 0 0 -> 2\n",
    )?;
    let v = avg_value_family(&custom, 40, Bound::Lower)?.values(40)?;
    println!();
    println!("little-chain 40-step average values: {v:?}");
    Ok(())
}
