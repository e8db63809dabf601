//! The scalar special case: Cesaro and Abel means of a bounded sequence.
//! For the alternating 0/1 sequence both means converge to 1/2, and the gap
//! between them at coupled parameters shrinks like 1/n. The last section
//! prints the a-priori constant that bounds that gap for any eventually
//! periodic sequence.

use tauber::scalar::{abel_seq, cesaro_seq, BoundedSequence, EventuallyPeriodic};

fn main() -> tauber::Result<()> {
    let alt = BoundedSequence::alternating01();
    println!("{:>6} {:>14} {:>14} {:>12}", "n", "cesaro", "abel(1/n)", "gap*n");
    for n in [2u64, 4, 8, 16, 64, 256, 1024, 16384] {
        let c = cesaro_seq(&alt, n)?;
        let a = abel_seq(&alt, 1.0 / n as f64, 1e-12)?;
        println!("{n:>6} {c:>14.10} {a:>14.10} {:>12.6}", (c - a).abs() * n as f64);
    }

    println!();
    for (label, pre, cycle) in [
        ("alternating", vec![], vec![0.0, 1.0]),
        ("with preamble", vec![1.0, 1.0, 1.0], vec![0.0, 1.0]),
        ("longer cycle", vec![], vec![0.0, 0.25, 1.0, 0.5]),
    ] {
        let p = EventuallyPeriodic::new(pre, cycle)?;
        println!(
            "{label:<14} cycle mean {:.4}, |cesaro - abel| <= {:.4} / n",
            p.cycle_mean(),
            p.hardy_constant(),
        );
    }
    Ok(())
}
