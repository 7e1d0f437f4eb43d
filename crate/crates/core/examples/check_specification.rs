//! Decide the specification property for a few subshifts via the
//! boundedness of the two overlap sets (prefixes of one endpoint
//! expansion recurring inside the other).
//!
//! Run with: cargo run --example check_specification

use abshift::symbolic::{has_specification, DigitSeq, SubshiftSpec};

fn show(label: &str, spec: &SubshiftSpec, beta_hint: Option<f64>) {
    let report = has_specification(spec, 100, 200, beta_hint);
    println!("{label}");
    println!(
        "  D(u): {:?} (found {} lengths, exact: {:?})",
        report.du.verdict,
        report.du.found.len(),
        report.du.exact
    );
    println!(
        "  D(v): {:?} (found {} lengths, exact: {:?})",
        report.dv.verdict,
        report.dv.found.len(),
        report.dv.exact
    );
    println!("  verdict: {:?}", report.verdict);
    if report.degenerate {
        println!("  note: degenerate spec (u = v)");
    }
    if report.applicability_flag {
        println!("  note: slope at or below 2; the boundedness criterion needs beta > 2");
    }
    println!();
}

fn main() -> abshift::Result<()> {
    // Full 2-shift: both overlap sets finite.
    let full = SubshiftSpec::new(DigitSeq::constant(0, 2)?, DigitSeq::constant(1, 2)?)?;
    show("full 2-shift (u = 0^inf, v = 1^inf)", &full, Some(2.0));

    // Banded witness family: digit-disjoint endpoints, both sets empty.
    let banded = SubshiftSpec::new(
        DigitSeq::constant(0, 5)?,
        DigitSeq::new(vec![4], vec![1], 5)?,
    )?;
    show("banded witness (u = 0^inf, v = 4 (1)^inf)", &banded, Some(4.3));

    // u = 0^inf, v = 1 0^inf: prefixes of u recur in v at every length.
    let growing = SubshiftSpec::new(
        DigitSeq::constant(0, 2)?,
        DigitSeq::new(vec![1], vec![0], 2)?,
    )?;
    show("growing overlap (u = 0^inf, v = 1 0^inf)", &growing, None);

    Ok(())
}
