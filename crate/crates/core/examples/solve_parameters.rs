//! Solve for the parameter pair realizing prescribed endpoint
//! expansions: given an eventually periodic expansion of 0 and a banded
//! expansion-of-1 word over an alphabet of size N, find the unique
//! slope in (N-2, N] and its offset.
//!
//! Run with: cargo run --example solve_parameters

use abshift::numerics::PrecisionContext;
use abshift::parameter::{solve_beta, ZeroExpansionSpec};
use abshift::real::Real;
use abshift::symbolic::DigitSeq;

fn main() -> abshift::Result<()> {
    let ctx = PrecisionContext::default();

    // u = 0^inf, v = 4 1 1 1 ... over {0..4}: the slope solves
    // beta^2 - 5 beta + 3 = 0, so beta = (5 + sqrt 13) / 2.
    let zero = ZeroExpansionSpec::zero();
    let v = DigitSeq::new(vec![4], vec![1], 5)?;
    let point = solve_beta(&zero, &v, 5, 100, &ctx)?;
    let closed = Real::from_int(13, 512).sqrt().add(&Real::from_int(5, 512)).div_int(2);
    println!("u = 0^inf, v = 4 (1)^inf, N = 5:");
    println!("  beta           = {}", point.beta().to_decimal(40));
    println!("  (5 + sqrt13)/2 = {}", closed.to_decimal(40));
    println!(
        "  |difference|   = {}",
        point.beta().sub(&closed).abs().to_decimal(4)
    );
    println!();

    // A nonzero expansion of 0: u = (01)^inf forces alpha = 1/(beta+1).
    let spec = ZeroExpansionSpec::new(DigitSeq::periodic(&[0, 1], 2)?, false)?;
    let v = DigitSeq::new(vec![3], vec![2, 1], 4)?;
    let point = solve_beta(&spec, &v, 4, 100, &ctx)?;
    println!("u = (01)^inf, v = 3 (21)^inf, N = 4:");
    println!("  beta  = {}", point.beta().to_decimal(40));
    println!("  alpha = {}", point.alpha().to_decimal(40));
    let implied = Real::one(point.beta().scale())
        .div(&point.beta().add(&Real::one(point.beta().scale()))); // 1/(beta+1)
    println!("  1/(beta+1) = {} (matches alpha)", implied.to_decimal(40));
    Ok(())
}
