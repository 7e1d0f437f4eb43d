//! Digit expansions of the endpoints 0 and 1 for a few parameter pairs,
//! with reconstruction residuals against their certified tail bounds.
//!
//! Run with: cargo run --example expand_endpoints

use abshift::expansion::{expansion_of_one, expansion_of_zero, reconstruct, ParamPoint};
use abshift::numerics::PrecisionContext;
use abshift::real::Real;

fn main() -> abshift::Result<()> {
    let ctx = PrecisionContext::default();
    let cases = [
        ("0", "2", "doubling map"),
        ("0.5", "2.5", "offset 1/2, slope 5/2"),
        ("1/3", "3", "offset 1/3, slope 3"),
    ];
    for (alpha, beta, label) in cases {
        let point = ParamPoint::new(ctx.parse_real(alpha)?, ctx.parse_real(beta)?, &ctx)?;
        println!(
            "{label}: alpha = {alpha}, beta = {beta}, alphabet size {}",
            point.alphabet_size()
        );
        let depth = 24;
        let zero = expansion_of_zero(&point, depth, &ctx)?;
        let one = expansion_of_one(&point, depth, &ctx)?;
        println!("  expansion of 0: {:?}", zero.digits);
        println!("  expansion of 1: {:?}", one.digits);

        let (value, tail) = reconstruct(&zero.digits, &point, &ctx)?;
        println!(
            "  reconstruct(u) = {} (tail bound {})",
            value.to_decimal(12),
            tail.tail_bound.to_decimal(6)
        );
        let (value, tail) = reconstruct(&one.digits, &point, &ctx)?;
        let residual = Real::one(value.scale()).sub(&value).abs();
        println!(
            "  |1 - reconstruct(v)| = {} (tail bound {})",
            residual.to_decimal(6),
            tail.tail_bound.to_decimal(6)
        );
        println!();
    }
    Ok(())
}
