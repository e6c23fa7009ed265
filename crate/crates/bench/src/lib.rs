//! Benchmark inputs.

use supergal::CurveInput;

/// Nested clusters of sizes 2, 3, 3 and singletons around `0`, `1`, `2`.
pub fn example_curve(p: i64) -> CurveInput {
    let pp = p * p;
    CurveInput::monic(
        p as u64,
        6,
        &[0, pp, p, p + pp, 2 * p, 2 * p + pp, 1, 1 + p, 1 + 2 * p],
    )
}

/// Roots `0..count` spread across residue classes and powers of `p`.
pub fn spread_curve(p: i64, count: usize) -> CurveInput {
    let roots: Vec<i64> = (0..count as i64)
        .map(|k| (k % 3) + p * (k / 3) + p * p * (k / 9))
        .collect();
    CurveInput::monic(p as u64, 6, &roots)
}
