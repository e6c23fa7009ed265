#![allow(dead_code)]

use supergal::CurveInput;

pub fn example1(p: i64) -> CurveInput {
    let pp = p * p;
    CurveInput::monic(
        p as u64,
        6,
        &[0, pp, p, p + pp, 2 * p, 2 * p + pp, 1, 1 + p, 1 + 2 * p],
    )
}

pub fn example2() -> CurveInput {
    let p = 7;
    let pp = p * p;
    CurveInput::monic(
        7,
        6,
        &[
            0,
            p,
            pp,
            p + pp,
            2 * p,
            2 * p + pp,
            1,
            1 + p,
            1 + pp,
            1 + 2 * pp,
            1 + p + pp,
            1 + p + 2 * pp,
            2,
            2 + p,
            2 + 2 * p,
        ],
    )
}

/// Two discs meeting in one point: `{0, 7}` and `{1, 1-7, 1-14, 1-21}`.
pub fn two_lines() -> CurveInput {
    CurveInput::monic(7, 6, &[0, 7, 1, -6, -13, -20])
}

use proptest::prelude::*;
use supergal::arith::{divisors, euler_phi, vp, zeta};
use supergal::graph::rank_formula;
use supergal::report::whole_curve_genus;
use supergal::triples::{enumerate_classes, DEFAULT_ORACLE_LIMIT};
use supergal::{assemble_report, AnalysisOptions, Rational};

/// Random curves: `p` in {7, 13, 31}, `n` in {2, 3, 4, 6} with `n | p - 1`,
/// at most 12 roots built from base-p digits up to `p^4`.
pub fn random_curve() -> impl Strategy<Value = CurveInput> {
    let digits = prop::collection::vec((prop::array::uniform5(0i64..3), any::<bool>()), 3..=12);
    (
        prop::sample::select(vec![7u64, 13, 31]),
        prop::sample::select(vec![2u64, 3, 4, 6]),
        digits,
        0u32..2,
        prop::sample::select(vec![1i64, 2, 3, -1]),
        0u32..3,
    )
        .prop_filter_map(
            "needs n | p - 1, three roots and positive genus",
            |(p, n, digits, shift, unit, lc_val)| {
                if (p - 1) % n != 0 {
                    return None;
                }
                let pi = p as i64;
                let mut roots: Vec<i64> = digits
                    .iter()
                    .map(|(ds, neg)| {
                        let v = ds.iter().rev().fold(0i64, |acc, &d| acc * pi + d);
                        if *neg {
                            -v
                        } else {
                            v
                        }
                    })
                    .collect();
                roots.sort_unstable();
                roots.dedup();
                let deg = roots.len() as u64;
                if deg < 3 || whole_curve_genus(n, deg) == 0 {
                    return None;
                }
                let scale = Rational::new(1, pi.pow(shift)).unwrap();
                let roots = roots
                    .into_iter()
                    .map(|r| &Rational::from(r) * &scale)
                    .collect();
                let lc = Rational::from(unit * pi.pow(lc_val));
                Some(CurveInput::new(p, n, lc, roots))
            },
        )
}

/// Every global invariant of the pipeline on one input.
pub fn check_invariants(input: &CurveInput) -> Result<(), String> {
    let options = AnalysisOptions {
        run_oracle: true,
        ..AnalysisOptions::default()
    };
    let a = assemble_report(input, options).map_err(|e| format!("pipeline failed: {e}"))?;
    let ensure = |ok: bool, what: &str| {
        if ok {
            Ok(())
        } else {
            Err(format!("{what} on {input:?}"))
        }
    };

    ensure(
        a.graph.betti() == rank_formula(&a.picture, input.n),
        "betti != rank formula",
    )?;
    ensure(
        a.report.abelian_genus_sum + a.report.toric_rank == a.report.curve_genus,
        "genus conservation",
    )?;

    let classes = enumerate_classes(input, DEFAULT_ORACLE_LIMIT).map_err(|e| e.to_string())?;
    let oracle = a.oracle.as_ref().ok_or("oracle did not run")?;
    ensure(oracle.passed, "oracle disagreement")?;
    ensure(
        classes.len() == a.picture.image_ids().count(),
        "#classes != #image",
    )?;

    for f in &a.families {
        let big_n = f.children_mults.len() as i64;
        let n = input.n as i64;
        let mut twice = n * (big_n - 2) + 2 * f.d as i64
            - f.children_mults
                .iter()
                .map(|&m| supergal::arith::gcd(input.n, m) as i64)
                .sum::<i64>();
        let total: u64 = f.children_mults.iter().sum();
        if !total.is_multiple_of(input.n) {
            twice += n - supergal::arith::gcd(input.n, total) as i64;
        }
        ensure(
            twice >= 0 && twice == 2 * (f.d * f.genus_each) as i64,
            "genus formula",
        )?;
    }

    ensure(
        a.graph.check_incidence().is_ok(),
        "Frobenius breaks incidence",
    )?;
    let h1 = &a.report.h1_action;
    ensure(h1.order > 0, "Frobenius order")?;
    let degree: u64 = h1
        .eigenvalue_multiplicities
        .iter()
        .map(|(m, k)| euler_phi(*m) * k)
        .sum();
    ensure(
        degree as i64 == a.graph.betti(),
        "eigenvalue degrees != betti",
    )?;

    for d in divisors(input.p - 1) {
        for m in divisors((input.p - 1) / d) {
            let lhs = zeta(d * m, input.p).unwrap().pow(m);
            ensure(lhs == zeta(d, input.p).unwrap(), "zeta(dm)^m != zeta(d)")?;
        }
    }

    for c in &a.picture.clusters {
        let center = &input.roots[c.center()];
        let disc: Vec<usize> = (0..input.roots.len())
            .filter(|&r| {
                vp(&(&input.roots[r] - center), input.p) >= supergal::Valuation::Finite(c.depth)
            })
            .collect();
        ensure(disc == c.members, "cluster is not a disc")?;
    }
    for i in 0..input.roots.len() {
        for j in (i + 1)..input.roots.len() {
            let mu = vp(&(&input.roots[i] - &input.roots[j]), input.p);
            let disc: Vec<usize> = (0..input.roots.len())
                .filter(|&r| vp(&(&input.roots[r] - &input.roots[i]), input.p) >= mu)
                .collect();
            ensure(
                a.picture.clusters.iter().any(|c| c.members == disc),
                "pair disc missing from tree",
            )?;
        }
    }
    Ok(())
}
