//! Dense integer polynomials: characteristic polynomials and cyclotomic factors.
//!
//! Coefficients are stored lowest degree first.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::arith::divisors;

pub type IntPoly = Vec<BigInt>;

fn trim(mut p: IntPoly) -> IntPoly {
    while p.len() > 1 && p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    p
}

/// Quotient and remainder by a monic divisor.
pub fn divrem_monic(num: &IntPoly, den: &IntPoly) -> (IntPoly, IntPoly) {
    assert!(den.last().is_some_and(One::is_one), "divisor must be monic");
    let dn = den.len() - 1;
    let mut rem = num.clone();
    if rem.len() <= dn {
        return (vec![BigInt::zero()], trim(rem));
    }
    let mut quot = vec![BigInt::zero(); rem.len() - dn];
    for k in (0..quot.len()).rev() {
        let c = rem[k + dn].clone();
        if c.is_zero() {
            continue;
        }
        for (j, dc) in den.iter().enumerate() {
            rem[k + j] -= &c * dc;
        }
        quot[k] = c;
    }
    rem.truncate(dn.max(1));
    (trim(quot), trim(rem))
}

/// The m-th cyclotomic polynomial.
pub fn cyclotomic(m: u64) -> IntPoly {
    let mut p = vec![BigInt::zero(); m as usize + 1];
    p[0] = BigInt::from(-1);
    p[m as usize] = BigInt::one();
    for d in divisors(m) {
        if d < m {
            p = divrem_monic(&p, &cyclotomic(d)).0;
        }
    }
    p
}

/// `det(x I - A)` by the Faddeev-LeVerrier recursion; every division is exact.
pub fn charpoly(a: &[Vec<i64>]) -> IntPoly {
    let n = a.len();
    let a: Vec<Vec<BigInt>> = a
        .iter()
        .map(|row| row.iter().map(|&x| BigInt::from(x)).collect())
        .collect();
    let mut coeffs = vec![BigInt::zero(); n + 1];
    coeffs[n] = BigInt::one();
    let mut m = vec![vec![BigInt::zero(); n]; n];
    for k in 1..=n {
        // M_k = A M_{k-1} + c_{n-k+1} I
        let mut next = vec![vec![BigInt::zero(); n]; n];
        for i in 0..n {
            for j in 0..n {
                let mut s = BigInt::zero();
                for l in 0..n {
                    if !a[i][l].is_zero() && !m[l][j].is_zero() {
                        s += &a[i][l] * &m[l][j];
                    }
                }
                next[i][j] = s;
            }
            next[i][i] += &coeffs[n - k + 1];
        }
        m = next;
        let mut trace = BigInt::zero();
        for i in 0..n {
            for l in 0..n {
                trace += &a[i][l] * &m[l][i];
            }
        }
        let (q, r) = (-trace).div_rem(&BigInt::from(k));
        debug_assert!(r.is_zero());
        coeffs[n - k] = q;
    }
    coeffs
}

/// Multiplicity of each cyclotomic factor `Phi_m`, for `m` dividing `order`.
///
/// Returns `None` when the polynomial is not a product of such factors.
pub fn cyclotomic_multiplicities(poly: &IntPoly, order: u64) -> Option<BTreeMap<u64, u64>> {
    let mut rest = trim(poly.clone());
    let mut out = BTreeMap::new();
    for m in divisors(order) {
        let phi = cyclotomic(m);
        loop {
            if rest.len() < phi.len() {
                break;
            }
            let (q, r) = divrem_monic(&rest, &phi);
            if !(r.len() == 1 && r[0].is_zero()) {
                break;
            }
            rest = q;
            *out.entry(m).or_insert(0) += 1;
        }
    }
    (rest.len() == 1 && rest[0].is_one()).then_some(out)
}

pub fn format_poly(p: &IntPoly) -> String {
    let mut terms = Vec::new();
    for (k, c) in p.iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let mono = match k {
            0 => String::new(),
            1 => "x".to_string(),
            _ => format!("x^{k}"),
        };
        let coef = if k > 0 && c.is_one() {
            String::new()
        } else if k > 0 && *c == BigInt::from(-1) {
            "-".to_string()
        } else if k > 0 {
            format!("{c}*")
        } else {
            c.to_string()
        };
        terms.push(format!("{coef}{mono}"));
    }
    if terms.is_empty() {
        return "0".into();
    }
    terms.join(" + ").replace("+ -", "- ")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ip(v: &[i64]) -> IntPoly {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn cyclotomics() {
        assert_eq!(cyclotomic(1), ip(&[-1, 1]));
        assert_eq!(cyclotomic(2), ip(&[1, 1]));
        assert_eq!(cyclotomic(3), ip(&[1, 1, 1]));
        assert_eq!(cyclotomic(4), ip(&[1, 0, 1]));
        assert_eq!(cyclotomic(6), ip(&[1, -1, 1]));
        assert_eq!(cyclotomic(12), ip(&[1, 0, -1, 0, 1]));
    }

    #[test]
    fn charpoly_of_small_matrices() {
        // 3-cycle permutation matrix: x^3 - 1
        let p = charpoly(&[vec![0, 0, 1], vec![1, 0, 0], vec![0, 1, 0]]);
        assert_eq!(p, ip(&[-1, 0, 0, 1]));
        let m = cyclotomic_multiplicities(&p, 3).unwrap();
        assert_eq!(m, BTreeMap::from([(1, 1), (3, 1)]));

        let p = charpoly(&[vec![2, 1], vec![1, 3]]);
        assert_eq!(p, ip(&[5, -5, 1]));
        assert!(cyclotomic_multiplicities(&p, 6).is_none());

        assert_eq!(charpoly(&[]), ip(&[1]));
    }

    #[test]
    fn division() {
        let (q, r) = divrem_monic(&ip(&[-1, 0, 0, 1]), &ip(&[-1, 1]));
        assert_eq!(q, ip(&[1, 1, 1]));
        assert_eq!(r, ip(&[0]));
        assert_eq!(format_poly(&ip(&[1, -1, 1])), "x^2 - x + 1");
    }
}
