//! Exact rationals, p-adic valuations and the residue field F_p.
//!
//! Roots of unity in F_p are normalized through the least primitive root
//! `g`: the chosen d-th root is `g^((p-1)/d)`, so `zeta(d*m)^m == zeta(d)`
//! holds for every admissible `d` and `m`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// An exact rational number in lowest terms with positive denominator.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Rational(BigRational);

impl Rational {
    pub fn new(numer: impl Into<BigInt>, denom: impl Into<BigInt>) -> Result<Self> {
        let denom = denom.into();
        if denom.is_zero() {
            return Err(Error::Parse("zero denominator".into()));
        }
        Ok(Rational(BigRational::new(numer.into(), denom)))
    }

    pub fn from_integer(n: impl Into<BigInt>) -> Self {
        Rational(BigRational::from_integer(n.into()))
    }

    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Rational(BigRational::one())
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    /// `self * p^k` for a possibly negative exponent.
    pub fn scale_by_power(&self, p: u64, k: i64) -> Self {
        let pk = num_traits::pow(BigInt::from(p), k.unsigned_abs() as usize);
        if k >= 0 {
            Rational(&self.0 * BigRational::from_integer(pk))
        } else {
            Rational(&self.0 / BigRational::from_integer(pk))
        }
    }
}

impl FromStr for Rational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        let bad = || Error::Parse(s.to_string());
        match t.split_once('/') {
            None => t
                .parse::<BigInt>()
                .map(Rational::from_integer)
                .map_err(|_| bad()),
            Some((a, b)) => {
                let a: BigInt = a.trim().parse().map_err(|_| bad())?;
                let b: BigInt = b.trim().parse().map_err(|_| bad())?;
                if b.is_zero() {
                    return Err(bad());
                }
                Rational::new(a, b)
            }
        }
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident) => {
        impl $tr<&Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational((&self.0).$method(&rhs.0))
            }
        }
        impl $tr for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational(self.0.$method(rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-&self.0)
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::from_integer(n)
    }
}

/// A p-adic valuation, extended by `+inf` (of zero) and `-inf` (of the point at infinity).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Valuation {
    MinusInfinity,
    Finite(i64),
    PlusInfinity,
}

impl Valuation {
    pub fn finite(self) -> Option<i64> {
        match self {
            Valuation::Finite(v) => Some(v),
            _ => None,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::MinusInfinity => f.write_str("-inf"),
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::PlusInfinity => f.write_str("+inf"),
        }
    }
}

fn vp_int(n: &BigInt, p: u64) -> i64 {
    debug_assert!(!n.is_zero());
    let p = BigInt::from(p);
    let mut n = n.clone();
    let mut k = 0;
    loop {
        let (q, r) = n.div_rem(&p);
        if !r.is_zero() {
            return k;
        }
        n = q;
        k += 1;
    }
}

/// Exponent of `p` in `x`; `+inf` for zero.
pub fn vp(x: &Rational, p: u64) -> Valuation {
    if x.is_zero() {
        return Valuation::PlusInfinity;
    }
    Valuation::Finite(vp_int(x.numer(), p) - vp_int(x.denom(), p))
}

/// Finite valuation of a nonzero rational.
pub(crate) fn vp_finite(x: &Rational, p: u64) -> i64 {
    vp(x, p).finite().expect("valuation of a nonzero rational")
}

fn mod_u64(n: &BigInt, p: u64) -> u64 {
    let r = n.mod_floor(&BigInt::from(p));
    r.to_u64().expect("residue below modulus")
}

/// Reduction mod p of a p-integral rational (zero allowed).
pub fn residue(x: &Rational, p: u64) -> Result<FpElem> {
    if x.is_zero() {
        return Ok(FpElem::new(0, p));
    }
    if vp_finite(x, p) < 0 {
        return Err(Error::NotIntegral(x.to_string()));
    }
    let num = FpElem::new(mod_u64(x.numer(), p), p);
    let den = FpElem::new(mod_u64(x.denom(), p), p);
    Ok(num * den.inv())
}

/// Residue of the unit part `x / p^vp(x)`; never zero.
pub fn unit_residue(x: &Rational, p: u64) -> Result<FpElem> {
    if x.is_zero() {
        return Err(Error::ZeroHasNoUnitResidue);
    }
    let v = vp_finite(x, p);
    residue(&x.scale_by_power(p, -v), p)
}

/// An element of the prime field F_p.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FpElem {
    pub value: u64,
    pub modulus: u64,
}

impl FpElem {
    pub fn new(value: u64, modulus: u64) -> Self {
        FpElem {
            value: value % modulus,
            modulus,
        }
    }

    pub fn from_i64(value: i64, modulus: u64) -> Self {
        FpElem::new(value.rem_euclid(modulus as i64) as u64, modulus)
    }

    pub fn one(modulus: u64) -> Self {
        FpElem::new(1, modulus)
    }

    pub fn is_zero(self) -> bool {
        self.value == 0
    }

    pub fn pow(self, mut e: u64) -> Self {
        let mut base = self;
        let mut acc = FpElem::one(self.modulus);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse; the caller guarantees `self != 0`.
    pub fn inv(self) -> Self {
        assert!(!self.is_zero(), "inverse of zero in F_{}", self.modulus);
        self.pow(self.modulus - 2)
    }

    /// The representative in `(-p/2, p/2]`, handy for printing equations.
    pub fn signed(self) -> i64 {
        if self.value > self.modulus / 2 {
            self.value as i64 - self.modulus as i64
        } else {
            self.value as i64
        }
    }
}

impl Mul for FpElem {
    type Output = FpElem;
    fn mul(self, rhs: FpElem) -> FpElem {
        debug_assert_eq!(self.modulus, rhs.modulus);
        let v = (self.value as u128 * rhs.value as u128) % self.modulus as u128;
        FpElem {
            value: v as u64,
            modulus: self.modulus,
        }
    }
}

impl Neg for FpElem {
    type Output = FpElem;
    fn neg(self) -> FpElem {
        FpElem::new(self.modulus - self.value, self.modulus)
    }
}

impl Sub for FpElem {
    type Output = FpElem;
    fn sub(self, rhs: FpElem) -> FpElem {
        FpElem::new(self.value + (self.modulus - rhs.value), self.modulus)
    }
}

impl fmt::Display for FpElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn powmod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(acc, b, m);
        }
        b = mulmod(b, b, m);
        e >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin for 64-bit integers.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &b in &BASES {
        if n.is_multiple_of(b) {
            return n == b;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &BASES {
        let mut x = powmod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut q = 2;
    while q * q <= n {
        if n.is_multiple_of(q) {
            out.push(q);
            while n.is_multiple_of(q) {
                n /= q;
            }
        }
        q += if q == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Least primitive root modulo the prime `p`.
pub fn primitive_root(p: u64) -> Result<u64> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if p == 2 {
        return Ok(1);
    }
    let factors = prime_factors(p - 1);
    (2..p)
        .find(|&g| factors.iter().all(|&q| powmod(g, (p - 1) / q, p) != 1))
        .ok_or_else(|| Error::Internal(format!("no primitive root mod {p}")))
}

/// The normalized primitive d-th root of unity `g^((p-1)/d)` in F_p.
pub fn zeta(d: u64, p: u64) -> Result<FpElem> {
    if d == 0 || !(p - 1).is_multiple_of(d) {
        return Err(Error::NoRootsOfUnity { d, p });
    }
    let g = primitive_root(p)?;
    Ok(FpElem::new(powmod(g, (p - 1) / d, p), p))
}

/// The unique `k` in `[0, d)` with `u^((p-1)/d) == zeta(d)^k`.
///
/// Frobenius sends a chosen d-th root of `u` to `zeta(d)^k` times itself.
pub fn dlog_mu(u: FpElem, d: u64, p: u64) -> Result<u64> {
    if u.is_zero() {
        return Err(Error::DlogOfZero);
    }
    let z = zeta(d, p)?;
    let target = u.pow((p - 1) / d);
    let mut acc = FpElem::one(p);
    for k in 0..d {
        if acc == target {
            return Ok(k);
        }
        acc = acc * z;
    }
    Err(Error::Internal(format!(
        "{u} has no discrete log in mu_{d} mod {p}"
    )))
}

pub fn gcd(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

pub fn gcd_all(values: impl IntoIterator<Item = u64>) -> u64 {
    values.into_iter().fold(0, gcd)
}

/// Divisors of `n` in increasing order.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut i = 1;
    while i * i <= n {
        if n.is_multiple_of(i) {
            small.push(i);
            if i != n / i {
                large.push(n / i);
            }
        }
        i += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

pub fn euler_phi(n: u64) -> u64 {
    prime_factors(n)
        .into_iter()
        .fold(n, |acc, q| acc / q * (q - 1))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> Rational {
        s.parse().unwrap()
    }

    #[test]
    fn valuations() {
        assert_eq!(vp(&q("0"), 7), Valuation::PlusInfinity);
        assert_eq!(vp(&q("50"), 5), Valuation::Finite(2));
        assert_eq!(vp(&q("3/10"), 5), Valuation::Finite(-1));
        assert!(Valuation::MinusInfinity < Valuation::Finite(-100));
        assert!(Valuation::Finite(100) < Valuation::PlusInfinity);
    }

    #[test]
    fn unit_residues() {
        assert_eq!(unit_residue(&q("-48"), 7).unwrap().value, 1);
        assert_eq!(unit_residue(&q("7"), 7).unwrap().value, 1);
        assert_eq!(unit_residue(&q("-56"), 7).unwrap().value, 6);
        assert_eq!(unit_residue(&q("0"), 7), Err(Error::ZeroHasNoUnitResidue));
        // 14/3 = 7 * 2/3, and 2/3 = 2 * 5 = 10 = 3 mod 7
        assert_eq!(unit_residue(&q("14/3"), 7).unwrap().value, 3);
    }

    #[test]
    fn roots_of_unity() {
        assert_eq!(zeta(1, 7).unwrap().value, 1);
        assert_eq!(zeta(2, 7).unwrap().value, 6);
        assert_eq!(zeta(6, 7).unwrap().value, 3);
        assert_eq!(primitive_root(13).unwrap(), 2);
        assert!(matches!(
            zeta(4, 7),
            Err(Error::NoRootsOfUnity { d: 4, p: 7 })
        ));
    }

    #[test]
    fn discrete_logs() {
        assert_eq!(dlog_mu(FpElem::new(6, 7), 2, 7).unwrap(), 1);
        assert_eq!(dlog_mu(FpElem::new(12, 13), 2, 13).unwrap(), 0);
        assert_eq!(dlog_mu(FpElem::new(6, 13), 2, 13).unwrap(), 1);
        for (d, p) in [(1, 7), (3, 7), (6, 7), (4, 13), (12, 13)] {
            assert_eq!(dlog_mu(FpElem::one(p), d, p).unwrap(), 0);
        }
        assert_eq!(dlog_mu(FpElem::new(0, 7), 2, 7), Err(Error::DlogOfZero));
    }

    #[test]
    fn parsing() {
        assert_eq!(q("-6/4").to_string(), "-3/2");
        assert_eq!(q("3/-6").to_string(), "-1/2");
        assert_eq!(q(" 12 ").to_string(), "12");
        assert!("1/0".parse::<Rational>().is_err());
        assert!("x".parse::<Rational>().is_err());
        assert!("1/2/3".parse::<Rational>().is_err());
    }

    #[test]
    fn number_theory_helpers() {
        assert_eq!(divisors(12), vec![1, 2, 3, 4, 6, 12]);
        assert_eq!(divisors(1), vec![1]);
        assert_eq!(euler_phi(1), 1);
        assert_eq!(euler_phi(6), 2);
        assert_eq!(euler_phi(12), 4);
        assert!(is_prime(2) && is_prime(7) && is_prime(1_000_000_007));
        assert!(!is_prime(1) && !is_prime(91) && !is_prime(3_215_031_751));
        assert_eq!(gcd_all([6, 6, 3]), 3);
    }
}
