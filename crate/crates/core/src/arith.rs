//! Exact integer and rational arithmetic, and residues modulo a prime power.
//!
//! Every value that later modules compare is either an exact [`BigRational`]
//! or a [`Residue`] tied to a [`PadicContext`]. Residues remember the context
//! they were reduced in; combining residues from two different contexts is an
//! error (or a panic through the operator traits), never a silent coercion.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;
use std::sync::Arc;

use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub use num_bigint::BigInt;
pub use num_rational::BigRational;

use crate::error::{Error, Result};

/// Deterministic trial-division primality test.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n % 2 == 0 || n % 3 == 0 {
        return false;
    }
    let mut d = 5u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 || n % (d + 2) == 0 {
            return false;
        }
        d += 6;
    }
    true
}

/// Primes in the inclusive range `[lo, hi]`.
pub fn primes_between(lo: u64, hi: u64) -> Vec<u64> {
    (lo..=hi).filter(|&n| is_prime(n)).collect()
}

struct ContextInner {
    p: u64,
    k: u32,
    modulus: BigInt,
}

/// A prime `p >= 5` and a precision exponent `k >= 1`; arithmetic happens modulo `p^k`.
///
/// Cloning is cheap (shared handle).
#[derive(Clone)]
pub struct PadicContext(Arc<ContextInner>);

impl PadicContext {
    pub fn new(p: u64, k: u32) -> Result<Self> {
        if p < 5 {
            return Err(Error::PrimeTooSmall(p));
        }
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if k == 0 {
            return Err(Error::ZeroPrecision);
        }
        let modulus = num_traits::pow(BigInt::from(p), k as usize);
        Ok(PadicContext(Arc::new(ContextInner { p, k, modulus })))
    }

    pub fn p(&self) -> u64 {
        self.0.p
    }

    pub fn p_big(&self) -> BigInt {
        BigInt::from(self.0.p)
    }

    /// Precision exponent `k`.
    pub fn k(&self) -> u32 {
        self.0.k
    }

    pub fn modulus(&self) -> &BigInt {
        &self.0.modulus
    }

    /// Same prime at a different precision.
    pub fn with_precision(&self, k: u32) -> Result<Self> {
        PadicContext::new(self.p(), k)
    }

    /// Reduce an integer to its least non-negative representative.
    pub fn residue(&self, value: impl Into<BigInt>) -> Residue {
        Residue {
            value: value.into().mod_floor(self.modulus()),
            ctx: self.clone(),
        }
    }

    pub fn zero(&self) -> Residue {
        self.residue(0)
    }

    pub fn one(&self) -> Residue {
        self.residue(1)
    }

    fn same(&self, other: &PadicContext) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || (self.p() == other.p() && self.k() == other.k())
    }

    fn check_same(&self, other: &PadicContext) -> Result<()> {
        if self.same(other) {
            Ok(())
        } else {
            Err(Error::ContextMismatch {
                lhs: format!("{self}"),
                rhs: format!("{other}"),
            })
        }
    }
}

impl PartialEq for PadicContext {
    fn eq(&self, other: &Self) -> bool {
        self.same(other)
    }
}

impl Eq for PadicContext {}

impl fmt::Display for PadicContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}^{}", self.p(), self.k())
    }
}

impl fmt::Debug for PadicContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PadicContext({self})")
    }
}

/// Least non-negative representative of a class modulo `p^k`.
#[derive(Clone, PartialEq, Eq)]
pub struct Residue {
    value: BigInt,
    ctx: PadicContext,
}

impl Residue {
    pub fn value(&self) -> &BigInt {
        &self.value
    }

    pub fn ctx(&self) -> &PadicContext {
        &self.ctx
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    pub fn checked_add(&self, other: &Residue) -> Result<Residue> {
        self.ctx.check_same(&other.ctx)?;
        Ok(self.ctx.residue(&self.value + &other.value))
    }

    pub fn checked_sub(&self, other: &Residue) -> Result<Residue> {
        self.ctx.check_same(&other.ctx)?;
        Ok(self.ctx.residue(&self.value - &other.value))
    }

    pub fn checked_mul(&self, other: &Residue) -> Result<Residue> {
        self.ctx.check_same(&other.ctx)?;
        Ok(self.ctx.residue(&self.value * &other.value))
    }

    pub fn pow(&self, e: u64) -> Residue {
        Residue {
            value: self.value.modpow(&BigInt::from(e), self.ctx.modulus()),
            ctx: self.ctx.clone(),
        }
    }

    pub fn inverse(&self) -> Result<Residue> {
        mod_inverse(&self.value, &self.ctx)
    }

    /// Reduce to a coarser precision of the same prime.
    pub fn truncate(&self, k: u32) -> Result<Residue> {
        if k > self.ctx.k() {
            return Err(Error::Precondition(format!(
                "cannot lift a residue mod {} to precision {k}",
                self.ctx
            )));
        }
        let ctx = self.ctx.with_precision(k)?;
        Ok(ctx.residue(self.value.clone()))
    }
}

impl fmt::Display for Residue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl fmt::Debug for Residue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self.value, self.ctx)
    }
}

// Operator forms panic on a context mismatch; use the `checked_*` methods to
// get an `Error` instead.
macro_rules! residue_binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl $trait<&Residue> for &Residue {
            type Output = Residue;
            fn $method(self, rhs: &Residue) -> Residue {
                match self.$checked(rhs) {
                    Ok(r) => r,
                    Err(e) => panic!("{e}"),
                }
            }
        }
        impl $trait<Residue> for Residue {
            type Output = Residue;
            fn $method(self, rhs: Residue) -> Residue {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&Residue> for Residue {
            type Output = Residue;
            fn $method(self, rhs: &Residue) -> Residue {
                (&self).$method(rhs)
            }
        }
    };
}

residue_binop!(Add, add, checked_add);
residue_binop!(Sub, sub, checked_sub);
residue_binop!(Mul, mul, checked_mul);

impl Neg for &Residue {
    type Output = Residue;
    fn neg(self) -> Residue {
        self.ctx.residue(-&self.value)
    }
}

impl Neg for Residue {
    type Output = Residue;
    fn neg(self) -> Residue {
        -&self
    }
}

/// Inverse of `x` modulo `p^k`.
pub fn mod_inverse(x: &BigInt, ctx: &PadicContext) -> Result<Residue> {
    let m = ctx.modulus();
    let xr = x.mod_floor(m);
    let eg = xr.extended_gcd(m);
    if !eg.gcd.is_one() {
        return Err(Error::NotInvertible {
            value: x.to_string(),
            modulus: m.to_string(),
        });
    }
    Ok(ctx.residue(eg.x))
}

/// Image of a `p`-integral rational in `Z / p^k`.
pub fn reduce_rational(q: &BigRational, ctx: &PadicContext) -> Result<Residue> {
    if q.denom().is_one() {
        return Ok(ctx.residue(q.numer().clone()));
    }
    if (q.denom() % ctx.p_big()).is_zero() {
        return Err(Error::DenominatorDivisibleByP {
            value: q.to_string(),
            p: ctx.p(),
        });
    }
    let inv = mod_inverse(q.denom(), ctx)?;
    Ok(ctx.residue(q.numer() * inv.value()))
}

/// `p`-adic valuation of a non-zero integer.
pub fn valuation(x: &BigInt, p: u64) -> u32 {
    assert!(!x.is_zero(), "valuation of zero");
    let p = BigInt::from(p);
    let mut v = 0;
    let mut y = x.abs();
    loop {
        let (q, r) = y.div_rem(&p);
        if !r.is_zero() {
            return v;
        }
        y = q;
        v += 1;
    }
}

/// `p`-adic valuation of a non-zero rational (may be negative).
pub fn rational_valuation(q: &BigRational, p: u64) -> i64 {
    valuation(q.numer(), p) as i64 - valuation(q.denom(), p) as i64
}

/// Generalized binomial coefficient `x (x-1) ... (x-m+1) / m!` for rational `x`.
///
/// Negative `m` is rejected rather than mapped to zero.
pub fn rational_binomial(x: &BigRational, m: i64) -> Result<BigRational> {
    if m < 0 {
        return Err(Error::Precondition(format!(
            "binomial lower index must be non-negative, got {m}"
        )));
    }
    let (u, v) = (x.numer(), x.denom());
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 0..m {
        num *= u - v * BigInt::from(i);
        den *= v * BigInt::from(i + 1);
    }
    Ok(BigRational::new(num, den))
}

/// Ordinary binomial coefficient; zero when `k > n`.
pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// `C(2k, k)`.
pub fn central_binomial(k: u64) -> BigInt {
    binomial(2 * k, k)
}

/// `H_n = 1 + 1/2 + ... + 1/n`, with `H_0 = 0`.
pub fn harmonic_exact(n: u64) -> BigRational {
    // Accumulate over a common denominator n! and reduce once.
    let mut num = BigInt::zero();
    let mut den = BigInt::one();
    for i in 1..=n {
        let i = BigInt::from(i);
        num = num * &i + &den;
        den *= i;
    }
    BigRational::new(num, den)
}

/// Harmonic numbers `H_0..=H_n`, built incrementally.
#[derive(Clone, Debug)]
pub struct HarmonicTable {
    values: Vec<BigRational>,
}

impl HarmonicTable {
    pub fn new(n: u64) -> Self {
        let mut values = Vec::with_capacity(n as usize + 1);
        values.push(BigRational::zero());
        for i in 1..=n {
            let next = &values[(i - 1) as usize] + BigRational::new(BigInt::one(), BigInt::from(i));
            values.push(next);
        }
        HarmonicTable { values }
    }

    /// Largest index available.
    pub fn max_index(&self) -> u64 {
        self.values.len() as u64 - 1
    }

    /// `H_n`. Panics if `n` exceeds the table.
    pub fn get(&self, n: u64) -> &BigRational {
        &self.values[n as usize]
    }
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: impl Into<BigInt>) -> BigRational {
    BigRational::from_integer(n.into())
}

/// Parse `"m"` or `"m/d"` into a rational.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Config(format!("cannot parse `{s}` as a rational"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n = BigInt::from_str(n.trim()).map_err(|_| bad())?;
            let d = BigInt::from_str(d.trim()).map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(n, d))
        }
        None => Ok(int(BigInt::from_str(s).map_err(|_| bad())?)),
    }
}

/// Exact `n` as `u64` when it is a non-negative integer that fits.
pub fn as_u64(q: &BigRational) -> Option<u64> {
    if q.is_integer() {
        q.numer().to_u64()
    } else {
        None
    }
}
