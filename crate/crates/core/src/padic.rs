//! `p`-adic helpers: least residues, Fermat quotients, harmonic numbers
//! modulo `p^k`, and Morita's `p`-adic Gamma function.

use std::fmt;

use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::arith::{
    int, mod_inverse, rat, reduce_rational, BigInt, BigRational, PadicContext, Residue,
};
use crate::error::{Error, Result};

/// Parity of a least residue `<a>_p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn of(n: u64) -> Parity {
        if n % 2 == 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
        })
    }
}

/// The four parameters `a = -1/d`, `d in {2, 3, 4, 6}`, for which the
/// Gamma-product factorization over `np` terms holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SpecialValue {
    MinusHalf,
    MinusThird,
    MinusQuarter,
    MinusSixth,
}

impl SpecialValue {
    pub const ALL: [SpecialValue; 4] = [
        SpecialValue::MinusHalf,
        SpecialValue::MinusThird,
        SpecialValue::MinusQuarter,
        SpecialValue::MinusSixth,
    ];

    /// `d` in `a = -1/d`.
    pub fn denominator(self) -> u64 {
        match self {
            SpecialValue::MinusHalf => 2,
            SpecialValue::MinusThird => 3,
            SpecialValue::MinusQuarter => 4,
            SpecialValue::MinusSixth => 6,
        }
    }

    pub fn value(self) -> BigRational {
        rat(-1, self.denominator() as i64)
    }

    pub fn from_rational(a: &BigRational) -> Result<SpecialValue> {
        SpecialValue::ALL
            .into_iter()
            .find(|s| &s.value() == a)
            .ok_or_else(|| Error::NotSpecialValue(a.to_string()))
    }
}

/// A `p`-adic integer `a` together with its least residue `<a>_p`.
#[derive(Debug, Clone)]
pub struct PadicParameter {
    a: BigRational,
    ctx: PadicContext,
    residue_class: u64,
}

impl PadicParameter {
    pub fn new(a: BigRational, ctx: &PadicContext) -> Result<Self> {
        let residue_class = least_residue(&a, ctx.p())?;
        Ok(PadicParameter {
            a,
            ctx: ctx.clone(),
            residue_class,
        })
    }

    pub fn a(&self) -> &BigRational {
        &self.a
    }

    pub fn ctx(&self) -> &PadicContext {
        &self.ctx
    }

    pub fn p(&self) -> u64 {
        self.ctx.p()
    }

    /// `<a>_p`.
    pub fn residue_class(&self) -> u64 {
        self.residue_class
    }

    pub fn parity(&self) -> Parity {
        Parity::of(self.residue_class)
    }

    /// `(a - <a>_p) / p`.
    pub fn delta(&self) -> BigRational {
        delta_of(self)
    }

    /// `p - <a>_p`.
    pub fn complement(&self) -> u64 {
        self.p() - self.residue_class
    }
}

/// Least non-negative integer `r` with `a ≡ r (mod p)`.
pub fn least_residue(a: &BigRational, p: u64) -> Result<u64> {
    let ctx = PadicContext::new(p, 1)?;
    let r = reduce_rational(a, &ctx)?;
    Ok(r.value().to_u64().expect("residue below p"))
}

/// `δ = (a - <a>_p) / p`.
pub fn delta_of(param: &PadicParameter) -> BigRational {
    (param.a() - int(param.residue_class())) / int(param.p())
}

/// Fermat quotient `q_p(a) = (a^{p-1} - 1) / p`, reduced modulo `p`.
///
/// `a^{p-1}` is only needed modulo `p^2`; [`fermat_quotient_exact`] computes
/// the same residue from the exact rational.
pub fn fermat_quotient(a: &BigRational, p: u64) -> Result<Residue> {
    let ctx = PadicContext::new(p, 1)?;
    check_unit(a, p)?;
    let ctx2 = PadicContext::new(p, 2)?;
    let power = reduce_rational(a, &ctx2)?.pow(p - 1);
    let lifted = power.value() - BigInt::one();
    debug_assert!((&lifted % ctx.p_big()).is_zero());
    Ok(ctx.residue(lifted / ctx.p_big()))
}

/// Fermat quotient through the exact rational `(a^{p-1} - 1) / p`.
pub fn fermat_quotient_exact(a: &BigRational, p: u64) -> Result<Residue> {
    let ctx = PadicContext::new(p, 1)?;
    check_unit(a, p)?;
    let power = num_traits::pow(a.clone(), (p - 1) as usize);
    let q = (power - BigRational::one()) / int(p);
    reduce_rational(&q, &ctx)
}

fn check_unit(a: &BigRational, p: u64) -> Result<()> {
    let pb = BigInt::from(p);
    if a.is_zero() || (a.numer() % &pb).is_zero() || (a.denom() % &pb).is_zero() {
        return Err(Error::NotCoprime {
            value: a.to_string(),
            p,
        });
    }
    Ok(())
}

/// `H_n` modulo `p^k`.
pub fn harmonic_mod(n: u64, ctx: &PadicContext) -> Result<Residue> {
    let p = ctx.p();
    if n >= p {
        return Err(Error::DenominatorDivisibleByP {
            value: format!("1/{p} in H_{n}"),
            p,
        });
    }
    let mut acc = BigInt::zero();
    for i in 1..=n {
        acc += mod_inverse(&BigInt::from(i), ctx)?.value();
    }
    Ok(ctx.residue(acc))
}

/// Morita's `p`-adic Gamma function modulo `p^k`.
///
/// `x` is lifted to the integer `m` in `[0, p^k)` with `m ≡ x`, and
/// `Γ_p(m) = (-1)^m ∏_{1 ≤ j < m, p ∤ j} j` is evaluated directly. Continuity
/// of `Γ_p` makes the result independent of the lift.
pub fn gamma_p(x: &BigRational, ctx: &PadicContext) -> Result<Residue> {
    let m = reduce_rational(x, ctx)?;
    Ok(gamma_p_integer(m.value(), ctx))
}

/// `Γ_p(m)` modulo `p^k` for a non-negative integer `m`.
pub fn gamma_p_integer(m: &BigInt, ctx: &PadicContext) -> Residue {
    assert!(!m.is_negative(), "gamma_p_integer needs m >= 0");
    let sign_negative = m.is_odd();
    let p = ctx.p();
    let product = match (ctx.modulus().to_u64(), m.to_u64()) {
        (Some(modulus), Some(m)) => {
            let modulus = modulus as u128;
            let mut acc: u128 = 1;
            for j in 1..m {
                if j % p != 0 {
                    acc = acc * (j as u128 % modulus) % modulus;
                }
            }
            BigInt::from(acc)
        }
        _ => {
            let modulus = ctx.modulus();
            let pb = ctx.p_big();
            let mut acc = BigInt::one();
            let mut j = BigInt::one();
            while &j < m {
                if !(&j % &pb).is_zero() {
                    acc = (acc * &j) % modulus;
                }
                j += 1;
            }
            acc
        }
    };
    let r = ctx.residue(product);
    if sign_negative {
        -r
    } else {
        r
    }
}

/// `(-1)^{(p+1)/2} Γ_p(-a/2)^2 Γ_p((a+1)/2)^2` modulo `p^k`.
pub fn gamma_factor(a: &BigRational, ctx: &PadicContext) -> Result<Residue> {
    let g1 = gamma_p(&(-a / int(2)), ctx)?;
    let g2 = gamma_p(&((a + int(1)) / int(2)), ctx)?;
    let prod = &g1 * &g1 * &g2 * &g2;
    Ok(if ((ctx.p() + 1) / 2) % 2 == 1 {
        -prod
    } else {
        prod
    })
}

/// `⌊-p a⌋` for `a = -1/d`, which is `⌊p/d⌋`.
pub fn floor_neg_pa(a: SpecialValue, p: u64) -> u64 {
    p / a.denominator()
}
