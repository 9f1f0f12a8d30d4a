//! Pochhammer symbols and truncated hypergeometric sums.
//!
//! The series studied throughout the crate is
//!
//! ```text
//! F(a; N) = Σ_{k=0}^{N-1} (1/2)_k (-a)_k (a+1)_k / (1)_k^3
//!         = Σ_{k=0}^{N-1} C(2k,k)^2 C(a+k,2k) (-1/4)^k
//! ```
//!
//! It has an exact evaluator over the rationals and a modular fast path that
//! never builds large rationals. The fast path carries each term as
//! `p^v · u` with `u` a unit modulo `p^K`, because the running ratio
//! `t_{k+1}/t_k` has `p` in its denominator once `k + 1 ≡ 0 (mod p)` even
//! though every term is `p`-integral.

use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith::{
    central_binomial, int, mod_inverse, rat, rational_binomial, reduce_rational, BigInt,
    BigRational, PadicContext, Residue,
};
use crate::error::{Error, Result};

/// Rising factorial `(a)_k = a (a+1) ... (a+k-1)`, `(a)_0 = 1`.
pub fn pochhammer(a: &BigRational, k: u64) -> BigRational {
    let (u, v) = (a.numer(), a.denom());
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 0..k {
        num *= u + v * BigInt::from(i);
        den *= v;
    }
    BigRational::new(num, den)
}

/// Parameters of a truncated `rFs` series `Σ_{k<N} ∏(a_i)_k / ∏(b_j)_k · z^k / k!`.
#[derive(Debug, Clone, PartialEq)]
pub struct HypergeomSpec {
    upper: Vec<BigRational>,
    lower: Vec<BigRational>,
    z: BigRational,
    truncation: u64,
}

impl HypergeomSpec {
    pub fn new(
        upper: Vec<BigRational>,
        lower: Vec<BigRational>,
        z: BigRational,
        truncation: u64,
    ) -> Result<Self> {
        for b in &lower {
            if b.is_integer() && !b.is_positive() {
                let depth = (-b.to_integer()).to_u64().unwrap_or(u64::MAX);
                if depth < truncation {
                    return Err(Error::InvalidSeries(format!(
                        "lower parameter {b} vanishes inside the truncation range 0..{truncation}"
                    )));
                }
            }
        }
        Ok(HypergeomSpec {
            upper,
            lower,
            z,
            truncation,
        })
    }

    /// The `3F2(1/2, -a, a+1; 1, 1; 1)` shape truncated at `n` terms.
    pub fn rv_3f2(a: &BigRational, n: u64) -> Self {
        HypergeomSpec {
            upper: vec![rat(1, 2), -a.clone(), a + int(1)],
            lower: vec![int(1), int(1)],
            z: int(1),
            truncation: n,
        }
    }

    pub fn upper(&self) -> &[BigRational] {
        &self.upper
    }

    pub fn lower(&self) -> &[BigRational] {
        &self.lower
    }

    pub fn z(&self) -> &BigRational {
        &self.z
    }

    pub fn truncation(&self) -> u64 {
        self.truncation
    }

    /// `k`-th summand.
    pub fn term(&self, k: u64) -> BigRational {
        let mut t = num_traits::pow(self.z.clone(), k as usize) / pochhammer(&int(1), k);
        for a in &self.upper {
            t *= pochhammer(a, k);
        }
        for b in &self.lower {
            t /= pochhammer(b, k);
        }
        t
    }

    /// Exact value of the truncated sum.
    pub fn sum_exact(&self) -> BigRational {
        let mut term = BigRational::one();
        let mut acc = BigRational::zero();
        for k in 0..self.truncation {
            acc += &term;
            let kk = int(k);
            let mut ratio = &self.z / (&kk + int(1));
            for a in &self.upper {
                ratio *= a + &kk;
            }
            for b in &self.lower {
                ratio /= b + &kk;
            }
            if ratio.is_zero() {
                break;
            }
            term *= ratio;
        }
        acc
    }

    /// Truncated sum reduced modulo `p^k`.
    pub fn sum_mod(&self, ctx: &PadicContext) -> Result<Residue> {
        reduce_rational(&self.sum_exact(), ctx)
    }
}

/// The `k`-th summand of `F(a; N)` in both of its closed forms.
#[derive(Debug, Clone, PartialEq)]
pub struct HyperTerm {
    pub k: u64,
    pub pochhammer_form: BigRational,
    pub binomial_form: BigRational,
}

impl HyperTerm {
    pub fn new(a: &BigRational, k: u64) -> Self {
        HyperTerm {
            k,
            pochhammer_form: term_pochhammer_form(a, k),
            binomial_form: term_binomial_form(a, k),
        }
    }

    pub fn forms_agree(&self) -> bool {
        self.pochhammer_form == self.binomial_form
    }
}

/// `(1/2)_k (-a)_k (a+1)_k / (1)_k^3`.
pub fn term_pochhammer_form(a: &BigRational, k: u64) -> BigRational {
    let fact = pochhammer(&int(1), k);
    pochhammer(&rat(1, 2), k) * pochhammer(&-a.clone(), k) * pochhammer(&(a + int(1)), k)
        / (&fact * &fact * &fact)
}

/// `C(2k,k)^2 · C(a+k, 2k) · (-1/4)^k`.
pub fn term_binomial_form(a: &BigRational, k: u64) -> BigRational {
    let c = int(central_binomial(k));
    let quarter = num_traits::pow(rat(-1, 4), k as usize);
    let upper = a + int(k);
    &c * &c * rational_binomial(&upper, 2 * k as i64).expect("non-negative index") * quarter
}

/// Integer pieces of `a = m/d` used by the ratio `t_{k+1}/t_k`.
struct RatioParts {
    m: BigInt,
    d: BigInt,
}

impl RatioParts {
    fn new(a: &BigRational) -> Self {
        RatioParts {
            m: a.numer().clone(),
            d: a.denom().clone(),
        }
    }

    /// Numerator factors `(2k+1)`, `(dk - m)`, `(dk + m + d)`.
    fn numerators(&self, k: u64) -> [BigInt; 3] {
        let kb = BigInt::from(k);
        let dk = &self.d * &kb;
        [
            BigInt::from(2 * k + 1),
            &dk - &self.m,
            &dk + &self.m + &self.d,
        ]
    }

    /// Denominator `2 d^2 (k+1)^3`.
    fn denominator(&self, k: u64) -> BigInt {
        let k1 = BigInt::from(k + 1);
        BigInt::from(2) * &self.d * &self.d * &k1 * &k1 * &k1
    }
}

/// Exact value of `F(a; n)`.
pub fn truncated_3f2(a: &BigRational, n: u64) -> BigRational {
    truncated_3f2_range(a, 0, n)
}

/// Exact `Σ_{k=start}^{end-1}` of the summands of `F(a; ·)`.
pub fn truncated_3f2_range(a: &BigRational, start: u64, end: u64) -> BigRational {
    // t_k = P_k / Q_k with Q_k | Q_{k+1}; accumulate U/Q over the running Q
    // and reduce once at the end.
    let parts = RatioParts::new(a);
    let mut p_k = BigInt::one();
    let mut q_k = BigInt::one();
    let mut acc = BigInt::zero();
    for k in 0..end {
        if k >= start {
            acc += &p_k;
        }
        if k + 1 == end {
            break;
        }
        let [x, y, z] = parts.numerators(k);
        let step_den = parts.denominator(k);
        p_k = p_k * x * y * z;
        if p_k.is_zero() {
            break;
        }
        acc *= &step_den;
        q_k *= step_den;
    }
    BigRational::new(acc, q_k)
}

/// `p^v · u` with `u` a unit modulo `p^K`, or exactly zero.
#[derive(Debug, Clone)]
struct ValuedUnit {
    zero: bool,
    valuation: i64,
    unit: BigInt,
}

impl ValuedUnit {
    fn one() -> Self {
        ValuedUnit {
            zero: false,
            valuation: 0,
            unit: BigInt::one(),
        }
    }

    fn split(x: &BigInt, ctx: &PadicContext) -> (i64, BigInt) {
        let p = ctx.p_big();
        let mut v = 0i64;
        let mut y = x.clone();
        loop {
            let (q, r) = y.div_rem(&p);
            if !r.is_zero() {
                break;
            }
            y = q;
            v += 1;
        }
        (v, y.mod_floor(ctx.modulus()))
    }

    fn mul_int(&mut self, x: &BigInt, ctx: &PadicContext) {
        if self.zero {
            return;
        }
        if x.is_zero() {
            self.zero = true;
            return;
        }
        let (v, u) = Self::split(x, ctx);
        self.valuation += v;
        self.unit = (&self.unit * u).mod_floor(ctx.modulus());
    }

    fn div_int(&mut self, x: &BigInt, ctx: &PadicContext) -> Result<()> {
        assert!(!x.is_zero(), "division by zero in running product");
        if self.zero {
            return Ok(());
        }
        let (v, u) = Self::split(x, ctx);
        self.valuation -= v;
        let inv = mod_inverse(&u, ctx)?;
        self.unit = (&self.unit * inv.value()).mod_floor(ctx.modulus());
        Ok(())
    }

    /// Value modulo `p^K`; errors if the running value is not `p`-integral.
    fn to_residue_value(&self, ctx: &PadicContext) -> Result<BigInt> {
        if self.zero {
            return Ok(BigInt::zero());
        }
        if self.valuation < 0 {
            return Err(Error::DenominatorDivisibleByP {
                value: format!("p^{} · {}", self.valuation, self.unit),
                p: ctx.p(),
            });
        }
        if self.valuation >= ctx.k() as i64 {
            return Ok(BigInt::zero());
        }
        let scale = num_traits::pow(ctx.p_big(), self.valuation as usize);
        Ok((&self.unit * scale).mod_floor(ctx.modulus()))
    }
}

fn check_parameter(a: &BigRational, ctx: &PadicContext) -> Result<()> {
    if (a.denom() % ctx.p_big()).is_zero() {
        return Err(Error::DenominatorDivisibleByP {
            value: a.to_string(),
            p: ctx.p(),
        });
    }
    Ok(())
}

/// `F(a; n)` modulo `p^K`, computed term by term in modular arithmetic.
pub fn truncated_3f2_mod(a: &BigRational, n: u64, ctx: &PadicContext) -> Result<Residue> {
    Ok(truncated_3f2_mod_prefixes(a, &[n], ctx)?.remove(0))
}

/// `F(a; n)` modulo `p^K` for every `n` in `cuts`, in one pass.
pub fn truncated_3f2_mod_prefixes(
    a: &BigRational,
    cuts: &[u64],
    ctx: &PadicContext,
) -> Result<Vec<Residue>> {
    check_parameter(a, ctx)?;
    let max = cuts.iter().copied().max().unwrap_or(0);
    let mut partial = Vec::with_capacity(max as usize + 1);
    partial.push(BigInt::zero());
    let parts = RatioParts::new(a);
    let mut term = ValuedUnit::one();
    let mut acc = BigInt::zero();
    for k in 0..max {
        acc = (acc + term.to_residue_value(ctx)?).mod_floor(ctx.modulus());
        partial.push(acc.clone());
        if k + 1 < max {
            for f in parts.numerators(k) {
                term.mul_int(&f, ctx);
            }
            term.div_int(&parts.denominator(k), ctx)?;
        }
    }
    Ok(cuts
        .iter()
        .map(|&c| ctx.residue(partial[c as usize].clone()))
        .collect())
}

/// Sum of the summands with `k ∈ [rp, (r+1)p)` modulo `p^K`.
pub fn block_sum_mod(a: &BigRational, r: u64, ctx: &PadicContext) -> Result<Residue> {
    let p = ctx.p();
    let mut v = truncated_3f2_mod_prefixes(a, &[r * p, (r + 1) * p], ctx)?;
    let hi = v.pop().unwrap();
    let lo = v.pop().unwrap();
    Ok(hi - lo)
}

/// Exact block sum over `k ∈ [rp, (r+1)p)`.
pub fn block_sum_exact(a: &BigRational, r: u64, p: u64) -> BigRational {
    truncated_3f2_range(a, r * p, (r + 1) * p)
}
