//! Checkers for the auxiliary congruences used on the way to the two main
//! theorems.
//!
//! Each checker evaluates both sides exactly (or through the modular fast path
//! for block sums) and compares residues modulo `p` or `p^2`. Links of the
//! form `X = Y` are additionally required to hold as exact rationals.
//!
//! Several sums multiply `C(α+k, 2k)` (which vanishes for `k > α`) by
//! reciprocals of its own factors. Those products are evaluated with the
//! vanishing factor removed, i.e. as the removable singularity they are; see
//! [`binomial_over_factor`].

use std::fmt;

use num_traits::Zero;

use crate::arith::{
    binomial, central_binomial, int, rat, rational_binomial, reduce_rational, BigInt, BigRational,
    HarmonicTable, PadicContext, Residue,
};
use crate::error::{Error, Result};
use crate::hyperseries::{block_sum_mod, term_binomial_form};
use crate::identities::central_ratio;
use crate::padic::{
    fermat_quotient, floor_neg_pa, gamma_factor, harmonic_mod, PadicParameter, Parity, SpecialValue,
};

/// Named parameters of one check instance.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct CaseParams {
    pub p: u64,
    pub a: Option<BigRational>,
    pub n: Option<u64>,
    pub r: Option<u64>,
    pub k: Option<u64>,
    /// Position in a chain of `≡`/`=` links.
    pub link: Option<u32>,
}

impl CaseParams {
    pub fn p(p: u64) -> Self {
        CaseParams {
            p,
            ..Default::default()
        }
    }

    pub fn with_a(mut self, a: &BigRational) -> Self {
        self.a = Some(a.clone());
        self
    }

    pub fn with_r(mut self, r: u64) -> Self {
        self.r = Some(r);
        self
    }

    pub fn with_k(mut self, k: u64) -> Self {
        self.k = Some(k);
        self
    }

    pub fn with_link(mut self, link: u32) -> Self {
        self.link = Some(link);
        self
    }
}

/// One evaluated congruence.
#[derive(Debug, Clone, PartialEq)]
pub struct CongruenceCase {
    pub id: &'static str,
    pub params: CaseParams,
    pub lhs: Residue,
    pub rhs: Residue,
    pub modulus_exponent: u32,
    /// For `=` links: whether the two sides agree as exact rationals.
    pub exact_equal: Option<bool>,
    pub pass: bool,
    pub note: Option<String>,
}

impl CongruenceCase {
    pub fn new(id: &'static str, params: CaseParams, lhs: Residue, rhs: Residue) -> Self {
        let pass = lhs == rhs;
        CongruenceCase {
            id,
            params,
            modulus_exponent: lhs.ctx().k(),
            lhs,
            rhs,
            exact_equal: None,
            pass,
            note: None,
        }
    }

    /// An `=` link: exact values compared, residues recorded modulo `p^k`.
    pub fn exact(
        id: &'static str,
        params: CaseParams,
        lhs: &BigRational,
        rhs: &BigRational,
        ctx: &PadicContext,
    ) -> Result<Self> {
        let mut case = CongruenceCase::new(
            id,
            params,
            reduce_rational(lhs, ctx)?,
            reduce_rational(rhs, ctx)?,
        );
        let equal = lhs == rhs;
        case.exact_equal = Some(equal);
        case.pass = case.pass && equal;
        Ok(case)
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    /// Negative control: the same case with `rhs + 1`.
    pub fn perturbed(&self) -> Self {
        let mut c = self.clone();
        c.rhs = &self.rhs + &self.rhs.ctx().one();
        c.pass = c.lhs == c.rhs && c.exact_equal.unwrap_or(true);
        c
    }
}

impl fmt::Display for CongruenceCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} p={} lhs={} rhs={} mod p^{} {}",
            self.id,
            self.params.p,
            self.lhs,
            self.rhs,
            self.modulus_exponent,
            if self.pass { "pass" } else { "FAIL" }
        )
    }
}

fn ctx(p: u64, k: u32) -> Result<PadicContext> {
    PadicContext::new(p, k)
}

fn half(p: u64) -> u64 {
    (p - 1) / 2
}

fn require_parity(param: &PadicParameter, want: Parity) -> Result<()> {
    let residue = param.residue_class();
    match (param.parity(), want) {
        (Parity::Even, Parity::Odd) => Err(Error::EvenResidueClass { residue }),
        (Parity::Odd, Parity::Even) => Err(Error::OddResidueClass { residue }),
        _ => Ok(()),
    }
}

fn require_k(k: u64, max: u64, what: &str) -> Result<()> {
    if k > max {
        return Err(Error::Precondition(format!(
            "k = {k} exceeds {max} ({what})"
        )));
    }
    Ok(())
}

/// `C(2k,k)^2 (-1/4)^k`.
fn central_weight(k: u64) -> BigRational {
    let c = int(central_binomial(k));
    &c * &c * num_traits::pow(rat(-1, 4), k as usize)
}

/// `C(x+k, 2k) / divisor`, where `divisor` is one of the factors
/// `x+1, ..., x+k, x, x-1, ..., x-k+1` of the numerator.
///
/// When the divisor is zero, the matching zero factor is removed from the
/// product instead of dividing.
pub fn binomial_over_factor(x: &BigRational, k: u64, divisor: &BigRational) -> Result<BigRational> {
    let mut factors: Vec<BigRational> = (1..=k).map(|i| x + int(i)).collect();
    factors.extend((0..k).map(|j| x - int(j)));
    let position = factors.iter().position(|f| f == divisor).ok_or_else(|| {
        Error::Precondition(format!(
            "{divisor} is not a factor of C({x}+{k}, {})",
            2 * k
        ))
    })?;
    factors.swap_remove(position);
    let fact: BigInt = (1..=2 * k).map(BigInt::from).product();
    let prod: BigRational = factors.into_iter().product();
    Ok(prod / int(fact))
}

fn special(a: &BigRational) -> Result<SpecialValue> {
    SpecialValue::from_rational(a)
}

/// `(-1/4)^e` modulo `p^k`.
fn minus_quarter_pow(e: u64, ctx: &PadicContext) -> Result<Residue> {
    Ok(reduce_rational(&rat(-1, 4), ctx)?.pow(e))
}

/// `C(2rp+2k, rp+k) ≡ C(2r,r) C(2k,k) (1 + 2rp(H_2k - H_k)) (mod p^2)`.
pub fn check_nx(p: u64, r: u64, k: u64) -> Result<CongruenceCase> {
    require_k(k, half(p), "k <= (p-1)/2")?;
    let c2 = ctx(p, 2)?;
    let h = HarmonicTable::new(2 * k);
    let lhs = c2.residue(binomial(2 * r * p + 2 * k, r * p + k));
    let rhs = int(central_binomial(r) * central_binomial(k))
        * (int(1) + int(2 * r * p) * (h.get(2 * k) - h.get(k)));
    Ok(CongruenceCase::new(
        "nx",
        CaseParams::p(p).with_r(r).with_k(k),
        lhs,
        reduce_rational(&rhs, &c2)?,
    ))
}

/// Same congruence squared, modulo `p^2`.
pub fn check_nb12(p: u64, r: u64, k: u64) -> Result<CongruenceCase> {
    require_k(k, half(p), "k <= (p-1)/2")?;
    let c2 = ctx(p, 2)?;
    let h = HarmonicTable::new(2 * k);
    let b = binomial(2 * r * p + 2 * k, r * p + k);
    let lhs = c2.residue(&b * &b);
    let cr = central_binomial(r);
    let ck = central_binomial(k);
    let rhs = int(&cr * &cr * &ck * &ck) * (int(1) + int(4 * r * p) * (h.get(2 * k) - h.get(k)));
    Ok(CongruenceCase::new(
        "nb12",
        CaseParams::p(p).with_r(r).with_k(k),
        lhs,
        reduce_rational(&rhs, &c2)?,
    ))
}

/// The three sums with inner weights `Σ 1/(-a-1+i)`, `Σ 1/(a+i)`, `H_k / 2`
/// over `k < p` are congruent modulo `p` (odd `<a>_p`).
///
/// Returns the links `S1 ≡ S2` and `S2 ≡ S3`.
pub fn check_nb7(p: u64, a: &BigRational) -> Result<Vec<CongruenceCase>> {
    let c1 = ctx(p, 1)?;
    let param = PadicParameter::new(a.clone(), &c1)?;
    require_parity(&param, Parity::Odd)?;
    let h = HarmonicTable::new(p);
    let mut s1 = BigRational::zero();
    let mut s2 = BigRational::zero();
    let mut s3 = BigRational::zero();
    for k in 0..p {
        let w = central_weight(k);
        for i in 1..=k {
            // 1/(-a-1+i) = -1/(a-(i-1))
            s1 -= &w * binomial_over_factor(a, k, &(a - int(i - 1)))?;
            s2 += &w * binomial_over_factor(a, k, &(a + int(i)))?;
        }
        s3 += term_binomial_form(a, k) * h.get(k) / int(2);
    }
    let (r1, r2, r3) = (
        reduce_rational(&s1, &c1)?,
        reduce_rational(&s2, &c1)?,
        reduce_rational(&s3, &c1)?,
    );
    let base = CaseParams::p(p).with_a(a);
    Ok(vec![
        CongruenceCase::new("nb7", base.clone().with_link(1), r1, r2.clone()),
        CongruenceCase::new("nb7", base.with_link(2), r2, r3),
    ])
}

/// Block sum over `k ∈ [rp, (r+1)p)` vanishes modulo `p^2` (odd `<a>_p`).
pub fn check_block_theorem1(p: u64, a: &BigRational, r: u64) -> Result<CongruenceCase> {
    let c2 = ctx(p, 2)?;
    let param = PadicParameter::new(a.clone(), &c2)?;
    require_parity(&param, Parity::Odd)?;
    let lhs = block_sum_mod(a, r, &c2)?;
    Ok(CongruenceCase::new(
        "nb10",
        CaseParams::p(p).with_a(a).with_r(r),
        lhs,
        c2.zero(),
    ))
}

/// Factorization of `C(a+k+rp, 2k+2rp)` modulo `p^2` for `k <= (p-1)/2`.
pub fn check_nb14(p: u64, a: &BigRational, r: u64, k: u64) -> Result<CongruenceCase> {
    require_k(k, half(p), "k <= (p-1)/2")?;
    let c2 = ctx(p, 2)?;
    let param = PadicParameter::new(a.clone(), &c2)?;
    let alpha = int(param.residue_class());
    let delta = param.delta();
    let h = HarmonicTable::new(2 * k);
    let pr = int(p);
    let rr = int(r);

    let lhs = rational_binomial(&(a + int(k + r * p)), (2 * k + 2 * r * p) as i64)?;
    let outer = rational_binomial(&(&alpha + (&delta + &rr) * &pr), (2 * r * p) as i64)?;
    let inner = first_order_binomial(&alpha, k, &rr, &delta, p)?
        - rational_binomial(&(&alpha + int(k)), 2 * k as i64)? * int(2 * r * p) * h.get(2 * k);
    let rhs = outer * inner;
    Ok(CongruenceCase::new(
        "nb14",
        CaseParams::p(p).with_a(a).with_r(r).with_k(k),
        reduce_rational(&lhs, &c2)?,
        reduce_rational(&rhs, &c2)?,
    ))
}

/// `C(α+k,2k) (1 + p(Σ (r+δ)/(α+i) + Σ (r-δ)/(-α-1+i)))`, both sums over `i = 1..=k`,
/// with removable singularities resolved.
fn first_order_binomial(
    alpha: &BigRational,
    k: u64,
    r: &BigRational,
    delta: &BigRational,
    p: u64,
) -> Result<BigRational> {
    let pr = int(p);
    let mut acc = rational_binomial(&(alpha + int(k)), 2 * k as i64)?;
    for i in 1..=k {
        acc += &pr * (r + delta) * binomial_over_factor(alpha, k, &(alpha + int(i)))?;
        acc -= &pr * (r - delta) * binomial_over_factor(alpha, k, &(alpha - int(i - 1)))?;
    }
    Ok(acc)
}

/// Block sum rewritten over `k <= (p-1)/2` with first-order corrections, modulo `p^2`.
pub fn check_nb15(p: u64, a: &BigRational, r: u64) -> Result<CongruenceCase> {
    let c2 = ctx(p, 2)?;
    let param = PadicParameter::new(a.clone(), &c2)?;
    let alpha = int(param.residue_class());
    let delta = param.delta();
    let h = HarmonicTable::new(p);
    let rr = int(r);
    let pr = int(p);

    let lhs = block_sum_mod(a, r, &c2)?;
    let mut sum = BigRational::zero();
    for k in 0..=half(p) {
        let w = central_weight(k);
        let base = rational_binomial(&(&alpha + int(k)), 2 * k as i64)?;
        let harmonic = &pr * &rr * (int(2) * h.get(2 * k) - int(4) * h.get(k));
        let correction = first_order_binomial(&alpha, k, &rr, &delta, p)? - &base;
        sum += w * (&base * (int(1) + harmonic) + correction);
    }
    let cr = int(central_binomial(r));
    let outer = rational_binomial(&(&alpha + (&delta + &rr) * &pr), (2 * r * p) as i64)?;
    let prefactor = reduce_rational(&(&cr * &cr * outer), &c2)? * minus_quarter_pow(r * p, &c2)?;
    let rhs = prefactor * reduce_rational(&sum, &c2)?;
    Ok(CongruenceCase::new(
        "nb15",
        CaseParams::p(p).with_a(a).with_r(r),
        lhs,
        rhs,
    ))
}

/// `Σ_{k<=(p-1)/2} t(<a>_p, k) ≡ Σ_{k<=<a>_p} t(<a>_p, k) = 0 (mod p^2)`.
///
/// The middle sum is also required to vanish exactly.
pub fn check_nb16(p: u64, a: &BigRational) -> Result<CongruenceCase> {
    let c2 = ctx(p, 2)?;
    let param = PadicParameter::new(a.clone(), &c2)?;
    require_parity(&param, Parity::Odd)?;
    let alpha = param.residue_class();
    let first: BigRational = (0..=half(p))
        .map(|k| term_binomial_form(&int(alpha), k))
        .sum();
    let middle: BigRational = (0..=alpha)
        .map(|k| term_binomial_form(&int(alpha), k))
        .sum();
    let mut case = CongruenceCase::new(
        "nb16",
        CaseParams::p(p).with_a(a),
        reduce_rational(&first, &c2)?,
        reduce_rational(&middle, &c2)?,
    );
    let vanishes = middle.is_zero();
    case.exact_equal = Some(vanishes);
    case.pass = case.pass && vanishes;
    Ok(case.with_note("middle sum must vanish exactly"))
}

/// First-order coefficient of the block sum vanishes modulo `p` (odd `<a>_p`).
pub fn check_nb17(p: u64, a: &BigRational, r: u64) -> Result<CongruenceCase> {
    let c1 = ctx(p, 1)?;
    let param = PadicParameter::new(a.clone(), &c1)?;
    require_parity(&param, Parity::Odd)?;
    let alpha_n = param.residue_class();
    let alpha = int(alpha_n);
    let delta = param.delta();
    let rr = int(r);
    let h = HarmonicTable::new(2 * p);

    let mut lhs = BigRational::zero();
    for k in 0..=half(p) {
        let w = central_weight(k);
        let base = rational_binomial(&(&alpha + int(k)), 2 * k as i64)?;
        let mut inner = &base * &rr * (int(2) * h.get(2 * k) - int(4) * h.get(k));
        for i in 1..=k {
            inner += (&rr + &delta) * binomial_over_factor(&alpha, k, &(&alpha + int(i)))?;
            inner -= (&rr - &delta) * binomial_over_factor(&alpha, k, &(&alpha - int(i - 1)))?;
        }
        lhs += w * inner;
    }
    let middle: BigRational = (0..=alpha_n)
        .map(|k| term_binomial_form(&alpha, k) * &rr * (int(2) * h.get(2 * k) - int(3) * h.get(k)))
        .sum();
    let mut case = CongruenceCase::new(
        "nb17",
        CaseParams::p(p).with_a(a).with_r(r),
        reduce_rational(&lhs, &c1)?,
        reduce_rational(&middle, &c1)?,
    );
    let vanishes = middle.is_zero();
    case.exact_equal = Some(vanishes);
    case.pass = case.pass && vanishes;
    Ok(case.with_note("middle sum must vanish exactly"))
}

/// Pochhammer-ratio congruence with the `H_{⌊-pa⌋}` correction, modulo `p^2`.
pub fn check_nc1(p: u64, a: &BigRational, r: u64, k: u64) -> Result<CongruenceCase> {
    let s = special(a)?;
    require_k(k, p - 1, "k <= p-1")?;
    let c2 = ctx(p, 2)?;
    let h = HarmonicTable::new(p);
    let ratio = |n: u64| pochhammer_ratio(a, n);
    let lhs = ratio(k + r * p);
    let rp = int(r * p);
    let mut tail = BigRational::zero();
    for i in 0..k {
        tail += (-a + int(i)).recip() + (a + int(1 + i)).recip();
    }
    let correction =
        int(1) + int(2) * &rp * h.get(floor_neg_pa(s, p)) - int(2) * &rp * h.get(k) + &rp * tail;
    let rhs = ratio(r) * ratio(k) * correction;
    Ok(CongruenceCase::new(
        "nc1",
        CaseParams::p(p).with_a(a).with_r(r).with_k(k),
        reduce_rational(&lhs, &c2)?,
        reduce_rational(&rhs, &c2)?,
    ))
}

/// `(-a)_n (a+1)_n / (1)_n^2`.
fn pochhammer_ratio(a: &BigRational, n: u64) -> BigRational {
    use crate::hyperseries::pochhammer;
    let f = pochhammer(&int(1), n);
    pochhammer(&-a.clone(), n) * pochhammer(&(a + int(1)), n) / (&f * &f)
}

/// `H_{⌊-pa⌋} ≡ H_{<a>_p} (mod p)` for the four special values.
pub fn check_nc6(p: u64, a: &BigRational) -> Result<CongruenceCase> {
    let s = special(a)?;
    let c1 = ctx(p, 1)?;
    let param = PadicParameter::new(a.clone(), &c1)?;
    Ok(CongruenceCase::new(
        "nc6",
        CaseParams::p(p).with_a(a),
        harmonic_mod(floor_neg_pa(s, p), &c1)?,
        harmonic_mod(param.residue_class(), &c1)?,
    ))
}

/// `(1/4)^{k+rp} ≡ (1/4)^{k+r} (1 + rp H_{⌊p/2⌋}) (mod p^2)`.
pub fn check_nc10(p: u64, r: u64, k: u64) -> Result<CongruenceCase> {
    let c2 = ctx(p, 2)?;
    let quarter = reduce_rational(&rat(1, 4), &c2)?;
    let lhs = quarter.pow(k + r * p);
    let h = HarmonicTable::new(p / 2);
    let rhs = quarter.pow(k + r) * reduce_rational(&(int(1) + int(r * p) * h.get(p / 2)), &c2)?;
    Ok(CongruenceCase::new(
        "nc10",
        CaseParams::p(p).with_r(r).with_k(k),
        lhs,
        rhs,
    ))
}

/// `(1/4)^{k+rp} C(2k+2rp, k+rp) ≡ (1/4)^{k+r} C(2r,r) C(2k,k) (1 + rp(2H_2k - 2H_k + H_{⌊p/2⌋}))`.
pub fn check_nc11(p: u64, r: u64, k: u64) -> Result<CongruenceCase> {
    require_k(k, half(p), "k <= (p-1)/2")?;
    let c2 = ctx(p, 2)?;
    let quarter = reduce_rational(&rat(1, 4), &c2)?;
    let h = HarmonicTable::new(p);
    let lhs = quarter.pow(k + r * p) * c2.residue(binomial(2 * k + 2 * r * p, k + r * p));
    let factor = int(central_binomial(r) * central_binomial(k))
        * (int(1) + int(r * p) * (int(2) * h.get(2 * k) - int(2) * h.get(k) + h.get(p / 2)));
    let rhs = quarter.pow(k + r) * reduce_rational(&factor, &c2)?;
    Ok(CongruenceCase::new(
        "nc11",
        CaseParams::p(p).with_r(r).with_k(k),
        lhs,
        rhs,
    ))
}

fn sign(e: u64) -> BigRational {
    if e % 2 == 0 {
        int(1)
    } else {
        int(-1)
    }
}

/// Binomial form of the Pochhammer-ratio congruence with `H_{<a>_p}`, modulo `p^2`.
pub fn check_nc12(p: u64, a: &BigRational, r: u64, k: u64) -> Result<CongruenceCase> {
    special(a)?;
    require_k(k, p - 1, "k <= p-1")?;
    let c2 = ctx(p, 2)?;
    let param = PadicParameter::new(a.clone(), &c2)?;
    let alpha = param.residue_class();
    let h = HarmonicTable::new(p);
    let n = k + r * p;
    let lhs = sign(n) * int(central_binomial(n)) * rational_binomial(&(a + int(n)), 2 * n as i64)?;
    let rp = int(r * p);
    let mut tail = BigRational::zero();
    for i in 0..k {
        tail += (-a + int(i)).recip() + (a + int(1 + i)).recip();
    }
    let rhs = sign(r + k)
        * int(central_binomial(r))
        * rational_binomial(&(a + int(r)), 2 * r as i64)?
        * int(central_binomial(k))
        * rational_binomial(&(a + int(k)), 2 * k as i64)?
        * (int(1) + int(2) * &rp * h.get(alpha) - int(2) * &rp * h.get(k) + &rp * tail);
    Ok(CongruenceCase::new(
        "nc12",
        CaseParams::p(p).with_a(a).with_r(r).with_k(k),
        reduce_rational(&lhs, &c2)?,
        reduce_rational(&rhs, &c2)?,
    ))
}

/// The bracket `2H_2k - 4H_k + 2H_α + H_{⌊p/2⌋} + Σ_{i<k} (1/(-a+i) + 1/(a+1+i))`.
fn nc14_weight(a: &BigRational, alpha: u64, k: u64, p: u64, h: &HarmonicTable) -> BigRational {
    let mut w = int(2) * h.get(2 * k) - int(4) * h.get(k) + int(2) * h.get(alpha) + h.get(p / 2);
    for i in 0..k {
        w += (-a + int(i)).recip() + (a + int(1 + i)).recip();
    }
    w
}

/// `Σ_{k<p} t(a,k) · bracket`, exact.
fn nc14_sum(a: &BigRational, alpha: u64, p: u64, h: &HarmonicTable) -> BigRational {
    (0..p)
        .map(|k| term_binomial_form(a, k) * nc14_weight(a, alpha, k, p, h))
        .sum()
}

/// Block sum against `C(2r,r)^2 C(a+r,2r) (-1/4)^r Σ t(a,k)(1 + rp · bracket)`, modulo `p^2`.
pub fn check_nc13(p: u64, a: &BigRational, r: u64) -> Result<CongruenceCase> {
    special(a)?;
    let c2 = ctx(p, 2)?;
    let param = PadicParameter::new(a.clone(), &c2)?;
    let alpha = param.residue_class();
    let h = HarmonicTable::new(2 * p);
    let lhs = block_sum_mod(a, r, &c2)?;
    let rp = int(r * p);
    let sum: BigRational = (0..p)
        .map(|k| term_binomial_form(a, k) * (int(1) + &rp * nc14_weight(a, alpha, k, p, &h)))
        .sum();
    let rhs = term_binomial_form(a, r) * sum;
    Ok(CongruenceCase::new(
        "nc13",
        CaseParams::p(p).with_a(a).with_r(r),
        lhs,
        reduce_rational(&rhs, &c2)?,
    ))
}

/// `Σ_{k<p} t(a,k) · bracket ≡ 0 (mod p)` for even `<a>_p`.
pub fn check_nc14(p: u64, a: &BigRational) -> Result<CongruenceCase> {
    special(a)?;
    let c1 = ctx(p, 1)?;
    let param = PadicParameter::new(a.clone(), &c1)?;
    require_parity(&param, Parity::Even)?;
    let h = HarmonicTable::new(2 * p);
    let lhs = nc14_sum(a, param.residue_class(), p, &h);
    Ok(CongruenceCase::new(
        "nc14",
        CaseParams::p(p).with_a(a),
        reduce_rational(&lhs, &c1)?,
        c1.zero(),
    ))
}

/// Same sum with `a` replaced by `<a>_p`, singular tail terms resolved.
fn nc15_integer_sum(alpha: u64, p: u64, h: &HarmonicTable) -> Result<BigRational> {
    let x = int(alpha);
    let mut acc = BigRational::zero();
    for k in 0..p {
        let w = central_weight(k);
        let base = rational_binomial(&(&x + int(k)), 2 * k as i64)?;
        let mut inner = if base.is_zero() {
            BigRational::zero()
        } else {
            &base
                * (int(2) * h.get(2 * k) - int(4) * h.get(k) + int(2) * h.get(alpha) + h.get(p / 2))
        };
        for i in 0..k {
            // 1/(-α+i) = -1/(α-i); 1/(α+1+i) is the factor α+(i+1)
            inner -= binomial_over_factor(&x, k, &(&x - int(i)))?;
            inner += binomial_over_factor(&x, k, &(&x + int(i + 1)))?;
        }
        acc += w * inner;
    }
    Ok(acc)
}

/// The `nc14` sum at `a` against the same sum at `<a>_p`, modulo `p`.
pub fn check_nc15(p: u64, a: &BigRational) -> Result<CongruenceCase> {
    special(a)?;
    let c1 = ctx(p, 1)?;
    let param = PadicParameter::new(a.clone(), &c1)?;
    require_parity(&param, Parity::Even)?;
    let alpha = param.residue_class();
    let h = HarmonicTable::new(2 * p);
    Ok(CongruenceCase::new(
        "nc15",
        CaseParams::p(p).with_a(a),
        reduce_rational(&nc14_sum(a, alpha, p, &h), &c1)?,
        reduce_rational(&nc15_integer_sum(alpha, p, &h)?, &c1)?,
    ))
}

/// Closed form of the non-singular part of the `nc15` sum (exact).
pub fn check_nc16(p: u64, a: &BigRational) -> Result<CongruenceCase> {
    special(a)?;
    let c1 = ctx(p, 1)?;
    let param = PadicParameter::new(a.clone(), &c1)?;
    require_parity(&param, Parity::Even)?;
    let alpha = param.residue_class();
    let x = int(alpha);
    let h = HarmonicTable::new(2 * p);
    let mut lhs = BigRational::zero();
    for k in 0..=alpha {
        let t = term_binomial_form(&x, k);
        let w = int(2) * h.get(2 * k) - int(4) * h.get(k)
            + int(2) * h.get(alpha)
            + h.get(p / 2)
            + (h.get(alpha + k) - h.get(alpha));
        lhs += t * w;
    }
    // terms with α < k < p vanish identically
    let rhs = central_ratio(alpha) * (h.get(p / 2) + h.get(alpha) / int(2) - h.get(alpha / 2));
    CongruenceCase::exact("nc16", CaseParams::p(p).with_a(a), &lhs, &rhs, &c1)
}

/// Tail part via `b = p - <a>_p`: a `≡` link followed by two `=` links.
pub fn check_nc17(p: u64, a: &BigRational) -> Result<Vec<CongruenceCase>> {
    special(a)?;
    let c1 = ctx(p, 1)?;
    let param = PadicParameter::new(a.clone(), &c1)?;
    require_parity(&param, Parity::Even)?;
    let alpha = param.residue_class();
    let b = param.complement();
    let x = int(alpha);
    let h = HarmonicTable::new(2 * p);

    let mut singular = BigRational::zero();
    let mut neg_b = BigRational::zero();
    let mut pos_b = BigRational::zero();
    for k in 0..p {
        let w = central_weight(k);
        let c_neg = rational_binomial(&(int(k) - int(b)), 2 * k as i64)?;
        let c_pos = rational_binomial(&(int(b - 1 + k)), 2 * k as i64)?;
        for i in 0..k {
            singular -= &w * binomial_over_factor(&x, k, &(&x - int(i)))?;
            let inv = int(b + i).recip();
            neg_b += &w * &c_neg * &inv;
            pos_b += &w * &c_pos * &inv;
        }
    }
    let closed = central_ratio(b - 1) * (rat(3, 2) * h.get(b - 1) - h.get((b - 1) / 2));
    let base = CaseParams::p(p).with_a(a);
    Ok(vec![
        CongruenceCase::new(
            "nc17",
            base.clone().with_link(1),
            reduce_rational(&singular, &c1)?,
            reduce_rational(&neg_b, &c1)?,
        ),
        CongruenceCase::exact("nc17", base.clone().with_link(2), &neg_b, &pos_b, &c1)?,
        CongruenceCase::exact("nc17", base.with_link(3), &pos_b, &closed, &c1)?,
    ])
}

/// Transfer of the closed form from `b - 1` to `<a>_p`, link by link.
pub fn check_nc18(p: u64, a: &BigRational) -> Result<Vec<CongruenceCase>> {
    special(a)?;
    let c1 = ctx(p, 1)?;
    let param = PadicParameter::new(a.clone(), &c1)?;
    require_parity(&param, Parity::Even)?;
    let alpha = param.residue_class();
    let b = param.complement();
    let plain = |x: &BigRational| -> BigRational { (0..p).map(|k| term_binomial_form(x, k)).sum() };
    let from_b = central_ratio(b - 1);
    let sum_b = plain(&int(b - 1));
    let sum_neg = plain(&(-int(alpha) - int(1)));
    let sum_alpha = plain(&int(alpha));
    let to_alpha = central_ratio(alpha);
    let base = CaseParams::p(p).with_a(a);
    Ok(vec![
        CongruenceCase::exact("nc18", base.clone().with_link(1), &from_b, &sum_b, &c1)?,
        CongruenceCase::new(
            "nc18",
            base.clone().with_link(2),
            reduce_rational(&sum_b, &c1)?,
            reduce_rational(&sum_neg, &c1)?,
        ),
        CongruenceCase::exact("nc18", base.clone().with_link(3), &sum_neg, &sum_alpha, &c1)?,
        CongruenceCase::exact("nc18", base.with_link(4), &sum_alpha, &to_alpha, &c1)?,
    ])
}

/// Final assembly modulo `p`: the closed form, the half-index harmonic
/// shift, the simplified form and its vanishing.
pub fn check_nc19(p: u64, a: &BigRational) -> Result<Vec<CongruenceCase>> {
    special(a)?;
    let c1 = ctx(p, 1)?;
    let param = PadicParameter::new(a.clone(), &c1)?;
    require_parity(&param, Parity::Even)?;
    let alpha = param.residue_class();
    let h = HarmonicTable::new(2 * p);
    let lhs = reduce_rational(&nc14_sum(a, alpha, p, &h), &c1)?;
    let c = central_ratio(alpha);
    let comp = p - 1 - alpha;
    let assembled = &c
        * (h.get(p / 2) + h.get(alpha) / int(2) - h.get(alpha / 2) + rat(3, 2) * h.get(comp)
            - h.get(comp / 2));
    let shifted = h.get(p / 2) + int(2) * h.get(alpha) - h.get(alpha / 2);
    let simplified = rat(3, 2) * &c * (h.get(comp) - h.get(alpha));
    let base = CaseParams::p(p).with_a(a);
    let simplified_r = reduce_rational(&simplified, &c1)?;
    Ok(vec![
        CongruenceCase::new(
            "nc19",
            base.clone().with_link(1),
            lhs.clone(),
            reduce_rational(&assembled, &c1)?,
        ),
        CongruenceCase::new(
            "nc19",
            base.clone().with_link(2),
            reduce_rational(h.get(comp / 2), &c1)?,
            reduce_rational(&shifted, &c1)?,
        ),
        CongruenceCase::new("nc19", base.clone().with_link(3), lhs, simplified_r.clone()),
        CongruenceCase::new("nc19", base.with_link(4), simplified_r, c1.zero()),
    ])
}

/// Block sum over `[rp, (r+1)p)` against the Gamma product times the `r`-th term, modulo `p^2`.
pub fn check_block_theorem2(p: u64, a: &BigRational, r: u64) -> Result<CongruenceCase> {
    special(a)?;
    let c2 = ctx(p, 2)?;
    let param = PadicParameter::new(a.clone(), &c2)?;
    require_parity(&param, Parity::Even)?;
    let lhs = block_sum_mod(a, r, &c2)?;
    let rhs = gamma_factor(a, &c2)? * reduce_rational(&term_binomial_form(a, r), &c2)?;
    Ok(CongruenceCase::new(
        "nc7",
        CaseParams::p(p).with_a(a).with_r(r),
        lhs,
        rhs,
    ))
}

/// Auxiliary congruences addressable by id.
pub const AUXILIARY_IDS: [&str; 14] = [
    "nb12", "nb14", "nb15", "nb16", "nb17", "nc10", "nc11", "nc12", "nc13", "nc15", "nc16", "nc17",
    "nc18", "nc19",
];

/// Dispatch an auxiliary check. `a` is ignored by ids that do not use it,
/// `k` by ids that sum over `k`.
pub fn check_auxiliary(
    id: &str,
    p: u64,
    a: &BigRational,
    r: u64,
    k: u64,
) -> Result<Vec<CongruenceCase>> {
    let one = |c: Result<CongruenceCase>| c.map(|c| vec![c]);
    match id {
        "nb12" => one(check_nb12(p, r, k)),
        "nb14" => one(check_nb14(p, a, r, k)),
        "nb15" => one(check_nb15(p, a, r)),
        "nb16" => one(check_nb16(p, a)),
        "nb17" => one(check_nb17(p, a, r)),
        "nc10" => one(check_nc10(p, r, k)),
        "nc11" => one(check_nc11(p, r, k)),
        "nc12" => one(check_nc12(p, a, r, k)),
        "nc13" => one(check_nc13(p, a, r)),
        "nc15" => one(check_nc15(p, a)),
        "nc16" => one(check_nc16(p, a)),
        "nc17" => check_nc17(p, a),
        "nc18" => check_nc18(p, a),
        "nc19" => check_nc19(p, a),
        other => Err(Error::UnknownCheck(other.to_string())),
    }
}

/// Eisenstein relations modulo `p` for base `a`: `q(ab) ≡ q(a) + q(b)` for
/// `2 <= b <= b_max` and `q(a^r) ≡ r q(a)` for `1 <= r <= r_max`.
///
/// Reports the first failing relation, or the last one checked.
pub fn check_eisenstein(p: u64, a: u64, b_max: u64, r_max: u32) -> Result<CongruenceCase> {
    if a % p == 0 {
        return Err(Error::NotCoprime {
            value: a.to_string(),
            p,
        });
    }
    let c1 = ctx(p, 1)?;
    let q = |x: &BigInt| fermat_quotient(&BigRational::from_integer(x.clone()), p);
    let ab = BigInt::from(a);
    let qa = q(&ab)?;
    let params = CaseParams::p(p).with_a(&int(a));
    let mut last = None;
    for b in 2..=b_max {
        if b % p == 0 {
            continue;
        }
        let bb = BigInt::from(b);
        let case = CongruenceCase::new("l1", params.clone(), q(&(&ab * &bb))?, &qa + &q(&bb)?)
            .with_note(format!("q({a}*{b}) vs q({a}) + q({b})"));
        if !case.pass {
            return Ok(case);
        }
        last = Some(case);
    }
    for r in 1..=r_max {
        let case = CongruenceCase::new(
            "l1",
            params.clone(),
            q(&num_traits::pow(ab.clone(), r as usize))?,
            c1.residue(r) * &qa,
        )
        .with_note(format!("q({a}^{r}) vs {r} q({a})"));
        if !case.pass {
            return Ok(case);
        }
        last = Some(case);
    }
    last.ok_or_else(|| Error::Precondition("no Eisenstein relation in range".into()))
        .map(|c| c.with_note(format!("all relations hold for b <= {b_max}, r <= {r_max}")))
}

/// `H_{⌊p/2⌋} ≡ -2 q_p(2) (mod p)`.
pub fn check_lehmer(p: u64) -> Result<CongruenceCase> {
    let c1 = ctx(p, 1)?;
    let lhs = harmonic_mod(p / 2, &c1)?;
    let rhs = c1.residue(-2) * fermat_quotient(&int(2), p)?;
    Ok(CongruenceCase::new("l2", CaseParams::p(p), lhs, rhs))
}

/// `H_{p-1-k} ≡ H_k (mod p)`.
pub fn check_reflection(p: u64, k: u64) -> Result<CongruenceCase> {
    require_k(k, p - 1, "k <= p-1")?;
    let c1 = ctx(p, 1)?;
    Ok(CongruenceCase::new(
        "reflection",
        CaseParams::p(p).with_k(k),
        harmonic_mod(p - 1 - k, &c1)?,
        harmonic_mod(k, &c1)?,
    ))
}

/// `C(2k,k)^2 ≡ 0 (mod p^2)` for `(p-1)/2 < k <= p-1`.
pub fn check_central_square(p: u64, k: u64) -> Result<CongruenceCase> {
    if k <= half(p) || k > p - 1 {
        return Err(Error::Precondition(format!(
            "k = {k} outside ((p-1)/2, p-1]"
        )));
    }
    let c2 = ctx(p, 2)?;
    let c = central_binomial(k);
    Ok(CongruenceCase::new(
        "c2k",
        CaseParams::p(p).with_k(k),
        c2.residue(&c * &c),
        c2.zero(),
    ))
}

/// Checks over `k`: the valid range for a given id and prime.
pub fn k_range(id: &str, p: u64) -> std::ops::RangeInclusive<u64> {
    match id {
        "nx" | "nb12" | "nb14" | "nc11" => 0..=half(p),
        "nc1" | "nc12" | "nc10" | "reflection" => 0..=p - 1,
        "c2k" => half(p) + 1..=p - 1,
        _ => 0..=0,
    }
}

/// Convenience for tests and the grid: `Σ t(a,k)` over `k < n` as a residue.
pub fn residue_of(q: &BigRational, p: u64, k: u32) -> Result<Residue> {
    reduce_rational(q, &ctx(p, k)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::primes_between;
    use crate::hyperseries::block_sum_exact;

    fn special_values() -> Vec<BigRational> {
        SpecialValue::ALL.iter().map(|s| s.value()).collect()
    }

    fn small_grid() -> Vec<BigRational> {
        let mut v = Vec::new();
        for d in 1..=6i64 {
            for m in -6..=6i64 {
                if num_integer::gcd(m, d) == 1 {
                    v.push(rat(m, d));
                }
            }
        }
        v
    }

    fn admissible(a: &BigRational, p: u64) -> bool {
        !(a.denom() % BigInt::from(p)).is_zero()
    }

    #[test]
    fn removable_singularity() {
        // C(2+3, 6) has factor (2-2) = 0; dropping it leaves 5·4·3·2·1 / 6! = 1/6
        let x = int(2);
        assert_eq!(binomial_over_factor(&x, 3, &int(0)).unwrap(), rat(1, 6));
        // non-singular divisor matches plain division
        let y = rat(-1, 3);
        let plain = rational_binomial(&(&y + int(3)), 6).unwrap() / (&y + int(2));
        assert_eq!(binomial_over_factor(&y, 3, &(&y + int(2))).unwrap(), plain);
        assert!(binomial_over_factor(&y, 3, &int(17)).is_err());
    }

    #[test]
    fn nx_examples() {
        assert!(check_nx(5, 0, 2).unwrap().pass);
        let c = check_nx(5, 1, 1).unwrap();
        assert_eq!(c.lhs.value(), &BigInt::from(924 % 25));
        assert_eq!(c.rhs.value(), &BigInt::from(24));
        assert!(c.pass);
        assert!(check_nx(7, 2, 3).unwrap().pass);
        assert!(check_nx(7, 2, 4).is_err());
    }

    #[test]
    fn nb7_examples() {
        for case in check_nb7(5, &rat(-1, 3)).unwrap() {
            assert!(case.pass, "{case}");
        }
        for case in check_nb7(7, &rat(-1, 2)).unwrap() {
            assert!(case.pass, "{case}");
        }
        assert!(matches!(
            check_nb7(7, &rat(-1, 3)),
            Err(Error::EvenResidueClass { residue: 2 })
        ));
    }

    #[test]
    fn block_theorem1_examples() {
        assert!(check_block_theorem1(5, &rat(-1, 3), 0).unwrap().pass);
        assert!(check_block_theorem1(5, &rat(-1, 3), 1).unwrap().pass);
        assert_eq!(crate::padic::least_residue(&rat(3, 5), 11).unwrap(), 5);
        assert!(check_block_theorem1(11, &rat(3, 5), 2).unwrap().pass);
    }

    #[test]
    fn nc1_examples() {
        assert!(check_nc1(7, &rat(-1, 2), 0, 3).unwrap().pass);
        assert!(check_nc1(7, &rat(-1, 3), 1, 2).unwrap().pass);
        assert!(check_nc1(11, &rat(-1, 6), 2, 7).unwrap().pass);
        assert!(matches!(
            check_nc1(11, &rat(1, 6), 2, 7),
            Err(Error::NotSpecialValue(_))
        ));
    }

    #[test]
    fn nc6_examples() {
        let c = check_nc6(7, &rat(-1, 3)).unwrap();
        assert!(c.pass);
        let c = check_nc6(5, &rat(-1, 3)).unwrap();
        // H_1 = 1 and H_3 = 11/6 ≡ 1 (mod 5)
        assert_eq!(c.lhs.value(), &BigInt::from(1));
        assert!(c.pass);
        assert!(check_nc6(11, &rat(-1, 6)).unwrap().pass);
    }

    #[test]
    fn nc14_examples() {
        assert!(check_nc14(7, &rat(-1, 3)).unwrap().pass);
        assert!(check_nc14(13, &rat(-1, 2)).unwrap().pass);
        assert!(matches!(
            check_nc14(11, &rat(-1, 2)),
            Err(Error::OddResidueClass { residue: 5 })
        ));
    }

    #[test]
    fn block_theorem2_examples() {
        assert!(check_block_theorem2(7, &rat(-1, 3), 0).unwrap().pass);
        assert!(check_block_theorem2(7, &rat(-1, 3), 1).unwrap().pass);
        assert_eq!(crate::padic::least_residue(&rat(-1, 4), 13).unwrap(), 3);
        assert!(check_block_theorem2(13, &rat(-1, 4), 2).is_err());
        assert_eq!(crate::padic::least_residue(&rat(-1, 4), 17).unwrap(), 4);
        assert!(check_block_theorem2(17, &rat(-1, 4), 2).unwrap().pass);
    }

    #[test]
    fn auxiliary_examples() {
        let c = check_auxiliary("nb16", 5, &rat(-1, 3), 0, 0).unwrap();
        assert!(c[0].pass && c[0].lhs.is_zero());
        let c = check_nc10(7, 1, 0).unwrap();
        assert!(c.pass);
        for c in check_nc18(7, &rat(-1, 3)).unwrap() {
            assert!(c.pass, "{c}");
        }
        assert!(matches!(
            check_auxiliary("nb99", 5, &rat(-1, 3), 0, 0),
            Err(Error::UnknownCheck(_))
        ));
    }

    #[test]
    fn harmonic_and_quotient_checks() {
        for p in primes_between(5, 31) {
            assert!(check_lehmer(p).unwrap().pass);
            for a in 2..=30 {
                if a % p == 0 {
                    continue;
                }
                assert!(check_eisenstein(p, a, 30, 5).unwrap().pass);
            }
            for k in k_range("reflection", p) {
                assert!(check_reflection(p, k).unwrap().pass);
            }
            for k in k_range("c2k", p) {
                assert!(check_central_square(p, k).unwrap().pass);
            }
        }
    }

    fn assert_all(cases: Result<Vec<CongruenceCase>>, what: &str) {
        match cases {
            Ok(cases) => {
                for c in cases {
                    assert!(c.pass, "{what}: {c} ({:?})", c.params);
                }
            }
            Err(Error::EvenResidueClass { .. }) | Err(Error::OddResidueClass { .. }) => {}
            Err(e) => panic!("{what}: {e}"),
        }
    }

    #[test]
    fn full_grid_small_primes() {
        for p in primes_between(5, 19) {
            for r in 0..=3u64 {
                for id in ["nx", "nb12", "nc10", "nc11"] {
                    for k in k_range(id, p) {
                        let c = match id {
                            "nx" => check_nx(p, r, k),
                            _ => check_auxiliary(id, p, &int(0), r, k).map(|mut v| v.remove(0)),
                        };
                        assert_all(c.map(|c| vec![c]), id);
                    }
                }
                for a in small_grid().iter().filter(|a| admissible(a, p)) {
                    assert_all(check_block_theorem1(p, a, r).map(|c| vec![c]), "nb10");
                    assert_all(check_nb15(p, a, r).map(|c| vec![c]), "nb15");
                    assert_all(check_nb17(p, a, r).map(|c| vec![c]), "nb17");
                    for k in k_range("nb14", p) {
                        assert_all(check_nb14(p, a, r, k).map(|c| vec![c]), "nb14");
                    }
                }
                for a in special_values() {
                    assert_all(check_block_theorem2(p, &a, r).map(|c| vec![c]), "nc7");
                    assert_all(check_nc13(p, &a, r).map(|c| vec![c]), "nc13");
                    for k in k_range("nc1", p) {
                        assert_all(check_nc1(p, &a, r, k).map(|c| vec![c]), "nc1");
                        assert_all(check_nc12(p, &a, r, k).map(|c| vec![c]), "nc12");
                    }
                }
            }
            for a in small_grid().iter().filter(|a| admissible(a, p)) {
                assert_all(check_nb7(p, a), "nb7");
                assert_all(check_nb16(p, a).map(|c| vec![c]), "nb16");
            }
            for a in special_values() {
                assert_all(check_nc6(p, &a).map(|c| vec![c]), "nc6");
                assert_all(check_nc14(p, &a).map(|c| vec![c]), "nc14");
                for id in ["nc15", "nc16", "nc17", "nc18", "nc19"] {
                    assert_all(check_auxiliary(id, p, &a, 0, 0), id);
                }
            }
        }
    }

    #[test]
    fn perturbation_flips_every_case() {
        let cases = [
            check_nx(7, 1, 2).unwrap(),
            check_nc16(13, &rat(-1, 2)).unwrap(),
            check_block_theorem1(5, &rat(-1, 3), 1).unwrap(),
            check_lehmer(11).unwrap(),
        ];
        for c in cases {
            assert!(c.pass);
            assert!(!c.perturbed().pass, "{c}");
        }
    }

    #[test]
    fn block_sums_exact_and_modular_agree() {
        for p in [5u64, 7, 11] {
            let c2 = ctx(p, 2).unwrap();
            for a in small_grid().iter().filter(|a| admissible(a, p)) {
                for r in 0..=3 {
                    let exact = reduce_rational(&block_sum_exact(a, r, p), &c2).unwrap();
                    assert_eq!(exact, block_sum_mod(a, r, &c2).unwrap());
                }
            }
        }
    }
}
