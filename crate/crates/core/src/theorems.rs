//! The main supercongruences for `F(a; N) = Σ_{k<N} (1/2)_k (-a)_k (a+1)_k / k!^3`
//! modulo `p^2`.
//!
//! * `na2`: `F(a; p)` is `0` for odd `<a>_p` and `G(a)` for even `<a>_p`, where
//!   `G(a) = (-1)^{(p+1)/2} Γ_p(-a/2)^2 Γ_p((a+1)/2)^2`.
//! * `thm1`: `F(a; np) ≡ 0` for odd `<a>_p`.
//! * `thm2`: `F(a; np) ≡ G(a) F(a; n)` for the four special values with even `<a>_p`.
//! * `corollary`: `F(a; p^r) ≡ G(a)^r`.

use std::fmt;

use num_traits::Zero;
use serde::Serialize;

use crate::arith::{rat, BigRational, PadicContext, Residue};
use crate::congruences::{check_block_theorem1, CaseParams};
use crate::error::{Error, Result};
use crate::hyperseries::{truncated_3f2_mod, truncated_3f2_mod_prefixes};
use crate::padic::{gamma_factor, PadicParameter, Parity, SpecialValue};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Theorem {
    Na2,
    Thm1,
    Thm2,
    Corollary,
}

impl Theorem {
    pub const ALL: [Theorem; 4] = [
        Theorem::Na2,
        Theorem::Thm1,
        Theorem::Thm2,
        Theorem::Corollary,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Theorem::Na2 => "na2",
            Theorem::Thm1 => "thm1",
            Theorem::Thm2 => "thm2",
            Theorem::Corollary => "corollary",
        }
    }
}

impl fmt::Display for Theorem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

/// One evaluated theorem instance. `n` holds `n` for `thm1`/`thm2` and `r`
/// for `corollary`; it is `1` for `na2`.
#[derive(Debug, Clone, PartialEq)]
pub struct TheoremCase {
    pub theorem: Theorem,
    pub p: u64,
    pub a: BigRational,
    pub n: u64,
    pub branch: Parity,
    pub lhs: Residue,
    pub rhs: Residue,
    pub pass: bool,
}

impl TheoremCase {
    fn new(theorem: Theorem, param: &PadicParameter, n: u64, lhs: Residue, rhs: Residue) -> Self {
        TheoremCase {
            theorem,
            p: param.p(),
            a: param.a().clone(),
            n,
            branch: param.parity(),
            pass: lhs == rhs,
            lhs,
            rhs,
        }
    }

    /// Negative control: the same case with `rhs + 1`.
    pub fn perturbed(&self) -> Self {
        let mut c = self.clone();
        c.rhs = &self.rhs + &self.rhs.ctx().one();
        c.pass = c.lhs == c.rhs;
        c
    }
}

impl fmt::Display for TheoremCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} p={} a={} n={} ({}) lhs={} rhs={} {}",
            self.theorem,
            self.p,
            self.a,
            self.n,
            self.branch,
            self.lhs,
            self.rhs,
            if self.pass { "pass" } else { "FAIL" }
        )
    }
}

fn setup(p: u64, a: &BigRational) -> Result<(PadicContext, PadicParameter)> {
    let ctx = PadicContext::new(p, 2)?;
    let param = PadicParameter::new(a.clone(), &ctx)?;
    Ok((ctx, param))
}

fn require_n(n: u64) -> Result<()> {
    if n == 0 {
        return Err(Error::Precondition("n must be positive".into()));
    }
    Ok(())
}

fn require_even_special(a: &BigRational, param: &PadicParameter) -> Result<()> {
    SpecialValue::from_rational(a)?;
    if param.parity() == Parity::Odd {
        return Err(Error::OddResidueClass {
            residue: param.residue_class(),
        });
    }
    Ok(())
}

/// `F(a; p)` against `0` (odd `<a>_p`) or `G(a)` (even `<a>_p`).
pub fn verify_na2(p: u64, a: &BigRational) -> Result<TheoremCase> {
    let (ctx, param) = setup(p, a)?;
    let lhs = truncated_3f2_mod(a, p, &ctx)?;
    let rhs = match param.parity() {
        Parity::Odd => ctx.zero(),
        Parity::Even => gamma_factor(a, &ctx)?,
    };
    Ok(TheoremCase::new(Theorem::Na2, &param, 1, lhs, rhs))
}

/// `F(a; np) ≡ 0 (mod p^2)` for odd `<a>_p`.
pub fn verify_theorem1(p: u64, a: &BigRational, n: u64) -> Result<TheoremCase> {
    require_n(n)?;
    let (ctx, param) = setup(p, a)?;
    if param.parity() == Parity::Even {
        return Err(Error::EvenResidueClass {
            residue: param.residue_class(),
        });
    }
    let lhs = truncated_3f2_mod(a, n * p, &ctx)?;
    Ok(TheoremCase::new(Theorem::Thm1, &param, n, lhs, ctx.zero()))
}

/// `F(a; np)` recomposed from block sums `r = 0..n-1`; must equal the direct sum.
pub fn theorem1_by_blocks(p: u64, a: &BigRational, n: u64) -> Result<Residue> {
    require_n(n)?;
    let ctx = PadicContext::new(p, 2)?;
    let mut acc = ctx.zero();
    for r in 0..n {
        acc = acc + check_block_theorem1(p, a, r)?.lhs;
    }
    Ok(acc)
}

/// `F(a; np) ≡ G(a) F(a; n) (mod p^2)` for the special values with even `<a>_p`.
pub fn verify_theorem2(p: u64, a: &BigRational, n: u64) -> Result<TheoremCase> {
    require_n(n)?;
    let (ctx, param) = setup(p, a)?;
    require_even_special(a, &param)?;
    theorem2_relation(&ctx, &param, n)
}

/// The `thm2` relation without the special-value precondition.
fn theorem2_relation(ctx: &PadicContext, param: &PadicParameter, n: u64) -> Result<TheoremCase> {
    let a = param.a();
    let sums = truncated_3f2_mod_prefixes(a, &[n, n * ctx.p()], ctx)?;
    let rhs = gamma_factor(a, ctx)? * &sums[0];
    Ok(TheoremCase::new(
        Theorem::Thm2,
        param,
        n,
        sums[1].clone(),
        rhs,
    ))
}

/// `F(a; p^r) ≡ G(a)^r (mod p^2)`.
pub fn verify_corollary(p: u64, a: &BigRational, r: u32) -> Result<TheoremCase> {
    if r == 0 {
        return Err(Error::Precondition("r must be positive".into()));
    }
    let (ctx, param) = setup(p, a)?;
    require_even_special(a, &param)?;
    let lhs = truncated_3f2_mod(a, p.pow(r), &ctx)?;
    let rhs = gamma_factor(a, &ctx)?.pow(r as u64);
    Ok(TheoremCase::new(
        Theorem::Corollary,
        &param,
        r as u64,
        lhs,
        rhs,
    ))
}

/// The corollary reached by chaining `thm2` at `n = 1, p, ..., p^{r-1}`.
///
/// Returns the chained right-hand side `G^r F(a; 1)`. Fails if any link of
/// the chain does not hold.
pub fn corollary_by_induction(p: u64, a: &BigRational, r: u32) -> Result<Residue> {
    let (ctx, param) = setup(p, a)?;
    require_even_special(a, &param)?;
    let g = gamma_factor(a, &ctx)?;
    let mut acc = truncated_3f2_mod(a, 1, &ctx)?;
    for j in 0..r {
        let step = theorem2_relation(&ctx, &param, p.pow(j))?;
        if !step.pass {
            return Err(Error::Precondition(format!(
                "induction step failed: {step}"
            )));
        }
        acc = &g * &acc;
    }
    Ok(acc)
}

/// The default parameter grid `{m/d : 1 <= d <= 6, -6 <= m <= 6, gcd(m, d) = 1}`,
/// restricted to values with `p ∤ d`.
pub fn default_grid(p: u64) -> Vec<BigRational> {
    default_grid_all()
        .into_iter()
        .filter(|a| !(a.denom() % p).is_zero())
        .collect()
}

/// The default grid before the `p ∤ d` filter, in ascending numeric order.
pub fn default_grid_all() -> Vec<BigRational> {
    let mut v = Vec::new();
    for d in 1..=6i64 {
        for m in -6..=6i64 {
            if num_integer::gcd(m, d) == 1 {
                v.push(rat(m, d));
            }
        }
    }
    v.sort();
    v
}

/// A parameter set where the `thm2` relation fails: `a` outside the special
/// set with even `<a>_p`.
#[derive(Debug, Clone, PartialEq)]
pub struct SharpnessWitness {
    pub case: TheoremCase,
}

/// Searches the given primes, `2 <= n <= n_max` and non-special `a` from the
/// default grid for a violation of the `thm2` relation. Returns the first
/// witness in (p, a, n) order.
pub fn search_sharpness_witness(primes: &[u64], n_max: u64) -> Result<Option<SharpnessWitness>> {
    for &p in primes {
        let ctx = PadicContext::new(p, 2)?;
        for a in default_grid(p) {
            if SpecialValue::from_rational(&a).is_ok() {
                continue;
            }
            let param = PadicParameter::new(a.clone(), &ctx)?;
            if param.parity() != Parity::Even {
                continue;
            }
            for n in 2..=n_max {
                let case = theorem2_relation(&ctx, &param, n)?;
                if !case.pass {
                    return Ok(Some(SharpnessWitness { case }));
                }
            }
        }
    }
    Ok(None)
}

/// `G(a)` for display and for callers that want the constant directly.
pub fn gamma_constant(p: u64, a: &BigRational) -> Result<Residue> {
    gamma_factor(a, &PadicContext::new(p, 2)?)
}

/// Parameters of a theorem case in the shape shared with congruence checks.
pub fn case_params(case: &TheoremCase) -> CaseParams {
    let mut params = CaseParams::p(case.p).with_a(&case.a);
    match case.theorem {
        Theorem::Corollary => params.r = Some(case.n),
        _ => params.n = Some(case.n),
    }
    params
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, primes_between, reduce_rational};
    use crate::hyperseries::truncated_3f2;
    use crate::padic::gamma_p;

    fn ctx(p: u64) -> PadicContext {
        PadicContext::new(p, 2).unwrap()
    }

    // G(a) built from Γ_p values and the sign read off p mod 4.
    fn g_oracle(a: &BigRational, p: u64) -> Residue {
        let c = ctx(p);
        let x = gamma_p(&(-a / int(2)), &c).unwrap();
        let y = gamma_p(&((a + int(1)) / int(2)), &c).unwrap();
        let sign = if p % 4 == 1 { c.residue(-1) } else { c.one() };
        sign * x.pow(2) * y.pow(2)
    }

    #[test]
    fn na2_examples() {
        let c = verify_na2(5, &rat(-1, 3)).unwrap();
        assert_eq!(c.branch, Parity::Odd);
        assert!(c.pass && c.lhs.is_zero());

        let c = verify_na2(7, &rat(-1, 3)).unwrap();
        assert_eq!(c.branch, Parity::Even);
        assert!(c.pass);
        assert_eq!(c.rhs, g_oracle(&rat(-1, 3), 7));

        let c = verify_na2(5, &int(2)).unwrap();
        assert_eq!(c.branch, Parity::Even);
        let exact = reduce_rational(&truncated_3f2(&int(2), 5), &ctx(5)).unwrap();
        assert_eq!(c.lhs, exact);
        assert_eq!(c.rhs, g_oracle(&int(2), 5));
        assert!(c.pass);

        let c = verify_na2(7, &rat(-1, 2)).unwrap();
        assert!(c.pass && c.lhs.is_zero());

        assert!(matches!(
            verify_na2(5, &rat(1, 5)),
            Err(Error::DenominatorDivisibleByP { .. })
        ));
    }

    #[test]
    fn theorem1_examples() {
        assert!(verify_theorem1(5, &rat(-1, 3), 1).unwrap().pass);
        assert!(verify_theorem1(5, &rat(-1, 3), 3).unwrap().pass);
        // <7/4>_11 = 10 is even
        assert!(matches!(
            verify_theorem1(11, &rat(7, 4), 2),
            Err(Error::EvenResidueClass { residue: 10 })
        ));
    }

    #[test]
    fn theorem2_examples() {
        assert!(verify_theorem2(7, &rat(-1, 3), 1).unwrap().pass);
        assert!(verify_theorem2(7, &rat(-1, 3), 4).unwrap().pass);
        assert!(verify_theorem2(13, &rat(-1, 2), 2).unwrap().pass);
        assert!(matches!(
            verify_theorem2(5, &rat(-1, 3), 2),
            Err(Error::OddResidueClass { residue: 3 })
        ));
        assert!(matches!(
            verify_theorem2(7, &int(2), 2),
            Err(Error::NotSpecialValue(_))
        ));
    }

    #[test]
    fn corollary_examples() {
        let r1 = verify_corollary(7, &rat(-1, 3), 1).unwrap();
        let na2 = verify_na2(7, &rat(-1, 3)).unwrap();
        assert!(r1.pass);
        assert_eq!((r1.lhs.clone(), r1.rhs.clone()), (na2.lhs, na2.rhs));
        assert!(verify_corollary(7, &rat(-1, 3), 2).unwrap().pass);
        assert!(verify_corollary(17, &rat(-1, 4), 2).unwrap().pass);
    }

    #[test]
    fn theorem2_at_one_matches_na2() {
        for p in primes_between(5, 60) {
            for s in SpecialValue::ALL {
                let a = s.value();
                if let Ok(t) = verify_theorem2(p, &a, 1) {
                    let n = verify_na2(p, &a).unwrap();
                    assert_eq!((t.lhs, t.rhs), (n.lhs, n.rhs));
                }
            }
        }
    }

    #[test]
    fn block_recomposition_matches_direct_sum() {
        for p in [5u64, 7, 11, 13] {
            for a in default_grid(p) {
                for n in 1..=3 {
                    if let Ok(t) = verify_theorem1(p, &a, n) {
                        assert_eq!(t.lhs, theorem1_by_blocks(p, &a, n).unwrap());
                    }
                }
            }
        }
    }

    #[test]
    fn corollary_routes_agree() {
        for p in primes_between(5, 31) {
            for s in SpecialValue::ALL {
                let a = s.value();
                for r in 1..=2 {
                    if let Ok(c) = verify_corollary(p, &a, r) {
                        assert!(c.pass, "{c}");
                        assert_eq!(corollary_by_induction(p, &a, r).unwrap(), c.rhs);
                    }
                }
            }
        }
    }

    #[test]
    fn sharpness_witness_exists() {
        let w = search_sharpness_witness(&primes_between(5, 31), 4)
            .unwrap()
            .expect("witness");
        let c = &w.case;
        assert!(!c.pass);
        assert_eq!(c.branch, Parity::Even);
        assert!(SpecialValue::from_rational(&c.a).is_err());
        // confirm through exact sums
        let cx = ctx(c.p);
        let big = reduce_rational(&truncated_3f2(&c.a, c.n * c.p), &cx).unwrap();
        let small = reduce_rational(&truncated_3f2(&c.a, c.n), &cx).unwrap();
        assert_ne!(big, g_oracle(&c.a, c.p) * small);
    }

    #[test]
    fn grid_is_the_declared_set() {
        let all = default_grid_all();
        assert!(all.contains(&rat(-5, 6)) && all.contains(&int(0)));
        assert!(!all.contains(&rat(7, 2)));
        assert_eq!(all.len(), 13 + 6 + 8 + 6 + 10 + 4);
        assert_eq!(
            default_grid(5).len(),
            all.len() - all.iter().filter(|a| a.denom() == &5.into()).count()
        );
        assert!(all.windows(2).all(|w| w[0] < w[1]));
    }
}
