//! Built-in corpus of small worked examples, run by `supercong self-test`.

use num_traits::Zero;

use crate::arith::{
    harmonic_exact, int, mod_inverse, rat, rational_binomial, reduce_rational, BigInt, PadicContext,
};
use crate::congruences as cg;
use crate::error::{Error, Result};
use crate::hyperseries::{pochhammer, term_binomial_form, truncated_3f2, truncated_3f2_mod};
use crate::identities::{
    check_even_identities, check_odd_identities, recurrence_residual, weighted_sum, Sequence,
    Weight,
};
use crate::padic::{
    fermat_quotient, floor_neg_pa, gamma_p, harmonic_mod, least_residue, SpecialValue,
};
use crate::theorems as th;

/// One example: a name and a predicate.
pub struct Example {
    pub name: &'static str,
    pub run: fn() -> Result<bool>,
}

/// Outcome of one example.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExampleResult {
    pub name: &'static str,
    pub pass: bool,
    pub detail: Option<String>,
}

fn ctx(p: u64, k: u32) -> PadicContext {
    PadicContext::new(p, k).expect("valid context")
}

fn is<T: PartialEq>(x: T, y: T) -> Result<bool> {
    Ok(x == y)
}

macro_rules! ex {
    ($name:expr, $body:expr) => {
        Example {
            name: $name,
            run: || $body,
        }
    };
}

pub fn corpus() -> Vec<Example> {
    vec![
        ex!(
            "mod_inverse 2 mod 5",
            is(
                mod_inverse(&BigInt::from(2), &ctx(5, 1))?.value().clone(),
                3.into()
            )
        ),
        ex!(
            "mod_inverse 3 mod 25",
            is(
                mod_inverse(&BigInt::from(3), &ctx(5, 2))?.value().clone(),
                17.into()
            )
        ),
        ex!(
            "mod_inverse 5 mod 25 rejected",
            Ok(mod_inverse(&BigInt::from(5), &ctx(5, 2)).is_err())
        ),
        ex!(
            "reduce 3/2 mod 5",
            is(
                reduce_rational(&rat(3, 2), &ctx(5, 1))?.value().clone(),
                4.into()
            )
        ),
        ex!(
            "reduce 1/5 mod 25 rejected",
            Ok(reduce_rational(&rat(1, 5), &ctx(5, 2)).is_err())
        ),
        ex!(
            "binomial(2/3, 2)",
            is(rational_binomial(&rat(2, 3), 2)?, rat(-1, 9))
        ),
        ex!(
            "binomial(5, 2)",
            is(rational_binomial(&int(5), 2)?, int(10))
        ),
        ex!("H_4", is(harmonic_exact(4), rat(25, 12))),
        ex!(
            "<-1/3>_5 and <-1/3>_7",
            Ok(least_residue(&rat(-1, 3), 5)? == 3 && least_residue(&rat(-1, 3), 7)? == 2)
        ),
        ex!(
            "q_5(2) and q_7(2)",
            Ok(fermat_quotient(&int(2), 5)?.value() == &BigInt::from(3)
                && fermat_quotient(&int(2), 7)?.value() == &BigInt::from(2))
        ),
        ex!(
            "H_2 mod 5",
            is(harmonic_mod(2, &ctx(5, 1))?.value().clone(), 4.into())
        ),
        ex!(
            "H_5 mod 5 rejected",
            Ok(harmonic_mod(5, &ctx(5, 1)).is_err())
        ),
        ex!(
            "Gamma_5(1), Gamma_5(3), Gamma_5(6)",
            Ok(gamma_p(&int(1), &ctx(5, 2))?.value() == &BigInt::from(24)
                && gamma_p(&int(3), &ctx(5, 1))?.value() == &BigInt::from(3)
                && gamma_p(&int(6), &ctx(5, 2))?.value() == &BigInt::from(24))
        ),
        ex!(
            "floor(-pa)",
            Ok(floor_neg_pa(SpecialValue::MinusThird, 7) == 2
                && floor_neg_pa(SpecialValue::MinusHalf, 5) == 2
                && floor_neg_pa(SpecialValue::MinusSixth, 11) == 1)
        ),
        ex!("(1/2)_3", is(pochhammer(&rat(1, 2), 3), rat(15, 8))),
        ex!("(-2)_4", is(pochhammer(&int(-2), 4), int(0))),
        ex!(
            "F(1;2) and F(3;4)",
            Ok(truncated_3f2(&int(1), 2).is_zero() && truncated_3f2(&int(3), 4).is_zero())
        ),
        ex!(
            "F(-1/3;5) mod 25",
            Ok(truncated_3f2_mod(&rat(-1, 3), 5, &ctx(5, 2))?.is_zero())
        ),
        ex!(
            "t(-1/3, 1)",
            is(term_binomial_form(&rat(-1, 3), 1), rat(1, 9))
        ),
        ex!(
            "weighted sums at n = 2, 3",
            Ok(weighted_sum(3, Weight::One).is_zero()
                && weighted_sum(2, Weight::One) == rat(1, 4)
                && weighted_sum(2, Weight::Hk) == rat(3, 8)
                && weighted_sum(2, Weight::H2k) == rat(3, 16))
        ),
        ex!(
            "odd identities n = 1, 3, 99",
            Ok([1, 3, 99]
                .iter()
                .all(|&n| check_odd_identities(n).is_ok_and(|r| r.all_hold())))
        ),
        ex!(
            "even identities n = 2, 4",
            Ok([2, 4]
                .iter()
                .all(|&n| check_even_identities(n).is_ok_and(|r| r.all_hold())))
        ),
        ex!(
            "recurrences at n = 1",
            Ok(recurrence_residual(Sequence::A, 1)?.satisfied()
                && recurrence_residual(Sequence::B, 1)?.satisfied())
        ),
        ex!(
            "nx (5,1,1): 924 = 24 mod 25",
            Ok(cg::check_nx(5, 1, 1)?.pass)
        ),
        ex!("nx (7,2,3)", Ok(cg::check_nx(7, 2, 3)?.pass)),
        ex!(
            "nb7 (5,-1/3)",
            Ok(cg::check_nb7(5, &rat(-1, 3))?.iter().all(|c| c.pass))
        ),
        ex!(
            "nb7 (7,-1/3) rejected",
            Ok(matches!(
                cg::check_nb7(7, &rat(-1, 3)),
                Err(Error::EvenResidueClass { .. })
            ))
        ),
        ex!(
            "nb10 (11,3/5,2)",
            Ok(cg::check_block_theorem1(11, &rat(3, 5), 2)?.pass)
        ),
        ex!(
            "nc1 (11,-1/6,2,7)",
            Ok(cg::check_nc1(11, &rat(-1, 6), 2, 7)?.pass)
        ),
        ex!("nc6 (5,-1/3)", Ok(cg::check_nc6(5, &rat(-1, 3))?.pass)),
        ex!("nc14 (13,-1/2)", Ok(cg::check_nc14(13, &rat(-1, 2))?.pass)),
        ex!(
            "nc7 (17,-1/4,2)",
            Ok(cg::check_block_theorem2(17, &rat(-1, 4), 2)?.pass)
        ),
        ex!("nb16 (5,-1/3)", Ok(cg::check_nb16(5, &rat(-1, 3))?.pass)),
        ex!("nc10 (7,1,0)", Ok(cg::check_nc10(7, 1, 0)?.pass)),
        ex!(
            "nc18 (7,-1/3)",
            Ok(cg::check_nc18(7, &rat(-1, 3))?.iter().all(|c| c.pass))
        ),
        ex!(
            "na2 (5,-1/3), (7,-1/3), (5,2)",
            Ok(th::verify_na2(5, &rat(-1, 3))?.pass
                && th::verify_na2(7, &rat(-1, 3))?.pass
                && th::verify_na2(5, &int(2))?.pass)
        ),
        ex!(
            "thm1 (5,-1/3,3)",
            Ok(th::verify_theorem1(5, &rat(-1, 3), 3)?.pass)
        ),
        ex!(
            "thm2 (7,-1/3,4), (13,-1/2,2)",
            Ok(th::verify_theorem2(7, &rat(-1, 3), 4)?.pass
                && th::verify_theorem2(13, &rat(-1, 2), 2)?.pass)
        ),
        ex!(
            "corollary (7,-1/3,2), (17,-1/4,2)",
            Ok(th::verify_corollary(7, &rat(-1, 3), 2)?.pass
                && th::verify_corollary(17, &rat(-1, 4), 2)?.pass)
        ),
    ]
}

/// Runs the corpus. With `perturb`, every verdict is inverted, so a healthy
/// corpus fails entirely.
pub fn run(perturb: bool) -> Vec<ExampleResult> {
    corpus()
        .into_iter()
        .map(|ex| {
            let (pass, detail) = match (ex.run)() {
                Ok(b) => (b, None),
                Err(e) => (false, Some(e.to_string())),
            };
            ExampleResult {
                name: ex.name,
                pass: pass != perturb,
                detail,
            }
        })
        .collect()
}
