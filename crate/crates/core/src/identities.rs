//! Closed-form identities for the weighted sums
//!
//! ```text
//! S_w(n) = Σ_{k=0}^{n} C(2k,k)^2 C(n+k,2k) (-1/4)^k · w(k, n)
//! ```
//!
//! For odd `n` the weights `1`, `2H_{2k} - 3H_k` and `2H_{n+k} - H_k` give
//! zero; for even `n` the weights `1`, `H_k`, `H_{2k}` and the tail
//! `Σ_{i<k} 1/(n+1+i)` have closed forms in `C(n, n/2)^2 / 4^n`. The sequences
//! `A_n`, `B_n` (odd index `2n-1`) satisfy three-term recurrences that are
//! checked numerically here.

use std::fmt;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::arith::{binomial, int, rat, BigInt, BigRational, HarmonicTable};
use crate::error::{Error, Result};

/// Factor multiplying `C(2k,k)^2 C(n+k,2k) (-1/4)^k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Weight {
    One,
    Hk,
    H2k,
    TwoH2kMinus3Hk,
    TwoHnkMinusHk,
    ShiftedInverseTail,
}

impl Weight {
    pub const ALL: [Weight; 6] = [
        Weight::One,
        Weight::Hk,
        Weight::H2k,
        Weight::TwoH2kMinus3Hk,
        Weight::TwoHnkMinusHk,
        Weight::ShiftedInverseTail,
    ];

    fn eval(self, n: u64, k: u64, h: &HarmonicTable) -> BigRational {
        match self {
            Weight::One => BigRational::one(),
            Weight::Hk => h.get(k).clone(),
            Weight::H2k => h.get(2 * k).clone(),
            Weight::TwoH2kMinus3Hk => int(2) * h.get(2 * k) - int(3) * h.get(k),
            Weight::TwoHnkMinusHk => int(2) * h.get(n + k) - h.get(k),
            // Σ_{i=0}^{k-1} 1/(n+1+i)
            Weight::ShiftedInverseTail => h.get(n + k) - h.get(n),
        }
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Weight::One => "1",
            Weight::Hk => "H_k",
            Weight::H2k => "H_2k",
            Weight::TwoH2kMinus3Hk => "2H_2k-3H_k",
            Weight::TwoHnkMinusHk => "2H_(n+k)-H_k",
            Weight::ShiftedInverseTail => "sum 1/(n+1+i)",
        })
    }
}

/// A weighted sum together with the parameters that produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedSum {
    pub n: u64,
    pub weight: Weight,
    pub value: BigRational,
}

impl WeightedSum {
    pub fn compute(n: u64, weight: Weight) -> Self {
        WeightedSum {
            n,
            weight,
            value: weighted_sum(n, weight),
        }
    }

    /// Recompute from scratch and compare.
    pub fn is_consistent(&self) -> bool {
        weighted_sum(self.n, self.weight) == self.value
    }
}

/// `C(2k,k)^2 C(n+k,2k) (-1/4)^k` for `k = 0..=n`.
pub fn integer_terms(n: u64) -> Vec<BigRational> {
    let mut terms = Vec::with_capacity(n as usize + 1);
    let mut t = BigRational::one();
    for k in 0..=n {
        terms.push(t.clone());
        // t_{k+1} / t_k = -(2k+1)(n+k+1)(n-k) / (2 (k+1)^3)
        let num = BigInt::from(2 * k + 1) * BigInt::from(n + k + 1) * BigInt::from(n - k);
        let den = BigInt::from(2) * num_traits::pow(BigInt::from(k + 1), 3);
        t = -t * BigRational::new(num, den);
    }
    terms
}

/// `Σ_{k=0}^{n} C(2k,k)^2 C(n+k,2k) (-1/4)^k · w(k, n)`.
pub fn weighted_sum(n: u64, weight: Weight) -> BigRational {
    let h = HarmonicTable::new(2 * n);
    weighted_sum_with(n, weight, &integer_terms(n), &h)
}

/// Same as [`weighted_sum`] with precomputed terms and harmonic numbers
/// (`terms` from [`integer_terms`], `h` covering `2n`).
pub fn weighted_sum_with(
    n: u64,
    weight: Weight,
    terms: &[BigRational],
    h: &HarmonicTable,
) -> BigRational {
    if weight == Weight::One {
        return terms.iter().sum();
    }
    // Σ t_k w_k; the t_k share a power-of-two denominator 4^n, so pull it out.
    let scale = BigRational::from_integer(num_traits::pow(BigInt::from(4), n as usize));
    let mut acc = BigRational::zero();
    for (k, t) in terms.iter().enumerate() {
        if t.is_zero() {
            continue;
        }
        let scaled = (t * &scale).to_integer();
        acc += weight.eval(n, k as u64, h) * BigRational::from_integer(scaled);
    }
    acc / scale
}

/// Outcome of the three odd-`n` vanishing identities.
#[derive(Debug, Clone, PartialEq)]
pub struct OddIdentityReport {
    pub n: u64,
    pub plain: BigRational,
    pub harmonic_2k_3k: BigRational,
    pub harmonic_nk_k: BigRational,
}

impl OddIdentityReport {
    /// `[Σ t_k = 0, Σ t_k (2H_2k - 3H_k) = 0, Σ t_k (2H_{n+k} - H_k) = 0]`.
    pub fn holds(&self) -> [bool; 3] {
        [
            self.plain.is_zero(),
            self.harmonic_2k_3k.is_zero(),
            self.harmonic_nk_k.is_zero(),
        ]
    }

    pub fn all_hold(&self) -> bool {
        self.holds().iter().all(|&b| b)
    }
}

pub fn check_odd_identities(n: u64) -> Result<OddIdentityReport> {
    if n % 2 == 0 {
        return Err(Error::Precondition(format!("n = {n} must be odd")));
    }
    let h = HarmonicTable::new(2 * n);
    let terms = integer_terms(n);
    Ok(OddIdentityReport {
        n,
        plain: weighted_sum_with(n, Weight::One, &terms, &h),
        harmonic_2k_3k: weighted_sum_with(n, Weight::TwoH2kMinus3Hk, &terms, &h),
        harmonic_nk_k: weighted_sum_with(n, Weight::TwoHnkMinusHk, &terms, &h),
    })
}

/// Computed sums and their closed forms for even `n`.
#[derive(Debug, Clone, PartialEq)]
pub struct EvenIdentityReport {
    pub n: u64,
    /// Order: weight `1`, `H_k`, `H_2k`, inverse tail.
    pub computed: [BigRational; 4],
    pub closed_form: [BigRational; 4],
}

impl EvenIdentityReport {
    pub fn holds(&self) -> [bool; 4] {
        std::array::from_fn(|i| self.computed[i] == self.closed_form[i])
    }

    pub fn all_hold(&self) -> bool {
        self.holds().iter().all(|&b| b)
    }
}

/// `C(n, n/2)^2 / 4^n` for even `n`.
pub fn central_ratio(n: u64) -> BigRational {
    let c = binomial(n, n / 2);
    BigRational::new(&c * &c, num_traits::pow(BigInt::from(4), n as usize))
}

/// The four closed forms for even `n`, in the order of [`EvenIdentityReport::computed`].
pub fn even_closed_forms(n: u64, h: &HarmonicTable) -> [BigRational; 4] {
    let c = central_ratio(n);
    let hn = h.get(n);
    [
        c.clone(),
        &c * hn,
        &c * hn / int(2),
        &c * (rat(3, 2) * hn - h.get(n / 2)),
    ]
}

pub fn check_even_identities(n: u64) -> Result<EvenIdentityReport> {
    if n % 2 != 0 || n == 0 {
        return Err(Error::Precondition(format!(
            "n = {n} must be even and positive"
        )));
    }
    let h = HarmonicTable::new(2 * n);
    let terms = integer_terms(n);
    let computed = [
        Weight::One,
        Weight::Hk,
        Weight::H2k,
        Weight::ShiftedInverseTail,
    ]
    .map(|w| weighted_sum_with(n, w, &terms, &h));
    Ok(EvenIdentityReport {
        n,
        computed,
        closed_form: even_closed_forms(n, &h),
    })
}

/// The two sequences satisfying the three-term recurrences.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Sequence {
    /// `A_n = Σ_{k=0}^{2n-1} t_k (2H_2k - 3H_k)` with `t_k` at index `2n-1`.
    A,
    /// `B_n = Σ_{k=0}^{2n-1} t_k (2H_{2n-1+k} - H_k)`.
    B,
}

impl Sequence {
    fn weight(self) -> Weight {
        match self {
            Sequence::A => Weight::TwoH2kMinus3Hk,
            Sequence::B => Weight::TwoHnkMinusHk,
        }
    }

    /// Polynomial coefficients `(c_0, c_1, c_2)` of
    /// `c_0 X_n + c_1 X_{n+1} + c_2 X_{n+2} = 0`.
    pub fn coefficients(self, n: u64) -> [BigInt; 3] {
        let n = BigInt::from(n);
        let one = BigInt::one();
        let c = |x: i64| BigInt::from(x);
        match self {
            Sequence::A => [
                c(16) * &n * &n * &n * (&n + &one) * (c(4) * &n + c(5)),
                -(c(4)
                    * (&n + &one)
                    * (c(2) * &n + &one)
                    * (c(4) * &n + c(3))
                    * (c(4) * &n * &n + c(6) * &n + &one)),
                (c(2) * &n + &one) * num_traits::pow(c(2) * &n + c(3), 3) * (c(4) * &n + &one),
            ],
            Sequence::B => [
                c(16) * &n * &n * &n * (&n + &one),
                -(c(4) * (&n + &one) * num_traits::pow(c(2) * &n + &one, 3)),
                num_traits::pow(c(2) * &n + &one, 2) * num_traits::pow(c(2) * &n + c(3), 2),
            ],
        }
    }
}

/// `A_n` or `B_n`, summing `k = 0..=2n-1` at odd index `m = 2n - 1`.
pub fn sequence_value(seq: Sequence, n: u64) -> BigRational {
    assert!(n >= 1, "sequence index starts at 1");
    weighted_sum(2 * n - 1, seq.weight())
}

/// Three consecutive terms and the recurrence residual at `n`.
#[derive(Debug, Clone, PartialEq)]
pub struct RecurrenceWitness {
    pub name: Sequence,
    pub n: u64,
    pub terms: [BigRational; 3],
    pub residual: BigRational,
}

impl RecurrenceWitness {
    pub fn satisfied(&self) -> bool {
        self.residual.is_zero()
    }
}

pub fn recurrence_residual(name: Sequence, n: u64) -> Result<RecurrenceWitness> {
    if n == 0 {
        return Err(Error::Precondition(
            "recurrence index n must be >= 1".into(),
        ));
    }
    let terms = [n, n + 1, n + 2].map(|i| sequence_value(name, i));
    let coeffs = name.coefficients(n);
    let residual = coeffs
        .iter()
        .zip(&terms)
        .map(|(c, x)| BigRational::from_integer(c.clone()) * x)
        .sum();
    Ok(RecurrenceWitness {
        name,
        n,
        terms,
        residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{central_binomial, harmonic_exact, rational_binomial};

    // Oracle: straight from the definition, no shared term recurrence.
    fn direct(n: u64, weight: Weight) -> BigRational {
        let h = HarmonicTable::new(2 * n);
        (0..=n)
            .map(|k| {
                let c = int(central_binomial(k));
                let b = rational_binomial(&int(n + k), 2 * k as i64).unwrap();
                &c * &c * b * num_traits::pow(rat(-1, 4), k as usize) * weight.eval(n, k, &h)
            })
            .sum()
    }

    #[test]
    fn weighted_sum_examples() {
        assert_eq!(weighted_sum(3, Weight::One), int(0));
        assert_eq!(weighted_sum(2, Weight::One), rat(1, 4));
        assert_eq!(weighted_sum(2, Weight::Hk), rat(3, 8));
        assert_eq!(weighted_sum(2, Weight::H2k), rat(3, 16));
        // -3·1/3 + 9/4·(1/3 + 1/4) = 5/16
        assert_eq!(weighted_sum(2, Weight::ShiftedInverseTail), rat(5, 16));
    }

    #[test]
    fn weighted_sums_match_direct_definition() {
        for n in 1..=24 {
            for w in Weight::ALL {
                let ws = WeightedSum::compute(n, w);
                assert_eq!(ws.value, direct(n, w), "n={n} w={w}");
                assert!(ws.is_consistent());
            }
        }
    }

    #[test]
    fn tail_weight_is_harmonic_difference() {
        // Σ_{i=0}^{k-1} 1/(n+1+i) summed term by term
        let h = HarmonicTable::new(40);
        for n in 0..20u64 {
            for k in 0..20u64 {
                let tail: BigRational = (0..k).map(|i| rat(1, (n + 1 + i) as i64)).sum();
                assert_eq!(tail, Weight::ShiftedInverseTail.eval(n, k, &h));
            }
        }
    }

    #[test]
    fn odd_identities() {
        for n in [1u64, 3, 5, 99] {
            let r = check_odd_identities(n).unwrap();
            assert!(r.all_hold(), "n = {n}: {r:?}");
        }
        assert!(check_odd_identities(4).is_err());
    }

    #[test]
    fn even_identities() {
        let r = check_even_identities(2).unwrap();
        assert_eq!(r.computed, [rat(1, 4), rat(3, 8), rat(3, 16), rat(5, 16)]);
        assert!(r.all_hold());
        for n in [4u64, 6, 200] {
            assert!(check_even_identities(n).unwrap().all_hold(), "n = {n}");
        }
        assert!(check_even_identities(3).is_err());
        assert!(check_even_identities(0).is_err());
    }

    #[test]
    fn recurrences_start_at_zero() {
        for seq in [Sequence::A, Sequence::B] {
            let w = recurrence_residual(seq, 1).unwrap();
            assert!(w.satisfied());
            assert!(w.terms[0].is_zero() && w.terms[1].is_zero());
        }
        let w = recurrence_residual(Sequence::A, 25).unwrap();
        assert!(w.satisfied() && w.terms[0].is_zero());
        assert!(recurrence_residual(Sequence::B, 0).is_err());
    }

    #[test]
    fn recurrence_coefficients_at_one() {
        // n = 1: 16·1·2·9 = 288; 4·2·3·7·11 = 1848; 3·125·5 = 1875
        assert_eq!(
            Sequence::A.coefficients(1),
            [BigInt::from(288), BigInt::from(-1848), BigInt::from(1875)]
        );
        // 16·2 = 32; 4·2·27 = 216; 9·25 = 225
        assert_eq!(
            Sequence::B.coefficients(1),
            [BigInt::from(32), BigInt::from(-216), BigInt::from(225)]
        );
    }

    #[test]
    fn terms_beyond_n_vanish() {
        for n in 0..30i64 {
            for k in n + 1..n + 10 {
                assert!(rational_binomial(&int(n + k), 2 * k).unwrap().is_zero());
            }
        }
    }

    #[test]
    fn shifted_harmonic_form_vanishes_for_odd_n() {
        // Σ t_k (2H_{n+k} - H_k) - 2H_n Σ t_k = Σ t_k (2(H_{n+k} - H_n) - H_k)
        for n in (1..=99u64).step_by(2) {
            let h = HarmonicTable::new(2 * n);
            let terms = integer_terms(n);
            let lhs = weighted_sum_with(n, Weight::TwoHnkMinusHk, &terms, &h)
                - int(2) * harmonic_exact(n) * weighted_sum_with(n, Weight::One, &terms, &h);
            let rhs: BigRational = terms
                .iter()
                .enumerate()
                .map(|(k, t)| t * (int(2) * (h.get(n + k as u64) - h.get(n)) - h.get(k as u64)))
                .sum();
            assert_eq!(lhs, rhs);
            assert!(rhs.is_zero());
        }
    }
}
