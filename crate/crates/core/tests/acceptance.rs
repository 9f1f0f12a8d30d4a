//! Acceptance suite: one test per criterion, each printing a single
//! `criterion N ... PASS|FAIL` line. Run with `--nocapture` to see them.
//!
//! All comparisons are exact residue or rational equalities.

use std::time::Instant;

use num_traits::Zero;
use supercong::arith::{primes_between, reduce_rational, BigRational, PadicContext};
use supercong::congruences as cg;
use supercong::hyperseries::{block_sum_mod, truncated_3f2_mod_prefixes, truncated_3f2_range};
use supercong::identities::{
    check_even_identities, check_odd_identities, recurrence_residual, sequence_value, Sequence,
};
use supercong::report::{run_grid, ASet, RunConfig};
use supercong::theorems::{
    default_grid, search_sharpness_witness, verify_corollary, verify_na2, verify_theorem1,
    verify_theorem2,
};
use supercong::{Error, SpecialValue};

/// Tally of one criterion.
#[derive(Default)]
struct Tally {
    checked: usize,
    skipped: usize,
    failures: Vec<String>,
}

impl Tally {
    fn record<T>(
        &mut self,
        what: impl FnOnce() -> String,
        result: supercong::Result<T>,
        pass: impl FnOnce(&T) -> bool,
    ) {
        match result {
            Ok(v) => {
                self.checked += 1;
                if !pass(&v) {
                    self.failures.push(what());
                }
            }
            Err(Error::EvenResidueClass { .. }) | Err(Error::OddResidueClass { .. }) => {
                self.skipped += 1
            }
            Err(e) => self.failures.push(format!("{}: {e}", what())),
        }
    }

    fn finish(self, number: u32, title: &str, start: Instant) {
        let ok = self.failures.is_empty() && self.checked > 0;
        println!(
            "criterion {number} [{title}]: {} ({} checked, {} skipped by precondition, {} failed, {:.1}s)",
            if ok { "PASS" } else { "FAIL" },
            self.checked,
            self.skipped,
            self.failures.len(),
            start.elapsed().as_secs_f64()
        );
        assert!(
            ok,
            "criterion {number} failures: {:?}",
            &self.failures[..self.failures.len().min(10)]
        );
    }
}

fn specials() -> Vec<BigRational> {
    SpecialValue::ALL.iter().map(|s| s.value()).collect()
}

#[test]
fn criterion_1_theorem1() {
    let start = Instant::now();
    let mut t = Tally::default();
    for p in primes_between(5, 97) {
        for a in default_grid(p) {
            for n in 1..=3 {
                t.record(
                    || format!("p={p} a={a} n={n}"),
                    verify_theorem1(p, &a, n),
                    |c| c.pass && c.lhs.is_zero(),
                );
            }
        }
    }
    t.finish(
        1,
        "F(a;np) = 0 mod p^2, odd <a>_p, p <= 97, default grid, n <= 3",
        start,
    );
}

#[test]
fn criterion_2_theorem2() {
    let start = Instant::now();
    let mut t = Tally::default();
    for p in primes_between(5, 97) {
        for a in specials() {
            for n in 1..=4 {
                t.record(
                    || format!("p={p} a={a} n={n}"),
                    verify_theorem2(p, &a, n),
                    |c| c.pass,
                );
            }
        }
    }
    t.finish(
        2,
        "F(a;np) = G(a)F(a;n) mod p^2, four special a, p <= 97, n <= 4",
        start,
    );
}

#[test]
fn criterion_3_corollary() {
    let start = Instant::now();
    let mut t = Tally::default();
    for p in primes_between(5, 97) {
        for a in specials() {
            for r in 1..=2u32 {
                if r == 2 && p > 31 {
                    continue;
                }
                t.record(
                    || format!("p={p} a={a} r={r}"),
                    verify_corollary(p, &a, r),
                    |c| c.pass,
                );
            }
        }
    }
    t.finish(
        3,
        "F(a;p^r) = G(a)^r mod p^2, r = 1 (p <= 97), r = 2 (p <= 31)",
        start,
    );
}

#[test]
fn criterion_4_base_case_both_branches() {
    let start = Instant::now();
    let mut t = Tally::default();
    let (mut odd, mut even) = (0, 0);
    for p in primes_between(5, 97) {
        for a in default_grid(p) {
            let r = verify_na2(p, &a);
            if let Ok(c) = &r {
                match c.branch {
                    supercong::Parity::Odd => odd += 1,
                    supercong::Parity::Even => even += 1,
                }
            }
            t.record(
                || format!("p={p} a={a}"),
                r,
                |c| c.pass && (c.branch == supercong::Parity::Even || c.lhs.is_zero()),
            );
        }
    }
    assert!(odd > 0 && even > 0, "both branches exercised");
    t.finish(
        4,
        "F(a;p) = 0 or G(a) mod p^2, p <= 97, default grid",
        start,
    );
}

#[test]
fn criterion_5_identities() {
    let start = Instant::now();
    let mut t = Tally::default();
    for n in (1..=199).step_by(2) {
        t.record(
            || format!("odd n={n}"),
            check_odd_identities(n),
            |r| r.all_hold(),
        );
    }
    for n in (2..=200).step_by(2) {
        t.record(
            || format!("even n={n}"),
            check_even_identities(n),
            |r| r.all_hold(),
        );
    }
    for n in 1..=50 {
        for seq in [Sequence::A, Sequence::B] {
            t.record(
                || format!("{seq:?}_{n} = 0"),
                Ok(sequence_value(seq, n)),
                |v| v.is_zero(),
            );
            t.record(
                || format!("{seq:?} recurrence at {n}"),
                recurrence_residual(seq, n),
                |w| w.satisfied(),
            );
        }
    }
    t.finish(
        5,
        "odd n <= 199, even n <= 200, recurrences n <= 50, exact",
        start,
    );
}

#[test]
fn criterion_6_supporting_congruences() {
    let start = Instant::now();
    let mut t = Tally::default();
    for p in primes_between(5, 199) {
        t.record(|| format!("l2 p={p}"), cg::check_lehmer(p), |c| c.pass);
        for base in 2..=30u64 {
            if base % p != 0 {
                t.record(
                    || format!("l1 p={p} a={base}"),
                    cg::check_eisenstein(p, base, 30, 5),
                    |c| c.pass,
                );
            }
        }
        for a in specials() {
            t.record(
                || format!("nc6 p={p} a={a}"),
                cg::check_nc6(p, &a),
                |c| c.pass,
            );
        }
    }
    for p in primes_between(5, 31) {
        for r in 0..=3 {
            for k in cg::k_range("nx", p) {
                t.record(
                    || format!("nx p={p} r={r} k={k}"),
                    cg::check_nx(p, r, k),
                    |c| c.pass,
                );
            }
            for a in specials() {
                for k in cg::k_range("nc1", p) {
                    t.record(
                        || format!("nc1 p={p} a={a} r={r} k={k}"),
                        cg::check_nc1(p, &a, r, k),
                        |c| c.pass,
                    );
                }
            }
            for a in default_grid(p) {
                t.record(
                    || format!("nb17 p={p} a={a} r={r}"),
                    cg::check_nb17(p, &a, r),
                    |c| c.pass,
                );
            }
        }
        for a in default_grid(p) {
            t.record(
                || format!("nb7 p={p} a={a}"),
                cg::check_nb7(p, &a),
                |v| v.iter().all(|c| c.pass),
            );
            t.record(
                || format!("nb16 p={p} a={a}"),
                cg::check_nb16(p, &a),
                |c| c.pass,
            );
        }
        for a in specials() {
            t.record(
                || format!("nc14 p={p} a={a}"),
                cg::check_nc14(p, &a),
                |c| c.pass,
            );
        }
    }
    t.finish(
        6,
        "l1, l2, nc6 (p <= 199); nx, nc1, nb7, nb16, nb17, nc14 (p <= 31)",
        start,
    );
}

/// Exact prefix sums `F(a; jp)` for `j = 1..=n_max`, built block by block.
fn exact_prefixes(a: &BigRational, p: u64, n_max: u64) -> Vec<BigRational> {
    let mut acc = BigRational::zero();
    (0..n_max)
        .map(|j| {
            acc += truncated_3f2_range(a, j * p, (j + 1) * p);
            acc.clone()
        })
        .collect()
}

#[test]
fn criterion_7_fast_path_matches_exact() {
    let start = Instant::now();
    let mut t = Tally::default();
    for p in primes_between(5, 97) {
        let ctx = PadicContext::new(p, 2).unwrap();
        let mut params = default_grid(p);
        params.extend(specials());
        for a in &params {
            let n_max = (1..=4).filter(|n| n * p <= 500).max().unwrap_or(0);
            if n_max == 0 {
                continue;
            }
            let exact = exact_prefixes(a, p, n_max);
            let mut cuts: Vec<u64> = (1..=n_max).map(|n| n * p).collect();
            cuts.extend(1..=n_max);
            let fast = truncated_3f2_mod_prefixes(a, &cuts, &ctx);
            let small: BigRational = truncated_3f2_range(a, 0, n_max);
            t.record(
                || format!("F prefixes p={p} a={a}"),
                fast,
                |fast| {
                    let mut ok = (0..n_max as usize)
                        .all(|j| reduce_rational(&exact[j], &ctx).as_ref() == Ok(&fast[j]));
                    // F(a; n) for n <= n_max
                    let mut run = BigRational::zero();
                    for n in 1..=n_max {
                        run += truncated_3f2_range(a, n - 1, n);
                        ok &= reduce_rational(&run, &ctx).as_ref()
                            == Ok(&fast[n_max as usize + n as usize - 1]);
                    }
                    ok && run == small
                },
            );
            if p <= 31 {
                for r in 0..=3 {
                    let exact = truncated_3f2_range(a, r * p, (r + 1) * p);
                    t.record(
                        || format!("block p={p} a={a} r={r}"),
                        block_sum_mod(a, r, &ctx),
                        |m| reduce_rational(&exact, &ctx).as_ref() == Ok(m),
                    );
                }
            }
        }
        // corollary at r = 2 when p^2 <= 500
        if p * p <= 500 {
            for a in specials() {
                let exact = truncated_3f2_range(&a, 0, p * p);
                let fast = truncated_3f2_mod_prefixes(&a, &[p * p], &ctx);
                t.record(
                    || format!("F(a;p^2) p={p} a={a}"),
                    fast,
                    |f| reduce_rational(&exact, &ctx).as_ref() == Ok(&f[0]),
                );
            }
        }
    }
    t.finish(
        7,
        "modular fast path equals reduced exact sum, np <= 500",
        start,
    );
}

#[test]
fn criterion_8_negative_controls() {
    let start = Instant::now();
    let mut t = Tally::default();

    let config = RunConfig {
        prime_min: 5,
        prime_max: 13,
        a_set: ASet::Special4,
        n_range: (1, 2),
        r_range: (0, 1),
        checks: [
            "na2",
            "thm1",
            "thm2",
            "corollary",
            "nc7",
            "nb10",
            "nx",
            "nc2-identities",
        ]
        .map(String::from)
        .to_vec(),
        self_test_perturb: true,
        ..RunConfig::default()
    };
    t.record(
        || "perturbed grid".into(),
        run_grid(&config),
        |rep| rep.summary.fail > 0 && rep.summary.pass == 0 && rep.exit_code() == 1,
    );
    let clean = RunConfig {
        self_test_perturb: false,
        ..config
    };
    t.record(
        || "unperturbed grid".into(),
        run_grid(&clean),
        |rep| rep.summary.fail == 0 && rep.summary.pass > 0 && rep.exit_code() == 0,
    );

    let witness = search_sharpness_witness(&primes_between(5, 31), 4);
    if let Ok(Some(w)) = &witness {
        println!("  expected-failure witness: {}", w.case);
    }
    t.record(
        || "sharpness witness among p <= 31".into(),
        witness,
        |w| {
            w.as_ref().is_some_and(|w| {
                !w.case.pass
                    && w.case.n >= 2
                    && w.case.branch == supercong::Parity::Even
                    && SpecialValue::from_rational(&w.case.a).is_err()
            })
        },
    );
    t.finish(
        8,
        "perturbed run fails; thm2 relation fails for a non-special a",
        start,
    );
}
