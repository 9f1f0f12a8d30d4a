//! Grid execution and JSON reporting.
//!
//! A [`RunConfig`] selects primes, parameters `a`, ranges for `n` and `r`, and
//! a set of check ids. [`run_grid`] expands that into independent tasks, runs
//! them on a bounded rayon pool and returns a [`Report`] whose records are
//! sorted, so the output does not depend on scheduling.

use std::path::{Path, PathBuf};
use std::time::Instant;

use num_integer::Integer;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize, Serializer};

use crate::arith::{int, parse_rational, primes_between, BigInt, BigRational};
use crate::congruences::{self, k_range, CaseParams, CongruenceCase};
use crate::error::{Error, Result};
use crate::identities::{
    check_even_identities, check_odd_identities, recurrence_residual, sequence_value, Sequence,
};
use crate::padic::{Parity, SpecialValue};
use crate::theorems::{self, default_grid, Theorem, TheoremCase};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// How a check iterates over the grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Scope {
    /// Once per prime, no `a`.
    Prime,
    /// Once per prime and parameter `a`.
    PrimeA,
    /// Once per `n`, independent of `p`.
    N,
    /// A single search over the whole grid.
    Once,
}

/// A registered check id with its short mathematical label.
#[derive(Debug, Clone, Copy)]
pub struct CheckInfo {
    pub id: &'static str,
    pub label: &'static str,
    scope: Scope,
}

const fn info(id: &'static str, label: &'static str, scope: Scope) -> CheckInfo {
    CheckInfo { id, label, scope }
}

/// Every check id accepted by `--checks`, in listing order.
pub const CHECKS: &[CheckInfo] = &[
    info(
        "na2",
        "F(a;p) = 0 (odd <a>_p) or G(a) (even <a>_p) mod p^2",
        Scope::PrimeA,
    ),
    info("thm1", "F(a;np) = 0 mod p^2 for odd <a>_p", Scope::PrimeA),
    info(
        "thm2",
        "F(a;np) = G(a) F(a;n) mod p^2 for a in {-1/2,-1/3,-1/4,-1/6}, even <a>_p",
        Scope::PrimeA,
    ),
    info("corollary", "F(a;p^r) = G(a)^r mod p^2", Scope::PrimeA),
    info(
        "nx",
        "C(2rp+2k,rp+k) = C(2r,r)C(2k,k)(1+2rp(H_2k-H_k)) mod p^2",
        Scope::Prime,
    ),
    info(
        "nb7",
        "three weighted block-zero sums agree mod p, odd <a>_p",
        Scope::PrimeA,
    ),
    info(
        "nb10",
        "block sum over [rp,(r+1)p) = 0 mod p^2, odd <a>_p",
        Scope::PrimeA,
    ),
    info("nb12", "C(2rp+2k,rp+k)^2 expansion mod p^2", Scope::Prime),
    info(
        "nb14",
        "C(a+k+rp,2k+2rp) first-order factorization mod p^2",
        Scope::PrimeA,
    ),
    info(
        "nb15",
        "block sum as first-order sum over k <= (p-1)/2 mod p^2",
        Scope::PrimeA,
    ),
    info(
        "nb16",
        "sum_{k<=(p-1)/2} t(<a>_p,k) = 0 mod p^2, odd <a>_p",
        Scope::PrimeA,
    ),
    info(
        "nb17",
        "first-order coefficient of the block sum = 0 mod p, odd <a>_p",
        Scope::PrimeA,
    ),
    info(
        "nc1",
        "Pochhammer ratio at k+rp with H_{floor(-pa)} correction mod p^2",
        Scope::PrimeA,
    ),
    info("nc6", "H_{floor(-pa)} = H_{<a>_p} mod p", Scope::PrimeA),
    info(
        "nc7",
        "block sum = G(a) t(a,r) mod p^2, even <a>_p",
        Scope::PrimeA,
    ),
    info(
        "nc10",
        "(1/4)^{k+rp} = (1/4)^{k+r}(1+rp H_{(p-1)/2}) mod p^2",
        Scope::Prime,
    ),
    info(
        "nc11",
        "(1/4)^{k+rp} C(2k+2rp,k+rp) expansion mod p^2",
        Scope::Prime,
    ),
    info(
        "nc12",
        "binomial form of the Pochhammer ratio expansion mod p^2",
        Scope::PrimeA,
    ),
    info(
        "nc13",
        "block sum with first-order bracket mod p^2",
        Scope::PrimeA,
    ),
    info(
        "nc14",
        "first-order bracket sum = 0 mod p, even <a>_p",
        Scope::PrimeA,
    ),
    info(
        "nc15",
        "bracket sum at a equals bracket sum at <a>_p mod p",
        Scope::PrimeA,
    ),
    info(
        "nc16",
        "closed form of the non-tail bracket sum at <a>_p",
        Scope::PrimeA,
    ),
    info(
        "nc17",
        "tail sum through b = p - <a>_p and its closed form",
        Scope::PrimeA,
    ),
    info(
        "nc18",
        "sum t(b-1,k) transferred to sum t(<a>_p,k)",
        Scope::PrimeA,
    ),
    info(
        "nc19",
        "assembled bracket sum and its vanishing mod p",
        Scope::PrimeA,
    ),
    info(
        "l1",
        "q_p(ab) = q_p(a)+q_p(b), q_p(a^r) = r q_p(a) mod p",
        Scope::PrimeA,
    ),
    info("l2", "H_{(p-1)/2} = -2 q_p(2) mod p", Scope::Prime),
    info("reflection", "H_{p-1-k} = H_k mod p", Scope::Prime),
    info(
        "c2k",
        "p^2 divides C(2k,k)^2 for (p-1)/2 < k < p",
        Scope::Prime,
    ),
    info(
        "nb1-identities",
        "odd n: sums with weights 1, 2H_2k-3H_k, 2H_(n+k)-H_k vanish",
        Scope::N,
    ),
    info(
        "nc2-identities",
        "even n: closed forms for weights 1, H_k, H_2k, inverse tail",
        Scope::N,
    ),
    info(
        "recurrences",
        "A_n = B_n = 0 and their three-term recurrences",
        Scope::N,
    ),
    info(
        "sharpness",
        "thm2 relation fails for some non-special a (expected failure)",
        Scope::Once,
    ),
];

pub fn check_info(id: &str) -> Option<&'static CheckInfo> {
    CHECKS.iter().find(|c| c.id == id)
}

fn record_label(id: &str) -> &'static str {
    match id {
        "nb1" => "sum t_k = 0, odd n",
        "nb2" => "sum t_k (2H_2k - 3H_k) = 0, odd n",
        "nb3" => "sum t_k (2H_(n+k) - H_k) = 0, odd n",
        "nc2" => "sum t_k = C(n,n/2)^2/4^n, even n",
        "nc3" => "sum t_k H_k = c H_n, even n",
        "nc4" => "sum t_k H_2k = c H_n / 2, even n",
        "nc5" => "sum t_k sum 1/(n+1+i) = c (3/2 H_n - H_{n/2}), even n",
        "seq-a" => "A_n = 0",
        "seq-b" => "B_n = 0",
        "rec-a" => "three-term recurrence for A_n",
        "rec-b" => "three-term recurrence for B_n",
        other => check_info(other).map(|c| c.label).unwrap_or(""),
    }
}

/// The parameter set `a` ranges over.
#[derive(Debug, Clone, PartialEq)]
pub enum ASet {
    Special4,
    GridDefault,
    List(Vec<BigRational>),
}

impl ASet {
    pub fn parse(s: &str) -> Result<ASet> {
        match s.trim() {
            "special4" => Ok(ASet::Special4),
            "grid-default" => Ok(ASet::GridDefault),
            list => list
                .split(',')
                .map(|x| parse_rational(x.trim()))
                .collect::<Result<Vec<_>>>()
                .and_then(|v| {
                    if v.is_empty() {
                        Err(Error::Config("empty a-set".into()))
                    } else {
                        Ok(ASet::List(v))
                    }
                }),
        }
    }

    /// Values for prime `p`. The two named sets drop values with `p | den`;
    /// explicit lists keep them so the grid can report a skip.
    pub fn values(&self, p: u64) -> Vec<BigRational> {
        match self {
            ASet::Special4 => SpecialValue::ALL.iter().map(|s| s.value()).collect(),
            ASet::GridDefault => default_grid(p),
            ASet::List(v) => v.clone(),
        }
    }
}

impl Serialize for ASet {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            ASet::Special4 => s.serialize_str("special4"),
            ASet::GridDefault => s.serialize_str("grid-default"),
            ASet::List(v) => s.collect_seq(v.iter().map(fmt_rational)),
        }
    }
}

/// Resolved run configuration.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub prime_min: u64,
    pub prime_max: u64,
    pub precision: u32,
    pub a_set: ASet,
    pub n_range: (u64, u64),
    pub r_range: (u64, u64),
    pub checks: Vec<String>,
    pub output_path: Option<PathBuf>,
    /// Worker count; `None` means one per core.
    pub jobs: Option<usize>,
    pub self_test_perturb: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            prime_min: 5,
            prime_max: 13,
            precision: 2,
            a_set: ASet::GridDefault,
            n_range: (1, 3),
            r_range: (0, 2),
            checks: vec!["all".into()],
            output_path: None,
            jobs: None,
            self_test_perturb: false,
        }
    }
}

/// A string or a list of strings; lists are joined with commas.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum StrOrList {
    Str(String),
    List(Vec<String>),
}

impl StrOrList {
    fn joined(&self) -> String {
        match self {
            StrOrList::Str(s) => s.clone(),
            StrOrList::List(v) => v.join(","),
        }
    }
}

/// Worker count or `"auto"`.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum Jobs {
    Count(usize),
    Token(String),
}

/// Unresolved settings, as read from a JSON config file or from CLI flags.
/// Field names match the flags.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct ConfigSource {
    pub primes: Option<String>,
    pub a: Option<StrOrList>,
    pub n: Option<String>,
    pub r: Option<String>,
    pub prec: Option<u32>,
    pub checks: Option<StrOrList>,
    pub out: Option<PathBuf>,
    pub jobs: Option<Jobs>,
    pub self_test_perturb: Option<bool>,
}

impl ConfigSource {
    pub fn from_json_file(path: &Path) -> Result<ConfigSource> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
    }

    /// Fields set in `self` win over those in `base`.
    pub fn over(self, base: ConfigSource) -> ConfigSource {
        ConfigSource {
            primes: self.primes.or(base.primes),
            a: self.a.or(base.a),
            n: self.n.or(base.n),
            r: self.r.or(base.r),
            prec: self.prec.or(base.prec),
            checks: self.checks.or(base.checks),
            out: self.out.or(base.out),
            jobs: self.jobs.or(base.jobs),
            self_test_perturb: self.self_test_perturb.or(base.self_test_perturb),
        }
    }

    pub fn resolve(self) -> Result<RunConfig> {
        let mut c = RunConfig::default();
        if let Some(s) = &self.primes {
            (c.prime_min, c.prime_max) = parse_range(s, "primes")?;
        }
        if let Some(a) = &self.a {
            c.a_set = ASet::parse(&a.joined())?;
        }
        if let Some(s) = &self.n {
            c.n_range = parse_range(s, "n")?;
        }
        if let Some(s) = &self.r {
            c.r_range = parse_range(s, "r")?;
        }
        if let Some(k) = self.prec {
            c.precision = k;
        }
        if let Some(ch) = &self.checks {
            c.checks = ch
                .joined()
                .split(',')
                .map(|s| s.trim().to_string())
                .filter(|s| !s.is_empty())
                .collect();
        }
        c.output_path = self.out;
        c.jobs = match self.jobs {
            None => None,
            Some(Jobs::Count(0)) => return Err(Error::Config("jobs must be positive".into())),
            Some(Jobs::Count(n)) => Some(n),
            Some(Jobs::Token(t)) if t == "auto" => None,
            Some(Jobs::Token(t)) => match t.parse::<usize>() {
                Ok(n) if n > 0 => Some(n),
                _ => return Err(Error::Config(format!("invalid jobs value `{t}`"))),
            },
        };
        c.self_test_perturb = self.self_test_perturb.unwrap_or(false);
        c.validate()?;
        Ok(c)
    }
}

/// Parses `A:B` (inclusive) or a single value `A`.
pub fn parse_range(s: &str, what: &str) -> Result<(u64, u64)> {
    let bad = || Error::Config(format!("invalid {what} range `{s}`, expected A:B"));
    let (lo, hi) = match s.split_once(':') {
        Some((a, b)) => (a.trim(), b.trim()),
        None => (s.trim(), s.trim()),
    };
    let lo: u64 = lo.parse().map_err(|_| bad())?;
    let hi: u64 = hi.parse().map_err(|_| bad())?;
    if lo > hi {
        return Err(Error::Config(format!("empty {what} range `{s}`")));
    }
    Ok((lo, hi))
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        if self.prime_min < 5 {
            return Err(Error::Config(format!(
                "prime_min = {} but primes must be at least 5",
                self.prime_min
            )));
        }
        if self.prime_min > self.prime_max {
            return Err(Error::Config("empty prime range".into()));
        }
        if self.n_range.0 > self.n_range.1 || self.r_range.0 > self.r_range.1 {
            return Err(Error::Config("empty n or r range".into()));
        }
        if !(1..=2).contains(&self.precision) {
            return Err(Error::Config(format!(
                "precision {} unsupported: congruences are checked modulo p or p^2",
                self.precision
            )));
        }
        if self.checks.is_empty() {
            return Err(Error::Config("no checks selected".into()));
        }
        for id in &self.checks {
            if id != "all" && check_info(id).is_none() {
                return Err(Error::Config(format!("unknown check id `{id}`")));
            }
        }
        Ok(())
    }

    fn selected(&self) -> Vec<&'static CheckInfo> {
        if self.checks.iter().any(|c| c == "all") {
            return CHECKS.iter().collect();
        }
        CHECKS
            .iter()
            .filter(|c| self.checks.iter().any(|s| s == c.id))
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skip,
    Error,
}

/// One row of the report.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckRecord {
    pub id: String,
    pub paper_label: String,
    pub p: Option<u64>,
    #[serde(serialize_with = "ser_opt_rational")]
    pub a: Option<BigRational>,
    pub n: Option<u64>,
    pub r: Option<u64>,
    pub k: Option<u64>,
    pub branch: Option<Parity>,
    pub lhs: Option<String>,
    pub rhs: Option<String>,
    pub modulus: Option<String>,
    pub status: Status,
    pub note: Option<String>,
    #[serde(skip)]
    pub link: Option<u32>,
}

/// Renders a rational as `num/den`.
pub fn fmt_rational(q: &BigRational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

fn ser_opt_rational<S: Serializer>(
    q: &Option<BigRational>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    match q {
        Some(q) => s.serialize_str(&fmt_rational(q)),
        None => s.serialize_none(),
    }
}

impl CheckRecord {
    fn blank(id: &str) -> Self {
        CheckRecord {
            id: id.to_string(),
            paper_label: record_label(id).to_string(),
            p: None,
            a: None,
            n: None,
            r: None,
            k: None,
            branch: None,
            lhs: None,
            rhs: None,
            modulus: None,
            status: Status::Skip,
            note: None,
            link: None,
        }
    }

    fn with_params(id: &str, params: &CaseParams) -> Self {
        let mut rec = CheckRecord::blank(id);
        rec.p = Some(params.p);
        rec.a = params.a.clone();
        rec.n = params.n;
        rec.r = params.r;
        rec.k = params.k;
        rec.link = params.link;
        if let Some(l) = params.link {
            rec.note = Some(format!("link {l}"));
        }
        rec
    }

    fn sort_key(&self) -> impl Ord + '_ {
        (&self.id, self.p, &self.a, self.n, self.r, self.k, self.link)
    }
}

/// Counts of each status.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub pass: usize,
    pub fail: usize,
    pub skip: usize,
    pub error: usize,
}

impl Summary {
    pub fn tally(records: &[CheckRecord]) -> Self {
        let mut s = Summary::default();
        for r in records {
            match r.status {
                Status::Pass => s.pass += 1,
                Status::Fail => s.fail += 1,
                Status::Skip => s.skip += 1,
                Status::Error => s.error += 1,
            }
        }
        s
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub version: String,
    pub config: RunConfig,
    pub records: Vec<CheckRecord>,
    pub summary: Summary,
    pub wall_time_ms: u64,
}

impl Report {
    /// `0` if nothing failed or errored, `1` otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.summary.fail == 0 && self.summary.error == 0 {
            0
        } else {
            1
        }
    }

    /// The JSON document, with `wall_time_ms` as given.
    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::Io(e.to_string()))
    }
}

/// Writes the report as a single JSON document.
pub fn emit_report(report: &Report, path: &Path) -> Result<()> {
    let mut json = report.to_json()?;
    json.push('\n');
    std::fs::write(path, json).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

/// One unit of parallel work.
#[derive(Debug, Clone)]
struct Task {
    check: &'static CheckInfo,
    p: Option<u64>,
    a: Option<BigRational>,
    n: Option<u64>,
}

fn expand(config: &RunConfig) -> Vec<Task> {
    let primes = primes_between(config.prime_min, config.prime_max);
    let mut tasks = Vec::new();
    for check in config.selected() {
        let task = |p, a, n| Task { check, p, a, n };
        match check.scope {
            Scope::Prime => tasks.extend(primes.iter().map(|&p| task(Some(p), None, None))),
            Scope::PrimeA if check.id == "l1" => {
                for &p in &primes {
                    tasks.extend((2..=12u64).map(|b| task(Some(p), Some(int(b)), None)));
                }
            }
            Scope::PrimeA => {
                for &p in &primes {
                    tasks.extend(
                        config
                            .a_set
                            .values(p)
                            .into_iter()
                            .map(|a| task(Some(p), Some(a), None)),
                    );
                }
            }
            Scope::N => tasks
                .extend((config.n_range.0..=config.n_range.1).map(|n| task(None, None, Some(n)))),
            Scope::Once => tasks.push(task(None, None, None)),
        }
    }
    tasks
}

/// Outcome classification: precondition violations become skips.
fn from_error(mut rec: CheckRecord, e: &Error) -> CheckRecord {
    rec.status = match e {
        Error::EvenResidueClass { .. }
        | Error::OddResidueClass { .. }
        | Error::NotSpecialValue(_)
        | Error::Precondition(_)
        | Error::DenominatorDivisibleByP { .. }
        | Error::NotCoprime { .. } => Status::Skip,
        _ => Status::Error,
    };
    rec.note = Some(match e {
        Error::EvenResidueClass { residue } => {
            format!("residue-class parity even (<a>_p = {residue}), check requires odd")
        }
        Error::OddResidueClass { residue } => {
            format!("residue-class parity odd (<a>_p = {residue}), check requires even")
        }
        other => other.to_string(),
    });
    rec
}

struct Ctx<'a> {
    config: &'a RunConfig,
}

impl Ctx<'_> {
    fn status(&self, pass: bool) -> Status {
        if pass {
            Status::Pass
        } else {
            Status::Fail
        }
    }

    fn congruence(&self, case: CongruenceCase) -> CheckRecord {
        let case = if self.config.self_test_perturb && case.pass {
            case.perturbed()
        } else {
            case
        };
        let mut rec = CheckRecord::with_params(case.id, &case.params);
        let k = case.modulus_exponent.min(self.config.precision);
        let (lhs, rhs) = match (case.lhs.truncate(k), case.rhs.truncate(k)) {
            (Ok(l), Ok(r)) => (l, r),
            _ => (case.lhs.clone(), case.rhs.clone()),
        };
        rec.modulus = Some(lhs.ctx().modulus().to_string());
        rec.status = self.status(lhs == rhs && case.exact_equal.unwrap_or(true));
        rec.lhs = Some(lhs.to_string());
        rec.rhs = Some(rhs.to_string());
        if let Some(note) = case.note {
            rec.note = Some(match rec.note {
                Some(prefix) => format!("{prefix}; {note}"),
                None => note,
            });
        }
        rec
    }

    fn theorem(&self, case: TheoremCase) -> CheckRecord {
        let case = if self.config.self_test_perturb && case.pass {
            case.perturbed()
        } else {
            case
        };
        let params = theorems::case_params(&case);
        let mut rec = CheckRecord::with_params(case.theorem.id(), &params);
        if case.theorem == Theorem::Na2 {
            rec.n = None;
        }
        rec.branch = Some(case.branch);
        let k = self.config.precision;
        let lhs = case.lhs.truncate(k).unwrap_or(case.lhs.clone());
        let rhs = case.rhs.truncate(k).unwrap_or(case.rhs.clone());
        rec.modulus = Some(lhs.ctx().modulus().to_string());
        rec.status = self.status(lhs == rhs);
        rec.lhs = Some(lhs.to_string());
        rec.rhs = Some(rhs.to_string());
        rec
    }

    /// An exact identity `lhs = rhs` over the rationals.
    fn identity(&self, id: &str, n: u64, lhs: &BigRational, rhs: &BigRational) -> CheckRecord {
        let rhs = if self.config.self_test_perturb && lhs == rhs {
            rhs + BigRational::one()
        } else {
            rhs.clone()
        };
        let mut rec = CheckRecord::blank(id);
        rec.n = Some(n);
        rec.status = self.status(*lhs == rhs);
        rec.lhs = Some(fmt_rational(lhs));
        rec.rhs = Some(fmt_rational(&rhs));
        rec
    }

    fn cases(
        &self,
        id: &str,
        base: CaseParams,
        result: Result<Vec<CongruenceCase>>,
    ) -> Vec<CheckRecord> {
        match result {
            Ok(cases) => cases.into_iter().map(|c| self.congruence(c)).collect(),
            Err(e) => vec![from_error(CheckRecord::with_params(id, &base), &e)],
        }
    }

    fn one_theorem(&self, id: &str, base: CaseParams, result: Result<TheoremCase>) -> CheckRecord {
        match result {
            Ok(c) => self.theorem(c),
            Err(e) => from_error(CheckRecord::with_params(id, &base), &e),
        }
    }

    fn run(&self, task: &Task) -> Vec<CheckRecord> {
        let id = task.check.id;
        let cfg = self.config;
        let ns = cfg.n_range.0.max(1)..=cfg.n_range.1;
        let rs = cfg.r_range.0..=cfg.r_range.1;
        match task.check.scope {
            Scope::N => self.run_identity(id, task.n.unwrap_or(0)),
            Scope::Once => self.run_sharpness(),
            Scope::Prime => {
                let p = task.p.unwrap_or(0);
                let base = CaseParams::p(p);
                let mut out = Vec::new();
                let zero = int(0);
                match id {
                    "l2" => out.extend(self.cases(
                        id,
                        base,
                        congruences::check_lehmer(p).map(|c| vec![c]),
                    )),
                    "reflection" | "c2k" => {
                        for k in k_range(id, p) {
                            let res = if id == "c2k" {
                                congruences::check_central_square(p, k)
                            } else {
                                congruences::check_reflection(p, k)
                            };
                            out.extend(self.cases(
                                id,
                                base.clone().with_k(k),
                                res.map(|c| vec![c]),
                            ));
                        }
                    }
                    _ => {
                        for r in rs {
                            for k in k_range(id, p) {
                                let params = base.clone().with_r(r).with_k(k);
                                let res = if id == "nx" {
                                    congruences::check_nx(p, r, k).map(|c| vec![c])
                                } else {
                                    congruences::check_auxiliary(id, p, &zero, r, k)
                                };
                                out.extend(self.cases(id, params, res));
                            }
                        }
                    }
                }
                out
            }
            Scope::PrimeA => {
                let p = task.p.unwrap_or(0);
                let a = task.a.clone().unwrap_or_default();
                let base = CaseParams::p(p).with_a(&a);
                if (a.denom() % BigInt::from(p)).is_zero() {
                    let e = Error::DenominatorDivisibleByP {
                        value: fmt_rational(&a),
                        p,
                    };
                    return vec![from_error(CheckRecord::with_params(id, &base), &e)];
                }
                self.run_prime_a(id, p, &a, base, ns, rs)
            }
        }
    }

    fn run_prime_a(
        &self,
        id: &str,
        p: u64,
        a: &BigRational,
        base: CaseParams,
        ns: std::ops::RangeInclusive<u64>,
        rs: std::ops::RangeInclusive<u64>,
    ) -> Vec<CheckRecord> {
        let single = |c: Result<CongruenceCase>| c.map(|c| vec![c]);
        let mut out = Vec::new();
        match id {
            "na2" => out.push(self.one_theorem(id, base, theorems::verify_na2(p, a))),
            "thm1" | "thm2" => {
                for n in ns {
                    let mut params = base.clone();
                    params.n = Some(n);
                    let res = if id == "thm1" {
                        theorems::verify_theorem1(p, a, n)
                    } else {
                        theorems::verify_theorem2(p, a, n)
                    };
                    out.push(self.one_theorem(id, params, res));
                }
            }
            "corollary" => {
                for r in rs.filter(|&r| r >= 1) {
                    let res = theorems::verify_corollary(p, a, r as u32);
                    out.push(self.one_theorem(id, base.clone().with_r(r), res));
                }
            }
            "l1" => {
                let b = crate::arith::as_u64(a).unwrap_or(0);
                out.extend(self.cases(
                    id,
                    base,
                    single(congruences::check_eisenstein(p, b, 30, 5)),
                ));
            }
            "nb7" => out.extend(self.cases(id, base, congruences::check_nb7(p, a))),
            "nc6" => out.extend(self.cases(id, base, single(congruences::check_nc6(p, a)))),
            "nb16" | "nc14" | "nc15" | "nc16" | "nc17" | "nc18" | "nc19" => {
                let res = if id == "nc14" {
                    single(congruences::check_nc14(p, a))
                } else {
                    congruences::check_auxiliary(id, p, a, 0, 0)
                };
                out.extend(self.cases(id, base, res));
            }
            "nb10" | "nc7" | "nb15" | "nb17" | "nc13" => {
                for r in rs {
                    let res = match id {
                        "nb10" => single(congruences::check_block_theorem1(p, a, r)),
                        "nc7" => single(congruences::check_block_theorem2(p, a, r)),
                        _ => congruences::check_auxiliary(id, p, a, r, 0),
                    };
                    out.extend(self.cases(id, base.clone().with_r(r), res));
                }
            }
            "nc1" | "nc12" | "nb14" => {
                for r in rs {
                    for k in k_range(id, p) {
                        let res = if id == "nc1" {
                            single(congruences::check_nc1(p, a, r, k))
                        } else {
                            congruences::check_auxiliary(id, p, a, r, k)
                        };
                        out.extend(self.cases(id, base.clone().with_r(r).with_k(k), res));
                    }
                }
            }
            other => {
                let e = Error::UnknownCheck(other.to_string());
                out.push(from_error(CheckRecord::with_params(other, &base), &e));
            }
        }
        out
    }

    fn run_identity(&self, group: &str, n: u64) -> Vec<CheckRecord> {
        let zero = BigRational::zero();
        let skip = |id: &str, note: &str| {
            let mut rec = CheckRecord::blank(id);
            rec.n = Some(n);
            rec.note = Some(note.to_string());
            vec![rec]
        };
        match group {
            "nb1-identities" => match check_odd_identities(n) {
                Ok(rep) => vec![
                    self.identity("nb1", n, &rep.plain, &zero),
                    self.identity("nb2", n, &rep.harmonic_2k_3k, &zero),
                    self.identity("nb3", n, &rep.harmonic_nk_k, &zero),
                ],
                Err(_) => skip(group, "identity requires odd n"),
            },
            "nc2-identities" => match check_even_identities(n) {
                Ok(rep) => ["nc2", "nc3", "nc4", "nc5"]
                    .iter()
                    .enumerate()
                    .map(|(i, id)| self.identity(id, n, &rep.computed[i], &rep.closed_form[i]))
                    .collect(),
                Err(_) => skip(group, "identity requires even n >= 2"),
            },
            _ => {
                if n == 0 {
                    return skip(group, "recurrence index starts at 1");
                }
                let mut out = Vec::new();
                for (seq, v, r) in [
                    (Sequence::A, "seq-a", "rec-a"),
                    (Sequence::B, "seq-b", "rec-b"),
                ] {
                    out.push(self.identity(v, n, &sequence_value(seq, n), &zero));
                    match recurrence_residual(seq, n) {
                        Ok(w) => out.push(self.identity(r, n, &w.residual, &zero)),
                        Err(e) => {
                            let mut rec = from_error(CheckRecord::blank(r), &e);
                            rec.n = Some(n);
                            out.push(rec);
                        }
                    }
                }
                out
            }
        }
    }

    fn run_sharpness(&self) -> Vec<CheckRecord> {
        let id = "sharpness";
        let cfg = self.config;
        let primes = primes_between(cfg.prime_min, cfg.prime_max);
        let n_max = cfg.n_range.1.max(2);
        let mut rec = CheckRecord::blank(id);
        match theorems::search_sharpness_witness(&primes, n_max) {
            Ok(Some(w)) => {
                let c = w.case;
                rec.p = Some(c.p);
                rec.a = Some(c.a.clone());
                rec.n = Some(c.n);
                rec.branch = Some(c.branch);
                rec.modulus = Some(c.lhs.ctx().modulus().to_string());
                rec.lhs = Some(c.lhs.to_string());
                // The expected outcome is lhs != rhs. The negative control
                // replaces rhs by lhs so the record flips.
                let rhs = if cfg.self_test_perturb {
                    c.lhs.clone()
                } else {
                    c.rhs.clone()
                };
                rec.status = self.status(c.lhs != rhs);
                rec.rhs = Some(rhs.to_string());
                rec.note = Some(
                    "expected failure: thm2 relation does not hold for this non-special a".into(),
                );
            }
            Ok(None) => {
                rec.note = Some(format!(
                    "search exhausted: no witness for p in {}..={}, 2 <= n <= {n_max}",
                    cfg.prime_min, cfg.prime_max
                ));
            }
            Err(e) => rec = from_error(rec, &e),
        }
        vec![rec]
    }
}

/// Runs every selected check over the grid.
pub fn run_grid(config: &RunConfig) -> Result<Report> {
    config.validate()?;
    let start = Instant::now();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.jobs.unwrap_or(0))
        .build()
        .map_err(|e| Error::Config(format!("cannot build worker pool: {e}")))?;
    let ctx = Ctx { config };
    let tasks = expand(config);
    let mut records: Vec<CheckRecord> =
        pool.install(|| tasks.par_iter().flat_map_iter(|t| ctx.run(t)).collect());
    records.sort_by(|x, y| x.sort_key().cmp(&y.sort_key()));
    Ok(Report {
        version: TOOL_VERSION.to_string(),
        config: config.clone(),
        summary: Summary::tally(&records),
        records,
        wall_time_ms: start.elapsed().as_millis() as u64,
    })
}

/// Parity helper exposed for the CLI `eval` verb.
pub fn parity_of(n: &BigInt) -> Parity {
    if n.is_even() {
        Parity::Even
    } else {
        Parity::Odd
    }
}
