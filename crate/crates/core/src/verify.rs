//! Property suites run by `parabose verify`.
//!
//! Each suite counts exact checks; a failing check keeps the offending state
//! when one is at hand.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::decompose::{build_lwhw_vector, casimir_value, orbital_casimir_eigenvalue, signature_bijection, Decomposer};
use crate::error::{Error, Result};
use crate::fock::{enumerate_level, BasisKet, ModelParams, State};
use crate::generators::{positive_gauge_roots, CompiledOp, Operator};
use crate::half::Half;
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Algebra,
    Gauge,
    Lemma1,
    Theorem1,
    Corollary1,
    Theorem2,
    All,
}

impl Suite {
    pub const EACH: [Suite; 6] =
        [Suite::Algebra, Suite::Gauge, Suite::Lemma1, Suite::Theorem1, Suite::Corollary1, Suite::Theorem2];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Algebra => "algebra",
            Suite::Gauge => "gauge",
            Suite::Lemma1 => "lemma1",
            Suite::Theorem1 => "theorem1",
            Suite::Corollary1 => "corollary1",
            Suite::Theorem2 => "theorem2",
            Suite::All => "all",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::EACH
            .into_iter()
            .chain([Suite::All])
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown suite {s:?}")))
    }
}

#[derive(Clone, Debug)]
pub struct Failure {
    pub what: String,
    pub state: Option<State>,
}

#[derive(Clone, Debug)]
pub struct SuiteReport {
    pub suite: Suite,
    pub passed: usize,
    pub failures: Vec<Failure>,
}

impl SuiteReport {
    fn new(suite: Suite) -> Self {
        SuiteReport { suite, passed: 0, failures: Vec::new() }
    }

    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }

    fn check(&mut self, cond: bool, what: impl FnOnce() -> String, state: Option<&State>) {
        if cond {
            self.passed += 1;
        } else {
            self.failures.push(Failure { what: what(), state: state.cloned() });
        }
    }

    /// Theorem violations and similar become failures; capacity and I/O
    /// problems stay errors.
    fn absorb<T>(&mut self, r: Result<T>) -> Result<Option<T>> {
        match r {
            Ok(v) => Ok(Some(v)),
            Err(e @ (Error::Capacity { .. } | Error::Io(_))) => Err(e),
            Err(e) => {
                self.failures.push(Failure { what: e.to_string(), state: None });
                Ok(None)
            }
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct VerifyConfig {
    pub params: ModelParams,
    pub max_degree: usize,
    pub capacity: usize,
    pub seed: u64,
    /// Random linear combinations added to the basis-ket sample.
    pub random_states: usize,
}

impl VerifyConfig {
    pub fn new(params: ModelParams, max_degree: usize) -> Self {
        VerifyConfig { params, max_degree, capacity: crate::fock::DEFAULT_CAPACITY, seed: 0, random_states: 8 }
    }
}

pub fn run(suite: Suite, cfg: &VerifyConfig) -> Result<Vec<SuiteReport>> {
    let suites: Vec<Suite> = if suite == Suite::All { Suite::EACH.to_vec() } else { vec![suite] };
    suites
        .into_iter()
        .map(|s| match s {
            Suite::Algebra => algebra(cfg),
            Suite::Gauge => gauge(cfg),
            Suite::Lemma1 => lemma1(cfg),
            Suite::Theorem1 => theorem1(cfg),
            Suite::Corollary1 => corollary1(cfg),
            Suite::Theorem2 => theorem2(cfg),
            Suite::All => unreachable!(),
        })
        .collect()
}

/// Basis kets up to `max_degree` followed by seeded random combinations
/// within single shells.
fn sample(cfg: &VerifyConfig) -> Result<Vec<State>> {
    let pr = cfg.params;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut out = Vec::new();
    let mut shells: Vec<Vec<BasisKet>> = Vec::new();
    for d in 0..=cfg.max_degree {
        let kets = enumerate_level(&pr, d, cfg.capacity)?;
        out.extend(kets.iter().map(|k| State::from_ket(pr, k.clone())));
        shells.push(kets);
    }
    for _ in 0..cfg.random_states {
        let shell = &shells[rng.gen_range(0..shells.len())];
        let mut s = State::zero(pr);
        for _ in 0..rng.gen_range(1..=4) {
            let k = shell[rng.gen_range(0..shell.len())].clone();
            let c = Scalar::from_int(rng.gen_range(-3..=3))
                + Scalar::i() * Scalar::from_int(rng.gen_range(-3..=3))
                + Scalar::sqrt2() * Scalar::from_int(rng.gen_range(-2..=2));
            s.add_term(k, &c);
        }
        if !s.is_zero() {
            out.push(s);
        }
    }
    Ok(out)
}

fn check_zero(report: &mut SuiteReport, op: &CompiledOp, states: &[State], what: &dyn Fn() -> String) {
    for v in states {
        let out = op.apply(v);
        report.check(out.is_zero(), || format!("{} on {v} leaves {out}", what()), Some(v));
    }
}

fn algebra(cfg: &VerifyConfig) -> Result<SuiteReport> {
    let pr = cfg.params;
    let n = pr.n();
    let states = sample(cfg)?;
    let mut report = SuiteReport::new(Suite::Algebra);
    let b = Operator::Annihilator;
    let bd = Operator::Creator;
    for a in 1..=n {
        for be in 1..=n {
            for g in 1..=n {
                let two_delta = Scalar::from_int(if be == g { 2 } else { 0 });
                let relations = [
                    (
                        "[{b_a, b†_b}, b_c] + 2δ_bc b_a",
                        Operator::Sum(vec![
                            Operator::commutator(Operator::anticommutator(b(a), bd(be)), b(g)),
                            Operator::scaled(two_delta.clone(), b(a)),
                        ]),
                    ),
                    (
                        "[{b†_a, b_b}, b†_c] − 2δ_bc b†_a",
                        Operator::Sum(vec![
                            Operator::commutator(Operator::anticommutator(bd(a), b(be)), bd(g)),
                            Operator::scaled(-&two_delta, bd(a)),
                        ]),
                    ),
                    ("[{b†_a, b†_b}, b†_c]", Operator::commutator(Operator::anticommutator(bd(a), bd(be)), bd(g))),
                    ("[{b_a, b_b}, b_c]", Operator::commutator(Operator::anticommutator(b(a), b(be)), b(g))),
                ];
                for (name, op) in relations {
                    let op = op.compile(&pr)?;
                    check_zero(&mut report, &op, &states, &|| format!("{name} with (a,b,c) = ({a},{be},{g})"));
                }
            }
        }
    }
    Ok(report)
}

fn gauge(cfg: &VerifyConfig) -> Result<SuiteReport> {
    let pr = cfg.params;
    let p = pr.p();
    let states = sample(cfg)?;
    let mut report = SuiteReport::new(Suite::Gauge);
    for x in 1..=p {
        for y in x + 1..=p {
            let anti = Operator::Sum(vec![Operator::Gauge(x, y), Operator::Gauge(y, x)]).compile(&pr)?;
            check_zero(&mut report, &anti, &states, &|| format!("G^{x}{y} + G^{y}{x}"));
            for alpha in 1..=pr.n() {
                for (name, odd) in [("b", Operator::Annihilator(alpha)), ("b†", Operator::Creator(alpha))] {
                    let c = Operator::commutator(Operator::Gauge(x, y), odd).compile(&pr)?;
                    check_zero(&mut report, &c, &states, &|| format!("[G^{x}{y}, {name}_{alpha}]"));
                }
            }
        }
    }
    let g = |x: usize, y: usize| (x != y).then_some(Operator::Gauge(x, y));
    for a in 1..=p {
        for b in a + 1..=p {
            for c in 1..=p {
                for d in c + 1..=p {
                    let mut terms = vec![Operator::commutator(Operator::Gauge(a, b), Operator::Gauge(c, d))];
                    for (cond, sign, op) in
                        [(b == c, 1, g(a, d)), (a == c, -1, g(b, d)), (b == d, -1, g(a, c)), (a == d, 1, g(b, c))]
                    {
                        if let (true, Some(op)) = (cond, op) {
                            terms.push(Operator::scaled(Scalar::i() * Scalar::from_int(sign), op));
                        }
                    }
                    let op = Operator::Sum(terms).compile(&pr)?;
                    check_zero(&mut report, &op, &states, &|| format!("structure constants for [G^{a}{b}, G^{c}{d}]"));
                }
            }
        }
    }
    Ok(report)
}

fn lemma1(cfg: &VerifyConfig) -> Result<SuiteReport> {
    let mut report = SuiteReport::new(Suite::Lemma1);
    let mut dec = Decomposer::new(cfg.params, cfg.capacity)?;
    if let Some(rows) = report.absorb(dec.lemma1_check(cfg.max_degree))? {
        for row in rows {
            report.check(
                row.coincide && row.dim_q_eq_e == row.dim_vacuum,
                || {
                    format!(
                        "degree {}: dim ker(Q − E) = {}, dim V0 = {}, same span: {}",
                        row.degree, row.dim_q_eq_e, row.dim_vacuum, row.coincide
                    )
                },
                None,
            );
        }
    }
    Ok(report)
}

fn theorem1(cfg: &VerifyConfig) -> Result<SuiteReport> {
    let pr = cfg.params;
    let mut report = SuiteReport::new(Suite::Theorem1);
    let mut dec = Decomposer::new(pr, cfg.capacity)?;
    let Some(table) = report.absorb(dec.joint_lw_hw_table(cfg.max_degree))? else { return Ok(report) };
    let mut killers: Vec<CompiledOp> = Vec::new();
    for a in 1..=pr.n() {
        killers.push(Operator::Annihilator(a).compile(&pr)?);
    }
    for r in positive_gauge_roots(&pr) {
        killers.push(Operator::GaugeRoot(r).compile(&pr)?);
    }
    for row in &table.rows {
        report.check(
            signature_bijection(&row.osp, &pr).as_ref() == Some(&row.gauge),
            || format!("{} paired with σ = {}", row.osp, row.gauge),
            Some(&row.vector),
        );
        let Some(v) = report.absorb(build_lwhw_vector(&pr, &row.osp))? else { continue };
        report.check(
            row.vector.proportionality(&v).is_some(),
            || format!("explicit vector for {} differs from the kernel vector", row.osp),
            Some(&v),
        );
        for op in &killers {
            report.check(
                op.apply(&v).is_zero(),
                || format!("explicit vector for {} not annihilated", row.osp),
                Some(&v),
            );
        }
        // orbital part carries μ − (1/2, …, 1/2)
        let orb: Vec<Half> = row.mu.iter().map(|m| *m - Half::HALF).collect();
        let expect = Scalar::from_rational(casimir_value(pr.p(), &orb));
        let got = report.absorb(orbital_casimir_eigenvalue(&row.vector))?;
        report.check(
            got.as_ref() == Some(&expect),
            || format!("orbital Casimir of {} is {got:?}, expected {expect}", row.osp),
            Some(&row.vector),
        );
    }
    Ok(report)
}

fn corollary1(cfg: &VerifyConfig) -> Result<SuiteReport> {
    let mut report = SuiteReport::new(Suite::Corollary1);
    let mut dec = Decomposer::new(cfg.params, cfg.capacity)?;
    if let Some(rows) = report.absorb(dec.multiplicity_check(cfg.max_degree))? {
        for row in rows {
            report.check(
                row.agrees(),
                || {
                    format!(
                        "degree {} {}: counted {}, gauge dimension {}",
                        row.degree, row.osp, row.counted, row.claimed
                    )
                },
                None,
            );
        }
    }
    Ok(report)
}

fn theorem2(cfg: &VerifyConfig) -> Result<SuiteReport> {
    let mut report = SuiteReport::new(Suite::Theorem2);
    let n = cfg.params.n();
    let mut dec = Decomposer::new(cfg.params, cfg.capacity)?;
    if let Some(rows) = report.absorb(dec.theorem2_check(cfg.max_degree))? {
        for row in rows {
            report.check(row.sp_lowest > 0, || format!("component μ_orb = {:?} is empty", row.mu_orb), None);
            report.check(
                row.mu_orb.iter().skip(n).all(|&x| x == 0),
                || format!("μ_orb = {:?} has more than {n} rows", row.mu_orb),
                None,
            );
        }
    }
    Ok(report)
}
