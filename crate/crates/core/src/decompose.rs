//! Decomposition of degree shells into `osp(1|2n)` lowest-weight and gauge
//! highest-weight vectors.
//!
//! Every operator used here commutes with one of the two Cartan subalgebras,
//! so a shell is split into blocks of fixed osp weight `λ` and gauge weight
//! `w` and all kernels are computed block by block.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::rc::Rc;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::{
    enumerate_level, BasisKet, GaugeWeight, ModelParams, OrbitalMonomial, OspWeight, Sign, SpinState, State,
};
use crate::generators::{negative_gauge_roots, positive_gauge_roots, CompiledOp, EvenKind, EvenOpLabel, Operator};
use crate::half::{format_halves, Half};
use crate::linalg::{kernel_on_kets, kernel_on_span, same_span};
use crate::scalar::{Rational, Scalar};

/// `osp(1|2n)` signature: `d = λ_1` and `s_α = λ_{α+1} − λ_α`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct OspSignature {
    pub d: Half,
    pub s: Vec<u64>,
}

impl OspSignature {
    pub fn new(d: Half, s: Vec<u64>) -> Self {
        OspSignature { d, s }
    }

    /// Read off a lowest weight `λ_1 ≤ λ_2 ≤ …`.
    pub fn from_weight(w: &OspWeight) -> Result<Self> {
        let l = &w.0;
        let Some(&d) = l.first() else {
            return Err(Error::InvalidLabel("empty osp weight".into()));
        };
        let mut s = Vec::with_capacity(l.len() - 1);
        for pair in l.windows(2) {
            match (pair[1] - pair[0]).to_integer() {
                Some(x) if x >= 0 => s.push(x as u64),
                _ => return Err(Error::NonDominant(format!("osp weight {w} is not a lowest weight"))),
            }
        }
        Ok(OspSignature { d, s })
    }

    /// The lowest weight `λ`.
    pub fn lowest_weight(&self) -> OspWeight {
        let mut out = vec![self.d];
        for &x in &self.s {
            let last = *out.last().unwrap();
            out.push(last + Half::from_int(x as i64));
        }
        OspWeight(out)
    }

    pub fn n(&self) -> usize {
        self.s.len() + 1
    }

    /// `s_0 = d − p/2`.
    pub fn s0(&self, p: usize) -> Half {
        self.d - Half::from_twice(p as i64)
    }

    /// Orbital degree `Σ_α (λ_α − p/2)` of the lowest-weight vector.
    pub fn degree(&self, p: usize) -> Option<usize> {
        let half_p = Half::from_twice(p as i64);
        let mut total = 0i64;
        for l in self.lowest_weight().0 {
            let x = (l - half_p).to_integer()?;
            if x < 0 {
                return None;
            }
            total += x;
        }
        Some(total as usize)
    }

    /// Energy `Σ_α λ_α` of the lowest-weight vector.
    pub fn energy(&self) -> Half {
        self.lowest_weight().0.into_iter().fold(Half::ZERO, |a, b| a + b)
    }
}

impl fmt::Display for OspSignature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.s.is_empty() {
            write!(f, "[{}]", self.d)
        } else {
            let s: Vec<String> = self.s.iter().map(|x| x.to_string()).collect();
            write!(f, "[{}; {}]", self.d, s.join(","))
        }
    }
}

impl FromStr for OspSignature {
    type Err = Error;

    /// Accepts `[d]`, `[d; s1,s2]` and the same without brackets.
    fn from_str(text: &str) -> Result<Self> {
        let t = text.trim().trim_start_matches('[').trim_end_matches(']');
        let (d, rest) = match t.split_once(';') {
            Some((d, rest)) => (d, rest),
            None => (t, ""),
        };
        let d: Half = d.parse()?;
        let s = rest
            .split(',')
            .map(str::trim)
            .filter(|x| !x.is_empty())
            .map(|x| x.parse::<u64>().map_err(|_| Error::Parse(format!("bad signature entry {x:?} in {text:?}"))))
            .collect::<Result<Vec<_>>>()?;
        if d <= Half::ZERO {
            return Err(Error::Parse(format!("signature needs d > 0: {text:?}")));
        }
        Ok(OspSignature { d, s })
    }
}

/// Gauge signature `σ`; `μ^q = σ^q + 1/2`, `μ^k = μ^{k+1} + σ^k`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GaugeSignature {
    pub sigma: Vec<u64>,
}

impl GaugeSignature {
    pub fn new(sigma: Vec<u64>) -> Self {
        GaugeSignature { sigma }
    }

    pub fn mu(&self) -> Vec<Half> {
        let q = self.sigma.len();
        let mut mu = vec![Half::HALF; q];
        let mut acc = Half::HALF;
        for k in (0..q).rev() {
            acc = acc + Half::from_int(self.sigma[k] as i64);
            mu[k] = acc;
        }
        mu
    }

    /// Inverse of [`GaugeSignature::mu`] for spinorial `μ_1 ≥ … ≥ μ_q ≥ 1/2`.
    pub fn from_mu(mu: &[Half]) -> Result<Self> {
        let bad = || Error::NonDominant(format!("({}) is not a spinorial highest weight", format_halves(mu)));
        let q = mu.len();
        let mut sigma = vec![0u64; q];
        for k in 0..q {
            let next = if k + 1 < q { mu[k + 1] } else { Half::HALF };
            match (mu[k] - next).to_integer() {
                Some(x) if x >= 0 => sigma[k] = x as u64,
                _ => return Err(bad()),
            }
        }
        Ok(GaugeSignature { sigma })
    }
}

impl fmt::Display for GaugeSignature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.sigma.iter().map(|x| x.to_string()).collect();
        write!(f, "({})", s.join(","))
    }
}

/// `(s_0, s_1, …, s_{n−1})` with `s_0 = d − p/2`, if `s_0` is a nonnegative integer.
fn full_s(lambda: &OspSignature, p: usize) -> Option<Vec<u64>> {
    let s0 = lambda.s0(p).to_integer()?;
    if s0 < 0 {
        return None;
    }
    let mut out = vec![s0 as u64];
    out.extend_from_slice(&lambda.s);
    Some(out)
}

/// `σ_k = s_{n−k}` with `s_0 = d − p/2`; `None` when no vector of this type exists.
pub fn signature_bijection(lambda: &OspSignature, params: &ModelParams) -> Option<GaugeSignature> {
    let n = params.n();
    let q = params.q();
    if lambda.n() != n {
        return None;
    }
    let s = full_s(lambda, params.p())?;
    // s_α with α < n − q would need more than q antisymmetrized columns
    if n > q && s[..n - q].iter().any(|&x| x > 0) {
        return None;
    }
    let sigma = (1..=q).map(|k| if k <= n { s[n - k] } else { 0 }).collect();
    Some(GaugeSignature { sigma })
}

/// Inverse of [`signature_bijection`].
pub fn osp_from_gauge(sigma: &GaugeSignature, params: &ModelParams) -> Option<OspSignature> {
    let n = params.n();
    let q = params.q();
    if sigma.sigma.len() != q || sigma.sigma.iter().skip(n).any(|&x| x > 0) {
        return None;
    }
    let mut s = vec![0u64; n];
    for k in 1..=q.min(n) {
        s[n - k] = sigma.sigma[k - 1];
    }
    let d = Half::from_int(s[0] as i64) + Half::from_twice(params.p() as i64);
    Some(OspSignature { d, s: s[1..].to_vec() })
}

fn permutations(j: usize) -> Vec<(Vec<usize>, i64)> {
    fn go(prefix: &mut Vec<usize>, rest: &mut Vec<usize>, sign: i64, out: &mut Vec<(Vec<usize>, i64)>) {
        if rest.is_empty() {
            out.push((prefix.clone(), sign));
            return;
        }
        for i in 0..rest.len() {
            let x = rest.remove(i);
            prefix.push(x);
            // moving element i to the front costs i transpositions
            go(prefix, rest, if i % 2 == 0 { sign } else { -sign }, out);
            prefix.pop();
            rest.insert(i, x);
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), &mut (0..j).collect(), 1, &mut out);
    out
}

type Poly = BTreeMap<Vec<u32>, BigInt>;

fn poly_mul(a: &Poly, b: &Poly) -> Poly {
    let mut out = Poly::new();
    for (ea, ca) in a {
        for (eb, cb) in b {
            let e: Vec<u32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
            let entry = out.entry(e).or_insert_with(BigInt::zero);
            *entry += ca * cb;
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

/// The explicit joint lowest/highest-weight vector
/// `∏_j (Σ_π sgn π A†_n^{π(1)+} ⋯ A†_{n−j+1}^{π(j)+})^{s_{n−j}} |0⟩ ⊗ ω(½,…,½)`,
/// normalized so the first ket has coefficient `+1`.
pub fn build_lwhw_vector(params: &ModelParams, lambda: &OspSignature) -> Result<State> {
    let n = params.n();
    if signature_bijection(lambda, params).is_none() {
        return Err(Error::Nonexistence(format!("no joint vector for signature {lambda} at {params}")));
    }
    let s = full_s(lambda, params.p()).expect("checked by the bijection");
    let vac = vec![0u32; params.num_modes()];
    let mut poly: Poly = [(vac.clone(), BigInt::one())].into_iter().collect();
    for j in 1..=n {
        let power = s[n - j];
        if power == 0 {
            continue;
        }
        let mut factor = Poly::new();
        if j <= params.q() {
            for (perm, sign) in permutations(j) {
                let mut e = vac.clone();
                for (i, &k) in perm.iter().enumerate() {
                    e[params.mode(n - 1 - i, k, Sign::Plus)] += 1;
                }
                *factor.entry(e).or_insert_with(BigInt::zero) += sign;
            }
        }
        for _ in 0..power {
            poly = poly_mul(&poly, &factor);
        }
    }
    let spin = SpinState::all_up(params.q());
    let terms = poly.into_iter().map(|(e, c)| {
        (BasisKet::new(OrbitalMonomial::from_exponents(e), spin), Scalar::from_rational(Rational::from_integer(c)))
    });
    let v = State::from_terms(*params, terms)?;
    if v.is_zero() {
        return Err(Error::ZeroVector(format!("antisymmetrized factor vanishes for {lambda} at {params}")));
    }
    v.normalized_leading()
}

/// `ρ` of `so(p)`: `q − k + 1/2` for odd `p`, `q − k` for even `p`.
fn rho(p: usize) -> Vec<Half> {
    let q = p / 2;
    (1..=q)
        .map(|k| if p % 2 == 1 { Half::from_twice(2 * (q - k) as i64 + 1) } else { Half::from_int((q - k) as i64) })
        .collect()
}

/// Positive roots of `so(p)` as integer vectors.
fn positive_roots(p: usize) -> Vec<Vec<i64>> {
    let q = p / 2;
    let mut out = Vec::new();
    for k in 0..q {
        for l in k + 1..q {
            let mut a = vec![0; q];
            a[k] = 1;
            a[l] = -1;
            out.push(a.clone());
            a[l] = 1;
            out.push(a);
        }
    }
    if p % 2 == 1 {
        for k in 0..q {
            let mut a = vec![0; q];
            a[k] = 1;
            out.push(a);
        }
    }
    out
}

/// Dominance for `so(p)`: `B_q` needs `μ_1 ≥ … ≥ μ_q ≥ 0`, `D_q` needs `μ_1 ≥ … ≥ μ_{q−1} ≥ |μ_q|`;
/// entries all integers or all half-odd.
pub fn is_dominant(p: usize, mu: &[Half]) -> bool {
    let q = p / 2;
    if mu.len() != q {
        return false;
    }
    if q == 0 {
        return true;
    }
    let integral = mu[0].is_integer();
    if mu.iter().any(|m| m.is_integer() != integral) {
        return false;
    }
    if mu.windows(2).take(q.saturating_sub(2)).any(|w| w[0] < w[1]) {
        return false;
    }
    if p % 2 == 1 {
        (q < 2 || mu[q - 2] >= mu[q - 1]) && mu[q - 1] >= Half::ZERO
    } else {
        q < 2 || mu[q - 2] >= mu[q - 1].abs()
    }
}

fn half_dot(a: &[Half], b: &[Half]) -> Rational {
    a.iter().zip(b).map(|(x, y)| Rational::new(BigInt::from(x.twice() * y.twice()), BigInt::from(4))).sum()
}

/// Casimir value `⟨μ, μ + 2ρ⟩` of `Σ_{a>b} (G^{ab})²`.
pub fn casimir_value(p: usize, mu: &[Half]) -> Rational {
    let r = rho(p);
    let shifted: Vec<Half> = mu.iter().zip(&r).map(|(m, r)| *m + *r + *r).collect();
    half_dot(mu, &shifted)
}

/// Weyl dimension of the `so(p)` irrep `μ`; with `pin`, doubled for even `p` and `μ^q > 0`.
pub fn weyl_dim(p: usize, mu: &[Half], pin: bool) -> Result<u128> {
    if !is_dominant(p, mu) {
        return Err(Error::NonDominant(format!("({}) for so({p})", format_halves(mu))));
    }
    let r = rho(p);
    let shifted: Vec<Half> = mu.iter().zip(&r).map(|(m, r)| *m + *r).collect();
    let mut num = Rational::one();
    let mut den = Rational::one();
    for a in positive_roots(p) {
        let pair = |v: &[Half]| -> Rational {
            v.iter().zip(&a).map(|(x, &c)| Rational::new(BigInt::from(x.twice() * c), BigInt::from(2))).sum()
        };
        num *= pair(&shifted);
        den *= pair(&r);
    }
    let dim = num / den;
    if !dim.is_integer() || !dim.is_positive() {
        return Err(Error::TheoremViolation(format!("Weyl formula gave {dim} for ({})", format_halves(mu))));
    }
    let mut dim = dim.to_integer().to_u128().expect("dimension fits u128");
    if pin && p.is_multiple_of(2) && mu.last().is_some_and(|m| *m > Half::ZERO) {
        dim *= 2;
    }
    Ok(dim)
}

/// `Σ_{a>b} (G^{ab})² v = c v`; returns `c` after checking it equals `⟨μ, μ+2ρ⟩`.
pub fn casimir_so_check(v: &State, mu: &GaugeWeight) -> Result<Scalar> {
    let image = Operator::Casimir.apply(v)?;
    let c = if image.is_zero() {
        if v.is_zero() {
            return Err(Error::ZeroState);
        }
        Scalar::zero()
    } else {
        image.proportionality(v).ok_or_else(|| Error::NotEigenvector("Casimir image is not proportional".into()))?
    };
    let expect = Scalar::from_rational(casimir_value(v.params().p(), &mu.0));
    if c != expect {
        return Err(Error::TheoremViolation(format!("Casimir eigenvalue {c}, expected {expect} for μ = {mu}")));
    }
    Ok(c)
}

/// `Σ_{a>b} (G^{ab}_orb)²` eigenvalue if `v` is an eigenvector.
pub fn orbital_casimir_eigenvalue(v: &State) -> Result<Scalar> {
    let image = Operator::CasimirOrbital.apply(v)?;
    if image.is_zero() {
        return Ok(Scalar::zero());
    }
    image.proportionality(v).ok_or_else(|| Error::NotEigenvector("orbital Casimir image is not proportional".into()))
}

/// Gauge highest-weight vectors of a gauge-invariant subspace.
///
/// For even `p`, vectors with `w^q < 0` are replaced by their image under
/// `I^p` and each Pin highest weight is reported once with `w^q > 0`.
pub fn gauge_hw_vectors(subspace: &[State]) -> Result<Vec<(GaugeWeight, State)>> {
    let Some(first) = subspace.first() else { return Ok(Vec::new()) };
    let params = *first.params();
    let degree = first.grade()?;
    for v in subspace {
        v.check_params(first)?;
        if v.grade()? != degree {
            return Err(Error::MixedDegree(degree, v.grade()?));
        }
    }
    let roots: Vec<CompiledOp> = positive_gauge_roots(&params)
        .into_iter()
        .map(|r| Operator::GaugeRoot(r).compile(&params))
        .collect::<Result<_>>()?;
    let mut by_weight: BTreeMap<GaugeWeight, Vec<State>> = BTreeMap::new();
    for v in subspace {
        for (w, c) in v.gauge_components() {
            by_weight.entry(w).or_default().push(c);
        }
    }
    let mut found: BTreeMap<GaugeWeight, Vec<State>> = BTreeMap::new();
    let even = !params.is_odd() && params.q() > 0;
    for (w, comps) in by_weight {
        let basis = independent(&comps);
        for h in kernel_on_span(&basis, &roots) {
            let (w, h) = if even && w.0[params.q() - 1] < Half::ZERO {
                let mut w2 = w.clone();
                let last = w2.0.len() - 1;
                w2.0[last] = -w2.0[last];
                (w2, Operator::Inversion(params.p()).apply(&h)?.normalized_leading()?)
            } else {
                (w.clone(), h)
            };
            let slot = found.entry(w).or_default();
            let mut trial = slot.clone();
            trial.push(h.clone());
            if crate::linalg::rank(&trial) > slot.len() {
                slot.push(h);
            }
        }
    }
    Ok(found.into_iter().flat_map(|(w, vs)| vs.into_iter().map(move |v| (w.clone(), v))).collect())
}

/// A maximal independent subset, in input order.
fn independent(vs: &[State]) -> Vec<State> {
    let mut out: Vec<State> = Vec::new();
    for v in vs {
        let mut trial = out.clone();
        trial.push(v.clone());
        if crate::linalg::rank(&trial) > out.len() {
            out.push(v.clone());
        }
    }
    out
}

/// One row of a decomposition table.
#[derive(Clone, Debug)]
pub struct ReportRow {
    pub degree: usize,
    pub energy: Half,
    pub osp: OspSignature,
    pub gauge: GaugeSignature,
    pub mu: Vec<Half>,
    pub gauge_dim: u128,
    pub vector: State,
}

#[derive(Clone, Debug)]
pub struct DecompositionReport {
    pub params: ModelParams,
    pub max_degree: usize,
    pub rows: Vec<ReportRow>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiplicityRow {
    pub degree: usize,
    pub osp: OspSignature,
    pub gauge: Option<GaugeSignature>,
    pub claimed: u128,
    pub counted: u128,
}

impl MultiplicityRow {
    pub fn agrees(&self) -> bool {
        self.claimed == self.counted
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lemma1Row {
    pub degree: usize,
    pub dim_q_eq_e: usize,
    pub dim_vacuum: usize,
    pub coincide: bool,
}

/// A subspace `V_{(μ_orb μ_spin) μ}` restricted to gauge highest-weight
/// vectors of weight `μ` at one degree.
#[derive(Clone, Debug)]
pub struct SpinOrbitComponent {
    pub degree: usize,
    pub mu: Vec<Half>,
    pub mu_orb: Vec<i64>,
    pub mu_spin: Vec<Half>,
    /// Basis split by osp weight.
    pub blocks: Vec<(OspWeight, Vec<State>)>,
    /// Number of orbital highest-weight vectors of weight `μ_orb` at this degree.
    pub orbital_multiplicity: usize,
}

impl SpinOrbitComponent {
    pub fn dim(&self) -> usize {
        self.blocks.iter().map(|(_, b)| b.len()).sum()
    }

    pub fn basis(&self) -> Vec<State> {
        self.blocks.iter().flat_map(|(_, b)| b.iter().cloned()).collect()
    }
}

#[derive(Clone, Debug)]
pub struct SpLowestWeight {
    pub osp_weight: OspWeight,
    pub mu_orb: Vec<i64>,
    pub vector: State,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Theorem2Row {
    pub mu: Vec<Half>,
    pub mu_orb: Vec<i64>,
    /// Lowest degree at which the component is nonzero.
    pub first_degree: usize,
    pub component_dim: usize,
    pub sp_lowest: usize,
}

type BlockKey = (OspWeight, GaugeWeight);

struct Block {
    kets: Vec<BasisKet>,
    vacuum: Vec<State>,
    lowest: Vec<State>,
}

struct Shell {
    blocks: BTreeMap<BlockKey, Block>,
}

/// Shell-by-shell decomposition for fixed model parameters, with compiled
/// operators and per-degree caches.
pub struct Decomposer {
    params: ModelParams,
    capacity: usize,
    annihilators: Vec<CompiledOp>,
    compact_lowering: Vec<CompiledOp>,
    positive_roots: Vec<CompiledOp>,
    orbital_roots: Vec<CompiledOp>,
    sp_lowering: Vec<CompiledOp>,
    shells: HashMap<usize, Rc<Shell>>,
}

impl Decomposer {
    pub fn new(params: ModelParams, capacity: usize) -> Result<Self> {
        let n = params.n();
        let compile = |op: Operator| op.compile(&params);
        let annihilators = (1..=n).map(|a| compile(Operator::Annihilator(a))).collect::<Result<Vec<_>>>()?;
        let mut compact = Vec::new();
        let mut sp = Vec::new();
        for a in 1..=n {
            for b in a..=n {
                sp.push(compile(Operator::Even(EvenOpLabel::new(EvenKind::AnnihAnnih, a, b)))?);
                if a < b {
                    let op = compile(Operator::Even(EvenOpLabel::new(EvenKind::CreateAnnih, b, a)))?;
                    compact.push(op.clone());
                    sp.push(op);
                }
            }
        }
        let labels = positive_gauge_roots(&params);
        let positive_roots = labels.iter().map(|&r| compile(Operator::GaugeRoot(r))).collect::<Result<Vec<_>>>()?;
        let orbital_roots =
            labels.iter().map(|&r| compile(Operator::GaugeRootOrbital(r))).collect::<Result<Vec<_>>>()?;
        Ok(Decomposer {
            params,
            capacity,
            annihilators,
            compact_lowering: compact,
            positive_roots,
            orbital_roots,
            sp_lowering: sp,
            shells: HashMap::new(),
        })
    }

    pub fn params(&self) -> &ModelParams {
        &self.params
    }

    fn shell(&mut self, d: usize) -> Result<Rc<Shell>> {
        if let Some(s) = self.shells.get(&d) {
            return Ok(s.clone());
        }
        let mut grouped: BTreeMap<BlockKey, Vec<BasisKet>> = BTreeMap::new();
        for k in enumerate_level(&self.params, d, self.capacity)? {
            grouped.entry((k.osp_weight(&self.params), k.gauge_weight(&self.params))).or_default().push(k);
        }
        let mut blocks = BTreeMap::new();
        for (key, kets) in grouped {
            let vacuum = kernel_on_kets(&kets, self.params, &self.annihilators);
            let lowest = kernel_on_span(&vacuum, &self.compact_lowering);
            blocks.insert(key, Block { kets, vacuum, lowest });
        }
        let shell = Rc::new(Shell { blocks });
        self.shells.insert(d, shell.clone());
        Ok(shell)
    }

    /// Basis of `V_0` within the degree-`d` shell.
    pub fn vacuum_subspace(&mut self, d: usize) -> Result<Vec<State>> {
        Ok(self.shell(d)?.blocks.values().flat_map(|b| b.vacuum.iter().cloned()).collect())
    }

    /// Basis of the `osp(1|2n)` lowest-weight vectors in the degree-`d` shell.
    pub fn osp_lowest_vectors(&mut self, d: usize) -> Result<Vec<State>> {
        Ok(self.shell(d)?.blocks.values().flat_map(|b| b.lowest.iter().cloned()).collect())
    }

    fn pin_partner_weight(&self, w: &GaugeWeight) -> Option<GaugeWeight> {
        let q = self.params.q();
        if self.params.is_odd() || q == 0 || w.0[q - 1] > Half::ZERO {
            return None;
        }
        let mut w2 = w.clone();
        w2.0[q - 1] = -w2.0[q - 1];
        Some(w2)
    }

    /// Joint osp-lowest / gauge-highest weight table up to `max_degree`.
    ///
    /// Fails with a theorem violation if a `(λ, μ)` group has dimension above
    /// one, if a highest weight is not dominant, or if a pair breaks `σ_k = s_{n−k}`.
    pub fn joint_lw_hw_table(&mut self, max_degree: usize) -> Result<DecompositionReport> {
        let p = self.params.p();
        let mut rows = Vec::new();
        for d in 0..=max_degree {
            let shell = self.shell(d)?;
            let mut joint: BTreeMap<&BlockKey, Vec<State>> = BTreeMap::new();
            for (key, block) in &shell.blocks {
                let hw = kernel_on_span(&block.lowest, &self.positive_roots);
                if hw.len() > 1 {
                    return Err(Error::TheoremViolation(format!(
                        "joint lw/hw group λ = {}, w = {} has dimension {} at degree {d}",
                        key.0,
                        key.1,
                        hw.len()
                    )));
                }
                if !hw.is_empty() {
                    joint.insert(key, hw);
                }
            }
            for (key, hw) in &joint {
                let (lambda, w) = *key;
                if !is_dominant(p, &w.0) {
                    return Err(Error::TheoremViolation(format!("highest weight {w} is not dominant (degree {d})")));
                }
                if let Some(w2) = self.pin_partner_weight(w) {
                    // reported through its partner; check the partner is there
                    let image = Operator::Inversion(p).apply(&hw[0])?;
                    let partner = joint.get(&(lambda.clone(), w2.clone()));
                    if !partner.is_some_and(|v| v[0].proportionality(&image).is_some()) {
                        return Err(Error::TheoremViolation(format!("Pin partner of {w} missing at λ = {lambda}")));
                    }
                    continue;
                }
                let osp = OspSignature::from_weight(lambda).map_err(|e| {
                    Error::TheoremViolation(format!("joint vector has non-lowest osp weight {lambda}: {e}"))
                })?;
                let gauge = GaugeSignature::from_mu(&w.0)
                    .map_err(|e| Error::TheoremViolation(format!("joint vector weight {w}: {e}")))?;
                match signature_bijection(&osp, &self.params) {
                    Some(expected) if expected == gauge => {}
                    other => {
                        return Err(Error::TheoremViolation(format!(
                            "pair {osp} / σ = {gauge} breaks σ_k = s_(n−k) (expected {})",
                            other.map(|g| g.to_string()).unwrap_or_else(|| "nonexistence".into())
                        )))
                    }
                }
                rows.push(ReportRow {
                    degree: d,
                    energy: self.params.vacuum_energy() + Half::from_int(d as i64),
                    gauge_dim: weyl_dim(p, &w.0, true)?,
                    mu: w.0.clone(),
                    osp,
                    gauge,
                    vector: hw[0].clone(),
                });
            }
        }
        Ok(DecompositionReport { params: self.params, max_degree, rows })
    }

    /// Compare, per osp lowest weight, the number of lowest-weight vectors with
    /// the gauge irrep dimension of its bijection partner.
    pub fn multiplicity_check(&mut self, max_degree: usize) -> Result<Vec<MultiplicityRow>> {
        let p = self.params.p();
        let mut out = Vec::new();
        for d in 0..=max_degree {
            let shell = self.shell(d)?;
            let mut counts: BTreeMap<&OspWeight, u128> = BTreeMap::new();
            for ((lambda, _), block) in &shell.blocks {
                *counts.entry(lambda).or_default() += block.lowest.len() as u128;
            }
            for (lambda, counted) in counts {
                let Ok(osp) = OspSignature::from_weight(lambda) else {
                    if counted > 0 {
                        return Err(Error::TheoremViolation(format!("lowest-weight vectors with weight {lambda}")));
                    }
                    continue;
                };
                let gauge = signature_bijection(&osp, &self.params);
                let claimed = match &gauge {
                    Some(g) => weyl_dim(p, &g.mu(), true)?,
                    None => 0,
                };
                if claimed == 0 && counted == 0 {
                    continue;
                }
                out.push(MultiplicityRow { degree: d, osp, gauge, claimed, counted });
            }
        }
        Ok(out)
    }

    /// Per shell: `ker(Q − E)` against `V_0`, block by block.
    pub fn lemma1_check(&mut self, max_degree: usize) -> Result<Vec<Lemma1Row>> {
        let q_minus_e = Operator::Sum(vec![Operator::Q, Operator::scaled(Scalar::from_int(-1), Operator::Energy)])
            .compile(&self.params)?;
        let mut out = Vec::new();
        for d in 0..=max_degree {
            let shell = self.shell(d)?;
            let mut row = Lemma1Row { degree: d, dim_q_eq_e: 0, dim_vacuum: 0, coincide: true };
            for block in shell.blocks.values() {
                let kernel = kernel_on_kets(&block.kets, self.params, std::slice::from_ref(&q_minus_e));
                row.dim_q_eq_e += kernel.len();
                row.dim_vacuum += block.vacuum.len();
                row.coincide &= same_span(&kernel, &block.vacuum);
            }
            out.push(row);
        }
        Ok(out)
    }

    /// Orbital highest-weight vectors of weight `mu_orb` at degree `d`
    /// (spin factor held at `ω(½,…,½)`).
    fn orbital_hw_multiplicity(&mut self, d: usize, mu_orb: &[i64]) -> Result<usize> {
        let shell = self.shell(d)?;
        let up = SpinState::all_up(self.params.q());
        let kets: Vec<BasisKet> = shell
            .blocks
            .values()
            .flat_map(|b| b.kets.iter())
            .filter(|k| k.spin == up && k.orb.gauge_weight(&self.params) == mu_orb)
            .cloned()
            .collect();
        Ok(kernel_on_kets(&kets, self.params, &self.orbital_roots).len())
    }

    /// Split the gauge highest-weight vectors of weight `mu` at degree `d`
    /// by orbital highest weight.
    pub fn spin_orbit_components(&mut self, d: usize, mu: &GaugeWeight) -> Result<Vec<SpinOrbitComponent>> {
        let p = self.params.p();
        let q = self.params.q();
        let n = self.params.n();
        if mu.0.len() != q {
            return Err(Error::InvalidLabel(format!("gauge weight {mu} needs {q} entries")));
        }
        let shell = self.shell(d)?;
        // candidate orbital weights μ − v, v ∈ {±1/2}^q
        let mut candidates: Vec<Vec<i64>> = Vec::new();
        for mask in 0u32..(1 << q) {
            let orb: Vec<Half> =
                (0..q).map(|k| mu.0[k] - if mask >> k & 1 == 0 { Half::HALF } else { -Half::HALF }).collect();
            if orb.iter().all(|h| h.is_integer()) && is_dominant(p, &orb) {
                candidates.push(orb.iter().map(|h| h.to_integer().unwrap()).collect());
            }
        }
        let values: Vec<Rational> = candidates
            .iter()
            .map(|c| casimir_value(p, &c.iter().map(|&x| Half::from_int(x)).collect::<Vec<_>>()))
            .collect();
        for i in 0..values.len() {
            for j in 0..i {
                if values[i] == values[j] {
                    return Err(Error::TheoremViolation(format!(
                        "orbital Casimir cannot separate {:?} and {:?}",
                        candidates[i], candidates[j]
                    )));
                }
            }
        }
        let projectors: Vec<CompiledOp> = values
            .iter()
            .map(|c| {
                Operator::Sum(vec![
                    Operator::CasimirOrbital,
                    Operator::scaled(-&Scalar::from_rational(c.clone()), Operator::Identity),
                ])
                .compile(&self.params)
            })
            .collect::<Result<_>>()?;
        let mut comps: Vec<Vec<(OspWeight, Vec<State>)>> = vec![Vec::new(); candidates.len()];
        for ((lambda, w), block) in &shell.blocks {
            if w != mu {
                continue;
            }
            let hw = kernel_on_kets(&block.kets, self.params, &self.positive_roots);
            if hw.is_empty() {
                continue;
            }
            let mut total = 0;
            for (i, proj) in projectors.iter().enumerate() {
                let part = kernel_on_span(&hw, std::slice::from_ref(proj));
                total += part.len();
                if !part.is_empty() {
                    comps[i].push((lambda.clone(), part));
                }
            }
            if total != hw.len() {
                return Err(Error::NotEigenvector(format!(
                    "orbital Casimir does not split the weight-{mu} highest-weight space at λ = {lambda}"
                )));
            }
        }
        let mut out = Vec::new();
        for (mu_orb, blocks) in candidates.into_iter().zip(comps) {
            if blocks.is_empty() {
                continue;
            }
            if mu_orb.iter().skip(n).any(|&x| x != 0) {
                return Err(Error::TheoremViolation(format!(
                    "orbital highest weight {mu_orb:?} has more than {n} rows"
                )));
            }
            let orbital_multiplicity = self.orbital_hw_multiplicity(d, &mu_orb)?;
            let comp = SpinOrbitComponent {
                degree: d,
                mu: mu.0.clone(),
                mu_orb,
                mu_spin: vec![Half::HALF; q],
                blocks,
                orbital_multiplicity,
            };
            if comp.dim() != comp.orbital_multiplicity {
                return Err(Error::TheoremViolation(format!(
                    "component μ_orb = {:?} has dimension {} but {} orbital highest-weight vectors",
                    comp.mu_orb,
                    comp.dim(),
                    comp.orbital_multiplicity
                )));
            }
            out.push(comp);
        }
        Ok(out)
    }

    /// `sp(2n)` lowest-weight vectors inside each spin-orbit component.
    pub fn sp_lowest_weights(&mut self, d: usize, mu: &GaugeWeight) -> Result<Vec<SpLowestWeight>> {
        let comps = self.spin_orbit_components(d, mu)?;
        let mut out = Vec::new();
        for comp in &comps {
            out.extend(self.sp_lowest_in(comp));
        }
        Ok(out)
    }

    fn sp_lowest_in(&self, comp: &SpinOrbitComponent) -> Vec<SpLowestWeight> {
        let mut out = Vec::new();
        for (lambda, basis) in &comp.blocks {
            for v in kernel_on_span(basis, &self.sp_lowering) {
                out.push(SpLowestWeight { osp_weight: lambda.clone(), mu_orb: comp.mu_orb.clone(), vector: v });
            }
        }
        out
    }

    /// Every spin-orbit component hosts an `sp(2n)` lowest-weight vector at
    /// the lowest degree where it appears, and every orbital highest weight
    /// has at most `n` nonzero rows.
    pub fn theorem2_check(&mut self, max_degree: usize) -> Result<Vec<Theorem2Row>> {
        let p = self.params.p();
        let mut mus: BTreeSet<GaugeWeight> = BTreeSet::new();
        for d in 0..=max_degree {
            for (_, w) in self.shell(d)?.blocks.keys() {
                if is_dominant(p, &w.0) && self.pin_partner_weight(w).is_none() {
                    mus.insert(w.clone());
                }
            }
        }
        let mut rows = Vec::new();
        for mu in mus {
            let mut seen: BTreeSet<Vec<i64>> = BTreeSet::new();
            for d in 0..=max_degree {
                for comp in self.spin_orbit_components(d, &mu)? {
                    if !seen.insert(comp.mu_orb.clone()) {
                        continue;
                    }
                    let sp = self.sp_lowest_in(&comp);
                    if sp.is_empty() {
                        return Err(Error::TheoremViolation(format!(
                            "component μ = {mu}, μ_orb = {:?} has no sp(2n) lowest-weight vector at degree {d}",
                            comp.mu_orb
                        )));
                    }
                    rows.push(Theorem2Row {
                        mu: mu.0.clone(),
                        mu_orb: comp.mu_orb.clone(),
                        first_degree: d,
                        component_dim: comp.dim(),
                        sp_lowest: sp.len(),
                    });
                }
            }
        }
        Ok(rows)
    }

    /// osp signatures with a joint vector of energy at most `cutoff`.
    pub fn realizable_signatures(&mut self, cutoff: Half) -> Result<BTreeSet<OspSignature>> {
        let room = cutoff - self.params.vacuum_energy();
        if room < Half::ZERO {
            return Ok(BTreeSet::new());
        }
        let max_degree = (room.twice() / 2) as usize;
        Ok(self.joint_lw_hw_table(max_degree)?.rows.into_iter().map(|r| r.osp).collect())
    }

    /// Negative gauge roots compiled, for generating gauge submodules.
    pub(crate) fn all_root_ops(&self) -> Result<Vec<CompiledOp>> {
        let mut ops = self.positive_roots.clone();
        for r in negative_gauge_roots(&self.params) {
            ops.push(Operator::GaugeRoot(r).compile(&self.params)?);
        }
        Ok(ops)
    }
}

pub fn vacuum_subspace(params: &ModelParams, d: usize) -> Result<Vec<State>> {
    Decomposer::new(*params, crate::fock::DEFAULT_CAPACITY)?.vacuum_subspace(d)
}

pub fn osp_lowest_vectors(params: &ModelParams, d: usize) -> Result<Vec<State>> {
    Decomposer::new(*params, crate::fock::DEFAULT_CAPACITY)?.osp_lowest_vectors(d)
}

pub fn joint_lw_hw_table(params: &ModelParams, max_degree: usize) -> Result<DecompositionReport> {
    Decomposer::new(*params, crate::fock::DEFAULT_CAPACITY)?.joint_lw_hw_table(max_degree)
}

pub fn multiplicity_check(params: &ModelParams, max_degree: usize) -> Result<Vec<MultiplicityRow>> {
    Decomposer::new(*params, crate::fock::DEFAULT_CAPACITY)?.multiplicity_check(max_degree)
}

pub fn spin_orbit_components(params: &ModelParams, d: usize, mu: &GaugeWeight) -> Result<Vec<SpinOrbitComponent>> {
    Decomposer::new(*params, crate::fock::DEFAULT_CAPACITY)?.spin_orbit_components(d, mu)
}

pub fn sp_lowest_weights(params: &ModelParams, d: usize, mu: &GaugeWeight) -> Result<Vec<SpLowestWeight>> {
    Decomposer::new(*params, crate::fock::DEFAULT_CAPACITY)?.sp_lowest_weights(d, mu)
}

/// Span of the gauge orbit of `v` under all root vectors and Cartan projections.
pub fn gauge_submodule(v: &State) -> Result<Vec<State>> {
    let dec = Decomposer::new(*v.params(), crate::fock::DEFAULT_CAPACITY)?;
    let ops = dec.all_root_ops()?;
    let mut basis: Vec<State> = Vec::new();
    let mut frontier: Vec<State> = v.gauge_components().into_values().collect();
    while let Some(x) = frontier.pop() {
        let mut trial = basis.clone();
        trial.push(x.clone());
        if crate::linalg::rank(&trial) == basis.len() {
            continue;
        }
        basis.push(x.clone());
        for op in &ops {
            let y = op.apply(&x);
            if !y.is_zero() {
                frontier.push(y);
            }
        }
    }
    Ok(basis)
}
