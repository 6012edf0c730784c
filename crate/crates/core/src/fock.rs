//! The representation space: `p` copies of the `n`-dimensional oscillator
//! Fock space tensored with the Clifford module.
//!
//! Orbital modes are written in the `A^{k±}` basis (plus the unpaired mode
//! `b^p` when `p` is odd), so both the `u(n)` Cartan generators and the
//! gauge Cartan generators `G^{2k-1,2k}` act diagonally. A ket is an
//! unnormalized monomial `∏ (A†)^e |0⟩ ⊗ ω(s)`; its squared norm is `∏ e!`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::half::Half;
use crate::scalar::{Rational, Scalar};

/// Default bound on the number of kets in one degree shell.
pub const DEFAULT_CAPACITY: usize = 250_000;

/// `n` parabose pairs realized at ansatz order `p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ModelParams {
    n: usize,
    p: usize,
}

impl ModelParams {
    pub fn new(n: usize, p: usize) -> Result<Self> {
        if n == 0 || p == 0 {
            return Err(Error::InvalidParams(format!("need n >= 1 and p >= 1, got n = {n}, p = {p}")));
        }
        if p / 2 > 31 {
            return Err(Error::InvalidParams(format!("p = {p} too large (q must be at most 31)")));
        }
        Ok(ModelParams { n, p })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn p(&self) -> usize {
        self.p
    }

    /// Rank of the gauge algebra, `floor(p/2)`.
    pub fn q(&self) -> usize {
        self.p / 2
    }

    /// `p mod 2`.
    pub fn eps(&self) -> usize {
        self.p % 2
    }

    pub fn is_odd(&self) -> bool {
        self.eps() == 1
    }

    pub fn num_modes(&self) -> usize {
        self.n * self.p
    }

    pub fn spin_dim(&self) -> usize {
        1 << self.q()
    }

    // Mode layout: alpha-major, then k, then +/-, then the odd mode.
    pub(crate) fn mode(&self, alpha: usize, k: usize, sign: Sign) -> usize {
        self.p * alpha + 2 * k + sign.offset()
    }

    pub(crate) fn odd_mode(&self, alpha: usize) -> usize {
        debug_assert!(self.is_odd());
        self.p * alpha + 2 * self.q()
    }

    /// Number of kets of total orbital degree `d`.
    pub fn shell_size(&self, d: usize) -> u128 {
        binomial((self.num_modes() + d - 1) as u128, d as u128) * self.spin_dim() as u128
    }

    /// `np/2`, the energy of the Fock vacuum.
    pub fn vacuum_energy(&self) -> Half {
        Half::from_twice((self.n * self.p) as i64)
    }

    pub(crate) fn check_alpha(&self, alpha: usize) -> Result<usize> {
        if alpha == 0 || alpha > self.n {
            return Err(Error::IndexOutOfRange(format!("alpha = {alpha} outside 1..={}", self.n)));
        }
        Ok(alpha - 1)
    }

    pub(crate) fn check_k(&self, k: usize) -> Result<usize> {
        if k == 0 || k > self.q() {
            return Err(Error::IndexOutOfRange(format!("k = {k} outside 1..={}", self.q())));
        }
        Ok(k - 1)
    }

    pub(crate) fn check_a(&self, a: usize) -> Result<usize> {
        if a == 0 || a > self.p {
            return Err(Error::IndexOutOfRange(format!("a = {a} outside 1..={}", self.p)));
        }
        Ok(a - 1)
    }
}

impl fmt::Display for ModelParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n={}, p={}", self.n, self.p)
    }
}

pub fn binomial(n: u128, k: u128) -> u128 {
    let k = k.min(n.saturating_sub(k));
    (0..k).fold(1u128, |acc, i| acc * (n - i) / (i + 1))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    fn offset(self) -> usize {
        match self {
            Sign::Plus => 0,
            Sign::Minus => 1,
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    pub fn as_i64(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
        }
    }
}

/// Clifford-module basis label `ω(s¹,…,s^q)`, each `s^k = ±1/2`.
///
/// Stored as a bit mask of the entries equal to `-1/2`, so the all-up state
/// sorts first.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SpinState {
    len: u8,
    down: u32,
}

impl SpinState {
    pub fn all_up(q: usize) -> Self {
        SpinState { len: q as u8, down: 0 }
    }

    /// Build from signs, `+1` meaning `s = +1/2` and `-1` meaning `s = -1/2`.
    pub fn from_signs(signs: &[i8]) -> Result<Self> {
        let mut down = 0u32;
        for (k, &s) in signs.iter().enumerate() {
            match s {
                1 => {}
                -1 => down |= 1 << k,
                _ => return Err(Error::Parse(format!("spin entry must be +1 or -1, got {s}"))),
            }
        }
        if signs.len() > 31 {
            return Err(Error::Parse("too many spin entries".into()));
        }
        Ok(SpinState { len: signs.len() as u8, down })
    }

    pub fn len(&self) -> usize {
        self.len as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// `2 s^k` for zero-based `k`.
    pub fn two_s(&self, k: usize) -> i64 {
        if self.down & (1 << k) == 0 {
            1
        } else {
            -1
        }
    }

    pub fn is_up(&self, k: usize) -> bool {
        self.down & (1 << k) == 0
    }

    pub(crate) fn flipped(&self, k: usize) -> Self {
        SpinState { len: self.len, down: self.down ^ (1 << k) }
    }

    pub fn signs(&self) -> Vec<i8> {
        (0..self.len()).map(|k| self.two_s(k) as i8).collect()
    }

    pub fn weights(&self) -> Vec<Half> {
        (0..self.len()).map(|k| Half::from_twice(self.two_s(k))).collect()
    }

    /// All `2^q` spin states in ket order.
    pub fn all(q: usize) -> Vec<SpinState> {
        (0..1u32 << q).map(|down| SpinState { len: q as u8, down }).collect()
    }
}

impl fmt::Display for SpinState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for k in 0..self.len() {
            write!(f, "{}", if self.is_up(k) { '+' } else { '-' })?;
        }
        Ok(())
    }
}

/// Exponents of all orbital creation modes, flattened in mode-layout order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OrbitalMonomial {
    exps: Vec<u32>,
}

impl OrbitalMonomial {
    pub fn vacuum(params: &ModelParams) -> Self {
        OrbitalMonomial { exps: vec![0; params.num_modes()] }
    }

    pub fn from_exponents(exps: Vec<u32>) -> Self {
        OrbitalMonomial { exps }
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exps
    }

    pub(crate) fn exponents_mut(&mut self) -> &mut [u32] {
        &mut self.exps
    }

    pub fn degree(&self) -> usize {
        self.exps.iter().map(|&e| e as usize).sum()
    }

    /// Exponent of `A†_α^{k±}` (one-based indices).
    pub fn paired(&self, params: &ModelParams, alpha: usize, k: usize, sign: Sign) -> u32 {
        self.exps[params.mode(alpha - 1, k - 1, sign)]
    }

    /// Exponent of the unpaired mode `b†_α^p`; zero for even `p`.
    pub fn odd(&self, params: &ModelParams, alpha: usize) -> u32 {
        if params.is_odd() {
            self.exps[params.odd_mode(alpha - 1)]
        } else {
            0
        }
    }

    /// `∏ e!`, the squared norm of the monomial state.
    pub fn norm_sq(&self) -> BigInt {
        let mut acc = BigInt::one();
        for &e in &self.exps {
            for j in 2..=e {
                acc *= j;
            }
        }
        acc
    }

    /// Orbital contribution to the gauge weight.
    pub fn gauge_weight(&self, params: &ModelParams) -> Vec<i64> {
        let mut w = vec![0i64; params.q()];
        for a in 0..params.n() {
            for (k, wk) in w.iter_mut().enumerate() {
                *wk +=
                    self.exps[params.mode(a, k, Sign::Plus)] as i64 - self.exps[params.mode(a, k, Sign::Minus)] as i64;
            }
        }
        w
    }

    /// Total degree carried by each `α`.
    pub fn alpha_degrees(&self, params: &ModelParams) -> Vec<usize> {
        self.exps.chunks(params.p()).map(|c| c.iter().map(|&e| e as usize).sum()).collect()
    }
}

/// One basis vector `monomial |0⟩ ⊗ ω(s)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BasisKet {
    pub orb: OrbitalMonomial,
    pub spin: SpinState,
}

impl BasisKet {
    pub fn new(orb: OrbitalMonomial, spin: SpinState) -> Self {
        BasisKet { orb, spin }
    }

    pub fn vacuum(params: &ModelParams, spin: SpinState) -> Self {
        BasisKet { orb: OrbitalMonomial::vacuum(params), spin }
    }

    pub fn degree(&self) -> usize {
        self.orb.degree()
    }

    pub fn is_consistent(&self, params: &ModelParams) -> bool {
        self.orb.exps.len() == params.num_modes() && self.spin.len() == params.q()
    }

    /// Eigenvalues of `½{b†_α, b_α}`: `N_α + p/2`.
    pub fn osp_weight(&self, params: &ModelParams) -> OspWeight {
        OspWeight(
            self.orb
                .alpha_degrees(params)
                .into_iter()
                .map(|d| Half::from_twice(2 * d as i64 + params.p() as i64))
                .collect(),
        )
    }

    /// Eigenvalues of `G^{2k-1,2k}`: orbital `N^{k+} − N^{k−}` plus `s^k`.
    pub fn gauge_weight(&self, params: &ModelParams) -> GaugeWeight {
        let orb = self.orb.gauge_weight(params);
        GaugeWeight(orb.into_iter().enumerate().map(|(k, w)| Half::from_twice(2 * w + self.spin.two_s(k))).collect())
    }

    pub fn format(&self, params: &ModelParams) -> String {
        let mut parts = Vec::new();
        for a in 0..params.n() {
            for k in 0..params.q() {
                for sign in [Sign::Plus, Sign::Minus] {
                    let e = self.orb.exps[params.mode(a, k, sign)];
                    if e > 0 {
                        parts.push(power(format!("A[{},{},{}]", a + 1, k + 1, sign.symbol()), e));
                    }
                }
            }
            if params.is_odd() {
                let e = self.orb.exps[params.odd_mode(a)];
                if e > 0 {
                    parts.push(power(format!("B[{}]", a + 1), e));
                }
            }
        }
        let orb = if parts.is_empty() { "vac".to_string() } else { parts.join(" ") };
        format!("{orb} | s={}", self.spin)
    }
}

fn power(base: String, e: u32) -> String {
    if e == 1 {
        base
    } else {
        format!("{base}^{e}")
    }
}

/// `osp(1|2n)` Cartan weight `λ_α = N_α + p/2`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct OspWeight(pub Vec<Half>);

/// Gauge Cartan weight, entries half-odd-integers.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GaugeWeight(pub Vec<Half>);

impl fmt::Display for OspWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", crate::half::format_halves(&self.0))
    }
}

impl fmt::Display for GaugeWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", crate::half::format_halves(&self.0))
    }
}

/// All kets of total orbital degree `d`, in ket order.
pub fn enumerate_level(params: &ModelParams, d: usize, capacity: usize) -> Result<Vec<BasisKet>> {
    let count = params.shell_size(d);
    if count > capacity as u128 {
        return Err(Error::Capacity { count, bound: capacity });
    }
    let spins = SpinState::all(params.q());
    let mut out = Vec::with_capacity(count as usize);
    let mut exps = vec![0u32; params.num_modes()];
    compositions(&mut exps, 0, d as u32, &mut |e| {
        for &spin in &spins {
            out.push(BasisKet { orb: OrbitalMonomial { exps: e.to_vec() }, spin });
        }
    });
    Ok(out)
}

/// Orbital monomials of degree `d` in ascending lexicographic order.
pub fn enumerate_orbital(params: &ModelParams, d: usize) -> Vec<OrbitalMonomial> {
    let mut out = Vec::new();
    let mut exps = vec![0u32; params.num_modes()];
    compositions(&mut exps, 0, d as u32, &mut |e| out.push(OrbitalMonomial { exps: e.to_vec() }));
    out
}

fn compositions(exps: &mut [u32], pos: usize, remaining: u32, emit: &mut impl FnMut(&[u32])) {
    if pos + 1 == exps.len() {
        exps[pos] = remaining;
        emit(exps);
        exps[pos] = 0;
        return;
    }
    for e in 0..=remaining {
        exps[pos] = e;
        compositions(exps, pos + 1, remaining - e, emit);
    }
    exps[pos] = 0;
}

/// Finite sparse linear combination of kets.
#[derive(Clone, PartialEq, Eq)]
pub struct State {
    params: ModelParams,
    terms: BTreeMap<BasisKet, Scalar>,
}

impl State {
    pub fn zero(params: ModelParams) -> Self {
        State { params, terms: BTreeMap::new() }
    }

    pub fn from_ket(params: ModelParams, ket: BasisKet) -> Self {
        let mut s = State::zero(params);
        s.terms.insert(ket, Scalar::one());
        s
    }

    pub fn vacuum(params: ModelParams, spin: SpinState) -> Self {
        State::from_ket(params, BasisKet::vacuum(&params, spin))
    }

    pub fn from_terms(params: ModelParams, terms: impl IntoIterator<Item = (BasisKet, Scalar)>) -> Result<Self> {
        let mut s = State::zero(params);
        for (ket, c) in terms {
            if !ket.is_consistent(&params) {
                return Err(Error::ParamsMismatch(format!("ket {}", ket.format(&params)), params.to_string()));
            }
            s.add_term(ket, &c);
        }
        Ok(s)
    }

    pub fn params(&self) -> &ModelParams {
        &self.params
    }

    pub fn terms(&self) -> impl Iterator<Item = (&BasisKet, &Scalar)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, ket: &BasisKet) -> Scalar {
        self.terms.get(ket).cloned().unwrap_or_default()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, ket: BasisKet, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(ket) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c.clone());
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    /// `self += c · other`.
    pub fn add_scaled(&mut self, other: &State, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        for (ket, v) in &other.terms {
            self.add_term(ket.clone(), &(v * c));
        }
    }

    pub fn scaled(&self, c: &Scalar) -> State {
        if c.is_zero() {
            return State::zero(self.params);
        }
        State { params: self.params, terms: self.terms.iter().map(|(k, v)| (k.clone(), v * c)).collect() }
    }

    pub fn plus(&self, other: &State) -> State {
        let mut out = self.clone();
        out.add_scaled(other, &Scalar::one());
        out
    }

    pub fn minus(&self, other: &State) -> State {
        let mut out = self.clone();
        out.add_scaled(other, &Scalar::from_int(-1));
        out
    }

    pub fn first_term(&self) -> Option<(&BasisKet, &Scalar)> {
        self.terms.iter().next()
    }

    /// Rescale so the first ket in ket order has coefficient `+1`.
    pub fn normalized_leading(&self) -> Result<State> {
        let (_, c) = self.first_term().ok_or(Error::ZeroState)?;
        Ok(self.scaled(&c.inv()?))
    }

    /// The factor `c` with `self = c · other`, if one exists.
    pub fn proportionality(&self, other: &State) -> Option<Scalar> {
        if self.len() != other.len() || other.is_zero() {
            return if self.is_zero() && other.is_zero() { Some(Scalar::one()) } else { None };
        }
        let (k0, v0) = other.first_term()?;
        let c = &self.coefficient(k0) * &v0.inv().ok()?;
        if c.is_zero() {
            return None;
        }
        (self == &other.scaled(&c)).then_some(c)
    }

    /// Common orbital degree of all terms.
    pub fn grade(&self) -> Result<usize> {
        let mut it = self.terms.keys();
        let first = it.next().ok_or(Error::ZeroState)?.degree();
        for k in it {
            if k.degree() != first {
                return Err(Error::MixedDegree(first, k.degree()));
            }
        }
        Ok(first)
    }

    pub fn norm_sq(&self) -> Rational {
        let mut acc = Rational::zero();
        for (ket, c) in &self.terms {
            let mag = (c.conj() * c.clone()).as_rational().cloned().unwrap_or_else(Rational::zero);
            acc += mag * Rational::from_integer(ket.orb.norm_sq());
        }
        acc
    }

    /// Map terms by a ket-level rule producing at most one ket per input.
    pub(crate) fn map_kets(&self, mut f: impl FnMut(&BasisKet) -> Option<(BasisKet, Scalar)>) -> State {
        let mut out = State::zero(self.params);
        for (ket, c) in &self.terms {
            if let Some((k2, f2)) = f(ket) {
                out.add_term(k2, &(c * &f2));
            }
        }
        out
    }

    /// Split into gauge-weight components.
    pub fn gauge_components(&self) -> BTreeMap<GaugeWeight, State> {
        let mut out: BTreeMap<GaugeWeight, State> = BTreeMap::new();
        for (ket, c) in &self.terms {
            out.entry(ket.gauge_weight(&self.params))
                .or_insert_with(|| State::zero(self.params))
                .add_term(ket.clone(), c);
        }
        out
    }

    pub fn check_params(&self, other: &State) -> Result<()> {
        if self.params != other.params {
            return Err(Error::ParamsMismatch(self.params.to_string(), other.params.to_string()));
        }
        Ok(())
    }
}

/// `⟨u, v⟩`, conjugate-linear in `u`.
pub fn inner_product(u: &State, v: &State) -> Result<Scalar> {
    u.check_params(v)?;
    let mut acc = Scalar::zero();
    let (small, large, swap) = if u.len() <= v.len() { (u, v, false) } else { (v, u, true) };
    for (ket, a) in &small.terms {
        if let Some(b) = large.terms.get(ket) {
            let (cu, cv) = if swap { (b, a) } else { (a, b) };
            let norm = Scalar::from_rational(Rational::from_integer(ket.orb.norm_sq()));
            acc += &(&(&cu.conj() * cv) * &norm);
        }
    }
    Ok(acc)
}

impl fmt::Display for State {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (ket, c) in &self.terms {
            if !first {
                write!(f, "\n+ ")?;
            }
            first = false;
            write!(f, "({c}) {}", ket.format(&self.params))?;
        }
        Ok(())
    }
}

impl fmt::Debug for State {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "State[{}]{{{self}}}", self.params)
    }
}
