//! Actions of the odd parabose operators, the even `sp(2n)` operators, the
//! gauge generators and inversions on [`State`]s.
//!
//! Everything is rule-based: an operator is a sum of words in elementary
//! ket maps (mode creation, mode annihilation, `e^{k±}`, `e^p`), each of which
//! sends a ket to a single ket times an integer or `√2` factor.
//!
//! Expansions in the `A^{k±}` basis used below (`c_a` the real-basis modes):
//!
//! ```text
//! c†_{2k-1} = (A†^{k+} + A†^{k-}) / √2      c_{2k-1} = (A^{k+} + A^{k-}) / √2
//! c†_{2k}   = -i (A†^{k+} - A†^{k-}) / √2   c_{2k}   =  i (A^{k+} - A^{k-}) / √2
//! e^{2k-1}  = (e^{k+} + e^{k-}) / √2        e^{2k}   = -i (e^{k+} - e^{k-}) / √2
//!
//! b†_α       = Σ_k A†_α^{k+} e^{k-} + A†_α^{k-} e^{k+}  (+ b†_α^p e^p, p odd)
//! b_α        = Σ_k A_α^{k+} e^{k+} + A_α^{k-} e^{k-}    (+ b_α^p e^p, p odd)
//! {b†_α,b_β} = 2 Σ_modes A†_α A_β + p δ_αβ
//! {b†_α,b†_β}= 2 Σ_k (A†_α^{k+} A†_β^{k-} + A†_α^{k-} A†_β^{k+})  (+ 2 b†_α^p b†_β^p)
//! {b_α,b_β}  = 2 Σ_k (A_α^{k+} A_β^{k-} + A_α^{k-} A_β^{k+})      (+ 2 b_α^p b_β^p)
//! ```
//!
//! The gauge generators are `G^{ab} = i Σ_α (c†_b c_a − c†_a c_b) + (i/4)[e^b, e^a]`,
//! normalized so that `G^{2k-1,2k}` has eigenvalue `N^{k+} − N^{k−} + s^k`.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::fock::{BasisKet, ModelParams, Sign, SpinState, State};
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
enum Elem {
    Create(usize),
    Annihilate(usize),
    /// `e^{k±}` with zero-based `k`.
    Spin(usize, Sign),
    /// `e^p`, odd `p` only.
    Parity,
}

/// Integer factor and power of `√2` accumulated along a word.
#[derive(Clone, Copy)]
struct Factor {
    int: i64,
    sqrt2: u32,
}

impl Factor {
    fn to_scalar(self) -> Scalar {
        let s = Scalar::from_int(self.int << (self.sqrt2 / 2));
        if self.sqrt2 % 2 == 1 {
            s.mul_sqrt2()
        } else {
            s
        }
    }
}

fn act(elem: Elem, ket: &mut BasisKet, fac: &mut Factor) -> bool {
    match elem {
        Elem::Create(m) => {
            ket.orb.exponents_mut()[m] += 1;
            true
        }
        Elem::Annihilate(m) => {
            let e = &mut ket.orb.exponents_mut()[m];
            if *e == 0 {
                return false;
            }
            fac.int *= *e as i64;
            *e -= 1;
            true
        }
        Elem::Spin(k, sign) => {
            // e^{k±} ω(s) = √2 (∏_{l<k} 2s^l) ω(…, s^k ± 1, …)
            let up = ket.spin.is_up(k);
            if up == (sign == Sign::Plus) {
                return false;
            }
            let prefix: i64 = (0..k).map(|l| ket.spin.two_s(l)).product();
            fac.int *= prefix;
            fac.sqrt2 += 1;
            ket.spin = ket.spin.flipped(k);
            true
        }
        Elem::Parity => {
            let sign: i64 = (0..ket.spin.len()).map(|l| ket.spin.two_s(l)).product();
            fac.int *= sign;
            true
        }
    }
}

/// Linear combination of words; each word is an operator product whose
/// rightmost element acts first.
#[derive(Clone, Debug, Default)]
struct OpSum {
    terms: Vec<(Scalar, Vec<Elem>)>,
}

impl OpSum {
    fn zero() -> Self {
        OpSum::default()
    }

    fn identity() -> Self {
        OpSum::constant(Scalar::one())
    }

    fn constant(c: Scalar) -> Self {
        OpSum { terms: vec![(c, Vec::new())] }
    }

    fn elem(e: Elem) -> Self {
        OpSum { terms: vec![(Scalar::one(), vec![e])] }
    }

    fn plus(mut self, o: OpSum) -> Self {
        self.terms.extend(o.terms);
        self
    }

    fn minus(self, o: OpSum) -> Self {
        self.plus(o.scale(&Scalar::from_int(-1)))
    }

    fn scale(mut self, c: &Scalar) -> Self {
        for (x, _) in &mut self.terms {
            *x = &*x * c;
        }
        self
    }

    fn times(&self, o: &OpSum) -> OpSum {
        let mut terms = Vec::with_capacity(self.terms.len() * o.terms.len());
        for (c1, w1) in &self.terms {
            for (c2, w2) in &o.terms {
                let mut w = w1.clone();
                w.extend_from_slice(w2);
                terms.push((c1 * c2, w));
            }
        }
        OpSum { terms }.normalized()
    }

    fn normalized(self) -> Self {
        let mut merged: BTreeMap<Vec<Elem>, Scalar> = BTreeMap::new();
        for (c, w) in self.terms {
            *merged.entry(w).or_default() += &c;
        }
        OpSum { terms: merged.into_iter().filter(|(_, c)| !c.is_zero()).map(|(w, c)| (c, w)).collect() }
    }

    fn apply(&self, v: &State) -> State {
        let mut out = State::zero(*v.params());
        for (ket, cv) in v.terms() {
            self.apply_ket_into(ket, cv, &mut out);
        }
        out
    }

    fn apply_ket_into(&self, ket: &BasisKet, cv: &Scalar, out: &mut State) {
        'words: for (c, word) in &self.terms {
            let mut k = ket.clone();
            let mut fac = Factor { int: 1, sqrt2: 0 };
            for &e in word.iter().rev() {
                if !act(e, &mut k, &mut fac) {
                    continue 'words;
                }
            }
            let coef = &(c * cv) * &fac.to_scalar();
            out.add_term(k, &coef);
        }
    }
}

fn sqrt2_inv() -> Scalar {
    Scalar::sqrt2() * Scalar::ratio(1, 2)
}

/// Real-basis creation operator `c†_{α,a}` (zero-based indices).
fn real_creation(params: &ModelParams, alpha: usize, a: usize) -> OpSum {
    real_mode(params, alpha, a, true)
}

/// Real-basis annihilation operator `c_{α,a}` (zero-based indices).
fn real_annihilation(params: &ModelParams, alpha: usize, a: usize) -> OpSum {
    real_mode(params, alpha, a, false)
}

fn real_mode(params: &ModelParams, alpha: usize, a: usize, create: bool) -> OpSum {
    let wrap = |m| if create { Elem::Create(m) } else { Elem::Annihilate(m) };
    if params.is_odd() && a == params.p() - 1 {
        return OpSum::elem(wrap(params.odd_mode(alpha)));
    }
    let k = a / 2;
    let plus = OpSum::elem(wrap(params.mode(alpha, k, Sign::Plus)));
    let minus = OpSum::elem(wrap(params.mode(alpha, k, Sign::Minus)));
    if a.is_multiple_of(2) {
        plus.plus(minus).scale(&sqrt2_inv())
    } else {
        let phase = if create { -Scalar::i() } else { Scalar::i() };
        plus.minus(minus).scale(&(&phase * &sqrt2_inv()))
    }
}

/// Clifford generator `e^a` (zero-based `a`).
fn clifford(params: &ModelParams, a: usize) -> OpSum {
    if params.is_odd() && a == params.p() - 1 {
        return OpSum::elem(Elem::Parity);
    }
    let k = a / 2;
    let plus = OpSum::elem(Elem::Spin(k, Sign::Plus));
    let minus = OpSum::elem(Elem::Spin(k, Sign::Minus));
    if a.is_multiple_of(2) {
        plus.plus(minus).scale(&sqrt2_inv())
    } else {
        plus.minus(minus).scale(&(&-Scalar::i() * &sqrt2_inv()))
    }
}

fn creator_sum(params: &ModelParams, alpha: usize) -> OpSum {
    let mut s = OpSum::zero();
    for k in 0..params.q() {
        s = s
            .plus(
                OpSum::elem(Elem::Create(params.mode(alpha, k, Sign::Plus)))
                    .times(&OpSum::elem(Elem::Spin(k, Sign::Minus))),
            )
            .plus(
                OpSum::elem(Elem::Create(params.mode(alpha, k, Sign::Minus)))
                    .times(&OpSum::elem(Elem::Spin(k, Sign::Plus))),
            );
    }
    if params.is_odd() {
        s = s.plus(OpSum::elem(Elem::Create(params.odd_mode(alpha))).times(&OpSum::elem(Elem::Parity)));
    }
    s
}

fn annihilator_sum(params: &ModelParams, alpha: usize) -> OpSum {
    let mut s = OpSum::zero();
    for k in 0..params.q() {
        s = s
            .plus(
                OpSum::elem(Elem::Annihilate(params.mode(alpha, k, Sign::Plus)))
                    .times(&OpSum::elem(Elem::Spin(k, Sign::Plus))),
            )
            .plus(
                OpSum::elem(Elem::Annihilate(params.mode(alpha, k, Sign::Minus)))
                    .times(&OpSum::elem(Elem::Spin(k, Sign::Minus))),
            );
    }
    if params.is_odd() {
        s = s.plus(OpSum::elem(Elem::Annihilate(params.odd_mode(alpha))).times(&OpSum::elem(Elem::Parity)));
    }
    s
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum EvenKind {
    /// `{b†_α, b†_β}`
    CreateCreate,
    /// `{b†_α, b_β}`
    CreateAnnih,
    /// `{b_α, b_β}`
    AnnihAnnih,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct EvenOpLabel {
    pub kind: EvenKind,
    pub alpha: usize,
    pub beta: usize,
}

impl EvenOpLabel {
    pub fn new(kind: EvenKind, alpha: usize, beta: usize) -> Self {
        EvenOpLabel { kind, alpha, beta }
    }
}

fn even_sum(params: &ModelParams, op: EvenOpLabel) -> Result<OpSum> {
    let a = params.check_alpha(op.alpha)?;
    let b = params.check_alpha(op.beta)?;
    let two = Scalar::from_int(2);
    let modes = |alpha: usize| -> Vec<usize> {
        let mut v: Vec<usize> = (0..params.q())
            .flat_map(|k| [params.mode(alpha, k, Sign::Plus), params.mode(alpha, k, Sign::Minus)])
            .collect();
        if params.is_odd() {
            v.push(params.odd_mode(alpha));
        }
        v
    };
    let mut s = OpSum::zero();
    match op.kind {
        EvenKind::CreateAnnih => {
            for (ma, mb) in modes(a).into_iter().zip(modes(b)) {
                s = s.plus(OpSum::elem(Elem::Create(ma)).times(&OpSum::elem(Elem::Annihilate(mb))));
            }
            s = s.scale(&two);
            if a == b {
                s = s.plus(OpSum::constant(Scalar::from_int(params.p() as i64)));
            }
        }
        EvenKind::CreateCreate | EvenKind::AnnihAnnih => {
            let wrap = |m| if op.kind == EvenKind::CreateCreate { Elem::Create(m) } else { Elem::Annihilate(m) };
            for k in 0..params.q() {
                let (ap, am) = (params.mode(a, k, Sign::Plus), params.mode(a, k, Sign::Minus));
                let (bp, bm) = (params.mode(b, k, Sign::Plus), params.mode(b, k, Sign::Minus));
                s = s
                    .plus(OpSum::elem(wrap(ap)).times(&OpSum::elem(wrap(bm))))
                    .plus(OpSum::elem(wrap(am)).times(&OpSum::elem(wrap(bp))));
            }
            if params.is_odd() {
                s = s.plus(OpSum::elem(wrap(params.odd_mode(a))).times(&OpSum::elem(wrap(params.odd_mode(b)))));
            }
            s = s.scale(&two);
        }
    }
    Ok(s.normalized())
}

fn check_pair(params: &ModelParams, a: usize, b: usize) -> Result<(usize, usize)> {
    let a0 = params.check_a(a)?;
    let b0 = params.check_a(b)?;
    if a0 == b0 {
        return Err(Error::IndexOutOfRange(format!("G^{{ab}} needs a != b, got a = b = {a}")));
    }
    Ok((a0, b0))
}

/// Orbital part `i Σ_α (c†_b c_a − c†_a c_b)`.
fn gauge_orbital_sum(params: &ModelParams, a: usize, b: usize) -> OpSum {
    let mut s = OpSum::zero();
    for alpha in 0..params.n() {
        let ba = real_creation(params, alpha, b).times(&real_annihilation(params, alpha, a));
        let ab = real_creation(params, alpha, a).times(&real_annihilation(params, alpha, b));
        s = s.plus(ba).minus(ab);
    }
    s.scale(&Scalar::i()).normalized()
}

/// Spin part `(i/4)[e^b, e^a]`.
fn gauge_spin_sum(params: &ModelParams, a: usize, b: usize) -> OpSum {
    let ea = clifford(params, a);
    let eb = clifford(params, b);
    eb.times(&ea).minus(ea.times(&eb)).scale(&(Scalar::i() * Scalar::ratio(1, 4))).normalized()
}

/// Label of a gauge root vector; `k < l` are one-based Cartan indices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GaugeRootLabel {
    /// `G_{+δk+δl}`
    PlusPlus(usize, usize),
    /// `G_{+δk−δl}`
    PlusMinus(usize, usize),
    /// `G_{−δk+δl}`
    MinusPlus(usize, usize),
    /// `G_{−δk−δl}`
    MinusMinus(usize, usize),
    /// `G_{+δk}`, odd `p` only
    ShortPlus(usize),
    /// `G_{−δk}`, odd `p` only
    ShortMinus(usize),
}

impl GaugeRootLabel {
    pub fn validate(&self, params: &ModelParams) -> Result<()> {
        let q = params.q();
        match *self {
            GaugeRootLabel::PlusPlus(k, l)
            | GaugeRootLabel::PlusMinus(k, l)
            | GaugeRootLabel::MinusPlus(k, l)
            | GaugeRootLabel::MinusMinus(k, l) => {
                if !(1 <= k && k < l && l <= q) {
                    return Err(Error::InvalidLabel(format!("{self}: need 1 <= k < l <= {q}")));
                }
            }
            GaugeRootLabel::ShortPlus(k) | GaugeRootLabel::ShortMinus(k) => {
                if !params.is_odd() {
                    return Err(Error::InvalidLabel(format!("{self}: short roots exist only for odd p")));
                }
                if !(1 <= k && k <= q) {
                    return Err(Error::InvalidLabel(format!("{self}: need 1 <= k <= {q}")));
                }
            }
        }
        Ok(())
    }

    /// Signs `(σ_k, σ_l)` and indices; `l` is `None` for short roots.
    fn parts(&self) -> (usize, Sign, Option<(usize, Sign)>) {
        use GaugeRootLabel::*;
        use Sign::*;
        match *self {
            PlusPlus(k, l) => (k, Plus, Some((l, Plus))),
            PlusMinus(k, l) => (k, Plus, Some((l, Minus))),
            MinusPlus(k, l) => (k, Minus, Some((l, Plus))),
            MinusMinus(k, l) => (k, Minus, Some((l, Minus))),
            ShortPlus(k) => (k, Plus, None),
            ShortMinus(k) => (k, Minus, None),
        }
    }

    /// The root as an integer vector of length `q`.
    pub fn root(&self, q: usize) -> Vec<i64> {
        let mut r = vec![0; q];
        let (k, sk, rest) = self.parts();
        r[k - 1] += sk.as_i64();
        if let Some((l, sl)) = rest {
            r[l - 1] += sl.as_i64();
        }
        r
    }

    pub fn is_positive(&self) -> bool {
        matches!(self, GaugeRootLabel::PlusPlus(..) | GaugeRootLabel::PlusMinus(..) | GaugeRootLabel::ShortPlus(_))
    }
}

impl fmt::Display for GaugeRootLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            GaugeRootLabel::PlusPlus(k, l) => write!(f, "pp,{k},{l}"),
            GaugeRootLabel::PlusMinus(k, l) => write!(f, "pm,{k},{l}"),
            GaugeRootLabel::MinusPlus(k, l) => write!(f, "mp,{k},{l}"),
            GaugeRootLabel::MinusMinus(k, l) => write!(f, "mm,{k},{l}"),
            GaugeRootLabel::ShortPlus(k) => write!(f, "sp,{k}"),
            GaugeRootLabel::ShortMinus(k) => write!(f, "sm,{k}"),
        }
    }
}

/// Positive roots of `so(p)`: `δk ± δl` (`k < l`) and, for odd `p`, `δk`.
pub fn positive_gauge_roots(params: &ModelParams) -> Vec<GaugeRootLabel> {
    let q = params.q();
    let mut out = Vec::new();
    for k in 1..=q {
        for l in k + 1..=q {
            out.push(GaugeRootLabel::PlusPlus(k, l));
            out.push(GaugeRootLabel::PlusMinus(k, l));
        }
    }
    if params.is_odd() {
        out.extend((1..=q).map(GaugeRootLabel::ShortPlus));
    }
    out
}

pub fn negative_gauge_roots(params: &ModelParams) -> Vec<GaugeRootLabel> {
    let q = params.q();
    let mut out = Vec::new();
    for k in 1..=q {
        for l in k + 1..=q {
            out.push(GaugeRootLabel::MinusMinus(k, l));
            out.push(GaugeRootLabel::MinusPlus(k, l));
        }
    }
    if params.is_odd() {
        out.extend((1..=q).map(GaugeRootLabel::ShortMinus));
    }
    out
}

/// Root vector in the `A` basis:
///
/// ```text
/// G_{σδk+τδl} = Σ_α (A†_α^{kσ} A_α^{l,−τ} − A†_α^{lτ} A_α^{k,−σ}) + ½ e^{kσ} e^{lτ}
/// G_{σδk}     = Σ_α (A†_α^{kσ} b_α^p − b†_α^p A_α^{k,−σ}) + ½ e^{kσ} e^p
/// ```
fn gauge_root_sum(params: &ModelParams, label: GaugeRootLabel, with_spin: bool) -> Result<OpSum> {
    label.validate(params)?;
    let (k, sk, rest) = label.parts();
    let k = k - 1;
    let mut s = OpSum::zero();
    let half = Scalar::ratio(1, 2);
    match rest {
        Some((l, sl)) => {
            let l = l - 1;
            for a in 0..params.n() {
                let t1 = OpSum::elem(Elem::Create(params.mode(a, k, sk)))
                    .times(&OpSum::elem(Elem::Annihilate(params.mode(a, l, sl.flip()))));
                let t2 = OpSum::elem(Elem::Create(params.mode(a, l, sl)))
                    .times(&OpSum::elem(Elem::Annihilate(params.mode(a, k, sk.flip()))));
                s = s.plus(t1).minus(t2);
            }
            if with_spin {
                let spin = OpSum::elem(Elem::Spin(k, sk)).times(&OpSum::elem(Elem::Spin(l, sl)));
                s = s.plus(spin.scale(&half));
            }
        }
        None => {
            for a in 0..params.n() {
                let t1 = OpSum::elem(Elem::Create(params.mode(a, k, sk)))
                    .times(&OpSum::elem(Elem::Annihilate(params.odd_mode(a))));
                let t2 = OpSum::elem(Elem::Create(params.odd_mode(a)))
                    .times(&OpSum::elem(Elem::Annihilate(params.mode(a, k, sk.flip()))));
                s = s.plus(t1).minus(t2);
            }
            if with_spin {
                let spin = OpSum::elem(Elem::Spin(k, sk)).times(&OpSum::elem(Elem::Parity));
                s = s.plus(spin.scale(&half));
            }
        }
    }
    Ok(s.normalized())
}

/// Spin part `−i ē e^a` of the inversion, `ē = i^q e^1 ⋯ e^p`.
fn inversion_spin_sum(params: &ModelParams, a: usize) -> OpSum {
    let mut ebar = OpSum::identity();
    for b in 0..params.p() {
        ebar = ebar.times(&clifford(params, b));
    }
    let mut phase = Scalar::one();
    for _ in 0..params.q() {
        phase = phase.mul_i();
    }
    ebar.scale(&phase).times(&clifford(params, a)).scale(&-Scalar::i())
}

/// Orbital inversion `exp(iπ Σ_α c†_a c_a)` on one ket (zero-based `a`):
/// `a = 2k−1` maps `A†^{k±} ↦ −A†^{k∓}`, `a = 2k` maps `A†^{k±} ↦ A†^{k∓}`.
fn invert_orbital(params: &ModelParams, a: usize, ket: &BasisKet) -> (BasisKet, i64) {
    let k = a / 2;
    let mut out = ket.clone();
    let mut parity = 0u32;
    for alpha in 0..params.n() {
        let (mp, mm) = (params.mode(alpha, k, Sign::Plus), params.mode(alpha, k, Sign::Minus));
        let exps = out.orb.exponents_mut();
        exps.swap(mp, mm);
        parity += exps[mp] + exps[mm];
    }
    let sign = if a.is_multiple_of(2) && parity % 2 == 1 { -1 } else { 1 };
    (out, sign)
}

/// A single Bose mode of one Green index: `A^{k±}` or, for odd `p`, `b^p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ModeLabel {
    Paired(usize, Sign),
    Odd,
}

impl ModeLabel {
    fn resolve(&self, params: &ModelParams, alpha: usize) -> Result<usize> {
        let alpha = params.check_alpha(alpha)?;
        match *self {
            ModeLabel::Paired(k, sign) => Ok(params.mode(alpha, params.check_k(k)?, sign)),
            ModeLabel::Odd => {
                if !params.is_odd() {
                    return Err(Error::Parity { op: "odd mode", parity: "odd", p: params.p() });
                }
                Ok(params.odd_mode(alpha))
            }
        }
    }
}

/// A named operator on the ansatz space. Indices are one-based throughout.
#[derive(Clone, Debug, PartialEq)]
#[allow(clippy::large_enum_variant)]
pub enum Operator {
    Identity,
    /// `b_α`
    Annihilator(usize),
    /// `b†_α`
    Creator(usize),
    /// Conformal energy `E = ½ Σ_α {b_α, b†_α}`.
    Energy,
    /// `Q = ½ Σ_α [b_α, b†_α]`, computed as `E − Σ_α b†_α b_α`.
    Q,
    /// `np/2 + 2 Σ_{a>b} G^{ab}_orb G^{ab}_spin`.
    QSpinOrbit,
    Even(EvenOpLabel),
    /// `G^{ab}`
    Gauge(usize, usize),
    GaugeOrbital(usize, usize),
    GaugeSpin(usize, usize),
    GaugeRoot(GaugeRootLabel),
    /// Orbital part of a gauge root vector.
    GaugeRootOrbital(GaugeRootLabel),
    /// `Σ_{a>b} (G^{ab})²`
    Casimir,
    /// `Σ_{a>b} (G^{ab}_orb)²`
    CasimirOrbital,
    Inversion(usize),
    /// `e^{k±}`
    SpinRaise(usize, Sign),
    /// `e^p`
    SpinParity,
    /// `e^a`
    Clifford(usize),
    /// Noncovariant Green component `c†_{α,a} e^a`.
    Noncovariant(usize, usize),
    /// Bose creation `A†_α^{k±}` or `b†_α^p`, acting on the orbital factor.
    ModeCreate(usize, ModeLabel),
    ModeAnnihilate(usize, ModeLabel),
    Scaled(Scalar, Box<Operator>),
    /// Operator product, rightmost factor acting first.
    Product(Vec<Operator>),
    Sum(Vec<Operator>),
}

impl Operator {
    pub fn commutator(a: Operator, b: Operator) -> Operator {
        Operator::Sum(vec![
            Operator::Product(vec![a.clone(), b.clone()]),
            Operator::Scaled(Scalar::from_int(-1), Box::new(Operator::Product(vec![b, a]))),
        ])
    }

    pub fn anticommutator(a: Operator, b: Operator) -> Operator {
        Operator::Sum(vec![Operator::Product(vec![a.clone(), b.clone()]), Operator::Product(vec![b, a])])
    }

    pub fn scaled(c: Scalar, a: Operator) -> Operator {
        Operator::Scaled(c, Box::new(a))
    }

    pub fn apply(&self, v: &State) -> Result<State> {
        Ok(self.compile(v.params())?.apply(v))
    }

    /// Resolve into ket rules for one parameter set.
    pub fn compile(&self, params: &ModelParams) -> Result<CompiledOp> {
        let params = *params;
        let linear = |s: OpSum| Ok(CompiledOp { params, kind: Compiled::Linear(s) });
        match self {
            Operator::Identity => linear(OpSum::identity()),
            Operator::Annihilator(a) => linear(annihilator_sum(&params, params.check_alpha(*a)?)),
            Operator::Creator(a) => linear(creator_sum(&params, params.check_alpha(*a)?)),
            Operator::Energy => Ok(CompiledOp { params, kind: Compiled::Energy }),
            Operator::Q => {
                let mut number = OpSum::zero();
                for a in 0..params.n() {
                    number = number.plus(creator_sum(&params, a).times(&annihilator_sum(&params, a)));
                }
                Ok(CompiledOp {
                    params,
                    kind: Compiled::Sum(vec![
                        Compiled::Energy,
                        Compiled::Linear(number.normalized().scale(&Scalar::from_int(-1))),
                    ]),
                })
            }
            Operator::QSpinOrbit => {
                let mut s = OpSum::constant(Scalar::from_rational(params.vacuum_energy().to_rational()));
                for a in 0..params.p() {
                    for b in 0..a {
                        let pair = gauge_orbital_sum(&params, a, b).times(&gauge_spin_sum(&params, a, b));
                        s = s.plus(pair.scale(&Scalar::from_int(2)));
                    }
                }
                linear(s.normalized())
            }
            Operator::Even(op) => linear(even_sum(&params, *op)?),
            Operator::Gauge(a, b) => {
                let (a, b) = check_pair(&params, *a, *b)?;
                linear(gauge_orbital_sum(&params, a, b).plus(gauge_spin_sum(&params, a, b)).normalized())
            }
            Operator::GaugeOrbital(a, b) => {
                let (a, b) = check_pair(&params, *a, *b)?;
                linear(gauge_orbital_sum(&params, a, b))
            }
            Operator::GaugeSpin(a, b) => {
                let (a, b) = check_pair(&params, *a, *b)?;
                linear(gauge_spin_sum(&params, a, b))
            }
            Operator::GaugeRoot(label) => linear(gauge_root_sum(&params, *label, true)?),
            Operator::GaugeRootOrbital(label) => linear(gauge_root_sum(&params, *label, false)?),
            Operator::Casimir | Operator::CasimirOrbital => {
                let mut parts = Vec::new();
                for a in 0..params.p() {
                    for b in 0..a {
                        let g = if *self == Operator::Casimir {
                            gauge_orbital_sum(&params, a, b).plus(gauge_spin_sum(&params, a, b)).normalized()
                        } else {
                            gauge_orbital_sum(&params, a, b)
                        };
                        parts.push(Compiled::Product(vec![Compiled::Linear(g.clone()), Compiled::Linear(g)]));
                    }
                }
                Ok(CompiledOp { params, kind: Compiled::Sum(parts) })
            }
            Operator::Inversion(a) => {
                if params.is_odd() {
                    return Err(Error::Parity { op: "inversion", parity: "even", p: params.p() });
                }
                let a0 = params.check_a(*a)?;
                Ok(CompiledOp { params, kind: Compiled::Inversion { a: a0, spin: inversion_spin_sum(&params, a0) } })
            }
            Operator::SpinRaise(k, sign) => linear(OpSum::elem(Elem::Spin(params.check_k(*k)?, *sign))),
            Operator::SpinParity => {
                if !params.is_odd() {
                    return Err(Error::Parity { op: "e^p", parity: "odd", p: params.p() });
                }
                linear(OpSum::elem(Elem::Parity))
            }
            Operator::Clifford(a) => linear(clifford(&params, params.check_a(*a)?)),
            Operator::Noncovariant(alpha, a) => {
                let alpha = params.check_alpha(*alpha)?;
                let a = params.check_a(*a)?;
                linear(real_creation(&params, alpha, a).times(&clifford(&params, a)))
            }
            Operator::ModeCreate(alpha, m) => linear(OpSum::elem(Elem::Create(m.resolve(&params, *alpha)?))),
            Operator::ModeAnnihilate(alpha, m) => linear(OpSum::elem(Elem::Annihilate(m.resolve(&params, *alpha)?))),
            Operator::Scaled(c, inner) => {
                let inner = inner.compile(&params)?;
                Ok(CompiledOp { params, kind: Compiled::Scaled(c.clone(), Box::new(inner.kind)) })
            }
            Operator::Product(fs) => {
                let fs = fs.iter().map(|f| f.compile(&params).map(|c| c.kind)).collect::<Result<_>>()?;
                Ok(CompiledOp { params, kind: Compiled::Product(fs) })
            }
            Operator::Sum(fs) => {
                let fs = fs.iter().map(|f| f.compile(&params).map(|c| c.kind)).collect::<Result<_>>()?;
                Ok(CompiledOp { params, kind: Compiled::Sum(fs) })
            }
        }
    }
}

#[derive(Clone, Debug)]
#[allow(clippy::large_enum_variant)]
enum Compiled {
    Linear(OpSum),
    Energy,
    Inversion { a: usize, spin: OpSum },
    Scaled(Scalar, Box<Compiled>),
    Product(Vec<Compiled>),
    Sum(Vec<Compiled>),
}

impl Compiled {
    fn apply(&self, params: &ModelParams, v: &State) -> State {
        match self {
            Compiled::Linear(s) => s.apply(v),
            Compiled::Energy => {
                let e0 = params.vacuum_energy();
                v.map_kets(|k| {
                    let e = e0 + crate::half::Half::from_int(k.degree() as i64);
                    Some((k.clone(), Scalar::from_rational(e.to_rational())))
                })
            }
            Compiled::Inversion { a, spin } => {
                let orb = v.map_kets(|k| {
                    let (k2, sign) = invert_orbital(params, *a, k);
                    Some((k2, Scalar::from_int(sign)))
                });
                spin.apply(&orb)
            }
            Compiled::Scaled(c, inner) => inner.apply(params, v).scaled(c),
            Compiled::Product(fs) => {
                let mut cur = v.clone();
                for f in fs.iter().rev() {
                    if cur.is_zero() {
                        break;
                    }
                    cur = f.apply(params, &cur);
                }
                cur
            }
            Compiled::Sum(fs) => {
                let mut out = State::zero(*params);
                for f in fs {
                    out.add_scaled(&f.apply(params, v), &Scalar::one());
                }
                out
            }
        }
    }
}

/// An [`Operator`] resolved against fixed model parameters.
#[derive(Clone, Debug)]
pub struct CompiledOp {
    params: ModelParams,
    kind: Compiled,
}

impl CompiledOp {
    /// Apply to a state with matching parameters. Panics on a mismatch; use
    /// [`CompiledOp::try_apply`] for checked application.
    pub fn apply(&self, v: &State) -> State {
        assert_eq!(&self.params, v.params(), "operator compiled for different parameters");
        self.kind.apply(&self.params, v)
    }

    pub fn try_apply(&self, v: &State) -> Result<State> {
        if &self.params != v.params() {
            return Err(Error::ParamsMismatch(self.params.to_string(), v.params().to_string()));
        }
        Ok(self.kind.apply(&self.params, v))
    }

    pub fn params(&self) -> &ModelParams {
        &self.params
    }
}

pub fn apply_spin_raise(k: usize, sign: Sign, v: &State) -> Result<State> {
    Operator::SpinRaise(k, sign).apply(v)
}

pub fn apply_ep(v: &State) -> Result<State> {
    Operator::SpinParity.apply(v)
}

pub fn apply_creator(alpha: usize, v: &State) -> Result<State> {
    Operator::Creator(alpha).apply(v)
}

pub fn apply_annihilator(alpha: usize, v: &State) -> Result<State> {
    Operator::Annihilator(alpha).apply(v)
}

pub fn apply_even(op: EvenOpLabel, v: &State) -> Result<State> {
    Operator::Even(op).apply(v)
}

pub fn apply_gauge(a: usize, b: usize, v: &State) -> Result<State> {
    Operator::Gauge(a, b).apply(v)
}

pub fn apply_gauge_root(r: GaugeRootLabel, v: &State) -> Result<State> {
    Operator::GaugeRoot(r).apply(v)
}

pub fn apply_inversion(a: usize, v: &State) -> Result<State> {
    Operator::Inversion(a).apply(v)
}

pub fn apply_energy(v: &State) -> Result<State> {
    Operator::Energy.apply(v)
}

pub fn apply_q(v: &State) -> Result<State> {
    Operator::Q.apply(v)
}

/// Which Clifford vectors to start from in [`from_noncovariant`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SpinChoice {
    One(SpinState),
    All,
}

/// Covariant image of a noncovariant Green word: the factors
/// `b̃†_α^a = c†_{α,a} e^a` are applied right to left to `|0⟩ ⊗ ω`.
pub fn from_noncovariant(params: &ModelParams, word: &[(usize, usize)], spin: SpinChoice) -> Result<Vec<State>> {
    let op = Operator::Product(word.iter().map(|&(alpha, a)| Operator::Noncovariant(alpha, a)).collect());
    let compiled = op.compile(params)?;
    let spins = match spin {
        SpinChoice::One(s) => {
            if s.len() != params.q() {
                return Err(Error::IndexOutOfRange(format!(
                    "spin state has {} entries, expected {}",
                    s.len(),
                    params.q()
                )));
            }
            vec![s]
        }
        SpinChoice::All => SpinState::all(params.q()),
    };
    Ok(spins.into_iter().map(|s| compiled.apply(&State::vacuum(*params, s))).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{enumerate_level, inner_product, OrbitalMonomial, DEFAULT_CAPACITY};

    fn params(n: usize, p: usize) -> ModelParams {
        ModelParams::new(n, p).unwrap()
    }

    fn ket(pr: &ModelParams, modes: &[(usize, usize, Sign, u32)], spin: &[i8]) -> State {
        let mut orb = OrbitalMonomial::vacuum(pr);
        for &(a, k, s, e) in modes {
            orb.exponents_mut()[pr.mode(a - 1, k - 1, s)] += e;
        }
        State::from_ket(*pr, BasisKet::new(orb, SpinState::from_signs(spin).unwrap()))
    }

    fn vac(pr: &ModelParams, spin: &[i8]) -> State {
        ket(pr, &[], spin)
    }

    use Sign::{Minus, Plus};

    #[test]
    fn spin_raise_examples() {
        let pr = params(1, 2);
        let out = apply_spin_raise(1, Plus, &vac(&pr, &[-1])).unwrap();
        assert_eq!(out, vac(&pr, &[1]).scaled(&Scalar::sqrt2()));
        assert!(apply_spin_raise(1, Plus, &vac(&pr, &[1])).unwrap().is_zero());
        let pr = params(1, 4);
        let out = apply_spin_raise(2, Minus, &vac(&pr, &[1, 1])).unwrap();
        assert_eq!(out, vac(&pr, &[1, -1]).scaled(&Scalar::sqrt2()));
        // prefix sign from the first spin
        let out = apply_spin_raise(2, Minus, &vac(&pr, &[-1, 1])).unwrap();
        assert_eq!(out, vac(&pr, &[-1, -1]).scaled(&-Scalar::sqrt2()));
        assert!(matches!(apply_spin_raise(3, Plus, &vac(&pr, &[1, 1])), Err(Error::IndexOutOfRange(_))));
    }

    #[test]
    fn parity_examples() {
        let pr = params(1, 1);
        assert_eq!(apply_ep(&vac(&pr, &[])).unwrap(), vac(&pr, &[]));
        let pr = params(1, 3);
        assert_eq!(apply_ep(&vac(&pr, &[1])).unwrap(), vac(&pr, &[1]));
        assert_eq!(apply_ep(&vac(&pr, &[-1])).unwrap(), vac(&pr, &[-1]).scaled(&Scalar::from_int(-1)));
        assert!(matches!(apply_ep(&vac(&params(1, 2), &[1])), Err(Error::Parity { .. })));
    }

    #[test]
    fn creator_examples() {
        let pr = params(1, 2);
        let u = apply_creator(1, &vac(&pr, &[1])).unwrap();
        assert_eq!(u, ket(&pr, &[(1, 1, Plus, 1)], &[-1]).scaled(&Scalar::sqrt2()));
        assert_eq!(inner_product(&u, &u).unwrap(), Scalar::from_int(2));
        let pr1 = params(1, 1);
        let mut orb = OrbitalMonomial::vacuum(&pr1);
        orb.exponents_mut()[0] = 1;
        let expect = State::from_ket(pr1, BasisKet::new(orb, SpinState::all_up(0)));
        assert_eq!(apply_creator(1, &vac(&pr1, &[])).unwrap(), expect);
        let out = apply_creator(1, &ket(&pr, &[(1, 1, Plus, 1)], &[-1])).unwrap();
        assert_eq!(out, ket(&pr, &[(1, 1, Plus, 1), (1, 1, Minus, 1)], &[1]).scaled(&Scalar::sqrt2()));
        assert!(apply_creator(2, &vac(&pr, &[1])).is_err());
    }

    #[test]
    fn annihilator_examples() {
        for (n, p) in [(1, 1), (1, 2), (2, 3), (2, 4)] {
            let pr = params(n, p);
            for s in SpinState::all(pr.q()) {
                let v = State::vacuum(pr, s);
                for a in 1..=n {
                    assert!(apply_annihilator(a, &v).unwrap().is_zero());
                }
            }
        }
        let pr = params(1, 2);
        let out = apply_annihilator(1, &ket(&pr, &[(1, 1, Plus, 1)], &[-1])).unwrap();
        assert_eq!(out, vac(&pr, &[1]).scaled(&Scalar::sqrt2()));
        assert!(apply_annihilator(1, &ket(&pr, &[(1, 1, Plus, 1)], &[1])).unwrap().is_zero());
    }

    #[test]
    fn even_examples() {
        let pr = params(1, 2);
        let ca = EvenOpLabel::new(EvenKind::CreateAnnih, 1, 1);
        assert_eq!(apply_even(ca, &vac(&pr, &[1])).unwrap(), vac(&pr, &[1]).scaled(&Scalar::from_int(2)));
        let cc = EvenOpLabel::new(EvenKind::CreateCreate, 1, 1);
        let out = apply_even(cc, &vac(&pr, &[1])).unwrap();
        assert_eq!(out, ket(&pr, &[(1, 1, Plus, 1), (1, 1, Minus, 1)], &[1]).scaled(&Scalar::from_int(4)));
        // {b†_1, b_2} A†_2^{1+}|0⟩ω₊ = b_2 b†_1 (…) = 2 A†_1^{1+}|0⟩ω₊
        let pr = params(2, 2);
        let v = ket(&pr, &[(2, 1, Plus, 1)], &[1]);
        let out = apply_even(EvenOpLabel::new(EvenKind::CreateAnnih, 1, 2), &v).unwrap();
        assert_eq!(out, ket(&pr, &[(1, 1, Plus, 1)], &[1]).scaled(&Scalar::from_int(2)));
    }

    #[test]
    fn even_operators_match_odd_anticommutators() {
        for (n, p) in [(1, 2), (2, 2), (2, 3), (1, 5)] {
            let pr = params(n, p);
            let kets: Vec<State> = (0..=2)
                .flat_map(|d| enumerate_level(&pr, d, DEFAULT_CAPACITY).unwrap())
                .map(|k| State::from_ket(pr, k))
                .collect();
            for a in 1..=n {
                for b in 1..=n {
                    let cases = [
                        (EvenKind::CreateAnnih, Operator::Creator(a), Operator::Annihilator(b)),
                        (EvenKind::CreateCreate, Operator::Creator(a), Operator::Creator(b)),
                        (EvenKind::AnnihAnnih, Operator::Annihilator(a), Operator::Annihilator(b)),
                    ];
                    for (kind, x, y) in cases {
                        let direct = Operator::Even(EvenOpLabel::new(kind, a, b)).compile(&pr).unwrap();
                        let composed = Operator::anticommutator(x, y).compile(&pr).unwrap();
                        for v in &kets {
                            let d = direct.apply(v);
                            assert_eq!(d, composed.apply(v), "{kind:?} {a} {b} n={n} p={p}");
                            for (k, _) in d.terms() {
                                assert_eq!(k.spin, v.first_term().unwrap().0.spin);
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn gauge_examples() {
        let pr = params(1, 2);
        let v = vac(&pr, &[1]);
        assert_eq!(apply_gauge(1, 2, &v).unwrap(), v.scaled(&Scalar::ratio(1, 2)));
        let w = ket(&pr, &[(1, 1, Plus, 1)], &[-1]);
        assert_eq!(apply_gauge(1, 2, &w).unwrap(), w.scaled(&Scalar::ratio(1, 2)));
        let comm = Operator::commutator(Operator::Gauge(1, 2), Operator::Creator(1));
        assert!(comm.apply(&v).unwrap().is_zero());
        assert!(matches!(apply_gauge(1, 1, &v), Err(Error::IndexOutOfRange(_))));
    }

    #[test]
    fn cartan_generators_are_diagonal_with_gauge_weight() {
        for (n, p) in [(1, 2), (2, 3), (1, 4), (2, 5)] {
            let pr = params(n, p);
            for d in 0..=2 {
                for k in enumerate_level(&pr, d, DEFAULT_CAPACITY).unwrap() {
                    let w = k.gauge_weight(&pr);
                    let v = State::from_ket(pr, k);
                    for kk in 1..=pr.q() {
                        let out = apply_gauge(2 * kk - 1, 2 * kk, &v).unwrap();
                        assert_eq!(out, v.scaled(&Scalar::from_rational(w.0[kk - 1].to_rational())));
                    }
                }
            }
        }
    }

    #[test]
    fn gauge_root_examples() {
        let pr = params(1, 4);
        let v = vac(&pr, &[1, 1]);
        assert!(apply_gauge_root(GaugeRootLabel::PlusPlus(1, 2), &v).unwrap().is_zero());
        // ½ e^{1−} e^{2−} ω(+,+): e^{2−} sees 2s^1 = +1, so the result is +ω(−,−)
        let out = apply_gauge_root(GaugeRootLabel::MinusMinus(1, 2), &v).unwrap();
        assert_eq!(out, vac(&pr, &[-1, -1]));
        let pr = params(1, 3);
        let w = ket(&pr, &[(1, 1, Plus, 1)], &[1]);
        assert!(apply_gauge_root(GaugeRootLabel::ShortPlus(1), &w).unwrap().is_zero());
        assert!(apply_gauge_root(GaugeRootLabel::ShortPlus(1), &vac(&params(1, 4), &[1, 1])).is_err());
        assert!(apply_gauge_root(GaugeRootLabel::PlusPlus(2, 1), &vac(&params(1, 4), &[1, 1])).is_err());
    }

    /// Root vectors as combinations of `G^{ab}`:
    /// `G_{σδk+τδl} = (i/2)(G^{2k-1,2l-1} − στ G^{2k,2l} + iσ G^{2k,2l-1} + iτ G^{2k-1,2l})`,
    /// `G_{σδk} = (i/√2)(G^{2k-1,p} + iσ G^{2k,p})`.
    fn root_from_generators(label: GaugeRootLabel) -> Operator {
        let (k, sk, rest) = label.parts();
        let i = Scalar::i();
        let half_i = if rest.is_some() { &i * &Scalar::ratio(1, 2) } else { &i * &sqrt2_inv() };
        let s = |x: Sign| Scalar::from_int(x.as_i64());
        let terms = match rest {
            Some((l, sl)) => vec![
                Operator::Gauge(2 * k - 1, 2 * l - 1),
                Operator::scaled(-(s(sk) * s(sl)), Operator::Gauge(2 * k, 2 * l)),
                Operator::scaled(&i * &s(sk), Operator::Gauge(2 * k, 2 * l - 1)),
                Operator::scaled(&i * &s(sl), Operator::Gauge(2 * k - 1, 2 * l)),
            ],
            None => vec![Operator::Gauge(2 * k - 1, 0), Operator::scaled(&i * &s(sk), Operator::Gauge(2 * k, 0))],
        };
        Operator::scaled(half_i, Operator::Sum(terms))
    }

    #[test]
    fn root_vectors_agree_with_generator_combinations() {
        for (n, p) in [(1, 3), (2, 3), (1, 4), (2, 4), (1, 5), (2, 5)] {
            let pr = params(n, p);
            let mut labels = positive_gauge_roots(&pr);
            labels.extend(negative_gauge_roots(&pr));
            let kets: Vec<State> = (0..=2)
                .flat_map(|d| enumerate_level(&pr, d, DEFAULT_CAPACITY).unwrap())
                .map(|k| State::from_ket(pr, k))
                .collect();
            for label in labels {
                let fixed = match root_from_generators(label) {
                    Operator::Scaled(c, inner) => match *inner {
                        Operator::Sum(mut ts) => {
                            for t in &mut ts {
                                fix_short_index(t, p);
                            }
                            Operator::Scaled(c, Box::new(Operator::Sum(ts)))
                        }
                        _ => unreachable!(),
                    },
                    _ => unreachable!(),
                };
                let direct = Operator::GaugeRoot(label).compile(&pr).unwrap();
                let combo = fixed.compile(&pr).unwrap();
                let root = label.root(pr.q());
                for v in &kets {
                    let out = direct.apply(v);
                    assert_eq!(out, combo.apply(v), "{label} n={n} p={p} on {v}");
                    let w0 = v.first_term().unwrap().0.gauge_weight(&pr);
                    for (k, _) in out.terms() {
                        let w = k.gauge_weight(&pr);
                        for ((a, b), r) in w.0.iter().zip(&w0.0).zip(&root) {
                            assert_eq!(a.twice(), b.twice() + 2 * r);
                        }
                    }
                }
            }
        }
    }

    fn fix_short_index(op: &mut Operator, p: usize) {
        match op {
            Operator::Gauge(_, b) if *b == 0 => *b = p,
            Operator::Scaled(_, inner) => fix_short_index(inner, p),
            _ => {}
        }
    }

    #[test]
    fn inversion_examples() {
        let pr = params(1, 2);
        let v = ket(&pr, &[(1, 1, Plus, 1)], &[1]);
        let out = apply_inversion(1, &v).unwrap();
        // orbital part −A†^{1−}; spin part −i ē e^1 sends ω₊ to a multiple of ω₋
        assert_eq!(out.len(), 1);
        let (k, _) = out.first_term().unwrap();
        assert_eq!(k.orb, ket(&pr, &[(1, 1, Minus, 1)], &[1]).first_term().unwrap().0.orb);
        let spin_only = apply_inversion(1, &vac(&pr, &[1])).unwrap();
        let (_, c_orb) = out.first_term().unwrap();
        let (_, c_spin) = spin_only.first_term().unwrap();
        assert_eq!(c_orb, &-c_spin);
        assert!(matches!(apply_inversion(1, &vac(&params(1, 3), &[1])), Err(Error::Parity { .. })));
    }

    #[test]
    fn inversions_are_involutions_commuting_with_annihilators() {
        for (n, p) in [(1, 2), (2, 2), (1, 4), (2, 4)] {
            let pr = params(n, p);
            for d in 0..=2 {
                for k in enumerate_level(&pr, d, DEFAULT_CAPACITY).unwrap() {
                    let v = State::from_ket(pr, k);
                    for a in 1..=p {
                        let once = apply_inversion(a, &v).unwrap();
                        assert_eq!(apply_inversion(a, &once).unwrap(), v);
                        for alpha in 1..=n {
                            let lhs = apply_inversion(a, &apply_annihilator(alpha, &once).unwrap()).unwrap();
                            assert_eq!(lhs, apply_annihilator(alpha, &v).unwrap());
                            let lhs = apply_inversion(a, &apply_creator(alpha, &once).unwrap()).unwrap();
                            assert_eq!(lhs, apply_creator(alpha, &v).unwrap());
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn energy_examples() {
        let pr = params(2, 3);
        let v = vac(&pr, &[1]);
        assert_eq!(apply_energy(&v).unwrap(), v.scaled(&Scalar::from_int(3)));
        let pr = params(1, 2);
        let w = ket(&pr, &[(1, 1, Plus, 2)], &[1]);
        assert_eq!(apply_energy(&w).unwrap(), w.scaled(&Scalar::from_int(3)));
        let u = ket(&pr, &[(1, 1, Minus, 1)], &[1]);
        let lhs = apply_energy(&apply_creator(1, &u).unwrap()).unwrap();
        let rhs = apply_creator(1, &apply_energy(&u).unwrap()).unwrap();
        assert_eq!(lhs.minus(&rhs), apply_creator(1, &u).unwrap());
    }

    #[test]
    fn energy_matches_anticommutator_definition() {
        let pr = params(2, 3);
        let e_def = Operator::scaled(
            Scalar::ratio(1, 2),
            Operator::Sum(
                (1..=2).map(|a| Operator::anticommutator(Operator::Annihilator(a), Operator::Creator(a))).collect(),
            ),
        );
        for d in 0..=2 {
            for k in enumerate_level(&pr, d, DEFAULT_CAPACITY).unwrap() {
                let v = State::from_ket(pr, k);
                assert_eq!(e_def.apply(&v).unwrap(), apply_energy(&v).unwrap());
            }
        }
    }

    #[test]
    fn q_examples() {
        let pr = params(1, 2);
        let v = vac(&pr, &[1]);
        assert_eq!(apply_q(&v).unwrap(), v);
        let w = ket(&pr, &[(1, 1, Plus, 1)], &[1]);
        assert_eq!(apply_q(&w).unwrap(), w.scaled(&Scalar::from_int(2)));
        let u = ket(&pr, &[(1, 1, Plus, 1)], &[-1]);
        assert!(apply_q(&u).unwrap().is_zero());
    }

    #[test]
    fn q_forms_agree() {
        for (n, p) in [(1, 1), (1, 2), (2, 2), (1, 3), (2, 3), (1, 4)] {
            let pr = params(n, p);
            let q1 = Operator::Q.compile(&pr).unwrap();
            let q2 = Operator::QSpinOrbit.compile(&pr).unwrap();
            let q3 = Operator::scaled(
                Scalar::ratio(1, 2),
                Operator::Sum(
                    (1..=n).map(|a| Operator::commutator(Operator::Annihilator(a), Operator::Creator(a))).collect(),
                ),
            )
            .compile(&pr)
            .unwrap();
            for d in 0..=3 {
                for k in enumerate_level(&pr, d, DEFAULT_CAPACITY).unwrap() {
                    let v = State::from_ket(pr, k);
                    let a = q1.apply(&v);
                    assert_eq!(a, q2.apply(&v), "n={n} p={p} {v}");
                    assert_eq!(a, q3.apply(&v));
                }
            }
        }
    }

    #[test]
    fn clifford_relations_on_spin_basis() {
        for p in 1..=6 {
            let pr = params(1, p);
            for s in SpinState::all(pr.q()) {
                let v = State::vacuum(pr, s);
                for a in 1..=p {
                    for b in 1..=p {
                        let ac = Operator::anticommutator(Operator::Clifford(a), Operator::Clifford(b));
                        let expect = if a == b { v.scaled(&Scalar::from_int(2)) } else { State::zero(pr) };
                        assert_eq!(ac.apply(&v).unwrap(), expect, "p={p} a={a} b={b}");
                    }
                }
            }
        }
    }

    #[test]
    fn noncovariant_examples() {
        let pr = params(1, 1);
        let out = from_noncovariant(&pr, &[(1, 1)], SpinChoice::All).unwrap();
        assert_eq!(out.len(), 1);
        assert_eq!(out[0], apply_creator(1, &vac(&pr, &[])).unwrap());
        assert_eq!(inner_product(&out[0], &out[0]).unwrap(), Scalar::one());
        for p in [2, 3, 4] {
            let pr = params(1, p);
            let ab = from_noncovariant(&pr, &[(1, 1), (1, 2)], SpinChoice::All).unwrap();
            let ba = from_noncovariant(&pr, &[(1, 2), (1, 1)], SpinChoice::All).unwrap();
            for (x, y) in ab.iter().zip(&ba) {
                assert!(!x.is_zero());
                assert_eq!(x, &y.scaled(&Scalar::from_int(-1)));
            }
        }
        assert!(from_noncovariant(&pr, &[(1, 2)], SpinChoice::All).is_err());
    }
}
