//! Exact JSON form of a [`State`]; rationals travel as `"num/den"` strings.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::{BasisKet, ModelParams, OrbitalMonomial, Sign, SpinState, State};
use crate::scalar::Scalar;

pub const FORMAT_VERSION: &str = "1";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Header {
    pub format_version: String,
    pub n: usize,
    pub p: usize,
}

impl Header {
    pub fn new(params: &ModelParams) -> Self {
        Header { format_version: FORMAT_VERSION.into(), n: params.n(), p: params.p() }
    }

    pub fn params(&self) -> Result<ModelParams> {
        if self.format_version != FORMAT_VERSION {
            return Err(Error::Parse(format!("unsupported format_version {:?}", self.format_version)));
        }
        ModelParams::new(self.n, self.p)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Coef {
    pub re: String,
    pub im: String,
    pub re_s2: String,
    pub im_s2: String,
}

/// Exponents of `A†_α^{k+}`, `A†_α^{k−}` (rows α, columns k) and `b†_α^p`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Orb {
    pub plus: Vec<Vec<u32>>,
    pub minus: Vec<Vec<u32>>,
    pub odd: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Term {
    pub orb: Orb,
    pub spin: Vec<i8>,
    pub coef: Coef,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StateFile {
    pub header: Header,
    pub terms: Vec<Term>,
}

impl StateFile {
    pub fn from_state(state: &State) -> Self {
        let pr = state.params();
        let terms = state
            .terms()
            .map(|(k, c)| {
                let grid = |sign| -> Vec<Vec<u32>> {
                    (0..pr.n()).map(|a| (0..pr.q()).map(|q| k.orb.exponents()[pr.mode(a, q, sign)]).collect()).collect()
                };
                let odd =
                    (0..pr.n()).map(|a| if pr.is_odd() { k.orb.exponents()[pr.odd_mode(a)] } else { 0 }).collect();
                let [re, im, re_s2, im_s2] = c.to_strings();
                Term {
                    orb: Orb { plus: grid(Sign::Plus), minus: grid(Sign::Minus), odd },
                    spin: k.spin.signs(),
                    coef: Coef { re, im, re_s2, im_s2 },
                }
            })
            .collect();
        StateFile { header: Header::new(pr), terms }
    }

    pub fn to_state(&self) -> Result<State> {
        let pr = self.header.params()?;
        let (n, q) = (pr.n(), pr.q());
        let mut terms = Vec::with_capacity(self.terms.len());
        for (i, t) in self.terms.iter().enumerate() {
            let bad = |what: &str| Error::Parse(format!("term {i}: {what}"));
            let shape_ok = |m: &Vec<Vec<u32>>| m.len() == n && m.iter().all(|r| r.len() == q);
            if !shape_ok(&t.orb.plus) || !shape_ok(&t.orb.minus) {
                return Err(bad(&format!("plus/minus must be {n}×{q} matrices")));
            }
            if t.orb.odd.len() != n {
                return Err(bad(&format!("odd must have {n} entries")));
            }
            if !pr.is_odd() && t.orb.odd.iter().any(|&x| x != 0) {
                return Err(bad("odd exponents must vanish for even p"));
            }
            let mut orb = OrbitalMonomial::vacuum(&pr);
            for a in 0..n {
                for k in 0..q {
                    orb.exponents_mut()[pr.mode(a, k, Sign::Plus)] = t.orb.plus[a][k];
                    orb.exponents_mut()[pr.mode(a, k, Sign::Minus)] = t.orb.minus[a][k];
                }
                if pr.is_odd() {
                    orb.exponents_mut()[pr.odd_mode(a)] = t.orb.odd[a];
                }
            }
            if t.spin.len() != q {
                return Err(bad(&format!("spin must have {q} entries")));
            }
            let spin = SpinState::from_signs(&t.spin).map_err(|e| bad(&e.to_string()))?;
            let c = &t.coef;
            let coef = Scalar::from_strings([&c.re, &c.im, &c.re_s2, &c.im_s2])?;
            terms.push((BasisKet::new(orb, spin), coef));
        }
        State::from_terms(pr, terms)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("state files serialize") + "\n"
    }

    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("state file: {e}")))
    }
}

pub fn read_state(path: &Path) -> Result<State> {
    StateFile::parse(&std::fs::read_to_string(path)?)?.to_state()
}

/// Write through a sibling temporary file and rename into place.
pub fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let dir = path.parent().filter(|d| !d.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let name = path.file_name().ok_or_else(|| Error::Parse(format!("not a file path: {}", path.display())))?;
    let tmp = dir.join(format!(".{}.tmp{}", name.to_string_lossy(), std::process::id()));
    std::fs::write(&tmp, contents)?;
    std::fs::rename(&tmp, path).inspect_err(|_| {
        let _ = std::fs::remove_file(&tmp);
    })?;
    Ok(())
}
