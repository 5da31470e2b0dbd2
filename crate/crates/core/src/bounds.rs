//! Analytic lower bounds on `C^X(rho) + C^Z(rho)` for a qubit `rho` measured
//! in two bases.
//!
//! Every bound is a scalar function of `c`, the largest squared overlap
//! between the two bases, and `P = Tr[rho^2]`. Both lie in `[1/2, 1]` for
//! qubits. Throughout, `p = (1 + sqrt(2P - 1)) / 2` is the larger eigenvalue
//! of `rho` and `H(rho) = h(p)`.
//!
//! Bounds can be negative, i.e. vacuous; [`BoundValue`] carries the raw value
//! and the value clamped at zero.

use std::collections::BTreeMap;
use std::fmt;

use crate::coherence::MeasureKind;
use crate::error::check_range;
use crate::numlin::{h2, IDENTITY_TOL};
use crate::Result;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BoundKind {
    /// Maassen-Uffink entropic relation minus twice the state entropy.
    MaassenUffinkRe,
    /// Berta et al.'s mixed-state strengthening.
    BertaRe,
    /// Sanchez-Ruiz's qubit relation minus twice the state entropy.
    SanchezRuizRe,
    /// Korzekwa et al.'s relation, `-(1 - H(rho)) log2 c`.
    KorzekwaRe,
    /// Purity-dependent relative entropy bound from three-vector overlap geometry.
    PurityRe,
    /// Purity-dependent coherence of formation bound.
    PurityCf,
    /// Purity-dependent l1 bound; attainable for every `(c, P)`.
    PurityL1,
}

impl BoundKind {
    pub const ALL: [BoundKind; 7] = [
        BoundKind::MaassenUffinkRe,
        BoundKind::BertaRe,
        BoundKind::SanchezRuizRe,
        BoundKind::KorzekwaRe,
        BoundKind::PurityRe,
        BoundKind::PurityCf,
        BoundKind::PurityL1,
    ];

    /// Column name used in scan output and reports.
    pub fn tag(self) -> &'static str {
        match self {
            BoundKind::MaassenUffinkRe => "mu_re",
            BoundKind::BertaRe => "berta_re",
            BoundKind::SanchezRuizRe => "sanchez_re",
            BoundKind::KorzekwaRe => "korzekwa_re",
            BoundKind::PurityRe => "thm2_re",
            BoundKind::PurityCf => "thm3_cf",
            BoundKind::PurityL1 => "thm4_l1",
        }
    }

    /// The coherence measure whose two-basis sum this bound constrains.
    pub fn measure(self) -> MeasureKind {
        match self {
            BoundKind::PurityCf => MeasureKind::Formation,
            BoundKind::PurityL1 => MeasureKind::L1,
            _ => MeasureKind::RelativeEntropy,
        }
    }

    pub fn from_tag(tag: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.tag() == tag)
    }
}

impl fmt::Display for BoundKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundRequest {
    pub kind: BoundKind,
    pub c: f64,
    pub purity: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundValue {
    pub raw: f64,
    pub clamped: f64,
}

impl BoundValue {
    pub fn new(raw: f64) -> Self {
        Self {
            raw,
            clamped: raw.max(0.0),
        }
    }
}

fn check_c(c: f64) -> Result<f64> {
    check_range("c", c, 0.5, 1.0, IDENTITY_TOL)
}

fn check_purity(purity: f64) -> Result<f64> {
    check_range("purity", purity, 0.5, 1.0, IDENTITY_TOL)
}

/// Larger eigenvalue `p` of a qubit with purity `P`: the root of
/// `2p^2 - 2p + 1 = P` in `[1/2, 1]`.
pub fn purity_to_p(purity: f64) -> Result<f64> {
    let purity = check_purity(purity)?;
    Ok((1.0 + (2.0 * purity - 1.0).max(0.0).sqrt()) / 2.0)
}

struct Inputs {
    c: f64,
    purity: f64,
    state_entropy: f64,
}

fn inputs(c: f64, purity: f64) -> Result<Inputs> {
    let c = check_c(c)?;
    let p = purity_to_p(purity)?;
    Ok(Inputs {
        c,
        purity: check_purity(purity)?,
        state_entropy: h2(p),
    })
}

/// `-log2 c - 2 H(rho)`.
pub fn bound_mu_re(c: f64, purity: f64) -> Result<BoundValue> {
    let i = inputs(c, purity)?;
    Ok(BoundValue::new(-i.c.log2() - 2.0 * i.state_entropy))
}

/// `-log2 c - H(rho)`.
pub fn bound_berta_re(c: f64, purity: f64) -> Result<BoundValue> {
    let i = inputs(c, purity)?;
    Ok(BoundValue::new(-i.c.log2() - i.state_entropy))
}

/// `h((1 + sqrt(2c - 1)) / 2) - 2 H(rho)`.
pub fn bound_sanchez_re(c: f64, purity: f64) -> Result<BoundValue> {
    let i = inputs(c, purity)?;
    let arg = (1.0 + (2.0 * i.c - 1.0).max(0.0).sqrt()) / 2.0;
    Ok(BoundValue::new(h2(arg) - 2.0 * i.state_entropy))
}

/// `-(1 - H(rho)) log2 c`.
pub fn bound_korzekwa_re(c: f64, purity: f64) -> Result<BoundValue> {
    let i = inputs(c, purity)?;
    Ok(BoundValue::new(-(1.0 - i.state_entropy) * i.c.log2()))
}

/// `h((sqrt(2P - 1)(2 sqrt(c) - 1) + 1) / 2) - H(rho)`.
pub fn bound_purity_re(c: f64, purity: f64) -> Result<BoundValue> {
    let i = inputs(c, purity)?;
    let arg = ((2.0 * i.purity - 1.0).max(0.0).sqrt() * (2.0 * i.c.sqrt() - 1.0) + 1.0) / 2.0;
    Ok(BoundValue::new(h2(arg) - i.state_entropy))
}

/// `h((1 + sqrt(1 - 4(2P - 1) sqrt(c)(1 - sqrt(c)))) / 2)`.
pub fn bound_purity_cf(c: f64, purity: f64) -> Result<BoundValue> {
    let i = inputs(c, purity)?;
    let sc = i.c.sqrt();
    let inner = 1.0 - 4.0 * (2.0 * i.purity - 1.0) * sc * (1.0 - sc);
    Ok(BoundValue::new(h2((1.0 + inner.max(0.0).sqrt()) / 2.0)))
}

/// `2 sqrt((2P - 1) c (1 - c))`.
pub fn bound_purity_l1(c: f64, purity: f64) -> Result<BoundValue> {
    let i = inputs(c, purity)?;
    Ok(BoundValue::new(2.0 * ((2.0 * i.purity - 1.0) * i.c * (1.0 - i.c)).max(0.0).sqrt()))
}

pub fn evaluate(req: &BoundRequest) -> Result<BoundValue> {
    let f = match req.kind {
        BoundKind::MaassenUffinkRe => bound_mu_re,
        BoundKind::BertaRe => bound_berta_re,
        BoundKind::SanchezRuizRe => bound_sanchez_re,
        BoundKind::KorzekwaRe => bound_korzekwa_re,
        BoundKind::PurityRe => bound_purity_re,
        BoundKind::PurityCf => bound_purity_cf,
        BoundKind::PurityL1 => bound_purity_l1,
    };
    f(req.c, req.purity)
}

/// Every bound at `(c, purity)`, keyed in [`BoundKind::ALL`] order.
pub fn evaluate_all(c: f64, purity: f64) -> Result<BTreeMap<BoundKind, BoundValue>> {
    BoundKind::ALL
        .into_iter()
        .map(|kind| Ok((kind, evaluate(&BoundRequest { kind, c, purity })?)))
        .collect()
}
