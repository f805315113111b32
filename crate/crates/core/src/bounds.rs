//! Closed-form performance ratios of WSPT and WSEPT.
//!
//! Every function returns the ratio `1 + β` itself. Machine counts accept the
//! limit `m → ∞` through [`Machines::Infinite`].

use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

const SQRT2: f64 = std::f64::consts::SQRT_2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Machines {
    Finite(usize),
    Infinite,
}

impl Machines {
    pub fn finite(self) -> Option<usize> {
        match self {
            Self::Finite(m) => Some(m),
            Self::Infinite => None,
        }
    }
}

impl From<usize> for Machines {
    fn from(m: usize) -> Self {
        Self::Finite(m)
    }
}

impl fmt::Display for Machines {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Finite(m) => write!(f, "{m}"),
            Self::Infinite => f.write_str("inf"),
        }
    }
}

impl FromStr for Machines {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("inf") {
            return Ok(Self::Infinite);
        }
        match s.parse::<usize>() {
            Ok(m) if m >= 1 => Ok(Self::Finite(m)),
            _ => Err(Error::Domain(format!(
                "machine count must be a positive integer or `inf`, got `{s}`"
            ))),
        }
    }
}

impl Serialize for Machines {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Self::Finite(m) => serializer.serialize_u64(*m as u64),
            Self::Infinite => serializer.serialize_str("inf"),
        }
    }
}

fn check_delta(delta: f64) -> Result<()> {
    if delta.is_finite() && delta >= 0.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "delta must be a finite nonnegative number, got {delta}"
        )))
    }
}

fn check_machines(m: Machines) -> Result<()> {
    match m {
        Machines::Finite(0) => Err(Error::Domain("machine count must be at least 1".into())),
        _ => Ok(()),
    }
}

fn check_alpha_open(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha <= 1.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("alpha must lie in (0, 1], got {alpha}")))
    }
}

/// Kawaguchi–Kyan ratio `½(1+√2)`.
pub fn kk() -> f64 {
    0.5 * (1.0 + SQRT2)
}

/// `1 + ½(1+Δ)(1 − 1/m)`.
pub fn msu(m: Machines, delta: f64) -> Result<f64> {
    check_machines(m)?;
    check_delta(delta)?;
    let spread = match m {
        Machines::Finite(m) => 1.0 - 1.0 / m as f64,
        Machines::Infinite => 1.0,
    };
    Ok(1.0 + 0.5 * (1.0 + delta) * spread)
}

/// `1 + ½(√2−1)(1+Δ)`.
pub fn wsept_red(delta: f64) -> Result<f64> {
    check_delta(delta)?;
    Ok(1.0 + 0.5 * (SQRT2 - 1.0) * (1.0 + delta))
}

/// `1 + ⅙ max{2, 1+Δ}`.
pub fn wsept_orange(delta: f64) -> Result<f64> {
    check_delta(delta)?;
    Ok(1.0 + f64::max(2.0, 1.0 + delta) / 6.0)
}

/// The machine-independent envelope of the α-point analysis.
fn green_beta(delta: f64) -> f64 {
    0.5 / (1.0 + f64::min(2.0, (2.0 * (1.0 + delta)).sqrt()))
}

/// `1 + ½ · (1+Δ) / (1 + min{2, √(2(1+Δ))})`.
pub fn wsept_green(delta: f64) -> Result<f64> {
    check_delta(delta)?;
    Ok(1.0 + green_beta(delta) * (1.0 + delta))
}

/// `1 + (m−1)/(2αm)` for the weighted sum of α-points.
pub fn eei_alpha(m: Machines, alpha: f64) -> Result<f64> {
    check_machines(m)?;
    check_alpha_open(alpha)?;
    let spread = match m {
        Machines::Finite(m) => (m as f64 - 1.0) / m as f64,
        Machines::Infinite => 1.0,
    };
    Ok(1.0 + spread / (2.0 * alpha))
}

/// `1 + 1/(2α + √(8α))`, valid only for `α ∈ [½, 1]`.
pub fn kk_alpha(alpha: f64) -> Result<f64> {
    if !(0.5..=1.0).contains(&alpha) {
        return Err(Error::Domain(format!(
            "the alpha-point Kawaguchi-Kyan ratio needs alpha in [1/2, 1], got {alpha}"
        )));
    }
    Ok(1.0 + 1.0 / (2.0 * alpha + (8.0 * alpha).sqrt()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Objective {
    /// WSEPT measured on the weighted sum of α-points.
    AlphaPoints,
    /// WSEPT measured on weighted completion times, using an α-point bound for WSPT.
    CompletionTimes,
}

/// Transfers a WSPT ratio `1+β` for α-points to WSEPT.
pub fn wsept_from_wspt(beta: f64, delta: f64, alpha: f64, objective: Objective) -> Result<f64> {
    if !(beta.is_finite() && beta >= 0.0) {
        return Err(Error::Domain(format!("beta must be nonnegative, got {beta}")));
    }
    check_delta(delta)?;
    check_alpha_open(alpha)?;
    Ok(match objective {
        Objective::AlphaPoints => 1.0 + beta * (1.0 + delta),
        Objective::CompletionTimes => 1.0 + beta * f64::max(1.0, alpha * (1.0 + delta)),
    })
}

fn nearest_int(x: f64) -> usize {
    (x + 0.5).floor() as usize
}

/// Number of long jobs in the fixed-`m` worst case: nearest integer to `(1 − √2/2) m`.
pub fn k_m(m: usize) -> Result<usize> {
    if m < 2 {
        return Err(Error::Domain(format!("k_m needs at least 2 machines, got {m}")));
    }
    Ok(nearest_int((1.0 - SQRT2 / 2.0) * m as f64))
}

/// Center `m − √(2m²−1)/2` of the half-open unit interval that contains `k_m`.
pub fn k_interval_center(m: usize) -> f64 {
    let m = m as f64;
    m - (2.0 * m * m - 1.0).sqrt() / 2.0
}

/// Worst ratio with `m` machines and `k` long jobs: `1 + (√((2m−k)k) − k)/(2m)`.
pub fn long_job_ratio(m: usize, k: f64) -> f64 {
    let mf = m as f64;
    1.0 + (((2.0 * mf - k) * k).sqrt() - k) / (2.0 * mf)
}

/// Long-job length maximizing the ratio for `k` long jobs: `m/(√((2m−k)k) − k)`.
pub fn long_job_length(m: usize, k: usize) -> Result<f64> {
    if m < 2 || k == 0 || k >= m {
        return Err(Error::Domain(format!(
            "long-job length needs 1 <= k < m, got k={k}, m={m}"
        )));
    }
    let (mf, kf) = (m as f64, k as f64);
    Ok(mf / (((2.0 * mf - kf) * kf).sqrt() - kf))
}

/// `(√((2m−k_m)k_m) − k_m)/m`, tending to `√2 − 1`.
fn fixed_m_beta2(m: Machines) -> f64 {
    match m {
        Machines::Finite(0 | 1) => 0.0,
        Machines::Finite(m) => {
            let k = k_m(m).expect("m >= 2") as f64;
            let mf = m as f64;
            (((2.0 * mf - k) * k).sqrt() - k) / mf
        }
        Machines::Infinite => SQRT2 - 1.0,
    }
}

/// Tight WSPT ratio for `P || Σ w_j C_j` with `m` machines.
pub fn wspt_m(m: Machines) -> Result<f64> {
    check_machines(m)?;
    Ok(1.0 + 0.5 * fixed_m_beta2(m))
}

/// `1 + ½ (√((2m−k_m)k_m) − k_m)/m · (1+Δ)`.
pub fn wsept_magenta(m: Machines, delta: f64) -> Result<f64> {
    check_machines(m)?;
    check_delta(delta)?;
    Ok(1.0 + 0.5 * fixed_m_beta2(m) * (1.0 + delta))
}

/// Best known WSEPT ratio: the smaller of the fixed-`m` and the envelope bound.
pub fn composite(m: Machines, delta: f64) -> Result<f64> {
    check_machines(m)?;
    check_delta(delta)?;
    let beta = f64::min(0.5 * fixed_m_beta2(m), green_beta(delta));
    Ok(1.0 + beta * (1.0 + delta))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BoundId {
    Kk,
    Msu,
    WseptRed,
    WseptOrange,
    WseptGreen,
    EeiAlpha,
    KkAlpha,
    WsptM,
    Composite,
    WseptMagenta,
}

impl BoundId {
    pub const ALL: [BoundId; 10] = [
        Self::Kk,
        Self::Msu,
        Self::WseptRed,
        Self::WseptOrange,
        Self::WseptGreen,
        Self::EeiAlpha,
        Self::KkAlpha,
        Self::WsptM,
        Self::Composite,
        Self::WseptMagenta,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Self::Kk => "kk",
            Self::Msu => "msu",
            Self::WseptRed => "wsept-red",
            Self::WseptOrange => "wsept-orange",
            Self::WseptGreen => "wsept-green",
            Self::EeiAlpha => "eei-alpha",
            Self::KkAlpha => "kk-alpha",
            Self::WsptM => "wspt-m",
            Self::Composite => "composite",
            Self::WseptMagenta => "wsept-magenta",
        }
    }

    pub fn uses_machines(self) -> bool {
        matches!(
            self,
            Self::Msu | Self::EeiAlpha | Self::WsptM | Self::Composite | Self::WseptMagenta
        )
    }

    pub fn uses_delta(self) -> bool {
        matches!(
            self,
            Self::Msu | Self::WseptRed | Self::WseptOrange | Self::WseptGreen | Self::Composite | Self::WseptMagenta
        )
    }

    pub fn uses_alpha(self) -> bool {
        matches!(self, Self::EeiAlpha | Self::KkAlpha)
    }

    /// Evaluates the formula; parameters it does not use are dropped from the result.
    pub fn evaluate(self, params: BoundParams) -> Result<BoundValue> {
        let need = |name: &str| Error::Domain(format!("formula `{}` needs parameter {name}", self.as_str()));
        let m = if self.uses_machines() {
            Some(params.m.ok_or_else(|| need("m"))?)
        } else {
            None
        };
        let delta = if self.uses_delta() {
            Some(params.delta.ok_or_else(|| need("delta"))?)
        } else {
            None
        };
        let alpha = if self.uses_alpha() {
            Some(params.alpha.ok_or_else(|| need("alpha"))?)
        } else {
            None
        };
        let value = match self {
            Self::Kk => kk(),
            Self::Msu => msu(m.unwrap(), delta.unwrap())?,
            Self::WseptRed => wsept_red(delta.unwrap())?,
            Self::WseptOrange => wsept_orange(delta.unwrap())?,
            Self::WseptGreen => wsept_green(delta.unwrap())?,
            Self::EeiAlpha => eei_alpha(m.unwrap(), alpha.unwrap())?,
            Self::KkAlpha => kk_alpha(alpha.unwrap())?,
            Self::WsptM => wspt_m(m.unwrap())?,
            Self::Composite => composite(m.unwrap(), delta.unwrap())?,
            Self::WseptMagenta => wsept_magenta(m.unwrap(), delta.unwrap())?,
        };
        Ok(BoundValue {
            formula: self,
            m,
            delta,
            alpha,
            value,
        })
    }
}

impl fmt::Display for BoundId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for BoundId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|id| id.as_str() == s)
            .ok_or_else(|| Error::UnknownFormula(s.to_string()))
    }
}

impl Serialize for BoundId {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct BoundParams {
    pub m: Option<Machines>,
    pub delta: Option<f64>,
    pub alpha: Option<f64>,
}

/// A bound value together with the formula and parameters that produced it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundValue {
    pub formula: BoundId,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m: Option<Machines>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    pub value: f64,
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    const INF: Machines = Machines::Infinite;

    fn fin(m: usize) -> Machines {
        Machines::Finite(m)
    }

    fn delta_grid() -> impl Iterator<Item = f64> {
        (0..=400).map(|i| i as f64 * 0.025)
    }

    #[test]
    fn kk_examples() {
        assert_abs_diff_eq!(kk(), 1.2071067811865475, epsilon = 1e-15);
        assert_abs_diff_eq!(kk(), kk_alpha(1.0).unwrap(), epsilon = 1e-15);
        assert_abs_diff_eq!(kk(), wspt_m(fin(1_000_000)).unwrap(), epsilon = 1e-6);
        assert_eq!(wspt_m(INF).unwrap(), kk());
    }

    #[test]
    fn msu_examples() {
        assert_eq!(msu(INF, 1.0).unwrap(), 2.0);
        assert_eq!(msu(INF, 0.0).unwrap(), 1.5);
        for d in [0.0, 0.5, 3.0] {
            assert_eq!(msu(fin(1), d).unwrap(), 1.0);
        }
        assert_eq!(msu(fin(2), 0.0).unwrap(), 1.25);
        assert!(msu(fin(0), 0.0).is_err());
        assert!(msu(fin(2), -0.1).is_err());
    }

    #[test]
    fn red_orange_green_examples() {
        assert_abs_diff_eq!(wsept_red(0.0).unwrap(), kk(), epsilon = 1e-15);
        assert_abs_diff_eq!(wsept_red(1.0).unwrap(), SQRT2, epsilon = 1e-15);
        let reds: Vec<f64> = delta_grid().map(|d| wsept_red(d).unwrap()).collect();
        assert!(reds.windows(2).all(|w| w[1] > w[0]));

        assert_abs_diff_eq!(wsept_orange(0.0).unwrap(), 4.0 / 3.0, epsilon = 1e-15);
        assert_abs_diff_eq!(wsept_orange(1.0).unwrap(), 4.0 / 3.0, epsilon = 1e-15);
        assert_abs_diff_eq!(wsept_orange(5.0).unwrap(), 2.0, epsilon = 1e-15);

        assert_abs_diff_eq!(wsept_green(1.0).unwrap(), 4.0 / 3.0, epsilon = 1e-15);
        assert_abs_diff_eq!(wsept_green(0.0).unwrap(), kk(), epsilon = 1e-15);
        for d in [1.0, 2.0, 3.5, 10.0] {
            let slope = (wsept_green(d + 0.5).unwrap() - wsept_green(d).unwrap()) / 0.5;
            assert_abs_diff_eq!(slope, 1.0 / 6.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn eei_and_kk_alpha_examples() {
        for m in 1..20 {
            assert_abs_diff_eq!(eei_alpha(fin(m), 1.0).unwrap(), 1.5 - 0.5 / m as f64, epsilon = 1e-15);
        }
        assert_eq!(eei_alpha(fin(1), 0.3).unwrap(), 1.0);
        assert_eq!(eei_alpha(INF, 0.5).unwrap(), 2.0);
        assert!(eei_alpha(fin(2), 0.0).is_err());

        assert_abs_diff_eq!(kk_alpha(0.5).unwrap(), 4.0 / 3.0, epsilon = 1e-15);
        assert_abs_diff_eq!(
            kk_alpha(0.75).unwrap(),
            1.0 + 1.0 / (1.5 + 6f64.sqrt()),
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(kk_alpha(0.75).unwrap(), 1.253197, epsilon = 1e-6);
        assert!(kk_alpha(0.49).is_err());
    }

    #[test]
    fn transfer_examples() {
        let beta = (SQRT2 - 1.0) / 2.0;
        for d in delta_grid() {
            let via = wsept_from_wspt(beta, d, 1.0, Objective::CompletionTimes).unwrap();
            assert_abs_diff_eq!(via, wsept_red(d).unwrap(), epsilon = 1e-12);
            let via = wsept_from_wspt(1.0 / 3.0, d, 0.5, Objective::CompletionTimes).unwrap();
            assert_abs_diff_eq!(via, wsept_orange(d).unwrap(), epsilon = 1e-12);
            let alpha_form = wsept_from_wspt(beta, d, 1.0, Objective::AlphaPoints).unwrap();
            assert_abs_diff_eq!(alpha_form, wsept_red(d).unwrap(), epsilon = 1e-12);
        }
        // The generalized EEI bound never beats the MSU bound after transfer.
        for m in 1..=12 {
            for d in delta_grid().step_by(8) {
                for a in (1..=20).map(|i| i as f64 / 20.0) {
                    let beta = eei_alpha(fin(m), a).unwrap() - 1.0;
                    let t = wsept_from_wspt(beta, d, a, Objective::CompletionTimes).unwrap();
                    assert!(t >= msu(fin(m), d).unwrap() - 1e-12, "m={m} d={d} a={a}");
                }
            }
        }
        assert!(wsept_from_wspt(-1.0, 0.0, 1.0, Objective::AlphaPoints).is_err());
    }

    #[test]
    fn k_m_examples() {
        assert_eq!(k_m(2).unwrap(), 1);
        assert_eq!(k_m(7).unwrap(), 2);
        assert!(k_m(1).is_err());
        for m in 2..=10_000 {
            let k = k_m(m).unwrap() as f64;
            let u = k_interval_center(m);
            assert!(k >= u - 0.5 && k < u + 0.5, "m={m}");
        }
    }

    #[test]
    fn wspt_m_examples() {
        let two = wspt_m(fin(2)).unwrap();
        assert_abs_diff_eq!(two, 1.0 + (3f64.sqrt() - 1.0) / 4.0, epsilon = 1e-15);
        assert_abs_diff_eq!(two, 1.1830127, epsilon = 1e-7);
        assert_eq!(wspt_m(fin(1)).unwrap(), 1.0);
        for m in 2..=25 {
            let v = wspt_m(fin(m)).unwrap();
            assert!(v > 1.18 && v < kk(), "m={m} v={v}");
        }
    }

    #[test]
    fn composite_examples() {
        assert_abs_diff_eq!(composite(INF, 0.0).unwrap(), kk(), epsilon = 1e-15);
        for m in 1..40 {
            assert!(composite(fin(m), 1.0).unwrap() <= 4.0 / 3.0 + 1e-15);
        }
        assert_abs_diff_eq!(composite(fin(2), 0.0).unwrap(), 1.1830127, epsilon = 1e-7);
    }

    #[test]
    fn magenta_examples() {
        for d in delta_grid() {
            let expect = 1.0 + 0.25 * (3f64.sqrt() - 1.0) * (1.0 + d);
            assert_abs_diff_eq!(wsept_magenta(fin(2), d).unwrap(), expect, epsilon = 1e-14);
        }
        assert_eq!(wsept_magenta(fin(2), 0.0).unwrap(), wspt_m(fin(2)).unwrap());
        assert!(wsept_magenta(fin(2), 5.0).unwrap() > wsept_green(5.0).unwrap());
    }

    #[test]
    fn composite_is_min_of_magenta_and_green() {
        for m in (1..60).map(fin).chain([INF]) {
            for d in delta_grid() {
                let c = composite(m, d).unwrap();
                let min = f64::min(wsept_magenta(m, d).unwrap(), wsept_green(d).unwrap());
                assert_abs_diff_eq!(c, min, epsilon = 1e-14);
            }
        }
    }

    #[test]
    fn green_is_lower_envelope() {
        for d in delta_grid() {
            let g = wsept_green(d).unwrap();
            assert!(g <= wsept_red(d).unwrap() + 1e-15);
            assert!(g <= wsept_orange(d).unwrap() + 1e-15);
        }
    }

    #[test]
    fn alpha_bounds_decrease() {
        let kks: Vec<f64> = (0..=100).map(|i| kk_alpha(0.5 + i as f64 / 200.0).unwrap()).collect();
        assert!(kks.windows(2).all(|w| w[1] < w[0]));
        for m in [2, 5, 1000] {
            let eei: Vec<f64> = (1..=100)
                .map(|i| eei_alpha(fin(m), i as f64 / 100.0).unwrap())
                .collect();
            assert!(eei.windows(2).all(|w| w[1] < w[0]));
        }
    }

    #[test]
    fn fixed_m_gap_is_quadratic() {
        let worst = (10..=10_000)
            .map(|m| (kk() - wspt_m(fin(m)).unwrap()) * (m * m) as f64)
            .fold(0.0, f64::max);
        assert!(worst < 1.0, "scaled gap {worst}");
    }

    #[test]
    fn k_m_maximizes_long_job_ratio() {
        for m in 2..=100 {
            let best = (1..m).map(|k| long_job_ratio(m, k as f64)).fold(f64::MIN, f64::max);
            assert_abs_diff_eq!(wspt_m(fin(m)).unwrap(), best, epsilon = 1e-15);
        }
    }

    #[test]
    fn ids_round_trip_and_evaluate() {
        for id in BoundId::ALL {
            assert_eq!(id.as_str().parse::<BoundId>().unwrap(), id);
        }
        assert!("nope".parse::<BoundId>().is_err());
        let params = BoundParams {
            m: Some(fin(2)),
            delta: Some(0.0),
            alpha: Some(1.0),
        };
        let v = BoundId::Composite.evaluate(params).unwrap();
        assert_eq!(v.alpha, None);
        assert_abs_diff_eq!(v.value, 1.1830127, epsilon = 1e-7);
        assert!(BoundId::WseptGreen.evaluate(BoundParams::default()).is_err());
        for id in BoundId::ALL {
            for d in [0.0, 0.7, 4.0] {
                let p = BoundParams {
                    m: Some(fin(3)),
                    delta: Some(d),
                    alpha: Some(0.6),
                };
                assert!(id.evaluate(p).unwrap().value >= 1.0);
            }
        }
        assert_eq!("inf".parse::<Machines>().unwrap(), INF);
        assert!("0".parse::<Machines>().is_err());
    }
}
