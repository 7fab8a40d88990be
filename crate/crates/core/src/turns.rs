//! Closed-form headland turn lengths and the minimum-length turn selector.
//!
//! `d` is the sweep-axis distance between the centerlines of the two tracks and
//! `r_min` the minimum turning radius of the machine.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::tracks::MachineSpec;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TurnError {
    #[error("{kind} turn undefined for d = {d}, r_min = {r_min}")]
    Domain { kind: TurnKind, d: f64, r_min: f64 },
    #[error("no feasible turn for d = {d}")]
    NoManeuver { d: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TurnKind {
    Omega,
    Pi,
    Tee,
}

impl fmt::Display for TurnKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TurnKind::Omega => "omega",
            TurnKind::Pi => "pi",
            TurnKind::Tee => "tee",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TurnCost {
    pub length: f64,
    pub kind: TurnKind,
}

/// Which T-turn expression to evaluate.
///
/// `Paper` uses `acos((d + 2) / (4 r_min))` literally, where the constant 2 is
/// not scaled by the radius. `Normalized` uses `acos((d + 2 r_min) / (4 r_min))`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TeeFormula {
    #[default]
    Paper,
    Normalized,
}

impl FromStr for TeeFormula {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "paper" => Ok(TeeFormula::Paper),
            "normalized" => Ok(TeeFormula::Normalized),
            other => Err(format!(
                "unknown tee formula '{other}' (expected paper|normalized)"
            )),
        }
    }
}

impl fmt::Display for TeeFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TeeFormula::Paper => "paper",
            TeeFormula::Normalized => "normalized",
        })
    }
}

fn valid_inputs(d: f64, r_min: f64) -> bool {
    d.is_finite() && r_min.is_finite() && r_min > 0.0
}

/// Loop turn, defined for `0 < d <= 2 r_min`.
pub fn omega_length(d: f64, r_min: f64) -> Result<f64, TurnError> {
    if !valid_inputs(d, r_min) || d <= 0.0 || d > 2.0 * r_min {
        return Err(TurnError::Domain {
            kind: TurnKind::Omega,
            d,
            r_min,
        });
    }
    let arg = (2.0 * r_min + d) / (4.0 * r_min);
    Ok(r_min * (3.0 * PI - 4.0 * arg.asin()))
}

/// Rounded-corner turn, defined for `d >= 2 r_min`.
pub fn pi_length(d: f64, r_min: f64) -> Result<f64, TurnError> {
    if !valid_inputs(d, r_min) || d < 2.0 * r_min {
        return Err(TurnError::Domain {
            kind: TurnKind::Pi,
            d,
            r_min,
        });
    }
    Ok(d + (PI - 2.0) * r_min)
}

/// Three-point turn with reversing; defined while the arccos argument is in [-1, 1].
pub fn tee_length(d: f64, r_min: f64) -> Result<f64, TurnError> {
    tee_length_with(d, r_min, TeeFormula::Paper)
}

pub fn tee_length_with(d: f64, r_min: f64, formula: TeeFormula) -> Result<f64, TurnError> {
    if !valid_inputs(d, r_min) {
        return Err(TurnError::Domain {
            kind: TurnKind::Tee,
            d,
            r_min,
        });
    }
    let offset = match formula {
        TeeFormula::Paper => 2.0,
        TeeFormula::Normalized => 2.0 * r_min,
    };
    let arg = (d + offset) / (4.0 * r_min);
    if !(-1.0..=1.0).contains(&arg) {
        return Err(TurnError::Domain {
            kind: TurnKind::Tee,
            d,
            r_min,
        });
    }
    Ok(r_min * (2.0 * PI + arg.acos()))
}

/// Turn-length evaluator for one machine.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CostModel {
    pub spec: MachineSpec,
    pub tee_formula: TeeFormula,
}

impl CostModel {
    pub fn new(spec: MachineSpec, tee_formula: TeeFormula) -> Self {
        Self { spec, tee_formula }
    }

    /// Shortest feasible maneuver between tracks `d` apart. Ties go to the
    /// loop turn.
    pub fn min_turn(&self, d: f64) -> Result<TurnCost, TurnError> {
        let r = self.spec.r_min;
        if d.is_nan() || d <= 0.0 || !d.is_finite() {
            return Err(TurnError::NoManeuver { d });
        }
        if d >= 2.0 * r {
            return Ok(TurnCost {
                length: pi_length(d, r)?,
                kind: TurnKind::Pi,
            });
        }
        let mut best: Option<TurnCost> = omega_length(d, r).ok().map(|length| TurnCost {
            length,
            kind: TurnKind::Omega,
        });
        if self.spec.reverse_capable {
            if let Ok(length) = tee_length_with(d, r, self.tee_formula) {
                if best.is_none_or(|b| length < b.length) {
                    best = Some(TurnCost {
                        length,
                        kind: TurnKind::Tee,
                    });
                }
            }
        }
        best.ok_or(TurnError::NoManeuver { d })
    }

    /// Length of a specific maneuver, used when re-measuring stored plans.
    pub fn length_of(&self, kind: TurnKind, d: f64) -> Result<f64, TurnError> {
        let r = self.spec.r_min;
        match kind {
            TurnKind::Omega => omega_length(d, r),
            TurnKind::Pi => pi_length(d, r),
            TurnKind::Tee => tee_length_with(d, r, self.tee_formula),
        }
    }
}

/// [`CostModel::min_turn`] with the literal T-turn expression.
pub fn min_turn(d: f64, spec: &MachineSpec) -> Result<TurnCost, TurnError> {
    CostModel::new(*spec, TeeFormula::Paper).min_turn(d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn spec(r: f64, reverse: bool) -> MachineSpec {
        MachineSpec::new(1.0, r, reverse).unwrap()
    }

    // Reference values from a 50-digit mpmath evaluation:
    // 3*pi - 4*asin(3/4) = 6.03252964484345568317...
    // 2*pi + acos(3/4)   = 7.00591955499300208810...
    const OMEGA_1_1: f64 = 6.032_529_644_843_455;
    const TEE_1_1: f64 = 7.005_919_554_993_002;

    #[test]
    fn omega_examples() {
        assert!((omega_length(2.0, 1.0).unwrap() - PI).abs() < 1e-12);
        assert!((omega_length(1.0, 1.0).unwrap() - OMEGA_1_1).abs() < 1e-12);
        assert!(omega_length(2.5, 1.0).is_err());
        assert!(omega_length(0.0, 1.0).is_err());
    }

    #[test]
    fn pi_examples() {
        assert!((pi_length(2.0, 1.0).unwrap() - PI).abs() < 1e-12);
        assert!((pi_length(3.0, 1.0).unwrap() - (1.0 + PI)).abs() < 1e-12);
        assert!(pi_length(1.0, 1.0).is_err());
    }

    #[test]
    fn tee_examples() {
        assert!((tee_length(2.0, 1.0).unwrap() - 2.0 * PI).abs() < 1e-12);
        assert!((tee_length(1.0, 1.0).unwrap() - TEE_1_1).abs() < 1e-12);
        assert!(tee_length(3.0, 1.0).is_err());
        // normalized variant scales with the radius
        let a = tee_length_with(1.0, 2.0, TeeFormula::Normalized).unwrap();
        let b = tee_length_with(0.5, 1.0, TeeFormula::Normalized).unwrap();
        assert!((a - 2.0 * b).abs() < 1e-12);
    }

    #[test]
    fn min_turn_examples() {
        let t = min_turn(2.0, &spec(1.0, true)).unwrap();
        assert_eq!(t.kind, TurnKind::Pi);
        assert!((t.length - PI).abs() < 1e-12);
        let t = min_turn(1.0, &spec(1.0, true)).unwrap();
        assert_eq!(t.kind, TurnKind::Omega);
        assert!((t.length - OMEGA_1_1).abs() < 1e-12);
        let t = min_turn(1.0, &spec(1.0, false)).unwrap();
        assert_eq!(t.kind, TurnKind::Omega);
        assert!(min_turn(0.0, &spec(1.0, true)).is_err());
    }

    #[test]
    fn tee_wins_when_shorter() {
        // With the normalized formula and small d, the T-turn beats the loop.
        let m = CostModel::new(spec(1.0, true), TeeFormula::Normalized);
        let t = m.min_turn(0.1).unwrap();
        let omega = omega_length(0.1, 1.0).unwrap();
        let tee = tee_length_with(0.1, 1.0, TeeFormula::Normalized).unwrap();
        assert_eq!(
            t.kind,
            if tee < omega {
                TurnKind::Tee
            } else {
                TurnKind::Omega
            }
        );
        assert!(t.length <= omega && t.length <= tee);
    }

    proptest! {
        #[test]
        fn boundary_consistency(r in 0.01f64..100.0) {
            let o = omega_length(2.0 * r, r).unwrap();
            let p = pi_length(2.0 * r, r).unwrap();
            prop_assert!((o - PI * r).abs() <= 1e-12 * PI * r);
            prop_assert!((p - PI * r).abs() <= 1e-12 * PI * r);
        }

        #[test]
        fn monotonicity(r in 0.1f64..10.0, a in 0.01f64..0.99, b in 0.01f64..0.99, k in 1.01f64..5.0) {
            let (lo, hi) = if a < b { (a, b) } else { (b, a) };
            prop_assume!(hi - lo > 1e-6);
            prop_assert!(omega_length(2.0 * r * lo, r).unwrap() > omega_length(2.0 * r * hi, r).unwrap());
            let d = 2.0 * r * k;
            prop_assert!(pi_length(d + 0.1, r).unwrap() > pi_length(d, r).unwrap());
        }

        #[test]
        fn scale_covariance(r in 0.1f64..10.0, f in 0.01f64..1.0, g in 1.0f64..4.0, k in 0.1f64..10.0) {
            let d = 2.0 * r * f;
            let o1 = omega_length(k * d, k * r).unwrap();
            let o0 = omega_length(d, r).unwrap();
            prop_assert!((o1 - k * o0).abs() <= 1e-9 * o1.abs().max(1.0));
            let d = 2.0 * r * g;
            let p1 = pi_length(k * d, k * r).unwrap();
            let p0 = pi_length(d, r).unwrap();
            prop_assert!((p1 - k * p0).abs() <= 1e-9 * p1.abs().max(1.0));
        }

        #[test]
        fn min_turn_never_exceeds_feasible(d in 0.01f64..20.0, r in 0.1f64..5.0, rev: bool, norm: bool) {
            let formula = if norm { TeeFormula::Normalized } else { TeeFormula::Paper };
            let m = CostModel::new(spec(r, rev), formula);
            let best = m.min_turn(d).unwrap();
            let mut feasible = vec![];
            if let Ok(v) = omega_length(d, r) { feasible.push(v); }
            if let Ok(v) = pi_length(d, r) { feasible.push(v); }
            if rev { if let Ok(v) = tee_length_with(d, r, formula) { feasible.push(v); } }
            prop_assert!(!feasible.is_empty());
            // Pi dominates whenever it is available.
            if d >= 2.0 * r {
                prop_assert_eq!(best.kind, TurnKind::Pi);
            } else {
                for v in feasible { prop_assert!(best.length <= v); }
            }
        }
    }
}
