//! Self-contained plan output and its metric re-measurement.

use std::fs;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use super::{FieldFile, IoError};
use crate::geometry::polyline_length;
use crate::planner::{CoveragePlan, Leg, PlanComparison, PlanMetrics, PlannerOptions};
use crate::turns::{CostModel, TeeFormula, TurnKind};

pub const PLAN_SCHEMA_VERSION: u32 = 1;

/// Planner settings as they were applied.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OptionsEcho {
    pub exact_threshold: usize,
    pub tee_formula: TeeFormula,
    pub headland_margin_m: f64,
    pub seed: u64,
}

impl OptionsEcho {
    pub fn new(options: &PlannerOptions, field: &FieldFile) -> Self {
        Self {
            exact_threshold: options.exact_threshold,
            tee_formula: options.tee_formula,
            headland_margin_m: options.headland_margin.unwrap_or(2.0 * field.r_min_m),
            seed: options.seed,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlanFile {
    pub schema_version: u32,
    pub field: FieldFile,
    pub options: OptionsEcho,
    pub plan: CoveragePlan,
}

impl PlanFile {
    pub fn new(field: &FieldFile, options: &PlannerOptions, plan: CoveragePlan) -> Self {
        Self {
            schema_version: PLAN_SCHEMA_VERSION,
            field: field.clone(),
            options: OptionsEcho::new(options, field),
            plan,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CompareReport {
    pub traditional: PlanFile,
    pub global: PlanFile,
    pub savings_ratio: f64,
}

impl CompareReport {
    pub fn new(field: &FieldFile, options: &PlannerOptions, c: PlanComparison) -> Self {
        Self {
            traditional: PlanFile::new(field, options, c.traditional),
            global: PlanFile::new(field, options, c.global),
            savings_ratio: c.savings_ratio,
        }
    }
}

/// Re-measures every leg from its coordinates and the echoed inputs.
///
/// Track and travel legs are measured as polylines. A turn is re-evaluated
/// with the turn model at the sweep-axis spacing of its endpoints.
pub fn recompute_metrics(file: &PlanFile) -> Result<PlanMetrics, IoError> {
    let field = file.field.to_field()?;
    let model = CostModel::new(field.spec, file.options.tee_formula);
    let axis = field.frame.sweep_axis();
    let r = field.spec.r_min;
    let mut legs = file.plan.legs.clone();
    for (i, leg) in legs.iter_mut().enumerate() {
        if let Leg::Transit {
            maneuver,
            length_m,
            path,
            ..
        } = leg
        {
            let (Some(&a), Some(&b)) = (path.first(), path.last()) else {
                return Err(IoError::semantic(format!("plan.legs[{i}]"), "empty path"));
            };
            *length_m = match maneuver.turn_kind() {
                None => polyline_length(path),
                Some(kind) => {
                    let mut d = (b - a).dot(axis).abs();
                    // re-measured spacing may sit a rounding error outside the domain
                    if (d - 2.0 * r).abs() <= 1e-9 * r.max(1.0) {
                        d = match kind {
                            TurnKind::Pi => d.max(2.0 * r),
                            TurnKind::Omega => d.min(2.0 * r),
                            TurnKind::Tee => d,
                        };
                    }
                    model
                        .length_of(kind, d)
                        .map_err(|e| IoError::semantic(format!("plan.legs[{i}]"), e))?
                }
            };
        }
    }
    Ok(PlanMetrics::from_legs(
        &legs,
        file.plan.metrics.cells_visited.clone(),
    ))
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), IoError> {
    let mut text = serde_json::to_string_pretty(value).expect("plan types serialize");
    text.push('\n');
    fs::write(path, text).map_err(|e| IoError::file(path, e))
}

fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, IoError> {
    let text = fs::read_to_string(path).map_err(|e| IoError::file(path, e))?;
    serde_json::from_str(&text).map_err(IoError::from_json)
}

pub fn read_plan(path: &Path) -> Result<PlanFile, IoError> {
    read_json(path)
}

#[cfg(test)]
mod tests {
    use super::super::parse_field;
    use super::*;
    use crate::planner::{plan_global, plan_traditional};

    fn demo() -> FieldFile {
        parse_field(
            r#"{
            "schema_version": 1,
            "boundary": [[0, 0], [10, 0], [10, 10], [0, 10]],
            "obstacles": [[[5, 3], [7, 5], [5, 7], [3, 5]]],
            "driving_direction_deg": 90,
            "operating_width_m": 1.0,
            "r_min_m": 1.0,
            "reverse_capable": true
        }"#,
        )
        .unwrap()
    }

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() <= 1e-6 * b.abs().max(1.0)
    }

    #[test]
    fn metrics_survive_serialization() {
        let file = demo();
        let field = file.to_field().unwrap();
        let opts = PlannerOptions::default();
        for plan in [
            plan_traditional(&field, &opts).unwrap(),
            plan_global(&field, &opts).unwrap(),
        ] {
            let pf = PlanFile::new(&file, &opts, plan);
            let text = serde_json::to_string(&pf).unwrap();
            let back: PlanFile = serde_json::from_str(&text).unwrap();
            assert_eq!(back, pf);
            let m = recompute_metrics(&back).unwrap();
            assert!(close(m.productive_m, pf.plan.metrics.productive_m));
            assert!(close(m.nonproductive_m, pf.plan.metrics.nonproductive_m));
            assert_eq!(m.turn_counts, pf.plan.metrics.turn_counts);
        }
    }
}
