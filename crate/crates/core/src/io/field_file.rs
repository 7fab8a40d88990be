//! Versioned JSON field description.
//!
//! ```json
//! {
//!   "schema_version": 1,
//!   "boundary": [[0, 0], [10, 0], [10, 10], [0, 10]],
//!   "obstacles": [[[4, 4], [6, 4], [6, 6], [4, 6]]],
//!   "driving_direction_deg": 90,
//!   "operating_width_m": 1.0,
//!   "r_min_m": 1.0,
//!   "reverse_capable": true
//! }
//! ```

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::IoError;
use crate::decomposition::SweepFrame;
use crate::geometry::{FreeSpace, GeometryError, Point, Polygon};
use crate::planner::Field;
use crate::tracks::{MachineSpec, SpecError};

pub const FIELD_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldFile {
    pub schema_version: u32,
    pub boundary: Vec<[f64; 2]>,
    #[serde(default)]
    pub obstacles: Vec<Vec<[f64; 2]>>,
    /// Driving direction, degrees counter-clockwise from +x.
    pub driving_direction_deg: f64,
    pub operating_width_m: f64,
    pub r_min_m: f64,
    #[serde(default)]
    pub reverse_capable: bool,
}

fn ring(points: &[[f64; 2]]) -> Vec<Point> {
    points.iter().map(|&p| Point::from(p)).collect()
}

impl FieldFile {
    /// Validates every field and builds the planning inputs.
    pub fn to_field(&self) -> Result<Field, IoError> {
        if self.schema_version != FIELD_SCHEMA_VERSION {
            return Err(IoError::semantic(
                "schema_version",
                format!(
                    "unsupported version {} (expected {FIELD_SCHEMA_VERSION})",
                    self.schema_version
                ),
            ));
        }
        let spec = MachineSpec::new(self.operating_width_m, self.r_min_m, self.reverse_capable)
            .map_err(|e| {
                let field = match e {
                    SpecError::Width(_) => "operating_width_m",
                    SpecError::Radius(_) => "r_min_m",
                };
                IoError::semantic(field, e)
            })?;
        if !self.driving_direction_deg.is_finite() {
            return Err(IoError::semantic("driving_direction_deg", "must be finite"));
        }
        let frame = SweepFrame::from_degrees(self.driving_direction_deg);
        let boundary =
            Polygon::new(ring(&self.boundary)).map_err(|e| IoError::semantic("boundary", e))?;
        let obstacles = self
            .obstacles
            .iter()
            .enumerate()
            .map(|(i, o)| {
                Polygon::new(ring(o)).map_err(|e| IoError::semantic(format!("obstacles[{i}]"), e))
            })
            .collect::<Result<Vec<_>, _>>()?;
        let free = FreeSpace::new(boundary, obstacles).map_err(|e| {
            let field = match e {
                GeometryError::ObstacleOutside { index } => format!("obstacles[{index}]"),
                GeometryError::ObstaclesOverlap { a, .. } => format!("obstacles[{a}]"),
                _ => "boundary".to_string(),
            };
            IoError::semantic(field, e)
        })?;
        Ok(Field::new(free, spec, frame))
    }
}

pub fn parse_field(text: &str) -> Result<FieldFile, IoError> {
    serde_json::from_str(text).map_err(IoError::from_json)
}

/// Reads, parses and validates a field file.
pub fn load_field(path: &Path) -> Result<(FieldFile, Field), IoError> {
    let text = fs::read_to_string(path).map_err(|e| IoError::file(path, e))?;
    let file = parse_field(&text)?;
    let field = file.to_field()?;
    Ok((file, field))
}

pub fn write_field(path: &Path, file: &FieldFile) -> Result<(), IoError> {
    super::write_json(path, file)
}
