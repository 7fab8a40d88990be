//! Parallel coverage tracks inside a cell.

use thiserror::Error;

use crate::decomposition::{Cell, CellDecomposition, End, SweepFrame};
use crate::geometry::{clip_rings, point_in_ring, Line, Point, Segment, EPS};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpecError {
    #[error("operating width must be positive and finite, got {0}")]
    Width(f64),
    #[error("minimum turning radius must be positive and finite, got {0}")]
    Radius(f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MachineSpec {
    pub operating_width: f64,
    pub r_min: f64,
    pub reverse_capable: bool,
}

impl MachineSpec {
    pub fn new(operating_width: f64, r_min: f64, reverse_capable: bool) -> Result<Self, SpecError> {
        if !(operating_width > 0.0 && operating_width.is_finite()) {
            return Err(SpecError::Width(operating_width));
        }
        if !(r_min > 0.0 && r_min.is_finite()) {
            return Err(SpecError::Radius(r_min));
        }
        Ok(Self {
            operating_width,
            r_min,
            reverse_capable,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Track {
    pub id: usize,
    pub cell_id: usize,
    pub centerline: Segment,
    pub lower_end: Point,
    pub upper_end: Point,
    /// Sweep-axis position of the centerline.
    pub offset: f64,
}

impl Track {
    pub fn end(&self, side: End) -> Point {
        match side {
            End::Lower => self.lower_end,
            End::Upper => self.upper_end,
        }
    }

    pub fn length(&self) -> f64 {
        self.centerline.length()
    }
}

/// Sweep offsets of the tracks covering `[s0, s1]` with width `w`: the first
/// swath starts flush with `s0` and the last is clamped flush with `s1`.
pub fn track_offsets(s0: f64, s1: f64, w: f64) -> Vec<f64> {
    let extent = s1 - s0;
    if extent <= w {
        return vec![s0 + 0.5 * extent];
    }
    let count = ((extent / w) - 1e-9).ceil().max(1.0) as usize;
    (0..count)
        .map(|k| (s0 + 0.5 * w + k as f64 * w).min(s1 - 0.5 * w))
        .collect()
}

/// Tracks of a single cell, numbered from 0 in sweep order.
///
/// Each centerline is the full chord of the cell at its offset; headland
/// margins are applied by the planner.
pub fn generate_tracks(cell: &Cell, spec: &MachineSpec, frame: &SweepFrame) -> Vec<Track> {
    let ring: Vec<Point> = cell
        .polygon
        .vertices()
        .iter()
        .map(|&p| frame.to_frame(p))
        .collect();
    let (s0, s1) = cell.sweep_interval;
    track_offsets(s0, s1, spec.operating_width)
        .into_iter()
        .filter_map(|s| {
            let line = Line::new(Point::new(s, 0.0), Point::new(0.0, 1.0));
            let (t0, t1) = clip_rings(&[&ring], line)
                .into_iter()
                .filter(|&(a, b)| point_in_ring(&ring, Point::new(s, 0.5 * (a + b))))
                .max_by(|a, b| (a.1 - a.0).total_cmp(&(b.1 - b.0)))?;
            let lower = frame.to_world(Point::new(s, t0));
            let upper = frame.to_world(Point::new(s, t1));
            Some((s, lower, upper))
        })
        .enumerate()
        .map(|(id, (offset, lower, upper))| Track {
            id,
            cell_id: cell.id,
            centerline: Segment::new(lower, upper),
            lower_end: lower,
            upper_end: upper,
            offset,
        })
        .collect()
}

/// Tracks of every cell, numbered globally in cell order.
pub fn generate_all_tracks(d: &CellDecomposition, spec: &MachineSpec) -> Vec<Track> {
    let mut out = Vec::new();
    for cell in &d.cells {
        for mut t in generate_tracks(cell, spec, &d.frame) {
            t.id = out.len();
            out.push(t);
        }
    }
    out
}

pub fn track_distance(a: &Track, b: &Track) -> f64 {
    (a.offset - b.offset).abs()
}

/// Whether a track pair is spaced by exactly the operating width.
pub fn uniformly_spaced(a: &Track, b: &Track, w: f64) -> bool {
    (track_distance(a, b) - w).abs() <= EPS
}
