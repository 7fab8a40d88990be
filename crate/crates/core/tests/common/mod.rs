//! Fixtures and generators shared by the integration tests.
#![allow(dead_code)]

use std::f64::consts::PI;
use std::path::PathBuf;

use fieldcover::decomposition::{decompose, SweepFrame};
use fieldcover::geometry::{FreeSpace, Point, Polygon};
use fieldcover::io::load_field;
use fieldcover::planner::{CoveragePlan, Field, Leg};
use fieldcover::tracks::{generate_all_tracks, MachineSpec};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub struct Fixture {
    pub name: String,
    pub field: Field,
    pub multi_cell: bool,
}

pub fn fixture_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}

pub fn poly(pts: &[(f64, f64)]) -> Polygon {
    Polygon::new(pts.iter().map(|&(x, y)| Point::new(x, y)).collect()).unwrap()
}

pub fn rect(w: f64, h: f64) -> Polygon {
    poly(&[(0.0, 0.0), (w, 0.0), (w, h), (0.0, h)])
}

pub fn diamond(cx: f64, cy: f64, r: f64) -> Polygon {
    poly(&[(cx, cy - r), (cx + r, cy), (cx, cy + r), (cx - r, cy)])
}

pub fn field(boundary: Polygon, obstacles: Vec<Polygon>, w: f64, r: f64, deg: f64) -> Field {
    Field::new(
        FreeSpace::new(boundary, obstacles).unwrap(),
        MachineSpec::new(w, r, true).unwrap(),
        SweepFrame::from_degrees(deg),
    )
}

fn from_file(name: &str) -> Field {
    load_field(&fixture_dir().join(format!("{name}.field.json")))
        .unwrap()
        .1
}

/// The bundled field files plus a few fields built in code. `skewed_pentagon`
/// has no feasible global order.
pub fn fixtures() -> Vec<Fixture> {
    let mut out = Vec::new();
    let mut push = |name: &str, field: Field| {
        let cells = decompose(&field.free, &field.frame).unwrap().cells.len();
        out.push(Fixture {
            name: name.to_string(),
            field,
            multi_cell: cells > 1,
        });
    };
    push(
        "empty_square",
        field(rect(10.0, 10.0), vec![], 1.0, 1.0, 90.0),
    );
    for name in ["single_cell", "diamond", "demo", "l_shape"] {
        push(name, from_file(name));
    }
    push(
        "two_diamonds",
        field(
            rect(20.0, 10.0),
            vec![diamond(5.0, 5.0, 2.0), diamond(15.0, 5.0, 2.0)],
            1.0,
            1.0,
            90.0,
        ),
    );
    push(
        "skewed_pentagon",
        field(
            poly(&[
                (0.0, 0.0),
                (16.0, -2.0),
                (20.0, 9.0),
                (9.0, 16.0),
                (-2.0, 10.0),
            ]),
            vec![poly(&[(7.0, 5.0), (11.0, 6.0), (8.0, 9.0)])],
            2.0,
            1.0,
            30.0,
        ),
    );
    out
}

/// A star-shaped boundary with up to three regular-polygon obstacles and a
/// random driving direction.
pub fn random_field(seed: u64) -> Field {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let k = rng.gen_range(6..14);
        let boundary: Vec<Point> = (0..k)
            .map(|i| {
                let a = 2.0 * PI * (i as f64 + rng.gen_range(-0.3..0.3)) / k as f64;
                let r = rng.gen_range(25.0..40.0);
                Point::new(r * a.cos(), r * a.sin())
            })
            .collect();
        let Ok(boundary) = Polygon::new(boundary) else {
            continue;
        };
        let mut obstacles = Vec::new();
        for _ in 0..rng.gen_range(0..4) {
            let sides = rng.gen_range(3..7);
            let c = Point::new(rng.gen_range(-15.0..15.0), rng.gen_range(-15.0..15.0));
            let r = rng.gen_range(2.0..5.0);
            let rot = rng.gen_range(0.0..PI);
            let pts: Vec<Point> = (0..sides)
                .map(|i| {
                    let a = rot + 2.0 * PI * i as f64 / sides as f64;
                    Point::new(c.x + r * a.cos(), c.y + r * a.sin())
                })
                .collect();
            let candidate = Polygon::new(pts).unwrap();
            let mut trial = obstacles.clone();
            trial.push(candidate);
            if FreeSpace::new(boundary.clone(), trial.clone()).is_ok() {
                obstacles = trial;
            }
        }
        let free = FreeSpace::new(boundary, obstacles).unwrap();
        let w = rng.gen_range(1.5..4.0);
        let r = rng.gen_range(1.0..3.0);
        let deg = rng.gen_range(0.0..180.0);
        return Field::new(
            free,
            MachineSpec::new(w, r, rng.gen_bool(0.5)).unwrap(),
            SweepFrame::from_degrees(deg),
        );
    }
}

pub struct CoverageStats {
    pub counted: usize,
    pub covered: usize,
    pub outside_cells: usize,
}

impl CoverageStats {
    pub fn fraction(&self) -> f64 {
        if self.counted == 0 {
            1.0
        } else {
            self.covered as f64 / self.counted as f64
        }
    }
}

/// Samples the free space on a `step` grid. A sample counts unless it lies in
/// the headland margin of its swath: the nearest track of its cell, beyond
/// `margin` from either chord end along the driving direction. A counted
/// sample is covered when it is within `w/2` of a TRACK leg.
pub fn coverage(field: &Field, plan: &CoveragePlan, margin: f64, step: f64) -> CoverageStats {
    let d = decompose(&field.free, &field.frame).unwrap();
    let tracks = generate_all_tracks(&d, &field.spec);
    let legs: Vec<(Point, Point)> = plan
        .legs
        .iter()
        .filter_map(|l| match l {
            Leg::Track { path, .. } => Some((path[0], path[1])),
            Leg::Transit { .. } => None,
        })
        .collect();
    let half = 0.5 * field.spec.operating_width;
    let (lo, hi) = field.free.bounding_box();
    let mut stats = CoverageStats {
        counted: 0,
        covered: 0,
        outside_cells: 0,
    };
    let nx = ((hi.x - lo.x) / step).ceil() as usize;
    let ny = ((hi.y - lo.y) / step).ceil() as usize;
    for i in 0..nx {
        for j in 0..ny {
            let p = Point::new(
                lo.x + (i as f64 + 0.5) * step,
                lo.y + (j as f64 + 0.5) * step,
            );
            if !field.free.contains(p) {
                continue;
            }
            let Some(cell) = d.cells.iter().find(|c| c.polygon.contains(p)) else {
                stats.outside_cells += 1;
                stats.counted += 1;
                continue;
            };
            let s = field.frame.sweep_value(p);
            let t = field.frame.along(p);
            let Some(track) = tracks
                .iter()
                .filter(|k| k.cell_id == cell.id)
                .min_by(|a, b| (a.offset - s).abs().total_cmp(&(b.offset - s).abs()))
            else {
                stats.counted += 1;
                continue;
            };
            let t0 = field.frame.along(track.lower_end);
            let t1 = field.frame.along(track.upper_end);
            let m = margin.min(0.5 * (t1 - t0));
            if t < t0 + m || t > t1 - m {
                continue;
            }
            stats.counted += 1;
            let dist = legs
                .iter()
                .map(|&(a, b)| fieldcover::geometry::point_segment_distance(p, a, b))
                .fold(f64::INFINITY, f64::min);
            if dist <= half + 1e-9 {
                stats.covered += 1;
            }
        }
    }
    stats
}
