//! Complete coverage plans: cell-by-cell and global track ordering.
//!
//! Both planners share one pipeline: decompose, lay tracks, order the tracks,
//! then assemble alternating TRACK and TRANSIT legs. Tracks are shortened by a
//! headland margin at both ends so that turns happen inside the headland
//! strip. A transition between same-side ends on one headland component is a
//! turn, costed by the turn model; anything else is a routed travel leg,
//! costed by its polyline length.

mod routing;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::decomposition::{
    decompose, headland_connectivity, CellDecomposition, DecompositionError, End, HeadlandGraph,
    HeadlandId, SweepFrame,
};
use crate::geometry::{
    point_segment_distance, polyline_length, segments_intersect, FreeSpace, Point, Polygon,
};
use crate::sequencing::{
    build_cost_matrix, build_global_graph, euler_order, solve_exact, solve_heuristic,
    solve_heuristic_seeded, Endpoints, HeuristicOptions, SequencingError, DEFAULT_EXACT_THRESHOLD,
    EXACT_HARD_LIMIT,
};
use crate::tracks::{generate_all_tracks, MachineSpec, Track};
use crate::turns::{CostModel, TeeFormula, TurnCost, TurnKind};

use routing::Router;

#[derive(Debug, Error)]
pub enum PlanError {
    #[error(transparent)]
    Decomposition(#[from] DecompositionError),
    #[error(transparent)]
    Sequencing(#[from] SequencingError),
    #[error("no global sequence covers every track; isolated: {}", join(.isolated))]
    Infeasible { isolated: Vec<HeadlandId> },
    #[error("no route from track {from} to track {to}")]
    Unreachable { from: usize, to: usize },
    #[error("headland margin must be non-negative and finite, got {0}")]
    Margin(f64),
}

fn join(ids: &[HeadlandId]) -> String {
    if ids.is_empty() {
        return "none found".into();
    }
    ids.iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(", ")
}

/// A field ready for planning.
#[derive(Debug, Clone, PartialEq)]
pub struct Field {
    pub free: FreeSpace,
    pub spec: MachineSpec,
    pub frame: SweepFrame,
}

impl Field {
    pub fn new(free: FreeSpace, spec: MachineSpec, frame: SweepFrame) -> Self {
        Self { free, spec, frame }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlannerOptions {
    pub exact_threshold: usize,
    pub tee_formula: TeeFormula,
    /// Distance cut from each track end; `None` means `2 * r_min`.
    pub headland_margin: Option<f64>,
    pub seed: u64,
}

impl Default for PlannerOptions {
    fn default() -> Self {
        Self {
            exact_threshold: DEFAULT_EXACT_THRESHOLD,
            tee_formula: TeeFormula::Paper,
            headland_margin: None,
            seed: 0,
        }
    }
}

impl PlannerOptions {
    pub fn margin(&self, spec: &MachineSpec) -> f64 {
        self.headland_margin.unwrap_or(2.0 * spec.r_min)
    }

    fn exact_limit(&self) -> usize {
        self.exact_threshold.min(EXACT_HARD_LIMIT)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PlanMode {
    Traditional,
    Global,
}

impl fmt::Display for PlanMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PlanMode::Traditional => "traditional",
            PlanMode::Global => "global",
        })
    }
}

impl FromStr for PlanMode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "traditional" => Ok(PlanMode::Traditional),
            "global" => Ok(PlanMode::Global),
            other => Err(format!(
                "unknown mode '{other}' (expected traditional|global)"
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SolverKind {
    Exact,
    Heuristic,
    /// Per-cell solves that used both solvers.
    Mixed,
}

impl SolverKind {
    fn combine(self, other: SolverKind) -> SolverKind {
        if self == other {
            self
        } else {
            SolverKind::Mixed
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolverInfo {
    pub mode: PlanMode,
    pub solver: SolverKind,
    pub exact_threshold: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Maneuver {
    Omega,
    Pi,
    Tee,
    /// Routed headland travel that is not a single turn.
    Travel,
}

impl From<TurnKind> for Maneuver {
    fn from(k: TurnKind) -> Self {
        match k {
            TurnKind::Omega => Maneuver::Omega,
            TurnKind::Pi => Maneuver::Pi,
            TurnKind::Tee => Maneuver::Tee,
        }
    }
}

impl Maneuver {
    pub fn turn_kind(self) -> Option<TurnKind> {
        match self {
            Maneuver::Omega => Some(TurnKind::Omega),
            Maneuver::Pi => Some(TurnKind::Pi),
            Maneuver::Tee => Some(TurnKind::Tee),
            Maneuver::Travel => None,
        }
    }
}

impl fmt::Display for Maneuver {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.turn_kind() {
            Some(k) => k.fmt(f),
            None => f.write_str("travel"),
        }
    }
}

/// One piece of the driven path.
///
/// A turn's `length_m` comes from the turn model for the spacing `offset_m`;
/// its `path` is the headland route drawn for reference. A travel leg's
/// length is the length of its `path`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum Leg {
    Track {
        track: usize,
        cell: usize,
        entry: End,
        path: [Point; 2],
    },
    Transit {
        from_track: usize,
        to_track: usize,
        maneuver: Maneuver,
        offset_m: f64,
        length_m: f64,
        path: Vec<Point>,
    },
}

impl Leg {
    pub fn start(&self) -> Point {
        match self {
            Leg::Track { path, .. } => path[0],
            Leg::Transit { path, .. } => path[0],
        }
    }

    pub fn end(&self) -> Point {
        match self {
            Leg::Track { path, .. } => path[1],
            Leg::Transit { path, .. } => *path.last().expect("transit path is non-empty"),
        }
    }

    pub fn length(&self) -> f64 {
        match self {
            Leg::Track { path, .. } => path[0].distance(path[1]),
            Leg::Transit { length_m, .. } => *length_m,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TurnCounts {
    pub omega: usize,
    pub pi: usize,
    pub tee: usize,
    pub travel: usize,
}

impl TurnCounts {
    fn add(&mut self, m: Maneuver) {
        match m {
            Maneuver::Omega => self.omega += 1,
            Maneuver::Pi => self.pi += 1,
            Maneuver::Tee => self.tee += 1,
            Maneuver::Travel => self.travel += 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlanMetrics {
    pub productive_m: f64,
    pub nonproductive_m: f64,
    pub total_m: f64,
    pub turn_counts: TurnCounts,
    /// Cells in the order the path enters them, including pass-throughs.
    pub cells_visited: Vec<usize>,
}

impl PlanMetrics {
    /// Sums leg lengths as stored.
    pub fn from_legs(legs: &[Leg], cells_visited: Vec<usize>) -> Self {
        let mut productive = 0.0;
        let mut nonproductive = 0.0;
        let mut counts = TurnCounts::default();
        for leg in legs {
            match leg {
                Leg::Track { .. } => productive += leg.length(),
                Leg::Transit {
                    maneuver, length_m, ..
                } => {
                    nonproductive += length_m;
                    counts.add(*maneuver);
                }
            }
        }
        Self {
            productive_m: productive,
            nonproductive_m: nonproductive,
            total_m: productive + nonproductive,
            turn_counts: counts,
            cells_visited,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoveragePlan {
    pub solver: SolverInfo,
    pub legs: Vec<Leg>,
    pub metrics: PlanMetrics,
}

impl CoveragePlan {
    /// Track ids in driving order.
    pub fn track_order(&self) -> Vec<usize> {
        self.legs
            .iter()
            .filter_map(|l| match l {
                Leg::Track { track, .. } => Some(*track),
                Leg::Transit { .. } => None,
            })
            .collect()
    }

    /// Largest distance between the end of one leg and the start of the next.
    pub fn max_gap(&self) -> f64 {
        self.legs
            .windows(2)
            .map(|w| w[0].end().distance(w[1].start()))
            .fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlanComparison {
    pub traditional: CoveragePlan,
    pub global: CoveragePlan,
    pub savings_ratio: f64,
}

/// Everything both planners derive from a field.
pub struct Prepared {
    pub decomposition: CellDecomposition,
    /// Full-chord tracks, numbered globally in cell order.
    pub tracks: Vec<Track>,
    pub headlands: HeadlandGraph,
    pub model: CostModel,
    /// Track ends after the headland margin is removed, `[track][end]`.
    pub shortened: Vec<[Point; 2]>,
    router: Router,
}

impl Prepared {
    pub fn new(field: &Field, options: &PlannerOptions) -> Result<Self, PlanError> {
        let margin = options.margin(&field.spec);
        if !(margin >= 0.0 && margin.is_finite()) {
            return Err(PlanError::Margin(margin));
        }
        let decomposition = decompose(&field.free, &field.frame)?;
        let tracks = generate_all_tracks(&decomposition, &field.spec);
        let headlands = headland_connectivity(&decomposition);
        let shortened = tracks
            .iter()
            .map(|t| {
                let len = t.length();
                let m = margin.min(0.5 * len);
                let dir = if len > 0.0 {
                    (t.upper_end - t.lower_end) * (1.0 / len)
                } else {
                    Point::default()
                };
                [t.lower_end + dir * m, t.upper_end - dir * m]
            })
            .collect();
        let router = Router::new(&decomposition, &tracks, &headlands);
        Ok(Self {
            model: CostModel::new(field.spec, options.tee_formula),
            decomposition,
            tracks,
            headlands,
            shortened,
            router,
        })
    }

    fn component(&self, track: usize, side: End) -> usize {
        self.headlands
            .component(HeadlandId::new(self.tracks[track].cell_id, side))
    }

    /// The turn between two track ends, if one exists.
    fn turn(&self, a: usize, a_exit: End, b: usize, b_entry: End) -> Option<TurnCost> {
        if a_exit != b_entry || self.component(a, a_exit) != self.component(b, b_entry) {
            return None;
        }
        let d = (self.tracks[a].offset - self.tracks[b].offset).abs();
        self.model.min_turn(d).ok()
    }

    /// Cost of moving between two track ends as the assembled leg would charge it.
    fn transition_cost(&self, a: usize, a_exit: End, b: usize, b_entry: End) -> Option<f64> {
        match self.turn(a, a_exit, b, b_entry) {
            Some(t) => Some(t.length),
            None => self
                .transit_path(a, a_exit, b, b_entry)
                .map(|(p, _)| polyline_length(&p)),
        }
    }

    fn transit_path(
        &self,
        a: usize,
        a_exit: End,
        b: usize,
        b_entry: End,
    ) -> Option<(Vec<Point>, Vec<usize>)> {
        let route = self.router.route(a, a_exit, b, b_entry)?;
        let mut path = vec![self.shortened[a][a_exit.index()]];
        for p in route
            .points
            .into_iter()
            .chain([self.shortened[b][b_entry.index()]])
        {
            if path.last().is_none_or(|q: &Point| q.distance(p) > 0.0) {
                path.push(p);
            }
        }
        if path.len() == 1 {
            path.push(path[0]);
        }
        Some((path, route.cells))
    }

    /// Builds legs for a sequence of `(track, entry end)` pairs.
    fn assemble(
        &self,
        seq: &[(usize, End)],
        solver: SolverInfo,
    ) -> Result<CoveragePlan, PlanError> {
        let mut legs = Vec::with_capacity(2 * seq.len());
        let mut cells: Vec<usize> = Vec::new();
        let visit = |c: usize, cells: &mut Vec<usize>| {
            if cells.last() != Some(&c) {
                cells.push(c);
            }
        };
        for (k, &(t, entry)) in seq.iter().enumerate() {
            if k > 0 {
                let (p, p_entry) = seq[k - 1];
                let exit = p_entry.opposite();
                let (path, via) = self
                    .transit_path(p, exit, t, entry)
                    .ok_or(PlanError::Unreachable { from: p, to: t })?;
                for c in via {
                    visit(c, &mut cells);
                }
                let offset = (self.tracks[p].offset - self.tracks[t].offset).abs();
                let (maneuver, length) = match self.turn(p, exit, t, entry) {
                    Some(turn) => (Maneuver::from(turn.kind), turn.length),
                    None => (Maneuver::Travel, polyline_length(&path)),
                };
                legs.push(Leg::Transit {
                    from_track: p,
                    to_track: t,
                    maneuver,
                    offset_m: offset,
                    length_m: length,
                    path,
                });
            }
            let track = &self.tracks[t];
            visit(track.cell_id, &mut cells);
            let ends = self.shortened[t];
            legs.push(Leg::Track {
                track: t,
                cell: track.cell_id,
                entry,
                path: [ends[entry.index()], ends[entry.opposite().index()]],
            });
        }
        let metrics = PlanMetrics::from_legs(&legs, cells);
        Ok(CoveragePlan {
            solver,
            legs,
            metrics,
        })
    }
}

/// Cells in depth-first preorder over the adjacency graph from cell 0,
/// neighbours taken in id order.
pub fn cell_visit_order(d: &CellDecomposition) -> Vec<usize> {
    let n = d.cells.len();
    let mut seen = vec![false; n];
    let mut order = Vec::with_capacity(n);
    for root in 0..n {
        if seen[root] {
            continue;
        }
        let mut stack = vec![root];
        while let Some(c) = stack.pop() {
            if std::mem::replace(&mut seen[c], true) {
                continue;
            }
            order.push(c);
            for nb in d.neighbors(c).into_iter().rev() {
                if !seen[nb] {
                    stack.push(nb);
                }
            }
        }
    }
    order
}

fn segment_polygon_distance(a: Point, b: Point, poly: &Polygon) -> f64 {
    poly.edges()
        .map(|(c, e)| {
            if segments_intersect(a, b, c, e) {
                0.0
            } else {
                point_segment_distance(a, c, e)
                    .min(point_segment_distance(b, c, e))
                    .min(point_segment_distance(c, a, b))
                    .min(point_segment_distance(e, a, b))
            }
        })
        .fold(f64::INFINITY, f64::min)
}

/// First index minimising `key`.
fn argmin<T>(items: &[T], key: impl Fn(&T) -> f64) -> Option<usize> {
    let mut best: Option<(usize, f64)> = None;
    for (i, x) in items.iter().enumerate() {
        let v = key(x);
        if best.is_none_or(|(_, b)| v < b) {
            best = Some((i, v));
        }
    }
    best.map(|(i, _)| i)
}

/// Covers each cell completely before moving to the next.
///
/// Cells follow [`cell_visit_order`]. Within a cell the first track is the
/// one nearest the previous exit and the last is the one nearest the next
/// cell; the order in between is optimal for the per-cell cost matrix (or
/// heuristic above the exact threshold).
pub fn plan_traditional(
    field: &Field,
    options: &PlannerOptions,
) -> Result<CoveragePlan, PlanError> {
    let prep = Prepared::new(field, options)?;
    plan_traditional_prepared(&prep, options)
}

pub fn plan_traditional_prepared(
    prep: &Prepared,
    options: &PlannerOptions,
) -> Result<CoveragePlan, PlanError> {
    let order: Vec<usize> = cell_visit_order(&prep.decomposition)
        .into_iter()
        .filter(|&c| prep.tracks.iter().any(|t| t.cell_id == c))
        .collect();
    let mut best: Option<CoveragePlan> = None;
    for first in [End::Lower, End::Upper] {
        let (seq, solver) = traditional_sequence(prep, options, &order, first)?;
        let info = SolverInfo {
            mode: PlanMode::Traditional,
            solver,
            exact_threshold: options.exact_threshold,
            seed: options.seed,
        };
        let plan = prep.assemble(&seq, info)?;
        if best
            .as_ref()
            .is_none_or(|b| plan.metrics.nonproductive_m < b.metrics.nonproductive_m)
        {
            best = Some(plan);
        }
    }
    Ok(best.expect("two candidates"))
}

fn traditional_sequence(
    prep: &Prepared,
    options: &PlannerOptions,
    order: &[usize],
    first_end: End,
) -> Result<(Vec<(usize, End)>, SolverKind), PlanError> {
    let mut seq: Vec<(usize, End)> = Vec::with_capacity(prep.tracks.len());
    let mut solver: Option<SolverKind> = None;
    for (k, &cell) in order.iter().enumerate() {
        let local: Vec<&Track> = prep.tracks.iter().filter(|t| t.cell_id == cell).collect();
        let prev = seq.last().map(|&(t, e)| (t, e.opposite()));
        let entry = prev.and_then(|(p, _)| {
            let off = prep.tracks[p].offset;
            argmin(&local, |t| (t.offset - off).abs())
        });
        let exit = order.get(k + 1).and_then(|&next| {
            let poly = &prep.decomposition.cells[next].polygon;
            argmin(&local, |t| {
                segment_polygon_distance(t.lower_end, t.upper_end, poly)
            })
        });
        let exit = if exit == entry { None } else { exit };

        let owned: Vec<Track> = local.iter().map(|t| **t).collect();
        let matrix = build_cost_matrix(&owned, &prep.model);
        let endpoints = Endpoints {
            start: entry,
            end: exit,
        };
        let (local_order, kind) = if owned.len() <= options.exact_limit() {
            (
                solve_exact(&matrix, endpoints, options.exact_limit())?,
                SolverKind::Exact,
            )
        } else {
            let h = HeuristicOptions {
                seed: options.seed,
                ..HeuristicOptions::default()
            };
            (
                solve_heuristic(&matrix, endpoints, h)?,
                SolverKind::Heuristic,
            )
        };
        solver = Some(solver.map_or(kind, |s| s.combine(kind)));

        let first_track = owned[local_order.order[0]].id;
        let mut end = match prev {
            None => first_end,
            Some((p, p_exit)) => {
                let same = prep.transition_cost(p, p_exit, first_track, p_exit);
                let other = prep.transition_cost(p, p_exit, first_track, p_exit.opposite());
                match (same, other) {
                    (Some(a), Some(b)) if b < a => p_exit.opposite(),
                    (None, Some(_)) => p_exit.opposite(),
                    _ => p_exit,
                }
            }
        };
        for &i in &local_order.order {
            seq.push((owned[i].id, end));
            end = end.opposite();
        }
    }
    Ok((seq, solver.unwrap_or(SolverKind::Exact)))
}

/// Orders all tracks at once over the end-to-end cost graph, so a cell may be
/// entered and left several times.
pub fn plan_global(field: &Field, options: &PlannerOptions) -> Result<CoveragePlan, PlanError> {
    let prep = Prepared::new(field, options)?;
    plan_global_prepared(&prep, options)
}

pub fn plan_global_prepared(
    prep: &Prepared,
    options: &PlannerOptions,
) -> Result<CoveragePlan, PlanError> {
    let g = build_global_graph(
        &prep.decomposition,
        &prep.tracks,
        &prep.headlands,
        &prep.model,
    );
    let n = prep.tracks.len();
    let limit = options.exact_limit();
    // no Euler trail over the headland components means no feasible order at all
    let Some(trail) = euler_order(&g) else {
        return Err(PlanError::Infeasible {
            isolated: isolated_headlands(prep),
        });
    };
    let (result, solver) = if n <= limit {
        (solve_exact(&g, Endpoints::free(), limit), SolverKind::Exact)
    } else {
        let h = HeuristicOptions {
            seed: options.seed,
            exact_fallback: limit,
            ..HeuristicOptions::default()
        };
        (
            solve_heuristic_seeded(&g, Endpoints::free(), h, &[trail]),
            SolverKind::Heuristic,
        )
    };
    let seq = match result {
        Ok(s) => s,
        Err(SequencingError::Infeasible) => {
            return Err(PlanError::Infeasible {
                isolated: isolated_headlands(prep),
            })
        }
        Err(e) => return Err(e.into()),
    };
    let ends = seq
        .entry_ends
        .clone()
        .expect("global sequences carry entry ends");
    let pairs: Vec<(usize, End)> = seq.order.iter().copied().zip(ends).collect();
    let info = SolverInfo {
        mode: PlanMode::Global,
        solver,
        exact_threshold: options.exact_threshold,
        seed: options.seed,
    };
    prep.assemble(&pairs, info)
}

/// Headlands that share no component with any other headland. Those of cells
/// with an odd track count are reported first, as they force a dead end.
fn isolated_headlands(prep: &Prepared) -> Vec<HeadlandId> {
    let hg = &prep.headlands;
    let mut isolated: Vec<HeadlandId> = (0..prep.decomposition.cells.len())
        .flat_map(|c| [End::Lower, End::Upper].map(|s| HeadlandId::new(c, s)))
        .filter(|&h| hg.members(hg.component(h)).len() == 1)
        .collect();
    let odd = |h: &HeadlandId| prep.tracks.iter().filter(|t| t.cell_id == h.cell).count() % 2 == 1;
    let odd_ones: Vec<HeadlandId> = isolated.iter().copied().filter(odd).collect();
    if !odd_ones.is_empty() {
        isolated = odd_ones;
    }
    isolated
}

/// Both plans and the fraction of non-productive distance the global plan saves.
pub fn compare(field: &Field, options: &PlannerOptions) -> Result<PlanComparison, PlanError> {
    let prep = Prepared::new(field, options)?;
    let traditional = plan_traditional_prepared(&prep, options)?;
    let global = plan_global_prepared(&prep, options)?;
    let savings_ratio = savings_ratio(
        traditional.metrics.nonproductive_m,
        global.metrics.nonproductive_m,
    );
    Ok(PlanComparison {
        traditional,
        global,
        savings_ratio,
    })
}

pub fn savings_ratio(traditional: f64, global: f64) -> f64 {
    if traditional > 0.0 {
        1.0 - global / traditional
    } else {
        0.0
    }
}
