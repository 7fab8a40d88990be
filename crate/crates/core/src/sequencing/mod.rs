//! Track-transition cost graphs and open-path visiting orders.
//!
//! Two cost structures share one solver interface:
//!
//! * [`CostMatrix`] has one node per track. In per-cell mode every pair of
//!   tracks shares both headlands, so only the order matters.
//! * [`GlobalCostMatrix`] models both ends of every track. A track entered at
//!   one end is left at the other, so a solution also fixes the entry end of
//!   each track.
//!
//! Infinite costs mark transitions that are not allowed.

mod exact;
mod heuristic;

use thiserror::Error;

use crate::decomposition::{CellDecomposition, End, HeadlandGraph, HeadlandId};
use crate::tracks::{track_distance, Track};
use crate::turns::CostModel;

pub use exact::solve_exact;
pub use heuristic::{
    best_two_opt_delta, solve_heuristic, solve_heuristic_seeded, HeuristicOptions,
};

/// Largest instance the exact solver accepts regardless of configuration.
pub const EXACT_HARD_LIMIT: usize = 18;
pub const DEFAULT_EXACT_THRESHOLD: usize = 15;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SequencingError {
    #[error("no sequence visits every track without a forbidden transition")]
    Infeasible,
    #[error("{n} tracks exceed the exact solver threshold of {threshold}")]
    TooLarge { n: usize, threshold: usize },
    #[error("sequence is not a permutation of 0..{0}")]
    NotAPermutation(usize),
    #[error("sequence uses a forbidden transition from track {from} to track {to}")]
    ForbiddenTransition { from: usize, to: usize },
    #[error("track index {0} out of range")]
    OutOfRange(usize),
    #[error("entry ends missing or inconsistent with the cost structure")]
    EntryEnds,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    PerCell,
    Global,
}

/// Transition costs between oriented tracks.
///
/// An orientation is the index of the end through which the track is entered
/// (always 0 when the structure has a single orientation).
pub trait TransitionCosts {
    fn len(&self) -> usize;

    fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// 1 for per-cell matrices, 2 for global ones.
    fn orientations(&self) -> usize;

    /// Cost of leaving `from` (entered with orientation `from_o`) and entering
    /// `to` with orientation `to_o`. `f64::INFINITY` marks a forbidden move.
    fn transition(&self, from: usize, from_o: usize, to: usize, to_o: usize) -> f64;
}

#[derive(Debug, Clone, PartialEq)]
pub struct CostMatrix {
    n: usize,
    costs: Vec<f64>,
    mode: Mode,
}

impl CostMatrix {
    /// Builds from a dense row-major matrix. The diagonal is forced to zero.
    pub fn from_rows(rows: Vec<Vec<f64>>) -> Self {
        let n = rows.len();
        let mut costs = Vec::with_capacity(n * n);
        for (i, row) in rows.into_iter().enumerate() {
            assert_eq!(row.len(), n, "cost matrix must be square");
            costs.extend(
                row.into_iter()
                    .enumerate()
                    .map(|(j, c)| if i == j { 0.0 } else { c }),
            );
        }
        Self {
            n,
            costs,
            mode: Mode::PerCell,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.costs[i * self.n + j]
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }
}

impl TransitionCosts for CostMatrix {
    fn len(&self) -> usize {
        self.n
    }

    fn orientations(&self) -> usize {
        1
    }

    fn transition(&self, from: usize, _: usize, to: usize, _: usize) -> f64 {
        self.get(from, to)
    }
}

/// Per-cell matrix: `c_ij` is the shortest turn between tracks `i` and `j`.
pub fn build_cost_matrix(tracks: &[Track], model: &CostModel) -> CostMatrix {
    let n = tracks.len();
    let mut costs = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            if i != j {
                costs[i * n + j] = model
                    .min_turn(track_distance(&tracks[i], &tracks[j]))
                    .map_or(f64::INFINITY, |t| t.length);
            }
        }
    }
    CostMatrix {
        n,
        costs,
        mode: Mode::PerCell,
    }
}

/// Costs between track ends: `cost(i, exit_end, j, entry_end)`.
#[derive(Debug, Clone, PartialEq)]
pub struct GlobalCostMatrix {
    n: usize,
    costs: Vec<f64>,
    /// Headland component of each track end, indexed `[track][end]`.
    components: Vec<[usize; 2]>,
}

impl GlobalCostMatrix {
    pub fn n(&self) -> usize {
        self.n
    }

    fn index(&self, i: usize, ei: End, j: usize, ej: End) -> usize {
        ((i * 2 + ei.index()) * self.n + j) * 2 + ej.index()
    }

    /// Cost of turning from end `exit` of track `i` into end `entry` of track `j`.
    pub fn cost(&self, i: usize, exit: End, j: usize, entry: End) -> f64 {
        self.costs[self.index(i, exit, j, entry)]
    }

    pub fn component(&self, track: usize, end: End) -> usize {
        self.components[track][end.index()]
    }
}

impl TransitionCosts for GlobalCostMatrix {
    fn len(&self) -> usize {
        self.n
    }

    fn orientations(&self) -> usize {
        2
    }

    fn transition(&self, from: usize, from_o: usize, to: usize, to_o: usize) -> f64 {
        let exit = End::from_index(from_o).opposite();
        self.cost(from, exit, to, End::from_index(to_o))
    }
}

/// Builds the end-to-end cost graph over all tracks of a decomposition.
///
/// * both ends of the same track: 0 (the track is always fully traversed);
/// * an upper end and a lower end of different tracks: forbidden;
/// * same-side ends on different headland components: forbidden;
/// * same-side ends on one component: the shortest turn for their spacing.
pub fn build_global_graph(
    d: &CellDecomposition,
    tracks: &[Track],
    connectivity: &HeadlandGraph,
    model: &CostModel,
) -> GlobalCostMatrix {
    debug_assert_eq!(connectivity.node_count(), 2 * d.cells.len());
    let n = tracks.len();
    let components: Vec<[usize; 2]> = tracks
        .iter()
        .map(|t| {
            [End::Lower, End::Upper]
                .map(|side| connectivity.component(HeadlandId::new(t.cell_id, side)))
        })
        .collect();
    let mut m = GlobalCostMatrix {
        n,
        costs: vec![f64::INFINITY; 4 * n * n],
        components,
    };
    for i in 0..n {
        for j in 0..n {
            for ei in [End::Lower, End::Upper] {
                for ej in [End::Lower, End::Upper] {
                    let c = if i == j {
                        if ei != ej {
                            0.0
                        } else {
                            f64::INFINITY
                        }
                    } else if ei != ej || m.components[i][ei.index()] != m.components[j][ej.index()]
                    {
                        f64::INFINITY
                    } else {
                        model
                            .min_turn(track_distance(&tracks[i], &tracks[j]))
                            .map_or(f64::INFINITY, |t| t.length)
                    };
                    let idx = m.index(i, ei, j, ej);
                    m.costs[idx] = c;
                }
            }
        }
    }
    m
}

/// A visiting order. In global mode `entry_ends[k]` is the end through which
/// `order[k]` is entered; the track is left through the opposite end.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sequence {
    pub order: Vec<usize>,
    pub entry_ends: Option<Vec<End>>,
}

impl Sequence {
    pub fn per_cell(order: Vec<usize>) -> Self {
        Self {
            order,
            entry_ends: None,
        }
    }

    pub fn global(order: Vec<usize>, entry_ends: Vec<End>) -> Self {
        Self {
            order,
            entry_ends: Some(entry_ends),
        }
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    pub(crate) fn from_oriented(path: &[(usize, usize)], orientations: usize) -> Self {
        let order = path.iter().map(|&(t, _)| t).collect();
        if orientations == 2 {
            Self::global(
                order,
                path.iter().map(|&(_, o)| End::from_index(o)).collect(),
            )
        } else {
            Self::per_cell(order)
        }
    }

    pub(crate) fn oriented<C: TransitionCosts + ?Sized>(
        &self,
        costs: &C,
    ) -> Result<Vec<(usize, usize)>, SequencingError> {
        let n = costs.len();
        let mut seen = vec![false; n];
        for &t in &self.order {
            if t >= n {
                return Err(SequencingError::OutOfRange(t));
            }
            if std::mem::replace(&mut seen[t], true) {
                return Err(SequencingError::NotAPermutation(n));
            }
        }
        if self.order.len() != n {
            return Err(SequencingError::NotAPermutation(n));
        }
        match (&self.entry_ends, costs.orientations()) {
            (None, 1) => Ok(self.order.iter().map(|&t| (t, 0)).collect()),
            (Some(ends), 2) if ends.len() == n => Ok(self
                .order
                .iter()
                .zip(ends)
                .map(|(&t, e)| (t, e.index()))
                .collect()),
            _ => Err(SequencingError::EntryEnds),
        }
    }
}

/// Optional endpoint constraints on the visiting order.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Endpoints {
    pub start: Option<usize>,
    pub end: Option<usize>,
}

impl Endpoints {
    pub fn free() -> Self {
        Self::default()
    }

    pub fn starting_at(start: usize) -> Self {
        Self {
            start: Some(start),
            end: None,
        }
    }
}

/// A global order that uses no forbidden transition, found as an Euler
/// trail in the multigraph whose nodes are headland components and whose
/// edges are tracks.
///
/// Every feasible global sequence is such a trail, so `None` (more than two
/// odd-degree components, or tracks in disconnected groups) proves that no
/// feasible sequence exists. A returned trail may still contain a forbidden
/// turn between two tracks with identical offsets.
pub fn euler_order(m: &GlobalCostMatrix) -> Option<Sequence> {
    let n = m.n;
    if n == 0 {
        return Some(Sequence::global(Vec::new(), Vec::new()));
    }
    let nodes = m
        .components
        .iter()
        .flat_map(|c| c.iter())
        .max()
        .map_or(0, |&k| k + 1);
    let mut incident: Vec<Vec<usize>> = vec![Vec::new(); nodes];
    for (t, c) in m.components.iter().enumerate() {
        incident[c[0]].push(t);
        if c[1] != c[0] {
            incident[c[1]].push(t);
        }
    }
    let degree = |v: usize| -> usize {
        incident[v]
            .iter()
            .map(|&t| {
                if m.components[t][0] == m.components[t][1] {
                    2
                } else {
                    1
                }
            })
            .sum()
    };
    let odd: Vec<usize> = (0..nodes).filter(|&v| degree(v) % 2 == 1).collect();
    if odd.len() > 2 {
        return None;
    }
    let start = odd.first().copied().unwrap_or(m.components[0][0]);

    // Hierholzer: each stack frame is (node, track used to reach it).
    let mut used = vec![false; n];
    let mut cursor = vec![0usize; nodes];
    let mut stack: Vec<(usize, Option<usize>)> = vec![(start, None)];
    let mut trail: Vec<(usize, usize)> = Vec::with_capacity(n); // (track, node left from), reversed
    while let Some(&(v, via)) = stack.last() {
        while cursor[v] < incident[v].len() && used[incident[v][cursor[v]]] {
            cursor[v] += 1;
        }
        if cursor[v] < incident[v].len() {
            let t = incident[v][cursor[v]];
            used[t] = true;
            let [lo, hi] = m.components[t];
            let next = if lo == v { hi } else { lo };
            stack.push((next, Some(t)));
        } else {
            stack.pop();
            if let (Some(t), Some(&(prev, _))) = (via, stack.last()) {
                trail.push((t, prev));
            }
        }
    }
    if trail.len() != n {
        return None;
    }
    trail.reverse();
    let order = trail.iter().map(|&(t, _)| t).collect();
    let ends = trail
        .iter()
        .map(|&(t, from)| {
            if m.components[t][0] == from {
                End::Lower
            } else {
                End::Upper
            }
        })
        .collect();
    Some(Sequence::global(order, ends))
}

/// Total transition cost of `seq`: the sum of its `n - 1` turns.
pub fn sequence_cost<C: TransitionCosts + ?Sized>(
    seq: &Sequence,
    costs: &C,
) -> Result<f64, SequencingError> {
    let path = seq.oriented(costs)?;
    let mut total = 0.0;
    for w in path.windows(2) {
        let c = costs.transition(w[0].0, w[0].1, w[1].0, w[1].1);
        if !c.is_finite() {
            return Err(SequencingError::ForbiddenTransition {
                from: w[0].0,
                to: w[1].0,
            });
        }
        total += c;
    }
    Ok(total)
}

/// Finite stand-in for forbidden transitions: `n * max_finite * 10`. Any path
/// using one costs more than every fully finite path.
pub(crate) fn sentinel<C: TransitionCosts + ?Sized>(costs: &C) -> f64 {
    let n = costs.len();
    let o = costs.orientations();
    let mut max = 0.0f64;
    for i in 0..n {
        for oi in 0..o {
            for j in 0..n {
                if i == j {
                    continue;
                }
                for oj in 0..o {
                    let c = costs.transition(i, oi, j, oj);
                    if c.is_finite() {
                        max = max.max(c);
                    }
                }
            }
        }
    }
    let max = if max > 0.0 { max } else { 1.0 };
    (n.max(1) as f64) * max * 10.0
}

pub(crate) fn approx_eq(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-9 * b.abs().max(1.0)
}
