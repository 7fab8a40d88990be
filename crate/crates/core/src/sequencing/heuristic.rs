//! Nearest-neighbour construction with 2-opt improvement.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::exact::solve_exact;
use super::{sentinel, Endpoints, Sequence, SequencingError, TransitionCosts};

/// Nearest-neighbour starts tried at most; beyond this, starts are sampled evenly.
const MAX_NN_STARTS: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HeuristicOptions {
    pub seed: u64,
    /// Extra random initial orders improved by 2-opt.
    pub restarts: usize,
    /// Instances at most this large fall back to the exact solver when the
    /// heuristic cannot find a feasible order.
    pub exact_fallback: usize,
}

impl Default for HeuristicOptions {
    fn default() -> Self {
        Self {
            seed: 0,
            restarts: 8,
            exact_fallback: super::DEFAULT_EXACT_THRESHOLD,
        }
    }
}

type Path = Vec<(usize, usize)>;

struct Costs<'a, C: ?Sized> {
    inner: &'a C,
    big: f64,
    no: usize,
}

impl<C: TransitionCosts + ?Sized> Costs<'_, C> {
    fn edge(&self, a: (usize, usize), b: (usize, usize)) -> f64 {
        let c = self.inner.transition(a.0, a.1, b.0, b.1);
        if c.is_finite() {
            c
        } else {
            self.big
        }
    }

    /// The same track traversed the other way.
    fn flip(&self, a: (usize, usize)) -> (usize, usize) {
        if self.no == 2 {
            (a.0, 1 - a.1)
        } else {
            a
        }
    }

    fn total(&self, p: &[(usize, usize)]) -> f64 {
        p.windows(2).map(|w| self.edge(w[0], w[1])).sum()
    }
}

/// Near-optimal visiting order; deterministic for a given seed.
///
/// Every track is tried as a nearest-neighbour start, then `restarts` random
/// orders are added; each candidate is improved to a 2-opt local optimum and
/// the cheapest is kept.
pub fn solve_heuristic<C: TransitionCosts + ?Sized>(
    costs: &C,
    endpoints: Endpoints,
    options: HeuristicOptions,
) -> Result<Sequence, SequencingError> {
    solve_heuristic_seeded(costs, endpoints, options, &[])
}

/// [`solve_heuristic`] with extra initial orders, each also improved by 2-opt.
/// Seeds that violate the endpoint constraints are ignored.
pub fn solve_heuristic_seeded<C: TransitionCosts + ?Sized>(
    costs: &C,
    endpoints: Endpoints,
    options: HeuristicOptions,
    seeds: &[Sequence],
) -> Result<Sequence, SequencingError> {
    let n = costs.len();
    let no = costs.orientations();
    for t in [endpoints.start, endpoints.end].into_iter().flatten() {
        if t >= n {
            return Err(SequencingError::OutOfRange(t));
        }
    }
    if n == 0 {
        return Ok(Sequence::from_oriented(&[], no));
    }
    if n > 1 && endpoints.start.is_some() && endpoints.start == endpoints.end {
        return Err(SequencingError::Infeasible);
    }
    let c = Costs {
        inner: costs,
        big: sentinel(costs),
        no,
    };

    let starts: Vec<usize> = match endpoints.start {
        Some(s) => vec![s],
        None => {
            let pool: Vec<usize> = (0..n)
                .filter(|&i| n == 1 || Some(i) != endpoints.end)
                .collect();
            if pool.len() <= MAX_NN_STARTS {
                pool
            } else {
                (0..MAX_NN_STARTS)
                    .map(|k| pool[k * pool.len() / MAX_NN_STARTS])
                    .collect()
            }
        }
    };

    let mut best: Option<(f64, Path)> = None;
    let mut consider = |p: Path| {
        let p = two_opt(&c, p, endpoints);
        let v = c.total(&p);
        if best.as_ref().is_none_or(|(b, _)| v < *b) {
            best = Some((v, p));
        }
    };
    for seed in seeds {
        let Ok(p) = seed.oriented(costs) else {
            continue;
        };
        let fits = endpoints
            .start
            .is_none_or(|s| p.first().map(|x| x.0) == Some(s))
            && endpoints
                .end
                .is_none_or(|e| p.last().map(|x| x.0) == Some(e));
        if fits {
            consider(p);
        }
    }
    for &s in &starts {
        for o in 0..no {
            consider(nearest_neighbour(&c, (s, o), endpoints.end));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(options.seed);
    for _ in 0..options.restarts {
        consider(random_path(&mut rng, n, no, endpoints));
    }

    let (value, path) = best.expect("at least one candidate");
    if value < c.big {
        return Ok(Sequence::from_oriented(&path, no));
    }
    if n <= options.exact_fallback {
        return solve_exact(costs, endpoints, options.exact_fallback);
    }
    Err(SequencingError::Infeasible)
}

fn nearest_neighbour<C: TransitionCosts + ?Sized>(
    c: &Costs<'_, C>,
    start: (usize, usize),
    end: Option<usize>,
) -> Path {
    let n = c.inner.len();
    let mut used = vec![false; n];
    used[start.0] = true;
    let mut path = vec![start];
    while path.len() < n {
        let cur = *path.last().expect("non-empty");
        let last_slot = path.len() + 1 == n;
        let mut pick: Option<(f64, (usize, usize))> = None;
        for (j, &taken) in used.iter().enumerate() {
            if taken || (Some(j) == end && !last_slot) {
                continue;
            }
            for oj in 0..c.no {
                let v = c.edge(cur, (j, oj));
                if pick.is_none_or(|(b, _)| v < b) {
                    pick = Some((v, (j, oj)));
                }
            }
        }
        let (_, next) = pick.expect("an unvisited track remains");
        used[next.0] = true;
        path.push(next);
    }
    path
}

fn random_path(rng: &mut ChaCha8Rng, n: usize, no: usize, endpoints: Endpoints) -> Path {
    let mut middle: Vec<usize> = (0..n)
        .filter(|&i| Some(i) != endpoints.start && Some(i) != endpoints.end)
        .collect();
    middle.shuffle(rng);
    let order = endpoints
        .start
        .into_iter()
        .chain(middle)
        .chain(endpoints.end);
    order
        .map(|t| (t, if no == 2 { rng.gen_range(0..2) } else { 0 }))
        .collect()
}

/// Improves `path` by segment reversals until no reversal lowers its cost.
fn two_opt<C: TransitionCosts + ?Sized>(
    c: &Costs<'_, C>,
    mut path: Path,
    endpoints: Endpoints,
) -> Path {
    let n = path.len();
    if n < 2 {
        return path;
    }
    let lo = usize::from(endpoints.start.is_some());
    let hi = if endpoints.end.is_some() {
        n - 2
    } else {
        n - 1
    };
    loop {
        // fwd[k]: cost of path[0..=k]; rev[k]: same edges traversed backwards.
        let mut fwd = vec![0.0; n];
        let mut rev = vec![0.0; n];
        for k in 1..n {
            fwd[k] = fwd[k - 1] + c.edge(path[k - 1], path[k]);
            rev[k] = rev[k - 1] + c.edge(c.flip(path[k]), c.flip(path[k - 1]));
        }
        let scale = fwd[n - 1].abs().max(1.0);
        let mut best = (-1e-12 * scale, None);
        for a in lo..=hi {
            for b in a + 1..=hi {
                let delta = reversal_delta(c, &path, &fwd, &rev, a, b);
                if delta < best.0 {
                    best = (delta, Some((a, b)));
                }
            }
            // single-track flip matters only when orientation is free
            if c.no == 2 {
                let delta = reversal_delta(c, &path, &fwd, &rev, a, a);
                if delta < best.0 {
                    best = (delta, Some((a, a)));
                }
            }
        }
        match best.1 {
            Some((a, b)) => {
                path[a..=b].reverse();
                for p in &mut path[a..=b] {
                    *p = c.flip(*p);
                }
            }
            None => return path,
        }
    }
}

/// Cost change from reversing `path[a..=b]` (orientations flip in the segment).
fn reversal_delta<C: TransitionCosts + ?Sized>(
    c: &Costs<'_, C>,
    path: &[(usize, usize)],
    fwd: &[f64],
    rev: &[f64],
    a: usize,
    b: usize,
) -> f64 {
    let n = path.len();
    let mut delta = (rev[b] - rev[a]) - (fwd[b] - fwd[a]);
    if a > 0 {
        delta += c.edge(path[a - 1], c.flip(path[b])) - c.edge(path[a - 1], path[a]);
    }
    if b + 1 < n {
        delta += c.edge(c.flip(path[a]), path[b + 1]) - c.edge(path[b], path[b + 1]);
    }
    delta
}

/// Largest improvement any single segment reversal would yield (negative
/// means an improving move exists). Exposed for post-condition checks.
pub fn best_two_opt_delta<C: TransitionCosts + ?Sized>(
    costs: &C,
    seq: &Sequence,
) -> Result<f64, SequencingError> {
    let path = seq.oriented(costs)?;
    let c = Costs {
        inner: costs,
        big: sentinel(costs),
        no: costs.orientations(),
    };
    let n = path.len();
    let mut best = 0.0f64;
    if n < 2 {
        return Ok(best);
    }
    let mut fwd = vec![0.0; n];
    let mut rev = vec![0.0; n];
    for k in 1..n {
        fwd[k] = fwd[k - 1] + c.edge(path[k - 1], path[k]);
        rev[k] = rev[k - 1] + c.edge(c.flip(path[k]), c.flip(path[k - 1]));
    }
    let first = if c.no == 2 { 0 } else { 1 };
    for a in 0..n {
        for b in a + first..n {
            best = best.min(reversal_delta(&c, &path, &fwd, &rev, a, b));
        }
    }
    Ok(best)
}
