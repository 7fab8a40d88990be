//! Bitmask dynamic program for the open Hamiltonian path.

use super::{
    approx_eq, sentinel, Endpoints, Sequence, SequencingError, TransitionCosts, EXACT_HARD_LIMIT,
};

/// Minimum-cost visiting order over all tracks (and entry ends, when the
/// structure has two orientations).
///
/// State is `(visited set, current track, current entry end)`; the exit end
/// follows from the entry end, so full traversal of every track is built in.
/// Among cost-equal optima the lexicographically smallest order is returned.
pub fn solve_exact<C: TransitionCosts + ?Sized>(
    costs: &C,
    endpoints: Endpoints,
    threshold: usize,
) -> Result<Sequence, SequencingError> {
    let n = costs.len();
    let limit = threshold.min(EXACT_HARD_LIMIT);
    if n > limit {
        return Err(SequencingError::TooLarge {
            n,
            threshold: limit,
        });
    }
    for t in [endpoints.start, endpoints.end].into_iter().flatten() {
        if t >= n {
            return Err(SequencingError::OutOfRange(t));
        }
    }
    let no = costs.orientations();
    if n == 0 {
        return Ok(Sequence::from_oriented(&[], no));
    }
    if n > 1 && endpoints.start.is_some() && endpoints.start == endpoints.end {
        return Err(SequencingError::Infeasible);
    }

    let big = sentinel(costs);
    let edge = |i: usize, oi: usize, j: usize, oj: usize| {
        let c = costs.transition(i, oi, j, oj);
        if c.is_finite() {
            c
        } else {
            big
        }
    };
    let full = (1usize << n) - 1;
    let width = n * no;
    let slot = |mask: usize, i: usize, o: usize| mask * width + i * no + o;
    // Only a sum of n - 1 sentinels or more can mean "unreachable".
    let unreachable = big * n as f64 * 4.0;
    let mut h = vec![unreachable; (full + 1) * width];

    // `end` may only be entered as the final track.
    let allowed = |mask: usize, j: usize| match endpoints.end {
        Some(e) if e == j => mask | (1 << j) == full,
        _ => true,
    };

    for i in 0..n {
        for o in 0..no {
            h[slot(full, i, o)] = 0.0;
        }
    }
    for mask in (1..full).rev() {
        for i in 0..n {
            if mask & (1 << i) == 0 {
                continue;
            }
            for o in 0..no {
                let mut best = unreachable;
                for j in 0..n {
                    if mask & (1 << j) != 0 || !allowed(mask, j) {
                        continue;
                    }
                    let next = mask | (1 << j);
                    for oj in 0..no {
                        let v = edge(i, o, j, oj) + h[slot(next, j, oj)];
                        if v < best {
                            best = v;
                        }
                    }
                }
                h[slot(mask, i, o)] = best;
            }
        }
    }

    let starts: Vec<usize> = match endpoints.start {
        Some(s) => vec![s],
        None => (0..n).filter(|&i| n == 1 || allowed(0, i)).collect(),
    };
    let mut best = f64::INFINITY;
    for &i in &starts {
        for o in 0..no {
            best = best.min(h[slot(1 << i, i, o)]);
        }
    }
    if best >= big || best.is_nan() {
        return Err(SequencingError::Infeasible);
    }

    let mut path = Vec::with_capacity(n);
    'first: for &i in &starts {
        for o in 0..no {
            if approx_eq(h[slot(1 << i, i, o)], best) {
                path.push((i, o));
                break 'first;
            }
        }
    }
    let mut mask = 1usize << path[0].0;
    while mask != full {
        let (i, o) = *path.last().expect("path is non-empty");
        let target = h[slot(mask, i, o)];
        let mut chosen = None;
        'search: for j in 0..n {
            if mask & (1 << j) != 0 || !allowed(mask, j) {
                continue;
            }
            for oj in 0..no {
                let c = costs.transition(i, o, j, oj);
                if c.is_finite() && approx_eq(c + h[slot(mask | (1 << j), j, oj)], target) {
                    chosen = Some((j, oj));
                    break 'search;
                }
            }
        }
        let next = chosen.ok_or(SequencingError::Infeasible)?;
        mask |= 1 << next.0;
        path.push(next);
    }
    Ok(Sequence::from_oriented(&path, no))
}
