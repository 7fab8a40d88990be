//! Shortest routes along headland chains, used for transit leg geometry.
//!
//! Nodes are headland chain vertices and raw track ends. Edges follow each
//! chain, join linked headlands of adjacent cells, and run along track chords
//! so that a route may cross the field between the two headland sides.

use petgraph::algo::astar;
use petgraph::graph::{NodeIndex, UnGraph};

use crate::decomposition::{CellDecomposition, End, HeadlandGraph, HeadlandId};
use crate::geometry::{point_segment_distance, Point};
use crate::tracks::Track;

#[derive(Debug, Clone, Copy)]
struct Node {
    at: Point,
    cell: usize,
}

/// A route between two raw track ends.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Route {
    pub points: Vec<Point>,
    pub cells: Vec<usize>,
}

pub(crate) struct Router {
    graph: UnGraph<Node, f64>,
    /// Node of each raw track end, indexed `[track][end]`.
    ends: Vec<[NodeIndex; 2]>,
}

impl Router {
    pub fn new(d: &CellDecomposition, tracks: &[Track], hg: &HeadlandGraph) -> Self {
        let mut graph = UnGraph::<Node, f64>::new_undirected();
        let mut chains: Vec<Vec<NodeIndex>> = vec![Vec::new(); 2 * d.cells.len()];
        for cell in &d.cells {
            for side in [End::Lower, End::Upper] {
                let ids: Vec<NodeIndex> = cell
                    .headland(side)
                    .iter()
                    .map(|&at| graph.add_node(Node { at, cell: cell.id }))
                    .collect();
                for w in ids.windows(2) {
                    let len = graph[w[0]].at.distance(graph[w[1]].at);
                    graph.add_edge(w[0], w[1], len);
                }
                chains[HeadlandId::new(cell.id, side).index()] = ids;
            }
        }
        for &(a, b) in &hg.edges {
            let (ca, cb) = (&chains[a.index()], &chains[b.index()]);
            let closest = ca
                .iter()
                .flat_map(|&u| cb.iter().map(move |&v| (u, v)))
                .map(|(u, v)| (graph[u].at.distance(graph[v].at), u, v))
                .min_by(|x, y| x.0.total_cmp(&y.0));
            if let Some((len, u, v)) = closest {
                graph.add_edge(u, v, len);
            }
        }
        let mut ends = Vec::with_capacity(tracks.len());
        for t in tracks {
            let mut pair = [NodeIndex::end(); 2];
            for side in [End::Lower, End::Upper] {
                let at = t.end(side);
                let node = graph.add_node(Node {
                    at,
                    cell: t.cell_id,
                });
                attach(
                    &mut graph,
                    node,
                    &chains[HeadlandId::new(t.cell_id, side).index()],
                );
                pair[side.index()] = node;
            }
            graph.add_edge(pair[0], pair[1], t.length());
            ends.push(pair);
        }
        Self { graph, ends }
    }

    /// Shortest route from a raw end of track `a` to a raw end of track `b`.
    pub fn route(&self, a: usize, a_end: End, b: usize, b_end: End) -> Option<Route> {
        let from = self.ends[a][a_end.index()];
        let to = self.ends[b][b_end.index()];
        let (_, nodes) = astar(&self.graph, from, |n| n == to, |e| *e.weight(), |_| 0.0)?;
        let mut points: Vec<Point> = Vec::with_capacity(nodes.len());
        let mut cells: Vec<usize> = Vec::new();
        for n in nodes {
            let node = self.graph[n];
            if points.last().is_none_or(|p| p.distance(node.at) > 0.0) {
                points.push(node.at);
            }
            if cells.last() != Some(&node.cell) {
                cells.push(node.cell);
            }
        }
        Some(Route { points, cells })
    }
}

/// Joins a raw track end to the chain segment it lies on.
fn attach(graph: &mut UnGraph<Node, f64>, node: NodeIndex, chain: &[NodeIndex]) {
    let at = graph[node].at;
    match chain {
        [] => {}
        [only] => {
            let len = at.distance(graph[*only].at);
            graph.add_edge(node, *only, len);
        }
        _ => {
            let (i, _) = chain
                .windows(2)
                .enumerate()
                .map(|(i, w)| {
                    (
                        i,
                        point_segment_distance(at, graph[w[0]].at, graph[w[1]].at),
                    )
                })
                .min_by(|x, y| x.1.total_cmp(&y.1))
                .expect("chain has a segment");
            for &n in &chain[i..=i + 1] {
                let len = at.distance(graph[n].at);
                graph.add_edge(node, n, len);
            }
        }
    }
}
