//! Clustering around relays, inter-relay routes, and parallel route
//! selection.
//!
//! Routes between relay pairs are minimum-hop paths (breadth-first search
//! with ascending neighbor order, which fixes ties by lowest predecessor
//! index). Each route carries a regularized Laplacian over the full
//! vertex set built from only its own edges; the parallel pair is the one
//! maximizing the log-Euclidean distance between those Laplacians.

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::graph::{regularized_laplacian, Deployment, Graph, VertexKind};
use crate::placement::Placement;
use crate::spd::{lem_distance, SpdMatrix};

/// Nearest-relay assignment of every node.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Clustering {
    /// Per node: index into the placement's relay order.
    pub assignment: Vec<usize>,
    /// Per relay: member node indices, ascending.
    pub members: Vec<Vec<usize>>,
}

/// A simple inter-relay path with its own regularized Laplacian.
#[derive(Debug, Clone)]
pub struct Route {
    /// Relay endpoint vertices (graph indexing).
    pub relay_a: usize,
    pub relay_b: usize,
    /// Vertex path from relay_a to relay_b.
    pub path: Vec<usize>,
    /// Undirected edges of the path, each as (min, max).
    pub edges: Vec<(usize, usize)>,
    /// Regularized Laplacian over the full vertex set from this route's
    /// edges only.
    pub laplacian: SpdMatrix,
}

impl Route {
    pub fn hops(&self) -> usize {
        self.edges.len()
    }
}

/// Assigns each node to its nearest occupied relay (Euclidean distance,
/// ties to the lowest relay index in placement order).
pub fn assign_clusters(dep: &Deployment, placement: &Placement) -> Result<Clustering> {
    if placement.occupied_sites.is_empty() {
        return Err(Error::NoRelays);
    }
    let relay_positions: Vec<_> = placement
        .occupied_sites
        .iter()
        .map(|&s| dep.sites()[s])
        .collect();
    let mut assignment = Vec::with_capacity(dep.num_nodes());
    let mut members = vec![Vec::new(); relay_positions.len()];
    for (node, p) in dep.nodes().iter().enumerate() {
        let mut best = 0;
        let mut best_dist = relay_positions[0].distance(p);
        for (r, rp) in relay_positions.iter().enumerate().skip(1) {
            let d = rp.distance(p);
            if d < best_dist {
                best = r;
                best_dist = d;
            }
        }
        assignment.push(best);
        members[best].push(node);
    }
    Ok(Clustering {
        assignment,
        members,
    })
}

/// Minimum-hop route between two occupied relay vertices, or `None` when
/// they are disconnected.
pub fn shortest_route(
    g: &Graph,
    relay_a: usize,
    relay_b: usize,
    gamma: f64,
) -> Result<Option<Route>> {
    for v in [relay_a, relay_b] {
        if v >= g.num_vertices() {
            return Err(Error::VertexOutOfRange(v));
        }
        if g.kind(v) != VertexKind::OccupiedRelay {
            return Err(Error::NotARelay(v));
        }
    }
    if relay_a == relay_b {
        return Err(Error::InvalidFlowEndpoints(format!(
            "route endpoints must differ ({relay_a})"
        )));
    }
    let adj = g.adjacency();
    let mut prev = vec![usize::MAX; g.num_vertices()];
    prev[relay_a] = relay_a;
    let mut queue = VecDeque::from([relay_a]);
    while let Some(u) = queue.pop_front() {
        if u == relay_b {
            break;
        }
        for &v in &adj[u] {
            if prev[v] == usize::MAX {
                prev[v] = u;
                queue.push_back(v);
            }
        }
    }
    if prev[relay_b] == usize::MAX {
        return Ok(None);
    }
    let mut path = vec![relay_b];
    while *path.last().unwrap() != relay_a {
        path.push(prev[*path.last().unwrap()]);
    }
    path.reverse();
    let edges: Vec<(usize, usize)> = path
        .windows(2)
        .map(|w| (w[0].min(w[1]), w[0].max(w[1])))
        .collect();
    let route_graph = Graph::from_parts(
        g.num_nodes(),
        (0..g.num_vertices()).map(|v| g.kind(v)).collect(),
        edges.clone(),
    )?;
    let laplacian = regularized_laplacian(&route_graph, gamma)?;
    Ok(Some(Route {
        relay_a,
        relay_b,
        path,
        edges,
        laplacian,
    }))
}

/// All-pairs minimum-hop routes between the placement's relays, in
/// ascending (a, b) order. Unreachable pairs are returned separately.
pub fn relay_routes(
    g: &Graph,
    placement: &Placement,
    gamma: f64,
) -> Result<(Vec<Route>, usize)> {
    let relays: Vec<usize> = placement
        .occupied_sites
        .iter()
        .map(|&s| g.site_vertex(s))
        .collect();
    let mut routes = Vec::new();
    let mut unreachable = 0;
    for i in 0..relays.len() {
        for j in (i + 1)..relays.len() {
            let (a, b) = (relays[i].min(relays[j]), relays[i].max(relays[j]));
            match shortest_route(g, a, b, gamma)? {
                Some(r) => routes.push(r),
                None => unreachable += 1,
            }
        }
    }
    Ok((routes, unreachable))
}

/// Picks the route pair with maximum log-Euclidean distance between their
/// Laplacians. Exact ties break on the lexicographically smallest pair of
/// vertex paths, so the choice does not depend on input order.
pub fn select_parallel_routes(routes: &[Route]) -> Result<(usize, usize)> {
    if routes.len() < 2 {
        return Err(Error::TooFewRoutes(routes.len()));
    }
    let mut best: Option<((usize, usize), f64, (&[usize], &[usize]))> = None;
    for i in 0..routes.len() {
        for j in (i + 1)..routes.len() {
            let d = lem_distance(&routes[i].laplacian, &routes[j].laplacian)?;
            let (pa, pb) = (routes[i].path.as_slice(), routes[j].path.as_slice());
            let pair_key = (pa.min(pb), pa.max(pb));
            let better = match &best {
                None => true,
                Some((_, bd, bk)) => d > *bd || (d == *bd && pair_key < *bk),
            };
            if better {
                best = Some(((i, j), d, pair_key));
            }
        }
    }
    Ok(best.expect("at least one pair").0)
}

/// Counts route overlap: shared vertices (excluding vertices that are
/// endpoints of both routes) and shared undirected edges.
pub fn overlap_stats(r1: &Route, r2: &Route) -> (usize, usize) {
    let ends1 = [r1.relay_a, r1.relay_b];
    let ends2 = [r2.relay_a, r2.relay_b];
    let set2: std::collections::HashSet<_> = r2.path.iter().collect();
    let shared_nodes = r1
        .path
        .iter()
        .filter(|v| set2.contains(v))
        .filter(|&&v| !(ends1.contains(&v) && ends2.contains(&v)))
        .count();
    let edges2: std::collections::HashSet<_> = r2.edges.iter().collect();
    let shared_edges = r1.edges.iter().filter(|e| edges2.contains(e)).count();
    (shared_nodes, shared_edges)
}
