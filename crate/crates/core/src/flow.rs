//! Unit-capacity maximum flow on undirected graphs and the network
//! average flow objective.
//!
//! Each undirected edge is modeled as two antiparallel unit arcs sharing
//! residual capacity, so the net traversal per edge is at most one unit.
//! Augmenting paths are found with breadth-first search (shortest first),
//! and with unit capacities the flow value equals the number of
//! edge-disjoint paths between the endpoints.

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Outcome of a single max-flow computation.
#[derive(Debug, Clone)]
pub struct FlowResult {
    /// Maximum flow value (= number of edge-disjoint paths).
    pub value: usize,
    /// One vertex path per flow unit, pairwise edge-disjoint in the
    /// undirected sense, recovered by decomposing the final flow.
    pub paths: Vec<Vec<usize>>,
}

struct Arc {
    to: usize,
    cap: i32,
}

/// Residual network: arcs 2l and 2l+1 are the two directions of edge l
/// and act as each other's reverse.
struct Residual {
    arcs: Vec<Arc>,
    /// outgoing arc indices per vertex, ascending by target
    out: Vec<Vec<usize>>,
}

impl Residual {
    fn new(g: &Graph) -> Self {
        let mut arcs = Vec::with_capacity(2 * g.num_edges());
        let mut out = vec![Vec::new(); g.num_vertices()];
        for &(i, j) in g.edges() {
            out[i].push(arcs.len());
            arcs.push(Arc { to: j, cap: 1 });
            out[j].push(arcs.len());
            arcs.push(Arc { to: i, cap: 1 });
        }
        // edges are sorted, so arcs from i already come out ascending by
        // the first endpoint; sort each list by target for determinism.
        for list in &mut out {
            list.sort_by_key(|&a| arcs[a].to);
        }
        Residual { arcs, out }
    }
}

/// Edmonds-Karp maximum flow between two active vertices.
pub fn max_flow(g: &Graph, source: usize, sink: usize) -> Result<FlowResult> {
    if source >= g.num_vertices() || sink >= g.num_vertices() {
        return Err(Error::VertexOutOfRange(source.max(sink)));
    }
    if source == sink {
        return Err(Error::InvalidFlowEndpoints(format!(
            "source equals sink ({source})"
        )));
    }
    if !g.is_active(source) || !g.is_active(sink) {
        return Err(Error::InvalidFlowEndpoints(format!(
            "vacant site cannot be a flow endpoint ({source} -> {sink})"
        )));
    }

    let mut res = Residual::new(g);
    let mut value = 0usize;
    let mut prev_arc = vec![usize::MAX; g.num_vertices()];

    loop {
        // BFS for the shortest augmenting path in the residual network.
        prev_arc.fill(usize::MAX);
        let mut queue = VecDeque::from([source]);
        let mut reached = false;
        'bfs: while let Some(u) = queue.pop_front() {
            for &a in &res.out[u] {
                let arc = &res.arcs[a];
                if arc.cap == 0 || arc.to == source || prev_arc[arc.to] != usize::MAX {
                    continue;
                }
                prev_arc[arc.to] = a;
                if arc.to == sink {
                    reached = true;
                    break 'bfs;
                }
                queue.push_back(arc.to);
            }
        }
        if !reached {
            break;
        }
        // bottleneck
        let mut bottleneck = i32::MAX;
        let mut v = sink;
        while v != source {
            let a = prev_arc[v];
            bottleneck = bottleneck.min(res.arcs[a].cap);
            v = res.arcs[a ^ 1].to;
        }
        // augment
        let mut v = sink;
        while v != source {
            let a = prev_arc[v];
            res.arcs[a].cap -= bottleneck;
            res.arcs[a ^ 1].cap += bottleneck;
            v = res.arcs[a ^ 1].to;
        }
        value += bottleneck as usize;
    }

    let paths = decompose(g, &res, source, sink, value);
    Ok(FlowResult { value, paths })
}

/// Splits the final flow into unit s->d paths. Net flow on edge l is the
/// residual imbalance of its arc pair; walking positive-flow arcs from the
/// source (smallest next vertex first) and cutting any loops yields simple,
/// edge-disjoint paths.
fn decompose(g: &Graph, res: &Residual, source: usize, sink: usize, value: usize) -> Vec<Vec<usize>> {
    // remaining[v] = list of (next, edge slot) with net outbound flow
    let mut remaining = vec![Vec::new(); g.num_vertices()];
    for l in 0..g.num_edges() {
        let fwd = &res.arcs[2 * l];
        let (i, j) = g.edges()[l];
        // cap started at 1: cap 0 means one unit i->j, cap 2 means one unit j->i
        match fwd.cap {
            0 => remaining[i].push(j),
            2 => remaining[j].push(i),
            _ => {}
        }
    }
    for list in &mut remaining {
        list.sort_unstable();
        list.reverse(); // pop() takes the smallest target
    }
    let mut paths = Vec::with_capacity(value);
    for _ in 0..value {
        let mut walk = vec![source];
        let mut at = source;
        while at != sink {
            let next = remaining[at]
                .pop()
                .expect("flow conservation guarantees an outgoing unit");
            walk.push(next);
            at = next;
        }
        // cut loops: keep the first occurrence of each vertex
        let mut first = std::collections::HashMap::new();
        let mut simple: Vec<usize> = Vec::with_capacity(walk.len());
        for &v in &walk {
            if let Some(&pos) = first.get(&v) {
                for dropped in simple.drain(pos + 1..) {
                    first.remove(&dropped);
                }
            } else {
                first.insert(v, simple.len());
                simple.push(v);
            }
        }
        paths.push(simple);
    }
    paths
}

/// Network-average maximum flow: the mean over ordered node pairs (s, d)
/// of max_flow(s, d), i.e. (1/n) sum_s [ (1/(n-1)) sum_{d != s} f(s, d) ].
/// Relay vertices carry flow but are never sources or sinks. Uses the
/// undirected symmetry f(s, d) = f(d, s) to halve the sweep.
pub fn avg_max_flow(g: &Graph) -> f64 {
    let n = g.num_nodes();
    if n < 2 || g.num_edges() == 0 {
        return 0.0;
    }
    let mut total = 0usize;
    for s in 0..n {
        for d in (s + 1)..n {
            total += max_flow(g, s, d)
                .expect("node endpoints are always valid")
                .value;
        }
    }
    (2 * total) as f64 / (n * (n - 1)) as f64
}

/// Variant with one fixed destination: the mean over sources s != dest of
/// max_flow(s, dest).
pub fn avg_max_flow_fixed(g: &Graph, dest: usize) -> Result<f64> {
    let n = g.num_nodes();
    if dest >= n {
        return Err(Error::InvalidFlowEndpoints(format!(
            "fixed destination {dest} is not a node (n = {n})"
        )));
    }
    if n < 2 {
        return Ok(0.0);
    }
    let mut total = 0usize;
    for s in 0..n {
        if s != dest {
            total += max_flow(g, s, dest)?.value;
        }
    }
    Ok(total as f64 / (n - 1) as f64)
}
