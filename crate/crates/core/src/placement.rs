//! Relay positioning on candidate sites under three pluggable objectives:
//! log-Euclidean distance to the no-relay baseline, algebraic connectivity
//! of the active subgraph, and network-average max flow.
//!
//! The default search adds one relay at a time, each step occupying the
//! site that maximizes the objective (ties to the lowest site index, so
//! runs are bit-reproducible). A joint exhaustive search over all size-K
//! subsets is available for small instances to quantify the greedy gap,
//! and a distributed variant runs the greedy independently per region.

use crate::error::{Error, Result};
use crate::flow::avg_max_flow;
use crate::graph::{
    algebraic_connectivity, build_disk_graph, occupy_relays, occupy_relays_bridge, Deployment,
    Graph, Point, RelayEdgeModel, VertexKind,
};
use crate::spd::{lem_distance, SpdMatrix};

/// Default cap on the number of subsets the joint exhaustive search will
/// evaluate.
pub const DEFAULT_SUBSET_BUDGET: u128 = 100_000;

/// Placement objective.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ObjectiveKind {
    /// Log-Euclidean distance between the relay-augmented regularized
    /// Laplacian and the no-relay baseline.
    Lem,
    /// Algebraic connectivity of the active subgraph.
    Lambda2,
    /// Network-average maximum flow.
    MaxFlow,
}

impl ObjectiveKind {
    pub fn name(self) -> &'static str {
        match self {
            ObjectiveKind::Lem => "lem",
            ObjectiveKind::Lambda2 => "lambda2",
            ObjectiveKind::MaxFlow => "maxflow",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "lem" => Ok(ObjectiveKind::Lem),
            "lambda2" => Ok(ObjectiveKind::Lambda2),
            "maxflow" => Ok(ObjectiveKind::MaxFlow),
            other => Err(Error::Config(format!(
                "unknown scheme `{other}` (expected lem|lambda2|maxflow)"
            ))),
        }
    }

    /// Objective value of a candidate graph against the no-relay baseline.
    pub fn evaluate(self, g: &Graph, baseline: &SpdMatrix, gamma: f64) -> Result<f64> {
        match self {
            ObjectiveKind::Lem => objective_lem(g, baseline, gamma),
            ObjectiveKind::Lambda2 => algebraic_connectivity(g, true),
            ObjectiveKind::MaxFlow => Ok(avg_max_flow(g)),
        }
    }
}

impl std::fmt::Display for ObjectiveKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// An ordered list of occupied sites with the objective value recorded at
/// each step.
#[derive(Debug, Clone, PartialEq)]
pub struct Placement {
    pub occupied_sites: Vec<usize>,
    pub objective: ObjectiveKind,
    pub trace: Vec<f64>,
}

impl Placement {
    /// CSV rows `step,site_index,site_x,site_y,objective,value` with header.
    pub fn to_csv(&self, dep: &Deployment) -> String {
        let mut out = String::from("step,site_index,site_x,site_y,objective,value\n");
        for (step, (&site, &value)) in self.occupied_sites.iter().zip(&self.trace).enumerate() {
            let p = dep.sites()[site];
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                step + 1,
                site,
                p.x,
                p.y,
                self.objective.name(),
                value
            ));
        }
        out
    }
}

/// LEM objective: D(S_P, S_b) where S_P is the regularized Laplacian of
/// the relay-augmented graph and S_b the no-relay baseline.
pub fn objective_lem(g_with_relays: &Graph, baseline: &SpdMatrix, gamma: f64) -> Result<f64> {
    let s_p = crate::graph::regularized_laplacian(g_with_relays, gamma)?;
    lem_distance(&s_p, baseline)
}

fn occupy_one(g: &Graph, dep: &Deployment, site: usize, model: RelayEdgeModel) -> Result<Graph> {
    match model {
        RelayEdgeModel::Vertex => occupy_relays(g, dep, &[site]),
        RelayEdgeModel::Bridge => occupy_relays_bridge(g, dep, &[site]),
    }
}

fn check_k(k: usize, num_sites: usize) -> Result<()> {
    if k == 0 || k >= num_sites {
        return Err(Error::InvalidRelayCount { k, num_sites });
    }
    Ok(())
}

/// One-relay-at-a-time greedy search under the vertex relay model.
pub fn greedy_place(
    dep: &Deployment,
    objective: ObjectiveKind,
    k: usize,
    gamma: f64,
) -> Result<Placement> {
    greedy_place_with_model(dep, objective, k, gamma, RelayEdgeModel::Vertex)
}

/// Greedy search with an explicit relay edge model.
pub fn greedy_place_with_model(
    dep: &Deployment,
    objective: ObjectiveKind,
    k: usize,
    gamma: f64,
    model: RelayEdgeModel,
) -> Result<Placement> {
    check_k(k, dep.num_sites())?;
    let baseline = crate::graph::regularized_laplacian(&build_disk_graph(dep), gamma)?;
    let evaluate = CachedObjective::new(objective, &baseline, gamma)?;
    let mut current = build_disk_graph(dep);
    let mut occupied: Vec<usize> = Vec::with_capacity(k);
    let mut trace = Vec::with_capacity(k);
    for _ in 0..k {
        let mut best: Option<(usize, f64, Graph)> = None;
        for site in 0..dep.num_sites() {
            if occupied.contains(&site) {
                continue;
            }
            let candidate = occupy_one(&current, dep, site, model)?;
            let value = evaluate.value(&candidate)?;
            // strict > keeps the lowest site index on ties
            if best.as_ref().is_none_or(|(_, v, _)| value > *v) {
                best = Some((site, value, candidate));
            }
        }
        let (site, value, graph) = best.expect("k < Z leaves at least one free site");
        occupied.push(site);
        trace.push(value);
        current = graph;
    }
    Ok(Placement {
        occupied_sites: occupied,
        objective,
        trace,
    })
}

/// Objective evaluator with the baseline logarithm computed once; values
/// are bit-identical to [`ObjectiveKind::evaluate`].
struct CachedObjective<'a> {
    kind: ObjectiveKind,
    baseline: &'a SpdMatrix,
    baseline_log: Option<crate::spd::LogMatrix>,
    gamma: f64,
}

impl<'a> CachedObjective<'a> {
    fn new(kind: ObjectiveKind, baseline: &'a SpdMatrix, gamma: f64) -> Result<Self> {
        let baseline_log = match kind {
            ObjectiveKind::Lem => Some(baseline.log()?),
            _ => None,
        };
        Ok(Self {
            kind,
            baseline,
            baseline_log,
            gamma,
        })
    }

    fn value(&self, g: &Graph) -> Result<f64> {
        match (&self.kind, &self.baseline_log) {
            (ObjectiveKind::Lem, Some(log)) => {
                let s_p = crate::graph::regularized_laplacian(g, self.gamma)?;
                crate::spd::lem_distance_from_log(log, &s_p)
            }
            _ => self.kind.evaluate(g, self.baseline, self.gamma),
        }
    }
}

fn binomial(n: usize, k: usize) -> u128 {
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

/// Joint exhaustive search over all size-K site subsets (lexicographic
/// tie-break). Rejects instances whose subset count exceeds `budget`
/// (default [`DEFAULT_SUBSET_BUDGET`]), pointing the caller to the greedy
/// search. The trace holds the objective values of the chosen subset's
/// prefixes so it stays comparable with greedy traces.
pub fn exhaustive_place(
    dep: &Deployment,
    objective: ObjectiveKind,
    k: usize,
    gamma: f64,
    budget: Option<u128>,
) -> Result<Placement> {
    exhaustive_place_with_model(dep, objective, k, gamma, budget, RelayEdgeModel::Vertex)
}

pub fn exhaustive_place_with_model(
    dep: &Deployment,
    objective: ObjectiveKind,
    k: usize,
    gamma: f64,
    budget: Option<u128>,
    model: RelayEdgeModel,
) -> Result<Placement> {
    check_k(k, dep.num_sites())?;
    let budget = budget.unwrap_or(DEFAULT_SUBSET_BUDGET);
    let subsets = binomial(dep.num_sites(), k);
    if subsets > budget {
        return Err(Error::SearchBudgetExceeded { subsets, budget });
    }
    let base = build_disk_graph(dep);
    let baseline = crate::graph::regularized_laplacian(&base, gamma)?;
    let evaluate = CachedObjective::new(objective, &baseline, gamma)?;

    let mut best: Option<(Vec<usize>, f64)> = None;
    let mut subset: Vec<usize> = (0..k).collect();
    loop {
        let mut g = base.clone();
        for &s in &subset {
            g = occupy_one(&g, dep, s, model)?;
        }
        let value = evaluate.value(&g)?;
        if best.as_ref().is_none_or(|(_, v)| value > *v) {
            best = Some((subset.clone(), value));
        }
        // next lexicographic k-subset of 0..Z
        let z = dep.num_sites();
        let mut i = k;
        loop {
            if i == 0 {
                break;
            }
            i -= 1;
            if subset[i] != i + z - k {
                subset[i] += 1;
                for j in (i + 1)..k {
                    subset[j] = subset[j - 1] + 1;
                }
                break;
            }
            if i == 0 {
                let (sites, _) = best.expect("at least one subset evaluated");
                let mut trace = Vec::with_capacity(k);
                let mut g = base.clone();
                for &s in &sites {
                    g = occupy_one(&g, dep, s, model)?;
                    trace.push(evaluate.value(&g)?);
                }
                return Ok(Placement {
                    occupied_sites: sites,
                    objective,
                    trace,
                });
            }
        }
    }
}

/// Grid shape used by the distributed variant: `k` regions as `rows x
/// cols` with `rows` the largest divisor of `k` not exceeding sqrt(k)
/// (k = 4 gives quarters, primes give vertical strips).
pub fn partition_grid(k: usize) -> (usize, usize) {
    let mut rows = (k as f64).sqrt().floor() as usize;
    while rows > 1 && k % rows != 0 {
        rows -= 1;
    }
    (rows.max(1), k / rows.max(1))
}

/// Result of the distributed placement: regions without any candidate
/// site contribute no relay and are listed separately.
#[derive(Debug, Clone, PartialEq)]
pub struct DistributedPlacement {
    pub placement: Placement,
    /// Row-major indices of regions that had no candidate site.
    pub empty_regions: Vec<usize>,
}

/// Partitions the area into k regions and runs the one-relay LEM greedy
/// independently in each, against that region's own no-relay baseline.
/// Returns the union of the regional picks (global site indices).
pub fn distributed_place(dep: &Deployment, k: usize, gamma: f64) -> Result<DistributedPlacement> {
    distributed_place_with_model(dep, k, gamma, RelayEdgeModel::Vertex)
}

/// Distributed placement with an explicit relay edge model for the
/// regional candidate graphs.
pub fn distributed_place_with_model(
    dep: &Deployment,
    k: usize,
    gamma: f64,
    model: RelayEdgeModel,
) -> Result<DistributedPlacement> {
    check_k(k, dep.num_sites())?;
    let (rows, cols) = partition_grid(k);
    let (width, height) = dep.area();
    let region_of = |p: &Point| {
        let col = ((p.x / (width / cols as f64)) as usize).min(cols - 1);
        let row = ((p.y / (height / rows as f64)) as usize).min(rows - 1);
        row * cols + col
    };

    let mut occupied = Vec::new();
    let mut trace = Vec::new();
    let mut empty_regions = Vec::new();
    for region in 0..rows * cols {
        let local_nodes: Vec<Point> = dep
            .nodes()
            .iter()
            .filter(|p| region_of(p) == region)
            .copied()
            .collect();
        // ascending global index, so the local tie-break matches the global one
        let local_sites: Vec<(usize, Point)> = dep
            .sites()
            .iter()
            .enumerate()
            .filter(|(_, p)| region_of(p) == region)
            .map(|(i, p)| (i, *p))
            .collect();
        if local_sites.is_empty() {
            empty_regions.push(region);
            continue;
        }
        let (local_best, value) = regional_lem_pick(
            &local_nodes,
            &local_sites.iter().map(|(_, p)| *p).collect::<Vec<_>>(),
            dep.disk_radius(),
            gamma,
            model,
        )?;
        occupied.push(local_sites[local_best].0);
        trace.push(value);
    }
    Ok(DistributedPlacement {
        placement: Placement {
            occupied_sites: occupied,
            objective: ObjectiveKind::Lem,
            trace,
        },
        empty_regions,
    })
}

/// One-relay greedy LEM pick over an arbitrary local point set. Regions
/// may hold fewer than two nodes, so this bypasses Deployment invariants.
fn regional_lem_pick(
    nodes: &[Point],
    sites: &[Point],
    radius: f64,
    gamma: f64,
    model: RelayEdgeModel,
) -> Result<(usize, f64)> {
    let n = nodes.len();
    let dim_kinds = |occupied: Option<usize>| {
        let mut kinds = vec![VertexKind::Node; n];
        kinds.extend((0..sites.len()).map(|s| {
            if Some(s) == occupied {
                VertexKind::OccupiedRelay
            } else {
                VertexKind::VacantSite
            }
        }));
        kinds
    };
    let node_edges: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| ((i + 1)..n).map(move |j| (i, j)))
        .filter(|&(i, j)| nodes[i].distance(&nodes[j]) < radius)
        .collect();
    let baseline_graph = Graph::from_parts(n, dim_kinds(None), node_edges.clone())?;
    let baseline = crate::graph::regularized_laplacian(&baseline_graph, gamma)?;

    let mut best: Option<(usize, f64)> = None;
    for (s, sp) in sites.iter().enumerate() {
        let mut edges = node_edges.clone();
        let in_range: Vec<usize> = (0..n).filter(|&i| sp.distance(&nodes[i]) < radius).collect();
        let occupied = match model {
            RelayEdgeModel::Vertex => {
                let sv = n + s;
                edges.extend(in_range.iter().map(|&i| (i, sv)));
                Some(s)
            }
            RelayEdgeModel::Bridge => {
                for (a, &i) in in_range.iter().enumerate() {
                    for &j in &in_range[a + 1..] {
                        edges.push((i, j));
                    }
                }
                edges.sort_unstable();
                edges.dedup();
                None
            }
        };
        let g = Graph::from_parts(n, dim_kinds(occupied), edges)?;
        let value = objective_lem(&g, &baseline, gamma)?;
        if best.is_none_or(|(_, v)| value > v) {
            best = Some((s, value));
        }
    }
    Ok(best.expect("regions with sites evaluate at least one candidate"))
}
