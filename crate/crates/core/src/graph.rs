//! Disk-model graphs over a fixed vertex set of network nodes plus
//! candidate relay sites.
//!
//! Every graph in an experiment lives on the same n + Z vertices: indices
//! 0..n are nodes, n..n+Z are candidate sites. Vacant sites stay isolated,
//! which keeps all Laplacians the same dimension so log-Euclidean
//! distances between them are always well-defined.

use nalgebra::{Complex, DMatrix};

use crate::error::{Error, Result};
use crate::spd::SpdMatrix;

/// A point in the deployment area.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn distance(&self, other: &Point) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }
}

/// Immutable scene: node positions, candidate relay sites, disk radius.
#[derive(Debug, Clone)]
pub struct Deployment {
    node_positions: Vec<Point>,
    candidate_sites: Vec<Point>,
    disk_radius: f64,
    area: (f64, f64),
}

impl Deployment {
    pub fn new(
        node_positions: Vec<Point>,
        candidate_sites: Vec<Point>,
        disk_radius: f64,
        area: (f64, f64),
    ) -> Result<Self> {
        if node_positions.len() < 2 {
            return Err(Error::InvalidDeployment(format!(
                "need at least 2 nodes, got {}",
                node_positions.len()
            )));
        }
        if candidate_sites.is_empty() {
            return Err(Error::InvalidDeployment("need at least 1 candidate site".into()));
        }
        if disk_radius <= 0.0 || !disk_radius.is_finite() {
            return Err(Error::InvalidDeployment(format!(
                "disk radius must be positive, got {disk_radius}"
            )));
        }
        if area.0 <= 0.0 || area.1 <= 0.0 {
            return Err(Error::InvalidDeployment(format!(
                "area must be positive, got {}x{}",
                area.0, area.1
            )));
        }
        for (what, pts) in [("node", &node_positions), ("site", &candidate_sites)] {
            for (i, p) in pts.iter().enumerate() {
                if !(0.0..=area.0).contains(&p.x) || !(0.0..=area.1).contains(&p.y) {
                    return Err(Error::InvalidDeployment(format!(
                        "{what} {i} at ({}, {}) lies outside the {}x{} area",
                        p.x, p.y, area.0, area.1
                    )));
                }
            }
        }
        Ok(Self {
            node_positions,
            candidate_sites,
            disk_radius,
            area,
        })
    }

    pub fn num_nodes(&self) -> usize {
        self.node_positions.len()
    }

    pub fn num_sites(&self) -> usize {
        self.candidate_sites.len()
    }

    pub fn disk_radius(&self) -> f64 {
        self.disk_radius
    }

    pub fn area(&self) -> (f64, f64) {
        self.area
    }

    pub fn nodes(&self) -> &[Point] {
        &self.node_positions
    }

    pub fn sites(&self) -> &[Point] {
        &self.candidate_sites
    }

    /// Position of vertex `v` in the combined node-then-site indexing.
    pub fn vertex_position(&self, v: usize) -> Result<Point> {
        let n = self.num_nodes();
        if v < n {
            Ok(self.node_positions[v])
        } else if v < n + self.num_sites() {
            Ok(self.candidate_sites[v - n])
        } else {
            Err(Error::VertexOutOfRange(v))
        }
    }

    /// Line-oriented text form: header `n Z R width height`, then one
    /// `x y` line per node, then per site.
    pub fn to_text(&self) -> String {
        let mut out = format!(
            "{} {} {} {} {}\n",
            self.num_nodes(),
            self.num_sites(),
            self.disk_radius,
            self.area.0,
            self.area.1
        );
        for p in self.node_positions.iter().chain(&self.candidate_sites) {
            out.push_str(&format!("{} {}\n", p.x, p.y));
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines
            .next()
            .ok_or_else(|| Error::DeploymentFormat("empty input".into()))?;
        let fields: Vec<&str> = header.split_whitespace().collect();
        if fields.len() != 5 {
            return Err(Error::DeploymentFormat(format!(
                "header needs 5 fields `n Z R width height`, got {}",
                fields.len()
            )));
        }
        let n: usize = parse(fields[0], "n")?;
        let z: usize = parse(fields[1], "Z")?;
        let radius: f64 = parse(fields[2], "R")?;
        let width: f64 = parse(fields[3], "width")?;
        let height: f64 = parse(fields[4], "height")?;
        let mut points = Vec::with_capacity(n + z);
        for _ in 0..n + z {
            let line = lines.next().ok_or_else(|| {
                Error::DeploymentFormat(format!("expected {} point lines", n + z))
            })?;
            let xy: Vec<&str> = line.split_whitespace().collect();
            if xy.len() != 2 {
                return Err(Error::DeploymentFormat(format!("bad point line `{line}`")));
            }
            points.push(Point::new(parse(xy[0], "x")?, parse(xy[1], "y")?));
        }
        let sites = points.split_off(n);
        Deployment::new(points, sites, radius, (width, height))
    }

    pub fn save(&self, path: &std::path::Path) -> Result<()> {
        std::fs::write(path, self.to_text())?;
        Ok(())
    }

    pub fn load(path: &std::path::Path) -> Result<Self> {
        Self::from_text(&std::fs::read_to_string(path)?)
    }
}

fn parse<T: std::str::FromStr>(s: &str, what: &str) -> Result<T> {
    s.parse()
        .map_err(|_| Error::DeploymentFormat(format!("cannot parse {what} from `{s}`")))
}

/// Candidate sites on a g x g grid spanning the area (endpoints included).
/// `count` must be a perfect square.
pub fn square_site_grid(count: usize, area: (f64, f64)) -> Result<Vec<Point>> {
    let g = (count as f64).sqrt().round() as usize;
    if g * g != count || count == 0 {
        return Err(Error::InvalidDeployment(format!(
            "site count {count} is not a positive perfect square"
        )));
    }
    let mut sites = Vec::with_capacity(count);
    for row in 0..g {
        for col in 0..g {
            let frac = |i: usize| {
                if g == 1 {
                    0.5
                } else {
                    i as f64 / (g - 1) as f64
                }
            };
            sites.push(Point::new(frac(col) * area.0, frac(row) * area.1));
        }
    }
    Ok(sites)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VertexKind {
    Node,
    OccupiedRelay,
    VacantSite,
}

/// How occupying a site changes the graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RelayEdgeModel {
    /// The site becomes a vertex connected to everything within R.
    Vertex,
    /// The site stays vacant; node pairs jointly within R of it become
    /// directly connected instead.
    Bridge,
}

/// Undirected graph on the fixed n + Z vertex set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    num_nodes: usize,
    kinds: Vec<VertexKind>,
    /// Unordered edges stored as (i, j) with i < j, sorted lexicographically.
    edges: Vec<(usize, usize)>,
}

impl Graph {
    /// Builds a graph from explicit parts; mainly for tests. Edges are
    /// normalized, deduplicated, and checked against vertex kinds.
    pub fn from_parts(
        num_nodes: usize,
        kinds: Vec<VertexKind>,
        edges: Vec<(usize, usize)>,
    ) -> Result<Self> {
        let mut normalized = Vec::with_capacity(edges.len());
        for (a, b) in edges {
            if a == b {
                return Err(Error::InvalidDeployment(format!("self-loop at {a}")));
            }
            let (i, j) = (a.min(b), a.max(b));
            if j >= kinds.len() {
                return Err(Error::VertexOutOfRange(j));
            }
            if kinds[i] == VertexKind::VacantSite || kinds[j] == VertexKind::VacantSite {
                return Err(Error::InvalidDeployment(format!(
                    "edge ({i}, {j}) touches a vacant site"
                )));
            }
            normalized.push((i, j));
        }
        normalized.sort_unstable();
        normalized.dedup();
        Ok(Self {
            num_nodes,
            kinds,
            edges: normalized,
        })
    }

    pub fn num_vertices(&self) -> usize {
        self.kinds.len()
    }

    pub fn num_nodes(&self) -> usize {
        self.num_nodes
    }

    pub fn num_sites(&self) -> usize {
        self.kinds.len() - self.num_nodes
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn kind(&self, v: usize) -> VertexKind {
        self.kinds[v]
    }

    pub fn is_active(&self, v: usize) -> bool {
        self.kinds[v] != VertexKind::VacantSite
    }

    /// Vertex index of candidate site `site`.
    pub fn site_vertex(&self, site: usize) -> usize {
        self.num_nodes + site
    }

    /// Site indices currently occupied, ascending.
    pub fn occupied_sites(&self) -> Vec<usize> {
        (0..self.num_sites())
            .filter(|&s| self.kinds[self.num_nodes + s] == VertexKind::OccupiedRelay)
            .collect()
    }

    /// Ascending adjacency lists.
    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.num_vertices()];
        for &(i, j) in &self.edges {
            adj[i].push(j);
            adj[j].push(i);
        }
        // edges are sorted by (i, j), so adj[i] is ascending already for the
        // first endpoint; the reverse direction needs a sort.
        for list in &mut adj {
            list.sort_unstable();
        }
        adj
    }

    /// Connected components over active vertices only (BFS).
    pub fn active_components(&self) -> Vec<Vec<usize>> {
        let adj = self.adjacency();
        let mut seen = vec![false; self.num_vertices()];
        let mut components = Vec::new();
        for start in 0..self.num_vertices() {
            if seen[start] || !self.is_active(start) {
                continue;
            }
            let mut queue = std::collections::VecDeque::from([start]);
            seen[start] = true;
            let mut comp = Vec::new();
            while let Some(u) = queue.pop_front() {
                comp.push(u);
                for &v in &adj[u] {
                    if !seen[v] {
                        seen[v] = true;
                        queue.push_back(v);
                    }
                }
            }
            components.push(comp);
        }
        components
    }
}

/// Disk-model graph: node pairs closer than R are connected, all sites
/// start vacant and isolated.
pub fn build_disk_graph(dep: &Deployment) -> Graph {
    let n = dep.num_nodes();
    let z = dep.num_sites();
    let mut kinds = vec![VertexKind::Node; n];
    kinds.extend(std::iter::repeat_n(VertexKind::VacantSite, z));
    let mut edges = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            if dep.nodes()[i].distance(&dep.nodes()[j]) < dep.disk_radius() {
                edges.push((i, j));
            }
        }
    }
    Graph {
        num_nodes: n,
        kinds,
        edges,
    }
}

fn check_sites(g: &Graph, dep: &Deployment, sites: &[usize]) -> Result<()> {
    if g.num_nodes() != dep.num_nodes() || g.num_sites() != dep.num_sites() {
        return Err(Error::DimensionMismatch {
            left: g.num_vertices(),
            right: dep.num_nodes() + dep.num_sites(),
        });
    }
    let mut seen = vec![false; dep.num_sites()];
    for &s in sites {
        if s >= dep.num_sites() {
            return Err(Error::SiteOutOfRange {
                index: s,
                num_sites: dep.num_sites(),
            });
        }
        if seen[s] {
            return Err(Error::DuplicateSite(s));
        }
        seen[s] = true;
    }
    Ok(())
}

/// Returns a new graph with the listed sites occupied: each becomes a
/// relay vertex connected to every node and every other occupied relay
/// within distance R. The input graph is not modified.
pub fn occupy_relays(g: &Graph, dep: &Deployment, sites: &[usize]) -> Result<Graph> {
    check_sites(g, dep, sites)?;
    let n = g.num_nodes();
    let radius = dep.disk_radius();
    let mut kinds = g.kinds.clone();
    for &s in sites {
        if kinds[n + s] == VertexKind::OccupiedRelay {
            return Err(Error::DuplicateSite(s));
        }
        kinds[n + s] = VertexKind::OccupiedRelay;
    }
    let mut edges = g.edges.clone();
    for &s in sites {
        let sv = n + s;
        let sp = dep.sites()[s];
        for (i, p) in dep.nodes().iter().enumerate() {
            if sp.distance(p) < radius {
                edges.push((i.min(sv), i.max(sv)));
            }
        }
        for (other, kind) in kinds.iter().enumerate().skip(n) {
            if other != sv
                && *kind == VertexKind::OccupiedRelay
                && sp.distance(&dep.sites()[other - n]) < radius
            {
                edges.push((sv.min(other), sv.max(other)));
            }
        }
    }
    edges.sort_unstable();
    edges.dedup();
    Ok(Graph {
        num_nodes: n,
        kinds,
        edges,
    })
}

/// Bridge-model variant: occupying a site adds direct node-node edges for
/// every node pair jointly within R of it. Sites stay vacant vertices.
pub fn occupy_relays_bridge(g: &Graph, dep: &Deployment, sites: &[usize]) -> Result<Graph> {
    check_sites(g, dep, sites)?;
    let radius = dep.disk_radius();
    let mut edges = g.edges.clone();
    for &s in sites {
        let sp = dep.sites()[s];
        let near: Vec<usize> = (0..dep.num_nodes())
            .filter(|&i| sp.distance(&dep.nodes()[i]) < radius)
            .collect();
        for (a, &i) in near.iter().enumerate() {
            for &j in &near[a + 1..] {
                edges.push((i, j));
            }
        }
    }
    edges.sort_unstable();
    edges.dedup();
    Ok(Graph {
        num_nodes: g.num_nodes,
        kinds: g.kinds.clone(),
        edges,
    })
}

/// Signed incidence matrix A (num_vertices x m): column l for edge (i, j)
/// with i < j has +1 at i and -1 at j.
pub fn incidence_matrix(g: &Graph) -> DMatrix<f64> {
    let mut a = DMatrix::zeros(g.num_vertices(), g.num_edges());
    for (l, &(i, j)) in g.edges.iter().enumerate() {
        a[(i, l)] = 1.0;
        a[(j, l)] = -1.0;
    }
    a
}

/// Combinatorial Laplacian: degree on the diagonal, -1 per edge.
/// Equals A * A^T for the incidence matrix above.
pub fn laplacian(g: &Graph) -> DMatrix<f64> {
    let dim = g.num_vertices();
    let mut l = DMatrix::zeros(dim, dim);
    for &(i, j) in &g.edges {
        l[(i, i)] += 1.0;
        l[(j, j)] += 1.0;
        l[(i, j)] -= 1.0;
        l[(j, i)] -= 1.0;
    }
    l
}

/// S = L + gamma * I, positive definite for gamma > 0.
pub fn regularized_laplacian(g: &Graph, gamma: f64) -> Result<SpdMatrix> {
    if gamma <= 0.0 || !gamma.is_finite() {
        return Err(Error::NonPositiveGamma(gamma));
    }
    let dim = g.num_vertices();
    let mut s = laplacian(g).map(|x| Complex::new(x, 0.0));
    for i in 0..dim {
        s[(i, i)] += Complex::new(gamma, 0.0);
    }
    SpdMatrix::from_hermitian_unchecked(s)
}

/// Second-smallest Laplacian eigenvalue. With `restrict_to_active` the
/// Laplacian is first restricted to node and occupied-relay vertices,
/// since isolated vacant sites would pin the value at zero.
pub fn algebraic_connectivity(g: &Graph, restrict_to_active: bool) -> Result<f64> {
    let vertices: Vec<usize> = (0..g.num_vertices())
        .filter(|&v| !restrict_to_active || g.is_active(v))
        .collect();
    if vertices.len() < 2 {
        return Err(Error::TooFewActiveVertices(vertices.len()));
    }
    let mut index = vec![usize::MAX; g.num_vertices()];
    for (k, &v) in vertices.iter().enumerate() {
        index[v] = k;
    }
    let dim = vertices.len();
    let mut l = DMatrix::<f64>::zeros(dim, dim);
    for &(i, j) in &g.edges {
        let (a, b) = (index[i], index[j]);
        if a == usize::MAX || b == usize::MAX {
            continue;
        }
        l[(a, a)] += 1.0;
        l[(b, b)] += 1.0;
        l[(a, b)] -= 1.0;
        l[(b, a)] -= 1.0;
    }
    let mut eigs: Vec<f64> = l.symmetric_eigen().eigenvalues.iter().cloned().collect();
    eigs.sort_by(f64::total_cmp);
    Ok(eigs[1].max(0.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn two_node_deployment(d: f64) -> Deployment {
        Deployment::new(
            vec![Point::new(0.0, 0.0), Point::new(d, 0.0)],
            vec![Point::new(5.0, 5.0)],
            2.0,
            (10.0, 10.0),
        )
        .unwrap()
    }

    #[test]
    fn close_nodes_get_an_edge() {
        let g = build_disk_graph(&two_node_deployment(0.5));
        assert_eq!(g.edges(), &[(0, 1)]);
    }

    #[test]
    fn distant_nodes_stay_disconnected() {
        let g = build_disk_graph(&two_node_deployment(3.0));
        assert!(g.edges().is_empty());
    }

    #[test]
    fn boundary_distance_is_excluded() {
        // strict <R: ties at exactly R produce no edge
        let g = build_disk_graph(&two_node_deployment(2.0));
        assert!(g.edges().is_empty());
    }

    #[test]
    fn disk_graph_matches_brute_force_distance_check() {
        use rand::Rng;
        let mut rng = crate::rng::trial_rng(11, 0);
        let nodes: Vec<Point> = (0..20)
            .map(|_| Point::new(rng.random::<f64>() * 6.0, rng.random::<f64>() * 6.0))
            .collect();
        let dep = Deployment::new(
            nodes.clone(),
            square_site_grid(16, (6.0, 6.0)).unwrap(),
            2.0,
            (6.0, 6.0),
        )
        .unwrap();
        let g = build_disk_graph(&dep);
        let mut expected = 0;
        for i in 0..nodes.len() {
            for j in 0..nodes.len() {
                if i < j && nodes[i].distance(&nodes[j]) < 2.0 {
                    expected += 1;
                }
            }
        }
        assert_eq!(g.num_edges(), expected);
        // all site vertices vacant and isolated
        for s in 0..16 {
            assert_eq!(g.kind(g.site_vertex(s)), VertexKind::VacantSite);
        }
    }

    #[test]
    fn occupying_no_sites_is_identity() {
        let dep = two_node_deployment(0.5);
        let g = build_disk_graph(&dep);
        let g2 = occupy_relays(&g, &dep, &[]).unwrap();
        assert_eq!(g, g2);
    }

    #[test]
    fn relay_connects_nodes_in_range() {
        // relay equidistant 1.0 from both nodes
        let dep = Deployment::new(
            vec![Point::new(4.0, 5.0), Point::new(6.0, 5.0)],
            vec![Point::new(5.0, 5.0 + 3.0f64.sqrt())],
            2.0,
            (10.0, 10.0),
        )
        .unwrap();
        let g = build_disk_graph(&dep);
        assert!(g.edges().is_empty());
        let g2 = occupy_relays(&g, &dep, &[0]).unwrap();
        assert_eq!(g2.edges(), &[(0, 2), (1, 2)]);
        assert_eq!(g2.kind(2), VertexKind::OccupiedRelay);
        // original untouched
        assert!(g.edges().is_empty());
    }

    #[test]
    fn out_of_range_relay_is_occupied_but_isolated() {
        let dep = two_node_deployment(0.5);
        let g = occupy_relays(&build_disk_graph(&dep), &dep, &[0]).unwrap();
        assert_eq!(g.kind(2), VertexKind::OccupiedRelay);
        assert_eq!(g.edges(), &[(0, 1)]);
        let l = laplacian(&g);
        for c in 0..3 {
            assert_eq!(l[(2, c)], 0.0);
        }
    }

    #[test]
    fn duplicate_site_is_rejected() {
        let dep = two_node_deployment(0.5);
        let g = build_disk_graph(&dep);
        assert!(matches!(
            occupy_relays(&g, &dep, &[0, 0]),
            Err(Error::DuplicateSite(0))
        ));
    }

    #[test]
    fn occupied_relays_within_range_are_linked() {
        let dep = Deployment::new(
            vec![Point::new(0.0, 0.0), Point::new(9.0, 9.0)],
            vec![Point::new(4.0, 4.0), Point::new(5.0, 4.0)],
            2.0,
            (10.0, 10.0),
        )
        .unwrap();
        let g = occupy_relays(&build_disk_graph(&dep), &dep, &[0, 1]).unwrap();
        assert!(g.edges().contains(&(2, 3)));
    }

    #[test]
    fn bridge_model_adds_node_edges_only() {
        let dep = Deployment::new(
            vec![Point::new(4.0, 5.0), Point::new(6.0, 5.0)],
            vec![Point::new(5.0, 5.0)],
            2.0,
            (10.0, 10.0),
        )
        .unwrap();
        let g = occupy_relays_bridge(&build_disk_graph(&dep), &dep, &[0]).unwrap();
        assert_eq!(g.edges(), &[(0, 1)]);
        assert_eq!(g.kind(2), VertexKind::VacantSite);
    }

    #[test]
    fn single_edge_laplacian() {
        let g = build_disk_graph(&two_node_deployment(0.5));
        let l = laplacian(&g);
        assert_eq!(l[(0, 0)], 1.0);
        assert_eq!(l[(0, 1)], -1.0);
        assert_eq!(l[(1, 0)], -1.0);
        assert_eq!(l[(1, 1)], 1.0);
    }

    #[test]
    fn edgeless_laplacian_is_zero() {
        let g = build_disk_graph(&two_node_deployment(3.0));
        assert_eq!(laplacian(&g).abs().max(), 0.0);
    }

    fn path3() -> Graph {
        Graph::from_parts(3, vec![VertexKind::Node; 3], vec![(0, 1), (1, 2)]).unwrap()
    }

    #[test]
    fn path_graph_laplacian_matches_hand_product() {
        let l = laplacian(&path3());
        let expected =
            DMatrix::from_row_slice(3, 3, &[1.0, -1.0, 0.0, -1.0, 2.0, -1.0, 0.0, -1.0, 1.0]);
        assert_eq!(l, expected);
        let a = incidence_matrix(&path3());
        assert_eq!(&a * a.transpose(), l);
    }

    #[test]
    fn incidence_columns_have_one_plus_and_one_minus() {
        let a = incidence_matrix(&path3());
        for col in a.column_iter() {
            let plus = col.iter().filter(|&&x| x == 1.0).count();
            let minus = col.iter().filter(|&&x| x == -1.0).count();
            let zero = col.iter().filter(|&&x| x == 0.0).count();
            assert_eq!((plus, minus, zero), (1, 1, col.len() - 2));
        }
    }

    #[test]
    fn regularization_shifts_the_spectrum() {
        let g = build_disk_graph(&two_node_deployment(0.5));
        let s = regularized_laplacian(&g, 0.5).unwrap();
        assert_eq!(s.dim(), 3);
        // nodes-only block is [[1.5, -1], [-1, 1.5]]; site row is 0.5 on diagonal
        assert_relative_eq!(s.entries()[(0, 0)].re, 1.5);
        assert_relative_eq!(s.entries()[(0, 1)].re, -1.0);
        assert_relative_eq!(s.entries()[(2, 2)].re, 0.5);
        let eigs = s.eigenvalues();
        assert_relative_eq!(eigs[0], 0.5, epsilon = 1e-12);
        assert_relative_eq!(eigs[2], 2.5, epsilon = 1e-12);
    }

    #[test]
    fn edgeless_regularization_is_gamma_identity() {
        let g = build_disk_graph(&two_node_deployment(3.0));
        let s = regularized_laplacian(&g, 0.5).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let expected = if i == j { 0.5 } else { 0.0 };
                assert_eq!(s.entries()[(i, j)].re, expected);
            }
        }
    }

    #[test]
    fn non_positive_gamma_is_rejected() {
        let g = path3();
        assert!(matches!(
            regularized_laplacian(&g, 0.0),
            Err(Error::NonPositiveGamma(_))
        ));
        assert!(matches!(
            regularized_laplacian(&g, -1.0),
            Err(Error::NonPositiveGamma(_))
        ));
    }

    #[test]
    fn path_graph_connectivity() {
        // spectrum of P3 is {0, 1, 3}
        assert_relative_eq!(
            algebraic_connectivity(&path3(), false).unwrap(),
            1.0,
            epsilon = 1e-12
        );
    }

    #[test]
    fn complete_graph_connectivity_equals_order() {
        let g = Graph::from_parts(
            3,
            vec![VertexKind::Node; 3],
            vec![(0, 1), (0, 2), (1, 2)],
        )
        .unwrap();
        assert_relative_eq!(
            algebraic_connectivity(&g, false).unwrap(),
            3.0,
            epsilon = 1e-12
        );
    }

    #[test]
    fn disconnected_components_give_zero() {
        let g = Graph::from_parts(4, vec![VertexKind::Node; 4], vec![(0, 1), (2, 3)]).unwrap();
        assert_eq!(algebraic_connectivity(&g, false).unwrap(), 0.0);
    }

    #[test]
    fn vacant_sites_are_excluded_when_restricted() {
        let dep = two_node_deployment(0.5);
        let g = build_disk_graph(&dep);
        // unrestricted: isolated site forces lambda2 = 0
        assert_eq!(algebraic_connectivity(&g, false).unwrap(), 0.0);
        // restricted to the two connected nodes: lambda2 of K2 is 2
        assert_relative_eq!(
            algebraic_connectivity(&g, true).unwrap(),
            2.0,
            epsilon = 1e-12
        );
    }

    #[test]
    fn too_few_active_vertices_rejected() {
        let g = Graph::from_parts(
            1,
            vec![VertexKind::Node, VertexKind::VacantSite],
            vec![],
        )
        .unwrap();
        assert!(matches!(
            algebraic_connectivity(&g, true),
            Err(Error::TooFewActiveVertices(1))
        ));
    }

    #[test]
    fn deployment_text_round_trip() {
        let dep = Deployment::new(
            vec![Point::new(0.25, 1.0 / 3.0), Point::new(5.5, 2.125)],
            vec![Point::new(3.0, 3.0), Point::new(0.1, 5.9)],
            2.0,
            (6.0, 6.0),
        )
        .unwrap();
        let back = Deployment::from_text(&dep.to_text()).unwrap();
        assert_eq!(back.num_nodes(), 2);
        assert_eq!(back.num_sites(), 2);
        for (a, b) in dep.nodes().iter().zip(back.nodes()) {
            assert!((a.x - b.x).abs() < 1e-9 && (a.y - b.y).abs() < 1e-9);
        }
        for (a, b) in dep.sites().iter().zip(back.sites()) {
            assert!((a.x - b.x).abs() < 1e-9 && (a.y - b.y).abs() < 1e-9);
        }
    }

    #[test]
    fn invalid_deployments_are_rejected() {
        let site = vec![Point::new(1.0, 1.0)];
        assert!(Deployment::new(vec![Point::new(0.0, 0.0)], site.clone(), 2.0, (6.0, 6.0)).is_err());
        assert!(Deployment::new(
            vec![Point::new(0.0, 0.0), Point::new(1.0, 1.0)],
            vec![],
            2.0,
            (6.0, 6.0)
        )
        .is_err());
        assert!(Deployment::new(
            vec![Point::new(0.0, 0.0), Point::new(7.0, 1.0)],
            site,
            2.0,
            (6.0, 6.0)
        )
        .is_err());
    }

    #[test]
    fn site_grid_spans_area() {
        let sites = square_site_grid(16, (6.0, 6.0)).unwrap();
        assert_eq!(sites.len(), 16);
        assert_eq!(sites[0], Point::new(0.0, 0.0));
        assert_eq!(sites[3], Point::new(6.0, 0.0));
        assert_eq!(sites[15], Point::new(6.0, 6.0));
        assert!(square_site_grid(15, (6.0, 6.0)).is_err());
    }
}
