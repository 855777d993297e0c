//! Undirected weighted graphs, edge-list and OFF ingestion, ego networks.

use std::collections::{HashSet, VecDeque};
use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::util::{fmt_f64, sha256_u64};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub weight: f64,
}

/// Simple undirected graph with non-negative edge weights.
///
/// Edges are stored canonically (`u < v`) and sorted lexicographically, so two
/// graphs built from the same edge set compare equal regardless of input order.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedGraph {
    n_vertices: usize,
    edges: Vec<Edge>,
    adjacency: Vec<Vec<usize>>,
    labels: Option<Vec<String>>,
}

impl WeightedGraph {
    /// Builds a graph from `(u, v, weight)` triples. Errors name the 1-based
    /// position of the offending triple.
    pub fn new<I>(n_vertices: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, f64)>,
    {
        let mut seen = HashSet::new();
        let mut canon = Vec::new();
        for (i, (a, b, w)) in edges.into_iter().enumerate() {
            let line = i + 1;
            canon.push(check_edge(line, a, b, w, n_vertices, &mut seen)?);
        }
        Ok(Self::from_canonical(n_vertices, canon))
    }

    fn from_canonical(n_vertices: usize, mut edges: Vec<Edge>) -> Self {
        edges.sort_by_key(|e| (e.u, e.v));
        let mut adjacency = vec![Vec::new(); n_vertices];
        for e in &edges {
            adjacency[e.u].push(e.v);
            adjacency[e.v].push(e.u);
        }
        for nbrs in &mut adjacency {
            nbrs.sort_unstable();
        }
        WeightedGraph {
            n_vertices,
            edges,
            adjacency,
            labels: None,
        }
    }

    /// Graph with `n` vertices and no edges.
    pub fn empty(n: usize) -> Self {
        Self::from_canonical(n, Vec::new())
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.n_vertices {
            return Err(Error::Config(format!(
                "{} labels for {} vertices",
                labels.len(),
                self.n_vertices
            )));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn n_vertices(&self) -> usize {
        self.n_vertices
    }

    pub fn n_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    /// Sorted neighbor list of `v`.
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n_vertices && self.adjacency[u].binary_search(&v).is_ok()
    }

    pub fn check_vertex(&self, v: usize) -> Result<()> {
        if v < self.n_vertices {
            Ok(())
        } else {
            Err(Error::VertexOutOfRange {
                v,
                n: self.n_vertices,
            })
        }
    }

    /// Structural hash binding scalar fields to the graph they were computed on.
    pub fn fingerprint(&self) -> u64 {
        let mut bytes = Vec::with_capacity(8 + self.edges.len() * 24);
        bytes.extend_from_slice(&(self.n_vertices as u64).to_le_bytes());
        for e in &self.edges {
            bytes.extend_from_slice(&(e.u as u64).to_le_bytes());
            bytes.extend_from_slice(&(e.v as u64).to_le_bytes());
            bytes.extend_from_slice(&e.weight.to_bits().to_le_bytes());
        }
        sha256_u64(&bytes)
    }

    /// The canonical edge-list text: a `#n` header followed by `u v w` lines.
    pub fn to_edge_list_string(&self) -> String {
        let mut out = format!("#n {}\n", self.n_vertices);
        for e in &self.edges {
            let _ = writeln!(out, "{} {} {}", e.u, e.v, fmt_f64(e.weight));
        }
        out
    }

    /// k-hop ego network of `center`, hops counted on the unweighted graph.
    ///
    /// Returns the induced subgraph together with the table mapping each new
    /// vertex id to its original id. New ids preserve the original relative
    /// order, so id-based tie-breaking behaves the same on the subgraph.
    pub fn ego_network(&self, center: usize, hops: usize) -> Result<(WeightedGraph, Vec<usize>)> {
        self.check_vertex(center)?;
        let mut depth = vec![usize::MAX; self.n_vertices];
        depth[center] = 0;
        let mut queue = VecDeque::from([center]);
        while let Some(v) = queue.pop_front() {
            if depth[v] == hops {
                continue;
            }
            for &x in &self.adjacency[v] {
                if depth[x] == usize::MAX {
                    depth[x] = depth[v] + 1;
                    queue.push_back(x);
                }
            }
        }
        let remap: Vec<usize> = (0..self.n_vertices)
            .filter(|&v| depth[v] != usize::MAX)
            .collect();
        let mut new_id = vec![usize::MAX; self.n_vertices];
        for (i, &v) in remap.iter().enumerate() {
            new_id[v] = i;
        }
        let edges = self
            .edges
            .iter()
            .filter(|e| new_id[e.u] != usize::MAX && new_id[e.v] != usize::MAX)
            .map(|e| Edge {
                u: new_id[e.u],
                v: new_id[e.v],
                weight: e.weight,
            })
            .collect();
        let mut sub = Self::from_canonical(remap.len(), edges);
        if let Some(labels) = &self.labels {
            sub.labels = Some(remap.iter().map(|&v| labels[v].clone()).collect());
        }
        Ok((sub, remap))
    }

    /// Connected components, each sorted, ordered by their smallest vertex.
    pub fn connected_components(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.n_vertices];
        let mut parts = Vec::new();
        for start in 0..self.n_vertices {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            let mut part = vec![start];
            let mut stack = vec![start];
            while let Some(v) = stack.pop() {
                for &x in &self.adjacency[v] {
                    if !seen[x] {
                        seen[x] = true;
                        part.push(x);
                        stack.push(x);
                    }
                }
            }
            part.sort_unstable();
            parts.push(part);
        }
        parts
    }
}

fn check_edge(
    line: usize,
    a: usize,
    b: usize,
    w: f64,
    n: usize,
    seen: &mut HashSet<(usize, usize)>,
) -> Result<Edge> {
    if a == b {
        return Err(Error::SelfLoop { line, v: a });
    }
    for v in [a, b] {
        if v >= n {
            return Err(Error::VertexOutOfRange { v, n });
        }
    }
    if !w.is_finite() {
        return Err(Error::Parse {
            line,
            msg: format!("non-finite weight {}", w),
        });
    }
    if w < 0.0 {
        return Err(Error::NegativeWeight { line, u: a, v: b, w });
    }
    let (u, v) = if a < b { (a, b) } else { (b, a) };
    if !seen.insert((u, v)) {
        return Err(Error::DuplicateEdge { line, u, v });
    }
    Ok(Edge { u, v, weight: w })
}

/// Parses whitespace-separated `u v [w]` lines. `#` starts a comment line;
/// `#n <N>` fixes the vertex count.
pub fn parse_edge_list(text: &str) -> Result<WeightedGraph> {
    let mut header_n: Option<usize> = None;
    let mut raw: Vec<(usize, usize, usize, f64)> = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line
            .strip_prefix("#n")
            .filter(|r| r.starts_with(char::is_whitespace))
        {
            let n = rest.trim().parse::<usize>().map_err(|_| Error::Parse {
                line: lineno,
                msg: "malformed `#n <N>` header".into(),
            })?;
            header_n = Some(n);
            continue;
        }
        if line.starts_with('#') {
            continue;
        }
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks.len() < 2 || toks.len() > 3 {
            return Err(Error::Parse {
                line: lineno,
                msg: format!("expected `u v [w]`, found {} fields", toks.len()),
            });
        }
        let id = |t: &str| {
            t.parse::<usize>().map_err(|_| Error::Parse {
                line: lineno,
                msg: format!("bad vertex id `{}`", t),
            })
        };
        let u = id(toks[0])?;
        let v = id(toks[1])?;
        let w = match toks.get(2) {
            Some(t) => t.parse::<f64>().map_err(|_| Error::Parse {
                line: lineno,
                msg: format!("bad weight `{}`", t),
            })?,
            None => 1.0,
        };
        raw.push((lineno, u, v, w));
    }
    let implied = raw.iter().map(|r| r.1.max(r.2) + 1).max().unwrap_or(0);
    let n = header_n.unwrap_or(implied);
    let mut seen = HashSet::new();
    let edges = raw
        .into_iter()
        .map(|(line, u, v, w)| check_edge(line, u, v, w, n, &mut seen))
        .collect::<Result<Vec<_>>>()?;
    Ok(WeightedGraph::from_canonical(n, edges))
}

pub fn load_edge_list(path: impl AsRef<Path>) -> Result<WeightedGraph> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_edge_list(&text)
}

/// Triangle mesh as read from an OFF file.
#[derive(Debug, Clone, PartialEq)]
pub struct MeshSpec {
    pub vertex_positions: Vec<[f64; 3]>,
    pub triangles: Vec<[usize; 3]>,
}

impl MeshSpec {
    pub fn parse_off(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty());

        let (lineno, first) = lines.next().ok_or(Error::Parse {
            line: 1,
            msg: "empty OFF file".into(),
        })?;
        let mut toks = first.split_whitespace();
        if toks.next() != Some("OFF") {
            return Err(Error::Parse {
                line: lineno,
                msg: "missing `OFF` header".into(),
            });
        }
        // counts may share the OFF line or follow on their own line
        let mut counts: Vec<&str> = toks.collect();
        let mut count_line = lineno;
        if counts.is_empty() {
            let (l, c) = lines.next().ok_or(Error::Parse {
                line: lineno,
                msg: "missing `nV nF nE` counts".into(),
            })?;
            count_line = l;
            counts = c.split_whitespace().collect();
        }
        let bad_counts = || Error::Parse {
            line: count_line,
            msg: "unparsable `nV nF nE` header".into(),
        };
        if counts.len() < 2 || counts.len() > 3 {
            return Err(bad_counts());
        }
        let nv: usize = counts[0].parse().map_err(|_| bad_counts())?;
        let nf: usize = counts[1].parse().map_err(|_| bad_counts())?;

        let mut vertex_positions = Vec::with_capacity(nv);
        for _ in 0..nv {
            let (l, s) = lines.next().ok_or(Error::Parse {
                line: count_line,
                msg: format!("expected {} vertex lines", nv),
            })?;
            let coords: Vec<f64> = s
                .split_whitespace()
                .map(|t| t.parse::<f64>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|_| Error::Parse {
                    line: l,
                    msg: "bad vertex coordinate".into(),
                })?;
            if coords.len() != 3 || coords.iter().any(|c| !c.is_finite()) {
                return Err(Error::Parse {
                    line: l,
                    msg: "expected three finite coordinates".into(),
                });
            }
            vertex_positions.push([coords[0], coords[1], coords[2]]);
        }

        let mut triangles = Vec::with_capacity(nf);
        for face in 0..nf {
            let (l, s) = lines.next().ok_or(Error::Parse {
                line: count_line,
                msg: format!("expected {} face lines", nf),
            })?;
            let toks: Vec<usize> = s
                .split_whitespace()
                .map(|t| t.parse::<usize>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|_| Error::Parse {
                    line: l,
                    msg: "bad face index".into(),
                })?;
            let sides = *toks.first().ok_or(Error::Parse {
                line: l,
                msg: "empty face line".into(),
            })?;
            if sides != 3 {
                return Err(Error::NonTriangleFace { face, sides });
            }
            if toks.len() < 4 {
                return Err(Error::Parse {
                    line: l,
                    msg: "face lists fewer than 3 indices".into(),
                });
            }
            let tri = [toks[1], toks[2], toks[3]];
            for &v in &tri {
                if v >= nv {
                    return Err(Error::VertexOutOfRange { v, n: nv });
                }
            }
            if tri[0] == tri[1] || tri[1] == tri[2] || tri[0] == tri[2] {
                return Err(Error::DegenerateFace { face });
            }
            triangles.push(tri);
        }
        Ok(MeshSpec {
            vertex_positions,
            triangles,
        })
    }

    /// 1-skeleton of the mesh, each edge weighted by the Euclidean length.
    pub fn to_graph(&self) -> WeightedGraph {
        let mut pairs: Vec<(usize, usize)> = self
            .triangles
            .iter()
            .flat_map(|t| [(t[0], t[1]), (t[1], t[2]), (t[0], t[2])])
            .map(|(a, b)| if a < b { (a, b) } else { (b, a) })
            .collect();
        pairs.sort_unstable();
        pairs.dedup();
        let edges = pairs
            .into_iter()
            .map(|(u, v)| Edge {
                u,
                v,
                weight: euclidean(&self.vertex_positions[u], &self.vertex_positions[v]),
            })
            .collect();
        WeightedGraph::from_canonical(self.vertex_positions.len(), edges)
    }
}

fn euclidean(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

pub fn parse_off_mesh(text: &str) -> Result<WeightedGraph> {
    Ok(MeshSpec::parse_off(text)?.to_graph())
}

pub fn load_off_mesh(path: impl AsRef<Path>) -> Result<WeightedGraph> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_off_mesh(&text)
}

/// Loads `.off` files as meshes and anything else as an edge list.
pub fn load_graph(path: impl AsRef<Path>) -> Result<WeightedGraph> {
    let path = path.as_ref();
    let is_off = path
        .extension()
        .map(|e| e.eq_ignore_ascii_case("off"))
        .unwrap_or(false);
    if is_off {
        load_off_mesh(path)
    } else {
        load_edge_list(path)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path_graph(n: usize) -> WeightedGraph {
        WeightedGraph::new(n, (1..n).map(|i| (i - 1, i, 1.0))).unwrap()
    }

    fn complete(n: usize) -> WeightedGraph {
        let mut e = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                e.push((i, j, 1.0));
            }
        }
        WeightedGraph::new(n, e).unwrap()
    }

    #[test]
    fn edge_list_default_weights() {
        let g = parse_edge_list("0 1\n1 2").unwrap();
        assert_eq!(g.n_vertices(), 3);
        assert_eq!(g.n_edges(), 2);
        assert!(g.edges().iter().all(|e| e.weight == 1.0));
    }

    #[test]
    fn edge_list_duplicate_is_error() {
        let err = parse_edge_list("0 1 0.5\n0 1 0.7").unwrap_err();
        assert!(matches!(err, Error::DuplicateEdge { line: 2, u: 0, v: 1 }));
        // reversed orientation is the same unordered pair
        assert!(matches!(
            parse_edge_list("0 1\n1 0").unwrap_err(),
            Error::DuplicateEdge { .. }
        ));
    }

    #[test]
    fn edge_list_header_override() {
        let g = parse_edge_list("#n 5\n0 1").unwrap();
        assert_eq!(g.n_vertices(), 5);
        assert_eq!(g.n_edges(), 1);
        assert_eq!(g.degree(4), 0);
    }

    #[test]
    fn edge_list_errors() {
        assert!(matches!(
            parse_edge_list("0 1\n2 2").unwrap_err(),
            Error::SelfLoop { line: 2, v: 2 }
        ));
        assert!(matches!(
            parse_edge_list("0 1 -1").unwrap_err(),
            Error::NegativeWeight { line: 1, .. }
        ));
        assert!(matches!(
            parse_edge_list("# comment\n0 x").unwrap_err(),
            Error::Parse { line: 2, .. }
        ));
        assert!(matches!(
            parse_edge_list("0 1 2 3").unwrap_err(),
            Error::Parse { line: 1, .. }
        ));
        assert!(matches!(
            parse_edge_list("#n 2\n0 5").unwrap_err(),
            Error::VertexOutOfRange { v: 5, n: 2 }
        ));
    }

    #[test]
    fn edge_list_canonical_round_trip() {
        let g = parse_edge_list("#n 6\n3 1 0.25\n0 2\n# c\n4 0 2.5").unwrap();
        let again = parse_edge_list(&g.to_edge_list_string()).unwrap();
        assert_eq!(g, again);
        assert_eq!(g.fingerprint(), again.fingerprint());
    }

    const RIGHT_TRIANGLE: &str = "OFF\n3 1 0\n0 0 0\n1 0 0\n0 1 0\n3 0 1 2\n";

    #[test]
    fn off_right_triangle_weights() {
        let g = parse_off_mesh(RIGHT_TRIANGLE).unwrap();
        assert_eq!(g.n_edges(), 3);
        let mut w: Vec<f64> = g.edges().iter().map(|e| e.weight).collect();
        w.sort_by(f64::total_cmp);
        assert_eq!(w[0], 1.0);
        assert_eq!(w[1], 1.0);
        assert!((w[2] - 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn off_shared_edge_once() {
        let text = "OFF\n4 2 5\n0 0 0\n1 0 0\n0 1 0\n1 1 0\n3 0 1 2\n3 1 3 2\n";
        let g = parse_off_mesh(text).unwrap();
        assert_eq!(g.n_edges(), 5);
    }

    #[test]
    fn off_errors() {
        let quad = "OFF\n4 1 0\n0 0 0\n1 0 0\n0 1 0\n1 1 0\n4 0 1 3 2\n";
        assert!(matches!(
            parse_off_mesh(quad).unwrap_err(),
            Error::NonTriangleFace { face: 0, sides: 4 }
        ));
        let oob = "OFF\n3 1 0\n0 0 0\n1 0 0\n0 1 0\n3 0 1 7\n";
        assert!(matches!(
            parse_off_mesh(oob).unwrap_err(),
            Error::VertexOutOfRange { v: 7, n: 3 }
        ));
        assert!(matches!(
            parse_off_mesh("OFF\nthree 1 0\n").unwrap_err(),
            Error::Parse { line: 2, .. }
        ));
        assert!(parse_off_mesh("PLY\n").is_err());
    }

    #[test]
    fn off_counts_on_header_line_and_comments() {
        let text = "# mesh\nOFF 3 1 0\n0 0 0 # origin\n1 0 0\n0 1 0\n3 0 1 2\n";
        assert_eq!(parse_off_mesh(text).unwrap().n_edges(), 3);
    }

    #[test]
    fn ego_network_examples() {
        let k4 = complete(4);
        let (sub, remap) = k4.ego_network(0, 1).unwrap();
        assert_eq!(sub, k4);
        assert_eq!(remap, vec![0, 1, 2, 3]);

        let p5 = path_graph(5);
        let (sub, remap) = p5.ego_network(0, 2).unwrap();
        assert_eq!(sub.n_vertices(), 3);
        assert_eq!(sub.n_edges(), 2);
        assert_eq!(remap, vec![0, 1, 2]);

        let (sub, remap) = p5.ego_network(3, 0).unwrap();
        assert_eq!(sub.n_vertices(), 1);
        assert_eq!(sub.n_edges(), 0);
        assert_eq!(remap, vec![3]);

        assert!(p5.ego_network(9, 1).is_err());
    }

    #[test]
    fn ego_network_remaps_ids_in_order() {
        let p5 = path_graph(5);
        let (sub, remap) = p5.ego_network(3, 1).unwrap();
        assert_eq!(remap, vec![2, 3, 4]);
        assert!(sub.has_edge(0, 1) && sub.has_edge(1, 2));
    }

    #[test]
    fn components_examples() {
        assert_eq!(path_graph(4).connected_components().len(), 1);
        assert_eq!(
            WeightedGraph::empty(2).connected_components(),
            vec![vec![0], vec![1]]
        );
        let two_tri = WeightedGraph::new(
            6,
            [(0, 1, 1.0), (1, 2, 1.0), (0, 2, 1.0), (3, 4, 1.0), (4, 5, 1.0), (3, 5, 1.0)],
        )
        .unwrap();
        assert_eq!(
            two_tri.connected_components(),
            vec![vec![0, 1, 2], vec![3, 4, 5]]
        );
    }
}
