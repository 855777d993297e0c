//! Lower-star filtration of a graph under a vertex function.

use std::cmp::Ordering;
use std::fmt::Write as _;

use crate::encoders::ScalarField;
use crate::error::Result;
use crate::graph::WeightedGraph;
use crate::util::fmt_f64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Simplex {
    Vertex(usize),
    /// Endpoints with `u < v`.
    Edge(usize, usize),
}

impl Simplex {
    fn rank(&self) -> (u8, usize, usize) {
        match *self {
            Simplex::Vertex(v) => (0, v, 0),
            Simplex::Edge(u, v) => (1, u, v),
        }
    }
}

/// Simplices of a graph in lower-star entry order.
///
/// A vertex enters at its function value and an edge at the larger of its
/// endpoint values. Equal times are ordered vertices first, then by id
/// (edges lexicographically by endpoints), which refines the sub-level set
/// filtration into a total order.
#[derive(Debug, Clone, PartialEq)]
pub struct LowerStarFiltration {
    vertex_order: Vec<usize>,
    vertex_time: Vec<f64>,
    edge_time: Vec<f64>,
    sequence: Vec<(Simplex, f64)>,
}

impl LowerStarFiltration {
    pub fn vertex_order(&self) -> &[usize] {
        &self.vertex_order
    }

    pub fn vertex_time(&self) -> &[f64] {
        &self.vertex_time
    }

    /// Entry time of each edge, aligned with `WeightedGraph::edges`.
    pub fn edge_time(&self) -> &[f64] {
        &self.edge_time
    }

    pub fn simplex_sequence(&self) -> &[(Simplex, f64)] {
        &self.sequence
    }

    pub fn n_vertices(&self) -> usize {
        self.vertex_time.len()
    }

    /// Largest vertex value, `None` for the empty graph.
    pub fn max_value(&self) -> Option<f64> {
        self.vertex_order.last().map(|&v| self.vertex_time[v])
    }

    /// One line per simplex: `V i t` or `E i j t`.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for (s, t) in &self.sequence {
            let _ = match s {
                Simplex::Vertex(v) => writeln!(out, "V {} {}", v, fmt_f64(*t)),
                Simplex::Edge(u, v) => writeln!(out, "E {} {} {}", u, v, fmt_f64(*t)),
            };
        }
        out
    }
}

fn entry_order(a: &(Simplex, f64), b: &(Simplex, f64)) -> Ordering {
    a.1.total_cmp(&b.1).then_with(|| a.0.rank().cmp(&b.0.rank()))
}

pub fn lower_star(g: &WeightedGraph, f: &ScalarField) -> Result<LowerStarFiltration> {
    f.check_binds(g)?;
    let vertex_time = f.values().to_vec();
    let edge_time: Vec<f64> = g
        .edges()
        .iter()
        .map(|e| vertex_time[e.u].max(vertex_time[e.v]))
        .collect();

    let mut vertex_order: Vec<usize> = (0..g.n_vertices()).collect();
    vertex_order.sort_by(|&a, &b| vertex_time[a].total_cmp(&vertex_time[b]).then(a.cmp(&b)));

    let mut sequence: Vec<(Simplex, f64)> = vertex_order
        .iter()
        .map(|&v| (Simplex::Vertex(v), vertex_time[v]))
        .chain(
            g.edges()
                .iter()
                .zip(&edge_time)
                .map(|(e, &t)| (Simplex::Edge(e.u, e.v), t)),
        )
        .collect();
    sequence.sort_by(entry_order);

    Ok(LowerStarFiltration {
        vertex_order,
        vertex_time,
        edge_time,
        sequence,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn path3() -> WeightedGraph {
        WeightedGraph::new(3, [(0, 1, 1.0), (1, 2, 1.0)]).unwrap()
    }

    #[test]
    fn path_example_order() {
        let g = path3();
        let f = ScalarField::new(&g, vec![0.0, 2.0, 1.0]).unwrap();
        let filt = lower_star(&g, &f).unwrap();
        assert_eq!(
            filt.simplex_sequence(),
            &[
                (Simplex::Vertex(0), 0.0),
                (Simplex::Vertex(2), 1.0),
                (Simplex::Vertex(1), 2.0),
                (Simplex::Edge(0, 1), 2.0),
                (Simplex::Edge(1, 2), 2.0),
            ]
        );
        assert_eq!(filt.vertex_order(), &[0, 2, 1]);
        assert_eq!(filt.edge_time(), &[2.0, 2.0]);
        assert_eq!(
            filt.dump().lines().next().unwrap(),
            "V 0 0.0000000000000000e0"
        );
    }

    #[test]
    fn single_vertex() {
        let g = WeightedGraph::empty(1);
        let f = ScalarField::new(&g, vec![3.5]).unwrap();
        let filt = lower_star(&g, &f).unwrap();
        assert_eq!(filt.simplex_sequence(), &[(Simplex::Vertex(0), 3.5)]);
        assert_eq!(filt.max_value(), Some(3.5));
    }

    #[test]
    fn constant_field_ties_by_id() {
        let g = WeightedGraph::new(4, [(2, 3, 1.0), (0, 1, 1.0), (1, 2, 1.0)]).unwrap();
        let f = ScalarField::new(&g, vec![1.0; 4]).unwrap();
        let seq: Vec<Simplex> = lower_star(&g, &f)
            .unwrap()
            .simplex_sequence()
            .iter()
            .map(|s| s.0)
            .collect();
        assert_eq!(
            seq,
            vec![
                Simplex::Vertex(0),
                Simplex::Vertex(1),
                Simplex::Vertex(2),
                Simplex::Vertex(3),
                Simplex::Edge(0, 1),
                Simplex::Edge(1, 2),
                Simplex::Edge(2, 3),
            ]
        );
    }

    #[test]
    fn fingerprint_mismatch() {
        let g = path3();
        let other = WeightedGraph::new(3, [(0, 1, 1.0)]).unwrap();
        let f = ScalarField::new(&other, vec![0.0, 1.0, 2.0]).unwrap();
        assert!(lower_star(&g, &f).is_err());
    }

    fn graph_and_field() -> impl Strategy<Value = (WeightedGraph, Vec<f64>)> {
        (1usize..10).prop_flat_map(|n| {
            let pairs: Vec<(usize, usize)> =
                (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
            let m = pairs.len();
            (
                proptest::collection::vec(any::<bool>(), m),
                proptest::collection::vec(-4i32..4, n),
            )
                .prop_map(move |(mask, vals)| {
                    let edges = pairs
                        .iter()
                        .zip(&mask)
                        .filter(|(_, &keep)| keep)
                        .map(|(&(u, v), _)| (u, v, 1.0));
                    let g = WeightedGraph::new(n, edges).unwrap();
                    (g, vals.into_iter().map(|x| x as f64 * 0.5).collect())
                })
        })
    }

    proptest! {
        #[test]
        fn prefixes_are_subgraphs((g, vals) in graph_and_field()) {
            let f = ScalarField::new(&g, vals).unwrap();
            let filt = lower_star(&g, &f).unwrap();
            let seq = filt.simplex_sequence();
            prop_assert_eq!(seq.len(), g.n_vertices() + g.n_edges());
            let mut present = vec![false; g.n_vertices()];
            for w in seq.windows(2) {
                prop_assert!(w[0].1 <= w[1].1);
            }
            for (s, t) in seq {
                match *s {
                    Simplex::Vertex(v) => {
                        prop_assert_eq!(*t, f.values()[v]);
                        present[v] = true;
                    }
                    Simplex::Edge(u, v) => {
                        prop_assert!(present[u] && present[v]);
                        prop_assert_eq!(*t, f.values()[u].max(f.values()[v]));
                    }
                }
            }
        }

        #[test]
        fn shift_and_monotone_reparam((g, vals) in graph_and_field(), c in -10.0f64..10.0) {
            let f = ScalarField::new(&g, vals.clone()).unwrap();
            let base = lower_star(&g, &f).unwrap();
            let shifted = ScalarField::new(&g, vals.iter().map(|x| x + c).collect()).unwrap();
            let shifted = lower_star(&g, &shifted).unwrap();
            let cubed = ScalarField::new(&g, vals.iter().map(|x| x * x * x + 2.0 * x).collect()).unwrap();
            let cubed = lower_star(&g, &cubed).unwrap();
            for ((a, b), c2) in base.simplex_sequence().iter()
                .zip(shifted.simplex_sequence())
                .zip(cubed.simplex_sequence())
            {
                prop_assert_eq!(a.0, b.0);
                prop_assert_eq!(a.0, c2.0);
                prop_assert!((b.1 - (a.1 + c)).abs() < 1e-12);
            }
        }
    }
}
