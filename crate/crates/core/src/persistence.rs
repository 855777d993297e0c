//! Zero-dimensional persistence of lower-star filtrations.

use std::collections::BTreeSet;
use std::str::FromStr;

use serde::Deserialize;

use crate::encoders::ScalarField;
use crate::error::{Error, Result};
use crate::filtration::{LowerStarFiltration, Simplex};
use crate::graph::WeightedGraph;
use crate::util::fmt_f64;

/// Largest graph the brute-force oracle accepts.
pub const BRUTE_FORCE_LIMIT: usize = 1000;

/// Finite `(birth, death)` pairs plus births of classes that never die.
#[derive(Debug, Clone, PartialEq)]
pub struct PersistenceDiagram {
    pub finite: Vec<(f64, f64)>,
    pub essential: Vec<f64>,
    /// Maximum field value of the filtration, used to cap essential classes.
    pub f_max: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FinitizePolicy {
    CapAtFmax,
    DropEssential,
}

impl FromStr for FinitizePolicy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "cap" | "cap_at_fmax" => Ok(FinitizePolicy::CapAtFmax),
            "drop" | "drop_essential" => Ok(FinitizePolicy::DropEssential),
            other => Err(Error::Config(format!("unknown finitize policy `{}`", other))),
        }
    }
}

#[derive(Deserialize)]
struct DiagramJson {
    finite: Vec<[f64; 2]>,
    essential: Vec<f64>,
    f_max: f64,
}

impl PersistenceDiagram {
    pub fn empty() -> Self {
        PersistenceDiagram {
            finite: Vec::new(),
            essential: Vec::new(),
            f_max: 0.0,
        }
    }

    pub fn from_pairs(pairs: Vec<(f64, f64)>) -> Self {
        let f_max = pairs.iter().map(|p| p.1).fold(0.0, f64::max);
        PersistenceDiagram {
            finite: pairs,
            essential: Vec::new(),
            f_max,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.essential.is_empty()
    }

    /// Finite plus essential classes.
    pub fn len(&self) -> usize {
        self.finite.len() + self.essential.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Number of pairs born and killed at the same value. These come from
    /// tie-broken merges and are kept unless explicitly dropped.
    pub fn zero_length_count(&self) -> usize {
        self.finite.iter().filter(|(b, d)| b == d).count()
    }

    pub fn without_zero_length(&self) -> PersistenceDiagram {
        PersistenceDiagram {
            finite: self.finite.iter().copied().filter(|(b, d)| b != d).collect(),
            ..self.clone()
        }
    }

    pub fn finitize(&self, policy: FinitizePolicy) -> PersistenceDiagram {
        let mut finite = self.finite.clone();
        if policy == FinitizePolicy::CapAtFmax {
            finite.extend(self.essential.iter().map(|&b| (b, self.f_max.max(b))));
        }
        PersistenceDiagram {
            finite,
            essential: Vec::new(),
            f_max: self.f_max,
        }
    }

    /// Sorted copy, for multiset comparison.
    pub fn canonical(&self) -> PersistenceDiagram {
        let mut finite = self.finite.clone();
        finite.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
        let mut essential = self.essential.clone();
        essential.sort_by(f64::total_cmp);
        PersistenceDiagram {
            finite,
            essential,
            f_max: self.f_max,
        }
    }

    /// Multiset equality of finite pairs and essential births.
    pub fn same_multiset(&self, other: &PersistenceDiagram) -> bool {
        let a = self.canonical();
        let b = other.canonical();
        a.finite == b.finite && a.essential == b.essential
    }

    pub fn to_json(&self) -> String {
        let finite: Vec<String> = self
            .finite
            .iter()
            .map(|(b, d)| format!("[{},{}]", fmt_f64(*b), fmt_f64(*d)))
            .collect();
        let essential: Vec<String> = self.essential.iter().map(|b| fmt_f64(*b)).collect();
        format!(
            "{{\"finite\": [{}], \"essential\": [{}], \"f_max\": {}}}",
            finite.join(","),
            essential.join(","),
            fmt_f64(self.f_max)
        )
    }

    pub fn from_json(text: &str) -> Result<PersistenceDiagram> {
        let raw: DiagramJson = serde_json::from_str(text)?;
        Self::from_raw(raw)
    }

    pub fn from_json_value(value: serde_json::Value) -> Result<PersistenceDiagram> {
        Self::from_raw(serde_json::from_value(value)?)
    }

    fn from_raw(raw: DiagramJson) -> Result<PersistenceDiagram> {
        for (i, [b, d]) in raw.finite.iter().enumerate() {
            if d < b {
                return Err(Error::Config(format!(
                    "diagram pair {} has death {} before birth {}",
                    i, d, b
                )));
            }
        }
        Ok(PersistenceDiagram {
            finite: raw.finite.into_iter().map(|[b, d]| (b, d)).collect(),
            essential: raw.essential,
            f_max: raw.f_max,
        })
    }
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }
}

/// Union-find sweep with the elder rule: at a merge the component whose
/// creator entered later dies at the edge's time. Creators are compared by
/// `(value, vertex id)`, the same order the filtration uses.
pub fn zero_persistence(filt: &LowerStarFiltration) -> PersistenceDiagram {
    let n = filt.n_vertices();
    let time = filt.vertex_time();
    let mut uf = UnionFind::new(n);
    // the older root always survives, so every root is its component's creator
    let mut finite = Vec::new();
    let later = |a: usize, b: usize| time[a].total_cmp(&time[b]).then(a.cmp(&b)).is_gt();

    for &(simplex, t) in filt.simplex_sequence() {
        if let Simplex::Edge(u, v) = simplex {
            let (ru, rv) = (uf.find(u), uf.find(v));
            if ru == rv {
                continue;
            }
            let (young, old) = if later(ru, rv) {
                (ru, rv)
            } else {
                (rv, ru)
            };
            finite.push((time[young], t));
            uf.parent[young] = old;
        }
    }

    let mut essential = Vec::new();
    for &v in filt.vertex_order() {
        if uf.find(v) == v {
            essential.push(time[v]);
        }
    }
    PersistenceDiagram {
        finite,
        essential,
        f_max: filt.max_value().unwrap_or(0.0),
    }
}

/// Recomputes the sub-level set components from scratch at every distinct
/// value and reads births and deaths off consecutive snapshots. Each
/// component is named by its oldest vertex in `(value, id)` order.
pub fn brute_force_zero_persistence(g: &WeightedGraph, f: &ScalarField) -> Result<PersistenceDiagram> {
    f.check_binds(g)?;
    let n = g.n_vertices();
    if n > BRUTE_FORCE_LIMIT {
        return Err(Error::ScaleExceeded {
            n,
            limit: BRUTE_FORCE_LIMIT,
        });
    }
    let vals = f.values();
    let key = |v: usize| (vals[v], v);
    let older = |a: usize, b: usize| vals[a].total_cmp(&vals[b]).then(a.cmp(&b)).is_lt();

    let mut levels: Vec<f64> = vals.to_vec();
    levels.sort_by(f64::total_cmp);
    levels.dedup();

    let mut finite = Vec::new();
    let mut previous: BTreeSet<usize> = BTreeSet::new();
    for &t in &levels {
        let inside: Vec<bool> = (0..n).map(|v| vals[v] <= t).collect();
        let mut seen = vec![false; n];
        let mut names = BTreeSet::new();
        for s in 0..n {
            if !inside[s] || seen[s] {
                continue;
            }
            seen[s] = true;
            let mut oldest = s;
            let mut stack = vec![s];
            while let Some(v) = stack.pop() {
                if older(v, oldest) {
                    oldest = v;
                }
                for &x in g.neighbors(v) {
                    if inside[x] && !seen[x] {
                        seen[x] = true;
                        stack.push(x);
                    }
                }
            }
            names.insert(oldest);
        }
        for &gone in previous.difference(&names) {
            finite.push((key(gone).0, t));
        }
        // vertices born at t and absorbed at t
        for v in 0..n {
            if vals[v] == t && !names.contains(&v) {
                finite.push((t, t));
            }
        }
        previous = names;
    }
    let mut essential: Vec<f64> = previous.iter().map(|&v| vals[v]).collect();
    essential.sort_by(f64::total_cmp);
    Ok(PersistenceDiagram {
        finite,
        essential,
        f_max: levels.last().copied().unwrap_or(0.0),
    })
}
