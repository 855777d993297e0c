//! Wasserstein and bottleneck distances between finite persistence diagrams.

use std::fmt::Write as _;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::persistence::PersistenceDiagram;
use crate::util::fmt_f64;

#[derive(Debug, Clone, PartialEq)]
pub struct Assignment {
    /// `perm[row] = column`.
    pub perm: Vec<usize>,
    pub total: f64,
}

fn check_square(cost: &[Vec<f64>]) -> Result<usize> {
    let n = cost.len();
    for (row, r) in cost.iter().enumerate() {
        if r.len() != n {
            return Err(Error::NonSquare {
                rows: n,
                row,
                cols: r.len(),
            });
        }
        if let Some(j) = r.iter().position(|x| !x.is_finite()) {
            return Err(Error::NonFinite { index: row * n + j });
        }
    }
    Ok(n)
}

/// Minimum-cost perfect assignment (Hungarian method with potentials, O(n³)).
pub fn assignment_solve(cost: &[Vec<f64>]) -> Result<Assignment> {
    let n = check_square(cost)?;
    if n == 0 {
        return Ok(Assignment {
            perm: Vec::new(),
            total: 0.0,
        });
    }
    // 1-based; column 0 is a virtual start
    let mut u = vec![0.0; n + 1];
    let mut v = vec![0.0; n + 1];
    let mut row_of = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];
    for i in 1..=n {
        row_of[0] = i;
        let mut j0 = 0;
        let mut minv = vec![f64::INFINITY; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = row_of[j0];
            let mut delta = f64::INFINITY;
            let mut j1 = 0;
            for j in 1..=n {
                if used[j] {
                    continue;
                }
                let cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
                if cur < minv[j] {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if minv[j] < delta {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for j in 0..=n {
                if used[j] {
                    u[row_of[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if row_of[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            row_of[j0] = row_of[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    let mut perm = vec![0; n];
    for j in 1..=n {
        perm[row_of[j] - 1] = j - 1;
    }
    let total = perm.iter().enumerate().map(|(i, &j)| cost[i][j]).sum();
    Ok(Assignment { perm, total })
}

fn require_finite(d: &PersistenceDiagram) -> Result<()> {
    if !d.is_finite() {
        return Err(Error::InfinitePoint {
            count: d.essential.len(),
        });
    }
    if let Some(i) = d
        .finite
        .iter()
        .position(|(b, dd)| !b.is_finite() || !dd.is_finite())
    {
        return Err(Error::NonFinite { index: i });
    }
    Ok(())
}

fn linf(a: (f64, f64), b: (f64, f64)) -> f64 {
    (a.0 - b.0).abs().max((a.1 - b.1).abs())
}

/// L∞ distance from a point to its diagonal projection.
fn to_diagonal(p: (f64, f64)) -> f64 {
    (p.1 - p.0).abs() / 2.0
}

/// L∞ ground costs of the diagonal-augmented problem: rows are the points of
/// `x` then one diagonal slot per point of `y`; columns the points of `y` then
/// one diagonal slot per point of `x`. Any point may go to any diagonal slot
/// at the cost of its own projection; slot-to-slot is free.
fn augmented_costs(x: &[(f64, f64)], y: &[(f64, f64)]) -> Vec<Vec<f64>> {
    let (n, m) = (x.len(), y.len());
    let size = n + m;
    let mut cost = vec![vec![0.0; size]; size];
    for (i, row) in cost.iter_mut().enumerate() {
        for (j, c) in row.iter_mut().enumerate() {
            *c = match (i < n, j < m) {
                (true, true) => linf(x[i], y[j]),
                (true, false) => to_diagonal(x[i]),
                (false, true) => to_diagonal(y[j]),
                (false, false) => 0.0,
            };
        }
    }
    cost
}

/// q-Wasserstein distance with L∞ ground metric.
pub fn wasserstein(x: &PersistenceDiagram, y: &PersistenceDiagram, q: f64) -> Result<f64> {
    if !(q >= 1.0) {
        return Err(Error::InvalidOrder(q));
    }
    require_finite(x)?;
    require_finite(y)?;
    if x.finite.is_empty() && y.finite.is_empty() {
        return Ok(0.0);
    }
    // fixed operand order makes the result bitwise symmetric and independent
    // of point order
    let (mut a, mut b) = (x.finite.clone(), y.finite.clone());
    let by_coords = |p: &(f64, f64), r: &(f64, f64)| p.0.total_cmp(&r.0).then(p.1.total_cmp(&r.1));
    a.sort_by(by_coords);
    b.sort_by(by_coords);
    let key = |pts: &[(f64, f64)]| -> Vec<(u64, u64)> { pts.iter().map(|p| (p.0.to_bits(), p.1.to_bits())).collect() };
    if (a.len(), key(&a)) > (b.len(), key(&b)) {
        std::mem::swap(&mut a, &mut b);
    }
    let mut cost = augmented_costs(&a, &b);
    for row in &mut cost {
        for c in row.iter_mut() {
            *c = c.powf(q);
        }
    }
    let total = assignment_solve(&cost)?.total;
    Ok(total.max(0.0).powf(1.0 / q))
}

/// Bottleneck distance: the smallest threshold admitting a perfect matching
/// of the augmented diagrams using only pairs at or below it.
pub fn bottleneck(x: &PersistenceDiagram, y: &PersistenceDiagram) -> Result<f64> {
    require_finite(x)?;
    require_finite(y)?;
    let cost = augmented_costs(&x.finite, &y.finite);
    let mut candidates: Vec<f64> = cost.iter().flatten().copied().collect();
    candidates.sort_by(f64::total_cmp);
    candidates.dedup();
    if candidates.is_empty() {
        return Ok(0.0);
    }
    let (mut lo, mut hi) = (0, candidates.len() - 1);
    while lo < hi {
        let mid = (lo + hi) / 2;
        if has_perfect_matching(&cost, candidates[mid]) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    Ok(candidates[lo])
}

/// Kuhn's augmenting-path matching restricted to entries `<= threshold`.
fn has_perfect_matching(cost: &[Vec<f64>], threshold: f64) -> bool {
    let n = cost.len();
    let mut match_col: Vec<Option<usize>> = vec![None; n];
    for row in 0..n {
        let mut visited = vec![false; n];
        if !augment(cost, threshold, row, &mut visited, &mut match_col) {
            return false;
        }
    }
    true
}

fn augment(
    cost: &[Vec<f64>],
    threshold: f64,
    row: usize,
    visited: &mut [bool],
    match_col: &mut [Option<usize>],
) -> bool {
    for col in 0..cost.len() {
        if cost[row][col] > threshold || visited[col] {
            continue;
        }
        visited[col] = true;
        let free = match match_col[col] {
            None => true,
            Some(other) => augment(cost, threshold, other, visited, match_col),
        };
        if free {
            match_col[col] = Some(row);
            return true;
        }
    }
    false
}

/// Symmetric matrix of pairwise diagram distances.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceMatrix {
    pub labels: Vec<String>,
    pub values: Vec<Vec<f64>>,
}

impl DistanceMatrix {
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// Checks squareness, symmetry (within 1e-12), zero diagonal and non-negativity.
    pub fn validate(&self) -> Result<()> {
        let n = self.labels.len();
        if self.values.len() != n {
            return Err(Error::NonSquare {
                rows: self.values.len(),
                row: 0,
                cols: n,
            });
        }
        check_square(&self.values)?;
        for i in 0..n {
            if self.values[i][i] != 0.0 {
                return Err(Error::Config(format!("non-zero diagonal at row {}", i)));
            }
            for j in 0..n {
                if self.values[i][j] < 0.0 {
                    return Err(Error::Config(format!("negative entry at ({}, {})", i, j)));
                }
                if (self.values[i][j] - self.values[j][i]).abs() > 1e-12 {
                    return Err(Error::NonSymmetric { i, j });
                }
            }
        }
        Ok(())
    }

    /// Header `label,<labels...>`, then one `label,values...` row per item.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("label");
        for l in &self.labels {
            out.push(',');
            out.push_str(l);
        }
        out.push('\n');
        for (l, row) in self.labels.iter().zip(&self.values) {
            out.push_str(l);
            for x in row {
                let _ = write!(out, ",{}", fmt_f64(*x));
            }
            out.push('\n');
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<DistanceMatrix> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let (_, header) = lines.next().ok_or(Error::Parse {
            line: 1,
            msg: "empty matrix file".into(),
        })?;
        let labels: Vec<String> = header.split(',').skip(1).map(|s| s.trim().to_string()).collect();
        let mut values = Vec::with_capacity(labels.len());
        for (idx, line) in lines {
            let mut cells = line.split(',');
            let label = cells.next().unwrap_or("").trim();
            if labels.get(values.len()).map(String::as_str) != Some(label) {
                return Err(Error::Parse {
                    line: idx + 1,
                    msg: format!("row label `{}` does not match header", label),
                });
            }
            let row = cells
                .map(|c| c.trim().parse::<f64>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|_| Error::Parse {
                    line: idx + 1,
                    msg: "bad matrix entry".into(),
                })?;
            values.push(row);
        }
        let m = DistanceMatrix { labels, values };
        m.validate()?;
        Ok(m)
    }
}

/// Pairwise W_q over labelled finite diagrams. Pairs are evaluated in
/// parallel; the result does not depend on scheduling.
pub fn distance_matrix(labels: &[String], diagrams: &[PersistenceDiagram], q: f64) -> Result<DistanceMatrix> {
    if labels.len() != diagrams.len() {
        return Err(Error::Config(format!(
            "{} labels for {} diagrams",
            labels.len(),
            diagrams.len()
        )));
    }
    if !(q >= 1.0) {
        return Err(Error::InvalidOrder(q));
    }
    let n = diagrams.len();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let dists = pairs
        .par_iter()
        .map(|&(i, j)| wasserstein(&diagrams[i], &diagrams[j], q))
        .collect::<Result<Vec<f64>>>()?;
    let mut values = vec![vec![0.0; n]; n];
    for (&(i, j), d) in pairs.iter().zip(dists) {
        values[i][j] = d;
        values[j][i] = d;
    }
    Ok(DistanceMatrix {
        labels: labels.to_vec(),
        values,
    })
}
