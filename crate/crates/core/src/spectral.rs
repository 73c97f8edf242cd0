//! Spectra and mixing on small Cayley graphs.
//!
//! The operator is `A_S f(g) = |S ∪ S⁻¹|⁻¹ Σ_s f(gs)` over the symmetrised
//! set, and the lazy walk is `T_S = (A_S + I)/2`.

use nalgebra::{DMatrix, SymmetricEigen};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::Quotient;
use crate::oracle::{symmetrize, DirectedBallTable};

/// Above this many vertices the dense solver gives way to power iteration.
pub const DENSE_LIMIT: usize = 2000;

/// Cayley graph as neighbour lists over the symmetrised generators.
pub struct CayleyGraph {
    pub size: usize,
    pub valence: usize,
    nbr: Vec<Vec<u32>>,
    /// Diameter of the undirected graph (BFS radius from the identity).
    pub diameter: usize,
}

impl CayleyGraph {
    pub fn build<Q: Quotient>(q: Q, gens: &[Q::Elem], threshold: usize) -> Result<Self> {
        let sym = symmetrize(&q, gens);
        let table = DirectedBallTable::build(q, sym.clone(), None, threshold)?;
        table.require_full()?;
        let qq = table.quotient();
        let nbr = table
            .elements()
            .iter()
            .map(|g| {
                sym.iter()
                    .map(|s| table.index_of(&qq.mul(g, s)).expect("closed under S") as u32)
                    .collect()
            })
            .collect();
        Ok(CayleyGraph {
            size: table.len(),
            valence: sym.len(),
            nbr,
            diameter: table.radius(),
        })
    }

    /// `y = A_S x`.
    pub fn apply(&self, x: &[f64], y: &mut [f64]) {
        let w = 1.0 / self.valence as f64;
        for (yv, ns) in y.iter_mut().zip(&self.nbr) {
            *yv = w * ns.iter().map(|&u| x[u as usize]).sum::<f64>();
        }
    }

    pub fn dense(&self) -> DMatrix<f64> {
        let w = 1.0 / self.valence as f64;
        let mut m = DMatrix::zeros(self.size, self.size);
        for (v, ns) in self.nbr.iter().enumerate() {
            for &u in ns {
                m[(v, u as usize)] += w;
            }
        }
        m
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct GapEstimate {
    pub lambda2: f64,
    pub lambda_min: Option<f64>,
    pub method: &'static str,
    /// Relative change of the last iterate (0 for the dense solver).
    pub tolerance: f64,
    /// Full spectrum, descending, for graphs of at most 64 vertices.
    pub eigenvalues: Option<Vec<f64>>,
}

/// Second largest eigenvalue of `A_S`.
pub fn spectral_gap(graph: &CayleyGraph) -> GapEstimate {
    if graph.size == 1 {
        return GapEstimate {
            lambda2: -1.0,
            lambda_min: Some(1.0),
            method: "trivial",
            tolerance: 0.0,
            eigenvalues: Some(vec![1.0]),
        };
    }
    if graph.size <= DENSE_LIMIT {
        let mut ev: Vec<f64> = SymmetricEigen::new(graph.dense()).eigenvalues.iter().copied().collect();
        ev.sort_by(|a, b| b.partial_cmp(a).unwrap());
        return GapEstimate {
            lambda2: ev[1],
            lambda_min: ev.last().copied(),
            method: "dense",
            tolerance: 0.0,
            eigenvalues: (ev.len() <= 64).then_some(ev),
        };
    }
    let (lambda2, residual) = power_lambda2(graph, 500_000, 1e-11);
    GapEstimate {
        lambda2,
        lambda_min: None,
        method: "power",
        tolerance: residual,
        eigenvalues: None,
    }
}

/// `λ2` by power iteration on `(A+I)/2` restricted to the complement of the
/// constants. Stops when the residual `‖Bx − μx‖` drops below `tol`;
/// returns the estimate and the final residual.
pub fn power_lambda2(graph: &CayleyGraph, max_iter: usize, tol: f64) -> (f64, f64) {
    let n = graph.size;
    let mut x: Vec<f64> = (0..n).map(|i| ((i * 7919 + 17) % 1013) as f64 / 1013.0 - 0.5).collect();
    let mut y = vec![0.0; n];
    let mut mu = 0.0;
    let mut residual = f64::INFINITY;
    for _ in 0..max_iter {
        let mean = x.iter().sum::<f64>() / n as f64;
        x.iter_mut().for_each(|v| *v -= mean);
        let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        x.iter_mut().for_each(|v| *v /= norm);
        graph.apply(&x, &mut y);
        y.iter_mut().zip(&x).for_each(|(yv, xv)| *yv = 0.5 * (*yv + xv));
        mu = x.iter().zip(&y).map(|(a, b)| a * b).sum();
        residual = y
            .iter()
            .zip(&x)
            .map(|(b, a)| (b - mu * a).powi(2))
            .sum::<f64>()
            .sqrt();
        std::mem::swap(&mut x, &mut y);
        if residual < tol {
            break;
        }
    }
    (2.0 * mu - 1.0, residual)
}

/// Smallest `l` with `‖T_S^l δ_e − u‖_∞ ≤ 1/(2|G|)`, and the largest
/// deviation of the total mass from 1 seen on the way.
pub fn mixing_time_linf(graph: &CayleyGraph, max_steps: usize) -> Result<(usize, f64)> {
    let n = graph.size;
    let target = 1.0 / (2.0 * n as f64);
    let uniform = 1.0 / n as f64;
    let mut p = vec![0.0; n];
    p[0] = 1.0;
    let mut q = vec![0.0; n];
    let mut drift: f64 = 0.0;
    for l in 0..=max_steps {
        let dev = p.iter().map(|v| (v - uniform).abs()).fold(0.0, f64::max);
        if dev <= target {
            return Ok((l, drift));
        }
        graph.apply(&p, &mut q);
        q.iter_mut().zip(&p).for_each(|(qv, pv)| *qv = 0.5 * (*qv + pv));
        std::mem::swap(&mut p, &mut q);
        drift = drift.max((p.iter().sum::<f64>() - 1.0).abs());
    }
    Err(Error::Threshold {
        size: max_steps as u128 + 1,
        threshold: max_steps as u128,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct SpectralReport {
    pub group: String,
    pub size: usize,
    pub gens: usize,
    pub sym_valence: usize,
    pub lambda2: f64,
    pub gap: f64,
    pub lambda_min: Option<f64>,
    pub method: &'static str,
    pub tolerance: f64,
    pub eigenvalues: Option<Vec<f64>>,
    pub diameter: usize,
    /// `(2 |S ∪ S⁻¹| diam²)⁻¹`.
    pub dsc_bound: f64,
    pub dsc_ok: bool,
    pub mixing_time: usize,
    pub mass_drift: f64,
    /// `l · gap / log|G|`.
    pub empirical_c: f64,
}

pub fn spectral_report<Q: Quotient>(q: Q, gens: &[Q::Elem], threshold: usize) -> Result<SpectralReport> {
    let group = q.describe();
    let graph = CayleyGraph::build(q, gens, threshold)?;
    let est = spectral_gap(&graph);
    let (mix, drift) = mixing_time_linf(&graph, 1_000_000)?;
    let gap = 1.0 - est.lambda2;
    let d = graph.diameter.max(1) as f64;
    let dsc = 1.0 / (2.0 * graph.valence as f64 * d * d);
    let log_g = (graph.size as f64).ln();
    Ok(SpectralReport {
        group,
        size: graph.size,
        gens: gens.len(),
        sym_valence: graph.valence,
        lambda2: est.lambda2,
        gap,
        lambda_min: est.lambda_min,
        method: est.method,
        tolerance: est.tolerance,
        eigenvalues: est.eigenvalues,
        diameter: graph.diameter,
        dsc_bound: dsc,
        dsc_ok: gap >= dsc * (1.0 - 1e-9),
        mixing_time: mix,
        mass_drift: drift,
        empirical_c: if log_g > 0.0 { mix as f64 * gap / log_g } else { 0.0 },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::Cyclic;

    #[test]
    fn three_cycle() {
        let r = spectral_report(Cyclic::new(3), &[1], 100).unwrap();
        let ev = r.eigenvalues.unwrap();
        assert!((ev[0] - 1.0).abs() < 1e-9);
        assert!((ev[1] + 0.5).abs() < 1e-9 && (ev[2] + 0.5).abs() < 1e-9);
        assert!((r.gap - 1.5).abs() < 1e-9);
        assert_eq!(r.diameter, 1);
        // lazy walk from δ_e: (1/2, 1/4, 1/4), then (3/8, 5/16, 5/16)
        assert_eq!(r.mixing_time, 2);
    }

    #[test]
    fn trivial_group_mixes_immediately() {
        let r = spectral_report(Cyclic::new(1), &[0], 100).unwrap();
        assert_eq!(r.mixing_time, 0);
    }

    #[test]
    fn power_iteration_matches_dense() {
        let f = crate::algebra::Gf2m::new(1).unwrap();
        let q = crate::sl2::Sl2Quotient { field: f, m: 3 };
        let g = CayleyGraph::build(q, &crate::sl2::canonical_gens(f, 3), 10_000).unwrap();
        let dense = spectral_gap(&g).lambda2;
        let (power, res) = power_lambda2(&g, 500_000, 1e-12);
        assert!(res < 1e-12);
        assert!((power - dense).abs() < 1e-9, "{power} vs {dense}");
        // cycle of length 9: λ2 = cos(2π/9)
        let c = CayleyGraph::build(Cyclic::new(9), &[1], 100).unwrap();
        let exact = (2.0 * std::f64::consts::PI / 9.0).cos();
        assert!((power_lambda2(&c, 100_000, 1e-13).0 - exact).abs() < 1e-9);
    }
}
