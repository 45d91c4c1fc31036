//! Lowest eigenpair of a symmetric operator by Lanczos iteration with full
//! reorthogonalization and explicit restarts from the current Ritz vector.

use nalgebra::{DMatrix, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Clone, Debug)]
pub(crate) struct LanczosOptions {
    /// Absolute residual `‖Av - θv‖` required for convergence.
    pub tol: f64,
    /// Cap on operator applications, restarts included.
    pub max_matvecs: usize,
    /// Krylov dimension before a restart.
    pub krylov_dim: usize,
    pub seed: u64,
}

#[derive(Clone, Debug)]
pub(crate) struct LanczosOutcome {
    pub value: f64,
    pub vector: Vec<f64>,
    /// Second-lowest Ritz value of the last Krylov space, if it had one.
    pub second: Option<f64>,
    pub matvecs: usize,
    pub residual: f64,
    pub converged: bool,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    y.iter_mut().zip(x).for_each(|(yi, xi)| *yi += alpha * xi);
}

fn scale(a: &mut [f64], s: f64) {
    a.iter_mut().for_each(|x| *x *= s);
}

fn tridiagonal_eigen(alphas: &[f64], betas: &[f64]) -> SymmetricEigen<f64, nalgebra::Dyn> {
    let k = alphas.len();
    let mut t = DMatrix::zeros(k, k);
    for i in 0..k {
        t[(i, i)] = alphas[i];
        if i + 1 < k {
            t[(i, i + 1)] = betas[i];
            t[(i + 1, i)] = betas[i];
        }
    }
    t.symmetric_eigen()
}

// Indices of the two smallest eigenvalues.
fn lowest_two(values: &nalgebra::DVector<f64>) -> (usize, Option<usize>) {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    (order[0], order.get(1).copied())
}

pub(crate) fn lowest_eigenpair<F>(dim: usize, matvec: F, opts: &LanczosOptions) -> LanczosOutcome
where
    F: Fn(&[f64], &mut [f64]),
{
    assert!(dim > 0);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut start: Vec<f64> = (0..dim).map(|_| rng.random_range(-1.0..1.0)).collect();
    let n0 = norm(&start);
    scale(&mut start, 1.0 / n0);

    let krylov_dim = opts.krylov_dim.clamp(2, dim.max(2)).min(dim);
    let mut matvecs = 0;
    let mut w = vec![0.0; dim];
    loop {
        let mut basis: Vec<Vec<f64>> = vec![start.clone()];
        let mut alphas = Vec::new();
        let mut betas: Vec<f64> = Vec::new();
        let (second, y) = loop {
            let j = basis.len() - 1;
            matvec(&basis[j], &mut w);
            matvecs += 1;
            let alpha = dot(&basis[j], &w);
            axpy(-alpha, &basis[j], &mut w);
            if j > 0 {
                axpy(-betas[j - 1], &basis[j - 1], &mut w);
            }
            // two passes of classical Gram-Schmidt against the whole basis
            for _ in 0..2 {
                for q in &basis {
                    let c = dot(q, &w);
                    axpy(-c, q, &mut w);
                }
            }
            alphas.push(alpha);
            let beta = norm(&w);

            let eig = tridiagonal_eigen(&alphas, &betas);
            let (i0, i1) = lowest_two(&eig.eigenvalues);
            let y = eig.eigenvectors.column(i0).iter().copied().collect::<Vec<_>>();
            let estimate = beta * y[j].abs();
            let exhausted = basis.len() >= krylov_dim || basis.len() >= dim;
            let invariant = beta <= 1e-14 * alphas.iter().map(|a| a.abs()).fold(1.0, f64::max);
            if estimate <= 0.1 * opts.tol || exhausted || invariant || matvecs >= opts.max_matvecs {
                break (i1.map(|i| eig.eigenvalues[i]), y);
            }
            betas.push(beta);
            let mut next = w.clone();
            scale(&mut next, 1.0 / beta);
            basis.push(next);
        };

        let mut vector = vec![0.0; dim];
        for (coef, q) in y.iter().zip(&basis) {
            axpy(*coef, q, &mut vector);
        }
        let nv = norm(&vector);
        scale(&mut vector, 1.0 / nv);

        matvec(&vector, &mut w);
        matvecs += 1;
        let rq = dot(&vector, &w);
        axpy(-rq, &vector, &mut w);
        let residual = norm(&w);

        let converged = residual <= opts.tol;
        if converged || matvecs >= opts.max_matvecs {
            return LanczosOutcome { value: rq, vector, second, matvecs, residual, converged };
        }
        start = vector;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn opts() -> LanczosOptions {
        LanczosOptions { tol: 1e-10, max_matvecs: 2000, krylov_dim: 40, seed: 1 }
    }

    #[test]
    fn diagonal_operator() {
        let d: Vec<f64> = (0..200).map(|i| (i as f64 * 0.37).sin() + i as f64 * 0.01).collect();
        let out = lowest_eigenpair(d.len(), |x, y| y.iter_mut().zip(x).zip(&d).for_each(|((yi, xi), di)| *yi = di * xi), &opts());
        let min = d.iter().cloned().fold(f64::INFINITY, f64::min);
        assert!(out.converged);
        assert!((out.value - min).abs() < 1e-10);
    }

    #[test]
    fn one_dimensional_space() {
        let out = lowest_eigenpair(1, |x, y| y[0] = -2.5 * x[0], &opts());
        assert!(out.converged);
        assert_eq!(out.value, -2.5);
        assert!(out.second.is_none());
    }

    #[test]
    fn laplacian_needs_restarts() {
        // path-graph Laplacian: λ_min = 2 - 2cos(π/(n+1))
        let n = 300;
        let apply = |x: &[f64], y: &mut [f64]| {
            for i in 0..n {
                let mut v = 2.0 * x[i];
                if i > 0 {
                    v -= x[i - 1];
                }
                if i + 1 < n {
                    v -= x[i + 1];
                }
                y[i] = v;
            }
        };
        let mut o = opts();
        o.tol = 1e-8;
        o.max_matvecs = 20_000;
        let out = lowest_eigenpair(n, apply, &o);
        let exact = 2.0 - 2.0 * (std::f64::consts::PI / (n as f64 + 1.0)).cos();
        assert!(out.converged, "residual {}", out.residual);
        assert!((out.value - exact).abs() < 1e-9);
    }
}
