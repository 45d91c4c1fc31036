#![allow(dead_code)]

// Reference Hamiltonian built from explicit spin matrices and Kronecker
// products, sharing no code with the library's operator.

use ferrichain::hamiltonian::HamiltonianSpec;
use ferrichain::spinbasis::{Boundary, LatticeSpec, SectorBasis};
use nalgebra::DMatrix;

/// `(S_z, S_+)` for spin `twice_s / 2` in the basis `m = -s, ..., s`.
pub fn spin_matrices(twice_s: i32) -> (DMatrix<f64>, DMatrix<f64>) {
    let d = (twice_s + 1) as usize;
    let s = twice_s as f64 / 2.0;
    let mut sz = DMatrix::zeros(d, d);
    let mut sp = DMatrix::zeros(d, d);
    for n in 0..d {
        let m = n as f64 - s;
        sz[(n, n)] = m;
        if n + 1 < d {
            sp[(n + 1, n)] = (s * (s + 1.0) - m * (m + 1.0)).sqrt();
        }
    }
    (sz, sp)
}

/// `S_a·S_b` on the two-site space, first site as the slow index.
pub fn bond_matrix(twice_a: i32, twice_b: i32) -> DMatrix<f64> {
    let (za, pa) = spin_matrices(twice_a);
    let (zb, pb) = spin_matrices(twice_b);
    za.kronecker(&zb) + (pa.kronecker(&pb.transpose()) + pa.transpose().kronecker(&pb)) * 0.5
}

pub fn oracle_bonds(n: usize, boundary: Boundary) -> Vec<(usize, usize)> {
    let mut b: Vec<(usize, usize)> = (0..n - 1).map(|k| (k, k + 1)).collect();
    if boundary == Boundary::Ring && n > 2 {
        b.push((n - 1, 0));
    }
    b
}

/// The Hamiltonian restricted to `basis`, element by element.
pub fn oracle_sector_matrix(lattice: &LatticeSpec, basis: &SectorBasis) -> DMatrix<f64> {
    let n = lattice.n_sites();
    let twice: Vec<i32> = lattice.spins().iter().map(|s| s.twice()).collect();
    let bonds = oracle_bonds(n, lattice.boundary());
    let locals: Vec<DMatrix<f64>> = bonds.iter().map(|&(i, j)| bond_matrix(twice[i], twice[j])).collect();
    let configs: Vec<Vec<u8>> = basis.configs().map(|c| c.levels().to_vec()).collect();
    let dim = configs.len();
    let mut h = DMatrix::zeros(dim, dim);
    for (r, a) in configs.iter().enumerate() {
        for (c, b) in configs.iter().enumerate() {
            let mut v = 0.0;
            for (&(i, j), local) in bonds.iter().zip(&locals) {
                if (0..n).any(|k| k != i && k != j && a[k] != b[k]) {
                    continue;
                }
                let dj = (twice[j] + 1) as usize;
                v += lattice.coupling() * local[(a[i] as usize * dj + a[j] as usize, b[i] as usize * dj + b[j] as usize)];
            }
            if r == c {
                let sz: f64 = (0..n).map(|k| a[k] as f64 - twice[k] as f64 / 2.0).sum();
                v -= lattice.field() * sz;
            }
            h[(r, c)] = v;
        }
    }
    h
}

/// Columns of the matrix-free operator applied to unit vectors.
pub fn matrix_free_columns(spec: &HamiltonianSpec, basis: &SectorBasis) -> DMatrix<f64> {
    let dim = basis.len();
    let mut h = DMatrix::zeros(dim, dim);
    let mut e = vec![0.0; dim];
    let mut out = vec![0.0; dim];
    for c in 0..dim {
        e[c] = 1.0;
        spec.apply(basis, &e, &mut out).unwrap();
        e[c] = 0.0;
        for r in 0..dim {
            h[(r, c)] = out[r];
        }
    }
    h
}

/// `max |H_oracle - H_matrix_free|` over every sector of the lattice.
pub fn oracle_max_deviation(lattice: &LatticeSpec) -> f64 {
    use ferrichain::spinbasis::{enumerate_sector, HalfInt};
    let spec = HamiltonianSpec::new(lattice.clone());
    let total = lattice.total_spin();
    let mut m = -total;
    let mut worst: f64 = 0.0;
    while m <= total {
        let basis = enumerate_sector(lattice, m).unwrap();
        let d = (oracle_sector_matrix(lattice, &basis) - matrix_free_columns(&spec, &basis)).amax();
        worst = worst.max(d);
        m += HalfInt::ONE;
    }
    worst
}
