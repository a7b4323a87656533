//! Small dense complex matrices.
//!
//! Everything in this crate works on registers of at most 24 qubits, and the
//! density operators that actually get built are far smaller, so a plain
//! row-major `Vec<Complex64>` with an O(n^3) cyclic Jacobi eigensolver is
//! all that is needed. No BLAS/LAPACK dependency.

use num_complex::Complex64;

pub(crate) type C64 = Complex64;

/// Row-major square complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct CMat {
    pub dim: usize,
    pub data: Vec<C64>,
}

impl CMat {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![C64::new(0.0, 0.0); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = C64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_rows(rows: &[&[C64]]) -> Self {
        let dim = rows.len();
        let mut m = Self::zeros(dim);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), dim, "matrix rows must be square");
            for (j, &v) in row.iter().enumerate() {
                m[(i, j)] = v;
            }
        }
        m
    }

    /// |v><v| for a column vector `v`.
    pub fn outer(v: &[C64]) -> Self {
        let dim = v.len();
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            for j in 0..dim {
                m[(i, j)] = v[i] * v[j].conj();
            }
        }
        m
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|&z| z * factor).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        Self {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        Self {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| a - b)
                .collect(),
        }
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a.norm_sqr() == 0.0 {
                    continue;
                }
                for j in 0..n {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        out
    }

    pub fn adjoint(&self) -> Self {
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out[(j, i)] = self[(i, j)].conj();
            }
        }
        out
    }

    pub fn kron(&self, other: &Self) -> Self {
        let n = self.dim;
        let m = other.dim;
        let mut out = Self::zeros(n * m);
        for i in 0..n {
            for j in 0..n {
                let a = self[(i, j)];
                if a.norm_sqr() == 0.0 {
                    continue;
                }
                for k in 0..m {
                    for l in 0..m {
                        out[(i * m + k, j * m + l)] = a * other[(k, l)];
                    }
                }
            }
        }
        out
    }

    /// Largest |A[i][j] - conj(A[j][i])| over all entries.
    pub fn hermiticity_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.dim {
            for j in 0..self.dim {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }

    /// Eigenvalues of a Hermitian matrix, ascending.
    ///
    /// Cyclic Jacobi with complex plane rotations. The input is symmetrised
    /// first so tiny floating-point Hermiticity defects do not accumulate.
    pub fn hermitian_eigenvalues(&self) -> Vec<f64> {
        let n = self.dim;
        if n == 0 {
            return Vec::new();
        }
        // a <- (a + a^dagger) / 2
        let mut a = self.add(&self.adjoint()).scale(0.5);
        let fro_sq: f64 = a.data.iter().map(|z| z.norm_sqr()).sum();
        let tol = (fro_sq * 1e-30).max(f64::MIN_POSITIVE);

        for _sweep in 0..100 {
            let off_sq: f64 = (0..n)
                .flat_map(|p| (0..n).filter(move |&q| q != p).map(move |q| (p, q)))
                .map(|(p, q)| a[(p, q)].norm_sqr())
                .sum();
            if off_sq <= tol {
                break;
            }
            for p in 0..n {
                for q in (p + 1)..n {
                    let b = a[(p, q)];
                    let babs = b.norm();
                    if babs <= 1e-300 {
                        continue;
                    }
                    let app = a[(p, p)].re;
                    let aqq = a[(q, q)].re;
                    let phi = b.arg();
                    // Real 2x2 block [[app, |b|], [|b|, aqq]] after phase
                    // removal; standard Jacobi angle with the small root.
                    let tau = (aqq - app) / (2.0 * babs);
                    let t = if tau >= 0.0 {
                        1.0 / (tau + (1.0 + tau * tau).sqrt())
                    } else {
                        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                    };
                    let c = 1.0 / (1.0 + t * t).sqrt();
                    let s = t * c;
                    let eip = C64::from_polar(1.0, phi);
                    let eim = eip.conj();
                    // U restricted to (p, q):
                    //   U_pp = c        U_pq = s
                    //   U_qp = -s e^-ip U_qq = c e^-ip
                    // Columns: T = A U.
                    for i in 0..n {
                        let aip = a[(i, p)];
                        let aiq = a[(i, q)];
                        a[(i, p)] = aip * c - aiq * (s * eim);
                        a[(i, q)] = aip * s + aiq * (c * eim);
                    }
                    // Rows: A' = U^dagger T.
                    for j in 0..n {
                        let apj = a[(p, j)];
                        let aqj = a[(q, j)];
                        a[(p, j)] = apj * c - aqj * (s * eip);
                        a[(q, j)] = apj * s + aqj * (c * eip);
                    }
                }
            }
        }

        let mut eigs: Vec<f64> = (0..n).map(|i| a[(i, i)].re).collect();
        eigs.sort_by(|x, y| x.partial_cmp(y).expect("eigenvalue is NaN"));
        eigs
    }

    /// Sum of |eigenvalues| of a Hermitian matrix.
    pub fn trace_norm_hermitian(&self) -> f64 {
        self.hermitian_eigenvalues().iter().map(|l| l.abs()).sum()
    }
}

impl std::ops::Index<(usize, usize)> for CMat {
    type Output = C64;

    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.dim + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for CMat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.dim + j]
    }
}

#[cfg(test)]
pub(crate) fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub(crate) fn cr(re: f64) -> C64 {
    C64::new(re, 0.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SimRng;

    #[test]
    fn eigenvalues_of_diagonal_matrix() {
        let m = CMat::from_rows(&[
            &[cr(3.0), cr(0.0), cr(0.0)],
            &[cr(0.0), cr(-1.0), cr(0.0)],
            &[cr(0.0), cr(0.0), cr(2.0)],
        ]);
        let eigs = m.hermitian_eigenvalues();
        assert!((eigs[0] + 1.0).abs() < 1e-14);
        assert!((eigs[1] - 2.0).abs() < 1e-14);
        assert!((eigs[2] - 3.0).abs() < 1e-14);
    }

    #[test]
    fn eigenvalues_of_pauli_x_and_y() {
        let x = CMat::from_rows(&[&[cr(0.0), cr(1.0)], &[cr(1.0), cr(0.0)]]);
        let y = CMat::from_rows(&[&[cr(0.0), c(0.0, -1.0)], &[c(0.0, 1.0), cr(0.0)]]);
        for m in [x, y] {
            let eigs = m.hermitian_eigenvalues();
            assert!((eigs[0] + 1.0).abs() < 1e-14);
            assert!((eigs[1] - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn eigenvalues_of_helstrom_difference_matrix() {
        // 0.5|0><0| - 0.5|+><+| has eigenvalues +-sqrt(1/8).
        let m = CMat::from_rows(&[&[cr(0.25), cr(-0.25)], &[cr(-0.25), cr(-0.25)]]);
        let eigs = m.hermitian_eigenvalues();
        let expected = 0.125f64.sqrt();
        assert!((eigs[0] + expected).abs() < 1e-14);
        assert!((eigs[1] - expected).abs() < 1e-14);
        assert!((m.trace_norm_hermitian() - 2.0 * expected).abs() < 1e-14);
    }

    /// Random Hermitian via A = B + B^dagger; checks the moment identities
    /// tr A = sum(l) and tr A^2 = sum(l^2).
    #[test]
    fn eigenvalue_moments_match_traces() {
        let mut rng = SimRng::from_seed(5);
        for dim in [2usize, 3, 5, 8] {
            for _ in 0..20 {
                let mut b = CMat::zeros(dim);
                for i in 0..dim {
                    for j in 0..dim {
                        b[(i, j)] = c(rng.uniform() - 0.5, rng.uniform() - 0.5);
                    }
                }
                let a = b.add(&b.adjoint());
                let eigs = a.hermitian_eigenvalues();
                let tr = a.trace().re;
                let tr2 = a.matmul(&a).trace().re;
                let s1: f64 = eigs.iter().sum();
                let s2: f64 = eigs.iter().map(|l| l * l).sum();
                assert!((s1 - tr).abs() < 1e-10 * (1.0 + tr.abs()));
                assert!((s2 - tr2).abs() < 1e-10 * (1.0 + tr2.abs()));
            }
        }
    }

    #[test]
    fn kron_of_identities_is_identity() {
        let i2 = CMat::identity(2);
        let i4 = i2.kron(&i2);
        assert_eq!(i4, CMat::identity(4));
    }
}
