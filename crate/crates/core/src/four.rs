//! Dense 4×4 complex matrices indexed over the mode array
//! `{a1, a2†, a3, a4†}` (forward signal, forward idler, backward signal,
//! backward idler).

use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FourMatrix(pub [[Complex64; 4]; 4]);

impl FourMatrix {
    pub fn zeros() -> Self {
        FourMatrix([[ZERO; 4]; 4])
    }

    pub fn identity() -> Self {
        Self::diagonal([ONE; 4])
    }

    pub fn diagonal(d: [Complex64; 4]) -> Self {
        let mut m = Self::zeros();
        for (i, v) in d.into_iter().enumerate() {
            m.0[i][i] = v;
        }
        m
    }

    /// Entry with the 1-based indexing used for `U_ij` throughout the
    /// emission-probability formulas.
    #[inline]
    pub fn at(&self, row: usize, col: usize) -> Complex64 {
        self.0[row - 1][col - 1]
    }

    pub fn adjoint(&self) -> Self {
        let mut m = Self::zeros();
        for i in 0..4 {
            for j in 0..4 {
                m.0[i][j] = self.0[j][i].conj();
            }
        }
        m
    }

    pub fn is_finite(&self) -> bool {
        self.0
            .iter()
            .flatten()
            .all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// Maximum absolute column sum.
    pub fn norm_one(&self) -> f64 {
        (0..4)
            .map(|j| (0..4).map(|i| self.0[i][j].norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.0
            .iter()
            .flatten()
            .zip(other.0.iter().flatten())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn lu(&self) -> Option<Lu> {
        Lu::factor(self)
    }
}

impl Index<(usize, usize)> for FourMatrix {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.0[i][j]
    }
}

impl IndexMut<(usize, usize)> for FourMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.0[i][j]
    }
}

impl Mul for FourMatrix {
    type Output = FourMatrix;
    fn mul(self, rhs: FourMatrix) -> FourMatrix {
        let mut m = FourMatrix::zeros();
        for i in 0..4 {
            for k in 0..4 {
                let a = self.0[i][k];
                if a == ZERO {
                    continue;
                }
                for j in 0..4 {
                    m.0[i][j] += a * rhs.0[k][j];
                }
            }
        }
        m
    }
}

impl Add for FourMatrix {
    type Output = FourMatrix;
    fn add(mut self, rhs: FourMatrix) -> FourMatrix {
        for (a, b) in self.0.iter_mut().flatten().zip(rhs.0.iter().flatten()) {
            *a += b;
        }
        self
    }
}

impl Sub for FourMatrix {
    type Output = FourMatrix;
    fn sub(mut self, rhs: FourMatrix) -> FourMatrix {
        for (a, b) in self.0.iter_mut().flatten().zip(rhs.0.iter().flatten()) {
            *a -= b;
        }
        self
    }
}

/// LU factorisation with partial pivoting, `P A = L U`.
#[derive(Debug, Clone, Copy)]
pub struct Lu {
    lu: [[Complex64; 4]; 4],
    perm: [usize; 4],
}

impl Lu {
    fn factor(a: &FourMatrix) -> Option<Lu> {
        let mut lu = a.0;
        let mut perm = [0, 1, 2, 3];
        for k in 0..4 {
            let p = (k..4)
                .max_by(|&i, &j| lu[i][k].norm().total_cmp(&lu[j][k].norm()))
                .unwrap_or(k);
            if lu[p][k] == ZERO || !lu[p][k].norm().is_finite() {
                return None;
            }
            lu.swap(k, p);
            perm.swap(k, p);
            let pivot = lu[k][k];
            for i in k + 1..4 {
                let f = lu[i][k] / pivot;
                lu[i][k] = f;
                if f == ZERO {
                    continue;
                }
                for j in k + 1..4 {
                    let u = lu[k][j];
                    lu[i][j] -= f * u;
                }
            }
        }
        Some(Lu { lu, perm })
    }

    pub fn solve_vec(&self, b: [Complex64; 4]) -> [Complex64; 4] {
        let mut x = [ZERO; 4];
        for i in 0..4 {
            let mut s = b[self.perm[i]];
            for j in 0..i {
                s -= self.lu[i][j] * x[j];
            }
            x[i] = s;
        }
        for i in (0..4).rev() {
            let mut s = x[i];
            for j in i + 1..4 {
                s -= self.lu[i][j] * x[j];
            }
            x[i] = s / self.lu[i][i];
        }
        x
    }

    /// Solves `A X = B` column by column.
    pub fn solve(&self, b: &FourMatrix) -> FourMatrix {
        let mut x = FourMatrix::zeros();
        for j in 0..4 {
            let col = self.solve_vec([b.0[0][j], b.0[1][j], b.0[2][j], b.0[3][j]]);
            for i in 0..4 {
                x.0[i][j] = col[i];
            }
        }
        x
    }

    /// `‖A‖₁ ‖A⁻¹‖₁` given the original matrix.
    pub fn condition_one(&self, a: &FourMatrix) -> f64 {
        a.norm_one() * self.solve(&FourMatrix::identity()).norm_one()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn solve_recovers_known_product() {
        let a = FourMatrix([
            [c(2.0, 1.0), c(0.5, 0.0), c(0.0, -1.0), c(0.1, 0.2)],
            [c(0.0, 0.3), c(3.0, 0.0), c(1.0, 1.0), c(0.0, 0.0)],
            [c(1.0, 0.0), c(0.0, 0.0), c(0.5, 0.0), c(-2.0, 0.5)],
            [c(0.2, 0.0), c(0.1, 0.1), c(0.0, 0.0), c(1.5, -0.5)],
        ]);
        let x = FourMatrix([
            [c(1.0, 0.0), c(0.0, 1.0), c(2.0, 0.0), c(0.0, 0.0)],
            [c(0.0, 0.0), c(1.0, -1.0), c(0.0, 0.0), c(3.0, 0.0)],
            [c(-1.0, 0.5), c(0.0, 0.0), c(1.0, 0.0), c(0.0, 2.0)],
            [c(0.0, 0.0), c(0.5, 0.0), c(0.0, -1.0), c(1.0, 1.0)],
        ]);
        let b = a * x;
        let solved = a.lu().unwrap().solve(&b);
        assert!(solved.max_abs_diff(&x) < 1e-13);
        let inv = a.lu().unwrap().solve(&FourMatrix::identity());
        assert!((a * inv).max_abs_diff(&FourMatrix::identity()) < 1e-13);
    }

    #[test]
    fn singular_matrix_has_no_lu() {
        let mut a = FourMatrix::identity();
        a.0[2][2] = ZERO;
        assert!(a.lu().is_none());
    }

    #[test]
    fn identity_condition_is_one() {
        let i = FourMatrix::identity();
        assert_eq!(i.lu().unwrap().condition_one(&i), 1.0);
    }

    #[test]
    fn adjoint_conjugates_and_transposes() {
        let mut a = FourMatrix::zeros();
        a.0[0][2] = c(0.3, 0.4);
        let h = a.adjoint();
        assert_eq!(h.0[2][0], c(0.3, -0.4));
        assert_eq!(h.0[0][2], ZERO);
        assert_eq!(a.at(1, 3), c(0.3, 0.4));
    }
}
