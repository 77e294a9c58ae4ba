//! Dense complex matrix kernel for the small dimensions used here (3x3
//! qubit-level operators up to the 18x18 cavity model).
//!
//! The exponential of a Hermitian generator goes through an
//! eigendecomposition, which keeps the result unitary to roundoff and makes
//! the zero eigenvalue of the dark state exact rather than approximate.

use crate::tol;
use crate::CoreError;
use nalgebra::DMatrix;
use num_complex::Complex;

pub type C64 = Complex<f64>;

/// Row-major dense complex matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![C64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = C64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    /// Builds from nested row slices; all rows must have equal length.
    pub fn from_rows(rows: &[Vec<C64>]) -> Result<Self, CoreError> {
        let r = rows.len();
        if r == 0 {
            return Err(CoreError::ShapeMismatch("empty row list".into()));
        }
        let c = rows[0].len();
        if rows.iter().any(|row| row.len() != c) {
            return Err(CoreError::ShapeMismatch("ragged row lengths".into()));
        }
        Ok(Self {
            rows: r,
            cols: c,
            data: rows.concat(),
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn matmul(&self, other: &Self) -> Result<Self, CoreError> {
        if self.cols != other.rows {
            return Err(CoreError::ShapeMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a == C64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..other.cols {
                    out.data[i * other.cols + j] += a * other.data[k * other.cols + j];
                }
            }
        }
        Ok(out)
    }

    pub fn dagger(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn trace(&self) -> Result<C64, CoreError> {
        if !self.is_square() {
            return Err(CoreError::ShapeMismatch(
                "trace of non-square matrix".into(),
            ));
        }
        Ok((0..self.rows).map(|i| self[(i, i)]).sum())
    }

    pub fn add(&self, other: &Self) -> Result<Self, CoreError> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, CoreError> {
        self.zip_with(other, |a, b| a - b)
    }

    fn zip_with(&self, other: &Self, f: impl Fn(C64, C64) -> C64) -> Result<Self, CoreError> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(CoreError::ShapeMismatch(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        })
    }

    pub fn scale(&self, s: C64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&a| a * s).collect(),
        }
    }

    pub fn frob_norm(&self) -> f64 {
        self.data.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn frob_dist(&self, other: &Self) -> Result<f64, CoreError> {
        Ok(self.sub(other)?.frob_norm())
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|a| a.norm()).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &Self) -> Result<f64, CoreError> {
        Ok(self.sub(other)?.max_abs())
    }

    pub fn all_finite(&self) -> bool {
        self.data
            .iter()
            .all(|a| a.re.is_finite() && a.im.is_finite())
    }

    /// max|A[i][j] - conj(A[j][i])| over maxabs(A), zero matrix counts as
    /// hermitian.
    pub fn hermiticity_deviation(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let scale = self.max_abs();
        if scale == 0.0 {
            return 0.0;
        }
        let mut dev: f64 = 0.0;
        for i in 0..self.rows {
            for j in i..self.cols {
                dev = dev.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        dev / scale
    }

    /// Frobenius distance of U^dag U from the identity.
    pub fn unitarity_deviation(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let prod = self.dagger().matmul(self).expect("square");
        prod.sub(&Self::identity(self.rows))
            .expect("square")
            .frob_norm()
    }

    /// exp(-i H t) for a Hermitian generator H, via eigendecomposition.
    pub fn hermitian_expm(&self, t: f64) -> Result<Self, CoreError> {
        if !self.is_square() {
            return Err(CoreError::ShapeMismatch(
                "exponential of non-square matrix".into(),
            ));
        }
        if !self.all_finite() || !t.is_finite() {
            return Err(CoreError::NonFinite);
        }
        let dev = self.hermiticity_deviation();
        if dev > tol::HERMITICITY_REL {
            return Err(CoreError::NotHermitian { deviation: dev });
        }
        let n = self.rows;
        let h = DMatrix::from_fn(n, n, |i, j| self[(i, j)]);
        let eig = h.symmetric_eigen();
        let mut out = Self::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = C64::new(0.0, 0.0);
                for k in 0..n {
                    let phase = C64::from_polar(1.0, -eig.eigenvalues[k] * t);
                    acc += eig.eigenvectors[(i, k)] * phase * eig.eigenvectors[(j, k)].conj();
                }
                out[(i, j)] = acc;
            }
        }
        Ok(out)
    }

    /// Smallest eigenvalue of a (nearly) Hermitian matrix, computed on the
    /// symmetrized part (A + A^dag)/2.
    pub fn hermitian_min_eigenvalue(&self) -> Result<f64, CoreError> {
        if !self.is_square() {
            return Err(CoreError::ShapeMismatch(
                "eigenvalues of non-square matrix".into(),
            ));
        }
        if !self.all_finite() {
            return Err(CoreError::NonFinite);
        }
        let n = self.rows;
        let h = DMatrix::from_fn(n, n, |i, j| (self[(i, j)] + self[(j, i)].conj()) * 0.5);
        let eig = h.symmetric_eigen();
        Ok(eig.eigenvalues.iter().fold(f64::INFINITY, |a, &b| a.min(b)))
    }
}

impl std::ops::Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.cols + j]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn random_hermitian(n: usize, rng: &mut impl Rng) -> ComplexMatrix {
        let mut m = ComplexMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = c(rng.gen_range(-1.0..1.0), 0.0);
            for j in (i + 1)..n {
                let v = c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
                m[(i, j)] = v;
                m[(j, i)] = v.conj();
            }
        }
        m
    }

    /// Scaling-and-squaring Taylor exponential, the independent oracle for
    /// the eigendecomposition path.
    fn expm_series(h: &ComplexMatrix, t: f64) -> ComplexMatrix {
        let n = h.rows();
        let gen = h.scale(c(0.0, -t));
        let norm = gen.max_abs() * n as f64;
        let squarings = norm.log2().ceil().max(0.0) as u32 + 4;
        let scaled = gen.scale(c(1.0 / f64::from(2u32.pow(squarings) as u32), 0.0));
        let mut result = ComplexMatrix::identity(n);
        let mut term = ComplexMatrix::identity(n);
        for k in 1..25 {
            term = term.matmul(&scaled).unwrap().scale(c(1.0 / k as f64, 0.0));
            result = result.add(&term).unwrap();
        }
        for _ in 0..squarings {
            result = result.matmul(&result).unwrap();
        }
        result
    }

    #[test]
    fn zero_generator_gives_identity() {
        let h = ComplexMatrix::zeros(3, 3);
        let u = h.hermitian_expm(1.7).unwrap();
        assert!(u.frob_dist(&ComplexMatrix::identity(3)).unwrap() < 1e-15);
    }

    #[test]
    fn equal_coupling_pi_pulse_matches_dark_bright_form() {
        // H with ones coupling both ground states to the excited state,
        // evolved for t = pi/sqrt(2), is the NOT-type gate times -1: the
        // bright state (|1>+|2>)/sqrt(2) undergoes a full two-level pi pulse
        // while the dark state rides the exact zero eigenvalue.
        let mut h = ComplexMatrix::zeros(3, 3);
        h[(0, 2)] = c(1.0, 0.0);
        h[(2, 0)] = c(1.0, 0.0);
        h[(1, 2)] = c(1.0, 0.0);
        h[(2, 1)] = c(1.0, 0.0);
        let u = h
            .hermitian_expm(std::f64::consts::PI / 2f64.sqrt())
            .unwrap();
        let mut want = ComplexMatrix::zeros(3, 3);
        want[(0, 1)] = c(-1.0, 0.0);
        want[(1, 0)] = c(-1.0, 0.0);
        want[(2, 2)] = c(-1.0, 0.0);
        assert!(u.frob_dist(&want).unwrap() < 1e-12);
    }

    #[test]
    fn random_exponentials_are_unitary_and_compose() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let h = random_hermitian(3, &mut rng);
            let t = 0.37;
            let u = h.hermitian_expm(t).unwrap();
            assert!(u.unitarity_deviation() < tol::UNITARITY_EXPM);
            let u2 = h.hermitian_expm(2.0 * t).unwrap();
            let uu = u.matmul(&u).unwrap();
            assert!(u2.frob_dist(&uu).unwrap() < 1e-10);
            let det_proxy = u.matmul(&u.dagger()).unwrap().trace().unwrap();
            assert!((det_proxy.re - 3.0).abs() < 1e-10);
        }
    }

    #[test]
    fn semigroup_property_over_random_times() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for _ in 0..10 {
            let h = random_hermitian(4, &mut rng);
            let (s, t) = (rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            let lhs = h
                .hermitian_expm(s)
                .unwrap()
                .matmul(&h.hermitian_expm(t).unwrap())
                .unwrap();
            let rhs = h.hermitian_expm(s + t).unwrap();
            assert!(lhs.frob_dist(&rhs).unwrap() < 1e-10);
        }
    }

    #[test]
    fn eigen_and_series_exponentials_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for _ in 0..20 {
            let h = random_hermitian(3, &mut rng);
            let t = rng.gen_range(0.1..2.0);
            let a = h.hermitian_expm(t).unwrap();
            let b = expm_series(&h, t);
            assert!(a.frob_dist(&b).unwrap() < 1e-10);
        }
    }

    #[test]
    fn large_hermitian_exponential_stays_unitary() {
        let mut rng = ChaCha8Rng::seed_from_u64(14);
        let h = random_hermitian(18, &mut rng);
        let u = h.hermitian_expm(0.9).unwrap();
        assert!(u.unitarity_deviation() < 1e-11);
    }

    #[test]
    fn non_hermitian_input_rejected_with_diagnostic() {
        let mut h = ComplexMatrix::zeros(2, 2);
        h[(0, 1)] = c(1.0, 0.0);
        match h.hermitian_expm(1.0) {
            Err(CoreError::NotHermitian { deviation }) => assert!(deviation > 0.5),
            other => panic!("expected hermiticity rejection, got {other:?}"),
        }
    }

    #[test]
    fn non_finite_input_rejected() {
        let mut h = ComplexMatrix::zeros(2, 2);
        h[(0, 0)] = c(f64::NAN, 0.0);
        assert!(matches!(h.hermitian_expm(1.0), Err(CoreError::NonFinite)));
    }

    #[test]
    fn algebra_basics() {
        let a = ComplexMatrix::from_rows(&[
            vec![c(1.0, 1.0), c(2.0, 0.0)],
            vec![c(0.0, -1.0), c(3.0, 0.5)],
        ])
        .unwrap();
        assert_eq!(a.dagger().dagger(), a);
        assert_eq!(ComplexMatrix::identity(3).trace().unwrap(), c(3.0, 0.0));
        assert_eq!(a.frob_dist(&a).unwrap(), 0.0);
        let shape_err = a.matmul(&ComplexMatrix::zeros(3, 3));
        assert!(matches!(shape_err, Err(CoreError::ShapeMismatch(_))));
        assert!(ComplexMatrix::zeros(2, 3).trace().is_err());
    }

    #[test]
    fn ragged_rows_rejected() {
        let bad = ComplexMatrix::from_rows(&[vec![c(1.0, 0.0)], vec![]]);
        assert!(matches!(bad, Err(CoreError::ShapeMismatch(_))));
    }
}
