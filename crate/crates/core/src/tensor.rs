//! Dense complex matrices and the small set of numerical routines everything
//! else is built on: Kronecker products, adjoints, a Jacobi Hermitian
//! eigensolver, nullspaces and norm-based approximate equality.
//!
//! Composite tensor indices flatten with the left factor major: the pair
//! (i, j) on a space of dimensions (d1, d2) lands at `i * d2 + j`. Every
//! module in this crate relies on that single convention.

use crate::error::{Error, Result};
use num_complex::Complex64;
use rand::Rng;

pub const C_ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const C_ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Numerical thresholds used throughout.
///
/// `rel` is a relative Frobenius-norm threshold for equality checks, `eig_gap`
/// the absolute gap used when clustering eigenvalues of Hermitian witnesses.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub rel: f64,
    pub eig_gap: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance {
            rel: 1e-9,
            eig_gap: 1e-8,
        }
    }
}

impl Tolerance {
    pub fn new(rel: f64, eig_gap: f64) -> Result<Self> {
        let valid = |v: f64| v.is_finite() && v > 0.0;
        if !valid(rel) || !valid(eig_gap) {
            return Err(Error::InvalidArgument(
                "tolerances must be strictly positive".into(),
            ));
        }
        Ok(Tolerance { rel, eig_gap })
    }
}

/// Outcome of a single named check: verdict plus the absolute residual that
/// was compared against the threshold.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Check {
    pub pass: bool,
    pub residual: f64,
}

impl Check {
    pub fn new(pass: bool, residual: f64) -> Self {
        Check { pass, residual }
    }
}

/// Dense complex matrix, row major.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    pub rows: usize,
    pub cols: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::ShapeMismatch {
                expected: format!("{} entries", rows * cols),
                got: format!("{}", data.len()),
            });
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidArgument("non-finite matrix entry".into()));
        }
        Ok(CMatrix { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        CMatrix {
            rows,
            cols,
            data: vec![C_ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, C_ONE);
        }
        m
    }

    /// Column vector for the standard basis element `i` of dimension `n`.
    pub fn basis_col(n: usize, i: usize) -> Self {
        let mut m = Self::zeros(n, 1);
        m.set(i, 0, C_ONE);
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        CMatrix { rows, cols, data }
    }

    /// Convenience constructor from real entries.
    pub fn from_real(rows: usize, cols: usize, entries: &[f64]) -> Result<Self> {
        Self::new(
            rows,
            cols,
            entries.iter().map(|&r| Complex64::new(r, 0.0)).collect(),
        )
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Complex64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.data
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn same_shape(&self, other: &Self) -> bool {
        self.rows == other.rows && self.cols == other.cols
    }

    pub fn shape_err(&self, other: &Self) -> Error {
        Error::ShapeMismatch {
            expected: format!("{}x{}", self.rows, self.cols),
            got: format!("{}x{}", other.rows, other.cols),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if !self.same_shape(other) {
            return Err(self.shape_err(other));
        }
        Ok(CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        if !self.same_shape(other) {
            return Err(self.shape_err(other));
        }
        Ok(CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a - b)
                .collect(),
        })
    }

    pub fn scale(&self, c: Complex64) -> Self {
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * c).collect(),
        }
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::ShapeMismatch {
                expected: format!("{} inner rows", self.cols),
                got: format!("{}", other.rows),
            });
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a == C_ZERO {
                    continue;
                }
                let row = k * other.cols;
                for j in 0..other.cols {
                    out.data[i * other.cols + j] += a * other.data[row + j];
                }
            }
        }
        Ok(out)
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i))
    }

    pub fn conj(&self) -> Self {
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z.conj()).collect(),
        }
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i)).sum()
    }

    pub fn norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Hermitian symmetrization (a + a†)/2.
    pub fn hermitian_part(&self) -> Self {
        self.add(&dagger(self)).unwrap().scale(Complex64::new(0.5, 0.0))
    }

    /// Columns of the matrix as column vectors.
    pub fn columns(&self) -> Vec<CMatrix> {
        (0..self.cols)
            .map(|j| Self::from_fn(self.rows, 1, |i, _| self.get(i, j)))
            .collect()
    }

    pub fn from_columns(rows: usize, cols: &[CMatrix]) -> Self {
        Self::from_fn(rows, cols.len(), |i, j| cols[j].get(i, 0))
    }
}

/// Kronecker product. Composite index (i, j) flattens as `i * dim2 + j`.
pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    let mut out = CMatrix::zeros(a.rows * b.rows, a.cols * b.cols);
    for i in 0..a.rows {
        for j in 0..a.cols {
            let av = a.get(i, j);
            if av == C_ZERO {
                continue;
            }
            for k in 0..b.rows {
                for l in 0..b.cols {
                    out.set(i * b.rows + k, j * b.cols + l, av * b.get(k, l));
                }
            }
        }
    }
    out
}

/// Conjugate transpose.
pub fn dagger(a: &CMatrix) -> CMatrix {
    CMatrix::from_fn(a.cols, a.rows, |i, j| a.get(j, i).conj())
}

/// The swap map d1 (x) d2 -> d2 (x) d1 as a permutation matrix.
pub fn swap_matrix(d1: usize, d2: usize) -> CMatrix {
    let mut m = CMatrix::zeros(d1 * d2, d1 * d2);
    for i in 0..d1 {
        for j in 0..d2 {
            m.set(j * d1 + i, i * d2 + j, C_ONE);
        }
    }
    m
}

/// Approximate equality in Frobenius norm.
///
/// Passes iff `|a - b|_F <= tol.rel * max(1, |a|_F, |b|_F)`. The reported
/// residual is the absolute difference norm.
pub fn approx_eq(a: &CMatrix, b: &CMatrix, tol: &Tolerance) -> Result<Check> {
    if !a.same_shape(b) {
        return Err(a.shape_err(b));
    }
    let residual = a.sub(b)?.norm();
    let scale = 1.0_f64.max(a.norm()).max(b.norm());
    Ok(Check::new(residual <= tol.rel * scale, residual))
}

fn offdiag_norm(a: &CMatrix) -> f64 {
    let mut s = 0.0;
    for i in 0..a.rows {
        for j in 0..a.cols {
            if i != j {
                s += a.get(i, j).norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// Hermitian eigendecomposition by cyclic complex Jacobi rotations.
///
/// Requires `|h - h†| <= tol.rel * |h|`; returns eigenvalues in ascending
/// order and a unitary `u` with `h = u diag(l) u†`.
pub fn herm_eig(h: &CMatrix, tol: &Tolerance) -> Result<(Vec<f64>, CMatrix)> {
    if !h.is_square() {
        return Err(Error::ShapeMismatch {
            expected: "square matrix".into(),
            got: format!("{}x{}", h.rows, h.cols),
        });
    }
    let herm_residual = h.sub(&dagger(h))?.norm();
    if herm_residual > tol.rel * 1.0_f64.max(h.norm()) {
        return Err(Error::NotHermitian {
            residual: herm_residual,
        });
    }
    let n = h.rows;
    if n == 0 {
        return Ok((Vec::new(), CMatrix::zeros(0, 0)));
    }
    let mut a = h.hermitian_part();
    let mut u = CMatrix::identity(n);
    let scale = a.norm().max(f64::MIN_POSITIVE);
    let target = scale * f64::EPSILON * (n as f64);

    for _sweep in 0..60 {
        if offdiag_norm(&a) <= target {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a.get(p, q);
                if apq.norm() <= f64::EPSILON * scale * 1e-3 {
                    continue;
                }
                // Unitary 2x2 rotation annihilating a[p][q].
                let app = a.get(p, p).re;
                let aqq = a.get(q, q).re;
                let abs = apq.norm();
                let phase = apq / abs;
                let tau = (aqq - app) / (2.0 * abs);
                // stable small root of t^2 - 2 tau t - 1 = 0
                let t = if tau >= 0.0 {
                    -1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                // Columns transform by G = [[c, -s*phase], [s*conj(phase), c]].
                let (g_pp, g_pq) = (Complex64::new(c, 0.0), -phase * s);
                let (g_qp, g_qq) = (phase.conj() * s, Complex64::new(c, 0.0));
                // a <- G† a G applied to rows/cols p and q.
                for j in 0..n {
                    let apj = a.get(p, j);
                    let aqj = a.get(q, j);
                    a.set(p, j, g_pp.conj() * apj + g_qp.conj() * aqj);
                    a.set(q, j, g_pq.conj() * apj + g_qq.conj() * aqj);
                }
                for i in 0..n {
                    let aip = a.get(i, p);
                    let aiq = a.get(i, q);
                    a.set(i, p, aip * g_pp + aiq * g_qp);
                    a.set(i, q, aip * g_pq + aiq * g_qq);
                }
                for i in 0..n {
                    let uip = u.get(i, p);
                    let uiq = u.get(i, q);
                    u.set(i, p, uip * g_pp + uiq * g_qp);
                    u.set(i, q, uip * g_pq + uiq * g_qq);
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    let eigs: Vec<f64> = (0..n).map(|i| a.get(i, i).re).collect();
    order.sort_by(|&i, &j| eigs[i].partial_cmp(&eigs[j]).unwrap());
    let sorted: Vec<f64> = order.iter().map(|&i| eigs[i]).collect();
    let u_sorted = CMatrix::from_fn(n, n, |i, j| u.get(i, order[j]));
    Ok((sorted, u_sorted))
}

/// Orthonormal basis of the numerical kernel of `a`, via the eigendecomposition
/// of a†a. The eigenvalue cutoff follows tol.rel^2 * |a|^2 but is floored at
/// the solver's own noise level so exact kernels survive rounding.
pub fn nullspace(a: &CMatrix, tol: &Tolerance) -> Vec<CMatrix> {
    if a.cols == 0 {
        return Vec::new();
    }
    if a.rows == 0 {
        return (0..a.cols).map(|i| CMatrix::basis_col(a.cols, i)).collect();
    }
    let gram = dagger(a).matmul(a).unwrap();
    let (eigs, u) = herm_eig(&gram, &Tolerance::new(1.0, tol.eig_gap).unwrap()).unwrap();
    let norm_sq = a.norm() * a.norm();
    let floor = (a.rows.max(a.cols) as f64) * 32.0 * f64::EPSILON;
    let cutoff = norm_sq * (tol.rel * tol.rel).max(floor);
    let mut basis = Vec::new();
    for (k, &lambda) in eigs.iter().enumerate() {
        if lambda <= cutoff {
            basis.push(CMatrix::from_fn(a.cols, 1, |i, _| u.get(i, k)));
        }
    }
    basis
}

/// Matrix inverse by Gauss-Jordan elimination with partial pivoting.
pub fn inverse(a: &CMatrix) -> Result<CMatrix> {
    if !a.is_square() {
        return Err(Error::ShapeMismatch {
            expected: "square matrix".into(),
            got: format!("{}x{}", a.rows, a.cols),
        });
    }
    let n = a.rows;
    let mut m = a.clone();
    let mut inv = CMatrix::identity(n);
    let scale = a.norm().max(f64::MIN_POSITIVE);
    for col in 0..n {
        let mut pivot = col;
        let mut best = m.get(col, col).norm();
        for r in (col + 1)..n {
            let v = m.get(r, col).norm();
            if v > best {
                best = v;
                pivot = r;
            }
        }
        if best <= scale * f64::EPSILON * (n as f64) * 16.0 {
            return Err(Error::Singular);
        }
        if pivot != col {
            for j in 0..n {
                let tmp = m.get(col, j);
                m.set(col, j, m.get(pivot, j));
                m.set(pivot, j, tmp);
                let tmp = inv.get(col, j);
                inv.set(col, j, inv.get(pivot, j));
                inv.set(pivot, j, tmp);
            }
        }
        let p = m.get(col, col);
        for j in 0..n {
            m.set(col, j, m.get(col, j) / p);
            inv.set(col, j, inv.get(col, j) / p);
        }
        for r in 0..n {
            if r == col {
                continue;
            }
            let f = m.get(r, col);
            if f == C_ZERO {
                continue;
            }
            for j in 0..n {
                let mv = m.get(col, j);
                let iv = inv.get(col, j);
                m.set(r, j, m.get(r, j) - f * mv);
                inv.set(r, j, inv.get(r, j) - f * iv);
            }
        }
    }
    Ok(inv)
}

/// Splits an ascending eigenvalue list into clusters separated by more than
/// `gap`. Returns index ranges into the input.
pub fn cluster_eigenvalues(eigs: &[f64], gap: f64) -> Vec<std::ops::Range<usize>> {
    let mut clusters = Vec::new();
    let mut start = 0;
    for i in 1..eigs.len() {
        if eigs[i] - eigs[i - 1] > gap {
            clusters.push(start..i);
            start = i;
        }
    }
    if !eigs.is_empty() {
        clusters.push(start..eigs.len());
    }
    clusters
}

/// Random matrix with entries uniform in the complex unit square, centred.
pub fn random_matrix(rng: &mut impl Rng, rows: usize, cols: usize) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| {
        Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5)
    })
}

pub fn random_hermitian(rng: &mut impl Rng, n: usize) -> CMatrix {
    random_matrix(rng, n, n).hermitian_part()
}

/// Haar-ish random unitary from Gram-Schmidt on a random matrix.
pub fn random_unitary(rng: &mut impl Rng, n: usize) -> CMatrix {
    loop {
        let m = random_matrix(rng, n, n);
        if let Some(q) = gram_schmidt(&m.columns()) {
            if q.len() == n {
                return CMatrix::from_columns(n, &q);
            }
        }
    }
}

/// Random orthogonal projector of the given rank.
pub fn random_projector(rng: &mut impl Rng, n: usize, rank: usize) -> CMatrix {
    assert!(rank <= n);
    let u = random_unitary(rng, n);
    let cols = u.columns();
    let mut p = CMatrix::zeros(n, n);
    for c in cols.iter().take(rank) {
        p = p.add(&c.matmul(&dagger(c)).unwrap()).unwrap();
    }
    p
}

/// Gram-Schmidt orthonormalization of column vectors; drops near-dependent
/// vectors. Returns None when given an empty input.
pub fn gram_schmidt(vecs: &[CMatrix]) -> Option<Vec<CMatrix>> {
    if vecs.is_empty() {
        return None;
    }
    let mut out: Vec<CMatrix> = Vec::new();
    for v in vecs {
        let mut w = v.clone();
        for b in &out {
            let coef = dagger(b).matmul(&w).unwrap().get(0, 0);
            w = w.sub(&b.scale(coef)).unwrap();
        }
        // second pass for numerical orthogonality
        for b in &out {
            let coef = dagger(b).matmul(&w).unwrap().get(0, 0);
            w = w.sub(&b.scale(coef)).unwrap();
        }
        let n = w.norm();
        if n > 1e-10 * v.norm().max(1.0) {
            out.push(w.scale(Complex64::new(1.0 / n, 0.0)));
        }
    }
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    #[test]
    fn kron_identities() {
        let i2 = CMatrix::identity(2);
        let i3 = CMatrix::identity(3);
        assert_eq!(kron(&i2, &i3), CMatrix::identity(6));

        let x = CMatrix::from_real(2, 2, &[0.0, 1.0, 1.0, 0.0]).unwrap();
        let s = CMatrix::from_real(1, 1, &[2.0]).unwrap();
        let expect = CMatrix::from_real(2, 2, &[0.0, 2.0, 2.0, 0.0]).unwrap();
        assert_eq!(kron(&x, &s), expect);
    }

    #[test]
    fn dagger_involution_and_conjugation() {
        let i = CMatrix::identity(3);
        assert_eq!(dagger(&i), i);
        let m = CMatrix::new(1, 1, vec![Complex64::new(0.0, 1.0)]).unwrap();
        assert_eq!(dagger(&m).get(0, 0), Complex64::new(0.0, -1.0));
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let a = random_matrix(&mut rng, 3, 5);
        assert_eq!(dagger(&dagger(&a)), a);
    }

    #[test]
    fn herm_eig_diagonal_permutation() {
        let h = CMatrix::from_real(3, 3, &[3.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 2.0]).unwrap();
        let (eigs, u) = herm_eig(&h, &tol()).unwrap();
        assert_eq!(eigs, vec![1.0, 2.0, 3.0]);
        // Columns of u are a permutation of the basis.
        for col in u.columns() {
            let nonzero = col.entries().iter().filter(|z| z.norm() > 0.5).count();
            assert_eq!(nonzero, 1);
        }
    }

    #[test]
    fn herm_eig_pauli_x_by_hand() {
        // Characteristic polynomial of [[0,1],[1,0]] is l^2 - 1: eigenvalues -1, 1,
        // eigenvectors (1, -1)/sqrt(2) and (1, 1)/sqrt(2).
        let h = CMatrix::from_real(2, 2, &[0.0, 1.0, 1.0, 0.0]).unwrap();
        let (eigs, u) = herm_eig(&h, &tol()).unwrap();
        assert!((eigs[0] + 1.0).abs() < 1e-14);
        assert!((eigs[1] - 1.0).abs() < 1e-14);
        let r = 1.0 / 2.0_f64.sqrt();
        for (j, expect) in [[r, -r], [r, r]].iter().enumerate() {
            let col = u.columns()[j].clone();
            // fix the global phase by the first entry
            let phase = col.get(0, 0) / col.get(0, 0).norm();
            let col = col.scale(phase.conj());
            let want = CMatrix::from_real(2, 1, expect).unwrap();
            let diff = col.sub(&want).unwrap().norm().min(col.add(&want).unwrap().norm());
            assert!(diff < 1e-12, "column {j} mismatch: {diff}");
        }
    }

    #[test]
    fn herm_eig_reconstruction_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for &n in &[6usize, 17, 64] {
            let h = random_hermitian(&mut rng, n);
            let (eigs, u) = herm_eig(&h, &tol()).unwrap();
            let lam = CMatrix::from_fn(n, n, |i, j| {
                if i == j {
                    Complex64::new(eigs[i], 0.0)
                } else {
                    C_ZERO
                }
            });
            let rec = u.matmul(&lam).unwrap().matmul(&dagger(&u)).unwrap();
            let rel = rec.sub(&h).unwrap().norm() / h.norm();
            assert!(rel < 1e-12, "n={n} residual {rel}");
            let unit = dagger(&u).matmul(&u).unwrap();
            assert!(unit.sub(&CMatrix::identity(n)).unwrap().norm() < 1e-12);
        }
    }

    #[test]
    fn nullspace_cases() {
        let z = CMatrix::zeros(2, 2);
        assert_eq!(nullspace(&z, &tol()).len(), 2);

        let i3 = CMatrix::identity(3);
        assert!(nullspace(&i3, &tol()).is_empty());

        let a = CMatrix::from_real(2, 2, &[1.0, 1.0, 1.0, 1.0]).unwrap();
        let basis = nullspace(&a, &tol());
        assert_eq!(basis.len(), 1);
        let v = &basis[0];
        // proportional to (1, -1)
        let sum = v.get(0, 0) + v.get(1, 0);
        assert!(sum.norm() < 1e-12);
        assert!((v.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn nullspace_orthonormal() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        // random rank-2 4x4 matrix: two-dimensional kernel
        let b = random_matrix(&mut rng, 2, 4);
        let a = dagger(&b).matmul(&b).unwrap();
        let basis = nullspace(&a, &tol());
        assert_eq!(basis.len(), 2);
        for (i, v) in basis.iter().enumerate() {
            for (j, w) in basis.iter().enumerate() {
                let ip = dagger(v).matmul(w).unwrap().get(0, 0);
                let want = if i == j { C_ONE } else { C_ZERO };
                assert!((ip - want).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn approx_eq_cases() {
        let i = CMatrix::identity(2);
        let c = approx_eq(&i, &i, &tol()).unwrap();
        assert!(c.pass);
        assert_eq!(c.residual, 0.0);

        let bumped = i.add(&CMatrix::identity(2).scale(Complex64::new(1e-15, 0.0))).unwrap();
        assert!(approx_eq(&i, &bumped, &tol()).unwrap().pass);

        let two = i.scale(Complex64::new(2.0, 0.0));
        let c = approx_eq(&i, &two, &tol()).unwrap();
        assert!(!c.pass);
        assert!((c.residual - i.norm()).abs() < 1e-15);

        assert!(approx_eq(&i, &CMatrix::identity(3), &tol()).is_err());
    }

    #[test]
    fn inverse_roundtrip() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let a = random_matrix(&mut rng, 5, 5);
        let inv = inverse(&a).unwrap();
        let prod = a.matmul(&inv).unwrap();
        assert!(prod.sub(&CMatrix::identity(5)).unwrap().norm() < 1e-10);
        assert!(inverse(&CMatrix::zeros(3, 3)).is_err());
    }

    #[test]
    fn zero_dimensional_edge_cases() {
        let e = CMatrix::zeros(0, 0);
        let (eigs, _) = herm_eig(&e, &tol()).unwrap();
        assert!(eigs.is_empty());
        let v = CMatrix::zeros(3, 0);
        let w = CMatrix::zeros(0, 2);
        let p = v.matmul(&w).unwrap();
        assert_eq!((p.rows, p.cols), (3, 2));
        assert_eq!(p, CMatrix::zeros(3, 2));
        assert_eq!(kron(&e, &CMatrix::identity(2)).rows, 0);
    }

    /// Dyadic-valued matrices keep every product and sum exact, which lets the
    /// flattening-convention identities be asserted bitwise.
    fn dyadic_matrix(seed: u64, rows: usize, cols: usize) -> CMatrix {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        CMatrix::from_fn(rows, cols, |_, _| {
            Complex64::new(
                (rand::Rng::gen_range(&mut rng, -8i32..=8) as f64) / 4.0,
                (rand::Rng::gen_range(&mut rng, -8i32..=8) as f64) / 4.0,
            )
        })
    }

    proptest! {
        #[test]
        fn kron_associativity_bitwise(seed in 0u64..500) {
            let a = dyadic_matrix(seed, 2, 3);
            let b = dyadic_matrix(seed ^ 0xabc, 3, 2);
            let c = dyadic_matrix(seed ^ 0xdef, 2, 2);
            prop_assert_eq!(kron(&kron(&a, &b), &c), kron(&a, &kron(&b, &c)));
        }

        #[test]
        fn kron_mixed_product(seed in 0u64..200) {
            // (a (x) b)(c (x) d) == (a c) (x) (b d), against direct multiplication
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let a = random_matrix(&mut rng, 2, 2);
            let b = random_matrix(&mut rng, 2, 2);
            let c = random_matrix(&mut rng, 2, 2);
            let d = random_matrix(&mut rng, 2, 2);
            let lhs = kron(&a, &b).matmul(&kron(&c, &d)).unwrap();
            let rhs = kron(&a.matmul(&c).unwrap(), &b.matmul(&d).unwrap());
            prop_assert!(approx_eq(&lhs, &rhs, &Tolerance::default()).unwrap().pass);
        }

        #[test]
        fn dagger_is_involutive(seed in 0u64..200) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let a = random_matrix(&mut rng, 3, 4);
            prop_assert_eq!(dagger(&dagger(&a)), a);
        }
    }
}
