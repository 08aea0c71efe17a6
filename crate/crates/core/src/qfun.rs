//! Quantum functions between finite quantum sets.
//!
//! A quantum function A -> B is a pair (H, P) with P: H (x) A -> B (x) H.
//! The matrix is stored with the domain ordered (H, A) and the codomain
//! ordered (B, H); row index (b, h') flattens as b * d + h', column index
//! (h, a) as h * nA + a.

use crate::error::{Error, Result};
use crate::frobenius::{
    block_reps, canonical_involution, classical_algebra, matrix_algebra, Ssfa,
};
use crate::tensor::{
    approx_eq, dagger, inverse, kron, CMatrix, Check, Tolerance, C_ONE, C_ZERO,
};
use num_complex::Complex64;

/// A quantum function (H, P): source -> target.
#[derive(Debug, Clone)]
pub struct QuantumFunction {
    pub source: Ssfa,
    pub target: Ssfa,
    pub h_dim: usize,
    pub matrix: CMatrix,
}

/// Verification report for the three quantum-function equations.
#[derive(Debug, Clone)]
pub struct QfunReport {
    /// Comultiplication pull-through.
    pub qf1: Check,
    /// Counit pull-through.
    pub qf2: Check,
    /// Rotated-adjoint condition.
    pub qf3: Check,
}

impl QfunReport {
    pub fn passed(&self) -> bool {
        self.qf1.pass && self.qf2.pass && self.qf3.pass
    }
}

/// Verification report for the two additional quantum-bijection equations.
#[derive(Debug, Clone)]
pub struct QbijReport {
    /// Multiplication pull-through.
    pub qb1: Check,
    /// Unit pull-through.
    pub qb2: Check,
}

impl QbijReport {
    pub fn passed(&self) -> bool {
        self.qb1.pass && self.qb2.pass
    }
}

/// Grid of projectors P[x][y] on a shared Hilbert space; the classical-
/// endpoint view of a quantum function.
#[derive(Debug, Clone)]
pub struct ProjectorFamily {
    pub x_size: usize,
    pub y_size: usize,
    pub h_dim: usize,
    pub projectors: Vec<Vec<CMatrix>>,
}

/// A quantum element of `target`: a quantum function from the one-element set.
pub type QuantumElement = QuantumFunction;

impl QuantumFunction {
    pub fn new(source: Ssfa, target: Ssfa, h_dim: usize, matrix: CMatrix) -> Result<Self> {
        let rows = target.dim() * h_dim;
        let cols = h_dim * source.dim();
        if matrix.rows != rows || matrix.cols != cols {
            return Err(Error::ShapeMismatch {
                expected: format!("{rows}x{cols}"),
                got: format!("{}x{}", matrix.rows, matrix.cols),
            });
        }
        Ok(QuantumFunction {
            source,
            target,
            h_dim,
            matrix,
        })
    }

    pub fn approx_same(&self, other: &QuantumFunction, tol: &Tolerance) -> bool {
        self.h_dim == other.h_dim
            && self.source.approx_same(&other.source, tol)
            && self.target.approx_same(&other.target, tol)
            && approx_eq(&self.matrix, &other.matrix, tol)
                .map(|c| c.pass)
                .unwrap_or(false)
    }

    /// Conjugates the underlying Hilbert space by a unitary; an invertible
    /// intertwiner, so every verification verdict is preserved.
    pub fn conjugate_by(&self, v: &CMatrix) -> Result<QuantumFunction> {
        if v.rows != self.h_dim || v.cols != self.h_dim {
            return Err(Error::ShapeMismatch {
                expected: format!("{0}x{0}", self.h_dim),
                got: format!("{}x{}", v.rows, v.cols),
            });
        }
        let nb = self.target.dim();
        let na = self.source.dim();
        let m = kron(&CMatrix::identity(nb), v)
            .matmul(&self.matrix)?
            .matmul(&kron(&dagger(v), &CMatrix::identity(na)))?;
        QuantumFunction::new(self.source.clone(), self.target.clone(), self.h_dim, m)
    }
}

/// The identity quantum function on an algebra: h_dim 1, identity matrix.
pub fn identity_qfun(a: &Ssfa) -> QuantumFunction {
    QuantumFunction {
        source: a.clone(),
        target: a.clone(),
        h_dim: 1,
        matrix: CMatrix::identity(a.dim()),
    }
}

/// Checks the three quantum-function equations.
pub fn verify_qfun(f: &QuantumFunction, tol: &Tolerance) -> Result<QfunReport> {
    let na = f.source.dim();
    let nb = f.target.dim();
    let d = f.h_dim;
    let p = &f.matrix;
    let ia = CMatrix::identity(na);
    let ib = CMatrix::identity(nb);
    let ih = CMatrix::identity(d);
    let delta_a = f.source.comult();
    let delta_b = f.target.comult();
    let eps_a = f.source.counit();
    let eps_b = f.target.counit();

    // QF1: (delta_B (x) 1_H) P == (1_B (x) P)(P (x) 1_A)(1_H (x) delta_A)
    let lhs = kron(&delta_b, &ih).matmul(p)?;
    let rhs = kron(&ib, p)
        .matmul(&kron(p, &ia))?
        .matmul(&kron(&ih, &delta_a))?;
    let qf1 = approx_eq(&lhs, &rhs, tol)?;

    // QF2: (eps_B (x) 1_H) P == 1_H (x) eps_A
    let lhs = kron(&eps_b, &ih).matmul(p)?;
    let rhs = kron(&ih, &eps_a);
    let qf2 = approx_eq(&lhs, &rhs, tol)?;

    // QF3: P† == (cap_B (x) 1_{H(x)A})(1_B (x) P (x) 1_A)(1_{B(x)H} (x) cup_A)
    let cup_a = f.source.cup();
    let cap_b = f.target.cap();
    let lhs = dagger(p);
    let rhs = kron(&cap_b, &kron(&ih, &ia))
        .matmul(&kron(&ib, &kron(p, &ia)))?
        .matmul(&kron(&kron(&ib, &ih), &cup_a))?;
    let qf3 = approx_eq(&lhs, &rhs, tol)?;

    Ok(QfunReport { qf1, qf2, qf3 })
}

/// Checks the two additional bijection equations. Requires a verified
/// quantum function.
pub fn verify_qbij(f: &QuantumFunction, tol: &Tolerance) -> Result<QbijReport> {
    let qf = verify_qfun(f, tol)?;
    if !qf.passed() {
        return Err(Error::NotQuantumFunction(format!(
            "quantum-function equations fail (qf1 {:e}, qf2 {:e}, qf3 {:e})",
            qf.qf1.residual, qf.qf2.residual, qf.qf3.residual
        )));
    }
    qbij_equations(f, tol)
}

/// The bijection equations alone, without the quantum-function precondition.
pub(crate) fn qbij_equations(f: &QuantumFunction, tol: &Tolerance) -> Result<QbijReport> {
    let na = f.source.dim();
    let nb = f.target.dim();
    let d = f.h_dim;
    let p = &f.matrix;
    let ia = CMatrix::identity(na);
    let ib = CMatrix::identity(nb);
    let ih = CMatrix::identity(d);

    // QB1: P (1_H (x) m_A) == (m_B (x) 1_H)(1_B (x) P)(P (x) 1_A)
    let lhs = p.matmul(&kron(&ih, f.source.mult()))?;
    let rhs = kron(f.target.mult(), &ih)
        .matmul(&kron(&ib, p))?
        .matmul(&kron(p, &ia))?;
    let qb1 = approx_eq(&lhs, &rhs, tol)?;

    // QB2: P (1_H (x) u_A) == u_B (x) 1_H
    let lhs = p.matmul(&kron(&ih, f.source.unit()))?;
    let rhs = kron(f.target.unit(), &ih);
    let qb2 = approx_eq(&lhs, &rhs, tol)?;

    Ok(QbijReport { qb1, qb2 })
}

/// Unitarity of the underlying linear map: P†P == 1 and PP† == 1.
pub fn is_unitary(f: &QuantumFunction) -> Check {
    if f.matrix.rows != f.matrix.cols {
        return Check::new(false, f64::INFINITY);
    }
    let tol = Tolerance::default();
    let n = f.matrix.rows;
    let id = CMatrix::identity(n);
    let a = dagger(&f.matrix).matmul(&f.matrix).unwrap();
    let b = f.matrix.matmul(&dagger(&f.matrix)).unwrap();
    let c1 = approx_eq(&a, &id, &tol).unwrap();
    let c2 = approx_eq(&b, &id, &tol).unwrap();
    Check::new(c1.pass && c2.pass, c1.residual.max(c2.residual))
}

/// Bi-invertibility: P is invertible and the partial transpose of its inverse
/// (H legs bent with plain cups and caps) is inverse to the partial transpose
/// of P itself. Singularity of P simply reports false.
pub fn bi_invertible(f: &QuantumFunction, tol: &Tolerance) -> bool {
    if f.matrix.rows != f.matrix.cols {
        return false;
    }
    let p_inv = match inverse(&f.matrix) {
        Ok(m) => m,
        Err(_) => return false,
    };
    let d = f.h_dim;
    let na = f.source.dim();
    let nb = f.target.dim();
    // Partial transpose on the H legs of P^{-1}: B (x) H -> H (x) A gives
    // u[(i, a), (k, b)] = P^{-1}[(k, a), (b, i)].
    let u = CMatrix::from_fn(d * na, d * nb, |row, col| {
        let i = row / na;
        let a = row % na;
        let k = col / nb;
        let b = col % nb;
        p_inv.get(k * na + a, b * d + i)
    });
    // Partial transpose on the H legs of P itself:
    // v[(k, b), (i, a)] = P[(b, i), (k, a)].
    let v = CMatrix::from_fn(d * nb, d * na, |row, col| {
        let k = row / nb;
        let b = row % nb;
        let i = col / na;
        let a = col % na;
        f.matrix.get(b * d + i, k * na + a)
    });
    let uv = u.matmul(&v).unwrap();
    let vu = v.matmul(&u).unwrap();
    let c1 = approx_eq(&uv, &CMatrix::identity(uv.rows), tol).unwrap();
    let c2 = approx_eq(&vu, &CMatrix::identity(vu.rows), tol).unwrap();
    c1.pass && c2.pass
}

/// Composite g . f with underlying space H_g (x) H_f and matrix
/// (Q (x) 1_{H_f})(1_{H_g} (x) P).
pub fn compose(g: &QuantumFunction, f: &QuantumFunction, tol: &Tolerance) -> Result<QuantumFunction> {
    if !f.target.approx_same(&g.source, tol) {
        return Err(Error::TypeMismatch(
            "target of the first function differs from source of the second".into(),
        ));
    }
    let m = kron(&g.matrix, &CMatrix::identity(f.h_dim))
        .matmul(&kron(&CMatrix::identity(g.h_dim), &f.matrix))?;
    QuantumFunction::new(
        f.source.clone(),
        g.target.clone(),
        g.h_dim * f.h_dim,
        m,
    )
}

/// The dagger dual (H*, P-bar): B -> A of a quantum bijection, with
/// components P-bar[(a, j), (i, b)] = conj(P[(b, j), (i, a)]). The standard
/// cups and caps on H then witness the duality; see [`duality_residual`].
pub fn dagger_dual(f: &QuantumFunction, tol: &Tolerance) -> Result<QuantumFunction> {
    let qb = verify_qbij(f, tol)?;
    if !qb.passed() {
        return Err(Error::NotBijection(format!(
            "bijection equations fail (qb1 {:e}, qb2 {:e})",
            qb.qb1.residual, qb.qb2.residual
        )));
    }
    Ok(dagger_dual_unchecked(f))
}

pub(crate) fn dagger_dual_unchecked(f: &QuantumFunction) -> QuantumFunction {
    let d = f.h_dim;
    let na = f.source.dim();
    let nb = f.target.dim();
    let m = CMatrix::from_fn(na * d, d * nb, |row, col| {
        let a = row / d;
        let j = row % d;
        let i = col / nb;
        let b = col % nb;
        f.matrix.get(b * d + j, i * na + a).conj()
    });
    QuantumFunction {
        source: f.target.clone(),
        target: f.source.clone(),
        h_dim: d,
        matrix: m,
    }
}

/// Checks the four duality triangle identities between `f` and `dual`
/// with the standard cups and caps on H. Returns the largest residual.
pub fn duality_residual(f: &QuantumFunction, dual: &QuantumFunction, tol: &Tolerance) -> Result<f64> {
    let d = f.h_dim;
    if dual.h_dim != d {
        return Err(Error::TypeMismatch("dual must share the Hilbert space dimension".into()));
    }
    let na = f.source.dim();
    let nb = f.target.dim();
    // cup: C -> H (x) H* and its mate, both represented by vec(1_H).
    let cup = CMatrix::from_fn(d * d, 1, |r, _| if r / d == r % d { C_ONE } else { C_ZERO });
    let cap = dagger(&cup);
    let ia = CMatrix::identity(na);
    let ib = CMatrix::identity(nb);

    // unit of the right duality: an intertwiner 1_A -> dual . f
    let df = compose(dual, f, tol)?;
    let lhs = df.matrix.matmul(&kron(&cup, &ia))?;
    let rhs = kron(&ia, &cup).matmul(&ia)?;
    let r1 = approx_eq(&lhs, &rhs, tol)?.residual;

    // counit of the right duality: an intertwiner f . dual -> 1_B
    let fd = compose(f, dual, tol)?;
    let lhs = ib.matmul(&kron(&cap, &ib))?;
    let rhs = kron(&ib, &cap).matmul(&fd.matrix)?;
    let r2 = approx_eq(&lhs, &rhs, tol)?.residual;

    // the mirrored pair witnesses the left duality
    let lhs = fd.matrix.matmul(&kron(&cup, &ib))?;
    let rhs = kron(&ib, &cup).matmul(&ib)?;
    let r3 = approx_eq(&lhs, &rhs, tol)?.residual;

    let lhs = ia.matmul(&kron(&cap, &ia))?;
    let rhs = kron(&ia, &cap).matmul(&df.matrix)?;
    let r4 = approx_eq(&lhs, &rhs, tol)?.residual;

    Ok(r1.max(r2).max(r3).max(r4))
}

impl ProjectorFamily {
    pub fn new(projectors: Vec<Vec<CMatrix>>) -> Result<Self> {
        let x_size = projectors.len();
        if x_size == 0 {
            return Err(Error::InvalidArgument("empty projector grid".into()));
        }
        let y_size = projectors[0].len();
        if y_size == 0 || projectors.iter().any(|row| row.len() != y_size) {
            return Err(Error::InvalidArgument("ragged projector grid".into()));
        }
        let h_dim = projectors[0][0].rows;
        for row in &projectors {
            for p in row {
                if p.rows != h_dim || p.cols != h_dim {
                    return Err(Error::ShapeMismatch {
                        expected: format!("{h_dim}x{h_dim}"),
                        got: format!("{}x{}", p.rows, p.cols),
                    });
                }
            }
        }
        Ok(ProjectorFamily {
            x_size,
            y_size,
            h_dim,
            projectors,
        })
    }

    /// Row conditions: every entry a self-adjoint idempotent, rows orthogonal
    /// and complete.
    pub fn check_rows(&self, tol: &Tolerance) -> Check {
        let mut worst: f64 = 0.0;
        let mut pass = true;
        let id = CMatrix::identity(self.h_dim);
        for x in 0..self.x_size {
            let mut sum = CMatrix::zeros(self.h_dim, self.h_dim);
            for y1 in 0..self.y_size {
                let p = &self.projectors[x][y1];
                let c = approx_eq(&dagger(p), p, tol).unwrap();
                pass &= c.pass;
                worst = worst.max(c.residual);
                for y2 in 0..self.y_size {
                    let prod = p.matmul(&self.projectors[x][y2]).unwrap();
                    let expect = if y1 == y2 {
                        p.clone()
                    } else {
                        CMatrix::zeros(self.h_dim, self.h_dim)
                    };
                    let c = approx_eq(&prod, &expect, tol).unwrap();
                    pass &= c.pass;
                    worst = worst.max(c.residual);
                }
                sum = sum.add(p).unwrap();
            }
            let c = approx_eq(&sum, &id, tol).unwrap();
            pass &= c.pass;
            worst = worst.max(c.residual);
        }
        Check::new(pass, worst)
    }

    /// Column conditions: columns orthogonal and complete.
    pub fn check_cols(&self, tol: &Tolerance) -> Check {
        let mut worst: f64 = 0.0;
        let mut pass = true;
        let id = CMatrix::identity(self.h_dim);
        for y in 0..self.y_size {
            let mut sum = CMatrix::zeros(self.h_dim, self.h_dim);
            for x1 in 0..self.x_size {
                for x2 in 0..self.x_size {
                    let prod = self.projectors[x1][y]
                        .matmul(&self.projectors[x2][y])
                        .unwrap();
                    let expect = if x1 == x2 {
                        self.projectors[x1][y].clone()
                    } else {
                        CMatrix::zeros(self.h_dim, self.h_dim)
                    };
                    let c = approx_eq(&prod, &expect, tol).unwrap();
                    pass &= c.pass;
                    worst = worst.max(c.residual);
                }
                sum = sum.add(&self.projectors[x1][y]).unwrap();
            }
            let c = approx_eq(&sum, &id, tol).unwrap();
            pass &= c.pass;
            worst = worst.max(c.residual);
        }
        Check::new(pass, worst)
    }
}

/// Lifts a projector family to a quantum function between classical sets:
/// P(h (x) e_x) = sum_y e_y (x) P[x][y] h.
pub fn family_to_qfun(p: &ProjectorFamily, tol: &Tolerance) -> Result<QuantumFunction> {
    let rows = p.check_rows(tol);
    if !rows.pass {
        return Err(Error::RowConditionViolated(format!(
            "row residual {:e}",
            rows.residual
        )));
    }
    let source = classical_algebra(p.x_size)?;
    let target = classical_algebra(p.y_size)?;
    let d = p.h_dim;
    let m = CMatrix::from_fn(p.y_size * d, d * p.x_size, |row, col| {
        let y = row / d;
        let hp = row % d;
        let h = col / p.x_size;
        let x = col % p.x_size;
        p.projectors[x][y].get(hp, h)
    });
    QuantumFunction::new(source, target, d, m)
}

/// Extracts the projector grid of a quantum function between classical sets:
/// P[x][y] = (<e_y| (x) 1_H) P (1_H (x) |e_x>).
pub fn qfun_to_family(f: &QuantumFunction, tol: &Tolerance) -> Result<ProjectorFamily> {
    if !f.source.is_classical(tol) || !f.target.is_classical(tol) {
        return Err(Error::NotClassicalEndpoints);
    }
    let d = f.h_dim;
    let nx = f.source.dim();
    let ny = f.target.dim();
    let grid: Vec<Vec<CMatrix>> = (0..nx)
        .map(|x| {
            (0..ny)
                .map(|y| {
                    CMatrix::from_fn(d, d, |hp, h| f.matrix.get(y * d + hp, h * nx + x))
                })
                .collect()
        })
        .collect();
    ProjectorFamily::new(grid)
}

/// Builds a quantum element of `a` from a unital *-representation, given as
/// the images of the basis vectors. The slice operators of the element are
/// the adjoints K_c = rep(e_c)†.
pub fn module_to_element(a: &Ssfa, rep: &[CMatrix], tol: &Tolerance) -> Result<QuantumElement> {
    let n = a.dim();
    if rep.len() != n {
        return Err(Error::ShapeMismatch {
            expected: format!("{n} representation matrices"),
            got: format!("{}", rep.len()),
        });
    }
    let d = rep[0].rows;
    if rep.iter().any(|m| m.rows != d || m.cols != d) {
        return Err(Error::NotRepresentation("images are not square of equal size".into()));
    }
    let apply = |x: &CMatrix| -> CMatrix {
        let mut out = CMatrix::zeros(d, d);
        for c in 0..n {
            out = out.add(&rep[c].scale(x.get(c, 0))).unwrap();
        }
        out
    };
    // unital
    let u_img = apply(a.unit());
    let c = approx_eq(&u_img, &CMatrix::identity(d), tol)?;
    if !c.pass {
        return Err(Error::NotRepresentation(format!(
            "unit does not map to the identity (residual {:e})",
            c.residual
        )));
    }
    // multiplicative on basis pairs
    for x in 0..n {
        for y in 0..n {
            let mut prod_vec = CMatrix::zeros(n, 1);
            for r in 0..n {
                prod_vec.set(r, 0, a.mult().get(r, x * n + y));
            }
            let lhs = apply(&prod_vec);
            let rhs = rep[x].matmul(&rep[y])?;
            let c = approx_eq(&lhs, &rhs, tol)?;
            if !c.pass {
                return Err(Error::NotRepresentation(format!(
                    "not multiplicative at basis pair ({x}, {y}) (residual {:e})",
                    c.residual
                )));
            }
        }
    }
    // *-compatible with the canonical involution
    for x in 0..n {
        let star = canonical_involution(a, &CMatrix::basis_col(n, x))?;
        let lhs = apply(&star);
        let rhs = dagger(&rep[x]);
        let c = approx_eq(&lhs, &rhs, tol)?;
        if !c.pass {
            return Err(Error::NotRepresentation(format!(
                "involution is not respected at basis vector {x} (residual {:e})",
                c.residual
            )));
        }
    }

    let source = classical_algebra(1)?;
    let m = CMatrix::from_fn(n * d, d, |row, col| {
        let cidx = row / d;
        let hp = row % d;
        rep[cidx].get(col, hp).conj()
    });
    let element = QuantumFunction::new(source, a.clone(), d, m)?;
    let rep_check = verify_qfun(&element, tol)?;
    if !rep_check.passed() {
        return Err(Error::PostconditionFailure(format!(
            "constructed element fails the quantum-function equations \
             (qf1 {:e}, qf2 {:e}, qf3 {:e})",
            rep_check.qf1.residual, rep_check.qf2.residual, rep_check.qf3.residual
        )));
    }
    Ok(element)
}

/// Slice operators K_c = (<e_c| (x) 1_H) Q of a quantum element.
pub fn slice_operators(q: &QuantumElement) -> Vec<CMatrix> {
    let n = q.target.dim();
    let d = q.h_dim;
    (0..n)
        .map(|c| CMatrix::from_fn(d, d, |hp, h| q.matrix.get(c * d + hp, h)))
        .collect()
}

/// One simple quantum element per block of the algebra; carrier dimensions
/// are the block sizes.
pub fn enumerate_simple_elements(a: &Ssfa, seed: u64, tol: &Tolerance) -> Result<Vec<QuantumElement>> {
    let blocks = block_reps(a, seed, tol)?;
    blocks
        .reps
        .iter()
        .map(|rep| module_to_element(a, rep, tol))
        .collect()
}

/// Rebuilds the multiplication and unit of an algebra from a complete list of
/// pairwise non-isomorphic simple quantum elements.
///
/// With K^i_c the slice operators and n_i the carrier dimensions, the
/// orthonormal-basis coefficients are
///   <e_c, e_a e_b> = sum_i n_i Tr(K^i_c (K^i_a)† (K^i_b)†)
///   <e_c, u>       = sum_i n_i Tr(K^i_c).
pub fn reconstruct_algebra(elements: &[QuantumElement]) -> Result<(CMatrix, CMatrix)> {
    if elements.is_empty() {
        return Err(Error::InconsistentElements("empty element list".into()));
    }
    let n = elements[0].target.dim();
    if elements.iter().any(|e| e.target.dim() != n || e.source.dim() != 1) {
        return Err(Error::InconsistentElements(
            "elements must share the codomain algebra".into(),
        ));
    }
    let total: usize = elements.iter().map(|e| e.h_dim * e.h_dim).sum();
    if total != n {
        return Err(Error::InconsistentElements(format!(
            "carrier dimensions square-sum to {total}, expected {n}"
        )));
    }
    let slices: Vec<Vec<CMatrix>> = elements.iter().map(slice_operators).collect();
    let dims: Vec<f64> = elements.iter().map(|e| e.h_dim as f64).collect();

    let mut mult = CMatrix::zeros(n, n * n);
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                let mut acc = C_ZERO;
                for (i, ks) in slices.iter().enumerate() {
                    let prod = ks[c]
                        .matmul(&dagger(&ks[a]))
                        .unwrap()
                        .matmul(&dagger(&ks[b]))
                        .unwrap();
                    acc += prod.trace() * dims[i];
                }
                mult.set(c, a * n + b, acc);
            }
        }
    }
    let mut unit = CMatrix::zeros(n, 1);
    for c in 0..n {
        let mut acc = C_ZERO;
        for (i, ks) in slices.iter().enumerate() {
            acc += ks[c].trace() * dims[i];
        }
        unit.set(c, 0, acc);
    }
    Ok((mult, unit))
}

/// Builds the quantum bijection Mat_n -> [n^2] induced by a unitary error
/// basis, by stacking the conjugation comodules over the n^2-element set and
/// taking the dagger dual.
pub fn ueb_to_bijection(unitaries: &[CMatrix], tol: &Tolerance) -> Result<QuantumFunction> {
    let count = unitaries.len();
    let n = (count as f64).sqrt().round() as usize;
    if n * n != count || n == 0 {
        return Err(Error::NotUeb(format!(
            "need n^2 unitaries, got {count}"
        )));
    }
    for u in unitaries {
        if u.rows != n || u.cols != n {
            return Err(Error::NotUeb(format!(
                "expected {n}x{n} matrices, got {}x{}",
                u.rows, u.cols
            )));
        }
    }
    for (i, ui) in unitaries.iter().enumerate() {
        for (j, uj) in unitaries.iter().enumerate() {
            let ip = dagger(ui).matmul(uj)?.trace();
            let expect = if i == j {
                Complex64::new(n as f64, 0.0)
            } else {
                C_ZERO
            };
            if (ip - expect).norm() > tol.rel.max(1e-9) * (n as f64) {
                return Err(Error::NotUeb(format!(
                    "trace orthogonality fails at pair ({i}, {j})"
                )));
            }
        }
    }

    let algebra = matrix_algebra(n)?;
    let dim = n * n;
    let rt = (n as f64).sqrt();
    // Defining irrep of the normalized basis: v_jk acts as e_jk / sqrt(n).
    let defining: Vec<CMatrix> = (0..dim)
        .map(|c| {
            let (j, k) = (c / n, c % n);
            let mut m = CMatrix::zeros(n, n);
            m.set(j, k, Complex64::new(1.0 / rt, 0.0));
            m
        })
        .collect();
    let mut slices_per_point: Vec<Vec<CMatrix>> = Vec::with_capacity(dim);
    for u in unitaries {
        let rep: Vec<CMatrix> = defining
            .iter()
            .map(|m| u.matmul(m).unwrap().matmul(&dagger(u)).unwrap())
            .collect();
        let element = module_to_element(&algebra, &rep, tol)?;
        slices_per_point.push(slice_operators(&element));
    }

    // Quantum function [n^2] -> Mat_n: P(h (x) e_x) = sum_a e_a (x) K^x_a h.
    let source = classical_algebra(dim)?;
    let m = CMatrix::from_fn(dim * n, n * dim, |row, col| {
        let a = row / n;
        let hp = row % n;
        let h = col / dim;
        let x = col % dim;
        slices_per_point[x][a].get(hp, h)
    });
    let forward = QuantumFunction::new(source, algebra, n, m)?;
    let qb = verify_qbij(&forward, tol)?;
    if !qb.passed() {
        return Err(Error::PostconditionFailure(format!(
            "stacked comodules do not form a bijection (qb1 {:e}, qb2 {:e})",
            qb.qb1.residual, qb.qb2.residual
        )));
    }
    Ok(dagger_dual_unchecked(&forward))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{classical_fn, latin3_family, pauli_basis, qls4_family, shift_multiply_basis};
    use crate::frobenius::direct_sum_algebra;
    use crate::tensor::{random_matrix, random_unitary};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn identity_verifies_with_zero_residual() {
        let a = matrix_algebra(2).unwrap();
        let f = identity_qfun(&a);
        let r = verify_qfun(&f, &tol()).unwrap();
        assert!(r.passed());
        assert_eq!(r.qf1.residual, 0.0);
        assert_eq!(r.qf2.residual, 0.0);
        let b = verify_qbij(&f, &tol()).unwrap();
        assert!(b.passed());
    }

    #[test]
    fn classical_endpoint_equivalence() {
        // verify_qfun passes iff the extracted grid is a family of
        // self-adjoint projectors with complete orthogonal rows.
        let qls = family_to_qfun(&qls4_family(), &tol()).unwrap();
        assert!(verify_qfun(&qls, &tol()).unwrap().passed());
        let fam = qfun_to_family(&qls, &tol()).unwrap();
        assert!(fam.check_rows(&tol()).pass);

        // break a row: scale one projector
        let mut bad = qls4_family();
        bad.projectors[1][2] = bad.projectors[1][2].scale(c(0.5, 0.0));
        let m = {
            let p = &bad;
            let d = p.h_dim;
            CMatrix::from_fn(p.y_size * d, d * p.x_size, |row, col| {
                let y = row / d;
                let hp = row % d;
                let h = col / p.x_size;
                let x = col % p.x_size;
                p.projectors[x][y].get(hp, h)
            })
        };
        let bad_qfun = QuantumFunction::new(
            classical_algebra(4).unwrap(),
            classical_algebra(4).unwrap(),
            4,
            m,
        )
        .unwrap();
        assert!(!verify_qfun(&bad_qfun, &tol()).unwrap().passed());
        assert!(!qfun_to_family(&bad_qfun, &tol()).unwrap().check_rows(&tol()).pass);
    }

    #[test]
    fn random_matrix_fails_verification() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let a = classical_algebra(3).unwrap();
        let f = QuantumFunction::new(
            a.clone(),
            a.clone(),
            2,
            random_matrix(&mut rng, 6, 6),
        )
        .unwrap();
        let r = verify_qfun(&f, &tol()).unwrap();
        assert!(!r.passed());
        assert!(r.qf1.residual > 1e-3);
    }

    #[test]
    fn permutations_are_bijections() {
        let f = classical_fn(&[2, 0, 1], 3);
        assert!(verify_qbij(&f, &tol()).unwrap().passed());
        assert!(is_unitary(&f).pass);
        assert!(bi_invertible(&f, &tol()));
    }

    #[test]
    fn qls_is_a_bijection() {
        let f = family_to_qfun(&qls4_family(), &tol()).unwrap();
        assert!(verify_qbij(&f, &tol()).unwrap().passed());
        assert!(is_unitary(&f).pass);
        assert!(bi_invertible(&f, &tol()));
        // column conditions hold as well
        let fam = qfun_to_family(&f, &tol()).unwrap();
        assert!(fam.check_cols(&tol()).pass);
    }

    #[test]
    fn broken_column_fails_qb2() {
        // A family with valid rows but an invalid column: constant function
        // viewed as a 1-dim family.
        let f = classical_fn(&[0, 0], 2);
        assert!(verify_qfun(&f, &tol()).unwrap().passed());
        let b = verify_qbij(&f, &tol()).unwrap();
        assert!(!b.qb2.pass);
        assert!(!is_unitary(&f).pass);
        assert!(!bi_invertible(&f, &tol()));
    }

    #[test]
    fn compose_with_identity_is_bitwise() {
        let f = family_to_qfun(&latin3_family(), &tol()).unwrap();
        let idl = identity_qfun(&f.target);
        let idr = identity_qfun(&f.source);
        let left = compose(&idl, &f, &tol()).unwrap();
        let right = compose(&f, &idr, &tol()).unwrap();
        assert_eq!(left.matrix, f.matrix);
        assert_eq!(right.matrix, f.matrix);
    }

    #[test]
    fn composition_matches_kleisli_formula() {
        // (Q . P)_{x,z} == sum_y Q[y][z] (x) P[x][y] on classical endpoints
        let p = latin3_family();
        let q = latin3_family();
        let fp = family_to_qfun(&p, &tol()).unwrap();
        let fq = family_to_qfun(&q, &tol()).unwrap();
        let comp = compose(&fq, &fp, &tol()).unwrap();
        let fam = qfun_to_family(&comp, &tol()).unwrap();
        for x in 0..3 {
            for z in 0..3 {
                let mut expect = CMatrix::zeros(9, 9);
                for y in 0..3 {
                    expect = expect
                        .add(&kron(&q.projectors[y][z], &p.projectors[x][y]))
                        .unwrap();
                }
                assert!(approx_eq(&fam.projectors[x][z], &expect, &tol()).unwrap().pass);
            }
        }
    }

    #[test]
    fn permutation_composition_oracle() {
        let s = classical_fn(&[1, 2, 0], 3);
        let t = classical_fn(&[2, 1, 0], 3);
        let comp = compose(&t, &s, &tol()).unwrap();
        // t . s as a permutation: x -> t[s[x]]
        let expect = classical_fn(&[1, 0, 2], 3);
        assert!(approx_eq(&comp.matrix, &expect.matrix, &tol()).unwrap().pass);
    }

    #[test]
    fn compose_associativity() {
        // bitwise on permutation functions
        let f = classical_fn(&[1, 2, 0], 3);
        let g = classical_fn(&[2, 1, 0], 3);
        let h = classical_fn(&[0, 2, 1], 3);
        let lhs = compose(&h, &compose(&g, &f, &tol()).unwrap(), &tol()).unwrap();
        let rhs = compose(&compose(&h, &g, &tol()).unwrap(), &f, &tol()).unwrap();
        assert_eq!(lhs.matrix, rhs.matrix);

        // within tolerance on dense corpus elements
        let q = family_to_qfun(&qls4_family(), &tol()).unwrap();
        let lhs = compose(&q, &compose(&q, &q, &tol()).unwrap(), &tol()).unwrap();
        let rhs = compose(&compose(&q, &q, &tol()).unwrap(), &q, &tol()).unwrap();
        assert!(lhs.matrix.sub(&rhs.matrix).unwrap().norm() < 1e-12);
    }

    #[test]
    fn dual_of_permutation_is_inverse() {
        let s = classical_fn(&[1, 2, 0], 3);
        let dual = dagger_dual(&s, &tol()).unwrap();
        let inv = classical_fn(&[2, 0, 1], 3);
        assert!(approx_eq(&dual.matrix, &inv.matrix, &tol()).unwrap().pass);
    }

    #[test]
    fn double_dual_is_bitwise_identity() {
        let f = family_to_qfun(&qls4_family(), &tol()).unwrap();
        let dd = dagger_dual_unchecked(&dagger_dual_unchecked(&f));
        assert_eq!(dd.matrix, f.matrix);
    }

    #[test]
    fn dual_of_qls_is_bijection_with_duality_identities() {
        let f = family_to_qfun(&qls4_family(), &tol()).unwrap();
        let dual = dagger_dual(&f, &tol()).unwrap();
        assert!(verify_qbij(&dual, &tol()).unwrap().passed());
        assert!(duality_residual(&f, &dual, &tol()).unwrap() < 1e-9);
    }

    #[test]
    fn three_way_bijection_agreement_on_random_conjugates() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let mut corpus: Vec<QuantumFunction> = Vec::new();
        for perm in [[0usize, 1, 2], [1, 2, 0], [2, 1, 0]] {
            corpus.push(classical_fn(&perm, 3));
        }
        corpus.push(family_to_qfun(&latin3_family(), &tol()).unwrap());
        corpus.push(family_to_qfun(&qls4_family(), &tol()).unwrap());
        corpus.push(classical_fn(&[0, 0, 1], 3));
        let base: Vec<QuantumFunction> = corpus.clone();
        for f in base {
            let v = random_unitary(&mut rng, f.h_dim);
            corpus.push(f.conjugate_by(&v).unwrap());
        }
        for f in &corpus {
            let qb = verify_qbij(f, &tol()).unwrap().passed();
            assert_eq!(qb, is_unitary(f).pass);
            assert_eq!(qb, bi_invertible(f, &tol()));
            if qb {
                let dual = dagger_dual(f, &tol()).unwrap();
                assert!(verify_qbij(&dual, &tol()).unwrap().passed());
                assert!(duality_residual(f, &dual, &tol()).unwrap() < 1e-9);
            }
        }
    }

    #[test]
    fn family_roundtrip_is_bitwise() {
        let fam = qls4_family();
        let f = family_to_qfun(&fam, &tol()).unwrap();
        let back = qfun_to_family(&f, &tol()).unwrap();
        for x in 0..4 {
            for y in 0..4 {
                assert_eq!(back.projectors[x][y], fam.projectors[x][y]);
            }
        }
    }

    #[test]
    fn two_by_two_family_is_always_a_ppm() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..5 {
            let p = crate::tensor::random_projector(&mut rng, 4, 2);
            let q = CMatrix::identity(4).sub(&p).unwrap();
            let fam = ProjectorFamily::new(vec![
                vec![p.clone(), q.clone()],
                vec![q.clone(), p.clone()],
            ])
            .unwrap();
            assert!(fam.check_rows(&tol()).pass);
            assert!(fam.check_cols(&tol()).pass);
            let f = family_to_qfun(&fam, &tol()).unwrap();
            assert!(verify_qbij(&f, &tol()).unwrap().passed());
        }
    }

    #[test]
    fn classical_coordinate_reps_give_basis_elements() {
        let a = classical_algebra(3).unwrap();
        for x in 0..3 {
            let rep: Vec<CMatrix> = (0..3)
                .map(|c| CMatrix::new(1, 1, vec![if c == x { C_ONE } else { C_ZERO }]).unwrap())
                .collect();
            let e = module_to_element(&a, &rep, &tol()).unwrap();
            assert_eq!(e.h_dim, 1);
            assert!(approx_eq(&e.matrix, &CMatrix::basis_col(3, x), &tol()).unwrap().pass);
        }
    }

    #[test]
    fn simple_element_counts() {
        let a = matrix_algebra(2).unwrap();
        let els = enumerate_simple_elements(&a, 0, &tol()).unwrap();
        assert_eq!(els.len(), 1);
        assert_eq!(els[0].h_dim, 2);

        let b = direct_sum_algebra(&classical_algebra(1).unwrap(), &matrix_algebra(2).unwrap());
        let els = enumerate_simple_elements(&b, 0, &tol()).unwrap();
        assert_eq!(els.len(), 2);
        let mut dims: Vec<usize> = els.iter().map(|e| e.h_dim).collect();
        dims.sort();
        assert_eq!(dims, vec![1, 2]);
    }

    #[test]
    fn elements_image_under_qfun_is_element() {
        // quantum functions map quantum elements to quantum elements
        let a = classical_algebra(3).unwrap();
        let els = enumerate_simple_elements(&a, 0, &tol()).unwrap();
        let f = family_to_qfun(&latin3_family(), &tol()).unwrap();
        for e in &els {
            let img = compose(&f, e, &tol()).unwrap();
            assert!(verify_qfun(&img, &tol()).unwrap().passed());
        }
    }

    #[test]
    fn reconstruction_roundtrips() {
        let t = tol();
        for a in [
            classical_algebra(3).unwrap(),
            matrix_algebra(2).unwrap(),
            direct_sum_algebra(&classical_algebra(1).unwrap(), &matrix_algebra(2).unwrap()),
        ] {
            let els = enumerate_simple_elements(&a, 0, &t).unwrap();
            let (mult, unit) = reconstruct_algebra(&els).unwrap();
            let rel_m = mult.sub(a.mult()).unwrap().norm() / a.mult().norm();
            let rel_u = unit.sub(a.unit()).unwrap().norm() / a.unit().norm();
            assert!(rel_m < 1e-8, "mult residual {rel_m} at dim {}", a.dim());
            assert!(rel_u < 1e-8, "unit residual {rel_u} at dim {}", a.dim());
        }
    }

    #[test]
    fn reconstruction_in_a_hidden_basis() {
        // the pipeline does not depend on the algebra being presented in its
        // canonical block basis
        let t = tol();
        let base = direct_sum_algebra(&classical_algebra(1).unwrap(), &matrix_algebra(2).unwrap());
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        let u = random_unitary(&mut rng, base.dim());
        let mult = u
            .matmul(base.mult())
            .unwrap()
            .matmul(&kron(&dagger(&u), &dagger(&u)))
            .unwrap();
        let unit = u.matmul(base.unit()).unwrap();
        let hidden = crate::frobenius::Ssfa::new(base.dim(), mult, unit, &t).unwrap();
        let els = enumerate_simple_elements(&hidden, 0, &t).unwrap();
        let (m2, u2) = reconstruct_algebra(&els).unwrap();
        assert!(m2.sub(hidden.mult()).unwrap().norm() / hidden.mult().norm() < 1e-8);
        assert!(u2.sub(hidden.unit()).unwrap().norm() / hidden.unit().norm() < 1e-8);
    }

    #[test]
    fn reconstruction_of_trivial_algebra() {
        let a = classical_algebra(1).unwrap();
        let els = enumerate_simple_elements(&a, 0, &tol()).unwrap();
        let (mult, unit) = reconstruct_algebra(&els).unwrap();
        assert!((mult.get(0, 0) - C_ONE).norm() < 1e-12);
        assert!((unit.get(0, 0) - C_ONE).norm() < 1e-12);
    }

    #[test]
    fn ueb_trivial_case() {
        let f = ueb_to_bijection(&[CMatrix::identity(1)], &tol()).unwrap();
        assert_eq!(f.h_dim, 1);
        assert_eq!(f.source.dim(), 1);
        assert_eq!(f.target.dim(), 1);
        assert!((f.matrix.get(0, 0).norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn pauli_ueb_gives_bijection() {
        let f = ueb_to_bijection(&pauli_basis(), &tol()).unwrap();
        assert_eq!(f.h_dim, 2);
        assert_eq!(f.source.dim(), 4); // Mat_2
        assert_eq!(f.target.dim(), 4); // [4]
        assert!(verify_qbij(&f, &tol()).unwrap().passed());
    }

    #[test]
    fn shift_multiply_ueb_n3() {
        let f = ueb_to_bijection(&shift_multiply_basis(3), &tol()).unwrap();
        assert_eq!(f.h_dim, 3);
        assert_eq!(f.source.dim(), 9);
        assert_eq!(f.target.dim(), 9);
        assert!(verify_qbij(&f, &tol()).unwrap().passed());
    }

    #[test]
    fn non_ueb_is_rejected() {
        let bad = vec![CMatrix::identity(2); 4];
        assert!(matches!(
            ueb_to_bijection(&bad, &tol()),
            Err(Error::NotUeb(_))
        ));
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        fn perm_strategy(n: usize) -> impl Strategy<Value = Vec<usize>> {
            Just((0..n).collect::<Vec<_>>()).prop_shuffle()
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(32))]

            /// Verification verdicts survive unitary conjugation of H.
            #[test]
            fn conjugation_preserves_verdicts(seed in 0u64..1000) {
                let t = tol();
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let f = family_to_qfun(&qls4_family(), &t).unwrap();
                let v = random_unitary(&mut rng, f.h_dim);
                let g = f.conjugate_by(&v).unwrap();
                prop_assert!(verify_qbij(&g, &t).unwrap().passed());
                prop_assert!(is_unitary(&g).pass);
            }

            /// Composition of permutation functions is the permutation product,
            /// and duals inverses, for every permutation.
            #[test]
            fn permutation_calculus(p in perm_strategy(4), q in perm_strategy(4)) {
                let t = tol();
                let fp = classical_fn(&p, 4);
                let fq = classical_fn(&q, 4);
                let comp = compose(&fq, &fp, &t).unwrap();
                let expect: Vec<usize> = (0..4).map(|x| q[p[x]]).collect();
                prop_assert_eq!(comp.matrix.clone(), classical_fn(&expect, 4).matrix);
                let dual = dagger_dual(&fp, &t).unwrap();
                let mut inv = vec![0usize; 4];
                for (x, &y) in p.iter().enumerate() {
                    inv[y] = x;
                }
                prop_assert_eq!(dual.matrix.clone(), classical_fn(&inv, 4).matrix);
            }

            /// Every 2x2 family over a random projector is a quantum bijection.
            #[test]
            fn two_point_families_are_bijections(seed in 0u64..1000, rank in 0usize..5) {
                let t = tol();
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let p = crate::tensor::random_projector(&mut rng, 4, rank);
                let c = CMatrix::identity(4).sub(&p).unwrap();
                let fam = ProjectorFamily::new(vec![vec![p.clone(), c.clone()], vec![c, p]]).unwrap();
                let f = family_to_qfun(&fam, &t).unwrap();
                prop_assert!(verify_qbij(&f, &t).unwrap().passed());
                prop_assert!(bi_invertible(&f, &t));
            }
        }
    }
}
