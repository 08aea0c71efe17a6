//! Special symmetric dagger Frobenius algebras: the tensor-level presentation
//! of finite-dimensional C*-algebras, playing the role of finite quantum sets.
//!
//! An algebra is stored as its multiplication tensor `m: A (x) A -> A` and
//! unit `u: C -> A`; comultiplication, counit, cup and cap are derived by
//! taking adjoints.

use crate::error::{Error, Result};
use crate::tensor::{
    approx_eq, cluster_eigenvalues, dagger, herm_eig, kron, nullspace, random_matrix, CMatrix,
    Check, Tolerance, C_ONE, C_ZERO,
};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// A finite quantum set: dimension, multiplication tensor (n x n^2) and unit
/// vector (n x 1).
#[derive(Debug, Clone, PartialEq)]
pub struct Ssfa {
    dim: usize,
    mult: CMatrix,
    unit: CMatrix,
}

/// Per-axiom report from [`check_ssfa`].
#[derive(Debug, Clone)]
pub struct SsfaReport {
    pub associative: Check,
    pub unital: Check,
    pub frobenius: Check,
    pub special: Check,
    pub symmetric: Check,
    pub commutative: Check,
}

impl SsfaReport {
    /// All axioms hold; commutativity is a classification flag, not an axiom.
    pub fn passed(&self) -> bool {
        self.associative.pass
            && self.unital.pass
            && self.frobenius.pass
            && self.special.pass
            && self.symmetric.pass
    }
}

impl Ssfa {
    /// Validates the Frobenius axioms before accepting the tensors.
    pub fn new(dim: usize, mult: CMatrix, unit: CMatrix, tol: &Tolerance) -> Result<Self> {
        let report = check_ssfa(dim, &mult, &unit, tol)?;
        if !report.passed() {
            return Err(Error::InvalidArgument(format!(
                "tensors do not satisfy the Frobenius axioms \
                 (assoc {:e}, unital {:e}, frobenius {:e}, special {:e}, symmetric {:e})",
                report.associative.residual,
                report.unital.residual,
                report.frobenius.residual,
                report.special.residual,
                report.symmetric.residual,
            )));
        }
        Ok(Ssfa { dim, mult, unit })
    }

    /// Accepts tensors without validation. Callers must guarantee the axioms.
    pub fn new_unchecked(dim: usize, mult: CMatrix, unit: CMatrix) -> Self {
        Ssfa { dim, mult, unit }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn mult(&self) -> &CMatrix {
        &self.mult
    }

    pub fn unit(&self) -> &CMatrix {
        &self.unit
    }

    /// Comultiplication m†: A -> A (x) A.
    pub fn comult(&self) -> CMatrix {
        dagger(&self.mult)
    }

    /// Counit u†: A -> C.
    pub fn counit(&self) -> CMatrix {
        dagger(&self.unit)
    }

    /// cup = m† u : C -> A (x) A.
    pub fn cup(&self) -> CMatrix {
        self.comult().matmul(&self.unit).unwrap()
    }

    /// cap = u† m : A (x) A -> C.
    pub fn cap(&self) -> CMatrix {
        self.counit().matmul(&self.mult).unwrap()
    }

    /// Left multiplication by the vector `x`: the matrix of a -> m(x (x) a).
    pub fn left_mult(&self, x: &CMatrix) -> CMatrix {
        self.mult
            .matmul(&kron(x, &CMatrix::identity(self.dim)))
            .unwrap()
    }

    /// Right multiplication by the vector `x`: the matrix of a -> m(a (x) x).
    pub fn right_mult(&self, x: &CMatrix) -> CMatrix {
        self.mult
            .matmul(&kron(&CMatrix::identity(self.dim), x))
            .unwrap()
    }

    /// Product of two element vectors.
    pub fn product(&self, x: &CMatrix, y: &CMatrix) -> CMatrix {
        self.mult.matmul(&kron(x, y)).unwrap()
    }

    /// Structural equality within tolerance.
    pub fn approx_same(&self, other: &Ssfa, tol: &Tolerance) -> bool {
        self.dim == other.dim
            && approx_eq(&self.mult, &other.mult, tol).map(|c| c.pass).unwrap_or(false)
            && approx_eq(&self.unit, &other.unit, tol).map(|c| c.pass).unwrap_or(false)
    }

    /// True when the multiplication and unit are exactly the classical ones
    /// up to tolerance: m(e_i (x) e_j) = delta_ij e_i, u = sum e_i.
    pub fn is_classical(&self, tol: &Tolerance) -> bool {
        self.approx_same(&classical_algebra(self.dim).unwrap(), tol)
    }
}

/// Checks every Frobenius-algebra axiom for candidate tensors, reporting a
/// residual per axiom. The commutative flag uses m . swap == m.
pub fn check_ssfa(dim: usize, mult: &CMatrix, unit: &CMatrix, tol: &Tolerance) -> Result<SsfaReport> {
    let n = dim;
    if mult.rows != n || mult.cols != n * n {
        return Err(Error::ShapeMismatch {
            expected: format!("{}x{}", n, n * n),
            got: format!("{}x{}", mult.rows, mult.cols),
        });
    }
    if unit.rows != n || unit.cols != 1 {
        return Err(Error::ShapeMismatch {
            expected: format!("{}x1", n),
            got: format!("{}x{}", unit.rows, unit.cols),
        });
    }
    let id = CMatrix::identity(n);
    let delta = dagger(mult);
    let eps = dagger(unit);

    let m_mi = mult.matmul(&kron(mult, &id))?;
    let m_im = mult.matmul(&kron(&id, mult))?;
    let associative = approx_eq(&m_mi, &m_im, tol)?;

    let left_unit = mult.matmul(&kron(unit, &id))?;
    let right_unit = mult.matmul(&kron(&id, unit))?;
    let ul = approx_eq(&left_unit, &id, tol)?;
    let ur = approx_eq(&right_unit, &id, tol)?;
    let unital = Check::new(ul.pass && ur.pass, ul.residual.max(ur.residual));

    // (1 (x) m)(delta (x) 1) == delta m == (m (x) 1)(1 (x) delta)
    let dm = delta.matmul(mult)?;
    let lhs = kron(&id, mult).matmul(&kron(&delta, &id))?;
    let rhs = kron(mult, &id).matmul(&kron(&id, &delta))?;
    let f1 = approx_eq(&lhs, &dm, tol)?;
    let f2 = approx_eq(&rhs, &dm, tol)?;
    let frobenius = Check::new(f1.pass && f2.pass, f1.residual.max(f2.residual));

    let special = approx_eq(&mult.matmul(&delta)?, &id, tol)?;

    let swap = crate::tensor::swap_matrix(n, n);
    let cap = eps.matmul(mult)?;
    let symmetric = approx_eq(&cap.matmul(&swap)?, &cap, tol)?;

    let commutative = approx_eq(&mult.matmul(&swap)?, mult, tol)?;

    Ok(SsfaReport {
        associative,
        unital,
        frobenius,
        special,
        symmetric,
        commutative,
    })
}

/// The commutative algebra of functions on an n-element set:
/// m(e_i (x) e_j) = delta_ij e_i, u = sum_i e_i.
pub fn classical_algebra(n: usize) -> Result<Ssfa> {
    if n == 0 {
        return Err(Error::InvalidArgument(
            "a quantum set needs a unit; dimension 0 is rejected".into(),
        ));
    }
    let mut mult = CMatrix::zeros(n, n * n);
    for i in 0..n {
        mult.set(i, i * n + i, C_ONE);
    }
    let mut unit = CMatrix::zeros(n, 1);
    for i in 0..n {
        unit.set(i, 0, C_ONE);
    }
    Ok(Ssfa::new_unchecked(n, mult, unit))
}

/// The full matrix algebra Mat_k in its orthonormal basis v_ij = e_ij/sqrt(k)
/// (inner product <a,b> = k Tr(a† b)):
/// m(v_ij (x) v_lm) = delta_jl v_im / sqrt(k), u = sqrt(k) sum_i v_ii.
/// This scaling is the unique one with m m† = 1.
pub fn matrix_algebra(k: usize) -> Result<Ssfa> {
    if k == 0 {
        return Err(Error::InvalidArgument("matrix algebra needs k >= 1".into()));
    }
    let n = k * k;
    let rt = (k as f64).sqrt();
    let mut mult = CMatrix::zeros(n, n * n);
    for i in 0..k {
        for j in 0..k {
            for m in 0..k {
                let row = i * k + m;
                let col = (i * k + j) * n + (j * k + m);
                mult.set(row, col, Complex64::new(1.0 / rt, 0.0));
            }
        }
    }
    let mut unit = CMatrix::zeros(n, 1);
    for i in 0..k {
        unit.set(i * k + i, 0, Complex64::new(rt, 0.0));
    }
    Ok(Ssfa::new_unchecked(n, mult, unit))
}

/// Block direct sum of two algebras.
pub fn direct_sum_algebra(a: &Ssfa, b: &Ssfa) -> Ssfa {
    let na = a.dim();
    let nb = b.dim();
    let n = na + nb;
    let mut mult = CMatrix::zeros(n, n * n);
    for r in 0..na {
        for x in 0..na {
            for y in 0..na {
                let v = a.mult().get(r, x * na + y);
                if v != C_ZERO {
                    mult.set(r, x * n + y, v);
                }
            }
        }
    }
    for r in 0..nb {
        for x in 0..nb {
            for y in 0..nb {
                let v = b.mult().get(r, x * nb + y);
                if v != C_ZERO {
                    mult.set(na + r, (na + x) * n + (na + y), v);
                }
            }
        }
    }
    let mut unit = CMatrix::zeros(n, 1);
    for i in 0..na {
        unit.set(i, 0, a.unit().get(i, 0));
    }
    for i in 0..nb {
        unit.set(na + i, 0, b.unit().get(i, 0));
    }
    Ssfa::new_unchecked(n, mult, unit)
}

/// Tensor product of two algebras, multiplying factorwise.
pub fn tensor_algebra(a: &Ssfa, b: &Ssfa) -> Ssfa {
    let na = a.dim();
    let nb = b.dim();
    let n = na * nb;
    // m((a1 (x) b1) (x) (a2 (x) b2)) = m_A(a1 a2) (x) m_B(b1 b2):
    // m = (m_A (x) m_B) . (1_A (x) swap_{B,A} (x) 1_B)
    let rearrange = kron(
        &CMatrix::identity(na),
        &kron(&crate::tensor::swap_matrix(nb, na), &CMatrix::identity(nb)),
    );
    let mult = kron(a.mult(), b.mult()).matmul(&rearrange).unwrap();
    let unit = kron(a.unit(), b.unit());
    Ssfa::new_unchecked(n, mult, unit)
}

/// The canonical involution x -> (x† (x) 1) cup, the antilinear
/// antihomomorphism making the algebra a C*-algebra.
pub fn canonical_involution(a: &Ssfa, x: &CMatrix) -> Result<CMatrix> {
    if x.rows != a.dim() || x.cols != 1 {
        return Err(Error::ShapeMismatch {
            expected: format!("{}x1", a.dim()),
            got: format!("{}x{}", x.rows, x.cols),
        });
    }
    let cup = a.cup();
    let n = a.dim();
    let mut out = CMatrix::zeros(n, 1);
    for c in 0..n {
        let mut acc = C_ZERO;
        for r in 0..n {
            acc += x.get(r, 0).conj() * cup.get(r * n + c, 0);
        }
        out.set(c, 0, acc);
    }
    Ok(out)
}

/// Structure data of the block decomposition: block sizes (ascending), the
/// unitary mapping the algebra onto block-diagonal coordinates, and the
/// dimension of the centre.
#[derive(Debug, Clone)]
pub struct WedderburnData {
    pub block_sizes: Vec<usize>,
    pub iso: CMatrix,
    pub center_dim: usize,
}

/// One irreducible unital *-representation per block, realized on an explicit
/// orthonormal subspace basis.
#[derive(Debug, Clone)]
pub(crate) struct BlockReps {
    pub sizes: Vec<usize>,
    /// reps[i][c] is the image of basis vector e_c as an n_i x n_i matrix.
    pub reps: Vec<Vec<CMatrix>>,
}

fn center_basis(a: &Ssfa, tol: &Tolerance) -> Vec<CMatrix> {
    let n = a.dim();
    // Constraint on z: left-mult(z) == right-mult(z), linear in z.
    let mut cmat = CMatrix::zeros(n * n, n);
    for r in 0..n {
        for y in 0..n {
            for c in 0..n {
                let v = a.mult().get(r, c * n + y) - a.mult().get(r, y * n + c);
                cmat.set(r * n + y, c, v);
            }
        }
    }
    nullspace(&cmat, tol)
}

fn block_rep(
    a: &Ssfa,
    block: &[CMatrix],
    rng: &mut ChaCha8Rng,
    tol: &Tolerance,
) -> Result<Vec<CMatrix>> {
    let dim_block = block.len();
    let nb = (dim_block as f64).sqrt().round() as usize;
    if nb * nb != dim_block {
        return Err(Error::NumericalDegeneracy(format!(
            "block dimension {dim_block} is not a perfect square"
        )));
    }
    let n = a.dim();
    if nb == 1 {
        // The block is spanned by a single central projection; normalize so
        // that the counit evaluates to 1.
        let psi = &block[0];
        let e = a.counit().matmul(psi)?.get(0, 0);
        if e.norm() < 1e-6 {
            return Err(Error::NumericalDegeneracy(
                "counit vanishes on a one-dimensional block".into(),
            ));
        }
        let psi = psi.scale(C_ONE / e);
        return Ok((0..n)
            .map(|c| {
                let ec = CMatrix::basis_col(n, c);
                let prod = a.product(&ec, &psi);
                CMatrix::new(1, 1, vec![dagger(&psi).matmul(&prod).unwrap().get(0, 0)]).unwrap()
            })
            .collect());
    }

    // A random Hermitian block element; its lowest eigenvalue cluster inside
    // the block spans a minimal left ideal, a copy of the irrep.
    for _ in 0..8 {
        let coeffs = random_matrix(rng, dim_block, 1);
        let mut h = CMatrix::zeros(n, 1);
        for (i, b) in block.iter().enumerate() {
            h = h.add(&b.scale(coeffs.get(i, 0)))?;
        }
        let h = h.add(&canonical_involution(a, &h)?)?;
        // Right multiplication by h restricted to the block, in block coords.
        // Its eigenspaces are left ideals, so the left regular action below
        // restricts to an honest representation.
        let rh = a.right_mult(&h);
        let mut restricted = CMatrix::zeros(dim_block, dim_block);
        for (j, bj) in block.iter().enumerate() {
            let img = rh.matmul(bj)?;
            for (i, bi) in block.iter().enumerate() {
                restricted.set(i, j, dagger(bi).matmul(&img)?.get(0, 0));
            }
        }
        let (eigs, u) = match herm_eig(&restricted, tol) {
            Ok(r) => r,
            Err(_) => continue,
        };
        let clusters = cluster_eigenvalues(&eigs, tol.eig_gap);
        let Some(first) = clusters.iter().find(|c| c.len() == nb) else {
            continue;
        };
        // Orthonormal basis of the minimal left ideal, as vectors in A.
        let mut ideal: Vec<CMatrix> = Vec::with_capacity(nb);
        for k in first.clone() {
            let mut w = CMatrix::zeros(n, 1);
            for (i, bi) in block.iter().enumerate() {
                w = w.add(&bi.scale(u.get(i, k)))?;
            }
            ideal.push(w);
        }
        let rep: Vec<CMatrix> = (0..n)
            .map(|c| {
                let lx = a.left_mult(&CMatrix::basis_col(n, c));
                CMatrix::from_fn(nb, nb, |r, s| {
                    dagger(&ideal[r]).matmul(&lx.matmul(&ideal[s]).unwrap()).unwrap().get(0, 0)
                })
            })
            .collect();
        return Ok(rep);
    }
    Err(Error::NumericalDegeneracy(
        "could not isolate a minimal left ideal after 8 draws".into(),
    ))
}

pub(crate) fn block_reps(a: &Ssfa, seed: u64, tol: &Tolerance) -> Result<BlockReps> {
    let center = center_basis(a, tol);
    let k = center.len();
    if k == 0 {
        return Err(Error::NumericalDegeneracy("empty centre".into()));
    }
    let n = a.dim();

    let mut last_err = None;
    for attempt in 0..8u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(attempt));
        // Random Hermitian central element; its eigenspaces are the blocks.
        let coeffs = random_matrix(&mut rng, k, 1);
        let mut z = CMatrix::zeros(n, 1);
        for (i, c) in center.iter().enumerate() {
            z = z.add(&c.scale(coeffs.get(i, 0)))?;
        }
        let lz = a.left_mult(&z);
        let m = lz.hermitian_part();
        let (eigs, u) = herm_eig(&m, tol)?;
        let clusters = cluster_eigenvalues(&eigs, tol.eig_gap);
        if clusters.len() != k {
            last_err = Some(Error::NumericalDegeneracy(format!(
                "central element produced {} clusters for a {}-dimensional centre",
                clusters.len(),
                k
            )));
            continue;
        }
        let mut blocks: Vec<Vec<CMatrix>> = Vec::with_capacity(k);
        for cl in &clusters {
            blocks.push(cl.clone().map(|j| {
                CMatrix::from_fn(n, 1, |i, _| u.get(i, j))
            }).collect());
        }
        let mut sized: Vec<(usize, Vec<CMatrix>)> = Vec::with_capacity(k);
        let mut square = true;
        for b in blocks {
            let d = b.len();
            let nb = (d as f64).sqrt().round() as usize;
            if nb * nb != d {
                square = false;
                break;
            }
            sized.push((nb, b));
        }
        if !square {
            last_err = Some(Error::NumericalDegeneracy(
                "eigenvalue clustering split a block".into(),
            ));
            continue;
        }
        sized.sort_by_key(|(nb, _)| *nb);

        let mut sizes = Vec::with_capacity(k);
        let mut reps = Vec::with_capacity(k);
        let mut failed = None;
        for (nb, block) in &sized {
            match block_rep(a, block, &mut rng, tol) {
                Ok(rep) => {
                    sizes.push(*nb);
                    reps.push(rep);
                }
                Err(e) => {
                    failed = Some(e);
                    break;
                }
            }
        }
        if let Some(e) = failed {
            last_err = Some(e);
            continue;
        }
        return Ok(BlockReps { sizes, reps });
    }
    Err(last_err.unwrap_or_else(|| Error::NumericalDegeneracy("wedderburn failed".into())))
}

/// Decomposes the algebra into full matrix blocks.
///
/// The unitary `iso` maps x to the stacked, sqrt(n_i)-scaled vectorizations of
/// its irreducible representations; the transported multiplication is then
/// blockwise matrix multiplication in the canonical normalization.
pub fn wedderburn(a: &Ssfa, seed: u64, tol: &Tolerance) -> Result<WedderburnData> {
    let BlockReps { sizes, reps } = block_reps(a, seed, tol)?;
    let n = a.dim();
    let mut rows: Vec<Vec<Complex64>> = Vec::with_capacity(n);
    for (bi, nb) in sizes.iter().enumerate() {
        let scale = (*nb as f64).sqrt();
        for r in 0..*nb {
            for s in 0..*nb {
                let mut row = Vec::with_capacity(n);
                for c in 0..n {
                    row.push(reps[bi][c].get(r, s) * scale);
                }
                rows.push(row);
            }
        }
    }
    let iso = CMatrix::new(n, n, rows.into_iter().flatten().collect())?;

    // Postconditions: iso unitary, transported product blockwise-canonical.
    let unitary = approx_eq(&dagger(&iso).matmul(&iso)?, &CMatrix::identity(n), tol)?;
    if !unitary.pass {
        return Err(Error::NumericalDegeneracy(format!(
            "representation change of basis is not unitary (residual {:e})",
            unitary.residual
        )));
    }
    let mut canonical = matrix_algebra(sizes[0])?;
    for nb in &sizes[1..] {
        canonical = direct_sum_algebra(&canonical, &matrix_algebra(*nb)?);
    }
    let transported = iso
        .matmul(a.mult())?
        .matmul(&kron(&dagger(&iso), &dagger(&iso)))?;
    let blockwise = approx_eq(&transported, canonical.mult(), tol)?;
    if !blockwise.pass {
        return Err(Error::NumericalDegeneracy(format!(
            "transported multiplication is not blockwise canonical (residual {:e})",
            blockwise.residual
        )));
    }

    Ok(WedderburnData {
        center_dim: sizes.len(),
        block_sizes: sizes,
        iso,
    })
}

/// All copyable elements: vectors with m†(psi) = psi (x) psi and u†(psi) = 1.
/// They are the central projections of the one-by-one blocks.
pub fn copyable_elements(a: &Ssfa, tol: &Tolerance) -> Result<Vec<CMatrix>> {
    let data = wedderburn(a, 0, tol)?;
    let n = a.dim();
    let mut out = Vec::new();
    let mut offset = 0usize;
    for nb in &data.block_sizes {
        if *nb == 1 {
            let psi = dagger(&data.iso).matmul(&CMatrix::basis_col(n, offset))?;
            // postconditions
            let copy = a.comult().matmul(&psi)?;
            let pair = kron(&psi, &psi);
            let c1 = approx_eq(&copy, &pair, tol)?;
            let eps = a.counit().matmul(&psi)?.get(0, 0);
            if !c1.pass || (eps - C_ONE).norm() > tol.rel.max(1e-7) {
                return Err(Error::PostconditionFailure(format!(
                    "candidate copyable element failed verification \
                     (copy residual {:e}, counit {})",
                    c1.residual, eps
                )));
            }
            out.push(psi);
        }
        offset += nb * nb;
    }
    Ok(out)
}
