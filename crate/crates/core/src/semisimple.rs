//! Intertwiner spaces and the semisimple structure of quantum functions:
//! every quantum function splits as a finite direct sum of simple ones, and
//! the splitting is computed here by spectral projections of Hermitian
//! self-intertwiners.

use crate::error::{Error, Result};
use crate::qfun::{verify_qfun, QuantumFunction};
use crate::tensor::{
    approx_eq, cluster_eigenvalues, dagger, herm_eig, kron, nullspace, random_matrix, CMatrix,
    Check, Tolerance, C_ZERO,
};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Orthonormal basis of the space of intertwiners between two quantum
/// functions with shared endpoints.
#[derive(Debug, Clone)]
pub struct IntertwinerBasis {
    /// Each element is a d_to x d_from matrix f with
    /// P_to (f (x) 1_A) == (1_B (x) f) P_from.
    pub basis: Vec<CMatrix>,
}

impl IntertwinerBasis {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

/// Decomposition of a quantum function into simple summands, each recorded
/// with the isometry embedding its Hilbert space into the parent's.
#[derive(Debug, Clone)]
pub struct Decomposition {
    pub parent: QuantumFunction,
    pub parts: Vec<(QuantumFunction, CMatrix)>,
}

/// Solves the intertwiner equation P_g (X (x) 1_A) - (1_B (x) X) P_f == 0 as
/// a linear system, returning an orthonormal basis.
pub fn intertwiner_space(
    f: &QuantumFunction,
    g: &QuantumFunction,
    tol: &Tolerance,
) -> Result<IntertwinerBasis> {
    if !f.source.approx_same(&g.source, tol) || !f.target.approx_same(&g.target, tol) {
        return Err(Error::TypeMismatch(
            "intertwiners need shared source and target algebras".into(),
        ));
    }
    let na = f.source.dim();
    let nb = f.target.dim();
    let df = f.h_dim;
    let dg = g.h_dim;
    let unknowns = dg * df;
    // Row (b, hг, hf, a); column (i, j) for X[i][j].
    let mut sys = CMatrix::zeros(nb * dg * df * na, unknowns);
    for b in 0..nb {
        for hg in 0..dg {
            for hf in 0..df {
                for a in 0..na {
                    let row = ((b * dg + hg) * df + hf) * na + a;
                    // term1: P_g[(b,hg),(i,a)] X[i][hf... X unknown index (i, j):
                    // (X (x) 1_A) maps (hf, a); contributes P_g[(b,hg),(i,a)] for j == hf.
                    for i in 0..dg {
                        let coeff = g.matrix.get(b * dg + hg, i * na + a);
                        if coeff != C_ZERO {
                            sys.set(row, i * df + hf, sys.get(row, i * df + hf) + coeff);
                        }
                    }
                    // term2: (1_B (x) X) P_f: contributes -X[hg][j] P_f[(b,j),(hf,a)].
                    for j in 0..df {
                        let coeff = f.matrix.get(b * df + j, hf * na + a);
                        if coeff != C_ZERO {
                            sys.set(row, hg * df + j, sys.get(row, hg * df + j) - coeff);
                        }
                    }
                }
            }
        }
    }
    let basis = nullspace(&sys, tol)
        .into_iter()
        .map(|v| CMatrix::from_fn(dg, df, |i, j| v.get(i * df + j, 0)))
        .collect();
    Ok(IntertwinerBasis { basis })
}

/// Residual of the intertwiner equation for a candidate map x: f -> g.
pub fn intertwiner_residual(
    f: &QuantumFunction,
    g: &QuantumFunction,
    x: &CMatrix,
    tol: &Tolerance,
) -> Result<f64> {
    let ia = CMatrix::identity(f.source.dim());
    let ib = CMatrix::identity(f.target.dim());
    let lhs = g.matrix.matmul(&kron(x, &ia))?;
    let rhs = kron(&ib, x).matmul(&f.matrix)?;
    Ok(approx_eq(&lhs, &rhs, tol)?.residual)
}

/// A quantum function is simple when its self-intertwiner space is
/// one-dimensional.
pub fn is_simple(f: &QuantumFunction, tol: &Tolerance) -> Result<bool> {
    let report = verify_qfun(f, tol)?;
    if !report.passed() {
        return Err(Error::NotQuantumFunction(
            "simplicity is only defined for verified quantum functions".into(),
        ));
    }
    Ok(intertwiner_space(f, f, tol)?.dim() == 1)
}

/// Direct sum of two quantum functions with shared endpoints; the underlying
/// Hilbert spaces concatenate.
pub fn direct_sum(
    f: &QuantumFunction,
    g: &QuantumFunction,
    tol: &Tolerance,
) -> Result<QuantumFunction> {
    if !f.source.approx_same(&g.source, tol) || !f.target.approx_same(&g.target, tol) {
        return Err(Error::TypeMismatch(
            "direct sum needs shared source and target algebras".into(),
        ));
    }
    let na = f.source.dim();
    let nb = f.target.dim();
    let df = f.h_dim;
    let dg = g.h_dim;
    let d = df + dg;
    let m = CMatrix::from_fn(nb * d, d * na, |row, col| {
        let b = row / d;
        let hp = row % d;
        let h = col / na;
        let a = col % na;
        if hp < df && h < df {
            f.matrix.get(b * df + hp, h * na + a)
        } else if hp >= df && h >= df {
            g.matrix.get(b * dg + (hp - df), (h - df) * na + a)
        } else {
            C_ZERO
        }
    });
    QuantumFunction::new(f.source.clone(), f.target.clone(), d, m)
}

/// Splits a dagger idempotent r on a quantum function: returns the isometry
/// onto the eigenvalue-1 eigenspace of r and the restricted quantum function.
pub fn split_idempotent(
    f: &QuantumFunction,
    r: &CMatrix,
    tol: &Tolerance,
) -> Result<(CMatrix, QuantumFunction)> {
    let d = f.h_dim;
    if r.rows != d || r.cols != d {
        return Err(Error::ShapeMismatch {
            expected: format!("{d}x{d}"),
            got: format!("{}x{}", r.rows, r.cols),
        });
    }
    let sa = approx_eq(r, &dagger(r), tol)?;
    let idem = approx_eq(&r.matmul(r)?, r, tol)?;
    if !sa.pass || !idem.pass {
        return Err(Error::NotIdempotent(format!(
            "r = r† residual {:e}, r^2 = r residual {:e}",
            sa.residual, idem.residual
        )));
    }
    let res = intertwiner_residual(f, f, r, tol)?;
    if res > tol.rel * 1.0_f64.max(f.matrix.norm()) {
        return Err(Error::NotIntertwiner { residual: res });
    }

    let (eigs, u) = herm_eig(r, tol)?;
    let cols: Vec<usize> = (0..d).filter(|&i| eigs[i] > 0.5).collect();
    let v = cols.len();
    let iso = CMatrix::from_fn(d, v, |i, j| u.get(i, cols[j]));
    // i i† == r up to tolerance
    let recon = iso.matmul(&dagger(&iso))?;
    let c = approx_eq(&recon, r, tol)?;
    if !c.pass {
        return Err(Error::NotIdempotent(format!(
            "spectrum of r is not within tolerance of {{0, 1}} (residual {:e})",
            c.residual
        )));
    }
    let restricted = restrict(f, &iso)?;
    Ok((iso, restricted))
}

/// The compression (1_B (x) i†) P (i (x) 1_A) of a quantum function to a
/// subspace given by an isometry i.
fn restrict(f: &QuantumFunction, iso: &CMatrix) -> Result<QuantumFunction> {
    let na = f.source.dim();
    let nb = f.target.dim();
    let m = kron(&CMatrix::identity(nb), &dagger(iso))
        .matmul(&f.matrix)?
        .matmul(&kron(iso, &CMatrix::identity(na)))?;
    QuantumFunction::new(f.source.clone(), f.target.clone(), iso.cols, m)
}

fn is_scalar_multiple_of_identity(x: &CMatrix, tol: &Tolerance) -> bool {
    let d = x.rows;
    if d == 0 {
        return true;
    }
    let mean = x.trace() / Complex64::new(d as f64, 0.0);
    let dev = x.sub(&CMatrix::identity(d).scale(mean)).unwrap().norm();
    dev <= tol.rel.max(1e-9) * 1.0_f64.max(x.norm())
}

/// Picks a Hermitian non-scalar self-intertwiner. The first non-scalar basis
/// element is used; a seeded random combination is the fallback when its
/// Hermitizations degenerate to scalars.
fn hermitian_witness(
    basis: &[CMatrix],
    seed: u64,
    attempt: u64,
    tol: &Tolerance,
) -> Option<CMatrix> {
    let d = basis.first()?.rows;
    let candidates: Vec<CMatrix> = if attempt == 0 {
        basis
            .iter()
            .filter(|x| !is_scalar_multiple_of_identity(x, tol))
            .cloned()
            .collect()
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(attempt));
        let coeffs = random_matrix(&mut rng, basis.len(), 1);
        let mut x = CMatrix::zeros(d, d);
        for (i, b) in basis.iter().enumerate() {
            x = x.add(&b.scale(coeffs.get(i, 0))).unwrap();
        }
        vec![x]
    };
    for x in candidates {
        let sym = x.add(&dagger(&x)).unwrap();
        if !is_scalar_multiple_of_identity(&sym, tol) {
            return Some(sym);
        }
        let skew = x
            .sub(&dagger(&x))
            .unwrap()
            .scale(Complex64::new(0.0, 1.0));
        if !is_scalar_multiple_of_identity(&skew, tol) {
            return Some(skew);
        }
    }
    None
}

/// Recursively decomposes a quantum function into simple parts.
///
/// Non-scalar Hermitian self-intertwiners are split by spectral projection
/// (eigenvalue clusters at gap `tol.eig_gap`); parts are ordered by
/// (h_dim, entries rounded at 1e-6) so output is reproducible.
pub fn decompose(f: &QuantumFunction, seed: u64, tol: &Tolerance) -> Result<Decomposition> {
    let report = verify_qfun(f, tol)?;
    if !report.passed() {
        return Err(Error::NotQuantumFunction(
            "decompose needs a verified quantum function".into(),
        ));
    }
    let mut parts: Vec<(QuantumFunction, CMatrix)> = Vec::new();
    decompose_rec(f, &CMatrix::identity(f.h_dim), seed, tol, &mut parts, 0)?;
    parts.sort_by_key(|(part, _)| sort_key(part));
    Ok(Decomposition {
        parent: f.clone(),
        parts,
    })
}

fn sort_key(f: &QuantumFunction) -> (usize, Vec<(i64, i64)>) {
    let rounded = f
        .matrix
        .entries()
        .iter()
        .map(|z| {
            let re = (z.re / 1e-6).round();
            let im = (z.im / 1e-6).round();
            // normalize negative zero
            (
                if re == 0.0 { 0 } else { re as i64 },
                if im == 0.0 { 0 } else { im as i64 },
            )
        })
        .collect();
    (f.h_dim, rounded)
}

fn decompose_rec(
    f: &QuantumFunction,
    embed: &CMatrix,
    seed: u64,
    tol: &Tolerance,
    parts: &mut Vec<(QuantumFunction, CMatrix)>,
    depth: usize,
) -> Result<()> {
    if f.h_dim == 0 {
        return Ok(());
    }
    if depth > 64 {
        return Err(Error::NumericalDegeneracy("decomposition recursion too deep".into()));
    }
    let basis = intertwiner_space(f, f, tol)?.basis;
    if basis.len() <= 1 {
        parts.push((f.clone(), embed.clone()));
        return Ok(());
    }
    for attempt in 0..8u64 {
        let Some(witness) = hermitian_witness(&basis, seed, attempt, tol) else {
            continue;
        };
        let (eigs, u) = herm_eig(&witness, tol)?;
        let clusters = cluster_eigenvalues(&eigs, tol.eig_gap);
        if clusters.len() < 2 {
            continue;
        }
        for cl in clusters {
            let iso = CMatrix::from_fn(f.h_dim, cl.len(), |i, j| u.get(i, cl.start + j));
            let sub = restrict(f, &iso)?;
            let sub_embed = embed.matmul(&iso)?;
            decompose_rec(&sub, &sub_embed, seed, tol, parts, depth + 1)?;
        }
        return Ok(());
    }
    Err(Error::NumericalDegeneracy(
        "no Hermitian witness separated the spectrum after 8 attempts".into(),
    ))
}

impl Decomposition {
    /// Largest violation over the structural invariants: isometries isometric
    /// and complete, parts verified, and reassembly reproducing the parent.
    pub fn residual(&self, tol: &Tolerance) -> Result<f64> {
        let d = self.parent.h_dim;
        let na = self.parent.source.dim();
        let nb = self.parent.target.dim();
        let mut worst: f64 = 0.0;
        let mut completeness = CMatrix::zeros(d, d);
        let mut reassembly = CMatrix::zeros(nb * d, d * na);
        for (part, iso) in &self.parts {
            let c = approx_eq(
                &dagger(iso).matmul(iso)?,
                &CMatrix::identity(part.h_dim),
                tol,
            )?;
            worst = worst.max(c.residual);
            completeness = completeness.add(&iso.matmul(&dagger(iso))?)?;
            let lifted = kron(&CMatrix::identity(nb), iso)
                .matmul(&part.matrix)?
                .matmul(&kron(&dagger(iso), &CMatrix::identity(na)))?;
            reassembly = reassembly.add(&lifted)?;
            let r = verify_qfun(part, tol)?;
            worst = worst
                .max(r.qf1.residual)
                .max(r.qf2.residual)
                .max(r.qf3.residual);
        }
        worst = worst.max(approx_eq(&completeness, &CMatrix::identity(d), tol)?.residual);
        worst = worst.max(approx_eq(&reassembly, &self.parent.matrix, tol)?.residual);
        Ok(worst)
    }
}

/// Essential classicality. For classical endpoints this is pairwise
/// commutation of the family projectors; in general, all simple parts must be
/// one-dimensional.
pub fn is_essentially_classical(f: &QuantumFunction, tol: &Tolerance) -> Result<bool> {
    if f.source.is_classical(tol) && f.target.is_classical(tol) {
        let fam = crate::qfun::qfun_to_family(f, tol)?;
        for x1 in 0..fam.x_size {
            for y1 in 0..fam.y_size {
                for x2 in 0..fam.x_size {
                    for y2 in 0..fam.y_size {
                        let p = &fam.projectors[x1][y1];
                        let q = &fam.projectors[x2][y2];
                        let comm = p.matmul(q)?.sub(&q.matmul(p)?)?;
                        if comm.norm() > tol.rel * 1.0_f64.max(p.norm() * q.norm()) {
                            return Ok(false);
                        }
                    }
                }
            }
        }
        Ok(true)
    } else {
        let dec = decompose(f, 0, tol)?;
        Ok(dec.parts.iter().all(|(p, _)| p.h_dim == 1))
    }
}

/// Reads off the classical functions underlying an essentially classical
/// quantum function between classical sets.
pub fn classical_components(f: &QuantumFunction, tol: &Tolerance) -> Result<Vec<Vec<usize>>> {
    if !f.source.is_classical(tol) || !f.target.is_classical(tol) {
        return Err(Error::NotClassicalEndpoints);
    }
    if !is_essentially_classical(f, tol)? {
        return Err(Error::NotClassical(
            "the quantum function has a part of dimension greater than one".into(),
        ));
    }
    let dec = decompose(f, 0, tol)?;
    let nx = f.source.dim();
    let ny = f.target.dim();
    let mut out = Vec::with_capacity(dec.parts.len());
    for (part, _) in &dec.parts {
        let mut image = Vec::with_capacity(nx);
        for x in 0..nx {
            let mut best = 0usize;
            let mut best_val = -1.0;
            for y in 0..ny {
                let v = part.matrix.get(y, x).norm();
                if v > best_val {
                    best_val = v;
                    best = y;
                }
            }
            if (best_val - 1.0).abs() > 1e-6 {
                return Err(Error::NotClassical(format!(
                    "part entry at input {x} is not a unit indicator"
                )));
            }
            image.push(best);
        }
        out.push(image);
    }
    Ok(out)
}

/// Report from [`intertwiner_closure_checks`].
#[derive(Debug, Clone)]
pub struct ClosureReport {
    pub dim: usize,
    pub composition_closed: Check,
    pub dagger_closed: Check,
}

/// Checks that the self-intertwiner space is closed under composition and
/// dagger, by re-expanding products and adjoints of basis elements.
pub fn intertwiner_closure_checks(f: &QuantumFunction, tol: &Tolerance) -> Result<ClosureReport> {
    let basis = intertwiner_space(f, f, tol)?.basis;
    let expand_residual = |x: &CMatrix| -> f64 {
        let mut approx = CMatrix::zeros(x.rows, x.cols);
        for b in &basis {
            // Frobenius coefficient <b, x>
            let mut coef = C_ZERO;
            for i in 0..x.rows {
                for j in 0..x.cols {
                    coef += b.get(i, j).conj() * x.get(i, j);
                }
            }
            approx = approx.add(&b.scale(coef)).unwrap();
        }
        approx.sub(x).unwrap().norm()
    };
    let scale = 1.0_f64;
    let mut comp_res: f64 = 0.0;
    let mut dag_res: f64 = 0.0;
    for x in &basis {
        dag_res = dag_res.max(expand_residual(&dagger(x)));
        for y in &basis {
            comp_res = comp_res.max(expand_residual(&x.matmul(y).unwrap()));
        }
    }
    Ok(ClosureReport {
        dim: basis.len(),
        composition_closed: Check::new(comp_res <= tol.rel * scale, comp_res),
        dagger_closed: Check::new(dag_res <= tol.rel * scale, dag_res),
    })
}
