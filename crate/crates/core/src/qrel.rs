//! Quantum relations: projectors on A (x) B commuting with left
//! multiplications of A and right multiplications of B, their projection
//! form in the opposite-tensor algebra, and the correspondences with quantum
//! adjacency matrices and operator systems.

use crate::error::{Error, Result};
use crate::frobenius::{canonical_involution, matrix_algebra, Ssfa};
use crate::qgraph::{check_qgraph, edge_projector, QuantumGraph};
use crate::tensor::{
    approx_eq, dagger, gram_schmidt, kron, swap_matrix, CMatrix, Check, Tolerance, C_ONE, C_ZERO,
};

/// A quantum relation between `a` and `b`: a projector on A (x) B satisfying
/// the bimodule condition.
#[derive(Debug, Clone)]
pub struct QuantumRelation {
    pub a: Ssfa,
    pub b: Ssfa,
    pub matrix: CMatrix,
}

/// Report from [`check_relation`].
#[derive(Debug, Clone)]
pub struct RelationReport {
    pub projector: Check,
    pub bimodule: Check,
}

impl RelationReport {
    pub fn passed(&self) -> bool {
        self.projector.pass && self.bimodule.pass
    }
}

impl QuantumRelation {
    pub fn new(a: Ssfa, b: Ssfa, matrix: CMatrix) -> Result<Self> {
        let n = a.dim() * b.dim();
        if matrix.rows != n || matrix.cols != n {
            return Err(Error::ShapeMismatch {
                expected: format!("{n}x{n}"),
                got: format!("{}x{}", matrix.rows, matrix.cols),
            });
        }
        Ok(QuantumRelation { a, b, matrix })
    }
}

/// Checks that the matrix is a projector and commutes with L_x (x) R_y over
/// all basis pairs; linearity makes the basis sufficient.
pub fn check_relation(r: &QuantumRelation, tol: &Tolerance) -> Result<RelationReport> {
    let m = &r.matrix;
    let sa = approx_eq(&dagger(m), m, tol)?;
    let idem = approx_eq(&m.matmul(m)?, m, tol)?;
    let projector = Check::new(
        sa.pass && idem.pass,
        sa.residual.max(idem.residual),
    );
    let na = r.a.dim();
    let nb = r.b.dim();
    let mut worst: f64 = 0.0;
    let mut pass = true;
    for x in 0..na {
        let lx = r.a.left_mult(&CMatrix::basis_col(na, x));
        for y in 0..nb {
            let ry = r.b.right_mult(&CMatrix::basis_col(nb, y));
            let act = kron(&lx, &ry);
            let lhs = m.matmul(&act)?;
            let rhs = act.matmul(m)?;
            let c = approx_eq(&lhs, &rhs, tol)?;
            pass &= c.pass;
            worst = worst.max(c.residual);
        }
    }
    Ok(RelationReport {
        projector,
        bimodule: Check::new(pass, worst),
    })
}

/// The projection form p = R (u_A (x) u_B) of a quantum relation, an element
/// of the opposite-tensor algebra.
pub fn to_projection(r: &QuantumRelation) -> CMatrix {
    r.matrix
        .matmul(&kron(r.a.unit(), r.b.unit()))
        .unwrap()
}

/// Multiplication of A^op (x) B on element vectors of A (x) B.
fn op_tensor_product(a: &Ssfa, b: &Ssfa, p: &CMatrix, q: &CMatrix) -> Result<CMatrix> {
    // (p * q) = sum (q1 p1) (x) (p2 q2): A legs multiply in reverse order.
    let na = a.dim();
    let nb = b.dim();
    let mut out = CMatrix::zeros(na * nb, 1);
    // p = sum_{x,y} p[(x,y)] e_x (x) e_y
    for x in 0..na {
        for y in 0..nb {
            let pc = p.get(x * nb + y, 0);
            if pc == C_ZERO {
                continue;
            }
            for xp in 0..na {
                for yp in 0..nb {
                    let qc = q.get(xp * nb + yp, 0);
                    if qc == C_ZERO {
                        continue;
                    }
                    let afac = a.product(
                        &CMatrix::basis_col(na, xp),
                        &CMatrix::basis_col(na, x),
                    );
                    let bfac = b.product(
                        &CMatrix::basis_col(nb, y),
                        &CMatrix::basis_col(nb, yp),
                    );
                    let term = kron(&afac, &bfac).scale(pc * qc);
                    out = out.add(&term)?;
                }
            }
        }
    }
    Ok(out)
}

/// Involution of A^op (x) B applied to an element vector.
fn op_tensor_involution(a: &Ssfa, b: &Ssfa, p: &CMatrix) -> Result<CMatrix> {
    let na = a.dim();
    let nb = b.dim();
    let mut out = CMatrix::zeros(na * nb, 1);
    for x in 0..na {
        let xs = canonical_involution(a, &CMatrix::basis_col(na, x))?;
        for y in 0..nb {
            let ys = canonical_involution(b, &CMatrix::basis_col(nb, y))?;
            let coeff = p.get(x * nb + y, 0).conj();
            if coeff == C_ZERO {
                continue;
            }
            out = out.add(&kron(&xs, &ys).scale(coeff))?;
        }
    }
    Ok(out)
}

/// Rebuilds the relation R(x (x) y) = sum (x p1) (x) (p2 y) from a projection
/// p in A^op (x) B.
pub fn from_projection(a: &Ssfa, b: &Ssfa, p: &CMatrix, tol: &Tolerance) -> Result<QuantumRelation> {
    let na = a.dim();
    let nb = b.dim();
    if p.rows != na * nb || p.cols != 1 {
        return Err(Error::ShapeMismatch {
            expected: format!("{}x1", na * nb),
            got: format!("{}x{}", p.rows, p.cols),
        });
    }
    // precondition: p is a projection in A^op (x) B
    let sq = op_tensor_product(a, b, p, p)?;
    let c1 = approx_eq(&sq, p, tol)?;
    let star = op_tensor_involution(a, b, p)?;
    let c2 = approx_eq(&star, p, tol)?;
    if !c1.pass || !c2.pass {
        return Err(Error::NotProjection(format!(
            "p*p residual {:e}, p*=p residual {:e}",
            c1.residual, c2.residual
        )));
    }
    // R = (m_A (x) m_B) (1_A (x) p (x) 1_B)
    let matrix = kron(a.mult(), b.mult())
        .matmul(&kron(&kron(&CMatrix::identity(na), p), &CMatrix::identity(nb)))?;
    QuantumRelation::new(a.clone(), b.clone(), matrix)
}

/// Symmetry of a relation on a single algebra: swap(p) == p.
pub fn is_symmetric(r: &QuantumRelation, tol: &Tolerance) -> Result<Check> {
    if !r.a.approx_same(&r.b, tol) {
        return Err(Error::TypeMismatch(
            "symmetry needs a relation on a single quantum set".into(),
        ));
    }
    let p = to_projection(r);
    let swapped = swap_matrix(r.a.dim(), r.b.dim()).matmul(&p)?;
    approx_eq(&swapped, &p, tol)
}

/// Reflexivity: m_A(p) == u_A.
pub fn is_reflexive(r: &QuantumRelation, tol: &Tolerance) -> Result<Check> {
    if !r.a.approx_same(&r.b, tol) {
        return Err(Error::TypeMismatch(
            "reflexivity needs a relation on a single quantum set".into(),
        ));
    }
    let p = to_projection(r);
    let mp = r.a.mult().matmul(&p)?;
    approx_eq(&mp, r.a.unit(), tol)
}

/// The edge projector of a quantum graph, packaged as a quantum relation.
pub fn adjacency_to_relation(qg: &QuantumGraph) -> QuantumRelation {
    QuantumRelation {
        a: qg.algebra.clone(),
        b: qg.algebra.clone(),
        matrix: edge_projector(qg),
    }
}

/// Recovers the adjacency matrix G(x) = (cap (x) 1)(x (x) p) from a symmetric
/// relation and validates the quantum-graph axioms.
pub fn relation_to_adjacency(r: &QuantumRelation, tol: &Tolerance) -> Result<QuantumGraph> {
    let rep = check_relation(r, tol)?;
    if !rep.passed() {
        return Err(Error::InvalidArgument(format!(
            "not a quantum relation (projector {:e}, bimodule {:e})",
            rep.projector.residual, rep.bimodule.residual
        )));
    }
    let sym = is_symmetric(r, tol)?;
    if !sym.pass {
        return Err(Error::NotSymmetric {
            residual: sym.residual,
        });
    }
    let a = &r.a;
    let n = a.dim();
    let p = to_projection(r);
    let g = kron(&a.cap(), &CMatrix::identity(n)).matmul(&kron(&CMatrix::identity(n), &p))?;
    let report = check_qgraph(a, &g, tol)?;
    if !report.passed() {
        return Err(Error::PostconditionFailure(format!(
            "recovered map fails the adjacency axioms \
             (schur {:e}, self-adjoint {:e}, symmetric {:e})",
            report.schur_idempotent.residual,
            report.self_adjoint.residual,
            report.symmetric.residual
        )));
    }
    Ok(QuantumGraph {
        algebra: a.clone(),
        adjacency: g,
        reflexivity: report.reflexivity,
    })
}

/// A projector on H* (x) H whose image is an operator system.
#[derive(Debug, Clone)]
pub struct OperatorSystemProjector {
    pub h_dim: usize,
    pub matrix: CMatrix,
}

/// Report from [`check_operator_system`].
#[derive(Debug, Clone)]
pub struct OpsysReport {
    pub projector: Check,
    pub dagger_closed: Check,
    pub contains_identity: Check,
}

impl OpsysReport {
    pub fn passed(&self) -> bool {
        self.projector.pass && self.dagger_closed.pass && self.contains_identity.pass
    }
}

impl OperatorSystemProjector {
    pub fn new(h_dim: usize, matrix: CMatrix) -> Result<Self> {
        let n = h_dim * h_dim;
        if matrix.rows != n || matrix.cols != n {
            return Err(Error::ShapeMismatch {
                expected: format!("{n}x{n}"),
                got: format!("{}x{}", matrix.rows, matrix.cols),
            });
        }
        Ok(OperatorSystemProjector { h_dim, matrix })
    }

    /// Projector onto the span of the given d x d operators, orthonormalized.
    pub fn from_span(h_dim: usize, operators: &[CMatrix]) -> Result<Self> {
        let vecs: Vec<CMatrix> = operators
            .iter()
            .map(|op| {
                if op.rows != h_dim || op.cols != h_dim {
                    Err(Error::ShapeMismatch {
                        expected: format!("{h_dim}x{h_dim}"),
                        got: format!("{}x{}", op.rows, op.cols),
                    })
                } else {
                    Ok(CMatrix::from_fn(h_dim * h_dim, 1, |r, _| {
                        op.get(r / h_dim, r % h_dim)
                    }))
                }
            })
            .collect::<Result<_>>()?;
        let basis = gram_schmidt(&vecs)
            .ok_or_else(|| Error::InvalidArgument("empty spanning set".into()))?;
        let n = h_dim * h_dim;
        let mut p = CMatrix::zeros(n, n);
        for v in &basis {
            p = p.add(&v.matmul(&dagger(v))?)?;
        }
        Ok(OperatorSystemProjector { h_dim, matrix: p })
    }
}

/// Operator-system axioms: projector, image closed under conjugate transpose
/// of operators, image containing the identity operator.
pub fn check_operator_system(osp: &OperatorSystemProjector, tol: &Tolerance) -> Result<OpsysReport> {
    let d = osp.h_dim;
    let m = &osp.matrix;
    let sa = approx_eq(&dagger(m), m, tol)?;
    let idem = approx_eq(&m.matmul(m)?, m, tol)?;
    let projector = Check::new(sa.pass && idem.pass, sa.residual.max(idem.residual));

    // T vec(X) = vec(X†): antilinear involution (b, c) -> conj at (c, b).
    let conj_swap = |x: &CMatrix| -> CMatrix {
        CMatrix::from_fn(d * d, d * d, |r, c| {
            let (rb, rc) = (r / d, r % d);
            let (cb, cc) = (c / d, c % d);
            x.get(rc * d + rb, cc * d + cb).conj()
        })
    };
    let dagger_closed = approx_eq(&conj_swap(m), m, tol)?;

    let idvec = CMatrix::from_fn(d * d, 1, |r, _| if r / d == r % d { C_ONE } else { C_ZERO });
    let contains_identity = approx_eq(&m.matmul(&idvec)?, &idvec, tol)?;
    Ok(OpsysReport {
        projector,
        dagger_closed,
        contains_identity,
    })
}

/// Converts a quantum graph on the matrix algebra Mat_k into the projector
/// onto its operator system, by closing the outer legs of the edge projector
/// into loops and scaling by 1/k^2.
pub fn graph_to_operator_system(
    qg: &QuantumGraph,
    tol: &Tolerance,
) -> Result<OperatorSystemProjector> {
    let k = matrix_algebra_order(&qg.algebra, tol)?;
    let r = edge_projector(qg);
    let n = k * k;
    let scale = 1.0 / (n as f64);
    let p = CMatrix::from_fn(n, n, |row, col| {
        let (j, l) = (row / k, row % k);
        let (jp, lp) = (col / k, col % k);
        let mut acc = C_ZERO;
        for i in 0..k {
            for m in 0..k {
                acc += r.get((i * k + j) * n + (l * k + m), (i * k + jp) * n + (lp * k + m));
            }
        }
        acc * scale
    });
    let osp = OperatorSystemProjector::new(k, p)?;
    let rep = check_operator_system(&osp, tol)?;
    if !rep.passed() {
        return Err(Error::PostconditionFailure(format!(
            "converted projector fails the operator-system axioms \
             (projector {:e}, dagger {:e}, identity {:e})",
            rep.projector.residual, rep.dagger_closed.residual, rep.contains_identity.residual
        )));
    }
    Ok(osp)
}

/// Converts an operator system on C^k back into a quantum graph on Mat_k by
/// tensoring identity wires onto the outer legs and recovering the adjacency.
pub fn operator_system_to_graph(
    osp: &OperatorSystemProjector,
    tol: &Tolerance,
) -> Result<QuantumGraph> {
    let rep = check_operator_system(osp, tol)?;
    if !rep.passed() {
        return Err(Error::InvalidArgument(format!(
            "not an operator system (projector {:e}, dagger {:e}, identity {:e})",
            rep.projector.residual, rep.dagger_closed.residual, rep.contains_identity.residual
        )));
    }
    let k = osp.h_dim;
    let n = k * k;
    let alg = matrix_algebra(k)?;
    let big = CMatrix::from_fn(n * n, n * n, |row, col| {
        let a1 = row / n;
        let a2 = row % n;
        let (i, j) = (a1 / k, a1 % k);
        let (l, m) = (a2 / k, a2 % k);
        let c1 = col / n;
        let c2 = col % n;
        let (ip, jp) = (c1 / k, c1 % k);
        let (lp, mp) = (c2 / k, c2 % k);
        if i == ip && m == mp {
            osp.matrix.get(j * k + l, jp * k + lp)
        } else {
            C_ZERO
        }
    });
    let r = QuantumRelation::new(alg.clone(), alg, big)?;
    relation_to_adjacency(&r, tol)
}

fn matrix_algebra_order(a: &Ssfa, tol: &Tolerance) -> Result<usize> {
    let n = a.dim();
    let k = (n as f64).sqrt().round() as usize;
    if k * k != n || !a.approx_same(&matrix_algebra(k)?, tol) {
        return Err(Error::NotMatrixAlgebra);
    }
    Ok(k)
}
