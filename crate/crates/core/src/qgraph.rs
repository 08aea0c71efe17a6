//! Quantum graphs: a quantum set of vertices with a quantum adjacency matrix,
//! plus homomorphism and isomorphism verification down to the classical
//! projector forms.

use crate::error::{Error, Result};
use crate::frobenius::{classical_algebra, Ssfa};
use crate::qfun::{dagger_dual, qfun_to_family, verify_qbij, verify_qfun, ProjectorFamily, QuantumFunction};
use crate::tensor::{approx_eq, kron, CMatrix, Check, Tolerance, C_ONE, C_ZERO};

/// Reflexivity classification of a quantum adjacency matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Reflexivity {
    Reflexive,
    Irreflexive,
    Neither,
}

impl std::fmt::Display for Reflexivity {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Reflexivity::Reflexive => write!(f, "reflexive"),
            Reflexivity::Irreflexive => write!(f, "irreflexive"),
            Reflexivity::Neither => write!(f, "neither"),
        }
    }
}

/// A quantum graph: algebra of vertices plus a validated adjacency matrix.
#[derive(Debug, Clone)]
pub struct QuantumGraph {
    pub algebra: Ssfa,
    pub adjacency: CMatrix,
    pub reflexivity: Reflexivity,
}

/// Classical graph with an explicit loop policy.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassicalGraph {
    pub vertices: usize,
    edges: Vec<(usize, usize)>,
    pub reflexive: bool,
}

impl ClassicalGraph {
    pub fn new(vertices: usize, edges: Vec<(usize, usize)>, reflexive: bool) -> Result<Self> {
        let mut normalized: Vec<(usize, usize)> = Vec::new();
        for (i, j) in edges {
            if i >= vertices || j >= vertices {
                return Err(Error::InvalidArgument(format!(
                    "edge ({i}, {j}) out of range for {vertices} vertices"
                )));
            }
            if i == j {
                return Err(Error::InvalidArgument(
                    "loops are carried by the reflexive flag, not the edge list".into(),
                ));
            }
            let e = (i.min(j), i.max(j));
            if !normalized.contains(&e) {
                normalized.push(e);
            }
        }
        normalized.sort();
        Ok(ClassicalGraph {
            vertices,
            edges: normalized,
            reflexive,
        })
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn adjacent(&self, i: usize, j: usize) -> bool {
        if i == j {
            return self.reflexive;
        }
        self.edges.contains(&(i.min(j), i.max(j)))
    }

    pub fn adjacency_matrix(&self) -> CMatrix {
        CMatrix::from_fn(self.vertices, self.vertices, |i, j| {
            if self.adjacent(i, j) {
                C_ONE
            } else {
                C_ZERO
            }
        })
    }

    pub fn neighbours(&self, v: usize) -> Vec<usize> {
        (0..self.vertices).filter(|&w| self.adjacent(v, w)).collect()
    }

    /// Brute-force test: is `image` a graph homomorphism into `other`?
    pub fn is_homomorphism(&self, image: &[usize], other: &ClassicalGraph) -> bool {
        if image.len() != self.vertices || image.iter().any(|&w| w >= other.vertices) {
            return false;
        }
        for v in 0..self.vertices {
            for w in 0..self.vertices {
                if self.adjacent(v, w) && !other.adjacent(image[v], image[w]) {
                    return false;
                }
            }
        }
        true
    }

    /// Brute-force test: is `image` a graph isomorphism onto `other`?
    pub fn is_isomorphism(&self, image: &[usize], other: &ClassicalGraph) -> bool {
        if self.vertices != other.vertices || image.len() != self.vertices {
            return false;
        }
        let mut seen = vec![false; self.vertices];
        for &w in image {
            if w >= self.vertices || seen[w] {
                return false;
            }
            seen[w] = true;
        }
        for v in 0..self.vertices {
            for w in 0..self.vertices {
                if self.adjacent(v, w) != other.adjacent(image[v], image[w]) {
                    return false;
                }
            }
        }
        true
    }
}

/// Report from [`check_qgraph`].
#[derive(Debug, Clone)]
pub struct QGraphReport {
    pub schur_idempotent: Check,
    pub self_adjoint: Check,
    pub symmetric: Check,
    pub reflexivity: Reflexivity,
}

impl QGraphReport {
    pub fn passed(&self) -> bool {
        self.schur_idempotent.pass && self.self_adjoint.pass && self.symmetric.pass
    }
}

/// Checks the quantum-adjacency axioms for a candidate matrix g on `a`:
/// Schur idempotence m (G (x) G) m† == G, self-adjointness, invariance under
/// the Frobenius transpose, and the reflexivity classification via
/// m (G (x) 1) m† against 1 and 0.
pub fn check_qgraph(a: &Ssfa, g: &CMatrix, tol: &Tolerance) -> Result<QGraphReport> {
    let n = a.dim();
    if g.rows != n || g.cols != n {
        return Err(Error::ShapeMismatch {
            expected: format!("{n}x{n}"),
            got: format!("{}x{}", g.rows, g.cols),
        });
    }
    let id = CMatrix::identity(n);
    let delta = a.comult();
    let schur = a.mult().matmul(&kron(g, g))?.matmul(&delta)?;
    let schur_idempotent = approx_eq(&schur, g, tol)?;
    let self_adjoint = approx_eq(&crate::tensor::dagger(g), g, tol)?;
    // Frobenius transpose: (cap (x) 1)(1 (x) G (x) 1)(1 (x) cup) == G
    let transpose = kron(&a.cap(), &id)
        .matmul(&kron(&id, &kron(g, &id)))?
        .matmul(&kron(&id, &a.cup()))?;
    let symmetric = approx_eq(&transpose, g, tol)?;

    let diag = a.mult().matmul(&kron(g, &id))?.matmul(&delta)?;
    let refl = approx_eq(&diag, &id, tol)?;
    let irrefl = approx_eq(&diag, &CMatrix::zeros(n, n), tol)?;
    let reflexivity = if refl.pass {
        Reflexivity::Reflexive
    } else if irrefl.pass {
        Reflexivity::Irreflexive
    } else {
        Reflexivity::Neither
    };
    Ok(QGraphReport {
        schur_idempotent,
        self_adjoint,
        symmetric,
        reflexivity,
    })
}

impl QuantumGraph {
    /// Validates the adjacency axioms at construction.
    pub fn new(algebra: Ssfa, adjacency: CMatrix, tol: &Tolerance) -> Result<Self> {
        let report = check_qgraph(&algebra, &adjacency, tol)?;
        if !report.passed() {
            return Err(Error::InvalidArgument(format!(
                "not a quantum adjacency matrix (schur {:e}, self-adjoint {:e}, symmetric {:e})",
                report.schur_idempotent.residual,
                report.self_adjoint.residual,
                report.symmetric.residual
            )));
        }
        Ok(QuantumGraph {
            algebra,
            adjacency,
            reflexivity: report.reflexivity,
        })
    }

    /// The complete quantum graph u eps on an algebra.
    pub fn complete(algebra: Ssfa, tol: &Tolerance) -> Result<Self> {
        let g = algebra.unit().matmul(&algebra.counit())?;
        QuantumGraph::new(algebra, g, tol)
    }

    /// The reflexive-only quantum graph (identity adjacency).
    pub fn loops_only(algebra: Ssfa, tol: &Tolerance) -> Result<Self> {
        let g = CMatrix::identity(algebra.dim());
        QuantumGraph::new(algebra, g, tol)
    }
}

/// Embeds a classical graph as a quantum graph on the function algebra.
pub fn classical_to_quantum(g: &ClassicalGraph, tol: &Tolerance) -> Result<QuantumGraph> {
    QuantumGraph::new(classical_algebra(g.vertices)?, g.adjacency_matrix(), tol)
}

/// Reads a classical graph off a quantum graph on a classical algebra with
/// 0/1 adjacency entries.
pub fn quantum_to_classical(qg: &QuantumGraph, tol: &Tolerance) -> Result<ClassicalGraph> {
    if !qg.algebra.is_classical(tol) {
        return Err(Error::NotClassical("vertex algebra is not classical".into()));
    }
    let n = qg.algebra.dim();
    let mut edges = Vec::new();
    let mut diag_ones = 0usize;
    for i in 0..n {
        for j in 0..n {
            let v = qg.adjacency.get(i, j);
            let is_one = (v - C_ONE).norm() <= tol.rel.max(1e-9);
            let is_zero = v.norm() <= tol.rel.max(1e-9);
            if !is_one && !is_zero {
                return Err(Error::NotClassical(format!(
                    "adjacency entry ({i}, {j}) = {v} is not 0/1"
                )));
            }
            if is_one {
                if i == j {
                    diag_ones += 1;
                } else if i < j {
                    edges.push((i, j));
                }
            }
        }
    }
    let reflexive = diag_ones == n;
    if diag_ones != 0 && !reflexive {
        return Err(Error::NotClassical("mixed loop pattern on the diagonal".into()));
    }
    ClassicalGraph::new(n, edges, reflexive)
}

/// Complement via the Schur unit: G^c = u eps - G. Swaps reflexive and
/// irreflexive classes.
pub fn complement(qg: &QuantumGraph, tol: &Tolerance) -> Result<QuantumGraph> {
    let all = qg.algebra.unit().matmul(&qg.algebra.counit())?;
    let g = all.sub(&qg.adjacency)?;
    QuantumGraph::new(qg.algebra.clone(), g, tol).map_err(|_| {
        Error::PostconditionFailure("complement fails the adjacency axioms".into())
    })
}

/// The edge projector P_G = (1 (x) m)(1 (x) G (x) 1)(delta (x) 1) on
/// A (x) A; classically it scales e_v (x) e_w by G_{w,v}.
pub fn edge_projector(qg: &QuantumGraph) -> CMatrix {
    let a = &qg.algebra;
    let n = a.dim();
    let id = CMatrix::identity(n);
    kron(&id, a.mult())
        .matmul(&kron(&id, &kron(&qg.adjacency, &id)))
        .unwrap()
        .matmul(&kron(&a.comult(), &id))
        .unwrap()
}

/// The mirrored construction (m (x) 1)(1 (x) G (x) 1)(1 (x) delta); equal to
/// [`edge_projector`] for valid quantum graphs.
pub fn edge_projector_mirrored(qg: &QuantumGraph) -> CMatrix {
    let a = &qg.algebra;
    let n = a.dim();
    let id = CMatrix::identity(n);
    kron(a.mult(), &id)
        .matmul(&kron(&id, &kron(&qg.adjacency, &id)))
        .unwrap()
        .matmul(&kron(&id, &a.comult()))
        .unwrap()
}

/// Report from [`verify_hom`].
#[derive(Debug, Clone)]
pub struct HomReport {
    /// The adjacency-preservation equation.
    pub diagrammatic: Check,
    /// The projector-form condition, evaluated for classical endpoints only.
    pub projector_form: Option<Check>,
    /// Both verdicts agree when the projector form applies.
    pub agree: bool,
}

impl HomReport {
    pub fn passed(&self) -> bool {
        self.diagrammatic.pass && self.projector_form.map(|c| c.pass).unwrap_or(true)
    }
}

/// Verifies that a quantum function is a quantum graph homomorphism:
/// with D(P) = (1_B (x) P)(P (x) 1_A),
///   D(P)(1_H (x) P_G) == (P_H (x) 1_H) D(P)(1_H (x) P_G).
pub fn verify_hom(
    f: &QuantumFunction,
    g: &QuantumGraph,
    h: &QuantumGraph,
    tol: &Tolerance,
) -> Result<HomReport> {
    if !f.source.approx_same(&g.algebra, tol) || !f.target.approx_same(&h.algebra, tol) {
        return Err(Error::TypeMismatch(
            "endpoints of the quantum function do not match the graphs".into(),
        ));
    }
    let report = verify_qfun(f, tol)?;
    if !report.passed() {
        return Err(Error::NotQuantumFunction(
            "homomorphism checks need a verified quantum function".into(),
        ));
    }
    let na = g.algebra.dim();
    let nb = h.algebra.dim();
    let d = f.h_dim;
    let ia = CMatrix::identity(na);
    let ib = CMatrix::identity(nb);
    let ih = CMatrix::identity(d);
    let dp = kron(&ib, &f.matrix).matmul(&kron(&f.matrix, &ia))?;
    let base = dp.matmul(&kron(&ih, &edge_projector(g)))?;
    let lhs = base.clone();
    let rhs = kron(&edge_projector(h), &ih).matmul(&base)?;
    let diagrammatic = approx_eq(&lhs, &rhs, tol)?;

    let projector_form = if f.source.is_classical(tol) && f.target.is_classical(tol) {
        let fam = qfun_to_family(f, tol)?;
        let cg = quantum_to_classical(g, tol)?;
        let ch = quantum_to_classical(h, tol)?;
        Some(projector_hom_condition(&fam, &cg, &ch, tol))
    } else {
        None
    };
    let agree = projector_form
        .map(|c| c.pass == diagrammatic.pass)
        .unwrap_or(true);
    Ok(HomReport {
        diagrammatic,
        projector_form,
        agree,
    })
}

/// v ~ v' and w !~ w' implies P[v'][w'] P[v][w] == 0.
fn projector_hom_condition(
    fam: &ProjectorFamily,
    g: &ClassicalGraph,
    h: &ClassicalGraph,
    tol: &Tolerance,
) -> Check {
    let mut worst: f64 = 0.0;
    let zero = CMatrix::zeros(fam.h_dim, fam.h_dim);
    for v in 0..g.vertices {
        for vp in 0..g.vertices {
            if !g.adjacent(v, vp) {
                continue;
            }
            for w in 0..h.vertices {
                for wp in 0..h.vertices {
                    if h.adjacent(w, wp) {
                        continue;
                    }
                    let prod = fam.projectors[vp][wp]
                        .matmul(&fam.projectors[v][w])
                        .unwrap();
                    worst = worst.max(approx_eq(&prod, &zero, tol).unwrap().residual);
                }
            }
        }
    }
    Check::new(worst <= tol.rel, worst)
}

/// Report from [`verify_iso`].
#[derive(Debug, Clone)]
pub struct IsoReport {
    /// P (1_H (x) G) == (G' (x) 1_H) P.
    pub adjacency_exchange: Check,
    /// The dagger dual is a homomorphism in the reverse direction.
    pub dual_is_hom: Check,
}

impl IsoReport {
    pub fn passed(&self) -> bool {
        self.adjacency_exchange.pass && self.dual_is_hom.pass
    }
}

/// Verifies that a quantum bijection is a quantum graph isomorphism, and that
/// its dagger dual is a homomorphism back.
pub fn verify_iso(
    f: &QuantumFunction,
    g: &QuantumGraph,
    h: &QuantumGraph,
    tol: &Tolerance,
) -> Result<IsoReport> {
    if !f.source.approx_same(&g.algebra, tol) || !f.target.approx_same(&h.algebra, tol) {
        return Err(Error::TypeMismatch(
            "endpoints of the quantum function do not match the graphs".into(),
        ));
    }
    let qb = verify_qbij(f, tol)?;
    if !qb.passed() {
        return Err(Error::NotBijection(format!(
            "isomorphism checks need a quantum bijection (qb1 {:e}, qb2 {:e})",
            qb.qb1.residual, qb.qb2.residual
        )));
    }
    let d = f.h_dim;
    let ih = CMatrix::identity(d);
    let lhs = f.matrix.matmul(&kron(&ih, &g.adjacency))?;
    let rhs = kron(&h.adjacency, &ih).matmul(&f.matrix)?;
    let adjacency_exchange = approx_eq(&lhs, &rhs, tol)?;

    let dual = dagger_dual(f, tol)?;
    let hom = verify_hom(&dual, h, g, tol)?;
    let dual_is_hom = Check::new(hom.passed(), hom.diagrammatic.residual);
    Ok(IsoReport {
        adjacency_exchange,
        dual_is_hom,
    })
}

/// Report from [`ppm_iso_conditions`].
#[derive(Debug, Clone)]
pub struct PpmIsoReport {
    /// Neighbourhood sums: sum_{i ~ a} P[i][b] == sum_{j ~ b} P[a][j].
    pub cond1: Check,
    /// Mismatched-adjacency products vanish.
    pub cond2: Check,
    pub agree: bool,
}

/// The two classical projective-permutation-matrix formulations of graph
/// isomorphism; they are equivalent, and the report records both verdicts.
pub fn ppm_iso_conditions(
    p: &ProjectorFamily,
    g: &ClassicalGraph,
    h: &ClassicalGraph,
    tol: &Tolerance,
) -> Result<PpmIsoReport> {
    if p.x_size != g.vertices || p.y_size != h.vertices {
        return Err(Error::ShapeMismatch {
            expected: format!("{}x{} family", g.vertices, h.vertices),
            got: format!("{}x{}", p.x_size, p.y_size),
        });
    }
    let rows = p.check_rows(tol);
    let cols = p.check_cols(tol);
    if !rows.pass || !cols.pass {
        return Err(Error::NotPpm(format!(
            "row residual {:e}, column residual {:e}",
            rows.residual, cols.residual
        )));
    }
    let d = p.h_dim;
    let mut worst1: f64 = 0.0;
    for a in 0..g.vertices {
        for b in 0..h.vertices {
            let mut lhs = CMatrix::zeros(d, d);
            for i in g.neighbours(a) {
                lhs = lhs.add(&p.projectors[i][b])?;
            }
            let mut rhs = CMatrix::zeros(d, d);
            for j in h.neighbours(b) {
                rhs = rhs.add(&p.projectors[a][j])?;
            }
            worst1 = worst1.max(approx_eq(&lhs, &rhs, tol)?.residual);
        }
    }
    let cond1 = Check::new(worst1 <= tol.rel * (1.0 + g.vertices as f64), worst1);

    let zero = CMatrix::zeros(d, d);
    let mut worst2: f64 = 0.0;
    for v in 0..g.vertices {
        for vp in 0..g.vertices {
            for w in 0..h.vertices {
                for wp in 0..h.vertices {
                    let mismatch = g.adjacent(v, vp) != h.adjacent(w, wp);
                    if !mismatch {
                        continue;
                    }
                    let prod = p.projectors[vp][wp].matmul(&p.projectors[v][w])?;
                    worst2 = worst2.max(approx_eq(&prod, &zero, tol)?.residual);
                }
            }
        }
    }
    let cond2 = Check::new(worst2 <= tol.rel, worst2);
    Ok(PpmIsoReport {
        agree: cond1.pass == cond2.pass,
        cond1,
        cond2,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{classical_fn, complete_graph, cycle_graph, path_graph, permutations, qls4_family};
    use crate::frobenius::matrix_algebra;
    use crate::qfun::family_to_qfun;
    use num_complex::Complex64;

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    #[test]
    fn complete_graph_is_valid_irreflexive() {
        let k3 = complete_graph(3);
        let qg = classical_to_quantum(&k3, &tol()).unwrap();
        assert_eq!(qg.reflexivity, Reflexivity::Irreflexive);
        let r = check_qgraph(&qg.algebra, &qg.adjacency, &tol()).unwrap();
        assert!(r.passed());
    }

    #[test]
    fn fractional_entry_fails_schur() {
        let a = classical_algebra(2).unwrap();
        let g = CMatrix::from_real(2, 2, &[0.0, 0.5, 0.5, 0.0]).unwrap();
        let r = check_qgraph(&a, &g, &tol()).unwrap();
        assert!(!r.schur_idempotent.pass);
    }

    #[test]
    fn complete_quantum_graph_on_any_algebra() {
        for a in [classical_algebra(3).unwrap(), matrix_algebra(2).unwrap()] {
            let qg = QuantumGraph::complete(a.clone(), &tol()).unwrap();
            assert_eq!(qg.reflexivity, Reflexivity::Reflexive);
            // Schur unit identity: m (u eps (x) G) delta == G for any valid G
            let g2 = QuantumGraph::loops_only(a.clone(), &tol()).unwrap();
            let n = a.dim();
            let lhs = a
                .mult()
                .matmul(&kron(&qg.adjacency, &g2.adjacency))
                .unwrap()
                .matmul(&a.comult())
                .unwrap();
            assert!(approx_eq(&lhs, &g2.adjacency, &tol()).unwrap().pass);
            let _ = n;
        }
    }

    #[test]
    fn classical_roundtrips() {
        for g in [
            complete_graph(4),
            path_graph(3),
            ClassicalGraph::new(1, vec![], true).unwrap(),
        ] {
            let qg = classical_to_quantum(&g, &tol()).unwrap();
            let back = quantum_to_classical(&qg, &tol()).unwrap();
            assert_eq!(back, g);
        }
        // single vertex with loop has G = [[1]]
        let loopy = ClassicalGraph::new(1, vec![], true).unwrap();
        let qg = classical_to_quantum(&loopy, &tol()).unwrap();
        assert_eq!(qg.adjacency.get(0, 0), C_ONE);
        assert_eq!(qg.reflexivity, Reflexivity::Reflexive);

        let p3 = path_graph(3);
        assert_eq!(p3.edges().len(), 2);
    }

    #[test]
    fn complement_swaps_reflexivity() {
        let k3 = classical_to_quantum(&complete_graph(3), &tol()).unwrap();
        let c = complement(&k3, &tol()).unwrap();
        assert_eq!(c.reflexivity, Reflexivity::Reflexive);
        // K_n complement is the loops-only graph
        assert!(approx_eq(&c.adjacency, &CMatrix::identity(3), &tol()).unwrap().pass);
        let cc = complement(&c, &tol()).unwrap();
        assert!(approx_eq(&cc.adjacency, &k3.adjacency, &tol()).unwrap().pass);
    }

    #[test]
    fn complement_of_complete_quantum_graph_is_zero() {
        let a = matrix_algebra(2).unwrap();
        let qg = QuantumGraph::complete(a, &tol()).unwrap();
        let c = complement(&qg, &tol()).unwrap();
        assert!(c.adjacency.norm() < 1e-12);
        assert_eq!(c.reflexivity, Reflexivity::Irreflexive);
    }

    #[test]
    fn edge_projector_classical_action() {
        let k2 = classical_to_quantum(&complete_graph(2), &tol()).unwrap();
        let p = edge_projector(&k2);
        // projects onto span{e0 (x) e1, e1 (x) e0}
        let expect = CMatrix::from_real(
            4,
            4,
            &[
                0.0, 0.0, 0.0, 0.0, //
                0.0, 1.0, 0.0, 0.0, //
                0.0, 0.0, 1.0, 0.0, //
                0.0, 0.0, 0.0, 0.0,
            ],
        )
        .unwrap();
        assert!(approx_eq(&p, &expect, &tol()).unwrap().pass);

        // empty graph: zero projector
        let empty = classical_to_quantum(&ClassicalGraph::new(2, vec![], false).unwrap(), &tol()).unwrap();
        assert!(edge_projector(&empty).norm() < 1e-12);
    }

    #[test]
    fn edge_projector_mirror_agrees() {
        for qg in [
            classical_to_quantum(&cycle_graph(4), &tol()).unwrap(),
            QuantumGraph::complete(matrix_algebra(2).unwrap(), &tol()).unwrap(),
            QuantumGraph::loops_only(matrix_algebra(2).unwrap(), &tol()).unwrap(),
        ] {
            let a = edge_projector(&qg);
            let b = edge_projector_mirrored(&qg);
            assert!(approx_eq(&a, &b, &tol()).unwrap().pass);
            // and it is a projector
            assert!(approx_eq(&a.matmul(&a).unwrap(), &a, &tol()).unwrap().pass);
            assert!(approx_eq(&crate::tensor::dagger(&a), &a, &tol()).unwrap().pass);
        }
    }

    #[test]
    fn k3_homomorphisms_are_the_permutations() {
        let k3c = complete_graph(3);
        let k3 = classical_to_quantum(&k3c, &tol()).unwrap();
        for perm in permutations(3) {
            let f = classical_fn(&perm, 3);
            let r = verify_hom(&f, &k3, &k3, &tol()).unwrap();
            assert!(r.passed());
            assert!(r.agree);
            assert!(k3c.is_homomorphism(&perm, &k3c));
        }
        // non-injective maps collapse an edge
        let f = classical_fn(&[0, 0, 1], 3);
        let r = verify_hom(&f, &k3, &k3, &tol()).unwrap();
        assert!(!r.passed());
        assert!(r.agree);
    }

    #[test]
    fn constant_map_fails_on_k2() {
        let k2 = classical_to_quantum(&complete_graph(2), &tol()).unwrap();
        let f = classical_fn(&[0, 0], 2);
        let r = verify_hom(&f, &k2, &k2, &tol()).unwrap();
        assert!(!r.passed());
        assert!(r.agree);
    }

    #[test]
    fn identity_is_a_homomorphism_on_quantum_graphs() {
        for qg in [
            QuantumGraph::complete(matrix_algebra(2).unwrap(), &tol()).unwrap(),
            QuantumGraph::loops_only(matrix_algebra(2).unwrap(), &tol()).unwrap(),
            classical_to_quantum(&cycle_graph(5), &tol()).unwrap(),
        ] {
            let id = crate::qfun::identity_qfun(&qg.algebra);
            let r = verify_hom(&id, &qg, &qg, &tol()).unwrap();
            assert!(r.passed());
        }
    }

    #[test]
    fn cycle_rotation_is_an_isomorphism() {
        let c4 = classical_to_quantum(&cycle_graph(4), &tol()).unwrap();
        let rot = classical_fn(&[1, 2, 3, 0], 4);
        let r = verify_iso(&rot, &c4, &c4, &tol()).unwrap();
        assert!(r.passed());
    }

    #[test]
    fn path_breaking_permutation_fails() {
        // P3: 0 - 1 - 2; swapping 0 and 1 is not an automorphism.
        let p3c = path_graph(3);
        let p3 = classical_to_quantum(&p3c, &tol()).unwrap();
        let f = classical_fn(&[1, 0, 2], 3);
        let r = verify_iso(&f, &p3, &p3, &tol()).unwrap();
        assert!(!r.passed());
        // brute force: the automorphism group of P3 has order 2
        let autos: Vec<_> = permutations(3)
            .into_iter()
            .filter(|p| p3c.is_isomorphism(p, &p3c))
            .collect();
        assert_eq!(autos.len(), 2);
    }

    #[test]
    fn qls_iso_verdict_matches_ppm_conditions() {
        let k4c = complete_graph(4);
        let k4 = classical_to_quantum(&k4c, &tol()).unwrap();
        let fam = qls4_family();
        let f = family_to_qfun(&fam, &tol()).unwrap();
        let iso = verify_iso(&f, &k4, &k4, &tol()).unwrap();
        let ppm = ppm_iso_conditions(&fam, &k4c, &k4c, &tol()).unwrap();
        assert!(ppm.agree);
        assert_eq!(iso.passed(), ppm.cond1.pass);
        // every quantum bijection preserves the complete graph
        assert!(iso.passed());
    }

    #[test]
    fn permutation_ppm_on_isomorphic_and_non_isomorphic_graphs() {
        let k3 = complete_graph(3);
        let p3 = path_graph(3);
        let id3 = [0usize, 1, 2];
        let fam = |perm: &[usize]| {
            let grid: Vec<Vec<CMatrix>> = (0..3)
                .map(|x| {
                    (0..3)
                        .map(|y| {
                            CMatrix::new(
                                1,
                                1,
                                vec![if perm[x] == y {
                                    C_ONE
                                } else {
                                    Complex64::new(0.0, 0.0)
                                }],
                            )
                            .unwrap()
                        })
                        .collect()
                })
                .collect();
            ProjectorFamily::new(grid).unwrap()
        };
        let r = ppm_iso_conditions(&fam(&id3), &k3, &k3, &tol()).unwrap();
        assert!(r.cond1.pass && r.cond2.pass && r.agree);
        let r = ppm_iso_conditions(&fam(&id3), &k3, &p3, &tol()).unwrap();
        assert!(!r.cond1.pass && !r.cond2.pass && r.agree);
    }

    #[test]
    fn permutation_iso_sets_match_brute_force_on_five_vertices() {
        let graphs = [cycle_graph(5), path_graph(5), complete_graph(5)];
        for g in &graphs {
            for h in &graphs {
                let qg = classical_to_quantum(g, &tol()).unwrap();
                let qh = classical_to_quantum(h, &tol()).unwrap();
                let mut verified = Vec::new();
                let mut brute = Vec::new();
                for perm in permutations(5) {
                    let f = classical_fn(&perm, 5);
                    if verify_iso(&f, &qg, &qh, &tol()).unwrap().passed() {
                        verified.push(perm.clone());
                    }
                    if g.is_isomorphism(&perm, h) {
                        brute.push(perm);
                    }
                }
                assert_eq!(verified, brute);
            }
        }
    }

    #[test]
    fn ueb_bijection_is_iso_of_complete_quantum_graphs() {
        // any quantum bijection preserves the complete adjacency u eps, here
        // with a noncommutative source algebra
        let t = tol();
        let f = crate::qfun::ueb_to_bijection(&crate::corpus::pauli_basis(), &t).unwrap();
        let g = QuantumGraph::complete(f.source.clone(), &t).unwrap();
        let h = QuantumGraph::complete(f.target.clone(), &t).unwrap();
        let r = verify_iso(&f, &g, &h, &t).unwrap();
        assert!(r.passed());
        let hom = verify_hom(&f, &g, &h, &t).unwrap();
        assert!(hom.passed());
        assert!(hom.projector_form.is_none());
    }

    #[test]
    fn iso_implies_hom_in_both_directions() {
        let c4 = classical_to_quantum(&cycle_graph(4), &tol()).unwrap();
        let rot = classical_fn(&[1, 2, 3, 0], 4);
        let r = verify_iso(&rot, &c4, &c4, &tol()).unwrap();
        assert!(r.passed());
        assert!(verify_hom(&rot, &c4, &c4, &tol()).unwrap().passed());
        let dual = dagger_dual(&rot, &tol()).unwrap();
        assert!(verify_hom(&dual, &c4, &c4, &tol()).unwrap().passed());
    }
}
