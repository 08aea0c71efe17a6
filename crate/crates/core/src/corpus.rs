//! Named example data: Latin squares, the quantum Latin square on four
//! points, unitary error bases, block projector families and small random
//! generators. Used by the command-line `generate` subcommand and by the
//! test suites.

use crate::error::{Error, Result};
use crate::frobenius::classical_algebra;
use crate::qfun::{family_to_qfun, ProjectorFamily, QuantumFunction};
use crate::qgraph::ClassicalGraph;
use crate::tensor::{dagger, CMatrix, Tolerance, C_ONE, C_ZERO};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn rank1(v: &[Complex64]) -> CMatrix {
    let d = v.len();
    let col = CMatrix::new(d, 1, v.to_vec()).unwrap();
    let nrm = col.norm();
    let col = col.scale(c(1.0 / nrm, 0.0));
    col.matmul(&dagger(&col)).unwrap()
}

/// The 1-dimensional quantum function of a classical map x -> image[x].
pub fn classical_fn(image: &[usize], y_size: usize) -> QuantumFunction {
    let x_size = image.len();
    let m = CMatrix::from_fn(y_size, x_size, |y, x| {
        if image[x] == y {
            C_ONE
        } else {
            C_ZERO
        }
    });
    QuantumFunction::new(
        classical_algebra(x_size).unwrap(),
        classical_algebra(y_size).unwrap(),
        1,
        m,
    )
    .unwrap()
}

/// The cyclic 3x3 Latin square as a projector family: P[x][y] projects onto
/// basis vector (x + y) mod 3.
pub fn latin3_family() -> ProjectorFamily {
    let l = [[0usize, 1, 2], [1, 2, 0], [2, 0, 1]];
    let grid: Vec<Vec<CMatrix>> = (0..3)
        .map(|x| {
            (0..3)
                .map(|y| {
                    let mut e = [C_ZERO; 3];
                    e[l[x][y]] = C_ONE;
                    rank1(&e)
                })
                .collect()
        })
        .collect();
    ProjectorFamily::new(grid).unwrap()
}

/// A quantum Latin square on four points that is simple as a quantum
/// bijection: rows interleave the standard basis with the Bell-type vectors
/// psi+- = (e1 +- e2)/sqrt(2), phi+ = (i e0 + 2 e3)/sqrt(5),
/// phi- = (2 e0 + i e3)/sqrt(5).
pub fn qls4_family() -> ProjectorFamily {
    let s2 = 1.0 / 2.0_f64.sqrt();
    let s5 = 1.0 / 5.0_f64.sqrt();
    let e0 = [c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)];
    let e1 = [c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)];
    let e2 = [c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)];
    let e3 = [c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)];
    let psi_p = [c(0.0, 0.0), c(s2, 0.0), c(s2, 0.0), c(0.0, 0.0)];
    let psi_m = [c(0.0, 0.0), c(s2, 0.0), c(-s2, 0.0), c(0.0, 0.0)];
    let phi_p = [c(0.0, s5), c(0.0, 0.0), c(0.0, 0.0), c(2.0 * s5, 0.0)];
    let phi_m = [c(2.0 * s5, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, s5)];
    let rows = [
        [e0, e1, e2, e3],
        [psi_m, phi_p, phi_m, psi_p],
        [psi_p, phi_m, phi_p, psi_m],
        [e3, e2, e1, e0],
    ];
    let grid: Vec<Vec<CMatrix>> = rows
        .iter()
        .map(|row| row.iter().map(|v| rank1(v)).collect())
        .collect();
    ProjectorFamily::new(grid).unwrap()
}

/// The two-block 4x4 family built from projectors p and q on C^2.
pub fn block_ppm_family(p: &CMatrix, q: &CMatrix) -> Result<ProjectorFamily> {
    if p.rows != 2 || p.cols != 2 || q.rows != 2 || q.cols != 2 {
        return Err(Error::ShapeMismatch {
            expected: "2x2 projectors".into(),
            got: format!("{}x{} and {}x{}", p.rows, p.cols, q.rows, q.cols),
        });
    }
    let id = CMatrix::identity(2);
    let z = CMatrix::zeros(2, 2);
    let cp = id.sub(p)?;
    let cq = id.sub(q)?;
    ProjectorFamily::new(vec![
        vec![p.clone(), cp.clone(), z.clone(), z.clone()],
        vec![cp, p.clone(), z.clone(), z.clone()],
        vec![z.clone(), z.clone(), q.clone(), cq.clone()],
        vec![z.clone(), z.clone(), cq, q.clone()],
    ])
}

/// Seeded random rank-1 projectors p, q on C^2, redrawn until they fail to
/// commute.
pub fn random_noncommuting_projectors(seed: u64) -> (CMatrix, CMatrix) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let v: Vec<Complex64> = (0..2)
            .map(|_| c(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5))
            .collect();
        let w: Vec<Complex64> = (0..2)
            .map(|_| c(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5))
            .collect();
        let p = rank1(&v);
        let q = rank1(&w);
        let comm = p.matmul(&q).unwrap().sub(&q.matmul(&p).unwrap()).unwrap();
        if comm.norm() > 0.05 {
            return (p, q);
        }
    }
}

/// The block family for a given seed, as a quantum function.
pub fn block_ppm(seed: u64, tol: &Tolerance) -> QuantumFunction {
    let (p, q) = random_noncommuting_projectors(seed);
    family_to_qfun(&block_ppm_family(&p, &q).unwrap(), tol).unwrap()
}

/// Pauli operators 1, X, Y, Z: the standard unitary error basis on C^2.
pub fn pauli_basis() -> Vec<CMatrix> {
    vec![
        CMatrix::identity(2),
        CMatrix::from_real(2, 2, &[0.0, 1.0, 1.0, 0.0]).unwrap(),
        CMatrix::new(2, 2, vec![C_ZERO, c(0.0, -1.0), c(0.0, 1.0), C_ZERO]).unwrap(),
        CMatrix::from_real(2, 2, &[1.0, 0.0, 0.0, -1.0]).unwrap(),
    ]
}

/// Shift-and-multiply unitary error basis on C^n: X^a Z^b for the cyclic
/// shift X and the phase operator Z.
pub fn shift_multiply_basis(n: usize) -> Vec<CMatrix> {
    let omega = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI / n as f64);
    let mut basis = Vec::with_capacity(n * n);
    for a in 0..n {
        for b in 0..n {
            basis.push(CMatrix::from_fn(n, n, |r, col| {
                if r == (col + a) % n {
                    omega.powu((b * col) as u32)
                } else {
                    C_ZERO
                }
            }));
        }
    }
    basis
}

/// Complete irreflexive graph on n vertices.
pub fn complete_graph(n: usize) -> ClassicalGraph {
    let mut edges = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            edges.push((i, j));
        }
    }
    ClassicalGraph::new(n, edges, false).unwrap()
}

/// Cycle graph on n vertices.
pub fn cycle_graph(n: usize) -> ClassicalGraph {
    let edges = (0..n).map(|i| (i, (i + 1) % n)).collect();
    ClassicalGraph::new(n, edges, false).unwrap()
}

/// Path graph on n vertices.
pub fn path_graph(n: usize) -> ClassicalGraph {
    let edges = (0..n.saturating_sub(1)).map(|i| (i, i + 1)).collect();
    ClassicalGraph::new(n, edges, false).unwrap()
}

/// Seeded random irreflexive graph on n vertices, edge probability 1/2.
pub fn random_graph(n: usize, seed: u64) -> ClassicalGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            if rng.gen::<bool>() {
                edges.push((i, j));
            }
        }
    }
    ClassicalGraph::new(n, edges, false).unwrap()
}

/// Every permutation of 0..n in lexicographic order.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn rec(prefix: &mut Vec<usize>, rest: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rest.is_empty() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..rest.len() {
            let v = rest.remove(i);
            prefix.push(v);
            rec(prefix, rest, out);
            prefix.pop();
            rest.insert(i, v);
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut (0..n).collect(), &mut out);
    out
}
