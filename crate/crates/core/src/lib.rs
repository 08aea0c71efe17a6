//! Finite quantum sets as special symmetric dagger Frobenius algebras,
//! quantum functions and bijections between them, quantum graphs and quantum
//! relations, with numerical verification and decomposition into simple
//! summands.

pub mod corpus;
pub mod error;
pub mod frobenius;
pub mod io;
pub mod qfun;
pub mod qgraph;
pub mod qrel;
pub mod semisimple;
pub mod tensor;

pub use error::{Error, Result};
pub use frobenius::{
    canonical_involution, check_ssfa, classical_algebra, copyable_elements, direct_sum_algebra,
    matrix_algebra, tensor_algebra, wedderburn, Ssfa, SsfaReport, WedderburnData,
};
pub use qfun::{
    bi_invertible, compose, dagger_dual, enumerate_simple_elements, family_to_qfun, identity_qfun,
    is_unitary, module_to_element, qfun_to_family, reconstruct_algebra, ueb_to_bijection,
    verify_qbij, verify_qfun, ProjectorFamily, QbijReport, QfunReport, QuantumElement,
    QuantumFunction,
};
pub use qgraph::{
    check_qgraph, classical_to_quantum, complement, edge_projector, ppm_iso_conditions,
    quantum_to_classical, verify_hom, verify_iso, ClassicalGraph, QuantumGraph, Reflexivity,
};
pub use qrel::{
    adjacency_to_relation, check_operator_system, check_relation, from_projection,
    graph_to_operator_system, is_reflexive, is_symmetric, operator_system_to_graph,
    relation_to_adjacency, to_projection, OperatorSystemProjector, QuantumRelation,
};
pub use semisimple::{
    classical_components, decompose, direct_sum, intertwiner_closure_checks, intertwiner_space,
    is_essentially_classical, is_simple, split_idempotent, Decomposition, IntertwinerBasis,
};
pub use tensor::{approx_eq, dagger, herm_eig, kron, nullspace, CMatrix, Check, Tolerance};
