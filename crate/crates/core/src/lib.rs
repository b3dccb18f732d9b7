//! Exact computations with strongly ℤ²-graded rings, Čech complexes over the
//! face poset of the square, truncated Novikov rings and algebraic tori.

pub mod cech;
pub mod complex;
pub mod contraction;
pub mod domination;
pub mod error;
pub mod examples;
pub mod json;
pub mod linalg;
pub mod matrix;
pub mod novikov;
pub mod partition;
pub mod poly;
pub mod ring;
pub mod scalar;
pub mod tensor;
pub mod torus;

pub use error::{Error, Result};
pub use poly::{Monomial, Poly};
pub use ring::{
    make_kbar, make_khat, make_laurent, make_polycone, make_ring, ring_mul, Degree, GradedElement,
    Involution, Ring, RingInstance, RingKind,
};
pub use scalar::{Coeff, Scalar};
pub use linalg::Mat;
pub use matrix::Matrix;
pub use partition::{
    canonical_tensor, check_strongly_graded, find_partition, mu_map, pi_map, search_partition,
    PartitionOfUnity, StrongGradingReport,
};
pub use complex::{
    betti_table, graded_piece, homology_ranks, mapping_cone, BettiTable, ChainMap, FreeComplex,
    GradedPiece, HyperComplex,
};
pub use novikov::{geometric_inverse, NovikovElement, Region};
pub use tensor::{row_splitting_check, GradedMap, PureSum, RowSplitReport, TensorVec};
pub use contraction::{verify_contraction, CertificateReport, Contraction, Witness};
pub use torus::{
    canonical_resolution, degree_zero_torus, mather_map, random_torus_data, torus_complex,
    torus_contraction, TorusData,
};
pub use cech::{
    adjoint_iso_check, adjoint_report, build_dk, build_ef, cech_exactness, con_acyclicity, face_poset,
    flag_poset, tot_gamma_con, xi_exactness, ConeRegion, Face, IncidencePoset,
};
pub use domination::{
    build_contraction, build_y, certify_region, detect, lim_y, run_pipeline, support_audit, DetectInput, DominationVerdict, LimComplex, PipelineReport,
    SupportAudit, Verdict, YDiagram,
};
pub use json::{ComplexFile, LoadedComplex};
