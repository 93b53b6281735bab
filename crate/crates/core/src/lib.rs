//! Bi-average degree density `M(G)`: spectral bounds, rounding-based
//! certificates, an exact oracle for small graphs and the tensor-power
//! gap family.

pub mod certify;
pub mod error;
pub mod exact;
pub mod gap;
pub mod generators;
pub mod graph;
pub mod io;
pub mod par;
pub mod rounding;
pub mod spectral;
pub mod suites;

pub use certify::{certify, certify_bipartite, verify_bipartite_certificate, verify_certificate, Certificate, Orientation, Variant};
pub use error::{Error, Result};
pub use exact::{bounds_check, m_exact, m_exact_bipartite, BoundsReport, ExactMResult, ExactParams};
pub use graph::{double_cover, BipartiteGraph, DegreeSequence, Graph, VertexSet};
pub use par::Exec;
pub use spectral::{lambda_max, lambda_max_bipartite, SpectralParams, SpectralResult};
