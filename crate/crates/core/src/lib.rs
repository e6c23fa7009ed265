//! Semistable reduction data for superelliptic curves `y^n = c * prod (x - r)`
//! over `Q_p` with `n | p - 1`.
//!
//! The pipeline runs cluster picture, reduced components, dual graph of the
//! special fiber, then the action of inertia and Frobenius on the Tate module.
//! [`assemble_report`] drives all of it.

pub mod arith;
pub mod clusters;
pub mod emit;
pub mod error;
pub mod fiber;
pub mod graph;
pub mod poly;
pub mod report;
pub mod triples;

pub use arith::{FpElem, Rational, Valuation};
pub use clusters::{build_cluster_picture, Child, Cluster, ClusterPicture, CurveInput, Node};
pub use error::{Error, Result};
pub use fiber::ComponentFamily;
pub use graph::{DualGraph, Edge, H1Action, Vertex};
pub use report::{assemble_report, Analysis, AnalysisOptions, GaloisReport, TwistCharacter};
pub use triples::{OracleReport, SPoint, Triple};
