//! Conforming (C¹-type) virtual element discretization of the clamped
//! biharmonic problem `Δ²u = f`, `u = ∂u/∂n = 0` on general polygonal meshes.
//!
//! The crate is organised bottom-up:
//!
//! * [`mesh`]: polygonal meshes, JSON ingestion, generators and the
//!   shape-regularity auditor.
//! * [`polynomial`]: scaled monomial bases on cells and edges and exact
//!   differential operators on coefficient vectors.
//! * [`quadrature`]: Gauss rules on edges and star-center fans of polygons.
//! * [`element`]: the local virtual element: degrees of freedom, edge traces,
//!   the energy and L² projectors, stabilizations, local stiffness and load.
//! * [`system`]: global numbering, assembly, clamped boundary conditions and
//!   the sparse symmetric solve.
//! * [`study`]: manufactured solutions, interpolation, computable error norms
//!   and convergence studies.

pub mod element;
pub mod error;
pub mod mesh;
pub mod polynomial;
pub mod quadrature;
pub mod study;
pub mod system;

pub use error::{Result, VemError};
