//! Circle, Voronoi, cumulative-edge and j-edge polynomials of planar point
//! sets in general position.
//!
//! Counting is exact and brute force ([`counts`]); roots come from an
//! Aberth–Ehrlich solver ([`roots`]); [`analysis`] checks the crossing-number
//! identities and root-location bounds against the exact counts.

pub mod analysis;
pub mod counts;
pub mod generate;
pub mod geometry;
pub mod io;
pub mod poly;
pub mod report;
pub mod roots;
mod squarefree;
pub mod svg;

pub use counts::{binomial, depth_profile, DepthProfile};
pub use geometry::{validate_general_position, GeometryError, Point, PointSet};
pub use poly::{build_polynomials, ComplexValue, IntPolynomial, PolyKind, PolynomialSet};
pub use report::{analyze, AnalysisReport, AnalyzeOptions};

pub use roots::{find_roots, RootSet};
