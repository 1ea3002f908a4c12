//! Workbench for the integral geometry of convex polytopes.
//!
//! The crate computes external angles and translation-invariant curvature
//! measures of polytopes, classifies angular weight functions on Grassmannians
//! by numerical rank of their quadratic span in Plücker coordinates, and
//! provides the exact partition combinatorics (Littlewood-Richardson
//! coefficients, Weyl dimensions, stable-range branching) used to cross-check
//! the classification dimensions.
//!
//! Organization:
//! - [`exterior`]: dense exterior algebra (multivectors, bigraded forms,
//!   Plücker coordinates, oriented complements);
//! - [`cones`]: polyhedral cones, lineality spaces, triangulation, external
//!   angles (exact in low polar dimension, Monte Carlo otherwise);
//! - [`polytope`]: exact-rational polytopes, face lattices, tangent cones,
//!   face volumes, distances, flat slices;
//! - [`curvmeas`]: face-sum curvature measure evaluation, intrinsic volumes,
//!   Steiner verification, normal-disc integration of constant-coefficient
//!   forms;
//! - [`grassrank`]: Grassmannian sampling, quadratic restriction ranks,
//!   determinantal highest-weight functions, quadratic fits;
//! - [`repcomb`]: exact partition combinatorics;
//! - [`crofton`]: Monte Carlo integral geometry over affine flats;
//! - [`acceptance`]: the end-to-end verification suite.

pub mod acceptance;
pub mod comb;
pub mod cones;
pub mod crofton;
pub mod curvmeas;
pub mod error;
pub mod exterior;
pub mod grassrank;
pub mod hull;
pub mod mc;
pub mod polytope;
pub mod ratmat;
pub mod repcomb;
pub mod simplex;

pub use cones::{AngleEstimate, AngleOpts, PolyCone};
pub use crofton::{AffineFlat, FlatMeasure};
pub use curvmeas::{ball_volume, CurvatureEvaluation, EvalOpts, WeightSpec};
pub use error::{Error, Result};
pub use exterior::{BiGradedForm, Frame, MultiVector};
pub use grassrank::{GrassSample, HighestWeightSpec};
pub use polytope::{BorelBox, Face, Polytope};
pub use repcomb::{Partition, SOWeight};
