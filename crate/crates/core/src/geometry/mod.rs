//! Discrete planar curves and the geometry of their distance functions.

mod corpus;
mod curve;
mod distance;
mod medial;
mod motion;
mod point;
mod symmetric;
mod tube;

pub use corpus::{
    annulus_skeleton_speed, ellipse_endpoint_speed, endpoint_speed_finite_difference,
    symmetric_shape, CorpusShape, TestFunction,
};
pub use curve::{circle, ellipse, parse_curve_text, DiscreteCurve};
pub use distance::{
    foot_point, level_curvature, level_curvature_at_foot, nearest_point, signed_distance,
    FootPointResult, Region,
};
pub use medial::{
    medial_axis, skeleton_half_length, symmetric_skeleton, Skeleton, SkeletonSegment,
    DEFAULT_PROFILE_POINTS,
};
pub use motion::{endpoint_speed, normal_flow, skeleton_motion, BoundarySpeed, SkeletonVelocity};
pub use point::Vec2;
pub use symmetric::{area_left_of, check_convex, SymmetricConvexCurve};
pub use tube::{
    stokes_identity_residual, tube_integrate, Ray, StokesResidual, TubeOptions, TubeQuadrature,
};
