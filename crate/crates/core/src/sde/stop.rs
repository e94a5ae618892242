use std::fmt;
use std::str::FromStr;

use crate::error::Error;

/// Why a path stopped before the end of its grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum StopReason {
    /// A radius left `(0, r_max)`.
    Explosion,
    /// Particle and domain radius swapped order.
    Ordering,
    /// The inner radius of an annulus reached zero.
    CollapseToDisk,
    /// The domain became thinner than the collar.
    Collar,
    /// Ordering violated beyond the scheme tolerance.
    SchemeFailure,
    ConvexityBreakdown,
    FocalCrossing,
    /// The domain stopped being symmetric about both axes.
    SymmetryLoss,
    /// The vertex center of curvature crossed the vertical axis, so the skeleton is no longer horizontal.
    SkeletonFlip,
}

impl StopReason {
    pub const ALL: [StopReason; 9] = [
        StopReason::Explosion,
        StopReason::Ordering,
        StopReason::CollapseToDisk,
        StopReason::Collar,
        StopReason::SchemeFailure,
        StopReason::ConvexityBreakdown,
        StopReason::FocalCrossing,
        StopReason::SymmetryLoss,
        StopReason::SkeletonFlip,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            StopReason::Explosion => "explosion",
            StopReason::Ordering => "ordering",
            StopReason::CollapseToDisk => "collapse-to-disk",
            StopReason::Collar => "collar",
            StopReason::SchemeFailure => "scheme-failure",
            StopReason::ConvexityBreakdown => "convexity-breakdown",
            StopReason::FocalCrossing => "focal-crossing",
            StopReason::SymmetryLoss => "symmetry-loss",
            StopReason::SkeletonFlip => "skeleton-flip",
        }
    }

    /// Stops that indicate a numerical defect rather than a modelled event.
    pub fn is_scheme_failure(self) -> bool {
        matches!(self, StopReason::SchemeFailure)
    }
}

impl fmt::Display for StopReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for StopReason {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        StopReason::ALL
            .into_iter()
            .find(|r| r.tag() == s)
            .ok_or_else(|| Error::Parse(format!("unknown stop reason {s:?}")))
    }
}
