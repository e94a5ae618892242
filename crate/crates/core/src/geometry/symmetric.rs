use super::curve::DiscreteCurve;
use super::point::Vec2;
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Convex curve symmetric about both coordinate axes.
///
/// Node layout: `N = 4m` nodes counterclockwise, node 0 on the positive
/// x-axis, node `m` on the positive y-axis; node `2m - k` mirrors node `k`
/// across the y-axis and node `N - k` mirrors it across the x-axis.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricConvexCurve<T> {
    base: DiscreteCurve<T>,
}

impl<T: Real> SymmetricConvexCurve<T> {
    /// Node-matching tolerance for freshly constructed curves.
    pub const TOLERANCE: f64 = 1e-12;

    pub fn new(base: DiscreteCurve<T>) -> Result<Self> {
        Self::with_tolerance(base, T::lit(Self::TOLERANCE))
    }

    /// Validates symmetry with an explicit tolerance, scaled by the curve size.
    pub fn with_tolerance(base: DiscreteCurve<T>, tol: T) -> Result<Self> {
        check_convex(&base)?;
        check_symmetric(&base, tol)?;
        Ok(Self { base })
    }

    pub fn base(&self) -> &DiscreteCurve<T> {
        &self.base
    }

    pub fn into_base(self) -> DiscreteCurve<T> {
        self.base
    }

    pub fn len(&self) -> usize {
        self.base.len()
    }

    pub fn is_empty(&self) -> bool {
        self.base.is_empty()
    }

    /// Abscissa of the right horizontal vertex.
    pub fn vertex_x(&self) -> T {
        self.base.nodes()[0].x
    }

    /// Ordinate of the top vertical vertex.
    pub fn vertex_y(&self) -> T {
        self.base.nodes()[self.len() / 4].y
    }

    pub fn curvature_at(&self, i: usize) -> T {
        self.base.curvature_at(i)
    }

    /// Largest deviation of the node set from exact two-axis symmetry.
    pub fn symmetry_defect(&self) -> T {
        symmetry_defect(&self.base)
    }
}

pub(crate) fn symmetry_defect<T: Real>(c: &DiscreteCurve<T>) -> T {
    let n = c.len();
    let m = n / 4;
    let mut worst = c.nodes()[0].y.abs().max(c.nodes()[m].x.abs());
    for k in 0..=m {
        let p = c.node(k as isize);
        let q = c.node(2 * m as isize - k as isize);
        let r = c.node(-(k as isize));
        worst = worst
            .max((q.x + p.x).abs())
            .max((q.y - p.y).abs())
            .max((r.x - p.x).abs())
            .max((r.y + p.y).abs());
    }
    worst
}

fn check_symmetric<T: Real>(c: &DiscreteCurve<T>, tol: T) -> Result<()> {
    let n = c.len();
    if n % 4 != 0 {
        return Err(Error::InvariantViolation(format!(
            "symmetric curve needs a multiple of 4 nodes, got {n}"
        )));
    }
    let (lo, hi) = c.bounding_box();
    let scale = T::one().max(hi.x - lo.x).max(hi.y - lo.y);
    if !(c.nodes()[0].x > T::zero()) {
        return Err(Error::InvariantViolation(
            "node 0 must lie on the positive x-axis".into(),
        ));
    }
    let defect = symmetry_defect(c);
    if defect > tol * scale {
        return Err(Error::InvariantViolation(format!(
            "curve is not axis-symmetric (defect {defect})"
        )));
    }
    Ok(())
}

/// Strict left turns at every node plus total turning of one revolution.
pub fn check_convex<T: Real>(c: &DiscreteCurve<T>) -> Result<()> {
    let n = c.len() as isize;
    let mut turning = T::zero();
    for i in 0..n {
        let e0 = c.node(i) - c.node(i - 1);
        let e1 = c.node(i + 1) - c.node(i);
        let cross = e0.cross(e1);
        if !(cross > T::zero()) {
            return Err(Error::InvariantViolation(format!(
                "curve is not strictly convex at node {i}"
            )));
        }
        turning = turning + cross.atan2(e0.dot(e1));
    }
    let full = T::two() * T::PI();
    if (turning - full).abs() > T::lit(1e-6) * full {
        return Err(Error::InvariantViolation(format!(
            "curve winds by {turning} rather than once"
        )));
    }
    Ok(())
}

/// Area of the part of a convex counterclockwise polygon lying in `{x <= cut}`.
pub fn area_left_of<T: Real>(c: &DiscreteCurve<T>, cut: T) -> T {
    let n = c.len();
    let mut clipped: Vec<Vec2<T>> = Vec::with_capacity(n + 2);
    for i in 0..n {
        let a = c.nodes()[i];
        let b = c.nodes()[(i + 1) % n];
        let a_in = a.x <= cut;
        let b_in = b.x <= cut;
        if a_in {
            clipped.push(a);
        }
        if a_in != b_in {
            let u = (cut - a.x) / (b.x - a.x);
            clipped.push(Vec2::new(cut, a.y + u * (b.y - a.y)));
        }
    }
    if clipped.len() < 3 {
        return T::zero();
    }
    let m = clipped.len();
    (0..m).fold(T::zero(), |s, i| s + clipped[i].cross(clipped[(i + 1) % m])) * T::half()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::curve::{circle, ellipse};

    #[test]
    fn ellipse_is_symmetric_convex() {
        let e = SymmetricConvexCurve::new(ellipse::<f64>(2.0, 1.0, 256).unwrap()).unwrap();
        assert_eq!(e.vertex_x(), 2.0);
        assert_eq!(e.vertex_y(), 1.0);
        assert_eq!(e.symmetry_defect(), 0.0);
    }

    #[test]
    fn asymmetric_and_nonconvex_rejected() {
        let mut nodes = ellipse::<f64>(2.0, 1.0, 64).unwrap().into_nodes();
        nodes[5].x += 1e-6;
        let c = DiscreteCurve::new(nodes.clone()).unwrap();
        assert!(matches!(
            SymmetricConvexCurve::new(c),
            Err(Error::InvariantViolation(_))
        ));

        let mut dented = ellipse::<f64>(2.0, 1.0, 64).unwrap().into_nodes();
        for k in [16usize, 48] {
            dented[k].y *= 0.5;
        }
        let c = DiscreteCurve::new(dented).unwrap();
        assert!(matches!(
            SymmetricConvexCurve::new(c),
            Err(Error::InvariantViolation(_))
        ));
    }

    #[test]
    fn clipped_area() {
        let c = circle::<f64>(1.0, 4096).unwrap();
        let total = c.signed_area();
        assert!((area_left_of(&c, 0.0) / total - 0.5).abs() < 1e-12);
        assert_eq!(area_left_of(&c, -2.0), 0.0);
        assert!((area_left_of(&c, 2.0) - total).abs() < 1e-12);
    }
}
