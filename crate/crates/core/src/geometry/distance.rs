use super::curve::DiscreteCurve;
use super::point::Vec2;
use crate::error::{Error, Result};
use crate::scalar::Real;

/// A planar domain bounded by one or more closed curves, each oriented with
/// the domain on its left (e.g. an annulus: outer counterclockwise circle and
/// inner clockwise circle).
#[derive(Debug, Clone, PartialEq)]
pub struct Region<T> {
    components: Vec<DiscreteCurve<T>>,
}

impl<T: Real> Region<T> {
    pub fn new(components: Vec<DiscreteCurve<T>>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::Geometry(
                "region needs at least one boundary component".into(),
            ));
        }
        Ok(Self { components })
    }

    pub fn components(&self) -> &[DiscreteCurve<T>] {
        &self.components
    }

    pub fn contains(&self, p: Vec2<T>) -> bool {
        self.components
            .iter()
            .map(|c| c.crossings(p))
            .sum::<usize>()
            % 2
            == 1
    }

    pub fn area(&self) -> T {
        self.components
            .iter()
            .fold(T::zero(), |s, c| s + c.signed_area())
    }

    /// Nearest boundary point over all components, with no inside/outside test.
    pub fn nearest(&self, q: Vec2<T>) -> FootPointResult<T> {
        let mut best = nearest_on_curve(&self.components[0], q, 0);
        for (k, c) in self.components.iter().enumerate().skip(1) {
            let cand = nearest_on_curve(c, q, k);
            if cand.distance < best.distance {
                best = cand;
            }
        }
        best
    }

    /// Foot point of a query strictly inside the region.
    pub fn foot_point(&self, q: Vec2<T>) -> Result<FootPointResult<T>> {
        if !self.contains(q) {
            return Err(Error::OutsideDomain(format!("({}, {})", q.x, q.y)));
        }
        let f = self.nearest(q);
        if f.distance == T::zero() {
            return Err(Error::OutsideDomain(format!(
                "({}, {}) is on the boundary",
                q.x, q.y
            )));
        }
        Ok(f)
    }

    /// Distance to the boundary, positive inside and negative outside.
    pub fn signed_distance(&self, q: Vec2<T>) -> T {
        let d = self.nearest(q).distance;
        if self.contains(q) {
            d
        } else {
            -d
        }
    }

    /// Curvature of the distance level set through `q`: `κ / (1 - s κ)`.
    pub fn level_curvature(&self, q: Vec2<T>) -> Result<T> {
        let f = self.foot_point(q)?;
        let kappa = self.foot_curvature(&f);
        let denom = T::one() - f.distance * kappa;
        if !(denom > focal_tolerance::<T>()) {
            return Err(Error::FocalSingularity(denom.to_f64_lossy()));
        }
        Ok(kappa / denom)
    }

    /// Boundary curvature at a foot point, interpolated linearly along its edge.
    pub fn foot_curvature(&self, f: &FootPointResult<T>) -> T {
        let c = &self.components[f.component];
        let k0 = c.curvature_at(f.node_index);
        let k1 = c.curvature_at((f.node_index + 1) % c.len());
        k0 + (k1 - k0) * f.offset
    }
}

impl<T: Real> From<DiscreteCurve<T>> for Region<T> {
    fn from(c: DiscreteCurve<T>) -> Self {
        Self {
            components: vec![c],
        }
    }
}

/// Nearest boundary point of a query.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FootPointResult<T> {
    pub foot: Vec2<T>,
    pub distance: T,
    /// Unit vector from the foot toward the query. For queries inside the
    /// domain this points into the domain.
    pub inward_normal: Vec2<T>,
    /// Boundary component holding the foot.
    pub component: usize,
    /// The foot lies on the edge from `node_index` to `node_index + 1`.
    pub node_index: usize,
    /// Fraction along that edge, in `[0, 1)`.
    pub offset: T,
}

/// Values of `1 - s κ` this close to 0 are treated as focal: the query sits
/// on a center of curvature up to rounding.
fn focal_tolerance<T: Real>() -> T {
    T::epsilon() * T::lit(1024.0)
}

/// Nearest node by linear scan (ties to the lowest index), refined by
/// projection onto the arc of the circle through that node and its two
/// neighbours. The arc is the curve itself for discretized circles.
fn nearest_on_curve<T: Real>(
    c: &DiscreteCurve<T>,
    q: Vec2<T>,
    component: usize,
) -> FootPointResult<T> {
    let nodes = c.nodes();
    let n = nodes.len();
    let mut best = 0;
    let mut best_d2 = (nodes[0] - q).norm2();
    let tie = T::one() - T::epsilon() * T::lit(16.0);
    for (i, p) in nodes.iter().enumerate().skip(1) {
        let d2 = (*p - q).norm2();
        if d2 < best_d2 * tie {
            best = i;
            best_d2 = d2;
        }
    }
    let a = nodes[(best + n - 1) % n];
    let b = nodes[best];
    let cc = nodes[(best + 1) % n];
    let (foot, seg, off) = match arc_projection(a, b, cc, q) {
        ArcFoot::Center => (b, best, T::zero()),
        ArcFoot::Point(p) => {
            let (seg, from, to) = if (p - b).dot(cc - a) >= T::zero() {
                (best, b, cc)
            } else {
                ((best + n - 1) % n, a, b)
            };
            let e = to - from;
            let u = ((p - from).dot(e) / e.norm2()).max(T::zero()).min(T::one());
            (p, seg, u)
        }
        ArcFoot::Off => edge_projection(nodes, best, q),
    };
    let (seg, off) = if off >= T::one() {
        ((seg + 1) % n, T::zero())
    } else {
        (seg, off)
    };
    let distance = (q - foot).norm();
    let inward_normal = if distance > T::zero() {
        (q - foot) * (T::one() / distance)
    } else {
        c.inward_normal(seg)
    };
    FootPointResult {
        foot,
        distance,
        inward_normal,
        component,
        node_index: seg,
        offset: off,
    }
}

enum ArcFoot<T> {
    Point(Vec2<T>),
    /// The query is the center: every arc point is equally near.
    Center,
    /// Collinear nodes, or the nearest circle point is off the arc.
    Off,
}

/// Nearest point to `q` on the arc from `a` through `b` to `c` of their circumcircle.
fn arc_projection<T: Real>(a: Vec2<T>, b: Vec2<T>, c: Vec2<T>, q: Vec2<T>) -> ArcFoot<T> {
    let ab = b - a;
    let ac = c - a;
    let d = T::two() * ab.cross(ac);
    if d == T::zero() {
        return ArcFoot::Off;
    }
    let o = a + Vec2::new(
        ac.y * ab.norm2() - ab.y * ac.norm2(),
        ab.x * ac.norm2() - ac.x * ab.norm2(),
    ) * (T::one() / d);
    let r = (a - o).norm();
    let dir = q - o;
    let len = dir.norm();
    if !r.is_finite() {
        return ArcFoot::Off;
    }
    let (da, db, dc) = ((q - a).norm(), (q - b).norm(), (q - c).norm());
    let spread = da.max(db).max(dc) - da.min(db).min(dc);
    if spread <= db * T::lit(1e-12) || len == T::zero() {
        return ArcFoot::Center;
    }
    let p = o + dir * (r / len);
    let side_b = ac.cross(b - a);
    let side_p = ac.cross(p - a);
    if side_b * side_p > T::zero() {
        ArcFoot::Point(p)
    } else {
        ArcFoot::Off
    }
}

/// Projection onto the two polygon edges meeting at node `i`.
fn edge_projection<T: Real>(nodes: &[Vec2<T>], i: usize, q: Vec2<T>) -> (Vec2<T>, usize, T) {
    let n = nodes.len();
    let mut best = (nodes[i], i, T::zero());
    let mut best_d2 = (nodes[i] - q).norm2();
    for s in [(i + n - 1) % n, i] {
        let a = nodes[s];
        let ab = nodes[(s + 1) % n] - a;
        let len2 = ab.norm2();
        if len2 == T::zero() {
            continue;
        }
        let u = ((q - a).dot(ab) / len2).max(T::zero()).min(T::one());
        let p = a + ab * u;
        let d2 = (p - q).norm2();
        if d2 < best_d2 {
            best_d2 = d2;
            best = (p, s, u);
        }
    }
    best
}

/// Foot point on a single counterclockwise curve; the query must be strictly inside.
pub fn foot_point<T: Real>(q: Vec2<T>, curve: &DiscreteCurve<T>) -> Result<FootPointResult<T>> {
    if !curve.contains(q) {
        return Err(Error::OutsideDomain(format!("({}, {})", q.x, q.y)));
    }
    let f = nearest_on_curve(curve, q, 0);
    if f.distance == T::zero() {
        return Err(Error::OutsideDomain(format!(
            "({}, {}) is on the boundary",
            q.x, q.y
        )));
    }
    Ok(f)
}

pub fn signed_distance<T: Real>(q: Vec2<T>, curve: &DiscreteCurve<T>) -> T {
    let d = nearest_on_curve(curve, q, 0).distance;
    if curve.contains(q) {
        d
    } else {
        -d
    }
}

pub fn level_curvature<T: Real>(q: Vec2<T>, curve: &DiscreteCurve<T>) -> Result<T> {
    level_curvature_at_foot(curve, &foot_point(q, curve)?)
}

/// [`level_curvature`] for a query whose foot point on `curve` is already known.
pub fn level_curvature_at_foot<T: Real>(
    curve: &DiscreteCurve<T>,
    f: &FootPointResult<T>,
) -> Result<T> {
    let k0 = curve.curvature_at(f.node_index);
    let k1 = curve.curvature_at((f.node_index + 1) % curve.len());
    let kappa = k0 + (k1 - k0) * f.offset;
    let denom = T::one() - f.distance * kappa;
    if !(denom > focal_tolerance::<T>()) {
        return Err(Error::FocalSingularity(denom.to_f64_lossy()));
    }
    Ok(kappa / denom)
}

/// Nearest boundary point without an inside test; the normal still points from the foot to the query.
pub fn nearest_point<T: Real>(q: Vec2<T>, curve: &DiscreteCurve<T>) -> FootPointResult<T> {
    nearest_on_curve(curve, q, 0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::curve::{circle, ellipse};
    use proptest::prelude::*;

    #[test]
    fn unit_circle_feet() {
        let c: DiscreteCurve<f64> = circle(1.0, 1024).unwrap();
        let f = foot_point(Vec2::new(0.5, 0.0), &c).unwrap();
        assert!((f.foot - Vec2::new(1.0, 0.0)).norm() < 1e-12);
        assert!((f.distance - 0.5).abs() < 1e-12);
        assert!((f.inward_normal.x + 1.0).abs() < 1e-12);
        let f = foot_point(Vec2::new(0.0, 0.0), &c).unwrap();
        assert_eq!(f.node_index, 0);
        assert_eq!(f.foot, Vec2::new(1.0, 0.0));
        assert!((f.distance - 1.0).abs() < 1e-12);
    }

    #[test]
    fn outside_queries_rejected() {
        let c: DiscreteCurve<f64> = circle(1.0, 64).unwrap();
        assert!(matches!(
            foot_point(Vec2::new(1.5, 0.0), &c),
            Err(Error::OutsideDomain(_))
        ));
        assert!((signed_distance(Vec2::new(1.5, 0.0), &c) + 0.5).abs() < 1e-12);
    }

    // Oracle: minimum over 2e5 analytic boundary samples.
    #[test]
    fn ellipse_foot_matches_dense_sampling() {
        let e: DiscreteCurve<f64> = ellipse(2.0, 1.0, 2048).unwrap();
        let q = Vec2::new(1.8, 0.0);
        let f = foot_point(q, &e).unwrap();
        let brute = (0..200_000)
            .map(|i| {
                let t = i as f64 / 200_000.0 * std::f64::consts::TAU;
                Vec2::new(2.0 * t.cos(), t.sin()).dist(q)
            })
            .fold(f64::INFINITY, f64::min);
        assert!((f.distance - brute).abs() < 1e-6);
        assert!((f.distance - 0.2).abs() < 1e-6);
    }

    #[test]
    fn level_curvature_examples() {
        let c: DiscreteCurve<f64> = circle(1.0, 2048).unwrap();
        let h = level_curvature(Vec2::new(0.0, 0.75), &c).unwrap();
        assert!((h - 4.0 / 3.0).abs() < 1e-5);
        let e: DiscreteCurve<f64> = ellipse(2.0, 1.0, 2048).unwrap();
        let h = level_curvature(Vec2::new(1.8, 0.0), &e).unwrap();
        assert!((h / (10.0 / 3.0) - 1.0).abs() < 0.01);
        let near = level_curvature(Vec2::new(1.0 - 1e-9, 0.0), &c).unwrap();
        assert!((near - c.curvature_at(0)).abs() < 1e-6);
    }

    #[test]
    fn disk_center_is_focal() {
        let c: DiscreteCurve<f64> = circle(1.0, 256).unwrap();
        assert!(matches!(
            level_curvature(Vec2::new(0.0, 0.0), &c),
            Err(Error::FocalSingularity(_))
        ));
    }

    #[test]
    fn annulus_region() {
        let outer: DiscreteCurve<f64> = circle(2.0, 512).unwrap();
        let inner =
            DiscreteCurve::new_hole(circle::<f64>(1.0, 512).unwrap().reversed().into_nodes())
                .unwrap();
        let r = Region::new(vec![outer, inner]).unwrap();
        assert!(r.contains(Vec2::new(1.5, 0.0)));
        assert!(!r.contains(Vec2::new(0.5, 0.0)));
        assert!((r.area() - 3.0 * std::f64::consts::PI).abs() < 1e-3);
        let f = r.foot_point(Vec2::new(1.2, 0.0)).unwrap();
        assert_eq!(f.component, 1);
        assert!((r.level_curvature(Vec2::new(1.2, 0.0)).unwrap() + 1.0 / 1.2).abs() < 1e-4);
    }

    proptest! {
        // 1/h = 1/κ - s along the inward normal of an ellipse node.
        #[test]
        fn offset_identity(node in 0usize..1024, frac in 0.05f64..0.8) {
            let e: DiscreteCurve<f64> = ellipse(2.0, 1.0, 1024).unwrap();
            let k = e.curvature_at(node);
            let y = e.nodes()[node];
            // Stay on the boundary side of the skeleton: before the axis and the focal point.
            let n = e.inward_normal(node);
            let to_axis = if n.y.abs() > 1e-12 { -y.y / n.y } else { f64::INFINITY };
            let s = frac * to_axis.min(1.0 / k);
            let h = level_curvature(y + n * s, &e).unwrap();
            prop_assert!(((1.0 / h) / (1.0 / k - s) - 1.0).abs() < 0.01);
        }
    }
}
