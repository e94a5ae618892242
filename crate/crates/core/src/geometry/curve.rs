use std::io::{self, Write};

use super::point::Vec2;
use crate::error::{Error, Result};
use crate::quadrature::gauss_legendre;
use crate::scalar::Real;

/// Closed polygonal curve. The enclosed domain lies to the left of the
/// direction of travel, so an outer boundary runs counterclockwise and the
/// boundary of a hole runs clockwise.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteCurve<T> {
    nodes: Vec<Vec2<T>>,
}

impl<T: Real> DiscreteCurve<T> {
    pub const MIN_NODES: usize = 16;

    /// Counterclockwise simple curve (outer boundary).
    pub fn new(nodes: Vec<Vec2<T>>) -> Result<Self> {
        let c = Self::checked(nodes)?;
        if !(c.signed_area() > T::zero()) {
            return Err(Error::Geometry(
                "outer boundary must be counterclockwise".into(),
            ));
        }
        Ok(c)
    }

    /// Clockwise simple curve bounding a hole.
    pub fn new_hole(nodes: Vec<Vec2<T>>) -> Result<Self> {
        let c = Self::checked(nodes)?;
        if !(c.signed_area() < T::zero()) {
            return Err(Error::Geometry("hole boundary must be clockwise".into()));
        }
        Ok(c)
    }

    fn checked(nodes: Vec<Vec2<T>>) -> Result<Self> {
        if nodes.len() < Self::MIN_NODES {
            return Err(Error::Geometry(format!(
                "curve needs at least {} nodes, got {}",
                Self::MIN_NODES,
                nodes.len()
            )));
        }
        if nodes.iter().any(|p| !p.x.is_finite() || !p.y.is_finite()) {
            return Err(Error::Geometry("non-finite node coordinate".into()));
        }
        let c = Self { nodes };
        if let Some((i, j)) = c.first_crossing() {
            return Err(Error::Geometry(format!("edges {i} and {j} intersect")));
        }
        Ok(c)
    }

    pub(crate) fn from_nodes_unchecked(nodes: Vec<Vec2<T>>) -> Self {
        Self { nodes }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[Vec2<T>] {
        &self.nodes
    }

    pub fn into_nodes(self) -> Vec<Vec2<T>> {
        self.nodes
    }

    /// Node with cyclic indexing.
    #[inline]
    pub fn node(&self, i: isize) -> Vec2<T> {
        let n = self.nodes.len() as isize;
        self.nodes[i.rem_euclid(n) as usize]
    }

    /// The same curve traversed in the opposite direction, starting at node 0.
    pub fn reversed(&self) -> Self {
        let mut nodes = Vec::with_capacity(self.len());
        nodes.push(self.nodes[0]);
        nodes.extend(self.nodes[1..].iter().rev().copied());
        Self { nodes }
    }

    /// Shoelace area, positive for counterclockwise curves.
    pub fn signed_area(&self) -> T {
        let mut s = T::zero();
        for i in 0..self.len() {
            s = s + self.nodes[i].cross(self.node(i as isize + 1));
        }
        s * T::half()
    }

    pub fn edge_length(&self, i: usize) -> T {
        self.node(i as isize + 1).dist(self.nodes[i])
    }

    pub fn perimeter(&self) -> T {
        (0..self.len()).fold(T::zero(), |s, i| s + self.edge_length(i))
    }

    /// Half the lengths of the two edges adjacent to node `i`.
    pub fn node_weight(&self, i: usize) -> T {
        let i = i as isize;
        (self.node(i - 1).dist(self.node(i)) + self.node(i).dist(self.node(i + 1))) * T::half()
    }

    /// Signed curvature of the circle through nodes `i-1, i, i+1`; positive
    /// when the curve turns left. Collinear triples give 0.
    pub fn curvature_at(&self, i: usize) -> T {
        let i = i as isize;
        circumcurvature(self.node(i - 1), self.node(i), self.node(i + 1))
    }

    pub fn curvatures(&self) -> Vec<T> {
        (0..self.len()).map(|i| self.curvature_at(i)).collect()
    }

    /// Unit tangent at node `i` along the direction of travel.
    pub fn tangent(&self, i: usize) -> Vec2<T> {
        let i = i as isize;
        (self.node(i + 1) - self.node(i - 1)).normalized()
    }

    /// Unit normal pointing into the enclosed domain.
    pub fn inward_normal(&self, i: usize) -> Vec2<T> {
        self.tangent(i).perp()
    }

    /// Crossing-number point-in-polygon test. Points on the curve count as
    /// outside or inside arbitrarily.
    pub fn contains(&self, p: Vec2<T>) -> bool {
        self.crossings(p) % 2 == 1
    }

    pub(crate) fn crossings(&self, p: Vec2<T>) -> usize {
        let mut count = 0;
        let n = self.len();
        for i in 0..n {
            let a = self.nodes[i];
            let b = self.nodes[(i + 1) % n];
            if (a.y > p.y) != (b.y > p.y) {
                let x = a.x + (p.y - a.y) / (b.y - a.y) * (b.x - a.x);
                if p.x < x {
                    count += 1;
                }
            }
        }
        count
    }

    pub fn bounding_box(&self) -> (Vec2<T>, Vec2<T>) {
        let mut lo = self.nodes[0];
        let mut hi = self.nodes[0];
        for p in &self.nodes {
            lo = Vec2::new(lo.x.min(p.x), lo.y.min(p.y));
            hi = Vec2::new(hi.x.max(p.x), hi.y.max(p.y));
        }
        (lo, hi)
    }

    /// Sweep over edges sorted by their left end, testing each edge against
    /// the edges whose x-range is still open.
    fn first_crossing(&self) -> Option<(usize, usize)> {
        let n = self.len();
        let edge = |i: usize| (self.nodes[i], self.nodes[(i + 1) % n]);
        let mut order: Vec<usize> = (0..n).collect();
        let xmin = |i: usize| {
            let (a, b) = edge(i);
            a.x.min(b.x)
        };
        let xmax = |i: usize| {
            let (a, b) = edge(i);
            a.x.max(b.x)
        };
        order.sort_by(|&i, &j| {
            xmin(i)
                .partial_cmp(&xmin(j))
                .unwrap_or(std::cmp::Ordering::Equal)
        });
        let mut active: Vec<usize> = Vec::new();
        for &i in &order {
            let left = xmin(i);
            active.retain(|&j| xmax(j) >= left);
            let (a, b) = edge(i);
            for &j in &active {
                let adjacent = (i + 1) % n == j || (j + 1) % n == i;
                if adjacent {
                    continue;
                }
                let (c, d) = edge(j);
                if segments_intersect(a, b, c, d) {
                    return Some((i.min(j), i.max(j)));
                }
            }
            active.push(i);
        }
        None
    }

    /// Point where the curve crosses the positive x-axis going upward, as
    /// `(edge index, fraction along the edge)`.
    pub fn positive_x_axis_crossing(&self) -> Option<(usize, T)> {
        let n = self.len();
        (0..n).find_map(|i| {
            let a = self.nodes[i];
            let b = self.nodes[(i + 1) % n];
            if a.y <= T::zero() && b.y > T::zero() {
                let u = -a.y / (b.y - a.y);
                if a.x + u * (b.x - a.x) > T::zero() {
                    return Some((i, u));
                }
            }
            None
        })
    }

    /// Redistributes `n` nodes at equal arc length along the Catmull–Rom
    /// spline through the current nodes, starting at `start = (edge, fraction)`.
    pub fn resample_equal_arclength(&self, n: usize, start: (usize, T)) -> Self {
        let spline = CatmullRom::with_arc_rule(&self.nodes);
        let m = self.len();
        let (s0, u0) = start;
        // Arc length from the start point, edge by edge around the loop.
        let first = spline.arc(s0, u0, T::one());
        let mut cum = Vec::with_capacity(m + 1);
        cum.push(T::zero());
        cum.push(first);
        for k in 1..m {
            let seg = (s0 + k) % m;
            let prev = cum[k];
            cum.push(prev + spline.arc(seg, T::zero(), T::one()));
        }
        let head = spline.arc(s0, T::zero(), u0);
        let total = cum[m] + head;
        let mut out = Vec::with_capacity(n);
        out.push(spline.point(s0, u0));
        let mut k = 0;
        for j in 1..n {
            let target = total * T::from_usize_lossy(j) / T::from_usize_lossy(n);
            while k + 1 <= m && cum[k + 1] < target {
                k += 1;
            }
            let (seg, lo) = if k == m {
                (s0, T::zero())
            } else if k == 0 {
                (s0, u0)
            } else {
                ((s0 + k) % m, T::zero())
            };
            let offset = target - if k == m { cum[m] } else { cum[k] };
            out.push(spline.point(seg, spline.invert(seg, lo, offset)));
        }
        Self { nodes: out }
    }

    /// Writes one `x y` pair per line with 17 significant digits.
    pub fn write_text<W: Write>(&self, mut w: W) -> io::Result<()> {
        for p in &self.nodes {
            writeln!(w, "{:.16e} {:.16e}", p.x.to_f64_lossy(), p.y.to_f64_lossy())?;
        }
        Ok(())
    }

    pub fn to_text(&self) -> String {
        let mut buf = Vec::new();
        self.write_text(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("ascii output")
    }
}

/// Parses the `x y` per line curve format. Blank lines are skipped.
pub fn parse_curve_text<T: Real>(text: &str) -> Result<Vec<Vec2<T>>> {
    let mut out = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let mut it = line.split_whitespace();
        let mut coord = |name: &str| -> Result<f64> {
            it.next()
                .ok_or_else(|| Error::Parse(format!("line {}: missing {name}", lineno + 1)))?
                .parse::<f64>()
                .map_err(|e| Error::Parse(format!("line {}: {e}", lineno + 1)))
        };
        let x = coord("x")?;
        let y = coord("y")?;
        if it.next().is_some() {
            return Err(Error::Parse(format!(
                "line {}: expected two numbers",
                lineno + 1
            )));
        }
        out.push(Vec2::new(T::lit(x), T::lit(y)));
    }
    Ok(out)
}

#[inline]
pub(crate) fn circumcurvature<T: Real>(a: Vec2<T>, b: Vec2<T>, c: Vec2<T>) -> T {
    let ab = b - a;
    let bc = c - b;
    let ca = a - c;
    let cross = ab.cross(bc);
    let denom = ab.norm() * bc.norm() * ca.norm();
    if cross == T::zero() || denom == T::zero() {
        T::zero()
    } else {
        T::two() * cross / denom
    }
}

fn orient<T: Real>(a: Vec2<T>, b: Vec2<T>, c: Vec2<T>) -> T {
    (b - a).cross(c - a)
}

fn on_segment<T: Real>(a: Vec2<T>, b: Vec2<T>, p: Vec2<T>) -> bool {
    p.x >= a.x.min(b.x) && p.x <= a.x.max(b.x) && p.y >= a.y.min(b.y) && p.y <= a.y.max(b.y)
}

pub(crate) fn segments_intersect<T: Real>(a: Vec2<T>, b: Vec2<T>, c: Vec2<T>, d: Vec2<T>) -> bool {
    let d1 = orient(c, d, a);
    let d2 = orient(c, d, b);
    let d3 = orient(a, b, c);
    let d4 = orient(a, b, d);
    let z = T::zero();
    if ((d1 > z && d2 < z) || (d1 < z && d2 > z)) && ((d3 > z && d4 < z) || (d3 < z && d4 > z)) {
        return true;
    }
    (d1 == z && on_segment(c, d, a))
        || (d2 == z && on_segment(c, d, b))
        || (d3 == z && on_segment(a, b, c))
        || (d4 == z && on_segment(a, b, d))
}

/// Uniform Catmull–Rom spline through closed-loop nodes.
struct CatmullRom<'a, T> {
    p: &'a [Vec2<T>],
    gl: (Vec<f64>, Vec<f64>),
}

impl<'a, T: Real> CatmullRom<'a, T> {
    fn with_arc_rule(p: &'a [Vec2<T>]) -> Self {
        Self {
            p,
            gl: gauss_legendre(6),
        }
    }

    fn ctrl(&self, seg: usize) -> (Vec2<T>, Vec2<T>, Vec2<T>, Vec2<T>) {
        let n = self.p.len();
        let p0 = self.p[(seg + n - 1) % n];
        let p1 = self.p[seg];
        let p2 = self.p[(seg + 1) % n];
        let p3 = self.p[(seg + 2) % n];
        (p1, (p2 - p0) * T::half(), p2, (p3 - p1) * T::half())
    }

    fn point(&self, seg: usize, u: T) -> Vec2<T> {
        let (p1, m1, p2, m2) = self.ctrl(seg);
        let u2 = u * u;
        let u3 = u2 * u;
        let two = T::two();
        let three = T::lit(3.0);
        let h00 = two * u3 - three * u2 + T::one();
        let h10 = u3 - two * u2 + u;
        let h01 = -two * u3 + three * u2;
        let h11 = u3 - u2;
        p1 * h00 + m1 * h10 + p2 * h01 + m2 * h11
    }

    fn derivative(&self, seg: usize, u: T) -> Vec2<T> {
        let (p1, m1, p2, m2) = self.ctrl(seg);
        let u2 = u * u;
        let six = T::lit(6.0);
        let d00 = six * u2 - six * u;
        let d10 = T::lit(3.0) * u2 - T::lit(4.0) * u + T::one();
        let d01 = -six * u2 + six * u;
        let d11 = T::lit(3.0) * u2 - T::two() * u;
        p1 * d00 + m1 * d10 + p2 * d01 + m2 * d11
    }

    fn speed(&self, seg: usize, u: T) -> T {
        self.derivative(seg, u).norm()
    }

    fn arc(&self, seg: usize, a: T, b: T) -> T {
        let half = (b - a) * T::half();
        let mid = (a + b) * T::half();
        let (x, w) = &self.gl;
        x.iter().zip(w).fold(T::zero(), |s, (x, w)| {
            s + T::lit(*w) * self.speed(seg, mid + half * T::lit(*x))
        }) * half
    }

    /// Parameter `u >= lo` at which the arc length from `lo` equals `len`.
    fn invert(&self, seg: usize, lo: T, len: T) -> T {
        let full = self.arc(seg, lo, T::one());
        let mut u = lo + (T::one() - lo) * (len / full).min(T::one()).max(T::zero());
        for _ in 0..8 {
            let f = self.arc(seg, lo, u) - len;
            let s = self.speed(seg, u);
            if s <= T::zero() {
                break;
            }
            let next = (u - f / s).max(lo).min(T::one());
            let done = (next - u).abs() <= T::epsilon() * T::lit(4.0);
            u = next;
            if done {
                break;
            }
        }
        u
    }
}

/// Axis-aligned ellipse with semi-axes `a` (x) and `b` (y), `n` nodes at equal
/// arc length, counterclockwise from `(a, 0)`. `n` must be a multiple of 4 so
/// the node set is exactly symmetric about both axes.
pub fn ellipse<T: Real>(a: f64, b: f64, n: usize) -> Result<DiscreteCurve<T>> {
    if n % 4 != 0 || n < DiscreteCurve::<T>::MIN_NODES {
        return Err(Error::Geometry(format!(
            "symmetric shapes need a multiple of 4 nodes (>= 16), got {n}"
        )));
    }
    if !(a > 0.0 && b > 0.0) {
        return Err(Error::Geometry(format!(
            "semi-axes must be positive, got {a}, {b}"
        )));
    }
    let m = n / 4;
    let quarter = quarter_ellipse(a, b, m);
    DiscreteCurve::new(
        mirror_quarter(&quarter)
            .into_iter()
            .map(|p| p.cast())
            .collect(),
    )
}

pub fn circle<T: Real>(r: f64, n: usize) -> Result<DiscreteCurve<T>> {
    ellipse(r, r, n)
}

/// Expands first-quadrant nodes `q_0 = (a, 0), ..., q_m = (0, b)` into the
/// full counterclockwise node list.
pub(crate) fn mirror_quarter<T: Real>(q: &[Vec2<T>]) -> Vec<Vec2<T>> {
    let m = q.len() - 1;
    let mut out = Vec::with_capacity(4 * m);
    out.extend_from_slice(&q[..m]);
    for k in 0..m {
        let p = q[m - k];
        out.push(Vec2::new(-p.x, p.y));
    }
    for k in 0..m {
        let p = q[k];
        out.push(Vec2::new(-p.x, -p.y));
    }
    for k in 0..m {
        let p = q[m - k];
        out.push(Vec2::new(p.x, -p.y));
    }
    out
}

/// Points at equal arc length on the first-quadrant ellipse arc.
fn quarter_ellipse(a: f64, b: f64, m: usize) -> Vec<Vec2<f64>> {
    let speed = |t: f64| (a * a * t.sin().powi(2) + b * b * t.cos().powi(2)).sqrt();
    let (gx, gw) = gauss_legendre(8);
    let arc = |lo: f64, hi: f64| {
        let h = 0.5 * (hi - lo);
        let c = 0.5 * (hi + lo);
        gx.iter()
            .zip(&gw)
            .map(|(x, w)| w * speed(c + h * x))
            .sum::<f64>()
            * h
    };
    let cells = 4096;
    let dt = std::f64::consts::FRAC_PI_2 / cells as f64;
    let mut cum = vec![0.0; cells + 1];
    for i in 0..cells {
        cum[i + 1] = cum[i] + arc(i as f64 * dt, (i + 1) as f64 * dt);
    }
    let total = cum[cells];
    let mut out = Vec::with_capacity(m + 1);
    out.push(Vec2::new(a, 0.0));
    for k in 1..m {
        let target = total * k as f64 / m as f64;
        let cell = cum
            .partition_point(|&c| c <= target)
            .saturating_sub(1)
            .min(cells - 1);
        let lo = cell as f64 * dt;
        let mut t = lo + dt * (target - cum[cell]) / (cum[cell + 1] - cum[cell]);
        for _ in 0..20 {
            let f = cum[cell] + arc(lo, t) - target;
            let step = f / speed(t);
            t -= step;
            if step.abs() < 1e-16 {
                break;
            }
        }
        out.push(Vec2::new(a * t.cos(), b * t.sin()));
    }
    out.push(Vec2::new(0.0, b));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn circle_curvature_is_inverse_radius() {
        let c: DiscreteCurve<f64> = circle(2.0, 1024).unwrap();
        for i in [0, 100, 511, 1023] {
            assert!((c.curvature_at(i) - 0.5).abs() < 1e-6);
        }
    }

    #[test]
    fn ellipse_vertex_curvatures() {
        let e: DiscreteCurve<f64> = ellipse(2.0, 1.0, 2048).unwrap();
        assert!((e.curvature_at(0) - 2.0).abs() < 1e-3);
        assert!((e.curvature_at(512) - 0.25).abs() < 1e-3);
        assert_eq!(e.node(512), Vec2::new(0.0, 1.0));
    }

    #[test]
    fn collinear_triple_has_zero_curvature() {
        let z = circumcurvature(
            Vec2::new(0.0, 0.0),
            Vec2::new(1.0, 1.0),
            Vec2::new(2.0, 2.0),
        );
        assert_eq!(z, 0.0);
    }

    #[test]
    fn nodes_are_equally_spaced() {
        let e: DiscreteCurve<f64> = ellipse(3.0, 1.0, 400).unwrap();
        let h = e.perimeter() / 400.0;
        for i in 0..400 {
            assert!((e.edge_length(i) / h - 1.0).abs() < 1e-3);
        }
    }

    #[test]
    fn orientation_and_area() {
        let c: DiscreteCurve<f64> = circle(1.0, 4096).unwrap();
        assert!((c.signed_area() - PI).abs() < 1e-5);
        assert!(DiscreteCurve::new(c.reversed().into_nodes()).is_err());
        let hole = DiscreteCurve::new_hole(c.reversed().into_nodes()).unwrap();
        assert!(hole.signed_area() < 0.0);
        // Inward normal of a hole points away from its center.
        assert!(hole.inward_normal(0).x > 0.99);
        assert!(c.inward_normal(0).x < -0.99);
    }

    #[test]
    fn self_intersection_detected() {
        let mut nodes: Vec<Vec2<f64>> = circle::<f64>(1.0, 32).unwrap().into_nodes();
        nodes.swap(3, 20);
        assert!(matches!(DiscreteCurve::new(nodes), Err(Error::Geometry(_))));
        assert!(DiscreteCurve::<f64>::new(vec![Vec2::zero(); 4]).is_err());
    }

    #[test]
    fn text_round_trip_is_exact() {
        let e: DiscreteCurve<f64> = ellipse(2.0, 1.0, 64).unwrap();
        let back = parse_curve_text::<f64>(&e.to_text()).unwrap();
        assert_eq!(back, e.nodes());
        assert!(parse_curve_text::<f64>("1 2\n3\n").is_err());
        assert!(parse_curve_text::<f64>("1 x\n").is_err());
    }

    #[test]
    fn resampling_stays_on_the_circle() {
        let c: DiscreteCurve<f64> = circle(1.0, 256).unwrap();
        let r = c.resample_equal_arclength(200, (5, 0.3));
        for p in r.nodes() {
            assert!((p.norm() - 1.0).abs() < 1e-7);
        }
        let h = r.perimeter() / 200.0;
        for i in 0..200 {
            assert!((r.edge_length(i) / h - 1.0).abs() < 1e-6);
        }
    }

    #[test]
    fn contains_and_axis_crossing() {
        let e: DiscreteCurve<f64> = ellipse(2.0, 1.0, 64).unwrap();
        assert!(e.contains(Vec2::new(1.9, 0.0)));
        assert!(!e.contains(Vec2::new(0.0, 1.01)));
        let (i, u) = e.positive_x_axis_crossing().unwrap();
        assert_eq!((i, u), (0, 0.0));
    }

    #[test]
    fn f32_curve() {
        let c: DiscreteCurve<f32> = circle(2.0, 256).unwrap();
        assert!((c.curvature_at(7) - 0.5).abs() < 1e-3);
    }
}
