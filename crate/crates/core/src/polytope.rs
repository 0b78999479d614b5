//! Convex polytopes in the chart, stored as face lists with plane references.

use nalgebra::Vector3;

pub type Point3 = Vector3<f64>;

/// Distance below which a vertex counts as lying on a cutting plane.
pub const ON_PLANE: f64 = 1e-10;

/// Oriented plane `n·x = c` with unit normal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Plane {
    pub n: Point3,
    pub c: f64,
}

impl Plane {
    /// Normalises `(n, c)`; `None` for a vanishing normal.
    pub fn new(n: Point3, c: f64) -> Option<Self> {
        let len = n.norm();
        (len > 1e-14).then(|| Plane { n: n / len, c: c / len })
    }

    pub fn eval(&self, x: &Point3) -> f64 {
        self.n.dot(x) - self.c
    }

    pub fn flipped(&self) -> Self {
        Plane { n: -self.n, c: -self.c }
    }

    /// Orientation with the first significant normal component positive.
    pub fn canonical(&self) -> (Self, f64) {
        let lead = [self.n.x, self.n.y, self.n.z]
            .into_iter()
            .find(|v| v.abs() > 1e-9)
            .unwrap_or(1.0);
        if lead < 0.0 {
            (self.flipped(), -1.0)
        } else {
            (*self, 1.0)
        }
    }

    /// Two unit vectors spanning the plane, right-handed with `n`.
    pub fn basis(&self) -> (Point3, Point3) {
        let helper = if self.n.x.abs() < 0.6 {
            Point3::x()
        } else if self.n.y.abs() < 0.6 {
            Point3::y()
        } else {
            Point3::z()
        };
        let e1 = helper.cross(&self.n).normalize();
        let e2 = self.n.cross(&e1);
        (e1, e2)
    }
}

/// A face of a convex cell: polygon on plane `plane` (index into a registry)
/// whose outward normal is `sign · n`. Vertices are counter-clockwise seen
/// from outside.
#[derive(Debug, Clone)]
pub struct Face {
    pub plane: usize,
    pub sign: f64,
    pub verts: Vec<Point3>,
}

#[derive(Debug, Clone)]
pub struct Cell {
    pub faces: Vec<Face>,
}

/// Lookup of plane geometry by registry index.
pub trait PlaneSource {
    fn plane(&self, id: usize) -> Plane;
}

impl PlaneSource for [Plane] {
    fn plane(&self, id: usize) -> Plane {
        self[id]
    }
}

impl PlaneSource for Vec<Plane> {
    fn plane(&self, id: usize) -> Plane {
        self[id]
    }
}

#[derive(Debug, Clone)]
pub enum Split {
    /// Entirely inside the kept half-space.
    Inside,
    /// Entirely outside.
    Outside,
    Both { inside: Cell, outside: Cell },
}

fn lerp_edge(a: &Point3, da: f64, b: &Point3, db: f64) -> Point3 {
    // order endpoints so both faces sharing the edge produce the same point
    let (p, dp, q, dq) = if (a.x, a.y, a.z) <= (b.x, b.y, b.z) {
        (a, da, b, db)
    } else {
        (b, db, a, da)
    };
    let t = dp / (dp - dq);
    p + (q - p) * t
}

fn dedupe_points(points: &mut Vec<Point3>, tol: f64) {
    let mut out: Vec<Point3> = Vec::with_capacity(points.len());
    for p in points.drain(..) {
        if out.iter().all(|q| (q - p).norm() > tol) {
            out.push(p);
        }
    }
    *points = out;
}

/// Orders coplanar points counter-clockwise about `normal`.
pub fn order_polygon(points: &mut Vec<Point3>, normal: &Point3) {
    if points.is_empty() {
        return;
    }
    let centroid = points.iter().sum::<Point3>() / points.len() as f64;
    let plane = Plane { n: *normal, c: 0.0 };
    let (e1, e2) = plane.basis();
    points.sort_by(|a, b| {
        let ua = a - centroid;
        let ub = b - centroid;
        let ta = ua.dot(&e2).atan2(ua.dot(&e1));
        let tb = ub.dot(&e2).atan2(ub.dot(&e1));
        ta.partial_cmp(&tb).unwrap()
    });
}

/// Vector area (half the sum of edge cross products).
pub fn polygon_area_vector(verts: &[Point3]) -> Point3 {
    let mut s = Point3::zeros();
    for i in 0..verts.len() {
        s += verts[i].cross(&verts[(i + 1) % verts.len()]);
    }
    s * 0.5
}

/// Area centroid of a planar polygon.
pub fn polygon_centroid(verts: &[Point3]) -> Point3 {
    let o = verts[0];
    let normal = polygon_area_vector(verts);
    let nn = normal.norm_squared();
    if nn < 1e-30 {
        return verts.iter().sum::<Point3>() / verts.len() as f64;
    }
    let mut acc = Point3::zeros();
    let mut total = 0.0;
    for i in 1..verts.len() - 1 {
        let a = (verts[i] - o).cross(&(verts[i + 1] - o)).dot(&normal) / nn.sqrt();
        acc += (o + verts[i] + verts[i + 1]) / 3.0 * a;
        total += a;
    }
    if total.abs() < 1e-300 {
        verts.iter().sum::<Point3>() / verts.len() as f64
    } else {
        acc / total
    }
}

fn clip_polygon(verts: &[Point3], d: &[f64], keep_negative: bool, out_on: &mut Vec<Point3>) -> Vec<Point3> {
    let s = if keep_negative { 1.0 } else { -1.0 };
    let n = verts.len();
    let mut out = Vec::with_capacity(n + 2);
    for i in 0..n {
        let j = (i + 1) % n;
        let (a, b) = (&verts[i], &verts[j]);
        let (da, db) = (s * d[i], s * d[j]);
        if da <= ON_PLANE {
            out.push(*a);
            if da.abs() <= ON_PLANE {
                out_on.push(*a);
            }
        }
        if (da < -ON_PLANE && db > ON_PLANE) || (da > ON_PLANE && db < -ON_PLANE) {
            let p = lerp_edge(a, d[i], b, d[j]);
            out.push(p);
            out_on.push(p);
        }
    }
    dedupe_points(&mut out, 1e-13);
    out
}

impl Cell {
    pub fn vertices(&self) -> Vec<Point3> {
        let mut pts: Vec<Point3> = self.faces.iter().flat_map(|f| f.verts.iter().copied()).collect();
        dedupe_points(&mut pts, 1e-12);
        pts
    }

    /// Vertex average; strictly interior for a non-degenerate cell.
    pub fn interior_point(&self) -> Point3 {
        let v = self.vertices();
        v.iter().sum::<Point3>() / v.len() as f64
    }

    pub fn volume(&self) -> f64 {
        let mut vol = 0.0;
        for f in &self.faces {
            let o = f.verts[0];
            for i in 1..f.verts.len() - 1 {
                vol += o.dot(&f.verts[i].cross(&f.verts[i + 1]));
            }
        }
        vol / 6.0
    }

    pub fn bounds(&self) -> (Point3, Point3) {
        let mut lo = Point3::repeat(f64::INFINITY);
        let mut hi = Point3::repeat(f64::NEG_INFINITY);
        for f in &self.faces {
            for v in &f.verts {
                lo = lo.inf(v);
                hi = hi.sup(v);
            }
        }
        (lo, hi)
    }

    /// Signed inclusion test against the cell's own face planes.
    pub fn contains<P: PlaneSource + ?Sized>(&self, planes: &P, x: &Point3, tol: f64) -> bool {
        self.faces
            .iter()
            .all(|f| f.sign * planes.plane(f.plane).eval(x) <= tol)
    }

    /// Largest signed distance of a point outside the cell's planes.
    pub fn max_violation<P: PlaneSource + ?Sized>(&self, planes: &P, x: &Point3) -> f64 {
        self.faces
            .iter()
            .map(|f| f.sign * planes.plane(f.plane).eval(x))
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Splits by the plane `id`: the inside part is `{n·x ≤ c}`.
    pub fn split<P: PlaneSource + ?Sized>(&self, planes: &P, id: usize) -> Split {
        let plane = planes.plane(id);
        let mut any_neg = false;
        let mut any_pos = false;
        let dists: Vec<Vec<f64>> = self
            .faces
            .iter()
            .map(|f| {
                f.verts
                    .iter()
                    .map(|v| {
                        let d = plane.eval(v);
                        any_neg |= d < -ON_PLANE;
                        any_pos |= d > ON_PLANE;
                        d
                    })
                    .collect()
            })
            .collect();
        if !any_pos {
            return Split::Inside;
        }
        if !any_neg {
            return Split::Outside;
        }
        let mut halves = [Vec::new(), Vec::new()];
        let mut caps: [Vec<Point3>; 2] = [Vec::new(), Vec::new()];
        for (f, d) in self.faces.iter().zip(&dists) {
            for (side, keep_negative) in [(0usize, true), (1usize, false)] {
                let poly = clip_polygon(&f.verts, d, keep_negative, &mut caps[side]);
                if poly.len() >= 3 && polygon_area_vector(&poly).norm() > 1e-18 {
                    halves[side].push(Face {
                        plane: f.plane,
                        sign: f.sign,
                        verts: poly,
                    });
                }
            }
        }
        for side in 0..2 {
            let normal = if side == 0 { plane.n } else { -plane.n };
            let mut cap = std::mem::take(&mut caps[side]);
            dedupe_points(&mut cap, 1e-12);
            if cap.len() >= 3 {
                order_polygon(&mut cap, &normal);
                halves[side].push(Face {
                    plane: id,
                    sign: if side == 0 { 1.0 } else { -1.0 },
                    verts: cap,
                });
            }
        }
        let [inside, outside] = halves;
        if inside.len() < 4 {
            return Split::Outside;
        }
        if outside.len() < 4 {
            return Split::Inside;
        }
        Split::Both {
            inside: Cell { faces: inside },
            outside: Cell { faces: outside },
        }
    }

    /// The part inside `{n·x ≤ c}` (or `None` if empty).
    pub fn clip<P: PlaneSource + ?Sized>(&self, planes: &P, id: usize) -> Option<Cell> {
        match self.split(planes, id) {
            Split::Inside => Some(self.clone()),
            Split::Outside => None,
            Split::Both { inside, .. } => Some(inside),
        }
    }

    /// The part inside `{n·x ≥ c}`.
    pub fn clip_outside<P: PlaneSource + ?Sized>(&self, planes: &P, id: usize) -> Option<Cell> {
        match self.split(planes, id) {
            Split::Inside => None,
            Split::Outside => Some(self.clone()),
            Split::Both { outside, .. } => Some(outside),
        }
    }
}

/// Splits a convex planar polygon by a plane; returns the `(≤, ≥)` parts.
pub fn split_polygon(verts: &[Point3], plane: &Plane) -> (Option<Vec<Point3>>, Option<Vec<Point3>>) {
    let d: Vec<f64> = verts.iter().map(|v| plane.eval(v)).collect();
    let any_neg = d.iter().any(|&x| x < -ON_PLANE);
    let any_pos = d.iter().any(|&x| x > ON_PLANE);
    if !any_pos {
        return (Some(verts.to_vec()), None);
    }
    if !any_neg {
        return (None, Some(verts.to_vec()));
    }
    let mut sink = Vec::new();
    let lo = clip_polygon(verts, &d, true, &mut sink);
    let hi = clip_polygon(verts, &d, false, &mut sink);
    let ok = |p: Vec<Point3>| (p.len() >= 3 && polygon_area_vector(&p).norm() > 1e-18).then_some(p);
    (ok(lo), ok(hi))
}

/// Axis-aligned box as a cell; planes are appended to `planes`.
pub fn box_cell(planes: &mut Vec<Plane>, lo: Point3, hi: Point3) -> Cell {
    let mut cell_planes = Vec::new();
    for axis in 0..3 {
        let mut n = Point3::zeros();
        n[axis] = 1.0;
        planes.push(Plane { n, c: hi[axis] });
        cell_planes.push((planes.len() - 1, 1.0));
        planes.push(Plane { n: -n, c: -lo[axis] });
        cell_planes.push((planes.len() - 1, 1.0));
    }
    let corners = |a: usize, fixed: f64| -> Vec<Point3> {
        let (b, c) = ((a + 1) % 3, (a + 2) % 3);
        let mut out = Vec::new();
        for (sb, sc) in [(0, 0), (1, 0), (1, 1), (0, 1)] {
            let mut p = Point3::zeros();
            p[a] = fixed;
            p[b] = if sb == 0 { lo[b] } else { hi[b] };
            p[c] = if sc == 0 { lo[c] } else { hi[c] };
            out.push(p);
        }
        out
    };
    let mut faces = Vec::new();
    for axis in 0..3 {
        let mut top = corners(axis, hi[axis]);
        let mut n = Point3::zeros();
        n[axis] = 1.0;
        order_polygon(&mut top, &n);
        faces.push(Face {
            plane: cell_planes[2 * axis].0,
            sign: 1.0,
            verts: top,
        });
        let mut bottom = corners(axis, lo[axis]);
        order_polygon(&mut bottom, &(-n));
        faces.push(Face {
            plane: cell_planes[2 * axis + 1].0,
            sign: 1.0,
            verts: bottom,
        });
    }
    Cell { faces }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_box() -> (Vec<Plane>, Cell) {
        let mut planes = Vec::new();
        let c = box_cell(&mut planes, Point3::zeros(), Point3::repeat(1.0));
        (planes, c)
    }

    fn euler(cell: &Cell) -> i64 {
        let v = cell.vertices().len() as i64;
        let e: usize = cell.faces.iter().map(|f| f.verts.len()).sum();
        v - (e as i64) / 2 + cell.faces.len() as i64
    }

    #[test]
    fn box_volume_and_orientation() {
        let (planes, c) = unit_box();
        assert!((c.volume() - 1.0).abs() < 1e-14);
        for f in &c.faces {
            let n = polygon_area_vector(&f.verts);
            assert!((n.normalize() - planes[f.plane].n * f.sign).norm() < 1e-12);
        }
        assert_eq!(euler(&c), 2);
    }

    #[test]
    fn diagonal_split() {
        let (mut planes, c) = unit_box();
        planes.push(Plane::new(Point3::new(1.0, 1.0, 1.0), 1.5).unwrap());
        let id = planes.len() - 1;
        match c.split(&planes, id) {
            Split::Both { inside, outside } => {
                assert!((inside.volume() + outside.volume() - 1.0).abs() < 1e-12);
                assert!((inside.volume() - 0.5).abs() < 1e-12);
                assert_eq!(inside.faces.len(), 7);
                assert_eq!(euler(&inside), 2);
                assert_eq!(euler(&outside), 2);
                for f in inside.faces.iter().chain(&outside.faces) {
                    let n = polygon_area_vector(&f.verts);
                    assert!((n.normalize() - planes[f.plane].n * f.sign).norm() < 1e-9);
                }
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn corner_cut_volume() {
        let (mut planes, c) = unit_box();
        planes.push(Plane::new(Point3::new(1.0, 1.0, 1.0), 0.3).unwrap());
        let id = planes.len() - 1;
        let inside = c.clip(&planes, id).unwrap();
        let expected = 0.3f64.powi(3) / 6.0;
        assert!((inside.volume() - expected).abs() < 1e-14);
        let outside = c.clip_outside(&planes, id).unwrap();
        assert!((outside.volume() - (1.0 - expected)).abs() < 1e-12);
    }

    #[test]
    fn touching_plane_does_not_split() {
        let (mut planes, c) = unit_box();
        planes.push(Plane::new(Point3::new(1.0, 0.0, 0.0), 1.0).unwrap());
        assert!(matches!(c.split(&planes, planes.len() - 1), Split::Inside));
        planes.push(Plane::new(Point3::new(1.0, 1.0, 0.0), 0.0).unwrap());
        assert!(matches!(c.split(&planes, planes.len() - 1), Split::Outside));
    }

    #[test]
    fn polygon_split_areas() {
        let square = vec![
            Point3::new(0.0, 0.0, 0.0),
            Point3::new(1.0, 0.0, 0.0),
            Point3::new(1.0, 1.0, 0.0),
            Point3::new(0.0, 1.0, 0.0),
        ];
        let plane = Plane::new(Point3::new(1.0, 0.0, 0.0), 0.25).unwrap();
        let (lo, hi) = split_polygon(&square, &plane);
        let a = polygon_area_vector(&lo.unwrap()).norm();
        let b = polygon_area_vector(&hi.unwrap()).norm();
        assert!((a - 0.25).abs() < 1e-14 && (b - 0.75).abs() < 1e-14);
        let c = polygon_centroid(&square);
        assert!((c - Point3::new(0.5, 0.5, 0.0)).norm() < 1e-14);
    }
}
