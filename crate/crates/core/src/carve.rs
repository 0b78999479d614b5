//! Prisms, sections and the carving of the fundamental domain `F_e` in the
//! affine chart `{Re w = 1}` of `E_e`.
//!
//! Chart coordinates `(x₁, x₂, x₃)` stand for `z = x₁ + i x₂`, `w = 1 + i x₃`;
//! the lift on the sheet through `e` has `α = atan x₃`, `r = √(1 + x₃²)`.
//! For `h` in the cover, `I_h ∩ E_e` is the chart half-space
//! `Re(z_h) x₁ + Im(z_h) x₂ − Im(w_h) x₃ ≤ Re(w_h) − 1` restricted to the
//! sheet on which `h⁻¹a` has `|α| < π/2`.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;

use crate::cover::{act, inv, left_mul, mul, ConePoint, DiscPoint, UElement};
use crate::error::{Error, Result};
use crate::groups::{enumerate_orbit, hyperbolic_radius, OrbitConfig, OrbitPoint, StarSetup, TriangleGroupData};
use crate::polytope::{Cell, Plane, PlaneSource, Point3, Split};
use crate::polyhedron::{assemble, Polyhedron};
use crate::util::ToleranceIndex;

/// `φ(α) = 1/cos(α − mϑ)` with `α − mϑ ∈ [−ϑ/2, ϑ/2]`.
pub fn phi(alpha: f64, theta: f64) -> f64 {
    let m = (alpha / theta).round();
    1.0 / (alpha - m * theta).cos()
}

/// `s_u(z, α, r) = φ(α)/r`; `a ∈ Q_u` iff the value is at least 1.
pub fn section_su(a: &ConePoint, theta: f64) -> f64 {
    phi(a.alpha, theta) / a.r
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Interior,
    Boundary,
    Exterior,
}

/// `Q_x = ĝ·Q_u` for a representative `ĝ` with `ĝ(u) = x`.
#[derive(Debug, Clone, Copy)]
pub struct Prism {
    pub x: DiscPoint,
    pub g: UElement,
}

impl Prism {
    pub fn from_orbit(o: &OrbitPoint) -> Self {
        Prism { x: o.x, g: o.rep }
    }

    /// The point moved into the frame of `Q_u`.
    pub fn pull_back(&self, a: &ConePoint) -> ConePoint {
        act(&inv(&self.g), &UElement::IDENTITY, a)
    }

    pub fn section(&self, a: &ConePoint, theta: f64) -> f64 {
        section_su(&self.pull_back(a), theta)
    }

    pub fn classify(&self, a: &ConePoint, theta: f64, eps_geom: f64) -> Side {
        let b = self.pull_back(a);
        let bound = phi(b.alpha, theta);
        let eps = eps_geom * b.r;
        if b.r < bound - eps {
            Side::Interior
        } else if (b.r - bound).abs() <= eps {
            Side::Boundary
        } else {
            Side::Exterior
        }
    }
}

/// `s_P = max_x s_x`.
pub fn section_sp(a: &ConePoint, prisms: &[Prism], theta: f64) -> f64 {
    prisms
        .iter()
        .map(|p| p.section(a, theta))
        .fold(f64::NEG_INFINITY, f64::max)
}

/// `f(t) = √(1 − t²)/cos(ϑ/2)`.
pub fn lemma_bound(t: f64, theta: f64) -> f64 {
    (1.0 - t * t).max(0.0).sqrt() / (theta / 2.0).cos()
}

pub fn chart_lift(x: &Point3) -> ConePoint {
    ConePoint {
        z: Complex64::new(x.x, x.y),
        alpha: x.z.atan(),
        r: (1.0 + x.z * x.z).sqrt(),
    }
}

/// Ray projection onto the chart; `None` off the sheet `|α| < π/2`.
pub fn chart_point(a: &ConePoint) -> Option<Point3> {
    if a.alpha.abs() >= FRAC_PI_2 {
        return None;
    }
    let re_w = a.r * a.alpha.cos();
    let z = a.z / re_w;
    Some(Point3::new(z.re, z.im, a.alpha.tan()))
}

/// Raw coefficients `(n, c)` of the chart plane of `E_h`.
pub fn chart_plane(h: &UElement) -> Result<(Point3, f64)> {
    let w = h.v();
    let n = Point3::new(h.z.re, h.z.im, -w.im);
    if n.norm() < 1e-12 {
        return Err(Error::DegenerateConstraint);
    }
    Ok((n, w.re - 1.0))
}

/// Whether `a` lies in `I_h`: `b = h⁻¹a` has `|α_b| < π/2` and `r_b cos α_b ≥ 1`.
pub fn in_region(h: &UElement, a: &ConePoint, tol: f64) -> bool {
    let b = left_mul(&inv(h), a);
    b.alpha.abs() < FRAC_PI_2 && b.r * b.alpha.cos() >= 1.0 - tol
}

/// Whether `h⁻¹a` lies on the sheet `|α| < π/2`.
pub fn on_sheet(h: &UElement, a: &ConePoint) -> bool {
    left_mul(&inv(h), a).alpha.abs() < FRAC_PI_2
}

#[derive(Debug, Clone)]
pub struct Constraint {
    pub h: UElement,
    /// Unnormalised `(n, c)` with the `I_h` side `n·x ≤ c`.
    pub normal: Point3,
    pub offset: f64,
    pub orbit_index: usize,
    pub m: i64,
}

impl Constraint {
    pub fn plane(&self) -> Plane {
        Plane::new(self.normal, self.offset).expect("non-degenerate constraint")
    }

    pub fn residual(&self, x: &Point3) -> f64 {
        (self.normal.dot(x) - self.offset) / self.normal.norm()
    }
}

/// Half-width of the lifted-argument window for `ĝd^m`. On the slab the chart
/// argument is at most `ϑ/2`, the pulled-back point needs `|α| < π/2`, and
/// the cocycle correction of a product is below `π/2` in absolute value.
pub fn argument_window(theta: f64, margin: f64) -> f64 {
    PI + theta / 2.0 + margin
}

pub fn constraints_for(
    index: usize,
    g: &UElement,
    setup: &StarSetup,
    margin: f64,
) -> Vec<Constraint> {
    let window = argument_window(setup.theta, margin);
    let m0 = (g.alpha / setup.theta).round() as i64;
    let reach = (window / setup.theta).ceil() as i64 + 3;
    let mut out = Vec::new();
    for m in (m0 - reach)..=(m0 + reach) {
        let h = mul(g, &setup.d_pow(m));
        if h.alpha.abs() > window {
            continue;
        }
        if let Ok((normal, offset)) = chart_plane(&h) {
            out.push(Constraint {
                h,
                normal,
                offset,
                orbit_index: index,
                m,
            });
        }
    }
    out
}

/// Constraints for all orbit points with `|α_h|` inside the window; planes
/// are deduplicated together with their lift, so coincident planes of
/// different sheets stay separate.
pub fn candidate_constraints(orbit: &[OrbitPoint], setup: &StarSetup, margin: f64, eps_geom: f64) -> Vec<Constraint> {
    let mut seen = ToleranceIndex::<5>::new(eps_geom);
    let mut out = Vec::new();
    for (i, o) in orbit.iter().enumerate() {
        for c in constraints_for(i, &o.rep, setup, margin) {
            let p = c.plane();
            if seen
                .insert([p.n.x, p.n.y, p.n.z, p.c, c.h.alpha])
                .1
            {
                out.push(c);
            }
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub enum PlaneKind {
    /// Bounding planes approximating the light cone from inside.
    Guard,
    /// Auxiliary cuts that subdivide the slab.
    Internal,
    Constraint,
}

/// Geometric planes shared by all cells, deduplicated up to orientation.
#[derive(Debug, Clone)]
pub struct PlaneRegistry {
    pub planes: Vec<Plane>,
    pub kinds: Vec<PlaneKind>,
    /// Constraint indices whose plane coincides with the entry.
    pub constraints: Vec<Vec<usize>>,
    index: ToleranceIndex<4>,
}

impl PlaneSource for PlaneRegistry {
    fn plane(&self, id: usize) -> Plane {
        self.planes[id]
    }
}

impl PlaneRegistry {
    pub fn new(tol: f64) -> Self {
        Self {
            planes: Vec::new(),
            kinds: Vec::new(),
            constraints: Vec::new(),
            index: ToleranceIndex::new(tol),
        }
    }

    /// Registers a plane; returns its id and the sign `s` with
    /// `given = s · stored`.
    pub fn register(&mut self, plane: Plane, kind: PlaneKind) -> (usize, f64) {
        let (canon, sign) = plane.canonical();
        let (id, fresh) = self.index.insert([canon.n.x, canon.n.y, canon.n.z, canon.c]);
        if fresh {
            self.planes.push(canon);
            self.kinds.push(kind);
            self.constraints.push(Vec::new());
        } else if kind == PlaneKind::Constraint {
            self.kinds[id] = PlaneKind::Constraint;
        }
        (id, sign)
    }

    pub fn register_constraint(&mut self, index: usize, c: &Constraint) -> (usize, f64) {
        let (id, sign) = self.register(c.plane(), PlaneKind::Constraint);
        if !self.constraints[id].contains(&index) {
            self.constraints[id].push(index);
        }
        (id, sign)
    }
}

/// Part of `cell` in the half-space `sign·(n·x − c) ≤ 0` of plane `id`, and
/// the remainder.
pub fn split_signed(cell: &Cell, reg: &PlaneRegistry, id: usize, sign: f64) -> (Option<Cell>, Option<Cell>) {
    let (lo, hi) = match cell.split(reg, id) {
        Split::Inside => (Some(cell.clone()), None),
        Split::Outside => (None, Some(cell.clone())),
        Split::Both { inside, outside } => (Some(inside), Some(outside)),
    };
    if sign > 0.0 {
        (lo, hi)
    } else {
        (hi, lo)
    }
}

#[derive(Debug, Clone)]
pub struct CarveConfig {
    pub eps_geom: f64,
    pub margin: f64,
    /// Maximal slab thickness of one initial layer.
    pub layer_step: f64,
    /// Number of guard planes approximating the cone per layer.
    pub guard_sides: usize,
}

impl Default for CarveConfig {
    fn default() -> Self {
        Self {
            eps_geom: 1e-7,
            margin: 0.2,
            layer_step: 0.1,
            guard_sides: 64,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Carved {
    pub registry: PlaneRegistry,
    pub constraints: Vec<Constraint>,
    pub cells: Vec<Cell>,
}

fn slab_constraints(setup: &StarSetup) -> [Constraint; 2] {
    [1i64, -1].map(|m| {
        let h = setup.d_pow(m);
        let (normal, offset) = chart_plane(&h).expect("slab plane");
        Constraint {
            h,
            normal,
            offset,
            orbit_index: 0,
            m,
        }
    })
}

/// The slab `|x₃| ≤ tan(ϑ/2)` inside the cone, cut into layers, each bounded
/// by a polygonal frustum inscribed in the cone.
fn initial_cells(setup: &StarSetup, cfg: &CarveConfig, reg: &mut PlaneRegistry, constraints: &mut Vec<Constraint>) -> Vec<Cell> {
    let t = (setup.theta / 2.0).tan();
    let outer = (1.0 + t * t).sqrt() * 1.01 + 0.01;
    let mut box_planes = Vec::new();
    let bbox = crate::polytope::box_cell(
        &mut box_planes,
        Point3::new(-outer, -outer, -t - 0.01),
        Point3::new(outer, outer, t + 0.01),
    );
    // move the box planes into the registry
    let ids: Vec<usize> = box_planes
        .iter()
        .map(|p| {
            let (id, sign) = reg.register(*p, PlaneKind::Guard);
            debug_assert!(sign != 0.0);
            id
        })
        .collect();
    let remap = |cell: &Cell| -> Cell {
        let mut c = cell.clone();
        for f in &mut c.faces {
            let p = box_planes[f.plane];
            let (_, sign) = p.canonical();
            f.sign *= sign;
            f.plane = ids[f.plane];
        }
        c
    };
    let mut cell = remap(&bbox);

    for c in slab_constraints(setup) {
        let idx = constraints.len();
        constraints.push(c.clone());
        let (id, sign) = reg.register_constraint(idx, &c);
        // keep the side opposite to I_h
        cell = split_signed(&cell, reg, id, sign).1.expect("slab non-empty");
    }

    let layers = ((2.0 * t / cfg.layer_step).ceil() as usize).max(2);
    let mut cells = Vec::new();
    let mut rest = Some(cell);
    let cuts: Vec<f64> = (1..layers).map(|i| -t + 2.0 * t * i as f64 / layers as f64).collect();
    let mut bounds = vec![-t];
    bounds.extend(&cuts);
    bounds.push(t);
    for &z in &cuts {
        let (id, sign) = reg.register(Plane::new(Point3::z(), z).unwrap(), PlaneKind::Internal);
        let cur = rest.take().expect("layer");
        let (lo, hi) = split_signed(&cur, reg, id, sign);
        cells.push(lo.expect("layer below cut"));
        rest = hi;
    }
    cells.push(rest.expect("top layer"));

    let n = cfg.guard_sides;
    let shrink = (PI / n as f64).cos();
    cells
        .into_iter()
        .enumerate()
        .map(|(i, mut c)| {
            let mid = 0.5 * (bounds[i] + bounds[i + 1]);
            let rho = (1.0 + mid * mid).sqrt();
            let slope = mid / rho;
            for j in 0..n {
                let a = 2.0 * PI * j as f64 / n as f64;
                let plane = Plane::new(
                    Point3::new(a.cos(), a.sin(), -shrink * slope),
                    shrink * (rho - slope * mid),
                )
                .unwrap();
                let (id, sign) = reg.register(plane, PlaneKind::Guard);
                c = split_signed(&c, reg, id, sign).0.expect("guard keeps the axis");
            }
            c
        })
        .collect()
}

/// Lower bound of `|w − x̄z|` over a cell (`w = 1 + i x₃`).
fn lemma_lower_bound(cell: &Cell, x: &DiscPoint) -> f64 {
    let verts = cell.vertices();
    let mut lin = f64::INFINITY;
    let mut zmax: f64 = 0.0;
    for v in &verts {
        let z = Complex64::new(v.x, v.y);
        lin = lin.min(1.0 - (x.0.conj() * z).re);
        zmax = zmax.max(z.norm());
    }
    lin.max(1.0 - x.norm() * zmax)
}

/// Carves `F_e` out of the slab: for each orbit point `x ≠ u` (by increasing
/// `|x|`) the part of each cell inside `Int Q_x`, i.e. outside every `I_h`,
/// `h = ĝd^m`, is removed.
pub fn carve_domain(orbit: &[OrbitPoint], setup: &StarSetup, cfg: &CarveConfig) -> Result<Carved> {
    let mut reg = PlaneRegistry::new(cfg.eps_geom);
    let mut constraints = Vec::new();
    let mut cells = initial_cells(setup, cfg, &mut reg, &mut constraints);
    let theta = setup.theta;
    let vol_eps = 1e-16;

    for (oi, o) in orbit.iter().enumerate() {
        if oi == 0 && o.x.distance(&setup.u) < 1e-9 {
            continue;
        }
        let f = lemma_bound(o.x.norm(), theta);
        let local: Vec<(Constraint, usize, f64)> = constraints_for(oi, &o.rep, setup, cfg.margin)
            .into_iter()
            .map(|c| {
                let idx = constraints.len();
                constraints.push(c.clone());
                let (id, sign) = reg.register_constraint(idx, &c);
                (c, id, sign)
            })
            .collect();
        let mut next = Vec::with_capacity(cells.len());
        for cell in cells {
            if lemma_lower_bound(&cell, &o.x) > f + 1e-12 {
                next.push(cell);
                continue;
            }
            let mut relevant = Vec::new();
            let mut whole = false;
            for (c, id, sign) in &local {
                let (piece, rest) = split_signed(&cell, &reg, *id, *sign);
                let Some(piece) = piece else { continue };
                if piece.volume() < vol_eps {
                    continue;
                }
                if !on_sheet(&c.h, &chart_lift(&piece.interior_point())) {
                    continue;
                }
                if rest.is_none() {
                    whole = true;
                    break;
                }
                relevant.push((*id, *sign));
            }
            if whole {
                next.push(cell);
                continue;
            }
            let mut rest = Some(cell);
            for (id, sign) in relevant {
                let Some(cur) = rest.take() else { break };
                let (piece, remainder) = split_signed(&cur, &reg, id, sign);
                if let Some(p) = piece {
                    if p.volume() >= vol_eps {
                        next.push(p);
                    }
                }
                rest = remainder;
            }
        }
        cells = next;
        if cells.is_empty() {
            return Err(Error::EmptyRegion);
        }
    }
    Ok(Carved {
        registry: reg,
        constraints,
        cells,
    })
}

/// Sound lower bound of `|w| − |z|` over the kept cells. On a cell,
/// `√(1 + x₃²)` dominates each of its tangent lines `L`, and `L − |z|` is
/// concave, so its minimum over the cell is attained at a vertex.
pub fn mu_lower_bound(cells: &[Cell]) -> f64 {
    cells
        .iter()
        .map(|c| {
            let verts = c.vertices();
            let (lo, hi) = c.bounds();
            [lo.z, 0.5 * (lo.z + hi.z), hi.z]
                .into_iter()
                .map(|t0| {
                    let rho = (1.0 + t0 * t0).sqrt();
                    let slope = t0 / rho;
                    verts
                        .iter()
                        .map(|v| rho + slope * (v.z - t0) - v.x.hypot(v.y))
                        .fold(f64::INFINITY, f64::min)
                })
                .fold(f64::NEG_INFINITY, f64::max)
        })
        .fold(f64::INFINITY, f64::min)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Certificate {
    Pass,
    Fail { needed: f64 },
}

/// `R* = √(1 − μ² cos²(ϑ/2))`, clamped at 0.
pub fn required_radius(mu: f64, theta: f64) -> f64 {
    let c = (theta / 2.0).cos();
    (1.0 - mu * mu * c * c).max(0.0).sqrt()
}

pub fn relevance_certificate(mu: f64, radius: f64, theta: f64) -> Result<Certificate> {
    if !(mu > 0.0) {
        return Err(Error::DegenerateMu(mu));
    }
    let needed = required_radius(mu, theta);
    Ok(if radius >= needed {
        Certificate::Pass
    } else {
        Certificate::Fail { needed }
    })
}

#[derive(Debug, Clone)]
pub struct BuildConfig {
    pub carve: CarveConfig,
    pub orbit: OrbitConfig,
    pub r0: f64,
    pub growth: f64,
    pub iteration_cap: usize,
    /// Run one more radius step after the certificate passes and compare.
    pub verify_stability: bool,
}

impl Default for BuildConfig {
    fn default() -> Self {
        Self {
            carve: CarveConfig::default(),
            orbit: OrbitConfig::default(),
            r0: 0.7,
            growth: 1.15,
            iteration_cap: 12,
            verify_stability: true,
        }
    }
}

/// Euclidean radius after growing the hyperbolic radius by `factor`.
pub fn grow_radius(radius: f64, factor: f64) -> f64 {
    (0.5 * factor * hyperbolic_radius(radius)).tanh()
}

#[derive(Debug, Clone)]
pub struct Domain {
    pub polyhedron: Polyhedron,
    pub orbit: Vec<OrbitPoint>,
    pub prisms: Vec<Prism>,
    pub constraints: Vec<Constraint>,
    pub radius: f64,
    pub required_radius: f64,
    pub iterations: usize,
    /// Largest vertex displacement observed in the stability rerun.
    pub stability: Option<f64>,
}

pub fn carve_at(tg: &TriangleGroupData, setup: &StarSetup, radius: f64, cfg: &BuildConfig) -> Result<(Vec<OrbitPoint>, Polyhedron, Vec<Constraint>)> {
    let orbit = enumerate_orbit(tg, setup.u_index, radius, &cfg.orbit)?;
    let carved = carve_domain(&orbit, setup, &cfg.carve)?;
    let poly = assemble(&carved, setup, cfg.carve.eps_geom)?;
    Ok((orbit, poly, carved.constraints))
}

fn max_vertex_shift(a: &Polyhedron, b: &Polyhedron) -> f64 {
    if a.vertices.len() != b.vertices.len() {
        return f64::INFINITY;
    }
    a.vertices
        .iter()
        .map(|v| {
            b.vertices
                .iter()
                .map(|w| (v - w).norm())
                .fold(f64::INFINITY, f64::min)
        })
        .fold(0.0, f64::max)
}

/// Grows the orbit radius until the relevance certificate passes.
pub fn build_fundamental_domain(tg: &TriangleGroupData, setup: &StarSetup, cfg: &BuildConfig) -> Result<Domain> {
    let mut radius = cfg.r0;
    let mut needed = 1.0;
    for iteration in 1..=cfg.iteration_cap {
        let attempt = carve_at(tg, setup, radius, cfg);
        let (orbit, poly, constraints) = match attempt {
            Err(Error::NonCompact) => {
                radius = grow_radius(radius, cfg.growth);
                continue;
            }
            other => other?,
        };
        match relevance_certificate(poly.mu, radius, setup.theta)? {
            Certificate::Pass => {
                let stability = if cfg.verify_stability {
                    let bigger = grow_radius(radius, cfg.growth);
                    let (_, check, _) = carve_at(tg, setup, bigger, cfg)?;
                    let shift = max_vertex_shift(&poly, &check);
                    if shift > cfg.carve.eps_geom {
                        return Err(Error::Assembly(format!(
                            "domain changed by {shift:e} when the orbit radius grew to {bigger}"
                        )));
                    }
                    Some(shift)
                } else {
                    None
                };
                let prisms = orbit.iter().map(Prism::from_orbit).collect();
                return Ok(Domain {
                    required_radius: required_radius(poly.mu, setup.theta),
                    polyhedron: poly,
                    orbit,
                    prisms,
                    constraints,
                    radius,
                    iterations: iteration,
                    stability,
                });
            }
            Certificate::Fail { needed: n } => {
                needed = n;
                // never step past what the current certificate asks for
                radius = grow_radius(radius, cfg.growth).min(n + 1e-9);
            }
        }
    }
    Err(Error::IterationCap { radius, needed })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cover::rotation_lift;
    use crate::groups::{build_triangle_group, star_setup};

    fn setup_533() -> (TriangleGroupData, StarSetup) {
        let tg = build_triangle_group(5, 3, 3).unwrap().with_level(2).unwrap();
        let setup = star_setup(&tg, 0, 3).unwrap();
        (tg, setup)
    }

    #[test]
    fn phi_values() {
        let theta = 2.0 * PI / 15.0;
        assert_eq!(phi(0.0, theta), 1.0);
        assert!((phi(theta / 2.0, theta) - 1.0 / (theta / 2.0).cos()).abs() < 1e-15);
        assert!((phi(-3.0 * theta + 0.01, theta) - 1.0 / 0.01f64.cos()).abs() < 1e-12);
    }

    #[test]
    fn slab_planes_of_d() {
        let (_, setup) = setup_533();
        let t = (setup.theta / 2.0).tan();
        // E_{d^{±1}} meets the chart in x₃ = ∓tan(ϑ/2)
        for (m, level) in [(1, -t), (-1, t)] {
            let (n, c) = chart_plane(&setup.d_pow(m)).unwrap();
            assert!(n.x.abs() < 1e-15 && n.y.abs() < 1e-15);
            assert!((c / n.z - level).abs() < 1e-12);
            // the identity lies on the slab side
            assert!(!in_region(&setup.d_pow(m), &chart_lift(&Point3::zeros()), 0.0));
        }
        assert!(matches!(chart_plane(&UElement::IDENTITY), Err(Error::DegenerateConstraint)));
    }

    #[test]
    fn chart_round_trip() {
        let y = Point3::new(0.2, -0.3, 0.15);
        let a = chart_lift(&y);
        assert!((a.r * a.alpha.cos() - 1.0).abs() < 1e-15);
        assert!((chart_point(&a).unwrap() - y).norm() < 1e-15);
        let off = ConePoint { alpha: 2.0, ..a };
        assert!(chart_point(&off).is_none());
    }

    #[test]
    fn region_matches_chart_halfspace() {
        let (_, setup) = setup_533();
        let h = mul(&rotation_lift(&DiscPoint::new(0.3, 0.1), 1.1), &setup.d_pow(2));
        let (n, c) = chart_plane(&h).unwrap();
        for y in [Point3::new(0.1, 0.2, 0.05), Point3::new(-0.4, 0.1, -0.1), Point3::new(0.5, 0.3, 0.2)] {
            let a = chart_lift(&y);
            if on_sheet(&h, &a) {
                assert_eq!(in_region(&h, &a, 0.0), n.dot(&y) <= c);
            }
        }
    }

    #[test]
    fn slab_only_region_is_non_compact() {
        let (tg, setup) = setup_533();
        let full = enumerate_orbit(&tg, 0, 0.5, &OrbitConfig::default()).unwrap();
        let orbit = vec![full[0].clone()];
        assert_eq!(orbit[0].x.norm(), 0.0);
        let carved = carve_domain(&orbit, &setup, &CarveConfig::default()).unwrap();
        assert!(matches!(assemble(&carved, &setup, 1e-7), Err(Error::NonCompact)));
    }

    #[test]
    fn certificate_arithmetic() {
        let theta = 2.0 * PI / 15.0;
        let expect = (1.0 - 0.04 * (PI / 15.0).cos().powi(2)).sqrt();
        assert!((required_radius(0.2, theta) - expect).abs() < 1e-15);
        assert!((required_radius(0.2, theta) - 0.9807).abs() < 1e-4);
        assert_eq!(required_radius(2.0, theta), 0.0);
        assert!(required_radius(1e-9, theta) > 1.0 - 1e-12);
        assert_eq!(relevance_certificate(0.2, 0.99, theta).unwrap(), Certificate::Pass);
        assert!(matches!(relevance_certificate(0.2, 0.9, theta).unwrap(), Certificate::Fail { .. }));
        assert!(relevance_certificate(0.0, 0.9, theta).is_err());
    }

    #[test]
    fn radius_growth_is_hyperbolic() {
        let r = grow_radius(0.7, 1.15);
        assert!((hyperbolic_radius(r) - 1.15 * hyperbolic_radius(0.7)).abs() < 1e-12);
        assert!(r < 1.0);
    }

    #[test]
    fn domain_of_533() {
        let (tg, setup) = setup_533();
        let d = build_fundamental_domain(&tg, &setup, &BuildConfig::default()).unwrap();
        assert!(d.polyhedron.compact);
        assert!(d.radius >= d.required_radius);
        assert!(d.stability.unwrap() <= 1e-7);
        assert!(d.polyhedron.max_planarity_residual() <= 1e-7);
        assert!(d.polyhedron.volume() > 0.0);
        assert!((d.polyhedron.volume() - d.polyhedron.cell_volume()).abs() < 1e-9);
    }
}
