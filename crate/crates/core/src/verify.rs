//! Sampling verifications of a certified domain: the tiling of the cover by
//! pair-translates, boundary cross-validation against the prism section,
//! the prism bound and the per-facet checks.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use rand::Rng;

use crate::carve::{
    chart_lift, chart_point, lemma_bound, phi, section_sp, section_su, Domain, Prism, Side,
};
use crate::cover::{act, inv, left_mul, mul, scale, ConePoint, UElement};
use crate::groups::{OrbitPoint, StarSetup};
use crate::identify::canonical_pair;
use crate::polyhedron::Polyhedron;
use crate::polytope::Point3;

/// Uniform point of the disc of radius `radius`.
pub fn random_disc<R: Rng>(rng: &mut R, radius: f64) -> Complex64 {
    let r = radius * rng.gen::<f64>().sqrt();
    Complex64::from_polar(r, rng.gen_range(-PI..PI))
}

/// A random element with `|z| < z_radius` and `|α| ≤ alpha_half`.
pub fn sample_near_identity<R: Rng>(rng: &mut R, z_radius: f64, alpha_half: f64) -> UElement {
    UElement::new(random_disc(rng, z_radius), rng.gen_range(-alpha_half..=alpha_half))
}

/// Largest `|x|` for which `Q_x` can meet the boundary point over `a`: on
/// `Q_x`, `|w| − |x||z| ≤ f(|x|)`, and the boundary point is `a` scaled by at
/// least `s_u(a)`.
pub fn prism_reach(a: &ConePoint, theta: f64) -> f64 {
    let su = section_su(a, theta);
    let (w, z) = (a.r, a.z.norm());
    let steps = 20_000;
    let h = 1.0 / steps as f64;
    (0..steps)
        .rev()
        .map(|i| i as f64 * h)
        .find(|&t| w - t * z <= lemma_bound(t, theta) / su)
        .map_or(0.0, |t| (t + 2.0 * h).min(1.0))
}

#[derive(Debug, Clone, Default)]
pub struct Membership {
    /// Products `h = γ₁γ₂⁻¹` of the translates containing the point.
    pub classes: Vec<UElement>,
    /// Whether some translate puts the point within the tolerance of `∂F_e`.
    pub near_boundary: bool,
}

/// Translates `(γ₁, γ₂)·F_e` containing the boundary point over `a`.
/// Translates are indexed by the product `γ₁γ₂⁻¹`; the canonical pair of each
/// product is used, any other pair with that product differing by a
/// stabilizer element that preserves `F_e`.
pub fn membership_translate(
    a: &ConePoint,
    poly: &Polyhedron,
    setup: &StarSetup,
    orbit: &[OrbitPoint],
    tol: f64,
) -> Membership {
    let prisms: Vec<Prism> = orbit.iter().map(Prism::from_orbit).collect();
    let sections: Vec<f64> = prisms.iter().map(|p| p.section(a, setup.theta)).collect();
    let sp = sections.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let b = scale(sp, a).expect("positive section");
    let (lo, hi) = poly.bounds();
    let pad = Point3::repeat(tol);
    let reach = ((PI + setup.theta) / setup.theta).ceil() as i64 + 3;
    let mut out = Membership::default();
    for (i, s) in sections.iter().enumerate() {
        if *s < sp * (1.0 - 1e-6) {
            continue;
        }
        let g = orbit[i].rep;
        let m0 = ((g.alpha - b.alpha) / setup.theta).round() as i64;
        for m in (m0 - reach)..=(m0 + reach) {
            let (g1, g2) = canonical_pair(&g, m, setup);
            let Some(y) = chart_point(&act(&inv(&g1), &inv(&g2), &b)) else { continue };
            if y.iter().zip(lo.iter().zip(hi.iter())).any(|(v, (l, h))| *v < l - pad.x || *v > h + pad.x) {
                continue;
            }
            if poly.boundary_distance(&y) <= tol {
                out.near_boundary = true;
            }
            if poly.contains(&y) {
                out.classes.push(mul(&g1, &inv(&g2)));
            }
        }
    }
    out
}

#[derive(Debug, Clone)]
pub struct TilingReport {
    pub samples: usize,
    pub exactly_one: usize,
    pub excluded: usize,
    /// Non-excluded samples whose class count was not one, with the count.
    pub failures: Vec<(usize, usize)>,
    pub orbit_radius: f64,
}

impl TilingReport {
    pub fn excluded_fraction(&self) -> f64 {
        self.excluded as f64 / self.samples.max(1) as f64
    }

    pub fn passed(&self, max_excluded: f64) -> bool {
        self.failures.is_empty() && self.excluded_fraction() < max_excluded
    }
}

/// Samples near the identity and counts the translates of `F_e` containing
/// each boundary point; the orbit is enumerated far enough for every sample.
pub fn tiling_test<R: Rng>(
    rng: &mut R,
    n: usize,
    domain: &Domain,
    orbit_for: impl Fn(f64) -> crate::error::Result<Vec<OrbitPoint>>,
    setup: &StarSetup,
    tol: f64,
) -> crate::error::Result<TilingReport> {
    let samples: Vec<ConePoint> = (0..n)
        .map(|_| sample_near_identity(rng, 0.5, FRAC_PI_2).as_cone_point())
        .collect();
    let radius = samples
        .iter()
        .map(|a| prism_reach(a, setup.theta))
        .fold(0.0, f64::max);
    let orbit = orbit_for(radius)?;
    let mut report = TilingReport {
        samples: n,
        exactly_one: 0,
        excluded: 0,
        failures: Vec::new(),
        orbit_radius: radius,
    };
    for (i, a) in samples.iter().enumerate() {
        let m = membership_translate(a, &domain.polyhedron, setup, &orbit, tol);
        if m.near_boundary {
            report.excluded += 1;
        } else if m.classes.len() == 1 {
            report.exactly_one += 1;
        } else {
            report.failures.push((i, m.classes.len()));
        }
    }
    Ok(report)
}

/// Boundary points over random elements of the slab window, `scale(s_P(a), a)`.
/// Points are drawn from the chart region `|w| − |z| ≥ μ` of the slab, where
/// the certified prism set is complete.
pub fn sample_boundary<R: Rng>(
    rng: &mut R,
    n: usize,
    poly: &Polyhedron,
    setup: &StarSetup,
    prisms: &[Prism],
) -> Vec<ConePoint> {
    let t = (setup.theta / 2.0).tan();
    let zmax = (1.0 + t * t).sqrt();
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let y = Point3::new(
            rng.gen_range(-zmax..zmax),
            rng.gen_range(-zmax..zmax),
            rng.gen_range(-t..t),
        );
        if (1.0 + y.z * y.z).sqrt() - y.x.hypot(y.y) < poly.mu {
            continue;
        }
        let a = chart_lift(&y);
        let sp = section_sp(&a, prisms, setup.theta);
        out.push(scale(sp, &a).expect("positive section"));
    }
    out
}

#[derive(Debug, Clone)]
pub struct BoundaryReport {
    pub emitted: usize,
    /// Emitted points on `E_e` (`s_P` attained at the chart scale).
    pub on_sheet: usize,
    pub max_distance: f64,
    pub outside: usize,
    /// Points strictly inside some prism whose chart point lies in the
    /// polyhedron farther than the tolerance from its boundary.
    pub converse_violations: usize,
}

impl BoundaryReport {
    pub fn passed(&self) -> bool {
        self.outside == 0 && self.converse_violations == 0
    }
}

/// Cross-validates the carved polyhedron against the prism section: chart
/// points of `E_e` not covered by any open prism lie in `F_e`, covered ones
/// do not.
pub fn boundary_cross_validation<R: Rng>(
    rng: &mut R,
    on_sheet_target: usize,
    poly: &Polyhedron,
    setup: &StarSetup,
    prisms: &[Prism],
    tol: f64,
) -> BoundaryReport {
    let mut report = BoundaryReport {
        emitted: 0,
        on_sheet: 0,
        max_distance: 0.0,
        outside: 0,
        converse_violations: 0,
    };
    let cap = 200 * on_sheet_target.max(1);
    while report.on_sheet < on_sheet_target && report.emitted < cap {
        let b = sample_boundary(rng, 1, poly, setup, prisms)[0];
        report.emitted += 1;
        let y = chart_point(&b).expect("slab points stay on the chart sheet");
        // b sits on the chart scale exactly when r cos α = 1
        let level = b.r * b.alpha.cos();
        if (level - 1.0).abs() <= 1e-12 {
            report.on_sheet += 1;
            if !poly.contains(&y) {
                let d = poly.boundary_distance(&y);
                report.max_distance = report.max_distance.max(d);
                if d > tol {
                    report.outside += 1;
                }
            }
        } else if level > 1.0 + tol && poly.contains(&y) && poly.boundary_distance(&y) > tol {
            report.converse_violations += 1;
        }
    }
    report
}

#[derive(Debug, Clone)]
pub struct LemmaReport {
    pub points: usize,
    /// Largest `|w − x̄z| − f(|x|)` seen.
    pub max_excess: f64,
}

/// Samples `Q_u` (`|z| < r ≤ φ(α)`), maps the points by each representative
/// and checks `|w − x̄z| ≤ f(|x|)`.
pub fn lemma_bound_check<R: Rng>(rng: &mut R, per_prism: usize, orbit: &[OrbitPoint], theta: f64) -> LemmaReport {
    let mut max_excess = f64::NEG_INFINITY;
    let mut points = 0;
    for o in orbit {
        let f = lemma_bound(o.x.norm(), theta);
        for _ in 0..per_prism {
            let alpha = rng.gen_range(-PI..PI);
            let r = phi(alpha, theta) * rng.gen_range(1e-3..=1.0);
            let z = random_disc(rng, r);
            let b = left_mul(&o.rep, &ConePoint { z, alpha, r });
            let value = (b.w() - o.x.0.conj() * b.z).norm();
            max_excess = max_excess.max(value - f);
            points += 1;
        }
    }
    LemmaReport { points, max_excess }
}

/// Compares prism classification under alternative representatives
/// `ĝ·d₁^j·z_c^{kl}` of the same orbit point; returns the mismatch count.
pub fn representative_independence<R: Rng>(
    rng: &mut R,
    n: usize,
    orbit: &[OrbitPoint],
    setup: &StarSetup,
    eps_geom: f64,
) -> usize {
    let mut mismatches = 0;
    for i in 0..n {
        let o = &orbit[i % orbit.len()];
        let a = sample_near_identity(rng, 0.9, PI).as_cone_point();
        let a = scale(rng.gen_range(0.5..2.0), &a).expect("positive scale");
        let j = rng.gen_range(-3..=3);
        let l = rng.gen_range(-2..=2);
        let alt = mul(&mul(&o.rep, &setup.d1_pow(j)), &UElement::central(l * i64::from(setup.k)));
        let p = Prism { x: o.x, g: o.rep };
        let q = Prism { x: o.x, g: alt };
        if p.classify(&a, setup.theta, eps_geom) != q.classify(&a, setup.theta, eps_geom) {
            mismatches += 1;
        }
    }
    mismatches
}

/// Facets whose centroid is not on the boundary of their tagged prism.
pub fn facet_boundary_failures(poly: &Polyhedron, prisms: &[Prism], theta: f64, eps: f64) -> Vec<usize> {
    (0..poly.facets.len())
        .filter(|&f| {
            let a = chart_lift(&poly.facet_centroid(f));
            prisms[poly.facets[f].tag.orbit_index].classify(&a, theta, eps) != Side::Boundary
        })
        .collect()
}

/// Whether exactly the facets tagged `u·d^{±1}` lie on `x₃ = ∓tan(ϑ/2)`.
pub fn slab_facets_ok(poly: &Polyhedron, setup: &StarSetup, tol: f64) -> bool {
    let t = (setup.theta / 2.0).tan();
    poly.facets.iter().enumerate().all(|(f, facet)| {
        let pts = poly.facet_points(f);
        let on = |level: f64| pts.iter().all(|p| (p.z - level).abs() <= tol);
        let tag = facet.tag;
        let slab = tag.orbit_index == 0 && tag.m.abs() == 1;
        match (slab, tag.m) {
            (true, 1) => on(-t),
            (true, _) => on(t),
            (false, _) => !on(-t) && !on(t),
        }
    })
}

/// Orbit points beyond the certified radius whose prism reaches a vertex.
pub fn certificate_violations(poly: &Polyhedron, wider: &[OrbitPoint], radius: f64, theta: f64, eps: f64) -> usize {
    wider
        .iter()
        .filter(|o| o.x.norm() > radius)
        .filter(|o| {
            let p = Prism::from_orbit(o);
            poly.vertices
                .iter()
                .any(|v| p.classify(&chart_lift(v), theta, eps) != Side::Exterior)
        })
        .count()
}

#[derive(Debug, Clone, Copy)]
pub struct CoverSuite {
    /// `max |r_x(2π) − z_c|` over random centres.
    pub central: f64,
    /// Deviation from the closed forms of `d·a` and `a·r₀(−2t)`.
    pub action: f64,
    /// `max |M(gh) − M(g)M(h)|`, relative to the operand sizes.
    pub homomorphism: f64,
}

fn mat_mul(a: [[Complex64; 2]; 2], b: [[Complex64; 2]; 2]) -> [[Complex64; 2]; 2] {
    let mut c = [[Complex64::new(0.0, 0.0); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            c[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    c
}

/// Identities of the cover arithmetic on `n` random inputs each.
pub fn cover_suite<R: Rng>(rng: &mut R, n: usize, theta: f64) -> CoverSuite {
    use crate::cover::{matrix, rotation_lift, DiscPoint};
    let zc = UElement::central(1);
    let mut central: f64 = 0.0;
    let mut action: f64 = 0.0;
    let mut homomorphism: f64 = 0.0;
    let d = UElement::IDENTITY.with_alpha(-theta);
    for _ in 0..n {
        let x = DiscPoint(random_disc(rng, 0.999));
        central = central.max(rotation_lift(&x, 2.0 * PI).distance(&zc));

        let z = random_disc(rng, 2.0);
        let r = z.norm() + rng.gen_range(0.1..2.0);
        let a = ConePoint { z, alpha: rng.gen_range(-6.0..6.0), r };
        let b = act(&d, &UElement::IDENTITY, &a);
        let expect = ConePoint { z: a.z * Complex64::from_polar(1.0, theta), alpha: a.alpha - theta, r: a.r };
        action = action.max(b.distance(&expect));
        let t = rng.gen_range(-4.0..4.0);
        let b = act(&UElement::IDENTITY, &rotation_lift(&DiscPoint::ORIGIN, 2.0 * t), &a);
        let expect = ConePoint { z: a.z * Complex64::from_polar(1.0, t), alpha: a.alpha + t, r: a.r };
        action = action.max(b.distance(&expect));

        let g = sample_near_identity(rng, 3.0, 10.0);
        let h = sample_near_identity(rng, 3.0, 10.0);
        let lhs = matrix(&mul(&g, &h));
        let rhs = mat_mul(matrix(&g), matrix(&h));
        let dev = (0..4).map(|i| (lhs[i / 2][i % 2] - rhs[i / 2][i % 2]).norm()).fold(0.0, f64::max);
        homomorphism = homomorphism.max(dev / (1.0 + g.r() * h.r()));
    }
    CoverSuite { central, action, homomorphism }
}
