use std::sync::OnceLock;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use spaceform::carve::{chart_lift, section_sp, section_su, Prism};
use spaceform::config::RunConfig;
use spaceform::cover::{act, inv, mul, scale, ConePoint, UElement};
use spaceform::groups::enumerate_orbit;
use spaceform::identify::{detect_symmetry, ChartIsometry};
use spaceform::pipeline::{run, Run};
use spaceform::polytope::Point3;
use spaceform::verify::{membership_translate, sample_boundary, sample_near_identity};

fn run_533() -> &'static Run {
    static RUN: OnceLock<Run> = OnceLock::new();
    RUN.get_or_init(|| run(&RunConfig::new([5, 3, 3], 2, 0, 3)).unwrap())
}

fn run_933_u1() -> &'static Run {
    static RUN: OnceLock<Run> = OnceLock::new();
    RUN.get_or_init(|| run(&RunConfig::new([9, 3, 3], 2, 1, 3)).unwrap())
}

fn wide_orbit(r: &Run, radius: f64) -> Vec<spaceform::groups::OrbitPoint> {
    enumerate_orbit(&r.group, r.setup.u_index, radius, &Default::default()).unwrap()
}

#[test]
fn interior_point_is_in_the_identity_class_only() {
    for r in [run_533(), run_933_u1()] {
        let orbit = wide_orbit(r, 0.9);
        let poly = &r.polyhedron;
        // centroid of the first cell is interior
        let c = poly.cells[0].interior_point();
        let m = membership_translate(&chart_lift(&c), poly, &r.setup, &orbit, 1e-9);
        assert_eq!(m.classes.len(), 1);
        assert!(m.classes[0].distance(&UElement::IDENTITY) < 1e-9);
        assert!(!m.near_boundary);
    }
}

#[test]
fn walls_separate_identity_from_tagged_translate() {
    let r = run_533();
    let orbit = wide_orbit(r, 0.9);
    let poly = &r.polyhedron;
    for f in 0..poly.facets.len() {
        let y = poly.facets[f].interior;
        let inner = y - poly.facets[f].plane.n * 1e-7;
        let outer = y + poly.facets[f].plane.n * 1e-7;
        let a = membership_translate(&chart_lift(&inner), poly, &r.setup, &orbit, 1e-9);
        let b = membership_translate(&chart_lift(&outer), poly, &r.setup, &orbit, 1e-9);
        assert_eq!(a.classes.len(), 1, "facet {f}");
        assert_eq!(b.classes.len(), 1, "facet {f}");
        assert!(a.classes[0].distance(&UElement::IDENTITY) < 1e-9, "facet {f}");
        // on the wall itself both translates are within tolerance
        assert!(membership_translate(&chart_lift(&y), poly, &r.setup, &orbit, 1e-9).near_boundary);
        // across the wall the translate is the one tagged on the facet
        let h = poly.facets[f].tag.h;
        assert!(b.classes[0].distance(&h) < 1e-9, "facet {f}");
    }
}

#[test]
fn bottom_slab_pairs_with_top() {
    let r = run_533();
    let poly = &r.polyhedron;
    let bottom = poly.facets.iter().position(|f| f.tag.orbit_index == 0 && f.tag.m == 1).unwrap();
    let top = poly.facets.iter().position(|f| f.tag.orbit_index == 0 && f.tag.m == -1).unwrap();
    assert_eq!(r.pairing.partner(bottom), top);
    assert_eq!(r.pairing.partner(top), bottom);
}

#[test]
fn pairing_elements_reproduce_tags() {
    for r in [run_533(), run_933_u1()] {
        let stab = &r.pairing.stabilizer;
        for p in &r.pairing.pairs {
            let prod = mul(&p.gamma1, &inv(&p.gamma2));
            let h = r.polyhedron.facets[p.source].tag.h;
            // up to the stabilizer, γ₁γ₂⁻¹ is the tagged element
            let ok = (0..stab.order.max(1) as i64).any(|j| {
                let delta = r.setup.d_pow(j * stab.exponent);
                mul(&mul(&delta, &h), &inv(&delta)).distance(&prod) < 1e-9 || h.distance(&prod) < 1e-9
            });
            assert!(ok, "pair {} -> {}", p.source, p.target);
        }
    }
}

#[test]
fn symmetry_contains_identity_and_stabilizer_rotation() {
    let r = run_933_u1();
    let sym = detect_symmetry(&r.polyhedron, 2 * r.setup.p as usize, 1e-6);
    assert!(sym.rotations.contains(&0.0));
    let rot = r.pairing.stabilizer.rotation;
    assert!(sym.rotations.iter().any(|&a| (a - rot).abs() < 1e-9));
    assert!(!sym.axial);
    let y = Point3::new(0.1, 0.2, 0.3);
    let back = ChartIsometry::Flip(0.7).apply(&ChartIsometry::Flip(0.7).apply(&y));
    assert!((back - y).norm() < 1e-15);
}

#[test]
fn sample_boundary_points_are_on_the_prism_boundary() {
    let r = run_533();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    assert!(sample_boundary(&mut rng, 0, &r.polyhedron, &r.setup, &r.domain.prisms).is_empty());
    let pts = sample_boundary(&mut rng, 300, &r.polyhedron, &r.setup, &r.domain.prisms);
    for b in &pts {
        let s = section_sp(b, &r.domain.prisms, r.setup.theta);
        assert!((s - 1.0).abs() < 1e-12);
    }
}

#[test]
fn section_at_identity() {
    let r = run_533();
    let e = UElement::IDENTITY.as_cone_point();
    assert!((section_sp(&e, &r.domain.prisms, r.setup.theta) - 1.0).abs() < 1e-15);
}

#[test]
fn section_is_invariant_under_the_action() {
    let r = run_533();
    let orbit = wide_orbit(r, 0.985);
    let prisms: Vec<Prism> = orbit.iter().map(Prism::from_orbit).collect();
    let theta = r.setup.theta;
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for i in 0..100 {
        let a = sample_near_identity(&mut rng, 0.3, 0.5).as_cone_point();
        let g1 = orbit[1 + i % 10].rep;
        let g2 = r.setup.d2_pow(i as i64 % 3 - 1);
        let b = act(&g1, &g2, &a);
        let (sa, sb) = (section_sp(&a, &prisms, theta), section_sp(&b, &prisms, theta));
        assert!((sa - sb).abs() < 1e-9, "{sa} vs {sb}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn section_scales_inversely(re in -0.5f64..0.5, im in -0.5f64..0.5, alpha in -3.0f64..3.0, lambda in 0.2f64..5.0) {
        let r = run_533();
        let a = UElement::new(num_complex::Complex64::new(re, im), alpha).as_cone_point();
        let theta = r.setup.theta;
        let s = section_sp(&a, &r.domain.prisms, theta);
        let b: ConePoint = scale(lambda, &a).unwrap();
        prop_assert!((section_sp(&b, &r.domain.prisms, theta) - s / lambda).abs() < 1e-12 * s);
        prop_assert!(s >= section_su(&a, theta) - 1e-15);
    }

    #[test]
    fn chart_points_classify_consistently(x in -1.0f64..1.0, y in -1.0f64..1.0, t in -0.2f64..0.2) {
        let r = run_533();
        let p = Point3::new(x, y, t);
        prop_assume!((1.0 + t * t).sqrt() - x.hypot(y) >= r.polyhedron.mu);
        prop_assume!(r.polyhedron.boundary_distance(&p) > 1e-9);
        let s = section_sp(&chart_lift(&p), &r.domain.prisms, r.setup.theta);
        // uncovered chart points form the domain
        prop_assert_eq!(s <= 1.0 + 1e-12, r.polyhedron.contains(&p));
    }
}
