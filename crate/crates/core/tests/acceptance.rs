//! Acceptance suite: one line per criterion with its measured value, pinned
//! tolerance and runtime. Exits nonzero if any criterion fails.

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use spaceform::carve::{build_fundamental_domain, phi, BuildConfig, Domain};
use spaceform::cover::{act, matrix, mul, rotation_lift, ConePoint, DiscPoint, UElement};
use spaceform::figures::star_descriptor;
use spaceform::groups::{build_triangle_group, enumerate_orbit, star_setup, StarSetup, TriangleGroupData};
use spaceform::identify::{
    check_flags, congruence_defect, detect_symmetry, pair_faces, pairing_equivariant, quotient_complex,
};
use spaceform::verify::{boundary_cross_validation, tiling_test};

type M2 = [[Complex64; 2]; 2];

fn mat_mul(a: M2, b: M2) -> M2 {
    let mut c = [[Complex64::new(0.0, 0.0); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                c[i][j] += a[i][k] * b[k][j];
            }
        }
    }
    c
}

fn disc(rng: &mut ChaCha8Rng, radius: f64) -> Complex64 {
    Complex64::from_polar(radius * rng.gen::<f64>().sqrt(), rng.gen_range(-PI..PI))
}

struct Outcome {
    passed: bool,
    detail: String,
}

struct Suite {
    failures: usize,
}

impl Suite {
    fn report(&mut self, id: u32, name: &str, limit: Duration, f: impl FnOnce() -> Outcome) {
        let t = Instant::now();
        let o = f();
        let dt = t.elapsed();
        let in_time = dt <= limit;
        let passed = o.passed && in_time;
        if !passed {
            self.failures += 1;
        }
        println!(
            "[{}] {id}. {name}: {} ({:.2} s, limit {} s)",
            if passed { "PASS" } else { "FAIL" },
            o.detail,
            dt.as_secs_f64(),
            limit.as_secs()
        );
    }
}

struct Example {
    label: &'static str,
    group: TriangleGroupData,
    setup: StarSetup,
    domain: Option<Domain>,
    build_time: Duration,
    error: Option<String>,
}

const EXAMPLES: [([u32; 3], usize, &str); 4] = [
    ([5, 3, 3], 0, "(5,3,3)"),
    ([7, 3, 3], 0, "(7,3,3)"),
    ([9, 3, 3], 0, "(9,3,3) u0"),
    ([9, 3, 3], 1, "(9,3,3) u1"),
];

fn examples() -> Vec<Example> {
    EXAMPLES
        .iter()
        .map(|&(sig, u, label)| {
            let group = build_triangle_group(sig[0], sig[1], sig[2])
                .unwrap()
                .with_level(2)
                .unwrap()
                .recentered(u);
            let setup = star_setup(&group, u, 3).unwrap();
            Example { label, group, setup, domain: None, build_time: Duration::ZERO, error: None }
        })
        .collect()
}

fn main() {
    let mut suite = Suite { failures: 0 };
    let mut rng = ChaCha8Rng::seed_from_u64(20_240_601);

    suite.report(1, "central element r_x(2pi) = (0, -pi)", Duration::from_secs(1), || {
        let zc = UElement::new(Complex64::new(0.0, 0.0), -PI);
        let dev = (0..100)
            .map(|_| rotation_lift(&DiscPoint(disc(&mut rng, 0.999)), 2.0 * PI).distance(&zc))
            .fold(0.0, f64::max);
        Outcome { passed: dev <= 1e-12, detail: format!("100 points, max deviation {dev:.2e} <= 1e-12") }
    });

    suite.report(2, "action formulas", Duration::from_secs(1), || {
        let theta = 2.0 * PI / 15.0;
        let d = UElement::new(Complex64::new(0.0, 0.0), -theta);
        let mut dev: f64 = 0.0;
        for _ in 0..100 {
            let z = disc(&mut rng, 2.0);
            let a = ConePoint { z, alpha: rng.gen_range(-6.0..6.0), r: z.norm() + rng.gen_range(0.1..2.0) };
            // d·(z, α, r) = (z e^{iϑ}, α − ϑ, r)
            let b = act(&d, &UElement::IDENTITY, &a);
            dev = dev.max((b.z - a.z * Complex64::from_polar(1.0, theta)).norm());
            dev = dev.max((b.alpha - (a.alpha - theta)).abs()).max((b.r - a.r).abs());
            // (z, α, r)·r₀(−2t) = (z e^{it}, α + t, r)
            let t = rng.gen_range(-4.0..4.0);
            let r0 = rotation_lift(&DiscPoint(Complex64::new(0.0, 0.0)), 2.0 * t);
            let b = act(&UElement::IDENTITY, &r0, &a);
            dev = dev.max((b.z - a.z * Complex64::from_polar(1.0, t)).norm());
            dev = dev.max((b.alpha - (a.alpha + t)).abs()).max((b.r - a.r).abs());
        }
        Outcome { passed: dev <= 1e-12, detail: format!("200 evaluations, max deviation {dev:.2e} <= 1e-12") }
    });

    suite.report(3, "covering homomorphism vs matrix product", Duration::from_secs(1), || {
        let mut dev: f64 = 0.0;
        for _ in 0..1000 {
            let g = UElement::new(disc(&mut rng, 3.0), rng.gen_range(-10.0..10.0));
            let h = UElement::new(disc(&mut rng, 3.0), rng.gen_range(-10.0..10.0));
            let lhs = matrix(&mul(&g, &h));
            let rhs = mat_mul(matrix(&g), matrix(&h));
            let scale = 1.0 + g.r() * h.r();
            for i in 0..2 {
                for j in 0..2 {
                    dev = dev.max((lhs[i][j] - rhs[i][j]).norm() / scale);
                }
            }
        }
        Outcome {
            passed: dev <= 1e-12,
            detail: format!("1000 pairs, max relative deviation {dev:.2e} <= 1e-12"),
        }
    });

    suite.report(4, "star polygon anchor (k=2, p_u=5, q=3)", Duration::from_secs(1), || {
        let tg = build_triangle_group(5, 3, 3).unwrap().with_level(2).unwrap();
        let s = star_setup(&tg, 0, 3).unwrap();
        let desc = star_descriptor(s.p, s.k).unwrap();
        let ok = s.p == 15 && (s.theta - 2.0 * PI / 15.0).abs() < 1e-15 && (desc.n, desc.m) == (15, 2);
        Outcome { passed: ok, detail: format!("p = {}, theta = 2pi/{:.6}, descriptor {desc}", s.p, 2.0 * PI / s.theta) }
    });

    let mut ex = examples();

    suite.report(5, "prism bound |w - conj(x) z| <= f(|x|) + 1e-9", Duration::from_secs(5), || {
        let mut worst = f64::NEG_INFINITY;
        let mut parts = Vec::new();
        for e in &ex {
            let theta = e.setup.theta;
            let orbit = enumerate_orbit(&e.group, e.setup.u_index, 0.9, &Default::default()).unwrap();
            let mut local = f64::NEG_INFINITY;
            let per = 1000usize.div_ceil(orbit.len()).max(1);
            let mut count = 0;
            for o in &orbit {
                let x = o.x.0;
                let f = (1.0 - x.norm_sqr()).sqrt() / (theta / 2.0).cos();
                for _ in 0..per {
                    // a point of Q_u: |z| < r <= φ(α), downstairs (z, w = r e^{iα})
                    let alpha = rng.gen_range(-PI..PI);
                    let r = phi(alpha, theta) * rng.gen_range(1e-3..=1.0);
                    let z = disc(&mut rng, r);
                    let w = Complex64::from_polar(r, alpha);
                    let a = [[w.conj(), z], [z.conj(), w]];
                    let b = mat_mul(matrix(&o.rep), a);
                    let (z2, w2) = (b[0][1], b[1][1]);
                    local = local.max((w2 - x.conj() * z2).norm() - f);
                    count += 1;
                }
            }
            worst = worst.max(local);
            parts.push(format!("{} {} pts", e.label, count));
        }
        Outcome {
            passed: worst <= 1e-9,
            detail: format!("{}; max excess {worst:.2e}", parts.join(", ")),
        }
    });

    suite.report(6, "end-to-end domains", Duration::from_secs(60 * 4), || {
        for e in ex.iter_mut() {
            let t = Instant::now();
            match build_fundamental_domain(&e.group, &e.setup, &BuildConfig::default()) {
                Ok(d) => e.domain = Some(d),
                Err(err) => e.error = Some(err.to_string()),
            }
            e.build_time = t.elapsed();
        }
        let mut ok = true;
        let mut parts = Vec::new();
        for e in &ex {
            match &e.domain {
                Some(d) => {
                    let p = &d.polyhedron;
                    let res = p.max_planarity_residual();
                    let good = d.radius >= d.required_radius
                        && p.compact
                        && res <= 1e-7
                        && e.build_time <= Duration::from_secs(60);
                    ok &= good;
                    parts.push(format!(
                        "{} F={} R={:.4}>=R*={:.4} res={res:.1e} {:.1}s",
                        e.label,
                        p.facets.len(),
                        d.radius,
                        d.required_radius,
                        e.build_time.as_secs_f64()
                    ));
                }
                None => {
                    ok = false;
                    parts.push(format!("{} error: {}", e.label, e.error.as_deref().unwrap_or("?")));
                }
            }
        }
        Outcome { passed: ok, detail: parts.join("; ") }
    });

    suite.report(7, "tiling by translates", Duration::from_secs(60), || {
        let mut ok = true;
        let mut parts = Vec::new();
        for e in &ex {
            let Some(d) = &e.domain else {
                ok = false;
                continue;
            };
            let t = tiling_test(
                &mut rng,
                10_000,
                d,
                |r| enumerate_orbit(&e.group, e.setup.u_index, r, &Default::default()),
                &e.setup,
                1e-6,
            )
            .unwrap();
            ok &= t.passed(0.01);
            parts.push(format!(
                "{} {}/{} one class, {} excluded",
                e.label, t.exactly_one, t.samples, t.excluded
            ));
        }
        Outcome { passed: ok, detail: parts.join("; ") }
    });

    suite.report(8, "identification scheme", Duration::from_secs(10 * 4), || {
        let mut ok = true;
        let mut parts = Vec::new();
        for e in &ex {
            let Some(d) = &e.domain else {
                ok = false;
                continue;
            };
            let t = Instant::now();
            let mut poly = d.polyhedron.clone();
            let outcome = pair_faces(&mut poly, &e.setup, &d.orbit, 1e-6).and_then(|pairing| {
                check_flags(&pairing, &poly)?;
                let q = quotient_complex(&pairing, &poly, 1e-6)?;
                Ok((pairing, q))
            });
            match outcome {
                Ok((pairing, q)) => {
                    let sym = detect_symmetry(&poly, 2 * e.setup.p as usize, 1e-6);
                    let equi = sym.elements().iter().all(|g| pairing_equivariant(&poly, &pairing, g, 1e-6));
                    let cong = congruence_defect(&pairing, &poly);
                    let good = pairing.is_involution()
                        && pairing.fixed_facets().is_empty()
                        && pairing.pairs.len() == poly.facets.len()
                        && cong <= 1e-6
                        && q.chi == 0
                        && sym.order > 1
                        && equi
                        && t.elapsed() <= Duration::from_secs(10);
                    ok &= good;
                    parts.push(format!(
                        "{} chi={} sym={}{} equivariant={} congruence={cong:.1e}",
                        e.label,
                        q.chi,
                        sym.order,
                        if sym.is_dihedral() { " dihedral" } else { "" },
                        equi
                    ));
                }
                Err(err) => {
                    ok = false;
                    parts.push(format!("{} error: {err}", e.label));
                }
            }
        }
        Outcome { passed: ok, detail: parts.join("; ") }
    });

    suite.report(9, "boundary cross-validation", Duration::from_secs(10), || {
        let mut ok = true;
        let mut parts = Vec::new();
        for e in &ex {
            let Some(d) = &e.domain else {
                ok = false;
                continue;
            };
            let b = boundary_cross_validation(&mut rng, 1000, &d.polyhedron, &e.setup, &d.prisms, 1e-6);
            ok &= b.passed() && b.on_sheet == 1000;
            parts.push(format!(
                "{} {}/{} within 1e-6 (max {:.1e})",
                e.label,
                b.on_sheet - b.outside,
                b.on_sheet,
                b.max_distance
            ));
        }
        Outcome { passed: ok, detail: parts.join("; ") }
    });

    if suite.failures > 0 {
        println!("acceptance: {} criterion(s) failed", suite.failures);
        std::process::exit(1);
    }
    println!("acceptance: all 9 criteria passed");
}
