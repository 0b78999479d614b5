//! The `build`, `verify` and `figures` pipelines.

use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::carve::{build_fundamental_domain, grow_radius, Domain};
use crate::config::RunConfig;
use crate::error::{Error, Result};
use crate::export;
use crate::figures::{star_polygon_svg, xu_strip_svg, StarDescriptor};
use crate::groups::{build_triangle_group, enumerate_orbit, star_setup, StarSetup, TriangleGroupData};
use crate::identify::{
    check_flags, congruence_defect, detect_symmetry, pair_faces, pairing_equivariant, quotient_complex, FacePairing,
    QuotientCounts, SymmetryReport,
};
use crate::polyhedron::Polyhedron;
use crate::verify;

#[derive(Debug, Clone)]
pub struct Run {
    pub config: RunConfig,
    pub group: TriangleGroupData,
    pub setup: StarSetup,
    pub domain: Domain,
    /// The certified polyhedron with the corners the pairing inserted.
    pub polyhedron: Polyhedron,
    pub pairing: FacePairing,
    pub quotient: QuotientCounts,
    pub symmetry: SymmetryReport,
    pub equivariant: bool,
    pub congruence: f64,
    pub descriptor: StarDescriptor,
}

/// Group with `u` moved to the origin, and the star setup at `u`.
pub fn prepare(cfg: &RunConfig) -> Result<(TriangleGroupData, StarSetup)> {
    cfg.validate()?;
    let [a, b, c] = cfg.signature;
    let group = build_triangle_group(a, b, c)
        .and_then(|g| g.with_level(cfg.k))
        .map(|g| g.recentered(cfg.u_vertex))
        .map_err(|e| e.at("group"))?;
    let setup = star_setup(&group, cfg.u_vertex, cfg.q).map_err(|e| e.at("star setup"))?;
    Ok((group, setup))
}

pub fn run(cfg: &RunConfig) -> Result<Run> {
    let (group, setup) = prepare(cfg)?;
    let eps_match = cfg.tolerances.eps_match;
    let domain = build_fundamental_domain(&group, &setup, &cfg.build_config()).map_err(|e| e.at("domain"))?;
    let mut polyhedron = domain.polyhedron.clone();
    let pairing = pair_faces(&mut polyhedron, &setup, &domain.orbit, eps_match).map_err(|e| e.at("pairing"))?;
    check_flags(&pairing, &polyhedron).map_err(|e| e.at("pairing"))?;
    let quotient = quotient_complex(&pairing, &polyhedron, eps_match).map_err(|e| e.at("quotient"))?;
    if quotient.chi != 0 {
        return Err(Error::Quotient(format!("euler characteristic {} of the glued complex is not 0", quotient.chi)).at("quotient"));
    }
    let symmetry = detect_symmetry(&polyhedron, 2 * setup.p as usize, eps_match);
    let equivariant = symmetry
        .elements()
        .iter()
        .all(|g| pairing_equivariant(&polyhedron, &pairing, g, eps_match));
    let congruence = congruence_defect(&pairing, &polyhedron);
    let descriptor = star_polygon_svg(setup.p, setup.k).map_err(|e| e.at("figures"))?.0;
    Ok(Run {
        config: cfg.clone(),
        group,
        setup,
        domain,
        polyhedron,
        pairing,
        quotient,
        symmetry,
        equivariant,
        congruence,
        descriptor,
    })
}

fn write(dir: &Path, name: &str, text: &str) -> Result<PathBuf> {
    let path = dir.join(name);
    std::fs::write(&path, text)?;
    Ok(path)
}

/// `star_polygon.svg` and `xu_strip.svg`, functions of `(p, k, ϑ)` only.
pub fn figure_texts(p: u32, k: u32) -> Result<[(&'static str, String); 2]> {
    let theta = PI * f64::from(k) / f64::from(p);
    let (_, star) = star_polygon_svg(p, k)?;
    let strip = xu_strip_svg(theta, 3)?;
    Ok([("star_polygon.svg", star), ("xu_strip.svg", strip)])
}

pub fn write_figures(cfg: &RunConfig, dir: &Path) -> Result<Vec<PathBuf>> {
    cfg.validate()?;
    let texts = figure_texts(cfg.p(), cfg.k).map_err(|e| e.at("figures"))?;
    std::fs::create_dir_all(dir)?;
    texts.iter().map(|(name, text)| write(dir, name, text)).collect()
}

/// Writes every artifact of a completed run; nothing is written for a
/// failed run since all contents are rendered first.
pub fn write_artifacts(run: &Run, dir: &Path) -> Result<Vec<PathBuf>> {
    let obj = export::obj(&run.polyhedron, &export::obj_header(run));
    let json = serde_json::to_string_pretty(&export::domain_json(run))? + "\n";
    let report = export::report(run);
    let figures = figure_texts(run.setup.p, run.setup.k)?;
    std::fs::create_dir_all(dir)?;
    let mut out = vec![
        write(dir, "domain.obj", &obj)?,
        write(dir, "domain.json", &json)?,
    ];
    for (name, text) in &figures {
        out.push(write(dir, name, text)?);
    }
    out.push(write(dir, "report.txt", &report)?);
    Ok(out)
}

#[derive(Debug, Clone)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(name: &'static str, passed: bool, detail: String) -> Self {
        Check { name, passed, detail }
    }
}

impl std::fmt::Display for Check {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} {:<28} {}", if self.passed { "PASS" } else { "FAIL" }, self.name, self.detail)
    }
}

/// Runs the pipeline and every invariant and sampling check.
pub fn verify(cfg: &RunConfig) -> Result<(Run, Vec<Check>)> {
    let run = run(cfg)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let setup = &run.setup;
    let domain = &run.domain;
    let poly = &run.polyhedron;
    let eps = cfg.tolerances.eps_geom;
    let s = &cfg.sampling;
    let mut checks = Vec::new();

    let cs = verify::cover_suite(&mut rng, 1000, setup.theta);
    checks.push(Check::new("cover: central element", cs.central <= 1e-12, format!("max deviation {:.2e}", cs.central)));
    checks.push(Check::new("cover: action formulas", cs.action <= 1e-12, format!("max deviation {:.2e}", cs.action)));
    checks.push(Check::new(
        "cover: homomorphism",
        cs.homomorphism <= 1e-12,
        format!("max deviation {:.2e}", cs.homomorphism),
    ));

    let mismatches = verify::representative_independence(&mut rng, 100, &domain.orbit, setup, eps);
    checks.push(Check::new("prisms: representatives", mismatches == 0, format!("{mismatches} mismatches of 100")));
    let lemma = verify::lemma_bound_check(&mut rng, s.lemma, &domain.orbit, setup.theta);
    checks.push(Check::new(
        "prisms: bound",
        lemma.max_excess <= 1e-9,
        format!("{} points, max excess {:.2e}", lemma.points, lemma.max_excess),
    ));

    checks.push(Check::new("domain: compact", poly.compact, format!("{} facets", poly.facets.len())));
    checks.push(Check::new(
        "domain: certificate",
        domain.radius >= domain.required_radius,
        format!("R = {:.6} >= R* = {:.6}", domain.radius, domain.required_radius),
    ));
    let residual = poly.max_planarity_residual();
    checks.push(Check::new("domain: facet residuals", residual <= eps, format!("max {residual:.2e}")));
    let shift = domain.stability.unwrap_or(0.0);
    checks.push(Check::new("domain: stability", shift <= eps, format!("max vertex shift {shift:.2e}")));
    checks.push(Check::new(
        "domain: slab facets",
        verify::slab_facets_ok(poly, setup, eps),
        "tags m = +-1 at x3 = -+tan(theta/2)".into(),
    ));
    let off = verify::facet_boundary_failures(poly, &domain.prisms, setup.theta, eps);
    checks.push(Check::new("domain: facet prisms", off.is_empty(), format!("{} facets off their prism", off.len())));
    let group = &run.group;
    let build = cfg.build_config();
    let wider = enumerate_orbit(group, setup.u_index, grow_radius(domain.radius, 1.3), &build.orbit)?;
    let viol = verify::certificate_violations(poly, &wider, domain.radius, setup.theta, eps);
    checks.push(Check::new(
        "domain: certificate soundness",
        viol == 0,
        format!("{viol} outer prisms reach a vertex ({} checked)", wider.len()),
    ));

    checks.push(Check::new(
        "pairing: involution",
        run.pairing.is_involution() && run.pairing.fixed_facets().is_empty(),
        format!("{} pairs", run.pairing.pairs.len() / 2),
    ));
    checks.push(Check::new(
        "pairing: congruence",
        run.congruence <= cfg.tolerances.eps_match,
        format!("max interval defect {:.2e}", run.congruence),
    ));
    checks.push(Check::new("pairing: euler characteristic", run.quotient.chi == 0, format!("chi = {}", run.quotient.chi)));
    checks.push(Check::new(
        "pairing: symmetry",
        run.symmetry.order > 1 && run.equivariant,
        format!(
            "order {}{}, equivariant {}",
            run.symmetry.order,
            if run.symmetry.is_dihedral() { " dihedral" } else { "" },
            run.equivariant
        ),
    ));

    let tiling = verify::tiling_test(
        &mut rng,
        s.tiling,
        domain,
        |r| enumerate_orbit(group, setup.u_index, r, &build.orbit),
        setup,
        s.boundary_tol,
    )?;
    checks.push(Check::new(
        "tiling",
        tiling.passed(0.01),
        format!(
            "{} of {} in exactly one translate, {} excluded, {} failures",
            tiling.exactly_one,
            tiling.samples,
            tiling.excluded,
            tiling.failures.len()
        ),
    ));
    let bnd = verify::boundary_cross_validation(&mut rng, s.boundary, poly, setup, &domain.prisms, s.boundary_tol);
    checks.push(Check::new(
        "boundary cross-validation",
        bnd.passed() && bnd.on_sheet == s.boundary,
        format!(
            "{} on-sheet points, {} outside, max distance {:.2e}, {} covered inside",
            bnd.on_sheet, bnd.outside, bnd.max_distance, bnd.converse_violations
        ),
    ));
    Ok((run, checks))
}
