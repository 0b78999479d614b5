//! Face pairings of the carved domain, the quotient complex, the setwise
//! stabilizer and symmetry detection.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;

use crate::carve::{chart_lift, chart_point};
use crate::cover::{act, inv, mul, UElement};
use crate::error::{Error, Result};
use crate::groups::{OrbitPoint, StarSetup};
use crate::polyhedron::Polyhedron;
use crate::polytope::Point3;
use crate::util::{ext_gcd, lcm};

#[derive(Debug, Clone)]
pub struct Pair {
    pub source: usize,
    pub target: usize,
    /// `(γ₁, γ₂)` maps the target facet onto the source facet; its inverse
    /// carries the source onto the target.
    pub gamma1: UElement,
    pub gamma2: UElement,
    /// `bijection[i]` is the target vertex matched with the i-th source vertex.
    pub bijection: Vec<usize>,
    /// Whether the target's own canonical pair leads back to the source.
    pub canonical_back: bool,
}

#[derive(Debug, Clone)]
pub struct FacePairing {
    /// One entry per facet, indexed by source facet.
    pub pairs: Vec<Pair>,
    pub stabilizer: Stabilizer,
}

impl FacePairing {
    pub fn partner(&self, f: usize) -> usize {
        self.pairs[f].target
    }

    pub fn is_involution(&self) -> bool {
        self.pairs.iter().all(|p| self.pairs[p.target].target == p.source)
    }

    pub fn fixed_facets(&self) -> Vec<usize> {
        self.pairs.iter().filter(|p| p.source == p.target).map(|p| p.source).collect()
    }

    /// Flags `(facet, edge, vertex)` of the source matched with those of the
    /// target, per pair; edges are `(v_i, v_{i+1})` of the source cycle.
    pub fn flags(&self, poly: &Polyhedron) -> Vec<Vec<[[usize; 4]; 2]>> {
        self.pairs
            .iter()
            .map(|p| {
                let src = &poly.facets[p.source].verts;
                (0..src.len())
                    .map(|i| {
                        let (a, b) = (src[i], src[(i + 1) % src.len()]);
                        let (ta, tb) = (p.bijection[i], p.bijection[(i + 1) % src.len()]);
                        [[p.source, a, b, a], [p.target, ta, tb, ta]]
                    })
                    .collect()
            })
            .collect()
    }
}

/// Minimal-`|a|` solution of `a·e₁ + b·e₂ = m` for coprime `e₁, e₂`.
pub fn split_exponent(m: i64, e1: i64, e2: i64) -> (i64, i64) {
    let (g, s, t) = ext_gcd(e1, e2);
    debug_assert_eq!(g.abs(), 1);
    let (s, t) = (s * g, t * g);
    let (a0, b0) = (s * m, t * m);
    // a = a0 + k e2, b = b0 − k e1
    let k = (-(a0 as f64) / e2 as f64).round() as i64;
    let mut best = (a0 + k * e2, b0 - k * e1);
    for kk in [k - 1, k + 1] {
        let cand = (a0 + kk * e2, b0 - kk * e1);
        if cand.0.abs() < best.0.abs() {
            best = cand;
        }
    }
    best
}

/// The pair `(γ₁, γ₂) = (ĝ d₁^a, d₂^{−b})` with `γ₁γ₂⁻¹ = ĝ d^m`.
pub fn canonical_pair(g: &UElement, m: i64, setup: &StarSetup) -> (UElement, UElement) {
    let (e1, e2) = setup.exponents();
    let (a, b) = split_exponent(m, e1, e2);
    (mul(g, &setup.d1_pow(a)), setup.d2_pow(-b))
}

/// Applies `(γ₁, γ₂)⁻¹` to a chart point and projects back to the chart.
pub fn transport(gamma1: &UElement, gamma2: &UElement, y: &Point3) -> Option<Point3> {
    let a = act(&inv(gamma1), &inv(gamma2), &chart_lift(y));
    chart_point(&a)
}

fn on_polygon_boundary(poly: &Polyhedron, f: usize, p: &Point3, tol: f64) -> bool {
    let v = &poly.facets[f].verts;
    (0..v.len()).any(|i| segment_distance(p, &poly.vertices[v[i]], &poly.vertices[v[(i + 1) % v.len()]]) <= tol)
}

fn segment_distance(y: &Point3, a: &Point3, b: &Point3) -> f64 {
    let e = b - a;
    let len2 = e.norm_squared();
    let t = if len2 == 0.0 { 0.0 } else { ((y - a).dot(&e) / len2).clamp(0.0, 1.0) };
    (a + e * t - y).norm()
}

fn on_cycle(points: &[Point3], p: &Point3, tol: f64) -> bool {
    (0..points.len()).any(|i| segment_distance(p, &points[i], &points[(i + 1) % points.len()]) <= tol)
}

/// The facet whose polygon coincides with `image` as a region: same plane,
/// and each outline runs through the other's corners.
fn match_region(poly: &Polyhedron, image: &[Point3], tol: f64) -> Vec<usize> {
    (0..poly.facets.len())
        .filter(|&g| {
            let facet = &poly.facets[g];
            image.iter().all(|p| facet.plane.eval(p).abs() <= tol)
                && image.iter().all(|p| on_polygon_boundary(poly, g, p, tol))
                && facet.verts.iter().all(|&v| on_cycle(image, &poly.vertices[v], tol))
        })
        .collect()
}

fn facet_image(poly: &Polyhedron, f: usize, g1: &UElement, g2: &UElement) -> Option<Vec<Point3>> {
    poly.facets[f]
        .verts
        .iter()
        .map(|&v| transport(g1, g2, &poly.vertices[v]))
        .collect()
}

/// Candidate maps of facet `f`: the canonical pair twisted by powers of the
/// stabilizer generator, with the facet each one lands on.
fn candidate_maps(poly: &Polyhedron, f: usize, orbit: &[OrbitPoint], setup: &StarSetup, stab: &Stabilizer, tol: f64) -> Result<Vec<(usize, UElement, UElement)>> {
    let tag = poly.facets[f].tag;
    let g = orbit
        .get(tag.orbit_index)
        .ok_or_else(|| Error::Pairing(format!("facet {f} refers to orbit point {} outside the orbit", tag.orbit_index)))?
        .rep;
    let (g1, g2) = canonical_pair(&g, tag.m, setup);
    let mut out = Vec::new();
    for j in 0..stab.order.max(1) as i64 {
        let delta = setup.d_pow(j * stab.exponent);
        let (c1, c2) = (mul(&g1, &delta), mul(&g2, &delta));
        let image = facet_image(poly, f, &c1, &c2)
            .ok_or_else(|| Error::Pairing(format!("facet {f} leaves the chart sheet")))?;
        match match_region(poly, &image, tol).as_slice() {
            [t] => out.push((*t, c1, c2)),
            [] => return Err(Error::Pairing(format!("facet {f}: no facet matches the transported facet"))),
            _ => return Err(Error::Pairing(format!("facet {f}: transported facet matches several facets"))),
        }
    }
    Ok(out)
}

/// Inserts `p` into every facet edge passing through it; returns whether a
/// vertex was added.
fn insert_on_edges(poly: &mut Polyhedron, p: &Point3, tol: f64) -> bool {
    if poly.vertices.iter().any(|v| (v - p).norm() <= tol) {
        return false;
    }
    let id = poly.vertices.len();
    let mut added = false;
    for f in 0..poly.facets.len() {
        let n = poly.facets[f].verts.len();
        for i in 0..n {
            let (a, b) = (poly.facets[f].verts[i], poly.facets[f].verts[(i + 1) % n]);
            if segment_distance(p, &poly.vertices[a], &poly.vertices[b]) <= tol {
                poly.facets[f].verts.insert(i + 1, id);
                added = true;
                break;
            }
        }
    }
    if added {
        poly.vertices.push(*p);
    }
    added
}

fn rebuild_edges(poly: &mut Polyhedron) {
    let mut edges: Vec<[usize; 2]> = poly
        .facets
        .iter()
        .flat_map(|f| {
            let n = f.verts.len();
            (0..n).map(move |i| {
                let (a, b) = (f.verts[i], f.verts[(i + 1) % n]);
                [a.min(b), a.max(b)]
            })
        })
        .collect();
    edges.sort_unstable();
    edges.dedup();
    poly.edges = edges;
}

/// Pairs every facet with the facet a pair of group elements transports it
/// onto. When the setwise stabilizer is nontrivial the canonical pair is
/// twisted by a stabilizer power so that the pairing is an involution.
/// Tiles may meet non-face-to-face; transported corners are then inserted
/// as extra vertices until the vertex structures of paired facets agree.
pub fn pair_faces(poly: &mut Polyhedron, setup: &StarSetup, orbit: &[OrbitPoint], tol: f64) -> Result<FacePairing> {
    let stab = setwise_stabilizer(setup);
    let n = poly.facets.len();
    let cands: Vec<Vec<(usize, UElement, UElement)>> =
        (0..n).map(|f| candidate_maps(poly, f, orbit, setup, &stab, tol)).collect::<Result<_>>()?;
    let mut chosen: Vec<Option<(usize, UElement, UElement, bool)>> = vec![None; n];
    for f in 0..n {
        if chosen[f].is_some() {
            continue;
        }
        let pick = cands[f]
            .iter()
            .enumerate()
            .find(|(_, (t, _, _))| *t != f && chosen[*t].is_none())
            .ok_or_else(|| Error::Pairing(format!("facet {f} has no free partner")))?;
        let (j, &(t, g1, g2)) = pick;
        let back = cands[t].first().map(|c| c.0) == Some(f);
        chosen[f] = Some((t, g1, g2, j == 0 && back));
        chosen[t] = Some((f, inv(&g1), inv(&g2), j == 0 && back));
    }
    let chosen: Vec<(usize, UElement, UElement, bool)> = chosen.into_iter().map(Option::unwrap).collect();

    // conform vertex structures of paired facets
    for _round in 0..64 {
        let mut changed = false;
        for f in 0..n {
            let (_, g1, g2, _) = chosen[f];
            let image = facet_image(poly, f, &g1, &g2)
                .ok_or_else(|| Error::Pairing(format!("facet {f} leaves the chart sheet")))?;
            for p in image {
                changed |= insert_on_edges(poly, &p, tol);
            }
        }
        if !stab.trivial {
            let rot = ChartIsometry::Rotation(stab.rotation);
            for v in 0..poly.vertices.len() {
                let p = rot.apply(&poly.vertices[v]);
                changed |= insert_on_edges(poly, &p, tol);
            }
        }
        if !changed {
            break;
        }
    }
    rebuild_edges(poly);

    let mut pairs = Vec::with_capacity(n);
    for f in 0..n {
        let (t, g1, g2, back) = chosen[f];
        let image = facet_image(poly, f, &g1, &g2).unwrap();
        let tverts = &poly.facets[t].verts;
        let bijection: Vec<usize> = image
            .iter()
            .map(|p| {
                tverts
                    .iter()
                    .copied()
                    .find(|&v| (poly.vertices[v] - p).norm() <= tol)
                    .ok_or_else(|| Error::Pairing(format!("facet {f}: transported corner is not a vertex of facet {t}")))
            })
            .collect::<Result<_>>()?;
        if tverts.len() != bijection.len() {
            return Err(Error::Pairing(format!("facets {f} and {t} have different corner counts")));
        }
        pairs.push(Pair { source: f, target: t, gamma1: g1, gamma2: g2, bijection, canonical_back: back });
    }
    Ok(FacePairing { pairs, stabilizer: stab })
}

/// Checks that the pairing maps vertex adjacency onto vertex adjacency and
/// reverses facet orientation.
pub fn check_flags(pairing: &FacePairing, poly: &Polyhedron) -> Result<()> {
    for p in &pairing.pairs {
        let src = &poly.facets[p.source].verts;
        let tgt = &poly.facets[p.target].verts;
        let n = src.len();
        let pos = |v: usize| tgt.iter().position(|&w| w == v).unwrap();
        let step = (pos(p.bijection[1 % n]) + n - pos(p.bijection[0])) % n;
        for i in 0..n {
            let a = pos(p.bijection[i]);
            let b = pos(p.bijection[(i + 1) % n]);
            if (b + n - a) % n != step || (step != 1 && step != n - 1) {
                return Err(Error::Pairing(format!(
                    "pair {} -> {} does not preserve incidence",
                    p.source, p.target
                )));
            }
        }
        if step != n - 1 {
            return Err(Error::Pairing(format!("pair {} -> {} preserves orientation", p.source, p.target)));
        }
    }
    Ok(())
}

/// Sorted pairwise intervals `|Δz|² − Δx₃²` of the metric induced on the
/// chart. Pair maps are affine isometries of this form; they need not
/// preserve Euclidean chart distances.
pub fn interval_profile(points: &[Point3]) -> Vec<f64> {
    let mut d = Vec::new();
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            let v = points[i] - points[j];
            d.push(v.x * v.x + v.y * v.y - v.z * v.z);
        }
    }
    d.sort_by(|a, b| a.partial_cmp(b).unwrap());
    d
}

/// Largest difference of interval profiles over all pairs.
pub fn congruence_defect(pairing: &FacePairing, poly: &Polyhedron) -> f64 {
    pairing
        .pairs
        .iter()
        .map(|p| {
            let a = interval_profile(&poly.facet_points(p.source));
            let b = interval_profile(&poly.facet_points(p.target));
            if a.len() != b.len() {
                return f64::INFINITY;
            }
            a.iter().zip(&b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
        })
        .fold(0.0, f64::max)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuotientCounts {
    pub vertices: usize,
    pub edges: usize,
    pub faces: usize,
    pub chi: i64,
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }
    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut c = x;
        while self.0[c] != r {
            let n = self.0[c];
            self.0[c] = r;
            c = n;
        }
        r
    }
    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }
    fn classes(&mut self) -> usize {
        (0..self.0.len()).filter(|&i| self.find(i) == i).count()
    }
}

/// Cell counts of the identification space; `χ = V − E + F − 1`.
///
/// With a nontrivial setwise stabilizer the carved domain is a union of
/// stabilizer translates of a fundamental domain, so cells are further
/// identified under the stabilizer rotation of the chart.
pub fn quotient_complex(pairing: &FacePairing, poly: &Polyhedron, tol: f64) -> Result<QuotientCounts> {
    if !pairing.is_involution() {
        return Err(Error::Quotient("pairing is not an involution".into()));
    }
    let fixed = pairing.fixed_facets();
    if !fixed.is_empty() {
        return Err(Error::Quotient(format!("facets paired with themselves: {fixed:?}")));
    }
    let edge_id = |a: usize, b: usize| -> Option<usize> {
        let key = [a.min(b), a.max(b)];
        poly.edges.binary_search(&key).ok()
    };
    let mut vuf = UnionFind::new(poly.vertices.len());
    let mut euf = UnionFind::new(poly.edges.len());
    let mut fuf = UnionFind::new(poly.facets.len());
    for p in &pairing.pairs {
        let src = &poly.facets[p.source].verts;
        let n = src.len();
        fuf.union(p.source, p.target);
        for i in 0..n {
            vuf.union(src[i], p.bijection[i]);
            let a = edge_id(src[i], src[(i + 1) % n]).expect("facet edge in edge list");
            let b = edge_id(p.bijection[i], p.bijection[(i + 1) % n])
                .ok_or_else(|| Error::Quotient(format!("pair {} -> {} maps an edge off the edge list", p.source, p.target)))?;
            euf.union(a, b);
        }
    }
    if !pairing.stabilizer.trivial {
        let rot = ChartIsometry::Rotation(pairing.stabilizer.rotation);
        let image: Vec<usize> = poly
            .vertices
            .iter()
            .map(|v| {
                let w = rot.apply(v);
                poly.vertices
                    .iter()
                    .position(|u| (u - w).norm() <= tol)
                    .ok_or_else(|| Error::Quotient("vertex set is not invariant under the stabilizer".into()))
            })
            .collect::<Result<_>>()?;
        for (v, &w) in image.iter().enumerate() {
            vuf.union(v, w);
        }
        for (e, &[a, b]) in poly.edges.iter().enumerate() {
            let r = edge_id(image[a], image[b])
                .ok_or_else(|| Error::Quotient("edge set is not invariant under the stabilizer".into()))?;
            euf.union(e, r);
        }
        for f in 0..poly.facets.len() {
            let g = symmetric_facet(poly, &rot, f, tol)
                .ok_or_else(|| Error::Quotient("facets are not invariant under the stabilizer".into()))?;
            fuf.union(f, g);
        }
    }
    let v = vuf.classes();
    let e = euf.classes();
    let f = fuf.classes();
    Ok(QuotientCounts {
        vertices: v,
        edges: e,
        faces: f,
        chi: v as i64 - e as i64 + f as i64 - 1,
    })
}

#[derive(Debug, Clone)]
pub struct Stabilizer {
    /// `J = lcm(p/p₁, p/q)`; `δ = d^J` generates `(Γ₁)_u ∩ Γ₂`.
    pub exponent: i64,
    pub generator: UElement,
    /// Whether `δ` is central, so that `(δ, δ)` acts trivially.
    pub trivial: bool,
    /// Chart rotation angle induced by conjugation with `δ`.
    pub rotation: f64,
    /// Order of the induced rotation group on the chart.
    pub order: usize,
}

pub fn setwise_stabilizer(setup: &StarSetup) -> Stabilizer {
    let (e1, e2) = setup.exponents();
    let j = lcm(e1, e2);
    let delta = setup.d_pow(j);
    // δ = r_u(2t) with t = Jϑ conjugates the chart by z ↦ z e^{2it}
    let rotation = (2.0 * j as f64 * setup.theta).rem_euclid(TAU);
    let turns = rotation / TAU;
    let trivial = turns.min(1.0 - turns) < 1e-9;
    let order = if trivial {
        1
    } else {
        (1..=4 * setup.p as usize)
            .find(|&n| {
                let x = n as f64 * turns;
                (x - x.round()).abs() < 1e-9
            })
            .unwrap_or(0)
    };
    Stabilizer {
        exponent: j,
        generator: delta,
        trivial,
        rotation,
        order,
    }
}

/// Conjugation of the chart by `δ`: `a ↦ δ a δ⁻¹`.
pub fn conjugate_point(delta: &UElement, y: &Point3) -> Option<Point3> {
    chart_point(&act(delta, delta, &chart_lift(y)))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ChartIsometry {
    /// `z ↦ z e^{iφ}`.
    Rotation(f64),
    /// `(z, x₃) ↦ (z̄ e^{iφ}, −x₃)`.
    Flip(f64),
}

impl ChartIsometry {
    pub fn apply(&self, y: &Point3) -> Point3 {
        let z = Complex64::new(y.x, y.y);
        match *self {
            ChartIsometry::Rotation(phi) => {
                let w = z * Complex64::from_polar(1.0, phi);
                Point3::new(w.re, w.im, y.z)
            }
            ChartIsometry::Flip(phi) => {
                let w = z.conj() * Complex64::from_polar(1.0, phi);
                Point3::new(w.re, w.im, -y.z)
            }
        }
    }
}

#[derive(Debug, Clone)]
pub struct SymmetryReport {
    pub rotations: Vec<f64>,
    pub flips: Vec<f64>,
    pub order: usize,
    pub generators: Vec<ChartIsometry>,
    pub axial: bool,
}

impl SymmetryReport {
    pub fn is_dihedral(&self) -> bool {
        !self.flips.is_empty() && !self.rotations.is_empty()
    }

    pub fn elements(&self) -> Vec<ChartIsometry> {
        self.rotations
            .iter()
            .map(|&r| ChartIsometry::Rotation(r))
            .chain(self.flips.iter().map(|&f| ChartIsometry::Flip(f)))
            .collect()
    }
}

fn preserves(poly: &Polyhedron, iso: &ChartIsometry, tol: f64) -> bool {
    poly.vertices.iter().all(|v| {
        let w = iso.apply(v);
        poly.vertices.iter().any(|u| (u - w).norm() <= tol)
    })
}

/// Maps facet `f` under an isometry to a facet of the polyhedron.
pub fn symmetric_facet(poly: &Polyhedron, iso: &ChartIsometry, f: usize, tol: f64) -> Option<usize> {
    let image: Vec<Point3> = poly.facets[f].verts.iter().map(|&v| iso.apply(&poly.vertices[v])).collect();
    poly.facets.iter().position(|g| {
        g.verts.len() == image.len()
            && image
                .iter()
                .all(|p| g.verts.iter().any(|&v| (poly.vertices[v] - p).norm() <= tol))
    })
}

/// Searches rotations about the `x₃`-axis by `2πj/N`, `N ≤ n_max`, and flips
/// `(z, x₃) ↦ (z̄ e^{iφ}, −x₃)` with `φ` read off vertex correspondences.
pub fn detect_symmetry(poly: &Polyhedron, n_max: usize, tol: f64) -> SymmetryReport {
    let mut rotations: Vec<f64> = vec![0.0];
    for n in 2..=n_max {
        for j in 1..n {
            let angle = TAU * j as f64 / n as f64;
            if rotations.iter().any(|&r| ((r - angle + PI).rem_euclid(TAU) - PI).abs() < 1e-9) {
                continue;
            }
            if preserves(poly, &ChartIsometry::Rotation(angle), tol) {
                rotations.push(angle);
            }
        }
    }
    rotations.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut flips: Vec<f64> = Vec::new();
    if let Some(v0) = poly
        .vertices
        .iter()
        .max_by(|a, b| (a.x.hypot(a.y), a.z).partial_cmp(&(b.x.hypot(b.y), b.z)).unwrap())
    {
        let z0 = Complex64::new(v0.x, v0.y);
        for w in &poly.vertices {
            if (w.z + v0.z).abs() > tol {
                continue;
            }
            let zw = Complex64::new(w.x, w.y);
            if (zw.norm() - z0.norm()).abs() > tol {
                continue;
            }
            let phi = (zw.arg() + z0.arg()).rem_euclid(TAU);
            if flips.iter().any(|&f| ((f - phi + PI).rem_euclid(TAU) - PI).abs() < 1e-7) {
                continue;
            }
            if preserves(poly, &ChartIsometry::Flip(phi), tol) {
                flips.push(phi);
            }
        }
    }
    flips.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut generators = Vec::new();
    if rotations.len() > 1 {
        generators.push(ChartIsometry::Rotation(rotations[1]));
    }
    if let Some(&f) = flips.first() {
        generators.push(ChartIsometry::Flip(f));
    }
    let axial = (1..=7).all(|j| preserves(poly, &ChartIsometry::Rotation(0.1 * j as f64 + 0.013), tol));
    SymmetryReport {
        order: rotations.len() + flips.len(),
        rotations,
        flips,
        generators,
        axial,
    }
}

/// Whether a symmetry commutes with the pairing on facet indices. The
/// twist of each pair is only defined up to the setwise stabilizer, so
/// partners are compared modulo the stabilizer rotation.
pub fn pairing_equivariant(poly: &Polyhedron, pairing: &FacePairing, iso: &ChartIsometry, tol: f64) -> bool {
    let stab = &pairing.stabilizer;
    let twists: Vec<ChartIsometry> = (0..stab.order.max(1))
        .map(|j| ChartIsometry::Rotation(j as f64 * stab.rotation))
        .collect();
    (0..poly.facets.len()).all(|f| {
        let sf = symmetric_facet(poly, iso, f, tol);
        let spf = symmetric_facet(poly, iso, pairing.partner(f), tol);
        match (sf, spf) {
            (Some(a), Some(b)) => {
                let pa = pairing.partner(a);
                twists.iter().any(|t| symmetric_facet(poly, t, b, tol) == Some(pa))
            }
            _ => false,
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{build_triangle_group, star_setup};

    #[test]
    fn exponent_split() {
        for (m, e1, e2) in [(1, 3, 5), (-4, 3, 5), (7, 1, 3), (2, 1, 1), (0, 3, 5)] {
            let (a, b) = split_exponent(m, e1, e2);
            assert_eq!(a * e1 + b * e2, m);
            for k in -3..=3 {
                assert!((a + k * e2).abs() >= a.abs());
            }
        }
    }

    #[test]
    fn canonical_pair_product() {
        let tg = build_triangle_group(5, 3, 3).unwrap().with_level(2).unwrap();
        let setup = star_setup(&tg, 0, 3).unwrap();
        let g = tg.generators[1];
        for m in -6..=6 {
            let (g1, g2) = canonical_pair(&g, m, &setup);
            let h = mul(&g1, &inv(&g2));
            assert!(h.distance(&mul(&g, &setup.d_pow(m))) < 1e-10);
        }
    }

    #[test]
    fn stabilizer_examples() {
        let tg = build_triangle_group(5, 3, 3).unwrap().with_level(2).unwrap();
        let s = setwise_stabilizer(&star_setup(&tg, 0, 3).unwrap());
        assert_eq!(s.exponent, 15);
        assert!(s.trivial);
        assert_eq!(s.generator.central_power(1e-9), Some(2));
        let tg = build_triangle_group(9, 3, 3).unwrap().with_level(2).unwrap().recentered(1);
        let s = setwise_stabilizer(&star_setup(&tg, 1, 3).unwrap());
        assert!(!s.trivial);
        assert_eq!(s.order, 3);
        assert!((s.rotation - 4.0 * PI / 3.0).abs() < 1e-12);
    }

    #[test]
    fn conjugation_is_chart_rotation() {
        let tg = build_triangle_group(9, 3, 3).unwrap().with_level(2).unwrap();
        let setup = star_setup(&tg, 0, 3).unwrap();
        let s = setwise_stabilizer(&setup);
        let y = Point3::new(0.3, -0.2, 0.1);
        let img = conjugate_point(&s.generator, &y).unwrap();
        let expect = ChartIsometry::Rotation(s.rotation).apply(&y);
        assert!((img - expect).norm() < 1e-12);
    }
}
