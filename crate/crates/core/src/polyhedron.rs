//! Boundary extraction: turns the kept convex cells into a polyhedron with
//! merged planar facets, outward orientation and constraint tags.

use std::collections::{BTreeMap, HashMap};

use crate::carve::{chart_lift, mu_lower_bound, on_sheet, Carved, PlaneKind};
use crate::cover::UElement;
use crate::error::{Error, Result};
use crate::groups::StarSetup;
use crate::polytope::{polygon_area_vector, polygon_centroid, split_polygon, Cell, Plane, Point3};
use crate::util::ToleranceIndex;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FacetTag {
    /// Index into the constraint list of the build.
    pub constraint: usize,
    pub orbit_index: usize,
    pub m: i64,
    pub h: UElement,
}

#[derive(Debug, Clone)]
pub struct Facet {
    /// Counter-clockwise seen from outside.
    pub verts: Vec<usize>,
    /// Outward unit normal and offset.
    pub plane: Plane,
    pub tag: FacetTag,
    /// A point in the relative interior.
    pub interior: Point3,
}

#[derive(Debug, Clone)]
pub struct Polyhedron {
    pub vertices: Vec<Point3>,
    pub edges: Vec<[usize; 2]>,
    pub facets: Vec<Facet>,
    /// Convex decomposition used for inclusion tests.
    pub cells: Vec<Cell>,
    pub cell_planes: Vec<Plane>,
    pub compact: bool,
    /// Sound lower bound of `|w| − |z|` over the polyhedron.
    pub mu: f64,
    /// `min (|w| − |z|)` over the vertices.
    pub mu_vertices: f64,
    pub components: usize,
}

fn in_convex_polygon(y: &Point3, verts: &[Point3], normal: &Point3) -> bool {
    (0..verts.len()).all(|i| {
        let a = verts[i];
        let b = verts[(i + 1) % verts.len()];
        let e = b - a;
        let len = e.norm().max(1e-300);
        e.cross(&(y - a)).dot(normal) / len >= -1e-12
    })
}

fn to_2d(points: &[Point3], plane: &Plane) -> Vec<[f64; 2]> {
    let (e1, e2) = plane.basis();
    points.iter().map(|p| [p.dot(&e1), p.dot(&e2)]).collect()
}

fn winding_2d(y: [f64; 2], poly: &[[f64; 2]]) -> bool {
    let mut inside = false;
    let n = poly.len();
    for i in 0..n {
        let (a, b) = (poly[i], poly[(i + 1) % n]);
        if (a[1] > y[1]) != (b[1] > y[1]) {
            let t = (y[1] - a[1]) / (b[1] - a[1]);
            if y[0] < a[0] + t * (b[0] - a[0]) {
                inside = !inside;
            }
        }
    }
    inside
}

fn segment_distance(y: &Point3, a: &Point3, b: &Point3) -> (f64, f64) {
    let e = b - a;
    let len2 = e.norm_squared();
    if len2 == 0.0 {
        return ((y - a).norm(), 0.0);
    }
    let t = ((y - a).dot(&e) / len2).clamp(0.0, 1.0);
    ((a + e * t - y).norm(), t)
}

/// Distance from `y` to a planar polygon region.
pub fn polygon_distance(y: &Point3, verts: &[Point3], plane: &Plane) -> f64 {
    let d = plane.eval(y);
    let proj = y - plane.n * d;
    let poly = to_2d(verts, plane);
    let p2 = to_2d(&[proj], plane)[0];
    if winding_2d(p2, &poly) {
        return d.abs();
    }
    (0..verts.len())
        .map(|i| segment_distance(y, &verts[i], &verts[(i + 1) % verts.len()]).0)
        .fold(f64::INFINITY, f64::min)
}

fn dedupe_cycle(ids: Vec<usize>) -> Vec<usize> {
    let mut out: Vec<usize> = Vec::with_capacity(ids.len());
    for id in ids {
        if out.last() != Some(&id) {
            out.push(id);
        }
    }
    while out.len() > 1 && out.first() == out.last() {
        out.pop();
    }
    out
}

/// Inserts vertices from `candidates` that lie inside an edge of the cycle.
fn split_edges(cycle: &[usize], candidates: &[usize], verts: &[Point3], tol: f64) -> Vec<usize> {
    let mut out = Vec::with_capacity(cycle.len());
    for i in 0..cycle.len() {
        let (a, b) = (cycle[i], cycle[(i + 1) % cycle.len()]);
        out.push(a);
        let (pa, pb) = (verts[a], verts[b]);
        let lo = pa.inf(&pb) - Point3::repeat(tol);
        let hi = pa.sup(&pb) + Point3::repeat(tol);
        let mut inner: Vec<(f64, usize)> = candidates
            .iter()
            .filter(|&&c| c != a && c != b)
            .filter_map(|&c| {
                let p = verts[c];
                if (0..3).any(|k| p[k] < lo[k] || p[k] > hi[k]) {
                    return None;
                }
                let (d, t) = segment_distance(&p, &pa, &pb);
                (d <= tol && t > 0.0 && t < 1.0).then_some((t, c))
            })
            .collect();
        inner.sort_by(|x, y| x.0.partial_cmp(&y.0).unwrap());
        out.extend(inner.into_iter().map(|(_, c)| c));
    }
    dedupe_cycle(out)
}

struct Group {
    plane: usize,
    sign: f64,
    pieces: Vec<Vec<usize>>,
    centroids: Vec<Point3>,
}

/// Traces the boundary loops left after cancelling opposite half-edges.
fn trace_loops(group: &Group, verts: &[Point3], outward: &Plane) -> Result<Vec<Vec<usize>>> {
    let mut count: BTreeMap<(usize, usize), i64> = BTreeMap::new();
    for piece in &group.pieces {
        for i in 0..piece.len() {
            let (a, b) = (piece[i], piece[(i + 1) % piece.len()]);
            if a < b {
                *count.entry((a, b)).or_default() += 1;
            } else {
                *count.entry((b, a)).or_default() -= 1;
            }
        }
    }
    let mut out_edges: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    let mut remaining = 0usize;
    for (&(a, b), &c) in &count {
        match c {
            0 => {}
            1 => out_edges.entry(a).or_default().push(b),
            -1 => out_edges.entry(b).or_default().push(a),
            _ => {
                return Err(Error::Assembly(format!(
                    "overlapping facet pieces on plane {} (edge multiplicity {c})",
                    group.plane
                )))
            }
        }
        if c != 0 {
            remaining += 1;
        }
    }
    let (e1, e2) = outward.basis();
    let angle = |from: usize, to: usize| {
        let d = verts[to] - verts[from];
        d.dot(&e2).atan2(d.dot(&e1))
    };
    let mut loops = Vec::new();
    let mut used = 0usize;
    while let Some((&start, _)) = out_edges.iter().find(|(_, v)| !v.is_empty()) {
        let mut cycle = vec![start];
        let mut prev = start;
        let mut cur = {
            let v = out_edges.get_mut(&start).unwrap();
            v.remove(0)
        };
        used += 1;
        while cur != start {
            cycle.push(cur);
            let outs = out_edges
                .get_mut(&cur)
                .filter(|v| !v.is_empty())
                .ok_or_else(|| Error::Assembly("open boundary loop".into()))?;
            let pick = if outs.len() == 1 {
                0
            } else {
                // leftmost turn keeps the traversal on the same region
                let back = angle(cur, prev);
                let mut best = 0;
                let mut best_turn = f64::NEG_INFINITY;
                for (i, &w) in outs.iter().enumerate() {
                    let turn = (angle(cur, w) - back).rem_euclid(std::f64::consts::TAU);
                    if turn > best_turn {
                        best_turn = turn;
                        best = i;
                    }
                }
                best
            };
            prev = cur;
            cur = outs.remove(pick);
            used += 1;
            if used > remaining + 1 {
                return Err(Error::Assembly("boundary loop does not close".into()));
            }
        }
        loops.push(cycle);
    }
    Ok(loops)
}

/// Extracts the boundary of the union of kept cells.
pub fn assemble(carved: &Carved, _setup: &StarSetup, eps_geom: f64) -> Result<Polyhedron> {
    let reg = &carved.registry;
    let cells = &carved.cells;
    if cells.is_empty() {
        return Err(Error::EmptyRegion);
    }
    for cell in cells {
        if cell.faces.iter().any(|f| reg.kinds[f.plane] == PlaneKind::Guard) {
            return Err(Error::NonCompact);
        }
    }

    let mut by_plane: BTreeMap<usize, Vec<(usize, usize)>> = BTreeMap::new();
    for (ci, cell) in cells.iter().enumerate() {
        for (fi, f) in cell.faces.iter().enumerate() {
            by_plane.entry(f.plane).or_default().push((ci, fi));
        }
    }

    let mut vindex = ToleranceIndex::<3>::new(eps_geom);
    let mut verts: Vec<Point3> = Vec::new();
    let mut vid = |p: &Point3, verts: &mut Vec<Point3>| {
        let (id, fresh) = vindex.insert([p.x, p.y, p.z]);
        if fresh {
            verts.push(*p);
        }
        id
    };
    let mut groups: Vec<Group> = Vec::new();

    for (&pid, faces) in &by_plane {
        let plane = reg.planes[pid];
        let mut splitters: Vec<usize> = faces
            .iter()
            .flat_map(|&(ci, _)| cells[ci].faces.iter().map(|f| f.plane))
            .filter(|&q| q != pid)
            .collect();
        splitters.sort_unstable();
        splitters.dedup();
        let mut pos = Group { plane: pid, sign: 1.0, pieces: Vec::new(), centroids: Vec::new() };
        let mut neg = Group { plane: pid, sign: -1.0, pieces: Vec::new(), centroids: Vec::new() };
        for &(ci, fi) in faces {
            let face = &cells[ci].faces[fi];
            let mut pieces = vec![face.verts.clone()];
            for &q in &splitters {
                let qp = reg.planes[q];
                let mut next = Vec::with_capacity(pieces.len());
                for piece in pieces {
                    let (lo, hi) = split_polygon(&piece, &qp);
                    next.extend(lo);
                    next.extend(hi);
                }
                pieces = next;
            }
            let normal = plane.n * face.sign;
            for piece in pieces {
                let y = polygon_centroid(&piece);
                let covered = faces.iter().any(|&(cj, fj)| {
                    let g = &cells[cj].faces[fj];
                    g.sign != face.sign && in_convex_polygon(&y, &g.verts, &(plane.n * g.sign))
                });
                if covered {
                    continue;
                }
                let ids = dedupe_cycle(piece.iter().map(|p| vid(p, &mut verts)).collect());
                if ids.len() < 2 {
                    continue;
                }
                let target = if face.sign > 0.0 { &mut pos } else { &mut neg };
                debug_assert!(polygon_area_vector(&piece).dot(&normal) > 0.0);
                target.pieces.push(ids);
                target.centroids.push(y);
            }
        }
        for g in [pos, neg] {
            if !g.pieces.is_empty() {
                groups.push(g);
            }
        }
    }

    // conform pieces within each plane, then trace loops
    let mut raw: Vec<(Vec<usize>, usize, f64, Point3)> = Vec::new();
    for g in &mut groups {
        let mut ids: Vec<usize> = g.pieces.iter().flatten().copied().collect();
        ids.sort_unstable();
        ids.dedup();
        for piece in &mut g.pieces {
            *piece = split_edges(piece, &ids, &verts, eps_geom);
        }
        let outward = if g.sign > 0.0 { reg.planes[g.plane] } else { reg.planes[g.plane].flipped() };
        let loops = trace_loops(g, &verts, &outward)?;
        for cycle in loops {
            if cycle.len() < 3 {
                continue;
            }
            let pts: Vec<Point3> = cycle.iter().map(|&i| verts[i]).collect();
            let area = polygon_area_vector(&pts).dot(&outward.n);
            if area < 0.0 {
                return Err(Error::Assembly(format!("facet with a hole on plane {}", g.plane)));
            }
            if area < 1e-16 {
                continue;
            }
            let poly2 = to_2d(&pts, &outward);
            let interior = g
                .centroids
                .iter()
                .find(|c| winding_2d(to_2d(&[**c], &outward)[0], &poly2))
                .copied()
                .ok_or_else(|| Error::Assembly("facet without interior sample".into()))?;
            raw.push((cycle, g.plane, g.sign, interior));
        }
    }

    // global T-junction repair
    let mut used: Vec<usize> = raw.iter().flat_map(|r| r.0.iter().copied()).collect();
    used.sort_unstable();
    used.dedup();
    for r in &mut raw {
        r.0 = split_edges(&r.0, &used, &verts, eps_geom);
    }

    // drop vertices that are straight in every facet containing them
    loop {
        let mut straight: HashMap<usize, bool> = HashMap::new();
        for r in &raw {
            let n = r.0.len();
            for i in 0..n {
                let (a, v, b) = (r.0[(i + n - 1) % n], r.0[i], r.0[(i + 1) % n]);
                let u1 = verts[v] - verts[a];
                let u2 = verts[b] - verts[v];
                let s = u1.cross(&u2).norm() <= 1e-9 * u1.norm() * u2.norm() && u1.dot(&u2) > 0.0;
                let e = straight.entry(v).or_insert(true);
                *e &= s;
            }
        }
        let drop: Vec<usize> = straight.iter().filter(|(_, &s)| s).map(|(&v, _)| v).collect();
        if drop.is_empty() {
            break;
        }
        for r in &mut raw {
            r.0.retain(|v| !drop.contains(v));
        }
    }

    // manifold check and reindexing
    let mut edge_count: HashMap<(usize, usize), i64> = HashMap::new();
    for r in &raw {
        let n = r.0.len();
        for i in 0..n {
            let (a, b) = (r.0[i], r.0[(i + 1) % n]);
            let key = if a < b { (a, b) } else { (b, a) };
            *edge_count.entry(key).or_default() += if a < b { 1 } else { 1 << 20 };
        }
    }
    if let Some((e, c)) = edge_count.iter().find(|(_, &c)| c != 1 + (1 << 20)) {
        return Err(Error::Assembly(format!(
            "edge {:?} is not shared by exactly two oppositely oriented facets ({} forward, {} backward)",
            e,
            c & ((1 << 20) - 1),
            c >> 20
        )));
    }
    let mut remap: BTreeMap<usize, usize> = BTreeMap::new();
    for r in &raw {
        for &v in &r.0 {
            let next = remap.len();
            remap.entry(v).or_insert(next);
        }
    }
    let mut vertices = vec![Point3::zeros(); remap.len()];
    for (&old, &new) in &remap {
        vertices[new] = verts[old];
    }

    let mut facets = Vec::new();
    for (cycle, pid, sign, interior) in raw {
        let outward = if sign > 0.0 { reg.planes[pid] } else { reg.planes[pid].flipped() };
        let lift = chart_lift(&interior);
        let tag = reg.constraints[pid]
            .iter()
            .find(|&&ci| on_sheet(&carved.constraints[ci].h, &lift))
            .map(|&ci| {
                let c = &carved.constraints[ci];
                FacetTag { constraint: ci, orbit_index: c.orbit_index, m: c.m, h: c.h }
            })
            .ok_or_else(|| Error::Assembly(format!("boundary facet on plane {pid} has no supporting constraint")))?;
        let verts_new: Vec<usize> = cycle.iter().map(|v| remap[v]).collect();
        for &v in &verts_new {
            let res = outward.eval(&vertices[v]).abs();
            if res > eps_geom {
                return Err(Error::Planarity(res));
            }
        }
        facets.push(Facet { verts: verts_new, plane: outward, tag, interior });
    }

    let mut edges: Vec<[usize; 2]> = edge_count
        .keys()
        .map(|&(a, b)| {
            let (x, y) = (remap[&a], remap[&b]);
            [x.min(y), x.max(y)]
        })
        .collect();
    edges.sort_unstable();

    // Euler characteristic per connected component
    let mut parent: Vec<usize> = (0..vertices.len()).collect();
    fn find(p: &mut Vec<usize>, x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        let mut c = x;
        while p[c] != r {
            let n = p[c];
            p[c] = r;
            c = n;
        }
        r
    }
    for e in &edges {
        let (a, b) = (find(&mut parent, e[0]), find(&mut parent, e[1]));
        parent[a] = b;
    }
    let mut comp: BTreeMap<usize, [i64; 3]> = BTreeMap::new();
    for v in 0..vertices.len() {
        let r = find(&mut parent, v);
        comp.entry(r).or_default()[0] += 1;
    }
    for e in &edges {
        let r = find(&mut parent, e[0]);
        comp.get_mut(&r).unwrap()[1] += 1;
    }
    for f in &facets {
        let r = find(&mut parent, f.verts[0]);
        comp.get_mut(&r).unwrap()[2] += 1;
    }
    for [v, e, f] in comp.values() {
        if v - e + f != 2 {
            return Err(Error::Assembly(format!("boundary component with V - E + F = {}", v - e + f)));
        }
    }

    let mu_vertices = vertices
        .iter()
        .map(|v| (1.0 + v.z * v.z).sqrt() - v.x.hypot(v.y))
        .fold(f64::INFINITY, f64::min);
    let poly = Polyhedron {
        vertices,
        edges,
        facets,
        cells: cells.clone(),
        cell_planes: reg.planes.clone(),
        compact: true,
        mu: mu_lower_bound(cells),
        mu_vertices,
        components: comp.len(),
    };
    if poly.volume() <= 0.0 {
        return Err(Error::Assembly("non-positive enclosed volume".into()));
    }
    Ok(poly)
}

impl Polyhedron {
    pub fn facet_points(&self, f: usize) -> Vec<Point3> {
        self.facets[f].verts.iter().map(|&v| self.vertices[v]).collect()
    }

    /// Signed volume from the oriented facets (positive for outward normals).
    pub fn volume(&self) -> f64 {
        let mut vol = 0.0;
        for f in 0..self.facets.len() {
            let pts = self.facet_points(f);
            let o = pts[0];
            for i in 1..pts.len() - 1 {
                vol += o.dot(&pts[i].cross(&pts[i + 1]));
            }
        }
        vol / 6.0
    }

    pub fn cell_volume(&self) -> f64 {
        self.cells.iter().map(Cell::volume).sum()
    }

    pub fn facet_centroid(&self, f: usize) -> Point3 {
        polygon_centroid(&self.facet_points(f))
    }

    pub fn max_planarity_residual(&self) -> f64 {
        self.facets
            .iter()
            .flat_map(|f| f.verts.iter().map(move |&v| f.plane.eval(&self.vertices[v]).abs()))
            .fold(0.0, f64::max)
    }

    pub fn contains(&self, y: &Point3) -> bool {
        self.cells.iter().any(|c| c.contains(&self.cell_planes, y, 1e-12))
    }

    pub fn boundary_distance(&self, y: &Point3) -> f64 {
        (0..self.facets.len())
            .map(|f| polygon_distance(y, &self.facet_points(f), &self.facets[f].plane))
            .fold(f64::INFINITY, f64::min)
    }

    /// Nearest facet and its distance.
    pub fn nearest_facet(&self, y: &Point3) -> (usize, f64) {
        (0..self.facets.len())
            .map(|f| (f, polygon_distance(y, &self.facet_points(f), &self.facets[f].plane)))
            .fold((0, f64::INFINITY), |acc, x| if x.1 < acc.1 { x } else { acc })
    }

    pub fn bounds(&self) -> (Point3, Point3) {
        let mut lo = Point3::repeat(f64::INFINITY);
        let mut hi = Point3::repeat(f64::NEG_INFINITY);
        for v in &self.vertices {
            lo = lo.inf(v);
            hi = hi.sup(v);
        }
        (lo, hi)
    }

    /// Vertices adjacent to `v` along edges.
    pub fn neighbours(&self, v: usize) -> Vec<usize> {
        self.edges
            .iter()
            .filter_map(|e| {
                if e[0] == v {
                    Some(e[1])
                } else if e[1] == v {
                    Some(e[0])
                } else {
                    None
                }
            })
            .collect()
    }
}
