//! Mesh, JSON and text exports of a run. Coordinates are chart units.

use std::fmt::Write;

use serde_json::{json, Value};

use crate::cover::UElement;
use crate::identify::ChartIsometry;
use crate::pipeline::Run;
use crate::polyhedron::Polyhedron;
use crate::polytope::Point3;

/// Six-decimal fixed notation without a negative zero.
pub fn fixed6(x: f64) -> String {
    let s = format!("{x:.6}");
    if s == "-0.000000" {
        "0.000000".into()
    } else {
        s
    }
}

/// Wavefront OBJ with `#` metadata, `v` lines at six decimals and 1-indexed
/// `f` lines oriented counter-clockwise from outside.
pub fn obj(poly: &Polyhedron, header: &[(String, String)]) -> String {
    let mut s = String::new();
    for (k, v) in header {
        let _ = writeln!(s, "# {k}: {v}");
    }
    for v in &poly.vertices {
        let _ = writeln!(s, "v {} {} {}", fixed6(v.x), fixed6(v.y), fixed6(v.z));
    }
    for f in &poly.facets {
        let idx: Vec<String> = f.verts.iter().map(|i| (i + 1).to_string()).collect();
        let _ = writeln!(s, "f {}", idx.join(" "));
    }
    s
}

/// Vertices and faces of an OBJ document.
pub fn parse_obj(text: &str) -> Result<(Vec<Point3>, Vec<Vec<usize>>), String> {
    let mut verts = Vec::new();
    let mut faces = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let mut parts = line.split_whitespace();
        match parts.next() {
            Some("v") => {
                let c: Vec<f64> = parts
                    .map(|t| t.parse::<f64>().map_err(|e| format!("line {}: {e}", n + 1)))
                    .collect::<Result<_, _>>()?;
                if c.len() != 3 {
                    return Err(format!("line {}: expected three coordinates", n + 1));
                }
                verts.push(Point3::new(c[0], c[1], c[2]));
            }
            Some("f") => {
                let f: Vec<usize> = parts
                    .map(|t| match t.parse::<usize>() {
                        Ok(i) if i >= 1 => Ok(i - 1),
                        _ => Err(format!("line {}: bad index {t}", n + 1)),
                    })
                    .collect::<Result<_, _>>()?;
                faces.push(f);
            }
            _ => {}
        }
    }
    Ok((verts, faces))
}

fn element(g: &UElement) -> Value {
    json!({ "z": [g.z.re, g.z.im], "alpha": g.alpha })
}

fn isometry(g: &ChartIsometry) -> Value {
    match *g {
        ChartIsometry::Rotation(phi) => json!({ "rotation": phi }),
        ChartIsometry::Flip(phi) => json!({ "flip": phi }),
    }
}

pub fn obj_header(run: &Run) -> Vec<(String, String)> {
    let c = &run.config;
    let p = &run.polyhedron;
    vec![
        ("domain".into(), "fundamental domain F_e in the chart (x1, x2, x3) = (Re z, Im z, Im w)".into()),
        ("signature".into(), format!("{} {} {}", c.signature[0], c.signature[1], c.signature[2])),
        ("level".into(), c.k.to_string()),
        ("u_vertex".into(), c.u_vertex.to_string()),
        ("q".into(), c.q.to_string()),
        ("p".into(), run.setup.p.to_string()),
        ("theta".into(), format!("{:.12}", run.setup.theta)),
        ("units".into(), "chart units, scale 1".into()),
        ("vertices".into(), p.vertices.len().to_string()),
        ("facets".into(), p.facets.len().to_string()),
    ]
}

pub fn domain_json(run: &Run) -> Value {
    let poly = &run.polyhedron;
    let pairing = &run.pairing;
    let stab = &pairing.stabilizer;
    let flags: Vec<Value> = pairing
        .flags(poly)
        .iter()
        .map(|pair| {
            Value::Array(
                pair.iter()
                    .map(|[s, t]| json!([[s[0], [s[1], s[2]], s[3]], [t[0], [t[1], t[2]], t[3]]]))
                    .collect(),
            )
        })
        .collect();
    json!({
        "config": run.config,
        "setup": {
            "p": run.setup.p,
            "theta": run.setup.theta,
            "k": run.setup.k,
            "q": run.setup.q,
            "p_u": run.setup.p1,
            "u": [run.setup.u.0.re, run.setup.u.0.im],
            "star_polygon": run.descriptor.to_string(),
        },
        "polyhedron": {
            "vertices": poly.vertices.iter().map(|v| [v.x, v.y, v.z]).collect::<Vec<_>>(),
            "edges": poly.edges,
            "facets": poly.facets.iter().map(|f| f.verts.clone()).collect::<Vec<_>>(),
            "tags": poly.facets.iter().map(|f| json!({
                "orbit_index": f.tag.orbit_index,
                "m": f.tag.m,
                "h": element(&f.tag.h),
                "normal": [f.plane.n.x, f.plane.n.y, f.plane.n.z],
                "offset": f.plane.c,
            })).collect::<Vec<_>>(),
        },
        "pairing": {
            "pairs": pairing.pairs.iter().map(|p| json!({
                "source": p.source,
                "target": p.target,
                "gamma1": element(&p.gamma1),
                "gamma2": element(&p.gamma2),
                "bijection": p.bijection,
                "canonical": p.canonical_back,
            })).collect::<Vec<_>>(),
            "flags": flags,
            "stabilizer": {
                "exponent": stab.exponent,
                "generator": element(&stab.generator),
                "trivial": stab.trivial,
                "rotation": stab.rotation,
                "order": stab.order,
            },
        },
        "checks": {
            "mu": poly.mu,
            "R": run.domain.radius,
            "R_star": run.domain.required_radius,
            "iterations": run.domain.iterations,
            "stability_shift": run.domain.stability,
            "planarity_residual": poly.max_planarity_residual(),
            "volume": poly.volume(),
            "chi": run.quotient.chi,
            "quotient": {
                "vertices": run.quotient.vertices,
                "edges": run.quotient.edges,
                "faces": run.quotient.faces,
            },
            "congruence_defect": run.congruence,
            "symmetry_order": run.symmetry.order,
            "symmetry_generators": run.symmetry.generators.iter().map(isometry).collect::<Vec<_>>(),
            "dihedral": run.symmetry.is_dihedral(),
            "equivariant": run.equivariant,
        },
    })
}

pub fn report(run: &Run) -> String {
    let c = &run.config;
    let s = &run.setup;
    let d = &run.domain;
    let poly = &run.polyhedron;
    let q = &run.quotient;
    let stab = &run.pairing.stabilizer;
    let mut r = String::new();
    let _ = writeln!(
        r,
        "Gamma({},{},{})^{} x (C_{})^2, u = vertex {}",
        c.signature[0], c.signature[1], c.signature[2], c.k, c.q, c.u_vertex
    );
    let _ = writeln!(r, "p = {}, theta = {:.9}, star polygon {}", s.p, s.theta, run.descriptor);
    let _ = writeln!(r);
    let _ = writeln!(r, "domain");
    let _ = writeln!(r, "  orbit radius R      {:.9} after {} iteration(s)", d.radius, d.iterations);
    let _ = writeln!(r, "  required radius R*  {:.9}", d.required_radius);
    let _ = writeln!(r, "  mu                  {:.9}", poly.mu);
    let _ = writeln!(r, "  orbit points        {}", d.orbit.len());
    let _ = writeln!(r, "  V / E / F           {} / {} / {}", poly.vertices.len(), poly.edges.len(), poly.facets.len());
    let _ = writeln!(r, "  volume (chart)      {:.9}", poly.volume());
    let _ = writeln!(r, "  planarity residual  {:.3e}", poly.max_planarity_residual());
    if let Some(shift) = d.stability {
        let _ = writeln!(r, "  stability shift     {shift:.3e}");
    }
    let _ = writeln!(r);
    let _ = writeln!(r, "identification");
    let _ = writeln!(r, "  pairs               {}", poly.facets.len() / 2);
    let _ = writeln!(
        r,
        "  stabilizer          {}",
        if stab.trivial {
            "acts trivially".to_string()
        } else {
            format!("rotation by {:.6} of order {}", stab.rotation, stab.order)
        }
    );
    let _ = writeln!(r, "  quotient V / E / F  {} / {} / {}", q.vertices, q.edges, q.faces);
    let _ = writeln!(r, "  euler characteristic {}", q.chi);
    let _ = writeln!(r, "  congruence defect   {:.3e}", run.congruence);
    let _ = writeln!(
        r,
        "  symmetry            order {}{}",
        run.symmetry.order,
        if run.symmetry.is_dihedral() { ", dihedral" } else { "" }
    );
    let _ = writeln!(r, "  equivariant pairing {}", run.equivariant);
    r
}
