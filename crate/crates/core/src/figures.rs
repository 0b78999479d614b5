//! SVG figures: the star polygon traced by the boundary of `X_u` in the disc
//! and the scalloped region `X_u` in the `(α, r)` half-plane.

use std::f64::consts::PI;
use std::fmt::Write;

use crate::carve::phi;
use crate::error::{Error, Result};
use crate::export::fixed6;
use crate::util::gcd;

/// Schläfli-style descriptor `{n/m}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StarDescriptor {
    pub n: u32,
    pub m: u32,
}

impl std::fmt::Display for StarDescriptor {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{{{}/{}}}", self.n, self.m)
    }
}

/// `{2p/k}` for odd `k`, `{p/k}` for even `k`.
pub fn star_descriptor(p: u32, k: u32) -> Result<StarDescriptor> {
    if k < 1 || p <= k {
        return Err(Error::Invalid(format!("star polygon needs p > k >= 1, got p = {p}, k = {k}")));
    }
    Ok(if k % 2 == 1 {
        StarDescriptor { n: 2 * p, m: k }
    } else {
        StarDescriptor { n: p, m: k }
    })
}

/// Corners of the projected boundary of `X_u`: inner points at radius 1 and
/// angles `jϑ`, outer cusps at radius `1/cos(ϑ/2)` and angles `(2j+1)ϑ/2`,
/// one full period of the closed curve.
pub fn star_vertices(p: u32, k: u32) -> Vec<[f64; 2]> {
    let theta = PI * f64::from(k) / f64::from(p);
    // the curve closes after 2p / gcd(2p, k) steps of ϑ
    let steps = 2 * p / gcd(i64::from(2 * p), i64::from(k)) as u32;
    let outer = 1.0 / (theta / 2.0).cos();
    let mut out = Vec::with_capacity(2 * steps as usize);
    for j in 0..steps {
        let a = f64::from(j) * theta;
        out.push([a.cos(), a.sin()]);
        let b = a + theta / 2.0;
        out.push([outer * b.cos(), outer * b.sin()]);
    }
    out
}

fn svg_header(s: &mut String, w: f64, h: f64, view: [f64; 4]) {
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w:.0}" height="{h:.0}" viewBox="{:.4} {:.4} {:.4} {:.4}">"#,
        view[0], view[1], view[2], view[3]
    );
}

pub fn star_polygon_svg(p: u32, k: u32) -> Result<(StarDescriptor, String)> {
    let desc = star_descriptor(p, k)?;
    let verts = star_vertices(p, k);
    let theta = PI * f64::from(k) / f64::from(p);
    let outer = 1.0 / (theta / 2.0).cos();
    let e = outer * 1.1;
    let mut s = String::new();
    svg_header(&mut s, 480.0, 480.0, [-e, -e, 2.0 * e, 2.0 * e]);
    let _ = writeln!(s, "<title>star polygon {desc}, p = {p}, k = {k}</title>");
    let _ = writeln!(
        s,
        r#"<circle cx="0" cy="0" r="1" fill="none" stroke="grey" stroke-width="0.004" stroke-dasharray="0.02 0.02"/>"#
    );
    let pts: Vec<String> = verts.iter().map(|v| format!("{},{}", fixed6(v[0]), fixed6(-v[1]))).collect();
    let _ = writeln!(
        s,
        r#"<polygon points="{}" fill="none" stroke="black" stroke-width="0.006"/>"#,
        pts.join(" ")
    );
    s.push_str("</svg>\n");
    Ok((desc, s))
}

/// The region `0 < r ≤ φ(α)` over `α ∈ [−Mϑ, Mϑ]`; the axis `r = 0` is drawn
/// dashed since it is not part of `X_u`.
pub fn xu_strip_svg(theta: f64, m_range: u32) -> Result<String> {
    if !(theta > 0.0 && theta < PI) {
        return Err(Error::Invalid(format!("theta must lie in (0, pi), got {theta}")));
    }
    let m = f64::from(m_range.max(1));
    let (a0, a1) = (-m * theta, m * theta);
    let top = 1.0 / (theta / 2.0).cos();
    let samples = 64 * 2 * m_range.max(1) as usize;
    let curve: Vec<[f64; 2]> = (0..=samples)
        .map(|i| {
            let a = a0 + (a1 - a0) * i as f64 / samples as f64;
            [a, phi(a, theta)]
        })
        .collect();
    let pad = 0.1 * (a1 - a0);
    let mut s = String::new();
    svg_header(&mut s, 720.0, 360.0, [a0 - pad, -top * 1.2, a1 - a0 + 2.0 * pad, top * 1.4]);
    let _ = writeln!(s, "<title>X_u in the (alpha, r) half-plane, theta = {theta:.6}</title>");
    let mut path = format!("M {} 0", fixed6(a0));
    for [a, r] in &curve {
        let _ = write!(path, " L {} {}", fixed6(*a), fixed6(-r));
    }
    let _ = write!(path, " L {} 0 Z", fixed6(a1));
    let _ = writeln!(s, r#"<path d="{path}" fill="lightgrey" stroke="none"/>"#);
    let outline: Vec<String> = curve.iter().map(|[a, r]| format!("{},{}", fixed6(*a), fixed6(-r))).collect();
    let _ = writeln!(
        s,
        r#"<polyline points="{}" fill="none" stroke="black" stroke-width="0.006"/>"#,
        outline.join(" ")
    );
    let _ = writeln!(
        s,
        r#"<line x1="{}" y1="0" x2="{}" y2="0" stroke="black" stroke-width="0.006" stroke-dasharray="0.03 0.03"/>"#,
        fixed6(a0 - pad),
        fixed6(a1 + pad)
    );
    s.push_str("</svg>\n");
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn descriptors() {
        assert_eq!(star_descriptor(15, 2).unwrap().to_string(), "{15/2}");
        assert_eq!(star_descriptor(7, 3).unwrap(), StarDescriptor { n: 14, m: 3 });
        assert_eq!(star_descriptor(5, 1).unwrap(), StarDescriptor { n: 10, m: 1 });
        assert!(star_descriptor(2, 2).is_err());
        assert!(star_descriptor(3, 0).is_err());
    }

    #[test]
    fn star_corners_radii() {
        let theta = 2.0 * PI / 15.0;
        let v = star_vertices(15, 2);
        assert_eq!(v.len(), 30);
        for (i, p) in v.iter().enumerate() {
            let r = p[0].hypot(p[1]);
            let expect = if i % 2 == 0 { 1.0 } else { 1.0 / (theta / 2.0).cos() };
            assert!((r - expect).abs() < 1e-12);
        }
        // the closing corner is one step of ϑ past the last inner point
        let last = v[v.len() - 2];
        let ang = last[1].atan2(last[0]) + theta;
        assert!(ang.sin().abs() < 1e-12 && ang.cos() > 0.0);
    }

    #[test]
    fn strip_boundary_extremes() {
        let theta = 2.0 * PI / 15.0;
        for j in -3..3 {
            let cusp = (2 * j + 1) as f64 * theta / 2.0;
            assert!((phi(cusp, theta) - 1.0 / (theta / 2.0).cos()).abs() < 1e-12);
            assert!((phi(j as f64 * theta, theta) - 1.0).abs() < 1e-12);
            let a = 0.123 + j as f64 * 0.07;
            assert!((phi(a, theta) - phi(a + theta, theta)).abs() < 1e-12);
        }
    }

    #[test]
    fn figures_are_pure() {
        assert_eq!(star_polygon_svg(15, 2).unwrap().1, star_polygon_svg(15, 2).unwrap().1);
        let a = xu_strip_svg(0.4, 3).unwrap();
        assert_eq!(a, xu_strip_svg(0.4, 3).unwrap());
        assert!(a.contains("stroke-dasharray"));
        assert!(xu_strip_svg(0.0, 3).is_err());
    }
}
