//! Lifted triangle groups of finite level, the cyclic right factor and orbit
//! enumeration.
//!
//! The full preimage of a triangle group `Γ̄(p₁,p₂,p₃)` in the universal cover
//! is generated by the rotation lifts `r̃ᵢ = r_{vᵢ}(2π/pᵢ)` and the central
//! generator `z_c = (0, −π)`, with `r̃ᵢ^{pᵢ} = z_c` and `r̃₁r̃₂r̃₃ = z_c^m`. A
//! level-`k` subgroup is the kernel of the weight map `φ: r̃ᵢ ↦ βᵢ, z_c ↦ 1`
//! into `Z/k`, which is well defined iff `pᵢβᵢ ≡ 1` and `Σβᵢ ≡ m (mod k)`.

use std::collections::{HashMap, VecDeque};
use std::f64::consts::PI;

use num_complex::Complex64;

use crate::cover::{disc_action, disc_translation, inv, mul, pow, rotation_lift, DiscPoint, UElement};
use crate::error::{Error, Result};
use crate::util::{gcd, lcm, mod_inverse, ToleranceIndex};

/// Tolerance for recognising central elements and generator relations.
pub const RELATION_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Level {
    pub k: u32,
    pub weights: [i64; 3],
}

#[derive(Debug, Clone)]
pub struct TriangleGroupData {
    pub signature: [u32; 3],
    pub vertices: [DiscPoint; 3],
    pub generators: [UElement; 3],
    /// `r̃₁r̃₂r̃₃ = z_c^m`, measured.
    pub central_exponent: i64,
    pub level: Option<Level>,
}

fn side_length(opposite: f64, a: f64, b: f64) -> f64 {
    ((a.cos() * b.cos() + opposite.cos()) / (a.sin() * b.sin())).acosh()
}

pub fn is_hyperbolic(p: [u32; 3]) -> bool {
    p.iter().all(|&x| x >= 2) && {
        let s: f64 = p.iter().map(|&x| 1.0 / x as f64).sum();
        // exact rational comparison: p2p3 + p1p3 + p1p2 < p1p2p3
        let [a, b, c] = p.map(u64::from);
        b * c + a * c + a * b < a * b * c && s < 1.0
    }
}

/// Builds the triangle with `v₁ = 0`, `v₂` on the positive real axis and
/// `v₃` at angle `±π/p₁`, together with the canonical rotation lifts.
pub fn build_triangle_group(p1: u32, p2: u32, p3: u32) -> Result<TriangleGroupData> {
    let p = [p1, p2, p3];
    if !is_hyperbolic(p) {
        return Err(Error::NonHyperbolic(p1, p2, p3));
    }
    let [a, b, c] = p.map(|x| PI / x as f64);
    let rho12 = side_length(c, a, b);
    let rho13 = side_length(b, a, c);
    let v2 = DiscPoint::new((rho12 / 2.0).tanh(), 0.0);
    let r3 = (rho13 / 2.0).tanh();

    for orientation in [1.0, -1.0] {
        let v3 = DiscPoint(Complex64::from_polar(r3, orientation * a));
        let vertices = [DiscPoint::ORIGIN, v2, v3];
        let generators = [0, 1, 2].map(|i| rotation_lift(&vertices[i], 2.0 * PI / p[i] as f64));
        let product = mul(&mul(&generators[0], &generators[1]), &generators[2]);
        if product.z.norm() > RELATION_TOL {
            continue;
        }
        let m = product.central_power(RELATION_TOL).ok_or_else(|| {
            Error::Construction(format!("product of generators is not central: {product:?}"))
        })?;
        return Ok(TriangleGroupData {
            signature: p,
            vertices,
            generators,
            central_exponent: m,
            level: None,
        });
    }
    Err(Error::Construction(
        "product of the rotation generators is not central for either orientation".into(),
    ))
}

/// Weights `βᵢ` with `pᵢβᵢ ≡ 1` and `β₁+β₂+β₃ ≡ m (mod k)`.
pub fn level_weights(p: [u32; 3], k: u32, m: i64) -> Result<[i64; 3]> {
    if k == 0 {
        return Err(Error::Invalid("level must be at least 1".into()));
    }
    let kk = i64::from(k);
    let mut beta = [0i64; 3];
    for i in 0..3 {
        beta[i] = mod_inverse(i64::from(p[i]), kk).ok_or_else(|| Error::NoLevelLift {
            k,
            reason: format!("gcd(p{} = {}, k) != 1", i + 1, p[i]),
        })?;
    }
    let sum: i64 = beta.iter().sum();
    if (sum - m).rem_euclid(kk) != 0 {
        return Err(Error::NoLevelLift {
            k,
            reason: format!("weight sum {sum} is not congruent to m = {m}"),
        });
    }
    Ok(beta)
}

impl TriangleGroupData {
    pub fn with_level(mut self, k: u32) -> Result<Self> {
        let weights = level_weights(self.signature, k, self.central_exponent)?;
        self.level = Some(Level { k, weights });
        Ok(self)
    }

    pub fn level(&self) -> Level {
        self.level.unwrap_or(Level {
            k: 1,
            weights: [0; 3],
        })
    }

    /// Conjugates the whole configuration so that vertex `index` sits at the
    /// origin. Rotation lifts go to rotation lifts about the moved centres,
    /// so relations and weights are unchanged.
    pub fn recentered(&self, index: usize) -> Self {
        let t = disc_translation(&self.vertices[index]);
        let t_inv = inv(&t);
        let mut out = self.clone();
        for i in 0..3 {
            out.vertices[i] = if i == index {
                DiscPoint::ORIGIN
            } else {
                disc_action(&t_inv, &self.vertices[i])
            };
            out.generators[i] = mul(&mul(&t_inv, &self.generators[i]), &t);
        }
        if out.vertices[index].0.norm_sqr() == 0.0 {
            out.generators[index].z = Complex64::new(0.0, 0.0);
        }
        out
    }

    /// Longest side of the triangle (hyperbolic length).
    pub fn diameter(&self) -> f64 {
        let v = &self.vertices;
        v[0].distance(&v[1])
            .max(v[0].distance(&v[2]))
            .max(v[1].distance(&v[2]))
    }
}

/// A word in the generators together with its value and weight.
#[derive(Debug, Clone, PartialEq)]
pub struct LiftedWord {
    pub letters: Vec<(usize, i32)>,
    /// Extra power of `z_c` multiplied on the left.
    pub central: i64,
    pub element: UElement,
    pub weight: i64,
}

impl LiftedWord {
    pub fn identity() -> Self {
        Self {
            letters: Vec::new(),
            central: 0,
            element: UElement::IDENTITY,
            weight: 0,
        }
    }

    pub fn letter(tg: &TriangleGroupData, gen: usize, exp: i32) -> Self {
        Self::identity().times(tg, gen, exp)
    }

    /// Appends `r̃_gen^exp` on the right.
    pub fn times(&self, tg: &TriangleGroupData, gen: usize, exp: i32) -> Self {
        let lv = tg.level();
        let k = i64::from(lv.k);
        let mut letters = self.letters.clone();
        letters.push((gen, exp));
        Self {
            letters,
            central: self.central,
            element: mul(&self.element, &pow(&tg.generators[gen], i64::from(exp))),
            weight: (self.weight + lv.weights[gen] * i64::from(exp)).rem_euclid(k),
        }
    }

    /// Re-evaluates the weight from the letters (audit helper).
    pub fn recompute_weight(&self, tg: &TriangleGroupData) -> i64 {
        let lv = tg.level();
        let s: i64 = self
            .letters
            .iter()
            .map(|&(g, e)| lv.weights[g] * i64::from(e))
            .sum();
        (s + self.central).rem_euclid(i64::from(lv.k))
    }
}

/// `z_c^{(k − weight) mod k} · element`: the member of `Γ₁ = ker φ` with the
/// same downstairs image.
pub fn canonical_rep(w: &LiftedWord, k: u32) -> UElement {
    let k = i64::from(k);
    let j = (k - w.weight.rem_euclid(k)).rem_euclid(k);
    if j == 0 {
        w.element
    } else {
        mul(&UElement::central(j), &w.element)
    }
}

fn canonical_word(w: &LiftedWord, k: u32) -> LiftedWord {
    let kk = i64::from(k);
    let j = (kk - w.weight.rem_euclid(kk)).rem_euclid(kk);
    LiftedWord {
        letters: w.letters.clone(),
        central: w.central + j,
        element: canonical_rep(w, k),
        weight: 0,
    }
}

#[derive(Debug, Clone, Copy)]
pub struct OrbitConfig {
    pub max_word_len: usize,
    pub eps_orb: f64,
}

impl Default for OrbitConfig {
    fn default() -> Self {
        Self {
            max_word_len: 40,
            eps_orb: 1e-9,
        }
    }
}

#[derive(Debug, Clone)]
pub struct OrbitPoint {
    pub x: DiscPoint,
    /// Representative in `Γ₁` with `rep(u) = x`.
    pub rep: UElement,
    pub word: LiftedWord,
}

/// Hyperbolic radius of the Euclidean disc radius `R`.
pub fn hyperbolic_radius(euclidean: f64) -> f64 {
    2.0 * euclidean.atanh()
}

/// Breadth-first enumeration of `Γ₁(u) ∩ {|x| ≤ R}` with representatives.
///
/// Words grow by right multiplication, so consecutive elements move the base
/// triangle to an adjacent tile; elements whose image of `u` leaves the ball
/// enlarged by twice the triangle diameter are pruned.
pub fn enumerate_orbit(
    tg: &TriangleGroupData,
    u_index: usize,
    radius: f64,
    cfg: &OrbitConfig,
) -> Result<Vec<OrbitPoint>> {
    if !(radius > 0.0 && radius < 1.0) {
        return Err(Error::Invalid(format!("orbit radius {radius} not in (0,1)")));
    }
    let lv = tg.level();
    let kk = i64::from(lv.k);
    let u = tg.vertices[u_index];
    let aux = tg.vertices[(u_index + 1) % 3];
    let bound = hyperbolic_radius(radius) + 2.0 * tg.diameter() + 0.5;
    let gens: Vec<(usize, i32)> = (0..3).flat_map(|i| [(i, 1), (i, -1)]).collect();
    let gen_elems: Vec<UElement> = gens
        .iter()
        .map(|&(i, e)| pow(&tg.generators[i], i64::from(e)))
        .collect();

    let mut points = ToleranceIndex::<2>::new(cfg.eps_orb);
    // per orbit point: list of (element, weight, image of aux)
    let mut members: HashMap<usize, Vec<(UElement, i64, DiscPoint)>> = HashMap::new();
    let mut first: Vec<LiftedWord> = Vec::new();
    let mut queue: VecDeque<(LiftedWord, usize)> = VecDeque::new();

    let start = LiftedWord::identity();
    let (id, _) = points.insert([u.0.re, u.0.im]);
    members.insert(id, vec![(UElement::IDENTITY, 0, aux)]);
    first.push(start.clone());
    queue.push_back((start, 0));

    while let Some((word, depth)) = queue.pop_front() {
        for (gi, &(g, e)) in gens.iter().enumerate() {
            let element = mul(&word.element, &gen_elems[gi]);
            let x = disc_action(&element, &u);
            if u.distance(&x) > bound {
                continue;
            }
            let weight = (word.weight + lv.weights[g] * i64::from(e)).rem_euclid(kk);
            let aux_img = disc_action(&element, &aux);
            let (id, fresh) = points.insert([x.0.re, x.0.im]);
            let list = members.entry(id).or_default();
            let mut seen = false;
            for (other, other_w, other_aux) in list.iter() {
                if (other_aux.0 - aux_img.0).norm() <= 1e-7 {
                    // same downstairs element: lifts differ by a central power
                    let diff = mul(&inv(other), &element);
                    let j = diff.central_power(1e-7).ok_or_else(|| {
                        Error::WeightCollision(format!("non-central difference {diff:?}"))
                    })?;
                    if (other_w + j - weight).rem_euclid(kk) != 0 {
                        return Err(Error::WeightCollision(format!(
                            "words differ by z_c^{j} but weights {other_w} and {weight} disagree mod {kk}"
                        )));
                    }
                    seen = true;
                    break;
                }
            }
            if seen {
                continue;
            }
            if depth + 1 > cfg.max_word_len {
                if x.norm() <= radius {
                    return Err(Error::WordLengthCap {
                        cap: cfg.max_word_len,
                        radius,
                    });
                }
                continue;
            }
            list.push((element, weight, aux_img));
            let next = LiftedWord {
                letters: {
                    let mut l = word.letters.clone();
                    l.push((g, e));
                    l
                },
                central: word.central,
                element,
                weight,
            };
            if fresh {
                first.push(next.clone());
            }
            queue.push_back((next, depth + 1));
        }
    }

    let mut out: Vec<OrbitPoint> = first
        .into_iter()
        .enumerate()
        .filter_map(|(id, w)| {
            let p = points.point(id);
            let x = DiscPoint::new(p[0], p[1]);
            (x.norm() <= radius).then(|| {
                let cw = canonical_word(&w, lv.k);
                OrbitPoint {
                    x,
                    rep: cw.element,
                    word: cw,
                }
            })
        })
        .collect();
    out.sort_by(|a, b| {
        let ka = (a.x.norm(), a.x.0.arg());
        let kb = (b.x.norm(), b.x.0.arg());
        ka.partial_cmp(&kb).unwrap()
    });
    // the base point first
    if let Some(pos) = out.iter().position(|o| (o.x.0 - u.0).norm() <= cfg.eps_orb) {
        let base = out.remove(pos);
        out.insert(0, base);
    }
    Ok(out)
}

/// Generator `d₂ = r_u(2πk/q)` of the cyclic factor.
pub fn cyclic_factor(q: u32, k: u32, u: &DiscPoint) -> Result<UElement> {
    if q < 1 || gcd(i64::from(q), i64::from(k)) != 1 {
        return Err(Error::UnsupportedCyclicFactor { q, k });
    }
    Ok(rotation_lift(u, 2.0 * PI * f64::from(k) / f64::from(q)))
}

#[derive(Debug, Clone)]
pub struct StarSetup {
    pub u: DiscPoint,
    pub u_index: usize,
    /// Order of the isotropy group of `u` in the image of `Γ₁`.
    pub p1: u32,
    pub q: u32,
    pub k: u32,
    pub p: u32,
    pub theta: f64,
    pub d: UElement,
    pub d1: UElement,
    pub d2: UElement,
}

impl StarSetup {
    /// `p/p₁` and `p/q`: `d₁ = d^{p/p₁}`, `d₂ = d^{p/q}`.
    pub fn exponents(&self) -> (i64, i64) {
        (
            i64::from(self.p / self.p1),
            i64::from(self.p / self.q),
        )
    }

    pub fn d_pow(&self, m: i64) -> UElement {
        if self.u.0.norm_sqr() == 0.0 {
            UElement::IDENTITY.with_alpha(-(m as f64) * self.theta)
        } else {
            pow(&self.d, m)
        }
    }

    pub fn d1_pow(&self, a: i64) -> UElement {
        self.d_pow(a * self.exponents().0)
    }

    pub fn d2_pow(&self, b: i64) -> UElement {
        self.d_pow(b * self.exponents().1)
    }
}

pub fn star_setup(tg: &TriangleGroupData, u_index: usize, q: u32) -> Result<StarSetup> {
    if u_index > 2 {
        return Err(Error::Invalid(format!("vertex index {u_index} out of range")));
    }
    let k = tg.level().k;
    let u = tg.vertices[u_index];
    let p1 = tg.signature[u_index];
    let p = lcm(i64::from(p1), i64::from(q)) as u32;
    if p <= k {
        return Err(Error::ConditionViolated { p, k });
    }
    let d2 = cyclic_factor(q, k, &u)?;
    let theta = PI * f64::from(k) / f64::from(p);
    let d = rotation_lift(&u, 2.0 * theta);
    let d1 = rotation_lift(&u, 2.0 * PI * f64::from(k) / f64::from(p1));
    let setup = StarSetup {
        u,
        u_index,
        p1,
        q,
        k,
        p,
        theta,
        d,
        d1,
        d2,
    };
    let (e1, e2) = setup.exponents();
    if pow(&d, e1).distance(&d1) > 1e-10 || pow(&d, e2).distance(&d2) > 1e-10 {
        return Err(Error::Construction(
            "d1 and d2 are not powers of d".into(),
        ));
    }
    Ok(setup)
}

/// Smallest positive `j` with `z_c^j` among the first `max_n` elements.
pub fn group_level<I: IntoIterator<Item = UElement>>(elements: I, max_n: usize) -> Option<i64> {
    elements
        .into_iter()
        .take(max_n)
        .filter_map(|g| g.central_power(1e-9))
        .filter(|&j| j != 0)
        .map(i64::abs)
        .min()
}

/// Canonical representatives of all words up to `max_len` letters, deduplicated
/// by the word's value; used to audit the level of the constructed kernel.
pub fn kernel_elements(tg: &TriangleGroupData, max_len: usize) -> Vec<UElement> {
    let k = tg.level().k;
    let mut seen = ToleranceIndex::<3>::new(1e-9);
    let mut out = Vec::new();
    let mut frontier = vec![LiftedWord::identity()];
    seen.insert([0.0, 0.0, 0.0]);
    out.push(UElement::IDENTITY);
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &frontier {
            for g in 0..3 {
                for e in [1, -1] {
                    let nw = w.times(tg, g, e);
                    let el = nw.element;
                    if seen.insert([el.z.re, el.z.im, el.alpha]).1 {
                        out.push(canonical_rep(&nw, k));
                        next.push(nw);
                    }
                }
            }
        }
        frontier = next;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mobius_rotation(center: Complex64, angle: f64) -> [[Complex64; 2]; 2] {
        // conj(T) R T⁻¹ with T: 0 ↦ center, in plain Möbius form
        let one = Complex64::new(1.0, 0.0);
        let t = [[one, center], [center.conj(), one]];
        let t_inv = [[one, -center], [-center.conj(), one]];
        let r = [[Complex64::from_polar(1.0, angle / 2.0), Complex64::new(0.0, 0.0)], [Complex64::new(0.0, 0.0), Complex64::from_polar(1.0, -angle / 2.0)]];
        mm(mm(t, r), t_inv)
    }

    fn mm(a: [[Complex64; 2]; 2], b: [[Complex64; 2]; 2]) -> [[Complex64; 2]; 2] {
        let mut o = [[Complex64::new(0.0, 0.0); 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                o[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
            }
        }
        o
    }

    fn apply(m: &[[Complex64; 2]; 2], x: Complex64) -> Complex64 {
        (m[0][0] * x + m[0][1]) / (m[1][0] * x + m[1][1])
    }

    /// Orbit count by plain Möbius matrices, with a generous pruning slack.
    fn oracle_orbit_count(tg: &TriangleGroupData, u: Complex64, radius: f64) -> usize {
        let gens: Vec<_> = (0..3)
            .flat_map(|i| {
                let a = 2.0 * PI / tg.signature[i] as f64;
                [mobius_rotation(tg.vertices[i].0, a), mobius_rotation(tg.vertices[i].0, -a)]
            })
            .collect();
        let aux = tg.vertices[1].0 * 0.5 + tg.vertices[2].0 * 0.25;
        let bound = hyperbolic_radius(radius) + 4.0 * tg.diameter() + 1.0;
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        let mut seen = ToleranceIndex::<4>::new(1e-8);
        let mut orbit = ToleranceIndex::<2>::new(1e-9);
        let mut queue = VecDeque::from([[[one, zero], [zero, one]]]);
        seen.insert([u.re, u.im, aux.re, aux.im]);
        orbit.insert([u.re, u.im]);
        while let Some(m) = queue.pop_front() {
            for g in &gens {
                let n = mm(m, *g);
                let x = apply(&n, u);
                if DiscPoint(u).distance(&DiscPoint(x)) > bound {
                    continue;
                }
                let a = apply(&n, aux);
                if seen.insert([x.re, x.im, a.re, a.im]).1 {
                    orbit.insert([x.re, x.im]);
                    queue.push_back(n);
                }
            }
        }
        (0..orbit.len())
            .filter(|&i| {
                let p = orbit.point(i);
                p[0].hypot(p[1]) <= radius
            })
            .count()
    }

    fn g533() -> TriangleGroupData {
        build_triangle_group(5, 3, 3).unwrap().with_level(2).unwrap()
    }

    #[test]
    fn hyperbolicity() {
        assert!(is_hyperbolic([2, 3, 7]));
        assert!(!is_hyperbolic([2, 3, 6]));
        assert!(!is_hyperbolic([3, 3, 3]));
        assert!(matches!(build_triangle_group(2, 3, 6), Err(Error::NonHyperbolic(..))));
    }

    #[test]
    fn side_length_533() {
        let tg = build_triangle_group(5, 3, 3).unwrap();
        let a = PI / 5.0;
        let b = PI / 3.0;
        let cosh = (a.cos() * b.cos() + b.cos()) / (a.sin() * b.sin());
        assert!((cosh - 1.7773).abs() < 1e-3);
        assert!((cosh - 1.776_901_4).abs() < 1e-6);
        // disc-metric oracle for dist(v1, v2)
        let x = tg.vertices[1].0.re;
        let dist = ((1.0 + x) / (1.0 - x)).ln();
        assert!((dist.cosh() - cosh).abs() < 1e-12);
    }

    #[test]
    fn generator_relations() {
        for sig in [[5, 3, 3], [7, 3, 3], [9, 3, 3], [2, 3, 7], [4, 5, 6]] {
            let tg = build_triangle_group(sig[0], sig[1], sig[2]).unwrap();
            for i in 0..3 {
                let g = pow(&tg.generators[i], i64::from(sig[i]));
                assert!(g.distance(&UElement::central(1)) < 1e-9, "{sig:?} gen {i}: {g:?}");
            }
            let prod = mul(&mul(&tg.generators[0], &tg.generators[1]), &tg.generators[2]);
            assert!(prod.z.norm() <= 1e-9);
            assert!((prod.alpha + PI * tg.central_exponent as f64).abs() < 1e-9);
        }
    }

    #[test]
    fn level_weight_examples() {
        assert_eq!(level_weights([5, 3, 3], 2, 1).unwrap(), [1, 1, 1]);
        assert_eq!(level_weights([7, 3, 3], 1, 1).unwrap(), [0, 0, 0]);
        assert!(matches!(level_weights([4, 3, 3], 2, 1), Err(Error::NoLevelLift { .. })));
        assert!(matches!(level_weights([5, 3, 3], 2, 0), Err(Error::NoLevelLift { .. })));
        let b = level_weights([5, 7, 11], 3, 2 + 1 + 2).unwrap();
        assert!(b.iter().all(|&x| gcd(x, 3) == 1));
    }

    #[test]
    fn measured_central_exponent_admits_level_two() {
        for sig in [[5, 3, 3], [7, 3, 3], [9, 3, 3]] {
            let tg = build_triangle_group(sig[0], sig[1], sig[2]).unwrap();
            assert!(tg.clone().with_level(2).is_ok(), "{sig:?} m = {}", tg.central_exponent);
        }
    }

    #[test]
    fn canonical_rep_examples() {
        let tg = g533();
        let w = LiftedWord::letter(&tg, 0, 1);
        assert_eq!(w.weight, 1);
        let rep = canonical_rep(&w, 2);
        assert!(rep.distance(&mul(&UElement::central(1), &tg.generators[0])) < 1e-15);
        let w2 = w.times(&tg, 0, 1);
        assert_eq!(w2.weight, 0);
        assert_eq!(canonical_rep(&w2, 2), w2.element);
        let cw = canonical_word(&w, 2);
        assert_eq!(cw.recompute_weight(&tg), 0);
    }

    #[test]
    fn orbit_small_radius_is_base_point() {
        let tg = g533();
        let orbit = enumerate_orbit(&tg, 0, 0.1, &OrbitConfig::default()).unwrap();
        assert_eq!(orbit.len(), 1);
        assert_eq!(orbit[0].rep, UElement::IDENTITY);
    }

    #[test]
    fn orbit_matches_matrix_oracle() {
        let tg = g533();
        for (idx, radius) in [(0usize, 0.8), (0, 0.93), (1, 0.85)] {
            let orbit = enumerate_orbit(&tg, idx, radius, &OrbitConfig::default()).unwrap();
            let expect = oracle_orbit_count(&tg, tg.vertices[idx].0, radius);
            assert_eq!(orbit.len(), expect, "vertex {idx}, R = {radius}");
            let u = tg.vertices[idx];
            for o in &orbit {
                assert!((disc_action(&o.rep, &u).0 - o.x.0).norm() < 1e-9);
                assert_eq!(o.word.recompute_weight(&tg), 0);
                assert!(o.rep.distance(&o.word.element) < 1e-9);
            }
        }
    }

    #[test]
    fn orbit_word_cap() {
        let tg = g533();
        let cfg = OrbitConfig {
            max_word_len: 3,
            ..Default::default()
        };
        assert!(matches!(enumerate_orbit(&tg, 0, 0.95, &cfg), Err(Error::WordLengthCap { .. })));
    }

    #[test]
    fn isotropy_generated_by_d1() {
        let tg = g533();
        let k = 2;
        let u = tg.vertices[0];
        // scan r̃₁^a z_c^j in Γ₁ and pick the smallest positive rotation angle
        let mut best: Option<(f64, UElement)> = None;
        for a in -10i64..=10 {
            for j in -4i64..=4 {
                let w = (tg.level().weights[0] * a + j).rem_euclid(k);
                if w != 0 {
                    continue;
                }
                let g = mul(&UElement::central(j), &pow(&tg.generators[0], a));
                let angle = -2.0 * g.alpha;
                if angle > 1e-9 && best.is_none_or(|(b, _)| angle < b) {
                    best = Some((angle, g));
                }
            }
        }
        let (_, g) = best.unwrap();
        let d1 = rotation_lift(&u, 2.0 * PI * k as f64 / 5.0);
        assert!(g.distance(&d1) < 1e-10);
    }

    #[test]
    fn representatives_differ_by_isotropy() {
        let tg = g533();
        let u = tg.vertices[0];
        let orbit = enumerate_orbit(&tg, 0, 0.9, &OrbitConfig::default()).unwrap();
        let d1 = rotation_lift(&u, 4.0 * PI / 5.0);
        for o in orbit.iter().skip(1).take(20) {
            // an alternative representative
            let alt = mul(&o.rep, &pow(&d1, 3));
            let diff = mul(&inv(&o.rep), &alt);
            assert!((disc_action(&diff, &u).0 - u.0).norm() < 1e-9);
            let n = -diff.alpha / (PI / 5.0);
            assert!((n - n.round()).abs() < 1e-9 && (n.round() as i64).rem_euclid(2) == 0);
        }
    }

    #[test]
    fn cyclic_factor_examples() {
        let u = DiscPoint::ORIGIN;
        let d2 = cyclic_factor(3, 2, &u).unwrap();
        assert!(pow(&d2, 3).distance(&UElement::central(2)) < 1e-12);
        let d2 = cyclic_factor(3, 1, &u).unwrap();
        assert!(d2.distance(&rotation_lift(&u, 2.0 * PI / 3.0)) < 1e-15);
        assert!(matches!(cyclic_factor(3, 3, &u), Err(Error::UnsupportedCyclicFactor { .. })));
    }

    #[test]
    fn star_setup_examples() {
        let tg = g533();
        let s = star_setup(&tg, 0, 3).unwrap();
        assert_eq!(s.p, 15);
        assert!((s.theta - 2.0 * PI / 15.0).abs() < 1e-15);
        assert!(s.d.distance(&rotation_lift(&s.u, 4.0 * PI / 15.0)) < 1e-15);
        assert!(pow(&s.d, 3).distance(&s.d1) < 1e-10);
        assert!(pow(&s.d, 5).distance(&s.d2) < 1e-10);
        // p = k
        let tg = build_triangle_group(2, 3, 7).unwrap();
        let tg = TriangleGroupData { level: Some(Level { k: 2, weights: [0; 3] }), ..tg };
        let err = star_setup(&tg, 0, 1).unwrap_err();
        assert!(matches!(err, Error::ConditionViolated { p: 2, k: 2 }));
    }

    #[test]
    fn kernel_level_audit() {
        let zc = UElement::central(1);
        let gen1: Vec<UElement> = (0..5).map(|j| pow(&zc, j)).collect();
        assert_eq!(group_level(gen1, 10), Some(1));
        let gen2: Vec<UElement> = (0..5).map(|j| pow(&zc, 2 * j)).collect();
        assert_eq!(group_level(gen2, 10), Some(2));
        let tg = g533();
        assert_eq!(group_level(kernel_elements(&tg, 6), 100_000), Some(2));
        assert_eq!(group_level(Vec::<UElement>::new(), 10), None);
    }

    #[test]
    fn recentering_preserves_relations() {
        let tg = build_triangle_group(9, 3, 3).unwrap().with_level(2).unwrap();
        let rc = tg.recentered(1);
        assert!(rc.vertices[1].norm() < 1e-15);
        for i in 0..3 {
            let g = pow(&rc.generators[i], i64::from(rc.signature[i]));
            assert!(g.distance(&UElement::central(1)) < 1e-9);
            assert!((disc_action(&rc.generators[i], &rc.vertices[i]).0 - rc.vertices[i].0).norm() < 1e-9);
        }
        let prod = mul(&mul(&rc.generators[0], &rc.generators[1]), &rc.generators[2]);
        assert_eq!(prod.central_power(1e-8), Some(tg.central_exponent));
    }
}
