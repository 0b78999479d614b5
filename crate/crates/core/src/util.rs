use std::collections::HashMap;

/// Hash grid for deduplicating points of `R^D` under the max-norm with an
/// absolute tolerance.
#[derive(Debug, Clone)]
pub struct ToleranceIndex<const D: usize> {
    tol: f64,
    cell: f64,
    buckets: HashMap<[i64; D], Vec<usize>>,
    points: Vec<[f64; D]>,
}

impl<const D: usize> ToleranceIndex<D> {
    pub fn new(tol: f64) -> Self {
        Self {
            tol,
            cell: (4.0 * tol).max(1e-300),
            buckets: HashMap::new(),
            points: Vec::new(),
        }
    }

    fn key(&self, p: &[f64; D]) -> [i64; D] {
        let mut k = [0i64; D];
        for (ki, pi) in k.iter_mut().zip(p) {
            *ki = (pi / self.cell).floor() as i64;
        }
        k
    }

    pub fn find(&self, p: &[f64; D]) -> Option<usize> {
        let base = self.key(p);
        let mut best: Option<(usize, f64)> = None;
        let n = 3usize.pow(D as u32);
        for code in 0..n {
            let mut k = base;
            let mut c = code;
            for ki in k.iter_mut() {
                *ki += (c % 3) as i64 - 1;
                c /= 3;
            }
            if let Some(ids) = self.buckets.get(&k) {
                for &id in ids {
                    let q = &self.points[id];
                    let d = p
                        .iter()
                        .zip(q)
                        .map(|(a, b)| (a - b).abs())
                        .fold(0.0, f64::max);
                    if d <= self.tol && best.is_none_or(|(_, bd)| d < bd) {
                        best = Some((id, d));
                    }
                }
            }
        }
        best.map(|(id, _)| id)
    }

    /// Returns the index of an existing point within tolerance, or inserts `p`.
    /// The boolean is `true` when the point was newly inserted.
    pub fn insert(&mut self, p: [f64; D]) -> (usize, bool) {
        if let Some(id) = self.find(&p) {
            return (id, false);
        }
        let id = self.points.len();
        let k = self.key(&p);
        self.points.push(p);
        self.buckets.entry(k).or_default().push(id);
        (id, true)
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn point(&self, id: usize) -> &[f64; D] {
        &self.points[id]
    }
}

pub fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

pub fn lcm(a: i64, b: i64) -> i64 {
    a / gcd(a, b) * b
}

/// Extended Euclid: returns `(g, x, y)` with `a·x + b·y = g`.
pub fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    if b == 0 {
        (a, 1, 0)
    } else {
        let (g, x, y) = ext_gcd(b, a.rem_euclid(b));
        (g, y, x - a.div_euclid(b) * y)
    }
}

/// Inverse of `a` modulo `k` (`k ≥ 1`); `None` if not coprime.
pub fn mod_inverse(a: i64, k: i64) -> Option<i64> {
    if k == 1 {
        return Some(0);
    }
    let (g, x, _) = ext_gcd(a.rem_euclid(k), k);
    (g == 1).then(|| x.rem_euclid(k))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn index_merges_close_points() {
        let mut idx = ToleranceIndex::<2>::new(1e-9);
        assert_eq!(idx.insert([0.5, 0.5]), (0, true));
        assert_eq!(idx.insert([0.5 + 5e-10, 0.5]), (0, false));
        assert_eq!(idx.insert([0.5 + 5e-9, 0.5]), (1, true));
        assert_eq!(idx.len(), 2);
    }

    #[test]
    fn arithmetic_helpers() {
        assert_eq!(gcd(15, 9), 3);
        assert_eq!(lcm(5, 3), 15);
        assert_eq!(mod_inverse(5, 2), Some(1));
        assert_eq!(mod_inverse(4, 2), None);
        assert_eq!(mod_inverse(3, 1), Some(0));
        let (g, x, y) = ext_gcd(3, 5);
        assert_eq!((g, 3 * x + 5 * y), (1, 1));
    }
}
