//! Run configuration, read from a single JSON document.
//!
//! ```json
//! {
//!   "signature": [5, 3, 3],
//!   "k": 2,
//!   "u_vertex": 0,
//!   "q": 3,
//!   "tolerances": { "eps_geom": 1e-7, "eps_match": 1e-6, "eps_orb": 1e-9 },
//!   "orbit": { "r0": 0.7, "growth": 1.15, "cap": 12, "max_word_len": 40 },
//!   "carve": { "margin": 0.2, "layer_step": 0.1, "guard_sides": 64 },
//!   "sampling": { "tiling": 10000, "boundary": 1000, "lemma": 1000, "boundary_tol": 1e-6 },
//!   "seed": 1,
//!   "out": "out"
//! }
//! ```
//!
//! `signature`, `k` and `q` are required; every other field takes the value
//! shown above when omitted.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::carve::{BuildConfig, CarveConfig};
use crate::error::{Error, Result};
use crate::groups::{is_hyperbolic, OrbitConfig};
use crate::util::lcm;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    /// Plane and vertex merging, facet residuals.
    pub eps_geom: f64,
    /// Facet matching in the pairing and symmetry detection.
    pub eps_match: f64,
    /// Orbit point deduplication.
    pub eps_orb: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self { eps_geom: 1e-7, eps_match: 1e-6, eps_orb: 1e-9 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OrbitSettings {
    /// Initial Euclidean orbit radius.
    pub r0: f64,
    /// Growth factor of the hyperbolic radius per iteration.
    pub growth: f64,
    /// Iteration cap of the radius loop.
    pub cap: usize,
    pub max_word_len: usize,
}

impl Default for OrbitSettings {
    fn default() -> Self {
        Self { r0: 0.7, growth: 1.15, cap: 12, max_word_len: 40 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CarveSettings {
    /// Extra argument window in radians.
    pub margin: f64,
    /// Thickness of the initial slab layers.
    pub layer_step: f64,
    /// Sides of the guard polygon inscribed in the light cone.
    pub guard_sides: usize,
}

impl Default for CarveSettings {
    fn default() -> Self {
        Self { margin: 0.2, layer_step: 0.1, guard_sides: 64 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Sampling {
    pub tiling: usize,
    pub boundary: usize,
    /// Points per prism in the prism bound check.
    pub lemma: usize,
    pub boundary_tol: f64,
}

impl Default for Sampling {
    fn default() -> Self {
        Self { tiling: 10_000, boundary: 1_000, lemma: 1_000, boundary_tol: 1e-6 }
    }
}

fn default_out() -> PathBuf {
    PathBuf::from("out")
}

fn default_seed() -> u64 {
    1
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub signature: [u32; 3],
    pub k: u32,
    #[serde(default)]
    pub u_vertex: usize,
    /// Order of the cyclic factor.
    pub q: u32,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default)]
    pub orbit: OrbitSettings,
    #[serde(default)]
    pub carve: CarveSettings,
    #[serde(default)]
    pub sampling: Sampling,
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default = "default_out")]
    pub out: PathBuf,
}

impl RunConfig {
    pub fn new(signature: [u32; 3], k: u32, u_vertex: usize, q: u32) -> Self {
        Self {
            signature,
            k,
            u_vertex,
            q,
            tolerances: Tolerances::default(),
            orbit: OrbitSettings::default(),
            carve: CarveSettings::default(),
            sampling: Sampling::default(),
            seed: default_seed(),
            out: default_out(),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: RunConfig = serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    /// `p = lcm(p_u, q)`.
    pub fn p(&self) -> u32 {
        lcm(i64::from(self.signature[self.u_vertex.min(2)]), i64::from(self.q)) as u32
    }

    pub fn validate(&self) -> Result<()> {
        let [a, b, c] = self.signature;
        if a < 2 || b < 2 || c < 2 {
            return Err(Error::Config(format!("signature entries must be at least 2, got {:?}", self.signature)));
        }
        if !is_hyperbolic(self.signature) {
            return Err(Error::NonHyperbolic(a, b, c));
        }
        if self.k < 1 {
            return Err(Error::Config("level k must be at least 1".into()));
        }
        if self.q < 2 {
            return Err(Error::Config("q must be at least 2".into()));
        }
        if self.u_vertex > 2 {
            return Err(Error::Config(format!("u_vertex must be 0, 1 or 2, got {}", self.u_vertex)));
        }
        let t = &self.tolerances;
        if !(t.eps_geom > 0.0 && t.eps_match > 0.0 && t.eps_orb > 0.0 && self.sampling.boundary_tol > 0.0) {
            return Err(Error::Config("tolerances must be positive".into()));
        }
        let o = &self.orbit;
        if !(o.r0 > 0.0 && o.r0 < 1.0) {
            return Err(Error::Config("orbit.r0 must lie in (0, 1)".into()));
        }
        if !(o.growth > 1.0) || o.cap == 0 || o.max_word_len == 0 {
            return Err(Error::Config("orbit.growth must exceed 1 and cap, max_word_len be positive".into()));
        }
        let c = &self.carve;
        if !(c.margin >= 0.0 && c.layer_step > 0.0) || c.guard_sides < 8 {
            return Err(Error::Config("carve: margin >= 0, layer_step > 0, guard_sides >= 8".into()));
        }
        let p = self.p();
        if p <= self.k {
            return Err(Error::ConditionViolated { p, k: self.k });
        }
        Ok(())
    }

    pub fn build_config(&self) -> BuildConfig {
        BuildConfig {
            carve: CarveConfig {
                eps_geom: self.tolerances.eps_geom,
                margin: self.carve.margin,
                layer_step: self.carve.layer_step,
                guard_sides: self.carve.guard_sides,
            },
            orbit: OrbitConfig {
                max_word_len: self.orbit.max_word_len,
                eps_orb: self.tolerances.eps_orb,
            },
            r0: self.orbit.r0,
            growth: self.orbit.growth,
            iteration_cap: self.orbit.cap,
            verify_stability: true,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_fill_in() {
        let cfg = RunConfig::from_json(r#"{"signature":[5,3,3],"k":2,"q":3}"#).unwrap();
        assert_eq!(cfg, RunConfig::new([5, 3, 3], 2, 0, 3));
        assert_eq!(cfg.p(), 15);
        let bc = cfg.build_config();
        assert_eq!(bc.r0, 0.7);
        assert_eq!(bc.iteration_cap, 12);
    }

    #[test]
    fn json_round_trip() {
        let mut cfg = RunConfig::new([9, 3, 3], 2, 1, 3);
        cfg.seed = 42;
        let text = serde_json::to_string(&cfg).unwrap();
        assert_eq!(RunConfig::from_json(&text).unwrap(), cfg);
    }

    #[test]
    fn rejects_bad_input() {
        let bad = [
            r#"{"signature":[2,3,6],"k":2,"q":3}"#,
            r#"{"signature":[5,3,3],"k":0,"q":3}"#,
            r#"{"signature":[5,3,3],"k":2,"q":1}"#,
            r#"{"signature":[5,3,3],"k":2,"q":3,"u_vertex":3}"#,
            r#"{"signature":[5,3,3],"k":2,"q":3,"tolerances":{"eps_geom":0}}"#,
            r#"{"signature":[5,3,3],"k":2,"q":3,"colour":1}"#,
            r#"{"signature":[5,3,3],"k":2}"#,
        ];
        for text in bad {
            assert!(RunConfig::from_json(text).is_err(), "{text}");
        }
    }

    #[test]
    fn p_not_above_k_is_condition_violation() {
        let err = RunConfig::from_json(r#"{"signature":[2,3,7],"k":2,"q":2}"#).unwrap_err();
        assert!(err.to_string().contains("condition (*) violated"), "{err}");
    }
}
