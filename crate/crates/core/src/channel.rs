//! Network realizations: node placement on a disk, distance-based path loss
//! and Rayleigh fading, collected into the channel-gain matrix.
//!
//! Index 0 of the gain matrix is reserved for the macro pair: row 0 is the
//! macro-cell user, column 0 the macro base station. Small-cell user `k`
//! (0-based) occupies row `k + 1` and small-cell base station `n` occupies
//! column `n + 1`.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::ConfigError;

/// Planar coordinates in meters.
pub type Point = [f64; 2];

pub fn db_to_linear(x_db: f64) -> f64 {
    10f64.powf(x_db / 10.0)
}

pub fn linear_to_db(x: f64) -> f64 {
    10.0 * x.log10()
}

/// Parameters of one network layout. Powers are transmit SNRs, i.e. already
/// normalized by the receiver noise power.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NetworkConfig {
    /// Number of small-cell users.
    pub k: usize,
    /// Number of small-cell base stations.
    pub n: usize,
    /// Cell radius (m).
    pub radius: f64,
    /// Path-loss exponent.
    pub alpha: f64,
    /// Reference distance (m); distances below it are clamped.
    pub d0: f64,
    pub gamma_db: f64,
    pub gamma0_db: f64,
    pub beta_db: f64,
    pub beta0_db: f64,
    pub seed: u64,
}

impl Default for NetworkConfig {
    fn default() -> Self {
        Self {
            k: 10,
            n: 10,
            radius: 20.0,
            alpha: 4.0,
            d0: 5.0,
            gamma_db: 20.0,
            gamma0_db: 40.0,
            beta_db: 1.0,
            beta0_db: 0.0,
            seed: 0,
        }
    }
}

impl NetworkConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.k < 1 {
            return Err(ConfigError::invalid("k", "need at least one small-cell user"));
        }
        if self.n < 1 {
            return Err(ConfigError::invalid("n", "need at least one small-cell base station"));
        }
        for (name, v) in [("radius", self.radius), ("alpha", self.alpha), ("d0", self.d0)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(ConfigError::invalid(name, format!("must be finite and > 0, got {v}")));
            }
        }
        for (name, v) in [
            ("gamma_db", self.gamma_db),
            ("gamma0_db", self.gamma0_db),
            ("beta_db", self.beta_db),
            ("beta0_db", self.beta0_db),
        ] {
            let lin = db_to_linear(v);
            if !(v.is_finite() && lin.is_finite() && lin > 0.0) {
                return Err(ConfigError::invalid(name, format!("{v} dB has no positive finite linear value")));
            }
        }
        Ok(())
    }

    /// Deterministic generator seeded from `self.seed`.
    pub fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed)
    }

    pub fn gamma(&self) -> f64 {
        db_to_linear(self.gamma_db)
    }

    pub fn gamma0(&self) -> f64 {
        db_to_linear(self.gamma0_db)
    }

    pub fn beta(&self) -> f64 {
        db_to_linear(self.beta_db)
    }

    pub fn beta0(&self) -> f64 {
        db_to_linear(self.beta0_db)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Positions {
    /// Always the origin.
    pub mbs: Point,
    pub mu: Point,
    pub sbs: Vec<Point>,
    pub su: Vec<Point>,
}

/// One network realization. Immutable once built.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    pub config: NetworkConfig,
    pub positions: Option<Positions>,
    /// Row-major `(k + 1) x (n + 1)` linear channel gains.
    pub gains: Vec<f64>,
    pub gamma: f64,
    pub gamma0: f64,
    pub beta: f64,
    pub beta0: f64,
}

impl Scenario {
    /// Builds a scenario directly from a gain matrix and linear parameters.
    /// Used for hand-made fixtures; no positions are attached.
    pub fn from_gains(
        k: usize,
        n: usize,
        gains: Vec<f64>,
        gamma: f64,
        gamma0: f64,
        beta: f64,
        beta0: f64,
    ) -> Result<Self, ConfigError> {
        if k < 1 || n < 1 {
            return Err(ConfigError::invalid("gains", "need k >= 1 and n >= 1"));
        }
        if gains.len() != (k + 1) * (n + 1) {
            return Err(ConfigError::invalid(
                "gains",
                format!("expected {} entries for a {}x{} matrix, got {}", (k + 1) * (n + 1), k + 1, n + 1, gains.len()),
            ));
        }
        if let Some(g) = gains.iter().find(|g| !(g.is_finite() && **g >= 0.0)) {
            return Err(ConfigError::invalid("gains", format!("entries must be finite and >= 0, got {g}")));
        }
        for (name, v) in [("gamma", gamma), ("gamma0", gamma0), ("beta", beta), ("beta0", beta0)] {
            if !(v.is_finite() && v >= 0.0) {
                return Err(ConfigError::invalid(name, format!("must be finite and >= 0, got {v}")));
            }
        }
        let config = NetworkConfig {
            k,
            n,
            gamma_db: linear_to_db(gamma),
            gamma0_db: linear_to_db(gamma0),
            beta_db: linear_to_db(beta),
            beta0_db: linear_to_db(beta0),
            ..NetworkConfig::default()
        };
        Ok(Self { config, positions: None, gains, gamma, gamma0, beta, beta0 })
    }

    pub fn k(&self) -> usize {
        self.config.k
    }

    pub fn n(&self) -> usize {
        self.config.n
    }

    /// Raw access with the macro pair at index 0.
    #[inline]
    pub fn g(&self, row: usize, col: usize) -> f64 {
        self.gains[row * (self.config.n + 1) + col]
    }

    /// Gain from small-cell base station `sbs` to small-cell user `su` (both 0-based).
    #[inline]
    pub fn su_sbs(&self, su: usize, sbs: usize) -> f64 {
        self.g(su + 1, sbs + 1)
    }

    /// Gain from the macro base station to small-cell user `su`.
    #[inline]
    pub fn su_mbs(&self, su: usize) -> f64 {
        self.g(su + 1, 0)
    }

    /// Gain from small-cell base station `sbs` to the macro user.
    #[inline]
    pub fn mu_sbs(&self, sbs: usize) -> f64 {
        self.g(0, sbs + 1)
    }

    #[inline]
    pub fn mu_mbs(&self) -> f64 {
        self.g(0, 0)
    }

    /// Whether the macro user misses its threshold even with every SBS silent.
    pub fn mu_infeasible(&self) -> bool {
        self.gamma0 * self.mu_mbs() < self.beta0
    }

    /// Little-endian bytes of the gain matrix hashed with SHA-256, truncated
    /// to 64 bits and hex encoded.
    pub fn gain_hash(&self) -> String {
        use sha2::{Digest, Sha256};
        let mut hasher = Sha256::new();
        for g in &self.gains {
            hasher.update(g.to_le_bytes());
        }
        let digest = hasher.finalize();
        hex::encode(&digest[..8])
    }

    pub fn to_json(&self) -> serde_json::Result<String> {
        serde_json::to_string_pretty(self)
    }

    pub fn from_json(s: &str) -> Result<Self, ConfigError> {
        let scn: Scenario = serde_json::from_str(s).map_err(|e| ConfigError::Parse(e.to_string()))?;
        let k = scn.config.k;
        let n = scn.config.n;
        Scenario::from_gains(k, n, scn.gains.clone(), scn.gamma, scn.gamma0, scn.beta, scn.beta0)?;
        Ok(scn)
    }
}

/// `|h|^2 (d0 / max(d, d0))^alpha`.
pub fn channel_gain(fading_power: f64, distance: f64, d0: f64, alpha: f64) -> f64 {
    let d = distance.max(d0);
    fading_power * (d0 / d).powf(alpha)
}

/// Uniform point on the disk of radius `radius` centred at the origin.
pub fn sample_disk<R: Rng + ?Sized>(radius: f64, rng: &mut R) -> Point {
    let u: f64 = rng.random();
    let v: f64 = rng.random();
    let r = radius * u.sqrt();
    let theta = 2.0 * std::f64::consts::PI * v;
    [r * theta.cos(), r * theta.sin()]
}

/// `|h|^2` for `h = (a + ib) / sqrt(2)`, `a, b` standard normal.
pub fn sample_fading_power<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    let a: f64 = StandardNormal.sample(rng);
    let b: f64 = StandardNormal.sample(rng);
    (a * a + b * b) / 2.0
}

fn distance(p: Point, q: Point) -> f64 {
    (p[0] - q[0]).hypot(p[1] - q[1])
}

/// Draws SBS positions, then users and fading. `cfg` must be valid.
pub fn sample_scenario<R: Rng + ?Sized>(cfg: &NetworkConfig, rng: &mut R) -> Scenario {
    let sbs: Vec<Point> = (0..cfg.n).map(|_| sample_disk(cfg.radius, rng)).collect();
    sample_scenario_with_sbs(cfg, &sbs, rng)
}

/// Same as [`sample_scenario`] with the SBS layout held fixed.
pub fn sample_scenario_with_sbs<R: Rng + ?Sized>(cfg: &NetworkConfig, sbs: &[Point], rng: &mut R) -> Scenario {
    let positions = sample_users(cfg, sbs, rng);
    draw_gains(cfg, positions, rng)
}

/// Places the macro user and the small-cell users around a given SBS layout.
pub fn sample_users<R: Rng + ?Sized>(cfg: &NetworkConfig, sbs: &[Point], rng: &mut R) -> Positions {
    assert_eq!(sbs.len(), cfg.n, "SBS layout has {} points, config expects {}", sbs.len(), cfg.n);
    let mu = sample_disk(cfg.radius, rng);
    let su: Vec<Point> = (0..cfg.k).map(|_| sample_disk(cfg.radius, rng)).collect();
    Positions { mbs: [0.0, 0.0], mu, sbs: sbs.to_vec(), su }
}

/// Fresh fading on a fixed geometry.
pub fn draw_gains<R: Rng + ?Sized>(cfg: &NetworkConfig, positions: Positions, rng: &mut R) -> Scenario {
    assert!(positions.sbs.len() == cfg.n && positions.su.len() == cfg.k, "positions do not match config");
    let cols = cfg.n + 1;
    let mut gains = Vec::with_capacity((cfg.k + 1) * cols);
    for row in 0..=cfg.k {
        let user = if row == 0 { positions.mu } else { positions.su[row - 1] };
        for col in 0..cols {
            let bs = if col == 0 { positions.mbs } else { positions.sbs[col - 1] };
            let fading = sample_fading_power(rng);
            gains.push(channel_gain(fading, distance(user, bs), cfg.d0, cfg.alpha));
        }
    }
    Scenario {
        config: *cfg,
        positions: Some(positions),
        gains,
        gamma: cfg.gamma(),
        gamma0: cfg.gamma0(),
        beta: cfg.beta(),
        beta0: cfg.beta0(),
    }
}
