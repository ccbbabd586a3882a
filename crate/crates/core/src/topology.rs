//! Static network topology: one MRRH, F-APs scattered in its coverage
//! disc, and F-UEs attached either to the MRRH or to one F-AP.

use std::io::Write;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// 2D position in metres.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const ORIGIN: Point = Point { x: 0.0, y: 0.0 };

    pub fn distance(&self, other: &Point) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }
}

/// Index of an F-AP within `Topology::faps`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct FapId(pub usize);

/// Index of an F-UE within `Topology::fues`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct FueId(pub usize);

/// Which node serves an F-UE.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ServingNode {
    Mrrh,
    Fap(FapId),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Fap {
    pub id: FapId,
    pub position: Point,
    pub radius: f64,
    /// Fraction of requested content served from the F-AP's local cache.
    pub cache_hit_ratio: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Fue {
    pub id: FueId,
    pub position: Point,
    pub serving_node: ServingNode,
    /// Speed in m/s, used by the handover speed gate.
    pub speed: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Topology {
    pub mrrh_position: Point,
    pub mrrh_radius: f64,
    pub faps: Vec<Fap>,
    pub fues: Vec<Fue>,
}

/// Parameters for [`generate_topology`].
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TopologyConfig {
    pub mrrh_radius: f64,
    pub n_faps: usize,
    pub n_fues_per_fap: usize,
    pub n_macro_fues: usize,
    pub fap_radius: f64,
    /// Speed assigned to slow F-UEs (m/s).
    pub speed_low: f64,
    /// Speed assigned to fast F-UEs (m/s).
    pub speed_high: f64,
    /// Fraction of F-UEs drawing the high speed.
    pub high_speed_fraction: f64,
    pub cache_hit_min: f64,
    pub cache_hit_max: f64,
    /// Near-field exclusion around the MRRH: no node is placed closer than
    /// this (m). Small relative to mrrh_radius, so placement stays
    /// statistically uniform, but it bounds the uplink cross-gain to the
    /// MRRH.
    pub mrrh_exclusion_radius: f64,
}

impl Default for TopologyConfig {
    fn default() -> Self {
        TopologyConfig {
            mrrh_radius: 250.0,
            n_faps: 10,
            n_fues_per_fap: 4,
            n_macro_fues: 4,
            fap_radius: 30.0,
            speed_low: 1.5,
            speed_high: 20.0,
            high_speed_fraction: 0.1,
            cache_hit_min: 0.2,
            cache_hit_max: 0.8,
            mrrh_exclusion_radius: 10.0,
        }
    }
}

impl TopologyConfig {
    pub fn validate(&self) -> Result<()> {
        if self.mrrh_radius <= 0.0 {
            return Err(Error::Config("mrrh_radius must be > 0".into()));
        }
        if self.fap_radius <= 0.0 {
            return Err(Error::Config("fap_radius must be > 0".into()));
        }
        if self.fap_radius > self.mrrh_radius {
            return Err(Error::Config(format!(
                "fap_radius ({}) must not exceed mrrh_radius ({})",
                self.fap_radius, self.mrrh_radius
            )));
        }
        if self.speed_low < 0.0 || self.speed_high < 0.0 {
            return Err(Error::Config("speeds must be >= 0".into()));
        }
        if !(0.0..=1.0).contains(&self.high_speed_fraction) {
            return Err(Error::Config("high_speed_fraction must be in [0,1]".into()));
        }
        for (key, v) in [
            ("cache_hit_min", self.cache_hit_min),
            ("cache_hit_max", self.cache_hit_max),
        ] {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::Config(format!("{key} must be in [0,1]")));
            }
        }
        if self.cache_hit_min > self.cache_hit_max {
            return Err(Error::Config("cache_hit_min must be <= cache_hit_max".into()));
        }
        if self.mrrh_exclusion_radius < 0.0
            || self.mrrh_exclusion_radius >= self.mrrh_radius
        {
            return Err(Error::Config(
                "mrrh_exclusion_radius must be in [0, mrrh_radius)".into(),
            ));
        }
        Ok(())
    }
}

/// Draw a point uniformly from the disc of radius `radius` around `center`.
fn uniform_in_disc<R: Rng + ?Sized>(center: Point, radius: f64, rng: &mut R) -> Point {
    let r = radius * rng.gen::<f64>().sqrt();
    let theta = rng.gen::<f64>() * std::f64::consts::TAU;
    Point {
        x: center.x + r * theta.cos(),
        y: center.y + r * theta.sin(),
    }
}

fn draw_speed<R: Rng + ?Sized>(cfg: &TopologyConfig, rng: &mut R) -> f64 {
    if rng.gen::<f64>() < cfg.high_speed_fraction {
        cfg.speed_high
    } else {
        cfg.speed_low
    }
}

/// Resample until the point clears the MRRH near-field exclusion. The
/// sampling disc always contains admissible points, so this terminates.
fn sample_excluding<R: Rng + ?Sized>(
    center: Point,
    radius: f64,
    mrrh: Point,
    exclusion: f64,
    rng: &mut R,
) -> Point {
    loop {
        let p = uniform_in_disc(center, radius, rng);
        if p.distance(&mrrh) >= exclusion {
            return p;
        }
    }
}

/// Generate a random topology: F-APs and macro F-UEs uniform over the MRRH
/// disc, per-F-AP F-UEs uniform over each F-AP's disc, all outside the
/// MRRH near-field exclusion.
pub fn generate_topology<R: Rng + ?Sized>(
    config: &TopologyConfig,
    rng: &mut R,
) -> Result<Topology> {
    config.validate()?;
    let mrrh_position = Point::ORIGIN;
    let excl = config.mrrh_exclusion_radius;
    let mut faps = Vec::with_capacity(config.n_faps);
    for i in 0..config.n_faps {
        let position =
            sample_excluding(mrrh_position, config.mrrh_radius, mrrh_position, excl, rng);
        let cache_hit_ratio = config.cache_hit_min
            + (config.cache_hit_max - config.cache_hit_min) * rng.gen::<f64>();
        faps.push(Fap {
            id: FapId(i),
            position,
            radius: config.fap_radius,
            cache_hit_ratio,
        });
    }

    let mut fues = Vec::new();
    for fap in &faps {
        for _ in 0..config.n_fues_per_fap {
            let position =
                sample_excluding(fap.position, fap.radius, mrrh_position, excl, rng);
            fues.push(Fue {
                id: FueId(fues.len()),
                position,
                serving_node: ServingNode::Fap(fap.id),
                speed: draw_speed(config, rng),
            });
        }
    }
    for _ in 0..config.n_macro_fues {
        let position =
            sample_excluding(mrrh_position, config.mrrh_radius, mrrh_position, excl, rng);
        fues.push(Fue {
            id: FueId(fues.len()),
            position,
            serving_node: ServingNode::Mrrh,
            speed: draw_speed(config, rng),
        });
    }

    let topo = Topology {
        mrrh_position,
        mrrh_radius: config.mrrh_radius,
        faps,
        fues,
    };
    topo.validate()?;
    Ok(topo)
}

impl Topology {
    /// Check every structural invariant; used after generation and when a
    /// topology arrives from outside.
    pub fn validate(&self) -> Result<()> {
        if self.mrrh_radius <= 0.0 {
            return Err(Error::Config("mrrh_radius must be > 0".into()));
        }
        // Positions are sampled inside closed discs; allow a hair of
        // floating-point slack on the boundary.
        let slack = 1e-9;
        for fap in &self.faps {
            if fap.radius <= 0.0 {
                return Err(Error::Config(format!("F-AP {} radius must be > 0", fap.id.0)));
            }
            if !(0.0..=1.0).contains(&fap.cache_hit_ratio) {
                return Err(Error::Config(format!(
                    "F-AP {} cache_hit_ratio must be in [0,1]",
                    fap.id.0
                )));
            }
            if fap.position.distance(&self.mrrh_position) > self.mrrh_radius * (1.0 + slack) {
                return Err(Error::Config(format!(
                    "F-AP {} lies outside the MRRH coverage disc",
                    fap.id.0
                )));
            }
        }
        for fue in &self.fues {
            let (center, radius) = match fue.serving_node {
                ServingNode::Mrrh => (self.mrrh_position, self.mrrh_radius),
                ServingNode::Fap(fap_id) => {
                    let fap = self.faps.get(fap_id.0).ok_or_else(|| {
                        Error::Config(format!(
                            "F-UE {} references unknown F-AP {}",
                            fue.id.0, fap_id.0
                        ))
                    })?;
                    (fap.position, fap.radius)
                }
            };
            if fue.position.distance(&center) > radius * (1.0 + slack) {
                return Err(Error::Config(format!(
                    "F-UE {} lies outside its serving node's coverage disc",
                    fue.id.0
                )));
            }
        }
        Ok(())
    }

    pub fn fap(&self, id: FapId) -> &Fap {
        &self.faps[id.0]
    }

    pub fn fue(&self, id: FueId) -> &Fue {
        &self.fues[id.0]
    }

    /// Cache hit ratio of the F-UE's serving F-AP; 0 for MRRH-served F-UEs.
    pub fn cache_hit_ratio_of(&self, fue: FueId) -> f64 {
        match self.fues[fue.0].serving_node {
            ServingNode::Mrrh => 0.0,
            ServingNode::Fap(fap) => self.faps[fap.0].cache_hit_ratio,
        }
    }

    /// F-UE ids served by F-APs, in id order. These are the game players.
    pub fn fap_served_fues(&self) -> Vec<FueId> {
        self.fues
            .iter()
            .filter(|f| matches!(f.serving_node, ServingNode::Fap(_)))
            .map(|f| f.id)
            .collect()
    }

    /// F-UE ids served by the MRRH, in id order.
    pub fn mrrh_served_fues(&self) -> Vec<FueId> {
        self.fues
            .iter()
            .filter(|f| f.serving_node == ServingNode::Mrrh)
            .map(|f| f.id)
            .collect()
    }

    /// Line-oriented debug dump, tab separated.
    ///
    /// Columns: `kind  id  x  y  radius  serving  cache_hit  speed`.
    /// `radius`/`cache_hit` are empty for F-UEs; `serving`/`speed` are
    /// empty for the MRRH and F-APs.
    pub fn write_tsv<W: Write>(&self, w: &mut W) -> Result<()> {
        writeln!(
            w,
            "MRRH\t-\t{}\t{}\t{}\t\t\t",
            self.mrrh_position.x, self.mrrh_position.y, self.mrrh_radius
        )?;
        for fap in &self.faps {
            writeln!(
                w,
                "FAP\t{}\t{}\t{}\t{}\t\t{}\t",
                fap.id.0, fap.position.x, fap.position.y, fap.radius, fap.cache_hit_ratio
            )?;
        }
        for fue in &self.fues {
            let serving = match fue.serving_node {
                ServingNode::Mrrh => "MRRH".to_string(),
                ServingNode::Fap(id) => format!("FAP{}", id.0),
            };
            writeln!(
                w,
                "FUE\t{}\t{}\t{}\t\t{}\t\t{}",
                fue.id.0, fue.position.x, fue.position.y, serving, fue.speed
            )?;
        }
        Ok(())
    }
}
