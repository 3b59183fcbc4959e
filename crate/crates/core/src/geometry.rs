//! Vector geometry of the link: array element positions, the LoS vector,
//! mirror-point evolution of cluster paths under receiver motion, per-element
//! cluster distances and intra-cluster ray path lengths.
//!
//! Angles follow the usual spherical convention: elevation is measured from
//! the x-y plane (`asin(z / r)`), azimuth from the x axis (`atan2(y, x)`).

use std::f64::consts::FRAC_PI_2;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{GbsmError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Vec3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Vec3 {
    pub const ZERO: Vec3 = Vec3 {
        x: 0.0,
        y: 0.0,
        z: 0.0,
    };

    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Vec3 { x, y, z }
    }

    /// Unit vector pointing at (`elevation`, `azimuth`).
    pub fn direction(elevation: f64, azimuth: f64) -> Self {
        let (se, ce) = elevation.sin_cos();
        let (sa, ca) = azimuth.sin_cos();
        Vec3::new(ce * ca, ce * sa, se)
    }

    pub fn dot(self, other: Vec3) -> f64 {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    pub fn norm(self) -> f64 {
        self.dot(self).sqrt()
    }

    /// `(elevation, azimuth)` of this vector. The zero vector maps to `(0, 0)`.
    pub fn angles(self) -> (f64, f64) {
        let r = self.norm();
        if r == 0.0 {
            return (0.0, 0.0);
        }
        ((self.z / r).clamp(-1.0, 1.0).asin(), self.y.atan2(self.x))
    }
}

impl Add for Vec3 {
    type Output = Vec3;
    fn add(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl AddAssign for Vec3 {
    fn add_assign(&mut self, o: Vec3) {
        *self = *self + o;
    }
}

impl Sub for Vec3 {
    type Output = Vec3;
    fn sub(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Neg for Vec3 {
    type Output = Vec3;
    fn neg(self) -> Vec3 {
        Vec3::new(-self.x, -self.y, -self.z)
    }
}

impl Mul<f64> for Vec3 {
    type Output = Vec3;
    fn mul(self, s: f64) -> Vec3 {
        Vec3::new(self.x * s, self.y * s, self.z * s)
    }
}

/// Uniform linear array, centered on the array reference point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ArrayGeometry {
    pub element_count: usize,
    /// Element spacing in meters.
    pub spacing: f64,
    /// Array axis elevation, radians.
    pub elevation: f64,
    /// Array axis azimuth, radians.
    pub azimuth: f64,
}

impl ArrayGeometry {
    pub fn new(element_count: usize, spacing: f64, elevation: f64, azimuth: f64) -> Result<Self> {
        if element_count == 0 {
            return Err(GbsmError::domain("array needs at least one element"));
        }
        if !(spacing > 0.0 && spacing.is_finite()) {
            return Err(GbsmError::domain(format!("array spacing must be positive, got {spacing}")));
        }
        if !(-FRAC_PI_2..=FRAC_PI_2).contains(&elevation) {
            return Err(GbsmError::domain(format!(
                "array elevation {elevation} outside [-pi/2, pi/2]"
            )));
        }
        Ok(ArrayGeometry {
            element_count,
            spacing,
            elevation,
            azimuth,
        })
    }

    /// Offset of element `index` (1-based) from the array center.
    ///
    /// Element `i` of `N` sits at `(N - 2i + 1) / 2` spacings along the array
    /// axis, so elements `i` and `N + 1 - i` are mirror images.
    pub fn element_offset(&self, index: usize) -> Result<Vec3> {
        if index == 0 || index > self.element_count {
            return Err(GbsmError::domain(format!(
                "element index {index} outside 1..={}",
                self.element_count
            )));
        }
        let n = self.element_count as f64;
        let along = (n - 2.0 * index as f64 + 1.0) / 2.0 * self.spacing;
        Ok(Vec3::direction(self.elevation, self.azimuth) * along)
    }
}

/// Receiver velocity. The transmitter is fixed.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Motion {
    /// Speed in m/s.
    pub speed: f64,
    pub elevation: f64,
    pub azimuth: f64,
}

impl Motion {
    pub fn new(speed: f64, elevation: f64, azimuth: f64) -> Result<Self> {
        if !(speed >= 0.0 && speed.is_finite()) {
            return Err(GbsmError::domain(format!("speed must be >= 0, got {speed}")));
        }
        Ok(Motion {
            speed,
            elevation,
            azimuth,
        })
    }

    pub fn velocity(&self) -> Vec3 {
        Vec3::direction(self.elevation, self.azimuth) * self.speed
    }
}

/// Position of the receive array center relative to the transmit array center.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LosGeometry {
    pub distance: f64,
    pub elevation: f64,
    pub azimuth: f64,
}

impl LosGeometry {
    pub fn new(distance: f64, elevation: f64, azimuth: f64) -> Result<Self> {
        if !(distance > 0.0 && distance.is_finite()) {
            return Err(GbsmError::domain(format!("LoS distance must be > 0, got {distance}")));
        }
        Ok(LosGeometry {
            distance,
            elevation,
            azimuth,
        })
    }
}

/// Vector from transmit element to receive element at time `t`.
pub fn los_vector(los: &LosGeometry, tx_offset: Vec3, rx_offset: Vec3, motion: &Motion, t: f64) -> Vec3 {
    Vec3::direction(los.elevation, los.azimuth) * los.distance + rx_offset - tx_offset + motion.velocity() * t
}

/// Mirror-point description of one cluster path.
///
/// `total_distance` is the unfolded length of the path Tx - cluster(s) - Rx.
/// The Rx angles give the direction of the unfolded path as seen from the
/// mirror image of the transmitter; the Tx angles give the departure direction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClusterPathState {
    pub total_distance: f64,
    pub rx_elevation: f64,
    pub rx_azimuth: f64,
    pub tx_elevation: f64,
    pub tx_azimuth: f64,
}

impl ClusterPathState {
    fn rx_vector(&self) -> Vec3 {
        Vec3::direction(self.rx_elevation, self.rx_azimuth) * self.total_distance
    }

    fn tx_vector(&self) -> Vec3 {
        Vec3::direction(self.tx_elevation, self.tx_azimuth) * self.total_distance
    }

    /// Path state seen by one element pair, given the state between array
    /// centers. Each side displaces its own end of the unfolded path.
    pub fn at_elements(&self, tx_offset: Vec3, rx_offset: Vec3) -> ClusterPathState {
        let rx = self.rx_vector() + rx_offset;
        let tx = self.tx_vector() + tx_offset;
        let (rx_elevation, rx_azimuth) = rx.angles();
        let (tx_elevation, tx_azimuth) = tx.angles();
        ClusterPathState {
            total_distance: rx.norm() + tx.norm() - self.total_distance,
            rx_elevation,
            rx_azimuth,
            tx_elevation,
            tx_azimuth,
        }
    }
}

/// Advances a cluster path by `dt` seconds of receiver motion.
///
/// The mirror image of the transmitter stays put while the receiver moves, so
/// the unfolded path vector simply gains `v * dt`. Tx angles are unchanged.
pub fn evolve_cluster_path(state: &ClusterPathState, motion: &Motion, dt: f64) -> ClusterPathState {
    if dt == 0.0 || motion.speed == 0.0 {
        return *state;
    }
    let moved = state.rx_vector() + motion.velocity() * dt;
    let (rx_elevation, rx_azimuth) = moved.angles();
    ClusterPathState {
        total_distance: moved.norm(),
        rx_elevation,
        rx_azimuth,
        ..*state
    }
}

/// Cluster path length between one transmit and one receive element.
pub fn per_antenna_cluster_distance(center: &ClusterPathState, tx_offset: Vec3, rx_offset: Vec3) -> f64 {
    center.at_elements(tx_offset, rx_offset).total_distance
}

/// Relative angles of one ray about its cluster center, radians.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct RelativeAngles {
    pub tx_elevation: f64,
    pub tx_azimuth: f64,
    pub rx_elevation: f64,
    pub rx_azimuth: f64,
}

impl RelativeAngles {
    pub fn as_array(&self) -> [f64; 4] {
        [self.tx_elevation, self.tx_azimuth, self.rx_elevation, self.rx_azimuth]
    }
}

/// Length of the Tx-side and Rx-side legs of a ray scattered at relative
/// angles `rel` about the cluster center.
///
/// The vertical and horizontal components of each leg are stretched by
/// `1/cos` of the relative elevation and azimuth respectively. Both summands
/// use the receive-side cluster elevation.
pub fn ray_path_length(center: &ClusterPathState, rel: &RelativeAngles, r_tx: f64, r_rx: f64) -> Result<f64> {
    if !(r_tx > 0.0 && r_rx > 0.0) {
        return Err(GbsmError::domain(format!(
            "distance ratios must be positive, got r_tx={r_tx}, r_rx={r_rx}"
        )));
    }
    if rel.as_array().iter().any(|a| !(a.abs() < FRAC_PI_2)) {
        return Err(GbsmError::domain(format!(
            "relative angle magnitude must be below pi/2, got {rel:?}"
        )));
    }
    Ok(ray_path_length_unchecked(center, rel, r_tx, r_rx))
}

#[inline]
pub(crate) fn ray_path_length_unchecked(center: &ClusterPathState, rel: &RelativeAngles, r_tx: f64, r_rx: f64) -> f64 {
    let d = center.total_distance;
    let (s, c) = center.rx_elevation.sin_cos();
    let vertical = d * s * (r_rx / rel.rx_elevation.cos() + r_tx / rel.tx_elevation.cos());
    let horizontal = d * c * (r_rx / rel.rx_azimuth.cos() + r_tx / rel.tx_azimuth.cos());
    vertical.hypot(horizontal)
}
