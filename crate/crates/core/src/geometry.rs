//! UE motion and panel geometry.
//!
//! Angles are in degrees. Azimuth 0 points along +x and grows counterclockwise.
//! Elevation is measured from the zenith: 0 is straight up, 90 is the horizon.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Result, SimError};
use crate::scenario::Panel;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub const fn new(x: f64, y: f64) -> Self {
        Point2 { x, y }
    }

    pub fn distance(self, other: Point2) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Point3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Point3 {
    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Point3 { x, y, z }
    }
}

/// Wrap an angle into (-180, 180].
pub fn wrap_deg(a: f64) -> f64 {
    let mut w = a % 360.0;
    if w > 180.0 {
        w -= 360.0;
    } else if w <= -180.0 {
        w += 360.0;
    }
    w
}

/// Wrap an angle into [0, 360).
pub fn wrap_360(a: f64) -> f64 {
    let w = a.rem_euclid(360.0);
    if w >= 360.0 {
        0.0
    } else {
        w
    }
}

/// A pointing direction: azimuth and zenith-referenced elevation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Direction {
    pub azimuth_deg: f64,
    pub elevation_deg: f64,
}

/// Direction from `from` towards `to`.
pub fn direction_to(from: Point3, to: Point3) -> Result<Direction> {
    let dx = to.x - from.x;
    let dy = to.y - from.y;
    let dz = to.z - from.z;
    let ground = dx.hypot(dy);
    if ground == 0.0 && dz == 0.0 {
        return Err(SimError::Geometry("coincident positions".into()));
    }
    Ok(Direction {
        azimuth_deg: dy.atan2(dx).to_degrees(),
        elevation_deg: ground.atan2(dz).to_degrees(),
    })
}

/// Offsets `(delta_elevation, delta_azimuth)` of `target` as seen from `origin`
/// relative to `boresight`. The azimuth offset is wrapped into (-180, 180].
pub fn angular_offsets(origin: Point3, boresight: Direction, target: Point3) -> Result<(f64, f64)> {
    let d = direction_to(origin, target)?;
    Ok((
        d.elevation_deg - boresight.elevation_deg,
        wrap_deg(d.azimuth_deg - boresight.azimuth_deg),
    ))
}

/// Edge panel orientation relative to the direction of motion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PanelOrientation {
    pub panel: Panel,
    pub azimuth_offset_deg: f64,
    pub elevation_boresight_deg: f64,
}

impl PanelOrientation {
    pub fn new(panel: Panel, elevation_boresight_deg: f64) -> Self {
        let azimuth_offset_deg = match panel {
            Panel::P1 => -90.0,
            Panel::P2 => 0.0,
            Panel::P3 => 90.0,
        };
        PanelOrientation {
            panel,
            azimuth_offset_deg,
            elevation_boresight_deg,
        }
    }
}

/// Panel boresight for a UE heading. The screen is parallel to the ground, so
/// panel offsets are pure azimuth rotations.
pub fn panel_boresight(heading_deg: f64, panel: &PanelOrientation) -> Direction {
    Direction {
        azimuth_deg: wrap_360(heading_deg + panel.azimuth_offset_deg),
        elevation_deg: panel.elevation_boresight_deg,
    }
}

/// Convex hexagonal simulation region centred on the origin. Vertices lie at
/// azimuths 30 + 60k degrees.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Region {
    pub circumradius: f64,
}

impl Region {
    pub fn apothem(&self) -> f64 {
        self.circumradius * (30f64).to_radians().cos()
    }

    fn normals() -> [(f64, f64); 6] {
        let mut n = [(0.0, 0.0); 6];
        for (k, slot) in n.iter_mut().enumerate() {
            let a = (60.0 * k as f64).to_radians();
            *slot = (a.cos(), a.sin());
        }
        n
    }

    pub fn contains(&self, p: Point2) -> bool {
        let ap = self.apothem();
        Self::normals()
            .iter()
            .all(|(nx, ny)| p.x * nx + p.y * ny <= ap * (1.0 + 1e-12))
    }

    pub fn bounding_box(&self) -> (f64, f64) {
        (self.circumradius, self.apothem())
    }

    pub fn sample_uniform<R: Rng + ?Sized>(&self, rng: &mut R) -> Point2 {
        let (hx, hy) = self.bounding_box();
        loop {
            let p = Point2::new(rng.random_range(-hx..=hx), rng.random_range(-hy..=hy));
            if self.contains(p) {
                return p;
            }
        }
    }

    /// Distance along unit direction `(dx, dy)` from `p` to the boundary and
    /// the normal of the edge that is hit.
    fn exit_distance(&self, p: Point2, dx: f64, dy: f64) -> (f64, (f64, f64)) {
        let ap = self.apothem();
        let mut best = (f64::INFINITY, (0.0, 0.0));
        for (nx, ny) in Self::normals() {
            let rate = dx * nx + dy * ny;
            if rate > 1e-15 {
                let t = ((ap - (p.x * nx + p.y * ny)) / rate).max(0.0);
                if t < best.0 {
                    best = (t, (nx, ny));
                }
            }
        }
        best
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MotionState {
    pub position: Point2,
    pub heading_deg: f64,
    pub speed_mps: f64,
    pub waypoint: Option<Point2>,
    /// Total distance travelled.
    pub odometer_m: f64,
}

impl MotionState {
    pub fn new(position: Point2, heading_deg: f64, speed_mps: f64) -> Self {
        MotionState {
            position,
            heading_deg: wrap_360(heading_deg),
            speed_mps,
            waypoint: None,
            odometer_m: 0.0,
        }
    }
}

fn unit(heading_deg: f64) -> (f64, f64) {
    let r = heading_deg.to_radians();
    (r.cos(), r.sin())
}

fn heading_towards(from: Point2, to: Point2) -> f64 {
    wrap_360((to.y - from.y).atan2(to.x - from.x).to_degrees())
}

/// Pick a waypoint straight ahead at a uniform distance up to the boundary.
fn waypoint_ahead<R: Rng + ?Sized>(region: &Region, m: &MotionState, rng: &mut R) -> Point2 {
    let (dx, dy) = unit(m.heading_deg);
    let (reach, _) = region.exit_distance(m.position, dx, dy);
    let reach = if reach.is_finite() { reach } else { 0.0 };
    let l = rng.random::<f64>() * reach;
    Point2::new(m.position.x + l * dx, m.position.y + l * dy)
}

/// Advance a UE by one time step of random-waypoint motion.
///
/// A UE without a waypoint gets one straight ahead. Reaching a waypoint draws
/// a new uniform waypoint in the region and turns towards it. Touching the
/// boundary reflects the heading specularly and replaces the waypoint by one
/// along the reflected heading.
pub fn step_position<R: Rng + ?Sized>(
    motion: &MotionState,
    dt_s: f64,
    region: &Region,
    rng: &mut R,
) -> MotionState {
    let mut m = *motion;
    let mut remaining = m.speed_mps * dt_s;
    let mut guard = 0;

    loop {
        let (dx, dy) = unit(m.heading_deg);
        let (to_edge, normal) = region.exit_distance(m.position, dx, dy);
        if to_edge <= 1e-12 {
            // On the boundary moving outwards: reflect before moving.
            let (nx, ny) = normal;
            let dot = dx * nx + dy * ny;
            let (rx, ry) = (dx - 2.0 * dot * nx, dy - 2.0 * dot * ny);
            m.heading_deg = wrap_360(ry.atan2(rx).to_degrees());
            m.waypoint = Some(waypoint_ahead(region, &m, rng));
            guard += 1;
            if guard > 16 {
                break;
            }
            continue;
        }
        if m.waypoint.is_none() {
            m.waypoint = Some(waypoint_ahead(region, &m, rng));
        }
        if remaining <= 0.0 {
            break;
        }
        let wp = m.waypoint.expect("waypoint set above");
        let to_wp = m.position.distance(wp);

        if to_wp <= remaining && to_wp <= to_edge {
            m.position = wp;
            m.odometer_m += to_wp;
            remaining -= to_wp;
            let mut next = region.sample_uniform(rng);
            while next.distance(m.position) < 1e-9 {
                next = region.sample_uniform(rng);
            }
            m.heading_deg = heading_towards(m.position, next);
            m.waypoint = Some(next);
        } else if to_edge < remaining {
            m.position = Point2::new(m.position.x + to_edge * dx, m.position.y + to_edge * dy);
            m.odometer_m += to_edge;
            remaining -= to_edge;
        } else {
            m.position = Point2::new(m.position.x + remaining * dx, m.position.y + remaining * dy);
            m.odometer_m += remaining;
            remaining = 0.0;
        }
        guard += 1;
        if guard > 64 {
            break;
        }
    }
    m
}
