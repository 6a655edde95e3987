//! Room geometry, materials, directivities and microphone position generation.
//!
//! Rooms are flat-ceiling prisms: a simple floor polygon extruded to a given
//! height. Surfaces are indexed walls-first (one per floor edge, in vertex
//! order), then floor, then ceiling.

use std::collections::BTreeMap;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geom::{self, Point2, Vec3};

/// Octave band centers used throughout the simulator, in Hz. The top band
/// spans 22.6–45.2 kHz and carries the ultrasonic absorption values.
pub const OCTAVE_BANDS: [f64; 9] = [
    125.0, 250.0, 500.0, 1000.0, 2000.0, 4000.0, 8000.0, 16000.0, 32000.0,
];

/// Sabine constant 24·ln10/c at c ≈ 343 m/s, in s/m.
pub const SABINE_CONSTANT: f64 = 0.1611;

#[derive(Debug, Error)]
pub enum SceneError {
    #[error("floor polygon is self-intersecting or has fewer than 3 vertices")]
    SelfIntersectingPolygon,
    #[error("room height must be positive, got {0}")]
    NonPositiveHeight(f64),
    #[error("rt60_target requires an axis-aligned rectangular (shoebox) floor")]
    Rt60OnNonShoebox,
    #[error("room must define either per-surface materials or rt60_target, not {0}")]
    AmbiguousAbsorption(&'static str),
    #[error("material '{name}': absorption coefficient {value} outside [0, 1]")]
    AbsorptionCoefficient { name: String, value: f64 },
    #[error("computed Sabine absorption {0:.4} is not in (0, 1); room too small or RT60 too short")]
    AbsorptionOutOfRange(f64),
    #[error("temperature {0} °C outside supported range [-20, 50]")]
    TemperatureOutOfRange(f64),
    #[error("relative humidity {0} outside [0, 1]")]
    HumidityOutOfRange(f64),
    #[error("no grid point survives the margin filter")]
    EmptyGrid,
    #[error("rejection sampling exhausted after {0} attempts")]
    SamplingExhausted(usize),
    #[error("transducer '{0}' is not strictly inside the room")]
    TransducerOutsideRoom(String),
    #[error("directivity pattern parameter {0} outside [0, 1]")]
    PatternOutOfRange(f64),
    #[error("directivity orientation must have unit norm, got {0}")]
    NonUnitOrientation(f64),
}

/// Air temperature and humidity; drives sound speed and air absorption.
#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq)]
pub struct Environment {
    pub temperature_c: f64,
    pub relative_humidity: f64,
}

impl Default for Environment {
    fn default() -> Self {
        Self {
            temperature_c: 20.0,
            relative_humidity: 0.5,
        }
    }
}

impl Environment {
    pub fn validate(&self) -> Result<(), SceneError> {
        if !(-20.0..=50.0).contains(&self.temperature_c) {
            return Err(SceneError::TemperatureOutOfRange(self.temperature_c));
        }
        if !(0.0..=1.0).contains(&self.relative_humidity) {
            return Err(SceneError::HumidityOutOfRange(self.relative_humidity));
        }
        Ok(())
    }
}

/// Surface material described by banded energy absorption coefficients.
///
/// Keys are band center frequencies in Hz. Bands that are not listed take the
/// value of the nearest listed center, so a flat material can be given with a
/// single entry.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct Material {
    pub name: String,
    pub band_absorption: BTreeMap<u32, f64>,
}

impl Material {
    pub fn uniform(name: &str, alpha: f64) -> Self {
        Self {
            name: name.to_string(),
            band_absorption: BTreeMap::from([(1000, alpha)]),
        }
    }

    /// Plywood default: the audible octave values of thin wood paneling plus
    /// the measured ultrasonic mean of 0.43 in the 16/32 kHz bands.
    pub fn plywood() -> Self {
        Self {
            name: "plywood".to_string(),
            band_absorption: BTreeMap::from([
                (125, 0.28),
                (250, 0.22),
                (500, 0.17),
                (1000, 0.09),
                (2000, 0.10),
                (4000, 0.11),
                (8000, 0.11),
                (16000, 0.43),
                (32000, 0.43),
            ]),
        }
    }

    pub fn validate(&self) -> Result<(), SceneError> {
        for (_, &a) in &self.band_absorption {
            if !(0.0..=1.0).contains(&a) {
                return Err(SceneError::AbsorptionCoefficient {
                    name: self.name.clone(),
                    value: a,
                });
            }
        }
        if self.band_absorption.is_empty() {
            return Err(SceneError::AbsorptionCoefficient {
                name: self.name.clone(),
                value: f64::NAN,
            });
        }
        Ok(())
    }

    /// Energy absorption at the given band center, nearest-neighbor extended.
    pub fn absorption_at(&self, band_hz: f64) -> f64 {
        let mut best = f64::INFINITY;
        let mut value = 0.0;
        for (&f, &a) in &self.band_absorption {
            let d = (f as f64 - band_hz).abs();
            if d < best {
                best = d;
                value = a;
            }
        }
        value
    }

    /// Absorption resolved onto the global octave band list.
    pub fn band_vector(&self) -> [f64; OCTAVE_BANDS.len()] {
        let mut out = [0.0; OCTAVE_BANDS.len()];
        for (i, &f) in OCTAVE_BANDS.iter().enumerate() {
            out[i] = self.absorption_at(f);
        }
        out
    }
}

/// Cardioid-family directivity: gain = p + (1−p)·cos θ, frequency independent.
#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq)]
pub struct Directivity {
    /// 1 = omnidirectional, 0.5 = cardioid, 0.25 = hypercardioid, 0 = figure-eight.
    pub pattern: f64,
    pub orientation: [f64; 3],
}

impl Directivity {
    pub fn omni() -> Self {
        Self {
            pattern: 1.0,
            orientation: [1.0, 0.0, 0.0],
        }
    }

    pub fn validate(&self) -> Result<(), SceneError> {
        if !(0.0..=1.0).contains(&self.pattern) {
            return Err(SceneError::PatternOutOfRange(self.pattern));
        }
        let norm = Vec3::from(self.orientation).norm();
        if (norm - 1.0).abs() > 1e-9 {
            return Err(SceneError::NonUnitOrientation(norm));
        }
        Ok(())
    }

    /// Amplitude gain toward a unit direction vector.
    pub fn gain(&self, direction_to_target: &Vec3) -> f64 {
        let cos = Vec3::from(self.orientation).dot(direction_to_target);
        self.pattern + (1.0 - self.pattern) * cos
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TransducerKind {
    Speaker,
    Microphone,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Transducer {
    pub id: String,
    pub kind: TransducerKind,
    pub position: [f64; 3],
    pub directivity: Directivity,
    /// Output sample rate; meaningful for microphones.
    pub sample_rate_hz: Option<u32>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SurfaceKind {
    /// Wall erected over floor edge (v[i], v[i+1]).
    Wall(usize),
    Floor,
    Ceiling,
}

/// One planar boundary surface of the prism with its outward normal.
#[derive(Debug, Clone)]
pub struct Surface {
    pub id: usize,
    pub kind: SurfaceKind,
    pub normal: Vec3,
    /// Any point on the surface plane.
    pub point: Vec3,
    pub area: f64,
    pub material: Material,
}

impl Surface {
    /// Signed distance of `p` from the plane, positive on the outward side.
    pub fn signed_distance(&self, p: &Vec3) -> f64 {
        self.normal.dot(&(p - self.point))
    }

    /// Mirror image of `p` across the surface plane.
    pub fn mirror(&self, p: &Vec3) -> Vec3 {
        p - 2.0 * self.signed_distance(p) * self.normal
    }
}

/// Raw room description before validation.
#[derive(Debug, Clone)]
pub struct RoomSpec {
    pub floor_vertices: Vec<Point2>,
    pub height: f64,
    /// Per-surface materials, walls-first then floor, ceiling. Empty when
    /// rt60_target drives the absorption.
    pub surface_materials: Vec<Material>,
    pub rt60_target: Option<f64>,
    pub environment: Environment,
}

/// Validated room with precomputed planes, areas and volume.
#[derive(Debug, Clone)]
pub struct Room {
    pub floor_vertices: Vec<Point2>,
    pub height: f64,
    pub surfaces: Vec<Surface>,
    pub environment: Environment,
    pub floor_area: f64,
    pub volume: f64,
    pub total_surface_area: f64,
    pub is_shoebox: bool,
    pub rt60_target: Option<f64>,
    /// Recommended max image order when rt60_target is set.
    pub recommended_max_order: Option<usize>,
}

impl Room {
    pub fn bounding_box(&self) -> (Point2, Point2) {
        geom::bounding_box(&self.floor_vertices)
    }

    /// Shoebox dimensions (Lx, Ly, Lz); valid only when `is_shoebox`.
    pub fn shoebox_dims(&self) -> (f64, f64, f64) {
        let (lo, hi) = self.bounding_box();
        (hi[0] - lo[0], hi[1] - lo[1], self.height)
    }

    /// Origin corner of a shoebox room.
    pub fn shoebox_origin(&self) -> Vec3 {
        let (lo, _) = self.bounding_box();
        Vec3::new(lo[0], lo[1], 0.0)
    }

    pub fn contains(&self, p: &Vec3) -> bool {
        p.z > 0.0 && p.z < self.height && geom::point_in_polygon([p.x, p.y], &self.floor_vertices)
    }

    /// True if `p` is inside with at least `margin` clearance to every surface.
    pub fn contains_with_margin(&self, p: &Vec3, margin: f64) -> bool {
        let eps = 1e-9;
        self.contains(p)
            && p.z >= margin - eps
            && p.z <= self.height - margin + eps
            && geom::distance_to_boundary([p.x, p.y], &self.floor_vertices) >= margin - eps
    }
}

/// Checks geometry and materials and precomputes surface planes.
pub fn validate_room(spec: &RoomSpec) -> Result<Room, SceneError> {
    if spec.height <= 0.0 {
        return Err(SceneError::NonPositiveHeight(spec.height));
    }
    if !geom::is_simple_polygon(&spec.floor_vertices) {
        return Err(SceneError::SelfIntersectingPolygon);
    }
    spec.environment.validate()?;

    // Normalize to counter-clockwise winding so wall normals point outward.
    let mut vertices = spec.floor_vertices.clone();
    let mut materials = spec.surface_materials.clone();
    if geom::signed_area(&vertices) < 0.0 {
        vertices.reverse();
        // After reversal, new edge j runs old[n-1-j] → old[n-2-j], which is
        // the old edge (n-2-j); remap wall materials to follow their edges.
        let n = vertices.len();
        if materials.len() == n + 2 {
            let walls: Vec<Material> = (0..n)
                .map(|j| materials[(n as i64 - 2 - j as i64).rem_euclid(n as i64) as usize].clone())
                .collect();
            for (i, m) in walls.into_iter().enumerate() {
                materials[i] = m;
            }
        }
    }

    let n = vertices.len();
    let is_shoebox = geom::is_axis_aligned_rectangle(&vertices);
    let floor_area = geom::signed_area(&vertices);
    let volume = floor_area * spec.height;

    match (spec.rt60_target, materials.is_empty()) {
        (Some(_), false) => return Err(SceneError::AmbiguousAbsorption("both")),
        (None, true) => return Err(SceneError::AmbiguousAbsorption("neither")),
        (Some(_), true) if !is_shoebox => return Err(SceneError::Rt60OnNonShoebox),
        _ => {}
    }

    // Surface areas first: Sabine needs the totals before materials exist.
    let mut wall_areas = Vec::with_capacity(n);
    for i in 0..n {
        let a = vertices[i];
        let b = vertices[(i + 1) % n];
        let len = ((b[0] - a[0]).powi(2) + (b[1] - a[1]).powi(2)).sqrt();
        wall_areas.push(len * spec.height);
    }
    let total_surface_area = wall_areas.iter().sum::<f64>() + 2.0 * floor_area;

    let mut recommended_max_order = None;
    if let Some(rt60) = spec.rt60_target {
        let (lo, hi) = geom::bounding_box(&vertices);
        let dims = [hi[0] - lo[0], hi[1] - lo[1], spec.height];
        let shoebox = ShoeboxSabine {
            volume,
            surface_area: total_surface_area,
            min_dimension: dims.iter().cloned().fold(f64::INFINITY, f64::min),
        };
        let (alpha, order) = inverse_sabine(rt60, &shoebox)?;
        recommended_max_order = Some(order);
        let m = Material::uniform("sabine", alpha);
        materials = vec![m; n + 2];
    }
    for m in &materials {
        m.validate()?;
    }
    debug_assert_eq!(materials.len(), n + 2);

    let mut surfaces = Vec::with_capacity(n + 2);
    for i in 0..n {
        let a = vertices[i];
        let b = vertices[(i + 1) % n];
        // CCW floor polygon: outward wall normal is the right-hand side of the edge.
        let ex = b[0] - a[0];
        let ey = b[1] - a[1];
        let len = (ex * ex + ey * ey).sqrt();
        surfaces.push(Surface {
            id: i,
            kind: SurfaceKind::Wall(i),
            normal: Vec3::new(ey / len, -ex / len, 0.0),
            point: Vec3::new(a[0], a[1], 0.0),
            area: wall_areas[i],
            material: materials[i].clone(),
        });
    }
    surfaces.push(Surface {
        id: n,
        kind: SurfaceKind::Floor,
        normal: Vec3::new(0.0, 0.0, -1.0),
        point: Vec3::zeros(),
        area: floor_area,
        material: materials[n].clone(),
    });
    surfaces.push(Surface {
        id: n + 1,
        kind: SurfaceKind::Ceiling,
        normal: Vec3::new(0.0, 0.0, 1.0),
        point: Vec3::new(vertices[0][0], vertices[0][1], spec.height),
        area: floor_area,
        material: materials[n + 1].clone(),
    });

    Ok(Room {
        floor_vertices: vertices,
        height: spec.height,
        surfaces,
        environment: spec.environment,
        floor_area,
        volume,
        total_surface_area,
        is_shoebox,
        rt60_target: spec.rt60_target,
        recommended_max_order,
    })
}

/// Inputs for the inverse Sabine computation.
pub struct ShoeboxSabine {
    pub volume: f64,
    pub surface_area: f64,
    pub min_dimension: f64,
}

/// Uniform wall absorption and a recommended max image order for a target RT60.
///
/// α = 0.1611·V/(S·RT60); the order is chosen so the longest image path
/// exceeds c·RT60 (shortest mirror period is twice the smallest dimension).
pub fn inverse_sabine(rt60: f64, room: &ShoeboxSabine) -> Result<(f64, usize), SceneError> {
    let alpha = SABINE_CONSTANT * room.volume / (room.surface_area * rt60);
    if !(0.0..1.0).contains(&alpha) || alpha == 0.0 {
        return Err(SceneError::AbsorptionOutOfRange(alpha));
    }
    let c = 343.0;
    let order = (c * rt60 / (2.0 * room.min_dimension)).ceil() as usize;
    Ok((alpha, order.max(1)))
}

/// Forward Sabine: RT60 from a uniform absorption coefficient.
pub fn sabine_rt60(alpha: f64, volume: f64, surface_area: f64) -> f64 {
    SABINE_CONSTANT * volume / (surface_area * alpha)
}

/// Test-grid and train/dev cloud positions for one room.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct PositionSet {
    pub test_grid: Vec<[f64; 3]>,
    pub train_cloud: Vec<[f64; 3]>,
    pub dev_cloud: Vec<[f64; 3]>,
}

/// Regular lattice centered in the margin-shrunk bounding box, filtered to
/// points with at least `margin` clearance inside the room.
pub fn generate_test_grid(room: &Room, spacing: f64, margin: f64) -> Result<Vec<Vec3>, SceneError> {
    assert!(spacing > 0.0 && margin >= 0.0);
    let (lo, hi) = room.bounding_box();
    let lo = [lo[0] + margin, lo[1] + margin, margin];
    let hi = [hi[0] - margin, hi[1] - margin, room.height - margin];

    let mut axes: Vec<Vec<f64>> = Vec::with_capacity(3);
    for k in 0..3 {
        let span = hi[k] - lo[k];
        if span < 0.0 {
            return Err(SceneError::EmptyGrid);
        }
        let count = (span / spacing).floor() as usize + 1;
        let start = lo[k] + (span - (count - 1) as f64 * spacing) / 2.0;
        axes.push((0..count).map(|i| start + i as f64 * spacing).collect());
    }

    let mut points = Vec::new();
    for &x in &axes[0] {
        for &y in &axes[1] {
            for &z in &axes[2] {
                let p = Vec3::new(x, y, z);
                if room.contains_with_margin(&p, margin) {
                    points.push(p);
                }
            }
        }
    }
    if points.is_empty() {
        return Err(SceneError::EmptyGrid);
    }
    Ok(points)
}

/// Uniform random positions inside the margin-shrunk interior, kept clear of
/// the test grid by `min_grid_distance`, split into train and dev clouds.
pub fn generate_train_dev_cloud(
    room: &Room,
    n_total: usize,
    train_ratio: f64,
    margin: f64,
    test_grid: &[Vec3],
    min_grid_distance: f64,
    seed: u64,
) -> Result<(Vec<Vec3>, Vec<Vec3>), SceneError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (lo, hi) = room.bounding_box();
    let max_attempts = 10_000 * n_total.max(1);
    let mut attempts = 0;
    let mut points = Vec::with_capacity(n_total);
    while points.len() < n_total {
        attempts += 1;
        if attempts > max_attempts {
            return Err(SceneError::SamplingExhausted(max_attempts));
        }
        let p = Vec3::new(
            rng.gen_range(lo[0]..hi[0]),
            rng.gen_range(lo[1]..hi[1]),
            rng.gen_range(0.0..room.height),
        );
        if !room.contains_with_margin(&p, margin) {
            continue;
        }
        if test_grid
            .iter()
            .any(|g| (g - p).norm() < min_grid_distance)
        {
            continue;
        }
        points.push(p);
    }
    let n_train = (n_total as f64 * train_ratio).round() as usize;
    let dev = points.split_off(n_train.min(points.len()));
    Ok((points, dev))
}
