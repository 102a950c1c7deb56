//! Norms on R^n, their unit spheres, and the JSON space description.
//!
//! A [`SpaceSpec`] is the declarative (serializable) form of a norm; [`Space`]
//! is the validated, evaluation-ready form. All searches run on planar spaces,
//! where [`Space::norm2`] is the hot path.

use std::f64::consts::TAU;
use std::fmt;

use serde::de::{self, Deserializer, Visitor};
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::planar::{self, Point2};

/// Tolerance for the unit-norm certification of [`UnitVector`].
pub const UNIT_TOL: f64 = 1e-12;

const SYMMETRY_TOL: f64 = 1e-9;

/// A point of R^n with finite coordinates, n >= 2.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct Vector(Vec<f64>);

impl Vector {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.len() < 2 {
            return Err(Error::Domain(format!(
                "vectors need at least 2 coordinates, got {}",
                coords.len()
            )));
        }
        if let Some(bad) = coords.iter().find(|c| !c.is_finite()) {
            return Err(Error::Domain(format!("non-finite coordinate {bad}")));
        }
        Ok(Vector(coords))
    }

    /// Planar vector. Panics on non-finite input.
    pub fn xy(x: f64, y: f64) -> Self {
        assert!(x.is_finite() && y.is_finite(), "non-finite coordinate");
        Vector(vec![x, y])
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0.0)
    }

    pub fn scaled(&self, c: f64) -> Vector {
        Vector(self.0.iter().map(|x| c * x).collect())
    }

    pub fn neg(&self) -> Vector {
        Vector(self.0.iter().map(|x| -x).collect())
    }

    /// The planar coordinates, if this is a 2-vector.
    pub fn as_point(&self) -> Option<Point2> {
        match self.0.as_slice() {
            [x, y] => Some([*x, *y]),
            _ => None,
        }
    }
}

impl From<Point2> for Vector {
    fn from(p: Point2) -> Self {
        Vector::xy(p[0], p[1])
    }
}

impl<'de> Deserialize<'de> for Vector {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let coords = Vec::<f64>::deserialize(deserializer)?;
        Vector::new(coords).map_err(de::Error::custom)
    }
}

/// A vector certified to have norm 1 (within [`UNIT_TOL`]) in some space.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct UnitVector(Vector);

impl UnitVector {
    /// Certifies `vec` as a unit vector of `space`.
    pub fn certify(space: &Space, vec: Vector) -> Result<Self> {
        let n = space.norm(&vec)?;
        if (n - 1.0).abs() > UNIT_TOL {
            return Err(Error::Domain(format!("vector has norm {n}, not 1")));
        }
        Ok(UnitVector(vec))
    }

    pub(crate) fn from_point_unchecked(p: Point2) -> Self {
        UnitVector(Vector::xy(p[0], p[1]))
    }

    pub fn as_vector(&self) -> &Vector {
        &self.0
    }

    pub fn coords(&self) -> &[f64] {
        self.0.coords()
    }

    /// Planar coordinates. Panics for non-planar vectors.
    pub fn point(&self) -> Point2 {
        self.0.as_point().expect("planar unit vector")
    }

    pub fn into_vector(self) -> Vector {
        self.0
    }
}

/// The exponent of an l_p norm; `inf` is encoded explicitly.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Exponent {
    Finite(f64),
    Infinite,
}

impl Serialize for Exponent {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Exponent::Finite(p) => serializer.serialize_f64(*p),
            Exponent::Infinite => serializer.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for Exponent {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        struct ExponentVisitor;

        impl Visitor<'_> for ExponentVisitor {
            type Value = Exponent;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a number >= 1 or the string \"inf\"")
            }

            fn visit_f64<E: de::Error>(self, v: f64) -> std::result::Result<Exponent, E> {
                Ok(Exponent::Finite(v))
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<Exponent, E> {
                Ok(Exponent::Finite(v as f64))
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<Exponent, E> {
                Ok(Exponent::Finite(v as f64))
            }

            fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<Exponent, E> {
                match v {
                    "inf" => Ok(Exponent::Infinite),
                    other => Err(E::invalid_value(de::Unexpected::Str(other), &self)),
                }
            }
        }

        deserializer.deserialize_any(ExponentVisitor)
    }
}

fn default_dim() -> usize {
    2
}

/// Declarative description of a norm on R^dim.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", deny_unknown_fields)]
pub enum SpaceSpec {
    #[serde(rename = "lp")]
    Lp {
        p: Exponent,
        #[serde(default = "default_dim")]
        dim: usize,
    },
    /// The plane with norm `max{|x|_2, mu |x|_inf}`.
    #[serde(rename = "xmu")]
    XMu {
        mu: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        dim: Option<usize>,
    },
    /// Norm whose unit ball is the convex hull of a symmetric vertex set.
    #[serde(rename = "polyhedral")]
    Polyhedral {
        vertices: Vec<Vector>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        dim: Option<usize>,
    },
    /// `max_i scale_i * norm_i(x)`.
    #[serde(rename = "max_of")]
    MaxOf {
        parts: Vec<ScaledSpace>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        dim: Option<usize>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScaledSpace {
    pub scale: f64,
    pub space: SpaceSpec,
}

impl SpaceSpec {
    pub fn l1() -> Self {
        SpaceSpec::Lp {
            p: Exponent::Finite(1.0),
            dim: 2,
        }
    }

    pub fn l2() -> Self {
        SpaceSpec::Lp {
            p: Exponent::Finite(2.0),
            dim: 2,
        }
    }

    pub fn linf() -> Self {
        SpaceSpec::Lp {
            p: Exponent::Infinite,
            dim: 2,
        }
    }

    pub fn lp(p: f64) -> Self {
        SpaceSpec::Lp {
            p: Exponent::Finite(p),
            dim: 2,
        }
    }

    pub fn xmu(mu: f64) -> Self {
        SpaceSpec::XMu { mu, dim: None }
    }

    /// Regular polygon with `k` vertices on the Euclidean unit circle, the
    /// first at (1, 0). `k` must be even for the polygon to be symmetric.
    pub fn regular_polygon(k: usize) -> Self {
        let vertices = (0..k)
            .map(|i| {
                let (s, c) = (TAU * i as f64 / k as f64).sin_cos();
                Vector::xy(c, s)
            })
            .collect();
        SpaceSpec::Polyhedral {
            vertices,
            dim: None,
        }
    }

    pub fn hexagon() -> Self {
        Self::regular_polygon(6)
    }

    /// A short human label, used in reports and test output.
    pub fn label(&self) -> String {
        match self {
            SpaceSpec::Lp {
                p: Exponent::Infinite,
                dim,
            } => format!("l_inf^{dim}"),
            SpaceSpec::Lp {
                p: Exponent::Finite(p),
                dim,
            } => format!("l_{p}^{dim}"),
            SpaceSpec::XMu { mu, .. } => format!("X_{mu}"),
            SpaceSpec::Polyhedral { vertices, .. } => format!("polygon[{}]", vertices.len()),
            SpaceSpec::MaxOf { parts, .. } => format!("max_of[{}]", parts.len()),
        }
    }
}

#[derive(Debug, Clone)]
enum Norm {
    L1,
    L2,
    LInf,
    Lp(f64),
    XMu(f64),
    /// Facet functionals `a` of the unit polygon; the gauge is `max <a, x>`.
    Polygon(Vec<Point2>),
    MaxOf(Vec<(f64, Norm)>),
}

impl Norm {
    fn eval(&self, x: &[f64]) -> f64 {
        match self {
            Norm::L1 => x.iter().map(|c| c.abs()).sum(),
            Norm::L2 => {
                let m = x.iter().fold(0.0f64, |m, c| m.max(c.abs()));
                if m == 0.0 || !(1e-150..1e150).contains(&m) {
                    return scaled_euclid(x, m);
                }
                x.iter().map(|c| c * c).sum::<f64>().sqrt()
            }
            Norm::LInf => x.iter().fold(0.0, |m, c| m.max(c.abs())),
            Norm::Lp(p) => {
                let m = x.iter().fold(0.0f64, |m, c| m.max(c.abs()));
                if m == 0.0 {
                    return 0.0;
                }
                m * x
                    .iter()
                    .map(|c| (c.abs() / m).powf(*p))
                    .sum::<f64>()
                    .powf(1.0 / p)
            }
            Norm::XMu(_) | Norm::Polygon(_) => self.eval2([x[0], x[1]]),
            Norm::MaxOf(parts) => parts
                .iter()
                .fold(0.0, |m, (scale, part)| m.max(scale * part.eval(x))),
        }
    }

    #[inline]
    fn eval2(&self, x: Point2) -> f64 {
        match self {
            Norm::L1 => x[0].abs() + x[1].abs(),
            Norm::L2 => euclid2(x),
            Norm::LInf => x[0].abs().max(x[1].abs()),
            Norm::Lp(p) => {
                let (a, b) = (x[0].abs(), x[1].abs());
                let m = a.max(b);
                if m == 0.0 {
                    return 0.0;
                }
                m * ((a / m).powf(*p) + (b / m).powf(*p)).powf(1.0 / p)
            }
            Norm::XMu(mu) => euclid2(x).max(mu * x[0].abs().max(x[1].abs())),
            Norm::Polygon(facets) => facets
                .iter()
                .fold(0.0, |m, a| m.max(a[0] * x[0] + a[1] * x[1])),
            Norm::MaxOf(parts) => parts
                .iter()
                .fold(0.0, |m, (scale, part)| m.max(scale * part.eval2(x))),
        }
    }
}

/// Euclidean length without underflow or overflow of the squares.
#[inline]
fn euclid2(x: Point2) -> f64 {
    let s = (x[0] * x[0] + x[1] * x[1]).sqrt();
    if (1e-150..1e150).contains(&s) {
        s
    } else {
        x[0].hypot(x[1])
    }
}

fn scaled_euclid(x: &[f64], m: f64) -> f64 {
    if m == 0.0 {
        return 0.0;
    }
    m * x.iter().map(|c| (c / m) * (c / m)).sum::<f64>().sqrt()
}

/// A validated norm, ready for evaluation.
#[derive(Debug, Clone)]
pub struct Space {
    spec: SpaceSpec,
    dim: usize,
    norm: Norm,
}

impl Space {
    pub fn new(spec: SpaceSpec) -> Result<Self> {
        let (norm, dim) = compile(&spec, "")?;
        Ok(Space { spec, dim, norm })
    }

    pub fn l1() -> Self {
        Space::new(SpaceSpec::l1()).expect("valid l1")
    }

    pub fn l2() -> Self {
        Space::new(SpaceSpec::l2()).expect("valid l2")
    }

    pub fn linf() -> Self {
        Space::new(SpaceSpec::linf()).expect("valid l_inf")
    }

    pub fn xmu(mu: f64) -> Result<Self> {
        Space::new(SpaceSpec::xmu(mu))
    }

    pub fn hexagon() -> Self {
        Space::new(SpaceSpec::hexagon()).expect("valid hexagon")
    }

    pub fn spec(&self) -> &SpaceSpec {
        &self.spec
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn label(&self) -> String {
        self.spec.label()
    }

    /// `||x||`.
    pub fn norm(&self, x: &Vector) -> Result<f64> {
        if x.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                actual: x.dim(),
            });
        }
        Ok(self.norm.eval(x.coords()))
    }

    /// Planar fast path of [`Space::norm`]; the space must be planar.
    #[inline]
    pub fn norm2(&self, x: Point2) -> f64 {
        debug_assert_eq!(self.dim, 2);
        self.norm.eval2(x)
    }

    pub(crate) fn require_planar(&self) -> Result<()> {
        if self.dim != 2 {
            return Err(Error::UnsupportedDimension(self.dim));
        }
        Ok(())
    }

    /// `direction / ||direction||`.
    pub fn unit_vector(&self, direction: &Vector) -> Result<UnitVector> {
        let n = self.norm(direction)?;
        if n == 0.0 {
            return Err(Error::Domain("cannot normalize the zero vector".into()));
        }
        UnitVector::certify(self, direction.scaled(1.0 / n))
    }

    /// Unit vector in the Euclidean direction `theta`.
    #[inline]
    pub(crate) fn sphere_point(&self, theta: f64) -> Point2 {
        self.normalize2(planar::direction(theta))
    }

    #[inline]
    pub(crate) fn normalize2(&self, d: Point2) -> Point2 {
        planar::scale(d, 1.0 / self.norm2(d))
    }

    /// Planar sphere grid as raw points: the normalized directions at angles
    /// `2 pi k / n`. Grids are nested: the grid of size `2n` contains the grid
    /// of size `n` bit for bit.
    pub(crate) fn grid_points(&self, n: usize) -> Vec<Point2> {
        (0..n)
            .map(|k| self.normalize2(planar::grid_direction(k, n)))
            .collect()
    }

    /// The sphere discretized at `n_points` equally spaced angles.
    pub fn sphere_grid(&self, n_points: usize) -> Result<Vec<UnitVector>> {
        self.require_planar()?;
        if n_points < 4 {
            return Err(Error::param("n_points", "at least 4 points are required"));
        }
        Ok(self
            .grid_points(n_points)
            .into_iter()
            .map(UnitVector::from_point_unchecked)
            .collect())
    }
}

fn compile(spec: &SpaceSpec, path: &str) -> Result<(Norm, usize)> {
    let at = |field: &str| {
        if path.is_empty() {
            field.to_string()
        } else {
            format!("{path}.{field}")
        }
    };
    match spec {
        SpaceSpec::Lp { p, dim } => {
            if *dim < 2 {
                return Err(Error::invalid_space(
                    at("dim"),
                    "dimension must be at least 2",
                ));
            }
            let norm = match *p {
                Exponent::Infinite => Norm::LInf,
                Exponent::Finite(p) if !p.is_finite() || p < 1.0 => {
                    return Err(Error::invalid_space(
                        at("p"),
                        format!("p = {p} is not >= 1"),
                    ));
                }
                Exponent::Finite(1.0) => Norm::L1,
                Exponent::Finite(2.0) => Norm::L2,
                Exponent::Finite(p) => Norm::Lp(p),
            };
            Ok((norm, *dim))
        }
        SpaceSpec::XMu { mu, dim } => {
            if !mu.is_finite() || *mu < 1.0 {
                return Err(Error::invalid_space(
                    at("mu"),
                    format!("mu = {mu} is not >= 1"),
                ));
            }
            if let Some(d) = dim.filter(|&d| d != 2) {
                return Err(Error::invalid_space(
                    at("dim"),
                    format!("X_mu is planar here, got dim {d}"),
                ));
            }
            Ok((Norm::XMu(*mu), 2))
        }
        SpaceSpec::Polyhedral { vertices, dim } => {
            let facets = polygon_facets(vertices)
                .map_err(|reason| Error::invalid_space(at("vertices"), reason))?;
            if let Some(d) = dim.filter(|&d| d != 2) {
                return Err(Error::invalid_space(
                    at("dim"),
                    format!("polyhedral norms are planar here, got dim {d}"),
                ));
            }
            Ok((Norm::Polygon(facets), 2))
        }
        SpaceSpec::MaxOf { parts, dim } => {
            if parts.is_empty() {
                return Err(Error::invalid_space(
                    at("parts"),
                    "at least one part is required",
                ));
            }
            let mut compiled = Vec::with_capacity(parts.len());
            let mut common = None;
            for (i, part) in parts.iter().enumerate() {
                let part_path = at(&format!("parts[{i}]"));
                if !part.scale.is_finite() || part.scale <= 0.0 {
                    return Err(Error::invalid_space(
                        format!("{part_path}.scale"),
                        format!("scale {} is not > 0", part.scale),
                    ));
                }
                let (norm, d) = compile(&part.space, &format!("{part_path}.space"))?;
                match common {
                    None => common = Some(d),
                    Some(c) if c != d => {
                        return Err(Error::invalid_space(
                            format!("{part_path}.space"),
                            format!("dimension {d} differs from {c}"),
                        ));
                    }
                    Some(_) => {}
                }
                compiled.push((part.scale, norm));
            }
            let d = common.expect("non-empty parts");
            if let Some(given) = dim.filter(|&g| g != d) {
                return Err(Error::invalid_space(
                    at("dim"),
                    format!("dim {given} differs from part dimension {d}"),
                ));
            }
            Ok((Norm::MaxOf(compiled), d))
        }
    }
}

/// Facet functionals of the polygon `conv(V u -V)` after validating that `V`
/// is symmetric and spans the plane.
fn polygon_facets(vertices: &[Vector]) -> std::result::Result<Vec<Point2>, String> {
    let mut pts = Vec::with_capacity(vertices.len());
    for (i, v) in vertices.iter().enumerate() {
        match v.as_point() {
            Some(p) => pts.push(p),
            None => return Err(format!("vertex {i} is not planar (dim {})", v.dim())),
        }
    }
    for (i, p) in pts.iter().enumerate() {
        let scale = 1.0 + p[0].abs().max(p[1].abs());
        let mirrored = pts.iter().any(|q| {
            (q[0] + p[0]).abs() <= SYMMETRY_TOL * scale
                && (q[1] + p[1]).abs() <= SYMMETRY_TOL * scale
        });
        if !mirrored {
            return Err(format!(
                "vertex {i} = {p:?} has no mirror image; the set is not symmetric"
            ));
        }
    }
    let spans = pts
        .iter()
        .any(|p| pts.iter().any(|q| planar::cross(*p, *q).abs() > 1e-12));
    if !spans {
        return Err("vertices do not span the plane".into());
    }

    // Exact symmetrization keeps ||-x|| == ||x|| bit for bit.
    let mut all: Vec<Point2> = pts.iter().flat_map(|p| [*p, [-p[0], -p[1]]]).collect();
    let hull = planar::convex_hull(&mut all);
    let k = hull.len();
    let mut facets = Vec::with_capacity(k);
    for i in 0..k {
        let (p, q) = (hull[i], hull[(i + 1) % k]);
        // Outward normal of a counter-clockwise edge.
        let n = [q[1] - p[1], p[0] - q[0]];
        let offset = n[0] * p[0] + n[1] * p[1];
        if offset <= 0.0 {
            return Err("the origin is not interior to the vertex hull".into());
        }
        facets.push([n[0] / offset, n[1] / offset]);
    }
    Ok(facets)
}
