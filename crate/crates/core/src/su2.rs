//! Quaternion arithmetic for SU(2) and its Lie algebra su(2).
//!
//! SU(2) is realized as the unit sphere `a + bi + cj + dk` of the quaternion
//! algebra, and su(2) as the pure quaternions with the orthonormal basis
//! `{i, j, k}`. For a unit vector `C` of su(2), `exp(tC) = cos t + C sin t`.

use std::f64::consts::TAU;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Drift from unit norm above which a product is renormalized.
pub const RENORM_TOL: f64 = 1e-9;
/// Drift from unit norm that is treated as a numerical failure.
pub const DRIFT_LIMIT: f64 = 1e-6;
/// Chains longer than this are checked for drift every this many factors.
pub const RENORM_CHAIN: usize = 16;
/// `|a + 1|` below which the logarithm is considered to hit the branch point.
pub const ANTIPODE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum Su2Error {
    #[error("logarithm undefined at the antipode -1")]
    Antipode,
    #[error("quaternion norm is zero or not finite")]
    Degenerate,
    #[error("quaternion norm {norm} is not within tolerance of 1")]
    NotUnit { norm: f64 },
    #[error("product drifted {deviation:e} away from unit norm")]
    Drift { deviation: f64 },
}

/// A general element `a + bi + cj + dk` of the quaternion algebra.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Quaternion {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl Quaternion {
    pub const ONE: Quaternion = Quaternion::new(1.0, 0.0, 0.0, 0.0);
    pub const I: Quaternion = Quaternion::new(0.0, 1.0, 0.0, 0.0);
    pub const J: Quaternion = Quaternion::new(0.0, 0.0, 1.0, 0.0);
    pub const K: Quaternion = Quaternion::new(0.0, 0.0, 0.0, 1.0);

    pub const fn new(a: f64, b: f64, c: f64, d: f64) -> Self {
        Self { a, b, c, d }
    }

    pub fn scalar(s: f64) -> Self {
        Self::new(s, 0.0, 0.0, 0.0)
    }

    pub fn conj(&self) -> Self {
        Self::new(self.a, -self.b, -self.c, -self.d)
    }

    pub fn norm_sqr(&self) -> f64 {
        self.a * self.a + self.b * self.b + self.c * self.c + self.d * self.d
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn scale(&self, s: f64) -> Self {
        Self::new(self.a * s, self.b * s, self.c * s, self.d * s)
    }

    /// Imaginary part as an su(2) vector.
    pub fn vector(&self) -> Su2Vector {
        Su2Vector::new(self.b, self.c, self.d)
    }

    /// Largest absolute componentwise difference.
    pub fn max_abs_diff(&self, other: &Quaternion) -> f64 {
        (self.a - other.a)
            .abs()
            .max((self.b - other.b).abs())
            .max((self.c - other.c).abs())
            .max((self.d - other.d).abs())
    }
}

impl Add for Quaternion {
    type Output = Quaternion;
    fn add(self, o: Quaternion) -> Quaternion {
        Quaternion::new(self.a + o.a, self.b + o.b, self.c + o.c, self.d + o.d)
    }
}

impl Sub for Quaternion {
    type Output = Quaternion;
    fn sub(self, o: Quaternion) -> Quaternion {
        Quaternion::new(self.a - o.a, self.b - o.b, self.c - o.c, self.d - o.d)
    }
}

impl Neg for Quaternion {
    type Output = Quaternion;
    fn neg(self) -> Quaternion {
        self.scale(-1.0)
    }
}

/// Hamilton product: `i² = j² = k² = ijk = -1`.
pub fn quat_mul(p: Quaternion, q: Quaternion) -> Quaternion {
    Quaternion::new(
        p.a * q.a - p.b * q.b - p.c * q.c - p.d * q.d,
        p.a * q.b + p.b * q.a + p.c * q.d - p.d * q.c,
        p.a * q.c - p.b * q.d + p.c * q.a + p.d * q.b,
        p.a * q.d + p.b * q.c - p.c * q.b + p.d * q.a,
    )
}

impl Mul for Quaternion {
    type Output = Quaternion;
    fn mul(self, q: Quaternion) -> Quaternion {
        quat_mul(self, q)
    }
}

/// An element of su(2) in the basis `{i, j, k}`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Su2Vector {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Su2Vector {
    pub const ZERO: Su2Vector = Su2Vector::new(0.0, 0.0, 0.0);
    pub const I: Su2Vector = Su2Vector::new(1.0, 0.0, 0.0);
    pub const J: Su2Vector = Su2Vector::new(0.0, 1.0, 0.0);
    pub const K: Su2Vector = Su2Vector::new(0.0, 0.0, 1.0);

    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    pub fn dot(&self, o: &Su2Vector) -> f64 {
        self.x * o.x + self.y * o.y + self.z * o.z
    }

    pub fn cross(&self, o: &Su2Vector) -> Su2Vector {
        Su2Vector::new(
            self.y * o.z - self.z * o.y,
            self.z * o.x - self.x * o.z,
            self.x * o.y - self.y * o.x,
        )
    }

    /// Lie bracket `[u, v] = uv - vu = 2 u×v`.
    pub fn bracket(&self, o: &Su2Vector) -> Su2Vector {
        self.cross(o).scale(2.0)
    }

    pub fn norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn scale(&self, s: f64) -> Su2Vector {
        Su2Vector::new(self.x * s, self.y * s, self.z * s)
    }

    pub fn normalized(&self) -> Option<Su2Vector> {
        let n = self.norm();
        (n > 0.0 && n.is_finite()).then(|| self.scale(1.0 / n))
    }

    pub fn to_quaternion(&self) -> Quaternion {
        Quaternion::new(0.0, self.x, self.y, self.z)
    }

    pub fn max_abs_diff(&self, o: &Su2Vector) -> f64 {
        (self.x - o.x)
            .abs()
            .max((self.y - o.y).abs())
            .max((self.z - o.z).abs())
    }
}

impl Add for Su2Vector {
    type Output = Su2Vector;
    fn add(self, o: Su2Vector) -> Su2Vector {
        Su2Vector::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl Sub for Su2Vector {
    type Output = Su2Vector;
    fn sub(self, o: Su2Vector) -> Su2Vector {
        Su2Vector::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Neg for Su2Vector {
    type Output = Su2Vector;
    fn neg(self) -> Su2Vector {
        self.scale(-1.0)
    }
}

/// A unit quaternion, i.e. an element of SU(2).
///
/// Constructors renormalize; the stored value is unit within [`RENORM_TOL`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Quaternion", into = "Quaternion")]
pub struct UnitQuaternion(Quaternion);

impl UnitQuaternion {
    pub const IDENTITY: UnitQuaternion = UnitQuaternion(Quaternion::ONE);

    /// Normalizes `(a, b, c, d)`; fails only for a zero or non-finite input.
    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Result<Self, Su2Error> {
        Self::normalize(Quaternion::new(a, b, c, d))
    }

    pub fn normalize(q: Quaternion) -> Result<Self, Su2Error> {
        let n = q.norm();
        if n == 0.0 || !n.is_finite() {
            return Err(Su2Error::Degenerate);
        }
        Ok(Self(q.scale(1.0 / n)))
    }

    /// Accepts `q` only if its norm is within `tol` of 1, then renormalizes.
    pub fn from_near_unit(q: Quaternion, tol: f64) -> Result<Self, Su2Error> {
        let n = q.norm();
        if !n.is_finite() || (n - 1.0).abs() > tol {
            return Err(Su2Error::NotUnit { norm: n });
        }
        Self::normalize(q)
    }

    #[cfg(test)]
    pub(crate) fn from_raw(q: Quaternion) -> Self {
        Self(q)
    }

    pub fn quaternion(&self) -> Quaternion {
        self.0
    }

    pub fn scalar(&self) -> f64 {
        self.0.a
    }

    pub fn vector(&self) -> Su2Vector {
        self.0.vector()
    }

    pub fn inverse(&self) -> Self {
        Self(self.0.conj())
    }

    pub fn neg(&self) -> Self {
        Self(-self.0)
    }

    /// Rotation angle in SO(3) is twice this; equals `|log(self)|`.
    pub fn angle(&self) -> f64 {
        self.0.vector().norm().atan2(self.0.a)
    }

    pub fn exp(v: Su2Vector) -> Self {
        exp_su2(v)
    }

    pub fn log(&self) -> Result<Su2Vector, Su2Error> {
        log_su2(*self)
    }

    /// `g v g⁻¹`.
    pub fn conj_action(&self, v: Su2Vector) -> Su2Vector {
        conj_action(*self, v)
    }

    pub fn distance(&self, other: &UnitQuaternion) -> f64 {
        distance(*self, *other)
    }

    /// Row-major SO(3) matrix of the conjugation action.
    pub fn to_rotation_matrix(&self) -> [[f64; 3]; 3] {
        let Quaternion { a, b, c, d } = self.0;
        [
            [
                a * a + b * b - c * c - d * d,
                2.0 * (b * c - a * d),
                2.0 * (b * d + a * c),
            ],
            [
                2.0 * (b * c + a * d),
                a * a - b * b + c * c - d * d,
                2.0 * (c * d - a * b),
            ],
            [
                2.0 * (b * d - a * c),
                2.0 * (c * d + a * b),
                a * a - b * b - c * c + d * d,
            ],
        ]
    }

    pub fn max_abs_diff(&self, other: &UnitQuaternion) -> f64 {
        self.0.max_abs_diff(&other.0)
    }
}

impl TryFrom<Quaternion> for UnitQuaternion {
    type Error = Su2Error;
    fn try_from(q: Quaternion) -> Result<Self, Su2Error> {
        Self::from_near_unit(q, 1e-6)
    }
}

impl From<UnitQuaternion> for Quaternion {
    fn from(u: UnitQuaternion) -> Quaternion {
        u.0
    }
}

impl Mul for UnitQuaternion {
    type Output = UnitQuaternion;
    fn mul(self, q: UnitQuaternion) -> UnitQuaternion {
        UnitQuaternion(quat_mul(self.0, q.0))
    }
}

impl fmt::Display for UnitQuaternion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let q = self.0;
        write!(f, "{:.12} {:+.12}i {:+.12}j {:+.12}k", q.a, q.b, q.c, q.d)
    }
}

/// `exp(v) = cos|v| + (v/|v|) sin|v|`.
pub fn exp_su2(v: Su2Vector) -> UnitQuaternion {
    let theta = v.norm();
    if theta == 0.0 {
        return UnitQuaternion::IDENTITY;
    }
    let s = theta.sin() / theta;
    UnitQuaternion(Quaternion::new(theta.cos(), v.x * s, v.y * s, v.z * s))
}

/// `exp(t·C)` for an arbitrary (not necessarily unit) direction `C`.
pub fn exp_along(direction: Su2Vector, t: f64) -> UnitQuaternion {
    exp_su2(direction.scale(t))
}

/// Principal logarithm, `|log q| ∈ [0, π)`.
pub fn log_su2(q: UnitQuaternion) -> Result<Su2Vector, Su2Error> {
    let Quaternion { a, b, c, d } = q.0;
    if (a + 1.0).abs() < ANTIPODE_TOL {
        return Err(Su2Error::Antipode);
    }
    let n = (b * b + c * c + d * d).sqrt();
    if n == 0.0 {
        return Ok(Su2Vector::ZERO);
    }
    // atan2 agrees with arccos(clamp(a)) on the unit sphere and stays accurate
    // near θ = 0 and θ = π.
    let theta = n.atan2(a);
    let s = theta / n;
    Ok(Su2Vector::new(b * s, c * s, d * s))
}

pub fn conj_action(g: UnitQuaternion, v: Su2Vector) -> Su2Vector {
    (g.0 * v.to_quaternion() * g.0.conj()).vector()
}

/// Bi-invariant geodesic distance `|log(p⁻¹q)|`, equal to π at the antipode.
pub fn distance(p: UnitQuaternion, q: UnitQuaternion) -> f64 {
    (p.inverse() * q).angle()
}

/// Ordered product of a chain of unit quaternions.
///
/// Chains longer than [`RENORM_CHAIN`] are checked every [`RENORM_CHAIN`]
/// factors: drift above [`RENORM_TOL`] is renormalized, drift above
/// [`DRIFT_LIMIT`] is an error.
pub fn chain_product<I>(factors: I) -> Result<UnitQuaternion, Su2Error>
where
    I: IntoIterator<Item = UnitQuaternion>,
{
    let mut acc = Quaternion::ONE;
    let mut count = 0usize;
    for f in factors {
        acc = acc * f.0;
        count += 1;
        if count.is_multiple_of(RENORM_CHAIN) {
            acc = check_drift(acc)?;
        }
    }
    Ok(UnitQuaternion(check_drift(acc)?))
}

fn check_drift(q: Quaternion) -> Result<Quaternion, Su2Error> {
    let n = q.norm();
    let deviation = (n - 1.0).abs();
    if !deviation.is_finite() || deviation > DRIFT_LIMIT {
        return Err(Su2Error::Drift { deviation });
    }
    if deviation > RENORM_TOL {
        return Ok(q.scale(1.0 / n));
    }
    Ok(q)
}

/// `q^n` by repeated multiplication under the [`chain_product`] policy.
pub fn power(q: UnitQuaternion, n: usize) -> Result<UnitQuaternion, Su2Error> {
    chain_product(std::iter::repeat_n(q, n))
}

/// Haar-uniform sample of SU(2) (Shoemake's subgroup algorithm).
pub fn haar_random<R: Rng + ?Sized>(rng: &mut R) -> UnitQuaternion {
    let u1: f64 = rng.random();
    let u2: f64 = rng.random();
    let u3: f64 = rng.random();
    let (r1, r2) = ((1.0 - u1).sqrt(), u1.sqrt());
    let (s2, c2) = (TAU * u2).sin_cos();
    let (s3, c3) = (TAU * u3).sin_cos();
    let q = Quaternion::new(r2 * c3, r1 * s2, r1 * c2, r2 * s3);
    UnitQuaternion(q.scale(1.0 / q.norm()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    const TOL: f64 = 1e-12;

    fn uq(a: f64, b: f64, c: f64, d: f64) -> UnitQuaternion {
        UnitQuaternion::new(a, b, c, d).unwrap()
    }

    #[test]
    fn basis_relations() {
        let (i, j, k) = (Quaternion::I, Quaternion::J, Quaternion::K);
        let m1 = Quaternion::scalar(-1.0);
        assert_eq!(i * i, m1);
        assert_eq!(j * j, m1);
        assert_eq!(k * k, m1);
        assert_eq!(i * j, k);
        assert_eq!(j * k, i);
        assert_eq!(k * i, j);
        assert_eq!(i * j * k, m1);
        let q = Quaternion::new(0.3, -0.1, 0.7, 0.2);
        assert_eq!(Quaternion::ONE * q, q);
        assert_eq!(q * Quaternion::ONE, q);
    }

    #[test]
    fn exp_examples() {
        assert_eq!(exp_su2(Su2Vector::ZERO), UnitQuaternion::IDENTITY);
        let minus_one = exp_su2(Su2Vector::I.scale(PI));
        assert!(minus_one.max_abs_diff(&uq(-1.0, 0.0, 0.0, 0.0)) < TOL);
        let i = exp_su2(Su2Vector::I.scale(FRAC_PI_2));
        assert!(i.max_abs_diff(&uq(0.0, 1.0, 0.0, 0.0)) < TOL);
    }

    #[test]
    fn log_examples() {
        assert_eq!(log_su2(UnitQuaternion::IDENTITY).unwrap(), Su2Vector::ZERO);
        let v = log_su2(exp_su2(Su2Vector::I.scale(0.3))).unwrap();
        assert!(v.max_abs_diff(&Su2Vector::I.scale(0.3)) < TOL);
        assert_eq!(
            log_su2(uq(-1.0, 0.0, 0.0, 0.0)),
            Err(Su2Error::Antipode)
        );
    }

    #[test]
    fn log_near_pi_is_accurate() {
        let v = Su2Vector::new(0.2, -0.5, 0.4);
        let v = v.scale((PI - 0.01) / v.norm());
        let back = log_su2(exp_su2(v)).unwrap();
        assert!(back.max_abs_diff(&v) < TOL);
    }

    #[test]
    fn conj_action_quarter_turn() {
        // i j i⁻¹ = i j (-i) = k (-i) = -j
        let g = exp_su2(Su2Vector::I.scale(FRAC_PI_2));
        let oracle = (g.quaternion() * Quaternion::J * g.quaternion().conj()).vector();
        let got = conj_action(g, Su2Vector::J);
        assert!(got.max_abs_diff(&oracle) < TOL);
        assert!(got.max_abs_diff(&Su2Vector::J.scale(-1.0)) < TOL);
        assert_eq!(conj_action(UnitQuaternion::IDENTITY, Su2Vector::K), Su2Vector::K);
    }

    #[test]
    fn distance_examples() {
        let q = uq(0.1, 0.2, -0.3, 0.9);
        assert_eq!(distance(q, q), 0.0);
        assert!((distance(UnitQuaternion::IDENTITY, uq(-1.0, 0.0, 0.0, 0.0)) - PI).abs() < TOL);
        let e = exp_su2(Su2Vector::J.scale(0.2));
        assert!((distance(UnitQuaternion::IDENTITY, e) - 0.2).abs() < TOL);
    }

    #[test]
    fn new_rejects_zero_and_renormalizes() {
        assert_eq!(UnitQuaternion::new(0.0, 0.0, 0.0, 0.0), Err(Su2Error::Degenerate));
        let q = UnitQuaternion::new(2.0, 0.0, 0.0, 0.0).unwrap();
        assert_eq!(q, UnitQuaternion::IDENTITY);
        assert!(UnitQuaternion::from_near_unit(Quaternion::scalar(1.1), 1e-6).is_err());
    }

    #[test]
    fn chain_product_renormalizes_drift() {
        let skewed = UnitQuaternion::from_raw(Quaternion::scalar(1.0 + 5e-9));
        let p = chain_product(std::iter::repeat_n(skewed, 32)).unwrap();
        assert!((p.quaternion().norm() - 1.0).abs() <= RENORM_TOL);

        let bad = UnitQuaternion::from_raw(Quaternion::scalar(1.0 + 1e-5));
        assert!(matches!(
            chain_product(std::iter::repeat_n(bad, 16)),
            Err(Su2Error::Drift { .. })
        ));
    }

    #[test]
    fn rotation_matrix_matches_conjugation() {
        let g = uq(0.3, -0.4, 0.5, 0.6);
        let m = g.to_rotation_matrix();
        let v = Su2Vector::new(0.7, -0.2, 0.1);
        let r = conj_action(g, v);
        let mv = Su2Vector::new(
            m[0][0] * v.x + m[0][1] * v.y + m[0][2] * v.z,
            m[1][0] * v.x + m[1][1] * v.y + m[1][2] * v.z,
            m[2][0] * v.x + m[2][1] * v.y + m[2][2] * v.z,
        );
        assert!(r.max_abs_diff(&mv) < TOL);
    }

    #[test]
    fn serde_rejects_non_unit() {
        let ok: UnitQuaternion = serde_json::from_str(r#"{"a":1.0,"b":0.0,"c":0.0,"d":0.0}"#).unwrap();
        assert_eq!(ok, UnitQuaternion::IDENTITY);
        assert!(serde_json::from_str::<UnitQuaternion>(r#"{"a":2.0,"b":0.0,"c":0.0,"d":0.0}"#).is_err());
    }
}
