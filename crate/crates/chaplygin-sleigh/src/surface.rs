//! The momentum locus in hat coordinates `(p_θ, p̂1, z = sin Δθ)`, `b = 0`.

use crate::{SleighError, SleighParams};

fn centered(params: &SleighParams) -> Result<(), SleighError> {
    if params.b() != 0.0 {
        return Err(SleighError::NeedsCenteredOffset(params.b()));
    }
    Ok(())
}

/// `c0..c3` of `J² z³ − 2J p_θ z² + (p̂1² + 2J p̂1 + p_θ²) z − 2 p_θ p̂1`.
pub fn cubic_coefficients(p_theta: f64, p_hat1: f64, params: &SleighParams) -> Result<[f64; 4], SleighError> {
    centered(params)?;
    let j = params.j();
    Ok([
        -2.0 * p_theta * p_hat1,
        p_hat1 * p_hat1 + 2.0 * j * p_hat1 + p_theta * p_theta,
        -2.0 * j * p_theta,
        j * j,
    ])
}

pub fn cubic_residual(h: &crate::HatCoords, params: &SleighParams) -> Result<f64, SleighError> {
    let c = cubic_coefficients(h.p_theta, h.p_hat1, params)?;
    Ok(((c[3] * h.z + c[2]) * h.z + c[1]) * h.z + c[0])
}

/// Boundary of the region where the projection to `(p_θ, p̂1)` is 3 to 1.
pub fn discriminant_quartic(p_theta: f64, p_hat1: f64, j: f64) -> f64 {
    let (pt2, ph) = (p_theta * p_theta, p_hat1);
    ph.powi(4) + 6.0 * j * ph.powi(3) + ph * ph * (12.0 * j * j + 2.0 * pt2)
        - ph * (10.0 * j * pt2 - 8.0 * j.powi(3))
        + pt2 * pt2
        - j * j * pt2
}

/// `18abcd − 4b³d + b²c² − 4ac³ − 27a²d²` for `a z³ + b z² + c z + d`.
pub fn cubic_discriminant(c: &[f64; 4]) -> f64 {
    let (a, b, cc, d) = (c[3], c[2], c[1], c[0]);
    18.0 * a * b * cc * d - 4.0 * b.powi(3) * d + b * b * cc * cc - 4.0 * a * cc.powi(3) - 27.0 * a * a * d * d
}

/// Zero on the curve where `V1 = 0`, negative inside it.
pub fn ellipse_residual(p_theta: f64, p_hat1: f64, params: &SleighParams) -> f64 {
    let ma2 = params.m() * params.a() * params.a();
    let u = p_theta / params.ja();
    let v = (p_hat1 - ma2) / ma2;
    u * u + v * v - 1.0
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sign {
    Positive,
    Negative,
    Zero,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SurfaceClass {
    /// Sign of `cos Δθ` from the quadrants cut out by the lines `±p_θ − p̂1 = J`.
    pub cos_sign: Sign,
    pub discriminant: f64,
    /// Inside the curve bounded by the discriminant quartic.
    pub multi_valued: bool,
    pub inside_ellipse: bool,
    /// Sign of `V1` read off the ellipse side.
    pub v1_sign: Sign,
}

pub fn surface_classify(p_theta: f64, p_hat1: f64, params: &SleighParams) -> Result<SurfaceClass, SleighError> {
    centered(params)?;
    let j = params.j();
    let l_plus = -p_hat1 + p_theta - j;
    let l_minus = -p_hat1 - p_theta - j;
    let cos_sign = if l_plus == 0.0 || l_minus == 0.0 {
        Sign::Zero
    } else if (l_plus > 0.0) == (l_minus > 0.0) {
        Sign::Positive
    } else {
        Sign::Negative
    };
    let discriminant = discriminant_quartic(p_theta, p_hat1, j);
    let e = ellipse_residual(p_theta, p_hat1, params);
    Ok(SurfaceClass {
        cos_sign,
        discriminant,
        multi_valued: discriminant < 0.0,
        inside_ellipse: e < 0.0,
        v1_sign: if e < 0.0 {
            Sign::Negative
        } else if e > 0.0 {
            Sign::Positive
        } else {
            Sign::Zero
        },
    })
}
