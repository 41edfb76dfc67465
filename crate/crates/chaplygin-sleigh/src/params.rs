use std::f64::consts::PI;

use liegroup_core::HelicalDisplacement;
use nalgebra::Vector3;

use crate::SleighError;

/// Rotation increments closer than this to ±π are rejected by the chart.
pub const TANGENT_MARGIN: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SleighParams {
    m: f64,
    j: f64,
    a: f64,
    b: f64,
}

impl SleighParams {
    /// `j` is the moment of inertia about the contact point; `(a, b)` is the
    /// mass center in the body frame.
    pub fn new(m: f64, j: f64, a: f64, b: f64) -> Result<Self, SleighError> {
        if ![m, j, a, b].iter().all(|x| x.is_finite()) {
            return Err(SleighError::NonFinite);
        }
        if m <= 0.0 || j <= 0.0 {
            return Err(SleighError::NotPositive { m, j });
        }
        Ok(Self { m, j, a, b })
    }

    pub fn m(&self) -> f64 {
        self.m
    }

    pub fn j(&self) -> f64 {
        self.j
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    /// `J + m(a² + b²)`.
    pub fn k(&self) -> f64 {
        self.j + self.m * (self.a * self.a + self.b * self.b)
    }

    /// `J + m a²`.
    pub fn ja(&self) -> f64 {
        self.j + self.m * self.a * self.a
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct SleighMomentum {
    pub p_theta: f64,
    pub p1: f64,
    pub p2: f64,
}

impl SleighMomentum {
    pub fn new(p_theta: f64, p1: f64, p2: f64) -> Self {
        Self { p_theta, p1, p2 }
    }

    pub fn from_vector(v: &Vector3<f64>) -> Self {
        Self::new(v.x, v.y, v.z)
    }

    pub fn as_vector(&self) -> Vector3<f64> {
        Vector3::new(self.p_theta, self.p1, self.p2)
    }
}

/// Admissible one-step displacement stored in the `(Δθ, V1)` chart; `V2`
/// follows from the constraint.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SleighDisplacement {
    dtheta: f64,
    v1: f64,
}

impl SleighDisplacement {
    pub const ZERO: Self = Self { dtheta: 0.0, v1: 0.0 };

    pub fn new(dtheta: f64, v1: f64) -> Result<Self, SleighError> {
        if !dtheta.is_finite() || !v1.is_finite() {
            return Err(SleighError::NonFinite);
        }
        if dtheta.abs() >= PI - TANGENT_MARGIN {
            return Err(SleighError::NearSingularTangent(dtheta));
        }
        Ok(Self { dtheta, v1 })
    }

    /// Accepts a full triple if it satisfies the constraint within `tol`.
    pub fn from_helical(d: &HelicalDisplacement, tol: f64) -> Result<Self, SleighError> {
        let r = constraint_residual(d);
        if !(r.abs() <= tol) {
            return Err(SleighError::ConstraintViolated(r));
        }
        Self::new(d.dtheta, d.t1)
    }

    pub fn dtheta(&self) -> f64 {
        self.dtheta
    }

    pub fn v1(&self) -> f64 {
        self.v1
    }

    pub fn v2(&self) -> f64 {
        self.v1 * (0.5 * self.dtheta).tan()
    }

    pub fn as_helical(&self) -> HelicalDisplacement {
        HelicalDisplacement { dtheta: self.dtheta, t1: self.v1, t2: self.v2() }
    }

    /// The displacement that undoes this one; it is again admissible.
    pub fn inverse(&self) -> Self {
        Self { dtheta: -self.dtheta, v1: -self.v1 }
    }
}

/// `V1(1 − cos Δθ) − V2 sin Δθ`.
pub fn constraint_residual(d: &HelicalDisplacement) -> f64 {
    let (s, c) = d.dtheta.sin_cos();
    d.t1 * (1.0 - c) - d.t2 * s
}

pub fn v2_from_constraint(dtheta: f64, v1: f64) -> Result<f64, SleighError> {
    Ok(SleighDisplacement::new(dtheta, v1)?.v2())
}

/// The rejected constraint `V2 = 0`, kept for comparison runs.
pub fn naive_constraint_v2(_dtheta: f64, _v1: f64) -> f64 {
    0.0
}

/// `(p_θ, p̂1, z)` with `p̂1 = a p1 + 2ma²` and `z = sin Δθ`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HatCoords {
    pub p_theta: f64,
    pub p_hat1: f64,
    pub z: f64,
}

impl HatCoords {
    pub fn new(p_theta: f64, p_hat1: f64, z: f64) -> Option<Self> {
        (z.abs() <= 1.0).then_some(Self { p_theta, p_hat1, z })
    }

    pub fn from_momentum(p: &SleighMomentum, dtheta: f64, params: &SleighParams) -> Self {
        Self { p_theta: p.p_theta, p_hat1: p_hat1(p.p1, params), z: dtheta.sin() }
    }
}

pub fn p_hat1(p1: f64, params: &SleighParams) -> f64 {
    params.a * p1 + 2.0 * params.m * params.a * params.a
}
