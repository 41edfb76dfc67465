use thiserror::Error;

/// Multiplicities are merged when polished roots sit closer than this,
/// relative to `max(1, |root|)`.
const MERGE_RADIUS: f64 = 1e-8;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PolynomialError {
    #[error("degree {0} is above the supported maximum of 4")]
    DegreeTooHigh(usize),
    #[error("all coefficients are zero")]
    Zero,
    #[error("expected degree {expected}, got {got} after normalization")]
    WrongDegree { expected: usize, got: usize },
    #[error("non-finite coefficient")]
    NonFinite,
}

/// Coefficients `c0 + c1 x + ... + cd x^d` with `d <= 4`; trailing zeros are
/// stripped so the leading coefficient is nonzero.
#[derive(Clone, Debug, PartialEq)]
pub struct PolynomialRealCoeffs {
    c: Vec<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RealRoot {
    pub value: f64,
    pub multiplicity: usize,
}

impl PolynomialRealCoeffs {
    pub fn new(coeffs: &[f64]) -> Result<Self, PolynomialError> {
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err(PolynomialError::NonFinite);
        }
        let mut c = coeffs.to_vec();
        while c.last() == Some(&0.0) {
            c.pop();
        }
        if c.is_empty() {
            return Err(PolynomialError::Zero);
        }
        if c.len() > 5 {
            return Err(PolynomialError::DegreeTooHigh(c.len() - 1));
        }
        Ok(Self { c })
    }

    pub fn degree(&self) -> usize {
        self.c.len() - 1
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.c
    }

    pub fn max_coeff(&self) -> f64 {
        self.c.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.c.iter().rev().fold(0.0, |acc, &ci| acc * x + ci)
    }

    pub fn eval_with_derivative(&self, x: f64) -> (f64, f64) {
        let mut p = 0.0;
        let mut dp = 0.0;
        for &ci in self.c.iter().rev() {
            dp = dp * x + p;
            p = p * x + ci;
        }
        (p, dp)
    }

    /// Newton steps that are kept only while they shrink |p|.
    fn polish(&self, mut x: f64) -> f64 {
        let mut best = self.eval(x).abs();
        for _ in 0..4 {
            let (p, dp) = self.eval_with_derivative(x);
            if dp == 0.0 || p == 0.0 {
                break;
            }
            let next = x - p / dp;
            let r = self.eval(next).abs();
            if !(r < best) {
                break;
            }
            best = r;
            x = next;
        }
        x
    }

    /// All real roots, ascending, with multiplicities.
    pub fn real_roots(&self) -> Vec<RealRoot> {
        let raw = match self.degree() {
            0 => Vec::new(),
            1 => vec![-self.c[0] / self.c[1]],
            2 => quadratic(self.c[2], self.c[1], self.c[0]),
            3 => cubic(self.c[3], self.c[2], self.c[1], self.c[0]),
            _ => quartic(self.c[4], self.c[3], self.c[2], self.c[1], self.c[0]),
        };
        let polished: Vec<f64> = raw.into_iter().map(|x| self.polish(x)).collect();
        merge(polished)
    }
}

fn merge(mut xs: Vec<f64>) -> Vec<RealRoot> {
    xs.sort_by(f64::total_cmp);
    let mut out: Vec<RealRoot> = Vec::new();
    let mut group: Vec<f64> = Vec::new();
    for x in xs {
        if let Some(&first) = group.first() {
            if (x - first).abs() > MERGE_RADIUS * first.abs().max(1.0) {
                out.push(collapse(&group));
                group.clear();
            }
        }
        group.push(x);
    }
    if !group.is_empty() {
        out.push(collapse(&group));
    }
    out
}

fn collapse(group: &[f64]) -> RealRoot {
    RealRoot {
        value: group.iter().sum::<f64>() / group.len() as f64,
        multiplicity: group.len(),
    }
}

/// Real roots of `a x² + b x + c`, each repeated by multiplicity.
fn quadratic(a: f64, b: f64, c: f64) -> Vec<f64> {
    let disc = b * b - 4.0 * a * c;
    let tol = 1e-14 * (b * b + (4.0 * a * c).abs());
    if disc < -tol {
        return Vec::new();
    }
    if disc <= tol {
        let x = -b / (2.0 * a);
        return vec![x, x];
    }
    // avoids cancellation in the smaller root
    let q = -0.5 * (b + b.signum() * disc.sqrt());
    let q = if q == 0.0 { -0.5 * disc.sqrt() } else { q };
    vec![q / a, c / q]
}

fn cubic(a3: f64, a2: f64, a1: f64, a0: f64) -> Vec<f64> {
    let (a, b, c) = (a2 / a3, a1 / a3, a0 / a3);
    let shift = a / 3.0;
    let p = b - a * a / 3.0;
    let q = 2.0 * a * a * a / 27.0 - a * b / 3.0 + c;
    let h = 0.5 * q;
    let t = p / 3.0;
    let disc = h * h + t * t * t;
    let scale = h * h + (t * t * t).abs();
    if scale == 0.0 {
        return vec![-shift; 3];
    }
    let tol = 1e-12 * scale;
    let roots_t = if disc > tol {
        let s = disc.sqrt();
        let u = (-h - h.signum() * s).cbrt();
        let u = if u == 0.0 { (-h + s).cbrt() } else { u };
        vec![if u == 0.0 { 0.0 } else { u - t / u }]
    } else if disc >= -tol {
        if p == 0.0 {
            vec![0.0; 3]
        } else {
            let simple = 3.0 * q / p;
            let double = -1.5 * q / p;
            vec![simple, double, double]
        }
    } else {
        let r = 2.0 * (-t).sqrt();
        let arg = (h / (t * (-t).sqrt())).clamp(-1.0, 1.0);
        let phi = arg.acos() / 3.0;
        let tau = 2.0 * std::f64::consts::PI / 3.0;
        vec![r * phi.cos(), r * (phi - tau).cos(), r * (phi + tau).cos()]
    };
    roots_t.into_iter().map(|x| x - shift).collect()
}

fn quartic(a4: f64, a3: f64, a2: f64, a1: f64, a0: f64) -> Vec<f64> {
    let (a, b, c, d) = (a3 / a4, a2 / a4, a1 / a4, a0 / a4);
    let shift = a / 4.0;
    let p = b - 3.0 * a * a / 8.0;
    let q = c - a * b / 2.0 + a * a * a / 8.0;
    let r = d - a * c / 4.0 + a * a * b / 16.0 - 3.0 * a * a * a * a / 256.0;
    let scale = p.abs().sqrt().max(q.abs().cbrt()).max(r.abs().sqrt().sqrt()).max(1e-300);
    let mut ys = Vec::new();
    if q.abs() <= 1e-14 * scale * scale * scale {
        for y2 in quadratic(1.0, p, r) {
            if y2 > 0.0 {
                ys.push(y2.sqrt());
                ys.push(-y2.sqrt());
            } else if y2 >= -1e-14 * scale * scale {
                ys.push(0.0);
            }
        }
    } else {
        let m = cubic(8.0, 8.0 * p, 2.0 * p * p - 8.0 * r, -q * q)
            .into_iter()
            .fold(f64::NEG_INFINITY, f64::max);
        let m = m.max(f64::MIN_POSITIVE);
        let s = (2.0 * m).sqrt();
        let k = q / (2.0 * s);
        ys.extend(quadratic(1.0, -s, 0.5 * p + m + k));
        ys.extend(quadratic(1.0, s, 0.5 * p + m - k));
    }
    ys.into_iter().map(|y| y - shift).collect()
}

/// Real roots of a polynomial of degree at most four given as `c0..cd`.
pub fn real_roots(coeffs: &[f64]) -> Result<Vec<RealRoot>, PolynomialError> {
    Ok(PolynomialRealCoeffs::new(coeffs)?.real_roots())
}

fn with_degree(coeffs: &[f64], expected: usize) -> Result<Vec<RealRoot>, PolynomialError> {
    let p = PolynomialRealCoeffs::new(coeffs)?;
    if p.degree() != expected {
        return Err(PolynomialError::WrongDegree { expected, got: p.degree() });
    }
    Ok(p.real_roots())
}

pub fn real_roots_quadratic(c: [f64; 3]) -> Result<Vec<RealRoot>, PolynomialError> {
    with_degree(&c, 2)
}

pub fn real_roots_cubic(c: [f64; 4]) -> Result<Vec<RealRoot>, PolynomialError> {
    with_degree(&c, 3)
}

pub fn real_roots_quartic(c: [f64; 5]) -> Result<Vec<RealRoot>, PolynomialError> {
    with_degree(&c, 4)
}
