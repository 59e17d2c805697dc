//! Forward-mode differentiation up to third order.
//!
//! A [`Jet`] carries a value together with its first three derivatives with
//! respect to a single parameter. Closed-form curves are written once as
//! functions of a `Jet` and get exact derivatives for free, which is what the
//! analytic derivative mode relies on.

use std::ops::{Add, Div, Mul, Neg, Sub};

use nalgebra::Vector3;

pub type Vec3 = Vector3<f64>;

/// Value and derivatives `[f, f', f'', f''']` of a scalar function.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet(pub [f64; 4]);

impl Jet {
    pub fn constant(v: f64) -> Self {
        Jet([v, 0.0, 0.0, 0.0])
    }

    /// The independent variable itself, seeded at `v`.
    pub fn variable(v: f64) -> Self {
        Jet([v, 1.0, 0.0, 0.0])
    }

    pub fn value(&self) -> f64 {
        self.0[0]
    }

    pub fn d(&self, order: usize) -> f64 {
        self.0[order]
    }

    /// Applies a unary function given its value and first three derivatives at
    /// `self.value()` (Faà di Bruno to third order).
    pub fn chain(self, f: [f64; 4]) -> Self {
        let [_, g1, g2, g3] = self.0;
        Jet([f[0], f[1] * g1, f[2] * g1 * g1 + f[1] * g2, f[3] * g1 * g1 * g1 + 3.0 * f[2] * g1 * g2 + f[1] * g3])
    }

    pub fn recip(self) -> Self {
        let x = self.value();
        let r = 1.0 / x;
        self.chain([r, -r * r, 2.0 * r * r * r, -6.0 * r * r * r * r])
    }

    pub fn sqrt(self) -> Self {
        let x = self.value();
        let r = x.sqrt();
        self.chain([r, 0.5 / r, -0.25 / (x * r), 0.375 / (x * x * r)])
    }

    pub fn sin(self) -> Self {
        let (s, c) = self.value().sin_cos();
        self.chain([s, c, -s, -c])
    }

    pub fn cos(self) -> Self {
        let (s, c) = self.value().sin_cos();
        self.chain([c, -s, -c, s])
    }

    pub fn atan(self) -> Self {
        let x = self.value();
        let q = 1.0 / (1.0 + x * x);
        self.chain([x.atan(), q, -2.0 * x * q * q, (6.0 * x * x - 2.0) * q * q * q])
    }

    pub fn scale(self, k: f64) -> Self {
        Jet(self.0.map(|v| v * k))
    }
}

impl Add for Jet {
    type Output = Jet;
    fn add(self, o: Jet) -> Jet {
        Jet([self.0[0] + o.0[0], self.0[1] + o.0[1], self.0[2] + o.0[2], self.0[3] + o.0[3]])
    }
}

impl Add<f64> for Jet {
    type Output = Jet;
    fn add(self, k: f64) -> Jet {
        let mut v = self.0;
        v[0] += k;
        Jet(v)
    }
}

impl Sub for Jet {
    type Output = Jet;
    fn sub(self, o: Jet) -> Jet {
        self + (-o)
    }
}

impl Neg for Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        self.scale(-1.0)
    }
}

impl Mul for Jet {
    type Output = Jet;
    fn mul(self, o: Jet) -> Jet {
        let [f0, f1, f2, f3] = self.0;
        let [g0, g1, g2, g3] = o.0;
        Jet([
            f0 * g0,
            f1 * g0 + f0 * g1,
            f2 * g0 + 2.0 * f1 * g1 + f0 * g2,
            f3 * g0 + 3.0 * f2 * g1 + 3.0 * f1 * g2 + f0 * g3,
        ])
    }
}

impl Mul<f64> for Jet {
    type Output = Jet;
    fn mul(self, k: f64) -> Jet {
        self.scale(k)
    }
}

impl Div for Jet {
    type Output = Jet;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, o: Jet) -> Jet {
        self * o.recip()
    }
}

/// Position and first three derivatives of a curve at one parameter value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurveJet {
    pub pos: Vec3,
    pub d1: Vec3,
    pub d2: Vec3,
    pub d3: Vec3,
}

impl CurveJet {
    pub fn from_components(x: Jet, y: Jet, z: Jet) -> Self {
        let v = |k: usize| Vec3::new(x.0[k], y.0[k], z.0[k]);
        CurveJet { pos: v(0), d1: v(1), d2: v(2), d3: v(3) }
    }

    pub fn derivative(&self, order: usize) -> Vec3 {
        match order {
            0 => self.pos,
            1 => self.d1,
            2 => self.d2,
            3 => self.d3,
            _ => Vec3::zeros(),
        }
    }

    /// Re-expresses the jet of `y(t)` as the jet of `y(t(s))`, where `t` is
    /// the jet of the inner parameter map.
    pub fn compose(&self, t: Jet) -> Self {
        let [_, t1, t2, t3] = t.0;
        CurveJet {
            pos: self.pos,
            d1: self.d1 * t1,
            d2: self.d2 * (t1 * t1) + self.d1 * t2,
            d3: self.d3 * (t1 * t1 * t1) + self.d2 * (3.0 * t1 * t2) + self.d1 * t3,
        }
    }

    /// Jet of the product `u(s) * y(s)`.
    pub fn scaled_by(&self, u: Jet) -> Self {
        let [u0, u1, u2, u3] = u.0;
        CurveJet {
            pos: self.pos * u0,
            d1: self.d1 * u0 + self.pos * u1,
            d2: self.d2 * u0 + self.d1 * (2.0 * u1) + self.pos * u2,
            d3: self.d3 * u0 + self.d2 * (3.0 * u1) + self.d1 * (3.0 * u2) + self.pos * u3,
        }
    }
}
