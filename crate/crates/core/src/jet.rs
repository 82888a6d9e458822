//! First-order forward-mode jets: a value together with its derivative along
//! one parameter (the polar chart coordinate of a surface).

use std::ops::{Add, Div, Mul, Neg, Sub};

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Jet {
    pub v: f64,
    pub d: f64,
}

impl Jet {
    pub const fn new(v: f64, d: f64) -> Self {
        Jet { v, d }
    }

    pub const fn constant(v: f64) -> Self {
        Jet { v, d: 0.0 }
    }

    pub fn sqrt(self) -> Self {
        let s = self.v.sqrt();
        Jet::new(s, 0.5 * self.d / s)
    }

    pub fn sin(self) -> Self {
        Jet::new(self.v.sin(), self.v.cos() * self.d)
    }

    pub fn cos(self) -> Self {
        Jet::new(self.v.cos(), -self.v.sin() * self.d)
    }

    pub fn powi(self, n: i32) -> Self {
        Jet::new(self.v.powi(n), n as f64 * self.v.powi(n - 1) * self.d)
    }

    pub fn recip(self) -> Self {
        Jet::new(1.0 / self.v, -self.d / (self.v * self.v))
    }

    pub fn scale(self, k: f64) -> Self {
        Jet::new(k * self.v, k * self.d)
    }

    /// Apply a scalar function given its value and derivative at `self.v`.
    pub fn chain(self, value: f64, slope: f64) -> Self {
        Jet::new(value, slope * self.d)
    }
}

impl Add for Jet {
    type Output = Jet;
    fn add(self, o: Jet) -> Jet {
        Jet::new(self.v + o.v, self.d + o.d)
    }
}

impl Sub for Jet {
    type Output = Jet;
    fn sub(self, o: Jet) -> Jet {
        Jet::new(self.v - o.v, self.d - o.d)
    }
}

impl Mul for Jet {
    type Output = Jet;
    fn mul(self, o: Jet) -> Jet {
        Jet::new(self.v * o.v, self.d * o.v + self.v * o.d)
    }
}

impl Div for Jet {
    type Output = Jet;
    fn div(self, o: Jet) -> Jet {
        Jet::new(self.v / o.v, (self.d * o.v - self.v * o.d) / (o.v * o.v))
    }
}

impl Neg for Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        Jet::new(-self.v, -self.d)
    }
}

impl Add<f64> for Jet {
    type Output = Jet;
    fn add(self, o: f64) -> Jet {
        Jet::new(self.v + o, self.d)
    }
}

impl Sub<f64> for Jet {
    type Output = Jet;
    fn sub(self, o: f64) -> Jet {
        Jet::new(self.v - o, self.d)
    }
}

impl Mul<f64> for Jet {
    type Output = Jet;
    fn mul(self, o: f64) -> Jet {
        self.scale(o)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_and_quotient_rules() {
        // f(x) = x^2 sin x / (1 + x) at x = 0.7
        let x = Jet::new(0.7, 1.0);
        let f = x * x * x.sin() / (x + 1.0);
        let h = 1e-6;
        let g = |x: f64| x * x * x.sin() / (1.0 + x);
        let fd = (g(0.7 + h) - g(0.7 - h)) / (2.0 * h);
        assert!((f.v - g(0.7)).abs() < 1e-15);
        assert!((f.d - fd).abs() < 1e-9);
    }

    #[test]
    fn sqrt_and_powers() {
        let x = Jet::new(2.0, 3.0);
        assert!((x.sqrt().d - 3.0 / (2.0 * 2f64.sqrt())).abs() < 1e-15);
        assert_eq!(x.powi(3).d, 3.0 * 4.0 * 3.0);
        assert!((x.recip().d + 3.0 / 4.0).abs() < 1e-15);
    }
}
