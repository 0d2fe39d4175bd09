//! Taylor-series integration of linear second-order ODEs
//! `P2(y) w'' + P1(y) w' + P0(y) w = 0` with polynomial coefficients whose
//! only singular point is `y = 0`.

use num_complex::Complex64;

const MAX_TERMS: usize = 600;
const TERM_EPS: f64 = 1e-18;

#[derive(Debug, Clone)]
pub struct PolyOde {
    /// Coefficients in ascending powers of y.
    pub p2: Vec<Complex64>,
    pub p1: Vec<Complex64>,
    pub p0: Vec<Complex64>,
}

fn eval_poly(p: &[Complex64], y: f64) -> Complex64 {
    p.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, c| acc * y + c)
}

/// Coefficients of `p(y0 + s)` in powers of `s`.
fn shift_poly(p: &[Complex64], y0: f64) -> Vec<Complex64> {
    let mut out = p.to_vec();
    let n = out.len();
    for i in 0..n {
        for j in (i..n - 1).rev() {
            let t = out[j + 1] * y0;
            out[j] += t;
        }
    }
    out
}

impl PolyOde {
    /// Largest `(|P0/P2|)^{1/2}`, `|P1/P2|` at `y`: a local rate of change.
    pub fn local_rate(&self, y: f64) -> f64 {
        let p2 = eval_poly(&self.p2, y);
        let q0 = (eval_poly(&self.p0, y) / p2).norm().sqrt();
        let q1 = (eval_poly(&self.p1, y) / p2).norm();
        q0.max(q1).max(0.25)
    }

    /// Admissible step length at `y`.
    pub fn step_limit(&self, y: f64) -> f64 {
        (0.5 * y.abs()).min(3.0 / self.local_rate(y))
    }

    /// Scaled Taylor coefficients `b_n = a_n h^n` of the solution about `y0`
    /// with `w(y0) = w`, `w'(y0) = dw`, truncated once negligible. Working
    /// with `b_n` keeps the coefficients finite near the singular point.
    pub fn taylor_scaled(&self, y0: f64, w: Complex64, dw: Complex64, h: f64) -> Vec<Complex64> {
        debug_assert!(h != 0.0);
        let p2 = shift_poly(&self.p2, y0);
        let p1 = shift_poly(&self.p1, y0);
        let p0 = shift_poly(&self.p0, y0);
        let hp: Vec<f64> = (0..p2.len().max(p1.len() + 1).max(p0.len() + 2) + 1).map(|j| h.powi(j as i32)).collect();
        let lead = p2[0];
        let mut b = Vec::with_capacity(64);
        b.push(w);
        b.push(dw * h);
        let mut big = b[0].norm().max(b[1].norm());
        let mut small_run = 0;
        let mut n = 0usize;
        while b.len() < MAX_TERMS {
            let mut acc = Complex64::new(0.0, 0.0);
            for (j, c) in p2.iter().enumerate().skip(1) {
                if j <= n && n + 2 - j >= 2 {
                    let m = n + 2 - j;
                    acc += c * b[m] * (hp[j] * (m * (m - 1)) as f64);
                }
            }
            for (j, c) in p1.iter().enumerate() {
                if j <= n && n + 1 - j >= 1 {
                    let m = n + 1 - j;
                    acc += c * b[m] * (hp[j + 1] * m as f64);
                }
            }
            for (j, c) in p0.iter().enumerate() {
                if j <= n {
                    acc += c * b[n - j] * hp[j + 2];
                }
            }
            let next = -acc / (lead * ((n + 2) * (n + 1)) as f64);
            b.push(next);
            let mag = next.norm();
            big = big.max(mag);
            if mag <= TERM_EPS * big {
                small_run += 1;
                if small_run >= 3 && n >= 6 {
                    break;
                }
            } else {
                small_run = 0;
            }
            n += 1;
        }
        b
    }

    /// `(w, w', w'')` at `y0 + h` from scaled coefficients.
    pub fn eval_scaled(b: &[Complex64], h: f64) -> (Complex64, Complex64, Complex64) {
        let zero = Complex64::new(0.0, 0.0);
        let (mut w, mut dw, mut d2w) = (zero, zero, zero);
        for (n, c) in b.iter().enumerate() {
            w += c;
            if n >= 1 {
                dw += c * n as f64;
            }
            if n >= 2 {
                d2w += c * (n * (n - 1)) as f64;
            }
        }
        (w, dw / h, d2w / (h * h))
    }

    /// `w''` from the equation itself.
    pub fn second_derivative(&self, y: f64, w: Complex64, dw: Complex64) -> Complex64 {
        let p2 = eval_poly(&self.p2, y);
        -(eval_poly(&self.p1, y) * dw + eval_poly(&self.p0, y) * w) / p2
    }

    pub fn step(&self, y0: f64, w: Complex64, dw: Complex64, h: f64) -> (Complex64, Complex64) {
        let b = self.taylor_scaled(y0, w, dw, h);
        let (w1, dw1, _) = Self::eval_scaled(&b, h);
        (w1, dw1)
    }

    /// Residual `|w'' + (P1/P2) w' + (P0/P2) w|` of a triple at `y`.
    pub fn residual(&self, y: f64, w: Complex64, dw: Complex64, d2w: Complex64) -> f64 {
        let p2 = eval_poly(&self.p2, y);
        (d2w + eval_poly(&self.p1, y) / p2 * dw + eval_poly(&self.p0, y) / p2 * w).norm()
    }
}

/// A solution tabulated at nodes, with dense evaluation by one Taylor step
/// from the nearest node.
#[derive(Debug, Clone)]
pub struct OdePath {
    ode: PolyOde,
    /// `(y, w, w')`, ascending in `y`.
    nodes: Vec<(f64, Complex64, Complex64)>,
}

impl OdePath {
    /// Integrates from `y_start` (with data `w, dw`) to `y_end`, in either
    /// direction; `y_end` must not cross the singular point.
    pub fn integrate(ode: PolyOde, y_start: f64, w: Complex64, dw: Complex64, y_end: f64) -> Self {
        let dir = if y_end >= y_start { 1.0 } else { -1.0 };
        let mut nodes = vec![(y_start, w, dw)];
        let (mut y, mut w, mut dw) = (y_start, w, dw);
        while (y_end - y) * dir > 0.0 {
            let lim = ode.step_limit(y);
            let h = lim.min((y_end - y).abs()) * dir;
            let (w1, dw1) = ode.step(y, w, dw, h);
            y = if ((y + h) - y_end) * dir >= 0.0 { y_end } else { y + h };
            w = w1;
            dw = dw1;
            nodes.push((y, w, dw));
        }
        if dir < 0.0 {
            nodes.reverse();
        }
        OdePath { ode, nodes }
    }

    pub fn ode(&self) -> &PolyOde {
        &self.ode
    }

    pub fn y_min(&self) -> f64 {
        self.nodes[0].0
    }

    pub fn y_max(&self) -> f64 {
        self.nodes[self.nodes.len() - 1].0
    }

    pub fn nodes(&self) -> &[(f64, Complex64, Complex64)] {
        &self.nodes
    }

    fn nearest(&self, y: f64) -> usize {
        let i = self.nodes.partition_point(|n| n.0 < y);
        if i == 0 {
            0
        } else if i == self.nodes.len() {
            i - 1
        } else if (self.nodes[i].0 - y) < (y - self.nodes[i - 1].0) {
            i
        } else {
            i - 1
        }
    }

    /// `(w, w', w'')` at `y` inside the tabulated range.
    pub fn eval_full(&self, y: f64) -> (Complex64, Complex64, Complex64) {
        let (y0, w0, dw0) = self.nodes[self.nearest(y)];
        let h = y - y0;
        if h == 0.0 {
            return (w0, dw0, self.ode.second_derivative(y0, w0, dw0));
        }
        let b = self.ode.taylor_scaled(y0, w0, dw0, h);
        PolyOde::eval_scaled(&b, h)
    }

    pub fn eval(&self, y: f64) -> (Complex64, Complex64) {
        let (w, dw, _) = self.eval_full(y);
        (w, dw)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn harmonic_oscillator() {
        // y² w'' + y² w = 0 ⇒ w = sin(y) with these data.
        let ode = PolyOde { p2: vec![c(0.0), c(0.0), c(1.0)], p1: vec![], p0: vec![c(0.0), c(0.0), c(1.0)] };
        let path = OdePath::integrate(ode, 1.0, c(1f64.sin()), c(1f64.cos()), 40.0);
        for &y in &[1.0, 2.3, 17.7, 40.0] {
            let (w, dw) = path.eval(y);
            assert!((w.re - y.sin()).abs() < 1e-12, "y = {y}");
            assert!((dw.re - y.cos()).abs() < 1e-12);
        }
    }

    #[test]
    fn euler_equation_toward_singularity() {
        // y² w'' − 2 w = 0 has solution y².
        let ode = PolyOde { p2: vec![c(0.0), c(0.0), c(1.0)], p1: vec![], p0: vec![c(-2.0)] };
        let path = OdePath::integrate(ode, 2.0, c(4.0), c(4.0), 1e-3);
        let (w, _) = path.eval(1e-3);
        assert!((w.re - 1e-6).abs() < 1e-16);
        let (w, dw, d2w) = path.eval_full(0.37);
        assert!((w.re - 0.37 * 0.37).abs() < 1e-13);
        assert!(path.ode().residual(0.37, w, dw, d2w) < 1e-12);
    }
}
