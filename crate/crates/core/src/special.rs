//! Sine and cosine integrals.

use num_complex::Complex64 as C64;
use std::f64::consts::FRAC_PI_2;

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
const EPS: f64 = 1e-16;
const MAX_ITER: usize = 200;

/// Returns `(Si(x), Ci(x))` for `x > 0`; `Ci` is `-inf` at zero.
///
/// Power series below `x = 2`, continued fraction for `E1(ix)` above.
pub fn sine_cosine_integrals(x: f64) -> (f64, f64) {
    let t = x.abs();
    if t == 0.0 {
        return (0.0, f64::NEG_INFINITY);
    }
    let (si, ci) = if t > 2.0 {
        // modified Lentz on E1(it) = -Ci(t) + i(Si(t) - pi/2)
        let tiny = 1e-300;
        let mut b = C64::new(1.0, t);
        let mut c = C64::new(1.0 / tiny, 0.0);
        let mut d = C64::new(1.0, 0.0) / b;
        let mut h = d;
        for i in 1..MAX_ITER {
            let a = -((i * i) as f64);
            b += 2.0;
            d = C64::new(1.0, 0.0) / (a * d + b);
            c = b + a / c;
            let del = c * d;
            h *= del;
            if (del - 1.0).norm() < EPS {
                break;
            }
        }
        h *= C64::new(t.cos(), -t.sin());
        (FRAC_PI_2 + h.im, -h.re)
    } else {
        // Si = sum (-1)^k t^(2k+1) / ((2k+1)(2k+1)!), Ci = gamma + ln t + sum (-1)^k t^(2k) / ((2k)(2k)!)
        let mut sum_s = 0.0;
        let mut sum_c = 0.0;
        let mut power = 1.0;
        for n in 1..MAX_ITER {
            power *= t / n as f64;
            let sign = if (n / 2) % 2 == 0 { 1.0 } else { -1.0 };
            let term = power / n as f64;
            if n % 2 == 1 {
                sum_s += sign * term;
            } else {
                sum_c += sign * term;
            }
            if term < EPS * (sum_s.abs() + sum_c.abs()) {
                break;
            }
        }
        (sum_s, sum_c + t.ln() + EULER_GAMMA)
    };
    if x < 0.0 {
        (-si, ci)
    } else {
        (si, ci)
    }
}
