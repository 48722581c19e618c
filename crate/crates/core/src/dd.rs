//! Double-double arithmetic (about 32 significant digits) for the few places
//! where a result is a small difference of much larger terms.

use std::ops::{Add, Div, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::numerics::{c, CMatrix2, C64, SOLVE2_EPS_SING};

/// Unevaluated sum `hi + lo` with `|lo| ≤ ulp(hi)/2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Dd {
    hi: f64,
    lo: f64,
}

fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl Dd {
    fn norm(hi: f64, lo: f64) -> Dd {
        let (hi, lo) = quick_two_sum(hi, lo);
        Dd { hi, lo }
    }

    pub(crate) fn to_f64(self) -> f64 {
        self.hi + self.lo
    }
}

impl From<f64> for Dd {
    fn from(x: f64) -> Dd {
        Dd { hi: x, lo: 0.0 }
    }
}

impl Add for Dd {
    type Output = Dd;
    fn add(self, o: Dd) -> Dd {
        let (s, e) = two_sum(self.hi, o.hi);
        let (t, f) = two_sum(self.lo, o.lo);
        let (s, e) = quick_two_sum(s, e + t);
        Dd::norm(s, e + f)
    }
}

impl Neg for Dd {
    type Output = Dd;
    fn neg(self) -> Dd {
        Dd {
            hi: -self.hi,
            lo: -self.lo,
        }
    }
}

impl Sub for Dd {
    type Output = Dd;
    fn sub(self, o: Dd) -> Dd {
        self + -o
    }
}

impl Mul for Dd {
    type Output = Dd;
    fn mul(self, o: Dd) -> Dd {
        let (p, e) = two_prod(self.hi, o.hi);
        Dd::norm(p, e + (self.hi * o.lo + self.lo * o.hi))
    }
}

impl Div for Dd {
    type Output = Dd;
    fn div(self, o: Dd) -> Dd {
        let q1 = self.hi / o.hi;
        let r = self - o * Dd::from(q1);
        let q2 = r.hi / o.hi;
        let r = r - o * Dd::from(q2);
        let q3 = r.hi / o.hi;
        let (q1, q2) = quick_two_sum(q1, q2);
        Dd { hi: q1, lo: q2 } + Dd::from(q3)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Cdd {
    pub re: Dd,
    pub im: Dd,
}

impl From<C64> for Cdd {
    fn from(z: C64) -> Cdd {
        Cdd {
            re: z.re.into(),
            im: z.im.into(),
        }
    }
}

impl Cdd {
    pub(crate) fn conj(self) -> Cdd {
        Cdd {
            re: self.re,
            im: -self.im,
        }
    }

    /// `−i·z`
    pub(crate) fn times_minus_i(self) -> Cdd {
        Cdd {
            re: self.im,
            im: -self.re,
        }
    }

    pub(crate) fn scale(self, k: f64) -> Cdd {
        Cdd {
            re: self.re * Dd::from(k),
            im: self.im * Dd::from(k),
        }
    }

    pub(crate) fn to_c64(self) -> C64 {
        c(self.re.to_f64(), self.im.to_f64())
    }
}

impl Add for Cdd {
    type Output = Cdd;
    fn add(self, o: Cdd) -> Cdd {
        Cdd {
            re: self.re + o.re,
            im: self.im + o.im,
        }
    }
}

impl Sub for Cdd {
    type Output = Cdd;
    fn sub(self, o: Cdd) -> Cdd {
        Cdd {
            re: self.re - o.re,
            im: self.im - o.im,
        }
    }
}

impl Mul for Cdd {
    type Output = Cdd;
    fn mul(self, o: Cdd) -> Cdd {
        Cdd {
            re: self.re * o.re - self.im * o.im,
            im: self.re * o.im + self.im * o.re,
        }
    }
}

impl Div for Cdd {
    type Output = Cdd;
    fn div(self, o: Cdd) -> Cdd {
        let den = o.re * o.re + o.im * o.im;
        let num = self * o.conj();
        Cdd {
            re: num.re / den,
            im: num.im / den,
        }
    }
}

/// [`crate::numerics::solve2`] carried out in double-double, with the same
/// singularity test.
pub(crate) fn solve2_dd(m: &CMatrix2, rhs: [Cdd; 2]) -> Result<[Cdd; 2]> {
    let scale = m.max_abs();
    let threshold = SOLVE2_EPS_SING * scale * scale;
    let a = m.0.map(|row| row.map(Cdd::from));
    let det = a[0][0] * a[1][1] - a[0][1] * a[1][0];
    let det_abs = det.to_c64().norm();
    if !(det_abs > threshold) {
        return Err(Error::SingularSystem {
            det: det_abs,
            threshold,
        });
    }
    let x0 = (rhs[0] * a[1][1] - a[0][1] * rhs[1]) / det;
    let x1 = (a[0][0] * rhs[1] - a[1][0] * rhs[0]) / det;
    Ok([x0, x1])
}
