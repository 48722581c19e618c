//! Fixed-size dense complex linear algebra.
//!
//! Everything here works on stack arrays: 2×2 solves for the cavity
//! fluctuation equations and 4×4 Hermitian eigendecompositions for the
//! two-qubit Hamiltonian. Nothing allocates.

use std::ops::{Add, Mul, Sub};

pub use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

/// Relative determinant threshold used by [`solve2`].
pub const SOLVE2_EPS_SING: f64 = 1e-12;
/// Relative anti-Hermitian tolerance accepted by [`eig_hermitian4`].
pub const HERMITIAN_TOL: f64 = 1e-10;
/// Tolerance on the norm of states handed to [`propagate`].
pub const NORM_TOL: f64 = 1e-10;

const MAX_SWEEPS: usize = 100;

pub type Vec2 = [C64; 2];
pub type Vec4 = [C64; 4];

pub(crate) const ZERO: C64 = C64 { re: 0.0, im: 0.0 };
pub(crate) const ONE: C64 = C64 { re: 1.0, im: 0.0 };

#[inline]
pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// `⟨a|b⟩`, conjugate-linear in the first argument.
pub fn inner(a: &Vec4, b: &Vec4) -> C64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

pub fn norm(a: &Vec4) -> f64 {
    a.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

/// `|⟨a|b⟩|²` for unit vectors; insensitive to global phase.
pub fn fidelity(a: &Vec4, b: &Vec4) -> f64 {
    inner(a, b).norm_sqr()
}

pub fn scale(a: &Vec4, s: C64) -> Vec4 {
    a.map(|x| x * s)
}

pub fn is_finite_vec(a: &[C64]) -> bool {
    a.iter().all(|x| x.re.is_finite() && x.im.is_finite())
}

/// Row-major 2×2 complex matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CMatrix2(pub [[C64; 2]; 2]);

impl CMatrix2 {
    pub fn new(m00: C64, m01: C64, m10: C64, m11: C64) -> Self {
        CMatrix2([[m00, m01], [m10, m11]])
    }

    pub fn identity() -> Self {
        CMatrix2::new(ONE, ZERO, ZERO, ONE)
    }

    pub fn det(&self) -> C64 {
        let m = &self.0;
        m[0][0] * m[1][1] - m[0][1] * m[1][0]
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().flatten().map(|x| x.norm()).fold(0.0, f64::max)
    }

    pub fn mul_vec(&self, v: &Vec2) -> Vec2 {
        let m = &self.0;
        [m[0][0] * v[0] + m[0][1] * v[1], m[1][0] * v[0] + m[1][1] * v[1]]
    }
}

/// Solves `m·x = rhs` by Cramer's rule.
///
/// Fails with [`Error::SingularSystem`] unless
/// `|det m| > 1e-12 · ‖m‖²_max`.
pub fn solve2(m: &CMatrix2, rhs: &Vec2) -> Result<Vec2> {
    let det = m.det();
    let scale = m.max_abs();
    let threshold = SOLVE2_EPS_SING * scale * scale;
    if !(det.norm() > threshold) {
        return Err(Error::SingularSystem {
            det: det.norm(),
            threshold,
        });
    }
    let a = &m.0;
    let x0 = (rhs[0] * a[1][1] - a[0][1] * rhs[1]) / det;
    let x1 = (a[0][0] * rhs[1] - a[1][0] * rhs[0]) / det;
    Ok([x0, x1])
}

/// Row-major 4×4 complex matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CMatrix4(pub [[C64; 4]; 4]);

impl CMatrix4 {
    pub fn zeros() -> Self {
        CMatrix4([[ZERO; 4]; 4])
    }

    pub fn identity() -> Self {
        Self::from_real_diag([1.0; 4])
    }

    pub fn from_real_diag(d: [f64; 4]) -> Self {
        let mut m = Self::zeros();
        for (i, v) in d.into_iter().enumerate() {
            m.0[i][i] = c(v, 0.0);
        }
        m
    }

    /// `|a⟩⟨b|`
    pub fn outer(a: &Vec4, b: &Vec4) -> Self {
        let mut m = Self::zeros();
        for i in 0..4 {
            for j in 0..4 {
                m.0[i][j] = a[i] * b[j].conj();
            }
        }
        m
    }

    pub fn adjoint(&self) -> Self {
        let mut m = Self::zeros();
        for i in 0..4 {
            for j in 0..4 {
                m.0[i][j] = self.0[j][i].conj();
            }
        }
        m
    }

    pub fn conj(&self) -> Self {
        CMatrix4(self.0.map(|row| row.map(|x| x.conj())))
    }

    pub fn scaled(&self, s: C64) -> Self {
        CMatrix4(self.0.map(|row| row.map(|x| x * s)))
    }

    pub fn mul_vec(&self, v: &Vec4) -> Vec4 {
        std::array::from_fn(|i| (0..4).map(|k| self.0[i][k] * v[k]).sum())
    }

    pub fn trace(&self) -> C64 {
        (0..4).map(|i| self.0[i][i]).sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().flatten().map(|x| x.norm()).fold(0.0, f64::max)
    }

    /// `‖h − h†‖_max`
    pub fn hermitian_deviation(&self) -> f64 {
        let mut dev: f64 = 0.0;
        for i in 0..4 {
            for j in 0..4 {
                dev = dev.max((self.0[i][j] - self.0[j][i].conj()).norm());
            }
        }
        dev
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|row| is_finite_vec(row))
    }

    pub fn column(&self, j: usize) -> Vec4 {
        std::array::from_fn(|i| self.0[i][j])
    }
}

impl Mul for CMatrix4 {
    type Output = CMatrix4;
    fn mul(self, rhs: CMatrix4) -> CMatrix4 {
        let mut m = CMatrix4::zeros();
        for i in 0..4 {
            for j in 0..4 {
                m.0[i][j] = (0..4).map(|k| self.0[i][k] * rhs.0[k][j]).sum();
            }
        }
        m
    }
}

impl Add for CMatrix4 {
    type Output = CMatrix4;
    fn add(self, rhs: CMatrix4) -> CMatrix4 {
        let mut m = self;
        for i in 0..4 {
            for j in 0..4 {
                m.0[i][j] += rhs.0[i][j];
            }
        }
        m
    }
}

impl Sub for CMatrix4 {
    type Output = CMatrix4;
    fn sub(self, rhs: CMatrix4) -> CMatrix4 {
        self + rhs.scaled(c(-1.0, 0.0))
    }
}

/// Eigendecomposition of a 4×4 Hermitian matrix.
///
/// `eigenvectors[k]` belongs to `eigenvalues[k]`; eigenvalues ascend.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HermEig4 {
    pub eigenvalues: [f64; 4],
    pub eigenvectors: [Vec4; 4],
}

impl HermEig4 {
    /// Matrix whose columns are the eigenvectors.
    pub fn vector_matrix(&self) -> CMatrix4 {
        let mut v = CMatrix4::zeros();
        for (k, vec) in self.eigenvectors.iter().enumerate() {
            for i in 0..4 {
                v.0[i][k] = vec[i];
            }
        }
        v
    }

    /// `V·f(Λ)·V†` for a real spectral function `f`.
    pub fn apply_fn(&self, f: impl Fn(f64) -> C64) -> CMatrix4 {
        let mut out = CMatrix4::zeros();
        for (lambda, v) in self.eigenvalues.iter().zip(&self.eigenvectors) {
            out = out + CMatrix4::outer(v, v).scaled(f(*lambda));
        }
        out
    }

    pub fn reconstruct(&self) -> CMatrix4 {
        self.apply_fn(|l| c(l, 0.0))
    }
}

/// Cyclic complex Jacobi eigensolver for 4×4 Hermitian matrices.
///
/// Each rotation first removes the phase of the pivot `h[p][q]` with a
/// diagonal unitary, then applies a real Givens rotation. Sweeps run over
/// the pairs in a fixed order until a full sweep makes no rotation.
pub fn eig_hermitian4(h: &CMatrix4) -> Result<HermEig4> {
    if !h.is_finite() {
        return Err(Error::NonFinite("eig_hermitian4 input"));
    }
    let deviation = h.hermitian_deviation();
    if deviation > HERMITIAN_TOL * h.max_abs() {
        return Err(Error::NotHermitian { deviation });
    }

    // Work on the Hermitian part so tiny asymmetries do not bias the result.
    let mut a = (*h + h.adjoint()).scaled(c(0.5, 0.0));
    let mut v = CMatrix4::identity();
    let fro: f64 = a.0.iter().flatten().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
    let tiny = (fro * 1e-20).max(f64::MIN_POSITIVE);

    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..3 {
            for q in (p + 1)..4 {
                let apq = a.0[p][q];
                let mag = apq.norm();
                if mag <= tiny {
                    continue;
                }
                rotated = true;
                let phase = apq / mag;
                let x = a.0[p][p].re;
                let z = a.0[q][q].re;
                let theta = (z - x) / (2.0 * mag);
                let t = if theta == 0.0 {
                    1.0
                } else {
                    theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
                };
                let cs = 1.0 / (t * t + 1.0).sqrt();
                let sn = t * cs;

                // U restricted to (p, q): [[c, s], [-s·e^{-iφ}, c·e^{-iφ}]]
                let u_pp = c(cs, 0.0);
                let u_pq = c(sn, 0.0);
                let u_qp = phase.conj() * (-sn);
                let u_qq = phase.conj() * cs;

                for i in 0..4 {
                    let hp = a.0[i][p];
                    let hq = a.0[i][q];
                    a.0[i][p] = hp * u_pp + hq * u_qp;
                    a.0[i][q] = hp * u_pq + hq * u_qq;
                    let vp = v.0[i][p];
                    let vq = v.0[i][q];
                    v.0[i][p] = vp * u_pp + vq * u_qp;
                    v.0[i][q] = vp * u_pq + vq * u_qq;
                }
                for j in 0..4 {
                    let rp = a.0[p][j];
                    let rq = a.0[q][j];
                    a.0[p][j] = u_pp.conj() * rp + u_qp.conj() * rq;
                    a.0[q][j] = u_pq.conj() * rp + u_qq.conj() * rq;
                }
                a.0[p][q] = ZERO;
                a.0[q][p] = ZERO;
                a.0[p][p].im = 0.0;
                a.0[q][q].im = 0.0;
            }
        }
        if !rotated {
            break;
        }
    }

    let mut order = [0usize, 1, 2, 3];
    order.sort_by(|&i, &j| a.0[i][i].re.total_cmp(&a.0[j][j].re));
    Ok(HermEig4 {
        eigenvalues: order.map(|k| a.0[k][k].re),
        eigenvectors: order.map(|k| v.column(k)),
    })
}

/// Singular values of a 4×4 complex matrix, descending.
///
/// One-sided (Hestenes) Jacobi: columns are rotated pairwise until mutually
/// orthogonal, and the singular values are the column norms. Small singular
/// values come out with absolute accuracy near `ε·‖m‖` rather than the `√ε`
/// floor of going through `m†m`.
pub fn singular_values4(m: &CMatrix4) -> Result<[f64; 4]> {
    if !m.is_finite() {
        return Err(Error::NonFinite("singular_values4 input"));
    }
    let mut cols: [Vec4; 4] = std::array::from_fn(|j| m.column(j));
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for i in 0..3 {
            for j in (i + 1)..4 {
                let alpha: f64 = cols[i].iter().map(|x| x.norm_sqr()).sum();
                let beta: f64 = cols[j].iter().map(|x| x.norm_sqr()).sum();
                let g = inner(&cols[i], &cols[j]);
                let mag = g.norm();
                if mag == 0.0 || mag <= 1e-16 * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let phase = g / mag;
                let zeta = (beta - alpha) / (2.0 * mag);
                let t = if zeta == 0.0 {
                    1.0
                } else {
                    zeta.signum() / (zeta.abs() + (zeta * zeta + 1.0).sqrt())
                };
                let cs = 1.0 / (t * t + 1.0).sqrt();
                let sn = t * cs;
                for k in 0..4 {
                    let ai = cols[i][k];
                    let aj = cols[j][k] * phase.conj();
                    cols[i][k] = ai * cs - aj * sn;
                    cols[j][k] = ai * sn + aj * cs;
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let mut sv = cols.map(|col| norm(&col));
    sv.sort_by(|a, b| b.total_cmp(a));
    Ok(sv)
}

/// `exp(−i·h·t)·psi0`, via the eigendecomposition of `h`.
pub fn propagate(h: &CMatrix4, t: f64, psi0: &Vec4) -> Result<Vec4> {
    let n = norm(psi0);
    if !((n - 1.0).abs() <= NORM_TOL) {
        return Err(Error::NotNormalized { norm: n });
    }
    if !t.is_finite() {
        return Err(Error::NonFinite("propagation time"));
    }
    let eig = eig_hermitian4(h)?;
    Ok(propagate_with(&eig, t, psi0))
}

/// Propagation reusing an existing eigendecomposition.
pub fn propagate_with(eig: &HermEig4, t: f64, psi0: &Vec4) -> Vec4 {
    let mut out = [ZERO; 4];
    for (lambda, v) in eig.eigenvalues.iter().zip(&eig.eigenvectors) {
        let amp = inner(v, psi0) * C64::from_polar(1.0, -lambda * t);
        for i in 0..4 {
            out[i] += amp * v[i];
        }
    }
    out
}
