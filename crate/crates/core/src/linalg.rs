//! Minimal dense 4x4 complex matrix support for the two-qubit pipeline.

use num_complex::Complex64 as C64;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat4(pub [[C64; 4]; 4]);

impl Mat4 {
    pub fn zero() -> Self {
        Mat4([[C64::new(0.0, 0.0); 4]; 4])
    }

    pub fn identity() -> Self {
        let mut m = Self::zero();
        for i in 0..4 {
            m.0[i][i] = C64::new(1.0, 0.0);
        }
        m
    }

    pub fn mul(&self, rhs: &Mat4) -> Mat4 {
        let mut out = Mat4::zero();
        for i in 0..4 {
            for k in 0..4 {
                let a = self.0[i][k];
                if a.re == 0.0 && a.im == 0.0 {
                    continue;
                }
                for j in 0..4 {
                    out.0[i][j] += a * rhs.0[k][j];
                }
            }
        }
        out
    }

    pub fn adjoint(&self) -> Mat4 {
        let mut out = Mat4::zero();
        for i in 0..4 {
            for j in 0..4 {
                out.0[i][j] = self.0[j][i].conj();
            }
        }
        out
    }

    pub fn trace(&self) -> C64 {
        self.0[0][0] + self.0[1][1] + self.0[2][2] + self.0[3][3]
    }

    /// Largest entrywise deviation from hermiticity.
    pub fn hermiticity_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..4 {
            for j in 0..4 {
                worst = worst.max((self.0[i][j] - self.0[j][i].conj()).norm());
            }
        }
        worst
    }

    /// Right-multiply in place by the phase factor `diag(e^{ia}, e^{-ia}, 1, 1)`
    /// (exponential of the first diagonal su(4) generator).
    pub fn phase_right(&mut self, a: f64) {
        let (s, c) = a.sin_cos();
        let e = C64::new(c, s);
        let ec = e.conj();
        for row in self.0.iter_mut() {
            row[0] *= e;
            row[1] *= ec;
        }
    }

    /// Right-multiply in place by the rotation `[[cos a, sin a], [-sin a, cos a]]`
    /// acting on coordinates `(0, q)` (exponential of an antisymmetric
    /// su(4) generator coupling levels 1 and q+1).
    pub fn rotate_right(&mut self, q: usize, a: f64) {
        let (s, c) = a.sin_cos();
        for row in self.0.iter_mut() {
            let x = row[0];
            let y = row[q];
            row[0] = x * c - y * s;
            row[q] = x * s + y * c;
        }
    }

    /// `U diag(lambda) U^dagger`, assembled as a sum of rank-one projectors
    /// over the columns of `U`.
    pub fn conjugate_diag(&self, lambda: &[f64; 4]) -> Mat4 {
        let mut out = Mat4::zero();
        for (k, &l) in lambda.iter().enumerate() {
            if l == 0.0 {
                continue;
            }
            for i in 0..4 {
                let li = self.0[i][k] * l;
                for j in 0..4 {
                    out.0[i][j] += li * self.0[j][k].conj();
                }
            }
        }
        out
    }

    /// Partial transpose over the second qubit (basis order |ab> -> 2a+b):
    /// transposes each of the four 2x2 blocks.
    pub fn partial_transpose_b(&self) -> Mat4 {
        let mut out = *self;
        for a in [0usize, 2] {
            for c in [0usize, 2] {
                let t = out.0[a][c + 1];
                out.0[a][c + 1] = out.0[a + 1][c];
                out.0[a + 1][c] = t;
            }
        }
        out
    }

    /// Reduced 2x2 matrices: trace over qubit B and over qubit A.
    pub fn partial_traces(&self) -> ([[C64; 2]; 2], [[C64; 2]; 2]) {
        let mut ra = [[C64::new(0.0, 0.0); 2]; 2];
        let mut rb = [[C64::new(0.0, 0.0); 2]; 2];
        for a in 0..2 {
            for c in 0..2 {
                for b in 0..2 {
                    ra[a][c] += self.0[2 * a + b][2 * c + b];
                    rb[a][c] += self.0[2 * b + a][2 * b + c];
                }
            }
        }
        (ra, rb)
    }

    /// Determinant by complex LU with partial pivoting.
    pub fn det(&self) -> C64 {
        let mut m = self.0;
        let mut det = C64::new(1.0, 0.0);
        for col in 0..4 {
            let mut piv = col;
            let mut best = m[col][col].norm_sqr();
            for r in col + 1..4 {
                let v = m[r][col].norm_sqr();
                if v > best {
                    best = v;
                    piv = r;
                }
            }
            if best == 0.0 {
                return C64::new(0.0, 0.0);
            }
            if piv != col {
                m.swap(piv, col);
                det = -det;
            }
            det *= m[col][col];
            let inv = C64::new(1.0, 0.0) / m[col][col];
            for r in col + 1..4 {
                let factor = m[r][col] * inv;
                for c in col..4 {
                    m[r][c] -= factor * m[col][c];
                }
            }
        }
        det
    }

    /// Eigenvalues of a Hermitian matrix, ascending.
    ///
    /// Works on the 8x8 real symmetric embedding [[X, -Y], [Y, X]] whose
    /// spectrum is that of X+iY doubled; cyclic Jacobi then keeps every
    /// other sorted eigenvalue.
    pub fn hermitian_eigenvalues(&self) -> [f64; 4] {
        let mut s = [[0.0f64; 8]; 8];
        for i in 0..4 {
            for j in 0..4 {
                let z = self.0[i][j];
                s[i][j] = z.re;
                s[i + 4][j + 4] = z.re;
                s[i][j + 4] = -z.im;
                s[i + 4][j] = z.im;
            }
        }
        let mut eig = jacobi_symmetric_8(&mut s);
        eig.sort_by(|a, b| a.partial_cmp(b).unwrap());
        [eig[0], eig[2], eig[4], eig[6]]
    }
}

/// Cyclic Jacobi eigenvalue iteration for a real symmetric 8x8 matrix.
fn jacobi_symmetric_8(a: &mut [[f64; 8]; 8]) -> [f64; 8] {
    const N: usize = 8;
    for _sweep in 0..30 {
        let mut off = 0.0;
        for p in 0..N {
            for q in p + 1..N {
                off += a[p][q] * a[p][q];
            }
        }
        if off < 1e-30 {
            break;
        }
        for p in 0..N {
            for q in p + 1..N {
                let apq = a[p][q];
                if apq.abs() < 1e-300 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..N {
                    let akp = a[k][p];
                    let akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..N {
                    let apk = a[p][k];
                    let aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
        }
    }
    let mut eig = [0.0; N];
    for (i, e) in eig.iter_mut().enumerate() {
        *e = a[i][i];
    }
    eig
}

#[cfg(test)]
mod tests {
    use super::*;

    fn approx(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() < tol, "{a} vs {b}");
    }

    #[test]
    fn identity_roundtrips() {
        let i = Mat4::identity();
        assert_eq!(i.mul(&i), i);
        assert_eq!(i.adjoint(), i);
        approx(i.det().re, 1.0, 1e-15);
    }

    #[test]
    fn det_of_diagonal() {
        let mut m = Mat4::identity();
        for (k, v) in [0.1, 0.2, 0.3, 0.4].iter().enumerate() {
            m.0[k][k] = C64::new(*v, 0.0);
        }
        approx(m.det().re, 0.0024, 1e-15);
    }

    #[test]
    fn eigenvalues_of_diagonal_plus_rotation() {
        let mut m = Mat4::identity();
        for (k, v) in [0.4, 0.3, 0.2, 0.1].iter().enumerate() {
            m.0[k][k] = C64::new(*v, 0.0);
        }
        let mut u = Mat4::identity();
        u.rotate_right(2, 0.7);
        u.phase_right(1.3);
        u.rotate_right(3, 0.2);
        let conj = u.conjugate_diag(&[0.4, 0.3, 0.2, 0.1]);
        let eig = conj.hermitian_eigenvalues();
        let expect = [0.1, 0.2, 0.3, 0.4];
        for (e, x) in eig.iter().zip(expect) {
            approx(*e, x, 1e-12);
        }
        approx(conj.trace().re, 1.0, 1e-13);
        assert!(conj.hermiticity_defect() < 1e-14);
    }

    #[test]
    fn partial_transpose_swaps_block_corners() {
        let mut m = Mat4::zero();
        m.0[0][1] = C64::new(2.0, 1.0);
        let pt = m.partial_transpose_b();
        assert_eq!(pt.0[1][0], C64::new(2.0, 1.0));
        assert_eq!(pt.0[0][1], C64::new(0.0, 0.0));
    }
}
