//! Separability classification: PPT for sampled states, the spectral
//! inequality for absolute separability.

use crate::error::{Error, Result};
use crate::linalg::Mat4;
use crate::statespace::Spectrum;

pub const HERMITICITY_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SepFlags {
    pub separable: bool,
    pub absolutely_separable: bool,
}

/// PPT criterion via the determinant sign of the partial transpose.
///
/// For two qubits at most one eigenvalue of the partial transpose can be
/// negative, so `det >= 0` is equivalent to positive semidefiniteness and
/// avoids an eigensolve on the hot path. `det == 0` counts as separable.
pub fn ppt_separable(rho: &Mat4) -> Result<bool> {
    if rho.hermiticity_defect() > HERMITICITY_TOL {
        return Err(Error::Matrix(
            "ppt_separable requires a Hermitian matrix".into(),
        ));
    }
    Ok(ppt_det(rho) >= 0.0)
}

/// Determinant of the partial transpose (real for Hermitian input).
pub fn ppt_det(rho: &Mat4) -> f64 {
    rho.partial_transpose_b().det().re
}

/// Cross-check mode: minimum eigenvalue of the partial transpose.
pub fn ppt_separable_eig(rho: &Mat4) -> Result<bool> {
    if rho.hermiticity_defect() > HERMITICITY_TOL {
        return Err(Error::Matrix(
            "ppt_separable_eig requires a Hermitian matrix".into(),
        ));
    }
    let eig = rho.partial_transpose_b().hermitian_eigenvalues();
    Ok(eig[0] >= -1e-13)
}

/// Spectral absolute-separability test: with eigenvalues sorted descending,
/// `l1 <= l3 + 2 sqrt(l2 l4)`. States with such a spectrum stay separable
/// under every global unitary.
pub fn absolutely_separable(spectrum: &Spectrum) -> bool {
    let l = spectrum.sorted_desc();
    l[0] <= l[2] + 2.0 * (l[1] * l[3]).max(0.0).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lds::QuasirandomStream;
    use crate::statespace::{assemble_state, eigen_from_unit};
    use num_complex::Complex64 as C64;

    fn bell_phi_plus() -> Mat4 {
        let mut m = Mat4::zero();
        for &i in &[0usize, 3] {
            for &j in &[0usize, 3] {
                m.0[i][j] = C64::new(0.5, 0.0);
            }
        }
        m
    }

    fn werner(p: f64) -> Mat4 {
        let bell = bell_phi_plus();
        let mut m = Mat4::zero();
        for i in 0..4 {
            for j in 0..4 {
                m.0[i][j] = bell.0[i][j] * p;
            }
            m.0[i][i] += C64::new((1.0 - p) / 4.0, 0.0);
        }
        m
    }

    #[test]
    fn maximally_mixed_is_separable() {
        let mut m = Mat4::zero();
        for i in 0..4 {
            m.0[i][i] = C64::new(0.25, 0.0);
        }
        assert!(ppt_separable(&m).unwrap());
        assert!(ppt_separable_eig(&m).unwrap());
    }

    #[test]
    fn bell_state_fails_ppt_with_known_determinant() {
        let bell = bell_phi_plus();
        assert!(!ppt_separable(&bell).unwrap());
        assert!(!ppt_separable_eig(&bell).unwrap());
        assert!((ppt_det(&bell) + 1.0 / 16.0).abs() < 1e-14);
    }

    #[test]
    fn werner_boundary_at_one_third() {
        // min PT eigenvalue is (1 - 3p)/4
        let boundary = werner(1.0 / 3.0);
        assert!(ppt_det(&boundary).abs() < 1e-15);
        assert!(ppt_separable(&boundary).unwrap());
        assert!(!ppt_separable(&werner(0.34)).unwrap());
        assert!(ppt_separable(&werner(0.32)).unwrap());
        let eig = werner(0.8).partial_transpose_b().hermitian_eigenvalues();
        assert!((eig[0] - (1.0 - 3.0 * 0.8) / 4.0).abs() < 1e-12);
    }

    #[test]
    fn non_hermitian_input_is_rejected() {
        let mut m = Mat4::identity();
        m.0[0][1] = C64::new(0.1, 0.0);
        assert!(ppt_separable(&m).is_err());
        assert!(ppt_separable_eig(&m).is_err());
    }

    #[test]
    fn absolute_separability_examples() {
        assert!(absolutely_separable(&Spectrum([0.25, 0.25, 0.25, 0.25])));
        assert!(!absolutely_separable(&Spectrum([0.5, 0.25, 0.2, 0.05])));
        assert!(!absolutely_separable(&Spectrum([1.0, 0.0, 0.0, 0.0])));
    }

    #[test]
    fn det_and_eigen_modes_agree() {
        let stream = QuasirandomStream::new(15, 0.5).unwrap();
        let mut checked = 0usize;
        for n in 0..20_000u64 {
            let st = assemble_state(&stream.point(n)).unwrap();
            let det = ppt_det(&st.rho);
            if det.abs() < 1e-14 {
                continue;
            }
            assert_eq!(
                ppt_separable(&st.rho).unwrap(),
                ppt_separable_eig(&st.rho).unwrap(),
                "disagreement at n={n}"
            );
            checked += 1;
        }
        assert!(checked > 19_000);
    }

    #[test]
    fn absolutely_separable_spectra_pass_ppt_under_rotations() {
        let simplex = QuasirandomStream::new(3, 0.5).unwrap();
        let angles = QuasirandomStream::new(12, 0.25).unwrap();
        let mut found = 0usize;
        let mut n = 0u64;
        while found < 2000 && n < 2_000_000 {
            let p = simplex.point(n);
            n += 1;
            let s = eigen_from_unit([p[0], p[1], p[2]]);
            if !absolutely_separable(&s) {
                continue;
            }
            found += 1;
            for m in 0..10u64 {
                let a = angles.point(found as u64 * 10 + m);
                let mut u = a;
                u.extend([0.0, 0.0, 0.0]);
                // Rebuild a state with this spectrum under arbitrary angles.
                let mut coords = u;
                coords[12] = 0.0;
                let euler = crate::statespace::EulerAngles::from_unit(&coords[..12]).unwrap();
                let rho = crate::statespace::euler_unitary(&euler).conjugate_diag(&s.0);
                assert!(
                    ppt_separable(&rho).unwrap(),
                    "absolutely separable spectrum entangled at n={n} m={m}"
                );
            }
        }
        assert!(found >= 2000, "only {found} absolutely separable spectra");
    }
}
