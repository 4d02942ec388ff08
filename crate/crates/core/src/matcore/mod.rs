//! Complex dense-matrix kernel: Schatten quasinorms, Schmidt and polar
//! decompositions, matrix powers of moduli, sharp Hölder factorization and
//! the joint square root `(fᴴf + gᴴg)^{1/2}`.
//!
//! Everything here is a pure function of its inputs.

mod decomp;
mod lapack_ffi;
mod mat;
mod pindex;

pub use decomp::{
    holder_factor, joint_root, modulus_power, op_norm, polar, rank_one, schatten_norm, schmidt,
    trace, JointRoot, NumericConfig, PolarForm, SchmidtBackend, SchmidtForm, Tolerances,
};
pub(crate) use decomp::lp_of_moduli;
pub(crate) use lapack_ffi::hermitian_eigen;
pub use mat::{Mat, Vector, C64};
pub use pindex::{concavity_modulus, PIndex};

/// Standard basis vector `e_i` of `ℂⁿ`.
pub fn basis_vector(n: usize, i: usize) -> Vector {
    let mut v = Vector::zeros(n);
    v[i] = C64::new(1.0, 0.0);
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrology::random::{complex_normal, ginibre, haar_unitary, unit_vector};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn rng(seed: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(seed)
    }

    fn p(v: f64) -> PIndex {
        PIndex::new(v).unwrap()
    }

    fn diff(a: &Mat, b: &Mat) -> f64 {
        op_norm(&(a - b)).unwrap()
    }

    #[test]
    fn schatten_norm_examples() {
        assert!((schatten_norm(&Mat::identity(2), PIndex::ONE).unwrap() - 2.0).abs() < 1e-14);
        assert_eq!(
            schatten_norm(&Mat::diag_real(&[3.0, 4.0]), PIndex::INF).unwrap(),
            4.0
        );
        assert!((schatten_norm(&Mat::identity(3), PIndex::HALF).unwrap() - 9.0).abs() < 1e-12);
        assert_eq!(schatten_norm(&Mat::zeros(3, 3), PIndex::HALF).unwrap(), 0.0);
    }

    #[test]
    fn schatten_norm_rejects_non_finite() {
        let bad = Mat::wrap(nalgebra::DMatrix::from_element(2, 2, C64::new(f64::NAN, 0.0)));
        assert!(matches!(
            schatten_norm(&bad, PIndex::ONE),
            Err(crate::LabError::Input(_))
        ));
    }

    #[test]
    fn schmidt_examples() {
        let e1 = basis_vector(2, 0);
        let e2 = basis_vector(2, 1);
        let sf = schmidt(&rank_one(&e1, &e2).unwrap()).unwrap();
        assert_eq!(sf.rank(), 1);
        assert!((sf.values[0] - 1.0).abs() < 1e-15);
        assert!((&sf.x[0] - &e1).norm() < 1e-14);
        assert!((&sf.y[0] - &e2).norm() < 1e-14);

        let sf = schmidt(&Mat::diag_real(&[2.0, 1.0])).unwrap();
        assert!((sf.values[0] - 2.0).abs() < 1e-15 && (sf.values[1] - 1.0).abs() < 1e-15);
        for k in 0..2 {
            assert!((&sf.x[k] - basis_vector(2, k)).norm() < 1e-14);
            assert!((&sf.y[k] - basis_vector(2, k)).norm() < 1e-14);
        }
    }

    #[test]
    fn schmidt_phase_convention_and_homogeneity() {
        let mut r = rng(11);
        let f = ginibre(&mut r, 5, 5);
        let sf = schmidt(&f).unwrap();
        for x in &sf.x {
            let lead = x.iter().find(|z| z.norm() > 1e-8).unwrap();
            assert!(lead.im.abs() < 1e-14 && lead.re > 0.0);
        }
        for _ in 0..5 {
            let lambda = complex_normal(&mut r) * 3.0;
            let sigma = lambda / lambda.norm();
            let sl = schmidt(&f.scale(lambda)).unwrap();
            for k in 0..sf.rank() {
                assert!((sl.values[k] - lambda.norm() * sf.values[k]).abs() < 1e-12 * sl.values[0]);
                assert!((&sl.x[k] - &sf.x[k]).norm() < 1e-10);
                assert!((&sl.y[k] - &sf.y[k] * sigma).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn schmidt_reconstructs_and_frames_are_orthonormal() {
        let mut r = rng(3);
        for n in [1, 2, 5, 9] {
            let f = ginibre(&mut r, n, n + 1);
            let sf = schmidt(&f).unwrap();
            assert!(diff(&sf.reconstruct(), &f) <= 1e-10 * op_norm(&f).unwrap());
            for i in 0..sf.rank() {
                for j in 0..sf.rank() {
                    let want = if i == j { 1.0 } else { 0.0 };
                    assert!((sf.x[i].dotc(&sf.x[j]).norm() - want).abs() < 1e-12);
                    assert!((sf.y[i].dotc(&sf.y[j]).norm() - want).abs() < 1e-12);
                }
            }
            assert!(sf.values.windows(2).all(|w| w[0] >= w[1]));
        }
    }

    #[test]
    fn singular_values_are_phase_invariant() {
        let mut r = rng(5);
        let f = ginibre(&mut r, 6, 6);
        let a = schmidt(&f).unwrap().values;
        let b = schmidt(&f.scale(C64::new(0.0, 1.0))).unwrap().values;
        for (x, y) in a.iter().zip(&b) {
            assert!((x - y).abs() < 1e-13 * a[0]);
        }
    }

    #[test]
    fn gram_backend_agrees_on_gapped_input() {
        let mut r = rng(8);
        let f = ginibre(&mut r, 6, 6);
        let gram = NumericConfig {
            backend: SchmidtBackend::Gram,
            ..Default::default()
        };
        let a = schmidt(&f).unwrap();
        let b = gram.schmidt(&f).unwrap();
        assert_eq!(a.rank(), b.rank());
        for k in 0..a.rank() {
            assert!((a.values[k] - b.values[k]).abs() < 1e-9 * a.values[0]);
        }
        assert!(diff(&b.reconstruct(), &f) < 1e-8);
    }

    #[test]
    fn frame_ambiguity_flag() {
        assert!(schmidt(&Mat::identity(3)).unwrap().frame_ambiguous);
        assert!(!schmidt(&Mat::diag_real(&[3.0, 2.0, 1.0])).unwrap().frame_ambiguous);
    }

    #[test]
    fn polar_examples() {
        let mut r = rng(17);
        let u = haar_unitary(&mut r, 4);
        let pf = polar(&u).unwrap();
        assert!(diff(&pf.phase, &u) < 1e-12);
        assert!(diff(&pf.modulus, &Mat::identity(4)) < 1e-12);

        let pf = polar(&Mat::diag_real(&[-2.0, 0.0])).unwrap();
        assert!(diff(&pf.phase, &Mat::diag_real(&[-1.0, 0.0])) < 1e-15);
        assert!(diff(&pf.modulus, &Mat::diag_real(&[2.0, 0.0])) < 1e-15);

        for _ in 0..10 {
            let f = ginibre(&mut r, 5, 5);
            let pf = polar(&f).unwrap();
            assert!(diff(&(&pf.phase * &pf.modulus), &f) <= 1e-10 * op_norm(&f).unwrap());
        }
    }

    #[test]
    fn polar_phase_is_partial_isometry_on_range_of_modulus() {
        let mut r = rng(19);
        // rank 2 in dimension 4
        let f = &ginibre(&mut r, 4, 2) * &ginibre(&mut r, 2, 4);
        let pf = polar(&f).unwrap();
        let proj = modulus_power(&f, 0.0).unwrap();
        assert!(diff(&(pf.phase.adjoint() * &pf.phase), &proj) < 1e-10);
        assert!(diff(&pf.modulus, &pf.modulus.adjoint()) < 1e-12);
        // phase kills the kernel of the modulus
        let kernel = Mat::identity(4) - &proj;
        assert!(op_norm(&(&pf.phase * &kernel)).unwrap() < 1e-10);
    }

    #[test]
    fn modulus_power_examples() {
        assert!(diff(&modulus_power(&Mat::identity(3), 0.37).unwrap(), &Mat::identity(3)) < 1e-14);
        let m = modulus_power(&Mat::diag_real(&[4.0, 9.0]), 0.5).unwrap();
        assert!(diff(&m, &Mat::diag_real(&[2.0, 3.0])) < 1e-14);
        assert!(modulus_power(&Mat::identity(2), -1.0).is_err());

        let mut r = rng(23);
        for _ in 0..10 {
            let g = ginibre(&mut r, 4, 4);
            let psd = &g.adjoint() * &g;
            let (a, b) = (0.3, 1.1);
            let lhs = &modulus_power(&psd, a).unwrap() * &modulus_power(&psd, b).unwrap();
            let rhs = modulus_power(&psd, a + b).unwrap();
            assert!(diff(&lhs, &rhs) < 1e-10 * op_norm(&rhs).unwrap());
        }
    }

    #[test]
    fn rank_one_examples() {
        let e1 = basis_vector(2, 0);
        let e2 = basis_vector(2, 1);
        assert!(diff(&rank_one(&e1, &e1).unwrap(), &Mat::diag_real(&[1.0, 0.0])) < 1e-16);
        let img = rank_one(&e1, &e2).unwrap().apply(&e1);
        assert!((img - &e2).norm() < 1e-16);
        assert!(rank_one(&e1, &basis_vector(3, 0)).is_err());

        let mut r = rng(29);
        for _ in 0..20 {
            let x = unit_vector(&mut r, 6) * C64::new(1.7, 0.0);
            let y = unit_vector(&mut r, 6) * C64::new(0.4, 0.0);
            let want = x.norm() * y.norm();
            let ro = rank_one(&x, &y).unwrap();
            for q in [0.5, 1.0, 2.0, f64::INFINITY] {
                let got = schatten_norm(&ro, PIndex::new(q).unwrap()).unwrap();
                assert!((got - want).abs() < 1e-12 * want, "p={q}");
            }
        }
    }

    #[test]
    fn holder_factor_examples() {
        let (f, g) = holder_factor(&Mat::identity(2), PIndex::TWO, PIndex::TWO).unwrap();
        assert!(diff(&f, &Mat::identity(2)) < 1e-14);
        assert!(diff(&g, &Mat::identity(2)) < 1e-14);

        let h = Mat::diag_real(&[4.0, 1.0]);
        let (f, g) = holder_factor(&h, PIndex::TWO, PIndex::TWO).unwrap();
        assert!(diff(&f, &Mat::diag_real(&[2.0, 1.0])) < 1e-14);
        assert!(diff(&g, &Mat::diag_real(&[2.0, 1.0])) < 1e-14);
        let prod = schatten_norm(&f, PIndex::TWO).unwrap() * schatten_norm(&g, PIndex::TWO).unwrap();
        assert!((prod - 5.0).abs() < 1e-13);

        let (f, g) = holder_factor(&Mat::zeros(3, 3), PIndex::ONE, PIndex::ONE).unwrap();
        assert!(f.is_zero() && g.is_zero());
        assert!(holder_factor(&h, PIndex::INF, PIndex::INF).is_err());
    }

    #[test]
    fn holder_factor_with_infinite_side() {
        let mut r = rng(31);
        let h = ginibre(&mut r, 4, 4);
        let (f, g) = holder_factor(&h, PIndex::INF, PIndex::ONE).unwrap();
        assert!(diff(&(&f * &g), &h) < 1e-12);
        assert!((op_norm(&f).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn joint_root_examples() {
        let one = Mat::identity(1);
        let jr = joint_root(&one, &one).unwrap();
        let r2 = 2f64.sqrt();
        assert!((jr.h.get(0, 0).re - r2).abs() < 1e-15);
        assert!((jr.a.get(0, 0).re - 1.0 / r2).abs() < 1e-15);
        assert!((jr.b.get(0, 0).re - 1.0 / r2).abs() < 1e-15);

        let mut r = rng(37);
        let f = ginibre(&mut r, 4, 4);
        let jr = joint_root(&f, &Mat::zeros(4, 4)).unwrap();
        let pf = polar(&f).unwrap();
        assert!(diff(&jr.h, &pf.modulus) < 1e-12);
        assert!(diff(&jr.a, &pf.phase) < 1e-10);
        assert!(op_norm(&jr.b).unwrap() < 1e-15);
    }

    #[test]
    fn joint_root_bounds_random() {
        let mut r = rng(41);
        for _ in 0..20 {
            let f = ginibre(&mut r, 6, 6);
            let g = ginibre(&mut r, 6, 6).scale_real(0.3);
            let jr = joint_root(&f, &g).unwrap();
            assert!(diff(&(&jr.a * &jr.h), &f) <= 1e-8);
            assert!(diff(&(&jr.b * &jr.h), &g) <= 1e-8);
            assert!(op_norm(&jr.a).unwrap() <= 1.0 + 1e-8);
            assert!(op_norm(&jr.b).unwrap() <= 1.0 + 1e-8);
            for q in [0.5, 1.0, 2.0] {
                let pq = p(q);
                let bound = concavity_modulus(p(q / 2.0)).sqrt()
                    * (schatten_norm(&f, pq).unwrap() + schatten_norm(&g, pq).unwrap());
                assert!(schatten_norm(&jr.h, pq).unwrap() <= bound + 1e-8);
            }
        }
    }

    #[test]
    fn joint_root_on_rank_deficient_pair() {
        let mut r = rng(43);
        let x = unit_vector(&mut r, 5);
        let f = rank_one(&x, &unit_vector(&mut r, 5)).unwrap();
        let g = rank_one(&x, &unit_vector(&mut r, 5)).unwrap();
        let jr = joint_root(&f, &g).unwrap();
        assert!(diff(&(&jr.a * &jr.h), &f) < 1e-12);
        // a and b vanish off the range of h
        let kernel = Mat::identity(5) - modulus_power(&jr.h, 0.0).unwrap();
        assert!(op_norm(&(&jr.a * &kernel)).unwrap() < 1e-12);
        assert!(op_norm(&(&jr.b * &kernel)).unwrap() < 1e-12);
    }

    #[test]
    fn trace_examples() {
        assert_eq!(trace(&Mat::identity(3)).unwrap(), C64::new(3.0, 0.0));
        assert!(trace(&Mat::zeros(2, 3)).is_err());
        let mut r = rng(47);
        let x = unit_vector(&mut r, 4);
        let y = unit_vector(&mut r, 4);
        // tr(x ⊗ y) = ⟨y|x⟩ = xᴴy
        let t = trace(&rank_one(&x, &y).unwrap()).unwrap();
        assert!((t - x.dotc(&y)).norm() < 1e-14);
        for _ in 0..10 {
            let a = ginibre(&mut r, 5, 5);
            let b = ginibre(&mut r, 5, 5);
            let ab = trace(&(&a * &b)).unwrap();
            let ba = trace(&(&b * &a)).unwrap();
            assert!((ab - ba).norm() < 1e-12 * (1.0 + ab.norm()));
        }
    }
}
