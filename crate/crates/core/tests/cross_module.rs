use modspin_core::car::{sector_statistics, FockModel};
use modspin_core::numerics::{relative_residual, CMatrix, CVector};
use modspin_core::random::random_vector;
use modspin_core::rep_models::Spin;
use modspin_core::standard_subspace::{tomita_pair, StandardSubspace};
use modspin_core::tomita::{modular_data, FiniteVNAlgebra};
use num_complex::Complex64;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Real span of `xΩ` over a Hermitian basis of `M_n ⊗ I`.
fn self_adjoint_orbit(n: usize, omega: &CVector) -> StandardSubspace {
    let id = CMatrix::identity(n, n);
    let mut vectors = Vec::new();
    for i in 0..n {
        for j in i..n {
            let mut re = CMatrix::zeros(n, n);
            let mut im = CMatrix::zeros(n, n);
            re[(i, j)] = Complex64::new(1.0, 0.0);
            re[(j, i)] = Complex64::new(1.0, 0.0);
            if i != j {
                im[(i, j)] = Complex64::new(0.0, 1.0);
                im[(j, i)] = Complex64::new(0.0, -1.0);
                vectors.push(im.kronecker(&id) * omega);
            }
            vectors.push(re.kronecker(&id) * omega);
        }
    }
    StandardSubspace::new(n * n, vectors).expect("cyclic vector gives a standard subspace")
}

fn tensor_factor(n: usize) -> FiniteVNAlgebra {
    let id = CMatrix::identity(n, n);
    let gens = (0..n * n)
        .map(|k| {
            let mut e = CMatrix::zeros(n, n);
            e[(k % n, k / n)] = Complex64::new(1.0, 0.0);
            e.kronecker(&id)
        })
        .collect();
    FiniteVNAlgebra::new(n * n, gens).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn subspace_and_algebra_modular_data_agree(seed in any::<u64>(), n in 2usize..=3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let omega = random_vector(n * n, &mut rng);
        let omega = omega.unscale(omega.norm());
        let from_algebra = modular_data(&tensor_factor(n), &omega).unwrap();
        let from_subspace = tomita_pair(&self_adjoint_orbit(n, &omega)).unwrap();
        prop_assert!(relative_residual(&from_subspace.delta, &from_algebra.delta) < 1e-8);
        prop_assert!(
            relative_residual(from_subspace.j.linear_part(), from_algebra.j.linear_part()) < 1e-8
        );
        prop_assert!(
            relative_residual(from_subspace.s.linear_part(), from_algebra.s.linear_part()) < 1e-8
        );
    }
}

#[test]
fn twist_phase_squared_is_sector_phase() {
    let sectors = sector_statistics(&FockModel::new(3).unwrap());
    for (spin, sector) in [Spin::Zero, Spin::Half].into_iter().zip(&sectors) {
        let z2 = spin.twist_phase() * spin.twist_phase();
        assert!((z2 - Complex64::new(sector.statistics_phase as f64, 0.0)).norm() < 1e-15);
    }
}
