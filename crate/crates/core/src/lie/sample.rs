//! Seeded random unitaries and subgroup elements (float mode).

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::LieBasis;
use crate::linalg::float::{expm, from_nalgebra, C64};
use crate::linalg::{CMatrix, Subspace};
use crate::scalar::{ComplexScalar, RingElem};

/// Independent stream for sample `index` under `seed`; order of evaluation does not matter.
pub fn sample_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

fn gaussian(rng: &mut impl Rng) -> f64 {
    rng.sample(StandardNormal)
}

/// Haar unitary from the phase-corrected QR factorization of a complex Gaussian matrix.
pub fn haar_unitary(n: usize, rng: &mut impl Rng, special: bool) -> CMatrix<f64> {
    let z = DMatrix::<C64>::from_fn(n, n, |_, _| C64::new(gaussian(rng), gaussian(rng)));
    let qr = z.qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..n {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 {
            d / d.norm()
        } else {
            C64::new(1.0, 0.0)
        };
        for i in 0..n {
            q[(i, j)] *= phase;
        }
    }
    if special {
        let det = q.determinant();
        let arg = det.im.atan2(det.re);
        let fix = C64::from_polar(1.0, -arg / n as f64);
        q *= fix;
    }
    from_nalgebra(&q)
}

/// Reproducible group element for a seed.
pub fn sample_group_element(n: usize, seed: u64, special: bool) -> CMatrix<f64> {
    haar_unitary(n, &mut sample_rng(seed, 0), special)
}

/// Random element of a float subspace, scaled to Frobenius norm `radius · u` with u uniform in [0,1).
pub fn random_subspace_element(
    basis: &LieBasis,
    h: &Subspace<f64>,
    radius: f64,
    rng: &mut impl Rng,
) -> CMatrix<f64> {
    let mut coords = vec![0.0; basis.dim()];
    for row in h.basis() {
        let w = gaussian(rng);
        for (c, r) in coords.iter_mut().zip(row) {
            *c += w * r;
        }
    }
    let x = basis.element(&coords);
    let norm = x.frobenius();
    if norm == 0.0 {
        return x;
    }
    let target = radius * rng.random::<f64>();
    x.scale(&ComplexScalar::real(target / norm))
}

/// exp(x) for x drawn from a subalgebra: a sample of the connected subgroup.
pub fn sample_subgroup_element(
    basis: &LieBasis,
    h: &Subspace<f64>,
    rng: &mut impl Rng,
) -> CMatrix<f64> {
    expm(&random_subspace_element(basis, h, 2.0, rng))
}

/// Block-diagonal Haar sample diag(U_1, …, U_r) for consecutive block sizes, with det 1 if `special`.
pub fn block_diagonal_unitary(sizes: &[usize], rng: &mut impl Rng, special: bool) -> CMatrix<f64> {
    let n: usize = sizes.iter().sum();
    let mut g = CMatrix::<f64>::zeros(n, n);
    let mut offset = 0;
    for &s in sizes {
        let u = haar_unitary(s, rng, false);
        for i in 0..s {
            for j in 0..s {
                g.set(offset + i, offset + j, u.get(i, j).clone());
            }
        }
        offset += s;
    }
    if special {
        let det = g.det();
        let arg = det.im.atan2(det.re);
        let fix = ComplexScalar::new((-arg).cos(), (-arg).sin());
        let first = sizes.first().copied().unwrap_or(0);
        for i in 0..first {
            for j in 0..first {
                let v = g.get(i, j).mul_ref(&fix);
                g.set(i, j, v);
            }
        }
    }
    g
}

/// Random diagonal element of SU(n) (or U(n)).
pub fn torus_element(n: usize, rng: &mut impl Rng, special: bool) -> CMatrix<f64> {
    let mut angles: Vec<f64> = (0..n)
        .map(|_| rng.random::<f64>() * std::f64::consts::TAU)
        .collect();
    if special {
        let total: f64 = angles[..n - 1].iter().sum();
        angles[n - 1] = -total;
    }
    let mut g = CMatrix::<f64>::zeros(n, n);
    for (i, a) in angles.iter().enumerate() {
        g.set(i, i, ComplexScalar::new(a.cos(), a.sin()));
    }
    g
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::{build_block_subalgebra, Algebra, BlockVariant};
    use crate::linalg::float::frobenius_distance;

    #[test]
    fn reproducible_and_unitary() {
        let a = sample_group_element(5, 42, false);
        let b = sample_group_element(5, 42, false);
        assert_eq!(a, b);
        assert!(a.unitarity_residual() < 1e-12);
    }

    #[test]
    fn special_has_unit_determinant() {
        for seed in 0..20 {
            let g = sample_group_element(4, seed, true);
            let d = g.det();
            assert!((d.re - 1.0).abs() < 1e-12 && d.im.abs() < 1e-12);
        }
    }

    #[test]
    fn distinct_seeds_differ() {
        for seed in 0..100 {
            let a = sample_group_element(3, seed, true);
            let b = sample_group_element(3, seed + 1000, true);
            assert!(frobenius_distance(&a, &b) > 0.1);
        }
    }

    #[test]
    fn subgroup_samples_stay_in_the_block() {
        let basis = LieBasis::new(4, Algebra::Su);
        let h = build_block_subalgebra::<f64>(&basis, 2, BlockVariant::SuBlock).unwrap();
        let mut rng = sample_rng(3, 0);
        let g = sample_subgroup_element(&basis, &h, &mut rng);
        assert!(g.unitarity_residual() < 1e-12);
        for (i, j) in [(0, 2), (0, 3), (1, 2), (3, 1)] {
            assert!(g.get(i, j).magnitude() < 1e-14);
        }
        let d = g.det();
        assert!((d.re - 1.0).abs() < 1e-10);
        let bd = block_diagonal_unitary(&[1, 3], &mut rng, true);
        let d = bd.det();
        assert!((d.re - 1.0).abs() < 1e-12 && d.im.abs() < 1e-12);
    }
}
