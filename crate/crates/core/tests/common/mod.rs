#![allow(dead_code)]

use pairvqe_core::integrals::Eri;
use pairvqe_core::linalg::Matrix;
use pairvqe_core::IntegralSet;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Random integrals with a positive semidefinite two-electron tensor built
/// from symmetric factors, and a diagonally dominant one-electron part so the
/// lowest orbitals are the occupied ones.
pub fn random_integrals(norb: usize, nelec: usize, seed: u64) -> IntegralSet {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut u = |scale: f64| scale * (2.0 * rng.random::<f64>() - 1.0);
    let mut h = Matrix::zeros(norb, norb);
    for p in 0..norb {
        h[(p, p)] = -2.0 + 0.6 * p as f64 + u(0.05);
        for q in 0..p {
            let v = u(0.1);
            h[(p, q)] = v;
            h[(q, p)] = v;
        }
    }
    let nfac = norb + 2;
    let factors: Vec<Matrix> = (0..nfac)
        .map(|l| {
            let mut b = Matrix::zeros(norb, norb);
            for p in 0..norb {
                for q in 0..=p {
                    let v = if p == q {
                        0.5 / (1.0 + l as f64) + u(0.1)
                    } else {
                        u(0.12)
                    };
                    b[(p, q)] = v;
                    b[(q, p)] = v;
                }
            }
            b
        })
        .collect();
    let mut eri = Eri::zeros(norb);
    for p in 0..norb {
        for q in 0..=p {
            for r in 0..norb {
                for s in 0..=r {
                    let v: f64 = factors.iter().map(|b| b[(p, q)] * b[(r, s)]).sum();
                    eri.set(p, q, r, s, v);
                }
            }
        }
    }
    IntegralSet::new(nelec, 0, 0.7, h, eri).unwrap()
}
