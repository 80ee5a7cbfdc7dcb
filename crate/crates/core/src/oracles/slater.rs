use alloc::vec::Vec;

use crate::integrals::IntegralSet;
use crate::linalg::{lowest_eigenpair, Matrix};
use crate::simulator::PairBasis;
use crate::{Error, Hartree, Result};

// Spin orbitals: α p → bit p, β p → bit norb + p. Determinants are
// ordered products over increasing spin-orbital index.

fn annihilate(d: u128, p: usize) -> Option<(u128, f64)> {
    if d >> p & 1 == 0 {
        return None;
    }
    let sign = if (d & ((1u128 << p) - 1)).count_ones() % 2 == 0 {
        1.0
    } else {
        -1.0
    };
    Some((d ^ 1 << p, sign))
}

fn create(d: u128, p: usize) -> Option<(u128, f64)> {
    if d >> p & 1 == 1 {
        return None;
    }
    let sign = if (d & ((1u128 << p) - 1)).count_ones() % 2 == 0 {
        1.0
    } else {
        -1.0
    };
    Some((d | 1 << p, sign))
}

struct SpinOrbitals<'a> {
    s: &'a IntegralSet,
    n: usize,
}

impl SpinOrbitals<'_> {
    fn h(&self, p: usize, q: usize) -> f64 {
        if (p < self.n) != (q < self.n) {
            return 0.0;
        }
        self.s.h()[(p % self.n, q % self.n)]
    }

    /// ⟨PQ|RS⟩ in physicists' notation.
    fn phys(&self, p: usize, q: usize, r: usize, t: usize) -> f64 {
        let n = self.n;
        if (p < n) != (r < n) || (q < n) != (t < n) {
            return 0.0;
        }
        self.s.eri().get(p % n, r % n, q % n, t % n)
    }

    fn anti(&self, p: usize, q: usize, r: usize, t: usize) -> f64 {
        self.phys(p, q, r, t) - self.phys(p, q, t, r)
    }
}

fn bits(d: u128) -> impl Iterator<Item = usize> {
    (0..128).filter(move |&p| d >> p & 1 == 1)
}

/// ⟨D'|H|D⟩ between determinants given as (α string, β string), by the
/// Slater–Condon rules. Includes E_core on the diagonal.
pub fn determinant_matrix_element(s: &IntegralSet, bra: (u64, u64), ket: (u64, u64)) -> f64 {
    let n = s.norb();
    let so = SpinOrbitals { s, n };
    let pack = |(a, b): (u64, u64)| a as u128 | (b as u128) << n;
    let (d2, d1) = (pack(bra), pack(ket));
    let diff = d1 ^ d2;
    match diff.count_ones() {
        0 => {
            let occ: Vec<usize> = bits(d1).collect();
            let mut e = s.e_core();
            for &p in &occ {
                e += so.h(p, p);
                for &q in &occ {
                    e += 0.5 * so.anti(p, q, p, q);
                }
            }
            e
        }
        2 => {
            let m = bits(d1 & diff).next().unwrap();
            let p = bits(d2 & diff).next().unwrap();
            let (t, s1) = annihilate(d1, m).unwrap();
            let (_, s2) = create(t, p).unwrap();
            let mut v = so.h(p, m);
            for q in bits(d1) {
                v += so.anti(p, q, m, q);
            }
            s1 * s2 * v
        }
        4 => {
            let mut holes = bits(d1 & diff);
            let (m, nn) = (holes.next().unwrap(), holes.next().unwrap());
            let mut parts = bits(d2 & diff);
            let (p, q) = (parts.next().unwrap(), parts.next().unwrap());
            // ⟨D2| a†_p a†_q a_n a_m |D1⟩
            let (t, s1) = annihilate(d1, m).unwrap();
            let (t, s2) = annihilate(t, nn).unwrap();
            let (t, s3) = create(t, q).unwrap();
            let (_, s4) = create(t, p).unwrap();
            s1 * s2 * s3 * s4 * so.anti(p, q, m, nn)
        }
        _ => 0.0,
    }
}

/// The full Ms = 0 Hamiltonian matrix over colex-ordered (α, β) strings,
/// element by element.
pub fn determinant_energy_matrix(s: &IntegralSet) -> Result<Matrix> {
    let strings = PairBasis::new(s.norb(), s.npairs())?;
    let ns = strings.len();
    if ns * ns > 4000 {
        return Err(Error::SizeGuard {
            what: "determinant matrix",
            dim: ns * ns,
            limit: 4000,
        });
    }
    let st = strings.states();
    Ok(Matrix::from_fn(ns * ns, ns * ns, |i, j| {
        determinant_matrix_element(s, (st[i / ns], st[i % ns]), (st[j / ns], st[j % ns]))
    }))
}

/// Lowest eigenvalue of H restricted to closed-shell determinants (α = β).
pub fn seniority_zero_fci_energy(s: &IntegralSet) -> Result<Hartree> {
    let strings = PairBasis::new(s.norb(), s.npairs())?;
    let ns = strings.len();
    if ns > 5000 {
        return Err(Error::SizeGuard {
            what: "seniority-zero determinant matrix",
            dim: ns,
            limit: 5000,
        });
    }
    let st = strings.states();
    let m = Matrix::from_fn(ns, ns, |i, j| {
        determinant_matrix_element(s, (st[i], st[i]), (st[j], st[j]))
    });
    Ok(lowest_eigenpair(m).0)
}
