//! Molecular integrals in a real spatial-orbital basis.
//!
//! Indices are 0-based everywhere in this crate; the FCIDUMP reader/writer in
//! the `pairvqe` crate is the only place that sees 1-based labels.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::linalg::{orthogonality_deviation, Matrix};
use crate::{Error, Result};

/// Compound index of an unordered pair.
#[inline]
fn pair_index(p: usize, q: usize) -> usize {
    if p >= q {
        p * (p + 1) / 2 + q
    } else {
        q * (q + 1) / 2 + p
    }
}

/// Two-electron integrals (pq|rs) in chemists' notation, stored once per
/// 8-fold symmetry class.
#[derive(Debug, Clone, PartialEq)]
pub struct Eri {
    norb: usize,
    data: Vec<f64>,
}

impl Eri {
    pub fn zeros(norb: usize) -> Self {
        let npair = norb * (norb + 1) / 2;
        Eri {
            norb,
            data: vec![0.0; npair * (npair + 1) / 2],
        }
    }

    #[inline]
    fn index(p: usize, q: usize, r: usize, s: usize) -> usize {
        pair_index(pair_index(p, q), pair_index(r, s))
    }

    pub fn norb(&self) -> usize {
        self.norb
    }

    #[inline]
    pub fn get(&self, p: usize, q: usize, r: usize, s: usize) -> f64 {
        self.data[Self::index(p, q, r, s)]
    }

    /// Sets (pq|rs) and, implicitly, all seven symmetry partners.
    #[inline]
    pub fn set(&mut self, p: usize, q: usize, r: usize, s: usize, value: f64) {
        let i = Self::index(p, q, r, s);
        self.data[i] = value;
    }

    /// Full N⁴ array, row-major in (p, q, r, s).
    pub fn to_dense(&self) -> Vec<f64> {
        let n = self.norb;
        let mut out = vec![0.0; n * n * n * n];
        for p in 0..n {
            for q in 0..n {
                for r in 0..n {
                    for s in 0..n {
                        out[((p * n + q) * n + r) * n + s] = self.get(p, q, r, s);
                    }
                }
            }
        }
        out
    }

    /// Packs a dense array, averaging each symmetry class.
    pub fn from_dense(norb: usize, dense: &[f64]) -> Self {
        let n = norb;
        let mut eri = Eri::zeros(n);
        let mut counts = vec![0u32; eri.data.len()];
        for p in 0..n {
            for q in 0..n {
                for r in 0..n {
                    for s in 0..n {
                        let i = Self::index(p, q, r, s);
                        eri.data[i] += dense[((p * n + q) * n + r) * n + s];
                        counts[i] += 1;
                    }
                }
            }
        }
        for (v, c) in eri.data.iter_mut().zip(counts) {
            *v /= c as f64;
        }
        eri
    }

    /// Iterates canonical entries (p ≥ q, r ≥ s, pq ≥ rs).
    pub fn canonical(&self) -> impl Iterator<Item = (usize, usize, usize, usize, f64)> + '_ {
        let n = self.norb;
        (0..n).flat_map(move |p| {
            (0..=p).flat_map(move |q| {
                let pq = pair_index(p, q);
                (0..=p).flat_map(move |r| {
                    (0..=r).filter_map(move |s| {
                        let rs = pair_index(r, s);
                        if rs > pq {
                            None
                        } else {
                            Some((p, q, r, s, self.get(p, q, r, s)))
                        }
                    })
                })
            })
        })
    }
}

/// Optional point-group labels carried through from FCIDUMP headers. Never
/// used in any computation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitalSymmetry {
    pub orbsym: Vec<i64>,
    pub isym: i64,
}

/// One- and two-electron integrals plus the scalar core energy.
#[derive(Debug, Clone, PartialEq)]
pub struct IntegralSet {
    nelec: usize,
    ms2: i32,
    e_core: f64,
    h: Matrix,
    eri: Eri,
    symmetry: Option<OrbitalSymmetry>,
}

impl IntegralSet {
    /// Validates and assembles an integral set. `h` must be symmetric to 1e-10.
    pub fn new(nelec: usize, ms2: i32, e_core: f64, h: Matrix, eri: Eri) -> Result<Self> {
        let norb = h.nrows();
        if !h.is_square() {
            return Err(Error::InvalidIntegrals(format!(
                "one-electron table is {}x{}",
                h.nrows(),
                h.ncols()
            )));
        }
        if eri.norb() != norb {
            return Err(Error::Dimension {
                what: "two-electron orbital count",
                expected: norb,
                actual: eri.norb(),
            });
        }
        if ms2 != 0 {
            return Err(Error::InvalidIntegrals(format!(
                "MS2 = {ms2}; only closed-shell singlets are supported"
            )));
        }
        if nelec % 2 != 0 {
            return Err(Error::InvalidIntegrals(format!(
                "odd electron count {nelec}"
            )));
        }
        if nelec / 2 > norb {
            return Err(Error::InvalidIntegrals(format!(
                "{} electron pairs do not fit in {norb} orbitals",
                nelec / 2
            )));
        }
        for p in 0..norb {
            for q in 0..p {
                if (h[(p, q)] - h[(q, p)]).abs() > 1e-10 {
                    return Err(Error::InvalidIntegrals(format!(
                        "h[{p}][{q}] = {} differs from h[{q}][{p}] = {}",
                        h[(p, q)],
                        h[(q, p)]
                    )));
                }
            }
        }
        if !e_core.is_finite() || h.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidIntegrals("non-finite integral".into()));
        }
        Ok(IntegralSet {
            nelec,
            ms2,
            e_core,
            h,
            eri,
            symmetry: None,
        })
    }

    pub fn with_symmetry(mut self, symmetry: Option<OrbitalSymmetry>) -> Self {
        self.symmetry = symmetry;
        self
    }

    pub fn norb(&self) -> usize {
        self.h.nrows()
    }

    pub fn nelec(&self) -> usize {
        self.nelec
    }

    pub fn npairs(&self) -> usize {
        self.nelec / 2
    }

    pub fn ms2(&self) -> i32 {
        self.ms2
    }

    pub fn e_core(&self) -> f64 {
        self.e_core
    }

    pub fn h(&self) -> &Matrix {
        &self.h
    }

    pub fn eri(&self) -> &Eri {
        &self.eri
    }

    pub fn symmetry(&self) -> Option<&OrbitalSymmetry> {
        self.symmetry.as_ref()
    }

    /// Largest absolute difference over every table, including e_core.
    pub fn max_abs_diff(&self, other: &IntegralSet) -> f64 {
        if self.norb() != other.norb() {
            return f64::INFINITY;
        }
        let dh = (&self.h - &other.h).amax();
        let de = self
            .eri
            .data
            .iter()
            .zip(&other.eri.data)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        dh.max(de).max((self.e_core - other.e_core).abs())
    }

    /// Folds the doubly occupied `frozen` orbitals into e_core and an
    /// effective one-electron operator over the remaining orbitals.
    pub fn freeze_core(&self, frozen: &[usize]) -> Result<IntegralSet> {
        let n = self.norb();
        let mut is_frozen = vec![false; n];
        for &f in frozen {
            if f >= n {
                return Err(Error::OrbitalIndex { index: f, norb: n });
            }
            if is_frozen[f] {
                return Err(Error::InvalidIntegrals(format!("orbital {f} frozen twice")));
            }
            is_frozen[f] = true;
        }
        if frozen.is_empty() {
            return Ok(self.clone());
        }
        if 2 * frozen.len() > self.nelec {
            return Err(Error::InvalidIntegrals(format!(
                "cannot freeze {} orbitals with {} electrons",
                frozen.len(),
                self.nelec
            )));
        }
        // Frozen orbitals must be among the reference-occupied ones, otherwise
        // they would overlap the active occupied block.
        if let Some(&f) = frozen.iter().find(|&&f| f >= self.npairs()) {
            return Err(Error::InvalidIntegrals(format!(
                "frozen orbital {f} is not doubly occupied in the reference"
            )));
        }
        let active: Vec<usize> = (0..n).filter(|&p| !is_frozen[p]).collect();
        let g = &self.eri;
        let mut e_core = self.e_core;
        for &i in frozen {
            e_core += 2.0 * self.h[(i, i)];
            for &j in frozen {
                e_core += 2.0 * g.get(i, i, j, j) - g.get(i, j, j, i);
            }
        }
        let na = active.len();
        let mut h = Matrix::zeros(na, na);
        for (a, &p) in active.iter().enumerate() {
            for (b, &q) in active.iter().enumerate() {
                let mut v = self.h[(p, q)];
                for &i in frozen {
                    v += 2.0 * g.get(p, q, i, i) - g.get(p, i, i, q);
                }
                h[(a, b)] = v;
            }
        }
        let mut eri = Eri::zeros(na);
        for p in 0..na {
            for q in 0..=p {
                for r in 0..=p {
                    for s in 0..=r {
                        eri.set(
                            p,
                            q,
                            r,
                            s,
                            g.get(active[p], active[q], active[r], active[s]),
                        );
                    }
                }
            }
        }
        let symmetry = self.symmetry.as_ref().map(|sym| OrbitalSymmetry {
            orbsym: active
                .iter()
                .filter_map(|&p| sym.orbsym.get(p).copied())
                .collect(),
            isym: sym.isym,
        });
        Ok(IntegralSet {
            nelec: self.nelec - 2 * frozen.len(),
            ms2: self.ms2,
            e_core,
            h,
            eri,
            symmetry,
        })
    }

    /// New orbitals φ'_k = Σ_p φ_p u_pk: h' = uᵀ h u and the 4-index transform
    /// of the ERIs done as four quarter transforms.
    pub fn rotate_orbitals(&self, u: &Matrix) -> Result<IntegralSet> {
        let n = self.norb();
        if u.nrows() != n || u.ncols() != n {
            return Err(Error::Dimension {
                what: "rotation matrix size",
                expected: n,
                actual: u.nrows(),
            });
        }
        let dev = orthogonality_deviation(u);
        if dev > 1e-10 {
            return Err(Error::NotOrthogonal(dev));
        }
        let h = u.transpose() * &self.h * u;
        let h = (&h + h.transpose()) * 0.5;
        let dense = self.eri.to_dense();
        let rotated = transform_dense_eri(n, &dense, u);
        Ok(IntegralSet {
            nelec: self.nelec,
            ms2: self.ms2,
            e_core: self.e_core,
            h,
            eri: Eri::from_dense(n, &rotated),
            symmetry: None,
        })
    }

    /// Multiplies orbital p by signs[p] ∈ {+1, −1}.
    pub fn apply_sign_flips(&self, signs: &[i8]) -> Result<IntegralSet> {
        let n = self.norb();
        if signs.len() != n {
            return Err(Error::Dimension {
                what: "sign vector length",
                expected: n,
                actual: signs.len(),
            });
        }
        if let Some(bad) = signs.iter().position(|&s| s != 1 && s != -1) {
            return Err(Error::InvalidOption(format!(
                "sign for orbital {bad} is {} (must be +1 or -1)",
                signs[bad]
            )));
        }
        let sg = |p: usize| f64::from(signs[p]);
        let mut h = self.h.clone();
        for p in 0..n {
            for q in 0..n {
                h[(p, q)] *= sg(p) * sg(q);
            }
        }
        let mut eri = self.eri.clone();
        for p in 0..n {
            for q in 0..=p {
                for r in 0..=p {
                    for s in 0..=r {
                        let v = self.eri.get(p, q, r, s) * sg(p) * sg(q) * sg(r) * sg(s);
                        eri.set(p, q, r, s, v);
                    }
                }
            }
        }
        Ok(IntegralSet {
            h,
            eri,
            ..self.clone()
        })
    }
}

/// (p'q'|r's') = Σ u_pp' u_qq' u_rr' u_ss' (pq|rs) on a dense N⁴ array.
pub fn transform_dense_eri(n: usize, dense: &[f64], u: &Matrix) -> Vec<f64> {
    // Each pass contracts the last index and cycles it to the front, so four
    // passes return the original index order.
    let mut cur = dense.to_vec();
    let mut next = vec![0.0; cur.len()];
    let n3 = n * n * n;
    for _ in 0..4 {
        next.iter_mut().for_each(|x| *x = 0.0);
        for abc in 0..n3 {
            let row = &cur[abc * n..abc * n + n];
            for (k, slot) in (0..n).map(|k| (k, k * n3 + abc)) {
                let mut acc = 0.0;
                for (d, val) in row.iter().enumerate() {
                    acc += u[(d, k)] * val;
                }
                next[slot] = acc;
            }
        }
        core::mem::swap(&mut cur, &mut next);
    }
    cur
}
