use alloc::vec::Vec;

use crate::linalg::binomial;
use crate::{Error, Result};

/// The weight-n bitstrings over N qubits, indexed in combinadic (colex) order,
/// which coincides with increasing integer value. Index 0 is the reference
/// with the lowest n bits set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairBasis {
    nqubits: usize,
    npairs: usize,
    states: Vec<u64>,
    // choose[m][k] = C(m, k) for m < nqubits, k ≤ npairs
    choose: Vec<Vec<usize>>,
}

impl PairBasis {
    /// Upper bound on the basis size this type will enumerate.
    pub const MAX_DIM: usize = 50_000_000;

    pub fn new(nqubits: usize, npairs: usize) -> Result<PairBasis> {
        if nqubits > 63 {
            return Err(Error::SizeGuard {
                what: "qubit count",
                dim: nqubits,
                limit: 63,
            });
        }
        if npairs > nqubits {
            return Err(Error::InvalidOption(alloc::format!(
                "{npairs} pairs do not fit in {nqubits} qubits"
            )));
        }
        let dim = binomial(nqubits, npairs);
        if dim > Self::MAX_DIM {
            return Err(Error::SizeGuard {
                what: "pair basis",
                dim,
                limit: Self::MAX_DIM,
            });
        }
        let choose = (0..=nqubits)
            .map(|m| (0..=npairs + 1).map(|k| binomial(m, k)).collect())
            .collect();
        let mut states = Vec::with_capacity(dim);
        if npairs == 0 {
            states.push(0);
        } else {
            // Gosper's hack walks same-weight integers in increasing order.
            let mut v: u64 = (1u64 << npairs) - 1;
            let limit = 1u64 << nqubits;
            while v < limit {
                states.push(v);
                let c = v & v.wrapping_neg();
                let r = v + c;
                v = (((r ^ v) >> 2) / c) | r;
            }
        }
        debug_assert_eq!(states.len(), dim);
        Ok(PairBasis {
            nqubits,
            npairs,
            states,
            choose,
        })
    }

    pub fn nqubits(&self) -> usize {
        self.nqubits
    }

    pub fn npairs(&self) -> usize {
        self.npairs
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn states(&self) -> &[u64] {
        &self.states
    }

    pub fn unrank(&self, index: usize) -> u64 {
        self.states[index]
    }

    /// Combinadic rank Σ_k C(pos_k, k+1) over set bits pos_0 < pos_1 < ….
    pub fn rank(&self, bits: u64) -> Option<usize> {
        if bits.count_ones() as usize != self.npairs || (bits >> self.nqubits) != 0 {
            return None;
        }
        let mut rest = bits;
        let mut k = 0;
        let mut r = 0;
        while rest != 0 {
            let pos = rest.trailing_zeros() as usize;
            k += 1;
            r += self.choose[pos][k];
            rest &= rest - 1;
        }
        Some(r)
    }

    /// Index of the reference `1…10…0` (always 0).
    pub fn reference_index(&self) -> usize {
        0
    }

    /// Bitstring label with orbital 0 leftmost, e.g. `1100`.
    pub fn label(&self, bits: u64) -> alloc::string::String {
        (0..self.nqubits)
            .map(|p| if bits >> p & 1 == 1 { '1' } else { '0' })
            .collect()
    }

    /// Pairs (k, k') with bit `from` set / `to` clear in state k, and k' the
    /// state obtained by moving that bit.
    pub fn hop_pairs(&self, from: usize, to: usize) -> Vec<(u32, u32)> {
        let mask = (1u64 << from) | (1u64 << to);
        self.states
            .iter()
            .enumerate()
            .filter(|(_, &b)| b >> from & 1 == 1 && b >> to & 1 == 0)
            .map(|(k, &b)| {
                let k2 = self.rank(b ^ mask).expect("hop stays in the sector");
                (k as u32, k2 as u32)
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn reference_is_rank_zero() {
        let b = PairBasis::new(6, 4).unwrap();
        assert_eq!(b.len(), 15);
        assert_eq!(b.unrank(0), 0b1111);
        assert_eq!(b.label(b.unrank(0)), "111100");
        assert_eq!(b.rank(0b1111), Some(0));
    }

    #[test]
    fn wrong_weight_has_no_rank() {
        let b = PairBasis::new(4, 2).unwrap();
        assert_eq!(b.rank(0b0111), None);
        assert_eq!(b.rank(0b1_0001), None);
    }

    #[test]
    fn empty_and_full_sectors() {
        assert_eq!(PairBasis::new(3, 0).unwrap().states(), &[0]);
        assert_eq!(PairBasis::new(3, 3).unwrap().states(), &[0b111]);
    }

    proptest! {
        #[test]
        fn rank_is_a_monotone_bijection(n in 1usize..12, frac in 0.0f64..1.0) {
            let k = ((n as f64) * frac) as usize;
            let b = PairBasis::new(n, k).unwrap();
            for (i, &s) in b.states().iter().enumerate() {
                prop_assert_eq!(b.rank(s), Some(i));
                prop_assert_eq!(s.count_ones() as usize, k);
                if i > 0 {
                    prop_assert!(s > b.unrank(i - 1));
                }
            }
        }
    }
}
