//! Orbital sign fixing and the non-bosonic energy correction
//!
//! E_nB = −Σ' [(pr|qs) − (ps|qr)] ⟨(1−n_r)n_p⟩^½ ⟨(1−n_s)n_q⟩^½
//!
//! where the primed sum skips the paired terms p = q, r = s.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::integrals::IntegralSet;
use crate::simulator::{OccupationMoments, PairBasis, SampledMoments};
use crate::{Error, Hartree, Method, Result};

/// Sign-fixing integrals smaller than this leave the sign at +1.
pub const SIGN_THRESHOLD: f64 = 1e-8;
const CLAMP_FLOOR: f64 = -1e-10;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProximityChains {
    /// Starts at the highest occupied orbital.
    pub occupied: Vec<usize>,
    /// Starts at the lowest virtual orbital.
    pub virtual_: Vec<usize>,
}

fn greedy_chain(h: &crate::linalg::Matrix, block: &[usize]) -> Vec<usize> {
    let mut left: Vec<usize> = block.to_vec();
    let mut chain = Vec::with_capacity(block.len());
    if left.is_empty() {
        return chain;
    }
    let mut cur = left.remove(0);
    chain.push(cur);
    while !left.is_empty() {
        // `left` keeps the walking order, so the first maximum wins ties
        let mut best = 0;
        for (i, &j) in left.iter().enumerate() {
            if h[(cur, j)].abs() > h[(cur, left[best])].abs() + 1e-12 {
                best = i;
            }
        }
        cur = left.remove(best);
        chain.push(cur);
    }
    chain
}

/// Orders each block by proximity in |h|, walking occupied orbitals
/// downward from n − 1 and virtual orbitals upward from n (0-based).
pub fn build_proximity_chains(s: &IntegralSet, npairs: usize) -> Result<ProximityChains> {
    let n = s.norb();
    if npairs == 0 || npairs > n {
        return Err(Error::InvalidOption(alloc::format!(
            "sign fixing needs 1 ≤ n ≤ N, got n = {npairs}, N = {n}"
        )));
    }
    let occ: Vec<usize> = (0..npairs).rev().collect();
    let vir: Vec<usize> = (npairs..n).collect();
    Ok(ProximityChains {
        occupied: greedy_chain(s.h(), &occ),
        virtual_: greedy_chain(s.h(), &vir),
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignAssignment {
    pub signs: Vec<i8>,
    pub occupied_chain: Vec<usize>,
    pub virtual_chain: Vec<usize>,
    /// Orbitals whose fixing integral fell below [`SIGN_THRESHOLD`].
    pub degenerate: Vec<usize>,
}

/// Chooses orbital signs so the chain integrals (i₊a|ia) and (i a₋|i a) are
/// positive, with i the highest occupied and a the lowest virtual orbital.
pub fn fix_orbital_signs(s: &IntegralSet, npairs: usize) -> Result<SignAssignment> {
    let chains = build_proximity_chains(s, npairs)?;
    let n = s.norb();
    let g = s.eri();
    let mut signs = vec![1i8; n];
    let mut degenerate = Vec::new();
    let mut walk = |chain: &[usize], integral: &dyn Fn(usize, usize) -> f64| {
        for w in chain.windows(2) {
            let (prev, cur) = (w[0], w[1]);
            let v = integral(prev, cur);
            if v.abs() < SIGN_THRESHOLD {
                log::warn!(
                    "sign of orbital {cur} left at +1: fixing integral {v:.3e} is degenerate"
                );
                degenerate.push(cur);
                signs[cur] = 1;
            } else {
                signs[cur] = if (signs[prev] as f64) * v > 0.0 {
                    1
                } else {
                    -1
                };
            }
        }
    };
    if npairs < n {
        let a = npairs;
        walk(&chains.occupied, &|i_plus, i| g.get(i_plus, a, i, a));
        let i = npairs - 1;
        walk(&chains.virtual_, &|a_minus, a| g.get(i, a_minus, i, a));
    }
    Ok(SignAssignment {
        signs,
        occupied_chain: chains.occupied,
        virtual_chain: chains.virtual_,
        degenerate,
    })
}

/// Which (p, q, r, s) enter the sum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum NbRange {
    /// p, q over reference-occupied and r, s over reference-virtual orbitals.
    #[default]
    ReferenceBlocks,
    /// Every active index.
    Unrestricted,
}

fn index_blocks(n: usize, npairs: usize, range: NbRange) -> (Vec<usize>, Vec<usize>) {
    match range {
        NbRange::ReferenceBlocks => ((0..npairs).collect(), (npairs..n).collect()),
        NbRange::Unrestricted => ((0..n).collect(), (0..n).collect()),
    }
}

fn amplitude_table(m: &OccupationMoments) -> Result<Vec<f64>> {
    let n = m.nqubits();
    let mut a = vec![0.0; n * n];
    for p in 0..n {
        for r in 0..n {
            let v = m.hole_particle(p, r);
            if v < CLAMP_FLOOR {
                return Err(Error::NegativeMoment { p, r, value: v });
            }
            a[p * n + r] = libm::sqrt(v.max(0.0));
        }
    }
    Ok(a)
}

/// One summand of E_nB.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NbTerm {
    pub p: usize,
    pub q: usize,
    pub r: usize,
    pub s: usize,
    /// (pr|qs) − (ps|qr)
    pub eri: f64,
    /// ⟨(1−n_r)n_p⟩^½ ⟨(1−n_s)n_q⟩^½
    pub factor: f64,
    pub contribution: f64,
}

/// Every non-excluded term, including those with a zero factor.
pub fn nonbosonic_terms(
    s_fixed: &IntegralSet,
    moments: &OccupationMoments,
    range: NbRange,
) -> Result<Vec<NbTerm>> {
    let n = s_fixed.norb();
    if moments.nqubits() != n {
        return Err(Error::Dimension {
            what: "moment table orbital count",
            expected: n,
            actual: moments.nqubits(),
        });
    }
    let a = amplitude_table(moments)?;
    let g = s_fixed.eri();
    let (holes, parts) = index_blocks(n, s_fixed.npairs(), range);
    let mut terms = Vec::new();
    for &p in &holes {
        for &q in &holes {
            for &r in &parts {
                for &s in &parts {
                    if p == q && r == s {
                        continue;
                    }
                    let eri = g.get(p, r, q, s) - g.get(p, s, q, r);
                    let factor = a[p * n + r] * a[q * n + s];
                    terms.push(NbTerm {
                        p,
                        q,
                        r,
                        s,
                        eri,
                        factor,
                        contribution: -eri * factor,
                    });
                }
            }
        }
    }
    Ok(terms)
}

pub fn nonbosonic_correction(
    s_fixed: &IntegralSet,
    moments: &OccupationMoments,
    range: NbRange,
) -> Result<Hartree> {
    Ok(nonbosonic_terms(s_fixed, moments, range)?
        .iter()
        .map(|t| t.contribution)
        .sum())
}

/// `p,q,r,s,eri,factor,contribution`
pub fn terms_csv(terms: &[NbTerm]) -> String {
    let mut out = String::from("p,q,r,s,eri,factor,contribution\n");
    for t in terms {
        out.push_str(&alloc::format!(
            "{},{},{},{},{:.12e},{:.12e},{:.12e}\n",
            t.p,
            t.q,
            t.r,
            t.s,
            t.eri,
            t.factor,
            t.contribution
        ));
    }
    out
}

/// E_nB from a Z-basis histogram, with a delta-method standard error.
/// Moments estimated as exactly zero contribute no variance.
pub fn nonbosonic_correction_sampled(
    s_fixed: &IntegralSet,
    basis: &PairBasis,
    sample: &SampledMoments,
    range: NbRange,
) -> Result<(Hartree, Hartree)> {
    let n = s_fixed.norb();
    if basis.nqubits() != n || sample.counts.len() != basis.len() {
        return Err(Error::Mismatch("histogram does not match the basis".into()));
    }
    let terms = nonbosonic_terms(s_fixed, &sample.moments, range)?;
    let energy = terms.iter().map(|t| t.contribution).sum();
    let a = amplitude_table(&sample.moments)?;
    // ∂E/∂m_pr with m = ⟨(1−n_r)n_p⟩ and a = √m
    let mut grad = vec![0.0; n * n];
    for t in &terms {
        let (i, j) = (t.p * n + t.r, t.q * n + t.s);
        if a[i] > 0.0 {
            grad[i] += -t.eri * a[j] / (2.0 * a[i]);
        }
        if a[j] > 0.0 {
            grad[j] += -t.eri * a[i] / (2.0 * a[j]);
        }
    }
    let shots = sample.shots as f64;
    let (mut m1, mut m2) = (0.0, 0.0);
    for (&b, &c) in basis.states().iter().zip(&sample.counts) {
        if c == 0 {
            continue;
        }
        let mut f = 0.0;
        for p in (0..n).filter(|&p| b >> p & 1 == 1) {
            for r in (0..n).filter(|&r| b >> r & 1 == 0) {
                f += grad[p * n + r];
            }
        }
        let w = c as f64 / shots;
        m1 += w * f;
        m2 += w * f * f;
    }
    let var = (m2 - m1 * m1).max(0.0) / shots;
    Ok((energy, libm::sqrt(var)))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorrectedEnergy {
    pub method: Method,
    pub energy: Hartree,
}

/// pair_energy + e_nb, tagged vqe-nB or oo-vqe-nB after the pair method.
pub fn corrected_energy(
    pair_energy: Hartree,
    e_nb: Hartree,
    base: Method,
) -> Result<CorrectedEnergy> {
    let method = match base {
        Method::Vqe => Method::VqeNb,
        Method::OoVqe => Method::OoVqeNb,
        other => {
            return Err(Error::InvalidOption(alloc::format!(
                "no non-bosonic variant of {other}"
            )))
        }
    };
    if !pair_energy.is_finite() || !e_nb.is_finite() {
        return Err(Error::InvalidOption("non-finite energy".into()));
    }
    Ok(CorrectedEnergy {
        method,
        energy: pair_energy + e_nb,
    })
}

#[derive(Debug, Clone)]
pub struct NbOutcome {
    pub signs: SignAssignment,
    pub fixed: IntegralSet,
    pub e_nb: Hartree,
}

/// Sign fixing followed by E_nB for exact moments.
pub fn nonbosonic_for_moments(
    s: &IntegralSet,
    moments: &OccupationMoments,
    range: NbRange,
) -> Result<NbOutcome> {
    let signs = fix_orbital_signs(s, s.npairs())?;
    let fixed = s.apply_sign_flips(&signs.signs)?;
    let e_nb = nonbosonic_correction(&fixed, moments, range)?;
    Ok(NbOutcome { signs, fixed, e_nb })
}
