//! Access-structure machinery: coalition norms, enumeration of the
//! structure induced by a parameter set, realization of arbitrary monotone
//! structures, threshold parameter search, and the weighted-threshold view
//! of coprime-moduli schemes.
//!
//! Coalitions are sets of 1-based participant indices. Enumeration walks
//! bitmasks, so everything here is exponential in the participant count and
//! guarded by a cap.

use std::collections::BTreeSet;

use num_bigint::{BigInt, RandBigInt};
use num_traits::One;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

use crate::gint::{gcd, lcm, lcm_all, GaussianInt};
use crate::scheme::{validate_params, SchemeParams, DEFAULT_COALITION_CAP};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AccessError {
    #[error("structure has no participants")]
    NoParticipants,
    #[error("{n} participants exceed the enumeration cap {cap}")]
    TooManyParticipants { n: usize, cap: usize },
    #[error("modulus of participant {index} is zero")]
    ZeroModulus { index: usize },
    #[error("empty coalition")]
    EmptyCoalition,
    #[error("participant {index} out of range 1..={n}")]
    InvalidParticipant { index: usize, n: usize },
    #[error("not an antichain: {subset:?} is contained in {superset:?}")]
    NotAntichain {
        subset: Vec<usize>,
        superset: Vec<usize>,
    },
    #[error("degenerate structure: {0}")]
    DegenerateStructure(String),
    #[error("search exhausted after {attempts} attempts")]
    SearchExhausted { attempts: usize },
    #[error("invalid threshold: t={t} must satisfy 1 <= t <= n={n}")]
    InvalidThreshold { t: usize, n: usize },
    #[error("moduli {i} and {j} are not coprime")]
    NotPairwiseCoprime { i: usize, j: usize },
}

/// Members of a bitmask coalition as sorted 1-based indices.
pub(crate) fn coalition_members(mask: usize) -> Vec<usize> {
    (0..usize::BITS as usize)
        .filter(|i| mask >> i & 1 == 1)
        .map(|i| i + 1)
        .collect()
}

fn coalition_mask(coalition: &[usize], n: usize) -> Result<usize, AccessError> {
    let mut mask = 0usize;
    for &i in coalition {
        if i < 1 || i > n {
            return Err(AccessError::InvalidParticipant { index: i, n });
        }
        mask |= 1 << (i - 1);
    }
    Ok(mask)
}

/// Canonical lcm of every coalition, indexed by bitmask. Entry 0 (the empty
/// coalition) is `1`, so its norm is 1 and it is never authorized.
pub(crate) fn coalition_lcms(moduli: &[GaussianInt]) -> Vec<GaussianInt> {
    let n = moduli.len();
    let mut lcms = Vec::with_capacity(1 << n);
    lcms.push(GaussianInt::one());
    for mask in 1..1usize << n {
        let low = mask.trailing_zeros() as usize;
        let rest = mask & (mask - 1);
        lcms.push(lcm(&lcms[rest], &moduli[low]));
    }
    lcms
}

fn check_moduli(p: &SchemeParams, cap: usize) -> Result<(), AccessError> {
    let n = p.moduli.len();
    if n == 0 {
        return Err(AccessError::NoParticipants);
    }
    if n > cap {
        return Err(AccessError::TooManyParticipants { n, cap });
    }
    if let Some(idx) = p.moduli.iter().position(|m| m.is_zero()) {
        return Err(AccessError::ZeroModulus { index: idx + 1 });
    }
    Ok(())
}

/// Canonical lcm of a coalition's moduli.
pub(crate) fn coalition_lcm(
    p: &SchemeParams,
    coalition: &[usize],
) -> Result<GaussianInt, AccessError> {
    if coalition.is_empty() {
        return Err(AccessError::EmptyCoalition);
    }
    let n = p.moduli.len();
    let mut members = BTreeSet::new();
    for &i in coalition {
        if i < 1 || i > n {
            return Err(AccessError::InvalidParticipant { index: i, n });
        }
        if p.moduli[i - 1].is_zero() {
            return Err(AccessError::ZeroModulus { index: i });
        }
        members.insert(i);
    }
    Ok(lcm_all(members.iter().map(|&i| &p.moduli[i - 1])))
}

/// Norm of a coalition: `N(lcm { m_i : i ∈ C })`.
pub fn coalition_norm(p: &SchemeParams, coalition: &[usize]) -> Result<BigInt, AccessError> {
    Ok(coalition_lcm(p, coalition)?.norm())
}

/// A monotone access structure stored by its minimal authorized coalitions.
///
/// The minimal family is an antichain of nonempty coalitions; a coalition is
/// authorized iff it contains some minimal one. The family may be empty, in
/// which case nothing is authorized.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AccessStructure {
    n: usize,
    minimal: BTreeSet<Vec<usize>>,
}

impl AccessStructure {
    pub fn new(n: usize, sets: impl IntoIterator<Item = Vec<usize>>) -> Result<Self, AccessError> {
        if n == 0 {
            return Err(AccessError::NoParticipants);
        }
        let mut minimal = BTreeSet::new();
        for set in sets {
            let mut members = BTreeSet::new();
            for i in set {
                if i < 1 || i > n {
                    return Err(AccessError::InvalidParticipant { index: i, n });
                }
                members.insert(i);
            }
            if members.is_empty() {
                return Err(AccessError::EmptyCoalition);
            }
            minimal.insert(members.into_iter().collect::<Vec<_>>());
        }
        for a in &minimal {
            for b in &minimal {
                if a != b && a.iter().all(|i| b.binary_search(i).is_ok()) {
                    return Err(AccessError::NotAntichain {
                        subset: a.clone(),
                        superset: b.clone(),
                    });
                }
            }
        }
        Ok(AccessStructure { n, minimal })
    }

    /// (t, n)-threshold structure: all size-`t` coalitions are minimal.
    pub fn threshold(t: usize, n: usize) -> Result<Self, AccessError> {
        if t < 1 || t > n {
            return Err(AccessError::InvalidThreshold { t, n });
        }
        let sets = (1..1usize << n)
            .filter(|mask| mask.count_ones() as usize == t)
            .map(coalition_members);
        AccessStructure::new(n, sets)
    }

    pub fn participants(&self) -> usize {
        self.n
    }

    pub fn minimal_coalitions(&self) -> &BTreeSet<Vec<usize>> {
        &self.minimal
    }

    pub fn is_authorized(&self, coalition: &[usize]) -> bool {
        let members: BTreeSet<usize> = coalition.iter().copied().collect();
        self.minimal
            .iter()
            .any(|min| min.iter().all(|i| members.contains(i)))
    }

    fn mask_authorized(&self, mask: usize) -> bool {
        self.minimal
            .iter()
            .any(|min| min.iter().all(|&i| mask >> (i - 1) & 1 == 1))
    }

    /// The maximal unauthorized coalitions. Contains the empty coalition
    /// exactly when every singleton is authorized.
    pub fn maximal_unauthorized(&self) -> Vec<Vec<usize>> {
        let full = 1usize << self.n;
        let mut result = Vec::new();
        'mask: for mask in 0..full {
            if self.mask_authorized(mask) {
                continue;
            }
            for bit in 0..self.n {
                let bigger = mask | 1 << bit;
                if bigger != mask && !self.mask_authorized(bigger) {
                    continue 'mask;
                }
            }
            result.push(coalition_members(mask));
        }
        result
    }
}

/// The access structure induced by a parameter set:
/// `A = { C : N(lcm(C)) ≥ m⁺ }`, returned by its minimal coalitions.
pub fn enumerate_structure(p: &SchemeParams, cap: usize) -> Result<AccessStructure, AccessError> {
    check_moduli(p, cap)?;
    let n = p.moduli.len();
    let lcms = coalition_lcms(&p.moduli);
    let mut authorized: Vec<bool> = lcms.iter().map(|l| l.norm() >= p.m_plus).collect();
    // the structure lives on nonempty coalitions; keep the empty one out
    // even for degenerate thresholds m⁺ ≤ 1
    authorized[0] = false;
    let mut minimal = Vec::new();
    for mask in 1..1usize << n {
        if !authorized[mask] {
            continue;
        }
        let is_minimal = (0..n)
            .filter(|&bit| mask >> bit & 1 == 1)
            .all(|bit| !authorized[mask & !(1 << bit)]);
        if is_minimal {
            minimal.push(coalition_members(mask));
        }
    }
    AccessStructure::new(n, minimal)
}

/// Draws a Gaussian integer with norm in `[lo, hi]`, coprime to everything
/// in `taken`.
fn draw_coprime(
    rng: &mut ChaCha20Rng,
    lo: &BigInt,
    hi: &BigInt,
    taken: &[GaussianInt],
    reject_norms: Option<&BTreeSet<BigInt>>,
) -> Result<GaussianInt, AccessError> {
    let radius = hi.sqrt();
    let from = -&radius;
    let to = &radius + 1;
    const ATTEMPTS: usize = 10_000;
    for _ in 0..ATTEMPTS {
        let z = GaussianInt {
            re: rng.gen_bigint_range(&from, &to),
            im: rng.gen_bigint_range(&from, &to),
        };
        let norm = z.norm();
        if &norm < lo || &norm > hi {
            continue;
        }
        if let Some(norms) = reject_norms {
            if norms.contains(&norm) {
                continue;
            }
        }
        if taken.iter().all(|t| gcd(t, &z).is_unit()) {
            return Ok(z);
        }
    }
    Err(AccessError::SearchExhausted { attempts: ATTEMPTS })
}

/// Builds scheme parameters realizing an arbitrary structure.
///
/// For each maximal unauthorized coalition `B_j` a coprime base `μ⁽ʲ⁾` with
/// `N(μ⁽ʲ⁾) > max(8, min_modulus_norm - 1)` is drawn, and participant `i`
/// receives the product of the bases of the coalitions it does *not* belong
/// to. Every authorized coalition then reaches the full product (norm
/// `m⁺`), while unauthorized ones stay at or below
/// `m⁻ = max_j N(lcm(B_j))`. The norm floor forces `m⁺ ≥ 9·m⁻`, which
/// already implies the leakage condition.
pub fn realize(
    structure: &AccessStructure,
    min_modulus_norm: u64,
    seed: u64,
) -> Result<SchemeParams, AccessError> {
    let n = structure.participants();
    if n > DEFAULT_COALITION_CAP {
        return Err(AccessError::TooManyParticipants {
            n,
            cap: DEFAULT_COALITION_CAP,
        });
    }
    if structure.minimal.is_empty() {
        return Err(AccessError::DegenerateStructure(
            "no authorized coalition".to_string(),
        ));
    }
    let blockers = structure.maximal_unauthorized();
    if blockers.iter().any(|b| b.is_empty()) {
        // only the empty coalition is unauthorized: every singleton is
        // authorized and there is nothing for the construction to separate
        return Err(AccessError::DegenerateStructure(
            "no nonempty unauthorized coalition".to_string(),
        ));
    }

    let floor = BigInt::from(min_modulus_norm.max(9));
    let band_hi = &floor * 4;
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let mut bases: Vec<GaussianInt> = Vec::with_capacity(blockers.len());
    for _ in &blockers {
        bases.push(draw_coprime(&mut rng, &floor, &band_hi, &bases, None)?);
    }

    let moduli: Vec<GaussianInt> = (1..=n)
        .map(|i| {
            bases
                .iter()
                .zip(&blockers)
                .filter(|(_, b)| !b.contains(&i))
                .fold(GaussianInt::one(), |acc, (mu, _)| &acc * mu)
        })
        .collect();

    let m_plus = bases.iter().fold(BigInt::one(), |acc, mu| acc * mu.norm());
    let m_minus = blockers
        .iter()
        .map(|b| lcm_all(b.iter().map(|&i| &moduli[i - 1])).norm())
        .max()
        .expect("at least one maximal unauthorized coalition");

    Ok(SchemeParams {
        moduli,
        m_minus,
        m_plus,
    })
}

/// Searches for pairwise coprime moduli of strictly increasing norm inside
/// `norm_band` that induce the (t, n)-threshold structure.
///
/// `m⁺` is the product of the `t` smallest norms and `m⁻` the largest
/// unauthorized coalition norm (the product of the `t-1` largest, or 1 for
/// `t = 1`). Fresh samples are drawn until the full parameter validation
/// passes and the secret annulus is visibly nonempty.
pub fn gen_threshold_params(
    t: usize,
    n: usize,
    norm_band: (u64, u64),
    seed: u64,
) -> Result<SchemeParams, AccessError> {
    if t < 1 || t > n {
        return Err(AccessError::InvalidThreshold { t, n });
    }
    if n > DEFAULT_COALITION_CAP {
        return Err(AccessError::TooManyParticipants {
            n,
            cap: DEFAULT_COALITION_CAP,
        });
    }
    let lo = BigInt::from(norm_band.0.max(2));
    let hi = BigInt::from(norm_band.1);
    let mut rng = ChaCha20Rng::seed_from_u64(seed);

    const ROUNDS: usize = 200;
    for _ in 0..ROUNDS {
        let Some(params) = threshold_candidate(t, n, &lo, &hi, &mut rng) else {
            continue;
        };
        if let Ok(report) = validate_params(&params, DEFAULT_COALITION_CAP) {
            if report.is_valid() && annulus_visibly_nonempty(&params) {
                return Ok(params);
            }
        }
    }
    Err(AccessError::SearchExhausted { attempts: ROUNDS })
}

fn threshold_candidate(
    t: usize,
    n: usize,
    lo: &BigInt,
    hi: &BigInt,
    rng: &mut ChaCha20Rng,
) -> Option<SchemeParams> {
    let mut moduli: Vec<GaussianInt> = Vec::with_capacity(n);
    let mut norms = BTreeSet::new();
    for _ in 0..n {
        let z = draw_coprime(rng, lo, hi, &moduli, Some(&norms)).ok()?;
        norms.insert(z.norm());
        moduli.push(z);
    }
    moduli.sort_by_key(|m| m.norm());

    let m_plus: BigInt = moduli.iter().take(t).map(GaussianInt::norm).product();
    let m_minus: BigInt = if t == 1 {
        BigInt::one()
    } else {
        moduli
            .iter()
            .skip(n - (t - 1))
            .map(GaussianInt::norm)
            .product()
    };
    Some(SchemeParams {
        moduli,
        m_minus,
        m_plus,
    })
}

/// True when some pure-real secret exists in the annulus: there is an
/// integer `a` with `m⁻ ≤ a² ≤ ⌊(m⁺-1)/4⌋`.
fn annulus_visibly_nonempty(p: &SchemeParams) -> bool {
    let max_norm: BigInt = (&p.m_plus - 1u32) / 4;
    max_norm.sqrt().pow(2) >= p.m_minus
}

/// Weighted-threshold view of a coprime-moduli scheme.
///
/// A coalition is authorized iff `Σ log N(m_i) ≥ log m⁺`, which this type
/// evaluates exactly in multiplicative form: `Π N(m_i) ≥ m⁺`. The
/// logarithmic weights themselves are irrational, so they are only exposed
/// as display values.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightedThreshold {
    /// `N(m_i)`: participant `i` carries weight `log N(m_i)`.
    pub weight_norms: Vec<BigInt>,
    /// `m⁺`: the threshold is `log m⁺`.
    pub threshold_norm: BigInt,
}

impl WeightedThreshold {
    pub fn participants(&self) -> usize {
        self.weight_norms.len()
    }

    /// Exact multiplicative comparison `Π_{i∈C} N(m_i) ≥ m⁺`.
    pub fn authorizes(&self, coalition: &[usize]) -> Result<bool, AccessError> {
        let n = self.weight_norms.len();
        let mask = coalition_mask(coalition, n)?;
        Ok(self.mask_authorizes(mask))
    }

    fn mask_authorizes(&self, mask: usize) -> bool {
        let product: BigInt = self
            .weight_norms
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, w)| w)
            .product();
        product >= self.threshold_norm
    }

    /// The structure induced by the weighted comparison, as minimal sets.
    pub fn induced_structure(&self) -> Result<AccessStructure, AccessError> {
        let n = self.weight_norms.len();
        if n == 0 {
            return Err(AccessError::NoParticipants);
        }
        if n > DEFAULT_COALITION_CAP {
            return Err(AccessError::TooManyParticipants {
                n,
                cap: DEFAULT_COALITION_CAP,
            });
        }
        let mut minimal = Vec::new();
        for mask in 1..1usize << n {
            if !self.mask_authorizes(mask) {
                continue;
            }
            let is_minimal = (0..n)
                .filter(|&bit| mask >> bit & 1 == 1)
                .all(|bit| !self.mask_authorizes(mask & !(1 << bit)));
            if is_minimal {
                minimal.push(coalition_members(mask));
            }
        }
        AccessStructure::new(n, minimal)
    }

    /// Display-only logarithmic weights (natural log of the norms).
    pub fn log_weights(&self) -> Vec<f64> {
        use num_traits::ToPrimitive;
        self.weight_norms
            .iter()
            .map(|w| w.to_f64().unwrap_or(f64::INFINITY).ln())
            .collect()
    }
}

/// The weighted-threshold representation of a pairwise-coprime scheme:
/// weights `log N(m_i)` and threshold `log m⁺`, held in exact
/// multiplicative form.
pub fn weighted_representation(p: &SchemeParams) -> Result<WeightedThreshold, AccessError> {
    check_moduli(p, DEFAULT_COALITION_CAP)?;
    for i in 0..p.moduli.len() {
        for j in i + 1..p.moduli.len() {
            if !gcd(&p.moduli[i], &p.moduli[j]).is_unit() {
                return Err(AccessError::NotPairwiseCoprime { i: i + 1, j: j + 1 });
            }
        }
    }
    Ok(WeightedThreshold {
        weight_norms: p.moduli.iter().map(GaussianInt::norm).collect(),
        threshold_norm: p.m_plus.clone(),
    })
}
