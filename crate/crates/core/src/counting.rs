//! Exact lattice-point accounting: the Gauss circle count, secret-space
//! cardinality, information rate, and per-coalition leakage.
//!
//! Every number that feeds a decision is an exact integer; floating point
//! appears only in display renderings of logarithms and the asymptotic
//! leakage bound.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::access::{coalition_lcm, coalition_lcms, coalition_members, AccessError};
use crate::gint::GaussianInt;
use crate::scheme::{
    sample_secret, validate_params, SchemeError, SchemeParams, ValidationReport,
    DEFAULT_COALITION_CAP,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CountError {
    #[error("bounds must satisfy 1 <= m-minus and 4*m-minus < m-plus, got ({m_minus}, {m_plus})")]
    InvalidBounds { m_minus: BigInt, m_plus: BigInt },
    #[error("leakage enumeration needs {candidates} candidates, above the cap {cap}")]
    EnumerationTooLarge { candidates: BigInt, cap: u64 },
    #[error(transparent)]
    Access(#[from] AccessError),
    #[error(transparent)]
    Scheme(#[from] SchemeError),
}

/// Number of Gaussian integers `z` with `N(z) ≤ r2`.
///
/// Evaluates `1 + 4·Σ_j (⌊r2/(4j+1)⌋ - ⌊r2/(4j+3)⌋)`; the sum is finite
/// because terms vanish once `4j+1 > r2`, so it runs for `⌈r2/4⌉` rounds.
///
/// # Panics
/// Panics if `r2` is negative.
pub fn gauss_count(r2: &BigInt) -> BigInt {
    assert!(!r2.is_negative(), "gauss_count of a negative bound");
    if let Some(small) = r2.to_u64() {
        if small <= 1u64 << 40 {
            return BigInt::from(gauss_count_u64(small));
        }
    }
    gauss_count_bigint(r2)
}

// same sum in machine words; exact for r2 up to 2^40 since the partial sums
// are monotone and the count stays near pi*r2
fn gauss_count_u64(r2: u64) -> u64 {
    let mut total = 1u64;
    let mut d1 = 1u64;
    while d1 <= r2 {
        total += 4 * (r2 / d1 - r2 / (d1 + 2));
        d1 += 4;
    }
    total
}

fn gauss_count_bigint(r2: &BigInt) -> BigInt {
    let mut total = BigInt::one();
    let mut d1 = BigInt::one();
    while d1 <= *r2 {
        let d3 = &d1 + 2;
        total += (r2 / &d1 - r2 / &d3) * 4;
        d1 += 4;
    }
    total
}

/// Exact size of the secret space `{ z : m⁻ ≤ N(z) < m⁺/4 }`, as the
/// difference of two circle counts.
pub fn secret_space_size(m_minus: &BigInt, m_plus: &BigInt) -> Result<BigInt, CountError> {
    if !m_minus.is_positive() || m_minus * 4 >= *m_plus {
        return Err(CountError::InvalidBounds {
            m_minus: m_minus.clone(),
            m_plus: m_plus.clone(),
        });
    }
    let outer = (m_plus - 1u32).div_floor(&BigInt::from(4));
    let inner = m_minus - 1u32;
    Ok(gauss_count(&outer) - gauss_count(&inner))
}

/// `⌊√n⌋ + 1`, a strict upper bound on `√n`.
fn sqrt_upper(n: &BigInt) -> BigInt {
    n.sqrt() + 1u32
}

fn leakage_count(
    m_minus: &BigInt,
    m_plus: &BigInt,
    l: &GaussianInt,
    x: &GaussianInt,
    cap: u64,
) -> Result<BigInt, CountError> {
    // every secret congruent to x is x + lambda*l; bound |lambda| by
    // (|x| + max |s|) / |l|, overshooting to be safe
    let max_norm = (m_plus - 1u32).div_floor(&BigInt::from(4));
    let numer = sqrt_upper(&x.norm()) + sqrt_upper(&max_norm);
    let denom = l.norm().sqrt().max(BigInt::one());
    let bound: BigInt = numer.div_floor(&denom) + 2;
    let width: BigInt = &bound * 2 + 1;
    let candidates = &width * &width;
    if candidates > BigInt::from(cap) {
        return Err(CountError::EnumerationTooLarge { candidates, cap });
    }
    let b = bound.to_i64().expect("bound fits i64 once under the cap");
    let mut count = BigInt::zero();
    for re in -b..=b {
        for im in -b..=b {
            let s = x + &(&GaussianInt::new(re, im) * l);
            let norm = s.norm();
            if norm >= *m_minus && norm * 4 < *m_plus {
                count += 1;
            }
        }
    }
    Ok(count)
}

/// Exact number of secrets a coalition cannot rule out: the count of
/// `λ ∈ Z[i]` with `x + λ·lcm(B)` inside the secret space, where `x` is the
/// coalition's reconstruction candidate.
///
/// Enumerates `λ` over a bounding square; `cap` limits how many candidates
/// the enumeration may visit.
pub fn leakage_exact(
    p: &SchemeParams,
    coalition: &[usize],
    x: &GaussianInt,
    cap: u64,
) -> Result<BigInt, CountError> {
    let l = coalition_lcm(p, coalition)?;
    leakage_count(&p.m_minus, &p.m_plus, &l, x, cap)
}

/// Information rate in exact form: the smallest share-space size
/// `min_i N(m_i)` against the secret-space size, with the logarithm ratio
/// available as a display value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InformationRate {
    pub min_share_norm: BigInt,
    pub secret_space: BigInt,
}

impl InformationRate {
    /// `log(min_i N(m_i)) / log(|S|)` as a display value.
    pub fn value(&self) -> f64 {
        let num = self.min_share_norm.to_f64().unwrap_or(f64::INFINITY).ln();
        let den = self.secret_space.to_f64().unwrap_or(f64::INFINITY).ln();
        num / den
    }
}

/// The exact rate pair for a parameter set. The share space of participant
/// `i` is the set of residue classes modulo `m_i`, of size `N(m_i)`.
pub fn information_rate(p: &SchemeParams) -> Result<InformationRate, CountError> {
    let size = secret_space_size(&p.m_minus, &p.m_plus)?;
    let min_share_norm = p
        .moduli
        .iter()
        .map(GaussianInt::norm)
        .min()
        .ok_or(AccessError::NoParticipants)?;
    Ok(InformationRate {
        min_share_norm,
        secret_space: size,
    })
}

/// Everything the audit knows about one coalition.
#[derive(Clone, Debug, PartialEq)]
pub struct CoalitionAudit {
    pub coalition: Vec<usize>,
    pub norm: BigInt,
    pub authorized: bool,
    /// Exact residual-candidate count for unauthorized coalitions, when the
    /// enumeration fits the cap. Counted against a representative dealt
    /// secret.
    pub exact_leakage: Option<BigInt>,
}

/// Audit of a parameter set: validity verdicts, secret-space accounting and
/// the per-coalition table.
#[derive(Clone, Debug, PartialEq)]
pub struct AuditReport {
    pub validation: ValidationReport,
    /// Exact `|S|`; `None` when the bounds are degenerate.
    pub secret_space_size: Option<BigInt>,
    pub information_rate: Option<InformationRate>,
    /// Asymptotic per-coalition bound `π(m⁺ - 4m⁻)/(4m⁻)`, display only.
    pub leakage_bound: Option<f64>,
    pub per_coalition: Vec<CoalitionAudit>,
}

#[derive(Clone, Debug)]
pub struct AuditOptions {
    /// Participant cap for the exhaustive coalition table.
    pub coalition_cap: usize,
    /// Candidate cap for each exact leakage enumeration.
    pub leakage_cap: u64,
    /// Seed for the representative secret the leakage counts refer to.
    pub seed: u64,
}

impl Default for AuditOptions {
    fn default() -> Self {
        AuditOptions {
            coalition_cap: DEFAULT_COALITION_CAP,
            leakage_cap: 4_000_000,
            seed: 0,
        }
    }
}

/// Builds the full audit. Invalid parameters still produce a report; only
/// structural problems (no moduli, a zero modulus, too many participants)
/// are errors.
pub fn build_audit(p: &SchemeParams, opts: &AuditOptions) -> Result<AuditReport, CountError> {
    let validation = validate_params(p, opts.coalition_cap)?;
    let secret_space = secret_space_size(&p.m_minus, &p.m_plus).ok();
    let information_rate = secret_space.as_ref().and_then(|size| {
        (size > &BigInt::one()).then(|| InformationRate {
            min_share_norm: p.moduli.iter().map(GaussianInt::norm).min().unwrap(),
            secret_space: size.clone(),
        })
    });
    let leakage_bound = leakage_bound_value(&p.m_minus, &p.m_plus);

    // leakage counts are relative to a concrete dealt secret
    let representative = secret_space
        .as_ref()
        .filter(|size| size.is_positive())
        .map(|_| sample_secret(p, opts.seed));

    let lcms = coalition_lcms(&p.moduli);
    let mut per_coalition = Vec::with_capacity(lcms.len() - 1);
    for (mask, l) in lcms.iter().enumerate().skip(1) {
        let norm = l.norm();
        let authorized = norm >= p.m_plus;
        let exact_leakage = match (&representative, authorized) {
            (Some(s), false) => {
                let x = s.mod_principal(l);
                leakage_count(&p.m_minus, &p.m_plus, l, &x, opts.leakage_cap).ok()
            }
            _ => None,
        };
        per_coalition.push(CoalitionAudit {
            coalition: coalition_members(mask),
            norm,
            authorized,
            exact_leakage,
        });
    }
    per_coalition
        .sort_by(|a, b| (a.coalition.len(), &a.coalition).cmp(&(b.coalition.len(), &b.coalition)));

    Ok(AuditReport {
        validation,
        secret_space_size: secret_space,
        information_rate,
        leakage_bound,
        per_coalition,
    })
}

fn leakage_bound_value(m_minus: &BigInt, m_plus: &BigInt) -> Option<f64> {
    if !m_minus.is_positive() {
        return None;
    }
    let four_mm: BigInt = m_minus * 4;
    let gap: BigInt = m_plus - &four_mm;
    Some(std::f64::consts::PI * gap.to_f64()? / four_mm.to_f64()?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gi(re: i64, im: i64) -> GaussianInt {
        GaussianInt::new(re, im)
    }

    fn threshold_2_of_3() -> SchemeParams {
        SchemeParams::new(vec![gi(15, 14), gi(10, -18), gi(13, 16)], 425, 178504)
    }

    /// Independent circle count: scan the bounding grid.
    fn brute_circle_count(r2: u64) -> u64 {
        let r = (r2 as f64).sqrt() as i64 + 2;
        let mut count = 0;
        for re in -r..=r {
            for im in -r..=r {
                if (re * re + im * im) as u64 <= r2 {
                    count += 1;
                }
            }
        }
        count
    }

    #[test]
    fn gauss_count_small_values() {
        assert_eq!(gauss_count(&BigInt::zero()), BigInt::one());
        assert_eq!(gauss_count(&BigInt::from(1)), BigInt::from(5));
        assert_eq!(gauss_count(&BigInt::from(2)), BigInt::from(9));
    }

    #[test]
    fn gauss_count_matches_brute_force() {
        for r2 in (0..=400u64).chain([1000, 2025, 44625]) {
            assert_eq!(
                gauss_count(&BigInt::from(r2)),
                BigInt::from(brute_circle_count(r2)),
                "r2 = {r2}"
            );
        }
    }

    #[test]
    fn big_integer_sum_agrees_with_machine_sum() {
        for r2 in (0..500u64).chain([9999, 44625]) {
            assert_eq!(
                gauss_count_bigint(&BigInt::from(r2)),
                BigInt::from(gauss_count_u64(r2)),
                "r2 = {r2}"
            );
        }
    }

    #[test]
    fn gauss_count_is_monotone() {
        let mut prev = BigInt::zero();
        for r2 in 0..300u32 {
            let next = gauss_count(&BigInt::from(r2));
            assert!(next >= prev);
            prev = next;
        }
    }

    #[test]
    #[should_panic(expected = "negative")]
    fn gauss_count_rejects_negative() {
        gauss_count(&BigInt::from(-1));
    }

    #[test]
    fn secret_space_unit_annulus() {
        // 1 <= N(z) <= 1: the four units
        assert_eq!(
            secret_space_size(&BigInt::one(), &BigInt::from(5)).unwrap(),
            BigInt::from(4)
        );
    }

    #[test]
    fn secret_space_matches_direct_enumeration() {
        let m_minus = BigInt::from(425);
        let m_plus = BigInt::from(178504);
        let size = secret_space_size(&m_minus, &m_plus).unwrap();
        let mut brute = 0u64;
        for re in -212i64..=212 {
            for im in -212i64..=212 {
                let norm = re * re + im * im;
                if norm >= 425 && norm * 4 < 178504 {
                    brute += 1;
                }
            }
        }
        assert_eq!(size, BigInt::from(brute));
    }

    #[test]
    fn secret_space_rejects_bad_bounds() {
        assert!(matches!(
            secret_space_size(&BigInt::from(4), &BigInt::from(4)),
            Err(CountError::InvalidBounds { .. })
        ));
        assert!(matches!(
            secret_space_size(&BigInt::zero(), &BigInt::from(10)),
            Err(CountError::InvalidBounds { .. })
        ));
    }

    #[test]
    fn leakage_matches_direct_secret_space_filter() {
        // small enough to enumerate the whole secret space directly
        let p = SchemeParams::new(vec![gi(7, 4), gi(-3, -13), gi(11, 8)], 185, 11570);
        let s = sample_secret(&p, 42);
        for coalition in [vec![1], vec![2], vec![3], vec![1, 2]] {
            let l = coalition_lcm(&p, &coalition).unwrap();
            let x = s.mod_principal(&l);
            let exact = leakage_exact(&p, &coalition, &x, 4_000_000).unwrap();
            let mut brute = BigInt::zero();
            for re in -54i64..=54 {
                for im in -54i64..=54 {
                    let cand = gi(re, im);
                    let norm = cand.norm();
                    if norm >= p.m_minus && &norm * 4 < p.m_plus && (&cand - &x).is_divisible_by(&l)
                    {
                        brute += 1;
                    }
                }
            }
            assert_eq!(exact, brute, "coalition {coalition:?}");
            // the dealt secret itself is always among the candidates
            assert!(exact >= BigInt::one());
        }
    }

    #[test]
    fn leakage_exceeds_two_for_validated_params() {
        use crate::access::gen_threshold_params;
        for seed in 0..3 {
            let p = gen_threshold_params(2, 3, (40, 120), seed).unwrap();
            let s = sample_secret(&p, seed);
            for i in 1..=3usize {
                let l = coalition_lcm(&p, &[i]).unwrap();
                let x = s.mod_principal(&l);
                let count = leakage_exact(&p, &[i], &x, 4_000_000).unwrap();
                assert!(
                    count > BigInt::from(2),
                    "seed {seed} coalition {{{i}}}: {count}"
                );
            }
        }
    }

    #[test]
    fn leakage_respects_enumeration_cap() {
        let p = threshold_2_of_3();
        let err = leakage_exact(&p, &[1], &GaussianInt::zero(), 100);
        assert!(matches!(err, Err(CountError::EnumerationTooLarge { .. })));
    }

    #[test]
    fn information_rate_values() {
        let p = threshold_2_of_3();
        let rate = information_rate(&p).unwrap();
        assert_eq!(rate.min_share_norm, BigInt::from(421));
        assert_eq!(
            rate.secret_space,
            secret_space_size(&p.m_minus, &p.m_plus).unwrap()
        );
        assert!(rate.value() > 0.50 && rate.value() < 0.52);

        // rate 1 at the definitional boundary
        let boundary = InformationRate {
            min_share_norm: BigInt::from(425),
            secret_space: BigInt::from(425),
        };
        assert_eq!(boundary.value(), 1.0);
    }

    #[test]
    fn rate_below_one_for_generated_params() {
        use crate::access::gen_threshold_params;
        for seed in 0..4 {
            let p = gen_threshold_params(2, 3, (50, 150), seed).unwrap();
            let rate = information_rate(&p).unwrap();
            assert!(rate.min_share_norm < rate.secret_space);
            assert!(rate.value() < 1.0);
        }
    }

    #[test]
    fn audit_of_valid_params() {
        let p = threshold_2_of_3();
        let report = build_audit(&p, &AuditOptions::default()).unwrap();
        assert!(report.validation.is_valid());
        assert_eq!(
            report.secret_space_size,
            Some(secret_space_size(&p.m_minus, &p.m_plus).unwrap())
        );
        assert_eq!(report.per_coalition.len(), 7);
        for entry in &report.per_coalition {
            let expect_authorized = entry.coalition.len() >= 2;
            assert_eq!(entry.authorized, expect_authorized);
            if entry.authorized {
                assert!(entry.exact_leakage.is_none());
            } else {
                // roughly pi*(m+/4 - m-)/N(m_i), about 327 here
                let count = entry.exact_leakage.as_ref().unwrap();
                assert!(count > &BigInt::from(300) && count < &BigInt::from(360));
            }
        }
        let bound = report.leakage_bound.unwrap();
        assert!((bound - 326.7).abs() < 1.0);
    }

    #[test]
    fn audit_of_invalid_params_still_reports() {
        // degenerate gap: no secret space, no rate, but a report
        let p = SchemeParams::new(vec![gi(2, 0)], 4, 4);
        let report = build_audit(&p, &AuditOptions::default()).unwrap();
        assert!(!report.validation.is_valid());
        assert_eq!(report.secret_space_size, None);
        assert_eq!(report.information_rate, None);
        assert_eq!(report.per_coalition.len(), 1);
        assert_eq!(report.per_coalition[0].exact_leakage, None);
    }

    #[test]
    fn audit_of_single_participant_params() {
        let p = SchemeParams::new(vec![gi(5, 2)], 1, 29);
        let report = build_audit(&p, &AuditOptions::default()).unwrap();
        assert!(report.validation.is_valid());
        assert!(report.secret_space_size.unwrap() > BigInt::zero());
        assert_eq!(report.per_coalition.len(), 1);
        assert!(report.per_coalition[0].authorized);
    }
}
