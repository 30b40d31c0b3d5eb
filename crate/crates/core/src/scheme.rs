//! The Mignotte scheme over Z\[i\] with principal-value reductions.
//!
//! Parameters are a sequence of nonzero Gaussian moduli `m_1..m_n` plus two
//! integer bounds `m⁻ < m⁺` sandwiching a gap that no coalition norm may
//! enter. Secrets live in the annulus `m⁻ ≤ N(s) < m⁺/4`; the share of
//! participant `i` is the principal value `s mod m_i`. Coalitions whose lcm
//! has norm at least `m⁺` recover the secret exactly; coalitions below `m⁻`
//! recover a congruent but different candidate, which callers can inspect
//! for leakage analysis instead of being refused.

use num_bigint::{BigInt, RandBigInt};
use num_integer::Integer;
use num_traits::Signed;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

use crate::access::{coalition_lcms, coalition_members};
use crate::crt::{self, Congruence, CrtError};
use crate::gint::GaussianInt;

/// Upper bound on participants for the exhaustive coalition checks.
pub const DEFAULT_COALITION_CAP: usize = 20;

/// Rational lower bound of π used by the leakage condition:
/// `3.14159265358979 = PI_LO_NUM / PI_LO_DEN`. Comparisons against it are
/// exact integer arithmetic; values within `(PI_LO, π)` of the boundary are
/// conservatively rejected.
pub const PI_LO_NUM: u64 = 314_159_265_358_979;
pub const PI_LO_DEN: u64 = 100_000_000_000_000;

/// Scheme parameters: the moduli sequence and the norm gap `(m⁻, m⁺)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SchemeParams {
    pub moduli: Vec<GaussianInt>,
    pub m_minus: BigInt,
    pub m_plus: BigInt,
}

impl SchemeParams {
    pub fn new(
        moduli: Vec<GaussianInt>,
        m_minus: impl Into<BigInt>,
        m_plus: impl Into<BigInt>,
    ) -> Self {
        SchemeParams {
            moduli,
            m_minus: m_minus.into(),
            m_plus: m_plus.into(),
        }
    }

    pub fn participants(&self) -> usize {
        self.moduli.len()
    }
}

/// One participant's share: the principal residue of the secret modulo the
/// participant's modulus.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Share {
    /// 1-based participant index.
    pub index: usize,
    pub modulus: GaussianInt,
    pub residue: GaussianInt,
}

/// Outcome of the per-condition parameter checks.
///
/// `interval_violations` lists every coalition whose norm falls strictly
/// inside `(m⁻, m⁺)`, together with that norm.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValidationReport {
    /// `4·m⁻ < m⁺`.
    pub bound_gap_ok: bool,
    /// Coalitions with `m⁻ < N(lcm(C)) < m⁺`, which would make the access
    /// structure ambiguous.
    pub interval_violations: Vec<(Vec<usize>, BigInt)>,
    /// `π·(m⁺ − 4m⁻) > 4m⁻`, checked against the rational lower bound of π.
    pub pi_condition_ok: bool,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.bound_gap_ok && self.interval_violations.is_empty() && self.pi_condition_ok
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SchemeError {
    #[error("no participants: the moduli sequence is empty")]
    NoParticipants,
    #[error("{n} participants exceed the coalition-enumeration cap {cap}")]
    TooManyParticipants { n: usize, cap: usize },
    #[error("modulus of participant {index} is zero")]
    ZeroModulus { index: usize },
    #[error("bounds must satisfy 0 < m-minus and 0 < m-plus, got ({m_minus}, {m_plus})")]
    NonPositiveBounds { m_minus: BigInt, m_plus: BigInt },
    #[error("scheme parameters failed validation")]
    InvalidParams(Box<ValidationReport>),
    #[error("secret with norm {norm} is outside the secret space {m_minus} <= N(s) < {m_plus}/4")]
    InvalidSecret {
        norm: BigInt,
        m_minus: BigInt,
        m_plus: BigInt,
    },
    #[error("no shares supplied")]
    NoShares,
    #[error("share {index} does not match the scheme parameters")]
    ShareMismatch { index: usize },
    #[error(transparent)]
    Crt(#[from] CrtError),
}

/// Checks structural soundness, then evaluates the three parameter
/// conditions by exhaustive coalition enumeration.
pub fn validate_params(p: &SchemeParams, cap: usize) -> Result<ValidationReport, SchemeError> {
    let n = p.moduli.len();
    if n == 0 {
        return Err(SchemeError::NoParticipants);
    }
    if n > cap {
        return Err(SchemeError::TooManyParticipants { n, cap });
    }
    if let Some(idx) = p.moduli.iter().position(|m| m.is_zero()) {
        return Err(SchemeError::ZeroModulus { index: idx + 1 });
    }
    if !p.m_minus.is_positive() || !p.m_plus.is_positive() {
        return Err(SchemeError::NonPositiveBounds {
            m_minus: p.m_minus.clone(),
            m_plus: p.m_plus.clone(),
        });
    }

    let bound_gap_ok = &p.m_minus * 4 < p.m_plus;

    let lcms = coalition_lcms(&p.moduli);
    let mut interval_violations = Vec::new();
    for (mask, l) in lcms.iter().enumerate().skip(1) {
        let norm = l.norm();
        if norm > p.m_minus && norm < p.m_plus {
            interval_violations.push((coalition_members(mask), norm));
        }
    }

    Ok(ValidationReport {
        bound_gap_ok,
        interval_violations,
        pi_condition_ok: pi_condition_holds(&p.m_minus, &p.m_plus),
    })
}

/// Exact test of `π·(m⁺ − 4m⁻) > 4·m⁻` via the rational lower bound of π.
pub fn pi_condition_holds(m_minus: &BigInt, m_plus: &BigInt) -> bool {
    let four_mm: BigInt = m_minus * 4;
    let gap: BigInt = m_plus - &four_mm;
    if !gap.is_positive() {
        return false;
    }
    four_mm * PI_LO_DEN < gap * PI_LO_NUM
}

/// Membership in the secret space: `m⁻ ≤ N(s)` and `4·N(s) < m⁺`.
pub fn secret_space_contains(p: &SchemeParams, s: &GaussianInt) -> bool {
    let norm = s.norm();
    norm >= p.m_minus && norm * 4 < p.m_plus
}

fn compute_shares(p: &SchemeParams, s: &GaussianInt) -> Vec<Share> {
    p.moduli
        .iter()
        .enumerate()
        .map(|(i, m)| Share {
            index: i + 1,
            modulus: m.clone(),
            residue: s.mod_principal(m),
        })
        .collect()
}

fn check_valid_for_dealing(p: &SchemeParams) -> Result<(), SchemeError> {
    let report = validate_params(p, DEFAULT_COALITION_CAP)?;
    if !report.is_valid() {
        return Err(SchemeError::InvalidParams(Box::new(report)));
    }
    Ok(())
}

/// Deals a secret: share `i` is `s mod m_i` (principal value).
///
/// Fails unless the parameters validate and the secret lies in the secret
/// space.
pub fn deal(p: &SchemeParams, s: &GaussianInt) -> Result<Vec<Share>, SchemeError> {
    check_valid_for_dealing(p)?;
    if !secret_space_contains(p, s) {
        return Err(SchemeError::InvalidSecret {
            norm: s.norm(),
            m_minus: p.m_minus.clone(),
            m_plus: p.m_plus.clone(),
        });
    }
    Ok(compute_shares(p, s))
}

/// Deals without the secret-space membership check. Parameters must still
/// validate. Exists so tests can reproduce what happens when an
/// out-of-space secret is shared anyway.
#[cfg(feature = "unchecked-deal")]
pub fn deal_unchecked(p: &SchemeParams, s: &GaussianInt) -> Result<Vec<Share>, SchemeError> {
    check_valid_for_dealing(p)?;
    Ok(compute_shares(p, s))
}

/// Result of pooling a coalition's shares.
///
/// `candidate` is the reconstructed value, reduced to the fundamental
/// domain of `modulus` (the canonical lcm of the coalition's moduli).
/// When `authorized` is false the candidate is congruent to the dealt
/// secret but provably different from it; it is returned rather than
/// refused so that leakage can be studied.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Reconstruction {
    pub candidate: GaussianInt,
    pub modulus: GaussianInt,
    pub authorized: bool,
}

fn check_shares(p: &SchemeParams, shares: &[Share]) -> Result<(), SchemeError> {
    if shares.is_empty() {
        return Err(SchemeError::NoShares);
    }
    for sh in shares {
        let matches =
            sh.index >= 1 && sh.index <= p.moduli.len() && p.moduli[sh.index - 1] == sh.modulus;
        if !matches {
            return Err(SchemeError::ShareMismatch { index: sh.index });
        }
    }
    Ok(())
}

fn solve_shares(p: &SchemeParams, shares: &[Share]) -> Result<crt::CrtSolution, SchemeError> {
    check_shares(p, shares)?;
    let congruences: Vec<_> = shares
        .iter()
        .map(|sh| Congruence::new(sh.residue.clone(), sh.modulus.clone()))
        .collect();
    Ok(crt::solve_system(&congruences)?)
}

/// Reconstructs by solving the coalition's congruence system and taking
/// the principal value modulo the coalition lcm.
pub fn reconstruct(p: &SchemeParams, shares: &[Share]) -> Result<Reconstruction, SchemeError> {
    let sol = solve_shares(p, shares)?;
    let authorized = sol.modulus.norm() >= p.m_plus;
    Ok(Reconstruction {
        candidate: sol.value,
        modulus: sol.modulus,
        authorized,
    })
}

/// Reconstruction under the broken convention: pick the congruent
/// representative of smallest norm instead of the principal value.
///
/// This reproduces how the uncorrected scheme recovers secrets, and with it
/// the failure mode where an authorized coalition obtains a wrong secret.
/// Equal norms are broken by lexicographic order on `(re, im)`.
pub fn naive_reconstruct(
    p: &SchemeParams,
    shares: &[Share],
) -> Result<Reconstruction, SchemeError> {
    let sol = solve_shares(p, shares)?;
    let authorized = sol.modulus.norm() >= p.m_plus;
    let candidate = minimal_norm_representative(&sol.value, &sol.modulus);
    Ok(Reconstruction {
        candidate,
        modulus: sol.modulus,
        authorized,
    })
}

/// The representative of `x + (l)` with smallest norm, ties broken by
/// `(re, im)` lexicographic order.
///
/// Any representative at least as small as the principal value `r` is
/// `r + λl` with `N(λ) ≤ 2`, so scanning `λ ∈ {-1,0,1}²` is exhaustive.
fn minimal_norm_representative(x: &GaussianInt, l: &GaussianInt) -> GaussianInt {
    let r = x.mod_principal(l);
    let mut best = r.clone();
    let mut best_norm = best.norm();
    for lam_re in -1i64..=1 {
        for lam_im in -1i64..=1 {
            let candidate = &r + &(&GaussianInt::new(lam_re, lam_im) * l);
            let norm = candidate.norm();
            if norm < best_norm || (norm == best_norm && candidate < best) {
                best = candidate;
                best_norm = norm;
            }
        }
    }
    best
}

/// Deterministic uniform sample from the secret annulus
/// `{ s : m⁻ ≤ N(s) < m⁺/4 }` by seeded rejection from the bounding square.
///
/// # Panics
/// Panics if the annulus contains no lattice point (possible only for
/// degenerate bounds that no generated parameter set produces) or after an
/// absurd number of rejections.
pub fn sample_secret(p: &SchemeParams, seed: u64) -> GaussianInt {
    let max_norm: BigInt = (&p.m_plus - 1u32).div_floor(&BigInt::from(4));
    let radius = max_norm.sqrt();
    let lo = -&radius;
    let hi = &radius + 1;
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    for _ in 0..1_000_000 {
        let s = GaussianInt {
            re: rng.gen_bigint_range(&lo, &hi),
            im: rng.gen_bigint_range(&lo, &hi),
        };
        if secret_space_contains(p, &s) {
            return s;
        }
    }
    panic!(
        "secret annulus {} <= N(s) < {}/4 appears to be empty",
        p.m_minus, p.m_plus
    );
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gint::DomainKind;
    use proptest::prelude::*;

    fn gi(re: i64, im: i64) -> GaussianInt {
        GaussianInt::new(re, im)
    }

    /// Moduli 15+14i, 10-18i, 13+16i with bounds (425, 178504): a (2,3)
    /// threshold setup used across the test suite.
    fn threshold_2_of_3() -> SchemeParams {
        SchemeParams::new(vec![gi(15, 14), gi(10, -18), gi(13, 16)], 425, 178504)
    }

    /// Moduli 7+4i, -3-13i, 11+8i with the corrected bounds (185, 11570).
    fn corrected_legacy() -> SchemeParams {
        SchemeParams::new(vec![gi(7, 4), gi(-3, -13), gi(11, 8)], 185, 11570)
    }

    #[test]
    fn validate_accepts_the_threshold_params() {
        let report = validate_params(&threshold_2_of_3(), DEFAULT_COALITION_CAP).unwrap();
        assert!(report.bound_gap_ok);
        assert!(report.interval_violations.is_empty());
        assert!(report.pi_condition_ok);
        assert!(report.is_valid());
    }

    #[test]
    fn validate_flags_failed_pi_condition() {
        // structurally fine, but pi * 5917 < 20008
        let p = SchemeParams::new(vec![gi(6, 5), gi(1, -9), gi(13, 16)], 5002, 25925);
        let report = validate_params(&p, DEFAULT_COALITION_CAP).unwrap();
        assert!(report.bound_gap_ok);
        assert!(report.interval_violations.is_empty());
        assert!(!report.pi_condition_ok);
        assert!(!report.is_valid());
    }

    #[test]
    fn validate_flags_degenerate_gap() {
        let p = SchemeParams::new(vec![gi(2, 0)], 4, 4);
        let report = validate_params(&p, DEFAULT_COALITION_CAP).unwrap();
        assert!(!report.bound_gap_ok);
        assert!(!report.is_valid());
    }

    #[test]
    fn validate_reports_interval_violations_with_witness() {
        // norm of {1} is 65, strictly between 60 and 11570
        let p = SchemeParams::new(vec![gi(7, 4), gi(-3, -13), gi(11, 8)], 60, 11570);
        let report = validate_params(&p, DEFAULT_COALITION_CAP).unwrap();
        assert!(report
            .interval_violations
            .contains(&(vec![1], BigInt::from(65))));
        assert!(!report.is_valid());
    }

    #[test]
    fn validate_structural_errors() {
        let p = SchemeParams::new(vec![], 1, 10);
        assert_eq!(validate_params(&p, 20), Err(SchemeError::NoParticipants));

        let p = SchemeParams::new(vec![gi(1, 1); 6], 1, 10);
        assert_eq!(
            validate_params(&p, 5),
            Err(SchemeError::TooManyParticipants { n: 6, cap: 5 })
        );

        let p = SchemeParams::new(vec![gi(3, 1), GaussianInt::zero()], 1, 10);
        assert_eq!(
            validate_params(&p, 20),
            Err(SchemeError::ZeroModulus { index: 2 })
        );

        let p = SchemeParams::new(vec![gi(3, 1)], 0, 10);
        assert!(matches!(
            validate_params(&p, 20),
            Err(SchemeError::NonPositiveBounds { .. })
        ));
    }

    #[test]
    fn secret_space_membership() {
        let p = corrected_legacy();
        // norm 9800, and 4*9800 >= 11570
        assert!(!secret_space_contains(&p, &gi(70, -70)));
        // norm 2600: 185 <= 2600 and 10400 < 11570
        assert!(secret_space_contains(&p, &gi(50, 10)));
        assert!(!secret_space_contains(&p, &GaussianInt::zero()));
    }

    #[test]
    fn deal_rejects_out_of_space_secret() {
        let p = corrected_legacy();
        assert!(matches!(
            deal(&p, &gi(70, -70)),
            Err(SchemeError::InvalidSecret { .. })
        ));
    }

    #[test]
    fn deal_shares_are_principal_residues() {
        let p = corrected_legacy();
        let s = gi(50, 10);
        let shares = deal(&p, &s).unwrap();
        assert_eq!(shares.len(), 3);
        for (i, sh) in shares.iter().enumerate() {
            assert_eq!(sh.index, i + 1);
            assert_eq!(sh.modulus, p.moduli[i]);
            assert!(sh.residue.in_domain(&sh.modulus, DomainKind::HalfOpen));
            assert!((&s - &sh.residue).is_divisible_by(&sh.modulus));
        }
    }

    #[cfg(feature = "unchecked-deal")]
    #[test]
    fn unchecked_deal_reproduces_legacy_shares() {
        let p = corrected_legacy();
        let shares = deal_unchecked(&p, &gi(70, -70)).unwrap();
        let residues: Vec<_> = shares.iter().map(|sh| sh.residue.clone()).collect();
        assert_eq!(residues, vec![gi(1, 2), gi(4, 0), gi(3, -1)]);
    }

    #[test]
    fn deal_residue_zero_when_modulus_divides_secret() {
        let p = threshold_2_of_3();
        // (15+14i)(2+i) = 16+43i, norm 2105: inside [425, 44626)
        let s = &gi(15, 14) * &gi(2, 1);
        assert!(secret_space_contains(&p, &s));
        let shares = deal(&p, &s).unwrap();
        assert_eq!(shares[0].residue, GaussianInt::zero());
    }

    #[test]
    fn authorized_pair_recovers_secret() {
        let p = threshold_2_of_3();
        let s = sample_secret(&p, 11);
        let shares = deal(&p, &s).unwrap();
        let rec = reconstruct(&p, &[shares[0].clone(), shares[1].clone()]).unwrap();
        assert!(rec.authorized);
        assert_eq!(rec.candidate, s);
        let all = reconstruct(&p, &shares).unwrap();
        assert!(all.authorized);
        assert_eq!(all.candidate, s);
    }

    #[test]
    fn unauthorized_singleton_misses_but_stays_congruent() {
        let p = threshold_2_of_3();
        let s = sample_secret(&p, 23);
        let shares = deal(&p, &s).unwrap();
        let rec = reconstruct(&p, &[shares[2].clone()]).unwrap();
        assert!(!rec.authorized);
        assert_ne!(rec.candidate, s);
        assert!((&s - &rec.candidate).is_divisible_by(&rec.modulus));
        assert!(!s.in_domain(&rec.modulus, DomainKind::Closed));
    }

    #[test]
    fn reconstruct_rejects_foreign_shares() {
        let p = threshold_2_of_3();
        let bad = Share {
            index: 1,
            modulus: gi(9, 9),
            residue: gi(1, 0),
        };
        assert_eq!(
            reconstruct(&p, &[bad]),
            Err(SchemeError::ShareMismatch { index: 1 })
        );
        assert_eq!(reconstruct(&p, &[]), Err(SchemeError::NoShares));
    }

    #[test]
    fn naive_reconstruct_returns_wrong_legacy_secret() {
        let p = corrected_legacy();
        let shares = vec![
            Share {
                index: 2,
                modulus: gi(-3, -13),
                residue: gi(4, 0),
            },
            Share {
                index: 3,
                modulus: gi(11, 8),
                residue: gi(3, -1),
            },
        ];
        let rec = naive_reconstruct(&p, &shares).unwrap();
        assert_eq!(rec.candidate, gi(-1, 97));
        assert_eq!(rec.candidate.norm(), BigInt::from(9410));
    }

    #[test]
    fn naive_single_share_minimizes_norm() {
        let p = threshold_2_of_3();
        let share = Share {
            index: 1,
            modulus: gi(15, 14),
            residue: gi(7, -6),
        };
        let rec = naive_reconstruct(&p, std::slice::from_ref(&share)).unwrap();
        // oracle: scan a wide lambda window for the smallest-norm representative
        let l = gi(15, 14).canonical_associate();
        let mut best: Option<GaussianInt> = None;
        for a in -4i64..=4 {
            for b in -4i64..=4 {
                let cand = &gi(7, -6) + &(&gi(a, b) * &l);
                let better = match &best {
                    None => true,
                    Some(cur) => {
                        cand.norm() < cur.norm() || (cand.norm() == cur.norm() && &cand < cur)
                    }
                };
                if better {
                    best = Some(cand);
                }
            }
        }
        assert_eq!(rec.candidate, best.unwrap());
    }

    #[test]
    fn sample_secret_is_deterministic_and_in_space() {
        let p = threshold_2_of_3();
        let a = sample_secret(&p, 9);
        let b = sample_secret(&p, 9);
        assert_eq!(a, b);
        assert!(secret_space_contains(&p, &a));
        assert_ne!(sample_secret(&p, 10), a);
    }

    #[test]
    fn sample_secret_stays_in_space_across_seeds() {
        let p = threshold_2_of_3();
        for seed in 0..10_000 {
            assert!(secret_space_contains(&p, &sample_secret(&p, seed)));
        }
    }

    #[test]
    fn naive_reconstruct_agrees_when_secret_is_minimal() {
        // every coalition lcm norm exceeds 4*N(s), so the secret is the
        // strictly smallest representative of its class
        let p = threshold_2_of_3();
        let s = sample_secret(&p, 77);
        let shares = deal(&p, &s).unwrap();
        let rec = naive_reconstruct(&p, &shares[0..2]).unwrap();
        assert!(rec.authorized);
        assert_eq!(rec.candidate, s);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn round_trip_over_sampled_secrets(seed in 0u64..5000) {
            let p = threshold_2_of_3();
            let s = sample_secret(&p, seed);
            let shares = deal(&p, &s).unwrap();
            // every 2-of-3 coalition is authorized
            for drop in 0..3 {
                let coalition: Vec<_> = shares
                    .iter()
                    .filter(|sh| sh.index != drop + 1)
                    .cloned()
                    .collect();
                let rec = reconstruct(&p, &coalition).unwrap();
                prop_assert!(rec.authorized);
                prop_assert_eq!(rec.candidate, s.clone());
            }
            // singletons are not
            for sh in &shares {
                let rec = reconstruct(&p, std::slice::from_ref(sh)).unwrap();
                prop_assert!(!rec.authorized);
                prop_assert!(rec.candidate != s);
            }
        }

        #[test]
        fn reconstruct_ignores_share_order(seed in 0u64..5000, which in 0usize..6) {
            let p = threshold_2_of_3();
            let s = sample_secret(&p, seed);
            let mut shares = deal(&p, &s).unwrap();
            let perms = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
            let perm = perms[which];
            let permuted: Vec<_> = perm.iter().map(|&i| shares[i].clone()).collect();
            let a = reconstruct(&p, &shares).unwrap();
            let b = reconstruct(&p, &permuted).unwrap();
            prop_assert_eq!(a, b);
            shares.reverse();
            let c = reconstruct(&p, &shares).unwrap();
            prop_assert_eq!(c.candidate, s);
        }
    }
}
