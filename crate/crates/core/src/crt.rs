//! Chinese remainder solver over the Gaussian integers.
//!
//! Moduli need not be pairwise coprime: systems are merged pairwise, with a
//! gcd divisibility check deciding consistency at each merge, and the running
//! value reduced modulo the running lcm to keep operands small. The final
//! value is the principal representative in the fundamental domain of the
//! canonical lcm, which makes the answer unique and independent of input
//! order.

use crate::gint::{egcd, lcm, GaussianInt};

/// One congruence `x ≡ residue (mod modulus)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Congruence {
    residue: GaussianInt,
    modulus: GaussianInt,
}

impl Congruence {
    /// # Panics
    /// Panics if `modulus` is zero.
    pub fn new(residue: GaussianInt, modulus: GaussianInt) -> Self {
        assert!(!modulus.is_zero(), "congruence modulus must be nonzero");
        Congruence { residue, modulus }
    }

    pub fn residue(&self) -> &GaussianInt {
        &self.residue
    }

    pub fn modulus(&self) -> &GaussianInt {
        &self.modulus
    }

    /// Does `x` satisfy this congruence?
    pub fn holds_for(&self, x: &GaussianInt) -> bool {
        (x - &self.residue).is_divisible_by(&self.modulus)
    }
}

/// Solution of a congruence system: `value` is the principal representative
/// modulo `modulus`, the canonical associate of the lcm of all input moduli.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CrtSolution {
    pub value: GaussianInt,
    pub modulus: GaussianInt,
}

/// The two congruences a failed merge could not reconcile.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Inconsistency {
    pub left: Congruence,
    pub right: Congruence,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CrtError {
    #[error("inconsistent congruences: residues {} and {} disagree modulo gcd({}, {})",
        .0.left.residue, .0.right.residue, .0.left.modulus, .0.right.modulus)]
    Inconsistent(Box<Inconsistency>),
    #[error("empty congruence system")]
    EmptySystem,
}

/// Merges two congruences into one modulo `lcm(m1, m2)`.
///
/// With `u·m1 + v·m2 = d = gcd(m1, m2)`, a solution exists iff `d` divides
/// the residue difference, in which case `a1 + m1·u·(a2-a1)/d` satisfies
/// both congruences.
pub fn solve_pair(c1: &Congruence, c2: &Congruence) -> Result<CrtSolution, CrtError> {
    let (d, u, _) = egcd(&c1.modulus, &c2.modulus);
    let diff = &c2.residue - &c1.residue;
    if !diff.is_divisible_by(&d) {
        return Err(CrtError::Inconsistent(Box::new(Inconsistency {
            left: c1.clone(),
            right: c2.clone(),
        })));
    }
    let step = diff.exact_div(&d);
    let modulus = lcm(&c1.modulus, &c2.modulus);
    let x = &c1.residue + &(&(&c1.modulus * &u) * &step);
    let value = x.mod_principal(&modulus);
    Ok(CrtSolution { value, modulus })
}

/// Solves a whole system by folding [`solve_pair`] left to right.
pub fn solve_system(congruences: &[Congruence]) -> Result<CrtSolution, CrtError> {
    let (first, rest) = congruences.split_first().ok_or(CrtError::EmptySystem)?;
    let modulus = first.modulus.canonical_associate();
    let mut acc = CrtSolution {
        value: first.residue.mod_principal(&modulus),
        modulus,
    };
    for c in rest {
        acc = solve_pair(&Congruence::new(acc.value, acc.modulus), c)?;
    }
    Ok(acc)
}
