//! Exact Gaussian-integer arithmetic.
//!
//! The key operation is [`GaussianInt::divrem_principal`]: Euclidean division
//! whose remainder is the *unique* representative inside the fundamental
//! domain `F(z) = { z(α+βi) : -1/2 < α, β ≤ 1/2 }` of the divisor. Plain
//! Euclidean division over Z\[i\] only bounds the remainder's norm, which
//! leaves up to four valid remainders; pinning the remainder to `F(z)` makes
//! `v mod z` a well-defined value. Everything runs on arbitrary-precision
//! integers; there is no floating point anywhere.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// A Gaussian integer `re + im·i` with arbitrary-precision parts.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GaussianInt {
    pub re: BigInt,
    pub im: BigInt,
}

/// Quotient and remainder of a principal-value division.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DivResult {
    pub quotient: GaussianInt,
    pub remainder: GaussianInt,
}

/// Which variant of the fundamental domain a membership test uses.
///
/// `HalfOpen` is the domain `F(z)` that makes remainders unique; `Open` is
/// its interior `F°(z)` (invariant under unit multiples of `z`), `Closed`
/// its closure.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DomainKind {
    Open,
    HalfOpen,
    Closed,
}

impl GaussianInt {
    pub fn new(re: impl Into<BigInt>, im: impl Into<BigInt>) -> Self {
        GaussianInt {
            re: re.into(),
            im: im.into(),
        }
    }

    pub fn zero() -> Self {
        GaussianInt::new(0, 0)
    }

    pub fn one() -> Self {
        GaussianInt::new(1, 0)
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    /// The norm `N(re + im·i) = re² + im²`.
    pub fn norm(&self) -> BigInt {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn conj(&self) -> GaussianInt {
        GaussianInt {
            re: self.re.clone(),
            im: -&self.im,
        }
    }

    /// True iff `self` is one of the four units `1, -1, i, -i`.
    pub fn is_unit(&self) -> bool {
        self.norm().is_one()
    }

    /// Exact divisibility test: does `d` divide `self`?
    ///
    /// # Panics
    /// Panics if `d` is zero.
    pub fn is_divisible_by(&self, d: &GaussianInt) -> bool {
        self.divrem_principal(d).remainder.is_zero()
    }

    /// Exact division. Panics if `d` is zero or does not divide `self`.
    pub fn exact_div(&self, d: &GaussianInt) -> GaussianInt {
        let DivResult {
            quotient,
            remainder,
        } = self.divrem_principal(d);
        assert!(
            remainder.is_zero(),
            "exact_div: {} does not divide {}",
            d,
            self
        );
        quotient
    }

    /// Euclidean division with the remainder pinned to `F(z)`.
    ///
    /// Writes `v/z = x + yi` and rounds both coordinates with `⌈· - 1/2⌉`,
    /// which lands the fractional parts in `(-1/2, 1/2]`. The rounding is
    /// done in integer arithmetic: with `w = v·conj(z)` and `N = N(z)`,
    /// the real quotient coordinate is `⌈(2·re(w) - N) / (2N)⌉`.
    ///
    /// The returned pair satisfies `v = z·q + r`, `r ∈ F(z)` and
    /// `2·N(r) ≤ N(z)`, and is the only such pair.
    ///
    /// # Panics
    /// Panics if `z` is zero.
    pub fn divrem_principal(&self, z: &GaussianInt) -> DivResult {
        assert!(!z.is_zero(), "division by zero Gaussian integer");
        let n = z.norm();
        let w = self * &z.conj();
        let a = ceil_div(&(&w.re * 2 - &n), &(&n * 2));
        let b = ceil_div(&(&w.im * 2 - &n), &(&n * 2));
        let quotient = GaussianInt { re: a, im: b };
        let remainder = self - &(z * &quotient);
        DivResult {
            quotient,
            remainder,
        }
    }

    /// The principal value of `self mod z`: the unique element of `F(z)`
    /// congruent to `self`.
    ///
    /// # Panics
    /// Panics if `z` is zero.
    pub fn mod_principal(&self, z: &GaussianInt) -> GaussianInt {
        self.divrem_principal(z).remainder
    }

    /// Membership of `self` in the fundamental domain of `z`.
    ///
    /// With `w = self·conj(z)` and `N = N(z)`, the half-open domain is
    /// `-N < 2·re(w) ≤ N` and `-N < 2·im(w) ≤ N`; `Open` and `Closed`
    /// use strict and non-strict bounds on both sides.
    ///
    /// # Panics
    /// Panics if `z` is zero.
    pub fn in_domain(&self, z: &GaussianInt, kind: DomainKind) -> bool {
        assert!(!z.is_zero(), "fundamental domain of zero is undefined");
        let n = z.norm();
        let w = self * &z.conj();
        let coord_ok = |c: &BigInt| {
            let twice = c * 2;
            match kind {
                DomainKind::Open => -&n < twice && twice < n,
                DomainKind::HalfOpen => -&n < twice && twice <= n,
                DomainKind::Closed => -&n <= twice && twice <= n,
            }
        };
        coord_ok(&w.re) && coord_ok(&w.im)
    }

    /// The associate `u·self` (u a unit) with `re > 0` and `im ≥ 0`.
    ///
    /// Exactly one of the four associates satisfies that predicate, so this
    /// is a canonical choice of representative among associates.
    ///
    /// # Panics
    /// Panics if `self` is zero.
    pub fn canonical_associate(&self) -> GaussianInt {
        assert!(!self.is_zero(), "zero has no canonical associate");
        let mut z = self.clone();
        // rotate by i until re > 0, im >= 0; at most three rotations
        for _ in 0..4 {
            if z.re.is_positive() && !z.im.is_negative() {
                return z;
            }
            z = GaussianInt {
                re: -&z.im,
                im: z.re,
            };
        }
        unreachable!("one of the four associates is canonical");
    }
}

/// Integer ceiling division `⌈p/q⌉ = -⌊-p/q⌋` for `q > 0`.
fn ceil_div(p: &BigInt, q: &BigInt) -> BigInt {
    -(-p).div_floor(q)
}

/// Greatest common divisor, normalized to its canonical associate.
///
/// Euclidean algorithm on principal-value division; terminates because the
/// remainder norm at most halves each step.
///
/// # Panics
/// Panics if both arguments are zero: `gcd(0, 0)` has no canonical
/// associate and signals a degenerate caller.
pub fn gcd(a: &GaussianInt, b: &GaussianInt) -> GaussianInt {
    assert!(!(a.is_zero() && b.is_zero()), "gcd(0, 0) is undefined");
    let mut x = a.clone();
    let mut y = b.clone();
    while !y.is_zero() {
        let r = x.mod_principal(&y);
        x = y;
        y = r;
    }
    x.canonical_associate()
}

/// Extended Euclidean algorithm: returns `(g, u, v)` with `u·a + v·b = g`
/// and `g = gcd(a, b)` in canonical-associate form.
///
/// # Panics
/// Panics if both arguments are zero.
pub fn egcd(a: &GaussianInt, b: &GaussianInt) -> (GaussianInt, GaussianInt, GaussianInt) {
    assert!(!(a.is_zero() && b.is_zero()), "egcd(0, 0) is undefined");
    let mut x = a.clone();
    let mut y = b.clone();
    let (mut s0, mut s1) = (GaussianInt::one(), GaussianInt::zero());
    let (mut t0, mut t1) = (GaussianInt::zero(), GaussianInt::one());
    while !y.is_zero() {
        let DivResult {
            quotient: q,
            remainder: r,
        } = x.divrem_principal(&y);
        x = y;
        y = r;
        let s2 = &s0 - &(&q * &s1);
        s0 = s1;
        s1 = s2;
        let t2 = &t0 - &(&q * &t1);
        t0 = t1;
        t1 = t2;
    }
    // multiply through by the unit that makes g canonical
    let g = x.canonical_associate();
    let unit = g.exact_div(&x);
    (g, &s0 * &unit, &t0 * &unit)
}

/// Least common multiple `(a·b)/gcd(a,b)`, normalized to its canonical
/// associate.
///
/// # Panics
/// Panics if either argument is zero.
pub fn lcm(a: &GaussianInt, b: &GaussianInt) -> GaussianInt {
    assert!(!a.is_zero() && !b.is_zero(), "lcm of zero is undefined");
    let g = gcd(a, b);
    (a * &b.exact_div(&g)).canonical_associate()
}

/// Fold of [`lcm`] over a nonempty sequence.
///
/// # Panics
/// Panics if the iterator is empty or any element is zero.
pub fn lcm_all<'a>(vals: impl IntoIterator<Item = &'a GaussianInt>) -> GaussianInt {
    let mut it = vals.into_iter();
    let first = it.next().expect("lcm of an empty sequence is undefined");
    let mut acc = first.canonical_associate();
    for v in it {
        acc = lcm(&acc, v);
    }
    acc
}

impl Add for &GaussianInt {
    type Output = GaussianInt;
    fn add(self, rhs: &GaussianInt) -> GaussianInt {
        GaussianInt {
            re: &self.re + &rhs.re,
            im: &self.im + &rhs.im,
        }
    }
}

impl Sub for &GaussianInt {
    type Output = GaussianInt;
    fn sub(self, rhs: &GaussianInt) -> GaussianInt {
        GaussianInt {
            re: &self.re - &rhs.re,
            im: &self.im - &rhs.im,
        }
    }
}

impl Mul for &GaussianInt {
    type Output = GaussianInt;
    fn mul(self, rhs: &GaussianInt) -> GaussianInt {
        GaussianInt {
            re: &self.re * &rhs.re - &self.im * &rhs.im,
            im: &self.re * &rhs.im + &self.im * &rhs.re,
        }
    }
}

impl Neg for &GaussianInt {
    type Output = GaussianInt;
    fn neg(self) -> GaussianInt {
        GaussianInt {
            re: -&self.re,
            im: -&self.im,
        }
    }
}

macro_rules! forward_owned_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for GaussianInt {
            type Output = GaussianInt;
            fn $method(self, rhs: GaussianInt) -> GaussianInt {
                (&self).$method(&rhs)
            }
        }
    };
}

forward_owned_binop!(Add, add);
forward_owned_binop!(Sub, sub);
forward_owned_binop!(Mul, mul);

impl Neg for GaussianInt {
    type Output = GaussianInt;
    fn neg(self) -> GaussianInt {
        -&self
    }
}

impl fmt::Display for GaussianInt {
    /// Renders as `a+bi` / `a-bi`, dropping the zero part: `4`, `-3-13i`,
    /// `70-70i`, `i`, `-i`, `3i`. `parse` round-trips every rendering.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn imag(im: &BigInt) -> String {
            if im.is_one() {
                "i".to_string()
            } else if (-im).is_one() {
                "-i".to_string()
            } else {
                format!("{}i", im)
            }
        }
        if self.im.is_zero() {
            write!(f, "{}", self.re)
        } else if self.re.is_zero() {
            write!(f, "{}", imag(&self.im))
        } else if self.im.is_negative() {
            write!(f, "{}-{}", self.re, imag(&-&self.im))
        } else {
            write!(f, "{}+{}", self.re, imag(&self.im))
        }
    }
}

impl fmt::Debug for GaussianInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Error parsing the textual `a+bi` form.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid Gaussian integer `{0}`")]
pub struct ParseGaussianIntError(String);

impl FromStr for GaussianInt {
    type Err = ParseGaussianIntError;

    /// Parses decimal `a+bi` / `a-bi` with optional spaces, plus the
    /// pure-real (`4`, `-17`) and pure-imaginary (`i`, `-i`, `3i`) forms.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ParseGaussianIntError(s.to_string());
        // spaces are allowed around tokens but not inside a number
        let mut last_was_digit = false;
        let mut gap_after_digit = false;
        for c in s.chars() {
            if c.is_whitespace() {
                gap_after_digit = last_was_digit;
                continue;
            }
            if gap_after_digit && c.is_ascii_digit() {
                return Err(err());
            }
            gap_after_digit = false;
            last_was_digit = c.is_ascii_digit();
        }
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(err());
        }

        // split off a trailing imaginary term, if any
        if let Some(body) = compact.strip_suffix('i') {
            // find the sign separating the real part from the imaginary
            // coefficient; index 0 is a leading sign, not a separator
            let split = body
                .char_indices()
                .rev()
                .find(|&(idx, c)| idx > 0 && (c == '+' || c == '-'))
                .map(|(idx, _)| idx);
            let (re_str, im_str) = match split {
                Some(idx) => (&body[..idx], &body[idx..]),
                None => ("0", body),
            };
            let im = match im_str {
                "" | "+" => BigInt::one(),
                "-" => -BigInt::one(),
                digits => digits.parse().map_err(|_| err())?,
            };
            let re: BigInt = re_str.parse().map_err(|_| err())?;
            Ok(GaussianInt { re, im })
        } else {
            let re: BigInt = compact.parse().map_err(|_| err())?;
            Ok(GaussianInt {
                re,
                im: BigInt::zero(),
            })
        }
    }
}
