//! Independent oracles for the acceptance suite.
//!
//! Everything here works on raw machine integers, deliberately sharing no
//! code with the library: brute-force scans decide what the right answer is
//! before the implementation gets to speak.

/// `(re, im)` pair small enough for i64 work.
pub type Gi = (i64, i64);

pub fn norm(z: Gi) -> i64 {
    z.0 * z.0 + z.1 * z.1
}

pub fn mul(a: Gi, b: Gi) -> Gi {
    (a.0 * b.0 - a.1 * b.1, a.0 * b.1 + a.1 * b.0)
}

pub fn sub(a: Gi, b: Gi) -> Gi {
    (a.0 - b.0, a.1 - b.1)
}

/// Half-open fundamental-domain membership from first principles:
/// with `w = v·conj(z)`, require `-N < 2·re(w) ≤ N` and same for im.
pub fn in_half_open_domain(v: Gi, z: Gi) -> bool {
    let n = norm(z);
    let w = mul(v, (z.0, -z.1));
    -n < 2 * w.0 && 2 * w.0 <= n && -n < 2 * w.1 && 2 * w.1 <= n
}

/// Does `m` divide `v` exactly? True iff both coordinates of `v·conj(m)`
/// are multiples of `N(m)`.
pub fn divides(m: Gi, v: Gi) -> bool {
    let n = norm(m);
    let t = mul(v, (m.0, -m.1));
    t.0.rem_euclid(n) == 0 && t.1.rem_euclid(n) == 0
}

/// All lattice points of the fundamental domain of `l` that satisfy every
/// congruence `x ≡ r_i (mod m_i)`. The domain fits inside the disc of
/// radius `|l|/√2`, so the scan is a bounding-square sweep.
pub fn scan_domain_solutions(l: Gi, congruences: &[(Gi, Gi)]) -> Vec<Gi> {
    let bound = ((norm(l) / 2) as f64).sqrt() as i64 + 2;
    let mut found = Vec::new();
    for re in -bound..=bound {
        for im in -bound..=bound {
            let v = (re, im);
            if !in_half_open_domain(v, l) {
                continue;
            }
            if congruences.iter().all(|&(r, m)| divides(m, sub(v, r))) {
                found.push(v);
            }
        }
    }
    found
}

/// Prefix histogram of the Gauss circle: entry `r2` counts lattice points
/// with norm at most `r2`.
pub fn circle_counts_up_to(max_r2: u64) -> Vec<u64> {
    let radius = (max_r2 as f64).sqrt() as i64 + 2;
    let mut by_norm = vec![0u64; max_r2 as usize + 1];
    for re in -radius..=radius {
        for im in -radius..=radius {
            let n = (re * re + im * im) as u64;
            if n <= max_r2 {
                by_norm[n as usize] += 1;
            }
        }
    }
    let mut prefix = by_norm;
    for i in 1..prefix.len() {
        prefix[i] += prefix[i - 1];
    }
    prefix
}
