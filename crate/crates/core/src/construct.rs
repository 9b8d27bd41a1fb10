//! Generators for the extremal pairs and the uniform-case bound.
//!
//! All generators emit a fixed labeling: matched elements are `{2i-1, 2i}`
//! for the bisecting pairs and `{i, k+i}` for the uniform constructions.
//! Relabeled copies come from [`CrossPair::relabeled`].

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::family::{check_scan, CrossPair, Fraction, SetFamily};
use crate::gf2::{check_ground, low_mask};

/// Exact binomial coefficient.
pub fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

/// All subsets of the elements in `mask`, ascending.
fn subsets_of(mask: u64) -> impl Iterator<Item = u64> {
    // walk submasks downward from `mask`, then reverse
    let mut out = Vec::with_capacity(1 << mask.count_ones());
    let mut s = mask;
    loop {
        out.push(s);
        if s == 0 {
            break;
        }
        s = (s - 1) & mask;
    }
    out.into_iter().rev()
}

fn range_mask(from: usize, to: usize) -> u64 {
    // elements from..=to, 1-based
    if from > to {
        0
    } else {
        low_mask(to) & !low_mask(from - 1)
    }
}

fn family(n: usize, mut sets: Vec<u64>) -> SetFamily {
    sets.sort_unstable();
    sets.dedup();
    SetFamily::new(n, sets).expect("generated sets lie in [n]")
}

/// The bisecting pair with `k` matched couples `{2i-1, 2i}`:
/// `A` takes exactly one element from each couple and anything outside `[2k]`,
/// `B` is every union of couples. `k = 0` gives `(2^[n], {∅})`.
pub fn thm12_pair(n: usize, k: usize) -> Result<CrossPair> {
    check_ground(n)?;
    check_scan(n)?;
    if k > n / 2 {
        return Err(Error::InvalidParameters(format!(
            "k = {k} outside 0..={}",
            n / 2
        )));
    }
    let couples: Vec<u64> = (0..k).map(|i| 0b11u64 << (2 * i)).collect();
    let free = range_mask(2 * k + 1, n);

    let b: Vec<u64> = subsets_of(low_mask(k))
        .map(|choice| {
            (0..k)
                .filter(|i| choice >> i & 1 == 1)
                .fold(0, |acc, i| acc | couples[i])
        })
        .collect();

    let mut a = Vec::with_capacity(1 << (n - k));
    for choice in subsets_of(low_mask(k)) {
        // bit i of `choice` picks the even element of couple i
        let base = (0..k).fold(0u64, |acc, i| acc | 1u64 << (2 * i + (choice >> i & 1) as usize));
        a.extend(subsets_of(free).map(|t| base | t));
    }
    CrossPair::new(Fraction::HALF, family(n, a), family(n, b))
}

/// Maximal pairs for `c/d = 0` and `c/d = 1`.
///
/// `0`: `A = 2^[k]`, `B = 2^{k+1..n}`. `1`: `B = 2^[k]`,
/// `A = {[k] ∪ T : T ⊆ {k+1..n}}`.
pub fn trivial_pair(n: usize, frac: Fraction, k: usize) -> Result<CrossPair> {
    check_ground(n)?;
    check_scan(n)?;
    if k > n {
        return Err(Error::InvalidParameters(format!("k = {k} outside 0..={n}")));
    }
    let head = low_mask(k);
    let tail = range_mask(k + 1, n);
    let (a, b) = if frac == Fraction::ZERO {
        (subsets_of(head).collect(), subsets_of(tail).collect())
    } else if frac == Fraction::ONE {
        (subsets_of(tail).map(|t| head | t).collect(), subsets_of(head).collect())
    } else {
        return Err(Error::InvalidParameters(format!(
            "trivial pairs exist for 0/1 and 1/1 only, not {frac}"
        )));
    };
    CrossPair::new(frac, family(n, a), family(n, b))
}

/// Parameters of a uniform construction: `B` is `k`-uniform and every
/// member of `A` meets every member of `B` in `l = ck/d` elements.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct UniformParams {
    pub n: usize,
    pub k: usize,
    pub frac: Fraction,
    pub l: usize,
}

impl UniformParams {
    pub fn new(n: usize, k: usize, frac: Fraction) -> Result<Self> {
        check_ground(n)?;
        let d = frac.d() as usize;
        if k == 0 || k % d != 0 {
            return Err(Error::InvalidParameters(format!(
                "k = {k} must be positive and divisible by d = {d}"
            )));
        }
        let l = frac.c() as usize * k / d;
        if l == 0 {
            return Err(Error::InvalidParameters("l = ck/d must be positive".into()));
        }
        if 2 * l > n {
            return Err(Error::InvalidParameters(format!(
                "2l = {} exceeds n = {n}",
                2 * l
            )));
        }
        Ok(Self { n, k, frac, l })
    }

    /// The fraction forced on the balanced construction for a given `k`:
    /// `1/2` for even `k`, `((k+1)/2)/k` for odd `k`.
    pub fn balanced_fraction(k: usize) -> Result<Fraction> {
        if k < 2 {
            return Err(Error::InvalidParameters(format!(
                "balanced construction needs k >= 2, got {k}"
            )));
        }
        if k % 2 == 0 {
            Ok(Fraction::HALF)
        } else {
            Fraction::new((k as u32 + 1) / 2, k as u32)
        }
    }
}

/// The two extremal shapes for a `k`-uniform `B`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum UniformShape {
    /// `c/d = 1`: `B = C([κ], k)`, `A = {[κ] ∪ T}`, `κ ∈ {2k-1, 2k}`.
    Superset { kappa: usize },
    /// `c/d ≠ 1`: `τ` matched couples `{i, k+i}` plus singletons `{τ+1..k}`.
    Matched { tau: usize },
}

/// `C(2l, l) · 2^(n - 2l)` with `l = ck/d`.
pub fn thm13_bound(n: usize, k: usize, frac: Fraction) -> Result<u128> {
    let p = UniformParams::new(n, k, frac)?;
    Ok(binomial(2 * p.l as u64, p.l as u64) << (n - 2 * p.l))
}

pub fn thm13_pair(params: UniformParams, shape: UniformShape) -> Result<CrossPair> {
    let UniformParams { n, k, frac, l } = params;
    check_scan(n)?;
    let (a, b) = match shape {
        UniformShape::Superset { kappa } => {
            if frac != Fraction::ONE {
                return Err(Error::InvalidParameters(format!(
                    "superset shape requires c/d = 1/1, got {frac}"
                )));
            }
            if kappa + 1 != 2 * k && kappa != 2 * k {
                return Err(Error::InvalidParameters(format!(
                    "kappa = {kappa} must be 2k-1 or 2k"
                )));
            }
            if kappa > n {
                return Err(Error::InvalidParameters(format!(
                    "kappa = {kappa} exceeds n = {n}"
                )));
            }
            let core = low_mask(kappa);
            let a: Vec<u64> = subsets_of(range_mask(kappa + 1, n)).map(|t| core | t).collect();
            let b: Vec<u64> = subsets_of(core)
                .filter(|m| m.count_ones() as usize == k)
                .collect();
            (a, b)
        }
        UniformShape::Matched { tau } => {
            let expected = UniformParams::balanced_fraction(k)?;
            if frac != expected {
                return Err(Error::InvalidParameters(format!(
                    "matched shape with k = {k} requires c/d = {expected}, got {frac}"
                )));
            }
            if tau > k || k + tau > n {
                return Err(Error::InvalidParameters(format!(
                    "tau = {tau} must satisfy tau <= k and k + tau <= n"
                )));
            }
            debug_assert_eq!(l, k.div_ceil(2));
            // pieces: {i, k+i} for i <= tau, then {i} for tau < i <= k
            let pieces: Vec<u64> = (1..=k)
                .map(|i| {
                    let single = 1u64 << (i - 1);
                    if i <= tau {
                        single | 1u64 << (k + i - 1)
                    } else {
                        single
                    }
                })
                .collect();
            let outside = range_mask(k + tau + 1, n);
            let mut a = Vec::new();
            for chosen in pieces.iter().combinations(l) {
                let base = chosen.into_iter().fold(0, |acc, p| acc | p);
                a.extend(subsets_of(outside).map(|t| base | t));
            }
            let fixed = range_mask(tau + 1, k);
            let b: Vec<u64> = subsets_of(low_mask(tau))
                .map(|choice| {
                    // bit i of `choice` picks k+i+1 over i+1
                    (0..tau).fold(fixed, |acc, i| {
                        acc | if choice >> i & 1 == 1 {
                            1u64 << (k + i)
                        } else {
                            1u64 << i
                        }
                    })
                })
                .collect();
            (a, b)
        }
    };
    CrossPair::new(frac, family(n, a), family(n, b))
}
