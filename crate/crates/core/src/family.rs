//! Set families and the fractional cross-intersection predicate.
//!
//! A pair `(A, B)` of families over `[n]` is `c/d`-cross-intersecting when
//! `|A ∩ B| = (c/d)|B|` for every `A ∈ A`, `B ∈ B`. Everything here works in
//! integers (`d|A ∩ B| = c|B|`).

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::format::{FamilyJson, PairJson};
use crate::gf2::{self, check_ground, check_mask, low_mask, mask_inner, BitVector};

/// Largest ground set for which `2^[n]` is scanned or materialized.
pub const MAX_SCAN_GROUND: usize = 24;

fn gcd(mut a: u32, mut b: u32) -> u32 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// An irreducible fraction `c/d` in `[0, 1]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Fraction {
    c: u32,
    d: u32,
}

impl Fraction {
    pub const ZERO: Fraction = Fraction { c: 0, d: 1 };
    pub const HALF: Fraction = Fraction { c: 1, d: 2 };
    pub const ONE: Fraction = Fraction { c: 1, d: 1 };

    pub fn new(c: u32, d: u32) -> Result<Self> {
        if d == 0 || c > d || gcd(c, d) != 1 {
            return Err(Error::InvalidFraction { c, d });
        }
        Ok(Self { c, d })
    }

    #[inline]
    pub fn c(&self) -> u32 {
        self.c
    }

    #[inline]
    pub fn d(&self) -> u32 {
        self.d
    }

    /// All irreducible fractions in `[0, 1]` with denominator at most `max_d`,
    /// in increasing order of value.
    pub fn farey(max_d: u32) -> Vec<Fraction> {
        let mut out: Vec<Fraction> = (1..=max_d.max(1))
            .flat_map(|d| (0..=d).map(move |c| (c, d)))
            .filter(|&(c, d)| gcd(c, d) == 1)
            .map(|(c, d)| Fraction { c, d })
            .collect();
        out.sort();
        out
    }

    /// `d * intersection == c * size`.
    #[inline]
    pub fn holds(&self, intersection: u32, size: u32) -> bool {
        self.d as u64 * intersection as u64 == self.c as u64 * size as u64
    }
}

impl Ord for Fraction {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.c as u64 * other.d as u64).cmp(&(other.c as u64 * self.d as u64))
    }
}

impl PartialOrd for Fraction {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Fraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.c, self.d)
    }
}

/// A duplicate-free family of subsets of `[n]`, sorted by mask value.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "FamilyJson", into = "FamilyJson")]
pub struct SetFamily {
    n: usize,
    sets: Vec<u64>,
}

impl SetFamily {
    pub fn new(n: usize, mut sets: Vec<u64>) -> Result<Self> {
        check_ground(n)?;
        for &m in &sets {
            check_mask(n, m)?;
        }
        sets.sort_unstable();
        if let Some(w) = sets.windows(2).find(|w| w[0] == w[1]) {
            let mut s = String::new();
            gf2::write_set(&mut s, w[0]).ok();
            return Err(Error::DuplicateSet(s));
        }
        Ok(Self { n, sets })
    }

    /// Caller guarantees `sets` is strictly increasing and inside `[n]`.
    pub(crate) fn from_sorted(n: usize, sets: Vec<u64>) -> Self {
        debug_assert!(sets.windows(2).all(|w| w[0] < w[1]));
        debug_assert!(sets.iter().all(|&m| m & !low_mask(n) == 0));
        Self { n, sets }
    }

    pub fn from_vectors(n: usize, vectors: &[BitVector]) -> Result<Self> {
        for v in vectors {
            if v.n() != n {
                return Err(Error::SizeMismatch {
                    expected: n,
                    found: v.n(),
                });
            }
        }
        Self::new(n, vectors.iter().map(|v| v.bits()).collect())
    }

    pub fn from_element_lists(n: usize, lists: &[Vec<usize>]) -> Result<Self> {
        let masks = lists
            .iter()
            .map(|l| BitVector::from_elements(n, l.iter().copied()).map(|v| v.bits()))
            .collect::<Result<Vec<_>>>()?;
        Self::new(n, masks)
    }

    pub fn empty(n: usize) -> Result<Self> {
        Self::new(n, Vec::new())
    }

    /// `{∅}`.
    pub fn empty_set_only(n: usize) -> Result<Self> {
        Self::new(n, vec![0])
    }

    /// `2^[n]`.
    pub fn power_set(n: usize) -> Result<Self> {
        check_ground(n)?;
        check_scan(n)?;
        Ok(Self::from_sorted(n, (0..1u64 << n).collect()))
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    #[inline]
    pub fn masks(&self) -> &[u64] {
        &self.sets
    }

    pub fn iter(&self) -> impl Iterator<Item = BitVector> + '_ {
        self.sets
            .iter()
            .map(move |&m| BitVector::new(self.n, m).expect("family members lie in [n]"))
    }

    pub fn contains(&self, mask: u64) -> bool {
        self.sets.binary_search(&mask).is_ok()
    }

    /// Union of all members.
    pub fn support(&self) -> u64 {
        self.sets.iter().fold(0, |acc, &m| acc | m)
    }

    pub fn is_uniform(&self, k: u32) -> bool {
        self.sets.iter().all(|m| m.count_ones() == k)
    }

    /// Applies `perm` (0-based, `perm[i]` is the image of element `i + 1`).
    pub fn relabeled(&self, perm: &[usize]) -> Self {
        let mut sets: Vec<u64> = self.sets.iter().map(|&m| permute_mask(m, perm)).collect();
        sets.sort_unstable();
        Self::from_sorted(self.n, sets)
    }
}

pub(crate) fn check_scan(n: usize) -> Result<()> {
    if n > MAX_SCAN_GROUND {
        return Err(Error::Capacity(format!(
            "enumerating 2^[{n}] exceeds the ground-set limit {MAX_SCAN_GROUND}"
        )));
    }
    Ok(())
}

#[inline]
pub(crate) fn permute_mask(mask: u64, perm: &[usize]) -> u64 {
    let mut out = 0;
    let mut rest = mask;
    while rest != 0 {
        out |= 1u64 << perm[rest.trailing_zeros() as usize];
        rest &= rest - 1;
    }
    out
}

impl fmt::Display for SetFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, &m) in self.sets.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            gf2::write_set(f, m)?;
        }
        f.write_str("}")
    }
}

/// A pair of families over a common ground set with a declared fraction.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "PairJson", into = "PairJson")]
pub struct CrossPair {
    frac: Fraction,
    a: SetFamily,
    b: SetFamily,
}

impl CrossPair {
    pub fn new(frac: Fraction, a: SetFamily, b: SetFamily) -> Result<Self> {
        if a.n() != b.n() {
            return Err(Error::SizeMismatch {
                expected: a.n(),
                found: b.n(),
            });
        }
        Ok(Self { frac, a, b })
    }

    pub fn n(&self) -> usize {
        self.a.n()
    }

    pub fn frac(&self) -> Fraction {
        self.frac
    }

    pub fn a(&self) -> &SetFamily {
        &self.a
    }

    pub fn b(&self) -> &SetFamily {
        &self.b
    }

    pub fn with_frac(&self, frac: Fraction) -> Self {
        Self {
            frac,
            ..self.clone()
        }
    }

    /// `|A| · |B|`.
    pub fn product(&self) -> u128 {
        self.a.len() as u128 * self.b.len() as u128
    }

    pub fn is_cross_intersecting(&self) -> bool {
        is_cross_intersecting(self)
    }

    /// Applies the same relabeling to both families.
    pub fn relabeled(&self, perm: &[usize]) -> Self {
        Self {
            frac: self.frac,
            a: self.a.relabeled(perm),
            b: self.b.relabeled(perm),
        }
    }
}

pub fn is_cross_intersecting(pair: &CrossPair) -> bool {
    let frac = pair.frac;
    pair.b.masks().iter().all(|&b| {
        let size = b.count_ones();
        pair.a
            .masks()
            .iter()
            .all(|&a| frac.holds((a & b).count_ones(), size))
    })
}

/// `2|A ∩ B| = |B|`.
pub fn bisects(a: &BitVector, b: &BitVector) -> bool {
    debug_assert_eq!(a.n(), b.n());
    mask_bisects(a.bits(), b.bits())
}

#[inline]
pub(crate) fn mask_bisects(a: u64, b: u64) -> bool {
    2 * (a & b).count_ones() == b.count_ones()
}

/// `B` split by member weight modulo `2d`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartitionedFamily {
    /// Weights `≡ 0 (mod 2d)`.
    pub zero_residue: SetFamily,
    /// Weights `≡ d (mod 2d)`.
    pub d_residue: SetFamily,
}

pub fn partition_by_weight(b: &SetFamily, frac: Fraction) -> Result<PartitionedFamily> {
    let d = frac.d();
    let mut zero = Vec::new();
    let mut half = Vec::new();
    for &m in b.masks() {
        match m.count_ones() % (2 * d) {
            0 => zero.push(m),
            r if r == d => half.push(m),
            _ => {
                let mut s = String::new();
                gf2::write_set(&mut s, m).ok();
                return Err(Error::InvalidFamily(format!(
                    "member {s} has weight {} not divisible by d = {d}",
                    m.count_ones()
                )));
            }
        }
    }
    Ok(PartitionedFamily {
        zero_residue: SetFamily::from_sorted(b.n(), zero),
        d_residue: SetFamily::from_sorted(b.n(), half),
    })
}

/// A pair lifted to `[n + 1]` so that every cross inner product vanishes.
///
/// The extra coordinate is stored as bit `n` (the highest bit) and printed
/// as element `0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimedPair {
    pub a: SetFamily,
    pub b: SetFamily,
}

impl PrimedPair {
    /// Original ground-set size.
    pub fn base_n(&self) -> usize {
        self.a.n() - 1
    }

    /// Elements of a lifted set, with the appended coordinate reported as 0.
    pub fn elements(&self, mask: u64) -> Vec<usize> {
        let base = self.base_n();
        let mut out = Vec::new();
        if mask >> base & 1 == 1 {
            out.push(0);
        }
        out.extend(gf2::mask_elements(mask & low_mask(base)));
        out
    }

    pub fn describe(&self, mask: u64) -> String {
        let parts: Vec<String> = self.elements(mask).iter().map(|e| e.to_string()).collect();
        format!("{{{}}}", parts.join(","))
    }
}

/// Appends one coordinate to every vector of a cross-intersecting pair.
///
/// Members of `A` get the new bit set. A member `B` gets it set exactly when
/// `<a, b>` is odd for every `a`, which happens iff `|B| ≡ d (mod 2d)` and `c`
/// is odd. The result is mutually orthogonal.
pub fn append_construction(pair: &CrossPair) -> Result<PrimedPair> {
    if !pair.is_cross_intersecting() {
        return Err(Error::Precondition(format!(
            "pair is not {}-cross-intersecting",
            pair.frac
        )));
    }
    let n = pair.n();
    if n + 1 > gf2::MAX_GROUND {
        return Err(Error::GroundSet(n + 1));
    }
    let parts = partition_by_weight(&pair.b, pair.frac)?;
    let new_bit = 1u64 << n;
    let odd_c = pair.frac.c() % 2 == 1;

    let a: Vec<u64> = pair.a.masks().iter().map(|&m| m | new_bit).collect();
    let mut b: Vec<u64> = parts.zero_residue.masks().to_vec();
    b.extend(
        parts
            .d_residue
            .masks()
            .iter()
            .map(|&m| if odd_c { m | new_bit } else { m }),
    );
    b.sort_unstable();

    for &x in &a {
        for &y in &b {
            if mask_inner(x, y) != 0 {
                return Err(Error::Inconsistent(
                    "lifted pair is not mutually orthogonal".into(),
                ));
            }
        }
    }
    Ok(PrimedPair {
        a: SetFamily::from_sorted(n + 1, a),
        b: SetFamily::from_sorted(n + 1, b),
    })
}

/// Values along the chain `|A||B| ≤ 2^n` derived from the lifted pair.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundAudit {
    pub n: usize,
    pub product: u128,
    pub dim_span_a: usize,
    pub dim_span_b: usize,
    pub span_a_size: u128,
    pub span_b_size: u128,
    pub tight: bool,
}

pub fn product_bound_audit(pair: &CrossPair) -> Result<BoundAudit> {
    let primed = append_construction(pair)?;
    let n = pair.n();
    let dim_a = gf2::rank(primed.a.masks(), n + 1);
    let dim_b = gf2::rank(primed.b.masks(), n + 1);
    let span_a = 1u128 << dim_a;
    let span_b = 1u128 << dim_b;
    let a_len = pair.a.len() as u128;
    let b_len = pair.b.len() as u128;
    let product = a_len * b_len;

    let fail = |what: &str| Err(Error::Inconsistent(format!("bound chain broken: {what}")));
    if dim_a + dim_b > n + 1 {
        return fail("orthogonal spans exceed n + 1 dimensions");
    }
    if span_a < 2 * a_len {
        return fail("|span A'| < 2|A'|");
    }
    if span_b < b_len {
        return fail("|span B'| < |B'|");
    }
    if product > 1u128 << n {
        return fail("|A||B| > 2^n");
    }
    Ok(BoundAudit {
        n,
        product,
        dim_span_a: dim_a,
        dim_span_b: dim_b,
        span_a_size: span_a,
        span_b_size: span_b,
        tight: product == 1u128 << n,
    })
}

/// The largest `A` compatible with a fixed `B`: every subset of `[n]` meeting
/// each member of `B` in the declared fraction of its size.
pub fn max_compatible_a(b: &SetFamily, frac: Fraction) -> Result<SetFamily> {
    let n = b.n();
    check_scan(n)?;
    let sets: Vec<u64> = (0..1u64 << n)
        .filter(|&a| {
            b.masks()
                .iter()
                .all(|&m| frac.holds((a & m).count_ones(), m.count_ones()))
        })
        .collect();
    Ok(SetFamily::from_sorted(n, sets))
}
