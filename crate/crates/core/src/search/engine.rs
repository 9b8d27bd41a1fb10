//! Sharded scan over every non-empty `B` drawn from the admissible sets.
//!
//! Family `f` is the bitmask over the ground list: bit `j` selects member
//! `j`. For each member the compatible `A`s are precomputed as a bitset over
//! `2^[n]`, so the best `A` for a family is the AND of its members' bitsets.

use std::ops::Range;

use crate::error::Result;
use crate::family::Fraction;

/// Best value found in a slice of the family space, with every family index
/// attaining it.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub(crate) struct Partial {
    pub max: u128,
    pub witnesses: Vec<u64>,
    pub scanned: u64,
}

impl Partial {
    /// Associative and commutative up to witness order, which callers sort.
    pub fn merge(mut self, mut other: Partial) -> Partial {
        let scanned = self.scanned + other.scanned;
        let mut out = match self.max.cmp(&other.max) {
            std::cmp::Ordering::Greater => self,
            std::cmp::Ordering::Less => other,
            std::cmp::Ordering::Equal => {
                self.witnesses.append(&mut other.witnesses);
                self
            }
        };
        out.scanned = scanned;
        out
    }
}

pub(crate) struct Ground {
    /// Subsets of `[n]` whose size is divisible by `d`, ascending.
    pub members: Vec<u64>,
    stride: usize,
    compat: Vec<u64>,
    full: Vec<u64>,
}

impl Ground {
    pub fn new(n: usize, frac: Fraction) -> Self {
        let d = frac.d();
        let members: Vec<u64> = (0..1u64 << n)
            .filter(|m| m.count_ones() % d == 0)
            .collect();
        let space = 1usize << n;
        let stride = space.div_ceil(64);
        let mut full = vec![u64::MAX; stride];
        if space < 64 {
            full[0] = (1u64 << space) - 1;
        }
        let mut compat = vec![0u64; members.len() * stride];
        for (j, &b) in members.iter().enumerate() {
            let size = b.count_ones();
            let row = &mut compat[j * stride..(j + 1) * stride];
            for a in 0..space as u64 {
                if frac.holds((a & b).count_ones(), size) {
                    row[a as usize / 64] |= 1u64 << (a % 64);
                }
            }
        }
        Self {
            members,
            stride,
            compat,
            full,
        }
    }

    pub fn family_count(&self) -> u64 {
        1u64 << self.members.len()
    }

    fn fill_compatible(&self, family: u64, out: &mut [u64]) {
        out.copy_from_slice(&self.full);
        let mut rest = family;
        while rest != 0 {
            let j = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            let row = &self.compat[j * self.stride..(j + 1) * self.stride];
            for (o, r) in out.iter_mut().zip(row) {
                *o &= r;
            }
        }
    }

    pub fn scan(&self, range: Range<u64>) -> Partial {
        let mut scratch = vec![0u64; self.stride];
        let mut best = Partial::default();
        for family in range {
            if family == 0 {
                continue;
            }
            best.scanned += 1;
            self.fill_compatible(family, &mut scratch);
            let a_count: u32 = scratch.iter().map(|w| w.count_ones()).sum();
            if a_count == 0 {
                continue;
            }
            let product = a_count as u128 * family.count_ones() as u128;
            if product > best.max {
                best.max = product;
                best.witnesses.clear();
                best.witnesses.push(family);
            } else if product == best.max {
                best.witnesses.push(family);
            }
        }
        best
    }

    pub fn b_sets(&self, family: u64) -> Vec<u64> {
        let mut out = Vec::with_capacity(family.count_ones() as usize);
        let mut rest = family;
        while rest != 0 {
            out.push(self.members[rest.trailing_zeros() as usize]);
            rest &= rest - 1;
        }
        out
    }

    /// The compatible `A` for a family, ascending.
    pub fn a_sets(&self, family: u64) -> Vec<u64> {
        let mut scratch = vec![0u64; self.stride];
        self.fill_compatible(family, &mut scratch);
        let mut out = Vec::new();
        for (w, &word) in scratch.iter().enumerate() {
            let mut rest = word;
            while rest != 0 {
                out.push((w * 64) as u64 + rest.trailing_zeros() as u64);
                rest &= rest - 1;
            }
        }
        out
    }
}

/// Splits `0..total` into `shards` contiguous ranges.
pub(crate) fn shard_ranges(total: u64, shards: usize) -> Vec<Range<u64>> {
    let shards = (shards.max(1) as u64).min(total.max(1));
    let cut = |i: u64| (total as u128 * i as u128 / shards as u128) as u64;
    (0..shards).map(|i| cut(i)..cut(i + 1)).collect()
}

fn run_sequential(ground: &Ground, ranges: &[Range<u64>]) -> Partial {
    ranges
        .iter()
        .map(|r| ground.scan(r.clone()))
        .fold(Partial::default(), Partial::merge)
}

#[cfg(feature = "parallel")]
pub(crate) fn run(ground: &Ground, ranges: &[Range<u64>], workers: usize) -> Result<Partial> {
    use rayon::prelude::*;

    if workers == 1 {
        return Ok(run_sequential(ground, ranges));
    }
    let mut builder = rayon::ThreadPoolBuilder::new();
    if workers > 0 {
        builder = builder.num_threads(workers);
    }
    let pool = builder
        .build()
        .map_err(|e| crate::error::Error::Runtime(e.to_string()))?;
    Ok(pool.install(|| {
        ranges
            .par_iter()
            .map(|r| ground.scan(r.clone()))
            .reduce(Partial::default, Partial::merge)
    }))
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn run(ground: &Ground, ranges: &[Range<u64>], _workers: usize) -> Result<Partial> {
    Ok(run_sequential(ground, ranges))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shards_cover_the_space() {
        for (total, shards) in [(1u64, 4usize), (16, 3), (1 << 16, 256), (7, 7), (5, 0)] {
            let r = shard_ranges(total, shards);
            assert_eq!(r.first().unwrap().start, 0);
            assert_eq!(r.last().unwrap().end, total);
            assert!(r.windows(2).all(|w| w[0].end == w[1].start));
        }
    }

    #[test]
    fn merge_keeps_the_larger_side() {
        let a = Partial { max: 4, witnesses: vec![1, 2], scanned: 3 };
        let b = Partial { max: 8, witnesses: vec![5], scanned: 2 };
        let c = Partial { max: 8, witnesses: vec![7], scanned: 1 };
        let m = a.merge(b).merge(c);
        assert_eq!(m.max, 8);
        assert_eq!(m.witnesses, vec![5, 7]);
        assert_eq!(m.scanned, 6);
    }

    #[test]
    fn compatible_sets_match_direct_scan() {
        let frac = Fraction::HALF;
        let g = Ground::new(4, frac);
        assert_eq!(g.members.len(), 8);
        for family in 1..g.family_count() {
            let b = g.b_sets(family);
            let direct: Vec<u64> = (0..16u64)
                .filter(|&a| b.iter().all(|&m| frac.holds((a & m).count_ones(), m.count_ones())))
                .collect();
            assert_eq!(g.a_sets(family), direct);
        }
    }

    #[test]
    fn wide_ground_uses_multiword_bitsets() {
        // n = 7 gives 128 candidate sets per bitset, two words
        let frac = Fraction::new(1, 7).unwrap();
        let g = Ground::new(7, frac);
        assert_eq!(g.members.len(), 2);
        let full = g.b_sets(0b11);
        assert_eq!(full, vec![0, 0x7f]);
        assert_eq!(g.a_sets(0b11).len(), 7);
        assert_eq!(g.a_sets(0b01).len(), 128);
    }
}
