//! Exhaustive search for the largest `|A||B|`.
//!
//! For a fixed `B` the best `A` is forced (every compatible subset), so the
//! search enumerates every non-empty `B` built from subsets whose size is
//! divisible by `d` and scores it against its compatible `A`. The family
//! space is cut into contiguous shards; shard results merge by an
//! order-independent reduction and witnesses are sorted afterwards, so output
//! does not depend on the worker count.

mod canonical;
mod engine;

use std::collections::BTreeMap;

use serde::Serialize;

pub use canonical::{
    canonical_form, classify_maximal, reference_pairs, CanonicalForm, ClassLabel, Classifier,
    MAX_CANONICAL_GROUND,
};

use crate::error::{Error, Result};
use crate::family::{CrossPair, Fraction, SetFamily};
use crate::gf2::check_ground;
use engine::{shard_ranges, Ground};

/// Default ceiling on the number of admissible sets (`2^24` families).
pub const FAMILY_CEILING: usize = 24;
/// Ceiling with `allow_large`.
pub const HARD_FAMILY_CEILING: usize = 40;
/// Largest ground set the compatible-`A` bitsets are built for.
pub const MAX_SEARCH_GROUND: usize = 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchConfig {
    /// Worker threads; `0` picks the machine default, `1` runs inline.
    pub workers: usize,
    /// Number of contiguous index ranges the family space is cut into.
    pub shards: usize,
    /// Lift [`FAMILY_CEILING`] up to [`HARD_FAMILY_CEILING`].
    pub allow_large: bool,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            workers: 0,
            shards: 256,
            allow_large: false,
        }
    }
}

impl SearchConfig {
    pub fn with_workers(workers: usize) -> Self {
        Self {
            workers,
            ..Self::default()
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchResult {
    pub n: usize,
    pub frac: Fraction,
    pub max_product: u128,
    /// Every labeled pair attaining the maximum, ordered by family index.
    pub witness_pairs: Vec<CrossPair>,
    pub families_scanned: u64,
}

impl SearchResult {
    pub fn attains_power_of_two(&self) -> bool {
        self.max_product == 1u128 << self.n
    }

    /// Some witness has `B ≠ {∅}`.
    pub fn has_nontrivial_witness(&self) -> bool {
        self.witness_pairs.iter().any(|p| p.b().masks() != [0])
    }
}

/// Number of subsets of `[n]` with size divisible by `d`.
pub fn admissible_count(n: usize, frac: Fraction) -> u128 {
    let d = frac.d() as usize;
    (0..=n)
        .step_by(d)
        .map(|w| crate::construct::binomial(n as u64, w as u64))
        .sum()
}

fn prepare(n: usize, frac: Fraction, cfg: &SearchConfig) -> Result<Ground> {
    check_ground(n)?;
    if n > MAX_SEARCH_GROUND {
        return Err(Error::Capacity(format!(
            "n = {n} exceeds the search limit {MAX_SEARCH_GROUND}"
        )));
    }
    let count = admissible_count(n, frac);
    let ceiling = if cfg.allow_large {
        HARD_FAMILY_CEILING
    } else {
        FAMILY_CEILING
    };
    if count > ceiling as u128 {
        return Err(Error::Capacity(format!(
            "{count} admissible sets for n = {n}, c/d = {frac} gives 2^{count} families; \
             ceiling is 2^{ceiling}"
        )));
    }
    Ok(Ground::new(n, frac))
}

/// Exact maximum of `|A||B|` over non-empty `A`, `B`, with all witnesses.
pub fn max_product(n: usize, frac: Fraction, cfg: &SearchConfig) -> Result<SearchResult> {
    let ground = prepare(n, frac, cfg)?;
    let ranges = shard_ranges(ground.family_count(), cfg.shards);
    let mut partial = engine::run(&ground, &ranges, cfg.workers)?;
    partial.witnesses.sort_unstable();

    if partial.max > 1u128 << n {
        return Err(Error::Inconsistent(format!(
            "found |A||B| = {} above 2^{n}",
            partial.max
        )));
    }
    let witness_pairs = partial
        .witnesses
        .iter()
        .map(|&f| {
            CrossPair::new(
                frac,
                SetFamily::from_sorted(n, ground.a_sets(f)),
                SetFamily::from_sorted(n, ground.b_sets(f)),
            )
        })
        .collect::<Result<_>>()?;
    Ok(SearchResult {
        n,
        frac,
        max_product: partial.max,
        witness_pairs,
        families_scanned: partial.scanned,
    })
}

/// Every labeled pair with `|A||B| = 2^n` and `A` maximal for its `B`.
pub fn enumerate_maximal(n: usize, frac: Fraction, cfg: &SearchConfig) -> Result<Vec<CrossPair>> {
    let result = max_product(n, frac, cfg)?;
    let target = 1u128 << n;
    Ok(result
        .witness_pairs
        .into_iter()
        .filter(|p| p.product() == target)
        .collect())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassEntry {
    pub k_or_nonstandard: ClassLabel,
    pub representative: CrossPair,
}

/// Groups witnesses into relabeling classes, ordered by canonical form.
///
/// Each class keeps its first labeled witness as representative. Above
/// [`MAX_CANONICAL_GROUND`] every witness is its own class and is only
/// labeled when it equals a reference pair exactly.
pub fn classify_witnesses(n: usize, frac: Fraction, witnesses: &[CrossPair]) -> Result<Vec<ClassEntry>> {
    if n > MAX_CANONICAL_GROUND {
        let (refs, _) = reference_pairs(n, frac)?;
        return Ok(witnesses
            .iter()
            .map(|w| ClassEntry {
                k_or_nonstandard: refs
                    .iter()
                    .find(|(_, r)| r == w)
                    .map_or(ClassLabel::Unclassified, |(k, _)| ClassLabel::K(*k)),
                representative: w.clone(),
            })
            .collect());
    }
    let classifier = Classifier::new(n, frac)?;
    let mut classes: BTreeMap<CanonicalForm, &CrossPair> = BTreeMap::new();
    for w in witnesses {
        classes.entry(canonical_form(w)?).or_insert(w);
    }
    Ok(classes
        .into_iter()
        .map(|(form, rep)| ClassEntry {
            k_or_nonstandard: classifier.label(&form),
            representative: rep.clone(),
        })
        .collect())
}

/// JSON report of a search run.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SearchReport {
    pub n: usize,
    pub c: u32,
    pub d: u32,
    pub max_product: u128,
    pub classes: Vec<ClassEntry>,
    pub families_scanned: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witnesses: Option<Vec<CrossPair>>,
}

impl SearchReport {
    pub fn new(result: &SearchResult, include_witnesses: bool) -> Result<Self> {
        Ok(Self {
            n: result.n,
            c: result.frac.c(),
            d: result.frac.d(),
            max_product: result.max_product,
            classes: classify_witnesses(result.n, result.frac, &result.witness_pairs)?,
            families_scanned: result.families_scanned,
            witnesses: include_witnesses.then(|| result.witness_pairs.clone()),
        })
    }

    pub fn has_nonstandard(&self) -> bool {
        self.classes
            .iter()
            .any(|c| c.k_or_nonstandard == ClassLabel::Nonstandard)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SweepRow {
    pub c: u32,
    pub d: u32,
    /// `"ok"`, or `"skipped"` when the fraction exceeds the family ceiling.
    pub status: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_product: Option<u128>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nontrivial: Option<bool>,
    pub classes: Vec<ClassEntry>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SweepReport {
    pub n: usize,
    pub rows: Vec<SweepRow>,
}

/// Runs [`max_product`] for every irreducible `c/d` with `d ≤ n`.
pub fn sweep_fractions(n: usize, cfg: &SearchConfig) -> Result<SweepReport> {
    check_ground(n)?;
    if n > MAX_SEARCH_GROUND {
        return Err(Error::Capacity(format!(
            "n = {n} exceeds the search limit {MAX_SEARCH_GROUND}"
        )));
    }
    let rows = Fraction::farey(n as u32)
        .into_iter()
        .map(|frac| match max_product(n, frac, cfg) {
            Ok(result) => Ok(SweepRow {
                c: frac.c(),
                d: frac.d(),
                status: "ok",
                max_product: Some(result.max_product),
                nontrivial: Some(result.has_nontrivial_witness()),
                classes: classify_witnesses(n, frac, &result.witness_pairs)?,
            }),
            Err(Error::Capacity(_)) => Ok(SweepRow {
                c: frac.c(),
                d: frac.d(),
                status: "skipped",
                max_product: None,
                nontrivial: None,
                classes: Vec::new(),
            }),
            Err(e) => Err(e),
        })
        .collect::<Result<_>>()?;
    Ok(SweepReport { n, rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::thm12_pair;

    fn seq() -> SearchConfig {
        SearchConfig::with_workers(1)
    }

    #[test]
    fn admissible_counts() {
        assert_eq!(admissible_count(4, Fraction::HALF), 8);
        assert_eq!(admissible_count(4, Fraction::new(1, 3).unwrap()), 5);
        assert_eq!(admissible_count(5, Fraction::ONE), 32);
    }

    #[test]
    fn n3_half() {
        let r = max_product(3, Fraction::HALF, &seq()).unwrap();
        assert_eq!(r.max_product, 8);
        assert_eq!(r.witness_pairs.len(), 4);
        assert!(r.witness_pairs.contains(&thm12_pair(3, 0).unwrap()));
        assert_eq!(r.families_scanned, 15);
    }

    #[test]
    fn n4_third() {
        let r = max_product(4, Fraction::new(1, 3).unwrap(), &seq()).unwrap();
        assert_eq!(r.max_product, 16);
        assert!(r
            .witness_pairs
            .contains(&thm12_pair(4, 0).unwrap().with_frac(Fraction::new(1, 3).unwrap())));
    }

    #[test]
    fn n1_any() {
        for frac in [Fraction::ZERO, Fraction::ONE] {
            assert_eq!(max_product(1, frac, &seq()).unwrap().max_product, 2);
        }
    }

    #[test]
    fn enumerate_small() {
        let pairs = enumerate_maximal(2, Fraction::HALF, &seq()).unwrap();
        assert_eq!(pairs.len(), 2);
        assert!(pairs.contains(&thm12_pair(2, 0).unwrap()));
        assert!(pairs.contains(&thm12_pair(2, 1).unwrap()));
        assert_eq!(enumerate_maximal(3, Fraction::HALF, &seq()).unwrap().len(), 4);
    }

    #[test]
    fn capacity_errors() {
        assert!(matches!(
            max_product(30, Fraction::HALF, &seq()),
            Err(Error::Capacity(_))
        ));
        assert!(matches!(
            max_product(6, Fraction::HALF, &seq()),
            Err(Error::Capacity(_))
        ));
        assert!(matches!(max_product(0, Fraction::HALF, &seq()), Err(Error::GroundSet(0))));
    }

    #[test]
    fn report_classes_for_n4() {
        let r = max_product(4, Fraction::HALF, &seq()).unwrap();
        let report = SearchReport::new(&r, false).unwrap();
        let labels: Vec<ClassLabel> = report.classes.iter().map(|c| c.k_or_nonstandard).collect();
        assert_eq!(labels, vec![ClassLabel::K(0), ClassLabel::K(1), ClassLabel::K(2)]);
        assert!(report.witnesses.is_none());
        assert!(!report.has_nonstandard());
    }

    #[test]
    fn sweep_small() {
        let s = sweep_fractions(1, &seq()).unwrap();
        assert_eq!(s.rows.len(), 2);
        assert!(s.rows.iter().all(|r| r.max_product == Some(2)));

        let s = sweep_fractions(2, &seq()).unwrap();
        let fr: Vec<(u32, u32)> = s.rows.iter().map(|r| (r.c, r.d)).collect();
        assert_eq!(fr, vec![(0, 1), (1, 2), (1, 1)]);
        assert!(s.rows.iter().all(|r| r.max_product == Some(4)));
    }

    #[test]
    fn sweep_marks_oversized_rows() {
        let s = sweep_fractions(5, &seq()).unwrap();
        let zero = &s.rows[0];
        assert_eq!((zero.c, zero.d, zero.status), (0, 1, "skipped"));
        assert!(s.rows.iter().filter(|r| r.status == "ok").all(|r| r.max_product == Some(32)));
    }
}
