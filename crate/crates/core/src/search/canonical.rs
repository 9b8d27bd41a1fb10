//! Canonical forms of pairs under relabeling of `[n]`, and classification
//! against the known maximal pairs.

use std::cmp::Ordering;
use std::fmt;

use itertools::Itertools;
use serde::{Serialize, Serializer};

use crate::construct::{thm12_pair, trivial_pair};
use crate::error::{Error, Result};
use crate::family::{permute_mask, CrossPair, Fraction, SetFamily};

/// Largest ground set for the factorial canonicalization scan.
pub const MAX_CANONICAL_GROUND: usize = 8;

/// Lexicographically least relabeling of a pair.
///
/// Ordered by `(|B|, B masks ascending, |A|, A masks ascending)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CanonicalForm {
    n: usize,
    frac: Fraction,
    a: Vec<u64>,
    b: Vec<u64>,
}

impl CanonicalForm {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn frac(&self) -> Fraction {
        self.frac
    }

    pub fn a_masks(&self) -> &[u64] {
        &self.a
    }

    pub fn b_masks(&self) -> &[u64] {
        &self.b
    }

    /// The canonical representative as a pair.
    pub fn to_pair(&self) -> CrossPair {
        CrossPair::new(
            self.frac,
            SetFamily::from_sorted(self.n, self.a.clone()),
            SetFamily::from_sorted(self.n, self.b.clone()),
        )
        .expect("same ground set")
    }
}

impl Ord for CanonicalForm {
    fn cmp(&self, other: &Self) -> Ordering {
        self.b
            .len()
            .cmp(&other.b.len())
            .then_with(|| self.b.cmp(&other.b))
            .then_with(|| self.a.len().cmp(&other.a.len()))
            .then_with(|| self.a.cmp(&other.a))
            .then_with(|| self.n.cmp(&other.n))
            .then_with(|| (self.frac.c(), self.frac.d()).cmp(&(other.frac.c(), other.frac.d())))
    }
}

impl PartialOrd for CanonicalForm {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

fn permuted_sorted(masks: &[u64], perm: &[usize], out: &mut Vec<u64>) {
    out.clear();
    out.extend(masks.iter().map(|&m| permute_mask(m, perm)));
    out.sort_unstable();
}

/// Minimum over all `n!` relabelings, applied to both families at once.
pub fn canonical_form(pair: &CrossPair) -> Result<CanonicalForm> {
    let n = pair.n();
    if n > MAX_CANONICAL_GROUND {
        return Err(Error::Capacity(format!(
            "canonical form scans n! relabelings; n = {n} exceeds {MAX_CANONICAL_GROUND}"
        )));
    }
    let (a, b) = (pair.a().masks(), pair.b().masks());
    let mut best_b: Vec<u64> = b.to_vec();
    let mut best_a: Vec<u64> = a.to_vec();
    let mut cand_b = Vec::with_capacity(b.len());
    let mut cand_a = Vec::with_capacity(a.len());
    for perm in (0..n).permutations(n) {
        permuted_sorted(b, &perm, &mut cand_b);
        match cand_b.cmp(&best_b) {
            Ordering::Greater => continue,
            Ordering::Less => {
                permuted_sorted(a, &perm, &mut cand_a);
                std::mem::swap(&mut best_b, &mut cand_b);
                std::mem::swap(&mut best_a, &mut cand_a);
            }
            Ordering::Equal => {
                permuted_sorted(a, &perm, &mut cand_a);
                if cand_a < best_a {
                    std::mem::swap(&mut best_a, &mut cand_a);
                }
            }
        }
    }
    Ok(CanonicalForm {
        n,
        frac: pair.frac(),
        a: best_a,
        b: best_b,
    })
}

/// Outcome of matching a pair against the known maximal pairs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ClassLabel {
    /// Isomorphic to the reference pair with this parameter.
    K(usize),
    /// The fraction has a known characterization and the pair matches none
    /// of its pairs.
    Nonstandard,
    /// The fraction has no known characterization and the pair is not the
    /// trivial `(2^[n], {∅})`.
    Unclassified,
}

impl fmt::Display for ClassLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClassLabel::K(k) => write!(f, "k={k}"),
            ClassLabel::Nonstandard => f.write_str("NONSTANDARD"),
            ClassLabel::Unclassified => f.write_str("UNCLASSIFIED"),
        }
    }
}

impl Serialize for ClassLabel {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            ClassLabel::K(k) => s.serialize_u64(*k as u64),
            ClassLabel::Nonstandard => s.serialize_str("NONSTANDARD"),
            ClassLabel::Unclassified => s.serialize_str("UNCLASSIFIED"),
        }
    }
}

/// Reference maximal pairs for a fraction, keyed by their parameter.
///
/// `1/2` uses the couple construction for `k = 0..=n/2`; `0` and `1` use
/// the trivial pairs for `k = 0..=n`. Every other fraction only has the
/// `(2^[n], {∅})` pair, labeled `k = 0`. The flag says whether the list is a
/// complete characterization.
pub fn reference_pairs(n: usize, frac: Fraction) -> Result<(Vec<(usize, CrossPair)>, bool)> {
    if frac == Fraction::HALF {
        let refs = (0..=n / 2)
            .map(|k| Ok((k, thm12_pair(n, k)?)))
            .collect::<Result<_>>()?;
        Ok((refs, true))
    } else if frac == Fraction::ZERO || frac == Fraction::ONE {
        let refs = (0..=n)
            .map(|k| Ok((k, trivial_pair(n, frac, k)?)))
            .collect::<Result<_>>()?;
        Ok((refs, true))
    } else {
        let base = thm12_pair(n, 0)?.with_frac(frac);
        Ok((vec![(0, base)], false))
    }
}

/// Matches pairs by canonical form against [`reference_pairs`].
pub struct Classifier {
    refs: Vec<(usize, CanonicalForm)>,
    complete: bool,
}

impl Classifier {
    pub fn new(n: usize, frac: Fraction) -> Result<Self> {
        let (pairs, complete) = reference_pairs(n, frac)?;
        let refs = pairs
            .iter()
            .map(|(k, p)| Ok((*k, canonical_form(p)?)))
            .collect::<Result<_>>()?;
        Ok(Self { refs, complete })
    }

    pub fn label(&self, form: &CanonicalForm) -> ClassLabel {
        match self.refs.iter().find(|(_, r)| r == form) {
            Some((k, _)) => ClassLabel::K(*k),
            None if self.complete => ClassLabel::Nonstandard,
            None => ClassLabel::Unclassified,
        }
    }
}

/// Classifies a maximal cross-bisecting pair.
///
/// Returns the `k` of the couple construction it is isomorphic to, or
/// [`ClassLabel::Nonstandard`] if none matches.
pub fn classify_maximal(pair: &CrossPair) -> Result<ClassLabel> {
    if pair.frac() != Fraction::HALF {
        return Err(Error::Precondition(format!(
            "classification expects a 1/2 pair, got {}",
            pair.frac()
        )));
    }
    if !pair.is_cross_intersecting() {
        return Err(Error::Precondition("pair is not cross-bisecting".into()));
    }
    if pair.product() != 1u128 << pair.n() {
        return Err(Error::Precondition(format!(
            "pair is not maximal: |A||B| = {} != 2^{}",
            pair.product(),
            pair.n()
        )));
    }
    let form = canonical_form(pair)?;
    Ok(Classifier::new(pair.n(), Fraction::HALF)?.label(&form))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn relabeled_couples_share_a_form() {
        let p = thm12_pair(4, 1).unwrap();
        // send couple {1,2} to {3,4}
        let q = p.relabeled(&[2, 3, 0, 1]);
        assert_ne!(p, q);
        assert_eq!(canonical_form(&p).unwrap(), canonical_form(&q).unwrap());
    }

    #[test]
    fn different_k_differ() {
        let f1 = canonical_form(&thm12_pair(4, 1).unwrap()).unwrap();
        let f2 = canonical_form(&thm12_pair(4, 2).unwrap()).unwrap();
        assert_ne!(f1, f2);
        assert!(f1 < f2);
    }

    #[test]
    fn canonical_form_is_a_fixed_point() {
        let p = thm12_pair(5, 2).unwrap().relabeled(&[4, 0, 3, 1, 2]);
        let f = canonical_form(&p).unwrap();
        assert_eq!(canonical_form(&f.to_pair()).unwrap(), f);
    }

    #[test]
    fn capacity_limit() {
        let p = thm12_pair(9, 0).unwrap();
        assert!(matches!(canonical_form(&p), Err(Error::Capacity(_))));
    }

    #[test]
    fn classify_examples() {
        let p = thm12_pair(5, 0).unwrap();
        assert_eq!(classify_maximal(&p).unwrap(), ClassLabel::K(0));
        let p = thm12_pair(5, 2).unwrap().relabeled(&[3, 1, 4, 0, 2]);
        assert_eq!(classify_maximal(&p).unwrap(), ClassLabel::K(2));
    }

    #[test]
    fn classify_rejects_non_maximal() {
        let p = thm12_pair(4, 1).unwrap();
        let a = SetFamily::new(4, p.a().masks()[1..].to_vec()).unwrap();
        let smaller = CrossPair::new(Fraction::HALF, a, p.b().clone()).unwrap();
        assert!(matches!(
            classify_maximal(&smaller),
            Err(Error::Precondition(_))
        ));
        assert!(classify_maximal(&p.with_frac(Fraction::ZERO)).is_err());
    }

    #[test]
    fn labels_serialize() {
        assert_eq!(serde_json::to_string(&ClassLabel::K(2)).unwrap(), "2");
        assert_eq!(
            serde_json::to_string(&ClassLabel::Nonstandard).unwrap(),
            "\"NONSTANDARD\""
        );
    }
}
