//! Linear algebra over GF(2) on packed 64-bit masks.
//!
//! A subset `S` of `[n]` is stored as its characteristic vector: element `i`
//! corresponds to bit `i - 1`. All predicates used elsewhere in the crate
//! (weights, intersections, inner products) reduce to `popcount`, `&` and `^`
//! on these masks.

use std::fmt;

use crate::error::{Error, Result};

/// Largest supported ground set.
pub const MAX_GROUND: usize = 64;

/// Largest code dimension whose codewords are materialized in a [`LinearCode`].
pub const MAX_MATERIALIZED_DIM: usize = 26;

/// Mask with the low `n` bits set.
#[inline]
pub fn low_mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

pub(crate) fn check_ground(n: usize) -> Result<()> {
    if n == 0 || n > MAX_GROUND {
        return Err(Error::GroundSet(n));
    }
    Ok(())
}

pub(crate) fn check_mask(n: usize, bits: u64) -> Result<()> {
    if bits & !low_mask(n) != 0 {
        return Err(Error::BitsOutOfRange { n, bits });
    }
    Ok(())
}

/// 1-based elements of a mask, ascending.
pub fn mask_elements(bits: u64) -> Vec<usize> {
    let mut out = Vec::with_capacity(bits.count_ones() as usize);
    let mut rest = bits;
    while rest != 0 {
        out.push(rest.trailing_zeros() as usize + 1);
        rest &= rest - 1;
    }
    out
}

/// Characteristic vector of a subset of `[n]`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitVector {
    n: u8,
    bits: u64,
}

impl BitVector {
    pub fn new(n: usize, bits: u64) -> Result<Self> {
        check_ground(n)?;
        check_mask(n, bits)?;
        Ok(Self { n: n as u8, bits })
    }

    pub fn zero(n: usize) -> Result<Self> {
        Self::new(n, 0)
    }

    /// Builds `χ(S)` from 1-based elements.
    pub fn from_elements<I>(n: usize, elements: I) -> Result<Self>
    where
        I: IntoIterator<Item = usize>,
    {
        check_ground(n)?;
        let mut bits = 0u64;
        for e in elements {
            if e == 0 || e > n {
                return Err(Error::ElementOutOfRange { element: e, n });
            }
            let bit = 1u64 << (e - 1);
            if bits & bit != 0 {
                return Err(Error::RepeatedElement(e));
            }
            bits |= bit;
        }
        Ok(Self { n: n as u8, bits })
    }

    /// Parses a 0/1 string where the `i`-th character is coordinate `i + 1`.
    pub fn from_bitstring(s: &str) -> Result<Self> {
        let n = s.chars().count();
        check_ground(n)?;
        let mut bits = 0u64;
        for (i, ch) in s.chars().enumerate() {
            match ch {
                '0' => {}
                '1' => bits |= 1 << i,
                _ => {
                    return Err(Error::InvalidFamily(format!(
                        "unexpected character {ch:?} in bit string"
                    )))
                }
            }
        }
        Ok(Self { n: n as u8, bits })
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n as usize
    }

    #[inline]
    pub fn bits(&self) -> u64 {
        self.bits
    }

    /// `|S|`.
    #[inline]
    pub fn weight(&self) -> u32 {
        self.bits.count_ones()
    }

    pub fn is_empty(&self) -> bool {
        self.bits == 0
    }

    pub fn contains(&self, element: usize) -> bool {
        element >= 1 && element <= self.n() && self.bits >> (element - 1) & 1 == 1
    }

    pub fn elements(&self) -> Vec<usize> {
        mask_elements(self.bits)
    }

    pub fn to_bitstring(&self) -> String {
        (0..self.n())
            .map(|i| if self.bits >> i & 1 == 1 { '1' } else { '0' })
            .collect()
    }

    fn same_ground(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return Err(Error::SizeMismatch {
                expected: self.n(),
                found: other.n(),
            });
        }
        Ok(())
    }

    pub fn intersection(&self, other: &Self) -> Result<Self> {
        self.same_ground(other)?;
        Ok(Self {
            n: self.n,
            bits: self.bits & other.bits,
        })
    }

    /// Coordinate-wise sum, i.e. symmetric difference.
    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_ground(other)?;
        Ok(Self {
            n: self.n,
            bits: self.bits ^ other.bits,
        })
    }
}

impl fmt::Debug for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVector({})", self.to_bitstring())
    }
}

impl fmt::Display for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_set(f, self.bits)
    }
}

pub(crate) fn write_set(f: &mut impl fmt::Write, bits: u64) -> fmt::Result {
    f.write_char('{')?;
    for (i, e) in mask_elements(bits).into_iter().enumerate() {
        if i > 0 {
            f.write_char(',')?;
        }
        write!(f, "{e}")?;
    }
    f.write_char('}')
}

/// Standard inner product over GF(2): parity of `|U ∩ V|`.
pub fn inner_product(u: &BitVector, v: &BitVector) -> Result<u8> {
    u.same_ground(v)?;
    Ok(mask_inner(u.bits, v.bits))
}

#[inline]
pub(crate) fn mask_inner(u: u64, v: u64) -> u8 {
    ((u & v).count_ones() & 1) as u8
}

/// Reduced row-echelon basis of the span of `rows`.
///
/// Pivot columns are taken lowest index first, so the pivot of each returned
/// row is its lowest set bit and rows come out in increasing pivot order.
pub fn reduced_basis(rows: &[u64], n: usize) -> Vec<u64> {
    let mut m: Vec<u64> = rows.iter().copied().filter(|&r| r != 0).collect();
    let mut rank = 0;
    for col in 0..n {
        let bit = 1u64 << col;
        let Some(p) = (rank..m.len()).find(|&i| m[i] & bit != 0) else {
            continue;
        };
        m.swap(rank, p);
        let pivot = m[rank];
        for (i, row) in m.iter_mut().enumerate() {
            if i != rank && *row & bit != 0 {
                *row ^= pivot;
            }
        }
        rank += 1;
        if rank == m.len() {
            break;
        }
    }
    m.truncate(rank);
    m
}

/// Dimension of the span of `rows`.
pub fn rank(rows: &[u64], n: usize) -> usize {
    reduced_basis(rows, n).len()
}

/// Per-column classification of a linear code's codeword matrix.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ColumnTag {
    AllZero,
    Balanced,
}

/// A binary linear code with its codewords materialized in ascending order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearCode {
    n: usize,
    words: Vec<u64>,
    basis: Vec<u64>,
}

/// Span of `vectors` as a linear code over `[n]`.
pub fn span(vectors: &[BitVector], n: usize) -> Result<LinearCode> {
    check_ground(n)?;
    for v in vectors {
        if v.n() != n {
            return Err(Error::SizeMismatch {
                expected: n,
                found: v.n(),
            });
        }
    }
    let masks: Vec<u64> = vectors.iter().map(|v| v.bits).collect();
    LinearCode::from_masks(n, &masks)
}

impl LinearCode {
    /// Span of raw masks.
    pub fn from_masks(n: usize, masks: &[u64]) -> Result<Self> {
        check_ground(n)?;
        for &m in masks {
            check_mask(n, m)?;
        }
        Self::from_basis(n, reduced_basis(masks, n))
    }

    fn from_basis(n: usize, basis: Vec<u64>) -> Result<Self> {
        if basis.len() > MAX_MATERIALIZED_DIM {
            return Err(Error::Capacity(format!(
                "code of dimension {} has too many codewords to list (limit dimension {})",
                basis.len(),
                MAX_MATERIALIZED_DIM
            )));
        }
        let size = 1usize << basis.len();
        let mut words = Vec::with_capacity(size);
        // Gray-code walk: one XOR per codeword.
        let mut w = 0u64;
        words.push(w);
        for i in 1..size {
            w ^= basis[i.trailing_zeros() as usize];
            words.push(w);
        }
        words.sort_unstable();
        Ok(Self { n, words, basis })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn word_masks(&self) -> &[u64] {
        &self.words
    }

    pub fn basis_masks(&self) -> &[u64] {
        &self.basis
    }

    pub fn words(&self) -> impl Iterator<Item = BitVector> + '_ {
        let n = self.n as u8;
        self.words.iter().map(move |&bits| BitVector { n, bits })
    }

    pub fn basis(&self) -> impl Iterator<Item = BitVector> + '_ {
        let n = self.n as u8;
        self.basis.iter().map(move |&bits| BitVector { n, bits })
    }

    pub fn contains(&self, bits: u64) -> bool {
        self.words.binary_search(&bits).is_ok()
    }

    /// The dual code `{x : <x, c> = 0 for all c}`.
    pub fn dual(&self) -> Result<Self> {
        let pivots: u64 = self
            .basis
            .iter()
            .fold(0, |acc, r| acc | (1u64 << r.trailing_zeros()));
        let mut dual_basis = Vec::with_capacity(self.n - self.dim());
        for free in 0..self.n {
            let bit = 1u64 << free;
            if pivots & bit != 0 {
                continue;
            }
            let v = self
                .basis
                .iter()
                .filter(|&&r| r & bit != 0)
                .fold(bit, |acc, r| acc | (1u64 << r.trailing_zeros()));
            dual_basis.push(v);
        }
        Self::from_basis(self.n, reduced_basis(&dual_basis, self.n))
    }

    /// `C ⊆ C⊥`: basis vectors have even weight and are pairwise orthogonal.
    pub fn is_self_orthogonal(&self) -> bool {
        self.basis.iter().enumerate().all(|(i, &u)| {
            self.basis[i..].iter().all(|&v| mask_inner(u, v) == 0)
        })
    }

    pub fn is_self_dual(&self) -> bool {
        2 * self.dim() == self.n && self.is_self_orthogonal()
    }

    pub fn column_profile(&self) -> Result<Vec<ColumnTag>> {
        column_profile(self.n, &self.words)
    }
}

/// Classifies each column of the matrix whose rows are `words`.
///
/// In a linear code every column is either all zero or exactly half ones;
/// any other count means `words` is not closed under addition.
pub fn column_profile(n: usize, words: &[u64]) -> Result<Vec<ColumnTag>> {
    if words.is_empty() {
        return Err(Error::InvalidFamily("code has no codewords".into()));
    }
    let total = words.len();
    (0..n)
        .map(|col| {
            let ones = words.iter().filter(|&&w| w >> col & 1 == 1).count();
            if ones == 0 {
                Ok(ColumnTag::AllZero)
            } else if 2 * ones == total {
                Ok(ColumnTag::Balanced)
            } else {
                Err(Error::Inconsistent(format!(
                    "column {} has {ones} ones among {total} codewords",
                    col + 1
                )))
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bv(s: &str) -> BitVector {
        BitVector::from_bitstring(s).unwrap()
    }

    fn words_of(code: &LinearCode) -> Vec<String> {
        code.words().map(|w| w.to_bitstring()).collect()
    }

    #[test]
    fn bitvector_rejects_bad_input() {
        assert!(matches!(BitVector::new(0, 0), Err(Error::GroundSet(0))));
        assert!(matches!(BitVector::new(65, 0), Err(Error::GroundSet(65))));
        assert!(matches!(
            BitVector::new(3, 0b1000),
            Err(Error::BitsOutOfRange { .. })
        ));
        assert!(BitVector::new(64, u64::MAX).is_ok());
        assert!(matches!(
            BitVector::from_elements(3, [4]),
            Err(Error::ElementOutOfRange { element: 4, n: 3 })
        ));
        assert!(matches!(
            BitVector::from_elements(3, [1, 1]),
            Err(Error::RepeatedElement(1))
        ));
    }

    #[test]
    fn bitvector_elements_and_weight() {
        let v = BitVector::from_elements(6, [1, 3, 4]).unwrap();
        assert_eq!(v.to_bitstring(), "101100");
        assert_eq!(v.weight(), 3);
        assert_eq!(v.elements(), vec![1, 3, 4]);
        assert_eq!(v.to_string(), "{1,3,4}");
        assert!(v.contains(3) && !v.contains(2) && !v.contains(7));
    }

    #[test]
    fn span_examples() {
        let empty = span(&[], 3).unwrap();
        assert_eq!(words_of(&empty), vec!["000"]);
        assert_eq!(empty.dim(), 0);

        let c = span(&[bv("1100"), bv("0110")], 4).unwrap();
        let mut got = words_of(&c);
        got.sort();
        assert_eq!(got, vec!["0000", "0110", "1010", "1100"]);
        assert_eq!(c.dim(), 2);

        let r = span(&[bv("11")], 2).unwrap();
        assert_eq!(r.len(), 2);
        assert_eq!(r.dim(), 1);
    }

    #[test]
    fn span_rejects_mismatched_sizes() {
        assert!(matches!(
            span(&[bv("11"), bv("110")], 2),
            Err(Error::SizeMismatch { .. })
        ));
    }

    #[test]
    fn basis_is_reduced_with_low_pivots() {
        // rows 1110, 0111, 1001 have rank 2
        let b = reduced_basis(&[0b0111, 0b1110, 0b1001], 4);
        assert_eq!(b.len(), 2);
        for (i, &r) in b.iter().enumerate() {
            let p = r.trailing_zeros();
            for (j, &s) in b.iter().enumerate() {
                if i != j {
                    assert_eq!(s >> p & 1, 0);
                }
            }
        }
        assert!(b.windows(2).all(|w| w[0].trailing_zeros() < w[1].trailing_zeros()));
    }

    #[test]
    fn dual_examples() {
        let rep = span(&[bv("11")], 2).unwrap();
        assert_eq!(rep.dual().unwrap(), rep);
        assert!(rep.is_self_dual());

        let zero = span(&[], 3).unwrap();
        assert_eq!(zero.dual().unwrap().len(), 8);

        let c = span(&[bv("1100"), bv("0011")], 4).unwrap();
        let d = c.dual().unwrap();
        assert_eq!(d.dim(), 2);
        assert!(d.contains(bv("1100").bits()) && d.contains(bv("0011").bits()));
    }

    #[test]
    fn self_orthogonality_examples() {
        assert!(span(&[bv("11")], 2).unwrap().is_self_orthogonal());
        assert!(!span(&[bv("1")], 1).unwrap().is_self_orthogonal());
        assert!(span(&[bv("1100"), bv("0011")], 4)
            .unwrap()
            .is_self_orthogonal());
        // even weights but not mutually orthogonal
        assert!(!span(&[bv("1100"), bv("0110")], 4)
            .unwrap()
            .is_self_orthogonal());
    }

    #[test]
    fn column_profile_examples() {
        use ColumnTag::*;
        let rep = span(&[bv("11")], 2).unwrap();
        assert_eq!(rep.column_profile().unwrap(), vec![Balanced, Balanced]);
        let zero = span(&[], 4).unwrap();
        assert_eq!(zero.column_profile().unwrap(), vec![AllZero; 4]);
        let c = span(&[bv("1100"), bv("0110")], 4).unwrap();
        assert_eq!(
            c.column_profile().unwrap(),
            vec![Balanced, Balanced, Balanced, AllZero]
        );
    }

    #[test]
    fn column_profile_flags_non_linear_rows() {
        // {000, 110, 011}: column 2 has two ones among three rows
        let err = column_profile(3, &[0b000, 0b011, 0b110]).unwrap_err();
        assert!(matches!(err, Error::Inconsistent(_)));
        assert!(column_profile(3, &[]).is_err());
    }

    #[test]
    fn inner_product_examples() {
        assert_eq!(inner_product(&bv("11"), &bv("11")).unwrap(), 0);
        assert_eq!(inner_product(&bv("10"), &bv("11")).unwrap(), 1);
        // overlap of 101101 and 011011 is positions {3, 6}
        assert_eq!(inner_product(&bv("101101"), &bv("011011")).unwrap(), 0);
        assert!(inner_product(&bv("10"), &bv("101")).is_err());
    }

    #[test]
    fn materialization_is_capped() {
        let basis: Vec<u64> = (0..30).map(|i| 1u64 << i).collect();
        assert!(matches!(
            LinearCode::from_masks(30, &basis),
            Err(Error::Capacity(_))
        ));
        assert_eq!(rank(&basis, 30), 30);
    }
}
