//! Structural checks on the `B` side of a maximal cross-bisecting pair and
//! its decomposition into disjoint atoms.
//!
//! For a maximal pair, `B` is a linear code, its sum respects the weight
//! classes mod 4, it is self-orthogonal and closed under intersection. Such a
//! family is generated by pairwise-disjoint even "atoms", and the best
//! compatible `A` has size `2^n0 · Π C(2i_j, i_j)` where `|atom_j| = 2i_j`
//! and `n0` counts the coordinates no member uses.

use std::fmt;

use serde::Serialize;

use crate::construct::binomial;
use crate::error::{Error, Result};
use crate::family::{mask_bisects, partition_by_weight, Fraction, SetFamily};
use crate::gf2::{self, low_mask, mask_elements, BitVector, LinearCode};

/// Which structural property a family failed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Violation {
    Linearity,
    Parity,
    SelfOrthogonal,
    IntersectionClosure,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Violation::Linearity => "LINEARITY",
            Violation::Parity => "PARITY",
            Violation::SelfOrthogonal => "SELF_ORTHOGONAL",
            Violation::IntersectionClosure => "INTERSECTION_CLOSURE",
        })
    }
}

/// Contains `∅` and is closed under symmetric difference.
pub fn check_linearity(b: &SetFamily) -> bool {
    let sets = b.masks();
    b.contains(0)
        && sets
            .iter()
            .enumerate()
            .all(|(i, &x)| sets[i + 1..].iter().all(|&y| b.contains(x ^ y)))
}

/// `b1 + b2` lands in the zero-residue class exactly when `b1` and `b2`
/// share a weight class, and in the `d` class otherwise.
///
/// A sum missing from `B` also yields `false`.
pub fn check_parity_closure(b: &SetFamily, frac: Fraction) -> Result<bool> {
    let parts = partition_by_weight(b, frac)?;
    let in_zero = |m: u64| parts.zero_residue.contains(m);
    let sets = b.masks();
    for (i, &x) in sets.iter().enumerate() {
        for &y in &sets[i..] {
            let s = x ^ y;
            if !b.contains(s) {
                return Ok(false);
            }
            if in_zero(s) != (in_zero(x) == in_zero(y)) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Every pair of members (a member with itself included) meets evenly.
pub fn check_self_orthogonal_family(b: &SetFamily) -> bool {
    if b.is_empty() {
        return true;
    }
    match LinearCode::from_masks(b.n(), b.masks()) {
        Ok(code) => code.is_self_orthogonal(),
        // span too large to list: fall back to the pairwise definition
        Err(_) => {
            let sets = b.masks();
            sets.iter()
                .enumerate()
                .all(|(i, &x)| sets[i..].iter().all(|&y| gf2::mask_inner(x, y) == 0))
        }
    }
}

pub fn check_intersection_closure(b: &SetFamily) -> bool {
    let sets = b.masks();
    sets.iter()
        .enumerate()
        .all(|(i, &x)| sets[i + 1..].iter().all(|&y| b.contains(x & y)))
}

/// If `a` bisects `b1`, `b2` and `b1 Δ b2`, it also bisects `b1 ∩ b2`.
///
/// Errors when the premises do not hold; otherwise returns whether the
/// conclusion was observed.
pub fn check_bisection_lattice(a: &BitVector, b1: &BitVector, b2: &BitVector) -> Result<bool> {
    if a.n() != b1.n() || a.n() != b2.n() {
        return Err(Error::SizeMismatch {
            expected: a.n(),
            found: if a.n() != b1.n() { b1.n() } else { b2.n() },
        });
    }
    let (a, x, y) = (a.bits(), b1.bits(), b2.bits());
    if !(mask_bisects(a, x) && mask_bisects(a, y) && mask_bisects(a, x ^ y)) {
        return Err(Error::Precondition(
            "A must bisect B1, B2 and their symmetric difference".into(),
        ));
    }
    Ok(mask_bisects(a, x & y))
}

/// Disjoint atoms generating `B`, the unused coordinates, and the size of
/// the largest compatible `A` times `|B|`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecompositionReport {
    pub n: usize,
    pub atoms: Vec<BitVector>,
    pub half_sizes: Vec<usize>,
    pub zero_part: BitVector,
    pub n0: usize,
    pub dim: usize,
    pub product_audit: u128,
}

impl DecompositionReport {
    /// Product equals `2^n`, i.e. every atom is a couple.
    pub fn is_maximal(&self) -> bool {
        self.product_audit == 1u128 << self.n
    }
}

#[derive(Serialize)]
struct ReportJson {
    atoms: Vec<Vec<usize>>,
    half_sizes: Vec<usize>,
    zero_part: Vec<usize>,
    n0: usize,
    dim: usize,
    product_audit: u128,
}

impl Serialize for DecompositionReport {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ReportJson {
            atoms: self.atoms.iter().map(|a| a.elements()).collect(),
            half_sizes: self.half_sizes.clone(),
            zero_part: self.zero_part.elements(),
            n0: self.n0,
            dim: self.dim,
            product_audit: self.product_audit,
        }
        .serialize(s)
    }
}

/// Runs the four structural checks in order and reports the first failure.
pub fn check_structure(b: &SetFamily) -> Result<()> {
    if !check_linearity(b) {
        return Err(Error::Structure(Violation::Linearity));
    }
    match check_parity_closure(b, Fraction::HALF) {
        Ok(true) => {}
        Ok(false) | Err(Error::InvalidFamily(_)) => {
            return Err(Error::Structure(Violation::Parity))
        }
        Err(e) => return Err(e),
    }
    if !check_self_orthogonal_family(b) {
        return Err(Error::Structure(Violation::SelfOrthogonal));
    }
    if !check_intersection_closure(b) {
        return Err(Error::Structure(Violation::IntersectionClosure));
    }
    Ok(())
}

/// Splits a linear, self-orthogonal, intersection-closed family into atoms.
///
/// Repeatedly takes the lowest element that is used by some member but not
/// yet covered, and intersects every member containing it.
pub fn extract_atoms(b: &SetFamily) -> Result<DecompositionReport> {
    if b.is_empty() {
        return Err(Error::InvalidFamily("family is empty".into()));
    }
    check_structure(b)?;
    let n = b.n();
    let support = b.support();
    let zero_part = low_mask(n) & !support;

    let mut atoms: Vec<u64> = Vec::new();
    let mut covered = 0u64;
    loop {
        let open = support & !covered;
        if open == 0 {
            break;
        }
        let pivot = open & open.wrapping_neg();
        let atom = b
            .masks()
            .iter()
            .filter(|&&m| m & pivot != 0)
            .fold(u64::MAX, |acc, &m| acc & m);
        if atom & covered != 0 {
            return Err(Error::Inconsistent(format!(
                "atom through element {} overlaps an earlier atom",
                pivot.trailing_zeros() + 1
            )));
        }
        atoms.push(atom);
        covered |= atom;
    }

    for &m in b.masks() {
        let union = atoms
            .iter()
            .filter(|&&atom| atom & m != 0)
            .fold(0, |acc, &atom| acc | atom);
        if union != m {
            return Err(Error::Inconsistent(format!(
                "member {:?} is not a union of atoms",
                mask_elements(m)
            )));
        }
    }
    let dim = atoms.len();
    if b.len() != 1 << dim {
        return Err(Error::Inconsistent(format!(
            "{} members but {dim} atoms",
            b.len()
        )));
    }

    let half_sizes: Vec<usize> = atoms
        .iter()
        .map(|a| {
            let w = a.count_ones() as usize;
            if w == 0 || w % 2 == 1 {
                Err(Error::Inconsistent(format!("atom of odd size {w}")))
            } else {
                Ok(w / 2)
            }
        })
        .collect::<Result<_>>()?;
    let n0 = zero_part.count_ones() as usize;
    let product_audit = half_sizes
        .iter()
        .fold(1u128 << n0, |acc, &i| acc * binomial(2 * i as u64, i as u64))
        << dim;

    let vec = |m| BitVector::new(n, m).expect("atoms lie in [n]");
    Ok(DecompositionReport {
        n,
        atoms: atoms.into_iter().map(vec).collect(),
        half_sizes,
        zero_part: vec(zero_part),
        n0,
        dim,
        product_audit,
    })
}

/// Every member of `a` bisects every atom; the zero part is unconstrained.
pub fn check_basis_bisection(a: &SetFamily, report: &DecompositionReport) -> bool {
    a.masks().iter().all(|&x| {
        report
            .atoms
            .iter()
            .all(|atom| mask_bisects(x, atom.bits()))
    })
}
