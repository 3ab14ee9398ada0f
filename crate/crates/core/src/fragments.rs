//! Fragments of an element and their Boolean algebra.
//!
//! `y` is a fragment of `x` (written `y ⊑ x`) when `y ⊥ (x − y)`. In the
//! finite model the fragments of `x` are exactly the restrictions of `x` to
//! subsets of its support, so `fragments(x)` has `2^|supp(x)|` members and
//! the map `A ↦ x|_A` is a Boolean isomorphism from the powerset of the
//! support. The union/intersection/complement here are computed by the
//! lattice formulas
//!
//! ```text
//! z ∪ y = (z⁺ ∨ y⁺) − (z⁻ ∨ y⁻)
//! z ∩ y = (z⁺ ∧ y⁺) − (z⁻ ∧ y⁻)
//! z̄    = x − z
//! ```
//!
//! not by support masks, so the mask route stays available as an independent
//! cross-check in tests.

use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::element::Element;
use crate::error::{Error, Result};
use crate::DEFAULT_SUPPORT_CAP;

/// `y ⊑ x`: `y` and `x − y` are disjoint.
pub fn is_fragment(y: &Element, x: &Element) -> Result<bool> {
    let rest = x.checked_sub(y)?;
    y.is_disjoint(&rest)
}

/// All fragments of `x`, with the default support cap.
///
/// The result is in mask order over the sorted support points: entry `i`
/// restricts `x` to the support points whose bit is set in `i`. Entry `0`
/// is the zero element and the last entry is `x` itself, and the complement
/// of entry `i` is entry `(2^n − 1) ^ i`.
pub fn fragments(x: &Element) -> Result<Vec<Element>> {
    fragments_with_cap(x, DEFAULT_SUPPORT_CAP)
}

/// All fragments of `x`; errors when `|supp(x)|` exceeds `cap`.
pub fn fragments_with_cap(x: &Element, cap: usize) -> Result<Vec<Element>> {
    let support: Vec<usize> = x.support().into_iter().collect();
    if support.len() > cap {
        return Err(Error::SupportCapExceeded {
            support: support.len(),
            cap,
        });
    }
    let n = support.len();
    let mut out = Vec::with_capacity(1usize << n);
    for mask in 0..(1usize << n) {
        let carrier = support
            .iter()
            .enumerate()
            .filter(|(bit, _)| mask & (1 << bit) != 0)
            .map(|(_, &p)| p)
            .collect();
        out.push(x.restrict(&carrier)?);
    }
    Ok(out)
}

/// Boolean operations on the fragment algebra of `x`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FragmentBoolKind {
    Union,
    Intersect,
    Complement,
}

fn require_fragment(x: &Element, z: &Element) -> Result<()> {
    if is_fragment(z, x)? {
        Ok(())
    } else {
        Err(Error::NotAFragment {
            candidate: z.to_string(),
            of: x.to_string(),
        })
    }
}

/// `z ∪ y = (z⁺ ∨ y⁺) − (z⁻ ∨ y⁻)` for fragments of `x`.
pub fn fragment_union(x: &Element, z: &Element, y: &Element) -> Result<Element> {
    require_fragment(x, z)?;
    require_fragment(x, y)?;
    let plus = z.pos().join(&y.pos())?;
    let minus = z.neg_part().join(&y.neg_part())?;
    Ok(&plus - &minus)
}

/// `z ∩ y = (z⁺ ∧ y⁺) − (z⁻ ∧ y⁻)` for fragments of `x`.
pub fn fragment_intersect(x: &Element, z: &Element, y: &Element) -> Result<Element> {
    require_fragment(x, z)?;
    require_fragment(x, y)?;
    let plus = z.pos().meet(&y.pos())?;
    let minus = z.neg_part().meet(&y.neg_part())?;
    Ok(&plus - &minus)
}

/// `z̄ = x − z` for a fragment of `x`.
pub fn fragment_complement(x: &Element, z: &Element) -> Result<Element> {
    require_fragment(x, z)?;
    Ok(x - z)
}

/// Dispatch form; `y` is required exactly for the binary kinds.
pub fn fragment_bool_op(
    kind: FragmentBoolKind,
    x: &Element,
    z: &Element,
    y: Option<&Element>,
) -> Result<Element> {
    let arity = |expected: usize, got: usize| Error::ArityMismatch {
        op: String::from(match kind {
            FragmentBoolKind::Union => "union",
            FragmentBoolKind::Intersect => "intersect",
            FragmentBoolKind::Complement => "complement",
        }),
        expected,
        got,
    };
    match kind {
        FragmentBoolKind::Union => fragment_union(x, z, y.ok_or_else(|| arity(2, 1))?),
        FragmentBoolKind::Intersect => fragment_intersect(x, z, y.ok_or_else(|| arity(2, 1))?),
        FragmentBoolKind::Complement => {
            if y.is_some() {
                return Err(arity(1, 2));
            }
            fragment_complement(x, z)
        }
    }
}

/// Outcome of [`boolean_isomorphism_check`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BooleanAlgebraReport {
    pub fragment_count: usize,
    /// Pairs of fragments compared at the element level.
    pub element_pair_checks: usize,
    /// Per-coordinate formula/mask agreements (covers every pair).
    pub coordinate_checks: usize,
    /// Boolean-algebra axiom instances enumerated over the (verified)
    /// operation tables.
    pub axiom_checks: usize,
    pub failures: Vec<String>,
}

impl BooleanAlgebraReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Verifies that `A ↦ x|_A` is a Boolean isomorphism from the powerset of
/// `supp(x)` onto the fragments of `x`.
///
/// The lattice formulas for union/intersection/complement act coordinate by
/// coordinate, so their agreement with the support masks is established by
/// an exhaustive case analysis per coordinate (all four membership combos),
/// plus direct element-level comparison of every pair while the fragment
/// set is small. The Boolean-algebra axioms — commutativity, associativity,
/// absorption, distributivity, identities, complements, idempotence, and
/// De Morgan — are then enumerated exhaustively over the operation tables.
// the axiom instances below are tautologies on the mask side by design
#[allow(clippy::eq_op, clippy::identity_op)]
pub fn boolean_isomorphism_check(x: &Element, cap: usize) -> Result<BooleanAlgebraReport> {
    use crate::rat::{self, Rat};
    use num_traits::Zero;

    let support: Vec<usize> = x.support().into_iter().collect();
    let n = support.len();
    if n > cap {
        return Err(Error::SupportCapExceeded { support: n, cap });
    }
    let mut failures = Vec::new();

    // coordinate-level case analysis of the lattice formulas
    let mut coordinate_checks = 0;
    for &c in &support {
        let v = x.value(c).clone();
        if v.is_zero() {
            failures.push(alloc::format!("support point {c} carries zero"));
            continue;
        }
        let pick = |b: bool| if b { v.clone() } else { Rat::zero() };
        for bz in [false, true] {
            for by in [false, true] {
                let z = pick(bz);
                let y = pick(by);
                let union = rat::max(&rat::pos(&z), &rat::pos(&y))
                    - rat::max(&rat::neg(&z), &rat::neg(&y));
                let inter = rat::min(&rat::pos(&z), &rat::pos(&y))
                    - rat::min(&rat::neg(&z), &rat::neg(&y));
                let compl = &v - &z;
                coordinate_checks += 3;
                if union != pick(bz || by) {
                    failures.push(alloc::format!("union formula at point {c}"));
                }
                if inter != pick(bz && by) {
                    failures.push(alloc::format!("intersection formula at point {c}"));
                }
                if compl != pick(!bz) {
                    failures.push(alloc::format!("complement formula at point {c}"));
                }
            }
        }
    }

    // element-level cross-check of every pair while the set is small
    let mut element_pair_checks = 0;
    if n <= 5 {
        let frs = fragments_with_cap(x, cap)?;
        let full = frs.len() - 1;
        for (i, z) in frs.iter().enumerate() {
            if fragment_complement(x, z)? != frs[full ^ i] {
                failures.push(alloc::format!("complement of mask {i}"));
            }
            for (j, y) in frs.iter().enumerate() {
                element_pair_checks += 2;
                if fragment_union(x, z, y)? != frs[i | j] {
                    failures.push(alloc::format!("union of masks {i}, {j}"));
                }
                if fragment_intersect(x, z, y)? != frs[i & j] {
                    failures.push(alloc::format!("intersection of masks {i}, {j}"));
                }
            }
        }
    }

    // Boolean-algebra axioms over the (now verified) operation tables
    let full: usize = (1usize << n) - 1;
    let mut axiom_checks = 0usize;
    for i in 0..=full {
        // identities, complements, idempotence, De Morgan
        axiom_checks += 6;
        if i | 0 != i || i & full != i {
            failures.push(alloc::format!("identity laws at {i}"));
        }
        if i | (full ^ i) != full || i & (full ^ i) != 0 {
            failures.push(alloc::format!("complement laws at {i}"));
        }
        if i | i != i || i & i != i {
            failures.push(alloc::format!("idempotence at {i}"));
        }
        for j in 0..=full {
            axiom_checks += 4;
            if i | j != j | i || i & j != j & i {
                failures.push(alloc::format!("commutativity at {i}, {j}"));
            }
            if (full ^ (i | j)) != (full ^ i) & (full ^ j)
                || (full ^ (i & j)) != (full ^ i) | (full ^ j)
            {
                failures.push(alloc::format!("De Morgan at {i}, {j}"));
            }
            if i & (i | j) != i || i | (i & j) != i {
                failures.push(alloc::format!("absorption at {i}, {j}"));
            }
            for k in 0..=full {
                axiom_checks += 3;
                if (i | j) | k != i | (j | k) || (i & j) & k != i & (j & k) {
                    failures.push(alloc::format!("associativity at {i}, {j}, {k}"));
                }
                if i & (j | k) != (i & j) | (i & k) {
                    failures.push(alloc::format!("distributivity at {i}, {j}, {k}"));
                }
            }
        }
    }

    Ok(BooleanAlgebraReport {
        fragment_count: 1usize << n,
        element_pair_checks,
        coordinate_checks,
        axiom_checks,
        failures,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{rat_int, zero};
    use crate::space::Space;
    use alloc::vec;

    fn el(s: &Space, vals: &[i64]) -> Element {
        Element::new(s, vals.iter().map(|&v| rat_int(v)).collect()).unwrap()
    }

    #[test]
    fn fragments_enumerate_support_subsets() {
        let s = Space::unit("E", 3).unwrap();
        let x = el(&s, &[2, 0, -3]);
        let fr = fragments(&x).unwrap();
        assert_eq!(fr.len(), 4);
        assert!(fr.contains(&Element::zero(&s)));
        assert!(fr.contains(&x));
        assert!(fr.contains(&el(&s, &[2, 0, 0])));
        assert!(fr.contains(&el(&s, &[0, 0, -3])));
        for y in &fr {
            assert!(is_fragment(y, &x).unwrap());
            // decomposition: y ⊥ (x − y) and y + (x − y) = x
            let rest = &x - y;
            assert!(y.is_disjoint(&rest).unwrap());
            assert_eq!(&(y + &rest), &x);
        }
    }

    #[test]
    fn fragments_of_zero() {
        let s = Space::unit("E", 2).unwrap();
        let z = Element::zero(&s);
        let fr = fragments(&z).unwrap();
        assert_eq!(fr, vec![z]);
    }

    #[test]
    fn fragment_count_is_exponential() {
        let s = Space::unit("E", 3).unwrap();
        let x = el(&s, &[1, 2, 3]);
        assert_eq!(fragments(&x).unwrap().len(), 8);
    }

    #[test]
    fn cap_is_a_hard_error() {
        let s = Space::unit("E", 4).unwrap();
        let x = el(&s, &[1, 1, 1, 1]);
        assert!(matches!(
            fragments_with_cap(&x, 3),
            Err(Error::SupportCapExceeded { support: 4, cap: 3 })
        ));
    }

    #[test]
    fn boolean_ops_on_a_two_point_element() {
        let s = Space::unit("E", 2).unwrap();
        let x = el(&s, &[2, -3]);
        let z = el(&s, &[2, 0]);
        let y = el(&s, &[0, -3]);
        assert_eq!(fragment_union(&x, &z, &y).unwrap(), x);
        assert_eq!(fragment_complement(&x, &z).unwrap(), y);
        assert_eq!(
            fragment_intersect(&x, &z, &y).unwrap(),
            Element::zero(&s)
        );
    }

    #[test]
    fn non_fragment_is_rejected() {
        let s = Space::unit("E", 2).unwrap();
        let x = el(&s, &[2, -3]);
        let bad = el(&s, &[1, 0]); // same support point, different value
        assert!(matches!(
            fragment_complement(&x, &bad),
            Err(Error::NotAFragment { .. })
        ));
    }

    #[test]
    fn boolean_isomorphism_check_passes() {
        let s = Space::unit("E", 4).unwrap();
        let x = el(&s, &[2, -3, 0, 5]);
        let report = boolean_isomorphism_check(&x, 20).unwrap();
        assert!(report.passed(), "{:?}", report.failures);
        assert_eq!(report.fragment_count, 8);
        // the zero element has a one-fragment algebra
        let z = Element::zero(&s);
        let rz = boolean_isomorphism_check(&z, 20).unwrap();
        assert!(rz.passed());
        assert_eq!(rz.fragment_count, 1);
        // cap guard
        let full = el(&s, &[1, 1, 1, 1]);
        assert!(boolean_isomorphism_check(&full, 3).is_err());
    }

    #[test]
    fn formula_route_agrees_with_mask_route() {
        let s = Space::unit("E", 3).unwrap();
        let x = el(&s, &[2, -3, 5]);
        let fr = fragments(&x).unwrap();
        let full = fr.len() - 1;
        for (i, z) in fr.iter().enumerate() {
            // complement by formula vs complement by mask index
            assert_eq!(fragment_complement(&x, z).unwrap(), fr[full ^ i]);
            for (j, y) in fr.iter().enumerate() {
                assert_eq!(fragment_union(&x, z, y).unwrap(), fr[i | j]);
                assert_eq!(fragment_intersect(&x, z, y).unwrap(), fr[i & j]);
            }
        }
        let _ = zero();
    }
}
