//! Elements of the finite vector-lattice model and their coordinatewise
//! lattice structure.

use alloc::collections::BTreeSet;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::rat::{self, Rat};
use crate::space::Space;

/// An element of `ℚ^S`: one exact rational per point of the space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Element {
    space: Space,
    values: Vec<Rat>,
}

/// Unary/binary coordinatewise lattice operations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LatticeKind {
    Join,
    Meet,
    Abs,
    Pos,
    Neg,
}

impl Element {
    pub fn new(space: &Space, values: Vec<Rat>) -> Result<Self> {
        if values.len() != space.len() {
            return Err(Error::ValueCountMismatch {
                space: space.name().to_string(),
                expected: space.len(),
                got: values.len(),
            });
        }
        Ok(Element {
            space: space.clone(),
            values,
        })
    }

    pub fn zero(space: &Space) -> Self {
        Element {
            space: space.clone(),
            values: (0..space.len()).map(|_| Rat::zero()).collect(),
        }
    }

    /// The constant element `r·1`.
    pub fn constant(space: &Space, r: Rat) -> Self {
        Element {
            space: space.clone(),
            values: (0..space.len()).map(|_| r.clone()).collect(),
        }
    }

    /// `r` at one point, zero elsewhere.
    pub fn unit(space: &Space, point: usize, r: Rat) -> Result<Self> {
        space.check_index(point)?;
        let mut e = Element::zero(space);
        e.values[point] = r;
        Ok(e)
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn value(&self, point: usize) -> &Rat {
        &self.values[point]
    }

    pub fn values(&self) -> &[Rat] {
        &self.values
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| v.is_zero())
    }

    /// Point indices where the element is nonzero.
    pub fn support(&self) -> BTreeSet<usize> {
        self.values
            .iter()
            .enumerate()
            .filter(|(_, v)| !v.is_zero())
            .map(|(i, _)| i)
            .collect()
    }

    fn check_space(&self, other: &Element) -> Result<()> {
        if self.space == other.space {
            Ok(())
        } else {
            Err(self.space.mismatch(&other.space))
        }
    }

    fn zip(&self, other: &Element, f: impl Fn(&Rat, &Rat) -> Rat) -> Result<Element> {
        self.check_space(other)?;
        Ok(Element {
            space: self.space.clone(),
            values: self
                .values
                .iter()
                .zip(other.values.iter())
                .map(|(a, b)| f(a, b))
                .collect(),
        })
    }

    fn map(&self, f: impl Fn(&Rat) -> Rat) -> Element {
        Element {
            space: self.space.clone(),
            values: self.values.iter().map(f).collect(),
        }
    }

    /// Coordinatewise supremum `x ∨ y`.
    pub fn join(&self, other: &Element) -> Result<Element> {
        self.zip(other, rat::max)
    }

    /// Coordinatewise infimum `x ∧ y`.
    pub fn meet(&self, other: &Element) -> Result<Element> {
        self.zip(other, rat::min)
    }

    /// Modulus `|x|`.
    pub fn abs(&self) -> Element {
        self.map(|v| v.abs())
    }

    /// Positive part `x⁺ = x ∨ 0`.
    pub fn pos(&self) -> Element {
        self.map(rat::pos)
    }

    /// Negative part `x⁻ = (−x) ∨ 0`.
    pub fn neg_part(&self) -> Element {
        self.map(rat::neg)
    }

    pub fn checked_add(&self, other: &Element) -> Result<Element> {
        self.zip(other, |a, b| a + b)
    }

    pub fn checked_sub(&self, other: &Element) -> Result<Element> {
        self.zip(other, |a, b| a - b)
    }

    pub fn scale(&self, c: &Rat) -> Element {
        self.map(|v| v * c)
    }

    /// `x ⊥ y`: `|x| ∧ |y| = 0`, i.e. disjoint supports.
    pub fn is_disjoint(&self, other: &Element) -> Result<bool> {
        self.check_space(other)?;
        Ok(self
            .values
            .iter()
            .zip(other.values.iter())
            .all(|(a, b)| a.is_zero() || b.is_zero()))
    }

    /// Coordinatewise order `x ≤ y`.
    pub fn le(&self, other: &Element) -> Result<bool> {
        self.check_space(other)?;
        Ok(self
            .values
            .iter()
            .zip(other.values.iter())
            .all(|(a, b)| a <= b))
    }

    /// Restriction of `x` to a carrier set: values kept on the carrier,
    /// zero elsewhere.
    pub fn restrict(&self, carrier: &BTreeSet<usize>) -> Result<Element> {
        for &i in carrier {
            self.space.check_index(i)?;
        }
        Ok(Element {
            space: self.space.clone(),
            values: self
                .values
                .iter()
                .enumerate()
                .map(|(i, v)| {
                    if carrier.contains(&i) {
                        v.clone()
                    } else {
                        Rat::zero()
                    }
                })
                .collect(),
        })
    }
}

/// Dispatch form of the coordinatewise lattice operations; `y` is required
/// exactly for the binary kinds.
pub fn lattice_op(kind: LatticeKind, x: &Element, y: Option<&Element>) -> Result<Element> {
    let arity_err = |expected: usize, got: usize| Error::ArityMismatch {
        op: String::from(match kind {
            LatticeKind::Join => "join",
            LatticeKind::Meet => "meet",
            LatticeKind::Abs => "abs",
            LatticeKind::Pos => "pos",
            LatticeKind::Neg => "neg",
        }),
        expected,
        got,
    };
    match kind {
        LatticeKind::Join | LatticeKind::Meet => {
            let y = y.ok_or_else(|| arity_err(2, 1))?;
            match kind {
                LatticeKind::Join => x.join(y),
                _ => x.meet(y),
            }
        }
        _ => {
            if y.is_some() {
                return Err(arity_err(1, 2));
            }
            Ok(match kind {
                LatticeKind::Abs => x.abs(),
                LatticeKind::Pos => x.pos(),
                _ => x.neg_part(),
            })
        }
    }
}

impl core::ops::Add for &Element {
    type Output = Element;
    /// Panics on space mismatch; use [`Element::checked_add`] for untrusted data.
    fn add(self, rhs: &Element) -> Element {
        self.checked_add(rhs).expect("space mismatch in +")
    }
}

impl core::ops::Sub for &Element {
    type Output = Element;
    /// Panics on space mismatch; use [`Element::checked_sub`] for untrusted data.
    fn sub(self, rhs: &Element) -> Element {
        self.checked_sub(rhs).expect("space mismatch in -")
    }
}

impl core::ops::Neg for &Element {
    type Output = Element;
    fn neg(self) -> Element {
        self.map(|v| -v.clone())
    }
}

impl core::fmt::Display for Element {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "[")?;
        for (i, v) in self.values.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{rat_int, zero};
    use alloc::vec;

    fn e2(a: i64, b: i64) -> (Space, Element) {
        let s = Space::unit("E", 2).unwrap();
        let x = Element::new(&s, vec![rat_int(a), rat_int(b)]).unwrap();
        (s, x)
    }

    #[test]
    fn coordinatewise_ops() {
        let (s, x) = e2(1, -2);
        let y = Element::new(&s, vec![rat_int(0), rat_int(3)]).unwrap();
        assert_eq!(x.join(&y).unwrap().values(), &[rat_int(1), rat_int(3)]);
        let (_, z) = e2(-2, 3);
        assert_eq!(z.abs().values(), &[rat_int(2), rat_int(3)]);
        assert_eq!(z.pos().values(), &[zero(), rat_int(3)]);
        assert_eq!(z.neg_part().values(), &[rat_int(2), zero()]);
        // x = x⁺ − x⁻ and |x| = x⁺ + x⁻
        assert_eq!(&z.pos() - &z.neg_part(), z);
        assert_eq!(&z.pos() + &z.neg_part(), z.abs());
    }

    #[test]
    fn disjointness() {
        let (s, x) = e2(1, 0);
        let y = Element::new(&s, vec![zero(), rat_int(2)]).unwrap();
        assert!(x.is_disjoint(&y).unwrap());
        let w = Element::new(&s, vec![rat_int(1), rat_int(1)]).unwrap();
        assert!(!w.is_disjoint(&y).unwrap());
        let z = Element::zero(&s);
        assert!(z.is_disjoint(&w).unwrap());
        assert!(z.is_disjoint(&z).unwrap());
    }

    #[test]
    fn space_mismatch_is_an_error() {
        let (_, x) = e2(1, 0);
        let other = Space::unit("F", 2).unwrap();
        let y = Element::zero(&other);
        assert!(matches!(
            x.join(&y),
            Err(Error::SpaceMismatch { .. })
        ));
        assert!(x.is_disjoint(&y).is_err());
    }

    #[test]
    fn lattice_op_arity() {
        let (_, x) = e2(1, 0);
        assert!(lattice_op(LatticeKind::Join, &x, None).is_err());
        assert!(lattice_op(LatticeKind::Abs, &x, Some(&x)).is_err());
        assert_eq!(
            lattice_op(LatticeKind::Abs, &x, None).unwrap(),
            x.abs()
        );
    }

    #[test]
    fn restriction_and_support() {
        let (_, x) = e2(2, -3);
        let supp = x.support();
        assert_eq!(supp.len(), 2);
        let only0: BTreeSet<usize> = [0].into_iter().collect();
        let r = x.restrict(&only0).unwrap();
        assert_eq!(r.values(), &[rat_int(2), zero()]);
        assert!(r.is_disjoint(&(&x - &r)).unwrap());
    }
}
