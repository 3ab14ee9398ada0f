//! Orthogonally additive operators in kernel normal form, and the
//! brute-force lattice calculus over disjoint decompositions.
//!
//! A [`KernelOperator`] stores one expression `g[s][t](r)` per
//! (source point, target point) pair and acts by
//! `(Tx)_t = Σ_s g[s][t](x_s)`. Every entry must vanish at zero, which makes
//! `T(0) = 0` and orthogonal additivity structural: disjoint elements feed
//! disjoint coordinates into the sum.
//!
//! [`brute_lattice_op`] computes operator joins, meets, positive/negative
//! parts, and the modulus by exhaustive enumeration of all `2^|supp(x)|`
//! disjoint decompositions `x = y ⊔ z`:
//!
//! ```text
//! (T ∨ S)(x) = sup { Ty + Sz : x = y ⊔ z }
//! (T ∧ S)(x) = inf { Ty + Sz : x = y ⊔ z }
//! (T)⁺(x)    = sup { Ty : y ⊑ x }
//! (T)⁻(x)    = −inf { Ty : y ⊑ x }
//! |T|(x)     = (T ∨ (−T))(x)
//! ```
//!
//! This enumeration is the ground-truth oracle against which the pointwise
//! formulas for atomic operators are verified.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use num_traits::{Signed, Zero};

use crate::element::Element;
use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::fragments::fragments_with_cap;
use crate::rat::{self, Rat};
use crate::sample::{SampleGrid, SplitMix64};
use crate::space::Space;
use crate::DEFAULT_SUPPORT_CAP;

/// Number of grid steps used by the order-bound witness search.
pub const DEFAULT_WITNESS_DIVISIONS: usize = 1000;

/// An orthogonally additive operator `T : ℚ^S → ℚ^P` in kernel form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KernelOperator {
    source: Space,
    target: Space,
    kernel: BTreeMap<(usize, usize), Expr>,
}

impl KernelOperator {
    /// Builds an operator from kernel entries keyed by
    /// (source point, target point).
    ///
    /// Every entry must evaluate to `0` at `r = 0`; this normalization makes
    /// the operator vanish at zero and be orthogonally additive by
    /// construction.
    pub fn new(
        source: &Space,
        target: &Space,
        kernel: BTreeMap<(usize, usize), Expr>,
    ) -> Result<Self> {
        let zero = Rat::zero();
        for (&(s, t), e) in &kernel {
            source.check_index(s)?;
            target.check_index(t)?;
            let at_zero = e.eval(&zero)?;
            if !at_zero.is_zero() {
                return Err(Error::KernelNotNormalized {
                    source_point: source.point_name(s).to_string(),
                    target_point: target.point_name(t).to_string(),
                    value: alloc::format!("{at_zero}"),
                });
            }
        }
        Ok(KernelOperator {
            source: source.clone(),
            target: target.clone(),
            kernel,
        })
    }

    /// Endomorphism with kernel `exprs[i]` on the diagonal and zero elsewhere.
    pub fn diagonal(space: &Space, exprs: Vec<Expr>) -> Result<Self> {
        let kernel = exprs
            .into_iter()
            .enumerate()
            .map(|(i, e)| ((i, i), e))
            .collect();
        KernelOperator::new(space, space, kernel)
    }

    pub fn zero(source: &Space, target: &Space) -> Self {
        KernelOperator {
            source: source.clone(),
            target: target.clone(),
            kernel: BTreeMap::new(),
        }
    }

    pub fn source(&self) -> &Space {
        &self.source
    }

    pub fn target(&self) -> &Space {
        &self.target
    }

    pub fn entry(&self, source_point: usize, target_point: usize) -> Option<&Expr> {
        self.kernel.get(&(source_point, target_point))
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &Expr)> {
        self.kernel.iter().map(|(&(s, t), e)| (s, t, e))
    }

    /// `(Tx)_t = Σ_s g[s][t](x_s)`, exact.
    pub fn apply(&self, x: &Element) -> Result<Element> {
        if *x.space() != self.source {
            return Err(self.source.mismatch(x.space()));
        }
        let mut values: Vec<Rat> = (0..self.target.len()).map(|_| Rat::zero()).collect();
        for (&(s, t), e) in &self.kernel {
            values[t] += e.eval(x.value(s))?;
        }
        Element::new(&self.target, values)
    }

    /// Entrywise sum `T + S` (kernel addition).
    pub fn add(&self, other: &KernelOperator) -> Result<KernelOperator> {
        if self.source != other.source {
            return Err(self.source.mismatch(&other.source));
        }
        if self.target != other.target {
            return Err(self.target.mismatch(&other.target));
        }
        let mut kernel = self.kernel.clone();
        for (&key, e) in &other.kernel {
            match kernel.remove(&key) {
                Some(existing) => {
                    kernel.insert(key, Expr::add(existing, e.clone()));
                }
                None => {
                    kernel.insert(key, e.clone());
                }
            }
        }
        Ok(KernelOperator {
            source: self.source.clone(),
            target: self.target.clone(),
            kernel,
        })
    }

    /// Entrywise negation `−T`.
    pub fn negate(&self) -> KernelOperator {
        KernelOperator {
            source: self.source.clone(),
            target: self.target.clone(),
            kernel: self
                .kernel
                .iter()
                .map(|(&k, e)| (k, Expr::neg(e.clone())))
                .collect(),
        }
    }

    /// Entrywise scaling `c·T`.
    pub fn scale(&self, c: &Rat) -> KernelOperator {
        KernelOperator {
            source: self.source.clone(),
            target: self.target.clone(),
            kernel: self
                .kernel
                .iter()
                .map(|(&k, e)| (k, Expr::mul(Expr::lit(c.clone()), e.clone())))
                .collect(),
        }
    }
}

/// Operator-level lattice operations evaluated at an element.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OpLatticeKind {
    Join,
    Meet,
    Pos,
    Neg,
    Modulus,
}

impl OpLatticeKind {
    pub fn name(&self) -> &'static str {
        match self {
            OpLatticeKind::Join => "join",
            OpLatticeKind::Meet => "meet",
            OpLatticeKind::Pos => "pos",
            OpLatticeKind::Neg => "neg",
            OpLatticeKind::Modulus => "mod",
        }
    }
}

fn check_operand_arity(
    kind: OpLatticeKind,
    s: Option<&KernelOperator>,
) -> Result<()> {
    let binary = matches!(kind, OpLatticeKind::Join | OpLatticeKind::Meet);
    match (binary, s.is_some()) {
        (true, false) => Err(Error::ArityMismatch {
            op: String::from(kind.name()),
            expected: 2,
            got: 1,
        }),
        (false, true) => Err(Error::ArityMismatch {
            op: String::from(kind.name()),
            expected: 1,
            got: 2,
        }),
        _ => Ok(()),
    }
}

/// Evaluates an operator lattice operation at `x` by exhaustive enumeration
/// of disjoint decompositions, with the default support cap.
pub fn brute_lattice_op(
    kind: OpLatticeKind,
    t: &KernelOperator,
    s: Option<&KernelOperator>,
    x: &Element,
) -> Result<Element> {
    brute_lattice_op_with_cap(kind, t, s, x, DEFAULT_SUPPORT_CAP)
}

/// [`brute_lattice_op`] with an explicit support cap.
pub fn brute_lattice_op_with_cap(
    kind: OpLatticeKind,
    t: &KernelOperator,
    s: Option<&KernelOperator>,
    x: &Element,
    cap: usize,
) -> Result<Element> {
    check_operand_arity(kind, s)?;
    if let Some(s) = s {
        if s.source != t.source {
            return Err(t.source.mismatch(&s.source));
        }
        if s.target != t.target {
            return Err(t.target.mismatch(&s.target));
        }
    }
    let frs = fragments_with_cap(x, cap)?;
    let full = frs.len() - 1;
    let t_vals: Vec<Element> = frs.iter().map(|y| t.apply(y)).collect::<Result<_>>()?;

    let fold = |mut acc: Element, items: &mut dyn Iterator<Item = Element>, join: bool| {
        for item in items {
            acc = if join {
                acc.join(&item).expect("same target space")
            } else {
                acc.meet(&item).expect("same target space")
            };
        }
        acc
    };

    match kind {
        OpLatticeKind::Join | OpLatticeKind::Meet => {
            let s_vals: Vec<Element> = frs
                .iter()
                .map(|y| s.unwrap().apply(y))
                .collect::<Result<_>>()?;
            // fragment at mask i pairs with its complement at mask full ^ i
            let mut candidates = (0..frs.len()).map(|i| &t_vals[i] + &s_vals[full ^ i]);
            let first = candidates.next().expect("at least the trivial split");
            Ok(fold(
                first,
                &mut candidates,
                matches!(kind, OpLatticeKind::Join),
            ))
        }
        OpLatticeKind::Pos => {
            let mut vals = t_vals.iter().cloned();
            let first = vals.next().expect("fragment list is nonempty");
            Ok(fold(first, &mut vals, true))
        }
        OpLatticeKind::Neg => {
            let mut vals = t_vals.iter().cloned();
            let first = vals.next().expect("fragment list is nonempty");
            Ok(-&fold(first, &mut vals, false))
        }
        OpLatticeKind::Modulus => {
            // |T|(x) = (T ∨ (−T))(x) = sup { Ty − Tz : x = y ⊔ z }
            let mut candidates = (0..frs.len()).map(|i| &t_vals[i] - &t_vals[full ^ i]);
            let first = candidates.next().expect("at least the trivial split");
            Ok(fold(first, &mut candidates, true))
        }
    }
}

/// A refuted orthogonal-additivity sample.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OaFailure {
    pub y: Element,
    pub z: Element,
    /// `T(y + z)`
    pub left: Element,
    /// `T(y) + T(z)`
    pub right: Element,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OaCheckReport {
    pub samples: usize,
    pub failures: Vec<OaFailure>,
}

impl OaCheckReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Tests `T(y + z) = T(y) + T(z)` on random disjoint pairs for a black-box
/// map. The pair `(0, 0)` is always included, so any map with `T(0) ≠ 0`
/// fails immediately. Kernel-form operators pass structurally.
pub fn check_oa(
    source: &Space,
    map: impl Fn(&Element) -> Result<Element>,
    samples: usize,
    rng: &mut SplitMix64,
) -> Result<OaCheckReport> {
    let mut failures = Vec::new();
    let mut tested = 0;
    let zero = Element::zero(source);
    let mut pairs = alloc::vec![(zero.clone(), zero)];
    for _ in 0..samples {
        pairs.push(crate::sample::random_disjoint_pair(rng, source));
    }
    for (y, z) in pairs {
        let sum = y.checked_add(&z)?;
        let left = map(&sum)?;
        let right = map(&y)?.checked_add(&map(&z)?)?;
        tested += 1;
        if left != right {
            failures.push(OaFailure { y, z, left, right });
        }
    }
    Ok(OaCheckReport {
        samples: tested,
        failures,
    })
}

/// Searches a rational grid inside `[−bound_box, bound_box]` for an element
/// whose image reaches the bound `M` in some coordinate, i.e.
/// `|Tx|_t ≥ M`. Returns the first such `(x, Tx)` in scan order
/// (per source point, step `k/divisions` ascending for `k = 1..divisions`,
/// positive sign first, then uniform multiples of the box), or `None`.
///
/// The scan stays strictly inside the box, so an operator whose image of the
/// open box is bounded below `M` reports `None` even when the bound is
/// attained exactly on the boundary.
pub fn order_bound_witness(
    t: &KernelOperator,
    bound_box: &Element,
    m: &Rat,
    divisions: usize,
) -> Result<Option<(Element, Element)>> {
    if *bound_box.space() != *t.source() {
        return Err(t.source().mismatch(bound_box.space()));
    }
    if !bound_box.values().iter().all(|v| !v.is_negative()) {
        return Err(Error::NotPositive {
            detail: "bound box must be nonnegative".to_string(),
        });
    }
    let violates = |tx: &Element| tx.values().iter().any(|v| v.abs() >= *m);

    let try_candidate =
        |x: Element| -> Result<Option<(Element, Element)>> {
            let tx = t.apply(&x)?;
            if violates(&tx) {
                Ok(Some((x, tx)))
            } else {
                Ok(None)
            }
        };

    for k in 1..divisions {
        let step = rat::rat(k as i64, divisions as i64);
        // axis elements first
        for s in 0..t.source().len() {
            if bound_box.value(s).is_zero() {
                continue;
            }
            for sign in [1i64, -1] {
                let v = bound_box.value(s) * &step * rat::rat_int(sign);
                let x = Element::unit(t.source(), s, v)?;
                if let Some(found) = try_candidate(x)? {
                    return Ok(Some(found));
                }
            }
        }
        // uniform multiples of the whole box
        for sign in [1i64, -1] {
            let x = bound_box.scale(&(&step * rat::rat_int(sign)));
            if let Some(found) = try_candidate(x)? {
                return Ok(Some(found));
            }
        }
    }
    Ok(None)
}

/// Positivity of a kernel operator, semi-decided by grid sampling.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PositivityVerdict {
    /// Every kernel entry is nonnegative at every grid point. Reported as
    /// "positive on grid", not as a proof.
    PositiveOnGrid { points_checked: usize },
    /// Definitive counterexample: a kernel entry takes a negative value.
    Failed {
        source_point: usize,
        target_point: usize,
        at: Rat,
        value: Rat,
    },
}

impl PositivityVerdict {
    pub fn is_positive(&self) -> bool {
        matches!(self, PositivityVerdict::PositiveOnGrid { .. })
    }
}

/// Samples every kernel entry over the grid.
pub fn positivity_on_grid(t: &KernelOperator, grid: &SampleGrid) -> Result<PositivityVerdict> {
    let mut points_checked = 0;
    for (s, tp, e) in t.entries() {
        for r in grid.points() {
            let v = e.eval(r)?;
            points_checked += 1;
            if v.is_negative() {
                return Ok(PositivityVerdict::Failed {
                    source_point: s,
                    target_point: tp,
                    at: r.clone(),
                    value: v,
                });
            }
        }
    }
    Ok(PositivityVerdict::PositiveOnGrid { points_checked })
}

/// Operator equality decided by kernel comparison on the grid (plus the
/// structural zero-at-zero normalization, which holds by construction).
pub fn eq_on_grid(a: &KernelOperator, b: &KernelOperator, grid: &SampleGrid) -> Result<bool> {
    if a.source != b.source || a.target != b.target {
        return Ok(false);
    }
    let keys: alloc::collections::BTreeSet<(usize, usize)> = a
        .kernel
        .keys()
        .chain(b.kernel.keys())
        .copied()
        .collect();
    let zero_expr = Expr::zero();
    for key in keys {
        let ea = a.kernel.get(&key).unwrap_or(&zero_expr);
        let eb = b.kernel.get(&key).unwrap_or(&zero_expr);
        for r in grid.points() {
            if ea.eval(r)? != eb.eval(r)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;
    use crate::rat::{rat, rat_int};
    use alloc::vec;

    fn el(s: &Space, vals: &[i64]) -> Element {
        Element::new(s, vals.iter().map(|&v| rat_int(v)).collect()).unwrap()
    }

    #[test]
    fn diagonal_square_kernel() {
        let s = Space::unit("E", 2).unwrap();
        let t = KernelOperator::diagonal(
            &s,
            vec![parse("pow(r, 2)").unwrap(), parse("pow(r, 2)").unwrap()],
        )
        .unwrap();
        assert_eq!(t.apply(&el(&s, &[2, 3])).unwrap(), el(&s, &[4, 9]));
        assert_eq!(t.apply(&Element::zero(&s)).unwrap(), Element::zero(&s));
    }

    #[test]
    fn normalization_is_enforced() {
        let s = Space::unit("E", 1).unwrap();
        let bad = KernelOperator::diagonal(&s, vec![parse("r + 1").unwrap()]);
        assert!(matches!(bad, Err(Error::KernelNotNormalized { .. })));
    }

    #[test]
    fn coordinate_projection_operator() {
        // T(x) = x_0 into a one-point space
        let e = Space::unit("E", 2).unwrap();
        let f = Space::unit("F", 1).unwrap();
        let mut kernel = BTreeMap::new();
        kernel.insert((0usize, 0usize), Expr::var());
        let t = KernelOperator::new(&e, &f, kernel).unwrap();
        assert_eq!(t.apply(&el(&e, &[1, 1])).unwrap(), el(&f, &[1]));
    }

    #[test]
    fn brute_join_of_coordinate_operators() {
        // T(x) = x_0, S(x) = x_1 on ℚ² → ℚ¹; (T ∨ S)([1,1]) = 2.
        let e = Space::unit("E", 2).unwrap();
        let f = Space::unit("F", 1).unwrap();
        let mut k1 = BTreeMap::new();
        k1.insert((0usize, 0usize), Expr::var());
        let t = KernelOperator::new(&e, &f, k1).unwrap();
        let mut k2 = BTreeMap::new();
        k2.insert((1usize, 0usize), Expr::var());
        let s = KernelOperator::new(&e, &f, k2).unwrap();
        let x = el(&e, &[1, 1]);
        let join = brute_lattice_op(OpLatticeKind::Join, &t, Some(&s), &x).unwrap();
        assert_eq!(join, el(&f, &[2]));
        // attained at y = [1,0], z = [0,1]; the trivial splits give 1
        let meet = brute_lattice_op(OpLatticeKind::Meet, &t, Some(&s), &x).unwrap();
        assert_eq!(meet, el(&f, &[0]));
    }

    #[test]
    fn brute_pos_of_negative_kernel() {
        let s = Space::unit("E", 1).unwrap();
        let t = KernelOperator::diagonal(&s, vec![parse("-r").unwrap()]).unwrap();
        let x = el(&s, &[1]);
        // sup{Ty : y ⊑ [1]} over fragments {0, [1]}: best is y = 0
        assert_eq!(
            brute_lattice_op(OpLatticeKind::Pos, &t, None, &x).unwrap(),
            Element::zero(&s)
        );
        assert_eq!(
            brute_lattice_op(OpLatticeKind::Neg, &t, None, &x).unwrap(),
            el(&s, &[1])
        );
        assert_eq!(
            brute_lattice_op(OpLatticeKind::Modulus, &t, None, &x).unwrap(),
            el(&s, &[1])
        );
    }

    #[test]
    fn brute_join_is_idempotent() {
        let s = Space::unit("E", 2).unwrap();
        let t = KernelOperator::diagonal(
            &s,
            vec![parse("r").unwrap(), parse("pow(r, 3)").unwrap()],
        )
        .unwrap();
        let x = el(&s, &[2, -1]);
        let tv = t.apply(&x).unwrap();
        assert_eq!(
            brute_lattice_op(OpLatticeKind::Join, &t, Some(&t), &x).unwrap(),
            tv
        );
    }

    #[test]
    fn arity_errors() {
        let s = Space::unit("E", 1).unwrap();
        let t = KernelOperator::diagonal(&s, vec![Expr::var()]).unwrap();
        let x = el(&s, &[1]);
        assert!(brute_lattice_op(OpLatticeKind::Join, &t, None, &x).is_err());
        assert!(brute_lattice_op(OpLatticeKind::Pos, &t, Some(&t), &x).is_err());
    }

    #[test]
    fn check_oa_flags_constant_shift() {
        let s = Space::unit("E", 1).unwrap();
        let mut rng = SplitMix64::new(11);
        let shift = |x: &Element| {
            Ok(Element::new(
                x.space(),
                x.values().iter().map(|v| v + rat_int(1)).collect(),
            )
            .unwrap())
        };
        let report = check_oa(&s, shift, 8, &mut rng).unwrap();
        assert!(!report.passed());
        // first failure is the forced (0, 0) sample: T(0) ≠ T(0) + T(0)
        let first = &report.failures[0];
        assert!(first.y.is_zero() && first.z.is_zero());
    }

    #[test]
    fn check_oa_flags_square_of_sum() {
        let e = Space::unit("E", 2).unwrap();
        let f = Space::unit("F", 1).unwrap();
        let mut rng = SplitMix64::new(5);
        let map = |x: &Element| {
            let sum: Rat = x.values().iter().cloned().sum();
            Element::new(&f, vec![&sum * &sum])
        };
        let report = check_oa(&e, map, 32, &mut rng).unwrap();
        assert!(!report.passed());
    }

    #[test]
    fn kernel_operator_passes_check_oa() {
        let s = Space::unit("E", 3).unwrap();
        let t = KernelOperator::diagonal(
            &s,
            vec![
                parse("pow(r, 2)").unwrap(),
                parse("abs(r)").unwrap(),
                parse("min(r, 0)").unwrap(),
            ],
        )
        .unwrap();
        let mut rng = SplitMix64::new(2);
        let report = check_oa(&s, |x| t.apply(x), 64, &mut rng).unwrap();
        assert!(report.passed());
    }

    #[test]
    fn inverse_square_is_not_order_bounded() {
        let s = Space::unit("E", 1).unwrap();
        let t = KernelOperator::diagonal(
            &s,
            vec![parse("ifzero(r, 0, div(1, pow(r, 2)))").unwrap()],
        )
        .unwrap();
        let bound = el(&s, &[1]);
        let m = rat_int(1_000_000);
        let (x, tx) = order_bound_witness(&t, &bound, &m, DEFAULT_WITNESS_DIVISIONS)
            .unwrap()
            .expect("witness must exist");
        assert_eq!(x, Element::new(&s, vec![rat(1, 1000)]).unwrap());
        assert_eq!(tx, el(&s, &[1_000_000]));
    }

    #[test]
    fn bounded_kernels_yield_no_witness() {
        let s = Space::unit("E", 1).unwrap();
        let linear = KernelOperator::diagonal(&s, vec![Expr::var()]).unwrap();
        let bound = el(&s, &[1]);
        assert_eq!(
            order_bound_witness(&linear, &bound, &rat_int(1), DEFAULT_WITNESS_DIVISIONS).unwrap(),
            None
        );
        let zero = KernelOperator::zero(&s, &s);
        assert_eq!(
            order_bound_witness(&zero, &bound, &rat_int(1), DEFAULT_WITNESS_DIVISIONS).unwrap(),
            None
        );
    }

    #[test]
    fn positivity_grid_verdicts() {
        let s = Space::unit("E", 1).unwrap();
        let grid = SampleGrid::standard();
        let sq = KernelOperator::diagonal(&s, vec![parse("pow(r, 2)").unwrap()]).unwrap();
        assert!(positivity_on_grid(&sq, &grid).unwrap().is_positive());
        let lin = KernelOperator::diagonal(&s, vec![Expr::var()]).unwrap();
        match positivity_on_grid(&lin, &grid).unwrap() {
            PositivityVerdict::Failed { value, .. } => assert!(value.is_negative()),
            other => panic!("expected failure, got {other:?}"),
        }
    }

    #[test]
    fn grid_equality_distinguishes_kernels() {
        let s = Space::unit("E", 1).unwrap();
        let grid = SampleGrid::standard();
        let a = KernelOperator::diagonal(&s, vec![parse("abs(r)").unwrap()]).unwrap();
        let b = KernelOperator::diagonal(&s, vec![parse("max(r, -r)").unwrap()]).unwrap();
        assert!(eq_on_grid(&a, &b, &grid).unwrap());
        let c = KernelOperator::diagonal(&s, vec![parse("r").unwrap()]).unwrap();
        assert!(!eq_on_grid(&a, &c, &grid).unwrap());
    }
}
