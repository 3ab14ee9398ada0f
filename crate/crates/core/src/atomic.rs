//! Atomic operators: the subordination check `Tπ = Φ(π)T`, the pointwise
//! lattice formulas valid on the atomic band, and the band projection onto
//! the atomic operators.
//!
//! An operator is atomic subordinate to a Boolean homomorphism `Φ` when
//! `Tπ = Φ(π)T` for every order projection `π`. In kernel form this pins
//! the support of the kernel table: `g[s][t]` must vanish whenever
//! `t ∉ Φ({s})`. For atomic `T`, `S` the operator lattice operations act
//! pointwise (`(T ∨ S)x = Tx ∨ Sx`, `|T|x = |Tx|`, …), so result kernels
//! can be built symbolically with `max`/`min`/`abs`; the brute-force
//! decomposition oracle in [`crate::operator`] cross-checks every such
//! formula.
//!
//! The band projection of a positive operator onto the atomic band is the
//! infimum of `Σ_i Φ(π_i) T π_i` over all finite partitions `(π_i)` of the
//! identity. Masks shrink under refinement and kernels are nonnegative, so
//! the singleton partition attains the infimum; [`band_projection`] masks
//! the kernel accordingly and [`band_projection_partition_table`] verifies
//! the claim against an exhaustive enumeration of all set partitions.

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;

use num_traits::Zero;

use crate::element::Element;
use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::fragments::is_fragment;
use crate::operator::{positivity_on_grid, KernelOperator, OpLatticeKind};
use crate::proj::{BooleanHom, OrderProjection};
use crate::rat::{rat, Rat};
use crate::sample::{SampleGrid, SplitMix64};
use crate::{DEFAULT_ALGEBRA_CAP, DEFAULT_SUPPORT_CAP};

/// How thoroughly to check subordination.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AtomicityMode {
    /// Per-source-point check, sufficient for orthogonally additive
    /// operators because `π_A x` decomposes as a disjoint sum over
    /// singletons. For kernel operators this is the symbolic-on-grid scan
    /// of off-pattern entries.
    Singleton,
    /// Exhaustive two-sided evaluation `T(π_A x)` vs `Φ(π_A)(Tx)` over all
    /// carriers `A`, capped at [`DEFAULT_ALGEBRA_CAP`] source points.
    Full,
}

/// A refuted subordination instance: `T(πx) ≠ Φ(π)(Tx)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AtomicityWitness {
    pub carrier: BTreeSet<usize>,
    pub element: Element,
    /// `T(πx)`
    pub left: Element,
    /// `Φ(π)(Tx)`
    pub right: Element,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AtomicityReport {
    pub atomic: bool,
    pub mode: AtomicityMode,
    pub comparisons: usize,
    pub witnesses: Vec<AtomicityWitness>,
}

fn check_op_hom_spaces(t: &KernelOperator, h: &BooleanHom) -> Result<()> {
    if t.source() != h.source() {
        return Err(t.source().mismatch(h.source()));
    }
    if t.target() != h.target() {
        return Err(t.target().mismatch(h.target()));
    }
    Ok(())
}

/// Checks `Tπ = Φ(π)T` with the default caps.
pub fn is_atomic(
    t: &KernelOperator,
    h: &BooleanHom,
    mode: AtomicityMode,
    grid: &SampleGrid,
) -> Result<AtomicityReport> {
    is_atomic_with_cap(t, h, mode, grid, DEFAULT_ALGEBRA_CAP)
}

/// [`is_atomic`] with an explicit cap for the full-mode carrier enumeration.
pub fn is_atomic_with_cap(
    t: &KernelOperator,
    h: &BooleanHom,
    mode: AtomicityMode,
    grid: &SampleGrid,
    algebra_cap: usize,
) -> Result<AtomicityReport> {
    check_op_hom_spaces(t, h)?;
    match mode {
        AtomicityMode::Singleton => singleton_check(t, h, grid),
        AtomicityMode::Full => full_check(t, h, grid, algebra_cap),
    }
}

fn witness_at(
    t: &KernelOperator,
    h: &BooleanHom,
    carrier: &BTreeSet<usize>,
    x: &Element,
) -> Result<Option<AtomicityWitness>> {
    let pi = OrderProjection::new(t.source(), carrier.clone())?;
    let left = t.apply(&pi.apply(x)?)?;
    let right = t.apply(x)?.restrict(&h.apply_set(carrier)?)?;
    if left == right {
        Ok(None)
    } else {
        Ok(Some(AtomicityWitness {
            carrier: carrier.clone(),
            element: x.clone(),
            left,
            right,
        }))
    }
}

fn singleton_check(
    t: &KernelOperator,
    h: &BooleanHom,
    grid: &SampleGrid,
) -> Result<AtomicityReport> {
    let mut witnesses = Vec::new();
    let mut comparisons = 0;
    for (s, tp, e) in t.entries() {
        if h.preimage_point(tp) == s {
            continue; // on-pattern entry, contributes to both sides equally
        }
        for r in grid.points() {
            comparisons += 1;
            if !e.eval(r)?.is_zero() {
                let carrier: BTreeSet<usize> = [s].into_iter().collect();
                let x = Element::unit(t.source(), s, r.clone())?;
                if let Some(w) = witness_at(t, h, &carrier, &x)? {
                    witnesses.push(w);
                }
                break; // one witness per offending entry
            }
        }
    }
    Ok(AtomicityReport {
        atomic: witnesses.is_empty(),
        mode: AtomicityMode::Singleton,
        comparisons,
        witnesses,
    })
}

/// Deterministic test elements for the full-mode check: scaled units, a
/// ramp, the constant one, and an alternating-sign element.
fn basis_elements(space: &crate::space::Space) -> Vec<Element> {
    let mut out = Vec::new();
    let scalars = [rat(1, 1), rat(-1, 1), rat(2, 1), rat(1, 2), rat(-3, 2)];
    for s in 0..space.len() {
        for c in &scalars {
            out.push(Element::unit(space, s, c.clone()).expect("in range"));
        }
    }
    out.push(Element::constant(space, rat(1, 1)));
    let ramp: Vec<Rat> = (0..space.len()).map(|i| rat(i as i64 + 1, 1)).collect();
    out.push(Element::new(space, ramp).expect("length matches"));
    let alternating: Vec<Rat> = (0..space.len())
        .map(|i| if i % 2 == 0 { rat(3, 2) } else { rat(-5, 2) })
        .collect();
    out.push(Element::new(space, alternating).expect("length matches"));
    out
}

fn full_check(
    t: &KernelOperator,
    h: &BooleanHom,
    grid: &SampleGrid,
    algebra_cap: usize,
) -> Result<AtomicityReport> {
    let n = t.source().len();
    if n > algebra_cap {
        return Err(Error::AlgebraCapExceeded {
            points: n,
            cap: algebra_cap,
        });
    }
    // run the cheap singleton scan first so full mode is never weaker
    let base = singleton_check(t, h, grid)?;
    let mut witnesses = base.witnesses;
    let mut comparisons = base.comparisons;
    let tests = basis_elements(t.source());
    for mask in 0..(1usize << n) {
        let carrier: BTreeSet<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
        for x in &tests {
            comparisons += 1;
            if let Some(w) = witness_at(t, h, &carrier, x)? {
                witnesses.push(w);
            }
        }
    }
    Ok(AtomicityReport {
        atomic: witnesses.is_empty(),
        mode: AtomicityMode::Full,
        comparisons,
        witnesses,
    })
}

fn require_atomic(
    t: &KernelOperator,
    h: &BooleanHom,
    grid: &SampleGrid,
) -> Result<()> {
    let report = is_atomic(t, h, AtomicityMode::Singleton, grid)?;
    if report.atomic {
        Ok(())
    } else {
        Err(Error::NotAtomic {
            witnesses: report.witnesses.len(),
        })
    }
}

/// Builds the lattice combination of atomic operators symbolically:
/// `(T ∨ S)x = Tx ∨ Sx` becomes an entrywise `max` of kernel expressions,
/// and likewise for meet, positive/negative part, and the modulus. Both
/// operators must be atomic subordinate to `h`; the result is atomic
/// subordinate to the same homomorphism.
pub fn pointwise_lattice_op(
    kind: OpLatticeKind,
    t: &KernelOperator,
    s: Option<&KernelOperator>,
    h: &BooleanHom,
    grid: &SampleGrid,
) -> Result<KernelOperator> {
    let binary = matches!(kind, OpLatticeKind::Join | OpLatticeKind::Meet);
    if binary != s.is_some() {
        return Err(Error::ArityMismatch {
            op: String::from(kind.name()),
            expected: if binary { 2 } else { 1 },
            got: if s.is_some() { 2 } else { 1 },
        });
    }
    require_atomic(t, h, grid)?;
    if let Some(s) = s {
        if s.source() != t.source() {
            return Err(t.source().mismatch(s.source()));
        }
        if s.target() != t.target() {
            return Err(t.target().mismatch(s.target()));
        }
        require_atomic(s, h, grid)?;
    }

    let mut keys: BTreeSet<(usize, usize)> = t.entries().map(|(a, b, _)| (a, b)).collect();
    if let Some(s) = s {
        keys.extend(s.entries().map(|(a, b, _)| (a, b)));
    }
    let mut kernel = alloc::collections::BTreeMap::new();
    for (sp, tp) in keys {
        let a = t.entry(sp, tp).cloned().unwrap_or_else(Expr::zero);
        let combined = match kind {
            OpLatticeKind::Join => {
                let b = s.unwrap().entry(sp, tp).cloned().unwrap_or_else(Expr::zero);
                Expr::max_of(a, b)
            }
            OpLatticeKind::Meet => {
                let b = s.unwrap().entry(sp, tp).cloned().unwrap_or_else(Expr::zero);
                Expr::min_of(a, b)
            }
            OpLatticeKind::Pos => Expr::max_of(a, Expr::zero()),
            OpLatticeKind::Neg => Expr::max_of(Expr::neg(a), Expr::zero()),
            OpLatticeKind::Modulus => Expr::abs_of(a),
        };
        kernel.insert((sp, tp), combined);
    }
    KernelOperator::new(t.source(), t.target(), kernel)
}

/// Band projection onto the atomic operators subordinate to `h`, in closed
/// form: the kernel table masked to the atomic pattern (the infimum over
/// partitions of the identity is attained by the singleton partition when
/// the kernels are nonnegative). Requires `T` positive on the grid.
pub fn band_projection(
    t: &KernelOperator,
    h: &BooleanHom,
    grid: &SampleGrid,
) -> Result<KernelOperator> {
    check_op_hom_spaces(t, h)?;
    let verdict = positivity_on_grid(t, grid)?;
    if let crate::operator::PositivityVerdict::Failed {
        source_point,
        target_point,
        at,
        value,
    } = verdict
    {
        return Err(Error::NotPositive {
            detail: alloc::format!(
                "kernel ({}, {}) takes value {value} at r = {at}",
                t.source().point_name(source_point),
                t.target().point_name(target_point)
            ),
        });
    }
    let kernel = t
        .entries()
        .filter(|&(s, tp, _)| h.preimage_point(tp) == s)
        .map(|(s, tp, e)| ((s, tp), e.clone()))
        .collect();
    KernelOperator::new(t.source(), t.target(), kernel)
}

/// All set partitions of `{0, …, n−1}` as restricted-growth strings:
/// `rgs[i]` is the block index of element `i`, with `rgs[i] ≤ max(rgs[..i]) + 1`.
pub fn set_partitions(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut rgs = alloc::vec![0usize; n];
    fn rec(i: usize, max_used: usize, rgs: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if i == rgs.len() {
            out.push(rgs.clone());
            return;
        }
        for v in 0..=max_used + 1 {
            rgs[i] = v;
            rec(i + 1, core::cmp::max(max_used, v), rgs, out);
        }
    }
    if n == 0 {
        out.push(Vec::new());
        return out;
    }
    // first element is always in block 0
    rec(1, 0, &mut rgs, &mut out);
    out
}

/// Blocks of a restricted-growth string as carrier sets.
pub fn rgs_blocks(rgs: &[usize]) -> Vec<BTreeSet<usize>> {
    let nblocks = rgs.iter().copied().max().map_or(0, |m| m + 1);
    let mut blocks = alloc::vec![BTreeSet::new(); nblocks];
    for (i, &b) in rgs.iter().enumerate() {
        blocks[b].insert(i);
    }
    blocks
}

/// One sampled element of the partition verification table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionRow {
    pub element: Element,
    /// Pointwise minimum of `Σ_i Φ(π_i) T π_i` over all set partitions.
    pub brute_min: Element,
    /// Value of the closed-form (singleton-masked) projection.
    pub closed: Element,
    /// Exact agreement of the two.
    pub agree: bool,
    /// Every partition's value dominates the closed form coordinatewise
    /// (refinement monotonicity).
    pub all_dominate_closed: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BandPartitionTable {
    pub partitions: usize,
    pub rows: Vec<PartitionRow>,
}

impl BandPartitionTable {
    pub fn passed(&self) -> bool {
        self.rows.iter().all(|r| r.agree && r.all_dominate_closed)
    }
}

/// Verifies the closed-form band projection against the infimum over all
/// set partitions of the identity, evaluated at the given elements.
pub fn band_projection_partition_table(
    t: &KernelOperator,
    h: &BooleanHom,
    elements: &[Element],
    partition_cap: usize,
    grid: &SampleGrid,
) -> Result<BandPartitionTable> {
    check_op_hom_spaces(t, h)?;
    let n = t.source().len();
    if n > partition_cap {
        return Err(Error::PartitionCapExceeded {
            points: n,
            cap: partition_cap,
        });
    }
    let closed_op = band_projection(t, h, grid)?;
    let partitions = set_partitions(n);
    let mut rows = Vec::with_capacity(elements.len());
    for x in elements {
        // T(x·1_A) for every carrier A, indexed by mask
        let mut masked_images: Vec<Element> = Vec::with_capacity(1 << n);
        for mask in 0..(1usize << n) {
            let carrier: BTreeSet<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
            masked_images.push(t.apply(&x.restrict(&carrier)?)?);
        }
        let mask_of = |block: &BTreeSet<usize>| -> usize {
            block.iter().fold(0usize, |m, &i| m | (1 << i))
        };
        let closed = closed_op.apply(x)?;
        let mut brute_min: Option<Element> = None;
        let mut all_dominate = true;
        for rgs in &partitions {
            let mut value = Element::zero(t.target());
            for block in rgs_blocks(rgs) {
                let image_carrier = h.apply_set(&block)?;
                let contribution = masked_images[mask_of(&block)].restrict(&image_carrier)?;
                value = &value + &contribution;
            }
            if !closed.le(&value)? {
                all_dominate = false;
            }
            brute_min = Some(match brute_min {
                None => value,
                Some(acc) => acc.meet(&value)?,
            });
        }
        let brute_min = brute_min.expect("at least one partition");
        rows.push(PartitionRow {
            agree: brute_min == closed,
            all_dominate_closed: all_dominate,
            element: x.clone(),
            brute_min,
            closed,
        });
    }
    Ok(BandPartitionTable {
        partitions: partitions.len(),
        rows,
    })
}

/// Verified proof obligations of the band projection.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BandPropertiesReport {
    /// `0 ≤ R(T)x ≤ Tx` on every sampled element (both operators).
    pub bounds_ok: bool,
    pub bounds_witness: Option<Element>,
    /// `R(T1) + R(T2) = R(T1 + T2)` on the grid and on the samples.
    pub additive_ok: bool,
    /// `R(R(T)) = R(T)` on the grid.
    pub idempotent_ok: bool,
    /// `R(T) = T` exactly when `T` passes the atomicity check.
    pub fixed_point_iff_atomic_ok: bool,
}

impl BandPropertiesReport {
    pub fn passed(&self) -> bool {
        self.bounds_ok && self.additive_ok && self.idempotent_ok && self.fixed_point_iff_atomic_ok
    }
}

/// Checks the band projection proof properties for two positive operators.
pub fn band_projection_properties(
    t1: &KernelOperator,
    t2: &KernelOperator,
    h: &BooleanHom,
    elements: &[Element],
    grid: &SampleGrid,
) -> Result<BandPropertiesReport> {
    let r1 = band_projection(t1, h, grid)?;
    let r2 = band_projection(t2, h, grid)?;
    let sum = t1.add(t2)?;
    let r_sum = band_projection(&sum, h, grid)?;

    let zero = |sp: &crate::space::Space| Element::zero(sp);
    let mut bounds_ok = true;
    let mut bounds_witness = None;
    for x in elements {
        for (t, r) in [(t1, &r1), (t2, &r2)] {
            let rx = r.apply(x)?;
            let tx = t.apply(x)?;
            if !(zero(t.target()).le(&rx)? && rx.le(&tx)?) {
                bounds_ok = false;
                bounds_witness.get_or_insert_with(|| x.clone());
            }
        }
    }

    let mut additive_ok = crate::operator::eq_on_grid(&r1.add(&r2)?, &r_sum, grid)?;
    if additive_ok {
        for x in elements {
            let lhs = &r1.apply(x)? + &r2.apply(x)?;
            if lhs != r_sum.apply(x)? {
                additive_ok = false;
                break;
            }
        }
    }

    let idempotent_ok = crate::operator::eq_on_grid(&band_projection(&r1, h, grid)?, &r1, grid)?
        && crate::operator::eq_on_grid(&band_projection(&r2, h, grid)?, &r2, grid)?;

    let mut fixed_point_iff_atomic_ok = true;
    for (t, r) in [(t1, &r1), (t2, &r2)] {
        let fixed = crate::operator::eq_on_grid(r, t, grid)?;
        let atomic = is_atomic(t, h, AtomicityMode::Singleton, grid)?.atomic;
        if fixed != atomic {
            fixed_point_iff_atomic_ok = false;
        }
    }

    Ok(BandPropertiesReport {
        bounds_ok,
        bounds_witness,
        additive_ok,
        idempotent_ok,
        fixed_point_iff_atomic_ok,
    })
}

/// A refuted consequence of atomicity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConsequenceFailure {
    pub kind: ConsequenceKind,
    pub x: Element,
    pub y: Element,
    pub tx: Element,
    pub ty: Element,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConsequenceKind {
    /// `x ⊥ y` but `Tx` and `Ty` are not disjoint.
    DisjointnessPreservation,
    /// `y ⊑ x` but `Ty` is not a fragment of `Tx`.
    FragmentPreservation,
    /// `y ⊑ x` but `|Ty| ≤ |Tx|` fails.
    LateralBound,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConsequenceReport {
    pub samples: usize,
    pub failures: Vec<ConsequenceFailure>,
}

impl ConsequenceReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Samples the consequences of atomicity: disjointness preservation,
/// fragment preservation `T(F_x) ⊆ F_{Tx}`, and the lateral bound
/// `|Ty| ≤ |Tx|` for `y ⊑ x`.
pub fn atomic_consequences_check(
    t: &KernelOperator,
    samples: usize,
    rng: &mut SplitMix64,
) -> Result<ConsequenceReport> {
    let mut failures = Vec::new();
    let mut tested = 0;
    for _ in 0..samples {
        let (x, y) = crate::sample::random_disjoint_pair(rng, t.source());
        let tx = t.apply(&x)?;
        let ty = t.apply(&y)?;
        tested += 1;
        if !tx.is_disjoint(&ty)? {
            failures.push(ConsequenceFailure {
                kind: ConsequenceKind::DisjointnessPreservation,
                x: x.clone(),
                y: y.clone(),
                tx: tx.clone(),
                ty: ty.clone(),
            });
        }
        // random fragment of a random element
        let w = crate::sample::random_element(rng, t.source());
        let carrier: BTreeSet<usize> = w
            .support()
            .into_iter()
            .filter(|_| rng.chance(1, 2))
            .collect();
        let frag = w.restrict(&carrier)?;
        let tw = t.apply(&w)?;
        let tfrag = t.apply(&frag)?;
        tested += 1;
        if !is_fragment(&tfrag, &tw)? {
            failures.push(ConsequenceFailure {
                kind: ConsequenceKind::FragmentPreservation,
                x: w.clone(),
                y: frag.clone(),
                tx: tw.clone(),
                ty: tfrag.clone(),
            });
        }
        if !tfrag.abs().le(&tw.abs())? {
            failures.push(ConsequenceFailure {
                kind: ConsequenceKind::LateralBound,
                x: w,
                y: frag,
                tx: tw,
                ty: tfrag,
            });
        }
    }
    Ok(ConsequenceReport {
        samples: tested,
        failures,
    })
}

/// Convenience: oracle-vs-pointwise agreement of one lattice operation at
/// one element, with the default support cap.
pub fn pointwise_matches_oracle(
    kind: OpLatticeKind,
    t: &KernelOperator,
    s: Option<&KernelOperator>,
    h: &BooleanHom,
    x: &Element,
    grid: &SampleGrid,
) -> Result<bool> {
    let pw = pointwise_lattice_op(kind, t, s, h, grid)?;
    let lhs = pw.apply(x)?;
    let rhs = crate::operator::brute_lattice_op_with_cap(kind, t, s, x, DEFAULT_SUPPORT_CAP)?;
    Ok(lhs == rhs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;
    use crate::rat::rat_int;
    use crate::space::Space;
    use crate::DEFAULT_PARTITION_CAP;
    use alloc::collections::BTreeMap;
    use alloc::vec;

    fn el(s: &Space, vals: &[i64]) -> Element {
        Element::new(s, vals.iter().map(|&v| rat_int(v)).collect()).unwrap()
    }

    fn grid() -> SampleGrid {
        SampleGrid::standard()
    }

    #[test]
    fn diagonal_kernel_is_atomic_for_identity() {
        let s = Space::unit("E", 2).unwrap();
        let t = KernelOperator::diagonal(
            &s,
            vec![parse("pow(r,2)").unwrap(), parse("abs(r)").unwrap()],
        )
        .unwrap();
        let h = BooleanHom::identity(&s);
        let rep = is_atomic(&t, &h, AtomicityMode::Singleton, &grid()).unwrap();
        assert!(rep.atomic);
        assert!(rep.witnesses.is_empty());
        let full = is_atomic(&t, &h, AtomicityMode::Full, &grid()).unwrap();
        assert!(full.atomic);
    }

    #[test]
    fn z4_shift_is_atomic_for_shift_hom() {
        // (T₁f)(i) = f(i−1) on Z₄, subordinate to Φ₁(A) = A + 1.
        let z4 = Space::unit("Z4", 4).unwrap();
        let phi = BooleanHom::new(&z4, &z4, vec![3, 0, 1, 2]).unwrap();
        let mut kernel = BTreeMap::new();
        for t in 0..4usize {
            kernel.insert(((t + 3) % 4, t), Expr::var());
        }
        let shift = KernelOperator::new(&z4, &z4, kernel).unwrap();
        let rep = is_atomic(&shift, &phi, AtomicityMode::Full, &grid()).unwrap();
        assert!(rep.atomic);
        // the shift moves the unit at 0 to the unit at 1
        let e0 = Element::unit(&z4, 0, rat_int(1)).unwrap();
        assert_eq!(
            shift.apply(&e0).unwrap(),
            Element::unit(&z4, 1, rat_int(1)).unwrap()
        );
        // but it is not atomic for the identity hom
        let id = BooleanHom::identity(&z4);
        let rep2 = is_atomic(&shift, &id, AtomicityMode::Singleton, &grid()).unwrap();
        assert!(!rep2.atomic);
    }

    #[test]
    fn off_diagonal_kernel_yields_witness() {
        let s = Space::unit("E", 2).unwrap();
        let mut kernel = BTreeMap::new();
        kernel.insert((0usize, 1usize), Expr::var());
        let t = KernelOperator::new(&s, &s, kernel).unwrap();
        let h = BooleanHom::identity(&s);
        let rep = is_atomic(&t, &h, AtomicityMode::Singleton, &grid()).unwrap();
        assert!(!rep.atomic);
        let w = &rep.witnesses[0];
        assert_eq!(w.carrier, [0usize].into_iter().collect::<BTreeSet<_>>());
        // T(πx) has mass at point 1, Φ(π)(Tx) does not
        assert!(!w.left.value(1).is_zero());
        assert!(w.right.value(1).is_zero());
    }

    #[test]
    fn pointwise_modulus_matches_value() {
        let s = Space::unit("E", 1).unwrap();
        let t = KernelOperator::diagonal(&s, vec![parse("-r").unwrap()]).unwrap();
        let h = BooleanHom::identity(&s);
        let m = pointwise_lattice_op(OpLatticeKind::Modulus, &t, None, &h, &grid()).unwrap();
        assert_eq!(m.apply(&el(&s, &[2])).unwrap(), el(&s, &[2]));
    }

    #[test]
    fn pointwise_join_matches_oracle() {
        let s = Space::unit("E", 1).unwrap();
        let t = KernelOperator::diagonal(&s, vec![parse("r").unwrap()]).unwrap();
        let u = KernelOperator::diagonal(&s, vec![parse("2 * r").unwrap()]).unwrap();
        let h = BooleanHom::identity(&s);
        let j = pointwise_lattice_op(OpLatticeKind::Join, &t, Some(&u), &h, &grid()).unwrap();
        let x = el(&s, &[3]);
        assert_eq!(j.apply(&x).unwrap(), el(&s, &[6]));
        assert!(
            pointwise_matches_oracle(OpLatticeKind::Join, &t, Some(&u), &h, &x, &grid()).unwrap()
        );
    }

    #[test]
    fn pointwise_pos_of_nonpositive_kernel() {
        let s = Space::unit("E", 1).unwrap();
        let t = KernelOperator::diagonal(&s, vec![parse("min(r, 0)").unwrap()]).unwrap();
        let h = BooleanHom::identity(&s);
        let p = pointwise_lattice_op(OpLatticeKind::Pos, &t, None, &h, &grid()).unwrap();
        for v in [1i64, 2, 5] {
            assert!(p.apply(&el(&s, &[v])).unwrap().is_zero());
        }
    }

    #[test]
    fn pointwise_requires_atomicity() {
        let s = Space::unit("E", 2).unwrap();
        let mut kernel = BTreeMap::new();
        kernel.insert((0usize, 1usize), Expr::var());
        let t = KernelOperator::new(&s, &s, kernel).unwrap();
        let h = BooleanHom::identity(&s);
        assert!(matches!(
            pointwise_lattice_op(OpLatticeKind::Modulus, &t, None, &h, &grid()),
            Err(Error::NotAtomic { .. })
        ));
    }

    #[test]
    fn band_projection_masks_the_kernel() {
        // two points, kernel r² everywhere, identity hom
        let s = Space::unit("E", 2).unwrap();
        let mut kernel = BTreeMap::new();
        for sp in 0..2usize {
            for tp in 0..2usize {
                kernel.insert((sp, tp), parse("pow(r,2)").unwrap());
            }
        }
        let t = KernelOperator::new(&s, &s, kernel).unwrap();
        let h = BooleanHom::identity(&s);
        let r = band_projection(&t, &h, &grid()).unwrap();
        let x = el(&s, &[1, 2]);
        assert_eq!(r.apply(&x).unwrap(), el(&s, &[1, 4]));
        assert_eq!(t.apply(&x).unwrap(), el(&s, &[5, 5]));
        // verification against all partitions of a two-point set
        let table = band_projection_partition_table(
            &t,
            &h,
            &[x, el(&s, &[3, 1]), el(&s, &[0, 2])],
            DEFAULT_PARTITION_CAP,
            &grid(),
        )
        .unwrap();
        assert_eq!(table.partitions, 2);
        assert!(table.passed());
    }

    #[test]
    fn band_projection_fixes_atomic_operators() {
        let s = Space::unit("E", 2).unwrap();
        let t = KernelOperator::diagonal(
            &s,
            vec![parse("abs(r)").unwrap(), parse("pow(r,2)").unwrap()],
        )
        .unwrap();
        let h = BooleanHom::identity(&s);
        let r = band_projection(&t, &h, &grid()).unwrap();
        assert!(crate::operator::eq_on_grid(&r, &t, &grid()).unwrap());
        let z = KernelOperator::zero(&s, &s);
        let rz = band_projection(&z, &h, &grid()).unwrap();
        assert!(crate::operator::eq_on_grid(&rz, &z, &grid()).unwrap());
    }

    #[test]
    fn band_projection_rejects_nonpositive() {
        let s = Space::unit("E", 1).unwrap();
        let t = KernelOperator::diagonal(&s, vec![parse("r").unwrap()]).unwrap();
        let h = BooleanHom::identity(&s);
        assert!(matches!(
            band_projection(&t, &h, &grid()),
            Err(Error::NotPositive { .. })
        ));
    }

    #[test]
    fn band_properties_hold_for_random_positive_pairs() {
        let mut rng = SplitMix64::new(77);
        for _ in 0..5 {
            let s = crate::sample::random_space(&mut rng, "S", 3);
            let f = crate::sample::random_space(&mut rng, "F", 3);
            let h = crate::sample::random_hom(&mut rng, &s, &f);
            let t1 = crate::sample::random_positive_operator(&mut rng, &s, &f, 1);
            let t2 = crate::sample::random_positive_operator(&mut rng, &s, &f, 1);
            let elements: Vec<Element> = (0..6)
                .map(|_| crate::sample::random_element(&mut rng, &s))
                .collect();
            let rep =
                band_projection_properties(&t1, &t2, &h, &elements, &grid()).unwrap();
            assert!(rep.passed(), "{rep:?}");
        }
    }

    #[test]
    fn partition_counts_are_bell_numbers() {
        let bell = [1usize, 1, 2, 5, 15, 52, 203];
        for (n, &b) in bell.iter().enumerate() {
            assert_eq!(set_partitions(n).len(), b, "n = {n}");
        }
        // blocks of an RGS really partition the ground set
        for rgs in set_partitions(4) {
            let blocks = rgs_blocks(&rgs);
            let total: usize = blocks.iter().map(|b| b.len()).sum();
            assert_eq!(total, 4);
        }
    }

    #[test]
    fn atomic_consequences_pass_for_atomic_operators() {
        let mut rng = SplitMix64::new(21);
        let s = crate::sample::random_space(&mut rng, "S", 4);
        let f = crate::sample::random_space(&mut rng, "F", 4);
        let h = crate::sample::random_hom(&mut rng, &s, &f);
        let t = crate::sample::random_atomic_operator(&mut rng, &h, 2);
        let rep = atomic_consequences_check(&t, 100, &mut rng).unwrap();
        assert!(rep.passed());
    }
}
