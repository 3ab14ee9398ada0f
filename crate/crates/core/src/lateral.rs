//! Lateral ideals and the minimal extension of positive orthogonally
//! additive maps.
//!
//! A lateral ideal is a subset closed under fragments and under disjoint
//! sums. Three intensional constructors are provided — order ideals (via
//! the closed form `|x| ≤ c·g` for the join `g` of the generator moduli),
//! fragment sets `F_u`, and operator kernels `{y : T(y) = 0}` — plus
//! explicit finite lists. Closure is checked at construction: exhaustively
//! when the ideal is finite, on samples otherwise; a sampling pass means
//! "consistent", not proved.
//!
//! The minimal extension of a positive map `T : D → F` is
//! `T̃(x) = sup { T(y) : y ∈ F_x ∩ D }` with `sup ∅ = 0`, computed here as a
//! coordinatewise maximum over the enumerated fragment set.

use alloc::collections::BTreeSet;
use alloc::string::ToString;
use alloc::vec::Vec;

use num_traits::Signed;

use crate::atomic::AtomicityWitness;
use crate::element::Element;
use crate::error::{Error, Result};
use crate::fragments::{fragments_with_cap, is_fragment};
use crate::operator::KernelOperator;
use crate::proj::BooleanHom;
use crate::sample::{self, SplitMix64};
use crate::space::Space;
use crate::DEFAULT_SUPPORT_CAP;

/// Intensional description of a lateral ideal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IdealKind {
    /// Order ideal generated by a finite set: membership is support
    /// containment in the join of the generator moduli.
    OrderIdeal { generators: Vec<Element> },
    /// The fragment set `F_anchor`.
    FragmentSet { anchor: Element },
    /// `ker(T) = {y : T(y) = 0}` of a positive operator.
    OperatorKernel { op: KernelOperator },
    /// Explicit finite list (may be empty).
    Explicit { members: Vec<Element> },
}

/// A lateral ideal over a space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LateralIdeal {
    space: Space,
    kind: IdealKind,
    /// Join of generator moduli for the order-ideal closed form.
    order_bound: Option<Element>,
}

impl LateralIdeal {
    /// Builds the ideal and checks both closure axioms — exhaustively when
    /// the member set is finite and small, on random samples otherwise.
    pub fn new(space: &Space, kind: IdealKind, rng: &mut SplitMix64) -> Result<Self> {
        let order_bound = match &kind {
            IdealKind::OrderIdeal { generators } => {
                let mut bound = Element::zero(space);
                for g in generators {
                    if g.space() != space {
                        return Err(space.mismatch(g.space()));
                    }
                    bound = bound.join(&g.abs())?;
                }
                Some(bound)
            }
            IdealKind::FragmentSet { anchor } => {
                if anchor.space() != space {
                    return Err(space.mismatch(anchor.space()));
                }
                None
            }
            IdealKind::OperatorKernel { op } => {
                if op.source() != space {
                    return Err(space.mismatch(op.source()));
                }
                None
            }
            IdealKind::Explicit { members } => {
                for m in members {
                    if m.space() != space {
                        return Err(space.mismatch(m.space()));
                    }
                }
                None
            }
        };
        let ideal = LateralIdeal {
            space: space.clone(),
            kind,
            order_bound,
        };
        ideal.check_closure(rng)?;
        Ok(ideal)
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn kind(&self) -> &IdealKind {
        &self.kind
    }

    /// Membership test, exact per kind.
    pub fn contains(&self, x: &Element) -> Result<bool> {
        if x.space() != &self.space {
            return Err(self.space.mismatch(x.space()));
        }
        match &self.kind {
            IdealKind::OrderIdeal { .. } => {
                // |x| ≤ c·g for some rational c ⇔ supp(x) ⊆ supp(g)
                let bound = self.order_bound.as_ref().expect("set at construction");
                Ok(x.support().is_subset(&bound.support()))
            }
            IdealKind::FragmentSet { anchor } => is_fragment(x, anchor),
            IdealKind::OperatorKernel { op } => Ok(op.apply(x)?.is_zero()),
            IdealKind::Explicit { members } => Ok(members.contains(x)),
        }
    }

    /// The full member list when the ideal is finite and enumerable within
    /// the cap; `None` for intensional kinds.
    pub fn members_if_finite(&self, cap: usize) -> Result<Option<Vec<Element>>> {
        match &self.kind {
            IdealKind::FragmentSet { anchor } => {
                if anchor.support().len() <= cap {
                    Ok(Some(fragments_with_cap(anchor, cap)?))
                } else {
                    Ok(None)
                }
            }
            IdealKind::Explicit { members } => Ok(Some(members.clone())),
            _ => Ok(None),
        }
    }

    /// Samples members of the ideal (always includes the zero element,
    /// which belongs to every nonempty lateral ideal; for the empty
    /// explicit ideal the result is empty).
    pub fn sample_members(&self, n: usize, rng: &mut SplitMix64) -> Result<Vec<Element>> {
        let mut out = Vec::new();
        match &self.kind {
            IdealKind::Explicit { members } => {
                for (i, m) in members.iter().enumerate() {
                    if i >= n {
                        break;
                    }
                    out.push(m.clone());
                }
            }
            IdealKind::FragmentSet { anchor } => {
                out.push(Element::zero(&self.space));
                for _ in 0..n {
                    out.push(random_fragment(anchor, rng)?);
                }
            }
            IdealKind::OrderIdeal { .. } => {
                out.push(Element::zero(&self.space));
                let bound = self.order_bound.as_ref().expect("set at construction");
                let carrier = bound.support();
                for _ in 0..n {
                    let e = sample::random_element(rng, &self.space);
                    out.push(e.restrict(&carrier)?);
                }
            }
            IdealKind::OperatorKernel { .. } => {
                out.push(Element::zero(&self.space));
                for _ in 0..(4 * n) {
                    if out.len() > n {
                        break;
                    }
                    let e = sample::random_element(rng, &self.space);
                    if self.contains(&e)? {
                        out.push(e);
                    }
                }
            }
        }
        Ok(out)
    }

    fn check_closure(&self, rng: &mut SplitMix64) -> Result<()> {
        // exhaustive only while the member set stays desk-sized (2^8)
        let members: Vec<Element> = match self.members_if_finite(8)? {
            Some(list) => list,
            None => self.sample_members(16, rng)?,
        };
        // fragments of members stay inside
        for m in &members {
            let frs = fragments_with_cap(m, DEFAULT_SUPPORT_CAP)?;
            for f in frs {
                if !self.contains(&f)? {
                    return Err(Error::IdealClosureViolation {
                        law: "fragments".to_string(),
                        witness: alloc::format!("{f} ⊑ {m}"),
                    });
                }
            }
        }
        // disjoint sums of members stay inside
        for (i, a) in members.iter().enumerate() {
            for b in members.iter().skip(i) {
                if a.is_disjoint(b)? {
                    let sum = a.checked_add(b)?;
                    if !self.contains(&sum)? {
                        return Err(Error::IdealClosureViolation {
                            law: "disjoint sums".to_string(),
                            witness: alloc::format!("{a} ⊔ {b}"),
                        });
                    }
                }
            }
        }
        Ok(())
    }
}

/// Random fragment: a restriction of `x` to a random subset of its support.
fn random_fragment(x: &Element, rng: &mut SplitMix64) -> Result<Element> {
    let carrier: BTreeSet<usize> = x
        .support()
        .into_iter()
        .filter(|_| rng.chance(1, 2))
        .collect();
    x.restrict(&carrier)
}

/// A positive orthogonally additive map defined on a lateral ideal, carried
/// by a kernel operator (so orthogonal additivity is structural on the
/// domain).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartialMap {
    domain: LateralIdeal,
    op: KernelOperator,
}

impl PartialMap {
    pub fn new(domain: LateralIdeal, op: KernelOperator) -> Result<Self> {
        if op.source() != domain.space() {
            return Err(domain.space().mismatch(op.source()));
        }
        Ok(PartialMap { domain, op })
    }

    pub fn domain(&self) -> &LateralIdeal {
        &self.domain
    }

    pub fn target(&self) -> &Space {
        self.op.target()
    }

    pub fn action(&self) -> &KernelOperator {
        &self.op
    }

    /// The map itself; defined only on members of the domain.
    pub fn apply(&self, x: &Element) -> Result<Element> {
        if !self.domain.contains(x)? {
            return Err(Error::NotInIdeal);
        }
        self.op.apply(x)
    }
}

/// Minimal extension `T̃(x) = sup { T(y) : y ∈ F_x ∩ D }` with `sup ∅ = 0`,
/// using the default support cap.
///
/// Positivity of `T` is sampled on exactly the member fragments used; a
/// negative value aborts with a positivity error.
pub fn minimal_extension(map: &PartialMap, x: &Element) -> Result<Element> {
    minimal_extension_with_cap(map, x, DEFAULT_SUPPORT_CAP)
}

/// [`minimal_extension`] with an explicit support cap.
pub fn minimal_extension_with_cap(
    map: &PartialMap,
    x: &Element,
    cap: usize,
) -> Result<Element> {
    if x.space() != map.domain.space() {
        return Err(map.domain.space().mismatch(x.space()));
    }
    let mut best: Option<Element> = None;
    for y in fragments_with_cap(x, cap)? {
        if !map.domain.contains(&y)? {
            continue;
        }
        let value = map.op.apply(&y)?;
        if value.values().iter().any(|v| v.is_negative()) {
            return Err(Error::NotPositive {
                detail: alloc::format!("T({y}) = {value} has a negative coordinate"),
            });
        }
        best = Some(match best {
            None => value,
            Some(acc) => acc.join(&value)?,
        });
    }
    Ok(best.unwrap_or_else(|| Element::zero(map.op.target())))
}

/// Report of [`extension_atomic_check`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtensionReport {
    /// Gate: `T(πy) = Φ(π)T(y)` held for the sampled members of `D`. When
    /// false the check is a precondition rejection, not a refutation.
    pub precondition_atomic: bool,
    pub precondition_witnesses: Vec<AtomicityWitness>,
    /// `T̃π = Φ(π)T̃` on sampled elements of the whole space.
    pub extension_atomic: bool,
    pub extension_witnesses: Vec<AtomicityWitness>,
    /// `T̃ = T` on (sampled or exhaustive) members of `D`.
    pub restriction_agrees: bool,
    pub restriction_witnesses: Vec<(Element, Element, Element)>,
    pub comparisons: usize,
}

impl ExtensionReport {
    pub fn rejected(&self) -> bool {
        !self.precondition_atomic
    }

    pub fn passed(&self) -> bool {
        self.precondition_atomic && self.extension_atomic && self.restriction_agrees
    }
}

/// Verifies that the minimal extension of an atomic positive map is atomic
/// subordinate to the same homomorphism and restricts back to the map.
pub fn extension_atomic_check(
    map: &PartialMap,
    h: &BooleanHom,
    samples: usize,
    rng: &mut SplitMix64,
    cap: usize,
) -> Result<ExtensionReport> {
    if h.source() != map.domain.space() {
        return Err(map.domain.space().mismatch(h.source()));
    }
    if h.target() != map.op.target() {
        return Err(map.op.target().mismatch(h.target()));
    }
    let mut comparisons = 0;

    // gate: atomicity of T on the domain, via singleton projections of members
    let members = match map.domain.members_if_finite(cap)? {
        Some(list) => list,
        None => map.domain.sample_members(samples, rng)?,
    };
    let mut precondition_witnesses = Vec::new();
    for y in &members {
        let ty = map.op.apply(y)?;
        for a in 0..h.source().len() {
            let carrier: BTreeSet<usize> = [a].into_iter().collect();
            let pi_y = y.restrict(&carrier)?;
            // fragments of members are members, so T is defined at πy
            let left = map.op.apply(&pi_y)?;
            let right = ty.restrict(&h.apply_set(&carrier)?)?;
            comparisons += 1;
            if left != right {
                precondition_witnesses.push(AtomicityWitness {
                    carrier,
                    element: y.clone(),
                    left,
                    right,
                });
            }
        }
    }
    if !precondition_witnesses.is_empty() {
        return Ok(ExtensionReport {
            precondition_atomic: false,
            precondition_witnesses,
            extension_atomic: false,
            extension_witnesses: Vec::new(),
            restriction_agrees: false,
            restriction_witnesses: Vec::new(),
            comparisons,
        });
    }

    // the extension is atomic: check on sampled elements and all singletons
    let mut extension_witnesses = Vec::new();
    for _ in 0..samples {
        let x = sample::random_element(rng, map.domain.space());
        let ext_x = minimal_extension_with_cap(map, &x, cap)?;
        for a in 0..h.source().len() {
            let carrier: BTreeSet<usize> = [a].into_iter().collect();
            let left = minimal_extension_with_cap(map, &x.restrict(&carrier)?, cap)?;
            let right = ext_x.restrict(&h.apply_set(&carrier)?)?;
            comparisons += 1;
            if left != right {
                extension_witnesses.push(AtomicityWitness {
                    carrier,
                    element: x.clone(),
                    left,
                    right,
                });
            }
        }
    }

    // the extension restricted to D equals T
    let mut restriction_witnesses = Vec::new();
    for y in &members {
        let ext = minimal_extension_with_cap(map, y, cap)?;
        let direct = map.op.apply(y)?;
        comparisons += 1;
        if ext != direct {
            restriction_witnesses.push((y.clone(), ext, direct));
        }
    }

    Ok(ExtensionReport {
        precondition_atomic: true,
        precondition_witnesses: Vec::new(),
        extension_atomic: extension_witnesses.is_empty(),
        extension_witnesses,
        restriction_agrees: restriction_witnesses.is_empty(),
        restriction_witnesses,
        comparisons,
    })
}
