//! Superposition operators, shift operators induced by Boolean
//! homomorphisms, the convergence-in-measure metric, and the factorization
//! of atomic operators through a shift.
//!
//! A [`SuperpositionKernel`] is a diagonal kernel `N(t, r)` with
//! `N(t, 0) = 0`; it acts pointwise, `(T_N f)(t) = N(t, f(t))`. A
//! [`ShiftOperator`] relabels coordinates along the point map of a Boolean
//! homomorphism, `(S_Φ f)(t) = f(φ(t))`; every element of a finite model is
//! a simple function, so this single formula is the whole construction.
//!
//! [`factor_atomic`] recovers, for an atomic operator `T` subordinate to an
//! isomorphism `Φ`, the kernel `N̂(t, r) = (T(r·1))(t)` and with it the
//! factorization `T = T_N̂ ∘ S_Φ`, exact on every element.

use alloc::string::ToString;
use alloc::vec::Vec;

use num_traits::{One, Signed, Zero};

use crate::atomic::{is_atomic, AtomicityMode};
use crate::element::Element;
use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::operator::KernelOperator;
use crate::proj::BooleanHom;
use crate::rat::Rat;
use crate::sample::SampleGrid;
use crate::space::Space;

/// Diagonal kernel `N(t, ·)`, one expression per point, vanishing at zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuperpositionKernel {
    space: Space,
    exprs: Vec<Expr>,
}

impl SuperpositionKernel {
    /// Checks the normalization `N(t, 0) = 0` for every point.
    pub fn new(space: &Space, exprs: Vec<Expr>) -> Result<Self> {
        if exprs.len() != space.len() {
            return Err(Error::ValueCountMismatch {
                space: space.name().to_string(),
                expected: space.len(),
                got: exprs.len(),
            });
        }
        let zero = Rat::zero();
        for (i, e) in exprs.iter().enumerate() {
            let v = e.eval(&zero)?;
            if !v.is_zero() {
                return Err(Error::KernelNotNormalized {
                    source_point: space.point_name(i).to_string(),
                    target_point: space.point_name(i).to_string(),
                    value: alloc::format!("{v}"),
                });
            }
        }
        Ok(SuperpositionKernel {
            space: space.clone(),
            exprs,
        })
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn expr(&self, point: usize) -> &Expr {
        &self.exprs[point]
    }

    pub fn exprs(&self) -> &[Expr] {
        &self.exprs
    }

    /// `(T_N f)(t) = N(t, f(t))`, exact.
    pub fn superpose(&self, f: &Element) -> Result<Element> {
        if *f.space() != self.space {
            return Err(self.space.mismatch(f.space()));
        }
        let values = self
            .exprs
            .iter()
            .zip(f.values())
            .map(|(e, v)| e.eval(v))
            .collect::<Result<Vec<Rat>>>()?;
        Element::new(&self.space, values)
    }
}

/// Linear shift operator `S_Φ : ℚ^source → ℚ^target` acting by coordinate
/// relabeling along the point map.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShiftOperator {
    hom: BooleanHom,
}

impl ShiftOperator {
    pub fn new(hom: BooleanHom) -> Self {
        ShiftOperator { hom }
    }

    pub fn hom(&self) -> &BooleanHom {
        &self.hom
    }

    /// `(S_Φ f)(t) = f(φ(t))`.
    pub fn apply(&self, f: &Element) -> Result<Element> {
        if *f.space() != *self.hom.source() {
            return Err(self.hom.source().mismatch(f.space()));
        }
        let values = (0..self.hom.target().len())
            .map(|t| f.value(self.hom.preimage_point(t)).clone())
            .collect();
        Element::new(self.hom.target(), values)
    }

    /// `S_Φ⁻¹ = S_{Φ⁻¹}`, defined when the point map is a bijection.
    pub fn inverse(&self) -> Option<ShiftOperator> {
        self.hom.inverse().map(ShiftOperator::new)
    }
}

/// Convergence-in-measure metric
/// `ρ(f, g) = Σ_t λ_t · |f_t − g_t| / (1 + |f_t − g_t|)`, exact.
pub fn rho_metric(f: &Element, g: &Element) -> Result<Rat> {
    if f.space() != g.space() {
        return Err(f.space().mismatch(g.space()));
    }
    let mut total = Rat::zero();
    for t in 0..f.space().len() {
        let d = (f.value(t) - g.value(t)).abs();
        total += f.space().finite_weight(t) * &d / (Rat::one() + &d);
    }
    Ok(total)
}

/// The composite `T_N ∘ S_Φ` as a kernel operator:
/// `(T f)(t) = N(t, f(φ(t)))`, so the kernel is supported on `(φ(t), t)`.
pub fn compose(n: &SuperpositionKernel, h: &BooleanHom) -> Result<KernelOperator> {
    if n.space() != h.target() {
        return Err(n.space().mismatch(h.target()));
    }
    let kernel = (0..h.target().len())
        .map(|t| ((h.preimage_point(t), t), n.expr(t).clone()))
        .collect();
    KernelOperator::new(h.source(), h.target(), kernel)
}

/// Recovers the superposition kernel of an atomic operator subordinate to an
/// isomorphism: `N̂(t, r) = (T(r·1))(t)`, read off symbolically as the sum of
/// the kernel column of `t` (constant elements feed `r` into every source
/// point). The contract `T f = T_N̂(S_Φ f)` then holds exactly on every
/// element.
pub fn factor_atomic(
    t: &KernelOperator,
    h: &BooleanHom,
    grid: &SampleGrid,
) -> Result<SuperpositionKernel> {
    if !h.is_isomorphism() {
        return Err(Error::NotIsomorphism);
    }
    let report = is_atomic(t, h, AtomicityMode::Singleton, grid)?;
    if !report.atomic {
        return Err(Error::NotAtomic {
            witnesses: report.witnesses.len(),
        });
    }
    let mut exprs: Vec<Expr> = Vec::with_capacity(t.target().len());
    for tp in 0..t.target().len() {
        let mut column = t
            .entries()
            .filter(|&(_, t2, _)| t2 == tp)
            .map(|(_, _, e)| e.clone());
        let first = column.next();
        let folded = match first {
            None => Expr::zero(),
            Some(mut acc) => {
                for e in column {
                    acc = Expr::add(acc, e);
                }
                acc
            }
        };
        exprs.push(folded);
    }
    SuperpositionKernel::new(t.target(), exprs)
}

/// Largest jump of each recovered kernel between adjacent grid points:
/// a dense-sampling surrogate for continuity in the second argument,
/// reported rather than proved.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContinuityReport {
    /// `(point, max |N(t, r_{i+1}) − N(t, r_i)|)` over the sorted grid.
    pub max_jumps: Vec<(usize, Rat)>,
}

pub fn continuity_report(n: &SuperpositionKernel, grid: &SampleGrid) -> Result<ContinuityReport> {
    let mut sorted: Vec<Rat> = grid.points().to_vec();
    sorted.sort();
    let mut max_jumps = Vec::with_capacity(n.space().len());
    for (i, e) in n.exprs().iter().enumerate() {
        let mut max_jump = Rat::zero();
        for w in sorted.windows(2) {
            let jump = (e.eval(&w[1])? - e.eval(&w[0])?).abs();
            if jump > max_jump {
                max_jump = jump;
            }
        }
        max_jumps.push((i, max_jump));
    }
    Ok(ContinuityReport { max_jumps })
}
