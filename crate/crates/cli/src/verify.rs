//! Property suites for `verify-all`: each suite walks the workspace objects
//! in name order, runs the applicable invariants, and emits one pass/fail
//! row per check. Sampling is seeded, so the matrix is byte-identical
//! across runs on the same document.

use anyhow::{bail, Result};

use latop_core::atomic::{
    atomic_consequences_check, band_projection_partition_table, band_projection_properties,
    is_atomic_with_cap, pointwise_lattice_op, AtomicityMode,
};
use latop_core::element::Element;
use latop_core::fragments::{boolean_isomorphism_check, fragments_with_cap};
use latop_core::lateral::{extension_atomic_check, minimal_extension_with_cap, PartialMap};
use latop_core::operator::{
    brute_lattice_op_with_cap, check_oa, positivity_on_grid, KernelOperator, OpLatticeKind,
    PositivityVerdict,
};
use latop_core::proj::BooleanHom;
use latop_core::sample;
use latop_core::superposition::{compose, factor_atomic, ShiftOperator};

use crate::commands::GlobalOpts;
use crate::doc::Workspace;
use crate::report::{CheckRow, ExitClass, Outcome, ReportBuilder, Status};

const KINDS: [OpLatticeKind; 5] = [
    OpLatticeKind::Join,
    OpLatticeKind::Meet,
    OpLatticeKind::Pos,
    OpLatticeKind::Neg,
    OpLatticeKind::Modulus,
];

pub const SUITES: [&str; 6] = [
    "lattice",
    "operators",
    "atomic",
    "projection",
    "factorization",
    "extension",
];

fn suite_lattice(ws: &Workspace, opts: &GlobalOpts) -> Result<Vec<CheckRow>> {
    let mut rows = Vec::new();
    for (name, x) in &ws.elements {
        let support = x.support().len();
        if support <= 8 {
            let report = boolean_isomorphism_check(x, 8).expect("cap checked");
            rows.push(CheckRow::of(
                "lattice",
                "boolean-isomorphism",
                name,
                report.passed(),
                format!(
                    "{} fragments, {} axiom instances",
                    report.fragment_count, report.axiom_checks
                ),
            ));
        } else {
            rows.push(CheckRow::skip(
                "lattice",
                "boolean-isomorphism",
                name,
                format!("support {support} exceeds 8"),
            ));
        }

        let identities = {
            let pos_neg = &(&x.pos() - &x.neg_part()) == x;
            let abs = &x.pos() + &x.neg_part() == x.abs();
            let disjoint = x.pos().is_disjoint(&x.neg_part()).unwrap();
            pos_neg && abs && disjoint
        };
        rows.push(CheckRow::of(
            "lattice",
            "lattice-identities",
            name,
            identities,
            "x = x⁺ − x⁻, |x| = x⁺ + x⁻, x⁺ ⊥ x⁻",
        ));

        if support <= opts.support_cap.min(10) {
            let frs = fragments_with_cap(x, opts.support_cap).expect("cap checked");
            let total = frs.len();
            let ok = frs.iter().all(|y| {
                let rest = x - y;
                y.is_disjoint(&rest).unwrap() && &(y + &rest) == x
            });
            rows.push(CheckRow::of(
                "lattice",
                "fragment-decompositions",
                name,
                ok,
                format!("{total} decompositions x = y ⊔ (x − y)"),
            ));
        } else {
            rows.push(CheckRow::skip(
                "lattice",
                "fragment-decompositions",
                name,
                format!("support {support} too large"),
            ));
        }
    }
    Ok(rows)
}

fn suite_operators(ws: &Workspace, opts: &GlobalOpts) -> Result<Vec<CheckRow>> {
    let mut rows = Vec::new();
    let grid = opts.grid();
    let mut rng = opts.rng();
    for (name, t) in &ws.operators {
        let oa = check_oa(t.source(), |x| t.apply(x), 40, &mut rng)
            .map_err(|e| anyhow::anyhow!("{e}"))?;
        rows.push(CheckRow::of(
            "operators",
            "orthogonal-additivity",
            name,
            oa.passed(),
            format!("{} disjoint pairs", oa.samples),
        ));

        if t.source().len() <= opts.support_cap {
            let mut ok = true;
            for _ in 0..5 {
                let x = sample::random_element(&mut rng, t.source());
                let tx = t.apply(&x).map_err(|e| anyhow::anyhow!("{e}"))?;
                let modulus =
                    brute_lattice_op_with_cap(OpLatticeKind::Modulus, t, None, &x, opts.support_cap)
                        .map_err(|e| anyhow::anyhow!("{e}"))?;
                if !tx.abs().le(&modulus).unwrap() {
                    ok = false;
                }
            }
            rows.push(CheckRow::of(
                "operators",
                "modulus-dominates",
                name,
                ok,
                "|Tx| ≤ |T|(x) with |T| from the decomposition oracle",
            ));
        }

        match positivity_on_grid(t, &grid).map_err(|e| anyhow::anyhow!("{e}"))? {
            PositivityVerdict::PositiveOnGrid { .. } => {
                let zero_op = KernelOperator::zero(t.source(), t.target());
                let mut ok = true;
                for _ in 0..4 {
                    let x = sample::random_element(&mut rng, t.source());
                    let join = brute_lattice_op_with_cap(
                        OpLatticeKind::Join,
                        t,
                        Some(&zero_op),
                        &x,
                        opts.support_cap,
                    )
                    .map_err(|e| anyhow::anyhow!("{e}"))?;
                    let meet = brute_lattice_op_with_cap(
                        OpLatticeKind::Meet,
                        t,
                        Some(&zero_op),
                        &x,
                        opts.support_cap,
                    )
                    .map_err(|e| anyhow::anyhow!("{e}"))?;
                    if join != t.apply(&x).unwrap() || !meet.is_zero() {
                        ok = false;
                    }
                }
                rows.push(CheckRow::of(
                    "operators",
                    "zero-reduction",
                    name,
                    ok,
                    "T ∨ 0 = T and T ∧ 0 = 0 (positive on grid)",
                ));
            }
            PositivityVerdict::Failed { .. } => {
                rows.push(CheckRow::skip(
                    "operators",
                    "zero-reduction",
                    name,
                    "not positive on grid",
                ));
            }
        }
    }
    Ok(rows)
}

/// (operator, hom) pairs with matching spaces, in name order.
fn matching_pairs(
    ws: &Workspace,
) -> Vec<(String, &KernelOperator, String, &BooleanHom)> {
    let mut out = Vec::new();
    for (op_name, t) in &ws.operators {
        for (hom_name, h) in &ws.homs {
            if t.source() == h.source() && t.target() == h.target() {
                out.push((op_name.clone(), t, hom_name.clone(), h));
            }
        }
    }
    out
}

fn suite_atomic(ws: &Workspace, opts: &GlobalOpts) -> Result<Vec<CheckRow>> {
    let mut rows = Vec::new();
    let grid = opts.grid();
    let mut rng = opts.rng();
    for (op_name, t, hom_name, h) in matching_pairs(ws) {
        let subject = format!("{op_name}/{hom_name}");
        let mode = if t.source().len() <= opts.algebra_cap {
            AtomicityMode::Full
        } else {
            AtomicityMode::Singleton
        };
        let report = is_atomic_with_cap(t, h, mode, &grid, opts.algebra_cap)
            .map_err(|e| anyhow::anyhow!("{e}"))?;
        if !report.atomic {
            rows.push(CheckRow::skip(
                "atomic",
                "subordination",
                &subject,
                format!("not atomic ({} witness(es))", report.witnesses.len()),
            ));
            continue;
        }
        rows.push(CheckRow::pass(
            "atomic",
            "subordination",
            &subject,
            format!("{} comparisons", report.comparisons),
        ));

        if t.source().len() <= opts.support_cap {
            let mut ok = true;
            for _ in 0..3 {
                let x = sample::random_element(&mut rng, t.source());
                for kind in KINDS {
                    let binary = matches!(kind, OpLatticeKind::Join | OpLatticeKind::Meet);
                    let second = binary.then_some(t);
                    let pw = pointwise_lattice_op(kind, t, second, h, &grid)
                        .map_err(|e| anyhow::anyhow!("{e}"))?;
                    let lhs = pw.apply(&x).map_err(|e| anyhow::anyhow!("{e}"))?;
                    let rhs = brute_lattice_op_with_cap(kind, t, second, &x, opts.support_cap)
                        .map_err(|e| anyhow::anyhow!("{e}"))?;
                    if lhs != rhs {
                        ok = false;
                    }
                }
            }
            rows.push(CheckRow::of(
                "atomic",
                "oracle-equivalence",
                &subject,
                ok,
                "pointwise formulas equal the decomposition oracle",
            ));
        }

        let consequences =
            atomic_consequences_check(t, 40, &mut rng).map_err(|e| anyhow::anyhow!("{e}"))?;
        rows.push(CheckRow::of(
            "atomic",
            "consequences",
            &subject,
            consequences.passed(),
            "disjointness and fragment preservation",
        ));
    }
    Ok(rows)
}

fn suite_projection(ws: &Workspace, opts: &GlobalOpts) -> Result<Vec<CheckRow>> {
    let mut rows = Vec::new();
    let grid = opts.grid();
    let mut rng = opts.rng();
    for (op_name, t, hom_name, h) in matching_pairs(ws) {
        let subject = format!("{op_name}/{hom_name}");
        match positivity_on_grid(t, &grid).map_err(|e| anyhow::anyhow!("{e}"))? {
            PositivityVerdict::Failed { .. } => {
                rows.push(CheckRow::skip(
                    "projection",
                    "partition-minimum",
                    &subject,
                    "not positive on grid",
                ));
                continue;
            }
            PositivityVerdict::PositiveOnGrid { .. } => {}
        }
        let elements: Vec<Element> = (0..6)
            .map(|_| sample::random_element(&mut rng, t.source()))
            .collect();
        if t.source().len() <= opts.partition_cap {
            let table =
                band_projection_partition_table(t, h, &elements, opts.partition_cap, &grid)
                    .map_err(|e| anyhow::anyhow!("{e}"))?;
            rows.push(CheckRow::of(
                "projection",
                "partition-minimum",
                &subject,
                table.passed(),
                format!("{} set partitions", table.partitions),
            ));
        } else {
            rows.push(CheckRow::skip(
                "projection",
                "partition-minimum",
                &subject,
                "source exceeds the partition cap",
            ));
        }
        let props = band_projection_properties(t, t, h, &elements, &grid)
            .map_err(|e| anyhow::anyhow!("{e}"))?;
        rows.push(CheckRow::of(
            "projection",
            "projection-properties",
            &subject,
            props.passed(),
            "0 ≤ R(T) ≤ T, additive, idempotent, fixed iff atomic",
        ));
    }
    Ok(rows)
}

fn suite_factorization(ws: &Workspace, opts: &GlobalOpts) -> Result<Vec<CheckRow>> {
    let mut rows = Vec::new();
    let grid = opts.grid();
    let mut rng = opts.rng();
    for (kernel_name, n) in &ws.kernels {
        for (hom_name, h) in &ws.homs {
            if n.space() != h.target() || !h.is_isomorphism() {
                continue;
            }
            let subject = format!("{kernel_name}/{hom_name}");
            let composite = compose(n, h).map_err(|e| anyhow::anyhow!("{e}"))?;
            let atomic = is_atomic_with_cap(
                &composite,
                h,
                AtomicityMode::Singleton,
                &grid,
                opts.algebra_cap,
            )
            .map_err(|e| anyhow::anyhow!("{e}"))?;
            rows.push(CheckRow::of(
                "factorization",
                "composite-atomic",
                &subject,
                atomic.atomic,
                "T_N ∘ S_Φ is atomic subordinate to Φ",
            ));
            let recovered =
                factor_atomic(&composite, h, &grid).map_err(|e| anyhow::anyhow!("{e}"))?;
            let shift = ShiftOperator::new(h.clone());
            let mut ok = true;
            for _ in 0..6 {
                let f = sample::random_element(&mut rng, h.source());
                let direct = composite.apply(&f).map_err(|e| anyhow::anyhow!("{e}"))?;
                let through = recovered
                    .superpose(&shift.apply(&f).map_err(|e| anyhow::anyhow!("{e}"))?)
                    .map_err(|e| anyhow::anyhow!("{e}"))?;
                if direct != through {
                    ok = false;
                }
            }
            rows.push(CheckRow::of(
                "factorization",
                "factor-round-trip",
                &subject,
                ok,
                "recovered kernel reproduces the composite",
            ));
        }
    }
    for (op_name, t, hom_name, h) in matching_pairs(ws) {
        if !h.is_isomorphism() {
            continue;
        }
        let subject = format!("{op_name}/{hom_name}");
        let atomic = is_atomic_with_cap(t, h, AtomicityMode::Singleton, &grid, opts.algebra_cap)
            .map_err(|e| anyhow::anyhow!("{e}"))?;
        if !atomic.atomic {
            rows.push(CheckRow::skip(
                "factorization",
                "factor-contract",
                &subject,
                "not atomic",
            ));
            continue;
        }
        let kernel = factor_atomic(t, h, &grid).map_err(|e| anyhow::anyhow!("{e}"))?;
        let shift = ShiftOperator::new(h.clone());
        let mut ok = true;
        for _ in 0..6 {
            let f = sample::random_element(&mut rng, t.source());
            let direct = t.apply(&f).map_err(|e| anyhow::anyhow!("{e}"))?;
            let through = kernel
                .superpose(&shift.apply(&f).map_err(|e| anyhow::anyhow!("{e}"))?)
                .map_err(|e| anyhow::anyhow!("{e}"))?;
            if direct != through {
                ok = false;
            }
        }
        rows.push(CheckRow::of(
            "factorization",
            "factor-contract",
            &subject,
            ok,
            "T f = N(·, S_Φ f(·)) on sampled elements",
        ));
    }
    Ok(rows)
}

fn suite_extension(ws: &Workspace, opts: &GlobalOpts) -> Result<Vec<CheckRow>> {
    let mut rows = Vec::new();
    let grid = opts.grid();
    let mut rng = opts.rng();
    for (ideal_name, section) in &ws.ideals {
        for (op_name, t) in &ws.operators {
            if t.source() != section.ideal.space() {
                continue;
            }
            let subject = format!("{ideal_name}/{op_name}");
            if !positivity_on_grid(t, &grid)
                .map_err(|e| anyhow::anyhow!("{e}"))?
                .is_positive()
            {
                rows.push(CheckRow::skip(
                    "extension",
                    "extension-agrees",
                    &subject,
                    "map not positive on grid",
                ));
                continue;
            }
            let map = PartialMap::new(section.ideal.clone(), t.clone())
                .map_err(|e| anyhow::anyhow!("{e}"))?;

            let members = match section
                .ideal
                .members_if_finite(10)
                .map_err(|e| anyhow::anyhow!("{e}"))?
            {
                Some(list) => list,
                None => section
                    .ideal
                    .sample_members(8, &mut rng)
                    .map_err(|e| anyhow::anyhow!("{e}"))?,
            };
            let mut agrees = true;
            for y in &members {
                let ext = minimal_extension_with_cap(&map, y, opts.support_cap)
                    .map_err(|e| anyhow::anyhow!("{e}"))?;
                if ext != t.apply(y).unwrap() {
                    agrees = false;
                }
            }
            rows.push(CheckRow::of(
                "extension",
                "extension-agrees",
                &subject,
                agrees,
                format!("T̃ = T on {} member(s)", members.len()),
            ));

            let oa = check_oa(
                t.source(),
                |x| minimal_extension_with_cap(&map, x, opts.support_cap),
                25,
                &mut rng,
            )
            .map_err(|e| anyhow::anyhow!("{e}"))?;
            rows.push(CheckRow::of(
                "extension",
                "extension-oa",
                &subject,
                oa.passed(),
                format!("{} disjoint pairs", oa.samples),
            ));

            for (hom_name, h) in &ws.homs {
                if h.source() != t.source() || h.target() != t.target() {
                    continue;
                }
                let hsubject = format!("{ideal_name}/{op_name}/{hom_name}");
                let report =
                    extension_atomic_check(&map, h, 8, &mut rng, opts.support_cap)
                        .map_err(|e| anyhow::anyhow!("{e}"))?;
                if report.rejected() {
                    rows.push(CheckRow::skip(
                        "extension",
                        "extension-atomicity",
                        &hsubject,
                        "map is not atomic on the ideal",
                    ));
                } else {
                    rows.push(CheckRow::of(
                        "extension",
                        "extension-atomicity",
                        &hsubject,
                        report.passed(),
                        "T̃π = Φ(π)T̃ and T̃|D = T",
                    ));
                }
            }
        }
    }
    Ok(rows)
}

/// Runs one suite (or all of them) and renders the pass/fail matrix.
pub fn verify_all(ws: &Workspace, suite: &str, opts: &GlobalOpts) -> Result<Outcome> {
    let selected: Vec<&str> = match suite {
        "all" => SUITES.to_vec(),
        s if SUITES.contains(&s) => vec![s],
        other => bail!(
            "unknown suite `{other}` (expected one of: all, {})",
            SUITES.join(", ")
        ),
    };
    let mut rows = Vec::new();
    for s in &selected {
        let mut batch = match *s {
            "lattice" => suite_lattice(ws, opts)?,
            "operators" => suite_operators(ws, opts)?,
            "atomic" => suite_atomic(ws, opts)?,
            "projection" => suite_projection(ws, opts)?,
            "factorization" => suite_factorization(ws, opts)?,
            "extension" => suite_extension(ws, opts)?,
            _ => unreachable!(),
        };
        rows.append(&mut batch);
    }

    let failures = rows.iter().filter(|r| r.status == Status::Fail).count();
    let mut rb = ReportBuilder::new("verify-all");
    rb.kv("suite", suite);

    let width_check = rows.iter().map(|r| r.check.len()).max().unwrap_or(0);
    let width_subject = rows.iter().map(|r| r.subject.len()).max().unwrap_or(0);
    for r in &rows {
        rb.kv(
            "row",
            format!("{} {} {} {} {}", r.suite, r.check, r.subject, r.status, r.detail),
        );
        rb.human(format!(
            "[{:>4}] {:<13} {:<width_check$}  {:<width_subject$}  {}",
            r.status.to_string(),
            r.suite,
            r.check,
            r.subject,
            r.detail,
        ));
    }
    rb.kv("rows", rows.len());
    rb.kv("failures", failures);
    let verdict = if failures == 0 { "pass" } else { "fail" };
    rb.kv("verdict", verdict);
    rb.human(format!(
        "{} row(s), {failures} failure(s): {verdict}",
        rows.len()
    ));
    Ok(rb.finish(if failures == 0 {
        ExitClass::Success
    } else {
        ExitClass::MathFailure
    }))
}
