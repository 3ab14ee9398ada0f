//! Subcommand implementations. Each command resolves names against a loaded
//! workspace, runs the corresponding calculus, and renders an [`Outcome`].
//!
//! Exit discipline: unresolved references, parse failures, and cap
//! violations are input errors (exit 2, raised as `Err`); a refuted
//! mathematical claim or failed precondition produces a report with a
//! witness and exit 1; everything else exits 0.

use anyhow::{bail, Result};

use latop_core::atomic::{
    band_projection, band_projection_partition_table, is_atomic_with_cap, pointwise_lattice_op,
    AtomicityMode, AtomicityReport, AtomicityWitness,
};
use latop_core::element::Element;
use latop_core::error::Error as CoreError;
use latop_core::fragments::fragments_with_cap;
use latop_core::lateral::{minimal_extension_with_cap, PartialMap};
use latop_core::operator::{brute_lattice_op_with_cap, OpLatticeKind};
use latop_core::rat::rat;
use latop_core::sample::{self, SampleGrid, SplitMix64};
use latop_core::superposition::{continuity_report, factor_atomic, ShiftOperator};

use crate::doc::Workspace;
use crate::report::{ExitClass, Outcome, ReportBuilder};

/// Flags shared by every command.
#[derive(Debug, Clone)]
pub struct GlobalOpts {
    pub seed: u64,
    pub support_cap: usize,
    pub algebra_cap: usize,
    pub partition_cap: usize,
    pub grid_points: usize,
}

impl Default for GlobalOpts {
    fn default() -> Self {
        GlobalOpts {
            seed: sample::DEFAULT_SEED,
            support_cap: latop_core::DEFAULT_SUPPORT_CAP,
            algebra_cap: latop_core::DEFAULT_ALGEBRA_CAP,
            partition_cap: latop_core::DEFAULT_PARTITION_CAP,
            grid_points: 201,
        }
    }
}

impl GlobalOpts {
    pub fn grid(&self) -> SampleGrid {
        make_grid(self.grid_points)
    }

    pub fn rng(&self) -> SplitMix64 {
        SplitMix64::new(self.seed)
    }
}

/// `n` evenly spaced rational points spanning `[−10, 10]`, zero included.
pub fn make_grid(n: usize) -> SampleGrid {
    if n <= 1 {
        return SampleGrid::from_points(vec![rat(0, 1)]);
    }
    let d = (n - 1) as i64;
    let points = (0..n as i64).map(|k| rat(20 * k - 10 * d, d)).collect();
    SampleGrid::from_points(points).with_extra([rat(0, 1)])
}

/// Mathematical precondition failures carry a witness and exit 1; all other
/// core errors are input errors.
fn classify(e: &CoreError) -> ExitClass {
    match e {
        CoreError::NotAtomic { .. }
        | CoreError::NotPositive { .. }
        | CoreError::NotIsomorphism => ExitClass::MathFailure,
        _ => ExitClass::InputError,
    }
}

/// Renders a core error either as a math-failure report or as an `Err`
/// input error.
fn core_error(command: &str, e: CoreError) -> Result<Outcome> {
    match classify(&e) {
        ExitClass::MathFailure => {
            let mut rb = ReportBuilder::new(command);
            rb.both("verdict", "refuted");
            rb.both("reason", &e);
            Ok(rb.finish(ExitClass::MathFailure))
        }
        _ => bail!("{e}"),
    }
}

fn carrier_names(space: &latop_core::space::Space, carrier: &std::collections::BTreeSet<usize>) -> String {
    if carrier.is_empty() {
        return "-".to_string();
    }
    carrier
        .iter()
        .map(|&i| space.point_name(i).to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

fn emit_witnesses(
    rb: &mut ReportBuilder,
    space: &latop_core::space::Space,
    witnesses: &[AtomicityWitness],
) {
    for (i, w) in witnesses.iter().enumerate().take(5) {
        let idx = i + 1;
        rb.kv(
            &format!("witness {idx} carrier"),
            carrier_names(space, &w.carrier),
        );
        rb.kv(&format!("witness {idx} element"), &w.element);
        rb.kv(&format!("witness {idx} left"), &w.left);
        rb.kv(&format!("witness {idx} right"), &w.right);
        rb.human(format!(
            "  witness: carrier {{{}}}, x = {}, T(πx) = {}, Φ(π)(Tx) = {}",
            carrier_names(space, &w.carrier),
            w.element,
            w.left,
            w.right
        ));
    }
}

pub fn check_atomic(
    ws: &Workspace,
    op: &str,
    hom: &str,
    mode: AtomicityMode,
    opts: &GlobalOpts,
) -> Result<Outcome> {
    let t = ws.operator(op)?;
    let h = ws.hom(hom)?;
    let grid = opts.grid();
    let report: AtomicityReport =
        match is_atomic_with_cap(t, h, mode, &grid, opts.algebra_cap) {
            Ok(r) => r,
            Err(e) => return core_error("check-atomic", e),
        };
    let mut rb = ReportBuilder::new("check-atomic");
    rb.kv("op", op);
    rb.kv("hom", hom);
    rb.kv(
        "mode",
        match mode {
            AtomicityMode::Singleton => "singleton",
            AtomicityMode::Full => "full",
        },
    );
    rb.kv("comparisons", report.comparisons);
    if report.atomic {
        rb.kv("verdict", "atomic");
        rb.human(format!("operator {op}: atomic subordinate to {hom}"));
        Ok(rb.finish(ExitClass::Success))
    } else {
        rb.kv("verdict", "not-atomic");
        rb.kv("witnesses", report.witnesses.len());
        rb.human(format!(
            "operator {op}: NOT atomic subordinate to {hom} ({} witness(es))",
            report.witnesses.len()
        ));
        emit_witnesses(&mut rb, t.source(), &report.witnesses);
        Ok(rb.finish(ExitClass::MathFailure))
    }
}

pub fn project(
    ws: &Workspace,
    op: &str,
    hom: &str,
    verify_partitions: bool,
    opts: &GlobalOpts,
) -> Result<Outcome> {
    let t = ws.operator(op)?;
    let h = ws.hom(hom)?;
    let grid = opts.grid();
    let projected = match band_projection(t, h, &grid) {
        Ok(p) => p,
        Err(e) => return core_error("project", e),
    };
    let mut rb = ReportBuilder::new("project");
    rb.kv("op", op);
    rb.kv("hom", hom);
    rb.human(format!("band projection of {op} onto the atomic band of {hom}:"));
    let mut entry_count = 0;
    for (s, tp, e) in projected.entries() {
        rb.kv(
            "entry",
            format!(
                "{} {} {e}",
                t.source().point_name(s),
                t.target().point_name(tp)
            ),
        );
        rb.human(format!(
            "  kernel[{}][{}] = {e}",
            t.source().point_name(s),
            t.target().point_name(tp)
        ));
        entry_count += 1;
    }
    rb.kv("entries", entry_count);
    if entry_count == 0 {
        rb.human("  (zero operator)");
    }

    let mut exit = ExitClass::Success;
    if verify_partitions {
        let mut rng = opts.rng();
        let elements: Vec<Element> = (0..8)
            .map(|_| sample::random_element(&mut rng, t.source()))
            .collect();
        let table = match band_projection_partition_table(
            t,
            h,
            &elements,
            opts.partition_cap,
            &grid,
        ) {
            Ok(t) => t,
            Err(e) => return core_error("project", e),
        };
        rb.kv("partitions", table.partitions);
        rb.human(format!(
            "verification against all {} set partitions of the source:",
            table.partitions
        ));
        for (i, row) in table.rows.iter().enumerate() {
            let idx = i + 1;
            rb.kv(&format!("sample {idx} element"), &row.element);
            rb.kv(&format!("sample {idx} closed"), &row.closed);
            rb.kv(&format!("sample {idx} brute"), &row.brute_min);
            rb.kv(
                &format!("sample {idx} agree"),
                if row.agree { "yes" } else { "no" },
            );
            rb.human(format!(
                "  at {}: closed {} | partition minimum {} | {}",
                row.element,
                row.closed,
                row.brute_min,
                if row.agree && row.all_dominate_closed {
                    "agree (singleton partition attains the minimum)"
                } else {
                    "MISMATCH"
                }
            ));
        }
        let ok = table.passed();
        rb.kv("verdict", if ok { "verified" } else { "refuted" });
        if !ok {
            exit = ExitClass::MathFailure;
        }
    } else {
        rb.kv("verdict", "projected");
    }
    Ok(rb.finish(exit))
}

/// Finds a hom subordinating every given operator, trying the named one
/// first when present.
fn subordinating_hom<'a>(
    ws: &'a Workspace,
    ops: &[&latop_core::operator::KernelOperator],
    named: Option<&str>,
    grid: &SampleGrid,
) -> Result<Option<(String, &'a latop_core::proj::BooleanHom)>> {
    let candidates: Vec<(String, &latop_core::proj::BooleanHom)> = match named {
        Some(name) => vec![(name.to_string(), ws.hom(name)?)],
        None => ws.homs.iter().map(|(n, h)| (n.clone(), h)).collect(),
    };
    'candidates: for (name, h) in candidates {
        for op in ops {
            if op.source() != h.source() || op.target() != h.target() {
                continue 'candidates;
            }
            match is_atomic_with_cap(op, h, AtomicityMode::Singleton, grid, usize::MAX) {
                Ok(r) if r.atomic => {}
                Ok(_) => continue 'candidates,
                Err(e) => bail!("{e}"),
            }
        }
        return Ok(Some((name, h)));
    }
    Ok(None)
}

#[allow(clippy::too_many_arguments)]
pub fn lattice(
    ws: &Workspace,
    kind: OpLatticeKind,
    op: &str,
    op2: Option<&str>,
    at: &str,
    oracle: bool,
    hom: Option<&str>,
    opts: &GlobalOpts,
) -> Result<Outcome> {
    let t = ws.operator(op)?;
    let binary = matches!(kind, OpLatticeKind::Join | OpLatticeKind::Meet);
    if binary != op2.is_some() {
        bail!(
            "`{}` takes {} operator(s)",
            kind.name(),
            if binary { "two" } else { "one" }
        );
    }
    let s = op2.map(|n| ws.operator(n)).transpose()?;
    let x = ws.element(at)?;
    let grid = opts.grid();

    let mut rb = ReportBuilder::new("lattice");
    rb.kv("kind", kind.name());
    rb.kv("op", op);
    if let Some(name) = op2 {
        rb.kv("op2", name);
    }
    rb.kv("at", at);

    let mut ops = vec![t];
    if let Some(s) = s {
        ops.push(s);
    }
    let found = subordinating_hom(ws, &ops, hom, &grid)?;

    let pointwise = match &found {
        Some((name, h)) => {
            rb.kv("hom", name);
            rb.kv("applicable", "yes");
            let pw = pointwise_lattice_op(kind, t, s, h, &grid)
                .expect("operators verified atomic");
            let value = pw.apply(x).map_err(|e| anyhow::anyhow!("{e}"))?;
            rb.kv("pointwise", &value);
            rb.human(format!(
                "pointwise {}({}{}) at {at} = {value}   [atomic subordinate to {name}]",
                kind.name(),
                op,
                op2.map(|n| format!(", {n}")).unwrap_or_default()
            ));
            Some(value)
        }
        None => {
            rb.kv("applicable", "no");
            rb.human(format!(
                "pointwise formula does not apply: operators are not atomic w.r.t. a common hom{}",
                hom.map(|h| format!(" ({h})")).unwrap_or_default()
            ));
            None
        }
    };

    let oracle_value = if oracle {
        let value = match brute_lattice_op_with_cap(kind, t, s, x, opts.support_cap) {
            Ok(v) => v,
            Err(e) => return core_error("lattice", e),
        };
        rb.kv("oracle", &value);
        rb.human(format!(
            "oracle {} at {at} = {value}   [supremum over disjoint decompositions]",
            kind.name()
        ));
        Some(value)
    } else {
        None
    };

    let exit = match (&pointwise, &oracle_value) {
        (Some(p), Some(o)) => {
            let agree = p == o;
            rb.kv("agree", if agree { "yes" } else { "no" });
            if agree {
                ExitClass::Success
            } else {
                rb.human("MISMATCH between pointwise formula and oracle");
                ExitClass::MathFailure
            }
        }
        (Some(_), None) | (None, Some(_)) => ExitClass::Success,
        (None, None) => {
            rb.kv("verdict", "inapplicable");
            rb.human("no value computed (pass --oracle for the decomposition supremum)");
            ExitClass::MathFailure
        }
    };
    Ok(rb.finish(exit))
}

pub fn factor(
    ws: &Workspace,
    op: &str,
    hom: &str,
    grid_override: Option<usize>,
    opts: &GlobalOpts,
) -> Result<Outcome> {
    let t = ws.operator(op)?;
    let h = ws.hom(hom)?;
    let grid = grid_override.map(make_grid).unwrap_or_else(|| opts.grid());
    let kernel = match factor_atomic(t, h, &grid) {
        Ok(k) => k,
        Err(e) => return core_error("factor", e),
    };
    let mut rb = ReportBuilder::new("factor");
    rb.kv("op", op);
    rb.kv("hom", hom);
    rb.kv("grid-points", grid.len());
    rb.human(format!(
        "factorization {op} = T_N ∘ S_{hom} with kernel N recovered from constants:"
    ));
    for (i, e) in kernel.exprs().iter().enumerate() {
        rb.kv(
            "kernel",
            format!("{} {e}", kernel.space().point_name(i)),
        );
        rb.human(format!("  N[{}](r) = {e}", kernel.space().point_name(i)));
    }

    // recovery agrees with T on constant elements across the grid
    let mut recovered_ok = true;
    for r in grid.points() {
        let constant = Element::constant(t.source(), r.clone());
        let image = t.apply(&constant).map_err(|e| anyhow::anyhow!("{e}"))?;
        for tp in 0..t.target().len() {
            let direct = kernel
                .expr(tp)
                .eval(r)
                .map_err(|e| anyhow::anyhow!("{e}"))?;
            if direct != *image.value(tp) {
                recovered_ok = false;
            }
        }
    }
    rb.kv("recovered-on-grid", if recovered_ok { "yes" } else { "no" });

    // round trip on sampled elements
    let shift = ShiftOperator::new(h.clone());
    let mut rng = opts.rng();
    let mut round_trip_ok = true;
    for _ in 0..8 {
        let f = sample::random_element(&mut rng, t.source());
        let direct = t.apply(&f).map_err(|e| anyhow::anyhow!("{e}"))?;
        let through = kernel
            .superpose(&shift.apply(&f).map_err(|e| anyhow::anyhow!("{e}"))?)
            .map_err(|e| anyhow::anyhow!("{e}"))?;
        if direct != through {
            round_trip_ok = false;
        }
    }
    rb.kv("round-trip", if round_trip_ok { "yes" } else { "no" });

    let continuity = continuity_report(&kernel, &grid).map_err(|e| anyhow::anyhow!("{e}"))?;
    for (point, jump) in &continuity.max_jumps {
        rb.kv(
            "max-jump",
            format!("{} {jump}", kernel.space().point_name(*point)),
        );
        rb.human(format!(
            "  continuity surrogate: max adjacent-grid jump of N[{}] is {jump}",
            kernel.space().point_name(*point)
        ));
    }

    let ok = recovered_ok && round_trip_ok;
    rb.kv("verdict", if ok { "factored" } else { "refuted" });
    rb.human(if ok {
        "round trip T f = N(·, S_Φ f(·)) verified on sampled elements"
    } else {
        "ROUND TRIP FAILED"
    });
    Ok(rb.finish(if ok {
        ExitClass::Success
    } else {
        ExitClass::MathFailure
    }))
}

pub fn extend(
    ws: &Workspace,
    map_op: &str,
    ideal: &str,
    at: &str,
    opts: &GlobalOpts,
) -> Result<Outcome> {
    let op = ws.operator(map_op)?;
    let section = ws.ideal(ideal)?;
    let x = ws.element(at)?;
    let map = PartialMap::new(section.ideal.clone(), op.clone())
        .map_err(|e| anyhow::anyhow!("{e}"))?;
    let member = section
        .ideal
        .contains(x)
        .map_err(|e| anyhow::anyhow!("{e}"))?;
    let value = match minimal_extension_with_cap(&map, x, opts.support_cap) {
        Ok(v) => v,
        Err(e) => return core_error("extend", e),
    };
    let mut rb = ReportBuilder::new("extend");
    rb.kv("map", map_op);
    rb.kv("ideal", ideal);
    rb.kv("at", at);
    rb.kv("member", if member { "yes" } else { "no" });
    rb.kv("value", &value);
    rb.human(format!(
        "minimal extension of {map_op}|{ideal} at {at} = {value}{}",
        if member { "   (x ∈ D, value = T(x))" } else { "" }
    ));
    Ok(rb.finish(ExitClass::Success))
}

pub fn fragments_cmd(ws: &Workspace, element: &str, opts: &GlobalOpts) -> Result<Outcome> {
    let x = ws.element(element)?;
    let frs = fragments_with_cap(x, opts.support_cap).map_err(|e| anyhow::anyhow!("{e}"))?;
    let mut rb = ReportBuilder::new("fragments");
    rb.kv("element", element);
    rb.kv("support", x.support().len());
    rb.kv("count", frs.len());
    rb.human(format!(
        "element {element} has {} fragment(s) over a support of {}:",
        frs.len(),
        x.support().len()
    ));
    for f in &frs {
        rb.kv("fragment", f);
        rb.human(format!("  {f}"));
    }
    Ok(rb.finish(ExitClass::Success))
}

pub fn metric(ws: &Workspace, f: &str, g: &str, _opts: &GlobalOpts) -> Result<Outcome> {
    let fe = ws.element(f)?;
    let ge = ws.element(g)?;
    let value =
        latop_core::superposition::rho_metric(fe, ge).map_err(|e| anyhow::anyhow!("{e}"))?;
    let mut rb = ReportBuilder::new("metric");
    rb.kv("f", f);
    rb.kv("g", g);
    rb.kv("value", &value);
    rb.human(format!("ρ({f}, {g}) = {value}"));
    Ok(rb.finish(ExitClass::Success))
}
