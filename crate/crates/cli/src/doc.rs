//! Workspace documents: a line-oriented text format with named sections for
//! spaces, elements, operators, homomorphisms, superposition kernels, and
//! lateral ideals.
//!
//! ```text
//! # measure space with two points (weight ν, optional finite weight λ)
//! space E
//!   point p 1
//!   point q 2 1/2
//! end
//!
//! element x in E
//!   p 3/2
//!   q -2          # omitted points default to 0
//! end
//!
//! operator T from E to E
//!   entry p p pow(r, 2)      # source point, target point, expression
//! end
//!
//! hom H from E to E
//!   map p q                  # φ(p) = q: target point, source point
//! end
//!
//! kernel N on E
//!   p abs(r)
//! end
//!
//! ideal D in E
//!   fragments x              # or: order x y… | kernel T | explicit [x y…]
//! end
//! ```
//!
//! Expression strings follow the kernel expression grammar exactly;
//! rationals are written `p/q` or as plain integers. Cross-references may
//! appear in any order; everything is resolved after parsing, and all
//! normalization invariants are checked at load time.

use std::collections::BTreeMap;

use anyhow::{anyhow, bail, Context, Result};

use latop_core::element::Element;
use latop_core::expr;
use latop_core::lateral::{IdealKind, LateralIdeal};
use latop_core::operator::KernelOperator;
use latop_core::proj::BooleanHom;
use latop_core::rat::{parse_rat, Rat};
use latop_core::sample::SplitMix64;
use latop_core::space::Space;
use latop_core::superposition::SuperpositionKernel;

/// A fully resolved workspace document.
#[derive(Debug, Clone)]
pub struct Workspace {
    pub spaces: BTreeMap<String, Space>,
    pub elements: BTreeMap<String, Element>,
    pub operators: BTreeMap<String, KernelOperator>,
    pub homs: BTreeMap<String, BooleanHom>,
    pub kernels: BTreeMap<String, SuperpositionKernel>,
    pub ideals: BTreeMap<String, IdealSection>,
}

/// An ideal together with the operator name it references, if any (kept for
/// reporting).
#[derive(Debug, Clone)]
pub struct IdealSection {
    pub ideal: LateralIdeal,
    pub payload: String,
}

#[derive(Debug)]
struct RawBlock {
    kind: String,
    header: Vec<String>,
    line: usize,
    body: Vec<(usize, String)>,
}

/// Splits off the first `n` whitespace-separated tokens and returns them
/// with the rest of the line.
fn split_head(line: &str, n: usize) -> (Vec<&str>, &str) {
    let mut tokens = Vec::new();
    let mut rest = line.trim_start();
    for _ in 0..n {
        match rest.split_whitespace().next() {
            Some(tok) => {
                tokens.push(tok);
                rest = rest[tok.len()..].trim_start();
            }
            None => break,
        }
    }
    (tokens, rest.trim_end())
}

fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    }
}

fn parse_blocks(text: &str) -> Result<Vec<RawBlock>> {
    let mut blocks = Vec::new();
    let mut current: Option<RawBlock> = None;
    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = strip_comment(raw).trim();
        if line.is_empty() {
            continue;
        }
        if line == "end" {
            match current.take() {
                Some(block) => blocks.push(block),
                None => bail!("line {lineno}: `end` without an open section"),
            }
            continue;
        }
        match &mut current {
            Some(block) => block.body.push((lineno, line.to_string())),
            None => {
                let tokens: Vec<String> =
                    line.split_whitespace().map(|s| s.to_string()).collect();
                let kind = tokens[0].clone();
                if !matches!(
                    kind.as_str(),
                    "space" | "element" | "operator" | "hom" | "kernel" | "ideal"
                ) {
                    bail!("line {lineno}: unknown section `{kind}`");
                }
                current = Some(RawBlock {
                    kind,
                    header: tokens[1..].to_vec(),
                    line: lineno,
                    body: Vec::new(),
                });
            }
        }
    }
    if let Some(block) = current {
        bail!(
            "line {}: section `{}` is missing its `end`",
            block.line,
            block.kind
        );
    }
    Ok(blocks)
}

fn header_name(block: &RawBlock) -> Result<&str> {
    block
        .header
        .first()
        .map(|s| s.as_str())
        .ok_or_else(|| anyhow!("line {}: section needs a name", block.line))
}

/// Expects a header of the shape `NAME <kw1> A [<kw2> B]`.
fn header_refs<'a>(
    block: &'a RawBlock,
    kw1: &str,
    kw2: Option<&str>,
) -> Result<(&'a str, &'a str, Option<&'a str>)> {
    let name = header_name(block)?;
    let err = || {
        anyhow!(
            "line {}: expected `{} {name} {kw1} <name>{}`",
            block.line,
            block.kind,
            kw2.map(|k| format!(" {k} <name>")).unwrap_or_default()
        )
    };
    if block.header.len() < 3 || block.header[1] != kw1 {
        return Err(err());
    }
    let first = block.header[2].as_str();
    match kw2 {
        None => {
            if block.header.len() != 3 {
                return Err(err());
            }
            Ok((name, first, None))
        }
        Some(k2) => {
            if block.header.len() != 5 || block.header[3] != k2 {
                return Err(err());
            }
            Ok((name, first, Some(block.header[4].as_str())))
        }
    }
}

/// Parses and resolves a workspace document. The seed drives the sampled
/// closure checks run while constructing lateral ideals.
pub fn load_workspace(text: &str, seed: u64) -> Result<Workspace> {
    let blocks = parse_blocks(text)?;
    let mut ws = Workspace {
        spaces: BTreeMap::new(),
        elements: BTreeMap::new(),
        operators: BTreeMap::new(),
        homs: BTreeMap::new(),
        kernels: BTreeMap::new(),
        ideals: BTreeMap::new(),
    };

    // pass 1: spaces
    for block in blocks.iter().filter(|b| b.kind == "space") {
        let name = header_name(block)?;
        let mut points = Vec::new();
        let mut weights = Vec::new();
        let mut finite = Vec::new();
        for (lineno, line) in &block.body {
            let (tokens, rest) = split_head(line, 4);
            if tokens.len() < 3 || tokens[0] != "point" || !rest.is_empty() {
                bail!("line {lineno}: expected `point <name> <weight> [<finite-weight>]`");
            }
            points.push(tokens[1].to_string());
            let w = parse_rat(tokens[2])
                .map_err(|e| anyhow!("line {lineno}: {e}"))?;
            let fw = if tokens.len() == 4 {
                parse_rat(tokens[3]).map_err(|e| anyhow!("line {lineno}: {e}"))?
            } else {
                w.clone()
            };
            weights.push(w);
            finite.push(fw);
        }
        let space = Space::new(name, points, weights, finite)
            .map_err(|e| anyhow!("line {}: {e}", block.line))?;
        if ws.spaces.insert(name.to_string(), space).is_some() {
            bail!("line {}: duplicate space `{name}`", block.line);
        }
    }

    let get_space = |ws: &Workspace, name: &str, lineno: usize| -> Result<Space> {
        ws.spaces
            .get(name)
            .cloned()
            .ok_or_else(|| anyhow!("line {lineno}: unknown space `{name}`"))
    };

    // pass 2: elements
    for block in blocks.iter().filter(|b| b.kind == "element") {
        let (name, space_name, _) = header_refs(block, "in", None)?;
        let space = get_space(&ws, space_name, block.line)?;
        let mut values: Vec<Rat> = (0..space.len()).map(|_| Rat::from_integer(0.into())).collect();
        for (lineno, line) in &block.body {
            let (tokens, rest) = split_head(line, 2);
            if tokens.len() != 2 || !rest.is_empty() {
                bail!("line {lineno}: expected `<point> <value>`");
            }
            let idx = space
                .index_of(tokens[0])
                .ok_or_else(|| anyhow!("line {lineno}: unknown point `{}`", tokens[0]))?;
            values[idx] = parse_rat(tokens[1]).map_err(|e| anyhow!("line {lineno}: {e}"))?;
        }
        let element = Element::new(&space, values)
            .map_err(|e| anyhow!("line {}: {e}", block.line))?;
        if ws.elements.insert(name.to_string(), element).is_some() {
            bail!("line {}: duplicate element `{name}`", block.line);
        }
    }

    // pass 3: operators, kernels, homs
    for block in blocks.iter().filter(|b| b.kind == "operator") {
        let (name, src, tgt) = header_refs(block, "from", Some("to"))?;
        let source = get_space(&ws, src, block.line)?;
        let target = get_space(&ws, tgt.unwrap(), block.line)?;
        let mut kernel = BTreeMap::new();
        for (lineno, line) in &block.body {
            let (tokens, rest) = split_head(line, 3);
            if tokens.len() != 3 || tokens[0] != "entry" || rest.is_empty() {
                bail!("line {lineno}: expected `entry <src-point> <tgt-point> <expression>`");
            }
            let s = source
                .index_of(tokens[1])
                .ok_or_else(|| anyhow!("line {lineno}: unknown source point `{}`", tokens[1]))?;
            let t = target
                .index_of(tokens[2])
                .ok_or_else(|| anyhow!("line {lineno}: unknown target point `{}`", tokens[2]))?;
            let e = expr::parse(rest)
                .map_err(|e| anyhow!("line {lineno}: in expression `{rest}`: {e}"))?;
            if kernel.insert((s, t), e).is_some() {
                bail!("line {lineno}: duplicate kernel entry ({}, {})", tokens[1], tokens[2]);
            }
        }
        let op = KernelOperator::new(&source, &target, kernel)
            .map_err(|e| anyhow!("line {}: operator `{name}`: {e}", block.line))?;
        if ws.operators.insert(name.to_string(), op).is_some() {
            bail!("line {}: duplicate operator `{name}`", block.line);
        }
    }

    for block in blocks.iter().filter(|b| b.kind == "kernel") {
        let (name, space_name, _) = header_refs(block, "on", None)?;
        let space = get_space(&ws, space_name, block.line)?;
        let mut exprs: Vec<Option<latop_core::expr::Expr>> = vec![None; space.len()];
        for (lineno, line) in &block.body {
            let (tokens, rest) = split_head(line, 1);
            if tokens.len() != 1 || rest.is_empty() {
                bail!("line {lineno}: expected `<point> <expression>`");
            }
            let idx = space
                .index_of(tokens[0])
                .ok_or_else(|| anyhow!("line {lineno}: unknown point `{}`", tokens[0]))?;
            exprs[idx] = Some(
                expr::parse(rest)
                    .map_err(|e| anyhow!("line {lineno}: in expression `{rest}`: {e}"))?,
            );
        }
        let exprs: Vec<latop_core::expr::Expr> = exprs
            .into_iter()
            .map(|e| e.unwrap_or_else(latop_core::expr::Expr::zero))
            .collect();
        let kernel = SuperpositionKernel::new(&space, exprs)
            .map_err(|e| anyhow!("line {}: kernel `{name}`: {e}", block.line))?;
        if ws.kernels.insert(name.to_string(), kernel).is_some() {
            bail!("line {}: duplicate kernel `{name}`", block.line);
        }
    }

    for block in blocks.iter().filter(|b| b.kind == "hom") {
        let (name, src, tgt) = header_refs(block, "from", Some("to"))?;
        let source = get_space(&ws, src, block.line)?;
        let target = get_space(&ws, tgt.unwrap(), block.line)?;
        let mut map: Vec<Option<usize>> = vec![None; target.len()];
        for (lineno, line) in &block.body {
            let (tokens, rest) = split_head(line, 3);
            if tokens.len() != 3 || tokens[0] != "map" || !rest.is_empty() {
                bail!("line {lineno}: expected `map <target-point> <source-point>`");
            }
            let t = target
                .index_of(tokens[1])
                .ok_or_else(|| anyhow!("line {lineno}: unknown target point `{}`", tokens[1]))?;
            let s = source
                .index_of(tokens[2])
                .ok_or_else(|| anyhow!("line {lineno}: unknown source point `{}`", tokens[2]))?;
            if map[t].replace(s).is_some() {
                bail!("line {lineno}: point `{}` is mapped twice", tokens[1]);
            }
        }
        let map: Vec<usize> = map
            .into_iter()
            .enumerate()
            .map(|(t, s)| {
                s.ok_or_else(|| {
                    anyhow!(
                        "line {}: hom `{name}` leaves target point `{}` unmapped",
                        block.line,
                        target.point_name(t)
                    )
                })
            })
            .collect::<Result<_>>()?;
        let hom = BooleanHom::new(&source, &target, map)
            .map_err(|e| anyhow!("line {}: hom `{name}`: {e}", block.line))?;
        if ws.homs.insert(name.to_string(), hom).is_some() {
            bail!("line {}: duplicate hom `{name}`", block.line);
        }
    }

    // pass 4: ideals (may reference elements and operators)
    let mut rng = SplitMix64::new(seed);
    for block in blocks.iter().filter(|b| b.kind == "ideal") {
        let (name, space_name, _) = header_refs(block, "in", None)?;
        let space = get_space(&ws, space_name, block.line)?;
        if block.body.len() != 1 {
            bail!(
                "line {}: ideal `{name}` needs exactly one payload line",
                block.line
            );
        }
        let (lineno, line) = &block.body[0];
        let tokens: Vec<&str> = line.split_whitespace().collect();
        let get_element = |n: &str| -> Result<Element> {
            ws.elements
                .get(n)
                .cloned()
                .ok_or_else(|| anyhow!("line {lineno}: unknown element `{n}`"))
        };
        let kind = match tokens[0] {
            "fragments" => {
                if tokens.len() != 2 {
                    bail!("line {lineno}: expected `fragments <element>`");
                }
                IdealKind::FragmentSet {
                    anchor: get_element(tokens[1])?,
                }
            }
            "order" => {
                let generators = tokens[1..]
                    .iter()
                    .map(|n| get_element(n))
                    .collect::<Result<Vec<_>>>()?;
                if generators.is_empty() {
                    bail!("line {lineno}: `order` needs at least one generator");
                }
                IdealKind::OrderIdeal { generators }
            }
            "kernel" => {
                if tokens.len() != 2 {
                    bail!("line {lineno}: expected `kernel <operator>`");
                }
                let op = ws.operators.get(tokens[1]).cloned().ok_or_else(|| {
                    anyhow!("line {lineno}: unknown operator `{}`", tokens[1])
                })?;
                IdealKind::OperatorKernel { op }
            }
            "explicit" => {
                let members = tokens[1..]
                    .iter()
                    .map(|n| get_element(n))
                    .collect::<Result<Vec<_>>>()?;
                IdealKind::Explicit { members }
            }
            other => bail!("line {lineno}: unknown ideal kind `{other}`"),
        };
        let ideal = LateralIdeal::new(&space, kind, &mut rng)
            .map_err(|e| anyhow!("line {}: ideal `{name}`: {e}", block.line))?;
        let section = IdealSection {
            ideal,
            payload: line.clone(),
        };
        if ws.ideals.insert(name.to_string(), section).is_some() {
            bail!("line {}: duplicate ideal `{name}`", block.line);
        }
    }

    Ok(ws)
}

/// Loads a workspace from a file path.
pub fn load_workspace_file(path: &std::path::Path, seed: u64) -> Result<Workspace> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("cannot read workspace `{}`", path.display()))?;
    load_workspace(&text, seed)
}

impl Workspace {
    pub fn element(&self, name: &str) -> Result<&Element> {
        self.elements
            .get(name)
            .ok_or_else(|| anyhow!("unknown element `{name}`"))
    }

    pub fn operator(&self, name: &str) -> Result<&KernelOperator> {
        self.operators
            .get(name)
            .ok_or_else(|| anyhow!("unknown operator `{name}`"))
    }

    pub fn hom(&self, name: &str) -> Result<&BooleanHom> {
        self.homs
            .get(name)
            .ok_or_else(|| anyhow!("unknown hom `{name}`"))
    }

    pub fn kernel(&self, name: &str) -> Result<&SuperpositionKernel> {
        self.kernels
            .get(name)
            .ok_or_else(|| anyhow!("unknown kernel `{name}`"))
    }

    pub fn ideal(&self, name: &str) -> Result<&IdealSection> {
        self.ideals
            .get(name)
            .ok_or_else(|| anyhow!("unknown ideal `{name}`"))
    }
}
