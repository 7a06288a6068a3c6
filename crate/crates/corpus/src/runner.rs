//! Turn a parsed scenario into engine structures, run it, and attach the
//! property gates. Every mode produces a `RunReport` (plus chart data for
//! spectral sequence runs).

use crate::expr::Expr;
use crate::report::{ChartPage, Gates, PageJson, RunReport, Status};
use crate::scenario::{
    AlgebraDef, Expected, GenKind, Mode, PermanentKind, Scenario, SeedGroup,
};
use algebra::bar::{dims_table, hh_dims};
use algebra::dga::{DgaHomology, Differential};
use algebra::{Bidegree, Element, GeneratorSpec, Hom, Kind, Presentation, PresentationBuilder, Window};
use fp::PrimeField;
use sseq::{compare_dim_tables, detect, Annotation, PermanentReason, RunSpec, Seed, Stage};
use std::collections::BTreeMap;

#[derive(Debug)]
pub struct ScenarioError(pub String);

impl std::fmt::Display for ScenarioError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl std::error::Error for ScenarioError {}

fn oops<T>(msg: impl Into<String>) -> Result<T, ScenarioError> {
    Err(ScenarioError(msg.into()))
}

/// Build a presentation from a scenario algebra block.
pub fn build_presentation(
    field: PrimeField,
    def: &AlgebraDef,
    window: Window,
    level: usize,
) -> Result<Presentation, ScenarioError> {
    let mut builder = PresentationBuilder::new(field, window);
    for g in &def.gens {
        let kind = match g.kind {
            GenKind::Poly => Kind::Polynomial,
            GenKind::Ext => Kind::Exterior,
            GenKind::Dpow => Kind::DividedPower,
            GenKind::Bounded(h) => Kind::Bounded(h),
        };
        if matches!(g.kind, GenKind::Dpow) && g.image.is_some() {
            return oops(format!(
                "algebra {}: divided power generator `{}` cannot carry an image; list its family explicitly",
                def.id, g.name
            ));
        }
        builder.add_gen(GeneratorSpec::new(&g.name, g.n, g.w, kind));
    }
    for prefix in &def.seps {
        for i in 0..level {
            let name = format!("{prefix}{i}");
            builder.add_gen(GeneratorSpec::new(&name, 0, 0, Kind::Bounded(field.p() as u16)));
            builder.add_rule(&name, field.p() as u16, vec![(1, vec![(name.clone(), 1)])]);
        }
    }
    for r in &def.rules {
        let rhs = expr_to_rule_terms(&r.rhs)?;
        builder.add_rule(&r.gen, r.power, rhs);
    }
    builder.build().map_err(|e| ScenarioError(format!("algebra {}: {e}", def.id)))
}

/// Rules need syntactic (coeff, monomial) terms rather than evaluated
/// elements, since the presentation does not exist yet.
fn expr_to_rule_terms(expr: &Expr) -> Result<Vec<(i64, Vec<(String, u16)>)>, ScenarioError> {
    use crate::expr::Atom;
    let mut out = Vec::new();
    for term in &expr.terms {
        let mut coeff = 1i64;
        let mut mono: Vec<(String, u16)> = Vec::new();
        for factor in term {
            match &factor.atom {
                Atom::Num(c) => coeff *= c.pow(factor.power),
                Atom::Gen(name) => mono.push((name.clone(), factor.power as u16)),
                Atom::DGen(name) => {
                    return oops(format!("d({name}) cannot appear in a rewrite rule"))
                }
            }
        }
        out.push((coeff, mono));
    }
    Ok(out)
}

/// Deterministic pair/triple sampling gates for commutativity and
/// associativity, seeded by the scenario name.
fn comm_assoc_gate(pres: &Presentation, window: Window, name: &str) -> (bool, bool) {
    let mut monomials = Vec::new();
    for bd in window.iter() {
        if monomials.len() >= 400 {
            break;
        }
        monomials.extend(pres.basis_at(bd));
    }
    if monomials.is_empty() {
        return (true, true);
    }
    let mut state: u64 = 0x9e37_79b9_7f4a_7c15;
    for b in name.bytes() {
        state = state.wrapping_mul(31).wrapping_add(b as u64) | 1;
    }
    let mut step = || {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        state as usize
    };
    let mut comm_ok = true;
    let mut assoc_ok = true;
    for _ in 0..1000 {
        let a = algebra::Element::from_monomial(monomials[step() % monomials.len()].clone());
        let b = algebra::Element::from_monomial(monomials[step() % monomials.len()].clone());
        let c = algebra::Element::from_monomial(monomials[step() % monomials.len()].clone());
        let na = pres.element_bidegree(&a).unwrap().unwrap().n;
        let nb = pres.element_bidegree(&b).unwrap().unwrap().n;
        let ab = pres.mul(&a, &b);
        let ba = pres.mul(&b, &a);
        let sign = if na & 1 == 1 && nb & 1 == 1 { -1 } else { 1 };
        if ab != pres.scale(&ba, sign) {
            comm_ok = false;
        }
        if pres.mul(&ab, &c) != pres.mul(&a, &pres.mul(&b, &c)) {
            assoc_ok = false;
        }
    }
    (comm_ok, assoc_ok)
}

pub struct Outcome {
    pub report: RunReport,
    pub charts: Vec<ChartPage>,
    /// Where the mutation harness bumped the expected table, if it ran.
    pub mutated: Option<Bidegree>,
}

pub fn run_scenario(s: &Scenario, level_override: Option<usize>) -> Outcome {
    run_scenario_opts(s, level_override, false)
}

/// Run a scenario; with `mutate` set, the expected dimension table is bumped
/// by one at its first nonzero entry, which must flip the verdict to FAIL at
/// exactly that bidegree (the negative control of the corpus).
pub fn run_scenario_opts(s: &Scenario, level_override: Option<usize>, mutate: bool) -> Outcome {
    let started = std::time::Instant::now();
    let level = level_override.unwrap_or(s.level);
    match run_scenario_inner(s, level, mutate) {
        Ok(mut outcome) => {
            outcome.report.total_ms = started.elapsed().as_millis() as u64;
            outcome
        }
        Err(e) => Outcome {
            report: RunReport {
                scenario: s.name.clone(),
                status: Status::Error,
                pages: Vec::new(),
                mismatches: vec![e.to_string()],
                gates: Gates::default(),
                total_ms: started.elapsed().as_millis() as u64,
            },
            charts: Vec::new(),
            mutated: None,
        },
    }
}

fn run_scenario_inner(
    s: &Scenario,
    level: usize,
    mutate: bool,
) -> Result<Outcome, ScenarioError> {
    let field = PrimeField::new(s.prime).map_err(|e| ScenarioError(e.to_string()))?;
    match s.mode {
        Mode::Sseq => run_sseq(s, field, level, mutate),
        Mode::Cdga => run_cdga(s, field, level, mutate),
        Mode::Hh => run_hh(s, field, level, mutate),
        Mode::Hom => run_hom(s, field, level, mutate),
    }
}

/// Bump the first nonzero entry of an expected table; returns the bidegree.
fn bump_first(table: &mut BTreeMap<Bidegree, usize>) -> Option<Bidegree> {
    let bd = *table.iter().find(|(_, &d)| d > 0)?.0;
    *table.get_mut(&bd).unwrap() += 1;
    Some(bd)
}

fn resolve_seeds(
    pres: &Presentation,
    group: &SeedGroup,
) -> Result<Vec<Seed>, ScenarioError> {
    let mut out = Vec::new();
    for seed in &group.seeds {
        let gen = pres.gen_index(&seed.gen).ok_or_else(|| {
            ScenarioError(format!("seeds[{}]: unknown generator after expansion", seed.gen))
        })?;
        let target = seed
            .target
            .eval_element(pres)
            .map_err(|e| ScenarioError(format!("seeds[{}]: {e}", seed.gen)))?;
        out.push(Seed { gen, target, note: seed.note.clone() });
    }
    Ok(out)
}

/// Images for a stage or expected algebra: explicit expressions, or identity
/// by name when the source presentation has a generator of the same name.
fn resolve_images(
    def: &AlgebraDef,
    pres: &Presentation,
    source: &Presentation,
) -> Result<Vec<Element>, ScenarioError> {
    let mut by_name: BTreeMap<&str, &Expr> = BTreeMap::new();
    for g in &def.gens {
        if let Some(img) = &g.image {
            by_name.insert(g.name.as_str(), img);
        }
    }
    let mut out = Vec::new();
    for g in pres.gens() {
        match by_name.get(g.name.as_str()) {
            Some(expr) => out.push(
                expr.eval_element(source)
                    .map_err(|e| ScenarioError(format!("image of `{}`: {e}", g.name)))?,
            ),
            None => match source.gen_index(&g.name) {
                Some(idx) => out.push(source.gen_element(idx)),
                None => {
                    return oops(format!(
                        "algebra {}: generator `{}` has no image and no namesake in the source",
                        def.id, g.name
                    ))
                }
            },
        }
    }
    Ok(out)
}

fn run_sseq(
    s: &Scenario,
    field: PrimeField,
    level: usize,
    mutate: bool,
) -> Result<Outcome, ScenarioError> {
    // Stage chain: seed groups in declaration order; the first group's
    // algebra is E1. A scenario without seeds runs one degenerate stage on
    // the first declared algebra.
    let expected_id = match &s.expected {
        Some(Expected::Algebra { id, .. }) | Some(Expected::Homology { id }) => Some(id.clone()),
        None => None,
    };
    let e1_def = match s.seed_groups.first() {
        Some(g) => s
            .algebra(&g.algebra)
            .ok_or_else(|| ScenarioError(format!("unknown algebra `{}`", g.algebra)))?,
        None => s
            .algebras
            .iter()
            .find(|a| a.from.is_none() && Some(&a.id) != expected_id.as_ref())
            .ok_or_else(|| ScenarioError("no algebra to run".into()))?,
    };
    let e1 = build_presentation(field, e1_def, s.window, level)?;

    let mut stages: Vec<Stage> = Vec::new();
    let mut built: Vec<(String, Presentation)> = Vec::new();
    if s.seed_groups.is_empty() {
        stages.push(Stage { pres: e1, images: None, jump: 1, seeds: vec![] });
        built.push((e1_def.id.clone(), build_presentation(field, e1_def, s.window, level)?));
    } else {
        for (i, group) in s.seed_groups.iter().enumerate() {
            let def = s
                .algebra(&group.algebra)
                .ok_or_else(|| ScenarioError(format!("unknown algebra `{}`", group.algebra)))?;
            let pres = build_presentation(field, def, s.window, level)?;
            let images = if i == 0 {
                if def.from.is_some() {
                    return oops(format!("algebra {}: the E1 algebra cannot have `from`", def.id));
                }
                None
            } else {
                let parent = def.from.as_deref().ok_or_else(|| {
                    ScenarioError(format!(
                        "algebra {}: later stages need `from <previous>`",
                        def.id
                    ))
                })?;
                if parent != built[i - 1].0 {
                    return oops(format!(
                        "algebra {}: `from {parent}` does not match the previous stage `{}`",
                        def.id,
                        built[i - 1].0
                    ));
                }
                Some(resolve_images(def, &pres, &built[i - 1].1)?)
            };
            let seeds = resolve_seeds(&pres, group)?;
            stages.push(Stage { pres, images, jump: group.jump, seeds });
            built.push((def.id.clone(), build_presentation(field, def, s.window, level)?));
        }
    }

    // Annotations evaluate in E1.
    let mut annotations = Vec::new();
    for p in &s.permanents {
        let reason = match &p.reason {
            PermanentKind::Unit => PermanentReason::ImageOfUnit,
            PermanentKind::PthPower(expr) => PermanentReason::PthPower {
                root: expr
                    .eval_element(&stages[0].pres)
                    .map_err(|e| ScenarioError(format!("permanent at {}: {e}", p.bd)))?,
            },
        };
        annotations.push(Annotation { bd: p.bd, reason, note: p.note.clone() });
    }

    // Final-page generating set: the expected generator images for a
    // single-stage detection run, or the scenario's page generators.
    let mut final_gens: Option<Vec<Element>> = None;
    if let Some(exprs) = &s.pagegens {
        let last = &stages.last().unwrap().pres;
        let mut els = Vec::new();
        for e in exprs {
            els.push(
                e.eval_element(last)
                    .map_err(|e| ScenarioError(format!("pagegens: {e}")))?,
            );
        }
        final_gens = Some(els);
    } else if stages.len() == 1 {
        if let Some(Expected::Algebra { id, images, .. }) = &s.expected {
            let def = s.algebra(id).unwrap();
            let pres = build_presentation(field, def, s.window, level)?;
            let e1 = &stages[0].pres;
            let mut by_name: BTreeMap<&str, &Expr> = BTreeMap::new();
            for (g, expr) in images {
                by_name.insert(g.as_str(), expr);
            }
            let mut els = Vec::new();
            let mut ok = true;
            for g in pres.gens() {
                match by_name.get(g.name.as_str()) {
                    Some(expr) => els.push(
                        expr.eval_element(e1)
                            .map_err(|e| ScenarioError(format!("images[{}]: {e}", g.name)))?,
                    ),
                    None => match e1.gen_index(&g.name) {
                        Some(idx) => els.push(e1.gen_element(idx)),
                        None => ok = false,
                    },
                }
            }
            if ok {
                final_gens = Some(els);
            }
        }
    }

    let spec = RunSpec { stages, window: s.window, annotations, final_gens };
    let run = sseq::run(&spec).map_err(|e| ScenarioError(e.to_string()))?;

    // With explicit page generators, verify that their products span the
    // final page on the window; the Leibniz stability argument needs it.
    let mut pagegen_span_fail: Vec<String> = Vec::new();
    if s.pagegens.is_some() {
        if let Some(els) = &run.final_gen_elements {
            pagegen_span_fail = verify_pagegen_span(&run, els);
        }
    }

    let (comm_ok, assoc_ok) = comm_assoc_gate(&spec.stages[0].pres, s.window, &s.name);
    let mut mismatches: Vec<String> = Vec::new();
    let mut detection_pass = true;
    let mut mutated = None;

    match &s.expected {
        Some(Expected::Algebra { id, images, full }) => {
            let def = s
                .algebra(id)
                .ok_or_else(|| ScenarioError(format!("unknown expected algebra `{id}`")))?;
            let pres = build_presentation(field, def, s.window, level)?;
            // Dimension comparison against the expanded expected table, which
            // is the surface the mutation harness perturbs.
            let mut table = dims_table(&pres, s.window);
            if mutate {
                mutated = bump_first(&mut table);
            }
            for (bd, got, want) in compare_dim_tables(&run.final_dims, &table) {
                mismatches.push(format!("dim mismatch at {bd}: run has {got}, expected {want}"));
                detection_pass = false;
            }
            let e1 = &spec.stages[0].pres;
            let mut by_name: BTreeMap<&str, &Expr> = BTreeMap::new();
            for (g, expr) in images {
                by_name.insert(g.as_str(), expr);
            }
            let mut image_elems = Vec::new();
            for g in pres.gens() {
                match by_name.get(g.name.as_str()) {
                    Some(expr) => image_elems.push(
                        expr.eval_element(e1)
                            .map_err(|e| ScenarioError(format!("images[{}]: {e}", g.name)))?,
                    ),
                    None => match e1.gen_index(&g.name) {
                        Some(idx) => image_elems.push(e1.gen_element(idx)),
                        None => {
                            return oops(format!(
                                "images: expected generator `{}` has no image",
                                g.name
                            ))
                        }
                    },
                }
            }
            let det = detect(&run, &pres, Some(&image_elems), *full);
            detection_pass &= det.pass;
            mismatches.extend(det.describe());
        }
        Some(Expected::Homology { id }) => {
            let def = s
                .algebra(id)
                .ok_or_else(|| ScenarioError(format!("unknown expected algebra `{id}`")))?;
            let pres = build_presentation(field, def, s.window, level)?;
            let group = s
                .seed_groups
                .iter()
                .find(|g| g.algebra == *id)
                .ok_or_else(|| ScenarioError(format!("expected homology `{id}` has no seeds")))?;
            let seeds = resolve_seeds(&pres, group)?;
            let mut d = Differential::zero(&pres, group.jump);
            for seed in seeds {
                d.values[seed.gen] = seed.target;
            }
            d.validate(&pres).map_err(|e| ScenarioError(e.to_string()))?;
            let h = DgaHomology::compute(&pres, d, s.window.iter());
            let mut expected_dims = BTreeMap::new();
            for (bd, block) in &h.blocks {
                if block.dim > 0 {
                    expected_dims.insert(*bd, block.dim);
                }
            }
            if mutate {
                mutated = bump_first(&mut expected_dims);
            }
            let diffs = compare_dim_tables(&run.final_dims, &expected_dims);
            detection_pass = diffs.is_empty();
            for (bd, got, want) in diffs {
                mismatches.push(format!(
                    "dim mismatch at {bd}: run has {got}, expected {want}"
                ));
            }
        }
        None => {}
    }

    let seeds_consumed = run.seed_reports.iter().all(|r| r.source_alive);
    let gates = Gates {
        d_squared_ok: true, // a violation aborts the run with an error
        euler_ok: run.euler_violations.is_empty(),
        comm_ok,
        assoc_ok,
        leibniz_ok: run.leibniz_samples_ok,
        monotonic_ok: run.monotonicity_ok,
        stability_certified: run.stability.certified,
        stability_resolved: run.stability.all_resolved,
        seeds_consumed,
        cap_stable: true,
        seed_lines: run
            .seed_reports
            .iter()
            .map(|r| {
                format!(
                    "stage {} jump {}: d({}) consumed (target nonzero: {}) -- {}",
                    r.stage, r.jump, r.gen_name, r.target_nonzero, r.note
                )
            })
            .collect(),
        stability_lines: run
            .stability
            .possibles
            .iter()
            .map(|p| {
                let what = match &p.gen {
                    Some(g) => format!("on `{g}`"),
                    None => "".to_string(),
                };
                match &p.resolved_by {
                    Some(why) => format!(
                        "possible d_{} from {} to {} {what} (page {}): resolved ({why})",
                        p.jump, p.src, p.dst, p.page
                    ),
                    None => format!(
                        "possible d_{} from {} to {} {what} (page {}): UNRESOLVED",
                        p.jump, p.src, p.dst, p.page
                    ),
                }
            })
            .collect(),
    };
    if !gates.euler_ok {
        mismatches.extend(run.euler_violations.iter().cloned());
    }
    if !gates.stability_resolved {
        for line in gates.stability_lines.iter().filter(|l| l.contains("UNRESOLVED")) {
            mismatches.push(line.clone());
        }
    }
    let pagegen_ok = pagegen_span_fail.is_empty();
    mismatches.extend(pagegen_span_fail);
    if !comm_ok {
        mismatches.push("graded commutativity gate failed".into());
    }
    if !assoc_ok {
        mismatches.push("associativity gate failed".into());
    }
    if !gates.leibniz_ok {
        mismatches.push("Leibniz closure gate failed".into());
    }
    if !gates.monotonic_ok {
        mismatches.push("page dimensions increased somewhere".into());
    }

    let pass = detection_pass && gates.all_ok() && pagegen_ok;
    let mut pages = Vec::new();
    let mut charts = Vec::new();
    for (i, page) in run.pages.iter().enumerate() {
        let r = if page.jump > 0 { page.jump } else { run.last_jump + 1 };
        pages.push(PageJson {
            r,
            dims: page.dims.iter().map(|(bd, &d)| (bd.n, bd.w, d)).collect(),
            differentials: page
                .ranks
                .iter()
                .map(|(bd, &rank)| {
                    ((bd.n, bd.w), (bd.n - 1, bd.w + page.jump), rank)
                })
                .collect(),
        });
        charts.push(ChartPage {
            index: i,
            r,
            window: s.window,
            dims: page.dims.clone(),
            arrows: page
                .arrows
                .iter()
                .map(|a| (a.src, a.src_idx, a.dst, a.dst_idx))
                .collect(),
        });
    }

    Ok(Outcome {
        report: RunReport {
            scenario: s.name.clone(),
            status: if pass { Status::Pass } else { Status::Fail },
            pages,
            mismatches,
            gates,
            total_ms: 0,
        },
        charts,
        mutated,
    })
}

fn run_cdga(
    s: &Scenario,
    field: PrimeField,
    level: usize,
    mutate: bool,
) -> Result<Outcome, ScenarioError> {
    let group = s
        .seed_groups
        .first()
        .ok_or_else(|| ScenarioError("cdga mode needs one seeds group".into()))?;
    let def = s
        .algebra(&group.algebra)
        .ok_or_else(|| ScenarioError(format!("unknown algebra `{}`", group.algebra)))?;
    let pres = build_presentation(field, def, s.window, level)?;
    let seeds = resolve_seeds(&pres, group)?;
    let mut d = Differential::zero(&pres, group.jump);
    for seed in seeds {
        d.values[seed.gen] = seed.target;
    }
    d.validate(&pres).map_err(|e| ScenarioError(e.to_string()))?;
    let violations = algebra::dga::check_d_squared(&pres, &d, s.window.iter());
    if let Some(v) = violations.first() {
        return oops(format!("d^2 != 0 on `{}` at {}", v.monomial, v.bidegree));
    }
    let h = DgaHomology::compute(&pres, d, s.window.iter());
    let mut dims = BTreeMap::new();
    for (bd, block) in &h.blocks {
        if block.dim > 0 {
            dims.insert(*bd, block.dim);
        }
    }
    let mut mismatches = Vec::new();
    let mut pass = true;
    let mut mutated = None;
    if let Some(Expected::Algebra { id, .. }) = &s.expected {
        let exp_def = s
            .algebra(id)
            .ok_or_else(|| ScenarioError(format!("unknown expected algebra `{id}`")))?;
        let exp = build_presentation(field, exp_def, s.window, level)?;
        let mut table = dims_table(&exp, s.window);
        if mutate {
            mutated = bump_first(&mut table);
        }
        for (bd, got, want) in compare_dim_tables(&dims, &table) {
            mismatches.push(format!("dim mismatch at {bd}: homology has {got}, expected {want}"));
            pass = false;
        }
    }
    let (comm_ok, assoc_ok) = comm_assoc_gate(&pres, s.window, &s.name);
    let gates = Gates { comm_ok, assoc_ok, ..Gates::default() };
    pass = pass && gates.all_ok();
    Ok(Outcome {
        report: RunReport {
            scenario: s.name.clone(),
            status: if pass { Status::Pass } else { Status::Fail },
            pages: vec![PageJson {
                r: group.jump,
                dims: dims.iter().map(|(bd, &d)| (bd.n, bd.w, d)).collect(),
                differentials: vec![],
            }],
            mismatches,
            gates,
            total_ms: 0,
        },
        charts: Vec::new(),
        mutated,
    })
}

fn run_hh(
    s: &Scenario,
    field: PrimeField,
    level: usize,
    mutate: bool,
) -> Result<Outcome, ScenarioError> {
    let section = s.hh.as_ref().ok_or_else(|| ScenarioError("hh mode needs an hh block".into()))?;
    let def = s
        .algebra(&section.algebra)
        .ok_or_else(|| ScenarioError(format!("unknown algebra `{}`", section.algebra)))?;
    let pres = build_presentation(field, def, s.window, level)?;
    let hh = hh_dims(&pres, s.window, section.cap).map_err(|e| ScenarioError(e.to_string()))?;
    // Cap stability: the table must agree at cap + 1.
    let hh_next =
        hh_dims(&pres, s.window, section.cap + 1).map_err(|e| ScenarioError(e.to_string()))?;
    let cap_stable = hh.dims == hh_next.dims;

    let mut mismatches = Vec::new();
    let mut pass = true;
    let mut mutated = None;
    if let Some(expect_id) = &section.expect_dims {
        let exp_def = s
            .algebra(expect_id)
            .ok_or_else(|| ScenarioError(format!("unknown algebra `{expect_id}`")))?;
        let exp = build_presentation(field, exp_def, s.window, level)?;
        let mut table = dims_table(&exp, s.window);
        if mutate {
            mutated = bump_first(&mut table);
        }
        for (bd, got, want) in compare_dim_tables(&hh.dims, &table) {
            mismatches.push(format!("dim mismatch at {bd}: oracle has {got}, expected {want}"));
            pass = false;
        }
    }

    // Model-algebra defines and exact relation checks.
    let mut models: BTreeMap<String, Presentation> = BTreeMap::new();
    let mut envs: BTreeMap<String, BTreeMap<String, Element>> = BTreeMap::new();
    for (name, alg_id, expr) in &section.defines {
        if !models.contains_key(alg_id) {
            let mdef = s
                .algebra(alg_id)
                .ok_or_else(|| ScenarioError(format!("unknown model algebra `{alg_id}`")))?;
            models.insert(alg_id.clone(), build_presentation(field, mdef, s.window, level)?);
        }
        let model = &models[alg_id];
        let env = envs.entry(alg_id.clone()).or_default();
        let el = expr
            .eval_element_with(model, env)
            .map_err(|e| ScenarioError(format!("define {name}: {e}")))?;
        env.insert(name.clone(), el);
    }
    for (alg_id, lhs, rhs) in &section.asserts {
        if !models.contains_key(alg_id) {
            let mdef = s
                .algebra(alg_id)
                .ok_or_else(|| ScenarioError(format!("unknown model algebra `{alg_id}`")))?;
            models.insert(alg_id.clone(), build_presentation(field, mdef, s.window, level)?);
        }
        let model = &models[alg_id];
        let empty = BTreeMap::new();
        let env = envs.get(alg_id).unwrap_or(&empty);
        let l = lhs
            .eval_element_with(model, env)
            .map_err(|e| ScenarioError(format!("assert lhs: {e}")))?;
        let r = rhs
            .eval_element_with(model, env)
            .map_err(|e| ScenarioError(format!("assert rhs: {e}")))?;
        if l != r {
            mismatches.push(format!(
                "relation fails in `{alg_id}`: {} != {}",
                model.fmt_element(&l),
                model.fmt_element(&r)
            ));
            pass = false;
        } else if l.is_zero() {
            mismatches
                .push(format!("relation in `{alg_id}` holds but both sides are zero"));
            pass = false;
        }
    }

    // Bar-side span membership checks.
    for (class_expr, span_exprs) in &section.barspans {
        let class = class_expr
            .eval_bar(&hh)
            .map_err(|e| ScenarioError(format!("barspan class: {e}")))?;
        let coords = match hh.project(&class) {
            Some(c) => c,
            None => {
                mismatches.push("barspan class is not a cycle".into());
                pass = false;
                continue;
            }
        };
        // Homology splits over (internal bidegree, bar length) slots, so
        // span classes in other slots contribute nothing at the class's slot.
        let mut span = fp::Echelon::new(field);
        for e in span_exprs {
            let chain = e.eval_bar(&hh).map_err(|e| ScenarioError(format!("barspan: {e}")))?;
            if chain.is_zero() || (chain.internal, chain.k) != (class.internal, class.k) {
                continue;
            }
            if let Some(c) = hh.project(&chain) {
                span.insert(&c);
            }
        }
        if coords.iter().any(|&c| c != 0) && !span.contains(&coords) {
            mismatches.push("barspan: class is outside the allowed span".into());
            pass = false;
        }
    }

    let (comm_ok, assoc_ok) = comm_assoc_gate(&pres, s.window, &s.name);
    let gates = Gates { comm_ok, assoc_ok, cap_stable, ..Gates::default() };
    if !cap_stable {
        mismatches.push("bar cap is not stable: dims change at cap + 1".into());
    }
    pass = pass && gates.all_ok();
    Ok(Outcome {
        report: RunReport {
            scenario: s.name.clone(),
            status: if pass { Status::Pass } else { Status::Fail },
            pages: vec![PageJson {
                r: 0,
                dims: hh.dims.iter().map(|(bd, &d)| (bd.n, bd.w, d)).collect(),
                differentials: vec![],
            }],
            mismatches,
            gates,
            total_ms: 0,
        },
        charts: Vec::new(),
        mutated,
    })
}

fn run_hom(
    s: &Scenario,
    field: PrimeField,
    level: usize,
    mutate: bool,
) -> Result<Outcome, ScenarioError> {
    let section =
        s.hom.as_ref().ok_or_else(|| ScenarioError("hom mode needs a hom block".into()))?;
    let from_def = s
        .algebra(&section.from)
        .ok_or_else(|| ScenarioError(format!("unknown algebra `{}`", section.from)))?;
    let to_def = s
        .algebra(&section.to)
        .ok_or_else(|| ScenarioError(format!("unknown algebra `{}`", section.to)))?;
    let source = build_presentation(field, from_def, s.window, level)?;
    let target = build_presentation(field, to_def, s.window, level)?;
    let mut by_name: BTreeMap<&str, &Expr> = BTreeMap::new();
    for (g, expr) in &section.maps {
        by_name.insert(g.as_str(), expr);
    }
    let mut images = Vec::new();
    for g in source.gens() {
        match by_name.get(g.name.as_str()) {
            Some(expr) => images.push(
                expr.eval_element(&target)
                    .map_err(|e| ScenarioError(format!("map[{}]: {e}", g.name)))?,
            ),
            None => return oops(format!("hom: generator `{}` has no map line", g.name)),
        }
    }
    let hom = Hom::new(&source, &target, images)
        .map_err(|e| ScenarioError(format!("hom verification: {e}")))?;
    let mut mismatches = Vec::new();
    let mut pass = true;
    let mut mutated = None;
    let mut dims = Vec::new();
    for (i, (bd, want)) in section.expect_ranks.iter().enumerate() {
        let mut want = *want;
        if mutate && i == 0 {
            want += 1;
            mutated = Some(*bd);
        }
        let m = hom.matrix_at(*bd);
        let got = m.rank();
        dims.push((bd.n, bd.w, got));
        if got != want {
            mismatches.push(format!("rank mismatch at {bd}: map has rank {got}, expected {want}"));
            pass = false;
        }
    }
    let (comm_ok, assoc_ok) = comm_assoc_gate(&source, s.window, &s.name);
    let gates = Gates { comm_ok, assoc_ok, ..Gates::default() };
    pass = pass && gates.all_ok();
    Ok(Outcome {
        report: RunReport {
            scenario: s.name.clone(),
            status: if pass { Status::Pass } else { Status::Fail },
            pages: vec![PageJson { r: 0, dims, differentials: vec![] }],
            mismatches,
            gates,
            total_ms: 0,
        },
        charts: Vec::new(),
        mutated,
    })
}

/// Check that products of the final-page generators span every nonzero
/// window bidegree of E_infinity. Exponent budgets come from the window.
fn verify_pagegen_span(
    run: &sseq::SpectralSequenceRun<'_>,
    gens: &[Element],
) -> Vec<String> {
    let e1 = run.e1;
    let mut degs: Vec<Bidegree> = Vec::new();
    for g in gens {
        match e1.element_bidegree(g) {
            Ok(Some(bd)) if bd.n >= 1 => degs.push(bd),
            _ => return vec!["page generators must be nonzero with positive degree".into()],
        }
    }
    // Enumerate products with total degree inside the window.
    let mut span: BTreeMap<Bidegree, fp::Echelon> = BTreeMap::new();
    let mut exps = vec![0u32; gens.len()];
    fn rec(
        e1: &algebra::Presentation,
        run: &sseq::SpectralSequenceRun<'_>,
        gens: &[Element],
        degs: &[Bidegree],
        i: usize,
        acc: &Element,
        bd: Bidegree,
        n_max: i32,
        span: &mut BTreeMap<Bidegree, fp::Echelon>,
        exps: &mut Vec<u32>,
    ) {
        if i == gens.len() {
            if let Some((pbd, coords)) = run.project(acc) {
                if coords.iter().any(|&c| c != 0) {
                    span.entry(pbd)
                        .or_insert_with(|| fp::Echelon::new(e1.field()))
                        .insert(&coords);
                }
            }
            return;
        }
        let mut current = acc.clone();
        let mut cur_bd = bd;
        let mut e = 0u32;
        loop {
            rec(e1, run, gens, degs, i + 1, &current, cur_bd, n_max, span, exps);
            e += 1;
            cur_bd = cur_bd.add(degs[i]);
            if cur_bd.n > n_max {
                break;
            }
            current = e1.mul(&current, &gens[i]);
            if current.is_zero() {
                break;
            }
            exps[i] = e;
        }
        exps[i] = 0;
    }
    rec(
        e1,
        run,
        gens,
        &degs,
        0,
        &e1.one(),
        Bidegree::new(0, 0),
        run.window.n_max,
        &mut span,
        &mut exps,
    );
    let mut failures = Vec::new();
    for bd in run.window.iter() {
        let dim = run.dim(bd);
        if dim == 0 {
            continue;
        }
        let rank = span.get(&bd).map_or(0, |e| e.rank());
        if rank != dim {
            failures.push(format!(
                "page generators do not span the final page at {bd} (rank {rank} of {dim})"
            ));
        }
    }
    failures
}
