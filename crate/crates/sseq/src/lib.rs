//! Multiplicative spectral-sequence runner.
//!
//! A run starts from a presented E_1 algebra and a list of stages. Each stage
//! carries one weight jump and seed differentials on the generators of that
//! stage's presentation; the differential is their Leibniz extension, and the
//! next page is its homology. A stage after the first re-presents the current
//! page as a fresh presented algebra: the runner verifies the re-presentation
//! (dimensions, liveness and independence of the generator images, and every
//! rewrite rule, all at the level of classes) before trusting it, so later
//! differentials act on honest page algebras.
//!
//! Everything is tracked in E_1 coordinates: each page class keeps a
//! representative element of E_1, and the boundaries of all consumed
//! differentials accumulate per bidegree. Projection onto the current page is
//! a linear solve against (representatives | accumulated boundaries).

use algebra::dga::{boundary_matrix, check_d_squared, homology_block, project_onto, Differential};
use algebra::{Bidegree, Element, Monomial, Presentation, Window};
use std::collections::BTreeMap;

mod detect;
pub use detect::{compare_dim_tables, detect, Detection};

/// A seed differential on one generator of a stage presentation.
#[derive(Clone, Debug)]
pub struct Seed {
    pub gen: usize,
    pub target: Element,
    pub note: String,
}

/// One stage: a presentation of the current page, generator images in the
/// previous stage's presentation (absent for the first stage), one weight
/// jump, and the seeds at that jump.
pub struct Stage {
    pub pres: Presentation,
    /// For stages after the first: image of each generator, as an element of
    /// the previous stage's presentation.
    pub images: Option<Vec<Element>>,
    pub jump: i32,
    pub seeds: Vec<Seed>,
}

#[derive(Clone, Debug)]
pub enum PermanentReason {
    /// The class is a p-th power, so every Leibniz-extended differential
    /// kills it; the root is verified by the runner.
    PthPower { root: Element },
    /// The class is detected by the image of the unit (or another structure
    /// map); recorded with its citation, not machine-checkable.
    ImageOfUnit,
}

/// A scenario-provided permanent-cycle annotation covering one bidegree.
#[derive(Clone, Debug)]
pub struct Annotation {
    pub bd: Bidegree,
    pub reason: PermanentReason,
    pub note: String,
}

pub struct RunSpec {
    pub stages: Vec<Stage>,
    pub window: Window,
    pub annotations: Vec<Annotation>,
    /// A multiplicative generating set for the final page, as elements of the
    /// last stage's presentation. With it, the stability scan only has to
    /// rule out differentials on generators: a page differential is a
    /// derivation, so it vanishes once it vanishes on a generating set.
    /// Spanning must be verified by the caller (the detection span check or
    /// the page-generators check).
    pub final_gens: Option<Vec<Element>>,
}

#[derive(Debug, Clone)]
pub struct SeedReport {
    pub stage: usize,
    pub jump: i32,
    pub gen_name: String,
    pub note: String,
    pub source_alive: bool,
    pub target_nonzero: bool,
}

/// An arrow of a page differential between two specific basis classes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Arrow {
    pub src: Bidegree,
    pub src_idx: usize,
    pub dst: Bidegree,
    pub dst_idx: usize,
}

#[derive(Debug)]
pub struct PageRecord {
    /// Weight jump of the differential leaving this page; 0 on the final page.
    pub jump: i32,
    /// Page dimensions, clipped to the user window.
    pub dims: BTreeMap<Bidegree, usize>,
    /// Nonzero matrix entries of the differential, sources in the window.
    pub arrows: Vec<Arrow>,
    /// Per-source-bidegree rank of the differential.
    pub ranks: BTreeMap<Bidegree, usize>,
}

/// An arithmetically possible later differential that window arithmetic
/// cannot rule out, with its resolution status.
#[derive(Debug, Clone)]
pub struct PossibleDifferential {
    /// Index of the page (in run order) the differential would live on.
    pub page: usize,
    pub jump: i32,
    pub src: Bidegree,
    pub dst: Bidegree,
    /// The page generator that could support it, when the scan ran
    /// generator-wise.
    pub gen: Option<String>,
    pub resolved_by: Option<String>,
}

#[derive(Debug)]
pub struct StabilityReport {
    /// True when window arithmetic alone rules out all further differentials.
    pub certified: bool,
    pub possibles: Vec<PossibleDifferential>,
    /// True when every arithmetically possible differential is covered by a
    /// verified (or cited) permanent-cycle annotation.
    pub all_resolved: bool,
}

#[derive(Debug)]
pub enum RunError {
    Dga { stage: usize, error: algebra::dga::DgaError },
    DSquared { stage: usize, monomial: String, bidegree: Bidegree },
    SeedDead { stage: usize, gen: String },
    RebaseDims { stage: usize, bd: Bidegree, expected: usize, got: usize },
    RebaseImage { stage: usize, gen: String, detail: String },
    RebaseSpan { stage: usize, bd: Bidegree },
    RebaseRule { stage: usize, gen: String },
    StageOrder { stage: usize, jump: i32, previous: i32 },
    MissingImages { stage: usize },
}

impl std::fmt::Display for RunError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RunError::Dga { stage, error } => write!(f, "stage {stage}: {error}"),
            RunError::DSquared { stage, monomial, bidegree } => {
                write!(f, "stage {stage}: d^2 != 0 on `{monomial}` at {bidegree}")
            }
            RunError::SeedDead { stage, gen } => write!(
                f,
                "stage {stage}: seed source `{gen}` is dead on its page (already hit or not a cycle)"
            ),
            RunError::RebaseDims { stage, bd, expected, got } => write!(
                f,
                "stage {stage}: page presentation has dimension {got} at {bd}, the page has {expected}"
            ),
            RunError::RebaseImage { stage, gen, detail } => {
                write!(f, "stage {stage}: image of `{gen}` {detail}")
            }
            RunError::RebaseSpan { stage, bd } => write!(
                f,
                "stage {stage}: page presentation monomials do not span the page at {bd}"
            ),
            RunError::RebaseRule { stage, gen } => {
                write!(f, "stage {stage}: rewrite rule on `{gen}` does not hold on the page")
            }
            RunError::StageOrder { stage, jump, previous } => write!(
                f,
                "stage {stage}: weight jump {jump} does not exceed the previous jump {previous}"
            ),
            RunError::MissingImages { stage } => {
                write!(f, "stage {stage}: re-presentation without generator images")
            }
        }
    }
}

impl std::error::Error for RunError {}

#[derive(Debug)]
pub struct SpectralSequenceRun<'a> {
    pub e1: &'a Presentation,
    pub window: Window,
    rect: Window,
    pub pages: Vec<PageRecord>,
    pub final_dims: BTreeMap<Bidegree, usize>,
    pub seed_reports: Vec<SeedReport>,
    pub euler_violations: Vec<String>,
    pub monotonicity_ok: bool,
    pub leibniz_samples_ok: bool,
    pub stability: StabilityReport,
    pub last_jump: i32,
    /// Final-page generating set pushed down to E_1 coordinates, when given.
    pub final_gen_elements: Option<Vec<Element>>,
    /// E_infinity representatives and accumulated boundaries, in E_1
    /// coordinates, over the padded rectangle.
    reps: BTreeMap<Bidegree, Vec<Element>>,
    accum: BTreeMap<Bidegree, Vec<Vec<u32>>>,
    bases: BTreeMap<Bidegree, Vec<Monomial>>,
}

impl<'a> SpectralSequenceRun<'a> {
    pub fn dim(&self, bd: Bidegree) -> usize {
        self.final_dims.get(&bd).copied().unwrap_or(0)
    }

    pub fn dims_by_degree(&self) -> BTreeMap<i32, usize> {
        let mut out = BTreeMap::new();
        for (bd, &d) in &self.final_dims {
            if d > 0 {
                *out.entry(bd.n).or_insert(0) += d;
            }
        }
        out
    }

    /// Project an E_1 element onto the E_infinity page: `None` when it is not
    /// a permanent cycle in our bookkeeping, otherwise its class coordinates.
    pub fn project(&self, el: &Element) -> Option<(Bidegree, Vec<u32>)> {
        let bd = self.e1.element_bidegree(el).ok()??;
        if !self.rect.contains(bd) {
            return None;
        }
        let basis = self.bases.get(&bd)?;
        let v = self.e1.coords(el, basis);
        let reps: Vec<Vec<u32>> = self
            .reps
            .get(&bd)
            .map(|rs| rs.iter().map(|r| self.e1.coords(r, basis)).collect())
            .unwrap_or_default();
        let empty = Vec::new();
        let bounds = self.accum.get(&bd).unwrap_or(&empty);
        project_onto(self.e1.field(), &reps, bounds, &v).map(|coords| (bd, coords))
    }
}

/// Run the spectral sequence described by `spec`.
pub fn run(spec: &RunSpec) -> Result<SpectralSequenceRun<'_>, RunError> {
    let stages = &spec.stages;
    assert!(!stages.is_empty(), "a run needs at least one stage");
    assert!(stages[0].images.is_none(), "the first stage is the E1 presentation itself");
    let e1 = &stages[0].pres;
    let window = spec.window;
    let field = e1.field();

    let total_jump: i32 = stages.iter().map(|s| s.jump.max(1)).sum();
    let pad = stages.len() as i32;
    let w_top = (window.w_max + total_jump).max(column_weight_bound(e1, &window));
    let rect = Window::new(window.n_min - pad, window.n_max + pad, w_top);

    // E_1 bases over the rectangle.
    let mut bases: BTreeMap<Bidegree, Vec<Monomial>> = BTreeMap::new();
    for bd in rect.iter() {
        bases.insert(bd, e1.basis_at(bd));
    }

    // Current page state, in E_1 coordinates.
    let mut reps: BTreeMap<Bidegree, Vec<Element>> = BTreeMap::new();
    let mut dims: BTreeMap<Bidegree, usize> = BTreeMap::new();
    for (bd, basis) in &bases {
        reps.insert(*bd, basis.iter().map(|m| Element::from_monomial(m.clone())).collect());
        dims.insert(*bd, basis.len());
    }
    let mut accum: BTreeMap<Bidegree, Vec<Vec<u32>>> = BTreeMap::new();

    // Embedding of the current stage presentation into E_1, built
    // multiplicatively from generator images.
    let mut embed_gens: Vec<Element> = (0..e1.gens().len()).map(|i| e1.gen_element(i)).collect();

    let mut pages: Vec<PageRecord> = Vec::new();
    let mut seed_reports: Vec<SeedReport> = Vec::new();
    let mut euler_violations: Vec<String> = Vec::new();
    let mut monotonicity_ok = true;
    let mut leibniz_samples_ok = true;
    let mut page_dim_history: Vec<BTreeMap<Bidegree, usize>> = Vec::new();
    let mut rect_dim_history: Vec<BTreeMap<Bidegree, usize>> = Vec::new();
    let mut prev_jump = 0i32;

    for (s, stage) in stages.iter().enumerate() {
        if s > 0 {
            if stage.jump <= prev_jump {
                return Err(RunError::StageOrder {
                    stage: s,
                    jump: stage.jump,
                    previous: prev_jump,
                });
            }
            let images = stage.images.as_ref().ok_or(RunError::MissingImages { stage: s })?;
            // Compose the previous embedding with the new generator images.
            let prev_embed = embed_gens.clone();
            embed_gens = images.iter().map(|img| embed_element(e1, &prev_embed, img)).collect();
            rebase_verify(s, e1, &stage.pres, &embed_gens, &bases, &reps, &accum, &dims, &rect)?;
        }

        // Build and validate the stage differential.
        let mut d = Differential::zero(&stage.pres, stage.jump.max(1));
        for seed in &stage.seeds {
            d.values[seed.gen] = seed.target.clone();
        }
        d.validate(&stage.pres).map_err(|error| RunError::Dga { stage: s, error })?;

        // Seed audit: the source generator must be a live class.
        for seed in &stage.seeds {
            let gen_name = stage.pres.gens()[seed.gen].name.clone();
            let src = embed_element(e1, &embed_gens, &stage.pres.gen_element(seed.gen));
            let alive = match project_el(e1, &bases, &reps, &accum, &src) {
                Some((_, coords)) => coords.iter().any(|&c| c != 0),
                None => false,
            };
            if !alive {
                return Err(RunError::SeedDead { stage: s, gen: gen_name });
            }
            let tgt = embed_element(e1, &embed_gens, &seed.target);
            let target_nonzero = match project_el(e1, &bases, &reps, &accum, &tgt) {
                Some((_, coords)) => coords.iter().any(|&c| c != 0),
                None => false,
            };
            seed_reports.push(SeedReport {
                stage: s,
                jump: stage.jump,
                gen_name,
                note: seed.note.clone(),
                source_alive: true,
                target_nonzero,
            });
        }

        // d^2 = 0 on every basis monomial of the rectangle.
        let violations = check_d_squared(&stage.pres, &d, rect.iter());
        if let Some(v) = violations.first() {
            return Err(RunError::DSquared {
                stage: s,
                monomial: v.monomial.clone(),
                bidegree: v.bidegree,
            });
        }

        // Leibniz closure spot checks on page basis monomials.
        leibniz_samples_ok &= leibniz_closure_samples(&stage.pres, &d, &rect);

        // Record the page as it stands, with its differential.
        let mut record = PageRecord {
            jump: stage.jump,
            dims: clip(&dims, &window),
            arrows: Vec::new(),
            ranks: BTreeMap::new(),
        };
        for bd in window.iter() {
            let m = boundary_matrix(&stage.pres, &d, bd);
            if m.rows() == 0 || m.cols() == 0 {
                continue;
            }
            let dst = Bidegree::new(bd.n - 1, bd.w + stage.jump);
            let mut any = false;
            for j in 0..m.cols() {
                for i in 0..m.rows() {
                    if m.get(i, j) != 0 {
                        record.arrows.push(Arrow { src: bd, src_idx: j, dst, dst_idx: i });
                        any = true;
                    }
                }
            }
            if any {
                record.ranks.insert(bd, m.rank());
            }
        }

        // Homology over the rectangle, re-expressed in E_1 coordinates.
        let mut new_reps: BTreeMap<Bidegree, Vec<Element>> = BTreeMap::new();
        let mut new_dims: BTreeMap<Bidegree, usize> = BTreeMap::new();
        for bd in rect.iter() {
            let block = homology_block(&stage.pres, &d, bd);
            let stage_basis = stage.pres.basis_at(bd);
            let elems: Vec<Element> = block
                .reps
                .iter()
                .map(|v| {
                    let el = stage.pres.element_from_coords(v, &stage_basis);
                    embed_element(e1, &embed_gens, &el)
                })
                .collect();
            let e1_basis = &bases[&bd];
            let entry = accum.entry(bd).or_default();
            for bvec in &block.boundaries {
                let bel = stage.pres.element_from_coords(bvec, &stage_basis);
                let be1 = embed_element(e1, &embed_gens, &bel);
                entry.push(e1.coords(&be1, e1_basis));
            }
            // Euler audit per bidegree: dim E_r - dim E_{r+1} equals rank out
            // plus rank in.
            if window.contains(bd) {
                let out_rank = boundary_matrix(&stage.pres, &d, bd).rank();
                let src = Bidegree::new(bd.n + 1, bd.w - stage.jump);
                let in_rank =
                    if src.w >= 0 { boundary_matrix(&stage.pres, &d, src).rank() } else { 0 };
                let before = stage_basis.len();
                if before != block.dim + out_rank + in_rank {
                    euler_violations.push(format!(
                        "page {s} at {bd}: {before} - {} != rank out {out_rank} + rank in {in_rank}",
                        block.dim
                    ));
                }
                if block.dim > dims.get(&bd).copied().unwrap_or(0) {
                    monotonicity_ok = false;
                }
            }
            if block.dim > 0 {
                new_dims.insert(bd, block.dim);
            }
            new_reps.insert(bd, elems);
        }
        page_dim_history.push(clip(&dims, &window));
        rect_dim_history.push(dims.clone());
        pages.push(record);
        reps = new_reps;
        dims = new_dims;
        prev_jump = stage.jump;
    }

    // Final page record, no differential.
    pages.push(PageRecord {
        jump: 0,
        dims: clip(&dims, &window),
        arrows: Vec::new(),
        ranks: BTreeMap::new(),
    });
    page_dim_history.push(clip(&dims, &window));
    rect_dim_history.push(dims.clone());

    // Push the final generating set (if any) down to E_1 and record its
    // bidegrees for the generator-wise stability scan.
    let final_gen_elements: Option<Vec<Element>> = spec
        .final_gens
        .as_ref()
        .map(|gens| gens.iter().map(|g| embed_element(e1, &embed_gens, g)).collect());
    let mut final_gen_bds: Option<Vec<(String, Bidegree)>> = None;
    if let Some(els) = &final_gen_elements {
        let mut out = Vec::new();
        for (i, el) in els.iter().enumerate() {
            match e1.element_bidegree(el) {
                Ok(Some(bd)) => out.push((format!("page generator #{i}"), bd)),
                _ => {
                    return Err(RunError::RebaseImage {
                        stage: stages.len(),
                        gen: format!("page generator #{i}"),
                        detail: "is zero or inhomogeneous".to_string(),
                    })
                }
            }
        }
        final_gen_bds = Some(out);
    }

    // Stability scan. A page differential is a derivation, so on pages whose
    // algebra has a verified generating set (the stage presentations for
    // intermediate pages, the supplied final generators for the last one) it
    // suffices to rule out differentials on the generators; products follow
    // by the Leibniz rule. Without a generating set the scan falls back to
    // flagging every pair of nonzero bidegrees. A stage's own jump counts as
    // undeclared when the stage has no seeds.
    let final_dims = clip(&dims, &window);
    let mut seen: std::collections::BTreeSet<(i32, Bidegree, Bidegree)> = Default::default();
    let mut possibles: Vec<PossibleDifferential> = Vec::new();
    for (page_idx, rect_dims) in rect_dim_history.iter().enumerate() {
        let lower = if page_idx == 0 { 1 } else { stages[page_idx - 1].jump + 1 };
        let upper_excl = match stages.get(page_idx) {
            Some(st) if st.seeds.is_empty() => st.jump + 1,
            Some(st) => st.jump,
            None => i32::MAX,
        };
        // Generating set of this page, as (name, bidegree) pairs.
        let gen_set: Option<Vec<(String, Bidegree)>> = if page_idx < stages.len() {
            let pres = &stages[page_idx].pres;
            Some(pres.gens().iter().map(|g| (g.name.clone(), g.degree)).collect())
        } else {
            final_gen_bds.clone()
        };
        match gen_set {
            Some(gens) => {
                for (name, bd) in gens {
                    // Generators that already died on this page support
                    // nothing.
                    if rect_dims.get(&bd).copied().unwrap_or(0) == 0 {
                        continue;
                    }
                    for (dst, &dd) in rect_dims.range(
                        Bidegree::new(bd.n - 1, i32::MIN)..=Bidegree::new(bd.n - 1, i32::MAX),
                    ) {
                        if dd == 0 {
                            continue;
                        }
                        let jump = dst.w - bd.w;
                        if jump >= lower && jump < upper_excl && seen.insert((jump, bd, *dst)) {
                            possibles.push(PossibleDifferential {
                                page: page_idx,
                                jump,
                                src: bd,
                                dst: *dst,
                                gen: Some(name.clone()),
                                resolved_by: None,
                            });
                        }
                    }
                }
            }
            None => {
                let page_dims = &page_dim_history[page_idx];
                for (src, &ds) in page_dims {
                    if ds == 0 {
                        continue;
                    }
                    for (dst, &dd) in page_dims {
                        if dd == 0 || dst.n != src.n - 1 {
                            continue;
                        }
                        let jump = dst.w - src.w;
                        if jump >= lower && jump < upper_excl && seen.insert((jump, *src, *dst)) {
                            possibles.push(PossibleDifferential {
                                page: page_idx,
                                jump,
                                src: *src,
                                dst: *dst,
                                gen: None,
                                resolved_by: None,
                            });
                        }
                    }
                }
            }
        }
    }
    let certified = possibles.is_empty();

    let mut runview = SpectralSequenceRun {
        e1,
        window,
        rect,
        pages,
        final_dims,
        seed_reports,
        euler_violations,
        monotonicity_ok,
        leibniz_samples_ok,
        stability: StabilityReport { certified, possibles: Vec::new(), all_resolved: true },
        last_jump: prev_jump,
        final_gen_elements,
        reps,
        accum,
        bases,
    };
    let mut possibles = possibles;
    for p in &mut possibles {
        p.resolved_by = resolve_annotation(&runview, &spec.annotations, p, field);
    }
    let all_resolved = possibles.iter().all(|p| p.resolved_by.is_some());
    runview.stability = StabilityReport { certified, possibles, all_resolved };
    Ok(runview)
}

/// An upper bound on the weight of any monomial with topological degree in
/// the window: bounded generators contribute their capped power, unbounded
/// positive-degree generators at most (degree budget / degree) many factors.
/// Degree-(0, w > 0) generators have no such bound and fall back to a fixed
/// slack; the spectral sequence inputs in this corpus do not use them.
fn column_weight_bound(pres: &Presentation, window: &Window) -> i32 {
    let neg_slack: i64 = pres
        .gens()
        .iter()
        .enumerate()
        .filter(|(_, g)| g.degree.n < 0)
        .map(|(i, g)| {
            (pres.bound(i).unwrap_or(2) as i64 - 1) * (-g.degree.n as i64)
        })
        .sum();
    let budget = window.n_max as i64 + neg_slack;
    let mut bound: i64 = 0;
    for (i, g) in pres.gens().iter().enumerate() {
        let w = g.degree.w as i64;
        if w == 0 {
            continue;
        }
        bound += match pres.bound(i) {
            Some(h) => (h as i64 - 1) * w,
            None if g.degree.n > 0 => (budget / g.degree.n as i64).max(0) * w,
            None => 4 * w, // (0, w) polynomial: arbitrary slack
        };
    }
    bound.min(1 << 14) as i32
}

fn clip(dims: &BTreeMap<Bidegree, usize>, window: &Window) -> BTreeMap<Bidegree, usize> {
    dims.iter()
        .filter(|(bd, &d)| d > 0 && window.contains(**bd))
        .map(|(bd, &d)| (*bd, d))
        .collect()
}

/// Push an element of a stage presentation down to E_1 through generator
/// images. Multiplication happens in E_1, in declaration order.
fn embed_element(e1: &Presentation, embed_gens: &[Element], el: &Element) -> Element {
    let mut acc = Element::zero();
    for (m, &c) in &el.terms {
        let mut prod = e1.one();
        for (i, &e) in m.exps.iter().enumerate() {
            if e > 0 {
                prod = e1.mul(&prod, &e1.pow(&embed_gens[i], e as u32));
            }
        }
        acc = e1.add(&acc, &e1.scale(&prod, c as i64));
    }
    acc
}

fn project_el(
    e1: &Presentation,
    bases: &BTreeMap<Bidegree, Vec<Monomial>>,
    reps: &BTreeMap<Bidegree, Vec<Element>>,
    accum: &BTreeMap<Bidegree, Vec<Vec<u32>>>,
    el: &Element,
) -> Option<(Bidegree, Vec<u32>)> {
    let bd = e1.element_bidegree(el).ok()??;
    let basis = bases.get(&bd)?;
    let v = e1.coords(el, basis);
    let rep_vecs: Vec<Vec<u32>> = reps
        .get(&bd)
        .map(|rs| rs.iter().map(|r| e1.coords(r, basis)).collect())
        .unwrap_or_default();
    let empty = Vec::new();
    let bounds = accum.get(&bd).unwrap_or(&empty);
    project_onto(e1.field(), &rep_vecs, bounds, &v).map(|coords| (bd, coords))
}

#[allow(clippy::too_many_arguments)]
fn rebase_verify(
    stage: usize,
    e1: &Presentation,
    pres: &Presentation,
    embed_gens: &[Element],
    bases: &BTreeMap<Bidegree, Vec<Monomial>>,
    reps: &BTreeMap<Bidegree, Vec<Element>>,
    accum: &BTreeMap<Bidegree, Vec<Vec<u32>>>,
    dims: &BTreeMap<Bidegree, usize>,
    rect: &Window,
) -> Result<(), RunError> {
    // Generator images: homogeneous of the right bidegree and alive.
    for (i, g) in pres.gens().iter().enumerate() {
        let img = &embed_gens[i];
        match e1.element_bidegree(img) {
            Err(_) => {
                return Err(RunError::RebaseImage {
                    stage,
                    gen: g.name.clone(),
                    detail: "is not homogeneous".to_string(),
                })
            }
            Ok(None) => {
                return Err(RunError::RebaseImage {
                    stage,
                    gen: g.name.clone(),
                    detail: "is zero".to_string(),
                })
            }
            Ok(Some(bd)) if bd != g.degree => {
                return Err(RunError::RebaseImage {
                    stage,
                    gen: g.name.clone(),
                    detail: format!("has bidegree {bd}, expected {}", g.degree),
                })
            }
            _ => {}
        }
        if rect.contains(g.degree) {
            let alive = match project_el(e1, bases, reps, accum, img) {
                Some((_, coords)) => coords.iter().any(|&c| c != 0),
                None => false,
            };
            if !alive {
                return Err(RunError::RebaseImage {
                    stage,
                    gen: g.name.clone(),
                    detail: "is not a surviving class on the current page".to_string(),
                });
            }
        }
    }
    // Dimensions match, and the embedded monomials are independent modulo the
    // accumulated boundaries (with equal dimensions, that is spanning).
    for bd in rect.iter() {
        let expected = dims.get(&bd).copied().unwrap_or(0);
        let monos = pres.basis_at(bd);
        if monos.len() != expected {
            return Err(RunError::RebaseDims { stage, bd, expected, got: monos.len() });
        }
        if monos.is_empty() {
            continue;
        }
        let e1_basis = &bases[&bd];
        let mut span = fp::Echelon::new(e1.field());
        if let Some(bounds) = accum.get(&bd) {
            for b in bounds {
                span.insert(b);
            }
        }
        for m in &monos {
            let el = embed_element(e1, embed_gens, &Element::from_monomial(m.clone()));
            if el.is_zero() {
                return Err(RunError::RebaseSpan { stage, bd });
            }
            let v = e1.coords(&el, e1_basis);
            if !span.insert(&v) {
                return Err(RunError::RebaseSpan { stage, bd });
            }
        }
    }
    // Rewrite rules hold at the level of classes.
    for (i, g) in pres.gens().iter().enumerate() {
        if let Some(h) = pres.bound(i) {
            let lhs = e1.pow(&embed_gens[i], h as u32);
            let rhs = embed_element(e1, embed_gens, pres.rule_rhs(i).unwrap());
            let diff = e1.sub(&lhs, &rhs);
            if diff.is_zero() {
                continue;
            }
            let bd = match e1.element_bidegree(&diff) {
                Ok(Some(bd)) => bd,
                _ => return Err(RunError::RebaseRule { stage, gen: g.name.clone() }),
            };
            if !rect.contains(bd) {
                // The rule target falls outside the tracked rectangle, so the
                // run cannot verify it; the window was chosen too small.
                return Err(RunError::RebaseRule { stage, gen: g.name.clone() });
            }
            match project_el(e1, bases, reps, accum, &diff) {
                Some((_, coords)) if coords.iter().all(|&c| c == 0) => {}
                _ => return Err(RunError::RebaseRule { stage, gen: g.name.clone() }),
            }
        }
    }
    Ok(())
}

/// Sampled Leibniz closure: d(uv) = d(u) v +- u d(v) on pairs of basis
/// monomials. This holds by construction; the check guards the plumbing.
fn leibniz_closure_samples(pres: &Presentation, d: &Differential, rect: &Window) -> bool {
    let mut monomials: Vec<Monomial> = Vec::new();
    for bd in rect.iter() {
        if monomials.len() > 200 {
            break;
        }
        monomials.extend(pres.basis_at(bd));
    }
    if monomials.is_empty() {
        return true;
    }
    let mut state = 0x5eed_cafe_u64;
    let mut step = || {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        state as usize
    };
    for _ in 0..1000 {
        let u = &monomials[step() % monomials.len()];
        let v = &monomials[step() % monomials.len()];
        let ue = Element::from_monomial(u.clone());
        let ve = Element::from_monomial(v.clone());
        let uv = pres.mul(&ue, &ve);
        let lhs = d.apply(pres, &uv);
        let sign = if pres.monomial_bidegree(u).n & 1 == 1 { -1 } else { 1 };
        let rhs = pres.add(
            &pres.mul(&d.apply(pres, &ue), &ve),
            &pres.scale(&pres.mul(&ue, &d.apply(pres, &ve)), sign),
        );
        if lhs != rhs {
            return false;
        }
    }
    true
}

fn resolve_annotation(
    run: &SpectralSequenceRun<'_>,
    annotations: &[Annotation],
    possible: &PossibleDifferential,
    field: fp::PrimeField,
) -> Option<String> {
    let bd = possible.src;
    let dim = run.dim(bd);
    let mut covered = fp::Echelon::new(field);
    let mut notes: Vec<String> = Vec::new();
    for ann in annotations.iter().filter(|a| a.bd == bd) {
        match &ann.reason {
            PermanentReason::ImageOfUnit => {
                return Some(format!("image-of-unit: {}", ann.note));
            }
            PermanentReason::PthPower { root } => {
                let power = run.e1.pow(root, field.p());
                if let Some((pbd, coords)) = run.project(&power) {
                    if pbd == bd && coords.iter().any(|&c| c != 0) && covered.insert(&coords) {
                        notes.push(format!("pth-power: {}", ann.note));
                    }
                }
            }
        }
    }
    (covered.rank() == dim && dim > 0).then(|| notes.join("; "))
}
