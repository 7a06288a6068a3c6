//! The `.scn` scenario format: a line-oriented declarative description of one
//! computation. See `corpus/FORMAT.md` in the repository root for the
//! documented grammar. Parsing reports syntax errors with line and column and
//! semantic errors with the offending field.

use crate::expr::{parse_expr, Expr};
use algebra::{Bidegree, Window};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Sseq,
    Hh,
    Hom,
    Cdga,
}

#[derive(Debug, Clone)]
pub struct GenLine {
    pub name: String,
    pub n: i32,
    pub w: i32,
    pub kind: GenKind,
    /// Image in the previous algebra, for re-presentation stages.
    pub image: Option<Expr>,
    pub line: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GenKind {
    Poly,
    Ext,
    Dpow,
    Bounded(u16),
}

#[derive(Debug, Clone)]
pub struct RuleLine {
    pub gen: String,
    pub power: u16,
    pub rhs: Expr,
    pub line: usize,
}

#[derive(Debug, Clone)]
pub struct AlgebraDef {
    pub id: String,
    pub from: Option<String>,
    pub gens: Vec<GenLine>,
    pub rules: Vec<RuleLine>,
    /// Separable block prefixes: each expands to `level` generators
    /// `<prefix>0 .. <prefix>{level-1}` at (0,0) with the rule y^p -> y.
    pub seps: Vec<String>,
}

#[derive(Debug, Clone)]
pub struct SeedLine {
    pub gen: String,
    pub target: Expr,
    pub note: String,
    pub line: usize,
}

#[derive(Debug, Clone)]
pub struct SeedGroup {
    pub algebra: String,
    pub jump: i32,
    pub seeds: Vec<SeedLine>,
}

#[derive(Debug, Clone)]
pub struct PermanentLine {
    pub bd: Bidegree,
    pub reason: PermanentKind,
    pub note: String,
}

#[derive(Debug, Clone)]
pub enum PermanentKind {
    Unit,
    PthPower(Expr),
}

#[derive(Debug, Clone)]
pub enum Expected {
    /// Detection against a presentation with generator images in E_1.
    Algebra { id: String, images: Vec<(String, Expr)>, full: bool },
    /// Dims-only comparison against the homology of a declared CDGA: the
    /// algebra id together with its scenario seed group.
    Homology { id: String },
}

#[derive(Debug, Clone)]
pub struct HhSection {
    pub algebra: String,
    pub cap: usize,
    pub expect_dims: Option<String>,
    /// Named elements of model algebras: (name, algebra id, expression).
    pub defines: Vec<(String, String, Expr)>,
    /// Exact equalities in a model algebra: (algebra id, lhs, rhs).
    pub asserts: Vec<(String, Expr, Expr)>,
    /// Bar-side span membership: class expression, allowed span expressions.
    pub barspans: Vec<(Expr, Vec<Expr>)>,
}

#[derive(Debug, Clone)]
pub struct HomSection {
    pub from: String,
    pub to: String,
    pub maps: Vec<(String, Expr)>,
    pub expect_ranks: Vec<(Bidegree, usize)>,
}

#[derive(Debug, Clone)]
pub struct Scenario {
    pub name: String,
    pub prime: u32,
    pub mode: Mode,
    pub window: Window,
    pub level: usize,
    pub algebras: Vec<AlgebraDef>,
    pub seed_groups: Vec<SeedGroup>,
    pub permanents: Vec<PermanentLine>,
    pub expected: Option<Expected>,
    /// Multiplicative generators of the final page, as expressions in the
    /// last stage's presentation; used by the Leibniz stability argument.
    pub pagegens: Option<Vec<Expr>>,
    pub hh: Option<HhSection>,
    pub hom: Option<HomSection>,
}

impl Scenario {
    pub fn algebra(&self, id: &str) -> Option<&AlgebraDef> {
        self.algebras.iter().find(|a| a.id == id)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub msg: String,
}

impl std::fmt::Display for ParseError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.col, self.msg)
    }
}

impl std::error::Error for ParseError {}

fn err<T>(line: usize, col: usize, msg: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError { line, col, msg: msg.into() })
}

/// Parse a scenario file. The error for an empty file points at 1:1.
pub fn parse_scenario(text: &str) -> Result<Scenario, ParseError> {
    let mut name = None;
    let mut prime = None;
    let mut mode = None;
    let mut window = None;
    let mut level = 2usize;
    let mut algebras: Vec<AlgebraDef> = Vec::new();
    let mut seed_groups: Vec<SeedGroup> = Vec::new();
    let mut permanents: Vec<PermanentLine> = Vec::new();
    let mut expected: Option<Expected> = None;
    let mut pagegens: Option<Vec<Expr>> = None;
    let mut hh: Option<HhSection> = None;
    let mut hom: Option<HomSection> = None;

    #[derive(PartialEq)]
    enum Section {
        Top,
        Algebra(usize),
        Seeds(usize),
        Images,
        PageGens,
        HomMaps,
    }
    let mut section = Section::Top;

    for (lineno0, raw) in text.lines().enumerate() {
        let lineno = lineno0 + 1;
        let line = raw.split('#').next().unwrap_or("").trim_end();
        let trimmed = line.trim_start();
        if trimmed.is_empty() {
            continue;
        }
        let col = raw.len() - raw.trim_start().len() + 1;
        let words: Vec<&str> = trimmed.split_whitespace().collect();
        match section {
            Section::Algebra(idx) => match words[0] {
                "gen" => {
                    if words.len() < 5 {
                        return err(lineno, col, "gen needs: gen <name> <n> <w> <kind>");
                    }
                    let n: i32 = words[2]
                        .parse()
                        .or_else(|_| err(lineno, col, format!("bad degree `{}`", words[2])))?;
                    let w: i32 = words[3]
                        .parse()
                        .or_else(|_| err(lineno, col, format!("bad weight `{}`", words[3])))?;
                    let kind = match words[4] {
                        "poly" => GenKind::Poly,
                        "ext" => GenKind::Ext,
                        "dpow" => GenKind::Dpow,
                        k if k.starts_with("bounded:") => {
                            let h: u16 = k[8..].parse().or_else(|_| {
                                err(lineno, col, format!("bad bound in `{k}`"))
                            })?;
                            GenKind::Bounded(h)
                        }
                        k => return err(lineno, col, format!("unknown generator kind `{k}`")),
                    };
                    let image = match words.iter().position(|&wd| wd == "=") {
                        Some(i) => {
                            let expr_text = words[i + 1..].join(" ");
                            Some(parse_expr(&expr_text).map_err(|e| ParseError {
                                line: lineno,
                                col,
                                msg: format!("algebras[{idx}].gen {}: {e}", words[1]),
                            })?)
                        }
                        None => None,
                    };
                    algebras[idx].gens.push(GenLine {
                        name: words[1].to_string(),
                        n,
                        w,
                        kind,
                        image,
                        line: lineno,
                    });
                }
                "rule" => {
                    // rule <name>^<h> = <expr>
                    let (head, rest) = match trimmed[4..].split_once('=') {
                        Some((h, r)) => (h.trim(), r.trim()),
                        None => return err(lineno, col, "rule needs: rule <gen>^<h> = <expr>"),
                    };
                    let (gname, hpow) = match head.split_once('^') {
                        Some((g, h)) => (g.trim(), h.trim()),
                        None => return err(lineno, col, "rule head needs the form <gen>^<h>"),
                    };
                    let power: u16 = hpow
                        .parse()
                        .or_else(|_| err(lineno, col, format!("bad rule power `{hpow}`")))?;
                    let rhs = if rest == "0" {
                        Expr::default()
                    } else {
                        parse_expr(rest).map_err(|e| ParseError {
                            line: lineno,
                            col,
                            msg: format!("rules[{gname}]: {e}"),
                        })?
                    };
                    algebras[idx].rules.push(RuleLine {
                        gen: gname.to_string(),
                        power,
                        rhs,
                        line: lineno,
                    });
                }
                "sep" => {
                    if words.len() != 2 {
                        return err(lineno, col, "sep needs: sep <prefix>");
                    }
                    algebras[idx].seps.push(words[1].to_string());
                }
                "end" => section = Section::Top,
                other => return err(lineno, col, format!("unexpected `{other}` in algebra block")),
            },
            Section::Seeds(idx) => match words[0] {
                "d" => {
                    // d <gen> = <expr> ; <note>
                    let body = &trimmed[1..];
                    let (head, rest) = match body.split_once('=') {
                        Some(x) => x,
                        None => return err(lineno, col, "seed needs: d <gen> = <expr> ; <note>"),
                    };
                    let gen = head.trim().to_string();
                    let (expr_text, note) = match rest.split_once(';') {
                        Some((e, n)) => (e.trim(), n.trim().to_string()),
                        None => {
                            return err(
                                lineno,
                                col,
                                format!("seeds[{gen}]: every seed carries a provenance note after `;`"),
                            )
                        }
                    };
                    if note.is_empty() {
                        return err(lineno, col, format!("seeds[{gen}]: empty provenance note"));
                    }
                    let target = parse_expr(expr_text).map_err(|e| ParseError {
                        line: lineno,
                        col,
                        msg: format!("seeds[{gen}]: {e}"),
                    })?;
                    seed_groups[idx].seeds.push(SeedLine { gen, target, note, line: lineno });
                }
                "end" => section = Section::Top,
                other => return err(lineno, col, format!("unexpected `{other}` in seeds block")),
            },
            Section::Images => match words[0] {
                "end" => section = Section::Top,
                _ => {
                    let (head, rest) = match trimmed.split_once('=') {
                        Some(x) => x,
                        None => return err(lineno, col, "image needs: <gen> = <expr>"),
                    };
                    let gen = head.trim().to_string();
                    let image = parse_expr(rest.trim()).map_err(|e| ParseError {
                        line: lineno,
                        col,
                        msg: format!("images[{gen}]: {e}"),
                    })?;
                    match &mut expected {
                        Some(Expected::Algebra { images, .. }) => images.push((gen, image)),
                        _ => return err(lineno, col, "images outside an `expected algebra` block"),
                    }
                }
            },
            Section::PageGens => match words[0] {
                "end" => section = Section::Top,
                _ => {
                    let e = parse_expr(trimmed).map_err(|e| ParseError {
                        line: lineno,
                        col,
                        msg: format!("pagegens: {e}"),
                    })?;
                    pagegens.as_mut().unwrap().push(e);
                }
            },
            Section::HomMaps => match words[0] {
                "end" => section = Section::Top,
                "map" => {
                    let rest = &trimmed[3..];
                    let (head, expr_text) = match rest.split_once('=') {
                        Some(x) => x,
                        None => return err(lineno, col, "map needs: map <gen> = <expr>"),
                    };
                    let gen = head.trim().to_string();
                    let image = if expr_text.trim() == "0" {
                        Expr::default()
                    } else {
                        parse_expr(expr_text.trim()).map_err(|e| ParseError {
                            line: lineno,
                            col,
                            msg: format!("hom.map[{gen}]: {e}"),
                        })?
                    };
                    match &mut hom {
                        Some(h) => h.maps.push((gen, image)),
                        None => return err(lineno, col, "map outside a hom block"),
                    }
                }
                other => return err(lineno, col, format!("unexpected `{other}` in hom block")),
            },
            Section::Top => match words[0] {
                "scenario" => {
                    if words.len() != 2 {
                        return err(lineno, col, "scenario needs exactly one name");
                    }
                    name = Some(words[1].to_string());
                }
                "prime" => {
                    prime = Some(words.get(1).and_then(|s| s.parse().ok()).map_or_else(
                        || err(lineno, col, "prime needs a number"),
                        Ok,
                    )?);
                }
                "mode" => {
                    mode = Some(match words.get(1).copied() {
                        Some("sseq") => Mode::Sseq,
                        Some("hh") => Mode::Hh,
                        Some("hom-check") | Some("hom") => Mode::Hom,
                        Some("cdga") => Mode::Cdga,
                        other => {
                            return err(lineno, col, format!("unknown mode {other:?}"))
                        }
                    });
                }
                "window" => {
                    if words.len() != 4 {
                        return err(lineno, col, "window needs: window <n_min> <n_max> <w_max>");
                    }
                    let parse = |s: &str| -> Result<i32, ParseError> {
                        s.parse().or_else(|_| err(lineno, col, format!("bad window bound `{s}`")))
                    };
                    window = Some(Window::new(parse(words[1])?, parse(words[2])?, parse(words[3])?));
                }
                "level" => {
                    level = words
                        .get(1)
                        .and_then(|s| s.parse().ok())
                        .map_or_else(|| err(lineno, col, "level needs a number"), Ok)?;
                }
                "algebra" => {
                    if words.len() != 2 && !(words.len() == 4 && words[2] == "from") {
                        return err(lineno, col, "algebra needs: algebra <id> [from <id>]");
                    }
                    let from = (words.len() == 4).then(|| words[3].to_string());
                    algebras.push(AlgebraDef {
                        id: words[1].to_string(),
                        from,
                        gens: Vec::new(),
                        rules: Vec::new(),
                        seps: Vec::new(),
                    });
                    section = Section::Algebra(algebras.len() - 1);
                }
                "seeds" => {
                    // seeds on <algebra> jump <r>
                    if words.len() != 5 || words[1] != "on" || words[3] != "jump" {
                        return err(lineno, col, "seeds needs: seeds on <algebra> jump <r>");
                    }
                    let jump: i32 = words[4]
                        .parse()
                        .or_else(|_| err(lineno, col, format!("bad jump `{}`", words[4])))?;
                    if jump == 0 {
                        return err(
                            lineno,
                            col,
                            format!("seeds on {}: weight jump must be positive", words[2]),
                        );
                    }
                    seed_groups.push(SeedGroup {
                        algebra: words[2].to_string(),
                        jump,
                        seeds: Vec::new(),
                    });
                    section = Section::Seeds(seed_groups.len() - 1);
                }
                "permanent" => {
                    // permanent at <n> <w> unit|pthpower <expr> ; <note>
                    let (head, note) = match trimmed.split_once(';') {
                        Some((h, n)) => (h.trim(), n.trim().to_string()),
                        None => return err(lineno, col, "permanent needs a note after `;`"),
                    };
                    let hw: Vec<&str> = head.split_whitespace().collect();
                    if hw.len() < 5 || hw[1] != "at" {
                        return err(
                            lineno,
                            col,
                            "permanent needs: permanent at <n> <w> unit|pthpower <expr> ; <note>",
                        );
                    }
                    let n: i32 = hw[2]
                        .parse()
                        .or_else(|_| err(lineno, col, format!("bad degree `{}`", hw[2])))?;
                    let w: i32 = hw[3]
                        .parse()
                        .or_else(|_| err(lineno, col, format!("bad weight `{}`", hw[3])))?;
                    let reason = match hw[4] {
                        "unit" => PermanentKind::Unit,
                        "pthpower" => {
                            let expr_text = hw[5..].join(" ");
                            PermanentKind::PthPower(parse_expr(&expr_text).map_err(|e| {
                                ParseError { line: lineno, col, msg: format!("permanent: {e}") }
                            })?)
                        }
                        other => {
                            return err(lineno, col, format!("unknown permanent reason `{other}`"))
                        }
                    };
                    permanents.push(PermanentLine { bd: Bidegree::new(n, w), reason, note });
                }
                "expected" => match words.get(1).copied() {
                    Some("algebra") => {
                        let id = words
                            .get(2)
                            .map_or_else(|| err(lineno, col, "expected algebra needs an id"), |s| {
                                Ok(s.to_string())
                            })?;
                        let full = match words.get(3).copied() {
                            None | Some("full") => true,
                            Some("dims") => false,
                            Some(other) => {
                                return err(lineno, col, format!("unknown compare mode `{other}`"))
                            }
                        };
                        expected = Some(Expected::Algebra { id, images: Vec::new(), full });
                    }
                    Some("homology") => {
                        let id = words.get(2).map_or_else(
                            || err(lineno, col, "expected homology needs an algebra id"),
                            |s| Ok(s.to_string()),
                        )?;
                        expected = Some(Expected::Homology { id });
                    }
                    other => {
                        return err(lineno, col, format!("unknown expected form {other:?}"))
                    }
                },
                "images" => section = Section::Images,
                "pagegens" => {
                    pagegens = Some(Vec::new());
                    section = Section::PageGens;
                }
                "hh" => {
                    // hh on <algebra> cap <L>
                    if words.len() != 5 || words[1] != "on" || words[3] != "cap" {
                        return err(lineno, col, "hh needs: hh on <algebra> cap <L>");
                    }
                    let cap: usize = words[4]
                        .parse()
                        .or_else(|_| err(lineno, col, format!("bad cap `{}`", words[4])))?;
                    hh = Some(HhSection {
                        algebra: words[2].to_string(),
                        cap,
                        expect_dims: None,
                        defines: Vec::new(),
                        asserts: Vec::new(),
                        barspans: Vec::new(),
                    });
                }
                "expect" => match words.get(1).copied() {
                    Some("dims") => {
                        let id = words.get(2).map_or_else(
                            || err(lineno, col, "expect dims needs an algebra id"),
                            |s| Ok(s.to_string()),
                        )?;
                        match &mut hh {
                            Some(h) => h.expect_dims = Some(id),
                            None => return err(lineno, col, "expect dims outside an hh scenario"),
                        }
                    }
                    Some("rank") => {
                        // expect rank at <n> <w> = <k>
                        if words.len() != 7 || words[2] != "at" || words[5] != "=" {
                            return err(lineno, col, "expect rank needs: expect rank at <n> <w> = <k>");
                        }
                        let n: i32 = words[3]
                            .parse()
                            .or_else(|_| err(lineno, col, format!("bad degree `{}`", words[3])))?;
                        let w: i32 = words[4]
                            .parse()
                            .or_else(|_| err(lineno, col, format!("bad weight `{}`", words[4])))?;
                        let k: usize = words[6]
                            .parse()
                            .or_else(|_| err(lineno, col, format!("bad rank `{}`", words[6])))?;
                        match &mut hom {
                            Some(h) => h.expect_ranks.push((Bidegree::new(n, w), k)),
                            None => return err(lineno, col, "expect rank outside a hom scenario"),
                        }
                    }
                    other => return err(lineno, col, format!("unknown expect form {other:?}")),
                },
                "define" => {
                    // define <name> = <expr> in <algebra>
                    let rest = &trimmed[6..];
                    let (head, tail) = match rest.split_once('=') {
                        Some(x) => x,
                        None => return err(lineno, col, "define needs: define <name> = <expr> in <algebra>"),
                    };
                    let (expr_text, alg) = match tail.rsplit_once(" in ") {
                        Some(x) => x,
                        None => return err(lineno, col, "define needs a trailing `in <algebra>`"),
                    };
                    let e = parse_expr(expr_text.trim()).map_err(|e| ParseError {
                        line: lineno,
                        col,
                        msg: format!("define: {e}"),
                    })?;
                    match &mut hh {
                        Some(h) => h.defines.push((
                            head.trim().to_string(),
                            alg.trim().to_string(),
                            e,
                        )),
                        None => return err(lineno, col, "define outside an hh scenario"),
                    }
                }
                "assert" => {
                    // assert <expr> == <expr> in <algebra>
                    let rest = &trimmed[6..];
                    let (lhs_text, tail) = match rest.split_once("==") {
                        Some(x) => x,
                        None => return err(lineno, col, "assert needs: assert <expr> == <expr> in <algebra>"),
                    };
                    let (rhs_text, alg) = match tail.rsplit_once(" in ") {
                        Some(x) => x,
                        None => return err(lineno, col, "assert needs a trailing `in <algebra>`"),
                    };
                    let lhs = parse_expr(lhs_text.trim()).map_err(|e| ParseError {
                        line: lineno,
                        col,
                        msg: format!("assert lhs: {e}"),
                    })?;
                    let rhs = parse_expr(rhs_text.trim()).map_err(|e| ParseError {
                        line: lineno,
                        col,
                        msg: format!("assert rhs: {e}"),
                    })?;
                    match &mut hh {
                        Some(h) => h.asserts.push((alg.trim().to_string(), lhs, rhs)),
                        None => return err(lineno, col, "assert outside an hh scenario"),
                    }
                }
                "barspan" => {
                    // barspan <expr> in { <expr> , <expr> }
                    let rest = &trimmed[7..];
                    let (class_text, span_text) = match rest.split_once(" in ") {
                        Some(x) => x,
                        None => return err(lineno, col, "barspan needs: barspan <expr> in { ... }"),
                    };
                    let span_text = span_text.trim();
                    if !span_text.starts_with('{') || !span_text.ends_with('}') {
                        return err(lineno, col, "barspan span must be wrapped in { }");
                    }
                    let class = parse_expr(class_text.trim()).map_err(|e| ParseError {
                        line: lineno,
                        col,
                        msg: format!("barspan class: {e}"),
                    })?;
                    let mut span = Vec::new();
                    for part in span_text[1..span_text.len() - 1].split(',') {
                        span.push(parse_expr(part.trim()).map_err(|e| ParseError {
                            line: lineno,
                            col,
                            msg: format!("barspan span: {e}"),
                        })?);
                    }
                    match &mut hh {
                        Some(h) => h.barspans.push((class, span)),
                        None => return err(lineno, col, "barspan outside an hh scenario"),
                    }
                }
                "hom" => {
                    // hom from <A> to <B>
                    if words.len() != 5 || words[1] != "from" || words[3] != "to" {
                        return err(lineno, col, "hom needs: hom from <A> to <B>");
                    }
                    hom = Some(HomSection {
                        from: words[2].to_string(),
                        to: words[4].to_string(),
                        maps: Vec::new(),
                        expect_ranks: Vec::new(),
                    });
                    section = Section::HomMaps;
                }
                other => return err(lineno, col, format!("unknown directive `{other}`")),
            },
        }
    }

    let name = match name {
        Some(n) => n,
        None => return err(1, 1, "missing `scenario <name>` header"),
    };
    let prime = prime.ok_or(ParseError { line: 1, col: 1, msg: "missing `prime`".into() })?;
    let mode = mode.ok_or(ParseError { line: 1, col: 1, msg: "missing `mode`".into() })?;
    let window = window.ok_or(ParseError { line: 1, col: 1, msg: "missing `window`".into() })?;

    let scenario = Scenario {
        name,
        prime,
        mode,
        window,
        level,
        algebras,
        seed_groups,
        permanents,
        expected,
        pagegens,
        hh,
        hom,
    };
    validate(&scenario)?;
    Ok(scenario)
}

/// Cross-field semantic checks that do not need the engine.
fn validate(s: &Scenario) -> Result<(), ParseError> {
    for group in &s.seed_groups {
        let alg = s.algebra(&group.algebra).ok_or(ParseError {
            line: 1,
            col: 1,
            msg: format!("seeds on unknown algebra `{}`", group.algebra),
        })?;
        for seed in &group.seeds {
            // Known generator names; divided power and separable expansion
            // suffixes are resolved after the presentation is built.
            let sep_hit = alg.seps.iter().any(|p| {
                seed.gen.starts_with(p.as_str())
                    && seed.gen[p.len()..].chars().all(|c| c.is_ascii_digit())
                    && !seed.gen[p.len()..].is_empty()
            });
            let dpow_hit = alg.gens.iter().any(|g| {
                matches!(g.kind, GenKind::Dpow)
                    && seed.gen.starts_with(&format!("{}_g", g.name))
            });
            if !sep_hit && !dpow_hit && alg.gens.iter().all(|g| g.name != seed.gen) {
                return err(
                    seed.line,
                    1,
                    format!("seeds[{}]: unknown generator name in algebra `{}`", seed.gen, alg.id),
                );
            }
        }
    }
    if let Some(Expected::Algebra { id, .. }) = &s.expected {
        if s.algebra(id).is_none() {
            return err(1, 1, format!("expected algebra `{id}` is not declared"));
        }
    }
    if let Some(Expected::Homology { id }) = &s.expected {
        if s.algebra(id).is_none() {
            return err(1, 1, format!("expected homology algebra `{id}` is not declared"));
        }
        if !s.seed_groups.iter().any(|g| g.algebra == *id) {
            return err(1, 1, format!("expected homology needs a seeds group on `{id}`"));
        }
    }
    if matches!(s.mode, Mode::Hom) && s.hom.is_none() {
        return err(1, 1, "hom mode needs a hom block");
    }
    if matches!(s.mode, Mode::Hh) && s.hh.is_none() {
        return err(1, 1, "hh mode needs an hh block");
    }
    Ok(())
}
