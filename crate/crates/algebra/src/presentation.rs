//! Finitely presented bigraded-commutative F_p-algebras with a locally finite
//! monomial basis.
//!
//! A presentation is a list of generators, each carrying a bidegree
//! (topological degree n, filtration weight w) and a kind, together with at
//! most one triangular rewrite rule per generator. The rewrite rules are pure
//! powers `g^h -> linear combination of smaller monomials`, where "smaller"
//! means strictly smaller in a right-to-left lexicographic order on exponent
//! vectors. That order makes every reduction chain terminate, and covers all
//! the relations this engine needs: exterior squares, truncated divided
//! powers, separable idempotent coordinates `y^p -> y`, and power relations
//! with lower-order correction terms.
//!
//! Products carry the Koszul sign `(-1)^{n(a) n(b)}` in the topological
//! degree only; weights are auxiliary and never contribute signs.

use fp::{FpMatrix, PrimeField};
use std::collections::BTreeMap;

/// Topological degree `n` (may be negative) and filtration weight `w >= 0`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug, Hash)]
pub struct Bidegree {
    pub n: i32,
    pub w: i32,
}

impl Bidegree {
    pub fn new(n: i32, w: i32) -> Self {
        Bidegree { n, w }
    }

    pub fn add(self, other: Bidegree) -> Bidegree {
        Bidegree { n: self.n + other.n, w: self.w + other.w }
    }

    pub fn scale(self, k: i32) -> Bidegree {
        Bidegree { n: self.n * k, w: self.w * k }
    }

    pub fn is_zero(self) -> bool {
        self.n == 0 && self.w == 0
    }
}

impl std::fmt::Display for Bidegree {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({},{})", self.n, self.w)
    }
}

/// Enumeration window: bidegrees with `n_min <= n <= n_max`, `0 <= w <= w_max`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Window {
    pub n_min: i32,
    pub n_max: i32,
    pub w_max: i32,
}

impl Window {
    pub fn new(n_min: i32, n_max: i32, w_max: i32) -> Self {
        Window { n_min, n_max, w_max }
    }

    pub fn contains(&self, bd: Bidegree) -> bool {
        bd.n >= self.n_min && bd.n <= self.n_max && bd.w >= 0 && bd.w <= self.w_max
    }

    /// Intersection of two windows, `None` when empty.
    pub fn intersect(&self, other: &Window) -> Option<Window> {
        let w = Window {
            n_min: self.n_min.max(other.n_min),
            n_max: self.n_max.min(other.n_max),
            w_max: self.w_max.min(other.w_max),
        };
        (w.n_min <= w.n_max && w.w_max >= 0).then_some(w)
    }

    pub fn iter(&self) -> impl Iterator<Item = Bidegree> + '_ {
        let w = *self;
        (w.n_min..=w.n_max).flat_map(move |n| (0..=w.w_max).map(move |wt| Bidegree::new(n, wt)))
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Kind {
    Polynomial,
    Exterior,
    /// Divided power generator; expanded at build time into a family of
    /// height-p truncated generators, one per p-th power scale.
    DividedPower,
    Bounded(u16),
}

#[derive(Clone, Debug)]
pub struct GeneratorSpec {
    pub name: String,
    pub degree: Bidegree,
    pub kind: Kind,
}

impl GeneratorSpec {
    pub fn new(name: &str, n: i32, w: i32, kind: Kind) -> Self {
        GeneratorSpec { name: name.to_string(), degree: Bidegree::new(n, w), kind }
    }
}

#[derive(Clone, Debug)]
pub struct Generator {
    pub name: String,
    pub degree: Bidegree,
    pub kind: Kind,
}

/// A monomial in a fixed presentation: one exponent per generator, in
/// declaration order. `Ord` is plain lexicographic on exponent vectors,
/// which is the fixed basis order within a bidegree.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug, Hash)]
pub struct Monomial {
    pub exps: Vec<u16>,
}

impl Monomial {
    pub fn one(len: usize) -> Self {
        Monomial { exps: vec![0; len] }
    }

    pub fn is_one(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }
}

/// Right-to-left lexicographic comparison on exponent vectors: the
/// termination order for rewriting. Each rule's right-hand monomials must be
/// strictly smaller than the pure power on the left.
fn cmp_rl(a: &[u16], b: &[u16]) -> std::cmp::Ordering {
    for i in (0..a.len().max(b.len())).rev() {
        let x = a.get(i).copied().unwrap_or(0);
        let y = b.get(i).copied().unwrap_or(0);
        if x != y {
            return x.cmp(&y);
        }
    }
    std::cmp::Ordering::Equal
}

/// A sum of normal-form monomials with nonzero coefficients in `[1, p)`.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Element {
    pub terms: BTreeMap<Monomial, u32>,
}

impl Element {
    pub fn zero() -> Self {
        Element { terms: BTreeMap::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn from_monomial(m: Monomial) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(m, 1);
        Element { terms }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PresentationError {
    DuplicateName(String),
    NegativeWeight(String),
    UnboundedNegative(String),
    UnboundedDegreeZero(String),
    OddPolynomial(String),
    EvenExterior(String),
    OddRelationTarget(String),
    BadDividedPower(String),
    BadBound(String),
    RuleOnUnboundedGenerator(String),
    RulePowerMismatch { gen: String, expected: u16, got: u16 },
    DuplicateRule(String),
    RuleInhomogeneous(String),
    RuleNotTriangular { gen: String, monomial: String },
    RuleRhsNotNormal(String),
    UnknownGenerator(String),
    BadCoefficient { gen: String, coeff: i64 },
    EmptyWindow,
}

impl std::fmt::Display for PresentationError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        use PresentationError::*;
        match self {
            DuplicateName(g) => write!(f, "duplicate generator name `{g}`"),
            NegativeWeight(g) => write!(f, "generator `{g}` has negative weight"),
            UnboundedNegative(g) => write!(
                f,
                "local finiteness violated: generator `{g}` has negative topological degree but no exponent bound"
            ),
            UnboundedDegreeZero(g) => write!(
                f,
                "local finiteness violated: generator `{g}` sits in bidegree (0,0) but has no exponent bound"
            ),
            OddPolynomial(g) => write!(
                f,
                "generator `{g}` has odd topological degree at an odd prime and must be exterior or bounded by 2"
            ),
            EvenExterior(g) => write!(
                f,
                "exterior generator `{g}` must have odd topological degree at an odd prime; use bounded:2 for an even truncation"
            ),
            OddRelationTarget(g) => write!(
                f,
                "generator `{g}` has odd topological degree at an odd prime; its square must rewrite to zero"
            ),
            BadDividedPower(g) => write!(
                f,
                "divided power generator `{g}` must have even positive topological degree"
            ),
            BadBound(g) => write!(f, "generator `{g}` has exponent bound below 2"),
            RuleOnUnboundedGenerator(g) => {
                write!(f, "rewrite rule on `{g}` which is not a bounded generator")
            }
            RulePowerMismatch { gen, expected, got } => write!(
                f,
                "rewrite rule on `{gen}` has power {got}, expected the bound {expected}"
            ),
            DuplicateRule(g) => write!(f, "more than one rewrite rule on `{g}`"),
            RuleInhomogeneous(g) => write!(f, "rewrite rule on `{g}` is not bidegree-homogeneous"),
            RuleNotTriangular { gen, monomial } => write!(
                f,
                "rewrite rule on `{gen}` is not triangular: `{monomial}` does not precede the left-hand power"
            ),
            RuleRhsNotNormal(g) => {
                write!(f, "rewrite rule on `{g}` has a right-hand monomial that is not in normal form")
            }
            UnknownGenerator(g) => write!(f, "unknown generator `{g}`"),
            BadCoefficient { gen, coeff } => {
                write!(f, "rewrite rule on `{gen}` has coefficient {coeff} that reduces to zero")
            }
            EmptyWindow => write!(f, "window intersection is empty"),
        }
    }
}

impl std::error::Error for PresentationError {}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InhomogeneousElement;

impl std::fmt::Display for InhomogeneousElement {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "element is not bidegree-homogeneous")
    }
}

impl std::error::Error for InhomogeneousElement {}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WindowViolation(pub Bidegree);

impl std::fmt::Display for WindowViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "bidegree ({},{}) is outside the window", self.0.n, self.0.w)
    }
}

impl std::error::Error for WindowViolation {}

#[derive(Debug)]
struct Rule {
    power: u16,
    rhs: Element,
}

/// A finitely presented bigraded-commutative F_p-algebra.
#[derive(Debug)]
pub struct Presentation {
    field: PrimeField,
    gens: Vec<Generator>,
    rules: Vec<Option<Rule>>,
    window: Window,
    /// Most negative topological degree reachable by generators at or after
    /// index i; used to prune basis enumeration.
    suffix_min_n: Vec<i64>,
}

pub struct PresentationBuilder {
    field: PrimeField,
    window: Window,
    gens: Vec<GeneratorSpec>,
    rules: Vec<(String, u16, Vec<(i64, Vec<(String, u16)>)>)>,
}

impl PresentationBuilder {
    pub fn new(field: PrimeField, window: Window) -> Self {
        PresentationBuilder { field, window, gens: Vec::new(), rules: Vec::new() }
    }

    pub fn generator(mut self, name: &str, n: i32, w: i32, kind: Kind) -> Self {
        self.gens.push(GeneratorSpec::new(name, n, w, kind));
        self
    }

    pub fn add_gen(&mut self, spec: GeneratorSpec) {
        self.gens.push(spec);
    }

    /// Rewrite rule `gen^power -> sum of coeff * monomial`, each monomial a
    /// list of (generator name, exponent) pairs.
    pub fn rule(mut self, gen: &str, power: u16, rhs: &[(i64, &[(&str, u16)])]) -> Self {
        self.add_rule(
            gen,
            power,
            rhs.iter()
                .map(|(c, m)| (*c, m.iter().map(|(g, e)| (g.to_string(), *e)).collect()))
                .collect(),
        );
        self
    }

    pub fn add_rule(&mut self, gen: &str, power: u16, rhs: Vec<(i64, Vec<(String, u16)>)>) {
        self.rules.push((gen.to_string(), power, rhs));
    }

    pub fn build(self) -> Result<Presentation, PresentationError> {
        Presentation::build(self.field, self.window, self.gens, self.rules)
    }
}

/// Expand a divided power generator into its height-p truncated family:
/// generators at bidegrees `p^i * degree` for every i with `p^i * n` inside
/// the window, each bounded by p with zero rewrite target. The scale-1
/// generator keeps the base name; higher scales are suffixed `_g{p^i}`.
pub fn expand_divided_powers(
    field: PrimeField,
    spec: &GeneratorSpec,
    window: &Window,
) -> Result<Vec<GeneratorSpec>, PresentationError> {
    if spec.degree.n <= 0 || spec.degree.n % 2 != 0 {
        return Err(PresentationError::BadDividedPower(spec.name.clone()));
    }
    let p = field.p() as i64;
    let mut out = Vec::new();
    let mut scale: i64 = 1;
    while scale * spec.degree.n as i64 <= window.n_max as i64 {
        let name =
            if scale == 1 { spec.name.clone() } else { format!("{}_g{}", spec.name, scale) };
        out.push(GeneratorSpec {
            name,
            degree: Bidegree::new(
                (scale * spec.degree.n as i64) as i32,
                (scale * spec.degree.w as i64) as i32,
            ),
            kind: Kind::DividedPower,
        });
        scale *= p;
    }
    Ok(out)
}

impl Presentation {
    fn build(
        field: PrimeField,
        window: Window,
        specs: Vec<GeneratorSpec>,
        rule_specs: Vec<(String, u16, Vec<(i64, Vec<(String, u16)>)>)>,
    ) -> Result<Presentation, PresentationError> {
        let p = field.p();
        let mut gens: Vec<Generator> = Vec::new();
        for spec in &specs {
            match spec.kind {
                Kind::DividedPower => {
                    for g in expand_divided_powers(field, spec, &window)? {
                        gens.push(Generator { name: g.name, degree: g.degree, kind: g.kind });
                    }
                }
                _ => gens.push(Generator {
                    name: spec.name.clone(),
                    degree: spec.degree,
                    kind: spec.kind,
                }),
            }
        }

        let mut names: BTreeMap<String, usize> = BTreeMap::new();
        for (i, g) in gens.iter().enumerate() {
            if names.insert(g.name.clone(), i).is_some() {
                return Err(PresentationError::DuplicateName(g.name.clone()));
            }
            if g.degree.w < 0 {
                return Err(PresentationError::NegativeWeight(g.name.clone()));
            }
            let bound = kind_bound(g.kind, p);
            if let Some(h) = bound {
                if h < 2 {
                    return Err(PresentationError::BadBound(g.name.clone()));
                }
            }
            if g.degree.n < 0 && bound.is_none() {
                return Err(PresentationError::UnboundedNegative(g.name.clone()));
            }
            if g.degree.is_zero() && bound.is_none() {
                return Err(PresentationError::UnboundedDegreeZero(g.name.clone()));
            }
            if p != 2 && g.degree.n.rem_euclid(2) == 1 && bound.map_or(true, |b| b > 2) {
                return Err(PresentationError::OddPolynomial(g.name.clone()));
            }
            if p != 2 && g.degree.n.rem_euclid(2) == 0 && matches!(g.kind, Kind::Exterior) {
                return Err(PresentationError::EvenExterior(g.name.clone()));
            }
        }

        let mut pres = Presentation {
            field,
            suffix_min_n: suffix_min(&gens, p),
            rules: gens.iter().map(|_| None).collect(),
            gens,
            window,
        };

        // Implicit rules: exterior squares and truncated divided powers.
        for (i, g) in pres.gens.iter().enumerate() {
            match g.kind {
                Kind::Exterior => pres.rules[i] = Some(Rule { power: 2, rhs: Element::zero() }),
                Kind::DividedPower => {
                    pres.rules[i] = Some(Rule { power: p as u16, rhs: Element::zero() })
                }
                _ => {}
            }
        }

        // Explicit rules, validated for shape, homogeneity and triangularity.
        for (gen_name, power, rhs_terms) in &rule_specs {
            let idx = *names
                .get(gen_name)
                .ok_or_else(|| PresentationError::UnknownGenerator(gen_name.clone()))?;
            let g = pres.gens[idx].clone();
            let bound = match g.kind {
                Kind::Bounded(h) => h,
                _ => return Err(PresentationError::RuleOnUnboundedGenerator(gen_name.clone())),
            };
            if *power != bound {
                return Err(PresentationError::RulePowerMismatch {
                    gen: gen_name.clone(),
                    expected: bound,
                    got: *power,
                });
            }
            if pres.rules[idx].is_some() {
                return Err(PresentationError::DuplicateRule(gen_name.clone()));
            }
            let mut rhs = Element::zero();
            let lhs_bd = g.degree.scale(bound as i32);
            let mut lhs_exps = vec![0u16; pres.gens.len()];
            lhs_exps[idx] = bound;
            for (coeff, mono_pairs) in rhs_terms {
                let c = field.reduce(*coeff);
                if c == 0 {
                    return Err(PresentationError::BadCoefficient {
                        gen: gen_name.clone(),
                        coeff: *coeff,
                    });
                }
                let mut exps = vec![0u16; pres.gens.len()];
                for (name, e) in mono_pairs {
                    let j = *names
                        .get(name)
                        .ok_or_else(|| PresentationError::UnknownGenerator(name.clone()))?;
                    exps[j] += e;
                }
                let m = Monomial { exps };
                if pres.monomial_bidegree(&m) != lhs_bd {
                    return Err(PresentationError::RuleInhomogeneous(gen_name.clone()));
                }
                if !pres.is_normal_for_rules(&m) {
                    return Err(PresentationError::RuleRhsNotNormal(gen_name.clone()));
                }
                if cmp_rl(&m.exps, &lhs_exps) != std::cmp::Ordering::Less {
                    return Err(PresentationError::RuleNotTriangular {
                        gen: gen_name.clone(),
                        monomial: pres.fmt_monomial(&m),
                    });
                }
                let prev = rhs.terms.get(&m).copied().unwrap_or(0);
                let nc = field.add(prev, c);
                if nc == 0 {
                    rhs.terms.remove(&m);
                } else {
                    rhs.terms.insert(m, nc);
                }
            }
            if p != 2 && g.degree.n.rem_euclid(2) == 1 && !rhs.is_zero() {
                return Err(PresentationError::OddRelationTarget(gen_name.clone()));
            }
            pres.rules[idx] = Some(Rule { power: bound, rhs });
        }

        // Bounded generators without an explicit rule truncate to zero.
        for i in 0..pres.gens.len() {
            if let Kind::Bounded(h) = pres.gens[i].kind {
                if pres.rules[i].is_none() {
                    pres.rules[i] = Some(Rule { power: h, rhs: Element::zero() });
                }
            }
        }

        Ok(pres)
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn window(&self) -> Window {
        self.window
    }

    pub fn gens(&self) -> &[Generator] {
        &self.gens
    }

    pub fn gen_index(&self, name: &str) -> Option<usize> {
        self.gens.iter().position(|g| g.name == name)
    }

    pub fn bound(&self, idx: usize) -> Option<u16> {
        self.rules[idx].as_ref().map(|r| r.power)
    }

    pub fn rule_rhs(&self, idx: usize) -> Option<&Element> {
        self.rules[idx].as_ref().map(|r| &r.rhs)
    }

    pub fn monomial_bidegree(&self, m: &Monomial) -> Bidegree {
        let mut bd = Bidegree::new(0, 0);
        for (i, &e) in m.exps.iter().enumerate() {
            if e != 0 {
                bd = bd.add(self.gens[i].degree.scale(e as i32));
            }
        }
        bd
    }

    /// Normality check used while validating rules: exterior and divided
    /// power bounds are already in place, explicit bounded rules may not be.
    fn is_normal_for_rules(&self, m: &Monomial) -> bool {
        m.exps.iter().enumerate().all(|(i, &e)| {
            let limit = match self.gens[i].kind {
                Kind::Polynomial => None,
                Kind::Exterior => Some(2),
                Kind::DividedPower => Some(self.field.p() as u16),
                Kind::Bounded(h) => Some(h),
            };
            limit.map_or(true, |h| e < h)
        })
    }

    /// Bidegree of a homogeneous element; `Ok(None)` for zero.
    pub fn element_bidegree(&self, el: &Element) -> Result<Option<Bidegree>, InhomogeneousElement> {
        let mut bd = None;
        for m in el.terms.keys() {
            let b = self.monomial_bidegree(m);
            match bd {
                None => bd = Some(b),
                Some(prev) if prev != b => return Err(InhomogeneousElement),
                _ => {}
            }
        }
        Ok(bd)
    }

    pub fn one(&self) -> Element {
        Element::from_monomial(Monomial::one(self.gens.len()))
    }

    pub fn gen_element(&self, idx: usize) -> Element {
        let mut exps = vec![0u16; self.gens.len()];
        exps[idx] = 1;
        Element::from_monomial(Monomial { exps })
    }

    pub fn add(&self, a: &Element, b: &Element) -> Element {
        let mut out = a.clone();
        for (m, &c) in &b.terms {
            let prev = out.terms.get(m).copied().unwrap_or(0);
            let nc = self.field.add(prev, c);
            if nc == 0 {
                out.terms.remove(m);
            } else {
                out.terms.insert(m.clone(), nc);
            }
        }
        out
    }

    pub fn scale(&self, a: &Element, c: i64) -> Element {
        let c = self.field.reduce(c);
        if c == 0 {
            return Element::zero();
        }
        let mut out = Element::zero();
        for (m, &x) in &a.terms {
            out.terms.insert(m.clone(), self.field.mul(x, c));
        }
        out
    }

    pub fn sub(&self, a: &Element, b: &Element) -> Element {
        self.add(a, &self.scale(b, -1))
    }

    /// Koszul sign parity for sorting the concatenation `left * right`: each
    /// odd-degree factor of `right` at generator j crosses each odd-degree
    /// factor of `left` at a generator i declared after j.
    fn crossing_parity(&self, left: &[u16], right: &[u16]) -> u32 {
        let mut parity = 0u32;
        for i in 0..self.gens.len() {
            if left[i] == 0 || self.gens[i].degree.n & 1 == 0 {
                continue;
            }
            let li = left[i] as u32 & 1;
            for j in 0..i {
                if right[j] != 0 && self.gens[j].degree.n & 1 == 1 {
                    parity ^= li & (right[j] as u32 & 1);
                }
            }
        }
        parity
    }

    /// Multiply two elements, reducing the result to normal form.
    pub fn mul(&self, a: &Element, b: &Element) -> Element {
        let f = self.field;
        let mut work: Vec<(Vec<u16>, u32)> = Vec::new();
        for (ma, &ca) in &a.terms {
            for (mb, &cb) in &b.terms {
                let c = f.mul(ca, cb);
                if c == 0 {
                    continue;
                }
                let parity = self.crossing_parity(&ma.exps, &mb.exps);
                let c = if parity & 1 == 1 { f.neg(c) } else { c };
                let exps: Vec<u16> = ma.exps.iter().zip(&mb.exps).map(|(&x, &y)| x + y).collect();
                work.push((exps, c));
            }
        }
        self.reduce_worklist(work)
    }

    /// Reduce raw (possibly out-of-bound) monomials to normal form. Each
    /// rewrite strictly decreases the right-to-left lexicographic order, so
    /// this terminates; the step guard is a safety net only.
    fn reduce_worklist(&self, mut work: Vec<(Vec<u16>, u32)>) -> Element {
        let f = self.field;
        let mut out: BTreeMap<Monomial, u32> = BTreeMap::new();
        let mut steps = 0usize;
        while let Some((exps, c)) = work.pop() {
            steps += 1;
            assert!(steps < 10_000_000, "rewrite system failed to terminate");
            let violating =
                (0..self.gens.len()).find(|&i| self.bound(i).map_or(false, |h| exps[i] >= h));
            match violating {
                None => {
                    let m = Monomial { exps };
                    let prev = out.get(&m).copied().unwrap_or(0);
                    let nc = f.add(prev, c);
                    if nc == 0 {
                        out.remove(&m);
                    } else {
                        out.insert(m, nc);
                    }
                }
                Some(i) => {
                    let rule = self.rules[i].as_ref().unwrap();
                    if rule.rhs.is_zero() {
                        continue;
                    }
                    // exps = left * g_i^h * right; substitute each right-hand
                    // monomial for the g_i^h slice. left keeps indices <= i
                    // (exponent at i lowered by h), right keeps indices > i.
                    let mut left = exps.clone();
                    left[i] -= rule.power;
                    for x in left.iter_mut().skip(i + 1) {
                        *x = 0;
                    }
                    let mut right = vec![0u16; self.gens.len()];
                    right[(i + 1)..].copy_from_slice(&exps[(i + 1)..]);
                    for (rm, &rc) in &rule.rhs.terms {
                        let p1 = self.crossing_parity(&left, &rm.exps);
                        let mid: Vec<u16> =
                            left.iter().zip(&rm.exps).map(|(&x, &y)| x + y).collect();
                        let p2 = self.crossing_parity(&mid, &right);
                        let merged: Vec<u16> =
                            mid.iter().zip(&right).map(|(&x, &y)| x + y).collect();
                        let mut nc = f.mul(c, rc);
                        if (p1 ^ p2) & 1 == 1 {
                            nc = f.neg(nc);
                        }
                        if nc != 0 {
                            work.push((merged, nc));
                        }
                    }
                }
            }
        }
        Element { terms: out }
    }

    /// Normal form of an arbitrary exponent vector with coefficient 1.
    pub fn reduce_raw(&self, exps: Vec<u16>) -> Element {
        self.reduce_worklist(vec![(exps, 1)])
    }

    pub fn pow(&self, a: &Element, k: u32) -> Element {
        let mut acc = self.one();
        for _ in 0..k {
            acc = self.mul(&acc, a);
        }
        acc
    }

    /// Build an element from (coefficient, [(generator name, exponent)]) terms.
    pub fn element_from_names(
        &self,
        terms: &[(i64, Vec<(String, u16)>)],
    ) -> Result<Element, PresentationError> {
        let mut acc = Element::zero();
        for (coeff, pairs) in terms {
            let mut exps = vec![0u16; self.gens.len()];
            for (name, e) in pairs {
                let idx = self
                    .gen_index(name)
                    .ok_or_else(|| PresentationError::UnknownGenerator(name.clone()))?;
                exps[idx] += e;
            }
            let reduced = self.reduce_worklist(vec![(exps, self.field.reduce(*coeff))]);
            acc = self.add(&acc, &reduced);
        }
        Ok(acc)
    }

    /// Ordered monomial basis of a bidegree. No window check; any bidegree is
    /// fine because local finiteness is a property of the generator list.
    pub fn basis_at(&self, bd: Bidegree) -> Vec<Monomial> {
        if bd.w < 0 {
            return Vec::new();
        }
        let mut out = Vec::new();
        let mut exps = vec![0u16; self.gens.len()];
        self.enumerate_rec(0, bd.n as i64, bd.w as i64, &mut exps, &mut out);
        out.sort();
        out
    }

    /// Spec-facing basis enumeration: errors when the bidegree is outside the
    /// presentation window.
    pub fn enumerate_basis(&self, bd: Bidegree) -> Result<Vec<Monomial>, WindowViolation> {
        if !self.window.contains(bd) {
            return Err(WindowViolation(bd));
        }
        Ok(self.basis_at(bd))
    }

    fn enumerate_rec(
        &self,
        i: usize,
        n_rem: i64,
        w_rem: i64,
        exps: &mut Vec<u16>,
        out: &mut Vec<Monomial>,
    ) {
        if w_rem < 0 {
            return;
        }
        if i == self.gens.len() {
            if n_rem == 0 && w_rem == 0 {
                out.push(Monomial { exps: exps.clone() });
            }
            return;
        }
        let g = &self.gens[i];
        let n = g.degree.n as i64;
        let w = g.degree.w as i64;
        let suffix = self.suffix_min_n[i + 1];
        let mut e: u16 = 0;
        loop {
            if let Some(h) = self.bound(i) {
                if e >= h {
                    break;
                }
            }
            let n_used = n * e as i64;
            let w_used = w * e as i64;
            if w_used > w_rem {
                break;
            }
            // Later generators contribute at least `suffix` (only bounded
            // generators have negative degree), so once a positive-degree
            // exponent overshoots there is nothing left to find.
            if n > 0 && n_rem - n_used < suffix {
                break;
            }
            exps[i] = e;
            self.enumerate_rec(i + 1, n_rem - n_used, w_rem - w_used, exps, out);
            e += 1;
        }
        exps[i] = 0;
    }

    /// Coordinates of an element supported on the given basis.
    pub fn coords(&self, el: &Element, basis: &[Monomial]) -> Vec<u32> {
        let index: BTreeMap<&Monomial, usize> =
            basis.iter().enumerate().map(|(i, m)| (m, i)).collect();
        let mut v = vec![0u32; basis.len()];
        for (m, &c) in &el.terms {
            let i = *index
                .get(m)
                .unwrap_or_else(|| panic!("monomial {} missing from basis", self.fmt_monomial(m)));
            v[i] = c;
        }
        v
    }

    pub fn element_from_coords(&self, coords: &[u32], basis: &[Monomial]) -> Element {
        let p = self.field.p();
        let mut el = Element::zero();
        for (i, &c) in coords.iter().enumerate() {
            if c % p != 0 {
                el.terms.insert(basis[i].clone(), c % p);
            }
        }
        el
    }

    /// Tensor product: generators of `other` are appended, renamed with an
    /// `_r` suffix on name clashes. The window is the intersection.
    pub fn tensor(&self, other: &Presentation) -> Result<Presentation, PresentationError> {
        assert_eq!(self.field.p(), other.field.p(), "tensor factors over different primes");
        let window =
            self.window.intersect(&other.window).ok_or(PresentationError::EmptyWindow)?;
        let mut specs: Vec<GeneratorSpec> = Vec::new();
        let mut rules: Vec<(String, u16, Vec<(i64, Vec<(String, u16)>)>)> = Vec::new();
        let mut names: std::collections::BTreeSet<String> = Default::default();
        for pres in [self, other] {
            let mut rename: BTreeMap<String, String> = BTreeMap::new();
            for g in pres.gens.iter() {
                let mut name = g.name.clone();
                while !names.insert(name.clone()) {
                    name.push_str("_r");
                }
                rename.insert(g.name.clone(), name.clone());
                // Divided power families are already expanded; carry them over
                // as bounded generators so they do not expand twice.
                let kind = match g.kind {
                    Kind::DividedPower => Kind::Bounded(pres.field.p() as u16),
                    k => k,
                };
                specs.push(GeneratorSpec { name, degree: g.degree, kind });
            }
            for (i, g) in pres.gens.iter().enumerate() {
                if let Kind::Bounded(_) = g.kind {
                    let rule = pres.rules[i].as_ref().unwrap();
                    if !rule.rhs.is_zero() {
                        let rhs = rule
                            .rhs
                            .terms
                            .iter()
                            .map(|(m, &c)| {
                                let pairs = m
                                    .exps
                                    .iter()
                                    .enumerate()
                                    .filter(|(_, &e)| e > 0)
                                    .map(|(j, &e)| (rename[&pres.gens[j].name].clone(), e))
                                    .collect();
                                (c as i64, pairs)
                            })
                            .collect();
                        rules.push((rename[&g.name].clone(), rule.power, rhs));
                    }
                }
            }
        }
        Presentation::build(self.field, window, specs, rules)
    }

    pub fn fmt_monomial(&self, m: &Monomial) -> String {
        if m.is_one() {
            return "1".to_string();
        }
        let mut parts = Vec::new();
        for (i, &e) in m.exps.iter().enumerate() {
            if e == 1 {
                parts.push(self.gens[i].name.clone());
            } else if e > 1 {
                parts.push(format!("{}^{}", self.gens[i].name, e));
            }
        }
        parts.join("*")
    }

    pub fn fmt_element(&self, el: &Element) -> String {
        if el.is_zero() {
            return "0".to_string();
        }
        el.terms
            .iter()
            .map(|(m, &c)| {
                if c == 1 && !m.is_one() {
                    self.fmt_monomial(m)
                } else if m.is_one() {
                    format!("{c}")
                } else {
                    format!("{}*{}", c, self.fmt_monomial(m))
                }
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

fn kind_bound(kind: Kind, p: u32) -> Option<u16> {
    match kind {
        Kind::Polynomial => None,
        Kind::Exterior => Some(2),
        Kind::DividedPower => Some(p as u16),
        Kind::Bounded(h) => Some(h),
    }
}

fn suffix_min(gens: &[Generator], p: u32) -> Vec<i64> {
    let mut out = vec![0i64; gens.len() + 1];
    for i in (0..gens.len()).rev() {
        let g = &gens[i];
        let contrib = if g.degree.n < 0 {
            (kind_bound(g.kind, p).unwrap_or(1) as i64 - 1) * g.degree.n as i64
        } else {
            0
        };
        out[i] = out[i + 1] + contrib;
    }
    out
}

/// A degree- and weight-preserving algebra homomorphism, given by the images
/// of the source generators.
#[derive(Debug)]
pub struct Hom<'a> {
    pub source: &'a Presentation,
    pub target: &'a Presentation,
    images: Vec<Element>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HomError {
    WrongImageCount { expected: usize, got: usize },
    InhomogeneousImage(String),
    DegreeMismatch { gen: String, expected: Bidegree, got: Bidegree },
    RuleViolated { gen: String, power: u16 },
}

impl std::fmt::Display for HomError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            HomError::WrongImageCount { expected, got } => {
                write!(f, "expected {expected} generator images, got {got}")
            }
            HomError::InhomogeneousImage(g) => write!(f, "image of `{g}` is not homogeneous"),
            HomError::DegreeMismatch { gen, expected, got } => write!(
                f,
                "image of `{gen}` has bidegree {got}, expected {expected}"
            ),
            HomError::RuleViolated { gen, power } => {
                write!(f, "homomorphism does not respect the rewrite rule on `{gen}^{power}`")
            }
        }
    }
}

impl std::error::Error for HomError {}

impl<'a> Hom<'a> {
    pub fn new(
        source: &'a Presentation,
        target: &'a Presentation,
        images: Vec<Element>,
    ) -> Result<Self, HomError> {
        if images.len() != source.gens().len() {
            return Err(HomError::WrongImageCount {
                expected: source.gens().len(),
                got: images.len(),
            });
        }
        let hom = Hom { source, target, images };
        for (i, g) in source.gens().iter().enumerate() {
            let img = &hom.images[i];
            match target.element_bidegree(img) {
                Err(_) => return Err(HomError::InhomogeneousImage(g.name.clone())),
                Ok(Some(bd)) if bd != g.degree => {
                    return Err(HomError::DegreeMismatch {
                        gen: g.name.clone(),
                        expected: g.degree,
                        got: bd,
                    })
                }
                _ => {}
            }
        }
        for (i, g) in source.gens().iter().enumerate() {
            if let Some(h) = source.bound(i) {
                let lhs = target.pow(&hom.images[i], h as u32);
                let rhs = hom.apply(source.rule_rhs(i).unwrap());
                if lhs != rhs {
                    return Err(HomError::RuleViolated { gen: g.name.clone(), power: h });
                }
            }
        }
        Ok(hom)
    }

    pub fn apply_monomial(&self, m: &Monomial) -> Element {
        let mut acc = self.target.one();
        for (i, &e) in m.exps.iter().enumerate() {
            if e > 0 {
                acc = self.target.mul(&acc, &self.target.pow(&self.images[i], e as u32));
            }
        }
        acc
    }

    pub fn apply(&self, el: &Element) -> Element {
        let mut acc = Element::zero();
        for (m, &c) in &el.terms {
            let img = self.apply_monomial(m);
            acc = self.target.add(&acc, &self.target.scale(&img, c as i64));
        }
        acc
    }

    /// The induced linear map on a bidegree, columns indexed by the source
    /// basis, rows by the target basis.
    pub fn matrix_at(&self, bd: Bidegree) -> FpMatrix {
        let src = self.source.basis_at(bd);
        let tgt = self.target.basis_at(bd);
        let mut m = FpMatrix::zero(self.target.field(), tgt.len(), src.len());
        for (j, mono) in src.iter().enumerate() {
            let img = self.apply_monomial(mono);
            let col = self.target.coords(&img, &tgt);
            for (i, &c) in col.iter().enumerate() {
                m.set(i, j, c);
            }
        }
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(p: u32) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    fn w(n_min: i32, n_max: i32, w_max: i32) -> Window {
        Window::new(n_min, n_max, w_max)
    }

    /// F_3[s2p] (x) Lambda[dv0], the mod-p THH of the p-adic integers input.
    fn thhz_e1() -> Presentation {
        PresentationBuilder::new(f(3), w(0, 30, 10))
            .generator("s2p", 2, 0, Kind::Polynomial)
            .generator("dv0", 1, 1, Kind::Exterior)
            .build()
            .unwrap()
    }

    #[test]
    fn unit_monomial_basis() {
        let pres = PresentationBuilder::new(f(3), w(0, 5, 5)).build().unwrap();
        let basis = pres.enumerate_basis(Bidegree::new(0, 0)).unwrap();
        assert_eq!(basis, vec![Monomial::one(0)]);
    }

    #[test]
    fn thhz_basis_at_3_1() {
        let pres = thhz_e1();
        let basis = pres.enumerate_basis(Bidegree::new(3, 1)).unwrap();
        assert_eq!(basis.len(), 1);
        assert_eq!(pres.fmt_monomial(&basis[0]), "s2p*dv0");
    }

    #[test]
    fn window_violation_reported() {
        let pres = thhz_e1();
        assert!(pres.enumerate_basis(Bidegree::new(31, 0)).is_err());
    }

    #[test]
    fn truncated_degree_zero_block() {
        // F_3[y]/(y^3 -> y) has basis {1, y, y^2} in bidegree (0,0).
        let pres = PresentationBuilder::new(f(3), w(0, 5, 5))
            .generator("y", 0, 0, Kind::Bounded(3))
            .rule("y", 3, &[(1, &[("y", 1)])])
            .build()
            .unwrap();
        let basis = pres.enumerate_basis(Bidegree::new(0, 0)).unwrap();
        assert_eq!(basis.len(), 3);
    }

    #[test]
    fn unit_law() {
        let pres = thhz_e1();
        for bd in [Bidegree::new(2, 0), Bidegree::new(3, 1), Bidegree::new(8, 1)] {
            for m in pres.basis_at(bd) {
                let el = Element::from_monomial(m);
                assert_eq!(pres.mul(&pres.one(), &el), el);
                assert_eq!(pres.mul(&el, &pres.one()), el);
            }
        }
    }

    #[test]
    fn koszul_sign_odd_odd() {
        // l1, l2 both in odd topological degree at p = 3.
        let pres = PresentationBuilder::new(f(3), w(0, 30, 10))
            .generator("l1", 5, 0, Kind::Exterior)
            .generator("l2", 17, 0, Kind::Exterior)
            .build()
            .unwrap();
        let l1 = pres.gen_element(0);
        let l2 = pres.gen_element(1);
        let ab = pres.mul(&l1, &l2);
        let ba = pres.mul(&l2, &l1);
        assert_eq!(ba, pres.scale(&ab, -1));
        assert!(!ab.is_zero());
    }

    #[test]
    fn exterior_square_vanishes() {
        let pres = thhz_e1();
        let dv0 = pres.gen_element(1);
        assert!(pres.mul(&dv0, &dv0).is_zero());
    }

    #[test]
    fn deta_square_rule() {
        // The associated-graded ko ring at p = 2: (deta)^2 = v1 * deta.
        let pres = PresentationBuilder::new(f(2), w(0, 30, 10))
            .generator("v1", 2, 0, Kind::Polynomial)
            .generator("deta", 2, 0, Kind::Bounded(2))
            .rule("deta", 2, &[(1, &[("v1", 1), ("deta", 1)])])
            .build()
            .unwrap();
        let deta = pres.gen_element(1);
        let sq = pres.mul(&deta, &deta);
        assert_eq!(pres.fmt_element(&sq), "v1*deta");
        // Cube: (deta)^3 = v1 * (deta)^2 = v1^2 * deta.
        let cube = pres.mul(&sq, &deta);
        assert_eq!(pres.fmt_element(&cube), "v1^2*deta");
    }

    #[test]
    fn witt_truncation_rule() {
        // y^3 -> y forces y^4 -> y^2, y^5 -> y^3 -> y, ...
        let pres = PresentationBuilder::new(f(3), w(0, 5, 5))
            .generator("y", 0, 0, Kind::Bounded(3))
            .rule("y", 3, &[(1, &[("y", 1)])])
            .build()
            .unwrap();
        let y = pres.gen_element(0);
        let y5 = pres.pow(&y, 5);
        assert_eq!(pres.fmt_element(&y5), "y");
    }

    #[test]
    fn graded_commutativity_random() {
        let pres = PresentationBuilder::new(f(3), w(-3, 24, 12))
            .generator("mu", 6, 0, Kind::Polynomial)
            .generator("l1", 5, 0, Kind::Exterior)
            .generator("dv1", 5, 4, Kind::Exterior)
            .generator("zeta", -1, 0, Kind::Exterior)
            .generator("y", 0, 0, Kind::Bounded(3))
            .rule("y", 3, &[(1, &[("y", 1)])])
            .build()
            .unwrap();
        let mut monomials = Vec::new();
        for bd in pres.window().iter() {
            monomials.extend(pres.basis_at(bd));
        }
        let mut state = 0x5eed_1234_u64;
        let mut step = || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            state as usize
        };
        for _ in 0..1000 {
            let a = Element::from_monomial(monomials[step() % monomials.len()].clone());
            let b = Element::from_monomial(monomials[step() % monomials.len()].clone());
            let na = pres.element_bidegree(&a).unwrap().unwrap().n;
            let nb = pres.element_bidegree(&b).unwrap().unwrap().n;
            let ab = pres.mul(&a, &b);
            let ba = pres.mul(&b, &a);
            let sign = if (na & 1) == 1 && (nb & 1) == 1 { -1 } else { 1 };
            assert_eq!(ab, pres.scale(&ba, sign));
        }
    }

    #[test]
    fn associativity_random() {
        let pres = PresentationBuilder::new(f(3), w(0, 20, 4))
            .generator("v1", 4, 0, Kind::Polynomial)
            .generator("a1", 3, 0, Kind::Exterior)
            .generator("dv1", 5, 0, Kind::Exterior)
            .generator("x0", 4, 0, Kind::Bounded(3))
            .rule("x0", 3, &[(1, &[("v1", 2), ("x0", 1)]), (1, &[("v1", 1), ("a1", 1), ("dv1", 1)])])
            .build()
            .unwrap();
        let mut monomials = Vec::new();
        for bd in pres.window().iter() {
            monomials.extend(pres.basis_at(bd));
        }
        let mut state = 0x00c0_ffee_u64;
        let mut step = || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            state as usize
        };
        for _ in 0..1000 {
            let a = Element::from_monomial(monomials[step() % monomials.len()].clone());
            let b = Element::from_monomial(monomials[step() % monomials.len()].clone());
            let c = Element::from_monomial(monomials[step() % monomials.len()].clone());
            let left = pres.mul(&pres.mul(&a, &b), &c);
            let right = pres.mul(&a, &pres.mul(&b, &c));
            assert_eq!(left, right);
        }
    }

    #[test]
    fn normal_form_idempotent() {
        let pres = PresentationBuilder::new(f(3), w(0, 20, 4))
            .generator("v1", 4, 0, Kind::Polynomial)
            .generator("x0", 4, 0, Kind::Bounded(3))
            .rule("x0", 3, &[(1, &[("v1", 2), ("x0", 1)])])
            .build()
            .unwrap();
        for bd in pres.window().iter() {
            for m in pres.basis_at(bd) {
                let r = pres.reduce_raw(m.exps.clone());
                assert_eq!(r, Element::from_monomial(m));
            }
        }
    }

    #[test]
    fn local_finiteness_rejects_unbounded_degree_zero() {
        let err = PresentationBuilder::new(f(3), w(0, 5, 5))
            .generator("y", 0, 0, Kind::Polynomial)
            .build()
            .unwrap_err();
        assert_eq!(err, PresentationError::UnboundedDegreeZero("y".into()));
    }

    #[test]
    fn local_finiteness_rejects_unbounded_negative() {
        let err = PresentationBuilder::new(f(3), w(-5, 5, 5))
            .generator("t", -2, 0, Kind::Polynomial)
            .build()
            .unwrap_err();
        assert_eq!(err, PresentationError::UnboundedNegative("t".into()));
    }

    #[test]
    fn triangularity_enforced() {
        // x^2 -> z with z declared after x is not triangular.
        let err = PresentationBuilder::new(f(3), w(0, 20, 5))
            .generator("x", 2, 0, Kind::Bounded(2))
            .generator("z", 4, 0, Kind::Polynomial)
            .rule("x", 2, &[(1, &[("z", 1)])])
            .build()
            .unwrap_err();
        assert!(matches!(err, PresentationError::RuleNotTriangular { .. }));
    }

    #[test]
    fn separable_idempotents_level_one() {
        // e_c = 1 - (y - c)^2 over F_3: three orthogonal idempotents summing to 1.
        let pres = PresentationBuilder::new(f(3), w(0, 2, 2))
            .generator("y", 0, 0, Kind::Bounded(3))
            .rule("y", 3, &[(1, &[("y", 1)])])
            .build()
            .unwrap();
        let y = pres.gen_element(0);
        let one = pres.one();
        let idem: Vec<Element> = (0..3)
            .map(|c| {
                let shifted = pres.add(&y, &pres.scale(&one, -c));
                pres.sub(&one, &pres.mul(&shifted, &shifted))
            })
            .collect();
        let mut total = Element::zero();
        for (i, e) in idem.iter().enumerate() {
            assert_eq!(pres.mul(e, e), *e, "e_{i} not idempotent");
            total = pres.add(&total, e);
            for other in idem.iter().skip(i + 1) {
                assert!(pres.mul(e, other).is_zero());
            }
        }
        assert_eq!(total, one);
    }

    #[test]
    fn separable_idempotents_level_two() {
        // Products of coordinate idempotents give 9 orthogonal idempotents.
        let pres = PresentationBuilder::new(f(3), w(0, 2, 2))
            .generator("y0", 0, 0, Kind::Bounded(3))
            .generator("y1", 0, 0, Kind::Bounded(3))
            .rule("y0", 3, &[(1, &[("y0", 1)])])
            .rule("y1", 3, &[(1, &[("y1", 1)])])
            .build()
            .unwrap();
        let one = pres.one();
        let coord_idem = |idx: usize, c: i64| {
            let y = pres.gen_element(idx);
            let shifted = pres.add(&y, &pres.scale(&one, -c));
            pres.sub(&one, &pres.mul(&shifted, &shifted))
        };
        let mut idems = Vec::new();
        for c0 in 0..3 {
            for c1 in 0..3 {
                idems.push(pres.mul(&coord_idem(0, c0), &coord_idem(1, c1)));
            }
        }
        assert_eq!(idems.len(), 9);
        let mut total = Element::zero();
        for (i, e) in idems.iter().enumerate() {
            assert!(!e.is_zero());
            assert_eq!(pres.mul(e, e), *e);
            total = pres.add(&total, e);
            for other in idems.iter().skip(i + 1) {
                assert!(pres.mul(e, other).is_zero());
            }
        }
        assert_eq!(total, one);
        assert_eq!(pres.basis_at(Bidegree::new(0, 0)).len(), 9);
    }

    #[test]
    fn tensor_with_trivial_is_identity_on_dims() {
        let a = thhz_e1();
        let trivial = PresentationBuilder::new(f(3), w(0, 30, 10)).build().unwrap();
        let t = a.tensor(&trivial).unwrap();
        for bd in a.window().iter() {
            assert_eq!(a.basis_at(bd).len(), t.basis_at(bd).len());
        }
    }

    #[test]
    fn tensor_dims_are_convolutions() {
        let a = PresentationBuilder::new(f(3), w(0, 12, 6))
            .generator("s2p", 2, 0, Kind::Polynomial)
            .build()
            .unwrap();
        let b = PresentationBuilder::new(f(3), w(0, 12, 6))
            .generator("dv0", 1, 1, Kind::Exterior)
            .build()
            .unwrap();
        let t = a.tensor(&b).unwrap();
        // Brute-force convolution of the factor bases.
        for bd in t.window().iter() {
            let mut expected = 0usize;
            for i in 0..=bd.n {
                for j in 0..=bd.w {
                    expected += a.basis_at(Bidegree::new(i, j)).len()
                        * b.basis_at(Bidegree::new(bd.n - i, bd.w - j)).len();
                }
            }
            assert_eq!(t.basis_at(bd).len(), expected, "mismatch at {bd}");
        }
    }

    #[test]
    fn tensor_renames_clashes() {
        let a = PresentationBuilder::new(f(3), w(0, 10, 5))
            .generator("x", 2, 0, Kind::Polynomial)
            .build()
            .unwrap();
        let t = a.tensor(&a).unwrap();
        assert_eq!(t.gens()[0].name, "x");
        assert_eq!(t.gens()[1].name, "x_r");
    }

    #[test]
    fn divided_powers_expand_within_window() {
        // Gamma[b] with |b| = 12 at p = 3 and n_max = 40: b and b_g3 only.
        let field = f(3);
        let window = w(0, 40, 40);
        let spec = GeneratorSpec::new("b", 12, 0, Kind::DividedPower);
        let fam = expand_divided_powers(field, &spec, &window).unwrap();
        assert_eq!(fam.len(), 2);
        assert_eq!(fam[0].name, "b");
        assert_eq!(fam[0].degree, Bidegree::new(12, 0));
        assert_eq!(fam[1].name, "b_g3");
        assert_eq!(fam[1].degree, Bidegree::new(36, 0));
        let pres = PresentationBuilder::new(field, window)
            .generator("b", 12, 0, Kind::DividedPower)
            .build()
            .unwrap();
        let b = pres.gen_element(0);
        assert!(pres.pow(&b, 3).is_zero());
    }

    #[test]
    fn divided_powers_empty_outside_window() {
        let fam = expand_divided_powers(
            f(3),
            &GeneratorSpec::new("x", 20, 0, Kind::DividedPower),
            &w(0, 10, 10),
        )
        .unwrap();
        assert!(fam.is_empty());
    }

    #[test]
    fn divided_power_dims_below_p() {
        // dim of Gamma[da1] in degree k(2p-2) is 1 for k < p (p = 3, |da1| = 4).
        let pres = PresentationBuilder::new(f(3), w(0, 40, 0))
            .generator("da1", 4, 0, Kind::DividedPower)
            .build()
            .unwrap();
        for k in 0..3 {
            assert_eq!(pres.basis_at(Bidegree::new(4 * k, 0)).len(), 1);
        }
    }

    #[test]
    fn even_exterior_rejected_at_odd_primes() {
        let err = PresentationBuilder::new(f(3), w(0, 10, 5))
            .generator("t", 2, 0, Kind::Exterior)
            .build()
            .unwrap_err();
        assert_eq!(err, PresentationError::EvenExterior("t".into()));
        // Fine at the prime 2.
        assert!(PresentationBuilder::new(f(2), w(0, 10, 5))
            .generator("t", 2, 0, Kind::Exterior)
            .build()
            .is_ok());
    }

    #[test]
    fn odd_divided_power_rejected() {
        let err = expand_divided_powers(
            f(3),
            &GeneratorSpec::new("x", 3, 0, Kind::DividedPower),
            &w(0, 10, 10),
        )
        .unwrap_err();
        assert_eq!(err, PresentationError::BadDividedPower("x".into()));
    }

    #[test]
    fn hom_identity_gives_identity_matrices() {
        let pres = thhz_e1();
        let images = (0..pres.gens().len()).map(|i| pres.gen_element(i)).collect();
        let hom = Hom::new(&pres, &pres, images).unwrap();
        for bd in [Bidegree::new(2, 0), Bidegree::new(7, 1)] {
            let m = hom.matrix_at(bd);
            let n = pres.basis_at(bd).len();
            assert_eq!(m, FpMatrix::identity(pres.field(), n));
        }
    }

    #[test]
    fn hom_zeta_to_zero_has_rank_zero() {
        let src = PresentationBuilder::new(f(3), w(-1, 1, 1))
            .generator("zeta", -1, 0, Kind::Exterior)
            .build()
            .unwrap();
        let tgt = PresentationBuilder::new(f(3), w(-1, 1, 1))
            .generator("zeta", -1, 0, Kind::Exterior)
            .build()
            .unwrap();
        let hom = Hom::new(&src, &tgt, vec![Element::zero()]).unwrap();
        let m = hom.matrix_at(Bidegree::new(-1, 0));
        assert_eq!(m.rank(), 0);
        assert_eq!(m.cols(), 1);
    }

    #[test]
    fn hom_rule_violation_detected() {
        // y^3 = y in the source, but the image 1 satisfies 1^3 = 1; the image
        // y -> zeta-free constant fails only if the rule breaks. Map y -> 0:
        // 0^3 = 0 is fine. Map y -> 1: 1 = 1 fine. A genuinely failing map
        // sends a nilpotent to a non-nilpotent.
        let src = PresentationBuilder::new(f(3), w(0, 4, 0))
            .generator("e", 2, 0, Kind::Bounded(2))
            .build()
            .unwrap();
        let tgt = PresentationBuilder::new(f(3), w(0, 4, 0))
            .generator("x", 2, 0, Kind::Polynomial)
            .build()
            .unwrap();
        // e^2 -> 0 in the source but x^2 != 0 in the target.
        let err = Hom::new(&src, &tgt, vec![tgt.gen_element(0)]).unwrap_err();
        assert!(matches!(err, HomError::RuleViolated { .. }));
    }

    #[test]
    fn separable_restriction_has_rank_three() {
        // Level-2 model of functions on Z/9 restricting to the level-1 model:
        // y0 -> 0, y1 -> -z0. Oracle: realize both sides as functions on
        // points and compare ranks of the evaluation matrices.
        let field = f(3);
        let src = PresentationBuilder::new(field, w(0, 0, 0))
            .generator("y0", 0, 0, Kind::Bounded(3))
            .generator("y1", 0, 0, Kind::Bounded(3))
            .rule("y0", 3, &[(1, &[("y0", 1)])])
            .rule("y1", 3, &[(1, &[("y1", 1)])])
            .build()
            .unwrap();
        let tgt = PresentationBuilder::new(field, w(0, 0, 0))
            .generator("z0", 0, 0, Kind::Bounded(3))
            .rule("z0", 3, &[(1, &[("z0", 1)])])
            .build()
            .unwrap();
        let images = vec![Element::zero(), tgt.scale(&tgt.gen_element(0), -1)];
        let hom = Hom::new(&src, &tgt, images).unwrap();
        let m = hom.matrix_at(Bidegree::new(0, 0));
        assert_eq!(m.cols(), 9);
        assert_eq!(m.rows(), 3);
        assert_eq!(m.rank(), 3);

        // Independent oracle: evaluate source monomials on the 9 points of
        // F_3 x F_3 (Witt-style coordinates) and check the restriction to the
        // diagonal {(0, -t)} has matching rank.
        let src_basis = src.basis_at(Bidegree::new(0, 0));
        let mut eval = FpMatrix::zero(field, 9, src_basis.len());
        for (r, (a, b)) in (0..3).flat_map(|a| (0..3).map(move |b| (a, b))).enumerate() {
            for (c, m) in src_basis.iter().enumerate() {
                let v = field.mul(field.pow(a, m.exps[0] as u32), field.pow(b, m.exps[1] as u32));
                eval.set(r, c, v);
            }
        }
        assert_eq!(eval.rank(), 9, "level-2 monomials are a function basis");
        let mut restricted = FpMatrix::zero(field, 3, src_basis.len());
        for t in 0..3u32 {
            for (c, m) in src_basis.iter().enumerate() {
                let y0 = 0u32;
                let y1 = field.neg(t);
                let v = field.mul(
                    field.pow(y0, m.exps[0] as u32),
                    field.pow(y1, m.exps[1] as u32),
                );
                restricted.set(t as usize, c, v);
            }
        }
        assert_eq!(restricted.rank(), 3);
    }
}
