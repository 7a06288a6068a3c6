//! Comparison of a finished run against an expected presentation.
//!
//! Three checks, all on the user window: per-bidegree dimension equality,
//! every expected generator image is a nonzero permanent cycle, and the
//! monomials in the images span E_infinity in every bidegree. When asked, the
//! detection also verifies the expected presentation's rewrite rules as
//! products of classes, which is where resolved multiplicative extensions
//! (exterior squares and friends) are checked at the associated-graded level.

use crate::SpectralSequenceRun;
use algebra::{Bidegree, Element, Presentation};
use std::collections::BTreeMap;

#[derive(Debug)]
pub struct Detection {
    pub pass: bool,
    /// (bidegree, run dimension, expected dimension)
    pub dim_mismatches: Vec<(Bidegree, usize, usize)>,
    pub image_failures: Vec<String>,
    pub span_failures: Vec<Bidegree>,
    pub extension_failures: Vec<String>,
}

impl Detection {
    pub fn describe(&self) -> Vec<String> {
        let mut out = Vec::new();
        for (bd, got, expected) in &self.dim_mismatches {
            out.push(format!("dim mismatch at {bd}: run has {got}, expected {expected}"));
        }
        for s in &self.image_failures {
            out.push(s.clone());
        }
        for bd in &self.span_failures {
            out.push(format!("expected monomials do not span the page at {bd}"));
        }
        for s in &self.extension_failures {
            out.push(s.clone());
        }
        out
    }
}

/// Compare the run's E_infinity against an expected presentation. `images`
/// gives an E_1-level representative per expected generator; without images
/// only dimensions are compared.
pub fn detect(
    run: &SpectralSequenceRun<'_>,
    expected: &Presentation,
    images: Option<&[Element]>,
    check_products: bool,
) -> Detection {
    let mut det = Detection {
        pass: true,
        dim_mismatches: Vec::new(),
        image_failures: Vec::new(),
        span_failures: Vec::new(),
        extension_failures: Vec::new(),
    };

    // (i) dimension table equality on the window.
    for bd in run.window.iter() {
        let got = run.dim(bd);
        let want = expected.basis_at(bd).len();
        if got != want {
            det.dim_mismatches.push((bd, got, want));
        }
    }

    let images = match images {
        Some(images) => images,
        None => {
            det.pass = det.dim_mismatches.is_empty();
            return det;
        }
    };
    assert_eq!(images.len(), expected.gens().len(), "one image per expected generator");

    // (ii) each image is a nonzero permanent cycle of the right bidegree.
    for (i, g) in expected.gens().iter().enumerate() {
        let img = &images[i];
        match run.e1.element_bidegree(img) {
            Err(_) => {
                det.image_failures.push(format!("image of `{}` is not homogeneous", g.name))
            }
            Ok(None) => det.image_failures.push(format!("image of `{}` is zero", g.name)),
            Ok(Some(bd)) if bd != g.degree => det.image_failures.push(format!(
                "image of `{}` has bidegree {bd}, expected {}",
                g.name, g.degree
            )),
            Ok(Some(_)) => match run.project(img) {
                Some((_, coords)) if coords.iter().any(|&c| c != 0) => {}
                Some(_) => det
                    .image_failures
                    .push(format!("image of `{}` dies on the final page", g.name)),
                None => det
                    .image_failures
                    .push(format!("image of `{}` is not a permanent cycle", g.name)),
            },
        }
    }

    // (iii) the expected monomials span E_infinity in every window bidegree.
    let embed = |el: &Element| -> Element {
        let mut acc = Element::zero();
        for (m, &c) in &el.terms {
            let mut prod = run.e1.one();
            for (i, &e) in m.exps.iter().enumerate() {
                if e > 0 {
                    prod = run.e1.mul(&prod, &run.e1.pow(&images[i], e as u32));
                }
            }
            acc = run.e1.add(&acc, &run.e1.scale(&prod, c as i64));
        }
        acc
    };
    if det.image_failures.is_empty() {
        for bd in run.window.iter() {
            let dim = run.dim(bd);
            if dim == 0 {
                continue;
            }
            let mut span = fp::Echelon::new(run.e1.field());
            let mut ok = true;
            for m in expected.basis_at(bd) {
                let el = embed(&Element::from_monomial(m));
                match run.project(&el) {
                    Some((_, coords)) => {
                        span.insert(&coords);
                    }
                    None => {
                        ok = false;
                        break;
                    }
                }
            }
            if !ok || span.rank() != dim {
                det.span_failures.push(bd);
            }
        }
    }

    // (iv) rewrite rules of the expected presentation, as class products.
    if check_products && det.image_failures.is_empty() {
        for (i, g) in expected.gens().iter().enumerate() {
            if let Some(h) = expected.bound(i) {
                let lhs = run.e1.pow(&images[i], h as u32);
                let rhs = embed(expected.rule_rhs(i).unwrap());
                let diff = run.e1.sub(&lhs, &rhs);
                if diff.is_zero() {
                    continue;
                }
                match run.project(&diff) {
                    Some((_, coords)) if coords.iter().all(|&c| c == 0) => {}
                    _ => det.extension_failures.push(format!(
                        "product relation `{}^{}` fails on the final page",
                        g.name, h
                    )),
                }
            }
        }
    }

    det.pass = det.dim_mismatches.is_empty()
        && det.image_failures.is_empty()
        && det.span_failures.is_empty()
        && det.extension_failures.is_empty();
    det
}

/// Compare a run against a plain dimension table (used when the expected
/// answer is the homology of a CDGA computed by the dga module).
pub fn compare_dim_tables(
    run_dims: &BTreeMap<Bidegree, usize>,
    expected: &BTreeMap<Bidegree, usize>,
) -> Vec<(Bidegree, usize, usize)> {
    let mut out = Vec::new();
    let keys: std::collections::BTreeSet<Bidegree> =
        run_dims.keys().chain(expected.keys()).copied().collect();
    for bd in keys {
        let got = run_dims.get(&bd).copied().unwrap_or(0);
        let want = expected.get(&bd).copied().unwrap_or(0);
        if got != want {
            out.push((bd, got, want));
        }
    }
    out
}
