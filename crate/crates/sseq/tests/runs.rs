//! End-to-end runs of the spectral sequence engine on the small standard
//! inputs, checked against hand-computable answers.

use algebra::{Bidegree, Element, Kind, Presentation, PresentationBuilder, Window};
use fp::PrimeField;
use sseq::{detect, run, Annotation, PermanentReason, RunSpec, Seed, Stage};
use std::collections::BTreeMap;

fn f3() -> PrimeField {
    PrimeField::new(3).unwrap()
}

/// E_1 = F_3[s2p] (x) Lambda[dv0] with d_1(s2p) = dv0: the mod-p picture for
/// the p-adic integers.
fn thhz_spec(window: Window) -> RunSpec {
    let pres = PresentationBuilder::new(f3(), window)
        .generator("s2p", 2, 0, Kind::Polynomial)
        .generator("dv0", 1, 1, Kind::Exterior)
        .build()
        .unwrap();
    let target = pres.gen_element(1);
    RunSpec {
        stages: vec![Stage {
            pres,
            images: None,
            jump: 1,
            seeds: vec![Seed {
                gen: 0,
                target,
                note: "suspension differential: p lifts to filtration 1".into(),
            }],
        }],
        window,
        annotations: vec![],
        final_gens: None,
    }
}

#[test]
fn thhz_reaches_the_expected_page() {
    let window = Window::new(0, 24, 8);
    let spec = thhz_spec(window);
    let r = run(&spec).unwrap();
    assert!(r.euler_violations.is_empty());
    assert!(r.monotonicity_ok);
    assert!(r.leibniz_samples_ok);
    assert!(r.stability.certified, "{:?}", r.stability.possibles);

    // E_2 = F_3[(s2p)^3] (x) Lambda[(s2p)^2 dv0]: one class in each degree
    // congruent to 0 or -1 mod 6, in weights 0 and 1 respectively.
    let by_degree = r.dims_by_degree();
    let expected: BTreeMap<i32, usize> =
        [0, 5, 6, 11, 12, 17, 18, 23, 24].into_iter().map(|n| (n, 1)).collect();
    assert_eq!(by_degree, expected);
    assert_eq!(r.dim(Bidegree::new(6, 0)), 1);
    assert_eq!(r.dim(Bidegree::new(5, 1)), 1);
    assert_eq!(r.dim(Bidegree::new(2, 0)), 0, "s2p dies");

    // Degree 2 loses its one class to the d_1 leaving it.
    let page1 = &r.pages[0];
    assert_eq!(page1.dims.get(&Bidegree::new(2, 0)), Some(&1));
    assert_eq!(page1.ranks.get(&Bidegree::new(2, 0)), Some(&1));
    assert!(page1
        .arrows
        .iter()
        .any(|a| a.src == Bidegree::new(2, 0) && a.dst == Bidegree::new(1, 1)));
}

#[test]
fn thhz_detection_passes() {
    let window = Window::new(0, 24, 8);
    let spec = thhz_spec(window);
    let r = run(&spec).unwrap();
    let expected = PresentationBuilder::new(f3(), window)
        .generator("mu", 6, 0, Kind::Polynomial)
        .generator("l1", 5, 1, Kind::Exterior)
        .build()
        .unwrap();
    let e1 = &spec.stages[0].pres;
    let s2p = e1.gen_element(0);
    let dv0 = e1.gen_element(1);
    let images = vec![e1.pow(&s2p, 3), e1.mul(&e1.pow(&s2p, 2), &dv0)];
    let det = detect(&r, &expected, Some(&images), true);
    assert!(det.pass, "{:?}", det.describe());
}

#[test]
fn degenerate_run_keeps_e1() {
    let window = Window::new(0, 12, 6);
    let pres = PresentationBuilder::new(f3(), window)
        .generator("x", 2, 0, Kind::Polynomial)
        .build()
        .unwrap();
    let spec = RunSpec {
        stages: vec![Stage { pres, images: None, jump: 1, seeds: vec![] }],
        window,
        annotations: vec![],
        final_gens: None,
    };
    let r = run(&spec).unwrap();
    let e1 = &spec.stages[0].pres;
    for bd in window.iter() {
        assert_eq!(r.dim(bd), e1.basis_at(bd).len());
    }
    // Identity detection.
    let images = vec![e1.gen_element(0)];
    let det = detect(&r, e1, Some(&images[..]), true);
    assert!(det.pass);
}

/// E_1 = F_3[s2v1] (x) Lambda[l1, dv1] with d_4(s2v1) = dv1: the connective
/// Adams summand mod (p, v1).
fn thhell_spec(window: Window) -> RunSpec {
    let pres = PresentationBuilder::new(f3(), window)
        .generator("s2v1", 6, 0, Kind::Polynomial)
        .generator("l1", 5, 0, Kind::Exterior)
        .generator("dv1", 5, 4, Kind::Exterior)
        .build()
        .unwrap();
    let target = pres.gen_element(2);
    RunSpec {
        stages: vec![Stage {
            pres,
            images: None,
            jump: 4,
            seeds: vec![Seed {
                gen: 0,
                target,
                note: "suspension differential: v1 lifts to filtration 2p-2".into(),
            }],
        }],
        window,
        annotations: vec![],
        final_gens: None,
    }
}

fn thhell_expected(window: Window) -> Presentation {
    PresentationBuilder::new(f3(), window)
        .generator("mu2", 18, 0, Kind::Polynomial)
        .generator("l1", 5, 0, Kind::Exterior)
        .generator("l2", 17, 4, Kind::Exterior)
        .build()
        .unwrap()
}

fn thhell_images(e1: &Presentation) -> Vec<Element> {
    let s2v1 = e1.gen_element(0);
    let l1 = e1.gen_element(1);
    let dv1 = e1.gen_element(2);
    vec![e1.pow(&s2v1, 3), l1, e1.mul(&e1.pow(&s2v1, 2), &dv1)]
}

#[test]
fn thhell_run_detects_expected_page() {
    let window = Window::new(0, 40, 40);
    let spec = thhell_spec(window);
    let r = run(&spec).unwrap();
    assert!(r.euler_violations.is_empty());
    assert!(r.stability.certified, "{:?}", r.stability.possibles);
    let expected = thhell_expected(window);
    let images = thhell_images(&spec.stages[0].pres);
    let det = detect(&r, &expected, Some(&images), true);
    assert!(det.pass, "{:?}", det.describe());
    // Spot dimensions: l2 at (17,4), mu2 at (18,0), l1*l2 at (22,4).
    assert_eq!(r.dim(Bidegree::new(17, 4)), 1);
    assert_eq!(r.dim(Bidegree::new(18, 0)), 1);
    assert_eq!(r.dim(Bidegree::new(22, 4)), 1);
    assert_eq!(r.dim(Bidegree::new(6, 0)), 0, "s2v1 dies");
    assert_eq!(r.dim(Bidegree::new(5, 4)), 0, "dv1 dies");
}

#[test]
fn thhell_dropping_l2_fails_at_its_bidegree() {
    let window = Window::new(0, 40, 40);
    let spec = thhell_spec(window);
    let r = run(&spec).unwrap();
    let wrong = PresentationBuilder::new(f3(), window)
        .generator("mu2", 18, 0, Kind::Polynomial)
        .generator("l1", 5, 0, Kind::Exterior)
        .build()
        .unwrap();
    let det = detect(&r, &wrong, None, false);
    assert!(!det.pass);
    let first = det.dim_mismatches.first().unwrap();
    assert_eq!(first.0.n, 17, "first mismatch in topological degree 17");
}

#[test]
fn dead_seed_source_is_an_error() {
    // Run d_1(s2p) = dv0 twice: by stage 2, s2p is dead -- but stage 2 must
    // re-present; instead test a seed on a generator that the first stage
    // already killed, within one stage: d(x) = y and d(y) nonzero would be a
    // d^2 failure, so build a two-stage run whose second stage re-presents
    // correctly but seeds a dead class. The simplest honest case: re-present
    // the degenerate page and seed a generator whose image died.
    let window = Window::new(0, 24, 8);
    let pres = PresentationBuilder::new(f3(), window)
        .generator("s2p", 2, 0, Kind::Polynomial)
        .generator("dv0", 1, 1, Kind::Exterior)
        .build()
        .unwrap();
    let target = pres.gen_element(1);
    // Page 2 is F_3[(s2p)^3] (x) Lambda[(s2p)^2 dv0]; claim it is presented
    // by mu, l1 -- and seed the survivor mu with jump 5, sending it to a
    // class that is zero on the page; that is fine. To exercise the dead
    // check, mis-present with an image that died: s2p itself has the right
    // bidegree only for a (2,0) generator, which has dimension 0 on page 2,
    // so the dims check fires first. The seed-death path needs a source that
    // is a cycle but a boundary: dv0 at (1,1).
    let page2 = PresentationBuilder::new(f3(), window)
        .generator("mu", 6, 0, Kind::Polynomial)
        .generator("l1", 5, 1, Kind::Exterior)
        .generator("b", 1, 1, Kind::Exterior)
        .build()
        .unwrap();
    let images = vec![
        pres.pow(&pres.gen_element(0), 3),
        pres.mul(&pres.pow(&pres.gen_element(0), 2), &pres.gen_element(1)),
        pres.gen_element(1), // dv0: a boundary on page 2
    ];
    let spec = RunSpec {
        stages: vec![
            Stage {
                pres,
                images: None,
                jump: 1,
                seeds: vec![Seed { gen: 0, target, note: "d1".into() }],
            },
            Stage { pres: page2, images: Some(images), jump: 5, seeds: vec![] },
        ],
        window,
        annotations: vec![],
        final_gens: None,
    };
    let err = run(&spec).unwrap_err();
    let msg = format!("{err}");
    assert!(msg.contains("image of `b`"), "{msg}");
}

#[test]
fn determinism_two_runs_agree() {
    let window = Window::new(0, 40, 40);
    let spec = thhell_spec(window);
    let r1 = run(&spec).unwrap();
    let r2 = run(&spec).unwrap();
    assert_eq!(r1.final_dims, r2.final_dims);
    assert_eq!(r1.pages.len(), r2.pages.len());
    for (p1, p2) in r1.pages.iter().zip(&r2.pages) {
        assert_eq!(p1.dims, p2.dims);
        assert_eq!(p1.arrows, p2.arrows);
    }
}

#[test]
fn euler_audit_on_koszul_toy() {
    // Lambda[e] (x) F_3[x] with d_1(e) = x: everything cancels.
    let window = Window::new(0, 10, 10);
    let pres = PresentationBuilder::new(f3(), window)
        .generator("e", 1, 1, Kind::Exterior)
        .generator("x", 0, 2, Kind::Polynomial)
        .build()
        .unwrap();
    let target = pres.gen_element(1);
    let spec = RunSpec {
        stages: vec![Stage {
            pres,
            images: None,
            jump: 1,
            seeds: vec![Seed { gen: 0, target, note: "koszul".into() }],
        }],
        window,
        annotations: vec![],
        final_gens: None,
    };
    let r = run(&spec).unwrap();
    assert!(r.euler_violations.is_empty());
    let total: usize = r.final_dims.values().sum();
    assert_eq!(total, 1, "only the unit survives");
}

#[test]
fn two_stage_run_with_verified_rebase() {
    // Stage 1: Koszul pair dies; stage 2 re-presents the survivors and runs a
    // second differential. E_1 = F_3[u] (x) Lambda[e] (x) F_3[x], d_1(e) = x.
    // Page 2 = F_3[u]; then d_2(u) = 0 keeps everything (degenerate second
    // stage exercising the rebase machinery).
    let window = Window::new(0, 12, 8);
    let pres = PresentationBuilder::new(f3(), window)
        .generator("u", 2, 0, Kind::Polynomial)
        .generator("e", 1, 1, Kind::Exterior)
        .generator("x", 0, 2, Kind::Polynomial)
        .build()
        .unwrap();
    let target = pres.gen_element(2);
    let page2 = PresentationBuilder::new(f3(), window)
        .generator("u", 2, 0, Kind::Polynomial)
        .build()
        .unwrap();
    let images = vec![pres.gen_element(0)];
    let spec = RunSpec {
        stages: vec![
            Stage {
                pres,
                images: None,
                jump: 1,
                seeds: vec![Seed { gen: 1, target, note: "koszul".into() }],
            },
            Stage { pres: page2, images: Some(images), jump: 3, seeds: vec![] },
        ],
        window,
        annotations: vec![],
        final_gens: None,
    };
    let r = run(&spec).unwrap();
    for n in (0..=12).step_by(2) {
        assert_eq!(r.dim(Bidegree::new(n, 0)), 1, "u^{} survives", n / 2);
    }
    assert_eq!(r.final_dims.values().sum::<usize>(), 7);
}

#[test]
fn annotations_resolve_flagged_differentials() {
    // F_3[x] (x) Lambda[t] with x at (6,0) and t at (5,1): no seeds, so a
    // d_1 from x to t is arithmetically possible; a p-th power annotation
    // cannot cover x itself, but an image-of-unit citation can.
    let window = Window::new(0, 12, 6);
    let pres = PresentationBuilder::new(f3(), window)
        .generator("x", 6, 0, Kind::Polynomial)
        .generator("t", 5, 1, Kind::Exterior)
        .build()
        .unwrap();
    let mut spec = RunSpec {
        stages: vec![Stage { pres, images: None, jump: 1, seeds: vec![] }],
        window,
        annotations: vec![],
        final_gens: None,
    };
    let r = run(&spec).unwrap();
    assert!(!r.stability.certified);
    assert!(!r.stability.all_resolved);
    assert!(r
        .stability
        .possibles
        .iter()
        .any(|p| p.src == Bidegree::new(6, 0) && p.dst == Bidegree::new(5, 1)));

    spec.annotations = r
        .stability
        .possibles
        .iter()
        .map(|p| Annotation {
            bd: p.src,
            reason: PermanentReason::ImageOfUnit,
            note: "detected by the unit map in the motivating computation".into(),
        })
        .collect();
    let r2 = run(&spec).unwrap();
    assert!(!r2.stability.certified);
    assert!(r2.stability.all_resolved);
}
