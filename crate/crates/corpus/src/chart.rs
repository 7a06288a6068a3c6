//! Deterministic SVG charts of spectral sequence pages: one marker per basis
//! class at (x = topological degree, y = filtration weight, increasing
//! upward), one arrow per nonzero matrix entry of the page differential.
//! Integer arithmetic only, so identical inputs yield byte-identical output.

use crate::report::ChartPage;
use algebra::Bidegree;
use std::fmt::Write as _;

const CELL: i32 = 30;
const MARGIN: i32 = 46;
const RADIUS: i32 = 3;

fn cell_origin(page: &ChartPage, bd: Bidegree) -> (i32, i32, i32) {
    let w = &page.window;
    let x = MARGIN + (bd.n - w.n_min) * CELL;
    // Weight grows upward; the legend notes the convention.
    let height = (w.w_max + 1) * CELL;
    let y = MARGIN + height - (bd.w + 1) * CELL;
    (x, y, height)
}

/// Center of the marker for class `idx` of `dim` classes in one cell: markers
/// spread horizontally so multiple classes stay distinguishable.
fn class_center(page: &ChartPage, bd: Bidegree, idx: usize, dim: usize) -> (i32, i32) {
    let (x, y, _) = cell_origin(page, bd);
    let cx = x + ((idx as i32 + 1) * CELL) / (dim as i32 + 1);
    let cy = y + CELL / 2;
    (cx, cy)
}

pub fn emit_chart(page: &ChartPage, title: &str) -> String {
    let w = &page.window;
    let width = MARGIN * 2 + (w.n_max - w.n_min + 1) * CELL;
    let height = MARGIN * 2 + (w.w_max + 1) * CELL;
    let mut s = String::new();
    writeln!(s, r##"<?xml version="1.0" encoding="UTF-8"?>"##).unwrap();
    writeln!(
        s,
        r##"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}">"##
    )
    .unwrap();
    writeln!(
        s,
        r##"  <defs><marker id="tip" markerWidth="8" markerHeight="6" refX="7" refY="3" orient="auto"><polygon points="0 0, 8 3, 0 6" fill="#c22"/></marker></defs>"##
    )
    .unwrap();
    writeln!(s, r##"  <rect width="{width}" height="{height}" fill="white"/>"##).unwrap();
    writeln!(
        s,
        r##"  <text x="{MARGIN}" y="24" font-family="monospace" font-size="14">{} page r={} (weight increases upward)</text>"##,
        xml_escape(title),
        page.r
    )
    .unwrap();

    // Grid and axis ticks every 2.
    for n in w.n_min..=w.n_max + 1 {
        let x = MARGIN + (n - w.n_min) * CELL;
        writeln!(
            s,
            r##"  <line x1="{x}" y1="{MARGIN}" x2="{x}" y2="{}" stroke="#ddd" stroke-width="1"/>"##,
            MARGIN + (w.w_max + 1) * CELL
        )
        .unwrap();
        if n <= w.n_max && n.rem_euclid(2) == 0 {
            writeln!(
                s,
                r##"  <text x="{}" y="{}" font-family="monospace" font-size="10" text-anchor="middle">{n}</text>"##,
                x + CELL / 2,
                MARGIN + (w.w_max + 1) * CELL + 14
            )
            .unwrap();
        }
    }
    for wt in 0..=w.w_max + 1 {
        let y = MARGIN + (w.w_max + 1 - wt) * CELL;
        writeln!(
            s,
            r##"  <line x1="{MARGIN}" y1="{y}" x2="{}" y2="{y}" stroke="#ddd" stroke-width="1"/>"##,
            MARGIN + (w.n_max - w.n_min + 1) * CELL
        )
        .unwrap();
        if wt <= w.w_max && wt % 2 == 0 {
            writeln!(
                s,
                r##"  <text x="{}" y="{}" font-family="monospace" font-size="10" text-anchor="end">{wt}</text>"##,
                MARGIN - 6,
                y - CELL / 2 + 4
            )
            .unwrap();
        }
    }

    // Arrows first, markers on top.
    for (src, si, dst, di) in &page.arrows {
        let sdim = page.dims.get(src).copied().unwrap_or(1).max(1);
        // The target may lie outside the window table; default to one slot.
        let ddim = page.dims.get(dst).copied().unwrap_or(1).max(1);
        let (x1, y1) = class_center(page, *src, *si, sdim);
        if !w.contains(*dst) {
            continue;
        }
        let (x2, y2) = class_center(page, *dst, *di, ddim);
        writeln!(
            s,
            r##"  <line x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}" stroke="#c22" stroke-width="1" marker-end="url(#tip)" data-from="{},{}" data-to="{},{}"/>"##,
            src.n, src.w, dst.n, dst.w
        )
        .unwrap();
    }
    for (bd, &dim) in &page.dims {
        if dim == 0 {
            continue;
        }
        for idx in 0..dim {
            let (cx, cy) = class_center(page, *bd, idx, dim);
            writeln!(
                s,
                r##"  <circle cx="{cx}" cy="{cy}" r="{RADIUS}" fill="#222" data-bidegree="{},{}"/>"##,
                bd.n, bd.w
            )
            .unwrap();
        }
        if dim > 1 {
            let (x, y, _) = cell_origin(page, *bd);
            writeln!(
                s,
                r##"  <text x="{}" y="{}" font-family="monospace" font-size="9" fill="#555">{dim}</text>"##,
                x + 2,
                y + 10
            )
            .unwrap();
        }
    }
    writeln!(s, "</svg>").unwrap();
    s
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
