//! Run reports and their JSON form.
//!
//! The JSON writer is hand-rolled so the output is byte-stable: fixed key
//! order, sorted tables, no floats. Wall-clock timing is reported as zero
//! unless explicitly requested, which keeps repeated runs byte-identical.

use algebra::{Bidegree, Window};
use std::collections::BTreeMap;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    Error,
}

impl Status {
    pub fn as_str(&self) -> &'static str {
        match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Error => "ERROR",
        }
    }
}

/// Property-gate results attached to every run.
#[derive(Debug, Clone)]
pub struct Gates {
    pub d_squared_ok: bool,
    pub euler_ok: bool,
    pub comm_ok: bool,
    pub assoc_ok: bool,
    pub leibniz_ok: bool,
    pub monotonic_ok: bool,
    pub stability_certified: bool,
    pub stability_resolved: bool,
    pub seeds_consumed: bool,
    pub cap_stable: bool,
    pub seed_lines: Vec<String>,
    pub stability_lines: Vec<String>,
}

impl Default for Gates {
    fn default() -> Self {
        Gates {
            d_squared_ok: true,
            euler_ok: true,
            comm_ok: true,
            assoc_ok: true,
            leibniz_ok: true,
            monotonic_ok: true,
            stability_certified: true,
            stability_resolved: true,
            seeds_consumed: true,
            cap_stable: true,
            seed_lines: Vec::new(),
            stability_lines: Vec::new(),
        }
    }
}

impl Gates {
    pub fn all_ok(&self) -> bool {
        self.d_squared_ok
            && self.euler_ok
            && self.comm_ok
            && self.assoc_ok
            && self.leibniz_ok
            && self.monotonic_ok
            && self.stability_resolved
            && self.seeds_consumed
            && self.cap_stable
    }

    pub fn summary(&self) -> String {
        let flag = |b: bool| if b { "ok" } else { "FAIL" };
        format!(
            "d2={} euler={} comm={} assoc={} leibniz={} monotone={} stability={}{} seeds={} cap={}",
            flag(self.d_squared_ok),
            flag(self.euler_ok),
            flag(self.comm_ok),
            flag(self.assoc_ok),
            flag(self.leibniz_ok),
            flag(self.monotonic_ok),
            if self.stability_certified { "certified" } else { "annotated" },
            if self.stability_resolved { "" } else { "(UNRESOLVED)" },
            flag(self.seeds_consumed),
            flag(self.cap_stable),
        )
    }
}

#[derive(Debug, Clone)]
pub struct PageJson {
    pub r: i32,
    /// (n, w, dim), sorted by bidegree.
    pub dims: Vec<(i32, i32, usize)>,
    /// ((src n, src w), (dst n, dst w), rank).
    pub differentials: Vec<((i32, i32), (i32, i32), usize)>,
}

#[derive(Debug, Clone)]
pub struct RunReport {
    pub scenario: String,
    pub status: Status,
    pub pages: Vec<PageJson>,
    pub mismatches: Vec<String>,
    pub gates: Gates,
    pub total_ms: u64,
}

fn json_escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\t' => out.push_str("\\t"),
            c if (c as u32) < 0x20 => out.push_str(&format!("\\u{:04x}", c as u32)),
            c => out.push(c),
        }
    }
    out
}

impl RunReport {
    /// Stable-order JSON per the documented schema:
    /// {scenario, status, pages, mismatches, timings}.
    pub fn to_json(&self, with_timings: bool) -> String {
        let mut s = String::new();
        s.push_str("{\n");
        s.push_str(&format!("  \"scenario\": \"{}\",\n", json_escape(&self.scenario)));
        s.push_str(&format!("  \"status\": \"{}\",\n", self.status.as_str()));
        s.push_str("  \"pages\": [");
        for (i, p) in self.pages.iter().enumerate() {
            if i > 0 {
                s.push(',');
            }
            s.push_str("\n    {");
            s.push_str(&format!("\"r\": {}, \"dims\": [", p.r));
            for (j, (n, w, d)) in p.dims.iter().enumerate() {
                if j > 0 {
                    s.push_str(", ");
                }
                s.push_str(&format!("[{n}, {w}, {d}]"));
            }
            s.push_str("], \"differentials\": [");
            for (j, ((sn, sw), (tn, tw), rank)) in p.differentials.iter().enumerate() {
                if j > 0 {
                    s.push_str(", ");
                }
                s.push_str(&format!("[[{sn}, {sw}], [{tn}, {tw}], {rank}]"));
            }
            s.push_str("]}");
        }
        if !self.pages.is_empty() {
            s.push_str("\n  ");
        }
        s.push_str("],\n");
        s.push_str("  \"mismatches\": [");
        for (i, m) in self.mismatches.iter().enumerate() {
            if i > 0 {
                s.push(',');
            }
            s.push_str(&format!("\n    \"{}\"", json_escape(m)));
        }
        if !self.mismatches.is_empty() {
            s.push_str("\n  ");
        }
        s.push_str("],\n");
        let ms = if with_timings { self.total_ms } else { 0 };
        s.push_str(&format!("  \"timings\": {{\"total_ms\": {ms}}}\n"));
        s.push_str("}\n");
        s
    }

    /// One human-readable block for the terminal.
    pub fn render_text(&self, seed_audit: bool) -> String {
        let mut out = String::new();
        out.push_str(&format!("{:<22} {}\n", self.scenario, self.status.as_str()));
        out.push_str(&format!("  gates: {}\n", self.gates.summary()));
        if seed_audit {
            for line in &self.gates.seed_lines {
                out.push_str(&format!("  seed: {line}\n"));
            }
            for line in &self.gates.stability_lines {
                out.push_str(&format!("  stability: {line}\n"));
            }
        }
        for m in &self.mismatches {
            out.push_str(&format!("  mismatch: {m}\n"));
        }
        out
    }
}

/// Everything a chart needs for one page.
#[derive(Debug, Clone)]
pub struct ChartPage {
    pub index: usize,
    pub r: i32,
    pub window: Window,
    pub dims: BTreeMap<Bidegree, usize>,
    /// (src bidegree, src class index, dst bidegree, dst class index).
    pub arrows: Vec<(Bidegree, usize, Bidegree, usize)>,
}
