//! Command-line runner for the scenario corpus.
//!
//! ```text
//! corpus run --scenario <name> | --all [--prime P] [--window NMIN:NMAX:WMAX]
//!            [--json-out DIR] [--chart-out DIR] [--page R] [--level K]
//!            [--seed-audit] [--timings] [--corpus-dir DIR]
//! corpus list [--corpus-dir DIR]
//! ```
//!
//! Exit codes: 0 when every selected scenario passes, 1 on any FAIL, 2 on
//! usage errors, unknown scenarios, or parse failures.

use algebra::Window;
use corpus::{default_corpus_dir, emit_chart, load_scenario, manifest_names, run_scenario_opts, Status};
use std::path::PathBuf;
use std::process::ExitCode;

struct Options {
    scenario: Option<String>,
    all: bool,
    prime: Option<u32>,
    window: Option<Window>,
    json_out: Option<PathBuf>,
    chart_out: Option<PathBuf>,
    page: Option<i32>,
    level: Option<usize>,
    seed_audit: bool,
    timings: bool,
    corpus_dir: PathBuf,
}

fn usage() -> ExitCode {
    eprintln!(
        "usage: corpus run (--scenario <name> | --all) [--prime P] [--window NMIN:NMAX:WMAX]\n\
         \x20                 [--json-out DIR] [--chart-out DIR] [--page R] [--level K]\n\
         \x20                 [--seed-audit] [--timings] [--corpus-dir DIR]\n\
         \x20      corpus list [--corpus-dir DIR]"
    );
    ExitCode::from(2)
}

fn parse_window(text: &str) -> Option<Window> {
    let parts: Vec<&str> = text.split(':').collect();
    if parts.len() != 3 {
        return None;
    }
    Some(Window::new(
        parts[0].parse().ok()?,
        parts[1].parse().ok()?,
        parts[2].parse().ok()?,
    ))
}

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let Some(command) = args.first() else {
        return usage();
    };
    let mut opts = Options {
        scenario: None,
        all: false,
        prime: None,
        window: None,
        json_out: None,
        chart_out: None,
        page: None,
        level: None,
        seed_audit: false,
        timings: false,
        corpus_dir: default_corpus_dir(),
    };
    let mut i = 1;
    let value = |i: &mut usize| -> Option<String> {
        *i += 1;
        args.get(*i).cloned()
    };
    while i < args.len() {
        match args[i].as_str() {
            "--scenario" => opts.scenario = value(&mut i),
            "--all" => opts.all = true,
            "--prime" => match value(&mut i).and_then(|v| v.parse().ok()) {
                Some(p) => opts.prime = Some(p),
                None => return usage(),
            },
            "--window" => match value(&mut i).as_deref().and_then(parse_window) {
                Some(w) => opts.window = Some(w),
                None => return usage(),
            },
            "--json-out" => opts.json_out = value(&mut i).map(PathBuf::from),
            "--chart-out" => opts.chart_out = value(&mut i).map(PathBuf::from),
            "--page" => match value(&mut i).and_then(|v| v.parse().ok()) {
                Some(r) => opts.page = Some(r),
                None => return usage(),
            },
            "--level" => match value(&mut i).and_then(|v| v.parse().ok()) {
                Some(k) => opts.level = Some(k),
                None => return usage(),
            },
            "--seed-audit" => opts.seed_audit = true,
            "--timings" => opts.timings = true,
            "--corpus-dir" => match value(&mut i) {
                Some(d) => opts.corpus_dir = PathBuf::from(d),
                None => return usage(),
            },
            _ => return usage(),
        }
        i += 1;
    }

    let names = match manifest_names(&opts.corpus_dir) {
        Ok(n) => n,
        Err(e) => {
            eprintln!("cannot read corpus manifest in {}: {e}", opts.corpus_dir.display());
            return ExitCode::from(2);
        }
    };

    match command.as_str() {
        "list" => {
            for n in names {
                println!("{n}");
            }
            ExitCode::SUCCESS
        }
        "run" => run_command(&opts, &names),
        _ => usage(),
    }
}

fn run_command(opts: &Options, names: &[String]) -> ExitCode {
    let selected: Vec<String> = if opts.all {
        names
            .iter()
            .filter(|n| match opts.prime {
                None => true,
                Some(p) => match load_scenario(&opts.corpus_dir, n) {
                    Ok(s) => s.prime == p,
                    Err(_) => true,
                },
            })
            .cloned()
            .collect()
    } else {
        match &opts.scenario {
            Some(name) if names.contains(name) => vec![name.clone()],
            Some(name) => {
                eprintln!("unknown scenario `{name}`; known scenarios:");
                for n in names {
                    eprintln!("  {n}");
                }
                return ExitCode::from(2);
            }
            None => return usage(),
        }
    };

    let mut all_pass = true;
    for name in &selected {
        let mut scenario = match load_scenario(&opts.corpus_dir, name) {
            Ok(s) => s,
            Err(e) => {
                eprintln!("{e}");
                return ExitCode::from(2);
            }
        };
        if let Some(w) = opts.window {
            scenario.window = w;
        }
        let outcome = run_scenario_opts(&scenario, opts.level, false);
        print!("{}", outcome.report.render_text(opts.seed_audit));
        if outcome.report.status != Status::Pass {
            all_pass = false;
        }
        if let Some(dir) = &opts.json_out {
            if let Err(e) = std::fs::create_dir_all(dir) {
                eprintln!("cannot create {}: {e}", dir.display());
                return ExitCode::from(2);
            }
            let path = dir.join(format!("{name}.json"));
            if let Err(e) = std::fs::write(&path, outcome.report.to_json(opts.timings)) {
                eprintln!("cannot write {}: {e}", path.display());
                return ExitCode::from(2);
            }
        }
        if let Some(dir) = &opts.chart_out {
            if let Err(e) = std::fs::create_dir_all(dir) {
                eprintln!("cannot create {}: {e}", dir.display());
                return ExitCode::from(2);
            }
            for chart in &outcome.charts {
                if let Some(r) = opts.page {
                    if chart.r != r {
                        continue;
                    }
                }
                let path = dir.join(format!("{name}_page{}.svg", chart.r));
                if let Err(e) = std::fs::write(&path, emit_chart(chart, name)) {
                    eprintln!("cannot write {}: {e}", path.display());
                    return ExitCode::from(2);
                }
            }
            if let Some(r) = opts.page {
                if !outcome.charts.iter().any(|c| c.r == r) {
                    eprintln!("{name}: no page with r = {r}");
                    return ExitCode::from(2);
                }
            }
        }
    }
    if all_pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
