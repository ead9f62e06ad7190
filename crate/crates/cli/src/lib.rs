//! Batch harness: runs the registered suites and gluing scenes and writes
//! deterministic CSV and JSON reports.

pub mod config;
pub mod report;
pub mod scene;
pub mod suites;

use std::time::Instant;

use config::RunConfig;
use report::{Counts, Row, SuiteSummary, Summary};
use suites::{Ctx, SUITES};

/// Runs the selected suites concurrently; rows come back in registered order.
/// `wall_ms` stays zero unless `timings` is set, so reports are reproducible.
pub fn run(cfg: &RunConfig, timings: bool) -> (Vec<Row>, Summary) {
    let selected = cfg.selected();
    let per_suite: Vec<Vec<Row>> = std::thread::scope(|s| {
        let handles: Vec<_> = SUITES
            .iter()
            .enumerate()
            .filter(|(_, (id, _))| selected.contains(id))
            .map(|(i, &(id, suite))| {
                let ctx = Ctx {
                    cfg: cfg.clone(),
                    stream: i as u64,
                };
                s.spawn(move || {
                    let t0 = Instant::now();
                    let mut rows = std::panic::catch_unwind(|| suite(&ctx)).unwrap_or_else(|p| {
                        let msg = p
                            .downcast_ref::<String>()
                            .cloned()
                            .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                            .unwrap_or_else(|| "panic".into());
                        vec![Row::error(id, "panic", id, msg)]
                    });
                    if timings {
                        let ms = t0.elapsed().as_millis() as u64;
                        for r in &mut rows {
                            r.wall_ms = ms;
                        }
                    }
                    rows
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("suite thread")).collect()
    });
    let suites = selected
        .iter()
        .zip(&per_suite)
        .map(|(id, rows)| SuiteSummary {
            id: id.to_string(),
            counts: Counts::of(rows),
        })
        .collect();
    let rows: Vec<Row> = per_suite.into_iter().flatten().collect();
    let totals = Counts::of(&rows);
    let exit_code = i32::from(totals.failed());
    let summary = Summary {
        prng: "chacha8",
        seed: cfg.seed,
        grid_h: cfg.grid_h,
        horizon: cfg.horizon,
        suites,
        totals,
        exit_code,
    };
    (rows, summary)
}
