// SPDX-License-Identifier: Apache-2.0

//! `dcore bench`: one table row per (algorithm, mode, blocks, repeat).

use std::io::{self, Write};

use crate::run::{self, Algorithm, RunSpec};
use crate::{load, BenchArgs, Failure};

const HEADER: [&str; 9] = [
    "algo",
    "mode",
    "blocks",
    "rep",
    "phase_steps",
    "steps",
    "messages",
    "intra",
    "wall_ms",
];

pub fn bench(a: BenchArgs) -> Result<(), Failure> {
    let g = load(&a.input)?;
    let mut specs = Vec::new();
    for &algo in &a.algos {
        let algorithm: Algorithm = algo.into();
        if algorithm == Algorithm::Peel {
            specs.push(RunSpec {
                threads: a.threads,
                ..RunSpec::peel()
            });
            continue;
        }
        for &mode in &a.modes {
            for &blocks in &a.blocks {
                specs.push(RunSpec {
                    algorithm,
                    mode,
                    blocks,
                    partitioner: a.partitioner,
                    threads: a.threads,
                });
            }
        }
    }

    let mut out = io::stdout().lock();
    writeln!(
        out,
        "# {} vertices, {} arcs, max degree {}",
        g.n(),
        g.arc_count(),
        g.max_degree()
    )?;
    write_row(&mut out, &HEADER.map(String::from))?;
    for spec in &specs {
        for rep in 1..=a.repeat {
            let (_, report) = run::execute(&g, spec)?;
            let distributed = spec.algorithm != Algorithm::Peel;
            let dash = || "-".to_string();
            let phase_steps: Vec<String> = report
                .phases
                .iter()
                .map(|m| m.supersteps.to_string())
                .collect();
            let intra: u64 = report.phases.iter().map(|m| m.messages_intra).sum();
            let row = [
                spec.algorithm.to_string(),
                if distributed {
                    spec.mode.to_string()
                } else {
                    dash()
                },
                if distributed {
                    spec.blocks.to_string()
                } else {
                    dash()
                },
                rep.to_string(),
                if distributed {
                    phase_steps.join("/")
                } else {
                    dash()
                },
                report.total_supersteps.to_string(),
                report.total_messages.to_string(),
                intra.to_string(),
                format!("{:.3}", report.wall_time_secs * 1e3),
            ];
            write_row(&mut out, &row)?;
        }
    }
    Ok(())
}

fn write_row(out: &mut impl Write, cells: &[String; 9]) -> io::Result<()> {
    const WIDTHS: [usize; 9] = [8, 6, 6, 3, 14, 7, 11, 11, 10];
    let mut line = String::new();
    for (i, (cell, w)) in cells.iter().zip(WIDTHS).enumerate() {
        if i > 0 {
            line.push(' ');
        }
        if i < 2 {
            line.push_str(&format!("{cell:<w$}"));
        } else {
            line.push_str(&format!("{cell:>w$}"));
        }
    }
    writeln!(out, "{}", line.trim_end())
}
