//! Plain-text rendering of reports.

use std::fmt::Write;

use crate::report::*;

fn oneline(f: &[usize]) -> String {
    let sep = if f.iter().any(|&v| v > 9) { " " } else { "" };
    format!("[{}]", f.iter().map(ToString::to_string).collect::<Vec<_>>().join(sep))
}

fn set(members: &[usize]) -> String {
    format!("{{{}}}", members.iter().map(ToString::to_string).collect::<Vec<_>>().join(","))
}

fn sets(blocks: &[Vec<usize>]) -> String {
    blocks.iter().map(|b| set(b)).collect::<Vec<_>>().join(" ")
}

fn values(v: &[Exact]) -> String {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")
}

fn table(out: &mut String, row_labels: &[String], col_labels: &[String], cells: &[Vec<String>]) {
    let head = row_labels.iter().map(String::len).max().unwrap_or(0);
    let width = col_labels.iter().map(String::len).chain(cells.iter().flatten().map(String::len)).max().unwrap_or(1);
    let _ = write!(out, "{:head$}", "");
    for c in col_labels {
        let _ = write!(out, " {c:>width$}");
    }
    out.push('\n');
    for (label, row) in row_labels.iter().zip(cells) {
        let _ = write!(out, "{label:>head$}");
        for v in row {
            let _ = write!(out, " {v:>width$}");
        }
        out.push('\n');
    }
}

fn matrix(out: &mut String, rows: &[StateLabel], cols: &[StateLabel], m: &[Vec<Exact>]) {
    let rl: Vec<String> = rows.iter().map(ToString::to_string).collect();
    let cl: Vec<String> = cols.iter().map(ToString::to_string).collect();
    let cells: Vec<Vec<String>> = m.iter().map(|r| r.iter().map(ToString::to_string).collect()).collect();
    table(out, &rl, &cl, &cells);
}

fn labelled_vector(out: &mut String, name: &str, labels: &[StateLabel], v: &[Exact]) {
    let _ = writeln!(out, "{name}:");
    for (l, x) in labels.iter().zip(v) {
        let _ = writeln!(out, "  {l:>8}  {x}");
    }
}

pub fn render(report: &Report) -> String {
    let mut out = String::new();
    let colors: Vec<String> = report.input.colors.iter().map(|c| oneline(c)).collect();
    let _ = writeln!(
        out,
        "system: n = {}, colors {} weights {}",
        report.input.n,
        colors.join(" "),
        values(&report.input.weights)
    );
    match &report.payload {
        Payload::Hierarchy(h) => {
            let kind = if h.augmented { "augmented level" } else { "level" };
            for m in &h.matrices {
                let _ = writeln!(out, "\n{kind} {} matrix of {}:", h.level, oneline(&m.color));
                matrix(&mut out, &h.labels, &h.labels, &m.rows);
            }
            if let Some(ok) = h.oracle_agrees {
                let _ = writeln!(out, "\npermanent oracle agrees: {ok}");
            }
            if let Some(e) = &h.inclusion {
                let _ = writeln!(out, "\ninclusion operator {} -> {}:", e.from, e.to);
                let rows: Vec<StateLabel> = h.labels.iter().filter(|l| **l != StateLabel::Collapsed).cloned().collect();
                matrix(&mut out, &rows, &e.column_labels, &e.rows);
            }
        }
        Payload::Kernel(k) => {
            let _ = writeln!(out, "semigroup size: {}", k.semigroup_size);
            let _ =
                writeln!(out, "kernel size: {}, rank {}, local group order {}", k.kernel_size, k.rank, k.group_order);
            let _ = writeln!(
                out,
                "local group abelian: {}, element orders {:?}",
                k.local_group_abelian, k.local_group_orders
            );
            let _ = writeln!(out, "right group: {}\n", k.right_group);
            let rl: Vec<String> = k.partitions.iter().map(|p| sets(p)).collect();
            let cl: Vec<String> = k.ranges.iter().map(|r| set(r)).collect();
            let cells: Vec<Vec<String>> =
                k.idempotents.iter().map(|r| r.iter().map(|f| oneline(f)).collect()).collect();
            table(&mut out, &rl, &cl, &cells);
        }
        Payload::Limits(l) => {
            let _ = writeln!(out, "kernel size: {}, local group order {}", l.kernel_size, l.group_order);
            let _ = writeln!(out, "alpha (partitions): {}", values(&l.alpha));
            let _ = writeln!(out, "beta (ranges): {}", values(&l.beta));
            let _ = writeln!(out, "lambda * lambda = lambda: {}", l.idempotent);
            let _ = writeln!(out, "lambda on the kernel:");
            for w in &l.lambda {
                let _ = writeln!(out, "  {}  {}", oneline(&w.element), w.weight);
            }
        }
        Payload::Fields(f) => {
            let _ = writeln!(out, "kernel rank: {}", f.rank);
            let _ = writeln!(out, "stationary distribution: {}", values(&f.stationary));
            for lf in &f.levels {
                let _ = writeln!(out, "\nlevel {}", lf.level);
                let rl: Vec<String> = lf.labels.iter().map(ToString::to_string).collect();
                let cells: Vec<Vec<String>> = (0..rl.len())
                    .map(|i| {
                        vec![
                            lf.pi_raw[i].to_string(),
                            lf.pi[i].to_string(),
                            lf.u_raw[i].to_string(),
                            lf.u[i].to_string(),
                        ]
                    })
                    .collect();
                let cl = ["pi raw", "pi", "u raw", "u"].map(String::from);
                table(&mut out, &rl, &cl, &cells);
            }
        }
        Payload::Rank(r) => {
            let _ = writeln!(out, "rank: {}", r.rank);
            let _ = writeln!(out, "witness pi(J - u2): {}", values(&r.witness));
            let _ = writeln!(out, "kernel rank: {}", r.kernel_rank);
        }
        Payload::RightGroup(g) => {
            let _ = writeln!(out, "right group: {}", g.right_group);
            if let Some(p) = &g.partition {
                let _ = writeln!(out, "partition: {}", sets(p));
            }
            labelled_vector(&mut out, "u2", &g.pair_labels, &g.u2);
        }
        Payload::Construct(c) => {
            let built: Vec<String> = c.system.colors.iter().map(|f| oneline(f)).collect();
            let _ = writeln!(out, "case {} construction: {}", c.case, built.join(" "));
            let k = &c.classification;
            let _ = writeln!(out, "classified as case {}", k.case);
            let _ = writeln!(out, "doubleton: {}", set(&k.doubleton));
            let _ = writeln!(out, "relabel: {:?}", k.relabel);
            let _ = writeln!(out, "q = {}", k.q);
            let _ =
                writeln!(out, "max in-degree {}, max distinct in-neighbours {}", k.max_in_degree, k.max_in_neighbours);
            let _ = writeln!(out, "right group: {}", k.right_group);
            let _ = writeln!(out, "predictions consistent: {}", k.consistent);
            let _ = writeln!(out, "pi: {}", values(&k.pi));
            let _ = writeln!(out, "beta: {}", values(&k.beta));
            let _ = writeln!(out, "ranges: {}", sets(&k.ranges));
            let _ = writeln!(out, "u2: {}", values(&k.u2));
        }
    }
    out
}
