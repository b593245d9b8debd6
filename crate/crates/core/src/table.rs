//! The averages table and the combined structural report for one tuple.

use std::fmt::Write as _;

use serde::Serialize;

use crate::error::Error;
use crate::periodic::PeriodicTuple;
use crate::scalar::Scalar;
use crate::structure::{
    build_poset, full_maximal_start, has_distinct_averages, m_intervals, majorizing_rotation,
    rotation_majorizes, IntervalPoset, MIntervalRecord, PosetJson, PosetNode,
};

/// Everything `analyze` reports about a tuple.
#[derive(Clone, Debug)]
pub struct Analysis<T: Scalar> {
    pub tuple: PeriodicTuple<T>,
    /// `rows[r - 1][i - 1] = a_[i : i+r-1](x)` for `r = 1..n-1`.
    pub rows: Vec<Vec<T>>,
    pub m_intervals: Vec<MIntervalRecord<T>>,
    pub full_maximal_start: usize,
    pub poset: Result<IntervalPoset<T>, (i64, i64, i64, i64)>,
    pub rotation_start: usize,
    pub rotation_is_strict: bool,
    pub distinct_averages: Option<bool>,
}

pub fn analyze<T: Scalar>(x: &PeriodicTuple<T>, check_independence: bool) -> Analysis<T> {
    let n = x.len();
    let rows = (1..n)
        .map(|r| (1..=n as i64).map(|i| x.window_average(i, r)).collect())
        .collect();
    let poset = build_poset(x).map_err(|e| match e {
        Error::DegenerateOrder { first, second } => (first.0, first.1, second.0, second.1),
        other => unreachable!("build_poset only reports degenerate orders: {other}"),
    });
    let rotation_start = majorizing_rotation(x);
    Analysis {
        tuple: x.clone(),
        rows,
        m_intervals: m_intervals(x),
        full_maximal_start: full_maximal_start(x),
        poset,
        rotation_start,
        rotation_is_strict: rotation_majorizes(x, rotation_start as i64),
        distinct_averages: check_independence.then(|| has_distinct_averages(x)),
    }
}

/// Rounds to three decimals, halves away from zero, trailing zeros kept.
pub fn round3(v: f64) -> String {
    let scaled = v * 1000.0;
    let floor = scaled.floor();
    let frac = scaled - floor;
    let rounded = if (frac - 0.5).abs() < 1e-7 {
        if v >= 0.0 { floor + 1.0 } else { floor }
    } else {
        scaled.round()
    };
    let out = format!("{:.3}", rounded / 1000.0);
    if out == "-0.000" { "0.000".into() } else { out }
}

impl<T: Scalar> Analysis<T> {
    pub fn n(&self) -> usize {
        self.tuple.len()
    }

    /// Table cells `(r, i)` whose interval is the M-interval at `i`.
    pub fn marked_cells(&self) -> Vec<(usize, usize)> {
        self.m_intervals.iter().map(|m| (m.kappa + 1, m.start)).collect()
    }

    pub fn warnings(&self) -> Vec<String> {
        let mut out = Vec::new();
        match &self.poset {
            Err((a, b, c, d)) => out.push(format!(
                "degenerate order: M-intervals [{a}:{b}] and [{c}:{d}] overlap without nesting"
            )),
            Ok(p) if !p.is_tree() => out.push(
                "degenerate order: tied averages, the M-interval classes form a forest without a full maximal class"
                    .into(),
            ),
            Ok(_) => {}
        }
        if !self.rotation_is_strict {
            out.push(format!(
                "rotation at {} meets the average line before the end of the period",
                self.rotation_start
            ));
        }
        if self.distinct_averages == Some(false) {
            out.push("short-interval averages are not pairwise distinct".into());
        }
        out
    }

    /// Rows `r`, columns `i`; M-interval cells carry a `*` and the
    /// full-maximal column header is starred.
    pub fn render_table(&self) -> String {
        let n = self.n();
        let marked = self.marked_cells();
        let mut out = String::new();
        let _ = write!(out, "{:>5} |", "r\\i");
        for i in 1..=n {
            let head = if i == self.full_maximal_start { format!("{i}*") } else { i.to_string() };
            let _ = write!(out, " {head:>7}");
        }
        out.push('\n');
        let _ = writeln!(out, "{}", "-".repeat(7 + 8 * n));
        for (r0, row) in self.rows.iter().enumerate() {
            let r = r0 + 1;
            let _ = write!(out, "{r:>5} |");
            for (i0, v) in row.iter().enumerate() {
                let mark = if marked.contains(&(r, i0 + 1)) { "*" } else { " " };
                let _ = write!(out, " {:>6}{mark}", round3(v.to_f64()));
            }
            out.push('\n');
        }
        out
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "n = {}, average = {}", self.n(), self.tuple.mean().to_f64());
        out.push('\n');
        out.push_str(&self.render_table());
        out.push_str("\nM-intervals:\n");
        for m in &self.m_intervals {
            let iv = m.interval();
            let _ = writeln!(out, "  [{}:{}]  kappa = {}  average = {}", iv.a, iv.b, m.kappa, m.average.to_f64());
        }
        let _ = writeln!(out, "\nfull maximal interval: [{}:{}]", self.full_maximal_start, self.full_maximal_start + self.n() - 1);
        let _ = writeln!(out, "majorizing rotation starts at {}", self.rotation_start);
        match &self.poset {
            Ok(p) => {
                let show = |k: usize| p.nodes[k].interval().to_string();
                match p.root {
                    Some(root) => {
                        let _ = writeln!(out, "poset root: {}", show(root));
                    }
                    None => {
                        let _ = writeln!(out, "poset root: none");
                    }
                }
                let minimal: Vec<String> = p.minimal_elements().into_iter().map(show).collect();
                let _ = writeln!(out, "minimal elements: {}", minimal.join(", "));
                for (c, parent) in p.edges() {
                    let _ = writeln!(out, "  {} < {}", show(c), show(parent));
                }
            }
            Err(_) => out.push_str("poset: unavailable\n"),
        }
        for w in self.warnings() {
            let _ = writeln!(out, "warning: {w}");
        }
        out
    }

    pub fn to_report(&self) -> AnalysisReport {
        AnalysisReport {
            n: self.n(),
            average: self.tuple.mean().to_f64(),
            table: self.rows.iter().map(|row| row.iter().map(Scalar::to_f64).collect()).collect(),
            m_intervals: self
                .m_intervals
                .iter()
                .map(|m| PosetNode { start: m.start, kappa: m.kappa, average: m.average.to_f64() })
                .collect(),
            marked_cells: self.marked_cells().into_iter().map(|(r, i)| [r, i]).collect(),
            full_maximal_start: self.full_maximal_start,
            poset: self.poset.as_ref().ok().map(IntervalPoset::to_json),
            majorizing_rotation: self.rotation_start,
            rotation: self.tuple.rotation(self.rotation_start as i64).iter().map(Scalar::to_f64).collect(),
            distinct_averages: self.distinct_averages,
            warnings: self.warnings(),
        }
    }

    /// Table as CSV: a header row `r,1,...,n`, then one row per window length.
    pub fn table_csv(&self) -> String {
        let mut out = String::from("r");
        for i in 1..=self.n() {
            let _ = write!(out, ",{i}");
        }
        out.push('\n');
        for (r0, row) in self.rows.iter().enumerate() {
            let _ = write!(out, "{}", r0 + 1);
            for v in row {
                let _ = write!(out, ",{}", crate::asymptotics::format_sig17(v.to_f64()));
            }
            out.push('\n');
        }
        out
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct AnalysisReport {
    pub n: usize,
    pub average: f64,
    pub table: Vec<Vec<f64>>,
    pub m_intervals: Vec<PosetNode>,
    /// `[r, i]` pairs.
    pub marked_cells: Vec<[usize; 2]>,
    pub full_maximal_start: usize,
    pub poset: Option<PosetJson>,
    pub majorizing_rotation: usize,
    pub rotation: Vec<f64>,
    pub distinct_averages: Option<bool>,
    pub warnings: Vec<String>,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rounding_halves_up() {
        assert_eq!(round3(2.3625), "2.363");
        assert_eq!(round3(18.9 / 8.0), "2.363");
        assert_eq!(round3(2.1625), "2.163");
        assert_eq!(round3(1.775), "1.775");
        assert_eq!(round3(2.0 + 2.0 / 3.0), "2.667");
        assert_eq!(round3(3.0), "3.000");
        assert_eq!(round3(0.0), "0.000");
    }

    #[test]
    fn constant_tuple_report_warns() {
        let x = PeriodicTuple::new(vec![2.0; 3]).unwrap();
        let a = analyze(&x, true);
        assert_eq!(a.full_maximal_start, 1);
        assert!(a.warnings().iter().any(|w| w.starts_with("degenerate order")));
        assert_eq!(a.distinct_averages, Some(false));
        let report = a.to_report();
        assert_eq!(report.poset.unwrap().root, None);
        assert_eq!(report.table.len(), 2);
    }

    #[test]
    fn table_layout() {
        let x = PeriodicTuple::new(vec![1.0, 4.0, 2.0]).unwrap();
        let a = analyze(&x, false);
        let t = a.render_table();
        let lines: Vec<&str> = t.lines().collect();
        assert_eq!(lines.len(), 4);
        assert!(lines[0].contains("3*"));
        assert!(lines[2].contains("4.000*"));
        assert!(a.table_csv().starts_with("r,1,2,3\n1,"));
    }
}
