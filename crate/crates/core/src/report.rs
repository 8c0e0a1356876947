//! Parameter sweeps over `(eps, delta)` grids and their CSV/JSON reports.

use serde::Serialize;

use crate::dynamics::DynSystem;
use crate::rational::{self, Rational};
use crate::shadow::{ShadowConfig, Shadowing};

pub const CSV_HEADER: [&str; 7] = ["eps", "delta", "n_shadowable", "potp", "n_chain_classes", "n_deg_points", "status"];

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SweepRow {
    #[serde(with = "rational::serde_pq")]
    pub eps: Rational,
    #[serde(with = "rational::serde_pq")]
    pub delta: Rational,
    /// `"ok"` or the error kind of a failed cell.
    pub status: String,
    pub n_shadowable: Option<usize>,
    pub potp: Option<bool>,
    pub n_chain_classes: usize,
    /// Singleton components of the proximity graph at gap `eps`.
    pub n_deg_points: usize,
    pub shadowable: Option<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ScaleReport {
    pub system: String,
    pub points: usize,
    pub rows: Vec<SweepRow>,
}

/// Evaluates every cell; rows are eps-major, delta-minor in the grid order
/// given (callers pass ascending grids).
pub fn sweep(
    sys: &DynSystem,
    name: &str,
    eps_grid: &[Rational],
    delta_grid: &[Rational],
    config: ShadowConfig,
) -> ScaleReport {
    let grid = Shadowing::with_config(sys, config).grid(eps_grid, delta_grid);
    let chain_counts: Vec<usize> = delta_grid.iter().map(|d| sys.chain_classes(d).classes.len()).collect();
    let deg_counts: Vec<usize> = eps_grid.iter().map(|e| sys.space().deg_points(e).len()).collect();
    let mut rows = Vec::with_capacity(eps_grid.len() * delta_grid.len());
    for (i, eps) in eps_grid.iter().enumerate() {
        for (j, delta) in delta_grid.iter().enumerate() {
            let (status, n_shadowable, potp, shadowable) = match &grid[i][j] {
                Ok(sh) => (
                    "ok".to_string(),
                    Some(sh.len()),
                    Some(sh.is_full()),
                    Some(sh.iter().map(|x| sys.space().label(x).to_string()).collect()),
                ),
                Err(e) => (e.kind().to_string(), None, None, None),
            };
            rows.push(SweepRow {
                eps: *eps,
                delta: *delta,
                status,
                n_shadowable,
                potp,
                n_chain_classes: chain_counts[j],
                n_deg_points: deg_counts[i],
                shadowable,
            });
        }
    }
    ScaleReport { system: name.to_string(), points: sys.len(), rows }
}

impl ScaleReport {
    pub fn to_csv(&self) -> String {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
        w.write_record(CSV_HEADER).expect("in-memory write");
        for r in &self.rows {
            w.write_record([
                rational::format(&r.eps),
                rational::format(&r.delta),
                r.n_shadowable.map(|v| v.to_string()).unwrap_or_default(),
                r.potp.map(|v| v.to_string()).unwrap_or_default(),
                r.n_chain_classes.to_string(),
                r.n_deg_points.to_string(),
                r.status.clone(),
            ])
            .expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("flush")).expect("utf-8")
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gallery;
    use crate::rational::ratio;

    #[test]
    fn single_cell_matches_direct_query() {
        let sys = gallery::circle_rotation(4, 0).unwrap();
        let r = sweep(&sys, "c4", &[ratio(1, 4)], &[ratio(1, 4)], ShadowConfig::default());
        assert_eq!(r.rows.len(), 1);
        assert_eq!(r.rows[0].n_shadowable, Some(0));
        assert_eq!(r.rows[0].potp, Some(false));
        let csv = r.to_csv();
        assert_eq!(csv, "eps,delta,n_shadowable,potp,n_chain_classes,n_deg_points,status\n1/4,1/4,0,false,1,0,ok\n");
    }

    #[test]
    fn failed_cells_are_recorded() {
        let sys = gallery::circle_rotation(6, 0).unwrap();
        let cfg = ShadowConfig { state_cap: 3, short_circuit: true };
        let r = sweep(&sys, "c6", &[ratio(1, 6)], &[ratio(0, 1), ratio(1, 6)], cfg);
        assert_eq!(r.rows[0].status, "ok");
        assert_eq!(r.rows[1].status, "StateCapExceeded");
        assert!(r.to_csv().ends_with("1/6,1/6,,,1,0,StateCapExceeded\n"));
    }
}
