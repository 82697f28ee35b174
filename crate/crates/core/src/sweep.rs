//! Fidelity surfaces over pump amplitude and conversion separation, the
//! separation threshold for a fidelity target, and their CSV/SVG renderings.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dynamics::{drive_schedule, simulate_gate};
use crate::error::{arg_err, io_err, Result};
use crate::params::Config;

pub const CSV_HEADER: &str = "eta,delta2_hz,fidelity,t_f_s";

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub eta: f64,
    /// Hz.
    pub delta2: f64,
    pub fidelity: f64,
    /// Seconds.
    pub t_f: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FidelityGrid {
    pub eta_axis: Vec<f64>,
    pub delta_axis: Vec<f64>,
    /// `values[i][j]` belongs to `eta_axis[i]`, `delta_axis[j]`.
    pub values: Vec<Vec<f64>>,
    /// Gate duration per η row.
    pub t_f: Vec<f64>,
    pub threshold: f64,
}

impl FidelityGrid {
    pub fn shape(&self) -> (usize, usize) {
        (self.eta_axis.len(), self.delta_axis.len())
    }

    pub fn point(&self, i: usize, j: usize) -> SweepPoint {
        SweepPoint {
            eta: self.eta_axis[i],
            delta2: self.delta_axis[j],
            fidelity: self.values[i][j],
            t_f: self.t_f[i],
        }
    }

    /// Row-major (η outer, δ inner).
    pub fn points(&self) -> impl Iterator<Item = SweepPoint> + '_ {
        let (r, c) = self.shape();
        (0..r).flat_map(move |i| (0..c).map(move |j| self.point(i, j)))
    }

    /// True when some point is at or above the threshold and some below.
    pub fn threshold_crossed(&self) -> bool {
        let above = self.values.iter().flatten().any(|&v| v >= self.threshold);
        let below = self.values.iter().flatten().any(|&v| v < self.threshold);
        above && below
    }
}

fn check_axis(name: &str, axis: &[f64]) -> Result<()> {
    if axis.is_empty() {
        return arg_err(format!("{name} axis is empty"));
    }
    if axis.iter().any(|&v| !(v > 0.0 && v.is_finite())) {
        return arg_err(format!("{name} axis must be positive and finite"));
    }
    if axis.windows(2).any(|w| w[0] > w[1]) {
        return arg_err(format!("{name} axis must be sorted"));
    }
    Ok(())
}

/// Simulates every `(η, δ)` pair in parallel; values land by index, so the
/// result does not depend on scheduling.
pub fn fidelity_grid(
    config: &Config,
    eta_axis: &[f64],
    delta_axis: &[f64],
) -> Result<FidelityGrid> {
    check_axis("eta", eta_axis)?;
    check_axis("delta", delta_axis)?;
    let cols = delta_axis.len();
    let flat: Vec<f64> = (0..eta_axis.len() * cols)
        .into_par_iter()
        .map(|k| {
            simulate_gate(config, eta_axis[k / cols], delta_axis[k % cols]).map(|r| r.avg_fidelity)
        })
        .collect::<Result<_>>()?;
    let t_f = eta_axis
        .iter()
        .map(|&eta| {
            drive_schedule(config, eta, delta_axis[0], config.spectator_model).map(|s| s.t_f)
        })
        .collect::<Result<_>>()?;
    Ok(FidelityGrid {
        eta_axis: eta_axis.to_vec(),
        delta_axis: delta_axis.to_vec(),
        values: flat.chunks(cols).map(<[f64]>::to_vec).collect(),
        t_f,
        threshold: config.gate.target_fidelity,
    })
}

/// Grid on the config's own sweep axes.
pub fn default_grid(config: &Config) -> Result<FidelityGrid> {
    fidelity_grid(config, &config.sweep.eta_axis(), &config.sweep.delta_axis())
}

/// Smallest δ in `[delta_lo, delta_hi]` with fidelity ≥ `f_target`, by
/// bisection to `tol_hz`. `None` when even `delta_hi` misses the target.
pub fn min_delta_for_target(
    config: &Config,
    eta: f64,
    f_target: f64,
    delta_lo: f64,
    delta_hi: f64,
    tol_hz: f64,
) -> Result<Option<f64>> {
    if !(delta_lo < delta_hi) {
        return arg_err(format!(
            "empty separation interval [{delta_lo}, {delta_hi}]"
        ));
    }
    if !(tol_hz > 0.0) {
        return arg_err(format!(
            "bisection tolerance must be positive, got {tol_hz}"
        ));
    }
    let meets = |d: f64| simulate_gate(config, eta, d).map(|r| r.avg_fidelity >= f_target);
    if meets(delta_lo)? {
        return Ok(Some(delta_lo));
    }
    if !meets(delta_hi)? {
        return Ok(None);
    }
    let (mut lo, mut hi) = (delta_lo, delta_hi);
    while hi - lo > tol_hz {
        let mid = 0.5 * (lo + hi);
        if meets(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(Some(hi))
}

pub fn grid_csv(grid: &FidelityGrid) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for p in grid.points() {
        let _ = writeln!(out, "{},{},{},{}", p.eta, p.delta2, p.fidelity, p.t_f);
    }
    out
}

pub fn emit_grid_csv(grid: &FidelityGrid, path: &Path) -> Result<()> {
    fs::write(path, grid_csv(grid)).map_err(|e| io_err(path, e))
}

const PLOT_W: f64 = 600.0;
const PLOT_H: f64 = 400.0;
const LEFT: f64 = 80.0;
const TOP: f64 = 30.0;
const BOTTOM: f64 = 60.0;
const RIGHT: f64 = 120.0;

/// Viridis-like ramp sampled at five stops.
fn color(t: f64) -> String {
    const STOPS: [[f64; 3]; 5] = [
        [68.0, 1.0, 84.0],
        [59.0, 82.0, 139.0],
        [33.0, 145.0, 140.0],
        [94.0, 201.0, 98.0],
        [253.0, 231.0, 37.0],
    ];
    let t = if t.is_finite() {
        t.clamp(0.0, 1.0)
    } else {
        0.0
    };
    let x = t * (STOPS.len() - 1) as f64;
    let k = (x.floor() as usize).min(STOPS.len() - 2);
    let f = x - k as f64;
    let c: Vec<u8> = (0..3)
        .map(|m| (STOPS[k][m] + f * (STOPS[k + 1][m] - STOPS[k][m])).round() as u8)
        .collect();
    format!("#{:02x}{:02x}{:02x}", c[0], c[1], c[2])
}

/// Linear crossing position of `th` between `a` (at 0) and `b` (at 1).
fn crossing(a: f64, b: f64, th: f64) -> Option<f64> {
    if (a < th) != (b < th) {
        Some(((th - a) / (b - a)).clamp(0.0, 1.0))
    } else {
        None
    }
}

/// Threshold crossings in cell-index coordinates `(column, row)`: the first
/// crossing along each η row, or along each δ column if no row crosses.
fn contour_points(grid: &FidelityGrid) -> Vec<(f64, f64)> {
    let (rows, cols) = grid.shape();
    let th = grid.threshold;
    let by_row: Vec<(f64, f64)> = (0..rows)
        .filter_map(|i| {
            (0..cols.saturating_sub(1)).find_map(|j| {
                crossing(grid.values[i][j], grid.values[i][j + 1], th)
                    .map(|f| (j as f64 + f, i as f64))
            })
        })
        .collect();
    if !by_row.is_empty() {
        return by_row;
    }
    (0..cols)
        .filter_map(|j| {
            (0..rows.saturating_sub(1)).find_map(|i| {
                crossing(grid.values[i][j], grid.values[i + 1][j], th)
                    .map(|f| (j as f64, i as f64 + f))
            })
        })
        .collect()
}

/// Heatmap of fidelity (δ across, η up) with the threshold contour.
pub fn heatmap_svg(grid: &FidelityGrid) -> String {
    let (rows, cols) = grid.shape();
    let cw = PLOT_W / cols as f64;
    let ch = PLOT_H / rows as f64;
    let all = grid.values.iter().flatten().copied();
    let (vmin, vmax) = all.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| {
        (a.min(v), b.max(v))
    });
    let span = if vmax > vmin { vmax - vmin } else { 1.0 };
    let px = |col: f64| LEFT + (col + 0.5) * cw;
    let py = |row: f64| TOP + PLOT_H - (row + 0.5) * ch;

    let width = LEFT + PLOT_W + RIGHT;
    let height = TOP + PLOT_H + BOTTOM;
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(
        s,
        r#"<rect width="{width}" height="{height}" fill="white"/>"#
    );
    let _ = writeln!(s, r#"<g class="cells" shape-rendering="crispEdges">"#);
    for i in 0..rows {
        for j in 0..cols {
            let _ = writeln!(
                s,
                r#"<rect x="{:.3}" y="{:.3}" width="{:.3}" height="{:.3}" fill="{}"/>"#,
                LEFT + j as f64 * cw,
                TOP + PLOT_H - (i + 1) as f64 * ch,
                cw,
                ch,
                color((grid.values[i][j] - vmin) / span)
            );
        }
    }
    let _ = writeln!(s, "</g>");

    if grid.threshold_crossed() {
        let pts = contour_points(grid);
        if !pts.is_empty() {
            let coords: Vec<String> = pts
                .iter()
                .map(|&(c, r)| format!("{:.3},{:.3}", px(c), py(r)))
                .collect();
            let _ = writeln!(
                s,
                r#"<polyline class="contour" points="{}" fill="none" stroke="white" stroke-width="2"/>"#,
                coords.join(" ")
            );
        }
    }

    // axes: first, middle and last tick on each
    let ticks = |n: usize| -> Vec<usize> {
        let mut t = vec![0, n / 2, n - 1];
        t.dedup();
        t
    };
    for j in ticks(cols) {
        let _ = writeln!(
            s,
            r#"<text x="{:.3}" y="{:.3}" text-anchor="middle">{:.4e}</text>"#,
            px(j as f64),
            TOP + PLOT_H + 18.0,
            grid.delta_axis[j]
        );
    }
    for i in ticks(rows) {
        let _ = writeln!(
            s,
            r#"<text x="{:.3}" y="{:.3}" text-anchor="end">{:.3}</text>"#,
            LEFT - 6.0,
            py(i as f64) + 4.0,
            grid.eta_axis[i]
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="{:.3}" y="{:.3}" text-anchor="middle">conversion separation (Hz)</text>"#,
        LEFT + PLOT_W / 2.0,
        TOP + PLOT_H + 42.0
    );
    let _ = writeln!(
        s,
        r#"<text x="20" y="{:.3}" text-anchor="middle" transform="rotate(-90 20 {:.3})">pump amplitude</text>"#,
        TOP + PLOT_H / 2.0,
        TOP + PLOT_H / 2.0
    );

    // colorbar
    let bx = LEFT + PLOT_W + 30.0;
    for k in 0..50 {
        let t = k as f64 / 49.0;
        let _ = writeln!(
            s,
            r#"<rect x="{bx:.3}" y="{:.3}" width="20" height="{:.3}" fill="{}"/>"#,
            TOP + PLOT_H * (1.0 - (k + 1) as f64 / 50.0),
            PLOT_H / 50.0 + 0.5,
            color(t)
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="{:.3}" y="{:.3}">{vmax:.6}</text>"#,
        bx + 26.0,
        TOP + 10.0
    );
    let _ = writeln!(
        s,
        r#"<text x="{:.3}" y="{:.3}">{vmin:.6}</text>"#,
        bx + 26.0,
        TOP + PLOT_H
    );
    let _ = writeln!(
        s,
        r#"<text x="{:.3}" y="{:.3}">F = {}</text>"#,
        bx - 10.0,
        TOP + PLOT_H + 42.0,
        grid.threshold
    );
    s.push_str("</svg>\n");
    s
}

pub fn emit_heatmap_svg(grid: &FidelityGrid, path: &Path) -> Result<()> {
    fs::write(path, heatmap_svg(grid)).map_err(|e| io_err(path, e))
}
