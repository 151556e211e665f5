//! Static SVG Gantt rendering: one row per job, a rectangle per
//! processing interval, a marker at each release date, and a time axis.

use std::fmt::Write as _;

use crate::instance::Instance;
use crate::schedule::Schedule;

const ROW_H: f64 = 26.0;
const BAR_H: f64 = 18.0;
const LEFT: f64 = 58.0;
const TOP: f64 = 34.0;
const PLOT_W: f64 = 640.0;

const PALETTE: [&str; 8] = [
    "#4e79a7", "#f28e2b", "#59a14f", "#e15759", "#76b7b2", "#edc948", "#b07aa1", "#9c755f",
];

fn fnum(x: f64) -> String {
    let s = format!("{x:.3}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s.is_empty() {
        "0".into()
    } else {
        s.to_string()
    }
}

/// Renders the schedule as a standalone SVG document.
pub fn gantt_svg(inst: &Instance, sched: &Schedule, title: &str) -> String {
    let n = inst.n();
    let horizon = sched
        .makespan()
        .max((0..n).map(|j| inst.r(j)).fold(0.0, f64::max))
        .max(1.0);
    let scale = PLOT_W / horizon;
    let width = LEFT + PLOT_W + 24.0;
    let height = TOP + ROW_H * n as f64 + 40.0;
    let x = |t: f64| LEFT + t * scale;

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}" font-family="monospace" font-size="11">"#,
        w = fnum(width),
        h = fnum(height)
    );
    let _ = writeln!(
        s,
        r#"<text x="{}" y="16" font-size="13">{}</text>"#,
        fnum(LEFT),
        title
    );

    // Time axis with up to ~12 integer-ish ticks.
    let axis_y = TOP + ROW_H * n as f64 + 8.0;
    let step = {
        let raw = horizon / 12.0;
        let mag = 10f64.powf(raw.log10().floor());
        [1.0, 2.0, 5.0, 10.0]
            .iter()
            .map(|m| m * mag)
            .find(|&s| s >= raw)
            .unwrap_or(mag * 10.0)
    };
    let _ = writeln!(
        s,
        r##"<line x1="{}" y1="{}" x2="{}" y2="{}" stroke="#333"/>"##,
        fnum(x(0.0)),
        fnum(axis_y),
        fnum(x(horizon)),
        fnum(axis_y)
    );
    let mut t = 0.0;
    while t <= horizon + 1e-9 {
        let _ = writeln!(
            s,
            r##"<line x1="{px}" y1="{}" x2="{px}" y2="{}" stroke="#333"/><text x="{px}" y="{}" text-anchor="middle">{}</text>"##,
            fnum(axis_y - 3.0),
            fnum(axis_y + 3.0),
            fnum(axis_y + 16.0),
            fnum(t),
            px = fnum(x(t))
        );
        t += step;
    }

    for j in 0..n {
        let y = TOP + ROW_H * j as f64;
        let color = PALETTE[j % PALETTE.len()];
        let _ = writeln!(
            s,
            r#"<text x="8" y="{}">j{}</text>"#,
            fnum(y + BAR_H - 4.0),
            j
        );
        // Release date tick.
        let rx = x(inst.r(j));
        let _ = writeln!(
            s,
            r##"<path d="M {} {} l 4 8 l -8 0 z" fill="#c00"/>"##,
            fnum(rx),
            fnum(y - 4.0)
        );
        for iv in &sched.segments[j] {
            if iv.is_empty() {
                // Zero-length event: a thin marker at the instant.
                let _ = writeln!(
                    s,
                    r#"<rect x="{}" y="{}" width="2" height="{}" fill="{}"/>"#,
                    fnum(x(iv.start) - 1.0),
                    fnum(y),
                    fnum(BAR_H),
                    color
                );
            } else {
                let _ = writeln!(
                    s,
                    r##"<rect x="{}" y="{}" width="{}" height="{}" fill="{}" stroke="#222" stroke-width="0.5"/>"##,
                    fnum(x(iv.start)),
                    fnum(y),
                    fnum((iv.end - iv.start) * scale),
                    fnum(BAR_H),
                    color
                );
            }
        }
    }
    s.push_str("</svg>\n");
    s
}
