//! SVG line charts of sweep rows: one lower (blue) and one upper (red)
//! series per green line, plus a dashed break-even diagonal for the ratio
//! figures.

use plotters::prelude::*;

use crate::error::{Error, Result};
use crate::scalar::rational_to_f64;

use super::sweep::{Figure, RowStatus, SweepRow};

const SHADES: [f64; 5] = [1.0, 0.8, 0.6, 0.45, 0.3];

fn x_of(figure: Figure, row: &SweepRow) -> f64 {
    match figure {
        Figure::Fig1 | Figure::Fig2 => rational_to_f64(&row.ur_exo),
        Figure::Fig3 => row.k as f64,
        Figure::Fig4 => rational_to_f64(&row.rho),
    }
}

/// Renders `rows` (all from one figure) as an SVG document.
pub fn render_svg(figure: Figure, rows: &[SweepRow]) -> Result<String> {
    let mut svg = String::new();
    draw(figure, rows, &mut svg).map_err(|e| Error::Input(format!("plotting {figure}: {e}")))?;
    Ok(svg)
}

fn draw(figure: Figure, rows: &[SweepRow], svg: &mut String) -> std::result::Result<(), Box<dyn std::error::Error>> {
    let ok: Vec<&SweepRow> = rows.iter().filter(|r| r.status == RowStatus::Ok).collect();
    let xs = ok.iter().map(|r| x_of(figure, r));
    let (x0, x1) = xs.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), x| (a.min(x), b.max(x)));
    let ys = ok.iter().flat_map(|r| {
        let (lo, hi) = r.metric.expect("ok rows carry a metric");
        [lo, hi]
    });
    let (mut y0, mut y1) = ys.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), y| (a.min(y), b.max(y)));
    if figure.is_ratio() {
        y0 = y0.min(x0);
        y1 = y1.max(x1);
    }
    if !x0.is_finite() {
        return Err("no applicable rows to plot".into());
    }
    let pad = |a: f64, b: f64| if b > a { (b - a) * 0.05 } else { 0.5 };
    let (px, py) = (pad(x0, x1), pad(y0, y1));

    let root = SVGBackend::with_string(svg, (800, 600)).into_drawing_area();
    root.fill(&WHITE)?;
    let (x_label, y_label) = match figure {
        Figure::Fig1 | Figure::Fig2 => ("UR(∅)", "UR(E)"),
        Figure::Fig3 => ("k", "mean utility − mean exogenous utility"),
        Figure::Fig4 => ("ρ", "mean utility − mean exogenous utility"),
    };
    let mut chart = ChartBuilder::on(&root)
        .caption(figure.id(), ("sans-serif", 24))
        .margin(20)
        .x_label_area_size(40)
        .y_label_area_size(60)
        .build_cartesian_2d(x0 - px..x1 + px, y0 - py..y1 + py)?;
    chart.configure_mesh().x_desc(x_label).y_desc(y_label).draw()?;

    if figure.is_ratio() {
        chart.draw_series(DashedLineSeries::new([(x0, x0), (x1, x1)], 6, 4, BLACK.stroke_width(1)))?;
    }
    let mut lines: Vec<_> = ok.iter().map(|r| r.g0.clone()).collect();
    lines.dedup();
    for (idx, g0) in lines.iter().enumerate() {
        let shade = SHADES[idx % SHADES.len()];
        let series: Vec<&&SweepRow> = ok.iter().filter(|r| r.g0 == *g0).collect();
        let lower = RGBColor(0, 0, (255.0 * shade) as u8);
        let upper = RGBColor((255.0 * shade) as u8, 0, 0);
        for (color, pick) in [(lower, 0usize), (upper, 1)] {
            let pts = series.iter().map(|r| {
                let (lo, hi) = r.metric.expect("ok rows carry a metric");
                (x_of(figure, r), if pick == 0 { lo } else { hi })
            });
            chart
                .draw_series(LineSeries::new(pts, color.stroke_width(2)))?
                .label(format!("g0 = {}", crate::scalar::format_rational(g0)))
                .legend(move |(x, y)| PathElement::new([(x, y), (x + 20, y)], color));
        }
    }
    chart.configure_series_labels().border_style(BLACK).background_style(WHITE).draw()?;
    root.present()?;
    Ok(())
}
