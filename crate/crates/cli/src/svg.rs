//! Deterministic SVG emission. Fixed canvas, fixed data range, fixed
//! colors, fixed decimal formatting: the same figure spec always yields
//! the same bytes, so renders can be golden-tested with a plain byte
//! comparison.
//!
//! Every figure has two panels over the same data: the transformed frame
//! the charts are computed in, and the nominal per-phase frame.

use std::fmt::Write as _;

/// Half-width of the data window in pu; everything is drawn inside
/// [-EXTENT, EXTENT] on both axes of both panels.
const EXTENT: f64 = 1.25;

const PLOT: f64 = 400.0;
const MARGIN_LEFT: f64 = 56.0;
const MARGIN_RIGHT: f64 = 16.0;
const MARGIN_TOP: f64 = 40.0;
const MARGIN_BOTTOM: f64 = 48.0;
const PANEL_W: f64 = MARGIN_LEFT + PLOT + MARGIN_RIGHT;
const PANEL_H: f64 = MARGIN_TOP + PLOT + MARGIN_BOTTOM;

/// One curve, as polyline segments per panel (segments allow gaps where a
/// cut misses the chart).
pub struct Curve {
    pub name: String,
    pub color: &'static str,
    /// None renders solid; Some(pattern) renders dashed.
    pub dash: Option<&'static str>,
    pub width: f64,
    /// `[panel][segment][point]` in data coordinates.
    pub per_panel: [Vec<Vec<(f64, f64)>>; 2],
}

/// Filled cells of a rasterized slice, as cell centers per panel.
pub struct MaskLayer {
    /// Cell edge length in data units.
    pub cell: f64,
    pub per_panel: [Vec<(f64, f64)>; 2],
}

/// A complete two-panel figure.
pub struct FigureSpec {
    /// Compact JSON of the run configuration; embedded in `<desc>`.
    pub config_json: String,
    pub titles: [String; 2],
    /// `[panel][axis]`, axis 0 = x.
    pub axis_labels: [[String; 2]; 2],
    pub mask: Option<MaskLayer>,
    /// Drawn in order; put reference curves before the main one.
    pub curves: Vec<Curve>,
}

fn px(v: f64) -> String {
    format!("{v:.3}")
}

fn map_x(panel: usize, v: f64) -> f64 {
    panel as f64 * PANEL_W + MARGIN_LEFT + (v + EXTENT) / (2.0 * EXTENT) * PLOT
}

fn map_y(v: f64) -> f64 {
    MARGIN_TOP + (EXTENT - v) / (2.0 * EXTENT) * PLOT
}

fn esc(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Renders the figure to a standalone SVG document.
pub fn render(spec: &FigureSpec) -> String {
    let mut s = String::new();
    let w = 2.0 * PANEL_W;
    let h = PANEL_H;
    let _ = write!(
        s,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" \
         viewBox=\"0 0 {w} {h}\" font-family=\"DejaVu Sans Mono, monospace\">\n"
    );
    let _ = write!(s, "<desc>{}</desc>\n", esc(&spec.config_json));
    let _ = write!(s, "<rect width=\"{w}\" height=\"{h}\" fill=\"#ffffff\"/>\n");

    for panel in 0..2 {
        let left = px(map_x(panel, -EXTENT));
        let top = px(MARGIN_TOP);
        let _ = write!(s, "<clipPath id=\"plot{panel}\"><rect x=\"{left}\" y=\"{top}\" width=\"{PLOT}\" height=\"{PLOT}\"/></clipPath>\n");
    }

    for panel in 0..2 {
        let _ = write!(s, "<g>\n");
        // Frame and zero axes.
        let left = map_x(panel, -EXTENT);
        let _ = write!(
            s,
            "<rect x=\"{}\" y=\"{}\" width=\"{PLOT}\" height=\"{PLOT}\" fill=\"none\" stroke=\"#333333\" stroke-width=\"1\"/>\n",
            px(left),
            px(MARGIN_TOP)
        );
        let _ = write!(
            s,
            "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"#bbbbbb\" stroke-width=\"0.5\"/>\n",
            px(map_x(panel, -EXTENT)),
            px(map_y(0.0)),
            px(map_x(panel, EXTENT)),
            px(map_y(0.0))
        );
        let _ = write!(
            s,
            "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"#bbbbbb\" stroke-width=\"0.5\"/>\n",
            px(map_x(panel, 0.0)),
            px(map_y(-EXTENT)),
            px(map_x(panel, 0.0)),
            px(map_y(EXTENT))
        );
        // Ticks and tick labels in pu.
        for tick in [-1.0f64, -0.5, 0.0, 0.5, 1.0] {
            let tx = map_x(panel, tick);
            let ty = map_y(tick);
            let bottom = MARGIN_TOP + PLOT;
            let _ = write!(
                s,
                "<line x1=\"{0}\" y1=\"{1}\" x2=\"{0}\" y2=\"{2}\" stroke=\"#333333\" stroke-width=\"1\"/>\n",
                px(tx),
                px(bottom),
                px(bottom + 4.0)
            );
            let _ = write!(
                s,
                "<text x=\"{}\" y=\"{}\" font-size=\"11\" text-anchor=\"middle\">{tick:.1}</text>\n",
                px(tx),
                px(bottom + 16.0)
            );
            let _ = write!(
                s,
                "<line x1=\"{0}\" y1=\"{2}\" x2=\"{1}\" y2=\"{2}\" stroke=\"#333333\" stroke-width=\"1\"/>\n",
                px(left - 4.0),
                px(left),
                px(ty)
            );
            let _ = write!(
                s,
                "<text x=\"{}\" y=\"{}\" font-size=\"11\" text-anchor=\"end\">{tick:.1}</text>\n",
                px(left - 7.0),
                px(ty + 4.0)
            );
        }
        // Title and axis labels.
        let cx = map_x(panel, 0.0);
        let _ = write!(
            s,
            "<text x=\"{}\" y=\"24\" font-size=\"13\" text-anchor=\"middle\">{}</text>\n",
            px(cx),
            esc(&spec.titles[panel])
        );
        let _ = write!(
            s,
            "<text x=\"{}\" y=\"{}\" font-size=\"12\" text-anchor=\"middle\">{}</text>\n",
            px(cx),
            px(MARGIN_TOP + PLOT + 38.0),
            esc(&spec.axis_labels[panel][0])
        );
        let _ = write!(
            s,
            "<text x=\"{}\" y=\"{}\" font-size=\"12\" text-anchor=\"middle\" transform=\"rotate(-90 {} {})\">{}</text>\n",
            px(left - 40.0),
            px(map_y(0.0)),
            px(left - 40.0),
            px(map_y(0.0)),
            esc(&spec.axis_labels[panel][1])
        );

        let _ = write!(s, "<g clip-path=\"url(#plot{panel})\">\n");
        if let Some(mask) = &spec.mask {
            let cell_px = mask.cell / (2.0 * EXTENT) * PLOT;
            let half = cell_px / 2.0;
            for &(x, y) in &mask.per_panel[panel] {
                let _ = write!(
                    s,
                    "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"#2ca02c\" fill-opacity=\"0.5\"/>\n",
                    px(map_x(panel, x) - half),
                    px(map_y(y) - half),
                    px(cell_px),
                    px(cell_px)
                );
            }
        }
        for curve in &spec.curves {
            for segment in &curve.per_panel[panel] {
                if segment.is_empty() {
                    continue;
                }
                let points: Vec<String> = segment
                    .iter()
                    .map(|&(x, y)| format!("{},{}", px(map_x(panel, x)), px(map_y(y))))
                    .collect();
                let dash = curve
                    .dash
                    .map(|d| format!(" stroke-dasharray=\"{d}\""))
                    .unwrap_or_default();
                let _ = write!(
                    s,
                    "<polyline fill=\"none\" stroke=\"{}\" stroke-width=\"{}\"{} points=\"{}\"><title>{}</title></polyline>\n",
                    curve.color,
                    curve.width,
                    dash,
                    points.join(" "),
                    esc(&curve.name)
                );
            }
        }
        let _ = write!(s, "</g>\n</g>\n");
    }
    s.push_str("</svg>\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn demo() -> FigureSpec {
        FigureSpec {
            config_json: "{\"command\":\"boundary\"}".into(),
            titles: ["demo transformed".into(), "demo nominal".into()],
            axis_labels: [
                ["phat1 (pu)".into(), "phat2 (pu)".into()],
                ["p1 (pu)".into(), "p2 (pu)".into()],
            ],
            mask: None,
            curves: vec![Curve {
                name: "demo".into(),
                color: "#d62728",
                dash: None,
                width: 1.5,
                per_panel: [
                    vec![vec![(0.0, 0.0), (0.5, 0.25)]],
                    vec![vec![(0.1, 0.0), (0.4, 0.3)]],
                ],
            }],
        }
    }

    #[test]
    fn identical_specs_render_identical_bytes() {
        assert_eq!(render(&demo()), render(&demo()));
    }

    #[test]
    fn markup_escapes_config_text() {
        let mut spec = demo();
        spec.config_json = "{\"name\":\"a<b&c\"}".into();
        let svg = render(&spec);
        assert!(svg.contains("a&lt;b&amp;c"));
        assert!(!svg.contains("a<b&c"));
    }

    #[test]
    fn gaps_become_separate_polylines() {
        let mut spec = demo();
        spec.curves[0].per_panel[0] = vec![vec![(0.0, 0.0), (0.1, 0.1)], vec![(0.3, 0.3), (0.4, 0.4)]];
        let svg = render(&spec);
        assert_eq!(svg.matches("<polyline").count(), 3);
    }
}
