//! Minimal SVG line plots: polylines plus axes in a fixed 800x600
//! viewbox. Figures exist for humans diffing trends; they are textual
//! and deterministic so golden comparison can treat them as bytes.

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 600.0;
const MARGIN: f64 = 70.0;
const PALETTE: [&str; 4] = ["#c0392b", "#2980b9", "#27ae60", "#8e44ad"];

/// One plotted series.
pub struct PlotSeries<'a> {
    pub label: &'a str,
    pub x: &'a [f64],
    pub y: &'a [f64],
}

fn span(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for v in values {
        lo = lo.min(v);
        hi = hi.max(v);
    }
    if !lo.is_finite() || !hi.is_finite() {
        return (0.0, 1.0);
    }
    if (hi - lo).abs() < 1e-12 {
        (lo - 0.5, hi + 0.5)
    } else {
        (lo, hi)
    }
}

fn coord(v: f64) -> String {
    format!("{v:.2}")
}

/// Render a line plot of the given series.
pub fn line_plot(title: &str, x_label: &str, y_label: &str, series: &[PlotSeries<'_>]) -> String {
    let (x_lo, x_hi) = span(series.iter().flat_map(|s| s.x.iter().copied()));
    let (y_lo, y_hi) = span(series.iter().flat_map(|s| s.y.iter().copied()));
    let plot_w = WIDTH - 2.0 * MARGIN;
    let plot_h = HEIGHT - 2.0 * MARGIN;
    let to_px = |x: f64, y: f64| -> (f64, f64) {
        (
            MARGIN + (x - x_lo) / (x_hi - x_lo) * plot_w,
            HEIGHT - MARGIN - (y - y_lo) / (y_hi - y_lo) * plot_h,
        )
    };

    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 {WIDTH} {HEIGHT}\">\n"
    ));
    svg.push_str("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");
    svg.push_str(&format!(
        "<text x=\"{}\" y=\"30\" text-anchor=\"middle\" font-size=\"18\">{}</text>\n",
        WIDTH / 2.0,
        title
    ));

    // Axes.
    svg.push_str(&format!(
        "<line x1=\"{m}\" y1=\"{b}\" x2=\"{r}\" y2=\"{b}\" stroke=\"black\"/>\n",
        m = MARGIN,
        b = HEIGHT - MARGIN,
        r = WIDTH - MARGIN
    ));
    svg.push_str(&format!(
        "<line x1=\"{m}\" y1=\"{t}\" x2=\"{m}\" y2=\"{b}\" stroke=\"black\"/>\n",
        m = MARGIN,
        t = MARGIN,
        b = HEIGHT - MARGIN
    ));

    // Range labels.
    svg.push_str(&format!(
        "<text x=\"{}\" y=\"{}\" font-size=\"12\" text-anchor=\"middle\">{}</text>\n",
        MARGIN,
        HEIGHT - MARGIN + 20.0,
        super::export::fmt_g9(x_lo)
    ));
    svg.push_str(&format!(
        "<text x=\"{}\" y=\"{}\" font-size=\"12\" text-anchor=\"middle\">{}</text>\n",
        WIDTH - MARGIN,
        HEIGHT - MARGIN + 20.0,
        super::export::fmt_g9(x_hi)
    ));
    svg.push_str(&format!(
        "<text x=\"{}\" y=\"{}\" font-size=\"12\" text-anchor=\"end\">{}</text>\n",
        MARGIN - 8.0,
        HEIGHT - MARGIN,
        super::export::fmt_g9(y_lo)
    ));
    svg.push_str(&format!(
        "<text x=\"{}\" y=\"{}\" font-size=\"12\" text-anchor=\"end\">{}</text>\n",
        MARGIN - 8.0,
        MARGIN + 4.0,
        super::export::fmt_g9(y_hi)
    ));

    // Axis labels.
    svg.push_str(&format!(
        "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\" font-size=\"14\">{}</text>\n",
        WIDTH / 2.0,
        HEIGHT - 20.0,
        x_label
    ));
    svg.push_str(&format!(
        "<text x=\"20\" y=\"{}\" text-anchor=\"middle\" font-size=\"14\" transform=\"rotate(-90 20 {})\">{}</text>\n",
        HEIGHT / 2.0,
        HEIGHT / 2.0,
        y_label
    ));

    for (i, s) in series.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let points: Vec<String> = s
            .x
            .iter()
            .zip(s.y.iter())
            .map(|(&x, &y)| {
                let (px, py) = to_px(x, y);
                format!("{},{}", coord(px), coord(py))
            })
            .collect();
        svg.push_str(&format!(
            "<polyline fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\" points=\"{}\"/>\n",
            points.join(" ")
        ));
        svg.push_str(&format!(
            "<text x=\"{}\" y=\"{}\" font-size=\"12\" fill=\"{color}\">{}</text>\n",
            WIDTH - MARGIN + 6.0,
            MARGIN + 16.0 * i as f64,
            s.label
        ));
    }
    svg.push_str("</svg>\n");
    svg
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plot_has_fixed_viewbox_and_polyline() {
        let x = [0.0, 1.0, 2.0];
        let y = [0.0, 0.5, 0.2];
        let svg = line_plot(
            "demo",
            "t [s]",
            "x [m]",
            &[PlotSeries {
                label: "x",
                x: &x,
                y: &y,
            }],
        );
        assert!(svg.contains("viewBox=\"0 0 800 600\""));
        assert!(svg.contains("<polyline"));
        assert!(svg.ends_with("</svg>\n"));
    }

    #[test]
    fn plot_is_deterministic() {
        let x = [0.0, 1.0];
        let y = [0.3, 0.7];
        let make = || {
            line_plot(
                "d",
                "t",
                "v",
                &[PlotSeries {
                    label: "v",
                    x: &x,
                    y: &y,
                }],
            )
        };
        assert_eq!(make(), make());
    }

    #[test]
    fn constant_series_does_not_divide_by_zero() {
        let x = [0.0, 1.0];
        let y = [2.0, 2.0];
        let svg = line_plot(
            "flat",
            "t",
            "y",
            &[PlotSeries {
                label: "y",
                x: &x,
                y: &y,
            }],
        );
        assert!(!svg.contains("NaN") && !svg.contains("inf"));
    }
}
