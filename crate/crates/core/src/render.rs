//! Dumb SVG rendering of polylines: one path per polyline, one stroke
//! color per layer, y axis flipped to mathematical orientation.

/// A layer of polylines sharing a stroke color.
pub struct SvgLayer<'a> {
    pub polylines: &'a [Vec<[f64; 2]>],
    pub color: &'a str,
    pub width: f64,
}

/// Render layers into a standalone SVG document. The viewport is the given
/// rectangle; `size` is the pixel width of the longer side.
pub fn render_svg(
    x_min: f64,
    x_max: f64,
    y_min: f64,
    y_max: f64,
    size: f64,
    layers: &[SvgLayer<'_>],
) -> String {
    let w = x_max - x_min;
    let h = y_max - y_min;
    let scale = size / w.max(h);
    let (pw, ph) = (w * scale, h * scale);
    let tx = |x: f64| (x - x_min) * scale;
    let ty = |y: f64| (y_max - y) * scale;

    let mut out = String::new();
    out.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{pw}\" height=\"{ph}\" viewBox=\"0 0 {pw} {ph}\">\n"
    ));
    out.push_str("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");
    for layer in layers {
        for poly in layer.polylines {
            if poly.is_empty() {
                continue;
            }
            let mut d = String::new();
            for (i, p) in poly.iter().enumerate() {
                let cmd = if i == 0 { 'M' } else { 'L' };
                d.push_str(&format!("{cmd}{} {} ", tx(p[0]), ty(p[1])));
            }
            out.push_str(&format!(
                "<path d=\"{}\" fill=\"none\" stroke=\"{}\" stroke-width=\"{}\"/>\n",
                d.trim_end(),
                layer.color,
                layer.width
            ));
        }
    }
    out.push_str("</svg>\n");
    out
}

/// Stroke color for the k-th epsilon level.
pub fn level_color(k: usize) -> &'static str {
    const COLORS: [&str; 8] = [
        "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f",
    ];
    COLORS[k % COLORS.len()]
}
