//! Minimal self-contained SVG scatter plots.

use std::fmt::Write;

use num_complex::Complex64;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Frame {
    pub xmin: f64,
    pub xmax: f64,
    pub ymin: f64,
    pub ymax: f64,
}

impl Frame {
    /// Smallest frame containing `self` and every point, with a margin around any growth.
    pub fn enclosing<'a>(self, points: impl IntoIterator<Item = &'a Complex64>) -> Frame {
        let mut f = self;
        for z in points {
            f.xmin = f.xmin.min(z.re - 0.05);
            f.xmax = f.xmax.max(z.re + 0.05);
            f.ymin = f.ymin.min(z.im - 0.05);
            f.ymax = f.ymax.max(z.im + 0.05);
        }
        f
    }
}

pub struct Svg {
    frame: Frame,
    width: f64,
    height: f64,
    body: String,
}

const PAD: f64 = 30.0;

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

impl Svg {
    pub fn new(frame: Frame, width: f64) -> Self {
        let height = width * (frame.ymax - frame.ymin) / (frame.xmax - frame.xmin);
        Svg {
            frame,
            width,
            height,
            body: String::new(),
        }
    }

    fn map(&self, z: Complex64) -> (f64, f64) {
        let f = &self.frame;
        let x = PAD + (z.re - f.xmin) / (f.xmax - f.xmin) * self.width;
        let y = PAD + (f.ymax - z.im) / (f.ymax - f.ymin) * self.height;
        (x, y)
    }

    /// Both axes with ticks every 0.2 and labelled unit markers at 1 and i.
    pub fn axes(&mut self) {
        let f = self.frame;
        let (x0, y0) = self.map(Complex64::new(f.xmin, 0.0));
        let (x1, _) = self.map(Complex64::new(f.xmax, 0.0));
        let (ox, oy) = self.map(Complex64::new(0.0, f.ymax));
        let (_, oy1) = self.map(Complex64::new(0.0, f.ymin));
        let _ = writeln!(
            self.body,
            r##"<g stroke="#444" stroke-width="1"><line x1="{x0:.2}" y1="{y0:.2}" x2="{x1:.2}" y2="{y0:.2}"/><line x1="{ox:.2}" y1="{oy:.2}" x2="{ox:.2}" y2="{oy1:.2}"/></g>"##
        );
        let mut ticks = String::new();
        let lo = (f.xmin / 0.2).ceil() as i64;
        let hi = (f.xmax / 0.2).floor() as i64;
        for k in lo..=hi {
            let (x, y) = self.map(Complex64::new(k as f64 * 0.2, 0.0));
            let _ = write!(
                ticks,
                r#"<line x1="{x:.2}" y1="{:.2}" x2="{x:.2}" y2="{:.2}"/>"#,
                y - 3.0,
                y + 3.0
            );
        }
        let lo = (f.ymin / 0.2).ceil() as i64;
        let hi = (f.ymax / 0.2).floor() as i64;
        for k in lo..=hi {
            let (x, y) = self.map(Complex64::new(0.0, k as f64 * 0.2));
            let _ = write!(
                ticks,
                r#"<line x1="{:.2}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}"/>"#,
                x - 3.0,
                x + 3.0
            );
        }
        let _ = writeln!(
            self.body,
            r##"<g stroke="#444" stroke-width="1">{ticks}</g>"##
        );
        for (z, text) in [
            (Complex64::new(1.0, 0.0), "1"),
            (Complex64::new(0.0, 1.0), "i"),
        ] {
            self.marker(z, "#444", text);
        }
    }

    pub fn point(&mut self, z: Complex64, radius: f64, fill: &str, title: Option<&str>) {
        let (x, y) = self.map(z);
        match title {
            Some(t) => {
                let _ = writeln!(
                    self.body,
                    r#"<circle cx="{x:.3}" cy="{y:.3}" r="{radius}" fill="{fill}"><title>{}</title></circle>"#,
                    escape(t)
                );
            }
            None => {
                let _ = writeln!(
                    self.body,
                    r#"<circle cx="{x:.3}" cy="{y:.3}" r="{radius}" fill="{fill}"/>"#
                );
            }
        }
    }

    /// Small cross with a text label.
    pub fn marker(&mut self, z: Complex64, color: &str, text: &str) {
        let (x, y) = self.map(z);
        let _ = writeln!(
            self.body,
            r#"<g stroke="{color}" stroke-width="1.5"><line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}"/><line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}"/></g><text x="{:.2}" y="{:.2}" font-family="sans-serif" font-size="13" fill="{color}">{}</text>"#,
            x - 5.0,
            y - 5.0,
            x + 5.0,
            y + 5.0,
            x - 5.0,
            y + 5.0,
            x + 5.0,
            y - 5.0,
            x + 7.0,
            y - 7.0,
            escape(text)
        );
    }

    pub fn polyline(&mut self, points: &[Complex64], stroke: &str) {
        let mut coords = String::new();
        for &z in points {
            let (x, y) = self.map(z);
            let _ = write!(coords, "{x:.2},{y:.2} ");
        }
        let _ = writeln!(
            self.body,
            r#"<polyline points="{}" fill="none" stroke="{stroke}" stroke-width="1"/>"#,
            coords.trim_end()
        );
    }

    /// Complete document with a title and the generating parameters as metadata.
    pub fn finish(self, title: &str, metadata: &serde_json::Value) -> String {
        let w = self.width + 2.0 * PAD;
        let h = self.height + 2.0 * PAD;
        format!(
            "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n\
             <svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w:.0}\" height=\"{h:.0}\" viewBox=\"0 0 {w:.2} {h:.2}\">\n\
             <title>{}</title>\n<metadata>{}</metadata>\n\
             <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n{}</svg>\n",
            escape(title),
            escape(&metadata.to_string()),
            self.body
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn document_is_self_contained() {
        let frame = Frame {
            xmin: -1.0,
            xmax: 1.0,
            ymin: -1.0,
            ymax: 1.0,
        };
        let mut svg = Svg::new(frame, 200.0);
        svg.axes();
        svg.point(Complex64::new(0.5, 0.5), 2.0, "blue", Some("a<b"));
        let doc = svg.finish("t", &serde_json::json!({"a": "1+1i"}));
        assert!(doc.contains("<metadata>"));
        assert!(doc.contains("a&lt;b"));
        assert!(!doc.contains("href"));
    }

    #[test]
    fn frame_grows_to_fit() {
        let frame = Frame {
            xmin: 0.0,
            xmax: 1.0,
            ymin: 0.0,
            ymax: 1.0,
        };
        let grown = frame.enclosing(&[Complex64::new(2.0, -1.0)]);
        assert!(grown.xmax > 2.0 && grown.ymin < -1.0);
        assert_eq!(frame.enclosing(&[Complex64::new(0.5, 0.5)]), frame);
    }
}
