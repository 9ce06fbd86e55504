//! SVG rendering of approximate diagrams.

use ripsparse::diagram::{ApproxDiagram, EntryClass};
use ripsparse::sparsify::PrecisionProfile;
use xmlwriter::{Options, XmlWriter};

const SIZE: f64 = 640.0;
const MARGIN: f64 = 60.0;
const CURVE_SAMPLES: usize = 256;

pub struct PlotOptions {
    pub log: bool,
    /// Lower end of both axes; nothing smaller is drawn.
    pub clip: Option<f64>,
    /// Second profile whose `psi` is drawn for comparison.
    pub overlay: Option<PrecisionProfile>,
}

struct Axes {
    lo: f64,
    hi: f64,
    log: bool,
}

impl Axes {
    fn fit(approx: &ApproxDiagram, opts: &PlotOptions) -> Axes {
        let values: Vec<f64> = approx
            .entries
            .iter()
            .flat_map(|e| e.rect)
            .filter(|x| x.is_finite())
            .collect();
        let max = values.iter().cloned().fold(0.0, f64::max);
        let lo = match (opts.clip, opts.log) {
            (Some(c), _) => c,
            (None, false) => 0.0,
            (None, true) => {
                let min_pos = values.iter().cloned().filter(|&x| x > 0.0).fold(f64::INFINITY, f64::min);
                if min_pos.is_finite() {
                    min_pos / 2.0
                } else {
                    1e-3
                }
            }
        };
        let mut hi = if max > 0.0 { max * 1.05 } else { 1.0 };
        if hi <= lo {
            hi = if opts.log { lo * 10.0 } else { lo + 1.0 };
        }
        Axes { lo, hi, log: opts.log }
    }

    fn unit(&self, v: f64) -> f64 {
        let v = v.clamp(self.lo, self.hi);
        if self.log {
            (v.ln() - self.lo.ln()) / (self.hi.ln() - self.lo.ln())
        } else {
            (v - self.lo) / (self.hi - self.lo)
        }
    }

    fn x(&self, v: f64) -> f64 {
        MARGIN + self.unit(v) * (SIZE - 2.0 * MARGIN)
    }

    fn y(&self, v: f64) -> f64 {
        SIZE - MARGIN - self.unit(v) * (SIZE - 2.0 * MARGIN)
    }

    fn samples(&self) -> impl Iterator<Item = f64> + '_ {
        (0..=CURVE_SAMPLES).map(move |k| {
            let f = k as f64 / CURVE_SAMPLES as f64;
            if self.log {
                (self.lo.ln() + f * (self.hi.ln() - self.lo.ln())).exp()
            } else {
                self.lo + f * (self.hi - self.lo)
            }
        })
    }
}

/// Class, function and stroke colour of a drawn curve.
type Curve<'a> = (&'a str, Box<dyn Fn(f64) -> f64>, &'a str);

fn fmt(v: f64) -> String {
    format!("{:.2}", v)
}

fn polyline(w: &mut XmlWriter, axes: &Axes, f: impl Fn(f64) -> f64, color: &str, width: &str) {
    let points: Vec<String> = axes
        .samples()
        .map(|x| format!("{},{}", fmt(axes.x(x)), fmt(axes.y(f(x)))))
        .collect();
    w.start_element("polyline");
    w.write_attribute("points", &points.join(" "));
    w.write_attribute("fill", "none");
    w.write_attribute("stroke", color);
    w.write_attribute("stroke-width", width);
    w.end_element();
}

fn text(w: &mut XmlWriter, x: f64, y: f64, anchor: &str, body: &str) {
    w.start_element("text");
    w.write_attribute("x", &fmt(x));
    w.write_attribute("y", &fmt(y));
    w.write_attribute("text-anchor", anchor);
    w.write_attribute("font-size", "11");
    w.write_attribute("font-family", "sans-serif");
    w.write_text(body);
    w.end_element();
}

pub fn render(approx: &ApproxDiagram, opts: &PlotOptions) -> String {
    let axes = Axes::fit(approx, opts);
    let mut w = XmlWriter::new(Options::default());
    w.start_element("svg");
    w.write_attribute("xmlns", "http://www.w3.org/2000/svg");
    w.write_attribute("width", &SIZE);
    w.write_attribute("height", &SIZE);
    w.write_attribute("viewBox", &format!("0 0 {SIZE} {SIZE}"));

    w.start_element("rect");
    w.write_attribute("class", "frame");
    w.write_attribute("x", &MARGIN);
    w.write_attribute("y", &MARGIN);
    w.write_attribute("width", &(SIZE - 2.0 * MARGIN));
    w.write_attribute("height", &(SIZE - 2.0 * MARGIN));
    w.write_attribute("fill", "white");
    w.write_attribute("stroke", "#444");
    w.end_element();

    for (x, anchor) in [(axes.lo, "start"), (axes.hi, "end")] {
        text(&mut w, axes.x(x), SIZE - MARGIN + 16.0, anchor, &format!("{x:.3e}"));
    }
    text(&mut w, MARGIN - 4.0, axes.y(axes.hi) + 4.0, "end", &format!("{:.3e}", axes.hi));
    text(&mut w, SIZE / 2.0, SIZE - 20.0, "middle", if axes.log { "birth (log)" } else { "birth" });
    text(&mut w, 20.0, SIZE / 2.0, "middle", "death");

    let profile = approx.profile;
    let mut curves: Vec<Curve> = vec![
        ("diagonal", Box::new(|x| x), "black"),
        ("psi", Box::new(move |x| profile.psi(x)), "#d62728"),
    ];
    if let Some(over) = opts.overlay {
        curves.push(("psi-overlay", Box::new(move |x| over.psi(x)), "#2ca02c"));
    }
    for (class, f, color) in curves {
        w.start_element("g");
        w.write_attribute("class", class);
        polyline(&mut w, &axes, f, color, "1.5");
        w.end_element();
    }

    w.start_element("g");
    w.write_attribute("class", "entries");
    for e in &approx.entries {
        let [b_lo, b_hi, d_lo, d_hi] = e.rect;
        let (fill, stroke) = match e.class {
            EntryClass::Definite => ("#1f77b4", "#1f77b4"),
            EntryClass::Possible => ("#bbbbbb", "#888888"),
        };
        let (x0, x1) = (axes.x(b_lo), axes.x(b_hi));
        let (y0, y1) = (axes.y(d_hi), axes.y(d_lo));
        if x1 > x0 || y1 > y0 {
            w.start_element("rect");
            w.write_attribute("class", if e.class == EntryClass::Definite { "definite" } else { "possible" });
            w.write_attribute("x", &fmt(x0));
            w.write_attribute("y", &fmt(y0));
            w.write_attribute("width", &fmt(x1 - x0));
            w.write_attribute("height", &fmt(y1 - y0));
            w.write_attribute("fill", fill);
            w.write_attribute("fill-opacity", "0.3");
            w.write_attribute("stroke", stroke);
            if e.unbounded {
                w.write_attribute("stroke-dasharray", "3,2");
            }
            w.end_element();
        }
        w.start_element("circle");
        w.write_attribute("cx", &fmt(x1));
        w.write_attribute("cy", &fmt(axes.y(d_hi)));
        w.write_attribute("r", "2.5");
        w.write_attribute("fill", stroke);
        w.write_attribute("data-dim", &e.dim);
        w.end_element();
    }
    w.end_element();
    w.end_document()
}
