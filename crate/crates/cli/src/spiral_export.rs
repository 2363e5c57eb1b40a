//! CSV and SVG export for spirals of Theodorus.

use std::fmt::Write as _;
use std::io::Write;

use fmd_core::{theodorus_2d, theodorus_3d, theodorus_nd, SpiralPath, Steering};

use crate::{io, CliError, SpiralArgs, SteeringRule};

/// In-plane axes of the orthographic view used for 3D spirals: the x axis,
/// and the yz direction 60 degrees above the y axis.
pub const VIEW_3D: [[f64; 3]; 2] = [[1.0, 0.0, 0.0], [0.0, 0.5, 0.866_025_403_784_438_6]];

pub fn build(args: &SpiralArgs) -> Result<SpiralPath, CliError> {
    if args.dims < 2 {
        return Err(CliError::Usage(format!("--dims must be at least 2, got {}", args.dims)));
    }
    if args.steps == 0 {
        return Err(CliError::Usage("--steps must be at least 1".into()));
    }
    let path = match args.dims {
        2 => theodorus_2d(args.steps)?,
        3 => theodorus_3d(args.steps, args.tilt.to_radians(), args.tilt_step)?,
        d => {
            let rule = match args.steering {
                SteeringRule::Previous => Steering::PreviousStep,
                SteeringRule::Random => Steering::Random { seed: args.seed },
            };
            theodorus_nd(args.steps, d, &rule)?
        }
    };
    Ok(path)
}

pub fn run(args: &SpiralArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    if args.svg.is_none() && args.csv.is_none() {
        return Err(CliError::Usage("nothing to write: pass --svg and/or --csv".into()));
    }
    let path = build(args)?;
    for w in &path.warnings {
        eprintln!("warning: {w}");
    }
    if let Some(p) = &args.csv {
        io::write_file(p, to_csv(&path))?;
    }
    if let Some(p) = &args.svg {
        io::write_file(p, to_svg(&path))?;
    }
    let norms = path.norms();
    writeln!(stdout, "{} steps in {}D, |T_L| = {:?}", path.len(), path.dim, norms[path.len()])
        .map_err(|e| CliError::io(std::path::Path::new("<stdout>"), e))
}

/// Columns `l, t1..td, [phi,] norm` for `l = 0..=L`; `phi` only for planar spirals.
pub fn to_csv(path: &SpiralPath) -> String {
    let planar = !path.angles.is_empty();
    let mut out = String::from("l");
    for k in 1..=path.dim {
        write!(out, ",t{k}").unwrap();
    }
    if planar {
        out.push_str(",phi");
    }
    out.push_str(",norm\n");
    for (l, (v, n)) in path.vertices.iter().zip(path.norms()).enumerate() {
        write!(out, "{l}").unwrap();
        for c in v {
            write!(out, ",{c:?}").unwrap();
        }
        if planar {
            match l {
                0 => out.push(','),
                _ => write!(out, ",{:?}", path.angles[l - 1]).unwrap(),
            }
        }
        writeln!(out, ",{n:?}").unwrap();
    }
    out
}

fn project(path: &SpiralPath) -> (Vec<(f64, f64)>, String) {
    match path.dim {
        3 => {
            let [u, v] = VIEW_3D;
            let dot = |a: &[f64], b: &[f64; 3]| a.iter().zip(b).map(|(p, q)| p * q).sum::<f64>();
            let pts = path.vertices.iter().map(|t| (dot(t, &u), dot(t, &v))).collect();
            (pts, format!("orthographic; u = {u:?}; v = {v:?}"))
        }
        d => {
            let pts = path.vertices.iter().map(|t| (t[0], t[1])).collect();
            let note = if d == 2 {
                "plane".to_string()
            } else {
                "orthographic; u = e1; v = e2".to_string()
            };
            (pts, note)
        }
    }
}

/// Polyline of the vertices, y axis pointing up.
pub fn to_svg(path: &SpiralPath) -> String {
    let (pts, projection) = project(path);
    let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for &(x, y) in &pts {
        x0 = x0.min(x);
        x1 = x1.max(x);
        y0 = y0.min(-y);
        y1 = y1.max(-y);
    }
    let margin = 0.05 * (x1 - x0).max(y1 - y0).max(1.0);
    let (w, h) = (x1 - x0 + 2.0 * margin, y1 - y0 + 2.0 * margin);
    let stroke = 0.004 * w.max(h);

    let mut out = String::new();
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" viewBox=\"{:.6} {:.6} {:.6} {:.6}\" width=\"800\" height=\"{:.0}\">",
        x0 - margin,
        y0 - margin,
        w,
        h,
        800.0 * h / w
    )
    .unwrap();
    writeln!(
        out,
        "<metadata>spiral of Theodorus; dims = {}; steps = {}; projection = {projection}</metadata>",
        path.dim,
        path.len()
    )
    .unwrap();
    write!(
        out,
        "<polyline fill=\"none\" stroke=\"black\" stroke-width=\"{stroke:.6}\" stroke-linejoin=\"round\" points=\""
    )
    .unwrap();
    for (i, &(x, y)) in pts.iter().enumerate() {
        if i > 0 {
            out.push(' ');
        }
        write!(out, "{x:.6},{:.6}", -y).unwrap();
    }
    out.push_str("\"/>\n</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn view_axes_are_orthonormal() {
        let [u, v] = VIEW_3D;
        let d = |a: &[f64; 3], b: &[f64; 3]| a.iter().zip(b).map(|(p, q)| p * q).sum::<f64>();
        assert!((d(&u, &u) - 1.0).abs() < 1e-15);
        assert!((d(&v, &v) - 1.0).abs() < 1e-15);
        assert_eq!(d(&u, &v), 0.0);
    }

    #[test]
    fn csv_layout() {
        let csv = to_csv(&theodorus_2d(2).unwrap());
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "l,t1,t2,phi,norm");
        assert_eq!(lines[1], "0,0.0,0.0,,0.0");
        assert_eq!(lines[2], "1,1.0,0.0,0.0,1.0");
        assert_eq!(lines.len(), 4);
    }

    #[test]
    fn svg_has_every_vertex() {
        let svg = to_svg(&theodorus_3d(30, -0.01, 18).unwrap());
        let points = svg.split("points=\"").nth(1).unwrap().split('"').next().unwrap();
        assert_eq!(points.split(' ').count(), 31);
        assert!(svg.contains("<metadata>") && svg.contains("orthographic"));
    }
}
