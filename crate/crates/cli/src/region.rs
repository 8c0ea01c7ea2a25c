//! Region descriptions: points, grids, curves and patches.
//!
//! ```text
//! point   1.0,0.5                      (or point:1.0,0.5)
//! grid    grid:x:0:1:20,y:0:1:20       axis:lo:hi:count, one per parameter
//! curve   circle:cx,cy:r:steps
//!         rect:u0,u1,v0,v1:steps
//!         path:x1,y1;x2,y2;...:steps[:closed]
//! patch   patch:u:lo:hi:n,v:lo:hi:n
//! ```

use qgt_core::transport::{Curve, SurfacePatch};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RegionKind {
    Point,
    Grid,
    Curve,
    Patch,
}

impl RegionKind {
    pub fn name(self) -> &'static str {
        match self {
            RegionKind::Point => "point",
            RegionKind::Grid => "grid",
            RegionKind::Curve => "curve",
            RegionKind::Patch => "patch",
        }
    }

    /// Kind of a region description, read from its prefix.
    pub fn of(text: &str) -> Result<Self, String> {
        let head = text.split(':').next().unwrap_or("").trim();
        Ok(match head {
            "point" => RegionKind::Point,
            "grid" => RegionKind::Grid,
            "circle" | "rect" | "path" | "curve" => RegionKind::Curve,
            "patch" => RegionKind::Patch,
            _ if text.contains(':') => return Err(format!("unknown region kind `{head}`")),
            _ => RegionKind::Point,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridAxis {
    pub name: String,
    pub lo: f64,
    pub hi: f64,
    pub count: usize,
}

impl GridAxis {
    pub fn values(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.lo];
        }
        let step = (self.hi - self.lo) / (self.count - 1) as f64;
        (0..self.count)
            .map(|i| {
                if i + 1 == self.count {
                    self.hi
                } else {
                    self.lo + step * i as f64
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum CurveSpec {
    Circle {
        center: [f64; 2],
        radius: f64,
        steps: usize,
    },
    Rect {
        bounds: [f64; 4],
        steps: usize,
    },
    Path {
        points: Vec<Vec<f64>>,
        steps: usize,
        closed: bool,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub enum Region {
    Point(Vec<f64>),
    Grid(Vec<GridAxis>),
    Curve(CurveSpec),
    Patch([GridAxis; 2]),
}

impl Region {
    pub fn parse(text: &str) -> Result<Self, String> {
        let text = text.trim();
        match RegionKind::of(text)? {
            RegionKind::Point => {
                let body = text.strip_prefix("point:").unwrap_or(text);
                Ok(Region::Point(parse_point(body)?))
            }
            RegionKind::Grid => Ok(Region::Grid(parse_axes(
                text.strip_prefix("grid:").unwrap_or(""),
            )?)),
            RegionKind::Patch => {
                let axes = parse_axes(text.strip_prefix("patch:").unwrap_or(""))?;
                let [u, v]: [GridAxis; 2] = axes
                    .try_into()
                    .map_err(|_| "a patch needs exactly two axes".to_string())?;
                if u.count < 2 || v.count < 2 {
                    return Err("patch axes need at least two points".into());
                }
                Ok(Region::Patch([u, v]))
            }
            RegionKind::Curve => Ok(Region::Curve(parse_curve(text)?)),
        }
    }

    pub fn n_params(&self) -> usize {
        match self {
            Region::Point(p) => p.len(),
            Region::Grid(axes) => axes.len(),
            Region::Curve(CurveSpec::Path { points, .. }) => points[0].len(),
            Region::Curve(_) | Region::Patch(_) => 2,
        }
    }

    /// Grid points in row-major order, the last axis varying fastest.
    pub fn grid_points(axes: &[GridAxis]) -> Vec<Vec<f64>> {
        let values: Vec<Vec<f64>> = axes.iter().map(GridAxis::values).collect();
        let mut points = vec![Vec::new()];
        for vals in &values {
            points = points
                .into_iter()
                .flat_map(|p| {
                    vals.iter().map(move |&v| {
                        let mut q = p.clone();
                        q.push(v);
                        q
                    })
                })
                .collect();
        }
        points
    }
}

pub fn build_curve(spec: &CurveSpec) -> qgt_core::Result<Curve> {
    match spec {
        CurveSpec::Circle {
            center,
            radius,
            steps,
        } => Curve::circle(*center, *radius, *steps),
        CurveSpec::Rect { bounds, steps } => {
            Curve::rectangle(bounds[0], bounds[1], bounds[2], bounds[3], *steps)
        }
        CurveSpec::Path {
            points,
            steps,
            closed,
        } => Curve::polyline(points.clone(), *steps, *closed),
    }
}

pub fn build_patch(axes: &[GridAxis; 2]) -> qgt_core::Result<SurfacePatch> {
    let [u, v] = axes;
    SurfacePatch::new((u.lo, u.hi), (v.lo, v.hi), u.count, v.count)
}

fn number(s: &str) -> Result<f64, String> {
    let v: f64 = s
        .trim()
        .parse()
        .map_err(|_| format!("invalid number `{}`", s.trim()))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("non-finite number `{}`", s.trim()))
    }
}

fn count(s: &str) -> Result<usize, String> {
    s.trim()
        .parse()
        .map_err(|_| format!("invalid count `{}`", s.trim()))
}

pub fn parse_point(text: &str) -> Result<Vec<f64>, String> {
    if text.trim().is_empty() {
        return Err("empty point".into());
    }
    text.split(',').map(number).collect()
}

fn parse_axes(text: &str) -> Result<Vec<GridAxis>, String> {
    if text.trim().is_empty() {
        return Err("no axes given".into());
    }
    text.split(',')
        .map(|part| {
            let fields: Vec<&str> = part.split(':').collect();
            let [name, lo, hi, n] = fields[..] else {
                return Err(format!("axis `{part}` is not name:lo:hi:count"));
            };
            let axis = GridAxis {
                name: name.trim().to_string(),
                lo: number(lo)?,
                hi: number(hi)?,
                count: count(n)?,
            };
            if axis.count == 0 {
                return Err(format!("axis `{}` has zero points", axis.name));
            }
            Ok(axis)
        })
        .collect()
}

fn parse_curve(text: &str) -> Result<CurveSpec, String> {
    let fields: Vec<&str> = text.split(':').map(str::trim).collect();
    match fields[..] {
        ["circle", center, radius, steps] => {
            let c = parse_point(center)?;
            let [cx, cy] = c[..] else {
                return Err("circle center needs two coordinates".into());
            };
            Ok(CurveSpec::Circle {
                center: [cx, cy],
                radius: number(radius)?,
                steps: count(steps)?,
            })
        }
        ["rect", bounds, steps] => {
            let b = parse_point(bounds)?;
            let bounds: [f64; 4] = b
                .try_into()
                .map_err(|_| "rect needs u0,u1,v0,v1".to_string())?;
            Ok(CurveSpec::Rect {
                bounds,
                steps: count(steps)?,
            })
        }
        ["path", points, steps, ref rest @ ..] => {
            let closed = match rest {
                [] => false,
                ["closed"] => true,
                _ => return Err("path takes an optional trailing `closed`".into()),
            };
            let points: Vec<Vec<f64>> = points
                .split(';')
                .map(parse_point)
                .collect::<Result<_, _>>()?;
            let k = points[0].len();
            if points.len() < 2 || points.iter().any(|p| p.len() != k) {
                return Err("path needs at least two points of equal length".into());
            }
            Ok(CurveSpec::Path {
                points,
                steps: count(steps)?,
                closed,
            })
        }
        _ => Err(format!("cannot parse curve `{text}`")),
    }
}
