//! Command-line flags, the optional `key=value` config file, and their
//! merge into a [`RunConfig`]. Flags win over the file, the file over a
//! catalog entry, and the catalog over built-in defaults.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use funcseries::catalog;
use funcseries::series::Tolerances;
use num_complex::Complex64;

use crate::failure::CliError;

#[derive(Parser, Debug)]
#[command(
    name = "funcseries",
    version,
    about = "Functional power series of f(z) in powers of s(z) - s(z0)"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Coefficients c_0..c_N as JSON.
    Expand(CommonArgs),
    /// CSV of f and the partial sums S_0..S_N over a real grid.
    Plot(CommonArgs),
    /// Engine coefficients against the truncated-series oracle.
    Check(CommonArgs),
    /// Measured truncation error next to the Lagrange-style bounds.
    Remainder(CommonArgs),
    /// Two-sided expansion in powers of theta by contour quadrature.
    Teixeira(CommonArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Expand(_) => "expand",
            Command::Plot(_) => "plot",
            Command::Check(_) => "check",
            Command::Remainder(_) => "remainder",
            Command::Teixeira(_) => "teixeira",
        }
    }

    pub fn args(&self) -> &CommonArgs {
        match self {
            Command::Expand(a)
            | Command::Plot(a)
            | Command::Check(a)
            | Command::Remainder(a)
            | Command::Teixeira(a) => a,
        }
    }
}

#[derive(Args, Debug, Default)]
pub struct CommonArgs {
    /// Function to expand, e.g. "1/(1+z)".
    #[arg(long)]
    pub f: Option<String>,
    /// Composite function s(z); theta(z) for `teixeira`.
    #[arg(long, visible_alias = "theta")]
    pub s: Option<String>,
    /// Expansion point as "re,im" or a real number; the zero of theta for `teixeira`.
    #[arg(long, allow_hyphen_values = true)]
    pub z0: Option<String>,
    /// Highest coefficient index N.
    #[arg(long)]
    pub order: Option<usize>,
    /// Real sample grid "start:stop:count".
    #[arg(long, allow_hyphen_values = true)]
    pub grid: Option<String>,
    #[arg(long)]
    pub tol_termination: Option<f64>,
    #[arg(long)]
    pub tol_deriv_zero: Option<f64>,
    /// Write the report here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub quadrature_points: Option<usize>,
    /// Circle "center:radius" (center "re,im" or real); give the outer one first, then the inner one.
    #[arg(long, allow_hyphen_values = true)]
    pub contour: Vec<String>,
    /// Evaluation point for `remainder` and `teixeira`, "re,im" or real.
    #[arg(long, allow_hyphen_values = true)]
    pub at: Option<String>,
    /// Substitute a named parameter in f and s, "name=value".
    #[arg(long)]
    pub param: Vec<String>,
    /// Inverse g of s in its own variable; switches `expand` to the inverse route.
    #[arg(long)]
    pub inverse: Option<String>,
    /// Catalog pair name, or "all" for `check`.
    #[arg(long)]
    pub catalog: Option<String>,
    /// Optional config file of key=value lines; flags override it.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long, hide = true)]
    pub corrupt_coefficient: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Grid {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

impl Grid {
    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        let last = (self.count - 1) as f64;
        (0..self.count).map(move |i| {
            let i = i as f64;
            let x = (self.start * (last - i) + self.stop * i) / last;
            // snap to 12 decimals so abscissae print as typed, e.g. -1.14
            let snapped = (x * 1e12).round() / 1e12;
            if x.abs() < 1e6 {
                snapped
            } else {
                x
            }
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Circle {
    pub center: Complex64,
    pub radius: f64,
}

#[derive(Debug)]
pub struct RunConfig {
    pub f: Option<String>,
    pub s: Option<String>,
    pub params: Vec<(String, String)>,
    pub z0: Complex64,
    pub order: usize,
    pub tolerances: Tolerances,
    pub grid: Grid,
    pub out: Option<PathBuf>,
    pub quadrature_points: usize,
    pub contours: Vec<Circle>,
    pub at: Option<Complex64>,
    pub inverse: Option<String>,
    pub catalog: Option<String>,
    pub corrupt_coefficient: Option<usize>,
}

pub const DEFAULT_GRID: Grid = Grid {
    start: -1.2,
    stop: 1.2,
    count: 121,
};

const CONFIG_KEYS: &[&str] = &[
    "f",
    "s",
    "theta",
    "z0",
    "order",
    "grid",
    "tol-termination",
    "tol-deriv-zero",
    "out",
    "quadrature-points",
    "contour",
    "at",
    "param",
    "inverse",
    "catalog",
];

pub fn parse_complex(text: &str) -> Result<Complex64, String> {
    let number = |t: &str| {
        t.trim()
            .parse::<f64>()
            .ok()
            .filter(|v| v.is_finite())
            .ok_or_else(|| format!("invalid number '{}'", t.trim()))
    };
    match text.split_once(',') {
        Some((re, im)) => Ok(Complex64::new(number(re)?, number(im)?)),
        None => Ok(Complex64::new(number(text)?, 0.0)),
    }
}

pub fn parse_grid(text: &str) -> Result<Grid, String> {
    let parts: Vec<&str> = text.split(':').collect();
    let [start, stop, count] = parts[..] else {
        return Err(format!("grid '{text}' is not start:stop:count"));
    };
    let start: f64 = start
        .trim()
        .parse()
        .map_err(|_| format!("invalid grid start '{start}'"))?;
    let stop: f64 = stop
        .trim()
        .parse()
        .map_err(|_| format!("invalid grid stop '{stop}'"))?;
    let count: usize = count
        .trim()
        .parse()
        .map_err(|_| format!("invalid grid count '{count}'"))?;
    if count < 2 {
        return Err("grid needs at least two points".into());
    }
    if !(start.is_finite() && stop.is_finite()) || start >= stop {
        return Err(format!("grid start {start} must be below stop {stop}"));
    }
    Ok(Grid { start, stop, count })
}

pub fn parse_circle(text: &str) -> Result<Circle, String> {
    let (center, radius) = text
        .rsplit_once(':')
        .ok_or_else(|| format!("contour '{text}' is not center:radius"))?;
    let radius: f64 = radius
        .trim()
        .parse()
        .map_err(|_| format!("invalid contour radius '{radius}'"))?;
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(format!("contour radius must be positive, got {radius}"));
    }
    Ok(Circle {
        center: parse_complex(center)?,
        radius,
    })
}

fn parse_param(text: &str) -> Result<(String, String), String> {
    let (name, value) = text
        .split_once('=')
        .ok_or_else(|| format!("parameter '{text}' is not name=value"))?;
    Ok((name.trim().to_string(), value.trim().to_string()))
}

fn positive(name: &str, v: f64) -> Result<f64, String> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(format!("{name} must be positive, got {v}"))
    }
}

/// `key=value` lines; blank lines and `#` comments are skipped. Keys may repeat
/// for `contour` and `param`.
pub fn read_config(path: &Path) -> Result<BTreeMap<String, Vec<String>>, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::other(format!("cannot read config {}: {e}", path.display())))?;
    parse_config(&text)
}

pub fn parse_config(text: &str) -> Result<BTreeMap<String, Vec<String>>, CliError> {
    let mut map: BTreeMap<String, Vec<String>> = BTreeMap::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| CliError::parse(format!("config line {}: expected key=value", i + 1)))?;
        let key = key.trim().replace('_', "-");
        if !CONFIG_KEYS.contains(&key.as_str()) {
            return Err(CliError::parse(format!(
                "config line {}: unknown key '{key}'",
                i + 1
            )));
        }
        let key = if key == "theta" { "s".to_string() } else { key };
        map.entry(key).or_default().push(value.trim().to_string());
    }
    Ok(map)
}

impl RunConfig {
    pub fn resolve(command: &Command) -> Result<RunConfig, CliError> {
        let args = command.args();
        let file = match &args.config {
            Some(path) => read_config(path)?,
            None => BTreeMap::new(),
        };
        Self::merge(command.name(), args, &file)
    }

    pub fn merge(
        command: &str,
        args: &CommonArgs,
        file: &BTreeMap<String, Vec<String>>,
    ) -> Result<RunConfig, CliError> {
        let from_file = |key: &str| file.get(key).and_then(|v| v.last()).cloned();
        let pick = |flag: &Option<String>, key: &str| flag.clone().or_else(|| from_file(key));
        let bad = CliError::parse;

        let catalog_name = pick(&args.catalog, "catalog");
        let entry = match catalog_name.as_deref() {
            None | Some("all") => None,
            Some(name) => Some(
                catalog::find(name).ok_or_else(|| bad(format!("unknown catalog pair '{name}'")))?,
            ),
        };

        let f = pick(&args.f, "f").or_else(|| entry.map(|p| p.f.to_string()));
        let s = pick(&args.s, "s").or_else(|| entry.map(|p| p.s.to_string()));
        let z0 = match pick(&args.z0, "z0") {
            Some(text) => parse_complex(&text).map_err(bad)?,
            None => entry.map_or(Complex64::new(0.0, 0.0), |p| p.z0()),
        };
        let order = match args.order {
            Some(n) => n,
            None => match from_file("order") {
                Some(text) => text
                    .parse()
                    .map_err(|_| bad(format!("invalid order '{text}'")))?,
                None => default_order(command),
            },
        };

        let float = |flag: Option<f64>, key: &str, default: f64| -> Result<f64, CliError> {
            let v = match flag {
                Some(v) => v,
                None => match from_file(key) {
                    Some(text) => text
                        .parse()
                        .map_err(|_| bad(format!("invalid {key} '{text}'")))?,
                    None => default,
                },
            };
            positive(key, v).map_err(bad)
        };
        let defaults = Tolerances::default();
        let tolerances = Tolerances {
            termination: float(
                args.tol_termination,
                "tol-termination",
                defaults.termination,
            )?,
            derivative_zero: float(
                args.tol_deriv_zero,
                "tol-deriv-zero",
                defaults.derivative_zero,
            )?,
        };

        let grid = match pick(&args.grid, "grid") {
            Some(text) => parse_grid(&text).map_err(bad)?,
            None => DEFAULT_GRID,
        };
        let quadrature_points = match args.quadrature_points {
            Some(n) => n,
            None => match from_file("quadrature-points") {
                Some(text) => text
                    .parse()
                    .map_err(|_| bad(format!("invalid quadrature-points '{text}'")))?,
                None => funcseries::teixeira::DEFAULT_POINTS,
            },
        };

        let repeated = |flag: &Vec<String>, key: &str| {
            if flag.is_empty() {
                file.get(key).cloned().unwrap_or_default()
            } else {
                flag.clone()
            }
        };
        let contours = repeated(&args.contour, "contour")
            .iter()
            .map(|c| parse_circle(c))
            .collect::<Result<Vec<_>, _>>()
            .map_err(bad)?;
        if contours.len() > 2 {
            return Err(bad(
                "at most two contours (outer, inner) are accepted".into()
            ));
        }
        let params = repeated(&args.param, "param")
            .iter()
            .map(|p| parse_param(p))
            .collect::<Result<Vec<_>, _>>()
            .map_err(bad)?;
        let at = pick(&args.at, "at")
            .map(|t| parse_complex(&t))
            .transpose()
            .map_err(bad)?;

        Ok(RunConfig {
            f,
            s,
            params,
            z0,
            order,
            tolerances,
            grid,
            out: args
                .out
                .clone()
                .or_else(|| from_file("out").map(PathBuf::from)),
            quadrature_points,
            contours,
            at,
            inverse: pick(&args.inverse, "inverse"),
            catalog: catalog_name,
            corrupt_coefficient: args.corrupt_coefficient,
        })
    }
}

fn default_order(command: &str) -> usize {
    match command {
        "plot" => 3,
        "check" => 10,
        "teixeira" => 12,
        _ => 6,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_values() {
        assert_eq!(parse_complex("0.5").unwrap(), Complex64::new(0.5, 0.0));
        assert_eq!(parse_complex("-1, 2").unwrap(), Complex64::new(-1.0, 2.0));
        assert!(parse_complex("x").is_err());
        assert!(parse_complex("nan").is_err());
    }

    #[test]
    fn grids() {
        let g = parse_grid("-1.2:1.2:121").unwrap();
        assert_eq!(g, DEFAULT_GRID);
        let pts: Vec<f64> = g.points().collect();
        assert_eq!(pts.len(), 121);
        assert_eq!(pts[0], -1.2);
        assert_eq!(pts[120], 1.2);
        assert!((pts[60]).abs() < 1e-15);
        assert!(parse_grid("0:1:1").is_err());
        assert!(parse_grid("1:0:5").is_err());
        assert!(parse_grid("0:1").is_err());
    }

    #[test]
    fn circles() {
        let c = parse_circle("0.5,-1:2").unwrap();
        assert_eq!(c.center, Complex64::new(0.5, -1.0));
        assert_eq!(c.radius, 2.0);
        assert_eq!(
            parse_circle("-1:0.5").unwrap().center,
            Complex64::new(-1.0, 0.0)
        );
        assert!(parse_circle("0:-1").is_err());
        assert!(parse_circle("0").is_err());
    }

    #[test]
    fn flags_override_file_and_catalog() {
        let file =
            parse_config("# comment\nf = exp(z)\norder=4\ncontour=0:2\ncontour=0:0.5\ntheta=z\n")
                .unwrap();
        let args = CommonArgs {
            order: Some(7),
            catalog: Some("rational-in-sine".into()),
            ..Default::default()
        };
        let cfg = RunConfig::merge("expand", &args, &file).unwrap();
        assert_eq!(cfg.f.as_deref(), Some("exp(z)"));
        assert_eq!(cfg.s.as_deref(), Some("z"));
        assert_eq!(cfg.order, 7);
        assert_eq!(cfg.contours.len(), 2);
        assert_eq!(cfg.z0, Complex64::new(0.0, 0.0));
    }

    #[test]
    fn config_errors() {
        assert!(parse_config("colour=red").is_err());
        assert!(parse_config("just text").is_err());
        let args = CommonArgs {
            tol_termination: Some(-1.0),
            ..Default::default()
        };
        assert!(RunConfig::merge("expand", &args, &BTreeMap::new()).is_err());
    }
}
