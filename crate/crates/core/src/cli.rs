//! Command-line front end: table and report emitters plus the validation
//! suite.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use crate::dynamics::{
    area_spectrum, evolve_closed_form, evolve_rk4, hamiltonian, initial_data, reconstruct_state, ActionTable,
    EvolutionState, DEFAULT_P_MAX,
};
use crate::fuchsian::{generators, relation_defect, side_pairing_defect};
use crate::octagon::{arc_radii_angles, build_geometry, perimeter, OctagonParams};
use crate::orbits::{da_dp, wp_area_dilog, wp_area_numeric, IsoOrbit, P_REG};
use crate::teichmuller::{fn_coordinates, wp_density};
use crate::validation::{run_all, summarize, Level, ValidationConfig};
use crate::{Complex, Error, Result};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 1;
pub const EXIT_DOMAIN: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "genus2", version, about = "Genus-two octagon geometry, Weil-Petersson orbits and bounce dynamics")]
pub struct Cli {
    /// File of `key=value` lines; command-line flags take precedence.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Write to this file instead of standard output.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// Read angle arguments in degrees.
    #[arg(long, global = true)]
    pub degrees: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Closed,
    Rk4,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum LevelArg {
    Fast,
    Full,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Geometry, coordinates and generators of one octagon.
    Describe(DescribeArgs),
    /// Samples of an isoperimetric orbit.
    Orbit(OrbitArgs),
    /// Weil-Petersson area and its derivative over a perimeter range.
    Area(AreaArgs),
    /// Boost evolution from a starting octagon.
    Evolve(EvolveArgs),
    /// Area eigenvalues.
    Spectrum(SpectrumArgs),
    /// Run the acceptance suite.
    Validate(ValidateArgs),
}

#[derive(Debug, Args)]
pub struct DescribeArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub a: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub alpha: Option<f64>,
}

#[derive(Debug, Args)]
pub struct OrbitArgs {
    #[arg(long)]
    pub perimeter: Option<f64>,
    #[arg(long)]
    pub n: Option<usize>,
}

#[derive(Debug, Args)]
pub struct AreaArgs {
    #[arg(long)]
    pub p_min: Option<f64>,
    #[arg(long)]
    pub p_max: Option<f64>,
    #[arg(long)]
    pub n: Option<usize>,
}

#[derive(Debug, Args)]
pub struct EvolveArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub a0: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub alpha0: Option<f64>,
    #[arg(long = "c", allow_negative_numbers = true)]
    pub casimir: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub tau_min: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub tau_max: Option<f64>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long, value_enum)]
    pub method: Option<Method>,
    /// Largest perimeter of the action inversion table.
    #[arg(long)]
    pub p_max: Option<f64>,
}

#[derive(Debug, Args)]
pub struct SpectrumArgs {
    #[arg(long)]
    pub n_max: Option<u32>,
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    #[arg(long, value_enum)]
    pub level: Option<LevelArg>,
    /// Multiplies every acceptance tolerance.
    #[arg(long)]
    pub tolerance_scale: Option<f64>,
}

/// `key=value` pairs from a config file. Keys are normalized to use `_`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ConfigFile {
    values: BTreeMap<String, String>,
}

impl ConfigFile {
    pub fn parse(text: &str) -> Result<Self> {
        let mut values = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::domain("config", format!("line {}: expected key=value", i + 1)))?;
            values.insert(k.trim().replace('-', "_"), v.trim().to_string());
        }
        Ok(ConfigFile { values })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)
            .map_err(|e| Error::domain("config", format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    fn take<T: std::str::FromStr>(&mut self, key: &str) -> Result<Option<T>> {
        match self.values.remove(key) {
            None => Ok(None),
            Some(v) => v
                .parse()
                .map(Some)
                .map_err(|_| Error::domain("config", format!("{key} = {v:?} is not valid"))),
        }
    }

    fn take_enum<T: ValueEnum>(&mut self, key: &str) -> Result<Option<T>> {
        match self.values.remove(key) {
            None => Ok(None),
            Some(v) => T::from_str(&v, true)
                .map(Some)
                .map_err(|_| Error::domain("config", format!("{key} = {v:?} is not valid"))),
        }
    }

    fn finish(self) -> Result<()> {
        match self.values.keys().next() {
            None => Ok(()),
            Some(k) => Err(Error::domain("config", format!("unknown key {k:?}"))),
        }
    }
}

/// `%.12e` as in C: the exponent carries a sign and at least two digits.
pub fn fmt_float(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let s = format!("{x:.12e}");
    let (mant, exp) = s.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    format!("{mant}e{}{:02}", if exp < 0 { '-' } else { '+' }, exp.abs())
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Float(f64),
    Int(i64),
    Text(String),
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Float(x) => fmt_float(*x),
            Cell::Int(i) => i.to_string(),
            Cell::Text(s) => s.clone(),
        }
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Rows with named columns, plus the parameters that produced them.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub command: &'static str,
    pub parameters: Vec<(&'static str, String)>,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
    pub notes: Vec<String>,
}

impl Table {
    fn header_comment(&self) -> String {
        let params: Vec<String> = self.parameters.iter().map(|(k, v)| format!("{k}={v}")).collect();
        format!("# genus2 {} {} {}", env!("CARGO_PKG_VERSION"), self.command, params.join(" "))
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.header_comment().trim_end().to_string();
        out.push('\n');
        for n in &self.notes {
            out.push_str(&format!("# {n}\n"));
        }
        out.push_str(&self.columns.iter().map(|c| csv_field(c)).collect::<Vec<_>>().join(","));
        out.push('\n');
        for row in &self.rows {
            out.push_str(&row.iter().map(|c| csv_field(&c.render())).collect::<Vec<_>>().join(","));
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> Value {
        let params: Map<String, Value> = self.parameters.iter().map(|(k, v)| (k.to_string(), json!(v))).collect();
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|r| {
                Value::Object(
                    self.columns
                        .iter()
                        .zip(r)
                        .map(|(c, cell)| {
                            let v = match cell {
                                Cell::Int(i) => json!(i),
                                other => json!(other.render()),
                            };
                            (c.to_string(), v)
                        })
                        .collect(),
                )
            })
            .collect();
        json!({
            "command": self.command,
            "version": env!("CARGO_PKG_VERSION"),
            "parameters": params,
            "columns": self.columns,
            "notes": self.notes,
            "rows": rows,
        })
    }
}

/// Result of one command before rendering.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub table: Option<Table>,
    pub report: Option<Value>,
    pub code: i32,
    pub message: Option<String>,
}

impl Outcome {
    fn table(table: Table) -> Self {
        Outcome { table: Some(table), report: None, code: EXIT_OK, message: None }
    }
}

fn exit_code(e: &Error) -> i32 {
    if e.is_domain_like() {
        EXIT_DOMAIN
    } else {
        EXIT_NUMERIC
    }
}

fn angle_in(x: f64, degrees: bool) -> f64 {
    if degrees {
        x.to_radians()
    } else {
        x
    }
}

fn flt(x: f64) -> Value {
    json!(fmt_float(x))
}

fn cplx(z: Complex) -> Value {
    json!([fmt_float(z.re), fmt_float(z.im)])
}

fn describe(a: f64, alpha: f64) -> Result<Value> {
    let p = OctagonParams::new(a, alpha)?;
    let geom = build_geometry(&p)?;
    let arcs = arc_radii_angles(&p);
    let fnc = fn_coordinates(&p)?;
    let gs = generators(&p)?;
    let mats: Vec<Value> = gs
        .g
        .iter()
        .map(|g| json!({ "u": cplx(g.u), "v": cplx(g.v), "trace": flt(g.trace()) }))
        .collect();
    Ok(json!({
        "a": flt(p.a()),
        "alpha": flt(p.alpha()),
        "alpha_tilde": flt(p.alpha_tilde()),
        "sheet": p.sheet().sign() as i64,
        "b": flt(geom.b),
        "beta": flt(geom.beta),
        "r_plus": flt(arcs.r_plus),
        "r_minus": flt(arcs.r_minus),
        "phi_plus": flt(arcs.phi_plus),
        "phi_minus": flt(arcs.phi_minus),
        "vertices": geom.vertices.iter().map(|&z| cplx(z)).collect::<Vec<_>>(),
        "perimeter": flt(perimeter(&p)),
        "fenchel_nielsen": {
            "lengths": fnc.lengths.iter().map(|&x| flt(x)).collect::<Vec<_>>(),
            "twists": fnc.twists.iter().map(|&x| flt(x)).collect::<Vec<_>>(),
        },
        "wp_density": flt(wp_density(&p)),
        "generators": mats,
        "relation_defect": flt(relation_defect(&gs)),
        "side_pairing_defect": flt(side_pairing_defect(&p)?),
    }))
}

fn flatten(prefix: &str, v: &Value, rows: &mut Vec<Vec<Cell>>) {
    let key = |k: &str| if prefix.is_empty() { k.to_string() } else { format!("{prefix}.{k}") };
    match v {
        Value::Object(m) => m.iter().for_each(|(k, v)| flatten(&key(k), v, rows)),
        Value::Array(a) => a.iter().enumerate().for_each(|(i, v)| flatten(&key(&i.to_string()), v, rows)),
        Value::String(s) => rows.push(vec![Cell::Text(prefix.to_string()), Cell::Text(s.clone())]),
        other => rows.push(vec![Cell::Text(prefix.to_string()), Cell::Text(other.to_string())]),
    }
}

fn check_count(name: &str, n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::domain("cli", format!("{name} = {n} must be at least 2")));
    }
    Ok(())
}

fn check_range(lo_name: &str, lo: f64, hi_name: &str, hi: f64) -> Result<()> {
    if !(hi > lo) {
        return Err(Error::domain("cli", format!("{hi_name} = {hi} must exceed {lo_name} = {lo}")));
    }
    Ok(())
}

fn orbit_table(per: f64, n: usize) -> Result<Table> {
    check_count("n", n)?;
    let orbit = IsoOrbit::new(per)?;
    let mut rows = Vec::with_capacity(n);
    for k in 0..n {
        let phi = 2.0 * std::f64::consts::PI * k as f64 / n as f64;
        let p = orbit.point(phi)?;
        rows.push(vec![Cell::Float(phi), Cell::Float(p.a()), Cell::Float(p.alpha_tilde()), Cell::Float(perimeter(&p))]);
    }
    Ok(Table {
        command: "orbit",
        parameters: vec![("perimeter", fmt_float(per)), ("n", n.to_string())],
        columns: vec!["phi", "a", "alpha_tilde", "perimeter_check"],
        rows,
        notes: vec![],
    })
}

const AREA_FD_STEP: f64 = 1e-3;

fn area_row(p: f64) -> Result<Vec<Cell>> {
    let a = wp_area_numeric(p)?;
    let dilog = wp_area_dilog(p)?.value;
    let h = AREA_FD_STEP;
    let fd = if p - h >= P_REG {
        (wp_area_numeric(p + h)? - wp_area_numeric(p - h)?) / (2.0 * h)
    } else {
        (wp_area_numeric(p + h)? - a) / h
    };
    Ok(vec![Cell::Float(p), Cell::Float(a), Cell::Float(dilog), Cell::Float(da_dp(p)?), Cell::Float(fd), Cell::Text("ok".into())])
}

fn area_table(p_min: f64, p_max: f64, n: usize) -> Result<(Table, usize)> {
    check_count("n", n)?;
    check_range("p_min", p_min, "p_max", p_max)?;
    if p_min < P_REG {
        return Err(Error::BelowMinimum { perimeter: p_min, minimum: P_REG });
    }
    let mut failures = 0;
    let rows = (0..n)
        .map(|i| {
            let p = p_min + (p_max - p_min) * i as f64 / (n - 1) as f64;
            area_row(p).unwrap_or_else(|e| {
                failures += 1;
                let mut row = vec![Cell::Float(p)];
                row.extend(std::iter::repeat_n(Cell::Float(f64::NAN), 4));
                row.push(Cell::Text(e.to_string()));
                row
            })
        })
        .collect();
    let table = Table {
        command: "area",
        parameters: vec![("p_min", fmt_float(p_min)), ("p_max", fmt_float(p_max)), ("n", n.to_string())],
        columns: vec!["P", "A_numeric", "A_dilog", "dAdP_analytic", "dAdP_fd", "status"],
        rows,
        notes: vec![],
    };
    Ok((table, failures))
}

/// Parameters of the `evolve` command after defaults are applied.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvolveParams {
    pub a0: f64,
    pub alpha0: f64,
    pub casimir: f64,
    pub tau_min: f64,
    pub tau_max: f64,
    pub n: usize,
    pub method: Method,
    pub p_max: f64,
}

const RK4_MAX_STEP: f64 = 5e-3;

fn state_cells(s: &EvolutionState) -> Vec<Cell> {
    vec![Cell::Float(s.tau), Cell::Float(s.j), Cell::Float(s.phi), Cell::Float(s.a), Cell::Float(s.alpha), Cell::Float(s.h)]
}

fn evolve_table(ep: &EvolveParams) -> Result<(Table, Option<Error>)> {
    check_count("n", ep.n)?;
    check_range("tau_min", ep.tau_min, "tau_max", ep.tau_max)?;
    let start = OctagonParams::new(ep.a0, ep.alpha0)?;
    let (j0, phi0, sheet) = initial_data(&start)?;
    let e = hamiltonian(j0, phi0, ep.casimir)?;
    let table = ActionTable::new(ep.p_max, 64)?;
    let taus: Vec<f64> = (0..ep.n)
        .map(|i| ep.tau_min + (ep.tau_max - ep.tau_min) * i as f64 / (ep.n - 1) as f64)
        .collect();
    let rk = match ep.method {
        Method::Closed => None,
        _ => {
            let sub = (((ep.tau_max - ep.tau_min) / RK4_MAX_STEP / (ep.n - 1) as f64).ceil() as usize).max(1);
            let path = evolve_rk4(j0, phi0, ep.casimir, ep.tau_min, ep.tau_max, sub * (ep.n - 1))?;
            Some(path.into_iter().step_by(sub).collect::<Vec<_>>())
        }
    };
    let mut columns = vec!["tau", "J", "Phi", "a", "alpha", "H"];
    if ep.method == Method::Both {
        columns.extend(["dJ_rk4", "dPhi_rk4", "dH_rk4"]);
    }
    let mut rows = Vec::new();
    let mut failure = None;
    for (i, &tau) in taus.iter().enumerate() {
        let sample = (|| -> Result<Vec<Cell>> {
            let (j, phi) = match (ep.method, &rk) {
                (Method::Rk4, Some(path)) => (path[i].1, path[i].2),
                _ => evolve_closed_form(j0, phi0, sheet, ep.casimir, tau)?,
            };
            let s = reconstruct_state(&table, tau, j, phi, sheet, ep.casimir, e)?;
            let mut cells = state_cells(&s);
            cells[5] = Cell::Float(hamiltonian(j, phi, ep.casimir)?);
            if let (Method::Both, Some(path)) = (ep.method, &rk) {
                let (jr, pr) = (path[i].1, path[i].2);
                cells.push(Cell::Float(jr - j));
                cells.push(Cell::Float(pr - phi));
                cells.push(Cell::Float(hamiltonian(jr, pr, ep.casimir)? - hamiltonian(j, phi, ep.casimir)?));
            }
            Ok(cells)
        })();
        match sample {
            Ok(cells) => rows.push(cells),
            Err(err) => {
                // Keep the contiguous run that contains tau = 0 when the
                // failure is on the leading side.
                if tau < 0.0 {
                    rows.clear();
                    failure.get_or_insert(err);
                } else {
                    failure.get_or_insert(err);
                    break;
                }
            }
        }
    }
    let notes = match &failure {
        Some(err) => vec![format!("truncated: {err}")],
        None => vec![],
    };
    let table = Table {
        command: "evolve",
        parameters: vec![
            ("a0", fmt_float(ep.a0)),
            ("alpha0", fmt_float(ep.alpha0)),
            ("C", fmt_float(ep.casimir)),
            ("tau_min", fmt_float(ep.tau_min)),
            ("tau_max", fmt_float(ep.tau_max)),
            ("n", ep.n.to_string()),
            ("method", format!("{:?}", ep.method).to_lowercase()),
            ("p_max", fmt_float(ep.p_max)),
        ],
        columns,
        rows,
        notes,
    };
    Ok((table, failure))
}

fn spectrum_table(n_max: u32) -> Result<Table> {
    let rows = (0..=i64::from(n_max))
        .map(|n| Ok(vec![Cell::Int(n), Cell::Float(area_spectrum(n)?)]))
        .collect::<Result<Vec<_>>>()?;
    Ok(Table {
        command: "spectrum",
        parameters: vec![("n_max", n_max.to_string())],
        columns: vec!["n", "A_n"],
        rows,
        notes: vec![],
    })
}

fn validate(level: Level, scale: f64) -> Result<(Table, Value, bool)> {
    if !(scale > 0.0) {
        return Err(Error::domain("validate", format!("tolerance_scale = {scale} must be positive")));
    }
    let cfg = ValidationConfig { tolerance_scale: scale, ..ValidationConfig::new(level) };
    let summary = summarize(&cfg, run_all(&cfg));
    let ok = summary.failed == 0;
    let table = Table {
        command: "validate",
        parameters: vec![("level", format!("{level:?}").to_lowercase()), ("tolerance_scale", fmt_float(scale))],
        columns: vec!["criterion", "status", "title", "seconds"],
        rows: summary
            .criteria
            .iter()
            .map(|c| {
                vec![
                    Cell::Int(i64::from(c.id)),
                    Cell::Text(if c.passed { "pass" } else { "fail" }.into()),
                    Cell::Text(c.title.into()),
                    Cell::Float(c.seconds),
                ]
            })
            .collect(),
        notes: summary.criteria.iter().map(|c| c.line()).collect(),
    };
    let json = serde_json::to_value(&summary).map_err(|e| Error::numeric("validate", e.to_string()))?;
    Ok((table, json, ok))
}

fn execute(cli: &Cli, cfg: &mut ConfigFile) -> Result<Outcome> {
    let deg = cli.degrees || cfg.take::<bool>("degrees")?.unwrap_or(false);
    let outcome = match &cli.command {
        Command::Describe(a) => {
            let av = a.a.or(cfg.take("a")?).unwrap_or(0.8);
            let al = angle_in(a.alpha.or(cfg.take("alpha")?).unwrap_or(if deg { 60.0 } else { std::f64::consts::FRAC_PI_3 }), deg);
            cfg_done(cfg)?;
            Outcome { table: None, report: Some(describe(av, al)?), code: EXIT_OK, message: None }
        }
        Command::Orbit(o) => {
            let per = o.perimeter.or(cfg.take("perimeter")?).unwrap_or(25.0);
            let n = o.n.or(cfg.take("n")?).unwrap_or(64);
            cfg_done(cfg)?;
            Outcome::table(orbit_table(per, n)?)
        }
        Command::Area(o) => {
            let p_min = o.p_min.or(cfg.take("p_min")?).unwrap_or(P_REG);
            let p_max = o.p_max.or(cfg.take("p_max")?).unwrap_or(41.0);
            let n = o.n.or(cfg.take("n")?).unwrap_or(33);
            cfg_done(cfg)?;
            let (table, failures) = area_table(p_min, p_max, n)?;
            let message = (failures > 0).then(|| format!("warning: {failures} rows failed"));
            Outcome { table: Some(table), report: None, code: EXIT_OK, message }
        }
        Command::Evolve(o) => {
            let ep = EvolveParams {
                a0: o.a0.or(cfg.take("a0")?).unwrap_or(0.8),
                alpha0: angle_in(
                    o.alpha0.or(cfg.take("alpha0")?).unwrap_or(if deg { 60.0 } else { std::f64::consts::FRAC_PI_3 }),
                    deg,
                ),
                casimir: o.casimir.or(cfg.take("c")?).unwrap_or(0.0),
                tau_min: o.tau_min.or(cfg.take("tau_min")?).unwrap_or(-6.0),
                tau_max: o.tau_max.or(cfg.take("tau_max")?).unwrap_or(3.5),
                n: o.n.or(cfg.take("n")?).unwrap_or(191),
                method: match o.method {
                    Some(m) => m,
                    None => cfg.take_enum("method")?.unwrap_or(Method::Closed),
                },
                p_max: o.p_max.or(cfg.take("p_max")?).unwrap_or(DEFAULT_P_MAX),
            };
            cfg_done(cfg)?;
            let (table, failure) = evolve_table(&ep)?;
            match failure {
                None => Outcome::table(table),
                Some(e) => Outcome {
                    table: Some(table),
                    report: None,
                    code: EXIT_NUMERIC,
                    message: Some(format!("error: trajectory truncated: {e}")),
                },
            }
        }
        Command::Spectrum(o) => {
            let n_max = o.n_max.or(cfg.take("n_max")?).unwrap_or(10);
            cfg_done(cfg)?;
            Outcome::table(spectrum_table(n_max)?)
        }
        Command::Validate(o) => {
            let level = match o.level {
                Some(l) => l,
                None => cfg.take_enum("level")?.unwrap_or(LevelArg::Fast),
            };
            let scale = o.tolerance_scale.or(cfg.take("tolerance_scale")?).unwrap_or(1.0);
            cfg_done(cfg)?;
            let level = match level {
                LevelArg::Fast => Level::Fast,
                LevelArg::Full => Level::Full,
            };
            let (table, json, ok) = validate(level, scale)?;
            Outcome {
                table: Some(table),
                report: Some(json),
                code: if ok { EXIT_OK } else { EXIT_VALIDATION },
                message: (!ok).then(|| "validation failed".to_string()),
            }
        }
    };
    Ok(outcome)
}

fn cfg_done(cfg: &mut ConfigFile) -> Result<()> {
    // Output options are read separately.
    cfg.values.remove("format");
    cfg.values.remove("output");
    std::mem::take(cfg).finish()
}

fn render(outcome: &Outcome, format: Format) -> String {
    match (format, &outcome.table, &outcome.report) {
        (Format::Json, _, Some(r)) => format!("{}\n", serde_json::to_string_pretty(r).expect("serializable")),
        (Format::Json, Some(t), None) => format!("{}\n", serde_json::to_string_pretty(&t.to_json()).expect("serializable")),
        (Format::Csv, Some(t), _) => t.to_csv(),
        (Format::Csv, None, Some(r)) => {
            let mut rows = Vec::new();
            flatten("", r, &mut rows);
            Table { command: "describe", parameters: vec![], columns: vec!["quantity", "value"], rows, notes: vec![] }.to_csv()
        }
        (_, None, None) => String::new(),
    }
}

/// Parses `args`, runs the command and writes its output. Returns the
/// process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_DOMAIN } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { stderr.write_all(text.as_bytes()) } else { stdout.write_all(text.as_bytes()) };
            return code;
        }
    };
    let mut cfg = match &cli.config {
        Some(path) => match ConfigFile::load(path) {
            Ok(c) => c,
            Err(e) => {
                let _ = writeln!(stderr, "error: {e}");
                return exit_code(&e);
            }
        },
        None => ConfigFile::default(),
    };
    let format = match cli.format {
        Some(f) => Ok(f),
        None => cfg.take_enum("format").map(|f| f.unwrap_or(Format::Csv)),
    };
    let output = match cli.output.clone() {
        Some(p) => Ok(Some(p)),
        None => cfg.take::<PathBuf>("output"),
    };
    let (format, output) = match (format, output) {
        (Ok(f), Ok(o)) => (f, o),
        (Err(e), _) | (_, Err(e)) => {
            let _ = writeln!(stderr, "error: {e}");
            return exit_code(&e);
        }
    };
    let outcome = match execute(&cli, &mut cfg) {
        Ok(o) => o,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            return exit_code(&e);
        }
    };
    let text = render(&outcome, format);
    let written = match &output {
        Some(path) => fs::write(path, text.as_bytes()),
        None => stdout.write_all(text.as_bytes()),
    };
    if let Err(e) = written {
        let _ = writeln!(stderr, "error: cannot write output: {e}");
        return EXIT_NUMERIC;
    }
    if let Some(m) = &outcome.message {
        let _ = writeln!(stderr, "{m}");
    }
    outcome.code
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn c_style_exponent() {
        assert_eq!(fmt_float(24.457134711695970), "2.445713471170e+01");
        assert_eq!(fmt_float(-1.5e-7), "-1.500000000000e-07");
        assert_eq!(fmt_float(0.0), "0.000000000000e+00");
        assert_eq!(fmt_float(1e300), "1.000000000000e+300");
        assert_eq!(fmt_float(f64::NAN), "nan");
    }

    #[test]
    fn config_parsing() {
        let mut c = ConfigFile::parse("# comment\n a = 0.8\ntau-min=-2\n\nmethod=both\n").unwrap();
        assert_eq!(c.take::<f64>("a").unwrap(), Some(0.8));
        assert_eq!(c.take::<f64>("tau_min").unwrap(), Some(-2.0));
        assert_eq!(c.take_enum::<Method>("method").unwrap(), Some(Method::Both));
        assert!(c.clone().finish().is_ok());
        assert!(ConfigFile::parse("novalue").is_err());
        let mut c = ConfigFile::parse("a=x").unwrap();
        assert!(c.take::<f64>("a").is_err());
        assert!(ConfigFile::parse("bogus=1").unwrap().finish().is_err());
    }

    #[test]
    fn csv_quoting() {
        assert_eq!(csv_field("plain"), "plain");
        assert_eq!(csv_field("a, b"), "\"a, b\"");
        assert_eq!(csv_field("say \"x\""), "\"say \"\"x\"\"\"");
    }

    #[test]
    fn spectrum_rows() {
        let t = spectrum_table(3).unwrap();
        assert_eq!(t.rows.len(), 4);
        assert_eq!(t.rows[3][1], Cell::Float(14.0 * std::f64::consts::PI));
    }

    #[test]
    fn orbit_at_minimum_repeats_one_point() {
        let t = orbit_table(P_REG, 4).unwrap();
        assert!(t.rows.windows(2).all(|w| w[0][1] == w[1][1] && w[0][2] == w[1][2]));
        assert!(orbit_table(20.0, 4).is_err());
        assert!(orbit_table(25.0, 1).is_err());
    }
}
