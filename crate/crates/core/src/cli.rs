//! Command-line front end.
//!
//! Every subcommand produces one JSON value and a text rendering of the same
//! data; `--json` prints the former, the default (or `--pretty`) the latter.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::exactalg::rational::{format_rational, parse_rational};
use crate::exactalg::{BigRational, IntMatrix, IntPolynomial, TruncatedSeries};
use crate::markovcover::{net_cover, subdivision, Check, CoverJson, MarkovCover};
use crate::ruellemap::{periodic_points, shadow, CircleMap, CirclePoint, MapJson, PseudoOrbit};
use crate::shiftspace::{
    divisor_example_series, growth_stats, is_irreducible, periodic_counts, perron_root, sft_zeta, TransitionMatrix,
};
use crate::zetacalc::{cover_report, oracle_comparison, phi_audit, CoverSpectrum, ZetaReport};

#[derive(Parser, Debug)]
#[command(name = "dynzeta", version, about = "Exact dynamical zeta functions")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// print machine-readable JSON
    #[arg(long, global = true)]
    pub json: bool,
    /// print human-readable text (the default)
    #[arg(long, global = true, conflicts_with = "json")]
    pub pretty: bool,
}

#[derive(Args, Debug, Clone)]
pub struct MapArgs {
    /// use x -> kx mod 1
    #[arg(long, conflicts_with = "map")]
    pub k: Option<u32>,
    /// circle map JSON file
    #[arg(long)]
    pub map: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
pub struct CoverArgs {
    #[command(flatten)]
    pub map: MapArgs,
    /// equal subdivision into m arcs
    #[arg(long)]
    pub subdivision: Option<usize>,
    /// cover JSON file (includes its map)
    #[arg(long, conflicts_with_all = ["subdivision", "net"])]
    pub cover: Option<PathBuf>,
    /// build the cover from the net {i/N}
    #[arg(long, conflicts_with = "subdivision")]
    pub net: Option<usize>,
    #[arg(long)]
    pub alpha: Option<String>,
    #[arg(long)]
    pub beta: Option<String>,
    /// iteration depth for net covers
    #[arg(long, default_value_t = 12)]
    pub depth: usize,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// zeta function 1/det(I - tA) of a subshift
    SftZeta {
        file: PathBuf,
        #[arg(long, default_value_t = 32)]
        order: usize,
    },
    /// periodic-point counts tr(A^n)
    SftCounts {
        file: PathBuf,
        #[arg(long, default_value_t = 12)]
        max_period: usize,
    },
    /// Perron root and growth rate
    SftEntropy {
        file: PathBuf,
        #[arg(long, default_value_t = 12)]
        max_period: usize,
    },
    /// exact points of period p
    MapPeriodic {
        #[command(flatten)]
        map: MapArgs,
        #[arg(long)]
        period: usize,
    },
    /// zeta function of a circle map through a Markov cover
    MapZeta {
        #[command(flatten)]
        cover: CoverArgs,
        #[arg(long, default_value_t = 32)]
        order: usize,
        #[arg(long, default_value_t = 12)]
        max_period: usize,
        /// audit Phi(x) = 1 for all periods up to this value
        #[arg(long, default_value_t = 4)]
        phi_period: usize,
    },
    /// check the Markov cover properties
    CoverValidate {
        #[command(flatten)]
        cover: CoverArgs,
    },
    /// transition matrix, overlap families and signed matrices
    CoverMatrices {
        #[command(flatten)]
        cover: CoverArgs,
    },
    /// shadow a pseudo-orbit given as {"points": [...], "alpha": "p/q"}
    Shadow {
        #[command(flatten)]
        map: MapArgs,
        #[arg(long)]
        orbit: PathBuf,
        #[arg(long)]
        beta: String,
    },
    /// the divisor-sum example and its series s(t)
    DivisorSeries {
        #[arg(long, default_value_t = 32)]
        order: usize,
    },
    /// evaluate Phi(x) for a periodic point
    AuditPhi {
        #[command(flatten)]
        cover: CoverArgs,
        #[arg(long)]
        x: String,
        #[arg(long)]
        period: usize,
    },
    /// signed trace counts against direct periodic-point counts
    Compare {
        #[command(flatten)]
        cover: CoverArgs,
        #[arg(long, default_value_t = 12)]
        max_period: usize,
    },
}

/// Result of one command: the JSON value, its text form and the exit status.
pub struct Output {
    pub json: Value,
    pub text: String,
    pub status: i32,
}

impl Output {
    fn ok(json: Value, text: String) -> Self {
        Output { json, text, status: 0 }
    }

    pub fn render(&self, as_json: bool) -> String {
        if as_json {
            serde_json::to_string(&self.json).expect("values serialize")
        } else {
            self.text.clone()
        }
    }
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("values serialize")
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::parse(format!("cannot read {}: {e}", path.display())))
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    // serde_json appends the line and column whenever it knows them
    serde_json::from_str(&read(path)?).map_err(|e| Error::parse(format!("{}: {e}", path.display())))
}

fn rational_arg(name: &str, v: &str) -> Result<BigRational> {
    parse_rational(v).map_err(|e| Error::parse(format!("--{name}: {e}")))
}

fn load_map(args: &MapArgs) -> Result<CircleMap> {
    match (&args.k, &args.map) {
        (Some(k), _) => CircleMap::multiply_by(*k),
        (None, Some(p)) => read_json::<MapJson>(p)?.validate(),
        (None, None) => Err(Error::parse("one of --k or --map is required")),
    }
}

fn load_cover(args: &CoverArgs) -> Result<MarkovCover> {
    if let Some(path) = &args.cover {
        return MarkovCover::from_json(&read_json::<CoverJson>(path)?);
    }
    let map = load_map(&args.map)?;
    if let Some(m) = args.subdivision {
        return subdivision(&map, m);
    }
    if let Some(n) = args.net {
        if n == 0 {
            return Err(Error::precondition("--net needs at least one point"));
        }
        let (Some(a), Some(b)) = (&args.alpha, &args.beta) else {
            return Err(Error::parse("--net needs --alpha and --beta"));
        };
        let pts: Vec<CirclePoint> = (0..n as i64).map(|i| CirclePoint::from_ratio(i, n as i64)).collect();
        let nc = net_cover(
            &map,
            &pts,
            &rational_arg("alpha", a)?,
            &rational_arg("beta", b)?,
            args.depth,
        )?;
        return Ok(nc.cover);
    }
    Err(Error::parse("one of --cover, --subdivision or --net is required"))
}

fn load_sft(path: &Path) -> Result<TransitionMatrix> {
    read_json(path)
}

fn list<T: ToString>(items: impl IntoIterator<Item = T>) -> String {
    items.into_iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")
}

fn series_text(s: &TruncatedSeries) -> String {
    list(s.coeffs().iter().map(format_rational))
}

fn labels(idx: &[usize]) -> String {
    format!("{{{}}}", list(idx.iter().map(|i| i + 1)))
}

fn matrix_text(m: &IntMatrix) -> String {
    m.rows()
        .iter()
        .map(|r| format!("  [{}]", list(r.iter())))
        .collect::<Vec<_>>()
        .join("\n")
}

fn report_text(r: &ZetaReport) -> String {
    let mut out = vec![
        format!("zeta(t) = {}", r.zeta.render()),
        format!("N_n: {}", list(r.counts.counts())),
        format!("series: {}", series_text(&r.series)),
    ];
    match (r.rho, r.l) {
        (Some(rho), Some(l)) => out.push(format!("rho = {rho}, L = {l}")),
        _ => out.push("rho = inf, L undefined".into()),
    }
    for a in &r.audits {
        out.push(format!(
            "{}: {} ({})",
            a.name,
            if a.pass { "pass" } else { "FAIL" },
            a.detail
        ));
    }
    out.join("\n")
}

fn check_text(name: &str, c: &Check) -> String {
    let mut s = format!("{name}: {}", if c.pass { "pass" } else { "FAIL" });
    if !c.pass {
        s.push_str(&format!(" - {}", c.detail));
        if !c.offending.is_empty() {
            let parts: Vec<String> = c
                .offending
                .iter()
                .map(|v| list(v.iter().map(|i| format!("R{}", i + 1))))
                .map(|p| format!("({p})"))
                .collect();
            s.push_str(&format!("; offending: {}", parts.join(" ")));
        }
    }
    s
}

#[derive(Deserialize)]
struct OrbitJson {
    points: Vec<CirclePoint>,
    #[serde(deserialize_with = "crate::exactalg::rational::deserialize_rational")]
    alpha: BigRational,
}

pub fn run(cli: &Cli) -> Result<Output> {
    match &cli.command {
        Command::SftZeta { file, order } => {
            let a = load_sft(file)?;
            let z = sft_zeta(&a);
            let series = z.series(*order)?;
            let mut v = to_value(&z);
            v["render"] = json!(z.render());
            v["series"] = to_value(&series);
            let text = format!("zeta(t) = {}\nseries: {}", z.render(), series_text(&series));
            Ok(Output::ok(v, text))
        }
        Command::SftCounts { file, max_period } => {
            let counts = periodic_counts(&load_sft(file)?, *max_period)?;
            let text = counts
                .counts()
                .iter()
                .enumerate()
                .map(|(i, c)| format!("N_{} = {c}", i + 1))
                .collect::<Vec<_>>()
                .join("\n");
            Ok(Output::ok(to_value(&counts), text))
        }
        Command::SftEntropy { file, max_period } => {
            let a = load_sft(file)?;
            let counts = periodic_counts(&a, *max_period)?;
            let growth = growth_stats(&counts)?;
            let perron = if is_irreducible(&a) {
                Some(perron_root(&a)?)
            } else {
                None
            };
            let v = json!({
                "irreducible": is_irreducible(&a),
                "perron_root": perron,
                "entropy": perron.map(f64::ln),
                "growth": to_value(&growth),
            });
            let mut text = match perron {
                Some(p) => format!("perron root = {p}\nentropy = {}", p.ln()),
                None => "matrix is reducible: no Perron data".to_string(),
            };
            text.push_str(&format!("\nL from counts = {}, rho = {}", growth.l, growth.rho));
            Ok(Output::ok(v, text))
        }
        Command::MapPeriodic { map, period } => {
            let pts = periodic_points(&load_map(map)?, *period)?;
            let v = json!({"period": period, "count": pts.len(), "points": to_value(&pts)});
            let text = format!("{} points of period {period}\n{}", pts.len(), list(&pts));
            Ok(Output::ok(v, text))
        }
        Command::MapZeta {
            cover,
            order,
            max_period,
            phi_period,
        } => {
            let c = load_cover(cover)?;
            let r = cover_report(&c, *order, *max_period, *phi_period)?;
            let status = if r.all_pass() { 0 } else { 1 };
            Ok(Output {
                json: to_value(&r),
                text: report_text(&r),
                status,
            })
        }
        Command::CoverValidate { cover } => {
            let c = load_cover(cover)?;
            let rep = c.report();
            let mut text = vec![format!("{} rectangles", c.len())];
            for (i, r) in c.rectangles().iter().enumerate() {
                text.push(format!("  R{} = {r}", i + 1));
            }
            text.push(check_text("proper", &rep.proper));
            text.push(check_text("diameter", &rep.diameter));
            text.push(check_text("disjoint interiors", &rep.disjoint_interiors));
            text.push(check_text("covers circle", &rep.covers_circle));
            text.push(check_text("markov", &rep.markov));
            text.push(format!("valid: {}", rep.valid));
            let mut v = to_value(rep);
            v["rectangles"] = to_value(&c.to_json().rectangles);
            Ok(Output {
                json: v,
                text: text.join("\n"),
                status: if rep.valid { 0 } else { 1 },
            })
        }
        Command::CoverMatrices { cover } => {
            let spec = CoverSpectrum::from_cover(&load_cover(cover)?)?;
            let mut text = vec![
                format!("A:\n{}", matrix_text(&spec.a.to_int_matrix())),
                format!("L = {}", spec.l),
            ];
            for lvl in &spec.levels {
                text.push(format!(
                    "I_{} = {}",
                    lvl.r,
                    list(lvl.index.members.iter().map(|m| labels(m)))
                ));
                text.push(format!("B^({}):\n{}", lvl.r, matrix_text(&lvl.b_matrix)));
            }
            Ok(Output::ok(to_value(&spec), text.join("\n")))
        }
        Command::Shadow { map, orbit, beta } => {
            let m = load_map(map)?;
            let raw: OrbitJson = read_json(orbit)?;
            let po = PseudoOrbit::new(&m, raw.points, raw.alpha)?;
            let beta = rational_arg("beta", beta)?;
            let x = shadow(&m, &po, &beta)?;
            let orbit = m.orbit(&x, po.points().len() - 1);
            let dists: Vec<BigRational> = orbit.iter().zip(po.points()).map(|(y, p)| y.dist(p)).collect();
            let v = json!({
                "shadow": to_value(&x),
                "distances": dists.iter().map(format_rational).collect::<Vec<_>>(),
            });
            let text = format!(
                "shadow x = {x}\nd(f^i(x), x_i): {}",
                list(dists.iter().map(format_rational))
            );
            Ok(Output::ok(v, text))
        }
        Command::DivisorSeries { order } => {
            let (zeta, s) = divisor_example_series(*order)?;
            let s_poly = IntPolynomial::new(s.integer_coeffs().expect("checked integral"));
            let v = json!({"zeta": to_value(&zeta), "s": to_value(&s), "render": s_poly.render()});
            let text = format!("zeta: {}\ns(t) = {}", series_text(&zeta), s_poly.render());
            Ok(Output::ok(v, text))
        }
        Command::AuditPhi { cover, x, period } => {
            let c = load_cover(cover)?;
            let spec = CoverSpectrum::from_cover(&c)?;
            let x = CirclePoint::new(rational_arg("x", x)?);
            let a = phi_audit(&c, &spec, &x, *period)?;
            let mut text = vec![format!("x = {}, p = {}", a.x, a.p)];
            for (i, w) in a.codings.iter().enumerate() {
                text.push(format!("  coding {}: ({})", i + 1, list(w.iter().map(|s| s + 1))));
            }
            text.push(format!("mu = ({})", list(a.mu.iter().map(|m| m + 1))));
            text.push(format!("cycles: {}", a.cycles.len()));
            text.push(format!("Phi = {}", a.phi_value));
            let status = if a.phi_value == 1 { 0 } else { 1 };
            Ok(Output {
                json: to_value(&a),
                text: text.join("\n"),
                status,
            })
        }
        Command::Compare { cover, max_period } => {
            let c = load_cover(cover)?;
            let spec = CoverSpectrum::from_cover(&c)?;
            let rows = oracle_comparison(&c, &spec, *max_period)?;
            let mut text = vec!["p  formula  direct".to_string()];
            let mut all = true;
            let mut jrows = Vec::new();
            for (p, f, d) in &rows {
                let ok = f == &BigInt::from(*d);
                all &= ok;
                text.push(format!("{p}  {f}  {d}{}", if ok { "" } else { "  MISMATCH" }));
                jrows.push(json!({"p": p, "formula": crate::exactalg::poly::big_to_json(f), "direct": d, "match": ok}));
            }
            text.push(if all { "all match".into() } else { "mismatch".into() });
            Ok(Output {
                json: json!({"rows": jrows, "match": all}),
                text: text.join("\n"),
                status: if all { 0 } else { 1 },
            })
        }
    }
}
