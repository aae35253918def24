//! Command-line front end: exact JSON in and out, human summaries on
//! standard error, SVG rendering. Exit codes: 0 proved/success, 2 refuted,
//! 3 inconclusive, 1 usage or input errors.

use clap::{Parser, Subcommand};
use std::io::Read;
use std::process::ExitCode;

use veech2::classify::{
    area_invariant, eq1_sides, eq2_sides, is_completely_periodic, is_hyperperiodic_genus2,
    is_veech_h2, property_x, Verdict,
};
use veech2::cylinder::{build_h11, build_h2, decompose, measure_twists, Decomposition};
use veech2::json;
use veech2::qfield::{QElem, Rat};
use veech2::surface::Surface;
use veech2::svg::export_svg;
use veech2::Vec2Q;

#[derive(Parser)]
#[command(
    name = "veech2",
    about = "Exact arithmetic for genus-2 translation surfaces: invariants, cylinder decompositions, periodicity certificates",
    version
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Build a canonical cylinder surface; prints surface JSON.
    ///
    /// Field elements are triples p,q,r meaning (p + q√d)/r.
    Build {
        /// Family: h2 (two cylinders, one 6π cone) or h11 (three cylinders,
        /// two 4π cones).
        #[arg(long)]
        family: String,
        /// Square-free field discriminant (0 for rational data).
        #[arg(long, default_value_t = 0)]
        d: u64,
        /// Widths: two triples for h2 (w1 w2; w3 = w1+w2 is implied for
        /// h11). Several triples may share one argument; use the attached
        /// form --w='-1,2,2 1,0,2' when a triple starts with a minus sign.
        #[arg(long, num_args = 1.., required = true)]
        w: Vec<String>,
        /// Heights: two triples for h2, three for h11.
        #[arg(long, num_args = 1.., required = true)]
        h: Vec<String>,
        /// Twists: two triples for h2, three for h11.
        #[arg(long, num_args = 1.., required = true)]
        t: Vec<String>,
    },
    /// Validate a surface and print its stratum.
    Validate {
        #[arg(long)]
        input: String,
    },
    /// Print the six exact coordinates of the J-invariant.
    Jinv {
        #[arg(long)]
        input: String,
    },
    /// Decompose a surface in a direction px,py,qx,qy meaning
    /// (px + py√d, qx + qy√d).
    Decompose {
        #[arg(long)]
        input: String,
        #[arg(long, allow_hyphen_values = true)]
        dir: String,
    },
    /// Veech certificate for surfaces with a single 6π cone point.
    Veech {
        #[arg(long)]
        input: String,
        /// Coefficient bound for the homological direction scan.
        #[arg(long, default_value_t = 3)]
        bound: i64,
    },
    /// Complete-periodicity certificate for genus 2.
    Cp {
        #[arg(long)]
        input: String,
        #[arg(long, default_value_t = 3)]
        bound: i64,
    },
    /// Hyperperiodicity scan for genus 2.
    Hyper {
        #[arg(long)]
        input: String,
        #[arg(long, default_value_t = 3)]
        bound: i64,
    },
    /// Property X scan.
    Propx {
        #[arg(long)]
        input: String,
        #[arg(long, default_value_t = 3)]
        bound: i64,
    },
    /// Enumerate two-cylinder solutions with area constant 2(c1 + c2√d),
    /// up to the unit action, within a coordinate box.
    Enumerate {
        #[arg(long)]
        d: u64,
        #[arg(long, allow_hyphen_values = true)]
        c1: i64,
        #[arg(long, allow_hyphen_values = true)]
        c2: i64,
        #[arg(long = "box")]
        box_bound: i64,
        /// Use the brute-force oracle instead of the structured search.
        #[arg(long)]
        oracle: bool,
        /// Print only the solution count within bounds.
        #[arg(long)]
        count_only: bool,
    },
    /// Render a surface (optionally with a decomposition) as SVG.
    ExportSvg {
        #[arg(long)]
        input: String,
        /// Optional direction px,py,qx,qy to decompose and shade.
        #[arg(long, allow_hyphen_values = true)]
        dir: Option<String>,
    },
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn read_input(path: &str) -> Result<String, String> {
    if path == "-" {
        let mut buf = String::new();
        std::io::stdin()
            .read_to_string(&mut buf)
            .map_err(|e| format!("reading stdin: {e}"))?;
        Ok(buf)
    } else {
        std::fs::read_to_string(path).map_err(|e| format!("reading {path}: {e}"))
    }
}

fn load_surface(path: &str) -> Result<Surface, String> {
    let text = read_input(path)?;
    json::surface_from_str(&text).map_err(|e| e.to_string())
}

/// VEECH2_CAP=N overrides the tracing cap with N × the total coordinate
/// extent of the input surface.
fn cap_override(s: &Surface) -> Result<Option<QElem>, String> {
    let Ok(val) = std::env::var("VEECH2_CAP") else {
        return Ok(None);
    };
    let mult: u64 = val
        .parse()
        .map_err(|_| format!("VEECH2_CAP must be a positive integer, got {val:?}"))?;
    let mut acc = QElem::zero();
    for (pi, p) in s.polygons.iter().enumerate() {
        for e in 0..p.len() {
            let v = s.polygons[pi].edge_vec(e);
            let ax = if v.x.is_negative() { -v.x } else { v.x };
            let ay = if v.y.is_negative() { -v.y } else { v.y };
            acc = acc + ax + ay;
        }
    }
    Ok(Some(acc * &Rat::from_integer(mult.into())))
}

fn parse_triples(items: &[String], d: u64, want: usize, what: &str) -> Result<Vec<QElem>, String> {
    let flat: Vec<&str> = items
        .iter()
        .flat_map(|s| s.split([' ', ';']))
        .filter(|s| !s.is_empty())
        .collect();
    if flat.len() != want {
        return Err(format!("expected {want} {what} triples, got {}", flat.len()));
    }
    flat.iter()
        .map(|s| json::qelem_from_triple_str(s, d).map_err(|e| e.to_string()))
        .collect()
}

fn verdict_exit(v: &Verdict) -> ExitCode {
    match v {
        Verdict::Proved => ExitCode::from(0),
        Verdict::RefutedWithWitness(_) => ExitCode::from(2),
        Verdict::InconclusiveAtBound => ExitCode::from(3),
    }
}

fn print_verdict(name: &str, v: &Verdict) -> ExitCode {
    println!("{}", json::to_canonical_string(&json::verdict_to_value(v)));
    let status = match v {
        Verdict::Proved => "proved",
        Verdict::RefutedWithWitness(_) => "refuted",
        Verdict::InconclusiveAtBound => "inconclusive at bound",
    };
    eprintln!("{name}: {status}");
    verdict_exit(v)
}

fn run() -> Result<ExitCode, String> {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return Ok(ExitCode::from(code));
        }
    };
    match cli.cmd {
        Cmd::Build { family, d, w, h, t } => {
            let (surface, _basis) = match family.as_str() {
                "h2" => {
                    let w = parse_triples(&w, d, 2, "width")?;
                    let h = parse_triples(&h, d, 2, "height")?;
                    let t = parse_triples(&t, d, 2, "twist")?;
                    build_h2(&w[0], &w[1], &h[0], &h[1], &t[0], &t[1])
                        .map_err(|e| e.to_string())?
                }
                "h11" => {
                    let w = parse_triples(&w, d, 2, "width")?;
                    let h = parse_triples(&h, d, 3, "height")?;
                    let t = parse_triples(&t, d, 3, "twist")?;
                    build_h11(&w[0], &w[1], &h[0], &h[1], &h[2], &t[0], &t[1], &t[2])
                        .map_err(|e| e.to_string())?
                }
                other => return Err(format!("unknown family {other:?} (use h2 or h11)")),
            };
            let info = surface.validate().map_err(|e| e.to_string())?;
            println!("{}", json::surface_to_string(&surface));
            eprintln!(
                "built genus {} surface, zero orders {:?}, area ≈ {:.6}",
                info.genus,
                info.zero_orders,
                surface.area().to_f64()
            );
            Ok(ExitCode::from(0))
        }
        Cmd::Validate { input } => {
            let s = load_surface(&input)?;
            match s.validate() {
                Ok(info) => {
                    println!(
                        "{}",
                        json::to_canonical_string(&serde_json::json!({
                            "genus": info.genus,
                            "zero_orders": info.zero_orders,
                        }))
                    );
                    eprintln!("valid: genus {}, zero orders {:?}", info.genus, info.zero_orders);
                    Ok(ExitCode::from(0))
                }
                Err(e) => {
                    println!(
                        "{}",
                        json::to_canonical_string(&serde_json::json!({
                            "error": e.to_string(),
                        }))
                    );
                    eprintln!("invalid: {e}");
                    Ok(ExitCode::from(2))
                }
            }
        }
        Cmd::Jinv { input } => {
            let s = load_surface(&input)?;
            s.validate().map_err(|e| e.to_string())?;
            let j = veech2::jinvariant::j_surface(&s);
            println!("{}", json::to_canonical_string(&json::jinvariant_to_value(&j)));
            eprintln!(
                "jxx = {}, jyy = {}, jxy = ({}, {}, {}, {})",
                j.jxx.c, j.jyy.c, j.jxy.c1, j.jxy.c2, j.jxy.c3, j.jxy.c4
            );
            Ok(ExitCode::from(0))
        }
        Cmd::Decompose { input, dir } => {
            let s = load_surface(&input)?;
            s.validate().map_err(|e| e.to_string())?;
            let v = json::direction_from_str(&dir, s.d).map_err(|e| e.to_string())?;
            let cap = cap_override(&s)?;
            match decompose(&s, &v, cap.as_ref()).map_err(|e| e.to_string())? {
                Decomposition::Periodic(dec) => {
                    println!(
                        "{}",
                        json::to_canonical_string(&json::decomposition_to_value(s.d, &dec))
                    );
                    let twists = measure_twists(&dec, &dec.twist_direction)
                        .map_err(|e| e.to_string())?;
                    eprintln!(
                        "periodic: {} cylinder(s), twists {:?}",
                        dec.cylinders.len(),
                        twists.iter().map(|t| t.to_f64()).collect::<Vec<_>>()
                    );
                    Ok(ExitCode::from(0))
                }
                Decomposition::Inconclusive { traced, cap } => {
                    println!(
                        "{}",
                        json::to_canonical_string(&serde_json::json!({
                            "status": "inconclusive",
                            "traced": json::qelem_to_value(&traced),
                            "cap": json::qelem_to_value(&cap),
                        }))
                    );
                    eprintln!("inconclusive at cap ≈ {:.3}", cap.to_f64());
                    Ok(ExitCode::from(3))
                }
                Decomposition::NotPeriodic { witness } => {
                    println!(
                        "{}",
                        json::to_canonical_string(&serde_json::json!({
                            "status": "not-periodic",
                            "witness": [
                                json::qelem_to_value(&witness.x),
                                json::qelem_to_value(&witness.y),
                            ],
                        }))
                    );
                    Ok(ExitCode::from(2))
                }
                _ => Err("unknown decomposition outcome".to_string()),
            }
        }
        Cmd::Veech { input, bound } => {
            let s = load_surface(&input)?;
            let cap = cap_override(&s)?;
            let v = is_veech_h2(&s, cap.as_ref(), bound).map_err(|e| e.to_string())?;
            if let Ok(area) = area_invariant(&s) {
                eprintln!("normalized area: {area}");
            }
            print_certificate_details(&s, cap.as_ref(), &v);
            Ok(print_verdict("veech", &v))
        }
        Cmd::Cp { input, bound } => {
            let s = load_surface(&input)?;
            let cap = cap_override(&s)?;
            let v = is_completely_periodic(&s, cap.as_ref(), bound).map_err(|e| e.to_string())?;
            Ok(print_verdict("completely periodic", &v))
        }
        Cmd::Hyper { input, bound } => {
            let s = load_surface(&input)?;
            let v = is_hyperperiodic_genus2(&s, bound).map_err(|e| e.to_string())?;
            Ok(print_verdict("hyperperiodic", &v))
        }
        Cmd::Propx { input, bound } => {
            let s = load_surface(&input)?;
            let v = property_x(&s, bound).map_err(|e| e.to_string())?;
            Ok(print_verdict("property X", &v))
        }
        Cmd::Enumerate { d, c1, c2, box_bound, oracle, count_only } => {
            let c1 = Rat::from_integer(c1.into());
            let c2 = Rat::from_integer(c2.into());
            let set = if oracle {
                veech2::enumerate::oracle_h2(&c1, &c2, d, box_bound)
            } else {
                veech2::enumerate::solve_h2(&c1, &c2, d, box_bound)
            }
            .map_err(|e| e.to_string())?;
            if count_only {
                println!("{}", set.count());
            } else {
                println!(
                    "{}",
                    json::to_canonical_string(&json::solution_set_to_value(&set))
                );
            }
            eprintln!(
                "{} solution class(es) within box {}",
                set.count(),
                box_bound
            );
            Ok(ExitCode::from(0))
        }
        Cmd::ExportSvg { input, dir } => {
            let s = load_surface(&input)?;
            s.validate().map_err(|e| e.to_string())?;
            let dec = match dir {
                None => None,
                Some(dir) => {
                    let v = json::direction_from_str(&dir, s.d).map_err(|e| e.to_string())?;
                    let cap = cap_override(&s)?;
                    match decompose(&s, &v, cap.as_ref()).map_err(|e| e.to_string())? {
                        Decomposition::Periodic(dec) => Some(dec),
                        _ => {
                            eprintln!("direction not decomposed; rendering plain surface");
                            None
                        }
                    }
                }
            };
            print!("{}", export_svg(&s, dec.as_ref()));
            Ok(ExitCode::from(0))
        }
    }
}

/// For proved two-cylinder certificates, show the exact equation sides on
/// standard error.
fn print_certificate_details(s: &Surface, cap: Option<&QElem>, v: &Verdict) {
    if !matches!(v, Verdict::Proved) {
        return;
    }
    let horizontal = Vec2Q::new(QElem::one(), QElem::zero());
    if let Ok(Decomposition::Periodic(dec)) = decompose(s, &horizontal, cap) {
        if let Some((c1, c2, (a1, a2))) = veech2::classify::h2_certificate_data(&dec) {
            let (l1, r1) = eq1_sides(&c1, &c2);
            let (l2, r2) = eq2_sides(&c1, &c2);
            eprintln!("horizontal certificate: eq1 {l1} = {r1}, eq2 {l2} = {r2}, c = ({a1}, {a2})");
        }
    }
}
