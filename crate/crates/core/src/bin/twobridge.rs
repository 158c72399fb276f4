use std::fmt::Display;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use twobridge::bounds::{bounds_report, format_sig6, BoundsReport};
use twobridge::diagram::{analyze, build_conway};
use twobridge::fundgroup::presentation_from_scheme;
use twobridge::report::{
    admissible_cases, build_report, construct, sweep, CaseInput, PresentationStats, ReportError, SWEEP_N_MAX,
    SWEEP_P_MAX,
};
use twobridge::verify::{homology, triangulation_complex, validate_triangulation};
use twobridge::{classify, minimized_expansion, SlopePair};

#[derive(Parser)]
#[command(name = "twobridge", version, about = "Cyclic branched coverings of two-bridge links")]
struct Cli {
    /// Print JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Args)]
struct Case {
    p: u64,
    q: u64,
    /// Covering order.
    n: u64,
    /// Image of the second meridian; required to be a unit mod n for links.
    #[arg(default_value_t = 1)]
    m: u64,
}

impl Case {
    fn input(&self) -> CaseInput {
        CaseInput {
            p: self.p,
            q: self.q,
            n: self.n,
            m: self.m,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Equivalence class, continued fraction, twist number.
    Classify { p: u64, q: u64 },
    /// Conway normal diagram of K(p, q).
    Diagram { p: u64, q: u64 },
    /// Build and validate the triangulation of M_{n,m}(p, q).
    Triangulate {
        #[command(flatten)]
        case: Case,
        /// Also compute H_1.
        #[arg(long)]
        homology: bool,
        /// Triangulation file; stdout (with the summary on stderr) when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Complexity and volume bounds.
    Bounds {
        p: u64,
        q: u64,
        n: u64,
        /// Hyperbolic volume of the link complement.
        #[arg(long)]
        vol: Option<f64>,
    },
    /// Triangular presentation of the fundamental group.
    Presentation {
        #[command(flatten)]
        case: Case,
        /// Presentation file; stdout (with the summary on stderr) when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Full report for one case.
    Report {
        #[command(flatten)]
        case: Case,
    },
    /// Full reports for every admissible case up to the given limits.
    Sweep {
        p_max: u64,
        n_max: u64,
        /// JSON output file; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Allow limits above the defaults.
        #[arg(long)]
        force: bool,
    },
}

enum Failure {
    Input(String),
    Defect(String),
}

impl From<ReportError> for Failure {
    fn from(e: ReportError) -> Failure {
        if e.is_input_error() {
            Failure::Input(e.to_string())
        } else {
            Failure::Defect(e.to_string())
        }
    }
}

fn input_err(e: impl Display) -> Failure {
    Failure::Input(e.to_string())
}

fn io_err(path: &std::path::Path, e: std::io::Error) -> Failure {
    Failure::Input(format!("cannot write {}: {e}", path.display()))
}

fn print_json<T: Serialize>(v: &T) -> Result<(), Failure> {
    let s = serde_json::to_string_pretty(v).map_err(|e| Failure::Defect(e.to_string()))?;
    println!("{s}");
    Ok(())
}

/// Writes `body` to `out`, or to stdout while moving `summary` to stderr.
fn emit(body: &str, out: &Option<PathBuf>, summary: &str, json: bool) -> Result<(), Failure> {
    match out {
        Some(path) => {
            fs::write(path, body).map_err(|e| io_err(path, e))?;
            print!("{summary}");
        }
        None if json => print!("{summary}"),
        None => {
            eprint!("{summary}");
            print!("{body}");
        }
    }
    Ok(())
}

fn cmd_classify(p: u64, q: u64, json: bool) -> Result<(), Failure> {
    let s = SlopePair::new(p, q).map_err(input_err)?;
    let class = classify(s);
    let twist = analyze(s);
    if json {
        #[derive(Serialize)]
        struct Out {
            class: twobridge::LinkClass,
            twist: twobridge::diagram::TwistAnalysis,
        }
        return print_json(&Out { class, twist });
    }
    let kind = if class.is_knot { "knot" } else { "2-component link" };
    let geometry = if class.is_torus { "torus" } else { "hyperbolic" };
    println!("K({p},{q}): {kind}, {geometry}");
    println!("class: {} (orbit {:?})", class.canonical, class.orbit);
    println!("expansion: {:?}", twist.expansion);
    println!("ell: {}", class.ell);
    println!("twist number: {}", twist.twist_number);
    println!("twist reduced: {}", twist.twist_reduced);
    match class.km_form {
        Some(km) => println!("km form: k = {}, m = {}", km.k, km.m),
        None => println!("km form: none"),
    }
    Ok(())
}

fn cmd_diagram(p: u64, q: u64, json: bool) -> Result<(), Failure> {
    let s = SlopePair::new(p, q).map_err(input_err)?;
    let d = build_conway(&minimized_expansion(s));
    if json {
        #[derive(Serialize)]
        struct Out<'a> {
            coefficients: &'a [u64],
            parity: usize,
            crossings: &'a [twobridge::diagram::Crossing],
            regions: &'a [twobridge::diagram::Region],
        }
        return print_json(&Out {
            coefficients: d.continued_fraction().coefficients(),
            parity: d.parity(),
            crossings: d.crossings(),
            regions: d.regions(),
        });
    }
    print!("{}", d.to_text());
    Ok(())
}

fn cmd_triangulate(case: &Case, with_homology: bool, out: &Option<PathBuf>, json: bool) -> Result<(), Failure> {
    let (_, tri) = construct(case.input())?;
    let report = validate_triangulation(&tri);
    let h1 = if with_homology {
        let c = triangulation_complex(&tri);
        Some(homology(&c, 1).map_err(|e| Failure::Defect(e.to_string()))?)
    } else {
        None
    };
    let summary = if json {
        #[derive(Serialize)]
        struct Out<'a> {
            validation: &'a twobridge::verify::ValidationReport,
            homology: Option<&'a twobridge::verify::HomologyResult>,
        }
        let s = serde_json::to_string_pretty(&Out {
            validation: &report,
            homology: h1.as_ref(),
        })
        .map_err(|e| Failure::Defect(e.to_string()))?;
        format!("{s}\n")
    } else {
        let mut s = format!("tetrahedra: {}\n", report.tet_count);
        s += &format!("closed manifold: {}\n", report.closed_manifold);
        s += &format!("orientable: {}\n", report.orientable);
        s += &format!("euler characteristic: {}\n", report.chi);
        if let Some(h) = &h1 {
            s += &format!("H1: {h}\n");
        }
        s
    };
    emit(&tri.to_text(), out, &summary, json)?;
    if !(report.closed_manifold && report.orientable) {
        return Err(Failure::Defect("triangulation failed validation".into()));
    }
    Ok(())
}

fn print_bounds(b: &BoundsReport) {
    let n = b.n;
    println!("upper: {}", b.upper);
    match b.improved_upper {
        Some(u) => println!("improved upper: {u}"),
        None => println!("improved upper: not applicable"),
    }
    match &b.lower {
        Some(l) => {
            for c in &l.candidates {
                let value = c.value.map_or("undefined".to_string(), format_sig6);
                let coeff = c.coefficient(n).map_or("undefined".to_string(), format_sig6);
                let c_name = match c.c {
                    twobridge::bounds::CValue::Four => "4",
                    twobridge::bounds::CValue::TwoSqrtTwo => "2sqrt2",
                };
                let validity = if c.valid { "valid" } else { "not valid" };
                println!(
                    "lower (c = {c_name}, n >= {}): {value} = {coeff} n, {validity}",
                    c.min_n
                );
            }
        }
        None => println!(
            "lower: absent ({})",
            b.lower_absent_reason.as_deref().unwrap_or("not hyperbolic")
        ),
    }
    if let (Some(lo), Some(hi)) = (b.vol_lower, b.vol_upper) {
        println!("volume of complement: {} <= vol < {}", format_sig6(lo), format_sig6(hi));
    }
    if let Some(v) = &b.vol_based_cover_lower {
        let value = v.value.map_or("undefined".to_string(), format_sig6);
        let coeff = v.coefficient(n).map_or("undefined".to_string(), format_sig6);
        println!(
            "volume-based lower: {value} = {coeff} n, coefficient {} as n grows",
            format_sig6(v.factor)
        );
    }
}

fn cmd_bounds(p: u64, q: u64, n: u64, vol: Option<f64>, json: bool) -> Result<(), Failure> {
    let s = SlopePair::new(p, q).map_err(input_err)?;
    let b = bounds_report(s, n, vol).map_err(input_err)?;
    if json {
        return print_json(&b);
    }
    print_bounds(&b);
    Ok(())
}

fn cmd_presentation(case: &Case, out: &Option<PathBuf>, json: bool) -> Result<(), Failure> {
    let (sch, _) = construct(case.input())?;
    let g = presentation_from_scheme(&sch).map_err(ReportError::from)?;
    let stats = PresentationStats::new(&g);
    let summary = if json {
        format!(
            "{}\n",
            serde_json::to_string_pretty(&stats).map_err(|e| Failure::Defect(e.to_string()))?
        )
    } else {
        format!(
            "generators: {}\nrelators: {}\ntriangular relators: {}\ndegenerate triangular relators: {}\nabelianization: {}\n",
            stats.generators, stats.relators, stats.triangular_count, stats.degenerate_count, stats.abelianization
        )
    };
    emit(&g.to_text(), out, &summary, json)
}

fn cmd_report(case: &Case, json: bool) -> Result<(), Failure> {
    let r = build_report(case.input())?;
    if json {
        print_json(&r)?;
    } else {
        let i = r.input;
        println!("M_{{{},{}}}({},{})", i.n, i.m, i.p, i.q);
        println!("expansion: {:?}, ell {}", r.twist.expansion, r.class.ell);
        println!(
            "tetrahedra: {}, closed manifold: {}, orientable: {}",
            r.validation.tet_count, r.validation.closed_manifold, r.validation.orientable
        );
        println!("H1: {}", r.homology);
        println!(
            "triangular relators: {}, abelianization: {}",
            r.presentation.triangular_count, r.presentation.abelianization
        );
        print_bounds(&r.bounds);
        for issue in &r.issues {
            println!("issue: {issue}");
        }
    }
    if r.is_consistent() {
        Ok(())
    } else {
        Err(Failure::Defect(r.issues.join("; ")))
    }
}

fn cmd_sweep(p_max: u64, n_max: u64, out: &Option<PathBuf>, force: bool) -> Result<(), Failure> {
    if !force && (p_max > SWEEP_P_MAX || n_max > SWEEP_N_MAX) {
        return Err(Failure::Input(format!(
            "limits exceed p_max {SWEEP_P_MAX}, n_max {SWEEP_N_MAX}; pass --force to run anyway"
        )));
    }
    let reports = sweep(p_max, n_max)?;
    let body = serde_json::to_string_pretty(&reports).map_err(|e| Failure::Defect(e.to_string()))? + "\n";
    match out {
        Some(path) => fs::write(path, &body).map_err(|e| io_err(path, e))?,
        None => print!("{body}"),
    }
    let bad: Vec<CaseInput> = reports.iter().filter(|r| !r.is_consistent()).map(|r| r.input).collect();
    eprintln!(
        "{} cases, {} consistent",
        admissible_cases(p_max, n_max).len(),
        reports.len() - bad.len()
    );
    if bad.is_empty() {
        Ok(())
    } else {
        Err(Failure::Defect(format!("inconsistent cases: {bad:?}")))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let json = cli.json;
    let result = match &cli.cmd {
        Command::Classify { p, q } => cmd_classify(*p, *q, json),
        Command::Diagram { p, q } => cmd_diagram(*p, *q, json),
        Command::Triangulate { case, homology, out } => cmd_triangulate(case, *homology, out, json),
        Command::Bounds { p, q, n, vol } => cmd_bounds(*p, *q, *n, *vol, json),
        Command::Presentation { case, out } => cmd_presentation(case, out, json),
        Command::Report { case } => cmd_report(case, json),
        Command::Sweep {
            p_max,
            n_max,
            out,
            force,
        } => cmd_sweep(*p_max, *n_max, out, *force),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Defect(msg)) => {
            eprintln!("internal error: {msg}");
            ExitCode::from(3)
        }
    }
}
