//! `kassembly`: command-line front end to the `ratk` engine.
//!
//! Exit status is 0 when every reported identity holds, 1 when one fails and
//! 2 for invalid input or a refused computation.

mod table;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use ratk::bar_oracle::compare_with_closed_form;
use ratk::hochschild::{degree_report_tsv, kernel_series_closed_form};
use ratk::kassembly::{
    k_periodic_series, k_series, unit_map_comparison, verify_all, PeriodicVariant,
};
use ratk::series::parse_rational_function;
use ratk::{AlgebraSpec, HHModel, Preset, TruncatedSeries};
use serde::Serialize;

use crate::table::Table;

#[derive(Parser)]
#[command(
    name = "kassembly",
    version,
    about = "Exact rational K-theory Poincaré series"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    format: FormatArgs,
}

#[derive(Args)]
#[group(multiple = false)]
struct FormatArgs {
    /// Tab-separated output.
    #[arg(long, global = true)]
    tsv: bool,
    /// JSON output.
    #[arg(long, global = true)]
    json: bool,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Format {
    Table,
    Tsv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Expand a rational function in t, e.g. "1 + (t^3+2t^5)/(1-t^4)".
    Series {
        expr: String,
        #[arg(long)]
        cutoff: usize,
    },
    /// Per-degree dimensions of HH, ker(B), im(B) and de Rham homology.
    Hh {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        cutoff: u32,
    },
    /// ker(B) dimensions against the closed form (1 + t h(t))/(1 + t).
    Kernel {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        cutoff: u32,
    },
    /// K-theory Poincaré series of a preset spectrum.
    Ktheory {
        #[command(flatten)]
        spectrum: SpectrumArgs,
        #[arg(long)]
        cutoff: usize,
        /// Periodic spectrum via the localization sequence.
        #[arg(long)]
        periodic: bool,
        /// Conjugation fixed points of the periodic series (implies --periodic).
        #[arg(long)]
        fixed_points: bool,
    },
    /// Source and target series of the relative unit map.
    UnitMap {
        #[command(flatten)]
        spectrum: SpectrumArgs,
        #[arg(long)]
        cutoff: usize,
    },
    /// Bar complex of Q[x] against the closed-form model.
    OracleCheck {
        #[arg(long)]
        generator_degree: u32,
        #[arg(long)]
        max_degree: u32,
    },
    /// Run the full identity suite.
    Verify {
        #[arg(long, default_value_t = 12)]
        cutoff: usize,
    },
}

#[derive(Args)]
struct SpectrumArgs {
    /// ku, ko, ell, mu, mso or msp.
    #[arg(long)]
    preset: String,
    /// Odd prime for the ell preset.
    #[arg(long)]
    prime: Option<u32>,
}

impl SpectrumArgs {
    fn preset(&self) -> Result<Preset, Failure> {
        Preset::from_name(&self.preset, self.prime).map_err(Failure::input)
    }
}

#[derive(Args)]
#[group(skip)]
struct Source {
    #[arg(long, required_unless_present = "algebra", conflicts_with = "algebra")]
    preset: Option<String>,
    /// JSON file `{"generators": [{"name": "x", "degree": 2}, ...]}`.
    #[arg(long)]
    algebra: Option<PathBuf>,
    #[arg(long, requires = "preset")]
    prime: Option<u32>,
}

impl Source {
    /// Model realized through `through`.
    fn model(&self, through: u32) -> Result<HHModel, Failure> {
        if let Some(path) = &self.algebra {
            let text = fs::read_to_string(path)
                .map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
            let spec: AlgebraSpec = serde_json::from_str(&text)
                .map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
            let alg = spec.build().map_err(Failure::input)?;
            return HHModel::new(alg).map_err(Failure::input);
        }
        let name = self.preset.as_deref().expect("clap enforces one source");
        let preset = Preset::from_name(name, self.prime).map_err(Failure::input)?;
        preset
            .descriptor()
            .hh_model(through)
            .map_err(Failure::input)
    }
}

/// Exit status with a message for standard error.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn input(e: impl ToString) -> Self {
        Self {
            code: 2,
            message: e.to_string(),
        }
    }
}

type Outcome = Result<bool, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let format = match (cli.format.tsv, cli.format.json) {
        (true, _) => Format::Tsv,
        (_, true) => Format::Json,
        _ => Format::Table,
    };
    match run(cli.command, format) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(f) => {
            eprintln!("kassembly: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(command: Command, format: Format) -> Outcome {
    match command {
        Command::Series { expr, cutoff } => {
            let rf = parse_rational_function(&expr).map_err(Failure::input)?;
            let s = rf.expand(cutoff);
            match format {
                Format::Table => println!("{s}"),
                Format::Tsv => print!("{}", s.to_tsv()),
                Format::Json => print_json(&s),
            }
            Ok(true)
        }
        Command::Hh { source, cutoff } => {
            let model = source.model(cutoff + 1)?;
            let rows = model.degree_report(cutoff).map_err(Failure::input)?;
            match format {
                Format::Table => {
                    let mut t = Table::new(["degree", "hh", "kernel", "image", "rank", "de_rham"]);
                    for r in &rows {
                        t.row([
                            r.degree as usize,
                            r.hh,
                            r.kernel,
                            r.image,
                            r.rank,
                            r.de_rham,
                        ]);
                    }
                    print!("{t}");
                }
                Format::Tsv => print!("{}", degree_report_tsv(&rows)),
                Format::Json => print_json(&rows),
            }
            Ok(true)
        }
        Command::Kernel { source, cutoff } => kernel(&source, cutoff, format),
        Command::Ktheory {
            spectrum,
            cutoff,
            periodic,
            fixed_points,
        } => ktheory(&spectrum, cutoff, periodic, fixed_points, format),
        Command::UnitMap { spectrum, cutoff } => {
            let r = unit_map_comparison(&spectrum.preset()?.descriptor(), cutoff)
                .map_err(Failure::input)?;
            match format {
                Format::Json => print_json(&r),
                _ => {
                    print_series_columns(format, &[("bsl1", &r.bsl1), ("relative", &r.relative)]);
                    if format == Format::Table {
                        match (r.first_difference, r.ranks_at_difference) {
                            (Some(d), Some((a, b))) => {
                                println!("first difference: t^{d} ({a} vs {b})")
                            }
                            _ => println!("first difference: none through t^{cutoff}"),
                        }
                    }
                }
            }
            Ok(true)
        }
        Command::OracleCheck {
            generator_degree,
            max_degree,
        } => oracle_check(generator_degree, max_degree, format),
        Command::Verify { cutoff } => {
            let report = verify_all(cutoff);
            match format {
                Format::Table => println!("{report}"),
                Format::Tsv => {
                    println!("label\tstatus\tdescription\tdetail");
                    for c in &report.checks {
                        let status = if c.passed { "PASS" } else { "FAIL" };
                        println!("{}\t{status}\t{}\t{}", c.label, c.description, c.detail);
                    }
                }
                Format::Json => print_json(&report),
            }
            Ok(report.passed())
        }
    }
}

fn kernel(source: &Source, cutoff: u32, format: Format) -> Outcome {
    let model = source.model(cutoff + 1)?;
    let c = cutoff as usize;
    let kernel = model.kernel_series(c).map_err(Failure::input)?;
    let closed = kernel_series_closed_form(&model.hh_series(c).map_err(Failure::input)?);
    let ok = kernel == closed;
    match format {
        Format::Json => {
            #[derive(Serialize)]
            struct KernelReport<'a> {
                kernel: &'a TruncatedSeries,
                closed_form: &'a TruncatedSeries,
                matches: bool,
            }
            print_json(&KernelReport {
                kernel: &kernel,
                closed_form: &closed,
                matches: ok,
            });
        }
        _ => {
            print_series_columns(format, &[("kernel", &kernel), ("closed_form", &closed)]);
            if format == Format::Table {
                println!("{}", if ok { "PASS" } else { "FAIL" });
            }
        }
    }
    Ok(ok)
}

fn ktheory(
    spectrum: &SpectrumArgs,
    cutoff: usize,
    periodic: bool,
    fixed_points: bool,
    format: Format,
) -> Outcome {
    let d = spectrum.preset()?.descriptor();
    if periodic || fixed_points {
        let variant = if fixed_points {
            PeriodicVariant::FixedPoints
        } else {
            PeriodicVariant::Localization
        };
        let r = k_periodic_series(&d, cutoff, variant).map_err(Failure::input)?;
        match format {
            Format::Json => print_json(&r),
            _ => {
                print_series_columns(
                    format,
                    &[
                        ("connective", &r.connective),
                        ("delooped_base", &r.delooped_base),
                        ("total", &r.series),
                    ],
                );
                if format == Format::Table {
                    println!("{}: {}", r.spectrum, r.series);
                    if let Some(a) = &r.annotation {
                        println!("note: {a}");
                    }
                }
            }
        }
        return Ok(true);
    }
    let r = k_series(&d, cutoff).map_err(Failure::input)?;
    match format {
        Format::Json => print_json(&r),
        _ => {
            print_series_columns(
                format,
                &[
                    ("base", &r.base),
                    ("relative", &r.relative),
                    ("total", &r.total),
                ],
            );
            if format == Format::Table {
                println!("K({}): {}", r.spectrum, r.total);
                for n in &r.notes {
                    println!("{}: {}", n.component, n.source);
                }
            }
        }
    }
    Ok(true)
}

fn oracle_check(generator_degree: u32, max_degree: u32, format: Format) -> Outcome {
    if generator_degree < 2 || generator_degree % 2 != 0 {
        return Err(Failure::input(format!(
            "generator degree must be even and at least 2, got {generator_degree}"
        )));
    }
    let cmp = compare_with_closed_form(&[generator_degree], max_degree).map_err(Failure::input)?;
    let ok = cmp.passed();
    match format {
        Format::Json => print_json(&cmp),
        _ => {
            let mut t = Table::new([
                "degree",
                "oracle_dim",
                "closed_dim",
                "oracle_B_rank",
                "closed_B_rank",
                "status",
            ]);
            for r in &cmp.rows {
                t.row([
                    r.degree.to_string(),
                    r.oracle_dim.to_string(),
                    r.closed_dim.to_string(),
                    r.oracle_b_rank.to_string(),
                    r.closed_b_rank.to_string(),
                    (if r.pass { "PASS" } else { "FAIL" }).to_string(),
                ]);
            }
            if format == Format::Tsv {
                print!("{}", t.tsv());
            } else {
                print!("{t}");
                let id = &cmp.identities;
                println!(
                    "b^2 = 0: {}  B^2 = 0: {}  bB + Bb = 0: {}  B well defined: {}",
                    id.b_squared_zero, id.connes_squared_zero, id.anticommute, cmp.well_defined
                );
                println!("{}", if ok { "PASS" } else { "FAIL" });
            }
        }
    }
    Ok(ok)
}

/// One row per degree, one column per series.
fn print_series_columns(format: Format, columns: &[(&str, &TruncatedSeries)]) {
    let mut headers = vec!["degree".to_string()];
    headers.extend(columns.iter().map(|(n, _)| n.to_string()));
    let mut t = Table::new(headers);
    let cutoff = columns.iter().map(|(_, s)| s.cutoff()).min().unwrap_or(0);
    for d in 0..=cutoff {
        let mut row = vec![d.to_string()];
        row.extend(columns.iter().map(|(_, s)| s.coeff(d).to_string()));
        t.row(row);
    }
    if format == Format::Tsv {
        print!("{}", t.tsv());
    } else {
        print!("{t}");
    }
}

fn print_json<T: Serialize + ?Sized>(value: &T) {
    println!(
        "{}",
        serde_json::to_string_pretty(value).expect("reports serialize")
    );
}
