mod fail;
mod gridfile;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use eii_codes::epc::{
    build_h2, build_hg, distance_bound, distance_bound_terms, distance_bound_unbounded, epc_params, is_optimal, EpcParams,
};
use eii_codes::errmode::{decode_errors_erasures, ErrorDecodeStatus};
use eii_codes::gf::{build_field, build_mp_field, default_field, Gf2Poly};
use eii_codes::layout::{balanced_layout, encode_layout, iterative_decode, LayoutStyle, ParityLayout};
use eii_codes::sim::{birthday_expected, birthday_monte_carlo, correction_probability, mean_erasures_to_failure, DecoderModel};
use eii_codes::{DecodeStatus, EiiCode, Field, FieldContext, Profile};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use fail::{Failure, EXIT_RESIDUAL};
use gridfile::GridFile;

#[derive(Parser)]
#[command(name = "eii", version, about = "EII and extended product array codes over GF(2^b)")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Dimension, distance, transpose and bound of a code.
    Props {
        #[arg(long)]
        code: String,
        /// Also check that this field can carry the code.
        #[arg(long)]
        field: Option<String>,
        #[arg(long)]
        json: bool,
    },
    /// Encode data symbols into a grid file.
    Encode {
        #[arg(long)]
        code: String,
        #[arg(long)]
        field: Option<String>,
        #[arg(long, value_enum, default_value = "tail")]
        layout: LayoutArg,
        /// JSON array of hex data symbols, row-major.
        #[arg(long, conflicts_with = "seed")]
        data: Option<PathBuf>,
        /// Fill the data cells from this seed instead.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Decode a grid file whose erased cells are null.
    Decode {
        /// Defaults to the code recorded in the grid file.
        #[arg(long)]
        code: Option<String>,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, value_enum, default_value = "rows")]
        mode: Mode,
        #[arg(long, default_value_t = 64)]
        max_passes: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Where to write the JSON report; stdout when absent.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Parity cell coordinates of a layout.
    Layout {
        #[arg(long)]
        code: String,
        #[arg(long, value_enum, default_value = "tail")]
        layout: LayoutArg,
        /// Print a P/. picture instead of JSON.
        #[arg(long)]
        text: bool,
    },
    /// Distance bound table for EP(m,v;n,h;g) over a range of g.
    Bound {
        /// "m,v;n,h" with numbers, or with letters for m and n to drop the
        /// size limits.
        #[arg(long)]
        epc: String,
        /// "a..b" (inclusive) or a single value.
        #[arg(long, default_value = "0..13")]
        g: String,
        #[arg(long)]
        csv: bool,
    },
    /// Monte Carlo reliability estimates.
    Simulate {
        #[arg(long)]
        code: Option<String>,
        #[arg(long, value_enum, default_value = "iterative")]
        model: ModelArg,
        /// "groups,n,h,d" for the ideal LRC model.
        #[arg(long)]
        lrc: Option<String>,
        #[arg(long, value_enum, default_value = "mean")]
        metric: Metric,
        /// Erasure count for the probability metric.
        #[arg(long)]
        erasures: Option<usize>,
        /// Number of bins for the birthday metric.
        #[arg(long)]
        bins: Option<usize>,
        #[arg(long, default_value_t = 100_000)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Parity-check matrix as JSON.
    Matrix {
        #[arg(long, conflicts_with_all = ["h2", "hg"])]
        code: Option<String>,
        /// "m,n": product code plus the two α^±j rows.
        #[arg(long)]
        h2: Option<String>,
        /// "m,n,g": product code plus g power rows.
        #[arg(long)]
        hg: Option<String>,
        #[arg(long)]
        field: Option<String>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum LayoutArg {
    Tail,
    Balanced,
}

impl From<LayoutArg> for LayoutStyle {
    fn from(l: LayoutArg) -> Self {
        match l {
            LayoutArg::Tail => LayoutStyle::Tail,
            LayoutArg::Balanced => LayoutStyle::Balanced,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Rows,
    Cols,
    Iterative,
    Errors,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModelArg {
    Rows,
    Cols,
    Iterative,
    IdealLrc,
}

#[derive(Clone, Copy, ValueEnum)]
enum Metric {
    Mean,
    Probability,
    Birthday,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(f) => {
            eprintln!("eii: {f}");
            f.exit_code()
        }
    }
}

fn run(command: Command) -> Result<ExitCode, Failure> {
    match command {
        Command::Props { code, field, json } => props(&code, field.as_deref(), json),
        Command::Encode {
            code,
            field,
            layout,
            data,
            seed,
            out,
        } => encode(&code, field.as_deref(), layout.into(), data.as_deref(), seed, out.as_deref()),
        Command::Decode {
            code,
            input,
            mode,
            max_passes,
            out,
            report,
        } => decode(code.as_deref(), &input, mode, max_passes, out.as_deref(), report.as_deref()),
        Command::Layout { code, layout, text } => layout_cmd(&code, layout.into(), text),
        Command::Bound { epc, g, csv } => bound(&epc, &g, csv),
        Command::Simulate {
            code,
            model,
            lrc,
            metric,
            erasures,
            bins,
            trials,
            seed,
            out,
        } => simulate(code.as_deref(), model, lrc.as_deref(), metric, erasures, bins, trials, seed, out.as_deref()),
        Command::Matrix { code, h2, hg, field } => matrix(code.as_deref(), h2.as_deref(), hg.as_deref(), field.as_deref()),
    }
}

fn parse_profile(text: &str) -> Result<Profile, Failure> {
    text.parse::<Profile>().map_err(Failure::from)
}

/// `b`, `b:modulus-hex` or `mp:p`.
fn parse_field(text: &str) -> Result<FieldContext, Failure> {
    if let Some(p) = text.strip_prefix("mp:") {
        let p = p.parse().map_err(|_| Failure::usage(format!("bad prime in {text:?}")))?;
        return Ok(build_mp_field(p)?);
    }
    let (deg, modulus) = match text.split_once(':') {
        Some((d, m)) => (d, Some(m)),
        None => (text, None),
    };
    let degree: usize = deg
        .parse()
        .map_err(|_| Failure::usage(format!("bad field degree in {text:?}")))?;
    if degree == 0 || degree > 4096 {
        return Err(Failure::usage(format!("field degree {degree} out of range")));
    }
    match modulus {
        None => Ok(default_field(degree)),
        Some(hex) => {
            let m = Gf2Poly::from_hex(hex).map_err(|e| Failure::usage(format!("modulus {hex:?}: {e}")))?;
            Ok(build_field(degree, &m)?)
        }
    }
}

/// GF(256) unless the code needs a longer generator order.
fn default_field_for(p: &Profile) -> FieldContext {
    let need = p.m().max(p.n()) as u64;
    let mut degree = 8;
    while (1u64 << degree) - 1 < need {
        degree += 1;
    }
    default_field(degree)
}

fn build_code(profile: Profile, field: Option<&str>) -> Result<EiiCode<FieldContext>, Failure> {
    let f = match field {
        Some(s) => parse_field(s)?,
        None => default_field_for(&profile),
    };
    Ok(EiiCode::new(Arc::new(f), profile)?)
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(path) => std::fs::write(path, format!("{text}\n"))?,
        None => {
            let mut stdout = std::io::stdout().lock();
            writeln!(stdout, "{text}")?;
        }
    }
    Ok(())
}

fn pretty(v: &impl serde::Serialize) -> String {
    serde_json::to_string_pretty(v).expect("serializable")
}

fn props(code: &str, field: Option<&str>, as_json: bool) -> Result<ExitCode, Failure> {
    let p = parse_profile(code)?;
    if let Some(f) = field {
        build_code(p.clone(), Some(f))?;
    }
    let params = epc_params(&p);
    let bound = distance_bound(&params).ok();
    let optimal = is_optimal(&p).ok();
    let t = p.transpose();
    if as_json {
        let v = json!({
            "code": p.to_string(),
            "m": p.m(),
            "n": p.n(),
            "dimension": p.dimension(),
            "min_distance": p.min_distance(),
            "transpose": t.to_string(),
            "epc": params.to_string(),
            "distance_bound": bound,
            "optimal": optimal,
        });
        emit(None, &pretty(&v))?;
    } else {
        let mut s = String::new();
        s += &format!("code           {p}\n");
        s += &format!("length         {}\n", p.m() * p.n());
        s += &format!("k              {}\n", p.dimension());
        s += &format!("d              {}\n", p.min_distance());
        s += &format!("transpose      {t}\n");
        s += &format!("epc            {params}\n");
        match bound {
            Some(b) => s += &format!("distance bound {b}\noptimal        {}", optimal == Some(true)),
            None => s += "distance bound n/a",
        }
        emit(None, &s)?;
    }
    Ok(ExitCode::SUCCESS)
}

fn encode(
    code: &str,
    field: Option<&str>,
    style: LayoutStyle,
    data: Option<&Path>,
    seed: Option<u64>,
    out: Option<&Path>,
) -> Result<ExitCode, Failure> {
    let c = build_code(parse_profile(code)?, field)?;
    let f = &**c.field();
    let symbols: Vec<Gf2Poly> = match (data, seed) {
        (Some(path), _) => {
            let text = std::fs::read_to_string(path)?;
            let hex: Vec<String> =
                serde_json::from_str(&text).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
            hex.iter()
                .map(|h| f.from_hex(h).map_err(|e| Failure::usage(format!("data symbol {h:?}: {e}"))))
                .collect::<Result<_, _>>()?
        }
        (None, Some(s)) => {
            let mut rng = ChaCha8Rng::seed_from_u64(s);
            (0..c.dimension()).map(|_| f.random(&mut rng)).collect()
        }
        (None, None) => return Err(Failure::usage("encode needs --data or --seed")),
    };
    let grid = encode_layout(&c, &symbols, style)?;
    let file = GridFile::from_grid(f, &grid, Some(c.profile().to_string()));
    emit(out, &pretty(&file))?;
    Ok(ExitCode::SUCCESS)
}

fn decode(
    code: Option<&str>,
    input: &Path,
    mode: Mode,
    max_passes: usize,
    out: Option<&Path>,
    report_path: Option<&Path>,
) -> Result<ExitCode, Failure> {
    let file = GridFile::read(input)?;
    let field = file.field.build()?;
    let code_text = code
        .map(str::to_string)
        .or_else(|| file.code.clone())
        .ok_or_else(|| Failure::usage("decode needs --code or a grid file that records its code"))?;
    let profile = parse_profile(&code_text)?;
    if (profile.m(), profile.n()) != (file.m, file.n) {
        return Err(Failure::usage(format!(
            "{profile} is {} × {} but the grid is {} × {}",
            profile.m(),
            profile.n(),
            file.m,
            file.n
        )));
    }
    let c = EiiCode::new(Arc::new(field.clone()), profile)?;
    let grid = file.to_grid(&field)?;

    let (decoded, report, ok) = match mode {
        Mode::Rows | Mode::Cols | Mode::Iterative => {
            let r = match mode {
                Mode::Rows => c.decode_rows(&grid),
                Mode::Cols => {
                    let mut r = c.transpose().decode_rows(&grid.transpose());
                    r.grid = r.grid.transpose();
                    r.residual = r.grid.erased_cells();
                    r
                }
                _ => iterative_decode(&c, &grid, max_passes),
            };
            let ok = r.status == DecodeStatus::FullyCorrected;
            let report = json!({
                "mode": mode_name(mode),
                "status": r.status,
                "corrected_lines": r.corrected_rows,
                "residual": r.residual,
                "passes": r.passes,
            });
            (r.grid, report, ok)
        }
        Mode::Errors => {
            let r = decode_errors_erasures(&c, &grid);
            let ok = r.status == ErrorDecodeStatus::Corrected;
            let report = json!({
                "mode": "errors",
                "status": r.status,
                "rows": r.rows,
                "columns": r.columns,
                "fallback_used": r.fallback_used,
                "rotations": r.rotations,
            });
            (r.grid, report, ok)
        }
    };
    let out_file = GridFile::from_grid(&field, &decoded, Some(c.profile().to_string()));
    if let Some(path) = out {
        std::fs::write(path, pretty(&out_file) + "\n")?;
    }
    emit(report_path, &pretty(&report))?;
    Ok(if ok { ExitCode::SUCCESS } else { ExitCode::from(EXIT_RESIDUAL) })
}

fn mode_name(mode: Mode) -> &'static str {
    match mode {
        Mode::Rows => "rows",
        Mode::Cols => "cols",
        Mode::Iterative => "iterative",
        Mode::Errors => "errors",
    }
}

fn layout_cmd(code: &str, style: LayoutStyle, text: bool) -> Result<ExitCode, Failure> {
    let p = parse_profile(code)?;
    let layout = match style {
        LayoutStyle::Tail => ParityLayout::tail(&p),
        LayoutStyle::Balanced => balanced_layout(&p),
    };
    if text {
        let mut pic = vec![vec!['.'; p.n()]; p.m()];
        for &(i, j) in &layout.positions {
            pic[i][j] = 'P';
        }
        let lines: Vec<String> = pic.into_iter().map(|r| r.into_iter().collect()).collect();
        emit(None, &lines.join("\n"))?;
    } else {
        emit(None, &pretty(&layout))?;
    }
    Ok(ExitCode::SUCCESS)
}

fn parse_range(text: &str) -> Result<std::ops::RangeInclusive<usize>, Failure> {
    let bad = || Failure::usage(format!("bad range {text:?}"));
    let num = |s: &str| s.trim().parse::<usize>().map_err(|_| bad());
    match text.split_once("..") {
        Some((a, b)) => {
            let b = b.strip_prefix('=').unwrap_or(b);
            let (a, b) = (num(a)?, num(b)?);
            if a > b {
                return Err(bad());
            }
            Ok(a..=b)
        }
        None => {
            let a = num(text)?;
            Ok(a..=a)
        }
    }
}

fn bound(epc: &str, g: &str, csv: bool) -> Result<ExitCode, Failure> {
    let bad = || Failure::usage(format!("expected \"m,v;n,h\", got {epc:?}"));
    let (left, right) = epc.split_once(';').ok_or_else(bad)?;
    let (m, v) = left.split_once(',').ok_or_else(bad)?;
    let (n, h) = right.split_once(',').ok_or_else(bad)?;
    let v: usize = v.trim().parse().map_err(|_| bad())?;
    let h: usize = h.trim().parse().map_err(|_| bad())?;
    let sizes = match (m.trim().parse::<usize>(), n.trim().parse::<usize>()) {
        (Ok(m), Ok(n)) => Some((m, n)),
        (Err(_), Err(_)) => None,
        _ => return Err(bad()),
    };
    let mut rows = Vec::new();
    for g in parse_range(g)? {
        let (d, a) = match sizes {
            Some((m, n)) => {
                let params = EpcParams { m, n, v, h, g };
                match distance_bound_terms(&params) {
                    Ok(terms) => {
                        let best = terms.iter().min_by_key(|t| t.d).expect("non-empty");
                        (Some(best.d), Some(best.a))
                    }
                    Err(eii_codes::Error::EmptyRange) => (None, None),
                    Err(e) => return Err(e.into()),
                }
            }
            None => (Some(distance_bound_unbounded(v, h, g)), None),
        };
        rows.push((g, d, a));
    }
    let cell = |x: Option<usize>| x.map_or("-".to_string(), |v| v.to_string());
    let mut s = String::new();
    if csv {
        s += "g,d,a\n";
        for (g, d, a) in &rows {
            s += &format!("{g},{},{}\n", cell(*d), cell(*a));
        }
    } else {
        s += "g   d   a\n";
        for (g, d, a) in &rows {
            s += &format!("{g:<3} {:<3} {}\n", cell(*d), cell(*a));
        }
    }
    emit(None, s.trim_end())?;
    Ok(ExitCode::SUCCESS)
}

#[allow(clippy::too_many_arguments)]
fn simulate(
    code: Option<&str>,
    model: ModelArg,
    lrc: Option<&str>,
    metric: Metric,
    erasures: Option<usize>,
    bins: Option<usize>,
    trials: u64,
    seed: u64,
    out: Option<&Path>,
) -> Result<ExitCode, Failure> {
    if trials == 0 {
        return Err(Failure::usage("--trials must be positive"));
    }
    if let Metric::Birthday = metric {
        let m = bins.ok_or_else(|| Failure::usage("the birthday metric needs --bins"))?;
        if m == 0 {
            return Err(Failure::usage("--bins must be positive"));
        }
        let mut v = serde_json::to_value(birthday_monte_carlo(m, trials, seed)).expect("serializable");
        v["expected"] = json!(birthday_expected(m));
        emit(out, &pretty(&v))?;
        return Ok(ExitCode::SUCCESS);
    }
    let model = match model {
        ModelArg::IdealLrc => {
            let spec = lrc.ok_or_else(|| Failure::usage("the ideal-lrc model needs --lrc groups,n,h,d"))?;
            let parts: Vec<usize> = spec
                .split(',')
                .map(|s| s.trim().parse())
                .collect::<Result<_, _>>()
                .map_err(|_| Failure::usage(format!("bad --lrc {spec:?}")))?;
            let [groups, n, h, d] = parts[..] else {
                return Err(Failure::usage(format!("bad --lrc {spec:?}")));
            };
            DecoderModel::ideal_lrc(groups, n, h, d)
        }
        other => {
            let p = parse_profile(code.ok_or_else(|| Failure::usage("this model needs --code"))?)?;
            match other {
                ModelArg::Rows => DecoderModel::RowsOnly(p),
                ModelArg::Cols => DecoderModel::ColsOnly(p),
                _ => DecoderModel::Iterative(p),
            }
        }
    };
    let (m, n) = model.shape();
    if m > eii_codes::sim::MAX_SIDE || n > eii_codes::sim::MAX_SIDE {
        return Err(Failure {
            code: fail::EXIT_CAPABILITY,
            message: format!("simulation grids are limited to {0} × {0}", eii_codes::sim::MAX_SIDE),
        });
    }
    let result = match metric {
        Metric::Mean => mean_erasures_to_failure(&model, trials, seed),
        _ => {
            let k = erasures.ok_or_else(|| Failure::usage("the probability metric needs --erasures"))?;
            if k > m * n {
                return Err(Failure::usage(format!("{k} erasures do not fit in {m} × {n}")));
            }
            correction_probability(&model, k, trials, seed)
        }
    };
    emit(out, &pretty(&result))?;
    Ok(ExitCode::SUCCESS)
}

fn pair(text: &str, count: usize) -> Result<Vec<usize>, Failure> {
    let v: Vec<usize> = text
        .split(',')
        .map(|s| s.trim().parse())
        .collect::<Result<_, _>>()
        .map_err(|_| Failure::usage(format!("bad list {text:?}")))?;
    if v.len() != count {
        return Err(Failure::usage(format!("expected {count} numbers in {text:?}")));
    }
    Ok(v)
}

fn matrix(code: Option<&str>, h2: Option<&str>, hg: Option<&str>, field: Option<&str>) -> Result<ExitCode, Failure> {
    let text = match (code, h2, hg) {
        (Some(c), None, None) => build_code(parse_profile(c)?, field)?.parity_check_matrix().to_json(),
        (None, Some(s), None) => {
            let v = pair(s, 2)?;
            let f = parse_field(field.unwrap_or("8"))?;
            build_h2(Arc::new(f), v[0], v[1])?.to_json()
        }
        (None, None, Some(s)) => {
            let v = pair(s, 3)?;
            let f = match field {
                Some(f) => parse_field(f)?,
                None => eii_codes::epc::hg_field(v[0], v[1], v[2], true),
            };
            build_hg(Arc::new(f), v[0], v[1], v[2])?.to_json()
        }
        _ => return Err(Failure::usage("matrix needs exactly one of --code, --h2, --hg")),
    };
    emit(None, &text)?;
    Ok(ExitCode::SUCCESS)
}
