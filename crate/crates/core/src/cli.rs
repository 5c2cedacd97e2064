//! The `tspba` command line: instance files, generators and JSON records.
//!
//! Exit codes: 0 success, 1 bad input or usage, 2 profile insufficient or
//! over the oracle budget, 3 internal invariant violation.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fourcycle::four_cycle_norm;
use crate::instance::{pairs, TransformLedger, Weighting, MAX_VERTICES};
use crate::kernel::{solve, Verdict};
use crate::oracle::{verdict_oracle, EnumerationBudget};
use crate::reduction::{dichotomy, ConstantsProfile, DichotomyResult};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_INSUFFICIENT: i32 = 2;
pub const EXIT_INTERNAL: i32 = 3;

const HEADER: &str = "TSPBA 1";

/// An instance as stored on disk.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InstanceFile {
    pub weighting: Weighting,
    pub k: Option<u64>,
}

impl InstanceFile {
    pub fn parse(text: &str) -> Result<InstanceFile> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty());
        let bad = |line: usize, msg: String| Error::Parse(format!("line {line}: {msg}"));

        let (at, header) = lines
            .next()
            .ok_or_else(|| Error::Parse("empty file".into()))?;
        if header.split_whitespace().collect::<Vec<_>>() != ["TSPBA", "1"] {
            return Err(bad(
                at,
                format!("expected header `{HEADER}`, found `{header}`"),
            ));
        }
        let (at, n_line) = lines
            .next()
            .ok_or_else(|| Error::Parse("missing `n` line".into()))?;
        let n = keyed_value(n_line, "n").map_err(|m| bad(at, m))?;
        let n = usize::try_from(n).map_err(|_| bad(at, format!("bad vertex count {n}")))?;
        if n < 3 {
            return Err(Error::TooSmall { n });
        }
        if n > MAX_VERTICES {
            return Err(Error::TooLarge {
                n,
                max: MAX_VERTICES,
            });
        }
        let mut k = None;
        let mut values = Vec::with_capacity(pairs(n));
        let mut first = true;
        for (at, line) in lines {
            if first && line.starts_with('k') {
                let v = keyed_value(line, "k").map_err(|m| bad(at, m))?;
                k = Some(
                    u64::try_from(v).map_err(|_| bad(at, format!("k must be >= 0, got {v}")))?,
                );
                first = false;
                continue;
            }
            first = false;
            for tok in line.split_whitespace() {
                let v: i64 = tok
                    .parse()
                    .map_err(|_| bad(at, format!("`{tok}` is not a 64-bit integer")))?;
                values.push(v);
            }
        }
        if values.len() != pairs(n) {
            return Err(Error::Parse(format!(
                "expected {} weights for n = {n}, found {}",
                pairs(n),
                values.len()
            )));
        }
        Ok(InstanceFile {
            weighting: Weighting::from_upper_triangle(n, values)?,
            k,
        })
    }

    /// Canonical text: header, `n`, optional `k`, then one row per vertex.
    pub fn render(&self) -> String {
        let w = &self.weighting;
        let n = w.n();
        let mut out = format!("{HEADER}\nn {n}\n");
        if let Some(k) = self.k {
            out.push_str(&format!("k {k}\n"));
        }
        let tri = w.upper_triangle();
        let mut at = 0;
        for row in 0..n - 1 {
            let len = n - 1 - row;
            let cells: Vec<String> = tri[at..at + len].iter().map(|x| x.to_string()).collect();
            out.push_str(&cells.join(" "));
            out.push('\n');
            at += len;
        }
        out
    }

    pub fn read(path: &Path) -> Result<InstanceFile> {
        let text = fs::read_to_string(path)
            .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
        InstanceFile::parse(&text)
    }
}

fn keyed_value(line: &str, key: &str) -> std::result::Result<i128, String> {
    let mut parts = line.split_whitespace();
    match (parts.next(), parts.next(), parts.next()) {
        (Some(k), Some(v), None) if k == key => v
            .parse::<i128>()
            .map_err(|_| format!("`{v}` is not an integer")),
        _ => Err(format!("expected `{key} <int>`, found `{line}`")),
    }
}

/// One JSON object per run, keys in alphabetical order.
#[derive(Debug, Clone, Default, Serialize, PartialEq, Eq)]
pub struct ResultRecord {
    pub alpha: Option<i128>,
    pub cycle: Option<Vec<usize>>,
    pub density_den: i128,
    pub density_num: i128,
    pub norm4: Option<i128>,
    pub profile: String,
    pub timings: BTreeMap<String, u64>,
    pub verdict: Option<String>,
    pub weight: Option<i128>,
}

impl ResultRecord {
    fn for_instance(w: &Weighting, profile: &ConstantsProfile) -> ResultRecord {
        let d = w.density();
        ResultRecord {
            density_num: d.numerator,
            density_den: d.denominator,
            profile: profile.kind.to_string(),
            ..ResultRecord::default()
        }
    }

    fn set_verdict(&mut self, verdict: &Verdict) {
        self.verdict = Some(verdict.label().to_string());
        self.cycle = verdict.cycle().map(|c| c.one_based());
        self.weight = verdict.weight();
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("plain data serializes")
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "tspba",
    version,
    about = "Hamilton cycles below the average weight"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, clap::Args)]
struct ProfileArgs {
    /// Constant set: paper or test.
    #[arg(long, default_value = "paper")]
    profile: String,
    /// Override one constant, e.g. --const matching_threshold=5.
    #[arg(long = "const", value_name = "NAME=VALUE")]
    consts: Vec<String>,
    /// Worker threads; the solver currently runs on one.
    #[arg(long, default_value_t = 1)]
    threads: usize,
    /// Leave the timings object empty so output is byte-stable.
    #[arg(long)]
    no_timings: bool,
}

impl ProfileArgs {
    fn resolve(&self) -> Result<ConstantsProfile> {
        let mut p = ConstantsProfile::by_name(&self.profile)?;
        for c in &self.consts {
            let (name, value) = c
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("--const expects NAME=VALUE, got `{c}`")))?;
            p.set(name.trim(), value)?;
        }
        if self.threads == 0 {
            return Err(Error::Parse("--threads must be at least 1".into()));
        }
        Ok(p)
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
#[value(rename_all = "snake_case")]
enum GenKind {
    Uniform,
    ZeroClass,
    Planted,
    SparseSupport,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Decide whether some Hamilton cycle weighs at most d*n - k.
    Solve {
        path: PathBuf,
        #[arg(long, short, allow_negative_numbers = true)]
        k: Option<i64>,
        #[command(flatten)]
        profile: ProfileArgs,
    },
    /// Print the 4-cycle norm and the density.
    Norm { path: PathBuf },
    /// Run the dichotomy and write the reduced instance.
    Reduce {
        path: PathBuf,
        #[arg(long, short, allow_negative_numbers = true)]
        k: Option<i64>,
        /// Where to write the reduced instance.
        #[arg(long, short)]
        out: PathBuf,
        #[command(flatten)]
        profile: ProfileArgs,
    },
    /// Write a random instance.
    Gen {
        #[arg(long, short)]
        n: usize,
        #[arg(long, value_enum, default_value = "uniform")]
        kind: GenKind,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Smallest weight for uniform and sparse_support.
        #[arg(long, default_value_t = -10, allow_negative_numbers = true)]
        min: i64,
        /// Largest weight for uniform and sparse_support.
        #[arg(long, default_value_t = 10, allow_negative_numbers = true)]
        max: i64,
        /// Planted edge weight.
        #[arg(long, default_value_t = -100, allow_negative_numbers = true)]
        weight: i64,
        /// Number of non-zero edges for sparse_support.
        #[arg(long)]
        count: Option<usize>,
        /// Store this k in the file.
        #[arg(long, short, allow_negative_numbers = true)]
        k: Option<i64>,
        /// Output file; standard output if absent.
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Exact verdict by dynamic programming (small n only).
    Oracle {
        path: PathBuf,
        #[arg(long, short, allow_negative_numbers = true)]
        k: Option<i64>,
        #[arg(long)]
        no_timings: bool,
    },
}

/// Parameters for [`generate`].
#[derive(Debug, Clone, Copy)]
pub enum Generator {
    /// Every weight uniform in `min..=max`.
    Uniform { min: i64, max: i64 },
    /// Random vertex shifts and constant applied to the zero weighting.
    ZeroClass,
    /// Zero except one random edge of the given weight.
    Planted { weight: i64 },
    /// `count` random edges with non-zero weights in `min..=max`.
    SparseSupport { count: usize, min: i64, max: i64 },
}

/// A deterministic random instance.
pub fn generate(n: usize, kind: Generator, seed: u64) -> Result<Weighting> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let m = pairs(n);
    let check_range = |min: i64, max: i64| {
        if min > max {
            Err(Error::Parse(format!("empty weight range {min}..={max}")))
        } else {
            Ok(())
        }
    };
    match kind {
        Generator::Uniform { min, max } => {
            check_range(min, max)?;
            Weighting::from_fn(n, |_, _| rng.gen_range(min..=max))
        }
        Generator::ZeroClass => {
            let mut ledger = TransformLedger::zero(n);
            for l in ledger.lambda.iter_mut() {
                *l = rng.gen_range(-10..=10);
            }
            ledger.constant = rng.gen_range(-10..=10);
            Weighting::zero(n)?.apply_transform(&ledger)
        }
        Generator::Planted { weight } => {
            let mut values = vec![0; m];
            values[rng.gen_range(0..m)] = weight;
            Weighting::from_upper_triangle(n, values)
        }
        Generator::SparseSupport { count, min, max } => {
            check_range(min, max)?;
            if count > m {
                return Err(Error::Parse(format!(
                    "{count} edges requested, K_{n} has {m}"
                )));
            }
            if min == 0 && max == 0 && count > 0 {
                return Err(Error::Parse(
                    "the range 0..=0 has no non-zero weight".into(),
                ));
            }
            let mut values = vec![0; m];
            for i in sample(&mut rng, m, count).iter() {
                values[i] = loop {
                    let x = rng.gen_range(min..=max);
                    if x != 0 {
                        break x;
                    }
                };
            }
            Weighting::from_upper_triangle(n, values)
        }
    }
}

fn nonnegative_k(k: Option<i64>) -> Result<Option<u64>> {
    k.map(|k| u64::try_from(k).map_err(|_| Error::Parse(format!("k must be >= 0, got {k}"))))
        .transpose()
}

fn choose_k(flag: Option<i64>, file: Option<u64>) -> Result<u64> {
    let flag = nonnegative_k(flag)?;
    match (flag, file) {
        (Some(f), Some(g)) if f != g => {
            eprintln!("warning: --k {f} overrides k {g} from the instance file");
            Ok(f)
        }
        (Some(f), _) => Ok(f),
        (None, Some(g)) => Ok(g),
        (None, None) => Err(Error::Parse("no k given (use --k or a `k` line)".into())),
    }
}

fn millis(d: std::time::Duration) -> u64 {
    d.as_millis() as u64
}

fn exit_for(e: &Error) -> i32 {
    match e {
        Error::Parse(_)
        | Error::TooSmall { .. }
        | Error::TooLarge { .. }
        | Error::MissingEdge { .. }
        | Error::DuplicateEdge { .. }
        | Error::SelfLoop { .. } => EXIT_INPUT,
        Error::BudgetExceeded { .. }
        | Error::PreconditionFailed(_)
        | Error::IterationCapExceeded { .. }
        | Error::TooFewOutsideVertices { .. }
        | Error::KernelTooLarge { .. } => EXIT_INSUFFICIENT,
        _ => EXIT_INTERNAL,
    }
}

/// Runs one command; returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let mut stdout = std::io::stdout().lock();
    match execute(cli.command, &mut stdout) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_for(&e)
        }
    }
}

fn emit(out: &mut dyn Write, record: &ResultRecord) -> Result<()> {
    writeln!(out, "{}", record.to_json()).map_err(|e| Error::Parse(format!("stdout: {e}")))
}

fn execute(command: Command, out: &mut dyn Write) -> Result<i32> {
    match command {
        Command::Solve { path, k, profile } => {
            let p = profile.resolve()?;
            let file = InstanceFile::read(&path)?;
            let k = choose_k(k, file.k)?;
            let w = &file.weighting;
            let report = solve(w, k, &p)?;
            let mut record = ResultRecord::for_instance(w, &p);
            record.set_verdict(&report.verdict);
            record.alpha = report.alpha;
            record.norm4 = report.norm4;
            if !profile.no_timings {
                for (name, d) in &report.timings {
                    record.timings.insert(name.to_string(), millis(*d));
                }
            }
            emit(out, &record)?;
            if let Verdict::ProfileInsufficient { reason } = &report.verdict {
                eprintln!("profile insufficient: {reason}");
                return Ok(EXIT_INSUFFICIENT);
            }
            Ok(EXIT_OK)
        }
        Command::Norm { path } => {
            let file = InstanceFile::read(&path)?;
            let w = &file.weighting;
            let mut record = ResultRecord::for_instance(w, &ConstantsProfile::paper());
            record.norm4 = Some(four_cycle_norm(w));
            emit(out, &record)?;
            Ok(EXIT_OK)
        }
        Command::Reduce {
            path,
            k,
            out: target,
            profile,
        } => {
            let p = profile.resolve()?;
            let file = InstanceFile::read(&path)?;
            let k = choose_k(k, file.k)?;
            let w = &file.weighting;
            let started = std::time::Instant::now();
            let result = dichotomy(w, k, &p)?;
            let mut record = ResultRecord::for_instance(w, &p);
            if !profile.no_timings {
                record
                    .timings
                    .insert("dichotomy".into(), millis(started.elapsed()));
            }
            match result {
                DichotomyResult::Certificate { cycle, norm4 } => {
                    record.norm4 = Some(norm4);
                    let weight = cycle.weight(w);
                    record.set_verdict(&Verdict::Yes { cycle, weight });
                }
                DichotomyResult::Reduced {
                    weighting,
                    ledger,
                    norm4,
                    ..
                } => {
                    record.norm4 = Some(norm4);
                    record.alpha = Some(ledger.alpha());
                    let reduced = InstanceFile {
                        weighting,
                        k: Some(k),
                    };
                    fs::write(&target, reduced.render())
                        .map_err(|e| Error::Parse(format!("{}: {e}", target.display())))?;
                }
            }
            emit(out, &record)?;
            Ok(EXIT_OK)
        }
        Command::Gen {
            n,
            kind,
            seed,
            min,
            max,
            weight,
            count,
            k,
            out: target,
        } => {
            if n < 3 {
                return Err(Error::TooSmall { n });
            }
            let generator = match kind {
                GenKind::Uniform => Generator::Uniform { min, max },
                GenKind::ZeroClass => Generator::ZeroClass,
                GenKind::Planted => Generator::Planted { weight },
                GenKind::SparseSupport => Generator::SparseSupport {
                    count: count.unwrap_or(n),
                    min,
                    max,
                },
            };
            let file = InstanceFile {
                weighting: generate(n, generator, seed)?,
                k: nonnegative_k(k)?,
            };
            match target {
                Some(path) => fs::write(&path, file.render())
                    .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?,
                None => out
                    .write_all(file.render().as_bytes())
                    .map_err(|e| Error::Parse(format!("stdout: {e}")))?,
            }
            Ok(EXIT_OK)
        }
        Command::Oracle {
            path,
            k,
            no_timings,
        } => {
            let file = InstanceFile::read(&path)?;
            let k = choose_k(k, file.k)?;
            let w = &file.weighting;
            let started = std::time::Instant::now();
            let verdict = verdict_oracle(w, k, &EnumerationBudget::default())?;
            let mut record = ResultRecord::for_instance(w, &ConstantsProfile::paper());
            record.profile = "oracle".into();
            record.set_verdict(&verdict);
            if !no_timings {
                record
                    .timings
                    .insert("oracle".into(), millis(started.elapsed()));
            }
            emit(out, &record)?;
            Ok(EXIT_OK)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_render_round_trip() {
        let text = "TSPBA 1\nn 4\nk 2\n1 -2 3\n4 5\n-6\n";
        let f = InstanceFile::parse(text).unwrap();
        assert_eq!(f.k, Some(2));
        assert_eq!(f.weighting.weight(0, 1), 1);
        assert_eq!(f.weighting.weight(2, 3), -6);
        assert_eq!(f.render(), text);
    }

    #[test]
    fn parse_tolerates_comments_and_layout() {
        let text = "# instance\nTSPBA 1  # header\nn 4\n1 -2 3 4\n# middle\n5 -6\n";
        let f = InstanceFile::parse(text).unwrap();
        assert_eq!(f.k, None);
        assert_eq!(f.weighting.upper_triangle(), &[1, -2, 3, 4, 5, -6]);
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(
            InstanceFile::parse("TSPBA 2\nn 3\n0 0 0\n"),
            Err(Error::Parse(_))
        ));
        assert!(matches!(
            InstanceFile::parse("TSPBA 1\nn 3\n0 0\n"),
            Err(Error::Parse(_))
        ));
        assert!(matches!(
            InstanceFile::parse("TSPBA 1\nn 3\n0 0 0 0\n"),
            Err(Error::Parse(_))
        ));
        assert!(matches!(
            InstanceFile::parse("TSPBA 1\nn 2\n0\n"),
            Err(Error::TooSmall { n: 2 })
        ));
        assert!(matches!(
            InstanceFile::parse("TSPBA 1\nn 3\nk -1\n0 0 0\n"),
            Err(Error::Parse(_))
        ));
        assert!(matches!(
            InstanceFile::parse("TSPBA 1\nn 3\n0 x 0\n"),
            Err(Error::Parse(_))
        ));
    }

    #[test]
    fn record_keys_are_sorted() {
        let w = Weighting::zero(4).unwrap();
        let mut r = ResultRecord::for_instance(&w, &ConstantsProfile::test());
        r.norm4 = Some(0);
        let json = r.to_json();
        assert_eq!(
            json,
            r#"{"alpha":null,"cycle":null,"density_den":6,"density_num":0,"norm4":0,"profile":"test","timings":{},"verdict":null,"weight":null}"#
        );
    }

    #[test]
    fn generators_are_deterministic() {
        for kind in [
            Generator::Uniform { min: -5, max: 5 },
            Generator::ZeroClass,
            Generator::Planted { weight: -100 },
            Generator::SparseSupport {
                count: 4,
                min: -3,
                max: 3,
            },
        ] {
            assert_eq!(generate(9, kind, 7).unwrap(), generate(9, kind, 7).unwrap());
        }
        let z = generate(8, Generator::ZeroClass, 1).unwrap();
        assert_eq!(four_cycle_norm(&z), 0);
        let s = generate(
            10,
            Generator::SparseSupport {
                count: 6,
                min: -3,
                max: 3,
            },
            2,
        )
        .unwrap();
        assert_eq!(s.edges().filter(|&(_, x)| x != 0).count(), 6);
    }

    #[test]
    fn flag_k_wins() {
        assert_eq!(choose_k(Some(3), Some(1)).unwrap(), 3);
        assert_eq!(choose_k(None, Some(1)).unwrap(), 1);
        assert!(choose_k(None, None).is_err());
        assert!(choose_k(Some(-1), Some(1)).is_err());
    }
}
