//! The `mrbad` command line.
//!
//! Exit codes: 0 when a check passes or a value is computed, 1 when a
//! property fails, 2 on usage or input errors.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use mrbad_core::cohomology::calibration::calibrate;
use mrbad_core::cohomology::{Complex, Differentials, Operator, PhiConvention};
use mrbad_core::deformation::{check_deformation, infinitesimal, trivialize_steps};
use mrbad_core::extension::{
    build_extension, classify, closedness_failures, extract_cocycle, section_actions, AbelianExtension,
};
use mrbad_core::structures::{check_bimodule, verify_pair, Bimodule};
use mrbad_core::{fuzz, Field};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

use crate::format::{
    bimodule_to_block, cochain_to_json, cocycle_to_block, extension_to_file, matrix_to_json, read_instance,
    to_pretty_json, Instance,
};
use crate::report::{Report, Status};
use crate::{fixtures, suite, Error};

#[derive(Parser, Debug)]
#[command(name = "mrbad", version, about = "Exact cohomology, deformations and extensions of modified Rota-Baxter algebras with derivations")]
pub struct Cli {
    /// Largest number of scalar entries any tensor may hold.
    #[arg(long, global = true)]
    pub max_entries: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Text)]
    pub format: OutputFormat,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Text,
    Json,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check the pair axioms, and the bimodule axioms when present.
    Verify { file: PathBuf },
    /// Cohomology of the complex with coefficients in the bimodule block
    /// (or the adjoint bimodule).
    Cohomology {
        file: PathBuf,
        #[arg(long)]
        degree: usize,
    },
    /// Check that consecutive differentials compose to zero.
    ComplexCheck {
        file: PathBuf,
        #[arg(long, default_value_t = 3)]
        max_degree: usize,
    },
    /// Check the deformation block order by order.
    DeformCheck { file: PathBuf },
    /// The order-1 coefficients of the deformation block as a 2-cocycle.
    Infinitesimal { file: PathBuf },
    /// Gauge the deformation block to the constant deformation.
    Trivialize {
        file: PathBuf,
        #[arg(long, default_value_t = 3)]
        max_order: usize,
    },
    /// Abelian extensions.
    Extend {
        #[command(subcommand)]
        action: ExtendCommand,
    },
    /// Search random valid instances and run the property suite on each.
    Fuzz {
        #[arg(long, default_value = "fp:5")]
        field: String,
        #[arg(long, default_value_t = 2)]
        dim: usize,
        #[arg(long, default_value_t = 100)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Worker threads; results do not depend on it.
        #[arg(long, default_value_t = 1)]
        workers: usize,
    },
    /// Compare every candidate sign convention for φ on fuzz instances.
    CalibratePhi {
        #[arg(long, default_value = "fp:5")]
        field: String,
        #[arg(long, default_value_t = 2)]
        dim: usize,
        #[arg(long, default_value_t = 40)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Print a named fixture as an instance file.
    Fixture {
        #[arg(value_parser = clap::builder::PossibleValuesParser::new(fixtures::NAMES))]
        name: String,
    },
}

#[derive(Subcommand, Debug)]
pub enum ExtendCommand {
    /// Build `A ⊕ M` from the pair, bimodule and cocycle blocks.
    Build { file: PathBuf },
    /// Read the pair as a total space and extract actions and cocycle.
    Extract { file: PathBuf },
    /// One extension per class in the second cohomology.
    Classify { file: PathBuf },
}

/// What a run printed and how it exited.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Outcome { code, stdout: text, stderr: String::new() }
            } else {
                Outcome { code, stdout: String::new(), stderr: text }
            };
        }
    };
    let previous_cap = mrbad_core::tensor::max_entries();
    if let Some(cap) = cli.max_entries {
        mrbad_core::tensor::set_max_entries(cap);
    }
    let out = dispatch(&cli);
    mrbad_core::tensor::set_max_entries(previous_cap);
    out
}

fn dispatch(cli: &Cli) -> Outcome {
    if let Command::Fixture { name } = &cli.command {
        let file = fixtures::file(name).expect("value parser restricts names");
        return Outcome {
            code: 0,
            stdout: to_pretty_json(&file) + "\n",
            stderr: String::new(),
        };
    }
    match execute(&cli.command) {
        Ok(report) => Outcome {
            code: report.exit_code(),
            stdout: match cli.format {
                OutputFormat::Json => report.to_json(),
                OutputFormat::Text => report.to_text(),
            },
            stderr: String::new(),
        },
        Err(e) => Outcome {
            code: 2,
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
        },
    }
}

pub fn execute(command: &Command) -> Result<Report, Error> {
    match command {
        Command::Verify { file } => verify(&read_instance(file)?),
        Command::Cohomology { file, degree } => cohomology(&read_instance(file)?, *degree),
        Command::ComplexCheck { file, max_degree } => complex_check(&read_instance(file)?, *max_degree),
        Command::DeformCheck { file } => deform_check(&read_instance(file)?),
        Command::Infinitesimal { file } => infinitesimal_cmd(&read_instance(file)?),
        Command::Trivialize { file, max_order } => trivialize_cmd(&read_instance(file)?, *max_order),
        Command::Extend { action } => match action {
            ExtendCommand::Build { file } => extend_build(&read_instance(file)?),
            ExtendCommand::Extract { file } => extend_extract(&read_instance(file)?),
            ExtendCommand::Classify { file } => extend_classify(&read_instance(file)?),
        },
        Command::Fuzz { field, dim, count, seed, workers } => fuzz_cmd(field, *dim, *count, *seed, *workers),
        Command::CalibratePhi { field, dim, count, seed } => calibrate_cmd(field, *dim, *count, *seed),
        Command::Fixture { .. } => unreachable!("handled in run"),
    }
}

/// Pair and bimodule axioms into `report`; true when both hold.
fn validate(report: &mut Report, inst: &Instance, bim: Option<&Bimodule>) -> Result<bool, Error> {
    report.add_check("pair", &verify_pair(&inst.pair));
    if let Some(b) = bim {
        report.add_check("bimodule", &check_bimodule(&inst.pair, b)?);
    }
    Ok(report.passed())
}

fn coefficients_label(inst: &Instance) -> &'static str {
    if inst.bimodule.is_some() {
        "bimodule"
    } else {
        "adjoint"
    }
}

fn verify(inst: &Instance) -> Result<Report, Error> {
    let mut report = Report::new("verify", Status::Pass);
    validate(&mut report, inst, inst.bimodule.as_ref())?;
    report.set("field", inst.pair.field().to_string());
    report.set("dim", inst.pair.dim());
    report.set("kappa", inst.pair.kappa.to_exact_string());
    Ok(report)
}

fn cohomology(inst: &Instance, degree: usize) -> Result<Report, Error> {
    let mut report = Report::new("cohomology", Status::Value);
    let bim = inst.coefficients();
    if !validate(&mut report, inst, Some(&bim))? {
        return Ok(report);
    }
    let c = Complex::new(&inst.pair, &bim)?;
    let res = c.cohomology(degree)?;
    report.set("coefficients", coefficients_label(inst));
    report.set("phi_convention", c.phi_convention().to_string());
    report.set("degree", res.degree);
    report.set("dim_cocycles", res.dim_cocycles);
    report.set("dim_coboundaries", res.dim_coboundaries);
    report.set("dim_h", res.dim_h);
    report.set(
        "representatives",
        res.representatives.iter().map(cochain_to_json).collect::<Vec<_>>(),
    );
    Ok(report)
}

fn complex_check(inst: &Instance, max_degree: usize) -> Result<Report, Error> {
    let mut report = Report::new("complex-check", Status::Pass);
    let bim = inst.coefficients();
    if !validate(&mut report, inst, Some(&bim))? {
        return Ok(report);
    }
    let c = Complex::new(&inst.pair, &bim)?;
    let mut ranks = Vec::new();
    for n in 1..=max_degree {
        let lower = c.matrix(Operator::BigD, n)?;
        let upper = c.matrix(Operator::BigD, n + 1)?;
        let prod = upper.mul(&lower);
        'scan: for r in 0..prod.rows() {
            for col in 0..prod.cols() {
                if !prod.get(r, col).is_zero() {
                    report.witness("complex", "𝔇ⁿ⁺¹∘𝔇ⁿ = 0", &[n, r, col], &[prod.get(r, col).clone()]);
                    break 'scan;
                }
            }
        }
        ranks.push(serde_json::json!({
            "degree": n,
            "rows": lower.rows(),
            "cols": lower.cols(),
            "rank": lower.rank(),
        }));
    }
    report.set("coefficients", coefficients_label(inst));
    report.set("differentials", ranks);
    Ok(report)
}

fn deform_check(inst: &Instance) -> Result<Report, Error> {
    let def = inst.deformation.as_ref().ok_or(Error::Missing("deformation"))?;
    let mut report = Report::new("deform-check", Status::Pass);
    if !validate(&mut report, inst, None)? {
        return Ok(report);
    }
    let res = check_deformation(def)?;
    for (k, r) in res.orders.iter().enumerate() {
        report.add_check(&format!("order {}", k + 1), r);
    }
    report.set("order", def.order());
    if let Some(k) = res.first_failing_order() {
        report.set("first_failing_order", k);
    }
    Ok(report)
}

fn infinitesimal_cmd(inst: &Instance) -> Result<Report, Error> {
    let def = inst.deformation.as_ref().ok_or(Error::Missing("deformation"))?;
    let mut report = Report::new("infinitesimal", Status::Value);
    if !validate(&mut report, inst, None)? {
        return Ok(report);
    }
    match infinitesimal(def) {
        Ok(c) => {
            let complex = Complex::adjoint(&inst.pair);
            report.set("cocycle", cochain_to_json(&c));
            report.set("closed", true);
            report.set("coboundary", complex.solve_d1(&c)?.is_some());
        }
        Err(mrbad_core::Error::Invalid { report: r, .. }) => report.add_check("order 1", &r),
        Err(mrbad_core::Error::NotClosed(_)) => {
            let d = Complex::adjoint(&inst.pair).big_d(&def.coefficient_cochain(1))?;
            report.add_nonzero_cochain("closedness", ["𝔇² f", "𝔇² g", "𝔇² h", "𝔇² k"], &d);
        }
        Err(e) => return Err(e.into()),
    }
    Ok(report)
}

fn trivialize_cmd(inst: &Instance, max_order: usize) -> Result<Report, Error> {
    let def = inst.deformation.as_ref().ok_or(Error::Missing("deformation"))?;
    let mut report = Report::new("trivialize", Status::Pass);
    if !validate(&mut report, inst, None)? {
        return Ok(report);
    }
    let truncated = def.truncate(max_order.min(def.order()))?;
    let checked = check_deformation(&truncated)?;
    for (k, r) in checked.orders.iter().enumerate() {
        report.add_check(&format!("order {}", k + 1), r);
    }
    if !report.passed() {
        return Ok(report);
    }
    report.set("max_order", max_order);
    match trivialize_steps(def, max_order)? {
        Ok(g) => {
            let coeffs: Vec<Value> = (1..=g.order())
                .map(|k| serde_json::to_value(matrix_to_json(&g.coeff(k))).expect("plain data"))
                .collect();
            report.set("gauge", coeffs);
        }
        Err(ob) => {
            report.set("obstructed_order", ob.order);
            report.add_nonzero_cochain(
                &format!("order {}", ob.order),
                ["class of μ coefficient", "class of R coefficient", "class of d coefficient", "unused"],
                &ob.coefficient,
            );
        }
    }
    Ok(report)
}

fn actions_label(bim: &Bimodule) -> &'static str {
    if bim.left.is_zero() && bim.right.is_zero() {
        "trivial"
    } else {
        "general"
    }
}

fn extend_build(inst: &Instance) -> Result<Report, Error> {
    let cocycle = inst.cocycle.as_ref().ok_or(Error::Missing("cocycle"))?;
    let bim = inst.coefficients();
    let mut report = Report::new("extend build", Status::Pass);
    if !validate(&mut report, inst, Some(&bim))? {
        return Ok(report);
    }
    report.set("coefficients", coefficients_label(inst));
    report.set("actions", actions_label(&bim));
    let failures = closedness_failures(&inst.pair, &bim, cocycle)?;
    if !failures.is_empty() {
        let d = Complex::new(&inst.pair, &bim)?.big_d(&cocycle.to_cochain())?;
        report.add_nonzero_cochain(
            "closedness",
            [
                "ext1: δ²Θ = 0",
                "ext2: -δ¹_m ξ - φ²Θ = 0",
                "ext3: δ¹χ + Δ²Θ = 0",
                "ext4: Δ¹ξ - φ¹χ = 0",
            ],
            &d,
        );
        return Ok(report);
    }
    let ext = build_extension(&inst.pair, &bim, cocycle)?;
    report.set("extension", serde_json::to_value(extension_to_file(&ext))?);
    Ok(report)
}

fn extend_extract(inst: &Instance) -> Result<Report, Error> {
    let data = inst.extension.as_ref().ok_or(Error::Missing("extension"))?;
    let mut report = Report::new("extend extract", Status::Value);
    let ext = match inst.abelian_extension() {
        Ok(ext) => ext,
        Err(Error::Core(mrbad_core::Error::Invalid { report: r, .. })) => {
            report.add_check("extension", &r);
            return Ok(report);
        }
        Err(e) => return Err(e),
    };
    let s = data.section.clone().unwrap_or_else(|| ext.canonical_section());
    let bim = section_actions(&ext, &s)?;
    let c = extract_cocycle(&ext, &s)?;
    let complex = Complex::new(&ext.base, &bim)?;
    report.set("section", serde_json::to_value(matrix_to_json(&s))?);
    report.set("base", serde_json::to_value(crate::format::pair_to_file(&ext.base))?);
    report.set("bimodule", serde_json::to_value(bimodule_to_block(&bim))?);
    report.set("actions", actions_label(&bim));
    report.set("cocycle", serde_json::to_value(cocycle_to_block(&c))?);
    report.set("closed", complex.is_cocycle(&c.to_cochain())?);
    report.set("split", complex.solve_d1(&c.to_cochain())?.is_some());
    Ok(report)
}

fn extend_classify(inst: &Instance) -> Result<Report, Error> {
    let bim = inst.coefficients();
    let mut report = Report::new("extend classify", Status::Value);
    if !validate(&mut report, inst, Some(&bim))? {
        return Ok(report);
    }
    let complex = Complex::new(&inst.pair, &bim)?;
    let h2 = complex.cohomology(2)?;
    let classes = classify(&inst.pair, &bim, &h2)?;
    report.set("coefficients", coefficients_label(inst));
    report.set("actions", actions_label(&bim));
    report.set("equivalence", "cocycles differ by 𝔇¹ of the associative complex");
    report.set("dim_h2", h2.dim_h);
    report.set("count", classes.len());
    let listed: Vec<Value> = classes
        .iter()
        .map(|ext: &AbelianExtension| {
            let c = extract_cocycle(ext, &ext.canonical_section()).expect("built extensions have block sections");
            serde_json::json!({
                "cocycle": cocycle_to_block(&c),
                "extension": extension_to_file(ext),
            })
        })
        .collect();
    report.set("extensions", listed);
    if inst.pair.field() == Field::Rationals {
        report.set("scope", "split extension and one per basis class");
    }
    Ok(report)
}

fn parse_fuzz_field(text: &str) -> Result<Field, Error> {
    let f = crate::format::parse_field(text)?;
    if f.order().is_none() {
        return Err(Error::Format("fuzzing needs a prime field".into()));
    }
    Ok(f)
}

fn fuzz_cmd(field: &str, dim: usize, count: usize, seed: u64, workers: usize) -> Result<Report, Error> {
    let f = parse_fuzz_field(field)?;
    if dim == 0 || dim > 2 {
        return Err(Error::Format("fuzzing supports dimensions 1 and 2".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let instances = fuzz::random_instances(&mut rng, f, dim, count)?;
    let workers = workers.max(1);
    let chunk = instances.len().div_ceil(workers).max(1);
    let results: Vec<Result<Report, mrbad_core::Error>> = std::thread::scope(|scope| {
        let handles: Vec<_> = instances
            .chunks(chunk)
            .enumerate()
            .map(|(c, part)| {
                scope.spawn(move || {
                    part.iter()
                        .enumerate()
                        .map(|(k, inst)| suite::run(&format!("instance {}", c * chunk + k), &inst.pair, &inst.bim))
                        .collect::<Vec<_>>()
                })
            })
            .collect();
        handles.into_iter().flat_map(|h| h.join().expect("worker panicked")).collect()
    });
    let mut report = Report::new("fuzz", Status::Pass);
    let mut skipped = 0usize;
    let mut labels = Vec::new();
    for (inst, r) in instances.iter().zip(results) {
        let r = r?;
        if r.results.contains_key("symmetrization_skipped_degrees") {
            skipped += 1;
        }
        report.witnesses.extend(r.witnesses);
        labels.push(Value::from(inst.label.clone()));
    }
    if !report.witnesses.is_empty() {
        report.status = Status::Fail;
    }
    let mut failing = std::collections::BTreeMap::new();
    for w in &report.witnesses {
        *failing.entry(w.identity.clone()).or_insert(0u64) += 1;
    }
    report.set("field", f.to_string());
    report.set("dim", dim);
    report.set("count", instances.len());
    report.set("seed", seed);
    report.set("properties", suite::PROPERTIES.iter().map(|p| Value::from(*p)).collect::<Vec<_>>());
    report.set("failures_by_property", serde_json::to_value(failing)?);
    report.set("symmetrization_skipped", skipped);
    report.set("instances", labels);
    Ok(report)
}

fn calibrate_cmd(field: &str, dim: usize, count: usize, seed: u64) -> Result<Report, Error> {
    let f = parse_fuzz_field(field)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pairs: Vec<_> = fuzz::random_instances(&mut rng, f, dim, count)?
        .into_iter()
        .map(|i| (i.pair, i.bim))
        .collect();
    pairs.extend(fuzz::rational_instances().into_iter().map(|i| (i.pair, i.bim)));
    let cal = calibrate(&pairs, &[1, 2])?;
    let mut report = Report::new("calibrate-phi", Status::Pass);
    report.set("table", cal.to_string());
    match cal.winner() {
        Some(w) => {
            report.set("winner", w.to_string());
            if w != PhiConvention::default() {
                report.witness("calibration", "winner is the shipped default", &[], &[f.one()]);
            }
        }
        None => report.witness("calibration", "a unique convention passes", &[], &[f.one()]),
    }
    Ok(report)
}
