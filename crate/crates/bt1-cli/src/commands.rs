//! The single-curve commands: decompose, invariants, realize, verify,
//! axioms.

use crate::{CliError, CurveArgs, Format};
use bt1::duality::{self, PolarizedReport};
use bt1::fermat::{self, CurveSpec, CurveVariant, FermatError, Genus};
use bt1::kraft;
use bt1::permdata::PermDataFile;
use bt1::realize::{self, RealizationPlan, RealizeError, RealizeOptions, VerifyMode};
use bt1::semilinear::{field_make, verify_bt1_axioms};
use bt1::words::{BT1Multiset, Word};
use clap::ValueEnum;
use serde::Serialize;
use serde_json::json;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum VerifyModeArg {
    Witness,
    Full,
}

impl From<VerifyModeArg> for VerifyMode {
    fn from(arg: VerifyModeArg) -> VerifyMode {
        match arg {
            VerifyModeArg::Witness => VerifyMode::Witness,
            VerifyModeArg::Full => VerifyMode::Full,
        }
    }
}

/// Parameter-shaped errors exit 2; enumeration and verification failures
/// exit 1.
fn fermat_error(e: FermatError) -> CliError {
    match e {
        FermatError::NotPrime { .. }
        | FermatError::NotCoprime { .. }
        | FermatError::DegreeTooSmall { .. }
        | FermatError::RequiresCharTwo { .. }
        | FermatError::EvenR { .. }
        | FermatError::NotDivisible { .. } => CliError::Usage(e.to_string()),
        other => CliError::Failure(other.to_string()),
    }
}

fn realize_error(e: RealizeError) -> CliError {
    match e {
        RealizeError::EmptyTarget
        | RealizeError::NotPrime(_)
        | RealizeError::NotSelfDual(_)
        | RealizeError::TooLarge(_) => CliError::Usage(e.to_string()),
        RealizeError::Fermat(inner) => fermat_error(inner),
        other => CliError::Failure(other.to_string()),
    }
}

impl CurveArgs {
    pub fn to_spec(&self) -> Result<CurveSpec, CliError> {
        let variant = match (self.quotient_d, self.fermat_d, self.ordinary_r, self.fiber_d, self.fiber_r) {
            (Some(d), None, None, None, None) => CurveVariant::FermatQuotient { d },
            (None, Some(d), None, None, None) => CurveVariant::Fermat { d },
            (None, None, Some(r), None, None) => CurveVariant::OrdinaryAs { r },
            (None, None, None, Some(d), Some(r)) => CurveVariant::FiberProduct { d, r },
            _ => {
                return Err(CliError::Usage(
                    "select exactly one curve: --quotient-d, --fermat-d, --ordinary-r, or --fiber-d with --fiber-r"
                        .to_string(),
                ))
            }
        };
        CurveSpec::new(self.p, variant).map_err(fermat_error)
    }
}

fn print_report<T: Serialize>(report: &T, format: Format) -> Result<(), CliError> {
    match format {
        Format::Json => {
            println!("{}", serde_json::to_string(report).expect("serializable"));
            Ok(())
        }
        Format::Table => {
            let value = serde_json::to_value(report).expect("serializable");
            print_table(&value, 0);
            Ok(())
        }
        Format::Csv => Err(CliError::Usage("csv output is only available for decompose and sweep".to_string())),
    }
}

fn print_table(value: &serde_json::Value, indent: usize) {
    let pad = "  ".repeat(indent);
    match value {
        serde_json::Value::Object(map) => {
            for (k, v) in map {
                match v {
                    serde_json::Value::Object(_) | serde_json::Value::Array(_) => {
                        println!("{pad}{k}:");
                        print_table(v, indent + 1);
                    }
                    _ => println!("{pad}{k}: {v}"),
                }
            }
        }
        serde_json::Value::Array(items) => {
            for item in items {
                println!("{pad}-");
                print_table(item, indent + 1);
            }
        }
        other => println!("{pad}{other}"),
    }
}

#[derive(Debug, Serialize)]
struct DecomposeReport {
    p: u64,
    curve: CurveSpec,
    genus: Genus,
    multiset: BT1Multiset,
    p_rank: u64,
    a_number: u64,
    self_dual: bool,
    partial: bool,
    num_orbits: u64,
}

fn decompose_report(curve: &CurveSpec, budget: u64) -> Result<DecomposeReport, CliError> {
    let dec = fermat::decompose(curve, budget).map_err(fermat_error)?;
    Ok(DecomposeReport {
        p: curve.p,
        curve: curve.clone(),
        genus: fermat::genus_of(curve),
        p_rank: kraft::p_rank(&dec.expanded),
        a_number: kraft::a_number(&dec.expanded),
        self_dual: duality::is_self_dual(&dec.expanded),
        partial: dec.partial,
        num_orbits: dec.num_orbits,
        multiset: dec.expanded,
    })
}

pub fn decompose(args: &CurveArgs, budget: u64, format: Format) -> Result<(), CliError> {
    let curve = args.to_spec()?;
    let report = decompose_report(&curve, budget)?;
    if format == Format::Csv {
        let mut writer = csv::Writer::from_writer(std::io::stdout());
        writer
            .write_record(crate::sweep::CSV_HEADER)
            .and_then(|()| writer.write_record(crate::sweep::csv_row(&report.curve, budget).as_slice()))
            .and_then(|()| writer.flush().map_err(csv::Error::from))
            .map_err(|e| CliError::Failure(e.to_string()))?;
        return Ok(());
    }
    print_report(&report, format)
}

#[derive(Debug, Serialize)]
struct InvariantsReport {
    #[serde(flatten)]
    base: DecomposeReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    polarized: Option<PolarizedReport>,
}

pub fn invariants(args: &CurveArgs, budget: u64, format: Format) -> Result<(), CliError> {
    let curve = args.to_spec()?;
    let base = decompose_report(&curve, budget)?;
    let polarized = duality::polarized_factorization(&base.multiset)
        .ok()
        .map(PolarizedReport::new);
    print_report(&InvariantsReport { base, polarized }, format)
}

pub fn realize(
    p: u64,
    target_json: &str,
    polarized: bool,
    verify: Option<VerifyModeArg>,
    enum_budget: u64,
    search_budget: u64,
    format: Format,
) -> Result<(), CliError> {
    let target: BT1Multiset = serde_json::from_str(target_json)
        .map_err(|e| CliError::Usage(format!("bad --target: {e}")))?;
    let options = RealizeOptions { enum_budget, search_budget };
    let plan = if polarized {
        realize::realize_polarized(p, &target, &options)
    } else {
        realize::realize(p, &target, &options)
    }
    .map_err(realize_error)?;

    let mut output = serde_json::to_value(&plan).expect("serializable");
    if let Some(mode) = verify {
        let report = realize::verify_plan(&plan, mode.into(), &options).map_err(realize_error)?;
        output["verification"] = serde_json::to_value(&report).expect("serializable");
    }
    print_report(&output, format)
}

pub fn verify(plan_path: &str, mode: VerifyModeArg, enum_budget: u64, format: Format) -> Result<(), CliError> {
    let text = std::fs::read_to_string(plan_path)
        .map_err(|e| CliError::Usage(format!("cannot read {plan_path}: {e}")))?;
    let plan: RealizationPlan =
        serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("bad plan file: {e}")))?;
    let options = RealizeOptions { enum_budget, ..Default::default() };
    let report = realize::verify_plan(&plan, mode.into(), &options).map_err(realize_error)?;
    print_report(&report, format)
}

pub fn axioms(p: u64, m: usize, word: Option<&str>, permdata: Option<&str>, format: Format) -> Result<(), CliError> {
    let module = match (word, permdata) {
        (Some(text), None) => {
            let w = Word::parse(text).map_err(|e| CliError::Usage(format!("bad --word: {e}")))?;
            kraft::module_from_word(p, &w).map_err(|e| CliError::Usage(e.to_string()))?
        }
        (None, Some(path)) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::Usage(format!("cannot read {path}: {e}")))?;
            let file: PermDataFile =
                serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("bad permdata file: {e}")))?;
            let data = file.build().map_err(|e| CliError::Usage(e.to_string()))?;
            kraft::module_from_permdata(p, &data)
        }
        _ => return Err(CliError::Usage("pass exactly one of --word or --permdata".to_string())),
    };
    let field = field_make(p, m).map_err(|e| CliError::Usage(e.to_string()))?;
    let (f_map, v_map) = kraft::matrices_of(&module, &field).map_err(|e| CliError::Usage(e.to_string()))?;
    let report = verify_bt1_axioms(&f_map, &v_map, &field).map_err(|e| CliError::Failure(e.to_string()))?;
    let is_bt1 = report.is_bt1();
    let mut output = serde_json::to_value(&report).expect("serializable");
    output["is_bt1"] = json!(is_bt1);
    output["field"] = json!(format!("GF({p}^{m})"));
    print_report(&output, format)?;
    if is_bt1 {
        Ok(())
    } else {
        Err(CliError::Failure("BT1 axioms do not hold".to_string()))
    }
}
