use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::{json, Value};

use ghz_twins::ghz::{basis_state, full_basis, ket_notation, twin_pairs};
use ghz_twins::mixture::{
    classify, scan_binary, scan_ternary, Classification, RegionClass, CLASS_TOL,
};
use ghz_twins::pauli::PauliString;
use ghz_twins::qmath::{fidelity_with_pure, purity, DensityMatrix, QuantumState};
use ghz_twins::render::{binary_svg, scan_csv, ternary_svg};
use ghz_twins::sim::{
    self, dark_correct, fqst, lin_i2_from_counts, read_jsonl, weighted_mix_counts, write_jsonl,
    CountRecord, Estimate, NoiseModel,
};
use ghz_twins::witness::{
    best_k_report, measurement_budget, report_adapted, MeasurementTask, WitnessReport,
};
use ghz_twins::GhzLabel;

use crate::args::{
    Adapt, BasisArgs, Format, MixArgs, PhaseArgs, Shots, SimulateArgs, Task, WitnessArgs,
};
use crate::error::CliError;
use crate::output::{with_suffix, Outputs};

/// Nominal coincidences per setting behind `--shots inf`.
pub const ANALYTIC_SHOTS: u64 = 1_000_000;

pub struct Ctx {
    pub seed: u64,
    pub out: Option<PathBuf>,
    pub quiet: bool,
}

impl Ctx {
    fn note(&self, msg: &str) {
        if !self.quiet {
            eprintln!("{msg}");
        }
    }

    /// Sends a single document to `--out` or stdout.
    fn emit(&self, outputs: &mut Outputs, text: String) -> Option<PathBuf> {
        match &self.out {
            Some(p) => {
                outputs.file(p.clone(), text);
                Some(with_suffix(p, ".manifest.json"))
            }
            None => {
                outputs.print(&text);
                None
            }
        }
    }
}

fn pretty(v: &impl Serialize) -> String {
    serde_json::to_string_pretty(v).expect("plain data") + "\n"
}

fn state_entry(label: GhzLabel) -> Value {
    let psi = basis_state(label);
    json!({
        "label": label,
        "ket": ket_notation(&psi),
        "state": psi.to_json_value(),
    })
}

pub fn basis(ctx: &Ctx, args: BasisArgs) -> Result<(), CliError> {
    let text = match (args.label, args.format) {
        (Some(l), Format::Ket) => format!("{}\n", ket_notation(&basis_state(l))),
        (Some(l), Format::Json) => pretty(&state_entry(l)),
        (None, Format::Ket) => {
            let mut s = String::new();
            for (l, psi) in full_basis() {
                s += &format!("{l}  {}\n", ket_notation(&psi));
            }
            for (a, b) in twin_pairs() {
                s += &format!("twins  {a} {b}\n");
            }
            s
        }
        (None, Format::Json) => pretty(&json!({
            "states": GhzLabel::all().map(state_entry).collect::<Vec<_>>(),
            "twins": twin_pairs(),
        })),
    };
    let mut outputs = Outputs::new();
    let manifest = ctx.emit(&mut outputs, text);
    outputs.finish("basis", ctx.seed, manifest, ctx.quiet)
}

/// Reads a state file; a wrapping `{"state": ...}` object is accepted.
pub fn read_state(path: &Path) -> Result<DensityMatrix, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
    let mut v: Value = serde_json::from_str(&text)
        .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    if let Some(inner) = v.get_mut("state") {
        v = inner.take();
    }
    let state = QuantumState::from_json_value(v)
        .map_err(|e| CliError::from(e).prefixed(&path.display().to_string()))?;
    Ok(state.density())
}

impl CliError {
    fn prefixed(self, p: &str) -> Self {
        match self {
            CliError::Usage(m) => CliError::Usage(format!("{p}: {m}")),
            CliError::Numeric(m) => CliError::Numeric(format!("{p}: {m}")),
        }
    }
}

pub fn witness(ctx: &Ctx, args: WitnessArgs) -> Result<(), CliError> {
    let rho = match (&args.state_file, args.label) {
        (Some(p), _) => read_state(p)?,
        (None, Some(l)) => DensityMatrix::from_pure(&basis_state(l)),
        (None, None) => return Err(CliError::Usage("give a state file or --label".into())),
    };
    if rho.dim() != 16 {
        return Err(CliError::Usage(format!(
            "expected a four-qubit state, got dimension {}",
            rho.dim()
        )));
    }
    let report = match args.adapt {
        Adapt::Auto => best_k_report(&rho, args.variant)?,
        Adapt::To(l) => report_adapted(&rho, l, args.variant)?,
    };
    let mut outputs = Outputs::new();
    let manifest = ctx.emit(&mut outputs, pretty(&report));
    outputs.finish("witness", ctx.seed, manifest, ctx.quiet)
}

pub fn phase_diagram(ctx: &Ctx, args: PhaseArgs) -> Result<(), CliError> {
    let prefix = ctx
        .out
        .clone()
        .ok_or_else(|| CliError::Usage("phase-diagram needs --out PREFIX".into()))?;
    let r = args.resolution;
    let (points, svg) = match (args.pair.as_deref(), args.triple.as_deref()) {
        (Some(&[a, b]), _) => {
            let pts = scan_binary(a, b, r)?;
            let svg = binary_svg(&pts, r, a, b);
            (pts, svg)
        }
        (_, Some(&[a, b, c])) => {
            let pts = scan_ternary(a, b, c, r)?;
            let svg = ternary_svg(&pts, r, (a, b, c));
            (pts, svg)
        }
        _ => return Err(CliError::Usage("give --pair A B or --triple A B C".into())),
    };
    let mut outputs = Outputs::new();
    outputs.file(with_suffix(&prefix, ".csv"), scan_csv(&points));
    outputs.file(with_suffix(&prefix, ".svg"), svg);
    ctx.note(&format!("classified {} nodes", points.len()));
    outputs.finish(
        "phase-diagram",
        ctx.seed,
        Some(with_suffix(&prefix, ".manifest.json")),
        ctx.quiet,
    )
}

#[derive(Serialize)]
struct SimWitness {
    task: &'static str,
    label: GhzLabel,
    noise: NoiseModel,
    budget: usize,
    lin_i2: Estimate,
    lin_i2_dark_corrected: Option<Estimate>,
}

#[derive(Serialize)]
struct TomographyReport {
    purity: f64,
    fidelity: Option<f64>,
    class: RegionClass,
    witnesses: WitnessReport,
    min_pt_eig: f64,
    state: Value,
}

fn tomography_report(
    records: &[CountRecord],
    target: Option<GhzLabel>,
) -> Result<TomographyReport, CliError> {
    let rho = fqst(records)?;
    let Classification {
        class,
        witnesses,
        ppt,
    } = classify(&rho)?;
    Ok(TomographyReport {
        purity: purity(&rho),
        fidelity: target
            .map(|l| fidelity_with_pure(&rho, &basis_state(l)))
            .transpose()?,
        class,
        witnesses,
        min_pt_eig: ppt.min_eigenvalue(),
        state: rho.to_json_value(),
    })
}

#[derive(Serialize)]
struct SimTomography {
    task: &'static str,
    label: GhzLabel,
    noise: NoiseModel,
    budget: usize,
    dark_corrected: bool,
    #[serde(flatten)]
    tomography: TomographyReport,
}

pub fn simulate(ctx: &Ctx, args: SimulateArgs) -> Result<(), CliError> {
    let (shots, analytic) = match args.shots {
        Shots::Analytic => (ANALYTIC_SHOTS, true),
        Shots::Finite(n) => (n, false),
    };
    let noise = NoiseModel {
        white_noise_weight: args.noise,
        dark_rate: args.dark,
        shots_per_setting: shots,
        analytic,
        rng_seed: ctx.seed,
    };
    noise.validate()?;
    let (task, settings) = match args.task {
        Task::Witness => (MeasurementTask::Witness, sim::witness_settings()),
        Task::Fqst => (MeasurementTask::Fqst, PauliString::all_settings()),
    };
    let budget = measurement_budget(task);
    ctx.note(&format!("measurement budget: {budget}"));
    let records = sim::simulate(args.label, &settings, &noise)?;
    let corrected: Vec<CountRecord> = records.iter().map(dark_correct).collect();
    let report = match args.task {
        Task::Witness => pretty(&SimWitness {
            task: "witness",
            label: args.label,
            noise,
            budget,
            lin_i2: lin_i2_from_counts(&records, args.label)?,
            lin_i2_dark_corrected: (args.dark > 0.0)
                .then(|| lin_i2_from_counts(&corrected, args.label))
                .transpose()?,
        }),
        Task::Fqst => {
            let use_corrected = args.dark > 0.0;
            pretty(&SimTomography {
                task: "fqst",
                label: args.label,
                noise,
                budget,
                dark_corrected: use_corrected,
                tomography: tomography_report(
                    if use_corrected { &corrected } else { &records },
                    Some(args.label),
                )?,
            })
        }
    };
    let mut outputs = Outputs::new();
    let manifest = match &ctx.out {
        Some(p) => {
            outputs.file(with_suffix(p, ".counts.jsonl"), write_jsonl(&records));
            outputs.file(with_suffix(p, ".report.json"), report);
            Some(with_suffix(p, ".manifest.json"))
        }
        None => {
            ctx.note("counts are written only with --out");
            outputs.print(&report);
            None
        }
    };
    outputs.finish("simulate", ctx.seed, manifest, ctx.quiet)
}

fn read_weights(path: &Path) -> Result<Vec<(GhzLabel, f64)>, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
    let raw: BTreeMap<String, f64> = serde_json::from_str(&text)
        .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    if raw.is_empty() {
        return Err(CliError::Usage(format!("{}: no weights", path.display())));
    }
    raw.into_iter()
        .map(|(k, w)| Ok((k.parse::<GhzLabel>()?, w)))
        .collect()
}

fn read_counts(dir: &Path, label: GhzLabel) -> Result<Vec<CountRecord>, CliError> {
    let candidates = [
        dir.join(format!("{label}.counts.jsonl")),
        dir.join(format!("{label}.jsonl")),
    ];
    let path = candidates.iter().find(|p| p.is_file()).ok_or_else(|| {
        CliError::Usage(format!("no count file for {label} in {}", dir.display()))
    })?;
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
    read_jsonl(&text).map_err(|e| CliError::from(e).prefixed(&path.display().to_string()))
}

#[derive(Serialize)]
struct MixWitness {
    task: &'static str,
    weights: BTreeMap<GhzLabel, f64>,
    lin_i2: Estimate,
    adapted_to: GhzLabel,
    class: RegionClass,
    per_label: BTreeMap<GhzLabel, f64>,
}

#[derive(Serialize)]
struct MixTomography {
    task: &'static str,
    weights: BTreeMap<GhzLabel, f64>,
    #[serde(flatten)]
    tomography: TomographyReport,
}

pub fn mix_counts(ctx: &Ctx, args: MixArgs) -> Result<(), CliError> {
    let weights = read_weights(&args.weights)?;
    let sets: Vec<(f64, Vec<CountRecord>)> = weights
        .iter()
        .map(|&(l, w)| Ok((w, read_counts(&args.inputs, l)?)))
        .collect::<Result<_, CliError>>()?;
    let refs: Vec<(f64, &[CountRecord])> = sets.iter().map(|(w, s)| (*w, s.as_slice())).collect();
    let mixed = weighted_mix_counts(&refs)?;
    let weight_map: BTreeMap<GhzLabel, f64> = weights.iter().copied().collect();
    let report = match args.task {
        Task::Witness => {
            let mut best: Option<(GhzLabel, Estimate)> = None;
            let mut per_label = BTreeMap::new();
            for l in GhzLabel::all() {
                let e = lin_i2_from_counts(&mixed, l)?;
                per_label.insert(l, e.value);
                if best.is_none_or(|(_, b)| e.value > b.value + 1e-12) {
                    best = Some((l, e));
                }
            }
            let (adapted_to, lin_i2) = best.expect("sixteen labels");
            pretty(&MixWitness {
                task: "witness",
                weights: weight_map,
                lin_i2,
                adapted_to,
                class: if lin_i2.value > CLASS_TOL {
                    RegionClass::Gme
                } else {
                    RegionClass::Undetected
                },
                per_label,
            })
        }
        Task::Fqst => pretty(&MixTomography {
            task: "fqst",
            weights: weight_map,
            tomography: tomography_report(&mixed, None)?,
        }),
    };
    let mut outputs = Outputs::new();
    let manifest = ctx.emit(&mut outputs, report);
    outputs.finish("mix-counts", ctx.seed, manifest, ctx.quiet)
}
