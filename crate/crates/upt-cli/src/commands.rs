use std::fs;
use std::path::{Path, PathBuf};

use serde_json::json;
use upt_core::envelope::{curve_to_csv, sanity_band, TradeoffCurve};
use upt_core::full::perfect_privacy_mechanism as full_mechanism;
use upt_core::full::{
    curve_full_exhaustive, curve_full_greedy, curve_full_nonalgorithmic,
    perfect_privacy_exact_3x2, perfect_privacy_exact_binary, perfect_privacy_lower_bound,
    perfect_privacy_upper_bound, CurveMode, DEFAULT_SUBSET_CAP,
};
use upt_core::oracle::{
    exact_perfect_privacy_full_with, exact_perfect_privacy_public_with, oracle_report_json, DEFAULT_FULL_CAP,
    DEFAULT_PUBLIC_CAP,
};
use upt_core::prob::io::{joint_from_json_with, joint_to_json, mechanism_to_json};
use upt_core::prob::{entropy, evaluate_mechanism, random_joint, JointPmf};
use upt_core::public::perfect_privacy_mechanism_with as public_mechanism_with;
use upt_core::public::{
    curve_public_exhaustive, curve_public_greedy, rank_bounds, DEFAULT_ORDERING_CAP,
};
use upt_core::{fixtures, Error, Result};

use crate::{Command, FormatArg, ModeArg, ModelArg, SourceArgs, TolArgs};

/// Writes through a temp file in the target directory and renames, so a
/// failed run never leaves a partial artifact.
fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty());
    if let Some(dir) = dir {
        fs::create_dir_all(dir)?;
    }
    let tmp = path.with_extension("tmp-upt");
    fs::write(&tmp, contents)?;
    fs::rename(&tmp, path)?;
    Ok(())
}

fn emit(out: &Option<String>, contents: &str, what: &str) -> Result<()> {
    match out {
        Some(path) => {
            let path = PathBuf::from(path);
            write_atomic(&path, contents)?;
            println!("wrote {what} to {}", path.display());
        }
        None => print!("{contents}"),
    }
    Ok(())
}

fn load_source(source: &SourceArgs, tol: &TolArgs) -> Result<JointPmf> {
    match (&source.input, source.seed) {
        (Some(path), None) => {
            let text = fs::read_to_string(path)?;
            joint_from_json_with(&text, tol.tol_pmf)
        }
        (None, Some(seed)) => {
            let (nx, ny) = (source.nx.unwrap_or(0), source.ny.unwrap_or(0));
            if nx == 0 || ny == 0 {
                return Err(Error::InvalidInput(
                    "--seed needs --nx and --ny at least 1".into(),
                ));
            }
            Ok(random_joint(seed, nx, ny))
        }
        _ => Err(Error::InvalidInput(
            "provide exactly one input source: --input or --seed with --nx/--ny".into(),
        )),
    }
}

pub fn run(command: Command) -> Result<()> {
    match command {
        Command::Bound {
            source,
            tol,
            out,
            format,
        } => bound(&source, &tol, &out, format),
        Command::Mechanism {
            source,
            tol,
            model,
            out,
        } => mechanism(&source, &tol, model, &out),
        Command::Curve {
            source,
            tol,
            model,
            mode,
            nonalgorithmic,
            cap,
            epsilon_grid,
            out,
            format,
        } => curve(
            &source,
            &tol,
            model,
            mode,
            nonalgorithmic,
            cap,
            epsilon_grid,
            &out,
            format,
        ),
        Command::Oracle {
            source,
            tol,
            model,
            cap,
            out,
        } => oracle(&source, &tol, model, cap, &out),
        Command::Random { seed, nx, ny, out } => {
            if nx == 0 || ny == 0 {
                return Err(Error::InvalidInput("--nx and --ny must be at least 1".into()));
            }
            let j = random_joint(seed, nx, ny);
            emit(&out, &joint_to_json(&j), "joint document")
        }
        Command::Reproduce { case, out_dir, cap } => reproduce(&case, &out_dir, cap),
    }
}

fn bound(source: &SourceArgs, tol: &TolArgs, out: &Option<String>, format: FormatArg) -> Result<()> {
    let j = load_source(source, tol)?;
    let hy = entropy(&j.marginal_y());
    let ixy = j.mutual_information();
    let (public_rank_bound, full_rank_bound) = rank_bounds(&j);
    let mut fields: Vec<(&str, f64)> = vec![
        ("mutual_information_bits", ixy),
        ("h_y_bits", hy),
        ("h_y_given_x_bits", hy - ixy),
        ("perfect_privacy_lower_bound_bits", perfect_privacy_lower_bound(&j)),
        ("perfect_privacy_upper_bound_bits", perfect_privacy_upper_bound(&j)),
        ("public_rank_lower_bound_bits", public_rank_bound),
        ("full_rank_lower_bound_bits", full_rank_bound),
    ];
    if j.nx() == 2 {
        fields.push(("perfect_privacy_exact_binary_bits", perfect_privacy_exact_binary(&j)?));
    }
    if j.nx() == 3 && j.ny() == 2 {
        fields.push(("perfect_privacy_exact_3x2_bits", perfect_privacy_exact_3x2(&j)?));
    }
    let text = match format {
        FormatArg::Json => {
            let map: serde_json::Map<String, serde_json::Value> = fields
                .iter()
                .map(|(k, v)| (k.to_string(), json!(v)))
                .collect();
            format!("{}\n", serde_json::to_string_pretty(&map)?)
        }
        FormatArg::Csv => {
            let mut s = String::from("name,value\n");
            for (k, v) in &fields {
                s.push_str(&format!("{k},{v:.12}\n"));
            }
            s
        }
    };
    emit(out, &text, "bound report")
}

fn mechanism(
    source: &SourceArgs,
    tol: &TolArgs,
    model: ModelArg,
    out: &Option<String>,
) -> Result<()> {
    let j = load_source(source, tol)?;
    let mech = match model {
        ModelArg::Full => {
            let (ch, _) = j.condition_on_x();
            full_mechanism(&ch)?.0
        }
        ModelArg::Public => public_mechanism_with(&j, tol.tol_eq)?.0,
    };
    let ev = evaluate_mechanism(&j, &mech)?;
    let doc = mechanism_to_json(&mech, &j.support(), j.ny());
    emit(out, &format!("{doc}\n"), "mechanism")?;
    if out.is_some() {
        let summary = json!({
            "leakage_bits": ev.leakage_bits,
            "utility_bits": ev.utility_bits,
            "u_count": mech.n_outputs(),
        });
        println!("{summary}");
    }
    Ok(())
}

fn curve_document(
    j: &JointPmf,
    curve: &TradeoffCurve,
    leftmost_bound: f64,
    epsilon_grid: Option<usize>,
    format: FormatArg,
) -> Result<String> {
    let (lower, upper) = sanity_band(j, leftmost_bound);
    let ixy = j.mutual_information();
    let grid: Vec<f64> = match epsilon_grid {
        Some(n) if n > 0 => (0..=n).map(|i| ixy * i as f64 / n as f64).collect(),
        _ => Vec::new(),
    };
    match format {
        FormatArg::Csv => Ok(curve_to_csv(curve, Some((&lower, &upper)), &grid)),
        FormatArg::Json => {
            let point = |p: &upt_core::TradeoffPoint| {
                json!({"leakage_bits": p.leakage, "utility_bits": p.utility, "tag": p.tag})
            };
            let doc = json!({
                "points": curve.points.iter().map(point).collect::<Vec<_>>(),
                "envelope": curve.envelope.breakpoints().iter().map(point).collect::<Vec<_>>(),
                "envelope_grid": grid
                    .iter()
                    .map(|&x| json!({"leakage_bits": x, "utility_bits": curve.envelope.evaluate(x).0}))
                    .collect::<Vec<_>>(),
                "band_lower": lower.breakpoints().iter().map(point).collect::<Vec<_>>(),
                "band_upper": upper.breakpoints().iter().map(point).collect::<Vec<_>>(),
            });
            Ok(format!("{}\n", serde_json::to_string_pretty(&doc)?))
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn curve(
    source: &SourceArgs,
    tol: &TolArgs,
    model: ModelArg,
    mode: ModeArg,
    nonalgorithmic: bool,
    cap: Option<usize>,
    epsilon_grid: Option<usize>,
    out: &Option<String>,
    format: FormatArg,
) -> Result<()> {
    let j = load_source(source, tol)?;
    let (public_rank_bound, full_rank_bound) = rank_bounds(&j);
    let (curve, leftmost) = match model {
        ModelArg::Full => {
            let cap = cap.unwrap_or(DEFAULT_SUBSET_CAP);
            let c = match (nonalgorithmic, mode) {
                (false, ModeArg::Exhaustive) => curve_full_exhaustive(&j, cap)?,
                (false, ModeArg::Greedy) => curve_full_greedy(&j)?,
                (true, ModeArg::Exhaustive) => {
                    curve_full_nonalgorithmic(&j, CurveMode::Exhaustive, cap)?
                }
                (true, ModeArg::Greedy) => curve_full_nonalgorithmic(&j, CurveMode::Greedy, cap)?,
            };
            (c, full_rank_bound)
        }
        ModelArg::Public => {
            if nonalgorithmic {
                return Err(Error::InvalidInput(
                    "--nonalgorithmic applies to the full-observation model".into(),
                ));
            }
            let c = match mode {
                ModeArg::Exhaustive => {
                    curve_public_exhaustive(&j, cap.unwrap_or(DEFAULT_ORDERING_CAP))?.0
                }
                ModeArg::Greedy => curve_public_greedy(&j)?.0,
            };
            (c, public_rank_bound)
        }
    };
    let text = curve_document(&j, &curve, leftmost, epsilon_grid, format)?;
    emit(out, &text, "curve")
}

fn oracle(
    source: &SourceArgs,
    tol: &TolArgs,
    model: ModelArg,
    cap: Option<usize>,
    out: &Option<String>,
) -> Result<()> {
    let j = load_source(source, tol)?;
    let (label, solution) = match model {
        ModelArg::Full => (
            "full",
            exact_perfect_privacy_full_with(&j, cap.unwrap_or(DEFAULT_FULL_CAP), tol.tol_lp)?,
        ),
        ModelArg::Public => (
            "public",
            exact_perfect_privacy_public_with(&j, cap.unwrap_or(DEFAULT_PUBLIC_CAP), tol.tol_lp)?,
        ),
    };
    let text = format!("{}\n", oracle_report_json(label, &solution, &j));
    emit(out, &text, "oracle report")
}

fn reproduce(case: &str, out_dir: &str, cap: Option<usize>) -> Result<()> {
    let dir = PathBuf::from(out_dir);
    fs::create_dir_all(&dir)?;
    match case {
        "example1" => reproduce_example1(&dir),
        "example3" => reproduce_example3(&dir),
        "cyclic" => reproduce_cyclic(&dir),
        "bec" => reproduce_bec(&dir),
        "figure4" => reproduce_figure(&dir, 4, cap),
        "figure5" => reproduce_figure(&dir, 5, cap),
        "figure6" => reproduce_figure6(&dir, cap),
        other => Err(Error::InvalidInput(format!(
            "unknown case {other:?}; expected example1|example3|cyclic|bec|figure4|figure5|figure6"
        ))),
    }
}

fn reproduce_example1(dir: &Path) -> Result<()> {
    let ch = fixtures::example1_channel();
    let (mech, trace) = full_mechanism(&ch)?;
    let j = fixtures::example1_joint(&[1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0]);
    let ev = evaluate_mechanism(&j, &mech)?;
    let mech_path = dir.join("example1_mechanism.json");
    write_atomic(&mech_path, &mechanism_to_json(&mech, &j.support(), j.ny()))?;
    let tail: f64 = trace.u_levels[3..].iter().sum();
    let report = json!({
        "case": "example1",
        "u_count": mech.n_outputs(),
        "u_levels": trace.u_levels,
        "expected_u_levels": [0.2, 0.2, 0.1, 0.1, 0.1, 0.1, 0.2],
        "iteration_mass": tail,
        "leakage_bits_uniform_prior": ev.leakage_bits,
        "utility_bits_uniform_prior": ev.utility_bits,
    });
    let report_path = dir.join("example1_report.json");
    write_atomic(&report_path, &format!("{}\n", serde_json::to_string_pretty(&report)?))?;
    println!("wrote {} and {}", mech_path.display(), report_path.display());
    Ok(())
}

fn reproduce_example3(dir: &Path) -> Result<()> {
    let j = fixtures::example3_joint();
    let (mech, trace) = public_mechanism_with(&j, upt_core::tol::TOL_EQ)?;
    let ev = evaluate_mechanism(&j, &mech)?;
    let exact = exact_perfect_privacy_public_with(&j, DEFAULT_PUBLIC_CAP, upt_core::tol::TOL_LP)?;
    let mech_path = dir.join("example3_mechanism.json");
    write_atomic(&mech_path, &mechanism_to_json(&mech, &j.support(), j.ny()))?;
    let report = json!({
        "case": "example3",
        "p_u": ev.joint_xyu.marginal_u(),
        "expected_p_u": [0.154, 0.698, 0.148],
        "mix_weights": trace
            .mix_weights
            .iter()
            .map(|((a, b), f)| json!({"pair": [a, b], "weight": f}))
            .collect::<Vec<_>>(),
        "leakage_bits": ev.leakage_bits,
        "utility_bits": ev.utility_bits,
        "exact_value_bits": exact.value_bits,
        "reference_value_bits": 0.9063,
        "delta_to_exact": (ev.utility_bits - exact.value_bits).abs(),
        "delta_to_reference": (ev.utility_bits - 0.9063).abs(),
    });
    let report_path = dir.join("example3_report.json");
    write_atomic(&report_path, &format!("{}\n", serde_json::to_string_pretty(&report)?))?;
    println!("wrote {} and {}", mech_path.display(), report_path.display());
    Ok(())
}

fn reproduce_cyclic(dir: &Path) -> Result<()> {
    let mut rows = Vec::new();
    for k in 3usize..=6 {
        let j = fixtures::cyclic_joint(k);
        let (ch, _) = j.condition_on_x();
        let (mech, _) = full_mechanism(&ch)?;
        let ev = evaluate_mechanism(&j, &mech)?;
        let exact = exact_perfect_privacy_full_with(&j, DEFAULT_FULL_CAP, upt_core::tol::TOL_LP)?;
        let closed = (k as f64 - 1.0) / k as f64 * ((k - 1) as f64).log2();
        rows.push(json!({
            "k": k,
            "constructed_bits": ev.utility_bits,
            "exact_bits": exact.value_bits,
            "closed_form_bits": closed,
            "leakage_bits": ev.leakage_bits,
        }));
    }
    let path = dir.join("cyclic_report.json");
    write_atomic(&path, &format!("{}\n", serde_json::to_string_pretty(&rows)?))?;
    println!("wrote {}", path.display());
    Ok(())
}

fn reproduce_bec(dir: &Path) -> Result<()> {
    let mut rows = Vec::new();
    for e in [0.1, 0.25, 0.5] {
        let hbe = upt_core::prob::binary_entropy(e)?;
        for p in [0.3, 0.5] {
            let j = fixtures::bec_joint(e, p);
            let (ch, _) = j.condition_on_x();
            let (m1, _) = full_mechanism(&ch)?;
            let full = evaluate_mechanism(&j, &m1)?;
            let (m3, _) = public_mechanism_with(&j, upt_core::tol::TOL_EQ)?;
            let public = evaluate_mechanism(&j, &m3)?;
            rows.push(json!({
                "erasure": e,
                "p_x0": p,
                "binary_entropy_bits": hbe,
                "full_utility_bits": full.utility_bits,
                "public_utility_bits": public.utility_bits,
                "full_leakage_bits": full.leakage_bits,
                "public_leakage_bits": public.leakage_bits,
            }));
        }
    }
    let path = dir.join("bec_report.json");
    write_atomic(&path, &format!("{}\n", serde_json::to_string_pretty(&rows)?))?;
    println!("wrote {}", path.display());
    Ok(())
}

fn reproduce_figure(dir: &Path, which: u8, cap: Option<usize>) -> Result<()> {
    let j = fixtures::numerical_8x8();
    let cap = cap.unwrap_or(DEFAULT_SUBSET_CAP);
    let (constructed, closed_form) = if which == 4 {
        (
            curve_full_exhaustive(&j, cap)?,
            curve_full_nonalgorithmic(&j, CurveMode::Exhaustive, cap)?,
        )
    } else {
        (
            curve_full_greedy(&j)?,
            curve_full_nonalgorithmic(&j, CurveMode::Greedy, cap)?,
        )
    };
    let (_, full_rank_bound) = rank_bounds(&j);
    let constructed_csv = curve_document(&j, &constructed, full_rank_bound, None, FormatArg::Csv)?;
    let closed_csv = curve_document(&j, &closed_form, full_rank_bound, None, FormatArg::Csv)?;
    let a = dir.join(format!("figure{which}_constructed.csv"));
    let b = dir.join(format!("figure{which}_closed_form.csv"));
    write_atomic(&a, &constructed_csv)?;
    write_atomic(&b, &closed_csv)?;
    println!("wrote {} and {}", a.display(), b.display());
    Ok(())
}

fn reproduce_figure6(dir: &Path, cap: Option<usize>) -> Result<()> {
    let j = fixtures::numerical_8x8();
    let (public_rank_bound, _) = rank_bounds(&j);
    let (greedy, _) = curve_public_greedy(&j)?;
    let greedy_csv = curve_document(&j, &greedy, public_rank_bound, None, FormatArg::Csv)?;
    let a = dir.join("figure6_adaptive.csv");
    write_atomic(&a, &greedy_csv)?;
    let mut written = vec![a.display().to_string()];
    // the instance has 8! orderings; the exhaustive family is emitted
    // only when the caller raises the cap to cover them
    let cap = cap.unwrap_or(DEFAULT_ORDERING_CAP);
    match curve_public_exhaustive(&j, cap) {
        Ok((curve, _)) => {
            let csv = curve_document(&j, &curve, public_rank_bound, None, FormatArg::Csv)?;
            let b = dir.join("figure6_all_orderings.csv");
            write_atomic(&b, &csv)?;
            written.push(b.display().to_string());
        }
        Err(Error::TooManyOrderings { needed, cap }) => {
            println!("skipping the all-orderings family: {needed} orderings exceed cap {cap}");
        }
        Err(other) => return Err(other),
    }
    println!("wrote {}", written.join(" and "));
    Ok(())
}
