use rayon::prelude::*;
use serde::Serialize;
use serde_json::{Map, Value};
use spheregrid::equistats::{Mode, SampleBatch, StatConfig, StatReport};
use spheregrid::exactla::format_rational;
use spheregrid::ortho::{gram_form, grid, modular_point_of_gram, ortho_frame};
use spheregrid::padic::{hasse_invariant_gram, is_isotropic_gram, Place};
use spheregrid::sphere::{enumerate_sphere_with, is_admissible, orbit_info, orbit_representatives};
use spheregrid::{GridClass, IntMatrix, PrimitiveVector};

use crate::artifact::{emit, render_json, CsvArtifact};
use crate::config::{CommonArgs, Format, RunConfig};
use crate::input::{group, read_rows, InputRow};
use crate::CliError;

fn write_table(
    config: &RunConfig,
    table: CsvArtifact,
    header: &[String],
    args: &CommonArgs,
) -> Result<(), CliError> {
    let bytes = match config.format {
        Format::Csv => table.render(config)?,
        Format::Json => {
            let rows: Vec<Value> = table_rows(&table, header);
            render_json(config, &rows)?
        }
    };
    emit(&bytes, args.out.as_deref())
}

fn table_rows(table: &CsvArtifact, header: &[String]) -> Vec<Value> {
    table
        .rows()
        .iter()
        .map(|row| {
            let obj: Map<String, Value> = header
                .iter()
                .zip(row)
                .map(|(h, x)| (h.clone(), Value::String(x.clone())))
                .collect();
            Value::Object(obj)
        })
        .collect()
}

fn orbit_id(v: &PrimitiveVector) -> String {
    let rep = orbit_info(v).canonical_rep;
    rep.coords()
        .iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(":")
}

fn admissibility_warnings(
    config: &RunConfig,
    d: usize,
    norm: u64,
    table: &mut CsvArtifact,
) -> Result<bool, CliError> {
    let admissible = is_admissible(d, norm, None)?;
    if !admissible {
        table.warn(format!("D={norm} is inadmissible for d={d}"));
    }
    for &p in &config.p {
        if !is_admissible(d, norm, Some(p))? && admissible {
            table.warn(format!("D={norm} is divisible by p={p}"));
        }
    }
    Ok(admissible)
}

/// Points with multiplicities.
type Weighted = Vec<(PrimitiveVector, u64)>;

/// Points grouped by `(d, D)`.
type Groups = Vec<((usize, u64), Vec<PrimitiveVector>)>;

/// Sphere points for every configured `D`, or the rows of `--in`, together
/// with the dimension.
fn sources(config: &RunConfig, args: &CommonArgs) -> Result<(usize, Groups), CliError> {
    if let Some(path) = &args.input {
        let (dim, rows) = read_rows(path)?;
        let groups = group(rows)
            .into_iter()
            .map(|(k, rows)| (k, rows.into_iter().map(|r| r.vector).collect()))
            .collect();
        return Ok((config.d.unwrap_or(dim), groups));
    }
    let d = config.d.expect("checked in RunConfig");
    let groups = config
        .norms
        .iter()
        .map(|&norm| Ok(((d, norm), enumerate_sphere_with(d, norm, &config.budget())?)))
        .collect::<Result<_, CliError>>()?;
    Ok((d, groups))
}

pub fn enumerate(args: &CommonArgs) -> Result<(), CliError> {
    let config = RunConfig::from_args("enumerate", args, Format::Csv)?;
    if args.input.is_some() {
        return Err(CliError::config("enumerate does not read --in"));
    }
    let d = config.d.expect("checked in RunConfig");
    let mut header: Vec<String> = vec!["d".into(), "D".into()];
    header.extend((1..=d).map(|i| format!("x{i}")));
    header.extend(["orbit_id".into(), "stab_size".into()]);
    let mut table = CsvArtifact::new(header.clone());
    for &norm in &config.norms {
        let admissible = admissibility_warnings(&config, d, norm, &mut table)?;
        let vectors = enumerate_sphere_with(d, norm, &config.budget())?;
        if vectors.is_empty() && admissible {
            return Err(CliError::invariant(format!(
                "no primitive points on the admissible sphere d={d}, D={norm}"
            )));
        }
        let rows: Vec<Vec<String>> = vectors
            .par_iter()
            .map(|v| {
                let info = orbit_info(v);
                let mut row = vec![d.to_string(), norm.to_string()];
                row.extend(v.coords().iter().map(|x| x.to_string()));
                row.push(orbit_id(v));
                row.push(info.stabilizer_size.to_string());
                row
            })
            .collect();
        for row in rows {
            table.push(row);
        }
    }
    write_table(&config, table, &header, args)
}

fn class_header(d: usize, with_grid: bool) -> Vec<String> {
    let n = d - 1;
    let mut header: Vec<String> = vec!["d".into(), "D".into()];
    header.extend((1..=d).map(|i| format!("x{i}")));
    header.push("orbit_id".into());
    for j in 1..=n {
        for i in 1..=j {
            header.push(format!("g{i}{j}"));
        }
    }
    header.push("canonical".into());
    if with_grid {
        header.extend((1..=n).map(|i| format!("t{i}")));
        header.extend((1..=n).map(|i| format!("s{i}")));
    }
    if d == 3 {
        header.extend(["modular_x".into(), "modular_y2".into()]);
    }
    header
}

fn class_row(v: &PrimitiveVector, with_grid: bool) -> Result<Vec<String>, CliError> {
    let d = v.dim();
    let n = d - 1;
    let g = grid(v)?;
    let s = g.shape();
    let mut row = vec![d.to_string(), v.norm().to_string()];
    row.extend(v.coords().iter().map(|x| x.to_string()));
    row.push(orbit_id(v));
    for j in 0..n {
        for i in 0..=j {
            row.push(s.gram().get(i, j).to_string());
        }
    }
    row.push(s.is_canonical().to_string());
    if with_grid {
        row.extend(g.t().entries().iter().map(format_rational));
        row.extend(g.t_sample().entries().iter().map(format_rational));
    }
    if d == 3 {
        let p = modular_point_of_gram(s.gram())?;
        row.push(format_rational(&p.x));
        row.push(format_rational(&p.y_squared));
    }
    Ok(row)
}

/// `shapes` and `grids`.
pub fn classes(args: &CommonArgs, with_grid: bool) -> Result<(), CliError> {
    let name = if with_grid { "grids" } else { "shapes" };
    let config = RunConfig::from_args(name, args, Format::Csv)?;
    let (d, groups) = sources(&config, args)?;
    if !(spheregrid::sphere::MIN_DIM..=spheregrid::sphere::MAX_DIM).contains(&d) {
        return Err(CliError::config(format!("unsupported dimension {d}")));
    }
    let header = class_header(d, with_grid);
    let mut table = CsvArtifact::new(header.clone());
    for ((gd, norm), vectors) in groups {
        if gd != d {
            return Err(CliError::config(format!(
                "input mixes dimensions {d} and {gd}"
            )));
        }
        admissibility_warnings(&config, d, norm, &mut table)?;
        let rows: Vec<Vec<String>> = vectors
            .par_iter()
            .map(|v| class_row(v, with_grid))
            .collect::<Result<_, _>>()?;
        for row in rows {
            table.push(row);
        }
    }
    write_table(&config, table, &header, args)
}

/// Compares class columns of an input row with a recomputed grid.
fn cross_check(row: &InputRow, g: &GridClass) -> Result<(), CliError> {
    let n = row.d - 1;
    let mut expected: Vec<(String, String)> = Vec::new();
    for j in 0..n {
        for i in 0..=j {
            expected.push((
                format!("g{}{}", i + 1, j + 1),
                g.shape().gram().get(i, j).to_string(),
            ));
        }
    }
    for i in 0..n {
        expected.push((format!("t{}", i + 1), format_rational(&g.t()[i])));
        expected.push((format!("s{}", i + 1), format_rational(&g.t_sample()[i])));
    }
    for (col, want) in expected {
        if let Some(have) = row.fields.get(&col) {
            if *have != want {
                return Err(CliError::invariant(format!(
                    "{}: column {col} is {have}, recomputed {want}",
                    row.vector
                )));
            }
        }
    }
    Ok(())
}

fn stat_reports(config: &RunConfig, args: &CommonArgs) -> Result<Vec<StatReport>, CliError> {
    let stat_config = StatConfig {
        cap_count: config.caps,
        cap_seed: config.seed,
    };
    let mut reports = Vec::new();
    if let Some(path) = &args.input {
        for ((d, norm), rows) in group(read_rows(path)?.1) {
            let batch = SampleBatch::from_vectors(
                d,
                norm,
                rows.iter().map(|r| r.vector.clone()).collect(),
            )?;
            for (row, record) in rows.iter().zip(&batch.records) {
                cross_check(row, &record.grid)?;
            }
            reports.push(StatReport::compute(&batch, &stat_config)?);
        }
        return Ok(reports);
    }
    let d = config.d.expect("checked in RunConfig");
    for &norm in &config.norms {
        if !is_admissible(d, norm, None)? {
            eprintln!("warning: D={norm} is inadmissible for d={d}");
        }
        let batch = SampleBatch::build(d, norm, Mode::from(config.mode), &config.budget())?;
        reports.push(StatReport::compute(&batch, &stat_config)?);
    }
    Ok(reports)
}

pub fn stats(args: &CommonArgs) -> Result<(), CliError> {
    let config = RunConfig::from_args("stats", args, Format::Json)?;
    let reports = stat_reports(&config, args)?;
    let bytes = match config.format {
        Format::Json => render_json(&config, &reports)?,
        Format::Csv => trend_table(&reports).render(&config)?,
    };
    emit(&bytes, args.out.as_deref())
}

/// One statistic followed across the radii of a report.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrendLine {
    pub statistic: String,
    pub values: Vec<Option<f64>>,
    /// Last value strictly below the first.
    pub first_to_last_decrease: Option<bool>,
    /// Every step strictly decreasing.
    pub strictly_decreasing: Option<bool>,
    /// Whether the line enters the verdict.
    pub tested: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Trend {
    pub norms: Vec<u64>,
    pub lines: Vec<TrendLine>,
    /// All tested lines decrease from the first to the last radius.
    pub verdict: bool,
    pub notes: Vec<String>,
}

fn trend_line(statistic: String, values: Vec<Option<f64>>, tested: bool) -> TrendLine {
    let known: Option<Vec<f64>> = values.iter().copied().collect();
    let (first_to_last_decrease, strictly_decreasing) = match known {
        Some(v) if v.len() >= 2 => (
            Some(v[v.len() - 1] < v[0]),
            Some(v.windows(2).all(|w| w[1] < w[0])),
        ),
        _ => (None, None),
    };
    TrendLine {
        statistic,
        values,
        first_to_last_decrease,
        strictly_decreasing,
        tested,
    }
}

pub fn trend(reports: &[StatReport]) -> Trend {
    let mut lines = vec![trend_line(
        "cap_discrepancy".into(),
        reports.iter().map(|r| Some(r.cap_discrepancy)).collect(),
        true,
    )];
    let axes = reports.first().map_or(0, |r| r.torus_ks.len());
    for axis in 0..axes {
        lines.push(trend_line(
            format!("torus_ks[{axis}]"),
            reports
                .iter()
                .map(|r| r.torus_ks.get(axis).copied())
                .collect(),
            true,
        ));
    }
    let d3 = reports.first().is_some_and(|r| r.d == 3);
    lines.push(trend_line(
        "shape_chi2".into(),
        reports.iter().map(|r| r.shape_chi2).collect(),
        d3,
    ));
    lines.push(trend_line(
        "joint_chi2".into(),
        reports.iter().map(|r| r.joint_chi2).collect(),
        false,
    ));
    lines.push(trend_line(
        "mean_normalized_first_minimum".into(),
        reports
            .iter()
            .map(|r| Some(r.mean_normalized_first_minimum))
            .collect(),
        false,
    ));
    let verdict = lines
        .iter()
        .filter(|l| l.tested)
        .all(|l| l.first_to_last_decrease == Some(true));
    let mut notes = Vec::new();
    if !d3 {
        notes.push("no shape reference measure above d = 3; the mean normalised first minimum is reported instead".into());
    }
    Trend {
        norms: reports.iter().map(|r| r.norm).collect(),
        lines,
        verdict,
        notes,
    }
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map(|v| format!("{v}")).unwrap_or_default()
}

fn trend_table(reports: &[StatReport]) -> CsvArtifact {
    let axes = reports.first().map_or(0, |r| r.torus_ks.len());
    let mut header: Vec<String> = vec![
        "d".into(),
        "D".into(),
        "n_points".into(),
        "mode".into(),
        "cap_discrepancy".into(),
    ];
    header.extend((0..axes).map(|i| format!("torus_ks_{}", i + 1)));
    header.extend([
        "shape_chi2".into(),
        "joint_chi2".into(),
        "mean_normalized_first_minimum".into(),
    ]);
    let mut table = CsvArtifact::new(header);
    for r in reports {
        let mut row = vec![
            r.d.to_string(),
            r.norm.to_string(),
            r.n_points.to_string(),
            r.mode.to_string(),
            format!("{}", r.cap_discrepancy),
        ];
        row.extend(r.torus_ks.iter().map(|k| format!("{k}")));
        row.extend([
            fmt_opt(r.shape_chi2),
            fmt_opt(r.joint_chi2),
            format!("{}", r.mean_normalized_first_minimum),
        ]);
        table.push(row);
    }
    table
}

#[derive(Serialize)]
struct ReportOutput<'a> {
    reports: &'a [StatReport],
    trend: Trend,
}

pub fn report(args: &CommonArgs) -> Result<(), CliError> {
    let config = RunConfig::from_args("report", args, Format::Json)?;
    let reports = stat_reports(&config, args)?;
    let t = trend(&reports);
    eprintln!(
        "trend over D = {:?}: {}",
        t.norms,
        if t.verdict {
            "decreasing"
        } else {
            "not decreasing"
        }
    );
    let bytes = match config.format {
        Format::Json => render_json(
            &config,
            &ReportOutput {
                reports: &reports,
                trend: t,
            },
        )?,
        Format::Csv => trend_table(&reports).render(&config)?,
    };
    emit(&bytes, args.out.as_deref())
}

/// Outcome of the genus checks for one `(D, p)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GenusRow {
    pub d: usize,
    #[serde(rename = "D")]
    pub norm: u64,
    pub p: u64,
    pub skipped: bool,
    pub reason: Option<String>,
    /// Sphere points covered (orbit representatives count with their orbit size).
    pub vectors: u64,
    /// Lattices actually examined.
    pub lattices: u64,
    pub hasse_plus: u64,
    pub hasse_minus: u64,
    pub isotropic: u64,
    pub anisotropic: u64,
    /// Points contradicting `Hasse = +1` and isotropy (only counted for `d ≥ 4`).
    pub violations: u64,
    pub examples: Vec<String>,
}

/// A form that is not the orthogonal lattice of a sphere point in `𝔻(p)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ControlRow {
    pub p: u64,
    pub gram: IntMatrix,
    pub det: String,
    pub hasse: i8,
    pub isotropic: bool,
    pub p_divides_det: bool,
    pub flagged: bool,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GenusReport {
    pub rows: Vec<GenusRow>,
    pub controls: Vec<ControlRow>,
    pub total_violations: u64,
}

fn genus_row(
    d: usize,
    norm: u64,
    p: u64,
    points: &[(PrimitiveVector, u64)],
) -> Result<GenusRow, CliError> {
    let mut row = GenusRow {
        d,
        norm,
        p,
        skipped: false,
        reason: None,
        vectors: 0,
        lattices: 0,
        hasse_plus: 0,
        hasse_minus: 0,
        isotropic: 0,
        anisotropic: 0,
        violations: 0,
        examples: Vec::new(),
    };
    if norm % p == 0 {
        row.skipped = true;
        row.reason = Some(format!("p = {p} divides D = {norm}"));
        eprintln!("skipped: d={d} D={norm} p={p} (p divides D)");
        return Ok(row);
    }
    let results: Vec<(i8, bool)> = points
        .par_iter()
        .map(|(v, _)| {
            let g = gram_form(&ortho_frame(v)?)?;
            Ok((
                hasse_invariant_gram(g.matrix(), Place::Prime(p))?,
                is_isotropic_gram(g.matrix(), p)?,
            ))
        })
        .collect::<Result<_, spheregrid::Error>>()?;
    for ((v, w), (hasse, iso)) in points.iter().zip(results) {
        row.vectors += w;
        row.lattices += 1;
        if hasse == 1 {
            row.hasse_plus += w;
        } else {
            row.hasse_minus += w;
        }
        if iso {
            row.isotropic += w;
        } else {
            row.anisotropic += w;
        }
        let bad = match d {
            3 => false,
            4 | 5 => hasse != 1 || !iso,
            _ => !iso,
        };
        if bad {
            row.violations += w;
            if row.examples.len() < 10 {
                row.examples.push(v.to_string());
            }
        }
    }
    Ok(row)
}

/// `diag(1, 1, 1, p)`, which has `p | det` and so lies outside the range of
/// the sphere statement.
pub fn control(p: u64) -> Result<ControlRow, CliError> {
    let gram = IntMatrix::diagonal(&[1, 1, 1, p as i64]);
    let hasse = hasse_invariant_gram(&gram, Place::Prime(p))?;
    let isotropic = is_isotropic_gram(&gram, p)?;
    Ok(ControlRow {
        p,
        det: gram.det().to_string(),
        gram,
        hasse,
        isotropic,
        p_divides_det: true,
        flagged: true,
        reason: format!("control: p = {p} divides the determinant, so this is not the lattice of a sphere point with p ∤ D"),
    })
}

pub fn genus_check(args: &CommonArgs) -> Result<(), CliError> {
    let config = RunConfig::from_args("genus-check", args, Format::Json)?;
    if config.p.is_empty() {
        return Err(CliError::config("genus-check needs at least one --p"));
    }
    // each point carries the number of sphere points it stands for
    let mut groups: Vec<((usize, u64), Weighted)> = Vec::new();
    if args.input.is_some() {
        for (k, vs) in sources(&config, args)?.1 {
            groups.push((k, vs.into_iter().map(|v| (v, 1)).collect()));
        }
    } else {
        let d = config.d.expect("checked in RunConfig");
        for &norm in &config.norms {
            config.budget().check(d, norm)?;
            let points = match Mode::from(config.mode) {
                Mode::Orbit => orbit_representatives(d, norm)?
                    .into_iter()
                    .map(|v| {
                        let w = orbit_info(&v).orbit_size;
                        (v, w)
                    })
                    .collect(),
                Mode::Raw => enumerate_sphere_with(d, norm, &config.budget())?
                    .into_iter()
                    .map(|v| (v, 1))
                    .collect(),
            };
            groups.push(((d, norm), points));
        }
    }
    let mut rows = Vec::new();
    for ((d, norm), points) in &groups {
        for &p in &config.p {
            rows.push(genus_row(*d, *norm, p, points)?);
        }
    }
    let controls = config
        .p
        .iter()
        .map(|&p| control(p))
        .collect::<Result<Vec<_>, _>>()?;
    let total_violations = rows.iter().map(|r| r.violations).sum();
    let result = GenusReport {
        rows,
        controls,
        total_violations,
    };
    let bytes = match config.format {
        Format::Json => render_json(&config, &result)?,
        Format::Csv => {
            let header: Vec<String> = [
                "d",
                "D",
                "p",
                "skipped",
                "vectors",
                "lattices",
                "hasse_plus",
                "hasse_minus",
                "isotropic",
                "anisotropic",
                "violations",
            ]
            .map(String::from)
            .to_vec();
            let mut table = CsvArtifact::new(header);
            for r in &result.rows {
                table.push(vec![
                    r.d.to_string(),
                    r.norm.to_string(),
                    r.p.to_string(),
                    r.skipped.to_string(),
                    r.vectors.to_string(),
                    r.lattices.to_string(),
                    r.hasse_plus.to_string(),
                    r.hasse_minus.to_string(),
                    r.isotropic.to_string(),
                    r.anisotropic.to_string(),
                    r.violations.to_string(),
                ]);
            }
            table.render(&config)?
        }
    };
    emit(&bytes, args.out.as_deref())?;
    if total_violations > 0 {
        return Err(CliError::invariant(format!(
            "{total_violations} genus violations"
        )));
    }
    Ok(())
}
