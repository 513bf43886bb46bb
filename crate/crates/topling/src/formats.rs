//! Readers and writers for every file the tool consumes or produces.

use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::Path;

use serde::Serialize;
use topling_core::comptree::{ComponentsTree, ProfileRow};
use topling_core::dataset::{ParameterMatrix, Schema, MISSING_TOKEN};
use topling_core::dimension::{DensityMap, DimensionProfile};
use topling_core::filtration::DistanceMatrix;
use topling_core::h1loc::{BarcodeDelta, H1Report};
use topling_core::persistence::{Barcode, Interval};

use crate::error::{CliError, Result};

/// Writes `bytes` to a sibling temporary file and renames it over `path`.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let name = path
        .file_name()
        .ok_or_else(|| CliError::Config(format!("{} is not a file path", path.display())))?;
    let tmp = dir.join(format!(".{}.{}.tmp", name.to_string_lossy(), std::process::id()));
    let result = (|| {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
        fs::rename(&tmp, path)
    })();
    if let Err(e) = result {
        let _ = fs::remove_file(&tmp);
        return Err(CliError::io(path, e));
    }
    Ok(())
}

/// Parses a matrix table: a header row (`name`, then column names) followed
/// by one row per item (its name, then one cell per column).
pub fn parse_matrix(text: &str, schema: Schema, origin: &Path) -> Result<ParameterMatrix> {
    let fail = |msg: String| CliError::Format {
        path: origin.to_path_buf(),
        msg,
    };
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .from_reader(text.as_bytes());
    let mut records = reader.records();
    let header = records
        .next()
        .ok_or_else(|| fail("empty file".into()))?
        .map_err(|e| fail(e.to_string()))?;
    if header.len() < 2 {
        return Err(fail("header needs a name column and at least one feature".into()));
    }
    let col_names: Vec<String> = header.iter().skip(1).map(|s| s.trim().to_string()).collect();
    let mut row_names = Vec::new();
    let mut rows = Vec::new();
    for rec in records {
        let rec = rec.map_err(|e| fail(e.to_string()))?;
        if rec.len() == 1 && rec[0].trim().is_empty() {
            continue;
        }
        row_names.push(rec[0].trim().to_string());
        rows.push(rec.iter().skip(1).map(str::to_string).collect::<Vec<_>>());
    }
    Ok(ParameterMatrix::from_tokens(row_names, col_names, &rows, schema)?)
}

pub fn load_matrix(path: &Path, schema: Schema) -> Result<ParameterMatrix> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    parse_matrix(&text, schema, path)
}

/// Canonical table text: `?` for missing cells, shortest round-trip decimals
/// otherwise.
pub fn matrix_to_csv(m: &ParameterMatrix) -> String {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
    let mut header = vec!["name".to_string()];
    header.extend(m.col_names().iter().cloned());
    w.write_record(&header).expect("in-memory write");
    for i in 0..m.n_rows() {
        let mut rec = vec![m.row_names()[i].clone()];
        for j in 0..m.n_cols() {
            rec.push(match m.get(i, j) {
                Some(v) => format!("{v}"),
                None => MISSING_TOKEN.to_string(),
            });
        }
        w.write_record(&rec).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 input")
}

pub fn save_matrix(path: &Path, m: &ParameterMatrix) -> Result<()> {
    write_atomic(path, matrix_to_csv(m).as_bytes())
}

#[derive(Serialize)]
struct BarRecord {
    dim: usize,
    birth: f64,
    death: Option<f64>,
}

fn finite(v: f64) -> Option<f64> {
    v.is_finite().then_some(v)
}

pub fn barcode_json(bc: &Barcode) -> String {
    let bars: Vec<BarRecord> = bc
        .iter()
        .map(|(dim, iv)| BarRecord {
            dim,
            birth: iv.birth,
            death: finite(iv.death),
        })
        .collect();
    let mut s = serde_json::to_string_pretty(&bars).expect("plain data");
    s.push('\n');
    s
}

/// Horizontal bar diagram, dimensions stacked top to bottom, x axis from 0
/// to `cutoff`. Infinite bars run to the right edge.
pub fn barcode_svg(bc: &Barcode, cutoff: f64) -> String {
    let (width, left, row, gap) = (640.0, 40.0, 6.0, 18.0);
    let span = width - left - 10.0;
    let scale = if cutoff > 0.0 { span / cutoff } else { 0.0 };
    let colors = ["#1f77b4", "#d62728", "#2ca02c"];
    let mut body = String::new();
    let mut y = 20.0;
    for (k, ivs) in bc.dims.iter().enumerate() {
        let _ = writeln!(body, r#"<text x="4" y="{:.1}" font-size="11">H{k}</text>"#, y + 4.0);
        for iv in ivs {
            let x0 = left + iv.birth.min(cutoff) * scale;
            let x1 = left + if iv.is_finite() { iv.death.min(cutoff) } else { cutoff } * scale;
            let _ = writeln!(
                body,
                r#"<line x1="{x0:.2}" y1="{y:.1}" x2="{x1:.2}" y2="{y:.1}" stroke="{}" stroke-width="3"/>"#,
                colors[k % colors.len()]
            );
            y += row;
        }
        y += gap;
    }
    let height = y + 20.0;
    let _ = writeln!(
        body,
        r#"<line x1="{left}" y1="{:.1}" x2="{:.1}" y2="{:.1}" stroke="black"/>"#,
        height - 15.0,
        left + span,
        height - 15.0
    );
    let _ = writeln!(
        body,
        r#"<text x="{left}" y="{:.1}" font-size="10">0</text><text x="{:.1}" y="{:.1}" font-size="10" text-anchor="end">{cutoff:.4}</text>"#,
        height - 3.0,
        left + span,
        height - 3.0
    );
    format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width}\" height=\"{height:.0}\">\n{body}</svg>\n"
    )
}

fn dot_id(name: &str) -> String {
    format!("\"{}\"", name.replace('\\', "\\\\").replace('"', "\\\""))
}

/// Undirected graph with one node per point and one edge per pair within
/// `radius`.
pub fn skeleton_dot(dm: &DistanceMatrix, names: &[String], radius: f64) -> String {
    let mut s = format!("graph skeleton {{\n  // radius {radius}\n");
    for n in names {
        let _ = writeln!(s, "  {};", dot_id(n));
    }
    for (i, j) in dm.edges_within(radius) {
        let _ = writeln!(s, "  {} -- {};", dot_id(&names[i]), dot_id(&names[j]));
    }
    s.push_str("}\n");
    s
}

#[derive(Serialize)]
struct ClusterRecord<'a> {
    id: usize,
    birth: f64,
    members: Vec<&'a str>,
    parent: Option<usize>,
}

pub fn clusters_json(tree: &ComponentsTree, names: &[String]) -> String {
    let recs: Vec<ClusterRecord> = tree
        .clusters()
        .iter()
        .map(|c| ClusterRecord {
            id: c.id,
            birth: c.birth,
            members: c.members.iter().map(|&m| names[m].as_str()).collect(),
            parent: c.parent,
        })
        .collect();
    let mut s = serde_json::to_string_pretty(&recs).expect("plain data");
    s.push('\n');
    s
}

fn csv_text<R: Serialize>(rows: impl IntoIterator<Item = R>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8")
}

#[derive(Serialize)]
struct SingletonRecord {
    radius: f64,
    clusters: usize,
    singletons: usize,
}

pub fn singleton_csv(profile: &[ProfileRow]) -> String {
    csv_text(profile.iter().map(|r| SingletonRecord {
        radius: r.radius,
        clusters: r.clusters,
        singletons: r.singletons,
    }))
}

#[derive(Serialize)]
struct DimensionRecord {
    f: usize,
    mean_err_data: f64,
    mean_err_ref: Option<f64>,
    #[serde(rename = "T")]
    t: Option<f64>,
    reference: &'static str,
    weight: f64,
}

/// Per-candidate-dimension rows; undefined statistics are left empty.
pub fn profile_csv(p: &DimensionProfile) -> String {
    csv_text(p.rows.iter().map(|r| DimensionRecord {
        f: r.f,
        mean_err_data: r.mean_err_data,
        mean_err_ref: finite(r.mean_err_ref),
        t: r.t.and_then(finite),
        reference: r.reference.map_or("", |s| s.as_str()),
        weight: r.weight,
    }))
}

/// Mean fit error of every point at every fit dimension.
pub fn point_errors_csv(p: &DimensionProfile, names: &[String]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["name".to_string()];
    header.extend((1..=p.f_max()).map(|f| format!("f{f}")));
    header.push("mean".into());
    w.write_record(&header).expect("in-memory write");
    let means = p.point_means();
    for (i, name) in names.iter().enumerate() {
        let mut rec = vec![name.clone()];
        rec.extend(p.point_row(i).iter().map(|v| v.to_string()));
        rec.push(means[i].to_string());
        w.write_record(&rec).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8")
}

#[derive(Serialize)]
struct DensityRecord<'a> {
    name: &'a str,
    density: f64,
}

pub fn density_csv(d: &DensityMap, names: &[String]) -> String {
    csv_text(names.iter().zip(&d.values).map(|(n, &v)| DensityRecord { name: n, density: v }))
}

#[derive(Serialize)]
struct IntervalRecord {
    birth: f64,
    death: Option<f64>,
}

impl From<&Interval> for IntervalRecord {
    fn from(iv: &Interval) -> Self {
        Self {
            birth: iv.birth,
            death: finite(iv.death),
        }
    }
}

#[derive(Serialize)]
struct DeltaRecord {
    total_before: f64,
    total_after: f64,
    vanished: Vec<IntervalRecord>,
    appeared: Vec<IntervalRecord>,
}

impl From<&BarcodeDelta> for DeltaRecord {
    fn from(d: &BarcodeDelta) -> Self {
        Self {
            total_before: d.total_before,
            total_after: d.total_after,
            vanished: d.vanished.iter().map(Into::into).collect(),
            appeared: d.appeared.iter().map(Into::into).collect(),
        }
    }
}

#[derive(Serialize)]
struct CandidateRecord<'a> {
    members: Vec<&'a str>,
    sequence: Vec<&'a str>,
    kind: &'static str,
    verdict: &'static str,
    delta: DeltaRecord,
    note: Option<&'a str>,
}

#[derive(Serialize)]
struct ReportRecord<'a> {
    cluster: Option<usize>,
    cluster_members: Vec<&'a str>,
    target_interval: Option<IntervalRecord>,
    candidates: Vec<CandidateRecord<'a>>,
}

/// Localisation report; a missing report means no significant cluster.
pub fn h1_report_json(report: Option<&H1Report>, tree: &ComponentsTree, names: &[String]) -> String {
    let name = |i: usize| names[i].as_str();
    let rec = match report {
        None => ReportRecord {
            cluster: None,
            cluster_members: Vec::new(),
            target_interval: None,
            candidates: Vec::new(),
        },
        Some(r) => ReportRecord {
            cluster: Some(r.cluster),
            cluster_members: tree.cluster(r.cluster).members.iter().map(|&i| name(i)).collect(),
            target_interval: Some((&r.target_interval).into()),
            candidates: r
                .candidates
                .iter()
                .map(|c| CandidateRecord {
                    members: c.cycle.members().into_iter().map(name).collect(),
                    sequence: c.cycle.vertices.iter().map(|&i| name(i)).collect(),
                    kind: if c.cycle.is_group { "group" } else { "cycle" },
                    verdict: c.verdict.as_str(),
                    delta: (&c.delta).into(),
                    note: c.note.as_deref(),
                })
                .collect(),
        },
    };
    let mut s = serde_json::to_string_pretty(&rec).expect("plain data");
    s.push('\n');
    s
}

/// Plain-text digest of a localisation report.
pub fn h1_report_text(report: Option<&H1Report>, names: &[String]) -> String {
    let Some(r) = report else {
        return "no topologically significant cluster\n".to_string();
    };
    let mut s = format!(
        "cluster {}: target H1 interval [{}, {})\n",
        r.cluster, r.target_interval.birth, r.target_interval.death
    );
    for c in &r.candidates {
        let seq: Vec<&str> = c.cycle.vertices.iter().map(|&i| names[i].as_str()).collect();
        let _ = write!(s, "  {:<22} {}", c.verdict.as_str(), seq.join(if c.cycle.is_group { ", " } else { " - " }));
        if let Some(n) = &c.note {
            let _ = write!(s, "  ({n})");
        }
        s.push('\n');
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::path::PathBuf;

    fn origin() -> PathBuf {
        PathBuf::from("test.csv")
    }

    #[test]
    fn missing_cell_is_masked() {
        let m = parse_matrix("name,p,q\nA,1,0\nB,?,1\n", Schema::Binary, &origin()).unwrap();
        assert_eq!(m.missing_mask(), &[false, false, true, false]);
    }

    #[test]
    fn domain_violation_names_the_cell() {
        let err = parse_matrix("name,p,q\nA,1,2\n", Schema::Binary, &origin()).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains('A') && msg.contains('q') && msg.contains('2'), "{msg}");
        assert_eq!(err.exit_code(), 3);
    }

    #[test]
    fn ternary_cells_load_complete() {
        let m = parse_matrix("name,p,q,r\nA,-1,0,+1\n", Schema::Ternary, &origin()).unwrap();
        assert!(!m.has_missing());
        assert_eq!(m.values(), &[-1.0, 0.0, 1.0]);
    }

    #[test]
    fn duplicate_names_are_rejected() {
        assert!(parse_matrix("name,p,p\nA,1,0\n", Schema::Binary, &origin()).is_err());
        assert!(parse_matrix("name,p\nA,1\nA,0\n", Schema::Binary, &origin()).is_err());
    }

    #[test]
    fn canonical_text_round_trips_exactly() {
        let text = "name,p,q\nA,1,0\nB,?,1\n";
        let m = parse_matrix(text, Schema::Binary, &origin()).unwrap();
        assert_eq!(matrix_to_csv(&m), text);
        let real = "name,x,y\n\"a,b\",0.1,-3.25e-7\nc,?,1e300\n";
        let m = parse_matrix(real, Schema::Real, &origin()).unwrap();
        let again = parse_matrix(&matrix_to_csv(&m), Schema::Real, &origin()).unwrap();
        assert_eq!(again, m);
        assert_eq!(matrix_to_csv(&again), matrix_to_csv(&m));
    }

    #[test]
    fn empty_cells_serialise_as_missing() {
        let m = parse_matrix("name,p,q\nA,,1\n", Schema::Binary, &origin()).unwrap();
        assert_eq!(matrix_to_csv(&m), "name,p,q\nA,?,1\n");
    }

    #[test]
    fn barcode_json_uses_null_for_infinity() {
        let bc = Barcode {
            dims: vec![vec![Interval::new(0.0, f64::INFINITY)], vec![Interval::new(1.0, 1.5)]],
        };
        let v: serde_json::Value = serde_json::from_str(&barcode_json(&bc)).unwrap();
        assert_eq!(v[0]["death"], serde_json::Value::Null);
        assert_eq!(v[1]["dim"], 1);
        assert_eq!(v[1]["death"], 1.5);
    }

    #[test]
    fn dot_lists_edges_within_radius() {
        let dm = DistanceMatrix::from_coords(1, &[0.0, 1.0, 3.0]);
        let names: Vec<String> = ["A", "B", "C\"x"].iter().map(|s| s.to_string()).collect();
        let dot = skeleton_dot(&dm, &names, 1.0);
        assert!(dot.contains("\"A\" -- \"B\";"));
        assert!(!dot.contains("\"B\" -- "));
        assert!(dot.contains("\"C\\\"x\";"));
    }

    #[test]
    fn atomic_write_replaces_contents() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("a.txt");
        write_atomic(&p, b"one").unwrap();
        write_atomic(&p, b"two").unwrap();
        assert_eq!(fs::read_to_string(&p).unwrap(), "two");
        assert_eq!(fs::read_dir(dir.path()).unwrap().count(), 1);
    }

    proptest::proptest! {
        #[test]
        fn saved_matrices_reload_identically(
            cells in proptest::collection::vec(proptest::option::of(-1e6f64..1e6), 1..40),
            cols in 1usize..5,
        ) {
            let rows = cells.len() / cols;
            proptest::prop_assume!(rows > 0);
            let cells = cells[..rows * cols].to_vec();
            let m = ParameterMatrix::new(
                (0..rows).map(|i| format!("row {i}")).collect(),
                (0..cols).map(|j| format!("c,{j}")).collect(),
                cells,
                Schema::Real,
            ).unwrap();
            let text = matrix_to_csv(&m);
            let again = parse_matrix(&text, Schema::Real, &origin()).unwrap();
            proptest::prop_assert_eq!(&again, &m);
            proptest::prop_assert_eq!(matrix_to_csv(&again), text);
        }
    }
}
