//! Edge-list ingestion and entropy time series over timestamped snapshots.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::io::{self, BufRead, BufReader, Write};
use std::path::Path;
use std::str::FromStr;

use crate::error::{domain, Error, Result};
use crate::estimators::{estimate, Estimator, EstimatorOptions};
use crate::graph::Graph;

/// Timestamp key: an opaque integer or a calendar date `YYYY-MM[-DD]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TimeKey {
    Int(i64),
    Date { year: i32, month: u8, day: Option<u8> },
}

impl FromStr for TimeKey {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        if let Ok(v) = s.parse::<i64>() {
            return Ok(TimeKey::Int(v));
        }
        let parts: Vec<&str> = s.split('-').collect();
        let bad = || format!("timestamp {s:?} is neither an integer nor YYYY-MM[-DD]");
        if !(2..=3).contains(&parts.len()) || parts[0].len() != 4 {
            return Err(bad());
        }
        let year: i32 = parts[0].parse().map_err(|_| bad())?;
        let month: u8 = parts[1].parse().map_err(|_| bad())?;
        if !(1..=12).contains(&month) {
            return Err(bad());
        }
        let day = match parts.get(2) {
            Some(d) => {
                let d: u8 = d.parse().map_err(|_| bad())?;
                if !(1..=31).contains(&d) {
                    return Err(bad());
                }
                Some(d)
            }
            None => None,
        };
        Ok(TimeKey::Date { year, month, day })
    }
}

impl fmt::Display for TimeKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TimeKey::Int(v) => write!(f, "{v}"),
            TimeKey::Date { year, month, day: None } => write!(f, "{year:04}-{month:02}"),
            TimeKey::Date { year, month, day: Some(d) } => write!(f, "{year:04}-{month:02}-{d:02}"),
        }
    }
}

/// One undirected tie; endpoints are stored in canonical (sorted) order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeRecord {
    pub u: String,
    pub v: String,
    pub t: Option<TimeKey>,
}

#[derive(Clone, Debug)]
pub struct ParseOptions {
    /// Field delimiter; `None` splits on whitespace.
    pub delimiter: Option<char>,
    pub has_timestamps: bool,
    pub comment_prefix: String,
}

impl Default for ParseOptions {
    fn default() -> Self {
        Self { delimiter: None, has_timestamps: false, comment_prefix: "#".into() }
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct ParsedEdges {
    /// Distinct records in first-seen order.
    pub records: Vec<EdgeRecord>,
    pub self_loops: usize,
    pub duplicates: usize,
    /// `(line number, message)` for every line that could not be read.
    pub malformed: Vec<(usize, String)>,
}

impl ParsedEdges {
    /// Node tokens in order of first appearance.
    pub fn universe(&self) -> Vec<String> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for r in &self.records {
            for tok in [&r.u, &r.v] {
                if seen.insert(tok.clone()) {
                    out.push(tok.clone());
                }
            }
        }
        out
    }

    /// The whole record set as one graph (timestamps ignored) with its node universe.
    pub fn to_graph(&self) -> (Graph, Vec<String>) {
        let universe = self.universe();
        let index: HashMap<&str, usize> = universe.iter().enumerate().map(|(i, s)| (s.as_str(), i)).collect();
        let mut g = Graph::empty(universe.len());
        for r in &self.records {
            g.add_edge(index[r.u.as_str()], index[r.v.as_str()]);
        }
        (g, universe)
    }
}

/// Reads edge records from any buffered source.
pub fn parse_edges<R: BufRead>(input: R, opts: &ParseOptions) -> Result<ParsedEdges> {
    let mut out = ParsedEdges::default();
    let mut seen = BTreeSet::new();
    let want = if opts.has_timestamps { 3 } else { 2 };
    let mut time_kind: Option<bool> = None;
    for (idx, line) in input.lines().enumerate() {
        let lineno = idx + 1;
        let line = line?;
        let t = line.trim();
        if t.is_empty() || (!opts.comment_prefix.is_empty() && t.starts_with(opts.comment_prefix.as_str())) {
            continue;
        }
        let fields: Vec<&str> = match opts.delimiter {
            Some(d) => t.split(d).map(str::trim).collect(),
            None => t.split_whitespace().collect(),
        };
        if fields.len() < want || fields[..want].iter().any(|f| f.is_empty()) {
            out.malformed.push((lineno, format!("expected {want} fields, got {}", fields.len())));
            continue;
        }
        let time = if opts.has_timestamps {
            match fields[2].parse::<TimeKey>() {
                Ok(k) => {
                    let is_int = matches!(k, TimeKey::Int(_));
                    if *time_kind.get_or_insert(is_int) != is_int {
                        out.malformed.push((lineno, "mixes integer and date timestamps".into()));
                        continue;
                    }
                    Some(k)
                }
                Err(msg) => {
                    out.malformed.push((lineno, msg));
                    continue;
                }
            }
        } else {
            None
        };
        let (a, b) = (fields[0], fields[1]);
        if a == b {
            out.self_loops += 1;
            continue;
        }
        let (u, v) = if a <= b { (a, b) } else { (b, a) };
        let rec = EdgeRecord { u: u.to_string(), v: v.to_string(), t: time };
        if seen.insert(rec.clone()) {
            out.records.push(rec);
        } else {
            out.duplicates += 1;
        }
    }
    if out.records.is_empty() {
        return Err(Error::Degenerate("edge list contains no valid edges".into()));
    }
    Ok(out)
}

pub fn parse_edge_list(path: &Path, opts: &ParseOptions) -> Result<ParsedEdges> {
    let file = std::fs::File::open(path)?;
    parse_edges(BufReader::new(file), opts)
}

/// Canonical form: one `u v [t]` line per record, whitespace separated.
pub fn write_edge_records<W: Write>(mut w: W, records: &[EdgeRecord]) -> io::Result<()> {
    for r in records {
        match r.t {
            Some(t) => writeln!(w, "{} {} {t}", r.u, r.v)?,
            None => writeln!(w, "{} {}", r.u, r.v)?,
        }
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq)]
pub enum Window {
    Monthly,
    Yearly,
    /// Window starts; records before the first boundary form their own leading window.
    Custom(Vec<TimeKey>),
}

impl FromStr for Window {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "monthly" => Ok(Window::Monthly),
            "yearly" => Ok(Window::Yearly),
            other => {
                let bounds = other
                    .split(',')
                    .map(|b| b.trim().parse::<TimeKey>().map_err(|m| domain(m)))
                    .collect::<Result<Vec<_>>>()?;
                if bounds.windows(2).any(|w| w[0] >= w[1]) {
                    return Err(domain("custom window boundaries must be strictly increasing"));
                }
                Ok(Window::Custom(bounds))
            }
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum SnapshotMode {
    #[default]
    Cumulative,
    Windowed,
}

impl FromStr for SnapshotMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "cumulative" => Ok(SnapshotMode::Cumulative),
            "windowed" => Ok(SnapshotMode::Windowed),
            other => Err(domain(format!("unknown snapshot mode {other:?} (expected cumulative or windowed)"))),
        }
    }
}

/// Window label used to order and name snapshots.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum Bucket {
    Key(TimeKey),
    Custom(usize),
}

fn bucket_of(t: TimeKey, window: &Window) -> Bucket {
    match (window, t) {
        (Window::Monthly, TimeKey::Date { year, month, .. }) => Bucket::Key(TimeKey::Date { year, month, day: None }),
        (Window::Yearly, TimeKey::Date { year, .. }) => Bucket::Key(TimeKey::Int(year as i64)),
        // integer keys are opaque: each distinct value is its own window
        (Window::Monthly | Window::Yearly, TimeKey::Int(_)) => Bucket::Key(t),
        (Window::Custom(bounds), _) => Bucket::Custom(bounds.partition_point(|b| *b <= t)),
    }
}

fn bucket_label(b: &Bucket, window: &Window) -> String {
    match (b, window) {
        (Bucket::Key(k), _) => k.to_string(),
        (Bucket::Custom(0), Window::Custom(bounds)) => format!("<{}", bounds[0]),
        (Bucket::Custom(i), Window::Custom(bounds)) => bounds[i - 1].to_string(),
        (Bucket::Custom(i), _) => i.to_string(),
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SnapshotSeries {
    pub labels: Vec<String>,
    pub graphs: Vec<Graph>,
    /// Node tokens; index `i` in every snapshot graph is `universe[i]`.
    pub universe: Vec<String>,
}

/// Buckets records into windows. `Windowed` keeps only each window's own edges;
/// `Cumulative` keeps every edge up to the end of the window.
pub fn build_snapshots(parsed: &ParsedEdges, window: &Window, mode: SnapshotMode) -> Result<SnapshotSeries> {
    if parsed.records.iter().any(|r| r.t.is_none()) {
        return Err(domain("snapshots need a timestamp on every record"));
    }
    let universe = parsed.universe();
    let index: HashMap<&str, usize> = universe.iter().enumerate().map(|(i, s)| (s.as_str(), i)).collect();
    let mut buckets: BTreeMap<Bucket, Vec<(usize, usize)>> = BTreeMap::new();
    for r in &parsed.records {
        let b = bucket_of(r.t.expect("checked above"), window);
        buckets.entry(b).or_default().push((index[r.u.as_str()], index[r.v.as_str()]));
    }
    let n = universe.len();
    let mut labels = Vec::with_capacity(buckets.len());
    let mut graphs = Vec::with_capacity(buckets.len());
    let mut running = Graph::empty(n);
    for (b, edges) in &buckets {
        labels.push(bucket_label(b, window));
        match mode {
            SnapshotMode::Windowed => graphs.push(Graph::from_edges(n, edges.iter().copied())?),
            SnapshotMode::Cumulative => {
                for &(u, v) in edges {
                    running.add_edge(u, v);
                }
                graphs.push(running.clone());
            }
        }
    }
    Ok(SnapshotSeries { labels, graphs, universe })
}

#[derive(Clone, Debug, PartialEq)]
pub struct TimeseriesRow {
    pub timestamp: String,
    pub n_active: usize,
    pub rho_hat: Option<f64>,
    pub entropy: Option<f64>,
    pub variance: Option<f64>,
    /// Set when no estimate could be produced for the snapshot.
    pub flag: Option<String>,
}

/// Applies `estimator` to each snapshot. With `active_only`, each snapshot is first
/// restricted to nodes of degree at least one.
pub fn entropy_timeseries(
    series: &SnapshotSeries,
    estimator: Estimator,
    opts: &EstimatorOptions,
    active_only: bool,
) -> Result<Vec<TimeseriesRow>> {
    if series.graphs.is_empty() {
        return Err(domain("no snapshots to analyse"));
    }
    Ok(series
        .graphs
        .iter()
        .zip(&series.labels)
        .map(|(g, label)| {
            let sub = if active_only {
                let active: Vec<usize> = g.degrees().iter().enumerate().filter(|(_, &d)| d > 0).map(|(i, _)| i).collect();
                g.induced(&active)
            } else {
                g.clone()
            };
            let n_active = sub.node_count();
            let mut row = TimeseriesRow {
                timestamp: label.clone(),
                n_active,
                rho_hat: None,
                entropy: None,
                variance: None,
                flag: None,
            };
            if n_active < 2 {
                row.flag = Some("fewer than 2 active nodes".into());
                return row;
            }
            match estimate::<f64>(&sub, estimator, opts) {
                Ok(est) => {
                    row.rho_hat = Some(est.rho_hat);
                    row.entropy = Some(est.value);
                    row.variance = est.asymptotic_variance;
                }
                Err(e) => {
                    row.rho_hat = Some(sub.edge_count() as f64 / crate::graph::pair_count(n_active) as f64);
                    row.flag = Some(e.to_string());
                }
            }
            row
        })
        .collect())
}

pub const TIMESERIES_CSV_HEADER: &str = "timestamp,n_active,rho_hat,entropy,variance,flag";

/// Writes the series with `# key=value` header lines recording the options used.
pub fn write_timeseries_csv<W: Write>(mut w: W, rows: &[TimeseriesRow], header: &[(String, String)], bits: bool) -> io::Result<()> {
    for (k, v) in header {
        writeln!(w, "# {k}={v}")?;
    }
    writeln!(w, "{TIMESERIES_CSV_HEADER}")?;
    let (s, s2) = if bits {
        let s = 1.0 / std::f64::consts::LN_2;
        (s, s * s)
    } else {
        (1.0, 1.0)
    };
    let opt = |v: Option<f64>, scale: f64| v.map(|x| (x * scale).to_string()).unwrap_or_default();
    for r in rows {
        writeln!(
            w,
            "{},{},{},{},{},{}",
            r.timestamp,
            r.n_active,
            opt(r.rho_hat, 1.0),
            opt(r.entropy, s),
            opt(r.variance, s2),
            r.flag.as_deref().unwrap_or("").replace([',', '\n'], ";")
        )?;
    }
    Ok(())
}
