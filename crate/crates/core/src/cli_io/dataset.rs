use std::fmt;
use std::path::Path;

use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};

use crate::boxcert::Box;
use crate::error::{Error, Result};
use crate::exactnum::{fmt_rat, parse_number, Ival, Rat};
use crate::gram::Point;
use crate::polybasis::{parse_poly, Monomial, Support};
use crate::segrecon::Segment;

/// A coordinate known exactly or only up to an enclosing interval.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Coord {
    Exact(Rat),
    Interval(Ival),
}

impl Coord {
    pub fn ival(&self) -> Ival {
        match self {
            Coord::Exact(r) => Ival::point(r.clone()),
            Coord::Interval(i) => i.clone(),
        }
    }

    pub fn exact(&self) -> Option<&Rat> {
        match self {
            Coord::Exact(r) => Some(r),
            Coord::Interval(_) => None,
        }
    }

    fn parse(raw: &RawCoord, at: &str) -> Result<Self> {
        match raw {
            RawCoord::Exact(s) => Ok(Coord::Exact(number(s, at)?)),
            RawCoord::Interval([a, b]) => {
                let (lo, hi) = (number(a, at)?, number(b, at)?);
                if lo > hi {
                    return Err(parse_err(at, "interval endpoints out of order"));
                }
                Ok(Coord::Interval(Ival::new(lo, hi)))
            }
        }
    }

    fn raw(&self) -> RawCoord {
        match self {
            Coord::Exact(r) => RawCoord::Exact(fmt_rat(r)),
            Coord::Interval(i) => RawCoord::Interval([fmt_rat(i.lo()), fmt_rat(i.hi())]),
        }
    }

    fn cell(&self) -> String {
        match self {
            Coord::Exact(r) => fmt_rat(r),
            Coord::Interval(i) => format!("{}..{}", fmt_rat(i.lo()), fmt_rat(i.hi())),
        }
    }

    fn from_cell(s: &str, at: &str) -> Result<Self> {
        match s.split_once("..") {
            Some((a, b)) => Coord::parse(&RawCoord::Interval([a.into(), b.into()]), at),
            None => Coord::parse(&RawCoord::Exact(s.into()), at),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DatasetKind {
    Points,
    Boxes,
    Segments,
    Coefficients,
}

impl fmt::Display for DatasetKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DatasetKind::Points => "points",
            DatasetKind::Boxes => "boxes",
            DatasetKind::Segments => "segments",
            DatasetKind::Coefficients => "coefficients",
        })
    }
}

impl std::str::FromStr for DatasetKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "points" => Ok(DatasetKind::Points),
            "boxes" => Ok(DatasetKind::Boxes),
            "segments" => Ok(DatasetKind::Segments),
            "coefficients" => Ok(DatasetKind::Coefficients),
            _ => Err(Error::Invalid(format!("unknown dataset kind {s:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointEntry {
    pub label: Option<String>,
    pub x: Coord,
    pub y: Coord,
    /// Closed forms for coordinates given as enclosures.
    pub expr: Option<[String; 2]>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoxEntry {
    pub label: Option<String>,
    pub x: Ival,
    pub y: Ival,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SegmentEntry {
    pub label: Option<String>,
    pub x: Rat,
    pub y: Rat,
    /// Overrides the dataset-wide delta.
    pub delta: Option<Rat>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoefficientEntry {
    pub monomial: Monomial,
    pub value: Coord,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Entries {
    Points(Vec<PointEntry>),
    Boxes(Vec<BoxEntry>),
    Segments(Vec<SegmentEntry>),
    Coefficients(Vec<CoefficientEntry>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Metadata {
    pub name: String,
    pub source: String,
    pub variables: (String, String),
    /// 1-based entry index groups.
    pub groups: Vec<Vec<usize>>,
    pub notes: Vec<String>,
    pub delta: Option<Rat>,
}

impl Default for Metadata {
    fn default() -> Self {
        Metadata {
            name: String::new(),
            source: String::new(),
            variables: ("x".into(), "y".into()),
            groups: Vec::new(),
            notes: Vec::new(),
            delta: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dataset {
    pub metadata: Metadata,
    pub entries: Entries,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

impl Format {
    pub fn from_path(path: &Path) -> Format {
        match path.extension().and_then(|e| e.to_str()) {
            Some(e) if e.eq_ignore_ascii_case("csv") => Format::Csv,
            _ => Format::Json,
        }
    }
}

impl std::str::FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            _ => Err(Error::Invalid(format!("unknown format {s:?}"))),
        }
    }
}

fn parse_err(at: &str, msg: impl Into<String>) -> Error {
    Error::Parse {
        location: at.to_string(),
        message: msg.into(),
    }
}

fn number(s: &str, at: &str) -> Result<Rat> {
    parse_number(s).map_err(|e| parse_err(at, e.to_string()))
}

pub(crate) fn parse_monomial(s: &str, vars: (&str, &str), at: &str) -> Result<Monomial> {
    let p = parse_poly(s, &[vars]).map_err(|e| parse_err(at, e.to_string()))?;
    match p.terms().collect::<Vec<_>>().as_slice() {
        [(m, c)] if c.is_one() => Ok(**m),
        _ => Err(parse_err(at, format!("{s:?} is not a single monomial"))),
    }
}

impl Dataset {
    pub fn kind(&self) -> DatasetKind {
        match &self.entries {
            Entries::Points(_) => DatasetKind::Points,
            Entries::Boxes(_) => DatasetKind::Boxes,
            Entries::Segments(_) => DatasetKind::Segments,
            Entries::Coefficients(_) => DatasetKind::Coefficients,
        }
    }

    pub fn len(&self) -> usize {
        match &self.entries {
            Entries::Points(v) => v.len(),
            Entries::Boxes(v) => v.len(),
            Entries::Segments(v) => v.len(),
            Entries::Coefficients(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn vars(&self) -> (&str, &str) {
        (&self.metadata.variables.0, &self.metadata.variables.1)
    }

    fn mismatch(&self, want: &str) -> Error {
        Error::Invalid(format!(
            "dataset {:?} holds {}, expected {want}",
            self.metadata.name,
            self.kind()
        ))
    }

    pub fn labels(&self) -> Vec<String> {
        let pick =
            |l: &Option<String>, i: usize| l.clone().unwrap_or_else(|| format!("#{}", i + 1));
        match &self.entries {
            Entries::Points(v) => v
                .iter()
                .enumerate()
                .map(|(i, e)| pick(&e.label, i))
                .collect(),
            Entries::Boxes(v) => v
                .iter()
                .enumerate()
                .map(|(i, e)| pick(&e.label, i))
                .collect(),
            Entries::Segments(v) => v
                .iter()
                .enumerate()
                .map(|(i, e)| pick(&e.label, i))
                .collect(),
            Entries::Coefficients(v) => v.iter().map(|e| e.monomial.render(self.vars())).collect(),
        }
    }

    /// Exact points; segments contribute their centers.
    pub fn exact_points(&self) -> Result<Vec<Point<Rat>>> {
        match &self.entries {
            Entries::Points(v) => v
                .iter()
                .enumerate()
                .map(|(i, e)| match (e.x.exact(), e.y.exact()) {
                    (Some(x), Some(y)) => Ok((x.clone(), y.clone())),
                    _ => Err(Error::Invalid(format!(
                        "entry {} has interval coordinates",
                        i + 1
                    ))),
                })
                .collect(),
            Entries::Segments(_) => Ok(self.segments()?.iter().map(Segment::center).collect()),
            _ => Err(self.mismatch("points")),
        }
    }

    /// Enclosures of points or boxes.
    pub fn ival_points(&self) -> Result<Vec<Point<Ival>>> {
        match &self.entries {
            Entries::Points(v) => Ok(v.iter().map(|e| (e.x.ival(), e.y.ival())).collect()),
            Entries::Boxes(v) => Ok(v.iter().map(|e| (e.x.clone(), e.y.clone())).collect()),
            _ => Err(self.mismatch("points or boxes")),
        }
    }

    /// Boxes; points become their own enclosing boxes.
    pub fn boxes(&self) -> Result<Vec<Box>> {
        self.ival_points()?
            .into_iter()
            .map(|(x, y)| {
                Box::new(
                    x.lo().clone(),
                    x.hi().clone(),
                    y.lo().clone(),
                    y.hi().clone(),
                )
            })
            .collect()
    }

    pub fn segments(&self) -> Result<Vec<Segment>> {
        let Entries::Segments(v) = &self.entries else {
            return Err(self.mismatch("segments"));
        };
        v.iter()
            .enumerate()
            .map(|(i, e)| {
                let delta = e
                    .delta
                    .clone()
                    .or_else(|| self.metadata.delta.clone())
                    .ok_or_else(|| Error::Invalid(format!("segment {} has no delta", i + 1)))?;
                Segment::new(e.x.clone(), e.y.clone(), delta)
            })
            .collect()
    }

    /// Support in graded order with the matching coefficient windows.
    pub fn coefficients(&self) -> Result<(Support, Vec<Ival>)> {
        let Entries::Coefficients(v) = &self.entries else {
            return Err(self.mismatch("coefficients"));
        };
        let support = Support::new(v.iter().map(|e| e.monomial).collect())?;
        let mut windows = vec![Ival::zero(); v.len()];
        for e in v {
            let k = support.index_of(&e.monomial).expect("monomial in support");
            windows[k] = e.value.ival();
        }
        Ok((support, windows))
    }

    /// Groups as 0-based index lists.
    pub fn groups(&self) -> Vec<Vec<usize>> {
        self.metadata
            .groups
            .iter()
            .map(|g| g.iter().map(|i| i - 1).collect())
            .collect()
    }

    fn validate(self) -> Result<Self> {
        if self.is_empty() {
            return Err(parse_err("entries", "dataset has no entries"));
        }
        let n = self.len();
        for (gi, g) in self.metadata.groups.iter().enumerate() {
            if let Some(&bad) = g.iter().find(|&&i| i == 0 || i > n) {
                return Err(parse_err(
                    &format!("groups[{gi}]"),
                    format!("index {bad} outside 1..={n}"),
                ));
            }
        }
        if let Some(d) = &self.metadata.delta {
            if !d.is_positive() {
                return Err(parse_err("delta", "delta must be positive"));
            }
        }
        if let Entries::Segments(v) = &self.entries {
            for (i, e) in v.iter().enumerate() {
                match e.delta.as_ref().or(self.metadata.delta.as_ref()) {
                    Some(d) if d.is_positive() => {}
                    Some(_) => {
                        return Err(parse_err(
                            &format!("entries[{i}].delta"),
                            "delta must be positive",
                        ))
                    }
                    None => {
                        return Err(parse_err(&format!("entries[{i}]"), "segment has no delta"))
                    }
                }
            }
        }
        if let Entries::Coefficients(v) = &self.entries {
            Support::new(v.iter().map(|e| e.monomial).collect())
                .map_err(|e| parse_err("entries", e.to_string()))?;
        }
        Ok(self)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: RawDataset = serde_json::from_str(text)?;
        raw.into_dataset()
    }

    pub fn to_json(&self) -> String {
        let mut s =
            serde_json::to_string_pretty(&RawDataset::from(self)).expect("dataset serializes");
        s.push('\n');
        s
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        csv_io::read(text)
    }

    pub fn to_csv(&self) -> String {
        csv_io::write(self)
    }

    pub fn parse(text: &str, format: Format) -> Result<Self> {
        match format {
            Format::Json => Dataset::from_json(text),
            Format::Csv => Dataset::from_csv(text),
        }
    }

    pub fn emit(&self, format: Format) -> String {
        match format {
            Format::Json => self.to_json(),
            Format::Csv => self.to_csv(),
        }
    }
}

/// Reads a dataset file; the format follows the extension unless given.
pub fn load_dataset(path: &Path, format: Option<Format>) -> Result<Dataset> {
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })?;
    Dataset::parse(&text, format.unwrap_or_else(|| Format::from_path(path)))
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
enum RawCoord {
    Exact(String),
    Interval([String; 2]),
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawEntry {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    label: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    monomial: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    x: Option<RawCoord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    y: Option<RawCoord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    delta: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    value: Option<RawCoord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    expr: Option<[String; 2]>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDataset {
    kind: DatasetKind,
    #[serde(default)]
    name: String,
    #[serde(default)]
    source: String,
    #[serde(default = "default_vars")]
    variables: [String; 2],
    #[serde(default, skip_serializing_if = "Option::is_none")]
    delta: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    groups: Vec<Vec<usize>>,
    #[serde(default)]
    notes: Vec<String>,
    entries: Vec<RawEntry>,
}

fn default_vars() -> [String; 2] {
    ["x".into(), "y".into()]
}

impl RawEntry {
    fn allow_only(&self, at: &str, allowed: &[&str]) -> Result<()> {
        let present = [
            ("label", self.label.is_some()),
            ("monomial", self.monomial.is_some()),
            ("x", self.x.is_some()),
            ("y", self.y.is_some()),
            ("delta", self.delta.is_some()),
            ("value", self.value.is_some()),
            ("expr", self.expr.is_some()),
        ];
        match present.iter().find(|(k, on)| *on && !allowed.contains(k)) {
            Some((k, _)) => Err(parse_err(
                at,
                format!("field {k:?} does not belong to this dataset kind"),
            )),
            None => Ok(()),
        }
    }
}

fn need<'a, T>(v: &'a Option<T>, at: &str, field: &str) -> Result<&'a T> {
    v.as_ref()
        .ok_or_else(|| parse_err(at, format!("missing field {field:?}")))
}

fn exact_field(v: &Option<RawCoord>, at: &str, field: &str) -> Result<Rat> {
    let at = format!("{at}.{field}");
    match need(v, &at, field)? {
        RawCoord::Exact(s) => number(s, &at),
        RawCoord::Interval(_) => Err(parse_err(&at, "expected a single number")),
    }
}

fn interval_field(v: &Option<RawCoord>, at: &str, field: &str) -> Result<Ival> {
    let at = format!("{at}.{field}");
    Ok(Coord::parse(need(v, &at, field)?, &at)?.ival())
}

fn clean_label(l: &Option<String>) -> Option<String> {
    l.clone().filter(|s| !s.is_empty())
}

impl RawDataset {
    fn into_dataset(self) -> Result<Dataset> {
        let [vx, vy] = self.variables;
        let vars = (vx.as_str(), vy.as_str());
        let at = |i: usize| format!("entries[{i}]");
        let entries = match self.kind {
            DatasetKind::Points => Entries::Points(
                self.entries
                    .iter()
                    .enumerate()
                    .map(|(i, e)| {
                        e.allow_only(&at(i), &["label", "x", "y", "expr"])?;
                        Ok(PointEntry {
                            label: clean_label(&e.label),
                            x: Coord::parse(need(&e.x, &at(i), "x")?, &format!("{}.x", at(i)))?,
                            y: Coord::parse(need(&e.y, &at(i), "y")?, &format!("{}.y", at(i)))?,
                            expr: e.expr.clone(),
                        })
                    })
                    .collect::<Result<_>>()?,
            ),
            DatasetKind::Boxes => Entries::Boxes(
                self.entries
                    .iter()
                    .enumerate()
                    .map(|(i, e)| {
                        e.allow_only(&at(i), &["label", "x", "y"])?;
                        Ok(BoxEntry {
                            label: clean_label(&e.label),
                            x: interval_field(&e.x, &at(i), "x")?,
                            y: interval_field(&e.y, &at(i), "y")?,
                        })
                    })
                    .collect::<Result<_>>()?,
            ),
            DatasetKind::Segments => Entries::Segments(
                self.entries
                    .iter()
                    .enumerate()
                    .map(|(i, e)| {
                        e.allow_only(&at(i), &["label", "x", "y", "delta"])?;
                        Ok(SegmentEntry {
                            label: clean_label(&e.label),
                            x: exact_field(&e.x, &at(i), "x")?,
                            y: exact_field(&e.y, &at(i), "y")?,
                            delta: e
                                .delta
                                .as_deref()
                                .map(|d| number(d, &format!("{}.delta", at(i))))
                                .transpose()?,
                        })
                    })
                    .collect::<Result<_>>()?,
            ),
            DatasetKind::Coefficients => Entries::Coefficients(
                self.entries
                    .iter()
                    .enumerate()
                    .map(|(i, e)| {
                        e.allow_only(&at(i), &["monomial", "value"])?;
                        let m = need(&e.monomial, &at(i), "monomial")?;
                        Ok(CoefficientEntry {
                            monomial: parse_monomial(m, vars, &format!("{}.monomial", at(i)))?,
                            value: Coord::parse(
                                need(&e.value, &at(i), "value")?,
                                &format!("{}.value", at(i)),
                            )?,
                        })
                    })
                    .collect::<Result<_>>()?,
            ),
        };
        let metadata = Metadata {
            name: self.name,
            source: self.source,
            variables: (vx, vy),
            groups: self.groups,
            notes: self.notes,
            delta: self
                .delta
                .as_deref()
                .map(|d| number(d, "delta"))
                .transpose()?,
        };
        Dataset { metadata, entries }.validate()
    }
}

impl From<&Dataset> for RawDataset {
    fn from(d: &Dataset) -> Self {
        let vars = d.vars();
        let entries = match &d.entries {
            Entries::Points(v) => v
                .iter()
                .map(|e| RawEntry {
                    label: e.label.clone(),
                    x: Some(e.x.raw()),
                    y: Some(e.y.raw()),
                    expr: e.expr.clone(),
                    ..Default::default()
                })
                .collect(),
            Entries::Boxes(v) => v
                .iter()
                .map(|e| RawEntry {
                    label: e.label.clone(),
                    x: Some(Coord::Interval(e.x.clone()).raw()),
                    y: Some(Coord::Interval(e.y.clone()).raw()),
                    ..Default::default()
                })
                .collect(),
            Entries::Segments(v) => v
                .iter()
                .map(|e| RawEntry {
                    label: e.label.clone(),
                    x: Some(RawCoord::Exact(fmt_rat(&e.x))),
                    y: Some(RawCoord::Exact(fmt_rat(&e.y))),
                    delta: e.delta.as_ref().map(fmt_rat),
                    ..Default::default()
                })
                .collect(),
            Entries::Coefficients(v) => v
                .iter()
                .map(|e| RawEntry {
                    monomial: Some(e.monomial.render(vars)),
                    value: Some(e.value.raw()),
                    ..Default::default()
                })
                .collect(),
        };
        RawDataset {
            kind: d.kind(),
            name: d.metadata.name.clone(),
            source: d.metadata.source.clone(),
            variables: [
                d.metadata.variables.0.clone(),
                d.metadata.variables.1.clone(),
            ],
            delta: d.metadata.delta.as_ref().map(fmt_rat),
            groups: d.metadata.groups.clone(),
            notes: d.metadata.notes.clone(),
            entries,
        }
    }
}

/// CSV layout: `# key: value` metadata lines, then a header row and one
/// record per entry. Intervals are written `lo..hi`.
mod csv_io {
    use super::*;

    fn header(kind: DatasetKind) -> &'static [&'static str] {
        match kind {
            DatasetKind::Points => &["label", "x", "y", "x_expr", "y_expr"],
            DatasetKind::Boxes => &["label", "x_lo", "x_hi", "y_lo", "y_hi"],
            DatasetKind::Segments => &["label", "x", "y", "delta"],
            DatasetKind::Coefficients => &["monomial", "value"],
        }
    }

    pub(super) fn write(d: &Dataset) -> String {
        let m = &d.metadata;
        let mut out = format!(
            "# kind: {}\n# name: {}\n# source: {}\n# variables: {},{}\n",
            d.kind(),
            m.name,
            m.source,
            m.variables.0,
            m.variables.1
        );
        if let Some(delta) = &m.delta {
            out += &format!("# delta: {}\n", fmt_rat(delta));
        }
        if !m.groups.is_empty() {
            let g: Vec<String> = m
                .groups
                .iter()
                .map(|g| g.iter().map(usize::to_string).collect::<Vec<_>>().join(" "))
                .collect();
            out += &format!("# groups: {}\n", g.join(";"));
        }
        for n in &m.notes {
            out += &format!("# note: {n}\n");
        }
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        let rows: Vec<Vec<String>> = match &d.entries {
            Entries::Points(v) => v
                .iter()
                .map(|e| {
                    let [ex, ey] = e.expr.clone().unwrap_or_default();
                    vec![
                        e.label.clone().unwrap_or_default(),
                        e.x.cell(),
                        e.y.cell(),
                        ex,
                        ey,
                    ]
                })
                .collect(),
            Entries::Boxes(v) => v
                .iter()
                .map(|e| {
                    vec![
                        e.label.clone().unwrap_or_default(),
                        fmt_rat(e.x.lo()),
                        fmt_rat(e.x.hi()),
                        fmt_rat(e.y.lo()),
                        fmt_rat(e.y.hi()),
                    ]
                })
                .collect(),
            Entries::Segments(v) => v
                .iter()
                .map(|e| {
                    vec![
                        e.label.clone().unwrap_or_default(),
                        fmt_rat(&e.x),
                        fmt_rat(&e.y),
                        e.delta.as_ref().map(fmt_rat).unwrap_or_default(),
                    ]
                })
                .collect(),
            Entries::Coefficients(v) => v
                .iter()
                .map(|e| vec![e.monomial.render(d.vars()), e.value.cell()])
                .collect(),
        };
        w.write_record(header(d.kind())).expect("in-memory csv");
        for r in rows {
            w.write_record(&r).expect("in-memory csv");
        }
        out + &String::from_utf8(w.into_inner().expect("in-memory csv")).expect("utf8 csv")
    }

    pub(super) fn read(text: &str) -> Result<Dataset> {
        let mut meta = Metadata::default();
        let mut kind = None;
        let mut body_start = 0;
        for (ln, line) in text.lines().enumerate() {
            let Some(rest) = line.strip_prefix('#') else {
                break;
            };
            body_start = ln + 1;
            let at = format!("line {}", ln + 1);
            let Some((k, v)) = rest.split_once(':') else {
                continue;
            };
            let v = v.trim();
            match k.trim() {
                "kind" => {
                    kind = Some(
                        v.parse::<DatasetKind>()
                            .map_err(|e| parse_err(&at, e.to_string()))?,
                    )
                }
                "name" => meta.name = v.into(),
                "source" => meta.source = v.into(),
                "variables" => {
                    let (a, b) = v
                        .split_once(',')
                        .ok_or_else(|| parse_err(&at, "expected two variable names"))?;
                    meta.variables = (a.trim().into(), b.trim().into());
                }
                "delta" => meta.delta = Some(number(v, &at)?),
                "groups" => {
                    meta.groups = v
                        .split(';')
                        .map(|g| {
                            g.split_whitespace()
                                .map(|i| {
                                    i.parse::<usize>()
                                        .map_err(|e| parse_err(&at, e.to_string()))
                                })
                                .collect::<Result<Vec<_>>>()
                        })
                        .collect::<Result<_>>()?
                }
                "note" => meta.notes.push(v.into()),
                other => return Err(parse_err(&at, format!("unknown metadata key {other:?}"))),
            }
        }
        let kind = kind.ok_or_else(|| parse_err("line 1", "missing '# kind:' line"))?;
        let body: String = text
            .lines()
            .skip(body_start)
            .map(|l| format!("{l}\n"))
            .collect();
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(true)
            .from_reader(body.as_bytes());
        let want = header(kind);
        let got: Vec<String> = rdr
            .headers()
            .map_err(|e| parse_err(&format!("line {}", body_start + 1), e.to_string()))?
            .iter()
            .map(str::to_string)
            .collect();
        if got != want {
            return Err(parse_err(
                &format!("line {}", body_start + 1),
                format!("header must be {}", want.join(",")),
            ));
        }
        let vars = (meta.variables.0.clone(), meta.variables.1.clone());
        let mut points = Vec::new();
        let mut boxes = Vec::new();
        let mut segments = Vec::new();
        let mut coeffs = Vec::new();
        for (i, rec) in rdr.records().enumerate() {
            let line = body_start + i + 2;
            let rec = rec.map_err(|e| parse_err(&format!("line {line}"), e.to_string()))?;
            let f = |k: usize| rec.get(k).unwrap_or("").trim().to_string();
            let at = |k: usize| format!("line {line}, field {}", want[k]);
            let label = Some(f(0)).filter(|s| !s.is_empty());
            match kind {
                DatasetKind::Points => {
                    let expr = (!f(3).is_empty() || !f(4).is_empty()).then(|| [f(3), f(4)]);
                    points.push(PointEntry {
                        label,
                        x: Coord::from_cell(&f(1), &at(1))?,
                        y: Coord::from_cell(&f(2), &at(2))?,
                        expr,
                    });
                }
                DatasetKind::Boxes => {
                    let iv = |a: usize, b: usize| -> Result<Ival> {
                        Coord::parse(&RawCoord::Interval([f(a), f(b)]), &at(a)).map(|c| c.ival())
                    };
                    boxes.push(BoxEntry {
                        label,
                        x: iv(1, 2)?,
                        y: iv(3, 4)?,
                    });
                }
                DatasetKind::Segments => {
                    let delta = Some(f(3))
                        .filter(|s| !s.is_empty())
                        .map(|s| number(&s, &at(3)))
                        .transpose()?;
                    segments.push(SegmentEntry {
                        label,
                        x: number(&f(1), &at(1))?,
                        y: number(&f(2), &at(2))?,
                        delta,
                    });
                }
                DatasetKind::Coefficients => coeffs.push(CoefficientEntry {
                    monomial: parse_monomial(&f(0), (&vars.0, &vars.1), &at(0))?,
                    value: Coord::from_cell(&f(1), &at(1))?,
                }),
            }
        }
        let entries = match kind {
            DatasetKind::Points => Entries::Points(points),
            DatasetKind::Boxes => Entries::Boxes(boxes),
            DatasetKind::Segments => Entries::Segments(segments),
            DatasetKind::Coefficients => Entries::Coefficients(coeffs),
        };
        Dataset {
            metadata: meta,
            entries,
        }
        .validate()
    }
}
