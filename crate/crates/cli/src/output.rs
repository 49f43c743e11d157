use runlattice_core::order::{ForbiddenShape, ForbiddenSublattice};
use runlattice_core::{OrderingKind, RunUniverse};
use serde::Serialize;

#[derive(Serialize)]
pub struct UniverseJson<'a> {
    pub mode: &'a str,
    pub c: usize,
    #[serde(rename = "N")]
    pub n: usize,
    pub count: usize,
    pub runs: Vec<String>,
}

/// A Hasse diagram; `covers` and `irreducibles` index into `elements`.
#[derive(Serialize)]
pub struct LatticeJson<'a> {
    pub mode: &'a str,
    pub c: usize,
    #[serde(rename = "N")]
    pub n: usize,
    pub ordering: &'a str,
    pub elements: Vec<String>,
    pub covers: Vec<[usize; 2]>,
    pub irreducibles: Vec<usize>,
}

impl<'a> LatticeJson<'a> {
    pub fn new(u: &RunUniverse, kind: OrderingKind, covers: Vec<(usize, usize)>, irreducibles: Vec<usize>) -> Self {
        LatticeJson {
            mode: u.mode().name(),
            c: u.scale().max_degree(),
            n: u.length(),
            ordering: kind.name(),
            elements: u.elements().iter().map(|r| r.literal()).collect(),
            covers: covers.into_iter().map(|(a, b)| [a, b]).collect(),
            irreducibles,
        }
    }
}

#[derive(Serialize)]
pub struct Row {
    pub run: String,
    pub value: f64,
}

#[derive(Serialize)]
pub struct TableJson<'a> {
    pub metric: &'a str,
    pub mode: &'a str,
    pub c: usize,
    #[serde(rename = "N")]
    pub n: usize,
    pub rows: Vec<Row>,
}

#[derive(Serialize)]
pub struct ValueJson<'a> {
    pub run: String,
    pub metric: &'a str,
    pub value: f64,
}

#[derive(Serialize)]
pub struct DecompositionJson {
    pub run: String,
    pub parts: Vec<String>,
}

#[derive(Serialize)]
pub struct CountJson {
    pub c: usize,
    #[serde(rename = "N")]
    pub n: usize,
    /// Decimal strings: these overflow any fixed-width integer quickly.
    pub rank_universe: String,
    pub set_universe: String,
    pub irreducibles: usize,
    pub irreducibles_computed: bool,
}

pub fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("JSON serialization of plain data");
    s.push('\n');
    s
}

/// CSV with the given header; literals containing commas are quoted.
pub fn csv<const K: usize>(header: [&str; K], rows: impl IntoIterator<Item = [String; K]>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory CSV");
    for row in rows {
        w.write_record(&row).expect("in-memory CSV");
    }
    String::from_utf8(w.into_inner().expect("in-memory CSV")).expect("CSV of UTF-8 fields")
}

pub fn describe_forbidden(u: &RunUniverse, w: &ForbiddenSublattice) -> String {
    let r = |i: usize| u.get(i).literal();
    match w.shape {
        ForbiddenShape::N5 => format!(
            "N5: bottom {}; chain {} < {}; side {}; top {}",
            r(w.bottom),
            r(w.middle[0]),
            r(w.middle[1]),
            r(w.middle[2]),
            r(w.top)
        ),
        ForbiddenShape::M3 => format!(
            "M3: bottom {}; atoms {}, {}, {}; top {}",
            r(w.bottom),
            r(w.middle[0]),
            r(w.middle[1]),
            r(w.middle[2]),
            r(w.top)
        ),
    }
}
