//! TSPLIB reader (TYPE TSP with EUC_2D or EXPLICIT weights) and the plain
//! tour text format.

use super::{Tour, TspInstance};
use crate::{Cost, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum WeightType {
    Euc2d,
    Explicit,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum WeightFormat {
    FullMatrix,
    UpperRow,
    LowerRow,
    UpperDiagRow,
    LowerDiagRow,
}

impl WeightFormat {
    fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "FULL_MATRIX" => WeightFormat::FullMatrix,
            "UPPER_ROW" => WeightFormat::UpperRow,
            "LOWER_ROW" => WeightFormat::LowerRow,
            "UPPER_DIAG_ROW" => WeightFormat::UpperDiagRow,
            "LOWER_DIAG_ROW" => WeightFormat::LowerDiagRow,
            _ => return None,
        })
    }

    fn expected(self, n: usize) -> usize {
        match self {
            WeightFormat::FullMatrix => n * n,
            WeightFormat::UpperRow | WeightFormat::LowerRow => n * (n - 1) / 2,
            WeightFormat::UpperDiagRow | WeightFormat::LowerDiagRow => n * (n + 1) / 2,
        }
    }

    /// Cell order in which the weights appear.
    fn cells(self, n: usize) -> Vec<(usize, usize)> {
        let mut cells = Vec::with_capacity(self.expected(n));
        for i in 0..n {
            let range = match self {
                WeightFormat::FullMatrix => 0..n,
                WeightFormat::UpperRow => i + 1..n,
                WeightFormat::LowerRow => 0..i,
                WeightFormat::UpperDiagRow => i..n,
                WeightFormat::LowerDiagRow => 0..i + 1,
            };
            cells.extend(range.map(|j| (i, j)));
        }
        cells
    }
}

const SECTIONS: [&str; 4] = [
    "NODE_COORD_SECTION",
    "EDGE_WEIGHT_SECTION",
    "DISPLAY_DATA_SECTION",
    "EOF",
];

fn keyword(line: &str) -> Option<(&str, &str)> {
    let trimmed = line.trim();
    if let Some((k, v)) = trimmed.split_once(':') {
        return Some((k.trim(), v.trim()));
    }
    SECTIONS
        .iter()
        .find(|s| trimmed == **s)
        .map(|s| (*s, ""))
}

/// Parses a TSPLIB instance.
pub fn parse_tsplib(text: &str) -> Result<TspInstance> {
    let lines: Vec<&str> = text.lines().collect();
    let mut name = String::from("unnamed");
    let mut dimension: Option<usize> = None;
    let mut weight_type: Option<WeightType> = None;
    let mut weight_format: Option<WeightFormat> = None;
    let mut coords: Option<Vec<(f64, f64)>> = None;
    let mut weights: Option<Vec<i64>> = None;

    let mut i = 0;
    while i < lines.len() {
        let line_no = i + 1;
        let line = lines[i].trim();
        i += 1;
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = keyword(line) else {
            return Err(Error::parse(line_no, format!("unexpected line `{line}`")));
        };
        match key {
            "NAME" => name = value.to_string(),
            "COMMENT" => {}
            "TYPE" => {
                if value != "TSP" {
                    return Err(Error::Unsupported(format!("TYPE {value}")));
                }
            }
            "DIMENSION" => {
                let d = value
                    .parse()
                    .map_err(|_| Error::parse(line_no, format!("bad DIMENSION `{value}`")))?;
                dimension = Some(d);
            }
            "EDGE_WEIGHT_TYPE" => {
                weight_type = Some(match value {
                    "EUC_2D" => WeightType::Euc2d,
                    "EXPLICIT" => WeightType::Explicit,
                    other => {
                        return Err(Error::Unsupported(format!("EDGE_WEIGHT_TYPE {other}")))
                    }
                })
            }
            "EDGE_WEIGHT_FORMAT" => {
                weight_format = Some(WeightFormat::parse(value).ok_or_else(|| {
                    Error::Unsupported(format!("EDGE_WEIGHT_FORMAT {value}"))
                })?)
            }
            "NODE_COORD_TYPE" | "DISPLAY_DATA_TYPE" => {}
            "NODE_COORD_SECTION" => {
                let n = dimension
                    .ok_or_else(|| Error::parse(line_no, "NODE_COORD_SECTION before DIMENSION"))?;
                let mut cs: Vec<Option<(f64, f64)>> = vec![None; n];
                let mut read = 0;
                while i < lines.len() && read < n {
                    let l = lines[i].trim();
                    let ln = i + 1;
                    if l.is_empty() {
                        i += 1;
                        continue;
                    }
                    if keyword(l).is_some() {
                        break;
                    }
                    let toks: Vec<&str> = l.split_whitespace().collect();
                    if toks.len() != 3 {
                        return Err(Error::parse(ln, format!("expected `id x y`, got `{l}`")));
                    }
                    let id: usize = toks[0]
                        .parse()
                        .map_err(|_| Error::parse(ln, format!("bad node id `{}`", toks[0])))?;
                    if id == 0 || id > n {
                        return Err(Error::parse(
                            ln,
                            format!("node id {id} outside 1..={n} (DIMENSION mismatch)"),
                        ));
                    }
                    let x: f64 = toks[1]
                        .parse()
                        .map_err(|_| Error::parse(ln, format!("bad coordinate `{}`", toks[1])))?;
                    let y: f64 = toks[2]
                        .parse()
                        .map_err(|_| Error::parse(ln, format!("bad coordinate `{}`", toks[2])))?;
                    if cs[id - 1].replace((x, y)).is_some() {
                        return Err(Error::parse(ln, format!("node {id} listed twice")));
                    }
                    read += 1;
                    i += 1;
                }
                // A further coordinate line after `n` entries means DIMENSION is too small.
                if let Some(l) = lines.get(i).map(|l| l.trim()) {
                    if !l.is_empty() && keyword(l).is_none() {
                        return Err(Error::parse(
                            i + 1,
                            format!("more than DIMENSION={n} coordinates"),
                        ));
                    }
                }
                if read < n {
                    return Err(Error::parse(
                        (i + 1).min(lines.len()),
                        format!("found {read} coordinates, DIMENSION is {n}"),
                    ));
                }
                coords = Some(cs.into_iter().map(|c| c.expect("all read")).collect());
            }
            "EDGE_WEIGHT_SECTION" => {
                let n = dimension
                    .ok_or_else(|| Error::parse(line_no, "EDGE_WEIGHT_SECTION before DIMENSION"))?;
                let format = weight_format.unwrap_or(WeightFormat::FullMatrix);
                let expected = format.expected(n);
                let mut ws = Vec::with_capacity(expected);
                while i < lines.len() {
                    let l = lines[i].trim();
                    if keyword(l).is_some() {
                        break;
                    }
                    for t in l.split_whitespace() {
                        let v: i64 = t
                            .parse()
                            .map_err(|_| Error::parse(i + 1, format!("bad weight `{t}`")))?;
                        ws.push(v);
                    }
                    if ws.len() > expected {
                        return Err(Error::parse(
                            i + 1,
                            format!("more than {expected} weights for DIMENSION={n}"),
                        ));
                    }
                    i += 1;
                }
                if ws.len() != expected {
                    return Err(Error::parse(
                        i.min(lines.len()),
                        format!("found {} weights, DIMENSION={n} needs {expected}", ws.len()),
                    ));
                }
                weights = Some(ws);
            }
            "DISPLAY_DATA_SECTION" => {
                while i < lines.len() && keyword(lines[i].trim()).is_none() {
                    i += 1;
                }
            }
            "EOF" => break,
            other => return Err(Error::Unsupported(format!("keyword {other}"))),
        }
    }

    let n = dimension.ok_or_else(|| Error::parse(lines.len(), "missing DIMENSION"))?;
    match weight_type {
        Some(WeightType::Euc2d) => {
            let coords =
                coords.ok_or_else(|| Error::parse(lines.len(), "missing NODE_COORD_SECTION"))?;
            TspInstance::from_coords(name, coords)
        }
        Some(WeightType::Explicit) => {
            let ws =
                weights.ok_or_else(|| Error::parse(lines.len(), "missing EDGE_WEIGHT_SECTION"))?;
            let format = weight_format.unwrap_or(WeightFormat::FullMatrix);
            let mut m = vec![vec![0i64; n]; n];
            for ((a, b), w) in format.cells(n).into_iter().zip(ws) {
                m[a][b] = w;
                if format != WeightFormat::FullMatrix {
                    m[b][a] = w;
                }
            }
            TspInstance::from_matrix(name, m)
        }
        None => Err(Error::parse(lines.len(), "missing EDGE_WEIGHT_TYPE")),
    }
}

/// City indices, one per line, followed by `length <cost>`.
pub fn write_tour(tour: &Tour) -> String {
    let mut out = String::new();
    for c in tour.order() {
        out.push_str(&c.to_string());
        out.push('\n');
    }
    out.push_str(&format!("length {}\n", tour.length()));
    out
}

/// Reads the format produced by [`write_tour`]. Returns the order and the
/// stated length, if present.
pub fn read_tour(text: &str) -> Result<(Vec<usize>, Option<Cost>)> {
    crate::perm::read_labeled(text, "length")
}
