//! JSON file formats.
//!
//! States: `{"dim": d, "matrix": [[[re, im], ...], ...]}`, row-major.
//! Channels: an object tagged by `"kind"`, e.g. `{"kind": "depolarizing", "p": 0.3}`
//! or `{"kind": "kraus", "dim": 2, "ops": [matrix, ...]}` with matrices in the
//! state entry format.

use std::fs;
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::channels::{Channel, ChannelSpec};
use crate::error::{Error, Result};
use crate::qcore::{ComplexMatrix, DensityMatrix};

type Entries = Vec<Vec<[f64; 2]>>;

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct StateFile {
    dim: usize,
    matrix: Entries,
}

fn default_dim() -> usize {
    2
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
enum ChannelFile {
    Depolarizing { p: f64 },
    BitFlip { p: f64 },
    Unitary { axis: [f64; 3], angle: f64 },
    Gad { p: f64, gamma: f64 },
    SelfComplementary { theta: f64, phi: f64 },
    Kraus { dim: usize, ops: Vec<Entries> },
    Identity {
        #[serde(default = "default_dim")]
        dim: usize,
    },
}

fn to_matrix(dim: usize, rows: &Entries) -> Result<ComplexMatrix> {
    if rows.len() != dim {
        return Err(Error::ShapeMismatch {
            rows: dim,
            cols: dim,
            found: rows.iter().map(Vec::len).sum(),
        });
    }
    let mut m = ComplexMatrix::zeros(dim, dim);
    for (i, row) in rows.iter().enumerate() {
        if row.len() != dim {
            return Err(Error::NotSquare {
                rows: dim,
                cols: row.len(),
            });
        }
        for (j, &[re, im]) in row.iter().enumerate() {
            if !(re.is_finite() && im.is_finite()) {
                return Err(Error::Parse(format!("non-finite entry at ({i}, {j})")));
            }
            m[(i, j)] = Complex64::new(re, im);
        }
    }
    Ok(m)
}

fn to_entries(m: &ComplexMatrix) -> Entries {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect())
        .collect()
}

fn parse_json<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
}

pub fn parse_state(text: &str) -> Result<DensityMatrix> {
    let file: StateFile = parse_json(text)?;
    DensityMatrix::new(to_matrix(file.dim, &file.matrix)?)
}

pub fn state_to_json(rho: &DensityMatrix) -> String {
    let file = StateFile {
        dim: rho.dim(),
        matrix: to_entries(rho.matrix()),
    };
    serde_json::to_string_pretty(&file).expect("plain data serializes")
}

pub fn parse_channel_spec(text: &str) -> Result<(ChannelSpec, Option<Vec<ComplexMatrix>>)> {
    let file: ChannelFile = parse_json(text)?;
    Ok(match file {
        ChannelFile::Depolarizing { p } => (ChannelSpec::Depolarizing { p }, None),
        ChannelFile::BitFlip { p } => (ChannelSpec::BitFlip { p }, None),
        ChannelFile::Unitary { axis, angle } => (ChannelSpec::Unitary { axis, angle }, None),
        ChannelFile::Gad { p, gamma } => (ChannelSpec::Gad { p, gamma }, None),
        ChannelFile::SelfComplementary { theta, phi } => (ChannelSpec::SelfComplementary { theta, phi }, None),
        ChannelFile::Identity { dim } => (ChannelSpec::Identity { dim }, None),
        ChannelFile::Kraus { dim, ops } => {
            let ops = ops.iter().map(|m| to_matrix(dim, m)).collect::<Result<Vec<_>>>()?;
            (ChannelSpec::Kraus, Some(ops))
        }
    })
}

pub fn parse_channel(text: &str) -> Result<Channel> {
    match parse_channel_spec(text)? {
        (_, Some(ops)) => Channel::from_kraus(ops),
        (spec, None) => Channel::from_spec(&spec),
    }
}

/// Named channels keep their parameters; anything else is written as a Kraus list.
pub fn channel_to_json(ch: &Channel) -> String {
    let file = match ch.spec() {
        Some(ChannelSpec::Depolarizing { p }) => ChannelFile::Depolarizing { p: *p },
        Some(ChannelSpec::BitFlip { p }) => ChannelFile::BitFlip { p: *p },
        Some(ChannelSpec::Unitary { axis, angle }) => ChannelFile::Unitary {
            axis: *axis,
            angle: *angle,
        },
        Some(ChannelSpec::Gad { p, gamma }) => ChannelFile::Gad { p: *p, gamma: *gamma },
        Some(ChannelSpec::SelfComplementary { theta, phi }) => ChannelFile::SelfComplementary {
            theta: *theta,
            phi: *phi,
        },
        Some(ChannelSpec::Identity { dim }) => ChannelFile::Identity { dim: *dim },
        Some(ChannelSpec::Kraus) | None => ChannelFile::Kraus {
            dim: ch.dim(),
            ops: ch.kraus_ops().iter().map(to_entries).collect(),
        },
    };
    serde_json::to_string_pretty(&file).expect("plain data serializes")
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

pub fn read_state_file(path: &Path) -> Result<DensityMatrix> {
    parse_state(&read(path)?)
}

pub fn read_channel_file(path: &Path) -> Result<Channel> {
    parse_channel(&read(path)?)
}
