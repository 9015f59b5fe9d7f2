//! Matrix and state files written by `kravchuk gen`.
//!
//! JSON: `{"two_j": int, "object": str, "params": {...}, "rows": [[[re, im], ...], ...]}`.
//! CSV: header `row,col,re,im`, one line per entry in row-major order.
//! Floats are written in shortest round-trip form, so reading a file back
//! reproduces every entry bit for bit.

use std::collections::BTreeMap;
use std::fmt;
use std::io::{Read, Write};
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::error::Error as CoreError;
use crate::halfint::TwiceInt;
use crate::su2::{self, EulerAngles};
use crate::transform::{self, CMatrix};
use crate::oscillator;

#[derive(Debug, Error)]
pub enum FileError {
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error("malformed matrix file: {0}")]
    Shape(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

/// Objects that can be generated.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ObjectKind {
    K,
    F,
    Jx,
    Jy,
    Jz,
    /// Euler-angle matrix, needs `alpha`, `beta`, `gamma`.
    D,
    /// Spin coherent state, needs `alpha`, `beta`.
    Coherent,
    /// The oscillator Hamiltonian `H̃`.
    Oscillator,
}

impl ObjectKind {
    pub const ALL: [ObjectKind; 8] = [
        ObjectKind::K,
        ObjectKind::F,
        ObjectKind::Jx,
        ObjectKind::Jy,
        ObjectKind::Jz,
        ObjectKind::D,
        ObjectKind::Coherent,
        ObjectKind::Oscillator,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ObjectKind::K => "K",
            ObjectKind::F => "F",
            ObjectKind::Jx => "Jx",
            ObjectKind::Jy => "Jy",
            ObjectKind::Jz => "Jz",
            ObjectKind::D => "D",
            ObjectKind::Coherent => "coherent",
            ObjectKind::Oscillator => "oscillator",
        }
    }
}

impl fmt::Display for ObjectKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ObjectKind {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        ObjectKind::ALL
            .into_iter()
            .find(|k| k.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown object '{s}' (expected one of K, F, Jx, Jy, Jz, D, coherent, oscillator)"))
    }
}

/// Angles supplied on the command line; which are required depends on the object.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct AngleArgs {
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
    pub gamma: Option<f64>,
}

#[derive(Debug, Error, PartialEq)]
pub enum GenError {
    #[error("object {object} requires --{angle}")]
    MissingAngle { object: ObjectKind, angle: &'static str },
    #[error(transparent)]
    Core(#[from] CoreError),
}

/// The serialized form of a generated object.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatrixFile {
    pub two_j: u32,
    pub object: String,
    pub params: BTreeMap<String, f64>,
    pub rows: Vec<Vec<[f64; 2]>>,
}

impl MatrixFile {
    pub fn from_matrix(two_j: u32, object: &str, params: BTreeMap<String, f64>, m: &CMatrix) -> Self {
        let rows = m.row_iter().map(|r| r.iter().map(|z| [z.re, z.im]).collect()).collect();
        MatrixFile { two_j, object: object.to_owned(), params, rows }
    }

    pub fn to_matrix(&self) -> std::result::Result<CMatrix, FileError> {
        let nrows = self.rows.len();
        let ncols = self.rows.first().map_or(0, Vec::len);
        if self.rows.iter().any(|r| r.len() != ncols) {
            return Err(FileError::Shape("ragged rows".into()));
        }
        Ok(CMatrix::from_fn(nrows, ncols, |i, j| {
            let [re, im] = self.rows[i][j];
            Complex64::new(re, im)
        }))
    }
}

fn require(value: Option<f64>, object: ObjectKind, angle: &'static str) -> std::result::Result<f64, GenError> {
    value.ok_or(GenError::MissingAngle { object, angle })
}

/// Builds the requested object as a matrix (states become a single column).
pub fn generate(object: ObjectKind, two_j: u32, angles: AngleArgs) -> std::result::Result<MatrixFile, GenError> {
    let mut params = BTreeMap::new();
    let matrix = match object {
        ObjectKind::K => transform::kravchuk_transform_matrix(two_j).into_matrix(),
        ObjectKind::F => transform::fourier_matrix(two_j).into_matrix(),
        ObjectKind::Jx => su2::build_generators(two_j).jx().clone(),
        ObjectKind::Jy => su2::build_generators(two_j).jy().clone(),
        ObjectKind::Jz => transform::diag_matrix(&transform::coordinate_diagonal(two_j)),
        ObjectKind::D => {
            let a = EulerAngles::new(
                require(angles.alpha, object, "alpha")?,
                require(angles.beta, object, "beta")?,
                require(angles.gamma, object, "gamma")?,
            );
            params.extend([("alpha".to_owned(), a.alpha), ("beta".to_owned(), a.beta), ("gamma".to_owned(), a.gamma)]);
            su2::euler_matrix(two_j, a).into_matrix()
        }
        ObjectKind::Coherent => {
            let alpha = require(angles.alpha, object, "alpha")?;
            let beta = require(angles.beta, object, "beta")?;
            params.extend([("alpha".to_owned(), alpha), ("beta".to_owned(), beta)]);
            let psi = su2::spin_coherent_state(two_j, alpha, beta);
            CMatrix::from_column_slice(psi.dim(), 1, psi.amplitudes().as_slice())
        }
        ObjectKind::Oscillator => oscillator::build_oscillator(two_j).hamiltonian().clone(),
    };
    Ok(MatrixFile::from_matrix(two_j, object.name(), params, &matrix))
}

pub fn write_json<W: Write>(mut w: W, file: &MatrixFile) -> std::result::Result<(), FileError> {
    serde_json::to_writer(&mut w, file)?;
    writeln!(w)?;
    Ok(())
}

pub fn read_json<R: Read>(r: R) -> std::result::Result<MatrixFile, FileError> {
    Ok(serde_json::from_reader(r)?)
}

#[derive(Serialize, Deserialize)]
struct CsvEntry {
    row: usize,
    col: usize,
    re: f64,
    im: f64,
}

pub fn write_csv<W: Write>(w: W, m: &CMatrix) -> std::result::Result<(), FileError> {
    let mut out = csv::Writer::from_writer(w);
    for (i, row) in m.row_iter().enumerate() {
        for (j, z) in row.iter().enumerate() {
            out.serialize(CsvEntry { row: i, col: j, re: z.re, im: z.im })?;
        }
    }
    out.flush()?;
    Ok(())
}

pub fn read_csv<R: Read>(r: R) -> std::result::Result<CMatrix, FileError> {
    let mut reader = csv::Reader::from_reader(r);
    let entries: Vec<CsvEntry> = reader.deserialize().collect::<std::result::Result<_, _>>()?;
    let nrows = entries.iter().map(|e| e.row + 1).max().unwrap_or(0);
    let ncols = entries.iter().map(|e| e.col + 1).max().unwrap_or(0);
    if entries.len() != nrows * ncols {
        return Err(FileError::Shape(format!("{} entries for a {nrows}x{ncols} matrix", entries.len())));
    }
    let mut m = CMatrix::zeros(nrows, ncols);
    for e in entries {
        m[(e.row, e.col)] = Complex64::new(e.re, e.im);
    }
    Ok(m)
}

pub fn write<W: Write>(w: W, file: &MatrixFile, format: Format) -> std::result::Result<(), FileError> {
    match format {
        Format::Json => write_json(w, file),
        Format::Csv => write_csv(w, &file.to_matrix()?),
    }
}

/// `"-1/2..1/2"` style summary of a label set.
pub fn label_range(two_j: u32) -> String {
    let j = TwiceInt::from_doubled(two_j as i64);
    format!("{}..{}", -j, j)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn jz_file() {
        let f = generate(ObjectKind::Jz, 2, AngleArgs::default()).unwrap();
        let m = f.to_matrix().unwrap();
        let diag: Vec<f64> = m.diagonal().iter().map(|z| z.re).collect();
        assert_eq!(diag, vec![-1.0, 0.0, 1.0]);
        assert_eq!(f.object, "Jz");
    }

    #[test]
    fn identity_rotation() {
        let angles = AngleArgs { alpha: Some(0.0), beta: Some(0.0), gamma: Some(0.0) };
        let m = generate(ObjectKind::D, 2, angles).unwrap().to_matrix().unwrap();
        assert!((m - CMatrix::identity(3, 3)).norm() < 1e-15);
    }

    #[test]
    fn missing_angles() {
        let angles = AngleArgs { alpha: Some(0.0), beta: None, gamma: Some(0.0) };
        assert_eq!(
            generate(ObjectKind::D, 2, angles),
            Err(GenError::MissingAngle { object: ObjectKind::D, angle: "beta" })
        );
        assert!(generate(ObjectKind::Coherent, 2, AngleArgs::default()).is_err());
    }

    #[test]
    fn object_names_parse() {
        for k in ObjectKind::ALL {
            assert_eq!(k.name().parse::<ObjectKind>(), Ok(k));
        }
        assert!("Q".parse::<ObjectKind>().is_err());
        assert_eq!(label_range(1), "-1/2..1/2");
        assert_eq!(label_range(4), "-2..2");
    }

    #[test]
    fn json_and_csv_round_trip_bit_exact() {
        let angles = AngleArgs { alpha: Some(0.3), beta: Some(1.9), gamma: Some(-2.2) };
        for object in [ObjectKind::K, ObjectKind::D, ObjectKind::Jy, ObjectKind::Coherent] {
            let f = generate(object, 5, angles).unwrap();
            let mut buf = Vec::new();
            write_json(&mut buf, &f).unwrap();
            let back = read_json(buf.as_slice()).unwrap();
            assert_eq!(back, f);

            let m = f.to_matrix().unwrap();
            let mut buf = Vec::new();
            write_csv(&mut buf, &m).unwrap();
            assert!(buf.starts_with(b"row,col,re,im\n"));
            let back = read_csv(buf.as_slice()).unwrap();
            for (a, b) in back.iter().zip(m.iter()) {
                assert_eq!(a.re.to_bits(), b.re.to_bits());
                assert_eq!(a.im.to_bits(), b.im.to_bits());
            }
        }
    }
}
