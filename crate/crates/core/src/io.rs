//! Matrix JSON files: `{"n": <int>, "re": [[..]], "im": [[..]]}`, row-major,
//! with `"im"` optional.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;
use crate::spectral::HermitianPD;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MatrixFile {
    pub n: usize,
    pub re: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub im: Option<Vec<Vec<f64>>>,
}

impl MatrixFile {
    pub fn from_matrix(m: &ComplexMatrix) -> Self {
        let n = m.n();
        let re = (0..n).map(|i| m.row(i).iter().map(|z| z.re).collect()).collect();
        let im: Vec<Vec<f64>> = (0..n).map(|i| m.row(i).iter().map(|z| z.im).collect()).collect();
        let has_imag = im.iter().flatten().any(|&x| x != 0.0);
        Self {
            n,
            re,
            im: has_imag.then_some(im),
        }
    }

    pub fn to_matrix(&self) -> Result<ComplexMatrix> {
        if self.re.len() != self.n {
            return Err(Error::Format(format!(
                "\"n\" is {} but \"re\" has {} rows",
                self.n,
                self.re.len()
            )));
        }
        ComplexMatrix::from_parts(&self.re, self.im.as_deref())
    }
}

pub fn parse_matrix(text: &str) -> Result<ComplexMatrix> {
    let file: MatrixFile = serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))?;
    file.to_matrix()
}

pub fn parse_hermitian_pd(text: &str) -> Result<HermitianPD> {
    HermitianPD::new(parse_matrix(text)?)
}

pub fn matrix_to_json(m: &ComplexMatrix) -> String {
    serde_json::to_string_pretty(&MatrixFile::from_matrix(m)).expect("finite matrices always serialize")
}

pub fn read_matrix(path: impl AsRef<Path>) -> std::io::Result<Result<ComplexMatrix>> {
    Ok(parse_matrix(&std::fs::read_to_string(path)?))
}

pub fn write_matrix(path: impl AsRef<Path>, m: &ComplexMatrix) -> std::io::Result<()> {
    let mut text = matrix_to_json(m);
    text.push('\n');
    std::fs::write(path, text)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::C64;
    use proptest::prelude::*;

    #[test]
    fn imaginary_part_defaults_to_zero() {
        let m = parse_matrix(r#"{"n": 2, "re": [[1, 2], [2, 5]]}"#).unwrap();
        assert_eq!(m, ComplexMatrix::from_real_rows(&[vec![1.0, 2.0], vec![2.0, 5.0]]).unwrap());
    }

    #[test]
    fn complex_entries() {
        let m = parse_matrix(r#"{"n": 2, "re": [[2, 0], [0, 2]], "im": [[0, 1], [-1, 0]]}"#).unwrap();
        assert_eq!(m[(0, 1)], C64::new(0.0, 1.0));
        assert!(parse_hermitian_pd(r#"{"n": 2, "re": [[2, 0], [0, 2]], "im": [[0, 1], [-1, 0]]}"#).is_ok());
    }

    #[test]
    fn malformed_inputs() {
        assert!(matches!(parse_matrix("{"), Err(Error::Format(_))));
        assert!(matches!(
            parse_matrix(r#"{"n": 3, "re": [[1, 0], [0, 1]]}"#),
            Err(Error::Format(_))
        ));
        assert!(parse_matrix(r#"{"n": 2, "re": [[1, 0], [0]]}"#).is_err());
        assert!(parse_matrix(r#"{"n": 2, "re": [[1, 0], [0, 1]], "im": [[0, 0]]}"#).is_err());
    }

    #[test]
    fn hermitian_required_when_pd_requested() {
        let err = parse_hermitian_pd(r#"{"n": 2, "re": [[1, 0.5], [0.4, 1]]}"#).unwrap_err();
        assert!(matches!(err, Error::NotHermitian { .. }));
    }

    proptest! {
        #[test]
        fn json_round_trip_is_exact(entries in proptest::collection::vec((-1e6f64..1e6, -1e6f64..1e6), 9)) {
            let m = ComplexMatrix::new(3, entries.iter().map(|&(r, i)| C64::new(r, i)).collect()).unwrap();
            let back = parse_matrix(&matrix_to_json(&m)).unwrap();
            prop_assert_eq!(back, m);
        }
    }
}
