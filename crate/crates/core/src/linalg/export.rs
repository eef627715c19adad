//! Matrix file formats: CSV with `re,im` pairs and a compact binary layout
//! (`u64` rows, `u64` cols, then row-major `f64` re/im pairs, all little-endian).

use num_complex::Complex64;

use super::DenseComplexMatrix;
use crate::error::{Error, Result};

/// One line per matrix row: `re,im,re,im,...`.
pub fn to_csv(m: &DenseComplexMatrix) -> String {
    let mut out = String::new();
    for i in 0..m.rows() {
        let fields: Vec<String> = m
            .row(i)
            .iter()
            .map(|z| format!("{:?},{:?}", z.re, z.im))
            .collect();
        out.push_str(&fields.join(","));
        out.push('\n');
    }
    out
}

pub fn to_binary(m: &DenseComplexMatrix) -> Vec<u8> {
    let mut out = Vec::with_capacity(16 + 16 * m.data().len());
    out.extend_from_slice(&(m.rows() as u64).to_le_bytes());
    out.extend_from_slice(&(m.cols() as u64).to_le_bytes());
    for z in m.data() {
        out.extend_from_slice(&z.re.to_le_bytes());
        out.extend_from_slice(&z.im.to_le_bytes());
    }
    out
}

pub fn from_binary(bytes: &[u8]) -> Result<DenseComplexMatrix> {
    let word = |k: usize| -> Result<[u8; 8]> {
        bytes
            .get(8 * k..8 * k + 8)
            .map(|s| s.try_into().expect("8 bytes"))
            .ok_or_else(|| Error::InvalidArgument("truncated matrix file".into()))
    };
    let rows = u64::from_le_bytes(word(0)?) as usize;
    let cols = u64::from_le_bytes(word(1)?) as usize;
    let count = rows
        .checked_mul(cols)
        .ok_or_else(|| Error::InvalidArgument("matrix header overflows".into()))?;
    if bytes.len() != 16 + 16 * count {
        return Err(Error::InvalidArgument(format!(
            "expected {} bytes for a {rows}x{cols} matrix, got {}",
            16 + 16 * count,
            bytes.len()
        )));
    }
    let data = (0..count)
        .map(|k| {
            Ok(Complex64::new(
                f64::from_le_bytes(word(2 + 2 * k)?),
                f64::from_le_bytes(word(3 + 2 * k)?),
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    DenseComplexMatrix::new(rows, cols, data)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn csv_layout() {
        let m = DenseComplexMatrix::new(
            1,
            2,
            vec![Complex64::new(1.0, -0.5), Complex64::new(0.1, 0.0)],
        )
        .unwrap();
        assert_eq!(to_csv(&m), "1.0,-0.5,0.1,0.0\n");
    }

    #[test]
    fn binary_rejects_truncation() {
        let bytes = to_binary(&DenseComplexMatrix::identity(2));
        assert_eq!(bytes.len(), 16 + 64);
        assert!(from_binary(&bytes[..bytes.len() - 1]).is_err());
        assert!(from_binary(&bytes[..4]).is_err());
    }

    proptest! {
        #[test]
        fn binary_roundtrip(
            rows in 1usize..5, cols in 1usize..5,
            vals in proptest::collection::vec(-1e6f64..1e6, 50),
        ) {
            let m = DenseComplexMatrix::from_fn(rows, cols, |i, j| {
                Complex64::new(vals[i * cols + j], vals[25 + i * cols + j])
            });
            prop_assert_eq!(from_binary(&to_binary(&m)).unwrap(), m);
        }
    }
}
