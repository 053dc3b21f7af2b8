//! The eleven nilpotent seven-dimensional algebras with a six-dimensional
//! Abelian ideal, one per partition of 6.

use serde::{Deserialize, Serialize};

use crate::io::LieAlgebraRecord;
use crate::lie::LieAlgebra;
use crate::matrix::Matrix;
use crate::random::partitions_of;
use crate::scalar::{FieldMode, Scalar};

/// Block sizes for which no cocalibrated G₂-structure exists.
pub const G2_EXCEPTIONS: [&[usize]; 3] = [&[5, 1], &[3, 2, 1], &[3, 1, 1, 1]];

/// Nilpotent Jordan matrix with the given block sizes, ones above the diagonal.
pub fn nilpotent_jordan(sizes: &[usize]) -> Matrix {
    let n: usize = sizes.iter().sum();
    let mut m = Matrix::zeros(n, n);
    let mut off = 0;
    for &s in sizes {
        for k in 0..s.saturating_sub(1) {
            m.set(off + k, off + k + 1, Scalar::one());
        }
        off += s;
    }
    m
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ManifestRow {
    pub partition: Vec<usize>,
    pub file: String,
    pub expected_g2: bool,
    pub expected_g2star: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Manifest {
    pub rows: Vec<ManifestRow>,
}

pub struct CorpusEntry {
    pub partition: Vec<usize>,
    pub file: String,
    pub f: Matrix,
    pub record: LieAlgebraRecord,
}

pub fn file_name(partition: &[usize]) -> String {
    let parts: Vec<String> = partition.iter().map(|k| k.to_string()).collect();
    format!("nilpotent_{}.json", parts.join("_"))
}

pub fn nilpotent_corpus() -> Vec<CorpusEntry> {
    partitions_of(6)
        .into_iter()
        .map(|p| {
            let f = nilpotent_jordan(&p);
            let g = LieAlgebra::from_matrix(&f, FieldMode::Rational).expect("semidirect model");
            CorpusEntry { file: file_name(&p), record: LieAlgebraRecord::from_algebra(&g), f, partition: p }
        })
        .collect()
}

pub fn manifest() -> Manifest {
    let rows = partitions_of(6)
        .into_iter()
        .map(|p| ManifestRow {
            file: file_name(&p),
            expected_g2: !G2_EXCEPTIONS.contains(&p.as_slice()),
            expected_g2star: true,
            partition: p,
        })
        .collect();
    Manifest { rows }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::nilpotent_partition;

    #[test]
    fn corpus_shape() {
        let c = nilpotent_corpus();
        assert_eq!(c.len(), 11);
        for e in &c {
            assert_eq!(nilpotent_partition(&e.f).unwrap(), e.partition);
            e.record.to_algebra().unwrap().validate().unwrap();
        }
        let m = manifest();
        assert_eq!(m.rows.iter().filter(|r| !r.expected_g2).count(), 3);
        assert!(m.rows[0].expected_g2);
    }
}
