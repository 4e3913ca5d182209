use serde::{Deserialize, Serialize};

use crate::dynamics::{final_unitary, ControlGrid, HamiltonianPair};
use crate::error::{Error, Result};
use crate::objectives::Objective;

/// Objective values on the plane `base + a·dir_a + b·dir_b`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LandscapeSlice {
    pub base: ControlGrid,
    pub dir_a: Vec<f64>,
    pub dir_b: Vec<f64>,
    pub extent: [f64; 2],
    pub resolution: usize,
    /// `values[i][j]` sits at `(coord(i, extent[0]), coord(j, extent[1]))`.
    pub values: Vec<Vec<f64>>,
}

/// Grid coordinate `extent·(2i − (n−1))/(n−1)`.
pub fn coordinate(i: usize, n: usize, extent: f64) -> f64 {
    extent * (2.0 * i as f64 - (n - 1) as f64) / (n - 1) as f64
}

impl LandscapeSlice {
    pub fn compute(
        obj: &Objective,
        pair: &HamiltonianPair,
        base: &ControlGrid,
        dir_a: &[f64],
        dir_b: &[f64],
        extent: [f64; 2],
        resolution: usize,
    ) -> Result<Self> {
        let n = base.segments();
        if dir_a.len() != n || dir_b.len() != n {
            return Err(Error::InvalidArgument(format!(
                "slice directions must have {n} entries, got {} and {}",
                dir_a.len(),
                dir_b.len()
            )));
        }
        if resolution < 2 {
            return Err(Error::InvalidArgument(
                "slice resolution must be at least 2".into(),
            ));
        }
        if !extent.iter().all(|e| e.is_finite() && *e >= 0.0) {
            return Err(Error::InvalidArgument(
                "slice extents must be finite and non-negative".into(),
            ));
        }
        let mut values = Vec::with_capacity(resolution);
        for i in 0..resolution {
            let a = coordinate(i, resolution, extent[0]);
            let mut row = Vec::with_capacity(resolution);
            for j in 0..resolution {
                let b = coordinate(j, resolution, extent[1]);
                let shifted = base
                    .values()
                    .iter()
                    .zip(dir_a.iter().zip(dir_b))
                    .map(|(f, (da, db))| f + a * da + b * db)
                    .collect();
                row.push(obj.value(&final_unitary(pair, &base.with_values(shifted)?)));
            }
            values.push(row);
        }
        Ok(LandscapeSlice {
            base: base.clone(),
            dir_a: dir_a.to_vec(),
            dir_b: dir_b.to_vec(),
            extent,
            resolution,
            values,
        })
    }

    /// The centre value, present when the resolution is odd.
    pub fn origin_value(&self) -> Option<f64> {
        (self.resolution % 2 == 1).then(|| {
            let c = self.resolution / 2;
            self.values[c][c]
        })
    }

    /// One header line, then one whitespace-separated row per `a` coordinate.
    pub fn to_text(&self) -> String {
        let mut out = format!(
            "# rows=a cols=b resolution={} extent_a={:?} extent_b={:?}\n",
            self.resolution, self.extent[0], self.extent[1]
        );
        for row in &self.values {
            let line: Vec<String> = row.iter().map(|v| format!("{v:?}")).collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::objectives::gates;

    #[test]
    fn origin_matches_direct_evaluation() {
        let pair = HamiltonianPair::from_pauli([0., 0.2, 0., 1.], [0., 1., 0., 0.]).unwrap();
        let base = ControlGrid::new(2.0, vec![0.1, -0.4, 0.3]).unwrap();
        let obj = Objective::gate(gates::hadamard()).unwrap();
        let s = LandscapeSlice::compute(
            &obj,
            &pair,
            &base,
            &[1., 0., 0.],
            &[0., 0., 1.],
            [0.5, 0.5],
            5,
        )
        .unwrap();
        let direct = obj.value(&final_unitary(&pair, &base));
        assert!((s.origin_value().unwrap() - direct).abs() < 1e-12);
        assert!((coordinate(0, 5, 0.5) + 0.5).abs() < 1e-15);
        assert!((coordinate(4, 5, 0.5) - 0.5).abs() < 1e-15);
        let text = s.to_text();
        assert_eq!(text.lines().count(), 6);
        assert_eq!(text.lines().nth(1).unwrap().split_whitespace().count(), 5);
    }

    #[test]
    fn slice_through_maximum_stays_below() {
        let pair = HamiltonianPair::from_pauli([0., 0., 0., 1.], [0., 1., 0., 0.]).unwrap();
        let base = ControlGrid::new(1.5, vec![0.7, -0.2, 0.5, 0.1]).unwrap();
        let obj = Objective::gate(final_unitary(&pair, &base)).unwrap();
        let s = LandscapeSlice::compute(
            &obj,
            &pair,
            &base,
            &[1., 0., -1., 0.],
            &[0., 1., 0., 1.],
            [1.0, 1.0],
            9,
        )
        .unwrap();
        let top = s.origin_value().unwrap();
        assert!(s.values.iter().flatten().all(|v| *v <= top + 1e-12));
    }

    #[test]
    fn rejects_bad_shapes() {
        let pair = HamiltonianPair::from_pauli([0., 0., 0., 1.], [0., 1., 0., 0.]).unwrap();
        let base = ControlGrid::constant(1.0, 2, 0.0).unwrap();
        let obj = Objective::gate(gates::not()).unwrap();
        assert!(
            LandscapeSlice::compute(&obj, &pair, &base, &[1.0], &[0., 1.], [1., 1.], 3).is_err()
        );
        assert!(
            LandscapeSlice::compute(&obj, &pair, &base, &[1., 0.], &[0., 1.], [1., 1.], 1).is_err()
        );
    }
}
