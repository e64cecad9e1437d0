//! Weighted-graph quadratic form whose ground value mirrors the surface
//! Rayleigh quotient: energy `(1/pi) * sum_edges l * (f(i) - f(j))^2` against
//! the vertex measure `sum_i V_i delta_i`, with functions forced to zero on
//! the zero-volume set `S2 = { V = 0 }`.

use eigkit::{CsrMatrix, SolveOpts};

use crate::GraphError;

#[derive(Debug, Clone)]
pub struct ColboisForm {
    /// Edge endpoints into `volumes`; parallel to `lengths`.
    pub edges: Vec<(usize, usize)>,
    pub lengths: Vec<f64>,
    /// Vertex volumes; `V = 0` marks the pinned set `S2`.
    pub volumes: Vec<f64>,
}

impl ColboisForm {
    fn validate(&self) -> Result<(), GraphError> {
        if self.lengths.len() != self.edges.len() {
            return Err(GraphError::BadParameter(format!(
                "{} lengths for {} edges",
                self.lengths.len(),
                self.edges.len()
            )));
        }
        let n = self.volumes.len();
        for (&(i, j), &l) in self.edges.iter().zip(&self.lengths) {
            if i >= n {
                return Err(GraphError::EdgeOutOfRange(i, n));
            }
            if j >= n {
                return Err(GraphError::EdgeOutOfRange(j, n));
            }
            if i == j {
                return Err(GraphError::SelfLoop(i));
            }
            if !(l > 0.0) || !l.is_finite() {
                return Err(GraphError::BadParameter(format!(
                    "edge ({i}, {j}) has nonpositive length {l}"
                )));
            }
        }
        for (i, &v) in self.volumes.iter().enumerate() {
            if v < 0.0 || !v.is_finite() {
                return Err(GraphError::BadParameter(format!(
                    "vertex {i} has invalid volume {v}"
                )));
            }
        }
        if !self.volumes.iter().any(|&v| v > 0.0) {
            return Err(GraphError::BadParameter(
                "every vertex has zero volume; nothing to solve on".into(),
            ));
        }
        Ok(())
    }

    /// Indices of the positive-volume set `S1`, ascending.
    pub fn support(&self) -> Vec<usize> {
        (0..self.volumes.len())
            .filter(|&i| self.volumes[i] > 0.0)
            .collect()
    }
}

/// Smallest `count` eigenvalues of the form, ascending, plus the `S1` ids the
/// eigenvectors live on.
pub fn colbois_spectrum(
    form: &ColboisForm,
    count: usize,
) -> Result<(Vec<f64>, Vec<usize>), GraphError> {
    form.validate()?;
    let support = form.support();
    let idx_of: std::collections::HashMap<usize, usize> = support
        .iter()
        .enumerate()
        .map(|(slot, &v)| (v, slot))
        .collect();
    let n = support.len();
    if count == 0 || count > n {
        return Err(GraphError::BadParameter(format!(
            "requested {count} eigenvalues on a {n}-dimensional form"
        )));
    }

    use std::f64::consts::PI;
    let mut triplets: Vec<(u32, u32, f64)> = Vec::new();
    for (&(i, j), &l) in form.edges.iter().zip(&form.lengths) {
        let w = l / PI;
        match (idx_of.get(&i), idx_of.get(&j)) {
            (Some(&a), Some(&b)) => {
                let (a, b) = (a as u32, b as u32);
                triplets.push((a, a, w));
                triplets.push((b, b, w));
                triplets.push((a, b, -w));
                triplets.push((b, a, -w));
            }
            // Pinned neighbor: only the diagonal energy term survives.
            (Some(&a), None) => triplets.push((a as u32, a as u32, w)),
            (None, Some(&b)) => triplets.push((b as u32, b as u32, w)),
            (None, None) => {}
        }
    }
    // Isolated support vertices still need a structural diagonal entry.
    for slot in 0..n as u32 {
        triplets.push((slot, slot, 0.0));
    }
    let k = CsrMatrix::from_triplets(n, &triplets);
    let mass: Vec<(u32, u32, f64)> = support
        .iter()
        .enumerate()
        .map(|(slot, &v)| (slot as u32, slot as u32, form.volumes[v]))
        .collect();
    let m = CsrMatrix::from_triplets(n, &mass);

    let pairs = eigkit::smallest_eigenpairs(&k, &m, &SolveOpts::with_count(count))?;
    Ok((pairs.values, support))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn single_support_vertex_closed_form() {
        // One positive-volume vertex hanging off three pinned ones with total
        // edge length 6 and volume 2*pi: ground value 6 / (2 pi^2).
        let form = ColboisForm {
            edges: vec![(0, 1), (0, 2), (0, 3)],
            lengths: vec![1.0, 2.0, 3.0],
            volumes: vec![2.0 * PI, 0.0, 0.0, 0.0],
        };
        let (vals, support) = colbois_spectrum(&form, 1).unwrap();
        assert_eq!(support, vec![0]);
        let want = 6.0 / (2.0 * PI * PI);
        assert!((vals[0] - want).abs() < 1e-12, "{} vs {want}", vals[0]);
    }

    #[test]
    fn no_pinned_set_means_zero_ground_value() {
        // Two support vertices, no S2: constants are in the kernel, and the
        // gap is (l/pi)(1/V0 + 1/V1) by the 2x2 closed form.
        let (v0, v1, l) = (1.5, 0.5, 2.0);
        let form = ColboisForm {
            edges: vec![(0, 1)],
            lengths: vec![l],
            volumes: vec![v0, v1],
        };
        let (vals, _) = colbois_spectrum(&form, 2).unwrap();
        assert!(vals[0].abs() < 1e-12);
        let gap = l / PI * (1.0 / v0 + 1.0 / v1);
        assert!((vals[1] - gap).abs() < 1e-10, "{} vs {gap}", vals[1]);
    }

    #[test]
    fn path_with_pinned_ends_matches_dense_oracle() {
        // 4 support vertices in a path, both outer neighbors pinned; compare
        // against a direct dense eigensolve of the same 4x4 pencil.
        let lengths = [0.7, 1.3, 0.4, 2.1, 0.9];
        let volumes = [0.0, 0.8, 1.1, 0.6, 1.9, 0.0];
        let edges = [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5)];
        let form = ColboisForm {
            edges: edges.to_vec(),
            lengths: lengths.to_vec(),
            volumes: volumes.to_vec(),
        };
        let (vals, support) = colbois_spectrum(&form, 4).unwrap();
        assert_eq!(support, vec![1, 2, 3, 4]);

        let mut k = nalgebra::DMatrix::<f64>::zeros(4, 4);
        for (&(i, j), &l) in edges.iter().zip(&lengths) {
            let w = l / PI;
            let (a, b) = (i as isize - 1, j as isize - 1);
            if (0..4).contains(&a) {
                k[(a as usize, a as usize)] += w;
            }
            if (0..4).contains(&b) {
                k[(b as usize, b as usize)] += w;
            }
            if (0..4).contains(&a) && (0..4).contains(&b) {
                k[(a as usize, b as usize)] -= w;
                k[(b as usize, a as usize)] -= w;
            }
        }
        for slot in 0..4 {
            let v = volumes[slot + 1].sqrt();
            for c in 0..4 {
                k[(slot, c)] /= v;
            }
            for r in 0..4 {
                k[(r, slot)] /= v;
            }
        }
        let mut oracle: Vec<f64> = k.symmetric_eigen().eigenvalues.iter().copied().collect();
        oracle.sort_by(f64::total_cmp);
        for (got, want) in vals.iter().zip(&oracle) {
            assert!((got - want).abs() < 1e-10, "{got} vs {want}");
        }
    }

    #[test]
    fn validation_rejects_bad_forms() {
        let base = ColboisForm {
            edges: vec![(0, 1)],
            lengths: vec![1.0],
            volumes: vec![1.0, 1.0],
        };
        let mut zero_len = base.clone();
        zero_len.lengths[0] = 0.0;
        assert!(colbois_spectrum(&zero_len, 1).is_err());

        let mut neg_vol = base.clone();
        neg_vol.volumes[0] = -1.0;
        assert!(colbois_spectrum(&neg_vol, 1).is_err());

        let mut all_pinned = base.clone();
        all_pinned.volumes = vec![0.0, 0.0];
        assert!(colbois_spectrum(&all_pinned, 1).is_err());

        let mut out_of_range = base.clone();
        out_of_range.edges[0] = (0, 5);
        assert!(colbois_spectrum(&out_of_range, 1).is_err());

        assert!(colbois_spectrum(&base, 3).is_err(), "too many requested");
    }
}
