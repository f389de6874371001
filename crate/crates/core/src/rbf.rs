//! Radial basis function interpolation with the compactly supported
//! Wendland C0 kernel.

use nalgebra::{Cholesky, DMatrix, DVector, Dyn};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::hexmesh::Vec3;

/// `(1 - ξ)²` for `ξ = d / R < 1`, zero beyond the support.
pub fn wendland_c0(distance: f64, support_radius: f64) -> Result<f64> {
    if !(support_radius > 0.0) {
        return Err(Error::InvalidSupportRadius(support_radius));
    }
    Ok(kernel(distance / support_radius))
}

#[inline]
fn kernel(xi: f64) -> f64 {
    if xi < 1.0 {
        (1.0 - xi) * (1.0 - xi)
    } else {
        0.0
    }
}

/// Assembled and factorised interpolation system.
#[derive(Debug, Clone)]
pub struct RbfSystem {
    pub rbf_points: Vec<Vec3>,
    pub support_radius: f64,
    /// Kernel values between control points.
    pub system_matrix: DMatrix<f64>,
    /// Kernel values from grid points (rows) to control points (columns).
    pub eval_matrix: DMatrix<f64>,
    factor: Cholesky<f64, Dyn>,
}

fn kernel_matrix(rows: &[Vec3], cols: &[Vec3], radius: f64) -> DMatrix<f64> {
    let data: Vec<Vec<f64>> = rows
        .par_iter()
        .map(|p| cols.iter().map(|q| kernel((p - q).norm() / radius)).collect())
        .collect();
    DMatrix::from_fn(rows.len(), cols.len(), |i, j| data[i][j])
}

/// Assemble `M` and `A` and factorise `M` once.
pub fn build_system(rbf_points: &[Vec3], grid_points: &[Vec3], support_radius: f64) -> Result<RbfSystem> {
    if !(support_radius > 0.0 && support_radius.is_finite()) {
        return Err(Error::InvalidSupportRadius(support_radius));
    }
    if rbf_points.is_empty() {
        return Err(Error::InvalidParameter("at least one RBF point is required".into()));
    }
    for (i, p) in rbf_points.iter().enumerate() {
        if let Some(j) = rbf_points[i + 1..].iter().position(|q| p == q) {
            return Err(Error::SingularRbfSystem { first: i, second: i + 1 + j });
        }
    }
    let system_matrix = kernel_matrix(rbf_points, rbf_points, support_radius);
    let eval_matrix = kernel_matrix(grid_points, rbf_points, support_radius);
    let factor = Cholesky::new(system_matrix.clone()).ok_or(Error::RbfFactorization)?;
    Ok(RbfSystem {
        rbf_points: rbf_points.to_vec(),
        support_radius,
        system_matrix,
        eval_matrix,
        factor,
    })
}

impl RbfSystem {
    pub fn n_rbf(&self) -> usize {
        self.rbf_points.len()
    }

    pub fn n_grid(&self) -> usize {
        self.eval_matrix.nrows()
    }

    /// Kernel weights `M⁻¹ v`.
    pub fn weights(&self, values: &[f64]) -> Result<DVector<f64>> {
        if values.len() != self.n_rbf() {
            return Err(Error::DimensionMismatch { expected: self.n_rbf(), actual: values.len() });
        }
        Ok(self.factor.solve(&DVector::from_column_slice(values)))
    }

    /// `A M⁻¹ v` at every grid point.
    pub fn interpolate(&self, values: &[f64]) -> Result<Vec<f64>> {
        let w = self.weights(values)?;
        Ok((&self.eval_matrix * w).as_slice().to_vec())
    }

    /// Componentwise interpolation of a vector field.
    pub fn interpolate_vec3(&self, values: &[Vec3]) -> Result<Vec<Vec3>> {
        let comp = |d: usize| -> Result<Vec<f64>> {
            self.interpolate(&values.iter().map(|v| v[d]).collect::<Vec<_>>())
        };
        let (x, y, z) = (comp(0)?, comp(1)?, comp(2)?);
        Ok((0..self.n_grid()).map(|i| Vec3::new(x[i], y[i], z[i])).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn kernel_values() {
        assert_eq!(wendland_c0(0.0, 2.0).unwrap(), 1.0);
        assert_eq!(wendland_c0(1.0, 2.0).unwrap(), 0.25);
        assert_eq!(wendland_c0(2.0, 2.0).unwrap(), 0.0);
        assert_eq!(wendland_c0(5.0, 2.0).unwrap(), 0.0);
        assert!(matches!(wendland_c0(1.0, 0.0), Err(Error::InvalidSupportRadius(_))));
    }

    #[test]
    fn single_point_system() {
        let s = build_system(&[Vec3::new(1.0, 2.0, 3.0)], &[Vec3::zeros()], 1.0).unwrap();
        assert_eq!(s.system_matrix, DMatrix::from_element(1, 1, 1.0));
    }

    #[test]
    fn separated_points_give_identity() {
        let p = [Vec3::zeros(), Vec3::new(3.0, 0.0, 0.0)];
        let s = build_system(&p, &p, 2.0).unwrap();
        assert_eq!(s.system_matrix, DMatrix::identity(2, 2));
    }

    #[test]
    fn duplicates_are_reported() {
        let p = [Vec3::zeros(), Vec3::new(1.0, 0.0, 0.0), Vec3::zeros()];
        assert_eq!(
            build_system(&p, &p, 2.0).unwrap_err(),
            Error::SingularRbfSystem { first: 0, second: 2 }
        );
    }

    #[test]
    fn zero_data_gives_zero_field() {
        let p: Vec<Vec3> = (0..5).map(|i| Vec3::new(i as f64, 0.5 * i as f64, 0.0)).collect();
        let g = [Vec3::new(0.3, 0.1, 0.2), Vec3::new(2.2, 1.0, -0.5)];
        let s = build_system(&p, &g, 4.0).unwrap();
        assert!(s.interpolate(&[0.0; 5]).unwrap().iter().all(|&v| v == 0.0));
        assert!(s.interpolate(&[0.0; 4]).is_err());
    }

    #[test]
    fn constant_data_against_dense_solve() {
        // square of control points, grid point at the centre
        let p = [
            Vec3::new(0.0, 0.0, 0.0),
            Vec3::new(1.0, 0.0, 0.0),
            Vec3::new(1.0, 1.0, 0.0),
            Vec3::new(0.0, 1.0, 0.0),
        ];
        let g = [Vec3::new(0.5, 0.5, 0.0)];
        let r = 3.0;
        let s = build_system(&p, &g, r).unwrap();
        let c = 0.7;
        let got = s.interpolate(&[c; 4]).unwrap()[0];
        // brute force: symmetric weights w solve (1 + 2φ(1) + φ(√2)) w = c
        let phi = |d: f64| (1.0 - d / r).powi(2);
        let w = c / (1.0 + 2.0 * phi(1.0) + phi(2f64.sqrt()));
        let expect = 4.0 * phi(0.5f64.sqrt()) * w;
        assert!((got - expect).abs() < 1e-14);
    }

    proptest! {
        #[test]
        fn reproduces_control_values(vals in proptest::collection::vec(-1.0f64..1.0, 27)) {
            let mut p = Vec::new();
            for k in 0..3 { for j in 0..3 { for i in 0..3 {
                p.push(Vec3::new(i as f64, 1.1 * j as f64, 0.9 * k as f64));
            }}}
            let s = build_system(&p, &p, 8.0).unwrap();
            let out = s.interpolate(&vals).unwrap();
            let scale = vals.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(1e-300);
            for (a, b) in out.iter().zip(&vals) {
                prop_assert!((a - b).abs() <= 1e-10 * scale);
            }
        }

        #[test]
        fn linear_in_data(u in proptest::collection::vec(-1.0f64..1.0, 8),
                          v in proptest::collection::vec(-1.0f64..1.0, 8),
                          a in -2.0f64..2.0, b in -2.0f64..2.0) {
            let p: Vec<Vec3> = (0..8).map(|i| Vec3::new((i % 2) as f64, ((i / 2) % 2) as f64, (i / 4) as f64)).collect();
            let g: Vec<Vec3> = (0..5).map(|i| Vec3::new(0.2 * i as f64, 0.5, 0.1 * i as f64)).collect();
            let s = build_system(&p, &g, 3.0).unwrap();
            let mix: Vec<f64> = u.iter().zip(&v).map(|(x, y)| a * x + b * y).collect();
            let lhs = s.interpolate(&mix).unwrap();
            let (iu, iv) = (s.interpolate(&u).unwrap(), s.interpolate(&v).unwrap());
            for i in 0..g.len() {
                let rhs = a * iu[i] + b * iv[i];
                prop_assert!((lhs[i] - rhs).abs() <= 1e-13 * (1.0 + rhs.abs()) * 10.0);
            }
        }
    }
}
