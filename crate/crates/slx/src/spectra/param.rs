//! Boundary parameters: Hermitian matrices, self-adjoint relations, coupled conditions.

use serde::Serialize;

use crate::error::{Result, SlxError};
use crate::linalg::{C64, Mat2, Vec2, c, cols, fro, hermitian_defect, hermitian_part, inv_sqrt_hpd, inverse, mat, nullity, orthogonal, r};
use crate::odecore::BoundaryData;
use crate::weyl::n_matrix;

/// `theta = {(A h, B h)}`, i.e. `A* Gamma1 = B* Gamma0`.
#[derive(Clone, Debug)]
pub struct Relation {
    pub a: Mat2,
    pub b: Mat2,
    /// Dimension of the multivalued part `B ker A`.
    pub mul_dim: usize,
    /// Operator part on `op_direction` when `mul_dim == 1`.
    pub theta_op: Option<f64>,
    pub op_direction: Option<Vec2>,
}

const ADMISSIBLE_TOL: f64 = 1e-9;

impl Relation {
    /// Checks the admissibility identities and decomposes the relation.
    pub fn new(a: Mat2, b: Mat2) -> Result<Self> {
        let mut rel = Self { a, b, mul_dim: 0, theta_op: None, op_direction: None };
        rel.check_admissible(ADMISSIBLE_TOL)?;
        rel.decompose();
        Ok(rel)
    }

    /// Rescales `(A, B)` so that `A*A + B*B = I`, then checks the remaining identities.
    pub fn normalized(a: Mat2, b: Mat2) -> Result<Self> {
        let g = inv_sqrt_hpd(&(a.adjoint() * a + b.adjoint() * b));
        if !g.iter().all(|z| z.is_finite()) {
            return Err(SlxError::InadmissiblePair { residual: f64::INFINITY });
        }
        Self::new(a * g, b * g)
    }

    /// Relation defined by the equations `E0 Gamma0 + E1 Gamma1 = 0`.
    pub fn from_equations(e0: &Mat2, e1: &Mat2) -> Result<Self> {
        let g = inv_sqrt_hpd(&(e1 * e1.adjoint() + e0 * e0.adjoint()));
        if !g.iter().all(|z| z.is_finite()) {
            return Err(SlxError::InadmissiblePair { residual: f64::INFINITY });
        }
        Self::new(e1.adjoint() * g, -e0.adjoint() * g)
    }

    /// Graph of a Hermitian matrix.
    pub fn graph(theta: &Mat2) -> Self {
        let g = inv_sqrt_hpd(&(Mat2::identity() + theta * theta));
        Self { a: g, b: theta * g, mul_dim: 0, theta_op: None, op_direction: None }
    }

    /// Parameter `vartheta` of the second triple (`-Gamma0 = vartheta Gamma1`) as a relation.
    pub fn from_vartheta(vartheta: &Mat2) -> Self {
        let g = inv_sqrt_hpd(&(Mat2::identity() + vartheta * vartheta));
        let mut rel = Self { a: -vartheta * g, b: g, mul_dim: 0, theta_op: None, op_direction: None };
        rel.decompose();
        rel
    }

    /// `{0} x C^2`: the extension `L0`.
    pub fn l0() -> Self {
        Self { a: Mat2::zeros(), b: Mat2::identity(), mul_dim: 2, theta_op: None, op_direction: None }
    }

    /// Multivalued part orthogonal to `e_op`, operator part `theta_op` on `e_op`.
    pub fn mul_one(e_op: Vec2, theta_op: f64) -> Self {
        let e = e_op / r(e_op.norm());
        let m = orthogonal(&e);
        let k = 1.0 / (1.0 + theta_op * theta_op).sqrt();
        let a = cols(&(e * r(k)), &Vec2::zeros());
        let b = cols(&(e * r(k * theta_op)), &m);
        Self { a, b, mul_dim: 1, theta_op: Some(theta_op), op_direction: Some(e) }
    }

    pub fn admissibility_residual(&self) -> f64 {
        let (a, b) = (&self.a, &self.b);
        let i = Mat2::identity();
        let sym = fro(&(a.adjoint() * b - b.adjoint() * a));
        let left = fro(&(a * a.adjoint() + b * b.adjoint() - i));
        let right = fro(&(a.adjoint() * a + b.adjoint() * b - i));
        sym.max(left).max(right)
    }

    pub fn check_admissible(&self, tol: f64) -> Result<()> {
        let residual = self.admissibility_residual();
        if residual.is_finite() && residual <= tol { Ok(()) } else { Err(SlxError::InadmissiblePair { residual }) }
    }

    fn decompose(&mut self) {
        self.mul_dim = nullity(&self.a, ADMISSIBLE_TOL);
        self.theta_op = None;
        self.op_direction = None;
        if self.mul_dim == 1 {
            // Range of A: its larger column.
            let (c0, c1) = (self.a.column(0).into_owned(), self.a.column(1).into_owned());
            let col = if c0.norm() >= c1.norm() { c0 } else { c1 };
            let e = col / r(col.norm());
            let h = self.a.adjoint() * e;
            let h = h / r(h.norm_squared());
            let top = (e.adjoint() * (self.b * h))[(0, 0)];
            self.theta_op = Some(top.re);
            self.op_direction = Some(e);
        }
    }

    /// The same relation seen in the second triple: pairs `(B h, -A h)`.
    pub fn dual(&self) -> Self {
        let mut rel = Self { a: self.b, b: -self.a, mul_dim: 0, theta_op: None, op_direction: None };
        rel.decompose();
        rel
    }
}

/// `Y(b) = e^{i alpha} R Y(a)` with `Y = (f0, f1)`.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct CoupledBC {
    pub alpha: f64,
    pub r: [[f64; 2]; 2],
}

impl CoupledBC {
    pub fn new(alpha: f64, r: [[f64; 2]; 2]) -> Result<Self> {
        let det = r[0][0] * r[1][1] - r[0][1] * r[1][0];
        if (det - 1.0).abs() > 1e-10 || !(alpha > -std::f64::consts::PI - 1e-12 && alpha <= std::f64::consts::PI + 1e-12) {
            return Err(SlxError::HypothesisViolated(vec![format!("coupled condition needs det R = 1 and alpha in (-pi, pi]; det R = {det}")]));
        }
        Ok(Self { alpha, r })
    }

    pub fn phase(&self) -> C64 {
        c(self.alpha.cos(), self.alpha.sin())
    }

    /// `e^{i alpha} R`.
    pub fn transfer(&self) -> Mat2 {
        let e = self.phase();
        mat(e * self.r[0][0], e * self.r[0][1], e * self.r[1][0], e * self.r[1][1])
    }

    /// `(E0, E1)` with `E0 Gamma0 + E1 Gamma1 = 0`.
    pub fn equations(&self) -> (Mat2, Mat2) {
        let e = self.phase();
        let [[r11, r12], [r21, r22]] = self.r;
        let e0 = mat(-e * r11, r(1.0), -e * r21, r(0.0));
        let e1 = mat(-e * r12, r(0.0), -e * r22, r(-1.0));
        (e0, e1)
    }

    /// The equivalent matrix parameter, when `r12 != 0`.
    pub fn to_theta(&self) -> Option<Mat2> {
        let [[r11, r12], [_, r22]] = self.r;
        if r12.abs() < 1e-14 {
            return None;
        }
        let t12 = self.phase().conj() / r12;
        Some(mat(r(-r11 / r12), t12, t12.conj(), r(-r22 / r12)))
    }

    /// The coupled form of a matrix parameter with `theta12 != 0`.
    pub fn from_theta(theta: &Mat2) -> Option<Self> {
        let t12 = theta[(0, 1)];
        if t12.norm() < 1e-14 {
            return None;
        }
        let (t11, t21, t22) = (theta[(0, 0)], theta[(1, 0)], theta[(1, 1)]);
        let t = mat(-t11 / t12, r(1.0) / t12, -t21 + t22 * t11 / t12, -t22 / t12);
        let mut alpha = -t12.arg();
        let rr = t * c(0.0, -alpha).exp();
        // Same phase, moved into (-pi, pi].
        if alpha <= -std::f64::consts::PI {
            alpha += 2.0 * std::f64::consts::PI;
        }
        let re = |i: usize, j: usize| rr[(i, j)].re;
        Some(Self { alpha, r: [[re(0, 0), re(0, 1)], [re(1, 0), re(1, 1)]] })
    }
}

/// A self-adjoint boundary condition in the first triple.
#[derive(Clone, Debug)]
pub enum BoundaryParameter {
    /// `Gamma1 = theta Gamma0`.
    Matrix(Mat2),
    Relation(Relation),
}

/// The two extensions with closed-form characteristic functions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Distinguished {
    L0,
    Linf,
}

impl BoundaryParameter {
    pub fn matrix(theta: Mat2) -> Result<Self> {
        let defect = hermitian_defect(&theta);
        if defect > 1e-10 * (1.0 + fro(&theta)) {
            return Err(SlxError::InadmissiblePair { residual: defect });
        }
        Ok(Self::Matrix(hermitian_part(&theta)))
    }

    /// Relations with trivial multivalued part become matrices.
    pub fn relation(rel: Relation) -> Self {
        if rel.mul_dim == 0 {
            if let Some((ainv, _)) = inverse(&rel.a) {
                return Self::Matrix(hermitian_part(&(rel.b * ainv)));
            }
        }
        Self::Relation(rel)
    }

    /// Parameter of the second triple.
    pub fn vartheta(vartheta: Mat2) -> Result<Self> {
        let defect = hermitian_defect(&vartheta);
        if defect > 1e-10 * (1.0 + fro(&vartheta)) {
            return Err(SlxError::InadmissiblePair { residual: defect });
        }
        Ok(Self::relation(Relation::from_vartheta(&hermitian_part(&vartheta))))
    }

    pub fn coupled(bc: &CoupledBC) -> Result<Self> {
        let (e0, e1) = bc.equations();
        Ok(Self::relation(Relation::from_equations(&e0, &e1)?))
    }

    pub fn l0() -> Self {
        Self::Relation(Relation::l0())
    }

    pub fn linf() -> Self {
        Self::Matrix(Mat2::zeros())
    }

    pub fn as_relation(&self) -> Relation {
        match self {
            Self::Matrix(t) => Relation::graph(t),
            Self::Relation(r) => r.clone(),
        }
    }

    pub fn distinguished(&self) -> Option<Distinguished> {
        match self {
            Self::Matrix(t) if fro(t) == 0.0 => Some(Distinguished::Linf),
            Self::Relation(r) if r.mul_dim == 2 => Some(Distinguished::L0),
            _ => None,
        }
    }

    /// A real entire function of `lambda` vanishing exactly on the spectrum,
    /// with the sum of its term magnitudes.
    pub fn characteristic(&self, bd: &BoundaryData) -> (f64, f64) {
        let (u10, u11, u20, u21) = (bd.u10.re, bd.u11.re, bd.u20.re, bd.u21.re);
        match self {
            Self::Matrix(t) => {
                let (t11, t12, t22) = (t[(0, 0)].re, t[(0, 1)], t[(1, 1)].re);
                let det = t11 * t22 - t12.norm_sqr();
                let value = u20 * det + t11 * u21 + t22 * u10 + 2.0 * t12.re + u11;
                let scale = (u20 * det).abs() + (t11 * u21).abs() + (t22 * u10).abs() + 2.0 * t12.norm() + u11.abs();
                (value, scale)
            }
            Self::Relation(rel) => match rel.mul_dim {
                2 => (u20, bd.scale()),
                1 => {
                    let e = rel.op_direction.unwrap();
                    let top = rel.theta_op.unwrap();
                    let n = n_matrix(bd);
                    let quad = (e.adjoint() * n * e)[(0, 0)].re;
                    let scale = (top * u20).abs() + e.iter().map(|z| z.norm()).sum::<f64>().powi(2) * fro(&n);
                    (quad - top * u20, scale)
                }
                _ => {
                    let t = rel.b * inverse(&rel.a).map(|x| x.0).unwrap_or_else(Mat2::zeros);
                    Self::Matrix(hermitian_part(&t)).characteristic(bd)
                }
            },
        }
    }

    /// Matrix whose kernel is the eigenspace, given `M0(lambda)`.
    pub fn kernel_gamma0(&self, m0: &Mat2) -> Mat2 {
        match self {
            Self::Matrix(t) => t - m0,
            Self::Relation(rel) => rel.b - m0 * rel.a,
        }
    }

    /// Same, given `Minf(lambda)` (second triple).
    pub fn kernel_gamma0_prime(&self, minf: &Mat2) -> Mat2 {
        match self {
            Self::Matrix(t) => Mat2::identity() + minf * t,
            Self::Relation(rel) => rel.a + minf * rel.b,
        }
    }

    /// `A* Q - B* P`, where `(Gamma0, Gamma1) = (P, Q)(alpha, beta)` for `alpha u1 + beta u2`.
    /// Valid at every `lambda`.
    pub fn direct_matrix(&self, bd: &BoundaryData) -> Mat2 {
        let p = mat(r(1.0), r(0.0), bd.u10, bd.u20);
        let q = mat(r(0.0), r(1.0), -bd.u11, -bd.u21);
        let rel = self.as_relation();
        rel.a.adjoint() * q - rel.b.adjoint() * p
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::real_mat;

    #[test]
    fn periodic_is_mul_one() {
        let bc = CoupledBC::new(0.0, [[1.0, 0.0], [0.0, 1.0]]).unwrap();
        match BoundaryParameter::coupled(&bc).unwrap() {
            BoundaryParameter::Relation(rel) => {
                assert_eq!(rel.mul_dim, 1);
                assert!(rel.theta_op.unwrap().abs() < 1e-12);
                let e = rel.op_direction.unwrap();
                assert!(((e[0] - e[1]).norm()) < 1e-12);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn coupled_theta_round_trip() {
        for theta in [mat(r(0.4), c(-1.2, 0.7), c(-1.2, -0.7), r(2.5)), real_mat(0.3, -0.8, -0.8, 1.1)] {
            let bc = CoupledBC::from_theta(&theta).unwrap();
            let det = bc.r[0][0] * bc.r[1][1] - bc.r[0][1] * bc.r[1][0];
            assert!((det - 1.0).abs() < 1e-12);
            assert!(fro(&(bc.to_theta().unwrap() - theta)) < 1e-12);
        }
        let theta = mat(r(0.4), c(-1.2, 0.7), c(-1.2, -0.7), r(2.5));
        let bc = CoupledBC::from_theta(&theta).unwrap();
        let p = BoundaryParameter::coupled(&bc).unwrap();
        match p {
            BoundaryParameter::Matrix(t) => assert!(fro(&(t - theta)) < 1e-10),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn graph_and_vartheta() {
        let theta = real_mat(1.0, 0.5, 0.5, -2.0);
        let g = Relation::graph(&theta);
        assert!(g.admissibility_residual() < 1e-12);
        let vt = -theta.try_inverse().unwrap();
        match BoundaryParameter::vartheta(vt).unwrap() {
            BoundaryParameter::Matrix(t) => assert!(fro(&(t - theta)) < 1e-10),
            other => panic!("{other:?}"),
        }
        assert_eq!(BoundaryParameter::vartheta(Mat2::zeros()).unwrap().distinguished(), Some(Distinguished::L0));
    }

    #[test]
    fn mul_one_decomposes_back() {
        let e = Vec2::new(c(0.6, 0.0), c(0.0, 0.8));
        let rel = Relation::mul_one(e, -1.7);
        let re = Relation::new(rel.a, rel.b).unwrap();
        assert_eq!(re.mul_dim, 1);
        assert!((re.theta_op.unwrap() + 1.7).abs() < 1e-12);
        let d = re.op_direction.unwrap();
        assert!(((d.adjoint() * e)[(0, 0)].norm() - 1.0).abs() < 1e-12);
    }
}
