//! Dynamic multisector production models as descriptor boundary value
//! problems. With flow matrix M and capital matrix Fcap, the balance
//! Y(k) = M·Y(k) + Fcap·(Y(k+1) - Y(k)) rearranges to
//! Fcap·Y(k+1) = (I - M + Fcap)·Y(k), a pencil problem whose F = Fcap is
//! singular whenever some sector forms no capital, which is the economic
//! normal case rather than the exception.

use crate::bvp::BvpProblem;
use crate::error::Error;
use crate::matrix::Matrix;
use crate::pencil::MatrixPencil;
use crate::scalar::Scalar;

#[derive(Clone, Debug)]
pub struct LeontiefModel {
    /// Interindustry flow coefficients: entry (i, j) is the input from
    /// sector i consumed per unit of sector j output.
    pub m_flow: Matrix,
    /// Capital coefficients: entry (i, j) is the stock of good i needed
    /// per unit of sector j capacity.
    pub f_capital: Matrix,
    /// Optional sector labels; either empty or one per sector.
    pub sector_names: Vec<String>,
}

impl LeontiefModel {
    pub fn new(
        m_flow: Matrix,
        f_capital: Matrix,
        sector_names: Vec<String>,
    ) -> Result<Self, Error> {
        if !m_flow.is_square() {
            return Err(Error::dim(
                "leontief model",
                format!("flow matrix is {}x{}, not square", m_flow.rows(), m_flow.cols()),
            ));
        }
        if f_capital.rows() != m_flow.rows() || f_capital.cols() != m_flow.cols() {
            return Err(Error::dim(
                "leontief model",
                format!(
                    "capital matrix is {}x{} but the flow matrix has {} sectors",
                    f_capital.rows(),
                    f_capital.cols(),
                    m_flow.rows()
                ),
            ));
        }
        if !sector_names.is_empty() && sector_names.len() != m_flow.rows() {
            return Err(Error::dim(
                "leontief model",
                format!(
                    "{} sector names for {} sectors",
                    sector_names.len(),
                    m_flow.rows()
                ),
            ));
        }
        Ok(LeontiefModel { m_flow, f_capital, sector_names })
    }

    pub fn sectors(&self) -> usize {
        self.m_flow.rows()
    }
}

/// F = Fcap, G = I - M + Fcap.
pub fn build_pencil(model: &LeontiefModel) -> Result<MatrixPencil, Error> {
    let identity = Matrix::identity(model.sectors());
    let g = identity.sub(&model.m_flow)?.add(&model.f_capital)?;
    MatrixPencil::new(model.f_capital.clone(), g)
}

/// Attach boundary data A·Y(k0) + B·Y(kN) = D to a model pencil.
pub fn attach_boundary(
    pencil: MatrixPencil,
    a: Matrix,
    b: Matrix,
    d: Vec<Scalar>,
    k0: i64,
    k_n: i64,
) -> Result<BvpProblem, Error> {
    BvpProblem::new(pencil, a, b, d, k0, k_n)
}

/// Invert the pencil construction: M = I - G + F. Round-trips any pencil
/// produced by [`build_pencil`] and recovers a flow matrix for any square
/// pencil, whether or not it came from an economic model.
pub fn recovered_flow(pencil: &MatrixPencil) -> Result<Matrix, Error> {
    if pencil.rows() != pencil.cols() {
        return Err(Error::dim(
            "recovered flow",
            format!("pencil is {}x{}, not square", pencil.rows(), pencil.cols()),
        ));
    }
    Matrix::identity(pencil.rows()).sub(pencil.g())?.add(pencil.f())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bvp::{boundary_operator, classify_bvp, solve_unique, verify_trajectory, Classification};
    use crate::pencil::{finite_part, kronecker_structure};

    fn scalars(v: &[i64]) -> Vec<Scalar> {
        v.iter().map(|&x| Scalar::from_integer(x)).collect()
    }

    #[test]
    fn static_economy_gives_identity_dynamics() {
        // No flows, no capital: Y(k) = Y(k) becomes 0 = -Y(k), the
        // all-infinite pencil s·0 - I.
        let model = LeontiefModel::new(Matrix::zeros(2, 2), Matrix::zeros(2, 2), vec![]).unwrap();
        let pencil = build_pencil(&model).unwrap();
        assert!(pencil.f().is_zero());
        assert!(pencil.g().is_identity());
    }

    #[test]
    fn full_capital_economy_is_regular() {
        let model = LeontiefModel::new(Matrix::zeros(2, 2), Matrix::identity(2), vec![]).unwrap();
        let pencil = build_pencil(&model).unwrap();
        assert!(pencil.f().is_identity());
        assert_eq!(*pencil.g(), Matrix::identity(2).scale(&Scalar::from_integer(2)));
    }

    #[test]
    fn two_sector_demo_solves_end_to_end() {
        // Sector 1 forms capital, sector 2 does not, so F is singular.
        let m_flow = Matrix::from_rows(vec![
            vec![Scalar::ratio(1, 2), Scalar::from_integer(0)],
            vec![Scalar::from_integer(0), Scalar::ratio(1, 2)],
        ])
        .unwrap();
        let f_capital = Matrix::from_i64(&[&[1, 0], &[0, 0]]);
        let model = LeontiefModel::new(
            m_flow,
            f_capital,
            vec!["capital-forming".into(), "consumable".into()],
        )
        .unwrap();
        let pencil = build_pencil(&model).unwrap();
        let expected_g = Matrix::from_rows(vec![
            vec![Scalar::ratio(3, 2), Scalar::from_integer(0)],
            vec![Scalar::from_integer(0), Scalar::ratio(1, 2)],
        ])
        .unwrap();
        assert_eq!(*pencil.g(), expected_g);

        // One growth eigenvalue 3/2 and one purely algebraic coordinate.
        let structure = kronecker_structure(&pencil).unwrap();
        assert_eq!(structure.finite_divisors.len(), 1);
        assert_eq!(
            structure.finite_divisors[0].linear_root().unwrap(),
            Scalar::ratio(3, 2)
        );
        assert_eq!(structure.infinite_degrees, vec![1]);
        assert!(structure.cmi.is_empty() && structure.rmi.is_empty());

        // Prescribing period-0 output determines the whole path: the
        // capital-forming sector grows by 3/2 each period, the other
        // produces nothing.
        let problem = attach_boundary(
            pencil,
            Matrix::identity(2),
            Matrix::zeros(2, 2),
            scalars(&[4, 0]),
            0,
            3,
        )
        .unwrap();
        let finite = finite_part(&structure, &problem.pencil).unwrap();
        let k = boundary_operator(&problem, &finite).unwrap();
        let resolution = classify_bvp(&problem, &structure, &k).unwrap();
        assert_eq!(resolution.classification, Classification::Unique);
        let trajectory = solve_unique(&problem, &finite, &resolution, 3).unwrap();
        assert!(verify_trajectory(&problem, &trajectory).unwrap());
        assert_eq!(trajectory.values[0], scalars(&[4, 0]));
        assert_eq!(trajectory.values[1], scalars(&[6, 0]));
        assert_eq!(
            trajectory.values[3],
            vec![Scalar::ratio(27, 2), Scalar::from_integer(0)]
        );
    }

    #[test]
    fn flow_matrix_round_trips() {
        let m_flow = Matrix::from_rows(vec![
            vec![Scalar::ratio(1, 4), Scalar::ratio(1, 3)],
            vec![Scalar::ratio(1, 5), Scalar::ratio(1, 6)],
        ])
        .unwrap();
        let f_capital = Matrix::from_i64(&[&[2, 1], &[0, 0]]);
        let model = LeontiefModel::new(m_flow.clone(), f_capital, vec![]).unwrap();
        let pencil = build_pencil(&model).unwrap();
        assert_eq!(recovered_flow(&pencil).unwrap(), m_flow);
    }

    #[test]
    fn singular_capital_forces_singular_structure() {
        // Rank-deficient Fcap guarantees at least one non-dynamic
        // coordinate: infinite degrees or minimal indices must appear.
        let model = LeontiefModel::new(
            Matrix::zeros(3, 3),
            Matrix::from_i64(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 0]]),
            vec![],
        )
        .unwrap();
        let pencil = build_pencil(&model).unwrap();
        let structure = kronecker_structure(&pencil).unwrap();
        let nondynamic = structure.infinite_degrees.len()
            + structure.cmi.len()
            + structure.rmi.len()
            + structure.g()
            + structure.h();
        assert!(nondynamic >= 1);
        assert!(structure.p < 3);
    }

    #[test]
    fn construction_rejects_mismatched_shapes() {
        assert!(LeontiefModel::new(Matrix::zeros(2, 3), Matrix::zeros(2, 3), vec![]).is_err());
        assert!(LeontiefModel::new(Matrix::zeros(2, 2), Matrix::zeros(3, 3), vec![]).is_err());
        assert!(LeontiefModel::new(
            Matrix::zeros(2, 2),
            Matrix::zeros(2, 2),
            vec!["one".into()]
        )
        .is_err());
        let wide =
            MatrixPencil::new(Matrix::zeros(2, 3), Matrix::zeros(2, 3)).unwrap();
        assert!(recovered_flow(&wide).is_err());
    }
}
