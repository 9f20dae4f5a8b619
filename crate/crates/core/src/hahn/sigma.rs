//! The difference operator acting on exponents through a rational matrix.

use crate::error::{Error, Result};
use crate::field::Field;
use crate::RatMatrix;

use super::group::Exponent;
use super::series::HahnSeries;

fn apply(a: &RatMatrix, e: &Exponent) -> Vec<num_rational::BigRational> {
    a.mul_vec(e.coords())
}

/// Maps each exponent `γ ↦ A·γ` (coordinates as a column vector) and each
/// coefficient through `frobenius_power` Frobenius steps. The precision
/// marker is sent to `A·π`, which is exact when `A` preserves the order.
pub fn sigma_action<F: Field>(a: &HahnSeries<F>, m: &RatMatrix, frobenius_power: u32) -> Result<HahnSeries<F>> {
    let g = a.group().clone();
    if !m.is_square() || m.rows() != g.rank() {
        return Err(Error::Dimension(format!("matrix is {}x{}, group rank is {}", m.rows(), m.cols(), g.rank())));
    }
    let mut images = Vec::with_capacity(a.terms().len());
    for (e, _) in a.terms() {
        images.push(g.exponent(apply(m, e)).map_err(|_| Error::LeavesGroup(e.to_string()))?);
    }
    let precision = match a.precision() {
        Some(p) => Some(g.exponent(apply(m, p)).map_err(|_| Error::LeavesGroup(p.to_string()))?),
        None => None,
    };
    let field = a.field();
    let mut images = images.into_iter();
    a.map_terms(|c| field.frobenius_power(c, frobenius_power), |_| images.next().expect("one image per term"), precision)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Rationals;
    use crate::hahn::ExponentGroup;
    use num_rational::BigRational;

    fn m(rows: &[&[i64]]) -> RatMatrix {
        RatMatrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| BigRational::from_integer(x.into())).collect()).collect()).unwrap()
    }

    #[test]
    fn fibonacci_shift() {
        let g = ExponentGroup::new(
            vec![
                crate::hahn::Weight::Rational(BigRational::from_integer(1.into())),
                crate::hahn::Weight::Algebraic(std::sync::Arc::new(crate::realalg::AlgebraicReal::sqrt(2).unwrap())),
            ],
            1,
        )
        .unwrap();
        let one = BigRational::from_integer(1.into());
        let a = m(&[&[0, 1], &[1, 1]]);
        let g1 = HahnSeries::monomial(Rationals, g.clone(), one.clone(), g.exponent_i64(&[1, 0]).unwrap());
        let g2 = HahnSeries::monomial(Rationals, g.clone(), one.clone(), g.exponent_i64(&[0, 1]).unwrap());
        assert_eq!(sigma_action(&g1, &a, 0).unwrap(), g2);
        let g12 = HahnSeries::monomial(Rationals, g.clone(), one, g.exponent_i64(&[1, 1]).unwrap());
        assert_eq!(sigma_action(&g2, &a, 0).unwrap(), g12);
        assert_eq!(sigma_action(&g12, &RatMatrix::identity(2), 0).unwrap(), g12);
    }

    #[test]
    fn leaving_the_group() {
        let g = ExponentGroup::integers();
        let x = HahnSeries::monomial(Rationals, g.clone(), BigRational::from_integer(1.into()), g.exponent_i64(&[1]).unwrap());
        let half = RatMatrix::from_rows(vec![vec![BigRational::new(1.into(), 2.into())]]).unwrap();
        assert!(matches!(sigma_action(&x, &half, 0), Err(Error::LeavesGroup(_))));
    }
}
