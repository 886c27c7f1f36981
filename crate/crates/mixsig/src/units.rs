//! Fundamental units of real quadratic fields via the continued-fraction
//! expansion of the quadratic irrationality.
//!
//! The expansion of `sqrt(D)` for squarefree `D` is periodic; the convergent
//! just before the period closes gives the fundamental solution of
//! `|x^2 - D y^2| = 1`, hence the fundamental unit of `Z[sqrt(D)]`. For
//! `D = 1 mod 4` the maximal order is larger and the fundamental unit may be
//! half-integral; it is recovered from the bounded search `|a^2 - D b^2| = 4`
//! below the continued-fraction solution.

use rug::{Complete, Integer, Rational};

use crate::error::{Error, Result};
use crate::field::FieldSpec;

/// Continued-fraction expansion of `sqrt(d)`: returns the fundamental
/// solution `(x, y)` of `|x^2 - d y^2| = 1` with `y >= 1`.
fn pell_by_continued_fraction(d: &Integer) -> (Integer, Integer) {
    let a0 = d.clone().sqrt();
    debug_assert!(!d.is_perfect_square());
    let mut m = Integer::new();
    let mut den = Integer::from(1);
    let mut a = a0.clone();
    let (mut p_prev, mut p) = (Integer::from(1), a0.clone());
    let (mut q_prev, mut q) = (Integer::new(), Integer::from(1));
    let twice_a0 = (&a0 * 2u32).complete();
    loop {
        m = (&den * &a).complete() - m;
        let mm = (&m * &m).complete();
        den = (d - mm) / den;
        a = (&a0 + &m).complete() / &den;
        if a == twice_a0 {
            break;
        }
        let p_next = (&a * &p).complete() + &p_prev;
        let q_next = (&a * &q).complete() + &q_prev;
        p_prev = std::mem::replace(&mut p, p_next);
        q_prev = std::mem::replace(&mut q, q_next);
    }
    let check = (&p * &p).complete() - d * (&q * &q).complete();
    debug_assert!(check.clone().abs() == 1, "continued fraction gave |x^2-Dy^2| = {check}");
    (p, q)
}

/// Largest square divisor split: `delta = f^2 * d0` with `d0` squarefree.
fn squarefree_part(delta: &Integer) -> (Integer, Integer) {
    let mut d0 = delta.clone();
    let mut f = Integer::from(1);
    let mut k = Integer::from(2);
    loop {
        let k2 = (&k * &k).complete();
        if k2 > d0 {
            break;
        }
        while d0.is_divisible(&k2) {
            d0 /= &k2;
            f *= &k;
        }
        k += 1;
    }
    (f, d0)
}

/// The fundamental unit of the maximal order of `Q(sqrt(d0))` as
/// `(A + B sqrt(d0)) / 2`.
fn fundamental_unit_half_coords(d0: &Integer) -> (Integer, Integer) {
    let (x, y) = pell_by_continued_fraction(d0);
    if d0.clone().modulo(&Integer::from(4)) == 1 {
        // the unit may be properly half-integral; the smallest b >= 1 with
        // d0 b^2 +- 4 a perfect square gives it, and b is bounded by the
        // continued-fraction solution
        let mut b = Integer::from(1);
        while b <= y {
            let db2 = d0 * (&b * &b).complete();
            for sign in [-4i32, 4] {
                let a2 = (&db2 + sign).complete();
                if a2.cmp0() == std::cmp::Ordering::Greater && a2.is_perfect_square() {
                    return (a2.sqrt(), b);
                }
            }
            b += 1;
        }
    }
    (x * Integer::from(2), y * Integer::from(2))
}

/// Fundamental unit of a real quadratic field, returned as integer
/// coordinates in the field's integral basis. When the given order does not
/// contain the fundamental unit of the maximal order, the smallest integral
/// power that lands in it is returned. The result has |norm| = 1, verified
/// exactly.
pub fn fundamental_unit_real_quadratic(spec: &FieldSpec) -> Result<Vec<Integer>> {
    if spec.degree() != 2 {
        return Err(Error::NotApplicable("fundamental unit needs a quadratic field".into()));
    }
    let sig = spec.signature()?;
    if sig.r() != 2 {
        return Err(Error::NotApplicable(
            "fundamental unit needs a real quadratic field".into(),
        ));
    }
    // x^2 + b x + c
    let b = spec.polynomial()[1].clone();
    let c = spec.polynomial()[0].clone();
    let delta = (&b * &b).complete() - Integer::from(4) * &c;
    debug_assert!(delta.cmp0() == std::cmp::Ordering::Greater);
    let (f, d0) = squarefree_part(&delta);
    let (big_a, big_b) = fundamental_unit_half_coords(&d0);

    // sqrt(d0) = (2 theta + b) / f, so
    // eps = A/2 + (B/(2f)) (2 theta + b)
    let eps_const = Rational::from((big_a.clone(), Integer::from(2)))
        + Rational::from((&big_b * &b).complete()) / Rational::from((&f * 2u32).complete());
    let eps_theta = Rational::from((big_b.clone(), f.clone()));

    // climb powers until the coordinates are integral in the given basis
    let one = crate::poly::QPoly::new(vec![Rational::from(1)]);
    let eps_poly = crate::poly::QPoly::new(vec![eps_const, eps_theta]);
    let mut power = one.clone();
    for _ in 0..12 {
        power = spec.mul_mod(&power, &eps_poly);
        let coords = spec.power_poly_to_integral(&power)?;
        if coords.iter().all(|q| *q.denom() == 1) {
            let zcoords: Vec<Integer> = coords.iter().map(|q| q.numer().clone()).collect();
            let nm = spec.norm_of_integral(&zcoords)?;
            if nm.clone().abs() != 1 {
                return Err(Error::NotAUnit(format!(
                    "{}: continued fraction produced norm {nm}",
                    spec.label()
                )));
            }
            return Ok(zcoords);
        }
    }
    Err(Error::NotAUnit(format!(
        "{}: no integral power of the fundamental unit found",
        spec.label()
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rug::Rational;

    fn zvec(v: &[i64]) -> Vec<Integer> {
        v.iter().map(|&x| Integer::from(x)).collect()
    }

    fn power_basis(n: usize) -> Vec<Vec<Rational>> {
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| if i == j { Rational::from(1) } else { Rational::new() })
                    .collect()
            })
            .collect()
    }

    #[test]
    fn pell_small_cases() {
        assert_eq!(pell_by_continued_fraction(&Integer::from(2)), (Integer::from(1), Integer::from(1)));
        assert_eq!(pell_by_continued_fraction(&Integer::from(3)), (Integer::from(2), Integer::from(1)));
        assert_eq!(pell_by_continued_fraction(&Integer::from(5)), (Integer::from(2), Integer::from(1)));
        // x^2 - 7 y^2 = 1 has fundamental solution (8, 3)
        assert_eq!(pell_by_continued_fraction(&Integer::from(7)), (Integer::from(8), Integer::from(3)));
        // classic: D = 13 -> (18, 5) with norm -1
        assert_eq!(pell_by_continued_fraction(&Integer::from(13)), (Integer::from(18), Integer::from(5)));
    }

    #[test]
    fn unit_of_sqrt2_is_one_plus_theta() {
        let spec = FieldSpec::new("x^2-2", zvec(&[-2, 0, 1]), power_basis(2), vec![]).unwrap();
        assert_eq!(fundamental_unit_real_quadratic(&spec).unwrap(), zvec(&[1, 1]));
    }

    #[test]
    fn unit_of_sqrt3_is_two_plus_theta() {
        let spec = FieldSpec::new("x^2-3", zvec(&[-3, 0, 1]), power_basis(2), vec![]).unwrap();
        assert_eq!(fundamental_unit_real_quadratic(&spec).unwrap(), zvec(&[2, 1]));
    }

    #[test]
    fn unit_of_golden_polynomial_is_theta() {
        let spec = FieldSpec::new("x^2-x-1", zvec(&[-1, -1, 1]), power_basis(2), vec![]).unwrap();
        assert_eq!(fundamental_unit_real_quadratic(&spec).unwrap(), zvec(&[0, 1]));
    }

    #[test]
    fn unit_in_non_maximal_order_climbs_to_a_power() {
        // Z[sqrt5] does not contain (1+sqrt5)/2; the cube 2+sqrt5 is the
        // fundamental unit of the order
        let spec = FieldSpec::new("x^2-5", zvec(&[-5, 0, 1]), power_basis(2), vec![]).unwrap();
        assert_eq!(fundamental_unit_real_quadratic(&spec).unwrap(), zvec(&[2, 1]));
    }

    #[test]
    fn unit_in_half_integral_basis() {
        let rows = vec![
            vec![Rational::from(1), Rational::new()],
            vec![Rational::from((1, 2)), Rational::from((1, 2))],
        ];
        let spec = FieldSpec::new("x^2-5/half", zvec(&[-5, 0, 1]), rows, vec![]).unwrap();
        assert_eq!(fundamental_unit_real_quadratic(&spec).unwrap(), zvec(&[0, 1]));
    }

    #[test]
    fn rejects_imaginary_and_higher_degree() {
        let spec = FieldSpec::new("x^2+1", zvec(&[1, 0, 1]), power_basis(2), vec![]).unwrap();
        assert!(matches!(
            fundamental_unit_real_quadratic(&spec),
            Err(Error::NotApplicable(_))
        ));
        let cubic = FieldSpec::new("x^3-2", zvec(&[-2, 0, 0, 1]), power_basis(3), vec![]).unwrap();
        assert!(matches!(
            fundamental_unit_real_quadratic(&cubic),
            Err(Error::NotApplicable(_))
        ));
    }
}
