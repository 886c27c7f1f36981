//! Exact univariate polynomial arithmetic over the rationals, plus the root
//! machinery the number-field layer needs: Sturm sequences, real-root
//! isolation by exact bisection, complex roots by Aberth iteration in
//! hardware floats followed by multiprecision Newton polishing with an
//! a-posteriori residual check.

use rug::{Complete, Integer, Rational};

use crate::error::{Error, Result};
use crate::real::{Precision, Real};

/// Dense polynomial, ascending coefficients, no trailing zeros.
#[derive(Clone, Debug, PartialEq)]
pub struct QPoly {
    c: Vec<Rational>,
}

impl QPoly {
    pub fn new(mut c: Vec<Rational>) -> Self {
        while c.len() > 1 && *c.last().unwrap() == 0 {
            c.pop();
        }
        if c.is_empty() {
            c.push(Rational::new());
        }
        QPoly { c }
    }

    pub fn from_integers(c: &[Integer]) -> Self {
        QPoly::new(c.iter().map(|z| Rational::from(z)).collect())
    }

    pub fn zero() -> Self {
        QPoly { c: vec![Rational::new()] }
    }

    pub fn is_zero(&self) -> bool {
        self.c.len() == 1 && self.c[0] == 0
    }

    pub fn degree(&self) -> usize {
        self.c.len() - 1
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.c
    }

    pub fn coeff(&self, i: usize) -> Rational {
        self.c.get(i).cloned().unwrap_or_default()
    }

    pub fn leading(&self) -> &Rational {
        self.c.last().unwrap()
    }

    pub fn is_monic(&self) -> bool {
        *self.leading() == 1
    }

    pub fn derivative(&self) -> QPoly {
        if self.degree() == 0 {
            return QPoly::zero();
        }
        let c = self
            .c
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, a)| Rational::from(a * Rational::from(i as u64)))
            .collect();
        QPoly::new(c)
    }

    pub fn eval_rational(&self, x: &Rational) -> Rational {
        let mut acc = Rational::new();
        for a in self.c.iter().rev() {
            acc *= x;
            acc += a;
        }
        acc
    }

    pub fn eval_real(&self, x: &Real) -> Real {
        let prec = Precision::with_tol_log2(x.prec().max(53), 30);
        let mut acc = prec.zero();
        for a in self.c.iter().rev() {
            acc = &acc * x + prec.rational(a);
        }
        acc
    }

    /// Horner evaluation at a complex point given as a real pair.
    pub fn eval_complex(&self, re: &Real, im: &Real) -> (Real, Real) {
        let prec = Precision::with_tol_log2(re.prec().max(53), 30);
        let mut ar = prec.zero();
        let mut ai = prec.zero();
        for a in self.c.iter().rev() {
            let nr = &ar * re - &ai * im + prec.rational(a);
            let ni = &ar * im + &ai * re;
            ar = nr;
            ai = ni;
        }
        (ar, ai)
    }

    pub fn add(&self, other: &QPoly) -> QPoly {
        let n = self.c.len().max(other.c.len());
        let c = (0..n)
            .map(|i| (self.coeff(i) + other.coeff(i)).into())
            .collect();
        QPoly::new(c)
    }

    pub fn neg(&self) -> QPoly {
        QPoly::new(self.c.iter().map(|a| (-a).complete()).collect())
    }

    pub fn mul(&self, other: &QPoly) -> QPoly {
        if self.is_zero() || other.is_zero() {
            return QPoly::zero();
        }
        let mut c = vec![Rational::new(); self.c.len() + other.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if *a == 0 {
                continue;
            }
            for (j, b) in other.c.iter().enumerate() {
                c[i + j] += (a * b).complete();
            }
        }
        QPoly::new(c)
    }

    pub fn scale(&self, t: &Rational) -> QPoly {
        QPoly::new(self.c.iter().map(|a| (a * t).complete()).collect())
    }

    /// Exact division with remainder.
    pub fn divmod(&self, div: &QPoly) -> (QPoly, QPoly) {
        assert!(!div.is_zero(), "division by the zero polynomial");
        if self.degree() < div.degree() {
            return (QPoly::zero(), self.clone());
        }
        let mut rem = self.c.clone();
        let dn = div.degree();
        let lead = div.leading();
        let qlen = self.degree() - dn + 1;
        let mut q = vec![Rational::new(); qlen];
        for k in (0..qlen).rev() {
            let f = (&rem[k + dn] / lead).complete();
            if f != 0 {
                for (i, b) in div.c.iter().enumerate() {
                    rem[k + i] -= (&f * b).complete();
                }
            }
            q[k] = f;
        }
        rem.truncate(dn.max(1));
        (QPoly::new(q), QPoly::new(rem))
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &QPoly) -> QPoly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.divmod(&b);
            a = b;
            b = r;
        }
        if a.is_zero() {
            return a;
        }
        let lead = a.leading().clone();
        a.scale(&lead.recip())
    }

    /// True when gcd with the derivative is constant.
    pub fn is_squarefree(&self) -> bool {
        self.gcd(&self.derivative()).degree() == 0
    }

    /// Cauchy root bound: all roots lie in `|x| < bound`.
    pub fn cauchy_bound(&self) -> Rational {
        let lead = self.leading();
        let mut m = Rational::new();
        for a in &self.c[..self.c.len() - 1] {
            let q = (a / lead).complete().abs();
            if q > m {
                m = q;
            }
        }
        m + Rational::from(1)
    }
}

/// Sturm chain of a squarefree polynomial, with remainders rescaled by
/// positive constants to keep coefficients small.
pub fn sturm_chain(p: &QPoly) -> Vec<QPoly> {
    let mut chain = vec![p.clone(), p.derivative()];
    loop {
        let k = chain.len();
        if chain[k - 1].is_zero() {
            chain.pop();
            break;
        }
        let (_, r) = chain[k - 2].divmod(&chain[k - 1]);
        if r.is_zero() {
            break;
        }
        let neg = r.neg();
        // normalize by the absolute value of the leading coefficient
        let lead = neg.leading().clone().abs();
        chain.push(neg.scale(&lead.recip()));
    }
    chain
}

fn sign(q: &Rational) -> i32 {
    match q.cmp0() {
        std::cmp::Ordering::Less => -1,
        std::cmp::Ordering::Equal => 0,
        std::cmp::Ordering::Greater => 1,
    }
}

fn variations(signs: impl Iterator<Item = i32>) -> usize {
    let mut last = 0;
    let mut count = 0;
    for s in signs {
        if s == 0 {
            continue;
        }
        if last != 0 && s != last {
            count += 1;
        }
        last = s;
    }
    count
}

fn variations_at(chain: &[QPoly], x: &Rational) -> usize {
    variations(chain.iter().map(|p| sign(&p.eval_rational(x))))
}

fn variations_at_neg_inf(chain: &[QPoly]) -> usize {
    variations(chain.iter().map(|p| {
        let s = sign(p.leading());
        if p.degree() % 2 == 1 {
            -s
        } else {
            s
        }
    }))
}

fn variations_at_pos_inf(chain: &[QPoly]) -> usize {
    variations(chain.iter().map(|p| sign(p.leading())))
}

/// Number of distinct real roots of the squarefree polynomial.
pub fn count_real_roots(p: &QPoly) -> usize {
    let chain = sturm_chain(p);
    variations_at_neg_inf(&chain) - variations_at_pos_inf(&chain)
}

/// Number of roots in the half-open interval `(lo, hi]`.
fn count_roots_in(chain: &[QPoly], lo: &Rational, hi: &Rational) -> usize {
    variations_at(chain, lo) - variations_at(chain, hi)
}

/// Isolate all real roots of a squarefree polynomial into disjoint rational
/// intervals, each containing exactly one root, returned in ascending order.
/// An exact rational root is returned as a degenerate interval.
pub fn isolate_real_roots(p: &QPoly) -> Vec<(Rational, Rational)> {
    let chain = sturm_chain(p);
    let bound = p.cauchy_bound();
    let lo = (-bound.clone()).into();
    let mut out = Vec::new();
    let total = count_roots_in(&chain, &lo, &bound);
    let mut stack = vec![(lo, bound, total)];
    while let Some((lo, hi, k)) = stack.pop() {
        match k {
            0 => {}
            1 => out.push((lo, hi)),
            _ => {
                // keep sampling points off the root set so that half-open
                // interval counts never split a root across both sides
                let mut mid = (Rational::from(&lo + &hi)) / Rational::from(2);
                while p.eval_rational(&mid) == 0 {
                    mid = (Rational::from(&lo + &mid)) / Rational::from(2);
                }
                let left = count_roots_in(&chain, &lo, &mid);
                let right = count_roots_in(&chain, &mid, &hi);
                debug_assert_eq!(left + right, k);
                if left > 0 {
                    stack.push((lo, mid.clone(), left));
                }
                if right > 0 {
                    stack.push((mid, hi, right));
                }
            }
        }
    }
    out.sort_by(|a, b| a.0.cmp(&b.0));
    out
}

/// Refine an isolating interval by sign bisection until its width is below
/// `2^-extra_bits` of the interval scale, then return the midpoint.
pub fn refine_real_root(p: &QPoly, iv: &(Rational, Rational), prec: &Precision) -> Real {
    let (mut lo, mut hi) = iv.clone();
    if lo == hi {
        return prec.rational(&lo);
    }
    let slo = sign(&p.eval_rational(&lo));
    if slo == 0 {
        return prec.rational(&lo);
    }
    if sign(&p.eval_rational(&hi)) == 0 {
        return prec.rational(&hi);
    }
    let steps = prec.bits() + 16;
    let width_goal = {
        let scale = lo.clone().abs().max(hi.clone().abs()).max(Rational::from(1));
        scale / Integer::from(Integer::u_pow_u(2, steps))
    };
    while (hi.clone() - lo.clone()).abs() > width_goal {
        let mid = (Rational::from(&lo + &hi)) / Rational::from(2);
        let sm = sign(&p.eval_rational(&mid));
        if sm == 0 {
            return prec.rational(&mid);
        }
        if sm == slo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let mid = (Rational::from(&lo + &hi)) / Rational::from(2);
    prec.rational(&mid)
}

/// All real roots to the working precision, ascending.
pub fn real_roots(p: &QPoly, prec: &Precision) -> Vec<Real> {
    isolate_real_roots(p)
        .iter()
        .map(|iv| refine_real_root(p, iv, prec))
        .collect()
}

/// Monic integer polynomials only: any rational root is an integer dividing
/// the constant term. Returns a root if one exists.
pub fn integer_root(p: &[Integer]) -> Option<Integer> {
    let qp = QPoly::from_integers(p);
    let c0 = &p[0];
    if c0.is_zero() {
        return Some(Integer::new());
    }
    let mut d = Integer::from(1);
    let limit = c0.clone().abs();
    while d <= limit {
        if c0.is_divisible(&d) {
            for cand in [Rational::from(&d), Rational::from((-d.clone(), Integer::from(1)))] {
                if qp.eval_rational(&cand) == 0 {
                    return Some(cand.numer().clone());
                }
            }
        }
        d += 1;
    }
    None
}

/// Factor test for monic integer polynomials of degree at most 5: checks for
/// integer roots and, for degrees 4 and 5, for monic integer quadratic
/// factors. Degrees above 5 only get the root test; full irreducibility is
/// then a precondition on the input.
pub fn has_small_factor(p: &[Integer]) -> bool {
    let n = p.len() - 1;
    if n <= 1 {
        return false;
    }
    if integer_root(p).is_some() {
        return true;
    }
    if !(4..=5).contains(&n) {
        return false;
    }
    // monic quadratic divisor x^2 + a x + b: b divides the constant term and
    // |a| is bounded via the Cauchy bound on factor coefficients
    let qp = QPoly::from_integers(p);
    let bound = qp.cauchy_bound();
    let abound: Integer = (bound.clone() * Rational::from(2)).ceil().numer().clone();
    let c0 = p[0].clone().abs();
    let mut b = Integer::from(1);
    while b <= c0 {
        if c0.is_divisible(&b) {
            for bs in [b.clone(), (-b.clone()).into()] {
                let mut a = -abound.clone();
                while a <= abound {
                    let quad = QPoly::from_integers(&[bs.clone(), a.clone(), Integer::from(1)]);
                    let (_, r) = qp.divmod(&quad);
                    if r.is_zero() {
                        return true;
                    }
                    a += 1;
                }
            }
        }
        b += 1;
    }
    false
}

/// Power sums of the roots of a monic polynomial via Newton's identities,
/// exact, for exponents `0..=kmax`.
pub fn power_sums(p: &QPoly, kmax: usize) -> Vec<Rational> {
    assert!(p.is_monic(), "power sums need a monic polynomial");
    let n = p.degree();
    // elementary symmetric functions: e_i = (-1)^i c_{n-i}
    let e = |i: usize| -> Rational {
        if i > n {
            return Rational::new();
        }
        let c = p.coeff(n - i);
        if i % 2 == 1 {
            (-c).into()
        } else {
            c
        }
    };
    let mut ps: Vec<Rational> = Vec::with_capacity(kmax + 1);
    ps.push(Rational::from(n as u64));
    for k in 1..=kmax {
        let mut acc = Rational::new();
        for i in 1..k.min(n + 1) {
            let term = e(i) * &ps[k - i];
            if i % 2 == 1 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        if k <= n {
            let term = e(k) * Rational::from(k as u64);
            if k % 2 == 1 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        ps.push(acc);
    }
    ps
}

/// Complex roots in the upper half plane of a squarefree polynomial, refined
/// to the working precision and validated against a scale-aware residual
/// bound. Returned sorted by ascending real part, then imaginary part.
pub fn upper_complex_roots(p: &QPoly, prec: &Precision) -> Result<Vec<(Real, Real)>> {
    let n = p.degree();
    let r = count_real_roots(p);
    let s = (n - r) / 2;
    if s == 0 {
        return Ok(Vec::new());
    }
    let approx = aberth_f64(p);
    // keep one representative per conjugate pair
    let mut ups: Vec<(f64, f64)> = approx.iter().copied().filter(|&(_, im)| im > 1e-9).collect();
    ups.sort_by(|a, b| a.partial_cmp(b).unwrap());
    if ups.len() != s {
        return Err(Error::InvalidField(format!(
            "complex root search found {} upper roots, expected {}",
            ups.len(),
            s
        )));
    }
    let dp = p.derivative();
    let mut out = Vec::with_capacity(s);
    for (re0, im0) in ups {
        let (re, im) = newton_polish_complex(p, &dp, prec, re0, im0)?;
        validate_root(p, prec, &re, &im)?;
        out.push((re, im));
    }
    out.sort_by(|a, b| (a.0.cmp_total(&b.0)).then(a.1.cmp_total(&b.1)));
    Ok(out)
}

fn aberth_f64(p: &QPoly) -> Vec<(f64, f64)> {
    let n = p.degree();
    let c: Vec<f64> = p.c.iter().map(|q| q.to_f64()).collect();
    let eval = |z: (f64, f64)| -> ((f64, f64), (f64, f64)) {
        // returns (p(z), p'(z))
        let mut pv = (0.0, 0.0);
        let mut dv = (0.0, 0.0);
        for a in c.iter().rev() {
            dv = (dv.0 * z.0 - dv.1 * z.1 + pv.0, dv.0 * z.1 + dv.1 * z.0 + pv.1);
            pv = (pv.0 * z.0 - pv.1 * z.1 + a, pv.0 * z.1 + pv.1 * z.0);
        }
        (pv, dv)
    };
    let radius = p.cauchy_bound().to_f64();
    let mut z: Vec<(f64, f64)> = (0..n)
        .map(|k| {
            let t = 2.0 * std::f64::consts::PI * (k as f64) / (n as f64) + 0.4;
            (0.7 * radius * t.cos() + 0.1, 0.7 * radius * t.sin() + 0.07)
        })
        .collect();
    for _ in 0..300 {
        let mut moved = 0.0f64;
        for k in 0..n {
            let (pv, dv) = eval(z[k]);
            let pnorm = pv.0.hypot(pv.1);
            if pnorm == 0.0 {
                continue;
            }
            // w = p/p'
            let d2 = dv.0 * dv.0 + dv.1 * dv.1;
            if d2 == 0.0 {
                z[k].0 += 1e-3;
                continue;
            }
            let w = ((pv.0 * dv.0 + pv.1 * dv.1) / d2, (pv.1 * dv.0 - pv.0 * dv.1) / d2);
            let mut sum = (0.0, 0.0);
            for j in 0..n {
                if j == k {
                    continue;
                }
                let dx = z[k].0 - z[j].0;
                let dy = z[k].1 - z[j].1;
                let dn = dx * dx + dy * dy;
                if dn == 0.0 {
                    continue;
                }
                sum.0 += dx / dn;
                sum.1 += -dy / dn;
            }
            // correction = w / (1 - w*sum)
            let den = (1.0 - (w.0 * sum.0 - w.1 * sum.1), -(w.0 * sum.1 + w.1 * sum.0));
            let dn = den.0 * den.0 + den.1 * den.1;
            if dn == 0.0 {
                continue;
            }
            let corr = ((w.0 * den.0 + w.1 * den.1) / dn, (w.1 * den.0 - w.0 * den.1) / dn);
            z[k].0 -= corr.0;
            z[k].1 -= corr.1;
            moved = moved.max(corr.0.hypot(corr.1));
        }
        if moved < 1e-14 * radius.max(1.0) {
            break;
        }
    }
    z
}

fn newton_polish_complex(
    p: &QPoly,
    dp: &QPoly,
    prec: &Precision,
    re0: f64,
    im0: f64,
) -> Result<(Real, Real)> {
    let mut re = prec.real(re0);
    let mut im = prec.real(im0);
    let goal = prec.exp2(-(prec.bits() as i32) + 4);
    for _ in 0..200 {
        let (pr, pi) = p.eval_complex(&re, &im);
        let (dr, di) = dp.eval_complex(&re, &im);
        let d2 = dr.square() + di.square();
        if d2.is_zero() {
            return Err(Error::PrecisionExhausted);
        }
        let sr = (&pr * &dr + &pi * &di) / &d2;
        let si = (&pi * &dr - &pr * &di) / &d2;
        re = &re - &sr;
        im = &im - &si;
        let step = (sr.square() + si.square()).sqrt();
        let scale = (re.square() + im.square()).sqrt().max(&prec.one());
        if step <= &goal * &scale {
            return Ok((re, im));
        }
    }
    Err(Error::PrecisionExhausted)
}

fn validate_root(p: &QPoly, prec: &Precision, re: &Real, im: &Real) -> Result<()> {
    let (pr, pi) = p.eval_complex(re, im);
    let resid = (pr.square() + pi.square()).sqrt();
    let z = (re.square() + im.square()).sqrt().max(&prec.one());
    let mut scale = prec.zero();
    let mut zp = prec.one();
    for a in p.coeffs() {
        scale += prec.rational(&a.clone().abs()) * &zp;
        zp = &zp * &z;
    }
    let bound = prec.exp2(-(prec.bits() as i32) + 16) * scale;
    if resid <= bound {
        Ok(())
    } else {
        Err(Error::PrecisionExhausted)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn zp(v: &[i64]) -> QPoly {
        QPoly::from_integers(&v.iter().map(|&x| Integer::from(x)).collect::<Vec<_>>())
    }

    #[test]
    fn divmod_roundtrip() {
        let p = zp(&[-1, -1, 0, 1]); // x^3 - x - 1
        let d = zp(&[2, 1]); // x + 2
        let (q, r) = p.divmod(&d);
        assert_eq!(p, d.mul(&q).add(&r));
    }

    #[test]
    fn sturm_counts_real_roots() {
        assert_eq!(count_real_roots(&zp(&[1, 0, 1])), 0); // x^2+1
        assert_eq!(count_real_roots(&zp(&[-2, 0, 1])), 2); // x^2-2
        assert_eq!(count_real_roots(&zp(&[-1, -1, 0, 1])), 1); // x^3-x-1
        assert_eq!(count_real_roots(&zp(&[1, 1, -1, -1, 1])), 0); // x^4-x^3-x^2+x+1
        assert_eq!(count_real_roots(&zp(&[-2, 0, 0, 0, 1])), 2); // x^4-2
    }

    #[test]
    fn real_roots_of_quadratic() {
        let prec = Precision::default();
        let roots = real_roots(&zp(&[-2, 0, 1]), &prec);
        assert_eq!(roots.len(), 2);
        let r2 = prec.real(2).sqrt();
        assert!(roots[0].rel_close(&-&r2, prec.tol()));
        assert!(roots[1].rel_close(&r2, prec.tol()));
    }

    #[test]
    fn exact_rational_root_is_found() {
        let p = zp(&[-6, 11, -6, 1]); // (x-1)(x-2)(x-3)
        let roots = isolate_real_roots(&p);
        assert_eq!(roots.len(), 3);
        assert_eq!(integer_root(&[Integer::from(-6), Integer::from(11), Integer::from(-6), Integer::from(1)]), Some(Integer::from(1)));
    }

    #[test]
    fn squarefree_detection() {
        assert!(zp(&[-2, 0, 1]).is_squarefree());
        assert!(!zp(&[1, 2, 1]).is_squarefree()); // (x+1)^2
    }

    #[test]
    fn quartic_factor_detection() {
        // (x^2+1)(x^2+2) = x^4 + 3x^2 + 2, no rational roots
        assert!(has_small_factor(&[
            Integer::from(2),
            Integer::from(0),
            Integer::from(3),
            Integer::from(0),
            Integer::from(1)
        ]));
        assert!(!has_small_factor(&[
            Integer::from(-2),
            Integer::from(0),
            Integer::from(0),
            Integer::from(0),
            Integer::from(1)
        ]));
    }

    #[test]
    fn power_sums_golden_ratio() {
        // x^2 - x - 1: p1 = 1, p2 = 3, p3 = 4, p4 = 7 (Lucas numbers)
        let ps = power_sums(&zp(&[-1, -1, 1]), 4);
        let want = [2i64, 1, 3, 4, 7];
        for (k, w) in want.iter().enumerate() {
            assert_eq!(ps[k], Rational::from(*w));
        }
    }

    #[test]
    fn complex_roots_of_cyclotomic() {
        let prec = Precision::default();
        let roots = upper_complex_roots(&zp(&[1, 0, 1]), &prec).unwrap();
        assert_eq!(roots.len(), 1);
        assert!(roots[0].0.abs() < prec.exp2(-100));
        assert!(roots[0].1.rel_close(&prec.one(), prec.tol()));
    }

    #[test]
    fn complex_roots_of_x3_minus_x_minus_1() {
        let prec = Precision::default();
        let p = zp(&[-1, -1, 0, 1]);
        let roots = upper_complex_roots(&p, &prec).unwrap();
        assert_eq!(roots.len(), 1);
        // conjugate pair has product = 1/rho where rho is the real root
        let rho = real_roots(&p, &prec)[0].clone();
        let modulus2 = roots[0].0.square() + roots[0].1.square();
        assert!(modulus2.rel_close(&rho.recip(), prec.tol()));
    }
}
