//! The ambient space `V = R^r + C^s`, its scalar product and norm form,
//! vectors and lattices.
//!
//! A vector is stored through its orthonormal chart: the `r` real coordinates
//! followed by the `(x, y)` pairs of the `s` complex coordinates. The scalar
//! product of the space is exactly the Euclidean dot product of charts, and
//! the norm form is
//!
//! ```text
//! N(v) = |v_1 ... v_r| * |v_{r+1}|^2 * ... * |v_{r+s}|^2
//! ```
//!
//! which is multiplicative under coordinate-wise multiplication but is not a
//! vector-space norm: it vanishes on the coordinate hyperplanes.

use rug::Integer;

use crate::error::{Error, Result};
use crate::mat::RMat;
use crate::real::{Precision, Real};

/// Numbers of real and complex places; fixes `V` of real dimension `n = r + 2s`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Signature {
    r: usize,
    s: usize,
}

impl Signature {
    pub fn new(r: usize, s: usize) -> Result<Self> {
        if r + 2 * s == 0 {
            return Err(Error::DimensionMismatch { expected: 1, got: 0 });
        }
        Ok(Signature { r, s })
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn s(&self) -> usize {
        self.s
    }

    /// Real dimension `n = r + 2s`.
    pub fn n(&self) -> usize {
        self.r + 2 * self.s
    }

    /// Number of places `r + s`.
    pub fn places(&self) -> usize {
        self.r + self.s
    }
}

impl std::fmt::Display for Signature {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({},{})", self.r, self.s)
    }
}

/// A point of `V`, stored in the orthonormal chart.
#[derive(Clone, Debug)]
pub struct Vector {
    sig: Signature,
    chart: Vec<Real>,
}

impl Vector {
    /// Build from separate real and complex coordinate lists.
    pub fn new(sig: Signature, re: Vec<Real>, cx: Vec<[Real; 2]>) -> Result<Self> {
        if re.len() != sig.r() || cx.len() != sig.s() {
            return Err(Error::DimensionMismatch {
                expected: sig.n(),
                got: re.len() + 2 * cx.len(),
            });
        }
        let mut chart = re;
        for [x, y] in cx {
            chart.push(x);
            chart.push(y);
        }
        Ok(Vector { sig, chart })
    }

    pub fn from_chart(sig: Signature, chart: Vec<Real>) -> Result<Self> {
        if chart.len() != sig.n() {
            return Err(Error::DimensionMismatch { expected: sig.n(), got: chart.len() });
        }
        Ok(Vector { sig, chart })
    }

    pub fn zero(sig: Signature, prec: &Precision) -> Self {
        Vector { sig, chart: vec![prec.zero(); sig.n()] }
    }

    pub fn signature(&self) -> Signature {
        self.sig
    }

    /// The orthonormal chart `(v_1, .., v_r, x_1, y_1, .., x_s, y_s)`.
    pub fn chart(&self) -> &[Real] {
        &self.chart
    }

    pub fn real_coord(&self, i: usize) -> &Real {
        &self.chart[i]
    }

    pub fn complex_pair(&self, j: usize) -> (&Real, &Real) {
        let k = self.sig.r() + 2 * j;
        (&self.chart[k], &self.chart[k + 1])
    }

    /// Scalar product: sum over real coordinates plus the real part of the
    /// Hermitian pairing over complex coordinates.
    pub fn scalar_product(&self, other: &Vector) -> Result<Real> {
        if self.sig != other.sig {
            return Err(Error::SignatureMismatch);
        }
        let bits = self.chart.iter().chain(&other.chart).map(Real::prec).max().unwrap();
        let mut acc = Real::from_float(rug::Float::new(bits));
        for i in 0..self.sig.r() {
            acc += self.real_coord(i) * other.real_coord(i);
        }
        for j in 0..self.sig.s() {
            let (x, y) = self.complex_pair(j);
            let (u, v) = other.complex_pair(j);
            acc += x * u;
            acc += y * v;
        }
        Ok(acc)
    }

    /// Squared Euclidean length.
    pub fn norm2(&self) -> Real {
        self.scalar_product(self).expect("same signature")
    }

    pub fn norm(&self) -> Real {
        self.norm2().sqrt()
    }

    /// The norm form: product of |real coordinates| times squared moduli of
    /// complex coordinates. Zero iff some coordinate vanishes.
    pub fn norm_form(&self) -> Real {
        let mut acc = match self.sig.r() {
            0 => {
                let (x, y) = self.complex_pair(0);
                x.square() + y.square()
            }
            _ => self.chart[0].abs(),
        };
        for i in 1..self.sig.r() {
            acc = &acc * &self.chart[i].abs();
        }
        let start = usize::from(self.sig.r() == 0);
        for j in start..self.sig.s() {
            let (x, y) = self.complex_pair(j);
            acc = &acc * &(x.square() + y.square());
        }
        acc
    }

    pub fn add(&self, other: &Vector) -> Result<Vector> {
        if self.sig != other.sig {
            return Err(Error::SignatureMismatch);
        }
        let chart = self.chart.iter().zip(&other.chart).map(|(a, b)| a + b).collect();
        Ok(Vector { sig: self.sig, chart })
    }

    pub fn sub(&self, other: &Vector) -> Result<Vector> {
        if self.sig != other.sig {
            return Err(Error::SignatureMismatch);
        }
        let chart = self.chart.iter().zip(&other.chart).map(|(a, b)| a - b).collect();
        Ok(Vector { sig: self.sig, chart })
    }

    pub fn scale(&self, t: &Real) -> Vector {
        Vector { sig: self.sig, chart: self.chart.iter().map(|a| a * t).collect() }
    }

    pub fn neg(&self) -> Vector {
        Vector { sig: self.sig, chart: self.chart.iter().map(|a| -a).collect() }
    }

    /// Coordinate-wise product: real coordinates multiply, complex pairs
    /// multiply as complex numbers. The norm form is multiplicative under
    /// this operation.
    pub fn coordwise_mul(&self, other: &Vector) -> Result<Vector> {
        if self.sig != other.sig {
            return Err(Error::SignatureMismatch);
        }
        let mut chart = Vec::with_capacity(self.sig.n());
        for i in 0..self.sig.r() {
            chart.push(self.real_coord(i) * other.real_coord(i));
        }
        for j in 0..self.sig.s() {
            let (x, y) = self.complex_pair(j);
            let (u, v) = other.complex_pair(j);
            chart.push(x * u - y * v);
            chart.push(x * v + y * u);
        }
        Ok(Vector { sig: self.sig, chart })
    }
}

/// A full-rank lattice in `V`, held as an ordered basis with cached chart
/// matrix (columns are the basis charts), Gram matrix and covolume.
#[derive(Clone, Debug)]
pub struct Lattice {
    sig: Signature,
    basis: Vec<Vector>,
    chart_mat: RMat,
    gram: RMat,
    det: Real,
    prec: Precision,
}

impl Lattice {
    /// Build a lattice from `n` basis vectors, rejecting rank-deficient
    /// input: the covolume must exceed the comparison tolerance relative to
    /// the product of the basis lengths.
    pub fn from_basis(sig: Signature, basis: Vec<Vector>, prec: &Precision) -> Result<Self> {
        let n = sig.n();
        if basis.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: basis.len() });
        }
        if basis.iter().any(|b| b.signature() != sig) {
            return Err(Error::SignatureMismatch);
        }
        let cols: Vec<Vec<Real>> = basis.iter().map(|b| b.chart().to_vec()).collect();
        let chart_mat = RMat::from_cols(&cols);
        let det = chart_mat.det(prec).abs();
        let mut scale = prec.one();
        for b in &basis {
            scale = &scale * &b.norm();
        }
        if det <= prec.tol() * &scale || det.is_zero() {
            return Err(Error::RankDeficient);
        }
        let gram = chart_mat.gram_of_cols(prec);
        Ok(Lattice { sig, basis, chart_mat, gram, det, prec: prec.clone() })
    }

    pub fn signature(&self) -> Signature {
        self.sig
    }

    pub fn dim(&self) -> usize {
        self.sig.n()
    }

    pub fn basis(&self) -> &[Vector] {
        &self.basis
    }

    /// Columns are the basis charts; `gram = chart^T * chart`.
    pub fn chart_matrix(&self) -> &RMat {
        &self.chart_mat
    }

    pub fn gram(&self) -> &RMat {
        &self.gram
    }

    /// Covolume `|det|` of the chart matrix; positive.
    pub fn det(&self) -> &Real {
        &self.det
    }

    pub fn precision(&self) -> &Precision {
        &self.prec
    }

    /// The lattice vector with the given integer coordinates.
    pub fn vector_from_coords(&self, coords: &[Integer]) -> Result<Vector> {
        if coords.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: coords.len() });
        }
        let mut chart = vec![self.prec.zero(); self.dim()];
        for (j, c) in coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let cf = self.prec.integer(c);
            for (i, slot) in chart.iter_mut().enumerate() {
                *slot += &cf * self.chart_mat.at(i, j);
            }
        }
        Vector::from_chart(self.sig, chart)
    }

    /// Squared length of the lattice vector with the given coordinates,
    /// evaluated through the Gram matrix.
    pub fn len2_of_coords(&self, coords: &[Integer]) -> Real {
        let n = self.dim();
        debug_assert_eq!(coords.len(), n);
        let cf: Vec<Real> = coords.iter().map(|c| self.prec.integer(c)).collect();
        let mut acc = self.prec.zero();
        for i in 0..n {
            if coords[i].is_zero() {
                continue;
            }
            let mut row = self.prec.zero();
            for j in 0..n {
                if coords[j].is_zero() {
                    continue;
                }
                row += self.gram.at(i, j) * &cf[j];
            }
            acc += &cf[i] * &row;
        }
        acc
    }

    /// Real coordinates of an arbitrary point of `V` in this basis.
    pub fn coords_of(&self, v: &Vector) -> Result<Vec<Real>> {
        if v.signature() != self.sig {
            return Err(Error::SignatureMismatch);
        }
        self.chart_mat
            .solve(&self.prec, v.chart())
            .ok_or(Error::RankDeficient)
    }

    /// Scaled copy `t * Lambda` (t > 0).
    pub fn scaled(&self, t: &Real) -> Result<Lattice> {
        let basis = self.basis.iter().map(|b| b.scale(t)).collect();
        Lattice::from_basis(self.sig, basis, &self.prec)
    }

    /// Replace the basis by another basis of the same group; the caller
    /// asserts equality of spans (e.g. by a unimodular transformation).
    pub(crate) fn with_basis(&self, basis: Vec<Vector>) -> Result<Lattice> {
        Lattice::from_basis(self.sig, basis, &self.prec)
    }
}

/// The standard lattice `Z^n` in signature `(n, 0)`.
pub fn standard_lattice(n: usize, prec: &Precision) -> Result<Lattice> {
    let sig = Signature::new(n, 0)?;
    let mut basis = Vec::with_capacity(n);
    for i in 0..n {
        let mut chart = vec![prec.zero(); n];
        chart[i] = prec.one();
        basis.push(Vector::from_chart(sig, chart)?);
    }
    Lattice::from_basis(sig, basis, prec)
}

/// Integer-chart lattice: basis vector `j` has chart `cols[j]` (integers).
pub fn lattice_from_integer_cols(
    sig: Signature,
    cols: &[Vec<i64>],
    prec: &Precision,
) -> Result<Lattice> {
    let basis = cols
        .iter()
        .map(|col| {
            Vector::from_chart(sig, col.iter().map(|&x| prec.real(x)).collect())
        })
        .collect::<Result<Vec<_>>>()?;
    Lattice::from_basis(sig, basis, prec)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p() -> Precision {
        Precision::default()
    }

    fn vec2(sig: Signature, a: f64, b: f64) -> Vector {
        Vector::from_chart(sig, vec![p().real(a), p().real(b)]).unwrap()
    }

    #[test]
    fn scalar_product_standard_basis() {
        let sig = Signature::new(2, 0).unwrap();
        let e1 = vec2(sig, 1.0, 0.0);
        assert_eq!(e1.scalar_product(&e1).unwrap(), p().real(1));
    }

    #[test]
    fn scalar_product_unit_imaginary() {
        let sig = Signature::new(0, 1).unwrap();
        let i = vec2(sig, 0.0, 1.0);
        // <i, i> = Re(i * conj(i)) = 1
        assert_eq!(i.scalar_product(&i).unwrap(), p().real(1));
    }

    #[test]
    fn scalar_product_conjugate_pair_vanishes() {
        let sig = Signature::new(0, 1).unwrap();
        let u = vec2(sig, 1.0, 1.0);
        let v = vec2(sig, 1.0, -1.0);
        // <1+i, 1-i> = Re((1+i)(1+i)) = 0
        assert!(u.scalar_product(&v).unwrap().is_zero());
    }

    #[test]
    fn scalar_product_rejects_signature_mismatch() {
        let u = vec2(Signature::new(2, 0).unwrap(), 1.0, 0.0);
        let v = vec2(Signature::new(0, 1).unwrap(), 1.0, 0.0);
        assert!(matches!(u.scalar_product(&v), Err(Error::SignatureMismatch)));
    }

    #[test]
    fn chart_roundtrip() {
        let sig = Signature::new(1, 1).unwrap();
        let v = Vector::new(sig, vec![p().real(3)], vec![[p().real(1), p().real(2)]]).unwrap();
        let chart: Vec<f64> = v.chart().iter().map(Real::to_f64).collect();
        assert_eq!(chart, vec![3.0, 1.0, 2.0]);
    }

    #[test]
    fn chart_preserves_norm() {
        let sig = Signature::new(0, 1).unwrap();
        let v = vec2(sig, 1.0, 1.0);
        assert_eq!(v.norm2(), p().real(2));
    }

    #[test]
    fn norm_form_examples() {
        let s20 = Signature::new(2, 0).unwrap();
        assert_eq!(vec2(s20, 2.0, 3.0).norm_form(), p().real(6));

        let s01 = Signature::new(0, 1).unwrap();
        assert_eq!(vec2(s01, 1.0, 1.0).norm_form(), p().real(2));

        let s11 = Signature::new(1, 1).unwrap();
        let v = Vector::new(s11, vec![p().real(3)], vec![[p().real(1), p().real(1)]]).unwrap();
        assert_eq!(v.norm_form(), p().real(6));
    }

    #[test]
    fn norm_form_multiplicative() {
        let sig = Signature::new(1, 1).unwrap();
        let u = Vector::new(sig, vec![p().real(2)], vec![[p().real(1), p().real(2)]]).unwrap();
        let v = Vector::new(sig, vec![p().real(-3)], vec![[p().real(2), p().real(-1)]]).unwrap();
        let uv = u.coordwise_mul(&v).unwrap();
        let lhs = uv.norm_form();
        let rhs = u.norm_form() * v.norm_form();
        assert!(lhs.rel_close(&rhs, p().tol()));
    }

    #[test]
    fn unit_square_lattice() {
        let l = standard_lattice(2, &p()).unwrap();
        assert_eq!(*l.det(), p().real(1));
    }

    #[test]
    fn gaussian_integer_lattice_has_determinant_one() {
        let sig = Signature::new(0, 1).unwrap();
        let l = lattice_from_integer_cols(sig, &[vec![1, 0], vec![0, 1]], &p()).unwrap();
        assert_eq!(*l.det(), p().real(1));
    }

    #[test]
    fn sqrt2_lattice_determinant() {
        // embedding of Z[sqrt(2)]: basis (1,1) and (sqrt2, -sqrt2)
        let sig = Signature::new(2, 0).unwrap();
        let r2 = p().real(2).sqrt();
        let b1 = Vector::from_chart(sig, vec![p().one(), p().one()]).unwrap();
        let b2 = Vector::from_chart(sig, vec![r2.clone(), -&r2]).unwrap();
        let l = Lattice::from_basis(sig, vec![b1, b2], &p()).unwrap();
        let expect = p().real(8).sqrt();
        assert!(l.det().rel_close(&expect, p().tol()));
    }

    #[test]
    fn rank_deficiency_is_rejected() {
        let sig = Signature::new(2, 0).unwrap();
        let b1 = vec2(sig, 1.0, 2.0);
        let b2 = vec2(sig, 2.0, 4.0);
        assert!(matches!(
            Lattice::from_basis(sig, vec![b1, b2], &p()),
            Err(Error::RankDeficient)
        ));
    }

    #[test]
    fn determinant_invariant_under_permutation_and_shear() {
        let sig = Signature::new(1, 1).unwrap();
        let mk = |a: f64, b: f64, c: f64| {
            Vector::from_chart(sig, vec![p().real(a), p().real(b), p().real(c)]).unwrap()
        };
        let b1 = mk(1.0, 0.5, -0.25);
        let b2 = mk(0.0, 2.0, 1.0);
        let b3 = mk(-1.0, 0.0, 3.0);
        let l = Lattice::from_basis(sig, vec![b1.clone(), b2.clone(), b3.clone()], &p()).unwrap();
        let perm =
            Lattice::from_basis(sig, vec![b3.clone(), b1.clone(), b2.clone()], &p()).unwrap();
        assert!(l.det().rel_close(perm.det(), p().tol()));
        // b1 + 3*b2 replaces b1
        let sheared = b1.add(&b2.scale(&p().real(3))).unwrap();
        let shear = Lattice::from_basis(sig, vec![sheared, b2, b3], &p()).unwrap();
        assert!(l.det().rel_close(shear.det(), p().tol()));
    }

    #[test]
    fn coords_roundtrip() {
        let l = standard_lattice(3, &p()).unwrap();
        let v = l
            .vector_from_coords(&[Integer::from(2), Integer::from(-1), Integer::from(5)])
            .unwrap();
        let c = l.coords_of(&v).unwrap();
        assert!(c[0].rel_close(&p().real(2), p().tol()));
        assert!(c[1].rel_close(&p().real(-1), p().tol()));
        assert!(c[2].rel_close(&p().real(5), p().tol()));
        let g = l.len2_of_coords(&[Integer::from(2), Integer::from(-1), Integer::from(5)]);
        assert_eq!(g, p().real(30));
    }
}
