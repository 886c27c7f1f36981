//! Number fields: ingestion of a defining polynomial with an integral basis,
//! exact arithmetic in the field through multiplication matrices, the
//! Minkowski embedding into `V`, the lattice of the ring of integers, and
//! the action of units on `V` by positive diagonal matrices.
//!
//! The integral basis is input, not computed: maximal-order algorithms are
//! out of scope here, and the shipped catalog carries correct bases for all
//! of its fields.

use rug::{Complete, Integer, Rational};

use crate::error::{Error, Result};
use crate::mat::QMat;
use crate::poly::{self, QPoly};
use crate::real::{Precision, Real};
use crate::space::{Lattice, Signature, Vector};

/// A number field given by a monic integer polynomial and an integral basis
/// expressed in the power basis of a root, plus optional units of infinite
/// order given by integer coordinates in the integral basis.
#[derive(Clone, Debug)]
pub struct FieldSpec {
    label: String,
    poly: Vec<Integer>,
    qpoly: QPoly,
    basis: QMat,
    basis_inv: QMat,
    units: Vec<Vec<Integer>>,
    /// Power sums of the roots, cached for trace computations.
    traces: Vec<Rational>,
}

impl FieldSpec {
    /// Validates shape, monicity, a small-factor irreducibility test (full
    /// for degree at most 5), invertibility of the basis, and that every
    /// declared unit has norm of absolute value one.
    pub fn new(
        label: impl Into<String>,
        poly: Vec<Integer>,
        basis_rows: Vec<Vec<Rational>>,
        units: Vec<Vec<Integer>>,
    ) -> Result<Self> {
        let label = label.into();
        let n = poly.len().saturating_sub(1);
        if n == 0 {
            return Err(Error::InvalidField(format!("{label}: polynomial must have degree >= 1")));
        }
        if poly[n] != 1 {
            return Err(Error::InvalidField(format!("{label}: polynomial must be monic")));
        }
        let qpoly = QPoly::from_integers(&poly);
        if !qpoly.is_squarefree() {
            return Err(Error::RepeatedRoots);
        }
        if poly::has_small_factor(&poly) {
            return Err(Error::InvalidField(format!("{label}: polynomial is reducible")));
        }
        if basis_rows.len() != n || basis_rows.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidField(format!("{label}: integral basis must be {n}x{n}")));
        }
        let basis = QMat::from_rows(basis_rows);
        let basis_inv = basis
            .inverse()
            .ok_or_else(|| Error::InvalidField(format!("{label}: integral basis is singular")))?;
        let traces = poly::power_sums(&qpoly, 2 * n);
        let spec = FieldSpec { label, poly, qpoly, basis, basis_inv, units: Vec::new(), traces };
        for u in &units {
            let nm = spec.norm_of_integral(u)?;
            if nm.clone().abs() != 1 {
                return Err(Error::NotAUnit(format!(
                    "{}: declared unit {:?} has norm {}",
                    spec.label, u, nm
                )));
            }
        }
        Ok(FieldSpec { units, ..spec })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn degree(&self) -> usize {
        self.poly.len() - 1
    }

    pub fn polynomial(&self) -> &[Integer] {
        &self.poly
    }

    pub fn qpoly(&self) -> &QPoly {
        &self.qpoly
    }

    pub fn units(&self) -> &[Vec<Integer>] {
        &self.units
    }

    pub fn integral_basis(&self) -> &QMat {
        &self.basis
    }

    /// Signature by Sturm root counting, exact.
    pub fn signature(&self) -> Result<Signature> {
        let r = poly::count_real_roots(&self.qpoly);
        Signature::new(r, (self.degree() - r) / 2)
    }

    /// The element with the given integral-basis coordinates as a polynomial
    /// in the power basis.
    pub fn to_power_poly(&self, coords: &[Rational]) -> Result<QPoly> {
        let n = self.degree();
        if coords.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: coords.len() });
        }
        let mut acc = vec![Rational::new(); n];
        for (i, c) in coords.iter().enumerate() {
            if *c == 0 {
                continue;
            }
            for j in 0..n {
                acc[j] += (c * self.basis.at(i, j)).complete();
            }
        }
        Ok(QPoly::new(acc))
    }

    pub fn integral_to_power_poly(&self, coords: &[Integer]) -> Result<QPoly> {
        self.to_power_poly(&coords.iter().map(|z| Rational::from(z)).collect::<Vec<_>>())
    }

    /// Product in the field: polynomial product reduced mod the defining
    /// polynomial.
    pub fn mul_mod(&self, a: &QPoly, b: &QPoly) -> QPoly {
        let (_, r) = a.mul(b).divmod(&self.qpoly);
        r
    }

    /// Trace of an element given in the power basis, via cached power sums.
    pub fn trace_of_power_poly(&self, a: &QPoly) -> Rational {
        let mut acc = Rational::new();
        for (k, c) in a.coeffs().iter().enumerate() {
            acc += (c * &self.traces[k]).complete();
        }
        acc
    }

    /// Matrix of multiplication by `a` (power basis), exact.
    pub fn mult_matrix(&self, a: &QPoly) -> QMat {
        let n = self.degree();
        let mut m = QMat::zero(n, n);
        let mut cur = a.clone();
        for j in 0..n {
            for i in 0..n {
                m.set(i, j, cur.coeff(i));
            }
            // multiply by theta
            let mut shifted = vec![Rational::new()];
            shifted.extend(cur.coeffs().iter().cloned());
            let (_, r) = QPoly::new(shifted).divmod(&self.qpoly);
            cur = r;
        }
        m
    }

    /// Field norm of an element in the power basis, exact.
    pub fn norm_of_power_poly(&self, a: &QPoly) -> Rational {
        self.mult_matrix(a).det()
    }

    /// Field norm of an element given by integral-basis coordinates.
    pub fn norm_of_integral(&self, coords: &[Integer]) -> Result<Rational> {
        Ok(self.norm_of_power_poly(&self.integral_to_power_poly(coords)?))
    }

    pub fn is_unit(&self, coords: &[Integer]) -> Result<bool> {
        Ok(self.norm_of_integral(coords)?.abs() == 1)
    }

    /// Absolute discriminant: |det Tr(b_i b_j)| over the integral basis,
    /// exact; a non-integral determinant signals an invalid basis.
    pub fn discriminant(&self) -> Result<Integer> {
        let n = self.degree();
        let rows: Vec<QPoly> =
            (0..n).map(|i| QPoly::new(self.basis.row(i).to_vec())).collect();
        let mut t = QMat::zero(n, n);
        for i in 0..n {
            for j in i..n {
                let prod = self.mul_mod(&rows[i], &rows[j]);
                let tr = self.trace_of_power_poly(&prod);
                t.set(i, j, tr.clone());
                t.set(j, i, tr);
            }
        }
        let det = t.det().abs();
        if *det.denom() != 1 {
            return Err(Error::NonIntegralDiscriminant);
        }
        if det == 0 {
            return Err(Error::InvalidField(format!("{}: zero discriminant", self.label)));
        }
        Ok(det.numer().clone())
    }

    /// Express a power-basis element in integral-basis coordinates.
    pub fn power_poly_to_integral(&self, a: &QPoly) -> Result<Vec<Rational>> {
        let n = self.degree();
        if a.degree() >= n && !a.is_zero() && a.degree() != 0 {
            debug_assert!(a.degree() < n, "element must be reduced mod the defining polynomial");
        }
        let mut coeffs = vec![Rational::new(); n];
        for (i, c) in a.coeffs().iter().enumerate() {
            coeffs[i] = c.clone();
        }
        // coords * basis = coeffs  =>  coords = coeffs * basis^{-1}
        let mut coords = vec![Rational::new(); n];
        for j in 0..n {
            let mut acc = Rational::new();
            for (i, c) in coeffs.iter().enumerate() {
                acc += (c * self.basis_inv.at(i, j)).complete();
            }
            coords[j] = acc;
        }
        Ok(coords)
    }
}

/// Approximations of the embeddings of the field: real roots ascending, one
/// complex root per conjugate pair (positive imaginary part), sorted by real
/// then imaginary part.
#[derive(Clone, Debug)]
pub struct EmbeddingSet {
    sig: Signature,
    real_roots: Vec<Real>,
    complex_roots: Vec<(Real, Real)>,
    prec: Precision,
}

impl EmbeddingSet {
    pub fn compute(spec: &FieldSpec, prec: &Precision) -> Result<Self> {
        let sig = spec.signature()?;
        let real_roots = poly::real_roots(&spec.qpoly, prec);
        if real_roots.len() != sig.r() {
            return Err(Error::Inconsistent("real root count disagrees with Sturm".into()));
        }
        let complex_roots = poly::upper_complex_roots(&spec.qpoly, prec)?;
        if complex_roots.len() != sig.s() {
            return Err(Error::Inconsistent("complex root count disagrees with Sturm".into()));
        }
        Ok(EmbeddingSet { sig, real_roots, complex_roots, prec: prec.clone() })
    }

    pub fn signature(&self) -> Signature {
        self.sig
    }

    pub fn real_roots(&self) -> &[Real] {
        &self.real_roots
    }

    pub fn complex_roots(&self) -> &[(Real, Real)] {
        &self.complex_roots
    }

    pub fn precision(&self) -> &Precision {
        &self.prec
    }

    /// Minkowski embedding of the element with the given rational
    /// integral-basis coordinates.
    pub fn embed(&self, spec: &FieldSpec, coords: &[Rational]) -> Result<Vector> {
        let a = spec.to_power_poly(coords)?;
        let mut re = Vec::with_capacity(self.sig.r());
        for root in &self.real_roots {
            re.push(a.eval_real(root));
        }
        let mut cx = Vec::with_capacity(self.sig.s());
        for (x, y) in &self.complex_roots {
            let (u, v) = a.eval_complex(x, y);
            cx.push([u, v]);
        }
        Vector::new(self.sig, re, cx)
    }

    pub fn embed_integral(&self, spec: &FieldSpec, coords: &[Integer]) -> Result<Vector> {
        self.embed(spec, &coords.iter().map(|z| Rational::from(z)).collect::<Vec<_>>())
    }

    /// Absolute values of the embeddings of an element, one per place.
    pub fn place_abs(&self, spec: &FieldSpec, coords: &[Integer]) -> Result<Vec<Real>> {
        let a = spec.integral_to_power_poly(coords)?;
        let mut out = Vec::with_capacity(self.sig.places());
        for root in &self.real_roots {
            out.push(a.eval_real(root).abs());
        }
        for (x, y) in &self.complex_roots {
            let (u, v) = a.eval_complex(x, y);
            out.push((u.square() + v.square()).sqrt());
        }
        Ok(out)
    }
}

/// An element of the positive diagonal group `G` acting coordinate-wise on
/// `V`: one positive entry per place, with determinant one as an `n x n`
/// transformation (complex entries act on a 2-plane each).
#[derive(Clone, Debug)]
pub struct DiagonalElement {
    sig: Signature,
    entries: Vec<Real>,
}

impl DiagonalElement {
    pub fn new(sig: Signature, entries: Vec<Real>, prec: &Precision) -> Result<Self> {
        if entries.len() != sig.places() {
            return Err(Error::DimensionMismatch { expected: sig.places(), got: entries.len() });
        }
        if entries.iter().any(|e| !e.is_positive()) {
            return Err(Error::InvalidField("diagonal entries must be positive".into()));
        }
        let d = DiagonalElement { sig, entries };
        let vol = d.volume_factor(prec);
        if !vol.rel_close(&prec.one(), &prec.exp2(-40)) {
            return Err(Error::Inconsistent(format!(
                "diagonal element has determinant {} != 1",
                vol
            )));
        }
        Ok(d)
    }

    pub fn identity(sig: Signature, prec: &Precision) -> Self {
        DiagonalElement { sig, entries: vec![prec.one(); sig.places()] }
    }

    /// Product of the entries with complex entries squared: the determinant
    /// of the induced map on `V`.
    pub fn volume_factor(&self, prec: &Precision) -> Real {
        let mut acc = prec.one();
        for (i, e) in self.entries.iter().enumerate() {
            acc = &acc * e;
            if i >= self.sig.r() {
                acc = &acc * e;
            }
        }
        acc
    }

    pub fn signature(&self) -> Signature {
        self.sig
    }

    pub fn entries(&self) -> &[Real] {
        &self.entries
    }

    pub fn mul(&self, other: &DiagonalElement) -> Result<DiagonalElement> {
        if self.sig != other.sig {
            return Err(Error::SignatureMismatch);
        }
        Ok(DiagonalElement {
            sig: self.sig,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a * b)
                .collect(),
        })
    }

    /// Apply to a point of `V`: the i-th real coordinate scales by entry i,
    /// each complex pair scales by its entry.
    pub fn apply(&self, v: &Vector) -> Result<Vector> {
        if self.sig != v.signature() {
            return Err(Error::SignatureMismatch);
        }
        let mut re = Vec::with_capacity(self.sig.r());
        for i in 0..self.sig.r() {
            re.push(v.real_coord(i) * &self.entries[i]);
        }
        let mut cx = Vec::with_capacity(self.sig.s());
        for j in 0..self.sig.s() {
            let (x, y) = v.complex_pair(j);
            let e = &self.entries[self.sig.r() + j];
            cx.push([x * e, y * e]);
        }
        Vector::new(self.sig, re, cx)
    }
}

/// The image of a unit under the homomorphism into `G`: the diagonal element
/// with entries `|sigma_i(u)|`. The input must have norm of absolute value
/// one, checked exactly.
pub fn unit_action(
    spec: &FieldSpec,
    emb: &EmbeddingSet,
    unit: &[Integer],
) -> Result<DiagonalElement> {
    let nm = spec.norm_of_integral(unit)?;
    if nm.clone().abs() != 1 {
        return Err(Error::NotAUnit(format!("norm is {nm}")));
    }
    let entries = emb.place_abs(spec, unit)?;
    DiagonalElement::new(emb.signature(), entries, emb.precision())
}

/// The Minkowski lattice of the ring of integers together with the field
/// data needed downstream.
#[derive(Clone, Debug)]
pub struct NumberFieldLattice {
    spec: FieldSpec,
    emb: EmbeddingSet,
    lattice: Lattice,
    d_k: Integer,
}

impl NumberFieldLattice {
    /// Embed the integral basis and verify the covolume identity
    /// `det = 2^{-s} sqrt(d_K)` to relative `2^-40`.
    pub fn build(spec: &FieldSpec, prec: &Precision) -> Result<Self> {
        let emb = EmbeddingSet::compute(spec, prec)?;
        let sig = emb.signature();
        let n = spec.degree();
        let mut basis = Vec::with_capacity(n);
        for i in 0..n {
            let coords: Vec<Rational> = spec.basis.row(i).to_vec();
            basis.push(emb.embed(spec, &coords)?);
        }
        let lattice = Lattice::from_basis(sig, basis, prec)?;
        let d_k = spec.discriminant()?;
        let expect = prec.integer(&d_k).sqrt() * prec.exp2(-(sig.s() as i32));
        if !lattice.det().rel_close(&expect, &prec.exp2(-40)) {
            return Err(Error::Inconsistent(format!(
                "{}: covolume {} but 2^-s sqrt(d_K) = {}",
                spec.label(),
                lattice.det(),
                expect
            )));
        }
        Ok(NumberFieldLattice { spec: spec.clone(), emb, lattice, d_k })
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.spec
    }

    pub fn embeddings(&self) -> &EmbeddingSet {
        &self.emb
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn discriminant(&self) -> &Integer {
        &self.d_k
    }

    pub fn signature(&self) -> Signature {
        self.lattice.signature()
    }

    /// Diagonal actions of the field's units: the declared ones, or the
    /// computed fundamental unit for a real quadratic field with none given.
    pub fn unit_actions(&self) -> Result<Vec<DiagonalElement>> {
        let mut units = self.spec.units().to_vec();
        let sig = self.signature();
        if units.is_empty() && sig.r() == 2 && sig.s() == 0 && self.spec.degree() == 2 {
            units.push(crate::units::fundamental_unit_real_quadratic(&self.spec)?);
        }
        units
            .iter()
            .map(|u| unit_action(&self.spec, &self.emb, u))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn zvec(v: &[i64]) -> Vec<Integer> {
        v.iter().map(|&x| Integer::from(x)).collect()
    }

    fn qrows(rows: &[&[(i64, i64)]]) -> Vec<Vec<Rational>> {
        rows.iter()
            .map(|r| r.iter().map(|&(n, d)| Rational::from((n, d))).collect())
            .collect()
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

    fn gaussian() -> FieldSpec {
        FieldSpec::new("Q(i)", zvec(&[1, 0, 1]), power_basis(2), vec![]).unwrap()
    }

    fn sqrt2() -> FieldSpec {
        FieldSpec::new("Q(sqrt2)", zvec(&[-2, 0, 1]), power_basis(2), vec![zvec(&[1, 1])])
            .unwrap()
    }

    fn golden() -> FieldSpec {
        FieldSpec::new("Q(sqrt5)", zvec(&[-1, -1, 1]), power_basis(2), vec![]).unwrap()
    }

    #[test]
    fn signatures() {
        assert_eq!(gaussian().signature().unwrap(), Signature::new(0, 1).unwrap());
        assert_eq!(sqrt2().signature().unwrap(), Signature::new(2, 0).unwrap());
        let cubic =
            FieldSpec::new("c23", zvec(&[-1, -1, 0, 1]), power_basis(3), vec![]).unwrap();
        assert_eq!(cubic.signature().unwrap(), Signature::new(1, 1).unwrap());
    }

    #[test]
    fn repeated_roots_are_rejected() {
        let r = FieldSpec::new("bad", zvec(&[1, 2, 1]), power_basis(2), vec![]);
        assert!(matches!(r, Err(Error::RepeatedRoots)));
    }

    #[test]
    fn discriminants_of_quadratics() {
        assert_eq!(gaussian().discriminant().unwrap(), Integer::from(4));
        assert_eq!(sqrt2().discriminant().unwrap(), Integer::from(8));
        assert_eq!(golden().discriminant().unwrap(), Integer::from(5));
    }

    #[test]
    fn discriminant_with_denominator_basis() {
        // Q(sqrt5) as x^2 - 5 with basis {1, (1+theta)/2}: field discriminant 5
        let spec = FieldSpec::new(
            "Q(sqrt5)/half",
            zvec(&[-5, 0, 1]),
            qrows(&[&[(1, 1), (0, 1)], &[(1, 2), (1, 2)]]),
            vec![zvec(&[0, 1])],
        )
        .unwrap();
        assert_eq!(spec.discriminant().unwrap(), Integer::from(5));
    }

    #[test]
    fn corrupted_basis_gives_non_integral_discriminant() {
        let spec = FieldSpec::new(
            "bad-basis",
            zvec(&[-2, 0, 1]),
            qrows(&[&[(1, 1), (0, 1)], &[(0, 1), (1, 3)]]),
            vec![],
        )
        .unwrap();
        assert!(matches!(spec.discriminant(), Err(Error::NonIntegralDiscriminant)));
    }

    #[test]
    fn embedding_of_generator() {
        let prec = Precision::default();
        let spec = gaussian();
        let emb = EmbeddingSet::compute(&spec, &prec).unwrap();
        let v = emb.embed_integral(&spec, &zvec(&[0, 1])).unwrap();
        let (x, y) = v.complex_pair(0);
        assert!(x.abs() < prec.exp2(-100));
        assert!(y.rel_close(&prec.one(), prec.tol()));
        let one = emb.embed_integral(&spec, &zvec(&[1, 0])).unwrap();
        assert!(one.complex_pair(0).0.rel_close(&prec.one(), prec.tol()));
    }

    #[test]
    fn embedding_is_additive_and_multiplicative() {
        let prec = Precision::default();
        let spec = sqrt2();
        let emb = EmbeddingSet::compute(&spec, &prec).unwrap();
        let a = emb.embed_integral(&spec, &zvec(&[1, 1])).unwrap();
        let one = emb.embed_integral(&spec, &zvec(&[1, 0])).unwrap();
        let theta = emb.embed_integral(&spec, &zvec(&[0, 1])).unwrap();
        let sum = one.add(&theta).unwrap();
        for (u, v) in a.chart().iter().zip(sum.chart()) {
            assert!(u.rel_close(v, prec.tol()));
        }
        // 1 + theta evaluated at ascending roots: (1 - sqrt2, 1 + sqrt2)
        let r2 = prec.real(2).sqrt();
        assert!(a.real_coord(0).rel_close(&(prec.one() - &r2), prec.tol()));
        assert!(a.real_coord(1).rel_close(&(prec.one() + &r2), prec.tol()));
        // multiplicativity of the embedding
        let sq = theta.coordwise_mul(&theta).unwrap();
        let two = emb.embed_integral(&spec, &zvec(&[2, 0])).unwrap();
        for (u, v) in sq.chart().iter().zip(two.chart()) {
            assert!(u.rel_close(v, &prec.exp2(-100)));
        }
    }

    #[test]
    fn norm_matches_norm_form_of_embedding() {
        let prec = Precision::default();
        for spec in [gaussian(), sqrt2(), golden()] {
            let emb = EmbeddingSet::compute(&spec, &prec).unwrap();
            for coords in [[3, 2], [1, -4], [0, 5]] {
                let c = zvec(&coords);
                let exact = spec.norm_of_integral(&c).unwrap().abs();
                let v = emb.embed_integral(&spec, &c).unwrap();
                assert!(v.norm_form().rel_close(&prec.rational(&exact), &prec.exp2(-35)));
            }
        }
    }

    #[test]
    fn build_lattice_covolumes() {
        let prec = Precision::default();
        let nf = NumberFieldLattice::build(&gaussian(), &prec).unwrap();
        assert_eq!(nf.discriminant(), &Integer::from(4));
        assert!(nf.lattice().det().rel_close(&prec.one(), &prec.exp2(-40)));

        let nf = NumberFieldLattice::build(&sqrt2(), &prec).unwrap();
        assert!(nf.lattice().det().rel_close(&prec.real(8).sqrt(), &prec.exp2(-40)));

        let nf = NumberFieldLattice::build(&golden(), &prec).unwrap();
        assert!(nf.lattice().det().rel_close(&prec.real(5).sqrt(), &prec.exp2(-40)));
    }

    #[test]
    fn unit_action_of_sqrt2_unit() {
        let prec = Precision::default();
        let spec = sqrt2();
        let emb = EmbeddingSet::compute(&spec, &prec).unwrap();
        let d = unit_action(&spec, &emb, &zvec(&[1, 1])).unwrap();
        // ascending roots: |1 - sqrt2| then |1 + sqrt2|
        let r2 = prec.real(2).sqrt();
        assert!(d.entries()[0].rel_close(&(&r2 - &prec.one()), prec.tol()));
        assert!(d.entries()[1].rel_close(&(&r2 + &prec.one()), prec.tol()));
        assert!(d.volume_factor(&prec).rel_close(&prec.one(), &prec.exp2(-100)));
    }

    #[test]
    fn unit_action_rejects_non_units() {
        let prec = Precision::default();
        let spec = sqrt2();
        let emb = EmbeddingSet::compute(&spec, &prec).unwrap();
        assert!(matches!(
            unit_action(&spec, &emb, &zvec(&[2, 0])),
            Err(Error::NotAUnit(_))
        ));
    }

    #[test]
    fn unit_action_of_torsion_is_identity() {
        let prec = Precision::default();
        let spec = gaussian();
        let emb = EmbeddingSet::compute(&spec, &prec).unwrap();
        for u in [zvec(&[0, 1]), zvec(&[-1, 0])] {
            let d = unit_action(&spec, &emb, &u).unwrap();
            assert!(d.entries()[0].rel_close(&prec.one(), &prec.exp2(-100)));
        }
    }

    #[test]
    fn unit_action_is_homomorphism() {
        let prec = Precision::default();
        let spec = sqrt2();
        let emb = EmbeddingSet::compute(&spec, &prec).unwrap();
        let u = zvec(&[1, 1]); // 1 + sqrt2
        let u2 = zvec(&[3, 2]); // (1+sqrt2)^2
        let du = unit_action(&spec, &emb, &u).unwrap();
        let du2 = unit_action(&spec, &emb, &u2).unwrap();
        let prod = du.mul(&du).unwrap();
        for (a, b) in prod.entries().iter().zip(du2.entries()) {
            assert!(a.rel_close(b, &prec.exp2(-35)));
        }
    }

    #[test]
    fn compatibility_of_embedding_and_action() {
        // sigma(u y) = eps(u) sigma(y) up to a phase: moduli match per place
        let prec = Precision::default();
        let spec = FieldSpec::new("c23", zvec(&[-1, -1, 0, 1]), power_basis(3), vec![]).unwrap();
        let emb = EmbeddingSet::compute(&spec, &prec).unwrap();
        let u = zvec(&[0, 1, 0]); // theta is a unit: norm 1
        assert!(spec.is_unit(&u).unwrap());
        let d = unit_action(&spec, &emb, &u).unwrap();
        let y = zvec(&[2, -1, 3]);
        let uy = {
            let prod = spec.mul_mod(
                &spec.integral_to_power_poly(&u).unwrap(),
                &spec.integral_to_power_poly(&y).unwrap(),
            );
            let coords = spec.power_poly_to_integral(&prod).unwrap();
            emb.embed(&spec, &coords).unwrap()
        };
        let ey = d.apply(&emb.embed_integral(&spec, &y).unwrap()).unwrap();
        // compare per-place moduli
        assert!(uy.real_coord(0).abs().rel_close(&ey.real_coord(0).abs(), &prec.exp2(-35)));
        let m1 = {
            let (x, yy) = uy.complex_pair(0);
            (x.square() + yy.square()).sqrt()
        };
        let m2 = {
            let (x, yy) = ey.complex_pair(0);
            (x.square() + yy.square()).sqrt()
        };
        assert!(m1.rel_close(&m2, &prec.exp2(-35)));
    }
}
