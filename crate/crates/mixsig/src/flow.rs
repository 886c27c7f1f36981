//! The diagonal group flow on lattices of mixed signature.
//!
//! `G` is the group of positive diagonal determinant-one matrices acting
//! coordinate-wise on `V`; it preserves the norm form and the covolume. For
//! a lattice with compact orbit the flow admits points where the top `n - s`
//! successive minima coincide; this module finds such points numerically by
//! a grid-then-descend search over the torus spanned by the unit actions
//! (or an explicit log-coordinate box when no units are available) and
//! evaluates the inequality chain that turns semi-well-roundedness into a
//! bound on the inhomogeneous minimum.

use rug::{Integer, Rational};

use crate::error::{Error, Result};
use crate::field::DiagonalElement;
use crate::minima::MinimumEstimate;
use crate::real::{Precision, Real};
use crate::reduction::{
    canonicalize_sign, enumerate_ball, gso_of_cols, hermite_gamma, lll_reduce, successive_minima,
    IndependentPicker, MinimaProfile,
};
use crate::space::{Lattice, Signature};

/// A point of the trace-zero log space of `G`: `r + s` logarithmic
/// coordinates whose multiplicity-weighted sum vanishes (weight 1 for real
/// places, 2 for complex places).
#[derive(Clone, Debug)]
pub struct TorusPoint {
    sig: Signature,
    log: Vec<Real>,
}

impl TorusPoint {
    pub fn new(sig: Signature, log: Vec<Real>, prec: &Precision) -> Result<Self> {
        if log.len() != sig.places() {
            return Err(Error::DimensionMismatch { expected: sig.places(), got: log.len() });
        }
        let sum = weighted_sum(sig, &log, prec);
        if sum.abs() > prec.real(1e-12) {
            return Err(Error::Inconsistent(format!(
                "log coordinates have weighted sum {sum}, expected 0"
            )));
        }
        Ok(TorusPoint { sig, log })
    }

    pub fn identity(sig: Signature, prec: &Precision) -> Self {
        TorusPoint { sig, log: vec![prec.zero(); sig.places()] }
    }

    /// Project arbitrary log coordinates onto the trace-zero subspace.
    pub fn project(sig: Signature, raw: &[Real], prec: &Precision) -> Result<Self> {
        if raw.len() != sig.places() {
            return Err(Error::DimensionMismatch { expected: sig.places(), got: raw.len() });
        }
        let sum = weighted_sum(sig, raw, prec);
        let mean = sum / prec.real(sig.n() as u32);
        let log = raw.iter().map(|x| x - &mean).collect();
        Ok(TorusPoint { sig, log })
    }

    pub fn signature(&self) -> Signature {
        self.sig
    }

    pub fn log_coords(&self) -> &[Real] {
        &self.log
    }

    pub fn translate(&self, other: &TorusPoint) -> Result<TorusPoint> {
        if self.sig != other.sig {
            return Err(Error::SignatureMismatch);
        }
        Ok(TorusPoint {
            sig: self.sig,
            log: self.log.iter().zip(&other.log).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn to_diagonal(&self, prec: &Precision) -> Result<DiagonalElement> {
        DiagonalElement::new(self.sig, self.log.iter().map(Real::exp).collect(), prec)
    }
}

fn weighted_sum(sig: Signature, log: &[Real], prec: &Precision) -> Real {
    let mut sum = prec.zero();
    for (i, l) in log.iter().enumerate() {
        sum += l;
        if i >= sig.r() {
            sum += l;
        }
    }
    sum
}

/// Log coordinates of a unit action, as a torus direction.
pub fn log_vector(d: &DiagonalElement, prec: &Precision) -> TorusPoint {
    TorusPoint {
        sig: d.signature(),
        log: d.entries().iter().map(Real::ln).collect(),
    }
    .normalized(prec)
}

impl TorusPoint {
    /// Snap tiny weighted-sum drift (from logs of floating entries) to the
    /// trace-zero subspace.
    fn normalized(self, prec: &Precision) -> TorusPoint {
        TorusPoint::project(self.sig, &self.log, prec).expect("projection keeps shape")
    }
}

/// Apply the flow to a lattice: scales every basis vector coordinate-wise.
/// Preserves the covolume and the norm form of every vector.
pub fn apply_flow(g: &TorusPoint, lattice: &Lattice) -> Result<Lattice> {
    let prec = lattice.precision().clone();
    if g.sig != lattice.signature() {
        return Err(Error::SignatureMismatch);
    }
    let d = g.to_diagonal(&prec)?;
    let basis = lattice
        .basis()
        .iter()
        .map(|b| d.apply(b))
        .collect::<Result<Vec<_>>>()?;
    Lattice::from_basis(lattice.signature(), basis, &prec)
}

/// The set `D(g)` of lattice vectors strictly shorter than the top minimum
/// of `g Lambda`, its span dimension, and the profile it was measured
/// against. Vectors carry original-basis coordinates.
#[derive(Clone, Debug)]
pub struct DegenerateData {
    pub g: TorusPoint,
    pub vectors: Vec<Vec<Integer>>,
    pub span_dim: usize,
    /// True when the strictness margin removed every vector.
    pub clipped_empty: bool,
    pub profile: MinimaProfile,
}

/// Enumerate `D(g)` with a relative strictness margin on `mu_n(g Lambda)`.
pub fn degenerate_set(
    g: &TorusPoint,
    lattice: &Lattice,
    margin: f64,
    enum_budget: u64,
) -> Result<DegenerateData> {
    let prec = lattice.precision().clone();
    let moved = apply_flow(g, lattice)?;
    let profile = successive_minima(&moved, enum_budget)?;
    let cutoff = profile.mu_last() * &prec.real(1.0 - margin);
    let cutoff2 = cutoff.square();
    let red = lll_reduce(&moved, 0.99)?;
    let n = moved.dim();
    let cols: Vec<Vec<Real>> = (0..n).map(|j| red.lattice.chart_matrix().col(j)).collect();
    let gso = gso_of_cols(&cols, &prec)?;
    let mut seen = std::collections::BTreeSet::new();
    let mut vectors: Vec<(Vec<Integer>, Real)> = Vec::new();
    enumerate_ball(&gso, &cutoff2, None, enum_budget, &prec, &mut |x, _| {
        let mut coords = red.to_original_coords(x);
        canonicalize_sign(&mut coords);
        if seen.insert(coords.clone()) {
            let len2 = moved.len2_of_coords(&coords);
            if len2 < cutoff2 {
                vectors.push((coords, len2));
            }
        }
    })?;
    vectors.sort_by(crate::reduction::candidate_order);
    let mut picker = IndependentPicker::new();
    for (coords, _) in &vectors {
        picker.try_add(coords);
    }
    let span_dim = picker.rank();
    let clipped_empty = vectors.is_empty();
    Ok(DegenerateData {
        g: g.clone(),
        vectors: vectors.into_iter().map(|(c, _)| c).collect(),
        span_dim,
        clipped_empty,
        profile,
    })
}

/// Search domain for the semi-well-rounded search.
pub enum SearchDomain {
    /// Torus directions from unit actions spanning a finite-index subgroup
    /// of the stabilizer.
    Units(Vec<DiagonalElement>),
    /// Box in log coordinates, labeled as not covering the torus.
    Box { half_width: f64 },
}

#[derive(Clone, Debug)]
pub struct FlowSearchConfig {
    /// Convergence tolerance on `ratio - 1`.
    pub tol: f64,
    /// Grid resolution per torus dimension.
    pub grid_per_dim: usize,
    /// Number of grid seeds refined by coordinate descent.
    pub restarts: usize,
    /// Enumeration node budget per objective evaluation.
    pub enum_budget: u64,
    /// Step shrink floor for the descent.
    pub step_floor: f64,
    /// Strictness margin handed to the degenerate-set computation.
    pub span_margin: f64,
}

impl Default for FlowSearchConfig {
    fn default() -> Self {
        FlowSearchConfig {
            tol: 1e-6,
            grid_per_dim: 32,
            restarts: 4,
            enum_budget: 10_000_000,
            step_floor: 1e-9,
            span_margin: 1e-5,
        }
    }
}

/// Outcome of the semi-well-rounded search.
#[derive(Clone, Debug)]
pub struct OrbitSearchResult {
    pub g_star: TorusPoint,
    pub profile: MinimaProfile,
    /// `mu_n / mu_{s+1}` at `g_star`; at least 1 up to rounding.
    pub ratio: Real,
    pub span_dim: usize,
    pub converged: bool,
    /// True when the search domain covers the torus (unit directions).
    pub torus_covered: bool,
    pub evaluations: u64,
    /// Evaluated points and objective values, for export.
    pub trace: Vec<(Vec<f64>, f64)>,
}

impl OrbitSearchResult {
    pub fn domain_label(&self) -> &'static str {
        if self.torus_covered {
            "torus fundamental domain"
        } else {
            "box search, torus not covered"
        }
    }
}

/// Minimize `f(g) = mu_n(g Lambda) / mu_{s+1}(g Lambda)` by a grid over the
/// torus fundamental domain (or the box) followed by multi-start coordinate
/// descent with shrinking steps. Successive minima are recomputed from
/// scratch at every evaluated point. Non-convergence is a result state, not
/// an error.
pub fn search_semi_wellrounded(
    lattice: &Lattice,
    domain: SearchDomain,
    cfg: &FlowSearchConfig,
) -> Result<OrbitSearchResult> {
    let prec = lattice.precision().clone();
    let sig = lattice.signature();
    let s = sig.s();
    let n = sig.n();
    let dims = sig.places() - 1;

    let ratio_of = |profile: &MinimaProfile| -> Real { &profile.mu[n - 1] / &profile.mu[s] };

    let finish = |g: TorusPoint, evals: u64, trace: Vec<(Vec<f64>, f64)>, covered: bool| -> Result<OrbitSearchResult> {
        let dd = degenerate_set(&g, lattice, cfg.span_margin, cfg.enum_budget)?;
        let ratio = ratio_of(&dd.profile);
        let converged = ratio <= prec.real(1.0 + cfg.tol);
        Ok(OrbitSearchResult {
            g_star: g,
            ratio,
            span_dim: dd.span_dim,
            profile: dd.profile,
            converged,
            torus_covered: covered,
            evaluations: evals,
            trace,
        })
    };

    if dims == 0 {
        return finish(TorusPoint::identity(sig, &prec), 1, Vec::new(), true);
    }

    // direction vectors in log space
    let (dirs, covered): (Vec<TorusPoint>, bool) = match domain {
        SearchDomain::Units(units) => {
            let mut dirs: Vec<TorusPoint> = Vec::new();
            for u in &units {
                if u.signature() != sig {
                    return Err(Error::SignatureMismatch);
                }
                let cand = log_vector(u, &prec);
                // keep only directions independent of the chosen ones
                let mut probe: Vec<Vec<f64>> =
                    dirs.iter().map(|d| d.log.iter().map(Real::to_f64).collect()).collect();
                probe.push(cand.log.iter().map(Real::to_f64).collect());
                if f64_rank(&probe) == probe.len() {
                    dirs.push(cand);
                }
                if dirs.len() == dims {
                    break;
                }
            }
            if dirs.len() < dims {
                return Err(Error::NotApplicable(format!(
                    "units span rank {} of the rank-{} torus",
                    dirs.len(),
                    dims
                )));
            }
            (dirs, true)
        }
        SearchDomain::Box { half_width } => {
            // orthogonal-ish basis of the trace-zero subspace, scaled to the box
            let mut dirs = Vec::with_capacity(dims);
            for i in 0..dims {
                let mut raw = vec![prec.zero(); sig.places()];
                raw[i] = prec.real(half_width);
                let t = TorusPoint::project(sig, &raw, &prec)?;
                dirs.push(t);
            }
            (dirs, false)
        }
    };

    let mut evals = 0u64;
    let mut trace: Vec<(Vec<f64>, f64)> = Vec::new();

    let point_at = |t: &[f64]| -> Result<TorusPoint> {
        let mut log = vec![prec.zero(); sig.places()];
        for (j, dir) in dirs.iter().enumerate() {
            let tj = prec.real(t[j]);
            for (slot, l) in log.iter_mut().zip(&dir.log) {
                *slot += &tj * l;
            }
        }
        TorusPoint::project(sig, &log, &prec)
    };

    let eval = |t: &[f64], evals: &mut u64, trace: &mut Vec<(Vec<f64>, f64)>| -> Result<f64> {
        let g = point_at(t)?;
        let moved = apply_flow(&g, lattice)?;
        let profile = successive_minima(&moved, cfg.enum_budget)?;
        let f = ratio_of(&profile).to_f64();
        *evals += 1;
        trace.push((t.to_vec(), f));
        Ok(f)
    };

    // grid over the fundamental domain [0,1)^dims in unit coordinates, or
    // [-1,1]^dims box coordinates
    let gp = cfg.grid_per_dim.max(2);
    let grid_coord = |k: usize| -> f64 {
        if covered {
            k as f64 / gp as f64
        } else {
            -1.0 + (2.0 * k as f64 + 1.0) / gp as f64
        }
    };
    let mut grid_results: Vec<(f64, Vec<f64>)> = Vec::new();
    let mut idx = vec![0usize; dims];
    'grid: loop {
        let t: Vec<f64> = idx.iter().map(|&k| grid_coord(k)).collect();
        let f = eval(&t, &mut evals, &mut trace)?;
        grid_results.push((f, t));
        for d in 0..dims {
            if idx[d] + 1 < gp {
                idx[d] += 1;
                continue 'grid;
            }
            idx[d] = 0;
        }
        break;
    }
    grid_results.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());

    // multi-start coordinate descent with shrinking steps
    let mut best: (f64, Vec<f64>) = grid_results[0].clone();
    for seed in grid_results.iter().take(cfg.restarts.max(1)) {
        let mut cur = seed.clone();
        let mut step = if covered { 0.5 / gp as f64 } else { 1.0 / gp as f64 };
        while step >= cfg.step_floor && cur.0 > 1.0 + 0.25 * cfg.tol {
            let mut improved = false;
            for d in 0..dims {
                for sgn in [1.0f64, -1.0] {
                    let mut t = cur.1.clone();
                    t[d] += sgn * step;
                    let f = eval(&t, &mut evals, &mut trace)?;
                    if f < cur.0 {
                        cur = (f, t);
                        improved = true;
                    }
                }
            }
            if !improved {
                step *= 0.5;
            }
        }
        if cur.0 < best.0 {
            best = cur;
        }
    }

    finish(point_at(&best.1)?, evals, trace, covered)
}

fn f64_rank(rows: &[Vec<f64>]) -> usize {
    let mut m: Vec<Vec<f64>> = rows.to_vec();
    let nrows = m.len();
    if nrows == 0 {
        return 0;
    }
    let ncols = m[0].len();
    let mut rank = 0;
    let mut row = 0;
    for col in 0..ncols {
        let mut piv = row;
        for i in row..nrows {
            if m[i][col].abs() > m[piv][col].abs() {
                piv = i;
            }
        }
        if row >= nrows || m[piv][col].abs() < 1e-9 {
            continue;
        }
        m.swap(row, piv);
        for i in row + 1..nrows {
            let f = m[i][col] / m[row][col];
            for j in col..ncols {
                m[i][j] -= f * m[row][j];
            }
        }
        rank += 1;
        row += 1;
    }
    rank
}

/// One inequality of the proof chain with the evaluated sides.
#[derive(Clone, Debug)]
pub struct ChainInequality {
    pub name: &'static str,
    pub lhs: Real,
    pub rhs: Real,
    pub holds: bool,
}

/// Evaluation of the three proof inequalities at a flow point: the
/// successive-minima product bound, the link from the top minimum to the
/// inhomogeneous minimum, and the link from the first minimum to the
/// homogeneous minimum.
#[derive(Clone, Debug)]
pub struct ChainReport {
    pub a: usize,
    pub minkowski_product: ChainInequality,
    pub inhom_link: ChainInequality,
    pub hom_link: ChainInequality,
    pub gamma_exact: bool,
    pub all_hold: bool,
}

/// Check the chain at `g_star` with exponent `a`, using the certified upper
/// bound of the `M` estimate (the sound side for verification) and a
/// certified homogeneous minimum `m`.
pub fn certify_bound_chain(
    lattice: &Lattice,
    g_star: &TorusPoint,
    a: usize,
    m_value: &Real,
    m_estimate: &MinimumEstimate,
    tol: f64,
    enum_budget: u64,
) -> Result<ChainReport> {
    let prec = lattice.precision().clone();
    let sig = lattice.signature();
    let (r, s, n) = (sig.r(), sig.s(), sig.n());
    if a == 0 || a > r + s {
        return Err(Error::NotApplicable(format!("a = {a} out of range 1..={}", r + s)));
    }
    let moved = apply_flow(g_star, lattice)?;
    let profile = successive_minima(&moved, enum_budget)?;
    let det = lattice.det();
    let (gamma, gamma_exact) = hermite_gamma(n, &prec)?;
    let one_plus = prec.real(1.0 + tol);
    let one_minus = prec.real(1.0 - tol);

    // mu_1^s * mu_n^a <= gamma^{(s+a)/2} * det^{(s+a)/n}
    let mink = {
        let lhs = profile.mu_first().powi(s as i32) * profile.mu_last().powi(a as i32);
        let rhs = gamma.pow_rational(&Rational::from(((s + a) as u32, 2)))
            * det.pow_rational(&Rational::from(((s + a) as u32, n as u32)));
        let holds = lhs <= &rhs * &one_plus;
        ChainInequality { name: "minkowski_product", lhs, rhs, holds }
    };

    // mu_n >= sqrt(2) * M^{1/n}, checked against the certified upper bound
    let inhom = {
        let lhs = profile.mu_last().clone();
        let rhs = prec.real(2).sqrt()
            * m_estimate.upper.pow_rational(&Rational::from((1u32, n as u32)));
        let holds = lhs >= &rhs * &one_minus;
        ChainInequality { name: "inhom_link", lhs, rhs, holds }
    };

    // mu_1 >= sqrt(n/2) * m^{1/n}
    let hom = {
        let lhs = profile.mu_first().clone();
        let rhs = (prec.real(n as u32) / prec.real(2)).sqrt()
            * m_value.pow_rational(&Rational::from((1u32, n as u32)));
        let holds = lhs >= &rhs * &one_minus;
        ChainInequality { name: "hom_link", lhs, rhs, holds }
    };

    let all_hold = mink.holds && inhom.holds && hom.holds;
    Ok(ChainReport {
        a,
        minkowski_product: mink,
        inhom_link: inhom,
        hom_link: hom,
        gamma_exact,
        all_hold,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{unit_action, FieldSpec, NumberFieldLattice};
    use crate::minima::{inhomogeneous_minimum, BnbConfig};
    use crate::space::standard_lattice;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn p() -> Precision {
        Precision::default()
    }

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

    fn sqrt2_field() -> (FieldSpec, NumberFieldLattice) {
        let spec =
            FieldSpec::new("Q(sqrt2)", zvec(&[-2, 0, 1]), power_basis(2), vec![zvec(&[1, 1])])
                .unwrap();
        let nf = NumberFieldLattice::build(&spec, &p()).unwrap();
        (spec, nf)
    }

    #[test]
    fn identity_flow_is_identity() {
        let l = standard_lattice(3, &p()).unwrap();
        let g = TorusPoint::identity(l.signature(), &p());
        let moved = apply_flow(&g, &l).unwrap();
        for (a, b) in moved.basis().iter().zip(l.basis()) {
            for (x, y) in a.chart().iter().zip(b.chart()) {
                assert_eq!(x, y);
            }
        }
    }

    #[test]
    fn flow_scales_coordinates_and_preserves_norm_form() {
        let (_, nf) = sqrt2_field();
        let l = nf.lattice();
        let t = p().real(2);
        let g = TorusPoint::new(
            l.signature(),
            vec![t.ln(), -t.ln()],
            &p(),
        )
        .unwrap();
        let moved = apply_flow(&g, l).unwrap();
        // sigma(1) = (1,1) maps to (2, 0.5)
        let b0 = &moved.basis()[0];
        assert!(b0.real_coord(0).rel_close(&p().real(2), p().tol()));
        assert!(b0.real_coord(1).rel_close(&p().real(0.5), p().tol()));
        assert!(b0.norm_form().rel_close(&p().one(), &p().exp2(-35)));
        assert!(moved.det().rel_close(l.det(), &p().exp2(-35)));
    }

    #[test]
    fn flow_preserves_norm_form_of_random_vectors() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let (_, nf) = sqrt2_field();
        let l = nf.lattice();
        for _ in 0..100 {
            let coords = zvec(&[rng.gen_range(-9..=9), rng.gen_range(-9..=9)]);
            let v = l.vector_from_coords(&coords).unwrap();
            let raw = vec![p().real(rng.gen_range(-1.0..1.0)), p().zero()];
            let g = TorusPoint::project(l.signature(), &raw, &p()).unwrap();
            let d = g.to_diagonal(&p()).unwrap();
            let gv = d.apply(&v).unwrap();
            assert!(gv.norm_form().rel_close(&v.norm_form(), &p().exp2(-35)));
        }
    }

    #[test]
    fn unit_flow_stabilizes_the_lattice() {
        let (spec, nf) = sqrt2_field();
        let l = nf.lattice();
        let emb = nf.embeddings();
        // the diagonal action with absolute-value entries equals field
        // multiplication only when every embedding of the unit is positive;
        // (1+sqrt2)^2 = 3+2sqrt2 is totally positive
        let d = unit_action(&spec, emb, &zvec(&[3, 2])).unwrap();
        let g = log_vector(&d, &p());
        let moved = apply_flow(&g, l).unwrap();
        // every transformed basis vector must have exact integer coordinates
        // in the original basis, and the integer matrix must be unimodular
        let mut rows = Vec::new();
        for b in moved.basis() {
            let coords = l.coords_of(b).unwrap();
            let ints: Vec<Integer> =
                coords.iter().map(|c| c.round_to_integer()).collect();
            let back = l.vector_from_coords(&ints).unwrap();
            let d2 = back.sub(b).unwrap().norm2();
            assert!(d2 < p().exp2(-60), "transformed basis leaves the lattice");
            rows.push(ints);
        }
        let det = crate::mat::integer_det(&rows);
        assert_eq!(det.abs(), Integer::from(1));
    }

    #[test]
    fn degenerate_set_of_standard_lattice_is_empty() {
        let l = standard_lattice(3, &p()).unwrap();
        let g = TorusPoint::identity(l.signature(), &p());
        let dd = degenerate_set(&g, &l, 1e-6, 1_000_000).unwrap();
        assert!(dd.clipped_empty);
        assert_eq!(dd.span_dim, 0);
    }

    #[test]
    fn degenerate_set_of_sqrt2_lattice_at_identity() {
        let (_, nf) = sqrt2_field();
        let dd = degenerate_set(
            &TorusPoint::identity(nf.signature(), &p()),
            nf.lattice(),
            1e-6,
            1_000_000,
        )
        .unwrap();
        // mu = (sqrt2, 2): only +-sigma(1) is strictly shorter than 2
        assert_eq!(dd.vectors.len(), 1);
        assert_eq!(dd.vectors[0], zvec(&[1, 0]));
        assert_eq!(dd.span_dim, 1);
    }

    #[test]
    fn search_on_zero_dimensional_torus() {
        let sig = Signature::new(0, 1).unwrap();
        let l = crate::space::lattice_from_integer_cols(sig, &[vec![1, 0], vec![0, 1]], &p())
            .unwrap();
        let res = search_semi_wellrounded(&l, SearchDomain::Units(vec![]), &Default::default())
            .unwrap();
        assert!(res.converged);
        assert!(res.ratio.rel_close(&p().one(), p().tol()));
        assert_eq!(res.evaluations, 1);
    }

    #[test]
    fn search_finds_sqrt2_semi_wellrounded_point() {
        let (_, nf) = sqrt2_field();
        let units = nf.unit_actions().unwrap();
        let cfg = FlowSearchConfig::default();
        let res =
            search_semi_wellrounded(nf.lattice(), SearchDomain::Units(units), &cfg).unwrap();
        assert!(res.converged, "ratio = {}", res.ratio);
        assert!(res.torus_covered);
        // t^2 = sqrt2 - 1 up to the torus symmetry t <-> 1/t
        let t2 = (p().real(2) * &res.g_star.log_coords()[0]).exp();
        let want = p().real(2).sqrt() - p().one();
        let close = (t2.clone() - &want).abs() < p().real(1e-6)
            || (t2.recip() - &want).abs() < p().real(1e-6);
        assert!(close, "t^2 = {}", t2);
        // mu_1 = mu_2 = (2 sqrt2)^{1/2}
        let want_mu = (p().real(2) * p().real(2).sqrt()).sqrt();
        assert!((res.profile.mu[0].clone() - &want_mu).abs() < p().real(1e-6));
        assert!((res.profile.mu[1].clone() - &want_mu).abs() < p().real(1e-6));
        assert!(res.span_dim == 0);
        assert!(!res.trace.is_empty());
    }

    #[test]
    fn standard_lattice_is_already_well_rounded() {
        let l = standard_lattice(2, &p()).unwrap();
        let res = search_semi_wellrounded(
            &l,
            SearchDomain::Box { half_width: 3.0 },
            &FlowSearchConfig { grid_per_dim: 8, ..Default::default() },
        )
        .unwrap();
        assert!(res.converged);
        assert!(!res.torus_covered);
    }

    #[test]
    fn unit_periodicity_of_objective() {
        let (_, nf) = sqrt2_field();
        let l = nf.lattice();
        let units = nf.unit_actions().unwrap();
        let ulog = log_vector(&units[0], &p());
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..5 {
            let raw = vec![p().real(rng.gen_range(-1.0..1.0)), p().zero()];
            let g = TorusPoint::project(l.signature(), &raw, &p()).unwrap();
            let gu = g.translate(&ulog).unwrap();
            let f1 = {
                let prof = successive_minima(&apply_flow(&g, l).unwrap(), 1_000_000).unwrap();
                &prof.mu[1] / &prof.mu[0]
            };
            let f2 = {
                let prof = successive_minima(&apply_flow(&gu, l).unwrap(), 1_000_000).unwrap();
                &prof.mu[1] / &prof.mu[0]
            };
            assert!(f1.rel_close(&f2, &p().real(1e-9)));
        }
    }

    #[test]
    fn span_is_locally_constant_along_generic_segment() {
        let (_, nf) = sqrt2_field();
        let l = nf.lattice();
        // a generic point away from the well-rounded locus
        let base = 0.1f64;
        let mut spans = Vec::new();
        for k in 0..10 {
            let t = base + 1e-4 * k as f64;
            let raw = vec![p().real(t), p().zero()];
            let g = TorusPoint::project(l.signature(), &raw, &p()).unwrap();
            let dd = degenerate_set(&g, l, 1e-6, 1_000_000).unwrap();
            spans.push((dd.span_dim, dd.vectors.clone()));
        }
        for w in spans.windows(2) {
            assert_eq!(w[0], w[1]);
        }
    }

    #[test]
    fn chain_certification_on_gaussian_lattice() {
        let spec = FieldSpec::new("Q(i)", zvec(&[1, 0, 1]), power_basis(2), vec![]).unwrap();
        let nf = NumberFieldLattice::build(&spec, &p()).unwrap();
        let l = nf.lattice();
        let est = inhomogeneous_minimum(l, &BnbConfig { rel_tol: 1e-9, ..Default::default() })
            .unwrap();
        let g = TorusPoint::identity(l.signature(), &p());
        let rep = certify_bound_chain(l, &g, 1, &p().one(), &est, 1e-5, 1_000_000).unwrap();
        assert!(rep.all_hold, "{rep:?}");
        // mu_2 = 1 = sqrt2 * (1/2)^{1/2}: equality in the inhomogeneous link
        assert!(rep.inhom_link.lhs.rel_close(&rep.inhom_link.rhs, &p().real(1e-8)));
        // mu_1 = 1 = sqrt(2/2) * 1: equality in the homogeneous link
        assert!(rep.hom_link.lhs.rel_close(&rep.hom_link.rhs, &p().real(1e-8)));
    }

    #[test]
    fn chain_certification_on_sqrt2_lattice_at_gstar() {
        let (_, nf) = sqrt2_field();
        let l = nf.lattice();
        let units = nf.unit_actions().unwrap();
        let res = search_semi_wellrounded(l, SearchDomain::Units(units), &Default::default())
            .unwrap();
        assert!(res.converged);
        let est = inhomogeneous_minimum(l, &BnbConfig::default()).unwrap();
        let rep =
            certify_bound_chain(l, &res.g_star, 2, &p().one(), &est, 1e-5, 1_000_000).unwrap();
        assert!(rep.all_hold, "{rep:?}");
        // mu_1 mu_2 = 2 sqrt2 <= gamma_2 det = sqrt(4/3) * 2 sqrt2
        let lhs = &rep.minkowski_product.lhs;
        assert!(lhs.rel_close(&(p().real(2) * p().real(2).sqrt()), &p().real(1e-5)));
        assert!(rep.a == 2);
    }

    #[test]
    fn chain_rejects_out_of_range_exponent() {
        let (_, nf) = sqrt2_field();
        let l = nf.lattice();
        let est = inhomogeneous_minimum(l, &BnbConfig::default()).unwrap();
        let g = TorusPoint::identity(l.signature(), &p());
        assert!(certify_bound_chain(l, &g, 3, &p().one(), &est, 1e-5, 1_000_000).is_err());
    }
}
