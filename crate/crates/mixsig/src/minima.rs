//! Homogeneous minimum data, norm-form closest-vector values, the covering
//! radius, and the branch-and-bound estimator for the inhomogeneous minimum.
//!
//! The estimator partitions a box covering a fundamental domain into cells,
//! bounds the norm form over each cell by coordinate-wise interval
//! arithmetic against a candidate lattice point, and refines the worst cell
//! first. The certified side is the upper bound; the lower estimate comes
//! from sampled cell centers and is heuristic except in signature (0,1),
//! where the inner infimum is an exact closest-vector computation.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use rayon::prelude::*;
use rug::Integer;

use crate::error::{Error, Result};
use crate::field::NumberFieldLattice;
use crate::real::{Precision, Real};
use crate::reduction::{enumerate_ball, gso_of_cols, lll_reduce, Gso, ReducedBasis, Witness};
use crate::space::{Lattice, Signature, Vector};

/// Two-sided estimate of a minimum with certification flags and effort
/// counters. `lower <= upper` up to the working tolerance.
#[derive(Clone, Debug)]
pub struct MinimumEstimate {
    pub lower: Real,
    pub upper: Real,
    pub lower_certified: bool,
    pub upper_certified: bool,
    pub witness: Option<Vector>,
    pub effort: Effort,
    pub status: EstimateStatus,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Effort {
    pub cells: u64,
    pub enum_nodes: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EstimateStatus {
    /// Closed form or exact witness.
    Exact,
    /// Gap criterion met.
    Converged,
    /// Early stop: the certified upper bound fell below the requested
    /// threshold.
    ThresholdReached,
    /// Budget exhausted; the returned interval is still valid.
    BudgetExhausted,
    /// Minimum over an explicit search ball, upper-bound only.
    BallSearch,
}

/// Per-round subdivision count; fixed so that results do not depend on the
/// worker count.
const ROUND_SIZE: usize = 32;

/// Candidate lattice points kept per cell.
const MAX_CANDIDATES: usize = 48;

/// Configuration of the branch-and-bound estimator.
#[derive(Clone, Debug)]
pub struct BnbConfig {
    /// Relative gap at which to stop.
    pub rel_tol: f64,
    /// Maximum number of processed cells.
    pub max_cells: u64,
    /// Node budget per enumeration call.
    pub enum_budget: u64,
    /// Stop as soon as the certified upper bound is at or below this value.
    pub stop_below: Option<Real>,
    /// Growth factor on the Babai residual for candidate enumeration.
    pub growth: f64,
    /// Optional lattice translate added to the reference box origin.
    pub origin: Option<Vector>,
}

impl Default for BnbConfig {
    fn default() -> Self {
        BnbConfig {
            rel_tol: 1e-3,
            max_cells: 1_000_000,
            enum_budget: 10_000_000,
            stop_below: None,
            growth: 2.0,
            origin: None,
        }
    }
}

/// Nearest-plane frame over a set of independent lattice vectors, used both
/// for the constructive distance bound and for seeding candidate searches.
pub struct BabaiFrame {
    vectors: Vec<Vector>,
    coords: Vec<Vec<Integer>>,
    bstar: Vec<Vec<Real>>,
    bstar2: Vec<Real>,
    max_len: Real,
    prec: Precision,
}

impl BabaiFrame {
    pub fn from_witnesses(lattice: &Lattice, witnesses: &[Witness]) -> Result<Self> {
        let n = lattice.dim();
        if witnesses.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: witnesses.len() });
        }
        let prec = lattice.precision().clone();
        let cols: Vec<Vec<Real>> = witnesses.iter().map(|w| w.vector.chart().to_vec()).collect();
        let gso = gso_of_cols(&cols, &prec)?;
        // reconstruct the orthogonal vectors from mu
        let mut bstar: Vec<Vec<Real>> = Vec::with_capacity(n);
        for i in 0..n {
            let mut v = cols[i].clone();
            for j in 0..i {
                for k in 0..v.len() {
                    v[k] = &v[k] - &gso.mu[i][j] * &bstar[j][k];
                }
            }
            bstar.push(v);
        }
        let mut max_len = prec.zero();
        for w in witnesses {
            max_len = max_len.max(&w.len);
        }
        Ok(BabaiFrame {
            vectors: witnesses.iter().map(|w| w.vector.clone()).collect(),
            coords: witnesses.iter().map(|w| w.coords.clone()).collect(),
            bstar,
            bstar2: gso.bstar2,
            max_len,
            prec,
        })
    }

    pub fn from_basis(lattice: &Lattice) -> Result<Self> {
        let n = lattice.dim();
        let witnesses: Vec<Witness> = (0..n)
            .map(|j| {
                let mut coords = vec![Integer::new(); n];
                coords[j] = Integer::from(1);
                Witness {
                    coords,
                    vector: lattice.basis()[j].clone(),
                    len: lattice.basis()[j].norm(),
                }
            })
            .collect();
        BabaiFrame::from_witnesses(lattice, &witnesses)
    }

    /// The guaranteed residual bound `sqrt(n)/2 * max_i ||w_i||`.
    pub fn residual_bound(&self) -> Real {
        self.prec.real(self.vectors.len() as u32).sqrt() / self.prec.real(2) * &self.max_len
    }

    /// Nearest-plane reduction: returns the lattice coordinates of the
    /// chosen point and the residual `v - lambda`. Deterministic in the
    /// frame order; the residual satisfies the `sqrt(n)/2 * mu_n` bound.
    pub fn reduce(&self, v: &Vector) -> (Vec<Integer>, Vector) {
        let n = self.vectors.len();
        let mut residual = v.clone();
        let mut coords = vec![Integer::new(); self.coords[0].len()];
        for j in (0..n).rev() {
            let mut dot = self.prec.zero();
            for (a, b) in residual.chart().iter().zip(&self.bstar[j]) {
                dot += a * b;
            }
            let c = &dot / &self.bstar2[j];
            let k = c.round_to_integer();
            if k.is_zero() {
                continue;
            }
            let kf = self.prec.integer(&k);
            residual = residual.sub(&self.vectors[j].scale(&kf)).expect("same signature");
            for (slot, wc) in coords.iter_mut().zip(&self.coords[j]) {
                *slot += (&k * wc).complete();
            }
        }
        (coords, residual)
    }
}

use rug::Complete;

/// Closest-vector machinery over an LLL-reduced basis.
pub struct CloseVectorSearcher {
    lattice: Lattice,
    red: ReducedBasis,
    gso: Gso,
    frame: BabaiFrame,
    prec: Precision,
}

impl CloseVectorSearcher {
    pub fn new(lattice: &Lattice) -> Result<Self> {
        let red = lll_reduce(lattice, 0.99)?;
        let n = lattice.dim();
        let cols: Vec<Vec<Real>> =
            (0..n).map(|j| red.lattice.chart_matrix().col(j)).collect();
        let gso = gso_of_cols(&cols, lattice.precision())?;
        let frame = BabaiFrame::from_basis(&red.lattice)?;
        Ok(CloseVectorSearcher {
            lattice: lattice.clone(),
            red,
            gso,
            frame,
            prec: lattice.precision().clone(),
        })
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    fn tau_of(&self, v: &Vector) -> Vec<Real> {
        let n = self.gso.bstar2.len();
        let mut tau = Vec::with_capacity(n);
        for j in 0..n {
            let mut dot = self.prec.zero();
            for (a, b) in v.chart().iter().zip(&self.frame.bstar[j]) {
                dot += a * b;
            }
            tau.push(&dot / &self.frame.bstar2[j]);
        }
        tau
    }

    /// All lattice points within `radius` of `v`, as reduced-basis original
    /// coordinates with exact recomputed squared distances, sorted by
    /// distance then coordinates. Also returns the node count.
    pub fn enumerate_within(
        &self,
        v: &Vector,
        radius: &Real,
        budget: u64,
    ) -> Result<(Vec<(Vec<Integer>, Real)>, u64)> {
        // frame.bstar spans the reduced basis in order, so tau matches gso
        let tau = self.tau_of(v);
        let radius2 = radius.square();
        let mut found = Vec::new();
        let nodes = enumerate_ball(
            &self.gso,
            &radius2,
            Some(&tau),
            budget,
            &self.prec,
            &mut |x, _d2| {
                let coords = self.red.to_original_coords(x);
                found.push(coords);
            },
        )?;
        let mut out: Vec<(Vec<Integer>, Real)> = found
            .into_iter()
            .map(|coords| {
                let lam = self.lattice.vector_from_coords(&coords).expect("coords");
                let d2 = v.sub(&lam).expect("sig").norm2();
                (coords, d2)
            })
            .collect();
        out.sort_by(|a, b| a.1.cmp_total(&b.1).then_with(|| a.0.cmp(&b.0)));
        Ok((out, nodes))
    }

    /// Exact closest vector: Babai seed, then enumeration within the Babai
    /// distance.
    pub fn closest(&self, v: &Vector, budget: u64) -> Result<(Vec<Integer>, Real, u64)> {
        let (coords, residual) = self.frame.reduce(v);
        let d2 = residual.norm2();
        if d2.is_zero() {
            return Ok((coords, d2, 0));
        }
        let (cands, nodes) = self.enumerate_within(v, &d2.sqrt(), budget)?;
        match cands.into_iter().next() {
            Some((c, d2)) => Ok((c, d2, nodes)),
            // the Babai point itself lies within the radius, so this branch
            // only guards numerical fuzz at the boundary
            None => Ok((coords, d2, nodes)),
        }
    }

    /// Minimum of the norm form `N(v - lambda)` over lattice points within
    /// the Babai residual times the growth factor. This is an upper bound on
    /// the inner infimum; in signature (0,1) it is the exact infimum.
    pub fn local_norm_min(
        &self,
        v: &Vector,
        growth: f64,
        budget: u64,
    ) -> Result<LocalNormMin> {
        let sig = self.lattice.signature();
        let exact = sig.r() == 0 && sig.s() == 1;
        let (coords, residual) = self.frame.reduce(v);
        let d2 = residual.norm2();
        if d2.is_zero() {
            return Ok(LocalNormMin {
                value: self.prec.zero(),
                exact: true,
                lambda: coords,
                nodes: 0,
            });
        }
        let radius = d2.sqrt() * self.prec.real(growth);
        let (cands, nodes) = self.enumerate_within(v, &radius, budget)?;
        let mut best: Option<(Real, Vec<Integer>)> = None;
        for (c, _d2) in cands {
            let lam = self.lattice.vector_from_coords(&c)?;
            let val = v.sub(&lam)?.norm_form();
            let better = match &best {
                None => true,
                Some((bv, bc)) => {
                    val.cmp_total(bv).then_with(|| c.cmp(bc)) == Ordering::Less
                }
            };
            if better {
                best = Some((val, c));
            }
        }
        let (value, lambda) = best.unwrap_or((residual.norm_form(), coords));
        Ok(LocalNormMin { value, exact, lambda, nodes })
    }
}

/// Result of a local norm-form minimization at one point.
pub struct LocalNormMin {
    pub value: Real,
    /// True exactly when the value certifies the inner infimum (signature
    /// (0,1), or the point was a lattice point).
    pub exact: bool,
    pub lambda: Vec<Integer>,
    pub nodes: u64,
}

/// Mode of the homogeneous-minimum computation.
pub enum HomogeneousMode<'a> {
    /// The lattice is the Minkowski image of a ring of integers: the minimum
    /// is exactly one, attained at the image of 1.
    NumberField(&'a NumberFieldLattice),
    /// Search over nonzero lattice vectors with Euclidean length at most the
    /// given radius; certifies only an upper bound.
    Search { radius: Real, enum_budget: u64 },
}

/// The homogeneous minimum `m(Lambda) = inf N over nonzero lattice points`.
pub fn homogeneous_minimum(lattice: &Lattice, mode: HomogeneousMode) -> Result<MinimumEstimate> {
    match mode {
        HomogeneousMode::NumberField(nf) => {
            let prec = lattice.precision();
            let spec = nf.spec();
            let one_poly = crate::poly::QPoly::new(vec![rug::Rational::from(1)]);
            let coords = spec.power_poly_to_integral(&one_poly)?;
            let witness = nf.embeddings().embed(spec, &coords)?;
            Ok(MinimumEstimate {
                lower: prec.one(),
                upper: prec.one(),
                lower_certified: true,
                upper_certified: true,
                witness: Some(witness),
                effort: Effort::default(),
                status: EstimateStatus::Exact,
            })
        }
        HomogeneousMode::Search { radius, enum_budget } => {
            let prec = lattice.precision().clone();
            let red = lll_reduce(lattice, 0.99)?;
            let n = lattice.dim();
            let cols: Vec<Vec<Real>> =
                (0..n).map(|j| red.lattice.chart_matrix().col(j)).collect();
            let gso = gso_of_cols(&cols, &prec)?;
            let mut best: Option<(Real, Vec<Integer>)> = None;
            let radius2 = radius.square();
            let nodes = enumerate_ball(&gso, &radius2, None, enum_budget, &prec, &mut |x, _| {
                let mut coords = red.to_original_coords(x);
                crate::reduction::canonicalize_sign(&mut coords);
                let val = lattice
                    .vector_from_coords(&coords)
                    .expect("coords")
                    .norm_form();
                let better = match &best {
                    None => true,
                    Some((bv, bc)) => val.cmp_total(bv).then_with(|| coords.cmp(bc)) == Ordering::Less,
                };
                if better {
                    best = Some((val, coords));
                }
            })?;
            let (value, coords) = best.ok_or_else(|| {
                Error::NotApplicable("search radius contains no nonzero lattice vector".into())
            })?;
            let witness = lattice.vector_from_coords(&coords)?;
            Ok(MinimumEstimate {
                lower: value.clone(),
                upper: value,
                lower_certified: false,
                upper_certified: true,
                witness: Some(witness),
                effort: Effort { cells: 0, enum_nodes: nodes },
                status: EstimateStatus::BallSearch,
            })
        }
    }
}

/// Nearest-plane reduction against a witness frame. Returns the chosen
/// lattice point and the residual; the residual length obeys
/// `||v - lambda|| <= sqrt(n)/2 * max_i ||w_i||`.
pub fn babai_reduce(
    lattice: &Lattice,
    witnesses: &[Witness],
    v: &Vector,
) -> Result<(Vec<Integer>, Vector)> {
    let frame = BabaiFrame::from_witnesses(lattice, witnesses)?;
    Ok(frame.reduce(v))
}

/// The objective measured over cells.
#[derive(Clone, Copy, PartialEq, Eq)]
enum Objective {
    NormForm,
    Dist2,
}

struct Cell {
    center: Vec<Real>,
    half: Vec<Real>,
    upper: Real,
    best_lambda: Vec<Integer>,
    seq: u64,
}

struct HeapEntry {
    upper: Real,
    seq: u64,
    idx: usize,
}

impl PartialEq for HeapEntry {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for HeapEntry {}
impl PartialOrd for HeapEntry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for HeapEntry {
    fn cmp(&self, other: &Self) -> Ordering {
        // max-heap on upper bound, oldest cell first on ties
        self.upper
            .cmp_total(&other.upper)
            .then_with(|| other.seq.cmp(&self.seq))
    }
}

/// `sup` of the objective over the box `center +- half` against one lattice
/// point: coordinate-wise interval extremes.
fn cell_sup_bound(
    obj: Objective,
    sig: Signature,
    center: &[Real],
    half: &[Real],
    lambda: &Vector,
    prec: &Precision,
) -> Real {
    let lam = lambda.chart();
    let maxabs =
        |i: usize| -> Real { (&center[i] - &lam[i]).abs() + &half[i] };
    match obj {
        Objective::Dist2 => {
            let mut acc = prec.zero();
            for i in 0..center.len() {
                acc += maxabs(i).square();
            }
            acc
        }
        Objective::NormForm => {
            let mut acc = prec.one();
            for i in 0..sig.r() {
                acc = &acc * &maxabs(i);
            }
            for j in 0..sig.s() {
                let x = maxabs(sig.r() + 2 * j);
                let y = maxabs(sig.r() + 2 * j + 1);
                acc = &acc * &(x.square() + y.square());
            }
            acc
        }
    }
}

struct BnbOutcome {
    lower: Real,
    upper: Real,
    witness: Option<Vector>,
    effort: Effort,
    status: EstimateStatus,
    lower_exact: bool,
}

/// Shared branch-and-bound core over the reference box.
fn branch_and_bound(
    lattice: &Lattice,
    obj: Objective,
    cfg: &BnbConfig,
) -> Result<BnbOutcome> {
    let prec = lattice.precision().clone();
    let sig = lattice.signature();
    let n = lattice.dim();
    let searcher = CloseVectorSearcher::new(lattice)?;
    let red_basis = searcher.red.lattice.basis().to_vec();

    // reference box: bounding box of the fundamental parallelepiped of the
    // reduced basis, optionally translated by a lattice vector
    let mut center = vec![prec.zero(); n];
    let mut half = vec![prec.zero(); n];
    let two = prec.real(2);
    for b in &red_basis {
        for (i, c) in b.chart().iter().enumerate() {
            center[i] += &(c / &two);
            half[i] += &(c.abs() / &two);
        }
    }
    if let Some(origin) = &cfg.origin {
        for (i, c) in origin.chart().iter().enumerate() {
            center[i] += c;
        }
    }

    let mut effort = Effort::default();
    let stop_eps = prec.exp2(-30);

    let evaluate = |center: &[Real],
                    half: &[Real],
                    inherit: Option<&Vec<Integer>>,
                    effort: &mut Effort|
     -> Result<(Real, Vec<Integer>, Real, bool)> {
        let v = Vector::from_chart(sig, center.to_vec())?;
        // sample at the center: certified for Dist2 and signature (0,1)
        let (sample, sample_exact, seed_lambda, nodes) = match obj {
            Objective::Dist2 => {
                let (c, d2, nodes) = searcher.closest(&v, cfg.enum_budget)?;
                (d2, true, c, nodes)
            }
            Objective::NormForm => {
                let lm = searcher.local_norm_min(&v, cfg.growth, cfg.enum_budget)?;
                (lm.value, lm.exact, lm.lambda, lm.nodes)
            }
        };
        effort.enum_nodes += nodes;
        // candidate set: the seed, the inherited parent's best, and
        // everything within the Babai residual scaled by growth plus the
        // cell radius
        let mut cand: Vec<Vec<Integer>> = vec![seed_lambda.clone()];
        if let Some(p) = inherit {
            if *p != seed_lambda {
                cand.push(p.clone());
            }
        }
        let mut diam2 = prec.zero();
        for h in half {
            diam2 += h.square();
        }
        let (_, residual) = searcher.frame.reduce(&v);
        let radius = residual.norm2().sqrt() * prec.real(cfg.growth) + diam2.sqrt();
        let (near, nodes) = searcher.enumerate_within(&v, &radius, cfg.enum_budget)?;
        effort.enum_nodes += nodes;
        for (c, _) in near.into_iter().take(MAX_CANDIDATES) {
            if !cand.contains(&c) {
                cand.push(c);
            }
        }
        let mut best_bound: Option<(Real, Vec<Integer>)> = None;
        for c in cand {
            let lam = lattice.vector_from_coords(&c)?;
            let b = cell_sup_bound(obj, sig, center, half, &lam, &prec);
            let better = match &best_bound {
                None => true,
                Some((bb, _)) => b.cmp_total(bb) == Ordering::Less,
            };
            if better {
                best_bound = Some((b, c));
            }
        }
        let (ub, blam) = best_bound.expect("candidate set is nonempty");
        Ok((ub, blam, sample, sample_exact))
    };

    // root cell
    let mut cells: Vec<Cell> = Vec::new();
    let mut heap: BinaryHeap<HeapEntry> = BinaryHeap::new();
    let mut retired_max = prec.zero();
    let mut seq = 0u64;
    let (mut lower, mut witness) = {
        let (ub, blam, sample, _exact) = evaluate(&center, &half, None, &mut effort)?;
        effort.cells += 1;
        let witness = Some(Vector::from_chart(sig, center.clone())?);
        heap.push(HeapEntry { upper: ub.clone(), seq, idx: 0 });
        cells.push(Cell { center, half, upper: ub, best_lambda: blam, seq });
        seq += 1;
        (sample, witness)
    };
    let mut lower_set = true;

    let status = loop {
        let global_upper = match heap.peek() {
            Some(top) => top.upper.max(&retired_max),
            None => retired_max.clone(),
        };
        if let Some(thr) = &cfg.stop_below {
            if global_upper <= *thr {
                break EstimateStatus::ThresholdReached;
            }
        }
        if lower_set {
            let gap = &global_upper - &lower;
            if gap <= prec.real(cfg.rel_tol) * &global_upper {
                break EstimateStatus::Converged;
            }
        }
        if effort.cells >= cfg.max_cells {
            break EstimateStatus::BudgetExhausted;
        }
        if heap.is_empty() {
            break EstimateStatus::Converged;
        }

        // pop a fixed-size round of worst cells
        let mut batch: Vec<usize> = Vec::with_capacity(ROUND_SIZE);
        while batch.len() < ROUND_SIZE {
            match heap.pop() {
                Some(e) => {
                    // retire cells that cannot contain the supremum
                    if lower_set && e.upper <= &lower * &(prec.one() - &stop_eps) {
                        retired_max = retired_max.max(&e.upper);
                        continue;
                    }
                    batch.push(e.idx);
                }
                None => break,
            }
        }
        if batch.is_empty() {
            continue;
        }

        // split each popped cell along its widest coordinate and evaluate
        // children in parallel; the merge below is in batch order, so the
        // result does not depend on the scheduling
        type ChildData = (Vec<Real>, Vec<Real>, Real, Vec<Integer>, Real, bool);
        let children: Vec<Result<(Vec<ChildData>, Effort)>> = batch
            .par_iter()
            .map(|&idx| {
                let cell = &cells[idx];
                let mut wide = 0;
                for i in 1..n {
                    if cell.half[i] > cell.half[wide] {
                        wide = i;
                    }
                }
                let mut out = Vec::with_capacity(2);
                let mut local_effort = Effort::default();
                for side in 0..2 {
                    let mut c = cell.center.clone();
                    let mut h = cell.half.clone();
                    h[wide] = &cell.half[wide] / &two;
                    c[wide] = if side == 0 {
                        &cell.center[wide] - &h[wide]
                    } else {
                        &cell.center[wide] + &h[wide]
                    };
                    let (ub, blam, sample, sexact) =
                        evaluate(&c, &h, Some(&cell.best_lambda), &mut local_effort)?;
                    // monotone: the child bound cannot exceed the parent's
                    debug_assert!(
                        ub <= &cell.upper * &(prec.one() + prec.exp2(-40)),
                        "cell bound must not increase under subdivision"
                    );
                    out.push((c, h, ub, blam, sample, sexact));
                }
                Ok((out, local_effort))
            })
            .collect();

        for kids in children {
            let (kids, local_effort) = kids?;
            effort.enum_nodes += local_effort.enum_nodes;
            for (c, h, ub, blam, sample, _sexact) in kids {
                effort.cells += 1;
                if !lower_set || sample > lower {
                    lower = sample.clone();
                    lower_set = true;
                    witness = Some(Vector::from_chart(sig, c.clone())?);
                }
                heap.push(HeapEntry { upper: ub.clone(), seq, idx: cells.len() });
                cells.push(Cell { center: c, half: h, upper: ub, best_lambda: blam, seq });
                seq += 1;
            }
        }
    };

    let global_upper = match heap.peek() {
        Some(top) => top.upper.max(&retired_max),
        None => retired_max.clone(),
    };
    let lower_exact = match obj {
        Objective::Dist2 => true,
        Objective::NormForm => sig.r() == 0 && sig.s() == 1,
    };
    Ok(BnbOutcome { lower, upper: global_upper, witness, effort, status, lower_exact })
}

/// Certified upper bound and heuristic lower estimate for the inhomogeneous
/// minimum `M(Lambda) = sup_v inf_lambda N(v - lambda)`. In signature (0,1)
/// both sides certify. Budget exhaustion is reported in the status, not as
/// an error.
pub fn inhomogeneous_minimum(lattice: &Lattice, cfg: &BnbConfig) -> Result<MinimumEstimate> {
    let out = branch_and_bound(lattice, Objective::NormForm, cfg)?;
    Ok(MinimumEstimate {
        lower: out.lower,
        upper: out.upper,
        lower_certified: out.lower_exact,
        upper_certified: true,
        witness: out.witness,
        effort: out.effort,
        status: out.status,
    })
}

/// Certified two-sided bounds on the covering radius
/// `rho(Lambda) = sup_v dist(v, Lambda)`; the inner problem is exact closest
/// vector, so both sides certify.
pub fn covering_radius(lattice: &Lattice, cfg: &BnbConfig) -> Result<MinimumEstimate> {
    let out = branch_and_bound(lattice, Objective::Dist2, cfg)?;
    Ok(MinimumEstimate {
        lower: out.lower.sqrt(),
        upper: out.upper.sqrt(),
        lower_certified: true,
        upper_certified: true,
        witness: out.witness,
        effort: out.effort,
        status: out.status,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reduction::successive_minima;
    use crate::space::{lattice_from_integer_cols, standard_lattice};

    fn p() -> Precision {
        Precision::default()
    }

    fn zvec(v: &[i64]) -> Vec<Integer> {
        v.iter().map(|&x| Integer::from(x)).collect()
    }

    fn gaussian_lattice() -> Lattice {
        let sig = Signature::new(0, 1).unwrap();
        lattice_from_integer_cols(sig, &[vec![1, 0], vec![0, 1]], &p()).unwrap()
    }

    fn eisenstein_lattice() -> Lattice {
        let sig = Signature::new(0, 1).unwrap();
        let half = p().real(1) / p().real(2);
        let s3 = p().real(3).sqrt() / p().real(2);
        let b1 = Vector::from_chart(sig, vec![p().one(), p().zero()]).unwrap();
        let b2 = Vector::from_chart(sig, vec![half, s3]).unwrap();
        Lattice::from_basis(sig, vec![b1, b2], &p()).unwrap()
    }

    fn sqrt2_lattice() -> Lattice {
        let sig = Signature::new(2, 0).unwrap();
        let r2 = p().real(2).sqrt();
        let b1 = Vector::from_chart(sig, vec![p().one(), p().one()]).unwrap();
        let b2 = Vector::from_chart(sig, vec![r2.clone(), -&r2]).unwrap();
        Lattice::from_basis(sig, vec![b1, b2], &p()).unwrap()
    }

    #[test]
    fn babai_on_lattice_point_is_exact() {
        let l = standard_lattice(2, &p()).unwrap();
        let prof = successive_minima(&l, 1_000_000).unwrap();
        let v = l.vector_from_coords(&zvec(&[3, -2])).unwrap();
        let (coords, res) = babai_reduce(&l, &prof.witnesses, &v).unwrap();
        assert_eq!(coords, zvec(&[3, -2]));
        assert!(res.norm2() < p().exp2(-100));
    }

    #[test]
    fn babai_deep_hole_of_z2() {
        let l = standard_lattice(2, &p()).unwrap();
        let prof = successive_minima(&l, 1_000_000).unwrap();
        let half = p().real(1) / p().real(2);
        let v = Vector::from_chart(l.signature(), vec![half.clone(), half]).unwrap();
        let (_, res) = babai_reduce(&l, &prof.witnesses, &v).unwrap();
        let want = p().real(2).sqrt() / p().real(2);
        assert!(res.norm().rel_close(&want, p().tol()));
        // equal to the lemma bound sqrt(n)/2 * mu_n
        let frame = BabaiFrame::from_witnesses(&l, &prof.witnesses).unwrap();
        assert!(frame.residual_bound().rel_close(&want, p().tol()));
    }

    #[test]
    fn babai_respects_lemma_bound_on_sqrt2_lattice() {
        let l = sqrt2_lattice();
        let prof = successive_minima(&l, 1_000_000).unwrap();
        let frame = BabaiFrame::from_witnesses(&l, &prof.witnesses).unwrap();
        let bound = frame.residual_bound();
        // bound is sqrt(2)/2 * mu_2 = sqrt 2
        assert!(bound.rel_close(&p().real(2).sqrt(), p().tol()));
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let v = Vector::from_chart(
                l.signature(),
                (0..2).map(|_| p().real(rng.gen_range(-5.0..5.0))).collect(),
            )
            .unwrap();
            let (_, res) = frame.reduce(&v);
            assert!(res.norm() <= &bound * &(p().one() + p().tol()));
        }
    }

    #[test]
    fn local_norm_minimum_examples() {
        // Gaussian lattice, deep hole: exact value 1/2
        let l = gaussian_lattice();
        let s = CloseVectorSearcher::new(&l).unwrap();
        let half = p().real(1) / p().real(2);
        let v = Vector::from_chart(l.signature(), vec![half.clone(), half.clone()]).unwrap();
        let lm = s.local_norm_min(&v, 2.0, 1_000_000).unwrap();
        assert!(lm.exact);
        assert!(lm.value.rel_close(&half, p().tol()));

        // v = 0 gives 0
        let lm = s.local_norm_min(&Vector::zero(l.signature(), &p()), 2.0, 1_000_000).unwrap();
        assert!(lm.value.is_zero());

        // Z^2 at (1/2, 1/2): min |v1-a||v2-b| = 1/4
        let l = standard_lattice(2, &p()).unwrap();
        let s = CloseVectorSearcher::new(&l).unwrap();
        let half = p().real(1) / p().real(2);
        let v = Vector::from_chart(l.signature(), vec![half.clone(), half]).unwrap();
        let lm = s.local_norm_min(&v, 2.0, 1_000_000).unwrap();
        assert!(!lm.exact);
        assert!(lm.value.rel_close(&(p().real(1) / p().real(4)), p().tol()));
    }

    #[test]
    fn homogeneous_search_on_z2_finds_zero() {
        let l = standard_lattice(2, &p()).unwrap();
        let est = homogeneous_minimum(
            &l,
            HomogeneousMode::Search { radius: p().real(3), enum_budget: 1_000_000 },
        )
        .unwrap();
        assert!(est.upper.is_zero());
        assert!(est.upper_certified && !est.lower_certified);
        // attained at an axis vector
        let w = est.witness.unwrap();
        assert!(w.norm_form().is_zero());
    }

    #[test]
    fn homogeneous_search_on_sqrt2_lattice() {
        let l = sqrt2_lattice();
        let est = homogeneous_minimum(
            &l,
            HomogeneousMode::Search { radius: p().real(3), enum_budget: 1_000_000 },
        )
        .unwrap();
        assert!(est.upper.rel_close(&p().one(), p().tol()));
    }

    #[test]
    fn gaussian_inhomogeneous_minimum_is_half() {
        let l = gaussian_lattice();
        let cfg = BnbConfig { rel_tol: 1e-9, ..Default::default() };
        let est = inhomogeneous_minimum(&l, &cfg).unwrap();
        assert_eq!(est.status, EstimateStatus::Converged);
        assert!(est.lower_certified && est.upper_certified);
        let half = p().real(1) / p().real(2);
        assert!((est.upper - &half).abs() < p().real(1e-9));
        assert!((&half - &est.lower).abs() < p().real(1e-9));
    }

    #[test]
    fn eisenstein_inhomogeneous_minimum_is_third() {
        let l = eisenstein_lattice();
        let cfg = BnbConfig { rel_tol: 1e-9, ..Default::default() };
        let est = inhomogeneous_minimum(&l, &cfg).unwrap();
        let third = p().real(1) / p().real(3);
        assert!(est.lower_certified && est.upper_certified);
        assert!((est.upper - &third).abs() < p().real(1e-9));
        assert!((&third - &est.lower).abs() < p().real(1e-9));
    }

    #[test]
    fn z2_deep_hole_value() {
        let l = standard_lattice(2, &p()).unwrap();
        let cfg = BnbConfig { rel_tol: 1e-4, ..Default::default() };
        let est = inhomogeneous_minimum(&l, &cfg).unwrap();
        let quarter = p().real(1) / p().real(4);
        assert!(est.upper <= &quarter * &p().real(1.001));
        assert!(est.lower >= &quarter * &p().real(0.999));
        assert!(!est.lower_certified); // signature (2,0): heuristic side
    }

    #[test]
    fn covering_radii() {
        for (l, want) in [
            (standard_lattice(2, &p()).unwrap(), p().real(2).sqrt() / p().real(2)),
            (gaussian_lattice(), p().real(2).sqrt() / p().real(2)),
            (eisenstein_lattice(), p().real(3).sqrt().recip()),
        ] {
            let cfg = BnbConfig { rel_tol: 1e-6, ..Default::default() };
            let est = covering_radius(&l, &cfg).unwrap();
            assert!(est.lower_certified && est.upper_certified);
            assert!((est.upper.clone() - &want).abs() < p().real(2e-6));
            assert!((want - &est.lower).abs() < p().real(2e-6));
        }
    }

    #[test]
    fn translation_invariance_of_estimator() {
        let l = eisenstein_lattice();
        let cfg = BnbConfig { rel_tol: 1e-6, ..Default::default() };
        let base = inhomogeneous_minimum(&l, &cfg).unwrap();
        let shift = l.vector_from_coords(&zvec(&[2, -1])).unwrap();
        let cfg2 = BnbConfig { origin: Some(shift), ..cfg };
        let shifted = inhomogeneous_minimum(&l, &cfg2).unwrap();
        assert!(base.upper.rel_close(&shifted.upper, &p().real(1e-5)));
    }

    #[test]
    fn budget_exhaustion_is_a_status_not_an_error() {
        let l = eisenstein_lattice();
        let cfg = BnbConfig { rel_tol: 1e-12, max_cells: 8, ..Default::default() };
        let est = inhomogeneous_minimum(&l, &cfg).unwrap();
        assert_eq!(est.status, EstimateStatus::BudgetExhausted);
        assert!(est.lower <= est.upper);
        // the interval is still valid around the true value 1/3
        let third = p().real(1) / p().real(3);
        assert!(est.lower <= third.clone() && third <= est.upper);
    }

    #[test]
    fn early_stop_threshold() {
        let l = standard_lattice(2, &p()).unwrap();
        let cfg = BnbConfig { stop_below: Some(p().real(10)), ..Default::default() };
        let est = inhomogeneous_minimum(&l, &cfg).unwrap();
        assert_eq!(est.status, EstimateStatus::ThresholdReached);
        assert!(est.upper <= p().real(10));
    }

    #[test]
    fn rational_field_lattice() {
        // n = 1: M(Z) = 1/2 through the same machinery
        let l = standard_lattice(1, &p()).unwrap();
        let cfg = BnbConfig { rel_tol: 1e-9, ..Default::default() };
        let est = inhomogeneous_minimum(&l, &cfg).unwrap();
        let half = p().real(1) / p().real(2);
        assert!((est.upper - &half).abs() < p().real(1e-8));
    }
}
