//! Parallel transport of the Knizhnik–Zamolodchikov connection in the
//! truncated word algebra.
//!
//! The transported element solves `W′(t) = A(t)·W(t)`, `W(0) = 1`, where
//! `A(t) = (1/2πi) Σ_{i<j} (ż_i − ż_j)/(z_i − z_j) · H_{ij}` acts by
//! appending the strand pair `{i, j}` on top of every word. The action is
//! strictly degree-raising, so the system is block-triangular: degree `m`
//! is driven by degree `m−1` and the unit coefficient stays exactly 1.
//!
//! Integration runs slice by slice (the coefficients are smooth away from
//! crossings, which the geometry never produces) with an embedded
//! Dormand–Prince 5(4) pair under a local tolerance. The reported
//! per-degree global error is the ∞-norm difference against a rerun with
//! every accepted step halved; the halved-step solution is the returned
//! value.

use crate::braid::BraidWord;
use crate::exact::ratio;
use crate::geometry::{BraidGeometry, GeometryError, Slice};
use crate::horiz::{BraidElement, HorizontalDiagram};
use crate::scalar::{Complex, Rational};
use num::BigInt;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum TransportError {
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error("step size underflow in slice {slice} near local time {time}")]
    StepUnderflow { slice: usize, time: f64 },
}

/// Result of a numeric transport.
#[derive(Debug, Clone)]
pub struct TransportResult {
    /// The transported element (halved-step solution).
    pub value: BraidElement<Complex>,
    /// Per-degree ∞-norm error estimates from step doubling.
    pub degree_errors: Vec<f64>,
    /// Accepted steps across all slices (adaptive pass).
    pub steps: usize,
    /// Rejected steps across all slices (adaptive pass).
    pub rejected_steps: usize,
}

/// Indexing of words of length ≤ N over the strand pairs of an n-strand
/// braid, densely packed level by level.
struct WordTable {
    strand_count: usize,
    truncation: usize,
    pairs: Vec<(usize, usize)>,
    /// offsets[k] = index of the first length-k word; offsets[N+1] = total.
    offsets: Vec<usize>,
}

impl WordTable {
    fn new(strand_count: usize, truncation: usize) -> Self {
        let mut pairs = Vec::new();
        for i in 0..strand_count {
            for j in (i + 1)..strand_count {
                pairs.push((i, j));
            }
        }
        let p = pairs.len().max(1);
        let mut offsets = Vec::with_capacity(truncation + 2);
        let mut acc = 0usize;
        let mut level = 1usize;
        for _ in 0..=truncation {
            offsets.push(acc);
            acc += level;
            level *= p;
        }
        offsets.push(acc);
        Self {
            strand_count,
            truncation,
            pairs,
            offsets,
        }
    }

    fn dim(&self) -> usize {
        *self.offsets.last().unwrap()
    }

    fn pair_index(&self, a: usize, b: usize) -> usize {
        let (a, b) = (a.min(b), a.max(b));
        // pairs are lex-ordered; dense lookup is fine at these sizes
        self.pairs
            .iter()
            .position(|&p| p == (a, b))
            .expect("valid strand pair")
    }

    fn word_at(&self, index: usize) -> HorizontalDiagram {
        let level = self
            .offsets
            .windows(2)
            .position(|w| index >= w[0] && index < w[1])
            .expect("index in range");
        let mut local = index - self.offsets[level];
        let p = self.pairs.len().max(1);
        let mut digits = vec![0usize; level];
        for d in (0..level).rev() {
            digits[d] = local % p;
            local /= p;
        }
        HorizontalDiagram::from_pairs(digits.into_iter().map(|q| self.pairs[q]).collect())
    }
}

/// The connection coefficient for one strand pair at global time `t`:
/// `(1/2πi)·(ż_i − ż_j)/(z_i − z_j)` with the slice's analytic one-sided
/// derivatives (boundaries resolve toward the lower slice).
pub fn kz_coefficient(geometry: &BraidGeometry, t: f64, i: usize, j: usize) -> Complex {
    assert!(i != j, "strand pair must be distinct");
    let n = geometry.strand_count();
    assert!(i < n && j < n, "strand index out of range");
    let (slice, s) = geometry.slice_at(t);
    let span = slice.t1 - slice.t0;
    pair_coefficient_local(slice, s, i, j) / span
}

fn pair_coefficient_local(slice: &Slice, s: f64, i: usize, j: usize) -> Complex {
    let zi = slice.strand_position(i, s);
    let zj = slice.strand_position(j, s);
    let vi = slice.strand_velocity(i, s);
    let vj = slice.strand_velocity(j, s);
    let two_pi_i = Complex::new(0.0, 2.0 * std::f64::consts::PI);
    (vi - vj) / (zi - zj) / two_pi_i
}

/// Transport with explicit endpoints.
pub fn transport(
    braid: &BraidWord,
    endpoints: &[f64],
    truncation: usize,
    tol: f64,
) -> Result<TransportResult, TransportError> {
    assert!(tol > 0.0, "tolerance must be positive");
    let geometry = BraidGeometry::realize(braid, endpoints)?;
    transport_geometry(&geometry, truncation, tol)
}

/// Transport with the default endpoints `x_i = i`.
pub fn transport_default(
    braid: &BraidWord,
    truncation: usize,
    tol: f64,
) -> Result<TransportResult, TransportError> {
    let endpoints: Vec<f64> = (1..=braid.strand_count()).map(|i| i as f64).collect();
    transport(braid, &endpoints, truncation, tol)
}

/// Transport along an already-realized geometry.
pub fn transport_geometry(
    geometry: &BraidGeometry,
    truncation: usize,
    tol: f64,
) -> Result<TransportResult, TransportError> {
    let table = WordTable::new(geometry.strand_count(), truncation);
    let mut state = vec![Complex::new(0.0, 0.0); table.dim()];
    state[0] = Complex::new(1.0, 0.0);

    let mut steps = 0usize;
    let mut rejected = 0usize;
    let mut accepted_steps: Vec<Vec<f64>> = Vec::with_capacity(geometry.slices().len());
    for (slice_index, slice) in geometry.slices().iter().enumerate() {
        let plan = integrate_slice(&table, slice, &mut state, tol).map_err(|time| {
            TransportError::StepUnderflow {
                slice: slice_index,
                time,
            }
        })?;
        steps += plan.accepted.len();
        rejected += plan.rejected;
        accepted_steps.push(plan.accepted);
    }

    // step-doubling pass: replay every accepted step as two half steps
    let mut refined = vec![Complex::new(0.0, 0.0); table.dim()];
    refined[0] = Complex::new(1.0, 0.0);
    let mut scratch = RkScratch::new(table.dim());
    for (slice, plan) in geometry.slices().iter().zip(&accepted_steps) {
        let mut s = 0.0f64;
        for &h in plan {
            rk_step_core(&table, slice, &mut refined, s, 0.5 * h, &mut scratch);
            rk_step_core(&table, slice, &mut refined, s + 0.5 * h, 0.5 * h, &mut scratch);
            s += h;
        }
    }

    let mut degree_errors = vec![0.0f64; truncation + 1];
    let mut degree_scale = vec![0.0f64; truncation + 1];
    for level in 0..=truncation {
        for idx in table.offsets[level]..table.offsets[level + 1] {
            degree_errors[level] = degree_errors[level].max((state[idx] - refined[idx]).norm());
            degree_scale[level] = degree_scale[level].max(refined[idx].norm());
        }
    }
    for (level, err) in degree_errors.iter_mut().enumerate() {
        if level > 0 {
            // keep the estimate honest when both runs agree to rounding
            let floor = 16.0 * f64::EPSILON * (1.0 + degree_scale[level]);
            *err = err.max(floor);
        }
    }

    let mut value = BraidElement::zero(geometry.strand_count(), truncation);
    for (idx, c) in refined.iter().enumerate() {
        if c.re != 0.0 || c.im != 0.0 {
            value.add_term(table.word_at(idx), *c);
        }
    }
    Ok(TransportResult {
        value,
        degree_errors,
        steps,
        rejected_steps: rejected,
    })
}

struct SlicePlan {
    accepted: Vec<f64>,
    rejected: usize,
}

/// Nonzero connection coefficients of a slice at local time `s`, indexed by
/// strand pair.
fn slice_coefficients(table: &WordTable, slice: &Slice, s: f64) -> Vec<(usize, Complex)> {
    let n = table.strand_count;
    let mut out = Vec::new();
    for u in 0..n {
        for v in (u + 1)..n {
            let i = slice.slot_to_strand[u];
            let j = slice.slot_to_strand[v];
            let c = pair_coefficient_local_slots(slice, s, u, v);
            if c.re != 0.0 || c.im != 0.0 {
                out.push((table.pair_index(i, j), c));
            }
        }
    }
    out
}

fn pair_coefficient_local_slots(slice: &Slice, s: f64, u: usize, v: usize) -> Complex {
    let zu = slice.curves[u].at(s);
    let zv = slice.curves[v].at(s);
    let vu = slice.curves[u].velocity(s);
    let vv = slice.curves[v].velocity(s);
    let two_pi_i = Complex::new(0.0, 2.0 * std::f64::consts::PI);
    (vu - vv) / (zu - zv) / two_pi_i
}

/// `out = A(s)·state`: append each active pair to every word one level
/// down.
fn apply_connection(table: &WordTable, slice: &Slice, s: f64, state: &[Complex], out: &mut [Complex]) {
    for x in out.iter_mut() {
        *x = Complex::new(0.0, 0.0);
    }
    let coeffs = slice_coefficients(table, slice, s);
    if coeffs.is_empty() {
        return;
    }
    let p = table.pairs.len().max(1);
    for level in 0..table.truncation {
        let base = table.offsets[level];
        let child_base = table.offsets[level + 1];
        for idx in base..table.offsets[level + 1] {
            let val = state[idx];
            if val.re == 0.0 && val.im == 0.0 {
                continue;
            }
            let local = idx - base;
            for &(q, c) in &coeffs {
                out[child_base + local * p + q] += c * val;
            }
        }
    }
}

// Dormand–Prince 5(4) tableau
const A: [[f64; 6]; 6] = [
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
const C: [f64; 6] = [1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const ERR: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

struct RkScratch {
    k: Vec<Vec<Complex>>,
    stage: Vec<Complex>,
}

impl RkScratch {
    fn new(dim: usize) -> Self {
        Self {
            k: (0..7).map(|_| vec![Complex::new(0.0, 0.0); dim]).collect(),
            stage: vec![Complex::new(0.0, 0.0); dim],
        }
    }
}

/// One 5th-order step from local time `s` with size `h`. Returns the error
/// estimate vector in `scratch.k[6]`'s combination; the state is advanced
/// in place and the embedded error is returned.
fn rk_step_core(
    table: &WordTable,
    slice: &Slice,
    state: &mut [Complex],
    s: f64,
    h: f64,
    scratch: &mut RkScratch,
) -> Vec<Complex> {
    let dim = state.len();
    let (k, stage) = (&mut scratch.k, &mut scratch.stage);
    apply_connection(table, slice, s, state, &mut k[0]);
    for i in 0..6 {
        for d in 0..dim {
            let mut acc = state[d];
            for (j, kj) in k.iter().enumerate().take(i + 1) {
                let a = A[i][j];
                if a != 0.0 {
                    acc += kj[d] * (a * h);
                }
            }
            stage[d] = acc;
        }
        apply_connection(table, slice, s + C[i] * h, stage, &mut k[i + 1]);
    }
    // 5th-order solution uses row A[5] (the b coefficients); k[6] is the
    // derivative at the endpoint and feeds only the error estimate.
    let mut err = vec![Complex::new(0.0, 0.0); dim];
    for d in 0..dim {
        let mut acc = state[d];
        for j in 0..6 {
            let b = A[5][j];
            if b != 0.0 {
                acc += k[j][d] * (b * h);
            }
        }
        let mut e = Complex::new(0.0, 0.0);
        for (j, kj) in k.iter().enumerate() {
            if ERR[j] != 0.0 {
                e += kj[d] * (ERR[j] * h);
            }
        }
        state[d] = acc;
        err[d] = e;
    }
    err
}

fn integrate_slice(
    table: &WordTable,
    slice: &Slice,
    state: &mut [Complex],
    tol: f64,
) -> Result<SlicePlan, f64> {
    let mut scratch = RkScratch::new(state.len());
    let mut accepted = Vec::new();
    let mut rejected = 0usize;
    let mut s = 0.0f64;
    let mut h = 0.1f64;
    const MIN_STEP: f64 = 1e-13;
    while s < 1.0 {
        h = h.min(1.0 - s);
        if h < MIN_STEP {
            return Err(s);
        }
        let saved = state.to_vec();
        let err = rk_step_core(table, slice, state, s, h, &mut scratch);
        let mut norm = 0.0f64;
        for d in 0..state.len() {
            let scale = tol + tol * saved[d].norm().max(state[d].norm());
            norm = norm.max(err[d].norm() / scale);
        }
        if norm <= 1.0 {
            accepted.push(h);
            s += h;
            let grow = if norm == 0.0 {
                5.0
            } else {
                (0.9 * norm.powf(-0.2)).clamp(0.2, 5.0)
            };
            h *= grow;
        } else {
            state.copy_from_slice(&saved);
            rejected += 1;
            h *= (0.9 * norm.powf(-0.2)).clamp(0.1, 0.9);
        }
    }
    Ok(SlicePlan { accepted, rejected })
}

/// Exact transport of `σ₁^k` on two strands: the single crossing pair has
/// constant connection coefficient `k/2`, so the transport is
/// `Σ_m (k/2)^m/m! · ({1,2})^m` with rational coefficients.
pub fn closed_form_power(k: i64, truncation: usize) -> BraidElement<Rational> {
    let mut e = BraidElement::zero(2, truncation);
    let mut coeff = Rational::from(BigInt::from(1));
    e.add_term(HorizontalDiagram::unit(), coeff.clone());
    let step = ratio(k, 2);
    for m in 1..=truncation {
        coeff = &coeff * &step / Rational::from(BigInt::from(m as i64));
        e.add_term(
            HorizontalDiagram::from_pairs(vec![(0, 1); m]),
            coeff.clone(),
        );
    }
    e
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::braid::BraidWord;
    use crate::scalar::rational_to_complex;

    fn power_word(m: usize) -> HorizontalDiagram {
        HorizontalDiagram::from_pairs(vec![(0, 1); m])
    }

    #[test]
    fn trivial_braid_transports_to_unit() {
        let r = transport_default(&BraidWord::trivial(3), 3, 1e-10).unwrap();
        assert_eq!(r.value, BraidElement::unit(3, 3));
        assert!(r.degree_errors.iter().all(|&e| e < 1e-12));
    }

    #[test]
    fn unit_coefficient_is_exactly_one() {
        let b = BraidWord::parse("1 -2 1", 3).unwrap();
        let r = transport_default(&b, 3, 1e-8).unwrap();
        let unit = r.value.coefficient(&HorizontalDiagram::unit());
        assert_eq!(unit, Complex::new(1.0, 0.0));
        assert_eq!(r.degree_errors[0], 0.0);
    }

    #[test]
    fn sigma1_matches_exponential_series() {
        let b = BraidWord::parse("1", 2).unwrap();
        let r = transport_default(&b, 3, 1e-10).unwrap();
        for m in 0..=3 {
            let expect = rational_to_complex(
                &closed_form_power(1, 3).coefficient(&power_word(m)),
            );
            let got = r.value.coefficient(&power_word(m));
            assert!(
                (got - expect).norm() < 1e-8,
                "degree {m}: {got} vs {expect}"
            );
        }
    }

    #[test]
    fn sigma1_inverse_flips_signs() {
        let b = BraidWord::parse("-1", 2).unwrap();
        let r = transport_default(&b, 2, 1e-10).unwrap();
        for m in 0..=2 {
            let expect = rational_to_complex(
                &closed_form_power(-1, 2).coefficient(&power_word(m)),
            );
            assert!((r.value.coefficient(&power_word(m)) - expect).norm() < 1e-8);
        }
    }

    #[test]
    fn numeric_transport_matches_closed_form_for_powers() {
        for k in -3i64..=3 {
            let b = BraidWord::sigma1_power(k);
            let r = transport_default(&b, 4, 1e-10).unwrap();
            let exact = closed_form_power(k, 4);
            for m in 0..=4 {
                let diff = (r.value.coefficient(&power_word(m))
                    - rational_to_complex(&exact.coefficient(&power_word(m))))
                .norm();
                assert!(diff < 1e-8, "k={k} m={m}: |Δ|={diff:.2e}");
            }
        }
    }

    #[test]
    fn closed_form_power_examples() {
        assert_eq!(
            closed_form_power(3, 3).coefficient(&power_word(3)),
            ratio(9, 16),
            "(3/2)³/3! = 9/16"
        );
        assert_eq!(
            closed_form_power(1, 2).coefficient(&power_word(2)),
            ratio(1, 8)
        );
        assert_eq!(closed_form_power(0, 3), BraidElement::unit(2, 3));
    }

    #[test]
    fn kz_coefficient_constant_pairs_vanish_movers_do_not() {
        let trivial = BraidGeometry::realize_default(&BraidWord::trivial(2)).unwrap();
        assert_eq!(kz_coefficient(&trivial, 0.5, 0, 1), Complex::new(0.0, 0.0));

        let b = BraidWord::parse("1", 3).unwrap();
        let g = BraidGeometry::realize_default(&b).unwrap();
        for t in [0.1, 0.5, 0.9] {
            // strand 2 never moves, but the pair (0,2) still sees strand
            // 0's motion
            assert!(kz_coefficient(&g, t, 0, 2).norm() > 0.0);
        }
    }

    #[test]
    fn kz_coefficient_integrates_to_half_over_a_crossing() {
        let b = BraidWord::parse("1", 2).unwrap();
        let g = BraidGeometry::realize_default(&b).unwrap();
        // Simpson quadrature of the global-time coefficient
        let n = 200;
        let mut acc = Complex::new(0.0, 0.0);
        for i in 0..n {
            let t0 = i as f64 / n as f64;
            let t1 = (i + 1) as f64 / n as f64;
            let tm = 0.5 * (t0 + t1);
            acc += (kz_coefficient(&g, t0, 0, 1)
                + kz_coefficient(&g, tm, 0, 1) * 4.0
                + kz_coefficient(&g, t1, 0, 1))
                * ((t1 - t0) / 6.0);
        }
        assert!((acc - Complex::new(0.5, 0.0)).norm() < 1e-10);
    }

    #[test]
    fn truncation_coherence() {
        let b = BraidWord::parse("1 2 1", 3).unwrap();
        let high = transport_default(&b, 3, 1e-10).unwrap();
        let low = transport_default(&b, 2, 1e-10).unwrap();
        for (w, c) in low.value.terms() {
            let other = high.value.coefficient(w);
            let bound = high.degree_errors[w.degree()] + low.degree_errors[w.degree()];
            assert!(
                (*c - other).norm() <= bound.max(1e-9),
                "word {w}: truncated transport must agree"
            );
        }
    }

    #[test]
    fn transport_reports_statistics() {
        let b = BraidWord::parse("1 1 1", 2).unwrap();
        let r = transport_default(&b, 3, 1e-10).unwrap();
        assert!(r.steps >= 3, "at least one step per slice");
        assert!(r.degree_errors.iter().all(|&e| e >= 0.0));
    }
}
