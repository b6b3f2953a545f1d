//! Geometric realization of a braid word as paths of `n` distinct points in
//! the complex plane.
//!
//! The `k`-th letter occupies the time slice `[(k−1)/L, k/L]`. Inside a
//! slice the two crossing strands traverse opposite halves of the circle
//! centred at their midpoint, so their relative vector rotates by `π`
//! (anticlockwise for a positive crossing, clockwise for a negative one);
//! all other strands stand still. At every slice boundary the strands sit
//! at the endpoint x-coordinates, permuted.

use crate::braid::BraidWord;
use crate::scalar::Complex;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum GeometryError {
    #[error("endpoints must all be positive, got {0}")]
    NonPositiveEndpoint(f64),
    #[error("endpoints must be strictly increasing")]
    NotIncreasing,
    #[error("expected {expected} endpoints for this braid, got {got}")]
    LengthMismatch { expected: usize, got: usize },
}

/// Curve of one position slot during a slice.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SlotCurve {
    /// The slot's occupant does not move.
    Constant { x: f64 },
    /// Half-circle about `center` with the given radius. `start_sign` is −1
    /// for the slot entering at `center − radius` and +1 for the other one;
    /// `turn` is +1 for anticlockwise, −1 for clockwise.
    HalfCircle {
        center: f64,
        radius: f64,
        start_sign: f64,
        turn: f64,
    },
}

impl SlotCurve {
    /// Position at local slice time `s ∈ [0, 1]`.
    pub fn at(&self, s: f64) -> Complex {
        match *self {
            SlotCurve::Constant { x } => Complex::new(x, 0.0),
            SlotCurve::HalfCircle {
                center,
                radius,
                start_sign,
                turn,
            } => {
                let phase = Complex::new(0.0, turn * std::f64::consts::PI * s).exp();
                Complex::new(center, 0.0) + phase * (start_sign * radius)
            }
        }
    }

    /// Derivative with respect to local slice time.
    pub fn velocity(&self, s: f64) -> Complex {
        match *self {
            SlotCurve::Constant { .. } => Complex::new(0.0, 0.0),
            SlotCurve::HalfCircle {
                radius,
                start_sign,
                turn,
                ..
            } => {
                let omega = turn * std::f64::consts::PI;
                let phase = Complex::new(0.0, omega * s).exp();
                phase * Complex::new(0.0, omega) * (start_sign * radius)
            }
        }
    }
}

/// One time slice of the realized braid.
#[derive(Debug, Clone)]
pub struct Slice {
    /// Global time interval `[t0, t1]`.
    pub t0: f64,
    pub t1: f64,
    /// Curve of each position slot (index 0..n-1, left to right).
    pub curves: Vec<SlotCurve>,
    /// Strand occupying each slot at the start of the slice.
    pub slot_to_strand: Vec<usize>,
}

impl Slice {
    /// Position of the given strand (bottom index) at local time `s`.
    pub fn strand_position(&self, strand: usize, s: f64) -> Complex {
        self.curves[self.slot_of(strand)].at(s)
    }

    pub fn strand_velocity(&self, strand: usize, s: f64) -> Complex {
        self.curves[self.slot_of(strand)].velocity(s)
    }

    fn slot_of(&self, strand: usize) -> usize {
        self.slot_to_strand
            .iter()
            .position(|&st| st == strand)
            .expect("strand index out of range")
    }

    /// Analytic lower bound on the distance between any two strands during
    /// this slice. Movers stay on a half-circle whose closest approach to a
    /// real point outside its diameter is `|x − center| − radius`; the two
    /// movers keep constant separation `2·radius`.
    pub fn min_separation(&self) -> f64 {
        let n = self.curves.len();
        let mut best = f64::INFINITY;
        for a in 0..n {
            for b in (a + 1)..n {
                best = best.min(pair_separation(&self.curves[a], &self.curves[b]));
            }
        }
        best
    }
}

fn pair_separation(a: &SlotCurve, b: &SlotCurve) -> f64 {
    use SlotCurve::*;
    match (a, b) {
        (Constant { x: xa }, Constant { x: xb }) => (xa - xb).abs(),
        (HalfCircle { radius, .. }, HalfCircle { .. }) => 2.0 * radius,
        (Constant { x }, HalfCircle { center, radius, .. })
        | (HalfCircle { center, radius, .. }, Constant { x }) => (x - center).abs() - radius,
    }
}

/// A braid realized as piecewise-smooth strand paths.
#[derive(Debug, Clone)]
pub struct BraidGeometry {
    endpoints: Vec<f64>,
    slices: Vec<Slice>,
}

impl BraidGeometry {
    /// Realize `braid` with the given endpoint x-coordinates (strictly
    /// increasing positive reals, one per strand).
    pub fn realize(braid: &BraidWord, endpoints: &[f64]) -> Result<Self, GeometryError> {
        let n = braid.strand_count();
        if endpoints.len() != n {
            return Err(GeometryError::LengthMismatch {
                expected: n,
                got: endpoints.len(),
            });
        }
        for &x in endpoints {
            if !(x > 0.0) {
                return Err(GeometryError::NonPositiveEndpoint(x));
            }
        }
        if endpoints.windows(2).any(|w| w[0] >= w[1]) {
            return Err(GeometryError::NotIncreasing);
        }

        let letters = braid.letters();
        let count = letters.len().max(1);
        let dt = 1.0 / count as f64;
        let mut slot_to_strand: Vec<usize> = (0..n).collect();
        let mut slices = Vec::with_capacity(count);

        if letters.is_empty() {
            slices.push(Slice {
                t0: 0.0,
                t1: 1.0,
                curves: endpoints.iter().map(|&x| SlotCurve::Constant { x }).collect(),
                slot_to_strand: slot_to_strand.clone(),
            });
            return Ok(Self {
                endpoints: endpoints.to_vec(),
                slices,
            });
        }

        for (k, letter) in letters.iter().enumerate() {
            let lo = letter.index - 1;
            let hi = letter.index;
            let center = 0.5 * (endpoints[lo] + endpoints[hi]);
            let radius = 0.5 * (endpoints[hi] - endpoints[lo]);
            let turn = letter.sign as f64;
            let curves: Vec<SlotCurve> = (0..n)
                .map(|slot| {
                    if slot == lo {
                        SlotCurve::HalfCircle {
                            center,
                            radius,
                            start_sign: -1.0,
                            turn,
                        }
                    } else if slot == hi {
                        SlotCurve::HalfCircle {
                            center,
                            radius,
                            start_sign: 1.0,
                            turn,
                        }
                    } else {
                        SlotCurve::Constant {
                            x: endpoints[slot],
                        }
                    }
                })
                .collect();
            slices.push(Slice {
                t0: k as f64 * dt,
                t1: (k + 1) as f64 * dt,
                curves,
                slot_to_strand: slot_to_strand.clone(),
            });
            slot_to_strand.swap(lo, hi);
        }
        Ok(Self {
            endpoints: endpoints.to_vec(),
            slices,
        })
    }

    /// Default endpoints `x_i = i`.
    pub fn realize_default(braid: &BraidWord) -> Result<Self, GeometryError> {
        let endpoints: Vec<f64> = (1..=braid.strand_count()).map(|i| i as f64).collect();
        Self::realize(braid, &endpoints)
    }

    pub fn endpoints(&self) -> &[f64] {
        &self.endpoints
    }

    pub fn strand_count(&self) -> usize {
        self.endpoints.len()
    }

    pub fn slices(&self) -> &[Slice] {
        &self.slices
    }

    /// Slice containing global time `t`; boundary times resolve toward the
    /// lower slice.
    pub fn slice_at(&self, t: f64) -> (&Slice, f64) {
        let count = self.slices.len();
        let scaled = t * count as f64;
        let mut idx = scaled.ceil() as usize;
        if idx == 0 {
            idx = 1;
        }
        let idx = idx.min(count) - 1;
        let slice = &self.slices[idx];
        let s = ((t - slice.t0) / (slice.t1 - slice.t0)).clamp(0.0, 1.0);
        (slice, s)
    }

    /// Position of a strand (0-based bottom index) at global time `t`.
    pub fn strand_position(&self, strand: usize, t: f64) -> Complex {
        let (slice, s) = self.slice_at(t);
        slice.strand_position(strand, s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::braid::BraidWord;

    #[test]
    fn trivial_braid_is_constant() {
        let g = BraidGeometry::realize_default(&BraidWord::trivial(3)).unwrap();
        assert_eq!(g.slices().len(), 1);
        for t in [0.0, 0.3, 1.0] {
            for strand in 0..3 {
                assert_eq!(
                    g.strand_position(strand, t),
                    Complex::new((strand + 1) as f64, 0.0)
                );
            }
        }
    }

    #[test]
    fn positive_crossing_rotates_relative_vector_anticlockwise() {
        let b = BraidWord::parse("1", 2).unwrap();
        let g = BraidGeometry::realize(&b, &[1.0, 2.0]).unwrap();
        // relative vector z_b − z_a = e^{iπt} for endpoints (1, 2)
        for t in [0.0, 0.25, 0.5, 0.75, 1.0] {
            let rel = g.strand_position(1, t) - g.strand_position(0, t);
            let expect = Complex::new(0.0, std::f64::consts::PI * t).exp();
            assert!((rel - expect).norm() < 1e-12, "t={t}: {rel} vs {expect}");
        }
    }

    #[test]
    fn negative_crossing_rotates_clockwise() {
        let b = BraidWord::parse("-1", 2).unwrap();
        let g = BraidGeometry::realize(&b, &[1.0, 2.0]).unwrap();
        let t = 0.25;
        let rel = g.strand_position(1, t) - g.strand_position(0, t);
        let expect = Complex::new(0.0, -std::f64::consts::PI * t).exp();
        assert!((rel - expect).norm() < 1e-12);
    }

    #[test]
    fn strands_end_at_permuted_endpoints() {
        let b = BraidWord::parse("1 2", 3).unwrap();
        let g = BraidGeometry::realize_default(&b).unwrap();
        let pi = b.permutation();
        for strand in 0..3 {
            let end = g.strand_position(strand, 1.0);
            let expect = Complex::new((pi.image(strand) + 1) as f64, 0.0);
            assert!((end - expect).norm() < 1e-12);
        }
    }

    #[test]
    fn endpoint_validation() {
        let b = BraidWord::parse("1", 2).unwrap();
        assert_eq!(
            BraidGeometry::realize(&b, &[1.0]).unwrap_err(),
            GeometryError::LengthMismatch {
                expected: 2,
                got: 1
            }
        );
        assert_eq!(
            BraidGeometry::realize(&b, &[0.0, 1.0]).unwrap_err(),
            GeometryError::NonPositiveEndpoint(0.0)
        );
        assert_eq!(
            BraidGeometry::realize(&b, &[2.0, 1.0]).unwrap_err(),
            GeometryError::NotIncreasing
        );
    }

    #[test]
    fn strands_stay_separated() {
        for text in ["1 2 1", "1 -2 1 -2", "2 2 1"] {
            let b = BraidWord::parse(text, 3).unwrap();
            let g = BraidGeometry::realize_default(&b).unwrap();
            for slice in g.slices() {
                let bound = slice.min_separation();
                assert!(bound > 0.0, "analytic bound must be positive");
                // fine sample inside the slice
                for step in 0..=40 {
                    let s = step as f64 / 40.0;
                    for a in 0..3 {
                        for bb in (a + 1)..3 {
                            let d = (slice.curves[a].at(s) - slice.curves[bb].at(s)).norm();
                            assert!(
                                d >= bound - 1e-9,
                                "sampled distance below analytic bound in '{text}'"
                            );
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn boundary_resolves_to_lower_slice() {
        let b = BraidWord::parse("1 -1", 2).unwrap();
        let g = BraidGeometry::realize_default(&b).unwrap();
        let (slice, s) = g.slice_at(0.5);
        assert_eq!(slice.t1, 0.5);
        assert_eq!(s, 1.0);
    }
}
