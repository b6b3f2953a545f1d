//! The composite knot invariant: transport, closure, and projection onto
//! the quotient, with error bounds carried through every stage; plus the
//! Markov-move verification harness.

use crate::braid::{BraidError, BraidWord};
use crate::circle::CircleElement;
use crate::horiz::{close_with_stats, CloseError};
use crate::kz::{closed_form_power, transport, transport_default, TransportError};
use crate::quotient::{ProjectScalar, ProjectedClass, QuotientBases, QuotientError};
use crate::scalar::{Complex, Rational, Scalar};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum InvariantError {
    #[error("closure has {components} components; the invariant is defined for knots")]
    NotAKnot { components: usize },
    #[error("endpoints override has length {got}, braid has {strands} strands")]
    EndpointCount { got: usize, strands: usize },
    #[error(transparent)]
    Braid(#[from] BraidError),
    #[error(transparent)]
    Transport(#[from] TransportError),
    #[error(transparent)]
    Close(#[from] CloseError),
    #[error(transparent)]
    Quotient(#[from] QuotientError),
}

/// Value of the invariant for one braid presentation: per-degree quotient
/// coordinates plus per-degree error bounds (zero on the exact path).
#[derive(Debug, Clone)]
pub struct InvariantValue<S: Scalar> {
    class: ProjectedClass<S>,
    bounds: Vec<f64>,
}

impl<S: Scalar> InvariantValue<S> {
    pub fn truncation(&self) -> usize {
        self.class.truncation
    }

    pub fn class(&self) -> &ProjectedClass<S> {
        &self.class
    }

    /// Coordinates of the degree-`m` block, over the free diagrams of the
    /// 4T reduction at that degree.
    pub fn degree_coordinates(&self, m: usize) -> &[S] {
        self.class.degree_block(m)
    }

    pub fn bounds(&self) -> &[f64] {
        &self.bounds
    }

    pub fn degree_distances(&self, other: &InvariantValue<S>) -> Vec<f64> {
        self.class.degree_distances(&other.class)
    }

    /// Combined per-degree bounds of two values.
    pub fn combined_bounds(&self, other: &InvariantValue<S>) -> Vec<f64> {
        self.bounds
            .iter()
            .zip(&other.bounds)
            .map(|(a, b)| a + b)
            .collect()
    }
}

impl InvariantValue<Rational> {
    pub fn to_complex(&self) -> InvariantValue<Complex> {
        InvariantValue {
            class: self.class.to_complex(),
            bounds: self.bounds.clone(),
        }
    }
}

impl InvariantValue<Complex> {
    /// Largest imaginary part across all coordinates. The invariant's
    /// coordinates are empirically real; tests assert this stays within the
    /// error bounds rather than assuming it.
    pub fn max_imaginary(&self) -> f64 {
        self.class
            .blocks
            .iter()
            .flatten()
            .map(|c| c.im.abs())
            .fold(0.0, f64::max)
    }
}

/// Outcome of comparing two invariant values.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    EqualWithinTol,
    Distinct,
    Indeterminate,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Verdict::EqualWithinTol => "EQUAL_WITHIN_TOL",
            Verdict::Distinct => "DISTINCT",
            Verdict::Indeterminate => "INDETERMINATE",
        };
        f.write_str(s)
    }
}

/// Comparison result with the per-degree evidence.
#[derive(Debug, Clone)]
pub struct ComparisonVerdict {
    pub verdict: Verdict,
    pub degree_distances: Vec<f64>,
    pub degree_bounds: Vec<f64>,
}

/// DISTINCT needs a coordinate distance exceeding the combined bound by the
/// margin factor; EQUAL needs every distance inside the combined bound.
pub fn compare_values<S: Scalar>(
    a: &InvariantValue<S>,
    b: &InvariantValue<S>,
    margin: f64,
) -> ComparisonVerdict {
    let degree_distances = a.degree_distances(b);
    let degree_bounds = a.combined_bounds(b);
    let all_equal = degree_distances
        .iter()
        .zip(&degree_bounds)
        .all(|(d, bound)| d <= bound);
    let any_distinct = degree_distances
        .iter()
        .zip(&degree_bounds)
        .any(|(d, bound)| *d > bound * (1.0 + margin));
    let verdict = if all_equal {
        Verdict::EqualWithinTol
    } else if any_distinct {
        Verdict::Distinct
    } else {
        Verdict::Indeterminate
    };
    ComparisonVerdict {
        verdict,
        degree_distances,
        degree_bounds,
    }
}

pub const DEFAULT_MARGIN: f64 = 10.0;

fn check_knot(braid: &BraidWord) -> Result<(), InvariantError> {
    let components = braid.closure_components();
    if components != 1 {
        return Err(InvariantError::NotAKnot { components });
    }
    Ok(())
}

fn run_transport(
    braid: &BraidWord,
    endpoints: Option<&[f64]>,
    truncation: usize,
    tol: f64,
) -> Result<crate::kz::TransportResult, InvariantError> {
    match endpoints {
        Some(e) => {
            if e.len() != braid.strand_count() {
                return Err(InvariantError::EndpointCount {
                    got: e.len(),
                    strands: braid.strand_count(),
                });
            }
            Ok(transport(braid, e, truncation, tol)?)
        }
        None => Ok(transport_default(braid, truncation, tol)?),
    }
}

/// `pZ(b)` on the numeric path: transport then closure, with per-degree
/// bounds scaled by how many words landed on each circle diagram.
pub fn close_transport(
    braid: &BraidWord,
    endpoints: Option<&[f64]>,
    truncation: usize,
    tol: f64,
) -> Result<(CircleElement<Complex>, Vec<f64>), InvariantError> {
    check_knot(braid)?;
    let result = run_transport(braid, endpoints, truncation, tol)?;
    let (closed, multiplicity) = close_with_stats(&result.value, braid)?;
    let bounds: Vec<f64> = result
        .degree_errors
        .iter()
        .zip(&multiplicity)
        .map(|(err, &mult)| err * mult.max(1) as f64)
        .collect();
    Ok((closed, bounds))
}

/// The invariant `Y(K) = kpZ(b)` on the numeric path.
pub fn compute_y(
    braid: &BraidWord,
    endpoints: Option<&[f64]>,
    tol: f64,
    bases: &QuotientBases,
) -> Result<InvariantValue<Complex>, InvariantError> {
    let truncation = bases.truncation();
    let (closed, bounds) = close_transport(braid, endpoints, truncation, tol)?;
    let class = bases.project(&closed)?;
    let bounds = bases.propagate_bounds(&bounds);
    Ok(InvariantValue { class, bounds })
}

/// The invariant for `σ₁^k` on two strands, entirely exact. `k` must be
/// odd for the closure to be a knot.
pub fn compute_y_exact_two_strand(
    k: i64,
    bases: &QuotientBases,
) -> Result<InvariantValue<Rational>, InvariantError> {
    let braid = BraidWord::sigma1_power(k);
    check_knot(&braid)?;
    let element = closed_form_power(k, bases.truncation());
    let (closed, _) = close_with_stats(&element, &braid)?;
    let class = bases.project(&closed)?;
    let bounds = vec![0.0; bases.truncation() + 1];
    Ok(InvariantValue { class, bounds })
}

/// Project any exact circle element and wrap it as an invariant-shaped
/// value with zero bounds (handy for expressing expected classes in tests
/// and reports).
pub fn project_exact<S: ProjectScalar>(
    element: &CircleElement<S>,
    bases: &QuotientBases,
) -> Result<InvariantValue<S>, InvariantError> {
    let class = bases.project(element)?;
    let bounds = vec![0.0; bases.truncation() + 1];
    Ok(InvariantValue { class, bounds })
}

/// Compare the invariants of two braid presentations.
pub fn compare(
    b1: &BraidWord,
    b2: &BraidWord,
    endpoints: Option<&[f64]>,
    tol: f64,
    bases: &QuotientBases,
) -> Result<ComparisonVerdict, InvariantError> {
    let pick = |b: &BraidWord| -> Option<Vec<f64>> {
        endpoints
            .filter(|e| e.len() == b.strand_count())
            .map(<[f64]>::to_vec)
    };
    let y1 = compute_y(b1, pick(b1).as_deref(), tol, bases)?;
    let y2 = compute_y(b2, pick(b2).as_deref(), tol, bases)?;
    Ok(compare_values(&y1, &y2, DEFAULT_MARGIN))
}

/// Evidence from a pZ-level check (before the ideal quotient).
#[derive(Debug, Clone)]
pub struct CheckReport {
    pub name: String,
    pub degree_distances: Vec<f64>,
    pub degree_bounds: Vec<f64>,
    pub pass: bool,
}

impl std::fmt::Display for CheckReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let max_d = self.degree_distances.iter().fold(0.0f64, |a, &b| a.max(b));
        let max_b = self.degree_bounds.iter().fold(0.0f64, |a, &b| a.max(b));
        write!(
            f,
            "{}: {} (max distance {:.3e}, max bound {:.3e})",
            self.name,
            if self.pass { "pass" } else { "FAIL" },
            max_d,
            max_b
        )
    }
}

/// Markov move 1: `pZ(b₁b₂) = pZ(b₂b₁)`, compared before the ideal
/// quotient (the identity holds at the `pZ` level).
pub fn verify_markov1(
    b1: &BraidWord,
    b2: &BraidWord,
    truncation: usize,
    tol: f64,
) -> Result<CheckReport, InvariantError> {
    let b12 = b1.concat(b2)?;
    let b21 = b2.concat(b1)?;
    let (left, lb) = close_transport(&b12, None, truncation, tol)?;
    let (right, rb) = close_transport(&b21, None, truncation, tol)?;
    let degree_distances = circle_distance_per_degree(&left, &right, truncation);
    let degree_bounds: Vec<f64> = lb.iter().zip(&rb).map(|(a, b)| a + b).collect();
    let pass = degree_distances
        .iter()
        .zip(&degree_bounds)
        .all(|(d, b)| d <= b);
    Ok(CheckReport {
        name: format!("markov1 [{b1}] · [{b2}]"),
        degree_distances,
        degree_bounds,
        pass,
    })
}

/// Markov move 2: `Y(b) = Y((b ⊔ |)σ_n^{±1})`, compared in the quotient at
/// finite strand separation.
pub fn verify_markov2(
    braid: &BraidWord,
    sign: i8,
    tol: f64,
    bases: &QuotientBases,
) -> Result<ComparisonVerdict, InvariantError> {
    let y = compute_y(braid, None, tol, bases)?;
    let stabilized = braid.stabilize(sign);
    let y_stab = compute_y(&stabilized, None, tol, bases)?;
    Ok(compare_values(&y, &y_stab, DEFAULT_MARGIN))
}

/// Per-degree ∞-norm of the coefficient difference of two circle elements.
pub fn circle_distance_per_degree<S: Scalar>(
    a: &CircleElement<S>,
    b: &CircleElement<S>,
    truncation: usize,
) -> Vec<f64> {
    let mut out = vec![0.0f64; truncation + 1];
    let mut keys: std::collections::BTreeSet<&crate::circle::CircleDiagram> = Default::default();
    keys.extend(a.terms().map(|(d, _)| d));
    keys.extend(b.terms().map(|(d, _)| d));
    for d in keys {
        let diff = a
            .coefficient(d)
            .add_ref(&b.coefficient(d).neg_ref())
            .abs_f64();
        out[d.degree()] = out[d.degree()].max(diff);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circle::CircleDiagram;
    use crate::exact::ratio;
    use num::Zero;

    fn bases3() -> QuotientBases {
        QuotientBases::build(3)
    }

    #[test]
    fn unknot_has_trivial_class() {
        let bases = bases3();
        let b = BraidWord::parse("1", 2).unwrap();
        let y = compute_y(&b, None, 1e-10, &bases).unwrap();
        assert_eq!(y.degree_coordinates(0)[0], Complex::new(1.0, 0.0));
        for m in 1..=3 {
            for (c, &bound) in y.degree_coordinates(m).iter().zip(y.bounds()) {
                assert!(c.norm() <= bound.max(1e-8), "degree {m} must vanish");
            }
        }
    }

    #[test]
    fn exact_trefoil_classes() {
        let bases = bases3();
        let y3 = compute_y_exact_two_strand(3, &bases).unwrap();
        assert_eq!(y3.degree_coordinates(0), &[ratio(1, 1)]);
        assert!(y3.degree_coordinates(1).iter().all(Zero::is_zero));
        assert!(y3.degree_coordinates(2).iter().all(Zero::is_zero));

        let mut half_o3 = CircleElement::zero(3);
        half_o3.add_term(CircleDiagram::diametric(3), ratio(1, 2));
        let expected = project_exact(&half_o3, &bases).unwrap();
        assert_eq!(y3.degree_coordinates(3), expected.degree_coordinates(3));

        let y_mirror = compute_y_exact_two_strand(-3, &bases).unwrap();
        let neg: Vec<Rational> = expected
            .degree_coordinates(3)
            .iter()
            .map(|c| -c)
            .collect();
        assert_eq!(y_mirror.degree_coordinates(3), neg.as_slice());
    }

    #[test]
    fn exact_unknot_power_is_unit_class() {
        let bases = bases3();
        let y = compute_y_exact_two_strand(1, &bases).unwrap();
        assert_eq!(y.degree_coordinates(0), &[ratio(1, 1)]);
        for m in 1..=3 {
            assert!(y.degree_coordinates(m).iter().all(Zero::is_zero));
        }
    }

    #[test]
    fn even_powers_are_rejected() {
        let bases = bases3();
        assert!(matches!(
            compute_y_exact_two_strand(2, &bases),
            Err(InvariantError::NotAKnot { components: 2 })
        ));
    }

    #[test]
    fn self_comparison_is_equal() {
        let bases = bases3();
        let b = BraidWord::parse("1 1 1", 2).unwrap();
        let v = compare(&b, &b, None, 1e-10, &bases).unwrap();
        assert_eq!(v.verdict, Verdict::EqualWithinTol);
    }

    #[test]
    fn trefoil_and_mirror_are_distinct() {
        let bases = bases3();
        let b = BraidWord::parse("1 1 1", 2).unwrap();
        let v = compare(&b, &b.inverse(), None, 1e-10, &bases).unwrap();
        assert_eq!(v.verdict, Verdict::Distinct);
    }

    #[test]
    fn markov1_same_word_passes() {
        let b1 = BraidWord::parse("1", 2).unwrap();
        let b2 = BraidWord::parse("1 1", 2).unwrap();
        let report = verify_markov1(&b1, &b2, 3, 1e-10).unwrap();
        assert!(report.pass, "{report}");
    }

    #[test]
    fn markov1_three_strands() {
        let b1 = BraidWord::parse("1 2", 3).unwrap();
        let b2 = BraidWord::parse("2", 3).unwrap();
        assert_eq!(b1.concat(&b2).unwrap().closure_components(), 1);
        let report = verify_markov1(&b1, &b2, 3, 1e-10).unwrap();
        assert!(report.pass, "{report}");
    }

    #[test]
    fn markov1_with_trivial_factor() {
        let b1 = BraidWord::trivial(2);
        let b2 = BraidWord::parse("1 1 1", 2).unwrap();
        let report = verify_markov1(&b1, &b2, 3, 1e-10).unwrap();
        assert!(report.pass, "{report}");
    }

    #[test]
    fn markov2_stabilization_preserves_the_class() {
        let bases = bases3();
        for sign in [1, -1] {
            let b = BraidWord::parse("1 1 1", 2).unwrap();
            let v = verify_markov2(&b, sign, 1e-10, &bases).unwrap();
            assert_eq!(v.verdict, Verdict::EqualWithinTol, "sign {sign}: {v:?}");
        }
    }

    #[test]
    fn markov2_unknot() {
        let bases = bases3();
        let b = BraidWord::parse("1", 2).unwrap();
        let v = verify_markov2(&b, -1, 1e-10, &bases).unwrap();
        assert_eq!(v.verdict, Verdict::EqualWithinTol);
        let trivial = BraidWord::trivial(1);
        let v = verify_markov2(&trivial, 1, 1e-10, &bases).unwrap();
        assert_eq!(v.verdict, Verdict::EqualWithinTol);
    }

    #[test]
    fn numeric_matches_exact_for_odd_powers() {
        let bases = bases3();
        for k in [-3i64, -1, 1, 3] {
            let b = BraidWord::sigma1_power(k);
            let numeric = compute_y(&b, None, 1e-10, &bases).unwrap();
            let exact = compute_y_exact_two_strand(k, &bases).unwrap().to_complex();
            let v = compare_values(&numeric, &exact, DEFAULT_MARGIN);
            assert_eq!(v.verdict, Verdict::EqualWithinTol, "k={k}: {v:?}");
        }
    }

    #[test]
    fn imaginary_parts_stay_within_bounds() {
        let bases = bases3();
        let b = BraidWord::parse("1 1 1 2", 3).unwrap();
        let y = compute_y(&b, None, 1e-10, &bases).unwrap();
        let bound = y.bounds().iter().fold(0.0f64, |a, &b| a.max(b));
        assert!(
            y.max_imaginary() <= bound,
            "imag {:.3e} vs bound {:.3e}",
            y.max_imaginary(),
            bound
        );
    }

    #[test]
    fn endpoint_override_is_validated() {
        let bases = bases3();
        let b = BraidWord::parse("1 1 1", 2).unwrap();
        assert!(matches!(
            compute_y(&b, Some(&[1.0]), 1e-10, &bases),
            Err(InvariantError::EndpointCount { got: 1, strands: 2 })
        ));
        let y = compute_y(&b, Some(&[1.0, 3.0]), 1e-10, &bases).unwrap();
        let y_default = compute_y(&b, None, 1e-10, &bases).unwrap();
        let v = compare_values(&y, &y_default, DEFAULT_MARGIN);
        assert_eq!(v.verdict, Verdict::EqualWithinTol);
    }
}
