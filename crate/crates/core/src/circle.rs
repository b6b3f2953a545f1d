//! Chord diagrams over the circle and formal linear combinations of them.
//!
//! A degree-`m` diagram is a perfect matching of `2m` points in cyclic
//! order on the oriented circle, identified up to rotation (the
//! orientation-preserving diffeomorphisms of the circle act on finitely
//! many marked points as rotations). Reflections are *not* identified.
//! Diagrams are stored in canonical form: the rotation of the labels that
//! minimizes the sorted list of chords lexicographically.
//!
//! The product is the connected sum: cut each circle in the arc between its
//! highest point and point 1 and splice. On the nose the result depends on
//! the cut; modulo the 4T relations (see [`crate::quotient`]) it does not,
//! which is verified exhaustively in tests.

use crate::scalar::Scalar;
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DiagramError {
    #[error("matching must cover {{0..{expected}}} exactly once (point {point} seen {count} times)")]
    NotAMatching {
        expected: usize,
        point: usize,
        count: usize,
    },
}

/// A chord diagram on the circle, canonical up to rotation.
///
/// Chords are pairs `(a, b)` with `a < b` over points `0..2m`, sorted; the
/// stored representative is the lexicographically minimal rotation.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CircleDiagram {
    chords: Vec<(usize, usize)>,
}

impl CircleDiagram {
    /// The chordless circle (the unit of the algebra).
    pub fn empty() -> Self {
        Self { chords: Vec::new() }
    }

    /// The degree-`m` diagram whose chord endpoints are diametrically
    /// opposite: point `i` paired with `i + m`.
    pub fn diametric(m: usize) -> Self {
        Self::from_chords((0..m).map(|i| (i, i + m)).collect()).expect("valid pairing")
    }

    /// Canonicalize an arbitrary pairing of `{0, …, 2m−1}`.
    pub fn from_chords(chords: Vec<(usize, usize)>) -> Result<Self, DiagramError> {
        let points = 2 * chords.len();
        let mut seen = vec![0usize; points];
        for &(a, b) in &chords {
            for p in [a, b] {
                if p >= points {
                    return Err(DiagramError::NotAMatching {
                        expected: points,
                        point: p,
                        count: 0,
                    });
                }
                seen[p] += 1;
            }
        }
        if let Some(point) = seen.iter().position(|&c| c != 1) {
            return Err(DiagramError::NotAMatching {
                expected: points,
                point,
                count: seen[point],
            });
        }
        Ok(Self {
            chords: canonical_rotation(&chords),
        })
    }

    pub fn degree(&self) -> usize {
        self.chords.len()
    }

    pub fn points(&self) -> usize {
        2 * self.chords.len()
    }

    /// Sorted chord list of the canonical representative.
    pub fn chords(&self) -> &[(usize, usize)] {
        &self.chords
    }

    /// Rotate the labels by `shift` and re-canonicalize (the result equals
    /// `self`; exposed for property tests).
    pub fn rotated(&self, shift: usize) -> Self {
        Self {
            chords: canonical_rotation(&rotate_chords(&self.chords, shift, self.points())),
        }
    }

    /// Connected sum with the standard cut: the arc before point 0 on both
    /// circles. Concretely `other`'s points are shifted past `self`'s.
    pub fn connected_sum(&self, other: &CircleDiagram) -> Self {
        self.connected_sum_at(self.points(), other, other.points())
    }

    /// Connected sum cutting `self` in the arc after `cut_self` points of
    /// its canonical representative and `other` after `cut_other` (both in
    /// `1..=points`, with the convention that `points` means the arc
    /// closing the circle). Any choice yields the same 4T-reduced product.
    pub fn connected_sum_at(&self, cut_self: usize, other: &CircleDiagram, cut_other: usize) -> Self {
        let n1 = self.points();
        let n2 = other.points();
        if n1 == 0 {
            return other.rotated_raw(cut_other, n2);
        }
        if n2 == 0 {
            return self.rotated_raw(cut_self, n1);
        }
        // Rotate each so its cut arc becomes the closing arc, then splice.
        let left = rotate_chords(&self.chords, n1 - (cut_self % n1), n1);
        let right = rotate_chords(&other.chords, n2 - (cut_other % n2), n2);
        let mut chords = left;
        chords.extend(right.into_iter().map(|(a, b)| (a + n1, b + n1)));
        Self {
            chords: canonical_rotation(&chords),
        }
    }

    fn rotated_raw(&self, cut: usize, n: usize) -> Self {
        if n == 0 {
            return self.clone();
        }
        Self {
            chords: canonical_rotation(&rotate_chords(&self.chords, n - (cut % n), n)),
        }
    }

    /// Serialization used across the CLI and JSON output: 1-based chord
    /// list, e.g. `[(1,4),(2,5),(3,6)]` for the diametric 3-chord diagram.
    pub fn code(&self) -> String {
        let body: Vec<String> = self
            .chords
            .iter()
            .map(|&(a, b)| format!("({},{})", a + 1, b + 1))
            .collect();
        format!("[{}]", body.join(","))
    }
}

impl fmt::Display for CircleDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.code())
    }
}

fn rotate_chords(chords: &[(usize, usize)], shift: usize, points: usize) -> Vec<(usize, usize)> {
    if points == 0 {
        return Vec::new();
    }
    let mut out: Vec<(usize, usize)> = chords
        .iter()
        .map(|&(a, b)| {
            let x = (a + shift) % points;
            let y = (b + shift) % points;
            (x.min(y), x.max(y))
        })
        .collect();
    out.sort_unstable();
    out
}

fn canonical_rotation(chords: &[(usize, usize)]) -> Vec<(usize, usize)> {
    let points = 2 * chords.len();
    if points == 0 {
        return Vec::new();
    }
    (0..points)
        .map(|shift| rotate_chords(chords, shift, points))
        .min()
        .unwrap()
}

/// All canonical diagrams with `m` chords, ascending by chord code.
///
/// Enumerates the `(2m−1)!!` pairings of `2m` points and keeps one
/// representative per rotation class.
pub fn enumerate_diagrams(m: usize) -> Vec<CircleDiagram> {
    let mut out: std::collections::BTreeSet<CircleDiagram> = Default::default();
    let mut partner: Vec<Option<usize>> = vec![None; 2 * m];
    enumerate_matchings(&mut partner, &mut |pairs| {
        out.insert(CircleDiagram {
            chords: canonical_rotation(pairs),
        });
    });
    out.into_iter().collect()
}

/// Visit every perfect matching of `{0..partner.len()}` as a sorted pair
/// list.
pub(crate) fn enumerate_matchings(
    partner: &mut Vec<Option<usize>>,
    visit: &mut impl FnMut(&[(usize, usize)]),
) {
    fn rec(
        partner: &mut Vec<Option<usize>>,
        acc: &mut Vec<(usize, usize)>,
        visit: &mut impl FnMut(&[(usize, usize)]),
    ) {
        let Some(first) = partner.iter().position(Option::is_none) else {
            visit(acc);
            return;
        };
        for second in (first + 1)..partner.len() {
            if partner[second].is_some() {
                continue;
            }
            partner[first] = Some(second);
            partner[second] = Some(first);
            acc.push((first, second));
            rec(partner, acc, visit);
            acc.pop();
            partner[first] = None;
            partner[second] = None;
        }
    }
    let mut acc = Vec::with_capacity(partner.len() / 2);
    rec(partner, &mut acc, visit);
}

/// A finite linear combination of circle diagrams with scalar coefficients,
/// tracked up to a truncation degree. Zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq)]
pub struct CircleElement<S: Scalar> {
    truncation: usize,
    terms: BTreeMap<CircleDiagram, S>,
}

impl<S: Scalar> CircleElement<S> {
    pub fn zero(truncation: usize) -> Self {
        Self {
            truncation,
            terms: BTreeMap::new(),
        }
    }

    /// The unit: the chordless circle with coefficient 1.
    pub fn unit(truncation: usize) -> Self {
        let mut e = Self::zero(truncation);
        e.add_term(CircleDiagram::empty(), S::one());
        e
    }

    pub fn truncation(&self) -> usize {
        self.truncation
    }

    pub fn terms(&self) -> impl Iterator<Item = (&CircleDiagram, &S)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, d: &CircleDiagram) -> S {
        self.terms.get(d).cloned().unwrap_or_else(S::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Add `coeff · diagram`, dropping the term if it exceeds the truncation
    /// degree or cancels.
    pub fn add_term(&mut self, diagram: CircleDiagram, coeff: S) {
        if coeff.is_zero() || diagram.degree() > self.truncation {
            return;
        }
        let entry = self.terms.entry(diagram);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get().add_ref(&coeff);
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.truncation = self.truncation.min(other.truncation);
        out.terms.retain(|d, _| d.degree() <= out.truncation);
        for (d, c) in other.terms() {
            out.add_term(d.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, factor: &S) -> Self {
        let mut out = Self::zero(self.truncation);
        for (d, c) in self.terms() {
            out.add_term(d.clone(), c.mul_ref(factor));
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&S::one().neg_ref()))
    }

    /// Connected-sum product, extended bilinearly, truncated.
    pub fn product(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.truncation.min(other.truncation));
        for (d1, c1) in self.terms() {
            for (d2, c2) in other.terms() {
                if d1.degree() + d2.degree() > out.truncation {
                    continue;
                }
                out.add_term(d1.connected_sum(d2), c1.mul_ref(c2));
            }
        }
        out
    }

    /// The part of the element in a single degree.
    pub fn degree_part(&self, m: usize) -> Self {
        let mut out = Self::zero(self.truncation);
        for (d, c) in self.terms().filter(|(d, _)| d.degree() == m) {
            out.add_term(d.clone(), c.clone());
        }
        out
    }

    pub fn max_degree(&self) -> usize {
        self.terms.keys().map(CircleDiagram::degree).max().unwrap_or(0)
    }
}

/// `r₊` (sign +1) or `r₋` (sign −1): `pZ(σ₁^{±1}) − ○`, i.e.
/// `Σ_{m=1..N} (±1/2)^m/m! · ○_m`, with exact rational coefficients.
pub fn r_plus_minus(sign: i8, truncation: usize) -> CircleElement<crate::scalar::Rational> {
    use num::BigInt;
    assert!(sign == 1 || sign == -1, "sign must be ±1");
    let mut e = CircleElement::zero(truncation);
    let mut coeff = crate::scalar::Rational::from(BigInt::from(1));
    let half = crate::exact::ratio(i64::from(sign), 2);
    for m in 1..=truncation {
        coeff = &coeff * &half / crate::scalar::Rational::from(BigInt::from(m as i64));
        e.add_term(CircleDiagram::diametric(m), coeff.clone());
    }
    e
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::ratio;
    use crate::scalar::Rational;

    #[test]
    fn canonical_form_examples() {
        // crossed pair is rotation-symmetric
        let crossed = CircleDiagram::from_chords(vec![(0, 2), (1, 3)]).unwrap();
        assert_eq!(crossed.chords(), &[(0, 2), (1, 3)]);
        // nested pair and adjacent pair are the same rotation class
        let nested = CircleDiagram::from_chords(vec![(0, 3), (1, 2)]).unwrap();
        let adjacent = CircleDiagram::from_chords(vec![(0, 1), (2, 3)]).unwrap();
        assert_eq!(nested, adjacent);
        assert_eq!(CircleDiagram::from_chords(vec![]).unwrap(), CircleDiagram::empty());
    }

    #[test]
    fn canonical_form_is_rotation_invariant_and_idempotent() {
        let d = CircleDiagram::from_chords(vec![(0, 4), (1, 2), (3, 5)]).unwrap();
        for shift in 0..6 {
            assert_eq!(d.rotated(shift), d);
        }
    }

    #[test]
    fn malformed_pairings_are_rejected() {
        assert!(CircleDiagram::from_chords(vec![(0, 0), (1, 2)]).is_err());
        assert!(CircleDiagram::from_chords(vec![(0, 5), (1, 2)]).is_err());
    }

    #[test]
    fn diagram_counts_by_degree() {
        // rotation classes of perfect matchings: 1, 1, 2, 5, 18
        assert_eq!(enumerate_diagrams(0).len(), 1);
        assert_eq!(enumerate_diagrams(1).len(), 1);
        assert_eq!(enumerate_diagrams(2).len(), 2);
        assert_eq!(enumerate_diagrams(3).len(), 5);
        assert_eq!(enumerate_diagrams(4).len(), 18);
    }

    #[test]
    fn enumeration_is_canonical_and_deterministic() {
        let once = enumerate_diagrams(3);
        let twice = enumerate_diagrams(3);
        assert_eq!(once, twice);
        for d in &once {
            assert_eq!(d, &CircleDiagram::from_chords(d.chords().to_vec()).unwrap());
        }
    }

    #[test]
    fn connected_sum_unit_and_splice() {
        let one = CircleDiagram::diametric(1);
        let unit = CircleDiagram::empty();
        assert_eq!(one.connected_sum(&unit), one);
        assert_eq!(unit.connected_sum(&one), one);
        assert_eq!(unit.connected_sum(&unit), unit);
        // ○₁ ⊛ ○₁ = two non-interleaved chords
        let product = one.connected_sum(&one);
        assert_eq!(
            product,
            CircleDiagram::from_chords(vec![(0, 1), (2, 3)]).unwrap()
        );
    }

    #[test]
    fn diametric_is_its_own_canonical_form() {
        for m in 1..=4 {
            let d = CircleDiagram::diametric(m);
            assert_eq!(d.degree(), m);
            assert_eq!(d.chords(), (0..m).map(|i| (i, i + m)).collect::<Vec<_>>().as_slice());
        }
    }

    #[test]
    fn code_roundtrip_format() {
        assert_eq!(CircleDiagram::diametric(3).code(), "[(1,4),(2,5),(3,6)]");
        assert_eq!(CircleDiagram::empty().code(), "[]");
    }

    #[test]
    fn r_plus_minus_coefficients_match_closed_form() {
        let rp = r_plus_minus(1, 1);
        assert_eq!(rp.coefficient(&CircleDiagram::diametric(1)), ratio(1, 2));

        let rm = r_plus_minus(-1, 2);
        assert_eq!(rm.coefficient(&CircleDiagram::diametric(1)), ratio(-1, 2));
        assert_eq!(rm.coefficient(&CircleDiagram::diametric(2)), ratio(1, 8));

        let rp3 = r_plus_minus(1, 3);
        assert_eq!(rp3.coefficient(&CircleDiagram::diametric(3)), ratio(1, 48));
    }

    #[test]
    fn element_arithmetic_drops_zeros_and_truncates() {
        let mut e: CircleElement<Rational> = CircleElement::zero(2);
        e.add_term(CircleDiagram::diametric(1), ratio(1, 2));
        e.add_term(CircleDiagram::diametric(1), ratio(-1, 2));
        assert!(e.is_zero());
        e.add_term(CircleDiagram::diametric(3), ratio(1, 1));
        assert!(e.is_zero(), "beyond-truncation terms are dropped");
    }

    #[test]
    fn product_is_bilinear_over_small_elements() {
        let mut a: CircleElement<Rational> = CircleElement::zero(3);
        a.add_term(CircleDiagram::empty(), ratio(2, 1));
        a.add_term(CircleDiagram::diametric(1), ratio(1, 3));
        let b = CircleElement::unit(3);
        assert_eq!(a.product(&b), a);
    }
}
