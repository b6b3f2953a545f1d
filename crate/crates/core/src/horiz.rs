//! Chord diagrams over a braid: ordered words of strand pairs, their
//! truncated stacking algebra, and the closure map onto circle diagrams.
//!
//! A word lists its chords bottom-to-top, one per height; an entry `{i, j}`
//! is a chord connecting strands `i` and `j` (0-based bottom indices).
//! The free word algebra is not quotiented by the infinitesimal braid
//! relations — the closure map respects them and the image is 4T-reduced
//! downstream, so the free truncated algebra is sound for computing `pZ`.

use crate::braid::{BraidWord, Permutation};
use crate::circle::{CircleDiagram, CircleElement};
use crate::scalar::Scalar;
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CloseError {
    #[error("closure has {components} components; the map onto circle diagrams needs a knot")]
    NotAKnot { components: usize },
    #[error("element lives on {element} strands, braid has {braid}")]
    StrandMismatch { element: usize, braid: usize },
}

/// An ordered word of strand pairs; the chord at position `ℓ` sits at
/// height `ℓ` over the braid.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct HorizontalDiagram {
    pairs: Vec<(usize, usize)>,
}

impl HorizontalDiagram {
    pub fn unit() -> Self {
        Self::default()
    }

    /// Build from pairs of distinct strand indices, normalizing each to
    /// `(min, max)`.
    pub fn from_pairs(pairs: Vec<(usize, usize)>) -> Self {
        Self {
            pairs: pairs
                .into_iter()
                .map(|(a, b)| {
                    assert_ne!(a, b, "chord endpoints must be distinct strands");
                    (a.min(b), a.max(b))
                })
                .collect(),
        }
    }

    pub fn degree(&self) -> usize {
        self.pairs.len()
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn max_strand(&self) -> Option<usize> {
        self.pairs.iter().map(|&(_, b)| b).max()
    }

    /// Word concatenation: `self` below, `other` on top.
    pub fn stacked(&self, other: &Self) -> Self {
        let mut pairs = self.pairs.clone();
        pairs.extend_from_slice(&other.pairs);
        Self { pairs }
    }

    /// Apply a permutation to the strand labels of every chord.
    pub fn relabeled(&self, perm: &Permutation) -> Self {
        Self::from_pairs(
            self.pairs
                .iter()
                .map(|&(a, b)| (perm.image(a), perm.image(b)))
                .collect(),
        )
    }

    /// Serialization used in debug dumps: `{1,2};{2,3}` bottom-to-top,
    /// 1-based.
    pub fn code(&self) -> String {
        self.pairs
            .iter()
            .map(|&(a, b)| format!("{{{},{}}}", a + 1, b + 1))
            .collect::<Vec<_>>()
            .join(";")
    }
}

impl fmt::Display for HorizontalDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.code())
    }
}

/// Truncated linear combination of words over a fixed strand count.
#[derive(Debug, Clone, PartialEq)]
pub struct BraidElement<S: Scalar> {
    strand_count: usize,
    truncation: usize,
    terms: BTreeMap<HorizontalDiagram, S>,
}

impl<S: Scalar> BraidElement<S> {
    pub fn zero(strand_count: usize, truncation: usize) -> Self {
        Self {
            strand_count,
            truncation,
            terms: BTreeMap::new(),
        }
    }

    /// The unit: the empty word with coefficient 1.
    pub fn unit(strand_count: usize, truncation: usize) -> Self {
        let mut e = Self::zero(strand_count, truncation);
        e.add_term(HorizontalDiagram::unit(), S::one());
        e
    }

    pub fn strand_count(&self) -> usize {
        self.strand_count
    }

    pub fn truncation(&self) -> usize {
        self.truncation
    }

    pub fn terms(&self) -> impl Iterator<Item = (&HorizontalDiagram, &S)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, w: &HorizontalDiagram) -> S {
        self.terms.get(w).cloned().unwrap_or_else(S::zero)
    }

    pub fn add_term(&mut self, word: HorizontalDiagram, coeff: S) {
        if coeff.is_zero() || word.degree() > self.truncation {
            return;
        }
        if let Some(top) = word.max_strand() {
            assert!(top < self.strand_count, "strand index out of range");
        }
        match self.terms.entry(word) {
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
        assert_eq!(self.strand_count, other.strand_count);
        let mut out = self.clone();
        out.truncation = self.truncation.min(other.truncation);
        out.terms.retain(|w, _| w.degree() <= out.truncation);
        for (w, c) in other.terms() {
            out.add_term(w.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, factor: &S) -> Self {
        let mut out = Self::zero(self.strand_count, self.truncation);
        for (w, c) in self.terms() {
            out.add_term(w.clone(), c.mul_ref(factor));
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&S::one().neg_ref()))
    }

    /// Stacking product: bilinear extension of word concatenation with
    /// `self`'s words below `other`'s. Terms above the common truncation
    /// are dropped.
    pub fn stack(&self, other: &Self) -> Self {
        assert_eq!(
            self.strand_count, other.strand_count,
            "stack requires equal strand counts"
        );
        let mut out = Self::zero(self.strand_count, self.truncation.min(other.truncation));
        for (w1, c1) in self.terms() {
            for (w2, c2) in other.terms() {
                if w1.degree() + w2.degree() > out.truncation {
                    continue;
                }
                out.add_term(w1.stacked(w2), c1.mul_ref(c2));
            }
        }
        out
    }

    /// Relabel every word's strand indices by `perm`.
    pub fn relabeled(&self, perm: &Permutation) -> Self {
        let mut out = Self::zero(self.strand_count, self.truncation);
        for (w, c) in self.terms() {
            out.add_term(w.relabeled(perm), c.clone());
        }
        out
    }

    /// The product `A(b₁) × A(b₂) → A(b₁b₂)`: `other`'s chords live on the
    /// strands of the upper braid, whose bottom positions are the top
    /// positions of `lower`, so its labels are pulled back through the
    /// inverse of `lower`'s permutation before concatenating.
    pub fn stack_over(&self, lower: &BraidWord, other: &Self) -> Self {
        self.stack(&other.relabeled(&lower.permutation().inverse()))
    }

    /// Per-degree ∞-norm of the coefficients.
    pub fn degree_norms(&self) -> Vec<f64> {
        let mut out = vec![0.0f64; self.truncation + 1];
        for (w, c) in self.terms() {
            let m = w.degree();
            out[m] = out[m].max(c.abs_f64());
        }
        out
    }

    /// ∞-norm of the coefficient difference against another element.
    pub fn distance(&self, other: &Self) -> f64 {
        let mut keys: std::collections::BTreeSet<&HorizontalDiagram> =
            self.terms.keys().collect();
        keys.extend(other.terms.keys());
        keys.into_iter()
            .map(|w| self.coefficient(w).add_ref(&other.coefficient(w).neg_ref()).abs_f64())
            .fold(0.0, f64::max)
    }
}

/// The closure map `p : A(b) → A`.
///
/// The circle traverses the strands in closure order (strand 0, then the
/// strand its top connects to, and so on); along each strand the chord
/// endpoints appear by increasing word height. The resulting pairing of
/// circle points is canonicalized, coefficients carried linearly.
pub fn close<S: Scalar>(
    element: &BraidElement<S>,
    braid: &BraidWord,
) -> Result<CircleElement<S>, CloseError> {
    Ok(close_with_stats(element, braid)?.0)
}

/// [`close`] plus the per-degree maximum number of words that landed on a
/// single circle diagram — the factor by which coefficient errors can pile
/// up.
pub fn close_with_stats<S: Scalar>(
    element: &BraidElement<S>,
    braid: &BraidWord,
) -> Result<(CircleElement<S>, Vec<usize>), CloseError> {
    if element.strand_count() != braid.strand_count() {
        return Err(CloseError::StrandMismatch {
            element: element.strand_count(),
            braid: braid.strand_count(),
        });
    }
    let components = braid.closure_components();
    if components != 1 {
        return Err(CloseError::NotAKnot { components });
    }
    let perm = braid.permutation();
    let n = braid.strand_count();
    let mut strand_order = Vec::with_capacity(n);
    let mut s = 0usize;
    for _ in 0..n {
        strand_order.push(s);
        s = perm.image(s);
    }

    let mut out = CircleElement::zero(element.truncation());
    let mut multiplicity: BTreeMap<(usize, CircleDiagram), usize> = BTreeMap::new();
    for (word, coeff) in element.terms() {
        let diagram = close_word(word, &strand_order);
        multiplicity
            .entry((word.degree(), diagram.clone()))
            .and_modify(|c| *c += 1)
            .or_insert(1);
        out.add_term(diagram, coeff.clone());
    }
    let mut per_degree = vec![0usize; element.truncation() + 1];
    for ((m, _), count) in multiplicity {
        per_degree[m] = per_degree[m].max(count);
    }
    Ok((out, per_degree))
}

fn close_word(word: &HorizontalDiagram, strand_order: &[usize]) -> CircleDiagram {
    // circle label of each (strand, height) chord endpoint, in traversal
    // order
    let mut label_of: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    let mut next = 0usize;
    for &strand in strand_order {
        for (height, &(a, b)) in word.pairs().iter().enumerate() {
            if a == strand || b == strand {
                label_of.insert((strand, height), next);
                next += 1;
            }
        }
    }
    let chords: Vec<(usize, usize)> = word
        .pairs()
        .iter()
        .enumerate()
        .map(|(height, &(a, b))| {
            let x = label_of[&(a, height)];
            let y = label_of[&(b, height)];
            (x.min(y), x.max(y))
        })
        .collect();
    CircleDiagram::from_chords(chords).expect("closure of a word is a perfect matching")
}

/// Exact combinatorial check behind the trace property of the closure:
/// closing `e₁·e₂` over `b₁b₂` equals closing `e₂·e₁` over `b₂b₁`.
pub fn trace_swap_check<S: Scalar>(
    e1: &BraidElement<S>,
    e2: &BraidElement<S>,
    b1: &BraidWord,
    b2: &BraidWord,
) -> Result<bool, CloseError> {
    let b12 = b1.concat(b2).expect("strand counts checked by caller");
    let b21 = b2.concat(b1).expect("strand counts checked by caller");
    let left = close(&e1.stack_over(b1, e2), &b12)?;
    let right = close(&e2.stack_over(b2, e1), &b21)?;
    Ok(left == right)
}
