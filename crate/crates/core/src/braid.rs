//! Braid words on `n` strands: parsing, Markov moves, permutations and
//! closure component counts.
//!
//! A braid word is a bottom-to-top sequence of elementary crossings
//! `σ_i^{±1}`. The text format is whitespace-separated signed integers:
//! `"1 1 1"` is `σ₁³`, `"1 -2"` is `σ₁σ₂⁻¹`. Positive sign means the two
//! strands circle halfway round each other anticlockwise (an overcrossing),
//! negative clockwise.

use std::fmt;
use thiserror::Error;

/// One elementary crossing: generator index `i` (1-based, `1 ≤ i ≤ n−1`)
/// and sign.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Letter {
    pub index: usize,
    pub sign: i8,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseBraidError {
    #[error("strand count must be at least 1, got {0}")]
    BadStrandCount(usize),
    #[error("token {position}: '{token}' is not an integer")]
    NotAnInteger { position: usize, token: String },
    #[error("token {position}: generator index 0 is not allowed")]
    ZeroToken { position: usize },
    #[error("token {position}: index {index} out of range (must satisfy |index| <= {max})")]
    IndexOutOfRange {
        position: usize,
        index: i64,
        max: usize,
    },
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BraidError {
    #[error("strand counts differ: {left} vs {right}")]
    StrandMismatch { left: usize, right: usize },
}

/// A braid word: strand count plus the bottom-to-top letter sequence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BraidWord {
    strand_count: usize,
    letters: Vec<Letter>,
}

impl BraidWord {
    /// The trivial braid on `n` strands.
    pub fn trivial(strand_count: usize) -> Self {
        assert!(strand_count >= 1, "strand count must be positive");
        Self {
            strand_count,
            letters: Vec::new(),
        }
    }

    pub fn from_letters(strand_count: usize, letters: Vec<Letter>) -> Self {
        assert!(strand_count >= 1, "strand count must be positive");
        for l in &letters {
            assert!(
                l.index >= 1 && l.index < strand_count,
                "letter index {} out of range for {} strands",
                l.index,
                strand_count
            );
            assert!(l.sign == 1 || l.sign == -1, "sign must be ±1");
        }
        Self {
            strand_count,
            letters,
        }
    }

    /// `σ₁^k` on two strands (negative `k` uses the inverse generator).
    pub fn sigma1_power(k: i64) -> Self {
        let sign = if k >= 0 { 1 } else { -1 };
        Self {
            strand_count: 2,
            letters: (0..k.unsigned_abs()).map(|_| Letter { index: 1, sign }).collect(),
        }
    }

    /// Parse the whitespace-separated signed integer format.
    pub fn parse(text: &str, strand_count: usize) -> Result<Self, ParseBraidError> {
        if strand_count < 1 {
            return Err(ParseBraidError::BadStrandCount(strand_count));
        }
        let mut letters = Vec::new();
        for (position, token) in text.split_whitespace().enumerate() {
            let value: i64 = token
                .parse()
                .map_err(|_| ParseBraidError::NotAnInteger {
                    position,
                    token: token.to_string(),
                })?;
            if value == 0 {
                return Err(ParseBraidError::ZeroToken { position });
            }
            let index = value.unsigned_abs() as usize;
            if index > strand_count - 1 {
                return Err(ParseBraidError::IndexOutOfRange {
                    position,
                    index: value,
                    max: strand_count - 1,
                });
            }
            letters.push(Letter {
                index,
                sign: if value > 0 { 1 } else { -1 },
            });
        }
        Ok(Self {
            strand_count,
            letters,
        })
    }

    /// Render back to the text format accepted by [`parse`](Self::parse).
    pub fn render(&self) -> String {
        self.letters
            .iter()
            .map(|l| (l.sign as i64 * l.index as i64).to_string())
            .collect::<Vec<_>>()
            .join(" ")
    }

    pub fn strand_count(&self) -> usize {
        self.strand_count
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// The underlying permutation: strand at bottom position `i` ends at
    /// `permutation().image(i)`. Crossing signs are ignored.
    pub fn permutation(&self) -> Permutation {
        let n = self.strand_count;
        // slot[s] = current position of the strand that started at s.
        let mut slot: Vec<usize> = (0..n).collect();
        for l in &self.letters {
            let a = l.index - 1;
            for s in slot.iter_mut() {
                if *s == a {
                    *s = a + 1;
                } else if *s == a + 1 {
                    *s = a;
                }
            }
        }
        Permutation::from_images(slot)
    }

    /// Number of components of the braid closure; `1` means the closure is
    /// a knot.
    pub fn closure_components(&self) -> usize {
        self.permutation().cycle_count()
    }

    /// `b₂` stacked on top of `self`. Strand counts must agree.
    pub fn concat(&self, other: &BraidWord) -> Result<BraidWord, BraidError> {
        if self.strand_count != other.strand_count {
            return Err(BraidError::StrandMismatch {
                left: self.strand_count,
                right: other.strand_count,
            });
        }
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Ok(BraidWord {
            strand_count: self.strand_count,
            letters,
        })
    }

    /// Mirror reflection in the bottom plane: letters reversed, signs
    /// flipped.
    pub fn inverse(&self) -> BraidWord {
        BraidWord {
            strand_count: self.strand_count,
            letters: self
                .letters
                .iter()
                .rev()
                .map(|l| Letter {
                    index: l.index,
                    sign: -l.sign,
                })
                .collect(),
        }
    }

    /// Markov stabilization `b ⇌ (b ⊔ |)σ_n^{±1}`: add a strand on the
    /// right and append one crossing of the last two strands.
    pub fn stabilize(&self, sign: i8) -> BraidWord {
        assert!(sign == 1 || sign == -1, "sign must be ±1");
        let n = self.strand_count + 1;
        let mut letters = self.letters.clone();
        letters.push(Letter { index: n - 1, sign });
        BraidWord {
            strand_count: n,
            letters,
        }
    }
}

impl fmt::Display for BraidWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}

/// A permutation of `{0, …, n−1}` stored by images.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Self {
            images: (0..n).collect(),
        }
    }

    pub fn from_images(images: Vec<usize>) -> Self {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            assert!(i < n && !seen[i], "images must form a bijection");
            seen[i] = true;
        }
        Self { images }
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    /// Image of `i` (0-based).
    pub fn image(&self, i: usize) -> usize {
        self.images[i]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.images.len()];
        for (i, &j) in self.images.iter().enumerate() {
            inv[j] = i;
        }
        Permutation { images: inv }
    }

    /// `self` followed by `other` (apply `self` first).
    pub fn then(&self, other: &Permutation) -> Permutation {
        assert_eq!(self.len(), other.len());
        Permutation {
            images: self.images.iter().map(|&i| other.images[i]).collect(),
        }
    }

    pub fn cycle_count(&self) -> usize {
        let n = self.images.len();
        let mut seen = vec![false; n];
        let mut cycles = 0;
        for start in 0..n {
            if seen[start] {
                continue;
            }
            cycles += 1;
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                i = self.images[i];
            }
        }
        cycles
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_trefoil_word() {
        let b = BraidWord::parse("1 1 1", 2).unwrap();
        assert_eq!(b.strand_count(), 2);
        assert_eq!(b.len(), 3);
        assert!(b.letters().iter().all(|l| l.index == 1 && l.sign == 1));
    }

    #[test]
    fn parse_empty_is_trivial() {
        let b = BraidWord::parse("", 3).unwrap();
        assert_eq!(b, BraidWord::trivial(3));
    }

    #[test]
    fn parse_errors_carry_token_position() {
        assert_eq!(
            BraidWord::parse("2", 2).unwrap_err(),
            ParseBraidError::IndexOutOfRange {
                position: 0,
                index: 2,
                max: 1
            }
        );
        assert_eq!(
            BraidWord::parse("1 0", 3).unwrap_err(),
            ParseBraidError::ZeroToken { position: 1 }
        );
        assert_eq!(
            BraidWord::parse("1 x", 3).unwrap_err(),
            ParseBraidError::NotAnInteger {
                position: 1,
                token: "x".into()
            }
        );
        assert_eq!(
            BraidWord::parse("", 0).unwrap_err(),
            ParseBraidError::BadStrandCount(0)
        );
    }

    #[test]
    fn single_crossing_swaps() {
        let b = BraidWord::parse("1", 2).unwrap();
        assert_eq!(b.permutation(), Permutation::from_images(vec![1, 0]));
    }

    #[test]
    fn trivial_braid_is_identity() {
        assert_eq!(
            BraidWord::trivial(4).permutation(),
            Permutation::identity(4)
        );
    }

    #[test]
    fn sigma1_sigma2_sigma1_transposes_outer_strands() {
        // σ₁σ₂σ₁ on 3 strands sends 1 ↦ 3, fixes 2 (0-based: 0 ↦ 2, 1 ↦ 1).
        let b = BraidWord::parse("1 2 1", 3).unwrap();
        assert_eq!(b.permutation(), Permutation::from_images(vec![2, 1, 0]));
    }

    #[test]
    fn closure_component_counts() {
        assert_eq!(BraidWord::parse("1 1 1", 2).unwrap().closure_components(), 1);
        assert_eq!(BraidWord::parse("1 1", 2).unwrap().closure_components(), 2);
        assert_eq!(BraidWord::parse("1 2 1", 3).unwrap().closure_components(), 2);
    }

    #[test]
    fn concat_and_unit() {
        let a = BraidWord::parse("1", 3).unwrap();
        let b = BraidWord::parse("2", 3).unwrap();
        assert_eq!(a.concat(&b).unwrap().render(), "1 2");
        assert_eq!(a.concat(&BraidWord::trivial(3)).unwrap(), a);
        assert!(matches!(
            a.concat(&BraidWord::trivial(2)),
            Err(BraidError::StrandMismatch { left: 3, right: 2 })
        ));
    }

    #[test]
    fn inverse_reverses_and_flips() {
        let b = BraidWord::parse("1 -2", 3).unwrap();
        assert_eq!(b.inverse().render(), "2 -1");
        assert_eq!(BraidWord::parse("1 1 1", 2).unwrap().inverse().render(), "-1 -1 -1");
        assert_eq!(BraidWord::trivial(2).inverse(), BraidWord::trivial(2));
    }

    #[test]
    fn stabilize_appends_new_generator() {
        let b = BraidWord::parse("1 1 1", 2).unwrap();
        let s = b.stabilize(1);
        assert_eq!(s.strand_count(), 3);
        assert_eq!(s.render(), "1 1 1 2");
        let t = BraidWord::trivial(1).stabilize(1);
        assert_eq!(t.render(), "1");
        assert_eq!(t.strand_count(), 2);
        assert_eq!(BraidWord::parse("1", 2).unwrap().stabilize(-1).render(), "1 -2");
    }

    #[test]
    fn permutation_of_concat_composes() {
        let a = BraidWord::parse("1 -2", 3).unwrap();
        let b = BraidWord::parse("2 1", 3).unwrap();
        let ab = a.concat(&b).unwrap();
        assert_eq!(ab.permutation(), a.permutation().then(&b.permutation()));
    }

    #[test]
    fn inverse_permutation_and_cancellation() {
        let b = BraidWord::parse("1 2 -1 2", 3).unwrap();
        assert_eq!(b.inverse().permutation(), b.permutation().inverse());
        let cancel = b.concat(&b.inverse()).unwrap();
        assert_eq!(cancel.permutation(), Permutation::identity(3));
    }

    #[test]
    fn stabilization_preserves_closure_components() {
        for text in ["", "1", "1 1 1", "1 -1", "1 2"] {
            let b = BraidWord::parse(text, 3).unwrap();
            for sign in [1, -1] {
                assert_eq!(
                    b.stabilize(sign).closure_components(),
                    b.closure_components(),
                    "stabilization must splice the new strand into an existing cycle ({text})"
                );
            }
        }
    }

    #[test]
    fn render_parse_roundtrip() {
        for text in ["", "1", "1 -2 1", "-1 -1"] {
            let b = BraidWord::parse(text, 3).unwrap();
            assert_eq!(BraidWord::parse(&b.render(), 3).unwrap(), b);
        }
    }
}
