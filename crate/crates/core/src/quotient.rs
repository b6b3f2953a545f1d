//! The algebra of circle diagrams modulo the 4T relations, the ideal
//! generated by `r±`, and the projection onto the quotient.
//!
//! # 4T relations
//!
//! For a core diagram with `m−1` chords, a fixed chord with endpoints
//! `u₁, u₂`, and a moving chord with one endpoint `w` parked in some arc,
//! the other endpoint of the moving chord is inserted immediately
//! before/after `u₁` and before/after `u₂`. The relation is
//!
//! ```text
//!   D(before u₁) − D(after u₁) + D(before u₂) − D(after u₂) = 0,
//! ```
//!
//! i.e. sliding the moving endpoint across `u₁` changes the diagram by the
//! negative of sliding it across `u₂`. Every instance over every canonical
//! core spans the relation subspace at degree `m`. With this convention the
//! relation span has rank 0 at degree 2 and the quotient dimensions come
//! out as 1, 1, 2, 3, 6 for degrees 0..4.
//!
//! # The ideal
//!
//! `r± = pZ(σ₁^{±1}) − ○` have no degree-0 term, so the image of the ideal
//! `I = r₊A + r₋A` in the degree-`≤N` truncation is spanned by the
//! truncated products `r± · D` over canonical diagrams `D` of degree
//! `< N`. The ideal is *not* graded — its echelon basis contains rows
//! mixing degrees (e.g. `○₁ + (1/24)○₃ + …`) — so it is kept as a single
//! filtered subspace over the degree-ordered concatenation of the
//! 4T-quotient coordinates, and reductions run on whole concatenated
//! vectors. Per-degree ranks are read off the pivot positions.

use crate::circle::{enumerate_diagrams, r_plus_minus, CircleDiagram, CircleElement};
use crate::exact::{LinAlgError, RationalMatrix, SubspaceBasis};
use crate::scalar::{rational_to_complex, Complex, Rational, Scalar};
use num::Zero;
use std::collections::{BTreeMap, BTreeSet};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum QuotientError {
    #[error("element has degree {got}, bases only track degree ≤ {max}")]
    DegreeOverflow { got: usize, max: usize },
    #[error(transparent)]
    LinAlg(#[from] LinAlgError),
}

/// Where the moving endpoint of a 4T instance is inserted.
#[derive(Debug, Clone, Copy)]
enum MovingEnd {
    Before(usize),
    After(usize),
}

/// Insert the moving chord `(w, v)` into `core`: `w` in the arc after point
/// `host_arc`, `v` immediately before/after its anchor point. Returns the
/// canonicalized degree-`(core.degree + 1)` diagram.
fn insert_moving_chord(
    core: &CircleDiagram,
    host_arc: usize,
    v: MovingEnd,
) -> CircleDiagram {
    let points = core.points();
    let mut position_of = vec![0usize; points];
    let mut w_pos = 0usize;
    let mut v_pos = 0usize;
    let mut cursor = 0usize;
    for p in 0..points {
        if matches!(v, MovingEnd::Before(u) if u == p) {
            v_pos = cursor;
            cursor += 1;
        }
        position_of[p] = cursor;
        cursor += 1;
        if matches!(v, MovingEnd::After(u) if u == p) {
            v_pos = cursor;
            cursor += 1;
        }
        if host_arc == p {
            w_pos = cursor;
            cursor += 1;
        }
    }
    debug_assert_eq!(cursor, points + 2);
    let mut chords: Vec<(usize, usize)> = core
        .chords()
        .iter()
        .map(|&(a, b)| (position_of[a], position_of[b]))
        .collect();
    chords.push((w_pos.min(v_pos), w_pos.max(v_pos)));
    CircleDiagram::from_chords(chords).expect("insertion preserves the matching property")
}

fn relation_instance(
    core: &CircleDiagram,
    host_arc: usize,
    index: &BTreeMap<CircleDiagram, usize>,
    terms: &[(MovingEnd, i64); 4],
) -> Vec<Rational> {
    let mut vector = vec![Rational::zero(); index.len()];
    for &(end, sign) in terms {
        let diagram = insert_moving_chord(core, host_arc, end);
        let col = index[&diagram];
        vector[col] += crate::exact::ratio(sign, 1);
    }
    vector
}

fn relation_vectors(
    m: usize,
    make_terms: impl Fn((usize, usize)) -> [(MovingEnd, i64); 4],
) -> Vec<Vec<Rational>> {
    if m < 2 {
        return Vec::new();
    }
    let diagrams = enumerate_diagrams(m);
    let index: BTreeMap<CircleDiagram, usize> = diagrams
        .iter()
        .cloned()
        .enumerate()
        .map(|(i, d)| (d, i))
        .collect();
    let mut seen: BTreeSet<Vec<Rational>> = BTreeSet::new();
    for core in enumerate_diagrams(m - 1) {
        for &chord in core.chords() {
            for host_arc in 0..core.points() {
                let v = relation_instance(&core, host_arc, &index, &make_terms(chord));
                if v.iter().any(|x| !x.is_zero()) {
                    seen.insert(v);
                }
            }
        }
    }
    seen.into_iter().collect()
}

/// All 4T relation vectors at degree `m`, as coordinates over
/// [`enumerate_diagrams`]`(m)` in order. Duplicates removed.
pub fn generate_4t(m: usize) -> Vec<Vec<Rational>> {
    relation_vectors(m, |(u1, u2)| {
        [
            (MovingEnd::Before(u1), 1),
            (MovingEnd::After(u1), -1),
            (MovingEnd::Before(u2), 1),
            (MovingEnd::After(u2), -1),
        ]
    })
}

/// The same relations written with the grouping swapped at the second
/// endpoint and signs `(+,−,−,+)`. Spans the same subspace as
/// [`generate_4t`]; kept as a convention regression check.
pub fn generate_4t_variant(m: usize) -> Vec<Vec<Rational>> {
    relation_vectors(m, |(u1, u2)| {
        [
            (MovingEnd::Before(u1), 1),
            (MovingEnd::After(u1), -1),
            (MovingEnd::After(u2), -1),
            (MovingEnd::Before(u2), 1),
        ]
    })
}

/// Basis data for one degree of the diagram algebra.
#[derive(Debug, Clone)]
pub struct DegreeBasis {
    diagrams: Vec<CircleDiagram>,
    index: BTreeMap<CircleDiagram, usize>,
    relations: SubspaceBasis,
    free_columns: Vec<usize>,
}

impl DegreeBasis {
    fn build(m: usize) -> Self {
        let diagrams = enumerate_diagrams(m);
        let index = diagrams
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, d)| (d, i))
            .collect();
        let rows = generate_4t(m);
        let relations = if rows.is_empty() {
            SubspaceBasis::empty(diagrams.len())
        } else {
            RationalMatrix::from_rows(rows).row_reduce()
        };
        let free_columns = relations.free_columns();
        Self {
            diagrams,
            index,
            relations,
            free_columns,
        }
    }

    pub fn diagrams(&self) -> &[CircleDiagram] {
        &self.diagrams
    }

    pub fn relations(&self) -> &SubspaceBasis {
        &self.relations
    }

    /// The diagrams whose coordinates survive 4T reduction; they span `A_m`.
    pub fn free_diagrams(&self) -> Vec<&CircleDiagram> {
        self.free_columns.iter().map(|&c| &self.diagrams[c]).collect()
    }

    pub fn free_columns(&self) -> &[usize] {
        &self.free_columns
    }

    pub fn diagram_count(&self) -> usize {
        self.diagrams.len()
    }

    pub fn relation_rank(&self) -> usize {
        self.relations.rank()
    }

    /// dim A_m = diagrams − 4T rank.
    pub fn quotient_dim(&self) -> usize {
        self.diagrams.len() - self.relations.rank()
    }
}

/// Per-degree canonical bases of `A_m` after 4T reduction, up to a
/// truncation degree.
#[derive(Debug, Clone)]
pub struct GradedBasis {
    truncation: usize,
    degrees: Vec<DegreeBasis>,
}

impl GradedBasis {
    pub fn build(truncation: usize) -> Self {
        Self {
            truncation,
            degrees: (0..=truncation).map(DegreeBasis::build).collect(),
        }
    }

    pub fn truncation(&self) -> usize {
        self.truncation
    }

    pub fn degree(&self, m: usize) -> &DegreeBasis {
        &self.degrees[m]
    }

    pub fn dims(&self) -> Vec<usize> {
        self.degrees.iter().map(DegreeBasis::quotient_dim).collect()
    }

    /// Ambient coefficient vector of the degree-`m` part of `e`.
    pub fn ambient_vector<S: Scalar>(&self, m: usize, e: &CircleElement<S>) -> Vec<S> {
        let deg = &self.degrees[m];
        let mut v = vec![S::zero(); deg.diagrams.len()];
        for (d, c) in e.terms() {
            if d.degree() == m {
                v[deg.index[d]] = c.clone();
            }
        }
        v
    }

    /// 4T-reduce the degree-`m` part of `e` and restrict to the free
    /// (non-pivot) coordinates. Returns the coordinates and the reduction's
    /// reported amplification factor.
    pub fn reduce_degree<S: ProjectScalar>(
        &self,
        m: usize,
        e: &CircleElement<S>,
    ) -> Result<(Vec<S>, f64), QuotientError> {
        let deg = &self.degrees[m];
        let ambient = self.ambient_vector(m, e);
        let (reduced, amp) = S::reduce_in(&deg.relations, &ambient)?;
        let free = deg
            .free_columns
            .iter()
            .map(|&c| reduced[c].clone())
            .collect();
        Ok((free, amp))
    }

    /// Total length of the concatenated degree-ordered free coordinates.
    pub fn concat_len(&self) -> usize {
        self.degrees.iter().map(DegreeBasis::quotient_dim).sum()
    }

    /// Offsets of each degree block inside the concatenated coordinates.
    pub fn offsets(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.truncation + 2);
        let mut acc = 0;
        for d in &self.degrees {
            out.push(acc);
            acc += d.quotient_dim();
        }
        out.push(acc);
        out
    }

    /// Concatenated 4T-reduced coordinates of `e` over all degrees, plus
    /// per-degree amplification factors.
    pub fn concat_reduced<S: ProjectScalar>(
        &self,
        e: &CircleElement<S>,
    ) -> Result<(Vec<S>, Vec<f64>), QuotientError> {
        if e.max_degree() > self.truncation {
            return Err(QuotientError::DegreeOverflow {
                got: e.max_degree(),
                max: self.truncation,
            });
        }
        let mut concat = Vec::with_capacity(self.concat_len());
        let mut amps = Vec::with_capacity(self.truncation + 1);
        for m in 0..=self.truncation {
            let (free, amp) = self.reduce_degree(m, e)?;
            concat.extend(free);
            amps.push(amp);
        }
        Ok((concat, amps))
    }
}

/// Echelon basis of the truncated ideal `Ĩ_N = trunc_N(r₊A + r₋A)` over the
/// degree-ordered concatenation of 4T-quotient coordinates.
#[derive(Debug, Clone)]
pub struct IdealBasis {
    truncation: usize,
    basis: SubspaceBasis,
    offsets: Vec<usize>,
}

impl IdealBasis {
    /// Build from the standard generators `r₊`, `r₋`.
    pub fn build(graded: &GradedBasis) -> Self {
        let n = graded.truncation();
        let generators: Vec<CircleElement<Rational>> = [1, -1]
            .into_iter()
            .map(|sign| r_plus_minus(sign, n))
            .collect();
        Self::build_from_generators(graded, &generators)
    }

    /// Build the span of `trunc_N(g · D)` over the given generators `g` and
    /// all canonical diagrams `D` of degree `< N`.
    pub fn build_from_generators(
        graded: &GradedBasis,
        generators: &[CircleElement<Rational>],
    ) -> Self {
        let n = graded.truncation();
        let offsets = graded.offsets();
        let mut rows: Vec<Vec<Rational>> = Vec::new();
        for g in generators {
            for d in 0..n {
                for diagram in enumerate_diagrams(d) {
                    let mut factor = CircleElement::zero(n);
                    factor.add_term(diagram, Rational::from(num::BigInt::from(1)));
                    let product = g.product(&factor);
                    let (concat, _) = graded
                        .concat_reduced(&product)
                        .expect("generator products stay within truncation");
                    if concat.iter().any(|x| !x.is_zero()) {
                        rows.push(concat);
                    }
                }
            }
        }
        let basis = if rows.is_empty() {
            SubspaceBasis::empty(graded.concat_len())
        } else {
            RationalMatrix::from_rows(rows).row_reduce()
        };
        Self {
            truncation: n,
            basis,
            offsets,
        }
    }

    pub fn truncation(&self) -> usize {
        self.truncation
    }

    pub fn basis(&self) -> &SubspaceBasis {
        &self.basis
    }

    pub fn offsets(&self) -> &[usize] {
        &self.offsets
    }

    pub fn rank(&self) -> usize {
        self.basis.rank()
    }

    fn degree_of_column(&self, col: usize) -> usize {
        match self.offsets.binary_search(&col) {
            Ok(m) => m.min(self.truncation),
            Err(m) => m - 1,
        }
    }

    /// Number of echelon pivots whose leading coordinate lies in degree `m`
    /// — the rank of the associated graded piece of the ideal.
    pub fn pivots_in_degree(&self, m: usize) -> usize {
        self.basis
            .pivots()
            .iter()
            .filter(|&&p| self.degree_of_column(p) == m)
            .count()
    }
}

/// Scalars a projection can run over: exact rationals or complex doubles.
pub trait ProjectScalar: Scalar {
    fn reduce_in(basis: &SubspaceBasis, v: &[Self]) -> Result<(Vec<Self>, f64), LinAlgError>;
    fn from_rational(q: &Rational) -> Self;
}

impl ProjectScalar for Rational {
    fn reduce_in(basis: &SubspaceBasis, v: &[Self]) -> Result<(Vec<Self>, f64), LinAlgError> {
        Ok((basis.reduce(v)?, 1.0))
    }
    fn from_rational(q: &Rational) -> Self {
        q.clone()
    }
}

impl ProjectScalar for Complex {
    fn reduce_in(basis: &SubspaceBasis, v: &[Self]) -> Result<(Vec<Self>, f64), LinAlgError> {
        basis.reduce_complex(v)
    }
    fn from_rational(q: &Rational) -> Self {
        rational_to_complex(q)
    }
}

/// Coordinates of a class in the quotient `Ã`, per degree, over the free
/// diagram coordinates of the 4T reduction (coordinates hit by an ideal
/// pivot are zero).
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectedClass<S: Scalar> {
    pub truncation: usize,
    /// Per-degree coordinate blocks over [`DegreeBasis::free_diagrams`].
    pub blocks: Vec<Vec<S>>,
    /// Reported per-degree amplification of the 4T reduction (1.0 on the
    /// exact path).
    pub amp_4t: Vec<f64>,
    /// Reported amplification of the ideal reduction.
    pub amp_ideal: f64,
}

impl<S: Scalar> ProjectedClass<S> {
    pub fn degree_block(&self, m: usize) -> &[S] {
        &self.blocks[m]
    }

    /// ∞-norm distance per degree against another class.
    pub fn degree_distances(&self, other: &ProjectedClass<S>) -> Vec<f64> {
        assert_eq!(self.truncation, other.truncation);
        self.blocks
            .iter()
            .zip(&other.blocks)
            .map(|(a, b)| {
                a.iter()
                    .zip(b)
                    .map(|(x, y)| x.add_ref(&y.neg_ref()).abs_f64())
                    .fold(0.0f64, f64::max)
            })
            .collect()
    }
}

impl ProjectedClass<Rational> {
    pub fn to_complex(&self) -> ProjectedClass<Complex> {
        ProjectedClass {
            truncation: self.truncation,
            blocks: self
                .blocks
                .iter()
                .map(|b| b.iter().map(rational_to_complex).collect())
                .collect(),
            amp_4t: self.amp_4t.clone(),
            amp_ideal: self.amp_ideal,
        }
    }
}

/// The pair of exact bases the invariant is computed against.
#[derive(Debug, Clone)]
pub struct QuotientBases {
    graded: GradedBasis,
    ideal: IdealBasis,
}

impl QuotientBases {
    pub fn build(truncation: usize) -> Self {
        let graded = GradedBasis::build(truncation);
        let ideal = IdealBasis::build(&graded);
        Self { graded, ideal }
    }

    pub fn graded(&self) -> &GradedBasis {
        &self.graded
    }

    pub fn ideal(&self) -> &IdealBasis {
        &self.ideal
    }

    pub fn truncation(&self) -> usize {
        self.graded.truncation()
    }

    /// The canonical projection `k`: 4T-reduce per degree, then reduce the
    /// concatenated vector against the ideal.
    pub fn project<S: ProjectScalar>(
        &self,
        e: &CircleElement<S>,
    ) -> Result<ProjectedClass<S>, QuotientError> {
        let (concat, amp_4t) = self.graded.concat_reduced(e)?;
        let (reduced, amp_ideal) = S::reduce_in(self.ideal.basis(), &concat)?;
        let offsets = self.graded.offsets();
        let blocks = (0..=self.truncation())
            .map(|m| reduced[offsets[m]..offsets[m + 1]].to_vec())
            .collect();
        Ok(ProjectedClass {
            truncation: self.truncation(),
            blocks,
            amp_4t,
            amp_ideal,
        })
    }

    /// Exact membership of an element's 4T-reduced image in the truncated
    /// ideal.
    pub fn in_ideal(&self, e: &CircleElement<Rational>) -> Result<bool, QuotientError> {
        let (concat, _) = self.graded.concat_reduced(e)?;
        Ok(self.ideal.basis().contains(&concat)?)
    }

    /// Propagate per-degree ∞-norm error bounds through both reductions.
    ///
    /// The 4T stage stays within a degree: a reduction can add at most the
    /// largest absolute column sum of its basis rows times the incoming
    /// bound. The ideal stage mixes degrees: a pivot at degree `d` injects
    /// error into every column its row touches, weighted by the row entry.
    pub fn propagate_bounds(&self, bounds: &[f64]) -> Vec<f64> {
        let n = self.truncation();
        assert!(bounds.len() > n, "need one bound per degree 0..=N");
        let mut stage1 = Vec::with_capacity(n + 1);
        for m in 0..=n {
            let rel = self.graded.degree(m).relations();
            let grow = rel.column_abs_sum_max(0..rel.ambient_dim());
            stage1.push(bounds[m] * (1.0 + grow));
        }
        let offsets = self.graded.offsets();
        let basis = self.ideal.basis();
        let mut out = stage1.clone();
        for (m, item) in out.iter_mut().enumerate() {
            let mut extra = 0.0f64;
            for col in offsets[m]..offsets[m + 1] {
                let mut sum = 0.0f64;
                for (row, &p) in basis.rows().iter().zip(basis.pivots()) {
                    let w = crate::scalar::rational_to_f64(&row[col]).abs();
                    if w > 0.0 {
                        sum += w * stage1[self.ideal.degree_of_column(p)];
                    }
                }
                extra = extra.max(sum);
            }
            *item += extra;
        }
        out
    }

    /// Per-degree summary: (diagram count, 4T rank, dim A_m, dim Ã_m).
    pub fn dims_table(&self) -> Vec<(usize, usize, usize, usize)> {
        (0..=self.truncation())
            .map(|m| {
                let deg = self.graded.degree(m);
                let dim_a = deg.quotient_dim();
                let dim_quot = dim_a - self.ideal.pivots_in_degree(m);
                (deg.diagram_count(), deg.relation_rank(), dim_a, dim_quot)
            })
            .collect()
    }
}
