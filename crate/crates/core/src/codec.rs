//! Protection symbols and erasure recovery.
//!
//! Two coefficient rows protect `width` data symbols of one round: an all-ones
//! row (plain parity) and a weighted row whose column `t` is `generator^t`.
//! Any two columns form the matrix
//!
//! ```text
//! [ 1      1     ]
//! [ g^t1   g^t2  ]
//! ```
//!
//! with determinant `g^t1 + g^t2`, nonzero whenever `t1 != t2` and the
//! generator is primitive with `width <= 2^m - 1`. That is what lets a
//! collector recover any two erased data symbols.
//!
//! Decoding first strips the known contributions from a received protection
//! symbol (its *residual*), leaving a 1x1 or 2x2 system over the missing
//! columns only.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::field::{FieldElement, FieldError, FieldSpec, MAX_DEGREE};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CodecError {
    #[error("width {width} needs at least GF(2^{min_m}) for distinct weighted coefficients, field is GF(2^{m})")]
    FieldTooSmall { width: usize, m: u32, min_m: u32 },
    #[error("coefficient rows need width >= 1")]
    ZeroWidth,
    #[error("expected {expected} data symbols, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("rank {0} listed twice")]
    DuplicateRank(usize),
    #[error("rank {rank} outside 0..{width}")]
    RankOutOfRange { rank: usize, width: usize },
    #[error("weighted row is not available in sum-only mode")]
    WeightedRowUnavailable,
    #[error("{missing} unknown(s) but only {available} surviving protection symbol(s)")]
    Unrecoverable { missing: usize, available: usize },
    #[error("a recovery problem needs 1 or 2 missing ranks, got {0}")]
    BadUnknownCount(usize),
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// Which protection row a symbol belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Row {
    Sum,
    Weighted,
}

/// The all-ones row and, in dual mode, the generator-power row.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoefficientRows {
    width: usize,
    row_sum: Vec<FieldElement>,
    row_weighted: Option<Vec<FieldElement>>,
}

/// Smallest m with `2^m - 1 >= width`.
pub fn min_degree_for_width(width: usize) -> u32 {
    let mut m = 1;
    while ((1u64 << m) - 1) < width as u64 {
        m += 1;
    }
    m
}

impl CoefficientRows {
    /// Both rows: `[1, 1, ..., 1]` and `[1, g, g^2, ..., g^(width-1)]`.
    pub fn build(width: usize, field: &FieldSpec) -> Result<Self, CodecError> {
        if width == 0 {
            return Err(CodecError::ZeroWidth);
        }
        if width as u64 > u64::from(field.group_order()) {
            return Err(CodecError::FieldTooSmall {
                width,
                m: field.degree(),
                min_m: min_degree_for_width(width).min(MAX_DEGREE + 1),
            });
        }
        let row_weighted = (0..width as u64).map(|t| field.generator_pow(t)).collect();
        Ok(CoefficientRows {
            width,
            row_sum: vec![FieldElement::ONE; width],
            row_weighted: Some(row_weighted),
        })
    }

    /// Parity row only. Works in any field, including GF(2), and protects
    /// against a single erasure per round.
    pub fn sum_only(width: usize) -> Result<Self, CodecError> {
        if width == 0 {
            return Err(CodecError::ZeroWidth);
        }
        Ok(CoefficientRows {
            width,
            row_sum: vec![FieldElement::ONE; width],
            row_weighted: None,
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn row_sum(&self) -> &[FieldElement] {
        &self.row_sum
    }

    pub fn row_weighted(&self) -> Option<&[FieldElement]> {
        self.row_weighted.as_deref()
    }

    pub fn has_weighted(&self) -> bool {
        self.row_weighted.is_some()
    }

    pub fn row(&self, row: Row) -> Result<&[FieldElement], CodecError> {
        match row {
            Row::Sum => Ok(&self.row_sum),
            Row::Weighted => self.row_weighted().ok_or(CodecError::WeightedRowUnavailable),
        }
    }

    pub fn coefficient(&self, row: Row, rank: usize) -> Result<FieldElement, CodecError> {
        self.check_rank(rank)?;
        Ok(self.row(row)?[rank])
    }

    fn check_rank(&self, rank: usize) -> Result<(), CodecError> {
        if rank < self.width {
            Ok(())
        } else {
            Err(CodecError::RankOutOfRange {
                rank,
                width: self.width,
            })
        }
    }

    /// Linear combination of `data` with one row.
    pub fn encode_row(
        &self,
        field: &FieldSpec,
        data: &[FieldElement],
        row: Row,
    ) -> Result<FieldElement, CodecError> {
        if data.len() != self.width {
            return Err(CodecError::LengthMismatch {
                expected: self.width,
                got: data.len(),
            });
        }
        let coeffs = self.row(row)?;
        data.iter().zip(coeffs).try_fold(FieldElement::ZERO, |acc, (&d, &c)| {
            Ok(field.add(acc, field.try_mul(c, d)?))
        })
    }

    /// `(sum of data, sum of g^t * data[t])`.
    pub fn encode_pair(
        &self,
        field: &FieldSpec,
        data: &[FieldElement],
    ) -> Result<(FieldElement, FieldElement), CodecError> {
        Ok((
            self.encode_row(field, data, Row::Sum)?,
            self.encode_row(field, data, Row::Weighted)?,
        ))
    }

    /// Subtracts the contributions of the known `(rank, value)` pairs from a
    /// received protection symbol.
    pub fn residualize(
        &self,
        field: &FieldSpec,
        received: FieldElement,
        known: &[(usize, FieldElement)],
        row: Row,
    ) -> Result<FieldElement, CodecError> {
        let coeffs = self.row(row)?;
        let mut seen = vec![false; self.width];
        let mut acc = field.check(received)?;
        for &(rank, value) in known {
            self.check_rank(rank)?;
            if std::mem::replace(&mut seen[rank], true) {
                return Err(CodecError::DuplicateRank(rank));
            }
            acc = field.sub(acc, field.try_mul(coeffs[rank], value)?);
        }
        Ok(acc)
    }

    /// Recovers the single missing symbol. Prefers the sum residual, which
    /// needs no inversion.
    pub fn solve_one(
        &self,
        field: &FieldSpec,
        problem: &RecoveryProblem,
    ) -> Result<FieldElement, CodecError> {
        let &[rank] = problem.missing_ranks() else {
            return Err(CodecError::BadUnknownCount(problem.missing_ranks().len()));
        };
        self.check_rank(rank)?;
        if let Some(r) = problem.residual_sum {
            return Ok(r);
        }
        if let Some(r) = problem.residual_weighted {
            let coeff = self.coefficient(Row::Weighted, rank)?;
            return Ok(field.div(r, coeff)?);
        }
        Err(CodecError::Unrecoverable {
            missing: 1,
            available: 0,
        })
    }

    /// Recovers two missing symbols from both residuals, returned in rank
    /// order.
    ///
    /// With `s = x1 + x2` and `w = g^t1 x1 + g^t2 x2`: scale the first
    /// equation by `g^t1` and subtract, giving `(g^t1 + g^t2) x2 = w + g^t1 s`.
    pub fn solve_two(
        &self,
        field: &FieldSpec,
        problem: &RecoveryProblem,
    ) -> Result<(FieldElement, FieldElement), CodecError> {
        let &[t1, t2] = problem.missing_ranks() else {
            return Err(CodecError::BadUnknownCount(problem.missing_ranks().len()));
        };
        let (Some(s), Some(w)) = (problem.residual_sum, problem.residual_weighted) else {
            return Err(CodecError::Unrecoverable {
                missing: 2,
                available: problem.available(),
            });
        };
        let c1 = self.coefficient(Row::Weighted, t1)?;
        let c2 = self.coefficient(Row::Weighted, t2)?;
        let det = field.add(c1, c2);
        let x2 = field.div(field.add(w, field.mul(c1, s)), det)?;
        let x1 = field.add(s, x2);
        Ok((x1, x2))
    }

    /// Solves whichever size of problem was given; values come back in rank
    /// order.
    pub fn solve(
        &self,
        field: &FieldSpec,
        problem: &RecoveryProblem,
    ) -> Result<Vec<FieldElement>, CodecError> {
        match problem.missing_ranks().len() {
            1 => Ok(vec![self.solve_one(field, problem)?]),
            2 => {
                let (a, b) = self.solve_two(field, problem)?;
                Ok(vec![a, b])
            }
            k => Err(CodecError::BadUnknownCount(k)),
        }
    }
}

/// One or two unknown columns plus whichever protection residuals survived.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RecoveryProblem {
    missing_ranks: Vec<usize>,
    residual_sum: Option<FieldElement>,
    residual_weighted: Option<FieldElement>,
}

impl RecoveryProblem {
    /// Ranks are sorted. Fails if there are not 1 or 2 distinct ranks or if
    /// there are fewer residuals than unknowns.
    pub fn new(
        mut missing_ranks: Vec<usize>,
        residual_sum: Option<FieldElement>,
        residual_weighted: Option<FieldElement>,
    ) -> Result<Self, CodecError> {
        missing_ranks.sort_unstable();
        if !(1..=2).contains(&missing_ranks.len()) {
            return Err(CodecError::BadUnknownCount(missing_ranks.len()));
        }
        if let [a, b] = missing_ranks[..] {
            if a == b {
                return Err(CodecError::DuplicateRank(a));
            }
        }
        let problem = RecoveryProblem {
            missing_ranks,
            residual_sum,
            residual_weighted,
        };
        if problem.available() < problem.missing_ranks.len() {
            return Err(CodecError::Unrecoverable {
                missing: problem.missing_ranks.len(),
                available: problem.available(),
            });
        }
        Ok(problem)
    }

    pub fn missing_ranks(&self) -> &[usize] {
        &self.missing_ranks
    }

    pub fn residual_sum(&self) -> Option<FieldElement> {
        self.residual_sum
    }

    pub fn residual_weighted(&self) -> Option<FieldElement> {
        self.residual_weighted
    }

    fn available(&self) -> usize {
        usize::from(self.residual_sum.is_some()) + usize::from(self.residual_weighted.is_some())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldSpec;

    fn gf4() -> FieldSpec {
        FieldSpec::new(2, 0b111, 0b10).unwrap()
    }

    fn gf8() -> FieldSpec {
        FieldSpec::new(3, 0b1011, 0b010).unwrap()
    }

    fn fe(v: u16) -> FieldElement {
        FieldElement::from_raw(v)
    }

    #[test]
    fn rows_width_two_gf4() {
        let f = gf4();
        let rows = CoefficientRows::build(2, &f).unwrap();
        assert_eq!(rows.row_sum(), &[fe(1), fe(1)]);
        assert_eq!(rows.row_weighted().unwrap(), &[fe(1), f.generator()]);
    }

    #[test]
    fn rows_width_one() {
        let rows = CoefficientRows::build(1, &gf8()).unwrap();
        assert_eq!(rows.row_sum(), &[fe(1)]);
        assert_eq!(rows.row_weighted().unwrap(), &[fe(1)]);
    }

    #[test]
    fn rows_width_four_gf8() {
        let f = gf8();
        // repeated multiplication by the generator
        let mut expect = vec![];
        let mut acc = FieldElement::ONE;
        for _ in 0..4 {
            expect.push(acc);
            acc = f.mul(acc, f.generator());
        }
        assert_eq!(expect, vec![fe(0b001), fe(0b010), fe(0b100), fe(0b011)]);
        let rows = CoefficientRows::build(4, &f).unwrap();
        assert_eq!(rows.row_weighted().unwrap(), &expect[..]);
    }

    #[test]
    fn rows_reject_oversized_width() {
        let f = gf8();
        assert!(CoefficientRows::build(7, &f).is_ok());
        assert_eq!(
            CoefficientRows::build(8, &f),
            Err(CodecError::FieldTooSmall { width: 8, m: 3, min_m: 4 })
        );
        assert_eq!(CoefficientRows::build(0, &f), Err(CodecError::ZeroWidth));
        assert!(matches!(
            CoefficientRows::build(2, &FieldSpec::binary()),
            Err(CodecError::FieldTooSmall { min_m: 2, .. })
        ));
        assert_eq!(min_degree_for_width(255), 8);
        assert_eq!(min_degree_for_width(256), 9);
    }

    #[test]
    fn encode_examples() {
        let f = gf4();
        let a = f.generator();
        let rows = CoefficientRows::build(2, &f).unwrap();
        assert_eq!(rows.encode_pair(&f, &[fe(0), fe(0)]).unwrap(), (fe(0), fe(0)));
        // alpha^2 = alpha + 1, so 1 + alpha*alpha = alpha
        assert_eq!(rows.encode_pair(&f, &[fe(1), a]).unwrap(), (fe(0b11), a));
        for d in f.elements() {
            assert_eq!(rows.encode_pair(&f, &[d, fe(0)]).unwrap(), (d, d));
        }
        assert_eq!(
            rows.encode_pair(&f, &[fe(1)]),
            Err(CodecError::LengthMismatch { expected: 2, got: 1 })
        );
    }

    #[test]
    fn residual_examples() {
        let f = gf8();
        let rows = CoefficientRows::build(3, &f).unwrap();
        let data = [fe(5), fe(3), fe(6)];
        let (s, w) = rows.encode_pair(&f, &data).unwrap();
        let all: Vec<_> = data.iter().copied().enumerate().collect();
        assert_eq!(rows.residualize(&f, s, &all, Row::Sum).unwrap(), fe(0));
        assert_eq!(rows.residualize(&f, w, &all, Row::Weighted).unwrap(), fe(0));

        let known = [(0, data[0]), (1, data[1])];
        assert_eq!(rows.residualize(&f, s, &known, Row::Sum).unwrap(), data[2]);
        // oracle: re-encode with the missing entry alone
        let alone = rows.encode_row(&f, &[fe(0), fe(0), data[2]], Row::Weighted).unwrap();
        assert_eq!(rows.residualize(&f, w, &known, Row::Weighted).unwrap(), alone);
        assert_eq!(alone, f.mul(f.generator_pow(2), data[2]));

        assert_eq!(
            rows.residualize(&f, s, &[(1, fe(1)), (1, fe(2))], Row::Sum),
            Err(CodecError::DuplicateRank(1))
        );
        assert!(matches!(
            rows.residualize(&f, s, &[(3, fe(1))], Row::Sum),
            Err(CodecError::RankOutOfRange { .. })
        ));
    }

    #[test]
    fn solve_one_examples() {
        let f = gf8();
        let rows = CoefficientRows::build(4, &f).unwrap();

        let p = RecoveryProblem::new(vec![3], Some(fe(6)), None).unwrap();
        assert_eq!(rows.solve_one(&f, &p).unwrap(), fe(6));

        // weighted-only, rank 2: search every candidate that re-encodes to 0b110
        let candidates: Vec<_> = f
            .elements()
            .filter(|&x| f.mul(f.generator_pow(2), x) == fe(0b110))
            .collect();
        assert_eq!(candidates.len(), 1);
        let p = RecoveryProblem::new(vec![2], None, Some(fe(0b110))).unwrap();
        let got = rows.solve_one(&f, &p).unwrap();
        assert_eq!(got, candidates[0]);
        assert_eq!(got, f.mul(fe(0b110), f.inv(fe(0b100)).unwrap()));

        let p = RecoveryProblem::new(vec![0], None, Some(fe(5))).unwrap();
        assert_eq!(rows.solve_one(&f, &p).unwrap(), fe(5));
    }

    #[test]
    fn solve_two_gf4_example() {
        let f = gf4();
        let a = f.generator();
        let rows = CoefficientRows::build(2, &f).unwrap();
        let (s, w) = (fe(0b11), a);
        // oracle: every candidate pair satisfying both equations
        let mut sols = vec![];
        for x0 in f.elements() {
            for x1 in f.elements() {
                if rows.encode_pair(&f, &[x0, x1]).unwrap() == (s, w) {
                    sols.push((x0, x1));
                }
            }
        }
        assert_eq!(sols, vec![(fe(1), a)]);
        let p = RecoveryProblem::new(vec![1, 0], Some(s), Some(w)).unwrap();
        assert_eq!(rows.solve_two(&f, &p).unwrap(), (fe(1), a));

        let p = RecoveryProblem::new(vec![0, 1], Some(fe(0)), Some(fe(0))).unwrap();
        assert_eq!(rows.solve_two(&f, &p).unwrap(), (fe(0), fe(0)));
    }

    #[test]
    fn decode_matrix_for_alpha_and_alpha_cubed() {
        // Columns with weighted coefficients alpha and alpha^3 sit at ranks 1 and 3.
        let f = FieldSpec::default();
        let rows = CoefficientRows::build(4, &f).unwrap();
        let a = f.generator();
        assert_eq!(rows.coefficient(Row::Weighted, 1).unwrap(), a);
        assert_eq!(rows.coefficient(Row::Weighted, 3).unwrap(), f.pow(a, 3));
        assert_eq!(rows.coefficient(Row::Sum, 1).unwrap(), FieldElement::ONE);
        assert_eq!(rows.coefficient(Row::Sum, 3).unwrap(), FieldElement::ONE);

        let (x2, x4) = (fe(0x5a), fe(0xc3));
        let s = f.add(x2, x4);
        let w = f.add(f.mul(a, x2), f.mul(f.pow(a, 3), x4));
        let p = RecoveryProblem::new(vec![1, 3], Some(s), Some(w)).unwrap();
        assert_eq!(rows.solve_two(&f, &p).unwrap(), (x2, x4));
    }

    #[test]
    fn problem_validation() {
        assert_eq!(
            RecoveryProblem::new(vec![1, 1], Some(fe(0)), Some(fe(0))),
            Err(CodecError::DuplicateRank(1))
        );
        assert_eq!(
            RecoveryProblem::new(vec![0, 1], Some(fe(0)), None),
            Err(CodecError::Unrecoverable { missing: 2, available: 1 })
        );
        assert_eq!(
            RecoveryProblem::new(vec![0], None, None),
            Err(CodecError::Unrecoverable { missing: 1, available: 0 })
        );
        assert_eq!(
            RecoveryProblem::new(vec![], Some(fe(0)), None),
            Err(CodecError::BadUnknownCount(0))
        );
        assert_eq!(
            RecoveryProblem::new(vec![0, 1, 2], Some(fe(0)), Some(fe(0))),
            Err(CodecError::BadUnknownCount(3))
        );
    }

    #[test]
    fn sum_only_rows() {
        let f = FieldSpec::binary();
        let rows = CoefficientRows::sum_only(6).unwrap();
        assert!(!rows.has_weighted());
        let data = [fe(1), fe(0), fe(1), fe(1), fe(0), fe(1)];
        let s = rows.encode_row(&f, &data, Row::Sum).unwrap();
        assert_eq!(s, fe(0));
        assert_eq!(rows.encode_pair(&f, &data), Err(CodecError::WeightedRowUnavailable));
        for t in 0..6 {
            let known: Vec<_> = (0..6).filter(|&r| r != t).map(|r| (r, data[r])).collect();
            let r = rows.residualize(&f, s, &known, Row::Sum).unwrap();
            let p = RecoveryProblem::new(vec![t], Some(r), None).unwrap();
            assert_eq!(rows.solve_one(&f, &p).unwrap(), data[t]);
        }
    }
}
