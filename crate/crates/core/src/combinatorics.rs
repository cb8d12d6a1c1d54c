//! Exact combinatorial kernels shared by the interference computations:
//! matrix permanents, constrained bijection enumeration, and integer
//! compositions.

use itertools::Itertools;
use num_bigint::BigInt;
use num_complex::Complex64;
use thiserror::Error;

use crate::modes::OverlapMatrix;

/// Hard size limits; exceeding them is an error, never a silent truncation.
pub const NAIVE_DIM_LIMIT: usize = 10;
pub const RYSER_DIM_LIMIT: usize = 30;

#[derive(Debug, Error, PartialEq)]
pub enum CombinatoricsError {
    #[error("matrix dim {dim} exceeds limit {limit} for {algorithm}")]
    DimLimit { dim: usize, limit: usize, algorithm: &'static str },
    #[error("matrix must be square and non-empty")]
    BadShape,
    #[error("partition sizes do not match: sources {sources:?}, targets {targets:?}")]
    PartitionMismatch { sources: Vec<usize>, targets: Vec<usize> },
}

/// Row-major square complex matrix, the argument carrier for permanent
/// evaluation.
#[derive(Debug, Clone, PartialEq)]
pub struct SquareComplexMatrix {
    dim: usize,
    entries: Vec<Complex64>,
}

impl SquareComplexMatrix {
    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self, CombinatoricsError> {
        let dim = rows.len();
        if dim == 0 || rows.iter().any(|r| r.len() != dim) {
            return Err(CombinatoricsError::BadShape);
        }
        let entries: Vec<_> = rows.iter().flatten().copied().collect();
        if entries.iter().any(|e| !e.re.is_finite() || !e.im.is_finite()) {
            return Err(CombinatoricsError::BadShape);
        }
        Ok(Self { dim, entries })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.entries[i * self.dim + j]
    }
}

impl From<&OverlapMatrix> for SquareComplexMatrix {
    fn from(g: &OverlapMatrix) -> Self {
        Self { dim: g.dim(), entries: g.entries().to_vec() }
    }
}

/// Permanent by direct sum over all `dim!` permutations.
pub fn permanent_naive(m: &SquareComplexMatrix) -> Result<Complex64, CombinatoricsError> {
    if m.dim > NAIVE_DIM_LIMIT {
        return Err(CombinatoricsError::DimLimit {
            dim: m.dim,
            limit: NAIVE_DIM_LIMIT,
            algorithm: "permanent_naive",
        });
    }
    let mut sum = Complex64::new(0.0, 0.0);
    for perm in (0..m.dim).permutations(m.dim) {
        let mut prod = Complex64::new(1.0, 0.0);
        for (i, &j) in perm.iter().enumerate() {
            prod *= m.get(i, j);
        }
        sum += prod;
    }
    Ok(sum)
}

/// Permanent by Ryser's formula with Gray-code subset iteration,
/// `O(2^n * n)`. The alternating-sign sum is accumulated with Kahan
/// compensation; the subset order is fixed, so the result is deterministic to
/// the last bit.
pub fn permanent_ryser(m: &SquareComplexMatrix) -> Result<Complex64, CombinatoricsError> {
    if m.dim > RYSER_DIM_LIMIT {
        return Err(CombinatoricsError::DimLimit {
            dim: m.dim,
            limit: RYSER_DIM_LIMIT,
            algorithm: "permanent_ryser",
        });
    }
    let n = m.dim;
    let mut row_sums = vec![Complex64::new(0.0, 0.0); n];
    let mut sum = Complex64::new(0.0, 0.0);
    let mut comp = Complex64::new(0.0, 0.0);
    let mut prev_gray: u64 = 0;
    for counter in 1u64..(1u64 << n) {
        let gray = counter ^ (counter >> 1);
        let changed = gray ^ prev_gray;
        let col = changed.trailing_zeros() as usize;
        if gray & changed != 0 {
            for (i, rs) in row_sums.iter_mut().enumerate() {
                *rs += m.get(i, col);
            }
        } else {
            for (i, rs) in row_sums.iter_mut().enumerate() {
                *rs -= m.get(i, col);
            }
        }
        prev_gray = gray;
        let mut prod = Complex64::new(1.0, 0.0);
        for rs in &row_sums {
            prod *= *rs;
        }
        let sign = if (n as u32 - gray.count_ones()) % 2 == 0 { 1.0 } else { -1.0 };
        // Kahan step.
        let y = sign * prod - comp;
        let t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    Ok(sum)
}

/// Exact permanent for integer matrices (Ryser over `BigInt`). Used to certify
/// table values where the Gram entries are exactly 0 or 1.
pub fn permanent_int(rows: &[Vec<i64>]) -> Result<BigInt, CombinatoricsError> {
    let n = rows.len();
    if n == 0 || rows.iter().any(|r| r.len() != n) {
        return Err(CombinatoricsError::BadShape);
    }
    if n > RYSER_DIM_LIMIT {
        return Err(CombinatoricsError::DimLimit {
            dim: n,
            limit: RYSER_DIM_LIMIT,
            algorithm: "permanent_int",
        });
    }
    let mut row_sums = vec![BigInt::from(0); n];
    let mut sum = BigInt::from(0);
    let mut prev_gray: u64 = 0;
    for counter in 1u64..(1u64 << n) {
        let gray = counter ^ (counter >> 1);
        let changed = gray ^ prev_gray;
        let col = changed.trailing_zeros() as usize;
        let add = gray & changed != 0;
        for (i, rs) in row_sums.iter_mut().enumerate() {
            if add {
                *rs += rows[i][col];
            } else {
                *rs -= rows[i][col];
            }
        }
        prev_gray = gray;
        let mut prod = BigInt::from(1);
        for rs in &row_sums {
            prod *= rs;
        }
        if (n as u32 - gray.count_ones()) % 2 == 0 {
            sum += prod;
        } else {
            sum -= prod;
        }
    }
    Ok(sum)
}

/// Index tuple `(i_1, ..., i_r)` with a fixed sum.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Composition {
    pub parts: Vec<u32>,
    pub total: u32,
}

/// All tuples `(i_1..i_r)` with `sum i_j = l` and `0 <= i_j <= caps[j]`,
/// first index varying slowest from its largest feasible value (the order the
/// closed-form visibility sum is written in). Empty when infeasible.
pub fn compositions(l: u32, r: usize, caps: &[u32]) -> Vec<Composition> {
    assert_eq!(caps.len(), r, "caps length must equal r");
    let mut out = Vec::new();
    let mut parts = vec![0u32; r];
    fn recurse(
        pos: usize,
        remaining: u32,
        caps: &[u32],
        parts: &mut Vec<u32>,
        out: &mut Vec<Composition>,
        total: u32,
    ) {
        if pos == caps.len() {
            if remaining == 0 {
                out.push(Composition { parts: parts.clone(), total });
            }
            return;
        }
        let hi = remaining.min(caps[pos]);
        for v in (0..=hi).rev() {
            parts[pos] = v;
            recurse(pos + 1, remaining - v, caps, parts, out, total);
        }
        parts[pos] = 0;
    }
    recurse(0, l, caps, &mut parts, &mut out, l);
    out
}

/// Enumerates every bijection between partitioned sets that respects the
/// partition constraint: part `p` of `sources` maps onto part `p` of
/// `targets`, in every order. Yields each bijection exactly once as
/// `(source, target)` pairs sorted by source within each part.
pub fn constrained_bijections(
    source_parts: &[Vec<usize>],
    target_parts: &[Vec<usize>],
) -> Result<Vec<Vec<(usize, usize)>>, CombinatoricsError> {
    let src_sizes: Vec<_> = source_parts.iter().map(|p| p.len()).collect();
    let tgt_sizes: Vec<_> = target_parts.iter().map(|p| p.len()).collect();
    if src_sizes != tgt_sizes {
        return Err(CombinatoricsError::PartitionMismatch {
            sources: src_sizes,
            targets: tgt_sizes,
        });
    }
    // Per-part target permutations, combined by cartesian product.
    let per_part: Vec<Vec<Vec<usize>>> = target_parts
        .iter()
        .map(|t| t.iter().copied().permutations(t.len()).collect())
        .collect();
    let mut out = Vec::new();
    let mut idx = vec![0usize; per_part.len()];
    loop {
        let mut assignment = Vec::new();
        for (p, sources) in source_parts.iter().enumerate() {
            let targets = &per_part[p][idx[p]];
            for (s, t) in sources.iter().zip(targets.iter()) {
                assignment.push((*s, *t));
            }
        }
        out.push(assignment);
        // Odometer increment.
        let mut pos = per_part.len();
        loop {
            if pos == 0 {
                return Ok(out);
            }
            pos -= 1;
            idx[pos] += 1;
            if idx[pos] < per_part[pos].len() {
                break;
            }
            idx[pos] = 0;
        }
    }
}
