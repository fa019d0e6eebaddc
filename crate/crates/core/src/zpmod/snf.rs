//! Smith normal form over the chain ring Z/p^s and the kernel, cokernel and
//! subquotient computations built on it.
//!
//! Z/p^s is local, so every nonzero entry is p^v times a unit and the entry of
//! least valuation divides everything else. Elimination therefore never needs
//! gcd steps: pick the entry of minimal valuation (ties: smallest row, then
//! smallest column), move it to the diagonal, normalize it to exactly p^v and
//! clear its row and column.

use serde::{Deserialize, Serialize};

use super::matrix::Matrix;
use super::ring::RingSpec;

/// An invertible matrix stored together with its inverse.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Invertible {
    pub matrix: Matrix,
    pub inverse: Matrix,
}

impl Invertible {
    pub fn identity(n: usize) -> Self {
        Invertible {
            matrix: Matrix::identity(n),
            inverse: Matrix::identity(n),
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    /// Checks `matrix · inverse = inverse · matrix = 1` over the ring.
    pub fn is_consistent(&self, ring: &RingSpec) -> bool {
        let id = Matrix::identity(self.dim());
        self.matrix.mul(ring, &self.inverse) == id && self.inverse.mul(ring, &self.matrix) == id
    }
}

/// `U · A · V = D` with `D` diagonal, `D[i][i] = p^diagonal[i]`
/// (valuation `s` encodes a zero entry).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SnfResult {
    pub u: Invertible,
    pub v: Invertible,
    pub diagonal: Vec<u32>,
}

impl SnfResult {
    /// Number of diagonal entries that are units, i.e. the rank of A mod p.
    pub fn unit_rank(&self) -> usize {
        self.diagonal.iter().take_while(|&&v| v == 0).count()
    }

    /// Number of nonzero diagonal entries.
    pub fn nonzero_count(&self, ring: &RingSpec) -> usize {
        self.diagonal.iter().filter(|&&v| v < ring.s()).count()
    }

    /// The diagonal matrix D with the shape of the original input.
    pub fn diagonal_matrix(&self, ring: &RingSpec) -> Matrix {
        let mut d = Matrix::zeros(self.u.dim(), self.v.dim());
        for (i, &v) in self.diagonal.iter().enumerate() {
            if v < ring.s() {
                d[(i, i)] = ring.pow_p(v);
            }
        }
        d
    }
}

/// Deterministic Smith normal form of `a` over `ring`.
pub fn smith_normal_form_matrix(ring: &RingSpec, a: &Matrix) -> SnfResult {
    let (rows, cols) = (a.rows(), a.cols());
    let mut d = a.reduced(ring.modulus());
    let mut u = Matrix::identity(rows);
    let mut u_inv = Matrix::identity(rows);
    let mut v = Matrix::identity(cols);
    let mut v_inv = Matrix::identity(cols);
    let n = rows.min(cols);
    let mut diagonal = vec![ring.s(); n];

    for k in 0..n {
        // pivot: minimal valuation, then smallest row, then smallest column
        let mut best: Option<(u32, usize, usize)> = None;
        for i in k..rows {
            for j in k..cols {
                let x = d[(i, j)];
                if x == 0 {
                    continue;
                }
                let val = ring.valuation(x);
                if best.is_none_or(|(bv, _, _)| val < bv) {
                    best = Some((val, i, j));
                    if val == 0 {
                        break;
                    }
                }
            }
            if matches!(best, Some((0, _, _))) {
                break;
            }
        }
        let Some((val, pi, pj)) = best else { break };

        d.swap_rows(k, pi);
        u.swap_rows(k, pi);
        u_inv.swap_cols(k, pi);
        d.swap_cols(k, pj);
        v.swap_cols(k, pj);
        v_inv.swap_rows(k, pj);

        let (_, unit) = ring.split_unit(d[(k, k)]);
        let w = ring.inv(unit).expect("unit part is invertible");
        d.scale_row(ring, k, w);
        u.scale_row(ring, k, w);
        u_inv.scale_col(ring, k, unit);
        debug_assert_eq!(d[(k, k)], ring.pow_p(val));

        let pv = ring.pow_p(val);
        for i in 0..rows {
            if i == k || d[(i, k)] == 0 {
                continue;
            }
            let c = d[(i, k)] / pv;
            let neg = ring.neg(c);
            d.add_row_multiple(ring, i, k, neg);
            u.add_row_multiple(ring, i, k, neg);
            u_inv.add_col_multiple(ring, k, i, c);
        }
        for j in 0..cols {
            if j == k || d[(k, j)] == 0 {
                continue;
            }
            let c = d[(k, j)] / pv;
            let neg = ring.neg(c);
            d.add_col_multiple(ring, j, k, neg);
            v.add_col_multiple(ring, j, k, neg);
            v_inv.add_row_multiple(ring, k, j, c);
        }
        diagonal[k] = val;
    }

    SnfResult {
        u: Invertible {
            matrix: u,
            inverse: u_inv,
        },
        v: Invertible {
            matrix: v,
            inverse: v_inv,
        },
        diagonal,
    }
}

/// Rank of `a` reduced mod p.
pub fn rank_mod_p(ring: &RingSpec, a: &Matrix) -> usize {
    let field = RingSpec::new(ring.p(), 1).expect("p is prime");
    smith_normal_form_matrix(&field, &a.reduced(ring.p())).unit_rank()
}

/// Columns generating the kernel of `a : (Z/p^s)^cols → (Z/p^s)^rows`.
pub fn kernel_generators(ring: &RingSpec, a: &Matrix) -> Matrix {
    let snf = smith_normal_form_matrix(ring, a);
    let cols = a.cols();
    let mut gens = Vec::new();
    for j in 0..cols {
        let val = snf.diagonal.get(j).copied().unwrap_or(ring.s());
        if val == 0 {
            continue;
        }
        // y_j ranges over p^(s - val) Z/p^s
        let scale = ring.pow_p(ring.s() - val);
        let col: Vec<u64> = snf
            .v
            .matrix
            .column(j)
            .into_iter()
            .map(|x| ring.mul(x, scale))
            .collect();
        if col.iter().any(|&x| x != 0) {
            gens.push(col);
        }
    }
    Matrix::from_columns(cols, &gens)
}

/// Summand exponents of `(Z/p^s)^rows / colspan(a)`, sorted descending.
pub fn cokernel_exponents(ring: &RingSpec, a: &Matrix) -> Vec<u32> {
    let snf = smith_normal_form_matrix(ring, a);
    let mut exps: Vec<u32> = snf.diagonal.iter().copied().filter(|&v| v > 0).collect();
    exps.extend(std::iter::repeat_n(ring.s(), a.rows().saturating_sub(a.cols())));
    exps.sort_unstable_by(|a, b| b.cmp(a));
    exps
}

/// The relation matrix `diag(p^t_i)` presenting `⊕ Z/p^t_i` as a quotient of a
/// free module.
pub fn relation_matrix(ring: &RingSpec, exponents: &[u32]) -> Matrix {
    let n = exponents.len();
    let mut m = Matrix::zeros(n, n);
    for (i, &t) in exponents.iter().enumerate() {
        if t < ring.s() {
            m[(i, i)] = ring.pow_p(t);
        }
    }
    m
}

/// Structure of `(span(big) + R) / (span(small) + R)` inside the ambient
/// module `N = ⊕ Z/p^{t_i}` (`R` its relation submodule). Requires
/// `span(small) ⊆ span(big) + R`; returns exponents sorted descending.
pub fn span_quotient(ring: &RingSpec, ambient: &[u32], big: &Matrix, small: &Matrix) -> Vec<u32> {
    let n = ambient.len();
    assert_eq!(big.rows(), n);
    assert_eq!(small.rows(), n);
    let a = big.cols();
    if a == 0 {
        return Vec::new();
    }
    // {c : big·c ∈ span(small) + R} is the projection of ker [big | small | R];
    // free summands contribute no relations
    let relations: Vec<Vec<u64>> = ambient
        .iter()
        .enumerate()
        .filter(|(_, &t)| t < ring.s())
        .map(|(i, &t)| {
            let mut c = vec![0; n];
            c[i] = ring.pow_p(t);
            c
        })
        .collect();
    let stacked = big.hcat(small).hcat(&Matrix::from_columns(n, &relations));
    let ker = kernel_generators(ring, &stacked);
    let projected = ker.top_rows(a);
    cokernel_exponents(ring, &projected)
}

/// Structure of the submodule of `⊕ Z/p^{t_i}` generated by the columns of `gens`.
pub fn submodule_exponents(ring: &RingSpec, ambient: &[u32], gens: &Matrix) -> Vec<u32> {
    if ambient.iter().all(|&t| t == ring.s()) {
        return free_span(ring, gens).0;
    }
    span_quotient(ring, ambient, gens, &Matrix::zeros(ambient.len(), 0))
}

/// Span of the columns of `gens` inside a free module: summand exponents
/// (descending) and matching generators, `p^{v_i}` times the i-th column of
/// `U⁻¹`, so that generator i has order exactly `p^{exps[i]}`.
pub fn free_span(ring: &RingSpec, gens: &Matrix) -> (Vec<u32>, Vec<Vec<u64>>) {
    let snf = smith_normal_form_matrix(ring, gens);
    let mut exps = Vec::new();
    let mut basis = Vec::new();
    for (i, &v) in snf.diagonal.iter().enumerate() {
        if v >= ring.s() {
            break;
        }
        exps.push(ring.s() - v);
        let scale = ring.pow_p(v);
        basis.push(snf.u.inverse.column(i).into_iter().map(|x| ring.mul(x, scale)).collect());
    }
    (exps, basis)
}
