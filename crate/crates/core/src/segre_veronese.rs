//! Coordinates on `V ⊗ S_d(W)` and row generators for the subspaces attached to
//! points of the Segre-Veronese variety `X_{m,n}`.
//!
//! Basis: `e_i ⊗ f^μ` with `i ∈ 0..=m` and `μ` running over degree-`d` exponent
//! vectors of `W = ⟨f_0, …, f_n⟩` in descending lexicographic order (graded lex,
//! all monomials having the same degree). Column id is `i · C(n+d,d) + index(μ)`.
//! The expansion of `v^d` carries multinomial coefficients.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::abundance::binomial;
use crate::error::{Error, Result};
use crate::field_linalg::{DenseMatrix, Fe, PrimeField, SeededRng};

/// Degree-`d` exponent vectors on `n+1` variables, descending lex order.
#[derive(Clone, Debug)]
pub struct MonomialBasis {
    n: usize,
    d: usize,
    exps: Vec<Vec<u32>>,
    index: HashMap<Vec<u32>, usize>,
}

impl MonomialBasis {
    pub fn new(n: usize, d: usize) -> Self {
        let mut exps = Vec::with_capacity(binomial(n + d, d));
        let mut cur = vec![0u32; n + 1];
        fill_exponents(&mut exps, &mut cur, 0, d as u32);
        let index = exps.iter().enumerate().map(|(i, e)| (e.clone(), i)).collect();
        MonomialBasis { n, d, exps, index }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> usize {
        self.d
    }

    pub fn len(&self) -> usize {
        self.exps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exps.is_empty()
    }

    pub fn exponents(&self, idx: usize) -> &[u32] {
        &self.exps[idx]
    }

    pub fn iter(&self) -> impl Iterator<Item = &[u32]> {
        self.exps.iter().map(Vec::as_slice)
    }

    pub fn index_of(&self, mu: &[u32]) -> Option<usize> {
        self.index.get(mu).copied()
    }
}

fn fill_exponents(out: &mut Vec<Vec<u32>>, cur: &mut Vec<u32>, pos: usize, left: u32) {
    if pos + 1 == cur.len() {
        cur[pos] = left;
        out.push(cur.clone());
        return;
    }
    for e in (0..=left).rev() {
        cur[pos] = e;
        fill_exponents(out, cur, pos + 1, left - e);
    }
    cur[pos] = 0;
}

pub fn monomial_basis(n: usize, d: usize) -> MonomialBasis {
    MonomialBasis::new(n, d)
}

/// `|μ|! / Π μ_j!` as an exact integer.
pub fn multinomial(mu: &[u32]) -> u128 {
    let mut acc: u128 = 1;
    let mut total: u128 = 0;
    for &e in mu {
        for k in 1..=e as u128 {
            total += 1;
            acc = acc * total / k;
        }
    }
    acc
}

/// Coefficient of `f^μ` in `v^{|μ|}`: `multinomial(μ) · Π v_j^{μ_j}`.
pub fn eval_power(field: &PrimeField, v: &[Fe], mu: &[u32]) -> Result<Fe> {
    if v.len() != mu.len() {
        return Err(Error::DimensionMismatch(format!(
            "vector of length {} against exponent vector of length {}",
            v.len(),
            mu.len()
        )));
    }
    let mut acc = field.elem((multinomial(mu) % field.modulus() as u128) as u64);
    for (&x, &e) in v.iter().zip(mu) {
        acc = field.mul(acc, field.pow(x, e as u64));
    }
    Ok(acc)
}

/// A point `[u ⊗ v^d]` of `X_{m,n}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Point {
    u: Vec<Fe>,
    v: Vec<Fe>,
}

impl Point {
    pub fn new(u: Vec<Fe>, v: Vec<Fe>) -> Result<Self> {
        if u.iter().all(|x| x.is_zero()) || v.iter().all(|x| x.is_zero()) {
            return Err(Error::ZeroVector);
        }
        Ok(Point { u, v })
    }

    pub fn u(&self) -> &[Fe] {
        &self.u
    }

    pub fn v(&self) -> &[Fe] {
        &self.v
    }
}

/// Coordinate subspaces of `W` a sampled `v` can be confined to.
///
/// `U_L = ⟨f_0, …, f_{n-2}⟩`, `U_M = ⟨f_2, …, f_n⟩`, and the hyperslice
/// `W' = ⟨f_1, …, f_n⟩`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PointConstraint {
    Generic,
    OnL,
    OnM,
    OnLAndM,
    OnHyperslice,
}

impl PointConstraint {
    /// Indices of the coordinates of `v` that may be nonzero.
    pub fn support(self, n: usize) -> Result<Vec<usize>> {
        let range = match self {
            PointConstraint::Generic => Some(0..n + 1),
            PointConstraint::OnL => (n >= 2).then(|| 0..n - 1),
            PointConstraint::OnM => (n >= 2).then(|| 2..n + 1),
            PointConstraint::OnLAndM => (n >= 4).then(|| 2..n - 1),
            PointConstraint::OnHyperslice => (n >= 1).then(|| 1..n + 1),
        };
        range
            .map(|r| r.collect())
            .ok_or(Error::InfeasibleConstraint { constraint: self, n })
    }
}

/// Basis indices of `U_L = ⟨f_0, …, f_{n-2}⟩`; empty when `n < 2`.
pub fn u_l(n: usize) -> Vec<usize> {
    (0..n.saturating_sub(1)).collect()
}

/// Basis indices of `U_M = ⟨f_2, …, f_n⟩`; empty when `n < 2`.
pub fn u_m(n: usize) -> Vec<usize> {
    if n < 2 {
        Vec::new()
    } else {
        (2..=n).collect()
    }
}

/// A column of `V ⊗ S_d(W)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ColumnIndex {
    pub i: usize,
    pub mu: usize,
}

impl ColumnIndex {
    pub fn id(self, basis_len: usize) -> usize {
        self.i * basis_len + self.mu
    }

    pub fn from_id(id: usize, basis_len: usize) -> Self {
        ColumnIndex { i: id / basis_len, mu: id % basis_len }
    }
}

/// The coordinate model of `V ⊗ S_d(W)` for fixed `(m, n, d)`.
#[derive(Clone, Debug)]
pub struct SegreVeronese {
    field: PrimeField,
    m: usize,
    n: usize,
    d: usize,
    basis: MonomialBasis,
    lower: MonomialBasis,
    // raise[ν][j] = index of ν + e_j in `basis`, for ν of degree d-1
    raise: Vec<Vec<usize>>,
    multi: Vec<Fe>,
    multi_lower: Vec<Fe>,
}

impl SegreVeronese {
    pub fn new(field: PrimeField, m: usize, n: usize, d: usize) -> Result<Self> {
        if d == 0 {
            return Err(Error::OutOfRange("degree d must be at least 1".into()));
        }
        let basis = MonomialBasis::new(n, d);
        let lower = MonomialBasis::new(n, d - 1);
        let raise = lower
            .iter()
            .map(|nu| {
                (0..=n)
                    .map(|j| {
                        let mut mu = nu.to_vec();
                        mu[j] += 1;
                        basis.index_of(&mu).expect("raised monomial is in the basis")
                    })
                    .collect()
            })
            .collect();
        let reduce = |mu: &[u32]| field.elem((multinomial(mu) % field.modulus() as u128) as u64);
        let multi = basis.iter().map(reduce).collect();
        let multi_lower = lower.iter().map(reduce).collect();
        Ok(SegreVeronese { field, m, n, d, basis, lower, raise, multi, multi_lower })
    }

    pub fn field(&self) -> &PrimeField {
        &self.field
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn basis(&self) -> &MonomialBasis {
        &self.basis
    }

    /// `(m+1) C(n+d,d)`.
    pub fn ambient_dim(&self) -> usize {
        (self.m + 1) * self.basis.len()
    }

    pub fn column_id(&self, col: ColumnIndex) -> usize {
        col.id(self.basis.len())
    }

    fn check_point(&self, p: &Point) -> Result<()> {
        if p.u.len() != self.m + 1 || p.v.len() != self.n + 1 {
            return Err(Error::DimensionMismatch(format!(
                "point with |u| = {}, |v| = {} on X_{{{},{}}}",
                p.u.len(),
                p.v.len(),
                self.m,
                self.n
            )));
        }
        Ok(())
    }

    fn monomial_values(&self, v: &[Fe], basis: &MonomialBasis, multi: &[Fe]) -> Vec<Fe> {
        let f = &self.field;
        basis
            .iter()
            .zip(multi)
            .map(|(mu, &c)| {
                mu.iter()
                    .zip(v)
                    .fold(c, |acc, (&e, &x)| if e == 0 { acc } else { f.mul(acc, f.pow(x, e as u64)) })
            })
            .collect()
    }

    /// Coordinates of `v^d` in the monomial basis.
    pub fn power_coefficients(&self, v: &[Fe]) -> Vec<Fe> {
        self.monomial_values(v, &self.basis, &self.multi)
    }

    /// `C(p)`: rows `e_i ⊗ v^d` (A block, `m+1` rows) followed by
    /// `u ⊗ v^{d-1} f_j` (B block, `n+1` rows).
    pub fn tangent_rows(&self, p: &Point) -> Result<DenseMatrix> {
        self.check_point(p)?;
        let f = &self.field;
        let b = self.basis.len();
        let mut out = self.y_rows(p)?;
        let lower_vals = self.monomial_values(&p.v, &self.lower, &self.multi_lower);
        let mut row = vec![Fe::ZERO; self.ambient_dim()];
        for j in 0..=self.n {
            row.iter_mut().for_each(|x| *x = Fe::ZERO);
            for (i, &ui) in p.u.iter().enumerate() {
                if ui.is_zero() {
                    continue;
                }
                for (nu, &c) in lower_vals.iter().enumerate() {
                    row[i * b + self.raise[nu][j]] = f.mul(ui, c);
                }
            }
            out.push_row(&row)?;
        }
        Ok(out)
    }

    /// `Y_p = V ⊗ v^d`: row `i` is `e_i ⊗ v^d`.
    pub fn y_rows(&self, p: &Point) -> Result<DenseMatrix> {
        self.check_point(p)?;
        let b = self.basis.len();
        let coeffs = self.power_coefficients(&p.v);
        let mut out = DenseMatrix::zeros(self.m + 1, self.ambient_dim());
        for i in 0..=self.m {
            out.row_mut(i)[i * b..(i + 1) * b].copy_from_slice(&coeffs);
        }
        Ok(out)
    }

    /// Unit rows spanning `V ⊗ S_d(U)` for the coordinate subspace `U ⊆ W`.
    pub fn subspace_rows(&self, u: &[usize]) -> Result<DenseMatrix> {
        if u.is_empty() {
            return Err(Error::OutOfRange("subspace must be nonempty".into()));
        }
        if let Some(&bad) = u.iter().find(|&&j| j > self.n) {
            return Err(Error::OutOfRange(format!("basis index {bad} outside W of dimension {}", self.n + 1)));
        }
        let mut inside = vec![false; self.n + 1];
        u.iter().for_each(|&j| inside[j] = true);
        let b = self.basis.len();
        let supported: Vec<usize> = (0..b)
            .filter(|&mu| {
                self.basis.exponents(mu).iter().enumerate().all(|(j, &e)| e == 0 || inside[j])
            })
            .collect();
        let mut out = DenseMatrix::zeros((self.m + 1) * supported.len(), self.ambient_dim());
        let mut r = 0;
        for i in 0..=self.m {
            for &mu in &supported {
                out[(r, i * b + mu)] = Fe::ONE;
                r += 1;
            }
        }
        Ok(out)
    }

    /// `u` uniform nonzero, `v` uniform nonzero on the constrained coordinates.
    pub fn sample_point(&self, rng: &mut SeededRng, constraint: PointConstraint) -> Result<Point> {
        let support = constraint.support(self.n)?;
        let u = rng.random_vector(&self.field, self.m + 1);
        let v = rng.random_vector_on(&self.field, self.n + 1, &support);
        Point::new(u, v)
    }
}

/// Row generators of a subspace of `V ⊗ S_d(W)`, block by block.
#[derive(Clone, Debug)]
pub struct SpanBuilder {
    field: PrimeField,
    rows: DenseMatrix,
}

impl SpanBuilder {
    pub fn new(model: &SegreVeronese) -> Self {
        SpanBuilder { field: *model.field(), rows: DenseMatrix::with_cols(model.ambient_dim()) }
    }

    pub fn push_block(&mut self, block: &DenseMatrix) -> Result<()> {
        self.rows.stack(block)
    }

    pub fn row_count(&self) -> usize {
        self.rows.rows()
    }

    pub fn cols(&self) -> usize {
        self.rows.cols()
    }

    pub fn rank(&self) -> usize {
        self.rows.rank(&self.field)
    }

    pub fn matrix(&self) -> &DenseMatrix {
        &self.rows
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f() -> PrimeField {
        PrimeField::default_field()
    }

    #[test]
    fn basis_order_and_sizes() {
        let b = monomial_basis(1, 2);
        let got: Vec<Vec<u32>> = b.iter().map(<[u32]>::to_vec).collect();
        assert_eq!(got, vec![vec![2, 0], vec![1, 1], vec![0, 2]]);
        assert_eq!(monomial_basis(3, 2).len(), 10);
        let lin: Vec<Vec<u32>> = monomial_basis(2, 1).iter().map(<[u32]>::to_vec).collect();
        assert_eq!(lin, vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]);
        assert_eq!(monomial_basis(0, 3).len(), 1);
        assert_eq!(monomial_basis(4, 0).len(), 1);
    }

    #[test]
    fn multinomials() {
        assert_eq!(multinomial(&[1, 1]), 2);
        assert_eq!(multinomial(&[2, 1, 1]), 12);
        assert_eq!(multinomial(&[3]), 1);
    }

    #[test]
    fn eval_power_examples() {
        let f = f();
        let e0 = vec![Fe::ONE, Fe::ZERO, Fe::ZERO];
        assert_eq!(eval_power(&f, &e0, &[3, 0, 0]).unwrap(), Fe::ONE);
        assert_eq!(eval_power(&f, &e0, &[2, 1, 0]).unwrap(), Fe::ZERO);
        let ones = vec![Fe::ONE, Fe::ONE];
        assert_eq!(eval_power(&f, &ones, &[1, 1]).unwrap(), f.elem(2));
        assert!(eval_power(&f, &ones, &[1, 1, 0]).is_err());
    }

    #[test]
    fn tangent_example_at_coordinate_point() {
        let f = f();
        let sv = SegreVeronese::new(f, 1, 1, 2).unwrap();
        let p = Point::new(vec![Fe::ONE, Fe::ZERO], vec![Fe::ONE, Fe::ZERO]).unwrap();
        let c = sv.tangent_rows(&p).unwrap();
        assert_eq!((c.rows(), c.cols()), (4, 6));
        // e0⊗f0², e1⊗f0², e0⊗f0², e0⊗f0f1
        let unit = |col: usize| {
            let mut r = vec![Fe::ZERO; 6];
            r[col] = Fe::ONE;
            r
        };
        assert_eq!(c.row(0), unit(0).as_slice());
        assert_eq!(c.row(1), unit(3).as_slice());
        assert_eq!(c.row(2), unit(0).as_slice());
        assert_eq!(c.row(3), unit(1).as_slice());
        assert_eq!(c.rank(&f), 3);
    }

    #[test]
    fn generic_tangent_rank() {
        let f = f();
        let sv = SegreVeronese::new(f, 2, 3, 2).unwrap();
        let mut rng = SeededRng::new(11);
        let p = sv.sample_point(&mut rng, PointConstraint::Generic).unwrap();
        assert_eq!(sv.tangent_rows(&p).unwrap().rank(&f), 6);
    }

    #[test]
    fn y_rows_at_f0_are_units() {
        let f = f();
        let sv = SegreVeronese::new(f, 2, 2, 2).unwrap();
        let p = Point::new(vec![f.elem(3), f.elem(1), Fe::ZERO], vec![Fe::ONE, Fe::ZERO, Fe::ZERO]).unwrap();
        let y = sv.y_rows(&p).unwrap();
        let b = sv.basis().len();
        for i in 0..3 {
            for c in 0..y.cols() {
                let want = if c == i * b { Fe::ONE } else { Fe::ZERO };
                assert_eq!(y[(i, c)], want);
            }
        }
    }

    #[test]
    fn y_rows_inside_tangent_rows() {
        let f = f();
        let sv = SegreVeronese::new(f, 2, 3, 2).unwrap();
        let mut rng = SeededRng::new(4);
        let p = sv.sample_point(&mut rng, PointConstraint::Generic).unwrap();
        let y = sv.y_rows(&p).unwrap();
        assert_eq!(y.rank(&f), 3);
        let mut both = sv.tangent_rows(&p).unwrap();
        let before = both.rank(&f);
        both.stack(&y).unwrap();
        assert_eq!(both.rank(&f), before);
    }

    #[test]
    fn subspace_rows_counts() {
        let f = f();
        let sv = SegreVeronese::new(f, 1, 3, 2).unwrap();
        let r = sv.subspace_rows(&[0, 1]).unwrap();
        assert_eq!((r.rows(), r.rank(&f)), (6, 6));
        let all = sv.subspace_rows(&[0, 1, 2, 3]).unwrap();
        assert_eq!(all.rank(&f), sv.ambient_dim());
        let sv = SegreVeronese::new(f, 2, 3, 2).unwrap();
        let l = sv.subspace_rows(&u_l(3)).unwrap();
        assert_eq!(l.rank(&f), 9);
        assert!(sv.subspace_rows(&[]).is_err());
        assert!(sv.subspace_rows(&[4]).is_err());
    }

    #[test]
    fn constrained_sampling() {
        let f = f();
        let sv = SegreVeronese::new(f, 2, 4, 2).unwrap();
        let mut rng = SeededRng::new(8);
        let p = sv.sample_point(&mut rng, PointConstraint::OnL).unwrap();
        assert!(p.v()[3].is_zero() && p.v()[4].is_zero());
        let p = sv.sample_point(&mut rng, PointConstraint::OnM).unwrap();
        assert!(p.v()[0].is_zero() && p.v()[1].is_zero());
        let p = sv.sample_point(&mut rng, PointConstraint::OnLAndM).unwrap();
        assert!(p.v().iter().enumerate().all(|(j, x)| (j == 2) != x.is_zero()));
        let a = sv.sample_point(&mut SeededRng::new(1), PointConstraint::Generic).unwrap();
        let b = sv.sample_point(&mut SeededRng::new(1), PointConstraint::Generic).unwrap();
        assert_eq!(a, b);
        let small = SegreVeronese::new(f, 2, 3, 2).unwrap();
        assert!(matches!(
            small.sample_point(&mut rng, PointConstraint::OnLAndM),
            Err(Error::InfeasibleConstraint { .. })
        ));
    }

    #[test]
    fn degenerate_factors() {
        let f = f();
        let sv = SegreVeronese::new(f, 0, 0, 2).unwrap();
        assert_eq!(sv.ambient_dim(), 1);
        let p = Point::new(vec![Fe::ONE], vec![f.elem(5)]).unwrap();
        assert_eq!(sv.tangent_rows(&p).unwrap().rank(&f), 1);
        let lin = SegreVeronese::new(f, 2, 2, 1).unwrap();
        let mut rng = SeededRng::new(2);
        let p = lin.sample_point(&mut rng, PointConstraint::Generic).unwrap();
        assert_eq!(lin.tangent_rows(&p).unwrap().rank(&f), 5);
    }

    #[test]
    fn zero_vectors_are_not_points() {
        assert_eq!(Point::new(vec![Fe::ZERO], vec![Fe::ONE]), Err(Error::ZeroVector));
    }
}
