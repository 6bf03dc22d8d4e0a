//! The skew-symmetric contraction `S_φ` for `φ ∈ V ⊗ S²W`, `dim V = 3`,
//! `dim W = 2k+2`.
//!
//! Slice `a` of `φ = Σ u_i ⊗ v_i²` is `Σ u_i[a] v_i v_iᵀ`, with no multinomial
//! factor, so a decomposable summand contributes the rank-2 block `A(u) ⊗ v vᵀ`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field_linalg::{DenseMatrix, Fe, PrimeField, SeededRng};
use crate::segre_veronese::{Point, PointConstraint, SegreVeronese};

const TAG_STRASSEN: u64 = 6;

/// Three symmetric slices `P, Q, R` of order `2k+2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymTensor3 {
    k: usize,
    slices: [DenseMatrix; 3],
}

impl SymTensor3 {
    pub fn new(k: usize, slices: [DenseMatrix; 3]) -> Result<Self> {
        let w = 2 * k + 2;
        for s in &slices {
            if s.rows() != w || s.cols() != w {
                return Err(Error::DimensionMismatch(format!(
                    "slice of shape {}x{}, need {w}x{w}",
                    s.rows(),
                    s.cols()
                )));
            }
            if !s.is_symmetric() {
                return Err(Error::OutOfRange("slices must be symmetric".into()));
            }
        }
        Ok(SymTensor3 { k, slices })
    }

    pub fn zero(k: usize) -> Self {
        let w = 2 * k + 2;
        SymTensor3 { k, slices: std::array::from_fn(|_| DenseMatrix::zeros(w, w)) }
    }

    /// Independent uniform symmetric slices.
    pub fn random(field: &PrimeField, rng: &mut SeededRng, k: usize) -> Self {
        let w = 2 * k + 2;
        let slices = std::array::from_fn(|_| {
            let mut s = DenseMatrix::zeros(w, w);
            for j in 0..w {
                for l in j..w {
                    let x = field.elem(rng.next_coeff());
                    s[(j, l)] = x;
                    s[(l, j)] = x;
                }
            }
            s
        });
        SymTensor3 { k, slices }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn slice(&self, a: usize) -> &DenseMatrix {
        &self.slices[a]
    }

    pub fn add(&self, field: &PrimeField, other: &SymTensor3) -> Result<SymTensor3> {
        if self.k != other.k {
            return Err(Error::DimensionMismatch(format!("k = {} against k = {}", self.k, other.k)));
        }
        let [a, b, c] = &self.slices;
        let [x, y, z] = &other.slices;
        Ok(SymTensor3 { k: self.k, slices: [a.add(field, x)?, b.add(field, y)?, c.add(field, z)?] })
    }

    pub fn scale(&self, field: &PrimeField, c: Fe) -> SymTensor3 {
        SymTensor3 { k: self.k, slices: std::array::from_fn(|a| self.slices[a].scale(field, c)) }
    }
}

/// `slice_a[j][l] = Σ_i u_i[a] v_i[j] v_i[l]`.
pub fn slices_from_points(field: &PrimeField, points: &[Point], k: usize) -> Result<SymTensor3> {
    let w = 2 * k + 2;
    let mut t = SymTensor3::zero(k);
    for p in points {
        if p.u().len() != 3 || p.v().len() != w {
            return Err(Error::DimensionMismatch(format!(
                "point with |u| = {}, |v| = {}; need 3 and {w}",
                p.u().len(),
                p.v().len()
            )));
        }
        for (a, slice) in t.slices.iter_mut().enumerate() {
            let ua = p.u()[a];
            if ua.is_zero() {
                continue;
            }
            for j in 0..w {
                let c = field.mul(ua, p.v()[j]);
                for l in 0..w {
                    slice[(j, l)] = field.add(slice[(j, l)], field.mul(c, p.v()[l]));
                }
            }
        }
    }
    Ok(t)
}

/// `[[0, P, Q], [-P, 0, R], [-Q, -R, 0]]`.
pub fn strassen_matrix(field: &PrimeField, t: &SymTensor3) -> DenseMatrix {
    let w = 2 * t.k + 2;
    let mut s = DenseMatrix::zeros(3 * w, 3 * w);
    // (row block, col block, slice)
    for (bi, bj, a) in [(0, 1, 0), (0, 2, 1), (1, 2, 2)] {
        let slice = &t.slices[a];
        for j in 0..w {
            for l in 0..w {
                let x = slice[(j, l)];
                s[(bi * w + j, bj * w + l)] = x;
                s[(bj * w + j, bi * w + l)] = field.neg(x);
            }
        }
    }
    s
}

pub fn pfaffian_certificate(field: &PrimeField, points: &[Point], k: usize) -> Result<Fe> {
    strassen_matrix(field, &slices_from_points(field, points, k)?).pfaffian(field)
}

/// Seeded points of `X_{2,2k+1}`.
pub fn seeded_points(field: &PrimeField, k: usize, s: usize, seed: u64) -> Result<Vec<Point>> {
    let model = SegreVeronese::new(*field, 2, 2 * k + 1, 2)?;
    let mut rng = SeededRng::for_stream(seed, &[TAG_STRASSEN, k as u64, 0]);
    (0..s).map(|_| model.sample_point(&mut rng, PointConstraint::Generic)).collect()
}

/// A uniform random tensor drawn from `seed`.
pub fn seeded_tensor(field: &PrimeField, k: usize, seed: u64) -> SymTensor3 {
    let mut rng = SeededRng::for_stream(seed, &[TAG_STRASSEN, k as u64, 1]);
    SymTensor3::random(field, &mut rng, k)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StrassenReport {
    pub k: usize,
    pub s: usize,
    pub order: usize,
    pub rank: usize,
    pub pfaffian: u64,
    pub rank_bound: usize,
    pub within_bound: bool,
    pub seed: u64,
    pub prime: u64,
}

/// `S_φ` for `φ` a sum of `s` seeded decomposables.
pub fn strassen_report(field: &PrimeField, k: usize, s: usize, seed: u64) -> Result<StrassenReport> {
    let points = seeded_points(field, k, s, seed)?;
    let mat = strassen_matrix(field, &slices_from_points(field, &points, k)?);
    let rank = mat.rank(field);
    Ok(StrassenReport {
        k,
        s,
        order: mat.rows(),
        rank,
        pfaffian: mat.pfaffian(field)?.value(),
        rank_bound: 2 * s,
        within_bound: rank <= 2 * s,
        seed,
        prime: field.modulus(),
    })
}
