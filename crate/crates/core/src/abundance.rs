//! Closed-form dimension counts and thresholds for `X_{m,n}` embedded by `O(1,d)`.
//!
//! All dimensions are affine cone dimensions, i.e. ranks of spanning sets in
//! `V ⊗ S_d(W)` with `dim V = m+1`, `dim W = n+1`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Exact binomial coefficient; zero when `k > n`.
pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc as usize
}

/// The statement `S(m,n;1,d;s;t)`: `s` tangent spaces and `t` partial spans
/// `V ⊗ v^d` at general points have the expected joint dimension.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Statement {
    pub m: usize,
    pub n: usize,
    pub d: usize,
    pub s: usize,
    pub t: usize,
}

impl Statement {
    pub fn new(m: usize, n: usize, d: usize, s: usize, t: usize) -> Self {
        Statement { m, n, d, s, t }
    }

    /// `T(m,n;1,2;s)`, the secant-variety statement in degree 2.
    pub fn secant(m: usize, n: usize, s: usize) -> Self {
        Statement { m, n, d: 2, s, t: 0 }
    }

    pub fn validate(&self) -> Result<()> {
        if self.d == 0 {
            return Err(Error::OutOfRange("degree d must be at least 1".into()));
        }
        Ok(())
    }

    /// `s(m+n+1) + t(m+1)`, the naive dimension count.
    pub fn naive_count(&self) -> usize {
        self.s * (self.m + self.n + 1) + self.t * (self.m + 1)
    }

    pub fn ambient_dim(&self) -> usize {
        ambient_dim(self.m, self.n, self.d)
    }

    pub fn expected_dim(&self) -> usize {
        expected_dim(self)
    }

    pub fn class(&self) -> AbundanceClass {
        classify(self)
    }

    /// Same `(m, n, d)` with another `(s, t)`.
    pub fn with_st(&self, s: usize, t: usize) -> Self {
        Statement { s, t, ..*self }
    }
}

impl fmt::Display for Statement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.t == 0 {
            write!(f, "T({},{};1,{};{})", self.m, self.n, self.d, self.s)
        } else {
            write!(f, "S({},{};1,{};{};{})", self.m, self.n, self.d, self.s, self.t)
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AbundanceClass {
    #[serde(rename = "sub")]
    Subabundant,
    #[serde(rename = "super")]
    Superabundant,
    #[serde(rename = "equi")]
    Equiabundant,
}

impl AbundanceClass {
    pub fn is_sub(self) -> bool {
        matches!(self, AbundanceClass::Subabundant | AbundanceClass::Equiabundant)
    }

    pub fn is_super(self) -> bool {
        matches!(self, AbundanceClass::Superabundant | AbundanceClass::Equiabundant)
    }

    pub fn tag(self) -> &'static str {
        match self {
            AbundanceClass::Subabundant => "sub",
            AbundanceClass::Superabundant => "super",
            AbundanceClass::Equiabundant => "equi",
        }
    }
}

impl fmt::Display for AbundanceClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// `(m+1) C(n+d, d)`.
pub fn ambient_dim(m: usize, n: usize, d: usize) -> usize {
    (m + 1) * binomial(n + d, d)
}

pub fn expected_dim(st: &Statement) -> usize {
    st.naive_count().min(st.ambient_dim())
}

pub fn classify(st: &Statement) -> AbundanceClass {
    match st.naive_count().cmp(&st.ambient_dim()) {
        std::cmp::Ordering::Less => AbundanceClass::Subabundant,
        std::cmp::Ordering::Equal => AbundanceClass::Equiabundant,
        std::cmp::Ordering::Greater => AbundanceClass::Superabundant,
    }
}

/// `floor((m+1) C(n+2,2) / (m+n+1))`.
pub fn q_bound(m: usize, n: usize) -> usize {
    ambient_dim(m, n, 2) / (m + n + 1)
}

/// The lower threshold before clamping; negative for `n < m - 2`.
pub fn s_under_unclamped(m: usize, n: usize) -> i64 {
    let (m, n) = (m as i64, n as i64);
    let k = n / 2;
    let base = (m + 1) * k;
    if n % 2 == 0 {
        base - (m - 2) * (m + 1) / 2
    } else if m % 2 == 1 {
        base - (m - 3) * (m + 1) / 2
    } else {
        base - ((m - 3) * (m + 1) + 1) / 2
    }
}

/// Lower threshold `s̲(m,n)`, clamped at zero.
pub fn s_under(m: usize, n: usize) -> usize {
    s_under_unclamped(m, n).max(0) as usize
}

/// Upper threshold `s̄(m,n)`.
pub fn s_over(m: usize, n: usize) -> usize {
    let k = n / 2;
    if n % 2 == 0 {
        (m + 1) * k + 1
    } else {
        (m + 1) * k + 3
    }
}

/// `r(m,n)`: beyond `n > r(m,n)` the lower threshold reaches `q(m,n)`.
pub fn r_bound(m: usize, n: usize) -> i64 {
    let mi = m as i64;
    if m % 2 == 0 && n % 2 == 1 {
        mi * mi * mi - 2 * mi
    } else {
        (mi - 2) * (mi + 1) * (mi + 1) / 2
    }
}

/// `ℓ = floor(C(n+d,d)/(m+n+1))` and `h = ceil(C(n+d,d)/(n+1))` for `d >= 3`.
pub fn ell_h_bounds(m: usize, n: usize, d: usize) -> Result<(usize, usize)> {
    if d < 3 {
        return Err(Error::OutOfRange(format!("ell/h bounds need d >= 3, got d = {d}")));
    }
    if m < 1 {
        return Err(Error::OutOfRange("ell/h bounds need m >= 1".into()));
    }
    let c = binomial(n + d, d);
    Ok((c / (m + n + 1), c.div_ceil(n + 1)))
}

/// `(n, d)` pairs whose superabundant bound uses `h + 1` instead of `h`.
pub fn is_ell_h_exception(n: usize, d: usize) -> bool {
    matches!((n, d), (2, 4) | (3, 4) | (4, 3) | (4, 4))
}

/// `m > C(n+d,d) - d`, with `(1,1)` excluded from the notion.
pub fn is_unbalanced(m: usize, n: usize, d: usize) -> bool {
    if (m, n) == (1, 1) {
        return false;
    }
    m + d > binomial(n + d, d)
}

/// For unbalanced `(m,n;1,d)`, the open interval `(lo, hi)` of defective `s`:
/// `C(n+d,d) - n < s < min(m+1, C(n+d,d))`. The interval may be empty.
pub fn unbalanced_range(m: usize, n: usize, d: usize) -> Option<(usize, usize)> {
    if !is_unbalanced(m, n, d) {
        return None;
    }
    let c = binomial(n + d, d);
    Some((c.saturating_sub(n), (m + 1).min(c)))
}

pub fn in_unbalanced_range(m: usize, n: usize, d: usize, s: usize) -> bool {
    unbalanced_range(m, n, d).is_some_and(|(lo, hi)| lo < s && s < hi)
}

/// The corrected count `s [C(n+d,d) + m + 1 - s]` for `s` in the unbalanced range.
pub fn unbalanced_expected(m: usize, n: usize, d: usize, s: usize) -> usize {
    let c = binomial(n + d, d);
    s * (c + m + 1).saturating_sub(s)
}

/// Exceptional `(n, d, s)` with `d >= 3` where `s` general double points of `P^n`
/// fail to impose independent conditions on degree-`d` forms.
pub const AH_EXCEPTIONS: [(usize, usize, usize); 4] = [(2, 4, 5), (3, 4, 9), (4, 4, 14), (4, 3, 7)];

/// Whether `T(0,n;1,d;s)` holds, i.e. `s` general double points in `P^n` impose
/// `min{s(n+1), C(n+d,d)}` conditions on forms of degree `d`.
pub fn ah_veronese_true(n: usize, d: usize, s: usize) -> bool {
    match d {
        0 | 1 => true,
        2 => !(2 <= s && s <= n),
        _ => !AH_EXCEPTIONS.contains(&(n, d, s)),
    }
}
