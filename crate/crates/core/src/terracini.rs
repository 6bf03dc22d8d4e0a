//! Rank evaluation of statements and of the specialized span certificates.
//!
//! Every configuration is a list of blocks. Each block draws its points from its
//! own stream `stream_seed(seed, [tag, m, n, d, trial, block])`. The labels
//! exclude `s` and `t`, so the tangent block of `S(m,n;1,d;s+1;t)` extends the
//! one of `S(m,n;1,d;s;t)` by a single point at the same seed and trial.

use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::abundance::{ambient_dim, binomial, s_over, s_under, Statement};
use crate::error::{Error, Result};
use crate::field_linalg::{EchelonBasis, Fe, PrimeField, SeededRng};
use crate::segre_veronese::{u_l, u_m, Point, PointConstraint, SegreVeronese};

const TAG_STATEMENT: u64 = 1;
const TAG_Q: u64 = 2;
const TAG_R_UNDER: u64 = 3;
const TAG_R_OVER: u64 = 4;
const TAG_R2N: u64 = 5;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    /// Some trial reached the expected rank.
    True,
    /// Every trial fell short.
    DeficientEvidence,
    /// A trial exceeded the expected rank.
    Error,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub rank: usize,
    pub expected: usize,
    pub trials: usize,
    pub outcome: Outcome,
    pub seed: u64,
    pub prime: u64,
    /// Trial index that attained `rank`.
    pub trial: usize,
    pub rows: usize,
}

impl Verdict {
    pub fn is_true(&self) -> bool {
        self.outcome == Outcome::True
    }

    pub fn defect(&self) -> usize {
        self.expected.saturating_sub(self.rank)
    }
}

/// How the points of a block are drawn.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Sampling {
    Constrained(PointConstraint),
    /// Generic, redrawn until `v` has a nonzero coordinate outside `U_L`.
    OffL,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Block {
    Tangent { sampling: Sampling, count: usize },
    YSpan { sampling: Sampling, count: usize },
    Subspace { basis: Vec<usize> },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Configuration {
    pub m: usize,
    pub n: usize,
    pub d: usize,
    pub blocks: Vec<Block>,
}

impl Configuration {
    pub fn statement(st: &Statement) -> Self {
        let generic = Sampling::Constrained(PointConstraint::Generic);
        Configuration {
            m: st.m,
            n: st.n,
            d: st.d,
            blocks: vec![
                Block::Tangent { sampling: generic, count: st.s },
                Block::YSpan { sampling: generic, count: st.t },
            ],
        }
    }

    pub fn ambient_dim(&self) -> usize {
        ambient_dim(self.m, self.n, self.d)
    }

    pub fn row_count(&self) -> usize {
        self.blocks
            .iter()
            .map(|blk| match blk {
                Block::Tangent { count, .. } => count * (self.m + self.n + 2),
                Block::YSpan { count, .. } => count * (self.m + 1),
                Block::Subspace { basis } => (self.m + 1) * binomial(basis.len() + self.d - 1, self.d),
            })
            .sum()
    }

    /// The points of every point block for one trial, in block order.
    pub fn points(&self, model: &SegreVeronese, seed: u64, tag: u64, trial: usize) -> Result<Vec<Vec<Point>>> {
        self.blocks
            .iter()
            .enumerate()
            .map(|(b, blk)| match blk {
                Block::Tangent { sampling, count } | Block::YSpan { sampling, count } => {
                    let mut rng = block_rng(seed, tag, self, trial, b);
                    (0..*count).map(|_| sample(model, &mut rng, *sampling)).collect()
                }
                Block::Subspace { .. } => Ok(Vec::new()),
            })
            .collect()
    }

    /// Exact rank of the configuration for one trial.
    pub fn rank(&self, field: &PrimeField, seed: u64, tag: u64, trial: usize) -> Result<usize> {
        let model = SegreVeronese::new(*field, self.m, self.n, self.d)?;
        let mut basis = EchelonBasis::new(*field, model.ambient_dim());
        let points = self.points(&model, seed, tag, trial)?;
        for (blk, pts) in self.blocks.iter().zip(&points) {
            if basis.is_full() {
                break;
            }
            match blk {
                Block::Subspace { basis: u } => {
                    basis.insert_matrix(&model.subspace_rows(u)?)?;
                }
                Block::Tangent { .. } => {
                    for p in pts {
                        basis.insert_matrix(&model.tangent_rows(p)?)?;
                    }
                }
                Block::YSpan { .. } => {
                    for p in pts {
                        basis.insert_matrix(&model.y_rows(p)?)?;
                    }
                }
            }
        }
        Ok(basis.rank())
    }
}

fn block_rng(seed: u64, tag: u64, cfg: &Configuration, trial: usize, block: usize) -> SeededRng {
    SeededRng::for_stream(seed, &[tag, cfg.m as u64, cfg.n as u64, cfg.d as u64, trial as u64, block as u64])
}

fn sample(model: &SegreVeronese, rng: &mut SeededRng, sampling: Sampling) -> Result<Point> {
    match sampling {
        Sampling::Constrained(c) => model.sample_point(rng, c),
        Sampling::OffL => loop {
            let p = model.sample_point(rng, PointConstraint::Generic)?;
            let n = model.n();
            if p.v().iter().skip(n.saturating_sub(1)).any(|x| !x.is_zero()) {
                return Ok(p);
            }
        },
    }
}

/// Runs up to `trials` trials and stops at the first one reaching `expected`.
pub fn evaluate(
    field: &PrimeField,
    cfg: &Configuration,
    expected: usize,
    tag: u64,
    seed: u64,
    trials: usize,
) -> Result<Verdict> {
    if trials == 0 {
        return Err(Error::OutOfRange("trials must be at least 1".into()));
    }
    let mut best = (0, 0);
    let mut used = 0;
    for trial in 0..trials {
        used += 1;
        let r = cfg.rank(field, seed, tag, trial)?;
        if r > best.0 || trial == 0 {
            best = (r, trial);
        }
        if r >= expected {
            break;
        }
    }
    let (rank, trial) = best;
    let outcome = match rank.cmp(&expected) {
        std::cmp::Ordering::Equal => Outcome::True,
        std::cmp::Ordering::Less => Outcome::DeficientEvidence,
        std::cmp::Ordering::Greater => Outcome::Error,
    };
    Ok(Verdict {
        rank,
        expected,
        trials: used,
        outcome,
        seed,
        prime: field.modulus(),
        trial,
        rows: cfg.row_count(),
    })
}

/// `S(m,n;1,d;s;t)`: `s` tangent spaces and `t` Y-spans at general points.
pub fn eval_statement(field: &PrimeField, st: &Statement, seed: u64, trials: usize) -> Result<Verdict> {
    st.validate()?;
    evaluate(field, &Configuration::statement(st), st.expected_dim(), TAG_STATEMENT, seed, trials)
}

/// Rank of the `eval_statement` configuration at a single trial.
pub fn statement_rank_at(field: &PrimeField, st: &Statement, seed: u64, trial: usize) -> Result<usize> {
    st.validate()?;
    Configuration::statement(st).rank(field, seed, TAG_STATEMENT, trial)
}

/// The points `eval_statement` uses at one trial: `(tangent points, y points)`.
pub fn statement_points(field: &PrimeField, st: &Statement, seed: u64, trial: usize) -> Result<(Vec<Point>, Vec<Point>)> {
    st.validate()?;
    let model = SegreVeronese::new(*field, st.m, st.n, st.d)?;
    let mut pts = Configuration::statement(st).points(&model, seed, TAG_STATEMENT, trial)?;
    let y = pts.pop().unwrap_or_default();
    let tangent = pts.pop().unwrap_or_default();
    Ok((tangent, y))
}

/// Ranks of `S(m,n;1,d;s;t)` for `s = 0..=s_max` at one trial, in one incremental pass.
pub fn rank_profile(field: &PrimeField, base: &Statement, s_max: usize, seed: u64, trial: usize) -> Result<Vec<usize>> {
    Ok(rank_profile_timed(field, base, s_max, seed, trial)?.into_iter().map(|(r, _)| r).collect())
}

/// As [`rank_profile`], with the time spent on each step.
pub fn rank_profile_timed(
    field: &PrimeField,
    base: &Statement,
    s_max: usize,
    seed: u64,
    trial: usize,
) -> Result<Vec<(usize, Duration)>> {
    let start = Instant::now();
    let st = base.with_st(s_max, base.t);
    let (tangent, y) = statement_points(field, &st, seed, trial)?;
    let model = SegreVeronese::new(*field, st.m, st.n, st.d)?;
    let mut basis = EchelonBasis::new(*field, model.ambient_dim());
    for p in &y {
        basis.insert_matrix(&model.y_rows(p)?)?;
    }
    let mut out = Vec::with_capacity(s_max + 1);
    out.push((basis.rank(), start.elapsed()));
    for p in &tangent {
        let step = Instant::now();
        if !basis.is_full() {
            basis.insert_matrix(&model.tangent_rows(p)?)?;
        }
        out.push((basis.rank(), step.elapsed()));
    }
    Ok(out)
}

/// Named span certificates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CertificateKind {
    Q,
    RUnder,
    ROver,
    R2n,
}

impl CertificateKind {
    fn tag(self) -> u64 {
        match self {
            CertificateKind::Q => TAG_Q,
            CertificateKind::RUnder => TAG_R_UNDER,
            CertificateKind::ROver => TAG_R_OVER,
            CertificateKind::R2n => TAG_R2N,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            CertificateKind::Q => "Q",
            CertificateKind::RUnder => "Runder",
            CertificateKind::ROver => "Rover",
            CertificateKind::R2n => "R2n",
        }
    }

    /// The configuration and its expected rank.
    pub fn configuration(self, m: usize, n: usize) -> Result<(Configuration, usize)> {
        let full = ambient_dim(m, n, 2);
        let on_l = Sampling::Constrained(PointConstraint::OnL);
        let tangents = |sampling, count| Block::Tangent { sampling, count };
        let mut blocks = Vec::new();
        let expected = match self {
            CertificateKind::Q => {
                if n < 3 {
                    return Err(Error::OutOfRange(format!("Q(m,n) needs n >= 3, got n = {n}")));
                }
                blocks.push(Block::Subspace { basis: u_l(n) });
                blocks.push(Block::Subspace { basis: u_m(n) });
                blocks.push(tangents(on_l, m + 1));
                blocks.push(tangents(Sampling::Constrained(PointConstraint::OnM), m + 1));
                full
            }
            CertificateKind::RUnder | CertificateKind::ROver => {
                let (s, expected) = if self == CertificateKind::RUnder {
                    if !(1 <= m && m <= n) {
                        return Err(Error::OutOfRange(format!("R_under(m,n) needs 1 <= m <= n, got ({m},{n})")));
                    }
                    (s_under(m, n), if m % 2 == 0 && n % 2 == 1 { full - 1 } else { full })
                } else {
                    if m < 2 || n < 2 {
                        return Err(Error::OutOfRange(format!("R_over(m,n) needs m, n >= 2, got ({m},{n})")));
                    }
                    (s_over(m, n), full)
                };
                let on_l_count = s.checked_sub(m + 1).ok_or_else(|| {
                    Error::OutOfRange(format!("threshold {s} below m+1 = {} at ({m},{n})", m + 1))
                })?;
                if n >= 2 {
                    blocks.push(Block::Subspace { basis: u_l(n) });
                    blocks.push(tangents(on_l, on_l_count));
                } else if on_l_count > 0 {
                    return Err(Error::OutOfRange(format!("no points on L for n = {n}")));
                }
                blocks.push(tangents(Sampling::OffL, m + 1));
                expected
            }
            CertificateKind::R2n => {
                if m != 2 || n < 3 || n % 2 == 0 {
                    return Err(Error::OutOfRange(format!("R(2,n) needs m = 2 and odd n >= 3, got ({m},{n})")));
                }
                blocks.push(Block::Subspace { basis: u_l(n) });
                blocks.push(tangents(on_l, 3 * (n / 2) - 1));
                blocks.push(tangents(Sampling::OffL, 3));
                full
            }
        };
        Ok((Configuration { m, n, d: 2, blocks }, expected))
    }

    /// `(rank, expected)` of the certificate configuration at a single trial.
    pub fn rank_at(self, field: &PrimeField, m: usize, n: usize, seed: u64, trial: usize) -> Result<(usize, usize)> {
        let (cfg, expected) = self.configuration(m, n)?;
        Ok((cfg.rank(field, seed, self.tag(), trial)?, expected))
    }

    pub fn certify(self, field: &PrimeField, m: usize, n: usize, seed: u64, trials: usize) -> Result<Verdict> {
        let (cfg, expected) = self.configuration(m, n)?;
        evaluate(field, &cfg, expected, self.tag(), seed, trials)
    }
}

pub fn certify_q(field: &PrimeField, m: usize, n: usize, seed: u64, trials: usize) -> Result<Verdict> {
    CertificateKind::Q.certify(field, m, n, seed, trials)
}

pub fn certify_r_under(field: &PrimeField, m: usize, n: usize, seed: u64, trials: usize) -> Result<Verdict> {
    CertificateKind::RUnder.certify(field, m, n, seed, trials)
}

pub fn certify_r_over(field: &PrimeField, m: usize, n: usize, seed: u64, trials: usize) -> Result<Verdict> {
    CertificateKind::ROver.certify(field, m, n, seed, trials)
}

pub fn certify_r2n(field: &PrimeField, n: usize, seed: u64, trials: usize) -> Result<Verdict> {
    CertificateKind::R2n.certify(field, 2, n, seed, trials)
}

/// The deterministic configuration on `X_{m,m}`: `u_i = e_i`, `v_0 = f_0`,
/// `v_1 = f_1`, `v_i = i f_0 + f_1 + f_i` for `i >= 2`, together with
/// `V ⊗ S_2⟨f_2, …, f_m⟩`. Returns whether the span is all of `V ⊗ S_2 W`.
pub fn witness_rmm(field: &PrimeField, m: usize) -> Result<bool> {
    if m < 2 {
        return Err(Error::OutOfRange(format!("witness needs m >= 2, got {m}")));
    }
    if (m as u64) >= field.modulus() {
        return Err(Error::OutOfRange(format!("characteristic must exceed m = {m}")));
    }
    let model = SegreVeronese::new(*field, m, m, 2)?;
    let mut basis = EchelonBasis::new(*field, model.ambient_dim());
    basis.insert_matrix(&model.subspace_rows(&(2..=m).collect::<Vec<_>>())?)?;
    for i in 0..=m {
        let mut u = vec![Fe::ZERO; m + 1];
        u[i] = Fe::ONE;
        let mut v = vec![Fe::ZERO; m + 1];
        match i {
            0 | 1 => v[i] = Fe::ONE,
            _ => {
                v[0] = field.elem(i as u64);
                v[1] = Fe::ONE;
                v[i] = Fe::ONE;
            }
        }
        basis.insert_matrix(&model.tangent_rows(&Point::new(u, v)?)?)?;
    }
    Ok(basis.is_full())
}
