//! Memoizing prover for `S(m,n;1,d;s;t)` built on the splitting theorem,
//! monotonicity in `(s, t)`, the `m = 0` base cases, the two-step induction on
//! `n` through the span certificates, and rank certificates as a last resort.
//!
//! Search order for a statement:
//! 1. memo hit; `s = t = 0`; `m = 0` via the Veronese case;
//! 2. monotonicity from a proved memo entry of matching class;
//! 3. monotonicity from the nearest threshold statement, unless the statement
//!    is itself the nearest threshold;
//! 4. splits, `m'` from `m-1` down, direction forced by the class;
//! 5. the remaining threshold statements, then induction on `n`;
//! 6. a rank certificate at the configured seed.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::sync::RwLock;

use serde::{Deserialize, Serialize};

use crate::abundance::{
    ah_veronese_true, binomial, ell_h_bounds, in_unbalanced_range, is_ell_h_exception, s_over, s_under, AbundanceClass,
    Statement,
};
use crate::error::{Error, Result};
use crate::field_linalg::PrimeField;
use crate::terracini::{eval_statement, statement_rank_at, CertificateKind, Verdict};

/// What a proof node establishes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Claim {
    Statement(Statement),
    Certificate { certificate: CertificateKind, m: usize, n: usize },
}

impl fmt::Display for Claim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Claim::Statement(st) => write!(f, "{st}"),
            Claim::Certificate { certificate, m, n } => write!(f, "{}({m},{n})", certificate.name()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "snake_case")]
pub enum Rule {
    Split { m1: usize, m2: usize, s1: usize, s2: usize },
    #[serde(rename = "base_AH")]
    BaseAh,
    BaseRankCertificate { rank: usize, expected: usize, seed: u64, prime: u64, trial: usize },
    ClampTrivial,
    SubabundantMonotone,
    SuperabundantMonotone,
    #[serde(rename = "R_induction")]
    RInduction,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ProofNode {
    pub statement: Claim,
    pub rule: Rule,
    pub children: Vec<ProofNode>,
}

impl ProofNode {
    fn leaf(statement: Claim, rule: Rule) -> Self {
        ProofNode { statement, rule, children: Vec::new() }
    }

    pub fn size(&self) -> usize {
        1 + self.children.iter().map(ProofNode::size).sum::<usize>()
    }

    pub fn depth(&self) -> usize {
        1 + self.children.iter().map(ProofNode::depth).max().unwrap_or(0)
    }

    pub fn leaves(&self) -> Vec<&ProofNode> {
        if self.children.is_empty() {
            return vec![self];
        }
        self.children.iter().flat_map(ProofNode::leaves).collect()
    }

    /// Multiset of leaf claims, sorted.
    pub fn leaf_claims(&self) -> Vec<Claim> {
        let mut v: Vec<Claim> = self.leaves().into_iter().map(|l| l.statement).collect();
        v.sort();
        v
    }

    pub fn uses_rank_certificates(&self) -> bool {
        matches!(self.rule, Rule::BaseRankCertificate { .. }) || self.children.iter().any(ProofNode::uses_rank_certificates)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum StoreEntry {
    Proved { proof: ProofNode },
    DeficientEvidence { verdict: Verdict },
    Unknown { reason: String },
}

/// Memo of claims, shared across queries. Reads are concurrent; writes are
/// serialized and never downgrade a proved entry.
#[derive(Debug, Default)]
pub struct StatementStore {
    inner: RwLock<StoreInner>,
}

#[derive(Debug, Default)]
struct StoreInner {
    entries: HashMap<Claim, StoreEntry>,
    proved_by_shape: HashMap<(usize, usize, usize), Vec<Statement>>,
}

impl StatementStore {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, claim: &Claim) -> Option<StoreEntry> {
        self.inner.read().expect("store lock").entries.get(claim).cloned()
    }

    pub fn proved(&self, claim: &Claim) -> Option<ProofNode> {
        match self.get(claim)? {
            StoreEntry::Proved { proof } => Some(proof),
            _ => None,
        }
    }

    pub fn len(&self) -> usize {
        self.inner.read().expect("store lock").entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Proved statements with the given `(m, n, d)`.
    pub fn proved_statements(&self, m: usize, n: usize, d: usize) -> Vec<Statement> {
        self.inner.read().expect("store lock").proved_by_shape.get(&(m, n, d)).cloned().unwrap_or_default()
    }

    pub fn insert(&self, claim: Claim, entry: StoreEntry) {
        let mut inner = self.inner.write().expect("store lock");
        if matches!(inner.entries.get(&claim), Some(StoreEntry::Proved { .. })) {
            return;
        }
        if let (StoreEntry::Proved { .. }, Claim::Statement(st)) = (&entry, claim) {
            inner.proved_by_shape.entry((st.m, st.n, st.d)).or_default().push(st);
        }
        inner.entries.insert(claim, entry);
    }
}

#[derive(Clone, Copy, Debug)]
pub struct ProverConfig {
    pub field: PrimeField,
    pub seed: u64,
    pub trials: usize,
    /// Whether statements may be closed by a rank certificate. Span
    /// certificates are always rank-checked.
    pub allow_rank_leaves: bool,
    pub max_visits: usize,
}

impl Default for ProverConfig {
    fn default() -> Self {
        ProverConfig {
            field: PrimeField::default_field(),
            seed: 0,
            trials: 3,
            allow_rank_leaves: true,
            max_visits: 10_000,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum ProveOutcome {
    Proved { proof: ProofNode },
    Unknown { reason: String, evidence: Option<Verdict> },
}

impl ProveOutcome {
    pub fn proof(&self) -> Option<&ProofNode> {
        match self {
            ProveOutcome::Proved { proof } => Some(proof),
            ProveOutcome::Unknown { .. } => None,
        }
    }

    pub fn is_proved(&self) -> bool {
        self.proof().is_some()
    }
}

#[derive(Debug, Default)]
pub struct Prover {
    config: ProverConfig,
    store: StatementStore,
}

impl Prover {
    pub fn new(config: ProverConfig) -> Self {
        Prover { config, store: StatementStore::new() }
    }

    pub fn config(&self) -> &ProverConfig {
        &self.config
    }

    pub fn store(&self) -> &StatementStore {
        &self.store
    }

    pub fn prove(&self, st: &Statement) -> Result<ProveOutcome> {
        st.validate()?;
        let mut search = Search::new(self, st.m);
        let found = search.statement(*st, 0)?;
        self.finish(Claim::Statement(*st), found, search.exhausted, || {
            eval_statement(&self.config.field, st, self.config.seed, self.config.trials)
        })
    }

    /// Derives `st` from a proved memo entry of matching class.
    pub fn prove_monotone(&self, st: &Statement) -> Option<ProofNode> {
        monotone_from_store(&self.store, st)
    }

    /// Proves the threshold statement `T(m,n;1,2;s)` (`s` = `s̲` for
    /// `kind = RUnder`, `s̄` for `ROver`) through the induction on `n`.
    pub fn prove_r_induction(&self, kind: CertificateKind, m: usize, n: usize) -> Result<ProveOutcome> {
        let s = match kind {
            CertificateKind::RUnder => s_under(m, n),
            CertificateKind::ROver => s_over(m, n),
            _ => return Err(Error::OutOfRange(format!("no threshold statement for {}", kind.name()))),
        };
        let st = Statement::secant(m, n, s);
        let mut search = Search::new(self, m);
        let found = search.r_induction(st, kind, 0)?;
        if let Some(node) = &found {
            self.store.insert(Claim::Statement(st), StoreEntry::Proved { proof: node.clone() });
        }
        self.finish(Claim::Statement(st), found, search.exhausted, || {
            eval_statement(&self.config.field, &st, self.config.seed, self.config.trials)
        })
    }

    /// Proves a span certificate, by induction on `n` where it applies.
    pub fn prove_certificate(&self, kind: CertificateKind, m: usize, n: usize) -> Result<ProveOutcome> {
        let mut search = Search::new(self, m);
        let found = search.certificate(kind, m, n)?;
        self.finish(Claim::Certificate { certificate: kind, m, n }, found, search.exhausted, || {
            kind.certify(&self.config.field, m, n, self.config.seed, self.config.trials)
        })
    }

    fn finish(
        &self,
        claim: Claim,
        found: Option<ProofNode>,
        exhausted: bool,
        oracle: impl FnOnce() -> Result<Verdict>,
    ) -> Result<ProveOutcome> {
        if let Some(proof) = found {
            return Ok(ProveOutcome::Proved { proof });
        }
        let evidence = match self.store.get(&claim) {
            Some(StoreEntry::DeficientEvidence { verdict }) => verdict,
            _ => oracle()?,
        };
        let reason = if exhausted {
            "search budget exhausted".to_string()
        } else if evidence.is_true() {
            "no rule applies and rank leaves are disabled".to_string()
        } else {
            "no rule applies; the rank oracle is deficient".to_string()
        };
        if !matches!(self.store.get(&claim), Some(StoreEntry::DeficientEvidence { .. })) {
            self.store.insert(claim, StoreEntry::Unknown { reason: reason.clone() });
        }
        Ok(ProveOutcome::Unknown { reason, evidence: Some(evidence) })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Direction {
    Sub,
    Super,
}

struct Search<'a> {
    prover: &'a Prover,
    max_depth: usize,
    visits: usize,
    exhausted: bool,
    failed: HashSet<Claim>,
    active: HashSet<Claim>,
}

impl<'a> Search<'a> {
    fn new(prover: &'a Prover, root_m: usize) -> Self {
        Search {
            prover,
            max_depth: root_m + 2,
            visits: 0,
            exhausted: false,
            failed: HashSet::new(),
            active: HashSet::new(),
        }
    }

    fn store(&self) -> &StatementStore {
        &self.prover.store
    }

    fn cfg(&self) -> &ProverConfig {
        &self.prover.config
    }

    fn enter(&mut self, claim: Claim) -> bool {
        if self.exhausted || self.failed.contains(&claim) || self.active.contains(&claim) {
            return false;
        }
        if matches!(self.store().get(&claim), Some(StoreEntry::DeficientEvidence { .. })) {
            return false;
        }
        self.visits += 1;
        if self.visits > self.cfg().max_visits {
            self.exhausted = true;
            return false;
        }
        self.active.insert(claim);
        true
    }

    fn leave(&mut self, claim: Claim, found: &Option<ProofNode>) {
        self.active.remove(&claim);
        match found {
            Some(node) => self.store().insert(claim, StoreEntry::Proved { proof: node.clone() }),
            None if !self.exhausted => {
                self.failed.insert(claim);
            }
            None => {}
        }
    }

    fn statement(&mut self, st: Statement, depth: usize) -> Result<Option<ProofNode>> {
        let claim = Claim::Statement(st);
        if let Some(node) = self.store().proved(&claim) {
            return Ok(Some(node));
        }
        if !self.enter(claim) {
            return Ok(None);
        }
        let found = self.statement_rules(st, depth)?;
        self.leave(claim, &found);
        Ok(found)
    }

    fn statement_rules(&mut self, st: Statement, depth: usize) -> Result<Option<ProofNode>> {
        let claim = Claim::Statement(st);
        if st.s == 0 && st.t == 0 {
            return Ok(Some(ProofNode::leaf(claim, Rule::ClampTrivial)));
        }
        if st.m == 0 {
            if ah_veronese_true(st.n, st.d, st.s) {
                return Ok(Some(ProofNode::leaf(claim, Rule::BaseAh)));
            }
            return self.rank_leaf(st);
        }
        if let Some(node) = monotone_from_store(self.store(), &st) {
            return Ok(Some(node));
        }
        let anchors = anchor_candidates(&st);
        let at_anchor = anchors.first() == Some(&st);
        if !at_anchor {
            if let Some(node) = self.via_anchors(st, &anchors, depth)? {
                return Ok(Some(node));
            }
        }
        if let Some(node) = self.split(st, depth)? {
            return Ok(Some(node));
        }
        if at_anchor {
            if let Some(node) = self.via_anchors(st, &anchors[1..], depth)? {
                return Ok(Some(node));
            }
        }
        if let Some(kind) = r_anchor_kind(&st) {
            if let Some(node) = self.r_induction(st, kind, depth)? {
                return Ok(Some(node));
            }
        }
        self.rank_leaf(st)
    }

    fn via_anchors(&mut self, st: Statement, anchors: &[Statement], depth: usize) -> Result<Option<ProofNode>> {
        for a in anchors.iter().filter(|a| **a != st) {
            if let Some(child) = self.statement(*a, depth)? {
                return Ok(Some(monotone_node(st, *a, child)));
            }
        }
        Ok(None)
    }

    fn split(&mut self, st: Statement, depth: usize) -> Result<Option<ProofNode>> {
        if st.m == 0 || depth >= self.max_depth {
            return Ok(None);
        }
        let dirs: &[Direction] = match st.class() {
            AbundanceClass::Subabundant => &[Direction::Sub],
            AbundanceClass::Superabundant => &[Direction::Super],
            AbundanceClass::Equiabundant => &[Direction::Sub, Direction::Super],
        };
        for &dir in dirs {
            let s2_order: Vec<usize> = match dir {
                Direction::Sub => (1..=st.s).chain(std::iter::once(0)).collect(),
                Direction::Super => (0..=st.s).collect(),
            };
            for m1 in (0..st.m).rev() {
                let m2 = st.m - 1 - m1;
                for &s2 in &s2_order {
                    let s1 = st.s - s2;
                    let c1 = Statement::new(m1, st.n, st.d, s1, s2 + st.t);
                    let c2 = Statement::new(m2, st.n, st.d, s2, s1 + st.t);
                    let admissible = match dir {
                        Direction::Sub => c1.class().is_sub() && c2.class().is_sub(),
                        Direction::Super => c1.class().is_super() && c2.class().is_super(),
                    };
                    if !admissible {
                        continue;
                    }
                    let Some(p2) = self.statement(c2, depth + 1)? else { continue };
                    let Some(p1) = self.statement(c1, depth + 1)? else { continue };
                    return Ok(Some(ProofNode {
                        statement: Claim::Statement(st),
                        rule: Rule::Split { m1, m2, s1, s2 },
                        children: vec![p1, p2],
                    }));
                }
                if self.exhausted {
                    return Ok(None);
                }
            }
        }
        Ok(None)
    }

    fn r_induction(&mut self, st: Statement, kind: CertificateKind, depth: usize) -> Result<Option<ProofNode>> {
        if st.d != 2 || st.t != 0 || st.n < 2 || st.s < st.m + 1 {
            return Ok(None);
        }
        let lower = Statement::secant(st.m, st.n - 2, st.s - (st.m + 1));
        let Some(lower_proof) = self.statement(lower, depth)? else { return Ok(None) };
        let Some(cert) = self.certificate(kind, st.m, st.n)? else { return Ok(None) };
        Ok(Some(ProofNode { statement: Claim::Statement(st), rule: Rule::RInduction, children: vec![lower_proof, cert] }))
    }

    fn certificate(&mut self, kind: CertificateKind, m: usize, n: usize) -> Result<Option<ProofNode>> {
        let claim = Claim::Certificate { certificate: kind, m, n };
        if let Some(node) = self.store().proved(&claim) {
            return Ok(Some(node));
        }
        if !self.enter(claim) {
            return Ok(None);
        }
        let mut found = None;
        if certificate_chain_applies(kind, m, n) {
            if let (Some(q), Some(prev)) = (self.certificate(CertificateKind::Q, m, n)?, self.certificate(kind, m, n - 2)?) {
                found = Some(ProofNode { statement: claim, rule: Rule::RInduction, children: vec![q, prev] });
            }
        }
        if found.is_none() {
            let cfg = *self.cfg();
            let v = kind.certify(&cfg.field, m, n, cfg.seed, cfg.trials)?;
            if v.is_true() {
                found = Some(ProofNode::leaf(claim, rank_rule(&v)));
            } else {
                self.store().insert(claim, StoreEntry::DeficientEvidence { verdict: v });
            }
        }
        self.leave(claim, &found);
        Ok(found)
    }

    fn rank_leaf(&mut self, st: Statement) -> Result<Option<ProofNode>> {
        if !self.cfg().allow_rank_leaves {
            return Ok(None);
        }
        let cfg = *self.cfg();
        let v = eval_statement(&cfg.field, &st, cfg.seed, cfg.trials)?;
        if v.is_true() {
            return Ok(Some(ProofNode::leaf(Claim::Statement(st), rank_rule(&v))));
        }
        self.store().insert(Claim::Statement(st), StoreEntry::DeficientEvidence { verdict: v });
        Ok(None)
    }
}

fn rank_rule(v: &Verdict) -> Rule {
    Rule::BaseRankCertificate { rank: v.rank, expected: v.expected, seed: v.seed, prime: v.prime, trial: v.trial }
}

fn monotone_node(st: Statement, from: Statement, child: ProofNode) -> ProofNode {
    let rule = if from.s >= st.s && from.t >= st.t && from.class().is_sub() {
        Rule::SubabundantMonotone
    } else {
        Rule::SuperabundantMonotone
    };
    ProofNode { statement: Claim::Statement(st), rule, children: vec![child] }
}

fn dominates(from: &Statement, st: &Statement) -> bool {
    (from.m, from.n, from.d) == (st.m, st.n, st.d)
        && from != st
        && ((from.class().is_sub() && from.s >= st.s && from.t >= st.t)
            || (from.class().is_super() && from.s <= st.s && from.t <= st.t))
}

fn monotone_from_store(store: &StatementStore, st: &Statement) -> Option<ProofNode> {
    let from = store
        .proved_statements(st.m, st.n, st.d)
        .into_iter()
        .filter(|e| dominates(e, st))
        .min_by_key(|e| (e.s.abs_diff(st.s) + e.t.abs_diff(st.t), *e))?;
    let child = store.proved(&Claim::Statement(from))?;
    Some(monotone_node(*st, from, child))
}

/// Threshold statements `T(m,n;1,d;a)` known to hold that imply `st` by
/// monotonicity, nearest first.
fn anchor_candidates(st: &Statement) -> Vec<Statement> {
    if st.m == 0 {
        return Vec::new();
    }
    let (m, n, d) = (st.m, st.n, st.d);
    let mut sub = Vec::new();
    let mut sup = Vec::new();
    if d == 2 {
        if m <= n + 2 {
            sub.push(s_under(m, n));
        }
        if m <= binomial(n + 1, 2) {
            sub.push(m + 1);
        }
        sup.push(s_over(m, n));
        sup.push((m + 1) * (n + 1));
    } else if let Ok((ell, h)) = ell_h_bounds(m, n, d) {
        sub.push(ell * (m + 1));
        sup.push(if is_ell_h_exception(n, d) { (h + 1) * (m + 1) } else { h * (m + 1) });
    }
    let mut out: Vec<Statement> = sub
        .into_iter()
        .map(|a| Statement::new(m, n, d, a, 0))
        .filter(|a| a.class().is_sub() && a.s >= st.s && st.t == 0)
        .chain(
            sup.into_iter()
                .map(|a| Statement::new(m, n, d, a, 0))
                .filter(|a| a.class().is_super() && a.s <= st.s),
        )
        .collect();
    out.sort_by_key(|a| (a.s.abs_diff(st.s) + st.t, a.s));
    out.dedup();
    out
}

/// The certificate whose induction proves `st` when `st` is a threshold statement.
fn r_anchor_kind(st: &Statement) -> Option<CertificateKind> {
    let (m, n) = (st.m, st.n);
    if st.d != 2 || st.t != 0 || n < 2 {
        return None;
    }
    if 1 <= m && m <= n && st.s == s_under(m, n) {
        return Some(CertificateKind::RUnder);
    }
    if st.s == s_over(m, n) && ((m >= 3 && n >= 2) || (m == 2 && n >= 3)) {
        return Some(CertificateKind::ROver);
    }
    None
}

fn certificate_chain_applies(kind: CertificateKind, m: usize, n: usize) -> bool {
    match kind {
        CertificateKind::Q => false,
        CertificateKind::RUnder => m >= 1 && n >= m + 2,
        CertificateKind::ROver => (m >= 3 && n >= 4) || (m == 2 && n >= 5),
        CertificateKind::R2n => m == 2 && n >= 5 && n % 2 == 1,
    }
}

/// Independent validation of a proof tree. Rank leaves are re-run at their
/// recorded seed, prime and trial.
pub fn check_proof(node: &ProofNode) -> Result<()> {
    Checker::default().check(node)
}

#[derive(Default)]
struct Checker {
    verified: HashMap<Claim, ProofNode>,
}

impl Checker {
    fn check(&mut self, node: &ProofNode) -> Result<()> {
        if self.verified.get(&node.statement) == Some(node) {
            return Ok(());
        }
        let bad = |reason: String| Error::InvalidProof { claim: node.statement.to_string(), reason };
        let child_claims: Vec<Claim> = node.children.iter().map(|c| c.statement).collect();
        let expect_children = |n: usize| {
            if node.children.len() == n {
                Ok(())
            } else {
                Err(bad(format!("expected {n} children, found {}", node.children.len())))
            }
        };
        match (node.statement, &node.rule) {
            (Claim::Statement(st), Rule::ClampTrivial) => {
                expect_children(0)?;
                if st.s != 0 || st.t != 0 {
                    return Err(bad("clamp_trivial needs s = t = 0".into()));
                }
            }
            (Claim::Statement(st), Rule::BaseAh) => {
                expect_children(0)?;
                if st.m != 0 || !ah_veronese_true(st.n, st.d, st.s) {
                    return Err(bad("base_AH needs m = 0 and a true Veronese statement".into()));
                }
            }
            (Claim::Statement(st), Rule::Split { m1, m2, s1, s2 }) => {
                expect_children(2)?;
                if st.m != m1 + m2 + 1 || st.s != s1 + s2 {
                    return Err(bad("split arithmetic fails".into()));
                }
                let c1 = Statement::new(*m1, st.n, st.d, *s1, s2 + st.t);
                let c2 = Statement::new(*m2, st.n, st.d, *s2, s1 + st.t);
                if child_claims != [Claim::Statement(c1), Claim::Statement(c2)] {
                    return Err(bad("split children do not match".into()));
                }
                let sub = c1.class().is_sub() && c2.class().is_sub();
                let sup = c1.class().is_super() && c2.class().is_super();
                if !(sub || sup) {
                    return Err(bad("split children differ in abundance class".into()));
                }
            }
            (Claim::Statement(st), Rule::SubabundantMonotone | Rule::SuperabundantMonotone) => {
                expect_children(1)?;
                let Claim::Statement(from) = child_claims[0] else {
                    return Err(bad("monotone child must be a statement".into()));
                };
                let ok = (from.m, from.n, from.d) == (st.m, st.n, st.d)
                    && match node.rule {
                        Rule::SubabundantMonotone => from.class().is_sub() && from.s >= st.s && from.t >= st.t,
                        _ => from.class().is_super() && from.s <= st.s && from.t <= st.t,
                    };
                if !ok {
                    return Err(bad(format!("{from} does not imply the claim by monotonicity")));
                }
            }
            (Claim::Statement(st), Rule::BaseRankCertificate { rank, expected, seed, prime, trial }) => {
                expect_children(0)?;
                let field = PrimeField::new(*prime)?;
                let r = statement_rank_at(&field, &st, *seed, *trial)?;
                if r != *rank || *expected != st.expected_dim() || r != *expected {
                    return Err(bad(format!("rerun rank {r}, recorded {rank}, expected {}", st.expected_dim())));
                }
            }
            (Claim::Statement(st), Rule::RInduction) => {
                expect_children(2)?;
                let Claim::Certificate { certificate, m, n } = child_claims[1] else {
                    return Err(bad("second child must be a certificate".into()));
                };
                let threshold = match certificate {
                    CertificateKind::RUnder if 1 <= st.m && st.m <= st.n => s_under(st.m, st.n),
                    CertificateKind::ROver if st.m >= 2 => s_over(st.m, st.n),
                    _ => return Err(bad("certificate cannot drive the induction".into())),
                };
                let ok = st.d == 2
                    && st.t == 0
                    && st.n >= 2
                    && (m, n) == (st.m, st.n)
                    && st.s == threshold
                    && st.s > st.m
                    && child_claims[0] == Claim::Statement(Statement::secant(st.m, st.n - 2, st.s - (st.m + 1)));
                if !ok {
                    return Err(bad("induction children do not match".into()));
                }
            }
            (Claim::Certificate { certificate, m, n }, Rule::RInduction) => {
                expect_children(2)?;
                let q = Claim::Certificate { certificate: CertificateKind::Q, m, n };
                let ok = n >= 2
                    && certificate_chain_applies(certificate, m, n)
                    && child_claims == [q, Claim::Certificate { certificate, m, n: n - 2 }];
                if !ok {
                    return Err(bad("certificate induction children do not match".into()));
                }
            }
            (Claim::Certificate { certificate, m, n }, Rule::BaseRankCertificate { rank, expected, seed, prime, trial }) => {
                expect_children(0)?;
                let field = PrimeField::new(*prime)?;
                let (r, e) = certificate.rank_at(&field, m, n, *seed, *trial)?;
                if r != *rank || e != *expected || r != e {
                    return Err(bad(format!("rerun rank {r}, recorded {rank}, expected {e}")));
                }
            }
            (_, rule) => return Err(bad(format!("rule {rule:?} does not apply to this claim"))),
        }
        for c in &node.children {
            self.check(c)?;
        }
        self.verified.insert(node.statement, node.clone());
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConjectureReason {
    /// `(m,n;1,2)` unbalanced and `s` inside its defective range.
    Unbalanced,
    /// `(m,n,s) = (2, 2k+1, 3k+2)`.
    TwoOddHypersurface,
    /// `(m,n,s) = (4,3,6)`.
    FourThreeSix,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConjectureVerdict {
    ExpectedDefective(ConjectureReason),
    ExpectedNondefective,
}

impl ConjectureVerdict {
    pub fn is_defective(self) -> bool {
        matches!(self, ConjectureVerdict::ExpectedDefective(_))
    }

    /// `defective:a`, `defective:b`, `defective:c` or `nondefective`.
    pub fn tag(self) -> &'static str {
        match self {
            ConjectureVerdict::ExpectedDefective(ConjectureReason::Unbalanced) => "defective:a",
            ConjectureVerdict::ExpectedDefective(ConjectureReason::TwoOddHypersurface) => "defective:b",
            ConjectureVerdict::ExpectedDefective(ConjectureReason::FourThreeSix) => "defective:c",
            ConjectureVerdict::ExpectedNondefective => "nondefective",
        }
    }

    pub fn from_tag(tag: &str) -> Option<Self> {
        [
            ConjectureVerdict::ExpectedDefective(ConjectureReason::Unbalanced),
            ConjectureVerdict::ExpectedDefective(ConjectureReason::TwoOddHypersurface),
            ConjectureVerdict::ExpectedDefective(ConjectureReason::FourThreeSix),
            ConjectureVerdict::ExpectedNondefective,
        ]
        .into_iter()
        .find(|v| v.tag() == tag)
    }
}

/// The conjectured defective list for `(m,n;1,2)`.
pub fn conjecture_verdict(m: usize, n: usize, s: usize) -> ConjectureVerdict {
    if in_unbalanced_range(m, n, 2, s) {
        ConjectureVerdict::ExpectedDefective(ConjectureReason::Unbalanced)
    } else if m == 2 && n >= 3 && n % 2 == 1 && s == 3 * (n / 2) + 2 {
        ConjectureVerdict::ExpectedDefective(ConjectureReason::TwoOddHypersurface)
    } else if (m, n, s) == (4, 3, 6) {
        ConjectureVerdict::ExpectedDefective(ConjectureReason::FourThreeSix)
    } else {
        ConjectureVerdict::ExpectedNondefective
    }
}
