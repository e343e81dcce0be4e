//! First-occurrence bookkeeping for theta lifts.
//!
//! A [`Ledger`] records observed occurrence facts for opaque representation
//! labels and derives the tightest interval for every tracked first
//! occurrence index. Rules are persistence, stable-range non-vanishing and
//! the conservation relations, iterated to a fixed point. Every bound
//! carries the ids of the facts it depends on, which is what contradiction
//! reports are minimised over.
//!
//! Orthogonal side: `V` is fixed and the indices are `n(π)` and `n(π⊗sgn)`,
//! measured as `½ dim V′`. Symplectic side: `V′` is fixed with
//! `dim V′ = 2n` and the indices are `m_t(π′)`, one per Witt tower `t` of
//! the parity class `ε`, measured as `dim V`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::ThetaError;
use crate::formed_spaces::{adjacent, DiscChar, Field, Parity, RealTowers, TowerSign, WittTower};
use crate::scalar::Scalar;
use crate::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Side {
    #[serde(rename = "orth")]
    Orthogonal,
    #[serde(rename = "symp")]
    Symplectic,
}

/// An observation about one first occurrence index.
///
/// `occurred` at `dim` bounds the index above by `dim`; its negation bounds
/// it below by the next admissible value. `exact` pins the index to `dim`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Fact {
    pub index: String,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub twisted: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tower: Option<WittTower>,
    pub dim: u32,
    pub occurred: bool,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub exact: bool,
    #[serde(default)]
    pub source: String,
}

impl Fact {
    pub fn orth(index: &str, twisted: bool, half_dim: u32, occurred: bool) -> Fact {
        Fact { index: index.into(), twisted, tower: None, dim: half_dim, occurred, exact: false, source: String::new() }
    }

    pub fn symp(index: &str, tower: WittTower, dim: u32, occurred: bool) -> Fact {
        Fact {
            index: index.into(),
            twisted: false,
            tower: Some(tower),
            dim,
            occurred,
            exact: false,
            source: String::new(),
        }
    }

    pub fn exact(mut self) -> Fact {
        self.exact = true;
        self.occurred = true;
        self
    }

    pub fn with_source(mut self, source: &str) -> Fact {
        self.source = source.into();
        self
    }

    fn key(&self) -> IndexKey {
        IndexKey { label: self.index.clone(), twisted: self.twisted, tower: self.tower }
    }
}

impl fmt::Display for Fact {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verb = match (self.exact, self.occurred) {
            (true, _) => "first occurs at",
            (false, true) => "occurs at",
            (false, false) => "does not occur at",
        };
        write!(f, "{} {verb} {}", self.key(), self.dim)?;
        if !self.source.is_empty() {
            write!(f, " ({})", self.source)?;
        }
        Ok(())
    }
}

/// Tracked index: a label, twisted by `sgn` on the orthogonal side, or
/// paired with a tower on the symplectic side.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IndexKey {
    pub label: String,
    pub twisted: bool,
    pub tower: Option<WittTower>,
}

impl fmt::Display for IndexKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.label)?;
        if self.twisted {
            write!(f, "⊗sgn")?;
        }
        if let Some(t) = &self.tower {
            write!(f, "@{t}")?;
        }
        Ok(())
    }
}

/// Known first occurrence values.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Anchor {
    /// `n(sgn) = dim V` for the sign character of `O(V)`.
    Sign,
    /// `m_t(1) = 2n + 2` for the trivial representation of `Sp_{2n}(ℝ)` on
    /// the towers `t^{(±2)}`.
    TrivialRealSymplectic,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bound {
    pub value: i64,
    pub facts: BTreeSet<usize>,
    pub reason: String,
}

impl Bound {
    fn axiom(value: i64, reason: &str) -> Bound {
        Bound { value, facts: BTreeSet::new(), reason: reason.into() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Interval {
    pub lo: Bound,
    /// `None` is unbounded.
    pub hi: Option<Bound>,
}

impl Interval {
    pub fn exact(&self) -> Option<i64> {
        self.hi.as_ref().filter(|h| h.value == self.lo.value).map(|h| h.value)
    }

    pub fn bounds(&self) -> (i64, Option<i64>) {
        (self.lo.value, self.hi.as_ref().map(|h| h.value))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ContradictionKind {
    EmptyInterval,
    InfeasibleMinimum,
}

/// Inconsistent facts, minimised so that removing any one of them restores
/// consistency.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Contradiction {
    pub kind: ContradictionKind,
    pub index: String,
    pub message: String,
    pub facts: Vec<Fact>,
}

impl fmt::Display for Contradiction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "contradiction on {}: {}", self.index, self.message)?;
        if !self.facts.is_empty() {
            let facts: Vec<String> = self.facts.iter().map(|x| x.to_string()).collect();
            write!(f, "; conflicting facts: {}", facts.join("; "))?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
struct Conflict {
    kind: ContradictionKind,
    index: String,
    message: String,
    facts: BTreeSet<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
struct Rules {
    stable_range: bool,
    conservation: bool,
}

/// Unresolved "some adjacent pair attains `4n + 4`" obligation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PendingMinimum {
    pub index: String,
    pub alpha: u8,
    pub candidates: Vec<(WittTower, WittTower)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawLedger", into = "RawLedger")]
pub struct Ledger {
    pub side: Side,
    pub dim_v: Option<u32>,
    pub dim_v_prime: Option<u32>,
    pub field: Field,
    pub eps: Parity,
    pub chi: DiscChar,
    pub labels: Vec<String>,
    pub facts: Vec<Fact>,
    rules: Rules,
}

impl Ledger {
    pub fn orthogonal(dim_v: u32) -> Ledger {
        Ledger {
            side: Side::Orthogonal,
            dim_v: Some(dim_v),
            dim_v_prime: None,
            field: Field::Real,
            eps: Parity::of(dim_v as i64),
            chi: DiscChar::Trivial,
            labels: Vec::new(),
            facts: Vec::new(),
            rules: Rules::default(),
        }
    }

    /// Symplectic side over `field`, tracking towers of dimension parity `eps`.
    pub fn symplectic(field: Field, eps: Parity, dim_v_prime: u32) -> Result<Ledger> {
        if dim_v_prime % 2 == 1 {
            return Err(ThetaError::InvalidInput(format!("dim V' = {dim_v_prime} must be even")));
        }
        Ok(Ledger {
            side: Side::Symplectic,
            dim_v: None,
            dim_v_prime: Some(dim_v_prime),
            field,
            eps,
            chi: DiscChar::Trivial,
            labels: Vec::new(),
            facts: Vec::new(),
            rules: Rules::default(),
        })
    }

    pub fn with_chi(mut self, chi: DiscChar) -> Ledger {
        self.chi = chi;
        self
    }

    pub fn with_label(mut self, label: &str) -> Ledger {
        self.labels.push(label.into());
        self
    }

    fn half_rank(&self) -> i64 {
        self.dim_v_prime.unwrap_or(0) as i64 / 2
    }

    /// `4n + 4`.
    fn conservation_sum(&self) -> i64 {
        4 * self.half_rank() + 4
    }

    fn step(&self) -> i64 {
        match self.side {
            Side::Orthogonal => 1,
            Side::Symplectic => 2,
        }
    }

    fn check_fact(&self, fact: &Fact) -> Result<()> {
        if fact.exact && !fact.occurred {
            return Err(ThetaError::InvalidInput(format!("exact fact must have occurred: {fact}")));
        }
        match self.side {
            Side::Orthogonal => {
                if fact.tower.is_some() {
                    return Err(ThetaError::SideMismatch("orthogonal-side facts carry no tower".into()));
                }
            }
            Side::Symplectic => {
                if fact.twisted {
                    return Err(ThetaError::SideMismatch("symplectic-side facts cannot be sgn-twisted".into()));
                }
                let tower =
                    fact.tower.ok_or_else(|| ThetaError::SideMismatch("symplectic-side facts need a tower".into()))?;
                let fits = match tower {
                    WittTower::Real { k } => self.field == Field::Real && Parity::of(k) == self.eps,
                    WittTower::Complex { eps } => self.field == Field::Complex && eps == self.eps,
                    WittTower::NonArch { eps, chi, .. } => {
                        self.field == Field::NonArch && eps == self.eps && chi == self.chi
                    }
                };
                if !fits {
                    return Err(ThetaError::InvalidInput(format!("tower {tower} is not tracked by this ledger")));
                }
                if !tower.on_progression(fact.dim) {
                    return Err(ThetaError::InvalidInput(format!(
                        "dimension {} is not on the progression of {tower}",
                        fact.dim
                    )));
                }
            }
        }
        Ok(())
    }

    fn validate(&self) -> Result<()> {
        match self.side {
            Side::Orthogonal if self.dim_v.is_none() => {
                Err(ThetaError::InvalidInput("orthogonal ledger needs dimV".into()))
            }
            Side::Symplectic => match self.dim_v_prime {
                None => Err(ThetaError::InvalidInput("symplectic ledger needs dimVp".into())),
                Some(d) if d % 2 == 1 => Err(ThetaError::InvalidInput(format!("dimVp = {d} must be even"))),
                Some(_) => Ok(()),
            },
            Side::Orthogonal => Ok(()),
        }?;
        self.facts.iter().try_for_each(|f| self.check_fact(f))
    }

    fn default_towers(&self) -> Vec<WittTower> {
        match self.field {
            Field::Real => {
                let reach = self.conservation_sum() as u32;
                let a = self.eps.bit();
                let mut towers = RealTowers::up_to(a, reach);
                towers.extend(RealTowers::up_to(a + 2, reach));
                towers
            }
            Field::Complex => vec![WittTower::Complex { eps: self.eps }],
            Field::NonArch => [TowerSign::Plus, TowerSign::Minus]
                .into_iter()
                .map(|sign| WittTower::NonArch { eps: self.eps, chi: self.chi, sign })
                .collect(),
        }
    }

    fn keys(&self, facts: &[Fact]) -> BTreeSet<IndexKey> {
        let mut labels: BTreeSet<String> = self.labels.iter().cloned().collect();
        labels.extend(facts.iter().map(|f| f.index.clone()));
        if labels.is_empty() {
            labels.insert("pi".into());
        }
        let mut keys = BTreeSet::new();
        for label in labels {
            match self.side {
                Side::Orthogonal => {
                    for twisted in [false, true] {
                        keys.insert(IndexKey { label: label.clone(), twisted, tower: None });
                    }
                }
                Side::Symplectic => {
                    for tower in self.default_towers() {
                        keys.insert(IndexKey { label: label.clone(), twisted: false, tower: Some(tower) });
                    }
                }
            }
        }
        keys.extend(facts.iter().map(Fact::key));
        keys
    }

    fn conflict_to_contradiction(&self, conflict: Conflict, facts: &[Fact], rules: Rules) -> Contradiction {
        // greedy deletion to a minimal inconsistent subset
        let mut keep: Vec<usize> = conflict.facts.iter().copied().collect();
        let mut i = 0;
        while i < keep.len() {
            let trial: Vec<Fact> =
                keep.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &id)| facts[id].clone()).collect();
            if self.propagate(&trial, rules).is_err() {
                keep.remove(i);
            } else {
                i += 1;
            }
        }
        let final_conflict = self
            .propagate(&keep.iter().map(|&id| facts[id].clone()).collect::<Vec<_>>(), rules)
            .err()
            .unwrap_or(conflict);
        Contradiction {
            kind: final_conflict.kind,
            index: final_conflict.index,
            message: final_conflict.message,
            facts: keep.iter().map(|&id| facts[id].clone()).collect(),
        }
    }

    fn run(&self, rules: Rules) -> Result<Propagation> {
        self.validate()?;
        self.propagate(&self.facts, rules).map_err(|c| self.conflict_to_contradiction(c, &self.facts, rules).into())
    }

    fn propagate(&self, facts: &[Fact], rules: Rules) -> std::result::Result<Propagation, Conflict> {
        let mut st = Propagation { intervals: BTreeMap::new(), pending: Vec::new() };
        for key in self.keys(facts) {
            let lo = match key.tower {
                Some(t) => Bound::axiom(t.kernel_dim() as i64, "anisotropic kernel dimension"),
                None => Bound::axiom(0, "non-negative"),
            };
            st.intervals.insert(key, Interval { lo, hi: None });
        }
        for (id, fact) in facts.iter().enumerate() {
            let key = fact.key();
            let deps = BTreeSet::from([id]);
            let d = fact.dim as i64;
            if fact.occurred {
                st.lower_hi(&key, d, &deps, "persistence from an occurrence")?;
            }
            if fact.exact {
                st.raise_lo(&key, d, &deps, "first occurrence")?;
            } else if !fact.occurred {
                st.raise_lo(&key, d + self.step(), &deps, "persistence from a non-occurrence")?;
            }
        }
        loop {
            let mut changed = false;
            if rules.stable_range {
                changed |= self.stable_range_pass(&mut st)?;
            }
            if rules.conservation {
                changed |= self.conservation_pass(&mut st)?;
            }
            if !changed {
                break;
            }
        }
        if rules.conservation {
            st.pending = self.pending_minima(&st);
        }
        Ok(st)
    }

    fn stable_range_pass(&self, st: &mut Propagation) -> std::result::Result<bool, Conflict> {
        let mut changed = false;
        let keys: Vec<IndexKey> = st.intervals.keys().cloned().collect();
        let none = BTreeSet::new();
        for key in keys {
            let (bound, reason) = match (self.side, key.tower) {
                (Side::Orthogonal, _) => (self.dim_v.unwrap_or(0) as i64, "stable range: dim V <= half dim V'"),
                (Side::Symplectic, Some(WittTower::Complex { eps })) => (
                    self.dim_v_prime.unwrap_or(0) as i64 + eps.bit() as i64,
                    "early occurrence over the complex numbers",
                ),
                (Side::Symplectic, Some(t)) => (
                    t.kernel_dim() as i64 + 2 * self.dim_v_prime.unwrap_or(0) as i64,
                    "stable range: Witt index >= dim V'",
                ),
                (Side::Symplectic, None) => continue,
            };
            changed |= st.lower_hi(&key, bound, &none, reason)?;
        }
        Ok(changed)
    }

    fn conservation_pass(&self, st: &mut Propagation) -> std::result::Result<bool, Conflict> {
        let mut changed = false;
        match (self.side, self.field) {
            (Side::Orthogonal, _) => {
                let total = self.dim_v.unwrap_or(0) as i64;
                for (a, b) in self.orth_pairs(st) {
                    changed |= st.sum_equals(&a, &b, total, "conservation n(pi) + n(pi x sgn) = dim V")?;
                    changed |= st.sum_equals(&b, &a, total, "conservation n(pi) + n(pi x sgn) = dim V")?;
                }
            }
            (Side::Symplectic, Field::NonArch) => {
                let total = self.conservation_sum();
                for class in self.classes(st) {
                    for x in &class.towers {
                        for y in &class.towers {
                            if x != y {
                                changed |= st.sum_equals(x, y, total, "conservation m+ + m- = 4n + 4")?;
                            }
                        }
                    }
                }
            }
            (Side::Symplectic, Field::Real) => {
                let total = self.conservation_sum();
                for class in self.classes(st) {
                    for x in &class.towers {
                        for y in &class.towers {
                            if x == y {
                                continue;
                            }
                            let adj = adjacent(&x.tower.unwrap(), &y.tower.unwrap()).unwrap_or(false);
                            let (need, reason) = if adj {
                                (total, "pairwise sums are at least 4n + 4")
                            } else {
                                (total + 2, "non-adjacent towers cannot attain 4n + 4")
                            };
                            changed |= st.sum_at_least(x, y, need, reason)?;
                        }
                    }
                    changed |= self.resolve_minimum(st, &class, total)?;
                }
            }
            (Side::Symplectic, Field::Complex) => {}
        }
        Ok(changed)
    }

    fn orth_pairs(&self, st: &Propagation) -> Vec<(IndexKey, IndexKey)> {
        st.intervals
            .keys()
            .filter(|k| !k.twisted)
            .map(|k| (k.clone(), IndexKey { twisted: true, ..k.clone() }))
            .filter(|(_, b)| st.intervals.contains_key(b))
            .collect()
    }

    /// Tracked towers grouped by label and class.
    fn classes(&self, st: &Propagation) -> Vec<TowerClassKeys> {
        let mut groups: BTreeMap<(String, u8), Vec<IndexKey>> = BTreeMap::new();
        for key in st.intervals.keys() {
            if let Some(t) = key.tower {
                let class = t.alpha().unwrap_or(0);
                groups.entry((key.label.clone(), class)).or_default().push(key.clone());
            }
        }
        groups.into_iter().map(|((label, alpha), towers)| TowerClassKeys { label, alpha, towers }).collect()
    }

    /// Adjacent pairs that can still sum to `total`, and the facts that rule
    /// out the others.
    fn minimum_candidates(
        &self,
        st: &Propagation,
        class: &TowerClassKeys,
        total: i64,
    ) -> (Vec<(IndexKey, IndexKey)>, BTreeSet<usize>) {
        let mut candidates = Vec::new();
        let mut excluded_by = BTreeSet::new();
        for (i, x) in class.towers.iter().enumerate() {
            for y in &class.towers[i + 1..] {
                if !adjacent(&x.tower.unwrap(), &y.tower.unwrap()).unwrap_or(false) {
                    continue;
                }
                let ix = &st.intervals[x];
                let iy = &st.intervals[y];
                if ix.lo.value + iy.lo.value > total {
                    excluded_by.extend(ix.lo.facts.iter().chain(&iy.lo.facts));
                    continue;
                }
                if let (Some(hx), Some(hy)) = (&ix.hi, &iy.hi) {
                    if hx.value + hy.value < total {
                        excluded_by.extend(hx.facts.iter().chain(&hy.facts));
                        continue;
                    }
                }
                candidates.push((x.clone(), y.clone()));
            }
        }
        (candidates, excluded_by)
    }

    fn resolve_minimum(
        &self,
        st: &mut Propagation,
        class: &TowerClassKeys,
        total: i64,
    ) -> std::result::Result<bool, Conflict> {
        let (candidates, excluded_by) = self.minimum_candidates(st, class, total);
        match candidates.as_slice() {
            [] => Err(Conflict {
                kind: ContradictionKind::InfeasibleMinimum,
                index: format!("{} (alpha = {})", class.label, class.alpha),
                message: "no adjacent pair of towers can attain 4n + 4".into(),
                facts: excluded_by,
            }),
            [(x, y)] => {
                let reason = "the only adjacent pair left must attain 4n + 4";
                let mut changed = st.sum_at_most(x, y, total, &excluded_by, reason)?;
                changed |= st.sum_at_most(y, x, total, &excluded_by, reason)?;
                Ok(changed)
            }
            _ => Ok(false),
        }
    }

    fn pending_minima(&self, st: &Propagation) -> Vec<PendingMinimum> {
        if self.side != Side::Symplectic || self.field != Field::Real {
            return Vec::new();
        }
        let total = self.conservation_sum();
        self.classes(st)
            .into_iter()
            .filter_map(|class| {
                let (candidates, _) = self.minimum_candidates(st, &class, total);
                (candidates.len() > 1).then(|| PendingMinimum {
                    index: class.label.clone(),
                    alpha: class.alpha,
                    candidates: candidates.iter().map(|(x, y)| (x.tower.unwrap(), y.tower.unwrap())).collect(),
                })
            })
            .collect()
    }

    /// Records a fact. On contradiction the ledger is left unchanged.
    pub fn assert_fact(&mut self, fact: Fact) -> Result<()> {
        self.check_fact(&fact)?;
        self.facts.push(fact);
        if let Err(e) = self.run(self.rules) {
            self.facts.pop();
            return Err(e);
        }
        Ok(())
    }

    /// Records that the first occurrence of `key` is exactly `dim`.
    pub fn assert_exact(&mut self, fact: Fact) -> Result<()> {
        self.assert_fact(fact.exact())
    }

    fn enable(&mut self, rules: Rules) -> Result<()> {
        let previous = self.rules;
        self.rules = rules;
        if let Err(e) = self.run(rules) {
            self.rules = previous;
            return Err(e);
        }
        Ok(())
    }

    pub fn apply_stable_range(&mut self) -> Result<()> {
        self.enable(Rules { stable_range: true, ..self.rules })
    }

    pub fn apply_conservation(&mut self) -> Result<()> {
        self.enable(Rules { conservation: true, ..self.rules })
    }

    pub fn seed_known_anchors(&mut self, anchor: Anchor) -> Result<()> {
        let facts = match anchor {
            Anchor::Sign => {
                if self.side != Side::Orthogonal {
                    return Err(ThetaError::SideMismatch("the sign anchor lives on the orthogonal side".into()));
                }
                vec![Fact::orth("1", true, self.dim_v.unwrap_or(0), true).exact().with_source("anchor: sign character")]
            }
            Anchor::TrivialRealSymplectic => {
                if self.side != Side::Symplectic || self.field != Field::Real || self.eps != Parity::Even {
                    return Err(ThetaError::SideMismatch(
                        "the trivial-representation anchor needs a real symplectic ledger with even towers".into(),
                    ));
                }
                let value = 2 * self.half_rank() as u32 + 2;
                [2, -2]
                    .into_iter()
                    .map(|k| {
                        Fact::symp("1", WittTower::Real { k }, value, true)
                            .exact()
                            .with_source("anchor: trivial representation")
                    })
                    .collect()
            }
        };
        let saved = self.facts.len();
        for fact in facts {
            if let Err(e) = self.assert_fact(fact) {
                self.facts.truncate(saved);
                return Err(e);
            }
        }
        Ok(())
    }

    /// Current intervals under the rules applied so far.
    pub fn intervals(&self) -> Result<BTreeMap<IndexKey, Interval>> {
        Ok(self.run(self.rules)?.intervals)
    }

    pub fn interval(&self, key: &IndexKey) -> Result<Option<Interval>> {
        Ok(self.intervals()?.remove(key))
    }

    /// All rules to a fixed point.
    pub fn infer(&self) -> Result<Inference> {
        let st = self.run(Rules { stable_range: true, conservation: true })?;
        Ok(Inference { ledger: self.clone(), intervals: st.intervals, pending: st.pending })
    }
}

struct TowerClassKeys {
    label: String,
    alpha: u8,
    towers: Vec<IndexKey>,
}

struct Propagation {
    intervals: BTreeMap<IndexKey, Interval>,
    pending: Vec<PendingMinimum>,
}

impl Propagation {
    fn check(&self, key: &IndexKey) -> std::result::Result<(), Conflict> {
        let iv = &self.intervals[key];
        match &iv.hi {
            Some(hi) if hi.value < iv.lo.value => Err(Conflict {
                kind: ContradictionKind::EmptyInterval,
                index: key.to_string(),
                message: format!(
                    "lower bound {} ({}) exceeds upper bound {} ({})",
                    iv.lo.value, iv.lo.reason, hi.value, hi.reason
                ),
                facts: iv.lo.facts.union(&hi.facts).copied().collect(),
            }),
            _ => Ok(()),
        }
    }

    fn raise_lo(
        &mut self,
        key: &IndexKey,
        value: i64,
        deps: &BTreeSet<usize>,
        reason: &str,
    ) -> std::result::Result<bool, Conflict> {
        let iv = self.intervals.get_mut(key).expect("tracked key");
        if value <= iv.lo.value {
            return Ok(false);
        }
        iv.lo = Bound { value, facts: deps.clone(), reason: reason.into() };
        self.check(key)?;
        Ok(true)
    }

    fn lower_hi(
        &mut self,
        key: &IndexKey,
        value: i64,
        deps: &BTreeSet<usize>,
        reason: &str,
    ) -> std::result::Result<bool, Conflict> {
        let iv = self.intervals.get_mut(key).expect("tracked key");
        if matches!(&iv.hi, Some(h) if h.value <= value) {
            return Ok(false);
        }
        iv.hi = Some(Bound { value, facts: deps.clone(), reason: reason.into() });
        self.check(key)?;
        Ok(true)
    }

    /// `x + y ≥ total` tightens the lower bound of `x`.
    fn sum_at_least(
        &mut self,
        x: &IndexKey,
        y: &IndexKey,
        total: i64,
        reason: &str,
    ) -> std::result::Result<bool, Conflict> {
        let Some(hy) = self.intervals[y].hi.clone() else { return Ok(false) };
        self.raise_lo(x, total - hy.value, &hy.facts, reason)
    }

    /// `x + y ≤ total` tightens the upper bound of `x`.
    fn sum_at_most(
        &mut self,
        x: &IndexKey,
        y: &IndexKey,
        total: i64,
        extra: &BTreeSet<usize>,
        reason: &str,
    ) -> std::result::Result<bool, Conflict> {
        let ly = self.intervals[y].lo.clone();
        let deps = ly.facts.union(extra).copied().collect();
        self.lower_hi(x, total - ly.value, &deps, reason)
    }

    fn sum_equals(
        &mut self,
        x: &IndexKey,
        y: &IndexKey,
        total: i64,
        reason: &str,
    ) -> std::result::Result<bool, Conflict> {
        let a = self.sum_at_least(x, y, total, reason)?;
        let b = self.sum_at_most(x, y, total, &BTreeSet::new(), reason)?;
        Ok(a || b)
    }
}

/// Fixed point of all rules on a ledger.
#[derive(Debug, Clone)]
pub struct Inference {
    pub ledger: Ledger,
    pub intervals: BTreeMap<IndexKey, Interval>,
    pub pending: Vec<PendingMinimum>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundReport {
    pub value: i64,
    pub reason: String,
    pub facts: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IndexReport {
    pub index: String,
    #[serde(skip_serializing_if = "std::ops::Not::not")]
    pub twisted: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tower: Option<WittTower>,
    pub lo: BoundReport,
    pub hi: Option<BoundReport>,
    pub exact: Option<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InferenceReport {
    pub side: Side,
    #[serde(rename = "dimV", skip_serializing_if = "Option::is_none")]
    pub dim_v: Option<u32>,
    #[serde(rename = "dimVp", skip_serializing_if = "Option::is_none")]
    pub dim_v_prime: Option<u32>,
    pub facts: Vec<Fact>,
    pub indices: Vec<IndexReport>,
    pub pending: Vec<PendingMinimum>,
}

impl Inference {
    pub fn get(&self, key: &IndexKey) -> Option<&Interval> {
        self.intervals.get(key)
    }

    pub fn exact_values(&self) -> BTreeMap<IndexKey, i64> {
        self.intervals.iter().filter_map(|(k, iv)| iv.exact().map(|v| (k.clone(), v))).collect()
    }

    pub fn report(&self) -> InferenceReport {
        let bound = |b: &Bound| BoundReport {
            value: b.value,
            reason: b.reason.clone(),
            facts: b.facts.iter().copied().collect(),
        };
        InferenceReport {
            side: self.ledger.side,
            dim_v: self.ledger.dim_v,
            dim_v_prime: self.ledger.dim_v_prime,
            facts: self.ledger.facts.clone(),
            indices: self
                .intervals
                .iter()
                .map(|(k, iv)| IndexReport {
                    index: k.label.clone(),
                    twisted: k.twisted,
                    tower: k.tower,
                    lo: bound(&iv.lo),
                    hi: iv.hi.as_ref().map(bound),
                    exact: iv.exact(),
                })
                .collect(),
            pending: self.pending.clone(),
        }
    }

    /// The derived intervals restated as facts.
    pub fn to_ledger(&self) -> Ledger {
        let mut out = self.ledger.clone();
        let step = out.step();
        for (key, iv) in &self.intervals {
            let fact = |dim: i64, occurred: bool| Fact {
                index: key.label.clone(),
                twisted: key.twisted,
                tower: key.tower,
                dim: dim as u32,
                occurred,
                exact: false,
                source: "derived".into(),
            };
            let floor = key.tower.map(|t| t.kernel_dim() as i64).unwrap_or(0);
            if iv.lo.value > floor {
                out.facts.push(fact(iv.lo.value - step, false));
            }
            if let Some(hi) = &iv.hi {
                out.facts.push(fact(hi.value, true));
            }
        }
        out
    }
}

// JSON: {"side","dimV","dimVp","field","eps","chi","labels","anchors","facts"}.
// Anchors are expanded into facts when parsing.

#[derive(Serialize, Deserialize)]
struct RawLedger {
    side: Side,
    #[serde(rename = "dimV", default, skip_serializing_if = "Option::is_none")]
    dim_v: Option<u32>,
    #[serde(rename = "dimVp", default, skip_serializing_if = "Option::is_none")]
    dim_v_prime: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    field: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    eps: Option<u8>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    chi: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    labels: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    anchors: Vec<Anchor>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    rules: Vec<RuleName>,
    #[serde(default)]
    facts: Vec<Fact>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
enum RuleName {
    StableRange,
    Conservation,
}

impl TryFrom<RawLedger> for Ledger {
    type Error = ThetaError;

    fn try_from(raw: RawLedger) -> Result<Ledger> {
        let mut ledger = match raw.side {
            Side::Orthogonal => Ledger::orthogonal(
                raw.dim_v.ok_or_else(|| ThetaError::InvalidInput("orthogonal ledger needs dimV".into()))?,
            ),
            Side::Symplectic => {
                let field = Field::from_code(raw.field.as_deref().unwrap_or("R"))?;
                let dvp =
                    raw.dim_v_prime.ok_or_else(|| ThetaError::InvalidInput("symplectic ledger needs dimVp".into()))?;
                Ledger::symplectic(field, Parity::from_bit(raw.eps.unwrap_or(0))?, dvp)?
            }
        };
        ledger.dim_v = raw.dim_v.or(ledger.dim_v);
        ledger.dim_v_prime = raw.dim_v_prime.or(ledger.dim_v_prime);
        if let Some(chi) = raw.chi.as_deref() {
            ledger.chi = DiscChar::from_code(chi)?;
        }
        ledger.labels = raw.labels;
        for rule in raw.rules {
            match rule {
                RuleName::StableRange => ledger.rules.stable_range = true,
                RuleName::Conservation => ledger.rules.conservation = true,
            }
        }
        for fact in &raw.facts {
            ledger.check_fact(fact)?;
        }
        ledger.facts = raw.facts;
        for anchor in raw.anchors {
            ledger.seed_known_anchors(anchor)?;
        }
        Ok(ledger)
    }
}

impl From<Ledger> for RawLedger {
    fn from(ledger: Ledger) -> RawLedger {
        let symp = ledger.side == Side::Symplectic;
        RawLedger {
            side: ledger.side,
            dim_v: ledger.dim_v,
            dim_v_prime: ledger.dim_v_prime,
            field: symp.then(|| ledger.field.code().to_string()),
            eps: symp.then(|| ledger.eps.bit()),
            chi: (symp && ledger.field == Field::NonArch).then(|| ledger.chi.code().to_string()),
            labels: ledger.labels,
            anchors: Vec::new(),
            rules: [
                (ledger.rules.stable_range, RuleName::StableRange),
                (ledger.rules.conservation, RuleName::Conservation),
            ]
            .into_iter()
            .filter_map(|(on, name)| on.then_some(name))
            .collect(),
            facts: ledger.facts,
        }
    }
}

/// Doubling parameters `s₀ = (p+q)/2 − (n+1)/2` and `α ≡ p − q (mod 4)`.
#[derive(Debug, Clone, PartialEq)]
pub struct RallisParameters<T> {
    pub s0: T,
    pub alpha: u8,
}

pub fn rallis_parameters<T: Scalar>(p: u32, q: u32, n: u32) -> RallisParameters<T> {
    let s0 = T::from_ratio(p as i64 + q as i64 - n as i64 - 1, 2);
    RallisParameters { s0, alpha: (p as i64 - q as i64).rem_euclid(4) as u8 }
}

/// `𝒬_{m,α}`: all `(p, q)` with `p + q = m` and `p − q ≡ α (mod 4)`,
/// largest `p` first.
pub fn enumerate_q(m: u32, alpha: u8) -> Vec<(u32, u32)> {
    (0..=m)
        .rev()
        .map(|p| (p, m - p))
        .filter(|&(p, q)| (p as i64 - q as i64).rem_euclid(4) == (alpha % 4) as i64)
        .collect()
}

/// `(n + 1 − q₁, n + 1 − p₁)` when both entries are non-negative.
pub fn companion_quotient(p1: u32, q1: u32, n: u32, m: u32) -> Result<Option<(u32, u32)>> {
    if p1 + q1 != m {
        return Err(ThetaError::InvalidInput(format!("p1 + q1 = {} differs from m = {m}", p1 + q1)));
    }
    if p1 > n + 1 || q1 > n + 1 {
        return Ok(None);
    }
    Ok(Some((n + 1 - q1, n + 1 - p1)))
}
