//! A small reduced ordered BDD package.
//!
//! One boolean variable per place. Nodes are hash-consed in a single table
//! and never freed, so a [`Bdd`] handle stays valid for the lifetime of its
//! store and two handles are equal exactly when they denote the same
//! function. There are two terminals and no complement edges.

use std::collections::HashMap;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BddError {
    #[error("BDD node limit of {0} reached")]
    NodeLimit(usize),
}

/// A node reference into one [`BddStore`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Bdd(u32);

impl Bdd {
    pub const FALSE: Bdd = Bdd(0);
    pub const TRUE: Bdd = Bdd(1);

    pub fn is_false(self) -> bool {
        self == Bdd::FALSE
    }

    pub fn is_true(self) -> bool {
        self == Bdd::TRUE
    }

    fn is_terminal(self) -> bool {
        self.0 < 2
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
struct Node {
    level: u32,
    low: Bdd,
    high: Bdd,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum Op {
    And,
    Or,
    Not,
    Restrict(u32, bool),
    Exists(u32),
}

/// How places map to BDD levels (level 0 is the root).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum VarOrder {
    #[default]
    Declaration,
    Reversed,
}

/// Initial size of the node table past which the operation cache is dropped;
/// doubles every time it is crossed.
const CACHE_HIGH_WATER: usize = 1 << 16;
/// Hard bound on cache entries.
const CACHE_MAX_ENTRIES: usize = 1 << 22;

pub struct BddStore {
    nodes: Vec<Node>,
    unique: HashMap<Node, Bdd>,
    cache: HashMap<(Op, Bdd, Bdd), Bdd>,
    level_of: Vec<u32>,
    place_at: Vec<usize>,
    node_limit: usize,
    high_water: usize,
}

impl BddStore {
    pub fn new(num_vars: usize, order: VarOrder) -> Self {
        let n = num_vars as u32;
        let terminal = Node {
            level: n,
            low: Bdd::FALSE,
            high: Bdd::FALSE,
        };
        let place_at: Vec<usize> = match order {
            VarOrder::Declaration => (0..num_vars).collect(),
            VarOrder::Reversed => (0..num_vars).rev().collect(),
        };
        let mut level_of = vec![0; num_vars];
        for (level, &p) in place_at.iter().enumerate() {
            level_of[p] = level as u32;
        }
        BddStore {
            nodes: vec![terminal, terminal],
            unique: HashMap::new(),
            cache: HashMap::new(),
            level_of,
            place_at,
            node_limit: usize::MAX,
            high_water: CACHE_HIGH_WATER,
        }
    }

    /// Caps the node table, terminals included.
    pub fn with_node_limit(mut self, limit: usize) -> Self {
        self.node_limit = limit.max(2);
        self
    }

    pub fn num_vars(&self) -> usize {
        self.level_of.len()
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn level(&self, place: usize) -> u32 {
        self.level_of[place]
    }

    fn node(&self, f: Bdd) -> Node {
        self.nodes[f.0 as usize]
    }

    fn level_at(&self, f: Bdd) -> u32 {
        self.nodes[f.0 as usize].level
    }

    fn mk(&mut self, level: u32, low: Bdd, high: Bdd) -> Result<Bdd, BddError> {
        if low == high {
            return Ok(low);
        }
        let node = Node { level, low, high };
        if let Some(&f) = self.unique.get(&node) {
            return Ok(f);
        }
        if self.nodes.len() >= self.node_limit {
            return Err(BddError::NodeLimit(self.node_limit));
        }
        let f = Bdd(self.nodes.len() as u32);
        self.nodes.push(node);
        self.unique.insert(node, f);
        if self.nodes.len() > self.high_water {
            self.cache.clear();
            self.high_water *= 2;
        }
        Ok(f)
    }

    fn cached(&self, key: (Op, Bdd, Bdd)) -> Option<Bdd> {
        self.cache.get(&key).copied()
    }

    fn remember(&mut self, key: (Op, Bdd, Bdd), f: Bdd) {
        if self.cache.len() >= CACHE_MAX_ENTRIES {
            self.cache.clear();
        }
        self.cache.insert(key, f);
    }

    /// The projection function of `place`'s variable.
    pub fn var(&mut self, place: usize) -> Result<Bdd, BddError> {
        self.mk(self.level_of[place], Bdd::FALSE, Bdd::TRUE)
    }

    /// Conjunction of literals, `(place, value)` pairs in any order.
    pub fn cube(&mut self, literals: &[(usize, bool)]) -> Result<Bdd, BddError> {
        let mut lits: Vec<(u32, bool)> = literals
            .iter()
            .map(|&(p, v)| (self.level_of[p], v))
            .collect();
        lits.sort_unstable();
        lits.dedup();
        if lits.windows(2).any(|w| w[0].0 == w[1].0) {
            return Ok(Bdd::FALSE);
        }
        let mut f = Bdd::TRUE;
        for &(level, value) in lits.iter().rev() {
            f = if value {
                self.mk(level, Bdd::FALSE, f)?
            } else {
                self.mk(level, f, Bdd::FALSE)?
            };
        }
        Ok(f)
    }

    pub fn not(&mut self, f: Bdd) -> Result<Bdd, BddError> {
        match f {
            Bdd::FALSE => return Ok(Bdd::TRUE),
            Bdd::TRUE => return Ok(Bdd::FALSE),
            _ => {}
        }
        let key = (Op::Not, f, f);
        if let Some(r) = self.cached(key) {
            return Ok(r);
        }
        let n = self.node(f);
        let low = self.not(n.low)?;
        let high = self.not(n.high)?;
        let r = self.mk(n.level, low, high)?;
        self.remember(key, r);
        Ok(r)
    }

    pub fn and(&mut self, a: Bdd, b: Bdd) -> Result<Bdd, BddError> {
        if a.is_false() || b.is_false() {
            return Ok(Bdd::FALSE);
        }
        if a.is_true() || a == b {
            return Ok(b);
        }
        if b.is_true() {
            return Ok(a);
        }
        self.apply(Op::And, a, b)
    }

    pub fn or(&mut self, a: Bdd, b: Bdd) -> Result<Bdd, BddError> {
        if a.is_true() || b.is_true() {
            return Ok(Bdd::TRUE);
        }
        if a.is_false() || a == b {
            return Ok(b);
        }
        if b.is_false() {
            return Ok(a);
        }
        self.apply(Op::Or, a, b)
    }

    /// `a ∧ ¬b`.
    pub fn diff(&mut self, a: Bdd, b: Bdd) -> Result<Bdd, BddError> {
        let nb = self.not(b)?;
        self.and(a, nb)
    }

    fn apply(&mut self, op: Op, a: Bdd, b: Bdd) -> Result<Bdd, BddError> {
        let (a, b) = if a <= b { (a, b) } else { (b, a) };
        let key = (op, a, b);
        if let Some(r) = self.cached(key) {
            return Ok(r);
        }
        let (na, nb) = (self.node(a), self.node(b));
        let level = na.level.min(nb.level);
        let (a0, a1) = if na.level == level { (na.low, na.high) } else { (a, a) };
        let (b0, b1) = if nb.level == level { (nb.low, nb.high) } else { (b, b) };
        let (low, high) = match op {
            Op::And => (self.and(a0, b0)?, self.and(a1, b1)?),
            Op::Or => (self.or(a0, b0)?, self.or(a1, b1)?),
            _ => unreachable!("binary operators only"),
        };
        let r = self.mk(level, low, high)?;
        self.remember(key, r);
        Ok(r)
    }

    /// Cofactor of `f` with `place` fixed to `value`.
    pub fn restrict(&mut self, f: Bdd, place: usize, value: bool) -> Result<Bdd, BddError> {
        let level = self.level_of[place];
        self.restrict_level(f, level, value)
    }

    fn restrict_level(&mut self, f: Bdd, level: u32, value: bool) -> Result<Bdd, BddError> {
        let n = self.node(f);
        if n.level > level {
            return Ok(f);
        }
        if n.level == level {
            return Ok(if value { n.high } else { n.low });
        }
        let key = (Op::Restrict(level, value), f, f);
        if let Some(r) = self.cached(key) {
            return Ok(r);
        }
        let low = self.restrict_level(n.low, level, value)?;
        let high = self.restrict_level(n.high, level, value)?;
        let r = self.mk(n.level, low, high)?;
        self.remember(key, r);
        Ok(r)
    }

    /// Existential quantification of `place`'s variable.
    pub fn exists(&mut self, f: Bdd, place: usize) -> Result<Bdd, BddError> {
        let level = self.level_of[place];
        self.exists_level(f, level)
    }

    fn exists_level(&mut self, f: Bdd, level: u32) -> Result<Bdd, BddError> {
        let n = self.node(f);
        if n.level > level {
            return Ok(f);
        }
        if n.level == level {
            return self.or(n.low, n.high);
        }
        let key = (Op::Exists(level), f, f);
        if let Some(r) = self.cached(key) {
            return Ok(r);
        }
        let low = self.exists_level(n.low, level)?;
        let high = self.exists_level(n.high, level)?;
        let r = self.mk(n.level, low, high)?;
        self.remember(key, r);
        Ok(r)
    }

    /// Evaluates `f` under a full assignment indexed by place.
    pub fn eval(&self, mut f: Bdd, assignment: &[bool]) -> bool {
        while !f.is_terminal() {
            let n = self.node(f);
            f = if assignment[self.place_at[n.level as usize]] {
                n.high
            } else {
                n.low
            };
        }
        f.is_true()
    }

    /// Number of satisfying assignments over all variables, saturating at
    /// `u128::MAX`.
    pub fn sat_count(&self, f: Bdd) -> u128 {
        let mut memo = HashMap::new();
        let c = self.count_below(f, &mut memo);
        shl_saturating(c, self.level_at(f))
    }

    fn count_below(&self, f: Bdd, memo: &mut HashMap<Bdd, u128>) -> u128 {
        match f {
            Bdd::FALSE => return 0,
            Bdd::TRUE => return 1,
            _ => {}
        }
        if let Some(&c) = memo.get(&f) {
            return c;
        }
        let n = self.node(f);
        let lo = self.count_below(n.low, memo);
        let hi = self.count_below(n.high, memo);
        let lo = shl_saturating(lo, self.level_at(n.low) - n.level - 1);
        let hi = shl_saturating(hi, self.level_at(n.high) - n.level - 1);
        let c = lo.saturating_add(hi);
        memo.insert(f, c);
        c
    }

    /// Whether `f` has a satisfying assignment setting every listed place to
    /// true, i.e. `f ∧ ⋀ places ≠ 0`. Allocates no nodes.
    pub fn satisfiable_with(&self, f: Bdd, places: &[usize]) -> bool {
        let mut forced = vec![false; self.num_vars()];
        for &p in places {
            forced[self.level_of[p] as usize] = true;
        }
        let mut memo = HashMap::new();
        self.sat_forced(f, &forced, &mut memo)
    }

    fn sat_forced(&self, f: Bdd, forced: &[bool], memo: &mut HashMap<Bdd, bool>) -> bool {
        match f {
            Bdd::FALSE => return false,
            Bdd::TRUE => return true,
            _ => {}
        }
        if let Some(&s) = memo.get(&f) {
            return s;
        }
        let n = self.node(f);
        let s = if forced[n.level as usize] {
            self.sat_forced(n.high, forced, memo)
        } else {
            self.sat_forced(n.low, forced, memo) || self.sat_forced(n.high, forced, memo)
        };
        memo.insert(f, s);
        s
    }

    /// Places that are true in at least one satisfying assignment of `f`,
    /// or of `f ∧ forced` when a place is given. Linear in the size of `f`
    /// and allocates no nodes.
    pub fn possibly_true(&self, f: Bdd, forced: Option<usize>) -> Vec<bool> {
        let n = self.num_vars();
        let mut levels = vec![false; n];
        let forced = forced.map(|p| self.level_of[p]);
        let mut ok_memo = HashMap::new();
        if !self.completes(f, forced, &mut ok_memo) {
            return levels;
        }
        // Difference array over levels for the don't-care ranges skipped by
        // edges.
        let mut skipped = vec![0i64; n + 1];
        let mut mark_range = |from: u32, to: u32| {
            if from < to {
                skipped[from as usize] += 1;
                skipped[to as usize] -= 1;
            }
        };
        mark_range(0, self.level_at(f));

        let mut seen = std::collections::HashSet::new();
        let mut stack = vec![f];
        seen.insert(f);
        while let Some(g) = stack.pop() {
            if g.is_terminal() {
                continue;
            }
            let node = self.node(g);
            let mut children = vec![(node.high, true)];
            if forced != Some(node.level) {
                children.push((node.low, false));
            }
            for (c, is_high) in children {
                if !self.completes(c, forced, &mut ok_memo) {
                    continue;
                }
                if is_high {
                    levels[node.level as usize] = true;
                }
                mark_range(node.level + 1, self.level_at(c));
                if seen.insert(c) {
                    stack.push(c);
                }
            }
        }
        let mut acc = 0;
        for (level, slot) in levels.iter_mut().enumerate() {
            acc += skipped[level];
            if acc > 0 {
                *slot = true;
            }
        }
        let mut by_place = vec![false; n];
        for (level, &b) in levels.iter().enumerate() {
            by_place[self.place_at[level]] = b;
        }
        by_place
    }

    /// Whether `f` restricted to the forced level being true is satisfiable.
    fn completes(&self, f: Bdd, forced: Option<u32>, memo: &mut HashMap<Bdd, bool>) -> bool {
        if f.is_false() {
            return false;
        }
        let level = self.level_at(f);
        let Some(forced) = forced else { return true };
        if level > forced {
            return true;
        }
        if let Some(&s) = memo.get(&f) {
            return s;
        }
        let n = self.node(f);
        let s = if level == forced {
            !n.high.is_false()
        } else {
            self.completes(n.low, Some(forced), memo) || self.completes(n.high, Some(forced), memo)
        };
        memo.insert(f, s);
        s
    }

    /// Checks the structural ROBDD invariants over the whole node table.
    pub fn is_well_formed(&self) -> bool {
        let mut keys = std::collections::HashSet::new();
        self.nodes[2..].iter().all(|n| {
            n.low != n.high
                && n.level < self.level_at(n.low)
                && n.level < self.level_at(n.high)
                && keys.insert(*n)
        })
    }
}

fn shl_saturating(x: u128, by: u32) -> u128 {
    if x == 0 {
        0
    } else if by >= x.leading_zeros() {
        u128::MAX
    } else {
        x << by
    }
}
