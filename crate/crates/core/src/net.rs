//! Place/transition nets and their firing rule.
//!
//! Places and transitions are numbered densely in declaration order. The
//! API uses 0-based indices; the numbers shown to users are `index + 1`.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

/// Default upper bound on the token count of a single place.
pub const DEFAULT_TOKEN_CAP: u32 = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NetError {
    #[error("identifier `{0}` is declared more than once")]
    DuplicateId(String),
    #[error("arc refers to undeclared identifier `{0}`")]
    UnknownId(String),
    #[error("arc {from} -> {to} has weight 0")]
    ZeroWeight { from: String, to: String },
    #[error("arc {from} -> {to} does not connect a place and a transition")]
    SameKindArc { from: String, to: String },
    #[error("place `{place}` starts with {tokens} tokens, above the cap of {cap}")]
    InitialOverCap { place: String, tokens: u32, cap: u32 },
    #[error("arc weight overflow between `{place}` and `{transition}`")]
    WeightOverflow { place: String, transition: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FireError {
    #[error("transition {0} is not enabled")]
    NotEnabled(usize),
    #[error("place {place} would exceed the token cap")]
    CapExceeded { place: usize },
}

/// One weighted arc end seen from a transition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Arc {
    pub place: usize,
    pub weight: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlaceDecl {
    pub id: String,
    pub initial: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransDecl {
    pub id: String,
}

/// Token count per place.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Marking(Box<[u32]>);

impl Marking {
    pub fn new(tokens: Vec<u32>) -> Self {
        Marking(tokens.into_boxed_slice())
    }

    pub fn tokens(&self, place: usize) -> u32 {
        self.0[place]
    }

    /// A place is marked when it holds at least one token.
    pub fn is_marked(&self, place: usize) -> bool {
        self.0[place] >= 1
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn total(&self) -> u64 {
        self.0.iter().map(|&n| u64::from(n)).sum()
    }

    pub fn marked_places(&self) -> impl Iterator<Item = usize> + '_ {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, &n)| n > 0)
            .map(|(p, _)| p)
    }
}

impl fmt::Debug for Marking {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

/// An immutable place/transition net.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PetriNet {
    places: Vec<PlaceDecl>,
    transitions: Vec<TransDecl>,
    pre: Vec<Vec<Arc>>,
    post: Vec<Vec<Arc>>,
    initial: Marking,
    token_cap: u32,
}

impl PetriNet {
    /// Builds a net from declaration lists. Arcs are `(source, target,
    /// weight)` triples over ids; their direction follows from which end is
    /// a place. Parallel arcs are merged by summing their weights.
    pub fn build<P, T, A, S>(places: P, transitions: T, arcs: A) -> Result<PetriNet, NetError>
    where
        P: IntoIterator<Item = (S, u32)>,
        T: IntoIterator<Item = S>,
        A: IntoIterator<Item = (S, S, u32)>,
        S: Into<String>,
    {
        let mut b = NetBuilder::new();
        for (id, tokens) in places {
            b.add_place(id, tokens)?;
        }
        for id in transitions {
            b.add_transition(id)?;
        }
        for (s, t, w) in arcs {
            b.add_arc(s, t, w);
        }
        b.build()
    }

    pub fn place_count(&self) -> usize {
        self.places.len()
    }

    pub fn transition_count(&self) -> usize {
        self.transitions.len()
    }

    pub fn places(&self) -> &[PlaceDecl] {
        &self.places
    }

    pub fn transitions(&self) -> &[TransDecl] {
        &self.transitions
    }

    pub fn place_index(&self, id: &str) -> Option<usize> {
        self.places.iter().position(|p| p.id == id)
    }

    pub fn transition_index(&self, id: &str) -> Option<usize> {
        self.transitions.iter().position(|t| t.id == id)
    }

    /// Input arcs of `t`, sorted by place.
    pub fn pre(&self, t: usize) -> &[Arc] {
        &self.pre[t]
    }

    /// Output arcs of `t`, sorted by place.
    pub fn post(&self, t: usize) -> &[Arc] {
        &self.post[t]
    }

    pub fn initial(&self) -> &Marking {
        &self.initial
    }

    pub fn token_cap(&self) -> u32 {
        self.token_cap
    }

    /// Returns the same net with a different per-place token cap.
    pub fn with_token_cap(mut self, cap: u32) -> Result<PetriNet, NetError> {
        check_cap(&self.places, cap)?;
        self.token_cap = cap;
        Ok(self)
    }

    /// The preset `•t`.
    pub fn preset(&self, t: usize) -> Vec<usize> {
        self.pre[t].iter().map(|a| a.place).collect()
    }

    /// The postset `t•`.
    pub fn postset(&self, t: usize) -> Vec<usize> {
        self.post[t].iter().map(|a| a.place).collect()
    }

    /// Transitions that put tokens into `place`.
    pub fn producers(&self, place: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.transitions.len()).filter(move |&t| self.post[t].iter().any(|a| a.place == place))
    }

    /// All arc weights equal one.
    pub fn is_ordinary(&self) -> bool {
        self.pre
            .iter()
            .chain(self.post.iter())
            .flatten()
            .all(|a| a.weight == 1)
    }

    pub fn enabled(&self, m: &Marking, t: usize) -> bool {
        self.pre[t].iter().all(|a| m.tokens(a.place) >= a.weight)
    }

    /// Fires `t` from `m`.
    pub fn fire(&self, m: &Marking, t: usize) -> Result<Marking, FireError> {
        if !self.enabled(m, t) {
            return Err(FireError::NotEnabled(t));
        }
        let mut next = m.0.clone();
        for a in &self.pre[t] {
            next[a.place] -= a.weight;
        }
        for a in &self.post[t] {
            let n = u64::from(next[a.place]) + u64::from(a.weight);
            if n > u64::from(self.token_cap) {
                return Err(FireError::CapExceeded { place: a.place });
            }
            next[a.place] = n as u32;
        }
        Ok(Marking(next))
    }
}

/// Incremental construction of a [`PetriNet`]. Arcs may be added before
/// their endpoints; ids are resolved by [`NetBuilder::build`].
#[derive(Debug, Default)]
pub struct NetBuilder {
    places: Vec<PlaceDecl>,
    transitions: Vec<TransDecl>,
    ids: HashMap<String, Node>,
    arcs: Vec<(String, String, u32)>,
    token_cap: Option<u32>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Node {
    Place(usize),
    Transition(usize),
}

impl NetBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn token_cap(&mut self, cap: u32) -> &mut Self {
        self.token_cap = Some(cap);
        self
    }

    pub fn add_place(&mut self, id: impl Into<String>, initial: u32) -> Result<usize, NetError> {
        let id = id.into();
        let index = self.places.len();
        self.declare(&id, Node::Place(index))?;
        self.places.push(PlaceDecl { id, initial });
        Ok(index)
    }

    pub fn add_transition(&mut self, id: impl Into<String>) -> Result<usize, NetError> {
        let id = id.into();
        let index = self.transitions.len();
        self.declare(&id, Node::Transition(index))?;
        self.transitions.push(TransDecl { id });
        Ok(index)
    }

    pub fn add_arc(&mut self, source: impl Into<String>, target: impl Into<String>, weight: u32) {
        self.arcs.push((source.into(), target.into(), weight));
    }

    pub fn is_place(&self, id: &str) -> bool {
        matches!(self.ids.get(id), Some(Node::Place(_)))
    }

    pub fn is_transition(&self, id: &str) -> bool {
        matches!(self.ids.get(id), Some(Node::Transition(_)))
    }

    fn declare(&mut self, id: &str, node: Node) -> Result<(), NetError> {
        if self.ids.contains_key(id) {
            return Err(NetError::DuplicateId(id.to_string()));
        }
        self.ids.insert(id.to_string(), node);
        Ok(())
    }

    pub fn build(self) -> Result<PetriNet, NetError> {
        let token_cap = self.token_cap.unwrap_or(DEFAULT_TOKEN_CAP);
        check_cap(&self.places, token_cap)?;

        let mut pre: Vec<Vec<Arc>> = vec![Vec::new(); self.transitions.len()];
        let mut post: Vec<Vec<Arc>> = vec![Vec::new(); self.transitions.len()];
        for (source, target, weight) in &self.arcs {
            let s = *self
                .ids
                .get(source)
                .ok_or_else(|| NetError::UnknownId(source.clone()))?;
            let d = *self
                .ids
                .get(target)
                .ok_or_else(|| NetError::UnknownId(target.clone()))?;
            if *weight == 0 {
                return Err(NetError::ZeroWeight {
                    from: source.clone(),
                    to: target.clone(),
                });
            }
            let (arcs, place, t) = match (s, d) {
                (Node::Place(p), Node::Transition(t)) => (&mut pre[t], p, t),
                (Node::Transition(t), Node::Place(p)) => (&mut post[t], p, t),
                _ => {
                    return Err(NetError::SameKindArc {
                        from: source.clone(),
                        to: target.clone(),
                    })
                }
            };
            match arcs.iter_mut().find(|a| a.place == place) {
                Some(a) => {
                    a.weight = a.weight.checked_add(*weight).ok_or_else(|| {
                        NetError::WeightOverflow {
                            place: self.places[place].id.clone(),
                            transition: self.transitions[t].id.clone(),
                        }
                    })?
                }
                None => arcs.push(Arc {
                    place,
                    weight: *weight,
                }),
            }
        }
        for arcs in pre.iter_mut().chain(post.iter_mut()) {
            arcs.sort_by_key(|a| a.place);
        }

        let initial = Marking::new(self.places.iter().map(|p| p.initial).collect());
        Ok(PetriNet {
            places: self.places,
            transitions: self.transitions,
            pre,
            post,
            initial,
            token_cap,
        })
    }
}

fn check_cap(places: &[PlaceDecl], cap: u32) -> Result<(), NetError> {
    match places.iter().find(|p| p.initial > cap) {
        Some(p) => Err(NetError::InitialOverCap {
            place: p.id.clone(),
            tokens: p.initial,
            cap,
        }),
        None => Ok(()),
    }
}
