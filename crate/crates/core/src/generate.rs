//! Net generators for tests and benchmarks: seeded random nets and a few
//! scalable families.

use rand::Rng;

use crate::net::{NetBuilder, PetriNet};

/// Shape limits for [`random_net`].
#[derive(Debug, Clone, Copy)]
pub struct RandomNetParams {
    pub max_places: usize,
    pub max_transitions: usize,
    pub max_weight: u32,
    pub max_tokens: u32,
    /// Probability that a place starts marked.
    pub marked_probability: f64,
    /// Probability of an arc from a given place to a given transition. Each
    /// transition also gets one weight-1 input arc from a random place.
    pub input_probability: f64,
    /// Probability of an arc from a given transition to a given place.
    pub output_probability: f64,
}

impl Default for RandomNetParams {
    fn default() -> Self {
        RandomNetParams {
            max_places: 8,
            max_transitions: 8,
            max_weight: 2,
            max_tokens: 2,
            marked_probability: 0.6,
            input_probability: 0.1,
            output_probability: 0.15,
        }
    }
}

/// An arbitrary P/T net within `params`. It may be unbounded.
pub fn random_net<R: Rng>(rng: &mut R, params: &RandomNetParams) -> PetriNet {
    let np = rng.gen_range(1..=params.max_places);
    let nt = rng.gen_range(1..=params.max_transitions);
    let mut b = NetBuilder::new();
    for p in 0..np {
        let tokens = if params.max_tokens > 0 && rng.gen_bool(params.marked_probability) {
            rng.gen_range(1..=params.max_tokens)
        } else {
            0
        };
        b.add_place(format!("p{}", p + 1), tokens).unwrap();
    }
    for t in 0..nt {
        b.add_transition(format!("t{}", t + 1)).unwrap();
        let forced = rng.gen_range(0..np);
        for p in 0..np {
            if p == forced {
                b.add_arc(format!("p{}", p + 1), format!("t{}", t + 1), 1);
            } else if rng.gen_bool(params.input_probability) {
                let w = rng.gen_range(1..=params.max_weight);
                b.add_arc(format!("p{}", p + 1), format!("t{}", t + 1), w);
            }
            if rng.gen_bool(params.output_probability) {
                let w = rng.gen_range(1..=params.max_weight);
                b.add_arc(format!("t{}", t + 1), format!("p{}", p + 1), w);
            }
        }
    }
    b.build().expect("generated net is well formed")
}

/// An ordinary net that is 1-safe by construction: a product of state
/// machines, each holding at most one token, synchronised by transitions
/// that move one token inside each component they touch. Some components
/// start empty, which makes their places dead.
pub fn random_safe_net<R: Rng>(rng: &mut R, max_places: usize, max_transitions: usize) -> PetriNet {
    let mut components: Vec<Vec<String>> = Vec::new();
    let mut b = NetBuilder::new();
    let mut placed = 0;
    while placed < max_places {
        let size = rng.gen_range(1..=(max_places - placed).min(4));
        let marked = if rng.gen_bool(0.85) {
            Some(rng.gen_range(0..size))
        } else {
            None
        };
        let c = components.len();
        let mut ids = Vec::new();
        for k in 0..size {
            let id = format!("c{c}_{k}");
            b.add_place(id.clone(), u32::from(marked == Some(k))).unwrap();
            ids.push(id);
        }
        components.push(ids);
        placed += size;
        if rng.gen_bool(0.3) {
            break;
        }
    }
    let nt = rng.gen_range(1..=max_transitions);
    for t in 0..nt {
        let tid = format!("t{}", t + 1);
        b.add_transition(tid.clone()).unwrap();
        let primary = rng.gen_range(0..components.len());
        for (c, comp) in components.iter().enumerate() {
            if c != primary && !rng.gen_bool(0.35) {
                continue;
            }
            let from = &comp[rng.gen_range(0..comp.len())];
            let to = &comp[rng.gen_range(0..comp.len())];
            b.add_arc(from.clone(), tid.clone(), 1);
            b.add_arc(tid.clone(), to.clone(), 1);
        }
    }
    b.build().expect("generated net is well formed")
}

/// `p1 -> t1 -> p2 -> ... -> pn`, one token in `p1`.
pub fn chain(n: usize) -> PetriNet {
    let mut b = NetBuilder::new();
    for p in 1..=n {
        b.add_place(format!("p{p}"), u32::from(p == 1)).unwrap();
    }
    for t in 1..n {
        b.add_transition(format!("t{t}")).unwrap();
        b.add_arc(format!("p{t}"), format!("t{t}"), 1);
        b.add_arc(format!("t{t}"), format!("p{}", t + 1), 1);
    }
    b.build().unwrap()
}

/// One marked place forked into `branches` places, followed by `dead`
/// isolated unmarked places. All forked places are pairwise concurrent.
pub fn fork(branches: usize, dead: usize) -> PetriNet {
    let mut b = NetBuilder::new();
    b.add_place("start", 1).unwrap();
    b.add_transition("split").unwrap();
    b.add_arc("start", "split", 1);
    for k in 1..=branches {
        b.add_place(format!("b{k}"), 0).unwrap();
        b.add_arc("split", format!("b{k}"), 1);
    }
    for k in 1..=dead {
        b.add_place(format!("d{k}"), 0).unwrap();
    }
    b.build().unwrap()
}

/// Dining philosophers with `n` seats: each philosopher takes the left fork,
/// then the right one, eats, and returns both.
pub fn philosophers(n: usize) -> PetriNet {
    let mut b = NetBuilder::new();
    for i in 0..n {
        b.add_place(format!("think{i}"), 1).unwrap();
        b.add_place(format!("hasleft{i}"), 0).unwrap();
        b.add_place(format!("eat{i}"), 0).unwrap();
        b.add_place(format!("fork{i}"), 1).unwrap();
    }
    for i in 0..n {
        let right = (i + 1) % n;
        let arcs = [
            ("takeleft", vec![format!("think{i}"), format!("fork{i}")], vec![format!("hasleft{i}")]),
            ("takeright", vec![format!("hasleft{i}"), format!("fork{right}")], vec![format!("eat{i}")]),
            (
                "release",
                vec![format!("eat{i}")],
                vec![format!("think{i}"), format!("fork{i}"), format!("fork{right}")],
            ),
        ];
        for (name, inputs, outputs) in arcs {
            let t = format!("{name}{i}");
            b.add_transition(t.clone()).unwrap();
            for p in inputs {
                b.add_arc(p, t.clone(), 1);
            }
            for p in outputs {
                b.add_arc(t.clone(), p, 1);
            }
        }
    }
    b.build().unwrap()
}
