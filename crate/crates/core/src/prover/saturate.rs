//! Given-clause saturation loop.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use super::kernel::{factor, is_tautology, normalize, resolve, subsumes, weight, Cl};
use super::Deadline;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Origin {
    /// (formula index, clause index within that formula)
    Input(usize, usize),
    /// (left id, left literal, right id, right literal)
    Resolve(usize, usize, usize, usize),
    /// (parent id, kept literal, merged literal)
    Factor(usize, usize, usize),
}

pub(crate) enum Status {
    /// Id of the empty clause.
    Refuted(usize),
    Saturated,
    Exhausted,
}

pub(crate) struct Engine {
    pub clauses: Vec<Cl>,
    pub origin: Vec<Origin>,
    pub iterations: usize,
    removed: Vec<bool>,
    active: Vec<usize>,
    /// (literal count, symbol weight, id): smallest clause first, then oldest.
    passive: BTreeSet<(usize, usize, usize)>,
    max_clauses: usize,
}

impl Engine {
    pub(crate) fn new(max_clauses: usize) -> Engine {
        Engine {
            clauses: Vec::new(),
            origin: Vec::new(),
            iterations: 0,
            removed: Vec::new(),
            active: Vec::new(),
            passive: BTreeSet::new(),
            max_clauses,
        }
    }

    fn push(&mut self, c: Cl, o: Origin) -> usize {
        let id = self.clauses.len();
        self.passive.insert((c.len(), weight(&c), id));
        self.clauses.push(c);
        self.origin.push(o);
        self.removed.push(false);
        id
    }

    fn forward_subsumed(&self, c: &Cl) -> bool {
        self.active.iter().any(|&a| !self.removed[a] && subsumes(&self.clauses[a], c))
    }

    /// Adds a derived clause. Returns `Some` when the search must stop.
    fn add(&mut self, c: Cl, o: Origin) -> Option<Status> {
        if is_tautology(&c) || self.forward_subsumed(&c) {
            return None;
        }
        let empty = c.is_empty();
        let id = self.push(c, o);
        if empty {
            return Some(Status::Refuted(id));
        }
        if self.clauses.len() > self.max_clauses {
            return Some(Status::Exhausted);
        }
        None
    }

    pub(crate) fn run(&mut self, inputs: Vec<(Cl, Origin)>, deadline: &dyn Deadline) -> Status {
        for (c, o) in inputs {
            let c = normalize(c);
            if is_tautology(&c) {
                continue;
            }
            let empty = c.is_empty();
            let id = self.push(c, o);
            if empty {
                return Status::Refuted(id);
            }
        }
        if self.clauses.len() > self.max_clauses {
            return Status::Exhausted;
        }

        while let Some((_, _, given)) = self.passive.pop_first() {
            if deadline.expired() {
                return Status::Exhausted;
            }
            self.iterations += 1;
            if self.removed[given] || self.forward_subsumed(&self.clauses[given]) {
                continue;
            }
            let g = self.clauses[given].clone();
            for &a in &self.active {
                if subsumes(&g, &self.clauses[a]) {
                    self.removed[a] = true;
                }
            }
            let removed = &self.removed;
            self.active.retain(|&a| !removed[a]);
            self.active.push(given);

            let mut fresh: Vec<(Cl, Origin)> = Vec::new();
            for i in 0..g.len() {
                for j in i + 1..g.len() {
                    if let Some(c) = factor(&g, i, j) {
                        fresh.push((c, Origin::Factor(given, i, j)));
                    }
                }
            }
            for &a in &self.active {
                let other = &self.clauses[a];
                for i in 0..g.len() {
                    for j in 0..other.len() {
                        if let Some(c) = resolve(&g, i, other, j) {
                            fresh.push((c, Origin::Resolve(given, i, a, j)));
                        }
                    }
                }
            }
            for (c, o) in fresh {
                if let Some(stop) = self.add(c, o) {
                    return stop;
                }
            }
        }
        Status::Saturated
    }

    /// Ids of the ancestors of `id`, in increasing order.
    pub(crate) fn ancestors(&self, id: usize) -> Vec<usize> {
        let mut seen = BTreeSet::new();
        let mut stack = alloc::vec![id];
        while let Some(n) = stack.pop() {
            if !seen.insert(n) {
                continue;
            }
            match self.origin[n] {
                Origin::Input(..) => {}
                Origin::Resolve(l, _, r, _) => {
                    stack.push(l);
                    stack.push(r);
                }
                Origin::Factor(p, _, _) => stack.push(p),
            }
        }
        seen.into_iter().collect()
    }
}
