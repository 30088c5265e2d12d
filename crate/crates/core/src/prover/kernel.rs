//! Interned clause representation and the inference primitives.

use alloc::vec;
use alloc::vec::Vec;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub(crate) enum Tm {
    V(u32),
    F(u32, Vec<Tm>),
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub(crate) struct Lit {
    pub pos: bool,
    pub pred: u32,
    pub args: Vec<Tm>,
}

pub(crate) type Cl = Vec<Lit>;

impl Tm {
    fn max_var(&self, acc: &mut Option<u32>) {
        match self {
            Tm::V(v) => *acc = Some(acc.map_or(*v, |m| m.max(*v))),
            Tm::F(_, args) => args.iter().for_each(|a| a.max_var(acc)),
        }
    }

    fn shift(&self, by: u32) -> Tm {
        match self {
            Tm::V(v) => Tm::V(v + by),
            Tm::F(f, args) => Tm::F(*f, args.iter().map(|a| a.shift(by)).collect()),
        }
    }

    fn size(&self) -> usize {
        match self {
            Tm::V(_) => 1,
            Tm::F(_, args) => 1 + args.iter().map(Tm::size).sum::<usize>(),
        }
    }
}

pub(crate) fn var_count(c: &Cl) -> u32 {
    let mut m = None;
    for l in c {
        l.args.iter().for_each(|a| a.max_var(&mut m));
    }
    m.map_or(0, |v| v + 1)
}

/// Symbol count, used as the secondary selection weight.
pub(crate) fn weight(c: &Cl) -> usize {
    c.iter().map(|l| 1 + l.args.iter().map(Tm::size).sum::<usize>()).sum()
}

/// Triangular substitution indexed by variable number.
struct Subst(Vec<Option<Tm>>);

impl Subst {
    fn new(n: u32) -> Subst {
        Subst(vec![None; n as usize])
    }

    fn walk<'a>(&'a self, mut t: &'a Tm) -> &'a Tm {
        while let Tm::V(v) = t {
            match &self.0[*v as usize] {
                Some(b) => t = b,
                None => break,
            }
        }
        t
    }

    fn occurs(&self, v: u32, t: &Tm) -> bool {
        match self.walk(t) {
            Tm::V(w) => *w == v,
            Tm::F(_, args) => args.iter().any(|a| self.occurs(v, a)),
        }
    }

    fn unify(&mut self, a: &Tm, b: &Tm) -> bool {
        let a = self.walk(a).clone();
        let b = self.walk(b).clone();
        match (&a, &b) {
            (Tm::V(x), Tm::V(y)) if x == y => true,
            (Tm::V(x), t) | (t, Tm::V(x)) => {
                if self.occurs(*x, t) {
                    return false;
                }
                self.0[*x as usize] = Some(t.clone());
                true
            }
            (Tm::F(f, fa), Tm::F(g, ga)) => {
                f == g && fa.len() == ga.len() && fa.iter().zip(ga).all(|(x, y)| self.unify(x, y))
            }
        }
    }

    fn apply(&self, t: &Tm) -> Tm {
        match self.walk(t) {
            Tm::V(v) => Tm::V(*v),
            Tm::F(f, args) => Tm::F(*f, args.iter().map(|a| self.apply(a)).collect()),
        }
    }

    fn apply_lit(&self, l: &Lit) -> Lit {
        Lit { pos: l.pos, pred: l.pred, args: l.args.iter().map(|a| self.apply(a)).collect() }
    }
}

fn rename(t: &Tm, map: &mut Vec<(u32, u32)>) -> Tm {
    match t {
        Tm::V(v) => {
            let next = map.len() as u32;
            let n = match map.iter().find(|(from, _)| from == v) {
                Some((_, to)) => *to,
                None => {
                    map.push((*v, next));
                    next
                }
            };
            Tm::V(n)
        }
        Tm::F(f, args) => Tm::F(*f, args.iter().map(|a| rename(a, map)).collect()),
    }
}

/// Drops repeated literals (keeping the first) and numbers variables by
/// first occurrence.
pub(crate) fn normalize(c: Cl) -> Cl {
    let mut out: Cl = Vec::with_capacity(c.len());
    for l in c {
        if !out.contains(&l) {
            out.push(l);
        }
    }
    let mut map = Vec::new();
    out.into_iter()
        .map(|l| Lit { pos: l.pos, pred: l.pred, args: l.args.iter().map(|a| rename(a, &mut map)).collect() })
        .collect()
}

pub(crate) fn is_tautology(c: &Cl) -> bool {
    c.iter().enumerate().any(|(i, a)| c[i + 1..].iter().any(|b| a.pos != b.pos && a.pred == b.pred && a.args == b.args))
}

/// Binary resolvent on `a[i]` and `b[j]`, with `b` standardized apart.
pub(crate) fn resolve(a: &Cl, i: usize, b: &Cl, j: usize) -> Option<Cl> {
    let (la, lb) = (a.get(i)?, b.get(j)?);
    if la.pos == lb.pos || la.pred != lb.pred || la.args.len() != lb.args.len() {
        return None;
    }
    let shift = var_count(a);
    let b: Cl = b
        .iter()
        .map(|l| Lit { pos: l.pos, pred: l.pred, args: l.args.iter().map(|t| t.shift(shift)).collect() })
        .collect();
    let mut s = Subst::new(var_count(&b).max(shift));
    let lb = &b[j];
    if !la.args.iter().zip(&lb.args).all(|(x, y)| s.unify(x, y)) {
        return None;
    }
    let mut out = Vec::with_capacity(a.len() + b.len() - 2);
    out.extend(a.iter().enumerate().filter(|(k, _)| *k != i).map(|(_, l)| s.apply_lit(l)));
    out.extend(b.iter().enumerate().filter(|(k, _)| *k != j).map(|(_, l)| s.apply_lit(l)));
    Some(normalize(out))
}

/// Factor of `c` merging literal `j` into literal `i`.
pub(crate) fn factor(c: &Cl, i: usize, j: usize) -> Option<Cl> {
    let (li, lj) = (c.get(i)?, c.get(j)?);
    if i == j || li.pos != lj.pos || li.pred != lj.pred || li.args.len() != lj.args.len() {
        return None;
    }
    let mut s = Subst::new(var_count(c));
    if !li.args.iter().zip(&lj.args).all(|(x, y)| s.unify(x, y)) {
        return None;
    }
    let out = c.iter().enumerate().filter(|(k, _)| *k != j).map(|(_, l)| s.apply_lit(l)).collect();
    Some(normalize(out))
}

/// One-way matching: binds variables of `p` only; variables of `t` are rigid.
fn match_tm(p: &Tm, t: &Tm, s: &mut Vec<Option<Tm>>) -> bool {
    match p {
        Tm::V(v) => match &s[*v as usize] {
            Some(b) => b == t,
            None => {
                s[*v as usize] = Some(t.clone());
                true
            }
        },
        Tm::F(f, pa) => match t {
            Tm::F(g, ta) => f == g && pa.len() == ta.len() && pa.iter().zip(ta).all(|(x, y)| match_tm(x, y, s)),
            Tm::V(_) => false,
        },
    }
}

fn subsumes_from(c: &Cl, k: usize, d: &Cl, s: &[Option<Tm>]) -> bool {
    let Some(l) = c.get(k) else { return true };
    d.iter().any(|m| {
        if m.pos != l.pos || m.pred != l.pred || m.args.len() != l.args.len() {
            return false;
        }
        let mut s2 = s.to_vec();
        l.args.iter().zip(&m.args).all(|(x, y)| match_tm(x, y, &mut s2)) && subsumes_from(c, k + 1, d, &s2)
    })
}

/// Whether `c` θ-subsumes `d` and is no longer than it.
pub(crate) fn subsumes(c: &Cl, d: &Cl) -> bool {
    c.len() <= d.len() && subsumes_from(c, 0, d, &vec![None; var_count(c) as usize])
}
