//! Tietze simplification: generator elimination through relators in which a
//! generator occurs exactly once, and relator shortening by substring
//! replacement.
//!
//! Generators keep their original indices; eliminated ones are recorded with
//! the word that replaced them so that images can be resolved afterwards.

use std::collections::HashSet;

use crate::word::{push_reduced, Letter, Word};

pub const DEFAULT_BUDGET: usize = 200_000;

#[derive(Clone, Debug)]
pub struct TietzeOptions {
    /// Maximum number of moves (eliminations plus replacements).
    pub budget: usize,
    /// Longest relator used to eliminate a generator.
    pub max_elimination_length: usize,
    /// Eliminations may not push the total relator length above this
    /// multiple of the starting length.
    pub growth_factor: usize,
}

impl Default for TietzeOptions {
    fn default() -> Self {
        TietzeOptions {
            budget: DEFAULT_BUDGET,
            max_elimination_length: 64,
            growth_factor: 4,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Simplified {
    /// Surviving generators, by original index.
    pub generators: Vec<usize>,
    /// Relators over the original generator indices.
    pub relators: Vec<Word>,
    /// `(g, w)`: generator `g` was replaced by `w`, in elimination order.
    pub eliminations: Vec<(usize, Word)>,
    pub moves: usize,
    pub budget_exhausted: bool,
}

impl Simplified {
    /// Relators renumbered over `0..generators.len()`.
    pub fn compact_relators(&self) -> Vec<Word> {
        let mut pos = std::collections::HashMap::new();
        for (i, &g) in self.generators.iter().enumerate() {
            pos.insert(g, i);
        }
        self.relators
            .iter()
            .map(|r| Word::raw(r.letters().iter().map(|l| Letter::new(pos[&l.gen()], l.is_inverse())).collect()))
            .collect()
    }

    /// True iff every relator has the shape `x^-1 y^-1 x y` up to cyclic
    /// rotation and inversion, for distinct generators `x`, `y`.
    pub fn is_commutator_form(&self) -> bool {
        self.relators.iter().all(is_commutator)
    }

    /// Unordered generator pairs whose commutator is a relator.
    pub fn commutator_pairs(&self) -> HashSet<(usize, usize)> {
        self.relators
            .iter()
            .filter(|r| is_commutator(r))
            .map(|r| {
                let (x, y) = (r.letters()[0].gen(), r.letters()[1].gen());
                (x.min(y), x.max(y))
            })
            .collect()
    }
}

pub fn is_commutator(r: &Word) -> bool {
    let l = r.letters();
    if l.len() != 4 {
        return false;
    }
    let (x, y) = (l[0], l[1]);
    x.gen() != y.gen() && l[2] == x.inverse() && l[3] == y.inverse()
}

/// Simplifies `<generators | relators>` where generators are `0..n`.
pub fn simplify(n: usize, relators: &[Word], opts: &TietzeOptions) -> Simplified {
    let mut t = Tietze::new(n, relators);
    t.run(opts);
    t.finish()
}

struct Tietze {
    alive: Vec<bool>,
    relators: Vec<Option<Vec<Letter>>>,
    occurrences: Vec<Vec<u32>>,
    eliminations: Vec<(usize, Word)>,
    moves: usize,
    exhausted: bool,
}

impl Tietze {
    fn new(n: usize, relators: &[Word]) -> Self {
        let mut t = Tietze {
            alive: vec![true; n],
            relators: Vec::new(),
            occurrences: vec![Vec::new(); n],
            eliminations: Vec::new(),
            moves: 0,
            exhausted: false,
        };
        for r in relators {
            t.insert(r.letters().to_vec());
        }
        t.dedupe();
        t
    }

    fn insert(&mut self, r: Vec<Letter>) {
        let r = cyclic_reduce(r);
        if r.is_empty() {
            return;
        }
        let id = self.relators.len() as u32;
        self.index(id, &r);
        self.relators.push(Some(r));
    }

    fn index(&mut self, id: u32, r: &[Letter]) {
        for l in r {
            let occ = &mut self.occurrences[l.gen()];
            if occ.last() != Some(&id) {
                occ.push(id);
            }
        }
    }

    fn total_length(&self) -> usize {
        self.relators.iter().flatten().map(Vec::len).sum()
    }

    fn live_relators(&self) -> impl Iterator<Item = (usize, &Vec<Letter>)> {
        self.relators
            .iter()
            .enumerate()
            .filter_map(|(i, r)| r.as_ref().map(|r| (i, r)))
    }

    fn dedupe(&mut self) {
        let mut seen = HashSet::new();
        for r in self.relators.iter_mut() {
            if let Some(w) = r {
                if !seen.insert(canonical(w)) {
                    *r = None;
                }
            }
        }
    }

    fn run(&mut self, opts: &TietzeOptions) {
        let start_len = self.total_length().max(1);
        let length_cap = start_len.saturating_mul(opts.growth_factor.max(1));
        let mut elim_len = 1;
        loop {
            if self.moves >= opts.budget {
                self.exhausted = true;
                return;
            }
            let eliminated = self.elimination_round(elim_len, length_cap, opts.budget);
            if eliminated > 0 {
                self.dedupe();
                elim_len = 1;
                continue;
            }
            if self.exhausted {
                return;
            }
            if self.shorten_pass(opts.budget) {
                self.dedupe();
                elim_len = 1;
                continue;
            }
            if self.exhausted {
                return;
            }
            if elim_len >= opts.max_elimination_length {
                self.drop_abelian_consequences();
                return;
            }
            elim_len += 1;
        }
    }

    /// One pass over relators of length `<= max_len`, shortest first,
    /// eliminating a generator occurring once whenever one is found.
    fn elimination_round(&mut self, max_len: usize, length_cap: usize, budget: usize) -> usize {
        let mut order: Vec<(usize, usize)> = self
            .live_relators()
            .filter(|(_, r)| r.len() <= max_len)
            .map(|(i, r)| (r.len(), i))
            .collect();
        order.sort_unstable();
        let mut done = 0;
        let mut total = self.total_length();
        for (_, id) in order {
            if self.moves >= budget {
                self.exhausted = true;
                break;
            }
            let Some(r) = self.relators[id].as_ref() else { continue };
            if r.len() > max_len {
                continue;
            }
            let Some((pos, g)) = self.pick_once(r) else { continue };
            let growth = self.occurrence_count(g, id) * (r.len().saturating_sub(2));
            if total + growth > length_cap && r.len() > 2 {
                continue;
            }
            self.eliminate(id, pos, g);
            total = self.total_length();
            done += 1;
        }
        done
    }

    /// Generator occurring exactly once in `r`, preferring the fewest
    /// occurrences elsewhere, then the smallest index.
    fn pick_once(&self, r: &[Letter]) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize, usize)> = None;
        for (pos, l) in r.iter().enumerate() {
            let g = l.gen();
            if r.iter().filter(|m| m.gen() == g).count() != 1 {
                continue;
            }
            let weight = self.occurrences[g].len();
            if best.map_or(true, |(w, bg, _)| (weight, g) < (w, bg)) {
                best = Some((weight, g, pos));
            }
        }
        best.map(|(_, g, pos)| (pos, g))
    }

    fn occurrence_count(&self, g: usize, skip: usize) -> usize {
        self.occurrences[g]
            .iter()
            .filter(|&&id| id as usize != skip)
            .filter_map(|&id| self.relators[id as usize].as_ref())
            .map(|r| r.iter().filter(|l| l.gen() == g).count())
            .sum()
    }

    fn eliminate(&mut self, id: usize, pos: usize, g: usize) {
        let r = self.relators[id].take().expect("live relator");
        // rotate so the occurrence of g comes first: r ~ g^e X
        let rot: Vec<Letter> = r[pos..].iter().chain(&r[..pos]).copied().collect();
        let rest = &rot[1..];
        let expr: Vec<Letter> = if rot[0].is_inverse() {
            rest.to_vec()
        } else {
            rest.iter().rev().map(|l| l.inverse()).collect()
        };
        let expr_inv: Vec<Letter> = expr.iter().rev().map(|l| l.inverse()).collect();
        let users = std::mem::take(&mut self.occurrences[g]);
        for uid in users {
            let uid = uid as usize;
            let Some(old) = self.relators[uid].take() else { continue };
            if !old.iter().any(|l| l.gen() == g) {
                self.relators[uid] = Some(old);
                continue;
            }
            let mut out = Vec::with_capacity(old.len() + expr.len());
            for l in old {
                if l.gen() == g {
                    let rep = if l.is_inverse() { &expr_inv } else { &expr };
                    for &m in rep {
                        push_reduced(&mut out, m);
                    }
                } else {
                    push_reduced(&mut out, l);
                }
            }
            let out = cyclic_reduce(out);
            if !out.is_empty() {
                self.index(uid as u32, &out);
                self.relators[uid] = Some(out);
            }
        }
        self.alive[g] = false;
        self.eliminations.push((g, Word::raw(expr)));
        self.moves += 1;
    }

    /// Replaces a long cyclic subword of a relator by the shorter complement
    /// from a cyclic conjugate of another relator or its inverse.
    fn shorten_pass(&mut self, budget: usize) -> bool {
        let live: Vec<usize> = self.live_relators().map(|(i, _)| i).collect();
        let total: usize = self.total_length();
        if live.len().saturating_mul(total) > 50_000_000 {
            return false;
        }
        let mut by_len = live.clone();
        by_len.sort_by_key(|&i| (self.relators[i].as_ref().map_or(0, Vec::len), i));
        let mut changed = false;
        for &si in &by_len {
            let Some(s) = self.relators[si].clone() else { continue };
            let conjugates = cyclic_conjugates(&s);
            for &ri in &by_len {
                if ri == si {
                    continue;
                }
                loop {
                    if self.moves >= budget {
                        self.exhausted = true;
                        return changed;
                    }
                    let Some(r) = self.relators[ri].as_ref() else { break };
                    if r.len() < s.len() {
                        break;
                    }
                    match shorten_with(r, &conjugates) {
                        Some(new) => {
                            self.moves += 1;
                            changed = true;
                            let new = cyclic_reduce(new);
                            if new.is_empty() {
                                self.relators[ri] = None;
                                break;
                            }
                            self.index(ri as u32, &new);
                            self.relators[ri] = Some(new);
                        }
                        None => break,
                    }
                }
            }
        }
        changed
    }

    /// When the relators include `[x, y]` for every pair of surviving
    /// generators they present a free abelian group, whose word problem is
    /// decided by exponent sums; any other relator with zero exponent sums is
    /// a consequence and is removed.
    fn drop_abelian_consequences(&mut self) {
        let gens: Vec<usize> = (0..self.alive.len()).filter(|&g| self.alive[g]).collect();
        let mut pairs = HashSet::new();
        for (_, r) in self.live_relators() {
            let w = Word::raw(r.clone());
            if is_commutator(&w) {
                let (x, y) = (r[0].gen(), r[1].gen());
                pairs.insert((x.min(y), x.max(y)));
            }
        }
        let needed = gens.len() * gens.len().saturating_sub(1) / 2;
        if pairs.len() != needed {
            return;
        }
        for slot in self.relators.iter_mut() {
            let Some(r) = slot else { continue };
            if is_commutator(&Word::raw(r.clone())) {
                continue;
            }
            let mut sums = std::collections::HashMap::<usize, i64>::new();
            for l in r.iter() {
                *sums.entry(l.gen()).or_default() += l.sign();
            }
            if sums.values().all(|&v| v == 0) {
                *slot = None;
                self.moves += 1;
            }
        }
    }

    fn finish(self) -> Simplified {
        let generators: Vec<usize> = (0..self.alive.len()).filter(|&g| self.alive[g]).collect();
        let mut relators: Vec<Word> = self
            .relators
            .into_iter()
            .flatten()
            .map(|r| Word::raw(canonical(&r)))
            .collect();
        relators.sort_by(|a, b| (a.len(), a).cmp(&(b.len(), b)));
        relators.dedup();
        Simplified {
            generators,
            relators,
            eliminations: self.eliminations,
            moves: self.moves,
            budget_exhausted: self.exhausted,
        }
    }
}

fn cyclic_reduce(mut w: Vec<Letter>) -> Vec<Letter> {
    let mut out = Vec::with_capacity(w.len());
    for l in w.drain(..) {
        push_reduced(&mut out, l);
    }
    let (mut i, mut j) = (0, out.len());
    while j - i >= 2 && out[i] == out[j - 1].inverse() {
        i += 1;
        j -= 1;
    }
    out[i..j].to_vec()
}

fn inverse(w: &[Letter]) -> Vec<Letter> {
    w.iter().rev().map(|l| l.inverse()).collect()
}

/// All rotations of `w` and of its inverse.
fn cyclic_conjugates(w: &[Letter]) -> Vec<Vec<Letter>> {
    let inv = inverse(w);
    let mut out = Vec::with_capacity(2 * w.len());
    for base in [w, &inv[..]] {
        for k in 0..base.len() {
            out.push(base[k..].iter().chain(&base[..k]).copied().collect());
        }
    }
    out
}

/// Least rotation (Booth) of `w` or of its inverse, whichever is smaller.
pub(crate) fn canonical(w: &[Letter]) -> Vec<Letter> {
    let a = least_rotation(w);
    let inv = inverse(w);
    let b = least_rotation(&inv);
    a.min(b)
}

fn least_rotation(w: &[Letter]) -> Vec<Letter> {
    let n = w.len();
    if n == 0 {
        return Vec::new();
    }
    let at = |i: usize| w[i % n];
    let mut f: Vec<isize> = vec![-1; 2 * n];
    let mut k = 0usize;
    for j in 1..2 * n {
        let sj = at(j);
        let mut i = f[j - k - 1];
        while i != -1 && sj != at(k + i as usize + 1) {
            if sj < at(k + i as usize + 1) {
                k = j - i as usize - 1;
            }
            i = f[i as usize];
        }
        if sj != at(k + (i + 1) as usize) {
            if sj < at(k) {
                k = j;
            }
            f[j - k] = -1;
        } else {
            f[j - k] = i + 1;
        }
    }
    (0..n).map(|i| at(k + i)).collect()
}

/// If a cyclic subword of `r` of length `k` matches the first `k` letters of
/// some conjugate `c` with `2k > |c|`, replace it with the inverse of the
/// rest of `c`.
fn shorten_with(r: &[Letter], conjugates: &[Vec<Letter>]) -> Option<Vec<Letter>> {
    let n = r.len();
    let mut best: Option<(usize, usize, usize)> = None; // (gain, start, conj)
    for (ci, c) in conjugates.iter().enumerate() {
        let len = c.len();
        for start in 0..n {
            let mut k = 0;
            while k < len && k < n && r[(start + k) % n] == c[k] {
                k += 1;
            }
            if 2 * k > len {
                let gain = 2 * k - len;
                if best.map_or(true, |(g, _, _)| gain > g) {
                    best = Some((gain, start, ci));
                }
            }
        }
    }
    let (_, start, ci) = best?;
    let c = &conjugates[ci];
    let mut k = 0;
    while k < c.len() && k < n && r[(start + k) % n] == c[k] {
        k += 1;
    }
    // r ~ c[..k] Y, and c[..k] = c[k..]^-1 in the group
    let mut out = inverse(&c[k..]);
    for i in k..n {
        out.push(r[(start + i) % n]);
    }
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(gens: &[i32]) -> Word {
        Word::raw(
            gens.iter()
                .map(|&g| Letter::new(g.unsigned_abs() as usize - 1, g < 0))
                .collect(),
        )
    }

    #[test]
    fn trivial_generator_is_eliminated() {
        // <x, y | y>
        let s = simplify(2, &[w(&[2])], &TietzeOptions::default());
        assert_eq!(s.generators, vec![0]);
        assert!(s.relators.is_empty());
        assert_eq!(s.eliminations.len(), 1);
    }

    #[test]
    fn minimal_presentation_is_a_fixed_point() {
        // <x, y | [x, y]>
        let s = simplify(2, &[w(&[-1, -2, 1, 2])], &TietzeOptions::default());
        assert_eq!(s.generators, vec![0, 1]);
        assert_eq!(s.relators.len(), 1);
        assert!(s.is_commutator_form());
        assert_eq!(s.moves, 0);
    }

    #[test]
    fn substring_replacement_shortens() {
        // x y x^-1 y^-1 = 1 lets x y x^-1 y^-1 z^2 collapse to z^2
        let mut t = Tietze::new(3, &[w(&[1, 2, -1, -2]), w(&[1, 2, -1, -2, 3, 3])]);
        assert!(t.shorten_pass(100));
        let lens: Vec<usize> = t.live_relators().map(|(_, r)| r.len()).collect();
        assert!(lens.contains(&2));
    }

    #[test]
    fn canonical_form_identifies_rotations_and_inverses() {
        let a = w(&[1, 2, -1, -2]);
        let b = w(&[2, -1, -2, 1]);
        let c = a.inverse();
        let ca = canonical(a.letters());
        assert_eq!(ca, canonical(b.letters()));
        assert_eq!(ca, canonical(c.letters()));
    }

    #[test]
    fn commutator_shape() {
        assert!(is_commutator(&w(&[-1, -2, 1, 2])));
        assert!(!is_commutator(&w(&[-1, -1, 1, 1])));
        assert!(!is_commutator(&w(&[1, 2, 1, 2])));
    }
}
