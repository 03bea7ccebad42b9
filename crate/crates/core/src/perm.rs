//! Permutation groups from coset actions: element orders, cyclic
//! intersections, stabilizer chains and derived series.
//!
//! Points are `0..degree`; permutations act on the right, so
//! `x^(pq) = (x^p)^q` and [`Permutation::then`] is the product `pq`.

use std::collections::HashSet;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::One;
use serde::Serialize;

use crate::coset::CosetTable;
use crate::error::{Error, Result};
use crate::word::Word;

pub const DEFAULT_DEGREE_BOUND: usize = 200_000;
const DERIVED_SERIES_CAP: usize = 64;
/// Explicit transversals of the general stabilizer chain are capped at this
/// many stored points.
const TRANSVERSAL_BUDGET: usize = 64_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Permutation(Vec<u32>);

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation((0..n as u32).collect())
    }

    pub fn from_images(images: Vec<u32>) -> Result<Self> {
        let mut seen = vec![false; images.len()];
        for &i in &images {
            let slot = seen
                .get_mut(i as usize)
                .ok_or_else(|| Error::Validation(format!("image {i} out of range")))?;
            if *slot {
                return Err(Error::Validation(format!("image {i} repeated")));
            }
            *slot = true;
        }
        Ok(Permutation(images))
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.0[x] as usize
    }

    pub fn images(&self) -> &[u32] {
        &self.0
    }

    /// `self` followed by `other`.
    pub fn then(&self, other: &Permutation) -> Permutation {
        Permutation(self.0.iter().map(|&x| other.0[x as usize]).collect())
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0u32; self.0.len()];
        for (i, &x) in self.0.iter().enumerate() {
            inv[x as usize] = i as u32;
        }
        Permutation(inv)
    }

    pub fn pow(&self, k: i64) -> Permutation {
        let mut base = if k < 0 { self.inverse() } else { self.clone() };
        let mut e = k.unsigned_abs();
        let mut acc = Permutation::identity(self.degree());
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.then(&base);
            }
            base = base.then(&base);
            e >>= 1;
        }
        acc
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &x)| i as u32 == x)
    }

    pub fn first_moved_point(&self) -> Option<usize> {
        self.0.iter().enumerate().find(|(i, &x)| *i as u32 != x).map(|(i, _)| i)
    }

    pub fn cycle_lengths(&self) -> Vec<usize> {
        let mut seen = vec![false; self.0.len()];
        let mut out = Vec::new();
        for start in 0..self.0.len() {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                x = self.0[x] as usize;
                len += 1;
            }
            out.push(len);
        }
        out
    }

    /// Least common multiple of the cycle lengths.
    pub fn order(&self) -> BigUint {
        let mut lens = self.cycle_lengths();
        lens.sort_unstable();
        lens.dedup();
        lens.into_iter()
            .fold(BigUint::one(), |acc, l| acc.lcm(&BigUint::from(l)))
    }

    pub fn commutator(&self, other: &Permutation) -> Permutation {
        self.inverse().then(&other.inverse()).then(self).then(other)
    }

    /// `g^-1 self g`.
    pub fn conjugate(&self, g: &Permutation) -> Permutation {
        g.inverse().then(self).then(g)
    }
}

pub fn element_order(p: &Permutation) -> BigUint {
    p.order()
}

/// `|<p> ∩ <q>|`, by materializing both cyclic groups.
pub fn cyclic_intersection_order(p: &Permutation, q: &Permutation) -> usize {
    let powers = |g: &Permutation| {
        let mut set = HashSet::new();
        let mut x = Permutation::identity(g.degree());
        loop {
            if !set.insert(x.clone()) {
                break;
            }
            x = x.then(g);
        }
        set
    };
    let pp = powers(p);
    powers(q).iter().filter(|x| pp.contains(*x)).count()
}

/// One permutation per presentation generator.
#[derive(Clone, Debug)]
pub struct PermGroup {
    degree: usize,
    gens: Vec<Permutation>,
    inverses: Vec<Permutation>,
}

impl PermGroup {
    pub fn new(degree: usize, gens: Vec<Permutation>) -> Result<Self> {
        if gens.iter().any(|g| g.degree() != degree) {
            return Err(Error::Validation("generator degrees disagree".into()));
        }
        let inverses = gens.iter().map(Permutation::inverse).collect();
        Ok(PermGroup {
            degree,
            gens,
            inverses,
        })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.gens
    }

    pub fn identity(&self) -> Permutation {
        Permutation::identity(self.degree)
    }

    /// Product of generator images along `w`.
    pub fn evaluate(&self, w: &Word) -> Permutation {
        let mut images: Vec<u32> = (0..self.degree as u32).collect();
        for l in w.letters() {
            let g = if l.is_inverse() {
                &self.inverses[l.gen()]
            } else {
                &self.gens[l.gen()]
            };
            for x in images.iter_mut() {
                *x = g.0[*x as usize];
            }
        }
        Permutation(images)
    }

    /// Image of a single point under `w`, without building the permutation.
    pub fn trace_point(&self, mut x: usize, w: &Word) -> usize {
        for l in w.letters() {
            let g = if l.is_inverse() {
                &self.inverses[l.gen()]
            } else {
                &self.gens[l.gen()]
            };
            x = g.apply(x);
        }
        x
    }

    pub fn order(&self) -> Result<BigUint> {
        group_order(self, DEFAULT_DEGREE_BOUND)
    }
}

/// The action of the presentation generators on the live cosets of a
/// complete table (cosets renumbered compactly, coset 0 fixed).
pub fn image_of_table(t: &CosetTable) -> Result<PermGroup> {
    if !t.is_complete() {
        return Err(Error::PartialTable);
    }
    let mut compact = vec![u32::MAX; t.rows()];
    for (i, c) in t.live_cosets().enumerate() {
        compact[c] = i as u32;
    }
    let n = t.live_count();
    let rank = t.presentation().rank();
    let mut gens = Vec::with_capacity(rank);
    for g in 0..rank {
        let images: Vec<u32> = t
            .live_cosets()
            .map(|c| compact[t.raw_entry(c, 2 * g) as usize])
            .collect();
        gens.push(Permutation::from_images(images)?);
    }
    PermGroup::new(n, gens)
}

/// Exact order via a stabilizer chain.
pub fn group_order(g: &PermGroup, degree_bound: usize) -> Result<BigUint> {
    if g.degree > degree_bound {
        return Err(Error::DegreeBound {
            degree: g.degree,
            bound: degree_bound,
        });
    }
    if g.degree == 0 {
        return Ok(BigUint::one());
    }
    if let Some(sr) = Semiregular::certify(&g.gens, g.degree) {
        return Ok(BigUint::from(sr.orbit_len()));
    }
    Ok(StabChain::build(&g.gens, g.degree)?.order())
}

/// Proof that every point stabilizer of `<gens>` is trivial, so the group is
/// determined by the image of a single base point.
struct Semiregular {
    base: usize,
    orbit: Vec<u32>,
}

impl Semiregular {
    /// Shows all Schreier generators of the stabilizer of the base point fix
    /// every point: for `x` in the base orbit the map `base^w -> x^w` must be
    /// well defined. The good `x` form an orbit of the centralizer, which is
    /// generated from the maps at `base^g` when the action is regular.
    fn certify(gens: &[Permutation], degree: usize) -> Option<Semiregular> {
        let base = gens.iter().find_map(Permutation::first_moved_point).unwrap_or(0);
        let inverses: Vec<Permutation> = gens.iter().map(Permutation::inverse).collect();
        // breadth-first tree of the base orbit
        let mut pos = vec![u32::MAX; degree];
        let mut orbit = vec![base as u32];
        let mut parent: Vec<(u32, u32)> = vec![(u32::MAX, u32::MAX)];
        pos[base] = 0;
        let mut head = 0;
        while head < orbit.len() {
            let y = orbit[head] as usize;
            for (gi, g) in gens.iter().enumerate() {
                let z = g.apply(y);
                if pos[z] == u32::MAX {
                    pos[z] = orbit.len() as u32;
                    orbit.push(z as u32);
                    parent.push((head as u32, gi as u32));
                }
            }
            head += 1;
        }
        let n = orbit.len();
        // candidate map base^w -> x^w, checked on every edge of the orbit graph
        let map_from = |x: usize| -> Option<Vec<u32>> {
            let mut img = vec![0u32; n];
            img[0] = x as u32;
            for i in 1..n {
                let (p, gi) = parent[i];
                img[i] = gens[gi as usize].apply(img[p as usize] as usize) as u32;
            }
            for i in 0..n {
                for g in gens {
                    let j = pos[g.apply(orbit[i] as usize)] as usize;
                    if g.apply(img[i] as usize) as u32 != img[j] {
                        return None;
                    }
                }
            }
            Some(img)
        };
        // maps on the base orbit, indexed by orbit position
        let mut good = vec![false; n];
        good[0] = true;
        let mut maps: Vec<Vec<u32>> = Vec::new();
        for (g, gi) in gens.iter().zip(&inverses) {
            for x in [g.apply(base), gi.apply(base)] {
                let xi = pos[x] as usize;
                if good[xi] {
                    continue;
                }
                let img = map_from(x)?;
                let as_pos: Vec<u32> = img.iter().map(|&v| pos[v as usize]).collect();
                maps.push(as_pos);
                good[xi] = true;
            }
        }
        // closure of {base} under the centralizing maps
        let mut stack = vec![0usize];
        let mut reached = vec![false; n];
        reached[0] = true;
        let mut count = 1;
        while let Some(i) = stack.pop() {
            for m in &maps {
                let j = m[i] as usize;
                if !reached[j] {
                    reached[j] = true;
                    count += 1;
                    stack.push(j);
                }
            }
        }
        if count != n {
            return None;
        }
        // other orbits: a well-defined map base^w -> r^w for one representative
        let mut covered = vec![false; degree];
        for &o in &orbit {
            covered[o as usize] = true;
        }
        for r in 0..degree {
            if covered[r] {
                continue;
            }
            let img = map_from(r)?;
            for &v in &img {
                covered[v as usize] = true;
            }
            // the image must be a whole orbit of the same size
            let mut seen: HashSet<u32> = HashSet::with_capacity(n);
            if !img.iter().all(|v| seen.insert(*v)) {
                return None;
            }
        }
        Some(Semiregular { base, orbit })
    }

    fn orbit_len(&self) -> usize {
        self.orbit.len()
    }
}

/// Subgroup of a semiregular group, represented by the orbit of the base.
struct OrbitSubgroup {
    base: usize,
    gens: Vec<Permutation>,
    in_orbit: Vec<bool>,
    orbit: Vec<u32>,
}

impl OrbitSubgroup {
    fn new(base: usize, degree: usize) -> Self {
        let mut in_orbit = vec![false; degree];
        in_orbit[base] = true;
        OrbitSubgroup {
            base,
            gens: Vec::new(),
            in_orbit,
            orbit: vec![base as u32],
        }
    }

    fn contains(&self, p: &Permutation) -> bool {
        self.in_orbit[p.apply(self.base)]
    }

    /// Adds `p` if it is not already a member; true when the group grew.
    fn add(&mut self, p: Permutation) -> bool {
        if self.contains(&p) {
            return false;
        }
        self.gens.push(p);
        let mut head = 0;
        // the new generator can reach fresh points from any old point
        while head < self.orbit.len() {
            let y = self.orbit[head] as usize;
            for g in &self.gens {
                let z = g.apply(y);
                if !self.in_orbit[z] {
                    self.in_orbit[z] = true;
                    self.orbit.push(z as u32);
                }
            }
            head += 1;
        }
        true
    }

    fn order(&self) -> usize {
        self.orbit.len()
    }
}

/// Deterministic Schreier–Sims with explicit transversals.
pub struct StabChain {
    degree: usize,
    levels: Vec<Level>,
}

struct Level {
    base: usize,
    gens: Vec<Permutation>,
    /// `trans[x]` maps the base point to `x`.
    trans: Vec<Option<Permutation>>,
    orbit: Vec<usize>,
}

impl StabChain {
    pub fn build(gens: &[Permutation], degree: usize) -> Result<StabChain> {
        let mut chain = StabChain {
            degree,
            levels: Vec::new(),
        };
        for g in gens {
            chain.sift_and_add(0, g.clone())?;
        }
        Ok(chain)
    }

    pub fn order(&self) -> BigUint {
        self.levels
            .iter()
            .fold(BigUint::one(), |acc, l| acc * BigUint::from(l.orbit.len()))
    }

    pub fn base(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.base).collect()
    }

    pub fn contains(&self, g: &Permutation) -> bool {
        let (h, _) = self.strip(g.clone(), 0);
        h.is_identity()
    }

    fn strip(&self, mut h: Permutation, from: usize) -> (Permutation, usize) {
        for (i, l) in self.levels.iter().enumerate().skip(from) {
            let x = h.apply(l.base);
            match &l.trans[x] {
                Some(u) => h = h.then(&u.inverse()),
                None => return (h, i),
            }
        }
        (h, self.levels.len())
    }

    fn sift_and_add(&mut self, start: usize, g: Permutation) -> Result<()> {
        let (h, j) = self.strip(g, start);
        if h.is_identity() {
            return Ok(());
        }
        if j == self.levels.len() {
            let base = h.first_moved_point().expect("non-identity moves a point");
            let mut trans = vec![None; self.degree];
            trans[base] = Some(Permutation::identity(self.degree));
            self.levels.push(Level {
                base,
                gens: Vec::new(),
                trans,
                orbit: vec![base],
            });
        }
        for l in (start..=j).rev() {
            self.add_generator(l, h.clone())?;
        }
        Ok(())
    }

    fn add_generator(&mut self, level: usize, h: Permutation) -> Result<()> {
        self.levels[level].gens.push(h);
        let new_gen = self.levels[level].gens.len() - 1;
        // (point index, first generator index still to test)
        let old_len = self.levels[level].orbit.len();
        let mut pending: Vec<(usize, usize)> = (0..old_len).map(|i| (i, new_gen)).collect();
        let mut next_fresh = old_len;
        loop {
            let Some((oi, from)) = pending.pop() else {
                if next_fresh < self.levels[level].orbit.len() {
                    pending.push((next_fresh, 0));
                    next_fresh += 1;
                    continue;
                }
                break;
            };
            let ngens = self.levels[level].gens.len();
            for si in from..ngens {
                let lvl = &self.levels[level];
                let beta = lvl.orbit[oi];
                let s = &lvl.gens[si];
                let gamma = s.apply(beta);
                let u_beta = lvl.trans[beta].as_ref().expect("orbit point has transversal");
                let u_beta_s = u_beta.then(s);
                match &lvl.trans[gamma] {
                    None => {
                        let stored: usize = self.levels.iter().map(|l| l.orbit.len()).sum();
                        if stored * self.degree > TRANSVERSAL_BUDGET {
                            return Err(Error::Resource(
                                "stabilizer chain transversal budget exceeded".into(),
                            ));
                        }
                        let lvl = &mut self.levels[level];
                        lvl.trans[gamma] = Some(u_beta_s);
                        lvl.orbit.push(gamma);
                    }
                    Some(u_gamma) => {
                        let sg = u_beta_s.then(&u_gamma.inverse());
                        if !sg.is_identity() {
                            self.sift_and_add(level + 1, sg)?;
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Solvability {
    Solvable,
    NotSolvable,
    Undecided,
}

#[derive(Clone, Debug, Serialize)]
pub struct DerivedSeries {
    /// `|G|, |G'|, |G''|, ...` down to the terminal term.
    pub orders: Vec<String>,
    pub verdict: Solvability,
}

impl DerivedSeries {
    pub fn is_solvable(&self) -> bool {
        self.verdict == Solvability::Solvable
    }
}

/// Successive commutator subgroups until the series stabilizes.
pub fn derived_series(g: &PermGroup, degree_bound: usize) -> Result<DerivedSeries> {
    if g.degree > degree_bound {
        return Err(Error::DegreeBound {
            degree: g.degree,
            bound: degree_bound,
        });
    }
    if g.degree == 0 || g.gens.iter().all(Permutation::is_identity) {
        return Ok(DerivedSeries {
            orders: vec!["1".into()],
            verdict: Solvability::Solvable,
        });
    }
    if let Some(sr) = Semiregular::certify(&g.gens, g.degree) {
        return Ok(derived_series_semiregular(g, sr.base));
    }
    derived_series_general(g)
}

fn derived_series_semiregular(g: &PermGroup, base: usize) -> DerivedSeries {
    let mut current = OrbitSubgroup::new(base, g.degree);
    for p in &g.gens {
        current.add(p.clone());
    }
    let mut orders = vec![current.order().to_string()];
    for _ in 0..DERIVED_SERIES_CAP {
        if current.order() == 1 {
            return DerivedSeries {
                orders,
                verdict: Solvability::Solvable,
            };
        }
        let gens = current.gens.clone();
        let mut next = OrbitSubgroup::new(base, g.degree);
        for (i, x) in gens.iter().enumerate() {
            for y in &gens[i + 1..] {
                next.add(x.commutator(y));
            }
        }
        // normal closure under the previous term
        let mut k = 0;
        while k < next.gens.len() {
            let h = next.gens[k].clone();
            for p in &gens {
                next.add(h.conjugate(p));
            }
            k += 1;
        }
        if next.order() == current.order() {
            orders.push(next.order().to_string());
            return DerivedSeries {
                orders,
                verdict: Solvability::NotSolvable,
            };
        }
        orders.push(next.order().to_string());
        current = next;
    }
    DerivedSeries {
        orders,
        verdict: Solvability::Undecided,
    }
}

fn derived_series_general(g: &PermGroup) -> Result<DerivedSeries> {
    let n = g.degree;
    let mut gens: Vec<Permutation> = g.gens.iter().filter(|p| !p.is_identity()).cloned().collect();
    let mut chain = StabChain::build(&gens, n)?;
    let mut orders = vec![chain.order().to_string()];
    for _ in 0..DERIVED_SERIES_CAP {
        if chain.order().is_one() {
            return Ok(DerivedSeries {
                orders,
                verdict: Solvability::Solvable,
            });
        }
        let mut next_gens: Vec<Permutation> = Vec::new();
        let mut next = StabChain::build(&[], n)?;
        let push = |p: Permutation, next_gens: &mut Vec<Permutation>, next: &mut StabChain| -> Result<()> {
            if !p.is_identity() && !next.contains(&p) {
                next_gens.push(p);
                *next = StabChain::build(next_gens, n)?;
            }
            Ok(())
        };
        for (i, x) in gens.iter().enumerate() {
            for y in &gens[i + 1..] {
                push(x.commutator(y), &mut next_gens, &mut next)?;
            }
        }
        let mut k = 0;
        while k < next_gens.len() {
            let h = next_gens[k].clone();
            for p in &gens {
                push(h.conjugate(p), &mut next_gens, &mut next)?;
            }
            k += 1;
        }
        let verdict_stuck = next.order() == chain.order();
        orders.push(next.order().to_string());
        if verdict_stuck {
            return Ok(DerivedSeries {
                orders,
                verdict: Solvability::NotSolvable,
            });
        }
        gens = next_gens;
        chain = next;
    }
    Ok(DerivedSeries {
        orders,
        verdict: Solvability::Undecided,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coset::{enumerate, EnumConfig};
    use crate::word::Presentation;

    fn perm(v: &[u32]) -> Permutation {
        Permutation::from_images(v.to_vec()).unwrap()
    }

    fn s3_image() -> PermGroup {
        let p = Presentation::parse(&["a", "b"], &["a^2", "b^3", "(a*b)^2"]).unwrap();
        let t = enumerate(&p, &[Word::gen(0)], &EnumConfig::default()).unwrap();
        image_of_table(&t).unwrap()
    }

    #[test]
    fn orders_and_intersections() {
        let id = Permutation::identity(5);
        assert_eq!(element_order(&id), BigUint::one());
        let p = perm(&[1, 0, 2, 3, 4]);
        let q = perm(&[0, 1, 3, 4, 2]);
        assert_eq!(element_order(&p.then(&q)), BigUint::from(6u32));
        assert_eq!(cyclic_intersection_order(&p, &q), 1);
        let c4 = perm(&[1, 2, 3, 0, 4]);
        assert_eq!(cyclic_intersection_order(&c4, &c4), 4);
        assert_eq!(cyclic_intersection_order(&c4, &c4.pow(2)), 2);
    }

    #[test]
    fn s3_coset_image() {
        let g = s3_image();
        assert_eq!(g.degree(), 3);
        assert_eq!(g.order().unwrap(), BigUint::from(6u32));
        let ds = derived_series(&g, DEFAULT_DEGREE_BOUND).unwrap();
        assert_eq!(ds.orders, vec!["6", "3", "1"]);
        assert!(ds.is_solvable());
    }

    #[test]
    fn symmetric_group_of_degree_five_is_not_solvable() {
        let g = PermGroup::new(5, vec![perm(&[1, 0, 2, 3, 4]), perm(&[1, 2, 3, 4, 0])]).unwrap();
        assert_eq!(g.order().unwrap(), BigUint::from(120u32));
        let ds = derived_series(&g, DEFAULT_DEGREE_BOUND).unwrap();
        assert_eq!(ds.orders, vec!["120", "60", "60"]);
        assert_eq!(ds.verdict, Solvability::NotSolvable);
    }

    #[test]
    fn abelian_series_has_one_step() {
        let g = PermGroup::new(6, vec![perm(&[1, 2, 0, 3, 4, 5]), perm(&[0, 1, 2, 4, 3, 5])]).unwrap();
        let ds = derived_series(&g, DEFAULT_DEGREE_BOUND).unwrap();
        assert_eq!(ds.orders, vec!["6", "1"]);
    }

    #[test]
    fn trivial_group_and_degree_bound() {
        let g = PermGroup::new(3, vec![Permutation::identity(3)]).unwrap();
        assert_eq!(g.order().unwrap(), BigUint::one());
        assert!(matches!(group_order(&g, 2), Err(Error::DegreeBound { .. })));
    }

    #[test]
    fn regular_fast_path_agrees_with_chain() {
        // regular action of S3 on itself
        let p = Presentation::parse(&["a", "b"], &["a^2", "b^3", "(a*b)^2"]).unwrap();
        let t = enumerate(&p, &[], &EnumConfig::default()).unwrap();
        let g = image_of_table(&t).unwrap();
        assert!(Semiregular::certify(g.generators(), g.degree()).is_some());
        let chain = StabChain::build(g.generators(), g.degree()).unwrap();
        assert_eq!(chain.order(), BigUint::from(6u32));
        // a non-regular transitive action is rejected by the fast path
        let g3 = s3_image();
        assert!(Semiregular::certify(g3.generators(), g3.degree()).is_none());
    }

    #[test]
    fn evaluate_basics() {
        let g = s3_image();
        assert!(g.evaluate(&Word::identity()).is_identity());
        let w = Word::gen(0) * Word::gen(1);
        let ww = &w * &w.inverse();
        assert!(g.evaluate(&ww).is_identity());
        assert!(g.evaluate(&Word::raw([w.letters(), w.inverse().letters()].concat())).is_identity());
    }

    #[test]
    fn element_order_of_power() {
        let p = perm(&[1, 2, 3, 4, 5, 0, 7, 6]);
        assert_eq!(element_order(&p), BigUint::from(6u32));
        assert_eq!(element_order(&p.pow(4)), BigUint::from(3u32));
        assert_eq!(element_order(&p.pow(-3)), BigUint::from(2u32));
    }
}
