//! Todd–Coxeter coset enumeration.
//!
//! Cosets are numbered from 0; coset 0 is the subgroup itself. Text and JSON
//! exports number them from 1. Columns follow [`Letter::index`]: generator
//! `i` is column `2i`, its inverse column `2i + 1`.

use std::collections::VecDeque;
use std::fmt::Write as _;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::word::{Letter, Presentation, Word};

pub const UNDEF: u32 = u32::MAX;

pub const DEFAULT_MAX_COSETS: usize = 2_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Strategy {
    /// Relator-based scanning (Haselgrove–Leech–Trotter).
    Hlt,
    /// Deduction-based (Felsch).
    Felsch,
}

impl std::str::FromStr for Strategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "hlt" => Ok(Strategy::Hlt),
            "felsch" => Ok(Strategy::Felsch),
            _ => Err(Error::Parse(format!("unknown strategy {s:?}"))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct EnumConfig {
    /// Bound on the number of cosets ever defined.
    pub max_cosets: usize,
    pub strategy: Strategy,
    /// HLT only: when the bound is hit, run deduction passes over the whole
    /// table before giving up.
    pub lookahead: bool,
}

impl Default for EnumConfig {
    fn default() -> Self {
        EnumConfig {
            max_cosets: DEFAULT_MAX_COSETS,
            strategy: Strategy::Felsch,
            lookahead: true,
        }
    }
}

impl EnumConfig {
    pub fn with_limit(max_cosets: usize) -> Self {
        EnumConfig {
            max_cosets: max_cosets.max(1),
            ..Default::default()
        }
    }

    pub fn strategy(mut self, s: Strategy) -> Self {
        self.strategy = s;
        self
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Complete,
    Partial,
}

/// Result of an enumeration. Rows of dead cosets are kept until
/// [`CosetTable::standardize`] compacts them.
#[derive(Clone, Debug)]
pub struct CosetTable {
    presentation: Presentation,
    subgroup: Vec<Word>,
    cols: usize,
    table: Vec<u32>,
    live: Vec<bool>,
    live_count: usize,
    defined: usize,
    status: Status,
}

impl CosetTable {
    pub fn presentation(&self) -> &Presentation {
        &self.presentation
    }

    pub fn subgroup(&self) -> &[Word] {
        &self.subgroup
    }

    pub fn status(&self) -> Status {
        self.status
    }

    pub fn is_complete(&self) -> bool {
        self.status == Status::Complete
    }

    pub fn live_count(&self) -> usize {
        self.live_count
    }

    /// Number of cosets ever defined during the enumeration.
    pub fn defined_count(&self) -> usize {
        self.defined
    }

    /// Number of rows, live or dead.
    pub fn rows(&self) -> usize {
        self.live.len()
    }

    pub fn columns(&self) -> usize {
        self.cols
    }

    pub fn is_live(&self, c: usize) -> bool {
        self.live.get(c).copied().unwrap_or(false)
    }

    pub fn live_cosets(&self) -> impl Iterator<Item = usize> + '_ {
        self.live.iter().enumerate().filter(|(_, l)| **l).map(|(c, _)| c)
    }

    #[inline]
    pub fn entry(&self, c: usize, l: Letter) -> Option<usize> {
        let v = self.table[c * self.cols + l.index()];
        (v != UNDEF).then_some(v as usize)
    }

    /// Raw access for hot loops; `UNDEF` marks a missing entry.
    #[inline]
    pub fn raw_entry(&self, c: usize, col: usize) -> u32 {
        self.table[c * self.cols + col]
    }

    /// Follows `w` from `c`; `None` as soon as an entry is missing.
    pub fn trace(&self, c: usize, w: &Word) -> Result<Option<usize>> {
        if !self.is_live(c) {
            return Err(Error::DeadCoset(c));
        }
        Ok(self.trace_unchecked(c, w.letters()))
    }

    pub(crate) fn trace_unchecked(&self, mut c: usize, w: &[Letter]) -> Option<usize> {
        for &l in w {
            let next = self.table[c * self.cols + l.index()];
            if next == UNDEF {
                return None;
            }
            c = next as usize;
        }
        Some(c)
    }

    /// Renumbers cosets in breadth-first order over columns and drops dead rows.
    pub fn standardize(&self) -> Result<CosetTable> {
        if !self.is_complete() {
            return Err(Error::PartialTable);
        }
        let n = self.live_count;
        let mut new_of = vec![UNDEF; self.rows()];
        let mut order = Vec::with_capacity(n);
        new_of[0] = 0;
        order.push(0usize);
        let mut head = 0;
        while head < order.len() {
            let c = order[head];
            head += 1;
            for col in 0..self.cols {
                let d = self.raw_entry(c, col) as usize;
                if new_of[d] == UNDEF {
                    new_of[d] = order.len() as u32;
                    order.push(d);
                }
            }
        }
        debug_assert_eq!(order.len(), n);
        let mut table = Vec::with_capacity(n * self.cols);
        for &c in &order {
            for col in 0..self.cols {
                table.push(new_of[self.raw_entry(c, col) as usize]);
            }
        }
        Ok(CosetTable {
            presentation: self.presentation.clone(),
            subgroup: self.subgroup.clone(),
            cols: self.cols,
            table,
            live: vec![true; n],
            live_count: n,
            defined: self.defined,
            status: Status::Complete,
        })
    }

    pub fn is_standard(&self) -> bool {
        if !self.is_complete() || self.rows() != self.live_count {
            return false;
        }
        let mut next = 1u32;
        for c in 0..self.rows() {
            for col in 0..self.cols {
                let d = self.raw_entry(c, col);
                if d == next {
                    next += 1;
                } else if d > next {
                    return false;
                }
            }
        }
        true
    }

    /// True iff every subgroup generator fixes every coset, i.e. the
    /// subgroup coincides with the core of the coset action.
    pub fn is_normal(&self) -> Result<bool> {
        if !self.is_complete() {
            return Err(Error::PartialTable);
        }
        Ok(self.subgroup.iter().all(|s| {
            self.live_cosets()
                .all(|c| self.trace_unchecked(c, s.letters()) == Some(c))
        }))
    }

    /// Every relator closes at every live coset and entries are mutually inverse.
    pub fn is_consistent(&self) -> bool {
        for c in self.live_cosets() {
            for col in 0..self.cols {
                let d = self.raw_entry(c, col);
                if d != UNDEF && (!self.is_live(d as usize) || self.raw_entry(d as usize, col ^ 1) != c as u32)
                {
                    return false;
                }
            }
        }
        if self.is_complete() {
            for c in self.live_cosets() {
                for r in &self.presentation.relators {
                    if self.trace_unchecked(c, r.letters()) != Some(c) {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// One line per live coset: `c: c·a c·a^-1 c·b c·b^-1`, 1-based, `-` if undefined.
    pub fn to_text(&self) -> String {
        let compact = self.compact_numbering();
        let mut out = String::new();
        for c in self.live_cosets() {
            write!(out, "{}:", compact[c] + 1).unwrap();
            for col in 0..self.cols {
                match self.raw_entry(c, col) {
                    UNDEF => out.push_str(" -"),
                    d => write!(out, " {}", compact[d as usize] + 1).unwrap(),
                }
            }
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        let compact = self.compact_numbering();
        let al = &self.presentation.alphabet;
        let columns: Vec<String> = (0..self.cols)
            .map(|col| {
                let l = Letter::from_index(col);
                if l.is_inverse() {
                    format!("{}^-1", al.name(l.gen()))
                } else {
                    al.name(l.gen()).to_string()
                }
            })
            .collect();
        let rows: Vec<Vec<Option<u32>>> = self
            .live_cosets()
            .map(|c| {
                (0..self.cols)
                    .map(|col| match self.raw_entry(c, col) {
                        UNDEF => None,
                        d => Some(compact[d as usize] as u32 + 1),
                    })
                    .collect()
            })
            .collect();
        serde_json::json!({
            "status": self.status,
            "cosets": self.live_count,
            "columns": columns,
            "rows": rows,
        })
    }

    fn compact_numbering(&self) -> Vec<usize> {
        let mut map = vec![usize::MAX; self.rows()];
        for (i, c) in self.live_cosets().enumerate() {
            map[c] = i;
        }
        map
    }

    /// Test hook: overwrite a single entry without keeping inverse consistency.
    #[doc(hidden)]
    pub fn corrupt_entry(&mut self, c: usize, col: usize, value: u32) {
        self.table[c * self.cols + col] = value;
    }
}

/// Enumerates the cosets of `<subgroup>` in the group presented by `p`.
///
/// Reaching `cfg.max_cosets` is not an error; the result is then a partial
/// table in which every recorded entry is a proven equality.
pub fn enumerate(p: &Presentation, subgroup: &[Word], cfg: &EnumConfig) -> Result<CosetTable> {
    for s in subgroup {
        p.check_word(s)
            .map_err(|_| Error::InvalidWord("subgroup generator outside the alphabet".into()))?;
    }
    let mut e = Enumerator::new(p, subgroup, cfg.max_cosets.max(1));
    match cfg.strategy {
        Strategy::Hlt => e.run_hlt(cfg.lookahead),
        Strategy::Felsch => e.run_felsch(),
    }
    Ok(e.finish(p, subgroup))
}

/// Certificate outcome for [`certify_trivial_word`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Certificate {
    Proven,
    Unknown,
}

/// Enumerates cosets of the trivial subgroup (HLT, bounded) and reports
/// `Proven` iff `w` traces coset 0 back to itself. Never claims `w != 1`.
pub fn certify_trivial_word(p: &Presentation, w: &Word, cfg: &EnumConfig) -> Result<Certificate> {
    p.check_word(w)?;
    if w.free_reduce().is_empty() {
        return Ok(Certificate::Proven);
    }
    let cfg = EnumConfig {
        strategy: Strategy::Hlt,
        ..cfg.clone()
    };
    let t = enumerate(p, &[], &cfg)?;
    Ok(certify_in_table(&t, w))
}

/// Checks a word against an existing table of the trivial subgroup.
pub fn certify_in_table(t: &CosetTable, w: &Word) -> Certificate {
    match t.trace_unchecked(0, w.letters()) {
        Some(0) => Certificate::Proven,
        _ => Certificate::Unknown,
    }
}

struct Enumerator {
    cols: usize,
    table: Vec<u32>,
    parent: Vec<u32>,
    max: usize,
    live_count: usize,
    overflow: bool,
    relators: Vec<Vec<usize>>,
    subgroup: Vec<Vec<usize>>,
    /// For each column, every cyclic conjugate of every relator (and its
    /// inverse) that starts with that column.
    conjugates: Vec<Vec<Vec<usize>>>,
    deductions: Vec<(u32, u32)>,
    track_deductions: bool,
    queue: VecDeque<u32>,
    #[cfg(debug_assertions)]
    check_consistency: bool,
}

impl Enumerator {
    fn new(p: &Presentation, subgroup: &[Word], max: usize) -> Self {
        let cols = 2 * p.rank();
        let to_cols = |w: &Word| w.letters().iter().map(|l| l.index()).collect::<Vec<_>>();
        let relators: Vec<Vec<usize>> = p
            .relators
            .iter()
            .map(|r| r.cyclic_reduce())
            .filter(|r| !r.is_empty())
            .map(|r| to_cols(&r))
            .collect();
        let subgroup: Vec<Vec<usize>> = subgroup
            .iter()
            .map(|s| s.free_reduce())
            .filter(|s| !s.is_empty())
            .map(|s| to_cols(&s))
            .collect();
        let mut conjugates = vec![Vec::new(); cols];
        for r in &relators {
            let inv: Vec<usize> = r.iter().rev().map(|c| c ^ 1).collect();
            for word in [r, &inv] {
                for k in 0..word.len() {
                    let rot: Vec<usize> = word[k..].iter().chain(&word[..k]).copied().collect();
                    let list: &mut Vec<Vec<usize>> = &mut conjugates[rot[0]];
                    if !list.contains(&rot) {
                        list.push(rot);
                    }
                }
            }
        }
        let mut e = Enumerator {
            cols,
            table: Vec::new(),
            parent: Vec::new(),
            max,
            live_count: 0,
            overflow: false,
            relators,
            subgroup,
            conjugates,
            deductions: Vec::new(),
            track_deductions: false,
            queue: VecDeque::new(),
            #[cfg(debug_assertions)]
            check_consistency: true,
        };
        e.new_coset();
        e
    }

    #[inline]
    fn get(&self, c: u32, col: usize) -> u32 {
        self.table[c as usize * self.cols + col]
    }

    #[inline]
    fn set(&mut self, c: u32, col: usize, d: u32) {
        self.table[c as usize * self.cols + col] = d;
    }

    #[inline]
    fn is_live(&self, c: u32) -> bool {
        self.parent[c as usize] == c
    }

    fn new_coset(&mut self) -> u32 {
        let c = self.parent.len() as u32;
        self.parent.push(c);
        self.table.extend(std::iter::repeat(UNDEF).take(self.cols));
        self.live_count += 1;
        c
    }

    /// Defines `c·col` as a fresh coset; false once the bound is reached.
    fn define(&mut self, c: u32, col: usize) -> bool {
        if self.parent.len() >= self.max {
            self.overflow = true;
            return false;
        }
        let d = self.new_coset();
        self.set(c, col, d);
        self.set(d, col ^ 1, c);
        if self.track_deductions {
            self.deductions.push((c, col as u32));
        }
        true
    }

    fn rep(&mut self, c: u32) -> u32 {
        let mut r = c;
        while self.parent[r as usize] != r {
            r = self.parent[r as usize];
        }
        let mut x = c;
        while self.parent[x as usize] != r {
            let next = self.parent[x as usize];
            self.parent[x as usize] = r;
            x = next;
        }
        r
    }

    fn merge(&mut self, a: u32, b: u32) {
        let (ra, rb) = (self.rep(a), self.rep(b));
        if ra == rb {
            return;
        }
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[hi as usize] = lo;
        self.live_count -= 1;
        self.queue.push_back(hi);
    }

    fn coincidence(&mut self, a: u32, b: u32) {
        self.merge(a, b);
        while let Some(e) = self.queue.pop_front() {
            for col in 0..self.cols {
                let f = self.get(e, col);
                if f == UNDEF {
                    continue;
                }
                self.set(f, col ^ 1, UNDEF);
                let mu = self.rep(e);
                let nu = self.rep(f);
                let mu_x = self.get(mu, col);
                if mu_x != UNDEF {
                    self.merge(nu, mu_x);
                } else {
                    let nu_y = self.get(nu, col ^ 1);
                    if nu_y != UNDEF {
                        self.merge(mu, nu_y);
                    } else {
                        self.set(mu, col, nu);
                        self.set(nu, col ^ 1, mu);
                        if self.track_deductions {
                            self.deductions.push((mu, col as u32));
                        }
                    }
                }
            }
        }
        #[cfg(debug_assertions)]
        if self.check_consistency && self.parent.len() <= 4096 {
            self.assert_inverse_consistent();
        }
    }

    #[cfg(debug_assertions)]
    fn assert_inverse_consistent(&self) {
        for c in 0..self.parent.len() as u32 {
            if !self.is_live(c) {
                continue;
            }
            for col in 0..self.cols {
                let d = self.get(c, col);
                if d != UNDEF {
                    assert!(self.is_live(d), "live coset {c} points at dead {d}");
                    assert_eq!(self.get(d, col ^ 1), c, "inverse entry mismatch at {c},{col}");
                }
            }
        }
    }

    /// Scans `w` at `c`, defining cosets when `fill`; deductions and
    /// coincidences are applied. Returns false on overflow.
    fn scan(&mut self, c: u32, w: &[usize], fill: bool) -> bool {
        if w.is_empty() {
            return true;
        }
        let mut f = c;
        let mut i = 0usize;
        let mut b = c;
        let mut j = w.len() as isize - 1;
        loop {
            while i as isize <= j {
                let n = self.get(f, w[i]);
                if n == UNDEF {
                    break;
                }
                f = n;
                i += 1;
            }
            if i as isize > j {
                if f != b {
                    self.coincidence(f, b);
                }
                return true;
            }
            while j >= i as isize {
                let n = self.get(b, w[j as usize] ^ 1);
                if n == UNDEF {
                    break;
                }
                b = n;
                j -= 1;
            }
            if j < i as isize {
                self.coincidence(f, b);
                return true;
            }
            if j == i as isize {
                let col = w[i];
                self.set(f, col, b);
                self.set(b, col ^ 1, f);
                if self.track_deductions {
                    self.deductions.push((f, col as u32));
                }
                return true;
            }
            if !fill {
                return true;
            }
            if !self.define(f, w[i]) {
                return false;
            }
        }
    }

    fn run_hlt(&mut self, lookahead: bool) {
        let subgroup = std::mem::take(&mut self.subgroup);
        for s in &subgroup {
            let root = self.rep(0);
            if !self.scan(root, s, true) {
                break;
            }
        }
        self.subgroup = subgroup;
        let relators = std::mem::take(&mut self.relators);
        let mut c: u32 = 0;
        'outer: while !self.overflow && (c as usize) < self.parent.len() {
            if self.is_live(c) {
                for r in &relators {
                    if !self.scan(c, r, true) {
                        break 'outer;
                    }
                    if !self.is_live(c) {
                        break;
                    }
                }
                if self.is_live(c) {
                    for col in 0..self.cols {
                        if self.get(c, col) == UNDEF && !self.define(c, col) {
                            break 'outer;
                        }
                    }
                }
            }
            c += 1;
        }
        self.relators = relators;
        if self.overflow && lookahead {
            self.lookahead();
        }
    }

    /// Deduction-only passes over every live coset until nothing changes.
    fn lookahead(&mut self) {
        let relators = std::mem::take(&mut self.relators);
        loop {
            let before = (self.live_count, self.undefined_entries());
            for c in 0..self.parent.len() as u32 {
                for r in &relators {
                    if !self.is_live(c) {
                        break;
                    }
                    self.scan(c, r, false);
                }
            }
            if (self.live_count, self.undefined_entries()) == before {
                break;
            }
        }
        self.relators = relators;
    }

    fn undefined_entries(&self) -> usize {
        (0..self.parent.len() as u32)
            .filter(|&c| self.is_live(c))
            .map(|c| (0..self.cols).filter(|&col| self.get(c, col) == UNDEF).count())
            .sum()
    }

    fn process_deductions(&mut self) {
        while let Some((c, col)) = self.deductions.pop() {
            if !self.is_live(c) {
                continue;
            }
            let col = col as usize;
            let d = self.get(c, col);
            let conj = std::mem::take(&mut self.conjugates[col]);
            for w in &conj {
                if !self.is_live(c) {
                    break;
                }
                self.scan(c, w, false);
            }
            self.conjugates[col] = conj;
            if d != UNDEF && self.is_live(d) {
                let conj = std::mem::take(&mut self.conjugates[col ^ 1]);
                for w in &conj {
                    if !self.is_live(d) {
                        break;
                    }
                    self.scan(d, w, false);
                }
                self.conjugates[col ^ 1] = conj;
            }
        }
    }

    fn run_felsch(&mut self) {
        self.track_deductions = true;
        let subgroup = std::mem::take(&mut self.subgroup);
        for s in &subgroup {
            let root = self.rep(0);
            if !self.scan(root, s, true) {
                break;
            }
            self.process_deductions();
        }
        self.subgroup = subgroup;
        if self.overflow {
            return;
        }
        self.process_deductions();
        let mut c: u32 = 0;
        loop {
            // first undefined entry of the first live coset that has one
            let mut target = None;
            while (c as usize) < self.parent.len() {
                if self.is_live(c) {
                    if let Some(col) = (0..self.cols).find(|&col| self.get(c, col) == UNDEF) {
                        target = Some(col);
                        break;
                    }
                }
                c += 1;
            }
            let Some(col) = target else {
                if self.all_relators_close() {
                    break;
                }
                // should not happen; fall back to a full deduction sweep
                self.track_deductions = false;
                self.lookahead();
                self.track_deductions = true;
                c = 0;
                continue;
            };
            if !self.define(c, col) {
                break;
            }
            self.process_deductions();
        }
        self.track_deductions = false;
    }

    fn all_relators_close(&self) -> bool {
        (0..self.parent.len() as u32)
            .filter(|&c| self.is_live(c))
            .all(|c| {
                self.relators.iter().all(|r| {
                    let mut d = c;
                    for &col in r {
                        d = self.get(d, col);
                        if d == UNDEF {
                            return false;
                        }
                    }
                    d == c
                })
            })
    }

    fn finish(self, p: &Presentation, subgroup: &[Word]) -> CosetTable {
        let live: Vec<bool> = (0..self.parent.len() as u32).map(|c| self.is_live(c)).collect();
        let complete = live
            .iter()
            .enumerate()
            .filter(|(_, l)| **l)
            .all(|(c, _)| (0..self.cols).all(|col| self.get(c as u32, col) != UNDEF))
            && self.all_relators_close();
        CosetTable {
            presentation: p.clone(),
            subgroup: subgroup.to_vec(),
            cols: self.cols,
            defined: self.parent.len(),
            live_count: self.live_count,
            table: self.table,
            live,
            status: if complete {
                Status::Complete
            } else {
                Status::Partial
            },
        }
    }
}
