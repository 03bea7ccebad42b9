//! The finite quotients `U / N_m` with `N_m = <x_1^m, .., x_4^m>`, as pairs
//! `(q, v)` of a coset of `N` and a vector in `(Z/m)^4`.
//!
//! `(q, v)` stands for `t(q) n` with `coords(n) = v`, so right
//! multiplication by a generator is
//! `(q, v)·g = (q·g, v A_g + tau(q, g))` where `t(q) g = t(q·g) n'` and
//! `tau(q, g) = coords(n')`.

use num_traits::ToPrimitive;

use crate::coset::{enumerate, CosetTable, EnumConfig};
use crate::error::{Error, Result};
use crate::kernel::CoordinateMap;
use crate::perm::{image_of_table, PermGroup};
use crate::presets::CaseData;
use crate::word::{Letter, Presentation, Word};

pub const DEFAULT_ORDER_CAP: u64 = 1 << 20;

type Mat = [[i64; 4]; 4];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PairElement {
    pub q: u32,
    pub v: [i64; 4],
}

impl PairElement {
    pub fn identity() -> Self {
        PairElement { q: 0, v: [0; 4] }
    }

    pub fn is_identity(&self) -> bool {
        *self == PairElement::identity()
    }
}

#[derive(Clone, Debug)]
pub struct PairGroup {
    case_id: u8,
    m: u64,
    index: usize,
    cols: usize,
    next: Vec<u32>,
    /// Exact twist vectors, `tau[q * cols + col]`.
    tau: Vec<[i64; 4]>,
    /// Exact action matrices per column.
    act: Vec<Mat>,
    presentation: Presentation,
    basis: [Word; 4],
}

fn vec_mat(v: &[i64; 4], a: &Mat) -> [i64; 4] {
    let mut out = [0i64; 4];
    for (i, &x) in v.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for j in 0..4 {
            out[j] += x * a[i][j];
        }
    }
    out
}

fn mat_mul(a: &Mat, b: &Mat) -> Mat {
    let mut out = [[0i64; 4]; 4];
    for i in 0..4 {
        out[i] = vec_mat(&a[i], b);
    }
    out
}

const IDENTITY: Mat = [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]];

fn small(v: &crate::kernel::Vector) -> Result<[i64; 4]> {
    let mut out = [0i64; 4];
    for (o, x) in out.iter_mut().zip(v) {
        *o = x
            .to_i64()
            .filter(|x| x.abs() < 1 << 40)
            .ok_or_else(|| Error::Validation("coordinate out of machine range".into()))?;
    }
    Ok(out)
}

/// Builds `U / N_m` for the family of `case` from a certified coordinate map.
///
/// The construction is checked in exact integer arithmetic: every relator
/// of the group acts trivially from every coset, and each basis word sends
/// the identity to `(0, e_i)`.
pub fn build_pair_group(case: &CaseData, m: u64, cm: &CoordinateMap) -> Result<PairGroup> {
    if m == 0 {
        return Err(Error::Validation("modulus must be positive".into()));
    }
    let t = cm.table();
    let p = t.presentation().clone();
    let cols = 2 * p.rank();
    let index = t.live_count();
    let tr = &cm.rewriting().transversal;
    let reps: Vec<Word> = (0..index).map(|c| tr.representative(c)).collect();
    let mut next = vec![0u32; index * cols];
    let mut tau = vec![[0i64; 4]; index * cols];
    for q in 0..index {
        for col in 0..cols {
            let l = Letter::from_index(col);
            let d = t.raw_entry(q, col);
            next[q * cols + col] = d;
            // t(q·g)^-1 t(q) g
            let mut w = reps[d as usize].inverse().into_letters();
            w.extend_from_slice(reps[q].letters());
            w.push(l);
            tau[q * cols + col] = small(&cm.coordinates(&Word::new(w))?)?;
        }
    }
    let mut act = Vec::with_capacity(cols);
    for col in 0..cols {
        let g = Word::letter(Letter::from_index(col));
        let mut a = [[0i64; 4]; 4];
        for (i, x) in cm.basis().iter().enumerate() {
            a[i] = small(&cm.coordinates(&x.conjugate(&g))?)?;
        }
        act.push(a);
    }
    for g in 0..p.rank() {
        if mat_mul(&act[2 * g], &act[2 * g + 1]) != IDENTITY {
            return Err(Error::Validation(format!("action of generator {g} and its inverse disagree")));
        }
    }
    let mut relators = p.relators.clone();
    relators.extend(case.basis.iter().map(|x| x.pow(m as i64)));
    let presentation = Presentation::new(p.alphabet.clone(), relators)?;
    let g = PairGroup {
        case_id: case.id,
        m,
        index,
        cols,
        next,
        tau,
        act,
        presentation,
        basis: case.basis.clone(),
    };
    g.validate(&p)?;
    Ok(g)
}

impl PairGroup {
    pub fn case_id(&self) -> u8 {
        self.case_id
    }

    pub fn modulus(&self) -> u64 {
        self.m
    }

    pub fn index(&self) -> usize {
        self.index
    }

    /// `|Q| m^4`; the action on pairs is regular by construction.
    pub fn order(&self) -> num_bigint::BigUint {
        num_bigint::BigUint::from(self.index) * num_bigint::BigUint::from(self.m).pow(4)
    }

    /// Relators of `U` followed by `x_i^m`: a presentation of this group.
    pub fn presentation(&self) -> &Presentation {
        &self.presentation
    }

    pub fn action_matrix(&self, l: Letter) -> &[[i64; 4]; 4] {
        &self.act[l.index()]
    }

    pub fn twist(&self, q: usize, l: Letter) -> [i64; 4] {
        self.tau[q * self.cols + l.index()]
    }

    /// Unreduced step, used for validation.
    fn step_exact(&self, e: &PairElement, l: Letter) -> PairElement {
        let k = e.q as usize * self.cols + l.index();
        let mut v = vec_mat(&e.v, &self.act[l.index()]);
        for (x, t) in v.iter_mut().zip(&self.tau[k]) {
            *x += t;
        }
        PairElement { q: self.next[k], v }
    }

    pub fn apply_generator(&self, e: &PairElement, l: Letter) -> PairElement {
        let mut r = self.step_exact(e, l);
        let m = self.m as i64;
        for x in r.v.iter_mut() {
            *x = x.rem_euclid(m);
        }
        r
    }

    pub fn apply_word(&self, e: &PairElement, w: &Word) -> PairElement {
        w.letters().iter().fold(*e, |acc, &l| self.apply_generator(&acc, l))
    }

    pub fn evaluate_word_pair(&self, w: &Word) -> PairElement {
        self.apply_word(&PairElement::identity(), w)
    }

    fn exact_word(&self, e: &PairElement, w: &Word) -> PairElement {
        w.letters().iter().fold(*e, |acc, &l| self.step_exact(&acc, l))
    }

    /// Least `k <= cap` with `w^k = 1`.
    pub fn element_order_pair(&self, w: &Word, cap: u64) -> Result<u64> {
        crate::polytope::WordGroup::word_order(self, w, cap)
    }

    fn validate(&self, u: &Presentation) -> Result<()> {
        for r in &u.relators {
            let mut a = IDENTITY;
            for l in r.letters() {
                a = mat_mul(&a, &self.act[l.index()]);
            }
            if a != IDENTITY {
                return Err(Error::Validation(format!("relator {} acts nontrivially", r.display(&u.alphabet))));
            }
            for q in 0..self.index {
                let s = PairElement { q: q as u32, v: [0; 4] };
                if self.exact_word(&s, r) != s {
                    return Err(Error::Validation(format!(
                        "relator {} moves coset {q}",
                        r.display(&u.alphabet)
                    )));
                }
            }
        }
        for (i, x) in self.basis.iter().enumerate() {
            let mut a = IDENTITY;
            for l in x.letters() {
                a = mat_mul(&a, &self.act[l.index()]);
            }
            let mut e = [0i64; 4];
            e[i] = 1;
            let got = self.exact_word(&PairElement::identity(), x);
            if a != IDENTITY || got != (PairElement { q: 0, v: e }) {
                return Err(Error::Validation(format!("basis word {} does not map to e_{}", i + 1, i + 1)));
            }
        }
        Ok(())
    }
}

/// Comparison between the pair group and direct enumeration over
/// `<x_1^m, .., x_4^m>`.
#[derive(Clone, Debug, serde::Serialize)]
pub struct CrossValidation {
    pub direct_index: usize,
    pub pair_order: String,
    /// `(word, order in permutation image, order in pair group)`.
    pub orders: Vec<(String, u64, u64)>,
    pub agree: bool,
}

/// Table of `U` over `<x_1^m, .., x_4^m>` by direct enumeration. Fails
/// with [`Error::Resource`] if it does not complete within `max_cosets`.
pub fn direct_table(g: &PairGroup, max_cosets: usize) -> Result<CosetTable> {
    let u = g.presentation();
    let sub: Vec<Word> = g.basis.iter().map(|x| x.pow(g.m as i64)).collect();
    let base = Presentation::new(u.alphabet.clone(), u.relators[..u.relators.len() - 4].to_vec())?;
    let t = enumerate(&base, &sub, &EnumConfig::with_limit(max_cosets))?;
    if !t.is_complete() {
        return Err(Error::Resource(format!("direct enumeration exceeded {max_cosets} cosets")));
    }
    Ok(t)
}

/// Compares index and word orders between the pair group and the
/// permutation image of a direct table.
pub fn compare_with_table(g: &PairGroup, t: &CosetTable, words: &[Word]) -> Result<CrossValidation> {
    let u = g.presentation();
    let perm: PermGroup = image_of_table(t)?;
    let mut orders = Vec::new();
    let mut agree = num_bigint::BigUint::from(t.live_count()) == g.order();
    for w in words {
        let po = perm.evaluate(w).order().to_u64().unwrap_or(u64::MAX);
        let qo = g.element_order_pair(w, DEFAULT_ORDER_CAP)?;
        agree &= po == qo;
        orders.push((w.display(&u.alphabet).to_string(), po, qo));
    }
    Ok(CrossValidation {
        direct_index: t.live_count(),
        pair_order: g.order().to_string(),
        orders,
        agree,
    })
}

pub fn cross_validate(g: &PairGroup, words: &[Word], max_cosets: usize) -> Result<CrossValidation> {
    compare_with_table(g, &direct_table(g, max_cosets)?, words)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matrix_helpers() {
        let a: Mat = [[0, 1, 0, -1], [-1, 0, -1, 0], [0, 0, 0, 1], [-1, -1, 0, 0]];
        let mut p = IDENTITY;
        for _ in 0..4 {
            p = mat_mul(&p, &a);
        }
        assert_eq!(p, IDENTITY);
        assert_eq!(vec_mat(&[1, 0, 0, 0], &a), [0, 1, 0, -1]);
    }
}
