//! Built-in consistency checks against brute-force oracles.

use std::collections::{HashMap, VecDeque};

use num_bigint::BigInt;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::coset::{enumerate, EnumConfig, Strategy};
use crate::linalg::{smith_normal_form, IntMatrix};
use crate::perm::{image_of_table, Permutation};
use crate::rewrite::rewrite_presentation;
use crate::word::{Letter, Presentation, Word};

/// Deliberate defect, used to check that the suite notices.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Fault {
    /// Perturbs the last Smith divisor before comparing.
    Snf,
}

impl std::str::FromStr for Fault {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "snf" => Ok(Fault::Snf),
            _ => Err(format!("unknown fault {s:?}")),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

fn check(name: &str, passed: bool, detail: impl Into<String>) -> Check {
    Check {
        name: name.into(),
        passed,
        detail: detail.into(),
    }
}

/// A presentation together with permutations that satisfy it.
pub struct OracleGroup {
    pub name: &'static str,
    pub presentation: Presentation,
    pub perms: Vec<Permutation>,
}

fn perm(images: &[u32]) -> Permutation {
    Permutation::from_images(images.to_vec()).expect("valid permutation")
}

pub fn oracle_groups() -> Vec<OracleGroup> {
    let pres = |g: &[&str], r: &[&str]| Presentation::parse(g, r).expect("valid presentation");
    vec![
        OracleGroup {
            name: "S3",
            presentation: pres(&["a", "b"], &["a^2", "b^3", "(a*b)^2"]),
            perms: vec![perm(&[1, 0, 2]), perm(&[1, 2, 0])],
        },
        OracleGroup {
            name: "D4",
            presentation: pres(&["a", "b"], &["a^4", "b^2", "(a*b)^2"]),
            perms: vec![perm(&[1, 2, 3, 0]), perm(&[0, 3, 2, 1])],
        },
        OracleGroup {
            name: "Q8",
            presentation: pres(&["i", "j"], &["i^4", "i^2*j^-2", "j^-1*i*j*i"]),
            // right multiplication by i and j on 1, i, -1, -i, j, k, -j, -k
            perms: vec![perm(&[1, 2, 3, 0, 7, 4, 5, 6]), perm(&[4, 5, 6, 7, 2, 3, 0, 1])],
        },
        OracleGroup {
            name: "A4",
            presentation: pres(&["a", "b"], &["a^2", "b^3", "(a*b)^3"]),
            perms: vec![perm(&[1, 0, 3, 2]), perm(&[0, 2, 3, 1])],
        },
        OracleGroup {
            name: "S4",
            presentation: pres(&["a", "b"], &["a^2", "b^3", "(a*b)^4"]),
            perms: vec![perm(&[1, 0, 2, 3]), perm(&[0, 2, 3, 1])],
        },
        OracleGroup {
            name: "S4xC2",
            presentation: pres(&["a", "b", "c"], &["a^2", "b^3", "(a*b)^4", "c^2", "(a,c)", "(b,c)"]),
            perms: vec![
                perm(&[1, 0, 2, 3, 4, 5]),
                perm(&[0, 2, 3, 1, 4, 5]),
                perm(&[0, 1, 2, 3, 5, 4]),
            ],
        },
        OracleGroup {
            name: "C6xC2",
            presentation: pres(&["a", "b"], &["a^6", "b^2", "(a,b)"]),
            perms: vec![perm(&[1, 2, 3, 4, 5, 0, 6, 7]), perm(&[0, 1, 2, 3, 4, 5, 7, 6])],
        },
    ]
}

/// Every element of `<perms>`, by breadth-first closure, with the right
/// multiplication table by each generator.
pub fn closure(perms: &[Permutation]) -> (Vec<Permutation>, Vec<Vec<usize>>) {
    let n = perms[0].degree();
    let mut elems = vec![Permutation::identity(n)];
    let mut index: HashMap<Permutation, usize> = HashMap::from([(elems[0].clone(), 0)]);
    let mut mult: Vec<Vec<usize>> = Vec::new();
    let mut k = 0;
    while k < elems.len() {
        let mut row = Vec::with_capacity(perms.len());
        for p in perms {
            let x = elems[k].then(p);
            let next = elems.len();
            let i = *index.entry(x.clone()).or_insert(next);
            if i == next {
                elems.push(x);
            }
            row.push(i);
        }
        mult.push(row);
        k += 1;
    }
    (elems, mult)
}

/// True iff the regular coset table and the brute-force Cayley table are
/// isomorphic with generators matched.
pub fn tables_isomorphic(table: &[Vec<usize>], cayley: &[Vec<usize>]) -> bool {
    if table.len() != cayley.len() {
        return false;
    }
    let mut f = vec![usize::MAX; table.len()];
    f[0] = 0;
    let mut q = VecDeque::from([0usize]);
    while let Some(x) = q.pop_front() {
        for g in 0..table[x].len() {
            let (y, fy) = (table[x][g], cayley[f[x]][g]);
            if f[y] == usize::MAX {
                f[y] = fy;
                q.push_back(y);
            } else if f[y] != fy {
                return false;
            }
        }
    }
    let mut seen = vec![false; f.len()];
    f.iter().all(|&v| v != usize::MAX && !std::mem::replace(&mut seen[v], true))
}

fn random_word(rng: &mut ChaCha8Rng, rank: usize, len: usize) -> Word {
    Word::new((0..len).map(|_| Letter::new(rng.gen_range(0..rank), rng.gen_bool(0.5))))
}

fn random_unimodular(rng: &mut ChaCha8Rng, n: usize) -> IntMatrix {
    let mut m = IntMatrix::identity(n);
    for _ in 0..3 * n {
        let (i, j) = (rng.gen_range(0..n), rng.gen_range(0..n));
        if i == j {
            continue;
        }
        let k: i64 = rng.gen_range(-2..=2);
        let mut e = IntMatrix::identity(n);
        e[(i, j)] = BigInt::from(k);
        m = &m * &e;
    }
    m
}

fn is_divisor_chain(d: &[BigInt]) -> bool {
    d.windows(2).all(|w| {
        if w[0].is_zero() {
            w[1].is_zero()
        } else {
            (&w[1] % &w[0]).is_zero()
        }
    })
}

/// Runs the suite. `quick` uses fewer random samples and skips the
/// built-in families.
pub fn run(quick: bool, fault: Option<Fault>) -> Vec<Check> {
    let mut out = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);

    for g in oracle_groups() {
        let (elems, cayley) = closure(&g.perms);
        let holds = g.presentation.relators.iter().all(|r| {
            let mut p = Permutation::identity(g.perms[0].degree());
            for l in r.letters() {
                let x = &g.perms[l.gen()];
                p = p.then(&if l.is_inverse() { x.inverse() } else { x.clone() });
            }
            p.is_identity()
        });
        for s in [Strategy::Hlt, Strategy::Felsch] {
            let t = enumerate(&g.presentation, &[], &EnumConfig::default().strategy(s));
            let passed = match &t {
                Ok(t) if t.is_complete() => {
                    let t = t.standardize().expect("complete table standardizes");
                    let rows: Vec<Vec<usize>> = (0..t.live_count())
                        .map(|c| (0..t.presentation().rank()).map(|k| t.raw_entry(c, 2 * k) as usize).collect())
                        .collect();
                    holds && tables_isomorphic(&rows, &cayley)
                }
                _ => false,
            };
            out.push(check(
                &format!("todd-coxeter {:?} {}", s, g.name),
                passed,
                format!("order {}", elems.len()),
            ));
        }
    }

    let samples = if quick { 20 } else { 200 };
    let mut snf_ok = 0;
    for _ in 0..samples {
        let (r, c) = (rng.gen_range(1..6), rng.gen_range(1..6));
        let rows: Vec<Vec<i64>> = (0..r).map(|_| (0..c).map(|_| rng.gen_range(-9..=9)).collect()).collect();
        let m = IntMatrix::from_rows(&rows);
        let d = smith_normal_form(&m);
        let mut d2 = smith_normal_form(&(&(&random_unimodular(&mut rng, r) * &m) * &random_unimodular(&mut rng, c)));
        if fault == Some(Fault::Snf) {
            if let Some(last) = d2.last_mut() {
                *last += 1;
            }
        }
        if d == d2 && is_divisor_chain(&d) {
            snf_ok += 1;
        }
    }
    out.push(check("smith invariance", snf_ok == samples, format!("{snf_ok}/{samples}")));

    let s4 = &oracle_groups()[4];
    let t = enumerate(&s4.presentation, &[], &EnumConfig::default()).expect("S4 enumerates");
    let img = image_of_table(&t).expect("complete table");
    let words = if quick { 50 } else { 500 };
    let mut hom_ok = 0;
    for _ in 0..words {
        let (lu, lv) = (rng.gen_range(0..12), rng.gen_range(0..12));
        let (u, v) = (random_word(&mut rng, 2, lu), random_word(&mut rng, 2, lv));
        if img.evaluate(&(&u * &v)) == img.evaluate(&u).then(&img.evaluate(&v)) {
            hom_ok += 1;
        }
    }
    out.push(check("evaluate homomorphism", hom_ok == words, format!("{hom_ok}/{words}")));

    let free = Presentation::parse::<&str>(&["a", "b"], &[]).expect("free group");
    let mut rank_ok = true;
    for n in 1..=6i64 {
        // kernel of a -> 1, b -> 0 onto Z/n
        let mut sub = vec![Word::gen(0).pow(n)];
        for i in 0..n {
            sub.push(Word::gen(1).conjugate(&Word::gen(0).pow(-i)));
        }
        let t = enumerate(&free, &sub, &EnumConfig::default()).expect("free group enumerates");
        let rw = rewrite_presentation(&free, &t).expect("complete table");
        rank_ok &= t.live_count() == n as usize && rw.presentation.generator_count == n as usize + 1;
    }
    out.push(check("schreier rank formula", rank_ok, "index n gives rank n+1"));

    if !quick {
        let u = crate::presets::group_u();
        for c in crate::presets::all_cases() {
            let h = enumerate(&u, &c.basis, &EnumConfig::default().strategy(Strategy::Hlt));
            let f = enumerate(&u, &c.basis, &EnumConfig::default());
            let ok = matches!((&h, &f), (Ok(h), Ok(f)) if h.is_complete() && f.is_complete() && h.live_count() == f.live_count() && h.live_count() as u64 == c.index);
            out.push(check(&format!("strategies agree on case {}", c.id), ok, format!("index {}", c.index)));
        }
    }
    out
}
