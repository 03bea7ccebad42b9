//! Reidemeister–Schreier rewriting over a complete coset table.

use crate::coset::{CosetTable, UNDEF};
use crate::error::{Error, Result};
use crate::word::{Letter, Presentation, Word};

/// Prefix-closed coset representatives read off the breadth-first spanning
/// tree of a standardized table.
#[derive(Clone, Debug)]
pub struct SchreierTransversal {
    /// `parent[c] = (p, col)` with `c = p · col`; `None` for coset 0.
    parent: Vec<Option<(usize, Letter)>>,
    depth: Vec<usize>,
}

impl SchreierTransversal {
    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    pub fn representative(&self, mut c: usize) -> Word {
        let mut rev = Vec::with_capacity(self.depth[c]);
        while let Some((p, l)) = self.parent[c] {
            rev.push(l);
            c = p;
        }
        rev.reverse();
        Word::raw(rev)
    }

    pub fn max_length(&self) -> usize {
        self.depth.iter().copied().max().unwrap_or(0)
    }

    pub fn depth(&self, c: usize) -> usize {
        self.depth[c]
    }

    pub fn parent(&self, c: usize) -> Option<(usize, Letter)> {
        self.parent[c]
    }
}

/// Breadth-first transversal; the table must be complete and standardized
/// so that each coset is first reached from a smaller one.
pub fn schreier_transversal(t: &CosetTable) -> Result<SchreierTransversal> {
    if !t.is_complete() {
        return Err(Error::PartialTable);
    }
    if !t.is_standard() {
        return Err(Error::Validation("coset table is not standardized".into()));
    }
    let n = t.live_count();
    let mut parent = vec![None; n];
    let mut depth = vec![0usize; n];
    let mut seen = vec![false; n];
    seen[0] = true;
    for c in 0..n {
        for col in 0..t.columns() {
            let d = t.raw_entry(c, col) as usize;
            if !seen[d] {
                seen[d] = true;
                parent[d] = Some((c, Letter::from_index(col)));
                depth[d] = depth[c] + 1;
            }
        }
    }
    Ok(SchreierTransversal { parent, depth })
}

/// Numbering of the Schreier generators `s_{c,g} = t(c) g t(c·g)^-1` for
/// the non-tree edges `(c, g)`.
#[derive(Clone, Debug)]
pub struct SchreierGenerators {
    rank: usize,
    /// `index[c * rank + g]`, `UNDEF` on tree edges.
    index: Vec<u32>,
    edges: Vec<(usize, usize)>,
}

impl SchreierGenerators {
    pub fn new(t: &CosetTable, tr: &SchreierTransversal) -> Self {
        let rank = t.presentation().rank();
        let n = t.live_count();
        let mut index = vec![UNDEF; n * rank];
        let mut edges = Vec::new();
        for c in 0..n {
            for g in 0..rank {
                let d = t.raw_entry(c, 2 * g) as usize;
                let tree = tr.parent(d) == Some((c, Letter::pos(g)))
                    || tr.parent(c) == Some((d, Letter::neg(g)));
                if !tree {
                    index[c * rank + g] = edges.len() as u32;
                    edges.push((c, g));
                }
            }
        }
        SchreierGenerators { rank, index, edges }
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// `(c, g)` for generator `i`.
    pub fn edge(&self, i: usize) -> (usize, usize) {
        self.edges[i]
    }

    pub fn of_edge(&self, c: usize, g: usize) -> Option<usize> {
        match self.index[c * self.rank + g] {
            UNDEF => None,
            i => Some(i as usize),
        }
    }

    /// The word `t(c) g t(c·g)^-1` over the original alphabet.
    pub fn as_word(&self, i: usize, t: &CosetTable, tr: &SchreierTransversal) -> Word {
        let (c, g) = self.edges[i];
        let d = t.raw_entry(c, 2 * g) as usize;
        &(&tr.representative(c) * &Word::gen(g)) * &tr.representative(d).inverse()
    }

    /// Rewrites `w` read from coset `c`; returns the Schreier word and the
    /// end coset.
    pub fn rewrite_from(&self, t: &CosetTable, c: usize, w: &[Letter]) -> (Word, usize) {
        let mut out = Vec::new();
        let mut x = c;
        for &l in w {
            let y = t.raw_entry(x, l.index()) as usize;
            if l.is_inverse() {
                if let Some(s) = self.of_edge(y, l.gen()) {
                    crate::word::push_reduced(&mut out, Letter::neg(s));
                }
            } else if let Some(s) = self.of_edge(x, l.gen()) {
                crate::word::push_reduced(&mut out, Letter::pos(s));
            }
            x = y;
        }
        (Word::raw(out), x)
    }
}

/// Presentation of a finite-index subgroup on Schreier generators.
#[derive(Clone, Debug)]
pub struct SubgroupPresentation {
    pub generator_count: usize,
    pub relators: Vec<Word>,
}

impl SubgroupPresentation {
    pub fn total_length(&self) -> usize {
        self.relators.iter().map(Word::len).sum()
    }
}

/// The rewriting data for one subgroup: standardized table, transversal,
/// Schreier generators and the rewritten relators.
#[derive(Clone, Debug)]
pub struct Rewriting {
    pub table: CosetTable,
    pub transversal: SchreierTransversal,
    pub generators: SchreierGenerators,
    pub presentation: SubgroupPresentation,
}

impl Rewriting {
    /// Rewrites a word that lies in the subgroup; error otherwise.
    pub fn rewrite(&self, w: &Word) -> Result<Word> {
        let (s, end) = self.generators.rewrite_from(&self.table, 0, w.letters());
        if end != 0 {
            return Err(Error::NotInSubgroup);
        }
        Ok(s)
    }
}

/// Reidemeister–Schreier: one relator `t(c) r t(c)^-1` per coset `c` and
/// relator `r`, written over the Schreier generators.
pub fn rewrite_presentation(p: &Presentation, t: &CosetTable) -> Result<Rewriting> {
    if !t.is_complete() {
        return Err(Error::PartialTable);
    }
    let table = if t.is_standard() { t.clone() } else { t.standardize()? };
    let transversal = schreier_transversal(&table)?;
    let generators = SchreierGenerators::new(&table, &transversal);
    let mut relators = Vec::with_capacity(table.live_count() * p.relators.len());
    for c in 0..table.live_count() {
        for r in &p.relators {
            let (w, end) = generators.rewrite_from(&table, c, r.letters());
            if end != c {
                return Err(Error::Validation("relator does not close in the coset table".into()));
            }
            relators.push(w.cyclic_reduce());
        }
    }
    Ok(Rewriting {
        presentation: SubgroupPresentation {
            generator_count: generators.len(),
            relators,
        },
        table,
        transversal,
        generators,
    })
}
