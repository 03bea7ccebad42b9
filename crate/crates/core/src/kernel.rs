//! Certification that a finite-index subgroup is free abelian of rank 4 and
//! the coordinate map onto `Z^4` in a given basis.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::coset::CosetTable;
use crate::error::{Error, Result};
use crate::linalg::{abelian_invariants, IntMatrix};
use crate::rewrite::{rewrite_presentation, Rewriting};
use crate::tietze::{simplify, Simplified, TietzeOptions};
use crate::word::{Letter, Presentation, Word};

pub type Vector = [BigInt; 4];

fn zero_vector() -> Vector {
    std::array::from_fn(|_| BigInt::zero())
}

/// Summary of the rewriting and simplification run.
#[derive(Clone, Debug)]
pub struct KernelSummary {
    pub index: usize,
    pub schreier_generators: usize,
    pub rewritten_relators: usize,
    pub transversal_max_length: usize,
    pub simplified: Simplified,
    pub invariants: Vec<BigInt>,
}

impl KernelSummary {
    /// Rank-4 free abelian: four generators, all six commutators, nothing else.
    pub fn is_free_abelian_rank4(&self) -> bool {
        let s = &self.simplified;
        s.generators.len() == 4 && s.is_commutator_form() && s.commutator_pairs().len() == 6
    }
}

/// Rewrites and simplifies the subgroup presentation.
pub fn analyse_subgroup(p: &Presentation, t: &CosetTable, opts: &TietzeOptions) -> Result<(Rewriting, KernelSummary)> {
    let rw = rewrite_presentation(p, t)?;
    let sp = &rw.presentation;
    let simplified = simplify(sp.generator_count, &sp.relators, opts);
    let compact = simplified.compact_relators();
    let n = simplified.generators.len();
    let rows: Vec<Vec<BigInt>> = compact
        .iter()
        .map(|r| {
            let mut v = vec![BigInt::zero(); n];
            for l in r.letters() {
                v[l.gen()] += l.sign();
            }
            v
        })
        .collect();
    let invariants = abelian_invariants(&IntMatrix::from_big_rows(rows, n));
    let summary = KernelSummary {
        index: rw.table.live_count(),
        schreier_generators: sp.generator_count,
        rewritten_relators: sp.relators.len(),
        transversal_max_length: rw.transversal.max_length(),
        simplified,
        invariants,
    };
    Ok((rw, summary))
}

/// The certified isomorphism from the subgroup onto `Z^4`.
#[derive(Clone, Debug)]
pub struct CoordinateMap {
    rewriting: Rewriting,
    basis: [Word; 4],
    /// Coordinates of each Schreier generator in the basis.
    generator_coords: Vec<Vector>,
    basis_matrix: IntMatrix,
    determinant: BigInt,
    summary: KernelSummary,
}

impl CoordinateMap {
    pub fn table(&self) -> &CosetTable {
        &self.rewriting.table
    }

    pub fn rewriting(&self) -> &Rewriting {
        &self.rewriting
    }

    pub fn basis(&self) -> &[Word; 4] {
        &self.basis
    }

    pub fn summary(&self) -> &KernelSummary {
        &self.summary
    }

    /// Rows are the abelianized basis words over the surviving generators.
    pub fn basis_matrix(&self) -> &IntMatrix {
        &self.basis_matrix
    }

    pub fn determinant(&self) -> &BigInt {
        &self.determinant
    }

    pub fn generator_coords(&self, i: usize) -> &Vector {
        &self.generator_coords[i]
    }

    /// Coordinates of `t(c) g t(c·g)^-1` for a signed generator `g`.
    pub fn edge_coords(&self, c: usize, l: Letter) -> Vector {
        let t = &self.rewriting.table;
        let gens = &self.rewriting.generators;
        if l.is_inverse() {
            let d = t.raw_entry(c, l.index()) as usize;
            match gens.of_edge(d, l.gen()) {
                Some(s) => self.generator_coords[s].clone().map(|x| -x),
                None => zero_vector(),
            }
        } else {
            match gens.of_edge(c, l.gen()) {
                Some(s) => self.generator_coords[s].clone(),
                None => zero_vector(),
            }
        }
    }

    /// Coordinates of `t(c) w t(c·w)^-1`, and the end coset `c·w`.
    pub fn coords_from(&self, c: usize, w: &[Letter]) -> (Vector, usize) {
        let t = &self.rewriting.table;
        let mut acc = zero_vector();
        let mut x = c;
        for &l in w {
            let v = self.edge_coords(x, l);
            for (a, b) in acc.iter_mut().zip(v) {
                *a += b;
            }
            x = t.raw_entry(x, l.index()) as usize;
        }
        (acc, x)
    }

    /// Exact coordinates of a word lying in the subgroup.
    pub fn coordinates(&self, w: &Word) -> Result<Vector> {
        self.rewriting.table.presentation().check_word(w)?;
        let (v, end) = self.coords_from(0, w.letters());
        if end != 0 {
            return Err(Error::NotInSubgroup);
        }
        Ok(v)
    }
}

/// Certifies `subgroup ≅ Z^4` with basis `basis`, or reports why not.
///
/// Fails with [`Error::Unproven`] if simplification does not reach the
/// commutator presentation of `Z^4`, and with [`Error::NotABasis`] if the
/// basis words do not form a unimodular matrix.
pub fn certify_free_abelian_rank4(p: &Presentation, t: &CosetTable, basis: &[Word; 4]) -> Result<CoordinateMap> {
    certify_with(p, t, basis, &TietzeOptions::default())
}

pub fn certify_with(p: &Presentation, t: &CosetTable, basis: &[Word; 4], opts: &TietzeOptions) -> Result<CoordinateMap> {
    if !t.is_complete() {
        return Err(Error::PartialTable);
    }
    for x in basis {
        p.check_word(x)?;
        if t.trace(0, x)? != Some(0) {
            return Err(Error::NotInSubgroup);
        }
    }
    let (rw, summary) = analyse_subgroup(p, t, opts)?;
    if !summary.is_free_abelian_rank4() {
        let s = &summary.simplified;
        return Err(Error::Unproven(format!(
            "{} generators and {} relators remain{}",
            s.generators.len(),
            s.relators.len(),
            if s.budget_exhausted { " after the move budget ran out" } else { "" }
        )));
    }
    let abelian = abelian_images(rw.presentation.generator_count, &summary.simplified);
    let rows: Vec<Vec<BigInt>> = basis
        .iter()
        .map(|x| abelianize(&rw.rewrite(x).expect("basis word traced to coset 0"), &abelian).to_vec())
        .collect();
    let basis_matrix = IntMatrix::from_big_rows(rows, 4);
    let determinant = basis_matrix.determinant();
    if determinant.abs() != BigInt::one() {
        return Err(Error::NotABasis(determinant.to_string()));
    }
    let inv = basis_matrix.inverse_unimodular()?;
    let generator_coords = abelian
        .iter()
        .map(|v| {
            let c = inv.left_apply(v);
            std::array::from_fn(|i| c[i].clone())
        })
        .collect();
    Ok(CoordinateMap {
        rewriting: rw,
        basis: basis.clone(),
        generator_coords,
        basis_matrix,
        determinant,
        summary,
    })
}

/// Image of every original generator in `Z^k` over the surviving generators,
/// resolving eliminations last-first.
fn abelian_images(n: usize, s: &Simplified) -> Vec<Vector> {
    let mut img: Vec<Option<Vector>> = vec![None; n];
    for (k, &g) in s.generators.iter().enumerate() {
        let mut v = zero_vector();
        v[k] = BigInt::one();
        img[g] = Some(v);
    }
    for (g, w) in s.eliminations.iter().rev() {
        let mut v = zero_vector();
        for l in w.letters() {
            let e = img[l.gen()].as_ref().expect("substitution uses a resolved generator");
            for (a, b) in v.iter_mut().zip(e) {
                if l.is_inverse() {
                    *a -= b;
                } else {
                    *a += b;
                }
            }
        }
        img[*g] = Some(v);
    }
    img.into_iter().map(|v| v.expect("every generator resolved")).collect()
}

fn abelianize(w: &Word, images: &[Vector]) -> Vector {
    let mut v = zero_vector();
    for l in w.letters() {
        for (a, b) in v.iter_mut().zip(&images[l.gen()]) {
            if l.is_inverse() {
                *a -= b;
            } else {
                *a += b;
            }
        }
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coset::{enumerate, EnumConfig};

    fn z4() -> (Presentation, [Word; 4]) {
        let p = Presentation::parse(
            &["a", "b", "c", "d"],
            &["(a,b)", "(a,c)", "(a,d)", "(b,c)", "(b,d)", "(c,d)"],
        )
        .unwrap();
        let basis = std::array::from_fn(Word::gen);
        (p, basis)
    }

    #[test]
    fn index_one_subgroup_of_z4() {
        let (p, basis) = z4();
        let t = enumerate(&p, &basis, &EnumConfig::default()).unwrap();
        let cm = certify_free_abelian_rank4(&p, &t, &basis).unwrap();
        let w = p.parse_word("a^3*b^-1*c*a^-1*d^2").unwrap();
        let v: Vec<i64> = cm.coordinates(&w).unwrap().iter().map(|x| x.try_into().unwrap()).collect();
        assert_eq!(v, vec![2, -1, 1, 2]);
    }

    #[test]
    fn change_of_basis() {
        let (p, g) = z4();
        let basis = [g[0].clone(), &g[1] * &g[0], g[2].clone(), &g[3] * &g[2].pow(2)];
        let t = enumerate(&p, &basis, &EnumConfig::default()).unwrap();
        let cm = certify_free_abelian_rank4(&p, &t, &basis).unwrap();
        for (i, x) in basis.iter().enumerate() {
            let v = cm.coordinates(x).unwrap();
            for (j, c) in v.iter().enumerate() {
                assert_eq!(*c, BigInt::from((i == j) as i64));
            }
        }
    }

    #[test]
    fn non_basis_and_non_abelian() {
        let (p, g) = z4();
        let basis = [g[0].pow(2), g[1].clone(), g[2].clone(), g[3].clone()];
        let t = enumerate(&p, &g, &EnumConfig::default()).unwrap();
        assert!(matches!(certify_free_abelian_rank4(&p, &t, &basis), Err(Error::NotABasis(d)) if d == "2"));

        let free = Presentation::parse(&["a", "b", "c", "d"], &["(a,b)"]).unwrap();
        let t = enumerate(&free, &g, &EnumConfig::default()).unwrap();
        assert!(matches!(certify_free_abelian_rank4(&free, &t, &g), Err(Error::Unproven(_))));
    }
}
