//! Conjugation action of the generators on a certified `Z^4` subgroup.

use crate::error::{Error, Result};
use crate::kernel::CoordinateMap;
use crate::linalg::IntMatrix;
use crate::word::{Presentation, Word};

/// One matrix per generator; row `i` holds the coordinates of
/// `basis_i^g = g^-1 basis_i g`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ActionPair {
    pub matrices: Vec<IntMatrix>,
}

impl ActionPair {
    pub fn a(&self) -> &IntMatrix {
        &self.matrices[0]
    }

    pub fn b(&self) -> &IntMatrix {
        &self.matrices[1]
    }

    /// Integer rows, for comparison against stored tables.
    pub fn rows_i64(&self) -> Vec<Vec<Vec<i64>>> {
        self.matrices
            .iter()
            .map(|m| m.to_i64_rows().expect("action entries fit in i64"))
            .collect()
    }

    /// Matrix of a word: `w = g_1 g_2 ...` acts as `A_{g_1} A_{g_2} ...`.
    pub fn evaluate(&self, w: &Word) -> Result<IntMatrix> {
        let n = self.matrices.first().map_or(0, IntMatrix::rows);
        let mut inverses: Vec<Option<IntMatrix>> = vec![None; self.matrices.len()];
        let mut acc = IntMatrix::identity(n);
        for l in w.letters() {
            let m = self.matrices.get(l.gen()).ok_or(Error::MissingImage(l.gen()))?;
            if l.is_inverse() {
                if inverses[l.gen()].is_none() {
                    inverses[l.gen()] = Some(m.inverse_unimodular()?);
                }
                acc = &acc * inverses[l.gen()].as_ref().unwrap();
            } else {
                acc = &acc * m;
            }
        }
        Ok(acc)
    }
}

pub fn action_matrices(cm: &CoordinateMap) -> Result<ActionPair> {
    let rank = cm.table().presentation().rank();
    let mut matrices = Vec::with_capacity(rank);
    for g in 0..rank {
        let gw = Word::gen(g);
        let rows = cm
            .basis()
            .iter()
            .map(|x| cm.coordinates(&x.conjugate(&gw)).map(|v| v.to_vec()))
            .collect::<Result<Vec<_>>>()?;
        matrices.push(IntMatrix::from_big_rows(rows, 4));
    }
    Ok(ActionPair { matrices })
}

/// True iff every relator of `p` maps to the identity matrix.
pub fn verify_action_relations(ap: &ActionPair, p: &Presentation) -> Result<bool> {
    if ap.matrices.len() < p.rank() {
        return Err(Error::MissingImage(ap.matrices.len()));
    }
    for r in &p.relators {
        match ap.evaluate(r) {
            Ok(m) if m.is_identity() => {}
            Ok(_) => return Ok(false),
            Err(Error::Singular) => return Err(Error::Validation("action matrix is not invertible".into())),
            Err(e) => return Err(e),
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn case1() -> ActionPair {
        ActionPair {
            matrices: vec![
                IntMatrix::from_rows(&[[0, 1, 0, -1], [-1, 0, -1, 0], [0, 0, 0, 1], [-1, -1, 0, 0]]),
                IntMatrix::from_rows(&[[1, 0, 0, 1], [-1, 0, 0, 0], [-1, 1, -1, -1], [0, 0, 1, 0]]),
            ],
        }
    }

    #[test]
    fn stored_matrices_satisfy_relators() {
        let ap = case1();
        let u = crate::presets::group_u();
        assert!(verify_action_relations(&ap, &u).unwrap());
        assert!(ap.a().pow(4).is_identity());
        assert!(!ap.a().pow(2).is_identity());
    }

    #[test]
    fn mutated_matrix_fails() {
        let mut ap = case1();
        ap.matrices[0][(0, 1)] = (-1).into();
        let u = crate::presets::group_u();
        assert!(!verify_action_relations(&ap, &u).unwrap_or(false));
    }

    #[test]
    fn free_presentation_is_vacuous() {
        let p = Presentation::parse::<&str>(&["a", "b"], &[]).unwrap();
        let ap = ActionPair {
            matrices: vec![IntMatrix::identity(4), IntMatrix::identity(4)],
        };
        assert!(verify_action_relations(&ap, &p).unwrap());
    }
}
