//! Built-in group `U = <a, b | a^4, b^8, (ab)^2, [a^2,b^2]^2, (ab^3a^2b^4)^2>`
//! and the four subgroups `N^1..N^4` with their expected conjugation tables.

use crate::word::{Alphabet, Presentation, Word};

pub const CASE_IDS: [u8; 4] = [1, 2, 3, 4];

/// Subgroup generators, index and conjugation table for one family.
#[derive(Clone, Debug)]
pub struct CaseData {
    pub id: u8,
    /// Name stem of the basis words (`x`, `y`, `z`, `w`).
    pub stem: char,
    pub basis: [Word; 4],
    pub index: u64,
    /// `conjugation[g][i]` are the coordinates of `basis_i^g` for `g = a, b`.
    pub conjugation: [[[i64; 4]; 4]; 2],
}

pub fn group_u() -> Presentation {
    Presentation::parse(
        &["a", "b"],
        &["a^4", "b^8", "(a*b)^2", "(a^2,b^2)^2", "(a*b^3*a^2*b^4)^2"],
    )
    .expect("built-in presentation parses")
}

fn w(text: &str) -> Word {
    let al = Alphabet::new(&["a", "b"]).unwrap();
    al.parse(text).expect("built-in word parses")
}

/// `u^g = g^-1 u g`.
fn conj(u: &str, g: &str) -> Word {
    w(u).conjugate(&w(g))
}

pub fn case(id: u8) -> Option<CaseData> {
    let data = match id {
        1 => CaseData {
            id,
            stem: 'x',
            basis: [
                w("(b^-2*a)^4"),
                &conj("b^4", "a*b^-1") * &conj("b^4", "a^-1"),
                w("(b^2*a^2)^4"),
                conj("(b^2*a^2)^4", "a"),
            ],
            index: 1024,
            conjugation: [
                [[0, 1, 0, -1], [-1, 0, -1, 0], [0, 0, 0, 1], [-1, -1, 0, 0]],
                [[1, 0, 0, 1], [-1, 0, 0, 0], [-1, 1, -1, -1], [0, 0, 1, 0]],
            ],
        },
        2 => CaseData {
            id,
            stem: 'y',
            basis: [
                w("b^2*a^2*b*a^-1*b^4*a^-1*b^2*a^-1*b*a^-1"),
                w("(b^-1*a)^8"),
                w("b^3*a^2*b^2*a*b^-1*a*b^-1*a*b^-3*a^-1"),
                w("(a*b^-3)^4"),
            ],
            index: 2048,
            conjugation: [
                [[0, 0, 1, 0], [1, 0, -1, -1], [0, 0, 1, 1], [0, 1, 0, -1]],
                [[0, -1, -1, 0], [-1, 0, -1, -1], [1, 0, 0, 0], [-1, 0, -1, 0]],
            ],
        },
        3 => CaseData {
            id,
            stem: 'z',
            basis: [
                w("(b^-1*a)^8"),
                w("(b^-3*a)^4"),
                w("(a*b^-1)^8"),
                w("(a*b^2*a^-1*b*a^-1)^4"),
            ],
            index: 4096,
            conjugation: [
                [[0, 0, -1, 0], [0, -1, -1, 0], [1, 0, 0, 0], [-1, 0, 0, 1]],
                [[0, 1, 0, -1], [-1, 1, 0, 0], [1, 0, 0, 0], [0, 0, -1, -1]],
            ],
        },
        4 => CaseData {
            id,
            stem: 'w',
            basis: [
                w("(a*b^-1)^8"),
                conj("(b^-1*a)^8", "b"),
                conj("(b^-2*a)^8", "b"),
                &conj("(a^2*b^2)^4", "b^-1") * &conj("(b^-2*a^2)^4", "a"),
            ],
            index: 8192,
            conjugation: [
                [[0, 1, -1, -1], [0, 1, -1, 0], [0, 0, -1, 0], [1, 1, 0, 0]],
                [[0, 1, -1, -1], [0, -1, 1, 0], [-1, -1, 1, 0], [1, -1, 0, 0]],
            ],
        },
        _ => return None,
    };
    Some(data)
}

pub fn all_cases() -> Vec<CaseData> {
    CASE_IDS.iter().filter_map(|&i| case(i)).collect()
}

/// The word `ab^3a^2b^4` whose square is the fifth relator of `U`.
pub fn chirality_core() -> Word {
    w("a*b^3*a^2*b^4")
}

/// Images of `(a, b)` under the mirror twist `(a^-1, a^2 b)`.
pub fn mirror_images() -> [Word; 2] {
    [w("a^-1"), w("a^2*b")]
}

/// Mirror image of [`chirality_core`]: `a^-1 (a^2 b)^3 a^-2 (a^2 b)^4`.
pub fn mirror_witness() -> Word {
    chirality_core()
        .substitute(&mirror_images())
        .expect("two images for two generators")
}

/// The same word with the leading `a^-1` replaced by `a^-2`. Reported next
/// to [`mirror_witness`] because it is the form usually quoted.
pub fn variant_witness() -> Word {
    w("a^-2*(a^2*b)^3*a^-2*(a^2*b)^4")
}
