//! Chirality certification and map invariants for groups generated by two
//! rotations `σ1 = a`, `σ2 = b`.

use std::collections::HashSet;
use std::hash::Hash;

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use serde::Serialize;
use serde_json::json;

use crate::coset::CosetTable;
use crate::error::{Error, Result};
use crate::perm::{image_of_table, PermGroup, Permutation};
use crate::quotient::{PairElement, PairGroup, DEFAULT_ORDER_CAP};
use crate::word::{Alphabet, Presentation, Word};

pub const SCHEMA: &str = "polyforge.atlas/1";

/// A finite group on the generators of a presentation, with words
/// evaluated on the right.
pub trait WordGroup {
    type Element: Clone + Eq + Hash;

    fn identity(&self) -> Self::Element;
    fn evaluate(&self, w: &Word) -> Self::Element;
    fn order(&self) -> Result<BigUint>;
    /// A presentation known to define this group.
    fn defining_presentation(&self) -> &Presentation;

    fn word_order(&self, w: &Word, cap: u64) -> Result<u64> {
        let id = self.identity();
        let mut e = self.evaluate(w);
        let mut k = 1;
        while e != id {
            if k >= cap {
                return Err(Error::OrderCap(cap));
            }
            e = self.apply(&e, w);
            k += 1;
        }
        Ok(k)
    }

    /// `e · w`.
    fn apply(&self, e: &Self::Element, w: &Word) -> Self::Element;
}

impl WordGroup for PairGroup {
    type Element = PairElement;

    fn identity(&self) -> PairElement {
        PairElement::identity()
    }

    fn evaluate(&self, w: &Word) -> PairElement {
        self.evaluate_word_pair(w)
    }

    fn order(&self) -> Result<BigUint> {
        Ok(PairGroup::order(self))
    }

    fn defining_presentation(&self) -> &Presentation {
        self.presentation()
    }

    fn apply(&self, e: &PairElement, w: &Word) -> PairElement {
        self.apply_word(e, w)
    }
}

/// The regular permutation image of `U/H` for a complete table of a normal
/// subgroup `H`, presented by the relators of `U` and the generators of `H`.
#[derive(Clone, Debug)]
pub struct PresentedPermGroup {
    group: PermGroup,
    presentation: Presentation,
}

impl PresentedPermGroup {
    pub fn from_normal_table(t: &CosetTable) -> Result<Self> {
        if !t.is_complete() {
            return Err(Error::PartialTable);
        }
        if !t.is_normal()? {
            return Err(Error::IncompletePresentation(
                "subgroup is not normal, so relators plus subgroup generators do not present the quotient".into(),
            ));
        }
        let p = t.presentation();
        let mut relators = p.relators.clone();
        relators.extend(t.subgroup().iter().filter(|w| !w.is_empty()).cloned());
        Ok(PresentedPermGroup {
            group: image_of_table(t)?,
            presentation: Presentation::new(p.alphabet.clone(), relators)?,
        })
    }

    pub fn group(&self) -> &PermGroup {
        &self.group
    }
}

impl WordGroup for PresentedPermGroup {
    type Element = Permutation;

    fn identity(&self) -> Permutation {
        self.group.identity()
    }

    fn evaluate(&self, w: &Word) -> Permutation {
        self.group.evaluate(w)
    }

    /// The action is regular, so the order is the degree.
    fn order(&self) -> Result<BigUint> {
        Ok(BigUint::from(self.group.degree()))
    }

    fn defining_presentation(&self) -> &Presentation {
        &self.presentation
    }

    fn word_order(&self, w: &Word, cap: u64) -> Result<u64> {
        let k = self.group.evaluate(w).order().to_u64().unwrap_or(u64::MAX);
        if k > cap {
            return Err(Error::OrderCap(cap));
        }
        Ok(k)
    }

    fn apply(&self, e: &Permutation, w: &Word) -> Permutation {
        e.then(&self.group.evaluate(w))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Chiral,
    Regular,
    NotPolytopal,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::Chiral => "chiral",
            Verdict::Regular => "regular",
            Verdict::NotPolytopal => "not-polytopal",
        })
    }
}

/// A relator whose mirror image is not the identity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub relator: String,
    /// Order of the substituted relator.
    pub image_order: u64,
    /// The relator is `root^power`.
    pub root: String,
    pub power: usize,
    pub root_image: String,
    pub root_image_order: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PolytopeReport {
    pub order: u64,
    pub k1: u64,
    pub k2: u64,
    /// Order of `σ1 σ2`.
    pub k12: u64,
    pub intersection: usize,
    pub verdict: Verdict,
    pub witness: Option<Witness>,
    pub chi: Option<i64>,
    pub genus: Option<i64>,
}

/// `σ1 -> σ1^-1`, `σ2 -> σ1^2 σ2`.
pub fn mirror_substitution() -> [Word; 2] {
    [Word::gen(0).inverse(), &Word::gen(0).pow(2) * &Word::gen(1)]
}

/// Decides chiral versus regular by checking whether the mirror assignment
/// satisfies every relator of `presentation`.
///
/// `presentation` must contain every relator of the group's defining
/// presentation, and all of its relators must hold in the group.
pub fn certify<G: WordGroup>(g: &G, presentation: &Presentation) -> Result<PolytopeReport> {
    if presentation.rank() != 2 {
        return Err(Error::IncompletePresentation("expected exactly two generators".into()));
    }
    let have: HashSet<&Word> = presentation.relators.iter().collect();
    if let Some(r) = g.defining_presentation().relators.iter().find(|r| !have.contains(r)) {
        return Err(Error::IncompletePresentation(format!(
            "missing relator {}",
            r.display(&presentation.alphabet)
        )));
    }
    let id = g.identity();
    if let Some(r) = presentation.relators.iter().find(|r| g.evaluate(r) != id) {
        return Err(Error::IncompletePresentation(format!(
            "relator {} does not hold in the group",
            r.display(&presentation.alphabet)
        )));
    }
    let order = g.order()?.to_u64().ok_or_else(|| Error::Resource("group order exceeds u64".into()))?;
    let (a, b) = (Word::gen(0), Word::gen(1));
    let k1 = g.word_order(&a, DEFAULT_ORDER_CAP)?;
    let k2 = g.word_order(&b, DEFAULT_ORDER_CAP)?;
    let k12 = g.word_order(&(&a * &b), DEFAULT_ORDER_CAP)?;
    let powers_a: HashSet<G::Element> = (0..k1).map(|i| g.evaluate(&a.pow(i as i64))).collect();
    let intersection = (0..k2).filter(|&j| powers_a.contains(&g.evaluate(&b.pow(j as i64)))).count();

    let (chi, genus) = match euler_genus(order, k1, k2) {
        Ok((c, gg)) => (Some(c), Some(gg)),
        Err(_) => (None, None),
    };
    let mut report = PolytopeReport {
        order,
        k1,
        k2,
        k12,
        intersection,
        verdict: Verdict::Regular,
        witness: None,
        chi,
        genus,
    };
    if k12 != 2 || intersection != 1 {
        report.verdict = Verdict::NotPolytopal;
        return Ok(report);
    }
    let mirror = mirror_substitution();
    for r in &presentation.relators {
        let image = r.substitute(&mirror)?;
        if g.evaluate(&image) == id {
            continue;
        }
        let (root, power) = r.root();
        let root_image = root.substitute(&mirror)?;
        let al = &presentation.alphabet;
        report.verdict = Verdict::Chiral;
        report.witness = Some(Witness {
            relator: r.display(al).to_string(),
            image_order: g.word_order(&image, DEFAULT_ORDER_CAP)?,
            root: root.display(al).to_string(),
            power,
            root_image: root_image.display(al).to_string(),
            root_image_order: g.word_order(&root_image, DEFAULT_ORDER_CAP)?,
        });
        break;
    }
    Ok(report)
}

/// `χ = |G| (1/k1 + 1/k2 - 1/2)` and `g = (2 - χ)/2`, exactly.
pub fn euler_genus(order: u64, k1: u64, k2: u64) -> Result<(i64, i64)> {
    if k1 == 0 || k2 == 0 || order % k1 != 0 || order % k2 != 0 {
        return Err(Error::EulerInput(format!("{k1} and {k2} must divide {order}")));
    }
    let (n, k1, k2) = (order as i128, k1 as i128, k2 as i128);
    let num = n * (2 * k1 + 2 * k2 - k1 * k2);
    let den = 2 * k1 * k2;
    if num % den != 0 {
        return Err(Error::EulerInput("non-integral Euler characteristic".into()));
    }
    let chi = num / den;
    if chi % 2 != 0 {
        return Err(Error::EulerInput(format!("odd Euler characteristic {chi}")));
    }
    let chi = i64::try_from(chi).map_err(|_| Error::EulerInput("Euler characteristic out of range".into()))?;
    Ok((chi, (2 - chi) / 2))
}

/// Deterministic JSON for one `(case, m)` entry.
pub fn atlas_record(report: &PolytopeReport, case: u8, m: u64) -> serde_json::Value {
    json!({
        "schema": SCHEMA,
        "case": case,
        "m": m,
        "order": report.order,
        "type": [report.k1, report.k2],
        "verdict": report.verdict,
        "intersection": report.intersection,
        "chi": report.chi,
        "genus": report.genus,
        "witness": report.witness,
    })
}

/// One row of the CSV grid export.
#[derive(Clone, Debug, Serialize)]
pub struct GridRow {
    pub case: u8,
    pub m: u64,
    pub order: u64,
    pub k1: u64,
    pub k2: u64,
    pub verdict: String,
    pub chi: Option<i64>,
    pub genus: Option<i64>,
    pub witness_order: Option<u64>,
}

impl GridRow {
    pub fn new(report: &PolytopeReport, case: u8, m: u64) -> Self {
        GridRow {
            case,
            m,
            order: report.order,
            k1: report.k1,
            k2: report.k2,
            verdict: report.verdict.to_string(),
            chi: report.chi,
            genus: report.genus,
            witness_order: report.witness.as_ref().map(|w| w.root_image_order),
        }
    }
}

pub fn grid_csv(rows: &[GridRow]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).map_err(|e| Error::Validation(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Validation(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

/// The alphabet `{a, b}` used by reports.
pub fn rotation_alphabet() -> Alphabet {
    Alphabet::new(&["a", "b"]).expect("valid alphabet")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coset::{enumerate, EnumConfig};

    fn presented(gens: &[&str], rels: &[&str]) -> (PresentedPermGroup, Presentation) {
        let p = Presentation::parse(gens, rels).unwrap();
        let t = enumerate(&p, &[], &EnumConfig::default()).unwrap();
        let g = PresentedPermGroup::from_normal_table(&t).unwrap();
        let full = g.defining_presentation().clone();
        (g, full)
    }

    #[test]
    fn cube_rotation_group_is_regular() {
        let (g, p) = presented(&["s", "t"], &["s^4", "t^3", "(s*t)^2"]);
        let r = certify(&g, &p).unwrap();
        assert_eq!((r.order, r.k1, r.k2, r.k12, r.intersection), (24, 4, 3, 2, 1));
        assert_eq!(r.verdict, Verdict::Regular);
        assert_eq!((r.chi, r.genus), (Some(2), Some(0)));
    }

    #[test]
    fn not_polytopal_when_product_has_wrong_order() {
        // cyclic group of order 6 with a = x^3, b = x^2: ab has order 6
        let (g, p) = presented(&["a", "b"], &["a^2", "b^3", "(a,b)"]);
        let r = certify(&g, &p).unwrap();
        assert_eq!(r.k12, 6);
        assert_eq!(r.verdict, Verdict::NotPolytopal);
    }

    #[test]
    fn refuses_missing_relators() {
        let (g, p) = presented(&["s", "t"], &["s^4", "t^3", "(s*t)^2"]);
        let partial = Presentation::new(p.alphabet.clone(), p.relators[..2].to_vec()).unwrap();
        assert!(matches!(certify(&g, &partial), Err(Error::IncompletePresentation(_))));
    }

    #[test]
    fn euler_examples() {
        assert_eq!(euler_genus(1024, 4, 8).unwrap(), (-128, 65));
        assert_eq!(euler_genus(24, 4, 3).unwrap(), (2, 0));
        for n in 10..20 {
            let (chi, g) = euler_genus(1 << n, 4, 8).unwrap();
            assert_eq!(chi, -(1 << (n - 3)));
            assert_eq!(g, (1 << (n - 4)) + 1);
        }
        assert!(euler_genus(10, 4, 8).is_err());
        assert!(euler_genus(12, 4, 3).is_err());
    }
}
