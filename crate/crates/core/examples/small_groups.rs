//! The library on small groups: a presentation file, coset tables, the
//! rotation group of the cube, derived series and abelian invariants.

use polyforge::coset::{enumerate, EnumConfig};
use polyforge::input::PresentationFile;
use polyforge::kernel::analyse_subgroup;
use polyforge::linalg::{abelian_invariants, IntMatrix};
use polyforge::perm::{derived_series, image_of_table};
use polyforge::polytope::{certify, PresentedPermGroup, WordGroup};
use polyforge::tietze::TietzeOptions;
use polyforge::word::Presentation;

const S3: &str = r#"
generators = ["a", "b"]
relators = ["a^2", "b^3", "(a*b)^2"]
subgroup = ["a"]
"#;

fn main() -> polyforge::Result<()> {
    let (p, sub) = PresentationFile::parse(S3)?.build()?;
    let t = enumerate(&p, &sub, &EnumConfig::default())?.standardize()?;
    println!("S3 over <a>: index {}, normal {}\n{}", t.live_count(), t.is_normal()?, t.to_text());

    let cube = Presentation::parse(&["s", "t"], &["s^4", "t^3", "(s*t)^2"])?;
    let t = enumerate(&cube, &[], &EnumConfig::default())?;
    let g = PresentedPermGroup::from_normal_table(&t)?;
    let r = certify(&g, g.defining_presentation())?;
    println!("cube rotations: order {}, type {{{},{}}}, {}, chi {:?}", r.order, r.k1, r.k2, r.verdict, r.chi);
    let ds = derived_series(g.group(), 1000)?;
    println!("derived series orders {:?}, {:?}", ds.orders, ds.verdict);

    let a5 = Presentation::parse(&["a", "b"], &["a^2", "b^3", "(a*b)^5"])?;
    let t = enumerate(&a5, &[], &EnumConfig::default())?;
    let ds = derived_series(&image_of_table(&t)?, 1000)?;
    println!("<a,b | a^2, b^3, (ab)^5>: derived series orders {:?}, {:?}", ds.orders, ds.verdict);

    // derived subgroup of the free product C2 * C3, index 6, is free of rank 2
    let modular = Presentation::parse(&["a", "b"], &["a^2", "b^3"])?;
    let sub = vec![modular.parse_word("(a,b)")?, modular.parse_word("(a,b^-1)")?];
    let t = enumerate(&modular, &sub, &EnumConfig::default())?;
    let (_, s) = analyse_subgroup(&modular, &t, &TietzeOptions::default())?;
    println!(
        "commutator subgroup of C2*C3: index {}, {} generators, {} relators after simplification",
        s.index,
        s.simplified.generators.len(),
        s.simplified.relators.len()
    );

    let m = IntMatrix::from_rows(&[[2, 4, 4], [-6, 6, 12], [10, -4, -16]]);
    let inv: Vec<String> = abelian_invariants(&m).iter().map(|d| d.to_string()).collect();
    println!("Z^3 / rowspace{:?} has invariants {:?}", m.to_i64_rows().unwrap_or_default(), inv);
    Ok(())
}
