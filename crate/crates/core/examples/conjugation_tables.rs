//! Conjugation action of a and b on each kernel, written as words in the
//! basis, and the check that the relators of U act trivially.

use polyforge::action::{action_matrices, verify_action_relations};
use polyforge::coset::{enumerate, EnumConfig};
use polyforge::kernel::certify_free_abelian_rank4;
use polyforge::presets;

fn as_word(stem: char, row: &[i64]) -> String {
    let parts: Vec<String> = row
        .iter()
        .enumerate()
        .filter(|(_, &c)| c != 0)
        .map(|(i, &c)| match c {
            1 => format!("{stem}{}", i + 1),
            _ => format!("{stem}{}^{c}", i + 1),
        })
        .collect();
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join(" ")
    }
}

fn main() -> polyforge::Result<()> {
    let u = presets::group_u();
    for case in presets::all_cases() {
        let t = enumerate(&u, &case.basis, &EnumConfig::default())?;
        let cm = certify_free_abelian_rank4(&u, &t, &case.basis)?;
        let ap = action_matrices(&cm)?;
        let rows = ap.rows_i64();
        println!("case {}:", case.id);
        for (g, name) in ["a", "b"].iter().enumerate() {
            let line: Vec<String> = (0..4)
                .map(|i| format!("{}{}^{name} = {}", case.stem, i + 1, as_word(case.stem, &rows[g][i])))
                .collect();
            println!("  {}", line.join(",  "));
        }
        let stored = (0..2).all(|g| (0..4).all(|i| rows[g][i] == case.conjugation[g][i]));
        println!(
            "  det A_a = {}, det A_b = {}, relators act trivially: {}, matches stored table: {stored}",
            ap.a().determinant(),
            ap.b().determinant(),
            verify_action_relations(&ap, &u)?
        );
    }
    Ok(())
}
