//! Proving two relations of U from a partial table of the trivial subgroup.
//!
//! U is infinite, so enumeration never completes, but every entry of a
//! partial table is a proven equality: a word that leads coset 1 back to
//! itself is trivial in U.

use polyforge::coset::{certify_in_table, enumerate, EnumConfig, Strategy};
use polyforge::presets;
use polyforge::word::Word;

fn main() -> polyforge::Result<()> {
    let u = presets::group_u();
    let c = presets::case(1).expect("case 1");
    let [x1, x2, _, x4] = c.basis.clone();
    let (a, b) = (Word::gen(0), Word::gen(1));
    let words = [
        ("x1^a (x2 x4^-1)^-1", &x1.conjugate(&a) * &(&x2 * &x4.inverse()).inverse()),
        ("x1^b (x1 x4)^-1", &x1.conjugate(&b) * &(&x1 * &x4).inverse()),
    ];
    for limit in [20_000, 60_000, 110_000] {
        let t = enumerate(&u, &[], &EnumConfig::with_limit(limit).strategy(Strategy::Hlt))?;
        println!("limit {limit}: {} live cosets, complete {}", t.live_count(), t.is_complete());
        for (name, w) in &words {
            println!("  {name:<20} length {:>3}: {:?}", w.len(), certify_in_table(&t, w));
        }
    }
    Ok(())
}
