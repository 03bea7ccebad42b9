//! Solvability of the quotients through the derived series of their
//! regular permutation images.

use std::time::Instant;

use polyforge::coset::{enumerate, EnumConfig};
use polyforge::perm::{derived_series, image_of_table, DEFAULT_DEGREE_BOUND};
use polyforge::presets;
use polyforge::word::Word;

fn main() -> polyforge::Result<()> {
    let u = presets::group_u();
    let mut jobs: Vec<(u8, i64)> = presets::CASE_IDS.iter().map(|&c| (c, 1)).collect();
    jobs.push((1, 2));
    for (id, m) in jobs {
        let case = presets::case(id).expect("known case");
        let sub: Vec<Word> = case.basis.iter().map(|x| x.pow(m)).collect();
        let t0 = Instant::now();
        let t = enumerate(&u, &sub, &EnumConfig::default())?;
        let ds = derived_series(&image_of_table(&t)?, DEFAULT_DEGREE_BOUND)?;
        println!("case {id} m {m}: degree {}, series {}, {:?} ({:.2?})", t.live_count(), ds.orders.join(" > "), ds.verdict, t0.elapsed());
    }
    Ok(())
}
