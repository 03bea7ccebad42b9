//! The quotients U/N_m as pairs (coset, vector mod m), compared with direct
//! enumeration where that is cheap.

use polyforge::coset::{enumerate, EnumConfig};
use polyforge::kernel::certify_free_abelian_rank4;
use polyforge::presets;
use polyforge::quotient::{build_pair_group, cross_validate};
use polyforge::word::Word;

fn main() -> polyforge::Result<()> {
    let u = presets::group_u();
    let (a, b) = (Word::gen(0), Word::gen(1));
    let words = [a.clone(), b.clone(), &a * &b, presets::mirror_witness()];
    for case in presets::all_cases() {
        let t = enumerate(&u, &case.basis, &EnumConfig::default())?;
        let cm = certify_free_abelian_rank4(&u, &t, &case.basis)?;
        for m in 1..=6 {
            let g = build_pair_group(&case, m, &cm)?;
            let orders: Vec<u64> = words
                .iter()
                .map(|w| g.element_order_pair(w, 1 << 20))
                .collect::<polyforge::Result<_>>()?;
            let mut line = format!("case {} m {m}: order {:>9}, |a| |b| |ab| |w| = {:?}", case.id, g.order(), orders);
            if case.index * m.pow(4) <= 40_000 {
                let cv = cross_validate(&g, &words, 200_000)?;
                line.push_str(&format!(", direct index {} agrees: {}", cv.direct_index, cv.agree));
            }
            println!("{line}");
        }
    }
    Ok(())
}
