//! Chiral or regular: does a -> a^-1, b -> a^2 b respect every relator of
//! the quotient's presentation?

use polyforge::coset::{enumerate, EnumConfig};
use polyforge::kernel::certify_free_abelian_rank4;
use polyforge::polytope::{atlas_record, certify};
use polyforge::presets;
use polyforge::quotient::build_pair_group;

fn main() -> polyforge::Result<()> {
    let u = presets::group_u();
    let m_max: u64 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(3);
    for case in presets::all_cases() {
        let t = enumerate(&u, &case.basis, &EnumConfig::default())?;
        let cm = certify_free_abelian_rank4(&u, &t, &case.basis)?;
        for m in 1..=m_max {
            let g = build_pair_group(&case, m, &cm)?;
            let r = certify(&g, g.presentation())?;
            print!("case {} m {m}: {} order {}", case.id, r.verdict, r.order);
            match &r.witness {
                Some(w) => println!(
                    ", ({})^{} is sent to an element of order {} (root image order {})",
                    w.root, w.power, w.image_order, w.root_image_order
                ),
                None => println!(", every substituted relator is trivial"),
            }
            if case.id == 1 && m == 2 {
                println!("{}", serde_json::to_string(&atlas_record(&r, case.id, m)).expect("json"));
            }
        }
    }
    Ok(())
}
