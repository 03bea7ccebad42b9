//! Index and normality of the four kernels in U, with both strategies.

use std::time::Instant;

use polyforge::coset::{enumerate, EnumConfig, Strategy};
use polyforge::presets;

fn main() -> polyforge::Result<()> {
    let u = presets::group_u();
    println!("{:<6}{:<8}{:>8}{:>9}{:>10}{:>10}", "case", "method", "index", "normal", "defined", "ms");
    for case in presets::all_cases() {
        for s in [Strategy::Felsch, Strategy::Hlt] {
            let t0 = Instant::now();
            let t = enumerate(&u, &case.basis, &EnumConfig::default().strategy(s))?;
            let ms = t0.elapsed().as_secs_f64() * 1e3;
            println!(
                "{:<6}{:<8}{:>8}{:>9}{:>10}{:>10.1}",
                case.id,
                format!("{s:?}"),
                t.live_count(),
                t.is_normal()?,
                t.defined_count(),
                ms
            );
        }
    }
    Ok(())
}
