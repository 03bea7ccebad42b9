//! Reidemeister-Schreier rewriting and Tietze simplification of each kernel,
//! then the coordinate map onto Z^4.

use std::time::Instant;

use polyforge::coset::{enumerate, EnumConfig};
use polyforge::kernel::certify_free_abelian_rank4;
use polyforge::presets;

fn main() -> polyforge::Result<()> {
    let u = presets::group_u();
    for case in presets::all_cases() {
        let t0 = Instant::now();
        let t = enumerate(&u, &case.basis, &EnumConfig::default())?;
        let cm = certify_free_abelian_rank4(&u, &t, &case.basis)?;
        let s = cm.summary();
        println!(
            "case {}: {} Schreier generators, {} relators -> {} generators, {} commutators, invariants {:?} ({} moves, {:.2?})",
            case.id,
            s.schreier_generators,
            s.rewritten_relators,
            s.simplified.generators.len(),
            s.simplified.commutator_pairs().len(),
            s.invariants.iter().map(|d| d.to_string()).collect::<Vec<_>>(),
            s.simplified.moves,
            t0.elapsed()
        );
        println!("  basis matrix (det {}):", cm.determinant());
        for line in cm.basis_matrix().to_string().lines() {
            println!("    {line}");
        }
        let x = &case.basis;
        let w = &(&x[0].pow(3) * &x[2].inverse()) * &x[3].pow(2);
        let v: Vec<String> = cm.coordinates(&w)?.iter().map(|c| c.to_string()).collect();
        println!("  coordinates of {0}1^3 {0}3^-1 {0}4^2: ({1})", case.stem, v.join(", "));
    }
    Ok(())
}
