//! Euler characteristic and genus over the (case, m) grid, with the 2-power
//! orders 2^n picked out. Prints CSV.

use polyforge::polytope::euler_genus;
use polyforge::presets;

fn main() -> polyforge::Result<()> {
    println!("case,m,order,log2,chi,genus");
    for case in presets::all_cases() {
        for m in [1u64, 2, 3, 4, 5, 6, 8] {
            let order = case.index * m.pow(4);
            let (chi, g) = euler_genus(order, 4, 8)?;
            let log2 = if order.is_power_of_two() { order.trailing_zeros().to_string() } else { String::new() };
            println!("{},{m},{order},{log2},{chi},{g}", case.id);
        }
    }
    Ok(())
}
