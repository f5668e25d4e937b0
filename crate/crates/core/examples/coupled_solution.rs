//! Coupled `f1`, `f2`, `R` solution: constant Casimir for constant `f1`
//! and the disjoint-support construction.

use suq2::grid::Grid;
use suq2::schrod::coupled::{coupled_solve, disjoint_support_pair};
use suq2::schrod::realization::{solve_f1, F1Branch, RadialProfile};
use suq2::Deformation;

fn main() -> suq2::Result<()> {
    let g = Grid::span(-5.0, 5.0, 2000)?;
    let zero = RadialProfile::from_fn(g, vec![false; g.count], |_| (0.0, 0.0, 0.0));
    for s in [1.9, 2.3, 2.8] {
        let d = Deformation::new(s)?;
        for sigma in [1.0, -1.0] {
            let f1 = solve_f1(&d, F1Branch::Constant { sigma }, g)?;
            for m in [0.5, 1.0, 2.5] {
                let sol = coupled_solve(&d, m, &f1, &zero)?;
                let r = sol.r();
                println!(
                    "s = {s} sigma = {sigma:+} m = {m}: c = {:.8}, spread {:.1e}, R(-5) = {:.3e}, R(5) = {:.3e}, exponent gap {:.1e}",
                    sol.c, sol.residual, r[0], r[g.count - 1], sol.alt_exponent_gap
                );
            }
        }
    }

    let d = Deformation::new(2.3)?;
    let i1: Vec<i64> = (-5..5).filter(|k| k % 2 == 0).collect();
    let i2: Vec<i64> = (-5..5).filter(|k| k % 2 != 0).collect();
    let (f1, f2) = disjoint_support_pair(g, 1.0, &i1, &i2, 0.1, (1.0, 0.5))?;
    let overlap = f1.values.iter().zip(&f2.values).filter(|(a, b)| **a * **b != 0.0).count();
    println!("\ndisjoint supports: {overlap} overlapping samples");
    match coupled_solve(&d, 1.0, &f1, &f2) {
        Ok(sol) => println!("solve: c = {:.6}, spread {:.2e}, success {}", sol.c, sol.residual, sol.success),
        Err(e) => println!("solve: {e}"),
    }
    Ok(())
}
