//! Eigenvalues of the hard-wall solver against closed forms, then the
//! lowest levels of each well of a realization potential.

use std::f64::consts::PI;

use suq2::grid::Grid;
use suq2::schrod::eigen::{eigensolve_cells, eigensolve_values};
use suq2::schrod::potential::{build_potential, Regime};
use suq2::schrod::realization::{Constants, RealizationFns};
use suq2::Deformation;

fn main() -> suq2::Result<()> {
    println!("box [0, 1]:");
    let mut prev: Option<Vec<f64>> = None;
    for n in [250, 500, 1000, 2000] {
        let g = Grid::span(0.0, 1.0, n)?;
        let e = eigensolve_values(&vec![0.0; g.count], g, 3)?.eigenvalues;
        let err: Vec<f64> = e.iter().enumerate().map(|(k, v)| v - ((k + 1) as f64 * PI).powi(2)).collect();
        print!("  h = {:.1e}: errors {:.3e} {:.3e} {:.3e}", g.step, err[0], err[1], err[2]);
        if let Some(p) = prev {
            print!("  (ratio {:.3})", p[0] / err[0]);
        }
        println!();
        prev = Some(err);
    }

    let g = Grid::span(-12.0, 12.0, 4000)?;
    let v: Vec<f64> = g.points().iter().map(|r| -6.0 / r.cosh().powi(2)).collect();
    let e = eigensolve_values(&v, g, 2)?;
    println!("-6 sech^2: {:.6} {:.6} (exact -4, -1), orthonormality {:.1e}", e.eigenvalues[0], e.eigenvalues[1], e.orthonormality_defect());

    let d = Deformation::new(0.25)?;
    let fns = RealizationFns::canonical(&d, 1.0, Constants::default(), Grid::span(-20.0, 20.0, 8000)?)?;
    let p = build_potential(&d, 1.0, &fns, Regime::Near0)?;
    println!("\nrealization s = 0.25, m = 1, per well:");
    for cell in eigensolve_cells(&p, 3)? {
        println!("  samples {:>5}..: {:?}", cell.offset, cell.eigenvalues.iter().map(|x| format!("{x:.6}")).collect::<Vec<_>>());
    }
    Ok(())
}
