//! Apply the raising and lowering operators to eigenstates at `s = pi/2`
//! and compare the image with the target potential.

use std::f64::consts::PI;

use suq2::grid::Grid;
use suq2::schrod::eigen::{eigensolve, self_residual};
use suq2::schrod::ladder::ladder_step;
use suq2::schrod::potential::{build_potential, Regime};
use suq2::schrod::realization::{Constants, RealizationFns};
use suq2::{Deformation, Sign};

fn main() -> suq2::Result<()> {
    let d = Deformation::new(PI / 2.0)?;
    for n in [1500, 3000, 6000] {
        let g = Grid::span(-3.0, 3.0, n)?;
        println!("h = {:.1e}", g.step);
        for m in [0.0, 1.0, 2.0] {
            let fns = RealizationFns::canonical(&d, m, Constants::default(), g)?;
            let p = build_potential(&d, m, &fns, Regime::NearHalfPi)?;
            let eig = eigensolve(&p, 3)?;
            for k in 0..3 {
                let own = self_residual(&p.values, &eig, k);
                for sign in [Sign::Plus, Sign::Minus] {
                    let chk = ladder_step(&d, &fns, m, sign, &eig, k, Regime::NearHalfPi)?;
                    println!(
                        "  m = {m} k = {k} -> m' = {}: norm ratio {:.4}, residual {:.2e} (own {:.2e}), radicand {:.4}, unitary {}",
                        chk.m_new, chk.norm_ratio, chk.residual, own, chk.radicand, chk.unitary
                    );
                }
            }
        }
    }
    Ok(())
}
