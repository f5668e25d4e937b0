//! The three potential regimes: wells near `s = 0`, a constant at
//! `s = pi/2` and Poschl-Teller / Morse shapes near `s = pi`. Writes CSVs
//! to the directory given as the first argument (default `target/shapes`).

use std::f64::consts::PI;

use suq2::grid::Grid;
use suq2::io::{Cell, OutputSet, Table};
use suq2::schrod::potential::{build_potential, commensurability, polyfit_relative_residual, Regime};
use suq2::schrod::realization::{scale_k, Constants, F1Branch, F2Branch, RadialProfile, RealizationFns};
use suq2::Deformation;

fn main() -> suq2::Result<()> {
    let dir = std::env::args().nth(1).unwrap_or_else(|| "target/shapes".into());
    let mut out = OutputSet::new(dir)?;
    let g = Grid::span(-6.0, 6.0, 2400)?;
    let cases: [(&str, f64, f64, Option<(F1Branch, F2Branch)>); 4] = [
        ("wells", 0.25, 1.5, None),
        ("flat", PI / 2.0, 1.0, None),
        ("poschl_teller", 3.0, 1.0, None),
        ("morse", 3.05, 3.0, Some((F1Branch::Constant { sigma: 1.0 }, F2Branch::Exponential))),
    ];
    for (name, s, m, branches) in cases {
        let d = Deformation::new(s)?;
        let fns = match branches {
            None => RealizationFns::canonical(&d, m, Constants::default(), g)?,
            Some((b1, b2)) => RealizationFns::new(&d, m, b1, b2, Constants::default(), g)?,
        };
        let p = build_potential(&d, m, &fns, Regime::for_s(&d))?;
        let live: Vec<f64> = p.unmasked().map(|i| p.values[i]).collect();
        let lo = live.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = live.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        println!(
            "{name:14} s = {s:.3} m = {m}: V in [{lo:.4}, {hi:.4}], masked {}, constant-fit residual {:.1e}",
            p.mask.iter().filter(|&&b| b).count(),
            polyfit_relative_residual(&p, 0)
        );
        let mut t = Table::new(&["r", "V", "masked"]);
        for ((r, v), mk) in g.points().iter().zip(&p.values).zip(&p.mask) {
            t.push(vec![Cell::Num(*r), Cell::Num(*v), Cell::Int(*mk as i64)]);
        }
        out.write_table(&format!("{name}.csv"), &t)?;
    }

    let d = Deformation::new(0.25)?;
    let period = PI / scale_k(&d);
    let wide = Grid::new(-12.0 * period, period / 400.0, 9601)?;
    let k = scale_k(&d);
    for ratio in [1.0, 2.0, (1.0 + 5f64.sqrt()) / 2.0] {
        let mut fns = RealizationFns::canonical(&d, 1.5, Constants::default(), wide)?;
        let w = 2.0 * k * ratio;
        fns.f2 = RadialProfile::from_fn(wide, fns.f1.mask.clone(), |r| {
            (10.0 * (w * r).cos(), -10.0 * w * (w * r).sin(), -10.0 * w * w * (w * r).cos())
        });
        let p = build_potential(&d, 1.5, &fns, Regime::Near0)?;
        let (peak, commensurate) = commensurability(&p, period);
        println!("f2 frequency ratio {ratio:.4}: secondary peak {peak:.3}, commensurate {commensurate}");
    }
    Ok(())
}
