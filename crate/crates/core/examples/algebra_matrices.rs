//! Build finite and truncated matrix representations and print the
//! algebra residuals.

use suq2::matrep::{build_rep, verify_algebra};
use suq2::repcls::{self, MRule};
use suq2::Deformation;

fn main() -> suq2::Result<()> {
    let d = Deformation::new(0.5)?;
    println!("finite representations at s = 0.5");
    for n in 1..6 {
        let c = d.q_num((n as f64 + 1.0) / 2.0).powi(2);
        let labels: Vec<f64> = (0..=n).map(|i| -(n as f64) / 2.0 + i as f64).collect();
        let t = build_rep(&d, c, &labels)?;
        let r = verify_algebra(&t, &d, c);
        println!(
            "  dim {}: [Jz,J+-] {:.1e}  [J+,J-] {:.1e}  Casimir {:.1e}  hermitian {:.1e}",
            t.jz.dim(),
            r.res_jz_jpm,
            r.res_jp_jm,
            r.res_casimir,
            r.hermiticity
        );
    }

    let d = Deformation::new(1.013)?;
    let c = 1.2 * repcls::thresholds(&d).c0;
    let labels: Vec<f64> = (-6..=6).map(|l| 0.3 + l as f64).collect();
    let t = build_rep(&d, c, &labels)?;
    let r = verify_algebra(&t, &d, c);
    println!(
        "\ncontinuous series, s = 1.013, c = {c:.4}, 13 labels: rows {:?}, defining residual {:.1e}, truncated {}",
        r.rows,
        r.max_defining_residual(),
        r.truncated
    );

    let c = 0.5 * (repcls::thresholds(&d).c1 + repcls::thresholds(&d).c2);
    for rep in repcls::classify(&d, c) {
        if let MRule::Lattice { .. } = rep.m_rule {
            let labels = rep.labels_in(-8.0, 8.0);
            match build_rep(&d, c, &labels) {
                Ok(t) => println!("{} lattice: dim {}, residual {:.1e}", rep.class, t.jz.dim(), verify_algebra(&t, &d, c).max_defining_residual()),
                Err(e) => println!("{} lattice: {e}", rep.class),
            }
        }
    }
    Ok(())
}
