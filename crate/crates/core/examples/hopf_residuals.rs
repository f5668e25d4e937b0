//! Hopf axioms, unitarity window and `2 J_z` spectrum for the generalized
//! deformation.

use suq2::hopfgen::{self, GenDeformation, Profile, WindowConvention};

fn main() -> suq2::Result<()> {
    let sech = GenDeformation::new(2.0, Profile::Sech { f_lo: 0.8, f_hi: 1.3 })?;
    let cov = GenDeformation::new(2.0, Profile::Covariant { f0: 1.0 })?;
    for (name, gd, m0, dim, c) in [("sech", &sech, -4.0, 9, 2.0), ("covariant", &cov, -3.0, 7, 12.0)] {
        let rep = hopfgen::build_gen_rep(gd, m0, dim, c)?;
        let r = hopfgen::hopf_axiom_report(gd, &rep);
        println!("{name}: {r:#?}");
    }

    let conv = WindowConvention::Consistent;
    let c_min = hopfgen::c_min(&sech, conv);
    println!("\nc_min = {c_min:.6}");
    for k in 0..6 {
        let c = c_min + 0.5 * k as f64;
        let w = hopfgen::unitarity_window_with(c, &sech, conv)?;
        println!("c = {c:.3}: l1 {:.4} L1 {:.4} L2 {:.4} l2 {:.4}", w.l1, w.big_l1, w.big_l2, w.l2);
    }

    let ms: Vec<f64> = (-12..=12).map(f64::from).collect();
    let spec = hopfgen::spectrum_2jz(&sech, &ms)?;
    println!("\n2 Jz eigenvalues:");
    for (m, v) in ms.iter().zip(&spec) {
        println!("  m = {m:>3}: {v:.10}");
    }
    println!("accumulation point: {:?}", hopfgen::accumulation_point(&spec, 6, 1e-8));
    Ok(())
}
