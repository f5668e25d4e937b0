//! Sweep the Casimir at fixed `s` and list the unitary classes found.
//!
//! `cargo run --example classify_reps -- 1.013`

use suq2::repcls::{self, MRule};
use suq2::Deformation;

fn main() -> suq2::Result<()> {
    let s: f64 = std::env::args().nth(1).map(|a| a.parse().expect("s")).unwrap_or(1.013);
    let d = Deformation::new(s)?;
    let t = repcls::thresholds(&d);
    println!("s = {s}: c0 = {:.12}, c1 = {:.12}, c2 = {:.12}", t.c0, t.c1, t.c2);
    match d.root_of_unity() {
        Some((p, l)) => println!("s/pi = {p}/{l}"),
        None => println!("s/pi irrational to 64 denominators"),
    }

    let mut last = String::new();
    for i in 1..=2000 {
        let c = 1.25 * t.c0 * i as f64 / 2000.0;
        let reps = repcls::classify(&d, c);
        let summary: Vec<String> = reps
            .iter()
            .map(|r| match &r.m_rule {
                MRule::Unbounded { .. } => format!("{} (strange: {})", r.class, r.strange),
                MRule::Lattice { m0, m0_range, .. } => {
                    format!("{} m0 = {m0:.4} in [{:.4}, {:.4}]", r.class, m0_range.0, m0_range.1)
                }
                MRule::Finite(list) => format!("{} dim {} k = {:?}", r.class, list.len(), r.k),
            })
            .collect();
        let line = if summary.is_empty() { "-".to_string() } else { summary.join("; ") };
        if line != last {
            println!("c = {c:8.5}  {line}");
            last = line;
        }
    }
    for n in 0..4 {
        let c = d.q_num((n as f64 + 1.0) / 2.0).powi(2);
        for r in repcls::classify(&d, c) {
            println!("c = [{}/2]^2 = {c:.6}: {} dim {:?}", n + 1, r.class, r.dimension());
        }
    }

    // interval picture just below c0
    let c = 0.9 * t.c0;
    let st = repcls::interval_structure(&d, c)?;
    println!("\nc = {c:.4}: small {:.4}, large {:.4}, gap {:.4}, period {:.4}", st.delta, st.big_delta, st.gap, st.period);
    for iv in st.intervals_in(-st.period, st.period) {
        println!("  {:?} k = {:>2}: [{:.4}, {:.4}]", iv.kind, iv.k, iv.lo, iv.hi);
    }
    Ok(())
}
