//! Plain-text and CSV renderings.

use std::fmt::Write;

use qhookup_core::family::{KjComparison, ThresholdMethod, ThresholdResult};
use qhookup_core::{DensityMatrix, ProductBasis, QuantifierReport};

fn basis_text(b: &ProductBasis) -> String {
    match b.angles() {
        Some(angles) => angles
            .iter()
            .map(|a| format!("(θ={:.6}, φ={:.6})", a.theta, a.phi))
            .collect::<Vec<_>>()
            .join(" ⊗ "),
        None if b.is_computational() => "computational".to_string(),
        None => "explicit unitaries".to_string(),
    }
}

fn opt(x: Option<f64>) -> String {
    x.map_or_else(|| "n/a".to_string(), |v| format!("{v:.10}"))
}

pub fn report_text(d: &DensityMatrix, r: &QuantifierReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "dims            {:?}", d.dims());
    let _ = writeln!(s, "reference basis {}", basis_text(&r.reference_basis));
    let rows = [
        ("T", "total correlations", Some(r.total_correlations)),
        ("C", "coherence", Some(r.coherence)),
        ("C_L", "local coherence", Some(r.local_coherence)),
        ("C_M", "multipartite coherence", Some(r.multipartite_coherence)),
        ("K", "irreducible classical", Some(r.irreducible_classical)),
        ("M", "hookup", Some(r.hookup)),
        ("D", "discord", r.discord),
        ("J", "classical correlations", r.classical_correlations),
        ("L", "excess D + J - T", r.l_term),
        ("G", "global discord", r.global_discord),
    ];
    for (key, name, value) in rows {
        let _ = writeln!(s, "{key:<4} {name:<24} {}", opt(value));
    }
    if let Some(b) = &r.chi_basis {
        let _ = writeln!(s, "chi basis       {}", basis_text(b));
    }
    if let Some(b) = &r.g_basis {
        let _ = writeln!(s, "G basis         {}", basis_text(b));
    }
    if let Some(o) = &r.optimizer {
        let _ = writeln!(
            s,
            "optimizer       starts={} best S(chi)={:.10} converged={} (G converged={})",
            o.starts_used, o.best_objective, o.converged, o.global_discord_converged
        );
    }
    if let Some(why) = &r.unavailable {
        let _ = writeln!(s, "unavailable     {why}");
    }
    let res = &r.residuals;
    let _ = writeln!(
        s,
        "residuals       |M-T-C_L|={:.2e} |M-C-K|={:.2e} L forms={}",
        res.hookup_vs_total_plus_local,
        res.hookup_vs_coherence_plus_classical,
        res.l_forms.map_or_else(|| "n/a".into(), |x| format!("{x:.2e}"))
    );
    if r.numerical_warning {
        let _ = writeln!(s, "warning         identity residual above 1e-8");
    }
    s
}

pub fn report_csv(r: &QuantifierReport) -> String {
    let cols = ["T", "C", "C_L", "C_M", "K", "M", "D", "J", "L", "G"];
    let vals = [
        Some(r.total_correlations),
        Some(r.coherence),
        Some(r.local_coherence),
        Some(r.multipartite_coherence),
        Some(r.irreducible_classical),
        Some(r.hookup),
        r.discord,
        r.classical_correlations,
        r.l_term,
        r.global_discord,
    ];
    let vals: Vec<String> = vals
        .iter()
        .map(|v| v.map_or_else(String::new, |x| format!("{x:.16e}")))
        .collect();
    format!("{}\n{}\n", cols.join(","), vals.join(","))
}

pub fn thresholds(results: &[ThresholdResult]) -> String {
    let mut s = String::new();
    for r in results {
        let method = match r.method {
            ThresholdMethod::BasisSwitch => "basis-switch",
            ThresholdMethod::Derivative => "derivative",
        };
        for (name, t) in [("ε′", &r.epsilon_prime), ("ε″", &r.epsilon_double_prime)] {
            let _ = writeln!(
                s,
                "{method:<13} {name} = {:.6}  bracket [{:.7}, {:.7}]  residual {:.2e}",
                t.value, t.bracket.0, t.bracket.1, t.residual
            );
        }
    }
    s
}

pub fn compare_text(rows: &[KjComparison]) -> String {
    let mut s = String::from("K - J over θ ∈ [0, π/4]; sym: U(θ)⊗U(θ), 1-side: U(θ)⊗I\n");
    let _ = writeln!(
        s,
        "{:<8} {:<10} {:>12} {:>12} {:>12} {:>12}",
        "epsilon", "J", "sym max", "sym min", "1-side max", "1-side min"
    );
    for r in rows {
        let _ = writeln!(
            s,
            "{:<8.4} {:<10.6} {:>+12.4e} {:>+12.4e} {:>+12.4e} {:>+12.4e}",
            r.epsilon,
            r.j,
            r.symmetric.max_k_minus_j,
            r.symmetric.min_k_minus_j,
            r.one_sided.max_k_minus_j,
            r.one_sided.min_k_minus_j
        );
    }
    s
}

pub fn compare_csv(rows: &[KjComparison]) -> String {
    let mut s = String::from(
        "epsilon,J,symmetric_max,symmetric_theta_at_max,symmetric_min,symmetric_theta_at_min,one_sided_max,one_sided_theta_at_max,one_sided_min,one_sided_theta_at_min\n",
    );
    for r in rows {
        let v = [
            r.epsilon,
            r.j,
            r.symmetric.max_k_minus_j,
            r.symmetric.theta_at_max,
            r.symmetric.min_k_minus_j,
            r.symmetric.theta_at_min,
            r.one_sided.max_k_minus_j,
            r.one_sided.theta_at_max,
            r.one_sided.min_k_minus_j,
            r.one_sided.theta_at_min,
        ];
        let cells: Vec<String> = v.iter().map(|x| format!("{x:.16e}")).collect();
        let _ = writeln!(s, "{}", cells.join(","));
    }
    s
}
