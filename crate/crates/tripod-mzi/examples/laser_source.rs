//! Per-mode input statistics of the synchronized sub-Poissonian laser and
//! their approach to the long-pulse limit.

use tripod_mzi::gaussian::VACUUM_VAR;
use tripod_mzi::source::{finite_pulse_correction, squeezed_variance};
use tripod_mzi::{
    build_input_spec, compute_full_cycle, compute_write_kernel, schmidt_decompose, KernelConfig,
    SourceParams, DEFAULT_RANK_TOL,
};

fn main() {
    let config = KernelConfig::default();
    let wk = compute_write_kernel(&config).unwrap();
    let basis = schmidt_decompose(&compute_full_cycle(&wk), &wk, DEFAULT_RANK_TOL).unwrap();

    let params = SourceParams::default();
    println!(
        "laser: n_bar T_W = {}, mu = {}, kappa T_W = {:.0}, squeezing on {:?}",
        params.n_bar_tw, params.mu, params.kappa_tw, params.squeezed_quadrature
    );

    let spec = build_input_spec(&params, &basis).unwrap();
    println!("\n  mode   occupancy      mean_x     var_x        var_y");
    for m in &spec.modes {
        println!(
            "  {:4}  {:10.3}  {:10.3}  {:10.3e}  {:8.3}{}",
            m.mode_index + 1,
            m.occupancy,
            m.mean_x,
            m.var_x,
            m.var_y,
            if m.vacuum { "   (vacuum)" } else { "" }
        );
    }
    println!(
        "\nunassigned occupancy beyond the retained modes: {:.3}",
        spec.parseval_gap
    );

    let (nord_flat, full_flat) = squeezed_variance(&params);
    println!("\nlong-pulse limit at mu = {}:", params.mu);
    println!("  normally ordered squeezed variance {nord_flat:+.6e}");
    println!("  full squeezed variance             {full_flat:.6e}  (vacuum 0.25)");

    println!("\nfinite-pulse squeezed variance of mode 1 vs kappa T_W:");
    for kappa_tw in [1e1, 1e2, 1e3, 1e4] {
        let p = SourceParams { kappa_tw, ..params };
        let nord = finite_pulse_correction(&p, &basis, 0).unwrap();
        println!(
            "  kappa T_W = {kappa_tw:8.0}: var_x = {:.6e}",
            VACUUM_VAR + nord
        );
    }
}
