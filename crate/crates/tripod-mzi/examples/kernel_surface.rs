//! Evaluate the write kernel on the default grid and check it against the
//! closed form sin(t) on the entry face.

use tripod_mzi::{compute_write_kernel_diag, KernelConfig};

fn main() {
    let config = KernelConfig::default();
    println!(
        "write kernel on T_W = {}, L = {} ({} x {} nodes)",
        config.t_w, config.l, config.n_t, config.n_z
    );
    let (wk, max_odd) = compute_write_kernel_diag(&config).unwrap();
    println!("ghost sine part of the convolution: {max_odd:.2e} (pure quadrature noise)");

    let mut worst = 0.0f64;
    for (i, &t) in wk.t_grid.nodes.iter().enumerate() {
        let g0 = wk.eval_at(t, 0.0);
        worst = worst.max((g0 - t.sin()).abs());
        let _ = i;
    }
    println!("max |G(t, 0) - sin t| = {worst:.2e}");

    println!("\n  t\\z      0.0       2.5       5.0       7.5      10.0");
    for &t in [0.5, 1.5, 2.75, 4.0, 5.5].iter() {
        print!("{t:5.2}");
        for &z in [0.0, 2.5, 5.0, 7.5, 10.0].iter() {
            print!("  {:+8.4}", wk.eval_at(t, z));
        }
        println!();
    }
}
