//! Schmidt decomposition of the full memory cycle: transfer eigenvalues,
//! zero-frequency weights and the quality of the truncated expansion.

use tripod_mzi::{
    compute_full_cycle, compute_write_kernel, schmidt_decompose, KernelConfig, DEFAULT_RANK_TOL,
};

fn main() {
    let config = KernelConfig::default();
    let wk = compute_write_kernel(&config).unwrap();
    let fck = compute_full_cycle(&wk);
    let basis = schmidt_decompose(&fck, &wk, DEFAULT_RANK_TOL).unwrap();

    println!("retained modes: {}", basis.n_modes());
    println!("\n   i     lambda_i        mu_i    phi_i(0)^2   write eff sqrt(lambda)");
    let mut occupied = 0.0;
    for i in 0..basis.n_modes() {
        let lam = basis.lambdas[i];
        let p0 = basis.phi_zero_frequency(i).powi(2);
        occupied += p0;
        println!(
            "  {:2}  {:11.6e}  {:10.6}  {:10.6}  {:10.6}",
            i + 1,
            lam,
            basis.mus[i],
            p0,
            lam.sqrt()
        );
    }
    println!("\nsum of phi_i(0)^2 over all modes: {occupied:.6} (Parseval limit 1)");
    println!(
        "first two modes hold {:.1}% of the zero-frequency weight",
        100.0
            * (basis.phi_zero_frequency(0).powi(2) + basis.phi_zero_frequency(1).powi(2))
    );

    let (ortho_phi, ortho_g) = basis.orthonormality_defect();
    println!("\northonormality defect: phi {ortho_phi:.2e}, g {ortho_g:.2e}");
    println!(
        "relative L2 error of the truncated kernel expansion: {:.2e}",
        basis.reconstruction_error(&fck)
    );
}
