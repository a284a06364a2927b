//! Bessel function of the first kind, order zero.
//!
//! Power series below the crossover, Hankel asymptotic expansion above it.
//! Absolute error stays below 1e-10 on [0, 200]; the crossover at x = 12 is
//! where the two branches agree to better than that.

use super::NumericsError;

/// Branch switch point. Below: alternating power series (worst-case
/// cancellation ~1e-12 at the crossover). Above: Hankel expansion truncated
/// deep enough that the first omitted term is ~2e-11 at x = 12.
const CROSSOVER: f64 = 12.0;

/// Hankel coefficients a_k = prod_{m=1..k} (2m-1)^2 / (k! 8^k).
const A: [f64; 18] = [
    1.0,
    1.25e-1,
    7.03125e-2,
    7.32421875e-2,
    1.12152099609375e-1,
    2.27108001708984375e-1,
    5.72501420974731445e-1,
    1.72772750258445740e0,
    6.07404200127348304e0,
    2.43805296995560639e1,
    1.10017140269246738e2,
    5.51335896122020586e2,
    3.03809051092238406e3,
    1.82577554742931752e4,
    1.18838426256783248e5,
    8.32859304016289301e5,
    6.25295149343479704e6,
    5.00695895319889262e7,
];

/// J0(x) for finite x; even in x.
pub fn bessel_j0(x: f64) -> Result<f64, NumericsError> {
    if !x.is_finite() {
        return Err(NumericsError::NonFinite {
            name: "x",
            value: x,
        });
    }
    Ok(j0_raw(x))
}

/// Infallible J0 for hot loops whose inputs are already validated.
pub(crate) fn j0_raw(x: f64) -> f64 {
    let ax = x.abs();
    if ax <= CROSSOVER {
        j0_series(ax)
    } else {
        j0_asymptotic(ax)
    }
}

fn j0_series(x: f64) -> f64 {
    let u = 0.25 * x * x;
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..=60 {
        term *= -u / ((k * k) as f64);
        sum += term;
        if term.abs() < 1e-18 {
            break;
        }
    }
    sum
}

fn j0_asymptotic(x: f64) -> f64 {
    let u = 1.0 / (x * x);
    // p = 1 - a2/x^2 + a4/x^4 - ..., q = -a1/x + a3/x^3 - ...
    let p = 1.0
        + u * (-A[2] + u * (A[4] + u * (-A[6] + u * (A[8] + u * (-A[10] + u * (A[12] + u * (-A[14] + u * A[16])))))));
    let q = (-A[1]
        + u * (A[3] + u * (-A[5] + u * (A[7] + u * (-A[9] + u * (A[11] + u * (-A[13] + u * (A[15] - u * A[17]))))))))
        / x;
    let w = x - std::f64::consts::FRAC_PI_4;
    (2.0 / (std::f64::consts::PI * x)).sqrt() * (p * w.cos() - q * w.sin())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::gauss_legendre;

    /// Truncated power series with an alternating-series remainder bound.
    /// Only trustworthy for small x; used as the independent oracle below 9.
    fn series_oracle(x: f64) -> (f64, f64) {
        let u = 0.25 * x * x;
        let mut term = 1.0_f64;
        let mut sum = 1.0_f64;
        let mut k = 1u32;
        loop {
            term *= -u / ((k * k) as f64);
            sum += term;
            k += 1;
            // once terms decrease, the remainder is bounded by the next term
            if (k * k) as f64 > u && term.abs() < 1e-22 {
                break;
            }
            assert!(k < 200);
        }
        (sum, term.abs())
    }

    /// Integral-representation oracle: J0(x) = (1/pi) int_0^pi cos(x sin h) dh.
    /// Independent of both branch implementations; good everywhere on [0, 200].
    fn integral_oracle(x: f64) -> f64 {
        let grid = gauss_legendre(600, 0.0, std::f64::consts::PI).unwrap();
        grid.integrate(|h| (x * h.sin()).cos()) / std::f64::consts::PI
    }

    #[test]
    fn small_argument_values() {
        assert_eq!(bessel_j0(0.0).unwrap(), 1.0);
        let (v, bound) = series_oracle(1.0);
        assert!(bound < 1e-16);
        assert!((v - 0.7651976865579666).abs() < 1e-15);
        assert!((bessel_j0(1.0).unwrap() - 0.7651976865579666).abs() < 1e-12);
        assert!((bessel_j0(-1.0).unwrap() - bessel_j0(1.0).unwrap()).abs() == 0.0);
        assert!((bessel_j0(0.5).unwrap() - 9.38469807240812859e-1).abs() < 1e-12);
    }

    #[test]
    fn first_zero_located_by_bisection_on_the_series() {
        let (mut lo, mut hi) = (2.0_f64, 3.0_f64);
        assert!(series_oracle(lo).0 > 0.0 && series_oracle(hi).0 < 0.0);
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            if series_oracle(mid).0 > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let zero = 0.5 * (lo + hi);
        assert!((zero - 2.404825557695773).abs() < 1e-12);
        assert!(bessel_j0(2.404825557695773).unwrap().abs() <= 1e-10);
    }

    #[test]
    fn sign_alternates_across_the_first_three_zeros() {
        // zeros near 2.4048, 5.5201, 8.6537 (bracketed by the series oracle)
        for (a, b) in [(2.3, 2.5), (5.4, 5.6), (8.5, 8.8)] {
            assert!(series_oracle(a).0 * series_oracle(b).0 < 0.0);
        }
        assert!(bessel_j0(1.0).unwrap() > 0.0);
        assert!(bessel_j0(4.0).unwrap() < 0.0);
        assert!(bessel_j0(7.0).unwrap() > 0.0);
        assert!(bessel_j0(10.0).unwrap() < 0.0);
    }

    #[test]
    fn crossover_is_seamless() {
        for x in [11.9, 11.99, 12.0, 12.000001, 12.01, 12.1] {
            let series = j0_series(x);
            let asym = j0_asymptotic(x);
            assert!(
                (series - asym).abs() < 1e-10,
                "branch mismatch at {x}: {series} vs {asym}"
            );
        }
        assert!((bessel_j0(11.99).unwrap() - 4.54515603528586054e-2).abs() < 1e-11);
        assert!((bessel_j0(12.01).unwrap() - 4.99204303198253554e-2).abs() < 1e-11);
    }

    #[test]
    fn matches_integral_oracle_up_to_200() {
        let mut x = 0.1;
        while x <= 200.0 {
            let want = integral_oracle(x);
            let got = bessel_j0(x).unwrap();
            assert!(
                (got - want).abs() <= 1e-10,
                "J0({x}) = {got}, oracle {want}"
            );
            x += 7.3;
        }
        assert!((bessel_j0(200.0).unwrap() - -1.54374399305650910e-2).abs() < 1e-11);
    }

    #[test]
    fn rejects_non_finite_input() {
        assert!(bessel_j0(f64::NAN).is_err());
        assert!(bessel_j0(f64::INFINITY).is_err());
    }
}
