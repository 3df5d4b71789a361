//! Bessel function of the first kind, order zero.
//!
//! Power series below |x| = 12, Hankel asymptotic expansion above. The
//! crossover keeps both branches near machine accuracy (worst ~1e-11 at
//! the switch, set by optimal truncation of the asymptotic series).

/// J0(x) for the Hankel kernel of the radial transform.
pub fn j0(x: f64) -> f64 {
    let x = x.abs();
    if x < 12.0 {
        j0_series(x)
    } else {
        j0_asymptotic(x)
    }
}

fn j0_series(x: f64) -> f64 {
    let m = -x * x / 4.0;
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..200 {
        term *= m / ((k * k) as f64);
        sum += term;
        if term.abs() < 1e-17 * sum.abs().max(1.0) {
            break;
        }
    }
    sum
}

fn j0_asymptotic(x: f64) -> f64 {
    // Hankel symbols (0,k) = (-1)^k [(2k-1)!!]^2 / (k! 8^k); the series in
    // 1/x is summed to its smallest term.
    let mut p = 1.0; // sum over even k with alternating sign
    let mut q = 0.0; // sum over odd k
    let mut term = 1.0;
    let mut prev = f64::INFINITY;
    for k in 1..64 {
        let kf = k as f64;
        term *= (2.0 * kf - 1.0) * (2.0 * kf - 1.0) / (8.0 * kf * x);
        if term.abs() >= prev {
            break; // asymptotic series started diverging
        }
        prev = term.abs();
        match k % 4 {
            1 => q -= term,
            2 => p -= term,
            3 => q += term,
            _ => p += term,
        }
        if term.abs() < 1e-17 {
            break;
        }
    }
    let chi = x - std::f64::consts::FRAC_PI_4;
    (2.0 / (std::f64::consts::PI * x)).sqrt() * (chi.cos() * p - chi.sin() * q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn reference_values() {
        // scipy.special.j0 goldens
        assert_eq!(j0(0.0), 1.0);
        assert_relative_eq!(j0(1.0), 0.7651976865579666, max_relative = 1e-12);
        assert_relative_eq!(j0(2.0), 0.22389077914123567, max_relative = 1e-12);
        assert_relative_eq!(j0(5.0), -0.17759677131433830, max_relative = 1e-12);
        assert_relative_eq!(j0(10.0), -0.2459357644513483, max_relative = 1e-11);
        assert_relative_eq!(j0(13.0), 0.20692610237706782, max_relative = 1e-9);
        assert_relative_eq!(j0(20.0), 0.16702466434058316, max_relative = 1e-9);
        assert_relative_eq!(j0(50.0), 0.05581232766925181, max_relative = 1e-9);
    }

    #[test]
    fn zeros() {
        for z in [
            2.404825557695773,
            5.520078110286311,
            8.653727912911013,
            11.791534439014281,
            14.930917708487787,
            18.071063967910924,
        ] {
            assert!(j0(z).abs() < 5e-10, "J0({z}) = {}", j0(z));
        }
    }

    #[test]
    fn even_function() {
        assert_eq!(j0(-3.7), j0(3.7));
        assert_eq!(j0(-15.0), j0(15.0));
    }

    #[test]
    fn branches_agree_at_the_crossover() {
        // scipy goldens a hair on either side of the series/asymptotic switch
        assert!((j0(11.999_999) - 0.04768908734969627).abs() < 1e-11);
        assert!((j0(12.000_001) - 0.0476895342439049).abs() < 1e-11);
    }
}
