/// Arithmetic-geometric mean.
pub fn agm(mut a: f64, mut b: f64) -> f64 {
    for _ in 0..64 {
        if (a - b).abs() <= 1e-16 * a.abs() {
            break;
        }
        let an = 0.5 * (a + b);
        b = (a * b).sqrt();
        a = an;
    }
    a
}

/// Complete elliptic integral `K(k)` given the complementary modulus
/// `kc = √(1 - k²)`.
pub fn ellipk_complement(kc: f64) -> f64 {
    std::f64::consts::PI / (2.0 * agm(1.0, kc))
}

/// Jacobi `dn(u, k)` for real `u`, with `kc = √(1 - k²)` passed separately
/// to avoid cancellation near `k = 1`. Arguments in `(K/2, K]` are mapped
/// through `dn(K - u) = kc / dn(u)` so small values keep relative accuracy.
pub fn jacobi_dn(u: f64, k: f64, kc: f64) -> f64 {
    if k == 0.0 {
        return 1.0;
    }
    let kk = ellipk_complement(kc);
    let u = u.abs() % (2.0 * kk);
    let u = if u > kk { 2.0 * kk - u } else { u };
    if u > 0.5 * kk {
        kc / dn_landen(kk - u, k, kc)
    } else {
        dn_landen(u, k, kc)
    }
}

fn dn_landen(u: f64, k: f64, kc: f64) -> f64 {
    let mut a = vec![1.0];
    let mut c = vec![k];
    let mut b = kc;
    while c.last().unwrap().abs() > 1e-16 && a.len() < 64 {
        let an = *a.last().unwrap();
        a.push(0.5 * (an + b));
        c.push(0.5 * (an - b));
        b = (an * b).sqrt();
    }
    let n = a.len() - 1;
    let mut phi = (1u64 << n) as f64 * a[n] * u;
    let mut prev = phi;
    for i in (1..=n).rev() {
        prev = phi;
        phi = 0.5 * (phi + (c[i] / a[i] * phi.sin()).asin());
    }
    if n == 0 {
        return 1.0;
    }
    phi.cos() / (prev - phi).cos()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn agm_and_k() {
        assert!((agm(1.0, 1.0) - 1.0).abs() < 1e-15);
        assert!((ellipk_complement(1.0) - std::f64::consts::FRAC_PI_2).abs() < 1e-15);
        let k = 1.0 / 2f64.sqrt();
        assert!((ellipk_complement(k) - 1.854_074_677_301_372).abs() < 1e-14);
    }

    #[test]
    fn dn_special_values() {
        for &k in &[0.3f64, 0.9, 0.999_999] {
            let kc = (1.0 - k * k).sqrt();
            let kk = ellipk_complement(kc);
            assert!((jacobi_dn(0.0, k, kc) - 1.0).abs() < 1e-14);
            assert!((jacobi_dn(kk, k, kc) - kc).abs() < 1e-12);
            assert!((jacobi_dn(0.5 * kk, k, kc) - kc.sqrt()).abs() < 1e-12);
        }
        assert!((jacobi_dn(0.7, 0.0, 1.0) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn dn_matches_series_for_small_modulus() {
        let (k, u) = (0.1f64, 0.8f64);
        let kc = (1.0 - k * k).sqrt();
        let expect = 1.0 - 0.5 * k * k * u.sin().powi(2);
        assert!((jacobi_dn(u, k, kc) - expect).abs() < 1e-4);
    }
}
