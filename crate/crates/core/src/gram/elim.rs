//! Elimination helpers for determinants that are quadratic in each unknown.

use nalgebra::{Complex, DMatrix, Schur};

/// Univariate polynomial, coefficients in ascending degree.
pub(crate) type Poly = Vec<f64>;

pub(crate) fn mul(a: &[f64], b: &[f64]) -> Poly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0.0; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

pub(crate) fn sub(a: &[f64], b: &[f64]) -> Poly {
    let n = a.len().max(b.len());
    (0..n)
        .map(|i| a.get(i).copied().unwrap_or(0.0) - b.get(i).copied().unwrap_or(0.0))
        .collect()
}

pub(crate) fn eval(p: &[f64], x: f64) -> f64 {
    p.iter().rev().fold(0.0, |acc, c| acc * x + c)
}

fn derivative(p: &[f64]) -> Poly {
    p.iter().enumerate().skip(1).map(|(i, c)| c * i as f64).collect()
}

/// Coefficients `c[i][j]` of `u^i w^j` for a function quadratic in each of
/// `u` and `w`, from its values on `{-1, 0, 1}²`.
pub(crate) fn biquadratic(mut f: impl FnMut(f64, f64) -> f64) -> [[f64; 3]; 3] {
    let nodes = [-1.0, 0.0, 1.0];
    let mut v = [[0.0; 3]; 3];
    for (a, &u) in nodes.iter().enumerate() {
        for (b, &w) in nodes.iter().enumerate() {
            v[a][b] = f(u, w);
        }
    }
    // values at (-1, 0, 1) to coefficients (1, t, t²)
    let fit = |m, z, p| [z, (p - m) / 2.0, (p + m) / 2.0 - z];
    let mut rows = [[0.0; 3]; 3];
    for a in 0..3 {
        rows[a] = fit(v[a][0], v[a][1], v[a][2]);
    }
    let mut c = [[0.0; 3]; 3];
    for j in 0..3 {
        let col = fit(rows[0][j], rows[1][j], rows[2][j]);
        for i in 0..3 {
            c[i][j] = col[i];
        }
    }
    c
}

/// Resultant with respect to `w` of two biquadratics, as a polynomial in `u`
/// of degree at most 8.
pub(crate) fn resultant_w(p: &[[f64; 3]; 3], q: &[[f64; 3]; 3]) -> Poly {
    // coefficient of w^j as a polynomial in u
    let a = |j: usize| -> Poly { (0..3).map(|i| p[i][j]).collect() };
    let b = |j: usize| -> Poly { (0..3).map(|i| q[i][j]).collect() };
    let (a0, a1, a2, b0, b1, b2) = (a(0), a(1), a(2), b(0), b(1), b(2));
    let x = sub(&mul(&a2, &b0), &mul(&a0, &b2));
    let y = sub(&mul(&a2, &b1), &mul(&a1, &b2));
    let z = sub(&mul(&a1, &b0), &mul(&a0, &b1));
    sub(&mul(&x, &x), &mul(&y, &z))
}

/// Largest absolute coefficient.
pub(crate) fn magnitude(p: &[f64]) -> f64 {
    p.iter().fold(0.0, |m, c| m.max(c.abs()))
}

/// Real roots of a polynomial, including near-real ones whose imaginary
/// part is below `1e-6` relative to their size (multiple roots split into
/// such pairs in floating point). Roots are Newton-polished and sorted.
/// `None` if the polynomial vanishes identically relative to `scale`.
pub(crate) fn real_roots(p: &[f64], scale: f64) -> Option<Vec<f64>> {
    let tiny = 1e-13 * scale;
    let mut p = p.to_vec();
    while p.last().is_some_and(|c| c.abs() <= tiny) {
        p.pop();
    }
    if p.is_empty() {
        return None;
    }
    let n = p.len() - 1;
    if n == 0 {
        return Some(Vec::new());
    }
    let lead = p[n];
    if p.iter().any(|c| !c.is_finite()) {
        return None;
    }
    let mut comp = DMatrix::<f64>::zeros(n, n);
    for i in 1..n {
        comp[(i, i - 1)] = 1.0;
    }
    for i in 0..n {
        comp[(i, n - 1)] = -p[i] / lead;
    }
    let d = derivative(&p);
    let eig: Vec<Complex<f64>> = match Schur::try_new(comp, f64::EPSILON, 10_000) {
        Some(schur) => schur.complex_eigenvalues().iter().copied().collect(),
        None => durand_kerner(&p),
    };
    let mut out: Vec<f64> = eig
        .iter()
        .filter(|z| z.im.abs() <= 1e-6 * z.re.abs().max(1.0))
        .map(|z| {
            let mut x = z.re;
            for _ in 0..4 {
                let dv = eval(&d, x);
                if dv == 0.0 {
                    break;
                }
                let step = eval(&p, x) / dv;
                if !step.is_finite() || step.abs() > 1e-3 * x.abs().max(1.0) {
                    break;
                }
                x -= step;
            }
            x
        })
        .collect();
    out.sort_by(f64::total_cmp);
    out.dedup_by(|a, b| (*a - *b).abs() < 1e-12 * a.abs().max(1.0));
    Some(out)
}

/// All complex roots by simultaneous Weierstrass iteration.
fn durand_kerner(p: &[f64]) -> Vec<Complex<f64>> {
    let n = p.len() - 1;
    let lead = p[n];
    let monic: Vec<f64> = p.iter().map(|c| c / lead).collect();
    let radius = 1.0 + monic[..n].iter().fold(0.0f64, |m, c| m.max(c.abs()));
    let seed = Complex::new(0.4, 0.9);
    let mut z: Vec<Complex<f64>> = (0..n).map(|k| seed.powu(k as u32) * radius).collect();
    let eval = |x: Complex<f64>| monic.iter().rev().fold(Complex::new(0.0, 0.0), |acc, &c| acc * x + c);
    for _ in 0..500 {
        let mut delta = 0.0f64;
        for i in 0..n {
            let den = (0..n)
                .filter(|&j| j != i)
                .fold(Complex::new(1.0, 0.0), |acc, j| acc * (z[i] - z[j]));
            if den.norm() == 0.0 {
                continue;
            }
            let step = eval(z[i]) / den;
            z[i] -= step;
            delta = delta.max(step.norm() / z[i].norm().max(1.0));
        }
        if delta < 1e-15 {
            break;
        }
    }
    z
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn biquadratic_fit_is_exact() {
        let f = |u: f64, w: f64| 1.0 + 2.0 * u - 3.0 * w * w + 0.5 * u * u * w;
        let c = biquadratic(f);
        assert!((c[0][0] - 1.0).abs() < 1e-14);
        assert!((c[1][0] - 2.0).abs() < 1e-14);
        assert!((c[0][2] + 3.0).abs() < 1e-14);
        assert!((c[2][1] - 0.5).abs() < 1e-14);
    }

    #[test]
    fn resultant_detects_common_roots() {
        // (w - u)(w + 2) and (w - u)(w - 3): common root w = u for all u
        let p = biquadratic(|u, w| (w - u) * (w + 2.0));
        let q = biquadratic(|u, w| (w - u) * (w - 3.0));
        let r = resultant_w(&p, &q);
        assert!(magnitude(&r) < 1e-12);
        // w² - u and w - u + 2: u = (u - 2)², roots 1 and 4
        let p = biquadratic(|u, w| w * w - u);
        let q = biquadratic(|u, w| w - u + 2.0);
        let roots = real_roots(&resultant_w(&p, &q), 1.0).unwrap();
        assert_eq!(roots.len(), 2);
        assert!((roots[0] - 1.0).abs() < 1e-10 && (roots[1] - 4.0).abs() < 1e-10);
    }

    #[test]
    fn even_polynomial_roots() {
        let p = [
            -1.5766246971697343e-9, 0.0, 5.360523970377097e-9, 0.0, -3.0744181594809792e-9, 0.0,
            -1.8919496366036865e-9, 0.0, 1.2612997577357903e-9,
        ];
        let r = real_roots(&p, 1e-9).unwrap();
        assert!(r.iter().all(|&x| eval(&p, x).abs() < 1e-15));
        let dk = durand_kerner(&p);
        assert_eq!(dk.len(), 8);
        assert!(dk.iter().filter(|z| z.im.abs() < 1e-9).count() == r.len());
    }

    #[test]
    fn double_roots_are_kept() {
        let p = mul(&mul(&[-2.0, 1.0], &[-2.0, 1.0]), &[1.0, 0.0, 1.0]);
        let r = real_roots(&p, 1.0).unwrap();
        assert!(r.iter().any(|x| (x - 2.0).abs() < 1e-6));
    }
}
