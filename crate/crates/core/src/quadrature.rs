//! Gauss–Legendre rules.

/// Nodes and weights of the `n`-point Gauss–Legendre rule on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n > 0, "quadrature needs at least one node");
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        // Tricomi initial guess, then Newton on P_n.
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (p, d) = legendre(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre(n, x);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

/// Gauss–Legendre rule mapped to `[a, b]`.
pub fn gauss_legendre_on(n: usize, a: f64, b: f64) -> (Vec<f64>, Vec<f64>) {
    let (x, w) = gauss_legendre(n);
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    (
        x.iter().map(|t| mid + half * t).collect(),
        w.iter().map(|v| v * half).collect(),
    )
}

fn legendre(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let n = n as f64;
    let dp = n * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

/// Normalised quadrature on the Euclidean ball of radius `radius` centred at
/// `center` (weights sum to one). Polar rule in two dimensions, masked
/// tensor rule otherwise.
pub fn ball_average_rule(
    center: &[f64],
    radius: f64,
    radial: usize,
    angular: usize,
) -> (Vec<Vec<f64>>, Vec<f64>) {
    let n = center.len();
    let mut pts = Vec::new();
    let mut wts = Vec::new();
    match n {
        1 => {
            let (x, w) = gauss_legendre_on(radial.max(1) * 2, -radius, radius);
            for (xi, wi) in x.into_iter().zip(w) {
                pts.push(vec![center[0] + xi]);
                wts.push(wi);
            }
        }
        2 => {
            let (r, wr) = gauss_legendre_on(radial.max(1), 0.0, radius);
            let na = angular.max(1);
            for (ri, wri) in r.iter().zip(&wr) {
                for j in 0..na {
                    let th = 2.0 * std::f64::consts::PI * (j as f64 + 0.5) / na as f64;
                    pts.push(vec![center[0] + ri * th.cos(), center[1] + ri * th.sin()]);
                    wts.push(wri * ri);
                }
            }
        }
        _ => {
            let (x, w) = gauss_legendre_on(radial.max(2), -radius, radius);
            let m = x.len();
            let total = m.pow(n as u32);
            for flat in 0..total {
                let mut rem = flat;
                let mut p = vec![0.0; n];
                let mut wt = 1.0;
                for d in 0..n {
                    let i = rem % m;
                    rem /= m;
                    p[d] = x[i];
                    wt *= w[i];
                }
                if p.iter().map(|v| v * v).sum::<f64>() < radius * radius {
                    pts.push(p.iter().zip(center).map(|(a, c)| a + c).collect());
                    wts.push(wt);
                }
            }
        }
    }
    let s: f64 = wts.iter().sum();
    for w in &mut wts {
        *w /= s;
    }
    (pts, wts)
}
