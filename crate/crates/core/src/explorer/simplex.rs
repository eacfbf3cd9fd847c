//! Nelder–Mead direct search.

#[derive(Debug, Clone, Copy)]
pub struct SimplexOptions {
    pub max_iters: usize,
    /// Stop once the largest vertex distance from the best vertex is below this.
    pub diameter_tol: f64,
    pub initial_step: f64,
}

impl Default for SimplexOptions {
    fn default() -> Self {
        Self { max_iters: 2000, diameter_tol: 1e-10, initial_step: 0.5 }
    }
}

#[derive(Debug, Clone)]
pub struct SimplexResult {
    pub x: Vec<f64>,
    pub value: f64,
    pub iters: usize,
}

/// Minimizes `f` starting from `x0`.
pub fn minimize<F: Fn(&[f64]) -> f64>(f: F, x0: &[f64], opts: SimplexOptions) -> SimplexResult {
    let n = x0.len();
    if n == 0 {
        return SimplexResult { x: Vec::new(), value: f(x0), iters: 0 };
    }
    let (alpha, gamma, rho, sigma) = (1.0, 2.0, 0.5, 0.5);

    let mut verts: Vec<Vec<f64>> = Vec::with_capacity(n + 1);
    verts.push(x0.to_vec());
    for i in 0..n {
        let mut v = x0.to_vec();
        v[i] += opts.initial_step;
        verts.push(v);
    }
    let mut vals: Vec<f64> = verts.iter().map(|v| f(v)).collect();

    let along = |base: &[f64], toward: &[f64], t: f64| -> Vec<f64> {
        base.iter().zip(toward).map(|(b, w)| b + t * (w - b)).collect()
    };

    let mut iters = 0;
    while iters < opts.max_iters {
        iters += 1;
        let mut order: Vec<usize> = (0..=n).collect();
        order.sort_by(|&a, &b| vals[a].total_cmp(&vals[b]));
        verts = order.iter().map(|&i| verts[i].clone()).collect();
        vals = order.iter().map(|&i| vals[i]).collect();

        let diameter = verts[1..]
            .iter()
            .map(|v| v.iter().zip(&verts[0]).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max))
            .fold(0.0, f64::max);
        if diameter < opts.diameter_tol {
            break;
        }

        let mut centroid = vec![0.0; n];
        for v in &verts[..n] {
            for (c, x) in centroid.iter_mut().zip(v) {
                *c += x / n as f64;
            }
        }

        let reflected = along(&centroid, &verts[n], -alpha);
        let fr = f(&reflected);
        if fr < vals[0] {
            let expanded = along(&centroid, &verts[n], -gamma);
            let fe = f(&expanded);
            if fe < fr {
                verts[n] = expanded;
                vals[n] = fe;
            } else {
                verts[n] = reflected;
                vals[n] = fr;
            }
            continue;
        }
        if fr < vals[n - 1] {
            verts[n] = reflected;
            vals[n] = fr;
            continue;
        }
        let (contracted, fc) = if fr < vals[n] {
            let c = along(&centroid, &reflected, rho);
            let fc = f(&c);
            (c, fc)
        } else {
            let c = along(&centroid, &verts[n], rho);
            let fc = f(&c);
            (c, fc)
        };
        if fc < vals[n].min(fr) {
            verts[n] = contracted;
            vals[n] = fc;
            continue;
        }
        // shrink toward the best vertex
        for i in 1..=n {
            verts[i] = along(&verts[0], &verts[i].clone(), sigma);
            vals[i] = f(&verts[i]);
        }
    }

    let best = (0..=n).min_by(|&a, &b| vals[a].total_cmp(&vals[b])).unwrap_or(0);
    SimplexResult { x: verts[best].clone(), value: vals[best], iters }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_quadratic_minimum() {
        let f = |x: &[f64]| (x[0] - 1.0).powi(2) + 3.0 * (x[1] + 2.0).powi(2) + 0.5 * (x[2] - 0.25).powi(2);
        let r = minimize(f, &[0.0, 0.0, 0.0], SimplexOptions::default());
        assert!((r.x[0] - 1.0).abs() < 1e-8);
        assert!((r.x[1] + 2.0).abs() < 1e-8);
        assert!((r.x[2] - 0.25).abs() < 1e-8);
        assert!(r.value < 1e-15);
    }

    #[test]
    fn rosenbrock() {
        let f = |x: &[f64]| 100.0 * (x[1] - x[0] * x[0]).powi(2) + (1.0 - x[0]).powi(2);
        let opts = SimplexOptions { max_iters: 5000, ..Default::default() };
        let r = minimize(f, &[-1.2, 1.0], opts);
        assert!((r.x[0] - 1.0).abs() < 1e-6 && (r.x[1] - 1.0).abs() < 1e-6);
    }

    #[test]
    fn zero_dimensional() {
        let r = minimize(|_| 4.0, &[], SimplexOptions::default());
        assert_eq!((r.value, r.iters), (4.0, 0));
    }
}
