//! Derivative-free Nelder–Mead minimisation.

#[derive(Debug, Clone, Copy)]
pub struct SimplexOptions {
    pub max_iter: usize,
    /// Stop once `max f − min f` over the simplex falls below this.
    pub f_tol: f64,
}

impl Default for SimplexOptions {
    fn default() -> Self {
        Self {
            max_iter: 2000,
            f_tol: 1e-10,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SimplexResult {
    pub x: Vec<f64>,
    pub f: f64,
    pub iterations: usize,
    pub converged: bool,
}

/// Minimises `f` from `start`, with initial vertices offset by `steps[k]`
/// along coordinate `k`. Non-finite objective values count as `+∞`.
pub fn minimize<F>(mut f: F, start: &[f64], steps: &[f64], options: SimplexOptions) -> SimplexResult
where
    F: FnMut(&[f64]) -> f64,
{
    let n = start.len();
    let mut eval = |x: &[f64]| {
        let v = f(x);
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    };
    if n == 0 {
        let v = eval(start);
        return SimplexResult {
            x: Vec::new(),
            f: v,
            iterations: 0,
            converged: true,
        };
    }

    let mut points: Vec<Vec<f64>> = Vec::with_capacity(n + 1);
    points.push(start.to_vec());
    for k in 0..n {
        let mut p = start.to_vec();
        p[k] += steps[k];
        points.push(p);
    }
    let mut values: Vec<f64> = points.iter().map(|p| eval(p)).collect();

    let (alpha, gamma, rho, sigma) = (1.0, 2.0, 0.5, 0.5);
    let mut iterations = 0;
    let mut converged = false;
    let mut order: Vec<usize> = (0..=n).collect();

    loop {
        order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
        let best = order[0];
        let worst = order[n];
        let second_worst = order[n - 1];
        let spread = values[worst] - values[best];
        if spread.is_finite() && spread < options.f_tol {
            converged = true;
            break;
        }
        if iterations >= options.max_iter {
            break;
        }
        iterations += 1;

        let mut centroid = vec![0.0; n];
        for &i in &order[..n] {
            for (c, x) in centroid.iter_mut().zip(&points[i]) {
                *c += x / n as f64;
            }
        }
        let along = |t: f64| -> Vec<f64> {
            centroid
                .iter()
                .zip(&points[worst])
                .map(|(c, w)| c + t * (w - c))
                .collect()
        };

        let reflected = along(-alpha);
        let f_r = eval(&reflected);
        if f_r < values[best] {
            let expanded = along(-alpha * gamma);
            let f_e = eval(&expanded);
            if f_e < f_r {
                points[worst] = expanded;
                values[worst] = f_e;
            } else {
                points[worst] = reflected;
                values[worst] = f_r;
            }
            continue;
        }
        if f_r < values[second_worst] {
            points[worst] = reflected;
            values[worst] = f_r;
            continue;
        }

        let (contracted, f_c) = if f_r < values[worst] {
            let c = along(-alpha * rho);
            let v = eval(&c);
            (c, v)
        } else {
            let c = along(rho);
            let v = eval(&c);
            (c, v)
        };
        if f_c < values[worst].min(f_r) {
            points[worst] = contracted;
            values[worst] = f_c;
            continue;
        }

        let anchor = points[best].clone();
        for &i in &order[1..] {
            let shrunk: Vec<f64> = anchor
                .iter()
                .zip(&points[i])
                .map(|(a, x)| a + sigma * (x - a))
                .collect();
            values[i] = eval(&shrunk);
            points[i] = shrunk;
        }
    }

    let best = (0..=n)
        .min_by(|&a, &b| values[a].total_cmp(&values[b]))
        .unwrap_or(0);
    SimplexResult {
        x: points[best].clone(),
        f: values[best],
        iterations,
        converged,
    }
}
