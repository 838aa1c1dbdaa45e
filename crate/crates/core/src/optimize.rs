//! One-dimensional search used by every supremum/infimum in the crate.

/// `(sqrt(5) - 1) / 2`
const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Golden-section search for a maximum of `f` on `[lo, hi]`.
///
/// Stops once the bracket is narrower than `tol` or after `max_iter`
/// shrinks. Returns the best point seen, including the two endpoints.
pub fn golden_max<F>(mut f: F, lo: f64, hi: f64, tol: f64, max_iter: usize) -> (f64, f64)
where
    F: FnMut(f64) -> f64,
{
    let (mut a, mut b) = (lo.min(hi), lo.max(hi));
    let mut best = (a, f(a));
    let fb = f(b);
    if fb > best.1 {
        best = (b, fb);
    }

    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    for _ in 0..max_iter {
        if (b - a).abs() <= tol {
            break;
        }
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    for (x, v) in [(c, fc), (d, fd)] {
        if v > best.1 {
            best = (x, v);
        }
    }
    best
}

/// Golden-section search for a minimum of `f` on `[lo, hi]`.
pub fn golden_min<F>(mut f: F, lo: f64, hi: f64, tol: f64, max_iter: usize) -> (f64, f64)
where
    F: FnMut(f64) -> f64,
{
    let (x, v) = golden_max(|t| -f(t), lo, hi, tol, max_iter);
    (x, -v)
}

/// Maximum of a possibly multimodal `f` on `[lo, hi]`: a uniform pre-scan of
/// `scan` intervals (both endpoints included), then golden-section refinement
/// inside the bracket of every local maximum of the scan.
pub fn scan_max<F>(mut f: F, lo: f64, hi: f64, scan: usize, tol: f64) -> (f64, f64)
where
    F: FnMut(f64) -> f64,
{
    let scan = scan.max(1);
    if hi <= lo {
        return (lo, f(lo));
    }
    let step = (hi - lo) / scan as f64;
    let grid: Vec<(f64, f64)> = (0..=scan)
        .map(|i| {
            let t = if i == scan { hi } else { lo + step * i as f64 };
            (t, f(t))
        })
        .collect();

    let mut best = grid[0];
    for &g in &grid {
        if g.1 > best.1 {
            best = g;
        }
    }
    for i in 0..=scan {
        let left = if i == 0 { f64::NEG_INFINITY } else { grid[i - 1].1 };
        let right = if i == scan { f64::NEG_INFINITY } else { grid[i + 1].1 };
        if grid[i].1 >= left && grid[i].1 >= right {
            let a = grid[i.saturating_sub(1)].0;
            let b = grid[(i + 1).min(scan)].0;
            let cand = golden_max(&mut f, a, b, tol, 200);
            if cand.1 > best.1 {
                best = cand;
            }
        }
    }
    best
}
