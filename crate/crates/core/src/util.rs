//! Small shared helpers: multi-index iteration and pairwise distances.

/// Squared Euclidean distance between two points of equal dimension.
pub(crate) fn dist_sq(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Minimum pairwise Euclidean distance by the O(n²) scan.
/// Returns `f64::INFINITY` for fewer than two points.
pub(crate) fn pairwise_min_distance(points: &[Vec<f64>]) -> f64 {
    let n = points.len();
    if n < 2 {
        return f64::INFINITY;
    }
    let mut best = f64::INFINITY;
    for i in 0..n {
        for j in (i + 1)..n {
            let d = dist_sq(&points[i], &points[j]);
            if d < best {
                best = d;
            }
        }
    }
    best.sqrt()
}

/// Visit every multi-index in the box `[0, dims[0]) × ... × [0, dims.last())`
/// in row-major order.
pub(crate) fn for_each_multi_index(dims: &[usize], mut f: impl FnMut(&[usize])) {
    let d = dims.len();
    if dims.contains(&0) {
        return;
    }
    let mut idx = vec![0usize; d];
    loop {
        f(&idx);
        let mut axis = d;
        loop {
            if axis == 0 {
                return;
            }
            axis -= 1;
            idx[axis] += 1;
            if idx[axis] < dims[axis] {
                break;
            }
            idx[axis] = 0;
        }
    }
}

/// Row-major flat offset of `idx` in a box with extents `dims`.
pub(crate) fn flat_index(dims: &[usize], idx: &[usize]) -> usize {
    let mut flat = 0usize;
    for (n, i) in dims.iter().zip(idx) {
        flat = flat * n + i;
    }
    flat
}

/// Map an angle to the fundamental window (−π, π].
pub(crate) fn wrap_angle(x: f64) -> f64 {
    let two_pi = 2.0 * std::f64::consts::PI;
    let mut y = x % two_pi;
    if y <= -std::f64::consts::PI {
        y += two_pi;
    } else if y > std::f64::consts::PI {
        y -= two_pi;
    }
    y
}
