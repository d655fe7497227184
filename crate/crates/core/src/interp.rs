//! Periodic interpolation helpers for the semi-Lagrangian updates.

/// Cubic Lagrange interpolation of periodic samples at a fractional index.
///
/// `u` is in index units; it may lie outside [0, n) and is wrapped. The
/// four-point Lagrange weights sum to one identically, so interpolating a
/// uniform field returns the constant to round-off.
pub fn cubic_periodic(values: &[f64], u: f64) -> f64 {
    let n = values.len();
    debug_assert!(n >= 4);
    let nf = n as f64;
    let wrapped = u.rem_euclid(nf);
    let i = wrapped.floor() as usize % n;
    let s = wrapped - wrapped.floor();

    let im1 = (i + n - 1) % n;
    let ip1 = (i + 1) % n;
    let ip2 = (i + 2) % n;

    let w_m1 = -s * (s - 1.0) * (s - 2.0) / 6.0;
    let w_0 = (s + 1.0) * (s - 1.0) * (s - 2.0) / 2.0;
    let w_p1 = -(s + 1.0) * s * (s - 2.0) / 2.0;
    let w_p2 = (s + 1.0) * s * (s - 1.0) / 6.0;

    w_m1 * values[im1] + w_0 * values[i] + w_p1 * values[ip1] + w_p2 * values[ip2]
}

/// Linear interpolation of periodic samples at a fractional index.
pub fn linear_periodic(values: &[f64], u: f64) -> f64 {
    let n = values.len();
    let nf = n as f64;
    let wrapped = u.rem_euclid(nf);
    let i = wrapped.floor() as usize % n;
    let s = wrapped - wrapped.floor();
    let ip1 = (i + 1) % n;
    (1.0 - s) * values[i] + s * values[ip1]
}

/// Replace entries flagged bad with the value of the nearest good entry,
/// distance measured around the periodic ring. Used to continue fields
/// through density-floored tail nodes.
pub fn nearest_good_fill(values: &mut [f64], good: &[bool]) {
    let n = values.len();
    debug_assert_eq!(good.len(), n);
    if good.iter().all(|&g| g) {
        return;
    }
    if !good.iter().any(|&g| g) {
        // nothing to anchor on; leave as-is
        return;
    }

    // nearest good index scanning left (two laps to cover the wrap)
    let mut left_src = vec![usize::MAX; n];
    let mut left_dist = vec![usize::MAX; n];
    let mut last: Option<(usize, usize)> = None;
    for lap in 0..2 {
        for j in 0..n {
            if good[j] {
                last = Some((j, 0));
            } else if let Some((src, d)) = last {
                last = Some((src, d + 1));
            }
            if lap == 1 {
                if let Some((src, d)) = last {
                    left_src[j] = src;
                    left_dist[j] = d;
                }
            }
        }
    }

    // nearest good index scanning right
    let mut right_src = vec![usize::MAX; n];
    let mut right_dist = vec![usize::MAX; n];
    last = None;
    for lap in 0..2 {
        for jj in (0..n).rev() {
            if good[jj] {
                last = Some((jj, 0));
            } else if let Some((src, d)) = last {
                last = Some((src, d + 1));
            }
            if lap == 1 {
                if let Some((src, d)) = last {
                    right_src[jj] = src;
                    right_dist[jj] = d;
                }
            }
        }
    }

    for j in 0..n {
        if !good[j] {
            let src = if left_dist[j] <= right_dist[j] {
                left_src[j]
            } else {
                right_src[j]
            };
            values[j] = values[src];
        }
    }
}
