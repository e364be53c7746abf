//! Derivative-free scalar optimisation: golden-section search and a
//! log-spaced global scan followed by local refinement.

use alloc::vec::Vec;
use libm::{exp, fabs, log, sqrt};

use crate::Result;

const INV_PHI: f64 = 0.618_033_988_749_894_9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Extremum {
    pub x: f64,
    pub value: f64,
}

/// Minimise a unimodal `f` on `[lo, hi]` until the bracket is narrower than
/// `rel_width · max(|x|, tiny)`.
pub fn golden_section_min<F: FnMut(f64) -> f64>(
    mut f: F,
    lo: f64,
    hi: f64,
    rel_width: f64,
) -> Extremum {
    let res: Result<Extremum> = golden_section_try(|x| Ok(-f(x)), lo, hi, rel_width);
    let e = res.unwrap_or(Extremum {
        x: f64::NAN,
        value: f64::NAN,
    });
    Extremum {
        x: e.x,
        value: -e.value,
    }
}

/// Maximise a unimodal `f` on `[lo, hi]`.
pub fn golden_section_max<F: FnMut(f64) -> Result<f64>>(
    f: F,
    lo: f64,
    hi: f64,
    rel_width: f64,
) -> Result<Extremum> {
    golden_section_try(f, lo, hi, rel_width)
}

fn golden_section_try<F: FnMut(f64) -> Result<f64>>(
    mut f: F,
    mut lo: f64,
    mut hi: f64,
    rel_width: f64,
) -> Result<Extremum> {
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = f(x1)?;
    let mut f2 = f(x2)?;
    for _ in 0..500 {
        let scale = fabs(lo).max(fabs(hi)).max(f64::MIN_POSITIVE);
        if hi - lo <= rel_width * scale {
            break;
        }
        // ties move towards the lower end
        if f1 >= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1)?;
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2)?;
        }
    }
    Ok(if f1 >= f2 {
        Extremum { x: x1, value: f1 }
    } else {
        Extremum { x: x2, value: f2 }
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanSettings {
    pub lo: f64,
    pub hi: f64,
    pub points: usize,
    /// Final relative bracket width of the golden-section refinement.
    pub rel_width: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanMaximum {
    pub x: f64,
    pub value: f64,
    /// The maximum sits at an edge of the scanned interval.
    pub at_boundary: bool,
    /// Grid abscissae and objective values of the coarse scan.
    pub grid: Vec<(f64, f64)>,
}

/// Global maximum of `f` over `[lo, hi]`: evaluate on a log-spaced grid,
/// refine every grid-local maximum within 1% of the best by golden-section
/// search in log x, keep the best (ties within 1e-12 go to the smaller x).
pub fn maximize_log_scan<F: FnMut(f64) -> Result<f64>>(
    mut f: F,
    settings: &ScanSettings,
) -> Result<ScanMaximum> {
    let n = settings.points.max(3);
    let (llo, lhi) = (log(settings.lo), log(settings.hi));
    let step = (lhi - llo) / (n - 1) as f64;
    let xs: Vec<f64> = (0..n)
        .map(|k| {
            if k == n - 1 {
                settings.hi
            } else {
                exp(llo + step * k as f64)
            }
        })
        .collect();
    let mut grid = Vec::with_capacity(n);
    for &x in &xs {
        grid.push((x, f(x)?));
    }

    let best_grid = grid.iter().map(|p| p.1).fold(f64::NEG_INFINITY, f64::max);
    let mut candidates: Vec<usize> = (0..n)
        .filter(|&i| {
            let v = grid[i].1;
            let left = if i > 0 { grid[i - 1].1 } else { f64::NEG_INFINITY };
            let right = if i + 1 < n { grid[i + 1].1 } else { f64::NEG_INFINITY };
            v >= left && v >= right && v >= best_grid - 0.01 * fabs(best_grid)
        })
        .collect();
    candidates.sort_by(|&a, &b| grid[b].1.total_cmp(&grid[a].1));
    candidates.truncate(4);
    candidates.sort_unstable();

    let mut best: Option<(Extremum, usize)> = None;
    for &i in &candidates {
        let a = if i > 0 { i - 1 } else { 0 };
        let b = if i + 1 < n { i + 1 } else { n - 1 };
        let ext = golden_section_max(
            |u| f(exp(u)),
            log(xs[a]),
            log(xs[b]),
            settings.rel_width / fabs(log(xs[b])).max(1.0),
        )?;
        let mut ext = Extremum {
            x: exp(ext.x),
            value: ext.value,
        };
        if grid[i].1 > ext.value {
            ext = Extremum {
                x: grid[i].0,
                value: grid[i].1,
            };
        }
        let replace = match &best {
            None => true,
            Some((cur, _)) => ext.value > cur.value + 1e-12 * fabs(cur.value),
        };
        if replace {
            best = Some((ext, i));
        }
    }
    let (ext, idx) = best.unwrap_or((
        Extremum {
            x: grid[0].0,
            value: grid[0].1,
        },
        0,
    ));
    let edge_tol = sqrt(settings.rel_width).max(1e-6);
    let at_boundary = (idx == 0 && fabs(log(ext.x / settings.lo)) < edge_tol)
        || (idx == n - 1 && fabs(log(ext.x / settings.hi)) < edge_tol);
    Ok(ScanMaximum {
        x: ext.x,
        value: ext.value,
        at_boundary,
        grid,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn golden_finds_parabola_vertex() {
        let m = golden_section_min(|x| (x - 0.3) * (x - 0.3) + 2.0, -1.0, 1.0, 1e-12);
        assert!(fabs(m.x - 0.3) < 1e-7);
        assert!(fabs(m.value - 2.0) < 1e-12);
    }

    #[test]
    fn scan_picks_global_of_two_bumps() {
        let f = |x: f64| -> Result<f64> {
            let l = log(x);
            Ok(exp(-(l - 1.0) * (l - 1.0)) + 1.5 * exp(-(l + 3.0) * (l + 3.0)))
        };
        let s = ScanSettings {
            lo: 1e-4,
            hi: 1e3,
            points: 200,
            rel_width: 1e-10,
        };
        let m = maximize_log_scan(f, &s).unwrap();
        assert!(fabs(log(m.x) + 3.0) < 1e-4);
        assert!(!m.at_boundary);
        for &(_, v) in &m.grid {
            assert!(m.value >= v);
        }
    }

    #[test]
    fn scan_flags_boundary_maximum() {
        let s = ScanSettings {
            lo: 1e-2,
            hi: 1e2,
            points: 50,
            rel_width: 1e-10,
        };
        let m = maximize_log_scan(|x| Ok(1.0 - 1.0 / (1.0 + x)), &s).unwrap();
        assert!(m.at_boundary);
        assert_eq!(m.x, 1e2);
    }
}
