/// Outcome of comparing an analytic gradient against central differences.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GradCheckReport {
    pub max_rel_error: f64,
    pub worst_index: usize,
    pub analytic: f64,
    pub numeric: f64,
}

impl GradCheckReport {
    pub fn passes(&self, tolerance: f64) -> bool {
        self.max_rel_error < tolerance
    }
}

/// Central-difference check of `analytic` against `f` at `input`.
///
/// The per-coordinate error is `|a - n| / max(|a|, |n|, 1e-8)`; the report
/// carries the worst coordinate.
///
/// # Panics
/// If `h` is outside `[1e-7, 1e-3]` or the slices differ in length.
pub fn grad_check(
    mut f: impl FnMut(&[f64]) -> f64,
    input: &[f64],
    analytic: &[f64],
    h: f64,
) -> GradCheckReport {
    assert!((1e-7..=1e-3).contains(&h), "step {h} outside [1e-7, 1e-3]");
    assert_eq!(input.len(), analytic.len(), "gradient length mismatch");
    let mut probe = input.to_vec();
    let mut report = GradCheckReport {
        max_rel_error: 0.0,
        worst_index: 0,
        analytic: 0.0,
        numeric: 0.0,
    };
    for i in 0..probe.len() {
        let orig = probe[i];
        probe[i] = orig + h;
        let up = f(&probe);
        probe[i] = orig - h;
        let down = f(&probe);
        probe[i] = orig;
        let numeric = (up - down) / (2.0 * h);
        let a = analytic[i];
        let denom = a.abs().max(numeric.abs()).max(1e-8);
        let err = (a - numeric).abs() / denom;
        if err > report.max_rel_error {
            report = GradCheckReport {
                max_rel_error: err,
                worst_index: i,
                analytic: a,
                numeric,
            };
        }
    }
    report
}
