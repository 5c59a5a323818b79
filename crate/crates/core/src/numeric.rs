//! Reductions that let a NaN through instead of dropping it, so a diverged
//! run can never pass a `value < tolerance` test.

pub(crate) fn nan_max(a: f64, b: f64) -> f64 {
    if a.is_nan() || b.is_nan() {
        f64::NAN
    } else {
        a.max(b)
    }
}

pub(crate) fn nan_min(a: f64, b: f64) -> f64 {
    if a.is_nan() || b.is_nan() {
        f64::NAN
    } else {
        a.min(b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nan_wins() {
        assert!([1.0, f64::NAN, 3.0].into_iter().fold(0.0, nan_max).is_nan());
        assert!([1.0, f64::NAN].into_iter().fold(f64::INFINITY, nan_min).is_nan());
        assert_eq!([1.0, 3.0, 2.0].into_iter().fold(0.0, nan_max), 3.0);
        assert_eq!([1.0, -3.0].into_iter().fold(f64::INFINITY, nan_min), -3.0);
    }
}
