/// Smooth decreasing profile on `[0, 1]` with `p(0) = 1`, `p(1) = 0` and
/// vanishing first and second derivatives at both ends: `1 − S(s)` with the
/// quintic smoothstep `S(s) = 6s⁵ − 15s⁴ + 10s³`. Extended by `1` for `s < 0`
/// and by `0` for `s > 1`, so the extension is `C²`.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct CutoffProfile;

impl CutoffProfile {
    pub fn value(&self, s: f64) -> f64 {
        if s <= 0.0 {
            1.0
        } else if s >= 1.0 {
            0.0
        } else {
            1.0 - s * s * s * (10.0 + s * (-15.0 + 6.0 * s))
        }
    }

    pub fn d1(&self, s: f64) -> f64 {
        if s <= 0.0 || s >= 1.0 {
            0.0
        } else {
            -30.0 * s * s * (1.0 - s) * (1.0 - s)
        }
    }

    pub fn d2(&self, s: f64) -> f64 {
        if s <= 0.0 || s >= 1.0 {
            0.0
        } else {
            -60.0 * s * (1.0 - s) * (1.0 - 2.0 * s)
        }
    }

    /// `(p, p′, p″)` at `s`.
    pub fn eval(&self, s: f64) -> (f64, f64, f64) {
        (self.value(s), self.d1(s), self.d2(s))
    }
}
