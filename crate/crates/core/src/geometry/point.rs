//! Points of the open unit disk and the pairwise quantities built from them.
//!
//! A point stores its Cartesian coordinates together with its modulus and
//! `ln(1 - |z|)`. The logarithmic defect is authoritative near the boundary,
//! so sequences whose points approach the circle faster than `f64` can
//! resolve `1 - |z|` (thin sequences do exactly this) still produce finite,
//! accurate pseudohyperbolic distances and kernel values.

use std::f64::consts::LN_2;

use num_complex::Complex64;

/// Modulus above which `1 - r` is exact in floating point and the defect is
/// used for radial differences.
const BOUNDARY_REGIME: f64 = 0.5;

/// A point `z` with `|z| < 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiskPoint {
    re: f64,
    im: f64,
    modulus: f64,
    log_defect: f64,
    arg: f64,
}

impl DiskPoint {
    /// Builds a point from Cartesian coordinates; `None` unless `|z| < 1`.
    pub fn new(re: f64, im: f64) -> Option<Self> {
        if !re.is_finite() || !im.is_finite() {
            return None;
        }
        let modulus = re.hypot(im);
        if modulus >= 1.0 {
            return None;
        }
        Some(Self {
            re,
            im,
            modulus,
            log_defect: (-modulus).ln_1p(),
            arg: im.atan2(re),
        })
    }

    /// Builds the point `(1 - exp(log_defect)) * exp(i * arg)`.
    ///
    /// `log_defect` must be finite and `<= 0`; zero gives the origin.
    pub fn from_log_defect(log_defect: f64, arg: f64) -> Option<Self> {
        if !log_defect.is_finite() || log_defect > 0.0 || !arg.is_finite() {
            return None;
        }
        let modulus = -log_defect.exp_m1();
        Some(Self {
            re: modulus * arg.cos(),
            im: modulus * arg.sin(),
            modulus,
            log_defect,
            arg,
        })
    }

    /// Builds a point from stored Cartesian coordinates plus the polar data
    /// that pins it down beyond what `re`/`im` can resolve.
    pub fn from_parts(re: f64, im: f64, log_defect: f64, arg: f64) -> Option<Self> {
        let mut p = Self::from_log_defect(log_defect, arg)?;
        p.re = re;
        p.im = im;
        Some(p)
    }

    pub fn origin() -> Self {
        Self {
            re: 0.0,
            im: 0.0,
            modulus: 0.0,
            log_defect: 0.0,
            arg: 0.0,
        }
    }

    pub fn re(&self) -> f64 {
        self.re
    }

    pub fn im(&self) -> f64 {
        self.im
    }

    pub fn to_complex(&self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }

    /// `|z|`, rounded; may equal 1.0 for points extremely close to the circle.
    pub fn modulus(&self) -> f64 {
        self.modulus
    }

    /// `ln(1 - |z|)`.
    pub fn log_defect(&self) -> f64 {
        self.log_defect
    }

    /// `1 - |z|` (may underflow to zero; see [`DiskPoint::log_defect`]).
    pub fn defect(&self) -> f64 {
        self.log_defect.exp()
    }

    pub fn arg(&self) -> f64 {
        self.arg
    }

    /// `ln(1 - |z|^2)`.
    pub fn ln_one_minus_mod_sq(&self) -> f64 {
        self.log_defect + self.modulus.ln_1p()
    }

    /// True when `re`/`im` alone reproduce this point bit for bit.
    pub fn is_cartesian_exact(&self) -> bool {
        matches!(Self::new(self.re, self.im), Some(p) if p == *self)
    }

    /// Multiplies the point by `exp(i * angle)`.
    pub fn rotated(&self, angle: f64) -> Self {
        let arg = self.arg + angle;
        Self {
            re: self.modulus * arg.cos(),
            im: self.modulus * arg.sin(),
            arg,
            ..*self
        }
    }
}

/// A real number kept as `sign * exp(ln)`, so products of tiny defects
/// neither underflow nor lose their sign.
#[derive(Debug, Clone, Copy)]
struct LogReal {
    sign: f64,
    ln: f64,
}

impl LogReal {
    const ZERO: LogReal = LogReal {
        sign: 0.0,
        ln: f64::NEG_INFINITY,
    };

    fn from_f64(x: f64) -> Self {
        if x == 0.0 {
            Self::ZERO
        } else {
            Self {
                sign: x.signum(),
                ln: x.abs().ln(),
            }
        }
    }

    fn positive(ln: f64) -> Self {
        if ln == f64::NEG_INFINITY {
            Self::ZERO
        } else {
            Self { sign: 1.0, ln }
        }
    }

    fn add(self, other: Self) -> Self {
        if self.sign == 0.0 {
            return other;
        }
        if other.sign == 0.0 {
            return self;
        }
        let (hi, lo) = if self.ln >= other.ln {
            (self, other)
        } else {
            (other, self)
        };
        let d = lo.ln - hi.ln;
        if hi.sign == lo.sign {
            Self {
                sign: hi.sign,
                ln: hi.ln + d.exp().ln_1p(),
            }
        } else if d == 0.0 {
            Self::ZERO
        } else {
            Self {
                sign: hi.sign,
                ln: hi.ln + (-d.exp_m1()).ln(),
            }
        }
    }
}

fn log_add_exp(a: f64, b: f64) -> f64 {
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    if hi == f64::NEG_INFINITY {
        return hi;
    }
    hi + (lo - hi).exp().ln_1p()
}

/// `atan2(y, x)` for numbers that may lie far outside `f64` range.
fn atan2_scaled(y: LogReal, x: LogReal) -> f64 {
    let top = y.ln.max(x.ln);
    if top == f64::NEG_INFINITY {
        return 0.0;
    }
    (y.sign * (y.ln - top).exp()).atan2(x.sign * (x.ln - top).exp())
}

/// A complex number in polar-log form.
#[derive(Debug, Clone, Copy)]
pub(crate) struct LogPolar {
    pub ln_modulus: f64,
    pub arg: f64,
}

impl LogPolar {
    fn from_parts(re: LogReal, im: LogReal) -> Self {
        Self {
            ln_modulus: 0.5 * log_add_exp(2.0 * re.ln, 2.0 * im.ln),
            arg: atan2_scaled(im, re),
        }
    }

    pub fn to_complex(self) -> Complex64 {
        Complex64::from_polar(self.ln_modulus.exp(), self.arg)
    }
}

/// `|a| - |b|`.
fn radial_gap(a: &DiskPoint, b: &DiskPoint) -> LogReal {
    if a.modulus >= BOUNDARY_REGIME && b.modulus >= BOUNDARY_REGIME {
        // |a| - |b| = (1 - |b|) - (1 - |a|)
        LogReal::positive(b.log_defect).add(LogReal {
            sign: -1.0,
            ln: a.log_defect,
        })
    } else {
        LogReal::from_f64(a.modulus - b.modulus)
    }
}

/// `ln(1 - |a||b|)`.
fn ln_one_minus_mod_product(a: &DiskPoint, b: &DiskPoint) -> f64 {
    if a.modulus >= BOUNDARY_REGIME && b.modulus >= BOUNDARY_REGIME {
        // 1 - |a||b| = e_hi * (1 + (e_lo / e_hi) * (1 - e_hi))
        let (hi, lo) = if a.log_defect >= b.log_defect {
            (a, b)
        } else {
            (b, a)
        };
        hi.log_defect + ((lo.log_defect - hi.log_defect).exp() * hi.modulus).ln_1p()
    } else {
        (-(a.modulus * b.modulus)).ln_1p()
    }
}

/// `ln |a - b|^2`, from `(|a| - |b|)^2 + 4 |a||b| sin^2((arg a - arg b) / 2)`.
pub(crate) fn ln_dist_sq(a: &DiskPoint, b: &DiskPoint) -> f64 {
    let gap = radial_gap(a, b);
    let half = (0.5 * (a.arg - b.arg)).sin().abs();
    let angular = 2.0 * LN_2 + a.modulus.ln() + b.modulus.ln() + 2.0 * half.ln();
    log_add_exp(2.0 * gap.ln, angular)
}

/// Pseudohyperbolic quantities of a pair, stored through
/// `ln(rho^2 / (1 - rho^2)) = ln |a-b|^2 - ln(1-|a|^2) - ln(1-|b|^2)`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct PairSeparation {
    ln_odds: f64,
}

impl PairSeparation {
    pub fn new(a: &DiskPoint, b: &DiskPoint) -> Self {
        let ln_odds = ln_dist_sq(a, b) - a.ln_one_minus_mod_sq() - b.ln_one_minus_mod_sq();
        Self { ln_odds }
    }

    /// `ln rho`.
    pub fn ln_rho(self) -> f64 {
        -0.5 * ln_one_plus_exp(-self.ln_odds)
    }

    pub fn rho(self) -> f64 {
        self.ln_rho().exp()
    }

    /// `1 - rho^2`.
    pub fn one_minus_rho_sq(self) -> f64 {
        (-ln_one_plus_exp(self.ln_odds)).exp()
    }
}

/// `ln(1 + exp(x))` without overflow.
fn ln_one_plus_exp(x: f64) -> f64 {
    if x > 0.0 {
        x + (-x).exp().ln_1p()
    } else {
        x.exp().ln_1p()
    }
}

/// `1 - conj(b) * a`, the Szegő kernel denominator.
pub(crate) fn kernel_denominator(a: &DiskPoint, b: &DiskPoint) -> LogPolar {
    let delta = a.arg - b.arg;
    let half = (0.5 * delta).sin().abs();
    let ln_prod = a.modulus.ln() + b.modulus.ln();
    // Re = (1 - |a||b|) + 2 |a||b| sin^2(delta / 2)
    let re = LogReal::positive(log_add_exp(
        ln_one_minus_mod_product(a, b),
        LN_2 + ln_prod + 2.0 * half.ln(),
    ));
    // Im = -|a||b| sin(delta)
    let s = delta.sin();
    let im = if s == 0.0 {
        LogReal::ZERO
    } else {
        LogReal {
            sign: -s.signum(),
            ln: ln_prod + s.abs().ln(),
        }
    };
    LogPolar::from_parts(re, im)
}

/// `zero - z`.
pub(crate) fn difference(zero: &DiskPoint, z: &DiskPoint) -> LogPolar {
    // zero - z = e^{i arg zero} ((|zero| - |z|) + 2 |z| sin^2(d/2) - i |z| sin d),
    // with d = arg z - arg zero
    let delta = z.arg - zero.arg;
    let half = (0.5 * delta).sin().abs();
    let ln_z = z.modulus.ln();
    let re = radial_gap(zero, z).add(LogReal::positive(LN_2 + ln_z + 2.0 * half.ln()));
    let s = delta.sin();
    let im = if s == 0.0 {
        LogReal::ZERO
    } else {
        LogReal {
            sign: -s.signum(),
            ln: ln_z + s.abs().ln(),
        }
    };
    let local = LogPolar::from_parts(re, im);
    LogPolar {
        ln_modulus: local.ln_modulus,
        arg: local.arg + zero.arg,
    }
}

/// The disk automorphism factor `(zero - z) / (1 - conj(zero) z)` in polar-log form.
pub(crate) fn blaschke_factor_polar(zero: &DiskPoint, z: &DiskPoint) -> LogPolar {
    let num = difference(zero, z);
    let den = kernel_denominator(z, zero);
    LogPolar {
        ln_modulus: num.ln_modulus - den.ln_modulus,
        arg: num.arg - den.arg,
    }
}

/// `<g_b, g_a> = sqrt(1-|a|^2) sqrt(1-|b|^2) / (1 - conj(b) a)`.
pub(crate) fn normalized_kernel_product(a: &DiskPoint, b: &DiskPoint) -> Complex64 {
    let den = kernel_denominator(a, b);
    let ln_mod = 0.5 * (a.ln_one_minus_mod_sq() + b.ln_one_minus_mod_sq()) - den.ln_modulus;
    Complex64::from_polar(ln_mod.exp(), -den.arg)
}
