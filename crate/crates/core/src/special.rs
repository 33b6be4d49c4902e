//! Normal-family special functions.

use statrs::distribution::{ContinuousCDF, StudentsT};
use statrs::function::erf::erfc_inv;
use std::f64::consts::{FRAC_1_SQRT_2, PI, SQRT_2};

/// Standard normal CDF.
pub fn norm_cdf(x: f64) -> f64 {
    0.5 * libm::erfc(-x * FRAC_1_SQRT_2)
}

/// Standard normal density.
pub fn norm_pdf(x: f64) -> f64 {
    (-0.5 * x * x).exp() / (2.0 * PI).sqrt()
}

/// Standard normal quantile; `±∞` at the endpoints.
pub fn norm_ppf(p: f64) -> f64 {
    if p <= 0.0 {
        f64::NEG_INFINITY
    } else if p >= 1.0 {
        f64::INFINITY
    } else {
        let mut x = -SQRT_2 * erfc_inv(2.0 * p);
        // Newton polish; the starting value is good to about 1e-11.
        for _ in 0..2 {
            let pdf = norm_pdf(x);
            if pdf <= 0.0 {
                break;
            }
            let err = if x < 0.0 {
                norm_cdf(x) - p
            } else {
                (1.0 - p) - norm_cdf(-x)
            };
            x -= err / pdf;
        }
        x
    }
}

/// Student-t CDF with `nu` degrees of freedom.
pub fn t_cdf(x: f64, nu: f64) -> f64 {
    StudentsT::new(0.0, 1.0, nu)
        .expect("positive degrees of freedom")
        .cdf(x)
}

// Gauss–Legendre half-rules (weight, abscissa) used by Genz's BVND.
const QUAD_6: [(f64, f64); 3] = [
    (0.171_324_492_379_170_5, -0.932_469_514_203_152_2),
    (0.360_761_573_048_138_4, -0.661_209_386_466_264_7),
    (0.467_913_934_572_690_4, -0.238_619_186_083_197_0),
];
const QUAD_12: [(f64, f64); 6] = [
    (0.047_175_336_386_511_77, -0.981_560_634_246_719_1),
    (0.106_939_325_995_318_3, -0.904_117_256_370_475_0),
    (0.160_078_328_543_346_4, -0.769_902_674_194_305_0),
    (0.203_167_426_723_065_9, -0.587_317_954_286_617_1),
    (0.233_492_536_538_354_7, -0.367_831_498_998_180_2),
    (0.249_147_045_813_402_9, -0.125_233_408_511_469_2),
];
const QUAD_20: [(f64, f64); 10] = [
    (0.017_614_007_139_152_12, -0.993_128_599_185_094_9),
    (0.040_601_429_800_386_94, -0.963_971_927_277_913_8),
    (0.062_672_048_334_109_06, -0.912_234_428_251_325_9),
    (0.083_276_741_576_704_75, -0.839_116_971_822_218_8),
    (0.101_930_119_817_240_4, -0.746_331_906_460_150_8),
    (0.118_194_531_961_518_4, -0.636_053_680_726_515_0),
    (0.131_688_638_449_176_6, -0.510_867_001_950_827_1),
    (0.142_096_109_318_382_1, -0.373_706_088_715_419_6),
    (0.149_172_986_472_603_7, -0.227_785_851_141_645_1),
    (0.152_753_387_130_725_9, -0.076_526_521_133_497_33),
];

/// `P(X > h, Y > k)` for a standard bivariate normal with correlation `r >= 0`
/// (Drezner–Wesolowsky with Genz's refinements).
fn upper_orthant_nonneg(h: f64, k: f64, r: f64) -> f64 {
    debug_assert!(r >= 0.0);
    let two_pi = 2.0 * PI;
    let hk = h * k;
    let quad: &[(f64, f64)] = if r < 0.3 {
        &QUAD_6
    } else if r < 0.75 {
        &QUAD_12
    } else {
        &QUAD_20
    };
    if r < 0.925 {
        let mut bvn = 0.0;
        if r > 0.0 {
            let hs = (h * h + k * k) / 2.0;
            let asr = r.asin();
            for &(w, x) in quad {
                for is in [-1.0, 1.0] {
                    let sn = (asr * (is * x + 1.0) / 2.0).sin();
                    bvn += w * ((sn * hk - hs) / (1.0 - sn * sn)).exp();
                }
            }
            bvn *= asr / (2.0 * two_pi);
        }
        return bvn + norm_cdf(-h) * norm_cdf(-k);
    }
    let mut bvn = 0.0;
    if r < 1.0 {
        let a_s = (1.0 - r) * (1.0 + r);
        let mut a = a_s.sqrt();
        let b_s = (h - k) * (h - k);
        let c = (4.0 - hk) / 8.0;
        let d = (12.0 - hk) / 16.0;
        let asr = -(b_s / a_s + hk) / 2.0;
        if asr > -100.0 {
            bvn = a
                * asr.exp()
                * (1.0 - c * (b_s - a_s) * (1.0 - d * b_s / 5.0) / 3.0 + c * d * a_s * a_s / 5.0);
        }
        if -hk < 100.0 {
            let b = b_s.sqrt();
            bvn -= (-hk / 2.0).exp()
                * two_pi.sqrt()
                * norm_cdf(-b / a)
                * b
                * (1.0 - c * b_s * (1.0 - d * b_s / 5.0) / 3.0);
        }
        a /= 2.0;
        for &(w, x) in quad {
            for is in [-1.0, 1.0] {
                let xs0 = a * (is * x + 1.0);
                let xs = xs0 * xs0;
                let rs = (1.0 - xs).sqrt();
                let asr = -(b_s / xs + hk) / 2.0;
                if asr > -100.0 {
                    bvn += a
                        * w
                        * asr.exp()
                        * ((-hk * (1.0 - rs) / (2.0 * (1.0 + rs))).exp() / rs
                            - (1.0 + c * xs * (1.0 + d * xs)));
                }
            }
        }
        bvn = -bvn / two_pi;
    }
    bvn + norm_cdf(-h.max(k))
}

/// `P(X <= h, Y <= k)` for a standard bivariate normal with correlation `r`.
pub fn bvn_cdf(h: f64, k: f64, r: f64) -> f64 {
    if h == f64::NEG_INFINITY || k == f64::NEG_INFINITY {
        return 0.0;
    }
    if h == f64::INFINITY {
        return norm_cdf(k);
    }
    if k == f64::INFINITY {
        return norm_cdf(h);
    }
    let r = r.clamp(-1.0, 1.0);
    let v = if r >= 0.0 {
        upper_orthant_nonneg(-h, -k, r)
    } else {
        // (X, -Y) has correlation -r > 0.
        norm_cdf(h) - upper_orthant_nonneg(-h, k, -r)
    };
    v.clamp(0.0, norm_cdf(h).min(norm_cdf(k)))
}
