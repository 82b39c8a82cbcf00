//! BI-AWGN channel with BPSK mapping and LLR output.
//!
//! Bit `b` is sent as `s = 1 - 2b`, received as `y = s + sigma * w` with
//! `w ~ N(0, 1)`, and delivered as `L = 2 y / sigma^2`. `Eb/N0` refers to
//! the energy per information bit: `sigma^2 = 1 / (2 R 10^(Eb/N0 / 10))`.
//!
//! Given bit 0, `L ~ N(mu, 2 mu)` with `mu = 2 / sigma^2`.

use rand::Rng;
use rand_distr::StandardNormal;
use statrs::distribution::{ContinuousCDF, Normal};

use crate::code::Rate;

/// Noise and LLR parameters of a BI-AWGN channel at one operating point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Awgn {
    pub sigma2: f64,
}

impl Awgn {
    pub fn from_ebn0(ebn0_db: f64, rate: Rate) -> Self {
        Self::from_ebn0_rate(ebn0_db, rate.value())
    }

    pub fn from_ebn0_rate(ebn0_db: f64, rate: f64) -> Self {
        let ebn0 = 10f64.powf(ebn0_db / 10.0);
        Self {
            sigma2: 1.0 / (2.0 * rate * ebn0),
        }
    }

    pub fn sigma(&self) -> f64 {
        self.sigma2.sqrt()
    }

    /// Mean of the LLR given bit 0.
    pub fn llr_mean(&self) -> f64 {
        2.0 / self.sigma2
    }

    /// Standard deviation of the LLR given either bit.
    pub fn llr_std(&self) -> f64 {
        (4.0 / self.sigma2).sqrt()
    }

    /// Channel LLR for `bit` given one unit-Gaussian noise sample.
    #[inline]
    pub fn llr(&self, bit: u8, noise: f64) -> f64 {
        let s = 1.0 - 2.0 * f64::from(bit & 1);
        let y = s + self.sigma() * noise;
        2.0 * y / self.sigma2
    }

    /// Fills `out` with LLRs of the all-zero codeword.
    pub fn all_zero_llrs<R: Rng + ?Sized>(&self, rng: &mut R, out: &mut [f64]) {
        let (sigma, scale) = (self.sigma(), 2.0 / self.sigma2);
        for v in out.iter_mut() {
            let w: f64 = rng.sample(StandardNormal);
            *v = scale * (1.0 + sigma * w);
        }
    }

    /// `P(L <= t | bit 0)`.
    pub fn llr_cdf0(&self, t: f64) -> f64 {
        self.normal0().cdf(t)
    }

    /// `P(L > t | bit 0)`.
    pub fn llr_sf0(&self, t: f64) -> f64 {
        self.normal0().sf(t)
    }

    /// `P(L in [lo, hi) | bit 0)`, evaluated on whichever tail keeps precision.
    pub fn llr_interval0(&self, lo: f64, hi: f64) -> f64 {
        let m = self.llr_mean();
        if hi <= m {
            (self.llr_cdf0(hi) - self.llr_cdf0(lo)).max(0.0)
        } else if lo >= m {
            (self.llr_sf0(lo) - self.llr_sf0(hi)).max(0.0)
        } else {
            (1.0 - self.llr_cdf0(lo) - self.llr_sf0(hi)).max(0.0)
        }
    }

    /// CDF of the LLR under the equiprobable mixture of both bits.
    pub fn llr_mixture_cdf(&self, t: f64) -> f64 {
        0.5 * (self.llr_cdf0(t) + self.llr_sf0(-t))
    }

    /// Upper-tail mixture quantile for `u` in `[0.5, 1)`, by bisection.
    pub fn llr_mixture_quantile_upper(&self, u: f64) -> f64 {
        debug_assert!((0.5..1.0).contains(&u));
        let tail = 1.0 - u;
        // mixture survival function, evaluated on the upper tail
        let sf = |t: f64| 0.5 * (self.llr_sf0(t) + self.llr_cdf0(-t));
        let (mut lo, mut hi) = (0.0, self.llr_mean() + 40.0 * self.llr_std());
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if sf(mid) > tail {
                lo = mid;
            } else {
                hi = mid;
            }
            if hi - lo <= f64::EPSILON * hi.abs().max(1.0) {
                break;
            }
        }
        0.5 * (lo + hi)
    }

    /// `I(X; L)` in bits for the unquantized channel, by trapezoidal
    /// integration over +-12 standard deviations.
    pub fn capacity_bits(&self) -> f64 {
        let (m, s) = (self.llr_mean(), self.llr_std());
        let steps = 20_000;
        let (a, b) = (m - 12.0 * s, m + 12.0 * s);
        let h = (b - a) / steps as f64;
        let f = |l: f64| {
            let z = (l - m) / s;
            let pdf = (-0.5 * z * z).exp() / (s * (2.0 * std::f64::consts::PI).sqrt());
            // log2(1 + e^{-l}) computed stably
            let soft = if l > 0.0 {
                (-l).exp().ln_1p()
            } else {
                -l + l.exp().ln_1p()
            };
            pdf * soft / std::f64::consts::LN_2
        };
        let mut acc = 0.5 * (f(a) + f(b));
        for i in 1..steps {
            acc += f(a + i as f64 * h);
        }
        1.0 - acc * h
    }

    fn normal0(&self) -> Normal {
        Normal::new(self.llr_mean(), self.llr_std()).expect("valid normal parameters")
    }
}

/// Single-sample LLR for `bit` at `snr_db` (Eb/N0) and `rate`.
pub fn llr_channel(snr_db: f64, rate: f64, bit: u8, noise: f64) -> f64 {
    Awgn::from_ebn0_rate(snr_db, rate).llr(bit, noise)
}
