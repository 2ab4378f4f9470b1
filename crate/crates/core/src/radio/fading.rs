//! Large-scale shadowing and small-scale fading processes.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::db_to_lin;

/// Log-normal shadowing, one process per site, with exponential correlation
/// along the UE trajectory (first-order autoregression in travelled distance).
#[derive(Debug, Clone)]
pub struct ShadowFading {
    values_db: Vec<f64>,
    sigma_db: f64,
    decorrelation_m: f64,
    rng: ChaCha8Rng,
    enabled: bool,
}

impl ShadowFading {
    pub fn new(
        n_sites: usize,
        sigma_db: f64,
        decorrelation_m: f64,
        enabled: bool,
        mut rng: ChaCha8Rng,
    ) -> Self {
        let values_db = (0..n_sites)
            .map(|_| {
                if enabled {
                    sigma_db * rng.sample::<f64, _>(StandardNormal)
                } else {
                    0.0
                }
            })
            .collect();
        ShadowFading {
            values_db,
            sigma_db,
            decorrelation_m,
            rng,
            enabled,
        }
    }

    /// Correlation between two samples `distance_m` apart.
    pub fn correlation(&self, distance_m: f64) -> f64 {
        (-distance_m / self.decorrelation_m).exp()
    }

    pub fn advance(&mut self, distance_m: f64) {
        if !self.enabled {
            return;
        }
        let rho = self.correlation(distance_m);
        let innov = (1.0 - rho * rho).max(0.0).sqrt() * self.sigma_db;
        for v in &mut self.values_db {
            let z: f64 = self.rng.sample(StandardNormal);
            *v = rho * *v + innov * z;
        }
    }

    #[inline]
    pub fn value_db(&self, site: usize) -> f64 {
        self.values_db[site]
    }
}

#[derive(Debug, Clone, Copy, Default)]
struct Phasor {
    re: f64,
    im: f64,
}

impl Phasor {
    fn from_angle(a: f64) -> Self {
        let (s, c) = a.sin_cos();
        Phasor { re: c, im: s }
    }

    #[inline]
    fn mul(self, o: Phasor) -> Phasor {
        Phasor {
            re: self.re * o.re - self.im * o.im,
            im: self.re * o.im + self.im * o.re,
        }
    }
}

/// Rician sum-of-sinusoids fading per link.
///
/// Each link carries one specular component with power `K/(K+1)` and
/// `n_sinusoids` diffuse components sharing `1/(K+1)`, each with a random
/// arrival angle and phase. Every component rotates at its Doppler shift,
/// so the process is temporally correlated and has unit mean power.
#[derive(Debug, Clone)]
pub struct FastFading {
    n_terms: usize,
    los_amp: f64,
    diffuse_amp: f64,
    state: Vec<Phasor>,
    step_rotation: Vec<Phasor>,
    enabled: bool,
}

impl FastFading {
    pub fn new(
        n_links: usize,
        n_sinusoids: usize,
        rician_k_db: f64,
        doppler_hz: f64,
        dt_s: f64,
        enabled: bool,
        mut rng: ChaCha8Rng,
    ) -> Self {
        let n_terms = n_sinusoids + 1;
        let k = db_to_lin(rician_k_db);
        let los_amp = (k / (k + 1.0)).sqrt();
        let diffuse_amp = (1.0 / ((k + 1.0) * n_sinusoids as f64)).sqrt();
        let (state, step_rotation) = if enabled {
            let mut state = Vec::with_capacity(n_links * n_terms);
            let mut rot = Vec::with_capacity(n_links * n_terms);
            let two_pi = std::f64::consts::TAU;
            for _ in 0..n_links {
                for t in 0..n_terms {
                    let aoa = if t == 0 {
                        two_pi * rng.random::<f64>()
                    } else {
                        two_pi * ((t - 1) as f64 + rng.random::<f64>()) / n_sinusoids as f64
                    };
                    let phase = two_pi * rng.random::<f64>();
                    state.push(Phasor::from_angle(phase));
                    rot.push(Phasor::from_angle(two_pi * doppler_hz * aoa.cos() * dt_s));
                }
            }
            (state, rot)
        } else {
            (Vec::new(), Vec::new())
        };
        FastFading {
            n_terms,
            los_amp,
            diffuse_amp,
            state,
            step_rotation,
            enabled,
        }
    }

    pub fn advance(&mut self) {
        for (s, r) in self.state.iter_mut().zip(&self.step_rotation) {
            *s = s.mul(*r);
        }
    }

    /// Linear power gain of a link.
    #[inline]
    pub fn power(&self, link: usize) -> f64 {
        if !self.enabled {
            return 1.0;
        }
        let terms = &self.state[link * self.n_terms..(link + 1) * self.n_terms];
        let (mut re, mut im) = (0.0, 0.0);
        for p in &terms[1..] {
            re += p.re;
            im += p.im;
        }
        re = self.los_amp * terms[0].re + self.diffuse_amp * re;
        im = self.los_amp * terms[0].im + self.diffuse_amp * im;
        re * re + im * im
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::rng::{substream, Stream};

    #[test]
    fn fast_fading_unit_mean_power() {
        let mut ff = FastFading::new(
            500,
            8,
            10.0,
            778.0,
            0.01,
            true,
            substream(5, Stream::FastFading, 0, 0),
        );
        let mut acc = 0.0;
        let mut n = 0.0;
        for _ in 0..200 {
            for l in 0..500 {
                acc += ff.power(l);
                n += 1.0;
            }
            ff.advance();
        }
        let mean = acc / n;
        assert!((mean - 1.0).abs() < 0.02, "mean power {mean}");
    }

    #[test]
    fn disabled_processes_are_neutral() {
        let ff = FastFading::new(
            3,
            8,
            10.0,
            778.0,
            0.01,
            false,
            substream(5, Stream::FastFading, 0, 0),
        );
        assert_eq!(ff.power(2), 1.0);
        let mut sf = ShadowFading::new(7, 4.0, 13.0, false, substream(5, Stream::Shadow, 0, 0));
        sf.advance(1.0);
        assert_eq!(sf.value_db(3), 0.0);
    }

    #[test]
    fn shadow_zero_mean_with_sigma() {
        let mut sum = 0.0;
        let mut sq = 0.0;
        let n = 20_000;
        for ue in 0..n {
            let sf = ShadowFading::new(1, 4.0, 13.0, true, substream(9, Stream::Shadow, ue, 0));
            let v = sf.value_db(0);
            sum += v;
            sq += v * v;
        }
        let mean = sum / n as f64;
        let sd = (sq / n as f64 - mean * mean).sqrt();
        assert!(mean.abs() < 0.1, "mean {mean}");
        assert!((sd - 4.0).abs() < 0.1, "sd {sd}");
    }
}
