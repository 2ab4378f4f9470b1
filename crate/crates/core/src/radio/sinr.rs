//! Downlink SINR from a matrix of received powers.
//!
//! `powers_mw[c][b]` is the power received from beam `b` of cell `c` on the
//! serving panel. Every cell transmits `k_b` of its beams at a time, chosen
//! uniformly; the serving cell always transmits the serving beam.

use rand::seq::index;
use rand::Rng;

use super::lin_to_db;

/// SINR in dB under the expected interference of uniform co-scheduling.
pub fn sinr_db(powers_mw: &[Vec<f64>], cell: usize, beam: usize, k_b: usize, noise_mw: f64) -> f64 {
    let k = k_b as f64;
    let mut interference = 0.0;
    for (c, row) in powers_mw.iter().enumerate() {
        let n = row.len() as f64;
        if c == cell {
            if row.len() > 1 {
                let others: f64 = row
                    .iter()
                    .enumerate()
                    .filter(|&(b, _)| b != beam)
                    .map(|(_, p)| p)
                    .sum();
                interference += (k - 1.0) / (n - 1.0) * others;
            }
        } else {
            interference += k / n * row.iter().sum::<f64>();
        }
    }
    lin_to_db(powers_mw[cell][beam] / (interference + noise_mw))
}

/// SINR in dB with the interference averaged over `draws` random schedules.
/// Converges to [`sinr_db`] as `draws` grows.
pub fn sinr_sampled_db<R: Rng + ?Sized>(
    powers_mw: &[Vec<f64>],
    cell: usize,
    beam: usize,
    k_b: usize,
    noise_mw: f64,
    draws: usize,
    rng: &mut R,
) -> f64 {
    let mut total = 0.0;
    for _ in 0..draws {
        for (c, row) in powers_mw.iter().enumerate() {
            if c == cell {
                if k_b > 1 {
                    for i in index::sample(rng, row.len() - 1, k_b - 1) {
                        let b = if i >= beam { i + 1 } else { i };
                        total += row[b];
                    }
                }
            } else {
                for b in index::sample(rng, row.len(), k_b) {
                    total += row[b];
                }
            }
        }
    }
    let mean = total / draws.max(1) as f64;
    lin_to_db(powers_mw[cell][beam] / (mean + noise_mw))
}
