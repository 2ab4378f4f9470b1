//! Small timer-driven state machines, each testable on synthetic traces.
//!
//! All times are in milliseconds of simulated time.

/// Time-to-trigger tracker for one neighbour cell.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct TttTimer {
    started_ms: Option<f64>,
}

impl TttTimer {
    /// Feed one sample of the entering condition. Returns true when the
    /// condition has held at every sample for at least `ttt_ms`.
    pub fn update(&mut self, now_ms: f64, condition: bool, ttt_ms: f64) -> bool {
        if !condition {
            self.started_ms = None;
            return false;
        }
        let start = *self.started_ms.get_or_insert(now_ms);
        now_ms - start >= ttt_ms
    }

    pub fn running_since(&self) -> Option<f64> {
        self.started_ms
    }

    pub fn reset(&mut self) {
        self.started_ms = None;
    }
}

/// First-order IIR on a dB metric, bootstrapped by the first sample.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SinrFilter {
    alpha: f64,
    value: Option<f64>,
}

impl SinrFilter {
    pub fn new(alpha: f64) -> Self {
        SinrFilter { alpha, value: None }
    }

    pub fn update(&mut self, sample_db: f64) -> f64 {
        let v = crate::measurement::l3_iir(self.value, sample_db, self.alpha);
        self.value = Some(v);
        v
    }

    pub fn value(&self) -> Option<f64> {
        self.value
    }

    pub fn reset(&mut self) {
        self.value = None;
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BfdOutcome {
    None,
    OutOfSync,
    BeamFailure,
}

/// Beam failure detection: counts beam failure indications, each of which
/// restarts a timer; the counter clears when the timer runs out.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BfdCounter {
    count: u32,
    deadline_ms: Option<f64>,
}

impl Default for BfdCounter {
    fn default() -> Self {
        BfdCounter {
            count: 0,
            deadline_ms: None,
        }
    }
}

impl BfdCounter {
    pub fn update(
        &mut self,
        now_ms: f64,
        out_of_sync: bool,
        max_count: u32,
        timer_ms: f64,
    ) -> BfdOutcome {
        if let Some(d) = self.deadline_ms {
            if now_ms >= d {
                self.count = 0;
                self.deadline_ms = None;
            }
        }
        if !out_of_sync {
            return BfdOutcome::None;
        }
        self.count += 1;
        self.deadline_ms = Some(now_ms + timer_ms);
        if self.count >= max_count {
            self.count = max_count;
            BfdOutcome::BeamFailure
        } else {
            BfdOutcome::OutOfSync
        }
    }

    pub fn count(&self) -> u32 {
        self.count
    }

    pub fn reset(&mut self) {
        *self = BfdCounter::default();
    }
}

/// Radio link monitoring timer with entry threshold `gamma_out` and exit
/// threshold `gamma_in`.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct RlfTimer {
    deadline_ms: Option<f64>,
}

impl RlfTimer {
    /// Returns true when a radio link failure is declared.
    pub fn update(
        &mut self,
        now_ms: f64,
        metric_db: f64,
        gamma_out: f64,
        gamma_in: f64,
        t_rlf_ms: f64,
    ) -> bool {
        match self.deadline_ms {
            Some(_) if metric_db > gamma_in => {
                self.deadline_ms = None;
                false
            }
            Some(d) => {
                if now_ms >= d {
                    self.deadline_ms = None;
                    true
                } else {
                    false
                }
            }
            None => {
                if metric_db < gamma_out {
                    self.deadline_ms = Some(now_ms + t_rlf_ms);
                }
                false
            }
        }
    }

    pub fn is_running(&self) -> bool {
        self.deadline_ms.is_some()
    }

    pub fn reset(&mut self) {
        self.deadline_ms = None;
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AccessOutcome {
    Pending,
    Success,
    Failure,
}

/// Random access towards a handover target: succeeds once the target link
/// has stayed at or above `gamma_out` for the interruption time, fails when
/// the failure timer runs out first.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HoAccess {
    started_ms: f64,
    good_since_ms: Option<f64>,
}

impl HoAccess {
    pub fn new(started_ms: f64) -> Self {
        HoAccess {
            started_ms,
            good_since_ms: None,
        }
    }

    pub fn started_ms(&self) -> f64 {
        self.started_ms
    }

    pub fn update(
        &mut self,
        now_ms: f64,
        sinr_db: f64,
        gamma_out: f64,
        interruption_ms: f64,
        t_hof_ms: f64,
    ) -> AccessOutcome {
        if sinr_db >= gamma_out {
            let since = *self.good_since_ms.get_or_insert(now_ms);
            if now_ms - since >= interruption_ms {
                return AccessOutcome::Success;
            }
        } else {
            self.good_since_ms = None;
        }
        if now_ms - self.started_ms >= t_hof_ms {
            AccessOutcome::Failure
        } else {
            AccessOutcome::Pending
        }
    }
}

/// Beam failure recovery: up to `n_rach` access attempts spaced `t_rach`
/// apart, the first at the instant of detection.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BfrAttempts {
    next_ms: f64,
    made: u32,
}

impl BfrAttempts {
    pub fn new(detected_ms: f64) -> Self {
        BfrAttempts {
            next_ms: detected_ms,
            made: 0,
        }
    }

    pub fn attempts_made(&self) -> u32 {
        self.made
    }

    pub fn update(
        &mut self,
        now_ms: f64,
        sinr_db: f64,
        gamma_out: f64,
        n_rach: u32,
        t_rach_ms: f64,
    ) -> AccessOutcome {
        if now_ms < self.next_ms {
            return AccessOutcome::Pending;
        }
        self.made += 1;
        if sinr_db >= gamma_out {
            AccessOutcome::Success
        } else if self.made >= n_rach {
            AccessOutcome::Failure
        } else {
            self.next_ms += t_rach_ms;
            AccessOutcome::Pending
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ttt_fires_after_hold() {
        let mut t = TttTimer::default();
        let mut fired = None;
        for k in 0..10 {
            let now = 20.0 * k as f64;
            if t.update(now, true, 80.0) {
                fired = Some(now);
                break;
            }
        }
        assert_eq!(fired, Some(80.0));
    }

    #[test]
    fn ttt_interrupted_resets() {
        let mut t = TttTimer::default();
        for k in 0..4 {
            assert!(!t.update(10.0 * k as f64 * 2.0, true, 80.0));
        }
        assert!(!t.update(80.0, false, 80.0));
        assert_eq!(t.running_since(), None);
        assert!(!t.update(100.0, true, 80.0));
        assert!(!t.update(160.0, true, 80.0));
        assert!(t.update(180.0, true, 80.0));
    }

    #[test]
    fn bfd_three_indications_trigger() {
        let mut b = BfdCounter::default();
        assert_eq!(b.update(0.0, true, 3, 60.0), BfdOutcome::OutOfSync);
        assert_eq!(b.update(10.0, true, 3, 60.0), BfdOutcome::OutOfSync);
        assert_eq!(b.update(20.0, true, 3, 60.0), BfdOutcome::BeamFailure);
    }

    #[test]
    fn bfd_counter_clears_after_quiet_period() {
        let mut b = BfdCounter::default();
        b.update(0.0, true, 3, 60.0);
        b.update(10.0, true, 3, 60.0);
        for k in 2..7 {
            b.update(10.0 * k as f64, false, 3, 60.0);
            assert_eq!(b.count(), 2);
        }
        b.update(70.0, false, 3, 60.0);
        assert_eq!(b.count(), 0);
    }

    #[test]
    fn rlf_hysteresis() {
        let mut r = RlfTimer::default();
        assert!(!r.update(0.0, -9.0, -8.0, -6.0, 1000.0));
        assert!(r.is_running());
        for k in 1..50 {
            assert!(!r.update(10.0 * k as f64, -9.0, -8.0, -6.0, 1000.0));
        }
        assert!(!r.update(500.0, -5.0, -8.0, -6.0, 1000.0));
        assert!(!r.is_running());

        let mut r = RlfTimer::default();
        r.update(0.0, -9.0, -8.0, -6.0, 1000.0);
        for k in 1..100 {
            assert!(!r.update(10.0 * k as f64, -7.0, -8.0, -6.0, 1000.0));
        }
        assert!(r.update(1000.0, -7.0, -8.0, -6.0, 1000.0));
    }

    #[test]
    fn access_success_and_failure() {
        let mut a = HoAccess::new(0.0);
        let mut out = AccessOutcome::Pending;
        let mut t = 0.0;
        while out == AccessOutcome::Pending {
            out = a.update(t, -5.0, -8.0, 50.0, 200.0);
            t += 10.0;
        }
        assert_eq!((out, t - 10.0), (AccessOutcome::Success, 50.0));

        let mut a = HoAccess::new(0.0);
        let mut out = AccessOutcome::Pending;
        let mut t = 0.0;
        while out == AccessOutcome::Pending {
            out = a.update(t, -9.0, -8.0, 50.0, 200.0);
            t += 10.0;
        }
        assert_eq!((out, t - 10.0), (AccessOutcome::Failure, 200.0));
    }

    #[test]
    fn bfr_attempt_schedule() {
        let mut b = BfrAttempts::new(100.0);
        assert_eq!(b.update(100.0, -7.0, -8.0, 4, 20.0), AccessOutcome::Success);

        let mut b = BfrAttempts::new(100.0);
        let mut fail_at = None;
        for k in 0..20 {
            let now = 100.0 + 10.0 * k as f64;
            if b.update(now, -10.0, -8.0, 4, 20.0) == AccessOutcome::Failure {
                fail_at = Some(now);
                break;
            }
        }
        assert_eq!(fail_at, Some(160.0));
        assert_eq!(b.attempts_made(), 4);
    }
}
