use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const TIME_EPS: f64 = 1e-12;

/// One entry of a pulse timeline. All qubit operations act along σ_x.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum PulseEvent {
    /// Ideal π rotation, applied as −iσ_x.
    InstantFlip { time: f64 },
    /// Ideal π/2 pulse taking |↑⟩ → |+⟩ and |↓⟩ → |−⟩.
    InstantHalfFlip { time: f64 },
    /// Rectangular transverse pulse (ε⊥/2)σ_x switched on for `duration`.
    RectPulse { start: f64, duration: f64, amplitude: f64 },
    /// Continuous drive ε_d cos(ω_d t)σ_x with t measured from `start`.
    Drive {
        start: f64,
        duration: f64,
        amplitude: f64,
        frequency: f64,
    },
}

impl PulseEvent {
    pub fn start(&self) -> f64 {
        match *self {
            PulseEvent::InstantFlip { time } | PulseEvent::InstantHalfFlip { time } => time,
            PulseEvent::RectPulse { start, .. } | PulseEvent::Drive { start, .. } => start,
        }
    }

    pub fn end(&self) -> f64 {
        match *self {
            PulseEvent::InstantFlip { time } | PulseEvent::InstantHalfFlip { time } => time,
            PulseEvent::RectPulse { start, duration, .. } | PulseEvent::Drive { start, duration, .. } => {
                start + duration
            }
        }
    }

    pub fn is_instant(&self) -> bool {
        matches!(self, PulseEvent::InstantFlip { .. } | PulseEvent::InstantHalfFlip { .. })
    }

    fn describe(&self) -> &'static str {
        match self {
            PulseEvent::InstantFlip { .. } => "instant flip",
            PulseEvent::InstantHalfFlip { .. } => "instant half flip",
            PulseEvent::RectPulse { .. } => "rectangular pulse",
            PulseEvent::Drive { .. } => "drive",
        }
    }
}

/// A validated, time-ordered list of events ending at `total_time`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PulseSchedule {
    events: Vec<PulseEvent>,
    total_time: f64,
}

impl PulseSchedule {
    /// Sorts events by start time (stable) and rejects negative durations,
    /// events outside `[0, total_time]`, and overlapping segments. An
    /// instantaneous event may touch a segment boundary but not sit inside it.
    pub fn new(mut events: Vec<PulseEvent>, total_time: f64) -> Result<Self> {
        if !(total_time >= 0.0) || !total_time.is_finite() {
            return Err(Error::validation("total_time", format!("must be finite and >= 0, got {total_time}")));
        }
        for ev in &events {
            let (s, e) = (ev.start(), ev.end());
            if !s.is_finite() || !e.is_finite() || e < s {
                return Err(Error::validation("events", format!("{} has invalid timing", ev.describe())));
            }
            if let PulseEvent::RectPulse { amplitude, .. } | PulseEvent::Drive { amplitude, .. } = ev {
                if !amplitude.is_finite() {
                    return Err(Error::validation("events", "amplitude must be finite"));
                }
            }
            if s < -TIME_EPS || e > total_time + TIME_EPS {
                return Err(Error::validation(
                    "events",
                    format!("{} at [{s}, {e}] lies outside [0, {total_time}]", ev.describe()),
                ));
            }
        }
        events.sort_by(|a, b| a.start().total_cmp(&b.start()));
        let segments: Vec<&PulseEvent> = events.iter().filter(|e| !e.is_instant()).collect();
        for pair in segments.windows(2) {
            if pair[1].start() < pair[0].end() - TIME_EPS {
                return Err(Error::ScheduleOverlap {
                    time: pair[1].start(),
                    detail: format!("{} starts before the preceding {} ends", pair[1].describe(), pair[0].describe()),
                });
            }
        }
        for inst in events.iter().filter(|e| e.is_instant()) {
            let t = inst.start();
            for seg in &segments {
                if t > seg.start() + TIME_EPS && t < seg.end() - TIME_EPS {
                    return Err(Error::ScheduleOverlap {
                        time: t,
                        detail: format!("{} falls inside a {}", inst.describe(), seg.describe()),
                    });
                }
            }
        }
        Ok(PulseSchedule { events, total_time })
    }

    pub fn empty(total_time: f64) -> Result<Self> {
        PulseSchedule::new(Vec::new(), total_time)
    }

    pub fn events(&self) -> &[PulseEvent] {
        &self.events
    }

    pub fn total_time(&self) -> f64 {
        self.total_time
    }
}
