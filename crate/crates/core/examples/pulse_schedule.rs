//! Building a pulse timeline by hand and running it.

use strobocat::analysis::qubit_reduced;
use strobocat::evolve::{apply_schedule, PulseEvent, PulseSchedule};
use strobocat::protocols::{conditional_amplitudes, plus_vacuum};
use strobocat::spin_boson::SystemParams;

fn main() -> strobocat::Result<()> {
    let params = SystemParams::default();
    let tau = params.tau0();
    let width = std::f64::consts::PI / 40.0;
    let events = vec![
        PulseEvent::InstantFlip { time: tau },
        PulseEvent::RectPulse {
            start: 2.0 * tau,
            duration: width,
            amplitude: 40.0,
        },
        PulseEvent::InstantFlip { time: 3.0 * tau + width },
    ];
    let schedule = PulseSchedule::new(events, 4.0 * tau)?;
    let state = apply_schedule(&schedule, &params, &plus_vacuum(&params))?;
    let [up, down] = conditional_amplitudes(&state, &params)?;
    println!("<a>_up = {:.4}, <a>_down = {:.4}", up.unwrap(), down.unwrap());
    println!("qubit entropy = {:.4}", qubit_reduced(&state)?.entropy);

    // overlapping events are rejected
    let clash = PulseSchedule::new(
        vec![
            PulseEvent::RectPulse { start: 0.0, duration: 1.0, amplitude: 3.0 },
            PulseEvent::InstantFlip { time: 0.5 },
        ],
        2.0,
    );
    println!("overlap: {}", clash.unwrap_err());
    Ok(())
}
