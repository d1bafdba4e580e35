use memristive::device::{
    memristance, simulate_drive, simulate_fn, step_state, DeviceParams, MemristorState, Waveform, Window,
};
use memristive::formats::SignalTrace;

fn sine(f: f64) -> impl Fn(f64) -> f64 {
    move |t| (2.0 * std::f64::consts::PI * f * t).sin()
}

fn final_x(dt: f64) -> f64 {
    let p = DeviceParams::hp_linear();
    simulate_fn(&p, MemristorState::new(0.2), 0.0, 1.0, dt, sine(1.0)).unwrap().last().unwrap().x
}

#[test]
fn pinched_at_zero_crossings() {
    let p = DeviceParams::hp_linear();
    let tr = simulate_fn(&p, MemristorState::new(0.2), 0.0, 2.0, 1e-4, sine(1.0)).unwrap();
    for s in &tr.samples {
        assert!(s.i.abs() <= s.v.abs() / p.r_on + 1e-18);
        if s.v == 0.0 {
            assert_eq!(s.i, 0.0);
        }
        assert!(s.memristance >= p.r_on && s.memristance <= p.r_off);
    }
    assert!(tr.samples.windows(2).all(|w| w[1].t > w[0].t));
}

#[test]
fn lobes_shrink_with_frequency() {
    let p = DeviceParams::hp_linear();
    let area = |f: f64| {
        let period = 1.0 / f;
        let tr = simulate_fn(&p, MemristorState::new(0.2), 0.0, period, period / 20_000.0, sine(f)).unwrap();
        tr.loop_area(0.0, 0.5 * period)
    };
    let (a1, a10, a100) = (area(1.0), area(10.0), area(100.0));
    assert!(a1 > a10 && a10 > a100, "{a1} {a10} {a100}");
}

#[test]
fn halving_the_step_barely_moves_the_result() {
    let (a, b) = (final_x(1e-4), final_x(5e-5));
    assert!((a - b).abs() <= 1e-6 * b.abs(), "{a} vs {b}");
}

#[test]
fn step_refinement_shows_fourth_order() {
    // Differences between successive halvings shrink by about 2^4.
    let xs: Vec<f64> = [4e-3, 2e-3, 1e-3, 5e-4].iter().map(|&dt| final_x(dt)).collect();
    let d1 = (xs[0] - xs[1]).abs();
    let d2 = (xs[1] - xs[2]).abs();
    let d3 = (xs[2] - xs[3]).abs();
    let r1 = (d1 / d2).log2();
    let r2 = (d2 / d3).log2();
    eprintln!("observed orders {r1} {r2}");
    assert!((3.5..5.0).contains(&r1), "order {r1}");
    assert!((3.5..5.0).contains(&r2), "order {r2}");
}

#[test]
fn windowed_devices_stay_confined_under_long_drive() {
    for w in [Window::Joglekar { p: 1 }, Window::Biolek { p: 1 }, Window::Prodromakis { p: 1, j: 1.0 }] {
        let p = DeviceParams::hp_linear().with_window(w);
        let mut s = MemristorState::new(0.5);
        for k in 0..5000 {
            let v = if (k / 500) % 2 == 0 { 3.0 } else { -3.0 };
            s = step_state(&s, v, 1e-3, &p).unwrap();
            assert!((0.0..=1.0).contains(&s.x));
        }
        memristance(&s, &p).unwrap();
    }
}

#[test]
fn pwl_pulse_drive_programs_monotonically() {
    let p = DeviceParams::hp_linear();
    let drive = Waveform::Pulses {
        amplitude: 1.0,
        width: 0.02,
        period: 0.05,
    }
    .to_trace(1.0, 100.0)
    .unwrap();
    let tr = simulate_drive(&p, 0.0, &drive, 1e-4).unwrap();
    assert_eq!(tr.samples[0].memristance, p.r_off);
    assert!(tr.samples.windows(2).all(|w| w[1].memristance <= w[0].memristance));
    assert!(tr.last().unwrap().memristance < 0.5 * p.r_off);
}

#[test]
fn zero_drive_trace_keeps_every_model_still() {
    let flat = SignalTrace::new(vec![(0.0, 0.0), (0.05, 0.0)]).unwrap();
    for name in DeviceParams::BUILTIN_NAMES {
        let p = DeviceParams::builtin(name).unwrap();
        let (lo, hi) = p.state_range();
        let tr = simulate_drive(&p, 0.5 * (lo + hi), &flat, 1e-3).unwrap();
        let m0 = tr.samples[0].memristance;
        assert!(tr.samples.iter().all(|s| s.memristance == m0), "{name}");
    }
}
