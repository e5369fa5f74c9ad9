use mtdirac::conservation::{component_masses, QuadratureSpec};
use mtdirac::geometry::classify;
use mtdirac::interaction::{single_time_slice, wavepacket_scenario, SliceGrid, WavepacketParams};
use mtdirac::scenario::config::ScenarioConfig;
use mtdirac::scenario::{Half, PhaseFunction, RawBoundary};
use mtdirac::{Configuration, Scenario, WaveFunction};
use std::sync::Arc;

const PACKET_JSON: &str = r#"{
  "initial": {
    "g2": {
      "omega1": {
        "preset": "product",
        "params": {
          "first":  { "shape": "smooth_bump", "lo": -1.5, "hi": -0.25, "normalize": true },
          "second": { "shape": "smooth_bump", "lo": 0.25, "hi": 1.5, "normalize": true }
        },
        "support": [[-1.5, -0.25], [0.25, 1.5]]
      }
    }
  },
  "phase": { "theta1": { "preset": "linear", "offset": 0.3, "dt": 0.8, "dz": -0.4 } }
}"#;

fn packet() -> WavepacketParams {
    WavepacketParams::smooth(-1.5, -0.25, 0.25, 1.5, PhaseFunction::Linear { offset: 0.3, dt: 0.8, dz: -0.4 })
}

fn grid_configs() -> impl Iterator<Item = Configuration> {
    (0..25).flat_map(|i| {
        (0..25).map(move |j| {
            let t = -1.0 + 0.1 * i as f64;
            Configuration::new(t, -2.0 + 0.17 * j as f64, 0.6 * t, 1.9 - 0.15 * j as f64)
        })
    })
}

#[test]
fn config_file_builds_the_packet() {
    let from_file = ScenarioConfig::from_json(PACKET_JSON).unwrap().build().unwrap();
    let direct = wavepacket_scenario(&packet()).unwrap();
    let mut checked = 0;
    for c in grid_configs().filter(|c| classify(c, 0.0).is_domain()) {
        let a = from_file.evaluate(&c).unwrap();
        let b = direct.evaluate(&c).unwrap();
        assert!(a.max_abs_diff(&b) <= 1e-15, "{c:?}");
        checked += 1;
    }
    assert!(checked > 100);
}

#[test]
fn raw_boundary_reproduces_phase_rule() {
    let s = wavepacket_scenario(&packet()).unwrap();
    let (a, b) = (s.clone(), s.clone());
    let mut raw = RawBoundary::zero();
    raw.h1_plus = Arc::new(move |t, z| a.h1_plus(t, z));
    raw.h1_minus = Arc::new(move |t, z| b.h1_minus(t, z));
    let r = Scenario::with_raw_boundary(s.initial.clone(), raw);
    for c in grid_configs().filter(|c| classify(c, 0.0).is_domain()) {
        assert_eq!(r.evaluate(&c).unwrap(), s.evaluate(&c).unwrap());
    }
    assert!(r.phase().is_none());
    assert_eq!(r.initial.g(Half::Omega1, 2, -1.0, 1.0), s.initial.g(Half::Omega1, 2, -1.0, 1.0));
}

#[test]
fn slice_sums_agree_with_quadrature() {
    let p = packet();
    let s = wavepacket_scenario(&p).unwrap();
    let q = QuadratureSpec::default();
    // before contact the integrand is smooth and the midpoint sum is spectrally accurate
    let grid = SliceGrid::covering(&s, 0.1, 256).unwrap();
    let riemann = single_time_slice(&s, 0.1, grid).unwrap().component_masses();
    let gauss = component_masses(&s, 0.1, &q).unwrap();
    for k in 0..4 {
        assert!((riemann[k] - gauss[k]).abs() <= 1e-9, "{k}: {} vs {}", riemann[k], gauss[k]);
    }
    // during the collision the diagonal cut limits the sum to first order
    let t = 0.5 * (p.contact_time() + p.swap_time());
    let grid = SliceGrid::covering(&s, t, 256).unwrap();
    let riemann = single_time_slice(&s, t, grid).unwrap().component_masses();
    let gauss = component_masses(&s, t, &q).unwrap();
    let total: f64 = gauss.iter().sum();
    assert!((total - 1.0).abs() < 1e-10);
    for k in 0..4 {
        assert!((riemann[k] - gauss[k]).abs() <= 2e-2, "{k}: {} vs {}", riemann[k], gauss[k]);
    }
}
