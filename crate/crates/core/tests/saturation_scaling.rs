use num_complex::Complex64;
use photoref::nls::propagate_nls;
use photoref::soliton::{bright_profile, identity_residuals, residuals_from, SaturationScaling, ShootingConfig, SolitaryWave};
use photoref::{ComplexField, GridSpec, ModelParams, Sign};

/// The scaled bright wave is stationary under the NLS with saturation `eps`.
#[test]
fn scaled_bright_wave_is_stationary() {
    let eps = 2.5f64;
    let u_m = 0.8;
    let root = eps.sqrt();
    let x_max = 60.0;
    let n = 1024;
    let w = bright_profile(root * u_m, x_max / root, n).unwrap();
    let g = GridSpec::line(n, 2.0 * x_max).unwrap();
    let u0 = ComplexField::new(g, w.u.iter().map(|&v| Complex64::new(v / root, 0.0)).collect()).unwrap();

    let sc = SaturationScaling::new(eps).unwrap();
    let omega = sc.bright_frequency(u_m).unwrap();
    assert!((omega - w.omega / eps).abs() < 1e-15);
    let (e, q) = identity_residuals(&u0, omega, Sign::Focusing, 1);
    // The identities above are for eps = 1; the scaled wave must violate them
    // while the unit-problem wave satisfies them.
    assert!(e.abs() > 1e-3 || q.abs() > 1e-3);
    let (e1, q1) = identity_residuals(&w, w.omega, Sign::Focusing, 1);
    assert!(e1.abs() < 1e-10 && q1.abs() < 1e-10);

    let p = ModelParams::new(Sign::Focusing).with_saturation(eps);
    let run = propagate_nls(&u0, &p, 1.0, 1e-3, 1000).unwrap();
    let dev = run
        .field
        .values()
        .iter()
        .zip(u0.values())
        .map(|(a, b)| (a.norm() - b.norm()).abs())
        .fold(0.0, f64::max);
    assert!(dev < 1e-6, "{dev}");
    // The phase advances at the predicted frequency.
    let c = run.field.values()[n / 2] / u0.values()[n / 2];
    assert!((c.arg() - omega).abs() < 1e-6, "{} vs {omega}", c.arg());
}

#[test]
fn scaled_radial_profile_satisfies_the_eps_identities() {
    let eps = 0.5f64;
    let omega = 1.0;
    let sc = SaturationScaling::new(eps).unwrap();
    assert_eq!(sc.window(Sign::Focusing, omega, 2), photoref::soliton::WindowClass::Possible);
    let s = sc.radial(2, omega, ShootingConfig::default()).unwrap();
    assert!(s.certified());
    // -Lap U + omega U = U^3/(1 + eps U^2) gives, in d = 2,
    // int |grad U|^2 + omega int U^2 = int U^4/(1 + eps U^2) and
    // omega int U^2 = int (eps U^2 - ln(1 + eps U^2)) / eps^2.
    let h = s.r[1] - s.r[0];
    let w = |f: &dyn Fn(f64, f64) -> f64| -> f64 {
        let vals: Vec<f64> = s.r.iter().zip(s.u.iter().zip(&s.du)).map(|(&r, (&u, &du))| r * f(u, du)).collect();
        simpson(h, &vals)
    };
    let grad = w(&|_, du| du * du);
    let mass = w(&|u, _| u * u);
    let sat = w(&|u, _| u.powi(4) / (1.0 + eps * u * u));
    let logx = w(&|u, _| (eps * u * u - (eps * u * u).ln_1p()) / (eps * eps));
    let norm = grad + mass;
    let e = (grad + omega * mass - sat) / norm;
    let q = (omega * mass - logx) / norm;
    assert!(e.abs() < 1e-6 && q.abs() < 1e-6, "{e} {q}");
    // The unit-problem integrals do not balance at eps != 1.
    let i = s.identity_integrals();
    let (e1, _) = residuals_from(&i, omega, Sign::Focusing, 2);
    assert!(e1.abs() > 1e-2);
}

fn simpson(h: f64, f: &[f64]) -> f64 {
    let n = f.len() - (f.len() + 1) % 2;
    let mut acc = f[0] + f[n - 1];
    for (k, v) in f.iter().enumerate().take(n - 1).skip(1) {
        acc += if k % 2 == 1 { 4.0 * v } else { 2.0 * v };
    }
    acc * h / 3.0 + if n < f.len() { 0.5 * h * (f[n - 1] + f[n]) } else { 0.0 }
}
