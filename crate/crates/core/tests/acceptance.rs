//! Acceptance criteria, one PASS/FAIL line each.
//!
//! Runs without the libtest harness so the lines always reach stdout. The
//! process fails when any check fails except the recorded unattainable clause
//! of criterion 1, whose failure pattern is itself checked.

use std::cmp::Ordering;
use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::Instant;

use num_integer::Integer;
use rand::{rngs::StdRng, Rng, SeedableRng};
use szl_core::algebraic::{QuadSurd, Rational};
use szl_core::counting::{h_zero_count, zeta_zero_ordinates};
use szl_core::groups::{GroupDescriptor, Trichotomy};
use szl_core::numerics::{cauchy_derivative, EvalSettings, C64};
use szl_core::predict::{
    comparison_residual, predict_hejhal_h, predict_nhor_deriv, predict_nver_deriv, SurfaceProfile,
};
use szl_core::scattering::{decompose, default_c_max, k_factor, phi_closed_form, scattering_series, LadderSource};
use szl_core::selberg::{eta_logderiv, ZetaContext, ZetaOptions};
use szl_core::surface::{surface_data, SurfaceOptions};

struct Outcome {
    pass: bool,
    detail: String,
}

fn ok(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn g(id: &str) -> GroupDescriptor {
    id.parse().unwrap()
}

fn rat(n: i128, d: i128) -> Rational {
    Rational::new(n, d)
}

const GAMMA0_LEVELS: [u64; 7] = [1, 2, 3, 5, 6, 7, 10];
/// Levels whose shortest geodesic does not have trace 3.
const TRACE3_UNATTAINABLE: [u64; 5] = [2, 3, 6, 7, 10];

/// Returns the outcome and the levels failing the "minimal trace 3" clause.
fn criterion_1() -> (Outcome, Vec<u64>) {
    let mut notes = Vec::new();
    let mut pass = true;
    let mut trace_fail = Vec::new();
    let mut slowest = 0.0f64;
    let golden_sq = QuadSurd::new(rat(7, 2), rat(3, 2), 5);
    for n in GAMMA0_LEVELS {
        let t0 = Instant::now();
        let grp = g(&format!("gamma0:{n}"));
        let sd = surface_data(&grp, &SurfaceOptions::default()).unwrap();
        let scat = sd.scattering.as_ref().unwrap();
        let sys = sd.systole.as_ref().unwrap();
        slowest = slowest.max(t0.elapsed().as_secs_f64());
        let ratio_ok = scat.g_ratio_sq == rat(4, 1);
        let trace_ok = sys.tau_sq == rat(9, 1) && sys.norm == golden_sq;
        let above = sys.norm.cmp_rational(&scat.g_ratio_sq) == Ordering::Greater;
        if !trace_ok {
            trace_fail.push(n);
        }
        pass &= ratio_ok && trace_ok && above;
        notes.push(format!("N={n}: tau0^2={} e^l0={}", sys.tau_sq, sys.norm));
        if !(ratio_ok && above) {
            notes.push(format!("N={n}: ratio or trichotomy wrong"));
        }
    }
    for (id, ratio, norm, ord) in [
        ("gamma0plus:5", rat(4, 1), QuadSurd::new(rat(3, 2), rat(1, 2), 5), Ordering::Less),
        ("gamma0plus:6", rat(2, 1), QuadSurd::new(rat(2, 1), rat(1, 1), 3), Ordering::Greater),
    ] {
        let t0 = Instant::now();
        let sd = surface_data(&g(id), &SurfaceOptions::default()).unwrap();
        slowest = slowest.max(t0.elapsed().as_secs_f64());
        let scat = sd.scattering.as_ref().unwrap();
        let sys = sd.systole.as_ref().unwrap();
        let good = scat.g_ratio_sq == ratio && sys.norm == norm && sys.norm.cmp_rational(&ratio) == ord;
        pass &= good;
        notes.push(format!("{id}: ratio={} e^l0={} {}", scat.g_ratio_sq, sys.norm, if good { "ok" } else { "WRONG" }));
    }
    pass &= slowest < 10.0;
    notes.push(format!("slowest group {slowest:.2}s"));
    (ok(pass, notes.join("; ")), trace_fail)
}

fn closed_form_groups() -> Vec<GroupDescriptor> {
    let mut v: Vec<_> = GAMMA0_LEVELS.iter().map(|n| g(&format!("gamma0:{n}"))).collect();
    v.push(g("gamma0plus:5"));
    v
}

fn criterion_2() -> Outcome {
    let t0 = Instant::now();
    let mut worst_fe: f64 = 0.0;
    let mut worst_unit: f64 = 0.0;
    let mut worst_eta: f64 = 0.0;
    let sigmas = [-0.6, 0.15, 0.4, 0.7, 1.6];
    let ts = [0.5, 2.0, 5.5, 11.0, 23.0];
    let mut rng = StdRng::seed_from_u64(7);
    let etas: Vec<C64> = (0..10).map(|_| c(rng.gen_range(-2.0..3.0), rng.gen_range(-30.0..30.0))).collect();
    for grp in closed_form_groups() {
        for &x in &sigmas {
            for &t in &ts {
                let s = c(x, t);
                let p = phi_closed_form(&grp, s).unwrap() * phi_closed_form(&grp, 1.0 - s).unwrap();
                worst_fe = worst_fe.max((p - 1.0).norm());
            }
        }
        for t in [1.0, 5.0, 10.0] {
            worst_unit = worst_unit.max((phi_closed_form(&grp, c(0.5, t)).unwrap().norm() - 1.0).abs());
        }
    }
    for grp in closed_form_groups().into_iter().chain([g("gamma0plus:6"), g("compact:2:3,3")]) {
        for &s in &etas {
            let a = eta_logderiv(&grp, s).unwrap();
            let b = eta_logderiv(&grp, 1.0 - s).unwrap();
            worst_eta = worst_eta.max((a - b).norm() / (1.0 + a.norm()));
        }
    }
    let secs = t0.elapsed().as_secs_f64();
    ok(
        worst_fe < 1e-8 && worst_unit < 1e-8 && worst_eta < 1e-9 && secs < 5.0,
        format!("max|phi(s)phi(1-s)-1|={worst_fe:.1e} max||phi(1/2+it)|-1|={worst_unit:.1e} max eta asym={worst_eta:.1e} in {secs:.2}s"),
    )
}

fn totient(n: u64) -> u64 {
    (1..=n).filter(|k| k.gcd(&n) == 1).count() as u64
}

fn criterion_3() -> Outcome {
    let mut worst: f64 = 0.0;
    for id in ["psl2z", "gamma0plus:5"] {
        let grp = g(id);
        let sd = decompose(&grp, LadderSource::Series, default_c_max(&grp)).unwrap();
        for t in [0.0, 1.0, 4.0, 9.5, 20.0] {
            let s = c(3.0, t);
            let series = k_factor(&sd, s).unwrap() * sd.h.evaluate(s, 0.05).unwrap().value;
            let closed = phi_closed_form(&grp, s).unwrap();
            worst = worst.max((series - closed).norm() / closed.norm());
        }
    }
    let terms = scattering_series(&GroupDescriptor::modular(), 50.0).unwrap();
    let totients = terms.len() == 50
        && terms.iter().enumerate().all(|(i, t)| t.c_sq == rat(((i + 1) * (i + 1)) as i128, 1) && t.count == totient(i as u64 + 1));
    ok(worst < 1e-6 && totients, format!("max rel diff at Re s=3: {worst:.1e}; S(c)=phi(c) for c<=50: {totients}"))
}

fn modular_context(cutoff: f64) -> ZetaContext {
    ZetaContext::build(&GroupDescriptor::modular(), &ZetaOptions { census_cutoff: cutoff, ..Default::default() }).unwrap()
}

fn criterion_4(ctx: &ZetaContext) -> Outcome {
    let t0 = Instant::now();
    let mut pass = true;
    let mut notes = Vec::new();
    for k in 1..=3 {
        let d = |x: f64| (ctx.x_mk(k, c(x, 0.0)).unwrap().value - 1.0).norm();
        let (d15, d20, d25) = (d(15.0), d(20.0), d(25.0));
        pass &= d20 < 0.01 && d25 < d15;
        notes.push(format!("k={k}: |X-1| {d15:.1e}/{d20:.1e}/{d25:.1e} at 15/20/25"));
    }
    let secs = t0.elapsed().as_secs_f64();
    pass &= secs < 30.0;
    notes.push(format!("{secs:.2}s"));
    ok(pass, notes.join("; "))
}

fn criterion_5(ctx: &ZetaContext) -> Outcome {
    let st = EvalSettings::default();
    let s = c(8.0, 0.0);
    let zh = |w: C64| Ok(ctx.zh_and_derivatives(0, w)?.value);
    let mut worst: f64 = 0.0;
    for k in 1..=3 {
        let series = ctx.zh_and_derivatives(k, s).unwrap().value;
        let direct = cauchy_derivative(zh, s, k, st.cauchy_radius, &st).unwrap().value;
        worst = worst.max((series - direct).norm() / direct.norm());
    }
    ok(worst < 1e-6, format!("max rel diff k<=3 at s=8: {worst:.1e}"))
}

fn criterion_6() -> Outcome {
    let t0 = Instant::now();
    let ctx = modular_context(1e6);
    let errs: Vec<f64> = [1e3, 1e4, 1e5, 1e6].iter().map(|&x| (ctx.psi_m(x).unwrap() / x - 1.0).abs()).collect();
    let secs = t0.elapsed().as_secs_f64();
    let pass = errs[2] < 0.2 && errs.windows(2).all(|w| w[1] < w[0]) && secs < 60.0;
    let shown: Vec<String> = errs.iter().map(|e| format!("{e:.2e}")).collect();
    ok(pass, format!("|psi(x)/x-1| = [{}] for x=1e3..1e6 in {secs:.2}s", shown.join(", ")))
}

fn criterion_7() -> Outcome {
    let t0 = Instant::now();
    let grp = GroupDescriptor::modular();
    let r = h_zero_count(&grp, 15.0, &EvalSettings::default()).unwrap();
    let p = SurfaceProfile::from(&surface_data(&grp, &SurfaceOptions::default()).unwrap());
    let pred = predict_hejhal_h(&p).eval(r.height);
    let quarter = zeta_zero_ordinates(2.0 * r.height).unwrap().len() as f64 / 4.0;
    let rel = (r.n_hor - pred).abs() / r.n_hor.abs();
    let secs = t0.elapsed().as_secs_f64();
    ok(
        rel < 0.35 && (r.n_hor - quarter).abs() < 1e-5 && secs < 60.0,
        format!("N_hor={:.6} predictor={pred:.4} (rel {rel:.3}), zeta-zero quarter count={quarter} in {secs:.2}s", r.n_hor),
    )
}

fn criterion_8() -> Outcome {
    let p5 = SurfaceProfile::from(&surface_data(&g("gamma0plus:5"), &SurfaceOptions::default()).unwrap());
    let mut worst: f64 = 0.0;
    let mut check = |p: &SurfaceProfile| {
        for k in 1..=3 {
            let (a, b) = comparison_residual(p, k).unwrap();
            worst = worst.max(a.abs()).max(b.abs());
        }
    };
    check(&p5);
    let mut rng = StdRng::seed_from_u64(2024);
    for _ in 0..20 {
        let ell0: f64 = rng.gen_range(0.1..3.0);
        let m0 = rng.gen_range(1..5);
        let twin = SurfaceProfile::compact(rng.gen_range(0.5..60.0), ell0, m0).unwrap();
        let cusped = SurfaceProfile {
            n1: rng.gen_range(1..7),
            g1: rng.gen_range(1.0..40.0),
            d1_abs: rng.gen_range(0.05..20.0),
            trichotomy: Trichotomy::GeodesicSmaller,
            ..twin
        };
        check(&cusped);
    }
    ok(worst < 1e-12, format!("max |residual| over Gamma0(5)+ and 20 random twins, k=1..3: {worst:.1e}"))
}

fn criterion_9() -> Outcome {
    let mut worst: f64 = 0.0;
    for (vol, ell0, m0) in [(4.0 * PI, 1.0, 1), (8.0 * PI, 0.37, 3), (2.0 * PI / 3.0, 2.2, 2)] {
        let p = SurfaceProfile::compact(vol, ell0, m0).unwrap();
        let v = predict_nver_deriv(&p, 1).unwrap();
        let h = predict_nhor_deriv(&p, 1).unwrap();
        let ver_t = -ell0 / (2.0 * PI);
        let hor_t = (0.5 * ell0 + (vol * (1.0 - (-ell0).exp()) / (m0 as f64 * ell0)).ln() - 1.0) / (2.0 * PI);
        for d in [
            v.coeff_t2 - vol / (4.0 * PI),
            v.coeff_tlogt,
            v.coeff_t - ver_t,
            h.coeff_t2,
            h.coeff_tlogt - 1.0 / (2.0 * PI),
            h.coeff_t - hor_t,
        ] {
            worst = worst.max(d.abs());
        }
    }
    ok(worst < 1e-14, format!("max coefficient difference {worst:.1e}"))
}

fn criterion_10(ctx: &ZetaContext) -> Outcome {
    let vol = PI / 3.0;
    let mut notes = Vec::new();
    let mut pass = true;
    for t in [100.0, 200.0] {
        let r = ctx.nonvanishing_probe(-1.0, t).unwrap() / t;
        pass &= (r / vol - 1.0).abs() < 0.2;
        notes.push(format!("probe/t at t={t}: {r:.4}"));
    }
    let min = (1..=10).map(|i| ctx.nonvanishing_probe(-1.0, 20.0 * i as f64).unwrap()).fold(f64::INFINITY, f64::min);
    pass &= min > 0.0;
    notes.push(format!("min over t=20..200: {min:.3}"));
    ok(pass, notes.join("; "))
}

fn main() -> ExitCode {
    let mut unexpected = 0;
    let (c1, trace_fail) = criterion_1();
    println!("acceptance criterion  1: {} | {}", if c1.pass { "PASS" } else { "FAIL" }, c1.detail);
    if !c1.pass {
        if trace_fail == TRACE3_UNATTAINABLE {
            println!(
                "    known unattainable: the shortest geodesic of Gamma0(N) has trace 3 only for N in {{1, 5}}; \
                 every other clause of criterion 1 holds"
            );
        } else {
            unexpected += 1;
        }
    }
    let mut report = |n: u32, o: Outcome| {
        println!("acceptance criterion {n:>2}: {} | {}", if o.pass { "PASS" } else { "FAIL" }, o.detail);
        if !o.pass {
            unexpected += 1;
        }
    };
    report(2, criterion_2());
    report(3, criterion_3());
    let t0 = Instant::now();
    let ctx = modular_context(1e4);
    println!("    modular context (census X=1e4) built in {:.2}s", t0.elapsed().as_secs_f64());
    report(4, criterion_4(&ctx));
    report(5, criterion_5(&ctx));
    report(6, criterion_6());
    report(7, criterion_7());
    report(8, criterion_8());
    report(9, criterion_9());
    report(10, criterion_10(&ctx));
    drop(report);
    if unexpected > 0 {
        println!("{unexpected} unexpected acceptance failure(s)");
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}
