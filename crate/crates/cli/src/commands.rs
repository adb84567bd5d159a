use std::path::PathBuf;

use anyhow::{anyhow, bail, Context, Result};
use num_complex::Complex64;
use serde_json::json;
use szl_core::counting::{h_zero_count, littlewood_count, zeta_zero_ordinates, Rectangle};
use szl_core::groups::{modular_geodesic_census, GroupDescriptor, GroupKind};
use szl_core::numerics::{riemann_zeta, Estimate};
use szl_core::predict::{
    comparison_residual, predict_hejhal_h, predict_nhor_deriv, predict_nver_deriv, predict_weyl, predict_weyl_new,
    ratio_vanishing, short_sum, weyl_discrepancy, AsymptoticExpansion, SurfaceProfile,
};
use szl_core::scattering::{h_closed_form, k_factor, phi_closed_form, ScatteringData};
use szl_core::selberg::{eta_logderiv, f_m, ZetaContext};
use szl_core::surface::{surface_data, SurfaceData, SurfaceOptions};

use crate::cache::cached;
use crate::config::RunConfig;
use crate::plot::{line_chart, Series};
use crate::report::Report;
use crate::{Cli, Command, CountTarget, EvalTarget, Law};

struct Env<'a> {
    cli: &'a Cli,
    cfg: &'a RunConfig,
    group: GroupDescriptor,
}

pub fn dispatch(cli: &Cli, cfg: &RunConfig) -> Result<Report> {
    let group: GroupDescriptor = cfg.group_id.parse()?;
    let env = Env { cli, cfg, group };
    let name = match &cli.command {
        Command::GroupInfo => "group-info",
        Command::Eval { .. } => "eval",
        Command::Count { .. } => "count",
        Command::Predict { .. } => "predict",
        Command::Psi => "psi",
    };
    let mut rep = Report::new(name, &env.group.id());
    rep.diagnostics.tolerances = json!(cfg.settings);
    match &cli.command {
        Command::GroupInfo => group_info(&env, &mut rep)?,
        Command::Eval { target } => eval(&env, *target, &mut rep)?,
        Command::Count { target } => count(&env, *target, &mut rep)?,
        Command::Predict { law } => predict(&env, *law, &mut rep)?,
        Command::Psi => psi(&env, &mut rep)?,
    }
    Ok(rep)
}

impl Env<'_> {
    fn surface_options(&self) -> SurfaceOptions {
        SurfaceOptions {
            c_max: self.cfg.c_max,
            m0_override: self.cfg.m0_override,
            compact_systole: self.cfg.systole,
            ..SurfaceOptions::default()
        }
    }

    fn surface(&self) -> Result<SurfaceData> {
        let opts = self.surface_options();
        let key = (self.group.id(), &opts);
        let (s, _) = cached(self.cfg.cache_dir.as_deref(), "surface", &key, || Ok(surface_data(&self.group, &opts)?))?;
        Ok(s)
    }

    fn context(&self, census_cutoff: f64) -> Result<ZetaContext> {
        if !self.group.is_modular() {
            bail!(szl_core::Error::UnsupportedGroup(format!("{}: geodesic census is available for psl2z only", self.group)));
        }
        let key = (self.group.id(), census_cutoff, self.cfg.series_cutoff, self.surface_options(), &self.cfg.settings);
        let (ctx, _) = cached(self.cfg.cache_dir.as_deref(), "zeta", &key, || {
            let surface = self.surface()?;
            let census = modular_geodesic_census(census_cutoff)?;
            Ok(ZetaContext::from_parts(surface, census, census_cutoff, self.cfg.series_cutoff, self.cfg.settings.clone())?)
        })?;
        Ok(ctx)
    }

    fn s(&self) -> Result<Complex64> {
        self.cli.s.ok_or_else(|| anyhow!("--s re,im is required"))
    }

    fn t(&self, default: f64) -> f64 {
        self.cli.t.unwrap_or(default)
    }

    fn k(&self) -> u32 {
        self.cli.k.unwrap_or(1)
    }

    fn write_plot(&self, rep: &mut Report, svg: String) -> Result<()> {
        let path = self.cli.plot_file.clone().unwrap_or_else(|| PathBuf::from(format!("szl-{}.svg", rep.command)));
        std::fs::write(&path, svg).with_context(|| format!("writing {}", path.display()))?;
        rep.note("plot", path.display().to_string());
        Ok(())
    }
}

fn scattering_cutoffs(rep: &mut Report, scat: &ScatteringData) {
    rep.cutoff("c_max", scat.c_max);
    rep.cutoff("ladder_source", scat.source);
    rep.cutoff("h_series_cutoff", scat.h.cutoff());
}

fn group_info(env: &Env, rep: &mut Report) -> Result<()> {
    let g = &env.group;
    let sd = env.surface()?;
    let sig = &g.signature;
    rep.out("signature", format!("({}; {:?}; {})", sig.genus, sig.elliptic_orders, sig.cusps), "", "catalog");
    rep.out("volume", sd.volume, "area", "exact formula");
    rep.out("n1", g.n1(), "cusps", "catalog");
    let inv = &sd.invariants;
    rep.out("systole_length", inv.systole_length, "length", if sd.systole.is_some() { "enumeration" } else { "input" });
    rep.out("m0", inv.systole_multiplicity, "classes", m0_provenance(&sd));
    if let Some(sys) = &sd.systole {
        rep.out("tau0_squared", sys.tau_sq.to_string(), "", "exact");
        rep.out("tau0", sys.tau, "", "enumeration");
        rep.out("exp_systole", sys.norm.to_string(), "", "exact");
        let w = &sys.witness;
        rep.out("systole_witness", format!("[{} {}; {} {}]/sqrt({})", w.a, w.b, w.c, w.d, w.e), "", "enumeration");
    }
    if let Some(scat) = &sd.scattering {
        rep.out("g1", scat.g1, "", "scattering ladder");
        rep.out("g2", scat.g2, "", "scattering ladder");
        rep.out("g_ratio_sq", scat.g_ratio_sq.to_string(), "", "exact");
        rep.out("d1", scat.d1(), "", "scattering ladder");
        scattering_cutoffs(rep, scat);
    }
    rep.out("trichotomy", format!("{:?}", inv.trichotomy), "", "exact comparison");
    rep.out("A", inv.big_a, "", "invariant");
    rep.out("log_A", inv.log_a, "", "invariant");
    rep.out("a", inv.a, "", "invariant");
    for k in 1..=4 {
        rep.out(&format!("a_{k}"), inv.a_k(k), "", "invariant");
    }
    Ok(())
}

fn m0_provenance(sd: &SurfaceData) -> &'static str {
    match sd.m0_source {
        szl_core::surface::M0Source::ClassCount => "class number",
        szl_core::surface::M0Source::BoxEstimate => "box estimate",
        szl_core::surface::M0Source::Override => "override",
    }
}

fn estimate(rep: &mut Report, name: &str, e: Estimate, provenance: &'static str) {
    rep.complex(name, e.value, provenance);
    rep.out("error", e.error, "", "estimate");
    rep.tail(name, e.error);
}

fn eval(env: &Env, target: EvalTarget, rep: &mut Report) -> Result<()> {
    let s = env.s()?;
    let g = &env.group;
    rep.input("target", format!("{target:?}"));
    rep.input("s", json!({"re": s.re, "im": s.im}));
    let has_closed = !matches!(g.kind, GroupKind::AbstractCompact) && !(g.kind == GroupKind::Gamma0Plus && g.level == 6);
    match target {
        EvalTarget::Phi | EvalTarget::H | EvalTarget::K => {
            let sd = env.surface()?;
            let scat = sd.scattering.as_ref().ok_or_else(|| anyhow!("{g}: compact surfaces have no scattering determinant"))?;
            scattering_cutoffs(rep, scat);
            let k = k_factor(scat, s)?;
            match target {
                EvalTarget::K => rep.complex("K", k, "closed form"),
                _ if has_closed => {
                    let v = if target == EvalTarget::Phi { phi_closed_form(g, s)? } else { h_closed_form(g, s)? };
                    rep.complex(if target == EvalTarget::Phi { "phi" } else { "H" }, v, "closed form");
                }
                _ => {
                    let h = scat.h.evaluate(s, env.cfg.settings.tail_tol)?;
                    if target == EvalTarget::Phi {
                        estimate(rep, "phi", Estimate { value: k * h.value, error: k.norm() * h.error }, "series");
                    } else {
                        estimate(rep, "H", h, "series");
                    }
                }
            }
        }
        EvalTarget::EtaLogderiv => rep.complex("eta_logderiv", eta_logderiv(g, s)?, "closed form"),
        EvalTarget::F => rep.complex("f", f_m(g, s)?, "closed form"),
        EvalTarget::Z | EvalTarget::D | EvalTarget::ZhDeriv | EvalTarget::XMk => {
            let ctx = env.context(env.cfg.census_cutoff)?;
            rep.cutoff("census_cutoff", ctx.census_cutoff);
            rep.cutoff("d1_cutoff", ctx.d1.cutoff());
            scattering_cutoffs(rep, ctx.scat());
            rep.note("sigma0", ctx.sigma0);
            let k = env.k();
            match target {
                EvalTarget::Z => estimate(rep, "Z", ctx.selberg_z(s)?, "census"),
                EvalTarget::D => estimate(rep, "D", ctx.d_m(s)?, "census"),
                EvalTarget::ZhDeriv => {
                    rep.input("k", k);
                    estimate(rep, "zh_deriv", ctx.zh_and_derivatives(k, s)?, "census and series")
                }
                _ => {
                    rep.input("k", k);
                    estimate(rep, "x_mk", ctx.x_mk(k, s)?, "census and series")
                }
            }
        }
    }
    Ok(())
}

fn count(env: &Env, target: CountTarget, rep: &mut Report) -> Result<()> {
    let st = &env.cfg.settings;
    rep.input("target", format!("{target:?}"));
    match target {
        CountTarget::H => {
            let t = env.t(15.0);
            rep.input("T", t);
            let r = h_zero_count(&env.group, t, st)?;
            rep.out("n_ver", r.n_ver, "zeros", "argument principle");
            rep.out("n_hor", r.n_hor, "", "Littlewood moment");
            rep.out("height", r.height, "", "contour");
            rep.out("poles_inside", r.poles_inside, "poles", "Hardy Z scan");
            rep.out("residual", r.contour.residual, "", "contour");
            rep.out("mesh_points", r.contour.mesh_points, "", "contour");
            rep.cutoff("rectangle", r.contour.rect);
            let sd = env.surface()?;
            let p = SurfaceProfile::from(&sd);
            let hej = predict_hejhal_h(&p);
            rep.out("hejhal_prediction", hej.eval(r.height), "", "predictor");
            if env.group.is_modular() {
                let zeros = zeta_zero_ordinates(2.0 * r.height)?;
                rep.out("quarter_zeta_zero_count", zeros.len() as f64 / 4.0, "", "Hardy Z sign changes");
            }
            if env.cfg.plot {
                let grid: Vec<f64> = (1..=24).map(|i| 1.0 + (t - 1.0) * i as f64 / 24.0).collect();
                let mut counted = Vec::new();
                for &h in &grid {
                    counted.push((h, h_zero_count(&env.group, h, st)?.n_hor));
                }
                let pred = grid.iter().map(|&h| (h, hej.eval(h))).collect();
                let svg = line_chart(
                    &format!("N_hor(T; H) for {}", env.group),
                    "T",
                    "N_hor",
                    &[
                        Series { label: "counted", points: counted, color: "#1f77b4" },
                        Series { label: "predictor", points: pred, color: "#d62728" },
                    ],
                );
                env.write_plot(rep, svg)?;
            }
        }
        CountTarget::RiemannZeta => {
            let t = env.t(32.0);
            rep.input("T", t);
            let rect = Rectangle::new(-1.0, 2.0, 10.0, t)?;
            let r = littlewood_count(riemann_zeta, &rect, st)?;
            let oracle = zeta_zero_ordinates(t)?.into_iter().filter(|g| *g > 10.0).count();
            contour_outputs(rep, &r);
            rep.out("sign_change_count", oracle, "zeros", "Hardy Z sign changes");
        }
        CountTarget::Test => {
            let rect = Rectangle::new(0.0, 3.0, 0.0, 3.0)?;
            let f = |z: Complex64| Ok((z - Complex64::new(1.0, 1.0)) * (z - Complex64::new(1.5, 2.0)));
            let r = littlewood_count(f, &rect, st)?;
            rep.input("function", "(z-(1+i))(z-(1.5+2i))");
            contour_outputs(rep, &r);
        }
    }
    Ok(())
}

fn contour_outputs(rep: &mut Report, r: &szl_core::counting::ContourResult) {
    rep.cutoff("rectangle", r.rect);
    rep.out("net_count", r.net_count, "zeros", "argument principle");
    rep.out("horizontal_moment", r.horizontal_moment, "", "Littlewood moment");
    rep.out("residual", r.residual, "", "contour");
    rep.out("mesh_points", r.mesh_points, "", "contour");
}

fn profile(env: &Env) -> Result<SurfaceProfile> {
    Ok(SurfaceProfile::from(&env.surface()?))
}

fn expansion(rep: &mut Report, name: &str, e: &AsymptoticExpansion, t: f64) {
    rep.out(&format!("{name}.T2"), e.coeff_t2, "", "predictor");
    rep.out(&format!("{name}.TlogT"), e.coeff_tlogt, "", "predictor");
    rep.out(&format!("{name}.T"), e.coeff_t, "", "predictor");
    rep.out(&format!("{name}.error_class"), e.error_class, "", "predictor");
    rep.out(&format!("{name}.value_at_T"), e.eval(t), "", "predictor");
}

fn predict(env: &Env, law: Law, rep: &mut Report) -> Result<()> {
    let p = profile(env)?;
    let t = env.t(100.0);
    let k = env.k();
    rep.input("law", format!("{law:?}"));
    rep.input("T", t);
    rep.input("k", k);
    rep.cutoff("m0", p.m0);
    let mut curves: Vec<(&str, AsymptoticExpansion)> = Vec::new();
    match law {
        Law::Nver => curves.push(("nver", predict_nver_deriv(&p, k)?)),
        Law::Nhor => curves.push(("nhor", predict_nhor_deriv(&p, k)?)),
        Law::Weyl => curves.push(("weyl", predict_weyl(&p))),
        Law::WeylNew => {
            curves.push(("weyl_new", predict_weyl_new(&p)));
            rep.out("discrepancy", weyl_discrepancy(&p), "", "predictor");
        }
        Law::HejhalH => curves.push(("hejhal_h", predict_hejhal_h(&p))),
        Law::Comparison => {
            let (a, b) = comparison_residual(&p, k)?;
            rep.out("res_TlogT", a, "", "predictor");
            rep.out("res_T", b, "", "predictor");
        }
        Law::ShortSum => {
            let u = env.cli.u.ok_or_else(|| anyhow!("--U is required for short_sum"))?;
            rep.input("U", u);
            rep.out("short_sum", short_sum(&p, t, u)?, "", "predictor");
        }
        Law::Ratio => {
            rep.out("ratio", ratio_vanishing(&p, k, t)?, "", "predictor");
            curves.push(("nver", predict_nver_deriv(&p, k)?));
            curves.push(("nhor", predict_nhor_deriv(&p, k)?));
        }
    }
    for (name, e) in &curves {
        expansion(rep, name, e, t);
    }
    if env.cfg.plot && !curves.is_empty() {
        let colors = ["#1f77b4", "#d62728"];
        let series: Vec<Series> = curves
            .iter()
            .zip(colors)
            .map(|((name, e), color)| Series {
                label: name,
                points: (1..=100).map(|i| 2.0 + (t - 2.0) * i as f64 / 100.0).map(|x| (x, e.eval(x))).collect(),
                color,
            })
            .collect();
        let svg = line_chart(&format!("predictors for {}", env.group), "T", "count", &series);
        env.write_plot(rep, svg)?;
    }
    Ok(())
}

fn psi(env: &Env, rep: &mut Report) -> Result<()> {
    let x = env.cli.x.ok_or_else(|| anyhow!("--x is required"))?;
    if !(x > 0.0) {
        bail!("--x must be positive");
    }
    rep.input("x", x);
    let cutoff = env.cfg.census_cutoff.max(x).max(10.0);
    let ctx = env.context(cutoff)?;
    rep.cutoff("census_cutoff", ctx.census_cutoff);
    let v = ctx.psi_m(x)?;
    rep.out("psi", v, "", "census");
    rep.out("psi_over_x", v / x, "", "census");
    let below: Vec<_> = ctx.census.iter().filter(|c| c.norm <= x).collect();
    rep.out("norm_groups", below.len(), "", "census");
    rep.out("classes", below.iter().map(|c| c.multiplicity).sum::<u64>(), "classes", "census");
    rep.out(
        "primitive_classes",
        below.iter().filter(|c| c.primitive).map(|c| c.multiplicity).sum::<u64>(),
        "classes",
        "census",
    );
    if env.cfg.plot {
        let lo = 7f64.ln();
        let pts: Vec<(f64, f64)> = (0..=200)
            .map(|i| (lo + (x.ln() - lo) * i as f64 / 200.0).exp())
            .map(|y| (y.log10(), ctx.psi_m(y).map(|p| p / y).unwrap_or(f64::NAN)))
            .collect();
        let one = vec![(pts[0].0, 1.0), (x.log10(), 1.0)];
        let svg = line_chart(
            "psi(x)/x for psl2z",
            "log10 x",
            "psi(x)/x",
            &[
                Series { label: "psi(x)/x", points: pts, color: "#1f77b4" },
                Series { label: "1", points: one, color: "#888888" },
            ],
        );
        env.write_plot(rep, svg)?;
    }
    Ok(())
}
