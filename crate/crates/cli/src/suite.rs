//! The verification suite: one group of checks per acceptance criterion.

use lelong_core::catalog::{catalog, CatalogEntry, Iota, Profile};
use lelong_core::exponent::{bounds_report, compact_infimum, integrability_exponent, sublevel_volume, tail_exponent, CompactRegion};
use lelong_core::integrate::{ball_current_mass_with, Coefficient, MassRoute};
use lelong_core::lelong::{
    calibrate_kappa, function_lelong_number, geometric_grid, hessian_atom, lelong_function, lelong_jensen, lelong_map,
    lelong_number, mean_value_ratios, negative_current_check, sup_growth, usc_spot_check, NuValue, DEFAULT_POINTS,
    DEFAULT_RMAX, DEFAULT_RMIN,
};
use lelong_core::{MCConfig, ModelFunction, Point, Result, Setting, SimpleCurrent};
use rayon::prelude::*;

use crate::config::{RunConfig, Tolerances};
use crate::report::{CheckResult, Report, Status};

/// Checks known to fail because the stated bound is false for `T0`.
pub const KNOWN_FAILURES: [&str; 1] = ["c06-bound-t0"];

struct Ctx {
    st: Setting,
    mc: MCConfig,
    tol: Tolerances,
    kappa: f64,
    entries: Vec<CatalogEntry>,
}

impl Ctx {
    fn n(&self) -> usize {
        self.st.n()
    }

    fn origin(&self) -> Point {
        Point::origin(self.n())
    }

    fn e1(&self, x: f64) -> Point {
        let mut r = vec![0.0; 2 * self.n()];
        r[0] = x;
        Point::from_reals(&r).expect("finite coordinates")
    }

    fn fund(&self) -> ModelFunction {
        ModelFunction::fundamental(&self.st, self.origin())
    }

    fn entry(&self, name: &str) -> Option<&CatalogEntry> {
        self.entries.iter().find(|e| e.name == name)
    }

    fn msh_entries(&self) -> impl Iterator<Item = &CatalogEntry> {
        self.entries.iter().filter(|e| e.facts.msh_max_order >= self.st.m())
    }

    /// `(dd^c phi_m~)^{m-1}` as a factor list.
    fn fund_factors(&self) -> Vec<(ModelFunction, usize)> {
        match self.st.m() - 1 {
            0 => vec![],
            e => vec![(self.fund(), e)],
        }
    }

    fn t0(&self) -> Result<SimpleCurrent> {
        SimpleCurrent::new(Coefficient::Function(self.fund()), self.fund_factors(), 0)
    }

    /// `(|z|^2 - 1)(dd^c phi_m~)^{m-1}`.
    fn mild(&self) -> Result<SimpleCurrent> {
        let c = ModelFunction::radial(self.origin(), Profile::Affine { c0: -1.0, c1: 1.0 })?;
        SimpleCurrent::new(Coefficient::Function(c), self.fund_factors(), 0)
    }
}

fn nu_text(nu: NuValue) -> String {
    match nu {
        NuValue::Value(v) => format!("{v:.6e}"),
        NuValue::DoesNotConverge => "does-not-converge".into(),
    }
}

fn c01(cx: &Ctx) -> Result<Vec<CheckResult>> {
    let n = cx.n();
    let t = SimpleCurrent::new(Coefficient::Unit, vec![(ModelFunction::quadratic(n), 1)], n - 1)?;
    let (mut rel, mut z) = (0.0f64, 0.0f64);
    let mut diag = Vec::new();
    for r in [0.1f64, 0.5, 1.0] {
        let exact = r.powi(2 * n as i32);
        let a = ball_current_mass_with(&t, &cx.origin(), r, &cx.mc, MassRoute::Auto)?;
        let b = ball_current_mass_with(&t, &cx.origin(), r, &cx.mc, MassRoute::MonteCarlo)?;
        rel = rel.max((a.value - exact).abs() / exact);
        // a constant density has zero sample variance; compare at rounding level then
        z = z.max((b.value - exact).abs() / b.stderr.max(1e-12 * exact));
        diag.push(format!("r={r}: radial {:.12e}, mc {:.6e}+-{:.1e}", a.value, b.value, b.stderr));
    }
    let claim = "ball mass of dd^c|z|^2 ^ beta^(n-1) equals r^(2n)";
    Ok(vec![
        CheckResult::new("c01-calibration-radial", claim, rel < cx.tol.calibration_rel)
            .value(rel)
            .expected(0.0)
            .tolerance(cx.tol.calibration_rel)
            .diagnostics(diag.join("; ")),
        CheckResult::new("c01-calibration-mc", format!("{claim} (Monte Carlo, in standard errors)"), z < cx.tol.sigmas)
            .value(z)
            .expected(0.0)
            .tolerance(cx.tol.sigmas),
    ])
}

fn c02(cx: &Ctx) -> Result<Vec<CheckResult>> {
    let nu = function_lelong_number(&cx.st, &cx.fund(), &cx.origin(), &cx.mc)?;
    let v = nu.nu.value().unwrap_or(f64::NAN);
    let atom = hessian_atom(&cx.st, &cx.fund(), &cx.origin(), &cx.mc)?;
    let a = atom.atom.unwrap_or(f64::NAN);
    Ok(vec![
        CheckResult::new("c02-fundamental-nu", "Lelong number of dd^c of the fundamental solution is 1", (v - 1.0).abs() < cx.tol.lelong_abs)
            .value(v)
            .expected(1.0)
            .tolerance(cx.tol.lelong_abs)
            .diagnostics(format!("fit {}", nu.diagnostics.model)),
        CheckResult::new(
            "c02-fundamental-atom",
            "Hessian measure of the fundamental solution has a unit point mass, so nu^m equals the atom",
            (a - 1.0).abs() < cx.tol.atom_abs && (v.powi(cx.st.m() as i32) - a).abs() < cx.tol.atom_abs,
        )
        .value(a)
        .expected(1.0)
        .tolerance(cx.tol.atom_abs)
        .diagnostics(atom.label),
    ])
}

fn monotone_check(id: String, claim: &str, values: &[f64], stderrs: &[f64], sigmas: f64) -> CheckResult {
    let mut worst = 0.0f64;
    for i in 1..values.len() {
        let slack = sigmas * (stderrs[i] + stderrs[i - 1]) + 1e-12 * values[i].abs().max(values[i - 1].abs());
        worst = worst.max(values[i - 1] - values[i] - slack);
    }
    CheckResult::new(id, claim, worst <= 0.0).value(worst).expected(0.0).diagnostics("largest decrease beyond tolerance")
}

fn c03(cx: &Ctx) -> Result<Vec<CheckResult>> {
    let radii = geometric_grid(DEFAULT_RMIN, DEFAULT_RMAX, DEFAULT_POINTS)?;
    let claim = "Lelong function of an m-positive closed current is nondecreasing";
    let mut out = Vec::new();
    let mut currents: Vec<(String, SimpleCurrent, Point)> = Vec::new();
    for e in cx.msh_entries() {
        currents.push((e.name.to_string(), SimpleCurrent::ddc_power(e.function.clone(), 1)?, e.reference.clone()));
    }
    for j in 2..=cx.st.m() {
        let t = SimpleCurrent::new(Coefficient::Unit, vec![(cx.fund(), j)], 0)?;
        currents.push((format!("fund-power{j}"), t, cx.origin()));
    }
    for (name, t, a) in currents {
        let p = lelong_function(&cx.st, &t, &a, &radii, &cx.mc)?;
        out.push(monotone_check(format!("c03-monotone-{name}"), claim, &p.values, &p.stderrs, cx.tol.sigmas));
    }
    Ok(out)
}

fn c04(cx: &Ctx) -> Result<Vec<CheckResult>> {
    let currents = [
        ("closed", SimpleCurrent::ddc_power(ModelFunction::quadratic(cx.n()), 1)?),
        ("fundamental", SimpleCurrent::ddc_power(cx.fund(), 1)?),
        ("coefficient", cx.mild()?),
        ("t0", cx.t0()?),
    ];
    let (r1, r2) = (0.1, 0.4);
    currents
        .into_iter()
        .map(|(name, t)| {
            let rep = lelong_jensen(&cx.st, &t, &cx.origin(), r1, r2, &cx.mc)?;
            Ok(CheckResult::new(
                format!("c04-jensen-{name}"),
                "Lelong-Jensen identity closes between r1 and r2",
                rep.residual < cx.tol.jensen_rel,
            )
            .value(rep.residual)
            .expected(0.0)
            .tolerance(cx.tol.jensen_rel)
            .diagnostics(format!("lhs {:.12e}, rhs {:.12e}, terms {:?}", rep.lhs, rep.rhs, rep.terms)))
        })
        .collect()
}

fn c05(cx: &Ctx) -> Result<Vec<CheckResult>> {
    let t0 = cx.t0()?;
    let radii = geometric_grid(1e-3, 1e-2, 8)?;
    let p = lelong_function(&cx.st, &t0, &cx.origin(), &radii, &cx.mc)?;
    let s = cx.st.fundamental_power();
    let scaled: Vec<f64> = p.values.iter().zip(&radii).map(|(v, r)| v * r.powf(2.0 * s)).collect();
    let mean = scaled.iter().sum::<f64>() / scaled.len() as f64;
    let spread = scaled.iter().fold(0.0f64, |a, v| a.max((v - mean).abs())) / mean.abs();
    let e = cx.st.lelong_exponent(t0.bidimension())?;
    let c_n = -e / (e - 2.0);
    let nu = lelong_number(&cx.st, &t0, &cx.origin(), &cx.mc)?;
    let diverges = nu.nu == NuValue::DoesNotConverge;
    let ok = spread < cx.tol.t0_flatness && mean < 0.0 && (mean / c_n - 1.0).abs() < cx.tol.t0_flatness && diverges;
    Ok(vec![CheckResult::new(
        "c05-t0-nonconvergence",
        "nu_T0(r) r^(2(n/m-1)) is a negative constant and the Lelong number does not exist",
        ok,
    )
    .finding()
    .value(mean)
    .expected(c_n)
    .tolerance(cx.tol.t0_flatness)
    .diagnostics(format!("relative spread {spread:.3e}; lelong number {}", nu_text(nu.nu)))])
}

fn c06(cx: &Ctx) -> Result<Vec<CheckResult>> {
    let r0 = 0.5;
    let mild = negative_current_check(&cx.st, &cx.mild()?, &cx.origin(), r0, &cx.mc)?;
    let t0 = negative_current_check(&cx.st, &cx.t0()?, &cx.origin(), r0, &cx.mc)?;
    let limit = mild.limit.unwrap_or(f64::NAN);
    let bound_claim = "nu_T(r) >= c0 + nu_ddcT(r0) r^(2(1-n/m)) / (1-n/m) at every grid radius";
    Ok(vec![
        CheckResult::new(
            "c06-mild-converges",
            "Lelong number of the mild-coefficient current exists; the corrected profile g is nonincreasing",
            mild.converged && mild.g_nonincreasing == Some(true) && limit.is_finite(),
        )
        .value(limit)
        .expected(-1.0)
        .diagnostics(format!("kernel exponent {:.4}, integrable {}", mild.kernel_exponent, mild.kernel_integrable)),
        CheckResult::new("c06-bound-mild", bound_claim, mild.bound_holds)
            .value(mild.c0)
            .diagnostics(format!("upsilon nonincreasing {}", mild.upsilon_nonincreasing)),
        CheckResult::new("c06-bound-t0", bound_claim, t0.bound_holds).value(t0.c0).diagnostics(format!(
            "radii violating: {}/{}; upsilon nonincreasing {}; with the ddcT term scaled by {:.4} the bound holds: {}; kernel integrable {}, converged {}",
            t0.bound_satisfied.iter().filter(|b| !**b).count(),
            t0.bound_satisfied.len(),
            t0.upsilon_nonincreasing,
            t0.corrected_constant,
            t0.corrected_bound_holds,
            t0.kernel_integrable,
            t0.converged
        )),
    ])
}

fn c07(cx: &Ctx) -> Result<Vec<CheckResult>> {
    let mut out = Vec::new();
    let mut kappas = Vec::new();
    for e in &cx.entries {
        let rep = mean_value_ratios(&cx.st, &e.function, &e.reference, cx.kappa, &cx.mc)?;
        let nu = function_lelong_number(&cx.st, &e.function, &e.reference, &cx.mc)?;
        let nu_v = nu.nu.value().unwrap_or(f64::NAN);
        let q = rep.q_sphere.nu.value().unwrap_or(f64::NAN);
        if !e.has_pole_at_reference() {
            let qb = rep.q_ball.nu.value().unwrap_or(f64::NAN);
            let worst = q.abs().max(qb.abs()).max(nu_v.abs());
            out.push(
                CheckResult::new(format!("c07-bounded-{}", e.name), "bounded function: all limits vanish", worst < cx.tol.bounded_abs)
                    .value(worst)
                    .expected(0.0)
                    .tolerance(cx.tol.bounded_abs),
            );
            continue;
        }
        let id = format!("c07-ratio-{}", e.name);
        let claim = "ball/sphere limit ratio equals n/(n+1-n/m)";
        match rep.ratio {
            Some(r) => out.push(
                CheckResult::new(id, claim, (r - rep.expected_ratio).abs() < cx.tol.ratio_abs)
                    .value(r)
                    .expected(rep.expected_ratio)
                    .tolerance(cx.tol.ratio_abs),
            ),
            None => {
                let mut c = CheckResult::new(id, claim, true).value(q).diagnostics("sphere limit vanishes; ratio undefined");
                c.status = Status::Skipped;
                out.push(c);
            }
        }
        if nu_v > 1e-6 && q > 1e-6 {
            kappas.push((e.name, nu_v / q));
        }
    }
    let spread = kappas.iter().fold(0.0f64, |a, (_, k)| a.max((k - cx.kappa).abs()));
    out.push(
        CheckResult::new("c07-kappa-consistent", "nu / sphere limit is the same constant on every entry", spread < cx.tol.kappa_abs)
            .value(spread)
            .expected(0.0)
            .tolerance(cx.tol.kappa_abs)
            .diagnostics(kappas.iter().map(|(n, k)| format!("{n}: {k:.9}")).collect::<Vec<_>>().join(", ")),
    );
    out.push(
        CheckResult::new("c07-kappa", "measured constant between nu and the sphere-mean limit (2 is claimed)", cx.kappa.is_finite())
            .finding()
            .value(cx.kappa)
            .expected(2.0)
            .diagnostics("direct evaluation with dd^c = (i/2pi) d dbar gives 1"),
    );
    Ok(out)
}

fn c08(cx: &Ctx) -> Result<Vec<CheckResult>> {
    let mut out = Vec::new();
    for e in &cx.entries {
        let sg = sup_growth(&cx.st, &e.function, &e.reference, cx.kappa, 32)?;
        let mv = mean_value_ratios(&cx.st, &e.function, &e.reference, cx.kappa, &cx.mc)?;
        let nu = function_lelong_number(&cx.st, &e.function, &e.reference, &cx.mc)?.nu.value().unwrap_or(f64::NAN);
        let ell = sg.estimate.nu.value().unwrap_or(f64::NAN);
        let defect = sg.convexity_defect.min(mv.sphere_convexity_defect);
        out.push(
            CheckResult::new(
                format!("c08-convexity-{}", e.name),
                "sphere mean and supremum are convex in phi_m(r)",
                defect >= -cx.tol.convexity,
            )
            .value(defect)
            .expected(0.0)
            .tolerance(cx.tol.convexity)
            .diagnostics(format!("sup {:.3e}, sphere {:.3e}", sg.convexity_defect, mv.sphere_convexity_defect)),
        );
        out.push(
            CheckResult::new(format!("c08-ell-{}", e.name), "sup-growth number does not exceed the Lelong number", ell <= nu + cx.tol.ell_slack)
                .value(ell)
                .expected(nu)
                .tolerance(cx.tol.ell_slack)
                .diagnostics(if sg.searched { "supremum by multi-start search" } else { "supremum in closed form" }),
        );
        out.push(
            CheckResult::new(format!("c08-gap-{}", e.name), "measured gap nu - ell", (nu - ell).is_finite())
                .finding()
                .value(nu - ell),
        );
    }
    Ok(out)
}

fn c09(cx: &Ctx) -> Result<Vec<CheckResult>> {
    let Some(entry) = cx.entry("two-pole") else { return Ok(vec![]) };
    let (side, step) = (9usize, 0.1);
    let half = (side as f64 - 1.0) / 2.0;
    let dims = 3.min(2 * cx.n());
    let mut nodes = vec![cx.origin()];
    for axis in 0..dims {
        let mut next = Vec::new();
        for p in &nodes {
            for i in 0..side {
                let mut d = vec![0.0; 2 * cx.n()];
                d[axis] = 1.0;
                next.push(p.offset(&d, (i as f64 - half) * step));
            }
        }
        nodes = next;
    }
    let map = lelong_map(&cx.st, &entry.function, &nodes, cx.kappa, &cx.mc)?;
    let values: Vec<f64> = map.iter().map(|e| e.nu.value().unwrap_or(f64::INFINITY)).collect();
    let pole = nodes.iter().position(|p| p.is_origin()).expect("grid is centered at the pole");
    let at_pole = values[pole];
    let elsewhere = values.iter().enumerate().filter(|(i, _)| *i != pole).fold(0.0f64, |a, (_, v)| a.max(v.abs()));
    let usc = usc_spot_check(&cx.st, &entry.function, &cx.origin(), side, step, cx.kappa, &cx.mc)?;
    Ok(vec![
        CheckResult::new("c09-map-pole", "Lelong map equals the pole weight at the pole", (at_pole - 1.0).abs() < cx.tol.lelong_abs)
            .value(at_pole)
            .expected(1.0)
            .tolerance(cx.tol.lelong_abs),
        CheckResult::new("c09-map-elsewhere", "Lelong map vanishes off the pole", elsewhere < cx.tol.map_abs)
            .value(elsewhere)
            .expected(0.0)
            .tolerance(cx.tol.map_abs)
            .diagnostics(format!("{} grid points", nodes.len())),
        CheckResult::new("c09-usc", "Lelong map is upper semicontinuous on the grid", usc.passed)
            .value(usc.worst_excess)
            .diagnostics(format!("{} nodes compared with neighbours at step/64", usc.checked)),
    ])
}

fn exponent_pair(cx: &Ctx, id: &str, phi: &ModelFunction, expected: f64) -> Result<CheckResult> {
    let k = CompactRegion::ball(cx.origin(), 0.5)?;
    let tail = tail_exponent(phi, &k, &cx.mc)?;
    let scan = integrability_exponent(phi, &k, &cx.mc)?;
    let (a, b) = (tail.iota.finite().unwrap_or(f64::INFINITY), scan.iota.finite().unwrap_or(f64::INFINITY));
    let rel = cx.tol.exponent_rel;
    let ok = (a / b - 1.0).abs() < rel && (a / expected - 1.0).abs() < rel && (b / expected - 1.0).abs() < rel;
    Ok(CheckResult::new(id, "tail-slope and integral-scan exponents agree", ok)
        .value(b)
        .expected(expected)
        .tolerance(rel)
        .diagnostics(format!("tail {a:.6}, scan {b:.6}, r^2 {:.6}", tail.fit.map_or(f64::NAN, |f| f.r_squared))))
}

fn c10(cx: &Ctx) -> Result<Vec<CheckResult>> {
    let mut out = vec![exponent_pair(cx, "c10-exponent-fund", &cx.fund(), cx.st.critical_exponent())?];
    if let Some(e) = cx.entry("remark-cyl") {
        let (n, m) = (cx.n() as f64, cx.st.m() as f64);
        out.push(exponent_pair(cx, "c10-exponent-remark-cyl", &e.function, m * (n - 1.0) / (n - 1.0 - m))?);
    }
    Ok(out)
}

fn c11(cx: &Ctx) -> Result<Vec<CheckResult>> {
    cx.msh_entries()
        .map(|e| {
            let rep = bounds_report(&cx.st, &e.function, &e.reference, &cx.mc)?;
            let ok = rep.lower_holds && rep.upper_holds != Some(false) && rep.m1_identity != Some(false);
            let value = rep.iota.iota.finite().map_or(crate::report::Quantity::Sentinel("unbounded"), Into::into);
            let mut c = CheckResult::new(
                format!("c11-bounds-{}", e.name),
                "n/(n-m) <= iota, and iota <= nm/(n-m) when nu > 0",
                ok,
            )
            .expected(rep.lower)
            .diagnostics(format!(
                "nu {}, upper {:.4} applicable {}, m=1 identity {:?}",
                nu_text(rep.nu.nu),
                rep.upper,
                rep.upper_applicable,
                rep.m1_identity
            ));
            c.value = Some(value);
            Ok(c)
        })
        .collect()
}

/// `phi <= psi` at deterministic points of the region.
fn dominated(phi: &ModelFunction, psi: &ModelFunction, k: &CompactRegion) -> bool {
    let (c, r) = &k.balls()[0];
    let d = 2 * c.dim();
    (0..512).all(|i| {
        let dir: Vec<f64> = (0..d).map(|j| (((i * 7919 + j * 104_729) % 1000) as f64 / 500.0) - 1.0).collect();
        let norm = dir.iter().map(|x| x * x).sum::<f64>().sqrt().max(1e-12);
        let z = c.offset(&dir, r * ((i % 97) as f64 + 0.5) / 97.0 / norm);
        phi.on_pole(&z) || phi.evaluate(&z) <= psi.evaluate(&z) + 1e-12
    })
}

fn c12(cx: &Ctx) -> Result<Vec<CheckResult>> {
    let s = cx.st.fundamental_power();
    let milder = ModelFunction::radial(cx.e1(1.0), Profile::Power { s: 0.5 * s })?;
    let two = ModelFunction::scaled_sum(vec![(1.0, cx.fund()), (1.0, milder.clone())])?;
    let k = CompactRegion::ball(cx.e1(0.5), 0.75)?;
    let inf = compact_infimum(&two, &k, &[cx.origin(), cx.e1(1.0)], &cx.mc)?;
    let iota1 = cx.st.critical_exponent();
    let got = inf.infimum.iota.finite().unwrap_or(f64::INFINITY);
    let per: Vec<String> = inf.per_point.iter().map(|(_, e)| iota_text(e.iota)).collect();
    let mut out = vec![CheckResult::new(
        "c12-infimum-two-pole",
        "exponent on a compact set is the smaller per-pole exponent",
        inf.consistent && (got - iota1).abs() <= inf.infimum.error() + cx.tol.exponent_rel * iota1,
    )
    .value(got)
    .expected(iota1)
    .tolerance(cx.tol.exponent_rel)
    .diagnostics(format!("per pole {}; whole region {}", per.join(", "), iota_text(inf.direct.iota)))];

    let k0 = CompactRegion::ball(cx.origin(), 0.5)?;
    let fund = cx.fund();
    let pairs = [("scaled", fund.clone().scaled(2.0)?), ("sum", ModelFunction::scaled_sum(vec![(1.0, fund.clone()), (1.0, milder)])?)];
    for (name, phi) in pairs {
        let a = integrability_exponent(&phi, &k0, &cx.mc)?;
        let b = integrability_exponent(&fund, &k0, &cx.mc)?;
        let ordered = dominated(&phi, &fund, &k0);
        let (x, y) = (a.iota.finite().unwrap_or(f64::INFINITY), b.iota.finite().unwrap_or(f64::INFINITY));
        out.push(
            CheckResult::new(
                format!("c12-monotone-{name}"),
                "a smaller function has a smaller integrability exponent",
                ordered && x <= y + a.error() + b.error() + 1e-9,
            )
            .value(x)
            .expected(y)
            .diagnostics(format!("pointwise ordering verified {ordered}")),
        );
    }
    Ok(out)
}

fn c13(cx: &Ctx) -> Result<Vec<CheckResult>> {
    let run = || -> Result<String> {
        let two = ModelFunction::scaled_sum(vec![(1.0, cx.fund()), (2.0, ModelFunction::fundamental(&cx.st, cx.e1(1.0)))])?;
        let k = CompactRegion::ball(cx.e1(0.5), 0.75)?;
        let v = sublevel_volume(&two, &k, -50.0, &cx.mc)?;
        let t = SimpleCurrent::ddc_power(two, 1)?;
        let m = ball_current_mass_with(&t, &cx.origin(), 0.3, &cx.mc, MassRoute::MonteCarlo)?;
        Ok(format!("{v:?}|{m:?}"))
    };
    let (a, b) = (run()?, run()?);
    Ok(vec![CheckResult::new("c13-determinism", "identical configuration gives identical Monte Carlo output", a == b).diagnostics(a)])
}

type Criterion = fn(&Ctx) -> Result<Vec<CheckResult>>;

const TABLE: [(&str, Criterion); 13] = [
    ("c01", c01),
    ("c02", c02),
    ("c03", c03),
    ("c04", c04),
    ("c05", c05),
    ("c06", c06),
    ("c07", c07),
    ("c08", c08),
    ("c09", c09),
    ("c10", c10),
    ("c11", c11),
    ("c12", c12),
    ("c13", c13),
];

/// Runs the selected criteria. Computational errors become failing checks.
pub fn run_verify_suite(cfg: &RunConfig) -> Result<Report> {
    cfg.validate()?;
    let mc = cfg.mc();
    let kappa = calibrate_kappa(&cfg.setting, &mc)?;
    let cx = Ctx { st: cfg.setting, mc, tol: cfg.tolerances.clone(), kappa, entries: catalog(&cfg.setting) };
    let checks: Vec<CheckResult> = TABLE
        .par_iter()
        .filter(|(id, _)| cfg.checks.iter().any(|c| c == id))
        .flat_map_iter(|(id, f)| match f(&cx) {
            Ok(v) => v,
            Err(e) => vec![CheckResult::new(format!("{id}-error"), "criterion ran to completion", false).diagnostics(e.to_string())],
        })
        .collect();
    Ok(Report::new(cfg, Some(kappa), checks))
}

fn iota_text(i: Iota) -> String {
    match i {
        Iota::Finite(v) => format!("{v:.6}"),
        Iota::Unbounded => "unbounded".into(),
    }
}
