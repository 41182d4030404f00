//! Acceptance suite: one line per criterion.

mod common;

use std::f64::consts::{PI, TAU};
use std::time::{Duration, Instant};

use rayon::prelude::*;

use minvol::diffsys::{
    cohomologous, phi_from_circle, phi_minus, phi_plus, phi_t, rational_circle_point,
    structural_residual_constant_curvature, structural_residual_general, Equation,
    InvariantThreeForm,
};
use minvol::exterior::{
    alpha0, alpha1, alpha2, comass, dtheta, theta, RationalForm, DEFAULT_RESTARTS,
};
use minvol::fields::{
    boundary_flux, calibrated_test, generic_seed, shape_matrix, volume, Bump, ComplexStructure,
    Direction, HalfSpaceHorizontal, HalfSpaceVertical, HopfField, JPreset, PerturbedField,
    QuadratureDomain, Sign, TrigField, UnitVectorField, HOPF_ORDERS,
};
use minvol::rng::{gaussian_vector, stream, uniform, DEFAULT_SEED};
use minvol::spaceform::{ChartBox, Geometry, Model, ModelParams, Vector};
use minvol::unit_tangent::{flow_isometry_defect, flow_velocity_check, UnitTangentPoint};
use minvol::{Rational, Result};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Result<Outcome> {
    Ok(Outcome { pass, detail })
}

fn run(
    number: usize,
    title: &str,
    budget_secs: u64,
    check: impl FnOnce() -> Result<Outcome>,
) -> bool {
    let start = Instant::now();
    let result = check();
    let elapsed = start.elapsed();
    let within = elapsed <= Duration::from_secs(budget_secs);
    let (pass, detail) = match result {
        Ok(o) => (o.pass && within, o.detail),
        Err(e) => (false, format!("error: {e}")),
    };
    println!(
        "criterion {number} [{}] {title}: {detail}; {:.2}s of {budget_secs}s",
        if pass { "PASS" } else { "FAIL" },
        elapsed.as_secs_f64()
    );
    pass
}

fn model(name: &str, params: ModelParams) -> Model {
    Model::from_name(name, params).expect("built-in model")
}

fn sphere(r: f64) -> Model {
    model(
        "sphere",
        ModelParams {
            radius: r,
            ..Default::default()
        },
    )
}

fn half_space(a: f64) -> Model {
    model(
        "half-space",
        ModelParams {
            a,
            ..Default::default()
        },
    )
}

fn exact_algebra() -> Result<Outcome> {
    let (t, dt) = (theta::<Rational>(), dtheta::<Rational>());
    let (a0, a1, a2) = (
        alpha0::<Rational>(),
        alpha1::<Rational>(),
        alpha2::<Rational>(),
    );
    let two = Rational::from_integer(2);
    let checks: Vec<(&str, RationalForm, RationalForm)> = vec![
        ("a0^dth", a0.wedge(&dt)?, RationalForm::zero(4)),
        ("a1^dth", a1.wedge(&dt)?, RationalForm::zero(4)),
        ("a2^dth", a2.wedge(&dt)?, RationalForm::zero(4)),
        ("a0^a1", a0.wedge(&a1)?, RationalForm::zero(4)),
        ("a2^a1", a2.wedge(&a1)?, RationalForm::zero(4)),
        (
            "a1^a1 = -2 a0^a2",
            a1.wedge(&a1)?,
            -a0.wedge(&a2)?.scale(&two),
        ),
        ("a1^a1 = dth^2", a1.wedge(&a1)?, dt.wedge(&dt)?),
        ("*a0", a0.hodge_star(), t.wedge(&a2)?),
        ("*a1", a1.hodge_star(), -t.wedge(&a1)?),
        ("*a2", a2.hodge_star(), t.wedge(&a0)?),
        ("*dth", dt.hodge_star(), -t.wedge(&dt)?),
    ];
    let failed: Vec<&str> = checks
        .iter()
        .filter(|(_, l, r)| l != r)
        .map(|(n, _, _)| *n)
        .collect();
    outcome(
        failed.is_empty(),
        if failed.is_empty() {
            format!("{} identities hold exactly", checks.len())
        } else {
            format!("failed: {}", failed.join(", "))
        },
    )
}

fn calibration_families() -> Result<Outcome> {
    let mut worst = 0.0_f64;
    for k in 0..32 {
        let t = TAU * k as f64 / 32.0;
        let c = comass(&phi_t(t).form(), DEFAULT_RESTARTS, DEFAULT_SEED)?;
        worst = worst.max((c.value - 1.0).abs());
    }
    let plus = comass(&phi_plus::<f64>().form(), DEFAULT_RESTARTS, DEFAULT_SEED)?;
    worst = worst.max((plus.value - 1.0).abs());
    let forms = [
        ("phi+", phi_plus::<f64>().form()),
        ("phi_0.7", phi_t(0.7).form()),
        ("2 th^a0", InvariantThreeForm::new([2.0, 0.0, 0.0]).form()),
    ];
    let gaps: Vec<(f64, f64)> = forms
        .par_iter()
        .enumerate()
        .map(|(i, (_, f))| -> Result<(f64, f64)> {
            let optimum = comass(f, DEFAULT_RESTARTS, DEFAULT_SEED)?.value;
            let oracle = common::random_search_comass(f, 1_000_000, 1000 + i as u64);
            Ok((optimum - oracle, oracle - optimum))
        })
        .collect::<Result<_>>()?;
    let max_gap = gaps.iter().map(|g| g.0.abs()).fold(0.0, f64::max);
    let overshoot = gaps.iter().map(|g| g.1).fold(f64::NEG_INFINITY, f64::max);
    outcome(
        worst < 1e-6 && max_gap < 1e-4 && overshoot < 1e-9,
        format!("max |comass - 1| = {worst:.2e} over 33 forms; max |optimizer - oracle| = {max_gap:.2e}"),
    )
}

fn structural_equations() -> Result<Outcome> {
    let models = [
        ("S3(1)", sphere(1.0)),
        ("S3(2)", sphere(2.0)),
        ("H3(1)", model("hyperbolic-quadric", ModelParams::default())),
        ("flat", model("flat", ModelParams::default())),
    ];
    let mut worst_residual = 0.0_f64;
    let mut worst_order = 0.0_f64;
    let mut unmeasured = Vec::new();
    for (label, m) in &models {
        for eq in Equation::CONSTANT_CURVATURE {
            let r = structural_residual_constant_curvature(m, eq, 50, 1e-3, DEFAULT_SEED)?;
            worst_residual = worst_residual.max(r.max_residual);
            match r.convergence_order {
                Some(p) => worst_order = worst_order.max((p - 2.0).abs()),
                None if r.max_residual < 1e-12 => unmeasured.push(format!("{label} {}", eq.id())),
                None => worst_order = f64::INFINITY,
            }
        }
    }
    let conformal = model("conformal-test", ModelParams::default());
    let mut general = 0.0_f64;
    for eq in Equation::GENERAL {
        general = general
            .max(structural_residual_general(&conformal, eq, 50, 1e-3, DEFAULT_SEED)?.max_residual);
    }
    outcome(
        worst_residual < 5e-6 && worst_order <= 0.3 && general < 1e-4,
        format!(
            "space forms max residual {worst_residual:.2e}, max |order - 2| {worst_order:.3}, exact at roundoff: [{}]; conformal {general:.2e}",
            unmeasured.join(", ")
        ),
    )
}

fn hopf_volume() -> Result<Outcome> {
    let mut worst = 0.0_f64;
    let mut values = Vec::new();
    for r in [1.0, 2.0] {
        let field = HopfField::new(&sphere(r), ComplexStructure::preset(JPreset::I))?;
        let report = volume(
            &field,
            &QuadratureDomain::FullSphereHopf {
                orders: HOPF_ORDERS,
            },
        )?;
        let exact = 2.0 * PI * PI * (r + r * r * r);
        worst = worst.max((report.volume - exact).abs() / exact);
        values.push(format!("r={r}: {:.6}", report.volume));
    }
    outcome(
        worst < 1e-4,
        format!("{}; max relative error {worst:.2e}", values.join(", ")),
    )
}

fn sample_points(m: &Model, n: usize, seed: u64) -> Vec<Vector> {
    (0..n)
        .map(|i| m.sample_point(&mut stream(seed, i as u64)))
        .collect()
}

fn max_over<F: Fn(&Vector) -> Result<f64> + Sync + Send>(points: &[Vector], f: F) -> Result<f64> {
    let v = points.par_iter().map(f).collect::<Result<Vec<f64>>>()?;
    Ok(v.into_iter().fold(f64::NEG_INFINITY, f64::max))
}

fn pointwise_calibration() -> Result<Outcome> {
    let minus_alpha1 = InvariantThreeForm::new([0.0, -1.0, 0.0]);
    let mut hopf_gap = 0.0_f64;
    for (k, r) in [0.5, 1.0, 2.0].into_iter().enumerate() {
        let m = sphere(r);
        let field = HopfField::new(&m, ComplexStructure::preset(JPreset::K))?;
        let pts = sample_points(&m, 10_000, 500 + k as u64);
        hopf_gap = hopf_gap.max(max_over(&pts, |x| {
            let t = calibrated_test(&field, &phi_plus(), x)?;
            Ok((t.lhs - t.rhs).abs())
        })?);
    }
    let hs = half_space(1.0);
    let pts = sample_points(&hs, 10_000, 510);
    let vertical = HalfSpaceVertical::new(&hs)?;
    let vertical_gap = max_over(&pts, |x| {
        let t = calibrated_test(&vertical, &minus_alpha1, x)?;
        Ok((t.lhs - t.rhs).abs())
    })?;
    let horizontal = HalfSpaceHorizontal::new(&hs, 0)?;
    let strict_gap = -max_over(&pts, |x| {
        let t = calibrated_test(&horizontal, &minus_alpha1, x)?;
        Ok(t.lhs - t.rhs)
    })?;
    outcome(
        hopf_gap < 1e-8 && vertical_gap < 1e-8 && strict_gap > 0.4,
        format!("Hopf/phi+ |lhs-rhs| <= {hopf_gap:.2e}; t d_t/-th^a1 <= {vertical_gap:.2e}; t d_1 gap >= {strict_gap:.4}"),
    )
}

fn half_space_theorem() -> Result<Outcome> {
    let hs = half_space(1.0);
    let bounds = ChartBox::new([0.0, 0.0, 1.0], [1.0, 1.0, 2.0])?;
    let base = common::simpson(|t| t.powi(-3), 1.0, 2.0, 2000);
    let domain = QuadratureDomain::ChartBox {
        bounds,
        orders: [4, 4, 16],
    };
    let vertical = HalfSpaceVertical::new(&hs)?;
    let v = volume(&vertical, &domain)?.volume;
    let flux = boundary_flux(&vertical, &bounds, 8)?;
    let h = volume(&HalfSpaceHorizontal::new(&hs, 0)?, &domain)?.volume;
    let e_vertical = (v - 2.0 * base).abs() / (2.0 * base);
    let e_flux = (v - flux).abs() / v;
    let e_horizontal = (h - 2.0_f64.sqrt() * base).abs() / (2.0_f64.sqrt() * base);
    outcome(
        e_vertical < 1e-8 && e_flux < 1e-6 && e_horizontal < 1e-8,
        format!(
            "vol(t d_t) = {v:.10} (rel {e_vertical:.1e}), flux = {flux:.10} (rel {e_flux:.1e}), vol(t d_1) = {h:.10} (rel {e_horizontal:.1e})"
        ),
    )
}

fn flow() -> Result<Outcome> {
    let mut velocity = 0.0_f64;
    for (k, (name, r)) in [
        ("sphere", 1.0),
        ("sphere", 2.0),
        ("hyperbolic-quadric", 1.0),
        ("hyperbolic-quadric", 2.0),
    ]
    .into_iter()
    .enumerate()
    {
        let m = model(
            name,
            ModelParams {
                radius: r,
                ..Default::default()
            },
        );
        let e = m.embedded().expect("embedded");
        for i in 0..20 {
            let mut rng = stream(600 + k as u64, i);
            let p = UnitTangentPoint::sample(&m, &mut rng);
            for t in [0.0, 0.3, 0.5, 1.0] {
                velocity = velocity.max(flow_velocity_check(e, &p, t, 1e-4)?);
            }
        }
    }
    let cases = [
        ("S3(1/2)", "sphere", 0.5),
        ("S3(1)", "sphere", 1.0),
        ("S3(2)", "sphere", 2.0),
        ("H3(1)", "hyperbolic-quadric", 1.0),
    ];
    let mut isometric = Vec::new();
    let mut separation = f64::INFINITY;
    let mut exact = 0.0_f64;
    for (k, (label, name, r)) in cases.into_iter().enumerate() {
        let m = model(
            name,
            ModelParams {
                radius: r,
                ..Default::default()
            },
        );
        let e = m.embedded().expect("embedded");
        let mut worst = 0.0_f64;
        for i in 0..10 {
            let p = UnitTangentPoint::sample(&m, &mut stream(700 + k as u64, i));
            worst = worst.max(flow_isometry_defect(e, &p, 0.7)?.defect);
        }
        if worst < 1e-10 {
            isometric.push(label);
            exact = exact.max(worst);
        } else {
            separation = separation.min(worst);
        }
    }
    outcome(
        velocity < 1e-7 && isometric == ["S3(1)"] && separation > 0.1,
        format!(
            "velocity residual {velocity:.2e}; isometric: [{}] (defect {exact:.1e}); smallest other defect {separation:.3}",
            isometric.join(", ")
        ),
    )
}

fn cohomology_logic() -> Result<Outcome> {
    let r = Rational::from_integer;
    let q = |n: i64, d: i64| Rational::new(n, d);
    let mut circle: Vec<(Rational, Rational)> = (-6..=6)
        .flat_map(|n| (1..=4).map(move |d| (n, d)))
        .map(|(n, d)| rational_circle_point(q(n, d)))
        .collect();
    circle.push((r(-1), r(0)));
    let zero = InvariantThreeForm::<Rational>::zero();
    let plus = phi_plus::<Rational>();
    let curvatures = [r(-2), r(-1), q(-1, 2), r(0), q(1, 2), r(1), r(2), r(3)];
    let mut mismatches = 0usize;
    let mut checked = 0usize;
    for c in &curvatures {
        let one_minus_c = r(1) - *c;
        for (cos_t, sin_t) in &circle {
            let pt = phi_from_circle(*cos_t, *sin_t);
            let expect_zero = *cos_t * one_minus_c == r(0);
            let expect_plus = *cos_t - r(1) == *c * (*cos_t + r(1));
            mismatches += usize::from(cohomologous(&pt, &zero, c) != expect_zero);
            mismatches += usize::from(cohomologous(&pt, &plus, c) != expect_plus);
            for (cos_s, sin_s) in &circle {
                let ps = phi_from_circle(*cos_s, *sin_s);
                let expect = (*cos_t - *cos_s) * one_minus_c == r(0);
                mismatches += usize::from(cohomologous(&pt, &ps, c) != expect);
                checked += 1;
            }
            checked += 2;
        }
        mismatches += usize::from(cohomologous(&plus, &zero, c) != (*c == r(-1)));
    }
    let c1_all_exact = circle.iter().all(|(cs, sn)| {
        cohomologous(&phi_from_circle(*cs, *sn), &zero, &r(1))
            && cohomologous(&phi_from_circle(*cs, *sn), &phi_minus(), &r(1))
    });
    let half_never = circle
        .iter()
        .all(|(cs, sn)| !cohomologous(&phi_from_circle(*cs, *sn), &plus, &q(1, 2)));
    let minus_one_plus = cohomologous(&plus, &zero, &r(-1));
    outcome(
        mismatches == 0 && c1_all_exact && half_never && minus_one_plus,
        format!("{checked} rational verdicts, {mismatches} mismatches; c=1 all exact: {c1_all_exact}; c=-1 phi+ ~ 0: {minus_one_plus}; c=1/2 phi_t ~ phi+ never: {half_never}"),
    )
}

fn random_field(k: usize) -> Result<Box<dyn UnitVectorField>> {
    let mut rng = stream(900, k as u64);
    Ok(match k % 4 {
        0 => Box::new(TrigField::random(
            &half_space(uniform(&mut rng, 0.5, 2.0)),
            &mut rng,
        )?),
        1 => Box::new(TrigField::random(
            &model("flat", ModelParams::default()),
            &mut rng,
        )?),
        2 => Box::new(TrigField::random(
            &model("conformal-test", ModelParams::default()),
            &mut rng,
        )?),
        _ => {
            let m = sphere(uniform(&mut rng, 0.5, 2.0));
            let r = m.embedded().expect("embedded").radius;
            let pole = gaussian_vector(&mut rng, 4).normalize();
            let w = gaussian_vector(&mut rng, 4);
            let preset = [JPreset::I, JPreset::J, JPreset::K][k % 3];
            let hopf = HopfField::new(&m, ComplexStructure::preset(preset))?;
            Box::new(PerturbedField::new(
                Box::new(hopf),
                Bump::Sphere { pole, radius: r },
                Direction::Tangential(w),
                uniform(&mut rng, 0.1, 1.0),
            )?)
        }
    })
}

fn random_calibration(rng: &mut minvol::rng::StreamRng) -> InvariantThreeForm<f64> {
    match uniform(rng, 0.0, 3.0) as usize {
        0 => phi_plus(),
        1 => InvariantThreeForm::new([-1.0, 0.0, -1.0]),
        _ => phi_t(uniform(rng, 0.0, TAU)),
    }
}

fn calibration_inequality() -> Result<(usize, usize, f64)> {
    let per_field = 1000;
    let results = (0..100)
        .into_par_iter()
        .map(|k| -> Result<(usize, f64)> {
            let field = random_field(k)?;
            let m = field.model();
            let mut violations = 0;
            let mut tightest = f64::INFINITY;
            for i in 0..per_field {
                let mut rng = stream(910 + k as u64, i as u64);
                let x = m.sample_point(&mut rng);
                let phi = random_calibration(&mut rng);
                let t = calibrated_test(field.as_ref(), &phi, &x)?;
                violations += usize::from(!t.inequality_holds);
                tightest = tightest.min(t.rhs - t.lhs);
            }
            Ok((violations, tightest))
        })
        .collect::<Result<Vec<_>>>()?;
    let violations = results.iter().map(|r| r.0).sum();
    let tightest = results.iter().map(|r| r.1).fold(f64::INFINITY, f64::min);
    Ok((violations, 100 * per_field, tightest))
}

const EPSILONS: [f64; 3] = [0.01, 0.05, 0.1];

fn hopf_witnesses() -> Result<f64> {
    let m = sphere(1.0);
    let domain = QuadratureDomain::FullSphereHopf {
        orders: HOPF_ORDERS,
    };
    let reference = volume(
        &HopfField::new(&m, ComplexStructure::preset(JPreset::I))?,
        &domain,
    )?
    .volume;
    let mut worst = f64::INFINITY;
    for k in 0..20 {
        let mut rng = stream(950, k);
        let pole = gaussian_vector(&mut rng, 4).normalize();
        let w = gaussian_vector(&mut rng, 4);
        let base = HopfField::new(&m, ComplexStructure::preset(JPreset::I))?;
        let eps = EPSILONS[k as usize % 3];
        let field = PerturbedField::new(
            Box::new(base),
            Bump::Sphere { pole, radius: 1.0 },
            Direction::Tangential(w),
            eps,
        )?;
        worst = worst.min(volume(&field, &domain)?.volume - reference);
    }
    Ok(worst)
}

fn half_space_witnesses() -> Result<f64> {
    let hs = half_space(1.0);
    let bounds = ChartBox::new([0.0, 0.0, 1.0], [1.0, 1.0, 2.0])?;
    let domain = QuadratureDomain::ChartBox {
        bounds,
        orders: [14, 14, 14],
    };
    let reference = volume(&HalfSpaceVertical::new(&hs)?, &domain)?.volume;
    let mut worst = f64::INFINITY;
    for k in 0..20 {
        let mut rng = stream(960, k);
        let v = gaussian_vector(&mut rng, 3);
        let eps = EPSILONS[k as usize % 3];
        let field = PerturbedField::new(
            Box::new(HalfSpaceVertical::new(&hs)?),
            Bump::Box(bounds),
            Direction::Constant(v),
            eps,
        )?;
        worst = worst.min(volume(&field, &domain)?.volume - reference);
    }
    Ok(worst)
}

fn hyperbolic_probe() -> Result<(f64, f64)> {
    let hs = half_space(1.0);
    let n = 22;
    let grid: Vec<Vector> = (0..n * n * n)
        .map(|i| {
            let (a, b, c) = (i % n, (i / n) % n, i / (n * n));
            let s = |j: usize| (j as f64 + 0.5) / n as f64;
            Vector::from_column_slice(&[-1.0 + 2.0 * s(a), -1.0 + 2.0 * s(b), 0.5 + 1.5 * s(c)])
        })
        .collect();
    let seed = generic_seed(3);
    let minima = (0..50)
        .into_par_iter()
        .map(|k| -> Result<(f64, f64)> {
            let field = TrigField::random(&hs, &mut stream(970, k))?;
            let mut lo = (f64::INFINITY, f64::INFINITY);
            for x in &grid {
                let s = shape_matrix(&field, x, &seed)?;
                lo = (
                    lo.0.min(s.defect(Sign::Plus)),
                    lo.1.min(s.defect(Sign::Minus)),
                );
            }
            Ok(lo)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(minima
        .iter()
        .fold((f64::INFINITY, f64::INFINITY), |acc, m| {
            (acc.0.min(m.0), acc.1.min(m.1))
        }))
}

fn property_suites() -> Result<Outcome> {
    let (violations, pairs, tightest) = calibration_inequality()?;
    let hopf = hopf_witnesses()?;
    let box_witness = half_space_witnesses()?;
    let (plus, minus) = hyperbolic_probe()?;
    outcome(
        violations == 0 && hopf > -1e-9 && box_witness > -1e-9 && plus > 0.0 && minus > 0.0,
        format!(
            "{violations} violations in {pairs} pairs (tightest gap {tightest:.1e}); volume change min Hopf {hopf:.2e}, box {box_witness:.2e}; hyperbolic min defect +: {plus:.3e}, -: {minus:.3e}"
        ),
    )
}

fn main() {
    let results = [
        run(1, "exact algebra", 1, exact_algebra),
        run(
            2,
            "calibration families and comass oracle",
            60,
            calibration_families,
        ),
        run(3, "structural equations", 120, structural_equations),
        run(4, "Hopf volume", 10, hopf_volume),
        run(5, "pointwise calibration", 10, pointwise_calibration),
        run(6, "half-space theorem", 5, half_space_theorem),
        run(7, "geodesic flow", 10, flow),
        run(8, "cohomology logic", 1, cohomology_logic),
        run(9, "property suites", 300, property_suites),
    ];
    let passed = results.iter().filter(|&&p| p).count();
    println!("acceptance: {passed}/{} criteria passed", results.len());
    if passed != results.len() {
        std::process::exit(1);
    }
}
