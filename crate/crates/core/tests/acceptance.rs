//! Acceptance criteria. Runs without the libtest harness so that each
//! criterion prints exactly one `[PASS]`/`[FAIL]` line; exits non-zero if any
//! criterion fails.

use std::collections::BTreeSet;
use std::f64::consts::{PI, TAU};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use dehnfill::certificates::{
    core_length_bound, visual_area_bounds, volume_drop_bounds, THRESHOLD,
};
use dehnfill::envelope::{
    growth_rate, inverse_area, lower_kernel, min_tube_z, shrink_rate, upper_kernel, Branch,
    Envelope,
};
use dehnfill::lattice::{canonical_sign, enumerate_short_slopes, CuspShape};
use dehnfill::packing::{area_floor, min_tube_radius, PackingConstants};
use dehnfill::weitzenboeck::{boundary_form_b, BoundaryCurvature, FourierMode1Form};
use num_integer::Integer;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);

fn within(name: &str, got: f64, want: f64, tol: f64) -> Result<String, String> {
    let msg = format!("{name} = {got:.9} (target {want}, tol {tol:e})");
    if (got - want).abs() <= tol {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn timed(limit: Duration, f: impl FnOnce() -> Outcome) -> Outcome {
    let start = Instant::now();
    let r = f();
    let took = start.elapsed();
    let r = r.map(|m| format!("{m}; {:.3} s", took.as_secs_f64()));
    if took > limit {
        return Err(format!("{} exceeded {limit:?}", r.unwrap_or_else(|e| e)));
    }
    r
}

fn ac1() -> Outcome {
    timed(Duration::from_secs(1), || {
        let env = Envelope::standard().map_err(|e| e.to_string())?;
        let f = env
            .profile(Branch::Upper, min_tube_z())
            .map_err(|e| e.to_string())?;
        let c2 = TAU * TAU / f;
        let a = within("(2π)²/f(1/√3)", c2, 57.5041, 5e-3)?;
        let b = within("its square root", c2.sqrt(), 7.58315, 5e-4)?;
        Ok(format!("{a}; {b}"))
    })
}

fn ac2(env: &Envelope) -> Outcome {
    timed(Duration::from_secs(1), || {
        let v = volume_drop_bounds(env, THRESHOLD).map_err(|e| e.to_string())?;
        within("volume drop upper bound at 7.5832", v.hi, 0.197816, 5e-5)
    })
}

fn ac3(env: &Envelope) -> Outcome {
    let ceiling = area_floor(min_tube_radius()).map_err(|e| e.to_string())?;
    let a = within("area_floor(R0)", ceiling, 0.980254, 1e-5)?;
    let area = visual_area_bounds(env, THRESHOLD).map_err(|e| e.to_string())?;
    let b = within("visual area upper bound at 7.5832", area.hi, ceiling, 1e-4)?;
    Ok(format!("{a}; {b}"))
}

fn ac4(env: &Envelope) -> Outcome {
    let l = core_length_bound(env, THRESHOLD).map_err(|e| e.to_string())?;
    within("core length bound at 7.5832", l, 0.156012, 1e-5)
}

fn ac5() -> Outcome {
    let k = PackingConstants::standard();
    // recompute S independently of the library
    let s = (1.0 / (2.0 * 2f64.sqrt())) / (1.0 / (2.0 * 2f64.sqrt())).asinh();
    if (s - k.s_constant).abs() > 1e-15 {
        return Err(format!("S mismatch: {s} vs {}", k.s_constant));
    }
    let a = within("1/S", 1.0 / s, 0.980257, 5e-6)?;
    let b = within(
        "2√3·0.980258",
        2.0 * 3f64.sqrt() * k.axis_coefficient,
        k.area_floor_coefficient,
        5e-4,
    )?;
    Ok(format!("{a}; {b}"))
}

fn ac6() -> Outcome {
    timed(Duration::from_secs(10), || {
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0006);
        let mut min_b = f64::INFINITY;
        for _ in 0..10_000 {
            let k1 = rng.gen_range(1.0 / 3f64.sqrt()..=1.0);
            let eps = 2.0 * k1 * (1.0 - rng.gen::<f64>());
            let curv = BoundaryCurvature::new(k1, 1.0 / k1, eps).map_err(|e| e.to_string())?;
            let sigma = FourierMode1Form::random(&mut rng, 8, 4).map_err(|e| e.to_string())?;
            min_b = min_b.min(boundary_form_b(&curv, &sigma).map_err(|e| e.to_string())?);
        }
        if min_b < -1e-9 {
            return Err(format!("min b over 10⁴ trials = {min_b:e}"));
        }
        let curv = BoundaryCurvature::new(0.5, 2.0, 0.0).map_err(|e| e.to_string())?;
        let sigma = FourierMode1Form::sin_mode(1, 0, 1, 1.0).map_err(|e| e.to_string())?;
        let b = boundary_form_b(&curv, &sigma).map_err(|e| e.to_string())?;
        let c = within("b(k2 = 2, σ = sin(2πx₂)θ₂)", b, -PI * PI, 1e-9)?;
        Ok(format!("min b over 10⁴ trials = {min_b:.3e}; {c}"))
    })
}

/// Five-point central difference with a step that is exact in binary.
fn central_derivative(f: impl Fn(f64) -> f64, z: f64, step: f64) -> f64 {
    let h = (z + step) - z;
    (f(z - 2.0 * h) - 8.0 * f(z - h) + 8.0 * f(z + h) - f(z + 2.0 * h)) / (12.0 * h)
}

fn ac7() -> Outcome {
    let hfun = |z: f64| inverse_area(z).unwrap();
    let (mut worst_upper, mut worst_lower) = (0.0f64, 0.0f64);
    for i in 0..100 {
        let z = 0.45 + (0.999 - 0.45) * i as f64 / 99.0;
        let hp = central_derivative(hfun, z, 1e-6);
        let hv = hfun(z);
        let up = upper_kernel(z).unwrap() + 1.0 / (1.0 - z) - hp / (hv + shrink_rate(z).unwrap());
        let lo = lower_kernel(z).unwrap() + 1.0 / (1.0 - z) - hp / (hv - growth_rate(z).unwrap());
        worst_upper = worst_upper.max(up.abs());
        worst_lower = worst_lower.max(lo.abs());
    }
    let msg = format!(
        "max |F + 1/(1−z) − H′/(H+G)| = {worst_upper:.2e}, max |F̃ + 1/(1−z) − H′/(H−G̃)| = {worst_lower:.2e}"
    );
    if worst_upper < 1e-8 && worst_lower < 1e-8 {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn ac8(env: &Envelope) -> Outcome {
    let l = 1000.0;
    let v = volume_drop_bounds(env, l).map_err(|e| e.to_string())?;
    let a = visual_area_bounds(env, l).map_err(|e| e.to_string())?;
    let rv = v.hi * l * l / (PI * PI);
    let ra = a.hi * l * l / (TAU * TAU);
    let msg = format!("ΔV_hi·L̂²/π² = {rv:.7}, 𝒜_hi·L̂²/(2π)² = {ra:.7}");
    if (0.99..=1.01).contains(&rv) && (0.99..=1.01).contains(&ra) {
        Ok(msg)
    } else {
        Err(msg)
    }
}

/// Scan in the original basis: `|p + qτ|² = (p + q re)² + (q im)²`, so
/// `|q| ≤ cutoff/√im` and `|p + q re| ≤ cutoff·√im`.
fn brute_force(shape: CuspShape, cutoff: f64) -> BTreeSet<(i64, i64, u64)> {
    let s = shape.im().sqrt();
    let qmax = (cutoff / s).floor() as i64 + 1;
    let mut out = BTreeSet::new();
    for q in -qmax..=qmax {
        let centre = -(q as f64) * shape.re();
        let lo = (centre - cutoff * s).floor() as i64 - 1;
        let hi = (centre + cutoff * s).ceil() as i64 + 1;
        for p in lo..=hi {
            if (p == 0 && q == 0) || p.gcd(&q) != 1 {
                continue;
            }
            let (p, q) = canonical_sign(p, q);
            let l = shape.slope_length(p, q).unwrap();
            if l <= cutoff {
                out.insert((p, q, l.to_bits()));
            }
        }
    }
    out
}

fn ac9() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0009);
    let mut total = 0;
    for trial in 0..100 {
        let shape = CuspShape::new(rng.gen_range(-3.0..3.0), rng.gen_range(0.15..6.0)).unwrap();
        let listed = enumerate_short_slopes(shape, 8.0).map_err(|e| e.to_string())?;
        let got: BTreeSet<_> = listed
            .iter()
            .map(|s| (s.p, s.q, s.lhat.to_bits()))
            .collect();
        if got.len() != listed.len() {
            return Err(format!("trial {trial}: duplicate slopes for shape {shape}"));
        }
        let want = brute_force(shape, 8.0);
        if got != want {
            return Err(format!(
                "trial {trial}: shape {shape}: {} listed vs {} by window scan",
                got.len(),
                want.len()
            ));
        }
        total += got.len();
    }
    Ok(format!("100 shapes, {total} slopes, identical sets"))
}

fn ac10(env: &Envelope) -> Outcome {
    for branch in [Branch::Upper, Branch::Lower] {
        let mut prev = f64::INFINITY;
        for i in 0..1000 {
            let z = 0.5 + 0.5 * i as f64 / 999.0;
            let v = env.profile(branch, z).map_err(|e| e.to_string())?;
            if v >= prev {
                return Err(format!("{branch:?} profile not decreasing at z = {z}"));
            }
            prev = v;
        }
    }
    for i in 0..1000 {
        let z = 0.5 + 0.5 * i as f64 / 999.0;
        let f = env.profile(Branch::Upper, z).map_err(|e| e.to_string())?;
        let ft = env.profile(Branch::Lower, z).map_err(|e| e.to_string())?;
        if f > ft {
            return Err(format!("f > f̃ at z = {z}"));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0010);
    for _ in 0..100 {
        let l = rng.gen_range(7.6..=100.0);
        let v = volume_drop_bounds(env, l).map_err(|e| e.to_string())?;
        let a = visual_area_bounds(env, l).map_err(|e| e.to_string())?;
        if !(0.0 <= v.lo && v.lo <= v.hi && 0.0 < a.lo && a.lo <= a.hi) {
            return Err(format!("ordering fails at L̂ = {l}: {v:?}, {a:?}"));
        }
    }
    Ok("f, f̃ strictly decreasing on [0.5, 1] (1000 samples); f ≤ f̃; lo ≤ hi at 100 L̂".into())
}

fn main() -> ExitCode {
    let env = Envelope::standard().expect("standard envelope");
    let criteria: Vec<Criterion> = vec![
        ("AC1 threshold constant", Box::new(ac1)),
        ("AC2 volume-drop bound", Box::new(|| ac2(&env))),
        ("AC3 visual-area ceiling", Box::new(|| ac3(&env))),
        ("AC4 core-length bound", Box::new(|| ac4(&env))),
        ("AC5 packing constants", Box::new(ac5)),
        ("AC6 boundary-form positivity", Box::new(ac6)),
        ("AC7 envelope identities", Box::new(ac7)),
        ("AC8 large-length asymptotics", Box::new(|| ac8(&env))),
        ("AC9 slope enumeration vs window scan", Box::new(ac9)),
        ("AC10 monotonicity and ordering", Box::new(|| ac10(&env))),
    ];
    let mut failed = 0;
    for (name, check) in &criteria {
        match check() {
            Ok(detail) => println!("[PASS] {name}: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("[FAIL] {name}: {detail}");
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
