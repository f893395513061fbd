//! Acceptance checks. Prints one PASS/FAIL line per criterion and exits
//! non-zero when any of them fails.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use cabledeg::geom3d::{solid_angle_winding, voxel_regions, IndexQuery, TriangleMesh, ROUNDING_GUARD};
use cabledeg::homotopy::{verify_lower_bound, DiscreteHomotopy};
use cabledeg::planar::{planar_regions, winding_angle_value, winding_crossings, PolyCurve};
use cabledeg::word::{parse_word, parse_word_file, reduce, CableWord, RegionId, Sign, Symbol};
use cabledeg::{Point2, Point3, Vec3};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const DATA: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/data");

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn read(name: &str) -> String {
    std::fs::read_to_string(format!("{DATA}/{name}")).expect("data file")
}

fn eight_cables() -> Outcome {
    let text = read("eight_cables.words");
    let t0 = Instant::now();
    let words = parse_word_file(&text).unwrap();
    let coefficients: Vec<i64> = words.iter().map(|w| reduce(w).coefficient).collect();
    let elapsed = t0.elapsed();
    let pass = coefficients == [1, 2, 1, 3, 2, 2, 1, 2] && elapsed < Duration::from_millis(1);
    outcome(pass, format!("coefficients {coefficients:?} in {elapsed:?}"))
}

fn five_symbols() -> Outcome {
    let text = read("five_symbols.words");
    let t0 = Instant::now();
    let words = parse_word_file(&text).unwrap();
    let n = reduce(&words[0]).coefficient;
    let elapsed = t0.elapsed();
    outcome(n == -1 && elapsed < Duration::from_millis(1), format!("coefficient {n} in {elapsed:?}"))
}

fn seventh_cable() -> Outcome {
    let w = parse_word("7: 7>3:+ 3>inf:+ inf>3:- 3>inf:+").unwrap();
    let signs: Vec<i64> = w.symbols().iter().map(|s| s.sign.value()).collect();
    let n = reduce(&w).coefficient;
    outcome(signs == [1, 1, -1, 1] && n == 2, format!("signs {signs:?} reduce to {n}"))
}

fn oracle_equivalence() -> Outcome {
    let o = Point3::origin();
    let corpus = [
        ("icosphere", TriangleMesh::unit_icosphere(3)),
        ("flipped", TriangleMesh::unit_icosphere(3).flipped()),
        ("nested", TriangleMesh::unit_icosphere(3).merged(&TriangleMesh::icosphere(3, 2.0, o))),
        (
            "overlap",
            TriangleMesh::icosphere(3, 1.0, Point3::new(-0.5, 0.0, 0.0))
                .merged(&TriangleMesh::icosphere(3, 1.0, Point3::new(0.5, 0.0, 0.0))),
        ),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let (mut checked, mut skipped, mut agree) = (0, 0, 0);
    let mut worst: f64 = 0.0;
    for (name, mesh) in &corpus {
        let query = IndexQuery::for_mesh(mesh);
        for _ in 0..300 {
            let p = Point3::new(
                rng.random_range(-2.5..2.5),
                rng.random_range(-2.5..2.5),
                rng.random_range(-2.5..2.5),
            );
            let w = solid_angle_winding(&p, mesh);
            if (w - w.round()).abs() >= ROUNDING_GUARD {
                skipped += 1;
                continue;
            }
            worst = worst.max((w - w.round()).abs());
            match query.index(&p, mesh) {
                Ok(i) if i == w.round() as i64 => agree += 1,
                Ok(i) => eprintln!("  {name}: index {i} vs winding {w:.6} at {p:?}"),
                Err(e) => eprintln!("  {name}: {e} at {p:?}"),
            }
            checked += 1;
        }
    }
    outcome(
        checked >= 1000 && agree == checked,
        format!("{agree}/{checked} agree, {skipped} near-surface points skipped, worst rounding distance {worst:.2e}"),
    )
}

fn degree_weighted_volume() -> Outcome {
    let ball = 4.0 * PI / 3.0;
    let sphere = voxel_regions(&TriangleMesh::unit_icosphere(4), 64).unwrap().total_degree();
    let nested_mesh = TriangleMesh::unit_icosphere(4).merged(&TriangleMesh::icosphere(4, 2.0, Point3::origin()));
    let nested = voxel_regions(&nested_mesh, 64).unwrap().total_degree();
    let rel = |x: f64, exact: f64| (x - exact).abs() / exact;
    let errs = [rel(sphere.total, ball), rel(sphere.vdeg, ball), rel(nested.total, 12.0 * PI), rel(nested.vdeg, 12.0 * PI)];
    let pass = errs[0] <= 0.02 && errs[1] <= 0.02 && errs[2] <= 0.03 && errs[3] <= 0.03;
    outcome(
        pass,
        format!(
            "sphere D {:.4} V_deg {:.4}; nested D {:.4} V_deg {:.4}; relative errors {:.2}% {:.2}% {:.2}% {:.2}%",
            sphere.total,
            sphere.vdeg,
            nested.total,
            nested.vdeg,
            100.0 * errs[0],
            100.0 * errs[1],
            100.0 * errs[2],
            100.0 * errs[3]
        ),
    )
}

fn lower_bound() -> Outcome {
    let sphere = TriangleMesh::unit_icosphere(3);
    let mut held = 0;
    let mut min_gap = f64::INFINITY;
    for seed in 0..20 {
        let h = DiscreteHomotopy::wobble(&sphere, 32, 0.3, seed).unwrap();
        let r = verify_lower_bound(&h, 48).unwrap();
        min_gap = min_gap.min(r.swept_volume + r.tolerance.absolute - r.total_degree.abs());
        if !r.violation {
            held += 1;
        }
    }
    let radial = verify_lower_bound(&DiscreteHomotopy::radial(&sphere, 32).unwrap(), 48).unwrap();
    let gap = radial.relative_gap.abs();
    let one_signed = radial.sense.sense_preserving && !radial.sense.degenerate;
    outcome(
        held == 20 && gap <= 0.05 && one_signed,
        format!(
            "wobble {held}/20 hold (smallest Vol + tol - |D| = {min_gap:.4}); radial gap {:.2}%, sense-preserving {one_signed}",
            100.0 * gap
        ),
    )
}

fn strict_inequality() -> Outcome {
    let sphere = TriangleMesh::unit_icosphere(3);
    let h = DiscreteHomotopy::translate_return(&sphere, Vec3::new(4.0, 0.0, 0.0), 16).unwrap();
    let r = verify_lower_bound(&h, 48).unwrap();
    let target = r.total_degree.abs() + 8.0 * PI * 0.95;
    outcome(
        r.swept_volume >= target,
        format!("Vol {:.4} vs |D| + 0.95*8pi = {target:.4}", r.swept_volume),
    )
}

fn planar_parity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let tangled = PolyCurve::new(
        (0..12)
            .map(|_| Point2::new(rng.random_range(-1.5..1.5), rng.random_range(-1.5..1.5)))
            .collect(),
    )
    .unwrap();
    let families = [
        PolyCurve::star(Point2::origin(), 0.4, 1.0, 5),
        PolyCurve::circle(Point2::origin(), 1.0, 64, 3),
        PolyCurve::figure_eight(1.0, 400),
        tangled,
    ];
    let (mut checked, mut agree, mut skipped) = (0, 0, 0);
    for c in &families {
        for _ in 0..250 {
            let p = Point2::new(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0));
            let Ok(a) = winding_angle_value(p, c) else {
                skipped += 1;
                continue;
            };
            if (a - a.round()).abs() >= ROUNDING_GUARD {
                skipped += 1;
                continue;
            }
            checked += 1;
            if winding_crossings(p, c).ok() == Some(a.round() as i64) {
                agree += 1;
            }
        }
    }
    let circle = PolyCurve::circle(Point2::origin(), 1.0, 256, 3);
    let area = planar_regions(&circle, 256).unwrap().area_bound().unsigned;
    let rel = (area - 3.0 * PI).abs() / (3.0 * PI);
    outcome(
        agree == checked && checked + skipped == 1000 && rel <= 0.02,
        format!("{agree}/{checked} agree ({skipped} on-curve skipped); triple circle area {area:.4} ({:+.2}%)", 100.0 * rel),
    )
}

fn random_word(len: usize, seed: u64) -> CableWord {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let region = |i: u32| if i == 0 { RegionId::EXTERIOR } else { RegionId::bounded(i) };
    let mut at = 1u32;
    let symbols = (0..len)
        .map(|_| {
            let to = (at + rng.random_range(1..8)) % 8;
            let sign = if rng.random() { Sign::Plus } else { Sign::Minus };
            let s = Symbol::new(region(at), region(to), sign);
            at = to;
            s
        })
        .collect();
    CableWord::new("1", region(1), symbols).unwrap()
}

fn median_reduce_time(word: &CableWord, runs: usize) -> f64 {
    let mut times: Vec<f64> = (0..runs)
        .map(|_| {
            let t0 = Instant::now();
            std::hint::black_box(reduce(std::hint::black_box(word)));
            t0.elapsed().as_secs_f64()
        })
        .collect();
    times.sort_by(f64::total_cmp);
    times[runs / 2]
}

fn linear_time() -> Outcome {
    let sizes = [100_000, 200_000, 400_000, 800_000];
    let medians: Vec<f64> = sizes
        .iter()
        .map(|&e| median_reduce_time(&random_word(e, e as u64), 15))
        .collect();
    let ratios: Vec<f64> = medians.windows(2).map(|w| w[1] / w[0]).collect();
    let million = median_reduce_time(&random_word(1_000_000, 1), 5);
    let pass = ratios.iter().all(|r| (1.5..=2.5).contains(r));
    let ratio_text: Vec<String> = ratios.iter().map(|r| format!("{r:.2}")).collect();
    outcome(
        pass,
        format!(
            "doubling ratios [{}]; 10^6 symbols in {:.1} ms (soft target 1 s {})",
            ratio_text.join(", "),
            million * 1e3,
            if million < 1.0 { "met" } else { "missed" }
        ),
    )
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("eight-cable coefficients", eight_cables),
        ("five-symbol worked example", five_symbols),
        ("seventh cable sign sum", seventh_cable),
        ("cable index equals solid-angle winding", oracle_equivalence),
        ("degree-weighted volume", degree_weighted_volume),
        ("swept-volume lower bound", lower_bound),
        ("strict inequality for a detour", strict_inequality),
        ("planar winding parity and area bound", planar_parity),
        ("linear-time reduction", linear_time),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        let t0 = Instant::now();
        let o = check();
        let verdict = if o.pass { "PASS" } else { "FAIL" };
        println!("{verdict} {name}: {} [{:.1} s]", o.detail, t0.elapsed().as_secs_f64());
        if !o.pass {
            failed += 1;
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
