//! Oracles shared by the core property tests and the acceptance suite.
#![allow(dead_code)]

use beamdraft_core::emit::{emit_dxf, ir_to_entities, Entity, TemplateLibrary};
use beamdraft_core::geometry::{resolve_rc, BarSize, LayerSpec, RcSectionSpec};
use beamdraft_core::ir::{DrawingIr, Point2, SaveTarget, Unit};
use beamdraft_core::pipeline::{calc_text, calc_tool, CalcError, CalcOp};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use proptest::prelude::*;
use proptest::strategy::ValueTree;
use proptest::test_runner::{RngAlgorithm, TestRng, TestRunner};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Rounding to four decimals moves each coordinate by at most 5e-5.
pub const ROUNDED: f64 = 2e-4;
/// Agreement required between our DXF and the independent reader.
pub const DXF_TOL: f64 = 1e-6;

pub fn config(cases: u32) -> ProptestConfig {
    ProptestConfig {
        failure_persistence: None,
        ..ProptestConfig::with_cases(cases)
    }
}

/// Buildable RC sections in either unit: two to six bars in the outer
/// layers, up to two middle layers.
pub fn rc_spec() -> impl Strategy<Value = RcSectionSpec> {
    let layer = |min: u32| {
        (min..=6u32, 3i64..=9).prop_map(|(count, n)| LayerSpec {
            count,
            bar: BarSize::new(n).unwrap(),
        })
    };
    (
        12u32..=48,
        16u32..=48,
        1u32..=3,
        3i64..=5,
        layer(2),
        prop::collection::vec(layer(1), 0..=2),
        layer(2),
        (-50i32..=50, -50i32..=50),
        any::<bool>(),
    )
        .prop_map(|(w, h, cover, stirrup, top, middle, bottom, (ox, oy), metric)| {
            let (unit, k) = if metric { (Unit::Millimeter, 25.4) } else { (Unit::Inch, 1.0) };
            let mut layers = vec![top];
            layers.extend(middle);
            layers.push(bottom);
            RcSectionSpec {
                width: f64::from(w) * k,
                height: f64::from(h) * k,
                origin: Point2::new(f64::from(ox) * k, f64::from(oy) * k),
                cover: f64::from(cover) * k,
                stirrup_bar: BarSize::new(stirrup).unwrap(),
                layers,
                unit,
                stirrup_spacing: None,
            }
        })
}

/// `n` specs drawn from [`rc_spec`] with a fixed seed.
pub fn sample_specs(n: usize) -> Vec<RcSectionSpec> {
    let rng = TestRng::deterministic_rng(RngAlgorithm::ChaCha);
    let mut runner = TestRunner::new_with_rng(config(1), rng);
    let strategy = rc_spec();
    (0..n)
        .map(|_| strategy.new_tree(&mut runner).unwrap().current())
        .collect()
}

fn approx(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}

/// Rebars and stirrup arcs reflect onto themselves about the section's
/// vertical center line. Stirrup lines are not symmetric: the hook side
/// starts the top line later.
pub fn check_mirror(spec: &RcSectionSpec) -> Result<(), String> {
    let ir = resolve_rc(spec, SaveTarget::NoSave).map_err(|e| e.to_string())?;
    let rc = ir.as_rc().unwrap();
    let mid = spec.origin.x + spec.width / 2.0;
    let mirror = |p: Point2| Point2::new(2.0 * mid - p.x, p.y);
    for (c, r) in rc.rebar_centers.iter().zip(&rc.rebar_radii) {
        let m = mirror(*c);
        let found = rc.rebar_centers.iter().zip(&rc.rebar_radii).any(|(o, ro)| {
            approx(o.x, m.x, ROUNDED) && approx(o.y, m.y, ROUNDED) && approx(*ro, *r, 1e-9)
        });
        if !found {
            return Err(format!("no mirror image of rebar at {c:?}"));
        }
    }
    for a in &rc.stirrup_arcs {
        let m = mirror(a.center);
        let found = rc
            .stirrup_arcs
            .iter()
            .any(|o| approx(o.center.x, m.x, ROUNDED) && approx(o.center.y, m.y, ROUNDED));
        if !found {
            return Err(format!("no mirror image of arc at {:?}", a.center));
        }
    }
    Ok(())
}

/// Each bar clears the nearest side by at least the cover, and in fact by
/// the cover plus the stirrup.
pub fn check_cover(spec: &RcSectionSpec) -> Result<(), String> {
    let ir = resolve_rc(spec, SaveTarget::NoSave).map_err(|e| e.to_string())?;
    let rc = ir.as_rc().unwrap();
    let (x1, y1, x2, y2) = (spec.x1(), spec.y1(), spec.x2(), spec.y2());
    let inner = spec.cover + spec.stirrup_diameter();
    for (c, r) in rc.rebar_centers.iter().zip(&rc.rebar_radii) {
        let clear = (c.x - x1).min(x2 - c.x).min(c.y - y1).min(y2 - c.y) - r;
        if clear < spec.cover - ROUNDED || clear < inner - ROUNDED {
            return Err(format!("bar at {c:?} r {r} clears {clear}, cover {}", spec.cover));
        }
    }
    Ok(())
}

fn our_numbers(e: &Entity) -> Vec<f64> {
    match e {
        Entity::Line(s) => vec![s.end1.x, s.end1.y, s.end2.x, s.end2.y],
        Entity::Circle(c) => vec![c.center.x, c.center.y, c.radius],
        Entity::Arc(a) => vec![a.center.x, a.center.y, a.radius, a.start_angle, a.end_angle],
    }
}

fn reader_numbers(e: &dxf::entities::Entity) -> Option<Vec<f64>> {
    use dxf::entities::EntityType;
    Some(match &e.specific {
        EntityType::Line(l) => vec![l.p1.x, l.p1.y, l.p2.x, l.p2.y],
        EntityType::Circle(c) => vec![c.center.x, c.center.y, c.radius],
        EntityType::Arc(a) => vec![a.center.x, a.center.y, a.radius, a.start_angle, a.end_angle],
        _ => return None,
    })
}

/// Writes the drawing and reads it back with the `dxf` crate.
pub fn check_dxf_round_trip(ir: &DrawingIr) -> Result<(), String> {
    let entities = ir_to_entities(ir, &TemplateLibrary::bundled()).map_err(|e| e.to_string())?;
    let bytes = emit_dxf(&entities, ir.unit);
    let drawing = dxf::Drawing::load(&mut std::io::Cursor::new(bytes)).map_err(|e| e.to_string())?;
    let read: Vec<&dxf::entities::Entity> = drawing.entities().collect();
    if read.len() != entities.len() {
        return Err(format!("{} entities written, {} read", entities.len(), read.len()));
    }
    for (ours, theirs) in entities.entities.iter().zip(read) {
        let a = our_numbers(ours);
        let b = reader_numbers(theirs).ok_or("reader saw an unexpected entity kind")?;
        if a.len() != b.len() || a.iter().zip(&b).any(|(x, y)| (x - y).abs() > DXF_TOL) {
            return Err(format!("{a:?} read back as {b:?}"));
        }
    }
    let units = match ir.unit {
        Unit::Inch => dxf::enums::Units::Inches,
        Unit::Millimeter => dxf::enums::Units::Millimeters,
    };
    if drawing.header.default_drawing_units != units {
        return Err(format!("units read back as {:?}", drawing.header.default_drawing_units));
    }
    Ok(())
}

fn pow10(k: u32) -> BigInt {
    BigInt::from(10u32).pow(k)
}

fn decimal_text(r: &BigRational, scale: u32) -> String {
    let n = (r * BigRational::from_integer(pow10(scale))).to_integer();
    let (sign, digits) = if n.is_negative() { ("-", (-n).to_string()) } else { ("", n.to_string()) };
    let digits = format!("{digits:0>width$}", width = scale as usize + 1);
    let (int, frac) = digits.split_at(digits.len() - scale as usize);
    if frac.is_empty() {
        format!("{sign}{int}")
    } else {
        format!("{sign}{int}.{frac}")
    }
}

/// Random value with up to four decimals, as f64 and as an exact rational.
fn sample(rng: &mut ChaCha8Rng, signed: bool) -> (f64, BigRational) {
    let scale: u32 = rng.gen_range(0..=4);
    let lo = if signed { -10_000_000 } else { 0 };
    let m: i64 = rng.gen_range(lo..=10_000_000);
    let r = BigRational::new(m.into(), pow10(scale));
    (decimal_text(&r, scale).parse().unwrap(), r)
}

/// Half away from zero at four decimals, in units of 1e-4.
fn round4_units(r: &BigRational) -> BigInt {
    let scaled = r * BigRational::from_integer(pow10(4));
    let half = BigRational::new(1.into(), 2.into());
    let mag = (scaled.abs() + half).floor().to_integer();
    if scaled.is_negative() {
        -mag
    } else {
        mag
    }
}

fn text_units(text: &str) -> BigInt {
    let (int, frac) = text.split_once('.').unwrap_or((text, ""));
    let digits: BigInt = format!("{int}{frac}").parse().unwrap();
    let r = BigRational::new(digits, pow10(frac.len() as u32));
    (r * BigRational::from_integer(pow10(4))).to_integer()
}

/// Add, Minus, Multiply and Divide on `n` random operand pairs against
/// exact rationals. Returns the number of comparisons made.
pub fn check_calc_arithmetic(n: usize, seed: u64) -> Result<usize, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ops = [CalcOp::Add, CalcOp::Minus, CalcOp::Multiply, CalcOp::Divide];
    for i in 0..n {
        let op = ops[i % ops.len()];
        let (a, ra) = sample(&mut rng, true);
        let (b, rb) = sample(&mut rng, true);
        let exact = match op {
            CalcOp::Add => &ra + &rb,
            CalcOp::Minus => &ra - &rb,
            CalcOp::Multiply => &ra * &rb,
            _ if rb.is_zero() => {
                if calc_tool(op, &[a, b]) != Err(CalcError::DivideByZero) {
                    return Err(format!("{a} / 0 did not fail"));
                }
                continue;
            }
            _ => &ra / &rb,
        };
        let text = calc_text(op, &[a, b]).map_err(|e| e.to_string())?;
        let want = round4_units(&exact);
        if text_units(&text) != want {
            return Err(format!("{op}({a}, {b}) = {text}, expected {want}e-4"));
        }
        let want_f = want.to_string().parse::<f64>().unwrap() / 1e4;
        let got = calc_tool(op, &[a, b]).map_err(|e| e.to_string())?;
        if (got - want_f).abs() > 1e-9 * want_f.abs().max(1.0) {
            return Err(format!("{op}({a}, {b}) as f64 = {got}, expected {want_f}"));
        }
    }
    Ok(n)
}

/// Sqrt on `n` random non-negative inputs against an integer square root:
/// with Y = y * 1e8, round(sqrt(Y)) = floor((floor(2 sqrt(Y)) + 1) / 2).
pub fn check_calc_sqrt(n: usize, seed: u64) -> Result<usize, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..n {
        let (y, ry) = sample(&mut rng, false);
        let big_y: BigInt = (ry * BigRational::from_integer(pow10(8))).to_integer();
        let two_root = (big_y * BigInt::from(4)).sqrt();
        let want: BigInt = (two_root + 1) / 2;
        let text = calc_text(CalcOp::Sqrt, &[y]).map_err(|e| e.to_string())?;
        if text_units(&text) != want {
            return Err(format!("sqrt({y}) = {text}, expected {want}e-4"));
        }
    }
    if calc_tool(CalcOp::Sqrt, &[-1.0]) != Err(CalcError::NegativeSqrt) {
        return Err("sqrt(-1) did not fail".into());
    }
    Ok(n)
}
