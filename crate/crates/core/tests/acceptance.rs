//! Acceptance criteria 1-10. Prints one PASS/FAIL line per criterion and
//! exits nonzero if any fails or exceeds its time budget.

use std::panic::{self, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};
use ratk::bar_oracle::{compare_with_closed_form, hh_via_bar};
use ratk::galg::{Derivation, Element};
use ratk::hochschild::{euler_identity, kernel_series_closed_form, polynomial_base};
use ratk::kassembly::{
    k_periodic_series, k_series, relative_k_series, unit_map_comparison, verify_all,
    PeriodicVariant,
};
use ratk::series::{infinite_product, parse_rational_function, Polynomial};
use ratk::{
    FreeGradedAlgebra, Generator, HHModel, Monomial, Preset, Rational, RationalFunction,
    TruncatedSeries,
};

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn closed(text: &str, cutoff: usize) -> TruncatedSeries {
    parse_rational_function(text).unwrap().expand(cutoff)
}

fn ints(s: &TruncatedSeries) -> Vec<i64> {
    s.integer_coeffs()
        .unwrap()
        .into_iter()
        .map(|c| i64::try_from(c).unwrap())
        .collect()
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn poly(terms: &[(i64, usize)]) -> Polynomial {
    terms.iter().fold(Polynomial::zero(), |acc, &(c, d)| {
        &acc + &Polynomial::monomial(BigInt::from(c), d)
    })
}

/// `∏ (1 + t^{step k + 1}) / (1 - t^{step k})`.
fn h_product(step: usize, cutoff: usize) -> TruncatedSeries {
    infinite_product(
        |k| {
            RationalFunction::new(
                poly(&[(1, 0), (1, step * k + 1)]),
                poly(&[(1, 0), (-1, step * k)]),
            )
            .unwrap()
        },
        cutoff,
    )
    .unwrap()
}

fn c1_k_ku() -> Outcome {
    let got = k_series(&Preset::Ku.descriptor(), 20).map_err(err)?.total;
    ensure!(got == closed("1 + (t^3+2t^5)/(1-t^4)", 20), "K(ku) = {got}");
    Ok(format!("K(ku) = {got}"))
}

fn c2_k_ku_periodic() -> Outcome {
    let ku = Preset::Ku.descriptor();
    let periodic = k_periodic_series(&ku, 20, PeriodicVariant::Localization)
        .map_err(err)?
        .series;
    ensure!(
        periodic == closed("(1+t) + (t^3+2t^5+t^6)/(1-t^4)", 20),
        "K(KU) = {periodic}"
    );
    let connective = k_series(&ku, 20).map_err(err)?.total;
    let split = &connective + &closed("t*(1 + t^5/(1-t^4))", 20);
    ensure!(periodic == split, "K(KU) != K(ku) + t K(Z)");
    Ok("closed form and localization splitting agree through t^20".into())
}

fn c3_relative_ko_ell() -> Outcome {
    let cutoff = 24;
    let cases = [
        (Preset::Ko, "t^5/(1-t^4)"),
        (Preset::ell(3).unwrap(), "t^5/(1-t^4)"),
        (Preset::ell(5).unwrap(), "t^9/(1-t^8)"),
    ];
    for (preset, want) in cases {
        let d = preset.descriptor();
        let got = relative_k_series(&d, cutoff).map_err(err)?;
        // Same numbers straight from the nullspace dimensions of B.
        let dims = d
            .hh_model(cutoff as u32 + 1)
            .map_err(err)?
            .kernel_dims(cutoff as u32)
            .map_err(err)?;
        let from_nullspaces = TruncatedSeries::from_dims(&dims, cutoff).positive_part();
        ensure!(
            got == from_nullspaces,
            "{preset}: report disagrees with ker(B)"
        );
        ensure!(got == closed(want, cutoff), "{preset}: {got}");
    }
    Ok("ko, ell(3), ell(5) through t^24".into())
}

fn c4_mu_kernel() -> Outcome {
    let model = Preset::Mu.descriptor().hh_model(21).map_err(err)?;
    let names: Vec<&str> = model
        .base()
        .generators()
        .iter()
        .map(|g| g.name.as_str())
        .collect();
    ensure!(
        names.len() == 10 && names[9] == "b10",
        "generators {names:?}"
    );
    let dims = model.kernel_dims(20).map_err(err)?;
    let want = kernel_series_closed_form(&h_product(2, 20));
    ensure!(
        TruncatedSeries::from_dims(&dims, 20) == want,
        "ker(B) dims {dims:?}, closed form {want}"
    );
    Ok(format!("ker(B) dims {dims:?}"))
}

fn c5_unit_map_mu() -> Outcome {
    let r = unit_map_comparison(&Preset::Mu.descriptor(), 12).map_err(err)?;
    let p = infinite_product(|k| RationalFunction::geometric(1, 0, 2 * k), 12).unwrap();
    ensure!(r.bsl1 == p.positive_part().shift(1), "bsl1 is not t(p - 1)");
    ensure!(
        ints(&r.bsl1)[..10] == [0, 0, 0, 1, 0, 2, 0, 3, 0, 5],
        "bsl1 = {}",
        r.bsl1
    );
    ensure!(
        ints(&r.relative)[..10] == [0, 0, 0, 1, 0, 2, 0, 3, 1, 5],
        "relative = {}",
        r.relative
    );
    ensure!(
        r.first_difference == Some(8),
        "first difference {:?}",
        r.first_difference
    );
    ensure!(
        r.ranks_at_difference == Some((0, 1)),
        "ranks {:?}",
        r.ranks_at_difference
    );
    Ok(format!(
        "bsl1 = {} | relative = {} | differ at t^8 (0 vs 1)",
        r.bsl1, r.relative
    ))
}

fn c6_de_rham() -> Outcome {
    let cases = [
        (Preset::Ku, 14),
        (Preset::Ko, 14),
        (Preset::ell(3).unwrap(), 14),
        (Preset::Mu, 14),
        (Preset::Mso, 16),
    ];
    for (preset, cutoff) in cases {
        let model = preset.descriptor().hh_model(cutoff + 1).map_err(err)?;
        let dr = model.derham_dims(cutoff).map_err(err)?;
        ensure!(
            dr[0] == 1 && dr[1..].iter().all(|&x| x == 0),
            "{preset}: de Rham {dr:?}"
        );
        let imker = model.im_equals_ker_positive(cutoff).map_err(err)?;
        ensure!(imker.holds(), "{preset}: im(B) != ker(B)");
    }
    Ok("ku, ko, ell(3), MU through 14, MSO through 16".into())
}

fn c7_oracle() -> Outcome {
    let x2 = polynomial_base(&[("x", 2)]).map_err(err)?;
    let oracle = hh_via_bar(&x2, 10).map_err(err)?;
    ensure!(
        oracle.dims() == [1, 0, 1, 1, 1, 1, 1, 1, 1, 1, 1],
        "bar dims {:?}",
        oracle.dims()
    );
    for degree in [2, 4] {
        let cmp = compare_with_closed_form(&[degree], 10).map_err(err)?;
        ensure!(
            cmp.identities.holds(),
            "|x|={degree}: b^2, B^2 or bB+Bb nonzero"
        );
        ensure!(
            cmp.well_defined,
            "|x|={degree}: B not well defined on homology"
        );
        ensure!(cmp.passed(), "|x|={degree}: rows {:?}", cmp.rows);
    }
    Ok("|x| = 2 and 4 through degree 10, identities exact".into())
}

fn c8_collapse() -> Outcome {
    for (preset, degrees, columns) in [(Preset::Ku, 8, 3), (Preset::Mu, 9, 2)] {
        let model = preset
            .descriptor()
            .hh_model(degrees + 2 * columns + 2)
            .map_err(err)?;
        let r = model.collapse_check(degrees, columns).map_err(err)?;
        ensure!(
            r.collapsed(),
            "{preset}: E3 {:?}, ker {:?}",
            r.e3,
            r.positive_kernel
        );
    }
    Ok("ku (D=8, C=3) and MU (D=9, C=2) collapse to column 0".into())
}

fn small_rational() -> impl Strategy<Value = Rational> {
    (-5i64..6, 1i64..4).prop_map(|(n, d)| Rational::new(n.into(), d.into()))
}

fn series(cutoff: usize) -> impl Strategy<Value = TruncatedSeries> {
    proptest::collection::vec(small_rational(), cutoff + 1)
        .prop_map(move |c| TruncatedSeries::from_coeffs(c, cutoff))
}

fn rational_function() -> impl Strategy<Value = RationalFunction> {
    (
        proptest::collection::vec(-3i64..4, 0..5),
        proptest::collection::vec(-3i64..4, 0..4),
    )
        .prop_map(|(num, den)| {
            let mut d = vec![1];
            d.extend(den);
            RationalFunction::new(Polynomial::from_integers(num), Polynomial::from_integers(d))
                .unwrap()
        })
}

fn algebra() -> impl Strategy<Value = FreeGradedAlgebra> {
    proptest::collection::vec(1u32..6, 1..5).prop_map(|degrees| {
        let gens = degrees
            .iter()
            .enumerate()
            .map(|(i, &d)| Generator::new(format!("g{i}"), d).unwrap())
            .collect();
        FreeGradedAlgebra::new(gens).unwrap()
    })
}

fn monomial(alg: &FreeGradedAlgebra, raw: &[u32]) -> Monomial {
    let exps = alg
        .generators()
        .iter()
        .zip(raw.iter().cycle())
        .map(|(g, &e)| if g.is_odd() { e % 2 } else { e % 3 })
        .collect();
    alg.monomial(exps).unwrap()
}

fn element(alg: &FreeGradedAlgebra, degree: i64, coeffs: &[i64]) -> Element {
    let mut e = Element::zero(alg);
    if degree < 0 {
        return e;
    }
    for (m, &c) in alg
        .basis(degree as u32)
        .into_iter()
        .zip(coeffs.iter().cycle())
    {
        e.add_term(Rational::from_integer(c.into()), m);
    }
    e
}

fn run_props<S: Strategy>(
    runner: &mut TestRunner,
    name: &str,
    strategy: S,
    test: impl Fn(S::Value) -> Result<(), TestCaseError>,
) -> Result<(), String> {
    runner
        .run(&strategy, test)
        .map_err(|e| format!("{name}: {e}"))
}

fn c9_properties() -> Outcome {
    let cases = 1000;
    let mut runner = TestRunner::new(Config {
        cases,
        failure_persistence: None,
        ..Config::default()
    });

    run_props(
        &mut runner,
        "series ring laws",
        (0usize..8).prop_flat_map(|n| (series(n), series(n), series(n))),
        |(a, b, c)| {
            let zero = TruncatedSeries::zero(a.cutoff());
            let one = TruncatedSeries::one(a.cutoff());
            prop_assert_eq!(&a + &b, &b + &a);
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&a + &zero, a.clone());
            prop_assert_eq!(&a * &one, a.clone());
            prop_assert!((&a + &(-&a)).is_zero());
            prop_assert_eq!(&(&a - &b) + &b, a.clone());
            Ok(())
        },
    )?;

    run_props(
        &mut runner,
        "expand is a ring homomorphism",
        (rational_function(), rational_function(), 0usize..12),
        |(f, g, n)| {
            prop_assert_eq!((&f + &g).expand(n), &f.expand(n) + &g.expand(n));
            prop_assert_eq!((&f * &g).expand(n), &f.expand(n) * &g.expand(n));
            if let Ok(q) = f.checked_div(&g) {
                prop_assert_eq!(&q.expand(n) * &g.expand(n), f.expand(n));
            }
            Ok(())
        },
    )?;

    run_props(
        &mut runner,
        "Koszul associativity and commutativity",
        (algebra(), proptest::collection::vec(0u32..4, 12)),
        |(alg, raw)| {
            let n = alg.generators().len();
            let a = monomial(&alg, &raw[0..n.min(4)]);
            let b = monomial(&alg, &raw[4..4 + n.min(4)]);
            let c = monomial(&alg, &raw[8..8 + n.min(4)]);
            let ab = alg.multiply(&a, &b).unwrap();
            let ba = alg.multiply(&b, &a).unwrap();
            match (&ab, &ba) {
                (Some((s1, m1)), Some((s2, m2))) => {
                    prop_assert_eq!(m1, m2);
                    let koszul = if a.degree() % 2 == 1 && b.degree() % 2 == 1 {
                        -1
                    } else {
                        1
                    };
                    prop_assert_eq!(*s1, koszul * *s2);
                }
                (None, None) => {}
                _ => prop_assert!(false, "ab and ba disagree on vanishing"),
            }
            let ea = Element::from_monomial(a);
            let eb = Element::from_monomial(b);
            let ec = Element::from_monomial(c);
            let left = alg
                .multiply_elements(&alg.multiply_elements(&ea, &eb).unwrap(), &ec)
                .unwrap();
            let right = alg
                .multiply_elements(&ea, &alg.multiply_elements(&eb, &ec).unwrap())
                .unwrap();
            prop_assert_eq!(left, right);
            Ok(())
        },
    )?;

    run_props(
        &mut runner,
        "Leibniz rule",
        (
            algebra(),
            -1i32..3,
            proptest::collection::vec(-2i64..3, 6),
            proptest::collection::vec(0u32..4, 8),
        ),
        |(alg, shift, coeffs, raw)| {
            let images = alg
                .generators()
                .iter()
                .enumerate()
                .map(|(i, g)| element(&alg, g.degree as i64 + shift as i64, &coeffs[i..]))
                .collect();
            let d = Derivation::new(&alg, images, shift).unwrap();
            let a = monomial(&alg, &raw[0..4]);
            let b = monomial(&alg, &raw[4..8]);
            let ea = Element::from_monomial(a.clone());
            let eb = Element::from_monomial(b.clone());
            let ab = alg.multiply_elements(&ea, &eb).unwrap();
            let lhs = d.apply_element(&alg, &ab).unwrap();
            let mut rhs = alg
                .multiply_elements(&d.apply(&alg, &a).unwrap(), &eb)
                .unwrap();
            let sign = if shift.rem_euclid(2) == 1 && a.degree() % 2 == 1 {
                -1
            } else {
                1
            };
            let second = alg
                .multiply_elements(&ea, &d.apply(&alg, &b).unwrap())
                .unwrap();
            rhs.add_assign(&second.scale(&Rational::from_integer(sign.into())));
            prop_assert_eq!(lhs, rhs);
            Ok(())
        },
    )?;

    run_props(
        &mut runner,
        "Euler identity on random even models",
        proptest::collection::vec((1u32..5).prop_map(|k| 2 * k), 1..4),
        |degrees| {
            let gens = degrees
                .iter()
                .enumerate()
                .map(|(i, &d)| Generator::new(format!("x{i}"), d).unwrap())
                .collect();
            let model = HHModel::new(FreeGradedAlgebra::new(gens).unwrap()).unwrap();
            let hh = model.hh_series(9).unwrap();
            let dims = model.kernel_dims(9).unwrap();
            let hh_dims: Vec<usize> = ints(&hh).iter().map(|&x| x as usize).collect();
            prop_assert!(euler_identity(&hh_dims, &dims).iter().all(|r| r.holds()));
            prop_assert_eq!(
                TruncatedSeries::from_dims(&dims, 9),
                kernel_series_closed_form(&hh)
            );
            Ok(())
        },
    )?;

    let presets = [
        Preset::Ku,
        Preset::Ko,
        Preset::ell(3).unwrap(),
        Preset::ell(5).unwrap(),
        Preset::Mu,
        Preset::Mso,
        Preset::Msp,
    ];
    for preset in presets {
        let model = preset.descriptor().hh_model(15).map_err(err)?;
        let rows = model.degree_report(14).map_err(err)?;
        let hh: Vec<usize> = rows.iter().map(|r| r.hh).collect();
        let ker: Vec<usize> = rows.iter().map(|r| r.kernel).collect();
        if let Some(bad) = euler_identity(&hh, &ker).iter().find(|r| !r.holds()) {
            return Err(format!(
                "{preset}: Euler identity fails in degree {}",
                bad.degree
            ));
        }
    }
    Ok(format!(
        "5 suites x {cases} cases; Euler identity for all presets through 14"
    ))
}

fn c10_verify_all() -> Outcome {
    let report = verify_all(12);
    ensure!(report.passed(), "{report}");
    let labels = report.labels();
    let required = [
        "0.1b",
        "0.2b",
        "2.5a",
        "2.5b",
        "2.6",
        "2.12",
        "2.13-series",
        "3.3a",
        "3.3b",
        "3.3c",
        "3.3d",
        "3.4a",
        "3.4b",
        "3.5",
        "4.8",
        "4.9",
    ];
    let missing: Vec<&str> = required
        .iter()
        .copied()
        .filter(|l| !labels.contains(l))
        .collect();
    ensure!(missing.is_empty(), "report lacks {missing:?}");
    Ok(format!("{} checks: {}", labels.len(), labels.join(" ")))
}

struct Criterion {
    id: u8,
    name: &'static str,
    limit: Duration,
    run: fn() -> Outcome,
}

const CRITERIA: &[Criterion] = &[
    Criterion {
        id: 1,
        name: "K(ku) series",
        limit: Duration::from_secs(1),
        run: c1_k_ku,
    },
    Criterion {
        id: 2,
        name: "K(KU) series",
        limit: Duration::from_secs(1),
        run: c2_k_ku_periodic,
    },
    Criterion {
        id: 3,
        name: "ko/ell relative series",
        limit: Duration::from_secs(5),
        run: c3_relative_ko_ell,
    },
    Criterion {
        id: 4,
        name: "MU ker(B) closed form",
        limit: Duration::from_secs(60),
        run: c4_mu_kernel,
    },
    Criterion {
        id: 5,
        name: "MU unit map comparison",
        limit: Duration::from_secs(60),
        run: c5_unit_map_mu,
    },
    Criterion {
        id: 6,
        name: "de Rham vanishing",
        limit: Duration::from_secs(60),
        run: c6_de_rham,
    },
    Criterion {
        id: 7,
        name: "bar complex oracle",
        limit: Duration::from_secs(120),
        run: c7_oracle,
    },
    Criterion {
        id: 8,
        name: "collapse check",
        limit: Duration::from_secs(60),
        run: c8_collapse,
    },
    Criterion {
        id: 9,
        name: "property suites",
        limit: Duration::from_secs(120),
        run: c9_properties,
    },
    Criterion {
        id: 10,
        name: "verify_all(12)",
        limit: Duration::from_secs(60),
        run: c10_verify_all,
    },
];

fn main() -> ExitCode {
    let mut failed = 0;
    for c in CRITERIA {
        let start = Instant::now();
        let outcome = panic::catch_unwind(AssertUnwindSafe(c.run))
            .unwrap_or_else(|p| Err(format!("panicked: {:?}", p.downcast_ref::<String>())));
        let elapsed = start.elapsed();
        let (pass, detail) = match outcome {
            Ok(d) if elapsed <= c.limit => (true, d),
            Ok(d) => (false, format!("over time budget {:?}: {d}", c.limit)),
            Err(e) => (false, e),
        };
        failed += usize::from(!pass);
        println!(
            "criterion {:>2} {} [{:.2?}] {}: {}",
            c.id,
            if pass { "PASS" } else { "FAIL" },
            elapsed,
            c.name,
            detail
        );
    }
    println!(
        "acceptance: {}/{} criteria passed",
        CRITERIA.len() - failed,
        CRITERIA.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
