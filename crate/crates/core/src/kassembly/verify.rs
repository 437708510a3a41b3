//! The labeled identity suite behind `kassembly verify`.
//!
//! Every check recomputes its series from the Hochschild model and compares
//! against an independently expanded closed form. Checks run on scoped
//! threads; the report keeps the fixed check order.

use std::fmt;
use std::thread;

use serde::Serialize;

use super::{
    a_theory_sphere_series, family_hh_series, family_homotopy_series, k_periodic_series, k_series,
    relative_k_series, unit_map_comparison, KAssemblyError, PeriodicVariant, Preset, Result,
};
use crate::bar_oracle::compare_with_closed_form;
use crate::hochschild::kernel_series_closed_form;
use crate::series::{first_difference_degree, parse_rational_function};
use crate::TruncatedSeries;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckResult {
    pub label: String,
    pub description: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub cutoff: usize,
    pub checks: Vec<CheckResult>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn labels(&self) -> Vec<&str> {
        self.checks.iter().map(|c| c.label.as_str()).collect()
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckResult> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let width = self
            .checks
            .iter()
            .map(|c| c.label.len())
            .max()
            .unwrap_or(5)
            .max(5);
        writeln!(f, "{:<width$}  {:<4}  check", "label", "")?;
        for c in &self.checks {
            let status = if c.passed { "PASS" } else { "FAIL" };
            writeln!(
                f,
                "{:<width$}  {status}  {}: {}",
                c.label, c.description, c.detail
            )?;
        }
        let passed = self.checks.iter().filter(|c| c.passed).count();
        write!(
            f,
            "{passed}/{} checks passed at cutoff {}",
            self.checks.len(),
            self.cutoff
        )
    }
}

type Outcome = Result<std::result::Result<String, String>>;

struct Check {
    label: &'static str,
    description: &'static str,
    run: fn(usize) -> Outcome,
}

const CHECKS: &[Check] = &[
    Check {
        label: "0.1b",
        description: "K(ku) = 1 + (t^3 + 2t^5)/(1 - t^4)",
        run: check_k_ku,
    },
    Check {
        label: "0.2b",
        description: "K(KU) = (1 + t) + (t^3 + 2t^5 + t^6)/(1 - t^4)",
        run: check_k_periodic_ku,
    },
    Check {
        label: "2.5a",
        description: "relative K(ku) = t^3/(1 - t^2) from ker(B)",
        run: check_relative_ku,
    },
    Check {
        label: "2.5b",
        description: "relative K(ko), K(ell(3)), K(ell(5)) from ker(B)",
        run: check_relative_ko_ell,
    },
    Check {
        label: "2.6",
        description: "K(ko) = 1 + 2t^5/(1 - t^4), A(S^3) and A(S^5) agree, K(ell) refused",
        run: check_absolute_and_a_theory,
    },
    Check {
        label: "2.12",
        description: "K(KU) - K(ku) = t K(Z)",
        run: check_localization,
    },
    Check {
        label: "2.13-series",
        description: "conjugation fixed points = (1 + t) + (2t^5 + t^6)/(1 - t^4), K(KO) refused",
        run: check_fixed_points,
    },
    Check {
        label: "3.3a",
        description: "HH series of the MU model = prod (1 + t^{2k+1})/(1 - t^{2k})",
        run: check_mu_hh,
    },
    Check {
        label: "3.3b",
        description: "de Rham homology of the MU model is Q in degree 0",
        run: check_mu_derham,
    },
    Check {
        label: "3.3c",
        description: "ker(B) of the MU model = (1 + t h(t))/(1 + t)",
        run: check_mu_kernel,
    },
    Check {
        label: "3.3d",
        description: "MSO model: HH series, de Rham homology and ker(B)",
        run: check_mso_model,
    },
    Check {
        label: "3.4a",
        description: "relative K(MU) = (t h(t) - t)/(1 + t)",
        run: check_relative_mu,
    },
    Check {
        label: "3.4b",
        description: "relative K(MSO) = relative K(MSp) = (t h_so(t) - t)/(1 + t)",
        run: check_relative_mso_msp,
    },
    Check {
        label: "3.5",
        description: "K(MU) = t^5/(1 - t^4) + (1 + t h(t))/(1 + t), same for MSO",
        run: check_absolute_mu_mso,
    },
    Check {
        label: "4.8",
        description: "unit maps for ku, ko, ell(3) are rational equivalences",
        run: check_unit_equivalences,
    },
    Check {
        label: "4.9",
        description:
            "unit map for MU: t(p(t) - 1) and (t h(t) - t)/(1 + t) first differ in degree 8",
        run: check_unit_mu,
    },
    Check {
        label: "1.8",
        description: "E^3 = ker(B) in column 0 for the ku and MU models",
        run: check_collapse,
    },
    Check {
        label: "1.9c",
        description: "im(B) = ker(B) in positive degrees for every preset",
        run: check_im_ker,
    },
    Check {
        label: "oracle",
        description: "bar complex agrees with the closed form for Q[x], |x| = 2, 4",
        run: check_oracle,
    },
];

/// Runs every check at `cutoff`. Errors from the engine are reported as
/// failed checks, not propagated.
pub fn verify_all(cutoff: usize) -> VerifyReport {
    let checks = thread::scope(|scope| {
        let handles: Vec<_> = CHECKS
            .iter()
            .map(|c| (c, scope.spawn(move || (c.run)(cutoff))))
            .collect();
        handles
            .into_iter()
            .map(|(c, h)| {
                let (passed, detail) = match h.join().expect("check panicked") {
                    Ok(Ok(d)) => (true, d),
                    Ok(Err(d)) => (false, d),
                    Err(e) => (false, format!("error: {e}")),
                };
                CheckResult {
                    label: c.label.into(),
                    description: c.description.into(),
                    passed,
                    detail,
                }
            })
            .collect()
    });
    VerifyReport { cutoff, checks }
}

fn closed(text: &str, cutoff: usize) -> TruncatedSeries {
    parse_rational_function(text)
        .expect("closed forms in the suite parse")
        .expand(cutoff)
}

fn compare(
    what: &str,
    got: &TruncatedSeries,
    want: &TruncatedSeries,
) -> std::result::Result<String, String> {
    match first_difference_degree(got, want) {
        None => Ok(format!(
            "{what} agrees through t^{}",
            got.cutoff().min(want.cutoff())
        )),
        Some(d) => Err(format!(
            "{what} differs at t^{d}: got {}, expected {}",
            got.coeff(d),
            want.coeff(d)
        )),
    }
}

/// Combines sub-results; the first failure wins.
fn all(parts: Vec<std::result::Result<String, String>>) -> std::result::Result<String, String> {
    let mut ok = Vec::with_capacity(parts.len());
    for p in parts {
        ok.push(p?);
    }
    Ok(ok.join("; "))
}

fn expect_refused(what: &str, r: Result<impl Sized>) -> std::result::Result<String, String> {
    match r {
        Err(KAssemblyError::Refused { .. }) => Ok(format!("{what} refused")),
        Err(e) => Err(format!("{what}: unexpected error {e}")),
        Ok(_) => Err(format!("{what} was not refused")),
    }
}

fn dims_ok(
    what: &str,
    dims: &[usize],
    want: impl Fn(usize) -> usize,
) -> std::result::Result<String, String> {
    match dims.iter().enumerate().find(|&(d, &x)| x != want(d)) {
        None => Ok(format!(
            "{what} as expected through degree {}",
            dims.len().saturating_sub(1)
        )),
        Some((d, &x)) => Err(format!("{what} is {x} in degree {d}, expected {}", want(d))),
    }
}

fn derham_trivial(d: usize) -> usize {
    usize::from(d == 0)
}

fn check_k_ku(c: usize) -> Outcome {
    let got = k_series(&Preset::Ku.descriptor(), c)?.total;
    Ok(compare(
        "K(ku)",
        &got,
        &closed("1 + (t^3 + 2t^5)/(1 - t^4)", c),
    ))
}

fn check_k_periodic_ku(c: usize) -> Outcome {
    let got = k_periodic_series(&Preset::Ku.descriptor(), c, PeriodicVariant::Localization)?.series;
    Ok(compare(
        "K(KU)",
        &got,
        &closed("(1 + t) + (t^3 + 2t^5 + t^6)/(1 - t^4)", c),
    ))
}

fn check_relative_ku(c: usize) -> Outcome {
    let got = relative_k_series(&Preset::Ku.descriptor(), c)?;
    Ok(compare("relative K(ku)", &got, &closed("t^3/(1 - t^2)", c)))
}

fn check_relative_ko_ell(c: usize) -> Outcome {
    let ko = relative_k_series(&Preset::Ko.descriptor(), c)?;
    let ell3 = relative_k_series(&Preset::ell(3)?.descriptor(), c)?;
    let ell5 = relative_k_series(&Preset::ell(5)?.descriptor(), c)?;
    Ok(all(vec![
        compare("ko", &ko, &closed("t^5/(1 - t^4)", c)),
        compare("ell(3)", &ell3, &closed("t^5/(1 - t^4)", c)),
        compare("ell(5)", &ell5, &closed("t^9/(1 - t^8)", c)),
    ]))
}

fn check_absolute_and_a_theory(c: usize) -> Outcome {
    let ku = k_series(&Preset::Ku.descriptor(), c)?.total;
    let ko = k_series(&Preset::Ko.descriptor(), c)?.total;
    Ok(all(vec![
        compare("K(ko)", &ko, &closed("1 + 2t^5/(1 - t^4)", c)),
        compare("A(S^3) vs K(ku)", &a_theory_sphere_series(1, c)?, &ku),
        compare("A(S^5) vs K(ko)", &a_theory_sphere_series(2, c)?, &ko),
        expect_refused("K(ell(3))", k_series(&Preset::ell(3)?.descriptor(), c)),
    ]))
}

fn check_localization(c: usize) -> Outcome {
    let ku = Preset::Ku.descriptor();
    let periodic = k_periodic_series(&ku, c, PeriodicVariant::Localization)?.series;
    let connective = k_series(&ku, c)?.total;
    let shifted_base = closed("1 + t^5/(1 - t^4)", c).shift(1);
    Ok(compare(
        "K(KU) - K(ku)",
        &(&periodic - &connective),
        &shifted_base,
    ))
}

fn check_fixed_points(c: usize) -> Outcome {
    let fixed = k_periodic_series(&Preset::Ku.descriptor(), c, PeriodicVariant::FixedPoints)?;
    let annotated = fixed
        .annotation
        .as_deref()
        .is_some_and(|a| a.starts_with("plausibility"));
    Ok(all(vec![
        compare(
            "fixed points",
            &fixed.series,
            &closed("(1 + t) + (2t^5 + t^6)/(1 - t^4)", c),
        ),
        if annotated {
            Ok("annotated as plausibility".into())
        } else {
            Err("missing plausibility annotation".into())
        },
        expect_refused(
            "K(KO)",
            k_periodic_series(&Preset::Ko.descriptor(), c, PeriodicVariant::Localization),
        ),
    ]))
}

fn check_mu_hh(c: usize) -> Outcome {
    let model = Preset::Mu.descriptor().hh_model(c as u32)?;
    Ok(compare(
        "HH(MU model)",
        &model.hh_series(c)?,
        &family_hh_series(2, c)?,
    ))
}

fn check_mu_derham(c: usize) -> Outcome {
    let model = Preset::Mu.descriptor().hh_model(c as u32 + 1)?;
    Ok(dims_ok(
        "de Rham dim",
        &model.derham_dims(c as u32)?,
        derham_trivial,
    ))
}

fn check_mu_kernel(c: usize) -> Outcome {
    let model = Preset::Mu.descriptor().hh_model(c as u32 + 1)?;
    let want = kernel_series_closed_form(&family_hh_series(2, c)?);
    Ok(compare("ker(B)", &model.kernel_series(c)?, &want))
}

fn check_mso_model(c: usize) -> Outcome {
    let model = Preset::Mso.descriptor().hh_model(c as u32 + 1)?;
    let h_so = family_hh_series(4, c)?;
    Ok(all(vec![
        compare("HH(MSO model)", &model.hh_series(c)?, &h_so),
        dims_ok("de Rham dim", &model.derham_dims(c as u32)?, derham_trivial),
        compare(
            "ker(B)",
            &model.kernel_series(c)?,
            &kernel_series_closed_form(&h_so),
        ),
    ]))
}

fn relative_closed_form(step: usize, c: usize) -> Result<TruncatedSeries> {
    Ok(kernel_series_closed_form(&family_hh_series(step, c)?).positive_part())
}

fn check_relative_mu(c: usize) -> Outcome {
    let got = relative_k_series(&Preset::Mu.descriptor(), c)?;
    Ok(compare(
        "relative K(MU)",
        &got,
        &relative_closed_form(2, c)?,
    ))
}

fn check_relative_mso_msp(c: usize) -> Outcome {
    let mso = relative_k_series(&Preset::Mso.descriptor(), c)?;
    let msp = relative_k_series(&Preset::Msp.descriptor(), c)?;
    Ok(all(vec![
        compare("relative K(MSO)", &mso, &relative_closed_form(4, c)?),
        compare("relative K(MSp) vs K(MSO)", &msp, &mso),
    ]))
}

fn check_absolute_mu_mso(c: usize) -> Outcome {
    let borel_tail = closed("t^5/(1 - t^4)", c);
    let mu = k_series(&Preset::Mu.descriptor(), c)?.total;
    let mso = k_series(&Preset::Mso.descriptor(), c)?.total;
    let want_mu = &borel_tail + &kernel_series_closed_form(&family_hh_series(2, c)?);
    let want_mso = &borel_tail + &kernel_series_closed_form(&family_hh_series(4, c)?);
    Ok(all(vec![
        compare("K(MU)", &mu, &want_mu),
        compare("K(MSO)", &mso, &want_mso),
    ]))
}

fn check_unit_equivalences(c: usize) -> Outcome {
    let mut parts = Vec::new();
    for preset in [Preset::Ku, Preset::Ko, Preset::ell(3)?] {
        let r = unit_map_comparison(&preset.descriptor(), c)?;
        parts.push(match r.first_difference {
            None => Ok(format!("{preset}: equal")),
            Some(d) => Err(format!("{preset}: series differ at t^{d}")),
        });
    }
    Ok(all(parts))
}

fn check_unit_mu(c: usize) -> Outcome {
    let r = unit_map_comparison(&Preset::Mu.descriptor(), c)?;
    let p = family_homotopy_series(2, c)?;
    let (want_diff, want_ranks) = if c >= 8 {
        (Some(8), Some((0, 1)))
    } else {
        (None, None)
    };
    Ok(all(vec![
        compare("bsl1", &r.bsl1, &p.positive_part().shift(1)),
        compare("relative", &r.relative, &relative_closed_form(2, c)?),
        if r.first_difference == want_diff && r.ranks_at_difference == want_ranks {
            Ok(match want_diff {
                Some(d) => format!("first difference t^{d}, ranks 0 vs 1"),
                None => "no difference below t^8".into(),
            })
        } else {
            Err(format!(
                "first difference {:?} with ranks {:?}, expected {want_diff:?} with {want_ranks:?}",
                r.first_difference, r.ranks_at_difference
            ))
        },
    ]))
}

fn check_collapse(c: usize) -> Outcome {
    let mut parts = Vec::new();
    for (preset, degrees, columns) in [(Preset::Ku, 8, 3), (Preset::Mu, 9, 2)] {
        let degrees = degrees.min(c as u32).max(1);
        let model = preset.descriptor().hh_model(degrees + 2 * columns + 2)?;
        let report = model.collapse_check(degrees, columns)?;
        parts.push(if report.collapsed() {
            Ok(format!("{preset}: collapsed (D={degrees}, C={columns})"))
        } else {
            Err(format!("{preset}: E^3 = {:?}", report.e3))
        });
    }
    Ok(all(parts))
}

fn check_im_ker(c: usize) -> Outcome {
    let mut parts = Vec::new();
    for preset in [
        Preset::Ku,
        Preset::Ko,
        Preset::ell(3)?,
        Preset::Mu,
        Preset::Mso,
        Preset::Msp,
    ] {
        let model = preset.descriptor().hh_model(c as u32 + 1)?;
        let report = model.im_equals_ker_positive(c as u32)?;
        parts.push(match report.per_degree.iter().find(|r| !r.equal) {
            None => Ok(format!("{preset}")),
            Some(r) => Err(format!(
                "{preset}: degree {} has ker {} vs im {}",
                r.degree, r.kernel, r.image
            )),
        });
    }
    Ok(all(parts).map(|ok| format!("holds for {ok}")))
}

fn check_oracle(c: usize) -> Outcome {
    let max_degree = c.min(10) as u32;
    let mut parts = Vec::new();
    for degree in [2, 4] {
        let cmp = compare_with_closed_form(&[degree], max_degree)?;
        parts.push(if cmp.passed() {
            Ok(format!("|x|={degree} through {max_degree}"))
        } else {
            Err(format!("|x|={degree}: oracle disagrees"))
        });
    }
    Ok(all(parts))
}
