//! Verification suites run against a parsed manifold.

use std::sync::Arc;

use frobenius_core::geometry::{
    euler_residual, f_identity_residual, leibniz_form_residual, metric_lie_derivative,
    poisson_kernel_basis, power_bracket_residuals, virasoro_residual, wdvv_residual, FrobeniusData,
    VectorField,
};
use frobenius_core::rational::format_rational;
use frobenius_core::sampling::{
    random_box_point, random_field, random_parity, seeded, SampleShape,
};
use frobenius_core::semisimple::{
    flatness_gamma_criterion, frame_commutativity_residual, idempotent_frame,
    metric_transfer_residual, sqrt_fields, DiagonalFrame, FrameOptions, SemisimpleError, SharedFn,
};
use frobenius_core::transforms::{
    euler_spectrum_shift, flat_spectrum, legendre_transform, EulerFieldData, LegendreOptions,
    LegendreTransform, TransformError,
};
use frobenius_core::{GradedSeries, Parity, Rational};
use rayon::prelude::*;

use crate::manifest::Manifold;
use crate::report::{exact_residual, CheckRecord, Status, SuiteReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, clap::ValueEnum)]
pub enum Suite {
    Fidentity,
    Wdvv,
    Euler,
    Virasoro,
    Kernel,
    Canonical,
    Legendre,
    All,
}

impl Suite {
    pub const EACH: [Suite; 7] = [
        Suite::Fidentity,
        Suite::Wdvv,
        Suite::Euler,
        Suite::Virasoro,
        Suite::Kernel,
        Suite::Canonical,
        Suite::Legendre,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Fidentity => "fidentity",
            Suite::Wdvv => "wdvv",
            Suite::Euler => "euler",
            Suite::Virasoro => "virasoro",
            Suite::Kernel => "kernel",
            Suite::Canonical => "canonical",
            Suite::Legendre => "legendre",
            Suite::All => "all",
        }
    }
}

/// Settings shared by all suites.
#[derive(Debug, Clone, PartialEq)]
pub struct SuiteFlags {
    pub samples: usize,
    pub seed: u64,
    pub nmax: u32,
    pub point: Option<Vec<f64>>,
    pub tol: f64,
    pub step: f64,
    pub degree: u32,
    pub field: Option<Vec<Rational>>,
    pub cap: Option<i32>,
}

impl Default for SuiteFlags {
    fn default() -> Self {
        Self {
            samples: 20,
            seed: 0,
            nmax: 4,
            point: None,
            tol: 1e-6,
            step: 1e-5,
            degree: 3,
            field: None,
            cap: None,
        }
    }
}

/// Cap used for a nonlinear Legendre change when neither the file nor the
/// flags give one.
pub const DEFAULT_LEGENDRE_CAP: i32 = 8;

mod anchor {
    pub const F_IDENTITY: &str = "F-manifold identity";
    pub const LEIBNIZ: &str = "derivation form of the F-manifold identity";
    pub const WDVV: &str = "associativity of the potential product";
    pub const EULER: &str = "weak Euler field condition";
    pub const EULER_UNIT: &str = "Euler weight on the identity";
    pub const CONFORMAL: &str = "conformal weight of the metric";
    pub const SPECTRUM: &str = "spectrum of -ad E on flat fields";
    pub const WITT: &str = "Witt relations for Euler powers";
    pub const POWER: &str = "power-bracket relations";
    pub const KERNEL: &str = "Poisson kernel subalgebra";
    pub const FRAME: &str = "idempotent frame";
    pub const COMMUTING: &str = "commuting idempotent fields";
    pub const SQRT: &str = "square-root fields transferring diagonal metrics";
    pub const CRITERION: &str = "flatness versus rotation-coefficient criterion";
    pub const COORDS: &str = "Legendre-type coordinates";
    pub const HESSIAN: &str = "Hessian identity of the transformed potential";
    pub const INTEGRABILITY: &str = "integrability symmetry of the Legendre change";
    pub const PUSHFORWARD: &str = "multiplication preserved by the Legendre change";
    pub const NEW_IDENTITY: &str = "flat identity after the Legendre change";
    pub const SHIFT_CONFORMAL: &str = "shifted conformal weight after the Legendre change";
    pub const SHIFT_SPECTRUM: &str = "shifted flat spectrum after the Legendre change";
}

fn report(suite: Suite, flags: &SuiteFlags) -> SuiteReport {
    SuiteReport {
        suite: suite.name().to_string(),
        seed: flags.seed,
        samples: flags.samples,
        tol: flags.tol,
        step: flags.step,
        records: Vec::new(),
        notices: Vec::new(),
    }
}

fn rationals(v: &[Rational]) -> String {
    let parts: Vec<String> = v.iter().map(format_rational).collect();
    format!("[{}]", parts.join(", "))
}

fn floats(v: &[f64]) -> String {
    let parts: Vec<String> = v.iter().map(|x| format!("{x:.6}")).collect();
    format!("[{}]", parts.join(", "))
}

/// `1/2*x1^2*x2 + t1*t2` style text; even coordinates are `x`, odd ones `t`,
/// numbered by chart position.
pub fn format_series(s: &GradedSeries, parities: &[Parity]) -> String {
    let even: Vec<usize> = (0..parities.len())
        .filter(|&a| parities[a] == Parity::Even)
        .collect();
    let odd: Vec<usize> = (0..parities.len())
        .filter(|&a| parities[a] == Parity::Odd)
        .collect();
    let terms: Vec<String> = s
        .terms()
        .map(|(m, c)| {
            let mut factors = Vec::new();
            for (i, &e) in m.exps().iter().enumerate() {
                match e {
                    0 => {}
                    1 => factors.push(format!("x{}", even[i] + 1)),
                    _ => factors.push(format!("x{}^{e}", even[i] + 1)),
                }
            }
            for j in m.odd_indices() {
                factors.push(format!("t{}", odd[j] + 1));
            }
            match (factors.is_empty(), format_rational(c).as_str()) {
                (true, c) => c.to_string(),
                (false, "1") => factors.join("*"),
                (false, "-1") => format!("-{}", factors.join("*")),
                (false, c) => format!("{c}*{}", factors.join("*")),
            }
        })
        .collect();
    if terms.is_empty() {
        "0".to_string()
    } else {
        terms.join(" + ")
    }
}

fn format_field(x: &VectorField) -> String {
    let parities = x.chart().parities();
    let parts: Vec<String> = x
        .components()
        .iter()
        .map(|c| format_series(c, parities))
        .collect();
    format!("({})", parts.join(", "))
}

fn flat_fields(data: &FrobeniusData) -> Vec<VectorField> {
    (0..data.dim()).map(|a| data.flat_field(a)).collect()
}

fn fidentity(m: &Manifold, flags: &SuiteFlags) -> SuiteReport {
    let mut rep = report(Suite::Fidentity, flags);
    let data = &m.data;
    let c = data.multiplication();
    let n = data.dim();
    let flat = flat_fields(data);
    let quads: Vec<[usize; 4]> = (0..n.pow(4))
        .map(|k| [k / (n * n * n), (k / (n * n)) % n, (k / n) % n, k % n])
        .collect();
    let residuals: Vec<VectorField> = quads
        .par_iter()
        .map(|q| f_identity_residual(&flat[q[0]], &flat[q[1]], &flat[q[2]], &flat[q[3]], c))
        .collect();
    let bad: Vec<usize> = (0..quads.len())
        .filter(|&k| !residuals[k].vanishes())
        .collect();
    let worst = residuals
        .iter()
        .map(VectorField::max_abs_coeff)
        .fold(0.0, f64::max);
    let degree = residuals.iter().fold(None, |v, r| {
        frobenius_core::series::min_validity(v, r.validity())
    });
    let detail = match bad.first() {
        None => format!("{} flat quadruples", quads.len()),
        Some(&k) => format!(
            "{} of {} flat quadruples nonzero; first {:?}",
            bad.len(),
            quads.len(),
            quads[k]
        ),
    };
    let status = if bad.is_empty() {
        Status::Pass
    } else {
        Status::Fail
    };
    rep.records.push(
        CheckRecord::new(
            "fidentity",
            "fidentity/flat",
            anchor::F_IDENTITY,
            status,
            exact_residual(bad.is_empty(), worst),
        )
        .with_degree(degree)
        .with_detail(detail),
    );

    let chart = data.chart();
    let mut rng = seeded(flags.seed);
    let samples: Vec<Vec<VectorField>> = (0..flags.samples)
        .map(|_| {
            (0..4)
                .map(|_| {
                    let p = random_parity(chart, &mut rng);
                    random_field(chart, p, SampleShape::default(), &mut rng)
                })
                .collect()
        })
        .collect();
    let results: Vec<(VectorField, VectorField)> = samples
        .par_iter()
        .map(|q| {
            let nine = f_identity_residual(&q[0], &q[1], &q[2], &q[3], c);
            let leibniz = leibniz_form_residual(&q[0], &q[1], &q[2], &q[3], c);
            (nine, leibniz)
        })
        .collect();
    for (k, (nine, leibniz)) in results.iter().enumerate() {
        rep.records.push(CheckRecord::exact(
            "fidentity",
            format!("fidentity/random/{k}"),
            anchor::F_IDENTITY,
            nine,
        ));
        let gap = nine.clone() - leibniz.clone();
        rep.records.push(CheckRecord::exact(
            "fidentity",
            format!("fidentity/leibniz/{k}"),
            anchor::LEIBNIZ,
            &gap,
        ));
    }
    rep
}

fn skip(rep: &mut SuiteReport, check: &str, anchor: &str, why: &str) {
    rep.notices.push(format!("{check}: {why}"));
    rep.records.push(
        CheckRecord::new(&rep.suite.clone(), check, anchor, Status::Skip, "n/a").with_detail(why),
    );
}

fn wdvv(m: &Manifold, flags: &SuiteFlags) -> SuiteReport {
    let mut rep = report(Suite::Wdvv, flags);
    if m.data.metric().is_none() {
        skip(
            &mut rep,
            "wdvv/associators",
            anchor::WDVV,
            "no metric in the file; metric suite skipped",
        );
        return rep;
    }
    let c = m.data.multiplication();
    let n = m.data.dim();
    let bad = wdvv_residual(c);
    let worst = bad
        .iter()
        .map(|a| a.residual.max_abs_coeff())
        .fold(0.0, f64::max);
    let status = if bad.is_empty() {
        Status::Pass
    } else {
        Status::Fail
    };
    let detail = match bad.first() {
        None => format!("{} index triples", n * n * n),
        Some(a) => format!(
            "{} of {} triples nonzero; first {:?}",
            bad.len(),
            n * n * n,
            a.indices
        ),
    };
    rep.records.push(
        CheckRecord::new(
            "wdvv",
            "wdvv/associators",
            anchor::WDVV,
            status,
            exact_residual(bad.is_empty(), worst),
        )
        .with_degree(c.validity())
        .with_detail(detail),
    );
    rep
}

fn euler(m: &Manifold, flags: &SuiteFlags) -> SuiteReport {
    let mut rep = report(Suite::Euler, flags);
    let data = &m.data;
    let Some(eu) = data.euler() else {
        skip(
            &mut rep,
            "euler/product",
            anchor::EULER,
            "no Euler field in the file",
        );
        return rep;
    };
    let identity = data.identity().ok();
    let r = match euler_residual(&eu.field, &eu.d0, data.multiplication(), identity.as_ref()) {
        Ok(r) => r,
        Err(e) => {
            rep.records.push(
                CheckRecord::new(
                    "euler",
                    "euler/product",
                    anchor::EULER,
                    Status::Error,
                    "n/a",
                )
                .with_detail(e.to_string()),
            );
            return rep;
        }
    };
    let bad: Vec<(usize, usize)> = r
        .pairs
        .iter()
        .filter(|(_, v)| !v.vanishes())
        .map(|(p, _)| *p)
        .collect();
    let worst = r
        .pairs
        .iter()
        .map(|(_, v)| v.max_abs_coeff())
        .fold(0.0, f64::max);
    let status = if bad.is_empty() {
        Status::Pass
    } else {
        Status::Fail
    };
    let detail = match bad.first() {
        None => format!("weight d0 = {}", format_rational(&eu.d0)),
        Some(p) => format!(
            "{} of {} flat pairs nonzero; first {p:?}",
            bad.len(),
            r.pairs.len()
        ),
    };
    rep.records.push(
        CheckRecord::new(
            "euler",
            "euler/product",
            anchor::EULER,
            status,
            exact_residual(bad.is_empty(), worst),
        )
        .with_detail(detail),
    );
    match &r.unit {
        Some(u) => rep.records.push(CheckRecord::exact(
            "euler",
            "euler/unit",
            anchor::EULER_UNIT,
            u,
        )),
        None => skip(
            &mut rep,
            "euler/unit",
            anchor::EULER_UNIT,
            "no identity field",
        ),
    }
    match data.metric() {
        Some(g) => {
            let lie = metric_lie_derivative(g, &eu.field);
            let measured = EulerFieldData::verify(data, eu.field.clone(), eu.d0.clone())
                .ok()
                .and_then(|v| v.conformal);
            let rec = match measured {
                Some(w) => CheckRecord::new(
                    "euler",
                    "euler/conformal",
                    anchor::CONFORMAL,
                    Status::Pass,
                    "exact-zero",
                )
                .with_detail(format!("D = {}", format_rational(&w))),
                None => {
                    let worst = lie
                        .iter()
                        .flatten()
                        .map(GradedSeries::max_abs_coeff)
                        .fold(0.0, f64::max);
                    CheckRecord::new(
                        "euler",
                        "euler/conformal",
                        anchor::CONFORMAL,
                        Status::Fail,
                        exact_residual(false, worst),
                    )
                    .with_detail("Lie_E g is not a constant multiple of g")
                }
            };
            rep.records.push(rec);
        }
        None => skip(
            &mut rep,
            "euler/conformal",
            anchor::CONFORMAL,
            "no metric in the file; metric check skipped",
        ),
    }
    match flat_spectrum(&eu.field) {
        Some(mat) => {
            let rows: Vec<String> = mat.to_rows().iter().map(|r| rationals(r)).collect();
            rep.records.push(
                CheckRecord::new(
                    "euler",
                    "euler/spectrum",
                    anchor::SPECTRUM,
                    Status::Pass,
                    "exact-zero",
                )
                .with_detail(format!("matrix [{}]", rows.join(", "))),
            );
        }
        None => skip(
            &mut rep,
            "euler/spectrum",
            anchor::SPECTRUM,
            "-ad E is not constant on flat fields",
        ),
    }
    rep
}

fn virasoro(m: &Manifold, flags: &SuiteFlags) -> SuiteReport {
    let mut rep = report(Suite::Virasoro, flags);
    let data = &m.data;
    let Some(eu) = data.euler() else {
        skip(
            &mut rep,
            "virasoro/witt",
            anchor::WITT,
            "no Euler field in the file",
        );
        return rep;
    };
    let Ok(e) = data.identity() else {
        skip(&mut rep, "virasoro/witt", anchor::WITT, "no identity field");
        return rep;
    };
    let c = data.multiplication();
    let nm: Vec<(u32, u32)> = (0..=flags.nmax)
        .flat_map(|n| (0..=flags.nmax).map(move |k| (n, k)))
        .collect();
    let witt: Vec<_> = nm
        .par_iter()
        .map(|&(n, k)| virasoro_residual(&eu.field, &eu.d0, n, k, c, &e))
        .collect();
    for (&(n, k), r) in nm.iter().zip(witt) {
        let check = format!("virasoro/witt/{n},{k}");
        rep.records.push(match r {
            Ok(v) => CheckRecord::exact("virasoro", check, anchor::WITT, &v),
            Err(err) => CheckRecord::new("virasoro", check, anchor::WITT, Status::Error, "n/a")
                .with_detail(err.to_string()),
        });
    }
    let powers: Vec<_> = nm
        .par_iter()
        .map(|&(n, k)| power_bracket_residuals(&eu.field, n, k, c, &e))
        .collect();
    for (&(n, k), r) in nm.iter().zip(powers) {
        let check = format!("virasoro/power/E/{n},{k}");
        rep.records.push(match r {
            Ok(p) => {
                let zero = p.vanishes();
                let worst = [&p.unit, &p.single, &p.pair]
                    .iter()
                    .map(|v| v.max_abs_coeff())
                    .fold(0.0, f64::max);
                CheckRecord::new(
                    "virasoro",
                    check,
                    anchor::POWER,
                    if zero { Status::Pass } else { Status::Fail },
                    exact_residual(zero, worst),
                )
            }
            Err(err) => CheckRecord::new("virasoro", check, anchor::POWER, Status::Error, "n/a")
                .with_detail(err.to_string()),
        });
    }
    let chart = data.chart();
    let mut rng = seeded(flags.seed);
    let fields: Vec<VectorField> = (0..flags.samples)
        .map(|_| random_field(chart, Parity::Even, SampleShape::default(), &mut rng))
        .collect();
    let top = flags.nmax.max(1);
    let units: Vec<_> = fields
        .par_iter()
        .enumerate()
        .map(|(k, x)| power_bracket_residuals(x, 1 + k as u32 % top, 1, c, &e))
        .collect();
    for (k, r) in units.into_iter().enumerate() {
        let check = format!("virasoro/power/random/{k}");
        rep.records.push(match r {
            Ok(p) => CheckRecord::exact("virasoro", check, anchor::POWER, &p.unit)
                .with_detail(format!("n = {}", 1 + k as u32 % top)),
            Err(err) => CheckRecord::new("virasoro", check, anchor::POWER, Status::Error, "n/a")
                .with_detail(err.to_string()),
        });
    }
    rep
}

fn kernel(m: &Manifold, flags: &SuiteFlags) -> SuiteReport {
    let mut rep = report(Suite::Kernel, flags);
    let c = m.data.multiplication();
    let basis = match poisson_kernel_basis(c, flags.degree) {
        Ok(b) => b,
        Err(e) => {
            skip(
                &mut rep,
                "kernel/basis",
                anchor::KERNEL,
                &format!("not applicable: {e}"),
            );
            return rep;
        }
    };
    rep.records.push(
        CheckRecord::new(
            "kernel",
            "kernel/basis",
            anchor::KERNEL,
            Status::Pass,
            "exact-zero",
        )
        .with_detail(format!(
            "dimension {} at degree bound {}",
            basis.dimension(),
            basis.degree_bound
        )),
    );
    for (name, ok) in [
        ("product", basis.closed_under_product),
        ("bracket", basis.closed_under_bracket),
    ] {
        let status = if ok { Status::Pass } else { Status::Fail };
        rep.records.push(CheckRecord::new(
            "kernel",
            format!("kernel/closure/{name}"),
            anchor::KERNEL,
            status,
            if ok { "exact-zero" } else { "nonzero" },
        ));
    }
    for (k, x) in basis.basis.iter().enumerate() {
        rep.records.push(
            CheckRecord::new(
                "kernel",
                format!("kernel/element/{k}"),
                anchor::KERNEL,
                Status::Pass,
                "exact-zero",
            )
            .with_detail(format_field(x)),
        );
    }
    rep
}

fn semisimple_error(check: String, anchor: &str, e: &SemisimpleError) -> CheckRecord {
    CheckRecord::new("canonical", check, anchor, Status::Error, "n/a").with_detail(e.to_string())
}

fn canonical(m: &Manifold, flags: &SuiteFlags) -> SuiteReport {
    let mut rep = report(Suite::Canonical, flags);
    let data = &m.data;
    if m.diagonal.is_none() && flags.point.is_none() {
        skip(
            &mut rep,
            "canonical/frame",
            anchor::FRAME,
            "needs --point or a diagonal_frame section",
        );
        return rep;
    }
    if let Some(point) = &flags.point {
        let opts = FrameOptions {
            seed: flags.seed,
            ..FrameOptions::default()
        };
        let c = data.multiplication();
        match idempotent_frame(c, point, opts) {
            Ok(f) => {
                let frame: Vec<String> = f.frame.iter().map(|v| floats(v)).collect();
                rep.records.push(
                    CheckRecord::numeric(
                        "canonical",
                        "canonical/frame",
                        anchor::FRAME,
                        f.idempotency_residual,
                        flags.tol,
                    )
                    .with_detail(format!(
                        "eigenvalues {}; idempotents [{}]",
                        floats(&f.eigenvalues),
                        frame.join(", ")
                    )),
                );
                rep.records.push(
                    match frame_commutativity_residual(c, point, flags.step, opts) {
                        Ok(r) => CheckRecord::numeric(
                            "canonical",
                            "canonical/commutativity",
                            anchor::COMMUTING,
                            r,
                            flags.tol,
                        ),
                        Err(e) => semisimple_error(
                            "canonical/commutativity".into(),
                            anchor::COMMUTING,
                            &e,
                        ),
                    },
                );
            }
            Err(e) => rep.records.push(semisimple_error(
                "canonical/frame".into(),
                anchor::FRAME,
                &e,
            )),
        }
    }
    if let Some(diag) = &m.diagonal {
        let eta: Vec<SharedFn> = diag
            .eta
            .iter()
            .map(|e| Arc::new(e.clone()) as SharedFn)
            .collect();
        let Some(tilde) = &diag.eta_tilde else {
            skip(
                &mut rep,
                "canonical/sqrt-fields",
                anchor::SQRT,
                "diagonal_frame has no eta_tilde",
            );
            return rep;
        };
        let eta_tilde: Vec<SharedFn> = tilde
            .iter()
            .map(|e| Arc::new(e.clone()) as SharedFn)
            .collect();
        let n = eta.len();
        let mut rng = seeded(flags.seed);
        let points: Vec<Vec<f64>> = match &flags.point {
            Some(p) if p.len() == n => vec![p.clone()],
            _ => (0..flags.samples.max(1))
                .map(|_| random_box_point(n, &mut rng))
                .collect(),
        };
        let frame = match DiagonalFrame::new(eta.clone()).with_tilde(eta_tilde.clone()) {
            Ok(f) => f,
            Err(e) => {
                rep.records.push(semisimple_error(
                    "canonical/sqrt-fields".into(),
                    anchor::SQRT,
                    &e,
                ));
                return rep;
            }
        };
        let u0 = &points[0];
        let ev: Vec<f64> = eta.iter().map(|f| f.value(u0)).collect();
        let evt: Vec<f64> = eta_tilde.iter().map(|f| f.value(u0)).collect();
        let fields = match sqrt_fields(&ev, &evt) {
            Ok(f) => f,
            Err(e) => {
                rep.records.push(semisimple_error(
                    "canonical/sqrt-fields".into(),
                    anchor::SQRT,
                    &e,
                ));
                return rep;
            }
        };
        let transfer = fields
            .iter()
            .map(|f| metric_transfer_residual(&ev, &evt, &f.d))
            .fold(0.0, f64::max);
        let count_ok = fields.len() == 1 << n;
        let mut rec = CheckRecord::numeric(
            "canonical",
            "canonical/sqrt-fields",
            anchor::SQRT,
            transfer,
            flags.tol,
        )
        .with_detail(format!("{} fields, expected {}", fields.len(), 1usize << n));
        if !count_ok {
            rec.status = Status::Fail;
        }
        rep.records.push(rec);
        let verdicts: Vec<_> = fields
            .par_iter()
            .map(|f| flatness_gamma_criterion(&frame, &f.signs, &points, flags.tol))
            .collect();
        for (mask, v) in verdicts.into_iter().enumerate() {
            let check = format!("canonical/criterion/{mask}");
            rep.records.push(match v {
                Ok(v) => CheckRecord::new(
                    "canonical",
                    check,
                    anchor::CRITERION,
                    if v.agree() {
                        Status::Pass
                    } else {
                        Status::Fail
                    },
                    crate::report::format_float(v.max_covariant.min(v.max_gamma_gap)),
                )
                .with_detail(format!(
                    "flat = {}, same rotation = {}, max covariant {:.3e}, max gamma gap {:.3e}",
                    v.flat, v.same_rotation, v.max_covariant, v.max_gamma_gap
                )),
                Err(e) => semisimple_error(check, anchor::CRITERION, &e),
            });
        }
    }
    rep
}

fn transform_error(check: &str, anchor: &str, e: &TransformError) -> CheckRecord {
    CheckRecord::new("legendre", check, anchor, Status::Error, "n/a").with_detail(e.to_string())
}

fn pass_fail(ok: bool) -> Status {
    if ok {
        Status::Pass
    } else {
        Status::Fail
    }
}

/// Runs the Legendre suite; also returns the transformed data when the
/// transform could be built.
pub fn legendre(m: &Manifold, flags: &SuiteFlags) -> (SuiteReport, Option<FrobeniusData>) {
    let mut rep = report(Suite::Legendre, flags);
    let data = &m.data;
    if data.metric().is_none() {
        skip(
            &mut rep,
            "legendre/coordinates",
            anchor::COORDS,
            "no metric in the file; metric suite skipped",
        );
        return (rep, None);
    }
    if !data.chart().is_pure_even() {
        skip(
            &mut rep,
            "legendre/coordinates",
            anchor::COORDS,
            "Legendre transforms need a pure-even chart",
        );
        return (rep, None);
    }
    let field = match &flags.field {
        Some(coeffs) => {
            VectorField::constant(data.chart().clone(), coeffs).map_err(TransformError::from)
        }
        None => data.identity().map_err(TransformError::from).and_then(|e| {
            e.constant_coefficients()
                .map(|_| e)
                .ok_or(TransformError::NotFlat)
        }),
    };
    let field = match field {
        Ok(f) => f,
        Err(e) => {
            rep.records
                .push(transform_error("legendre/coordinates", anchor::COORDS, &e));
            return (rep, None);
        }
    };
    let mut opts = LegendreOptions { cap: flags.cap };
    let mut attempt = legendre_transform(data, &field, opts);
    if matches!(attempt, Err(TransformError::NeedsCap)) {
        rep.notices
            .push(format!("no degree cap given; using {DEFAULT_LEGENDRE_CAP}"));
        opts.cap = Some(DEFAULT_LEGENDRE_CAP);
        attempt = legendre_transform(data, &field, opts);
    }
    let t: LegendreTransform = match attempt {
        Ok(t) => t,
        Err(e) => {
            rep.records
                .push(transform_error("legendre/coordinates", anchor::COORDS, &e));
            return (rep, None);
        }
    };
    let deg = t.certified_degree;
    let coeffs = t.coordinates.field.clone();
    rep.records.push(
        CheckRecord::new(
            "legendre",
            "legendre/coordinates",
            anchor::COORDS,
            Status::Pass,
            "exact-zero",
        )
        .with_detail(format!(
            "field {}; Jacobian equals the matrix of the field product",
            rationals(&coeffs)
        )),
    );
    let ck = &t.checks;
    for (check, anchor, ok) in [
        ("legendre/hessian", anchor::HESSIAN, ck.hessian),
        (
            "legendre/integrability",
            anchor::INTEGRABILITY,
            ck.integrability,
        ),
        ("legendre/pushforward", anchor::PUSHFORWARD, ck.pushforward),
    ] {
        rep.records.push(
            CheckRecord::new(
                "legendre",
                check,
                anchor,
                pass_fail(ok),
                if ok { "exact-zero" } else { "nonzero" },
            )
            .with_degree(deg),
        );
    }
    let identity = ck
        .identity
        .as_ref()
        .map_or("none".to_string(), |v| rationals(v));
    rep.records.push(
        CheckRecord::new(
            "legendre",
            "legendre/identity",
            anchor::NEW_IDENTITY,
            pass_fail(ck.identity_flat),
            if ck.identity_flat {
                "exact-zero"
            } else {
                "nonzero"
            },
        )
        .with_detail(format!("new identity {identity}")),
    );

    if let Some(eu) = data.euler() {
        let verified = EulerFieldData::verify(data, eu.field.clone(), eu.d0.clone());
        match verified
            .and_then(|v| euler_spectrum_shift(data, &v, &field, None, opts).map(|s| (v, s)))
        {
            Ok((v, s)) => {
                let claimed = s
                    .claimed
                    .conformal
                    .as_ref()
                    .map_or("?".into(), format_rational);
                let measured = s
                    .measured_conformal
                    .as_ref()
                    .map_or("none".into(), format_rational);
                rep.records.push(
                    CheckRecord::new(
                        "legendre",
                        "legendre/euler-shift/conformal",
                        anchor::SHIFT_CONFORMAL,
                        pass_fail(s.conformal_verified),
                        if s.conformal_verified {
                            "exact-zero"
                        } else {
                            "nonzero"
                        },
                    )
                    .with_degree(s.certified_degree)
                    .with_detail(format!(
                        "d = {}, D = {}, claimed {claimed}, measured {measured}",
                        format_rational(&s.d),
                        v.conformal.as_ref().map_or("?".into(), format_rational)
                    )),
                );
                let claimed_rows: Vec<String> = s
                    .claimed_matrix
                    .to_rows()
                    .iter()
                    .map(|r| rationals(r))
                    .collect();
                rep.records.push(
                    CheckRecord::new(
                        "legendre",
                        "legendre/euler-shift/spectrum",
                        anchor::SHIFT_SPECTRUM,
                        pass_fail(s.spectrum_verified),
                        if s.spectrum_verified {
                            "exact-zero"
                        } else {
                            "nonzero"
                        },
                    )
                    .with_degree(s.certified_degree)
                    .with_detail(format!("claimed matrix [{}]", claimed_rows.join(", "))),
                );
            }
            Err(e) => skip(
                &mut rep,
                "legendre/euler-shift/conformal",
                anchor::SHIFT_CONFORMAL,
                &format!("not applicable: {e}"),
            ),
        }
    }
    (rep, Some(t.data))
}

/// Runs one suite, or every suite in order for [`Suite::All`].
pub fn run_suite(m: &Manifold, suite: Suite, flags: &SuiteFlags) -> Vec<SuiteReport> {
    match suite {
        Suite::All => Suite::EACH
            .iter()
            .flat_map(|&s| run_suite(m, s, flags))
            .collect(),
        Suite::Fidentity => vec![fidentity(m, flags)],
        Suite::Wdvv => vec![wdvv(m, flags)],
        Suite::Euler => vec![euler(m, flags)],
        Suite::Virasoro => vec![virasoro(m, flags)],
        Suite::Kernel => vec![kernel(m, flags)],
        Suite::Canonical => vec![canonical(m, flags)],
        Suite::Legendre => vec![legendre(m, flags).0],
    }
}
