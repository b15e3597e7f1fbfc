//! The manifold file: a JSON document describing local F-manifold or
//! Frobenius data with exact rational coefficients.
//!
//! Coefficients are strings `"p/q"`. A series is a list of terms
//! `{exponents, odd, coeff}`: `exponents` has one entry per even coordinate,
//! `odd` lists odd generators in strictly increasing order. Serializing a
//! parsed file gives its canonical form; parsing the canonical form is exact.

use std::fmt;
use std::sync::Arc;

use frobenius_core::geometry::{Chart, FrobeniusData, Metric, MultiplicationTensor, VectorField};
use frobenius_core::linalg::RatMatrix;
use frobenius_core::rational::{format_rational, parse_rational};
use frobenius_core::semisimple::Expr;
use frobenius_core::{GradedSeries, Parity, Rational};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermSpec {
    pub exponents: Vec<u32>,
    #[serde(default)]
    pub odd: Vec<usize>,
    pub coeff: String,
}

/// One nonzero structure constant `C_ab^c`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StructureEntry {
    pub a: usize,
    pub b: usize,
    pub c: usize,
    pub terms: Vec<TermSpec>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EulerSpec {
    pub components: Vec<Vec<TermSpec>>,
    pub d0: String,
}

/// Diagonal metric entries `η_i(u)` in canonical coordinates `u1..un`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiagonalSpec {
    pub eta: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eta_tilde: Option<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ManifoldFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub dimension: usize,
    pub parities: Vec<u8>,
    #[serde(default)]
    pub degree_cap: Option<i32>,
    #[serde(default)]
    pub potential: Vec<TermSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metric: Option<Vec<Vec<String>>>,
    /// Required when `metric` is absent: the product is then given directly.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub structure: Option<Vec<StructureEntry>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub euler: Option<EulerSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub diagonal_frame: Option<DiagonalSpec>,
}

/// Input problem with the offending location (`line L, column C` for syntax
/// errors, a field path otherwise).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InputError {
    pub location: String,
    pub message: String,
}

impl InputError {
    pub fn at(location: impl Into<String>, message: impl fmt::Display) -> Self {
        Self {
            location: location.into(),
            message: message.to_string(),
        }
    }
}

impl fmt::Display for InputError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.location, self.message)
    }
}

impl std::error::Error for InputError {}

#[derive(Debug, Clone)]
pub struct DiagonalExprs {
    pub eta: Vec<Expr>,
    pub eta_tilde: Option<Vec<Expr>>,
}

/// A parsed manifold file.
#[derive(Debug, Clone)]
pub struct Manifold {
    pub name: Option<String>,
    pub data: FrobeniusData,
    pub diagonal: Option<DiagonalExprs>,
}

fn parse_series(chart: &Chart, terms: &[TermSpec], path: &str) -> Result<GradedSeries, InputError> {
    let (ea, oa) = (chart.even_arity(), chart.odd_arity());
    let mut out = chart.zero();
    for (k, t) in terms.iter().enumerate() {
        let here = format!("{path}[{k}]");
        if t.exponents.len() != ea {
            return Err(InputError::at(
                format!("{here}.exponents"),
                format!("expected {ea} even exponents, found {}", t.exponents.len()),
            ));
        }
        if let Some(&j) = t.odd.iter().find(|&&j| j >= oa) {
            return Err(InputError::at(
                format!("{here}.odd"),
                format!("odd generator {j} out of range (chart has {oa})"),
            ));
        }
        if t.odd.windows(2).any(|w| w[0] >= w[1]) {
            return Err(InputError::at(
                format!("{here}.odd"),
                "odd generators must be strictly increasing",
            ));
        }
        let coeff =
            parse_rational(&t.coeff).map_err(|e| InputError::at(format!("{here}.coeff"), e))?;
        let term = GradedSeries::monomial(ea, oa, &t.exponents, &t.odd, coeff)
            .map_err(|e| InputError::at(here.clone(), e))?;
        out += &term;
    }
    Ok(out)
}

fn series_terms(s: &GradedSeries) -> Vec<TermSpec> {
    s.terms()
        .map(|(m, c)| TermSpec {
            exponents: m.exps().to_vec(),
            odd: m.odd_indices(),
            coeff: format_rational(c),
        })
        .collect()
}

fn parse_expr(text: &str, n: usize, path: String) -> Result<Expr, InputError> {
    let e = Expr::parse(text).map_err(|e| InputError::at(path.clone(), e))?;
    if e.arity() > n {
        return Err(InputError::at(
            path,
            format!("uses u{} but the dimension is {n}", e.arity()),
        ));
    }
    Ok(e)
}

impl ManifoldFile {
    /// Builds the data, reporting the first problem with its field path.
    pub fn to_manifold(&self) -> Result<Manifold, InputError> {
        let n = self.dimension;
        if self.parities.len() != n {
            return Err(InputError::at(
                "parities",
                format!(
                    "dimension is {n} but {} parities are given",
                    self.parities.len()
                ),
            ));
        }
        let parities = self
            .parities
            .iter()
            .enumerate()
            .map(|(a, &p)| match p {
                0 => Ok(Parity::Even),
                1 => Ok(Parity::Odd),
                _ => Err(InputError::at(
                    format!("parities[{a}]"),
                    "parity must be 0 or 1",
                )),
            })
            .collect::<Result<Vec<_>, _>>()?;
        let chart: Arc<Chart> = Chart::new(parities);
        if chart.odd_arity() > 16 {
            return Err(InputError::at(
                "parities",
                "at most 16 odd coordinates are supported",
            ));
        }
        let potential = parse_series(&chart, &self.potential, "potential")?;
        if !potential.has_parity(Parity::Even) {
            return Err(InputError::at(
                "potential",
                "potential must be even (even number of odd generators per term)",
            ));
        }

        let mut data = match (&self.metric, &self.structure) {
            (Some(rows), _) => {
                if rows.len() != n || rows.iter().any(|r| r.len() != n) {
                    return Err(InputError::at("metric", format!("metric must be {n}x{n}")));
                }
                let parsed = rows
                    .iter()
                    .enumerate()
                    .map(|(i, r)| {
                        r.iter()
                            .enumerate()
                            .map(|(j, s)| {
                                parse_rational(s)
                                    .map_err(|e| InputError::at(format!("metric[{i}][{j}]"), e))
                            })
                            .collect::<Result<Vec<Rational>, _>>()
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                let matrix =
                    RatMatrix::from_rows(parsed).map_err(|e| InputError::at("metric", e))?;
                let metric =
                    Metric::new(&chart, matrix).map_err(|e| InputError::at("metric", e))?;
                if self.structure.is_some() {
                    return Err(InputError::at(
                        "structure",
                        "give either a metric or a structure section, not both",
                    ));
                }
                FrobeniusData::from_potential(chart.clone(), potential, metric, self.degree_cap)
                    .map_err(|e| InputError::at("potential", e))?
            }
            (None, Some(entries)) => {
                let mut table: Vec<Option<GradedSeries>> = vec![None; n * n * n];
                for (k, s) in entries.iter().enumerate() {
                    let here = format!("structure[{k}]");
                    if s.a >= n || s.b >= n || s.c >= n {
                        return Err(InputError::at(
                            here,
                            format!("index out of range for dimension {n}"),
                        ));
                    }
                    let slot = &mut table[(s.a * n + s.b) * n + s.c];
                    if slot.is_some() {
                        return Err(InputError::at(
                            here,
                            format!("duplicate entry ({}, {}, {})", s.a, s.b, s.c),
                        ));
                    }
                    let v = parse_series(&chart, &s.terms, &format!("{here}.terms"))?;
                    *slot = Some(v.truncated(self.degree_cap));
                }
                // Omitted entries vanish to the same order as the listed ones.
                let entries = table
                    .into_iter()
                    .map(|e| e.unwrap_or_else(|| chart.zero().truncated(self.degree_cap)))
                    .collect();
                let mult = MultiplicationTensor::new(chart.clone(), entries)
                    .map_err(|e| InputError::at("structure", e))?;
                let phi = (!potential.is_zero()).then(|| potential.truncated(self.degree_cap));
                FrobeniusData::from_tensor(mult, self.degree_cap).with_potential(phi)
            }
            (None, None) => {
                return Err(InputError::at(
                    "metric",
                    "a file without a metric must give the product in a `structure` section",
                ))
            }
        };

        if let Some(e) = &self.euler {
            if e.components.len() != n {
                return Err(InputError::at(
                    "euler.components",
                    format!("expected {n} components, found {}", e.components.len()),
                ));
            }
            let comps = e
                .components
                .iter()
                .enumerate()
                .map(|(a, t)| parse_series(&chart, t, &format!("euler.components[{a}]")))
                .collect::<Result<Vec<_>, _>>()?;
            let field = VectorField::new(chart.clone(), comps, Parity::Even)
                .map_err(|e| InputError::at("euler", e))?;
            let d0 = parse_rational(&e.d0).map_err(|err| InputError::at("euler.d0", err))?;
            data = data
                .with_euler(field, d0)
                .map_err(|e| InputError::at("euler", e))?;
        }

        let diagonal = match &self.diagonal_frame {
            None => None,
            Some(d) => {
                if d.eta.len() != n {
                    return Err(InputError::at(
                        "diagonal_frame.eta",
                        format!("expected {n} entries"),
                    ));
                }
                let eta = d
                    .eta
                    .iter()
                    .enumerate()
                    .map(|(i, t)| parse_expr(t, n, format!("diagonal_frame.eta[{i}]")))
                    .collect::<Result<Vec<_>, _>>()?;
                let eta_tilde = match &d.eta_tilde {
                    None => None,
                    Some(v) if v.len() != n => {
                        return Err(InputError::at(
                            "diagonal_frame.eta_tilde",
                            format!("expected {n} entries"),
                        ))
                    }
                    Some(v) => Some(
                        v.iter()
                            .enumerate()
                            .map(|(i, t)| {
                                parse_expr(t, n, format!("diagonal_frame.eta_tilde[{i}]"))
                            })
                            .collect::<Result<Vec<_>, _>>()?,
                    ),
                };
                Some(DiagonalExprs { eta, eta_tilde })
            }
        };
        Ok(Manifold {
            name: self.name.clone(),
            data,
            diagonal,
        })
    }
}

impl Manifold {
    pub fn new(name: Option<String>, data: FrobeniusData) -> Self {
        Self {
            name,
            data,
            diagonal: None,
        }
    }

    /// Canonical file form: terms in monomial order, reduced coefficients.
    pub fn to_file(&self) -> ManifoldFile {
        let data = &self.data;
        let chart = data.chart();
        let n = chart.dim();
        let structure = data.metric().is_none().then(|| {
            let c = data.multiplication();
            let mut out = Vec::new();
            for a in 0..n {
                for b in 0..n {
                    for k in 0..n {
                        let e = c.entry(a, b, k);
                        if !e.is_zero() {
                            out.push(StructureEntry {
                                a,
                                b,
                                c: k,
                                terms: series_terms(e),
                            });
                        }
                    }
                }
            }
            out
        });
        // Without a metric the cap describes the structure constants, and an
        // accompanying potential is cut to the same order.
        let degree_cap = match data.metric() {
            Some(_) => data.degree_cap(),
            None => data.multiplication().validity(),
        };
        let potential = match data.metric() {
            Some(_) => data.potential().cloned(),
            None => data.potential().map(|p| p.clone().truncated(degree_cap)),
        };
        ManifoldFile {
            name: self.name.clone(),
            dimension: n,
            parities: chart.parities().iter().map(|p| p.bit() as u8).collect(),
            degree_cap,
            potential: potential.as_ref().map(series_terms).unwrap_or_default(),
            metric: data.metric().map(|g| {
                g.matrix()
                    .to_rows()
                    .iter()
                    .map(|r| r.iter().map(format_rational).collect())
                    .collect()
            }),
            structure,
            euler: data.euler().map(|e| EulerSpec {
                components: e.field.components().iter().map(series_terms).collect(),
                d0: format_rational(&e.d0),
            }),
            diagonal_frame: self.diagonal.as_ref().map(|d| DiagonalSpec {
                eta: d.eta.iter().map(|e| e.text().to_string()).collect(),
                eta_tilde: d
                    .eta_tilde
                    .as_ref()
                    .map(|v| v.iter().map(|e| e.text().to_string()).collect()),
            }),
        }
    }
}

/// Parses manifold text; syntax errors carry line and column.
pub fn parse_manifold_str(text: &str) -> Result<Manifold, InputError> {
    let file: ManifoldFile = serde_json::from_str(text)
        .map_err(|e| InputError::at(format!("line {}, column {}", e.line(), e.column()), e))?;
    file.to_manifold()
}

pub fn parse_manifold(path: &std::path::Path) -> Result<Manifold, InputError> {
    let text =
        std::fs::read_to_string(path).map_err(|e| InputError::at(path.display().to_string(), e))?;
    parse_manifold_str(&text)
}

/// Canonical text of a manifold.
pub fn serialize_manifold(m: &Manifold) -> String {
    let mut s = serde_json::to_string_pretty(&m.to_file()).expect("manifest serializes");
    s.push('\n');
    s
}
