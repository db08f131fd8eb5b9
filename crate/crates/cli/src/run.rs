//! Runs a job in one scalar mode and collects the report.

use std::collections::BTreeMap;

use matricial::analytic::{master_cauchy, DensityGrid, MeixnerArray};
use matricial::fock::{axiom_check, FockModel, Q};
use matricial::matricial::{
    assemble_matricial_r, invert_c, is_unit_residual, reconstruct_unique,
    verify_compressed_inverses, verify_sum_inverse, UnitSeries,
};
use matricial::moments::smf_moments_with;
use matricial::{Coeff, DistributionArray, Error, Precision, Scalar, TruncatedSeries};
use serde_json::{json, Map, Value};

use crate::config::{Check, ConfigError, Engine, Job, Law};

/// Float engines must agree to this relative tolerance; rationals exactly.
pub const FLOAT_TOL: f64 = 1e-9;

const AXIOM_TRIALS: usize = 50;
const AXIOM_MAX_LEN: usize = 5;

pub struct Report {
    pub json: Value,
    /// Moments table, then density and atom tables when present.
    pub csv: String,
    pub ok: bool,
    pub diagnostics: Vec<String>,
}

fn tol<T: Coeff>() -> f64 {
    match T::MODE {
        Precision::Rational => 0.0,
        Precision::Float => FLOAT_TOL,
    }
}

fn value<T: Coeff>(x: &T) -> Value {
    match x.to_scalar() {
        Scalar::Rational(r) => Value::String(Scalar::Rational(r).to_string()),
        // -0.0 would print differently from 0.0
        Scalar::Float(f) => json!(if f == 0.0 { 0.0 } else { f }),
    }
}

fn text<T: Coeff>(x: &T) -> String {
    match x.to_scalar() {
        Scalar::Float(0.0) => "0".to_string(),
        s => s.to_string(),
    }
}

fn values<T: Coeff>(xs: &[T]) -> Value {
    Value::Array(xs.iter().map(value).collect())
}

fn number<T: Coeff>(s: &str) -> Result<T, ConfigError> {
    Ok(Scalar::parse(s, T::MODE)?.get::<T>()?)
}

fn build_array<T: Coeff>(job: &Job) -> Result<DistributionArray<T>, ConfigError> {
    let mut map = BTreeMap::new();
    for (&cell, law) in &job.laws {
        let r = match law {
            Law::Semicircle(a) => vec![T::zero(), number(&a.text())?],
            Law::PointMass(b) => vec![number(&b.text())?],
            Law::Cumulants(rs) => rs
                .iter()
                .map(|n| number(&n.text()))
                .collect::<Result<_, _>>()?,
        };
        map.insert(cell, r);
    }
    Ok(DistributionArray::new(job.shape, map)?)
}

/// Fock models built on demand, one per depth.
struct Models<'a, T: Coeff> {
    array: &'a DistributionArray<T>,
    alpha: T,
    built: BTreeMap<usize, FockModel<T>>,
}

impl<'a, T: Coeff> Models<'a, T> {
    fn at(&mut self, depth: usize) -> Result<&FockModel<T>, Error> {
        if !self.built.contains_key(&depth) {
            let model = FockModel::build(self.array, depth, self.alpha.clone())?;
            self.built.insert(depth, model);
        }
        Ok(&self.built[&depth])
    }

    // runs `f` at `depth`, rebuilding once deeper if the model is too shallow
    fn with<R>(
        &mut self,
        depth: usize,
        f: impl Fn(&FockModel<T>) -> Result<R, Error>,
    ) -> Result<R, Error> {
        match f(self.at(depth)?) {
            Err(Error::DepthExceeded { needed, .. }) => f(self.at(needed)?),
            other => other,
        }
    }
}

fn unit_series_json<T: Coeff>(r: &UnitSeries<T>) -> Value {
    let mut m = Map::new();
    for (name, q) in [
        ("q11", Q::Q11),
        ("q12", Q::Q12),
        ("q21", Q::Q21),
        ("q22", Q::Q22),
    ] {
        m.insert(name.into(), values(r.component(q).coeffs()));
    }
    Value::Object(m)
}

pub fn run<T: Coeff>(
    job: &Job,
    fock_dump: Option<&std::path::Path>,
) -> Result<Report, ConfigError> {
    let array = build_array::<T>(job)?;
    let order = job.order;
    let mut models = Models {
        array: &array,
        alpha: number::<T>(&job.alpha)?,
        built: BTreeMap::new(),
    };
    let mut diagnostics = Vec::new();
    let mut ok = true;

    if let Some(path) = fock_dump {
        let dump = models.at(order)?.dump();
        std::fs::write(path, dump)
            .map_err(|e| ConfigError(format!("cannot write {}: {e}", path.display())))?;
    }

    let mut moments: Vec<(Engine, TruncatedSeries<T>)> = Vec::new();
    for &engine in &job.engines {
        let m = match engine {
            Engine::Partition => smf_moments_with(&array, order, job.admissibility)?,
            Engine::Fock => models.with(order, |model| model.moments(order))?,
            Engine::Analytic => master_cauchy(&array, order)?,
        };
        moments.push((engine, m));
    }
    let (first, reference) = &moments[0];
    let mut agree = true;
    for (engine, m) in &moments[1..] {
        if !m.close_to(reference, tol::<T>()) {
            agree = false;
            let n = (0..=order)
                .find(|&n| !m.coeff(n).close_to(&reference.coeff(n), tol::<T>()))
                .unwrap_or(0);
            diagnostics.push(format!(
                "engines {} and {} disagree at order {n}: {} vs {}",
                first.name(),
                engine.name(),
                text(&reference.coeff(n)),
                text(&m.coeff(n))
            ));
        }
    }
    ok &= agree;

    let mut checks = Map::new();
    let needs_inverse = job
        .checks
        .iter()
        .any(|c| matches!(c, Check::SumInverse | Check::CompressedInverse));
    let inverse = if needs_inverse {
        Some(invert_c(&assemble_matricial_r(&array, order), order)?)
    } else {
        None
    };
    for &check in &job.checks {
        let (pass, body) = match check {
            Check::SumInverse => {
                let b = inverse.as_ref().expect("inverse computed for sum_inverse");
                let res = models.with(order, |model| verify_sum_inverse(model, b, order))?;
                let pass = is_unit_residual(&res, tol::<T>());
                (pass, json!({ "residuals": values(&res) }))
            }
            Check::CompressedInverse => {
                let b = inverse
                    .as_ref()
                    .expect("inverse computed for compressed_inverse");
                let per_cell = models.with(order, |model| {
                    verify_compressed_inverses(model, job.shape, b, order)
                })?;
                let mut cells = Map::new();
                let mut pass = true;
                for (cell, res) in per_cell {
                    pass &= is_unit_residual(&res, tol::<T>());
                    cells.insert(format!("{},{}", cell.row, cell.col), values(&res));
                }
                (pass, json!({ "residuals": cells }))
            }
            Check::Uniqueness => {
                let want = assemble_matricial_r(&array, order);
                match models.with(order, |model| reconstruct_unique(model, job.shape, order)) {
                    Ok(got) => (
                        got.close_to(&want, tol::<T>()),
                        json!({ "reconstructed": unit_series_json(&got), "expected": unit_series_json(&want) }),
                    ),
                    Err(Error::Inconsistent(msg)) => (false, json!({ "error": msg })),
                    Err(e) => return Err(e.into()),
                }
            }
            Check::Axioms => {
                let depth = (2 * AXIOM_MAX_LEN + 1).max(order);
                let report = models.with(depth, |model| {
                    axiom_check(model, AXIOM_TRIALS, AXIOM_MAX_LEN, job.seed)
                })?;
                (
                    report.passed(),
                    json!({ "checks": report.checks, "failures": report.failures }),
                )
            }
        };
        if !pass {
            diagnostics.push(format!("check {} failed", check.name()));
        }
        ok &= pass;
        let mut body = body;
        body["pass"] = json!(pass);
        checks.insert(check.name().into(), body);
    }

    let mut csv = String::from("n");
    for (engine, _) in &moments {
        csv.push(',');
        csv.push_str(engine.name());
    }
    csv.push('\n');
    for n in 0..=order {
        csv.push_str(&n.to_string());
        for (_, m) in &moments {
            csv.push(',');
            csv.push_str(&text(&m.coeff(n)));
        }
        csv.push('\n');
    }

    let mut report = Map::new();
    if let Some(request) = job.density {
        let family = MeixnerArray::from_array(&array)?;
        let grid = DensityGrid::new(
            request.grid_min,
            request.grid_max,
            request.points,
            request.eps,
        )?;
        let samples = family.sample(&grid);
        let atoms = family.atoms();
        csv.push_str("\nx,density\n");
        for (x, d) in &samples {
            csv.push_str(&format!("{x},{d}\n"));
        }
        csv.push_str("\nlocation,weight\n");
        for a in &atoms {
            csv.push_str(&format!("{},{}\n", a.location, a.weight));
        }
        report.insert(
            "density".into(),
            json!({
                "grid_min": request.grid_min,
                "grid_max": request.grid_max,
                "points": request.points,
                "eps": request.eps,
                "samples": samples.iter().map(|(x, d)| json!([x, d])).collect::<Vec<_>>(),
                "atoms": atoms.iter().map(|a| json!({ "location": a.location, "weight": a.weight })).collect::<Vec<_>>(),
                "mass": family.mass(),
            }),
        );
    }

    let mut moment_map = Map::new();
    for (engine, m) in &moments {
        moment_map.insert(engine.name().into(), values(m.coeffs()));
    }
    report.insert("version".into(), json!(1));
    report.insert(
        "shape".into(),
        json!(job
            .shape
            .cells()
            .map(|c| format!("{},{}", c.row, c.col))
            .collect::<Vec<_>>()),
    );
    report.insert("precision".into(), json!(job.precision.to_string()));
    report.insert("order".into(), json!(order));
    report.insert("moments".into(), Value::Object(moment_map));
    report.insert("engines_agree".into(), json!(agree));
    report.insert("checks".into(), Value::Object(checks));
    report.insert("ok".into(), json!(ok));
    Ok(Report {
        json: Value::Object(report),
        csv,
        ok,
        diagnostics,
    })
}
