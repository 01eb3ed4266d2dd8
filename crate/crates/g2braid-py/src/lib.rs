//! Python bindings: Bratteli diagrams, tower construction, verification and
//! the exact scalar type.

use clap::ValueEnum;
use num_rational::BigRational;
use pyo3::exceptions::{PyValueError, PyZeroDivisionError};
use pyo3::prelude::*;

use g2braid::cli::{parse_point, run_checks, Check, CheckOptions};
use g2braid::g2weights::{self, Weight};
use g2braid::pathlattice::{self, Lattice};
use g2braid::qscalar::{EvalAt, Exact, QScalar};
use g2braid::repbuilder::{RepSet, Tower, Young, G2};
use g2braid::verifier::{self, VerifyReport};

fn value_err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn point(s: &str) -> PyResult<BigRational> {
    parse_point(s).map_err(|e| PyValueError::new_err(e.0))
}

fn parse_checks(names: Option<Vec<String>>) -> PyResult<Vec<Check>> {
    names
        .unwrap_or_default()
        .iter()
        .map(|n| Check::from_str(n, true).map_err(|_| PyValueError::new_err(format!("unknown check {n:?}"))))
        .collect()
}

type Row = (String, String, String, String);

fn rows(reports: Vec<VerifyReport>) -> Vec<Row> {
    reports
        .into_iter()
        .map(|r| {
            let status = format!("{:?}", r.status).to_lowercase();
            let note = r.witness.or(r.detail).unwrap_or_default();
            (r.check, r.scope, status, note)
        })
        .collect()
}

/// Bratteli diagram of `instance` ("g2" or "young") to `levels`, as JSON,
/// DOT or plain multiplicity lists.
#[pyfunction]
#[pyo3(signature = (instance = "g2", levels = 3, format = "json"))]
fn bratteli(instance: &str, levels: usize, format: &str) -> PyResult<String> {
    fn export<L: Lattice>(lat: &L, n: usize, format: &str) -> PyResult<String> {
        let b = pathlattice::build(lat, n);
        match format {
            "json" => Ok(b.export_json(lat)),
            "dot" => Ok(b.export_dot(lat)),
            _ => Err(value_err(format!("unknown format {format:?}"))),
        }
    }
    match instance {
        "g2" => export(&G2, levels, format),
        "young" => export(&Young, levels, format),
        _ => Err(value_err(format!("unknown instance {instance:?}"))),
    }
}

/// Multiplicities m(λ, n) of the G2 diagram as ((a, b), m) pairs.
#[pyfunction]
fn multiplicities(levels: usize) -> Vec<((u32, u32), u64)> {
    let b = pathlattice::build(&G2, levels);
    b.labels(levels).into_iter().map(|l| ((l.a, l.b), b.multiplicity(&l, levels))).collect()
}

#[pyfunction]
fn casimir(a: u32, b: u32) -> i64 {
    g2weights::casimir(Weight::new(a, b))
}

#[pyfunction]
fn qdim(a: u32, b: u32) -> PyQScalar {
    PyQScalar(g2weights::qdim(Weight::new(a, b)))
}

/// Element of Q(q), kept in canonical reduced form.
#[pyclass(name = "QScalar", module = "g2braid_py")]
#[derive(Clone)]
struct PyQScalar(QScalar);

#[pymethods]
impl PyQScalar {
    #[new]
    #[pyo3(signature = (n = 0))]
    fn new(n: i64) -> Self {
        PyQScalar(QScalar::from_int(n))
    }

    /// q^k
    #[staticmethod]
    fn q_pow(k: i64) -> Self {
        PyQScalar(QScalar::q_pow(k))
    }

    /// Quantum integer [n].
    #[staticmethod]
    fn qint(n: i64) -> Self {
        PyQScalar(QScalar::qint(n))
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let v: serde_json::Value = serde_json::from_str(text).map_err(value_err)?;
        QScalar::from_json(&v).map(PyQScalar).map_err(value_err)
    }

    fn to_json(&self) -> String {
        self.0.to_json().to_string()
    }

    /// Value at q = p/r as a (numerator, denominator) pair of decimal strings.
    fn eval(&self, at: &str) -> PyResult<(String, String)> {
        let v = self.0.eval_at(&point(at)?).map_err(value_err)?;
        Ok((v.numer().to_string(), v.denom().to_string()))
    }

    fn __add__(&self, o: &Self) -> Self {
        PyQScalar(&self.0 + &o.0)
    }
    fn __sub__(&self, o: &Self) -> Self {
        PyQScalar(&self.0 - &o.0)
    }
    fn __mul__(&self, o: &Self) -> Self {
        PyQScalar(&self.0 * &o.0)
    }
    fn __truediv__(&self, o: &Self) -> PyResult<Self> {
        self.0
            .checked_div(&o.0)
            .map(PyQScalar)
            .map_err(|e| PyZeroDivisionError::new_err(e.to_string()))
    }
    fn __neg__(&self) -> Self {
        PyQScalar(-self.0.clone())
    }
    fn __eq__(&self, o: &Self) -> bool {
        self.0 == o.0
    }
    fn __str__(&self) -> String {
        self.0.to_string()
    }
    fn __repr__(&self) -> String {
        format!("QScalar({})", self.0)
    }
}

enum AnyTower {
    G2Exact(Tower<G2, Exact>),
    G2Eval(Tower<G2, EvalAt>),
    YoungExact(Tower<Young, Exact>),
    YoungEval(Tower<Young, EvalAt>),
}

macro_rules! dispatch {
    ($t:expr, $x:ident => $body:expr) => {
        match $t {
            AnyTower::G2Exact($x) => $body,
            AnyTower::G2Eval($x) => $body,
            AnyTower::YoungExact($x) => $body,
            AnyTower::YoungEval($x) => $body,
        }
    };
}

/// Generator blocks of σ_1, …, σ_{N-1}, built level by level.
#[pyclass(name = "Tower", module = "g2braid_py", unsendable)]
struct PyTower {
    tower: AnyTower,
    seed: u64,
    point: BigRational,
}

#[pymethods]
impl PyTower {
    #[new]
    #[pyo3(signature = (instance = "g2", backend = "exact", seed = 1, eval_point = "3/2"))]
    fn new(instance: &str, backend: &str, seed: u64, eval_point: &str) -> PyResult<Self> {
        let p = point(eval_point)?;
        let eval = || EvalAt::new(p.clone()).map_err(value_err);
        let tower = match (instance, backend) {
            ("g2", "exact") => AnyTower::G2Exact(Tower::new(G2, Exact, seed)),
            ("g2", "eval") => AnyTower::G2Eval(Tower::new(G2, eval()?, seed)),
            ("young", "exact") => AnyTower::YoungExact(Tower::new(Young, Exact, seed)),
            ("young", "eval") => AnyTower::YoungEval(Tower::new(Young, eval()?, seed)),
            _ => return Err(value_err(format!("unknown instance/backend {instance:?}/{backend:?}"))),
        };
        Ok(PyTower { tower, seed, point: p })
    }

    /// Extends the tower through level n.
    fn build_to(&mut self, n: usize) -> PyResult<()> {
        dispatch!(&mut self.tower, t => t.build_to(n)).map_err(|e| PyValueError::new_err(format!("solver failure: {e}")))
    }

    #[getter]
    fn levels(&self) -> usize {
        dispatch!(&self.tower, t => t.built_level())
    }

    /// Representation file contents (JSON).
    fn to_json(&self) -> String {
        dispatch!(&self.tower, t => t.rep_set().to_json_string())
    }

    /// Block of σ_{n-1} on W_2(δ, λ) as rows of strings, or None.
    fn block(&self, delta: &str, lam: &str) -> PyResult<Option<Vec<Vec<String>>>> {
        dispatch!(&self.tower, t => {
            let d = t.instance().parse_label(delta).map_err(value_err)?;
            let l = t.instance().parse_label(lam).map_err(value_err)?;
            Ok(t.block(&d, &l).map(|b| {
                (0..b.dim()).map(|i| (0..b.dim()).map(|j| b.get(i, j).to_string()).collect()).collect()
            }))
        })
    }

    /// Runs checks through the built level; returns (check, scope, status,
    /// note) rows.
    #[pyo3(signature = (checks = None, trials = 5))]
    fn verify(&self, checks: Option<Vec<String>>, trials: usize) -> PyResult<Vec<Row>> {
        let opts = CheckOptions {
            checks: parse_checks(checks)?,
            trials,
            seed: self.seed,
            point: self.point.clone(),
        };
        Ok(dispatch!(&self.tower, t => {
            let rep = t.rep_set();
            rows(run_checks(&rep, t.backend(), t.built_level(), &opts))
        }))
    }
}

/// Checks the contents of a representation file. The backend tag in the
/// file selects exact or evaluated scalars.
#[pyfunction]
#[pyo3(signature = (text, instance = "g2", checks = None))]
fn verify_json(text: &str, instance: &str, checks: Option<Vec<String>>) -> PyResult<Vec<Row>> {
    let v: serde_json::Value = serde_json::from_str(text).map_err(value_err)?;
    let backend = v["backend"].as_str().unwrap_or("exact").to_string();
    let checks = parse_checks(checks)?;
    let opts = |p: BigRational| CheckOptions {
        checks: checks.clone(),
        trials: 5,
        seed: v["seed"].as_u64().unwrap_or(1),
        point: p,
    };
    fn go<I: g2braid::repbuilder::Instance, B: g2braid::qscalar::Backend>(
        inst: I,
        be: B,
        text: &str,
        opts: CheckOptions,
    ) -> PyResult<Vec<Row>>
    where
        B::S: g2braid::repbuilder::JsonScalar + verifier::EvalRep,
    {
        let rep = RepSet::<I, B::S>::from_json(inst, text).map_err(value_err)?;
        let n = rep.max_level();
        Ok(rows(run_checks(&rep, &be, n, &opts)))
    }
    match (instance, backend.strip_prefix("eval:")) {
        ("g2", None) => go(G2, Exact, text, opts(EvalAt::generic().point().clone())),
        ("young", None) => go(Young, Exact, text, opts(EvalAt::generic().point().clone())),
        (inst, Some(p)) => {
            let p = point(p)?;
            let be = EvalAt::new(p.clone()).map_err(value_err)?;
            match inst {
                "g2" => go(G2, be, text, opts(p)),
                "young" => go(Young, be, text, opts(p)),
                _ => Err(value_err(format!("unknown instance {inst:?}"))),
            }
        }
        _ => Err(value_err(format!("unknown instance {instance:?}"))),
    }
}

#[pymodule]
fn g2braid_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyQScalar>()?;
    m.add_class::<PyTower>()?;
    m.add_function(wrap_pyfunction!(bratteli, m)?)?;
    m.add_function(wrap_pyfunction!(multiplicities, m)?)?;
    m.add_function(wrap_pyfunction!(casimir, m)?)?;
    m.add_function(wrap_pyfunction!(qdim, m)?)?;
    m.add_function(wrap_pyfunction!(verify_json, m)?)?;
    Ok(())
}
