//! Python module `krfusion`: exact ℚ(q) arithmetic, module construction,
//! verification, branching and crystal export.

use krcore::branching::{branch_verify, s_csv as core_s_csv};
use krcore::cartan::AffineType;
use krcore::crystal::extract_pseudobase;
use krcore::fusion::{default_route, fuse, kr1, solve_r as core_solve_r, tower, KRModule, Provenance, MAX_R_UNKNOWNS};
use krcore::polarverify::run_all;
use krcore::qfield::{QError, RatQ, Subset};
use pyo3::exceptions::{PyValueError, PyZeroDivisionError};
use pyo3::prelude::*;

fn value_err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn parse_type(s: &str) -> PyResult<AffineType> {
    s.parse().map_err(value_err)
}

/// Element of ℚ(q), printed as "(num)/(den)" in ascending powers.
#[pyclass(name = "RatQ", frozen, eq, hash, from_py_object)]
#[derive(Clone, PartialEq, Eq, Hash)]
struct PyRatQ(RatQ);

#[pymethods]
impl PyRatQ {
    #[new]
    fn new(s: &str) -> PyResult<Self> {
        s.parse().map(PyRatQ).map_err(value_err)
    }

    #[staticmethod]
    fn q_int(m: i64, s: u32) -> Self {
        PyRatQ(RatQ::q_int(m, s))
    }

    #[staticmethod]
    fn q_binom(m: i64, n: i64, s: u32) -> Self {
        PyRatQ(RatQ::q_binom(m, n, s))
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("RatQ('{}')", self.0)
    }

    fn __add__(&self, o: &Self) -> Self {
        PyRatQ(&self.0 + &o.0)
    }

    fn __sub__(&self, o: &Self) -> Self {
        PyRatQ(&self.0 - &o.0)
    }

    fn __mul__(&self, o: &Self) -> Self {
        PyRatQ(&self.0 * &o.0)
    }

    fn __truediv__(&self, o: &Self) -> PyResult<Self> {
        match self.0.div(&o.0) {
            Ok(x) => Ok(PyRatQ(x)),
            Err(QError::DivByZero) => Err(PyZeroDivisionError::new_err("division by zero in Q(q)")),
            Err(e) => Err(value_err(e)),
        }
    }

    fn __neg__(&self) -> Self {
        PyRatQ(-&self.0)
    }

    /// q-adic valuation; None for zero.
    fn val(&self) -> Option<i32> {
        self.0.val()
    }

    fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    /// Membership in "A", "qA", "1+qA", "AZ", "KZ".
    fn member(&self, subset: &str) -> PyResult<bool> {
        let s = match subset {
            "A" => Subset::A,
            "qA" => Subset::QA,
            "1+qA" => Subset::OnePlusQA,
            "AZ" => Subset::AZ,
            "KZ" => Subset::KZ,
            _ => return Err(PyValueError::new_err(format!("unknown subset {subset}"))),
        };
        Ok(self.0.member(s))
    }
}

#[pyclass(name = "KRModule", frozen)]
struct PyKRModule(KRModule);

#[pymethods]
impl PyKRModule {
    #[getter]
    fn dim(&self) -> usize {
        self.0.rep.dim()
    }

    #[getter]
    fn level(&self) -> i64 {
        self.0.l
    }

    #[getter]
    fn affine_type(&self) -> String {
        self.0.rep.ty.cli_name().to_string()
    }

    #[getter]
    fn provenance(&self) -> &'static str {
        match self.0.provenance {
            Provenance::Fused => "fused",
            Provenance::Recursive => "recursive",
        }
    }

    #[getter]
    fn weights(&self) -> Vec<[i64; 3]> {
        self.0.rep.wt.iter().map(|w| w.0).collect()
    }

    /// v_ℓ as (index, coefficient) pairs.
    #[getter]
    fn v(&self) -> Vec<(usize, PyRatQ)> {
        self.0.v.0.iter().map(|(k, x)| (*k, PyRatQ(x.clone()))).collect()
    }

    fn gram_entry(&self, i: usize, j: usize) -> PyResult<PyRatQ> {
        if i >= self.dim() || j >= self.dim() {
            return Err(PyValueError::new_err("index out of range"));
        }
        Ok(PyRatQ(self.0.gram.entry(i, j)))
    }

    /// The representation in its JSON format.
    fn rep_json(&self) -> String {
        self.0.rep.to_json()
    }

    /// Statement battery, orthonormality and norm bounds on S_ℓ, K_Z integrality and positivity, plus
    /// branching; returns (pass, JSON reports).
    fn verify(&self, py: Python<'_>) -> PyResult<(bool, String)> {
        let m = &self.0;
        py.detach(|| {
            let reports = run_all(m);
            let branch = branch_verify(m.rep.ty, m.l, &m.rep.wt).map_err(value_err)?;
            let pass = reports.iter().all(|r| r.pass) && branch.pass;
            let json = serde_json_pair(&reports, &branch);
            Ok((pass, json))
        })
    }

    /// (pass, graph JSON, graph DOT).
    fn crystal(&self, py: Python<'_>) -> PyResult<(bool, String, String)> {
        let m = &self.0;
        py.detach(|| {
            let p = extract_pseudobase(m).map_err(value_err)?;
            Ok((p.report.pass, p.graph.to_json(), p.graph.to_dot()))
        })
    }
}

fn serde_json_pair(reports: &[krcore::polarverify::CheckReport], branch: &krcore::branching::BranchReport) -> String {
    serde_json::json!({ "checks": reports, "branch": branch }).to_string()
}

/// W^ℓ of the given type ("g2-1" or "d4-3"), fused or recursive.
#[pyfunction]
#[pyo3(signature = (affine_type, level, recursive = false))]
fn build(py: Python<'_>, affine_type: &str, level: i64, recursive: bool) -> PyResult<PyKRModule> {
    let ty = parse_type(affine_type)?;
    if level < 1 {
        return Err(PyValueError::new_err("level must be at least 1"));
    }
    py.detach(|| {
        let m = if recursive {
            tower(ty, level, Provenance::Recursive).map(|mut t| t.pop().unwrap())
        } else if level == 1 {
            kr1(ty)
        } else {
            kr1(ty).and_then(|w1| fuse(&w1, level, default_route(ty)))
        };
        m.map(PyKRModule).map_err(value_err)
    })
}

/// Dimension of the intertwiner space W_{q^a} ⊗ W_{q^b} -> W_{q^b} ⊗ W_{q^a} on W¹.
#[pyfunction]
fn r_solution_dim(py: Python<'_>, affine_type: &str, a: i32, b: i32) -> PyResult<usize> {
    let ty = parse_type(affine_type)?;
    py.detach(|| {
        let w1 = kr1(ty).map_err(value_err)?;
        core_solve_r(&w1.rep, a, b, MAX_R_UNKNOWNS).map(|r| r.solution_dim).map_err(value_err)
    })
}

/// S_ℓ as CSV.
#[pyfunction]
fn s_csv(affine_type: &str, level: i64) -> PyResult<String> {
    Ok(core_s_csv(parse_type(affine_type)?, level))
}

#[pymodule]
fn krfusion(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyRatQ>()?;
    m.add_class::<PyKRModule>()?;
    m.add_function(wrap_pyfunction!(build, m)?)?;
    m.add_function(wrap_pyfunction!(r_solution_dim, m)?)?;
    m.add_function(wrap_pyfunction!(s_csv, m)?)?;
    Ok(())
}
