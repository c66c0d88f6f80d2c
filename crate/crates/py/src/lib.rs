//! Python module `xrl`: thin wrappers over `xrl_core`.

use std::path::PathBuf;

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use xrl_core::actuation as act;
use xrl_core::cli as core_cli;
use xrl_core::kinematics as kin;
use xrl_core::model;
use xrl_core::stairs;
use xrl_core::statics;

fn value_err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn parse_plane(plane: &str) -> PyResult<kin::Plane> {
    match plane {
        "sagittal" => Ok(kin::Plane::Sagittal),
        "frontal" => Ok(kin::Plane::Frontal),
        other => Err(PyValueError::new_err(format!(
            "plane must be 'sagittal' or 'frontal', got {other:?}"
        ))),
    }
}

#[pyclass(name = "LegGeometry", frozen, from_py_object)]
#[derive(Clone, Copy)]
struct PyLegGeometry(model::LegGeometry);

#[pymethods]
impl PyLegGeometry {
    #[new]
    fn new(l1: f64, l2: f64) -> PyResult<Self> {
        model::LegGeometry::new(l1, l2).map(Self).map_err(value_err)
    }

    /// Link lengths from the standing and crawling hip attachment heights.
    #[staticmethod]
    fn from_heights(standing: f64, crawling: f64) -> PyResult<Self> {
        let a = model::Anthropometrics {
            standing_attach_height: standing,
            crawling_attach_height: crawling,
            ..Default::default()
        };
        model::solve_link_lengths(&a).map(Self).map_err(value_err)
    }

    #[getter]
    fn l1(&self) -> f64 {
        self.0.l1()
    }

    #[getter]
    fn l2(&self) -> f64 {
        self.0.l2()
    }

    #[getter]
    fn standing_height(&self) -> f64 {
        self.0.standing_height()
    }

    #[getter]
    fn crawling_height(&self) -> f64 {
        self.0.crawling_height()
    }

    fn __repr__(&self) -> String {
        format!("LegGeometry(l1={}, l2={})", self.0.l1(), self.0.l2())
    }
}

#[pyclass(name = "LoadCase", frozen, from_py_object)]
#[derive(Clone, Copy)]
struct PyLoadCase(model::LoadCase);

#[pymethods]
impl PyLoadCase {
    /// Two-leg squat load from masses (kg) and assist force (N).
    #[staticmethod]
    #[pyo3(signature = (robot_mass, payload_mass, assist_force, assist_moment_arm=None))]
    fn squat(robot_mass: f64, payload_mass: f64, assist_force: f64, assist_moment_arm: Option<f64>) -> PyResult<Self> {
        let mut c = model::make_load_case(model::ScenarioKind::Squat, robot_mass, payload_mass, assist_force)
            .map_err(value_err)?;
        if let Some(arm) = assist_moment_arm {
            c = c.with_assist_moment_arm(arm).map_err(value_err)?;
        }
        Ok(Self(c))
    }

    /// Two-leg load from a stated total vertical load (N).
    #[staticmethod]
    #[pyo3(signature = (total, assist_force=0.0, assist_moment_arm=0.0))]
    fn squat_total(total: f64, assist_force: f64, assist_moment_arm: f64) -> PyResult<Self> {
        model::LoadCase::new(model::ScenarioKind::Squat, total, assist_force, assist_moment_arm, true)
            .map(Self)
            .map_err(value_err)
    }

    /// Single-leg stair load (N).
    #[staticmethod]
    fn stair(total: f64) -> PyResult<Self> {
        model::LoadCase::stair_total(total).map(Self).map_err(value_err)
    }

    #[getter]
    fn total_vertical_load(&self) -> f64 {
        self.0.total_vertical_load
    }

    #[getter]
    fn leg_vertical_load(&self) -> f64 {
        self.0.leg_vertical_load()
    }

    #[getter]
    fn assist_moment_arm(&self) -> f64 {
        self.0.assist_moment_arm
    }
}

#[pyclass(name = "JointTorques", frozen, from_py_object)]
#[derive(Clone, Copy)]
struct PyJointTorques(model::JointTorques);

#[pymethods]
impl PyJointTorques {
    #[getter]
    fn hip(&self) -> f64 {
        self.0.tau_hip
    }

    #[getter]
    fn knee(&self) -> f64 {
        self.0.tau_knee
    }

    #[getter]
    fn ankle(&self) -> f64 {
        self.0.tau_ankle
    }

    fn max_abs(&self) -> f64 {
        self.0.max_abs()
    }

    fn l2_norm(&self) -> f64 {
        self.0.l2_norm()
    }

    /// `(hip, knee, ankle)`.
    fn as_tuple(&self) -> (f64, f64, f64) {
        (self.0.tau_hip, self.0.tau_knee, self.0.tau_ankle)
    }

    fn __repr__(&self) -> String {
        format!(
            "JointTorques(hip={}, knee={}, ankle={})",
            self.0.tau_hip, self.0.tau_knee, self.0.tau_ankle
        )
    }
}

#[pyclass(name = "JointState", frozen, from_py_object)]
#[derive(Clone, Copy)]
struct PyJointState(kin::JointState);

#[pymethods]
impl PyJointState {
    #[new]
    #[pyo3(signature = (ankle, knee, hip, plane="sagittal"))]
    fn new(ankle: f64, knee: f64, hip: f64, plane: &str) -> PyResult<Self> {
        kin::JointState::new(ankle, knee, hip, parse_plane(plane)?)
            .map(Self)
            .map_err(value_err)
    }

    /// `(ankle, knee, hip)` in radians.
    fn angles(&self) -> (f64, f64, f64) {
        let [a, k, h] = self.0.angles();
        (a, k, h)
    }

    fn mirrored(&self) -> Self {
        Self(self.0.mirrored())
    }
}

#[pyfunction]
#[pyo3(signature = (geom, height, plane="sagittal", lateral_offset=0.0))]
fn solve_squat_posture(geom: PyLegGeometry, height: f64, plane: &str, lateral_offset: f64) -> PyResult<PyJointState> {
    kin::solve_squat_posture(&geom.0, height, parse_plane(plane)?, lateral_offset)
        .map(PyJointState)
        .map_err(value_err)
}

/// Hip pose `(t, z, phi)`.
#[pyfunction]
fn forward_kinematics(geom: PyLegGeometry, state: PyJointState) -> (f64, f64, f64) {
    let p = kin::forward_kinematics(&geom.0, &state.0);
    (p.t, p.z, p.phi)
}

/// 3×3 Jacobian as nested lists, rows `(t, z, phi)`, columns `(ankle, knee, hip)`.
#[pyfunction]
fn jacobian(geom: PyLegGeometry, state: PyJointState) -> Vec<Vec<f64>> {
    let j = kin::jacobian(&geom.0, &state.0);
    (0..3).map(|r| (0..3).map(|c| j.matrix()[(r, c)]).collect()).collect()
}

#[pyclass(name = "SquatModel", frozen)]
struct PySquatModel(statics::SquatModel);

#[pymethods]
impl PySquatModel {
    #[new]
    #[pyo3(signature = (geom, load, lateral_offset=0.0, foot_width=0.1524))]
    fn new(geom: PyLegGeometry, load: PyLoadCase, lateral_offset: f64, foot_width: f64) -> Self {
        Self(statics::SquatModel::new(geom.0, load.0, lateral_offset, foot_width))
    }

    fn sagittal(&self, height: f64) -> PyResult<PyJointTorques> {
        statics::sagittal_squat_torques(&self.0.geom, &self.0.load, height)
            .map(PyJointTorques)
            .map_err(value_err)
    }

    /// Frontal torques for a given internal force and moment.
    #[pyo3(signature = (height, f_y=0.0, m=0.0))]
    fn frontal(&self, height: f64, f_y: f64, m: f64) -> PyResult<PyJointTorques> {
        let iw = statics::InternalWrench::new(f_y, m).map_err(value_err)?;
        statics::frontal_chain_torques(&self.0, height, &iw)
            .map(PyJointTorques)
            .map_err(value_err)
    }

    /// Least-squares torques; returns `(torques, (f_y, m))`.
    fn l2_optimal(&self, height: f64) -> PyResult<(PyJointTorques, (f64, f64))> {
        let iw = statics::optimal_internal_wrench(&self.0, height).map_err(value_err)?;
        let t = statics::optimal_torques_l2(&self.0, height).map_err(value_err)?;
        Ok((PyJointTorques(t), (iw.f_y, iw.m)))
    }

    /// Minimax torques; `ankle` fixes the ankle torque when given.
    #[pyo3(signature = (height, ankle=None))]
    fn minimax(&self, height: f64, ankle: Option<f64>) -> PyResult<PyJointTorques> {
        let mode = ankle.map_or(statics::AnkleMode::Free, statics::AnkleMode::Fixed);
        statics::minimax_torques(&self.0, height, mode)
            .map(|s| PyJointTorques(s.torques))
            .map_err(value_err)
    }

    fn foot_hold_ankle_torque(&self) -> f64 {
        self.0.foot_hold_ankle_torque()
    }

    /// Sweep rows `(height, torques or None)` for one strategy tag.
    #[pyo3(signature = (strategy, samples=200))]
    fn profile(&self, strategy: &str, samples: usize) -> PyResult<Vec<(f64, Option<PyJointTorques>)>> {
        let s = statics::Strategy::from_tag(strategy)
            .ok_or_else(|| PyValueError::new_err(format!("unknown strategy {strategy:?}")))?;
        let heights = statics::sweep_heights(&self.0.geom, samples);
        let p = statics::squat_profile(&self.0, &heights, s).map_err(value_err)?;
        Ok(p.samples
            .iter()
            .map(|x| (x.height, x.values.as_ref().ok().map(|v| PyJointTorques(v.torques))))
            .collect())
    }
}

#[pyfunction]
#[pyo3(signature = (geom, load, stair_height=stairs::DEFAULT_STAIR_HEIGHT, forward_lean=stairs::DEFAULT_FORWARD_LEAN, hip_width=0.3556))]
fn stair_peaks<'py>(
    py: Python<'py>,
    geom: PyLegGeometry,
    load: PyLoadCase,
    stair_height: f64,
    forward_lean: f64,
    hip_width: f64,
) -> PyResult<Bound<'py, PyDict>> {
    let s = stairs::StairScenario::new(stair_height, forward_lean, hip_width, load.0).map_err(value_err)?;
    let p = stairs::stair_peaks(&s, &geom.0).map_err(value_err)?;
    let d = PyDict::new(py);
    d.set_item("hip", p.hip)?;
    d.set_item("knee", p.knee)?;
    d.set_item("ankle", p.ankle)?;
    d.set_item("knee_hip_height", p.knee_worst.hip_height)?;
    Ok(d)
}

#[pyfunction]
#[pyo3(signature = (current, torque_constant=0.45, max_peak_current=75.0))]
fn motor_torque(current: f64, torque_constant: f64, max_peak_current: f64) -> PyResult<f64> {
    let spec = act::MotorSpec {
        torque_constant,
        max_peak_current,
        max_continuous_current: max_peak_current.min(act::MotorSpec::default().max_continuous_current),
        ..Default::default()
    };
    act::motor_torque(current, &spec).map_err(value_err)
}

#[pyfunction]
#[pyo3(signature = (peak_torque, motors=1, torque_constant=0.45, max_continuous_current=50.0))]
fn required_gear_ratio(peak_torque: f64, motors: u8, torque_constant: f64, max_continuous_current: f64) -> PyResult<f64> {
    let spec = act::MotorSpec {
        torque_constant,
        max_continuous_current,
        max_peak_current: max_continuous_current.max(act::MotorSpec::default().max_peak_current),
        ..Default::default()
    };
    act::required_gear_ratio(peak_torque, &spec, motors).map_err(value_err)
}

/// Joint-side `(output_axis, carrier_axis)` torques for two motor torques.
#[pyfunction]
fn differential_map(tau_a: f64, tau_b: f64, ratio: f64) -> PyResult<(f64, f64)> {
    act::differential_map(tau_a, tau_b, ratio)
        .map(|o| (o.output_axis, o.carrier_axis))
        .map_err(value_err)
}

/// Runs a CLI command (`squat`, `redistribute`, `stairs`, `actuation`,
/// `reconcile`, `all`) and returns the output directory.
#[pyfunction]
#[pyo3(signature = (command, out, config=None, height=None))]
fn run(command: &str, out: PathBuf, config: Option<PathBuf>, height: Option<f64>) -> PyResult<PathBuf> {
    let cfg = match config {
        Some(p) => core_cli::ScenarioConfig::load(&p).map_err(value_err)?,
        None => core_cli::ScenarioConfig::default(),
    };
    let rt = |e: core_cli::CliError| PyRuntimeError::new_err(e.to_string());
    match command {
        "squat" => core_cli::cmd_squat(&cfg, &out).map(drop),
        "redistribute" => {
            core_cli::cmd_redistribute(&cfg, height.unwrap_or(cfg.sweep.redistribution_height_m), &out).map(drop)
        }
        "stairs" => core_cli::cmd_stairs(&cfg, &out).map(drop),
        "actuation" => core_cli::cmd_actuation(&cfg, &out).map(drop),
        "reconcile" => core_cli::cmd_reconcile(&cfg, &out).map(drop),
        "all" => core_cli::cmd_all(&cfg, &out),
        other => return Err(PyValueError::new_err(format!("unknown command {other:?}"))),
    }
    .map_err(rt)?;
    Ok(out)
}

/// Reconciliation rows as dicts with the default configuration.
#[pyfunction]
fn reconciliation<'py>(py: Python<'py>) -> PyResult<Vec<Bound<'py, PyDict>>> {
    let r = core_cli::reconcile(&core_cli::ScenarioConfig::default()).map_err(value_err)?;
    r.rows
        .iter()
        .map(|row| {
            let d = PyDict::new(py);
            d.set_item("quantity", row.quantity)?;
            d.set_item("reference", row.reference)?;
            d.set_item("computed", row.computed)?;
            d.set_item("rel_error", row.rel_error)?;
            d.set_item("status", row.status.tag())?;
            Ok(d)
        })
        .collect()
}

#[pymodule]
fn xrl(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyLegGeometry>()?;
    m.add_class::<PyLoadCase>()?;
    m.add_class::<PyJointTorques>()?;
    m.add_class::<PyJointState>()?;
    m.add_class::<PySquatModel>()?;
    m.add_function(wrap_pyfunction!(solve_squat_posture, m)?)?;
    m.add_function(wrap_pyfunction!(forward_kinematics, m)?)?;
    m.add_function(wrap_pyfunction!(jacobian, m)?)?;
    m.add_function(wrap_pyfunction!(stair_peaks, m)?)?;
    m.add_function(wrap_pyfunction!(motor_torque, m)?)?;
    m.add_function(wrap_pyfunction!(required_gear_ratio, m)?)?;
    m.add_function(wrap_pyfunction!(differential_map, m)?)?;
    m.add_function(wrap_pyfunction!(run, m)?)?;
    m.add_function(wrap_pyfunction!(reconciliation, m)?)?;
    m.add("STANDARD_GRAVITY", model::STANDARD_GRAVITY)?;
    Ok(())
}
