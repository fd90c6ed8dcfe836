//! The experiment registry. Each experiment declares its parameters and
//! returns CSV tables plus assertions tagged with the acceptance criterion
//! they check; every criterion from 1 to 15 belongs to exactly one
//! experiment (16, determinism, is a property of the harness).

use std::fmt;

use crate::config::{ExperimentKind, Params};
use crate::{LabError, Table};

mod dynamics;
mod measurement;
mod relativistic;
mod spin;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParamKind {
    Real,
    Positive,
    NonNegative,
    /// Positive integer.
    Count,
}

impl ParamKind {
    pub fn describe(self) -> &'static str {
        match self {
            ParamKind::Real => "a finite number",
            ParamKind::Positive => "positive",
            ParamKind::NonNegative => "non-negative",
            ParamKind::Count => "a positive integer",
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct ParamSpec {
    pub name: &'static str,
    pub default: f64,
    pub kind: ParamKind,
}

const fn param(name: &'static str, default: f64, kind: ParamKind) -> ParamSpec {
    ParamSpec {
        name,
        default,
        kind,
    }
}

pub struct Experiment {
    pub kind: ExperimentKind,
    /// What the run checks, one line.
    pub summary: &'static str,
    pub criteria: &'static [u8],
    pub params: &'static [ParamSpec],
    pub(crate) validate: fn(&Params) -> Result<(), LabError>,
    pub(crate) run: fn(&Params, u64) -> Result<Outcome, LabError>,
}

impl fmt::Debug for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Experiment")
            .field("kind", &self.kind)
            .field("criteria", &self.criteria)
            .finish_non_exhaustive()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    AtMost,
    Below,
    AtLeast,
    Above,
}

impl Relation {
    fn symbol(self) -> &'static str {
        match self {
            Relation::AtMost => "<=",
            Relation::Below => "<",
            Relation::AtLeast => ">=",
            Relation::Above => ">",
        }
    }

    fn holds(self, value: f64, bound: f64) -> bool {
        match self {
            Relation::AtMost => value <= bound,
            Relation::Below => value < bound,
            Relation::AtLeast => value >= bound,
            Relation::Above => value > bound,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Assertion {
    pub criterion: u8,
    pub name: String,
    pub value: f64,
    pub relation: Relation,
    pub bound: f64,
    /// False for NaN values whatever the relation.
    pub passed: bool,
}

impl Assertion {
    pub fn new(criterion: u8, name: &str, value: f64, relation: Relation, bound: f64) -> Self {
        Self {
            criterion,
            name: name.to_string(),
            value,
            relation,
            bound,
            passed: relation.holds(value, bound),
        }
    }
}

impl fmt::Display for Assertion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}] {}: {:e} {} {:e} {}",
            self.criterion,
            self.name,
            self.value,
            self.relation.symbol(),
            self.bound,
            if self.passed { "PASS" } else { "FAIL" }
        )
    }
}

#[derive(Debug, Clone, Default)]
pub struct Outcome {
    pub tables: Vec<Table>,
    pub assertions: Vec<Assertion>,
}

impl Outcome {
    pub(crate) fn check(
        &mut self,
        criterion: u8,
        name: &str,
        value: f64,
        relation: Relation,
        bound: f64,
    ) {
        self.assertions
            .push(Assertion::new(criterion, name, value, relation, bound));
    }

    pub fn passed(&self) -> bool {
        self.assertions.iter().all(|a| a.passed)
    }
}

fn no_extra_checks(_: &Params) -> Result<(), LabError> {
    Ok(())
}

use ParamKind::{Count, Positive, Real};

static REGISTRY: [Experiment; 10] = [
    Experiment {
        kind: ExperimentKind::FreePacket,
        summary: "free packet moves at <p>/m; norm and energy conservation and Ehrenfest theorem under split-step evolution",
        criteria: &[1, 4, 5],
        params: &[
            param("mass", 1.0, Positive),
            param("hbar", 1.0, Positive),
            param("n", 1024.0, Count),
            param("dx", 0.1, Positive),
            param("x0", -5.0, Real),
            param("p0", 2.0, Real),
            param("sigma", 1.0, Positive),
            param("widths", 10.0, Positive),
            param("dt", 5e-4, Positive),
            param("well_n", 256.0, Count),
            param("well_dx", 0.1, Positive),
            param("omega", 1.0, Positive),
            param("shift", 2.0, Real),
            param("well_dt", 1e-4, Positive),
            param("well_steps", 10_000.0, Count),
            param("ehrenfest_dt", 1e-3, Positive),
            param("ehrenfest_steps", 2000.0, Count),
            param("force", 0.5, Real),
            param("linear_steps", 1000.0, Count),
        ],
        validate: no_extra_checks,
        run: dynamics::free_packet,
    },
    Experiment {
        kind: ExperimentKind::Uncertainty,
        summary: "position-momentum uncertainty bound on random wave functions; Gaussian saturation; Plancherel identity",
        criteria: &[2, 3],
        params: &[
            param("hbar", 1.0, Positive),
            param("n", 512.0, Count),
            param("dx", 0.05, Positive),
            param("states", 500.0, Count),
            param("plancherel_states", 200.0, Count),
        ],
        validate: no_extra_checks,
        run: dynamics::uncertainty,
    },
    Experiment {
        kind: ExperimentKind::DoubleSlit,
        summary: "two-slit screen pattern: fringes, spacing against the far-field estimate, departure from the one-slit sum",
        criteria: &[6],
        params: &[
            param("mass", 1.0, Positive),
            param("hbar", 1.0, Positive),
            param("nx", 512.0, Count),
            param("ny", 256.0, Count),
            param("dy", 1.0, Positive),
            param("barrier_x", 130.0, Real),
            param("barrier_thickness", 10.0, Positive),
            param("slit_separation", 16.0, Positive),
            param("slit_width", 4.0, Positive),
            param("screen_x", 240.0, Real),
            param("packet_x0", 90.0, Real),
            param("sigma_x", 8.0, Positive),
            param("sigma_y", 20.0, Positive),
            param("p0", 2.0 * std::f64::consts::PI / 3.0, Positive),
            param("absorber_strength", 1.0, Positive),
            param("absorber_fraction", 0.08, Positive),
            param("dt", 0.05, Positive),
            param("max_steps", 6000.0, Count),
        ],
        validate: dynamics::validate_double_slit,
        run: dynamics::double_slit,
    },
    Experiment {
        kind: ExperimentKind::Larmor,
        summary: "spin-1/2 precession in a uniform field: closed form against spectral evolution, sign flip after one turn",
        criteria: &[9],
        params: &[
            param("hbar", 1.0, Positive),
            param("theta", 1.0, Real),
            param("phi", 0.3, Real),
            param("omega0", 2.0, Positive),
            param("gamma", 1.5, Real),
            param("periods", 3.0, Positive),
            param("samples", 301.0, Count),
        ],
        validate: no_extra_checks,
        run: spin::larmor,
    },
    Experiment {
        kind: ExperimentKind::SpinSpectrum,
        summary: "angular momentum matrices up to 2j = 40 and the integer spectrum of orbital momentum on a ring",
        criteria: &[7, 8],
        params: &[
            param("hbar", 1.0, Positive),
            param("max_two_j", 40.0, Count),
            param("ring_n", 64.0, Count),
        ],
        validate: spin::validate_spectrum,
        run: spin::spectrum,
    },
    Experiment {
        kind: ExperimentKind::TwoSpin,
        summary: "total spin of two spin-1/2 particles and exchange symmetry of the coupled basis",
        criteria: &[10],
        params: &[param("hbar", 1.0, Positive)],
        validate: no_extra_checks,
        run: spin::two_spin,
    },
    Experiment {
        kind: ExperimentKind::Epr,
        summary: "entangled-pair joint outcomes and Born-rule frequencies for random states and observables",
        criteria: &[11, 12],
        params: &[
            param("hbar", 1.0, Positive),
            param("alpha", 0.6, Real),
            param("samples", 100_000.0, Count),
            param("born_pairs", 20.0, Count),
            param("born_dim", 3.0, Count),
            param("born_samples", 100_000.0, Count),
        ],
        validate: measurement::validate_epr,
        run: measurement::epr,
    },
    Experiment {
        kind: ExperimentKind::KgDensity,
        summary: "Klein-Gordon conserved density: sign for single and mixed frequency branches, charge conservation",
        criteria: &[13],
        params: &[
            param("mass", 1.0, Positive),
            param("hbar", 1.0, Positive),
            param("n", 512.0, Count),
            param("dx", 0.25, Positive),
            param("p0", 1.5, Real),
            // Wide against the Compton length hbar/m: a positive-frequency
            // density stays non-negative only for such packets.
            param("sigma", 4.0, Positive),
            param("separation", 30.0, Positive),
            param("dt", 0.02, Positive),
            param("steps", 1000.0, Count),
        ],
        validate: no_extra_checks,
        run: relativistic::kg_density,
    },
    Experiment {
        kind: ExperimentKind::DiracSpectrum,
        summary: "gamma matrices, Dirac Hamiltonian spectrum, squared Dirac operator, swapped-component energies",
        criteria: &[15],
        params: &[
            param("mass", 1.0, Positive),
            param("p_max", 3.0, Positive),
            param("p_samples", 31.0, Count),
            param("random_momenta", 200.0, Count),
            param("square_grid", 32.0, Count),
        ],
        validate: relativistic::validate_spectrum,
        run: relativistic::dirac_spectrum,
    },
    Experiment {
        kind: ExperimentKind::DiracLimit,
        summary: "slow-particle limit: Klein-Gordon and Dirac evolution against the Schrodinger equation",
        criteria: &[14],
        params: &[
            param("mass", 1.0, Positive),
            param("hbar", 1.0, Positive),
            param("n", 1024.0, Count),
            param("dx", 1.0, Positive),
            param("x0", -50.0, Real),
            param("sigma", 40.0, Positive),
            param("time", 400.0, Positive),
            param("dt", 1.0, Positive),
            param("max_ratio", 0.05, Positive),
            param("ratios", 5.0, Count),
        ],
        validate: no_extra_checks,
        run: relativistic::dirac_limit,
    },
];

pub fn registry() -> &'static [Experiment] {
    &REGISTRY
}

pub fn find(kind: ExperimentKind) -> &'static Experiment {
    REGISTRY
        .iter()
        .find(|e| e.kind == kind)
        .expect("every kind is registered")
}

/// Experiments whose name or summary contains `filter` (ASCII
/// case-insensitive); all of them for `None`.
pub fn list(filter: Option<&str>) -> Vec<&'static Experiment> {
    let needle = filter.map(str::to_ascii_lowercase);
    REGISTRY
        .iter()
        .filter(|e| match &needle {
            None => true,
            Some(n) => {
                e.kind.name().contains(n.as_str())
                    || e.summary.to_ascii_lowercase().contains(n.as_str())
            }
        })
        .collect()
}

/// The `list` table: one header line, then one line per experiment.
pub fn render_list(filter: Option<&str>) -> String {
    let rows = list(filter);
    let mut out = format!("{:<16} {:<10} {}\n", "experiment", "criteria", "checks");
    for e in rows {
        let criteria: Vec<String> = e.criteria.iter().map(u8::to_string).collect();
        out.push_str(&format!(
            "{:<16} {:<10} {}\n",
            e.kind.name(),
            criteria.join(","),
            e.summary
        ));
    }
    out
}
