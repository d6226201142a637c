//! Birational surgery on Poincaré polynomials: fibrations multiply, disjoint
//! unions add, and a smooth blow-up along `Z` of codimension `c` adds
//! `P(Z)·(P(P^{c-1}) - 1)`. A blow-down subtracts the same kind of term,
//! given directly by its center and (possibly weighted) exceptional fiber.
//!
//! A [`Pipeline`] replays a chain of such steps from a base space and keeps
//! a trace of the intermediate polynomials.

use std::fmt;

use crate::catalog::{projective, PoincarePoly};
use crate::error::{Error, Result};
use crate::polyring::IntPoly;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum StepKind {
    Blowup,
    Blowdown,
}

impl StepKind {
    pub fn as_str(self) -> &'static str {
        match self {
            StepKind::Blowup => "blowup",
            StepKind::Blowdown => "blowdown",
        }
    }
}

impl fmt::Display for StepKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SurgeryStep {
    kind: StepKind,
    center: PoincarePoly,
    fiber: PoincarePoly,
    /// Set for blow-ups, whose fiber is `P^{codim-1}`.
    codim: Option<usize>,
    label: String,
}

impl SurgeryStep {
    pub fn blowup(label: impl Into<String>, center: PoincarePoly, codim: usize) -> Result<Self> {
        let label = label.into();
        if codim == 0 {
            return Err(Error::invalid(format!(
                "blow-up `{label}` with codimension 0"
            )));
        }
        Ok(SurgeryStep {
            kind: StepKind::Blowup,
            center,
            fiber: projective(codim as u32 - 1),
            codim: Some(codim),
            label,
        })
    }

    /// The fiber must be connected; it is typically a (weighted) projective
    /// space.
    pub fn blowdown(
        label: impl Into<String>,
        center: PoincarePoly,
        fiber: PoincarePoly,
    ) -> Result<Self> {
        let label = label.into();
        check_fiber(&label, &fiber)?;
        Ok(SurgeryStep {
            kind: StepKind::Blowdown,
            center,
            fiber,
            codim: None,
            label,
        })
    }

    pub fn kind(&self) -> StepKind {
        self.kind
    }

    pub fn center(&self) -> &PoincarePoly {
        &self.center
    }

    pub fn fiber(&self) -> &PoincarePoly {
        &self.fiber
    }

    pub fn codim(&self) -> Option<usize> {
        self.codim
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// Signed contribution `±P(center)·(P(fiber) - 1)`.
    pub fn correction(&self) -> IntPoly {
        let term = self.center.poly() * self.fiber.reduced();
        match self.kind {
            StepKind::Blowup => term,
            StepKind::Blowdown => -term,
        }
    }
}

fn check_fiber(label: &str, fiber: &PoincarePoly) -> Result<()> {
    if fiber.components() != 1.into() {
        return Err(Error::invalid(format!(
            "exceptional fiber of `{label}` must be connected and nonempty, got {fiber}"
        )));
    }
    Ok(())
}

fn check_blowup_dims(
    label: &str,
    space: &PoincarePoly,
    center: &PoincarePoly,
    codim: usize,
) -> Result<()> {
    if let (Some(space_dim), Some(center_dim)) = (space.dim(), center.dim()) {
        if center_dim + codim != space_dim {
            return Err(Error::DimensionMismatch {
                label: label.to_owned(),
                center_dim,
                codim,
                space_dim,
            });
        }
    }
    Ok(())
}

/// Total space of a locally trivial fibration.
pub fn bundle_total(base: &PoincarePoly, fiber: &PoincarePoly) -> PoincarePoly {
    base.times(fiber)
}

pub fn union_disjoint(a: &PoincarePoly, b: &PoincarePoly) -> PoincarePoly {
    a.disjoint_union(b)
}

/// `P(Bl_Z X) = P(X) + P(Z)·(P(P^{codim-1}) - 1)`.
pub fn blowup_apply(
    space: &PoincarePoly,
    center: &PoincarePoly,
    codim: usize,
) -> Result<PoincarePoly> {
    let step = SurgeryStep::blowup("blowup", center.clone(), codim)?;
    check_blowup_dims(step.label(), space, center, codim)?;
    Ok(PoincarePoly::trusted(space.poly() + step.correction()))
}

/// `P(space) - P(center)·(P(fiber) - 1)`, which must stay nonnegative.
pub fn blowdown_apply(
    space: &PoincarePoly,
    center_downstairs: &PoincarePoly,
    fiber: &PoincarePoly,
) -> Result<PoincarePoly> {
    let step = SurgeryStep::blowdown("blowdown", center_downstairs.clone(), fiber.clone())?;
    PoincarePoly::new(space.poly() + step.correction(), step.label())
}

#[derive(Clone, Debug)]
pub struct Pipeline {
    pub base: PoincarePoly,
    pub steps: Vec<SurgeryStep>,
}

/// One row of a pipeline trace.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceRecord {
    pub label: String,
    pub kind: StepKind,
    pub correction: IntPoly,
    pub cumulative: IntPoly,
}

#[derive(Clone, Debug)]
pub struct PipelineRun {
    pub result: PoincarePoly,
    pub trace: Vec<TraceRecord>,
}

impl Pipeline {
    pub fn new(base: PoincarePoly) -> Self {
        Pipeline {
            base,
            steps: Vec::new(),
        }
    }

    pub fn blowup(mut self, label: &str, center: PoincarePoly, codim: usize) -> Result<Self> {
        self.steps.push(SurgeryStep::blowup(label, center, codim)?);
        Ok(self)
    }

    pub fn blowdown(
        mut self,
        label: &str,
        center: PoincarePoly,
        fiber: PoincarePoly,
    ) -> Result<Self> {
        self.steps
            .push(SurgeryStep::blowdown(label, center, fiber)?);
        Ok(self)
    }

    pub fn run(&self) -> Result<PipelineRun> {
        run_pipeline(self)
    }
}

/// Folds the steps over the base in order. The result is the signed sum of
/// all corrections, so it does not depend on the step order; only the final
/// polynomial has to be a valid Poincaré polynomial. Blow-up codimensions
/// are checked against the dimension of the base.
pub fn run_pipeline(p: &Pipeline) -> Result<PipelineRun> {
    let mut cumulative = p.base.poly().clone();
    let mut trace = Vec::with_capacity(p.steps.len());
    let mut went_negative: Option<&str> = None;
    for step in &p.steps {
        if let Some(codim) = step.codim {
            check_blowup_dims(&step.label, &p.base, &step.center, codim)?;
        }
        check_fiber(&step.label, &step.fiber)?;
        let correction = step.correction();
        let was_valid = cumulative.first_negative().is_none();
        cumulative += &correction;
        if was_valid && cumulative.first_negative().is_some() {
            went_negative = Some(&step.label);
        }
        trace.push(TraceRecord {
            label: step.label.clone(),
            kind: step.kind,
            correction,
            cumulative: cumulative.clone(),
        });
    }
    let label = went_negative.unwrap_or("base");
    let result = PoincarePoly::new(cumulative, label)?;
    Ok(PipelineRun { result, trace })
}
