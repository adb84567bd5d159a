//! Everything the predictors need about one surface: volume, systole,
//! scattering constants and the invariants A, a.

use serde::{Deserialize, Serialize};

use crate::groups::{
    compact_invariants, estimate_systole_multiplicity, invariants, modular_class_count, systole_search, GroupDescriptor,
    GroupKind, SurfaceInvariants, Systole,
};
use crate::scattering::{decompose, default_c_max, LadderSource, ScatteringData};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SurfaceOptions {
    /// Ladder range for the scattering determinant; default 10³·𝔤₁.
    pub c_max: Option<f64>,
    pub trace_ceiling: f64,
    pub m0_override: Option<u32>,
    /// Systole length of an abstract compact surface.
    pub compact_systole: Option<f64>,
    /// Box size (in units of the level) for the conjugacy-class estimate of m₀.
    pub m0_box_factor: f64,
}

impl Default for SurfaceOptions {
    fn default() -> Self {
        Self { c_max: None, trace_ceiling: 20.0, m0_override: None, compact_systole: None, m0_box_factor: 8.0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum M0Source {
    /// Exact: class number of the minimal trace (modular group).
    ClassCount,
    /// Union-find over a finite element box; may overcount.
    BoxEstimate,
    Override,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SurfaceData {
    pub group: GroupDescriptor,
    pub volume: f64,
    pub systole: Option<Systole>,
    pub scattering: Option<ScatteringData>,
    pub invariants: SurfaceInvariants,
    pub m0_source: M0Source,
}

impl SurfaceData {
    pub fn n1(&self) -> u32 {
        self.group.n1()
    }

    /// 𝔤₁, or 1 for compact surfaces.
    pub fn g1(&self) -> f64 {
        self.scattering.as_ref().map_or(1.0, |s| s.g1)
    }

    /// |d(1)|, or 1 for compact surfaces.
    pub fn d1_abs(&self) -> f64 {
        self.scattering.as_ref().map_or(1.0, |s| s.c2.exp())
    }
}

/// Ladder source used for each catalog group.
pub fn ladder_source(g: &GroupDescriptor) -> LadderSource {
    match g.kind {
        GroupKind::Gamma0 if g.level > 1 => LadderSource::ClosedForm,
        _ => LadderSource::Series,
    }
}

pub fn surface_data(g: &GroupDescriptor, opts: &SurfaceOptions) -> Result<SurfaceData> {
    let volume = g.volume()?;
    if g.kind == GroupKind::AbstractCompact {
        let ell0 = opts
            .compact_systole
            .ok_or_else(|| Error::InvalidInput(format!("{g}: compact surfaces need a systole length")))?;
        let m0 = opts.m0_override.unwrap_or(1);
        let source = if opts.m0_override.is_some() { M0Source::Override } else { M0Source::ClassCount };
        return Ok(SurfaceData {
            group: g.clone(),
            volume,
            systole: None,
            scattering: None,
            invariants: compact_invariants(ell0, m0)?,
            m0_source: source,
        });
    }
    let systole = systole_search(g, opts.trace_ceiling)?;
    let (m0, m0_source) = match opts.m0_override {
        Some(m) => (m, M0Source::Override),
        None if g.is_modular() => {
            let t = systole.tau_sq.to_integer();
            (modular_class_count((t as f64).sqrt().round() as i64) as u32, M0Source::ClassCount)
        }
        None => (estimate_systole_multiplicity(g, &systole, opts.m0_box_factor)?, M0Source::BoxEstimate),
    };
    let scat = decompose(g, ladder_source(g), opts.c_max.unwrap_or_else(|| default_c_max(g)))?;
    let inv = invariants(&scat, &systole, m0)?;
    Ok(SurfaceData { group: g.clone(), volume, systole: Some(systole), scattering: Some(scat), invariants: inv, m0_source })
}
