//! Level-set demo: build `{x | N(x) ≥ t}` for a ReLU network, check that
//! its relaxation is loose, then tighten it with the RLT hierarchy and
//! track the relaxation area against the convex hull area.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::oracle::{
    boundary_2d, check_sharpness, feasible_leaves, hull_boundary_2d, is_empty_capped, Polygon,
    Verdict, SHARPNESS_TOL,
};
use crate::ops::convex_relaxation;
use crate::relu::{level_set_above, ReluNetwork};
use crate::rlt::{complexity_report, rlt_sharpen};
use crate::set::{ComplexityTuple, HybridZonotope, DEFAULT_ENUMERATION_CAP};

#[derive(Debug, Clone, PartialEq)]
pub struct DemoOptions {
    pub threshold: f64,
    /// RLT levels to run; `None` means `1..=n_b`.
    pub levels: Option<Vec<usize>>,
    pub n_dirs: usize,
    pub angles: usize,
    pub tol: f64,
    pub seed: u64,
    pub cap: u64,
}

impl Default for DemoOptions {
    fn default() -> Self {
        Self {
            threshold: 0.5,
            levels: None,
            n_dirs: 64,
            angles: 720,
            tol: SHARPNESS_TOL,
            seed: 0,
            cap: DEFAULT_ENUMERATION_CAP,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SharpnessSummary {
    pub verdict: Verdict,
    pub max_gap: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LevelResult {
    pub level: usize,
    pub nominal: ComplexityTuple,
    pub actual: ComplexityTuple,
    pub relax_area: f64,
    /// `relax_area / hull_area`.
    pub area_ratio: f64,
    pub sharpness: SharpnessSummary,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DemoReport {
    pub threshold: f64,
    pub complexity: ComplexityTuple,
    pub empty: bool,
    pub pre_rlt: Option<SharpnessSummary>,
    pub hull_area: Option<f64>,
    pub relax_area: Option<f64>,
    pub levels: Vec<LevelResult>,
}

/// Polygons for plotting, all counterclockwise.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct DemoPolygons {
    pub leaves: Vec<Polygon>,
    pub hull: Option<Polygon>,
    pub relax: Option<Polygon>,
    pub levels: Vec<(usize, Polygon)>,
}

#[derive(Debug, Clone)]
pub struct DemoOutput {
    pub set: HybridZonotope,
    pub report: DemoReport,
    pub polygons: DemoPolygons,
}

fn summarize(h: &HybridZonotope, opts: &DemoOptions) -> Result<SharpnessSummary> {
    let r = check_sharpness(h, opts.n_dirs, opts.tol, opts.seed, opts.cap)?;
    Ok(SharpnessSummary {
        verdict: r.verdict,
        max_gap: r.max_gap,
    })
}

pub fn demo_levelset(net: &ReluNetwork, opts: &DemoOptions) -> Result<DemoOutput> {
    let set = level_set_above(net, opts.threshold)?;
    let t = set.complexity();
    let mut report = DemoReport {
        threshold: opts.threshold,
        complexity: t,
        empty: is_empty_capped(&set, opts.cap)?,
        pre_rlt: None,
        hull_area: None,
        relax_area: None,
        levels: Vec::new(),
    };
    let mut polygons = DemoPolygons::default();
    if report.empty {
        return Ok(DemoOutput {
            set,
            report,
            polygons,
        });
    }
    report.pre_rlt = Some(summarize(&set, opts)?);

    let planar = set.dim() == 2;
    let hull_area = if planar {
        for (_, leaf) in feasible_leaves(&set, opts.cap)? {
            polygons.leaves.push(boundary_2d(&leaf, opts.angles)?);
        }
        let hull = hull_boundary_2d(&set, opts.angles, opts.cap)?;
        let relax = boundary_2d(&convex_relaxation(&set), opts.angles)?;
        report.hull_area = Some(hull.area());
        report.relax_area = Some(relax.area());
        polygons.hull = Some(hull);
        polygons.relax = Some(relax);
        report.hull_area
    } else {
        None
    };

    let levels = opts
        .levels
        .clone()
        .unwrap_or_else(|| (1..=set.n_b()).collect());
    for d in levels {
        let c = complexity_report(t, d)?;
        let sharpened = rlt_sharpen(&set, d)?;
        let (relax_area, area_ratio) = match hull_area {
            Some(hull_area) => {
                let poly = boundary_2d(&convex_relaxation(&sharpened), opts.angles)?;
                let area = poly.area();
                polygons.levels.push((d, poly));
                (area, area / hull_area)
            }
            None => (f64::NAN, f64::NAN),
        };
        report.levels.push(LevelResult {
            level: d,
            nominal: c.nominal,
            actual: c.actual,
            relax_area,
            area_ratio,
            sharpness: summarize(&sharpened, opts)?,
        });
    }
    Ok(DemoOutput {
        set,
        report,
        polygons,
    })
}
