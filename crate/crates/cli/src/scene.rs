//! User-defined gluing scenes.

use std::path::Path;

use boehmian::boehmian::{BoehmianDescriptor, Tag};
use boehmian::sheaf::{check_restrictions, glue_countable, glue_finite, Cover, SectionAssignment};
use boehmian::{EquivParams, OpenSet};
use serde::{Deserialize, Serialize};

use crate::config::ConfigError;
use crate::report::{Counts, Row};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GlueMode {
    #[default]
    Finite,
    Countable,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SceneParams {
    pub grid_h: f64,
    pub horizon: usize,
    pub tol: f64,
    pub mode: GlueMode,
    /// Pieces used by countable gluing; all pieces when absent.
    pub depth: Option<usize>,
    /// Sample points in the emitted profile.
    pub samples: usize,
}

impl Default for SceneParams {
    fn default() -> Self {
        Self {
            grid_h: 1e-3,
            horizon: 20,
            tol: 1e-3,
            mode: GlueMode::Finite,
            depth: None,
            samples: 21,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scene {
    pub pieces: Vec<OpenSet>,
    pub sections: Vec<BoehmianDescriptor>,
    #[serde(default)]
    pub params: SceneParams,
}

/// The glued section as emitted: the domain, the gluing diagnostics and
/// samples of the horizon term.
#[derive(Debug, Clone, Serialize)]
pub struct GluedDescriptor {
    pub kind: Tag,
    pub domain: OpenSet,
    pub status: String,
    pub radii: Vec<f64>,
    pub uncertified: Vec<usize>,
    pub diagnostic: Option<String>,
    pub profile_index: usize,
    pub profile: Vec<[f64; 2]>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SceneOutcome {
    pub glued: Option<GluedDescriptor>,
    #[serde(skip)]
    pub rows: Vec<Row>,
    pub totals: Counts,
    pub exit_code: i32,
}

impl Scene {
    pub fn from_file(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Read {
            path: path.to_path_buf(),
            source,
        })?;
        let scene: Scene = serde_json::from_str(&text)?;
        scene.validate()?;
        Ok(scene)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let bad = |m: &str| Err(ConfigError::Invalid(m.into()));
        let p = &self.params;
        if self.pieces.is_empty() {
            return bad("a scene needs at least one piece");
        }
        if self.pieces.len() != self.sections.len() {
            return bad("pieces and sections differ in length");
        }
        if self.pieces.iter().any(OpenSet::is_empty) {
            return bad("pieces must be nonempty");
        }
        if !(p.grid_h > 0.0 && p.grid_h <= 0.05) || p.horizon < 4 || !(p.tol > 0.0) || p.samples < 2 {
            return bad("params out of range");
        }
        if p.depth.is_some_and(|d| d == 0 || d > self.pieces.len()) {
            return bad("depth must lie between 1 and the number of pieces");
        }
        Ok(())
    }

    fn anchor(&self) -> &'static str {
        match self.params.mode {
            GlueMode::Finite => "glue-finite",
            GlueMode::Countable => "glue-countable",
        }
    }

    /// Builds the sections, glues them and checks the restriction contracts.
    pub fn run(&self) -> SceneOutcome {
        let mut rows = Vec::new();
        let glued = match self.glue(&mut rows) {
            Ok(g) => g,
            Err(e) => {
                rows.push(Row::error("scene", "glue", self.anchor(), e.to_string()));
                None
            }
        };
        let totals = Counts::of(&rows);
        let exit_code = i32::from(totals.failed());
        SceneOutcome {
            glued,
            rows,
            totals,
            exit_code,
        }
    }

    fn glue(&self, rows: &mut Vec<Row>) -> boehmian::Result<Option<GluedDescriptor>> {
        let p = &self.params;
        let params = EquivParams::default().with_horizon(p.horizon).with_tol(p.tol);
        let sections = self
            .pieces
            .iter()
            .zip(&self.sections)
            .map(|(u, d)| d.build(u, p.grid_h))
            .collect::<boehmian::Result<Vec<_>>>()?;
        let cover = Cover::new(self.pieces.clone())?;
        if cover.len() > 1 {
            for i in 0..cover.len() {
                if (0..cover.len()).all(|j| j == i || cover.overlap(i, j).is_empty()) {
                    rows.push(Row::error(
                        "scene",
                        format!("piece-{}/overlap", i + 1),
                        self.anchor(),
                        "piece overlaps no other piece",
                    ));
                    return Ok(None);
                }
            }
        }
        let assign = SectionAssignment::new(cover, sections.clone())?;
        let out = match p.mode {
            GlueMode::Finite => glue_finite(&assign, &params)?,
            GlueMode::Countable => glue_countable(&assign, p.depth.unwrap_or(self.pieces.len()), &params)?,
        };
        let contracts = check_restrictions(&out.boehmian, &sections, &params)?;
        for (i, c) in contracts.iter().enumerate() {
            rows.push(Row::from_check("scene", format!("piece-{}/restriction", i + 1), self.anchor(), c));
        }
        let term = out.boehmian.term(p.horizon)?;
        let profile = term
            .pieces()
            .iter()
            .flat_map(|pc| {
                let (lo, hi) = (pc.lo(), pc.hi());
                (0..p.samples).map(move |t| lo + (hi - lo) * t as f64 / (p.samples - 1) as f64)
            })
            .filter_map(|x| term.eval(x).ok().map(|v| [x, v]))
            .collect();
        Ok(Some(GluedDescriptor {
            kind: out.boehmian.tag(),
            domain: out.boehmian.domain().clone(),
            status: out.status().as_str().into(),
            radii: out.radii.clone(),
            uncertified: out.uncertified.clone(),
            diagnostic: out.diagnostic.clone(),
            profile_index: p.horizon,
            profile,
        }))
    }
}
