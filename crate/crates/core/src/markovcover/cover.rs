use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use super::arcs::{Arc, ArcJson, ArcSet};
use crate::error::{Error, Result};
use crate::exactalg::rational::format_rational;
use crate::ruellemap::{ruelle_constants, CircleMap, MapJson, RuelleConstants};
use crate::shiftspace::TransitionMatrix;

/// A closed subset of the circle made of finitely many arcs.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Rectangle {
    set: ArcSet,
}

impl Rectangle {
    pub fn from_arcs(arcs: &[Arc]) -> Self {
        let parts: Vec<ArcSet> = arcs.iter().map(ArcSet::closed_arc).collect();
        Rectangle {
            set: ArcSet::union_all(&parts),
        }
    }

    /// Takes the closure of `set`.
    pub fn from_set(set: &ArcSet) -> Self {
        Rectangle { set: set.closure() }
    }

    pub fn set(&self) -> &ArcSet {
        &self.set
    }

    pub fn arcs(&self) -> Vec<Arc> {
        self.set.components()
    }

    pub fn interior(&self) -> ArcSet {
        self.set.interior()
    }

    pub fn diameter(&self) -> BigRational {
        self.set.diameter()
    }

    pub fn to_json(&self) -> Vec<ArcJson> {
        self.arcs().iter().map(ArcJson::from).collect()
    }

    pub fn from_json(arcs: &[ArcJson]) -> Result<Self> {
        let arcs = arcs.iter().map(Arc::try_from).collect::<Result<Vec<_>>>()?;
        Ok(Self::from_arcs(&arcs))
    }
}

impl std::fmt::Display for Rectangle {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        self.set.fmt(f)
    }
}

/// Outcome of one cover property; offending entries are rectangle indices
/// (singletons or ordered pairs).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub pass: bool,
    pub offending: Vec<Vec<usize>>,
    pub detail: String,
}

impl Check {
    fn from_offenders(offending: Vec<Vec<usize>>, detail: String) -> Self {
        Check {
            pass: offending.is_empty(),
            offending,
            detail,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub valid: bool,
    pub proper: Check,
    pub diameter: Check,
    pub disjoint_interiors: Check,
    pub covers_circle: Check,
    pub markov: Check,
}

impl ValidationReport {
    /// Names of the failed checks with their details.
    pub fn failures(&self) -> Vec<String> {
        [
            ("proper", &self.proper),
            ("diameter", &self.diameter),
            ("disjoint interiors", &self.disjoint_interiors),
            ("covers circle", &self.covers_circle),
            ("markov", &self.markov),
        ]
        .iter()
        .filter(|(_, c)| !c.pass)
        .map(|(n, c)| format!("{n}: {}", c.detail))
        .collect()
    }
}

/// A finite closed cover of the circle together with the map and constants
/// it is checked against. Construction always validates; only covers whose
/// report passes can produce a transition matrix.
#[derive(Clone, Debug)]
pub struct MarkovCover {
    map: CircleMap,
    rectangles: Vec<Rectangle>,
    constants: RuelleConstants,
    report: ValidationReport,
    /// present exactly when the report is valid
    matrix: Option<TransitionMatrix>,
}

#[derive(Serialize, Deserialize)]
pub struct CoverJson {
    pub rectangles: Vec<Vec<ArcJson>>,
    pub map: MapJson,
}

impl MarkovCover {
    pub fn new(map: CircleMap, rectangles: Vec<Rectangle>) -> Self {
        let constants = ruelle_constants(&map);
        let report = validate(&map, &rectangles, &constants);
        let matrix = report.valid.then(|| markov_matrix(&map, &rectangles));
        MarkovCover {
            map,
            rectangles,
            constants,
            report,
            matrix,
        }
    }

    pub fn from_json(json: &CoverJson) -> Result<Self> {
        let rects = json
            .rectangles
            .iter()
            .map(|r| Rectangle::from_json(r))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::new(json.map.clone().validate()?, rects))
    }

    pub fn to_json(&self) -> CoverJson {
        CoverJson {
            rectangles: self.rectangles.iter().map(Rectangle::to_json).collect(),
            map: self.map.clone().into(),
        }
    }

    pub fn map(&self) -> &CircleMap {
        &self.map
    }

    pub fn rectangles(&self) -> &[Rectangle] {
        &self.rectangles
    }

    pub fn len(&self) -> usize {
        self.rectangles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rectangles.is_empty()
    }

    pub fn constants(&self) -> &RuelleConstants {
        &self.constants
    }

    pub fn report(&self) -> &ValidationReport {
        &self.report
    }

    pub fn is_valid(&self) -> bool {
        self.report.valid
    }

    pub(crate) fn require_valid(&self) -> Result<()> {
        if self.is_valid() {
            Ok(())
        } else {
            Err(Error::precondition(format!(
                "cover is not a validated Markov cover ({})",
                self.report.failures().join("; ")
            )))
        }
    }
}

/// Checks every cover property exactly.
pub fn validate_cover(map: &CircleMap, rectangles: &[Rectangle]) -> ValidationReport {
    validate(map, rectangles, &ruelle_constants(map))
}

fn validate(map: &CircleMap, rects: &[Rectangle], rc: &RuelleConstants) -> ValidationReport {
    let n = rects.len();
    let proper = Check::from_offenders(
        (0..n)
            .filter(|&i| rects[i].set.is_empty() || !rects[i].set.is_proper())
            .map(|i| vec![i])
            .collect(),
        "each rectangle is nonempty and equals the closure of its interior".into(),
    );

    let bound = rc.cover_diameter_bound();
    let too_wide: Vec<Vec<usize>> = (0..n)
        .filter(|&i| rects[i].diameter() >= bound)
        .map(|i| vec![i])
        .collect();
    let diameter_detail = match too_wide.first() {
        Some(v) => format!(
            "diam(R{}) = {} is not below min(epsilon, c/2) = min({}, {})",
            v[0] + 1,
            format_rational(&rects[v[0]].diameter()),
            format_rational(&rc.epsilon),
            format_rational(&(&rc.c / BigRational::from_integer(2.into())))
        ),
        None => format!("all diameters below {}", format_rational(&bound)),
    };
    let diameter = Check::from_offenders(too_wide, diameter_detail);

    let interiors: Vec<ArcSet> = rects.iter().map(Rectangle::interior).collect();
    let mut overlaps = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if interiors[i].intersects(&interiors[j]) {
                overlaps.push(vec![i, j]);
            }
        }
    }
    let disjoint_interiors = Check::from_offenders(overlaps, "interiors are pairwise disjoint".into());

    let union = ArcSet::union_all(rects.iter().map(Rectangle::set));
    let covers_circle = if union.is_full() {
        Check::from_offenders(Vec::new(), "union is the circle".into())
    } else {
        let missing = ArcSet::full().difference(&union);
        Check {
            pass: false,
            offending: Vec::new(),
            detail: format!("uncovered: {}", missing.closure()),
        }
    };

    let images: Vec<ArcSet> = rects.iter().map(|r| r.set.image_of_interior(map)).collect();
    let mut broken = Vec::new();
    for (i, img) in images.iter().enumerate() {
        for (j, int) in interiors.iter().enumerate() {
            if img.intersects(int) && !int.is_subset(img) {
                broken.push(vec![i, j]);
            }
        }
    }
    let markov = Check::from_offenders(broken, "f(int R_i) meets int R_j only if it contains int R_j".into());

    let valid = proper.pass && diameter.pass && disjoint_interiors.pass && covers_circle.pass && markov.pass;
    ValidationReport {
        valid,
        proper,
        diameter,
        disjoint_interiors,
        covers_circle,
        markov,
    }
}

/// Rectangles `[(i-1)/m, i/m]` with their validation report, valid or not.
pub fn subdivision(map: &CircleMap, m: usize) -> Result<MarkovCover> {
    if m == 0 {
        return Err(Error::precondition("subdivision needs at least one piece"));
    }
    let step = BigRational::new(1.into(), (m as i64).into());
    let rects = (0..m)
        .map(|i| {
            Rectangle::from_arcs(&[Arc::new(
                BigRational::from_integer((i as i64).into()) * &step,
                step.clone(),
            )])
        })
        .collect();
    Ok(MarkovCover::new(map.clone(), rects))
}

/// Rectangles `[(i-1)/m, i/m]`, rejected unless they form a Markov cover.
pub fn equal_subdivision_cover(map: &CircleMap, m: usize) -> Result<MarkovCover> {
    let cover = subdivision(map, m)?;
    if !cover.is_valid() {
        return Err(Error::precondition(format!(
            "subdivision into {m} arcs is not a Markov cover: {}",
            cover.report.failures().join("; ")
        )));
    }
    Ok(cover)
}

/// `A_ij = 1` iff `f(int R_i)` meets `int R_j`.
pub fn transition_matrix(cover: &MarkovCover) -> Result<TransitionMatrix> {
    cover.require_valid()?;
    Ok(cover.matrix.clone().expect("valid covers carry their matrix"))
}

fn markov_matrix(map: &CircleMap, rects: &[Rectangle]) -> TransitionMatrix {
    let interiors: Vec<ArcSet> = rects.iter().map(Rectangle::interior).collect();
    let rows = rects
        .iter()
        .map(|r| {
            let img = r.set.image_of_interior(map);
            interiors.iter().map(|int| img.intersects(int)).collect()
        })
        .collect();
    TransitionMatrix::new(rows).expect("square by construction")
}
