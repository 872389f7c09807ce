//! JSON form of a cartographic region.
//!
//! ```json
//! { "system": "...", "epsilon": [1], "focus": [{"x": 0, "y": 1.27, "k": 1}],
//!   "strips": [{ "interval": ["-inf", 0], "interval_inclusion": [false, false],
//!                "type": "II",
//!                "lower": {"kind": "pl", "vertices": [[-2, 0], [0, 0]]},
//!                "upper": {"kind": "sampled", "xs": [-2, 0], "ys": ["inf", "inf"]},
//!                "lower_inclusion": "closed", "upper_inclusion": "open" }] }
//! ```

use serde::{Deserialize, Serialize};

use super::{
    construct_region, BoundaryData, BoundaryDescriptor, CartographicRegion, ExtendedReal, Inclusion, Interval,
    RegionError, Semicontinuity, TypeTag,
};
use crate::affine::{FocusFocusDatum, PlanarPoint, TauElement};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegionDocument {
    pub system: String,
    pub epsilon: Vec<i8>,
    pub focus: Vec<FocusDoc>,
    pub strips: Vec<StripDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub anchor: Option<TauElement>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FocusDoc {
    pub x: f64,
    pub y: f64,
    pub k: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StripDoc {
    pub interval: [ExtendedReal; 2],
    pub interval_inclusion: [bool; 2],
    #[serde(rename = "type")]
    pub type_tag: TypeTag,
    pub lower: DescriptorDoc,
    pub upper: DescriptorDoc,
    pub lower_inclusion: Inclusion,
    pub upper_inclusion: Inclusion,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum DescriptorDoc {
    #[serde(rename = "pl")]
    PiecewiseLinear { vertices: Vec<[f64; 2]> },
    #[serde(rename = "sampled")]
    Sampled { xs: Vec<f64>, ys: Vec<ExtendedReal> },
}

impl DescriptorDoc {
    fn from_descriptor(d: &BoundaryDescriptor) -> Self {
        match &d.data {
            BoundaryData::PiecewiseLinear(v) => DescriptorDoc::PiecewiseLinear {
                vertices: v.iter().map(|p| [p.x, p.y]).collect(),
            },
            BoundaryData::Sampled { xs, ys } => DescriptorDoc::Sampled {
                xs: xs.clone(),
                ys: ys.clone(),
            },
        }
    }

    /// `fallback` is the one-sided semicontinuity the boundary's role demands.
    fn into_descriptor(self, fallback: Semicontinuity) -> Result<BoundaryDescriptor, RegionError> {
        match self {
            DescriptorDoc::PiecewiseLinear { vertices } => BoundaryDescriptor::piecewise_linear(
                vertices.into_iter().map(|[x, y]| PlanarPoint::new(x, y)).collect(),
            ),
            DescriptorDoc::Sampled { xs, ys } => BoundaryDescriptor::sampled_inferred(xs, ys, fallback),
        }
    }
}

impl From<&CartographicRegion> for RegionDocument {
    fn from(r: &CartographicRegion) -> Self {
        RegionDocument {
            system: r.system.clone(),
            epsilon: r.epsilon.clone(),
            focus: r
                .focus
                .iter()
                .map(|f| FocusDoc {
                    x: f.x,
                    y: f.y,
                    k: f.multiplicity,
                })
                .collect(),
            strips: r
                .strips
                .iter()
                .map(|s| StripDoc {
                    interval: [s.interval.a, s.interval.b],
                    interval_inclusion: [s.interval.include_a, s.interval.include_b],
                    type_tag: s.type_tag,
                    lower: DescriptorDoc::from_descriptor(&s.lower),
                    upper: DescriptorDoc::from_descriptor(&s.upper),
                    lower_inclusion: s.lower_inclusion,
                    upper_inclusion: s.upper_inclusion,
                })
                .collect(),
            anchor: Some(r.anchor),
        }
    }
}

impl TryFrom<RegionDocument> for CartographicRegion {
    type Error = RegionError;

    fn try_from(doc: RegionDocument) -> Result<Self, RegionError> {
        if doc.epsilon.len() != doc.focus.len() {
            return Err(RegionError::Schema(format!(
                "epsilon has {} entries for {} focus values",
                doc.epsilon.len(),
                doc.focus.len()
            )));
        }
        let focus = doc
            .focus
            .iter()
            .zip(&doc.epsilon)
            .map(|(f, &e)| {
                if f.k == 0 || !(e == 1 || e == -1) {
                    Err(RegionError::Schema(format!("bad focus datum k={} epsilon={e}", f.k)))
                } else {
                    Ok(FocusFocusDatum::new(f.x, f.y, f.k, e))
                }
            })
            .collect::<Result<Vec<_>, _>>()?;
        let strips = doc
            .strips
            .into_iter()
            .map(|s| {
                let interval = Interval::new(
                    s.interval[0],
                    s.interval[1],
                    s.interval_inclusion[0],
                    s.interval_inclusion[1],
                )?;
                construct_region(
                    interval,
                    s.type_tag,
                    s.lower.into_descriptor(Semicontinuity::Upper)?,
                    s.upper.into_descriptor(Semicontinuity::Lower)?,
                    s.lower_inclusion,
                    s.upper_inclusion,
                )
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(CartographicRegion {
            system: doc.system,
            epsilon: doc.epsilon,
            focus,
            strips,
            anchor: doc.anchor.unwrap_or_default(),
        })
    }
}

pub fn region_to_json(r: &CartographicRegion) -> String {
    serde_json::to_string_pretty(&RegionDocument::from(r)).expect("region serializes")
}

pub fn region_from_json(s: &str) -> Result<CartographicRegion, RegionError> {
    let doc: RegionDocument = serde_json::from_str(s).map_err(|e| RegionError::Schema(e.to_string()))?;
    CartographicRegion::try_from(doc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::region::{find_equivalence, TypedRegion};

    fn sample_region() -> CartographicRegion {
        let left: TypedRegion = construct_region(
            Interval::new(ExtendedReal::NEG_INF, 0.0.into(), false, false).unwrap(),
            TypeTag::II,
            BoundaryDescriptor::constant(0.0, &[-2.0, 0.0]).unwrap(),
            BoundaryDescriptor::infinite(ExtendedReal::POS_INF, &[-2.0, -1.0, 0.0]).unwrap(),
            Inclusion::Closed,
            Inclusion::Open,
        )
        .unwrap();
        CartographicRegion::new("demo", vec![left]).with_focus(vec![FocusFocusDatum::new(0.0, 1.25, 1, 1)])
    }

    #[test]
    fn json_shape() {
        let s = region_to_json(&sample_region());
        let v: serde_json::Value = serde_json::from_str(&s).unwrap();
        assert_eq!(v["strips"][0]["interval"][0], "-inf");
        assert_eq!(v["strips"][0]["type"], "II");
        assert_eq!(v["strips"][0]["lower"]["kind"], "pl");
        assert_eq!(v["strips"][0]["upper"]["ys"][1], "inf");
        assert_eq!(v["strips"][0]["upper_inclusion"], "open");
        assert_eq!(v["focus"][0]["k"], 1);
        assert_eq!(v["epsilon"][0], 1);
    }

    #[test]
    fn round_trip_is_identity_equivalent() {
        let r = sample_region();
        let back = region_from_json(&region_to_json(&r)).unwrap();
        assert_eq!(back, r);
        assert!(find_equivalence(&r, &back).unwrap().is_identity());
    }

    #[test]
    fn rejects_invalid_documents() {
        let s = region_to_json(&sample_region()).replace("\"II\"", "\"I\"");
        assert!(matches!(region_from_json(&s), Err(RegionError::Invariant { .. })));
        assert!(matches!(region_from_json("{}"), Err(RegionError::Schema(_))));
    }
}
