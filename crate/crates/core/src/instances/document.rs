//! JSON form of an [`Instance`].
//!
//! Rationals are strings `"p/q"`; ring elements are objects keyed by
//! `"degree:index"`; Laurent elements are arrays of `{power, coeff}`.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::algebra::{LaurentElement, Product, RingElement, RingPresentation};
use crate::error::{DocumentError, ModelError};
use crate::model::{EquivariantClass, FixedComponent, Instance, Weight};
use crate::rational::{format_rational, parse_rational, Rational};

pub const MAX_DIM: u32 = 64;
pub const MAX_COMPONENTS: usize = 1024;
pub const MAX_CLASSES: usize = 4096;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct InstanceDocument {
    pub name: String,
    pub dim_m: u32,
    pub degree_bound: u32,
    pub components: Vec<ComponentDocument>,
    pub classes: Vec<ClassDocument>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct ComponentDocument {
    pub id: String,
    pub dim: u32,
    pub moment_value: String,
    pub weights: Vec<WeightDocument>,
    pub cohomology: CohomologyDocument,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub euler_class: Option<Vec<TermDocument>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WeightDocument {
    pub k: i64,
    pub mult: u32,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CohomologyDocument {
    Point(PointTag),
    Ring(RingDocument),
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum PointTag {
    #[serde(rename = "point")]
    Point,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct RingDocument {
    pub dims: BTreeMap<String, usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<BTreeMap<String, Vec<String>>>,
    pub products: Vec<ProductDocument>,
    pub top_degree: u32,
    pub integral: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProductDocument {
    pub left: String,
    pub right: String,
    pub value: BTreeMap<String, String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermDocument {
    pub power: i64,
    pub coeff: BTreeMap<String, String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClassDocument {
    pub name: String,
    pub degree: u32,
    pub restrictions: BTreeMap<String, Vec<TermDocument>>,
}

/// Parses and validates a JSON instance document.
pub fn load_instance(json: &str) -> Result<Instance, DocumentError> {
    let de = &mut serde_json::Deserializer::from_str(json);
    let doc: InstanceDocument = serde_path_to_error::deserialize(de).map_err(|e| DocumentError::Schema {
        path: match e.path().to_string() {
            p if p == "." => "$".to_owned(),
            p => format!("$.{p}"),
        },
        message: e.inner().to_string(),
    })?;
    Ok(doc.to_instance()?)
}

/// Pretty-printed JSON with stable field and key order.
pub fn save_instance(inst: &Instance) -> String {
    let mut s =
        serde_json::to_string_pretty(&InstanceDocument::from_instance(inst)).expect("documents always serialize");
    s.push('\n');
    s
}

fn err(at: impl Into<String>, msg: impl Into<String>) -> ModelError {
    ModelError::new(at, msg)
}

fn rational(at: &str, s: &str) -> Result<Rational, ModelError> {
    parse_rational(s).map_err(|e| err(at, e.to_string()))
}

fn parse_key(at: &str, key: &str, ring: &RingPresentation) -> Result<usize, ModelError> {
    let bad = || err(at, format!("basis key {key:?} is not \"degree:index\" in range"));
    let (d, i) = key.split_once(':').ok_or_else(bad)?;
    let d: usize = d.parse().map_err(|_| bad())?;
    let i: usize = i.parse().map_err(|_| bad())?;
    ring.index(d, i).ok_or_else(bad)
}

fn element(at: &str, map: &BTreeMap<String, String>, ring: &RingPresentation) -> Result<RingElement, ModelError> {
    let mut v = ring.zero();
    for (k, s) in map {
        let at = format!("{at}[{k:?}]");
        let i = parse_key(&at, k, ring)?;
        v[i] = rational(&at, s)?;
    }
    Ok(v)
}

fn element_doc(ring: &RingPresentation, x: &[Rational]) -> BTreeMap<String, String> {
    x.iter()
        .enumerate()
        .filter(|(_, v)| !num_traits::Zero::is_zero(*v))
        .map(|(i, v)| {
            let (d, j) = ring.position(i);
            (format!("{d}:{j}"), format_rational(v))
        })
        .collect()
}

fn laurent(at: &str, terms: &[TermDocument], ring: &Arc<RingPresentation>) -> Result<LaurentElement, ModelError> {
    let mut out = Vec::with_capacity(terms.len());
    for (i, t) in terms.iter().enumerate() {
        let at = format!("{at}[{i}]");
        if t.power.unsigned_abs() > u64::from(MAX_DIM) {
            return Err(err(format!("{at}.power"), format!("power {} out of range", t.power)));
        }
        out.push((t.power, element(&format!("{at}.coeff"), &t.coeff, ring)?));
    }
    LaurentElement::from_terms(ring.clone(), out).map_err(|e| err(at, e.to_string()))
}

fn laurent_doc(e: &LaurentElement) -> Vec<TermDocument> {
    e.terms()
        .rev()
        .map(|(p, c)| TermDocument {
            power: p,
            coeff: element_doc(e.ring(), c),
        })
        .collect()
}

impl RingDocument {
    fn to_ring(&self, at: &str) -> Result<RingPresentation, ModelError> {
        let top = self.top_degree;
        if top > MAX_DIM {
            return Err(err(
                format!("{at}.topDegree"),
                format!("top degree {top} exceeds {MAX_DIM}"),
            ));
        }
        let mut dims = vec![0usize; top as usize + 1];
        for (k, &n) in &self.dims {
            let d: usize = k.parse().ok().filter(|&d| d <= top as usize).ok_or_else(|| {
                err(
                    format!("{at}.dims[{k:?}]"),
                    "degree key not an integer in 0..=topDegree",
                )
            })?;
            if n > crate::algebra::MAX_RING_RANK {
                return Err(err(format!("{at}.dims[{k:?}]"), format!("dimension {n} is too large")));
            }
            dims[d] = n;
        }
        let labels = match &self.labels {
            None => None,
            Some(map) => {
                let mut flat = Vec::new();
                for (d, &n) in dims.iter().enumerate() {
                    match map.get(&d.to_string()) {
                        Some(l) if l.len() == n => flat.extend(l.iter().cloned()),
                        None if d == 0 => flat.push("1".to_owned()),
                        None if n == 0 => {}
                        _ => {
                            return Err(err(
                                format!("{at}.labels[\"{d}\"]"),
                                format!("expected {n} labels for degree {d}"),
                            ))
                        }
                    }
                }
                if map.keys().any(|k| k.parse::<usize>().map_or(true, |d| d >= dims.len())) {
                    return Err(err(format!("{at}.labels"), "label key outside 0..=topDegree"));
                }
                Some(flat)
            }
        };
        let integral = self
            .integral
            .iter()
            .enumerate()
            .map(|(i, s)| rational(&format!("{at}.integral[{i}]"), s))
            .collect::<Result<Vec<_>, _>>()?;
        // A shape-only ring to resolve "degree:index" keys.
        let shape = RingPresentation::new(dims.clone(), None, &[], {
            let mut v = vec![Rational::from_integer(0.into()); dims[top as usize]];
            if let Some(first) = v.first_mut() {
                *first = Rational::from_integer(1.into());
            }
            v
        })
        .map_err(|e| err(at, e.to_string()))?;
        let products = self
            .products
            .iter()
            .enumerate()
            .map(|(i, p)| {
                let at = format!("{at}.products[{i}]");
                Ok(Product {
                    left: parse_key(&format!("{at}.left"), &p.left, &shape)?,
                    right: parse_key(&format!("{at}.right"), &p.right, &shape)?,
                    value: element(&format!("{at}.value"), &p.value, &shape)?,
                })
            })
            .collect::<Result<Vec<_>, ModelError>>()?;
        RingPresentation::new(dims, labels, &products, integral).map_err(|e| err(at, e.to_string()))
    }

    fn from_ring(ring: &RingPresentation) -> Self {
        let dims: BTreeMap<String, usize> = ring
            .dims()
            .iter()
            .enumerate()
            .filter(|(_, &n)| n > 0)
            .map(|(d, &n)| (d.to_string(), n))
            .collect();
        let labels = dims
            .keys()
            .map(|d| {
                let d: usize = d.parse().unwrap();
                (
                    d.to_string(),
                    ring.degree_range(d).map(|i| ring.labels()[i].clone()).collect(),
                )
            })
            .collect();
        let products = ring
            .nontrivial_products()
            .map(|(i, j, v)| {
                let key = |k: usize| {
                    let (d, p) = ring.position(k);
                    format!("{d}:{p}")
                };
                ProductDocument {
                    left: key(i),
                    right: key(j),
                    value: element_doc(ring, &v),
                }
            })
            .collect();
        let top = ring.top_degree();
        RingDocument {
            dims,
            labels: Some(labels),
            products,
            top_degree: top as u32,
            integral: ring
                .degree_range(top)
                .map(|i| format_rational(&ring.integral()[i]))
                .collect(),
        }
    }
}

impl InstanceDocument {
    pub fn to_instance(&self) -> Result<Instance, ModelError> {
        if self.dim_m > MAX_DIM || self.degree_bound > MAX_DIM {
            return Err(err("dimM", format!("dimensions above {MAX_DIM} are not supported")));
        }
        if self.components.len() > MAX_COMPONENTS || self.classes.len() > MAX_CLASSES {
            return Err(err("components", "too many components or classes"));
        }
        let mut components = Vec::with_capacity(self.components.len());
        for (i, c) in self.components.iter().enumerate() {
            let at = format!("components[{i}]");
            let moment = rational(&format!("{at}.momentValue"), &c.moment_value)?;
            let ring = Arc::new(match &c.cohomology {
                CohomologyDocument::Point(_) => RingPresentation::point(),
                CohomologyDocument::Ring(r) => r.to_ring(&format!("{at}.cohomology"))?,
            });
            let euler = c
                .euler_class
                .as_ref()
                .map(|t| laurent(&format!("{at}.eulerClass"), t, &ring))
                .transpose()?;
            let weights = c.weights.iter().map(|w| Weight::new(w.k, w.mult)).collect();
            let prefix = format!("component {:?}", c.id);
            let comp =
                FixedComponent::new(c.id.clone(), c.dim, moment, weights, ring, euler, self.dim_m).map_err(|e| {
                    let field = e.at.strip_prefix(&prefix).unwrap_or("");
                    err(format!("{at}{field} (id {:?})", c.id), e.message)
                })?;
            components.push(comp);
        }

        let mut classes = Vec::with_capacity(self.classes.len());
        for (i, c) in self.classes.iter().enumerate() {
            let at = format!("classes[{i}].restrictions");
            if let Some(unknown) = c
                .restrictions
                .keys()
                .find(|k| !components.iter().any(|f| f.id() == k.as_str()))
            {
                return Err(err(format!("{at}[{unknown:?}]"), "no component with this id"));
            }
            let restrictions = components
                .iter()
                .map(|f| {
                    let at = format!("{at}[{:?}]", f.id());
                    let terms = c
                        .restrictions
                        .get(f.id())
                        .ok_or_else(|| err(&at, "missing restriction for this component"))?;
                    laurent(&at, terms, f.cohomology())
                })
                .collect::<Result<Vec<_>, _>>()?;
            classes.push(EquivariantClass {
                name: c.name.clone(),
                degree: c.degree,
                restrictions,
            });
        }
        Instance::new(self.name.clone(), self.dim_m, self.degree_bound, components, classes)
    }

    pub fn from_instance(inst: &Instance) -> Self {
        let components = inst
            .components()
            .iter()
            .map(|f| ComponentDocument {
                id: f.id().to_owned(),
                dim: f.dim(),
                moment_value: format_rational(f.moment()),
                weights: f
                    .weights()
                    .iter()
                    .map(|w| WeightDocument { k: w.k, mult: w.mult })
                    .collect(),
                cohomology: if f.is_isolated() {
                    CohomologyDocument::Point(PointTag::Point)
                } else {
                    CohomologyDocument::Ring(RingDocument::from_ring(f.cohomology()))
                },
                euler_class: (!f.is_isolated()).then(|| laurent_doc(f.euler())),
            })
            .collect();
        let classes = inst
            .classes()
            .iter()
            .map(|c| ClassDocument {
                name: c.name.clone(),
                degree: c.degree,
                restrictions: inst
                    .components()
                    .iter()
                    .zip(&c.restrictions)
                    .map(|(f, r)| (f.id().to_owned(), laurent_doc(r)))
                    .collect(),
            })
            .collect();
        InstanceDocument {
            name: inst.name().to_owned(),
            dim_m: inst.dim_m(),
            degree_bound: inst.degree_bound(),
            components,
            classes,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::build_projective_space;
    use crate::rational::int;

    #[test]
    fn schema_errors_carry_a_path() {
        let e = load_instance(r#"{"name": "x", "dimM": "four"}"#).unwrap_err();
        match e {
            DocumentError::Schema { path, .. } => assert_eq!(path, "$.dimM"),
            other => panic!("{other}"),
        }
        let e =
            load_instance(r#"{"name": "x", "dimM": 2, "degreeBound": 2, "components": [], "classes": [], "extra": 1}"#)
                .unwrap_err();
        assert!(matches!(e, DocumentError::Schema { .. }), "{e}");
    }

    #[test]
    fn odd_component_dimension_is_named() {
        let inst = build_projective_space(&[0, 1, 3], &int(1)).unwrap();
        let mut doc = InstanceDocument::from_instance(&inst);
        doc.components[1].dim = 1;
        let e = doc.to_instance().unwrap_err();
        assert!(e.at.contains("components[1].dim"), "{e}");
        assert!(e.at.contains("p1"), "{e}");
    }

    #[test]
    fn euler_leading_term_checked() {
        let inst = build_projective_space(&[0, 1], &crate::rational::frac(1, 2)).unwrap();
        let mut doc = InstanceDocument::from_instance(&inst);
        doc.components[0].euler_class = Some(vec![TermDocument {
            power: 1,
            coeff: [("0:0".to_owned(), "2/1".to_owned())].into(),
        }]);
        let e = doc.to_instance().unwrap_err();
        assert!(e.message.contains("Euler leading term mismatch"), "{e}");
    }

    #[test]
    fn missing_and_unknown_restrictions() {
        let inst = build_projective_space(&[0, 1], &crate::rational::frac(1, 2)).unwrap();
        let mut doc = InstanceDocument::from_instance(&inst);
        let terms = doc.classes[0].restrictions.remove("p0").unwrap();
        assert!(doc.to_instance().unwrap_err().message.contains("missing restriction"));
        doc.classes[0].restrictions.insert("q".into(), terms);
        assert!(doc.to_instance().unwrap_err().message.contains("no component"));
    }
}
