//! Vanishing of rationalized Witt classes: a class is zero exactly when its
//! signature step function vanishes at every embedding in `G0`.

use num_rational::BigRational;
use num_traits::Zero;
use serde::ser::{SerializeMap, SerializeStruct};
use serde::{Serialize, Serializer};

use crate::field_arith::{embeddings_g0, Embedding};
use crate::forms::WittElement;
use crate::rational::format_rational;
use crate::sigfunc::{signature_step_function_with, CirclePoint, SignatureStepFunction};
use crate::{Result, Settings};

/// A point where the class has nonzero signature. The sample is a root of
/// unity; every other point of the same open arc, in particular every
/// transcendental one, carries the same value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub embedding: Embedding,
    pub sample: CirclePoint,
    pub value: BigRational,
}

impl Serialize for Witness {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Sample {
            #[serde(rename = "N")]
            n: u64,
            j: u64,
        }
        let (n, j) = match self.sample {
            CirclePoint::Exact { n, j } => (n, j),
            CirclePoint::Isolated { .. } => unreachable!("samples are exact"),
        };
        let mut st = s.serialize_struct("Witness", 3)?;
        st.serialize_field("embedding_k", &self.embedding.exponent())?;
        st.serialize_field("sample", &Sample { n, j })?;
        st.serialize_field("value", &format_rational(&self.value))?;
        st.end()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decision {
    pub trivial: bool,
    pub witnesses: Vec<Witness>,
    /// One step function per embedding of `G0`, in order.
    pub step_functions: Vec<SignatureStepFunction>,
}

impl Serialize for Decision {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        struct ByEmbedding<'a>(&'a [SignatureStepFunction]);
        impl Serialize for ByEmbedding<'_> {
            fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
                let mut map = s.serialize_map(Some(self.0.len()))?;
                for f in self.0 {
                    map.serialize_entry(&f.embedding().exponent().to_string(), f)?;
                }
                map.end()
            }
        }
        let mut st = s.serialize_struct("Decision", 3)?;
        st.serialize_field("trivial", &self.trivial)?;
        st.serialize_field("witnesses", &self.witnesses)?;
        st.serialize_field("step_functions", &ByEmbedding(&self.step_functions))?;
        st.end()
    }
}

pub fn is_trivial(w: &WittElement) -> Result<Decision> {
    is_trivial_with(w, &Settings::default())
}

pub fn is_trivial_with(w: &WittElement, settings: &Settings) -> Result<Decision> {
    w.validate()?;
    let embeddings = embeddings_g0(w.conductor());
    let step_functions = step_functions(w, &embeddings, settings)?;
    let mut witnesses = Vec::new();
    for f in &step_functions {
        for (sample, value) in f.samples().iter().zip(f.arc_values()) {
            if !value.is_zero() {
                witnesses.push(Witness {
                    embedding: f.embedding(),
                    sample: sample.clone(),
                    value: value.clone(),
                });
            }
        }
    }
    Ok(Decision {
        trivial: witnesses.is_empty(),
        witnesses,
        step_functions,
    })
}

fn step_functions(w: &WittElement, embeddings: &[Embedding], settings: &Settings) -> Result<Vec<SignatureStepFunction>> {
    let threads = std::thread::available_parallelism().map_or(1, |n| n.get()).min(embeddings.len());
    if threads <= 1 {
        return embeddings
            .iter()
            .map(|rho| signature_step_function_with(w, rho, settings, &[]))
            .collect();
    }
    let chunk = embeddings.len().div_ceil(threads);
    std::thread::scope(|scope| {
        let handles: Vec<_> = embeddings
            .chunks(chunk)
            .map(|part| {
                scope.spawn(move || {
                    part.iter()
                        .map(|rho| signature_step_function_with(w, rho, settings, &[]))
                        .collect::<Result<Vec<_>>>()
                })
            })
            .collect();
        let mut out = Vec::with_capacity(embeddings.len());
        for h in handles {
            out.extend(h.join().expect("step function worker panicked")?);
        }
        Ok(out)
    })
}

/// Decides each element independently; failures do not stop the batch.
pub fn decide_batch(ws: &[WittElement]) -> Vec<Result<Decision>> {
    let settings = Settings::default();
    ws.iter().map(|w| is_trivial_with(w, &settings)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field_arith::CyclotomicNumber;
    use crate::forms::{extend_constant, make_canonical, make_metabolic, CanonicalBlock, ConstantForm, HermitianForm};
    use crate::funcfield::RationalFunction;
    use crate::rational::int;
    use crate::sigfunc::evaluate_class_at;

    fn canonical() -> WittElement {
        make_canonical(&int(0), &[CanonicalBlock { n: 4, j: 1, r: int(1) }]).unwrap()
    }

    #[test]
    fn metabolic_is_trivial() {
        for m in [1u64, 3, 4, 5, 8, 12] {
            let w = WittElement::from_form(make_metabolic(m, 1, 1, m).unwrap());
            let d = is_trivial(&w).unwrap();
            assert!(d.trivial && d.witnesses.is_empty(), "m = {m}");
        }
    }

    #[test]
    fn canonical_block_is_detected() {
        let d = is_trivial(&canonical()).unwrap();
        assert!(!d.trivial);
        assert_eq!(d.step_functions.len(), 1);
        assert!(d.witnesses.iter().all(|x| x.embedding == Embedding::identity(4)));
        let values: Vec<_> = d.witnesses.iter().map(|x| x.value.clone()).collect();
        assert_eq!(values, vec![int(-1), int(1)]);
        for x in &d.witnesses {
            assert_eq!(evaluate_class_at(&canonical(), &x.embedding, &x.sample).unwrap(), x.value);
        }
        let json = serde_json::to_value(&d).unwrap();
        assert_eq!(json["trivial"], false);
        assert_eq!(json["witnesses"][0], serde_json::json!({"embedding_k": 1, "sample": {"N": 8, "j": 1}, "value": "-1/1"}));
        assert!(json["step_functions"]["1"]["arc_values"].is_array());
    }

    #[test]
    fn isotropic_constant_is_trivial() {
        let f = ConstantForm::diagonal(1, 1, &[CyclotomicNumber::one(1), CyclotomicNumber::from_integer(1, -1)]).unwrap();
        assert!(is_trivial(&WittElement::from_form(extend_constant(&f))).unwrap().trivial);
    }

    #[test]
    fn batch() {
        let metabolic = WittElement::from_form(make_metabolic(1, 1, 1, 3).unwrap());
        let out = decide_batch(&[metabolic, canonical()]);
        let flags: Vec<bool> = out.into_iter().map(|d| d.unwrap().trivial).collect();
        assert_eq!(flags, vec![true, false]);
        assert!(decide_batch(&[]).is_empty());
        let one = WittElement::from_form(HermitianForm::diagonal(1, 1, &[RationalFunction::one(1)]).unwrap());
        let cancel = one.direct_sum(&one.scale(&int(-1))).unwrap();
        assert!(decide_batch(&[cancel])[0].as_ref().unwrap().trivial);
    }
}
