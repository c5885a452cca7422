//! JSON form of étale diagrams.
//!
//! ```json
//! {"R": "<presentation>", "S": "...", "Aprime": "...", "A": "...",
//!  "maps": {"alpha": [[{"word": [0, 1], "coeff": "1/2"}]], "beta": [], "gamma": [], "delta": []}}
//! ```
//!
//! Each map lists, per source generator, its image as a polynomial in the
//! target generators: `alpha: R → S`, `beta: S → A`, `gamma: A' → A`,
//! `delta: R → A'`. `A'` and `A` must be honest truncations (every product
//! of basis elements defined), e.g. with all words past the bound killed.

use serde::Deserialize;

use ncfourier_core::dsl::parse_presentation;
use ncfourier_core::error::{Error, Result};
use ncfourier_core::etale::{AlgebraMorphism, CentralExtension, EtaleDiagram, PresentationMap};
use ncfourier_core::ncalg::{JsonTerm, NcPoly, Presentation, TruncatedAlgebra};

type PolyList = Vec<Vec<JsonTerm>>;

#[derive(Deserialize, Debug)]
#[serde(deny_unknown_fields)]
pub struct Maps {
    #[serde(default)]
    pub alpha: PolyList,
    pub beta: PolyList,
    pub gamma: PolyList,
    #[serde(default)]
    pub delta: PolyList,
}

#[derive(Deserialize, Debug)]
#[serde(deny_unknown_fields)]
pub struct DiagramFile {
    #[serde(rename = "R")]
    pub r: Option<String>,
    #[serde(rename = "S")]
    pub s: Option<String>,
    #[serde(rename = "Aprime")]
    pub a_prime: String,
    #[serde(rename = "A")]
    pub a: String,
    pub maps: Maps,
}

#[derive(Deserialize, Debug)]
#[serde(deny_unknown_fields)]
pub struct AlphaFile {
    #[serde(rename = "R")]
    pub r: String,
    #[serde(rename = "S")]
    pub s: String,
    pub alpha: PolyList,
}

fn polys(list: &PolyList, what: &str) -> Result<Vec<NcPoly>> {
    list.iter()
        .map(|terms| {
            NcPoly::from_json_terms(terms)
                .ok_or_else(|| Error::InvalidInput(format!("malformed coefficient in `{what}`")))
        })
        .collect()
}

fn honest(p: &Presentation, what: &str) -> Result<TruncatedAlgebra> {
    let alg = TruncatedAlgebra::from_presentation(p)?;
    if !alg.is_honest() {
        return Err(Error::InvalidInput(format!(
            "`{what}` is not an honest truncation; add relations killing the words of length bound+1"
        )));
    }
    Ok(alg)
}

pub fn parse_json<T: serde::de::DeserializeOwned>(text: &str, what: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Parse {
        line: e.line(),
        col: e.column(),
        msg: format!("{what}: {e}"),
    })
}

impl AlphaFile {
    pub fn to_map(&self) -> Result<PresentationMap> {
        let map = PresentationMap {
            source: parse_presentation(&self.r)?,
            target: parse_presentation(&self.s)?,
            images: polys(&self.alpha, "alpha")?,
        };
        if map.images.len() != map.source.ngens() {
            return Err(Error::NotAMorphism(format!(
                "alpha has {} images for {} generators",
                map.images.len(),
                map.source.ngens()
            )));
        }
        map.validate()?;
        Ok(map)
    }
}

impl DiagramFile {
    /// Builds the diagram; `alpha` fills in `R`, `S` and `maps.alpha` when
    /// they are absent.
    pub fn to_diagram(&self, alpha: Option<&PresentationMap>) -> Result<EtaleDiagram> {
        let map = match (&self.r, &self.s, alpha) {
            (Some(r), Some(s), _) => {
                AlphaFile { r: r.clone(), s: s.clone(), alpha: self.maps.alpha.clone() }.to_map()?
            }
            (None, None, Some(a)) => a.clone(),
            _ => return Err(Error::InvalidInput("diagram needs both `R` and `S`".into())),
        };
        let a_prime_p = parse_presentation(&self.a_prime)?;
        let a_p = parse_presentation(&self.a)?;
        let a_prime = honest(&a_prime_p, "Aprime")?;
        let a = honest(&a_p, "A")?;
        let gamma_images: Vec<_> = polys(&self.maps.gamma, "gamma")?.iter().map(|p| a.eval_own(p)).collect();
        if gamma_images.len() != a_prime_p.ngens() {
            return Err(Error::NotAMorphism(format!(
                "gamma has {} images for {} generators",
                gamma_images.len(),
                a_prime_p.ngens()
            )));
        }
        let gamma = CentralExtension::from_generator_images(a_prime.clone(), a.clone(), &gamma_images)?;
        let beta = AlgebraMorphism::from_polys(map.target.clone(), a, &polys(&self.maps.beta, "beta")?)?;
        let delta = AlgebraMorphism::from_polys(map.source.clone(), a_prime, &polys(&self.maps.delta, "delta")?)?;
        EtaleDiagram::new(map, beta, gamma, delta)
    }
}
