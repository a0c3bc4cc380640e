//! JSON scenario files.
//!
//! ```json
//! {
//!   "version": 1,
//!   "persons": ["Ann", "Bea"],
//!   "params": { "alpha": 0.8, "beta": 0.5, "gamma": 0.25 },
//!   "options": [
//!     { "name": "coin flip", "correlation": "antitone",
//!       "treatments": [ { "success": 80, "failure": 50, "chance": { "precise": 0.5 } },
//!                       { "success": 80, "failure": 50, "chance": { "precise": 0.5 } } ] },
//!     { "name": "explicit", "states": [[80, 50], [50, 80]],
//!       "credal": [ { "interval": [0.25, 0.75] }, { "interval": [0.25, 0.75] } ] }
//!   ]
//! }
//! ```
//!
//! An option is either per-person `treatments` with a `correlation` tag
//! (`independent` when omitted), or explicit `states` with per-state
//! `credal` chance entries. Chances are `{"precise": p}`,
//! `{"interval": [lo, hi]}` or `"vacuous"`.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::ellsberg::PayoffSchedule;
use crate::error::{Error, Result};
use crate::prospects::{ChanceInfo, CredalSet, OutcomeProfile, Prospect};
use crate::social::{builtin_options, Correlation, PeuParams, SocialOption, Treatment};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub version: u32,
    pub persons: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub params: Option<ParamsSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub payoffs: Option<PayoffSchedule>,
    pub options: Vec<OptionSpec>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamsSpec {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OptionSpec {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub correlation: Option<Correlation>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub treatments: Option<Vec<Treatment>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub states: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub credal: Option<Vec<ChanceInfo>>,
}

/// A validated scenario.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub persons: Vec<String>,
    pub params: PeuParams,
    pub payoffs: PayoffSchedule,
    pub options: Vec<SocialOption>,
}

fn schema(context: &str, err: impl std::fmt::Display) -> Error {
    Error::Schema(format!("{context}: {err}"))
}

impl OptionSpec {
    fn build(&self, persons: &[String]) -> Result<SocialOption> {
        let ctx = format!("option '{}'", self.name);
        match (&self.treatments, &self.states, &self.credal) {
            (Some(treatments), None, None) => {
                for (person, t) in persons.iter().zip(treatments) {
                    t.chance.validate(&format!("chance for {person}")).map_err(|e| schema(&ctx, e))?;
                }
                SocialOption::from_marginals(
                    self.name.clone(),
                    persons.to_vec(),
                    treatments.clone(),
                    self.correlation.unwrap_or(Correlation::Independent),
                )
                .map_err(|e| schema(&ctx, e))
            }
            (None, Some(states), Some(credal)) => {
                if self.correlation.is_some() {
                    return Err(schema(&ctx, "correlation applies only to treatments"));
                }
                for (i, c) in credal.iter().enumerate() {
                    c.validate(&format!("credal entry {i}")).map_err(|e| schema(&ctx, e))?;
                }
                let profiles = states
                    .iter()
                    .map(|s| OutcomeProfile::new(s.clone()))
                    .collect::<Result<Vec<_>>>()
                    .map_err(|e| schema(&ctx, e))?;
                let credal_set = if credal.iter().all(ChanceInfo::is_precise) {
                    CredalSet::Point(credal.iter().map(|c| c.bounds().0).collect())
                } else {
                    CredalSet::Intervals(credal.clone())
                };
                let joint = Prospect::new(profiles, credal_set).map_err(|e| schema(&ctx, e))?;
                SocialOption::new(self.name.clone(), persons.to_vec(), joint).map_err(|e| schema(&ctx, e))
            }
            _ => Err(schema(&ctx, "give either `treatments` or both `states` and `credal`")),
        }
    }

    fn from_option(option: &SocialOption) -> Result<Self> {
        if let Some(m) = &option.marginals {
            return Ok(Self {
                name: option.name.clone(),
                correlation: Some(m.correlation),
                treatments: Some(m.treatments.clone()),
                states: None,
                credal: None,
            });
        }
        let credal = match option.joint.credal() {
            CredalSet::Point(d) => d.iter().map(|&p| ChanceInfo::Precise(p)).collect(),
            CredalSet::Intervals(b) => b.clone(),
            CredalSet::Finite(_) => {
                return Err(Error::Schema(format!(
                    "option '{}' has a finite credal set, which scenario files cannot express",
                    option.name
                )))
            }
        };
        Ok(Self {
            name: option.name.clone(),
            correlation: None,
            treatments: None,
            states: Some(option.joint.states().iter().map(|s| s.values().to_vec()).collect()),
            credal: Some(credal),
        })
    }
}

impl ScenarioFile {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Schema(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| schema(&path.display().to_string(), e))?;
        Self::parse(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("scenario serializes")
    }

    pub fn validate(&self) -> Result<Scenario> {
        if self.version != SCHEMA_VERSION {
            return Err(Error::Schema(format!("unsupported version {}, expected {SCHEMA_VERSION}", self.version)));
        }
        if self.persons.is_empty() {
            return Err(Error::Schema("persons must be nonempty".into()));
        }
        if self.options.is_empty() {
            return Err(Error::Schema("options must be nonempty".into()));
        }
        let params = match self.params {
            Some(p) => PeuParams::new(p.alpha, p.beta, p.gamma).map_err(|e| schema("params", e))?,
            None => PeuParams::default(),
        };
        let payoffs = match self.payoffs {
            Some(s) => {
                s.validate().map_err(|e| schema("payoffs", e))?;
                s
            }
            None => PayoffSchedule::default(),
        };
        let options = self.options.iter().map(|o| o.build(&self.persons)).collect::<Result<Vec<_>>>()?;
        Ok(Scenario { persons: self.persons.clone(), params, payoffs, options })
    }

    pub fn from_options(options: &[SocialOption], params: &PeuParams) -> Result<Self> {
        let persons = options.first().map(|o| o.persons.clone()).unwrap_or_default();
        Ok(Self {
            version: SCHEMA_VERSION,
            persons,
            params: Some(ParamsSpec { alpha: params.alpha.value(), beta: params.beta, gamma: params.gamma }),
            payoffs: None,
            options: options.iter().map(OptionSpec::from_option).collect::<Result<_>>()?,
        })
    }

    /// The eight blindness treatments with option (4) at shortfall `cost_c`.
    pub fn builtin(cost_c: f64, params: &PeuParams) -> Result<Self> {
        Self::from_options(&builtin_options(cost_c)?, params)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::social::peu_value;

    #[test]
    fn builtin_round_trip_preserves_values() {
        let params = PeuParams::default();
        let file = ScenarioFile::builtin(2.0, &params).unwrap();
        let back = ScenarioFile::parse(&file.to_json()).unwrap().validate().unwrap();
        let original = builtin_options(2.0).unwrap();
        assert_eq!(back.options.len(), 8);
        for (a, b) in original.iter().zip(&back.options) {
            assert!((peu_value(a, &params) - peu_value(b, &params)).abs() < 1e-9);
        }
    }

    #[test]
    fn reversed_interval_names_entry() {
        let text = r#"{"version":1,"persons":["Ann","Bea"],"options":[
            {"name":"bad","treatments":[
                {"success":80,"failure":50,"chance":{"interval":[0.9,0.2]}},
                {"success":80,"failure":50,"chance":"vacuous"}]}]}"#;
        let err = ScenarioFile::parse(text).unwrap().validate().unwrap_err();
        assert_eq!(err.exit_code(), 2);
        let msg = err.to_string();
        assert!(msg.contains("option 'bad'") && msg.contains("Ann") && msg.contains("0.9"), "{msg}");
    }

    #[test]
    fn explicit_states_form() {
        let text = r#"{"version":1,"persons":["Ann","Bea"],"options":[
            {"name":"explicit","states":[[80,50],[50,80]],"credal":["vacuous","vacuous"]}]}"#;
        let s = ScenarioFile::parse(text).unwrap().validate().unwrap();
        let v = peu_value(&s.options[0], &s.params);
        assert!((v - 104.5).abs() < 1e-9);
    }

    #[test]
    fn schema_errors() {
        assert!(matches!(ScenarioFile::parse("{"), Err(Error::Schema(_))));
        let wrong_version = r#"{"version":2,"persons":["A"],"options":[]}"#;
        assert!(ScenarioFile::parse(wrong_version).unwrap().validate().is_err());
        let unknown = r#"{"version":1,"persons":["A"],"options":[],"extra":1}"#;
        assert!(ScenarioFile::parse(unknown).is_err());
        let both = r#"{"version":1,"persons":["A"],"options":[{"name":"x",
            "treatments":[{"success":1,"failure":0,"chance":"vacuous"}],"states":[[1]],"credal":["vacuous"]}]}"#;
        let err = ScenarioFile::parse(both).unwrap().validate().unwrap_err();
        assert!(matches!(err, Error::Schema(_)));
        let bad_params = r#"{"version":1,"persons":["A"],"params":{"alpha":2,"beta":0,"gamma":0},
            "options":[{"name":"x","treatments":[{"success":1,"failure":0,"chance":"vacuous"}]}]}"#;
        assert!(ScenarioFile::parse(bad_params).unwrap().validate().is_err());
    }
}
