//! Test-signal descriptions for references, disturbances and noise.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum SignalSpec {
    Zero,
    Step {
        amplitude: f64,
        #[serde(default)]
        start_time: f64,
    },
    Sinusoid {
        amplitude: f64,
        frequency: f64,
    },
    Sum {
        components: Vec<SignalSpec>,
    },
}

impl SignalSpec {
    pub fn validate(&self) -> Result<()> {
        match self {
            SignalSpec::Zero | SignalSpec::Step { .. } => Ok(()),
            SignalSpec::Sinusoid { frequency, .. } => {
                if *frequency > 0.0 {
                    Ok(())
                } else {
                    Err(Error::InvalidParameter {
                        field: "frequency".into(),
                        reason: "sinusoid frequency must be positive".into(),
                    })
                }
            }
            SignalSpec::Sum { components } => {
                if components.is_empty() {
                    return Err(Error::InvalidParameter {
                        field: "components".into(),
                        reason: "sum needs at least one component".into(),
                    });
                }
                components.iter().try_for_each(SignalSpec::validate)
            }
        }
    }

    pub fn eval(&self, t: f64) -> f64 {
        match self {
            SignalSpec::Zero => 0.0,
            SignalSpec::Step {
                amplitude,
                start_time,
            } => {
                if t >= *start_time {
                    *amplitude
                } else {
                    0.0
                }
            }
            SignalSpec::Sinusoid {
                amplitude,
                frequency,
            } => amplitude * (frequency * t).sin(),
            SignalSpec::Sum { components } => components.iter().map(|c| c.eval(t)).sum(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn step_starts_at_start_time() {
        let s = SignalSpec::Step {
            amplitude: 2.0,
            start_time: 1.0,
        };
        assert_eq!(s.eval(0.5), 0.0);
        assert_eq!(s.eval(1.0), 2.0);
    }

    #[test]
    fn sum_adds_components() {
        let s = SignalSpec::Sum {
            components: vec![
                SignalSpec::Step {
                    amplitude: 1.0,
                    start_time: 0.0,
                },
                SignalSpec::Sinusoid {
                    amplitude: 0.5,
                    frequency: 2.0,
                },
            ],
        };
        let t = 0.7;
        assert!((s.eval(t) - (1.0 + 0.5 * (2.0 * t).sin())).abs() < 1e-15);
    }

    #[test]
    fn json_round_trip() {
        let s = SignalSpec::Sinusoid {
            amplitude: 0.5,
            frequency: 2.0,
        };
        let text = serde_json::to_string(&s).unwrap();
        assert_eq!(text, r#"{"kind":"sinusoid","amplitude":0.5,"frequency":2.0}"#);
        let back: SignalSpec = serde_json::from_str(&text).unwrap();
        assert_eq!(back, s);
    }

    #[test]
    fn empty_sum_rejected() {
        let s = SignalSpec::Sum { components: vec![] };
        assert!(s.validate().is_err());
    }
}
