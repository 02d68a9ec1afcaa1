//! JSON file formats for game inputs and reports, plus the fixed-precision
//! number formatting shared by every CLI output.
//!
//! File structs mirror the on-disk schema exactly and are converted to core
//! types through fallible accessors; all files are f64.

use serde::{Deserialize, Serialize};

use crate::commander::CommanderInstance;
use crate::error::{Error, Result};
use crate::game::{BattlefieldSet, BernoulliEndowment, GameSpec, OpponentParams};
use crate::num::{close, ge, le};
use crate::oracle::VerificationReport;
use crate::strategy::{Component, MixedStrategy, Segment};

/// Budget fields accept a number or the string "inf"; infinite values
/// serialize back to "inf" because JSON has no infinity literal.
mod budget {
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
        if v.is_infinite() && *v > 0.0 {
            s.serialize_str("inf")
        } else {
            s.serialize_f64(*v)
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<f64, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(v) => Ok(v),
            Raw::Text(t) if t == "inf" => Ok(f64::INFINITY),
            Raw::Text(t) => Err(de::Error::custom(format!(
                "budget must be a number or \"inf\", got \"{t}\""
            ))),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EndowmentFile {
    #[serde(rename = "A1")]
    pub a1: f64,
    #[serde(rename = "A2")]
    pub a2: f64,
    pub p: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OpponentFile {
    #[serde(rename = "B", with = "budget")]
    pub b: f64,
    pub c: f64,
}

/// On-disk description of a single-front game.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GameFile {
    pub endowment: EndowmentFile,
    pub opponent: OpponentFile,
    pub battlefields: Vec<f64>,
}

impl GameFile {
    /// Checks the allocator's side alone; sweeps that substitute opponent
    /// parameters per row call this and validate the opponent themselves.
    pub fn validate_endowment(&self) -> Result<()> {
        let e = &self.endowment;
        for (name, v) in [("A1", e.a1), ("A2", e.a2)] {
            if !v.is_finite() {
                return Err(Error::NonfiniteValue { name, value: v });
            }
            if v < 0.0 {
                return Err(Error::NegativeValue { name, value: v });
            }
        }
        if !e.p.is_finite() || e.p < 0.0 || e.p > 1.0 {
            return Err(Error::ProbabilityRange { value: e.p });
        }
        self.battlefields()?;
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        self.validate_endowment()?;
        self.opponent()?;
        Ok(())
    }

    /// True when the endowment draw carries no private information: the
    /// game collapses to complete information at the mean.
    pub fn is_degenerate(&self) -> bool {
        let e = &self.endowment;
        le(e.p, 0.0) || ge(e.p, 1.0) || close(e.a1, e.a2)
    }

    pub fn mean_endowment(&self) -> f64 {
        let e = &self.endowment;
        if ge(e.p, 1.0) {
            e.a1
        } else if le(e.p, 0.0) {
            e.a2
        } else {
            e.p * e.a1 + (1.0 - e.p) * e.a2
        }
    }

    pub fn battlefields(&self) -> Result<BattlefieldSet<f64>> {
        BattlefieldSet::new(self.battlefields.clone())
    }

    pub fn endowment(&self) -> Result<BernoulliEndowment<f64>> {
        let e = &self.endowment;
        BernoulliEndowment::new(e.a1, e.a2, e.p)
    }

    pub fn opponent(&self) -> Result<OpponentParams<f64>> {
        OpponentParams::new(self.opponent.b, self.opponent.c)
    }

    /// Full core spec; fails on degenerate endowments, which have no
    /// two-point representation.
    pub fn to_game_spec(&self) -> Result<GameSpec<f64>> {
        Ok(GameSpec::new(
            self.battlefields()?,
            self.endowment()?,
            self.opponent()?,
        ))
    }
}

/// On-disk description of a two-front commander instance.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CommanderFile {
    pub c: f64,
    pub c1: f64,
    pub c2: f64,
    pub phi1: f64,
    pub phi2: f64,
    #[serde(rename = "A", with = "budget")]
    pub a: f64,
    #[serde(rename = "B1", with = "budget")]
    pub b1: f64,
    #[serde(rename = "B2", with = "budget")]
    pub b2: f64,
}

impl CommanderFile {
    pub fn to_instance(&self) -> Result<CommanderInstance<f64>> {
        CommanderInstance::new(
            self.c,
            (self.c1, self.c2),
            (self.phi1, self.phi2),
            self.a,
            (self.b1, self.b2),
        )
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ComponentFile {
    Atom { w: f64, atom: f64 },
    Uniform { w: f64, lo: f64, hi: f64 },
}

/// On-disk mixed strategy: a weighted list of atoms and uniform pieces.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StrategyFile {
    pub components: Vec<ComponentFile>,
}

impl StrategyFile {
    pub fn from_strategy(s: &MixedStrategy<f64>) -> Self {
        let components = s
            .components()
            .iter()
            .map(|c| match c.segment {
                Segment::Atom(a) => ComponentFile::Atom {
                    w: c.weight,
                    atom: a,
                },
                Segment::Uniform(lo, hi) => ComponentFile::Uniform {
                    w: c.weight,
                    lo,
                    hi,
                },
            })
            .collect();
        Self { components }
    }

    pub fn to_strategy(&self) -> Result<MixedStrategy<f64>> {
        let components = self
            .components
            .iter()
            .map(|c| match *c {
                ComponentFile::Atom { w, atom } => Component {
                    weight: w,
                    segment: Segment::Atom(atom),
                },
                ComponentFile::Uniform { w, lo, hi } => Component {
                    weight: w,
                    segment: Segment::Uniform(lo, hi),
                },
            })
            .collect();
        MixedStrategy::new(components)
    }
}

/// Serialized form of a verification report.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ReportFile {
    pub value_a: f64,
    pub value_b: f64,
    pub exploitability_a_high: f64,
    pub exploitability_a_low: f64,
    pub exploitability_b: f64,
    pub epsilon: f64,
    pub grid_points: usize,
}

impl From<VerificationReport<f64>> for ReportFile {
    fn from(r: VerificationReport<f64>) -> Self {
        Self {
            value_a: r.value_a,
            value_b: r.value_b,
            exploitability_a_high: r.exploitability_a_high,
            exploitability_a_low: r.exploitability_a_low,
            exploitability_b: r.exploitability_b,
            epsilon: r.epsilon,
            grid_points: r.grid_points,
        }
    }
}

/// Renders with at most 9 significant digits, plain decimal notation in
/// [1e-4, 1e9), scientific outside, trailing zeros trimmed. Stable across
/// runs for identical inputs.
pub fn format_sig(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let sci = format!("{:.8e}", x);
    let (mantissa, exp_str) = sci.split_once('e').expect("exponent marker");
    let exp: i32 = exp_str.parse().expect("integer exponent");
    if (-4..9).contains(&exp) {
        let decimals = (8 - exp).max(0) as usize;
        let fixed = format!("{x:.decimals$}");
        if fixed.contains('.') {
            fixed.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            fixed
        }
    } else {
        let mantissa = if mantissa.contains('.') {
            mantissa.trim_end_matches('0').trim_end_matches('.')
        } else {
            mantissa
        };
        format!("{mantissa}e{exp}")
    }
}

/// Rounds to the precision format_sig prints, so JSON numbers and CSV cells
/// agree digit for digit.
pub fn round_sig(x: f64) -> f64 {
    format_sig(x).parse().expect("format_sig output parses back")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::commander::Setting;

    #[test]
    fn game_file_round_trips_infinite_budget() {
        let text = r#"{
            "endowment": {"A1": 3.0, "A2": 0.2, "p": 0.5},
            "opponent": {"B": "inf", "c": 0.125},
            "battlefields": [1.0]
        }"#;
        let file: GameFile = serde_json::from_str(text).unwrap();
        assert_eq!(file.opponent.b, f64::INFINITY);
        file.validate().unwrap();
        assert!(!file.is_degenerate());
        assert_eq!(file.mean_endowment(), 1.6);
        let back = serde_json::to_value(&file).unwrap();
        assert_eq!(back["opponent"]["B"], serde_json::json!("inf"));

        let spec = file.to_game_spec().unwrap();
        assert_eq!(spec.total_value(), 1.0);
        assert!(spec.opponent.has_cost());
    }

    #[test]
    fn game_file_rejects_bad_budget_string() {
        let text = r#"{
            "endowment": {"A1": 1.0, "A2": 0.5, "p": 0.5},
            "opponent": {"B": "lots", "c": 0.0},
            "battlefields": [1.0]
        }"#;
        assert!(serde_json::from_str::<GameFile>(text).is_err());
    }

    #[test]
    fn game_file_degenerate_routing() {
        let mut file: GameFile = serde_json::from_str(
            r#"{"endowment": {"A1": 2.0, "A2": 1.0, "p": 1.0},
                "opponent": {"B": 1.0, "c": 0.0},
                "battlefields": [1.0]}"#,
        )
        .unwrap();
        assert!(file.is_degenerate());
        assert_eq!(file.mean_endowment(), 2.0);
        assert!(file.to_game_spec().is_err());

        file.endowment.p = 0.0;
        assert!(file.is_degenerate());
        assert_eq!(file.mean_endowment(), 1.0);

        file.endowment = EndowmentFile {
            a1: 1.5,
            a2: 1.5,
            p: 0.5,
        };
        assert!(file.is_degenerate());
        assert_eq!(file.mean_endowment(), 1.5);
    }

    #[test]
    fn game_file_validates_probability() {
        let file: GameFile = serde_json::from_str(
            r#"{"endowment": {"A1": 2.0, "A2": 1.0, "p": 1.5},
                "opponent": {"B": 1.0, "c": 0.0},
                "battlefields": [1.0]}"#,
        )
        .unwrap();
        assert!(matches!(
            file.validate(),
            Err(Error::ProbabilityRange { .. })
        ));
    }

    #[test]
    fn commander_file_converts() {
        let file: CommanderFile = serde_json::from_str(
            r#"{"c": 4.0, "c1": 1.0, "c2": 2.0, "phi1": 1.0, "phi2": 1.0,
                "A": "inf", "B1": "inf", "B2": "inf"}"#,
        )
        .unwrap();
        let inst = file.to_instance().unwrap();
        assert_eq!(inst.setting(), Setting::PerUnit);
    }

    #[test]
    fn strategy_file_round_trips() {
        let s = MixedStrategy::mix(&[
            (0.25, &MixedStrategy::atom(0.0).unwrap()),
            (0.75, &MixedStrategy::uniform(0.0, 2.0).unwrap()),
        ])
        .unwrap();
        let file = StrategyFile::from_strategy(&s);
        let text = serde_json::to_string(&file).unwrap();
        let parsed: StrategyFile = serde_json::from_str(&text).unwrap();
        let back = parsed.to_strategy().unwrap();
        assert_eq!(back, s);
    }

    #[test]
    fn strategy_file_rejects_bad_weights() {
        let file: StrategyFile = serde_json::from_str(
            r#"{"components": [{"w": 0.5, "atom": 0.0}, {"w": 0.2, "lo": 0.0, "hi": 1.0}]}"#,
        )
        .unwrap();
        assert!(file.to_strategy().is_err());
    }

    #[test]
    fn formats_nine_significant_digits() {
        assert_eq!(format_sig(0.5277777777777778), "0.527777778");
        assert_eq!(format_sig(4.0), "4");
        assert_eq!(format_sig(0.0), "0");
        assert_eq!(format_sig(-0.09375), "-0.09375");
        assert_eq!(format_sig(123456789.0), "123456789");
        assert_eq!(format_sig(1234567891.0), "1.23456789e9");
        assert_eq!(format_sig(0.000123456789), "0.000123456789");
        assert_eq!(format_sig(1e-5), "1e-5");
        assert_eq!(format_sig(f64::INFINITY), "inf");
        assert_eq!(format_sig(0.9999999996), "1");
    }

    #[test]
    fn rounding_matches_formatting() {
        for x in [0.5277777777777778, 1.0 / 3.0, 2.0f64.sqrt(), 1e-7, 3.75] {
            let r = round_sig(x);
            assert_eq!(format_sig(r), format_sig(x));
            assert!(((r - x) / x).abs() < 1e-8);
        }
    }
}
