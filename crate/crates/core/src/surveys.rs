//! PANAS affect and STAI state-anxiety scoring.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const PANAS_POSITIVE: [&str; 5] = ["Alert", "Inspired", "Determined", "Attentive", "Active"];
pub const PANAS_NEGATIVE: [&str; 5] = ["Upset", "Hostile", "Ashamed", "Nervous", "Afraid"];

const PANAS_RANGE: (u8, u8) = (1, 5);
const STAI_RANGE: (u8, u8) = (1, 4);

/// Direction an STAI item is worded in. Positive (calm-worded) items are
/// reverse-scored.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Polarity {
    Positive,
    Negative,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StaiItem {
    pub text: String,
    pub polarity: Polarity,
}

/// The questionnaire items an STAI score is summed over.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StaiRoster {
    pub items: Vec<StaiItem>,
}

const STAI_COMMON: [(&str, Polarity); 19] = [
    ("I feel calm", Polarity::Positive),
    ("I feel secure", Polarity::Positive),
    ("I am tense", Polarity::Negative),
    ("I feel strained", Polarity::Negative),
    ("I feel at ease", Polarity::Positive),
    ("I feel upset", Polarity::Negative),
    ("I am presently worrying over possible misfortunes", Polarity::Negative),
    ("I feel satisfied", Polarity::Positive),
    ("I feel frightened", Polarity::Negative),
    ("I feel comfortable", Polarity::Positive),
    ("I feel self-confident", Polarity::Positive),
    ("I feel nervous", Polarity::Negative),
    ("I am jittery", Polarity::Negative),
    ("I feel indecisive", Polarity::Negative),
    ("I am relaxed", Polarity::Positive),
    ("I feel content", Polarity::Positive),
    ("I am worried", Polarity::Negative),
    ("I feel confused", Polarity::Negative),
    ("I feel steady", Polarity::Positive),
];

impl StaiRoster {
    /// The full 20-item state form, scored 20 to 80.
    pub fn standard() -> Self {
        let mut items = Self::from_pairs(&STAI_COMMON).items;
        items.push(StaiItem {
            text: "I feel pleasant".into(),
            polarity: Polarity::Positive,
        });
        Self { items }
    }

    /// The standard form without "I feel pleasant", scored 19 to 76.
    pub fn nineteen_item() -> Self {
        log::warn!(
            "the 19-item STAI roster omits one standard item; totals range 19-76, not 20-80"
        );
        Self::from_pairs(&STAI_COMMON)
    }

    fn from_pairs(pairs: &[(&str, Polarity)]) -> Self {
        Self {
            items: pairs
                .iter()
                .map(|(t, p)| StaiItem {
                    text: t.to_string(),
                    polarity: *p,
                })
                .collect(),
        }
    }

    /// Lowest and highest possible totals.
    pub fn range(&self) -> (u32, u32) {
        let n = self.items.len() as u32;
        (n * STAI_RANGE.0 as u32, n * STAI_RANGE.1 as u32)
    }

    fn contains(&self, item: &str) -> bool {
        self.items.iter().any(|i| key(&i.text) == key(item))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Stage {
    Baseline,
    #[serde(rename = "CPT")]
    Cpt,
    Recovery,
}

impl Stage {
    pub fn as_str(self) -> &'static str {
        match self {
            Stage::Baseline => "Baseline",
            Stage::Cpt => "CPT",
            Stage::Recovery => "Recovery",
        }
    }
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Stage {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "baseline" => Ok(Stage::Baseline),
            "cpt" => Ok(Stage::Cpt),
            "recovery" => Ok(Stage::Recovery),
            other => Err(Error::InvalidResponse(format!(
                "stage must be Baseline, CPT, or Recovery, got `{other}`"
            ))),
        }
    }
}

/// Item keys compare case-insensitively with surrounding space ignored.
fn key(item: &str) -> String {
    item.trim().to_lowercase()
}

/// One participant's answers at one stage.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurveyResponse {
    pub panas_items: BTreeMap<String, u8>,
    pub stai_items: BTreeMap<String, u8>,
}

impl SurveyResponse {
    /// Sorts `(item, value)` pairs into PANAS and STAI answers. Items that
    /// are neither PANAS adjectives nor on `roster`, and repeated items, are
    /// rejected.
    pub fn from_items<'a>(items: impl IntoIterator<Item = (&'a str, u8)>, roster: &StaiRoster) -> Result<Self> {
        let mut resp = Self::default();
        for (item, value) in items {
            let k = key(item);
            let is_panas = PANAS_POSITIVE.iter().chain(&PANAS_NEGATIVE).any(|p| key(p) == k);
            let target = if is_panas {
                &mut resp.panas_items
            } else if roster.contains(item) {
                &mut resp.stai_items
            } else {
                return Err(Error::InvalidResponse(format!("unknown survey item `{item}`")));
            };
            if target.insert(k, value).is_some() {
                return Err(Error::InvalidResponse(format!("item `{item}` answered twice")));
            }
        }
        Ok(resp)
    }
}

fn lookup(map: &BTreeMap<String, u8>, item: &str, range: (u8, u8)) -> Result<u32> {
    let v = map
        .iter()
        .find(|(k, _)| key(k) == key(item))
        .map(|(_, v)| *v)
        .ok_or_else(|| Error::InvalidResponse(format!("missing item `{item}`")))?;
    if !(range.0..=range.1).contains(&v) {
        return Err(Error::InvalidResponse(format!(
            "item `{item}` is {v}, outside {}..={}",
            range.0, range.1
        )));
    }
    Ok(v as u32)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PanasScore {
    pub positive_affect: u32,
    pub negative_affect: u32,
}

/// Positive and negative affect sums, each 5 to 25.
pub fn score_panas(resp: &SurveyResponse) -> Result<PanasScore> {
    let sum = |items: &[&str]| -> Result<u32> {
        items
            .iter()
            .map(|i| lookup(&resp.panas_items, i, PANAS_RANGE))
            .sum()
    };
    Ok(PanasScore {
        positive_affect: sum(&PANAS_POSITIVE)?,
        negative_affect: sum(&PANAS_NEGATIVE)?,
    })
}

/// State-anxiety total over `roster`, reverse-scoring positive items as
/// `5 - value`.
pub fn score_stai_state(resp: &SurveyResponse, roster: &StaiRoster) -> Result<u32> {
    roster
        .items
        .iter()
        .map(|item| {
            let v = lookup(&resp.stai_items, &item.text, STAI_RANGE)?;
            Ok(match item.polarity {
                Polarity::Negative => v,
                Polarity::Positive => 5 - v,
            })
        })
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn panas(f: impl Fn(&str) -> u8) -> SurveyResponse {
        SurveyResponse {
            panas_items: PANAS_POSITIVE
                .iter()
                .chain(&PANAS_NEGATIVE)
                .map(|i| (i.to_string(), f(i)))
                .collect(),
            stai_items: BTreeMap::new(),
        }
    }

    fn stai(roster: &StaiRoster, pos: u8, neg: u8) -> SurveyResponse {
        SurveyResponse {
            panas_items: BTreeMap::new(),
            stai_items: roster
                .items
                .iter()
                .map(|i| {
                    let v = if i.polarity == Polarity::Positive { pos } else { neg };
                    (i.text.clone(), v)
                })
                .collect(),
        }
    }

    #[test]
    fn panas_extremes() {
        let s = score_panas(&panas(|_| 1)).unwrap();
        assert_eq!((s.positive_affect, s.negative_affect), (5, 5));
        let s = score_panas(&panas(|_| 5)).unwrap();
        assert_eq!((s.positive_affect, s.negative_affect), (25, 25));
    }

    #[test]
    fn panas_hand_sum() {
        let r = panas(|i| match i {
            "Alert" => 3,
            "Inspired" => 2,
            "Determined" => 4,
            "Attentive" => 3,
            "Active" => 1,
            _ => 2,
        });
        let s = score_panas(&r).unwrap();
        assert_eq!((s.positive_affect, s.negative_affect), (13, 10));
    }

    #[test]
    fn panas_rejects_out_of_range_and_missing() {
        assert!(matches!(score_panas(&panas(|_| 6)), Err(Error::InvalidResponse(_))));
        let mut r = panas(|_| 3);
        r.panas_items.remove("Afraid");
        assert!(score_panas(&r).is_err());
    }

    #[test]
    fn stai_standard_extremes() {
        let roster = StaiRoster::standard();
        assert_eq!(roster.items.len(), 20);
        assert_eq!(score_stai_state(&stai(&roster, 1, 1), &roster).unwrap(), 50);
        assert_eq!(score_stai_state(&stai(&roster, 1, 4), &roster).unwrap(), 80);
        assert_eq!(score_stai_state(&stai(&roster, 4, 1), &roster).unwrap(), 20);
        assert_eq!(roster.range(), (20, 80));
    }

    #[test]
    fn nineteen_item_range() {
        let roster = StaiRoster::nineteen_item();
        assert_eq!(roster.items.len(), 19);
        assert_eq!(roster.range(), (19, 76));
        assert_eq!(score_stai_state(&stai(&roster, 4, 1), &roster).unwrap(), 19);
        assert_eq!(score_stai_state(&stai(&roster, 1, 4), &roster).unwrap(), 76);
    }

    #[test]
    fn stai_rejects_out_of_range() {
        let roster = StaiRoster::standard();
        assert!(score_stai_state(&stai(&roster, 5, 1), &roster).is_err());
        assert!(score_stai_state(&stai(&roster, 1, 0), &roster).is_err());
    }

    #[test]
    fn from_items_sorts_and_validates() {
        let roster = StaiRoster::standard();
        let r = SurveyResponse::from_items([("alert", 3), ("I am tense", 2)], &roster).unwrap();
        assert_eq!(r.panas_items.len(), 1);
        assert_eq!(r.stai_items.len(), 1);
        assert!(SurveyResponse::from_items([("Sleepy", 3)], &roster).is_err());
        assert!(SurveyResponse::from_items([("Alert", 3), ("Alert", 4)], &roster).is_err());
    }

    #[test]
    fn stage_parsing() {
        assert_eq!("cpt".parse::<Stage>().unwrap(), Stage::Cpt);
        assert_eq!(Stage::Recovery.to_string(), "Recovery");
        assert!("Lunch".parse::<Stage>().is_err());
    }
}
