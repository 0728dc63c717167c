use std::collections::BTreeMap;

use blinkforge::surveys::{
    score_panas, score_stai_state, Polarity, StaiRoster, SurveyResponse, PANAS_NEGATIVE, PANAS_POSITIVE,
};
use proptest::prelude::*;

fn response(panas: &[u8], stai: &[u8], roster: &StaiRoster) -> SurveyResponse {
    SurveyResponse {
        panas_items: PANAS_POSITIVE
            .iter()
            .chain(&PANAS_NEGATIVE)
            .zip(panas)
            .map(|(k, v)| (k.to_string(), *v))
            .collect(),
        stai_items: roster.items.iter().zip(stai).map(|(i, v)| (i.text.clone(), *v)).collect(),
    }
}

#[test]
fn stai_hand_examples() {
    let roster = StaiRoster::standard();
    let n = roster.items.len();
    let all = |v| response(&[3; 10], &vec![v; n], &roster);
    assert_eq!(score_stai_state(&all(1), &roster).unwrap(), 50);
    let pick = |pos: u8, neg: u8| -> Vec<u8> {
        roster
            .items
            .iter()
            .map(|i| if i.polarity == Polarity::Positive { pos } else { neg })
            .collect()
    };
    assert_eq!(score_stai_state(&response(&[3; 10], &pick(1, 4), &roster), &roster).unwrap(), 80);
    assert_eq!(score_stai_state(&response(&[3; 10], &pick(4, 1), &roster), &roster).unwrap(), 20);
}

#[test]
fn standard_roster_is_balanced() {
    let roster = StaiRoster::standard();
    let pos = roster.items.iter().filter(|i| i.polarity == Polarity::Positive).count();
    assert_eq!((pos, roster.items.len() - pos), (10, 10));
}

#[test]
fn missing_stai_item_is_rejected() {
    let roster = StaiRoster::standard();
    let mut r = response(&[3; 10], &[2; 20], &roster);
    r.stai_items = r.stai_items.into_iter().skip(1).collect::<BTreeMap<_, _>>();
    assert!(score_stai_state(&r, &roster).is_err());
}

fn answers() -> impl Strategy<Value = (Vec<u8>, Vec<u8>, usize, bool)> {
    (
        proptest::collection::vec(1u8..=5, 10),
        proptest::collection::vec(1u8..=4, 20),
        0usize..20,
        any::<bool>(),
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn stai_direction_and_range((panas, stai, item, up) in answers()) {
        let roster = StaiRoster::standard();
        let before = score_stai_state(&response(&panas, &stai, &roster), &roster).unwrap();
        prop_assert!((20..=80).contains(&before));
        let mut changed = stai.clone();
        let step: i8 = if up { 1 } else { -1 };
        let v = changed[item] as i8 + step;
        prop_assume!((1..=4).contains(&v));
        changed[item] = v as u8;
        let after = score_stai_state(&response(&panas, &changed, &roster), &roster).unwrap();
        let delta = after as i64 - before as i64;
        let sign = match roster.items[item].polarity {
            Polarity::Negative => step as i64,
            Polarity::Positive => -(step as i64),
        };
        prop_assert_eq!(delta, sign);
    }

    #[test]
    fn panas_subscales_are_independent((panas, stai, item, _) in answers(), v in 1u8..=5) {
        let roster = StaiRoster::standard();
        let a = score_panas(&response(&panas, &stai, &roster)).unwrap();
        let mut changed = panas.clone();
        changed[item % 10] = v;
        let b = score_panas(&response(&changed, &stai, &roster)).unwrap();
        prop_assert!((5..=25).contains(&a.positive_affect) && (5..=25).contains(&a.negative_affect));
        if item % 10 < 5 {
            prop_assert_eq!(a.negative_affect, b.negative_affect);
            prop_assert_eq!(b.positive_affect as i64 - a.positive_affect as i64, v as i64 - panas[item % 10] as i64);
        } else {
            prop_assert_eq!(a.positive_affect, b.positive_affect);
            prop_assert_eq!(b.negative_affect as i64 - a.negative_affect as i64, v as i64 - panas[item % 10] as i64);
        }
    }

    #[test]
    fn out_of_range_answers_rejected(panas in proptest::collection::vec(1u8..=5, 10), item in 0usize..20, bad in prop_oneof![Just(0u8), 5u8..=255]) {
        let roster = StaiRoster::standard();
        let mut stai = vec![2u8; 20];
        stai[item] = bad;
        prop_assert!(score_stai_state(&response(&panas, &stai, &roster), &roster).is_err());
        let mut p = panas.clone();
        p[item % 10] = if bad == 5 { 6 } else { bad };
        prop_assert!(score_panas(&response(&p, &[2; 20], &roster)).is_err());
    }
}
