//! Event counts over time with coreference uncertainty propagated through.
//!
//! Every document's clustering is resampled once per sample index; a
//! document counts for country `c` when some entity is uniquely affiliated
//! with `c` and acts as an attacker. Per-period sums over documents form the
//! posterior samples of the count series.

mod band;
mod predicate;
mod series;

pub use band::{posterior_band, EventBand};
pub use predicate::{doc_attack_indicator, entity_country_attack_match};
pub use series::{
    document_seed, event_count_series, exact_period_means, high_uncertainty_documents, EventAnalysis, EventQueryResult,
    FlaggedDocument,
};

use std::collections::BTreeSet;

use chrono::{Datelike, NaiveDate};
use serde::{Deserialize, Serialize};

use crate::coref::CorefDocument;
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Default number of corpus-wide clustering samples.
pub const DEFAULT_EVENT_SAMPLES: usize = 100;

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct MentionAttributes {
    pub countries: BTreeSet<String>,
    pub attack_agent: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct AnnotatedDocument<T> {
    pub doc_id: String,
    pub date: NaiveDate,
    pub mentions: Vec<MentionAttributes>,
    pub coref: CorefDocument<T>,
}

impl<T: Real> AnnotatedDocument<T> {
    pub fn new(
        doc_id: impl Into<String>,
        date: NaiveDate,
        mentions: Vec<MentionAttributes>,
        coref: CorefDocument<T>,
    ) -> Result<Self> {
        let doc_id = doc_id.into();
        if mentions.len() != coref.num_mentions() {
            return Err(Error::input(format!(
                "document {doc_id}: {} mention attributes but {} score rows",
                mentions.len(),
                coref.num_mentions()
            )));
        }
        Ok(Self { doc_id, date, mentions, coref })
    }
}

/// Calendar bucketing in UTC.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Period {
    Month,
    Quarter,
}

impl Period {
    /// First day of the period containing `date`.
    pub fn start(self, date: NaiveDate) -> NaiveDate {
        let month = match self {
            Period::Month => date.month(),
            Period::Quarter => (date.month0() / 3) * 3 + 1,
        };
        NaiveDate::from_ymd_opt(date.year(), month, 1).expect("first of month is valid")
    }
}

impl std::str::FromStr for Period {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "month" => Ok(Period::Month),
            "quarter" => Ok(Period::Quarter),
            other => Err(Error::param(format!("unknown period {other:?}"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn period_starts() {
        let d = NaiveDate::from_ymd_opt(1995, 8, 17).unwrap();
        assert_eq!(Period::Month.start(d), NaiveDate::from_ymd_opt(1995, 8, 1).unwrap());
        assert_eq!(Period::Quarter.start(d), NaiveDate::from_ymd_opt(1995, 7, 1).unwrap());
        let d = NaiveDate::from_ymd_opt(2001, 12, 31).unwrap();
        assert_eq!(Period::Quarter.start(d), NaiveDate::from_ymd_opt(2001, 10, 1).unwrap());
        assert_eq!("quarter".parse::<Period>().unwrap(), Period::Quarter);
        assert!("week".parse::<Period>().is_err());
    }

    #[test]
    fn mention_count_must_match() {
        let coref = CorefDocument::<f64>::new(vec![vec![0.0]]).unwrap();
        let date = NaiveDate::from_ymd_opt(2000, 1, 1).unwrap();
        assert!(AnnotatedDocument::new("d", date, vec![], coref.clone()).is_err());
        assert!(AnnotatedDocument::new("d", date, vec![MentionAttributes::default()], coref).is_ok());
    }
}
