use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use chrono::{Datelike, Days, NaiveDate, Weekday};
use serde::{Deserialize, Serialize};

use crate::regression::RegressionError;
use crate::scalar::Scalar;
use crate::simulation::StepHistory;

/// One regressor, excluding the intercept.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum Feature {
    /// Steps taken this many calendar days before the target date.
    StepLag(u16),
    IsMonday,
    IsFriday,
    /// Motivation reported this many sessions ago.
    MotivationLag(u16),
}

impl fmt::Display for Feature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Feature::StepLag(k) => write!(f, "lag{k}"),
            Feature::IsMonday => f.write_str("is_monday"),
            Feature::IsFriday => f.write_str("is_friday"),
            Feature::MotivationLag(k) => write!(f, "m_lag{k}"),
        }
    }
}

impl FromStr for Feature {
    type Err = RegressionError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let lag = |digits: &str| -> Result<u16, RegressionError> {
            match digits.parse::<u16>() {
                Ok(k) if k >= 1 => Ok(k),
                _ => Err(RegressionError::Shape(format!("invalid feature name `{s}`"))),
            }
        };
        match s {
            "is_monday" => Ok(Feature::IsMonday),
            "is_friday" => Ok(Feature::IsFriday),
            _ if s.starts_with("m_lag") => lag(&s[5..]).map(Feature::MotivationLag),
            _ if s.starts_with("lag") => lag(&s[3..]).map(Feature::StepLag),
            _ => Err(RegressionError::Shape(format!("invalid feature name `{s}`"))),
        }
    }
}

impl TryFrom<String> for Feature {
    type Error = RegressionError;

    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

impl From<Feature> for String {
    fn from(f: Feature) -> Self {
        f.to_string()
    }
}

/// Ordered regressors of a model; the intercept, when present, is column 0.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FeatureSpec {
    pub names: Vec<Feature>,
    pub includes_intercept: bool,
}

impl FeatureSpec {
    pub fn new(names: Vec<Feature>, includes_intercept: bool) -> Result<Self, RegressionError> {
        let spec = Self { names, includes_intercept };
        spec.validate()?;
        Ok(spec)
    }

    /// Steps 1, 2, 3, 4, 6 and 7 days prior plus Monday and Friday indicators.
    pub fn step_default() -> Self {
        use Feature::*;
        Self {
            names: vec![
                StepLag(1),
                StepLag(2),
                StepLag(3),
                StepLag(4),
                StepLag(6),
                StepLag(7),
                IsMonday,
                IsFriday,
            ],
            includes_intercept: true,
        }
    }

    /// The three most recent motivation reports.
    pub fn motivation_default() -> Self {
        use Feature::*;
        Self { names: vec![MotivationLag(1), MotivationLag(2), MotivationLag(3)], includes_intercept: true }
    }

    pub fn validate(&self) -> Result<(), RegressionError> {
        let mut seen = HashSet::new();
        for f in &self.names {
            if !seen.insert(f) {
                return Err(RegressionError::Shape(format!("duplicate feature `{f}`")));
            }
        }
        if self.names.is_empty() && !self.includes_intercept {
            return Err(RegressionError::Shape("feature spec has no columns".into()));
        }
        Ok(())
    }

    /// Number of design columns, intercept included.
    pub fn width(&self) -> usize {
        self.names.len() + usize::from(self.includes_intercept)
    }

    pub fn column_names(&self) -> Vec<String> {
        let mut out = Vec::with_capacity(self.width());
        if self.includes_intercept {
            out.push("intercept".to_string());
        }
        out.extend(self.names.iter().map(Feature::to_string));
        out
    }

    pub fn without(&self, feature: Feature) -> Self {
        Self {
            names: self.names.iter().copied().filter(|&f| f != feature).collect(),
            includes_intercept: self.includes_intercept,
        }
    }

    /// Feature vector for `target_date` from a calendar-indexed step history
    /// and a session-indexed motivation series (oldest first).
    pub fn row<T: Scalar>(
        &self,
        steps: &StepHistory,
        motivations: &[f64],
        target_date: NaiveDate,
    ) -> Result<Vec<T>, RegressionError> {
        let mut out = Vec::with_capacity(self.width());
        if self.includes_intercept {
            out.push(T::one());
        }
        for &feature in &self.names {
            let value = match feature {
                Feature::StepLag(k) => {
                    let day = target_date
                        .checked_sub_days(Days::new(u64::from(k)))
                        .ok_or_else(|| RegressionError::InsufficientHistory(format!("{feature} before calendar start")))?;
                    *steps.get(&day).ok_or_else(|| {
                        RegressionError::InsufficientHistory(format!("no steps on {day} for {feature}"))
                    })?
                }
                Feature::IsMonday => f64::from(u8::from(target_date.weekday() == Weekday::Mon)),
                Feature::IsFriday => f64::from(u8::from(target_date.weekday() == Weekday::Fri)),
                Feature::MotivationLag(k) => {
                    let k = usize::from(k);
                    if motivations.len() < k {
                        return Err(RegressionError::InsufficientHistory(format!(
                            "{feature} needs {k} reports, have {}",
                            motivations.len()
                        )));
                    }
                    motivations[motivations.len() - k]
                }
            };
            out.push(T::lit(value));
        }
        Ok(out)
    }
}

/// Default step feature vector: `(1, lag1, lag2, lag3, lag4, lag6, lag7, is_monday, is_friday)`.
pub fn build_step_features<T: Scalar>(
    history: &StepHistory,
    target_date: NaiveDate,
) -> Result<Vec<T>, RegressionError> {
    FeatureSpec::step_default().row(history, &[], target_date)
}

/// Default motivation feature vector `(1, m_lag1, m_lag2, m_lag3)`, most recent first.
pub fn build_motivation_features<T: Scalar>(history: &[f64]) -> Result<Vec<T>, RegressionError> {
    FeatureSpec::motivation_default().row(&StepHistory::new(), history, NaiveDate::MIN)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn constant_history(end: NaiveDate, days: u64, value: f64) -> StepHistory {
        (1..=days).map(|k| (end - Days::new(k), value)).collect()
    }

    #[test]
    fn constant_history_wednesday() {
        let wed = NaiveDate::from_ymd_opt(2024, 1, 10).unwrap();
        assert_eq!(wed.weekday(), Weekday::Wed);
        let row: Vec<f64> = build_step_features(&constant_history(wed, 7, 5000.0), wed).unwrap();
        assert_eq!(row, vec![1.0, 5000.0, 5000.0, 5000.0, 5000.0, 5000.0, 5000.0, 0.0, 0.0]);
    }

    #[test]
    fn weekday_indicators() {
        let mon = NaiveDate::from_ymd_opt(2024, 1, 8).unwrap();
        let row: Vec<f64> = build_step_features(&constant_history(mon, 7, 1.0), mon).unwrap();
        assert_eq!(&row[7..], &[1.0, 0.0]);
        let fri = NaiveDate::from_ymd_opt(2024, 1, 12).unwrap();
        let row: Vec<f64> = build_step_features(&constant_history(fri, 7, 1.0), fri).unwrap();
        assert_eq!(&row[7..], &[0.0, 1.0]);
    }

    #[test]
    fn six_days_is_not_enough() {
        let d = NaiveDate::from_ymd_opt(2024, 3, 1).unwrap();
        let err = build_step_features::<f64>(&constant_history(d, 6, 1.0), d);
        assert!(matches!(err, Err(RegressionError::InsufficientHistory(_))));
    }

    #[test]
    fn lag5_is_not_required() {
        let d = NaiveDate::from_ymd_opt(2024, 3, 1).unwrap();
        let mut h = constant_history(d, 7, 1.0);
        h.remove(&(d - Days::new(5)));
        assert!(build_step_features::<f64>(&h, d).is_ok());
    }

    #[test]
    fn motivation_lags_most_recent_first() {
        let row: Vec<f64> = build_motivation_features(&[5.0, 3.0, 4.0, 2.0]).unwrap();
        assert_eq!(row, vec![1.0, 2.0, 4.0, 3.0]);
        assert!(build_motivation_features::<f64>(&[1.0, 2.0, 3.0]).is_ok());
        assert!(matches!(
            build_motivation_features::<f64>(&[1.0, 2.0]),
            Err(RegressionError::InsufficientHistory(_))
        ));
    }

    #[test]
    fn names_round_trip() {
        for f in FeatureSpec::step_default().names.into_iter().chain(FeatureSpec::motivation_default().names) {
            assert_eq!(f.to_string().parse::<Feature>().unwrap(), f);
        }
        assert!("lag0".parse::<Feature>().is_err());
        assert!("steps".parse::<Feature>().is_err());
        assert!(FeatureSpec::new(vec![Feature::StepLag(1), Feature::StepLag(1)], true).is_err());
        assert_eq!(FeatureSpec::step_default().width(), 9);
    }
}
