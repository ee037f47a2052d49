//! Calendar helpers over UTC epoch seconds.

use std::fmt;
use std::str::FromStr;

use chrono::{DateTime, Datelike, Months, NaiveDate, NaiveDateTime, TimeZone, Utc};
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// UTC epoch seconds.
pub type Timestamp = i64;

/// A calendar month bucket.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct YearMonth {
    pub year: i32,
    pub month: u32,
}

impl YearMonth {
    pub fn new(year: i32, month: u32) -> Result<Self> {
        if !(1..=12).contains(&month) {
            return Err(Error::invalid(format!("month {month} out of range")));
        }
        Ok(YearMonth { year, month })
    }

    pub fn of(ts: Timestamp) -> Self {
        let dt = to_datetime(ts);
        YearMonth {
            year: dt.year(),
            month: dt.month(),
        }
    }

    pub fn succ(self) -> Self {
        if self.month == 12 {
            YearMonth {
                year: self.year + 1,
                month: 1,
            }
        } else {
            YearMonth {
                year: self.year,
                month: self.month + 1,
            }
        }
    }

    /// First second of the month.
    pub fn start(self) -> Timestamp {
        Utc.with_ymd_and_hms(self.year, self.month, 1, 0, 0, 0)
            .single()
            .expect("valid month start")
            .timestamp()
    }

    /// Inclusive range of months between two bounds.
    pub fn range(from: YearMonth, to: YearMonth) -> Vec<YearMonth> {
        let mut out = Vec::new();
        let mut cur = from;
        while cur <= to {
            out.push(cur);
            cur = cur.succ();
        }
        out
    }
}

impl fmt::Display for YearMonth {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:04}-{:02}", self.year, self.month)
    }
}

impl FromStr for YearMonth {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (y, m) = s
            .split_once('-')
            .ok_or_else(|| Error::invalid(format!("expected YYYY-MM, got {s:?}")))?;
        let year = y
            .parse()
            .map_err(|_| Error::invalid(format!("bad year in {s:?}")))?;
        let month = m
            .parse()
            .map_err(|_| Error::invalid(format!("bad month in {s:?}")))?;
        YearMonth::new(year, month)
    }
}

impl TryFrom<String> for YearMonth {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<YearMonth> for String {
    fn from(ym: YearMonth) -> String {
        ym.to_string()
    }
}

fn to_datetime(ts: Timestamp) -> DateTime<Utc> {
    Utc.timestamp_opt(ts, 0).single().expect("timestamp in chrono range")
}

/// Shift a timestamp by whole calendar months, clamping the day of month
/// (Jan 31 + 1 month = Feb 28/29).
pub fn add_months(ts: Timestamp, months: i32) -> Timestamp {
    let dt = to_datetime(ts);
    let shifted = if months >= 0 {
        dt.checked_add_months(Months::new(months as u32))
    } else {
        dt.checked_sub_months(Months::new(months.unsigned_abs()))
    };
    shifted.expect("month shift in range").timestamp()
}

/// Parse epoch seconds or an ISO-8601 timestamp (RFC 3339, or naive
/// `YYYY-MM-DDTHH:MM:SS` / `YYYY-MM-DD` read as UTC).
pub fn parse_timestamp(s: &str) -> Result<Timestamp> {
    let s = s.trim();
    if let Ok(v) = s.parse::<i64>() {
        return Ok(v);
    }
    if let Ok(dt) = DateTime::parse_from_rfc3339(s) {
        return Ok(dt.timestamp());
    }
    for fmt in ["%Y-%m-%dT%H:%M:%S", "%Y-%m-%d %H:%M:%S"] {
        if let Ok(dt) = NaiveDateTime::parse_from_str(s, fmt) {
            return Ok(dt.and_utc().timestamp());
        }
    }
    if let Ok(d) = NaiveDate::parse_from_str(s, "%Y-%m-%d") {
        return Ok(d.and_hms_opt(0, 0, 0).expect("midnight").and_utc().timestamp());
    }
    Err(Error::invalid(format!("unrecognized timestamp {s:?}")))
}
