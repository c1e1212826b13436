//! `index,timestamp,value` series files.

use std::fmt::Write;

use super::DEFAULT_INTERVAL_SECONDS;
use crate::error::{Error, Result};

pub const SERIES_HEADER: &str = "index,timestamp,value";

/// Parsed contents of a series CSV, before it is typed as raw or scaled.
#[derive(Debug, Clone, PartialEq)]
pub struct SeriesTable {
    pub start_time: u64,
    /// Inferred from the first two timestamps; the default interval for a single row.
    pub interval_seconds: u64,
    pub values: Vec<f64>,
}

pub fn read_series_csv(text: &str) -> Result<SeriesTable> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, header)) if header.trim_end_matches('\r') == SERIES_HEADER => {}
        _ => return Err(Error::BadHeader),
    }
    let mut timestamps = Vec::new();
    let mut values = Vec::new();
    for (i, line) in lines {
        let line_no = i + 1;
        let line = line.trim_end_matches('\r');
        if line.is_empty() {
            continue;
        }
        let bad = |reason: &str| Error::BadRow {
            line: line_no,
            reason: reason.to_string(),
        };
        let mut fields = line.split(',');
        let (Some(index), Some(ts), Some(value), None) =
            (fields.next(), fields.next(), fields.next(), fields.next())
        else {
            return Err(bad("expected three fields"));
        };
        let index: usize = index.trim().parse().map_err(|_| bad("bad index"))?;
        let ts: u64 = ts.trim().parse().map_err(|_| bad("bad timestamp"))?;
        let value: f64 = value.trim().parse().map_err(|_| bad("bad value"))?;
        if index != values.len() {
            return Err(Error::NonContiguousSeries(line_no));
        }
        timestamps.push(ts);
        values.push(value);
    }
    let start_time = timestamps.first().copied().unwrap_or(0);
    let interval_seconds = match timestamps.as_slice() {
        [a, b, ..] if b > a => b - a,
        [_, _, ..] => return Err(Error::NonContiguousSeries(3)),
        _ => DEFAULT_INTERVAL_SECONDS,
    };
    for (k, ts) in timestamps.iter().enumerate() {
        if *ts != start_time + k as u64 * interval_seconds {
            return Err(Error::NonContiguousSeries(k + 2));
        }
    }
    Ok(SeriesTable {
        start_time,
        interval_seconds,
        values,
    })
}

/// Values are written in shortest round-trip form, so reading back is exact.
pub fn write_series_csv(start_time: u64, interval_seconds: u64, values: &[f64]) -> String {
    let mut out = String::with_capacity(16 * (values.len() + 1));
    out.push_str(SERIES_HEADER);
    out.push('\n');
    for (k, v) in values.iter().enumerate() {
        let ts = start_time + k as u64 * interval_seconds;
        writeln!(out, "{k},{ts},{v}").unwrap();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn reads_a_single_row() {
        let t = read_series_csv("index,timestamp,value\n0,0,0.5\n").unwrap();
        assert_eq!(t.values, vec![0.5]);
        assert_eq!(t.interval_seconds, DEFAULT_INTERVAL_SECONDS);
    }

    #[test]
    fn rejects_bad_header() {
        assert!(matches!(
            read_series_csv("a,b\n0,1\n"),
            Err(Error::BadHeader)
        ));
        assert!(matches!(read_series_csv(""), Err(Error::BadHeader)));
    }

    #[test]
    fn rejects_gaps_in_index() {
        let err = read_series_csv("index,timestamp,value\n0,0,1\n2,1200,1\n").unwrap_err();
        assert!(err.to_string().starts_with("non-contiguous series"));
    }

    #[test]
    fn rejects_irregular_timestamps() {
        let text = "index,timestamp,value\n0,0,1\n1,600,1\n2,1300,1\n";
        assert!(matches!(
            read_series_csv(text),
            Err(Error::NonContiguousSeries(4))
        ));
    }

    #[test]
    fn interval_is_inferred() {
        let t = read_series_csv("index,timestamp,value\n0,100,1\n1,160,2\n").unwrap();
        assert_eq!((t.start_time, t.interval_seconds), (100, 60));
    }

    proptest! {
        #[test]
        fn write_then_read_is_identity(
            values in prop::collection::vec(0.0f64..1.0, 1..100),
            start in 0u64..1_000_000,
            interval in 1u64..3_600,
        ) {
            let text = write_series_csv(start, interval, &values);
            let t = read_series_csv(&text).unwrap();
            prop_assert_eq!(t.values, values.clone());
            prop_assert_eq!(t.start_time, start);
            if values.len() > 1 {
                prop_assert_eq!(t.interval_seconds, interval);
            }
        }
    }
}
