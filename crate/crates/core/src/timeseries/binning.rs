use super::{Metric, PacketRecord, RawSeries};
use crate::error::{Error, Result};

/// Sum `metric` over records into bins `[start + k*interval, start + (k+1)*interval)`.
///
/// Records outside `[start_time, end_time)` are ignored. Empty bins stay as
/// explicit zeros.
pub fn bin_events(
    records: &[PacketRecord],
    start_time: u64,
    end_time: u64,
    interval_seconds: u64,
    metric: Metric,
) -> Result<RawSeries> {
    if interval_seconds == 0 {
        return Err(Error::invalid("interval_seconds must be positive"));
    }
    if end_time <= start_time {
        return Err(Error::invalid("end_time must be after start_time"));
    }
    let bins = (end_time - start_time).div_ceil(interval_seconds) as usize;
    let mut values = vec![0.0; bins];
    for record in records {
        let ts = u64::from(record.ts_sec);
        // ts_frac < 1s, so the whole-second part alone decides window membership
        if ts < start_time || ts >= end_time {
            continue;
        }
        let k = ((ts - start_time) / interval_seconds) as usize;
        values[k] += metric.weight(record);
    }
    RawSeries::new(start_time, interval_seconds, values, metric)
}
