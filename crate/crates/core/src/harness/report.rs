use crate::channel::Framework;
use crate::schemes::Scheme;

use super::output::ResultRow;

/// How many more users user selection needs to match the sum-rate user
/// pairing reaches with `users_up` users.
#[derive(Debug, Clone, PartialEq)]
pub struct UsersGain {
    pub scheme: Scheme,
    pub antennas: usize,
    pub snr_db: f64,
    pub users_up: usize,
    pub sum_rate_up: f64,
    /// Interpolated user count at which the selection curve reaches
    /// `sum_rate_up`; `None` if it never does on the swept grid.
    pub users_us: Option<f64>,
}

impl UsersGain {
    pub fn ratio(&self) -> Option<f64> {
        self.users_us.map(|n| n / self.users_up as f64)
    }
}

/// Matches each pairing row of a users sweep against the selection curve of
/// the same scheme, antenna count and SNR, by linear interpolation in `N`.
pub fn users_gain_at_matched_rate(rows: &[ResultRow]) -> Vec<UsersGain> {
    let mut gains = Vec::new();
    for up in rows.iter().filter(|r| r.framework == Framework::UserPairing) {
        let (Some(target), Some(snr)) = (up.mean_sum_rate, up.snr_db) else { continue };
        let mut curve: Vec<(f64, f64)> = rows
            .iter()
            .filter(|r| {
                r.framework == Framework::UserSelection
                    && r.scheme == up.scheme
                    && r.antennas == up.antennas
                    && r.snr_db == Some(snr)
            })
            .filter_map(|r| r.mean_sum_rate.map(|rate| (r.users as f64, rate)))
            .collect();
        if curve.is_empty() {
            continue;
        }
        curve.sort_by(|a, b| a.0.total_cmp(&b.0));
        let users_us = crossing(&curve, target);
        gains.push(UsersGain {
            scheme: up.scheme,
            antennas: up.antennas,
            snr_db: snr,
            users_up: up.users,
            sum_rate_up: target,
            users_us,
        });
    }
    gains
}

fn crossing(curve: &[(f64, f64)], target: f64) -> Option<f64> {
    if curve[0].1 >= target {
        return Some(curve[0].0);
    }
    curve.windows(2).find_map(|w| {
        let ((n0, r0), (n1, r1)) = (w[0], w[1]);
        (r0 < target && r1 >= target).then(|| n0 + (target - r0) / (r1 - r0) * (n1 - n0))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::SweepKind;

    fn row(framework: Framework, users: usize, rate: f64) -> ResultRow {
        ResultRow {
            sweep: SweepKind::SumRateVsUsers,
            scheme: Scheme::Oia,
            framework,
            transmitters: 4,
            antennas: 6,
            users,
            snr_db: Some(10.0),
            trials: Some(10),
            mean_sum_rate: Some(rate),
            stderr_sum_rate: Some(0.0),
            mean_leakage: Some(0.0),
            flops: None,
        }
    }

    #[test]
    fn interpolates_selection_curve() {
        let rows = vec![
            row(Framework::UserSelection, 40, 10.0),
            row(Framework::UserSelection, 80, 12.0),
            row(Framework::UserSelection, 160, 14.0),
            row(Framework::UserPairing, 40, 13.0),
            row(Framework::UserPairing, 80, 20.0),
        ];
        let gains = users_gain_at_matched_rate(&rows);
        assert_eq!(gains.len(), 2);
        assert!((gains[0].users_us.unwrap() - 120.0).abs() < 1e-12);
        assert!((gains[0].ratio().unwrap() - 3.0).abs() < 1e-12);
        assert_eq!(gains[1].users_us, None);
    }
}
