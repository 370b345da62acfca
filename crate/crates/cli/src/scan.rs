//! Ranged family specs such as `complete:3..20` or `rook:k=2,n=3..12`.

use anyhow::{bail, Result};
use serde::Serialize;

use qwsed_core::SedentaryReport;

/// One family member of a scan.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Member {
    pub param: usize,
    pub spec: String,
}

/// Expands the single inclusive `a..b` range in `spec`.
pub fn expand(spec: &str) -> Result<Vec<Member>> {
    let ranges: Vec<(usize, usize)> = spec.match_indices("..").map(|(i, _)| (i, i + 2)).collect();
    let [(dots, after)] = ranges.as_slice() else {
        bail!("family-scan needs exactly one `a..b` range in `{spec}`");
    };
    let start = spec[..*dots]
        .rfind(|c: char| !c.is_ascii_digit())
        .map_or(0, |i| i + 1);
    let end = spec[*after..]
        .find(|c: char| !c.is_ascii_digit())
        .map_or(spec.len(), |i| after + i);
    let (lo, hi) = (&spec[start..*dots], &spec[*after..end]);
    let (Ok(lo), Ok(hi)) = (lo.parse::<usize>(), hi.parse::<usize>()) else {
        bail!("range bounds in `{spec}` must be integers");
    };
    if lo > hi {
        bail!("empty range {lo}..{hi} in `{spec}`");
    }
    Ok((lo..=hi)
        .map(|p| Member {
            param: p,
            spec: format!("{}{p}{}", &spec[..start], &spec[end..]),
        })
        .collect())
}

#[derive(Debug, Clone, Serialize)]
pub struct TrendRow {
    pub param: usize,
    pub n: usize,
    pub classification: &'static str,
    #[serde(rename = "C")]
    pub c: Option<f64>,
    #[serde(rename = "m*")]
    pub m_star: Option<f64>,
}

/// How `C` moves as `|V(X)|` grows across the scanned members.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Direction {
    Increasing,
    Decreasing,
    Constant,
    NonMonotone,
    /// Some member has no constant.
    Incomplete,
}

#[derive(Debug, Clone, Serialize)]
pub struct Trend {
    pub rows: Vec<TrendRow>,
    pub direction: Direction,
}

pub fn trend(members: &[Member], reports: &[SedentaryReport]) -> Trend {
    let mut rows: Vec<TrendRow> = members
        .iter()
        .zip(reports)
        .map(|(m, r)| TrendRow {
            param: m.param,
            n: r.order,
            classification: r.classification.label(),
            c: r.constant(),
            m_star: r.oracle.map(|o| o.minimum),
        })
        .collect();
    rows.sort_by_key(|r| (r.n, r.param));
    let cs: Option<Vec<f64>> = rows.iter().map(|r| r.c).collect();
    let direction = match cs {
        None => Direction::Incomplete,
        Some(cs) => {
            const EPS: f64 = 1e-12;
            let up = cs.windows(2).all(|w| w[1] >= w[0] - EPS);
            let down = cs.windows(2).all(|w| w[1] <= w[0] + EPS);
            match (up, down) {
                (true, true) => Direction::Constant,
                (true, false) => Direction::Increasing,
                (false, true) => Direction::Decreasing,
                (false, false) => Direction::NonMonotone,
            }
        }
    };
    Trend { rows, direction }
}
