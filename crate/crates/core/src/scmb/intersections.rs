use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::bias::BiasResult;
use super::line::CenterLine;
use super::EPS_MERGE;
use crate::channel::PathRef;
use crate::{Error, Execution, Result};

/// Crossings between center lines of different satellites `(Σ N_m)²/2 − Σ N_m²/2`, given each
/// satellite's path count.
pub fn intersection_count(path_counts: &[usize]) -> usize {
    let total: usize = path_counts.iter().sum();
    let squares: usize = path_counts.iter().map(|n| n * n).sum();
    (total * total - squares) / 2
}

/// One distinct crossing, possibly shared by several line pairs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntersectionPoint {
    /// Result for the first pair (in enumeration order) that produced this point.
    pub bias: BiasResult,
    /// Every pair that crosses here.
    pub pairs: Vec<(Option<PathRef>, Option<PathRef>)>,
    /// Sorted, de-duplicated paths whose lines pass through this point.
    pub contributors: Vec<PathRef>,
}

impl IntersectionPoint {
    pub fn distance(&self) -> f64 {
        self.bias.dr
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Intersections {
    pub points: Vec<IntersectionPoint>,
    /// Cross-satellite pairs whose lines are parallel: the crossing is at infinity.
    pub unbounded: Vec<(Option<PathRef>, Option<PathRef>)>,
    /// Number of cross-satellite pairs examined.
    pub raw_pairs: usize,
}

/// Intersects every pair of lines from different satellites and merges coincident crossings.
///
/// Lines without a source are each treated as their own satellite.
pub fn enumerate_intersections(
    lines: &[CenterLine],
    execution: Execution,
) -> Result<Intersections> {
    if lines.len() < 2 {
        return Err(Error::TooFew {
            what: "center lines",
            needed: 2,
            got: lines.len(),
        });
    }
    if lines.iter().any(|l| l.space != lines[0].space) {
        return Err(Error::InvalidInput(
            "center lines mix position and velocity".into(),
        ));
    }
    let satellite = |i: usize| {
        lines[i]
            .source
            .map(|s| s.prn as i64)
            .unwrap_or(-(i as i64) - 1)
    };
    let mut distinct: Vec<i64> = (0..lines.len()).map(satellite).collect();
    distinct.sort_unstable();
    distinct.dedup();
    if distinct.len() < 2 {
        return Err(Error::TooFew {
            what: "satellites",
            needed: 2,
            got: distinct.len(),
        });
    }

    let pairs: Vec<(usize, usize)> = (0..lines.len())
        .flat_map(|i| (i + 1..lines.len()).map(move |j| (i, j)))
        .filter(|&(i, j)| satellite(i) != satellite(j))
        .collect();
    let solve = |&(i, j): &(usize, usize)| BiasResult::from_lines(&lines[i], &lines[j]);
    let solved: Vec<Result<BiasResult>> = match execution {
        Execution::Serial => pairs.iter().map(solve).collect(),
        Execution::Parallel => pairs.par_iter().map(solve).collect(),
    };

    let mut out = Intersections {
        points: Vec::new(),
        unbounded: Vec::new(),
        raw_pairs: pairs.len(),
    };
    for (&(i, j), result) in pairs.iter().zip(solved) {
        let key = (lines[i].source, lines[j].source);
        let bias = match result {
            Ok(b) => b,
            Err(Error::ParallelLines { .. }) => {
                out.unbounded.push(key);
                continue;
            }
            Err(e) => return Err(e),
        };
        let (e, n) = bias.point();
        let sources = [lines[i].source, lines[j].source];
        match out
            .points
            .iter_mut()
            .find(|p| (p.bias.dx - e).hypot(p.bias.dy - n) < EPS_MERGE)
        {
            Some(existing) => {
                existing.pairs.push(key);
                existing.contributors.extend(sources.into_iter().flatten());
                existing.contributors.sort_unstable();
                existing.contributors.dedup();
            }
            None => {
                let mut contributors: Vec<PathRef> = sources.into_iter().flatten().collect();
                contributors.sort_unstable();
                contributors.dedup();
                out.points.push(IntersectionPoint {
                    bias,
                    pairs: vec![key],
                    contributors,
                });
            }
        }
    }
    Ok(out)
}
