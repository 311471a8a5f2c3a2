// SPDX-License-Identifier: Apache-2.0

//! Point-cloud outlier filters (radius and statistical outlier removal).
//!
//! Both are exact: neighbor queries go through a k-d tree, and every
//! aggregate over points is computed in an order that does not depend on
//! the input order, so the retained set is permutation invariant.

use std::num::NonZero;

use kiddo::{ImmutableKdTree, SquaredEuclidean};
use log::warn;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::scene::Point3D;

pub const DEFAULT_ROR_RADIUS: f64 = 0.05;
pub const DEFAULT_ROR_MIN_NEIGHBORS: usize = 1;
pub const DEFAULT_SOR_K: usize = 20;
pub const DEFAULT_SOR_STD_RATIO: f64 = 2.0;

fn tree(points: &[Point3D]) -> Result<ImmutableKdTree<f64, 3>> {
    let xyz: Vec<[f64; 3]> = points.iter().map(Point3D::xyz).collect();
    ImmutableKdTree::new_from_slice(&xyz)
        .map_err(|e| Error::invalid(format!("cannot index point cloud: {e:?}")))
}

fn retain(points: &[Point3D], keep: Vec<bool>) -> Vec<Point3D> {
    points
        .iter()
        .zip(keep)
        .filter_map(|(p, k)| k.then_some(*p))
        .collect()
}

/// Keep points with at least `min_neighbors` other points within `radius`.
pub fn ror_filter(points: &[Point3D], radius: f64, min_neighbors: usize) -> Result<Vec<Point3D>> {
    Ok(retain(points, ror_keep(points, radius, min_neighbors)?))
}

pub(crate) fn ror_keep(points: &[Point3D], radius: f64, min_neighbors: usize) -> Result<Vec<bool>> {
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(Error::invalid(format!(
            "ROR radius must be > 0, got {radius}"
        )));
    }
    if points.is_empty() || min_neighbors == 0 {
        return Ok(vec![true; points.len()]);
    }
    let kd = tree(points)?;
    let want = NonZero::new(min_neighbors + 1).expect("nonzero");
    let r2 = radius * radius;
    let keep: Vec<bool> = points
        .par_iter()
        .map(|p| {
            let found = kd
                .query(&p.xyz())
                .nearest_n::<SquaredEuclidean<f64>>(want)
                .within(r2)
                .execute();
            // the query point itself is always among the results
            found.len() > min_neighbors
        })
        .collect();
    Ok(keep)
}

/// Mean distance from each point to its `k` nearest other points.
pub fn knn_mean_distances(points: &[Point3D], k: usize) -> Result<Vec<f64>> {
    let kd = tree(points)?;
    let want = NonZero::new(k + 1).expect("nonzero");
    Ok(points
        .par_iter()
        .map(|p| {
            let mut d: Vec<f64> = kd
                .query(&p.xyz())
                .nearest_n::<SquaredEuclidean<f64>>(want)
                .execute()
                .into_iter()
                .map(|r| r.distance.sqrt())
                .collect();
            d.sort_by(f64::total_cmp);
            // drop one zero-distance hit: the point itself
            d[1..].iter().sum::<f64>() / k as f64
        })
        .collect())
}

/// Remove points whose mean k-NN distance exceeds
/// `mean + std_ratio * std` over the whole cloud.
pub fn sor_filter(points: &[Point3D], k: usize, std_ratio: f64) -> Result<Vec<Point3D>> {
    Ok(retain(points, sor_keep(points, k, std_ratio)?))
}

pub(crate) fn sor_keep(points: &[Point3D], k: usize, std_ratio: f64) -> Result<Vec<bool>> {
    if k == 0 {
        return Err(Error::invalid("SOR k must be >= 1"));
    }
    if !(std_ratio > 0.0 && std_ratio.is_finite()) {
        return Err(Error::invalid(format!(
            "SOR std ratio must be > 0, got {std_ratio}"
        )));
    }
    if points.len() < k + 1 {
        warn!(
            "SOR needs at least {} points, got {}; passing through",
            k + 1,
            points.len()
        );
        return Ok(vec![true; points.len()]);
    }
    let mean_d = knn_mean_distances(points, k)?;
    let mut sorted = mean_d.clone();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;
    let mu = sorted.iter().sum::<f64>() / n;
    let var = sorted.iter().map(|d| (d - mu) * (d - mu)).sum::<f64>() / n;
    let limit = mu + std_ratio * var.sqrt();
    Ok(mean_d.into_iter().map(|d| d <= limit).collect())
}
