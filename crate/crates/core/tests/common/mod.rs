#![allow(dead_code)]

use std::collections::BTreeSet;

use cdk_core::kernel::{circumobject, distance, CircumObject, HPoint};
use cdk_core::Tolerances;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Random sites in the disk, hyperbolic radius up to `rmax`.
pub fn random_sites(rng: &mut ChaCha8Rng, n: usize, rmax: f64) -> Vec<HPoint> {
    (0..n)
        .map(|_| {
            let r: f64 = rng.gen_range(0.0..rmax);
            let t: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
            let rho = (r / 2.0).tanh();
            HPoint::disk(rho * t.cos(), rho * t.sin()).unwrap()
        })
        .collect()
}

/// Maximal empty metric circumcircles by exhaustive search over triples.
pub fn brute_force_cells(sites: &[HPoint]) -> BTreeSet<Vec<usize>> {
    let tol = Tolerances::DEFAULT;
    let n = sites.len();
    let mut out = BTreeSet::new();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let Ok(CircumObject::MetricCircle { center, radius }) =
                    circumobject(&sites[i], &sites[j], &sites[k], &tol)
                else {
                    continue;
                };
                let eps = 1e-9 * radius.max(1.0);
                let mut on = Vec::new();
                let mut empty = true;
                for (s, p) in sites.iter().enumerate() {
                    let d = distance(&center, p);
                    if d < radius - eps {
                        empty = false;
                        break;
                    }
                    if (d - radius).abs() <= eps {
                        on.push(s);
                    }
                }
                if empty {
                    out.insert(on);
                }
            }
        }
    }
    out
}
