use nalgebra::DMatrix;
use rand::{Rng, RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct KMeansOptions {
    pub restarts: usize,
    pub max_iter: usize,
    pub seed: u64,
}

impl Default for KMeansOptions {
    fn default() -> Self {
        KMeansOptions {
            restarts: 20,
            max_iter: 100,
            seed: 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KMeansResult {
    pub assignment: Vec<usize>,
    pub objective: f64,
    /// Objective after initialization and after every iteration of the
    /// winning restart.
    pub objective_trace: Vec<f64>,
    /// Index of the winning restart.
    pub restart: usize,
}

/// Cluster sums needed for kernel distances under an assignment.
struct ClusterStats {
    size: Vec<usize>,
    /// `Σ_{y,z ∈ c} K_yz`
    inner: Vec<f64>,
    /// `row[x][c] = Σ_{y ∈ c} K_xy`
    row: Vec<Vec<f64>>,
}

impl ClusterStats {
    fn new(kmat: &DMatrix<f64>, assignment: &[usize], k: usize) -> Self {
        let n = assignment.len();
        let mut size = vec![0; k];
        for &c in assignment {
            size[c] += 1;
        }
        let row: Vec<Vec<f64>> = (0..n)
            .map(|x| {
                let mut r = vec![0.0; k];
                for (y, &c) in assignment.iter().enumerate() {
                    r[c] += kmat[(x, y)];
                }
                r
            })
            .collect();
        let mut inner = vec![0.0; k];
        for (x, &c) in assignment.iter().enumerate() {
            inner[c] += row[x][c];
        }
        ClusterStats { size, inner, row }
    }

    /// `‖φ(x) − μ_c‖² = K_xx − 2·avg K_{x,c} + avg K_{c,c}`; infinite for
    /// empty clusters.
    fn dist(&self, kmat: &DMatrix<f64>, x: usize, c: usize) -> f64 {
        let s = self.size[c];
        if s == 0 {
            return f64::INFINITY;
        }
        let s = s as f64;
        (kmat[(x, x)] - 2.0 * self.row[x][c] / s + self.inner[c] / (s * s)).max(0.0)
    }

    fn objective(&self, kmat: &DMatrix<f64>, assignment: &[usize]) -> f64 {
        assignment.iter().enumerate().map(|(x, &c)| self.dist(kmat, x, c)).sum()
    }
}

fn pair_dist(kmat: &DMatrix<f64>, x: usize, y: usize) -> f64 {
    (kmat[(x, x)] + kmat[(y, y)] - 2.0 * kmat[(x, y)]).max(0.0)
}

/// k-means++ seeding in feature space; each point joins its nearest seed.
fn init_assignment<R: Rng + ?Sized>(kmat: &DMatrix<f64>, k: usize, rng: &mut R) -> Vec<usize> {
    let n = kmat.nrows();
    let mut seeds = vec![rng.random_range(0..n)];
    let mut nearest: Vec<f64> = (0..n).map(|x| pair_dist(kmat, x, seeds[0])).collect();
    while seeds.len() < k {
        let total: f64 = nearest.iter().sum();
        let next = if total > 0.0 {
            let mut t = rng.random_range(0.0..total);
            let mut pick = n - 1;
            for (x, &d) in nearest.iter().enumerate() {
                if t < d {
                    pick = x;
                    break;
                }
                t -= d;
            }
            pick
        } else {
            // all points coincide with a seed; any unused index works
            (0..n).find(|x| !seeds.contains(x)).expect("k ≤ n")
        };
        if seeds.contains(&next) {
            // only reachable through rounding at the tail of the cumulative sum
            seeds.push((0..n).find(|x| !seeds.contains(x)).expect("k ≤ n"));
        } else {
            seeds.push(next);
        }
        let s = *seeds.last().unwrap();
        for (x, d) in nearest.iter_mut().enumerate() {
            *d = d.min(pair_dist(kmat, x, s));
        }
    }
    let mut assignment: Vec<usize> = (0..n)
        .map(|x| {
            (0..k)
                .min_by(|&a, &b| pair_dist(kmat, x, seeds[a]).total_cmp(&pair_dist(kmat, x, seeds[b])))
                .unwrap()
        })
        .collect();
    for (c, &s) in seeds.iter().enumerate() {
        assignment[s] = c;
    }
    assignment
}

/// Moves the point farthest from its own centroid (among clusters with more
/// than one member) into each empty cluster.
fn reseed_empty(kmat: &DMatrix<f64>, assignment: &mut [usize], k: usize) {
    loop {
        let stats = ClusterStats::new(kmat, assignment, k);
        let Some(empty) = (0..k).find(|&c| stats.size[c] == 0) else {
            return;
        };
        let far = (0..assignment.len())
            .filter(|&x| stats.size[assignment[x]] > 1)
            .max_by(|&a, &b| {
                stats
                    .dist(kmat, a, assignment[a])
                    .total_cmp(&stats.dist(kmat, b, assignment[b]))
                    .then(b.cmp(&a))
            })
            .expect("k ≤ n leaves a cluster with two members");
        assignment[far] = empty;
    }
}

fn run_once(kmat: &DMatrix<f64>, k: usize, max_iter: usize, seed: u64) -> (Vec<usize>, Vec<f64>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut assignment = init_assignment(kmat, k, &mut rng);
    reseed_empty(kmat, &mut assignment, k);
    let mut stats = ClusterStats::new(kmat, &assignment, k);
    let mut trace = vec![stats.objective(kmat, &assignment)];
    for _ in 0..max_iter {
        let next: Vec<usize> = (0..assignment.len())
            .map(|x| {
                let cur = assignment[x];
                let mut best = cur;
                let mut best_d = stats.dist(kmat, x, cur);
                for c in 0..k {
                    let d = stats.dist(kmat, x, c);
                    if d < best_d {
                        best = c;
                        best_d = d;
                    }
                }
                best
            })
            .collect();
        if next == assignment {
            break;
        }
        assignment = next;
        reseed_empty(kmat, &mut assignment, k);
        stats = ClusterStats::new(kmat, &assignment, k);
        trace.push(stats.objective(kmat, &assignment));
    }
    (assignment, trace)
}

/// Kernel k-means: best of `restarts` seeded runs by final objective.
/// Restart `r` uses seed `seed + r`; ties go to the lowest restart index.
pub fn kernel_kmeans(kmat: &DMatrix<f64>, k: usize, opts: &KMeansOptions) -> Result<KMeansResult> {
    let n = kmat.nrows();
    if !kmat.is_square() {
        return Err(Error::DimensionMismatch(format!("kernel of shape {:?}", kmat.shape())));
    }
    crate::moments::check_symmetric(kmat)?;
    if k < 2 || k > n {
        return Err(Error::InvalidArgument(format!("need 2 ≤ k ≤ n, got k = {k}, n = {n}")));
    }
    if opts.restarts == 0 {
        return Err(Error::InvalidArgument(
            "kernel k-means needs at least one restart".into(),
        ));
    }
    let runs: Vec<(Vec<usize>, Vec<f64>)> = (0..opts.restarts)
        .into_par_iter()
        .map(|r| run_once(kmat, k, opts.max_iter, opts.seed.wrapping_add(r as u64)))
        .collect();
    let (restart, (assignment, trace)) = runs
        .into_iter()
        .enumerate()
        .min_by(|(ia, a), (ib, b)| a.1.last().unwrap().total_cmp(b.1.last().unwrap()).then(ia.cmp(ib)))
        .unwrap();
    Ok(KMeansResult {
        assignment,
        objective: *trace.last().unwrap(),
        objective_trace: trace,
        restart,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn block_kernel(sizes: &[usize], inside: f64, across: f64) -> DMatrix<f64> {
        let labels: Vec<usize> = sizes.iter().enumerate().flat_map(|(c, &s)| vec![c; s]).collect();
        let n = labels.len();
        DMatrix::from_fn(n, n, |i, j| {
            if i == j {
                1.0
            } else if labels[i] == labels[j] {
                inside
            } else {
                across
            }
        })
    }

    #[test]
    fn separates_blocks() {
        let kmat = block_kernel(&[6, 9, 5], 0.9, 0.05);
        let r = kernel_kmeans(&kmat, 3, &KMeansOptions::default()).unwrap();
        let a = &r.assignment;
        assert!(a[..6].iter().all(|&c| c == a[0]));
        assert!(a[6..15].iter().all(|&c| c == a[6]));
        assert!(a[15..].iter().all(|&c| c == a[15]));
        assert!(a[0] != a[6] && a[6] != a[15] && a[0] != a[15]);
    }

    #[test]
    fn one_point_per_cluster() {
        let kmat = block_kernel(&[7], 0.3, 0.0);
        let r = kernel_kmeans(&kmat, 7, &KMeansOptions::default()).unwrap();
        let mut a = r.assignment.clone();
        a.sort();
        assert_eq!(a, (0..7).collect::<Vec<_>>());
        assert!(r.objective.abs() < 1e-12);
    }

    #[test]
    fn objective_never_increases() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let pts: Vec<[f64; 2]> = (0..60)
            .map(|_| [rng.random_range(0.0..3.0), rng.random_range(0.0..3.0)])
            .collect();
        let kmat = DMatrix::from_fn(60, 60, |i, j| {
            let d = ((pts[i][0] - pts[j][0]).powi(2) + (pts[i][1] - pts[j][1]).powi(2)).sqrt();
            (-d).exp()
        });
        for seed in 0..10 {
            let (_, trace) = run_once(&kmat, 4, 100, seed);
            for w in trace.windows(2) {
                assert!(w[1] <= w[0] + 1e-9, "{trace:?}");
            }
        }
    }

    #[test]
    fn deterministic_under_seed() {
        let kmat = block_kernel(&[5, 5, 5, 5], 0.5, 0.4);
        let opts = KMeansOptions {
            seed: 11,
            ..Default::default()
        };
        assert_eq!(
            kernel_kmeans(&kmat, 4, &opts).unwrap(),
            kernel_kmeans(&kmat, 4, &opts).unwrap()
        );
    }

    #[test]
    fn coincident_points_fill_every_cluster() {
        let kmat = DMatrix::from_element(6, 6, 1.0);
        let r = kernel_kmeans(&kmat, 3, &KMeansOptions::default()).unwrap();
        for c in 0..3 {
            assert!(r.assignment.contains(&c));
        }
    }

    #[test]
    fn rejects_bad_k() {
        let kmat = block_kernel(&[3], 0.5, 0.0);
        assert!(kernel_kmeans(&kmat, 1, &KMeansOptions::default()).is_err());
        assert!(kernel_kmeans(&kmat, 4, &KMeansOptions::default()).is_err());
    }
}
