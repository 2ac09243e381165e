use serde::Serialize;

use crate::error::{Error, Result};
use crate::par;
use crate::sequence::SequenceSpec;

/// Largest `|joint - product of marginals|` over a grid of thresholds.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IndependenceReport {
    pub max_deviation: f64,
    pub argmax: Vec<f64>,
    pub joint_at_argmax: f64,
    pub product_at_argmax: f64,
    #[serde(rename = "N")]
    pub window: u64,
}

const MAX_CELLS: usize = 1 << 24;

/// Compares `#{n <= N : v_j(n) < x_j for all j} / N` with the product of
/// the one-dimensional frequencies, for every tuple of grid thresholds.
pub fn independence_test(specs: &[SequenceSpec], grid: &[Vec<f64>], window: u64) -> Result<IndependenceReport> {
    if specs.is_empty() || specs.len() != grid.len() {
        return Err(Error::InvalidArgument(format!(
            "need one threshold list per sequence, got {} sequences and {} lists",
            specs.len(),
            grid.len()
        )));
    }
    if window == 0 {
        return Err(Error::InvalidArgument("window must be positive".into()));
    }
    let mut grid: Vec<Vec<f64>> = grid.to_vec();
    for g in grid.iter_mut() {
        if g.is_empty() || g.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidArgument("threshold lists must be non-empty and finite".into()));
        }
        g.sort_by(f64::total_cmp);
        g.dedup();
    }
    for s in specs {
        s.check_range(window)?;
    }

    // Cell index per coordinate: c = #{thresholds <= v}, so v < x_t iff t >= c.
    let dims: Vec<usize> = grid.iter().map(|g| g.len() + 1).collect();
    let cells: usize = dims.iter().try_fold(1usize, |acc, &d| acc.checked_mul(d)).unwrap_or(usize::MAX);
    if cells > MAX_CELLS {
        return Err(Error::InvalidArgument(format!("threshold grid has {cells} cells, limit {MAX_CELLS}")));
    }
    let parts = par::map_chunks(window as usize, |r| -> Result<Vec<u64>> {
        let mut hist = vec![0u64; cells];
        for i in r {
            let n = i as u64 + 1;
            let mut flat = 0;
            for (s, g) in specs.iter().zip(&grid) {
                let v = s.eval(n)?;
                flat = flat * (g.len() + 1) + g.partition_point(|&x| x <= v);
            }
            hist[flat] += 1;
        }
        Ok(hist)
    });
    let mut hist = vec![0u64; cells];
    for part in parts {
        for (h, p) in hist.iter_mut().zip(part?) {
            *h += p;
        }
    }

    // Cumulative sums along each axis: cum[t] = #{n : c_j(n) <= t_j for all j}.
    let mut stride = 1;
    for &d in dims.iter().rev() {
        for flat in 0..cells {
            if (flat / stride) % d > 0 {
                hist[flat] += hist[flat - stride];
            }
        }
        stride *= d;
    }

    let n = window as f64;
    let marginal = |axis: usize, t: usize| -> f64 {
        // all other coordinates at their last cell
        let mut flat = 0;
        for (j, &d) in dims.iter().enumerate() {
            flat = flat * d + if j == axis { t } else { d - 1 };
        }
        hist[flat] as f64 / n
    };

    let mut best = IndependenceReport {
        max_deviation: -1.0,
        argmax: Vec::new(),
        joint_at_argmax: 0.0,
        product_at_argmax: 0.0,
        window,
    };
    let mut tuple = vec![0usize; grid.len()];
    loop {
        // threshold index t selects cells c <= t
        let flat = tuple.iter().zip(&dims).fold(0, |acc, (&t, &d)| acc * d + t);
        let joint = hist[flat] as f64 / n;
        let product: f64 = tuple.iter().enumerate().map(|(j, &t)| marginal(j, t)).product();
        let dev = (joint - product).abs();
        if dev > best.max_deviation {
            best.max_deviation = dev;
            best.argmax = tuple.iter().zip(&grid).map(|(&t, g)| g[t]).collect();
            best.joint_at_argmax = joint;
            best.product_at_argmax = product;
        }
        // odometer over threshold indices 0..len
        let mut axis = grid.len();
        loop {
            if axis == 0 {
                return Ok(best);
            }
            axis -= 1;
            tuple[axis] += 1;
            if tuple[axis] < grid[axis].len() {
                break;
            }
            tuple[axis] = 0;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(s: &str) -> SequenceSpec {
        s.parse().unwrap()
    }

    // Oracle: direct counting per threshold tuple, two sequences.
    fn brute(a: &SequenceSpec, b: &SequenceSpec, x: f64, y: f64, window: u64) -> f64 {
        let (mut j, mut ma, mut mb) = (0u64, 0u64, 0u64);
        for n in 1..=window {
            let (va, vb) = (a.eval(n).unwrap() < x, b.eval(n).unwrap() < y);
            j += (va && vb) as u64;
            ma += va as u64;
            mb += vb as u64;
        }
        let n = window as f64;
        (j as f64 / n - (ma as f64 / n) * (mb as f64 / n)).abs()
    }

    #[test]
    fn matches_direct_counting() {
        let a = spec("vdc(geometric:2)");
        let b = spec("vdc(geometric:3)");
        let xs = vec![0.2, 0.5, 0.7];
        let ys = vec![0.1, 0.45, 0.9];
        let r = independence_test(&[a.clone(), b.clone()], &[xs.clone(), ys.clone()], 5000).unwrap();
        let oracle = xs
            .iter()
            .flat_map(|&x| ys.iter().map(move |&y| (x, y)))
            .map(|(x, y)| brute(&a, &b, x, y, 5000))
            .fold(0.0, f64::max);
        assert!((r.max_deviation - oracle).abs() < 1e-15);
    }

    #[test]
    fn coprime_bases_factorise() {
        let r = independence_test(
            &[spec("vdc(geometric:2)"), spec("vdc(geometric:3)")],
            &[vec![0.5], vec![0.5]],
            1_000_000,
        )
        .unwrap();
        assert!((r.joint_at_argmax - 0.25).abs() <= 5e-3);
    }

    #[test]
    fn identical_sequences_are_dependent() {
        let v = spec("vdc(geometric:2)");
        let r = independence_test(&[v.clone(), v], &[vec![0.5], vec![0.5]], 10_000).unwrap();
        assert!((r.joint_at_argmax - 0.5).abs() < 1e-3);
        assert!((r.max_deviation - 0.25).abs() < 1e-3);
    }

    #[test]
    fn single_sequence_has_no_deviation() {
        let r = independence_test(&[spec("vdc(factorial)")], &[vec![0.1, 0.3, 0.77]], 3000).unwrap();
        assert_eq!(r.max_deviation, 0.0);
    }

    #[test]
    fn three_coordinates() {
        let specs = [spec("vdc(geometric:2)"), spec("vdc(geometric:3)"), spec("vdc(geometric:5)")];
        let g = vec![vec![0.25, 0.5, 0.75]; 3];
        let r = independence_test(&specs, &g, 100_000).unwrap();
        assert!(r.max_deviation < 5e-3);
        assert_eq!(r.argmax.len(), 3);
    }

    #[test]
    fn argument_errors() {
        let v = spec("vdc(1,2,4,8)");
        assert!(independence_test(&[], &[], 10).is_err());
        assert!(independence_test(std::slice::from_ref(&v), &[vec![]], 5).is_err());
        assert!(independence_test(std::slice::from_ref(&v), &[vec![0.5], vec![0.5]], 5).is_err());
        assert!(matches!(
            independence_test(&[v], &[vec![0.5]], 8),
            Err(Error::CapacityExceeded { .. })
        ));
    }
}
