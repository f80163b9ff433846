use crate::error::{Error, Result};

/// Euclidean projection onto the probability simplex, by sorting and
/// thresholding.
pub fn project_onto_simplex(v: &[f64]) -> Result<Vec<f64>> {
    if v.is_empty() {
        return Err(Error::EmptyVector);
    }
    if v.iter().any(|c| !c.is_finite()) {
        return Err(Error::InvalidArgument("vector has non-finite entries".into()));
    }
    let mut sorted = v.to_vec();
    sorted.sort_by(|a, b| b.total_cmp(a));
    let mut cumsum = 0.0;
    let mut theta = 0.0;
    for (j, &u) in sorted.iter().enumerate() {
        cumsum += u;
        let candidate = (cumsum - 1.0) / (j + 1) as f64;
        if u - candidate > 0.0 {
            theta = candidate;
        }
    }
    Ok(v.iter().map(|&c| (c - theta).max(0.0)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        assert_eq!(project_onto_simplex(&[2.0, 0.0]).unwrap(), vec![1.0, 0.0]);
        assert_eq!(project_onto_simplex(&[0.3, 0.3]).unwrap(), vec![0.5, 0.5]);
        assert_eq!(
            project_onto_simplex(&[-1.0, -1.0, 5.0]).unwrap(),
            vec![0.0, 0.0, 1.0]
        );
        assert_eq!(project_onto_simplex(&[]), Err(Error::EmptyVector));
        assert!(project_onto_simplex(&[f64::NAN]).is_err());
    }

    #[test]
    fn grid_search_agrees() {
        // Dense grid over the 3-simplex as an independent check.
        let v = [0.4, -0.2, 0.9];
        let p = project_onto_simplex(&v).unwrap();
        let dist = |u: &[f64]| -> f64 { u.iter().zip(&v).map(|(a, b)| (a - b).powi(2)).sum() };
        let steps = 400;
        let mut best = f64::INFINITY;
        for i in 0..=steps {
            for j in 0..=steps - i {
                let u = [
                    i as f64 / steps as f64,
                    j as f64 / steps as f64,
                    (steps - i - j) as f64 / steps as f64,
                ];
                best = best.min(dist(&u));
            }
        }
        assert!(dist(&p) <= best + 1e-12);
        assert!(best - dist(&p) < 1e-4);
    }
}
