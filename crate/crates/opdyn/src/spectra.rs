//! Eigenvalue multisets, eps-clustered connected components and the
//! unit-circle obstruction check shared by the elementary-operator and
//! dynamics layers.

use num_complex::Complex64 as C64;

/// Spectrum of an operator at truncation, clustered into approximate
/// connected components.
#[derive(Debug, Clone)]
pub struct SpectrumReport {
    pub eigenvalues: Vec<C64>,
    /// Clustering radius actually used.
    pub eps: f64,
    /// Single-linkage eps-components, each a list of eigenvalues.
    pub components: Vec<Vec<C64>>,
    /// True when some component stays clear of the unit circle by more
    /// than the margin; the index points at the offending component.
    pub kitai_obstructed: bool,
    pub obstructed_component: Option<usize>,
    /// For generalised derivations: the difference set
    /// `{alpha - beta : alpha in eig(A), beta in eig(B)}` and its
    /// Hausdorff distance to the lift spectrum.
    pub difference_set: Option<Vec<C64>>,
    pub hausdorff_to_difference_set: Option<f64>,
}

/// Default clustering radius: a twentieth of the spectral diameter.
pub fn default_eps(points: &[C64]) -> f64 {
    let mut diameter = 0.0f64;
    for (i, a) in points.iter().enumerate() {
        for b in &points[i + 1..] {
            diameter = diameter.max((a - b).norm());
        }
    }
    if diameter > 0.0 {
        0.05 * diameter
    } else {
        1e-9
    }
}

/// Single-linkage clustering: points at distance <= eps are connected.
pub fn cluster(points: &[C64], eps: f64) -> Vec<Vec<usize>> {
    let n = points.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut Vec<usize>, mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    for i in 0..n {
        for j in i + 1..n {
            if (points[i] - points[j]).norm() <= eps {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                if ri != rj {
                    // lower root index wins, keeping cluster ids stable
                    let (lo, hi) = if ri < rj { (ri, rj) } else { (rj, ri) };
                    parent[hi] = lo;
                }
            }
        }
    }
    let mut clusters: Vec<Vec<usize>> = Vec::new();
    let mut root_to_cluster: Vec<Option<usize>> = vec![None; n];
    for i in 0..n {
        let r = find(&mut parent, i);
        match root_to_cluster[r] {
            Some(c) => clusters[c].push(i),
            None => {
                root_to_cluster[r] = Some(clusters.len());
                clusters.push(vec![i]);
            }
        }
    }
    clusters
}

/// Build a [`SpectrumReport`] from raw eigenvalues. The Kitai verdict is
/// "obstructed" when some component keeps every point at distance more
/// than `margin` from the unit circle.
pub fn spectrum_report(eigenvalues: Vec<C64>, eps: f64, margin: f64) -> SpectrumReport {
    let clusters = cluster(&eigenvalues, eps);
    let mut components: Vec<Vec<C64>> = Vec::with_capacity(clusters.len());
    let mut obstructed_component = None;
    for (ci, idxs) in clusters.iter().enumerate() {
        let pts: Vec<C64> = idxs.iter().map(|&i| eigenvalues[i]).collect();
        let off_circle = pts.iter().all(|z| (z.norm() - 1.0).abs() > margin);
        if off_circle && obstructed_component.is_none() {
            obstructed_component = Some(ci);
        }
        components.push(pts);
    }
    SpectrumReport {
        eigenvalues,
        eps,
        components,
        kitai_obstructed: obstructed_component.is_some(),
        obstructed_component,
        difference_set: None,
        hausdorff_to_difference_set: None,
    }
}

/// Hausdorff distance between two nonempty point sets.
pub fn hausdorff(a: &[C64], b: &[C64]) -> f64 {
    let one_sided = |from: &[C64], to: &[C64]| {
        from.iter()
            .map(|p| {
                to.iter()
                    .map(|q| (p - q).norm())
                    .fold(f64::INFINITY, f64::min)
            })
            .fold(0.0, f64::max)
    };
    one_sided(a, b).max(one_sided(b, a))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn clustering_splits_separated_groups() {
        let pts = vec![c(0.0, 0.0), c(0.01, 0.0), c(5.0, 0.0), c(5.02, 0.0)];
        let cl = cluster(&pts, 0.05);
        assert_eq!(cl.len(), 2);
        assert_eq!(cl[0], vec![0, 1]);
        assert_eq!(cl[1], vec![2, 3]);
    }

    #[test]
    fn kitai_verdicts() {
        // {0.5}: obstructed
        let r = spectrum_report(vec![c(0.5, 0.0)], 0.05, 0.05);
        assert!(r.kitai_obstructed);

        // points on the unit circle: not obstructed
        let on_circle: Vec<C64> = (0..8)
            .map(|k| {
                let t = 2.0 * std::f64::consts::PI * k as f64 / 8.0;
                c(t.cos(), t.sin())
            })
            .collect();
        let r = spectrum_report(on_circle, 0.05, 0.05);
        assert!(!r.kitai_obstructed);
    }

    #[test]
    fn kitai_depends_only_on_moduli_and_clustering() {
        // Rotating every point together leaves the verdict unchanged.
        let pts = vec![c(0.3, 0.0), c(0.32, 0.01), c(1.0, 0.0)];
        let eps = 0.1;
        let base = spectrum_report(pts.clone(), eps, 0.05);
        for k in 1..6 {
            let theta = 0.7 * k as f64;
            let rot = C64::new(theta.cos(), theta.sin());
            let rotated: Vec<C64> = pts.iter().map(|z| z * rot).collect();
            let r = spectrum_report(rotated, eps, 0.05);
            assert_eq!(r.kitai_obstructed, base.kitai_obstructed);
            assert_eq!(r.components.len(), base.components.len());
        }
    }

    #[test]
    fn hausdorff_basics() {
        let a = vec![c(0.0, 0.0), c(1.0, 0.0)];
        let b = vec![c(0.0, 0.1), c(1.0, 0.0)];
        assert!((hausdorff(&a, &b) - 0.1).abs() < 1e-12);
    }
}
