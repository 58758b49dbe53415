use crate::error::{Error, Result};

use super::spectrum::SpectrumGrid;

/// The `k` largest strict local maxima of the summed spectrum, refined by a
/// three-point parabola through the reciprocal spectrum and returned sorted
/// ascending (physical radians).
pub fn find_peaks(spec: &SpectrumGrid, k: usize) -> Result<Vec<f64>> {
    let idx = local_maxima(&spec.total);
    if idx.len() < k {
        return Err(Error::Estimation(format!("found {} spectral peaks, need {k}", idx.len())));
    }
    Ok(refine_and_sort(spec, &top_k(&spec.total, idx, k)))
}

/// Like [`find_peaks`], but tops up with the largest remaining grid values
/// when the spectrum has fewer than `k` strict local maxima.
pub fn find_peaks_or_largest(spec: &SpectrumGrid, k: usize) -> Result<Vec<f64>> {
    if spec.total.len() < k {
        return Err(Error::Estimation(format!("grid of {} points cannot hold {k} peaks", spec.total.len())));
    }
    let mut chosen = top_k(&spec.total, local_maxima(&spec.total), k);
    if chosen.len() < k {
        let mut rest: Vec<usize> = (0..spec.total.len()).filter(|i| !chosen.contains(i)).collect();
        rest.sort_by(|&a, &b| spec.total[b].total_cmp(&spec.total[a]));
        chosen.extend(rest.into_iter().take(k - chosen.len()));
    }
    Ok(refine_and_sort(spec, &chosen))
}

fn local_maxima(p: &[f64]) -> Vec<usize> {
    (1..p.len().saturating_sub(1)).filter(|&i| p[i] > p[i - 1] && p[i] > p[i + 1]).collect()
}

fn top_k(p: &[f64], mut idx: Vec<usize>, k: usize) -> Vec<usize> {
    idx.sort_by(|&a, &b| p[b].total_cmp(&p[a]).then(a.cmp(&b)));
    idx.truncate(k);
    idx
}

fn refine_and_sort(spec: &SpectrumGrid, chosen: &[usize]) -> Vec<f64> {
    let mut out: Vec<f64> = chosen.iter().map(|&i| refine(&spec.angles, &spec.total, i)).collect();
    out.sort_by(f64::total_cmp);
    out
}

/// Vertex of the parabola through the reciprocal spectrum at i-1, i, i+1.
/// Near a null the reciprocal is locally quadratic in angle.
fn refine(x: &[f64], p: &[f64], i: usize) -> f64 {
    if i == 0 || i + 1 >= p.len() {
        return x[i];
    }
    let (x0, x1, x2) = (x[i - 1], x[i], x[i + 1]);
    let (y0, y1, y2) = (1.0 / p[i - 1], 1.0 / p[i], 1.0 / p[i + 1]);
    let d0 = (y1 - y0) / (x1 - x0);
    let d1 = (y2 - y1) / (x2 - x1);
    let curvature = (d1 - d0) / (x2 - x0);
    if !(curvature > 0.0) || !curvature.is_finite() {
        return x1;
    }
    // y' = d0 + curvature (2x - x0 - x1) = 0
    let vertex = 0.5 * (x0 + x1) - d0 / (2.0 * curvature);
    vertex.clamp(x0, x2)
}
