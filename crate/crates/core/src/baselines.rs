//! Reference transceivers: SVD-ideal SIM precoding and zero-forcing MIMO.

use crate::{Complex64, ComplexMatrix, Error, Result};

/// Singular values below this fraction of the largest count as zero.
const RANK_TOLERANCE: f64 = 1e-12;

/// Thin SVD `G = D diag(sigma) V^H` with non-increasing singular values.
#[derive(Debug, Clone, PartialEq)]
pub struct SvdTriple {
    /// Left singular vectors, `rows x min(rows, cols)`.
    pub left: ComplexMatrix,
    pub singular_values: Vec<f64>,
    /// Right singular vectors, `cols x min(rows, cols)`.
    pub right: ComplexMatrix,
    /// Numerical rank.
    pub rank: usize,
}

impl SvdTriple {
    pub fn compute(g: &ComplexMatrix) -> Result<Self> {
        if g.is_empty() {
            return Err(Error::invalid("channel", "matrix is empty"));
        }
        let svd = g.clone().svd(true, true);
        let (u, v_t) = match (svd.u, svd.v_t) {
            (Some(u), Some(v_t)) => (u, v_t),
            _ => return Err(Error::Singular("SVD did not converge")),
        };
        let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
        order.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));
        let singular_values: Vec<f64> = order.iter().map(|&i| svd.singular_values[i]).collect();
        let left = ComplexMatrix::from_fn(u.nrows(), order.len(), |r, c| u[(r, order[c])]);
        let right = ComplexMatrix::from_fn(v_t.ncols(), order.len(), |r, c| v_t[(order[c], r)].conj());
        let cutoff = RANK_TOLERANCE * singular_values[0];
        let rank = singular_values.iter().take_while(|&&s| s > cutoff).count();
        Ok(SvdTriple { left, singular_values, right, rank })
    }
}

/// Precoder `P = V_S Sigma_S^{-1/2}` and combiner `Q = Sigma_S^{-1/2} D_S^H`,
/// so that `Q G P = I_S`.
pub fn svd_ideal_transceivers(g: &ComplexMatrix, streams: usize) -> Result<(ComplexMatrix, ComplexMatrix)> {
    if streams == 0 {
        return Err(Error::invalid("stream count", "must be >= 1"));
    }
    let svd = SvdTriple::compute(g)?;
    if svd.rank < streams {
        return Err(Error::RankDeficient { rank: svd.rank, streams });
    }
    let weights: Vec<f64> = svd.singular_values[..streams].iter().map(|s| 1.0 / s.sqrt()).collect();
    let p = ComplexMatrix::from_fn(g.ncols(), streams, |r, c| svd.right[(r, c)] * weights[c]);
    let q = ComplexMatrix::from_fn(streams, g.nrows(), |r, c| svd.left[(c, r)].conj() * weights[r]);
    Ok((p, q))
}

/// Zero-forcing precoder for a square MIMO channel.
#[derive(Debug, Clone, PartialEq)]
pub struct ZeroForcing {
    /// `P = c G^H (G G^H)^-1`.
    pub precoder: ComplexMatrix,
    /// `c = sqrt(P_t / tr((G G^H)^-1))`, so `G P = c I`.
    pub gain: f64,
}

/// Zero-forcing under total transmit power `pt`.
pub fn zf_precoder(g: &ComplexMatrix, pt: f64) -> Result<ZeroForcing> {
    if !g.is_square() {
        return Err(Error::dims("zero-forcing channel", "square", format!("{}x{}", g.nrows(), g.ncols())));
    }
    if !(pt.is_finite() && pt > 0.0) {
        return Err(Error::invalid("transmit power", format!("must be positive, got {pt}")));
    }
    let gram = g * g.adjoint();
    let chol = gram.cholesky().ok_or(Error::Singular("G G^H"))?;
    let inverse = chol.inverse();
    let trace = inverse.trace().re;
    if !(trace.is_finite() && trace > 0.0) {
        return Err(Error::Singular("G G^H"));
    }
    let gain = (pt / trace).sqrt();
    let precoder = g.adjoint() * inverse * Complex64::from(gain);
    Ok(ZeroForcing { precoder, gain })
}

/// `S log2(1 + c^2 / N0)`: each stream sees gain `c` and unit-power symbols.
pub fn zf_capacity(gain: f64, n0: f64, streams: usize) -> f64 {
    streams as f64 * (gain * gain / n0).ln_1p() / std::f64::consts::LN_2
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::sample_rayleigh_channel;

    fn identity_error(h: &ComplexMatrix) -> f64 {
        (h - ComplexMatrix::identity(h.nrows(), h.ncols())).norm()
    }

    #[test]
    fn identity_channel() {
        let g = ComplexMatrix::identity(4, 4);
        let (p, q) = svd_ideal_transceivers(&g, 4).unwrap();
        assert!(identity_error(&(&q * &g * &p)) < 1e-14);
        // columns of P are unit vectors up to phase
        for c in p.column_iter() {
            assert!((c.norm() - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn scaled_identity_splits_the_inverse() {
        let g = ComplexMatrix::identity(3, 3) * Complex64::from(2.0);
        let (p, q) = svd_ideal_transceivers(&g, 3).unwrap();
        assert!(identity_error(&(&q * &g * &p)) < 1e-14);
        assert!((p.norm_squared() - 1.5).abs() < 1e-14);
    }

    #[test]
    fn random_channel_diagonalizes() {
        let g = sample_rayleigh_channel(8, 8, 1.0, 11).unwrap();
        let (p, q) = svd_ideal_transceivers(&g, 4).unwrap();
        assert_eq!(p.shape(), (8, 4));
        assert_eq!(q.shape(), (4, 8));
        assert!(identity_error(&(&q * &g * &p)) < 1e-10);
    }

    #[test]
    fn rectangular_channel_and_unitarity() {
        let g = sample_rayleigh_channel(12, 8, 1e-14, 12).unwrap();
        let svd = SvdTriple::compute(&g).unwrap();
        assert!(svd.singular_values.windows(2).all(|w| w[0] >= w[1]));
        assert_eq!(svd.rank, 8);
        let dd = svd.left.adjoint() * &svd.left;
        let vv = svd.right.adjoint() * &svd.right;
        assert!(identity_error(&dd) < 1e-10);
        assert!(identity_error(&vv) < 1e-10);
        let (p, q) = svd_ideal_transceivers(&g, 4).unwrap();
        assert!(identity_error(&(&q * &g * &p)) < 1e-9);
    }

    #[test]
    fn rank_deficiency_is_reported() {
        let a = sample_rayleigh_channel(6, 2, 1.0, 13).unwrap();
        let b = sample_rayleigh_channel(2, 6, 1.0, 14).unwrap();
        let g = a * b;
        assert!(matches!(svd_ideal_transceivers(&g, 3), Err(Error::RankDeficient { rank: 2, streams: 3 })));
        assert!(svd_ideal_transceivers(&g, 2).is_ok());
    }

    #[test]
    fn zf_examples() {
        let zf = zf_precoder(&ComplexMatrix::identity(4, 4), 4.0).unwrap();
        assert!(identity_error(&zf.precoder) < 1e-14);
        let g = ComplexMatrix::identity(3, 3) * Complex64::from(2.0);
        let pt = 0.7;
        let zf = zf_precoder(&g, pt).unwrap();
        assert!((zf.gain - (4.0 * pt / 3.0f64).sqrt()).abs() < 1e-14);
    }

    #[test]
    fn zf_random_channel() {
        let g = sample_rayleigh_channel(4, 4, 1.0, 15).unwrap();
        let pt = 0.1;
        let zf = zf_precoder(&g, pt).unwrap();
        let eff = &g * &zf.precoder;
        let target = ComplexMatrix::identity(4, 4) * Complex64::from(zf.gain);
        assert!((eff - target).norm() < 1e-10 * zf.gain);
        assert!((zf.precoder.norm_squared() - pt).abs() < 1e-10 * pt);
    }

    #[test]
    fn zf_rejects_singular_and_rectangular() {
        assert!(zf_precoder(&ComplexMatrix::zeros(2, 2), 1.0).is_err());
        assert!(zf_precoder(&ComplexMatrix::identity(2, 3), 1.0).is_err());
    }

    #[test]
    fn zf_capacity_formula() {
        assert!((zf_capacity(1.0, 1.0, 3) - 3.0).abs() < 1e-15);
    }
}
