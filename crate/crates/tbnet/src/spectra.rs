//! Finite-lattice diagnostics: spectra with participation ratios, the
//! PT-breaking threshold scan, and construction/verification of the
//! algebraically localized bound state in the continuum.

use crate::error::{Error, Result};
use crate::network::PtBicParams;
use crate::numerics::{self, C64, CMatrix, CVector};

/// Imaginary parts below this (in units of the energy scale) are attributed
/// to eigensolver noise when deciding PT reality; the observed noise floor on
/// Hermitian test matrices is several orders below it.
pub const EPS_IMAG_DEFAULT: f64 = 1e-6;

/// Default bisection resolution of the threshold scan.
pub const THRESHOLD_RESOLUTION: f64 = 1e-3;

/// Eigendecomposition summary of a finite lattice.
#[derive(Debug, Clone)]
pub struct SpectrumReport {
    /// Eigenvalues sorted by real part, then imaginary part.
    pub energies: CVector,
    /// Participation ratio of the right eigenvector paired with each energy.
    pub participation: Vec<f64>,
    /// Largest |Im E| over the spectrum; ~0 in an unbroken PT phase.
    pub max_abs_imag: f64,
    pub n_sites: usize,
}

/// Participation ratio R = (sum |c_n|^2)^2 / sum |c_n|^4.
///
/// Scale-invariant; R ~ 1 for localized modes and R ~ N for extended ones.
pub fn participation_ratio(v: &CVector) -> Result<f64> {
    let s2: f64 = v.iter().map(|z| z.norm_sqr()).sum();
    let s4: f64 = v.iter().map(|z| z.norm_sqr() * z.norm_sqr()).sum();
    if s2 <= 0.0 || s4 <= 0.0 {
        return Err(Error::ZeroVector);
    }
    Ok(s2 * s2 / s4)
}

/// Full eigendecomposition with per-mode participation ratios.
pub fn spectrum(h: &CMatrix) -> Result<SpectrumReport> {
    let eig = numerics::eig_dense(h)?;
    let n = h.nrows();
    let mut participation = Vec::with_capacity(n);
    for k in 0..n {
        participation.push(participation_ratio(&eig.right_vectors.column(k).to_owned())?);
    }
    let max_abs_imag = eig.values.iter().map(|z| z.im.abs()).fold(0.0, f64::max);
    Ok(SpectrumReport { energies: eig.values, participation, max_abs_imag, n_sites: n })
}

fn i_pow(k: i64) -> C64 {
    match k.rem_euclid(4) {
        0 => C64::new(1.0, 0.0),
        1 => C64::new(0.0, 1.0),
        2 => C64::new(-1.0, 0.0),
        _ => C64::new(0.0, -1.0),
    }
}

/// The zero-energy BIC amplitudes over sites -n_half..=n_half:
/// c_n = 0 on odd sites, c_0 = kappa/g, and
/// c_n = sign(n) i^{n+1} / sqrt(n^2 - 1) on even n != 0 (algebraic 1/n tail).
pub fn bic_state(g: f64, n_half: usize, kappa: f64) -> CVector {
    assert!(g != 0.0, "g must be nonzero");
    let n = 2 * n_half + 1;
    let mut c = CVector::zeros(n);
    c[n_half] = C64::new(kappa / g, 0.0);
    for site in 1..=n_half as i64 {
        for m in [site, -site] {
            if m.rem_euclid(2) == 0 {
                let mag = 1.0 / ((m * m - 1) as f64).sqrt();
                c[(m + n_half as i64) as usize] = m.signum() as f64 * i_pow(m + 1) * mag;
            }
        }
    }
    c
}

/// Embed the analytic BIC into the composite lattice (N system sites plus the
/// two auxiliary sites): the S part is [`bic_state`] with g = omega^2/U and
/// the auxiliary amplitudes follow from back-substitution at E = 0,
/// a_1 = -i kappa / omega, a_2 = +i kappa / omega.
pub fn embed_bic_composite(p: &PtBicParams) -> CVector {
    assert!(p.u_aux != 0.0, "U must be nonzero");
    assert!(p.omega != 0.0, "omega must be nonzero");
    let g = p.omega * p.omega / p.u_aux;
    let s_part = bic_state(g, p.n_half(), p.kappa);
    let n = s_part.len();
    let mut psi = CVector::zeros(n + 2);
    psi.slice_mut(ndarray::s![..n]).assign(&s_part);
    psi[n] = C64::new(0.0, -p.kappa / p.omega);
    psi[n + 1] = C64::new(0.0, p.kappa / p.omega);
    psi
}

/// Residual of the embedded BIC against the assembled composite at E = 0,
/// split into the interior part and the truncation tail.
#[derive(Debug, Clone, Copy)]
pub struct BicResidual {
    /// ||(H psi)|| / ||psi|| over all rows except the two outermost S sites.
    pub interior: f64,
    /// Contribution of the two outermost S rows; bounded by the 1/n decay of
    /// the BIC tail and shrinks as 1/N under N-doubling.
    pub boundary: f64,
}

/// Apply the assembled composite to the embedded analytic BIC and report the
/// interior and boundary-tail residuals separately.
pub fn verify_bic(p: &PtBicParams) -> BicResidual {
    let net = crate::network::build_pt_bic(p);
    let h = net.assemble_composite();
    let psi = embed_bic_composite(p);
    let resid = h.dot(&psi); // eigenvalue 0: residual is H psi itself
    let norm = numerics::vec_norm(&psi);
    let n = net.n_sys();
    let mut interior = 0.0;
    let mut boundary = 0.0;
    for (i, z) in resid.iter().enumerate() {
        if i == 0 || i == n - 1 {
            boundary += z.norm_sqr();
        } else {
            interior += z.norm_sqr();
        }
    }
    BicResidual { interior: interior.sqrt() / norm, boundary: boundary.sqrt() / norm }
}

/// Bisect for the smallest `u` in `u_range` where the spectrum of
/// `build(u)` acquires an imaginary part above `eps_imag`.
///
/// `build` must return the full (composite) matrix to diagonalize. The range
/// must bracket the transition; the estimate is refined to `resolution`.
pub fn pt_threshold_scan<F>(
    build: F,
    u_range: (f64, f64),
    eps_imag: f64,
    resolution: f64,
) -> Result<f64>
where
    F: Fn(f64) -> CMatrix,
{
    let max_imag = |u: f64| -> Result<f64> {
        let eig = numerics::eig_dense(&build(u))?;
        Ok(eig.values.iter().map(|z| z.im.abs()).fold(0.0, f64::max))
    };
    let (mut lo, mut hi) = u_range;
    assert!(lo < hi, "empty scan range");
    if !(max_imag(lo)? <= eps_imag && max_imag(hi)? > eps_imag) {
        return Err(Error::NoBracket);
    }
    while hi - lo > resolution {
        let mid = 0.5 * (lo + hi);
        if max_imag(mid)? > eps_imag {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network;
    use ndarray::array;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn participation_localized_uniform_pair() {
        let delta = array![c(0.0, 0.0), c(0.7, 0.0), c(0.0, 0.0)];
        assert!((participation_ratio(&delta).unwrap() - 1.0).abs() < 1e-14);
        let n = 17;
        let uniform = CVector::from_elem(n, c(0.3, 0.4));
        assert!((participation_ratio(&uniform).unwrap() - n as f64).abs() < 1e-10);
        let pair = array![c(0.5, 0.0), c(0.0, -0.5), c(0.0, 0.0)];
        assert!((participation_ratio(&pair).unwrap() - 2.0).abs() < 1e-14);
    }

    #[test]
    fn participation_scale_invariant_and_zero_rejected() {
        let v = array![c(0.3, 0.1), c(-0.2, 0.8), c(0.05, 0.0)];
        let r1 = participation_ratio(&v).unwrap();
        let r2 = participation_ratio(&v.mapv(|z| 3.7 * z)).unwrap();
        assert!((r1 - r2).abs() < 1e-12);
        assert!(matches!(
            participation_ratio(&CVector::zeros(4)),
            Err(Error::ZeroVector)
        ));
    }

    #[test]
    fn homogeneous_chain_cosine_ladder() {
        // Open chain of N sites: E_k = 2 kappa cos(k pi / (N+1)).
        let n = 40;
        let mut h = CMatrix::zeros((n, n));
        for i in 0..n - 1 {
            h[(i, i + 1)] = C64::new(1.0, 0.0);
            h[(i + 1, i)] = C64::new(1.0, 0.0);
        }
        let report = spectrum(&h).unwrap();
        let mut want: Vec<f64> = (1..=n)
            .map(|k| 2.0 * (k as f64 * std::f64::consts::PI / (n as f64 + 1.0)).cos())
            .collect();
        want.sort_by(f64::total_cmp);
        for (got, want) in report.energies.iter().zip(want.iter()) {
            assert!((got.re - want).abs() < 1e-9);
            assert!(got.im.abs() < 1e-12);
        }
        assert!(report.max_abs_imag < 1e-12);
        for r in &report.participation {
            assert!(*r >= 1.0 - 1e-9 && *r <= n as f64 + 1e-9);
        }
    }

    #[test]
    fn bic_state_entries() {
        let g = 2.5;
        let kappa = 1.0;
        let v = bic_state(g, 6, kappa);
        let at = |m: i64| v[(m + 6) as usize];
        assert_eq!(at(1), C64::new(0.0, 0.0));
        assert_eq!(at(-3), C64::new(0.0, 0.0));
        assert!((at(0) - c(kappa / g, 0.0)).norm() < 1e-15);
        // c_2 = i^3/sqrt(3) = -i/sqrt(3); c_{-2} = +i/sqrt(3).
        let inv_sqrt3 = 1.0 / 3.0f64.sqrt();
        assert!((at(2) - c(0.0, -inv_sqrt3)).norm() < 1e-15);
        assert!((at(-2) - c(0.0, inv_sqrt3)).norm() < 1e-15);
    }

    #[test]
    fn embedded_bic_aux_amplitudes() {
        let p = PtBicParams { n_trunc: 21, ..PtBicParams::default() };
        let psi = embed_bic_composite(&p);
        let n = p.n_trunc;
        assert!((psi[n] - c(0.0, -p.kappa / p.omega)).norm() < 1e-15);
        assert!((psi[n + 1] + psi[n]).norm() < 1e-15, "a2 = -a1");
    }

    #[test]
    fn bic_s_part_depends_on_g_only() {
        // Fixed g = omega^2/U: rescaling omega and U together leaves the
        // S-part unchanged, only the auxiliary amplitudes move.
        let p1 = PtBicParams { omega: 1.0, u_aux: 0.4, n_trunc: 21, kappa: 1.0 };
        let p2 = PtBicParams { omega: 2.0, u_aux: 1.6, n_trunc: 21, kappa: 1.0 };
        let psi1 = embed_bic_composite(&p1);
        let psi2 = embed_bic_composite(&p2);
        for i in 0..p1.n_trunc {
            assert!((psi1[i] - psi2[i]).norm() < 1e-15);
        }
        assert!((psi1[p1.n_trunc] - 2.0 * psi2[p2.n_trunc]).norm() < 1e-15);
    }

    #[test]
    fn bic_residual_small_interior() {
        let p = PtBicParams { n_trunc: 403, ..PtBicParams::default() };
        let res = verify_bic(&p);
        assert!(res.interior < 1e-10, "interior residual {:.3e}", res.interior);
        // tail ~ kappa / n_half within a factor of a few
        assert!(res.boundary < 10.0 / p.n_half() as f64);
    }

    #[test]
    fn bic_boundary_tail_halves_under_doubling() {
        let r1 = verify_bic(&PtBicParams { n_trunc: 403, ..PtBicParams::default() });
        let r2 = verify_bic(&PtBicParams { n_trunc: 807, ..PtBicParams::default() });
        let ratio = r1.boundary / r2.boundary;
        assert!(
            (1.6..2.4).contains(&ratio),
            "tail ratio {ratio:.3} not ~2 (r1 = {:.3e}, r2 = {:.3e})",
            r1.boundary,
            r2.boundary
        );
    }

    #[test]
    fn threshold_scan_brackets() {
        // Tiny PT dimer: H = [[i u, 1], [1, -i u]] breaks at u = 1.
        let build = |u: f64| array![[c(0.0, u), c(1.0, 0.0)], [c(1.0, 0.0), c(0.0, -u)]];
        let th = pt_threshold_scan(build, (0.5, 1.5), 1e-9, 1e-4).unwrap();
        assert!((th - 1.0).abs() < 1e-3, "threshold {th}");
    }

    #[test]
    fn threshold_scan_rejects_bad_bracket() {
        let build = |u: f64| array![[c(0.0, u), c(1.0, 0.0)], [c(1.0, 0.0), c(0.0, -u)]];
        assert!(matches!(
            pt_threshold_scan(build, (2.0, 3.0), 1e-9, 1e-4),
            Err(Error::NoBracket)
        ));
    }

    #[test]
    fn pt_pairing_of_composite_spectrum() {
        // Eigenvalue multiset closed under conjugation, above and below threshold.
        for u in [0.3, 0.7] {
            let p = PtBicParams { n_trunc: 41, u_aux: u, ..PtBicParams::default() };
            let h = network::build_pt_bic(&p).assemble_composite();
            let report = spectrum(&h).unwrap();
            for e in report.energies.iter() {
                let conj = e.conj();
                let nearest = report
                    .energies
                    .iter()
                    .map(|f| (f - conj).norm())
                    .fold(f64::INFINITY, f64::min);
                assert!(nearest < 1e-9, "conjugate of {e} missing (dist {nearest:.2e})");
            }
        }
    }
}
