//! Plane-wave scattering on the 1D defect lattice (closed-form and numeric),
//! bound-state pole extraction from the transmission cubic, and the
//! bound-state energies and phase boundaries of the Lee model.
//!
//! Scattering states on a homogeneous lead with hopping kappa disperse as
//! E = 2 kappa cos(q) with Bloch wavenumber q in (0, pi). The incident wave is
//! exp(-i q n) + r exp(i q n) on the left lead, t exp(-i q n) on the right.

use crate::error::{Error, Result};
use crate::network::DefectChainParams;
use crate::numerics::{self, C64, CMatrix, CVector, ONE};
use crate::reduction::RESONANCE_TOL;

/// Bound-state root filter: keep |y| > 1 + this slack, rejecting marginal
/// band-edge roots.
pub const POLE_FILTER_TOL: f64 = 1e-9;

/// One sampled point of the scattering problem.
#[derive(Debug, Clone, Copy)]
pub struct ScatteringPoint {
    /// Bloch wavenumber in (0, pi).
    pub q: f64,
    /// Lead energy 2 kappa cos(q).
    pub energy: f64,
    pub t: C64,
    pub r: C64,
}

/// A pole of the spectral transmission with |y| > 1, i.e. a bound state at
/// energy E = kappa (y + 1/y).
#[derive(Debug, Clone, Copy)]
pub struct BoundStatePole {
    pub y: C64,
    pub energy: C64,
}

/// Closed-form transmission and reflection of the side-coupled defect.
///
/// Both coefficients are evaluated in the multiplied-through form in which
/// the optical-potential denominator (E - U) has been cleared, so the only
/// guarded configuration is an essentially exact hit on the auxiliary level.
pub fn defect_transmission(p: &DefectChainParams, q: f64) -> Result<ScatteringPoint> {
    assert!(q > 0.0 && q < std::f64::consts::PI, "q must lie in (0, pi)");
    let kappa = p.kappa;
    let e = 2.0 * kappa * q.cos();
    let eu = C64::new(e, 0.0) - p.u_aux;
    let omega_sq = p.omega * p.omega;
    if omega_sq != 0.0 {
        let scale = p.u_aux.norm().max(e.abs()).max(1.0);
        if eu.norm() < RESONANCE_TOL * scale {
            return Err(Error::ResonantEnergy { energy: C64::new(e, 0.0) });
        }
    }
    let phase = C64::from_polar(1.0, q); // exp(iq)
    let sin_q = q.sin();
    let a = kappa * phase - C64::new(p.sigma - p.theta, 0.0); // kappa e^{iq} - sigma + theta
    let b = kappa * phase - C64::new(p.sigma + p.theta, 0.0); // kappa e^{iq} - sigma - theta
    let den = a * (eu * b - 2.0 * omega_sq);
    if den.norm() == 0.0 {
        return Err(Error::SingularScatteringSystem);
    }
    let t = 2.0 * kappa * sin_q * C64::i() * (p.theta * eu + omega_sq) * phase / den;
    let r_num = 2.0 * kappa * sin_q * C64::i() * (eu * (kappa * phase - p.sigma) - omega_sq);
    let r = r_num / den - ONE;
    Ok(ScatteringPoint { q, energy: e, t, r })
}

/// Row builder for the effective infinite defect lattice: homogeneous chain
/// with the 0-1 block renormalized to theta'(E), sigma'(E). Feeds
/// [`scattering_numeric`].
pub fn defect_effective_rows(p: &DefectChainParams) -> impl Fn(i64, C64) -> Vec<(i64, C64)> + '_ {
    move |n: i64, e: C64| {
        let w = C64::new(p.omega * p.omega, 0.0) / (e - p.u_aux);
        let bond = |m: i64| -> C64 {
            // amplitude of bond (m-1, m)
            if m == 1 {
                C64::new(p.theta, 0.0) + w
            } else {
                C64::new(p.kappa, 0.0)
            }
        };
        let diag = if n == 0 || n == 1 { C64::new(p.sigma, 0.0) + w } else { C64::new(0.0, 0.0) };
        vec![(n - 1, bond(n)), (n, diag), (n + 1, bond(n + 1))]
    }
}

/// Numerical scattering oracle: impose the plane-wave ansatz outside a
/// truncated interior window [-n_interior, n_interior] and solve the linear
/// system for r, t, and the interior amplitudes.
///
/// `rows(n, E)` must return the nonzero entries (m, H_eff[n, m]) of row n of
/// the infinite effective lattice; rows outside the window must be
/// asymptotically homogeneous with lead hopping `kappa`.
pub fn scattering_numeric<F>(rows: F, q: f64, n_interior: usize, kappa: f64) -> Result<ScatteringPoint>
where
    F: Fn(i64, C64) -> Vec<(i64, C64)>,
{
    assert!(q > 0.0 && q < std::f64::consts::PI, "q must lie in (0, pi)");
    assert!(n_interior >= 2, "interior window too small");
    let e_real = 2.0 * kappa * q.cos();
    let e = C64::new(e_real, 0.0);
    let l = n_interior as i64;
    let dim = 2 * n_interior + 3;
    let mut mat = CMatrix::zeros((dim, dim));
    let mut rhs = CVector::zeros(dim);

    let inc = |m: i64| C64::from_polar(1.0, -q * m as f64);
    let refl = |m: i64| C64::from_polar(1.0, q * m as f64);
    let idx = |m: i64| (2 + m + l) as usize;

    // Accumulate coeff * c_m into equation `eq`, resolving c_m through the
    // ansatz when m lies outside the interior window.
    let mut add = |mat: &mut CMatrix, rhs: &mut CVector, eq: usize, m: i64, coeff: C64| {
        if m < -l {
            rhs[eq] -= coeff * inc(m);
            mat[(eq, 0)] += coeff * refl(m);
        } else if m > l {
            mat[(eq, 1)] += coeff * inc(m);
        } else {
            mat[(eq, idx(m))] += coeff;
        }
    };

    for (eq, n) in (-l - 1..=l + 1).enumerate() {
        for (m, h) in rows(n, e) {
            if h.norm_sqr() != 0.0 {
                add(&mut mat, &mut rhs, eq, m, h);
            }
        }
        add(&mut mat, &mut rhs, eq, n, -e);
    }
    let x = numerics::solve_linear(&mat, &rhs).map_err(|err| match err {
        Error::SingularMatrix { .. } => Error::SingularScatteringSystem,
        other => other,
    })?;
    Ok(ScatteringPoint { q, energy: e_real, t: x[1], r: x[0] })
}

/// Bound-state poles of the invisibility-tuned defect: roots of
/// y^3 + (1 - U/k - 2th/k) y^2 + (1 + U/k) y + (1 - 2th/k) = 0 with |y| > 1.
///
/// For U < 0 and 0 <= theta < kappa there is exactly one such root when
/// U < -2 theta, and none otherwise. The count exactly at U = -2 theta is
/// reported as filtered, without asserting a convention.
pub fn bound_state_poles(u: f64, theta: f64, kappa: f64) -> Result<Vec<BoundStatePole>> {
    assert!(kappa > 0.0, "kappa must be positive");
    let (ur, tr) = (u / kappa, theta / kappa);
    let coeffs = [
        ONE,
        C64::new(1.0 - ur - 2.0 * tr, 0.0),
        C64::new(1.0 + ur, 0.0),
        C64::new(1.0 - 2.0 * tr, 0.0),
    ];
    let roots = numerics::poly_roots(&coeffs)?;
    Ok(roots
        .into_iter()
        .filter(|y| y.norm() > 1.0 + POLE_FILTER_TOL)
        .map(|y| BoundStatePole { y, energy: kappa * (y + y.inv()) })
        .collect())
}

/// Bound-state energies of the Lee model with coupling g = -iG: the
/// "physical" particle state E1 and the ghost E2. Both are real when
/// (sigma/2)^2 >= G^2 + 1; the principal square root is used below that,
/// and the two formulas differ only in the sign in front of the root.
pub fn lee_bound_energies(sigma: f64, g: f64, kappa: f64) -> (C64, C64) {
    let s = sigma / kappa / 2.0;
    let gg = g / kappa;
    let root = C64::new(s * s - gg * gg - 1.0, 0.0).sqrt();
    let one_plus = 1.0 + gg * gg;
    let branch = |sgn: f64| -> C64 {
        let base = C64::new(s, 0.0) + sgn * root;
        kappa * (base * base + one_plus * one_plus) / (one_plus * base)
    };
    (branch(1.0), branch(-1.0))
}

/// Classification of the Lee phase diagram at fixed sigma.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LeeRegion {
    /// Below curve 1: a single bound state (the physical particle).
    OneBoundState,
    /// Between the curves: physical particle plus ghost.
    TwoBoundStates,
    /// Above curve 2: broken PT phase.
    BrokenPt,
}

/// Analytic phase-boundary couplings at fixed sigma:
/// curve 1 G1 = kappa sqrt(sigma/kappa - 2), curve 2
/// G2 = kappa sqrt((sigma/2kappa)^2 - 1). Real for sigma >= 2 kappa.
pub fn lee_phase_boundaries(sigma: f64, kappa: f64) -> Result<(f64, f64)> {
    let s = sigma / kappa;
    if s < 2.0 {
        return Err(Error::DomainError(format!(
            "phase boundaries need sigma/kappa >= 2, got {s}"
        )));
    }
    let g1 = kappa * (s - 2.0).sqrt();
    let g2 = kappa * ((s / 2.0) * (s / 2.0) - 1.0).sqrt();
    Ok((g1, g2))
}

/// Locate (sigma, G) in the Lee phase diagram.
pub fn lee_region(sigma: f64, g: f64, kappa: f64) -> Result<LeeRegion> {
    let (g1, g2) = lee_phase_boundaries(sigma, kappa)?;
    Ok(if g < g1 {
        LeeRegion::OneBoundState
    } else if g <= g2 {
        LeeRegion::TwoBoundStates
    } else {
        LeeRegion::BrokenPt
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::{self, DefectChainParams, LeeParams};
    use crate::numerics::ZERO;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn homogeneous() -> DefectChainParams {
        DefectChainParams {
            kappa: 1.0,
            theta: 1.0,
            sigma: 0.0,
            omega: 0.0,
            u_aux: c(-5.0, 0.0),
            n_trunc: 20,
        }
    }

    #[test]
    fn homogeneous_chain_is_transparent() {
        let p = homogeneous();
        for k in 1..30 {
            let q = 0.1 * k as f64;
            let sp = defect_transmission(&p, q).unwrap();
            assert!((sp.t - ONE).norm() < 1e-12, "t != 1 at q = {q}");
            assert!(sp.r.norm() < 1e-12, "r != 0 at q = {q}");
        }
    }

    #[test]
    fn band_center_exactly_transparent_under_tuning() {
        // At E = 0 the tuned defect renormalizes to the homogeneous chain
        // exactly, for any finite U < 0.
        for u in [-0.9, -5.0, -40.0] {
            let p = DefectChainParams::with_invisibility_tuning(1.0, 0.2, u, 20);
            let sp = defect_transmission(&p, std::f64::consts::FRAC_PI_2).unwrap();
            assert!(sp.energy.abs() < 1e-15);
            assert!((sp.t - ONE).norm() < 1e-12, "U = {u}: t = {}", sp.t);
            assert!(sp.r.norm() < 1e-12);
        }
    }

    #[test]
    fn unitarity_for_real_auxiliary() {
        let p = DefectChainParams {
            n_trunc: 20,
            ..DefectChainParams::default()
        };
        for k in 1..31 {
            let q = 0.1 * k as f64;
            let sp = defect_transmission(&p, q).unwrap();
            let flux = sp.t.norm_sqr() + sp.r.norm_sqr();
            assert!((flux - 1.0).abs() < 1e-10, "flux {flux} at q = {q}");
        }
    }

    #[test]
    fn numeric_oracle_matches_closed_form() {
        let p = DefectChainParams {
            n_trunc: 20,
            ..DefectChainParams::default()
        };
        let rows = defect_effective_rows(&p);
        for k in 1..31 {
            let q = 0.1 * k as f64;
            let closed = defect_transmission(&p, q).unwrap();
            let numeric = scattering_numeric(&rows, q, 6, p.kappa).unwrap();
            assert!((closed.t - numeric.t).norm() < 1e-10, "t mismatch at q = {q}");
            assert!((closed.r - numeric.r).norm() < 1e-10, "r mismatch at q = {q}");
        }
    }

    #[test]
    fn numeric_oracle_homogeneous() {
        let p = homogeneous();
        let rows = defect_effective_rows(&p);
        let sp = scattering_numeric(&rows, 1.3, 5, 1.0).unwrap();
        assert!((sp.t - ONE).norm() < 1e-12);
        assert!(sp.r.norm() < 1e-12);
    }

    #[test]
    fn complex_auxiliary_breaks_unitarity() {
        // A dissipative auxiliary site removes flux: |t|^2 + |r|^2 < 1.
        let p = DefectChainParams {
            u_aux: c(-5.0, -1.0),
            ..DefectChainParams { n_trunc: 20, ..DefectChainParams::default() }
        };
        let sp = defect_transmission(&p, 1.0).unwrap();
        let flux = sp.t.norm_sqr() + sp.r.norm_sqr();
        assert!(flux < 1.0 - 1e-3, "expected sub-unitary flux, got {flux}");
    }

    #[test]
    fn single_pole_for_deep_auxiliary_level() {
        let poles = bound_state_poles(-5.0, 0.2, 1.0).unwrap();
        assert_eq!(poles.len(), 1);
        let p = &poles[0];
        assert!((p.y - c(-6.2534, 0.0)).norm() < 1e-3);
        assert!((p.energy - c(-6.4133, 0.0)).norm() < 1e-3);
        // E = kappa (y + 1/y) by construction; cubic residual small.
        let coeffs = [ONE, c(5.6, 0.0), c(-4.0, 0.0), c(0.6, 0.0)];
        assert!(numerics::poly_eval(&coeffs, p.y).norm() < 1e-10);
    }

    #[test]
    fn no_pole_for_shallow_auxiliary_level() {
        // U > -2 theta: no acceptable |y| > 1 root.
        let poles = bound_state_poles(-0.3, 0.2, 1.0).unwrap();
        assert!(poles.is_empty(), "got {poles:?}");
    }

    #[test]
    fn pole_boundary_theta_zero() {
        // theta = 0, U = -kappa: count determined by the |y| > 1 filter alone.
        let poles = bound_state_poles(-1.0, 0.0, 1.0).unwrap();
        for p in &poles {
            assert!(p.y.norm() > 1.0 + POLE_FILTER_TOL);
        }
        // U < -2*theta = 0 holds, so exactly one bound state is expected.
        assert_eq!(poles.len(), 1);
    }

    #[test]
    fn pole_energy_matches_truncated_composite() {
        // The |y| > 1 pole is an eigenvalue of the side-coupled chain.
        let p = DefectChainParams::with_invisibility_tuning(1.0, 0.2, -5.0, 60);
        let poles = bound_state_poles(-5.0, 0.2, 1.0).unwrap();
        let e_pole = poles[0].energy;
        let h = network::build_defect_chain(&p).assemble_composite();
        let eig = numerics::eig_dense(&h).unwrap();
        let nearest = eig
            .values
            .iter()
            .map(|l| (l - e_pole).norm())
            .fold(f64::INFINITY, f64::min);
        assert!(nearest < 1e-8, "pole energy off by {nearest:.3e}");
    }

    #[test]
    fn lee_energies_decoupled_limit() {
        let (e1, _e2) = lee_bound_energies(3.0, 0.0, 1.0);
        assert!((e1 - c(3.0, 0.0)).norm() < 1e-13);
    }

    #[test]
    fn lee_energies_ghost_regime() {
        let (e1, e2) = lee_bound_energies(3.0, 1.05, 1.0);
        assert!((e1 - c(2.0120, 0.0)).norm() < 5e-4, "E1 = {e1}");
        assert!((e2 - c(2.4148, 0.0)).norm() < 5e-4, "E2 = {e2}");
        assert!(e1.im.abs() < 1e-14 && e2.im.abs() < 1e-14);
    }

    #[test]
    fn lee_energies_coalesce_on_curve_two() {
        let g = (1.25f64).sqrt(); // (sigma/2)^2 - 1 at sigma = 3
        let (e1, e2) = lee_bound_energies(3.0, g, 1.0);
        assert!((e1 - e2).norm() < 1e-12, "E1 = {e1}, E2 = {e2}");
    }

    #[test]
    fn lee_energies_match_truncated_spectrum() {
        // Oracle: isolated real eigenvalues above the band of the truncated
        // Lee matrix.
        let p = LeeParams { n_trunc: 300, ..LeeParams::default() };
        let h = network::build_lee_exact(&p);
        let eig = numerics::eig_dense(&h).unwrap();
        let (e1, e2) = lee_bound_energies(p.sigma, p.g_imag, p.kappa);
        for want in [e1, e2] {
            let nearest = eig
                .values
                .iter()
                .map(|l| (l - want).norm())
                .fold(f64::INFINITY, f64::min);
            assert!(nearest < 1e-9, "bound energy {want} off by {nearest:.3e}");
        }
        // Both sit above the band edge 2 kappa.
        assert!(e1.re > 2.0 && e2.re > 2.0);
    }

    #[test]
    fn phase_boundaries_corner_and_paper_points() {
        let (g1, g2) = lee_phase_boundaries(2.0, 1.0).unwrap();
        assert!(g1.abs() < 1e-15 && g2.abs() < 1e-15);
        let (g1, g2) = lee_phase_boundaries(3.0, 1.0).unwrap();
        assert!((g1 - 1.0).abs() < 1e-15);
        assert!((g2 - 1.25f64.sqrt()).abs() < 1e-15);
        assert_eq!(lee_region(3.0, 1.05, 1.0).unwrap(), LeeRegion::TwoBoundStates);
        let (g1, g2) = lee_phase_boundaries(6.0, 1.0).unwrap();
        assert!((g1 - 2.0).abs() < 1e-15);
        assert!((g2 - 8.0f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn phase_boundaries_reject_small_sigma() {
        assert!(lee_phase_boundaries(1.5, 1.0).is_err());
    }

    #[test]
    fn lee_region_classification() {
        assert_eq!(lee_region(3.0, 0.3, 1.0).unwrap(), LeeRegion::OneBoundState);
        assert_eq!(lee_region(3.0, 1.2, 1.0).unwrap(), LeeRegion::BrokenPt);
    }

    #[test]
    fn resonant_energy_guard() {
        // Real U inside the band with omega != 0: reject an essentially exact hit.
        let p = DefectChainParams {
            u_aux: ZERO,
            ..DefectChainParams { n_trunc: 20, ..DefectChainParams::default() }
        };
        let q = std::f64::consts::FRAC_PI_2; // E = 0 = U
        assert!(matches!(
            defect_transmission(&p, q),
            Err(Error::ResonantEnergy { .. })
        ));
    }
}
