//! Effective-Hamiltonian machinery: exact energy-dependent elimination of the
//! auxiliary cluster, the large-potential energy-independent limit, inverse
//! synthesis of a single bond, and the weak-coupling Markovian reduction.

use crate::error::{Error, Result};
use crate::network::PartitionedHamiltonian;
use crate::numerics::{self, C64, CMatrix, CVector};

/// Relative guard around auxiliary eigenvalues: energies closer than
/// `RESONANCE_TOL * scale` raise `ResonantEnergy` instead of returning a
/// huge optical potential.
pub const RESONANCE_TOL: f64 = 1e-8;

/// Which reduction an [`EffectiveOperator`] evaluates.
#[derive(Debug, Clone, Copy)]
pub enum ReductionKind {
    /// Exact elimination at a fixed energy: H_S + rho^T (E - H_A)^{-1} rho.
    Exact(C64),
    /// Energy-independent limit for large auxiliary potentials:
    /// H_S - rho^T H_A^{-1} rho.
    LargePotential,
    /// Weak-coupling Markovian reduction: H_S + Phi.
    Markov,
}

/// An energy-parameterized effective Hamiltonian over a partitioned network.
#[derive(Debug, Clone, Copy)]
pub struct EffectiveOperator<'a> {
    pub base: &'a PartitionedHamiltonian,
    pub kind: ReductionKind,
}

impl EffectiveOperator<'_> {
    /// Evaluate to an N x N complex-symmetric matrix.
    pub fn evaluate(&self) -> Result<CMatrix> {
        match self.kind {
            ReductionKind::Exact(e) => effective_hamiltonian(self.base, e),
            ReductionKind::LargePotential => large_potential_effective(self.base),
            ReductionKind::Markov => markov_effective(self.base),
        }
    }
}

/// Eigenvalues of the auxiliary block, sorted by (re, im).
pub fn aux_eigenvalues(p: &PartitionedHamiltonian) -> Result<CVector> {
    Ok(numerics::eig_dense(&p.h_a)?.values)
}

fn resonance_guard(p: &PartitionedHamiltonian, e: C64) -> Result<()> {
    let eigs = aux_eigenvalues(p)?;
    let scale = numerics::norm_inf(&p.h_a).max(e.norm()).max(1.0);
    for lam in eigs.iter() {
        if (e - lam).norm() < RESONANCE_TOL * scale {
            return Err(Error::ResonantEnergy { energy: e });
        }
    }
    Ok(())
}

/// Exact elimination of the auxiliary amplitudes at energy `e`:
/// H_eff(E) = H_S + rho^T (E - H_A)^{-1} rho.
///
/// The second term is the energy-dependent "optical potential"; it
/// renormalizes both hoppings and site potentials of S and is complex
/// symmetric for any E.
pub fn effective_hamiltonian(p: &PartitionedHamiltonian, e: C64) -> Result<CMatrix> {
    resonance_guard(p, e)?;
    let m = p.m_aux();
    let mut shifted = -&p.h_a;
    for i in 0..m {
        shifted[(i, i)] += e;
    }
    // X = (E - H_A)^{-1} rho, then H_S + rho^T X.
    let x = numerics::solve_linear_multi(&shifted, &p.rho)?;
    Ok(&p.h_s + &p.rho.t().dot(&x))
}

/// Energy-independent limit for auxiliary potentials much larger than the
/// energies of interest: H_S - rho^T H_A^{-1} rho. For diagonal H_A this is
/// the entrywise form H_S[n,m] - sum_a rho[a,n] rho[a,m] / H_A[a,a].
pub fn large_potential_effective(p: &PartitionedHamiltonian) -> Result<CMatrix> {
    let x = numerics::solve_linear_multi(&p.h_a, &p.rho).map_err(|e| match e {
        Error::SingularMatrix { .. } => Error::SingularAuxiliary,
        other => other,
    })?;
    Ok(&p.h_s - &p.rho.t().dot(&x))
}

/// Invert the single-bond engineering formula: the auxiliary on-site
/// potential U = rho_product / (existing - target) makes the large-potential
/// effective bond `existing - rho_product / U` equal `target`.
pub fn synthesize_bond(target: C64, existing: f64, rho_product: f64) -> Result<C64> {
    assert!(rho_product != 0.0, "rho_product must be nonzero");
    let diff = C64::new(existing, 0.0) - target;
    if diff.norm() <= 1e-14 * target.norm().max(existing.abs()).max(1.0) {
        return Err(Error::NoSynthesisNeeded);
    }
    Ok(C64::new(rho_product, 0.0) / diff)
}

fn require_hermitian_system(p: &PartitionedHamiltonian) -> Result<()> {
    let n = p.n_sys();
    let scale = numerics::max_abs(&p.h_s).max(1.0);
    for i in 0..n {
        if p.h_s[(i, i)].im.abs() > 1e-12 * scale {
            return Err(Error::DomainError(
                "weak-coupling reduction requires a Hermitian H_S".into(),
            ));
        }
    }
    if !p.validate().is_clean() {
        return Err(Error::DomainError(
            "weak-coupling reduction requires real symmetric couplings".into(),
        ));
    }
    Ok(())
}

/// The weak-coupling correction Phi = -i rho^T X, where X solves the
/// Sylvester equation H_A X - X H_S = -i rho.
///
/// X equals the convergent integral of exp(-i H_A tau) rho exp(i H_S tau)
/// over tau in [0, inf): the integral converges because every H_A eigenvalue
/// has a strictly negative imaginary part, and integrating by parts turns it
/// into the Sylvester identity. The direct quadrature is kept as a test
/// oracle only; the integrand decays slowly for weakly dissipative clusters.
pub fn weak_coupling_phi(p: &PartitionedHamiltonian) -> Result<CMatrix> {
    require_hermitian_system(p)?;
    let eigs = aux_eigenvalues(p)?;
    let scale = numerics::norm_inf(&p.h_a).max(1.0);
    for lam in eigs.iter() {
        if lam.im >= -1e-12 * scale {
            return Err(Error::NonDissipativeAuxiliary { eigenvalue: *lam });
        }
    }
    let c = p.rho.mapv(|z| C64::new(z.im, -z.re)); // -i rho
    let x = numerics::solve_sylvester(&p.h_a, &p.h_s, &c)?;
    let phi = p.rho.t().dot(&x);
    Ok(phi.mapv(|z| C64::new(z.im, -z.re))) // -i rho^T X
}

/// Markovian effective Hamiltonian H_S + Phi for a weakly coupled,
/// dissipative auxiliary cluster.
pub fn markov_effective(p: &PartitionedHamiltonian) -> Result<CMatrix> {
    Ok(&p.h_s + &weak_coupling_phi(p)?)
}

/// Dimensionless weak-coupling indicator ||rho||_F / gap(H_A), where the gap
/// is the smallest |Im| over auxiliary eigenvalues. The reduction does not
/// quantify "weak"; this ratio is reported for the caller to judge.
pub fn weak_coupling_ratio(p: &PartitionedHamiltonian) -> Result<f64> {
    let eigs = aux_eigenvalues(p)?;
    let gap = eigs.iter().map(|l| l.im.abs()).fold(f64::INFINITY, f64::min);
    if gap == 0.0 {
        return Err(Error::NonDissipativeAuxiliary { eigenvalue: eigs[0] });
    }
    Ok(numerics::frobenius(&p.rho) / gap)
}
