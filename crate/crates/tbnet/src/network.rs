//! Partitioned network model (main system S plus auxiliary cluster A) and
//! builders for the defect, Lee, and PT-BIC lattices.
//!
//! Conventions: the composite Hamiltonian is the block matrix
//! [[H_S, rho^T], [rho, H_A]]. Off-diagonal parts of H_S and H_A are real and
//! symmetric and every S-A coupling is real (no gauge fields); on-site
//! energies on either block may be complex. Lattices with signed site indices
//! store site n at row `offset + n`.

use crate::error::{Error, Result};
use crate::numerics::{C64, CMatrix};
use serde::{Deserialize, Serialize};

/// Numerical slack for the reality/symmetry constraint checks.
pub const VALIDATE_TOL: f64 = 1e-12;

/// The triple (H_S, H_A, rho) of a partitioned tight-binding network.
#[derive(Debug, Clone)]
pub struct PartitionedHamiltonian {
    /// N x N system block; real symmetric off-diagonal, complex diagonal allowed.
    pub h_s: CMatrix,
    /// M x M auxiliary block; real symmetric off-diagonal, complex diagonal allowed.
    pub h_a: CMatrix,
    /// M x N coupling block; real entries.
    pub rho: CMatrix,
    /// Storage row of lattice site n = 0 for builders with signed indices.
    pub offset: usize,
}

/// One constraint violation found by [`PartitionedHamiltonian::validate`].
#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    /// Off-diagonal entry pair (i, j)/(j, i) of a block differs.
    Asymmetric { block: &'static str, i: usize, j: usize },
    /// Off-diagonal entry of H_S or H_A has an imaginary part.
    ComplexOffDiagonal { block: &'static str, i: usize, j: usize },
    /// Coupling entry rho[(i, j)] has an imaginary part.
    ComplexCoupling { i: usize, j: usize },
}

/// Diagnostic result of the gauge-constraint check.
#[derive(Debug, Clone, Default)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }
}

impl PartitionedHamiltonian {
    pub fn n_sys(&self) -> usize {
        self.h_s.nrows()
    }

    pub fn m_aux(&self) -> usize {
        self.h_a.nrows()
    }

    /// Storage row of lattice site `n` (signed indexing).
    pub fn site_index(&self, n: i64) -> usize {
        let idx = self.offset as i64 + n;
        assert!(
            (0..self.n_sys() as i64).contains(&idx),
            "site {n} outside the truncated lattice"
        );
        idx as usize
    }

    /// Check the reality/symmetry constraints: symmetric real off-diagonals in
    /// H_S and H_A, real rho. Returns every violation with matrix indices.
    pub fn validate(&self) -> ValidationReport {
        let mut violations = Vec::new();
        let scale = crate::numerics::max_abs(&self.h_s)
            .max(crate::numerics::max_abs(&self.h_a))
            .max(crate::numerics::max_abs(&self.rho))
            .max(1.0);
        let tol = VALIDATE_TOL * scale;
        for (name, m) in [("h_s", &self.h_s), ("h_a", &self.h_a)] {
            let n = m.nrows();
            for i in 0..n {
                for j in 0..n {
                    if i == j {
                        continue;
                    }
                    if m[(i, j)].im.abs() > tol {
                        violations.push(Violation::ComplexOffDiagonal { block: name, i, j });
                    }
                    if i < j && (m[(i, j)] - m[(j, i)]).norm() > tol {
                        violations.push(Violation::Asymmetric { block: name, i, j });
                    }
                }
            }
        }
        for ((i, j), z) in self.rho.indexed_iter() {
            if z.im.abs() > tol {
                violations.push(Violation::ComplexCoupling { i, j });
            }
        }
        ValidationReport { violations }
    }

    /// The (N+M) x (N+M) composite block matrix [[H_S, rho^T], [rho, H_A]].
    pub fn assemble_composite(&self) -> CMatrix {
        let n = self.n_sys();
        let m = self.m_aux();
        let mut h = CMatrix::zeros((n + m, n + m));
        h.slice_mut(ndarray::s![..n, ..n]).assign(&self.h_s);
        h.slice_mut(ndarray::s![n.., n..]).assign(&self.h_a);
        for ((a, s), z) in self.rho.indexed_iter() {
            h[(n + a, s)] = *z;
            h[(s, n + a)] = *z;
        }
        h
    }

    /// Serialize to the versioned JSON document (triplet lists per block).
    pub fn to_json(&self) -> String {
        let doc = NetworkDoc::from(self);
        serde_json::to_string_pretty(&doc).expect("network serialization cannot fail")
    }

    /// Parse the versioned JSON document. Unknown keys and out-of-range
    /// indices are rejected.
    pub fn from_json(text: &str) -> Result<Self> {
        let doc: NetworkDoc = serde_json::from_str(text)
            .map_err(|e| Error::DomainError(format!("network document: {e}")))?;
        doc.into_partitioned()
    }
}

/// JSON schema (version 1): partition sizes plus sparse (i, j, re, im)
/// triplet lists for each block.
#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct NetworkDoc {
    schema_version: u32,
    n_sys: usize,
    m_aux: usize,
    #[serde(default)]
    offset: usize,
    h_s: Vec<(usize, usize, f64, f64)>,
    h_a: Vec<(usize, usize, f64, f64)>,
    rho: Vec<(usize, usize, f64, f64)>,
}

fn entries_of(m: &CMatrix) -> Vec<(usize, usize, f64, f64)> {
    let mut out: Vec<_> = m
        .indexed_iter()
        .filter(|(_, z)| z.norm_sqr() != 0.0)
        .map(|((i, j), z)| (i, j, z.re, z.im))
        .collect();
    out.sort_by_key(|&(i, j, _, _)| (i, j));
    out
}

impl From<&PartitionedHamiltonian> for NetworkDoc {
    fn from(p: &PartitionedHamiltonian) -> Self {
        NetworkDoc {
            schema_version: 1,
            n_sys: p.n_sys(),
            m_aux: p.m_aux(),
            offset: p.offset,
            h_s: entries_of(&p.h_s),
            h_a: entries_of(&p.h_a),
            rho: entries_of(&p.rho),
        }
    }
}

impl NetworkDoc {
    fn into_partitioned(self) -> Result<PartitionedHamiltonian> {
        if self.schema_version != 1 {
            return Err(Error::DomainError(format!(
                "unsupported network schema_version {}",
                self.schema_version
            )));
        }
        if self.n_sys == 0 || self.m_aux == 0 {
            return Err(Error::DomainError(
                "network document: n_sys and m_aux must be positive".into(),
            ));
        }
        let fill = |rows: usize, cols: usize, list: &[(usize, usize, f64, f64)], name: &str| {
            let mut m = CMatrix::zeros((rows, cols));
            for &(i, j, re, im) in list {
                if i >= rows || j >= cols {
                    return Err(Error::DomainError(format!(
                        "network document: {name} entry ({i}, {j}) outside {rows}x{cols}"
                    )));
                }
                m[(i, j)] = C64::new(re, im);
            }
            Ok(m)
        };
        Ok(PartitionedHamiltonian {
            h_s: fill(self.n_sys, self.n_sys, &self.h_s, "h_s")?,
            h_a: fill(self.m_aux, self.m_aux, &self.h_a, "h_a")?,
            rho: fill(self.m_aux, self.n_sys, &self.rho, "rho")?,
            offset: self.offset,
        })
    }
}

/// Parameters of the side-coupled defect chain. The main lattice is a
/// homogeneous chain with hopping `kappa`, a defective bond `theta` between
/// sites 0 and 1, potential `sigma` on both defect sites, and one auxiliary
/// site at potential `u_aux` coupled by `omega` to sites 0 and 1.
#[derive(Debug, Clone, Copy)]
pub struct DefectChainParams {
    pub kappa: f64,
    pub theta: f64,
    pub sigma: f64,
    pub omega: f64,
    /// Auxiliary on-site potential; complex allowed, real in the invisible-defect setting.
    pub u_aux: C64,
    /// Truncation half-width: the chain keeps 2*n_trunc sites.
    pub n_trunc: usize,
}

impl DefectChainParams {
    /// Invisibility tuning: sigma = theta - kappa and omega^2 = U*(theta - kappa),
    /// which makes the large-|U| effective lattice exactly homogeneous.
    pub fn with_invisibility_tuning(kappa: f64, theta: f64, u: f64, n_trunc: usize) -> Self {
        let omega_sq = u * (theta - kappa);
        assert!(
            omega_sq >= 0.0,
            "invisibility tuning needs U*(theta - kappa) >= 0, got {omega_sq}"
        );
        DefectChainParams {
            kappa,
            theta,
            sigma: theta - kappa,
            omega: omega_sq.sqrt(),
            u_aux: C64::new(u, 0.0),
            n_trunc,
        }
    }

    fn check(&self) {
        assert!(self.kappa > 0.0, "kappa must be positive");
        assert!(self.n_trunc >= 10, "n_trunc must be at least 10");
    }
}

impl Default for DefectChainParams {
    /// Curve-1 operating point: theta/kappa = 0.2, U/kappa = -5 with
    /// invisibility tuning (sigma/kappa = -0.8, omega/kappa = 2).
    fn default() -> Self {
        DefectChainParams::with_invisibility_tuning(1.0, 0.2, -5.0, 200)
    }
}

/// Parameters of the Lee (Fano-Anderson) chain with imaginary coupling
/// g = -iG between the terminal node and a semi-infinite lattice.
#[derive(Debug, Clone, Copy)]
pub struct LeeParams {
    pub kappa: f64,
    /// Potential of the localized node (site 0).
    pub sigma: f64,
    /// G in g = -iG, G >= 0.
    pub g_imag: f64,
    /// Bare bond between sites 0 and 1 in the synthesized lattice.
    pub theta: f64,
    /// Coupling of the auxiliary site to sites 0 and 1.
    pub omega: f64,
    /// Chain truncation: sites 0..=n_trunc.
    pub n_trunc: usize,
}

impl LeeParams {
    fn check(&self) {
        assert!(self.kappa > 0.0, "kappa must be positive");
        assert!(self.g_imag >= 0.0, "G must be nonnegative");
        assert!(self.n_trunc >= 2, "n_trunc must be at least 2");
    }
}

impl Default for LeeParams {
    /// Ghost-regime operating point: sigma/kappa = 3, G/kappa = 1.05,
    /// synthesized with theta/kappa = 0.2, omega/kappa = 7.
    fn default() -> Self {
        LeeParams {
            kappa: 1.0,
            sigma: 3.0,
            g_imag: 1.05,
            theta: 0.2,
            omega: 7.0,
            n_trunc: 300,
        }
    }
}

/// Parameters of the PT-symmetric lattice hosting a bound state in the
/// continuum: inhomogeneous hoppings, site 0 disconnected from the chain, and
/// two auxiliary sites at +/- iU bridging it to its neighbors.
#[derive(Debug, Clone, Copy)]
pub struct PtBicParams {
    pub kappa: f64,
    pub omega: f64,
    /// Auxiliary potentials are -iU (site coupled to n = -1, 0) and +iU
    /// (site coupled to n = 0, +1).
    pub u_aux: f64,
    /// Total number of S sites; odd, centered on n = 0.
    pub n_trunc: usize,
}

impl PtBicParams {
    pub fn n_half(&self) -> usize {
        (self.n_trunc - 1) / 2
    }

    fn check(&self) {
        assert!(self.kappa > 0.0, "kappa must be positive");
        assert!(self.n_trunc % 2 == 1, "n_trunc must be odd");
        assert!(self.n_trunc >= 7, "n_trunc too small");
    }
}

impl Default for PtBicParams {
    fn default() -> Self {
        PtBicParams { kappa: 1.0, omega: 1.0, u_aux: 0.4, n_trunc: 403 }
    }
}

/// Hopping ratio kappa_n / kappa of the BIC-hosting lattice for the bond
/// (n-1, n); defined for n != 0, 1. Asymptotically 1, and PT-symmetric:
/// kappa_{-n} = kappa_{n+1} for the real bonds built here.
pub fn pt_bic_hopping_ratio(n: i64) -> f64 {
    assert!(n != 0 && n != 1, "bonds touching site 0 are not part of H_S");
    if n.rem_euclid(2) == 0 {
        ((n + 1) as f64 / (n - 1) as f64).sqrt()
    } else {
        ((n - 2) as f64 / n as f64).sqrt()
    }
}

/// Build the side-coupled defect chain (2*n_trunc sites, signed indices
/// -(n_trunc-1)..=n_trunc, one auxiliary site).
pub fn build_defect_chain(p: &DefectChainParams) -> PartitionedHamiltonian {
    p.check();
    let n = 2 * p.n_trunc;
    let offset = p.n_trunc - 1;
    let mut h_s = CMatrix::zeros((n, n));
    for i in 0..n - 1 {
        let left = i as i64 - offset as i64;
        let hop = if left == 0 { p.theta } else { p.kappa };
        h_s[(i, i + 1)] = C64::new(hop, 0.0);
        h_s[(i + 1, i)] = C64::new(hop, 0.0);
    }
    h_s[(offset, offset)] = C64::new(p.sigma, 0.0);
    h_s[(offset + 1, offset + 1)] = C64::new(p.sigma, 0.0);

    let mut h_a = CMatrix::zeros((1, 1));
    h_a[(0, 0)] = p.u_aux;
    let mut rho = CMatrix::zeros((1, n));
    rho[(0, offset)] = C64::new(p.omega, 0.0);
    rho[(0, offset + 1)] = C64::new(p.omega, 0.0);
    PartitionedHamiltonian { h_s, h_a, rho, offset }
}

/// Truncated Lee Hamiltonian with complex coupling: (n_trunc+1) sites,
/// potential sigma on site 0, bond (0, 1) = -iG, hopping kappa elsewhere.
pub fn build_lee_exact(p: &LeeParams) -> CMatrix {
    p.check();
    let n = p.n_trunc + 1;
    let mut h = CMatrix::zeros((n, n));
    h[(0, 0)] = C64::new(p.sigma, 0.0);
    let g = C64::new(0.0, -p.g_imag);
    h[(0, 1)] = g;
    h[(1, 0)] = g;
    for i in 1..n - 1 {
        h[(i, i + 1)] = C64::new(p.kappa, 0.0);
        h[(i + 1, i)] = C64::new(p.kappa, 0.0);
    }
    h
}

/// Synthesized Lee lattice: all-real couplings plus one auxiliary site whose
/// complex potential realizes the imaginary bond at the reference energy.
///
/// Sites 0 and 1 carry sigma_1 = sigma + theta + iG and sigma_2 = theta + iG;
/// the auxiliary potential is U = omega^2/(theta + iG) + e_ref.
pub fn build_lee_synth(p: &LeeParams, e_ref: C64) -> Result<PartitionedHamiltonian> {
    p.check();
    let denom = C64::new(p.theta, p.g_imag);
    if denom.norm() <= 1e-12 * p.kappa.max(1.0) {
        return Err(Error::DegenerateBond);
    }
    let n = p.n_trunc + 1;
    let mut h_s = CMatrix::zeros((n, n));
    h_s[(0, 1)] = C64::new(p.theta, 0.0);
    h_s[(1, 0)] = C64::new(p.theta, 0.0);
    for i in 1..n - 1 {
        h_s[(i, i + 1)] = C64::new(p.kappa, 0.0);
        h_s[(i + 1, i)] = C64::new(p.kappa, 0.0);
    }
    h_s[(0, 0)] = C64::new(p.sigma + p.theta, p.g_imag);
    h_s[(1, 1)] = C64::new(p.theta, p.g_imag);

    let mut h_a = CMatrix::zeros((1, 1));
    h_a[(0, 0)] = C64::new(p.omega * p.omega, 0.0) / denom + e_ref;
    let mut rho = CMatrix::zeros((1, n));
    rho[(0, 0)] = C64::new(p.omega, 0.0);
    rho[(0, 1)] = C64::new(p.omega, 0.0);
    Ok(PartitionedHamiltonian { h_s, h_a, rho, offset: 0 })
}

/// Build the PT-symmetric BIC lattice: n_trunc S sites with the inhomogeneous
/// hoppings, bonds touching site 0 absent, and two auxiliary sites at -iU/+iU
/// coupled by omega to (-1, 0) and (0, +1).
pub fn build_pt_bic(p: &PtBicParams) -> PartitionedHamiltonian {
    p.check();
    let n = p.n_trunc;
    let offset = p.n_half();
    let mut h_s = CMatrix::zeros((n, n));
    for i in 0..n - 1 {
        let bond = (i + 1) as i64 - offset as i64; // bond (n-1, n) labeled by n
        if bond == 0 || bond == 1 {
            continue;
        }
        let hop = p.kappa * pt_bic_hopping_ratio(bond);
        h_s[(i, i + 1)] = C64::new(hop, 0.0);
        h_s[(i + 1, i)] = C64::new(hop, 0.0);
    }
    let mut h_a = CMatrix::zeros((2, 2));
    h_a[(0, 0)] = C64::new(0.0, -p.u_aux);
    h_a[(1, 1)] = C64::new(0.0, p.u_aux);
    let mut rho = CMatrix::zeros((2, n));
    let w = C64::new(p.omega, 0.0);
    rho[(0, offset - 1)] = w;
    rho[(0, offset)] = w;
    rho[(1, offset)] = w;
    rho[(1, offset + 1)] = w;
    PartitionedHamiltonian { h_s, h_a, rho, offset }
}
