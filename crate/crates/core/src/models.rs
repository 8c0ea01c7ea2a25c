//! Parametrized state families: thermal states of Hermitian families, Bloch
//! sphere models, the displaced (coherent) thermal oscillator in a truncated
//! Fock basis, and seeded random families for property tests.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{QgtError, Result};
use crate::spectral::{
    ensure_hermitian, hermitian_eigendecompose, tol, CMatrix, CVector, DensityMatrix,
    SpectralDecomposition,
};

/// Default weight limit for the top retained Fock level.
pub const TRUNC_TOL: f64 = 1e-8;

/// One coordinate of the parameter manifold. Bounds are open; `period`
/// marks coordinates along which the family is periodic.
#[derive(Debug, Clone, PartialEq)]
pub struct Axis {
    pub name: String,
    pub lo: f64,
    pub hi: f64,
    pub period: Option<f64>,
}

impl Axis {
    pub fn unbounded(name: &str) -> Self {
        Self {
            name: name.to_string(),
            lo: f64::NEG_INFINITY,
            hi: f64::INFINITY,
            period: None,
        }
    }

    pub fn bounded(name: &str, lo: f64, hi: f64) -> Self {
        Self {
            name: name.to_string(),
            lo,
            hi,
            period: None,
        }
    }

    pub fn periodic(name: &str, period: f64) -> Self {
        Self {
            period: Some(period),
            ..Self::unbounded(name)
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Domain {
    axes: Vec<Axis>,
}

impl Domain {
    pub fn new(axes: Vec<Axis>) -> Self {
        Self { axes }
    }

    pub fn unbounded(k: usize) -> Self {
        Self::new((1..=k).map(|i| Axis::unbounded(&format!("R{i}"))).collect())
    }

    pub fn len(&self) -> usize {
        self.axes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.axes.is_empty()
    }

    pub fn axes(&self) -> &[Axis] {
        &self.axes
    }

    /// Checks parameter count, finiteness and the open bounds.
    pub fn check(&self, r: &[f64]) -> Result<()> {
        if r.len() != self.axes.len() {
            return Err(QgtError::ParameterCount {
                expected: self.axes.len(),
                got: r.len(),
            });
        }
        for (axis, (a, &x)) in self.axes.iter().zip(r).enumerate() {
            if !x.is_finite() || x <= a.lo || x >= a.hi {
                return Err(QgtError::DomainExceeded { axis, value: x });
            }
        }
        Ok(())
    }
}

/// How the spectrum of `ρ(R)` is generated.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SpectralSource {
    /// Eigen-data comes from `ρ(R)` itself.
    Density,
    /// `ρ(R) = exp(−βH(R)) / Z`; eigen-data comes from `H(R)`.
    Thermal { beta: f64 },
}

/// Spectral data of a mixed family at one point.
#[derive(Debug, Clone, PartialEq)]
pub struct Levels {
    /// Weights `λ_n` (descending) and eigenvectors `|n⟩`.
    pub spectrum: SpectralDecomposition,
    /// Eigenvalues of the generator paired with each level: `λ_n` for
    /// [`SpectralSource::Density`], energies `E_n` for thermal families.
    pub generator_values: Vec<f64>,
}

impl Levels {
    pub fn weights(&self) -> &[f64] {
        self.spectrum.eigenvalues()
    }

    /// Smallest gap between generator eigenvalues.
    pub fn generator_gap(&self) -> f64 {
        let g = &self.generator_values;
        let mut gap = f64::INFINITY;
        for i in 0..g.len() {
            for j in (i + 1)..g.len() {
                gap = gap.min((g[i] - g[j]).abs());
            }
        }
        gap
    }
}

/// A smooth map from parameter points to quantum states.
pub trait StateFamily: Send + Sync {
    fn name(&self) -> String;

    /// Hilbert-space dimension `N`.
    fn dim(&self) -> usize;

    fn domain(&self) -> &Domain;

    /// Number of parameters `k`.
    fn n_params(&self) -> usize {
        self.domain().len()
    }

    fn is_pure(&self) -> bool {
        false
    }

    /// Raw density matrix at `r` (rank one for pure families).
    fn density(&self, r: &[f64]) -> Result<CMatrix>;

    /// Validated density matrix at `r`.
    fn evaluate(&self, r: &[f64]) -> Result<DensityMatrix> {
        crate::spectral::validate_density(&self.density(r)?)
    }

    /// Normalized state vector (pure families only).
    fn state_vector(&self, _r: &[f64]) -> Result<CVector> {
        Err(QgtError::NotPure)
    }

    fn source(&self) -> SpectralSource {
        SpectralSource::Density
    }

    /// The Hermitian matrix whose eigen-data generates the spectrum: `ρ(R)`
    /// or, for thermal families, `H(R)`.
    fn generator(&self, r: &[f64]) -> Result<CMatrix> {
        self.density(r)
    }

    /// Eigen-data of `ρ(r)`; requires a full-rank state.
    fn levels(&self, r: &[f64]) -> Result<Levels> {
        if self.is_pure() {
            return Err(QgtError::NotFullRank {
                min_eigenvalue: 0.0,
            });
        }
        let rho = self.evaluate(r)?;
        let spectrum = rho.spectrum().clone();
        Ok(Levels {
            generator_values: spectrum.eigenvalues().to_vec(),
            spectrum,
        })
    }
}

macro_rules! forward_state_family {
    ($ptr:ident) => {
        impl<T: StateFamily + ?Sized> StateFamily for $ptr<T> {
            fn name(&self) -> String {
                (**self).name()
            }
            fn dim(&self) -> usize {
                (**self).dim()
            }
            fn domain(&self) -> &Domain {
                (**self).domain()
            }
            fn is_pure(&self) -> bool {
                (**self).is_pure()
            }
            fn density(&self, r: &[f64]) -> Result<CMatrix> {
                (**self).density(r)
            }
            fn evaluate(&self, r: &[f64]) -> Result<DensityMatrix> {
                (**self).evaluate(r)
            }
            fn state_vector(&self, r: &[f64]) -> Result<CVector> {
                (**self).state_vector(r)
            }
            fn source(&self) -> SpectralSource {
                (**self).source()
            }
            fn generator(&self, r: &[f64]) -> Result<CMatrix> {
                (**self).generator(r)
            }
            fn levels(&self, r: &[f64]) -> Result<Levels> {
                (**self).levels(r)
            }
        }
    };
}

forward_state_family!(Arc);
forward_state_family!(Box);

/// A Hermitian-valued family `H(R)`.
pub trait HamiltonianFamily: Send + Sync {
    fn name(&self) -> String;
    fn dim(&self) -> usize;
    fn domain(&self) -> &Domain;
    fn hamiltonian(&self, r: &[f64]) -> Result<CMatrix>;
}

/// Thermal states `exp(−βH(R)) / Tr exp(−βH(R))`, computed spectrally.
#[derive(Clone)]
pub struct ThermalFamily<H> {
    hamiltonian: H,
    beta: f64,
}

impl<H: HamiltonianFamily> ThermalFamily<H> {
    pub fn new(hamiltonian: H, beta: f64) -> Result<Self> {
        if !(beta > 0.0 && beta.is_finite()) {
            return Err(QgtError::InvalidArgument(format!(
                "beta must be positive, got {beta}"
            )));
        }
        Ok(Self { hamiltonian, beta })
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn hamiltonian_family(&self) -> &H {
        &self.hamiltonian
    }

    /// Energies in ascending order with the matching Boltzmann weights and
    /// eigenframe.
    fn thermal_levels(&self, r: &[f64]) -> Result<Levels> {
        self.hamiltonian.domain().check(r)?;
        let h = self.hamiltonian.hamiltonian(r)?;
        let dec = hermitian_eigendecompose(&h)?;
        let n = dec.dim();
        // ascending energy == descending weight
        let order: Vec<usize> = (0..n).rev().collect();
        let asc = dec.permuted(&order);
        let energies = asc.eigenvalues().to_vec();
        let e0 = energies[0];
        let boltzmann: Vec<f64> = energies
            .iter()
            .map(|&e| (-self.beta * (e - e0)).exp())
            .collect();
        let z: f64 = boltzmann.iter().sum();
        let weights: Vec<f64> = boltzmann.iter().map(|w| w / z).collect();
        Ok(Levels {
            spectrum: SpectralDecomposition::from_parts(weights, asc.frame().clone()),
            generator_values: energies,
        })
    }
}

impl<H: HamiltonianFamily> StateFamily for ThermalFamily<H> {
    fn name(&self) -> String {
        format!("thermal[{}; beta={}]", self.hamiltonian.name(), self.beta)
    }

    fn dim(&self) -> usize {
        self.hamiltonian.dim()
    }

    fn domain(&self) -> &Domain {
        self.hamiltonian.domain()
    }

    fn density(&self, r: &[f64]) -> Result<CMatrix> {
        Ok(self.thermal_levels(r)?.spectrum.reconstruct())
    }

    fn source(&self) -> SpectralSource {
        SpectralSource::Thermal { beta: self.beta }
    }

    fn generator(&self, r: &[f64]) -> Result<CMatrix> {
        self.hamiltonian.domain().check(r)?;
        self.hamiltonian.hamiltonian(r)
    }

    /// Boltzmann weights are strictly positive in exact arithmetic, so the
    /// rank check is skipped here; weights that underflow contribute nothing.
    fn levels(&self, r: &[f64]) -> Result<Levels> {
        self.thermal_levels(r)
    }
}

/// `thermal_family(H, β)`.
pub fn thermal_family<H: HamiltonianFamily>(hamiltonian: H, beta: f64) -> Result<ThermalFamily<H>> {
    ThermalFamily::new(hamiltonian, beta)
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn pauli_field(bx: f64, by: f64, bz: f64) -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[c(bz, 0.0), c(bx, -by), c(bx, by), c(-bz, 0.0)])
}

fn bloch_domain() -> Domain {
    Domain::new(vec![
        Axis::bounded("theta", 0.0, PI),
        Axis::periodic("phi", 2.0 * PI),
    ])
}

/// `H(θ, φ) = (ω/2) n̂(θ, φ)·σ`.
#[derive(Debug, Clone)]
pub struct BlochHamiltonian {
    omega: f64,
    domain: Domain,
}

impl BlochHamiltonian {
    pub fn new(omega: f64) -> Self {
        Self {
            omega,
            domain: bloch_domain(),
        }
    }
}

impl HamiltonianFamily for BlochHamiltonian {
    fn name(&self) -> String {
        format!("bloch-field[omega={}]", self.omega)
    }
    fn dim(&self) -> usize {
        2
    }
    fn domain(&self) -> &Domain {
        &self.domain
    }
    fn hamiltonian(&self, r: &[f64]) -> Result<CMatrix> {
        self.domain.check(r)?;
        let (theta, phi) = (r[0], r[1]);
        let half = 0.5 * self.omega;
        Ok(pauli_field(
            half * theta.sin() * phi.cos(),
            half * theta.sin() * phi.sin(),
            half * theta.cos(),
        ))
    }
}

/// Pure Bloch state `(cos θ/2, e^{iφ} sin θ/2)`.
#[derive(Debug, Clone)]
pub struct BlochPure {
    domain: Domain,
}

impl BlochPure {
    pub fn new() -> Self {
        Self {
            domain: bloch_domain(),
        }
    }
}

impl Default for BlochPure {
    fn default() -> Self {
        Self::new()
    }
}

impl StateFamily for BlochPure {
    fn name(&self) -> String {
        "bloch-pure".into()
    }
    fn dim(&self) -> usize {
        2
    }
    fn domain(&self) -> &Domain {
        &self.domain
    }
    fn is_pure(&self) -> bool {
        true
    }
    fn density(&self, r: &[f64]) -> Result<CMatrix> {
        let psi = self.state_vector(r)?;
        Ok(&psi * psi.adjoint())
    }
    fn state_vector(&self, r: &[f64]) -> Result<CVector> {
        self.domain.check(r)?;
        let (theta, phi) = (r[0], r[1]);
        Ok(CVector::from_vec(vec![
            c((0.5 * theta).cos(), 0.0),
            Complex64::from_polar((0.5 * theta).sin(), phi),
        ]))
    }
}

/// Thermal state of the Bloch Hamiltonian.
pub type ThermalBloch = ThermalFamily<BlochHamiltonian>;

/// Pure variant `(cos θ/2, e^{iφ} sin θ/2)` or thermal state of
/// `(ω/2) n̂·σ` at inverse temperature `beta`.
pub fn bloch_family(pure: bool, beta: Option<f64>, omega: f64) -> Result<Box<dyn StateFamily>> {
    if pure {
        Ok(Box::new(BlochPure::new()))
    } else {
        let beta =
            beta.ok_or_else(|| QgtError::InvalidArgument("mixed Bloch family needs beta".into()))?;
        Ok(Box::new(ThermalFamily::new(
            BlochHamiltonian::new(omega),
            beta,
        )?))
    }
}

/// Model parameters shared by the built-in families.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelConfig {
    pub beta: f64,
    pub omega: f64,
    pub n_cut: usize,
    pub seed: u64,
    pub truncation: TruncationPolicy,
}

impl Default for ModelConfig {
    fn default() -> Self {
        Self {
            beta: 1.0,
            omega: 1.0,
            n_cut: 60,
            seed: 0,
            truncation: TruncationPolicy::Error,
        }
    }
}

impl ModelConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.beta > 0.0 && self.beta.is_finite()) {
            return Err(QgtError::InvalidArgument(format!(
                "beta must be positive, got {}",
                self.beta
            )));
        }
        if !(self.omega > 0.0 && self.omega.is_finite()) {
            return Err(QgtError::InvalidArgument(format!(
                "omega must be positive, got {}",
                self.omega
            )));
        }
        if self.n_cut < 2 {
            return Err(QgtError::InvalidArgument(format!(
                "n_cut must be at least 2, got {}",
                self.n_cut
            )));
        }
        Ok(())
    }
}

/// What to do when the top retained Fock level carries too much weight.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TruncationPolicy {
    Error,
    Warn,
}

/// Displaced oscillator `H(z) = D(z) ω(a†a + 1/2) D†(z)` on `n_cut` Fock
/// levels, `z = x + iy`, with `D(z) = exp(z a† − z̄ a)` exponentiated in the
/// truncated basis.
#[derive(Debug, Clone)]
pub struct DisplacedOscillator {
    omega: f64,
    n_cut: usize,
    domain: Domain,
    annihilation: CMatrix,
}

impl DisplacedOscillator {
    pub fn new(omega: f64, n_cut: usize) -> Self {
        let annihilation = CMatrix::from_fn(n_cut, n_cut, |i, j| {
            if j == i + 1 {
                c((j as f64).sqrt(), 0.0)
            } else {
                c(0.0, 0.0)
            }
        });
        Self {
            omega,
            n_cut,
            domain: Domain::new(vec![Axis::unbounded("x"), Axis::unbounded("y")]),
            annihilation,
        }
    }

    pub fn n_cut(&self) -> usize {
        self.n_cut
    }

    /// Truncated displacement operator.
    pub fn displacement(&self, x: f64, y: f64) -> CMatrix {
        let z = c(x, y);
        let a = &self.annihilation;
        let generator = a.adjoint().scale(1.0).map(|v| v * z) - a.map(|v| v * z.conj());
        generator.exp()
    }
}

impl HamiltonianFamily for DisplacedOscillator {
    fn name(&self) -> String {
        format!(
            "displaced-oscillator[omega={}, n_cut={}]",
            self.omega, self.n_cut
        )
    }
    fn dim(&self) -> usize {
        self.n_cut
    }
    fn domain(&self) -> &Domain {
        &self.domain
    }
    fn hamiltonian(&self, r: &[f64]) -> Result<CMatrix> {
        self.domain.check(r)?;
        let d = self.displacement(r[0], r[1]);
        let mut scaled = d.clone();
        for j in 0..self.n_cut {
            let e = self.omega * (j as f64 + 0.5);
            for i in 0..self.n_cut {
                scaled[(i, j)] *= e;
            }
        }
        let h = &scaled * d.adjoint();
        // remove rounding asymmetry
        Ok((&h + h.adjoint()).scale(0.5))
    }
}

/// Displaced thermal oscillator over `(x, y)`, with a check on the weight of
/// the top retained Fock level.
#[derive(Clone)]
pub struct BosonicCoherentFamily {
    inner: ThermalFamily<DisplacedOscillator>,
    trunc_tol: f64,
    policy: TruncationPolicy,
}

impl BosonicCoherentFamily {
    pub fn inner(&self) -> &ThermalFamily<DisplacedOscillator> {
        &self.inner
    }

    /// Population of the top Fock level `⟨n_cut−1|ρ(z)|n_cut−1⟩`.
    pub fn top_fock_weight(&self, levels: &Levels) -> f64 {
        let top = self.inner.dim() - 1;
        let frame = levels.spectrum.frame();
        levels
            .weights()
            .iter()
            .enumerate()
            .map(|(n, &w)| w * frame[(top, n)].norm_sqr())
            .sum()
    }

    fn checked_levels(&self, r: &[f64]) -> Result<Levels> {
        let levels = self.inner.levels(r)?;
        let weight = self.top_fock_weight(&levels);
        if weight > self.trunc_tol {
            match self.policy {
                TruncationPolicy::Error => {
                    return Err(QgtError::TruncationTooSmall {
                        weight,
                        tolerance: self.trunc_tol,
                    })
                }
                TruncationPolicy::Warn => log::warn!(
                    "top Fock level weight {weight:.3e} exceeds {:.1e} at {r:?}; increase n_cut",
                    self.trunc_tol
                ),
            }
        }
        Ok(levels)
    }
}

impl StateFamily for BosonicCoherentFamily {
    fn name(&self) -> String {
        format!(
            "bosonic-coherent[beta={}, {}]",
            self.inner.beta(),
            self.inner.hamiltonian_family().name()
        )
    }
    fn dim(&self) -> usize {
        self.inner.dim()
    }
    fn domain(&self) -> &Domain {
        self.inner.domain()
    }
    fn density(&self, r: &[f64]) -> Result<CMatrix> {
        Ok(self.checked_levels(r)?.spectrum.reconstruct())
    }
    fn source(&self) -> SpectralSource {
        self.inner.source()
    }
    fn generator(&self, r: &[f64]) -> Result<CMatrix> {
        self.inner.generator(r)
    }
    fn levels(&self, r: &[f64]) -> Result<Levels> {
        self.checked_levels(r)
    }
}

/// Displaced truncated thermal oscillator, parametrized by `(x, y)`.
pub fn bosonic_coherent_family(cfg: &ModelConfig) -> Result<BosonicCoherentFamily> {
    cfg.validate()?;
    let fam = BosonicCoherentFamily {
        inner: ThermalFamily::new(DisplacedOscillator::new(cfg.omega, cfg.n_cut), cfg.beta)?,
        trunc_tol: TRUNC_TOL,
        policy: cfg.truncation,
    };
    // the undisplaced state must already fit
    fam.checked_levels(&[0.0, 0.0])?;
    Ok(fam)
}

/// `H(R) = H₀ + Σ_μ R^μ V_μ`.
#[derive(Debug, Clone)]
pub struct AffineHamiltonian {
    base: CMatrix,
    terms: Vec<CMatrix>,
    domain: Domain,
}

impl AffineHamiltonian {
    pub fn new(base: CMatrix, terms: Vec<CMatrix>) -> Result<Self> {
        ensure_hermitian(&base)?;
        for t in &terms {
            ensure_hermitian(t)?;
            if t.nrows() != base.nrows() {
                return Err(QgtError::DimensionMismatch {
                    left: base.nrows(),
                    right: t.nrows(),
                });
            }
        }
        let domain = Domain::unbounded(terms.len());
        Ok(Self {
            base,
            terms,
            domain,
        })
    }
}

impl HamiltonianFamily for AffineHamiltonian {
    fn name(&self) -> String {
        format!("affine[dim={}, k={}]", self.base.nrows(), self.terms.len())
    }
    fn dim(&self) -> usize {
        self.base.nrows()
    }
    fn domain(&self) -> &Domain {
        &self.domain
    }
    fn hamiltonian(&self, r: &[f64]) -> Result<CMatrix> {
        self.domain.check(r)?;
        let mut h = self.base.clone();
        for (t, &x) in self.terms.iter().zip(r) {
            h += t.map(|v| v * x);
        }
        Ok(h)
    }
}

/// Random Hermitian matrix with standard-normal real and imaginary parts
/// (GUE-like scaling).
pub fn random_hermitian(rng: &mut impl Rng, n: usize) -> CMatrix {
    let a = CMatrix::from_fn(n, n, |_, _| {
        c(
            rng.sample::<f64, _>(StandardNormal),
            rng.sample::<f64, _>(StandardNormal),
        )
    });
    (&a + a.adjoint()).scale(0.5)
}

/// Seeded family `thermal(H₀ + Σ R^μ V_μ, β = 1)`.
pub fn random_smooth_family(
    seed: u64,
    dim: usize,
    n_params: usize,
) -> Result<ThermalFamily<AffineHamiltonian>> {
    if dim < 2 || n_params < 1 {
        return Err(QgtError::InvalidArgument(format!(
            "random family needs dim >= 2 and n_params >= 1 (got {dim}, {n_params})"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let base = random_hermitian(&mut rng, dim);
    let terms = (0..n_params)
        .map(|_| random_hermitian(&mut rng, dim))
        .collect();
    ThermalFamily::new(AffineHamiltonian::new(base, terms)?, 1.0)
}

type DensityFn = dyn Fn(&[f64]) -> Result<CMatrix> + Send + Sync;
type StateFn = dyn Fn(&[f64]) -> Result<CVector> + Send + Sync;

/// Mixed family backed by a closure returning `ρ(R)`.
#[derive(Clone)]
pub struct DensityFamily {
    name: String,
    dim: usize,
    domain: Domain,
    rho: Arc<DensityFn>,
}

impl DensityFamily {
    pub fn new(
        name: &str,
        dim: usize,
        domain: Domain,
        rho: impl Fn(&[f64]) -> Result<CMatrix> + Send + Sync + 'static,
    ) -> Self {
        Self {
            name: name.to_string(),
            dim,
            domain,
            rho: Arc::new(rho),
        }
    }
}

impl fmt::Debug for DensityFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DensityFamily")
            .field("name", &self.name)
            .field("dim", &self.dim)
            .finish()
    }
}

impl StateFamily for DensityFamily {
    fn name(&self) -> String {
        self.name.clone()
    }
    fn dim(&self) -> usize {
        self.dim
    }
    fn domain(&self) -> &Domain {
        &self.domain
    }
    fn density(&self, r: &[f64]) -> Result<CMatrix> {
        self.domain.check(r)?;
        (self.rho)(r)
    }
}

/// `ρ(R) = diag((1+R)/2, (1−R)/2)` on `−1 < R < 1`.
pub fn diagonal_qubit_family() -> DensityFamily {
    DensityFamily::new(
        "diagonal-qubit",
        2,
        Domain::new(vec![Axis::bounded("R", -1.0, 1.0)]),
        |r| {
            let x = r[0];
            Ok(CMatrix::from_diagonal(&CVector::from_vec(vec![
                c(0.5 * (1.0 + x), 0.0),
                c(0.5 * (1.0 - x), 0.0),
            ])))
        },
    )
}

/// Pure family backed by a closure returning a normalized `|ψ(R)⟩`.
#[derive(Clone)]
pub struct PureFamily {
    name: String,
    dim: usize,
    domain: Domain,
    psi: Arc<StateFn>,
}

impl PureFamily {
    pub fn new(
        name: &str,
        dim: usize,
        domain: Domain,
        psi: impl Fn(&[f64]) -> Result<CVector> + Send + Sync + 'static,
    ) -> Self {
        Self {
            name: name.to_string(),
            dim,
            domain,
            psi: Arc::new(psi),
        }
    }
}

impl StateFamily for PureFamily {
    fn name(&self) -> String {
        self.name.clone()
    }
    fn dim(&self) -> usize {
        self.dim
    }
    fn domain(&self) -> &Domain {
        &self.domain
    }
    fn is_pure(&self) -> bool {
        true
    }
    fn density(&self, r: &[f64]) -> Result<CMatrix> {
        let psi = self.state_vector(r)?;
        Ok(&psi * psi.adjoint())
    }
    fn state_vector(&self, r: &[f64]) -> Result<CVector> {
        self.domain.check(r)?;
        (self.psi)(r)
    }
}

/// Pure family of the ground state of `H(R)`.
pub fn ground_state_family<H: HamiltonianFamily + Clone + 'static>(hamiltonian: H) -> PureFamily {
    let name = format!("ground[{}]", hamiltonian.name());
    let dim = hamiltonian.dim();
    let domain = hamiltonian.domain().clone();
    PureFamily::new(&name, dim, domain, move |r| {
        let dec = hermitian_eigendecompose(&hamiltonian.hamiltonian(r)?)?;
        Ok(dec.vector(dec.dim() - 1))
    })
}

/// Minimum eigenvalue floor used when validating sampled family outputs.
pub fn rank_tolerance() -> f64 {
    tol::RANK
}
