//! Atomic polarizabilities, medium permittivity, and thermal populations.
//!
//! All atoms are modelled as Lorentzian oscillators. The orientation-averaged
//! ground-state polarizability of a two-level atom with transition frequency
//! `w0`, squared dipole moment `d2` and level width `g` is
//!
//! ```text
//! a_g(w) = (d2 / 3) * [ 1/(w0 - w - i g/2) + 1/(w0 + w + i g/2) ]
//! ```
//!
//! and the excited-state polarizability is the same expression with
//! `w0 -> -w0`. A dilute gas of such atoms has permittivity
//! `eps(w) = 1 + 4 pi rho a_g(w)` and complex refractive index
//! `n(w) = sqrt(eps)` on the branch with non-negative imaginary part for
//! real positive frequencies.
//!
//! Natural units `hbar = c = k_B = 1` are used throughout: frequencies,
//! temperatures and inverse lengths share one unit, squared dipole moments
//! carry frequency^-2, polarizabilities frequency^-3 and number densities
//! frequency^3.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// A single dipole transition of an atom.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Transition {
    /// Transition frequency, > 0.
    pub frequency: f64,
    /// Squared dipole matrix element |d|^2, >= 0.
    pub dipole_sq: f64,
    /// Level width entering the Lorentzian denominators, >= 0.
    pub width: f64,
}

impl Transition {
    pub fn new(frequency: f64, dipole_sq: f64, width: f64) -> Result<Self> {
        if !(frequency > 0.0) {
            return Err(Error::Domain(format!(
                "transition frequency must be positive, got {frequency}"
            )));
        }
        if dipole_sq < 0.0 || width < 0.0 {
            return Err(Error::Domain(
                "dipole_sq and width must be non-negative".into(),
            ));
        }
        Ok(Transition {
            frequency,
            dipole_sq,
            width,
        })
    }
}

/// Transition data of a two-level or multi-level atom.
///
/// `natural_width` and `broadening_rate` describe how the resonance width
/// grows with the density of the host gas: at number density `n0` the
/// collisional width is `natural_width + n0 * broadening_rate`.
#[derive(Debug, Clone, PartialEq)]
pub struct AtomSpecies {
    pub transitions: Vec<Transition>,
    /// Natural width of the excited level.
    pub natural_width: f64,
    /// Broadening rate coefficient (width per unit density).
    pub broadening_rate: f64,
}

impl AtomSpecies {
    pub fn new(
        transitions: Vec<Transition>,
        natural_width: f64,
        broadening_rate: f64,
    ) -> Result<Self> {
        if transitions.is_empty() {
            return Err(Error::Domain("species needs at least one transition".into()));
        }
        if natural_width < 0.0 || broadening_rate < 0.0 {
            return Err(Error::Domain(
                "natural_width and broadening_rate must be non-negative".into(),
            ));
        }
        Ok(AtomSpecies {
            transitions,
            natural_width,
            broadening_rate,
        })
    }

    /// Two-level species without collisional data.
    pub fn two_level(frequency: f64, dipole_sq: f64, width: f64) -> Result<Self> {
        Ok(AtomSpecies {
            transitions: vec![Transition::new(frequency, dipole_sq, width)?],
            natural_width: 0.0,
            broadening_rate: 0.0,
        })
    }

    /// The single transition of a two-level species.
    pub fn transition(&self) -> &Transition {
        &self.transitions[0]
    }

    pub fn is_two_level(&self) -> bool {
        self.transitions.len() == 1
    }

    /// Copy of the species with every transition width replaced by the
    /// collisional width at density `n0`. Used when the species forms a gas
    /// medium; has no effect when no collisional data is declared.
    pub fn at_density(&self, n0: f64) -> Self {
        if self.natural_width == 0.0 && self.broadening_rate == 0.0 {
            return self.clone();
        }
        let width = collisional_width(self, n0);
        let mut out = self.clone();
        for t in &mut out.transitions {
            t.width = width;
        }
        out
    }

    /// Copy with every width floored at `floor_rel` times its transition
    /// frequency. Regularizes formulas that are singular at zero width.
    pub fn with_width_floor(&self, floor_rel: f64) -> Self {
        let mut out = self.clone();
        for t in &mut out.transitions {
            t.width = t.width.max(floor_rel * t.frequency);
        }
        out
    }
}

/// Which density enters the medium permittivity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PermittivityDensity {
    /// Ground-state population (the default; excited atoms are left out of
    /// the linear response of the host gas).
    #[default]
    GroundPopulation,
    /// Total density, for media whose populations are not resolved.
    TotalDensity,
}

/// A dilute gas medium: one species, total density, temperature, and the
/// ground/excited populations (Boltzmann-derived unless overridden).
#[derive(Debug, Clone, PartialEq)]
pub struct MediumSpec {
    pub species: AtomSpecies,
    /// Total number density.
    pub density: f64,
    /// Temperature.
    pub temperature: f64,
    /// Ground-state population.
    pub ground_population: f64,
    /// Excited-state population; `ground + excited == density` exactly.
    pub excited_population: f64,
    /// Density convention used in the permittivity.
    pub permittivity_density: PermittivityDensity,
}

impl MediumSpec {
    /// Medium with Boltzmann populations for the species' first transition.
    /// Collisional broadening is applied to the species at this density.
    pub fn new(species: AtomSpecies, density: f64, temperature: f64) -> Result<Self> {
        if density < 0.0 {
            return Err(Error::Domain(format!(
                "density must be non-negative, got {density}"
            )));
        }
        if temperature < 0.0 {
            return Err(Error::Domain(format!(
                "temperature must be non-negative, got {temperature}"
            )));
        }
        let species = species.at_density(density);
        let (ground, excited) =
            boltzmann_populations(density, species.transition().frequency, temperature);
        Ok(MediumSpec {
            species,
            density,
            temperature,
            ground_population: ground,
            excited_population: excited,
            permittivity_density: PermittivityDensity::GroundPopulation,
        })
    }

    /// Medium with explicit populations (overriding the Boltzmann split).
    pub fn with_populations(
        species: AtomSpecies,
        density: f64,
        temperature: f64,
        ground: f64,
        excited: f64,
    ) -> Result<Self> {
        if ground < 0.0 || excited < 0.0 {
            return Err(Error::Domain("populations must be non-negative".into()));
        }
        let closure = (ground + excited - density).abs();
        if closure > 1e-12 * density.max(1.0) {
            return Err(Error::Domain(format!(
                "populations must close to the total density (off by {closure:e})"
            )));
        }
        let species = species.at_density(density);
        Ok(MediumSpec {
            species,
            density,
            temperature,
            ground_population: ground,
            excited_population: excited,
            permittivity_density: PermittivityDensity::GroundPopulation,
        })
    }

    /// Empty medium: `n(w) = 1` everywhere.
    pub fn vacuum() -> Self {
        MediumSpec {
            species: AtomSpecies::two_level(1.0, 0.0, 0.0).unwrap(),
            density: 0.0,
            temperature: 0.0,
            ground_population: 0.0,
            excited_population: 0.0,
            permittivity_density: PermittivityDensity::GroundPopulation,
        }
    }

    pub fn is_vacuum(&self) -> bool {
        self.density == 0.0
    }

    /// Density entering the permittivity under the configured convention.
    pub fn response_density(&self) -> f64 {
        match self.permittivity_density {
            PermittivityDensity::GroundPopulation => self.ground_population,
            PermittivityDensity::TotalDensity => self.density,
        }
    }

    /// Collisional width of the medium species at this density.
    pub fn width(&self) -> f64 {
        collisional_width(&self.species, self.density)
    }

    /// `eps(w) = 1 + 4 pi rho a_g(w)`.
    pub fn permittivity(&self, omega: Complex64) -> Complex64 {
        Complex64::new(1.0, 0.0)
            + 4.0 * std::f64::consts::PI
                * self.response_density()
                * polarizability_multilevel_unchecked(&self.species, omega)
    }

    /// Complex refractive index `n(w) = sqrt(eps(w))`.
    pub fn refractive_index(&self, omega: Complex64) -> Result<Complex64> {
        refractive_index(self, omega)
    }

    /// Copy with the species widths floored (see [`AtomSpecies::with_width_floor`]).
    pub fn with_width_floor(&self, floor_rel: f64) -> Self {
        let mut out = self.clone();
        out.species = out.species.with_width_floor(floor_rel);
        out
    }
}

/// Analyticity tag carried by spectral functions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Analyticity {
    /// No poles in the upper half of the complex frequency plane.
    UpperHalfPlane,
    None,
}

/// An evaluable complex-frequency response with a declared analyticity
/// domain. Evaluation is deterministic and side-effect free.
pub struct SpectralFunction {
    eval: Box<dyn Fn(Complex64) -> Complex64 + Send + Sync>,
    pub analyticity: Analyticity,
}

impl SpectralFunction {
    pub fn new(
        eval: impl Fn(Complex64) -> Complex64 + Send + Sync + 'static,
        analyticity: Analyticity,
    ) -> Self {
        SpectralFunction {
            eval: Box::new(eval),
            analyticity,
        }
    }

    pub fn eval(&self, omega: Complex64) -> Complex64 {
        (self.eval)(omega)
    }

    /// Ground-state polarizability of a species as a spectral function.
    pub fn ground_polarizability(species: AtomSpecies) -> Self {
        SpectralFunction::new(
            move |w| polarizability_multilevel_unchecked(&species, w),
            Analyticity::UpperHalfPlane,
        )
    }

    /// Excited-state polarizability of a two-level species.
    pub fn excited_polarizability(species: AtomSpecies) -> Self {
        SpectralFunction::new(
            move |w| {
                let t = species.transition();
                lorentzian_term(-t.frequency, t.dipole_sq, t.width, w)
            },
            Analyticity::UpperHalfPlane,
        )
    }
}

/// One orientation-averaged Lorentzian term,
/// `(d2/3) [1/(w0 - w - i g/2) + 1/(w0 + w + i g/2)]`.
///
/// `w0 < 0` yields the excited-state (inverted) response.
#[inline]
pub fn lorentzian_term(w0: f64, dipole_sq: f64, width: f64, omega: Complex64) -> Complex64 {
    let half_width = Complex64::new(0.0, 0.5 * width);
    let first = Complex64::new(w0, 0.0) - omega - half_width;
    let second = Complex64::new(w0, 0.0) + omega + half_width;
    dipole_sq / 3.0 * (first.inv() + second.inv())
}

/// Orientation-averaged ground-state polarizability of a two-level species.
///
/// At a pole with zero width the value is a true singularity and a domain
/// error is returned.
pub fn polarizability_ground(species: &AtomSpecies, omega: Complex64) -> Result<Complex64> {
    let t = species.transition();
    check_pole(t.frequency, t.width, omega)?;
    Ok(lorentzian_term(t.frequency, t.dipole_sq, t.width, omega))
}

/// Excited-state polarizability: the ground-state form with `w0 -> -w0`.
pub fn polarizability_excited(species: &AtomSpecies, omega: Complex64) -> Result<Complex64> {
    let t = species.transition();
    check_pole(t.frequency, t.width, omega)?;
    Ok(lorentzian_term(-t.frequency, t.dipole_sq, t.width, omega))
}

/// Multi-level polarizability: the sum of the Lorentzian terms of every
/// transition. Reduces to [`polarizability_ground`] for a single transition.
pub fn polarizability_multilevel(species: &AtomSpecies, omega: Complex64) -> Result<Complex64> {
    if species.transitions.is_empty() {
        return Err(Error::Domain("empty transition list".into()));
    }
    for t in &species.transitions {
        check_pole(t.frequency, t.width, omega)?;
    }
    Ok(polarizability_multilevel_unchecked(species, omega))
}

#[inline]
pub(crate) fn polarizability_multilevel_unchecked(
    species: &AtomSpecies,
    omega: Complex64,
) -> Complex64 {
    species
        .transitions
        .iter()
        .map(|t| lorentzian_term(t.frequency, t.dipole_sq, t.width, omega))
        .sum()
}

fn check_pole(w0: f64, width: f64, omega: Complex64) -> Result<()> {
    if width == 0.0 && omega.im == 0.0 && (omega.re.abs() - w0).abs() == 0.0 {
        return Err(Error::Domain(format!(
            "polarizability pole at |omega| = {w0} with zero width"
        )));
    }
    Ok(())
}

/// Complex refractive index of a dilute medium,
/// `n = sqrt(1 + 4 pi rho a_g)` with `Im n >= 0` on the positive real
/// frequency axis.
///
/// A strictly negative real permittivity with vanishing imaginary part makes
/// the branch ambiguous; this is reported, not guessed.
pub fn refractive_index(medium: &MediumSpec, omega: Complex64) -> Result<Complex64> {
    let eps = medium.permittivity(omega);
    if eps.im == 0.0 && eps.re < 0.0 {
        return Err(Error::BranchAmbiguity {
            re: eps.re,
            im: eps.im,
        });
    }
    let mut n = eps.sqrt();
    if n.im < 0.0 {
        n = -n;
    }
    Ok(n)
}

/// Thermal (Boltzmann) split of a total density over the ground and excited
/// level of a two-level atom. Returns `(ground, excited)` with
/// `ground + excited == n0` exactly; `T = 0` is the frozen ground state.
pub fn boltzmann_populations(n0: f64, omega_eg: f64, temperature: f64) -> (f64, f64) {
    if temperature == 0.0 {
        return (n0, 0.0);
    }
    let boltzmann = (-omega_eg / temperature).exp();
    let ground = n0 / (1.0 + boltzmann);
    // Closure by construction: the excited population is the remainder.
    let excited = n0 - ground;
    (ground, excited)
}

/// Collisional width `gamma = gamma_nat + n0 * k_br` of a species at
/// density `n0`.
pub fn collisional_width(species: &AtomSpecies, n0: f64) -> f64 {
    species.natural_width + n0 * species.broadening_rate
}

/// Static ground-state polarizability `2 d^2 / (3 w0)` of a two-level
/// species, ignoring the width.
pub fn static_polarizability(species: &AtomSpecies) -> f64 {
    let t = species.transition();
    2.0 * t.dipole_sq / (3.0 * t.frequency)
}
