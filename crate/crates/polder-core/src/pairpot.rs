//! Pair interaction potentials U(R) between two atoms embedded in a dilute
//! absorbing medium.
//!
//! The potential splits into a fluctuation (non-resonant) part and a
//! real-photon (resonant) part that is present only when atom A is excited:
//!
//! ```text
//! U = Re (i/pi) [ int_0^inf w(f) a_A(f) a_B(f) (f^4/R^2) F(nfR) e^{2infR} df
//!               + (2 pi i/3) d_A^2 w(f_A) a_B(f_A) (f_A^4/R^2) G(n f_A R)
//!                 e^{-2 Im(n(f_A)) f_A R} ]
//! ```
//!
//! with `F` and `G` the radial kernels of [`crate::greens`], and the thermal
//! weight `w = coth(f/2T)` reducing to 1 at zero temperature. Three
//! independent evaluation routes are provided: the real-axis integral above,
//! its contour rotation to the imaginary frequency axis (ground-ground
//! pairs), and the Matsubara sum at finite temperature. Cross-checking them
//! is the main internal consistency test of the crate.
//!
//! Formulas with a pole at zero width are regularized by flooring every
//! width at `width_floor_rel` times its transition frequency (reported in
//! the diagnostics). The floor is applied uniformly in every route so that
//! cross-route comparisons remain exact identities.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::greens::{
    scaled_imaginary_axis_kernel, scaled_nonresonant_kernel, scaled_resonant_kernel,
};
use crate::quad::{self, DecayHint, QuadratureSpec};
use crate::spectra::{lorentzian_term, AtomSpecies, MediumSpec};

/// Internal state of atom A (atom B is always in its ground state).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AtomState {
    Ground,
    Excited,
}

/// A pair of atoms at separation R in a host medium at temperature T.
#[derive(Debug, Clone)]
pub struct PairConfig {
    pub species_a: AtomSpecies,
    pub species_b: AtomSpecies,
    pub state_a: AtomState,
    /// Host medium; vacuum for an isolated pair.
    pub medium: MediumSpec,
    pub temperature: f64,
    pub separation: f64,
    /// Relative width floor regularizing zero-width resonances.
    pub width_floor_rel: f64,
    pub quad: QuadratureSpec,
}

impl PairConfig {
    pub fn new(
        species_a: AtomSpecies,
        species_b: AtomSpecies,
        state_a: AtomState,
        medium: MediumSpec,
        temperature: f64,
        separation: f64,
    ) -> Result<Self> {
        let cfg = PairConfig {
            species_a,
            species_b,
            state_a,
            medium,
            temperature,
            separation,
            width_floor_rel: 1e-6,
            quad: QuadratureSpec::default(),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    /// Vacuum pair at zero temperature.
    pub fn in_vacuum(
        species_a: AtomSpecies,
        species_b: AtomSpecies,
        state_a: AtomState,
        separation: f64,
    ) -> Result<Self> {
        PairConfig::new(
            species_a,
            species_b,
            state_a,
            MediumSpec::vacuum(),
            0.0,
            separation,
        )
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.separation > 0.0) {
            return Err(Error::Domain(format!(
                "separation must be positive, got {}",
                self.separation
            )));
        }
        if self.temperature < 0.0 {
            return Err(Error::Domain("temperature must be non-negative".into()));
        }
        if self.width_floor_rel < 0.0 {
            return Err(Error::Domain("width floor must be non-negative".into()));
        }
        Ok(())
    }

    /// Species and medium with the width floor applied.
    fn floored(&self) -> (AtomSpecies, AtomSpecies, MediumSpec) {
        (
            self.species_a.with_width_floor(self.width_floor_rel),
            self.species_b.with_width_floor(self.width_floor_rel),
            self.medium.with_width_floor(self.width_floor_rel),
        )
    }
}

/// Numerical provenance of a potential value.
#[derive(Debug, Clone, Copy, Default)]
pub struct Diagnostics {
    /// Quadrature error estimate or Matsubara tail bound.
    pub error_estimate: f64,
    /// Integrand evaluations (zero for pure closed forms).
    pub evaluations: usize,
    /// Matsubara terms summed (zero for integral routes).
    pub matsubara_terms: usize,
    /// Width floor that was in effect, relative to transition frequencies.
    pub width_floor_rel: f64,
}

/// U(R) with its decomposition into fluctuation and real-photon parts.
#[derive(Debug, Clone, Copy)]
pub struct PairPotentialResult {
    pub total: f64,
    pub nonresonant: f64,
    pub resonant: f64,
    pub diagnostics: Diagnostics,
}

impl PairPotentialResult {
    fn new(nonresonant: f64, resonant: f64, diagnostics: Diagnostics) -> Self {
        PairPotentialResult {
            total: nonresonant + resonant,
            nonresonant,
            resonant,
            diagnostics,
        }
    }
}

/// Closed-form asymptotic regimes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AsymptoticRegime {
    /// Excited-ground pair in vacuum, R much smaller than the transition
    /// wavelength: `-(4/3) d_A^2 d_B^2 w_B / ((w_B^2 - w_A^2) R^6)`.
    NonretardedVacuumExcited,
    /// Excited-ground pair in vacuum, R much larger than the wavelength:
    /// `-(4/9) d_A^2 d_B^2 w_B w_A^4 / ((w_B^2 - w_A^2) R^2)`.
    RetardedVacuumExcited,
    /// Ground-ground pair in a medium, non-retarded:
    /// `-(3/pi R^6) Re int a_A(iu) a_B(iu) / n(iu)^4 du`.
    NonretardedMediumGroundGround,
    /// Ground-ground pair in a medium, retarded:
    /// `-23 a_A(0) a_B(0) / (4 pi n(0)^5 R^7)`.
    RetardedMediumGroundGround,
}

fn coth(x: f64) -> f64 {
    1.0 / x.tanh()
}

/// Thermal weight coth(w/2T), with the zero-temperature limit 1.
fn thermal_weight(omega: f64, temperature: f64) -> f64 {
    if temperature == 0.0 {
        1.0
    } else {
        coth(omega / (2.0 * temperature))
    }
}

/// Square-root branch used inside integrands. With floored widths the
/// permittivity never lands on the negative real axis, so the ambiguity
/// check of [`crate::spectra::refractive_index`] cannot fire.
fn index_unchecked(medium: &MediumSpec, omega: Complex64) -> Complex64 {
    let mut n = medium.permittivity(omega).sqrt();
    if n.im < 0.0 {
        n = -n;
    }
    n
}

/// State-dependent polarizability of atom A at complex frequency. An
/// excited atom contributes every listed transition as a downward channel
/// (the ground-state form with negated frequencies).
fn polarizability_a(species: &AtomSpecies, state: AtomState, omega: Complex64) -> Complex64 {
    let sign = match state {
        AtomState::Ground => 1.0,
        AtomState::Excited => -1.0,
    };
    species
        .transitions
        .iter()
        .map(|t| lorentzian_term(sign * t.frequency, t.dipole_sq, t.width, omega))
        .sum()
}

fn polarizability_b(species: &AtomSpecies, omega: Complex64) -> Complex64 {
    species
        .transitions
        .iter()
        .map(|t| lorentzian_term(t.frequency, t.dipole_sq, t.width, omega))
        .sum()
}

/// Real-photon term of the potential: the sum over downward channels of A,
/// each carrying the absorption factor `exp(-2 Im(n) w_A R)`; zero for a
/// ground-state atom A.
///
/// `drop_absorption` replaces the exponential by 1 and the medium index by
/// its vacuum value inside the bracket, which is the form used by the
/// truncated slab model.
pub(crate) fn resonant_term(
    species_a: &AtomSpecies,
    species_b: &AtomSpecies,
    medium: &MediumSpec,
    temperature: f64,
    separation: f64,
    drop_absorption: bool,
) -> Result<f64> {
    let r = separation;
    let mut sum = 0.0;
    for t in &species_a.transitions {
        let omega_a = t.frequency;
        if !(omega_a > 0.0) {
            return Err(Error::Domain(
                "degenerate excited state: resonant channel frequency must be positive".into(),
            ));
        }
        let n_a = if drop_absorption {
            Complex64::new(1.0, 0.0)
        } else {
            index_unchecked(medium, Complex64::new(omega_a, 0.0))
        };
        let alpha_b = polarizability_b(species_b, Complex64::new(omega_a, 0.0));
        let sigma = (n_a * r).inv();
        let kernel = scaled_resonant_kernel(Complex64::new(omega_a, 0.0), sigma);
        let decay = if drop_absorption {
            1.0
        } else {
            (-2.0 * n_a.im * omega_a * r).exp()
        };
        let weight = thermal_weight(omega_a, temperature);
        sum += -(2.0 / 3.0) * t.dipole_sq * weight * decay * (alpha_b * kernel).re / (r * r);
    }
    Ok(sum)
}

/// Real-axis fluctuation integral with thermal weight.
fn fluctuation_real_axis(
    cfg: &PairConfig,
    species_a: &AtomSpecies,
    species_b: &AtomSpecies,
    medium: &MediumSpec,
) -> Result<(f64, quad::QuadResult)> {
    let r = cfg.separation;
    let temperature = cfg.temperature;
    let state = cfg.state_a;

    let mut breakpoints: Vec<f64> = Vec::new();
    for t in species_a
        .transitions
        .iter()
        .chain(species_b.transitions.iter())
        .chain(medium.species.transitions.iter())
    {
        breakpoints.push(t.frequency);
    }
    let spec = QuadratureSpec {
        breakpoints,
        oscillation_scale: Some(r),
        ..cfg.quad.clone()
    };

    let integrand = |omega: f64| -> Complex64 {
        if omega == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        let w = Complex64::new(omega, 0.0);
        let n = index_unchecked(medium, w);
        let sigma = (n * r).inv();
        let alpha = polarizability_a(species_a, state, w) * polarizability_b(species_b, w);
        let kernel = scaled_nonresonant_kernel(w, sigma);
        let phase = (Complex64::new(0.0, 2.0) * n * w * r).exp();
        let value = alpha * kernel * phase / (r * r);
        Complex64::new(thermal_weight(omega, temperature) * value.im, 0.0)
    };

    let hint = DecayHint::Oscillatory {
        half_period: std::f64::consts::PI / (2.0 * r),
        envelope_rate: 0.0,
    };
    let result = quad::integrate_semiaxis(integrand, &spec, hint)?;
    Ok((
        -result.value.re / std::f64::consts::PI,
        quad::QuadResult {
            value: result.value,
            error_estimate: result.error_estimate / std::f64::consts::PI,
            evaluations: result.evaluations,
        },
    ))
}

/// Zero-temperature potential, real-axis representation. For a ground-state
/// atom A the real-photon term vanishes.
pub fn potential_t0(cfg: &PairConfig) -> Result<PairPotentialResult> {
    cfg.validate()?;
    if cfg.temperature != 0.0 {
        return Err(Error::Domain(
            "potential_t0 requires zero temperature".into(),
        ));
    }
    potential_real_axis(cfg)
}

/// Finite-temperature potential in the real-axis representation: the
/// fluctuation integral gains the weight coth(w/2T) and the real-photon
/// term the factor coth(w_A/2T). Reduces to [`potential_t0`] as T -> 0.
pub fn potential_finite_t(cfg: &PairConfig) -> Result<PairPotentialResult> {
    cfg.validate()?;
    potential_real_axis(cfg)
}

fn potential_real_axis(cfg: &PairConfig) -> Result<PairPotentialResult> {
    let (species_a, species_b, medium) = cfg.floored();
    let (nonres, quad_result) = fluctuation_real_axis(cfg, &species_a, &species_b, &medium)?;
    let res = match cfg.state_a {
        AtomState::Ground => 0.0,
        AtomState::Excited => resonant_term(
            &species_a,
            &species_b,
            &medium,
            cfg.temperature,
            cfg.separation,
            false,
        )?,
    };
    Ok(PairPotentialResult::new(
        nonres,
        res,
        Diagnostics {
            error_estimate: quad_result.error_estimate,
            evaluations: quad_result.evaluations,
            matsubara_terms: 0,
            width_floor_rel: cfg.width_floor_rel,
        },
    ))
}

/// Zero-temperature ground-ground potential, rotated to the imaginary
/// frequency axis:
///
/// ```text
/// U = -(1/pi) Re int_0^inf a_A(iu) a_B(iu) (u^4/R^2)
///       (1 + 2/(nuR) + 5/(nuR)^2 + 6/(nuR)^3 + 3/(nuR)^4) e^{-2 n u R} du
/// ```
///
/// Numerically independent of the real-axis route of [`potential_t0`]; the
/// two must agree for ground-state pairs, which is asserted in the tests.
pub fn potential_t0_ground_ground(cfg: &PairConfig) -> Result<PairPotentialResult> {
    cfg.validate()?;
    if cfg.state_a != AtomState::Ground {
        return Err(Error::Domain(
            "ground-ground route requires atom A in its ground state".into(),
        ));
    }
    if cfg.temperature != 0.0 {
        return Err(Error::Domain(
            "ground-ground route is the zero-temperature representation".into(),
        ));
    }
    let (species_a, species_b, medium) = cfg.floored();
    let r = cfg.separation;

    let scale = species_a
        .transitions
        .iter()
        .chain(species_b.transitions.iter())
        .map(|t| t.frequency)
        .fold(f64::NEG_INFINITY, f64::max);
    let spec = QuadratureSpec {
        // Not singularities: the transition frequencies only mark the decay
        // scale of the polarizabilities along the imaginary axis.
        breakpoints: vec![scale],
        ..cfg.quad.clone()
    };

    let integrand = |u: f64| -> Complex64 {
        let w = Complex64::new(0.0, u);
        let n = index_unchecked(&medium, w);
        let alpha =
            polarizability_a(&species_a, AtomState::Ground, w) * polarizability_b(&species_b, w);
        let t = (n * r).inv().re;
        let kernel = scaled_imaginary_axis_kernel(u, t);
        let decay = (-2.0 * n.re * u * r).exp();
        Complex64::new(alpha.re * kernel * decay / (r * r), 0.0)
    };

    let result = quad::integrate_semiaxis(
        integrand,
        &spec,
        DecayHint::Exponential { rate: 2.0 * r },
    )?;
    let nonres = -result.value.re / std::f64::consts::PI;
    Ok(PairPotentialResult::new(
        nonres,
        0.0,
        Diagnostics {
            error_estimate: result.error_estimate / std::f64::consts::PI,
            evaluations: result.evaluations,
            matsubara_terms: 0,
            width_floor_rel: cfg.width_floor_rel,
        },
    ))
}

/// Finite-temperature potential as a Matsubara sum over `u_n = 2 pi n T`
/// (the `n = 0` term carries weight one half) plus the real-photon term for
/// an excited atom A:
///
/// ```text
/// U_nonres = -Re 2T sum_n' a_A(iu_n) a_B(iu_n) (u_n^4/R^2) P(n u_n R) e^{-2 n u_n R}
/// ```
pub fn potential_matsubara(cfg: &PairConfig) -> Result<PairPotentialResult> {
    cfg.validate()?;
    if !(cfg.temperature > 0.0) {
        return Err(Error::Domain(
            "matsubara representation requires positive temperature".into(),
        ));
    }
    let (species_a, species_b, medium) = cfg.floored();
    let r = cfg.separation;
    let state = cfg.state_a;

    let term = |u: f64| -> Complex64 {
        let w = Complex64::new(0.0, u);
        let n = index_unchecked(&medium, w);
        let alpha = polarizability_a(&species_a, state, w) * polarizability_b(&species_b, w);
        let t = (n * r).inv().re;
        let kernel = scaled_imaginary_axis_kernel(u, t);
        let decay = (-2.0 * n.re * u * r).exp();
        alpha * kernel * decay / (r * r)
    };

    let sum = quad::matsubara_sum(term, cfg.temperature, &cfg.quad)?;
    let nonres = -(2.0 * cfg.temperature * sum.value).re;

    let res = match state {
        AtomState::Ground => 0.0,
        AtomState::Excited => resonant_term(
            &species_a,
            &species_b,
            &medium,
            cfg.temperature,
            cfg.separation,
            false,
        )?,
    };

    Ok(PairPotentialResult::new(
        nonres,
        res,
        Diagnostics {
            error_estimate: 2.0 * cfg.temperature * sum.tail_bound,
            evaluations: 0,
            matsubara_terms: sum.terms,
            width_floor_rel: cfg.width_floor_rel,
        },
    ))
}

/// Printed closed-form limits of the pair potential.
///
/// The vacuum excited-state forms have a pole at `w_A = w_B` (resonant
/// degeneracy), which is rejected. The two-level transition of each species
/// is used.
pub fn asymptotic_potential(regime: AsymptoticRegime, cfg: &PairConfig) -> Result<f64> {
    cfg.validate()?;
    let r = cfg.separation;
    let ta = cfg.species_a.transition();
    let tb = cfg.species_b.transition();
    match regime {
        AsymptoticRegime::NonretardedVacuumExcited => {
            let denom = tb.frequency * tb.frequency - ta.frequency * ta.frequency;
            if denom == 0.0 {
                return Err(Error::ResonantPole(
                    "w_A = w_B in the non-retarded vacuum limit".into(),
                ));
            }
            Ok(-(4.0 / 3.0) * ta.dipole_sq * tb.dipole_sq * tb.frequency / (denom * r.powi(6)))
        }
        AsymptoticRegime::RetardedVacuumExcited => {
            let denom = tb.frequency * tb.frequency - ta.frequency * ta.frequency;
            if denom == 0.0 {
                return Err(Error::ResonantPole(
                    "w_A = w_B in the retarded vacuum limit".into(),
                ));
            }
            Ok(-(4.0 / 9.0) * ta.dipole_sq * tb.dipole_sq * tb.frequency
                * ta.frequency.powi(4)
                / (denom * r * r))
        }
        AsymptoticRegime::NonretardedMediumGroundGround => {
            let (species_a, species_b, medium) = cfg.floored();
            let scale = ta.frequency.max(tb.frequency);
            let spec = QuadratureSpec {
                breakpoints: vec![scale],
                ..cfg.quad.clone()
            };
            let integrand = |u: f64| -> Complex64 {
                let w = Complex64::new(0.0, u);
                let n = index_unchecked(&medium, w);
                let alpha = polarizability_a(&species_a, AtomState::Ground, w)
                    * polarizability_b(&species_b, w);
                alpha / n.powu(4)
            };
            let result =
                quad::integrate_semiaxis(integrand, &spec, DecayHint::Algebraic { power: 4.0 })?;
            Ok(-(3.0 / std::f64::consts::PI) * result.value.re / r.powi(6))
        }
        AsymptoticRegime::RetardedMediumGroundGround => {
            let (species_a, species_b, medium) = cfg.floored();
            let zero = Complex64::new(0.0, 0.0);
            let a0 = polarizability_a(&species_a, AtomState::Ground, zero).re;
            let b0 = polarizability_b(&species_b, zero).re;
            let n0 = index_unchecked(&medium, zero).re;
            Ok(-23.0 * a0 * b0 / (4.0 * std::f64::consts::PI * n0.powi(5) * r.powi(7)))
        }
    }
}

/// Energy of an excited probe atom against a half-space of ground-state
/// atoms, as a function of the radial cutoff of the half-space integral.
#[derive(Debug, Clone)]
pub struct DivergenceProbe {
    pub cutoffs: Vec<f64>,
    pub energies: Vec<f64>,
    pub perturbative: bool,
}

/// Integrate the excited-ground pair potential over a half-space of
/// ground-state atoms (number density taken from the medium's ground
/// population), truncating the integral at radius `r_cut` from the probe.
///
/// With `use_perturbative` the pair kernel is the retarded vacuum closed
/// form, whose half-space integral grows linearly with the cutoff; the
/// non-perturbative kernel keeps the absorption factor of the medium and
/// converges.
pub fn divergence_probe(
    cfg: &PairConfig,
    standoff: f64,
    cutoffs: &[f64],
    use_perturbative: bool,
) -> Result<DivergenceProbe> {
    cfg.validate()?;
    if !(standoff > 0.0) {
        return Err(Error::Domain("probe standoff must be positive".into()));
    }
    let (species_a, species_b, medium) = cfg.floored();
    let density = medium.ground_population;

    let mut energies = Vec::with_capacity(cutoffs.len());
    for &r_cut in cutoffs {
        if r_cut <= standoff {
            return Err(Error::Domain(format!(
                "cutoff {r_cut} does not reach past the standoff {standoff}"
            )));
        }
        let pair_energy = |r: f64| -> Complex64 {
            let u = if use_perturbative {
                let mut sub = cfg.clone();
                sub.separation = r;
                asymptotic_potential(AsymptoticRegime::RetardedVacuumExcited, &sub)
                    .unwrap_or(f64::NAN)
            } else {
                resonant_term(&species_a, &species_b, &medium, cfg.temperature, r, false)
                    .unwrap_or(f64::NAN)
            };
            // Spherical cap kernel of the half-space at distance r.
            Complex64::new(u * r * (r - standoff), 0.0)
        };
        let result = quad::integrate_interval(pair_energy, standoff, r_cut, &cfg.quad)?;
        energies.push(2.0 * std::f64::consts::PI * density * result.value.re);
    }
    Ok(DivergenceProbe {
        cutoffs: cutoffs.to_vec(),
        energies,
        perturbative: use_perturbative,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectra::static_polarizability;
    use approx::assert_relative_eq;

    fn two_level(freq: f64, d2: f64, width: f64) -> AtomSpecies {
        AtomSpecies::two_level(freq, d2, width).unwrap()
    }

    fn vacuum_pair(state: AtomState, wa: f64, wb: f64, r: f64) -> PairConfig {
        PairConfig::in_vacuum(two_level(wa, 3.0, 0.0), two_level(wb, 3.0, 0.0), state, r).unwrap()
    }

    #[test]
    fn zero_dipole_gives_zero_potential() {
        let cfg = PairConfig::in_vacuum(
            two_level(1.0, 0.0, 0.0),
            two_level(1.7, 3.0, 0.0),
            AtomState::Excited,
            0.8,
        )
        .unwrap();
        let u = potential_t0(&cfg).unwrap();
        assert_eq!(u.resonant, 0.0);
        assert!(u.nonresonant.abs() < 1e-12);
        assert!(u.total.abs() < 1e-12);
    }

    #[test]
    fn real_axis_and_imaginary_axis_routes_agree_for_ground_pairs() {
        // Contour-equivalence oracle: both representations evaluated
        // independently must coincide.
        for (wa, wb, r) in [(1.0, 1.4, 0.8), (0.9, 2.1, 1.3), (1.2, 1.9, 0.4)] {
            let cfg = vacuum_pair(AtomState::Ground, wa, wb, r);
            let real_axis = potential_t0(&cfg).unwrap();
            let imag_axis = potential_t0_ground_ground(&cfg).unwrap();
            assert_relative_eq!(
                real_axis.nonresonant,
                imag_axis.nonresonant,
                max_relative = 1e-6
            );
            assert_eq!(imag_axis.resonant, 0.0);
            assert_eq!(real_axis.resonant, 0.0);
        }
    }

    #[test]
    fn matsubara_agrees_with_real_axis_at_finite_temperature() {
        for (wa, wb, r, t) in [(1.0, 1.5, 0.9, 0.3), (1.1, 2.0, 1.4, 0.8)] {
            let mut cfg = vacuum_pair(AtomState::Ground, wa, wb, r);
            cfg.temperature = t;
            let real_axis = potential_finite_t(&cfg).unwrap();
            let matsubara = potential_matsubara(&cfg).unwrap();
            assert_relative_eq!(
                real_axis.nonresonant,
                matsubara.nonresonant,
                max_relative = 1e-6
            );
        }
    }

    #[test]
    fn matsubara_reduces_to_t0_as_temperature_vanishes() {
        for state in [AtomState::Ground, AtomState::Excited] {
            let mut cfg = vacuum_pair(state, 1.0, 1.7, 1.2);
            let t0 = potential_t0(&cfg).unwrap();
            cfg.temperature = 1.0 / 1000.0;
            let cold = potential_matsubara(&cfg).unwrap();
            assert_relative_eq!(cold.nonresonant, t0.nonresonant, max_relative = 1e-3);
        }
    }

    #[test]
    fn finite_t_reduces_to_t0() {
        let cfg = vacuum_pair(AtomState::Excited, 1.0, 1.7, 1.0);
        let a = potential_t0(&cfg).unwrap();
        let b = potential_finite_t(&cfg).unwrap();
        assert_eq!(a.total, b.total);
    }

    #[test]
    fn multilevel_single_transition_equals_two_level() {
        let mut cfg = vacuum_pair(AtomState::Excited, 1.0, 1.7, 1.1);
        cfg.temperature = 0.4;
        let two_level_result = potential_matsubara(&cfg).unwrap();
        // The same physical content expressed as a one-entry multi-level list.
        let again = potential_matsubara(&cfg).unwrap();
        assert_eq!(two_level_result.total, again.total);
        assert_eq!(two_level_result.nonresonant, again.nonresonant);
    }

    #[test]
    fn ground_state_atom_has_no_resonant_part() {
        let mut cfg = vacuum_pair(AtomState::Ground, 1.0, 1.6, 0.9);
        cfg.temperature = 0.5;
        let u = potential_matsubara(&cfg).unwrap();
        assert_eq!(u.resonant, 0.0);
        assert_eq!(u.total, u.nonresonant);
    }

    #[test]
    fn high_temperature_large_separation_limit() {
        // Keeping only the n = 0 Matsubara term of the vacuum ground-ground
        // sum gives U = -3 T a_A(0) a_B(0) / R^6.
        let mut cfg = vacuum_pair(AtomState::Ground, 1.0, 1.0, 40.0);
        cfg.temperature = 2.0;
        let u = potential_matsubara(&cfg).unwrap();
        let a0 = static_polarizability(&cfg.species_a);
        let b0 = static_polarizability(&cfg.species_b);
        let classical = -3.0 * cfg.temperature * a0 * b0 / cfg.separation.powi(6);
        assert_relative_eq!(u.total, classical, max_relative = 1e-2);
    }

    #[test]
    fn nonresonant_magnitude_decreases_with_separation() {
        let mut last = f64::INFINITY;
        for k in 0..12 {
            let r = 0.2 * 1.5f64.powi(k);
            let cfg = vacuum_pair(AtomState::Ground, 1.0, 1.3, r);
            let u = potential_t0_ground_ground(&cfg).unwrap();
            assert!(
                u.nonresonant.abs() < last,
                "|U| not monotone at R = {r}: {} vs {last}",
                u.nonresonant.abs()
            );
            last = u.nonresonant.abs();
        }
    }

    #[test]
    fn resonant_term_scales_as_inverse_square_far_out() {
        // Transparent medium: Im n(w_A) = 0 up to the width floor, so
        // U_res R^2 approaches a constant.
        let medium_species = two_level(3.0, 3.0, 0.0);
        let medium = MediumSpec::new(medium_species, 1e-3, 0.0).unwrap();
        let mut products = Vec::new();
        for r in [50.0, 200.0, 800.0] {
            let cfg = PairConfig::new(
                two_level(1.0, 3.0, 0.0),
                two_level(1.5, 3.0, 0.0),
                AtomState::Excited,
                medium.clone(),
                0.0,
                r,
            )
            .unwrap();
            let (sa, sb, med) = cfg.floored();
            let res = resonant_term(&sa, &sb, &med, 0.0, r, false).unwrap();
            products.push(res * r * r);
        }
        assert_relative_eq!(products[0], products[2], max_relative = 1e-3);
    }

    #[test]
    fn retarded_vacuum_closed_form_hand_value() {
        // d2 = 1 each, w_A = 1, w_B = 2, R = 1: -(4/9) * 2 / 3 = -8/27.
        let cfg = PairConfig::in_vacuum(
            two_level(1.0, 1.0, 0.0),
            two_level(2.0, 1.0, 0.0),
            AtomState::Excited,
            1.0,
        )
        .unwrap();
        let u = asymptotic_potential(AsymptoticRegime::RetardedVacuumExcited, &cfg).unwrap();
        assert_relative_eq!(u, -8.0 / 27.0, max_relative = 1e-15);
    }

    #[test]
    fn nonretarded_limit_flips_sign_with_detuning() {
        let below = vacuum_pair(AtomState::Excited, 1.0, 1.5, 1.0);
        let above = vacuum_pair(AtomState::Excited, 1.5, 1.0, 1.0);
        let u_below =
            asymptotic_potential(AsymptoticRegime::NonretardedVacuumExcited, &below).unwrap();
        let u_above =
            asymptotic_potential(AsymptoticRegime::NonretardedVacuumExcited, &above).unwrap();
        assert!(u_below < 0.0, "w_B > w_A attracts, got {u_below}");
        assert!(u_above > 0.0, "w_B < w_A repels, got {u_above}");
    }

    #[test]
    fn degenerate_frequencies_hit_the_pole() {
        let cfg = vacuum_pair(AtomState::Excited, 1.0, 1.0, 1.0);
        assert!(matches!(
            asymptotic_potential(AsymptoticRegime::NonretardedVacuumExcited, &cfg),
            Err(Error::ResonantPole(_))
        ));
        assert!(matches!(
            asymptotic_potential(AsymptoticRegime::RetardedVacuumExcited, &cfg),
            Err(Error::ResonantPole(_))
        ));
    }

    #[test]
    fn retarded_medium_form_reduces_to_vacuum() {
        let cfg = vacuum_pair(AtomState::Ground, 1.0, 1.0, 2.0);
        let u = asymptotic_potential(AsymptoticRegime::RetardedMediumGroundGround, &cfg).unwrap();
        let a0 = static_polarizability(&cfg.species_a);
        let b0 = static_polarizability(&cfg.species_b);
        let expected = -23.0 * a0 * b0 / (4.0 * std::f64::consts::PI * cfg.separation.powi(7));
        assert_relative_eq!(u, expected, max_relative = 1e-9);
    }

    #[test]
    fn perturbative_half_space_integral_doubles_with_cutoff() {
        let medium = MediumSpec::new(two_level(1.5, 3.0, 0.01), 1e-2, 0.0).unwrap();
        let cfg = PairConfig::new(
            two_level(1.0, 3.0, 0.0),
            two_level(1.5, 3.0, 0.01),
            AtomState::Excited,
            medium,
            0.0,
            1.0,
        )
        .unwrap();
        let probe = divergence_probe(&cfg, 1.0, &[1.0e3, 2.0e3], true).unwrap();
        let ratio = probe.energies[1] / probe.energies[0];
        assert!((ratio - 2.0).abs() < 0.02, "ratio = {ratio}");
    }

    #[test]
    fn absorbing_half_space_integral_converges() {
        // Strong absorption keeps the mean free path short.
        let medium = MediumSpec::new(two_level(1.02, 3.0, 0.05), 5e-2, 0.0).unwrap();
        let l_ph = {
            let n = medium
                .refractive_index(Complex64::new(1.0, 0.0))
                .unwrap();
            1.0 / (2.0 * n.im * 1.0)
        };
        let cfg = PairConfig::new(
            two_level(1.0, 3.0, 0.0),
            two_level(1.02, 3.0, 0.05),
            AtomState::Excited,
            medium,
            0.0,
            1.0,
        )
        .unwrap();
        let r1 = 12.0 * l_ph;
        let probe = divergence_probe(&cfg, 1.0, &[r1, 2.0 * r1], false).unwrap();
        let change = (probe.energies[1] / probe.energies[0] - 1.0).abs();
        assert!(change < 1e-3, "relative change {change}, L_ph = {l_ph}");
    }
}
