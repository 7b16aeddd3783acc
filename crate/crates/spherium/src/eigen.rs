//! Construction of the quasi-exact s-states.
//!
//! An s-state wavefunction depends only on the inter-electron chord length
//! u = r₁₂ and is a finite polynomial Ψ(u) = Σₖ sₖ uᵏ of degree n. The
//! coefficients obey the two-term recurrence
//!
//! ```text
//! s_{k+2} = [ s_{k+1} + (k(k + 2d − 4)/(4R²) − E) sₖ ] / ((k+2)(k + d − 1))
//! ```
//!
//! with s₀ = 1 and s₁ = 1/(d−2) ≡ γ. Termination at degree n forces both
//! s_{n+1}(E) = 0 (the quantization condition, a polynomial of degree
//! ⌊(n+1)/2⌋ in E once 1/(4R²) is eliminated) and the radius relation
//! R²E = (n/2)(n/2 + d − 2). Each admissible energy root therefore pins a
//! discrete sphere radius at which the state is exact.
//!
//! The excitation index m is not chosen; it is read off as the number of
//! zeros of Ψ in the open interval (0, 2R).

use crate::error::{Error, Result};

use nalgebra::DMatrix;

/// Default cap on the spatial dimension for state solving. Everything is
/// assembled in log space, so the cap is overridable where higher d is
/// genuinely wanted.
pub const DEFAULT_MAX_D: u32 = 30;

const NODE_SCAN_POINTS: usize = 10_000;

/// Quantum numbers identifying one quasi-exact s-state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct StateSpec {
    /// Spatial dimension of the embedding space (the electrons live on the
    /// (d−1)-sphere); d ≥ 3.
    pub d: u32,
    /// Polynomial degree parameter, n ≥ 1.
    pub n: u32,
    /// Excitation index: the number of wavefunction zeros in (0, 2R).
    pub m: u32,
}

/// A fully solved s-state: energy, radius and polynomial coefficients.
///
/// Immutable after construction; safe to share across threads.
#[derive(Debug, Clone, PartialEq)]
pub struct SpheriumState {
    spec: StateSpec,
    energy: f64,
    radius: f64,
    coeffs: Vec<f64>,
}

impl SpheriumState {
    pub fn spec(&self) -> StateSpec {
        self.spec
    }

    pub fn d(&self) -> u32 {
        self.spec.d
    }

    pub fn n(&self) -> u32 {
        self.spec.n
    }

    pub fn m(&self) -> u32 {
        self.spec.m
    }

    /// Eigenenergy in hartree.
    pub fn energy(&self) -> f64 {
        self.energy
    }

    /// Sphere radius in bohr at which this state is exact.
    pub fn radius(&self) -> f64 {
        self.radius
    }

    /// Maximal chord length 2R.
    pub fn diameter(&self) -> f64 {
        2.0 * self.radius
    }

    /// Polynomial coefficients (s₀, …, s_n), sₖ in bohr^(−k).
    pub fn coefficients(&self) -> &[f64] {
        &self.coeffs
    }

    /// Unnormalized wavefunction Ψ(u) at chord length u ∈ [0, 2R].
    pub fn eval(&self, u: f64) -> Result<f64> {
        let max = self.diameter();
        if !(0.0..=max).contains(&u) {
            return Err(Error::ChordOutOfRange { u, max });
        }
        Ok(horner(&self.coeffs, u))
    }

    /// Unnormalized wavefunction evaluated from the hyperspherical angles of
    /// both electrons.
    ///
    /// Each angle slice holds (θ₁, …, θ_{d−2}, φ); for d = 3 that is the
    /// ordinary (θ, φ) pair. The relative angle α between the two unit
    /// vectors gives the chord u = R√(2(1 − cos α)).
    pub fn eval_at_angles(&self, angles1: &[f64], angles2: &[f64]) -> Result<f64> {
        let d = self.d();
        let expected = (d - 1) as usize;
        for angles in [angles1, angles2] {
            if angles.len() != expected {
                return Err(Error::BadAngleCount {
                    d,
                    expected,
                    got: angles.len(),
                });
            }
        }
        let cos_alpha = unit_vector(angles1)
            .iter()
            .zip(unit_vector(angles2).iter())
            .map(|(a, b)| a * b)
            .sum::<f64>()
            .clamp(-1.0, 1.0);
        let u = (self.radius * (2.0 * (1.0 - cos_alpha)).sqrt()).clamp(0.0, self.diameter());
        self.eval(u)
    }

    /// Residual of the radial equation at an interior point 0 < u < 2R:
    ///
    /// ```text
    /// [(u²/4R²) − 1] Ψ″ + [u(2d−3)/(4R²) − (d−2)/u] Ψ′ + Ψ/u − EΨ
    /// ```
    ///
    /// Vanishes (to rounding) for exact states. The first-derivative
    /// coefficient −(d−2)/u is the one consistent with the coefficient
    /// recurrence: it makes s₁ = 1/(d−2) the unique regular start and
    /// annihilates every recurrence-built polynomial state.
    pub fn ode_residual(&self, u: f64) -> f64 {
        let d = f64::from(self.d());
        let inv_4r2 = 1.0 / (4.0 * self.radius * self.radius);
        let psi = horner(&self.coeffs, u);
        let dpsi = horner_derivative(&self.coeffs, u);
        let d2psi = horner_second_derivative(&self.coeffs, u);
        (u * u * inv_4r2 - 1.0) * d2psi + (u * (2.0 * d - 3.0) * inv_4r2 - (d - 2.0) / u) * dpsi
            + psi / u
            - self.energy * psi
    }
}

fn horner(coeffs: &[f64], u: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, &c| acc * u + c)
}

fn horner_derivative(coeffs: &[f64], u: f64) -> f64 {
    coeffs
        .iter()
        .enumerate()
        .skip(1)
        .rev()
        .fold(0.0, |acc, (k, &c)| acc * u + k as f64 * c)
}

fn horner_second_derivative(coeffs: &[f64], u: f64) -> f64 {
    coeffs
        .iter()
        .enumerate()
        .skip(2)
        .rev()
        .fold(0.0, |acc, (k, &c)| acc * u + (k * (k - 1)) as f64 * c)
}

/// Embed hyperspherical angles (θ₁, …, θ_{d−2}, φ) as a unit vector.
fn unit_vector(angles: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(angles.len() + 1);
    let mut sin_prod = 1.0;
    for (i, &a) in angles.iter().enumerate() {
        if i + 1 == angles.len() {
            // final azimuthal angle contributes cos φ and sin φ components
            out.push(sin_prod * a.cos());
            out.push(sin_prod * a.sin());
        } else {
            out.push(sin_prod * a.cos());
            sin_prod *= a.sin();
        }
    }
    out
}

fn validate(d: u32, n: u32) -> Result<()> {
    if d < 3 {
        return Err(Error::DimensionTooSmall { d, min: 3 });
    }
    if n < 1 {
        return Err(Error::InvalidDegree(n));
    }
    Ok(())
}

/// Coefficients (ascending in E) of the quantization polynomial s_{n+1}(E).
///
/// The radius relation R²E = (n/2)(n/2 + d − 2) eliminates 1/(4R²) in
/// favor of E, after which each sₖ propagates as a polynomial in E. The
/// returned polynomial has degree ⌊(n+1)/2⌋.
pub fn energy_polynomial(d: u32, n: u32) -> Result<Vec<f64>> {
    validate(d, n)?;
    let df = f64::from(d);
    let nf = f64::from(n);
    // 1/(4R²) = c·E with c = 1/(n(n + 2d − 4))
    let c = 1.0 / (nf * (nf + 2.0 * df - 4.0));
    // sₖ as polynomials in E, ascending coefficients
    let mut s: Vec<Vec<f64>> = vec![vec![1.0], vec![1.0 / (df - 2.0)]];
    for k in 0..n {
        let kf = f64::from(k);
        // factor multiplying sₖ: (k(k+2d−4)·c − 1)·E
        let a = kf * (kf + 2.0 * df - 4.0) * c - 1.0;
        let den = (kf + 2.0) * (kf + df - 1.0);
        let prev = &s[k as usize];
        let cur = &s[(k + 1) as usize];
        let mut next = vec![0.0; cur.len().max(prev.len() + 1)];
        for (i, &v) in cur.iter().enumerate() {
            next[i] += v;
        }
        for (i, &v) in prev.iter().enumerate() {
            next[i + 1] += a * v; // multiply by a·E shifts degree by one
        }
        for v in &mut next {
            *v /= den;
        }
        s.push(next);
    }
    let mut poly = s.pop().expect("recurrence always yields s_{n+1}");
    while poly.len() > 1 && *poly.last().unwrap() == 0.0 {
        poly.pop();
    }
    Ok(poly)
}

fn poly_eval(poly: &[f64], x: f64) -> f64 {
    horner(poly, x)
}

fn poly_deriv_eval(poly: &[f64], x: f64) -> f64 {
    horner_derivative(poly, x)
}

/// Real positive roots of the quantization polynomial: companion-matrix
/// eigenvalues polished by Newton iteration.
fn positive_roots(poly: &[f64]) -> Vec<f64> {
    let degree = poly.len() - 1;
    if degree == 0 {
        return Vec::new();
    }
    let lead = poly[degree];
    let mut roots = Vec::new();
    if degree == 1 {
        roots.push(-poly[0] / lead);
    } else {
        let mut companion = DMatrix::<f64>::zeros(degree, degree);
        for i in 1..degree {
            companion[(i, i - 1)] = 1.0;
        }
        for i in 0..degree {
            companion[(i, degree - 1)] = -poly[i] / lead;
        }
        for ev in companion.complex_eigenvalues().iter() {
            if ev.im.abs() <= 1e-9 * (1.0 + ev.re.abs()) {
                roots.push(ev.re);
            }
        }
    }
    let mut polished: Vec<f64> = roots
        .into_iter()
        .map(|mut e| {
            for _ in 0..50 {
                let f = poly_eval(poly, e);
                let df = poly_deriv_eval(poly, e);
                if df == 0.0 {
                    break;
                }
                let step = f / df;
                e -= step;
                if step.abs() <= 1e-16 * e.abs().max(1.0) {
                    break;
                }
            }
            e
        })
        .filter(|&e| e > 0.0)
        .collect();
    polished.sort_by(|a, b| a.total_cmp(b));
    polished.dedup_by(|a, b| (*a - *b).abs() <= 1e-10 * a.abs().max(1.0));
    polished
}

/// Forward recurrence for the coefficient vector (s₀, …, s_n) of a state
/// with energy `energy` and squared radius `r2`.
fn recurrence_coefficients(d: u32, n: u32, energy: f64, r2: f64) -> Vec<f64> {
    let df = f64::from(d);
    let inv_4r2 = 1.0 / (4.0 * r2);
    let mut s = Vec::with_capacity(n as usize + 1);
    s.push(1.0);
    s.push(1.0 / (df - 2.0));
    for k in 0..n.saturating_sub(1) {
        let kf = f64::from(k);
        let next = (s[(k + 1) as usize]
            + (kf * (kf + 2.0 * df - 4.0) * inv_4r2 - energy) * s[k as usize])
            / ((kf + 2.0) * (kf + df - 1.0));
        s.push(next);
    }
    s.truncate(n as usize + 1);
    s
}

/// Locations of the sign-change zeros of Ψ in the open interval (0, 2R).
fn interior_zeros(coeffs: &[f64], diameter: f64) -> Result<Vec<f64>> {
    let grid = NODE_SCAN_POINTS;
    let h = diameter / grid as f64;
    let mut zeros = Vec::new();
    let mut prev_u = h * 0.5; // stay strictly inside (0, 2R)
    let mut prev_v = horner(coeffs, prev_u);
    for i in 1..grid {
        let u = h * (0.5 + i as f64);
        let u = u.min(diameter - h * 0.5);
        let v = horner(coeffs, u);
        if v == 0.0 {
            zeros.push(u);
            prev_u = u;
            prev_v = if horner(coeffs, u + h * 0.25) >= 0.0 {
                1.0
            } else {
                -1.0
            };
            continue;
        }
        if prev_v * v < 0.0 {
            // bisection refinement
            let (mut lo, mut hi) = (prev_u, u);
            let mut flo = prev_v;
            for _ in 0..80 {
                let mid = 0.5 * (lo + hi);
                let fm = horner(coeffs, mid);
                if fm == 0.0 {
                    lo = mid;
                    hi = mid;
                    break;
                }
                if flo * fm < 0.0 {
                    hi = mid;
                } else {
                    lo = mid;
                    flo = fm;
                }
            }
            zeros.push(0.5 * (lo + hi));
        }
        prev_u = u;
        prev_v = v;
    }
    for pair in zeros.windows(2) {
        if (pair[1] - pair[0]).abs() < 1e-8 * diameter {
            return Err(Error::DegenerateZero(pair[0]));
        }
    }
    Ok(zeros)
}

/// All quasi-exact states for the pair (d, n), ordered by increasing
/// excitation index m; the list index equals m.
pub fn solve_states(d: u32, n: u32) -> Result<Vec<SpheriumState>> {
    solve_states_with_cap(d, n, DEFAULT_MAX_D)
}

/// [`solve_states`] with an explicit dimension cap.
pub fn solve_states_with_cap(d: u32, n: u32, max_d: u32) -> Result<Vec<SpheriumState>> {
    validate(d, n)?;
    if d > max_d {
        return Err(Error::DimensionCapExceeded { d, cap: max_d });
    }
    let poly = energy_polynomial(d, n)?;
    let roots = positive_roots(&poly);
    if roots.is_empty() {
        return Err(Error::EmptySpectrum { d, n });
    }
    let df = f64::from(d);
    let nf = f64::from(n);
    let rhs = 0.5 * nf * (0.5 * nf + df - 2.0);
    let mut states = Vec::with_capacity(roots.len());
    for energy in roots {
        let r2 = rhs / energy;
        let radius = r2.sqrt();
        let coeffs = recurrence_coefficients(d, n, energy, r2);
        let m = interior_zeros(&coeffs, 2.0 * radius)?.len() as u32;
        states.push(SpheriumState {
            spec: StateSpec { d, n, m },
            energy,
            radius,
            coeffs,
        });
    }
    states.sort_by_key(|s| s.m());
    let counts: Vec<usize> = states.iter().map(|s| s.m() as usize).collect();
    if counts.iter().enumerate().any(|(i, &m)| i != m) {
        return Err(Error::NodeCountMismatch {
            d,
            n,
            count: states.len(),
            counts,
        });
    }
    Ok(states)
}

/// The single state (d, n, m).
pub fn solve_state(d: u32, n: u32, m: u32) -> Result<SpheriumState> {
    let states = solve_states(d, n)?;
    let count = states.len();
    states
        .into_iter()
        .find(|s| s.m() == m)
        .ok_or(Error::NoSuchState { d, n, m, count })
}

/// One extra step of the recurrence: s_{n+1}, which must vanish for a
/// solved state. Exposed for verification.
pub fn termination_residual(state: &SpheriumState) -> f64 {
    let d = f64::from(state.d());
    let n = state.n();
    let inv_4r2 = 1.0 / (4.0 * state.radius * state.radius);
    let s = &state.coeffs;
    let k = f64::from(n - 1);
    let s_next = (s[n as usize] + (k * (k + 2.0 * d - 4.0) * inv_4r2 - state.energy) * s[(n - 1) as usize])
        / ((k + 2.0) * (k + d - 1.0));
    let scale = s.iter().fold(0.0f64, |acc, &v| acc.max(v.abs()));
    s_next / scale
}
