//! Closed-form single-atom phase update.
//!
//! With every other phase fixed, the objective restricted to atom `m` of a
//! layer is `J(theta) = const + 2 (C - D) cos(theta) + 2 (A + B) sin(theta)`,
//! where, with `L_{k,i,j} = A_{k,i} B_{i,j}` and target `I`:
//!
//! - `C + jA = sum_{k,j} conj(L_{k,m,j}) sum_{i != m} L_{k,i,j} e^{j theta_i}`
//! - `D + jB = sum_{k,j} L_{k,m,j} conj(I_{k,j})`
//!
//! The stationary points are `atan2(A + B, C - D)` and that angle plus `pi`.
//! Both are evaluated and the one with the lower `J` is kept.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::{wrap_phase, CoefficientEvaluation};
use crate::{ComplexMatrix, Error, Result};

/// Below this fraction of the coefficient scale an atom is treated as having
/// no influence and keeps its phase.
const DEGENERATE_RELATIVE: f64 = 1e-15;

/// The four sinusoid coefficients of one atom.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseCoefficients {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl PhaseCoefficients {
    /// `dJ/dtheta = 2 (A + B) cos(theta) - 2 (C - D) sin(theta)`.
    pub fn derivative(&self, theta: f64) -> f64 {
        2.0 * (self.a + self.b) * theta.cos() - 2.0 * (self.c - self.d) * theta.sin()
    }

    /// The two stationary points, principal root first.
    pub fn roots(&self) -> (f64, f64) {
        let first = (self.a + self.b).atan2(self.c - self.d);
        (first, first + PI)
    }
}

/// Result of one atom update.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UpdateOutcome {
    /// New phase, wrapped to `[0, 2 pi)`.
    pub theta: f64,
    pub objective_before: f64,
    pub objective_after: f64,
    /// `J` at the root that was not selected (equals `objective_after` when
    /// the atom was left unchanged).
    pub rejected_objective: f64,
    pub changed: bool,
}

/// Per-layer state for a sweep over the atoms of one layer.
///
/// The cascades `A` (`S x Q`) and `B` (`Q x S`) do not depend on the layer's
/// own phases, so they are fixed for the whole sweep and folded into the
/// coefficient tensor `L_{k,i,j}` once.
#[derive(Debug, Clone)]
pub struct LayerSweep {
    streams: usize,
    atoms: usize,
    /// Atom-major: `coeffs[i * S * S + k * S + j] = A[k, i] B[i, j]`.
    coeffs: Vec<Complex64>,
    phases: Vec<f64>,
    phasors: Vec<Complex64>,
    target: Vec<Complex64>,
    total: Vec<Complex64>,
    scratch: Vec<Complex64>,
    evaluation: CoefficientEvaluation,
}

impl LayerSweep {
    pub fn new(
        a: &ComplexMatrix,
        b: &ComplexMatrix,
        target: &ComplexMatrix,
        phases: &[f64],
        evaluation: CoefficientEvaluation,
    ) -> Result<Self> {
        let (streams, atoms) = a.shape();
        if b.shape() != (atoms, streams) {
            return Err(Error::dims("layer cascade B", format!("{atoms}x{streams}"), format!("{}x{}", b.nrows(), b.ncols())));
        }
        if target.shape() != (streams, streams) {
            return Err(Error::dims("fitting target", format!("{streams}x{streams}"), format!("{}x{}", target.nrows(), target.ncols())));
        }
        if phases.len() != atoms {
            return Err(Error::dims("layer phases", atoms, phases.len()));
        }
        let ss = streams * streams;
        let mut coeffs = vec![Complex64::new(0.0, 0.0); atoms * ss];
        for i in 0..atoms {
            for k in 0..streams {
                let aki = a[(k, i)];
                for j in 0..streams {
                    coeffs[i * ss + k * streams + j] = aki * b[(i, j)];
                }
            }
        }
        let phasors: Vec<Complex64> = phases.iter().map(|&t| Complex64::from_polar(1.0, t)).collect();
        let target_vec = (0..ss).map(|idx| target[(idx / streams, idx % streams)]).collect();
        let mut sweep = LayerSweep {
            streams,
            atoms,
            coeffs,
            phases: phases.to_vec(),
            phasors,
            target: target_vec,
            total: vec![Complex64::new(0.0, 0.0); ss],
            scratch: vec![Complex64::new(0.0, 0.0); ss],
            evaluation,
        };
        let mut total = vec![Complex64::new(0.0, 0.0); ss];
        sweep.sum_excluding_into(None, &mut total);
        sweep.total = total;
        Ok(sweep)
    }

    pub fn atoms(&self) -> usize {
        self.atoms
    }

    pub fn phases(&self) -> &[f64] {
        &self.phases
    }

    pub fn into_phases(self) -> Vec<f64> {
        self.phases
    }

    fn atom(&self, m: usize) -> &[Complex64] {
        let ss = self.streams * self.streams;
        &self.coeffs[m * ss..(m + 1) * ss]
    }

    fn sum_excluding_into(&self, skip: Option<usize>, acc: &mut [Complex64]) {
        acc.fill(Complex64::new(0.0, 0.0));
        for (i, &phasor) in self.phasors.iter().enumerate() {
            if Some(i) == skip {
                continue;
            }
            for (dst, &l) in acc.iter_mut().zip(self.atom(i)) {
                *dst += l * phasor;
            }
        }
    }

    fn sum_excluding(&self, skip: Option<usize>) -> Vec<Complex64> {
        let mut acc = vec![Complex64::new(0.0, 0.0); self.streams * self.streams];
        self.sum_excluding_into(skip, &mut acc);
        acc
    }

    fn others_into(&self, m: usize, out: &mut [Complex64]) {
        match self.evaluation {
            CoefficientEvaluation::Direct => self.sum_excluding_into(Some(m), out),
            CoefficientEvaluation::Incremental => {
                let phasor = self.phasors[m];
                for ((o, &t), &l) in out.iter_mut().zip(&self.total).zip(self.atom(m)) {
                    *o = t - l * phasor;
                }
            }
        }
    }

    fn others(&self, m: usize) -> Vec<Complex64> {
        let mut out = vec![Complex64::new(0.0, 0.0); self.streams * self.streams];
        self.others_into(m, &mut out);
        out
    }

    fn objective_with(&self, others: &[Complex64], m: usize, phasor: Complex64) -> f64 {
        others
            .iter()
            .zip(self.atom(m))
            .zip(&self.target)
            .map(|((&s, &l), &t)| (s + l * phasor - t).norm_sqr())
            .sum()
    }

    fn coefficients_with(&self, others: &[Complex64], m: usize) -> PhaseCoefficients {
        let mut ca = Complex64::new(0.0, 0.0);
        let mut db = Complex64::new(0.0, 0.0);
        for ((&s, &l), &t) in others.iter().zip(self.atom(m)).zip(&self.target) {
            ca += l.conj() * s;
            db += l * t.conj();
        }
        PhaseCoefficients { a: ca.im, b: db.im, c: ca.re, d: db.re }
    }

    /// Sinusoid coefficients of atom `m` at the current phases.
    pub fn coefficients(&self, m: usize) -> PhaseCoefficients {
        self.coefficients_with(&self.others(m), m)
    }

    /// `J` with atom `m` set to `theta` and everything else unchanged.
    pub fn objective_at(&self, m: usize, theta: f64) -> f64 {
        self.objective_with(&self.others(m), m, Complex64::from_polar(1.0, theta))
    }

    /// Current `J`.
    pub fn objective(&self) -> f64 {
        let h = self.sum_excluding(None);
        h.iter().zip(&self.target).map(|(&a, &b)| (a - b).norm_sqr()).sum()
    }

    /// Current `A Phi B` as an `S x S` matrix.
    pub fn equivalent(&self) -> ComplexMatrix {
        let h = self.sum_excluding(None);
        ComplexMatrix::from_row_slice(self.streams, self.streams, &h)
    }

    /// Replaces the phase of atom `m` by the better closed-form root.
    pub fn update(&mut self, m: usize) -> UpdateOutcome {
        let mut others = std::mem::take(&mut self.scratch);
        self.others_into(m, &mut others);
        let outcome = self.update_with(m, &others);
        self.scratch = others;
        outcome
    }

    fn update_with(&mut self, m: usize, others: &[Complex64]) -> UpdateOutcome {
        let current = self.phasors[m];
        let before = self.objective_with(others, m, current);
        let coeffs = self.coefficients_with(others, m);

        let scale: f64 = others
            .iter()
            .zip(self.atom(m))
            .zip(&self.target)
            .map(|((s, l), t)| l.norm() * (s.norm() + t.norm()))
            .sum();
        let amplitude = (coeffs.a + coeffs.b).hypot(coeffs.c - coeffs.d);
        let unchanged = UpdateOutcome {
            theta: self.phases[m],
            objective_before: before,
            objective_after: before,
            rejected_objective: before,
            changed: false,
        };
        if scale == 0.0 || amplitude <= DEGENERATE_RELATIVE * scale {
            return unchanged;
        }

        let (first, second) = coeffs.roots();
        let j_first = self.objective_with(others, m, Complex64::from_polar(1.0, first));
        let j_second = self.objective_with(others, m, Complex64::from_polar(1.0, second));
        let (theta, after, rejected) = if j_first <= j_second {
            (first, j_first, j_second)
        } else {
            (second, j_second, j_first)
        };
        // rounding can leave the best root a hair above an already-optimal phase
        if after > before {
            return UpdateOutcome { rejected_objective: rejected, ..unchanged };
        }

        let theta = wrap_phase(theta);
        let phasor = Complex64::from_polar(1.0, theta);
        self.phases[m] = theta;
        self.phasors[m] = phasor;
        if self.evaluation == CoefficientEvaluation::Incremental {
            let ss = self.streams * self.streams;
            let own = &self.coeffs[m * ss..(m + 1) * ss];
            for ((t, &s), &l) in self.total.iter_mut().zip(others).zip(own) {
                *t = s + l * phasor;
            }
        }
        UpdateOutcome {
            theta,
            objective_before: before,
            objective_after: after,
            rejected_objective: rejected,
            changed: true,
        }
    }
}

/// Coefficients `(A, B, C, D)` of atom `m` for cascades `r`, `t` and the target.
pub fn phase_coefficients(
    r: &ComplexMatrix,
    t: &ComplexMatrix,
    target: &ComplexMatrix,
    phases: &[f64],
    m: usize,
) -> Result<PhaseCoefficients> {
    let sweep = LayerSweep::new(r, t, target, phases, CoefficientEvaluation::Direct)?;
    if m >= sweep.atoms() {
        return Err(Error::invalid("atom index", format!("{m} out of range for {} atoms", sweep.atoms())));
    }
    Ok(sweep.coefficients(m))
}

/// Optimal phase of atom `m` given cascades `r` (`S x Q`), `t` (`Q x S`),
/// the fitting target and the layer's current phases.
pub fn phase_update_closed_form(
    r: &ComplexMatrix,
    t: &ComplexMatrix,
    target: &ComplexMatrix,
    phases: &[f64],
    m: usize,
) -> Result<f64> {
    let mut sweep = LayerSweep::new(r, t, target, phases, CoefficientEvaluation::Direct)?;
    if m >= sweep.atoms() {
        return Err(Error::invalid("atom index", format!("{m} out of range for {} atoms", sweep.atoms())));
    }
    Ok(sweep.update(m).theta)
}
