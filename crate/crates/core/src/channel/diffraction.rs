//! Rayleigh-Sommerfeld coupling between adjacent layers of a conventional SIM.
//!
//! Atoms sit on centered uniform rectangular grids, layers are coaxial and
//! parallel. Ports sit on a centered line along `x`, one layer spacing in
//! front of the first TX layer (and behind the last RX layer).

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::{ComplexMatrix, Error, Result};

/// Which transceiver a layer belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Tx,
    Rx,
}

/// Atom grid of one layer: `cols` atoms along `x`, `rows` along `y`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridShape {
    pub cols: usize,
    pub rows: usize,
}

impl GridShape {
    /// Square grid holding `atoms` atoms; `atoms` must be a perfect square.
    pub fn square(atoms: usize) -> Result<Self> {
        let side = (atoms as f64).sqrt().round() as usize;
        if side * side != atoms || atoms == 0 {
            return Err(Error::invalid(
                "grid shape",
                format!("{atoms} atoms do not form a square grid"),
            ));
        }
        Ok(GridShape { cols: side, rows: side })
    }

    pub fn len(&self) -> usize {
        self.cols * self.rows
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// In-plane position of atom `index` (row-major) for the given spacing.
    pub fn position(&self, index: usize, spacing: f64) -> (f64, f64) {
        let (ix, iy) = (index % self.cols, index / self.cols);
        let x = (ix as f64 - (self.cols as f64 - 1.0) / 2.0) * spacing;
        let y = (iy as f64 - (self.rows as f64 - 1.0) / 2.0) * spacing;
        (x, y)
    }
}

/// Geometry of a conventional multi-layer SIM pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MultiLayerTopology {
    pub streams: usize,
    /// TX layer count `L`.
    pub tx_layers: usize,
    /// RX layer count `K`.
    pub rx_layers: usize,
    pub tx_grid: GridShape,
    pub rx_grid: GridShape,
    /// Adjacent atom spacing in meters.
    pub atom_spacing: f64,
    /// Adjacent layer spacing in meters.
    pub layer_spacing: f64,
    /// Spacing of the port line in meters.
    pub port_spacing: f64,
    /// Meta-atom area `A_t` in square meters.
    pub atom_area: f64,
    pub wavelength: f64,
}

impl MultiLayerTopology {
    /// Half-wavelength atom and layer spacing, `A_t = (lambda/2)^2`, `L = K = layers`
    /// and square grids of `atoms` atoms on both sides.
    pub fn half_wavelength(streams: usize, layers: usize, atoms: usize, wavelength: f64) -> Result<Self> {
        let grid = GridShape::square(atoms)?;
        let half = wavelength / 2.0;
        let topology = MultiLayerTopology {
            streams,
            tx_layers: layers,
            rx_layers: layers,
            tx_grid: grid,
            rx_grid: grid,
            atom_spacing: half,
            layer_spacing: half,
            port_spacing: half,
            atom_area: half * half,
            wavelength,
        };
        topology.validate()?;
        Ok(topology)
    }

    pub fn validate(&self) -> Result<()> {
        if self.streams == 0 || self.tx_layers == 0 || self.rx_layers == 0 {
            return Err(Error::invalid("multi-layer topology", "streams and layer counts must be >= 1"));
        }
        if self.tx_grid.is_empty() || self.rx_grid.is_empty() {
            return Err(Error::invalid("multi-layer topology", "layers must hold at least one atom"));
        }
        let lengths = [
            ("atom_spacing", self.atom_spacing),
            ("layer_spacing", self.layer_spacing),
            ("port_spacing", self.port_spacing),
            ("atom_area", self.atom_area),
            ("wavelength", self.wavelength),
        ];
        for (name, v) in lengths {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::invalid("multi-layer topology", format!("{name} must be positive, got {v}")));
            }
        }
        Ok(())
    }

    pub fn tx_atoms(&self) -> usize {
        self.tx_grid.len()
    }

    pub fn rx_atoms(&self) -> usize {
        self.rx_grid.len()
    }

    pub fn total_atoms(&self) -> usize {
        self.tx_layers * self.tx_atoms() + self.rx_layers * self.rx_atoms()
    }

    fn port_position(&self, port: usize) -> (f64, f64) {
        let x = (port as f64 - (self.streams as f64 - 1.0) / 2.0) * self.port_spacing;
        (x, 0.0)
    }
}

/// Diffraction coefficient between two atoms at distance `r` on parallel
/// planes `layer_spacing` apart:
/// `(A_t cos(chi) / r) (1 / (2 pi r) - j / lambda) e^{j 2 pi r / lambda}` with
/// `cos(chi) = layer_spacing / r`.
pub fn rayleigh_sommerfeld_coefficient(r: f64, layer_spacing: f64, atom_area: f64, wavelength: f64) -> Complex64 {
    let cos_chi = layer_spacing / r;
    let near = Complex64::new(1.0 / (2.0 * PI * r), -1.0 / wavelength);
    Complex64::from_polar(atom_area * cos_chi / r, 2.0 * PI * r / wavelength) * near
}

fn coupling(
    topology: &MultiLayerTopology,
    row_points: &[(f64, f64)],
    col_points: &[(f64, f64)],
) -> Result<ComplexMatrix> {
    let d = topology.layer_spacing;
    let mut entries = Vec::with_capacity(row_points.len() * col_points.len());
    for (i, &(xr, yr)) in row_points.iter().enumerate() {
        for (j, &(xc, yc)) in col_points.iter().enumerate() {
            let r = ((xr - xc).powi(2) + (yr - yc).powi(2) + d * d).sqrt();
            if r == 0.0 {
                return Err(Error::DegenerateGeometry { row: i, col: j });
            }
            entries.push(rayleigh_sommerfeld_coefficient(r, d, topology.atom_area, topology.wavelength));
        }
    }
    Ok(ComplexMatrix::from_row_slice(row_points.len(), col_points.len(), &entries))
}

/// Transmission matrix of layer `layer_index` (1-based) on the given side.
///
/// TX: layer 1 is `W x S` (ports to first layer), layer `l > 1` is `W x W`
/// with rows on layer `l` and columns on layer `l - 1`.
/// RX: layer 1 is `S x U` (last layer to ports), layer `k > 1` is `U x U`
/// with rows on layer `k - 1` and columns on layer `k`.
pub fn build_diffraction_matrix(topology: &MultiLayerTopology, side: Side, layer_index: usize) -> Result<ComplexMatrix> {
    topology.validate()?;
    let (grid, count) = match side {
        Side::Tx => (topology.tx_grid, topology.tx_layers),
        Side::Rx => (topology.rx_grid, topology.rx_layers),
    };
    if layer_index == 0 || layer_index > count {
        return Err(Error::InvalidLayer { index: layer_index, count });
    }
    let atoms: Vec<(f64, f64)> = (0..grid.len()).map(|i| grid.position(i, topology.atom_spacing)).collect();
    if layer_index == 1 {
        let ports: Vec<(f64, f64)> = (0..topology.streams).map(|p| topology.port_position(p)).collect();
        match side {
            Side::Tx => coupling(topology, &atoms, &ports),
            Side::Rx => coupling(topology, &ports, &atoms),
        }
    } else {
        coupling(topology, &atoms, &atoms)
    }
}

/// `W^1, ..., W^L`.
pub fn tx_diffraction_matrices(topology: &MultiLayerTopology) -> Result<Vec<ComplexMatrix>> {
    (1..=topology.tx_layers)
        .map(|l| build_diffraction_matrix(topology, Side::Tx, l))
        .collect()
}

/// `U^1, ..., U^K`.
pub fn rx_diffraction_matrices(topology: &MultiLayerTopology) -> Result<Vec<ComplexMatrix>> {
    (1..=topology.rx_layers)
        .map(|k| build_diffraction_matrix(topology, Side::Rx, k))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    const LAMBDA: f64 = 0.0107;

    #[test]
    fn facing_atoms_at_half_wavelength() {
        let a_t = (LAMBDA / 2.0).powi(2);
        let got = rayleigh_sommerfeld_coefficient(LAMBDA / 2.0, LAMBDA / 2.0, a_t, LAMBDA);
        let expected = Complex64::new(a_t / (LAMBDA / 2.0), 0.0)
            * Complex64::new(1.0 / (PI * LAMBDA), -1.0 / LAMBDA)
            * Complex64::from_polar(1.0, PI);
        assert!((got - expected).norm() < 1e-14 * expected.norm());
    }

    #[test]
    fn full_matrix_matches_scalar_double_loop() {
        let topo = MultiLayerTopology::half_wavelength(2, 2, 49, LAMBDA).unwrap();
        let w = build_diffraction_matrix(&topo, Side::Tx, 2).unwrap();
        assert_eq!(w.shape(), (49, 49));
        let half = LAMBDA / 2.0;
        for n in 0..49 {
            for m in 0..49 {
                let (xn, yn) = ((n % 7) as f64 * half - 3.0 * half, (n / 7) as f64 * half - 3.0 * half);
                let (xm, ym) = ((m % 7) as f64 * half - 3.0 * half, (m / 7) as f64 * half - 3.0 * half);
                let r = ((xn - xm).powi(2) + (yn - ym).powi(2) + half * half).sqrt();
                let cos = half / r;
                let mag = half * half * cos / r;
                let phase = 2.0 * PI * r / LAMBDA;
                let re_fac = 1.0 / (2.0 * PI * r);
                let im_fac = -1.0 / LAMBDA;
                let expected = Complex64::new(
                    mag * (phase.cos() * re_fac - phase.sin() * im_fac),
                    mag * (phase.sin() * re_fac + phase.cos() * im_fac),
                );
                let got = w[(n, m)];
                assert!((got - expected).norm() <= 1e-14 * expected.norm().max(1e-300) + 1e-16, "({n},{m})");
            }
        }
    }

    #[test]
    fn translation_invariance() {
        let topo = MultiLayerTopology::half_wavelength(1, 2, 25, LAMBDA).unwrap();
        let w = build_diffraction_matrix(&topo, Side::Tx, 2).unwrap();
        // same lateral offset (+1 column, +1 row) at two different places of a 5x5 grid
        let idx = |x: usize, y: usize| y * 5 + x;
        let a = w[(idx(1, 1), idx(0, 0))];
        let b = w[(idx(4, 3), idx(3, 2))];
        assert!((a - b).norm() < 1e-15 * a.norm());
    }

    #[test]
    fn reciprocity_between_sides() {
        let topo = MultiLayerTopology::half_wavelength(3, 3, 16, LAMBDA).unwrap();
        for l in 1..=3 {
            let tx = build_diffraction_matrix(&topo, Side::Tx, l).unwrap();
            let rx = build_diffraction_matrix(&topo, Side::Rx, l).unwrap();
            assert_eq!(rx, tx.transpose());
        }
        let inner = build_diffraction_matrix(&topo, Side::Tx, 2).unwrap();
        assert_eq!(inner, inner.transpose());
    }

    #[test]
    fn port_layer_shapes() {
        let topo = MultiLayerTopology::half_wavelength(4, 7, 100, LAMBDA).unwrap();
        let tx = tx_diffraction_matrices(&topo).unwrap();
        let rx = rx_diffraction_matrices(&topo).unwrap();
        assert_eq!(tx.len(), 7);
        assert_eq!(tx[0].shape(), (100, 4));
        assert_eq!(tx[6].shape(), (100, 100));
        assert_eq!(rx[0].shape(), (4, 100));
        assert!(tx.iter().chain(rx.iter()).all(|m| m.iter().all(|z| z.re.is_finite() && z.im.is_finite())));
    }

    #[test]
    fn invalid_inputs() {
        assert!(GridShape::square(50).is_err());
        let topo = MultiLayerTopology::half_wavelength(1, 2, 4, LAMBDA).unwrap();
        assert!(matches!(build_diffraction_matrix(&topo, Side::Rx, 3), Err(Error::InvalidLayer { .. })));
        assert!(matches!(build_diffraction_matrix(&topo, Side::Tx, 0), Err(Error::InvalidLayer { .. })));
    }
}
