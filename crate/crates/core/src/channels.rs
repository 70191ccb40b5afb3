//! CPTP channels in Kraus form, the named qubit families and the affine
//! (Bloch) representation `v -> t + T v` of qubit channels.

use std::f64::consts::{FRAC_1_SQRT_2, PI, TAU};
use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::qcore::{complex_gaussian, max_abs_diff, seeded_rng, ComplexMatrix, DensityMatrix};

/// Tolerance on `sum K^dag K = I`.
pub const COMPLETENESS_TOL: f64 = 1e-9;
/// Tolerance used when classifying affine coefficients as zero.
pub const AFFINE_TOL: f64 = 1e-9;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn m2(a: Complex64, b: Complex64, cc: Complex64, d: Complex64) -> ComplexMatrix {
    ComplexMatrix::from_row_slice(2, 2, &[a, b, cc, d])
}

/// Pauli matrix `sigma_k`, `k` in 1..=3.
pub fn pauli(k: usize) -> ComplexMatrix {
    let (o, z, i) = (c(1.0, 0.0), c(0.0, 0.0), c(0.0, 1.0));
    match k {
        1 => m2(z, o, o, z),
        2 => m2(z, -i, i, z),
        3 => m2(o, z, z, -o),
        _ => panic!("pauli index must be 1, 2 or 3"),
    }
}

/// Parameters of a named channel.
#[derive(Debug, Clone, PartialEq)]
pub enum ChannelSpec {
    Identity { dim: usize },
    /// `exp(i (angle/2) axis . sigma)`.
    Unitary { axis: [f64; 3], angle: f64 },
    /// `(1 - p) rho + p I/2`.
    Depolarizing { p: f64 },
    /// `(1 - p) rho + p sigma_1 rho sigma_1`.
    BitFlip { p: f64 },
    /// Generalized amplitude damping; `gamma = 1` is amplitude damping.
    Gad { p: f64, gamma: f64 },
    SelfComplementary { theta: f64, phi: f64 },
    /// Raw Kraus list without a named family.
    Kraus,
}

impl ChannelSpec {
    pub fn kind_name(&self) -> &'static str {
        match self {
            ChannelSpec::Identity { .. } => "identity",
            ChannelSpec::Unitary { .. } => "unitary",
            ChannelSpec::Depolarizing { .. } => "depolarizing",
            ChannelSpec::BitFlip { .. } => "bit_flip",
            ChannelSpec::Gad { .. } => "gad",
            ChannelSpec::SelfComplementary { .. } => "self_complementary",
            ChannelSpec::Kraus => "kraus",
        }
    }

    pub fn validate(&self) -> Result<()> {
        fn in_range(name: &'static str, value: f64, lo: f64, hi: f64) -> Result<()> {
            if value.is_finite() && (lo..=hi).contains(&value) {
                Ok(())
            } else {
                Err(Error::ParamOutOfRange {
                    name,
                    value,
                    reason: "outside the allowed interval",
                })
            }
        }
        match *self {
            ChannelSpec::Identity { dim } => {
                if dim == 0 {
                    return Err(Error::ParamOutOfRange {
                        name: "dim",
                        value: 0.0,
                        reason: "dimension must be positive",
                    });
                }
                Ok(())
            }
            ChannelSpec::Unitary { axis, angle } => {
                let norm = axis.iter().map(|x| x * x).sum::<f64>().sqrt();
                if !((norm - 1.0).abs() <= 1e-10) {
                    return Err(Error::ParamOutOfRange {
                        name: "axis",
                        value: norm,
                        reason: "axis must be a unit vector",
                    });
                }
                in_range("angle", angle, -PI, PI)
            }
            ChannelSpec::Depolarizing { p } | ChannelSpec::BitFlip { p } => in_range("p", p, 0.0, 1.0),
            ChannelSpec::Gad { p, gamma } => {
                in_range("p", p, 0.0, 1.0)?;
                in_range("gamma", gamma, 0.0, 1.0)
            }
            ChannelSpec::SelfComplementary { theta, phi } => {
                in_range("theta", theta, 0.0, PI)?;
                in_range("phi", phi, 0.0, TAU)
            }
            ChannelSpec::Kraus => Ok(()),
        }
    }

    /// Canonical Kraus operators of the named family.
    fn kraus_ops(&self) -> Result<Vec<ComplexMatrix>> {
        let z = c(0.0, 0.0);
        let re = |x: f64| c(x, 0.0);
        Ok(match *self {
            ChannelSpec::Identity { dim } => vec![ComplexMatrix::identity(dim, dim)],
            ChannelSpec::Unitary { axis, angle } => {
                let (s, co) = (angle / 2.0).sin_cos();
                let mut u = ComplexMatrix::identity(2, 2) * re(co);
                for (k, &n) in axis.iter().enumerate() {
                    u += pauli(k + 1) * c(0.0, s * n);
                }
                vec![u]
            }
            ChannelSpec::Depolarizing { p } => {
                let a = re((1.0 - 0.75 * p).sqrt());
                let b = re((p / 4.0).sqrt());
                vec![ComplexMatrix::identity(2, 2) * a, pauli(1) * b, pauli(2) * b, pauli(3) * b]
            }
            ChannelSpec::BitFlip { p } => vec![
                ComplexMatrix::identity(2, 2) * re((1.0 - p).sqrt()),
                pauli(1) * re(p.sqrt()),
            ],
            ChannelSpec::Gad { p, gamma } => {
                let g = re(gamma.sqrt());
                let h = re((1.0 - gamma).sqrt());
                let q = re((1.0 - p).sqrt());
                let r = re(p.sqrt());
                vec![
                    m2(re(1.0), z, z, q) * g,
                    m2(z, r, z, z) * g,
                    m2(q, z, z, re(1.0)) * h,
                    m2(z, z, r, z) * h,
                ]
            }
            ChannelSpec::SelfComplementary { theta, phi } => {
                let s = re(theta.sin() * FRAC_1_SQRT_2);
                vec![
                    m2(re(1.0), z, z, s),
                    m2(z, s, z, Complex64::from_polar(theta.cos(), phi)),
                ]
            }
            ChannelSpec::Kraus => return Err(Error::UnsupportedKind("kraus")),
        })
    }
}

impl fmt::Display for ChannelSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ChannelSpec::Identity { dim } => write!(f, "identity(dim={dim})"),
            ChannelSpec::Unitary { axis, angle } => {
                write!(f, "unitary(axis=[{}, {}, {}], angle={angle})", axis[0], axis[1], axis[2])
            }
            ChannelSpec::Depolarizing { p } => write!(f, "depolarizing(p={p})"),
            ChannelSpec::BitFlip { p } => write!(f, "bit_flip(p={p})"),
            ChannelSpec::Gad { p, gamma } => write!(f, "gad(p={p}, gamma={gamma})"),
            ChannelSpec::SelfComplementary { theta, phi } => {
                write!(f, "self_complementary(theta={theta}, phi={phi})")
            }
            ChannelSpec::Kraus => write!(f, "kraus"),
        }
    }
}

/// A CPTP map `rho -> sum_i K_i rho K_i^dag`.
#[derive(Debug, Clone, PartialEq)]
pub struct Channel {
    dim: usize,
    kraus_ops: Vec<ComplexMatrix>,
    spec: Option<ChannelSpec>,
}

/// `max |sum K^dag K - I|`.
pub fn completeness_deviation(ops: &[ComplexMatrix]) -> f64 {
    let Some(first) = ops.first() else {
        return f64::INFINITY;
    };
    let d = first.ncols();
    let sum = ops
        .iter()
        .fold(ComplexMatrix::zeros(d, d), |acc, k| acc + k.adjoint() * k);
    max_abs_diff(&sum, &ComplexMatrix::identity(d, d))
}

impl Channel {
    /// Builds a named channel after range-checking its parameters.
    pub fn from_spec(spec: &ChannelSpec) -> Result<Self> {
        spec.validate()?;
        let kraus_ops = spec.kraus_ops()?;
        let mut ch = Self::from_kraus(kraus_ops)?;
        ch.spec = Some(spec.clone());
        Ok(ch)
    }

    /// Trusts a raw Kraus list only after re-checking completeness.
    pub fn from_kraus(kraus_ops: Vec<ComplexMatrix>) -> Result<Self> {
        let Some(first) = kraus_ops.first() else {
            return Err(Error::IncompleteKraus {
                deviation: f64::INFINITY,
            });
        };
        let d = first.nrows();
        for k in &kraus_ops {
            if k.nrows() != d || k.ncols() != d {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    found: if k.nrows() != d { k.nrows() } else { k.ncols() },
                });
            }
        }
        let deviation = completeness_deviation(&kraus_ops);
        if !(deviation <= COMPLETENESS_TOL) {
            return Err(Error::IncompleteKraus { deviation });
        }
        Ok(Self {
            dim: d,
            kraus_ops,
            spec: Some(ChannelSpec::Kraus),
        })
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_spec(&ChannelSpec::Identity { dim }).expect("identity is CPTP")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn kraus_ops(&self) -> &[ComplexMatrix] {
        &self.kraus_ops
    }

    pub fn spec(&self) -> Option<&ChannelSpec> {
        self.spec.as_ref()
    }

    /// `sum_i K_i X K_i^dag` without validation.
    pub fn apply_matrix(&self, x: &ComplexMatrix) -> ComplexMatrix {
        self.kraus_ops
            .iter()
            .fold(ComplexMatrix::zeros(self.dim, self.dim), |acc, k| acc + k * x * k.adjoint())
    }

    /// Heisenberg-picture action `sum_i K_i^dag X K_i`.
    pub fn apply_adjoint(&self, x: &ComplexMatrix) -> ComplexMatrix {
        self.kraus_ops
            .iter()
            .fold(ComplexMatrix::zeros(self.dim, self.dim), |acc, k| acc + k.adjoint() * x * k)
    }

    /// Output for a pure input, `sum_i (K_i psi)(K_i psi)^dag`. Not re-validated.
    pub(crate) fn apply_pure_unchecked(&self, psi: &nalgebra::DVector<Complex64>) -> DensityMatrix {
        let mut out = ComplexMatrix::zeros(self.dim, self.dim);
        for k in &self.kraus_ops {
            let v = k * psi;
            out += &v * v.adjoint();
        }
        DensityMatrix::from_matrix_unchecked(out)
    }

    /// Kraus sum, re-validated as a state.
    pub fn apply(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        if rho.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: rho.dim(),
            });
        }
        DensityMatrix::new(self.apply_matrix(rho.matrix()))
            .map_err(|e| Error::ValidationFailed(Box::new(e)))
    }

    /// `self after inner`: Kraus operators `A_i B_j`.
    pub fn compose(&self, inner: &Channel) -> Result<Channel> {
        if self.dim != inner.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: inner.dim,
            });
        }
        let ops = self
            .kraus_ops
            .iter()
            .flat_map(|a| inner.kraus_ops.iter().map(move |b| a * b))
            .collect();
        Channel::from_kraus(ops)
    }

    /// True when every basis projector is mapped to a diagonal state.
    pub fn maps_incoherent_to_incoherent(&self) -> bool {
        (0..self.dim).all(|k| {
            let mut proj = ComplexMatrix::zeros(self.dim, self.dim);
            proj[(k, k)] = c(1.0, 0.0);
            let out = self.apply_matrix(&proj);
            (0..self.dim).all(|i| (0..self.dim).all(|j| i == j || out[(i, j)].norm() <= AFFINE_TOL))
        })
    }
}

pub fn make_channel(spec: &ChannelSpec) -> Result<Channel> {
    Channel::from_spec(spec)
}

pub fn apply(channel: &Channel, rho: &DensityMatrix) -> Result<DensityMatrix> {
    channel.apply(rho)
}

/// Kraus operators `A_i (x) B_j`.
pub fn tensor_channel(first: &Channel, second: &Channel) -> Channel {
    let kraus_ops: Vec<ComplexMatrix> = first
        .kraus_ops
        .iter()
        .flat_map(|a| second.kraus_ops.iter().map(move |b| a.kronecker(b)))
        .collect();
    Channel {
        dim: first.dim * second.dim,
        kraus_ops,
        spec: None,
    }
}

/// Channel from a Haar-random isometry `C^d -> C^d (x) C^env`, with
/// `K_e = (I (x) <e|) V`.
pub fn random_channel(dim: usize, env_dim: usize, seed: u64) -> Result<Channel> {
    if env_dim == 0 || dim == 0 {
        return Err(Error::ParamOutOfRange {
            name: "env_dim",
            value: env_dim as f64,
            reason: "dimensions must be positive",
        });
    }
    let mut rng = seeded_rng(seed);
    let g = ComplexMatrix::from_fn(dim * env_dim, dim, |_, _| complex_gaussian(&mut rng));
    let qr = g.qr();
    let mut v = qr.q();
    let r = qr.r();
    for j in 0..dim {
        let rjj = r[(j, j)];
        let phase = if rjj.norm() > 0.0 { rjj / rjj.norm() } else { c(1.0, 0.0) };
        for i in 0..v.nrows() {
            v[(i, j)] *= phase;
        }
    }
    let kraus_ops = (0..env_dim)
        .map(|e| ComplexMatrix::from_fn(dim, dim, |i, j| v[(i * env_dim + e, j)]))
        .collect();
    Channel::from_kraus(kraus_ops)
}

/// `rho -> (Lambda(rho) + Z Lambda(Z rho Z) Z) / 2` for a qubit channel. The
/// result commutes with dephasing rotations about `z` and therefore maps
/// incoherent states to incoherent states.
pub fn phase_covariant_twirl(channel: &Channel) -> Result<Channel> {
    if channel.dim() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            found: channel.dim(),
        });
    }
    let z = pauli(3);
    let h = c(FRAC_1_SQRT_2, 0.0);
    let ops = channel
        .kraus_ops
        .iter()
        .flat_map(|k| [k * h, &z * k * &z * h])
        .collect();
    Channel::from_kraus(ops)
}

/// Bloch vector `(tr sigma_1 rho, tr sigma_2 rho, tr sigma_3 rho)` of a 2x2 matrix.
pub fn bloch_vector(rho: &ComplexMatrix) -> [f64; 3] {
    let off = rho[(0, 1)];
    let back = rho[(1, 0)];
    [
        (off + back).re,
        (c(0.0, 1.0) * (off - back)).re,
        (rho[(0, 0)] - rho[(1, 1)]).re,
    ]
}

/// `(I + v . sigma) / 2`.
pub fn from_bloch(v: [f64; 3]) -> ComplexMatrix {
    let mut m = ComplexMatrix::identity(2, 2);
    for (k, &x) in v.iter().enumerate() {
        m += pauli(k + 1) * c(x, 0.0);
    }
    m * c(0.5, 0.0)
}

/// `Lambda((I + v.sigma)/2) = (I + (t + T v).sigma)/2`.
#[derive(Debug, Clone, PartialEq)]
pub struct AffineRep {
    pub t: [f64; 3],
    /// Row-major 3x3 matrix `T`.
    pub t_matrix: [[f64; 3]; 3],
}

impl AffineRep {
    pub fn map_bloch(&self, v: [f64; 3]) -> [f64; 3] {
        let mut out = self.t;
        for (i, row) in self.t_matrix.iter().enumerate() {
            out[i] += row.iter().zip(v.iter()).map(|(a, b)| a * b).sum::<f64>();
        }
        out
    }

    /// Output state rebuilt from `(t, T)`.
    pub fn reconstruct(&self, rho: &DensityMatrix) -> ComplexMatrix {
        from_bloch(self.map_bloch(bloch_vector(rho.matrix())))
    }

    pub fn is_unital(&self) -> bool {
        self.t.iter().map(|x| x * x).sum::<f64>().sqrt() <= AFFINE_TOL
    }

    /// `t_1 = t_2 = 0` and `T_13 = T_23 = 0`: incoherent inputs stay incoherent.
    pub fn preserves_incoherence(&self) -> bool {
        [self.t[0], self.t[1], self.t_matrix[0][2], self.t_matrix[1][2]]
            .iter()
            .all(|x| x.abs() <= AFFINE_TOL)
    }
}

pub fn affine_representation(channel: &Channel) -> Result<AffineRep> {
    if channel.dim() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            found: channel.dim(),
        });
    }
    let t = bloch_vector(&channel.apply_matrix(&from_bloch([0.0; 3])));
    let mut t_matrix = [[0.0; 3]; 3];
    for j in 0..3 {
        let mut e = [0.0; 3];
        e[j] = 1.0;
        let col = bloch_vector(&channel.apply_matrix(&from_bloch(e)));
        for i in 0..3 {
            t_matrix[i][j] = col[i] - t[i];
        }
    }
    Ok(AffineRep { t, t_matrix })
}
