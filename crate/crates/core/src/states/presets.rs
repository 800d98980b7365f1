use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4, PI};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::DensityMatrix;
use crate::channels::qubit_unitary;
use crate::error::{Error, Result};
use crate::numerics::{kron, ComplexMatrix};

pub const PRESET_NAMES: &[&str] = &[
    "bell",
    "paper-example",
    "w-mixture",
    "mdms",
    "ghz",
    "classical-correlated",
    "diagonal",
];

/// Named states used throughout the examples and the reproduction checks.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "preset", rename_all = "kebab-case")]
pub enum Preset {
    /// |Φ⁺⟩⟨Φ⁺| with |Φ⁺⟩ = (|00⟩ + |11⟩)/√2.
    Bell,
    /// ½|Φ⁺⟩⟨Φ⁺| + ¼|01⟩⟨01| + ¼|10⟩⟨10|.
    PaperExample,
    /// 8/27|000⟩⟨000| + 12/27|W⟩⟨W| + 6/27|W̄⟩⟨W̄| + 1/27|111⟩⟨111|.
    WMixture,
    /// U (ε|Φ⁺⟩⟨Φ⁺| + (1−ε)|10⟩⟨10|) U† with U = U(θ, φ) ⊗ U(θ, −φ).
    Mdms { epsilon: f64, theta: f64, phi: f64 },
    /// (|0…0⟩ + |1…1⟩)/√2 on `qubits` qubits.
    Ghz { qubits: usize },
    /// ½(|00⟩⟨00| + |11⟩⟨11|).
    ClassicalCorrelated,
    /// Diagonal state with the given probabilities in the computational basis.
    Diagonal { dims: Vec<usize>, probabilities: Vec<f64> },
}

/// Loose parameter bag, as it arrives from flags or a state file.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct PresetParams {
    pub epsilon: Option<f64>,
    pub theta: Option<f64>,
    pub phi: Option<f64>,
    pub qubits: Option<usize>,
    pub dims: Option<Vec<usize>>,
    pub probabilities: Option<Vec<f64>>,
}

impl Preset {
    pub fn from_name(name: &str, params: &PresetParams) -> Result<Self> {
        let unused = |what: &str, present: bool| -> Result<()> {
            if present {
                Err(Error::BadParams(format!("preset `{name}` takes no {what}")))
            } else {
                Ok(())
            }
        };
        let angles_given = params.epsilon.is_some() || params.theta.is_some() || params.phi.is_some();
        let diag_given = params.dims.is_some() || params.probabilities.is_some();
        let preset = match name {
            "bell" => Preset::Bell,
            "paper-example" => Preset::PaperExample,
            "w-mixture" => Preset::WMixture,
            "classical-correlated" => Preset::ClassicalCorrelated,
            "mdms" => {
                unused("qubits", params.qubits.is_some())?;
                unused("dims/probabilities", diag_given)?;
                let epsilon = params
                    .epsilon
                    .ok_or_else(|| Error::BadParams("mdms requires epsilon".into()))?;
                return Self::mdms(epsilon, params.theta.unwrap_or(0.0), params.phi.unwrap_or(0.0));
            }
            "ghz" => {
                unused("epsilon/theta/phi", angles_given)?;
                unused("dims/probabilities", diag_given)?;
                let qubits = params.qubits.unwrap_or(3);
                if !(2..=6).contains(&qubits) {
                    return Err(Error::BadParams(format!("ghz needs 2..=6 qubits, got {qubits}")));
                }
                Preset::Ghz { qubits }
            }
            "diagonal" => {
                unused("epsilon/theta/phi", angles_given)?;
                let probabilities = params
                    .probabilities
                    .clone()
                    .ok_or_else(|| Error::BadParams("diagonal requires probabilities".into()))?;
                let dims = match &params.dims {
                    Some(d) => d.clone(),
                    None => qubit_dims_for(probabilities.len())?,
                };
                Preset::Diagonal { dims, probabilities }
            }
            other => return Err(Error::UnknownPreset(other.to_string())),
        };
        if matches!(
            preset,
            Preset::Bell | Preset::PaperExample | Preset::WMixture | Preset::ClassicalCorrelated
        ) {
            unused("parameters", angles_given || diag_given || params.qubits.is_some())?;
        }
        Ok(preset)
    }

    /// Range-checked MDMS parameters: ε ∈ [0, 1], θ ∈ [0, π/4], φ ∈ [0, 2π).
    pub fn mdms(epsilon: f64, theta: f64, phi: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&epsilon) {
            return Err(Error::BadParams(format!("epsilon {epsilon} outside [0, 1]")));
        }
        if !(0.0..=FRAC_PI_4).contains(&theta) {
            return Err(Error::BadParams(format!("theta {theta} outside [0, π/4]")));
        }
        if !(0.0..2.0 * PI).contains(&phi) {
            return Err(Error::BadParams(format!("phi {phi} outside [0, 2π)")));
        }
        Ok(Preset::Mdms { epsilon, theta, phi })
    }

    pub fn name(&self) -> &'static str {
        match self {
            Preset::Bell => "bell",
            Preset::PaperExample => "paper-example",
            Preset::WMixture => "w-mixture",
            Preset::Mdms { .. } => "mdms",
            Preset::Ghz { .. } => "ghz",
            Preset::ClassicalCorrelated => "classical-correlated",
            Preset::Diagonal { .. } => "diagonal",
        }
    }

    pub fn build(&self) -> Result<DensityMatrix> {
        match self {
            Preset::Bell => Ok(DensityMatrix::from_parts(vec![2, 2], phi_plus())),
            Preset::PaperExample => {
                let m = &phi_plus().scale(re(0.5)) + &ComplexMatrix::from_diag(&[0.0, 0.25, 0.25, 0.0]);
                DensityMatrix::new(vec![2, 2], m)
            }
            Preset::WMixture => {
                let s = 1.0 / 3f64.sqrt();
                let mut w = vec![Complex64::default(); 8];
                let mut w_bar = vec![Complex64::default(); 8];
                for idx in [0b001, 0b010, 0b100] {
                    w[idx] = re(s);
                }
                for idx in [0b011, 0b110, 0b101] {
                    w_bar[idx] = re(s);
                }
                let mut m = &ComplexMatrix::outer(&w).scale(re(12.0 / 27.0))
                    + &ComplexMatrix::outer(&w_bar).scale(re(6.0 / 27.0));
                m[(0, 0)] += re(8.0 / 27.0);
                m[(7, 7)] += re(1.0 / 27.0);
                DensityMatrix::new(vec![2, 2, 2], m)
            }
            Preset::Mdms { epsilon, theta, phi } => {
                let checked = Self::mdms(*epsilon, *theta, *phi)?;
                debug_assert_eq!(&checked, self);
                Ok(mdms_state(*epsilon, *theta, *phi))
            }
            Preset::Ghz { qubits } => {
                let n = 1usize << qubits;
                let mut v = vec![Complex64::default(); n];
                v[0] = re(FRAC_1_SQRT_2);
                v[n - 1] = re(FRAC_1_SQRT_2);
                DensityMatrix::new(vec![2; *qubits], ComplexMatrix::outer(&v))
            }
            Preset::ClassicalCorrelated => {
                DensityMatrix::new(vec![2, 2], ComplexMatrix::from_diag(&[0.5, 0.0, 0.0, 0.5]))
            }
            Preset::Diagonal { dims, probabilities } => {
                if probabilities.iter().any(|&p| p < 0.0) {
                    return Err(Error::BadParams("negative probability".into()));
                }
                let total: usize = dims.iter().product();
                if total != probabilities.len() {
                    return Err(Error::DimensionMismatch(format!(
                        "{} probabilities for dims {dims:?}",
                        probabilities.len()
                    )));
                }
                DensityMatrix::new(dims.clone(), ComplexMatrix::from_diag(probabilities))
            }
        }
    }
}

/// The MDMS family member without range checks; θ and φ may be any reals.
pub(crate) fn mdms_state(epsilon: f64, theta: f64, phi: f64) -> DensityMatrix {
    let mut base = phi_plus().scale(re(epsilon));
    base[(2, 2)] += re(1.0 - epsilon);
    let m = if theta == 0.0 {
        base
    } else {
        let u = kron(&qubit_unitary(theta, phi), &qubit_unitary(theta, -phi));
        crate::numerics::conjugate_unchecked(&base, &u)
    };
    DensityMatrix::from_parts(vec![2, 2], m)
}

fn phi_plus() -> ComplexMatrix {
    let s = re(FRAC_1_SQRT_2);
    let zero = Complex64::default();
    ComplexMatrix::outer(&[s, zero, zero, s])
}

fn re(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn qubit_dims_for(len: usize) -> Result<Vec<usize>> {
    if len >= 2 && len.is_power_of_two() {
        Ok(vec![2; len.trailing_zeros() as usize])
    } else {
        Err(Error::BadParams(format!(
            "{len} probabilities is not a qubit register; pass dims explicitly"
        )))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::hermitian_eig;

    #[test]
    fn every_preset_is_valid() {
        let presets = [
            Preset::Bell,
            Preset::PaperExample,
            Preset::WMixture,
            Preset::mdms(0.4, 0.3, 1.0).unwrap(),
            Preset::Ghz { qubits: 3 },
            Preset::ClassicalCorrelated,
            Preset::Diagonal {
                dims: vec![2, 3],
                probabilities: vec![0.1, 0.2, 0.1, 0.3, 0.2, 0.1],
            },
        ];
        for p in presets {
            let d = p.build().unwrap();
            assert!(d.validate().is_ok(), "{p:?}");
        }
    }

    #[test]
    fn mdms_limits() {
        let bell = Preset::Bell.build().unwrap();
        let d = Preset::mdms(1.0, 0.0, 0.0).unwrap().build().unwrap();
        assert!(d.matrix().max_abs_diff(bell.matrix()) < 1e-15);

        let d = Preset::mdms(0.0, 0.0, 0.0).unwrap().build().unwrap();
        let ten = ComplexMatrix::from_diag(&[0.0, 0.0, 1.0, 0.0]);
        assert!(d.matrix().max_abs_diff(&ten) < 1e-15);
    }

    #[test]
    fn w_mixture_shape() {
        let d = Preset::WMixture.build().unwrap();
        assert_eq!(d.dims(), &[2, 2, 2]);
        assert!((d.matrix().trace().re - 1.0).abs() < 1e-15);
        let e = hermitian_eig(d.matrix()).unwrap();
        let rank = e.eigenvalues.iter().filter(|&&l| l > 1e-12).count();
        assert_eq!(rank, 4);
    }

    #[test]
    fn mdms_parameter_ranges() {
        assert!(matches!(Preset::mdms(1.1, 0.0, 0.0), Err(Error::BadParams(_))));
        assert!(matches!(Preset::mdms(0.5, 1.0, 0.0), Err(Error::BadParams(_))));
        assert!(matches!(Preset::mdms(0.5, 0.1, 2.0 * PI), Err(Error::BadParams(_))));
    }

    #[test]
    fn lookup_by_name() {
        assert!(matches!(
            Preset::from_name("nope", &PresetParams::default()),
            Err(Error::UnknownPreset(_))
        ));
        assert!(matches!(
            Preset::from_name("mdms", &PresetParams::default()),
            Err(Error::BadParams(_))
        ));
        let p = PresetParams {
            epsilon: Some(0.2),
            ..Default::default()
        };
        assert!(matches!(Preset::from_name("bell", &p), Err(Error::BadParams(_))));
        for name in PRESET_NAMES {
            let params = match *name {
                "mdms" => PresetParams {
                    epsilon: Some(0.5),
                    ..Default::default()
                },
                "diagonal" => PresetParams {
                    probabilities: Some(vec![0.25; 4]),
                    ..Default::default()
                },
                _ => PresetParams::default(),
            };
            let preset = Preset::from_name(name, &params).unwrap();
            assert_eq!(preset.name(), *name);
        }
    }
}
