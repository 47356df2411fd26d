use serde::{Deserialize, Serialize};

/// Known state-dependent feature vector `ψ_i(x_i)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Regressor {
    /// `ψ = [sin x]`
    SineOfState,
    /// `ψ = [cos x]`
    CosineOfState,
    /// `ψ = [x]`
    IdentityOfState,
    /// `ψ = [Σ_k c_k x^k]`
    Polynomial { coefficients: Vec<f64> },
    /// State-independent `ψ = values`.
    Constant { values: Vec<f64> },
}

impl Regressor {
    pub fn dim(&self) -> usize {
        match self {
            Regressor::Constant { values } => values.len(),
            _ => 1,
        }
    }

    pub fn eval(&self, x: f64) -> Vec<f64> {
        match self {
            Regressor::SineOfState => vec![x.sin()],
            Regressor::CosineOfState => vec![x.cos()],
            Regressor::IdentityOfState => vec![x],
            Regressor::Polynomial { coefficients } => {
                // Horner
                vec![coefficients.iter().rev().fold(0.0, |acc, c| acc * x + c)]
            }
            Regressor::Constant { values } => values.clone(),
        }
    }

    /// `ψ(x)ᵀ·v`.
    pub fn dot(&self, x: f64, v: &[f64]) -> f64 {
        self.eval(x).iter().zip(v).map(|(p, q)| p * q).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn evaluations() {
        assert_eq!(Regressor::SineOfState.eval(0.0), vec![0.0]);
        assert_eq!(Regressor::CosineOfState.eval(0.0), vec![1.0]);
        assert_eq!(Regressor::IdentityOfState.eval(-2.0), vec![-2.0]);
        let poly = Regressor::Polynomial {
            coefficients: vec![1.0, 0.0, 3.0],
        };
        assert_eq!(poly.eval(2.0), vec![13.0]);
        let c = Regressor::Constant {
            values: vec![1.0, -1.0],
        };
        assert_eq!(c.dim(), 2);
        assert_eq!(c.dot(5.0, &[2.0, 3.0]), -1.0);
    }

    #[test]
    fn serde_tags() {
        let json = serde_json::to_string(&Regressor::SineOfState).unwrap();
        assert_eq!(json, r#"{"kind":"sine_of_state"}"#);
        let back: Regressor = serde_json::from_str(r#"{"kind":"polynomial","coefficients":[0,1]}"#).unwrap();
        assert_eq!(back.eval(4.0), vec![4.0]);
    }
}
