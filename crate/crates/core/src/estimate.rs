//! Numeric values of sup/inf-defined constants with their estimation metadata.

use serde::Serialize;

/// Whether the constant is a supremum or an infimum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum EstimateKind {
    SupEstimate,
    InfEstimate,
}

/// Direction of the discretization bias.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Bias {
    Lower,
    Upper,
}

/// A computed constant. Sup-estimates come from feasible points, so they are
/// biased low; inf-estimates are biased high.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConstantEstimate {
    value: f64,
    kind: EstimateKind,
    grid: usize,
    refined: bool,
    bias: Bias,
}

impl ConstantEstimate {
    pub fn sup(value: f64, grid: usize, refined: bool) -> Self {
        debug_assert!(value.is_finite());
        ConstantEstimate {
            value,
            kind: EstimateKind::SupEstimate,
            grid,
            refined,
            bias: Bias::Lower,
        }
    }

    pub fn inf(value: f64, grid: usize, refined: bool) -> Self {
        debug_assert!(value.is_finite());
        ConstantEstimate {
            value,
            kind: EstimateKind::InfEstimate,
            grid,
            refined,
            bias: Bias::Upper,
        }
    }

    pub fn value(&self) -> f64 {
        self.value
    }

    pub fn kind(&self) -> EstimateKind {
        self.kind
    }

    /// Grid size the estimate was computed on.
    pub fn grid(&self) -> usize {
        self.grid
    }

    /// Local refinement improved on the best grid point.
    pub fn refined(&self) -> bool {
        self.refined
    }

    pub fn bias(&self) -> Bias {
        self.bias
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bias_follows_kind() {
        let s = ConstantEstimate::sup(1.5, 64, true);
        assert_eq!(
            (s.kind(), s.bias()),
            (EstimateKind::SupEstimate, Bias::Lower)
        );
        let i = ConstantEstimate::inf(0.1, 64, false);
        assert_eq!(
            (i.kind(), i.bias()),
            (EstimateKind::InfEstimate, Bias::Upper)
        );
    }

    #[test]
    fn serializes_kebab_case() {
        let s = serde_json::to_string(&ConstantEstimate::sup(2.0, 128, false)).unwrap();
        assert_eq!(
            s,
            r#"{"value":2.0,"kind":"sup-estimate","grid":128,"refined":false,"bias":"lower"}"#
        );
    }
}
