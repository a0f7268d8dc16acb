//! Link weights for shortest-path routing.
//!
//! Four metrics are supported: link length (`LL`), unity (`U`), length plus
//! usage (`LLU`) and length plus accommodation probability (`LLP`). The
//! dynamic metrics add `alpha * f(x)` where `f` is the merge function.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Metric {
    /// Normalized link length.
    LL,
    /// Every link costs 1 (minimum hops).
    U,
    /// Normalized length plus a usage term.
    LLU,
    /// Normalized length plus an accommodation-probability term.
    LLP,
}

impl Metric {
    pub const ALL: [Metric; 4] = [Metric::LL, Metric::U, Metric::LLU, Metric::LLP];

    pub fn is_dynamic(self) -> bool {
        matches!(self, Metric::LLU | Metric::LLP)
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(match self {
            Metric::LL => "LL",
            Metric::U => "U",
            Metric::LLU => "LLU",
            Metric::LLP => "LLP",
        })
    }
}

impl FromStr for Metric {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_uppercase().as_str() {
            "LL" => Ok(Metric::LL),
            "U" => Ok(Metric::U),
            "LLU" => Ok(Metric::LLU),
            "LLP" => Ok(Metric::LLP),
            _ => Err(format!("unknown metric {s:?} (expected LL, U, LLU or LLP)")),
        }
    }
}

/// How the dynamic term enters the cost.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Merge {
    #[default]
    Linear,
    Quadratic,
    Sqrt,
}

impl Merge {
    pub const ALL: [Merge; 3] = [Merge::Linear, Merge::Quadratic, Merge::Sqrt];

    pub fn apply(self, x: f64) -> f64 {
        match self {
            Merge::Linear => x,
            Merge::Quadratic => x * x,
            Merge::Sqrt => x.sqrt(),
        }
    }
}

impl fmt::Display for Merge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(match self {
            Merge::Linear => "linear",
            Merge::Quadratic => "quadratic",
            Merge::Sqrt => "sqrt",
        })
    }
}

impl FromStr for Merge {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "linear" => Ok(Merge::Linear),
            "quadratic" => Ok(Merge::Quadratic),
            "sqrt" => Ok(Merge::Sqrt),
            _ => Err(format!(
                "unknown merge function {s:?} (expected linear, quadratic or sqrt)"
            )),
        }
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum CostError {
    #[error("{name} = {value} is outside {range}")]
    OutOfRange {
        name: &'static str,
        value: f64,
        range: &'static str,
    },
}

/// Which metric to route on, how to merge its dynamic term, and the weight
/// `alpha` of that term.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CostSpec {
    pub metric: Metric,
    pub merge: Merge,
    pub alpha: f64,
    /// Use `p + alpha * f(u)` for `LLP` instead of `L + alpha * f(1 - p)`.
    pub llp_literal: bool,
}

impl CostSpec {
    pub fn new(metric: Metric) -> Self {
        CostSpec {
            metric,
            merge: Merge::Linear,
            alpha: 1.0,
            llp_literal: false,
        }
    }

    pub fn with_merge(mut self, merge: Merge) -> Self {
        self.merge = merge;
        self
    }

    pub fn with_alpha(mut self, alpha: f64) -> Self {
        self.alpha = alpha;
        self
    }

    pub fn literal_llp(mut self, literal: bool) -> Self {
        self.llp_literal = literal;
        self
    }

    /// Whether link weights depend on the accommodation probability.
    pub fn needs_probability(&self) -> bool {
        self.metric == Metric::LLP
    }

    /// Cost of one link given its normalized length, usage and
    /// accommodation probability.
    pub fn link_cost(&self, length: f64, usage: f64, probability: f64) -> Result<f64, CostError> {
        check(self.alpha, "alpha", 0.0, f64::INFINITY, "[0, inf)")?;
        if !(length > 0.0 && length <= 1.0) {
            return Err(CostError::OutOfRange {
                name: "normalized length",
                value: length,
                range: "(0, 1]",
            });
        }
        check(usage, "usage", 0.0, 1.0, "[0, 1]")?;
        check(probability, "accommodation probability", 0.0, 1.0, "[0, 1]")?;

        let dynamic = |x: f64| self.alpha * self.merge.apply(x);
        Ok(match self.metric {
            Metric::LL => length,
            Metric::U => 1.0,
            Metric::LLU => length + dynamic(usage),
            Metric::LLP if self.llp_literal => probability + dynamic(usage),
            Metric::LLP => length + dynamic(1.0 - probability),
        })
    }
}

fn check(
    value: f64,
    name: &'static str,
    lo: f64,
    hi: f64,
    range: &'static str,
) -> Result<(), CostError> {
    if value >= lo && value <= hi {
        Ok(())
    } else {
        Err(CostError::OutOfRange { name, value, range })
    }
}

impl fmt::Display for CostSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.metric.is_dynamic() {
            write!(f, "{}/{}/alpha={}", self.metric, self.merge, self.alpha)?;
            if self.metric == Metric::LLP && self.llp_literal {
                f.write_str("/literal")?;
            }
            Ok(())
        } else {
            write!(f, "{}", self.metric)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn examples() {
        let q = CostSpec::new(Metric::LLU).with_merge(Merge::Quadratic);
        assert_eq!(q.link_cost(0.5, 0.5, 0.0).unwrap(), 0.75);
        for merge in Merge::ALL {
            let s = CostSpec::new(Metric::LLU).with_merge(merge);
            assert_eq!(s.link_cost(0.3, 0.0, 0.2).unwrap(), 0.3);
            let p = CostSpec::new(Metric::LLP).with_merge(merge);
            assert_eq!(p.link_cost(0.3, 0.9, 1.0).unwrap(), 0.3);
        }
        let u = CostSpec::new(Metric::U);
        assert_eq!(u.link_cost(0.1, 0.7, 0.2).unwrap(), 1.0);
        assert_eq!(u.link_cost(1.0, 0.0, 1.0).unwrap(), 1.0);
        let ll = CostSpec::new(Metric::LL);
        assert_eq!(ll.link_cost(0.4, 0.9, 0.1).unwrap(), 0.4);
    }

    #[test]
    fn literal_llp() {
        let s = CostSpec::new(Metric::LLP).literal_llp(true);
        assert_eq!(s.link_cost(0.5, 0.25, 0.75).unwrap(), 1.0);
        let s = s.with_merge(Merge::Sqrt).with_alpha(2.0);
        assert_eq!(s.link_cost(0.5, 0.25, 0.75).unwrap(), 1.75);
    }

    #[test]
    fn rejects_out_of_range() {
        let s = CostSpec::new(Metric::LLU);
        assert!(s.link_cost(0.0, 0.1, 0.1).is_err());
        assert!(s.link_cost(1.1, 0.1, 0.1).is_err());
        assert!(s.link_cost(0.5, -0.1, 0.1).is_err());
        assert!(s.link_cost(0.5, 0.1, 1.5).is_err());
        assert!(s.link_cost(0.5, f64::NAN, 0.1).is_err());
        assert!(s.with_alpha(-1.0).link_cost(0.5, 0.1, 0.1).is_err());
    }

    #[test]
    fn parse_names() {
        assert_eq!("llp".parse::<Metric>().unwrap(), Metric::LLP);
        assert_eq!("Quadratic".parse::<Merge>().unwrap(), Merge::Quadratic);
        assert!("cubic".parse::<Merge>().is_err());
        assert!("X".parse::<Metric>().is_err());
    }

    proptest! {
        #[test]
        fn llu_strictly_increasing(l in 0.01f64..=1.0, a in 0.0f64..1.0, b in 0.0f64..1.0, alpha in 0.1f64..5.0) {
            let (lo, hi) = if a < b { (a, b) } else { (b, a) };
            prop_assume!(hi - lo > 1e-9);
            for merge in Merge::ALL {
                let s = CostSpec::new(Metric::LLU).with_merge(merge).with_alpha(alpha);
                prop_assert!(s.link_cost(l, lo, 0.0).unwrap() < s.link_cost(l, hi, 0.0).unwrap());
            }
        }

        #[test]
        fn merge_ordering(l in 0.01f64..=1.0, u in 0.001f64..0.999, alpha in 0.1f64..5.0) {
            let c = |m| CostSpec::new(Metric::LLU).with_merge(m).with_alpha(alpha).link_cost(l, u, 0.0).unwrap();
            prop_assert!(c(Merge::Sqrt) > c(Merge::Linear));
            prop_assert!(c(Merge::Linear) > c(Merge::Quadratic));
        }

        #[test]
        fn alpha_scales_dynamic_term(l in 0.01f64..=1.0, u in 0.0f64..=1.0, p in 0.0f64..=1.0, mi in 0usize..4, gi in 0usize..3) {
            let spec = CostSpec::new(Metric::ALL[mi]).with_merge(Merge::ALL[gi]);
            let at = |alpha: f64| spec.with_alpha(alpha).link_cost(l, u, p).unwrap();
            let one = at(1.0) - at(0.0);
            let two = at(2.0) - at(0.0);
            prop_assert!((two - 2.0 * one).abs() <= 1e-12);
        }

        #[test]
        fn static_metrics_ignore_state(l in 0.01f64..=1.0, u in 0.0f64..=1.0, p in 0.0f64..=1.0) {
            let ll = CostSpec::new(Metric::LL);
            prop_assert_eq!(ll.link_cost(l, u, p).unwrap(), ll.link_cost(l, 0.0, 1.0).unwrap());
        }
    }
}
