use serde::{Deserialize, Serialize};

use super::{AlgebraError, Element, FiniteEmv, SymbolicEmv};

/// Finite carriers larger than this are refused unless the caller raises it.
pub const DEFAULT_MAX_CARRIER: usize = 256;

/// JSON description of an algebra.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum AlgebraSpec {
    Table { oplus: Vec<Vec<usize>> },
    Chain { k: usize },
    Product { factors: Vec<AlgebraSpec> },
    Boolean { m: u32 },
    Finsubsets,
    Finsupport { k: u32 },
    Representing { inner: Box<AlgebraSpec> },
    Changlex,
}

/// A finite table or one of the symbolic families.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Carrier {
    Finite(FiniteEmv),
    Symbolic(SymbolicEmv),
}

impl Carrier {
    pub fn as_finite(&self) -> Option<&FiniteEmv> {
        match self {
            Carrier::Finite(m) => Some(m),
            Carrier::Symbolic(_) => None,
        }
    }

    pub fn as_symbolic(&self) -> Option<&SymbolicEmv> {
        match self {
            Carrier::Finite(_) => None,
            Carrier::Symbolic(s) => Some(s),
        }
    }

    /// Resolves a JSON element: finite carriers accept an index or a label.
    pub fn parse_element(&self, v: &serde_json::Value) -> Result<Element, AlgebraError> {
        let bad = || AlgebraError::ForeignElement {
            element: v.to_string(),
        };
        match self {
            Carrier::Finite(m) => {
                let idx = match v {
                    serde_json::Value::String(s) => m.index_of(s),
                    serde_json::Value::Number(n) => n.as_u64().map(|i| i as usize),
                    _ => None,
                };
                idx.filter(|&i| i < m.size())
                    .map(Element::Index)
                    .ok_or_else(bad)
            }
            Carrier::Symbolic(s) => {
                let e = Element::from_json(v).map_err(|_| bad())?;
                if s.contains(&e) {
                    Ok(e)
                } else {
                    Err(bad())
                }
            }
        }
    }
}

fn build_finite(spec: &AlgebraSpec, max: usize) -> Result<FiniteEmv, AlgebraError> {
    let check = |size: usize| {
        if size > max {
            Err(AlgebraError::CarrierTooLarge { size, max })
        } else {
            Ok(())
        }
    };
    match spec {
        AlgebraSpec::Table { oplus } => {
            check(oplus.len())?;
            FiniteEmv::from_table(oplus.clone())
        }
        AlgebraSpec::Chain { k } => {
            if *k == 0 {
                return Err(AlgebraError::InvalidParameter("chain needs k >= 1".into()));
            }
            check(k.saturating_add(1))?;
            Ok(FiniteEmv::chain(*k))
        }
        AlgebraSpec::Boolean { m } => {
            let size = 1usize.checked_shl(*m).filter(|s| *s > 0).unwrap_or(usize::MAX);
            check(size)?;
            Ok(FiniteEmv::boolean(*m))
        }
        AlgebraSpec::Product { factors } => {
            if factors.is_empty() {
                return Err(AlgebraError::InvalidParameter("product needs a factor".into()));
            }
            let built = factors
                .iter()
                .map(|f| build_finite(f, max))
                .collect::<Result<Vec<_>, _>>()?;
            let size = built
                .iter()
                .try_fold(1usize, |acc, f| acc.checked_mul(f.size()))
                .unwrap_or(usize::MAX);
            check(size)?;
            Ok(FiniteEmv::product(&built))
        }
        _ => Err(AlgebraError::UnsupportedProduct),
    }
}

fn build_symbolic(spec: &AlgebraSpec) -> Result<SymbolicEmv, AlgebraError> {
    match spec {
        AlgebraSpec::Finsubsets => Ok(SymbolicEmv::FinSubsets),
        AlgebraSpec::Finsupport { k } => {
            if *k == 0 {
                return Err(AlgebraError::InvalidParameter("finsupport needs k >= 1".into()));
            }
            Ok(SymbolicEmv::FinSupport { k: *k })
        }
        AlgebraSpec::Changlex => Ok(SymbolicEmv::ChangLex),
        AlgebraSpec::Representing { inner } => match inner.as_ref() {
            AlgebraSpec::Table { .. }
            | AlgebraSpec::Chain { .. }
            | AlgebraSpec::Boolean { .. }
            | AlgebraSpec::Product { .. } => Err(AlgebraError::HasTop),
            other => SymbolicEmv::representing(build_symbolic(other)?),
        },
        _ => unreachable!("finite kinds are dispatched by build"),
    }
}

fn is_symbolic(spec: &AlgebraSpec) -> bool {
    matches!(
        spec,
        AlgebraSpec::Finsubsets
            | AlgebraSpec::Finsupport { .. }
            | AlgebraSpec::Changlex
            | AlgebraSpec::Representing { .. }
    )
}

/// Builds a carrier with the default size limit.
pub fn build(spec: &AlgebraSpec) -> Result<Carrier, AlgebraError> {
    build_with_limit(spec, DEFAULT_MAX_CARRIER)
}

/// Builds a carrier, refusing finite carriers with more than `max` elements.
pub fn build_with_limit(spec: &AlgebraSpec, max: usize) -> Result<Carrier, AlgebraError> {
    if is_symbolic(spec) {
        return build_symbolic(spec).map(Carrier::Symbolic);
    }
    if let AlgebraSpec::Product { factors } = spec {
        if factors.iter().any(is_symbolic) {
            return Err(AlgebraError::UnsupportedProduct);
        }
    }
    build_finite(spec, max).map(Carrier::Finite)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> AlgebraSpec {
        serde_json::from_str(text).unwrap()
    }

    #[test]
    fn spec_json_round_trip() {
        let spec = parse(r#"{"kind":"product","factors":[{"kind":"chain","k":2},{"kind":"chain","k":1}]}"#);
        let Carrier::Finite(m) = build(&spec).unwrap() else {
            panic!("expected finite carrier")
        };
        assert_eq!(m.size(), 6);
        let text = serde_json::to_string(&spec).unwrap();
        assert_eq!(parse(&text), spec);
    }

    #[test]
    fn build_errors() {
        let prod = parse(r#"{"kind":"product","factors":[{"kind":"finsubsets"},{"kind":"chain","k":1}]}"#);
        assert_eq!(build(&prod), Err(AlgebraError::UnsupportedProduct));
        let table = parse(r#"{"kind":"table","oplus":[[0,1],[1]]}"#);
        assert!(matches!(build(&table), Err(AlgebraError::MalformedTable(_))));
        let big = parse(r#"{"kind":"boolean","m":9}"#);
        assert!(matches!(build(&big), Err(AlgebraError::CarrierTooLarge { size: 512, max: 256 })));
        let n = parse(r#"{"kind":"representing","inner":{"kind":"chain","k":2}}"#);
        assert_eq!(build(&n), Err(AlgebraError::HasTop));
        let c = parse(r#"{"kind":"representing","inner":{"kind":"changlex"}}"#);
        assert_eq!(build(&c), Err(AlgebraError::HasTop));
        assert!(serde_json::from_str::<AlgebraSpec>(r#"{"kind":"ring"}"#).is_err());
    }

    #[test]
    fn element_parsing() {
        let c = build(&AlgebraSpec::Chain { k: 2 }).unwrap();
        assert_eq!(c.parse_element(&serde_json::json!(2)).unwrap(), Element::Index(2));
        assert_eq!(c.parse_element(&serde_json::json!("1")).unwrap(), Element::Index(1));
        assert!(c.parse_element(&serde_json::json!(3)).is_err());
        let t = build(&AlgebraSpec::Finsubsets).unwrap();
        assert_eq!(t.parse_element(&serde_json::json!([2, 1])).unwrap(), Element::set([1, 2]));
        assert!(t.parse_element(&serde_json::json!(1)).is_err());
    }
}
