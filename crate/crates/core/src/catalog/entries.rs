use serde::{Serialize, Serializer};

use super::grammar::{parse_function_spec, Spec};
use super::{ModelFunction, Point};
use crate::setting::Setting;

/// Where a catalog fact comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    /// Known result from the literature.
    Literature,
    /// Computed from a closed form.
    ClosedForm,
    /// Immediate from the definitions.
    Definition,
}

/// An integrability exponent, or the sentinel for "every power is integrable".
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Iota {
    Finite(f64),
    Unbounded,
}

impl Iota {
    pub fn finite(self) -> Option<f64> {
        match self {
            Iota::Finite(v) => Some(v),
            Iota::Unbounded => None,
        }
    }
}

impl Serialize for Iota {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Iota::Finite(v) => s.serialize_f64(*v),
            Iota::Unbounded => s.serialize_str("unbounded"),
        }
    }
}

/// Analytic facts at the entry's reference point.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct KnownFacts {
    pub lelong_at_pole: Option<f64>,
    pub iota_at_pole: Option<Iota>,
    /// Largest `m` for which the function is m-subharmonic.
    pub msh_max_order: usize,
}

#[derive(Debug, Clone)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub summary: &'static str,
    /// Source text in the function-spec grammar.
    pub spec: String,
    pub function: ModelFunction,
    /// Point at which `facts` hold.
    pub reference: Point,
    pub facts: KnownFacts,
    pub provenance: Provenance,
}

impl CatalogEntry {
    pub fn has_pole_at_reference(&self) -> bool {
        self.function.on_pole(&self.reference)
    }
}

/// Largest `m` with `s <= n/m - 1`.
fn power_msh_order(n: usize, s: f64) -> usize {
    (1..=n).rev().find(|&m| s <= n as f64 / m as f64 - 1.0 + 1e-12).unwrap_or(0)
}

/// The model functions available for the setting.
pub fn catalog(setting: &Setting) -> Vec<CatalogEntry> {
    let n = setting.n();
    let m = setting.m();
    let nf = n as f64;
    let mf = m as f64;
    let critical = setting.critical_exponent();
    let origin = Point::origin(n);
    let mut b = vec![0.0; 2 * n];
    b[0] = 1.0;
    let b_text = b.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
    let mild = 0.5 * setting.fundamental_power();

    let mut raw: Vec<(&'static str, &'static str, String, KnownFacts, Provenance)> = vec![
        (
            "quad",
            "|z|^2, bounded and plurisubharmonic",
            "quad()".into(),
            KnownFacts { lelong_at_pole: Some(0.0), iota_at_pole: Some(Iota::Unbounded), msh_max_order: n },
            Provenance::Definition,
        ),
        (
            "quad-minus-one",
            "|z|^2 - 1, bounded and negative on the unit ball",
            "affine(c0=-1, c1=1)".into(),
            KnownFacts { lelong_at_pole: Some(0.0), iota_at_pole: Some(Iota::Unbounded), msh_max_order: n },
            Provenance::Literature,
        ),
        (
            "radlog",
            "log |z|^2",
            "radlog()".into(),
            KnownFacts { lelong_at_pole: Some(0.0), iota_at_pole: Some(Iota::Unbounded), msh_max_order: n },
            Provenance::ClosedForm,
        ),
        (
            "fund",
            "fundamental solution of the m-Hessian equation",
            "fund()".into(),
            KnownFacts { lelong_at_pole: Some(1.0), iota_at_pole: Some(Iota::Finite(critical)), msh_max_order: m },
            Provenance::Literature,
        ),
        (
            "fund-scaled",
            "2.5 times the fundamental solution",
            "sum(2.5*fund())".into(),
            KnownFacts { lelong_at_pole: Some(2.5), iota_at_pole: Some(Iota::Finite(critical)), msh_max_order: m },
            Provenance::ClosedForm,
        ),
        (
            "two-pole",
            "fundamental solutions at 0 and e_1 with weights 1 and 2",
            format!("sum(1*fund(), 2*fund(center={b_text}))"),
            KnownFacts { lelong_at_pole: Some(1.0), iota_at_pole: Some(Iota::Finite(critical)), msh_max_order: m },
            Provenance::ClosedForm,
        ),
        (
            "mild-power",
            "radial power with half the fundamental exponent",
            format!("radpow(s={mild})"),
            KnownFacts {
                lelong_at_pole: Some(0.0),
                iota_at_pole: Some(Iota::Finite(nf / mild)),
                msh_max_order: power_msh_order(n, mild),
            },
            Provenance::ClosedForm,
        ),
    ];
    if m >= 2 && m + 2 <= n {
        let s = (nf - 1.0) / mf - 1.0;
        raw.push((
            "remark-cyl",
            "cylinder over C^{n-1} with the (n-1)-dimensional fundamental exponent",
            format!("cyl(s={s}, k={})", n - 1),
            KnownFacts {
                lelong_at_pole: Some(0.0),
                iota_at_pole: Some(Iota::Finite(mf * (nf - 1.0) / (nf - 1.0 - mf))),
                msh_max_order: m,
            },
            Provenance::Literature,
        ));
    }

    raw.into_iter()
        .map(|(name, summary, spec, facts, provenance)| {
            let function = match parse_function_spec(&spec, setting) {
                Ok(Spec::Function(f)) => f,
                other => panic!("catalog entry {name} does not parse as a function: {other:?}"),
            };
            CatalogEntry { name, summary, spec, function, reference: origin.clone(), facts, provenance }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::msh_classify;

    #[test]
    fn entries_parse_for_all_settings() {
        for (n, m) in [(2, 1), (3, 1), (3, 2), (4, 2), (4, 3), (5, 2)] {
            let st = Setting::new(n, m).unwrap();
            let cat = catalog(&st);
            assert!(cat.len() >= 7);
            assert_eq!(cat.iter().any(|e| e.name == "remark-cyl"), m >= 2 && m + 2 <= n);
        }
    }

    #[test]
    fn max_order_matches_classifier() {
        let st = Setting::new(4, 2).unwrap();
        for e in catalog(&st) {
            let k = e.facts.msh_max_order;
            assert!(msh_classify(&e.function, k).is_msh(), "{}", e.name);
            if k < 4 {
                assert!(!msh_classify(&e.function, k + 1).is_msh(), "{}", e.name);
            }
        }
    }

    #[test]
    fn poles_at_reference() {
        let st = Setting::new(3, 2).unwrap();
        let with_pole: Vec<_> = catalog(&st).into_iter().filter(|e| e.has_pole_at_reference()).map(|e| e.name).collect();
        assert_eq!(with_pole, ["radlog", "fund", "fund-scaled", "two-pole", "mild-power"]);
    }
}
