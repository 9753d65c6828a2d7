//! Parameter sets and their validation.

use serde::Serialize;
use thiserror::Error;

use crate::gf2m::standard_taps;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    Repaired,
    Improved,
}

impl Variant {
    pub fn tag(self) -> u8 {
        match self {
            Variant::Repaired => 1,
            Variant::Improved => 2,
        }
    }

    pub fn from_tag(tag: u8) -> Option<Variant> {
        match tag {
            1 => Some(Variant::Repaired),
            2 => Some(Variant::Improved),
            _ => None,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParamError {
    #[error("unknown parameter set `{0}`")]
    UnknownSet(String),
    #[error("parameter constraints violated: {}", .0.join("; "))]
    Violations(Vec<String>),
}

/// Unvalidated parameter fields. `t` and `t1` may be absent, as in published
/// tables that omit them.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RawParams {
    pub variant: Variant,
    pub m: usize,
    pub n1: usize,
    pub k1: usize,
    pub n2: usize,
    pub k2: usize,
    pub t: Option<usize>,
    pub t1: Option<usize>,
    pub lambda: usize,
    pub lambda_prime: Option<usize>,
}

/// A validated parameter set. `q` is always 2.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ParamSet {
    pub name: String,
    pub variant: Variant,
    pub q: usize,
    pub m: usize,
    pub n: usize,
    pub k: usize,
    pub n1: usize,
    pub n2: usize,
    pub k1: usize,
    pub k2: usize,
    pub t: usize,
    pub t1: usize,
    pub t2: usize,
    pub lambda: usize,
    pub lambda_prime: usize,
    /// Exponents below `m` with a nonzero coefficient in the field modulus.
    pub taps: Vec<usize>,
    pub security: Option<u32>,
}

/// A named entry of the built-in registry.
#[derive(Clone, Debug)]
pub struct NamedSet {
    pub name: &'static str,
    pub raw: RawParams,
    pub security: Option<u32>,
    /// Whether the set is expected to pass validation.
    pub supported: bool,
}

const fn raw(
    variant: Variant,
    m: usize,
    (n1, k1, n2, k2): (usize, usize, usize, usize),
    t: Option<usize>,
    t1: Option<usize>,
    lambda: usize,
    lambda_prime: Option<usize>,
) -> RawParams {
    RawParams { variant, m, n1, k1, n2, k2, t, t1, lambda, lambda_prime }
}

use Variant::{Improved, Repaired};

pub fn registry() -> Vec<NamedSet> {
    let s = |name, raw, security, supported| NamedSet { name, raw, security, supported };
    vec![
        s("new-gabkron-128", raw(Improved, 90, (2, 2, 90, 18), Some(12), Some(6), 3, Some(2)), Some(128), true),
        s("new-gabkron-192", raw(Improved, 120, (2, 2, 120, 32), Some(14), Some(8), 3, Some(2)), Some(192), true),
        s("new-gabkron-256", raw(Improved, 128, (2, 2, 128, 40), Some(14), Some(8), 3, Some(2)), Some(256), true),
        s("rep-gabkron-128", raw(Repaired, 211, (2, 2, 105, 35), Some(9), Some(7), 3, None), Some(128), true),
        s("rep-gabkron-192", raw(Repaired, 307, (2, 2, 150, 50), Some(13), Some(10), 3, None), Some(192), true),
        s("rep-gabkron-256", raw(Repaired, 331, (2, 2, 165, 55), Some(14), Some(11), 3, None), Some(256), true),
        s("gabkron-128-original", raw(Repaired, 48, (2, 2, 24, 12), Some(12), None, 3, None), Some(128), false),
        s("gabkron-192-original", raw(Repaired, 76, (2, 2, 38, 19), Some(16), None, 3, None), Some(192), false),
        s("gabkron-256-original", raw(Repaired, 104, (2, 2, 52, 26), Some(24), None, 3, None), Some(256), false),
        s("toy-improved", raw(Improved, 12, (2, 2, 12, 4), Some(1), Some(1), 3, Some(2)), None, true),
        s("toy-repaired", raw(Repaired, 24, (2, 2, 12, 4), None, Some(2), 2, None), None, true),
    ]
}

pub fn lookup(name: &str) -> Option<NamedSet> {
    registry().into_iter().find(|s| s.name.eq_ignore_ascii_case(name))
}

/// Loads and validates a named set.
pub fn setup_named(name: &str) -> Result<ParamSet, ParamError> {
    let set = lookup(name).ok_or_else(|| ParamError::UnknownSet(name.to_string()))?;
    let mut p = setup(&set.raw)?;
    p.name = set.name.to_string();
    p.security = set.security;
    Ok(p)
}

/// `⌊(n2 - k2 - 2 t1) / (2λ)⌋`, the error weight of the repaired variant.
pub fn repaired_t(n2: usize, k2: usize, t1: usize, lambda: usize) -> Option<usize> {
    let num = n2.checked_sub(k2)?.checked_sub(2 * t1)?;
    (lambda > 0).then(|| num / (2 * lambda))
}

/// `⌊(n2 - k2) / (2λ)⌋`, an upper bound on `t` for any `t1 ≥ 0`.
pub fn t_upper_bound(n2: usize, k2: usize, lambda: usize) -> usize {
    if lambda == 0 {
        return 0;
    }
    n2.saturating_sub(k2) / (2 * lambda)
}

/// Every violated constraint of `raw`, as readable inequalities.
pub fn violations(raw: &RawParams) -> Vec<String> {
    let mut v = Vec::new();
    let mut need = |ok: bool, msg: String| {
        if !ok {
            v.push(msg);
        }
    };
    let RawParams { variant, m, n1, k1, n2, k2, lambda, .. } = *raw;
    let n = n1 * n2;
    let k = k1 * k2;
    let t2 = n2.saturating_sub(k2) / 2;
    need((2..=512).contains(&m), format!("2 <= m <= 512 (m = {m})"));
    need(1 <= k1 && k1 <= n1, format!("1 <= k1 <= n1 (k1 = {k1}, n1 = {n1})"));
    need(1 <= k2 && k2 < n2, format!("1 <= k2 < n2 (k2 = {k2}, n2 = {n2})"));
    need(lambda <= m, format!("lambda <= m (lambda = {lambda}, m = {m})"));
    match raw.t1 {
        None => need(false, "t1 must be specified".into()),
        Some(t1) => {
            need(t1 >= 1, "t1 >= 1".into());
            need(t1 <= t2, format!("t1 <= floor((n2-k2)/2) (t1 = {t1}, bound {t2})"));
        }
    }
    match variant {
        Variant::Repaired => {
            need(k < n && n <= m, format!("k < n <= m (k = {k}, n = {n}, m = {m})"));
            need(lambda >= 2, format!("lambda >= 2 (lambda = {lambda})"));
            let bound = t_upper_bound(n2, k2, lambda);
            if let Some(t) = raw.t {
                need(
                    t <= bound,
                    format!("t <= floor((n2-k2)/(2*lambda)): t = {t} exceeds bound {bound}"),
                );
            }
            if let Some(t1) = raw.t1 {
                match repaired_t(n2, k2, t1, lambda) {
                    Some(derived) => {
                        need(derived >= 1, format!("t = floor((n2-k2-2*t1)/(2*lambda)) >= 1 (got {derived})"));
                        if let Some(t) = raw.t {
                            need(
                                t == derived,
                                format!("t = floor((n2-k2-2*t1)/(2*lambda)) (claimed {t}, formula {derived})"),
                            );
                        }
                    }
                    None => need(false, "n2 - k2 - 2*t1 >= 0".into()),
                }
                need(t1 == 0 || n % t1 == 0, format!("t1 divides n (t1 = {t1}, n = {n})"));
            }
        }
        Variant::Improved => {
            need(n2 == m, format!("n2 = m (n2 = {n2}, m = {m})"));
            let lp = raw.lambda_prime.unwrap_or(0);
            need(
                2 <= lp && lp <= lambda,
                format!("2 <= lambda' <= lambda (lambda' = {lp}, lambda = {lambda})"),
            );
            match raw.t {
                None => need(false, "t must be specified".into()),
                Some(t) => {
                    need(t >= 1, "t >= 1".into());
                    let t1 = raw.t1.unwrap_or(0);
                    need(
                        lp * t + t1 <= t2,
                        format!("lambda'*t + t1 <= t2 ({lp}*{t} + {t1} = {} > {t2})", lp * t + t1),
                    );
                }
            }
            if let Some(t1) = raw.t1 {
                need(t1 == 0 || n2 % t1 == 0, format!("t1 divides n2 (t1 = {t1}, n2 = {n2})"));
            }
        }
    }
    v
}

/// Validates explicit fields into a [`ParamSet`].
pub fn setup(raw: &RawParams) -> Result<ParamSet, ParamError> {
    let v = violations(raw);
    if !v.is_empty() {
        return Err(ParamError::Violations(v));
    }
    let t1 = raw.t1.expect("validated");
    let t = match raw.variant {
        Variant::Repaired => repaired_t(raw.n2, raw.k2, t1, raw.lambda).expect("validated"),
        Variant::Improved => raw.t.expect("validated"),
    };
    let taps = standard_taps(raw.m).map_err(|e| ParamError::Violations(vec![e.to_string()]))?;
    Ok(ParamSet {
        name: "custom".into(),
        variant: raw.variant,
        q: 2,
        m: raw.m,
        n: raw.n1 * raw.n2,
        k: raw.k1 * raw.k2,
        n1: raw.n1,
        n2: raw.n2,
        k1: raw.k1,
        k2: raw.k2,
        t,
        t1,
        t2: (raw.n2 - raw.k2) / 2,
        lambda: raw.lambda,
        lambda_prime: match raw.variant {
            Variant::Repaired => raw.lambda,
            Variant::Improved => raw.lambda_prime.expect("validated"),
        },
        taps,
        security: None,
    })
}

impl ParamSet {
    pub fn raw(&self) -> RawParams {
        RawParams {
            variant: self.variant,
            m: self.m,
            n1: self.n1,
            k1: self.k1,
            n2: self.n2,
            k2: self.k2,
            t: Some(self.t),
            t1: Some(self.t1),
            lambda: self.lambda,
            lambda_prime: Some(self.lambda_prime),
        }
    }

    /// Per-block error budget on the decoding side.
    pub fn block_budget(&self) -> usize {
        self.t1 + self.lambda_prime * self.t
    }

    /// Re-attaches a registry name when the fields match a named set.
    pub(crate) fn with_registry_name(mut self) -> Self {
        if let Some(set) = registry().into_iter().find(|s| {
            s.supported && setup(&s.raw).is_ok_and(|p| p.raw() == self.raw())
        }) {
            self.name = set.name.into();
            self.security = set.security;
        }
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn improved_sets_accept() {
        let p = setup_named("new-gabkron-128").unwrap();
        assert_eq!((p.n, p.k, p.t, p.t1, p.t2, p.lambda_prime), (180, 36, 12, 6, 36, 2));
        let p = setup_named("NEW-GABKRON-192").unwrap();
        assert_eq!((p.n, p.k, p.t2), (240, 64, 44));
        let p = setup_named("new-gabkron-256").unwrap();
        assert_eq!((p.n, p.k, p.t2), (256, 80, 44));
    }

    #[test]
    fn repaired_t_values() {
        for (name, t) in [("rep-gabkron-128", 9), ("rep-gabkron-192", 13), ("rep-gabkron-256", 14)] {
            assert_eq!(setup_named(name).unwrap().t, t);
        }
        assert_eq!(setup_named("toy-repaired").unwrap().t, 1);
    }

    #[test]
    fn original_sets_rejected_with_bound() {
        for (name, t, bound) in [
            ("gabkron-128-original", 12, 2),
            ("gabkron-192-original", 16, 3),
            ("gabkron-256-original", 24, 4),
        ] {
            let err = setup_named(name).unwrap_err();
            let ParamError::Violations(v) = err else { panic!() };
            let needle = format!("t = {t} exceeds bound {bound}");
            assert!(v.iter().any(|s| s.contains(&needle)), "{v:?}");
        }
    }

    #[test]
    fn lambda_prime_three_breaks_budget() {
        let mut raw = lookup("new-gabkron-128").unwrap().raw;
        raw.lambda_prime = Some(3);
        let ParamError::Violations(v) = setup(&raw).unwrap_err() else { panic!() };
        assert!(v.iter().any(|s| s.contains("42 > 36")), "{v:?}");
    }

    #[test]
    fn unknown_set() {
        assert_eq!(setup_named("nope"), Err(ParamError::UnknownSet("nope".into())));
    }

    #[test]
    fn registry_names_roundtrip() {
        let p = setup_named("toy-improved").unwrap();
        let mut q = p.clone();
        q.name = "custom".into();
        q.security = Some(1);
        assert_eq!(q.with_registry_name(), p);
    }
}
