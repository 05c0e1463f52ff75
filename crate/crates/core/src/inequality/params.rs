use rand::Rng;
use serde::{Deserialize, Serialize};

use super::registry::{Descriptor, Kind};
use crate::error::{Error, Result};
use crate::spectral::ScalarFn;

/// Largest power an entry accepts.
pub const MAX_PARAM_ORDER: usize = 8;
/// Largest power drawn at random for the binomial entries.
pub const RANDOM_ORDER_MAX: usize = 4;

/// Parameters of one evaluation. Fields an entry does not use stay `None`.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Params {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub f: Option<ScalarFn>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g: Option<ScalarFn>,
    /// Orientation of the pair in the synchronous-function entry.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub synchronous: Option<bool>,
}

impl Params {
    pub fn alpha(alpha: f64) -> Self {
        Self {
            alpha: Some(alpha),
            ..Self::default()
        }
    }

    pub fn with_order(mut self, n: usize) -> Self {
        self.n = Some(n);
        self
    }

    pub fn functions(f: ScalarFn, g: ScalarFn) -> Self {
        Self {
            f: Some(f),
            g: Some(g),
            ..Self::default()
        }
    }

    pub fn is_empty(&self) -> bool {
        *self == Self::default()
    }

    /// Reject parameters the entry does not take or that are out of range,
    /// and report missing required ones.
    pub fn validate(&self, d: &Descriptor) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidParameter(format!("{}: {msg}", d.id)));
        match (d.alpha, self.alpha) {
            (None, Some(_)) => return bad("does not take alpha".into()),
            (Some(_), None) => return bad("alpha is required".into()),
            (Some((lo, hi)), Some(a)) if !(lo..=hi).contains(&a) => {
                return bad(format!("alpha must lie in [{lo}, {hi}], got {a}"))
            }
            _ => {}
        }
        match (d.order, self.n) {
            (false, Some(_)) => return bad("does not take n".into()),
            (true, None) => return bad("n is required".into()),
            (true, Some(n)) if !(1..=MAX_PARAM_ORDER).contains(&n) => {
                return bad(format!("n must lie in 1..={MAX_PARAM_ORDER}, got {n}"))
            }
            _ => {}
        }
        match (d.exponent, self.p) {
            (false, Some(_)) => return bad("does not take p".into()),
            (true, None) => return bad("p is required".into()),
            (true, Some(p)) if !(p > 0.0 && p.is_finite()) => return bad(format!("p must be positive, got {p}")),
            _ => {}
        }
        let given = usize::from(self.f.is_some()) + usize::from(self.g.is_some());
        if given != d.functions || (d.functions == 1 && self.f.is_none()) {
            return bad(format!("takes {} scalar function(s), got {given}", d.functions));
        }
        for h in self.f.iter().chain(&self.g) {
            h.validate()?;
        }
        match (d.kind == Kind::Synchronous, self.synchronous) {
            (false, Some(_)) => bad("does not take an orientation".into()),
            (true, None) => bad("synchronous is required".into()),
            _ => Ok(()),
        }
    }
    /// Range checks on the values that are present; absent values are not
    /// an error.
    pub fn validate_partial(&self, d: &Descriptor) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidParameter(format!("{}: {msg}", d.id)));
        if let (Some((lo, hi)), Some(a)) = (d.alpha, self.alpha) {
            if !(lo..=hi).contains(&a) {
                return bad(format!("alpha must lie in [{lo}, {hi}], got {a}"));
            }
        }
        if let Some(n) = self.n {
            if !(1..=MAX_PARAM_ORDER).contains(&n) {
                return bad(format!("n must lie in 1..={MAX_PARAM_ORDER}, got {n}"));
            }
        }
        if let Some(p) = self.p {
            if !(p > 0.0 && p.is_finite()) {
                return bad(format!("p must be positive, got {p}"));
            }
        }
        for h in self.f.iter().chain(&self.g) {
            h.validate()?;
        }
        Ok(())
    }
}

fn uniform<R: Rng + ?Sized>(rng: &mut R, lo: f64, hi: f64) -> f64 {
    lo + (hi - lo) * rng.random::<f64>()
}

/// A nondecreasing polynomial on `[0, ∞)`: free constant term, nonnegative
/// higher coefficients.
fn increasing_poly<R: Rng + ?Sized>(rng: &mut R) -> Vec<f64> {
    let degree = rng.random_range(1..=3);
    let mut c = vec![uniform(rng, -1.0, 1.0)];
    c.extend((0..degree).map(|_| uniform(rng, 0.0, 1.0)));
    c
}

/// A function that is nonnegative on `[0, ∞)`.
fn nonnegative_fn<R: Rng + ?Sized>(rng: &mut R) -> ScalarFn {
    match rng.random_range(0..5) {
        0 => ScalarFn::power(uniform(rng, 0.25, 2.0)),
        1 => {
            let degree = rng.random_range(0..=2);
            ScalarFn::poly((0..=degree).map(|_| uniform(rng, 0.0, 1.0)).collect::<Vec<_>>())
        }
        2 => ScalarFn::Exp,
        3 => ScalarFn::Log1p,
        _ => ScalarFn::Identity,
    }
}

/// Fill every parameter the entry needs and `fixed` leaves open with a
/// random draw, then validate.
pub fn draw_params<R: Rng + ?Sized>(d: &Descriptor, fixed: &Params, rng: &mut R) -> Result<Params> {
    let mut p = fixed.clone();
    if let (Some((lo, hi)), None) = (d.alpha, p.alpha) {
        p.alpha = Some(uniform(rng, lo, hi));
    }
    if d.order && p.n.is_none() {
        p.n = Some(rng.random_range(1..=RANDOM_ORDER_MAX));
    }
    if d.exponent && p.p.is_none() {
        p.p = Some(uniform(rng, 0.1, 2.0));
    }
    match d.kind {
        Kind::Synchronous if p.f.is_none() && p.g.is_none() => {
            let sync = *p.synchronous.get_or_insert_with(|| rng.random_bool(0.5));
            p.f = Some(ScalarFn::power(uniform(rng, 0.1, 2.0)));
            let mut coeffs = increasing_poly(rng);
            if !sync {
                coeffs.iter_mut().for_each(|c| *c = -*c);
            }
            p.g = Some(ScalarFn::poly(coeffs));
        }
        Kind::PreGruss if p.f.is_none() && p.g.is_none() => {
            if rng.random_bool(0.5) {
                let a = uniform(rng, 0.0, 1.0);
                p.f = Some(ScalarFn::power(a));
                p.g = Some(ScalarFn::power(1.0 - a));
            } else {
                let mut poly = || {
                    let degree = rng.random_range(1..=3);
                    ScalarFn::poly((0..=degree).map(|_| uniform(rng, -1.0, 1.0)).collect::<Vec<_>>())
                };
                p.f = Some(poly());
                p.g = Some(poly());
            }
        }
        Kind::FunctionGruss => {
            if p.f.is_none() {
                p.f = Some(nonnegative_fn(rng));
            }
            if p.g.is_none() {
                p.g = Some(nonnegative_fn(rng));
            }
        }
        Kind::SquaredFunctionGruss if p.f.is_none() => p.f = Some(nonnegative_fn(rng)),
        _ => {}
    }
    p.validate(d)?;
    Ok(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::inequality::registry::{lookup, registry};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn draws_validate_for_every_entry() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for d in registry() {
            for _ in 0..20 {
                let p = draw_params(d, &Params::default(), &mut rng).unwrap();
                p.validate(d).unwrap();
            }
        }
    }

    #[test]
    fn out_of_range_alpha() {
        let d = lookup("C2.2α").unwrap();
        assert!(Params::alpha(0.7).validate(d).is_err());
        assert!(Params::alpha(0.5).validate(d).is_ok());
        assert!(Params::alpha(0.5).validate(lookup("I1.1R").unwrap()).is_err());
    }

    #[test]
    fn fixed_values_survive() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let d = lookup("EQ2.18").unwrap();
        let p = draw_params(d, &Params::alpha(0.25).with_order(3), &mut rng).unwrap();
        assert_eq!(p.alpha, Some(0.25));
        assert_eq!(p.n, Some(3));
    }

    #[test]
    fn json_skips_unused() {
        assert_eq!(serde_json::to_string(&Params::alpha(0.5)).unwrap(), r#"{"alpha":0.5}"#);
    }
}
