use std::fmt;
use std::sync::Arc;

use rand::seq::SliceRandom;

use crate::error::{Error, Result};
use crate::order::{exact_match_score, kendall_score, LinearOrder};
use crate::rng::rng_from_seed;

type ScoreFn = dyn Fn(&LinearOrder, &LinearOrder) -> f64 + Send + Sync;

const PROBES_PER_N: usize = 64;

/// A bounded score `s(sampled, candidate)` comparing a sampled order with a
/// candidate profile's order on the same issue.
#[derive(Clone)]
pub struct ScoringRule {
    name: String,
    lo: f64,
    hi: f64,
    f: Arc<ScoreFn>,
}

impl ScoringRule {
    /// Registers a rule with declared bounds `[lo, hi]`. The bounds are
    /// spot-checked on random order pairs for 2 to 5 outcomes.
    pub fn new<F>(name: impl Into<String>, lo: f64, hi: f64, f: F) -> Result<Self>
    where
        F: Fn(&LinearOrder, &LinearOrder) -> f64 + Send + Sync + 'static,
    {
        let name = name.into();
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(Error::invalid(format!(
                "rule `{name}`: bounds [{lo}, {hi}] must be finite with lo < hi"
            )));
        }
        let mut rng = rng_from_seed(0x5c0e);
        for n in 2..=5 {
            let mut a: Vec<usize> = (0..n).collect();
            let mut b = a.clone();
            for _ in 0..PROBES_PER_N {
                a.shuffle(&mut rng);
                b.shuffle(&mut rng);
                let oa = LinearOrder::new(a.clone())?;
                let ob = LinearOrder::new(b.clone())?;
                let v = f(&oa, &ob);
                if !(lo..=hi).contains(&v) {
                    return Err(Error::invalid(format!(
                        "rule `{name}` scored {v} on ({oa}, {ob}), outside [{lo}, {hi}]"
                    )));
                }
            }
        }
        Ok(ScoringRule {
            name,
            lo,
            hi,
            f: Arc::new(f),
        })
    }

    /// Fraction of concordant pairs.
    pub fn kendall() -> Self {
        ScoringRule {
            name: "kendall".into(),
            lo: 0.0,
            hi: 1.0,
            f: Arc::new(|a, b| kendall_score(a, b).expect("orders share n >= 2")),
        }
    }

    /// Indicator of identical orders.
    pub fn exact_match() -> Self {
        ScoringRule {
            name: "exact".into(),
            lo: 0.0,
            hi: 1.0,
            f: Arc::new(|a, b| exact_match_score(a, b).expect("orders share n")),
        }
    }

    /// `"kendall"` or `"exact"`.
    pub fn by_name(name: &str) -> Result<Self> {
        match name {
            "kendall" => Ok(ScoringRule::kendall()),
            "exact" => Ok(ScoringRule::exact_match()),
            other => Err(Error::invalid(format!("unknown scoring rule `{other}`"))),
        }
    }

    /// `scale·s + shift`, with `scale > 0`.
    pub fn affine(&self, scale: f64, shift: f64) -> Result<Self> {
        if !(scale > 0.0 && scale.is_finite() && shift.is_finite()) {
            return Err(Error::invalid("affine transform needs a finite positive scale"));
        }
        let inner = Arc::clone(&self.f);
        Ok(ScoringRule {
            name: format!("{}*{scale}+{shift}", self.name),
            lo: scale * self.lo + shift,
            hi: scale * self.hi + shift,
            f: Arc::new(move |a, b| scale * inner(a, b) + shift),
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn bounds(&self) -> (f64, f64) {
        (self.lo, self.hi)
    }

    pub fn range(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn evaluate(&self, sampled: &LinearOrder, candidate: &LinearOrder) -> f64 {
        (self.f)(sampled, candidate)
    }
}

impl fmt::Debug for ScoringRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ScoringRule")
            .field("name", &self.name)
            .field("lo", &self.lo)
            .field("hi", &self.hi)
            .finish()
    }
}
