//! Textual distribution specifications and reproducible sample batches.
//!
//! A [`DistributionSpec`] names a family plus its parameters and (where a
//! family has several product-representation routes) the sampler method. The
//! text form round-trips: `linnik(alpha=1,method=normal_ml)`,
//! `weibull(gamma=2)`, `normal`.

use crate::elementary::{self, WeibullParams};
use crate::error::{Error, Result};
use crate::linnik::{self, LinnikMethod, LinnikParams, QParams};
use crate::mittag_leffler::{self, KRhoParams, MLParams, MlMethod};
use crate::rng::{draw_batch, stream_of_label, RngState};
use crate::stable::{self, PosStable, StableParams, SymStable};
use rand::RngCore;
use std::fmt;
use std::str::FromStr;

/// A samplable (and where possible evaluable) distribution description.
#[derive(Debug, Clone, PartialEq)]
pub enum DistributionSpec {
    Normal,
    Exponential,
    Weibull { gamma: f64 },
    Laplace,
    StableSym { alpha: f64 },
    StablePos { alpha: f64 },
    MittagLeffler { delta: f64, method: MlMethod },
    Linnik { alpha: f64, method: LinnikMethod },
    KRho { rho: f64 },
    Q { alpha: f64, alpha_prime: f64 },
    RatioStable { alpha: f64 },
    Rademacher,
}

/// Function surface an evaluation command can ask for.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EvalFunction {
    Pdf,
    Cdf,
    Cf,
    Laplace,
}

impl EvalFunction {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "pdf" => Some(EvalFunction::Pdf),
            "cdf" => Some(EvalFunction::Cdf),
            "cf" => Some(EvalFunction::Cf),
            "laplace" => Some(EvalFunction::Laplace),
            _ => None,
        }
    }

    pub fn key(self) -> &'static str {
        match self {
            EvalFunction::Pdf => "pdf",
            EvalFunction::Cdf => "cdf",
            EvalFunction::Cf => "cf",
            EvalFunction::Laplace => "laplace",
        }
    }
}

impl DistributionSpec {
    pub fn family(&self) -> &'static str {
        use DistributionSpec::*;
        match self {
            Normal => "normal",
            Exponential => "exponential",
            Weibull { .. } => "weibull",
            Laplace => "laplace",
            StableSym { .. } => "stable_sym",
            StablePos { .. } => "stable_pos",
            MittagLeffler { .. } => "mittag_leffler",
            Linnik { .. } => "linnik",
            KRho { .. } => "k_rho",
            Q { .. } => "q",
            RatioStable { .. } => "ratio_stable",
            Rademacher => "rademacher",
        }
    }

    /// Check parameters against the family invariants.
    pub fn validate(&self) -> Result<()> {
        use DistributionSpec::*;
        match *self {
            Normal | Exponential | Laplace | Rademacher => Ok(()),
            Weibull { gamma } => WeibullParams::new(gamma).map(|_| ()),
            StableSym { alpha } => SymStable::new(alpha).map(|_| ()),
            StablePos { alpha } => PosStable::new(alpha).map(|_| ()),
            MittagLeffler { delta, method } => {
                mittag_leffler::MittagLeffler::new(MLParams::new(delta)?, method).map(|_| ())
            }
            Linnik { alpha, method } => {
                linnik::Linnik::new(LinnikParams::new(alpha)?, method).map(|_| ())
            }
            KRho { rho } => KRhoParams::new(rho).map(|_| ()),
            Q { alpha, alpha_prime } => QParams::new(alpha, alpha_prime).map(|_| ()),
            RatioStable { alpha } => {
                if alpha > 0.0 && alpha < 1.0 {
                    Ok(())
                } else {
                    Err(Error::invalid(format!(
                        "ratio_stable needs alpha in (0, 1), got {alpha}"
                    )))
                }
            }
        }
    }

    /// Build the per-draw sampler closure for this spec.
    pub fn sampler(&self) -> Result<Box<dyn Fn(&mut RngState) -> f64 + Sync + Send>> {
        use DistributionSpec::*;
        Ok(match *self {
            Normal => Box::new(elementary::sample_normal),
            Exponential => Box::new(elementary::sample_exponential),
            Weibull { gamma } => {
                let p = WeibullParams::new(gamma)?;
                Box::new(move |rng| elementary::sample_weibull(&p, rng))
            }
            Laplace => Box::new(elementary::sample_laplace),
            StableSym { alpha } => {
                let s = SymStable::new(alpha)?;
                Box::new(move |rng| s.sample(rng))
            }
            StablePos { alpha } => {
                let s = PosStable::new(alpha)?;
                Box::new(move |rng| s.sample(rng))
            }
            MittagLeffler { delta, method } => {
                let s = mittag_leffler::MittagLeffler::new(MLParams::new(delta)?, method)?;
                Box::new(move |rng| s.sample(rng))
            }
            Linnik { alpha, method } => {
                let s = linnik::Linnik::new(LinnikParams::new(alpha)?, method)?;
                Box::new(move |rng| s.sample(rng))
            }
            KRho { rho } => {
                let s = mittag_leffler::KRho::new(KRhoParams::new(rho)?);
                Box::new(move |rng| s.sample(rng))
            }
            Q { alpha, alpha_prime } => {
                let s = linnik::QLaw::new(QParams::new(alpha, alpha_prime)?)?;
                Box::new(move |rng| s.sample(rng))
            }
            RatioStable { alpha } => {
                if !(alpha > 0.0 && alpha < 1.0) {
                    return Err(Error::invalid(format!(
                        "ratio_stable needs alpha in (0, 1), got {alpha}"
                    )));
                }
                let s = PosStable::new(alpha)?;
                Box::new(move |rng| s.sample(rng) / s.sample(rng))
            }
            Rademacher => Box::new(|rng| if rng.next_u64() & 1 == 0 { 1.0 } else { -1.0 }),
        })
    }

    /// Evaluate `function` at `x`; unsupported pairs are reported explicitly.
    pub fn eval(&self, function: EvalFunction, x: f64) -> Result<f64> {
        use DistributionSpec::*;
        use EvalFunction as Fx;
        let unsupported = || {
            Err(Error::Unsupported(format!(
                "function {} is not available for family {}",
                function.key(),
                self.family()
            )))
        };
        match (self, function) {
            (Normal, Fx::Pdf) => Ok(elementary::normal_pdf(x)),
            (Normal, Fx::Cdf) => Ok(elementary::normal_cdf(x)),
            (Normal, Fx::Cf) => Ok((-0.5 * x * x).exp()),
            (Exponential, Fx::Pdf) => Ok(if x < 0.0 { 0.0 } else { (-x).exp() }),
            (Exponential, Fx::Cdf) => Ok(elementary::exponential_cdf(x)),
            (Exponential, Fx::Laplace) => {
                if x < 0.0 {
                    Err(Error::domain("laplace transform needs s >= 0"))
                } else {
                    Ok(1.0 / (1.0 + x))
                }
            }
            (Weibull { gamma }, Fx::Cdf) => {
                let p = WeibullParams::new(*gamma)?;
                if x < 0.0 {
                    Ok(0.0)
                } else {
                    Ok(1.0 - elementary::weibull_sf(&p, x)?)
                }
            }
            (Weibull { gamma }, Fx::Pdf) => {
                let p = WeibullParams::new(*gamma)?;
                if x <= 0.0 {
                    Ok(0.0)
                } else {
                    Ok(gamma * x.powf(gamma - 1.0) * elementary::weibull_sf(&p, x)?)
                }
            }
            (Laplace, Fx::Pdf) => Ok(elementary::laplace_pdf(x)),
            (Laplace, Fx::Cdf) => Ok(elementary::laplace_cdf(x)),
            (Laplace, Fx::Cf) => Ok(1.0 / (1.0 + x * x)),
            (StableSym { alpha }, Fx::Cf) => {
                let p = StableParams::new(*alpha, 0.0)?;
                Ok(stable::stable_cf(&p, x).re)
            }
            (StablePos { alpha }, Fx::Laplace) => {
                PosStable::new(*alpha)?;
                if x < 0.0 {
                    Err(Error::domain("laplace transform needs s >= 0"))
                } else {
                    Ok((-x.powf(*alpha)).exp())
                }
            }
            (MittagLeffler { delta, .. }, Fx::Pdf) => {
                mittag_leffler::ml_pdf(&MLParams::new(*delta)?, x)
            }
            (MittagLeffler { delta, .. }, Fx::Cdf) => {
                mittag_leffler::ml_cdf(&MLParams::new(*delta)?, x)
            }
            (MittagLeffler { delta, .. }, Fx::Laplace) => {
                mittag_leffler::ml_laplace(&MLParams::new(*delta)?, x)
            }
            (Linnik { alpha, .. }, Fx::Pdf) => linnik::linnik_pdf(&LinnikParams::new(*alpha)?, x),
            (Linnik { alpha, .. }, Fx::Cdf) => linnik::linnik_cdf(&LinnikParams::new(*alpha)?, x),
            (Linnik { alpha, .. }, Fx::Cf) => {
                Ok(linnik::linnik_cf(&LinnikParams::new(*alpha)?, x))
            }
            (KRho { rho }, Fx::Pdf) => mittag_leffler::k_pdf(&KRhoParams::new(*rho)?, x),
            (KRho { rho }, Fx::Cdf) => Ok(mittag_leffler::k_cdf(&KRhoParams::new(*rho)?, x)),
            (Q { alpha, alpha_prime }, Fx::Pdf) => {
                linnik::q_pdf(&QParams::new(*alpha, *alpha_prime)?, x)
            }
            (RatioStable { alpha }, Fx::Pdf) => linnik::ratio_stable_pdf(*alpha, x),
            _ => unsupported(),
        }
    }
}

impl fmt::Display for DistributionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use DistributionSpec::*;
        match self {
            Normal | Exponential | Laplace | Rademacher => write!(f, "{}", self.family()),
            Weibull { gamma } => write!(f, "weibull(gamma={gamma})"),
            StableSym { alpha } => write!(f, "stable_sym(alpha={alpha})"),
            StablePos { alpha } => write!(f, "stable_pos(alpha={alpha})"),
            MittagLeffler { delta, method } => {
                write!(f, "mittag_leffler(delta={delta},method={})", method.key())
            }
            Linnik { alpha, method } => match method {
                LinnikMethod::GeneralProduct { alpha0, alpha_prime } => write!(
                    f,
                    "linnik(alpha={alpha},method=general_product,alpha0={alpha0},alpha_prime={alpha_prime})"
                ),
                _ => write!(f, "linnik(alpha={alpha},method={})", method.key()),
            },
            KRho { rho } => write!(f, "k_rho(rho={rho})"),
            Q { alpha, alpha_prime } => {
                write!(f, "q(alpha={alpha},alpha_prime={alpha_prime})")
            }
            RatioStable { alpha } => write!(f, "ratio_stable(alpha={alpha})"),
        }
    }
}

fn parse_kv(body: &str) -> Result<Vec<(String, String)>> {
    let mut out = Vec::new();
    for item in body.split(',') {
        let item = item.trim();
        if item.is_empty() {
            continue;
        }
        let (k, v) = item
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("expected key=value, got '{item}'")))?;
        out.push((k.trim().to_string(), v.trim().to_string()));
    }
    Ok(out)
}

fn get_f64(kv: &[(String, String)], key: &str) -> Result<f64> {
    let v = kv
        .iter()
        .find(|(k, _)| k == key)
        .map(|(_, v)| v.as_str())
        .ok_or_else(|| Error::Parse(format!("missing parameter '{key}'")))?;
    v.parse::<f64>()
        .map_err(|_| Error::Parse(format!("parameter '{key}' is not a number: '{v}'")))
}

impl FromStr for DistributionSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (family, body) = match s.split_once('(') {
            None => (s, ""),
            Some((f, rest)) => {
                let body = rest
                    .strip_suffix(')')
                    .ok_or_else(|| Error::Parse(format!("missing ')' in '{s}'")))?;
                (f.trim(), body)
            }
        };
        let kv = parse_kv(body)?;
        let method_str = kv.iter().find(|(k, _)| k == "method").map(|(_, v)| v.as_str());
        let spec = match family {
            "normal" => DistributionSpec::Normal,
            "exponential" => DistributionSpec::Exponential,
            "weibull" => DistributionSpec::Weibull { gamma: get_f64(&kv, "gamma")? },
            "laplace" => DistributionSpec::Laplace,
            "stable_sym" => DistributionSpec::StableSym { alpha: get_f64(&kv, "alpha")? },
            "stable_pos" => DistributionSpec::StablePos { alpha: get_f64(&kv, "alpha")? },
            "mittag_leffler" => {
                let method = match method_str {
                    None => MlMethod::StableWeibull,
                    Some(m) => MlMethod::parse(m)
                        .ok_or_else(|| Error::Parse(format!("unknown ml method '{m}'")))?,
                };
                DistributionSpec::MittagLeffler { delta: get_f64(&kv, "delta")?, method }
            }
            "linnik" => {
                let method = match method_str {
                    None | Some("normal_ml") => LinnikMethod::NormalMl,
                    Some("stable_weibull") => LinnikMethod::StableWeibull,
                    Some("laplace_q") => LinnikMethod::LaplaceQ,
                    Some("general_product") => LinnikMethod::GeneralProduct {
                        alpha0: get_f64(&kv, "alpha0")?,
                        alpha_prime: get_f64(&kv, "alpha_prime")?,
                    },
                    Some(m) => return Err(Error::Parse(format!("unknown linnik method '{m}'"))),
                };
                DistributionSpec::Linnik { alpha: get_f64(&kv, "alpha")?, method }
            }
            "k_rho" => DistributionSpec::KRho { rho: get_f64(&kv, "rho")? },
            "q" => DistributionSpec::Q {
                alpha: get_f64(&kv, "alpha")?,
                alpha_prime: get_f64(&kv, "alpha_prime")?,
            },
            "ratio_stable" => DistributionSpec::RatioStable { alpha: get_f64(&kv, "alpha")? },
            "rademacher" => DistributionSpec::Rademacher,
            other => return Err(Error::Parse(format!("unknown family '{other}'"))),
        };
        spec.validate()?;
        Ok(spec)
    }
}

/// A seeded, reproducible batch of draws with its provenance.
#[derive(Debug, Clone)]
pub struct SampleBatch {
    pub spec: DistributionSpec,
    pub n: usize,
    pub seed: u64,
    pub values: Vec<f64>,
}

impl SampleBatch {
    /// Generate `n` draws; regenerating with the same `(spec, n, seed)`
    /// reproduces the values exactly.
    pub fn generate(spec: DistributionSpec, n: usize, seed: u64) -> Result<Self> {
        spec.validate()?;
        let sampler = spec.sampler()?;
        let stream = stream_of_label(&spec.to_string());
        let values = draw_batch(n, seed, stream, move |rng| sampler(rng));
        Ok(SampleBatch { spec, n, seed, values })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn display_and_parse_round_trip() {
        let specs = [
            DistributionSpec::Normal,
            DistributionSpec::Weibull { gamma: 2.0 },
            DistributionSpec::StableSym { alpha: 1.5 },
            DistributionSpec::MittagLeffler { delta: 0.5, method: MlMethod::StableRatio },
            DistributionSpec::Linnik { alpha: 1.0, method: LinnikMethod::NormalMl },
            DistributionSpec::Linnik {
                alpha: 1.2,
                method: LinnikMethod::GeneralProduct { alpha0: 1.6, alpha_prime: 0.75 },
            },
            DistributionSpec::Q { alpha: 1.0, alpha_prime: 2.0 },
            DistributionSpec::Rademacher,
        ];
        for s in specs {
            let text = s.to_string();
            let back: DistributionSpec = text.parse().unwrap();
            assert_eq!(s, back, "{text}");
        }
    }

    #[test]
    fn parse_rejects_bad_input() {
        assert!("nope".parse::<DistributionSpec>().is_err());
        assert!("weibull(gamma=-1)".parse::<DistributionSpec>().is_err());
        assert!("weibull(gamma=x)".parse::<DistributionSpec>().is_err());
        assert!("linnik(alpha=2.5)".parse::<DistributionSpec>().is_err());
        assert!("linnik(alpha=1,method=warp)".parse::<DistributionSpec>().is_err());
        assert!("weibull(gamma=1".parse::<DistributionSpec>().is_err());
    }

    #[test]
    fn batch_is_reproducible() {
        let spec: DistributionSpec = "linnik(alpha=1,method=normal_ml)".parse().unwrap();
        let a = SampleBatch::generate(spec.clone(), 5000, 7).unwrap();
        let b = SampleBatch::generate(spec, 5000, 7).unwrap();
        assert_eq!(a.values, b.values);
        assert_eq!(a.values.len(), 5000);
    }

    #[test]
    fn rademacher_is_plus_minus_one() {
        let batch =
            SampleBatch::generate(DistributionSpec::Rademacher, 4096, 3).unwrap();
        assert!(batch.values.iter().all(|&v| v == 1.0 || v == -1.0));
        let mean: f64 = batch.values.iter().sum::<f64>() / 4096.0;
        assert!(mean.abs() < 0.1);
    }

    #[test]
    fn eval_dispatch_and_unsupported_pairs() {
        let lin: DistributionSpec = "linnik(alpha=1)".parse().unwrap();
        assert!((lin.eval(EvalFunction::Cf, 1.0).unwrap() - 0.5).abs() < 1e-15);
        let ml: DistributionSpec = "mittag_leffler(delta=0.5)".parse().unwrap();
        assert!((ml.eval(EvalFunction::Laplace, 1.0).unwrap() - 0.5).abs() < 1e-12);
        let r: DistributionSpec = "ratio_stable(alpha=0.5)".parse().unwrap();
        assert!((r.eval(EvalFunction::Pdf, 1.0).unwrap() - 0.159_154_943_091_895_35).abs() < 1e-15);
        let err = r.eval(EvalFunction::Cf, 1.0).unwrap_err();
        assert!(err.to_string().contains("ratio_stable"), "{err}");
        assert!(matches!(err, Error::Unsupported(_)));
    }
}
