//! Run configuration: defaults, then a TOML file, then command-line flags.

use std::path::{Path, PathBuf};
use std::str::FromStr;

use anyhow::{bail, Context, Result};
use serde::Deserialize;

use gclkit::flow::FreestreamConfig;
use gclkit::motion::{CaseId, CaseKind, MotionCase};
use gclkit::Method;

pub const MAX_HARMONICS: usize = 64;

/// Amplitude given either as one number or per axis.
#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum Amplitude {
    Scalar(f64),
    Vector([f64; 3]),
}

impl Amplitude {
    fn per_axis(self) -> [f64; 3] {
        match self {
            Amplitude::Scalar(a) => [a; 3],
            Amplitude::Vector(v) => v,
        }
    }
}

impl FromStr for Amplitude {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let parts = parse_list::<f64>(s)?;
        match parts.as_slice() {
            [a] => Ok(Amplitude::Scalar(*a)),
            [x, y, z] => Ok(Amplitude::Vector([*x, *y, *z])),
            _ => Err(format!("expected one or three numbers, got '{s}'")),
        }
    }
}

pub fn parse_list<T: FromStr>(s: &str) -> std::result::Result<Vec<T>, String> {
    s.split(',')
        .map(|p| p.trim().parse::<T>().map_err(|_| format!("cannot parse '{}' in '{s}'", p.trim())))
        .collect()
}

pub fn parse_triple<T: FromStr + Copy>(s: &str) -> std::result::Result<[T; 3], String> {
    let v = parse_list::<T>(s)?;
    <[T; 3]>::try_from(v.as_slice()).map_err(|_| format!("expected three comma-separated values, got '{s}'"))
}

/// Inclusive harmonic range, written `a..b` or a single `a`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HarmonicRange {
    pub first: usize,
    pub last: usize,
}

impl FromStr for HarmonicRange {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let num = |t: &str| t.trim().parse::<usize>().map_err(|_| format!("bad harmonic count '{}'", t.trim()));
        let (first, last) = match s.split_once("..") {
            Some((a, b)) => (num(a)?, num(b.trim_start_matches('='))?),
            None => {
                let n = num(s)?;
                (n, n)
            }
        };
        if first == 0 || last > MAX_HARMONICS || first > last {
            return Err(format!("harmonic range must satisfy 1 <= a <= b <= {MAX_HARMONICS}, got '{s}'"));
        }
        Ok(HarmonicRange { first, last })
    }
}

impl<'de> Deserialize<'de> for HarmonicRange {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Text(String),
            Single(usize),
        }
        let text = match Raw::deserialize(d)? {
            Raw::Text(s) => s,
            Raw::Single(n) => n.to_string(),
        };
        text.parse().map_err(serde::de::Error::custom)
    }
}

/// Every overridable setting. Unset fields fall through to the next layer.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Overrides {
    pub case: Option<String>,
    pub methods: Option<Vec<String>>,
    pub n: Option<HarmonicRange>,
    pub mesh: Option<[usize; 3]>,
    pub lengths: Option<[f64; 3]>,
    pub period: Option<f64>,
    pub amp: Option<Amplitude>,
    pub alpha0: Option<f64>,
    pub radius: Option<f64>,
    pub seed: Option<u64>,
    pub support_radius: Option<f64>,
    pub freestream: Option<bool>,
    pub cfl: Option<f64>,
    pub max_iters: Option<usize>,
    pub out: Option<PathBuf>,
    pub timing: Option<bool>,
}

impl Overrides {
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        toml::from_str(&text).with_context(|| format!("parsing {}", path.display()))
    }

    /// Fields set in `top` win.
    pub fn layered(self, top: Overrides) -> Overrides {
        macro_rules! pick {
            ($($f:ident),*) => { Overrides { $($f: top.$f.or(self.$f)),* } };
        }
        pick!(
            case, methods, n, mesh, lengths, period, amp, alpha0, radius, seed, support_radius, freestream, cfl,
            max_iters, out, timing
        )
    }
}

/// Fully resolved run settings.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub motion: MotionCase,
    pub methods: Vec<Method>,
    pub range: HarmonicRange,
    pub mesh: [usize; 3],
    pub lengths: [f64; 3],
    pub freestream: Option<FreestreamConfig>,
    pub out: Option<PathBuf>,
    pub timing: bool,
}

impl RunConfig {
    pub fn resolve(o: Overrides) -> Result<Self> {
        let Some(case) = o.case.as_deref() else { bail!("no motion case given (use --case)") };
        let id: CaseId = case.parse()?;
        let mut kind = CaseKind::default_for(id);
        apply_motion_params(&mut kind, &o)?;
        let motion = MotionCase::new(kind, o.period.unwrap_or(1.0))?;

        let methods = match &o.methods {
            Some(list) => {
                let mut out = Vec::new();
                for m in list {
                    let m: Method = m.parse()?;
                    if !out.contains(&m) {
                        out.push(m);
                    }
                }
                out
            }
            None => Method::ALL.to_vec(),
        };
        if methods.is_empty() {
            bail!("method list is empty");
        }

        let freestream = if o.freestream.unwrap_or(false) {
            let mut cfg = FreestreamConfig::default();
            if let Some(c) = o.cfl {
                cfg.cfl = c;
            }
            if let Some(m) = o.max_iters {
                cfg.max_iterations = m;
            }
            Some(cfg)
        } else {
            if o.cfl.is_some() || o.max_iters.is_some() {
                bail!("--cfl and --max-iters need --freestream on");
            }
            None
        };

        Ok(RunConfig {
            motion,
            methods,
            range: o.n.unwrap_or(HarmonicRange { first: 1, last: 20 }),
            mesh: o.mesh.unwrap_or([10, 10, 10]),
            lengths: o.lengths.unwrap_or([3.2, 2.8, 2.4]),
            freestream,
            out: o.out,
            timing: o.timing.unwrap_or(false),
        })
    }
}

fn apply_motion_params(kind: &mut CaseKind, o: &Overrides) -> Result<()> {
    let id = kind.id();
    let reject = |flag: &str| -> Result<()> { bail!("--{flag} does not apply to {id}") };
    match kind {
        CaseKind::Case1 { amplitude } | CaseKind::RigidTranslation { amplitude } => {
            if let Some(a) = o.amp {
                *amplitude = a.per_axis();
            }
        }
        CaseKind::Case4 { amplitude, .. } => match o.amp {
            Some(Amplitude::Scalar(a)) => *amplitude = a,
            Some(Amplitude::Vector(_)) => bail!("case4 takes a single amplitude bound"),
            None => {}
        },
        _ if o.amp.is_some() => reject("amp")?,
        _ => {}
    }
    match kind {
        CaseKind::Case2 { alpha0 } | CaseKind::Case5 { alpha0, .. } | CaseKind::RigidRotation { alpha0 } => {
            if let Some(a) = o.alpha0 {
                *alpha0 = a;
            }
        }
        _ if o.alpha0.is_some() => reject("alpha0")?,
        _ => {}
    }
    match kind {
        CaseKind::Case3 { radius } => {
            if let Some(r) = o.radius {
                *radius = r;
            }
        }
        _ if o.radius.is_some() => reject("radius")?,
        _ => {}
    }
    match kind {
        CaseKind::Case4 { seed, .. } => {
            if let Some(s) = o.seed {
                *seed = s;
            }
        }
        _ if o.seed.is_some() => reject("seed")?,
        _ => {}
    }
    match kind {
        CaseKind::Case4 { support_radius, .. } | CaseKind::Case5 { support_radius, .. } => {
            if o.support_radius.is_some() {
                *support_radius = o.support_radius;
            }
        }
        _ if o.support_radius.is_some() => reject("support-radius")?,
        _ => {}
    }
    Ok(())
}
