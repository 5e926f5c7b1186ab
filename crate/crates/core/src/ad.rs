//! Amplitude damping: closed-form yields of the Hamming-weight encodings and the
//! reverse coherent information they are compared against.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::channels::check_probability;
use crate::error::{domain, DistillError, Result};
use crate::pauli::hb;

/// Bracket width at which the golden-section search stops.
pub const RCI_BRACKET: f64 = 1e-10;

const INV_PHI: f64 = 0.618_033_988_749_894_8;

/// Maximizes a unimodal `f` on `[lo, hi]` by golden-section search.
///
/// The endpoints are compared against the interior optimum so that monotone
/// objectives are handled as well. Returns `(argmax, max)`.
pub fn golden_section_max<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, tol: f64) -> (f64, f64) {
    let (mut a, mut b) = (lo, hi);
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while (b - a).abs() > tol {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    let mid = 0.5 * (a + b);
    [(mid, f(mid)), (lo, f(lo)), (hi, f(hi))]
        .into_iter()
        .fold((mid, f64::NEG_INFINITY), |best, cand| if cand.1 > best.1 { cand } else { best })
}

/// `max_{0<=x<=1} h_b(x) - h_b(gamma x)`.
pub fn rci_amp_damp(gamma: f64) -> Result<f64> {
    check_probability("gamma", gamma)?;
    let (_, v) = golden_section_max(|x| hb(x) - hb(gamma * x), 0.0, 1.0, RCI_BRACKET);
    Ok(v.max(0.0))
}

pub fn yield_dual_rail(gamma: f64) -> Result<f64> {
    check_probability("gamma", gamma)?;
    Ok((1.0 - gamma) / 2.0)
}

pub fn yield_triple_rail(gamma: f64) -> Result<f64> {
    check_probability("gamma", gamma)?;
    Ok((1.0 - gamma) * 3f64.log2() / 3.0)
}

/// `(1-gamma) log2(n) / n`.
pub fn yield_hamming1(n: u64, gamma: f64) -> Result<f64> {
    if n < 1 {
        return Err(domain("Hamming-weight-1 encoding needs n >= 1"));
    }
    check_probability("gamma", gamma)?;
    let nf = n as f64;
    Ok((1.0 - gamma) * nf.log2() / nf)
}

/// No-damping branch carries `log2 C(n,2)` ebits, the single-damping branch
/// `log2((n-1)/2)` through the reverse-coherent protocol.
pub fn yield_hamming2(n: u64, gamma: f64) -> Result<f64> {
    if n < 3 {
        return Err(domain("Hamming-weight-2 encoding needs n >= 3"));
    }
    check_probability("gamma", gamma)?;
    let nf = n as f64;
    let keep = 1.0 - gamma;
    let clean = keep * keep * (nf * (nf - 1.0) / 2.0).log2();
    let single = 2.0 * gamma * keep * ((nf - 1.0) / 2.0).log2();
    Ok((clean + single) / nf)
}

/// The `n = 4` variant that recovers a Bell pair with probability 2/3 after one damping event.
pub fn yield_hamming2_star4(gamma: f64) -> Result<f64> {
    check_probability("gamma", gamma)?;
    let keep = 1.0 - gamma;
    Ok((keep * keep * 6f64.log2() + 2.0 * gamma * keep * (2.0 / 3.0)) / 4.0)
}

/// `n` in `1..=n_max` maximizing `log2(n)/n`; the smallest on ties.
pub fn hamming1_best_block(n_max: u64) -> u64 {
    (1..=n_max.max(1))
        .map(|n| (n, (n as f64).log2() / n as f64))
        .fold((1, f64::NEG_INFINITY), |best, (n, v)| if v > best.1 { (n, v) } else { best })
        .0
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ADScheme {
    Rci,
    DualRail,
    TripleRail,
    Hamming1(u64),
    Hamming2(u64),
    Hamming2Star4,
}

impl ADScheme {
    pub fn evaluate(self, gamma: f64) -> Result<f64> {
        match self {
            ADScheme::Rci => rci_amp_damp(gamma),
            ADScheme::DualRail => yield_dual_rail(gamma),
            ADScheme::TripleRail => yield_triple_rail(gamma),
            ADScheme::Hamming1(n) => yield_hamming1(n, gamma),
            ADScheme::Hamming2(n) => yield_hamming2(n, gamma),
            ADScheme::Hamming2Star4 => yield_hamming2_star4(gamma),
        }
    }

    /// Schemes `best_ad_yield` compares for a given block-size bound.
    pub fn catalogue(n_max: u64) -> Vec<ADScheme> {
        let mut v = vec![ADScheme::Rci, ADScheme::DualRail, ADScheme::TripleRail];
        v.extend((1..=n_max).map(ADScheme::Hamming1));
        v.extend((3..=n_max).map(ADScheme::Hamming2));
        if n_max >= 4 {
            v.push(ADScheme::Hamming2Star4);
        }
        v
    }
}

impl fmt::Display for ADScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ADScheme::Rci => write!(f, "RCI"),
            ADScheme::DualRail => write!(f, "DualRail"),
            ADScheme::TripleRail => write!(f, "TripleRail"),
            ADScheme::Hamming1(n) => write!(f, "H1{n}"),
            ADScheme::Hamming2(n) => write!(f, "H2{n}"),
            ADScheme::Hamming2Star4 => write!(f, "H24ast"),
        }
    }
}

impl FromStr for ADScheme {
    type Err = DistillError;

    /// Accepts the column names produced by `Display` (`RCI`, `DualRail`,
    /// `TripleRail`, `H1<n>`, `H2<n>`, `H24ast`), case-insensitively.
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        let lower = t.to_ascii_lowercase();
        let parse_n = |rest: &str| {
            rest.parse::<u64>().map_err(|_| domain(format!("bad block size in scheme '{t}'")))
        };
        match lower.as_str() {
            "rci" => Ok(ADScheme::Rci),
            "dualrail" | "dual" => Ok(ADScheme::DualRail),
            "triplerail" | "triple" => Ok(ADScheme::TripleRail),
            "h24ast" | "h24*" => Ok(ADScheme::Hamming2Star4),
            _ if lower.starts_with("h1") => {
                let n = parse_n(&lower[2..])?;
                if n < 1 {
                    return Err(domain("H1 block size must be >= 1"));
                }
                Ok(ADScheme::Hamming1(n))
            }
            _ if lower.starts_with("h2") => {
                let n = parse_n(&lower[2..])?;
                if n < 3 {
                    return Err(domain("H2 block size must be >= 3"));
                }
                Ok(ADScheme::Hamming2(n))
            }
            _ => Err(domain(format!("unknown amplitude-damping scheme '{t}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ADYieldReport {
    pub gamma: f64,
    pub scheme: ADScheme,
    #[serde(rename = "yield")]
    pub yield_: f64,
}

/// Best yield over the scheme catalogue; earlier schemes win ties.
pub fn best_ad_yield(gamma: f64, n_max: u64) -> Result<ADYieldReport> {
    if n_max < 3 {
        return Err(domain("n_max must be at least 3"));
    }
    let mut best = ADYieldReport { gamma, scheme: ADScheme::Rci, yield_: f64::NEG_INFINITY };
    for scheme in ADScheme::catalogue(n_max) {
        let y = scheme.evaluate(gamma)?;
        if y > best.yield_ {
            best = ADYieldReport { gamma, scheme, yield_: y };
        }
    }
    Ok(best)
}

/// Maximal runs of consecutive grid points where `diff(x) > tol`, as `(first, last)` x-values.
pub fn advantage_intervals<F>(grid: &[f64], diff: F, tol: f64) -> Result<Vec<(f64, f64)>>
where
    F: Fn(f64) -> Result<f64>,
{
    let mut out = Vec::new();
    let mut open: Option<(f64, f64)> = None;
    for &x in grid {
        if diff(x)? > tol {
            open = Some(match open {
                Some((a, _)) => (a, x),
                None => (x, x),
            });
        } else if let Some(iv) = open.take() {
            out.push(iv);
        }
    }
    out.extend(open);
    Ok(out)
}

/// `count` evenly spaced points from `lo` to `hi` inclusive.
pub fn uniform_grid(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..count)
            .map(|i| if i + 1 == count { hi } else { lo + (hi - lo) * i as f64 / (count - 1) as f64 })
            .collect(),
    }
}
