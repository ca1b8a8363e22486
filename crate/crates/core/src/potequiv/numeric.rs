//! Floating-point cross-check for the exact decision procedure.
//!
//! Eigenvalues are located with an `f64` Durand-Kerner pass on each square-free factor and
//! then polished by Newton iteration in binary fixed point with a caller-chosen number of
//! bits. Ratios of eigenvalues are flagged as roots of unity when their modulus is within
//! `1e-20` of one and some power with exponent dividing the uniform bound returns to one.
//! The result is advisory and never feeds the exact verdicts.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{bounds, degree_bound, DegreeMode, SemisimpleClass};
use crate::algebra::arith::divisors;
use crate::algebra::RatPoly;
use crate::error::Result;

pub const DEFAULT_ORACLE_PRECISION: u32 = 192;
const MIN_PRECISION: u32 = 96;
/// Denominators above this are not searched.
const MAX_DENOMINATOR: u64 = 1_000_000;

#[derive(Clone, Debug)]
struct Fixed {
    bits: u32,
}

#[derive(Clone, Debug, PartialEq)]
struct Cx {
    re: BigInt,
    im: BigInt,
}

impl Fixed {
    fn from_rational(&self, q: &BigRational) -> BigInt {
        (q.numer() << self.bits as usize).div_floor(q.denom())
    }

    fn from_f64(&self, x: f64) -> BigInt {
        // exact conversion of the f64 value then scaling
        let q = BigRational::from_float(x).unwrap_or_else(BigRational::zero);
        self.from_rational(&q)
    }

    fn to_f64(&self, v: &BigInt) -> f64 {
        let shift = self.bits.saturating_sub(60);
        let top = (v >> shift as usize).to_f64().unwrap_or(f64::NAN);
        top / 2f64.powi((self.bits - shift) as i32)
    }

    fn one(&self) -> BigInt {
        BigInt::one() << self.bits as usize
    }

    fn mul(&self, a: &Cx, b: &Cx) -> Cx {
        Cx {
            re: (&a.re * &b.re - &a.im * &b.im) >> self.bits as usize,
            im: (&a.re * &b.im + &a.im * &b.re) >> self.bits as usize,
        }
    }

    fn sub(&self, a: &Cx, b: &Cx) -> Cx {
        Cx {
            re: &a.re - &b.re,
            im: &a.im - &b.im,
        }
    }

    /// `|a|^2` at scale `2^bits`.
    fn norm_sq(&self, a: &Cx) -> BigInt {
        (&a.re * &a.re + &a.im * &a.im) >> self.bits as usize
    }

    fn div(&self, a: &Cx, b: &Cx) -> Option<Cx> {
        let den = &b.re * &b.re + &b.im * &b.im;
        if den.is_zero() {
            return None;
        }
        let re = &a.re * &b.re + &a.im * &b.im;
        let im = &a.im * &b.re - &a.re * &b.im;
        Some(Cx {
            re: (re << self.bits as usize).div_floor(&den),
            im: (im << self.bits as usize).div_floor(&den),
        })
    }

    fn pow(&self, a: &Cx, mut e: u64) -> Cx {
        let mut result = Cx {
            re: self.one(),
            im: BigInt::zero(),
        };
        let mut base = a.clone();
        while e > 0 {
            if e & 1 == 1 {
                result = self.mul(&result, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        result
    }

    fn to_complex(&self, a: &Cx) -> (f64, f64) {
        (self.to_f64(&a.re), self.to_f64(&a.im))
    }

    /// `floor(tol * 2^bits)`
    fn tolerance(&self, numer: u64, denom_pow10: u32) -> BigInt {
        (BigInt::from(numer) << self.bits as usize) / BigInt::from(10u32).pow(denom_pow10)
    }
}

fn durand_kerner(coeffs: &[f64]) -> Vec<(f64, f64)> {
    // monic, lowest degree first
    let n = coeffs.len() - 1;
    let bound = 1.0 + coeffs[..n].iter().fold(0.0f64, |m, c| m.max(c.abs()));
    let mul = |a: (f64, f64), b: (f64, f64)| (a.0 * b.0 - a.1 * b.1, a.0 * b.1 + a.1 * b.0);
    let div = |a: (f64, f64), b: (f64, f64)| {
        let d = b.0 * b.0 + b.1 * b.1;
        ((a.0 * b.0 + a.1 * b.1) / d, (a.1 * b.0 - a.0 * b.1) / d)
    };
    let eval = |z: (f64, f64)| {
        coeffs
            .iter()
            .rev()
            .fold((0.0, 0.0), |acc, &c| {
                let m = mul(acc, z);
                (m.0 + c, m.1)
            })
    };
    let mut roots: Vec<(f64, f64)> = (0..n)
        .map(|k| {
            let angle = 2.0 * std::f64::consts::PI * k as f64 / n as f64 + 0.4;
            (bound * 0.9 * angle.cos(), bound * 0.9 * angle.sin())
        })
        .collect();
    for _ in 0..2000 {
        let mut delta = 0.0f64;
        for i in 0..n {
            let mut den = (1.0, 0.0);
            for j in 0..n {
                if i != j {
                    den = mul(den, (roots[i].0 - roots[j].0, roots[i].1 - roots[j].1));
                }
            }
            let step = div(eval(roots[i]), den);
            if step.0.is_finite() && step.1.is_finite() {
                roots[i] = (roots[i].0 - step.0, roots[i].1 - step.1);
                delta = delta.max(step.0.abs() + step.1.abs());
            }
        }
        if delta < 1e-14 * bound {
            break;
        }
    }
    roots
}

fn polish(fx: &Fixed, f: &RatPoly, start: (f64, f64)) -> Option<Cx> {
    let coeffs: Vec<BigInt> = f.coeffs().iter().map(|c| fx.from_rational(c)).collect();
    let dcoeffs: Vec<BigInt> = f.derivative().coeffs().iter().map(|c| fx.from_rational(c)).collect();
    let horner = |cs: &[BigInt], z: &Cx| {
        cs.iter().rev().fold(
            Cx {
                re: BigInt::zero(),
                im: BigInt::zero(),
            },
            |acc, c| {
                let m = fx.mul(&acc, z);
                Cx {
                    re: m.re + c,
                    im: m.im,
                }
            },
        )
    };
    let mut z = Cx {
        re: fx.from_f64(start.0),
        im: fx.from_f64(start.1),
    };
    let scale = 1.0f64.max(start.0.hypot(start.1));
    let converged_below = BigInt::one() << (fx.bits as usize / 2 + 8);
    let iterations = 8 + 2 * (32 - fx.bits.leading_zeros());
    for _ in 0..iterations {
        let step = fx.div(&horner(&coeffs, &z), &horner(&dcoeffs, &z))?;
        z = fx.sub(&z, &step);
        if step.re.abs() + step.im.abs() < converged_below.clone() * BigInt::from(scale.ceil() as u64) {
            // one more quadratic step doubles the accuracy past bits/2
            let last = fx.div(&horner(&coeffs, &z), &horner(&dcoeffs, &z))?;
            return Some(fx.sub(&z, &last));
        }
    }
    None
}

#[derive(Clone, Debug, PartialEq)]
pub struct RatioDiagnostic {
    /// Index into `alphas` / `betas` (distinct roots).
    pub alpha: usize,
    pub beta: usize,
    pub ratio: (f64, f64),
    pub unit_modulus: bool,
    /// Least `k` dividing the exponent bound with `ratio^k` within tolerance of one.
    pub order: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OracleVerdict {
    Equivalent { minimal_exponent: u64 },
    Inequivalent,
    Inconclusive(String),
}

#[derive(Clone, Debug, PartialEq)]
pub struct OracleReport {
    /// Distinct roots of `f` with multiplicities.
    pub alphas: Vec<((f64, f64), usize)>,
    pub betas: Vec<((f64, f64), usize)>,
    pub ratios: Vec<RatioDiagnostic>,
    pub verdict: OracleVerdict,
}

struct Roots {
    values: Vec<Cx>,
    multiplicity: Vec<usize>,
}

fn numeric_roots(fx: &Fixed, f: &RatPoly) -> std::result::Result<Roots, String> {
    let mut values = Vec::new();
    let mut multiplicity = Vec::new();
    for (h, mult) in f.squarefree_decomposition() {
        let approx: Vec<f64> = h
            .coeffs()
            .iter()
            .map(|c| c.to_f64().unwrap_or(f64::NAN))
            .collect();
        if approx.iter().any(|c| !c.is_finite()) {
            return Err("coefficients overflow f64 seeding".into());
        }
        for start in durand_kerner(&approx) {
            let z = polish(fx, &h, start).ok_or("Newton polishing did not converge")?;
            values.push(z);
            multiplicity.push(mult);
        }
    }
    // distinct roots must stay separated at half the working precision
    let sep = BigInt::one() << (fx.bits as usize / 2);
    for i in 0..values.len() {
        for j in 0..i {
            let d = fx.sub(&values[i], &values[j]);
            if d.re.abs() + d.im.abs() < sep {
                return Err("precision too low to separate roots".into());
            }
        }
    }
    Ok(Roots {
        values,
        multiplicity,
    })
}

/// Minimum over perfect matchings (with multiplicity) of the lcm of edge orders.
fn best_matching(
    alpha_mult: &[usize],
    beta_mult: &[usize],
    order: &[Vec<Option<u64>>],
) -> Option<u64> {
    let alphas: Vec<usize> = alpha_mult
        .iter()
        .enumerate()
        .flat_map(|(i, &m)| std::iter::repeat_n(i, m))
        .collect();
    let mut remaining = beta_mult.to_vec();
    fn go(
        pos: usize,
        alphas: &[usize],
        remaining: &mut [usize],
        order: &[Vec<Option<u64>>],
        acc: u64,
        best: &mut Option<u64>,
    ) {
        if best.is_some_and(|b| acc >= b) {
            return;
        }
        if pos == alphas.len() {
            *best = Some(acc);
            return;
        }
        for j in 0..remaining.len() {
            if remaining[j] == 0 {
                continue;
            }
            if let Some(k) = order[alphas[pos]][j] {
                remaining[j] -= 1;
                go(pos + 1, alphas, remaining, order, acc.lcm(&k), best);
                remaining[j] += 1;
            }
        }
    }
    let mut best = None;
    go(0, &alphas, &mut remaining, order, 1, &mut best);
    best
}

pub fn numeric_ratio_oracle(
    f: &SemisimpleClass,
    g: &SemisimpleClass,
    precision: u32,
) -> Result<OracleReport> {
    super::check_degrees(f, g)?;
    let inconclusive = |why: String| OracleReport {
        alphas: Vec::new(),
        betas: Vec::new(),
        ratios: Vec::new(),
        verdict: OracleVerdict::Inconclusive(why),
    };
    if precision < MIN_PRECISION {
        return Ok(inconclusive(format!(
            "precision {precision} bits cannot resolve a 1e-20 tolerance (need {MIN_PRECISION})"
        )));
    }
    let fx = Fixed { bits: precision };
    let (ra, rb) = match (numeric_roots(&fx, f.charpoly()), numeric_roots(&fx, g.charpoly())) {
        (Ok(a), Ok(b)) => (a, b),
        (Err(e), _) | (_, Err(e)) => return Ok(inconclusive(e)),
    };

    let degree = degree_bound(f, g, DegreeMode::Default);
    let bound = bounds::exponent_bound(degree);
    let denominators: Vec<u64> = match u64::try_from(&bound) {
        Ok(m) if m <= MAX_DENOMINATOR => divisors(m),
        _ => {
            return Ok(inconclusive(format!(
                "exponent bound {bound} exceeds the searchable denominator range"
            )))
        }
    };

    let one = Cx {
        re: fx.one(),
        im: BigInt::zero(),
    };
    let tol = fx.tolerance(1, 20);
    let mut ratios = Vec::new();
    let mut order = vec![vec![None; rb.values.len()]; ra.values.len()];
    for (i, a) in ra.values.iter().enumerate() {
        for (j, b) in rb.values.iter().enumerate() {
            let r = fx.div(a, b).expect("eigenvalues of GL_n elements are nonzero");
            let unit = (fx.norm_sq(&r) - fx.one()).abs() <= tol;
            let k = if unit {
                denominators.iter().copied().find(|&k| {
                    let d = fx.sub(&fx.pow(&r, k), &one);
                    d.re.abs() + d.im.abs() <= &tol * BigInt::from(k)
                })
            } else {
                None
            };
            order[i][j] = k;
            ratios.push(RatioDiagnostic {
                alpha: i,
                beta: j,
                ratio: fx.to_complex(&r),
                unit_modulus: unit,
                order: k,
            });
        }
    }
    let verdict = match best_matching(&ra.multiplicity, &rb.multiplicity, &order) {
        Some(m) => OracleVerdict::Equivalent { minimal_exponent: m },
        None => OracleVerdict::Inequivalent,
    };
    let pair = |r: &Roots| {
        r.values
            .iter()
            .map(|z| fx.to_complex(z))
            .zip(r.multiplicity.iter().copied())
            .collect()
    };
    Ok(OracleReport {
        alphas: pair(&ra),
        betas: pair(&rb),
        ratios,
        verdict,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn class(c: &[i64]) -> SemisimpleClass {
        SemisimpleClass::from_ints_desc(c).unwrap()
    }

    #[test]
    fn identical_gaussian_classes() {
        let f = class(&[1, 0, 1]);
        let rep = numeric_ratio_oracle(&f, &f, DEFAULT_ORACLE_PRECISION).unwrap();
        assert!(rep.ratios.iter().all(|r| r.unit_modulus && r.order.is_some()));
        assert_eq!(rep.verdict, OracleVerdict::Equivalent { minimal_exponent: 1 });
    }

    #[test]
    fn cm_inert_ratios_have_order_four() {
        let rep = numeric_ratio_oracle(&class(&[1, -14, 49]), &class(&[1, 0, 49]), 160).unwrap();
        assert_eq!(rep.alphas.len(), 1);
        assert_eq!(rep.alphas[0].1, 2);
        assert!(rep.ratios.iter().all(|r| r.order == Some(4)));
        assert_eq!(rep.verdict, OracleVerdict::Equivalent { minimal_exponent: 4 });
    }

    #[test]
    fn gaussian_split_ratio_has_no_rational_angle() {
        let rep = numeric_ratio_oracle(&class(&[1, -10, 25]), &class(&[1, 6, 25]), 192).unwrap();
        assert!(rep.ratios.iter().all(|r| r.unit_modulus && r.order.is_none()));
        assert_eq!(rep.verdict, OracleVerdict::Inequivalent);
    }

    #[test]
    fn low_precision_is_inconclusive() {
        let rep = numeric_ratio_oracle(&class(&[1, 0, 1]), &class(&[1, 0, 1]), 53).unwrap();
        assert!(matches!(rep.verdict, OracleVerdict::Inconclusive(_)));
    }
}
