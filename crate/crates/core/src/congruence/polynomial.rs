//! Bivariate polynomials `h(x, y)` of degree at most 6 for graph surfaces.

use std::fmt;

use crate::error::{Error, Result};

pub const MAX_DEGREE: u32 = 6;

/// Sum of terms `c x^i y^j`.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial {
    terms: Vec<(f64, u32, u32)>,
}

impl Polynomial {
    pub fn new(terms: Vec<(f64, u32, u32)>) -> Result<Self> {
        let p = Self { terms };
        if p.degree() > MAX_DEGREE {
            return Err(Error::InvalidArgument(format!("polynomial degree {} exceeds {MAX_DEGREE}", p.degree())));
        }
        if p.terms.iter().any(|t| !t.0.is_finite()) {
            return Err(Error::InvalidArgument("non-finite polynomial coefficient".into()));
        }
        Ok(p)
    }

    /// Parse expressions such as `0.5*x^2 + 0.5*y^2 - 0.1*x*y^3`.
    pub fn parse(text: &str) -> Result<Self> {
        let bad = |msg: &str| Error::Parse(format!("polynomial '{text}': {msg}"));
        let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(bad("empty"));
        }
        // Split at + and - that are not part of an exponent in a number.
        let mut pieces = Vec::new();
        let mut cur = String::new();
        let mut prev: Option<char> = None;
        let mut before: Option<char> = None;
        for ch in compact.chars() {
            let exp_sign = matches!(prev, Some('e' | 'E')) && before.is_some_and(|c| c.is_ascii_digit() || c == '.');
            if (ch == '+' || ch == '-') && !cur.is_empty() && !exp_sign && prev != Some('+') && prev != Some('-') {
                pieces.push(std::mem::take(&mut cur));
            }
            cur.push(ch);
            before = prev;
            prev = Some(ch);
        }
        pieces.push(cur);

        let mut terms = Vec::new();
        for piece in pieces {
            let (sign, body) = match piece.strip_prefix('-') {
                Some(rest) => (-1.0, rest),
                None => (1.0, piece.strip_prefix('+').unwrap_or(&piece)),
            };
            if body.is_empty() {
                return Err(bad("dangling sign"));
            }
            let (mut coef, mut i, mut j) = (sign, 0u32, 0u32);
            for factor in body.split('*') {
                let (base, pow) = match factor.split_once('^') {
                    Some((b, p)) => (b, p.parse::<u32>().map_err(|_| bad("bad exponent"))?),
                    None => (factor, 1),
                };
                match base {
                    "x" => i += pow,
                    "y" => j += pow,
                    num => coef *= num.parse::<f64>().map_err(|_| bad(&format!("bad factor '{factor}'")))?.powi(pow as i32),
                }
            }
            terms.push((coef, i, j));
        }
        Self::new(terms)
    }

    pub fn degree(&self) -> u32 {
        self.terms.iter().filter(|t| t.0 != 0.0).map(|t| t.1 + t.2).max().unwrap_or(0)
    }

    pub fn eval(&self, x: f64, y: f64) -> f64 {
        self.terms.iter().map(|&(c, i, j)| c * x.powi(i as i32) * y.powi(j as i32)).sum()
    }

    pub fn gradient(&self, x: f64, y: f64) -> (f64, f64) {
        self.terms.iter().fold((0.0, 0.0), |(gx, gy), &(c, i, j)| {
            let dx = if i > 0 { c * i as f64 * x.powi(i as i32 - 1) * y.powi(j as i32) } else { 0.0 };
            let dy = if j > 0 { c * j as f64 * x.powi(i as i32) * y.powi(j as i32 - 1) } else { 0.0 };
            (gx + dx, gy + dy)
        })
    }

    /// Second derivatives `(h_xx, h_xy, h_yy)`.
    pub fn hessian(&self, x: f64, y: f64) -> (f64, f64, f64) {
        let mono = |c: f64, i: u32, j: u32, di: u32, dj: u32| {
            if i < di || j < dj {
                return 0.0;
            }
            let fall = |n: u32, k: u32| (0..k).map(|m| (n - m) as f64).product::<f64>();
            c * fall(i, di) * fall(j, dj) * x.powi((i - di) as i32) * y.powi((j - dj) as i32)
        };
        self.terms.iter().fold((0.0, 0.0, 0.0), |(a, b, d), &(c, i, j)| {
            (a + mono(c, i, j, 2, 0), b + mono(c, i, j, 1, 1), d + mono(c, i, j, 0, 2))
        })
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, &(c, i, j)) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{c}")?;
            for (v, p) in [("x", i), ("y", j)] {
                if p > 0 {
                    write!(f, "*{v}^{p}")?;
                }
            }
        }
        Ok(())
    }
}
