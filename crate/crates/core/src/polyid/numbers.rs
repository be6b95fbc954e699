use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{invalid, Error, Result};

/// Largest index accepted by [`numbers`]; coefficients grow super-exponentially.
pub const MAX_INDEX: usize = 200;

const MAX_MULTINOMIAL_ORDER: usize = 6;
const MAX_MULTINOMIAL_INDEX: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    Bernoulli,
    Euler,
    Genocchi,
}

impl Family {
    pub const ALL: [Family; 3] = [Family::Bernoulli, Family::Euler, Family::Genocchi];

    pub fn name(self) -> &'static str {
        match self {
            Family::Bernoulli => "bernoulli",
            Family::Euler => "euler",
            Family::Genocchi => "genocchi",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "bernoulli" | "b" => Ok(Family::Bernoulli),
            "euler" | "e" => Ok(Family::Euler),
            "genocchi" | "g" => Ok(Family::Genocchi),
            _ => invalid(format!("unknown family `{s}` (expected bernoulli, euler or genocchi)")),
        }
    }
}

/// `c^{(l)}_0, …, c^{(l)}_{m_max}` for one family and order.
#[derive(Debug, Clone, PartialEq)]
pub struct RationalSeq {
    pub family: Family,
    pub order: usize,
    pub values: Vec<BigRational>,
}

pub(crate) fn binomial_row(n: usize) -> Vec<BigInt> {
    let mut row = vec![BigInt::one(); n + 1];
    for k in 1..n {
        row[k] = &row[k - 1] * BigInt::from(n - k + 1) / BigInt::from(k);
    }
    row
}

fn ratio(n: BigInt) -> BigRational {
    BigRational::from_integer(n)
}

fn first_order(family: Family, m_max: usize) -> Vec<BigRational> {
    let mut c: Vec<BigRational> = Vec::with_capacity(m_max + 1);
    for n in 0..=m_max {
        let value = match family {
            // Σ_{k≤n} C(n+1,k) B_k = δ_{n0}
            Family::Bernoulli => {
                if n == 0 {
                    BigRational::one()
                } else {
                    let row = binomial_row(n + 1);
                    let s = (0..n).fold(BigRational::zero(), |acc, k| {
                        acc + ratio(row[k].clone()) * &c[k]
                    });
                    -s / ratio(BigInt::from(n + 1))
                }
            }
            // E_n + Σ_{k≤n} C(n,k) E_k = 2 δ_{n0}
            Family::Euler => {
                if n == 0 {
                    BigRational::one()
                } else {
                    let row = binomial_row(n);
                    let s = (0..n).fold(BigRational::zero(), |acc, k| {
                        acc + ratio(row[k].clone()) * &c[k]
                    });
                    -s / ratio(BigInt::from(2))
                }
            }
            // G_n + Σ_{k≤n} C(n,k) G_k = 2 δ_{n1}
            Family::Genocchi => {
                if n == 0 {
                    BigRational::zero()
                } else {
                    let row = binomial_row(n);
                    let s = (0..n).fold(BigRational::zero(), |acc, k| {
                        acc + ratio(row[k].clone()) * &c[k]
                    });
                    let rhs = if n == 1 { ratio(BigInt::from(2)) } else { BigRational::zero() };
                    (rhs - s) / ratio(BigInt::from(2))
                }
            }
        };
        c.push(value);
    }
    c
}

/// Numbers of `family` at order `l` for indices `0..=m_max`.
///
/// Order one uses the family recurrence; higher orders take binomial
/// convolutions `c^{(l)}_m = Σ_j C(m,j) c^{(l-1)}_j c_{m-j}`.
pub fn numbers(family: Family, l: usize, m_max: usize) -> Result<RationalSeq> {
    if l == 0 {
        return invalid("order l must be at least 1");
    }
    if m_max > MAX_INDEX {
        return Err(Error::Resource(format!(
            "index {m_max} exceeds the limit of {MAX_INDEX}"
        )));
    }
    let base = first_order(family, m_max);
    let rows: Vec<Vec<BigInt>> = (0..=m_max).map(binomial_row).collect();
    let mut cur = base.clone();
    for _ in 1..l {
        cur = (0..=m_max)
            .map(|m| {
                (0..=m).fold(BigRational::zero(), |acc, j| {
                    acc + ratio(rows[m][j].clone()) * &cur[j] * &base[m - j]
                })
            })
            .collect();
    }
    Ok(RationalSeq {
        family,
        order: l,
        values: cur,
    })
}

/// `Σ_{s_1+…+s_l=m} (m; s_1,…,s_l) Π c_{s_j}` by direct enumeration of
/// compositions. Independent of the convolution used by [`numbers`].
pub fn higher_order_multinomial(family: Family, l: usize, m: usize) -> Result<BigRational> {
    if l == 0 {
        return invalid("order l must be at least 1");
    }
    if l > MAX_MULTINOMIAL_ORDER || m > MAX_MULTINOMIAL_INDEX {
        return Err(Error::Resource(format!(
            "enumeration limited to l ≤ {MAX_MULTINOMIAL_ORDER}, m ≤ {MAX_MULTINOMIAL_INDEX}"
        )));
    }
    let c = first_order(family, m);
    let fact: Vec<BigInt> = (0..=m)
        .scan(BigInt::one(), |acc, i| {
            if i > 0 {
                *acc *= BigInt::from(i);
            }
            Some(acc.clone())
        })
        .collect();
    let mut parts = vec![0usize; l];
    let mut total = BigRational::zero();
    enumerate(&mut parts, 0, m, &mut |parts| {
        let denom = parts.iter().fold(BigInt::one(), |acc, &s| acc * &fact[s]);
        let coeff = BigRational::new(fact[m].clone(), denom);
        total += parts.iter().fold(coeff, |acc, &s| acc * &c[s]);
    });
    Ok(total)
}

fn enumerate(parts: &mut [usize], i: usize, left: usize, visit: &mut impl FnMut(&[usize])) {
    if i + 1 == parts.len() {
        parts[i] = left;
        visit(parts);
        return;
    }
    for s in 0..=left {
        parts[i] = s;
        enumerate(parts, i + 1, left - s, visit);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn first_values() {
        let b = numbers(Family::Bernoulli, 1, 6).unwrap().values;
        assert_eq!(b, vec![r(1, 1), r(-1, 2), r(1, 6), r(0, 1), r(-1, 30), r(0, 1), r(1, 42)]);
        let e = numbers(Family::Euler, 1, 5).unwrap().values;
        assert_eq!(e, vec![r(1, 1), r(-1, 2), r(0, 1), r(1, 4), r(0, 1), r(-1, 2)]);
        let g = numbers(Family::Genocchi, 1, 6).unwrap().values;
        assert_eq!(g, vec![r(0, 1), r(1, 1), r(-1, 1), r(0, 1), r(1, 1), r(0, 1), r(-3, 1)]);
    }

    #[test]
    fn second_order_bernoulli() {
        let b2 = numbers(Family::Bernoulli, 2, 2).unwrap().values;
        assert_eq!(b2[1], r(-1, 1));
        assert_eq!(b2[2], r(5, 6));
        assert_eq!(higher_order_multinomial(Family::Bernoulli, 2, 2).unwrap(), r(5, 6));
    }

    #[test]
    fn genocchi_from_bernoulli() {
        let b = numbers(Family::Bernoulli, 1, 20).unwrap().values;
        let g = numbers(Family::Genocchi, 1, 20).unwrap().values;
        for n in 0..=20u32 {
            let two_n = BigInt::from(2).pow(n);
            let want = ratio(BigInt::from(2) * (BigInt::one() - two_n)) * &b[n as usize];
            assert_eq!(g[n as usize], want, "n={n}");
        }
    }

    #[test]
    fn odd_bernoulli_vanish() {
        let b = numbers(Family::Bernoulli, 1, 60).unwrap().values;
        for k in 1..30 {
            assert!(b[2 * k + 1].is_zero());
        }
                let want = BigRational::new(
            "-1215233140483755572040304994079820246041491".parse().unwrap(),
            BigInt::from(56786730),
        );
        assert_eq!(b[60], want);
    }

    #[test]
    fn guards() {
        assert!(matches!(numbers(Family::Euler, 1, 201), Err(Error::Resource(_))));
        assert!(numbers(Family::Euler, 0, 3).is_err());
        assert!(matches!(
            higher_order_multinomial(Family::Euler, 7, 3),
            Err(Error::Resource(_))
        ));
        assert!(numbers(Family::Bernoulli, 1, MAX_INDEX).is_ok());
    }

    #[test]
    fn multinomial_trivia() {
        for fam in Family::ALL {
            let c = numbers(fam, 1, 8).unwrap().values;
            assert_eq!(higher_order_multinomial(fam, 1, 8).unwrap(), c[8]);
            let c0 = &c[0];
            assert_eq!(higher_order_multinomial(fam, 3, 0).unwrap(), c0 * c0 * c0);
        }
    }

    #[test]
    fn family_parse() {
        assert_eq!("Euler".parse::<Family>().unwrap(), Family::Euler);
        assert!("cat".parse::<Family>().is_err());
    }
}
